//! Three certifications of scaled transplant families, one per outcome:
//! harmonic scaling is affirmed, square-summable scaling fails divergence
//! (the sum of norms converges, so the classical majorant test applies),
//! and constant scaling fails uniform convergence (the tails never shrink).

use amwkit::series::certify_amw;
use amwkit::{default_partition, transplant_sequence, FnSeq, Interval, RealFn, ScalarSeq};

fn main() -> amwkit::Result<()> {
    let iv = Interval::unit();
    let u = transplant_sequence(&default_partition(iv), &RealFn::power(iv, 1.0)?)?;

    let cases = [
        ("a_n = 1/n", ScalarSeq::make_power(1.0)?),
        ("a_n = 1/n^2", ScalarSeq::make_power(2.0)?),
        ("a_n = 1", ScalarSeq::constant(1.0)),
    ];

    for (label, scalars) in cases {
        let scaled = FnSeq::scaled(&scalars, &u);
        let cert = certify_amw(&scaled, Some((&scalars, &u)));
        println!("{label}: {}", cert.verdict());
        println!("  absolute:   {}", leg(cert.absolute.holds()));
        println!("  uniform:    {}", leg(cert.uniform.holds()));
        println!("  divergence: {}", leg(cert.divergence.holds()));
        for w in &cert.sanity.warnings {
            println!("  warning: {w}");
        }
        println!();
    }
    Ok(())
}

fn leg(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "does not hold"
    }
}
