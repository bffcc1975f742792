//! A generator algebra over shifted transplants: inputs are normalized so
//! each block entry value is exactly 1 or 2, polynomials in the generators
//! stay blockwise supported, and their values at the block entry points
//! reduce to a univariate polynomial in the scalars. A nonzero reduction
//! certifies divergence of the norm series; a cancelling reduction is
//! surfaced as degenerate, not affirmed. Run on [-1, 0], where partition
//! points stay exactly representable to depth 20 and beyond.

use amwkit::algebra::{build_function_algebra, entry_identity_check, freeness_check};
use amwkit::poly::{Poly, PolyNoConst};
use amwkit::rng::{Lcg, DEFAULT_SEED};
use amwkit::{default_partition, Interval, RealFn, ScalarSeq};

fn main() -> amwkit::Result<()> {
    let iv = Interval::new(-1.0, 0.0)?;
    let partition = default_partition(iv);
    let scalars = ScalarSeq::make_logpower(1.0)?;
    let inputs = vec![RealFn::power(iv, 1.0)?, RealFn::exp(iv, 1.0)?];

    let algebra = build_function_algebra(&partition, &scalars, &inputs)?;
    for (i, base) in algebra.bases.iter().enumerate() {
        println!(
            "input {i}: gamma = {}, entry value delta = {}, shifted norm in [{:.6}, {:.6}]",
            base.gamma, base.delta, base.shifted_norm.lower, base.shifted_norm.upper
        );
    }

    let square = PolyNoConst::new(Poly::var(2, 0).pow(2))?;
    let e = algebra.element(&square)?;
    println!(
        "\nelement x1^2: entry polynomial {}",
        e.entry_poly.as_ref().unwrap()
    );
    let report = entry_identity_check(&algebra, &e, 20);
    println!(
        "entry identity checked for {} indices, max deviation {:.3e}",
        report.checked.len(),
        report.max_deviation
    );
    let cert = algebra.certify(&e);
    println!("certificate: {}", cert.verdict());

    let product = PolyNoConst::new(Poly::var(2, 0).mul(&Poly::var(2, 1)))?;
    let e = algebra.element(&product)?;
    let cert = algebra.certify(&e);
    println!(
        "\nelement x1*x2: entry polynomial {}, certificate: {}",
        e.entry_poly.as_ref().unwrap(),
        cert.verdict()
    );

    let mut rng = Lcg::new(DEFAULT_SEED);
    let polys: Vec<PolyNoConst> = (0..25)
        .map(|_| amwkit::poly::seeded_poly(&mut rng, 2, 3))
        .collect();
    let freeness = freeness_check(&algebra, &polys, 17)?;
    println!(
        "\nfreeness: witnesses found for {} of {} seeded polynomials",
        freeness.rows.iter().filter(|r| r.witness.is_some()).count(),
        freeness.rows.len()
    );
    Ok(())
}
