//! A scalar-basis algebra over one nonnegative transplant: each generator
//! scales the same base sequence by a reciprocal log power. Monomials
//! evaluate at the points where the base attains its norm level to
//! products of log powers, so the slowest surviving decay exponent
//! certifies divergence. Weights that cancel exactly leave the element
//! degenerate, and the certificate says so.

use amwkit::algebra::{build_scalar_algebra, witness_identity_check};
use amwkit::poly::{Poly, PolyNoConst};
use amwkit::{default_partition, transplant_sequence, Interval, RealFn, ScalarSeq};

fn main() -> amwkit::Result<()> {
    let iv = Interval::new(-1.0, 0.0)?;
    let u = transplant_sequence(&default_partition(iv), &RealFn::power(iv, 2.0)?)?;
    let basis = vec![
        ScalarSeq::make_logpower(1.0)?,
        ScalarSeq::make_logpower(2.0)?,
    ];
    let algebra = build_scalar_algebra(&basis, &u)?;
    println!("common norm level: {}", algebra.level);

    let product = PolyNoConst::new(Poly::var(2, 0).mul(&Poly::var(2, 1)))?;
    let e = algebra.element(&product)?;
    println!("\nelement x1*x2:");
    for (exp, w) in e.witness_terms.as_ref().unwrap() {
        println!("  witness values carry {w} / ln^{exp}(n+1)");
    }
    let report = witness_identity_check(&algebra, &e, 20);
    println!(
        "  witness identity over {} indices, max deviation {:.3e}",
        report.checked.len(),
        report.max_deviation
    );
    println!("  certificate: {}", algebra.certify(&e).verdict());

    // Both monomials evaluate to 1/ln^2 with weight 1 at the witness
    // points, so the difference cancels identically there.
    let cancelling = PolyNoConst::new(Poly::var(2, 0).pow(2).sub(&Poly::var(2, 1)))?;
    let e = algebra.element(&cancelling)?;
    println!("\nelement x1^2 - x2:");
    println!("  degenerate: {}", e.degenerate);
    let cert = algebra.certify(&e);
    println!("  certificate: {}", cert.verdict());
    for note in &cert.notes {
        println!("  note: {note}");
    }
    Ok(())
}
