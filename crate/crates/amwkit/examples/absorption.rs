//! Perturbing finitely many terms cannot create or destroy the properties:
//! adding a finitely supported sequence leaves every certificate leg
//! intact, with a note recording the prefix the perturbation lives in.

use amwkit::series::{c00_perturb, certify_amw};
use amwkit::{classic_example, FnSeq, Interval, RealFn};

fn main() -> amwkit::Result<()> {
    let iv = Interval::unit();
    let f = classic_example();
    let g = FnSeq::finite(
        iv,
        vec![
            RealFn::constant(iv, 0.25),
            RealFn::affine(iv, 1.0, -0.5),
            RealFn::power(iv, 3.0)?,
        ],
    )?;

    let perturbed = c00_perturb(&f, &g)?;

    let before = certify_amw(&f, None);
    let after = certify_amw(&perturbed, None);

    println!("before: {}", before.verdict());
    println!("after:  {}", after.verdict());

    println!("\nperturbed certificate legs:");
    println!("  absolute:   {:?}", after.absolute);
    println!("  uniform:    {:?}", after.uniform);
    println!("  divergence: {:?}", after.divergence);

    println!("\nterm values at x = 0.6:");
    for n in 1..=5u64 {
        println!(
            "  n = {n}: original {:+.6}, perturbed {:+.6}",
            f.term(n)?.eval(0.6)?,
            perturbed.term(n)?.eval(0.6)?
        );
    }
    Ok(())
}
