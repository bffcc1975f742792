//! Transplanting one function into disjoint blocks: each term copies the
//! source onto one block of the geometric partition, ramps tie it to zero
//! at the block edges, and the sup norm is preserved exactly. The depth at
//! which blocks stay representable depends on the interval: partition
//! points accumulate at the right endpoint, and on [0, 1] they collide in
//! f64 before block 19, while on [-1, 0] they stay exact far deeper.

use amwkit::{default_partition, transplant_sequence, Interval, RealFn};

fn main() -> amwkit::Result<()> {
    let iv = Interval::unit();
    let partition = default_partition(iv);

    println!("first partition points on [0, 1]:");
    for k in 1..=7u64 {
        println!("  alpha_{k} = {}", partition.alpha(k));
    }

    let f = RealFn::power(iv, 2.0)?;
    let u = transplant_sequence(&partition, &f)?;

    println!("\nblocks of the transplant of x^2:");
    for n in 1..=4u64 {
        let term = u.term(n)?;
        let p1 = partition.alpha(3 * n - 2);
        let p2 = partition.alpha(3 * n - 1);
        let p3 = partition.alpha(3 * n);
        let p4 = partition.alpha(3 * n + 1);
        println!("  block {n}: support [{p1:.8}, {p4:.8}]");
        println!(
            "    copy starts at value {} (source left end {})",
            term.eval(p2)?,
            f.eval(iv.lo())?
        );
        println!(
            "    copy ends at value   {} (source right end {})",
            term.eval(p3)?,
            f.eval(iv.hi())?
        );
        let norm = u.term_norm(n).unwrap();
        println!(
            "    term norm {} = source norm {}",
            norm.lower,
            f.sup_norm().lower
        );
    }

    println!("\nrepresentability:");
    println!("  [0, 1], 18 blocks: {}", verdict(partition.validate(18)));
    println!("  [0, 1], 20 blocks: {}", verdict(partition.validate(20)));
    let neg = default_partition(Interval::new(-1.0, 0.0)?);
    println!("  [-1, 0], 50 blocks: {}", verdict(neg.validate(50)));
    Ok(())
}

fn verdict(r: amwkit::Result<()>) -> String {
    match r {
        Ok(()) => "ok".into(),
        Err(e) => format!("rejected ({e})"),
    }
}
