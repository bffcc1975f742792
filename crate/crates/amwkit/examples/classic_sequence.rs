//! The counterexample bumps: each term has sup norm exactly 1/n, so the
//! series of norms diverges like ln N, yet at every point at most one term
//! is nonzero, so the function series converges absolutely and uniformly.

use amwkit::cli::{certificate_value, render_json};
use amwkit::series::{partial_sum_at, tail_sup_disjoint};
use amwkit::{certify_amw, classic_example};

fn main() -> amwkit::Result<()> {
    let f = classic_example();

    println!("term norms (exact enclosures):");
    for n in 1..=8u64 {
        let enc = f.term_norm(n).unwrap();
        println!(
            "  ||f_{n}|| = {:<10.8} width {:.1e}",
            enc.lower,
            enc.upper - enc.lower
        );
    }

    let sum: f64 = (1..=10_000u64)
        .map(|n| f.term_norm(n).unwrap().estimate())
        .sum();
    let predicted = (10_000f64).ln() + 0.577_215_664_9;
    println!("\nsum of norms to N = 10^4: {sum:.10}");
    println!("ln(10^4) + gamma:         {predicted:.10}");

    let tail = tail_sup_disjoint(&f, 100, 20)?;
    println!(
        "\ntail sup over n >= 100: {} (exact: {})",
        tail.lower, tail.exact
    );

    let x = 0.3;
    println!("partial sum of 50 terms at x = {x}: {:.10}", partial_sum_at(&f, 50, x)?);

    let cert = certify_amw(&f, None);
    println!("\ncertificate:");
    print!("{}", render_json(&certificate_value(&cert)));
    Ok(())
}
