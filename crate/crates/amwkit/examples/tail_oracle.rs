//! The tail-sup identity for scaled disjoint families: the certified tail
//! sup of the scaled series equals the termwise maximum of |a_n| times the
//! term norm, computed independently. Null scalars drive the tails to
//! zero; scalars bounded away from zero force a positive floor, which is
//! exactly how uniform convergence fails.

use amwkit::series::uniform_convergence_oracle;
use amwkit::{default_partition, transplant_sequence, Interval, RealFn, ScalarSeq};

fn main() -> amwkit::Result<()> {
    let iv = Interval::unit();
    let u = transplant_sequence(&default_partition(iv), &RealFn::power(iv, 1.0)?)?;
    let starts = [10u64, 100, 1_000];

    let harmonic = ScalarSeq::make_power(1.0)?;
    let report = uniform_convergence_oracle(&u, &harmonic, &starts)?;
    println!("a_n = 1/n (null):");
    for row in &report.rows {
        println!(
            "  N = {:>4}: tail sup {:.6e}, termwise max {:.6e}, agree: {}",
            row.n_start, row.tail_sup, row.termwise_max, row.agree
        );
    }
    println!("  all agree: {}", report.all_agree);

    let ones = ScalarSeq::constant(1.0);
    let report = uniform_convergence_oracle(&u, &ones, &starts)?;
    println!("\na_n = 1 (not null):");
    for row in &report.rows {
        println!(
            "  N = {:>4}: tail sup {:.6e}, termwise max {:.6e}, agree: {}",
            row.n_start, row.tail_sup, row.termwise_max, row.agree
        );
    }
    if let Some((floor, holds)) = report.divergence_floor {
        println!("  positive tail floor {floor}: every tail at least that: {holds}");
    }
    for note in &report.notes {
        println!("  note: {note}");
    }
    Ok(())
}
