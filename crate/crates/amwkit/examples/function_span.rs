//! One scalar sequence over several source functions: each transplant
//! preserves the source norm exactly (checked against recomputed term
//! sups, not stored metadata), and the norm of a scaled combination equals
//! the scalar peak times the norm of the combined source.

use amwkit::spaces::{combination_norm_identity, function_span_family, isometry_check};
use amwkit::{default_partition, Interval, RealFn, ScalarSeq};

fn main() -> amwkit::Result<()> {
    let iv = Interval::unit();
    let partition = default_partition(iv);
    let sources = vec![RealFn::power(iv, 1.0)?, RealFn::power(iv, 2.0)?];
    let scalars = ScalarSeq::make_power(1.0)?;

    let family = function_span_family(&partition, &scalars, &sources)?;
    for (i, cert) in family.certificates.iter().enumerate() {
        println!("generator {i}: {}", cert.verdict());
    }

    println!("\nisometry of the transplant:");
    for (i, row) in isometry_check(&partition, &sources, 10)?.iter().enumerate() {
        println!(
            "  source {i}: ||f|| = {:.10}, recomputed term sup = {:.10}, all n: {}, pass: {}",
            row.f_norm.lower, row.terms_sup.lower, row.structural_all_n, row.pass
        );
    }

    // x - x^2 peaks at 1/4; with |a_n| peaking at 1 both sides are 0.25.
    let report = combination_norm_identity(&partition, &scalars, &sources, &[1.0, -1.0], 10)?;
    println!("\nnorm identity for the combination (1, -1):");
    println!("  sup over n of the combined term norms: {:.12}", report.lhs_sup);
    println!("  attained at n = {}", report.lhs_argmax_n);
    println!("  scalar peak times combined source norm: {:.12}", report.rhs);
    println!(
        "  scalar peak |a_n| = {} at n = {} (exact: {})",
        report.scalar_peak.value, report.scalar_peak.argmax, report.scalar_peak.exact
    );
    println!("  agree: {}", report.agree);
    Ok(())
}
