//! A three-generator family from power scalars over one transplanted bump:
//! every generator certifies on its own, randomly sampled combinations
//! recombine structurally through the dominant exponent, and the sampled
//! evaluation matrix has full rank, witnessing linear independence.

use amwkit::rng::{Lcg, DEFAULT_SEED};
use amwkit::spaces::{check_combinations, independence_rank, scalar_span_family, ComboVerdict};
use amwkit::{default_partition, transplant_sequence, Interval, RealFn, ScalarSeq};

fn main() -> amwkit::Result<()> {
    let iv = Interval::unit();
    let u = transplant_sequence(&default_partition(iv), &RealFn::power(iv, 1.0)?)?;
    let basis = vec![
        ScalarSeq::make_power(0.3)?,
        ScalarSeq::make_power(0.5)?,
        ScalarSeq::make_power(0.7)?,
    ];

    let family = scalar_span_family(&basis, &u)?;
    println!("generators: {}", family.generators.len());
    for (i, cert) in family.certificates.iter().enumerate() {
        println!("  generator {i}: {}", cert.verdict());
    }

    let mut rng = Lcg::new(DEFAULT_SEED);
    let report = check_combinations(&family, 25, &mut rng)?;
    let affirmed = report
        .outcomes
        .iter()
        .filter(|o| matches!(o.verdict, ComboVerdict::Affirmed))
        .count();
    println!(
        "\ncombinations: {} drawn, {affirmed} affirmed, none failed: {}",
        report.outcomes.len(),
        report.none_failed
    );
    for outcome in report.outcomes.iter().take(5) {
        println!(
            "  indices {:?} coeffs {:?}",
            outcome.indices, outcome.coeffs
        );
    }

    let rank = independence_rank(&family.generators, 6, 3)?;
    println!("\nindependence rank: {rank} of {}", family.generators.len());
    Ok(())
}
