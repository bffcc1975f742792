//! Acceptance gate: one test per criterion, named so the test runner's
//! output doubles as the pass/fail line. Every tolerance is pinned here.
//! Criterion 2 is not attainable in f64 on the unit interval and its test
//! asserts the exact failure instead of papering over it; the printed
//! summary and the decisions ledger carry the analysis.

use std::process::Command;
use std::time::Instant;

use amwkit::algebra::{
    build_function_algebra, build_scalar_algebra, entry_identity_check, freeness_check,
    witness_identity_check,
};
use amwkit::poly::{seeded_poly, Poly, PolyNoConst};
use amwkit::rng::{Lcg, DEFAULT_SEED};
use amwkit::series::{c00_perturb, tail_sup_disjoint, uniform_convergence_oracle, DivergenceCert};
use amwkit::spaces::{
    check_combinations, combination_norm_identity, independence_rank, isometry_check,
    scalar_span_family, ComboVerdict,
};
use amwkit::{
    certify_amw, classic_example, default_partition, transplant_sequence, FnSeq, Interval, RealFn,
    ScalarSeq,
};

const NORM_WIDTH_TOL: f64 = 1e-12;
const HARMONIC_SUM_TOL: f64 = 1e-3;
const TAIL_TOL: f64 = 1e-12;
const EULER_MASCHERONI: f64 = 0.577_215_664_9;
const NORM_IDENTITY_TOL: f64 = 1e-9;
const ENTRY_IDENTITY_TOL: f64 = 1e-12;
const WITNESS_IDENTITY_TOL: f64 = 1e-10;

fn unit() -> Interval {
    Interval::unit()
}

fn neg_unit() -> Interval {
    Interval::new(-1.0, 0.0).unwrap()
}

#[test]
fn criterion_01_classic_norms_sum_and_tail_within_tolerance() {
    let start = Instant::now();
    let f = classic_example();
    for n in 1..=20u64 {
        let enc = f.term_norm(n).unwrap();
        assert!(enc.upper - enc.lower <= NORM_WIDTH_TOL, "n = {n}");
        assert!((enc.lower - 1.0 / n as f64).abs() <= NORM_WIDTH_TOL, "n = {n}");
    }
    let sum: f64 = (1..=10_000u64)
        .map(|n| f.term_norm(n).unwrap().estimate())
        .sum();
    let predicted = (10_000f64).ln() + EULER_MASCHERONI;
    assert!(
        (sum - predicted).abs() <= HARMONIC_SUM_TOL,
        "sum {sum} vs {predicted}"
    );
    let tail = tail_sup_disjoint(&f, 100, 20).unwrap();
    assert!(tail.exact);
    assert!((tail.lower - 0.01).abs() <= TAIL_TOL);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "criterion 1: PASS - norms exact to {NORM_WIDTH_TOL:.0e}, \
         sum {sum:.6} vs ln(1e4)+gamma {predicted:.6}, tail(100) = 0.01, {elapsed:?}"
    );
}

#[test]
fn criterion_02_fails_blocks_19_and_20_unrepresentable_on_unit_interval() {
    // The geometric partition on [0, 1] satisfies alpha_k = 1 - 2^(1-k),
    // which rounds to 1.0 from k = 55 onward; block 19 needs alpha_55 <
    // alpha_56 and cannot be built in f64. Properties (entry and exit
    // values, vanishing outside the block, exact norm preservation) are
    // verified for n = 1..18 and the collapse is asserted for n = 19, 20.
    let iv = unit();
    let partition = default_partition(iv);
    let sources = [
        RealFn::power(iv, 1.0).unwrap(),
        RealFn::power(iv, 2.0).unwrap(),
        RealFn::power(iv, 3.0).unwrap(),
        RealFn::exp(iv, 1.0).unwrap(),
    ];
    for f in &sources {
        let u = transplant_sequence(&partition, f).unwrap();
        let f_lo = f.eval(iv.lo()).unwrap();
        let f_hi = f.eval(iv.hi()).unwrap();
        let f_norm = f.sup_norm();
        for n in 1..=18u64 {
            let term = u.term(n).unwrap();
            let entry = partition.alpha(3 * n - 1);
            let exit = partition.alpha(3 * n);
            assert!((term.eval(entry).unwrap() - f_lo).abs() <= TAIL_TOL, "n = {n}");
            assert!((term.eval(exit).unwrap() - f_hi).abs() <= TAIL_TOL, "n = {n}");
            let lo = partition.alpha(3 * n - 2);
            let hi = partition.alpha(3 * n + 1);
            let mut outside = Vec::new();
            if iv.lo() < lo {
                outside.extend(Interval::new(iv.lo(), lo).unwrap().grid(51));
            }
            if hi < iv.hi() {
                outside.extend(Interval::new(hi, iv.hi()).unwrap().grid(51));
            }
            for &x in outside.iter().take(101) {
                assert_eq!(term.eval(x).unwrap(), 0.0, "n = {n}, x = {x}");
            }
            let norm = u.term_norm(n).unwrap();
            assert!(norm.exact && f_norm.exact);
            assert_eq!(norm.lower, f_norm.lower, "n = {n}");
        }
        for n in [19u64, 20] {
            let err = u.term(n).unwrap_err().to_string();
            assert!(err.contains("collapse"), "n = {n}: {err}");
        }
    }
    println!(
        "criterion 2: FAIL (honest) - all four block properties hold for n = 1..18, \
         but blocks 19 and 20 are not representable on [0, 1]: partition points \
         collide with 1.0 in f64 from index 55; see the decisions ledger"
    );
}

#[test]
fn criterion_03_tail_oracle_exact_and_summable_scaling_fails_divergence() {
    let iv = unit();
    let u = transplant_sequence(&default_partition(iv), &RealFn::power(iv, 1.0).unwrap()).unwrap();

    let harmonic = ScalarSeq::make_power(1.0).unwrap();
    let scaled = FnSeq::scaled(&harmonic, &u);
    for n_start in [10u64, 100, 1_000] {
        let enc = tail_sup_disjoint(&scaled, n_start, 20).unwrap();
        assert!(enc.exact);
        assert_eq!(enc.lower, 1.0 / n_start as f64, "N = {n_start}");
    }

    let ones = ScalarSeq::constant(1.0);
    let report = uniform_convergence_oracle(&u, &ones, &[10, 100, 1_000]).unwrap();
    for row in &report.rows {
        assert_eq!(row.tail_sup, 1.0, "N = {}", row.n_start);
    }
    let (floor, holds) = report.divergence_floor.unwrap();
    assert_eq!(floor, 1.0);
    assert!(holds);

    let square = ScalarSeq::make_power(2.0).unwrap();
    let cert = certify_amw(&FnSeq::scaled(&square, &u), Some((&square, &u)));
    assert!(matches!(cert.divergence, DivergenceCert::Failed { .. }));
    assert!(!cert.affirmed());
    println!(
        "criterion 3: PASS - tail sup = 1/N exactly for N in {{10, 100, 1000}}, \
         constant scaling pins the tails at 1, square scaling fails divergence"
    );
}

fn seeded_source(rng: &mut Lcg, domain: Interval) -> RealFn {
    match rng.below(3) {
        0 => RealFn::power(domain, 0.5 + 2.5 * rng.next_f64()).unwrap(),
        1 => {
            let slope = (0.5 + 1.5 * rng.next_f64()) * if rng.below(2) == 0 { 1.0 } else { -1.0 };
            RealFn::affine(domain, slope, rng.range_f64(-1.0, 1.0))
        }
        _ => RealFn::scaled_sum(vec![
            (rng.range_f64(0.25, 1.0), RealFn::power(domain, 2.0).unwrap()),
            (rng.range_f64(0.25, 1.0), RealFn::constant(domain, 1.0)),
        ])
        .unwrap(),
    }
}

#[test]
fn criterion_04_isometry_for_seeded_sources_and_combination_norm_identity() {
    let iv = unit();
    let partition = default_partition(iv);
    let mut rng = Lcg::new(DEFAULT_SEED);
    let sources: Vec<RealFn> = (0..10).map(|_| seeded_source(&mut rng, iv)).collect();
    let rows = isometry_check(&partition, &sources, 10).unwrap();
    assert_eq!(rows.len(), 10);
    for (i, row) in rows.iter().enumerate() {
        assert!(row.pass, "source {i}");
        assert!(row.structural_all_n, "source {i}");
    }

    let harmonic = ScalarSeq::make_power(1.0).unwrap();
    let fs = [
        RealFn::power(iv, 1.0).unwrap(),
        RealFn::power(iv, 2.0).unwrap(),
    ];
    let report =
        combination_norm_identity(&partition, &harmonic, &fs, &[1.0, -1.0], 10).unwrap();
    assert!((report.lhs_sup - 0.25).abs() <= NORM_IDENTITY_TOL, "{}", report.lhs_sup);
    assert!((report.rhs - 0.25).abs() <= NORM_IDENTITY_TOL, "{}", report.rhs);
    assert!(report.agree);
    assert!(report.depth_covers_peak);
    println!(
        "criterion 4: PASS - isometry holds for 10 seeded sources; combination (1, -1) \
         over (x, x^2) gives both sides {:.12} vs {:.12}",
        report.lhs_sup, report.rhs
    );
}

#[test]
fn criterion_05_power_basis_family_certified_with_full_rank() {
    let iv = unit();
    let u = transplant_sequence(&default_partition(iv), &RealFn::power(iv, 1.0).unwrap()).unwrap();
    let basis = vec![
        ScalarSeq::make_power(0.3).unwrap(),
        ScalarSeq::make_power(0.5).unwrap(),
        ScalarSeq::make_power(0.7).unwrap(),
    ];
    let family = scalar_span_family(&basis, &u).unwrap();
    assert_eq!(family.generators.len(), 3);
    for cert in &family.certificates {
        assert!(cert.affirmed());
    }
    let mut rng = Lcg::new(DEFAULT_SEED);
    let report = check_combinations(&family, 25, &mut rng).unwrap();
    assert_eq!(report.outcomes.len(), 25);
    for outcome in &report.outcomes {
        assert!(
            matches!(outcome.verdict, ComboVerdict::Affirmed),
            "combination {:?} x {:?}: {:?}",
            outcome.indices,
            outcome.coeffs,
            outcome.verdict
        );
    }
    let rank = independence_rank(&family.generators, 6, 3).unwrap();
    assert_eq!(rank, 3);
    println!(
        "criterion 5: PASS - 3 generators and 25 seeded combinations affirmed, \
         independence rank 3"
    );
}

#[test]
fn criterion_06_affine_expansion_matches_naive_oracle() {
    use amwkit::algebra::expand_affine;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    let mut rng = Lcg::new(DEFAULT_SEED);
    let denominators = [1i64, 2, 3];
    for case in 0..100 {
        let nvars = rng.range_u64(1, 3) as usize;
        let p = seeded_poly(&mut rng, nvars, 4);
        let alphas: Vec<BigRational> = (0..nvars)
            .map(|_| {
                BigRational::new(
                    BigInt::from(rng.nonzero_int(4)),
                    BigInt::from(*rng.choose(&denominators)),
                )
            })
            .collect();
        let betas: Vec<BigRational> = (0..nvars)
            .map(|_| BigRational::from_integer(BigInt::from(rng.range_u64(0, 8) as i64 - 4)))
            .collect();
        let fast = expand_affine(&p, &alphas, &betas).unwrap();
        let naive = p.poly().compose_affine_naive(&alphas, &betas);
        assert_eq!(fast, naive, "case {case}: {p}");
    }
    println!("criterion 6: PASS - binomial expansion equals naive composition on 100 seeded cases");
}

#[test]
fn criterion_07_transplant_algebra_identity_certification_and_freeness() {
    // On [-1, 0] the partition points are exact binary fractions at every
    // index, so the identity can be checked at full depth 20.
    let iv = neg_unit();
    let partition = default_partition(iv);
    let scalars = ScalarSeq::make_logpower(1.0).unwrap();
    let inputs = [
        RealFn::power(iv, 1.0).unwrap(),
        RealFn::power(iv, 2.0).unwrap(),
    ];
    let algebra = build_function_algebra(&partition, &scalars, &inputs).unwrap();

    let mut rng = Lcg::new(DEFAULT_SEED);
    let mut certified = 0usize;
    let mut degenerate = 0usize;
    for i in 0..10 {
        let p = seeded_poly(&mut rng, 2, 4);
        let e = algebra.element(&p).unwrap();
        let report = entry_identity_check(&algebra, &e, 20);
        assert_eq!(report.checked.len(), 20, "poly {i}: {p}");
        assert!(report.truncated.is_none(), "poly {i}");
        assert!(
            report.max_deviation <= ENTRY_IDENTITY_TOL,
            "poly {i}: deviation {}",
            report.max_deviation
        );
        let cert = algebra.certify(&e);
        if e.entry_cancelled {
            degenerate += 1;
            assert!(matches!(cert.divergence, DivergenceCert::Unknown { .. }));
        } else {
            certified += 1;
            assert!(cert.affirmed(), "poly {i} ({p}): {}", cert.verdict());
        }
    }
    assert!(certified > 0);

    // product supports stay blockwise disjoint
    let product = PolyNoConst::new(Poly::var(2, 0).mul(&Poly::var(2, 1))).unwrap();
    let e = algebra.element(&product).unwrap();
    assert!(e.realized.structural_disjointness().is_some());
    for n in 1..=12u64 {
        let a = e.realized.term(n).unwrap();
        let b = e.realized.term(n + 1).unwrap();
        for x in iv.grid(101) {
            assert!(
                a.eval(x).unwrap() == 0.0 || b.eval(x).unwrap() == 0.0,
                "blocks {n} and {} overlap at {x}",
                n + 1
            );
        }
    }

    let polys: Vec<PolyNoConst> = (0..25).map(|_| seeded_poly(&mut rng, 2, 3)).collect();
    let freeness = freeness_check(&algebra, &polys, 20).unwrap();
    assert!(freeness.all_witnessed);
    println!(
        "criterion 7: PASS - entry identity to {ENTRY_IDENTITY_TOL:.0e} at depth 20 for 10 \
         seeded polynomials ({certified} certified, {degenerate} degenerate and surfaced), \
         product supports disjoint, 25 freeness witnesses"
    );
}

#[test]
fn criterion_08_scalar_algebra_witness_identity_with_degenerate_surfaced() {
    let iv = neg_unit();
    let u = transplant_sequence(&default_partition(iv), &RealFn::power(iv, 2.0).unwrap()).unwrap();
    let basis = vec![
        ScalarSeq::make_logpower(1.0).unwrap(),
        ScalarSeq::make_logpower(2.0).unwrap(),
    ];
    let algebra = build_scalar_algebra(&basis, &u).unwrap();
    assert_eq!(algebra.level, 1.0);

    let x1 = Poly::var(2, 0);
    let x2 = Poly::var(2, 1);
    let certified_elements = [
        PolyNoConst::new(x1.clone()).unwrap(),
        PolyNoConst::new(x2.clone()).unwrap(),
        PolyNoConst::new(x1.mul(&x2)).unwrap(),
        PolyNoConst::new(x1.pow(2).add(&x2)).unwrap(),
    ];
    for p in &certified_elements {
        let e = algebra.element(p).unwrap();
        let report = witness_identity_check(&algebra, &e, 20);
        assert_eq!(report.checked.len(), 20, "{p}");
        assert!(
            report.max_deviation <= WITNESS_IDENTITY_TOL,
            "{p}: deviation {}",
            report.max_deviation
        );
        let cert = algebra.certify(&e);
        assert!(cert.affirmed(), "{p}: {}", cert.verdict());
    }

    // With norm level 1 the monomials x1^2 and x2 carry equal weight at
    // the witness points; their difference cancels there and must be
    // reported unknown, not affirmed.
    let cancelling = PolyNoConst::new(x1.pow(2).sub(&x2)).unwrap();
    let e = algebra.element(&cancelling).unwrap();
    assert!(e.degenerate);
    let cert = algebra.certify(&e);
    assert!(!cert.affirmed());
    assert!(matches!(cert.divergence, DivergenceCert::Unknown { .. }));
    println!(
        "criterion 8: PASS - witness identity to {WITNESS_IDENTITY_TOL:.0e} at depth 20; \
         x1, x2, x1*x2, x1^2+x2 certified; the cancelling element x1^2-x2 is surfaced \
         as unknown (norm level 1 equalizes its witness weights; see the decisions ledger)"
    );
}

#[test]
fn criterion_09_finite_perturbations_preserve_certificates() {
    let iv = unit();
    let partition = default_partition(iv);
    let mut rng = Lcg::new(DEFAULT_SEED);
    for case in 0..10 {
        let scalars = ScalarSeq::make_power(rng.range_f64(0.4, 1.0)).unwrap();
        let base = transplant_sequence(&partition, &seeded_source(&mut rng, iv)).unwrap();
        let f = FnSeq::scaled(&scalars, &base);
        let before = certify_amw(&f, Some((&scalars, &base)));
        assert!(before.affirmed(), "case {case}: {}", before.verdict());

        let k = 1 + rng.below(4);
        let terms: Vec<RealFn> = (0..k).map(|_| seeded_source(&mut rng, iv)).collect();
        let g = FnSeq::finite(iv, terms).unwrap();
        let perturbed = c00_perturb(&f, &g).unwrap();
        let after = certify_amw(&perturbed, None);
        assert!(after.affirmed(), "case {case}: {}", after.verdict());
        assert_eq!(before.absolute.holds(), after.absolute.holds());
        assert_eq!(before.uniform.holds(), after.uniform.holds());
        assert_eq!(before.divergence.holds(), after.divergence.holds());

        // beyond the perturbed prefix the terms are untouched
        for n in (k + 1)..=(k + 5) {
            let original = f.term(n).unwrap();
            let shifted = perturbed.term(n).unwrap();
            assert!(
                amwkit::realfn::fn_equal_sampled(&original, &shifted, 1e-12).unwrap(),
                "case {case}, n = {n}"
            );
        }
    }
    println!(
        "criterion 9: PASS - 10 seeded finite perturbations leave every certificate \
         leg and every term beyond the prefix unchanged"
    );
}

#[test]
fn criterion_10_cli_exit_codes_and_byte_stable_reports() {
    let bin = env!("CARGO_BIN_EXE_amwkit");
    let cases = [
        (
            "classic",
            r#"{ "command": "certify", "family": { "kind": "classic" } }"#,
            0,
        ),
        (
            "power-scaled",
            r#"{
              "command": "certify",
              "family": {
                "kind": "scaled",
                "scalars": { "kind": "power", "c": 2.0 },
                "base": { "kind": "transplant", "source": { "kind": "power", "c": 1.0 } }
              }
            }"#,
            2,
        ),
        (
            "oracle",
            r#"{
              "command": "oracle",
              "family": { "kind": "transplant", "source": { "kind": "power", "c": 1.0 } },
              "scalars": { "kind": "harmonic" },
              "n_list": [10, 100, 1000]
            }"#,
            0,
        ),
    ];
    for (name, spec, expected_exit) in cases {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().unwrap();
            let spec_path = dir.path().join("spec.json");
            std::fs::write(&spec_path, spec).unwrap();
            let status = Command::new(bin)
                .arg("--spec")
                .arg(&spec_path)
                .arg("--out")
                .arg(dir.path())
                .arg("--csv")
                .status()
                .unwrap();
            assert_eq!(status.code(), Some(expected_exit), "{name}");
            let report = std::fs::read(dir.path().join("report.json")).unwrap();
            let csv = std::fs::read(dir.path().join("series.csv")).unwrap();
            outputs.push((report, csv));
        }
        assert_eq!(outputs[0], outputs[1], "{name}: outputs differ between runs");
    }

    // the classic report names the divergence reason
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("spec.json");
    std::fs::write(&spec_path, cases[0].1).unwrap();
    Command::new(bin)
        .arg("--spec")
        .arg(&spec_path)
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    let report = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert!(report.contains("harmonic norms"));

    // the oracle CSV carries the exact tails 1/N
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("spec.json");
    std::fs::write(&spec_path, cases[2].1).unwrap();
    Command::new(bin)
        .arg("--spec")
        .arg(&spec_path)
        .arg("--out")
        .arg(dir.path())
        .arg("--csv")
        .status()
        .unwrap();
    let csv = std::fs::read_to_string(dir.path().join("series.csv")).unwrap();
    for (line, n) in csv.lines().skip(1).zip([10.0f64, 100.0, 1000.0]) {
        let tail: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(tail, 1.0 / n);
    }
    println!(
        "criterion 10: PASS - exit codes 0/2/0 for the three canonical runs, reports and \
         CSV byte-stable across consecutive runs"
    );
}
