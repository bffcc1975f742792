//! Linear structure: families of scaled sequences closed under combination,
//! the norm-preserving property of the transplant, the combination norm
//! identity, and finite independence checks.

use crate::construct::{base_partition, transplant_sequence, FnSeq, Partition};
use crate::error::{Error, Result};
use crate::realfn::{NormEnclosure, RealFn};
use crate::rng::Lcg;
use crate::scalarseq::{MaxAbs, ScalarSeq, SeqKind};
use crate::series::{certify_amw, AmwCertificate};

/// Which ingredient varies across the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyMode {
    /// Fixed base sequence, one scalar sequence per generator.
    ScalarSpan,
    /// Fixed scalars, one transplanted function per generator.
    FunctionSpan,
}

/// A family of generator sequences in which every nonzero combination is
/// meant to keep the central property. Builders certify each generator on
/// construction; combinations are checked separately by
/// [`check_combinations`].
#[derive(Debug, Clone)]
pub struct ProductFamily {
    pub mode: FamilyMode,
    pub generators: Vec<FnSeq>,
    pub certificates: Vec<AmwCertificate>,
    /// Scalar input per generator (scalar-span mode).
    pub scalar_basis: Vec<ScalarSeq>,
    /// Function input per generator (function-span mode).
    pub base_functions: Vec<RealFn>,
    /// The scalars every generator shares (function-span mode).
    pub shared_scalars: Option<ScalarSeq>,
    /// The base sequence every generator scales (scalar-span mode).
    pub base_sequence: Option<FnSeq>,
    pub partition: Option<Partition>,
}

/// Termwise product `(a_n u_n)_n`. The zero sequence collapses to the null
/// sequence; otherwise supports are inherited and term norms scale by
/// `|a_n|`.
pub fn scale_product(a: &ScalarSeq, u: &FnSeq) -> FnSeq {
    if matches!(a.kind(), SeqKind::Zero) {
        return FnSeq::zero(u.domain());
    }
    FnSeq::scaled(a, u)
}

/// Build the family `{(a^i_n u_n)_n}` from eligible scalar bases over one
/// family member `u`. Eligible means certified null but not absolutely
/// summable, so each generator keeps the central property.
pub fn scalar_span_family(basis: &[ScalarSeq], u: &FnSeq) -> Result<ProductFamily> {
    if u.f_cert().is_none() {
        return Err(Error::Precondition(
            "the base sequence carries no family certificate".into(),
        ));
    }
    let mut generators = Vec::new();
    let mut certificates = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        if !a.cert().eligible() {
            return Err(Error::Precondition(format!(
                "scalar basis element {i} is not eligible (needs: null yes, summable no; \
                 got c0 {:?}, l1 {:?})",
                a.cert().in_c0,
                a.cert().in_l1
            )));
        }
        let gen = scale_product(a, u);
        let cert = certify_amw(&gen, Some((a, u)));
        if !cert.affirmed() {
            return Err(Error::Precondition(format!(
                "generator {i} failed certification: {}",
                cert.verdict()
            )));
        }
        generators.push(gen);
        certificates.push(cert);
    }
    Ok(ProductFamily {
        mode: FamilyMode::ScalarSpan,
        generators,
        certificates,
        scalar_basis: basis.to_vec(),
        base_functions: Vec::new(),
        shared_scalars: None,
        base_sequence: Some(u.clone()),
        partition: base_partition(u),
    })
}

/// Build the family `{(a_n u^{f_i}_n)_n}` by transplanting each function
/// along the partition and scaling with one eligible scalar sequence. Zero
/// functions are dropped rather than admitted as zero generators.
pub fn function_span_family(
    partition: &Partition,
    a: &ScalarSeq,
    fs: &[RealFn],
) -> Result<ProductFamily> {
    if !a.cert().eligible() {
        return Err(Error::Precondition(format!(
            "the scalars are not eligible (needs: null yes, summable no; got c0 {:?}, l1 {:?})",
            a.cert().in_c0,
            a.cert().in_l1
        )));
    }
    let mut generators = Vec::new();
    let mut certificates = Vec::new();
    let mut base_functions = Vec::new();
    for (i, f) in fs.iter().enumerate() {
        if f.is_zero_form() {
            continue;
        }
        let u = transplant_sequence(partition, f)?;
        if u.f_cert().is_none() {
            return Err(Error::Precondition(format!(
                "function {i} has no certified positive norm, so its transplant \
                 cannot join the family"
            )));
        }
        let gen = scale_product(a, &u);
        let cert = certify_amw(&gen, Some((a, &u)));
        if !cert.affirmed() {
            return Err(Error::Precondition(format!(
                "generator {i} failed certification: {}",
                cert.verdict()
            )));
        }
        generators.push(gen);
        certificates.push(cert);
        base_functions.push(f.clone());
    }
    Ok(ProductFamily {
        mode: FamilyMode::FunctionSpan,
        generators,
        certificates,
        scalar_basis: Vec::new(),
        base_functions,
        shared_scalars: Some(a.clone()),
        base_sequence: None,
        partition: Some(partition.clone()),
    })
}

/// One function's isometry row: the transplant preserves the sup norm.
#[derive(Debug, Clone)]
pub struct IsometryRow {
    /// Norm of the source function.
    pub f_norm: NormEnclosure,
    /// `max_{n <= depth}` of the term norms, recomputed from the built
    /// terms without using stored metadata.
    pub terms_sup: NormEnclosure,
    /// Whether the structural rule extends the equality to every index.
    pub structural_all_n: bool,
    pub pass: bool,
}

/// Verify that transplanting preserves sup norms: for each function the
/// computed term norms up to `depth` match the source norm within the
/// enclosure widths, and the structural rule carries the identity to all
/// indices.
pub fn isometry_check(partition: &Partition, fs: &[RealFn], depth: u64) -> Result<Vec<IsometryRow>> {
    let mut rows = Vec::new();
    for f in fs {
        let f_norm = f.sup_norm();
        if f.is_zero_form() {
            rows.push(IsometryRow {
                f_norm,
                terms_sup: NormEnclosure::exact(0.0),
                structural_all_n: true,
                pass: true,
            });
            continue;
        }
        let u = transplant_sequence(partition, f)?;
        let mut terms_sup = NormEnclosure::exact(0.0);
        for n in 1..=depth {
            let (enc, _) = u.term(n)?.computed_sup();
            terms_sup = NormEnclosure {
                lower: terms_sup.lower.max(enc.lower),
                upper: terms_sup.upper.max(enc.upper),
                exact: terms_sup.exact && enc.exact,
            };
        }
        let pass = overlap_within(&f_norm, &terms_sup, 1e-9);
        rows.push(IsometryRow {
            f_norm,
            terms_sup,
            structural_all_n: true,
            pass,
        });
    }
    Ok(rows)
}

fn overlap_within(a: &NormEnclosure, b: &NormEnclosure, slack: f64) -> bool {
    a.lower - slack <= b.upper + slack && b.lower - slack <= a.upper + slack
}

/// Report for the combination norm identity: the sup norm of a combined
/// sequence equals `max_n |a_n|` times the norm of the combined source
/// function, once the depth covers the scalar peak.
#[derive(Debug, Clone)]
pub struct NormIdentityReport {
    /// `max_{n <= depth} || sum_i coeff_i a_n u^{f_i}_n ||`.
    pub lhs_sup: f64,
    /// The index attaining it.
    pub lhs_argmax_n: u64,
    /// `max_n |a_n| * || sum_i coeff_i f_i ||`.
    pub rhs: f64,
    pub scalar_peak: MaxAbs,
    pub depth_covers_peak: bool,
    /// `|lhs - rhs| <= 1e-9`; expected exactly when the peak is covered.
    pub agree: bool,
}

const NORM_IDENTITY_TOL: f64 = 1e-9;

/// Check the combination norm identity at finite depth. The identity needs
/// the scalar peak index to lie within `depth`; the report says whether it
/// does, and where the left side attained its maximum.
pub fn combination_norm_identity(
    partition: &Partition,
    a: &ScalarSeq,
    fs: &[RealFn],
    coeffs: &[f64],
    depth: u64,
) -> Result<NormIdentityReport> {
    if fs.len() != coeffs.len() {
        return Err(Error::Parameter(format!(
            "{} functions but {} coefficients",
            fs.len(),
            coeffs.len()
        )));
    }
    let scalar_peak = a.max_abs(10_000);
    let live: Vec<(f64, &RealFn)> = coeffs
        .iter()
        .zip(fs)
        .filter(|(c, _)| **c != 0.0)
        .map(|(c, f)| (*c, f))
        .collect();
    if live.is_empty() {
        return Ok(NormIdentityReport {
            lhs_sup: 0.0,
            lhs_argmax_n: 0,
            rhs: 0.0,
            scalar_peak,
            depth_covers_peak: true,
            agree: true,
        });
    }
    let sequences: Result<Vec<FnSeq>> = live
        .iter()
        .map(|(_, f)| transplant_sequence(partition, f))
        .collect();
    let sequences = sequences?;
    let mut lhs_sup = 0.0f64;
    let mut lhs_argmax_n = 1u64;
    for n in 1..=depth {
        let an = a.at(n);
        let mut parts = Vec::with_capacity(live.len());
        for ((c, _), u) in live.iter().zip(&sequences) {
            parts.push((c * an, u.term(n)?));
        }
        let combined = match RealFn::scaled_sum(parts) {
            Ok(f) => f,
            Err(_) => continue,
        };
        let (enc, _) = combined.computed_sup();
        if enc.lower > lhs_sup {
            lhs_sup = enc.lower;
            lhs_argmax_n = n;
        }
    }
    let source = RealFn::scaled_sum(
        live.iter().map(|(c, f)| (*c, (*f).clone())).collect(),
    )?;
    let rhs = scalar_peak.value * source.sup_norm().lower;
    let depth_covers_peak = scalar_peak.argmax <= depth;
    let agree = (lhs_sup - rhs).abs() <= NORM_IDENTITY_TOL;
    Ok(NormIdentityReport {
        lhs_sup,
        lhs_argmax_n,
        rhs,
        scalar_peak,
        depth_covers_peak,
        agree,
    })
}

/// Numerical rank of the generators' evaluation matrix. Rows are
/// generators; columns sample each term index at interior points of the
/// copy block when a shared partition is known (there the terms reproduce
/// their sources, so distinct sources separate), otherwise at interior
/// points of the domain. Full rank certifies finite linear independence.
pub fn independence_rank(
    generators: &[FnSeq],
    sample_depth: u64,
    points_per_term: usize,
) -> Result<usize> {
    if generators.is_empty() {
        return Err(Error::Parameter("rank of an empty family".into()));
    }
    if points_per_term == 0 {
        return Err(Error::Parameter("need at least one point per term".into()));
    }
    let domain = generators[0].domain();
    let partition = generators.iter().find_map(base_partition);
    let mut matrix: Vec<Vec<f64>> = vec![Vec::new(); generators.len()];
    for n in 1..=sample_depth {
        let window = match &partition {
            Some(p) => {
                let lo = p.alpha(3 * n - 1);
                let hi = p.alpha(3 * n);
                crate::realfn::Interval::new(lo, hi)?
            }
            None => domain,
        };
        let xs = interior_points(window, points_per_term);
        for (row, g) in matrix.iter_mut().zip(generators) {
            let term = g.term(n)?;
            for &x in &xs {
                row.push(term.eval(x)?);
            }
        }
    }
    Ok(matrix_rank(matrix, 1e-10))
}

fn interior_points(window: crate::realfn::Interval, count: usize) -> Vec<f64> {
    let step = window.len() / (count + 1) as f64;
    (1..=count).map(|i| window.lo() + step * i as f64).collect()
}

/// Rank by Gaussian elimination with partial pivoting; entries below
/// `rel_tol` times the largest initial entry count as zero.
fn matrix_rank(mut m: Vec<Vec<f64>>, rel_tol: f64) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let tol = rel_tol * scale;
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let (best_row, best_val) = (row..rows)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if best_val <= tol {
            continue;
        }
        m.swap(row, best_row);
        for r in (row + 1)..rows {
            let factor = m[r][col] / m[row][col];
            for c in col..cols {
                m[r][c] -= factor * m[row][c];
            }
        }
        row += 1;
        rank += 1;
    }
    rank
}

/// Outcome of one sampled combination.
#[derive(Debug, Clone)]
pub enum ComboVerdict {
    Affirmed,
    /// No structural recombination certificate; nothing failed, but the
    /// infinite statement stays open at this depth.
    DepthLimited(String),
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct ComboOutcome {
    pub indices: Vec<usize>,
    pub coeffs: Vec<f64>,
    pub verdict: ComboVerdict,
}

#[derive(Debug, Clone)]
pub struct CombinationReport {
    pub outcomes: Vec<ComboOutcome>,
    /// True when no combination failed (depth-limited outcomes allowed).
    pub none_failed: bool,
    /// True when every combination was affirmed outright.
    pub all_affirmed: bool,
}

const COMBO_COEFF_POOL: [f64; 6] = [1.0, -1.0, 2.0, -2.0, 0.5, -0.5];

/// Draw random combinations of at most four generators with coefficients
/// from `{±1, ±2, ±1/2}` and certify each. Scalar-span combinations
/// recombine through the scalar certificate algebra; function-span
/// combinations recombine through linearity of the transplant. Structurally
/// zero draws are redrawn: the claim quantifies over nonzero combinations.
pub fn check_combinations(
    family: &ProductFamily,
    draws: usize,
    rng: &mut Lcg,
) -> Result<CombinationReport> {
    let count = family.generators.len();
    if count == 0 {
        return Ok(CombinationReport {
            outcomes: Vec::new(),
            none_failed: true,
            all_affirmed: true,
        });
    }
    let mut outcomes = Vec::new();
    let mut attempts = 0;
    while outcomes.len() < draws && attempts < draws * 10 {
        attempts += 1;
        let k = rng.range_u64(1, count.min(4) as u64) as usize;
        let mut indices: Vec<usize> = (0..count).collect();
        for i in 0..k {
            let j = i + rng.below((count - i) as u64) as usize;
            indices.swap(i, j);
        }
        indices.truncate(k);
        indices.sort_unstable();
        let coeffs: Vec<f64> = (0..k).map(|_| *rng.choose(&COMBO_COEFF_POOL)).collect();
        let verdict = match combine_and_certify(family, &indices, &coeffs)? {
            Some(v) => v,
            None => continue,
        };
        outcomes.push(ComboOutcome {
            indices,
            coeffs,
            verdict,
        });
    }
    let none_failed = !outcomes
        .iter()
        .any(|o| matches!(o.verdict, ComboVerdict::Failed(_)));
    let all_affirmed = outcomes
        .iter()
        .all(|o| matches!(o.verdict, ComboVerdict::Affirmed));
    Ok(CombinationReport {
        outcomes,
        none_failed,
        all_affirmed,
    })
}

/// Certify one combination; `None` means the draw was structurally zero.
fn combine_and_certify(
    family: &ProductFamily,
    indices: &[usize],
    coeffs: &[f64],
) -> Result<Option<ComboVerdict>> {
    match family.mode {
        FamilyMode::ScalarSpan => {
            let u = family
                .base_sequence
                .as_ref()
                .ok_or_else(|| Error::Precondition("scalar-span family lost its base".into()))?;
            let combo = ScalarSeq::lin_comb(
                indices
                    .iter()
                    .zip(coeffs)
                    .map(|(&i, &c)| (c, family.scalar_basis[i].clone()))
                    .collect(),
            );
            if matches!(combo.kind(), SeqKind::Zero) {
                return Ok(None);
            }
            let cert = certify_amw(&scale_product(&combo, u), Some((&combo, u)));
            Ok(Some(verdict_from_cert(&cert)))
        }
        FamilyMode::FunctionSpan => {
            let partition = family
                .partition
                .as_ref()
                .ok_or_else(|| Error::Precondition("function-span family lost its partition".into()))?;
            let a = family
                .shared_scalars
                .as_ref()
                .ok_or_else(|| Error::Precondition("function-span family lost its scalars".into()))?;
            let parts: Vec<(f64, RealFn)> = indices
                .iter()
                .zip(coeffs)
                .map(|(&i, &c)| (c, family.base_functions[i].clone()))
                .collect();
            let source = RealFn::scaled_sum(parts)?;
            let norm = source.sup_norm();
            if norm.upper <= 1e-12 {
                return Ok(None);
            }
            let u = transplant_sequence(partition, &source)?;
            if u.f_cert().is_none() {
                return Ok(Some(ComboVerdict::DepthLimited(
                    "combined function has no certified positive norm".into(),
                )));
            }
            let cert = certify_amw(&scale_product(a, &u), Some((a, &u)));
            Ok(Some(verdict_from_cert(&cert)))
        }
    }
}

fn verdict_from_cert(cert: &AmwCertificate) -> ComboVerdict {
    if cert.affirmed() {
        ComboVerdict::Affirmed
    } else {
        let verdict = cert.verdict();
        if verdict.contains("unknown") {
            ComboVerdict::DepthLimited(verdict)
        } else {
            ComboVerdict::Failed(verdict)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::default_partition;
    use crate::realfn::{fn_equal_sampled, Interval};
    use crate::rng::{Lcg, DEFAULT_SEED};
    use proptest::prelude::*;

    fn unit() -> Interval {
        Interval::unit()
    }

    fn ramp_family() -> FnSeq {
        let p = default_partition(unit());
        transplant_sequence(&p, &RealFn::power(unit(), 1.0).unwrap()).unwrap()
    }

    #[test]
    fn scale_product_norms() {
        let u = ramp_family();
        let a = ScalarSeq::make_power(1.0).unwrap();
        let f = scale_product(&a, &u);
        assert_eq!(f.term_norm(5).unwrap().lower, 0.2);

        let alt = ScalarSeq::alternating(&ScalarSeq::make_power(0.5).unwrap());
        let g = scale_product(&alt, &u);
        for n in [2u64, 5, 9] {
            let enc = g.term_norm(n).unwrap();
            assert_eq!(enc.lower, alt.at(n).abs());
            assert!((enc.lower - 1.0 / (n as f64).sqrt()).abs() < 1e-15);
        }

        let z = scale_product(&ScalarSeq::zero(), &u);
        assert!(z.term(3).unwrap().is_zero_form());
    }

    #[test]
    fn scalar_span_builds_and_certifies() {
        let basis: Vec<ScalarSeq> = [0.3, 0.5, 0.7]
            .iter()
            .map(|&c| ScalarSeq::make_power(c).unwrap())
            .collect();
        let family = scalar_span_family(&basis, &ramp_family()).unwrap();
        assert_eq!(family.generators.len(), 3);
        assert!(family.certificates.iter().all(|c| c.affirmed()));

        let combo = ScalarSeq::lin_comb(vec![
            (2.0, basis[0].clone()),
            (-1.0, basis[1].clone()),
        ]);
        let u = family.base_sequence.as_ref().unwrap();
        let cert = certify_amw(&scale_product(&combo, u), Some((&combo, u)));
        assert!(cert.affirmed(), "{}", cert.verdict());
    }

    #[test]
    fn empty_basis_gives_empty_family() {
        let family = scalar_span_family(&[], &ramp_family()).unwrap();
        assert!(family.generators.is_empty());
        let report = check_combinations(&family, 25, &mut Lcg::new(DEFAULT_SEED)).unwrap();
        assert!(report.outcomes.is_empty());
    }

    #[test]
    fn summable_basis_element_rejected() {
        let basis = vec![ScalarSeq::make_power(2.0).unwrap()];
        let err = scalar_span_family(&basis, &ramp_family()).unwrap_err();
        assert!(err.to_string().contains("not eligible"));
    }

    #[test]
    fn function_span_builds_and_certifies() {
        let p = default_partition(unit());
        let a = ScalarSeq::make_power(1.0).unwrap();
        let fs: Vec<RealFn> = (1..=3)
            .map(|c| RealFn::power(unit(), c as f64).unwrap())
            .collect();
        let family = function_span_family(&p, &a, &fs).unwrap();
        assert_eq!(family.generators.len(), 3);
        assert!(family.certificates.iter().all(|c| c.affirmed()));
    }

    #[test]
    fn zero_function_excluded() {
        let p = default_partition(unit());
        let a = ScalarSeq::make_power(1.0).unwrap();
        let family = function_span_family(&p, &a, &[RealFn::zero(unit())]).unwrap();
        assert!(family.generators.is_empty());
    }

    #[test]
    fn ineligible_scalars_rejected_for_function_span() {
        let p = default_partition(unit());
        let a = ScalarSeq::make_power(2.0).unwrap();
        let err = function_span_family(&p, &a, &[RealFn::power(unit(), 1.0).unwrap()])
            .unwrap_err();
        assert!(err.to_string().contains("not eligible"));
    }

    #[test]
    fn generator_of_combination_is_combination_of_generators() {
        let p = default_partition(unit());
        let a = ScalarSeq::make_power(1.0).unwrap();
        let f1 = RealFn::power(unit(), 1.0).unwrap();
        let f2 = RealFn::power(unit(), 2.0).unwrap();
        let g = RealFn::scaled_sum(vec![(1.0, f1.clone()), (-1.0, f2.clone())]).unwrap();

        let gen_combo = scale_product(&a, &transplant_sequence(&p, &g).unwrap());
        let gen1 = scale_product(&a, &transplant_sequence(&p, &f1).unwrap());
        let gen2 = scale_product(&a, &transplant_sequence(&p, &f2).unwrap());
        for n in 1..=6u64 {
            let direct = gen_combo.term(n).unwrap();
            let recombined = RealFn::scaled_sum(vec![
                (1.0, gen1.term(n).unwrap()),
                (-1.0, gen2.term(n).unwrap()),
            ])
            .unwrap();
            assert!(fn_equal_sampled(&direct, &recombined, 1e-12).unwrap());
        }
    }

    #[test]
    fn isometry_rows() {
        let p = default_partition(unit());
        let fs = vec![
            RealFn::power(unit(), 2.0).unwrap(),
            RealFn::zero(unit()),
            RealFn::scaled(3.0, &RealFn::power(unit(), 1.0).unwrap()),
        ];
        let rows = isometry_check(&p, &fs, 10).unwrap();
        assert!(rows.iter().all(|r| r.pass));
        assert!((rows[0].terms_sup.lower - 1.0).abs() < 1e-9);
        assert_eq!(rows[1].terms_sup.lower, 0.0);
        assert!((rows[2].terms_sup.lower - 3.0).abs() < 1e-9);
    }

    #[test]
    fn norm_identity_two_functions() {
        let p = default_partition(unit());
        let a = ScalarSeq::make_power(1.0).unwrap();
        let fs = vec![
            RealFn::power(unit(), 1.0).unwrap(),
            RealFn::power(unit(), 2.0).unwrap(),
        ];
        let report =
            combination_norm_identity(&p, &a, &fs, &[1.0, -1.0], 10).unwrap();
        assert!(report.depth_covers_peak);
        assert_eq!(report.scalar_peak.argmax, 1);
        assert!((report.lhs_sup - 0.25).abs() < 1e-9, "lhs {}", report.lhs_sup);
        assert!((report.rhs - 0.25).abs() < 1e-9, "rhs {}", report.rhs);
        assert!(report.agree);
        assert_eq!(report.lhs_argmax_n, 1);
    }

    #[test]
    fn norm_identity_single_function() {
        let p = default_partition(unit());
        let a = ScalarSeq::make_power(1.0).unwrap();
        let f = RealFn::exp(unit(), 1.0).unwrap();
        let expected = f.sup_norm().lower;
        let report = combination_norm_identity(&p, &a, &[f], &[1.0], 8).unwrap();
        assert!(report.agree);
        assert!((report.rhs - expected).abs() < 1e-9);
    }

    #[test]
    fn norm_identity_zero_coefficients() {
        let p = default_partition(unit());
        let a = ScalarSeq::make_power(1.0).unwrap();
        let fs = vec![RealFn::power(unit(), 1.0).unwrap()];
        let report = combination_norm_identity(&p, &a, &fs, &[0.0], 10).unwrap();
        assert_eq!(report.lhs_sup, 0.0);
        assert_eq!(report.rhs, 0.0);
        assert!(report.agree);
    }

    #[test]
    fn norm_identity_flags_uncovered_peak() {
        // Peak at n = 3 with depth 2: the identity cannot be expected yet,
        // and the report must say so instead of failing.
        let p = default_partition(unit());
        let a = ScalarSeq::finite_support(vec![0.5, 0.25, 2.0, 0.125]);
        let fs = vec![RealFn::power(unit(), 1.0).unwrap()];
        let report = combination_norm_identity(&p, &a, &fs, &[1.0], 2).unwrap();
        assert!(!report.depth_covers_peak);
        assert_eq!(report.scalar_peak.argmax, 3);
        assert!(!report.agree);
        let covered = combination_norm_identity(&p, &a, &fs, &[1.0], 4).unwrap();
        assert!(covered.depth_covers_peak);
        assert!(covered.agree);
    }

    #[test]
    fn rank_of_distinct_scalar_generators() {
        let basis: Vec<ScalarSeq> = [0.3, 0.5, 0.7]
            .iter()
            .map(|&c| ScalarSeq::make_power(c).unwrap())
            .collect();
        let family = scalar_span_family(&basis, &ramp_family()).unwrap();
        assert_eq!(independence_rank(&family.generators, 6, 1).unwrap(), 3);
    }

    #[test]
    fn duplicate_generator_drops_rank() {
        let a = ScalarSeq::make_power(0.5).unwrap();
        let u = ramp_family();
        let g = scale_product(&a, &u);
        assert_eq!(independence_rank(&[g.clone(), g], 5, 1).unwrap(), 1);
    }

    #[test]
    fn rank_of_distinct_function_generators() {
        let p = default_partition(unit());
        let a = ScalarSeq::make_power(1.0).unwrap();
        let fs: Vec<RealFn> = (1..=3)
            .map(|c| RealFn::power(unit(), c as f64).unwrap())
            .collect();
        let family = function_span_family(&p, &a, &fs).unwrap();
        assert_eq!(independence_rank(&family.generators, 4, 3).unwrap(), 3);
    }

    #[test]
    fn nonzero_scalars_give_nonzero_sampled_term() {
        let u = ramp_family();
        let a = ScalarSeq::finite_support(vec![0.0, 0.0, 4.0]);
        let f = scale_product(&a, &u);
        let term = f.term(3).unwrap();
        let witness = term
            .domain()
            .grid(257)
            .into_iter()
            .find(|&x| term.eval(x).unwrap().abs() > 1e-10);
        assert!(witness.is_some());
    }

    #[test]
    fn combination_draws_all_affirm_for_power_basis() {
        let basis: Vec<ScalarSeq> = [0.3, 0.5, 0.7, 0.9]
            .iter()
            .map(|&c| ScalarSeq::make_power(c).unwrap())
            .collect();
        let family = scalar_span_family(&basis, &ramp_family()).unwrap();
        let mut rng = Lcg::new(DEFAULT_SEED);
        let report = check_combinations(&family, 25, &mut rng).unwrap();
        assert_eq!(report.outcomes.len(), 25);
        assert!(report.all_affirmed, "{:?}", report.outcomes);
    }

    #[test]
    fn combination_draws_all_affirm_for_function_span() {
        let p = default_partition(unit());
        let a = ScalarSeq::make_power(0.5).unwrap();
        let fs: Vec<RealFn> = (1..=3)
            .map(|c| RealFn::power(unit(), c as f64).unwrap())
            .collect();
        let family = function_span_family(&p, &a, &fs).unwrap();
        let mut rng = Lcg::new(DEFAULT_SEED);
        let report = check_combinations(&family, 25, &mut rng).unwrap();
        assert_eq!(report.outcomes.len(), 25);
        assert!(report.none_failed);
        assert!(report.all_affirmed, "{:?}", report.outcomes);
    }

    #[test]
    fn log_basis_combinations_are_depth_limited_not_failed() {
        // Two log-decay elements: their mixed combinations have no
        // structural recombination rule (both lie outside every summable
        // class, so the one-outside closure does not apply), and the
        // honest verdict is depth-limited.
        let basis = vec![
            ScalarSeq::make_logpower(1.0).unwrap(),
            ScalarSeq::make_logpower(2.0).unwrap(),
        ];
        let family = scalar_span_family(&basis, &ramp_family()).unwrap();
        let mut rng = Lcg::new(DEFAULT_SEED);
        let report = check_combinations(&family, 25, &mut rng).unwrap();
        assert!(report.none_failed);
        assert!(!report.all_affirmed);
        assert!(report
            .outcomes
            .iter()
            .any(|o| matches!(o.verdict, ComboVerdict::DepthLimited(_))));
    }

    #[test]
    fn matrix_rank_basics() {
        assert_eq!(
            matrix_rank(vec![vec![1.0, 2.0], vec![2.0, 4.0]], 1e-10),
            1
        );
        assert_eq!(
            matrix_rank(vec![vec![1.0, 0.0], vec![0.0, 1e-14]], 1e-10),
            1
        );
        assert_eq!(
            matrix_rank(
                vec![
                    vec![1.0, 1.0, 1.0],
                    vec![1.0, 2.0, 4.0],
                    vec![1.0, 3.0, 9.0],
                ],
                1e-10
            ),
            3
        );
        assert_eq!(matrix_rank(vec![vec![0.0, 0.0]], 1e-10), 0);
    }

    proptest! {
        #[test]
        fn scale_product_is_linear(
            alpha in -2.0f64..2.0,
            beta in -2.0f64..2.0,
            c1 in prop::sample::select(vec![0.3f64, 0.5, 1.0]),
            c2 in prop::sample::select(vec![0.7f64, 0.9, 1.5]),
        ) {
            let u = ramp_family();
            let a = ScalarSeq::make_power(c1).unwrap();
            let b = ScalarSeq::make_power(c2).unwrap();
            let combined = ScalarSeq::lin_comb(vec![(alpha, a.clone()), (beta, b.clone())]);
            let lhs = scale_product(&combined, &u);
            let ga = scale_product(&a, &u);
            let gb = scale_product(&b, &u);
            for n in 1..=5u64 {
                let direct = lhs.term(n).unwrap();
                let parts: Vec<(f64, RealFn)> = [
                    (alpha, ga.term(n).unwrap()),
                    (beta, gb.term(n).unwrap()),
                ]
                .into_iter()
                .filter(|(c, _)| *c != 0.0)
                .collect();
                if parts.is_empty() {
                    prop_assert!(direct.is_zero_form() || direct.sup_norm().upper <= 1e-12);
                    continue;
                }
                let recombined = RealFn::scaled_sum(parts).unwrap();
                prop_assert!(fn_equal_sampled(&direct, &recombined, 1e-12).unwrap());
            }
        }
    }
}
