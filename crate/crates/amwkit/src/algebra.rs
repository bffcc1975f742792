//! Coordinatewise algebra of function sequences: polynomial combinations
//! of generators, the exact affine-expansion identity, two generator
//! constructions (shifted transplants under one scalar sequence, and a
//! scalar basis over one nonnegative sequence), divergence certification
//! through evaluation at distinguished points, and freeness witnesses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::construct::{transplant_sequence, FnSeq, Partition, SeqOrigin};
use crate::error::{Error, Result};
use crate::poly::{binomial, Poly, PolyNoConst};
use crate::realfn::{Interval, NormEnclosure, RealFn};
use crate::scalarseq::{apply_poly, Membership, ScalarSeq, SeqKind};
use crate::series::{
    AbsoluteCert, AmwCertificate, DivergenceCert, SanityRecord, UniformCert,
};

fn pow_rational(base: &BigRational, exp: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// All componentwise sub-exponents `l <= exps`.
fn sub_exponents(exps: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(exps.len())];
    for &j in exps {
        let mut next = Vec::with_capacity(out.len() * (j as usize + 1));
        for prefix in &out {
            for l in 0..=j {
                let mut p = prefix.clone();
                p.push(l);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Expand `P(alpha_1 x_1 + beta_1, ..., alpha_N x_N + beta_N)` exactly by
/// the binomial formula, not by naive term multiplication. The output may
/// have a constant term. All `alpha_i` must be nonzero, so the substitution
/// is invertible.
pub fn expand_affine(
    p: &PolyNoConst,
    alphas: &[BigRational],
    betas: &[BigRational],
) -> Result<Poly> {
    let n = p.nvars();
    if alphas.len() != n || betas.len() != n {
        return Err(Error::Parameter(format!(
            "polynomial has {n} variables but {} slopes and {} offsets were given",
            alphas.len(),
            betas.len()
        )));
    }
    for (i, a) in alphas.iter().enumerate() {
        if a.is_zero() {
            return Err(Error::Parameter(format!(
                "slope {} is zero; the substitution must be invertible",
                i + 1
            )));
        }
    }
    let mut out = Poly::zero(n);
    for (exps, lambda) in p.poly().terms() {
        for l in sub_exponents(exps) {
            let mut c = lambda.clone();
            for k in 0..n {
                let (jk, lk) = (exps[k], l[k]);
                c *= BigRational::from_integer(binomial(jk, lk));
                c *= pow_rational(&alphas[k], lk);
                c *= pow_rational(&betas[k], jk - lk);
            }
            out.add_term(l, c);
        }
    }
    Ok(out)
}

/// One generator ingredient of the transplant algebra: the input `g`, the
/// normalization `gamma` (reciprocal of `g` at the left endpoint when that
/// value is nonzero, else one), the resulting left-endpoint value
/// `delta = gamma * g(a) + 1` (always exactly 1 or 2), and the shifted
/// function `gamma * g + 1` with its transplanted sequence.
#[derive(Debug, Clone)]
pub struct AlgebraBase {
    pub g: RealFn,
    pub gamma: f64,
    pub delta: f64,
    pub shifted: RealFn,
    pub shifted_norm: NormEnclosure,
    pub transplanted: FnSeq,
}

/// Algebra generated by `(a_n u^i_n)_n` with `u^i` the transplants of the
/// shifted inputs, under a single scalar sequence certified null and
/// outside every `lp` class.
#[derive(Debug, Clone)]
pub struct FunctionAlgebra {
    pub partition: Partition,
    pub scalars: ScalarSeq,
    pub bases: Vec<AlgebraBase>,
    pub generators: Vec<FnSeq>,
}

/// Build the transplant algebra. The scalar hypothesis is structural: the
/// membership certificate must say null yes and union-of-lp no; no numeric
/// test can stand in for it.
pub fn build_function_algebra(
    partition: &Partition,
    a: &ScalarSeq,
    gs: &[RealFn],
) -> Result<FunctionAlgebra> {
    let cert = a.cert();
    if !cert.in_c0.is_yes() || !cert.in_union_lp.is_no() {
        return Err(Error::Precondition(format!(
            "the scalars must be certified null and outside every lp class; \
             got c0 {:?}, union {:?}",
            cert.in_c0, cert.in_union_lp
        )));
    }
    let iv = partition.interval();
    let mut bases = Vec::new();
    let mut generators = Vec::new();
    for (i, g) in gs.iter().enumerate() {
        if g.domain() != iv {
            return Err(Error::Domain(format!(
                "input {i} lives on {} but the partition is on {iv}",
                g.domain()
            )));
        }
        let ga = g.value_at_lo();
        let (gamma, delta) = if ga != 0.0 { (1.0 / ga, 2.0) } else { (1.0, 1.0) };
        let shifted = RealFn::scaled_sum(vec![
            (gamma, g.clone()),
            (1.0, RealFn::constant(iv, 1.0)),
        ])?;
        let transplanted = transplant_sequence(partition, &shifted)?;
        if transplanted.f_cert().is_none() {
            return Err(Error::Precondition(format!(
                "input {i}: the shifted function has no certified positive norm"
            )));
        }
        generators.push(FnSeq::scaled(a, &transplanted));
        bases.push(AlgebraBase {
            g: g.clone(),
            gamma,
            delta,
            shifted_norm: shifted.sup_norm(),
            shifted,
            transplanted,
        });
    }
    Ok(FunctionAlgebra {
        partition: partition.clone(),
        scalars: a.clone(),
        bases,
        generators,
    })
}

/// Apply a constant-free polynomial coordinatewise to generator sequences.
pub fn poly_combine(generators: &[FnSeq], p: &PolyNoConst) -> Result<FnSeq> {
    FnSeq::poly_element(generators.to_vec(), p.clone())
}

/// A polynomial in the generators, realized as a function sequence,
/// together with the univariate reduction of its values at the block entry
/// points (substituting `x_k := delta_k * t`).
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    pub poly: PolyNoConst,
    pub realized: FnSeq,
    /// `Q` with `F_n(entry point) = Q(a_n)`; `None` when the substitution
    /// cancels a nonzero polynomial completely.
    pub entry_poly: Option<PolyNoConst>,
    pub entry_cancelled: bool,
}

impl FunctionAlgebra {
    pub fn element(&self, p: &PolyNoConst) -> Result<AlgebraElement> {
        if p.nvars() != self.generators.len() {
            return Err(Error::Parameter(format!(
                "polynomial has {} variables but the algebra has {} generators",
                p.nvars(),
                self.generators.len()
            )));
        }
        let realized = poly_combine(&self.generators, p)?;
        let weights: Vec<BigRational> = self
            .bases
            .iter()
            .map(|b| BigRational::from_integer(BigInt::from(b.delta as i64)))
            .collect();
        let q = p.substitute_diagonal(&weights);
        let (entry_poly, entry_cancelled) = if q.is_zero() {
            (None, true)
        } else {
            (Some(PolyNoConst::new(q)?), false)
        };
        Ok(AlgebraElement {
            poly: p.clone(),
            realized,
            entry_poly,
            entry_cancelled,
        })
    }

    /// Certify an element: supports stay disjoint blockwise, uniform
    /// convergence comes from null scalars against bounded product norms,
    /// and divergence comes from the entry-point values `Q(a_n)`, whose
    /// series inherits non-summability from the scalars through the lowest
    /// term of `Q`. A cancelled `Q` leaves divergence unknown; that
    /// degenerate case is surfaced, never papered over.
    pub fn certify(&self, e: &AlgebraElement) -> AmwCertificate {
        let mut notes = Vec::new();
        let absolute = AbsoluteCert::DisjointSupports {
            reason: "every generator term lives on block n of the shared partition and \
                     products keep supports, so distinct indices never overlap"
                .into(),
        };
        let budget = self.coefficient_budget(&e.poly);
        let uniform = match &self.scalars.cert().in_c0 {
            Membership::Yes(r) => UniformCert::NullScalarsOnFamily {
                reason: format!(
                    "scalars are null ({r}); every monomial carries at least one scalar \
                     factor and the product norms are bounded by {budget:.6}"
                ),
            },
            _ => UniformCert::Unknown {
                reason: "scalar nullity certificate missing".into(),
            },
        };
        let divergence = match &e.entry_poly {
            Some(q) => {
                let (t, p0) = q.lowest_term();
                match apply_poly(&self.scalars, q) {
                    Ok(image) => match &image.cert().in_l1 {
                        Membership::No(r) => DivergenceCert::NormsNotSummable {
                            reason: format!(
                                "term norms dominate |Q(a_n)| at the block entry points; \
                                 Q has lowest term {p0}*t^{t} and the image series is \
                                 not summable ({r})"
                            ),
                        },
                        _ => DivergenceCert::Unknown {
                            reason: "the scalar image of the entry polynomial carries no \
                                     divergence certificate"
                                .into(),
                        },
                    },
                    Err(err) => DivergenceCert::Unknown {
                        reason: format!("entry-polynomial image failed: {err}"),
                    },
                }
            }
            None => {
                notes.push(
                    "entry polynomial cancels to zero: the element is degenerate for \
                     this certification route"
                        .into(),
                );
                DivergenceCert::Unknown {
                    reason: "divergence unknown at the block entry points \
                             (complete cancellation under the diagonal substitution)"
                        .into(),
                }
            }
        };
        let mut sanity = self.entry_sanity(e);
        let report = entry_identity_check(self, e, 20);
        if let Some(t) = &report.truncated {
            sanity.warnings.push(format!("entry identity check {t}"));
        }
        if report.max_deviation > ENTRY_TOL {
            sanity.warnings.push(format!(
                "entry identity violated: max deviation {:.3e} exceeds {ENTRY_TOL:.0e}",
                report.max_deviation
            ));
        }
        notes.push(format!(
            "entry identity max deviation {:.3e} over n in {:?}..={:?}",
            report.max_deviation,
            report.checked.first().copied().unwrap_or(0),
            report.checked.last().copied().unwrap_or(0)
        ));
        AmwCertificate {
            absolute,
            uniform,
            divergence,
            sanity,
            notes,
        }
    }

    /// `sum_j |lambda_j| prod_k ||gamma_k g_k + 1||^{j_k}`: a uniform bound
    /// for the product norms that appears in the uniform-convergence leg.
    fn coefficient_budget(&self, p: &PolyNoConst) -> f64 {
        let mut budget = 0.0;
        for (exps, lambda) in p.poly().terms() {
            let mut prod = lambda.to_f64().unwrap_or(f64::NAN).abs();
            for (b, &ex) in self.bases.iter().zip(exps) {
                prod *= b.shifted_norm.upper.powi(ex as i32);
            }
            budget += prod;
        }
        budget
    }

    /// Sanity sums use the entry-point values `|Q(a_n)|`, which bound the
    /// term norms from below and stay computable at any depth; the terms
    /// themselves need not be representable that deep.
    fn entry_sanity(&self, e: &AlgebraElement) -> SanityRecord {
        let mut rec = SanityRecord::default();
        match &e.entry_poly {
            Some(q) => {
                let mut sum = 0.0;
                let mut n = 1u64;
                for &cp in &[100u64, 1_000, 10_000] {
                    while n <= cp {
                        sum += q.eval_f64(&[self.scalars.at(n)]).abs();
                        n += 1;
                    }
                    rec.norm_partial_sums.push((cp, sum));
                }
                rec.warnings.push(
                    "sums are entry-point lower bounds |Q(a_n)|, not norm sums".into(),
                );
                if let Some(&(top, s)) = rec.norm_partial_sums.last() {
                    if s < 5.0 {
                        rec.warnings.push(format!(
                            "advisory: entry-point sum at N = {top} is {s:.6}; divergence \
                             here is genuinely slow"
                        ));
                    }
                }
            }
            None => rec
                .warnings
                .push("entry polynomial cancelled; no lower-bound sums available".into()),
        }
        rec
    }
}

const ENTRY_TOL: f64 = 1e-12;

/// Result of checking `F_n(alpha_{3n-1}) = Q(a_n)` numerically.
#[derive(Debug, Clone, Default)]
pub struct EntryIdentityReport {
    /// Indices actually checked (skips `a_n = 0`, stops at collapse).
    pub checked: Vec<u64>,
    pub max_deviation: f64,
    /// Why the check stopped early, when it did.
    pub truncated: Option<String>,
}

/// Evaluate each realized term at its block entry point and compare with
/// the entry polynomial at the scalar value. Indices with `a_n = 0` are
/// skipped: the identity is only used where the scalar is alive.
pub fn entry_identity_check(
    algebra: &FunctionAlgebra,
    e: &AlgebraElement,
    depth: u64,
) -> EntryIdentityReport {
    let mut report = EntryIdentityReport::default();
    for n in 1..=depth {
        let an = algebra.scalars.at(n);
        if an == 0.0 {
            continue;
        }
        let x = algebra.partition.alpha(3 * n - 1);
        let fx = match e.realized.term(n).and_then(|t| t.eval(x)) {
            Ok(v) => v,
            Err(err) => {
                report.truncated = Some(format!("stopped at n = {n}: {err}"));
                break;
            }
        };
        let qx = match &e.entry_poly {
            Some(q) => q.eval_f64(&[an]),
            None => 0.0,
        };
        report.max_deviation = report.max_deviation.max((fx - qx).abs());
        report.checked.push(n);
    }
    report
}

/// Algebra generated by `(a^i_n u_n)_n`: one nonnegative base sequence,
/// one scalar sequence per generator.
#[derive(Debug, Clone)]
pub struct ScalarAlgebra {
    pub basis: Vec<ScalarSeq>,
    pub u: FnSeq,
    /// The common term-norm level; for transplanted bases the norms are
    /// equal across terms, and each term attains this value.
    pub level: f64,
    pub generators: Vec<FnSeq>,
}

/// Build the scalar-basis algebra over a nonnegative family member.
/// Nonnegativity is sampled (101 points on the source for transplants,
/// else per term); a witness of negativity rejects with its location.
pub fn build_scalar_algebra(basis: &[ScalarSeq], u: &FnSeq) -> Result<ScalarAlgebra> {
    let Some(fc) = u.f_cert() else {
        return Err(Error::Precondition(
            "the base sequence carries no family certificate".into(),
        ));
    };
    match u.origin() {
        SeqOrigin::Transplanted { f, .. } => {
            for x in f.domain().grid(101) {
                let v = f.eval(x)?;
                if v < -1e-12 {
                    return Err(Error::Precondition(format!(
                        "the source function is negative at x = {x} (value {v})"
                    )));
                }
            }
        }
        _ => {
            for n in 1..=20u64 {
                let term = u.term(n)?;
                let window = term.support().unwrap_or(term.domain());
                for x in window.grid(101) {
                    let v = term.eval(x)?;
                    if v < -1e-12 {
                        return Err(Error::Precondition(format!(
                            "term {n} is negative at x = {x} (value {v})"
                        )));
                    }
                }
            }
        }
    }
    for (i, a) in basis.iter().enumerate() {
        if !a.cert().eligible() {
            return Err(Error::Precondition(format!(
                "scalar basis element {i} is not eligible (needs: null yes, summable no; \
                 got c0 {:?}, l1 {:?})",
                a.cert().in_c0,
                a.cert().in_l1
            )));
        }
    }
    let generators = basis.iter().map(|a| FnSeq::scaled(a, u)).collect();
    Ok(ScalarAlgebra {
        basis: basis.to_vec(),
        u: u.clone(),
        level: fc.l,
        generators,
    })
}

/// A polynomial in the scalar-basis generators, with the witness-point
/// evaluation reduced to decay exponents when the whole basis is built
/// from reciprocal log powers.
#[derive(Debug, Clone)]
pub struct ScalarAlgebraElement {
    pub poly: PolyNoConst,
    pub realized: FnSeq,
    /// `(exponent, net weight)` pairs: the witness-point values are
    /// `sum w / ln^e(n+1)`, merged by exponent, zero nets dropped, sorted
    /// by exponent. `None` when the basis is not made of log powers.
    pub witness_terms: Option<Vec<(f64, f64)>>,
    /// True when every net weight cancelled: the witness-point route says
    /// nothing about this element.
    pub degenerate: bool,
}

impl ScalarAlgebra {
    pub fn element(&self, p: &PolyNoConst) -> Result<ScalarAlgebraElement> {
        if p.nvars() != self.generators.len() {
            return Err(Error::Parameter(format!(
                "polynomial has {} variables but the algebra has {} generators",
                p.nvars(),
                self.generators.len()
            )));
        }
        let realized = poly_combine(&self.generators, p)?;
        let log_cs: Option<Vec<f64>> = self
            .basis
            .iter()
            .map(|a| match a.kind() {
                SeqKind::LogDecay { c } => Some(*c),
                _ => None,
            })
            .collect();
        let witness_terms = log_cs.map(|cs| {
            let mut merged: Vec<(f64, f64)> = Vec::new();
            for (exps, lambda) in p.poly().terms() {
                let e: f64 = cs.iter().zip(exps).map(|(c, &j)| c * j as f64).sum();
                let total: u32 = exps.iter().sum();
                let w = lambda.to_f64().unwrap_or(f64::NAN)
                    * self.level.powi(total as i32);
                match merged.iter_mut().find(|(e0, _)| *e0 == e) {
                    Some((_, w0)) => *w0 += w,
                    None => merged.push((e, w)),
                }
            }
            merged.retain(|(_, w)| *w != 0.0);
            merged.sort_by(|a, b| a.0.total_cmp(&b.0));
            merged
        });
        let degenerate = witness_terms.as_ref().is_some_and(|t| t.is_empty());
        Ok(ScalarAlgebraElement {
            poly: p.clone(),
            realized,
            witness_terms,
            degenerate,
        })
    }

    /// The point in block `n` where the base term attains the common norm
    /// level: the affine image of the source maximizer for transplants,
    /// otherwise a grid point within `1e-9` of the level.
    pub fn witness_point(&self, n: u64) -> Result<f64> {
        if let SeqOrigin::Transplanted { partition, f, .. } = self.u.origin() {
            let (xstar, _) = f.maximizer_abs();
            let iv = f.domain();
            let lo = partition.alpha(3 * n - 1);
            let hi = partition.alpha(3 * n);
            let t = (xstar - iv.lo()) / iv.len();
            let x = lo * (1.0 - t) + hi * t;
            let term = self.u.term(n)?;
            if (term.eval(x)? - self.level).abs() < 1e-9 {
                return Ok(x);
            }
        }
        let term = self.u.term(n)?;
        for x in term.domain().grid(1025) {
            if (term.eval(x)? - self.level).abs() < 1e-9 {
                return Ok(x);
            }
        }
        Err(Error::Precondition(format!(
            "no point found in term {n} attaining the level {} at grid resolution",
            self.level
        )))
    }

    /// Certify an element. Divergence rests on the witness-point values
    /// `F_n(x_n) = sum_j lambda_j L^{|j|} prod_i (a^i_n)^{j_i}`: for log
    /// bases the smallest surviving decay exponent dominates, and every
    /// reciprocal log power has a divergent series. A fully cancelled
    /// evaluation, or a basis without the log structure, leaves divergence
    /// unknown.
    pub fn certify(&self, e: &ScalarAlgebraElement) -> AmwCertificate {
        let mut notes = Vec::new();
        let absolute = AbsoluteCert::DisjointSupports {
            reason: "all generators scale one disjointly supported sequence, and \
                     products keep supports"
                .into(),
        };
        let uniform = UniformCert::NullScalarsOnFamily {
            reason: "every basis sequence is null, every monomial carries at least one \
                     scalar factor, and the base norms are constant"
                .into(),
        };
        let divergence = match &e.witness_terms {
            None => DivergenceCert::Unknown {
                reason: "no structural product rule for this scalar basis; only \
                         reciprocal log powers are closed under monomials here"
                    .into(),
            },
            Some(terms) => match terms.first() {
                None => {
                    notes.push(
                        "witness-point evaluation cancels identically: the element is \
                         degenerate for this certification route"
                            .into(),
                    );
                    DivergenceCert::Unknown {
                        reason: "divergence unknown at the witness points \
                                 (complete cancellation of the dominant weights)"
                            .into(),
                    }
                }
                Some(&(e0, w0)) => DivergenceCert::NormsNotSummable {
                    reason: format!(
                        "term norms dominate |F_n(x_n)| ~ {w0:.6}/ln^{e0}(n+1), and \
                         reciprocal log powers of every exponent have divergent series"
                    ),
                },
            },
        };
        let mut sanity = self.witness_sanity(e);
        let report = witness_identity_check(self, e, 20);
        if let Some(t) = &report.truncated {
            sanity.warnings.push(format!("witness identity check {t}"));
        }
        if report.max_deviation > WITNESS_TOL {
            sanity.warnings.push(format!(
                "witness identity violated: max deviation {:.3e} exceeds {WITNESS_TOL:.0e}",
                report.max_deviation
            ));
        }
        notes.push(format!(
            "witness identity max deviation {:.3e} over {} indices",
            report.max_deviation,
            report.checked.len()
        ));
        AmwCertificate {
            absolute,
            uniform,
            divergence,
            sanity,
            notes,
        }
    }

    fn witness_sanity(&self, e: &ScalarAlgebraElement) -> SanityRecord {
        let mut rec = SanityRecord::default();
        let Some(terms) = &e.witness_terms else {
            rec.warnings
                .push("no structural witness sums for this basis".into());
            return rec;
        };
        let mut sum = 0.0;
        let mut n = 1u64;
        for &cp in &[100u64, 1_000, 10_000] {
            while n <= cp {
                let l = ((n as f64) + 1.0).ln();
                let v: f64 = terms.iter().map(|(e0, w)| w / l.powf(*e0)).sum();
                sum += v.abs();
                n += 1;
            }
            rec.norm_partial_sums.push((cp, sum));
        }
        rec.warnings
            .push("sums are witness-point lower bounds |F_n(x_n)|, not norm sums".into());
        rec
    }
}

const WITNESS_TOL: f64 = 1e-10;

/// Check `F_n(x_n) = sum_j lambda_j L^{|j|} prod_i (a^i_n)^{j_i}` for
/// `n <= depth`, evaluating the realized term against direct scalar
/// arithmetic at the witness point.
pub fn witness_identity_check(
    algebra: &ScalarAlgebra,
    e: &ScalarAlgebraElement,
    depth: u64,
) -> EntryIdentityReport {
    let mut report = EntryIdentityReport::default();
    for n in 1..=depth {
        let step = (|| -> Result<(f64, f64)> {
            let x = algebra.witness_point(n)?;
            let fx = e.realized.term(n)?.eval(x)?;
            let mut expected = 0.0;
            for (exps, lambda) in e.poly.poly().terms() {
                let mut prod = lambda.to_f64().unwrap_or(f64::NAN);
                let total: u32 = exps.iter().sum();
                prod *= algebra.level.powi(total as i32);
                for (a, &j) in algebra.basis.iter().zip(exps) {
                    prod *= a.at(n).powi(j as i32);
                }
                expected += prod;
            }
            Ok((fx, expected))
        })();
        match step {
            Ok((fx, expected)) => {
                report.max_deviation = report.max_deviation.max((fx - expected).abs());
                report.checked.push(n);
            }
            Err(err) => {
                report.truncated = Some(format!("stopped at n = {n}: {err}"));
                break;
            }
        }
    }
    report
}

/// One polynomial's freeness row: a sampled witness that its realization
/// is not the zero sequence.
#[derive(Debug, Clone)]
pub struct FreenessRow {
    pub poly: String,
    /// `(n, x, |F_n(x)|)` for the first sample exceeding the threshold.
    pub witness: Option<(u64, f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct FreenessReport {
    pub rows: Vec<FreenessRow>,
    pub all_witnessed: bool,
}

const FREENESS_THRESHOLD: f64 = 1e-10;

/// For each polynomial, realize the element and search block interiors for
/// a point where it exceeds the threshold. A row without a witness is a
/// freeness violation at this depth and resolution; nothing is inferred
/// beyond that.
pub fn freeness_check(
    algebra: &FunctionAlgebra,
    polys: &[PolyNoConst],
    depth: u64,
) -> Result<FreenessReport> {
    let mut rows = Vec::new();
    for p in polys {
        let e = algebra.element(p)?;
        let mut witness = None;
        'search: for n in 1..=depth {
            if algebra.scalars.at(n) == 0.0 {
                continue;
            }
            let term = match e.realized.term(n) {
                Ok(t) => t,
                Err(_) => break,
            };
            let lo = algebra.partition.alpha(3 * n - 1);
            let hi = algebra.partition.alpha(3 * n);
            for x in Interval::new(lo, hi)?.grid(9) {
                let v = term.eval(x)?.abs();
                if v > FREENESS_THRESHOLD {
                    witness = Some((n, x, v));
                    break 'search;
                }
            }
        }
        rows.push(FreenessRow {
            poly: p.to_string(),
            witness,
        });
    }
    let all_witnessed = rows.iter().all(|r| r.witness.is_some());
    Ok(FreenessReport {
        rows,
        all_witnessed,
    })
}
