//! Concrete function sequences: the classic counterexample bumps and the
//! block transplant operator that turns one function into a disjointly
//! supported sequence, plus certification of the family properties
//! (pairwise disjoint supports, norms bounded and bounded away from zero).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::PolyNoConst;
use crate::realfn::{FormKind, Interval, NormEnclosure, RealFn};
use crate::scalarseq::{ScalarSeq, SeqKind};

/// An increasing partition `a = alpha_1 < alpha_2 < ... -> b` of an
/// interval, given by a rule `n -> alpha_n`.
#[derive(Clone)]
pub struct Partition {
    interval: Interval,
    kind: PartitionKind,
}

#[derive(Clone)]
enum PartitionKind {
    /// `alpha_n = b - (b-a) * 2^{1-n}`.
    Geometric,
    /// User rule; monotonicity and convergence are only ever spot-checked.
    Custom(Arc<dyn Fn(u64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            PartitionKind::Geometric => "geometric",
            PartitionKind::Custom(_) => "custom",
        };
        write!(f, "Partition({kind} on {})", self.interval)
    }
}

/// The canonical partition `alpha_n = b - (b-a) * 2^{1-n}`: starts at `a`,
/// strictly increasing, converges to `b`.
pub fn default_partition(interval: Interval) -> Partition {
    Partition {
        interval,
        kind: PartitionKind::Geometric,
    }
}

impl Partition {
    /// A user-supplied rule. Its invariants (start at `a`, strictly
    /// increasing, limit `b`) are spot-checked on every use; such
    /// partitions never yield structural (all-`n`) certificates.
    pub fn custom(
        interval: Interval,
        rule: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Partition {
        Partition {
            interval,
            kind: PartitionKind::Custom(Arc::new(rule)),
        }
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// True for built-in rules whose monotonicity and convergence hold for
    /// every index by construction, not only at spot-checked depth.
    pub fn is_structural(&self) -> bool {
        matches!(self.kind, PartitionKind::Geometric)
    }

    /// `alpha_n`, `n >= 1`.
    pub fn alpha(&self, n: u64) -> f64 {
        debug_assert!(n >= 1);
        match &self.kind {
            PartitionKind::Geometric => {
                if n == 1 {
                    return self.interval.lo();
                }
                let e = 1i64 - n as i64;
                if e < -1100 {
                    return self.interval.hi();
                }
                self.interval.hi() - self.interval.len() * 2f64.powi(e as i32)
            }
            PartitionKind::Custom(rule) => rule(n),
        }
    }

    /// Spot-check the partition invariants for indices up to `3*depth + 1`:
    /// `alpha_1 = a`, strictly increasing, and still below `b` at the end.
    pub fn validate(&self, depth: u64) -> Result<()> {
        let top = 3 * depth + 1;
        if self.alpha(1) != self.interval.lo() {
            return Err(Error::Precondition(format!(
                "partition starts at {}, interval starts at {}",
                self.alpha(1),
                self.interval.lo()
            )));
        }
        for n in 1..top {
            let (cur, next) = (self.alpha(n), self.alpha(n + 1));
            if !(cur < next) {
                return Err(Error::Precondition(format!(
                    "partition not strictly increasing at index {n}: alpha_{n} = {cur}, alpha_{} = {next} \
                     (indices this deep may be indistinguishable in f64 on {})",
                    n + 1,
                    self.interval
                )));
            }
        }
        if !(self.alpha(top) < self.interval.hi()) {
            return Err(Error::Precondition(format!(
                "partition reaches the right endpoint by index {top}"
            )));
        }
        Ok(())
    }
}

/// How a function sequence is generated; certificates are derived from this
/// structure.
#[derive(Clone)]
pub enum SeqOrigin {
    /// The classic counterexample bumps on `[0, 1]`.
    Classic,
    /// Block transplants of one function along a partition.
    Transplanted {
        partition: Partition,
        f: Arc<RealFn>,
        norm: NormEnclosure,
    },
    /// Termwise scalar multiples of a base sequence.
    Scaled {
        scalars: ScalarSeq,
        base: Arc<FnSeq>,
    },
    /// Explicit terms, zero beyond the list.
    FiniteTerms { terms: Vec<Arc<RealFn>> },
    /// A base sequence with finitely many terms shifted.
    Perturbed {
        base: Arc<FnSeq>,
        perturbation: Vec<Arc<RealFn>>,
    },
    /// Coordinatewise polynomial image of generator sequences.
    PolyElement {
        generators: Vec<Arc<FnSeq>>,
        poly: PolyNoConst,
    },
    /// Arbitrary rule; nothing structural is known.
    Custom(Arc<dyn Fn(u64) -> RealFn + Send + Sync>),
    /// The null sequence.
    Zero,
}

impl fmt::Debug for SeqOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqOrigin::Classic => write!(f, "Classic"),
            SeqOrigin::Transplanted { partition, .. } => {
                write!(f, "Transplanted({partition:?})")
            }
            SeqOrigin::Scaled { base, .. } => write!(f, "Scaled({:?})", base.origin()),
            SeqOrigin::FiniteTerms { terms } => write!(f, "FiniteTerms(len {})", terms.len()),
            SeqOrigin::Perturbed { base, perturbation } => write!(
                f,
                "Perturbed({:?}, first {} terms)",
                base.origin(),
                perturbation.len()
            ),
            SeqOrigin::PolyElement { generators, poly } => {
                write!(f, "PolyElement({} generators, {poly})", generators.len())
            }
            SeqOrigin::Custom(_) => write!(f, "Custom"),
            SeqOrigin::Zero => write!(f, "Zero"),
        }
    }
}

/// Support knowledge for a single term, derived without building it.
enum SupportMeta {
    /// The term is identically zero.
    Empty,
    /// Conservative interval containing the support.
    Hull(Interval),
    /// No structural support rule; the term must be built and sampled.
    Unknown,
}

/// Certificate that a sequence belongs to the family of disjointly
/// supported, uniformly bounded, uniformly far-from-zero sequences.
#[derive(Debug, Clone)]
pub struct FamilyFCert {
    /// Structural reason the supports are pairwise disjoint for every `n`.
    pub disjoint_supports: String,
    /// Lower bound for `inf_n` of the term norms; positive.
    pub l: f64,
    /// Upper bound for `sup_n` of the term norms; finite.
    pub m: f64,
    /// Whether `l` and `m` are exact values rather than enclosure ends.
    pub exact: bool,
}

/// Outcome of a family check.
#[derive(Debug, Clone)]
pub enum FamilyCheck {
    /// All properties hold for every index, by structure.
    Certified(FamilyFCert),
    /// Nothing failed up to `depth`, but no structural tail argument is
    /// available, so the infinite statement stays open.
    DepthLimited {
        l: f64,
        m: f64,
        depth: u64,
        note: String,
    },
    Failed(FamilyFailure),
}

#[derive(Debug, Clone)]
pub enum FamilyFailure {
    /// Two terms are simultaneously nonzero at the witness point.
    SupportOverlap { n: u64, m: u64, witness: f64 },
    /// Term norms are not uniformly bounded away from zero.
    NotFarFromZero { detail: String },
}

/// A lazily generated sequence of functions on a shared domain.
#[derive(Debug, Clone)]
pub struct FnSeq {
    domain: Interval,
    origin: SeqOrigin,
    f_cert: Option<FamilyFCert>,
}

impl FnSeq {
    pub fn zero(domain: Interval) -> Self {
        FnSeq {
            domain,
            origin: SeqOrigin::Zero,
            f_cert: None,
        }
    }

    /// Explicit initial terms (zero afterwards), all on one domain.
    pub fn finite(domain: Interval, terms: Vec<RealFn>) -> Result<Self> {
        for t in &terms {
            if t.domain() != domain {
                return Err(Error::Domain(format!(
                    "term domain {} differs from {}",
                    t.domain(),
                    domain
                )));
            }
        }
        Ok(FnSeq {
            domain,
            origin: SeqOrigin::FiniteTerms {
                terms: terms.into_iter().map(Arc::new).collect(),
            },
            f_cert: None,
        })
    }

    /// Termwise product `(a_n u_n)_n`.
    pub fn scaled(scalars: &ScalarSeq, base: &FnSeq) -> Self {
        FnSeq {
            domain: base.domain,
            origin: SeqOrigin::Scaled {
                scalars: scalars.clone(),
                base: Arc::new(base.clone()),
            },
            f_cert: None,
        }
    }

    /// Coordinatewise `P(G^1_n, ..., G^k_n)` for a constant-free polynomial.
    pub fn poly_element(generators: Vec<FnSeq>, poly: PolyNoConst) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Parameter("no generators given".into()));
        }
        if generators.len() != poly.nvars() {
            return Err(Error::Parameter(format!(
                "polynomial has {} variables but {} generators were given",
                poly.nvars(),
                generators.len()
            )));
        }
        let domain = generators[0].domain;
        for g in &generators[1..] {
            if g.domain != domain {
                return Err(Error::Domain(format!(
                    "generator domain {} differs from {}",
                    g.domain, domain
                )));
            }
        }
        Ok(FnSeq {
            domain,
            origin: SeqOrigin::PolyElement {
                generators: generators.into_iter().map(Arc::new).collect(),
                poly,
            },
            f_cert: None,
        })
    }

    /// The base sequence with its first terms shifted by `perturbation`.
    pub fn perturbed(base: FnSeq, perturbation: Vec<Arc<RealFn>>) -> Self {
        FnSeq {
            domain: base.domain,
            origin: SeqOrigin::Perturbed {
                base: Arc::new(base),
                perturbation,
            },
            f_cert: None,
        }
    }

    /// Arbitrary generation rule; no structural certificates will attach.
    pub fn custom(
        domain: Interval,
        gen: impl Fn(u64) -> RealFn + Send + Sync + 'static,
    ) -> Self {
        FnSeq {
            domain,
            origin: SeqOrigin::Custom(Arc::new(gen)),
            f_cert: None,
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn origin(&self) -> &SeqOrigin {
        &self.origin
    }

    pub fn f_cert(&self) -> Option<&FamilyFCert> {
        self.f_cert.as_ref()
    }

    /// The n-th term, `n >= 1`. Errors when the term is not representable
    /// (for transplants, when partition points this deep collide in f64).
    pub fn term(&self, n: u64) -> Result<RealFn> {
        match &self.origin {
            SeqOrigin::Classic => {
                let idx = u32::try_from(n).map_err(|_| {
                    Error::Parameter(format!("bump index {n} out of range"))
                })?;
                RealFn::classic_bump(idx)
            }
            SeqOrigin::Transplanted { partition, f, .. } => transplant_block(partition, f, n),
            SeqOrigin::Scaled { scalars, base } => {
                Ok(RealFn::scaled(scalars.at(n), &base.term(n)?))
            }
            SeqOrigin::FiniteTerms { terms } => Ok(terms
                .get((n - 1) as usize)
                .map(|t| (**t).clone())
                .unwrap_or_else(|| RealFn::zero(self.domain))),
            SeqOrigin::Perturbed { base, perturbation } => {
                let b = base.term(n)?;
                match perturbation.get((n - 1) as usize) {
                    Some(g) if !g.is_zero_form() => {
                        RealFn::scaled_sum(vec![(1.0, b), (1.0, (**g).clone())])
                    }
                    _ => Ok(b),
                }
            }
            SeqOrigin::PolyElement { generators, poly } => {
                let args: Result<Vec<RealFn>> =
                    generators.iter().map(|g| g.term(n)).collect();
                let args = args?;
                let mut hull: Option<Interval> = None;
                let mut all_supported = true;
                for a in &args {
                    match (hull, a.support()) {
                        (None, Some(s)) => hull = Some(s),
                        (Some(h), Some(s)) => hull = Some(h.hull(&s)),
                        _ => all_supported = false,
                    }
                }
                let f = RealFn::poly_of(args, poly.poly().clone())?;
                Ok(match (all_supported, hull) {
                    (true, Some(h)) => f.with_support(h),
                    _ => f,
                })
            }
            SeqOrigin::Custom(gen) => Ok(gen(n)),
            SeqOrigin::Zero => Ok(RealFn::zero(self.domain)),
        }
    }

    /// Structural norm enclosure of the n-th term, without building it.
    /// `None` when the origin gives no term-norm rule.
    pub fn term_norm(&self, n: u64) -> Option<NormEnclosure> {
        match &self.origin {
            SeqOrigin::Classic => Some(NormEnclosure::exact(1.0 / n as f64)),
            SeqOrigin::Transplanted { norm, .. } => Some(*norm),
            SeqOrigin::Scaled { scalars, base } => {
                Some(base.term_norm(n)?.scale(scalars.at(n).abs()))
            }
            SeqOrigin::FiniteTerms { terms } => Some(
                terms
                    .get((n - 1) as usize)
                    .map(|t| t.sup_norm())
                    .unwrap_or_else(|| NormEnclosure::exact(0.0)),
            ),
            SeqOrigin::Perturbed { base, perturbation } => {
                if (n - 1) as usize >= perturbation.len() {
                    base.term_norm(n)
                } else {
                    None
                }
            }
            SeqOrigin::PolyElement { .. } | SeqOrigin::Custom(_) => None,
            SeqOrigin::Zero => Some(NormEnclosure::exact(0.0)),
        }
    }

    /// Norm enclosure of the n-th term: the structural rule when available,
    /// otherwise computed from the built term.
    pub fn term_norm_or_eval(&self, n: u64) -> Result<NormEnclosure> {
        match self.term_norm(n) {
            Some(e) => Ok(e),
            None => Ok(self.term(n)?.sup_norm()),
        }
    }

    /// What is known about the n-th term's support without building it.
    fn term_support_meta(&self, n: u64) -> SupportMeta {
        match &self.origin {
            SeqOrigin::Classic => {
                if n == 0 || n > 1000 {
                    return SupportMeta::Unknown;
                }
                let lo = 2f64.powi(-(n as i32) - 1);
                let hi = 2f64.powi(-(n as i32));
                match Interval::new(lo, hi) {
                    Ok(s) => SupportMeta::Hull(s),
                    Err(_) => SupportMeta::Unknown,
                }
            }
            SeqOrigin::Transplanted { partition, .. } => {
                let p1 = partition.alpha(3 * n - 2);
                let p4 = partition.alpha(3 * n + 1);
                match Interval::new(p1, p4) {
                    Ok(s) => SupportMeta::Hull(s),
                    // Block width underflows to zero this deep; nothing of
                    // the term is representable, so nothing can be sampled.
                    Err(_) => SupportMeta::Empty,
                }
            }
            SeqOrigin::Scaled { scalars, base } => {
                if scalars.at(n) == 0.0 {
                    SupportMeta::Empty
                } else {
                    base.term_support_meta(n)
                }
            }
            SeqOrigin::FiniteTerms { terms } => match terms.get((n - 1) as usize) {
                None => SupportMeta::Empty,
                Some(t) if t.is_zero_form() => SupportMeta::Empty,
                Some(t) => match t.support() {
                    Some(s) => SupportMeta::Hull(s),
                    None => SupportMeta::Unknown,
                },
            },
            SeqOrigin::Perturbed { base, perturbation } => {
                let base_meta = base.term_support_meta(n);
                match perturbation.get((n - 1) as usize) {
                    Some(g) if !g.is_zero_form() => match (base_meta, g.support()) {
                        (SupportMeta::Empty, Some(s)) => SupportMeta::Hull(s),
                        (SupportMeta::Hull(h), Some(s)) => SupportMeta::Hull(h.hull(&s)),
                        _ => SupportMeta::Unknown,
                    },
                    _ => base_meta,
                }
            }
            SeqOrigin::PolyElement { generators, .. } => {
                let mut hull: Option<Interval> = None;
                for g in generators {
                    match g.term_support_meta(n) {
                        SupportMeta::Empty => {}
                        SupportMeta::Hull(s) => {
                            hull = Some(match hull {
                                Some(h) => h.hull(&s),
                                None => s,
                            });
                        }
                        SupportMeta::Unknown => return SupportMeta::Unknown,
                    }
                }
                match hull {
                    Some(h) => SupportMeta::Hull(h),
                    None => SupportMeta::Empty,
                }
            }
            SeqOrigin::Custom(_) => SupportMeta::Unknown,
            SeqOrigin::Zero => SupportMeta::Empty,
        }
    }

    /// Structural reason the supports are pairwise disjoint for all `n`,
    /// when the origin provides one.
    pub fn structural_disjointness(&self) -> Option<String> {
        match &self.origin {
            SeqOrigin::Classic => Some(
                "supports (2^-(n+1), 2^-n) are pairwise disjoint dyadic intervals".into(),
            ),
            SeqOrigin::Transplanted { partition, .. } => {
                if partition.is_structural() {
                    Some(
                        "terms live on consecutive blocks (alpha_{3n-2}, alpha_{3n+1}) \
                         of a strictly increasing partition"
                            .into(),
                    )
                } else {
                    None
                }
            }
            SeqOrigin::Scaled { base, .. } => base.structural_disjointness(),
            SeqOrigin::PolyElement { generators, .. } => {
                let mut tags = Vec::new();
                for g in generators {
                    tags.push(g.structural_disjointness()?);
                }
                let shared = shared_structural_partition(generators)?;
                let _ = shared;
                tags.pop()
            }
            _ => None,
        }
    }
}

/// The structural partition all generators share (same interval, built-in
/// rule), if any. Polynomial images of same-partition transplants keep one
/// block per index, so disjointness survives products.
fn shared_structural_partition(generators: &[Arc<FnSeq>]) -> Option<Partition> {
    let mut found: Option<Partition> = None;
    for g in generators {
        let p = base_partition(g)?;
        if !p.is_structural() {
            return None;
        }
        match &found {
            None => found = Some(p),
            Some(q) => {
                if q.interval() != p.interval() {
                    return None;
                }
            }
        }
    }
    found
}

/// Walk through scaling wrappers to the underlying transplant partition.
pub(crate) fn base_partition(seq: &FnSeq) -> Option<Partition> {
    match seq.origin() {
        SeqOrigin::Transplanted { partition, .. } => Some(partition.clone()),
        SeqOrigin::Scaled { base, .. } => base_partition(base),
        SeqOrigin::PolyElement { generators, .. } => shared_structural_partition(generators),
        _ => None,
    }
}

/// Build the n-th transplant block: ramp up to `f(a)`, an affine copy of
/// `f`, ramp down from `f(b)`, zero elsewhere.
fn transplant_block(partition: &Partition, f: &RealFn, n: u64) -> Result<RealFn> {
    let iv = partition.interval();
    let p1 = partition.alpha(3 * n - 2);
    let p2 = partition.alpha(3 * n - 1);
    let p3 = partition.alpha(3 * n);
    let p4 = partition.alpha(3 * n + 1);
    if !(p1 < p2 && p2 < p3 && p3 < p4) {
        return Err(Error::Precondition(format!(
            "partition points for block {n} collapse in f64: \
             ({p1}, {p2}, {p3}, {p4}) on {iv}"
        )));
    }
    let mut pieces = Vec::with_capacity(5);
    if iv.lo() < p1 {
        pieces.push((Interval::new(iv.lo(), p1)?, FormKind::Zero));
    }
    pieces.push((
        Interval::new(p1, p2)?,
        FormKind::Ramp {
            start: 0.0,
            end: f.value_at_lo(),
        },
    ));
    pieces.push((
        Interval::new(p2, p3)?,
        FormKind::Transplant {
            inner: Arc::new(f.clone()),
        },
    ));
    pieces.push((
        Interval::new(p3, p4)?,
        FormKind::Ramp {
            start: f.value_at_hi(),
            end: 0.0,
        },
    ));
    if p4 < iv.hi() {
        pieces.push((Interval::new(p4, iv.hi())?, FormKind::Zero));
    }
    RealFn::from_pieces(
        iv,
        pieces,
        f.known_sup_norm(),
        Some(Interval::new(p1, p4)?),
    )
}

/// Transplant `f` into a sequence of disjointly supported blocks along the
/// partition. Each term keeps the sup norm of `f`; the zero function maps
/// to the null sequence.
pub fn transplant_sequence(partition: &Partition, f: &RealFn) -> Result<FnSeq> {
    if f.domain() != partition.interval() {
        return Err(Error::Domain(format!(
            "function domain {} does not match partition interval {}",
            f.domain(),
            partition.interval()
        )));
    }
    partition.validate(2)?;
    if f.is_zero_form() {
        return Ok(FnSeq::zero(f.domain()));
    }
    let norm = f.sup_norm();
    let f_cert = if norm.lower > 0.0 && partition.is_structural() {
        Some(FamilyFCert {
            disjoint_supports: "terms live on consecutive blocks (alpha_{3n-2}, alpha_{3n+1}) \
                                of a strictly increasing partition"
                .into(),
            l: norm.lower,
            m: norm.upper,
            exact: norm.exact,
        })
    } else {
        None
    };
    Ok(FnSeq {
        domain: f.domain(),
        origin: SeqOrigin::Transplanted {
            partition: partition.clone(),
            f: Arc::new(f.clone()),
            norm,
        },
        f_cert,
    })
}

/// The classic counterexample sequence on `[0, 1]`: term norms `1/n` (so
/// the norm series is harmonic and diverges) while the terms' disjoint
/// supports squeeze toward zero. Not uniformly far from zero, so it carries
/// no family certificate.
pub fn classic_example() -> FnSeq {
    FnSeq {
        domain: Interval::unit(),
        origin: SeqOrigin::Classic,
        f_cert: None,
    }
}

/// Verify the family properties for `n <= depth`: pairwise disjoint
/// supports, norms bounded and bounded away from zero. Support metadata is
/// authoritative for disjointness; sampling can only find overlap
/// witnesses, never certify. A structural origin upgrades the finite check
/// to a certificate for every `n`; otherwise the result is depth-limited.
pub fn check_family_f(u: &FnSeq, depth: u64) -> Result<FamilyCheck> {
    if depth < 2 {
        return Err(Error::Parameter("family checks need depth >= 2".into()));
    }
    let pair_depth = depth.min(30) as usize;
    let mut metas: Vec<SupportMeta> = Vec::with_capacity(pair_depth);
    let mut built: Vec<Option<RealFn>> = Vec::with_capacity(pair_depth);
    for n in 1..=pair_depth as u64 {
        let meta = u.term_support_meta(n);
        built.push(match meta {
            SupportMeta::Unknown => Some(u.term(n)?),
            _ => None,
        });
        metas.push(meta);
    }
    for i in 0..pair_depth {
        for j in (i + 1)..pair_depth {
            let colliding = match (&metas[i], &metas[j]) {
                (SupportMeta::Empty, _) | (_, SupportMeta::Empty) => false,
                (SupportMeta::Hull(a), SupportMeta::Hull(b)) => {
                    a.hi() > b.lo() && b.hi() > a.lo()
                }
                _ => true,
            };
            if !colliding {
                continue;
            }
            if built[i].is_none() {
                built[i] = Some(u.term((i + 1) as u64)?);
            }
            if built[j].is_none() {
                built[j] = Some(u.term((j + 1) as u64)?);
            }
            let (f, g) = (built[i].as_ref().unwrap(), built[j].as_ref().unwrap());
            if let Some(witness) = overlap_witness(f, g)? {
                return Ok(FamilyCheck::Failed(FamilyFailure::SupportOverlap {
                    n: (i + 1) as u64,
                    m: (j + 1) as u64,
                    witness,
                }));
            }
        }
    }

    if let Some(detail) = structurally_not_far_from_zero(u) {
        return Ok(FamilyCheck::Failed(FamilyFailure::NotFarFromZero { detail }));
    }

    let mut l = f64::INFINITY;
    let mut m: f64 = 0.0;
    for n in 1..=depth {
        let enc = u.term_norm_or_eval(n)?;
        l = l.min(enc.lower);
        m = m.max(enc.upper);
    }
    if l <= 0.0 {
        return Ok(FamilyCheck::Failed(FamilyFailure::NotFarFromZero {
            detail: format!("a term with zero norm appears within depth {depth}"),
        }));
    }

    match (u.structural_disjointness(), structural_norm_bounds(u)) {
        (Some(tag), Some((sl, sm, sexact))) => Ok(FamilyCheck::Certified(FamilyFCert {
            disjoint_supports: tag,
            l: sl,
            m: sm,
            exact: sexact,
        })),
        _ => Ok(FamilyCheck::DepthLimited {
            l,
            m,
            depth,
            note: "no structural tail argument; properties verified only up to depth".into(),
        }),
    }
}

/// Structural reason the norms cannot stay away from zero, if one exists.
fn structurally_not_far_from_zero(u: &FnSeq) -> Option<String> {
    match u.origin() {
        SeqOrigin::Classic => {
            Some("term norms are exactly 1/n, which tends to zero".into())
        }
        SeqOrigin::Zero => Some("all terms are zero".into()),
        SeqOrigin::Scaled { scalars, base } => {
            let base_bounded = matches!(
                base.origin(),
                SeqOrigin::Transplanted { .. } | SeqOrigin::Classic
            );
            if base_bounded && scalars.cert().in_c0.is_yes() {
                Some("scaled by a null scalar sequence, so term norms tend to zero".into())
            } else {
                structurally_not_far_from_zero(base)
            }
        }
        _ => None,
    }
}

/// Structural `inf`/`sup` bounds on term norms over all `n`, if available.
fn structural_norm_bounds(u: &FnSeq) -> Option<(f64, f64, bool)> {
    match u.origin() {
        SeqOrigin::Transplanted { norm, .. } => {
            (norm.lower > 0.0).then_some((norm.lower, norm.upper, norm.exact))
        }
        SeqOrigin::Scaled { scalars, base } => {
            let (bl, bm, bexact) = structural_norm_bounds(base)?;
            match scalars.kind() {
                SeqKind::Constant { value } if *value != 0.0 => {
                    Some((bl * value.abs(), bm * value.abs(), bexact))
                }
                _ => None,
            }
        }
        _ => None,
    }
}

/// Search two terms for a point where both are simultaneously nonzero.
/// Disjoint declared supports settle the pair structurally; otherwise 1025
/// samples look for a witness.
fn overlap_witness(f: &RealFn, g: &RealFn) -> Result<Option<f64>> {
    if f.is_zero_form() || g.is_zero_form() {
        return Ok(None);
    }
    if let (Some(sf), Some(sg)) = (f.support(), g.support()) {
        let lo = sf.lo().max(sg.lo());
        let hi = sf.hi().min(sg.hi());
        if hi <= lo {
            return Ok(None);
        }
    }
    let mut best: Option<(f64, f64)> = None;
    for x in f.domain().grid(1025) {
        let a = f.eval(x)?.abs();
        let b = g.eval(x)?.abs();
        let strength = a.min(b);
        if strength > 1e-12 && best.map_or(true, |(s, _)| strength > s) {
            best = Some((strength, x));
        }
    }
    Ok(best.map(|(_, x)| x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realfn::fn_equal_sampled;
    use proptest::prelude::*;

    const H_10000: f64 = 9.787_606_036_044_382_264_2;

    fn unit() -> Interval {
        Interval::unit()
    }

    #[test]
    fn default_partition_values() {
        let p = default_partition(unit());
        assert_eq!(p.alpha(1), 0.0);
        assert_eq!(p.alpha(2), 0.5);
        assert_eq!(p.alpha(3), 0.75);
        assert_eq!(p.alpha(4), 0.875);
        assert_eq!(p.alpha(7), 63.0 / 64.0);

        let q = default_partition(Interval::new(-1.0, 1.0).unwrap());
        assert_eq!(q.alpha(1), -1.0);
        assert_eq!(q.alpha(3), 0.5);
        q.validate(15).unwrap();
    }

    #[test]
    fn unit_partition_exhausts_f64_before_depth_20() {
        // With b = 1 the points 1 - 2^{1-n} collide with 1.0 from index 55
        // on, so blocks 19 and 20 are not representable. Intervals with
        // b = 0 keep dyadic offsets representable far deeper.
        let p = default_partition(unit());
        assert!(p.validate(17).is_ok());
        assert!(p.validate(20).is_err());

        let deep = default_partition(Interval::new(-1.0, 0.0).unwrap());
        assert!(deep.validate(50).is_ok());
    }

    #[test]
    fn transplant_block_values_match_source() {
        let p = default_partition(unit());
        let f = RealFn::power(unit(), 1.0).unwrap();
        let u = transplant_sequence(&p, &f).unwrap();
        let u1 = u.term(1).unwrap();
        assert_eq!(u1.eval(p.alpha(2)).unwrap(), 0.0);
        assert_eq!(u1.eval(p.alpha(3)).unwrap(), 1.0);
        assert_eq!(u1.eval(0.625).unwrap(), 0.5);
    }

    #[test]
    fn transplant_norms_equal_source_norm() {
        let p = default_partition(unit());
        for f in [
            RealFn::power(unit(), 2.0).unwrap(),
            RealFn::exp(unit(), 1.0).unwrap(),
            RealFn::affine(unit(), 2.0, -0.5),
        ] {
            let u = transplant_sequence(&p, &f).unwrap();
            let expected = f.sup_norm();
            for n in 1..=10 {
                assert_eq!(u.term(n).unwrap().sup_norm(), expected, "n = {n}");
                assert_eq!(u.term_norm(n).unwrap(), expected);
            }
        }
    }

    #[test]
    fn transplant_properties_at_breakpoints() {
        // Block n: value f(a) at alpha_{3n-1}, value f(b) at alpha_{3n},
        // zero outside (alpha_{3n-2}, alpha_{3n+1}).
        let p = default_partition(unit());
        for f in [
            RealFn::power(unit(), 1.0).unwrap(),
            RealFn::power(unit(), 3.0).unwrap(),
            RealFn::exp(unit(), 1.0).unwrap(),
            RealFn::affine(unit(), -1.0, 0.75),
        ] {
            let u = transplant_sequence(&p, &f).unwrap();
            for n in 1..=17u64 {
                let term = u.term(n).unwrap();
                assert_eq!(term.eval(p.alpha(3 * n - 1)).unwrap(), f.value_at_lo());
                assert_eq!(term.eval(p.alpha(3 * n)).unwrap(), f.value_at_hi());
                let support = term.support().unwrap();
                for x in outside_points(unit(), support, 101) {
                    assert_eq!(term.eval(x).unwrap(), 0.0, "n = {n}, x = {x}");
                }
            }
        }
    }

    fn outside_points(domain: Interval, support: Interval, count: usize) -> Vec<f64> {
        let mut pts = Vec::new();
        if domain.lo() < support.lo() {
            pts.extend(
                Interval::new(domain.lo(), support.lo())
                    .unwrap()
                    .grid(count / 2 + 1),
            );
        }
        if support.hi() < domain.hi() {
            pts.extend(
                Interval::new(support.hi(), domain.hi())
                    .unwrap()
                    .grid(count / 2 + 1),
            );
        }
        pts
    }

    #[test]
    fn zero_input_gives_null_sequence() {
        let p = default_partition(unit());
        let u = transplant_sequence(&p, &RealFn::zero(unit())).unwrap();
        assert!(u.term(3).unwrap().is_zero_form());
        assert!(u.f_cert().is_none());
    }

    #[test]
    fn domain_mismatch_rejected() {
        let p = default_partition(unit());
        let f = RealFn::power(Interval::new(0.0, 2.0).unwrap(), 1.0).unwrap();
        assert!(transplant_sequence(&p, &f).is_err());
    }

    #[test]
    fn classic_example_norms_and_values() {
        let f = classic_example();
        for n in 1..=10 {
            let enc = f.term_norm(n).unwrap();
            assert!(enc.exact);
            assert_eq!(enc.lower, 1.0 / n as f64);
        }
        let sum: f64 = (1..=10_000u64)
            .map(|n| f.term_norm(n).unwrap().lower)
            .sum();
        assert!((sum - H_10000).abs() < 1e-9);
        assert!((sum - 9.787606).abs() < 1e-6);
    }

    #[test]
    fn family_check_certifies_transplants() {
        let p = default_partition(unit());
        let f = RealFn::power(unit(), 1.0).unwrap();
        let u = transplant_sequence(&p, &f).unwrap();
        match check_family_f(&u, 17).unwrap() {
            FamilyCheck::Certified(cert) => {
                assert_eq!(cert.l, 1.0);
                assert_eq!(cert.m, 1.0);
                assert!(cert.exact);
            }
            other => panic!("expected certification, got {other:?}"),
        }
    }

    #[test]
    fn family_check_rejects_classic_norm_decay() {
        match check_family_f(&classic_example(), 20).unwrap() {
            FamilyCheck::Failed(FamilyFailure::NotFarFromZero { detail }) => {
                assert!(detail.contains("1/n"));
            }
            other => panic!("expected far-from-zero failure, got {other:?}"),
        }
    }

    #[test]
    fn family_check_finds_overlap_witness() {
        let terms = vec![
            RealFn::power(unit(), 1.0).unwrap(),
            RealFn::power(unit(), 2.0).unwrap(),
        ];
        let u = FnSeq::finite(unit(), terms).unwrap();
        match check_family_f(&u, 2).unwrap() {
            FamilyCheck::Failed(FamilyFailure::SupportOverlap { n, m, witness }) => {
                assert_eq!((n, m), (1, 2));
                let f1 = u.term(1).unwrap();
                let f2 = u.term(2).unwrap();
                assert!(f1.eval(witness).unwrap().abs() > 1e-12);
                assert!(f2.eval(witness).unwrap().abs() > 1e-12);
            }
            other => panic!("expected overlap failure, got {other:?}"),
        }
    }

    #[test]
    fn scaled_by_null_sequence_loses_family_membership() {
        let p = default_partition(unit());
        let u = transplant_sequence(&p, &RealFn::power(unit(), 1.0).unwrap()).unwrap();
        let a = ScalarSeq::make_power(1.0).unwrap();
        let scaled = FnSeq::scaled(&a, &u);
        match check_family_f(&scaled, 10).unwrap() {
            FamilyCheck::Failed(FamilyFailure::NotFarFromZero { detail }) => {
                assert!(detail.contains("null"));
            }
            other => panic!("expected far-from-zero failure, got {other:?}"),
        }
    }

    #[test]
    fn constant_scaling_keeps_family_membership() {
        let p = default_partition(unit());
        let u = transplant_sequence(&p, &RealFn::power(unit(), 1.0).unwrap()).unwrap();
        let c = ScalarSeq::constant(3.0);
        let scaled = FnSeq::scaled(&c, &u);
        match check_family_f(&scaled, 10).unwrap() {
            FamilyCheck::Certified(cert) => {
                assert_eq!(cert.l, 3.0);
                assert_eq!(cert.m, 3.0);
            }
            other => panic!("expected certification, got {other:?}"),
        }
    }

    #[test]
    fn custom_partition_is_depth_limited() {
        let iv = unit();
        let p = Partition::custom(iv, |n| 1.0 - 1.0 / n as f64);
        p.validate(10).unwrap();
        let u = transplant_sequence(&p, &RealFn::power(iv, 1.0).unwrap()).unwrap();
        match check_family_f(&u, 10).unwrap() {
            FamilyCheck::DepthLimited { l, m, depth, .. } => {
                assert_eq!((l, m), (1.0, 1.0));
                assert_eq!(depth, 10);
            }
            other => panic!("expected depth-limited report, got {other:?}"),
        }
    }

    #[test]
    fn non_monotone_partition_rejected() {
        let p = Partition::custom(unit(), |n| if n == 3 { 0.4 } else { 1.0 - 2f64.powi(1 - n as i32) });
        assert!(p.validate(5).is_err());
    }

    #[test]
    fn injectivity_witness_on_copy_block() {
        let p = default_partition(unit());
        let f = RealFn::power(unit(), 1.0).unwrap();
        let g = RealFn::power(unit(), 2.0).unwrap();
        let uf = transplant_sequence(&p, &f).unwrap().term(1).unwrap();
        let ug = transplant_sequence(&p, &g).unwrap().term(1).unwrap();
        let copy = Interval::new(p.alpha(2), p.alpha(3)).unwrap();
        let mut distinguished = false;
        for x in copy.grid(101) {
            if (uf.eval(x).unwrap() - ug.eval(x).unwrap()).abs() > 1e-3 {
                distinguished = true;
                break;
            }
        }
        assert!(distinguished);
    }

    proptest! {
        #[test]
        fn transplant_is_linear(
            lambda in -3.0f64..3.0,
            mu in -3.0f64..3.0,
            c in 0.5f64..3.0,
            rate in -2.0f64..2.0,
        ) {
            let iv = unit();
            let p = default_partition(iv);
            let f = RealFn::power(iv, c).unwrap();
            let g = RealFn::exp(iv, rate).unwrap();
            let combo = RealFn::scaled_sum(vec![(lambda, f.clone()), (mu, g.clone())]);
            prop_assume!(combo.is_ok());
            let combo = combo.unwrap();
            let u_combo = transplant_sequence(&p, &combo).unwrap();
            let uf = transplant_sequence(&p, &f).unwrap();
            let ug = transplant_sequence(&p, &g).unwrap();
            for n in 1..=6u64 {
                let direct = u_combo.term(n).unwrap();
                let recombined = RealFn::scaled_sum(vec![
                    (lambda, uf.term(n).unwrap()),
                    (mu, ug.term(n).unwrap()),
                ])
                .unwrap();
                prop_assert!(fn_equal_sampled(&direct, &recombined, 1e-10).unwrap());
            }
        }

        #[test]
        fn blocks_tile_without_overlap(n in 1u64..17, m in 1u64..17) {
            prop_assume!(n != m);
            let p = default_partition(unit());
            let f = RealFn::exp(unit(), 1.0).unwrap();
            let u = transplant_sequence(&p, &f).unwrap();
            let sn = u.term(n).unwrap().support().unwrap();
            let sm = u.term(m).unwrap().support().unwrap();
            let lo = sn.lo().max(sm.lo());
            let hi = sn.hi().min(sm.hi());
            prop_assert!(hi <= lo, "blocks {n} and {m} overlap");
        }
    }
}
