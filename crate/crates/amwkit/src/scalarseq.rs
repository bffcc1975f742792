//! Scalar sequences with structural membership certificates over the null
//! sequences `c0`, the absolutely summable sequences `l1`, and the union of
//! the `lp` spaces for `p >= 1`.
//!
//! Certificates are assigned from how a sequence is built (exponent rules,
//! finite support, polynomial images, linear combinations), never from
//! finite numerics. A field that cannot be decided structurally stays
//! `Unknown`, which downstream blocks any affirmation resting on it.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::PolyNoConst;

/// One membership answer with the comparison that justifies it.
#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    Yes(String),
    No(String),
    Unknown,
}

impl Membership {
    pub fn yes(reason: &str) -> Self {
        Membership::Yes(reason.to_string())
    }

    pub fn no(reason: &str) -> Self {
        Membership::No(reason.to_string())
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Membership::No(_))
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Membership::Yes(r) | Membership::No(r) => Some(r),
            Membership::Unknown => None,
        }
    }
}

/// Membership over `c0`, `l1` and the union of the `lp` spaces, honoring
/// the inclusion chain `l1 c lp c c0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipCert {
    pub in_c0: Membership,
    pub in_l1: Membership,
    pub in_union_lp: Membership,
}

impl MembershipCert {
    pub fn all_yes(reason: &str) -> Self {
        MembershipCert {
            in_c0: Membership::yes(reason),
            in_l1: Membership::yes(reason),
            in_union_lp: Membership::yes(reason),
        }
    }

    /// Eligible to scale a uniformly-far-from-zero family into an AMW
    /// sequence: tends to zero but is not absolutely summable.
    pub fn eligible(&self) -> bool {
        self.in_c0.is_yes() && self.in_l1.is_no()
    }

    /// Fill `Unknown` slots that the inclusion chain already decides:
    /// `l1 yes => union yes => c0 yes` downward from a yes, and
    /// `c0 no => union no => l1 no` downward from a no.
    pub fn completed(mut self) -> Self {
        if self.in_l1.is_yes() && !self.in_union_lp.is_yes() {
            self.in_union_lp = Membership::yes("contains l1");
        }
        if self.in_union_lp.is_yes() && !self.in_c0.is_yes() {
            self.in_c0 = Membership::yes("every lp lies inside c0");
        }
        if self.in_c0.is_no() && !self.in_union_lp.is_no() {
            self.in_union_lp = Membership::no("every lp lies inside c0");
        }
        if self.in_union_lp.is_no() && !self.in_l1.is_no() {
            self.in_l1 = Membership::no("l1 lies inside every lp");
        }
        self
    }

    /// Check the implication chain
    /// `l1 yes => union yes => c0 yes` and `c0 no => union no => l1 no`.
    pub fn validate_chain(&self) -> Result<()> {
        let violations = [
            (self.in_l1.is_yes() && !self.in_union_lp.is_yes(), "l1 yes but union not yes"),
            (self.in_union_lp.is_yes() && !self.in_c0.is_yes(), "union yes but c0 not yes"),
            (self.in_c0.is_no() && !self.in_union_lp.is_no(), "c0 no but union not no"),
            (self.in_union_lp.is_no() && !self.in_l1.is_no(), "union no but l1 not no"),
        ];
        for (bad, msg) in violations {
            if bad {
                return Err(Error::Parameter(format!(
                    "membership chain violated: {msg}"
                )));
            }
        }
        Ok(())
    }
}

/// Structural maximum of `|a_n|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxAbs {
    pub argmax: u64,
    pub value: f64,
    /// False when the value is a scan up to a finite limit with no
    /// structural tail bound.
    pub exact: bool,
}

/// How a sequence is generated. Wrapping kinds hold their base behind an
/// `Arc` so sequences stay cheap to clone and share.
#[derive(Debug, Clone)]
pub enum SeqKind {
    /// `a_n = n^{-c}`, `c > 0`.
    PowerDecay { c: f64 },
    /// `a_n = 1 / ln^c(n + 1)`, `c > 0` (shifted so indices start at 1).
    LogDecay { c: f64 },
    /// Explicit initial values, zero afterwards.
    FiniteSupport { values: Vec<f64> },
    /// `b_n = P(a_n)` for a univariate constant-free polynomial.
    PolyImage {
        base: Arc<ScalarSeq>,
        poly: PolyNoConst,
    },
    /// `factor * a_n`.
    Scaled { factor: f64, base: Arc<ScalarSeq> },
    /// `(-1)^n a_n`.
    Alternating { base: Arc<ScalarSeq> },
    /// `sum_i c_i a_n^{(i)}` over finitely many sequences.
    LinComb { terms: Vec<(f64, Arc<ScalarSeq>)> },
    /// `a_n = v` for all n.
    Constant { value: f64 },
    /// Identically zero.
    Zero,
}

/// A scalar sequence `n -> a_n` (n >= 1) together with its membership
/// certificate.
#[derive(Debug, Clone)]
pub struct ScalarSeq {
    kind: SeqKind,
    cert: MembershipCert,
}

fn power_at(n: u64, c: f64) -> f64 {
    let x = n as f64;
    if c == c.round() && c <= 64.0 {
        1.0 / x.powi(c as i32)
    } else {
        1.0 / x.powf(c)
    }
}

fn log_at(n: u64, c: f64) -> f64 {
    let l = ((n as f64) + 1.0).ln();
    if c == c.round() && c <= 64.0 {
        1.0 / l.powi(c as i32)
    } else {
        1.0 / l.powf(c)
    }
}

impl ScalarSeq {
    /// `a_n = n^{-c}`: always a null sequence; absolutely summable exactly
    /// when `c > 1`; in some `lp` for every positive `c`.
    pub fn make_power(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Parameter(format!(
                "power-decay exponent {c} must be positive"
            )));
        }
        let cert = MembershipCert {
            in_c0: Membership::yes("n^{-c} tends to zero"),
            in_l1: if c > 1.0 {
                Membership::yes("p-series with exponent c > 1")
            } else {
                Membership::no("p-series with exponent c <= 1")
            },
            in_union_lp: Membership::yes("lies in lp for any p > 1/c"),
        };
        Ok(ScalarSeq {
            kind: SeqKind::PowerDecay { c },
            cert,
        })
    }

    /// `a_n = 1/ln^c(n+1)`: a null sequence outside every `lp`.
    pub fn make_logpower(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Parameter(format!(
                "log-power exponent {c} must be positive"
            )));
        }
        let cert = MembershipCert {
            in_c0: Membership::yes("1/ln^c(n+1) tends to zero"),
            in_l1: Membership::no("log powers are not p-summable for any p"),
            in_union_lp: Membership::no("ln^{cp}(n+1) grows slower than n for every p"),
        };
        Ok(ScalarSeq {
            kind: SeqKind::LogDecay { c },
            cert,
        })
    }

    pub fn finite_support(values: Vec<f64>) -> Self {
        ScalarSeq {
            kind: SeqKind::FiniteSupport { values },
            cert: MembershipCert::all_yes("finitely many nonzero terms"),
        }
    }

    pub fn zero() -> Self {
        ScalarSeq {
            kind: SeqKind::Zero,
            cert: MembershipCert::all_yes("zero sequence"),
        }
    }

    pub fn constant(value: f64) -> Self {
        if value == 0.0 {
            return ScalarSeq::zero();
        }
        ScalarSeq {
            kind: SeqKind::Constant { value },
            cert: MembershipCert {
                in_c0: Membership::no("constant sequence with nonzero value"),
                in_l1: Membership::no("constant sequence with nonzero value"),
                in_union_lp: Membership::no("constant sequence with nonzero value"),
            },
        }
    }

    /// `factor * a`; zero factor gives the zero certificate, any other
    /// factor preserves every membership flag.
    pub fn scaled(factor: f64, base: &ScalarSeq) -> Self {
        let cert = if factor == 0.0 {
            MembershipCert::all_yes("scaled by zero")
        } else {
            let annotate = |m: &Membership| match m {
                Membership::Yes(r) => Membership::Yes(format!("{r} (nonzero scaling)")),
                Membership::No(r) => Membership::No(format!("{r} (nonzero scaling)")),
                Membership::Unknown => Membership::Unknown,
            };
            MembershipCert {
                in_c0: annotate(&base.cert.in_c0),
                in_l1: annotate(&base.cert.in_l1),
                in_union_lp: annotate(&base.cert.in_union_lp),
            }
        };
        ScalarSeq {
            kind: SeqKind::Scaled {
                factor,
                base: Arc::new(base.clone()),
            },
            cert,
        }
    }

    /// `(-1)^n a_n`; membership depends only on `|a_n|`, so the certificate
    /// carries over unchanged.
    pub fn alternating(base: &ScalarSeq) -> Self {
        ScalarSeq {
            kind: SeqKind::Alternating {
                base: Arc::new(base.clone()),
            },
            cert: base.cert.clone(),
        }
    }

    /// Finite linear combination. Certificates combine structurally:
    /// all-yes flags survive by the triangle inequality; a single negative
    /// flag among otherwise positive ones flips the sum negative; mixed
    /// cases stay unknown. Combinations of pure power decays get the
    /// sharper dominant-exponent rule: after merging equal exponents, the
    /// smallest surviving exponent decides summability.
    pub fn lin_comb(terms: Vec<(f64, ScalarSeq)>) -> Self {
        let live: Vec<(f64, ScalarSeq)> =
            terms.into_iter().filter(|(c, _)| *c != 0.0).collect();
        if live.is_empty() {
            return ScalarSeq::zero();
        }
        if live.iter().all(|(_, s)| matches!(s.kind, SeqKind::PowerDecay { .. })) {
            return Self::power_combination(&live);
        }
        let combine = |pick: fn(&MembershipCert) -> &Membership, label: &str| {
            let yes = live.iter().filter(|(_, s)| pick(&s.cert).is_yes()).count();
            let no = live.iter().filter(|(_, s)| pick(&s.cert).is_no()).count();
            if yes == live.len() {
                Membership::Yes(format!("every summand in {label}"))
            } else if no == 1 && yes == live.len() - 1 {
                Membership::No(format!(
                    "exactly one summand outside {label}; subspaces are closed under addition"
                ))
            } else {
                Membership::Unknown
            }
        };
        let cert = MembershipCert {
            in_c0: combine(|c| &c.in_c0, "c0"),
            in_l1: combine(|c| &c.in_l1, "l1"),
            in_union_lp: combine(|c| &c.in_union_lp, "the lp union"),
        }
        .completed();
        let arc_terms = live
            .into_iter()
            .map(|(c, s)| (c, Arc::new(s)))
            .collect();
        ScalarSeq {
            kind: SeqKind::LinComb { terms: arc_terms },
            cert,
        }
    }

    fn power_combination(live: &[(f64, ScalarSeq)]) -> Self {
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (coeff, s) in live {
            let SeqKind::PowerDecay { c } = s.kind else {
                unreachable!()
            };
            match merged.iter_mut().find(|(e, _)| *e == c) {
                Some((_, acc)) => *acc += coeff,
                None => merged.push((c, *coeff)),
            }
        }
        merged.retain(|(_, coeff)| *coeff != 0.0);
        let Some(&(min_exp, _)) = merged
            .iter()
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        else {
            return ScalarSeq::zero();
        };
        let in_l1 = if min_exp > 1.0 {
            Membership::yes("every surviving power term has exponent > 1")
        } else {
            Membership::No(format!(
                "dominant power term n^{{-{min_exp}}} has exponent <= 1"
            ))
        };
        let cert = MembershipCert {
            in_c0: Membership::yes("finite sum of power decays"),
            in_l1,
            in_union_lp: Membership::Yes(format!(
                "every term lies in lp for p > 1/{min_exp}"
            )),
        };
        let terms = merged
            .into_iter()
            .map(|(c, coeff)| {
                (
                    coeff,
                    Arc::new(ScalarSeq::make_power(c).expect("exponent came from a valid sequence")),
                )
            })
            .collect();
        ScalarSeq {
            kind: SeqKind::LinComb { terms },
            cert,
        }
    }

    pub fn kind(&self) -> &SeqKind {
        &self.kind
    }

    pub fn cert(&self) -> &MembershipCert {
        &self.cert
    }

    /// `a_n`, `n >= 1`.
    pub fn at(&self, n: u64) -> f64 {
        debug_assert!(n >= 1);
        match &self.kind {
            SeqKind::PowerDecay { c } => power_at(n, *c),
            SeqKind::LogDecay { c } => log_at(n, *c),
            SeqKind::FiniteSupport { values } => {
                values.get((n - 1) as usize).copied().unwrap_or(0.0)
            }
            SeqKind::PolyImage { base, poly } => poly.eval_f64(&[base.at(n)]),
            SeqKind::Scaled { factor, base } => factor * base.at(n),
            SeqKind::Alternating { base } => {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sign * base.at(n)
            }
            SeqKind::LinComb { terms } => terms.iter().map(|(c, s)| c * s.at(n)).sum(),
            SeqKind::Constant { value } => *value,
            SeqKind::Zero => 0.0,
        }
    }

    /// `sum_{n=1}^{N} |a_n|` by direct summation.
    pub fn partial_abs_sum(&self, n_max: u64) -> f64 {
        (1..=n_max).map(|n| self.at(n).abs()).sum()
    }

    /// True when `|a_n|` is nonincreasing by construction.
    pub fn is_abs_nonincreasing(&self) -> bool {
        match &self.kind {
            SeqKind::PowerDecay { .. }
            | SeqKind::LogDecay { .. }
            | SeqKind::Constant { .. }
            | SeqKind::Zero => true,
            SeqKind::FiniteSupport { values } => values
                .windows(2)
                .all(|w| w[0].abs() >= w[1].abs()),
            SeqKind::Scaled { base, .. } => base.is_abs_nonincreasing(),
            SeqKind::Alternating { base } => base.is_abs_nonincreasing(),
            SeqKind::PolyImage { .. } | SeqKind::LinComb { .. } => false,
        }
    }

    /// Exact `sup_{n >= from} |a_n|` when the structure provides it.
    pub fn tail_max_abs(&self, from: u64) -> Option<f64> {
        match &self.kind {
            SeqKind::FiniteSupport { values } => Some(
                values
                    .iter()
                    .skip((from - 1) as usize)
                    .map(|v| v.abs())
                    .fold(0.0f64, f64::max),
            ),
            SeqKind::Scaled { factor, base } => {
                Some(factor.abs() * base.tail_max_abs(from)?)
            }
            SeqKind::Alternating { base } => base.tail_max_abs(from),
            _ if self.is_abs_nonincreasing() => Some(self.at(from).abs()),
            _ => None,
        }
    }

    /// `max_n |a_n|` with its location. Exact for structurally monotone or
    /// finitely supported sequences; otherwise a scan up to `scan_limit`
    /// flagged approximate.
    pub fn max_abs(&self, scan_limit: u64) -> MaxAbs {
        match &self.kind {
            SeqKind::Scaled { factor, base } => {
                let m = base.max_abs(scan_limit);
                MaxAbs {
                    argmax: m.argmax,
                    value: factor.abs() * m.value,
                    exact: m.exact,
                }
            }
            SeqKind::Alternating { base } => base.max_abs(scan_limit),
            SeqKind::FiniteSupport { values } => {
                let mut best = MaxAbs {
                    argmax: 1,
                    value: 0.0,
                    exact: true,
                };
                for (i, v) in values.iter().enumerate() {
                    if v.abs() > best.value {
                        best.argmax = (i + 1) as u64;
                        best.value = v.abs();
                    }
                }
                best
            }
            _ if self.is_abs_nonincreasing() => MaxAbs {
                argmax: 1,
                value: self.at(1).abs(),
                exact: true,
            },
            _ => {
                let mut best = MaxAbs {
                    argmax: 1,
                    value: 0.0,
                    exact: false,
                };
                for n in 1..=scan_limit {
                    let v = self.at(n).abs();
                    if v > best.value {
                        best.argmax = n;
                        best.value = v;
                    }
                }
                best
            }
        }
    }

    /// Structural lower bound on `limsup |a_n|`; zero when nothing better
    /// is known. Positive values witness failure of uniform convergence.
    pub fn limsup_abs_lower(&self) -> f64 {
        match &self.kind {
            SeqKind::Constant { value } => value.abs(),
            SeqKind::Scaled { factor, base } => factor.abs() * base.limsup_abs_lower(),
            SeqKind::Alternating { base } => base.limsup_abs_lower(),
            SeqKind::LinComb { terms } => {
                let mut constant_part = 0.0;
                for (coeff, s) in terms {
                    match &s.kind {
                        SeqKind::Constant { value } => constant_part += coeff * value,
                        _ if s.cert.in_c0.is_yes() => {}
                        _ => return 0.0,
                    }
                }
                constant_part.abs()
            }
            _ => 0.0,
        }
    }
}

/// `b_n = P(a_n)` for a constant-free univariate polynomial, with the
/// limit-comparison certificate: writing `P(x) = p0 x^t + higher terms`,
/// `|P(a_n)| / |a_n|^t -> |p0| > 0`, so when the base sits outside every
/// `lp` so does the image (any `p >= 1` gives `t p >= 1`), and in
/// particular the image is not absolutely summable.
pub fn apply_poly(a: &ScalarSeq, poly: &PolyNoConst) -> Result<ScalarSeq> {
    if poly.nvars() != 1 {
        return Err(Error::Parameter(format!(
            "sequence image needs a univariate polynomial, got {} variables",
            poly.nvars()
        )));
    }
    if !a.cert().in_c0.is_yes() {
        return Err(Error::Precondition(
            "polynomial images are only classified over null sequences".into(),
        ));
    }
    if poly.is_identity() {
        return Ok(a.clone());
    }
    let (t, p0) = poly.lowest_term();
    let p0_abs = p0.to_string();
    let in_c0 = Membership::yes("P has no constant term and a_n tends to zero");
    let (in_l1, in_union_lp) = if a.cert().in_union_lp.is_no() {
        (
            Membership::No(format!(
                "limit comparison |P(a_n)|/|a_n|^{t} -> |{p0_abs}| with base outside every lp"
            )),
            Membership::No(format!(
                "comparison with |a_n|^{t}: t*p >= 1 for every p >= 1"
            )),
        )
    } else {
        (Membership::Unknown, Membership::Unknown)
    };
    Ok(ScalarSeq {
        kind: SeqKind::PolyImage {
            base: Arc::new(a.clone()),
            poly: poly.clone(),
        },
        cert: MembershipCert {
            in_c0,
            in_l1,
            in_union_lp,
        },
    })
}

/// Return the sequence's certificate (stored at construction; kinds and
/// certificates never drift apart because both are fixed together).
pub fn classify(a: &ScalarSeq) -> MembershipCert {
    a.cert().clone()
}

/// First index from which the limit comparison `|P(a_n)|/|a_n|^t` stays
/// inside `[|p0|/2, 2|p0|]` at every checked index up to `max_n`
/// (all n up to 10^4, then doubling). `None` if no such index was found.
pub fn eventual_bracket_start(a: &ScalarSeq, poly: &PolyNoConst, max_n: u64) -> Option<u64> {
    use num_traits::ToPrimitive;
    let (t, p0) = poly.lowest_term();
    let p0_abs = p0.to_f64().unwrap_or(f64::NAN).abs();
    let inside = |n: u64| {
        let base = a.at(n).abs();
        if base == 0.0 {
            return false;
        }
        let ratio = poly.eval_f64(&[a.at(n)]).abs() / base.powi(t as i32);
        (p0_abs / 2.0..=2.0 * p0_abs).contains(&ratio)
    };
    let mut checkpoints: Vec<u64> = (1..=10_000.min(max_n)).collect();
    let mut n = 20_000u64;
    while n <= max_n {
        checkpoints.push(n);
        n *= 2;
    }
    let mut last_outside = 0u64;
    for &n in &checkpoints {
        if !inside(n) {
            last_outside = n;
        }
    }
    if last_outside == *checkpoints.last()? {
        None
    } else {
        Some(last_outside + 1)
    }
}
