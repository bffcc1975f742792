//! Continuous functions on a compact interval, represented as closed-form
//! pieces so that sup norms, supports and boundary values are computable
//! exactly wherever the form allows it.
//!
//! Every function is a list of pieces covering its domain; adjacent pieces
//! must agree at shared breakpoints to within `1e-12`. Evaluation at a
//! shared breakpoint takes the left piece (the continuity invariant makes
//! the choice immaterial).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Tolerance for the continuity check at piece breakpoints.
pub const CONTINUITY_TOL: f64 = 1e-12;

/// A nondegenerate compact interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::Domain(format!(
                "interval [{lo}, {hi}] must be nondegenerate and finite"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn unit() -> Self {
        Interval { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// `n` equispaced points including both endpoints (`n >= 2`).
    pub fn grid(&self, n: usize) -> Vec<f64> {
        debug_assert!(n >= 2);
        let step = self.len() / (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Closed-form tag for one piece. Several forms are parameterized over the
/// piece they live on (`t` below is the piece-relative coordinate
/// `(x - lo)/(hi - lo)`), which keeps boundary values exact.
#[derive(Debug, Clone)]
pub enum FormKind {
    /// Identically zero.
    Zero,
    /// `slope * x + intercept` in absolute coordinates.
    Affine { slope: f64, intercept: f64 },
    /// `start * (1 - t) + end * t`: the line through the piece's endpoint
    /// values, exact at both ends.
    Ramp { start: f64, end: f64 },
    /// `t^c` with `c > 0`, normalized over the piece.
    Power { c: f64 },
    /// `e^{c x}` in absolute coordinates.
    Exp { c: f64 },
    /// `(1/n) sin^2(2^{n+1} pi x)`, the n-th classic counterexample bump.
    SinSqBump { n: u32 },
    /// `inner` composed with the increasing affine map from the piece onto
    /// `inner`'s domain.
    Transplant { inner: Arc<RealFn> },
    /// Pointwise linear combination of functions sharing the outer domain.
    ScaledSum(Vec<(f64, Arc<RealFn>)>),
    /// Pointwise polynomial image of functions sharing the outer domain.
    PolyOf { args: Vec<Arc<RealFn>>, poly: Poly },
}

/// A verified enclosure of a sup norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEnclosure {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
}

impl NormEnclosure {
    pub fn exact(v: f64) -> Self {
        NormEnclosure {
            lower: v,
            upper: v,
            exact: true,
        }
    }

    pub fn bounds(lower: f64, upper: f64) -> Self {
        debug_assert!(lower <= upper);
        NormEnclosure {
            lower,
            upper,
            exact: false,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }

    /// Midpoint estimate for display and comparisons.
    pub fn estimate(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    /// Scale by a nonnegative factor; exactness survives.
    pub fn scale(&self, factor: f64) -> Self {
        debug_assert!(factor >= 0.0);
        NormEnclosure {
            lower: self.lower * factor,
            upper: self.upper * factor,
            exact: self.exact,
        }
    }
}

/// A continuous function on a compact interval: ordered closed-form pieces
/// covering the domain, cached boundary values, optional exact sup norm and
/// optional support interval (outside it the function vanishes).
#[derive(Debug, Clone)]
pub struct RealFn {
    domain: Interval,
    pieces: Vec<(Interval, FormKind)>,
    value_at_lo: f64,
    value_at_hi: f64,
    known_sup_norm: Option<f64>,
    support: Option<Interval>,
}

fn eval_form(form: &FormKind, piece: Interval, x: f64) -> f64 {
    match form {
        FormKind::Zero => 0.0,
        FormKind::Affine { slope, intercept } => slope * x + intercept,
        FormKind::Ramp { start, end } => {
            let t = (x - piece.lo()) / piece.len();
            start * (1.0 - t) + end * t
        }
        FormKind::Power { c } => {
            let t = (x - piece.lo()) / piece.len();
            if *c == c.round() && *c <= 64.0 {
                t.powi(*c as i32)
            } else {
                t.powf(*c)
            }
        }
        FormKind::Exp { c } => (c * x).exp(),
        FormKind::SinSqBump { n } => {
            let theta = 2f64.powi(*n as i32 + 1) * x;
            let s = (std::f64::consts::PI * theta).sin();
            s * s / f64::from(*n)
        }
        FormKind::Transplant { inner } => {
            let t = (x - piece.lo()) / piece.len();
            let d = inner.domain;
            let y = (d.lo() * (1.0 - t) + d.hi() * t).clamp(d.lo(), d.hi());
            inner.eval(y).expect("transplant image stays in inner domain")
        }
        FormKind::ScaledSum(terms) => terms
            .iter()
            .map(|(c, f)| c * f.eval(x).expect("summand shares the outer domain"))
            .sum(),
        FormKind::PolyOf { args, poly } => {
            let vals: Vec<f64> = args
                .iter()
                .map(|f| f.eval(x).expect("argument shares the outer domain"))
                .collect();
            poly.eval_f64(&vals)
        }
    }
}

/// Monotonicity of a form over its piece: `Some(1)` nondecreasing,
/// `Some(-1)` nonincreasing, `Some(0)` constant, `None` unknown.
fn form_monotone_sign(form: &FormKind) -> Option<i8> {
    match form {
        FormKind::Zero => Some(0),
        FormKind::Affine { slope, .. } => Some(sign_of(*slope)),
        FormKind::Ramp { start, end } => Some(sign_of(end - start)),
        FormKind::Power { .. } => Some(1),
        FormKind::Exp { c } => Some(sign_of(*c)),
        FormKind::SinSqBump { .. } => None,
        FormKind::Transplant { inner } => fn_monotone_sign(inner),
        FormKind::ScaledSum(terms) => {
            let mut acc: i8 = 0;
            for (c, f) in terms {
                let s = sign_of(*c) * fn_monotone_sign(f)?;
                if s != 0 {
                    if acc != 0 && s != acc {
                        return None;
                    }
                    acc = s;
                }
            }
            Some(acc)
        }
        FormKind::PolyOf { .. } => None,
    }
}

fn fn_monotone_sign(f: &RealFn) -> Option<i8> {
    if f.pieces.len() != 1 {
        return None;
    }
    form_monotone_sign(&f.pieces[0].1)
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Golden-section maximization of `g` on `[lo, hi]`; returns the best point
/// and value once the bracket shrinks below `tol`.
fn golden_max(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    if hi - lo <= tol {
        let x = 0.5 * (lo + hi);
        return (x, g(x));
    }
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    while hi - lo > tol {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INVPHI * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INVPHI * (hi - lo);
            g1 = g(x1);
        }
    }
    if g1 >= g2 {
        (x1, g1)
    } else {
        (x2, g2)
    }
}

impl RealFn {
    /// Assemble a function from explicit pieces. The pieces must cover the
    /// domain in order with bitwise-matching breakpoints, and adjacent
    /// pieces must agree at shared breakpoints to within `1e-12`.
    pub fn from_pieces(
        domain: Interval,
        pieces: Vec<(Interval, FormKind)>,
        known_sup_norm: Option<f64>,
        support: Option<Interval>,
    ) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Domain("a function needs at least one piece".into()));
        }
        if pieces[0].0.lo() != domain.lo() {
            return Err(Error::Domain(format!(
                "first piece starts at {}, domain starts at {}",
                pieces[0].0.lo(),
                domain.lo()
            )));
        }
        if pieces[pieces.len() - 1].0.hi() != domain.hi() {
            return Err(Error::Domain(format!(
                "last piece ends at {}, domain ends at {}",
                pieces[pieces.len() - 1].0.hi(),
                domain.hi()
            )));
        }
        for w in pieces.windows(2) {
            let (left, right) = (&w[0], &w[1]);
            if left.0.hi() != right.0.lo() {
                return Err(Error::Domain(format!(
                    "pieces leave a gap between {} and {}",
                    left.0.hi(),
                    right.0.lo()
                )));
            }
            let x = left.0.hi();
            let vl = eval_form(&left.1, left.0, x);
            let vr = eval_form(&right.1, right.0, x);
            if (vl - vr).abs() > CONTINUITY_TOL {
                return Err(Error::Domain(format!(
                    "discontinuity at breakpoint {x}: left {vl}, right {vr}"
                )));
            }
        }
        let value_at_lo = eval_form(&pieces[0].1, pieces[0].0, domain.lo());
        let last = pieces.len() - 1;
        let value_at_hi = eval_form(&pieces[last].1, pieces[last].0, domain.hi());
        Ok(RealFn {
            domain,
            pieces,
            value_at_lo,
            value_at_hi,
            known_sup_norm,
            support,
        })
    }

    fn single(domain: Interval, form: FormKind, known_sup_norm: Option<f64>) -> Self {
        RealFn::from_pieces(domain, vec![(domain, form)], known_sup_norm, None)
            .expect("single full-domain piece is always well formed")
    }

    pub fn zero(domain: Interval) -> Self {
        let mut f = RealFn::single(domain, FormKind::Zero, Some(0.0));
        f.support = None;
        f
    }

    pub fn constant(domain: Interval, v: f64) -> Self {
        RealFn::single(
            domain,
            FormKind::Affine {
                slope: 0.0,
                intercept: v,
            },
            Some(v.abs()),
        )
    }

    pub fn affine(domain: Interval, slope: f64, intercept: f64) -> Self {
        let a = (slope * domain.lo() + intercept).abs();
        let b = (slope * domain.hi() + intercept).abs();
        RealFn::single(
            domain,
            FormKind::Affine { slope, intercept },
            Some(a.max(b)),
        )
    }

    /// `x -> ((x - a)/(b - a))^c` on the domain `[a, b]`, `c > 0`.
    pub fn power(domain: Interval, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Parameter(format!("power exponent {c} must be > 0")));
        }
        Ok(RealFn::single(domain, FormKind::Power { c }, Some(1.0)))
    }

    /// `x -> e^{c x}` on the domain.
    pub fn exp(domain: Interval, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::Parameter(format!("exp rate {c} must be finite")));
        }
        let norm = (c * domain.lo()).exp().max((c * domain.hi()).exp());
        Ok(RealFn::single(domain, FormKind::Exp { c }, Some(norm)))
    }

    /// The n-th bump of the classic counterexample on `[0, 1]`:
    /// `(1/n) sin^2(2^{n+1} pi x)` on `[2^{-(n+1)}, 2^{-n}]`, zero elsewhere.
    /// Its sup norm is exactly `1/n`, attained at `3 * 2^{-(n+2)}`.
    pub fn classic_bump(n: u32) -> Result<Self> {
        if n == 0 || n > 1000 {
            return Err(Error::Parameter(format!(
                "bump index {n} outside the representable range 1..=1000"
            )));
        }
        let domain = Interval::unit();
        let lo = 2f64.powi(-(n as i32) - 1);
        let hi = 2f64.powi(-(n as i32));
        let support = Interval::new(lo, hi)?;
        let mut pieces = vec![
            (support, FormKind::SinSqBump { n }),
            (Interval::new(hi, 1.0)?, FormKind::Zero),
        ];
        if lo > 0.0 {
            pieces.insert(0, (Interval::new(0.0, lo)?, FormKind::Zero));
        }
        RealFn::from_pieces(
            domain,
            pieces,
            Some(1.0 / f64::from(n)),
            Some(support),
        )
    }

    /// `factor * f`, with norm and support metadata carried along.
    pub fn scaled(factor: f64, f: &RealFn) -> Self {
        if factor == 0.0 {
            return RealFn::zero(f.domain);
        }
        let known = f.known_sup_norm.map(|k| k * factor.abs());
        let mut out = RealFn::single(
            f.domain,
            FormKind::ScaledSum(vec![(factor, Arc::new(f.clone()))]),
            known,
        );
        out.support = f.support;
        out
    }

    /// Pointwise `sum_i c_i f_i`; all summands must share one domain. Zero
    /// coefficients are dropped; an empty sum is the zero function. The
    /// support is the hull of the summands' supports when all are known.
    pub fn scaled_sum(terms: Vec<(f64, RealFn)>) -> Result<Self> {
        let live: Vec<(f64, RealFn)> = terms.into_iter().filter(|(c, _)| *c != 0.0).collect();
        let Some(first) = live.first() else {
            return Err(Error::Parameter(
                "scaled_sum of no nonzero terms has no domain; use zero(domain)".into(),
            ));
        };
        let domain = first.1.domain;
        for (_, f) in &live {
            if f.domain != domain {
                return Err(Error::Domain(format!(
                    "summand domain {} differs from {}",
                    f.domain, domain
                )));
            }
        }
        let mut support = Some(live[0].1.support);
        for (_, f) in &live[1..] {
            support = match (support, f.support) {
                (Some(Some(a)), Some(b)) => Some(Some(a.hull(&b))),
                _ => None,
            };
        }
        let arc_terms: Vec<(f64, Arc<RealFn>)> = live
            .into_iter()
            .map(|(c, f)| (c, Arc::new(f)))
            .collect();
        let mut out = RealFn::single(domain, FormKind::ScaledSum(arc_terms), None);
        out.support = support.flatten();
        Ok(out)
    }

    /// Pointwise `poly(f_1(x), ..., f_k(x))`; arity must match and all
    /// arguments must share one domain.
    pub fn poly_of(args: Vec<RealFn>, poly: Poly) -> Result<Self> {
        if args.is_empty() {
            return Err(Error::Parameter("poly_of needs at least one argument".into()));
        }
        if args.len() != poly.nvars() {
            return Err(Error::Parameter(format!(
                "polynomial has {} variables but {} arguments were given",
                poly.nvars(),
                args.len()
            )));
        }
        let domain = args[0].domain;
        for f in &args[1..] {
            if f.domain != domain {
                return Err(Error::Domain(format!(
                    "argument domain {} differs from {}",
                    f.domain, domain
                )));
            }
        }
        let arcs = args.into_iter().map(Arc::new).collect();
        Ok(RealFn::single(domain, FormKind::PolyOf { args: arcs, poly }, None))
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn value_at_lo(&self) -> f64 {
        self.value_at_lo
    }

    pub fn value_at_hi(&self) -> f64 {
        self.value_at_hi
    }

    pub fn known_sup_norm(&self) -> Option<f64> {
        self.known_sup_norm
    }

    pub fn support(&self) -> Option<Interval> {
        self.support
    }

    pub fn pieces(&self) -> &[(Interval, FormKind)] {
        &self.pieces
    }

    /// All piece endpoints, in order.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.pieces.iter().map(|(p, _)| p.lo()).collect();
        pts.push(self.domain.hi());
        pts
    }

    pub fn is_zero_form(&self) -> bool {
        self.pieces
            .iter()
            .all(|(_, form)| matches!(form, FormKind::Zero))
    }

    /// Closed-form value at `x`; at a shared breakpoint the left piece wins.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(Error::Domain(format!(
                "{x} lies outside the domain {}",
                self.domain
            )));
        }
        for (piece, form) in &self.pieces {
            if x <= piece.hi() {
                return Ok(eval_form(form, *piece, x));
            }
        }
        unreachable!("pieces cover the domain");
    }

    fn piece_sup(&self, piece: Interval, form: &FormKind) -> (NormEnclosure, f64) {
        match form {
            FormKind::Zero => (NormEnclosure::exact(0.0), piece.lo()),
            FormKind::Affine { slope, intercept } => {
                let a = (slope * piece.lo() + intercept).abs();
                let b = (slope * piece.hi() + intercept).abs();
                if a >= b {
                    (NormEnclosure::exact(a), piece.lo())
                } else {
                    (NormEnclosure::exact(b), piece.hi())
                }
            }
            FormKind::Ramp { start, end } => {
                if start.abs() >= end.abs() {
                    (NormEnclosure::exact(start.abs()), piece.lo())
                } else {
                    (NormEnclosure::exact(end.abs()), piece.hi())
                }
            }
            FormKind::Power { .. } => (NormEnclosure::exact(1.0), piece.hi()),
            FormKind::Exp { c } => {
                let a = (c * piece.lo()).exp();
                let b = (c * piece.hi()).exp();
                if a >= b {
                    (NormEnclosure::exact(a), piece.lo())
                } else {
                    (NormEnclosure::exact(b), piece.hi())
                }
            }
            FormKind::SinSqBump { n } => {
                let x_star = 3.0 * 2f64.powi(-(*n as i32) - 2);
                debug_assert!(piece.contains(x_star));
                (NormEnclosure::exact(1.0 / f64::from(*n)), x_star)
            }
            FormKind::Transplant { inner } => {
                let enc = inner.sup_norm();
                let (y_star, _) = inner.maximizer_abs();
                let d = inner.domain;
                let t = (y_star - d.lo()) / d.len();
                let x_star = piece.lo() * (1.0 - t) + piece.hi() * t;
                (enc, x_star.clamp(piece.lo(), piece.hi()))
            }
            FormKind::ScaledSum(terms) => {
                if let [(c, f)] = terms.as_slice() {
                    let enc = f.sup_norm().scale(c.abs());
                    let (y_star, _) = f.maximizer_abs();
                    return (enc, y_star.clamp(piece.lo(), piece.hi()));
                }
                if let Some(_sign) = form_monotone_sign(form) {
                    let a = eval_form(form, piece, piece.lo()).abs();
                    let b = eval_form(form, piece, piece.hi()).abs();
                    return if a >= b {
                        (NormEnclosure::exact(a), piece.lo())
                    } else {
                        (NormEnclosure::exact(b), piece.hi())
                    };
                }
                self.sampled_piece_sup(piece, form)
            }
            FormKind::PolyOf { .. } => self.sampled_piece_sup(piece, form),
        }
    }

    /// Adaptive fallback: 1025 samples plus golden-section refinement around
    /// the three best, then a visible non-exact inflation of the upper bound.
    fn sampled_piece_sup(&self, piece: Interval, form: &FormKind) -> (NormEnclosure, f64) {
        let g = |x: f64| eval_form(form, piece, x).abs();
        let n = 1025;
        let xs = piece.grid(n);
        let vals: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());
        let tol = CONTINUITY_TOL * self.domain.len();
        let mut best_x = xs[order[0]];
        let mut best_v = vals[order[0]];
        for &i in order.iter().take(3) {
            let lo = if i == 0 { xs[0] } else { xs[i - 1] };
            let hi = if i == n - 1 { xs[n - 1] } else { xs[i + 1] };
            let (x, v) = golden_max(&g, lo, hi, tol);
            if v > best_v {
                best_v = v;
                best_x = x;
            }
        }
        let upper = best_v * (1.0 + 1e-9) + 1e-12;
        (NormEnclosure::bounds(best_v, upper), best_x)
    }

    /// Verified enclosure of `sup |f|` over the domain. Exact for forms with
    /// known extrema (monotone pieces, the classic bumps, transplants of
    /// such); adaptive sampling otherwise, flagged non-exact.
    pub fn sup_norm(&self) -> NormEnclosure {
        if let Some(k) = self.known_sup_norm {
            return NormEnclosure::exact(k);
        }
        self.computed_sup().0
    }

    /// A point where `|f|` attains (exactly or approximately) its sup, with
    /// the evaluated `|f|` there.
    pub fn maximizer_abs(&self) -> (f64, f64) {
        let (_, x) = self.computed_sup();
        let v = self.eval(x).expect("maximizer stays in the domain").abs();
        (x, v)
    }

    /// Sup-norm enclosure computed from the pieces alone, together with
    /// the best maximizer found. Ignores any stored norm, so it can serve
    /// as an independent cross-check of the metadata.
    pub fn computed_sup(&self) -> (NormEnclosure, f64) {
        let per_piece: Vec<(NormEnclosure, f64)> = self
            .pieces
            .iter()
            .map(|(piece, form)| self.piece_sup(*piece, form))
            .collect();
        let lower = per_piece
            .iter()
            .map(|(e, _)| e.lower)
            .fold(0.0f64, f64::max);
        let upper = per_piece
            .iter()
            .map(|(e, _)| e.upper)
            .fold(0.0f64, f64::max);
        let best = per_piece
            .iter()
            .max_by(|a, b| a.0.lower.partial_cmp(&b.0.lower).unwrap())
            .expect("at least one piece");
        let x_star = best.1;
        // The overall value is exact when the winning piece is exact and no
        // inexact piece could climb above it.
        let exact_winner = per_piece
            .iter()
            .filter(|(e, _)| e.exact)
            .map(|(e, _)| e.lower)
            .fold(f64::NEG_INFINITY, f64::max);
        let inexact_cap = per_piece
            .iter()
            .filter(|(e, _)| !e.exact)
            .map(|(e, _)| e.upper)
            .fold(f64::NEG_INFINITY, f64::max);
        if exact_winner >= inexact_cap && exact_winner > f64::NEG_INFINITY {
            let x = per_piece
                .iter()
                .find(|(e, _)| e.exact && e.lower == exact_winner)
                .map(|(_, x)| *x)
                .unwrap_or(x_star);
            (NormEnclosure::exact(exact_winner), x)
        } else {
            (
                NormEnclosure {
                    lower,
                    upper,
                    exact: false,
                },
                x_star,
            )
        }
    }

    /// Compose with the increasing affine map from `target` onto this
    /// function's domain. The result lives on `target`, takes this
    /// function's boundary values at `target`'s endpoints exactly, and has
    /// the same sup norm.
    pub fn transplant(&self, target: Interval) -> RealFn {
        let mut out = RealFn::single(
            target,
            FormKind::Transplant {
                inner: Arc::new(self.clone()),
            },
            self.known_sup_norm,
        );
        out.value_at_lo = self.value_at_lo;
        out.value_at_hi = self.value_at_hi;
        out
    }

    /// Attach a support interval established by the caller's construction
    /// (outside it the function vanishes). Checkable via
    /// [`RealFn::validate_metadata`].
    pub fn with_support(mut self, support: Interval) -> Self {
        self.support = Some(support);
        self
    }

    /// Check `known_sup_norm` and `support` metadata against `samples`
    /// equispaced evaluations.
    pub fn validate_metadata(&self, samples: usize) -> Result<()> {
        for x in self.domain.grid(samples.max(2)) {
            let v = self.eval(x)?;
            if let Some(k) = self.known_sup_norm {
                if v.abs() > k + 1e-12 {
                    return Err(Error::Domain(format!(
                        "|f({x})| = {} exceeds the declared sup norm {k}",
                        v.abs()
                    )));
                }
            }
            if let Some(s) = self.support {
                if !s.contains(x) && v.abs() > 1e-15 {
                    return Err(Error::Domain(format!(
                        "f({x}) = {v} is nonzero outside the declared support {s}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Compare two functions on a shared domain at 257 equispaced points plus
/// every piece breakpoint of both.
pub fn fn_equal_sampled(f: &RealFn, g: &RealFn, tol: f64) -> Result<bool> {
    if f.domain != g.domain {
        return Err(Error::Domain(format!(
            "domains {} and {} differ",
            f.domain, g.domain
        )));
    }
    let mut points = f.domain.grid(257);
    points.extend(f.breakpoints());
    points.extend(g.breakpoints());
    for x in points {
        if (f.eval(x)? - g.eval(x)?).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}
