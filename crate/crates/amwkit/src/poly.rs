//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Coefficients are kept as exact rationals so that symbolic identities
//! (affine expansion, diagonal substitution) can be checked for equality
//! rather than approximate closeness. Evaluation converts to `f64` at the
//! last moment.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rng::Lcg;

/// Exponent vector, one entry per variable.
pub type Exps = Vec<u32>;

/// Parse a rational from `"p"` or `"p/q"` notation.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim())
        .map_err(|e| Error::Parameter(format!("bad rational literal {s:?}: {e}")))
}

/// Binomial coefficient as an exact big integer.
pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Sparse polynomial over the rationals; the constant term is allowed.
///
/// Terms live in a `BTreeMap` keyed by exponent vector, so iteration order
/// and `Display` output are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exps, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The monomial `x_i` (zero-based variable index).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(exps, BigRational::one());
        p
    }

    /// Build from explicit terms; terms with equal exponents merge.
    pub fn from_terms(nvars: usize, terms: Vec<(Exps, BigRational)>) -> Result<Self> {
        let mut p = Poly::zero(nvars);
        for (exps, coeff) in terms {
            if exps.len() != nvars {
                return Err(Error::Parameter(format!(
                    "exponent vector has length {}, expected {nvars}",
                    exps.len()
                )));
            }
            p.add_term(exps, coeff);
        }
        Ok(p)
    }

    /// Add `coeff * x^exps`, removing the entry if it cancels to zero.
    pub fn add_term(&mut self, exps: Exps, coeff: BigRational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(exps.clone())
            .or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (exps, coeff) in &other.terms {
            out.add_term(exps.clone(), coeff.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (exps, coeff) in &self.terms {
            out.add_term(exps.clone(), -coeff.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: &BigRational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (exps, coeff) in &self.terms {
            out.add_term(exps.clone(), coeff * factor);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(self.nvars, BigRational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn eval_f64(&self, args: &[f64]) -> f64 {
        assert_eq!(args.len(), self.nvars);
        let mut acc = 0.0;
        for (exps, coeff) in &self.terms {
            let mut term = coeff.to_f64().unwrap_or(f64::NAN);
            for (x, &e) in args.iter().zip(exps) {
                term *= x.powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    pub fn eval_rational(&self, args: &[BigRational]) -> BigRational {
        assert_eq!(args.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (x, &e) in args.iter().zip(exps) {
                for _ in 0..e {
                    term *= x;
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitute `x_i := alpha_i * x_i + beta_i` by literal term-by-term
    /// multiplication. Slow but obviously correct; used as the oracle for
    /// the binomial-formula expansion.
    pub fn compose_affine_naive(&self, alphas: &[BigRational], betas: &[BigRational]) -> Poly {
        assert_eq!(alphas.len(), self.nvars);
        assert_eq!(betas.len(), self.nvars);
        let mut out = Poly::zero(self.nvars);
        for (exps, coeff) in &self.terms {
            let mut term = Poly::constant(self.nvars, coeff.clone());
            for (i, &e) in exps.iter().enumerate() {
                let mut lin = Poly::constant(self.nvars, betas[i].clone());
                lin.add_term(
                    {
                        let mut v = vec![0; self.nvars];
                        v[i] = 1;
                        v
                    },
                    alphas[i].clone(),
                );
                term = term.mul(&lin.pow(e));
            }
            out = out.add(&term);
        }
        out
    }

    /// Substitute `x_i := w_i * t` for a single new variable `t`, producing
    /// the univariate polynomial whose coefficient at `t^d` collects every
    /// term of total degree `d` weighted by `prod_i w_i^{j_i}`.
    pub fn substitute_diagonal(&self, weights: &[BigRational]) -> Poly {
        assert_eq!(weights.len(), self.nvars);
        let mut out = Poly::zero(1);
        for (exps, coeff) in &self.terms {
            let mut c = coeff.clone();
            for (w, &e) in weights.iter().zip(exps) {
                for _ in 0..e {
                    c *= w;
                }
            }
            let d: u32 = exps.iter().sum();
            out.add_term(vec![d], c);
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coeff) in &self.terms {
            let mag = coeff.abs();
            if first {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = exps.iter().all(|&e| e == 0);
            if mag != BigRational::one() || is_const {
                write!(f, "{mag}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut wrote_var = false;
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote_var {
                    write!(f, "*")?;
                }
                wrote_var = true;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// A nonzero polynomial with no constant term.
///
/// This is the polynomial shape used throughout the sequence-algebra
/// machinery: applying it to sequences that tend to zero keeps the image in
/// the null sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyNoConst {
    poly: Poly,
}

impl PolyNoConst {
    pub fn new(poly: Poly) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::Parameter(
                "polynomial must have at least one term".into(),
            ));
        }
        if !poly.constant_term().is_zero() {
            return Err(Error::Parameter(
                "polynomial must have no constant term".into(),
            ));
        }
        Ok(PolyNoConst { poly })
    }

    /// Convenience constructor for univariate polynomials from
    /// `(degree, coefficient)` pairs.
    pub fn univariate(terms: &[(u32, BigRational)]) -> Result<Self> {
        let converted = terms
            .iter()
            .map(|(d, c)| (vec![*d], c.clone()))
            .collect::<Vec<_>>();
        PolyNoConst::new(Poly::from_terms(1, converted)?)
    }

    /// Univariate identity `x`.
    pub fn identity() -> Self {
        PolyNoConst {
            poly: Poly::var(1, 0),
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn eval_f64(&self, args: &[f64]) -> f64 {
        self.poly.eval_f64(args)
    }

    /// True when the polynomial is the identity on a single variable.
    pub fn is_identity(&self) -> bool {
        self.poly.nvars() == 1
            && self.poly.num_terms() == 1
            && self
                .poly
                .terms()
                .all(|(e, c)| e == &vec![1] && c == &BigRational::one())
    }

    /// Lowest-degree term `(t, p0)` of a univariate polynomial: the degree
    /// `t >= 1` and coefficient `p0 != 0` driving the small-argument
    /// behaviour `P(x) ~ p0 * x^t`.
    pub fn lowest_term(&self) -> (u32, BigRational) {
        assert_eq!(self.poly.nvars(), 1, "lowest_term needs a univariate polynomial");
        self.poly
            .terms()
            .map(|(e, c)| (e[0], c.clone()))
            .min_by_key(|(e, _)| *e)
            .expect("PolyNoConst is nonzero")
    }

    /// See [`Poly::substitute_diagonal`]. The result has no constant term
    /// but may be identically zero if weighted terms of equal total degree
    /// cancel.
    pub fn substitute_diagonal(&self, weights: &[BigRational]) -> Poly {
        self.poly.substitute_diagonal(weights)
    }
}

impl fmt::Display for PolyNoConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// Draw a random constant-free polynomial with small rational coefficients.
///
/// Exponent vectors are drawn with total degree in `[1, max_degree]`; the
/// draw loops until the accumulated terms do not all cancel.
pub fn seeded_poly(rng: &mut Lcg, nvars: usize, max_degree: u32) -> PolyNoConst {
    loop {
        let nterms = rng.range_u64(1, 4) as usize;
        let mut poly = Poly::zero(nvars);
        for _ in 0..nterms {
            let target = rng.range_u64(1, u64::from(max_degree)) as u32;
            let mut exps = vec![0u32; nvars];
            for _ in 0..target {
                let i = rng.below(nvars as u64) as usize;
                exps[i] += 1;
            }
            let coeff = small_rational(rng);
            poly.add_term(exps, coeff);
        }
        if !poly.is_zero() {
            return PolyNoConst::new(poly).expect("constant-free by construction");
        }
    }
}

/// Nonzero rational with numerator in `[-4, 4]` and denominator in `{1, 2, 3}`.
pub fn small_rational(rng: &mut Lcg) -> BigRational {
    let numer = rng.nonzero_int(4);
    let denom = rng.range_u64(1, 3) as i64;
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}
