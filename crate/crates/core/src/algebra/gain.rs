use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::coefficient::Coefficient;
use crate::error::{Error, Result};

/// Exact nonnegative real: zero or a positive [`Coefficient`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Zero,
    Positive(Coefficient),
}

impl Scalar {
    pub fn from_ratio(r: &BigRational) -> Result<Self> {
        if r.is_zero() {
            Ok(Self::Zero)
        } else {
            Coefficient::from_ratio(r).map(Self::Positive)
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Positive(c) => c.to_f64(),
        }
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        match (self, other) {
            (Self::Zero, Self::Zero) => Ok(Ordering::Equal),
            (Self::Zero, _) => Ok(Ordering::Less),
            (_, Self::Zero) => Ok(Ordering::Greater),
            (Self::Positive(a), Self::Positive(b)) => a.try_cmp(b),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "0"),
            Self::Positive(c) => write!(f, "{c}"),
        }
    }
}

/// `coeff * t^exp` with `exp > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerTerm {
    coeff: Coefficient,
    exp: BigRational,
}

impl PowerTerm {
    pub fn new(coeff: Coefficient, exp: BigRational) -> Result<Self> {
        if !exp.is_positive() {
            return Err(Error::InvalidTerm(format!("exponent {exp} must be positive")));
        }
        Ok(Self { coeff, exp })
    }

    /// Convenience for rational coefficient and exponent.
    pub fn rational(coeff: (u64, u64), exp: (i64, i64)) -> Result<Self> {
        if exp.1 == 0 {
            return Err(Error::InvalidTerm("zero exponent denominator".into()));
        }
        Self::new(
            Coefficient::from_fraction(coeff.0, coeff.1)?,
            BigRational::new(BigInt::from(exp.0), BigInt::from(exp.1)),
        )
    }

    pub fn coeff(&self) -> &Coefficient {
        &self.coeff
    }

    pub fn exp(&self) -> &BigRational {
        &self.exp
    }

    pub fn identity() -> Self {
        Self {
            coeff: Coefficient::one(),
            exp: BigRational::one(),
        }
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let small = |x: &BigInt| x.to_i32().filter(|k| k.abs() <= 64);
        match (small(self.exp.numer()), small(self.exp.denom())) {
            (Some(k), Some(1)) => self.coeff.to_f64() * t.powi(k),
            (Some(k), Some(2)) => self.coeff.to_f64() * t.sqrt().powi(k),
            _ => (self.coeff.ln_f64() + self.exp.to_f64().unwrap_or(f64::NAN) * t.ln()).exp(),
        }
    }

    pub fn evaluate_exact(&self, t: &Coefficient) -> Coefficient {
        self.coeff.mul(&t.pow(&self.exp))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        Self {
            coeff: self.coeff.mul(&inner.coeff.pow(&self.exp)),
            exp: &self.exp * &inner.exp,
        }
    }

    /// Functional inverse `(t / coeff)^(1/exp)`.
    pub fn inverse(&self) -> Self {
        let r = self.exp.recip();
        Self {
            coeff: self.coeff.pow(&-r.clone()),
            exp: r,
        }
    }

    // Point where self(t) = other(t); distinct exponents required.
    fn crossover(&self, other: &Self) -> Coefficient {
        let diff = &other.exp - &self.exp;
        self.coeff.div(&other.coeff).pow(&diff.recip())
    }
}

impl fmt::Display for PowerTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = if self.exp.is_one() {
            "t".to_string()
        } else if self.exp.is_integer() {
            format!("t^{}", self.exp)
        } else {
            format!("t^({})", self.exp)
        };
        if self.coeff.is_one() {
            write!(f, "{t}")
        } else {
            write!(f, "{}·{t}", self.coeff)
        }
    }
}

/// Pointwise maximum of power terms. The empty set is the zero gain.
///
/// Always canonical: one term per exponent, sorted by exponent. Terms with
/// different exponents cross somewhere, so none of them can be dropped.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GainFunction {
    terms: Vec<PowerTerm>,
}

/// Result of a global comparison; `witness` is a `t` where the claim fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Coefficient>,
}

impl Verdict {
    fn pass() -> Self {
        Self {
            holds: true,
            witness: None,
        }
    }

    fn fail(t: Coefficient) -> Self {
        Self {
            holds: false,
            witness: Some(t),
        }
    }
}

/// Canonical form of an arbitrary term set.
pub fn simplify(terms: Vec<PowerTerm>) -> Result<GainFunction> {
    let mut terms = terms;
    terms.sort_by(|a, b| a.exp.cmp(&b.exp));
    let mut out: Vec<PowerTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.exp == t.exp => {
                if t.coeff.try_cmp(&last.coeff)? == Ordering::Greater {
                    *last = t;
                }
            }
            _ => out.push(t),
        }
    }
    Ok(GainFunction { terms: out })
}

impl GainFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self {
            terms: vec![PowerTerm::identity()],
        }
    }

    pub fn from_terms(terms: Vec<PowerTerm>) -> Result<Self> {
        simplify(terms)
    }

    pub fn single(term: PowerTerm) -> Self {
        Self { terms: vec![term] }
    }

    /// `c * t^p` for rational `c` and `p`.
    pub fn power(coeff: (u64, u64), exp: (i64, i64)) -> Result<Self> {
        PowerTerm::rational(coeff, exp).map(Self::single)
    }

    /// `a * t`.
    pub fn linear(a: Coefficient) -> Self {
        Self::single(PowerTerm {
            coeff: a,
            exp: BigRational::one(),
        })
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn simplify(&self) -> Self {
        self.clone()
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        self.terms.iter().map(|p| p.evaluate(t)).fold(0.0, f64::max)
    }

    pub fn evaluate_exact(&self, t: &Scalar) -> Result<Scalar> {
        let Scalar::Positive(t) = t else {
            return Ok(Scalar::Zero);
        };
        let mut best: Option<Coefficient> = None;
        for p in &self.terms {
            let v = p.evaluate_exact(t);
            best = Some(match best {
                None => v,
                Some(b) => b.max_of(&v)?,
            });
        }
        Ok(best.map_or(Scalar::Zero, Scalar::Positive))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len() * inner.terms.len());
        for a in &self.terms {
            for b in &inner.terms {
                out.push(a.compose(b));
            }
        }
        simplify(out)
    }

    pub fn max(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        simplify(self.terms.iter().chain(&other.terms).cloned().collect())
    }

    /// Whether `self(t) < t` for every `t > 0`.
    pub fn is_subidentity(&self) -> Result<Verdict> {
        let one = BigRational::one();
        let mut offending = None;
        for p in &self.terms {
            if p.exp != one || p.coeff.cmp_one()? != Ordering::Less {
                offending = Some(p);
                break;
            }
        }
        let Some(bad) = offending else {
            return Ok(Verdict::pass());
        };
        // t = 1 works whenever some coefficient is at least one.
        for p in &self.terms {
            if p.coeff.cmp_one()? != Ordering::Less {
                return Ok(Verdict::fail(Coefficient::one()));
            }
        }
        // Otherwise bad has c < 1 and p != 1; it meets the identity at t*.
        Ok(Verdict::fail(bad.crossover(&PowerTerm::identity())))
    }

    /// Whether `self(t) <= other(t)` for every `t > 0`.
    pub fn leq_global(&self, other: &Self) -> Result<Verdict> {
        for f in &self.terms {
            if let Some(t) = term_violation(f, &other.terms)? {
                return Ok(Verdict::fail(t));
            }
        }
        Ok(Verdict::pass())
    }

    pub fn invert(&self) -> Result<InverseGain> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        InverseGain::from_terms(self.terms.iter().map(PowerTerm::inverse).collect())
    }
}

// A point where f exceeds every term of g, if one exists.
//
// In log coordinates g - f is a maximum of affine functions, hence convex,
// so its minimum sits at a crossover between two g terms, or it tends to
// -inf at one end when all g terms sit on the same side of f's exponent.
fn term_violation(f: &PowerTerm, g: &[PowerTerm]) -> Result<Option<Coefficient>> {
    if g.is_empty() {
        return Ok(Some(Coefficient::one()));
    }
    let mut candidates = vec![Coefficient::one()];
    for (i, a) in g.iter().enumerate() {
        for b in &g[i + 1..] {
            if a.exp != b.exp {
                candidates.push(a.crossover(b));
            }
        }
    }
    let above = g.iter().all(|q| q.exp > f.exp);
    let below = g.iter().all(|q| q.exp < f.exp);
    if above || below {
        let mut roots = g.iter().map(|q| f.crossover(q));
        let mut edge = roots.next().expect("nonempty");
        for r in roots {
            edge = if above { edge.min_of(&r)? } else { edge.max_of(&r)? };
        }
        let half = Coefficient::from_fraction(1, 2)?;
        let two = Coefficient::from_integer(2)?;
        candidates.push(edge.mul(if above { &half } else { &two }));
    }
    for t in candidates {
        if violates_all(f, g, &t)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

fn violates_all(f: &PowerTerm, g: &[PowerTerm], t: &Coefficient) -> Result<bool> {
    let ft = f.evaluate_exact(t);
    for q in g {
        if ft.try_cmp(&q.evaluate_exact(t))? != Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

impl fmt::Display for GainFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.terms.as_slice() {
            [] => write!(f, "0"),
            [one] => write!(f, "{one}"),
            many => {
                let parts: Vec<String> = many.iter().map(ToString::to_string).collect();
                write!(f, "max{{{}}}", parts.join(", "))
            }
        }
    }
}

/// Pointwise minimum of power terms; the inverse of a nonzero gain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseGain {
    terms: Vec<PowerTerm>,
}

impl InverseGain {
    pub fn from_terms(mut terms: Vec<PowerTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::NotInvertible);
        }
        terms.sort_by(|a, b| a.exp.cmp(&b.exp));
        let mut out: Vec<PowerTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.exp == t.exp => {
                    if t.coeff.try_cmp(&last.coeff)? == Ordering::Less {
                        *last = t;
                    }
                }
                _ => out.push(t),
            }
        }
        Ok(Self { terms: out })
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.terms
            .iter()
            .map(|p| p.evaluate(t))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn evaluate_exact(&self, t: &Scalar) -> Result<Scalar> {
        let Scalar::Positive(t) = t else {
            return Ok(Scalar::Zero);
        };
        let mut best: Option<Coefficient> = None;
        for p in &self.terms {
            let v = p.evaluate_exact(t);
            best = Some(match best {
                None => v,
                Some(b) => b.min_of(&v)?,
            });
        }
        Ok(best.map_or(Scalar::Zero, Scalar::Positive))
    }
}

impl fmt::Display for InverseGain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.terms.as_slice() {
            [one] => write!(f, "{one}"),
            many => {
                let parts: Vec<String> = many.iter().map(ToString::to_string).collect();
                write!(f, "min{{{}}}", parts.join(", "))
            }
        }
    }
}
