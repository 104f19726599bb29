use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factor::{factorize, refine};
use super::precision::{global_precision, sign_of_log_sum, Precision};
use crate::error::{Error, Result};

/// A positive real of the form `prod b_i^{e_i}` with integer bases and
/// rational exponents.
///
/// Bases are kept pairwise coprime and greater than one, so the value is 1
/// exactly when there are no factors. That makes equality decidable without
/// any floating point.
#[derive(Clone, Debug, Default)]
pub struct Coefficient {
    factors: BTreeMap<BigUint, BigRational>,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Coefficient {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_integer(n: u64) -> Result<Self> {
        Self::from_ratio(&int(n as i64))
    }

    /// Exact positive rational.
    pub fn from_ratio(r: &BigRational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidCoefficient(format!("{r} is not positive")));
        }
        Ok(Self::from_parts(r, &BigRational::one()))
    }

    pub fn from_fraction(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidCoefficient("zero denominator".into()));
        }
        Self::from_ratio(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Product of `base^exp` over the given pairs; every base must be positive.
    pub fn from_factors<'a>(
        pairs: impl IntoIterator<Item = (&'a BigRational, &'a BigRational)>,
    ) -> Result<Self> {
        let mut acc = Self::one();
        for (b, e) in pairs {
            if !b.is_positive() {
                return Err(Error::InvalidCoefficient(format!("base {b} is not positive")));
            }
            acc = acc.mul(&Self::from_parts(b, e));
        }
        Ok(acc)
    }

    fn from_parts(base: &BigRational, exp: &BigRational) -> Self {
        let mut raw = Vec::new();
        for (p, m) in factorize(base.numer().magnitude()) {
            raw.push((p, exp * int(m as i64)));
        }
        for (p, m) in factorize(base.denom().magnitude()) {
            raw.push((p, -(exp * int(m as i64))));
        }
        Self { factors: refine(raw) }
    }

    /// Canonical `(base, exponent)` pairs, bases ascending.
    pub fn factors(&self) -> impl Iterator<Item = (&BigUint, &BigRational)> {
        self.factors.iter()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let raw = self
            .factors
            .iter()
            .chain(other.factors.iter())
            .map(|(b, e)| (b.clone(), e.clone()));
        Self { factors: refine(raw) }
    }

    pub fn recip(&self) -> Self {
        Self {
            factors: self.factors.iter().map(|(b, e)| (b.clone(), -e)).collect(),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    pub fn pow(&self, e: &BigRational) -> Self {
        if e.is_zero() {
            return Self::one();
        }
        Self {
            factors: self.factors.iter().map(|(b, x)| (b.clone(), x * e)).collect(),
        }
    }

    /// The value as a rational, when every exponent is an integer.
    pub fn as_rational(&self) -> Option<BigRational> {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (b, e) in &self.factors {
            if !e.is_integer() {
                return None;
            }
            let k = e.to_integer().magnitude().to_u32()?;
            if e.is_positive() {
                num *= b.pow(k);
            } else {
                den *= b.pow(k);
            }
        }
        Some(BigRational::new(
            BigInt::from_biguint(Sign::Plus, num),
            BigInt::from_biguint(Sign::Plus, den),
        ))
    }

    pub fn ln_f64(&self) -> f64 {
        self.factors
            .iter()
            .map(|(b, e)| big_ln(b) * e.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(v) = self
            .as_rational()
            .and_then(|r| r.to_f64())
            .filter(|v| v.is_normal())
        {
            return v;
        }
        self.ln_f64().exp()
    }

    /// Compares against 1 using the process-wide precision.
    pub fn cmp_one(&self) -> Result<Ordering> {
        self.cmp_one_with(&global_precision())
    }

    pub fn cmp_one_with(&self, prec: &Precision) -> Result<Ordering> {
        if self.is_one() {
            return Ok(Ordering::Equal);
        }
        if let Some(o) = self.exact_cmp_one(prec) {
            return Ok(o);
        }
        let parts: Vec<(&BigUint, &BigInt, &BigInt)> = self
            .factors
            .iter()
            .map(|(b, e)| (b, e.numer(), e.denom()))
            .collect();
        let mut bits = prec.start_bits.max(64);
        loop {
            if let Some(o) = sign_of_log_sum(&parts, bits + 32) {
                return Ok(o);
            }
            if bits >= prec.max_bits {
                return Err(Error::ComparisonUndecidable { bits });
            }
            bits = (bits * 4).min(prec.max_bits);
        }
    }

    // Clears denominators and compares integers, if that stays small enough.
    fn exact_cmp_one(&self, prec: &Precision) -> Option<Ordering> {
        let mut l = BigInt::one();
        for e in self.factors.values() {
            l = l.lcm(e.denom());
        }
        let l = l.to_u64()?;
        if l > prec.exact_lcm_max {
            return None;
        }
        let (mut pos_bits, mut neg_bits) = (0u64, 0u64);
        let mut scaled = Vec::with_capacity(self.factors.len());
        for (b, e) in &self.factors {
            let k = (e * int(l as i64)).to_integer();
            let mag = k.magnitude().to_u64()?;
            let cost = mag.checked_mul(b.bits())?;
            if k.is_positive() {
                pos_bits = pos_bits.checked_add(cost)?;
            } else {
                neg_bits = neg_bits.checked_add(cost)?;
            }
            scaled.push((b, k.is_positive(), u32::try_from(mag).ok()?));
        }
        if pos_bits.max(neg_bits) > prec.exact_bit_cap {
            return None;
        }
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (b, positive, k) in scaled {
            if positive {
                num *= b.pow(k);
            } else {
                den *= b.pow(k);
            }
        }
        Some(num.cmp(&den))
    }

    /// Ordering by value using the process-wide precision.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        self.div(other).cmp_one()
    }

    pub fn cmp_with(&self, other: &Self, prec: &Precision) -> Result<Ordering> {
        self.div(other).cmp_one_with(prec)
    }

    /// Larger of the two values.
    pub fn max_of(&self, other: &Self) -> Result<Self> {
        Ok(match self.try_cmp(other)? {
            Ordering::Less => other.clone(),
            _ => self.clone(),
        })
    }

    pub fn min_of(&self, other: &Self) -> Result<Self> {
        Ok(match self.try_cmp(other)? {
            Ordering::Greater => other.clone(),
            _ => self.clone(),
        })
    }

    /// Splits into a rational prefactor and grouped radicals
    /// `(product of bases, exponent in (0, 1))`.
    pub fn split_radicals(&self) -> (BigRational, Vec<(BigUint, BigRational)>) {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        let mut radicals: BTreeMap<BigRational, BigUint> = BTreeMap::new();
        for (b, e) in &self.factors {
            let whole = e.floor();
            let frac = e - &whole;
            let k = whole.to_integer();
            let mag = k.magnitude().to_u32().unwrap_or(u32::MAX);
            if k.is_positive() {
                num *= b.pow(mag);
            } else if k.is_negative() {
                den *= b.pow(mag);
            }
            if !frac.is_zero() {
                *radicals.entry(frac).or_insert_with(BigUint::one) *= b;
            }
        }
        let rational = BigRational::new(
            BigInt::from_biguint(Sign::Plus, num),
            BigInt::from_biguint(Sign::Plus, den),
        );
        (rational, radicals.into_iter().map(|(e, b)| (b, e)).collect())
    }
}

fn big_ln(b: &BigUint) -> f64 {
    let bits = b.bits();
    if bits <= 1000 {
        return b.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (b >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

impl PartialEq for Coefficient {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors || self.div(other).is_one()
    }
}

impl Eq for Coefficient {}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, radicals) = self.split_radicals();
        let mut parts = Vec::new();
        if !r.is_one() || radicals.is_empty() {
            parts.push(r.to_string());
        }
        for (b, e) in radicals {
            parts.push(format!("{b}^({e})"));
        }
        write!(f, "{}", parts.join("·"))
    }
}
