//! Settings for the coefficient comparison ladder, and the fixed-point
//! logarithm used by its floating rung.

use std::sync::RwLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Hard ceiling for the floating rung.
pub const MAX_PRECISION_BITS: u32 = 4096;

/// Controls how [`Coefficient`](super::Coefficient) comparisons are decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precision {
    /// Largest exponent-denominator LCM for which the exact integer rung runs.
    pub exact_lcm_max: u64,
    /// Size cap, in bits, on the integers built by the exact rung.
    pub exact_bit_cap: u64,
    /// First working precision of the floating rung.
    pub start_bits: u32,
    /// Last working precision; each retry multiplies by four.
    pub max_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            exact_lcm_max: 64,
            // roughly 10^4 decimal digits
            exact_bit_cap: 33_220,
            start_bits: 256,
            max_bits: MAX_PRECISION_BITS,
        }
    }
}

impl Precision {
    /// Same settings with the floating rung starting at `bits` (clamped to
    /// `[64, 4096]`).
    pub fn with_start_bits(mut self, bits: u32) -> Self {
        self.start_bits = bits.clamp(64, MAX_PRECISION_BITS);
        self.max_bits = self.max_bits.max(self.start_bits);
        self
    }

    /// Floating rung only; used by tests to exercise it directly.
    pub fn float_only(mut self) -> Self {
        self.exact_lcm_max = 0;
        self
    }
}

static GLOBAL: RwLock<Option<Precision>> = RwLock::new(None);

/// Precision used by the operations that do not take one explicitly.
pub fn global_precision() -> Precision {
    GLOBAL
        .read()
        .map(|g| g.clone().unwrap_or_default())
        .unwrap_or_default()
}

/// Replaces the process-wide default.
pub fn set_global_precision(p: Precision) {
    if let Ok(mut g) = GLOBAL.write() {
        *g = Some(p);
    }
}

/// Fixed-point value `v / 2^bits` with an absolute error bound in ulps.
#[derive(Debug, Clone)]
pub(crate) struct Fixed {
    pub value: BigInt,
    pub err: BigUint,
}

// 2^bits * atanh(num/den) for 0 <= num/den <= 1/3.
fn atanh_fixed(num: &BigUint, den: &BigUint, bits: u32) -> Fixed {
    let one = BigUint::one() << bits;
    if num.is_zero() {
        return Fixed {
            value: BigInt::zero(),
            err: BigUint::zero(),
        };
    }
    let num2 = num * num;
    let den2 = den * den;
    let mut power = (&one * num) / den;
    let mut sum = power.clone();
    let mut k = 1u64;
    let mut terms = 1u64;
    loop {
        power = (&power * &num2) / &den2;
        if power.is_zero() {
            break;
        }
        let t = &power / BigUint::from(2 * k + 1);
        sum += t;
        k += 1;
        terms += 1;
    }
    // Each truncated power carries <= 2 ulps, each division one more, plus
    // a small tail once the power vanished.
    Fixed {
        value: BigInt::from_biguint(Sign::Plus, sum),
        err: BigUint::from(3 * terms + 5),
    }
}

/// `2^bits * ln(b)` for `b >= 1`.
pub(crate) fn ln_fixed(b: &BigUint, bits: u32) -> Fixed {
    if b.is_one() {
        return Fixed {
            value: BigInt::zero(),
            err: BigUint::zero(),
        };
    }
    let k = b.bits() - 1;
    let pow = BigUint::one() << k;
    let ln2 = atanh_fixed(&BigUint::one(), &BigUint::from(3u8), bits);
    let m = atanh_fixed(&(b - &pow), &(b + &pow), bits);
    let kk = BigInt::from(k);
    Fixed {
        value: (&ln2.value * &kk + &m.value) * 2,
        err: (ln2.err * BigUint::from(k) + m.err) * 2u8,
    }
}

/// Sign of `sum e_i ln b_i` (exponents as `num/den` pairs) at the given
/// precision, or `None` when the error bound straddles zero.
pub(crate) fn sign_of_log_sum(
    terms: &[(&BigUint, &BigInt, &BigInt)],
    bits: u32,
) -> Option<std::cmp::Ordering> {
    let mut total = BigInt::zero();
    let mut err = BigUint::zero();
    for (b, num, den) in terms {
        let l = ln_fixed(b, bits);
        let scaled = &l.value * *num;
        let (q, _) = scaled.div_mod_floor(den);
        total += q;
        let ratio = (BigInt::from_biguint(Sign::Plus, l.err) * num.abs()).div_ceil(&den.abs());
        err += ratio.magnitude() + 1u8;
    }
    let mag = total.magnitude();
    if *mag > err {
        Some(if total.is_positive() {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Less
        })
    } else {
        None
    }
}
