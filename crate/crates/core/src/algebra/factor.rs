//! Integer factoring and coprime base refinement for [`Coefficient`](super::Coefficient).

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_LIMIT: u64 = 1 << 12;

/// Splits `n` into `(base, multiplicity)` pairs.
///
/// Bases are primes, except that a cofactor above `u64::MAX` which trial
/// division could not break is kept whole. Callers must run [`refine`]
/// afterwards if they combine results from several integers.
pub(crate) fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = Vec::new();
    if n.is_zero() || n.is_one() {
        return out;
    }
    let mut rest = n.clone();
    let twos = rest.trailing_zeros().unwrap_or(0);
    if twos > 0 {
        out.push((BigUint::from(2u8), twos as u32));
        rest >>= twos;
    }
    let mut p = 3u64;
    while p < TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut m = 0u32;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            m += 1;
        }
        if m > 0 {
            out.push((bp, m));
        }
        p += 2;
    }
    if rest.is_one() {
        return out;
    }
    match rest.to_u64() {
        Some(small) => {
            let mut primes = Vec::new();
            split_u64(small, &mut primes);
            primes.sort_unstable();
            for q in primes {
                match out.last_mut() {
                    Some((b, m)) if *b == BigUint::from(q) => *m += 1,
                    _ => out.push((BigUint::from(q), 1)),
                }
            }
        }
        None => out.push((rest, 1)),
    }
    out.sort();
    out
}

fn split_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let mut c = 1u64;
    loop {
        if let Some(d) = rho(n, c) {
            split_u64(d, out);
            split_u64(n / d, out);
            return;
        }
        c += 1;
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for a in WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

// Brent's variant of Pollard rho. Returns a nontrivial divisor or None if
// this polynomial constant cycled without finding one.
fn rho(n: u64, c: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
    let mut r = 1u64;
    let mut q = 1u64;
    let mut ys = 2u64;
    const M: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..M.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += M;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Rewrites a product of powers so that all bases are pairwise coprime and
/// greater than one, dropping zero exponents.
pub(crate) fn refine(
    input: impl IntoIterator<Item = (BigUint, BigRational)>,
) -> BTreeMap<BigUint, BigRational> {
    let mut work: Vec<(BigUint, BigRational)> = Vec::new();
    for (b, e) in input {
        if b.is_one() || e.is_zero() {
            continue;
        }
        work.push((b, e));
    }
    loop {
        let mut merged: BTreeMap<BigUint, BigRational> = BTreeMap::new();
        for (b, e) in work.drain(..) {
            *merged.entry(b).or_insert_with(BigRational::zero) += e;
        }
        merged.retain(|_, e| !e.is_zero());
        let bases: Vec<BigUint> = merged.keys().cloned().collect();
        let mut hit = None;
        'scan: for i in 0..bases.len() {
            for j in i + 1..bases.len() {
                let g = bases[i].gcd(&bases[j]);
                if !g.is_one() {
                    hit = Some((bases[i].clone(), bases[j].clone(), g));
                    break 'scan;
                }
            }
        }
        let Some((a, b, g)) = hit else {
            return merged;
        };
        let ea = merged.remove(&a).unwrap_or_else(BigRational::zero);
        let eb = merged.remove(&b).unwrap_or_else(BigRational::zero);
        work = merged.into_iter().collect();
        // a = g * (a/g), b = g * (b/g); the cofactors may still share g.
        let (a_rest, b_rest) = (&a / &g, &b / &g);
        work.push((g, ea.clone() + eb.clone()));
        if !a_rest.is_one() {
            work.push((a_rest, ea));
        }
        if !b_rest.is_one() {
            work.push((b_rest, eb));
        }
    }
}
