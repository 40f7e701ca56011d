//! Elementary integer number theory: primality, factorization, primitive
//! roots, CRT, and modular helpers used throughout the crate.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

use crate::{Error, Result};

/// b^e mod m for u64 operands.
pub fn mod_pow_u64(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Modular inverse of a mod m (m > 1, gcd(a, m) = 1).
pub fn mod_inv_u64(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent-cycle Pollard rho; n must be odd, composite, and not a prime power
/// smaller than the hard-coded iteration budget allows. Returns a nontrivial
/// factor or None.
fn pollard_brent_u64(n: u64, c0: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let n128 = n as u128;
    let mut c = c0 % n;
    if c == 0 {
        c = 1;
    }
    let f = |x: u128| (x * x + c as u128) % n128;
    let mut y: u128 = 2;
    let mut q: u128 = 1;
    let (mut x, mut ys): (u128, u128) = (y, y);
    let mut g: u64 = 1;
    let mut r: u64 = 1;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k: u64 = 0;
        while k < r && g == 1 {
            ys = y;
            let lim = 128.min(r - k);
            for _ in 0..lim {
                y = f(y);
                let diff = if x > y { x - y } else { y - x };
                q = q * diff % n128;
            }
            g = gcd_u64(q as u64, n);
            k += lim;
        }
        r *= 2;
        if r > 1 << 24 {
            return None;
        }
    }
    if g == n {
        // backtrack
        loop {
            ys = f(ys);
            let diff = if x > ys { x - ys } else { ys - x };
            g = gcd_u64(diff as u64, n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Full factorization of a u64 into prime -> exponent.
pub fn factor_u64(n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut n = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let mut c = 1;
        let d = loop {
            if let Some(d) = pollard_brent_u64(m, c) {
                break d;
            }
            c += 1;
        };
        stack.push(d);
        stack.push(m / d);
    }
    out
}

pub fn euler_phi_u64(n: u64) -> u64 {
    let mut phi = n;
    for (&p, _) in factor_u64(n).iter() {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Multiplicative order of a modulo n (gcd(a, n) = 1).
pub fn mult_order_u64(a: u64, n: u64) -> u64 {
    let phi = euler_phi_u64(n);
    let mut order = phi;
    for (&p, &k) in factor_u64(phi).iter() {
        for _ in 0..k {
            if mod_pow_u64(a, order / p, n) == 1 {
                order /= p;
            } else {
                break;
            }
        }
    }
    order
}

/// Smallest positive primitive root modulo a prime n.
pub fn primitive_root(n: u64) -> Result<u64> {
    if !is_prime_u64(n) {
        return Err(Error::InvalidParameter(format!("{n} is not prime")));
    }
    if n == 2 {
        return Ok(1);
    }
    let factors: Vec<u64> = factor_u64(n - 1).keys().copied().collect();
    'outer: for g in 2..n {
        for &q in &factors {
            if mod_pow_u64(g, (n - 1) / q, n) == 1 {
                continue 'outer;
            }
        }
        return Ok(g);
    }
    Err(Error::Internal(format!("no primitive root found mod {n}")))
}

pub fn is_primitive_root(g: u64, n: u64) -> bool {
    if !is_prime_u64(n) || g % n == 0 {
        return false;
    }
    mult_order_u64(g % n, n) == n - 1
}

/// CRT for two coprime moduli: the unique x mod m*n with x = a (m), x = b (n).
pub fn crt2(a: u64, m: u64, b: u64, n: u64) -> u64 {
    let minv = mod_inv_u64(m % n, n).expect("crt2 requires coprime moduli");
    let k = ((b + n - a % n) % n) as u128 * minv as u128 % n as u128;
    (a as u128 + k * m as u128) as u64 % (m as u128 * n as u128) as u64
}

/// Sieve of primes up to n inclusive.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= n {
        if sieve[p] {
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}

/// Iterator over primes congruent to a mod n, ascending, starting above `from`.
pub fn primes_in_class(a: u64, n: u64, from: u64) -> impl Iterator<Item = u64> {
    let mut candidate = from.max(1);
    candidate += (a + n - candidate % n) % n;
    if candidate <= from {
        candidate += n;
    }
    std::iter::successors(Some(candidate), move |&c| Some(c + n)).filter(is_prime_ref)
}

fn is_prime_ref(n: &u64) -> bool {
    is_prime_u64(*n)
}

/// v_p(n) and the cofactor n / p^v for BigInt.
pub fn big_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = 0u32;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(&p);
        if r.is_zero() {
            v += 1;
            n = q;
        } else {
            return (v, n);
        }
    }
}

/// Miller-Rabin for BigInt with fixed bases; probabilistic beyond u64 range.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if let Some(u) = n.to_u64() {
        return is_prime_u64(u);
    }
    if n.sign() != Sign::Plus {
        return false;
    }
    let n_u = n.magnitude().clone();
    let two = BigUint::from(2u32);
    if n_u.is_even() {
        return false;
    }
    let n_minus_1 = &n_u - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, &n_u);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, &n_u);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent_big(n: &BigUint, c0: u32, budget: u64) -> Option<BigUint> {
    let c = BigUint::from(c0);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut q = BigUint::one();
    let (mut x, mut ys) = (y.clone(), y.clone());
    let mut g = BigUint::one();
    let mut r: u64 = 1;
    let mut spent: u64 = 0;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k: u64 = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let lim = 128.min(r - k);
            for _ in 0..lim {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = q * diff % n;
            }
            g = q.gcd(n);
            k += lim;
        }
        spent += r;
        if spent > budget {
            return None;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n || g.is_one() {
        None
    } else {
        Some(g)
    }
}

/// Factor |n| completely: trial division up to `trial_bound`, then recursive
/// Pollard rho on what remains. Errors if a composite cofactor resists the
/// rho budget.
pub fn factor_big(n: &BigInt, trial_bound: u64) -> Result<BTreeMap<BigInt, u32>> {
    if n.is_zero() {
        return Err(Error::ZeroInput("factorization of zero"));
    }
    let mut out: BTreeMap<BigInt, u32> = BTreeMap::new();
    let mut rest = n.abs().to_biguint().expect("abs");
    if rest.is_one() {
        return Ok(out);
    }
    // trial division
    let mut p: u64 = 2;
    while p <= trial_bound {
        let pb = BigUint::from(p);
        if (&pb * &pb) > rest {
            break;
        }
        while (&rest % &pb).is_zero() {
            *out.entry(BigInt::from(p)).or_insert(0) += 1;
            rest /= &pb;
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    if rest.is_one() {
        return Ok(out);
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        let mi = BigInt::from(m.clone());
        if is_probable_prime(&mi) {
            *out.entry(mi).or_insert(0) += 1;
            continue;
        }
        // perfect power?
        if let Some((root, _k)) = perfect_power(&m) {
            // push the root the right number of times by re-splitting
            let mut left = m.clone();
            while !left.is_one() {
                left /= &root;
                stack.push(root.clone());
            }
            continue;
        }
        let mut c = 1u32;
        let d = loop {
            if let Some(d) = pollard_brent_big(&m, c, 1 << 22) {
                break d;
            }
            c += 1;
            if c > 20 {
                return Err(Error::FactorizationFailure(format!(
                    "composite cofactor {m} resisted Pollard rho"
                )));
            }
        };
        stack.push(&m / &d);
        stack.push(d);
    }
    Ok(out)
}

/// Like `factor_big`, but a cofactor that resists the rho budget is returned
/// instead of failing; the factored part is always correct and complete for
/// everything below the returned cofactor.
pub fn factor_big_partial(
    n: &BigInt,
    trial_bound: u64,
) -> Result<(BTreeMap<BigInt, u32>, Option<BigInt>)> {
    match factor_big(n, trial_bound) {
        Ok(f) => Ok((f, None)),
        Err(Error::FactorizationFailure(_)) => {
            // redo trial division, keep the stubborn part
            let mut out: BTreeMap<BigInt, u32> = BTreeMap::new();
            let mut rest = n.abs().to_biguint().expect("abs");
            let mut p: u64 = 2;
            while p <= trial_bound {
                let pb = BigUint::from(p);
                if (&pb * &pb) > rest {
                    break;
                }
                while (&rest % &pb).is_zero() {
                    *out.entry(BigInt::from(p)).or_insert(0) += 1;
                    rest /= &pb;
                }
                p = if p == 2 { 3 } else { p + 2 };
            }
            let rest = BigInt::from(rest);
            if rest.is_one() {
                Ok((out, None))
            } else if is_probable_prime(&rest) {
                *out.entry(rest).or_insert(0) += 1;
                Ok((out, None))
            } else {
                Ok((out, Some(rest)))
            }
        }
        Err(e) => Err(e),
    }
}

/// Detect m = root^k with k >= 2; returns the smallest such root.
fn perfect_power(m: &BigUint) -> Option<(BigUint, u32)> {
    let bits = m.bits();
    for k in (2..=bits.max(2)).rev() {
        let root = m.nth_root(k as u32);
        if root.pow(k as u32) == *m {
            if root > BigUint::one() {
                return Some((root, k as u32));
            }
        }
    }
    None
}

/// Signed valuation of a rational at a prime: v(num) - v(den).
pub fn rational_valuation(num: &BigInt, den: &BigInt, p: u64) -> i64 {
    let (vn, _) = big_valuation(num, p);
    let (vd, _) = big_valuation(den, p);
    vn as i64 - vd as i64
}
