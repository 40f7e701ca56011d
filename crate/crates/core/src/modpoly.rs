//! Dense polynomial arithmetic over prime fields F_ell, with squarefree,
//! distinct-degree, and equal-degree factorization. Used for factorization
//! pattern statistics and for Dedekind's index criterion.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::arith;

/// A canonical (trimmed) polynomial over F_ell, constant coefficient first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly {
    pub ell: u64,
    pub c: Vec<u64>,
}

impl ModPoly {
    pub fn new(ell: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= ell;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { ell, c }
    }

    pub fn zero(ell: u64) -> Self {
        ModPoly { ell, c: vec![] }
    }

    pub fn one(ell: u64) -> Self {
        ModPoly::new(ell, vec![1])
    }

    pub fn x(ell: u64) -> Self {
        ModPoly::new(ell, vec![0, 1])
    }

    pub fn from_bigints(ell: u64, coeffs: &[BigInt]) -> Self {
        let m = BigInt::from(ell);
        let c = coeffs.iter().map(|v| v.mod_floor(&m).to_u64().expect("reduced")).collect();
        ModPoly::new(ell, c)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    fn mm(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.ell as u128) as u64
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        let mut out = vec![0u64; n];
        for (i, &a) in self.c.iter().enumerate() {
            out[i] = a;
        }
        for (i, &b) in rhs.c.iter().enumerate() {
            out[i] = (out[i] + b) % self.ell;
        }
        ModPoly::new(self.ell, out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        let mut out = vec![0u64; n];
        for (i, &a) in self.c.iter().enumerate() {
            out[i] = a;
        }
        for (i, &b) in rhs.c.iter().enumerate() {
            out[i] = (out[i] + self.ell - b) % self.ell;
        }
        ModPoly::new(self.ell, out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return ModPoly::zero(self.ell);
        }
        let mut out = vec![0u64; self.c.len() + rhs.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                out[i + j] =
                    ((out[i + j] as u128 + a as u128 * b as u128) % self.ell as u128) as u64;
            }
        }
        ModPoly::new(self.ell, out)
    }

    pub fn scale(&self, s: u64) -> Self {
        ModPoly::new(self.ell, self.c.iter().map(|&a| self.mm(a, s)).collect())
    }

    pub fn rem(&self, rhs: &Self) -> Self {
        let d = rhs.degree().expect("division by zero polynomial");
        let lead_inv = arith::mod_inv_u64(*rhs.c.last().unwrap(), self.ell).expect("unit lead");
        let mut r = self.c.clone();
        while r.len() > d {
            let k = r.len() - 1;
            let coeff = self.mm(r[k], lead_inv);
            if coeff != 0 {
                for (j, &b) in rhs.c.iter().enumerate() {
                    let idx = k - d + j;
                    r[idx] = (r[idx] + self.ell - self.mm(coeff, b)) % self.ell;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        ModPoly { ell: self.ell, c: r }
    }

    /// Quotient of an exact division (debug-asserts a zero remainder).
    pub fn div_exact(&self, rhs: &Self) -> Self {
        let d = rhs.degree().expect("division by zero polynomial");
        let lead_inv = arith::mod_inv_u64(*rhs.c.last().unwrap(), self.ell).expect("unit lead");
        let mut r = self.c.clone();
        let n = self.c.len();
        let mut q = vec![0u64; n.saturating_sub(d)];
        for k in (d..n).rev() {
            let coeff = self.mm(r[k], lead_inv);
            q[k - d] = coeff;
            if coeff != 0 {
                for (j, &b) in rhs.c.iter().enumerate() {
                    let idx = k - d + j;
                    r[idx] = (r[idx] + self.ell - self.mm(coeff, b)) % self.ell;
                }
            }
        }
        debug_assert!(r.iter().all(|&x| x == 0), "inexact modular division");
        ModPoly::new(self.ell, q)
    }

    pub fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(1) => self.clone(),
            Some(&l) => self.scale(arith::mod_inv_u64(l, self.ell).expect("unit lead")),
        }
    }

    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return ModPoly::zero(self.ell);
        }
        let out = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| self.mm(a, (i as u64) % self.ell))
            .collect();
        ModPoly::new(self.ell, out)
    }

    /// self^n mod `modulus` with an arbitrary-precision exponent.
    pub fn powmod_big(&self, n: &BigUint, modulus: &Self) -> Self {
        let mut acc = ModPoly::one(self.ell);
        if n.is_one() {
            return self.rem(modulus);
        }
        let mut sq = self.rem(modulus);
        let bits = n.bits();
        for i in 0..bits {
            if n.bit(i) {
                acc = acc.mul(&sq).rem(modulus);
            }
            if i + 1 < bits {
                sq = sq.mul(&sq).rem(modulus);
            }
        }
        acc
    }

    pub fn powmod(&self, n: u64, modulus: &Self) -> Self {
        self.powmod_big(&BigUint::from(n), modulus)
    }

    pub fn is_squarefree(&self) -> bool {
        if self.degree().unwrap_or(0) <= 1 {
            return true;
        }
        let d = self.derivative();
        if d.is_zero() {
            return false;
        }
        self.gcd(&d).degree() == Some(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &a in self.c.iter().rev() {
            acc = (self.mm(acc, x) + a) % self.ell;
        }
        acc
    }
}

/// Degree multiset of the irreducible factors of a squarefree monic f via
/// distinct-degree factorization (equal-degree splitting is not needed for
/// the pattern).
pub fn factor_degree_pattern(f: &ModPoly) -> Vec<u32> {
    let ell = f.ell;
    let mut f = f.monic();
    let mut pattern: Vec<u32> = Vec::new();
    let mut h = ModPoly::x(ell).rem(&f);
    let mut d = 0u32;
    while let Some(deg) = f.degree() {
        if deg == 0 {
            break;
        }
        d += 1;
        if (deg as u32) < 2 * d {
            pattern.push(deg as u32);
            break;
        }
        h = h.powmod(ell, &f);
        let g = h.sub(&ModPoly::x(ell)).gcd(&f);
        if let Some(gd) = g.degree() {
            if gd > 0 {
                for _ in 0..(gd as u32 / d) {
                    pattern.push(d);
                }
                f = f.div_exact(&g);
                h = h.rem(&f);
            }
        }
    }
    pattern.sort_unstable();
    pattern
}

/// Squarefree decomposition in characteristic ell: f = prod g_i^(e_i) with
/// the g_i squarefree, monic, and pairwise coprime.
pub fn squarefree_decomposition(f: &ModPoly) -> Vec<(ModPoly, u32)> {
    let ell = f.ell as u32;
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let deriv = f.derivative();
    if deriv.is_zero() {
        // f = g(X^ell) = h^ell with h the coefficient-subsampled root
        for (g, e) in squarefree_decomposition(&ell_th_root(&f)) {
            out.push((g, e * ell));
        }
        return out;
    }
    let mut c = f.gcd(&deriv);
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac.monic(), i));
        }
        c = c.div_exact(&y);
        w = y;
        i += 1;
    }
    if !c.is_one() {
        for (g, e) in squarefree_decomposition(&ell_th_root(&c)) {
            out.push((g, e * ell));
        }
    }
    out
}

// Frobenius is the identity on F_ell, so the ell-th root just subsamples.
fn ell_th_root(f: &ModPoly) -> ModPoly {
    let ell = f.ell as usize;
    let mut c = Vec::with_capacity(f.c.len() / ell + 1);
    for (i, &a) in f.c.iter().enumerate() {
        if i % ell == 0 {
            c.push(a);
        } else {
            debug_assert_eq!(a, 0, "derivative-free polynomial must be an ell-th power");
        }
    }
    ModPoly::new(f.ell, c)
}

/// Full factorization into monic irreducibles with multiplicities.
/// Deterministically seeded Cantor-Zassenhaus handles equal-degree splitting.
pub fn factor(f: &ModPoly) -> Vec<(ModPoly, u32)> {
    let mut out: Vec<(ModPoly, u32)> = Vec::new();
    for (g, e) in squarefree_decomposition(f) {
        for (d, product) in distinct_degree_parts(&g) {
            for irred in equal_degree_split(&product, d) {
                out.push((irred, e));
            }
        }
    }
    out.sort_by(|a, b| (a.0.degree(), &a.0.c).cmp(&(b.0.degree(), &b.0.c)));
    out
}

fn distinct_degree_parts(f: &ModPoly) -> Vec<(u32, ModPoly)> {
    let ell = f.ell;
    let mut f = f.monic();
    let mut out = Vec::new();
    let mut h = ModPoly::x(ell).rem(&f);
    let mut d = 0u32;
    while let Some(deg) = f.degree() {
        if deg == 0 {
            break;
        }
        d += 1;
        if (deg as u32) < 2 * d {
            out.push((deg as u32, f.clone()));
            break;
        }
        h = h.powmod(ell, &f);
        let g = h.sub(&ModPoly::x(ell)).gcd(&f);
        if g.degree().unwrap_or(0) > 0 {
            out.push((d, g.clone()));
            f = f.div_exact(&g);
            h = h.rem(&f);
        }
    }
    out
}

/// Split a product of distinct irreducibles, all of degree d.
fn equal_degree_split(f: &ModPoly, d: u32) -> Vec<ModPoly> {
    let deg = f.degree().unwrap_or(0) as u32;
    if deg == d {
        return vec![f.monic()];
    }
    let ell = f.ell;
    let mut rng = SplitMix64::new(0x5eed_0000 ^ ell ^ (deg as u64) << 32);
    loop {
        let a = random_poly(&mut rng, ell, deg as usize);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = if ell == 2 {
            // trace map over F_2
            let mut tr = a.clone();
            let mut pw = a.clone();
            for _ in 1..d {
                pw = pw.mul(&pw).rem(f);
                tr = tr.add(&pw);
            }
            tr.gcd(f)
        } else {
            let exp = (BigUint::from(ell).pow(d) - BigUint::one()) / BigUint::from(2u32);
            let b = a.powmod_big(&exp, f);
            b.sub(&ModPoly::one(ell)).gcd(f)
        };
        let gd = g.degree().unwrap_or(0) as u32;
        if gd > 0 && gd < deg {
            let mut out = equal_degree_split(&g, d);
            out.extend(equal_degree_split(&f.div_exact(&g), d));
            return out;
        }
    }
}

fn random_poly(rng: &mut SplitMix64, ell: u64, below_degree: usize) -> ModPoly {
    let c: Vec<u64> = (0..below_degree).map(|_| rng.next() % ell).collect();
    ModPoly::new(ell, c)
}

/// Deterministic PRNG for reproducible splitting.
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}
