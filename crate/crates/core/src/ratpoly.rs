//! Dense exact polynomials: rational coefficients for field work, integer
//! coefficients for cyclotomic/discriminant work. Everything is canonical
//! (trailing zeros trimmed) and nothing rounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::arith;
use crate::{Error, Result};

/// A polynomial over Q, dense, canonical: `coeffs[i]` multiplies X^i and the
/// last entry is nonzero (the zero polynomial has an empty vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        RationalPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RationalPoly::new(vec![c])
    }

    pub fn monomial(c: BigRational, deg: usize) -> Self {
        let mut v = vec![BigRational::zero(); deg + 1];
        v[deg] = c;
        RationalPoly::new(v)
    }

    pub fn x() -> Self {
        RationalPoly::monomial(BigRational::one(), 1)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        RationalPoly::new(coeffs.iter().map(|&c| BigRational::from(BigInt::from(c))).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        RationalPoly::new(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        RationalPoly::new(out)
    }

    pub fn neg(&self) -> Self {
        RationalPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        RationalPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; rhs must be nonzero.
    pub fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dr = rhs.coeffs.len() - 1;
        if rem.len() <= dr {
            return (RationalPoly::zero(), self.clone());
        }
        let lead_inv = rhs.coeffs[dr].recip();
        let mut quot = vec![BigRational::zero(); rem.len() - dr];
        for i in (dr..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] * &lead_inv;
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = &q * b;
                rem[i - dr + j] -= t;
            }
            quot[i - dr] = q;
        }
        (RationalPoly::new(quot), RationalPoly::new(rem))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return RationalPoly::zero();
        }
        RationalPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// self(inner(X)).
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = RationalPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&RationalPoly::constant(c.clone()));
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let g = self.gcd(rhs);
        let (q, r) = self.mul(rhs).div_rem(&g);
        debug_assert!(r.is_zero());
        q.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        if self.degree().unwrap_or(0) == 0 {
            return true;
        }
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Clear denominators: returns (integer coefficients, common denominator)
    /// with content untouched.
    pub fn clear_denominators(&self) -> (Vec<BigInt>, BigInt) {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let ints = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (ints, den)
    }

    /// Factored pretty form: each coefficient shown as a signed product of
    /// prime powers, e.g. `X^9 - 3^4*13*X^7 - ... - 3^6*19^3*73`.
    pub fn factored_display(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = factored_rational(&c.abs());
            let term = match i {
                0 => mag,
                _ => {
                    let xp = if i == 1 { "X".to_string() } else { format!("X^{i}") };
                    if mag == "1" {
                        xp
                    } else {
                        format!("{mag}*{xp}")
                    }
                }
            };
            if parts.is_empty() {
                if sign == "-" {
                    parts.push(format!("-{term}"));
                } else {
                    parts.push(term);
                }
            } else {
                parts.push(format!("{sign} {term}"));
            }
        }
        parts.join(" ")
    }
}

fn factored_int(n: &BigInt) -> String {
    if n.is_one() {
        return "1".to_string();
    }
    match arith::factor_big(n, 100_000) {
        Ok(f) => f
            .iter()
            .map(|(p, k)| if *k == 1 { format!("{p}") } else { format!("{p}^{k}") })
            .collect::<Vec<_>>()
            .join("*"),
        Err(_) => format!("{n}"),
    }
}

fn factored_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        factored_int(q.numer())
    } else {
        format!("{}/{}", factored_int(q.numer()), factored_int(q.denom()))
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => write!(f, "X")?,
                1 => write!(f, "{mag}*X")?,
                _ if mag.is_one() => write!(f, "X^{i}")?,
                _ => write!(f, "{mag}*X^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for RationalPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<[String; 2]> = self
            .coeffs
            .iter()
            .map(|c| [c.numer().to_string(), c.denom().to_string()])
            .collect();
        let mut st = serializer.serialize_struct("RationalPoly", 2)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("factored_display", &self.factored_display())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for RationalPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            coeffs: Vec<[String; 2]>,
            #[serde(default)]
            #[allow(dead_code)]
            factored_display: Option<String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut coeffs = Vec::with_capacity(raw.coeffs.len());
        for [n, d] in raw.coeffs {
            let n: BigInt = n.parse().map_err(|e| D::Error::custom(format!("bad numerator: {e}")))?;
            let d: BigInt = d.parse().map_err(|e| D::Error::custom(format!("bad denominator: {e}")))?;
            if d.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            coeffs.push(BigRational::new(n, d));
        }
        Ok(RationalPoly::new(coeffs))
    }
}

// ---------------------------------------------------------------------------
// integer polynomials (used for cyclotomic polynomials and discriminants)
// ---------------------------------------------------------------------------

/// Exact division of integer polynomials; panics if the division is inexact.
/// Both inputs canonical (nonzero leading coefficient), divisor monic or with
/// leading coefficient dividing exactly at every step.
pub fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(!den.is_empty());
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(rem.len() > dd || rem.iter().all(Zero::is_zero));
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
    for i in (dd..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let (q, r) = num_integer::Integer::div_rem(&rem[i], &den[dd]);
        assert!(r.is_zero(), "inexact integer polynomial division");
        for (j, b) in den.iter().enumerate() {
            let t = &q * b;
            rem[i - dd + j] -= t;
        }
        quot[i - dd] = q;
    }
    assert!(rem.iter().all(Zero::is_zero), "nonzero remainder in exact division");
    while quot.last().is_some_and(Zero::is_zero) {
        quot.pop();
    }
    quot
}

/// Resultant of two integer polynomials via Bareiss fraction-free elimination
/// on the Sylvester matrix. Exact; deterministic.
pub fn resultant_int(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let n = f.len().saturating_sub(1);
    let m = g.len().saturating_sub(1);
    if f.is_empty() || g.is_empty() {
        return BigInt::zero();
    }
    if n == 0 {
        return f[0].pow(m as u32);
    }
    if m == 0 {
        return g[0].pow(n as u32);
    }
    let size = n + m;
    let mut a = vec![vec![BigInt::zero(); size]; size];
    for row in 0..m {
        for (k, c) in f.iter().enumerate() {
            a[row][row + (n - k)] = c.clone();
        }
    }
    for row in 0..n {
        for (k, c) in g.iter().enumerate() {
            a[m + row][row + (m - k)] = c.clone();
        }
    }
    // Bareiss
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..size - 1 {
        if a[k][k].is_zero() {
            let swap = (k + 1..size).find(|&r| !a[r][k].is_zero());
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (q, r) = num_integer::Integer::div_rem(&t, &prev);
                debug_assert!(r.is_zero());
                a[i][j] = q;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[size - 1][size - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Discriminant of a monic integer polynomial:
/// (-1)^(d(d-1)/2) * Res(f, f').
pub fn discriminant_monic_int(f: &[BigInt]) -> BigInt {
    let d = f.len() - 1;
    assert!(d >= 1 && f[d].is_one(), "discriminant requires a monic polynomial");
    let fp: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let res = resultant_int(f, &fp);
    if (d * (d - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

/// Smallest positive integer c such that c^(d-i) * a_i is integral for all i
/// (f monic of degree d); then g(X) = c^d f(X/c) is monic integral and the
/// roots scale by c.
pub fn monic_integral_model(f: &RationalPoly) -> Result<(Vec<BigInt>, BigInt)> {
    let d = f
        .degree()
        .ok_or_else(|| Error::InvalidParameter("zero polynomial".into()))?;
    if !f.is_monic() {
        return Err(Error::InvalidParameter("expected a monic polynomial".into()));
    }
    // per-prime exponent requirement: for each i, den(a_i) | c^(d-i)
    let mut c_exp: std::collections::BTreeMap<BigInt, u32> = std::collections::BTreeMap::new();
    for i in 0..d {
        let den = f.coeff(i).denom().clone();
        if den.is_one() {
            continue;
        }
        let fac = arith::factor_big(&den, 100_000)?;
        for (p, k) in fac {
            let need = (k + (d - i) as u32 - 1) / (d - i) as u32; // ceil(k/(d-i))
            let e = c_exp.entry(p).or_insert(0);
            if *e < need {
                *e = need;
            }
        }
    }
    let mut c = BigInt::one();
    for (p, k) in &c_exp {
        c *= p.pow(*k);
    }
    let mut out = Vec::with_capacity(d + 1);
    let mut cpow = BigInt::one();
    // g_i = a_i * c^(d-i); build from the top down
    let mut scaled = vec![BigInt::zero(); d + 1];
    scaled[d] = BigInt::one();
    for i in (0..d).rev() {
        cpow *= &c;
        let a = f.coeff(i);
        let num = a.numer() * &cpow;
        let (q, r) = num_integer::Integer::div_rem(&num, a.denom());
        if !r.is_zero() {
            return Err(Error::Internal("monic integral model scaling failed".into()));
        }
        scaled[i] = q;
    }
    out.extend(scaled);
    Ok((out, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(v: &[i64]) -> RationalPoly {
        RationalPoly::from_i64(v)
    }

    #[test]
    fn division_and_gcd() {
        // (X^2 - 1) = (X - 1)(X + 1)
        let f = rp(&[-1, 0, 1]);
        let g = rp(&[-1, 1]);
        let (q, r) = f.div_rem(&g);
        assert!(r.is_zero());
        assert_eq!(q, rp(&[1, 1]));
        assert_eq!(f.gcd(&rp(&[1, 1])), rp(&[1, 1]));
        assert!(f.is_squarefree());
        assert!(!f.mul(&g).is_squarefree());
    }

    #[test]
    fn composition() {
        // p(Y) = Y^2 + 1 composed with Y = X^3 - 3X
        let p = rp(&[1, 0, 1]);
        let inner = rp(&[0, -3, 0, 1]);
        let c = p.compose(&inner);
        assert_eq!(c.degree(), Some(6));
        // check at X = 2: (8-6)^2 + 1 = 5
        assert_eq!(c.eval(&BigRational::from(BigInt::from(2))), BigRational::from(BigInt::from(5)));
    }

    #[test]
    fn resultant_and_discriminant() {
        // disc(X^2 - 2) = 8
        let f: Vec<BigInt> = [-2, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(discriminant_monic_int(&f), BigInt::from(8));
        // disc(X^2 + X + 1) = -3
        let f: Vec<BigInt> = [1, 1, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(discriminant_monic_int(&f), BigInt::from(-3));
        // disc(X^3 - 3X - 1) = 81, brute resultant
        let f: Vec<BigInt> = [-1, -3, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(discriminant_monic_int(&f), BigInt::from(81));
    }

    #[test]
    fn integral_model() {
        // X^2 + X/2 + 3/4 -> c = 2, g = X^2 + X + 3
        let f = RationalPoly::new(vec![
            BigRational::new(BigInt::from(3), BigInt::from(4)),
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::one(),
        ]);
        let (g, c) = monic_integral_model(&f).unwrap();
        assert_eq!(c, BigInt::from(2));
        assert_eq!(g, vec![BigInt::from(3), BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn json_roundtrip() {
        let f = rp(&[-1, 0, 3]);
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("coeffs"));
        let back: RationalPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
