//! Exact arithmetic in cyclotomic fields Q(zeta_m).
//!
//! Elements are rational coefficient vectors of length phi(m) on the power
//! basis {1, zeta_m, ..., zeta_m^(phi(m)-1)}, reduced modulo the m-th
//! cyclotomic polynomial. The representation is canonical: two elements are
//! equal exactly when their coefficient vectors are equal, and every
//! operation is exact rational arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::arith;
use crate::ratpoly::{int_poly_div_exact, RationalPoly};
use crate::{Error, Result};

/// Conductors are capped so the dense phi(m)-length representation stays
/// tractable.
pub const MAX_CONDUCTOR: u64 = 10_000;

/// Cached reduction data for one conductor.
struct Modulus {
    m: u64,
    phi: usize,
    /// red_rows[k] = X^(phi+k) reduced mod Phi_m, as length-phi vectors.
    red_rows: Vec<Vec<BigRational>>,
    /// Highest exponent covered by the table: max(2*phi-2, m-1).
    max_exp: usize,
}

fn modulus_cache() -> &'static RwLock<HashMap<u64, Arc<Modulus>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Modulus>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn modulus(m: u64) -> Result<Arc<Modulus>> {
    if m == 0 {
        return Err(Error::InvalidParameter("conductor must be positive".into()));
    }
    if m > MAX_CONDUCTOR {
        return Err(Error::ConductorTooLarge { m, max: MAX_CONDUCTOR });
    }
    if let Some(found) = modulus_cache().read().unwrap().get(&m) {
        return Ok(found.clone());
    }
    let built = Arc::new(build_modulus(m));
    modulus_cache().write().unwrap().entry(m).or_insert_with(|| built.clone());
    Ok(built)
}

fn build_modulus(m: u64) -> Modulus {
    let phi_poly = cyclotomic_polynomial(m);
    let phi = phi_poly.len() - 1;
    let max_exp = (2 * phi).saturating_sub(2).max((m - 1) as usize);
    // X^phi = -(a_0 + a_1 X + ... + a_{phi-1} X^{phi-1})   (Phi_m monic)
    let base: Vec<BigRational> = phi_poly[..phi]
        .iter()
        .map(|c| BigRational::from(-c.clone()))
        .collect();
    let mut red_rows: Vec<Vec<BigRational>> = Vec::new();
    if max_exp >= phi {
        red_rows.push(base.clone());
        for _ in phi..max_exp {
            let prev = red_rows.last().unwrap();
            let mut next = vec![BigRational::zero(); phi];
            let top = prev[phi - 1].clone();
            for i in (1..phi).rev() {
                next[i] = prev[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, b) in base.iter().enumerate() {
                    let t = &top * b;
                    next[i] += t;
                }
            }
            red_rows.push(next);
        }
    }
    Modulus { m, phi, red_rows, max_exp }
}

/// The m-th cyclotomic polynomial as monic integer coefficients, computed by
/// dividing X^m - 1 by all lower-level cyclotomic polynomials.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    let mut memo: HashMap<u64, Vec<BigInt>> = HashMap::new();
    cyclotomic_rec(m, &mut memo)
}

fn cyclotomic_rec(m: u64, memo: &mut HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(found) = memo.get(&m) {
        return found.clone();
    }
    let result = if m == 1 {
        vec![BigInt::from(-1), BigInt::one()]
    } else {
        let mut num = vec![BigInt::zero(); m as usize + 1];
        num[0] = BigInt::from(-1);
        num[m as usize] = BigInt::one();
        let mut quot = num;
        for d in 1..m {
            if m % d == 0 {
                let phi_d = cyclotomic_rec(d, memo);
                quot = int_poly_div_exact(&quot, &phi_d);
            }
        }
        quot
    };
    memo.insert(m, result.clone());
    result
}

/// An exact element of Q(zeta_m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloElement {
    m: u64,
    coeffs: Vec<BigRational>,
}

impl CycloElement {
    /// Build from a canonical coefficient vector of length phi(m).
    pub fn new(m: u64, coeffs: Vec<BigRational>) -> Result<Self> {
        let md = modulus(m)?;
        if coeffs.len() != md.phi {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients for conductor {m}, got {}",
                md.phi,
                coeffs.len()
            )));
        }
        Ok(CycloElement { m, coeffs })
    }

    /// Build from an arbitrary-length polynomial in zeta_m (exponents taken
    /// literally, reduced canonically).
    pub fn from_poly(m: u64, poly: &[BigRational]) -> Result<Self> {
        let md = modulus(m)?;
        let mut acc: Vec<BigRational> = vec![BigRational::zero(); md.max_exp + 1];
        for (i, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = i % md.m as usize; // zeta_m^m = 1
            acc[e] += c;
        }
        Ok(CycloElement { m, coeffs: reduce(&md, acc) })
    }

    pub fn zero(m: u64) -> Result<Self> {
        let md = modulus(m)?;
        Ok(CycloElement { m, coeffs: vec![BigRational::zero(); md.phi] })
    }

    pub fn one(m: u64) -> Result<Self> {
        Self::from_rational(m, BigRational::one())
    }

    pub fn from_rational(m: u64, q: BigRational) -> Result<Self> {
        let md = modulus(m)?;
        let mut coeffs = vec![BigRational::zero(); md.phi];
        coeffs[0] = q;
        Ok(CycloElement { m, coeffs })
    }

    pub fn from_integer(m: u64, n: i64) -> Result<Self> {
        Self::from_rational(m, BigRational::from(BigInt::from(n)))
    }

    /// zeta_m^k.
    pub fn root_of_unity(m: u64, k: u64) -> Result<Self> {
        let md = modulus(m)?;
        let e = (k % m) as usize;
        let mut acc = vec![BigRational::zero(); md.max_exp + 1];
        acc[e] = BigRational::one();
        Ok(CycloElement { m, coeffs: reduce(&md, acc) })
    }

    pub fn zeta(m: u64) -> Result<Self> {
        Self::root_of_unity(m, 1)
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn check_same(&self, rhs: &Self) -> Result<()> {
        if self.m != rhs.m {
            return Err(Error::ConductorMismatch { left: self.m, right: rhs.m });
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloElement { m: self.m, coeffs })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycloElement { m: self.m, coeffs })
    }

    pub fn neg(&self) -> Self {
        CycloElement { m: self.m, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let md = modulus(self.m)?;
        let mut acc = vec![BigRational::zero(); 2 * md.phi.max(1) - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    acc[i + j] += a * b;
                }
            }
        }
        Ok(CycloElement { m: self.m, coeffs: reduce(&md, acc) })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        CycloElement { m: self.m, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplicative inverse: 1/a = (product of the nontrivial Galois
    /// conjugates) / Nr(a). Pure multiplications; avoids the coefficient
    /// blowup of rational polynomial remainder sequences.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut prod = CycloElement::one(self.m)?;
        for k in unit_group(self.m).into_iter().skip(1) {
            prod = prod.checked_mul(&Automorphism::new(self.m, k)?.apply(self)?)?;
        }
        let full = prod.checked_mul(self)?;
        let nrm = full
            .to_rational()
            .ok_or_else(|| Error::Internal("full conjugate product is irrational".into()))?;
        if nrm.is_zero() {
            return Err(Error::Internal("nonzero element with zero norm".into()));
        }
        Ok(prod.scale(&nrm.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.checked_mul(&rhs.inv()?)
    }

    /// Exact signed power.
    pub fn pow(&self, n: i64) -> Result<Self> {
        self.pow_big(&BigInt::from(n))
    }

    /// Signed power with arbitrary-precision exponent (the Phi-map ladder can
    /// exceed machine range for larger p).
    pub fn pow_big(&self, n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return CycloElement::one(self.m);
        }
        let base = if n.is_negative() {
            if self.is_zero() {
                return Err(Error::DivisionByZero);
            }
            self.inv()?
        } else {
            self.clone()
        };
        let mut exp = n.abs().to_biguint().expect("abs");
        let mut acc = CycloElement::one(self.m)?;
        let mut sq = base;
        while !exp.is_zero() {
            if exp.is_odd() {
                acc = acc.checked_mul(&sq)?;
            }
            exp >>= 1;
            if !exp.is_zero() {
                sq = sq.checked_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// True when the element lies in Q.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Common denominator of the coefficients and the integer vector after
    /// clearing it.
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
}

fn reduce(md: &Modulus, mut acc: Vec<BigRational>) -> Vec<BigRational> {
    assert!(acc.len() <= md.max_exp + 1 || acc[md.max_exp + 1..].iter().all(Zero::is_zero));
    let mut out: Vec<BigRational> = acc.drain(..md.phi.min(acc.len())).collect();
    out.resize(md.phi, BigRational::zero());
    for (k, c) in acc.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (i, r) in md.red_rows[k].iter().enumerate() {
            if !r.is_zero() {
                let t = &c * r;
                out[i] += t;
            }
        }
    }
    out
}

/// A field automorphism of Q(zeta_m), acting by zeta_m -> zeta_m^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automorphism {
    m: u64,
    k: u64,
}

impl Automorphism {
    pub fn new(m: u64, k: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("conductor must be positive".into()));
        }
        let k = k % m;
        if arith::gcd_u64(k.max(1), m) != 1 {
            return Err(Error::InvalidParameter(format!(
                "exponent {k} is not a unit modulo {m}"
            )));
        }
        Ok(Automorphism { m, k })
    }

    /// zeta_m -> zeta_m^k with a signed exponent.
    pub fn from_signed(m: u64, k: i64) -> Result<Self> {
        let k = k.rem_euclid(m as i64) as u64;
        Automorphism::new(m, k)
    }

    pub fn identity(m: u64) -> Self {
        Automorphism { m, k: 1 % m.max(1) }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn exponent(&self) -> u64 {
        self.k
    }

    pub fn is_identity(&self) -> bool {
        self.k == 1 % self.m.max(1)
    }

    /// Composition: self after rhs (exponents multiply mod m).
    pub fn compose(&self, rhs: &Automorphism) -> Result<Automorphism> {
        if self.m != rhs.m {
            return Err(Error::ConductorMismatch { left: self.m, right: rhs.m });
        }
        Ok(Automorphism { m: self.m, k: (self.k as u128 * rhs.k as u128 % self.m as u128) as u64 })
    }

    /// self^n (n may be negative; the inverse exponent always exists).
    pub fn power(&self, n: i64) -> Automorphism {
        let phi = arith::euler_phi_u64(self.m);
        let e = n.rem_euclid(phi as i64) as u64;
        Automorphism { m: self.m, k: arith::mod_pow_u64(self.k, e, self.m) }
    }

    /// Image of an element under the automorphism.
    pub fn apply(&self, a: &CycloElement) -> Result<CycloElement> {
        if self.m != a.m {
            return Err(Error::ConductorMismatch { left: self.m, right: a.m });
        }
        let md = modulus(self.m)?;
        let mut acc = vec![BigRational::zero(); md.max_exp + 1];
        for (i, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (i as u128 * self.k as u128 % self.m as u128) as usize;
            acc[e] += c;
        }
        Ok(CycloElement { m: self.m, coeffs: reduce(&md, acc) })
    }
}

/// The full unit group (Z/m)* as sorted exponents.
pub fn unit_group(m: u64) -> Vec<u64> {
    (1..m.max(2)).filter(|&k| arith::gcd_u64(k, m) == 1).collect()
}

/// Coerce an element between cyclotomic fields. Embeds when the source
/// conductor divides the target, contracts when the element genuinely lies in
/// the smaller field, and otherwise routes through gcd(m, target).
pub fn coerce(a: &CycloElement, target: u64) -> Result<CycloElement> {
    if target == a.m {
        return Ok(a.clone());
    }
    if target % a.m == 0 {
        return embed(a, target);
    }
    let g = arith::gcd_u64(a.m, target);
    let small = contract(a, g)?;
    if target == g {
        Ok(small)
    } else {
        embed(&small, target)
    }
}

fn embed(a: &CycloElement, target: u64) -> Result<CycloElement> {
    debug_assert_eq!(target % a.m, 0);
    let stride = (target / a.m) as usize;
    let md = modulus(target)?;
    let mut acc = vec![BigRational::zero(); md.max_exp + 1];
    for (i, c) in a.coeffs.iter().enumerate() {
        if !c.is_zero() {
            acc[i * stride] += c;
        }
    }
    Ok(CycloElement { m: target, coeffs: reduce(&md, acc) })
}

fn contract(a: &CycloElement, target: u64) -> Result<CycloElement> {
    debug_assert_eq!(a.m % target, 0);
    if target == a.m {
        return Ok(a.clone());
    }
    let tgt_md = modulus(target)?;
    // columns: embeddings of the target power basis
    let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(tgt_md.phi);
    for j in 0..tgt_md.phi {
        let mut basis = vec![BigRational::zero(); tgt_md.phi];
        basis[j] = BigRational::one();
        let elt = CycloElement { m: target, coeffs: basis };
        cols.push(embed(&elt, a.m)?.coeffs);
    }
    match solve_columns(&cols, &a.coeffs) {
        Some(coeffs) => Ok(CycloElement { m: target, coeffs }),
        None => Err(Error::NotInSubfield { conductor: a.m, target }),
    }
}

/// Solve sum_j x_j * cols[j] = rhs exactly; None when inconsistent.
/// Columns are linearly independent by construction.
pub(crate) fn solve_columns(
    cols: &[Vec<BigRational>],
    rhs: &[BigRational],
) -> Option<Vec<BigRational>> {
    let ncols = cols.len();
    let nrows = rhs.len();
    // augmented row-major matrix
    let mut mat: Vec<Vec<BigRational>> = (0..nrows)
        .map(|r| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_rows: Vec<usize> = Vec::with_capacity(ncols);
    let mut row = 0usize;
    for col in 0..ncols {
        let pr = (row..nrows).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(row, pr);
        let inv = mat[row][col].recip();
        for c in col..=ncols {
            mat[row][c] = &mat[row][c] * &inv;
        }
        for r in 0..nrows {
            if r != row && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for c in col..=ncols {
                    let t = &f * &mat[row][c];
                    mat[r][c] -= t;
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    // consistency: rows beyond the pivots must have zero rhs
    for r in row..nrows {
        if !mat[r][ncols].is_zero() {
            return None;
        }
    }
    Some((0..ncols).map(|c| mat[pivot_rows[c]][ncols].clone()).collect())
}

/// Product of images of `a` under the listed automorphisms.
pub fn orbit_product(a: &CycloElement, autos: &[Automorphism]) -> Result<CycloElement> {
    let mut acc = CycloElement::one(a.m)?;
    for auto in autos {
        acc = acc.checked_mul(&auto.apply(a)?)?;
    }
    Ok(acc)
}

/// Exact minimal polynomial of `a` over Q: the product of (X - c) over the
/// orbit of `a` under Gal(Q(zeta_m)/Q). Monic, irreducible, with degree equal
/// to the orbit size.
pub fn min_poly_over_q(a: &CycloElement) -> Result<RationalPoly> {
    let mut orbit: Vec<CycloElement> = Vec::new();
    for k in unit_group(a.m) {
        let img = Automorphism::new(a.m, k)?.apply(a)?;
        if !orbit.contains(&img) {
            orbit.push(img);
        }
    }
    // product of linear factors with cyclotomic coefficients
    let one = CycloElement::one(a.m)?;
    let mut poly: Vec<CycloElement> = vec![one];
    for c in &orbit {
        let mut next = vec![CycloElement::zero(a.m)?; poly.len() + 1];
        for (i, t) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].checked_add(t)?;
            next[i] = next[i].checked_sub(&t.checked_mul(c)?)?;
        }
        poly = next;
    }
    let mut coeffs = Vec::with_capacity(poly.len());
    for t in &poly {
        let q = t.to_rational().ok_or_else(|| {
            Error::Internal("conjugate product has an irrational coefficient".into())
        })?;
        coeffs.push(q);
    }
    Ok(RationalPoly::new(coeffs))
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
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
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "z{}", self.m)?;
                    } else {
                        write!(f, "z{}^{}", self.m, i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for CycloElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<[String; 2]> = self
            .coeffs
            .iter()
            .map(|c| [c.numer().to_string(), c.denom().to_string()])
            .collect();
        let mut st = serializer.serialize_struct("CycloElement", 2)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CycloElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            m: u64,
            coeffs: Vec<[String; 2]>,
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
        CycloElement::new(raw.m, coeffs).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn cyclotomic_polynomials() {
        let to_i = |v: Vec<BigInt>| v;
        assert_eq!(to_i(cyclotomic_polynomial(1)), vec![BigInt::from(-1), BigInt::from(1)]);
        assert_eq!(
            cyclotomic_polynomial(3),
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]
        );
        assert_eq!(
            cyclotomic_polynomial(9),
            vec![
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(1)
            ]
        );
        // phi(21) = 12
        assert_eq!(cyclotomic_polynomial(21).len(), 13);
    }

    #[test]
    fn root_of_unity_products() {
        // zeta_3 * zeta_3^2 = 1
        let z = CycloElement::zeta(3).unwrap();
        let z2 = CycloElement::root_of_unity(3, 2).unwrap();
        assert!(z.checked_mul(&z2).unwrap().is_one());
        // (3 - zeta_3)(3 - zeta_3^2) = 13
        let three = CycloElement::from_integer(3, 3).unwrap();
        let a = three.checked_sub(&z).unwrap();
        let b = three.checked_sub(&z2).unwrap();
        let prod = a.checked_mul(&b).unwrap();
        assert_eq!(prod.to_rational().unwrap(), q(13));
    }

    #[test]
    fn inverse_law() {
        // inv(zeta_9 + 2) * (zeta_9 + 2) = 1
        let x = CycloElement::zeta(9)
            .unwrap()
            .checked_add(&CycloElement::from_integer(9, 2).unwrap())
            .unwrap();
        assert!(x.inv().unwrap().checked_mul(&x).unwrap().is_one());
    }

    #[test]
    fn powers() {
        let z = CycloElement::zeta(3).unwrap();
        let x = z.scale(&q(21));
        // (21 zeta_3)^2 = 441 zeta_3^2
        let expect = CycloElement::root_of_unity(3, 2).unwrap().scale(&q(441));
        assert_eq!(x.pow(2).unwrap(), expect);
        // zeta_3^(-1) = zeta_3^2
        assert_eq!(z.pow(-1).unwrap(), CycloElement::root_of_unity(3, 2).unwrap());
        // (3 - zeta_3)^0 = 1
        let three = CycloElement::from_integer(3, 3).unwrap();
        assert!(three.checked_sub(&z).unwrap().pow(0).unwrap().is_one());
        // zero^negative errors
        assert_eq!(CycloElement::zero(3).unwrap().pow(-2), Err(Error::DivisionByZero));
    }

    #[test]
    fn automorphism_action() {
        // k=16, m=21 sends zeta_7 -> zeta_7^2 and fixes zeta_3
        let sigma = Automorphism::new(21, 16).unwrap();
        let z7 = CycloElement::root_of_unity(21, 3).unwrap(); // zeta_21^3 = zeta_7
        let z3 = CycloElement::root_of_unity(21, 7).unwrap(); // zeta_21^7 = zeta_3
        assert_eq!(sigma.apply(&z7).unwrap(), CycloElement::root_of_unity(21, 6).unwrap());
        assert_eq!(sigma.apply(&z3).unwrap(), z3);
        // identity fixes everything
        let id = Automorphism::identity(21);
        let x = z7.checked_add(&z3).unwrap();
        assert_eq!(id.apply(&x).unwrap(), x);
        // k = -1 mod 9 sends zeta_9 to its inverse
        let tau = Automorphism::from_signed(9, -1).unwrap();
        let z9 = CycloElement::zeta(9).unwrap();
        assert_eq!(tau.apply(&z9).unwrap(), CycloElement::root_of_unity(9, 8).unwrap());
    }

    #[test]
    fn coercion_roundtrip() {
        // zeta_3 in Q(zeta_3) -> zeta_21^7 in Q(zeta_21)
        let z3 = CycloElement::zeta(3).unwrap();
        let up = coerce(&z3, 21).unwrap();
        assert_eq!(up, CycloElement::root_of_unity(21, 7).unwrap());
        // contract(3 - zeta_21^7, 3) = 3 - zeta_3
        let three = CycloElement::from_integer(21, 3).unwrap();
        let x = three.checked_sub(&up).unwrap();
        let down = coerce(&x, 3).unwrap();
        let expect = CycloElement::from_integer(3, 3).unwrap().checked_sub(&z3).unwrap();
        assert_eq!(down, expect);
        // zeta_21 is not in Q(zeta_3)
        let z21 = CycloElement::zeta(21).unwrap();
        assert!(matches!(coerce(&z21, 3), Err(Error::NotInSubfield { .. })));
    }

    #[test]
    fn orbit_products_match_norms() {
        // Nr_{L/K}(delta + zeta_3) = 3 - zeta_3 for the (3,7) tower, with
        // sigma: zeta_7 -> zeta_7^2 fixing zeta_3 (k = 16 mod 21).
        let delta = CycloElement::root_of_unity(21, 3)
            .unwrap()
            .checked_add(&CycloElement::root_of_unity(21, 18).unwrap())
            .unwrap();
        let z3 = CycloElement::root_of_unity(21, 7).unwrap();
        let x = delta.checked_add(&z3).unwrap();
        let sigma = Automorphism::new(21, 16).unwrap();
        let autos = [Automorphism::identity(21), sigma, sigma.power(2)];
        let nrm = orbit_product(&x, &autos).unwrap();
        let expect = CycloElement::from_integer(21, 3).unwrap().checked_sub(&z3).unwrap();
        assert_eq!(nrm, expect);
        // orbit_product under {identity} is the element itself
        assert_eq!(orbit_product(&x, &[Automorphism::identity(21)]).unwrap(), x);
    }

    #[test]
    fn minimal_polynomials() {
        // delta_3(7) = zeta_7 + zeta_7^{-1} has min poly X^3 + X^2 - 2X - 1
        let delta = CycloElement::root_of_unity(7, 1)
            .unwrap()
            .checked_add(&CycloElement::root_of_unity(7, 6).unwrap())
            .unwrap();
        let mp = min_poly_over_q(&delta).unwrap();
        assert_eq!(mp, RationalPoly::from_i64(&[-1, -2, 1, 1]));
        // rational constant
        let five = CycloElement::from_integer(7, 5).unwrap();
        assert_eq!(min_poly_over_q(&five).unwrap(), RationalPoly::from_i64(&[-5, 1]));
        // zeta_3 -> X^2 + X + 1
        let z3 = CycloElement::zeta(3).unwrap();
        assert_eq!(min_poly_over_q(&z3).unwrap(), RationalPoly::from_i64(&[1, 1, 1]));
        // min poly evaluated at the element is zero (matrix-free check via
        // cyclotomic arithmetic)
        let mp = min_poly_over_q(&delta).unwrap();
        let mut acc = CycloElement::zero(7).unwrap();
        for c in mp.coeffs().iter().rev() {
            acc = acc
                .checked_mul(&delta)
                .unwrap()
                .checked_add(&CycloElement::from_rational(7, c.clone()).unwrap())
                .unwrap();
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn serialization_is_canonical() {
        let x = CycloElement::zeta(21)
            .unwrap()
            .scale(&BigRational::new(BigInt::from(-7), BigInt::from(3)))
            .checked_add(&CycloElement::from_integer(21, 4).unwrap())
            .unwrap();
        let s = serde_json::to_string(&x).unwrap();
        let back: CycloElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        // wrong length rejected
        let bad = r#"{"m": 3, "coeffs": [["1","1"]]}"#;
        assert!(serde_json::from_str::<CycloElement>(bad).is_err());
    }
}
