//! Exact minimal polynomials of the constructed alpha (degree p^2), a
//! second independent route for p = 3 with e = -1, and statistical Galois
//! group validation through factorization patterns modulo primes.
//!
//! The main route models M = L[t]/(t^p - omega) as a Q-vector space of
//! dimension p^2(p-1), builds the exact matrix of multiplication by alpha,
//! and extracts the matrix minimal polynomial by Krylov iteration with
//! LCM accumulation over basis seeds. No floating point touches any result;
//! the numeric root check at the bottom is a sanity gadget only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::arith;
use crate::construct::ConstructionResult;
use crate::cyclo::min_poly_over_q;
use crate::maps::GroupVariant;
use crate::modpoly::{factor_degree_pattern, ModPoly};
use crate::ratpoly::{discriminant_monic_int, monic_integral_model, RationalPoly};
use crate::tower::TowerContext;
use crate::{Error, Result};

/// Irr(alpha; Q) by the multiplication-operator method: exact, degree p^2,
/// monic. A different degree signals that x failed the non-power condition.
pub fn irr_alpha_matrix(tower: &TowerContext, res: &ConstructionResult) -> Result<RationalPoly> {
    let p = tower.p() as usize;
    let n = (tower.p() * (tower.p() - 1)) as usize;
    let d = p * n;
    let basis = tower.l_basis()?;
    let mut matrix = vec![vec![BigRational::zero(); d]; d];
    for j in 0..p {
        for k in 0..n {
            let col = j * n + k;
            for term in &res.alpha_terms {
                let mut prod = term.coeff.checked_mul(&basis[k])?;
                let mut jp = j + term.radical_exp as usize;
                if jp >= p {
                    jp -= p;
                    prod = prod.checked_mul(&res.omega)?;
                }
                let coords = tower.l_coords(&prod)?;
                for (row, c) in coords.iter().enumerate() {
                    if !c.is_zero() {
                        matrix[jp * n + row][col] += c;
                    }
                }
            }
        }
    }
    let f = algebra_min_poly(&matrix, 0);
    // f(A) applied to the unit of the algebra must vanish; in a commutative
    // unital algebra that is exactly f(alpha) = 0.
    let mut unit = vec![BigRational::zero(); d];
    unit[0] = BigRational::one();
    let mut acc = vec![BigRational::zero(); d];
    for c in f.coeffs().iter().rev() {
        acc = matvec(&matrix, &acc);
        if !c.is_zero() {
            acc[0] += c; // + c * unit
        }
    }
    if acc.iter().any(|v| !v.is_zero()) {
        return Err(Error::Internal("computed minimal polynomial does not annihilate alpha".into()));
    }
    let _ = unit;
    if f.degree() != Some(p * p) {
        return Err(Error::Degenerate(format!(
            "Irr(alpha) has degree {:?}, expected {}; x likely fails the non-power condition",
            f.degree(),
            p * p
        )));
    }
    if !f.is_monic() {
        return Err(Error::Internal("matrix minimal polynomial is not monic".into()));
    }
    Ok(f)
}

fn matvec(a: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| {
            let mut acc = BigRational::zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc += x * y;
                }
            }
            acc
        })
        .collect()
}

/// Minimal polynomial of the multiplication operator of a commutative
/// unital algebra: the Krylov chain from the unit coordinate vector is
/// enough, since a polynomial annihilating the unit annihilates everything.
pub fn algebra_min_poly(a: &[Vec<BigRational>], unit_index: usize) -> RationalPoly {
    let mut seed = vec![BigRational::zero(); a.len()];
    seed[unit_index] = BigRational::one();
    local_min_poly(a, &seed).0.monic()
}

/// Minimal polynomial of a square matrix: Krylov chains from basis seeds,
/// local dependency polynomials combined by LCM, until the accumulated
/// Krylov spans cover the whole space.
pub fn operator_min_poly(a: &[Vec<BigRational>]) -> RationalPoly {
    let d = a.len();
    let mut global: Echelon = Echelon::new(d);
    let mut lcm = RationalPoly::one();
    for seed_idx in 0..d {
        if global.rank() == d {
            break;
        }
        let mut seed = vec![BigRational::zero(); d];
        seed[seed_idx] = BigRational::one();
        if global.contains(&seed) {
            continue;
        }
        let (local, vectors) = local_min_poly(a, &seed);
        lcm = lcm.lcm(&local);
        for v in vectors {
            global.insert(v);
        }
    }
    lcm.monic()
}

fn local_min_poly(
    a: &[Vec<BigRational>],
    seed: &[BigRational],
) -> (RationalPoly, Vec<Vec<BigRational>>) {
    let d = a.len();
    // rows: (pivot, reduced vector, combination over powers A^t seed)
    let mut rows: Vec<(usize, Vec<BigRational>, Vec<BigRational>)> = Vec::new();
    let mut u = seed.to_vec();
    for j in 0..=d {
        let mut w = u.clone();
        let mut combo = vec![BigRational::zero(); j + 1];
        combo[j] = BigRational::one();
        for (pivot, rvec, rcombo) in &rows {
            if !w[*pivot].is_zero() {
                let f = w[*pivot].clone();
                for (wi, ri) in w.iter_mut().zip(rvec) {
                    if !ri.is_zero() {
                        *wi -= &f * ri;
                    }
                }
                for (ci, ri) in combo.iter_mut().zip(rcombo) {
                    if !ri.is_zero() {
                        *ci -= &f * ri;
                    }
                }
            }
        }
        if w.iter().all(Zero::is_zero) {
            let poly = RationalPoly::new(combo);
            let vectors = rows.into_iter().map(|(_, v, _)| v).collect();
            return (poly, vectors);
        }
        let pivot = w.iter().position(|x| !x.is_zero()).expect("nonzero");
        let inv = w[pivot].recip();
        for x in w.iter_mut() {
            *x = &*x * &inv;
        }
        for x in combo.iter_mut() {
            *x = &*x * &inv;
        }
        rows.push((pivot, w, combo));
        u = matvec(a, &u);
    }
    unreachable!("Krylov chain exceeded the space dimension");
}

struct Echelon {
    dim: usize,
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl Echelon {
    fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [BigRational]) {
        for (pivot, rvec) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = v[*pivot].clone();
                for (vi, ri) in v.iter_mut().zip(rvec) {
                    if !ri.is_zero() {
                        *vi -= &f * ri;
                    }
                }
            }
        }
    }

    fn contains(&self, v: &[BigRational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }

    fn insert(&mut self, mut v: Vec<BigRational>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        self.reduce(&mut v);
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(pivot) => {
                let inv = v[pivot].recip();
                for x in v.iter_mut() {
                    *x = &*x * &inv;
                }
                self.rows.push((pivot, v));
                true
            }
        }
    }
}

/// The p = 3, e = -1 shortcut: with kappa inverting the radical, u =
/// omega + 1/omega lies in F; if p(X) is its minimal polynomial then
/// p(X^3 - 3X) is the degree-9 polynomial of alpha = w^(1/3) + 1/w^(1/3).
pub fn irr_shortcut_p3(tower: &TowerContext, res: &ConstructionResult) -> Result<RationalPoly> {
    if tower.p() != 3 {
        return Err(Error::InvalidParameter("shortcut requires p = 3".into()));
    }
    if tower.e() != -1 {
        return Err(Error::InvalidParameter(
            "shortcut requires the signed representative e = -1".into(),
        ));
    }
    let u = res.omega.checked_add(&res.omega.inv()?)?;
    let p_u = min_poly_over_q(&u)?;
    if p_u.degree() != Some(3) {
        return Err(Error::Degenerate(format!(
            "omega + 1/omega has degree {:?}, expected 3",
            p_u.degree()
        )));
    }
    let inner = RationalPoly::from_i64(&[0, -3, 0, 1]);
    Ok(p_u.compose(&inner))
}

/// Frequency of one factorization pattern against the group oracle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternStat {
    pub pattern: Vec<u32>,
    pub observed: u64,
    pub observed_freq: f64,
    pub expected_freq: f64,
}

/// Statistical comparison of factorization patterns mod primes with the
/// exact cycle-type distribution of the expected Galois group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatsReport {
    pub group: GroupVariant,
    pub p: u64,
    pub prime_bound: u64,
    pub primes_used: u64,
    pub patterns: Vec<PatternStat>,
    /// Observed patterns no group element realizes; any entry is a hard
    /// failure for the claimed group.
    pub impossible: Vec<PatternStat>,
    pub tv_distance: f64,
    pub fully_split_freq: f64,
    pub fully_split_expected: f64,
}

impl StatsReport {
    pub fn has_impossible(&self) -> bool {
        !self.impossible.is_empty()
    }
}

/// Factor f modulo all primes up to `prime_bound` (skipping divisors of the
/// discriminant and the integral-model scale) and compare the degree-pattern
/// distribution with the expected group's cycle types on p^2 points.
pub fn galois_stats(
    f: &RationalPoly,
    expected: GroupVariant,
    prime_bound: u64,
) -> Result<StatsReport> {
    let deg = f
        .degree()
        .ok_or_else(|| Error::InvalidParameter("zero polynomial".into()))? as u64;
    let p = (deg as f64).sqrt().round() as u64;
    if p * p != deg || !arith::is_prime_u64(p) || p == 2 {
        return Err(Error::InvalidParameter(format!(
            "degree {deg} is not the square of an odd prime"
        )));
    }
    if !f.is_squarefree() {
        return Err(Error::InvalidParameter("polynomial is not squarefree".into()));
    }
    let (g, scale) = monic_integral_model(f)?;
    let disc = discriminant_monic_int(&g);
    let primes = arith::primes_up_to(prime_bound);
    let usable: Vec<u64> = primes
        .into_iter()
        .filter(|&ell| {
            let lb = BigInt::from(ell);
            !(&scale % &lb).is_zero() && !(&disc % &lb).is_zero()
        })
        .collect();
    let observations: Vec<Vec<u32>> = usable
        .par_iter()
        .map(|&ell| factor_degree_pattern(&ModPoly::from_bigints(ell, &g)))
        .collect();
    let mut tally: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for pattern in observations {
        *tally.entry(pattern).or_insert(0) += 1;
    }
    let oracle = groups::cycle_type_distribution(expected, p);
    let order: u64 = oracle.values().sum();
    debug_assert_eq!(order, p.pow(3));
    let total = usable.len() as u64;
    let mut patterns = Vec::new();
    let mut impossible = Vec::new();
    let mut tv = 0.0f64;
    let mut keys: Vec<Vec<u32>> = tally.keys().cloned().collect();
    for k in oracle.keys() {
        if !keys.contains(k) {
            keys.push(k.clone());
        }
    }
    keys.sort();
    for key in keys {
        let observed = tally.get(&key).copied().unwrap_or(0);
        let observed_freq = if total == 0 { 0.0 } else { observed as f64 / total as f64 };
        let expected_count = oracle.get(&key).copied().unwrap_or(0);
        let expected_freq = expected_count as f64 / order as f64;
        tv += (observed_freq - expected_freq).abs();
        let stat = PatternStat { pattern: key.clone(), observed, observed_freq, expected_freq };
        if expected_count == 0 && observed > 0 {
            impossible.push(stat.clone());
        }
        patterns.push(stat);
    }
    let split_key = vec![1u32; (p * p) as usize];
    let fully_split_freq = patterns
        .iter()
        .find(|s| s.pattern == split_key)
        .map(|s| s.observed_freq)
        .unwrap_or(0.0);
    let fully_split_expected = oracle.get(&split_key).copied().unwrap_or(0) as f64 / order as f64;
    Ok(StatsReport {
        group: expected,
        p,
        prime_bound,
        primes_used: total,
        patterns,
        impossible,
        tv_distance: tv / 2.0,
        fully_split_freq,
        fully_split_expected,
    })
}

/// Brute-force enumeration oracle for the two non-abelian groups of order
/// p^3 acting on the cosets of a core-free subgroup of order p.
pub mod groups {
    use super::GroupVariant;
    use std::collections::{BTreeMap, HashMap};

    type Elem = (u64, u64, u64);

    fn elements(variant: GroupVariant, p: u64) -> Vec<Elem> {
        let mut out = Vec::with_capacity((p * p * p) as usize);
        match variant {
            GroupVariant::Heisenberg => {
                for a in 0..p {
                    for b in 0..p {
                        for c in 0..p {
                            out.push((a, b, c));
                        }
                    }
                }
            }
            GroupVariant::Semidirect => {
                for i in 0..p * p {
                    for j in 0..p {
                        out.push((i, j, 0));
                    }
                }
            }
        }
        out
    }

    fn multiply(variant: GroupVariant, p: u64, x: Elem, y: Elem) -> Elem {
        match variant {
            // upper unitriangular 3x3 matrices over Z/p
            GroupVariant::Heisenberg => {
                ((x.0 + y.0) % p, (x.1 + y.1) % p, (x.2 + y.2 + x.0 * y.1) % p)
            }
            // C_{p^2} ⋊ C_p with v u v^{-1} = u^{1+p}
            GroupVariant::Semidirect => {
                let p2 = p * p;
                let mut scale = 1u64;
                for _ in 0..x.1 {
                    scale = scale * (1 + p) % p2;
                }
                ((x.0 + y.0 * scale) % p2, (x.1 + y.1) % p, 0)
            }
        }
    }

    fn subgroup(variant: GroupVariant, p: u64) -> Vec<Elem> {
        match variant {
            // a non-central order-p subgroup; all such are equivalent under
            // automorphisms, so the coset cycle types are well defined
            GroupVariant::Heisenberg => (0..p).map(|t| (t, 0, 0)).collect(),
            // <v>, non-normal of order p
            GroupVariant::Semidirect => (0..p).map(|t| (0, t, 0)).collect(),
        }
    }

    /// Cycle types (sorted ascending) of every group element acting on the
    /// p^2 cosets, with multiplicities summing to p^3.
    pub fn cycle_type_distribution(variant: GroupVariant, p: u64) -> BTreeMap<Vec<u32>, u64> {
        let elems = elements(variant, p);
        let sub = subgroup(variant, p);
        // canonical coset representative: minimum of g*H
        let coset_rep = |g: Elem| -> Elem {
            sub.iter().map(|&h| multiply(variant, p, g, h)).min().expect("nonempty")
        };
        let mut coset_index: HashMap<Elem, usize> = HashMap::new();
        let mut reps: Vec<Elem> = Vec::new();
        for &g in &elems {
            let rep = coset_rep(g);
            if !coset_index.contains_key(&rep) {
                coset_index.insert(rep, reps.len());
                reps.push(rep);
            }
        }
        debug_assert_eq!(reps.len() as u64, p * p);
        let mut dist: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for &g in &elems {
            let image: Vec<usize> = reps
                .iter()
                .map(|&rep| coset_index[&coset_rep(multiply(variant, p, g, rep))])
                .collect();
            let mut seen = vec![false; image.len()];
            let mut cycles: Vec<u32> = Vec::new();
            for start in 0..image.len() {
                if seen[start] {
                    continue;
                }
                let mut len = 0u32;
                let mut at = start;
                while !seen[at] {
                    seen[at] = true;
                    at = image[at];
                    len += 1;
                }
                cycles.push(len);
            }
            cycles.sort_unstable();
            *dist.entry(cycles).or_insert(0) += 1;
        }
        dist
    }
}

// ---------------------------------------------------------------------------
// numeric sanity gadget: fixed-point Durand-Kerner root refinement
// ---------------------------------------------------------------------------

/// Fraction bits of the fixed-point numbers used by the cross-check.
const FX_PREC: u32 = 512;

#[derive(Clone, Debug)]
struct Fx(BigInt);

impl Fx {
    fn zero() -> Self {
        Fx(BigInt::zero())
    }

    fn from_f64(v: f64) -> Self {
        // good enough for initialization data
        let scaled = v * (1u64 << 32) as f64;
        Fx(BigInt::from(scaled as i128) << (FX_PREC - 32))
    }

    fn from_rational(q: &BigRational) -> Self {
        Fx((q.numer() << FX_PREC) / q.denom())
    }

    fn add(&self, rhs: &Fx) -> Fx {
        Fx(&self.0 + &rhs.0)
    }

    fn sub(&self, rhs: &Fx) -> Fx {
        Fx(&self.0 - &rhs.0)
    }

    fn mul(&self, rhs: &Fx) -> Fx {
        Fx((&self.0 * &rhs.0) >> FX_PREC)
    }

    fn div(&self, rhs: &Fx) -> Fx {
        Fx((&self.0 << FX_PREC) / &rhs.0)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

#[derive(Clone, Debug)]
struct Cx {
    re: Fx,
    im: Fx,
}

impl Cx {
    fn new(re: Fx, im: Fx) -> Self {
        Cx { re, im }
    }

    fn add(&self, rhs: &Cx) -> Cx {
        Cx::new(self.re.add(&rhs.re), self.im.add(&rhs.im))
    }

    fn sub(&self, rhs: &Cx) -> Cx {
        Cx::new(self.re.sub(&rhs.re), self.im.sub(&rhs.im))
    }

    fn mul(&self, rhs: &Cx) -> Cx {
        Cx::new(
            self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        )
    }

    fn div(&self, rhs: &Cx) -> Cx {
        let den = rhs.re.mul(&rhs.re).add(&rhs.im.mul(&rhs.im));
        let num_re = self.re.mul(&rhs.re).add(&self.im.mul(&rhs.im));
        let num_im = self.im.mul(&rhs.re).sub(&self.re.mul(&rhs.im));
        Cx::new(num_re.div(&den), num_im.div(&den))
    }

    fn norm2(&self) -> Fx {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
}

/// Find all complex roots numerically (Durand-Kerner in 512-bit fixed
/// point), re-expand prod (X - root), and compare with the exact
/// coefficients to 2^-100. Sanity only; never a source of truth.
pub fn float_root_cross_check(f: &RationalPoly) -> Result<bool> {
    let d = f.degree().ok_or_else(|| Error::InvalidParameter("zero polynomial".into()))?;
    if d == 0 {
        return Ok(true);
    }
    if !f.is_monic() || !f.is_squarefree() {
        return Err(Error::InvalidParameter("cross-check needs a monic squarefree input".into()));
    }
    let coeffs: Vec<Cx> = f
        .coeffs()
        .iter()
        .map(|c| Cx::new(Fx::from_rational(c), Fx::zero()))
        .collect();
    // Fujiwara-style root bound, approximate arithmetic is fine here
    let mut bound = 1.0f64;
    for (i, c) in f.coeffs().iter().enumerate().take(d) {
        let mag = c.abs().to_f64().unwrap_or(f64::MAX).powf(1.0 / (d - i) as f64);
        bound = bound.max(2.0 * mag);
    }
    let seed = Cx::new(Fx::from_f64(0.4), Fx::from_f64(0.9));
    let radius = Cx::new(Fx::from_f64(bound), Fx::from_f64(0.0));
    let mut roots: Vec<Cx> = Vec::with_capacity(d);
    let mut acc = seed.clone();
    for _ in 0..d {
        roots.push(radius.mul(&acc));
        acc = acc.mul(&seed);
    }
    let eval = |z: &Cx| -> Cx {
        let mut acc = Cx::new(Fx::zero(), Fx::zero());
        for c in coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    };
    let tiny = Fx(BigInt::one() << (FX_PREC - 220)); // |delta|^2 threshold
    let mut converged = false;
    for _ in 0..2000 {
        let mut max_delta = Fx::zero();
        for k in 0..d {
            let num = eval(&roots[k]);
            let mut den = Cx::new(Fx::from_f64(1.0), Fx::zero());
            for j in 0..d {
                if j != k {
                    den = den.mul(&roots[k].sub(&roots[j]));
                }
            }
            if den.norm2().is_zero() {
                // nudge a collided iterate
                roots[k] = roots[k].add(&Cx::new(Fx::from_f64(1e-3), Fx::from_f64(2e-3)));
                continue;
            }
            let delta = num.div(&den);
            roots[k] = roots[k].sub(&delta);
            let n2 = delta.norm2();
            if n2.0 > max_delta.0 {
                max_delta = n2;
            }
        }
        if max_delta.0 < tiny.0 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Ok(false);
    }
    // re-expand prod (X - z_k)
    let mut poly: Vec<Cx> = vec![Cx::new(Fx::from_f64(1.0), Fx::zero())];
    for z in &roots {
        let mut next = vec![Cx::new(Fx::zero(), Fx::zero()); poly.len() + 1];
        for (i, t) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(t);
            next[i] = next[i].sub(&t.mul(z));
        }
        poly = next;
    }
    // compare with exact coefficients at 2^-100 absolute
    let tol = BigInt::one() << (FX_PREC - 100);
    for (i, c) in f.coeffs().iter().enumerate() {
        let exact = Fx::from_rational(c);
        let diff_re = poly[i].re.sub(&exact);
        if diff_re.0.abs() > tol || poly[i].im.0.abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Bounds;
    use crate::construct::build_construction;
    use crate::cyclo::CycloElement;
    use crate::tower::{build_tower, TowerSpec};

    #[test]
    fn operator_min_poly_of_scalar_matrix() {
        // multiplication by the rational constant 5 has minimal polynomial X - 5
        let five = BigRational::from(BigInt::from(5));
        let a = vec![
            vec![five.clone(), BigRational::zero()],
            vec![BigRational::zero(), five.clone()],
        ];
        let f = operator_min_poly(&a);
        assert_eq!(f, RationalPoly::from_i64(&[-5, 1]));
        // a nilpotent Jordan block needs the LCM over more than one seed
        let a = vec![
            vec![BigRational::zero(), BigRational::one()],
            vec![BigRational::zero(), BigRational::zero()],
        ];
        let f = operator_min_poly(&a);
        assert_eq!(f, RationalPoly::from_i64(&[0, 0, 1]));
    }

    #[test]
    fn zeta9_construction_has_degree_nine_irr() {
        let ctx = build_tower(&TowerSpec::zeta_p2(3).with_e(2)).unwrap();
        let x = CycloElement::zeta(9)
            .unwrap()
            .checked_add(&CycloElement::from_integer(9, 2).unwrap())
            .unwrap();
        let res = build_construction(
            &ctx,
            &x,
            GroupVariant::Heisenberg,
            None,
            false,
            &Bounds::default(),
        )
        .unwrap();
        let f = irr_alpha_matrix(&ctx, &res).unwrap();
        assert_eq!(f.degree(), Some(9));
        assert!(f.is_monic());
        // degree-9 coefficient of X^8 vanishes for this construction
        assert!(f.coeff(8).is_zero());
    }

    #[test]
    fn shortcut_requires_p3_and_e_minus_one() {
        let ctx = build_tower(&TowerSpec::gauss(3, 7).with_e(2)).unwrap();
        let x = ctx.delta().checked_add(&ctx.zeta_p()).unwrap();
        let res = build_construction(
            &ctx,
            &x,
            GroupVariant::Heisenberg,
            None,
            false,
            &Bounds::default(),
        )
        .unwrap();
        assert!(irr_shortcut_p3(&ctx, &res).is_err());
    }

    #[test]
    fn shortcut_agrees_with_matrix_for_r7() {
        let ctx = build_tower(&TowerSpec::gauss(3, 7).with_e(-1)).unwrap();
        let x = ctx.delta().checked_add(&ctx.zeta_p()).unwrap();
        let res = build_construction(
            &ctx,
            &x,
            GroupVariant::Heisenberg,
            None,
            false,
            &Bounds::default(),
        )
        .unwrap();
        let quick = irr_shortcut_p3(&ctx, &res).unwrap();
        let exact = irr_alpha_matrix(&ctx, &res).unwrap();
        assert_eq!(quick, exact);
        assert_eq!(exact.degree(), Some(9));
    }

    #[test]
    fn degenerate_omega_is_reported() {
        let ctx = build_tower(&TowerSpec::gauss(3, 7).with_e(-1)).unwrap();
        let res = build_construction(
            &ctx,
            &CycloElement::one(21).unwrap(),
            GroupVariant::Heisenberg,
            None,
            true,
            &Bounds::default(),
        )
        .unwrap();
        // omega = 1: u = 2 has degree 1, and the matrix degree collapses
        assert!(matches!(irr_shortcut_p3(&ctx, &res), Err(Error::Degenerate(_))));
        assert!(matches!(irr_alpha_matrix(&ctx, &res), Err(Error::Degenerate(_))));
    }

    #[test]
    fn heisenberg_oracle_facts() {
        let dist = groups::cycle_type_distribution(GroupVariant::Heisenberg, 3);
        let total: u64 = dist.values().sum();
        assert_eq!(total, 27);
        // only the identity fixes all 9 points: expected split density 1/27
        assert_eq!(dist.get(&vec![1u32; 9]).copied(), Some(1));
        // exponent 3 means no 9-cycles can occur
        assert!(dist.keys().all(|k| !k.contains(&9)));
        // the non-identity classes are 3+3+3 or fixed-point-free 3-cycles
        for key in dist.keys() {
            assert!(key.iter().all(|&c| c == 1 || c == 3));
        }
    }

    #[test]
    fn semidirect_oracle_facts() {
        let dist = groups::cycle_type_distribution(GroupVariant::Semidirect, 3);
        let total: u64 = dist.values().sum();
        assert_eq!(total, 27);
        assert_eq!(dist.get(&vec![1u32; 9]).copied(), Some(1));
        // 18 elements of order 9 act as 9-cycles
        assert_eq!(dist.get(&vec![9u32]).copied(), Some(18));
    }

    #[test]
    fn stats_on_a_cyclotomic_control() {
        // Phi_9 composed with nothing is only degree 6; use the Heisenberg
        // construction instead as a smoke input
        let ctx = build_tower(&TowerSpec::zeta_p2(3).with_e(2)).unwrap();
        let x = CycloElement::zeta(9)
            .unwrap()
            .checked_add(&CycloElement::from_integer(9, 2).unwrap())
            .unwrap();
        let res = build_construction(
            &ctx,
            &x,
            GroupVariant::Heisenberg,
            None,
            false,
            &Bounds::default(),
        )
        .unwrap();
        let f = irr_alpha_matrix(&ctx, &res).unwrap();
        let report = galois_stats(&f, GroupVariant::Heisenberg, 3000).unwrap();
        assert!(!report.has_impossible());
        assert!(report.primes_used > 300);
        assert!((report.fully_split_freq - report.fully_split_expected).abs() < 0.05);
        // the same polynomial against the wrong group shows impossible
        // patterns (it has plenty of 3+3+3 splits the C9xC3 action lacks...
        // in fact both groups share those; the discriminating pattern is the
        // 9-cycle, absent here), so the tv distance must be visibly larger
        let wrong = galois_stats(&f, GroupVariant::Semidirect, 3000).unwrap();
        assert!(wrong.tv_distance > report.tv_distance);
    }

    #[test]
    fn numeric_cross_check_on_small_polys() {
        // X^2 - 2
        let f = RationalPoly::from_i64(&[-2, 0, 1]);
        assert!(float_root_cross_check(&f).unwrap());
        // X^3 + X^2 - 2X - 1 (the delta_3(7) minimal polynomial)
        let f = RationalPoly::from_i64(&[-1, -2, 1, 1]);
        assert!(float_root_cross_check(&f).unwrap());
    }

    #[test]
    fn numeric_cross_check_on_a_constructed_nonic() {
        let ctx = build_tower(&TowerSpec::zeta_p2(3).with_e(2)).unwrap();
        let x = CycloElement::zeta(9)
            .unwrap()
            .checked_add(&CycloElement::from_integer(9, 2).unwrap())
            .unwrap();
        let res = build_construction(
            &ctx,
            &x,
            GroupVariant::Heisenberg,
            None,
            false,
            &Bounds::default(),
        )
        .unwrap();
        let f = irr_alpha_matrix(&ctx, &res).unwrap();
        assert!(float_root_cross_check(&f).unwrap());
    }
}
