//! The field tower Q ⊂ F, K, L ⊂ Q(zeta_m).
//!
//! F is a degree-p cyclic field: either the Gaussian-period subfield of
//! Q(zeta_r) for a prime r = 1 (mod p), or the degree-p subfield of
//! Q(zeta_{p^2}). K = Q(zeta_p), L = FK, and everything lives inside the
//! ambient cyclotomic field of conductor m = p*r or p^2. The context carries
//! the generators sigma (of Gal(L/K)) and tau (of Gal(L/F)) as ambient
//! automorphisms, the period delta generating F, the primitive root e used by
//! the Phi-map, and the unit subgroups fixing each layer.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::arith;
use crate::cyclo::{coerce, unit_group, Automorphism, CycloElement, MAX_CONDUCTOR};
use crate::linalg::LinSolver;
use crate::{Error, Result};

pub use crate::arith::primitive_root;

/// Where the degree-p field F comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TowerSource {
    /// F = Q(delta_p(r)) inside Q(zeta_r); `m_r` is a primitive root mod r
    /// (defaulted to the smallest when absent).
    Gauss { r: u64, m_r: Option<u64> },
    /// F = the degree-p subfield of Q(zeta_{p^2}).
    ZetaP2,
}

/// Declarative tower description; `build_tower` turns it into a context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub p: u64,
    pub source: TowerSource,
    /// Signed integer representative of a primitive root mod p; the Phi-map
    /// exponents use the integer itself, not just its class. Default: the
    /// smallest positive primitive root.
    #[serde(default)]
    pub e: Option<i64>,
    /// Forced exponent for sigma (an ambient unit); default picks the
    /// generator with the smallest action on the source root of unity.
    #[serde(default)]
    pub sigma_k: Option<u64>,
}

impl TowerSpec {
    pub fn gauss(p: u64, r: u64) -> Self {
        TowerSpec { p, source: TowerSource::Gauss { r, m_r: None }, e: None, sigma_k: None }
    }

    pub fn zeta_p2(p: u64) -> Self {
        TowerSpec { p, source: TowerSource::ZetaP2, e: None, sigma_k: None }
    }

    pub fn with_e(mut self, e: i64) -> Self {
        self.e = Some(e);
        self
    }

    pub fn with_sigma(mut self, k: u64) -> Self {
        self.sigma_k = Some(k);
        self
    }
}

/// A constructed tower. Immutable; cheap to share by reference.
#[derive(Debug)]
pub struct TowerContext {
    spec: TowerSpec,
    p: u64,
    m: u64,
    r: Option<u64>,
    m_r: Option<u64>,
    e: i64,
    delta: CycloElement,
    sigma: Automorphism,
    tau: Automorphism,
    h_f: Vec<u64>,
    h_k: Vec<u64>,
    h_l: Vec<u64>,
    l_basis: OnceLock<LBasis>,
}

#[derive(Debug)]
struct LBasis {
    elems: Vec<CycloElement>,
    solver: LinSolver,
}

/// JSON summary emitted by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TowerSummary {
    pub p: u64,
    pub m: u64,
    pub source: TowerSource,
    pub e: i64,
    pub sigma_k: u64,
    pub tau_k: u64,
    pub delta: CycloElement,
    pub degree_l: u64,
    pub degree_f: u64,
    pub degree_k: u64,
}

/// The Gaussian period delta_p(r): the sum of zeta_r over the index-p power
/// subgroup of (Z/r)*, embedded in Q(zeta_{p*r}). Its minimal polynomial over
/// Q has degree exactly p.
pub fn gaussian_period(p: u64, r: u64, m_r: u64) -> Result<CycloElement> {
    validate_gauss(p, r, m_r)?;
    let m = p * r;
    if m > MAX_CONDUCTOR {
        return Err(Error::ConductorTooLarge { m, max: MAX_CONDUCTOR });
    }
    let count = (r - 1) / p;
    let mut acc = CycloElement::zero(m)?;
    let mut exp: u64 = 1;
    let step = arith::mod_pow_u64(m_r, p, r);
    for _ in 0..count {
        // zeta_r = zeta_m^p
        let term = CycloElement::root_of_unity(m, (p * exp) % m)?;
        acc = acc.checked_add(&term)?;
        exp = (exp as u128 * step as u128 % r as u128) as u64;
    }
    Ok(acc)
}

fn validate_gauss(p: u64, r: u64, m_r: u64) -> Result<()> {
    if !arith::is_prime_u64(r) {
        return Err(Error::InvalidParameter(format!("r = {r} is not prime")));
    }
    if r % p != 1 {
        return Err(Error::InvalidParameter(format!("r = {r} is not 1 mod p = {p}")));
    }
    if !arith::is_primitive_root(m_r, r) {
        return Err(Error::InvalidParameter(format!(
            "{m_r} is not a primitive root modulo {r}"
        )));
    }
    Ok(())
}

/// Build the tower from a spec: pick e, sigma, tau deterministically, compute
/// delta and the fixing subgroups, and verify the layer degrees.
pub fn build_tower(spec: &TowerSpec) -> Result<TowerContext> {
    let p = spec.p;
    if !arith::is_prime_u64(p) || p == 2 {
        return Err(Error::InvalidParameter(format!("p = {p} must be an odd prime")));
    }
    let e = match spec.e {
        Some(e) => {
            let class = e.rem_euclid(p as i64) as u64;
            if class == 0 || !arith::is_primitive_root(class, p) {
                return Err(Error::InvalidParameter(format!(
                    "e = {e} is not a primitive root modulo {p}"
                )));
            }
            e
        }
        None => arith::primitive_root(p)? as i64,
    };

    let (m, r, m_r) = match spec.source {
        TowerSource::Gauss { r, m_r } => {
            let m_r = match m_r {
                Some(g) => g,
                None => arith::primitive_root(r)?,
            };
            validate_gauss(p, r, m_r)?;
            (p * r, Some(r), Some(m_r))
        }
        TowerSource::ZetaP2 => (p * p, None, None),
    };
    if m > MAX_CONDUCTOR {
        return Err(Error::ConductorTooLarge { m, max: MAX_CONDUCTOR });
    }

    let units = unit_group(m);
    let h_f: Vec<u64> = match spec.source {
        TowerSource::Gauss { .. } => {
            let r = r.unwrap();
            let sub = power_subgroup(m_r.unwrap(), p, r);
            units.iter().copied().filter(|&k| sub.binary_search(&(k % r)).is_ok()).collect()
        }
        TowerSource::ZetaP2 => units
            .iter()
            .copied()
            .filter(|&k| (p - 1) % arith::mult_order_u64(k, m) == 0)
            .collect(),
    };
    let h_k: Vec<u64> = units.iter().copied().filter(|&k| k % p == 1).collect();
    let h_l: Vec<u64> = h_k.iter().copied().filter(|k| h_f.binary_search(k).is_ok()).collect();

    let phi_m = units.len() as u64;
    if phi_m / (h_l.len() as u64) != p * (p - 1)
        || phi_m / (h_f.len() as u64) != p
        || phi_m / (h_k.len() as u64) != p - 1
    {
        return Err(Error::Internal("tower subgroup indices do not match layer degrees".into()));
    }

    // sigma: fixes K (k = 1 mod p), moves F (k not in H_F); default choice is
    // the candidate with the smallest action exponent on the source root.
    let sigma_k = match spec.sigma_k {
        Some(k) => {
            let k = k % m;
            if arith::gcd_u64(k, m) != 1 || k % p != 1 || h_f.binary_search(&k).is_ok() {
                return Err(Error::InvalidParameter(format!(
                    "sigma exponent {k} does not generate Gal(L/K)"
                )));
            }
            k
        }
        None => {
            let source_mod = r.unwrap_or(m);
            units
                .iter()
                .copied()
                .filter(|&k| k % p == 1 && h_f.binary_search(&k).is_err())
                .min_by_key(|&k| (k % source_mod, k))
                .ok_or_else(|| Error::Internal("no generator for Gal(L/K) found".into()))?
        }
    };
    let sigma = Automorphism::new(m, sigma_k)?;

    // tau: fixes F pointwise, acts on zeta_p by the class of e.
    let e_class = e.rem_euclid(p as i64) as u64;
    let tau_k = h_f
        .iter()
        .copied()
        .find(|&k| k % p == e_class)
        .ok_or_else(|| Error::Internal("no generator for Gal(L/F) found".into()))?;
    let tau = Automorphism::new(m, tau_k)?;

    let delta = match spec.source {
        TowerSource::Gauss { .. } => gaussian_period(p, r.unwrap(), m_r.unwrap())?,
        TowerSource::ZetaP2 => {
            let mut acc = CycloElement::zero(m)?;
            let zeta = CycloElement::zeta(m)?;
            for j in 0..(p - 1) as i64 {
                acc = acc.checked_add(&tau.power(j).apply(&zeta)?)?;
            }
            acc
        }
    };

    let ctx = TowerContext {
        spec: spec.clone(),
        p,
        m,
        r,
        m_r,
        e,
        delta,
        sigma,
        tau,
        h_f,
        h_k,
        h_l,
        l_basis: OnceLock::new(),
    };
    ctx.verify()?;
    Ok(ctx)
}

/// The subgroup of (Z/r)* generated by g^p, sorted.
fn power_subgroup(g: u64, p: u64, r: u64) -> Vec<u64> {
    let step = arith::mod_pow_u64(g, p, r);
    let mut elems = vec![];
    let mut x = 1u64;
    loop {
        elems.push(x);
        x = (x as u128 * step as u128 % r as u128) as u64;
        if x == 1 {
            break;
        }
    }
    elems.sort_unstable();
    elems
}

impl TowerContext {
    pub fn spec(&self) -> &TowerSpec {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn r(&self) -> Option<u64> {
        self.r
    }

    pub fn source_primitive_root(&self) -> Option<u64> {
        self.m_r
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn delta(&self) -> &CycloElement {
        &self.delta
    }

    pub fn sigma(&self) -> Automorphism {
        self.sigma
    }

    pub fn tau(&self) -> Automorphism {
        self.tau
    }

    pub fn is_zeta_p2(&self) -> bool {
        matches!(self.spec.source, TowerSource::ZetaP2)
    }

    /// zeta_p inside the ambient field.
    pub fn zeta_p(&self) -> CycloElement {
        CycloElement::root_of_unity(self.m, self.m / self.p).expect("ambient conductor is valid")
    }

    pub fn degree_l(&self) -> u64 {
        self.p * (self.p - 1)
    }

    /// Subgroup of (Z/m)* fixing F pointwise.
    pub fn h_f(&self) -> &[u64] {
        &self.h_f
    }

    pub fn h_k(&self) -> &[u64] {
        &self.h_k
    }

    pub fn h_l(&self) -> &[u64] {
        &self.h_l
    }

    pub fn in_l(&self, x: &CycloElement) -> bool {
        self.fixed_by(&self.h_l, x)
    }

    pub fn in_k(&self, x: &CycloElement) -> bool {
        self.fixed_by(&self.h_k, x)
    }

    pub fn in_f(&self, x: &CycloElement) -> bool {
        self.fixed_by(&self.h_f, x)
    }

    fn fixed_by(&self, subgroup: &[u64], x: &CycloElement) -> bool {
        if x.conductor() != self.m {
            return false;
        }
        subgroup.iter().all(|&k| {
            Automorphism::new(self.m, k)
                .and_then(|a| a.apply(x))
                .map(|img| img == *x)
                .unwrap_or(false)
        })
    }

    /// Contract an ambient element into K = Q(zeta_p).
    pub fn to_k(&self, x: &CycloElement) -> Result<CycloElement> {
        coerce(x, self.p)
    }

    /// Q-basis of L: delta^a * zeta_p^c for a < p, c < p-1.
    pub fn l_basis(&self) -> Result<&[CycloElement]> {
        Ok(&self.basis_data()?.elems)
    }

    /// Coordinates of an element of L on the `l_basis`.
    pub fn l_coords(&self, x: &CycloElement) -> Result<Vec<BigRational>> {
        if x.conductor() != self.m {
            return Err(Error::ConductorMismatch { left: x.conductor(), right: self.m });
        }
        let data = self.basis_data()?;
        let rhs: Vec<BigRational> = x.coeffs().to_vec();
        data.solver
            .solve(&rhs)
            .ok_or(Error::NotInSubfield { conductor: self.m, target: self.m })
    }

    fn basis_data(&self) -> Result<&LBasis> {
        if let Some(found) = self.l_basis.get() {
            return Ok(found);
        }
        let zeta_p = self.zeta_p();
        let mut elems = Vec::with_capacity((self.p * (self.p - 1)) as usize);
        for a in 0..self.p {
            let da = self.delta.pow(a as i64)?;
            for c in 0..self.p - 1 {
                elems.push(da.checked_mul(&zeta_p.pow(c as i64)?)?);
            }
        }
        let cols: Vec<Vec<BigRational>> = elems.iter().map(|e| e.coeffs().to_vec()).collect();
        let solver = LinSolver::new(&cols);
        let _ = self.l_basis.set(LBasis { elems, solver });
        Ok(self.l_basis.get().expect("just set"))
    }

    pub fn summary(&self) -> TowerSummary {
        TowerSummary {
            p: self.p,
            m: self.m,
            source: self.spec.source,
            e: self.e,
            sigma_k: self.sigma.exponent(),
            tau_k: self.tau.exponent(),
            delta: self.delta.clone(),
            degree_l: self.degree_l(),
            degree_f: self.p,
            degree_k: self.p - 1,
        }
    }

    fn verify(&self) -> Result<()> {
        let zeta_p = self.zeta_p();
        // sigma fixes zeta_p, moves delta, and has order p on L
        if self.sigma.apply(&zeta_p)? != zeta_p {
            return Err(Error::Internal("sigma does not fix zeta_p".into()));
        }
        let mut img = self.delta.clone();
        for step in 1..=self.p {
            img = self.sigma.apply(&img)?;
            let back = img == self.delta;
            if step < self.p && back {
                return Err(Error::Internal("sigma has order < p on delta".into()));
            }
            if step == self.p && !back {
                return Err(Error::Internal("sigma^p does not fix delta".into()));
            }
        }
        // tau fixes delta and sends zeta_p to zeta_p^e
        if self.tau.apply(&self.delta)? != self.delta {
            return Err(Error::Internal("tau does not fix delta".into()));
        }
        let e_class = self.e.rem_euclid(self.p as i64);
        if self.tau.apply(&zeta_p)? != zeta_p.pow(e_class)? {
            return Err(Error::Internal("tau does not act on zeta_p by e".into()));
        }
        Ok(())
    }
}
