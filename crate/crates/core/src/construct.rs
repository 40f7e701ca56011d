//! Assembling the Kummer data for a validated x: beta, b, omega, the kappa
//! coefficient, and the symbolic radical expansion of
//! alpha = sum_i kappa^i(omega^(1/p)).
//!
//! alpha is kept symbolic as pairs (coefficient in L, exponent of the radical
//! in 1..p-1); the minimal-polynomial machinery consumes that form directly,
//! so no representation of the big field M is ever committed to here.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::config::Bounds;
use crate::cyclo::CycloElement;
use crate::maps::{kappa_exponent, Evidence, GroupVariant, MapContext};
use crate::tower::{build_tower, TowerContext, TowerSpec};
use crate::{Error, Result};

/// One term of alpha: coeff * (omega^(1/p))^radical_exp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaTerm {
    pub coeff: CycloElement,
    pub radical_exp: u32,
}

/// Everything the minimal-polynomial stage needs, self-contained enough to
/// serialize and reload (the tower is rebuilt from its spec).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructionResult {
    pub tower: TowerSpec,
    pub variant: GroupVariant,
    pub x: CycloElement,
    pub beta: CycloElement,
    pub b: CycloElement,
    pub omega: CycloElement,
    /// The radical generator theta with theta^p in K; semidirect only.
    pub theta: Option<CycloElement>,
    /// kappa(omega^(1/p)) = kappa_coeff * (omega^(1/p))^e.
    pub kappa_coeff: CycloElement,
    pub alpha_terms: Vec<AlphaTerm>,
    /// True when the non-power precondition was overridden by the caller.
    pub forced: bool,
    /// How the non-power condition for this variant was established.
    pub nonpower_evidence: Evidence,
}

impl ConstructionResult {
    pub fn rebuild_tower(&self) -> Result<TowerContext> {
        build_tower(&self.tower)
    }
}

/// Build the construction for `x` and the chosen group variant.
///
/// The matching non-power condition is checked through the ideal criterion
/// and residue witnesses; `force` proceeds anyway and records the fact. For
/// the semidirect variant `theta_override` substitutes the Lagrange-resolvent
/// default (the override must satisfy sigma(theta) = zeta_p * theta).
pub fn build_construction(
    tower: &TowerContext,
    x: &CycloElement,
    variant: GroupVariant,
    theta_override: Option<CycloElement>,
    force: bool,
    bounds: &Bounds,
) -> Result<ConstructionResult> {
    if x.is_zero() {
        return Err(Error::ZeroInput("construction element"));
    }
    let maps = MapContext::new(tower);
    let classification = maps.classify(x, bounds)?;
    let status = classification.status(variant);
    if !status.nonpower && !force {
        return Err(Error::Degenerate(format!(
            "{} non-power condition not established for x (use force to override)",
            variant.name()
        )));
    }
    let beta = maps.beta(x)?;
    let b = maps.b_value(x, variant)?;
    let (omega, theta, kappa_base) = match variant {
        GroupVariant::Heisenberg => (maps.phi(&beta)?, None, beta.clone()),
        GroupVariant::Semidirect => {
            let theta = match theta_override {
                Some(t) => {
                    let lhs = tower.sigma().apply(&t)?;
                    let rhs = tower.zeta_p().checked_mul(&t)?;
                    if lhs != rhs || t.is_zero() {
                        return Err(Error::InvalidParameter(
                            "theta override is not a zeta_p eigenvector of sigma".into(),
                        ));
                    }
                    t
                }
                None => maps.lagrange_resolvent(tower.delta())?,
            };
            let base = beta.checked_mul(&theta)?;
            (maps.phi(&base)?, Some(theta), base)
        }
    };
    if omega.is_zero() {
        return Err(Error::Degenerate("omega vanished".into()));
    }
    let kappa_coeff = kappa_base.pow_big(&kappa_exponent(tower.p(), tower.e()))?;
    let alpha_terms = kappa_orbit(tower, &omega, &kappa_coeff)?;
    Ok(ConstructionResult {
        tower: tower.spec().clone(),
        variant,
        x: x.clone(),
        beta,
        b,
        omega,
        theta,
        kappa_coeff,
        alpha_terms,
        forced: force && !status.nonpower,
        nonpower_evidence: status.evidence.clone(),
    })
}

/// Iterate the kappa rule symbolically: kappa(w^(1/p)) = C * (w^(1/p))^e with
/// C in L, reducing radical exponents by (w^(1/p))^p = w. Returns the terms
/// kappa^i(w^(1/p)) = lambda_i * (w^(1/p))^(e^i mod p) for i = 0..p-2.
fn kappa_orbit(
    tower: &TowerContext,
    omega: &CycloElement,
    kappa_coeff: &CycloElement,
) -> Result<Vec<AlphaTerm>> {
    let p = tower.p() as i64;
    let e = tower.e();
    let mut terms = Vec::with_capacity((p - 1) as usize);
    let mut lambda = CycloElement::one(tower.conductor())?;
    let mut exp: i64 = 1;
    for _ in 0..p - 1 {
        terms.push(AlphaTerm { coeff: lambda.clone(), radical_exp: exp as u32 });
        let (lam, ex) = kappa_step(tower, omega, kappa_coeff, &lambda, exp, e)?;
        lambda = lam;
        exp = ex;
    }
    Ok(terms)
}

/// One application of kappa to lambda * (w^(1/p))^d.
fn kappa_step(
    tower: &TowerContext,
    omega: &CycloElement,
    kappa_coeff: &CycloElement,
    lambda: &CycloElement,
    d: i64,
    e: i64,
) -> Result<(CycloElement, i64)> {
    let p = tower.p() as i64;
    let raw = e * d;
    let s = raw.rem_euclid(p);
    let t = (raw - s) / p;
    let lam = tower
        .tau()
        .apply(lambda)?
        .checked_mul(&kappa_coeff.pow(d)?)?
        .checked_mul(&omega.pow_big(&BigInt::from(t))?)?;
    Ok((lam, s))
}

/// Symbolically iterate kappa p-1 times on the radical; central order p-1
/// means the orbit closes back to coefficient 1 and exponent 1.
pub fn kappa_order_check(tower: &TowerContext, res: &ConstructionResult) -> Result<bool> {
    let p = tower.p() as i64;
    let e = tower.e();
    let mut lambda = CycloElement::one(tower.conductor())?;
    let mut exp: i64 = 1;
    for _ in 0..p - 1 {
        let (lam, ex) = kappa_step(tower, &res.omega, &res.kappa_coeff, &lambda, exp, e)?;
        lambda = lam;
        exp = ex;
    }
    Ok(exp == 1 && lambda.is_one())
}
