//! The multiplicative Phi-map, relative norms, the beta element, the two
//! b-variants, Lagrange resolvents, and the group-variant classification.
//!
//! Phi(x) = prod_{j=0}^{p-2} tau^j(x)^(e^(p-2-j)) with signed integer
//! exponents taken literally from the chosen representative e; both of the
//! conventions used in the worked constructions (e = 2 and e = -1 for p = 3)
//! are reproducible.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::config::Bounds;
use crate::cyclo::CycloElement;
use crate::ideals::{self, CriterionReport, WitnessReport};
use crate::tower::TowerContext;
use crate::{Error, Result};

/// Which non-abelian group of order p^3 a construction targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupVariant {
    Heisenberg,
    Semidirect,
}

impl GroupVariant {
    pub fn name(&self) -> &'static str {
        match self {
            GroupVariant::Heisenberg => "heisenberg",
            GroupVariant::Semidirect => "semidirect",
        }
    }
}

/// Tower plus the exponent ladder (e^(p-2), ..., e, 1) of the Phi-map.
pub struct MapContext<'a> {
    tower: &'a TowerContext,
    ladder: Vec<BigInt>,
}

impl<'a> MapContext<'a> {
    pub fn new(tower: &'a TowerContext) -> Self {
        let p = tower.p();
        let e = BigInt::from(tower.e());
        let mut ladder = Vec::with_capacity((p - 1) as usize);
        for j in 0..p - 1 {
            ladder.push(e.pow((p - 2 - j) as u32));
        }
        MapContext { tower, ladder }
    }

    pub fn tower(&self) -> &TowerContext {
        self.tower
    }

    pub fn ladder(&self) -> &[BigInt] {
        &self.ladder
    }

    fn require_in_l(&self, x: &CycloElement, what: &'static str) -> Result<()> {
        if x.is_zero() {
            return Err(Error::ZeroInput(what));
        }
        if !self.tower.in_l(x) {
            return Err(Error::InvalidParameter(format!("{what} does not lie in L")));
        }
        Ok(())
    }

    /// Phi_{L/F}(x) = prod_j tau^j(x)^(e^(p-2-j)).
    pub fn phi(&self, x: &CycloElement) -> Result<CycloElement> {
        self.require_in_l(x, "phi argument")?;
        let mut acc = CycloElement::one(self.tower.conductor())?;
        for (j, exp) in self.ladder.iter().enumerate() {
            let img = self.tower.tau().power(j as i64).apply(x)?;
            acc = acc.checked_mul(&img.pow_big(exp)?)?;
        }
        Ok(acc)
    }

    /// Nr_{L/K}(x): product over the sigma-orbit. The result stays in the
    /// ambient representation and is checked to lie in K.
    pub fn norm_l_over_k(&self, x: &CycloElement) -> Result<CycloElement> {
        self.require_in_l(x, "norm argument")?;
        let mut acc = CycloElement::one(self.tower.conductor())?;
        for i in 0..self.tower.p() {
            acc = acc.checked_mul(&self.tower.sigma().power(i as i64).apply(x)?)?;
        }
        if !self.tower.in_k(&acc) {
            return Err(Error::Internal("relative norm left K".into()));
        }
        Ok(acc)
    }

    /// Nr_{K/Q}(x) for x in K (ambient representation), exact rational.
    pub fn norm_k_over_q(&self, x: &CycloElement) -> Result<BigRational> {
        if x.is_zero() {
            return Err(Error::ZeroInput("norm argument"));
        }
        if !self.tower.in_k(x) {
            return Err(Error::InvalidParameter("norm argument does not lie in K".into()));
        }
        let mut acc = CycloElement::one(self.tower.conductor())?;
        for j in 0..self.tower.p() - 1 {
            acc = acc.checked_mul(&self.tower.tau().power(j as i64).apply(x)?)?;
        }
        acc.to_rational()
            .ok_or_else(|| Error::Internal("absolute norm of a K-element is irrational".into()))
    }

    /// Nr_{L/Q} = Nr_{K/Q} ∘ Nr_{L/K}.
    pub fn norm_l_over_q(&self, x: &CycloElement) -> Result<BigRational> {
        self.norm_k_over_q(&self.norm_l_over_k(x)?)
    }

    /// beta = x^(p-1) sigma(x)^(p-2) ... sigma^(p-2)(x).
    pub fn beta(&self, x: &CycloElement) -> Result<CycloElement> {
        self.require_in_l(x, "beta argument")?;
        let p = self.tower.p();
        let mut acc = CycloElement::one(self.tower.conductor())?;
        for i in 0..p - 1 {
            let img = self.tower.sigma().power(i as i64).apply(x)?;
            acc = acc.checked_mul(&img.pow((p - 1 - i) as i64)?)?;
        }
        Ok(acc)
    }

    /// b(x): Phi(Nr_{L/K}(x)) for the Heisenberg variant,
    /// Phi(zeta_p * Nr_{L/K}(x)) for the semidirect variant. Lies in K.
    pub fn b_value(&self, x: &CycloElement, variant: GroupVariant) -> Result<CycloElement> {
        let nrm = self.norm_l_over_k(x)?;
        let arg = match variant {
            GroupVariant::Heisenberg => nrm,
            GroupVariant::Semidirect => nrm.checked_mul(&self.tower.zeta_p())?,
        };
        let b = self.phi(&arg)?;
        if !self.tower.in_k(&b) {
            return Err(Error::Internal("b-value left K".into()));
        }
        Ok(b)
    }

    /// Lagrange resolvent: theta = sum_i zeta_p^(-i) sigma^i(y), an
    /// eigenvector with sigma(theta) = zeta_p * theta. Falls back over a
    /// deterministic list of inputs when the resolvent of `y` vanishes.
    pub fn lagrange_resolvent(&self, y: &CycloElement) -> Result<CycloElement> {
        self.require_in_l(y, "resolvent seed")?;
        if let Some(theta) = self.resolvent_sum(y)? {
            return Ok(theta);
        }
        for fallback in self.resolvent_fallbacks()? {
            if let Some(theta) = self.resolvent_sum(&fallback)? {
                return Ok(theta);
            }
        }
        Err(Error::Degenerate("all Lagrange resolvent fallbacks vanished".into()))
    }

    fn resolvent_sum(&self, y: &CycloElement) -> Result<Option<CycloElement>> {
        let zeta_p = self.tower.zeta_p();
        let mut acc = CycloElement::zero(self.tower.conductor())?;
        for i in 0..self.tower.p() as i64 {
            let term = zeta_p.pow(-i)?.checked_mul(&self.tower.sigma().power(i).apply(y)?)?;
            acc = acc.checked_add(&term)?;
        }
        if acc.is_zero() {
            return Ok(None);
        }
        debug_assert_eq!(
            self.tower.sigma().apply(&acc)?,
            zeta_p.checked_mul(&acc)?,
            "resolvent is not a zeta_p eigenvector"
        );
        Ok(Some(acc))
    }

    /// Powers of delta, then powers of delta shifted by small zeta_p powers.
    fn resolvent_fallbacks(&self) -> Result<Vec<CycloElement>> {
        let p = self.tower.p();
        let delta = self.tower.delta();
        let zeta_p = self.tower.zeta_p();
        let mut out = Vec::new();
        for a in 1..p {
            out.push(delta.pow(a as i64)?);
        }
        for c in 1..p - 1 {
            for a in 1..p {
                out.push(delta.pow(a as i64)?.checked_add(&zeta_p.pow(c as i64)?)?);
            }
        }
        Ok(out)
    }

    /// Classify which p^3-constructions x supports: first the ideal-theoretic
    /// criterion (which certifies both variants at once), then residue
    /// witnesses per variant when the criterion is inconclusive.
    pub fn classify(&self, x: &CycloElement, bounds: &Bounds) -> Result<Classification> {
        self.require_in_l(x, "classify argument")?;
        let report = ideals::ideal_criterion(self.tower, x, bounds)?;
        if report.verdict {
            let q = report.witness_q().expect("verdict implies a witness prime");
            let status =
                VariantStatus { nonpower: true, evidence: Evidence::IdealCriterion { q } };
            return Ok(Classification {
                criterion: report,
                heisenberg: status.clone(),
                semidirect: status,
            });
        }
        let heisenberg = self.witness_status(x, GroupVariant::Heisenberg, bounds)?;
        let semidirect = self.witness_status(x, GroupVariant::Semidirect, bounds)?;
        Ok(Classification { criterion: report, heisenberg, semidirect })
    }

    fn witness_status(
        &self,
        x: &CycloElement,
        variant: GroupVariant,
        bounds: &Bounds,
    ) -> Result<VariantStatus> {
        let b = self.b_value(x, variant)?;
        if b.is_one() {
            // b = 1 is trivially a p-th power; nothing to witness
            return Ok(VariantStatus { nonpower: false, evidence: Evidence::None });
        }
        let w: WitnessReport = ideals::nonpower_witness(self.tower, &b, bounds)?;
        if w.witnessed_nonpower {
            Ok(VariantStatus {
                nonpower: true,
                evidence: Evidence::ResidueWitness { s: w.witness.expect("witness prime") },
            })
        } else {
            Ok(VariantStatus { nonpower: false, evidence: Evidence::None })
        }
    }
}

/// How a non-p-th-power claim was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Certified by the ideal-theoretic criterion at the given prime.
    IdealCriterion { q: u64 },
    /// Witnessed by a residue test at the auxiliary prime s.
    ResidueWitness { s: u64 },
    /// Nothing found; not a proof that the value is a p-th power.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantStatus {
    pub nonpower: bool,
    pub evidence: Evidence,
}

/// Outcome of `classify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Classification {
    pub criterion: CriterionReport,
    pub heisenberg: VariantStatus,
    pub semidirect: VariantStatus,
}

impl Classification {
    pub fn induces_heisenberg(&self) -> bool {
        self.heisenberg.nonpower
    }

    pub fn induces_semidirect(&self) -> bool {
        self.semidirect.nonpower
    }

    pub fn supports(&self, variant: GroupVariant) -> bool {
        match variant {
            GroupVariant::Heisenberg => self.induces_heisenberg(),
            GroupVariant::Semidirect => self.induces_semidirect(),
        }
    }

    pub fn status(&self, variant: GroupVariant) -> &VariantStatus {
        match variant {
            GroupVariant::Heisenberg => &self.heisenberg,
            GroupVariant::Semidirect => &self.semidirect,
        }
    }
}

/// (1 - e^(p-1))/p as an exact integer; e^(p-1) = 1 mod p by Fermat, so the
/// quotient is integral for any primitive-root representative e.
pub fn kappa_exponent(p: u64, e: i64) -> BigInt {
    let num = BigInt::one() - BigInt::from(e).pow((p - 1) as u32);
    let (q, r) = num_integer::Integer::div_rem(&num, &BigInt::from(p));
    debug_assert!(num_traits::Zero::is_zero(&r));
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{build_tower, TowerSpec};
    use num_traits::Zero;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn phi_on_k_elements() {
        let ctx = build_tower(&TowerSpec::gauss(3, 7).with_e(2)).unwrap();
        let maps = MapContext::new(&ctx);
        // 21*zeta_3 -> 21^3*zeta_3 under e = 2
        let z3 = ctx.zeta_p();
        let x = z3.scale(&q(21));
        assert_eq!(maps.phi(&x).unwrap(), z3.scale(&q(9261)));
        // homomorphism fixes 1
        assert!(maps.phi(&CycloElement::one(21).unwrap()).unwrap().is_one());
        // phi(zeta_p) = zeta_p^(-e^(p-2)) = zeta_3^(-2) = zeta_3
        assert_eq!(maps.phi(&z3).unwrap(), z3);
        // zero input rejected
        assert!(maps.phi(&CycloElement::zero(21).unwrap()).is_err());
        // ambient zeta_21 is not in L
        assert!(maps.phi(&CycloElement::zeta(21).unwrap()).is_err());
    }

    #[test]
    fn phi_under_e_minus_one() {
        // e = -1 for p = 3 gives phi(x) = tau(x)/x
        let ctx = build_tower(&TowerSpec::gauss(3, 7).with_e(-1)).unwrap();
        let maps = MapContext::new(&ctx);
        let x = ctx.delta().checked_add(&ctx.zeta_p()).unwrap();
        let expect = ctx.tau().apply(&x).unwrap().checked_div(&x).unwrap();
        assert_eq!(maps.phi(&x).unwrap(), expect);
    }

    #[test]
    fn norms_match_worked_values() {
        let ctx = build_tower(&TowerSpec::gauss(3, 7)).unwrap();
        let maps = MapContext::new(&ctx);
        let x = ctx.delta().checked_add(&ctx.zeta_p()).unwrap();
        let gamma = maps.norm_l_over_k(&x).unwrap();
        let expect =
            CycloElement::from_integer(21, 3).unwrap().checked_sub(&ctx.zeta_p()).unwrap();
        assert_eq!(gamma, expect);
        assert_eq!(maps.norm_k_over_q(&gamma).unwrap(), q(13));
        assert_eq!(maps.norm_l_over_q(&x).unwrap(), q(13));

        let ctx = build_tower(&TowerSpec::gauss(3, 19)).unwrap();
        let maps = MapContext::new(&ctx);
        let x = ctx
            .delta()
            .checked_add(&ctx.zeta_p())
            .unwrap()
            .checked_add(&CycloElement::one(57).unwrap())
            .unwrap();
        let gamma = maps.norm_l_over_k(&x).unwrap();
        assert_eq!(gamma, ctx.zeta_p().scale(&q(-7)));
        assert_eq!(maps.norm_k_over_q(&gamma).unwrap(), q(49));

        // norm of 1 at every level
        let one = CycloElement::one(57).unwrap();
        assert!(maps.norm_l_over_k(&one).unwrap().is_one());
        assert_eq!(maps.norm_k_over_q(&one).unwrap(), q(1));
        assert_eq!(maps.norm_l_over_q(&one).unwrap(), q(1));
    }

    #[test]
    fn beta_shapes() {
        let ctx = build_tower(&TowerSpec::gauss(3, 7)).unwrap();
        let maps = MapContext::new(&ctx);
        let x = ctx.delta().checked_add(&ctx.zeta_p()).unwrap();
        // p = 3: beta = x^2 * sigma(x)
        let expect = x.pow(2).unwrap().checked_mul(&ctx.sigma().apply(&x).unwrap()).unwrap();
        assert_eq!(maps.beta(&x).unwrap(), expect);
        assert!(maps.beta(&CycloElement::one(21).unwrap()).unwrap().is_one());
        // zeta_3 is fixed by sigma: beta = zeta_3^3 = 1
        assert!(maps.beta(&ctx.zeta_p()).unwrap().is_one());
    }

    #[test]
    fn b_variants_differ_by_phi_of_zeta() {
        let ctx = build_tower(&TowerSpec::gauss(3, 7)).unwrap();
        let maps = MapContext::new(&ctx);
        let x = ctx.delta().checked_add(&ctx.zeta_p()).unwrap();
        let bh = maps.b_value(&x, GroupVariant::Heisenberg).unwrap();
        let bs = maps.b_value(&x, GroupVariant::Semidirect).unwrap();
        let factor = maps.phi(&ctx.zeta_p()).unwrap();
        assert_eq!(bs, bh.checked_mul(&factor).unwrap());
        // x = 1 gives b = 1 for the Heisenberg variant
        assert!(maps
            .b_value(&CycloElement::one(21).unwrap(), GroupVariant::Heisenberg)
            .unwrap()
            .is_one());
    }

    #[test]
    fn resolvent_reproduces_the_worked_theta() {
        // theta = 3 delta^2 + 3 delta + 3 zeta_3 delta + zeta_3 - 4 is the
        // resolvent of 2 delta^2 + delta in the (3,7) tower
        let ctx = build_tower(&TowerSpec::gauss(3, 7)).unwrap();
        let maps = MapContext::new(&ctx);
        let d = ctx.delta().clone();
        let z3 = ctx.zeta_p();
        let seed = d.pow(2).unwrap().scale(&q(2)).checked_add(&d).unwrap();
        let theta = maps.lagrange_resolvent(&seed).unwrap();
        let expect = d
            .pow(2)
            .unwrap()
            .scale(&q(3))
            .checked_add(&d.scale(&q(3)))
            .unwrap()
            .checked_add(&z3.checked_mul(&d).unwrap().scale(&q(3)))
            .unwrap()
            .checked_add(&z3)
            .unwrap()
            .checked_sub(&CycloElement::from_integer(21, 4).unwrap())
            .unwrap();
        assert_eq!(theta, expect);
        // eigenvector property and theta^3 in K
        let lhs = ctx.sigma().apply(&theta).unwrap();
        assert_eq!(lhs, z3.checked_mul(&theta).unwrap());
        assert!(ctx.in_k(&theta.pow(3).unwrap()));
    }

    #[test]
    fn resolvent_falls_back_when_seed_is_fixed() {
        let ctx = build_tower(&TowerSpec::gauss(3, 7)).unwrap();
        let maps = MapContext::new(&ctx);
        // zeta_3 is sigma-fixed, so its resolvent vanishes and the fallback
        // kicks in
        let theta = maps.lagrange_resolvent(&ctx.zeta_p()).unwrap();
        assert!(!theta.is_zero());
        let lhs = ctx.sigma().apply(&theta).unwrap();
        assert_eq!(lhs, ctx.zeta_p().checked_mul(&theta).unwrap());
    }

    #[test]
    fn kappa_exponent_values() {
        assert_eq!(kappa_exponent(3, -1), BigInt::zero());
        assert_eq!(kappa_exponent(3, 2), BigInt::from(-1));
        assert_eq!(kappa_exponent(5, 2), BigInt::from(-3));
    }

    #[test]
    fn classification_cases() {
        use crate::config::Bounds;
        let bounds = Bounds::default();
        // zeta_9 tower: zeta_3 is a cube there, so x = 1 supports neither
        // variant, and the two flags agree on every input
        let ctx = crate::tower::build_tower(
            &crate::tower::TowerSpec::zeta_p2(3).with_e(2),
        )
        .unwrap();
        let maps = MapContext::new(&ctx);
        let one = CycloElement::one(9).unwrap();
        let class = maps.classify(&one, &bounds).unwrap();
        assert!(!class.induces_heisenberg());
        assert!(!class.induces_semidirect());
        let x = CycloElement::zeta(9)
            .unwrap()
            .checked_add(&CycloElement::from_integer(9, 2).unwrap())
            .unwrap();
        let class = maps.classify(&x, &bounds).unwrap();
        assert!(class.induces_heisenberg());
        assert!(class.induces_semidirect());
        assert!(matches!(class.heisenberg.evidence, Evidence::IdealCriterion { q: 19 }));
        // on a gauss tower zeta_3 is not a cube in L: x = 1 cannot give the
        // Heisenberg variant but the semidirect b-value is witnessed non-cube
        let ctx = crate::tower::build_tower(&crate::tower::TowerSpec::gauss(3, 7)).unwrap();
        let maps = MapContext::new(&ctx);
        let one = CycloElement::one(21).unwrap();
        let class = maps.classify(&one, &bounds).unwrap();
        assert!(!class.induces_heisenberg());
        assert!(class.induces_semidirect());
        assert!(matches!(class.semidirect.evidence, Evidence::ResidueWitness { .. }));
        // supports() mirrors the flags
        assert!(!class.supports(GroupVariant::Heisenberg));
        assert!(class.supports(GroupVariant::Semidirect));
    }
}
