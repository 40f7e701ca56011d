//! Bounded-height search for elements x in O_L passing the non-p-th-power
//! criterion: the constructive face of "there are infinitely many suitable
//! elements". Deterministic: lexicographic coefficient enumeration at
//! increasing height, identical output for identical specs.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::config::Bounds;
use crate::cyclo::CycloElement;
use crate::ideals::{self, CriterionReport};
use crate::maps::GroupVariant;
use crate::tower::TowerContext;
use crate::{Error, Result};

/// Which integral monomials the search combines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportKind {
    /// delta^a * zeta_p^c for a < p, c < p-1 (the L basis; gauss default).
    DeltaZeta,
    /// Powers of the ambient root of unity (integral basis for zeta_p2
    /// towers, where it is the default).
    PowerBasis,
}

/// Search specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchSpec {
    /// Height bound: maximum absolute coefficient.
    pub height: u32,
    #[serde(default)]
    pub support: Option<SupportKind>,
    /// Record-keeping only; every hit satisfies both group variants.
    #[serde(default)]
    pub variant: Option<GroupVariant>,
    pub max_candidates: u64,
    pub max_results: u64,
    /// Restrict to Nr_{L/Q}(x) = ±p^l1 q^l2 with q split completely, p not
    /// dividing l2, and a single prime of K above q carrying the exponent;
    /// only meaningful on zeta_p2 towers.
    #[serde(default)]
    pub minimal_ramification: bool,
}

impl SearchSpec {
    pub fn new(height: u32) -> Self {
        SearchSpec {
            height,
            support: None,
            variant: None,
            max_candidates: 200_000,
            max_results: 16,
            minimal_ramification: false,
        }
    }
}

/// One search hit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchHit {
    pub x: CycloElement,
    /// Coefficients on the support monomials, in enumeration order.
    pub coefficients: Vec<i64>,
    pub report: CriterionReport,
}

/// Monomial list for the configured support.
pub fn support_monomials(tower: &TowerContext, kind: SupportKind) -> Result<Vec<CycloElement>> {
    let p = tower.p();
    match kind {
        SupportKind::DeltaZeta => {
            let mut out = Vec::with_capacity((p * (p - 1)) as usize);
            let zeta_p = tower.zeta_p();
            for a in 0..p {
                let da = tower.delta().pow(a as i64)?;
                for c in 0..p - 1 {
                    out.push(da.checked_mul(&zeta_p.pow(c as i64)?)?);
                }
            }
            Ok(out)
        }
        SupportKind::PowerBasis => {
            let m = tower.conductor();
            let phi = crate::cyclo::unit_group(m).len();
            let mut out = Vec::with_capacity(phi);
            for k in 0..phi as u64 {
                out.push(CycloElement::root_of_unity(m, k)?);
            }
            Ok(out)
        }
    }
}

fn default_support(tower: &TowerContext) -> SupportKind {
    if tower.is_zeta_p2() {
        SupportKind::PowerBasis
    } else {
        SupportKind::DeltaZeta
    }
}

/// Run the search: enumerate coefficient vectors over the support monomials
/// by increasing height, lexicographically within each height shell, and
/// emit the elements whose criterion verdict is positive (with the norm
/// shape restriction in minimal-ramification mode).
pub fn search(tower: &TowerContext, spec: &SearchSpec, bounds: &Bounds) -> Result<Vec<SearchHit>> {
    if spec.height == 0 {
        return Err(Error::InvalidParameter("height bound must be at least 1".into()));
    }
    if spec.minimal_ramification && !tower.is_zeta_p2() {
        return Err(Error::InvalidParameter(
            "minimal-ramification mode requires a zeta_p2 tower".into(),
        ));
    }
    if spec.max_results == 0 {
        return Ok(vec![]);
    }
    let kind = spec.support.unwrap_or_else(|| default_support(tower));
    let monomials = support_monomials(tower, kind)?;
    let n = monomials.len();
    let mut hits = Vec::new();
    let mut candidates = 0u64;
    'outer: for h in 1..=spec.height as i64 {
        let mut coeffs = vec![-h; n];
        loop {
            // vectors of max-norm < h were already enumerated at lower heights
            if coeffs.iter().any(|c| c.abs() == h) {
                candidates += 1;
                if candidates > spec.max_candidates {
                    break 'outer;
                }
                if let Some(hit) = try_candidate(tower, &monomials, &coeffs, spec, bounds)? {
                    hits.push(hit);
                    if hits.len() as u64 >= spec.max_results {
                        break 'outer;
                    }
                }
            }
            if !advance(&mut coeffs, h) {
                break;
            }
        }
    }
    Ok(hits)
}

/// Lexicographic odometer over [-h, h]^n; false when exhausted.
fn advance(coeffs: &mut [i64], h: i64) -> bool {
    for idx in (0..coeffs.len()).rev() {
        if coeffs[idx] < h {
            coeffs[idx] += 1;
            for c in coeffs.iter_mut().skip(idx + 1) {
                *c = -h;
            }
            return true;
        }
    }
    false
}

fn try_candidate(
    tower: &TowerContext,
    monomials: &[CycloElement],
    coeffs: &[i64],
    spec: &SearchSpec,
    bounds: &Bounds,
) -> Result<Option<SearchHit>> {
    let mut x = CycloElement::zero(tower.conductor())?;
    for (c, mono) in coeffs.iter().zip(monomials) {
        if *c != 0 {
            x = x.checked_add(&mono.scale(&BigRational::from(BigInt::from(*c))))?;
        }
    }
    if x.is_zero() {
        return Ok(None);
    }
    let report = ideals::ideal_criterion(tower, &x, bounds)?;
    if !report.verdict {
        return Ok(None);
    }
    if spec.minimal_ramification && !minimal_ram_shape(tower, &report) {
        return Ok(None);
    }
    Ok(Some(SearchHit { x, coefficients: coeffs.to_vec(), report }))
}

/// The norm shape forcing exactly two ramified primes: ± p^l1 q^l2 with exactly
/// one other prime q, q split completely in L, p not dividing l2, and the
/// exponent vector above q concentrated on a single prime of K.
fn minimal_ram_shape(tower: &TowerContext, report: &CriterionReport) -> bool {
    let p = tower.p();
    let mut saw_q = false;
    for entry in &report.entries {
        if entry.q == p {
            if entry.l < 0 {
                return false;
            }
            continue;
        }
        if saw_q {
            return false;
        }
        saw_q = true;
        if entry.l <= 0 || entry.l % p as i64 == 0 {
            return false;
        }
        if !entry.splits_completely_in_l {
            return false;
        }
        let Some(exps) = &entry.exponents else { return false };
        if exps.iter().filter(|&&b| b != 0).count() != 1 {
            return false;
        }
    }
    saw_q
}

/// Whether a criterion report matches the two-ramified-primes norm shape.
pub fn norm_is_p_q_shape(tower: &TowerContext, report: &CriterionReport) -> bool {
    minimal_ram_shape(tower, report)
}
