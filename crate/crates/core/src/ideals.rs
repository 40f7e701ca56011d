//! Prime splitting, valuations at primes of K via linear Hensel lifting, the
//! chi invariant, the ideal-theoretic non-p-th-power criterion, and residue
//! non-power witnesses.
//!
//! Everything ideal-theoretic happens at primes of K = Q(zeta_p) lying over
//! rational primes q = 1 (mod p): there Phi_p splits into linear factors mod
//! q, so a prime of K is carried as a residue root of Phi_p and valuations
//! reduce to q-adic valuations of lifted evaluations, with no residue field
//! extensions anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::config::Bounds;
use crate::cyclo::CycloElement;
use crate::maps::MapContext;
use crate::tower::TowerContext;
use crate::{Error, Result};

/// Which layer of the tower a splitting question refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldLayer {
    F,
    K,
    L,
}

/// Decomposition data of a rational prime in one layer: g primes, residue
/// degree f, ramification index e_ram (efg = layer degree).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingType {
    pub g: u64,
    pub f: u64,
    pub e_ram: u64,
}

impl SplittingType {
    pub fn splits_completely(&self) -> bool {
        self.f == 1 && self.e_ram == 1
    }
}

/// Splitting of q in the layer, computed group-theoretically from the
/// subgroup of (Z/m)* fixing the layer: inertia from units congruent to 1
/// mod the prime-to-q part, Frobenius from q itself.
pub fn splitting_type(tower: &TowerContext, q: u64, layer: FieldLayer) -> SplittingType {
    let m = tower.conductor();
    let h: &[u64] = match layer {
        FieldLayer::F => tower.h_f(),
        FieldLayer::K => tower.h_k(),
        FieldLayer::L => tower.h_l(),
    };
    let phi_m = crate::cyclo::unit_group(m).len() as u64;
    let degree = phi_m / h.len() as u64;
    if q % m != 0 && arith::gcd_u64(q % m, m) == 1 {
        // unramified: f = order of q in (Z/m)*/H
        let mut f = 1u64;
        let mut pow = q % m;
        while !contains(h, pow) {
            pow = (pow as u128 * q as u128 % m as u128) as u64;
            f += 1;
        }
        return SplittingType { g: degree / f, f, e_ram: 1 };
    }
    // q divides m: split m = q^a * m', inertia = units congruent to 1 mod m'
    let mut a = 0u32;
    let mut m_prime = m;
    while m_prime % q == 0 {
        m_prime /= q;
        a += 1;
    }
    let units = crate::cyclo::unit_group(m);
    let inertia: Vec<u64> = units.iter().copied().filter(|&k| k % m_prime == 1 % m_prime.max(1)).collect();
    let frob = if m_prime == 1 { 1 } else { arith::crt2(select_unit_mod_power(q, a), q.pow(a), q % m_prime, m_prime) };
    let ih = subgroup_closure(m, h.iter().copied().chain(inertia.iter().copied()));
    let e_ram = ih.len() as u64 / h.len() as u64;
    let d = subgroup_closure(m, ih.iter().copied().chain(std::iter::once(frob)));
    let ef = d.len() as u64 / h.len() as u64;
    let f = ef / e_ram;
    SplittingType { g: degree / ef, f, e_ram }
}

// Any unit residue works for the q-power component of the Frobenius lift.
fn select_unit_mod_power(_q: u64, _a: u32) -> u64 {
    1
}

fn contains(sorted: &[u64], x: u64) -> bool {
    sorted.binary_search(&x).is_ok()
}

fn subgroup_closure(m: u64, gens: impl Iterator<Item = u64>) -> Vec<u64> {
    let gens: Vec<u64> = gens.collect();
    let mut seen = vec![1u64];
    let mut frontier = vec![1u64];
    while let Some(x) = frontier.pop() {
        for &g in &gens {
            let y = (x as u128 * g as u128 % m as u128) as u64;
            if !seen.contains(&y) {
                seen.push(y);
                frontier.push(y);
            }
        }
    }
    seen.sort_unstable();
    seen
}

/// A prime of K = Q(zeta_p) above a split rational prime q, carried as a
/// residue root of Phi_p with a Hensel-lifted refinement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPrimeK {
    pub q: u64,
    pub root: u64,
    pub precision: u32,
    #[serde(with = "crate::serde_util::big_int")]
    pub lifted: BigInt,
}

const INITIAL_PRECISION: u32 = 8;

impl SplitPrimeK {
    fn new(p: u64, q: u64, root: u64) -> Self {
        let lifted = hensel_lift_root(p, q, root, INITIAL_PRECISION);
        SplitPrimeK { q, root, precision: INITIAL_PRECISION, lifted }
    }
}

/// Phi_p evaluated at x modulo n.
fn phi_p_mod(p: u64, x: &BigInt, n: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for _ in 0..p {
        acc = (acc * x + 1) % n;
    }
    acc.mod_floor(n)
}

/// Lift a simple root of Phi_p mod q to mod q^precision by Newton steps.
fn hensel_lift_root(p: u64, q: u64, root: u64, precision: u32) -> BigInt {
    let mut modulus = BigInt::from(q);
    let mut r = BigInt::from(root % q);
    let mut prec = 1u32;
    while prec < precision {
        let next_prec = (prec * 2).min(precision);
        let next_mod = BigInt::from(q).pow(next_prec);
        // f'(r) = sum i*r^(i-1), i = 1..p-1  (f = X^(p-1) + ... + X + 1)
        let mut deriv = BigInt::zero();
        let mut pow = BigInt::one();
        for i in 1..p {
            deriv = (deriv + BigInt::from(i) * &pow) % &next_mod;
            pow = pow * &r % &next_mod;
        }
        let inv = big_mod_inv(&deriv, &next_mod)
            .expect("derivative is a unit at a simple root");
        let val = phi_p_mod(p, &r, &next_mod);
        r = (&r - val * inv).mod_floor(&next_mod);
        modulus = next_mod;
        prec = next_prec;
    }
    let _ = modulus;
    r
}

fn big_mod_inv(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(n);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(n))
    } else {
        None
    }
}

/// The p-1 primes of K above q = 1 (mod p), ordered so that P_{j+1} = tau(P_j),
/// i.e. root_{j+1} = root_j^(e^{-1} mod p). The convention is validated by the
/// valuation-transport oracle and flipped automatically if the check fails.
pub fn primes_above_in_k(tower: &TowerContext, q: u64) -> Result<Vec<SplitPrimeK>> {
    let p = tower.p();
    if q % p != 1 {
        return Err(Error::InvalidParameter(format!("q = {q} is not 1 mod p = {p}")));
    }
    if !arith::is_prime_u64(q) {
        return Err(Error::InvalidParameter(format!("q = {q} is not prime")));
    }
    let g = arith::primitive_root(q)?;
    let t0 = arith::mod_pow_u64(g, (q - 1) / p, q);
    let mut roots: Vec<u64> = Vec::with_capacity((p - 1) as usize);
    let mut t = t0;
    for _ in 1..p {
        roots.push(t);
        t = (t as u128 * t0 as u128 % q as u128) as u64;
    }
    debug_assert_eq!(t, 1);
    let start = *roots.iter().min().expect("nonempty");
    let e_class = tower.e().rem_euclid(p as i64) as u64;
    let e_inv = arith::mod_inv_u64(e_class, p).expect("e is a unit mod p");
    let chain = |step: u64| -> Vec<SplitPrimeK> {
        let mut out = Vec::with_capacity((p - 1) as usize);
        let mut r = start;
        for _ in 1..p {
            out.push(SplitPrimeK::new(p, q, r));
            r = arith::mod_pow_u64(r, step, q);
        }
        out
    };
    let primes = chain(e_inv);
    if transport_convention_holds(tower, &primes)? {
        return Ok(primes);
    }
    let flipped = chain(e_class);
    if transport_convention_holds(tower, &flipped)? {
        return Ok(flipped);
    }
    Err(Error::Internal("valuation-transport oracle rejected both orderings".into()))
}

/// Oracle: v_{tau P}(tau x) = v_P(x). Checked on x = zeta_p - root_1, which
/// is divisible by exactly one of the primes.
fn transport_convention_holds(tower: &TowerContext, primes: &[SplitPrimeK]) -> Result<bool> {
    let p = tower.p();
    let bounds = Bounds::default();
    let x = CycloElement::zeta(p)?
        .checked_sub(&CycloElement::from_integer(p, primes[0].root as i64)?)?;
    let tau_k = CycloElement::zeta(p)?
        .pow(tower.e().rem_euclid(p as i64))?
        .checked_sub(&CycloElement::from_integer(p, primes[0].root as i64)?)?;
    let n = primes.len();
    for (j, prime) in primes.iter().enumerate() {
        let v = valuation_at(&x, prime, bounds.hensel_cap)?;
        let next = &primes[(j + 1) % n];
        let v_tau = valuation_at(&tau_k, next, bounds.hensel_cap)?;
        if v != v_tau {
            return Ok(false);
        }
    }
    Ok(true)
}

/// v_P(x) for a nonzero x in K, given as a conductor-p element: clear
/// denominators, evaluate the integral part at the lifted root, and read off
/// the q-adic valuation, raising precision until it is determined.
pub fn valuation_at(x: &CycloElement, prime: &SplitPrimeK, cap: u32) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroInput("valuation of zero"));
    }
    let q = prime.q;
    let (ints, den) = x.clear_denominators();
    let v_den = arith::big_valuation(&den, q).0 as i64;
    let mut precision = INITIAL_PRECISION.min(cap.max(1));
    loop {
        let modulus = BigInt::from(q).pow(precision);
        let root = if precision <= prime.precision {
            prime.lifted.mod_floor(&modulus)
        } else {
            hensel_lift_root(poly_p_of(x), q, prime.root, precision)
        };
        let mut acc = BigInt::zero();
        let mut pow = BigInt::one();
        for c in &ints {
            acc = (acc + c * &pow).mod_floor(&modulus);
            pow = pow * &root % &modulus;
        }
        if !acc.is_zero() {
            let (v, _) = arith::big_valuation(&acc, q);
            return Ok(v as i64 - v_den);
        }
        if precision >= cap {
            return Err(Error::PrecisionExceeded { q, cap });
        }
        precision = (precision * 2).min(cap);
    }
}

fn poly_p_of(x: &CycloElement) -> u64 {
    x.conductor()
}

/// chi of an exponent vector (beta_1, ..., beta_{p-1}) ordered along the
/// tau-cycle of primes: e^(p-2) beta_1 + e^(p-3) beta_{p-1} + ... + e beta_3
/// + beta_2, with the canonical positive representative of e mod p.
pub fn chi(p: u64, e: i64, betas: &[i64]) -> Result<BigInt> {
    if betas.len() != (p - 1) as usize {
        return Err(Error::InvalidParameter(format!(
            "expected {} exponents, got {}",
            p - 1,
            betas.len()
        )));
    }
    let e_pos = BigInt::from(e.rem_euclid(p as i64));
    let mut acc = BigInt::zero();
    for k in 0..(p - 1) as usize {
        let idx = if k == 0 { 0 } else { (p as usize - 1) - k };
        acc += e_pos.pow((p as usize - 2 - k) as u32) * BigInt::from(betas[idx]);
    }
    Ok(acc)
}

/// Per-prime outcome inside a criterion report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrimeEntry {
    pub q: u64,
    pub l: i64,
    pub splits_completely_in_l: bool,
    /// Valuations of gamma = Nr_{L/K}(x) along the ordered primes above q;
    /// present exactly when q splits completely in L.
    pub exponents: Option<Vec<i64>>,
    #[serde(with = "crate::serde_util::big_int_opt")]
    pub chi: Option<BigInt>,
    pub chi_divisible_by_p: Option<bool>,
}

impl PrimeEntry {
    pub fn satisfies_criterion(&self) -> bool {
        self.splits_completely_in_l && self.chi_divisible_by_p == Some(false)
    }
}

/// Outcome of the ideal-theoretic criterion: Phi(Nr_{L/K}(x)) generates a
/// non-p-th-power ideal of L exactly when some entry satisfies both
/// conditions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionReport {
    #[serde(with = "crate::serde_util::big_rational")]
    pub norm: BigRational,
    pub entries: Vec<PrimeEntry>,
    pub verdict: bool,
    pub witness_index: Option<usize>,
}

impl CriterionReport {
    pub fn witness_q(&self) -> Option<u64> {
        self.witness_index.map(|i| self.entries[i].q)
    }
}

/// The ideal criterion: factor Nr_{L/Q}(x) = ± prod q_i^(l_i); for each q_i test
/// (a) complete splitting in L and (b) p not dividing chi of the exponent
/// vector of gamma = Nr_{L/K}(x) above q_i.
pub fn ideal_criterion(
    tower: &TowerContext,
    x: &CycloElement,
    bounds: &Bounds,
) -> Result<CriterionReport> {
    if x.is_zero() {
        return Err(Error::ZeroInput("criterion argument"));
    }
    let maps = MapContext::new(tower);
    let norm = maps.norm_l_over_q(x)?;
    let mut prime_exponents: std::collections::BTreeMap<u64, i64> = Default::default();
    for (sign, by) in [(1i64, norm.numer()), (-1, norm.denom())] {
        if by.is_one() || *by == BigInt::from(-1) {
            continue;
        }
        for (prime, k) in arith::factor_big(by, bounds.factor_bound)? {
            let q = prime.to_u64().ok_or_else(|| {
                Error::FactorizationFailure(format!("prime factor {prime} exceeds u64"))
            })?;
            *prime_exponents.entry(q).or_insert(0) += sign * k as i64;
        }
    }
    let gamma = maps.norm_l_over_k(x)?;
    let gamma_k = tower.to_k(&gamma)?;
    let p = tower.p();
    let mut entries = Vec::new();
    let mut witness_index = None;
    for (&q, &l) in &prime_exponents {
        let split = splitting_type(tower, q, FieldLayer::L).splits_completely();
        let entry = if split {
            let primes = primes_above_in_k(tower, q)?;
            let mut exps = Vec::with_capacity(primes.len());
            for prime in &primes {
                exps.push(valuation_at(&gamma_k, prime, bounds.hensel_cap)?);
            }
            let total: i64 = exps.iter().sum();
            if total != l {
                return Err(Error::Internal(format!(
                    "exponent sum {total} above q={q} disagrees with l={l}"
                )));
            }
            let chi_val = chi(p, tower.e(), &exps)?;
            let divisible = (&chi_val % BigInt::from(p)).is_zero();
            PrimeEntry {
                q,
                l,
                splits_completely_in_l: true,
                exponents: Some(exps),
                chi: Some(chi_val),
                chi_divisible_by_p: Some(divisible),
            }
        } else {
            PrimeEntry {
                q,
                l,
                splits_completely_in_l: false,
                exponents: None,
                chi: None,
                chi_divisible_by_p: None,
            }
        };
        if witness_index.is_none() && entry.satisfies_criterion() {
            witness_index = Some(entries.len());
        }
        entries.push(entry);
    }
    let verdict = witness_index.is_some();
    Ok(CriterionReport { norm, entries, verdict, witness_index })
}

/// Outcome of the residue non-power scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessReport {
    pub witnessed_nonpower: bool,
    pub witness: Option<u64>,
    pub primes_tried: u32,
}

/// Scan auxiliary primes s = 1 (mod m): reduce b at a degree-one prime of
/// Q(zeta_m) over s and test b^((s-1)/p) = 1. A failure is a sound witness
/// that b is not a p-th power in L*; exhausting the scan is inconclusive,
/// never a proof of p-th-power-ness.
pub fn nonpower_witness(
    tower: &TowerContext,
    b: &CycloElement,
    bounds: &Bounds,
) -> Result<WitnessReport> {
    if b.is_zero() {
        return Err(Error::ZeroInput("witness argument"));
    }
    let m = tower.conductor();
    let p = tower.p();
    let (ints, den) = b.clear_denominators();
    let mut tried = 0u32;
    let mut candidates = arith::primes_in_class(1, m, m);
    // a bounded number of candidates can be skipped (divisors of the data);
    // the scan itself is capped by witness_max completed tests
    let mut safety = bounds.witness_max * 40 + 200;
    while tried < bounds.witness_max {
        let s = match candidates.next() {
            Some(s) => s,
            None => break,
        };
        safety -= 1;
        if safety == 0 {
            break;
        }
        let sb = BigInt::from(s);
        let den_mod = den.mod_floor(&sb).to_u64().expect("reduced");
        if den_mod == 0 {
            continue;
        }
        // root of Phi_m mod s: a primitive m-th root of unity
        let g = arith::primitive_root(s)?;
        let t = arith::mod_pow_u64(g, (s - 1) / m, s);
        let mut acc: u64 = 0;
        let mut pow: u64 = 1;
        for c in &ints {
            let c_mod = c.mod_floor(&sb).to_u64().expect("reduced");
            acc = ((acc as u128 + c_mod as u128 * pow as u128) % s as u128) as u64;
            pow = (pow as u128 * t as u128 % s as u128) as u64;
        }
        if acc == 0 {
            continue;
        }
        let w = (acc as u128 * arith::mod_inv_u64(den_mod, s).expect("unit") as u128
            % s as u128) as u64;
        tried += 1;
        if arith::mod_pow_u64(w, (s - 1) / p, s) != 1 {
            return Ok(WitnessReport { witnessed_nonpower: true, witness: Some(s), primes_tried: tried });
        }
    }
    Ok(WitnessReport { witnessed_nonpower: false, witness: None, primes_tried: tried })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{build_tower, TowerSpec};

    fn tower_r7() -> TowerContext {
        build_tower(&TowerSpec::gauss(3, 7)).unwrap()
    }

    #[test]
    fn splitting_fixtures() {
        let ctx = tower_r7();
        let st = splitting_type(&ctx, 13, FieldLayer::L);
        assert!(st.splits_completely());
        assert_eq!((st.g, st.f, st.e_ram), (6, 1, 1));
        // 2 is inert in L for the (3,7) tower
        let st = splitting_type(&ctx, 2, FieldLayer::L);
        assert_eq!((st.g, st.f, st.e_ram), (1, 6, 1));
        // ramified primes of the ambient layers
        let st = splitting_type(&ctx, 7, FieldLayer::F);
        assert_eq!(st.e_ram, 3);
        let st = splitting_type(&ctx, 3, FieldLayer::K);
        assert_eq!(st.e_ram, 2);
        assert!(!splitting_type(&ctx, 7, FieldLayer::L).splits_completely());

        let ctx = build_tower(&TowerSpec::gauss(3, 19)).unwrap();
        assert!(splitting_type(&ctx, 7, FieldLayer::L).splits_completely());

        let ctx = build_tower(&TowerSpec::gauss(5, 11)).unwrap();
        assert!(splitting_type(&ctx, 991, FieldLayer::L).splits_completely());

        let ctx = build_tower(&TowerSpec::zeta_p2(3)).unwrap();
        assert!(splitting_type(&ctx, 19, FieldLayer::L).splits_completely());
        // 3 is totally ramified in Q(zeta_9)
        let st = splitting_type(&ctx, 3, FieldLayer::L);
        assert_eq!((st.g, st.f, st.e_ram), (1, 1, 6));
    }

    #[test]
    fn ordered_primes_above() {
        let ctx = tower_r7();
        let primes = primes_above_in_k(&ctx, 13).unwrap();
        let roots: Vec<u64> = primes.iter().map(|p| p.root).collect();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0], 3); // smallest root of X^2 + X + 1 mod 13
        assert!(roots.contains(&9));
        let primes = primes_above_in_k(&ctx, 7).unwrap();
        let mut roots: Vec<u64> = primes.iter().map(|p| p.root).collect();
        roots.sort_unstable();
        assert_eq!(roots, vec![2, 4]);
        assert!(primes_above_in_k(&ctx, 5).is_err());
    }

    #[test]
    fn valuations_at_split_primes() {
        let ctx = tower_r7();
        let primes = primes_above_in_k(&ctx, 13).unwrap();
        // x = 3 - zeta_3 has valuation 1 at the root-3 prime, 0 at the other
        let x = CycloElement::from_integer(3, 3)
            .unwrap()
            .checked_sub(&CycloElement::zeta(3).unwrap())
            .unwrap();
        let by_root = |root: u64| primes.iter().find(|p| p.root == root).unwrap();
        assert_eq!(valuation_at(&x, by_root(3), 64).unwrap(), 1);
        assert_eq!(valuation_at(&x, by_root(9), 64).unwrap(), 0);
        // x = -7 zeta_3 has valuation 1 at both primes above 7
        let x = CycloElement::zeta(3)
            .unwrap()
            .scale(&BigRational::from(BigInt::from(-7)));
        for prime in primes_above_in_k(&ctx, 7).unwrap().iter() {
            assert_eq!(valuation_at(&x, prime, 64).unwrap(), 1);
        }
        // x = 1 has valuation 0 everywhere; zero input errors
        let one = CycloElement::one(3).unwrap();
        assert_eq!(valuation_at(&one, by_root(3), 64).unwrap(), 0);
        assert!(valuation_at(&CycloElement::zero(3).unwrap(), by_root(3), 64).is_err());
        // negative valuations through denominators
        let inv13 = CycloElement::from_rational(
            3,
            BigRational::new(BigInt::one(), BigInt::from(13)),
        )
        .unwrap();
        assert_eq!(valuation_at(&inv13, by_root(3), 64).unwrap(), -1);
        assert_eq!(valuation_at(&inv13, by_root(9), 64).unwrap(), -1);
    }

    #[test]
    fn chi_values() {
        assert_eq!(chi(3, 2, &[1, 1]).unwrap(), BigInt::from(3));
        assert_eq!(chi(3, 2, &[1, 0]).unwrap(), BigInt::from(2));
        // all entries multiples of p force divisibility
        let v = chi(3, 2, &[3, 0]).unwrap();
        assert!((v % BigInt::from(3)).is_zero());
        // e = -1 uses the canonical positive representative 2
        assert_eq!(chi(3, -1, &[1, 0]).unwrap(), BigInt::from(2));
        assert!(chi(3, 2, &[1, 0, 0]).is_err());
    }

    #[test]
    fn criterion_on_the_r7_element() {
        let ctx = tower_r7();
        let x = ctx.delta().checked_add(&ctx.zeta_p()).unwrap();
        let report = ideal_criterion(&ctx, &x, &Bounds::default()).unwrap();
        assert!(report.verdict);
        assert_eq!(report.witness_q(), Some(13));
        assert_eq!(report.norm, BigRational::from(BigInt::from(13)));
        let entry = &report.entries[report.witness_index.unwrap()];
        assert_eq!(entry.l, 1);
        let exps = entry.exponents.as_ref().unwrap();
        assert_eq!(exps.iter().sum::<i64>(), 1);
        assert_eq!(entry.chi_divisible_by_p, Some(false));
    }

    #[test]
    fn criterion_fails_on_the_r19_element_with_unit_exponents() {
        let ctx = build_tower(&TowerSpec::gauss(3, 19)).unwrap();
        let x = ctx
            .delta()
            .checked_add(&ctx.zeta_p())
            .unwrap()
            .checked_add(&CycloElement::one(57).unwrap())
            .unwrap();
        let report = ideal_criterion(&ctx, &x, &Bounds::default()).unwrap();
        assert!(!report.verdict);
        assert_eq!(report.entries.len(), 1);
        let entry = &report.entries[0];
        assert_eq!(entry.q, 7);
        assert_eq!(entry.l, 2);
        assert!(entry.splits_completely_in_l);
        assert_eq!(entry.exponents.as_ref().unwrap(), &vec![1, 1]);
        assert_eq!(entry.chi_divisible_by_p, Some(true));
    }

    #[test]
    fn criterion_trivial_and_inert_cofactor_cases() {
        let ctx = tower_r7();
        // unit norm: no primes, verdict false
        let report =
            ideal_criterion(&ctx, &CycloElement::one(21).unwrap(), &Bounds::default())
                .unwrap();
        assert!(!report.verdict);
        assert!(report.entries.is_empty());
        // multiplying by an inert prime leaves the verdict unchanged
        let x = ctx.delta().checked_add(&ctx.zeta_p()).unwrap();
        let x2 = x.scale(&BigRational::from(BigInt::from(2)));
        let report = ideal_criterion(&ctx, &x2, &Bounds::default()).unwrap();
        assert!(report.verdict);
        assert_eq!(report.witness_q(), Some(13));
        let two = report.entries.iter().find(|e| e.q == 2).unwrap();
        assert!(!two.splits_completely_in_l);
        assert_eq!(two.l, 6);
    }

    #[test]
    fn witness_scan_behaviour() {
        let ctx = tower_r7();
        let bounds = Bounds::default();
        // zeta_3 is not a cube in L (it would force zeta_9 into L)
        let z3 = crate::cyclo::coerce(&CycloElement::zeta(3).unwrap(), 21).unwrap();
        let w = nonpower_witness(&ctx, &z3, &bounds).unwrap();
        assert!(w.witnessed_nonpower);
        assert!(w.witness.is_some());
        // rational cubes pass every residue test
        let eight = CycloElement::from_integer(21, 8).unwrap();
        let w = nonpower_witness(&ctx, &eight, &bounds).unwrap();
        assert!(!w.witnessed_nonpower);
        assert_eq!(w.primes_tried, bounds.witness_max);
        // a cube of a generic element of L passes as well
        let cube = ctx
            .delta()
            .checked_add(&ctx.zeta_p())
            .unwrap()
            .pow(3)
            .unwrap();
        let w = nonpower_witness(&ctx, &cube, &bounds).unwrap();
        assert!(!w.witnessed_nonpower);
    }

    #[test]
    fn norm_compatibility_of_valuations() {
        // sum of v_P(gamma) over the primes above a split q equals
        // v_q(Nr_{K/Q}(gamma)) (residue degrees are 1)
        let ctx = tower_r7();
        let maps = crate::maps::MapContext::new(&ctx);
        let mut rng = crate::modpoly::SplitMix64::new(0x1dea);
        for i in 0..50 {
            let coeffs: Vec<BigRational> =
                (0..2).map(|_| BigRational::from(BigInt::from((rng.next() % 41) as i64 - 20))).collect();
            let gamma = CycloElement::new(3, coeffs).unwrap();
            if gamma.is_zero() {
                continue;
            }
            let q = [7u64, 13][i % 2];
            let primes = primes_above_in_k(&ctx, q).unwrap();
            let total: i64 =
                primes.iter().map(|pr| valuation_at(&gamma, pr, 64).unwrap()).sum();
            let nrm = maps.norm_k_over_q(&crate::cyclo::coerce(&gamma, 21).unwrap()).unwrap();
            let expect = crate::arith::rational_valuation(nrm.numer(), nrm.denom(), q);
            assert_eq!(total, expect, "norm compatibility failed at q = {q}");
        }
    }

    #[test]
    fn transport_oracle_validates_ordering() {
        // the ordering convention must satisfy v_{tau P}(tau x) = v_P(x) for
        // a random-ish K element with asymmetric valuations
        let ctx = tower_r7();
        let primes = primes_above_in_k(&ctx, 13).unwrap();
        let x = CycloElement::zeta(3)
            .unwrap()
            .checked_sub(&CycloElement::from_integer(3, primes[0].root as i64).unwrap())
            .unwrap();
        let tau_p = crate::cyclo::Automorphism::from_signed(3, ctx.e()).unwrap();
        let tx = tau_p.apply(&x).unwrap();
        let n = primes.len();
        for j in 0..n {
            let v = valuation_at(&x, &primes[j], 64).unwrap();
            let vt = valuation_at(&tx, &primes[(j + 1) % n], 64).unwrap();
            assert_eq!(v, vt);
        }
    }
}
