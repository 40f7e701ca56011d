//! Acceptance suite: one test per acceptance criterion, each printing a
//! single PASS/FAIL line (run with `cargo test --test acceptance --
//! --nocapture` to see them). Tolerances and runtime budgets are pinned in
//! code; nothing is deferred to later calibration.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use p3ext_core::config::Bounds;
use p3ext_core::construct::build_construction;
use p3ext_core::cyclo::CycloElement;
use p3ext_core::expr::parse_element;
use p3ext_core::ideals;
use p3ext_core::maps::{GroupVariant, MapContext};
use p3ext_core::minpoly::{galois_stats, irr_alpha_matrix, irr_shortcut_p3};
use p3ext_core::modpoly::SplitMix64;
use p3ext_core::reproduce::{reproduce, Fixture};
use p3ext_core::search::{search, SearchSpec};
use p3ext_core::tower::{build_tower, TowerContext, TowerSpec};

fn q(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn budget(criterion: &str, start: Instant, limit_secs: u64) {
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < limit_secs,
        "{criterion} exceeded its {limit_secs}s budget: {elapsed:?}"
    );
}

/// Random nonzero element of L with small integer coordinates.
fn random_l_element(tower: &TowerContext, rng: &mut SplitMix64, span: u64) -> CycloElement {
    let basis = tower.l_basis().unwrap();
    loop {
        let mut acc = CycloElement::zero(tower.conductor()).unwrap();
        let mut nonzero = false;
        for b in basis {
            let c = (rng.next() % (2 * span + 1)) as i64 - span as i64;
            if c != 0 {
                nonzero = true;
                acc = acc.checked_add(&b.scale(&q(c))).unwrap();
            }
        }
        if nonzero {
            return acc;
        }
    }
}

/// Random nonzero element of K as a conductor-p vector.
fn random_k_element(p: u64, rng: &mut SplitMix64, span: u64) -> CycloElement {
    loop {
        let n = (p - 1) as usize;
        let coeffs: Vec<BigRational> =
            (0..n).map(|_| q((rng.next() % (2 * span + 1)) as i64 - span as i64)).collect();
        let elt = CycloElement::new(p, coeffs).unwrap();
        if !elt.is_zero() {
            return elt;
        }
    }
}

#[test]
fn criterion_1_ex51_heisenberg_polynomial() {
    let start = Instant::now();
    let report = reproduce(Fixture::Ex51, &Bounds::default()).unwrap();
    assert!(
        report.pass,
        "ex51 assertions failed: {:?}",
        report.assertions.iter().filter(|a| !a.pass).collect::<Vec<_>>()
    );
    budget("criterion 1", start, 10);
    println!("ACCEPTANCE criterion 1: PASS (ex51 polynomial reproduced exactly, {:?})", start.elapsed());
}

#[test]
fn criterion_2_ex52_semidirect_polynomial() {
    let start = Instant::now();
    let report = reproduce(Fixture::Ex52, &Bounds::default()).unwrap();
    budget("criterion 2", start, 10);
    // every pipeline assertion passes except the bit-exact match against the
    // reference table as transcribed
    for a in &report.assertions {
        if !a.label.contains("as transcribed") {
            assert!(a.pass, "unexpected ex52 failure: {a:?}");
        }
    }
    if report.pass {
        println!("ACCEPTANCE criterion 2: PASS ({:?})", start.elapsed());
    } else {
        println!(
            "ACCEPTANCE criterion 2: FAIL — the degree-2 and degree-1 signs of the embedded \
             reference table cannot be reproduced; the sign-corrected table matches exactly \
             and the transcribed signs are provably impossible (see the fixture notes)"
        );
        panic!(
            "criterion 2 fails as stated; fixture notes: {}",
            report.notes.join(" | ")
        );
    }
}

#[test]
fn criterion_3_ex65_table_and_ramification() {
    let start = Instant::now();
    let report = reproduce(Fixture::Ex65, &Bounds::default()).unwrap();
    assert!(
        report.pass,
        "ex65 assertions failed: {:?}",
        report.assertions.iter().filter(|a| !a.pass).collect::<Vec<_>>()
    );
    budget("criterion 3", start, 60);
    println!(
        "ACCEPTANCE criterion 3: PASS (degree-9 table, X^8 = 0, constant -3^6*19^3*73, ram = {{3,19}}, {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_4_criterion_fixtures() {
    let start = Instant::now();
    for fixture in [Fixture::ExR7, Fixture::ExR19, Fixture::ExR73, Fixture::ExP5R11] {
        let report = reproduce(fixture, &Bounds::default()).unwrap();
        assert!(
            report.pass,
            "{} assertions failed: {:?}",
            report.fixture,
            report.assertions.iter().filter(|a| !a.pass).collect::<Vec<_>>()
        );
    }
    budget("criterion 4", start, 30);
    println!(
        "ACCEPTANCE criterion 4: PASS (ex_r7, ex_r19, ex_r73, ex_p5_r11 in {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_5_phi_multiplicativity() {
    let mut cases = 0;
    for e in [2i64, -1] {
        let ctx = build_tower(&TowerSpec::gauss(3, 7).with_e(e)).unwrap();
        let maps = MapContext::new(&ctx);
        let mut rng = SplitMix64::new(0xC501 ^ e as u64);
        for _ in 0..50 {
            let x = random_l_element(&ctx, &mut rng, 3);
            let y = random_l_element(&ctx, &mut rng, 3);
            let lhs = maps.phi(&x.checked_mul(&y).unwrap()).unwrap();
            let rhs = maps.phi(&x).unwrap().checked_mul(&maps.phi(&y).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "phi multiplicativity failed");
            cases += 1;
        }
    }
    assert!(cases >= 100);
    println!("ACCEPTANCE criterion 5a: PASS (phi multiplicativity, {cases} cases)");
}

#[test]
fn criterion_5_norm_commutation() {
    let ctx = build_tower(&TowerSpec::gauss(3, 7)).unwrap();
    let maps = MapContext::new(&ctx);
    let mut rng = SplitMix64::new(0xC502);
    for _ in 0..100 {
        let x = random_l_element(&ctx, &mut rng, 3);
        let lhs = maps.norm_l_over_k(&maps.phi(&x).unwrap()).unwrap();
        let rhs = maps.phi(&maps.norm_l_over_k(&x).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "norm/phi commutation failed");
    }
    println!("ACCEPTANCE criterion 5b: PASS (Nr∘Phi = Phi∘Nr, 100 cases)");
}

#[test]
fn criterion_5_tau_phi_relation() {
    // tau(Phi(x)) / Phi(x)^e = x^(1 - e^(p-1))
    for e in [2i64, -1] {
        let ctx = build_tower(&TowerSpec::gauss(3, 7).with_e(e)).unwrap();
        let maps = MapContext::new(&ctx);
        let mut rng = SplitMix64::new(0xC503 ^ e as u64);
        let exponent = 1 - e.pow(2);
        for _ in 0..50 {
            let x = random_l_element(&ctx, &mut rng, 3);
            let phi = maps.phi(&x).unwrap();
            let lhs = ctx
                .tau()
                .apply(&phi)
                .unwrap()
                .checked_mul(&phi.pow(-e).unwrap())
                .unwrap();
            let rhs = x.pow(exponent).unwrap();
            assert_eq!(lhs, rhs, "tau-phi relation failed for e = {e}");
        }
    }
    println!("ACCEPTANCE criterion 5c: PASS (tau Phi(x)/Phi(x)^e = x^(1-e^(p-1)), 100 cases)");
}

#[test]
fn criterion_5_sigma_omega_relation() {
    // sigma(omega) * Phi(x)^p = omega * b with omega = Phi(beta(x)), b = Phi(Nr(x))
    let ctx = build_tower(&TowerSpec::gauss(3, 7)).unwrap();
    let maps = MapContext::new(&ctx);
    let mut rng = SplitMix64::new(0xC504);
    for _ in 0..100 {
        let x = random_l_element(&ctx, &mut rng, 3);
        let omega = maps.phi(&maps.beta(&x).unwrap()).unwrap();
        let b = maps.phi(&maps.norm_l_over_k(&x).unwrap()).unwrap();
        let phi_x = maps.phi(&x).unwrap();
        let lhs = ctx
            .sigma()
            .apply(&omega)
            .unwrap()
            .checked_mul(&phi_x.pow(3).unwrap())
            .unwrap();
        let rhs = omega.checked_mul(&b).unwrap();
        assert_eq!(lhs, rhs, "sigma-omega relation failed");
    }
    println!("ACCEPTANCE criterion 5d: PASS (sigma(omega) Phi(x)^p = omega b, 100 cases)");
}

#[test]
fn criterion_5_exponent_sums() {
    // Sum of the exponent vector above each completely split prime equals l_i
    let ctx = build_tower(&TowerSpec::gauss(3, 7)).unwrap();
    let bounds = Bounds::default();
    let mut rng = SplitMix64::new(0xC505);
    let mut checked_entries = 0;
    let mut cases = 0;
    while cases < 100 {
        let x = random_l_element(&ctx, &mut rng, 2);
        let report = ideals::ideal_criterion(&ctx, &x, &bounds).unwrap();
        cases += 1;
        for entry in &report.entries {
            if let Some(exps) = &entry.exponents {
                assert_eq!(
                    exps.iter().sum::<i64>(),
                    entry.l,
                    "exponent sum mismatch at q = {}",
                    entry.q
                );
                checked_entries += 1;
            }
        }
    }
    assert!(checked_entries > 0, "no completely split entries encountered");
    println!(
        "ACCEPTANCE criterion 5e: PASS (sum beta_j = l_i, {cases} elements, {checked_entries} split entries)"
    );
}

#[test]
fn criterion_5_valuation_transport() {
    // v_{tau P}(tau x) = v_P(x) along the ordered primes above q
    let ctx = build_tower(&TowerSpec::gauss(3, 7)).unwrap();
    let tau_k = p3ext_core::cyclo::Automorphism::from_signed(3, ctx.e()).unwrap();
    let mut rng = SplitMix64::new(0xC506);
    let qs = [7u64, 13, 31, 43];
    for i in 0..100 {
        let x = random_k_element(3, &mut rng, 9);
        let tx = tau_k.apply(&x).unwrap();
        let primes = ideals::primes_above_in_k(&ctx, qs[i % qs.len()]).unwrap();
        let n = primes.len();
        for j in 0..n {
            let v = ideals::valuation_at(&x, &primes[j], 64).unwrap();
            let vt = ideals::valuation_at(&tx, &primes[(j + 1) % n], 64).unwrap();
            assert_eq!(v, vt, "transport failed at q = {}", qs[i % qs.len()]);
        }
    }
    println!("ACCEPTANCE criterion 5f: PASS (valuation transport, 100 cases)");
}

#[test]
fn criterion_5_chi_rotation_invariance() {
    // p | chi is independent of which prime starts the tau-cycle
    let mut rng = SplitMix64::new(0xC507);
    for _ in 0..100 {
        let p = [3u64, 5, 7][(rng.next() % 3) as usize];
        let e = p3ext_core::tower::primitive_root(p).unwrap() as i64;
        let n = (p - 1) as usize;
        let betas: Vec<i64> = (0..n).map(|_| (rng.next() % 13) as i64 - 6).collect();
        let base = ideals::chi(p, e, &betas).unwrap();
        let base_div = (&base % BigInt::from(p)) == BigInt::from(0);
        for s in 1..n {
            let rotated: Vec<i64> = (0..n).map(|i| betas[(i + s) % n]).collect();
            let chi_s = ideals::chi(p, e, &rotated).unwrap();
            let div = (&chi_s % BigInt::from(p)) == BigInt::from(0);
            assert_eq!(base_div, div, "rotation changed chi divisibility");
        }
    }
    println!("ACCEPTANCE criterion 5g: PASS (chi divisibility rotation-invariant, 100 cases)");
}

#[test]
fn criterion_5_matrix_vs_shortcut() {
    // five (3, r) constructions with e = -1: the multiplication-operator
    // method and the X^3-3X shortcut agree exactly
    let mut rng = SplitMix64::new(0xC508);
    let bounds = Bounds::default();
    for r in [7u64, 13, 19, 31, 37] {
        let ctx = build_tower(&TowerSpec::gauss(3, r).with_e(-1)).unwrap();
        let mut spec = SearchSpec::new(1);
        spec.max_results = 8;
        let hits = search(&ctx, &spec, &bounds).unwrap();
        assert!(!hits.is_empty(), "no candidate found for r = {r}");
        let hit = &hits[(rng.next() as usize) % hits.len()];
        let res = build_construction(&ctx, &hit.x, GroupVariant::Heisenberg, None, false, &bounds)
            .unwrap();
        let quick = irr_shortcut_p3(&ctx, &res).unwrap();
        let exact = irr_alpha_matrix(&ctx, &res).unwrap();
        assert_eq!(quick, exact, "method disagreement for r = {r}, x = {}", hit.x);
        assert_eq!(exact.degree(), Some(9));
    }
    println!("ACCEPTANCE criterion 5h: PASS (matrix = shortcut on 5 towers)");
}

#[test]
fn criterion_6_galois_statistics() {
    let start = Instant::now();
    let bounds = Bounds::default();
    let ctx = build_tower(&TowerSpec::zeta_p2(3).with_e(2)).unwrap();
    let x = parse_element("z9 + 2").unwrap().eval(&ctx).unwrap();
    let res =
        build_construction(&ctx, &x, GroupVariant::Heisenberg, None, false, &bounds).unwrap();
    let f = irr_alpha_matrix(&ctx, &res).unwrap();
    let report = galois_stats(&f, GroupVariant::Heisenberg, 100_000).unwrap();
    assert!(
        !report.has_impossible(),
        "impossible cycle patterns observed: {:?}",
        report.impossible
    );
    // the Heisenberg group has exponent 3: a full 9-cycle can never occur
    assert!(
        !report.patterns.iter().any(|s| s.pattern == vec![9] && s.observed > 0),
        "polynomial factored irreducibly at some prime"
    );
    let expected = report.fully_split_expected;
    assert!((expected - 1.0 / 27.0).abs() < 1e-12);
    let deviation = (report.fully_split_freq - expected).abs();
    assert!(
        deviation < 0.015,
        "fully split frequency {} deviates from {} by {}",
        report.fully_split_freq,
        expected,
        deviation
    );
    budget("criterion 6", start, 120);
    println!(
        "ACCEPTANCE criterion 6: PASS ({} primes < 100000, fully split {:.5} vs 1/27 = {:.5}, tv {:.5}, {:?})",
        report.primes_used,
        report.fully_split_freq,
        expected,
        report.tv_distance,
        start.elapsed()
    );
}

#[test]
fn criterion_7_p5_stretch() {
    // non-blocking structural checks for the p = 5 pipeline; the runtime
    // against the 10-minute target is reported, not asserted
    let start = Instant::now();
    let bounds = Bounds::default();
    let ctx = build_tower(&TowerSpec::gauss(5, 11)).unwrap();
    let x = parse_element("d - z").unwrap().eval(&ctx).unwrap();
    let res =
        build_construction(&ctx, &x, GroupVariant::Heisenberg, None, false, &bounds).unwrap();
    // irr_alpha_matrix verifies f(alpha) = 0 inside the matrix model before
    // returning, and rejects any degree other than p^2 = 25
    let f = irr_alpha_matrix(&ctx, &res).unwrap();
    assert_eq!(f.degree(), Some(25));
    assert!(f.is_monic());
    let elapsed = start.elapsed();
    let within_target = elapsed.as_secs() < 600;
    println!(
        "ACCEPTANCE criterion 7: PASS (degree-25 monic Irr with f(alpha) = 0 verified; {:?}, 10-minute target {})",
        elapsed,
        if within_target { "met" } else { "missed (reported, non-blocking)" }
    );
}
