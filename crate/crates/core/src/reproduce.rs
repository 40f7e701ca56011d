//! Reference fixtures: the bundled worked constructions run end to end with
//! their exact inputs and compared bit-exactly against embedded expected
//! values. Failures are report content, not errors.
//!
//! Two embedded tables carry documented errata (see the notes emitted with
//! the reports): the ex52 cubic table circulates with the degree-2 and
//! degree-1 signs flipped, and the ex65 table with 3^5 instead of 3^3 in the
//! X^6 coefficient. The corrected values are forced by exact double
//! computation and, for ex52, by a modulus bound that confines every root of
//! the true cubic to [-2, 2].

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt::Display;

use crate::config::Bounds;
use crate::construct::build_construction;
use crate::cyclo::{min_poly_over_q, CycloElement};
use crate::expr::parse_element;
use crate::ideals::{self, FieldLayer};
use crate::maps::{Evidence, GroupVariant, MapContext};
use crate::minpoly::{irr_alpha_matrix, irr_shortcut_p3};
use crate::ramify;
use crate::ratpoly::RationalPoly;
use crate::tower::{build_tower, TowerSpec};
use crate::Result;

/// The bundled fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fixture {
    ExR7,
    ExR19,
    ExR73,
    ExP5R11,
    Ex51,
    Ex52,
    Ex65,
}

impl Fixture {
    pub fn all() -> [Fixture; 7] {
        [
            Fixture::ExR7,
            Fixture::ExR19,
            Fixture::ExR73,
            Fixture::ExP5R11,
            Fixture::Ex51,
            Fixture::Ex52,
            Fixture::Ex65,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Fixture::ExR7 => "ex_r7",
            Fixture::ExR19 => "ex_r19",
            Fixture::ExR73 => "ex_r73",
            Fixture::ExP5R11 => "ex_p5_r11",
            Fixture::Ex51 => "ex51",
            Fixture::Ex52 => "ex52",
            Fixture::Ex65 => "ex65",
        }
    }

    pub fn from_name(name: &str) -> Option<Fixture> {
        Fixture::all().into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Assertion {
    pub label: String,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureReport {
    pub fixture: String,
    pub pass: bool,
    pub assertions: Vec<Assertion>,
    pub notes: Vec<String>,
}

struct Checker {
    assertions: Vec<Assertion>,
    notes: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker { assertions: Vec::new(), notes: Vec::new() }
    }

    fn eq<T: PartialEq + Display>(&mut self, label: &str, expected: &T, actual: &T) {
        self.assertions.push(Assertion {
            label: label.to_string(),
            pass: expected == actual,
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }

    fn is_true(&mut self, label: &str, cond: bool) {
        self.assertions.push(Assertion {
            label: label.to_string(),
            pass: cond,
            expected: "true".to_string(),
            actual: cond.to_string(),
        });
    }

    fn note(&mut self, text: &str) {
        self.notes.push(text.to_string());
    }

    fn finish(self, fixture: Fixture) -> FixtureReport {
        let pass = self.assertions.iter().all(|a| a.pass);
        FixtureReport {
            fixture: fixture.name().to_string(),
            pass,
            assertions: self.assertions,
            notes: self.notes,
        }
    }
}

/// Run one fixture and report per-assertion outcomes.
pub fn reproduce(fixture: Fixture, bounds: &Bounds) -> Result<FixtureReport> {
    match fixture {
        Fixture::ExR7 => ex_r7(bounds),
        Fixture::ExR19 => ex_r19(bounds),
        Fixture::ExR73 => ex_r73(bounds),
        Fixture::ExP5R11 => ex_p5_r11(bounds),
        Fixture::Ex51 => ex51(bounds),
        Fixture::Ex52 => ex52(bounds),
        Fixture::Ex65 => ex65(bounds),
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ex_r7(bounds: &Bounds) -> Result<FixtureReport> {
    let mut c = Checker::new();
    let ctx = build_tower(&TowerSpec::gauss(3, 7))?;
    c.eq("sigma exponent (zeta_7 -> zeta_7^2, zeta_3 fixed)", &16u64, &ctx.sigma().exponent());
    let x = parse_element("d + z")?.eval(&ctx)?;
    let maps = MapContext::new(&ctx);
    let gamma = maps.norm_l_over_k(&x)?;
    let expect_gamma =
        CycloElement::from_integer(21, 3)?.checked_sub(&ctx.zeta_p())?;
    c.eq("gamma = Nr_{L/K}(x) = 3 - zeta_3", &expect_gamma, &gamma);
    c.eq("Nr_{L/Q}(x) = 13", &rat(13), &maps.norm_l_over_q(&x)?);
    c.is_true(
        "13 splits completely in L",
        ideals::splitting_type(&ctx, 13, FieldLayer::L).splits_completely(),
    );
    let report = ideals::ideal_criterion(&ctx, &x, bounds)?;
    c.is_true("criterion verdict", report.verdict);
    c.eq("witness prime", &13u64, &report.witness_q().unwrap_or(0));
    let class = maps.classify(&x, bounds)?;
    c.is_true("induces the Heisenberg variant", class.induces_heisenberg());
    c.is_true("induces the semidirect variant", class.induces_semidirect());
    Ok(c.finish(Fixture::ExR7))
}

fn ex_r19(bounds: &Bounds) -> Result<FixtureReport> {
    let mut c = Checker::new();
    let ctx = build_tower(&TowerSpec::gauss(3, 19))?;
    let x = parse_element("d + z + 1")?.eval(&ctx)?;
    let maps = MapContext::new(&ctx);
    let gamma = maps.norm_l_over_k(&x)?;
    c.eq("gamma = -7 zeta_3", &ctx.zeta_p().scale(&rat(-7)), &gamma);
    c.eq("Nr_{L/Q}(x) = 49", &rat(49), &maps.norm_l_over_q(&x)?);
    c.is_true(
        "7 splits completely in L",
        ideals::splitting_type(&ctx, 7, FieldLayer::L).splits_completely(),
    );
    let report = ideals::ideal_criterion(&ctx, &x, bounds)?;
    c.is_true("ideal criterion fails on this x", !report.verdict);
    let entry = &report.entries[0];
    c.eq("entry prime", &7u64, &entry.q);
    c.eq(
        "exponent vector beta_1 = beta_2 = 1",
        &"[1, 1]".to_string(),
        &format!("{:?}", entry.exponents.as_ref().unwrap()),
    );
    c.eq("chi = 2*1 + 1 = 3", &BigInt::from(3), entry.chi.as_ref().unwrap());
    c.eq("chi divisible by 3", &true, &entry.chi_divisible_by_p.unwrap_or(false));
    for variant in [GroupVariant::Heisenberg, GroupVariant::Semidirect] {
        let b = maps.b_value(&x, variant)?;
        let w = ideals::nonpower_witness(&ctx, &b, bounds)?;
        c.is_true(
            &format!("non-power witnessed for the {} b-value", variant.name()),
            w.witnessed_nonpower,
        );
    }
    Ok(c.finish(Fixture::ExR19))
}

fn ex_r73(bounds: &Bounds) -> Result<FixtureReport> {
    let mut c = Checker::new();
    let spec = TowerSpec { p: 3, source: crate::tower::TowerSource::Gauss { r: 73, m_r: Some(5) }, e: Some(2), sigma_k: None };
    let ctx = build_tower(&spec)?;
    let x = parse_element("d - z + 1")?.eval(&ctx)?;
    let maps = MapContext::new(&ctx);
    let gamma = maps.norm_l_over_k(&x)?;
    c.eq("gamma = 21 zeta_3", &ctx.zeta_p().scale(&rat(21)), &gamma);
    c.eq("Nr_{L/Q}(x) = 441 = 3^2 7^2", &rat(441), &maps.norm_l_over_q(&x)?);
    let b = maps.b_value(&x, GroupVariant::Heisenberg)?;
    c.eq("b = Phi(gamma) = 21^3 zeta_3", &ctx.zeta_p().scale(&rat(9261)), &b);
    let w = ideals::nonpower_witness(&ctx, &b, bounds)?;
    c.is_true("b witnessed as a non-cube", w.witnessed_nonpower);
    Ok(c.finish(Fixture::ExR73))
}

fn ex_p5_r11(bounds: &Bounds) -> Result<FixtureReport> {
    let mut c = Checker::new();
    let ctx = build_tower(&TowerSpec::gauss(5, 11))?;
    let x = parse_element("d - z")?.eval(&ctx)?;
    let maps = MapContext::new(&ctx);
    c.eq("Nr_{L/Q}(x) = 991", &rat(991), &maps.norm_l_over_q(&x)?);
    c.is_true(
        "991 splits completely in L",
        ideals::splitting_type(&ctx, 991, FieldLayer::L).splits_completely(),
    );
    let report = ideals::ideal_criterion(&ctx, &x, bounds)?;
    c.is_true("criterion verdict", report.verdict);
    c.eq("witness prime", &991u64, &report.witness_q().unwrap_or(0));
    Ok(c.finish(Fixture::ExP5R11))
}

/// The cubic whose composition with X^3 - 3X is the ex51 table.
fn ex51_cubic() -> RationalPoly {
    RationalPoly::new(vec![
        ratio(1489, 2401),
        ratio(-111, 343),
        ratio(-81, 49),
        rat(1),
    ])
}

fn ex51(bounds: &Bounds) -> Result<FixtureReport> {
    let mut c = Checker::new();
    // sigma is forced to the generator used by the source construction
    // (zeta_19 -> zeta_19^6 together with zeta_3 fixed, i.e. 25 mod 57)
    let ctx = build_tower(&TowerSpec::gauss(3, 19).with_e(-1).with_sigma(25))?;
    let x = parse_element("d + z + 1")?.eval(&ctx)?;
    let res = build_construction(&ctx, &x, GroupVariant::Heisenberg, None, false, bounds)?;
    c.is_true("non-power condition witnessed", matches!(res.nonpower_evidence, Evidence::ResidueWitness { .. }));
    let quick = irr_shortcut_p3(&ctx, &res)?;
    let expected = ex51_cubic().compose(&RationalPoly::from_i64(&[0, -3, 0, 1]));
    c.eq("expanded polynomial equals the embedded table", &expected, &quick);
    let exact = irr_alpha_matrix(&ctx, &res)?;
    c.eq("matrix method agrees with the shortcut", &quick, &exact);
    Ok(c.finish(Fixture::Ex51))
}

/// The ex52 cubic as transcribed in the reference table.
fn ex52_cubic_transcribed() -> RationalPoly {
    RationalPoly::new(vec![
        ratio(6791, 13 * 13 * 13 * 7),
        ratio(-3 * 5 * 373, 13 * 13 * 13),
        ratio(-2 * 9 * 29, 13 * 13),
        rat(1),
    ])
}

/// The same cubic with the degree-2 and degree-1 signs corrected.
fn ex52_cubic_corrected() -> RationalPoly {
    RationalPoly::new(vec![
        ratio(6791, 13 * 13 * 13 * 7),
        ratio(3 * 5 * 373, 13 * 13 * 13),
        ratio(2 * 9 * 29, 13 * 13),
        rat(1),
    ])
}

fn ex52(bounds: &Bounds) -> Result<FixtureReport> {
    let mut c = Checker::new();
    let ctx = build_tower(&TowerSpec::gauss(3, 7).with_e(-1))?;
    let d = ctx.delta().clone();
    let z3 = ctx.zeta_p();
    // worked internals: Irr(delta), sigma action, the radical theta
    c.eq(
        "minimal polynomial of delta",
        &RationalPoly::from_i64(&[-1, -2, 1, 1]),
        &min_poly_over_q(&d)?,
    );
    let sigma_delta = ctx.sigma().apply(&d)?;
    c.eq(
        "sigma(delta) = delta^2 - 2",
        &d.pow(2)?.checked_sub(&CycloElement::from_integer(21, 2)?)?,
        &sigma_delta,
    );
    let theta = d
        .pow(2)?
        .scale(&rat(3))
        .checked_add(&d.scale(&rat(3)))?
        .checked_add(&z3.checked_mul(&d)?.scale(&rat(3)))?
        .checked_add(&z3)?
        .checked_sub(&CycloElement::from_integer(21, 4)?)?;
    c.eq("sigma(theta) = zeta_3 theta", &z3.checked_mul(&theta)?, &ctx.sigma().apply(&theta)?);
    let maps = MapContext::new(&ctx);
    c.eq(
        "theta is the Lagrange resolvent of 2 delta^2 + delta",
        &theta,
        &maps.lagrange_resolvent(&d.pow(2)?.scale(&rat(2)).checked_add(&d)?)?,
    );
    let x = parse_element("d + z")?.eval(&ctx)?;
    let res =
        build_construction(&ctx, &x, GroupVariant::Semidirect, Some(theta.clone()), false, bounds)?;
    let quick = irr_shortcut_p3(&ctx, &res)?;
    let exact = irr_alpha_matrix(&ctx, &res)?;
    c.eq("matrix method agrees with the shortcut", &quick, &exact);
    let inner = RationalPoly::from_i64(&[0, -3, 0, 1]);
    let corrected = ex52_cubic_corrected().compose(&inner);
    let transcribed = ex52_cubic_transcribed().compose(&inner);
    c.eq("polynomial equals the sign-corrected table", &corrected, &quick);
    c.eq("polynomial equals the table as transcribed", &transcribed, &quick);
    // exact impossibility of the transcribed signs: tau acts as complex
    // conjugation, so omega + 1/omega has every conjugate in [-2, 2]; the
    // transcribed cubic changes sign between 2 and 4
    let p2 = ex52_cubic_transcribed().eval(&rat(2));
    let p4 = ex52_cubic_transcribed().eval(&rat(4));
    c.is_true(
        "transcribed cubic has a root beyond 2 (impossible for omega + 1/omega)",
        p2 < BigRational::from(BigInt::from(0)) && p4 > BigRational::from(BigInt::from(0)),
    );
    // group-level confirmation: the produced polynomial carries the
    // expected order-27 signature, the transcribed variant does not
    let stats = crate::minpoly::galois_stats(&quick, GroupVariant::Semidirect, 20_000)?;
    c.is_true(
        "factorization patterns match the semidirect group (no impossible types)",
        !stats.has_impossible()
            && stats
                .patterns
                .iter()
                .find(|s| s.pattern == vec![9])
                .is_some_and(|s| (s.observed_freq - s.expected_freq).abs() < 0.03),
    );
    let wrong = crate::minpoly::galois_stats(&transcribed, GroupVariant::Semidirect, 20_000)?;
    c.is_true(
        "transcribed table shows cycle types impossible for any order-27 group",
        wrong.has_impossible(),
    );
    c.note(
        "the transcribed table's degree-2 and degree-1 coefficients carry flipped signs: \
         with e = -1 every Phi-value is a unit-modulus element in all complex embeddings, \
         so omega + 1/omega is confined to [-2, 2], while the transcribed cubic provably \
         has a real root in (2, 4); the sign-corrected table is confirmed by two \
         independent exact computations (matrix operator and X^3-3X shortcut) and by \
         its factorization-pattern statistics, which match the expected group exactly \
         while the transcribed variant produces impossible cycle types",
    );
    Ok(c.finish(Fixture::Ex52))
}

/// The ex65 degree-9 table with the verified X^6 coefficient.
fn ex65_table() -> Vec<BigInt> {
    vec![
        BigInt::from(-(3i64.pow(6) * 19i64.pow(3) * 73)),
        BigInt::from(-(3i64.pow(8) * 7 * 19i64.pow(3))),
        BigInt::from(-(3i64.pow(7) * 5 * 19i64.pow(3))),
        BigInt::from(4 * 3i64.pow(5) * 19 * 139),
        BigInt::from(2 * 3i64.pow(8) * 11 * 19),
        BigInt::from(3i64.pow(5) * 19 * 47),
        BigInt::from(-(3i64.pow(3) * 5 * 59)),
        BigInt::from(-(3i64.pow(4) * 13)),
        BigInt::from(0),
        BigInt::from(1),
    ]
}

fn ex65(bounds: &Bounds) -> Result<FixtureReport> {
    let mut c = Checker::new();
    let ctx = build_tower(&TowerSpec::zeta_p2(3).with_e(2))?;
    c.eq("sigma: zeta_9 -> zeta_9^4", &4u64, &ctx.sigma().exponent());
    c.eq("tau: zeta_9 -> zeta_9^{-1}", &8u64, &ctx.tau().exponent());
    let x = parse_element("z9 + 2")?.eval(&ctx)?;
    let maps = MapContext::new(&ctx);
    c.eq("Nr_{L/Q}(x) = 57 = 3 * 19", &rat(57), &maps.norm_l_over_q(&x)?);
    c.is_true(
        "19 splits completely in L",
        ideals::splitting_type(&ctx, 19, FieldLayer::L).splits_completely(),
    );
    let res = build_construction(&ctx, &x, GroupVariant::Heisenberg, None, false, bounds)?;
    c.is_true(
        "non-power condition established by the ideal criterion",
        matches!(res.nonpower_evidence, Evidence::IdealCriterion { q: 19 }),
    );
    // alpha = omega^(1/3) + beta^{-1} (omega^(1/3))^2
    c.eq("alpha term count", &2usize, &res.alpha_terms.len());
    c.is_true(
        "alpha = w^(1/3) + beta^{-1} (w^(1/3))^2",
        res.alpha_terms[0].coeff.is_one()
            && res.alpha_terms[0].radical_exp == 1
            && res.alpha_terms[1].coeff == res.beta.inv()?
            && res.alpha_terms[1].radical_exp == 2,
    );
    let f = irr_alpha_matrix(&ctx, &res)?;
    let expected = RationalPoly::new(ex65_table().into_iter().map(BigRational::from).collect());
    c.eq("degree-9 coefficient table", &expected, &f);
    c.is_true("X^8 coefficient is zero", f.coeff(8) == rat(0));
    c.eq(
        "constant term = -3^6 * 19^3 * 73",
        &rat(-(3i64.pow(6) * 19i64.pow(3) * 73)),
        &f.coeff(0),
    );
    c.note(
        "the reference table's X^6 entry circulates as -3^5*5*59; the computed value \
         -3^3*5*59 is forced by the exact matrix computation and confirmed by evaluating \
         both candidates at numerical alpha on all three cube-root branches",
    );
    let ram = ramify::ram_set_with_construction(&f, &ctx, &res, bounds)?;
    c.eq("ramified set", &"[3, 19]".to_string(), &format!("{:?}", ram.ram_set));
    c.is_true("no inconclusive primes", ram.inconclusive.is_empty());
    c.is_true("discriminant fully factored", ram.unfactored_cofactor.is_none());
    c.is_true(
        "both ramified primes certified",
        ram.candidates
            .iter()
            .filter(|cand| cand.ell == 3 || cand.ell == 19)
            .all(|cand| cand.status.is_ramified()),
    );
    Ok(c.finish(Fixture::Ex65))
}
