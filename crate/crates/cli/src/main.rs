//! p3ext: construct and verify the non-abelian order-p^3 Galois extensions
//! of Q inside cyclotomic towers.
//!
//! JSON results go to stdout, human summaries to stderr. Exit codes:
//! 0 = success/pass, 1 = a check failed, 2 = usage error.

use std::collections::{HashMap, HashSet};
use std::io::Read;
use std::process::ExitCode;

use p3ext_core::config::Bounds;
use p3ext_core::construct::{build_construction, ConstructionResult};
use p3ext_core::expr::parse_element;
use p3ext_core::ideals;
use p3ext_core::maps::GroupVariant;
use p3ext_core::minpoly::{self, galois_stats};
use p3ext_core::ramify;
use p3ext_core::ratpoly::RationalPoly;
use p3ext_core::reproduce::{reproduce, Fixture};
use p3ext_core::search::{search, SearchSpec, SupportKind};
use p3ext_core::tower::{build_tower, TowerContext, TowerSource, TowerSpec};

const USAGE: &str = "\
p3ext <command> [flags]

commands:
  tower      --p P (--r R [--mr M] | --zeta-p2) [--e E] [--sigma K]
             build the field tower and print its summary
  criterion  <tower flags> --x \"<expr>\"
             run the non-p-th-power ideal criterion on x
  construct  <tower flags> --x \"<expr>\" --group heisenberg|semidirect
             [--theta \"<expr>\"] [--force]
             assemble omega, b, and the radical expansion of alpha
  minpoly    --construction FILE [--shortcut]
             exact minimal polynomial of alpha (degree p^2)
  ramify     --poly FILE
             certified ramified primes of the defining polynomial
  verify     --poly FILE --group heisenberg|semidirect [--prime-bound N]
             factorization-pattern statistics against the expected group
  search     <tower flags> --height H [--min-ram] [--max-results N]
             [--max-candidates N] [--support delta-zeta|power-basis]
             enumerate elements passing the criterion
  reproduce  <fixture>|--all
             run a bundled fixture (ex_r7, ex_r19, ex_r73, ex_p5_r11,
             ex51, ex52, ex65) and report per-assertion pass/fail

common flags:
  --config FILE   key=value overrides: factor_bound, witness_max,
                  hensel_cap, prime_bound, height
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(args: &[String]) -> Result<ExitCode, String> {
    let Some(command) = args.first() else {
        eprint!("{USAGE}");
        return Ok(ExitCode::from(2));
    };
    let rest = &args[1..];
    match command.as_str() {
        "tower" => cmd_tower(rest),
        "criterion" => cmd_criterion(rest),
        "construct" => cmd_construct(rest),
        "minpoly" => cmd_minpoly(rest),
        "ramify" => cmd_ramify(rest),
        "verify" => cmd_verify(rest),
        "search" => cmd_search(rest),
        "reproduce" => cmd_reproduce(rest),
        "help" | "--help" | "-h" => {
            print!("{USAGE}");
            Ok(ExitCode::SUCCESS)
        }
        other => Err(format!("unknown command {other:?}\n\n{USAGE}")),
    }
}

struct Flags {
    values: HashMap<String, String>,
    switches: HashSet<String>,
    positional: Vec<String>,
}

fn parse_flags(args: &[String], switch_names: &[&str]) -> Result<Flags, String> {
    let mut values = HashMap::new();
    let mut switches = HashSet::new();
    let mut positional = Vec::new();
    let mut iter = args.iter().peekable();
    while let Some(token) = iter.next() {
        if let Some(name) = token.strip_prefix("--") {
            if switch_names.contains(&name) {
                switches.insert(name.to_string());
            } else {
                let value = iter
                    .next()
                    .ok_or_else(|| format!("flag --{name} expects a value"))?;
                values.insert(name.to_string(), value.clone());
            }
        } else {
            positional.push(token.clone());
        }
    }
    Ok(Flags { values, switches, positional })
}

impl Flags {
    fn get(&self, name: &str) -> Option<&str> {
        self.values.get(name).map(|s| s.as_str())
    }

    fn require(&self, name: &str) -> Result<&str, String> {
        self.get(name).ok_or_else(|| format!("missing required flag --{name}"))
    }

    fn parse<T: std::str::FromStr>(&self, name: &str) -> Result<Option<T>, String> {
        match self.get(name) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| format!("flag --{name}: cannot parse {raw:?}")),
        }
    }

    fn has(&self, name: &str) -> bool {
        self.switches.contains(name)
    }
}

fn bounds_from(flags: &Flags) -> Result<Bounds, String> {
    match flags.get("config") {
        None => Ok(Bounds::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {path}: {e}"))?;
            Bounds::parse_config(&text).map_err(|e| e.to_string())
        }
    }
}

fn tower_from(flags: &Flags) -> Result<TowerContext, String> {
    let p: u64 = flags
        .parse("p")?
        .ok_or_else(|| "missing required flag --p".to_string())?;
    let source = if flags.has("zeta-p2") {
        TowerSource::ZetaP2
    } else {
        let r: u64 = flags
            .parse("r")?
            .ok_or_else(|| "need --r R or --zeta-p2".to_string())?;
        TowerSource::Gauss { r, m_r: flags.parse("mr")? }
    };
    let spec = TowerSpec { p, source, e: flags.parse("e")?, sigma_k: flags.parse("sigma")? };
    build_tower(&spec).map_err(|e| e.to_string())
}

fn emit<T: serde::Serialize>(value: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    println!("{text}");
    Ok(())
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("cannot read stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
    }
}

fn group_from(raw: &str) -> Result<GroupVariant, String> {
    match raw {
        "heisenberg" => Ok(GroupVariant::Heisenberg),
        "semidirect" => Ok(GroupVariant::Semidirect),
        other => Err(format!("unknown group {other:?} (use heisenberg or semidirect)")),
    }
}

fn cmd_tower(args: &[String]) -> Result<ExitCode, String> {
    let flags = parse_flags(args, &["zeta-p2"])?;
    let ctx = tower_from(&flags)?;
    let summary = ctx.summary();
    emit(&summary)?;
    eprintln!(
        "tower: m = {}, [L:Q] = {}, sigma = zeta_m -> zeta_m^{}, tau = zeta_m -> zeta_m^{}, e = {}",
        summary.m, summary.degree_l, summary.sigma_k, summary.tau_k, summary.e
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_criterion(args: &[String]) -> Result<ExitCode, String> {
    let flags = parse_flags(args, &["zeta-p2"])?;
    let bounds = bounds_from(&flags)?;
    let ctx = tower_from(&flags)?;
    let x = parse_element(flags.require("x")?)
        .and_then(|e| e.eval(&ctx))
        .map_err(|e| e.to_string())?;
    let report = ideals::ideal_criterion(&ctx, &x, &bounds).map_err(|e| e.to_string())?;
    emit(&report)?;
    eprintln!(
        "criterion: Nr = {}, verdict = {}{}",
        report.norm,
        report.verdict,
        report
            .witness_q()
            .map(|q| format!(" (via q = {q})"))
            .unwrap_or_default()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_construct(args: &[String]) -> Result<ExitCode, String> {
    let flags = parse_flags(args, &["zeta-p2", "force"])?;
    let bounds = bounds_from(&flags)?;
    let ctx = tower_from(&flags)?;
    let x = parse_element(flags.require("x")?)
        .and_then(|e| e.eval(&ctx))
        .map_err(|e| e.to_string())?;
    let variant = group_from(flags.require("group")?)?;
    let theta = match flags.get("theta") {
        None => None,
        Some(raw) => Some(
            parse_element(raw)
                .and_then(|e| e.eval(&ctx))
                .map_err(|e| e.to_string())?,
        ),
    };
    let res = build_construction(&ctx, &x, variant, theta, flags.has("force"), &bounds)
        .map_err(|e| e.to_string())?;
    emit(&res)?;
    eprintln!(
        "construct: {} variant, omega with {} alpha terms, evidence {:?}{}",
        variant.name(),
        res.alpha_terms.len(),
        res.nonpower_evidence,
        if res.forced { " (forced)" } else { "" }
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_minpoly(args: &[String]) -> Result<ExitCode, String> {
    let flags = parse_flags(args, &["shortcut"])?;
    let raw = read_input(flags.require("construction")?)?;
    let res: ConstructionResult = serde_json::from_str(&raw).map_err(|e| e.to_string())?;
    let ctx = res.rebuild_tower().map_err(|e| e.to_string())?;
    let poly = if flags.has("shortcut") {
        minpoly::irr_shortcut_p3(&ctx, &res).map_err(|e| e.to_string())?
    } else {
        minpoly::irr_alpha_matrix(&ctx, &res).map_err(|e| e.to_string())?
    };
    emit(&poly)?;
    eprintln!("minpoly: degree {}, {}", poly.degree().unwrap_or(0), poly.factored_display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_ramify(args: &[String]) -> Result<ExitCode, String> {
    let flags = parse_flags(args, &[])?;
    let bounds = bounds_from(&flags)?;
    let raw = read_input(flags.require("poly")?)?;
    let poly: RationalPoly = serde_json::from_str(&raw).map_err(|e| e.to_string())?;
    let report = ramify::ram_set(&poly, &bounds).map_err(|e| e.to_string())?;
    emit(&report)?;
    eprintln!(
        "ramify: ram_set = {:?}, inconclusive = {:?}",
        report.ram_set, report.inconclusive
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &[String]) -> Result<ExitCode, String> {
    let flags = parse_flags(args, &[])?;
    let bounds = bounds_from(&flags)?;
    let raw = read_input(flags.require("poly")?)?;
    let poly: RationalPoly = serde_json::from_str(&raw).map_err(|e| e.to_string())?;
    let variant = group_from(flags.require("group")?)?;
    let prime_bound = flags.parse::<u64>("prime-bound")?.unwrap_or(bounds.prime_bound);
    let report = galois_stats(&poly, variant, prime_bound).map_err(|e| e.to_string())?;
    emit(&report)?;
    eprintln!(
        "verify: {} primes, fully split {:.5} (expected {:.5}), tv distance {:.5}, impossible patterns: {}",
        report.primes_used,
        report.fully_split_freq,
        report.fully_split_expected,
        report.tv_distance,
        report.impossible.len()
    );
    if report.has_impossible() {
        Ok(ExitCode::FAILURE)
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_search(args: &[String]) -> Result<ExitCode, String> {
    let flags = parse_flags(args, &["zeta-p2", "min-ram"])?;
    let bounds = bounds_from(&flags)?;
    let ctx = tower_from(&flags)?;
    let mut spec = SearchSpec::new(flags.parse::<u32>("height")?.unwrap_or(bounds.height));
    if let Some(n) = flags.parse::<u64>("max-results")? {
        spec.max_results = n;
    }
    if let Some(n) = flags.parse::<u64>("max-candidates")? {
        spec.max_candidates = n;
    }
    spec.minimal_ramification = flags.has("min-ram");
    spec.support = match flags.get("support") {
        None => None,
        Some("delta-zeta") => Some(SupportKind::DeltaZeta),
        Some("power-basis") => Some(SupportKind::PowerBasis),
        Some(other) => return Err(format!("unknown support {other:?}")),
    };
    if let Some(raw) = flags.get("variant") {
        spec.variant = Some(group_from(raw)?);
    }
    let hits = search(&ctx, &spec, &bounds).map_err(|e| e.to_string())?;
    emit(&hits)?;
    eprintln!("search: {} hit(s)", hits.len());
    for hit in &hits {
        eprintln!("  x = {}  (Nr = {})", hit.x, hit.report.norm);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reproduce(args: &[String]) -> Result<ExitCode, String> {
    let flags = parse_flags(args, &["all"])?;
    let bounds = bounds_from(&flags)?;
    let fixtures: Vec<Fixture> = if flags.has("all") {
        Fixture::all().to_vec()
    } else {
        let name = flags
            .positional
            .first()
            .ok_or_else(|| "reproduce expects a fixture name or --all".to_string())?;
        vec![Fixture::from_name(name).ok_or_else(|| format!("unknown fixture {name:?}"))?]
    };
    let mut all_pass = true;
    let mut reports = Vec::new();
    for fixture in fixtures {
        let report = reproduce(fixture, &bounds).map_err(|e| e.to_string())?;
        eprintln!("{}: {}", report.fixture, if report.pass { "PASS" } else { "FAIL" });
        for a in &report.assertions {
            eprintln!(
                "  [{}] {}{}",
                if a.pass { "ok" } else { "FAIL" },
                a.label,
                if a.pass {
                    String::new()
                } else {
                    format!(" (expected {}, got {})", a.expected, a.actual)
                }
            );
        }
        for note in &report.notes {
            eprintln!("  note: {note}");
        }
        all_pass &= report.pass;
        reports.push(report);
    }
    if reports.len() == 1 {
        emit(&reports[0])?;
    } else {
        emit(&reports)?;
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
