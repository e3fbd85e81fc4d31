mod suites;

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use equimap::ema::MapSetting;
use equimap::gammaring::WeightFunction;
use equimap::scenario::{Scenario, NAMES};
use equimap::weylalg::build_descriptor;
use equimap::weylmod::{
    annihilator_bound, character_json, default_truncation, local_weyl_module, min_annihilator_exponent,
    simple_quotient, tensor, WeylOptions, WeylResult,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use suites::{Suite, SuiteReport};

#[derive(Parser)]
#[command(name = "equimap", version, about = "Equivariant map algebras and their local Weyl modules")]
struct Cli {
    /// worker threads for `verify`
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct Build {
    #[arg(long)]
    scenario: String,
    /// JSON object mapping points to weights, e.g. '{"1": [1, 0]}'
    #[arg(long)]
    psi: String,
    /// truncation exponent
    #[arg(long = "N")]
    n: Option<usize>,
    /// PBW depth bound
    #[arg(long)]
    depth: Option<i64>,
    /// rebuild at N+1 and depth+2 and compare characters
    #[arg(long)]
    check_stability: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Folding data of a scenario
    Fold {
        #[arg(long)]
        scenario: String,
    },
    /// Local Weyl module: dimension, character, truncation data
    LocalWeyl(Build),
    /// Simple quotient of the local Weyl module
    Simple(Build),
    /// Character of the local Weyl module
    Char(Build),
    /// Tensor product of two local Weyl modules with disjoint supports
    Tensor {
        #[arg(long)]
        scenario: String,
        #[arg(long, num_args = 2, value_names = ["PSI1", "PSI2"])]
        psi: Vec<String>,
        #[arg(long = "N")]
        n: Option<usize>,
    },
    /// Least annihilating power of the support ideal
    Annihilator(Build),
    /// Presentation of the highest-weight-space algebra for a folded weight
    Bba {
        #[arg(long)]
        scenario: String,
        /// folded weight as a JSON array
        #[arg(long)]
        lambda: String,
    },
    /// Bijection and evaluation checks for the highest-weight-space algebra
    BbaCheck {
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Run invariant suites
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        scenario: Option<String>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("{0}")]
    Failed(Value),
}

type Out = Result<Value, CliError>;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn compute(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

fn scenario(name: &str) -> Result<(Scenario, Arc<MapSetting>), CliError> {
    let sc = Scenario::get(name).map_err(usage)?;
    let s = sc.setting().map_err(compute)?;
    Ok((sc, s))
}

fn header(sc: &Scenario) -> Value {
    json!({ "name": sc.name, "field_min_poly": sc.field.min_poly() })
}

struct Built {
    sc: Scenario,
    setting: Arc<MapSetting>,
    given: WeightFunction,
    psi: WeightFunction,
    res: WeylResult,
}

fn build(b: &Build) -> Result<Built, CliError> {
    let (sc, setting) = scenario(&b.scenario)?;
    let (given, psi) = sc.parse_psi(&setting, &b.psi).map_err(usage)?;
    let opts = WeylOptions { n: b.n, depth: b.depth, check_stability: b.check_stability };
    let res = local_weyl_module(setting.clone(), &psi, &opts).map_err(compute)?;
    Ok(Built { sc, setting, given, psi, res })
}

fn module_json(bt: &Built) -> Value {
    let w = &bt.res.module;
    json!({
        "scenario": header(&bt.sc),
        "psi": bt.given.to_json(),
        "psi_completed": bt.psi.to_json(),
        "lambda": bt.res.lambda,
        "N": bt.res.n,
        "depth": bt.res.depth,
        "dimension": w.dim(),
        "character": character_json(&w.character(), &bt.setting.fd),
        "zero_reason": bt.res.zero_reason,
        "stable": bt.res.stable,
    })
}

fn fold(name: &str) -> Out {
    let (sc, s) = scenario(name)?;
    let mut v = s.fd.to_json();
    v["scenario"] = sc.to_json();
    v["lie_type"] = json!(s.lie.rs.ty.to_string());
    Ok(v)
}

fn simple(b: &Build) -> Out {
    let bt = build(b)?;
    let v = simple_quotient(&bt.res.module);
    let mut out = module_json(&bt);
    out["local_weyl_dimension"] = out["dimension"].take();
    out["dimension"] = json!(v.dim());
    out["character"] = character_json(&v.character(), &bt.setting.fd);
    Ok(out)
}

fn character(b: &Build) -> Out {
    let bt = build(b)?;
    Ok(json!({
        "scenario": header(&bt.sc),
        "lambda": bt.res.lambda,
        "character": character_json(&bt.res.module.character(), &bt.setting.fd),
    }))
}

fn tensor_cmd(name: &str, psis: &[String], n: Option<usize>) -> Out {
    let (sc, s) = scenario(name)?;
    let mut mods = vec![];
    let mut total = WeightFunction::new();
    for p in psis {
        let (_, full) = sc.parse_psi(&s, p).map_err(usage)?;
        for (pt, mu) in full.iter() {
            if total.get(pt).is_some() {
                return Err(usage(format!("supports overlap at {pt}")));
            }
            total.set(pt.clone(), mu.clone());
        }
        let n = n.unwrap_or_else(|| default_truncation(&s, &full));
        let opts = WeylOptions { n: Some(n), ..Default::default() };
        mods.push(local_weyl_module(s.clone(), &full, &opts).map_err(compute)?.module);
    }
    let t = tensor(&mods[0], &mods[1]).map_err(compute)?;
    Ok(json!({
        "scenario": header(&sc),
        "psi": total.to_json(),
        "factor_dimensions": mods.iter().map(|m| m.dim()).collect::<Vec<_>>(),
        "dimension": t.dim(),
        "character": character_json(&t.character(), &s.fd),
    }))
}

fn annihilator(b: &Build) -> Out {
    let mut b = b.clone();
    if b.n.is_none() {
        let (sc, s) = scenario(&b.scenario)?;
        let (_, psi) = sc.parse_psi(&s, &b.psi).map_err(usage)?;
        b.n = Some(default_truncation(&s, &psi) + 1);
    }
    let bt = build(&b)?;
    let k = min_annihilator_exponent(&bt.res.module, &bt.psi).map_err(compute)?;
    Ok(json!({
        "scenario": header(&bt.sc),
        "psi_completed": bt.psi.to_json(),
        "lambda": bt.res.lambda,
        "N": bt.res.n,
        "exponent": k,
        "bound": annihilator_bound(&bt.setting, &bt.res.lambda),
        "exponent_below_truncation": k < bt.res.n,
    }))
}

fn bba(name: &str, lambda: &str) -> Out {
    let (sc, s) = scenario(name)?;
    let lambda: Vec<i64> = serde_json::from_str(lambda).map_err(|e| usage(format!("--lambda: {e}")))?;
    if lambda.len() != s.fd.rank() || lambda.iter().any(|x| *x < 0) {
        return Err(usage(format!("--lambda needs {} nonnegative entries", s.fd.rank())));
    }
    let d = build_descriptor(&lambda, &s.fd, &s.ring);
    Ok(json!({ "scenario": header(&sc), "algebra": d }))
}

fn scenarios(name: Option<&str>) -> Result<Vec<Scenario>, CliError> {
    match name {
        Some(n) => Ok(vec![Scenario::get(n).map_err(usage)?]),
        None => Ok(Scenario::all()),
    }
}

fn report(reports: Vec<SuiteReport>) -> Out {
    let passed = reports.iter().all(|r| r.passed);
    let v = json!({ "passed": passed, "suites": reports });
    if passed {
        Ok(v)
    } else {
        Err(CliError::Failed(v))
    }
}

fn bba_check(name: Option<&str>, samples: usize) -> Out {
    let scs = scenarios(name)?;
    let reports = scs.par_iter().map(|sc| suites::run_weylalg(sc, samples)).collect();
    report(reports)
}

fn verify(suite: &str, name: Option<&str>) -> Out {
    let chosen: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![<Suite as clap::ValueEnum>::from_str(suite, true).map_err(|_| {
            usage(format!("unknown suite `{suite}` (expected all, liecore, gammaring, ema, weylmod or weylalg)"))
        })?]
    };
    let scs = scenarios(name)?;
    let jobs: Vec<(Suite, &Scenario)> = scs.iter().flat_map(|sc| chosen.iter().map(move |s| (*s, sc))).collect();
    let reports = jobs.par_iter().map(|(s, sc)| suites::run(*s, sc)).collect();
    report(reports)
}

fn dispatch(cmd: &Command) -> Out {
    match cmd {
        Command::Fold { scenario } => fold(scenario),
        Command::LocalWeyl(b) => build(b).map(|bt| module_json(&bt)),
        Command::Simple(b) => simple(b),
        Command::Char(b) => character(b),
        Command::Tensor { scenario, psi, n } => tensor_cmd(scenario, psi, *n),
        Command::Annihilator(b) => annihilator(b),
        Command::Bba { scenario, lambda } => bba(scenario, lambda),
        Command::BbaCheck { scenario, samples } => bba_check(scenario.as_deref(), *samples),
        Command::Verify { suite, scenario } => verify(suite, scenario.as_deref()),
    }
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(&cli.command) {
        Ok(v) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Err(CliError::Failed(v)) => {
            print(&v);
            ExitCode::from(1)
        }
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e}");
            eprintln!("scenarios: {}", NAMES.join(", "));
            ExitCode::from(2)
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
