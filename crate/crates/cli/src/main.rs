use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dmod_core::exact::rational::{int, is_integral};
use dmod_core::formal::ElementaryModule;
use dmod_core::fracpow::{
    check_addition, check_heisenberg, check_radon_intertwiner, heisenberg_depth, power_table, symbol_from_connection,
};
use dmod_core::global::{euler_char, fourier_rank, radon_rank, rigidity_index};
use dmod_core::json::*;
use dmod_core::tate::{classify_growth, invariants_of, GrowthOperator, Realization, DEFAULT_TRUNC};
use dmod_core::transforms::{fourier_local_regular, ClassLabel};
use dmod_core::{
    fmt_rat, fourier_bookkeeping, fourier_formal_type, parse_rat, radon_formal_type, radon_local,
    radon_local_crosscheck, Error, Flavor, FormalModule, Rat, TruncatedPuiseuxSeries,
};

#[derive(Parser)]
#[command(name = "dmod", version, about = "Exact local invariants of formal differential modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    #[value(name = "0-infty")]
    ToInfinity,
    #[value(name = "infty-0")]
    FromInfinity,
    #[value(name = "infty-infty")]
    InfinityInfinity,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformArg {
    Fourier,
    Radon,
}

#[derive(Subcommand)]
enum Command {
    /// Slopes, rank, irregularity and canonical form of a module.
    Analyze {
        module: PathBuf,
        /// Also read the slopes of the transform off the oracle at this window.
        #[arg(long)]
        trunc: Option<String>,
    },
    /// Local Fourier transform of a module.
    Fourier {
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        /// Class label `x` of the finite point.
        #[arg(long, default_value = "0")]
        point: String,
        /// Cross-check rank-one components with the truncated-operator oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        trunc: Option<String>,
        module: PathBuf,
    },
    /// Local Katz-Radon transform of a module.
    Radon {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        crosscheck: bool,
        #[arg(long)]
        trunc: Option<String>,
        module: PathBuf,
    },
    /// Power table of `P = (1/C)(d/dz + f)` and its identity checks.
    Fracpow {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Table depth; defaults to what the checks at `--trunc` need.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value = "20")]
        trunc: String,
        connection: PathBuf,
    },
    /// Rigidity index and Euler characteristic of a formal type.
    Rigidity { formal_type: PathBuf },
    /// Formal type of the Fourier or Katz-Radon transform.
    FormalType {
        #[arg(long, value_enum)]
        transform: TransformArg,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        formal_type: PathBuf,
    },
    /// Contraction or expansion of `z^a d` on a rank-one realization.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        power: String,
        #[arg(long, default_value_t = 4)]
        iters: usize,
        #[arg(long)]
        trunc: Option<String>,
        module: PathBuf,
    },
    /// Run the invariant suite.
    Selftest {
        /// Only checks whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())).into())
}

fn rat_arg(s: &str) -> Result<Rat, Error> {
    parse_rat(s)
}

fn trunc_arg(s: Option<&str>) -> Result<Rat, Error> {
    match s {
        Some(s) => {
            let t = parse_rat(s)?;
            if t <= int(0) {
                return Err(Error::InvalidInput("--trunc must be positive".into()));
            }
            Ok(t)
        }
        None => Ok(int(DEFAULT_TRUNC)),
    }
}

fn single_component(m: &FormalModule) -> Result<&ElementaryModule, Error> {
    match m.components() {
        [e] if e.unip() == 1 => Ok(e),
        _ => Err(Error::InvalidInput(
            "this operation takes a rank-one module with a single component".into(),
        )),
    }
}

/// Oracle readout of `Four(0, inf)` for one component.
fn oracle_json(e: &ElementaryModule, trunc: &Rat) -> Result<Value, Error> {
    let real = Realization::for_module(e, trunc)?;
    let inv = invariants_of(&real)?;
    Ok(json!({
        "component": elementary_to_json(e),
        "rank": inv.rank_out,
        "slopes": slopes_to_json(&inv.slopes_out),
        "irregularity": rat_to_json(&inv.irregularity_out),
        "residue": inv.residue_out.as_ref().map(rat_to_json),
        "annihilator": operator_to_json(&inv.annihilator.operator),
        "precision": rat_to_json(&inv.precision),
    }))
}

fn analyze(path: &Path, trunc: Option<&str>) -> anyhow::Result<Value> {
    let m = module_from_json(&read_json(path)?)?;
    let mut out = json!({
        "rank": m.rank(),
        "irregularity": rat_to_json(&m.irregularity()?),
        "slopes": slopes_to_json(&m.slopes()),
        "canonical": module_to_json(&m),
        "display": m.to_string(),
        "hor_rank": m.hor_rank(),
        "phi_mid_rank": m.phi_mid_rank(),
        "phi": module_to_json(&m.psi_to_phi()),
        "precision": "exact",
    });
    if let Some(t) = trunc {
        let t = trunc_arg(Some(t))?;
        let oracle: Vec<Value> = m
            .components()
            .iter()
            .map(|e| oracle_json(e, &t))
            .collect::<Result<_, _>>()?;
        out["fourier_oracle"] = Value::Array(oracle);
        out["precision"] = rat_to_json(&t);
    }
    Ok(out)
}

fn fourier(flavor: FlavorArg, point: &str, oracle: bool, trunc: Option<&str>, path: &Path) -> anyhow::Result<Value> {
    let m = module_from_json(&read_json(path)?)?;
    let x = rat_arg(point)?;
    let fl = match flavor {
        FlavorArg::ToInfinity => Flavor::ToInfinity(x.clone()),
        FlavorArg::FromInfinity => Flavor::FromInfinity(x.clone()),
        FlavorArg::InfinityInfinity => Flavor::InfinityInfinity,
    };
    let book = fourier_bookkeeping(&m, &fl)?;
    let exact = match flavor {
        FlavorArg::ToInfinity if m.is_regular() => Some(fourier_local_regular(&m, &x)?),
        _ => None,
    };
    let mut out = json!({
        "mode": if exact.is_some() { "exact" } else { "bookkeeping" },
        "module": exact.as_ref().map(module_to_json),
        "rank": book.rank_out,
        "irregularity": rat_to_json(&book.irr_out),
        "slopes": slopes_to_json(&book.slopes_out),
        "class": match &book.class_label {
            ClassLabel::At(x) => fmt_rat(x),
            ClassLabel::Infinity => "inf".to_string(),
        },
        "precision": "exact",
    });
    if m.components().iter().any(|c| c.unip() > 1) && exact.is_some() {
        out["notes"] = json!(["unipotent blocks of size > 1 follow the derived Kummer rule"]);
    }
    if oracle {
        if !matches!(flavor, FlavorArg::ToInfinity) {
            return Err(Error::InvalidInput("the oracle computes the (x, inf) flavor only".into()).into());
        }
        let t = trunc_arg(trunc)?;
        let mut reports = Vec::new();
        let mut agree = true;
        for e in m.components() {
            let rep = oracle_json(e, &t)?;
            let b = fourier_bookkeeping(&FormalModule::new(vec![e.clone()]), &Flavor::ToInfinity(int(0)))?;
            agree &= rep["rank"] == json!(b.rank_out) && rep["slopes"] == slopes_to_json(&b.slopes_out);
            if let (true, Some(r)) = (e.is_regular(), rep["residue"].as_str()) {
                // the regular rule predicts the residue modulo Z
                let predicted = fourier_local_regular(&FormalModule::new(vec![e.clone()]), &int(0))?;
                agree &= is_integral(&(parse_rat(r)? - predicted.components()[0].residue()));
            }
            reports.push(rep);
        }
        out["oracle"] = json!({ "agree": agree, "components": reports });
        out["precision"] = rat_to_json(&t);
    }
    Ok(out)
}

fn radon(lambda: &str, crosscheck: bool, trunc: Option<&str>, path: &Path) -> anyhow::Result<Value> {
    let m = module_from_json(&read_json(path)?)?;
    let lambda = rat_arg(lambda)?;
    let out_m = radon_local(&m, &lambda)?;
    let mut out = json!({
        "mode": "exact",
        "module": module_to_json(&out_m),
        "rank": out_m.rank(),
        "irregularity": rat_to_json(&out_m.irregularity()?),
        "slopes": slopes_to_json(&out_m.slopes()),
        "lambda": rat_to_json(&lambda),
        "precision": "exact",
    });
    if crosscheck {
        let t = trunc_arg(trunc)?;
        let e = single_component(&m)?;
        let f = e.exp().add(&TruncatedPuiseuxSeries::monomial(e.residue().clone(), int(-1)));
        let rep = radon_local_crosscheck(&f, &int(0), &lambda, &t)?;
        out["crosscheck"] = json!({
            "agree": rep.agree,
            "symbolic": module_to_json(&rep.symbolic),
            "slopes_twisted": slopes_to_json(&rep.slopes_twisted),
            "slopes_shifted": slopes_to_json(&rep.slopes_shifted),
            "det_twisted": series_to_json(&rep.det_twisted),
            "det_shifted": series_to_json(&rep.det_shifted),
        });
        out["precision"] = rat_to_json(&rep.precision);
    }
    Ok(out)
}

fn fracpow(alpha: &str, depth: Option<usize>, trunc: &str, path: &Path) -> anyhow::Result<Value> {
    let (exp, residue, _) = connection_from_json(&read_json(path)?)?;
    let f = exp.add(&TruncatedPuiseuxSeries::monomial(residue, int(-1)));
    let alpha = rat_arg(alpha)?;
    let tau = trunc_arg(Some(trunc))?;
    let sym = symbol_from_connection(&f, f.ram())?;
    let demand = heisenberg_depth(&sym, &alpha, &tau).max(6);
    let depth = depth.unwrap_or(demand);
    let table = power_table(&sym, depth);
    let addition = check_addition(&table, 6);
    let heis = check_heisenberg(&sym, &table, &alpha, &tau);
    let inter = check_radon_intertwiner(&f, &alpha, &tau)?;
    let heis_json = match heis {
        Ok(h) => json!({
            "passed": h.passed,
            "commutes": h.commutes,
            "z_rule": h.z_rule,
            "brute_force": h.brute_force,
            "failures": h.failures,
        }),
        Err(e @ Error::InsufficientDepth(_)) => json!({ "passed": false, "error": e.to_string() }),
        Err(e) => return Err(e.into()),
    };
    Ok(json!({
        "ram": sym.ram,
        "d": sym.d,
        "c": rat_to_json(&sym.c),
        "symbol": sym.p.iter().map(unipoly_to_json).collect::<Vec<_>>(),
        "depth": table.depth(),
        "table": table.entries.iter().map(bipoly_to_json).collect::<Vec<_>>(),
        "addition": { "passed": addition.passed, "checked": addition.checked, "first_failure": addition.first_failure },
        "heisenberg": heis_json,
        "intertwiner": {
            "passed": inter.passed,
            "vectors": inter.vectors_checked,
            "depth": inter.depth,
            "failures": inter.failures,
        },
        "alpha": rat_to_json(&alpha),
        "precision": rat_to_json(&tau),
    }))
}

fn or_null<T: Into<Value>>(r: Result<T, Error>) -> Value {
    r.map(Into::into).unwrap_or(Value::Null)
}

fn rigidity(path: &Path) -> anyhow::Result<Value> {
    let ft = formal_type_from_json(&read_json(path)?)?;
    Ok(json!({
        "rigidity_index": rigidity_index(&ft)?,
        "euler_char": euler_char(&ft)?,
        "rank": ft.rank(),
        "fourier_rank": or_null(fourier_rank(&ft)),
        "radon_rank": or_null(radon_rank(&ft)),
        "precision": "exact",
    }))
}

fn formal_type(transform: TransformArg, lambda: Option<&str>, path: &Path) -> anyhow::Result<Value> {
    let ft = formal_type_from_json(&read_json(path)?)?;
    let (t, rank) = match transform {
        TransformArg::Fourier => (fourier_formal_type(&ft)?, fourier_rank(&ft)?),
        TransformArg::Radon => {
            let l = lambda.ok_or_else(|| Error::InvalidInput("--lambda is required for radon".into()))?;
            (radon_formal_type(&ft, &rat_arg(l)?)?, radon_rank(&ft)?)
        }
    };
    let mut out = transformed_to_json(&t);
    out["rank_formula"] = json!(rank);
    if let Some(out_ft) = t.formal_type() {
        out["rigidity_in"] = or_null(rigidity_index(&ft));
        out["rigidity_out"] = or_null(rigidity_index(&out_ft));
    }
    out["precision"] = json!("exact");
    Ok(out)
}

fn classify(power: &str, iters: usize, trunc: Option<&str>, path: &Path) -> anyhow::Result<Value> {
    let m = module_from_json(&read_json(path)?)?;
    let e = single_component(&m)?;
    let a = rat_arg(power)?;
    let t = trunc_arg(trunc)?;
    let real = Realization::for_module(e, &t)?;
    let v = classify_growth(&GrowthOperator::ZPowD(a.clone()), &real, iters)?;
    Ok(json!({
        "operator": format!("z^({}) d", fmt_rat(&a)),
        "slope": rat_to_json(&e.slope()),
        "verdict": format!("{:?}", v.verdict),
        "forward_orders": v.forward.iter().map(rat_to_json).collect::<Vec<_>>(),
        "inverse_orders": v.inverse.iter().map(rat_to_json).collect::<Vec<_>>(),
        "iterations": iters,
        "precision": rat_to_json(&t),
    }))
}

fn selftest(filter: Option<&str>) -> (Value, bool) {
    let checks = match filter {
        Some(f) => dmod_core::selftest::run_filtered(f),
        None => dmod_core::selftest::run_selftest(),
    };
    let passed = checks.iter().all(|c| c.passed);
    let list: Vec<Value> = checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail, "millis": c.millis as u64 }))
        .collect();
    (
        json!({ "passed": passed, "count": list.len(), "checks": list, "precision": "exact" }),
        passed,
    )
}

fn run(cli: Cli) -> anyhow::Result<(Value, bool)> {
    let ok = |v| Ok((v, true));
    match cli.command {
        Command::Analyze { module, trunc } => ok(analyze(&module, trunc.as_deref())?),
        Command::Fourier {
            flavor,
            point,
            oracle,
            trunc,
            module,
        } => ok(fourier(flavor, &point, oracle, trunc.as_deref(), &module)?),
        Command::Radon {
            lambda,
            crosscheck,
            trunc,
            module,
        } => ok(radon(&lambda, crosscheck, trunc.as_deref(), &module)?),
        Command::Fracpow {
            alpha,
            depth,
            trunc,
            connection,
        } => ok(fracpow(&alpha, depth, &trunc, &connection)?),
        Command::Rigidity { formal_type: p } => ok(rigidity(&p)?),
        Command::FormalType {
            transform,
            lambda,
            formal_type: p,
        } => ok(formal_type(transform, lambda.as_deref(), &p)?),
        Command::Classify {
            power,
            iters,
            trunc,
            module,
        } => ok(classify(&power, iters, trunc.as_deref(), &module)?),
        Command::Selftest { filter } => Ok(selftest(filter.as_deref())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((v, passed)) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&v).expect("serializable"));
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let (kind, code) = match e.downcast_ref::<Error>() {
                Some(d) => (d.kind(), 2),
                None => ("Internal", 1),
            };
            let report = json!({ "error": kind, "message": format!("{e:#}") });
            eprintln!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            ExitCode::from(code)
        }
    }
}
