//! Command-line front end. JSON goes to `out`, diagnostics to `err`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use reglab_core::brauer::{dihedral_relation_in, relation_lattice, BrauerRelation};
use reglab_core::cohomology::{tate_with, Resolution};
use reglab_core::gmodules::{random_module, random_module_hom, GModule, Profile};
use reglab_core::regulator::{regulator_constant_with, verify_identity, Identity, IdentityInputs, Method};
use serde_json::{json, Value};

use crate::error::{CliError, EXIT_CHECK_FAILED, EXIT_OK};
use crate::format::{
    group_json, int_json, load_module, load_relation, module_digest, module_value, parse_group_arg, parse_subgroup,
    relation_value,
};
use crate::report::{factorization_map, render_rational, Report, Summary};
use crate::suites::{run_suite, SuiteParams};

#[derive(Debug, Parser)]
#[command(name = "reglab", version, about = "Regulator constants and Tate cohomology of integral group-ring modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a module file describes a G-module.
    Validate {
        #[arg(long)]
        module: PathBuf,
    },
    /// Tate cohomology of a module restricted to a subgroup.
    Cohomology {
        #[arg(long)]
        module: PathBuf,
        /// Element indices, e.g. "0,3".
        #[arg(long, allow_hyphen_values = true)]
        subgroup: String,
        /// A range "-1..2" or a list "-1,0,4".
        #[arg(long, default_value = "-1..2", allow_hyphen_values = true)]
        degrees: String,
    },
    /// Regulator constant of a module with respect to a Brauer relation.
    Regulator {
        #[arg(long)]
        module: PathBuf,
        /// Defaults to the dihedral relation when the group is dihedral.
        #[arg(long)]
        relation: Option<PathBuf>,
        #[arg(long, default_value = "both")]
        method: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A basis of Brauer relations of a group.
    Relations {
        #[arg(long)]
        group: String,
    },
    /// Verify one identity on one module.
    Check {
        #[arg(long)]
        identity: String,
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        relation: Option<PathBuf>,
        #[arg(long)]
        prime: Option<u64>,
        /// Subgroups separated by ';', elements by ','.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Draw a seeded random module.
    RandomModule {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "mixed")]
        profile: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<usize>>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    crate::error::EXIT_INPUT
                }
            };
        }
    };
    let result = limit_cols().and_then(|limit| dispatch(cli.command, limit, out, err));
    match result {
        Ok(code) => code,
        Err(e) => {
            let code = e.exit_code();
            let _ = writeln!(err, "error: {e}");
            let _ = print_json(out, &json!({ "error": { "code": code, "message": e.to_string() } }));
            code
        }
    }
}

fn limit_cols() -> Result<usize, CliError> {
    match std::env::var("REGLAB_LIMIT_COLS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Input(format!("REGLAB_LIMIT_COLS: {v:?} is not a positive integer"))),
        Err(_) => Ok(crate::DEFAULT_LIMIT_COLS),
    }
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    writeln!(out, "{text}").map_err(|e| CliError::Input(format!("write: {e}")))
}

fn check_width(what: &str, width: usize, limit: usize) -> Result<(), CliError> {
    if width > limit {
        return Err(CliError::Limit(format!("{what}: matrix width {width} exceeds {limit}")));
    }
    Ok(())
}

fn relation_for(m: &GModule, path: Option<&Path>) -> Result<BrauerRelation, CliError> {
    let theta = match path {
        Some(p) => load_relation(p)?,
        None if m.group().dihedral_generators().is_some() => dihedral_relation_in(m.group())?,
        None => return Err(CliError::Input("--relation is required for non-dihedral groups".into())),
    };
    if theta.group() != m.group() {
        return Err(CliError::Input("relation and module live over different groups".into()));
    }
    Ok(theta)
}

fn parse_degrees(s: &str) -> Result<Vec<i64>, CliError> {
    let bad = || CliError::Input(format!("degrees: expected \"a..b\" or a comma list, got {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if a > b || b - a > 64 {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| bad())).collect()
}

fn dispatch(cmd: Command, limit: usize, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Validate { module } => {
            let m = load_module(&module)?;
            m.validate()?;
            let ab = m.as_abelian_group();
            print_json(
                out,
                &json!({
                    "valid": true,
                    "group_order": m.group().order(),
                    "rank": m.ambient_rank(),
                    "free_rank": ab.free_rank(),
                    "torsion": ab.torsion_divisors().iter().map(int_json).collect::<Vec<_>>(),
                    "module_digest": module_digest(&m),
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Cohomology { module, subgroup, degrees } => {
            let m = load_module(&module)?;
            let h = parse_subgroup(m.group(), &subgroup)?;
            let degrees = parse_degrees(&degrees)?;
            let res = Resolution::new(m.group(), &h)?;
            let n = m.ambient_rank();
            let terms = res.generators().len().max(res.relator_count()).max(res.kernel_generator_count()).max(h.order());
            check_width("cohomology", n * terms, limit)?;
            let mut rows = Vec::new();
            for i in degrees {
                let t = tate_with(&m, &h, i, Some(&res))?;
                rows.push(json!({
                    "degree": i,
                    "window_degree": t.window_degree,
                    "divisors": t.divisors.iter().map(int_json).collect::<Vec<_>>(),
                    "order": int_json(&t.order),
                }));
            }
            print_json(
                out,
                &json!({ "subgroup": h.elements(), "groups": rows, "module_digest": module_digest(&m) }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Regulator { module, relation, method, seed } => {
            let m = load_module(&module)?;
            let method = Method::from_str(&method)?;
            let theta = relation_for(&m, relation.as_deref())?;
            check_width("regulator", m.ambient_rank() * m.group().order(), limit)?;
            let c = regulator_constant_with(&m, &theta, method, seed)?;
            print_json(
                out,
                &json!({
                    "value": render_rational(&c.value),
                    "factorization": factorization_map(&c),
                    "method": format!("{method:?}").to_lowercase(),
                    "seed": seed,
                    "relation": relation_value(&theta)["terms"].clone(),
                    "module_digest": module_digest(&m),
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Relations { group } => {
            let g = parse_group_arg(&group)?;
            let basis = relation_lattice(&g)?;
            let classes = g.subgroup_classes()?;
            print_json(
                out,
                &json!({
                    "group": group_json(&g),
                    "subgroup_classes": classes.iter().map(|c| c.representative.elements().to_vec()).collect::<Vec<_>>(),
                    "rank": basis.len(),
                    "basis": basis.iter().map(|r| relation_value(r)["terms"].clone()).collect::<Vec<_>>(),
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Check { identity, module, relation, prime, family, seed } => {
            let id = Identity::from_str(&identity)?;
            let m = load_module(&module)?;
            check_width("check", m.ambient_rank() * m.group().order(), limit)?;
            let mut inputs = IdentityInputs::new(m.clone());
            inputs.seed = seed;
            inputs.prime = prime;
            if relation.is_some() {
                inputs.relation = Some(relation_for(&m, relation.as_deref())?);
            }
            if let Some(f) = family {
                let subs = f
                    .split(';')
                    .map(|s| parse_subgroup(m.group(), s))
                    .collect::<Result<Vec<_>, _>>()?;
                inputs.family = Some(subs);
            }
            if id == Identity::Dcf {
                inputs.hom = Some(random_module_hom(&m, seed)?);
            }
            let report = match verify_identity(id, &inputs) {
                Ok(r) => Report::from_identity(&r, seed),
                Err(reglab_core::Error::Internal(msg)) => {
                    return Err(CliError::Core(reglab_core::Error::Internal(msg)));
                }
                Err(e) => return Err(e.into()),
            }
            .with_digest(&module_digest(&m));
            print_json(out, &serde_json::to_value(&report).expect("serializable"))?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::RandomModule { group, profile, seed, out: path } => {
            let g = parse_group_arg(&group)?;
            let profile = Profile::from_str(&profile)?;
            let m = random_module(&g, profile, seed)?;
            let v = module_value(&m);
            match path {
                Some(p) => {
                    let text = serde_json::to_string_pretty(&v).expect("serializable");
                    std::fs::write(&p, text + "\n").map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
                    print_json(
                        out,
                        &json!({ "out": p.display().to_string(), "module_digest": module_digest(&m), "rank": m.ambient_rank() }),
                    )?;
                }
                None => print_json(out, &v)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify { suite, q, trials, seed } => {
            let params = SuiteParams { q, trials, seed, limit_cols: limit };
            let run = run_suite(&suite, &params)?;
            let fatal = run.reports.iter().position(|r| r.fatal.is_some());
            let shown = match fatal {
                Some(i) => &run.reports[..=i],
                None => &run.reports[..],
            };
            let summary = Summary::of(shown);
            let mut doc = json!({
                "suite": run.suite,
                "q": run.q,
                "trials": run.trials,
                "seed": run.seed,
                "reports": shown,
                "summary": summary,
            });
            if let Some(i) = fatal {
                let dump = run.reports[i].fatal.clone().unwrap_or(Value::Null);
                doc["aborted"] = dump.clone();
                let _ = writeln!(err, "cross-method disagreement, aborting: {}", serde_json::to_string(&dump).expect("json"));
            }
            print_json(out, &doc)?;
            let _ = writeln!(
                err,
                "suite {}: {} checks, {} pass, {} fail, {} error",
                run.suite, summary.total, summary.pass, summary.fail, summary.error
            );
            Ok(if fatal.is_none() && summary.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}
