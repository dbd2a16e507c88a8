mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use relmod_core::catmodel::{load_datum, load_datum_unchecked, DatumError, Degree, ModularDatum};
use relmod_core::checks::{self, CheckJob, Status, Verdict, Witness};
use relmod_core::closure::{self, load_closure, CertifyError, ClosureDatum, ClosureError};
use relmod_core::sl21::{self, Convention, Sl21Error, WeightLabel};
use serde_json::json;

use report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "relmod", version, about = "Exact checks for relative (pre-)modular category data")]
struct Cli {
    /// Datum file (relmod-datum/1 for `check`, relmod-closure/1 for `closure`).
    #[arg(long, global = true)]
    datum: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Treat hypothesis-not-met verdicts as success.
    #[arg(long, global = true)]
    allow_unmet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decision procedures on a modular datum.
    #[command(subcommand)]
    Check(CheckCmd),
    /// The U_q^H sl(2|1) example.
    #[command(subcommand)]
    Sl21(Sl21Cmd),
    /// Strong-decomposition closure of a finite presentation.
    #[command(subcommand)]
    Closure(ClosureCmd),
}

#[derive(Args, Debug)]
struct DegreeArg {
    /// Generic degree g.
    #[arg(long)]
    g: String,
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    /// S'_{g,g} non-degenerate.
    Nondeg(DegreeArg),
    /// Z-trivial Muger center criterion.
    Dmug(DegreeArg),
    /// Relative modularity identity for (g, h).
    Modularity {
        #[arg(long)]
        g: String,
        /// Defaults to g.
        #[arg(long)]
        h: Option<String>,
    },
    /// Translation group, psi, dims, twists and block well-formedness.
    Premodular,
    /// Every present S-block shares one rank (needs blocks without zero entries).
    RankConstancy,
    /// Every check whose blocks are present.
    All,
}

#[derive(Subcommand, Debug)]
enum Sl21Cmd {
    /// Write the symbolic datum for degrees +-alpha.
    Emit {
        #[arg(long)]
        ell: i64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Defining relations on A_k.
    Relations {
        #[arg(long)]
        ell: i64,
        /// Every 1 <= k <= ell-1 when absent.
        #[arg(long)]
        k: Option<i64>,
        #[arg(long)]
        convention: Option<Convention>,
    },
    /// A (x) V(lambda^k_{alpha+i}).
    Fuse {
        #[arg(long)]
        ell: i64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        i: u32,
    },
    /// Bound the rank of S_g via the tau-pairing of typical labels.
    RankBound {
        #[arg(long)]
        ell: i64,
    },
}

#[derive(Subcommand, Debug)]
enum ClosureCmd {
    Check {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        cor: u8,
    },
    /// Search for a strong-decomposition certificate and replay it.
    Certify {
        /// Expression over the datum's atoms, e.g. `retract(a*b)+v^2`.
        #[arg(long)]
        expr: String,
        /// Maximum nested rule rewrites per branch.
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
}

#[derive(Debug)]
enum CliError {
    /// Bad arguments or malformed input: exit 2.
    Usage(String),
    /// Invariant breach inside the tool: exit 3.
    Internal(String),
}

impl From<DatumError> for CliError {
    fn from(e: DatumError) -> Self {
        CliError::Usage(format!("malformed datum: {e}"))
    }
}

impl From<ClosureError> for CliError {
    fn from(e: ClosureError) -> Self {
        CliError::Usage(match e.path() {
            Some(_) => format!("malformed closure datum: {e}"),
            None => e.to_string(),
        })
    }
}

impl From<Sl21Error> for CliError {
    fn from(e: Sl21Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn datum_path(p: &Option<PathBuf>) -> Result<&Path, CliError> {
    p.as_deref().ok_or_else(|| CliError::Usage("--datum is required".into()))
}

fn degree(d: &ModularDatum, s: &str) -> Result<Degree, CliError> {
    let g = d.parse_degree(s).map_err(|e| CliError::Usage(format!("--g/--h {s:?}: {e}")))?;
    if d.degree(&g).is_none() {
        return Err(CliError::Usage(format!("degree {g} is not declared in the datum")));
    }
    Ok(g)
}

fn run_check(cli: &Cli, cmd: &CheckCmd, rep: &mut RunReport) -> Result<(), CliError> {
    let path = datum_path(&cli.datum)?;
    // Input checking reports on invalid data instead of refusing it.
    let datum = match cmd {
        CheckCmd::Premodular => load_datum_unchecked(path)?,
        _ => load_datum(path)?,
    };
    let jobs = match cmd {
        CheckCmd::Nondeg(a) => vec![CheckJob::Nondegeneracy(degree(&datum, &a.g)?)],
        CheckCmd::Dmug(a) => vec![CheckJob::Dmug(degree(&datum, &a.g)?)],
        CheckCmd::Modularity { g, h } => {
            let g = degree(&datum, g)?;
            let h = match h {
                Some(h) => degree(&datum, h)?,
                None => g.clone(),
            };
            vec![CheckJob::Modularity(g, h)]
        }
        CheckCmd::Premodular => vec![CheckJob::Premodular],
        CheckCmd::RankConstancy => vec![CheckJob::RankConstancy],
        CheckCmd::All => checks::all_jobs(&datum),
    };
    // Order of the output follows `jobs`, not completion.
    rep.verdicts = jobs.par_iter().map(|j| checks::run_job(&datum, j)).collect();
    rep.result = Some(json!({"datum": datum.name, "jobs": jobs.len()}));
    Ok(())
}

fn run_sl21(cmd: &Sl21Cmd, rep: &mut RunReport) -> Result<(), CliError> {
    match cmd {
        Sl21Cmd::Emit { ell, out } => {
            let d = sl21::emit_datum(*ell)?;
            let text = d.to_json();
            let size = d.degrees[0].size();
            match out {
                Some(p) => {
                    std::fs::write(p, &text)
                        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?;
                    rep.text =
                        format!("wrote sl(2|1) datum at ell = {ell} ({size} labels per degree) to {}\n", p.display());
                }
                None => rep.text = text.clone() + "\n",
            }
            rep.result = Some(
                json!({"ell": ell, "labels_per_degree": size, "out": out.as_ref().map(|p| p.display().to_string())}),
            );
            let mut v = Verdict::new("sl21-emit", Status::Holds);
            let violations = relmod_core::catmodel::validate(&d);
            if !violations.is_empty() {
                return Err(CliError::Internal(format!("emitted datum violates {}", violations[0].clause)));
            }
            v.notes.push("emitted datum passes validation".into());
            rep.verdicts.push(v);
        }
        Sl21Cmd::Relations { ell, k, convention } => {
            let conv = convention.unwrap_or_else(sl21::default_convention);
            let l = relmod_core::exactnum::check_ell(*ell).map_err(|e| CliError::Usage(e.to_string()))?;
            let ks: Vec<i64> = match k {
                Some(k) => vec![*k],
                None => (1..i64::from(l)).collect(),
            };
            let mut lines = String::new();
            let mut mods = Vec::new();
            for k in ks {
                let m = sl21::build_ak(k, *ell, conv)?;
                let r = sl21::check_relations(&m);
                lines.push_str(&format!(
                    "{} (dim {}, convention {}): {}/{} relations hold\n",
                    m.name,
                    m.dim(),
                    conv,
                    r.outcomes.iter().filter(|o| o.holds).count(),
                    r.outcomes.len()
                ));
                mods.push(json!({"module": m.name, "k": k, "dim": m.dim(), "all_hold": r.all_hold()}));
                let mut v = r.to_verdict();
                v.check = format!("{} k={k}", v.check);
                rep.verdicts.push(v);
            }
            rep.text = lines;
            rep.result = Some(json!({"ell": ell, "convention": conv.as_str(), "modules": mods}));
        }
        Sl21Cmd::Fuse { ell, k, i } => {
            let l = relmod_core::exactnum::check_ell(*ell).map_err(|e| CliError::Usage(e.to_string()))?;
            if *k + 2 > l || *i >= l {
                return Err(CliError::Usage(format!("need 0 <= k <= {} and 0 <= i <= {}", l - 2, l - 1)));
            }
            let x = WeightLabel::new(*k, *i);
            let direct = sl21::fuse_a(&x, l)?;
            let by_chars = sl21::fuse_a_by_characters(&x, l)?;
            let agree = direct == by_chars;
            rep.text = format!("A (x) {x} = {direct}\n  by characters: {by_chars}\n");
            rep.result = Some(json!({
                "ell": l,
                "input": x.to_string(),
                "fuse_a": direct.to_string(),
                "by_characters": by_chars.to_string(),
                "agree": agree,
            }));
            let v = if agree {
                Verdict::new("sl21-fuse", Status::Holds)
            } else {
                Verdict::new("sl21-fuse", Status::Fails).witness(Witness::new(
                    "disagreement",
                    vec![k.to_string(), i.to_string()],
                    format!("label rule gives {direct}, characters give {by_chars}"),
                ))
            };
            rep.verdicts.push(v);
        }
        Sl21Cmd::RankBound { ell } => {
            let r = sl21::rank_bound_analysis(*ell)?;
            rep.text = r.to_text();
            rep.result = Some(r.to_json());
            let status = if r.not_relative_modular && r.fixed_point_free() { Status::Holds } else { Status::Fails };
            let mut v = Verdict::new("sl21-rank-bound", status);
            v.notes.push(r.verdict.clone());
            rep.verdicts.push(v);
        }
    }
    Ok(())
}

fn run_closure(cli: &Cli, cmd: &ClosureCmd, rep: &mut RunReport) -> Result<(), CliError> {
    let d: ClosureDatum = load_closure(datum_path(&cli.datum)?)?;
    match cmd {
        ClosureCmd::Check { cor } => {
            let v = if *cor == 1 { closure::check_cor1(&d)? } else { closure::check_cor2(&d)? };
            rep.result = Some(json!({"datum": d.name, "cor": cor}));
            rep.verdicts.push(v);
        }
        ClosureCmd::Certify { expr, depth } => match closure::certify(&d, expr, *depth) {
            Ok(c) => {
                closure::replay(&d, &c).map_err(|e| CliError::Internal(format!("certificate does not replay: {e}")))?;
                rep.text = c.to_text();
                let mut j = c.to_json();
                j["replay"] = json!("ok");
                rep.result = Some(j);
                let mut v = Verdict::new("closure-certify", Status::Holds);
                v.notes.push(format!("{} has strong decomposition; certificate replays", c.target));
                rep.verdicts.push(v);
            }
            Err(CertifyError::Closure(e)) => return Err(e.into()),
            Err(e) => {
                let (name, at) = match &e {
                    CertifyError::Stuck { expr } => ("stuck", expr.clone()),
                    CertifyError::DepthExhausted { expr, .. } => ("depth exhausted", expr.clone()),
                    CertifyError::Preconditions(_) => ("preconditions", String::new()),
                    CertifyError::Closure(_) => unreachable!(),
                };
                rep.result = Some(json!({"target": expr, "depth": depth, "failure": name, "at": at}));
                rep.verdicts.push(Verdict::new("closure-certify", Status::Fails).witness(Witness::new(
                    name,
                    vec![at],
                    e.to_string(),
                )));
            }
        },
    }
    Ok(())
}

fn run(cli: &Cli, rep: &mut RunReport) -> Result<(), CliError> {
    match &cli.command {
        Command::Check(c) => run_check(cli, c, rep),
        Command::Sl21(c) => run_sl21(c, rep),
        Command::Closure(c) => run_closure(cli, c, rep),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("RELMOD_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // Fails only if a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let invocation: Vec<String> = std::env::args().skip(1).collect();
    let mut rep = RunReport::new(invocation);
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&cli, &mut rep)));
    let code = match outcome {
        Ok(Ok(())) => rep.exit_code(cli.allow_unmet),
        Ok(Err(CliError::Usage(m))) => {
            eprintln!("error: {m}");
            2
        }
        Ok(Err(CliError::Internal(m))) => {
            eprintln!("internal error: {m}");
            3
        }
        Err(_) => {
            eprintln!("internal error: panic");
            3
        }
    };
    if code < 2 {
        let body = match cli.format {
            Format::Text => rep.to_text(),
            Format::Json => serde_json::to_string_pretty(&rep.to_json(cli.allow_unmet)).expect("serializable") + "\n",
        };
        // A closed pipe downstream is not an error of ours.
        let _ = std::io::stdout().lock().write_all(body.as_bytes());
    }
    ExitCode::from(code as u8)
}
