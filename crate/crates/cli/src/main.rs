mod replay;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use harrop_core::analysis::{analyze, check_strengthenable, AnalysisReport, Verdict};
use harrop_core::engine::{solve, SearchOutcome, Sequent, UnknownReason, DEFAULT_DEPTH};
use harrop_core::lemma::{build_development, StrengtheningPlan};
use harrop_core::syntax::{parse_program, Clause, Goal, Program};
use indexmap::IndexMap;
use serde::Serialize;

use replay::ReplayStatus;

const EXIT_INPUT: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_BLOCKED: u8 = 3;
const EXIT_REJECTED: u8 = 4;

#[derive(Parser)]
#[command(name = "harrop", version, about = "Proof search and strengthening lemmas for hereditary Harrop programs")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct ReplayOpts {
    /// Abella executable (the ABELLA environment variable takes precedence).
    #[arg(long)]
    abella: Option<PathBuf>,
    /// Seconds before a replay is abandoned.
    #[arg(long, default_value_t = 60)]
    timeout: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the context and dependency fixpoints of a program.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a derivation of a goal.
    Solve {
        file: PathBuf,
        goal: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        /// Print the derivation.
        #[arg(long)]
        trace: bool,
        /// Exit with status 2 when the outcome is unknown.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check a strengthening request and emit its Abella development.
    Strengthen {
        file: PathBuf,
        /// Name of the user's context definition.
        #[arg(long)]
        context: Option<String>,
        /// A formula of the user's context; repeatable.
        #[arg(long = "context-formula")]
        context_formulas: Vec<String>,
        /// The clause F to strengthen away.
        #[arg(long)]
        from: Option<String>,
        /// The goal G.
        #[arg(long)]
        goal: Option<String>,
        /// Where to write the `.thm`; its `.sig` and `.mod` go alongside.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replay the written development through Abella.
        #[arg(long)]
        replay: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        tool: ReplayOpts,
    },
    /// Check a `.thm` file with Abella.
    Replay {
        file: PathBuf,
        #[command(flatten)]
        tool: ReplayOpts,
    },
}

/// Failure with a specific exit status.
struct Exit(u8, anyhow::Error);

impl From<anyhow::Error> for Exit {
    fn from(e: anyhow::Error) -> Self {
        Exit(EXIT_INPUT, e)
    }
}

fn load(file: &Path) -> Result<Program> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    parse_program(&text).with_context(|| format!("in {}", file.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_analyze(file: &Path, json: bool, out: Option<&Path>) -> Result<(), Exit> {
    let p = load(file)?;
    let report = AnalysisReport::from_analysis(&analyze(&p));
    let text = if json { report.to_json() + "\n" } else { report.to_string() };
    emit(&text, out)?;
    Ok(())
}

#[derive(Serialize)]
struct SolveReport {
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<UnknownReason>,
    answer: IndexMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<String>,
}

fn cmd_solve(file: &Path, goal: &str, depth: u32, trace: bool, strict: bool, json: bool) -> Result<(), Exit> {
    let p = load(file)?;
    let g = p.parse_goal(goal).context("parsing the goal")?;
    let outcome = solve(&Sequent::new(&p, g), depth).map_err(anyhow::Error::from)?;
    let mut report = SolveReport { outcome: outcome.label(), reason: None, answer: IndexMap::new(), trace: None };
    match &outcome {
        SearchOutcome::Proved(proof) => {
            for (x, t) in &proof.answer {
                report.answer.insert(x.to_string(), t.to_string());
            }
            if trace {
                report.trace = Some(proof.trace.to_string());
            }
        }
        SearchOutcome::Unknown(r) => report.reason = Some(*r),
        SearchOutcome::Refuted => {}
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        match report.reason {
            Some(UnknownReason::DepthBound) => println!("unknown (depth bound {depth} reached)"),
            Some(UnknownReason::NonPattern) => println!("unknown (unification outside the pattern fragment)"),
            None => println!("{}", report.outcome),
        }
        for (x, t) in &report.answer {
            println!("{x} = {t}");
        }
        if let Some(t) = &report.trace {
            print!("{t}");
        }
    }
    if strict && report.reason.is_some() {
        return Err(Exit(EXIT_UNKNOWN, anyhow!("no verdict within depth {depth}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct RunReport {
    verdict: String,
    dependencies: Vec<String>,
    contexts: IndexMap<String, usize>,
    output: Option<String>,
    replay: Option<ReplayStatus>,
}

struct Request {
    context: String,
    formulas: Vec<Clause>,
    from: Clause,
    goal: Goal,
}

/// Flags fill in what the file's `%strengthen` directive leaves open; the directive wins.
fn request(p: &Program, context: Option<&str>, formulas: &[String], from: Option<&str>, goal: Option<&str>) -> Result<Request> {
    let warn = |what: &str| eprintln!("warning: --{what} ignored; the file's %strengthen directive takes precedence");
    let flag_from = from.map(|t| p.parse_clause(t).context("parsing --from")).transpose()?;
    let flag_goal = goal.map(|t| p.parse_goal(t).context("parsing --goal")).transpose()?;
    let flag_formulas = formulas.iter().map(|t| p.parse_context_formula(t).context("parsing --context-formula")).collect::<Result<Vec<_>>>()?;
    let (context, from, goal) = match &p.strengthen {
        Some(d) => {
            if context.is_some_and(|c| c != d.context.as_str()) {
                warn("context");
            }
            if flag_from.as_ref().is_some_and(|f| f.key() != d.from.key()) {
                warn("from");
            }
            if flag_goal.as_ref().is_some_and(|g| g.key() != d.goal.key()) {
                warn("goal");
            }
            (d.context.to_string(), d.from.clone(), d.goal.clone())
        }
        None => (
            context.unwrap_or("user_ctx").to_string(),
            flag_from.ok_or_else(|| anyhow!("no clause to strengthen from: pass --from or add a %strengthen directive"))?,
            flag_goal.ok_or_else(|| anyhow!("no goal: pass --goal or add a %strengthen directive"))?,
        ),
    };
    let formulas = match p.contexts.get(context.as_str()) {
        Some(fs) => {
            if !flag_formulas.is_empty() {
                warn("context-formula");
            }
            fs.clone()
        }
        None => flag_formulas,
    };
    Ok(Request { context, formulas, from, goal })
}

#[allow(clippy::too_many_arguments)]
fn cmd_strengthen(
    file: &Path,
    context: Option<&str>,
    formulas: &[String],
    from: Option<&str>,
    goal: Option<&str>,
    out: Option<&Path>,
    do_replay: bool,
    json: bool,
    tool: &ReplayOpts,
) -> Result<(), Exit> {
    let p = load(file)?;
    let req = request(&p, context, formulas, from, goal)?;
    let check = check_strengthenable(&p, &req.from, &req.goal, &req.formulas).map_err(anyhow::Error::from)?;
    let contexts = check.analysis.contexts.iter().map(|(a, c)| (a.to_string(), c.len())).collect();
    let dependencies = check.analysis.dependencies.get(&check.goal_pred).into_iter().flatten().map(|s| s.to_string()).collect();

    if let Verdict::Blocked(f) = &check.verdict {
        let report = RunReport { verdict: format!("blocked on {f}"), dependencies, contexts, output: None, replay: None };
        if json {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        }
        return Err(Exit(
            EXIT_BLOCKED,
            anyhow!("{} cannot be strengthened from {}: {f} is in S({})", req.goal, req.from, check.goal_pred),
        ));
    }

    let stem = match out {
        Some(o) => o.file_stem().and_then(|s| s.to_str()).unwrap_or("spec").to_string(),
        None => file.file_stem().and_then(|s| s.to_str()).unwrap_or("spec").to_string(),
    };
    let plan = StrengtheningPlan::new(&check, &req.from, &req.goal, &req.context, &req.formulas).map_err(anyhow::Error::from)?;
    let dev = build_development(&p, plan, &stem).map_err(anyhow::Error::from)?;
    let text = dev.render();

    let mut report = RunReport { verdict: "validated".into(), dependencies, contexts, output: None, replay: None };
    match out {
        Some(o) => {
            emit(&text, Some(o))?;
            emit(&dev.sig, Some(&o.with_extension("sig")))?;
            emit(&dev.module, Some(&o.with_extension("mod")))?;
            report.output = Some(o.display().to_string());
        }
        None if !json => print!("{text}"),
        None => {}
    }
    if do_replay {
        let o = out.ok_or_else(|| anyhow!("--replay needs --out"))?;
        report.replay = Some(replay::run(o, tool.abella.as_deref(), Duration::from_secs(tool.timeout)).context("running abella")?);
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else if out.is_some() {
        eprintln!("validated: wrote {}", report.output.as_deref().unwrap_or_default());
    }
    if let Some(ReplayStatus::Rejected { error }) = &report.replay {
        return Err(Exit(EXIT_REJECTED, anyhow!("abella rejected the development: {error}")));
    }
    Ok(())
}

fn cmd_replay(file: &Path, tool: &ReplayOpts) -> Result<(), Exit> {
    if !file.is_file() {
        return Err(anyhow!("no such file: {}", file.display()).into());
    }
    match replay::run(file, tool.abella.as_deref(), Duration::from_secs(tool.timeout)).context("running abella")? {
        ReplayStatus::Accepted => println!("accepted"),
        ReplayStatus::ToolAbsent => println!("tool-absent: abella not found"),
        ReplayStatus::Rejected { error } => {
            println!("rejected: {error}");
            return Err(Exit(EXIT_REJECTED, anyhow!("{error}")));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Analyze { file, json, out } => cmd_analyze(file, *json, out.as_deref()),
        Cmd::Solve { file, goal, depth, trace, strict, json } => cmd_solve(file, goal, *depth, *trace, *strict, *json),
        Cmd::Strengthen { file, context, context_formulas, from, goal, out, replay, json, tool } => cmd_strengthen(
            file,
            context.as_deref(),
            context_formulas,
            from.as_deref(),
            goal.as_deref(),
            out.as_deref(),
            *replay,
            *json,
            tool,
        ),
        Cmd::Replay { file, tool } => cmd_replay(file, tool),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
