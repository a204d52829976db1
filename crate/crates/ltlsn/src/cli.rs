//! Subcommand dispatch, kept free of process state so it can be tested.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use ltlsn_core::translate::{to_propositional_with, Clause, TranslateError, TranslateOptions, DEFAULT_EXPANSION_GUARD};
use ltlsn_core::{
    check, eliminate_until, eval_prop, parse_formula, render_shared, s_set_from_labels, trace, validate, Formula,
    Model, Semantics, Trace,
};

use crate::modelfile::{parse_model, parse_model_unchecked, ModelFileError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_DISAGREE: i32 = 4;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult { exit_code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(exit_code: i32, message: impl std::fmt::Display) -> Self {
        CommandResult { exit_code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ltlsn", version, about = "Temporal logic over threshold diffusion in social networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report which network axioms the model satisfies.
    Validate { model: PathBuf },
    /// Print the diffusion path up to its fixed point.
    Trace { model: PathBuf },
    /// Label the path and print the positions where the formula holds.
    Check { model: PathBuf, formula: String },
    /// Print the propositional translation of the formula.
    Translate {
        model: PathBuf,
        formula: String,
        /// Replace majority atoms by explicit disjunctions.
        #[arg(long)]
        expand_majority: bool,
        /// Largest agent count for which majority atoms are expanded.
        #[arg(long, default_value_t = DEFAULT_EXPANSION_GUARD)]
        guard: usize,
        /// Also print how often each rewrite fired.
        #[arg(long)]
        stats: bool,
    },
    /// Evaluate with all three engines and compare them at every position.
    Xcheck { model: PathBuf, formula: String },
}

/// Runs one command; `args` excludes the program name.
pub fn run<I, S>(args: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("ltlsn".to_string()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandResult { exit_code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                CommandResult::ok(text)
            };
        }
    };
    let outcome = match cli.command {
        Command::Validate { model } => validate_cmd(&model),
        Command::Trace { model } => trace_cmd(&model),
        Command::Check { model, formula } => check_cmd(&model, &formula),
        Command::Translate { model, formula, expand_majority, guard, stats } => {
            translate_cmd(&model, &formula, TranslateOptions { expand_majority, guard }, stats)
        }
        Command::Xcheck { model, formula } => xcheck_cmd(&model, &formula),
    };
    outcome.unwrap_or_else(|failure| failure)
}

type Outcome = Result<CommandResult, CommandResult>;

fn read(path: &Path) -> Result<String, CommandResult> {
    std::fs::read_to_string(path).map_err(|e| CommandResult::fail(EXIT_USAGE, format_args!("{}: {e}", path.display())))
}

fn file_error(path: &Path, e: ModelFileError) -> CommandResult {
    let code = if e.kind.is_syntax() { EXIT_USAGE } else { EXIT_INVALID };
    CommandResult::fail(code, format_args!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<(Model, Trace), CommandResult> {
    let model = parse_model(&read(path)?).map_err(|e| file_error(path, e))?;
    let trace = trace(&model).map_err(|e| CommandResult::fail(EXIT_INVALID, e))?;
    Ok((model, trace))
}

/// Parses `text` and checks that it only names agents of `model`.
fn formula(model: &Model, text: &str) -> Result<Formula, CommandResult> {
    let f = parse_formula(text).map_err(|e| CommandResult::fail(EXIT_USAGE, format_args!("formula: {e}")))?;
    if let Some(a) = f.agents().into_iter().find(|a| !model.agents().contains(a)) {
        return Err(CommandResult::fail(EXIT_USAGE, format_args!("formula: unknown agent `{a}`")));
    }
    Ok(f)
}

fn yes_no(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

fn validate_cmd(path: &Path) -> Outcome {
    let model = parse_model_unchecked(&read(path)?).map_err(|e| file_error(path, e))?;
    let violations = validate(&model);
    let mut out = String::new();
    let edges = model.network().pairs().filter(|(a, b)| a <= b).count();
    let cmp = if model.threshold().strict { ">" } else { ">=" };
    writeln!(out, "agents: {}", model.agent_count()).unwrap();
    writeln!(out, "edges: {edges}").unwrap();
    writeln!(out, "theta: {cmp} {}", model.threshold().theta).unwrap();
    writeln!(out, "initial: {}", model.initial()).unwrap();
    for axiom in ["irreflexivity", "symmetry", "seriality"] {
        let broken: Vec<String> = violations.iter().map(|v| v.to_string()).filter(|v| v.starts_with(axiom)).collect();
        if broken.is_empty() {
            writeln!(out, "{axiom}: ok").unwrap();
        } else {
            writeln!(out, "{axiom}: violated by {}", broken.join(" ")).unwrap();
        }
    }
    if violations.is_empty() {
        out.push_str("valid\n");
        Ok(CommandResult::ok(out))
    } else {
        out.push_str("invalid\n");
        Err(CommandResult { exit_code: EXIT_INVALID, stdout: out, stderr: String::new() })
    }
}

fn trace_cmd(path: &Path) -> Outcome {
    let (_, t) = load(path)?;
    let mut out = String::new();
    for (i, frame) in t.frames().iter().enumerate() {
        writeln!(out, "{i}: {frame}").unwrap();
    }
    writeln!(out, "fixed point at i={}", t.fixed_point_index()).unwrap();
    Ok(CommandResult::ok(out))
}

fn check_cmd(path: &Path, text: &str) -> Outcome {
    let (model, t) = load(path)?;
    let f = formula(&model, text)?;
    let labels = check(&model, &t, &f).map_err(|e| CommandResult::fail(EXIT_USAGE, e))?;
    let s = s_set_from_labels(&labels, &f);
    let holds = s.contains(0, t.fixed_point_index());
    let out = format!("S = {s}\nholds at 0: {}\n", yes_no(holds));
    Ok(CommandResult { exit_code: if holds { EXIT_OK } else { EXIT_FAILS }, stdout: out, stderr: String::new() })
}

fn translate_cmd(path: &Path, text: &str, options: TranslateOptions, stats: bool) -> Outcome {
    let (model, _) = load(path)?;
    let f = formula(&model, text)?;
    let g = eliminate_until(&f, model.agent_count());
    let translation = to_propositional_with(&g, model.agents(), model.threshold(), options).map_err(|e| match e {
        TranslateError::ExpansionGuard { .. } => {
            CommandResult::fail(EXIT_USAGE, format_args!("{e}; raise --guard or drop --expand-majority"))
        }
        other => CommandResult::fail(EXIT_USAGE, other),
    })?;
    let mut out = render_shared(translation.formula.as_formula());
    out.push('\n');
    if stats {
        for clause in Clause::ALL {
            writeln!(out, "rewrite {clause}: {}", translation.stats.count(clause)).unwrap();
        }
        writeln!(out, "rewrites checked: {}", translation.stats.checked).unwrap();
        writeln!(out, "rewrites unchecked: {}", translation.stats.unchecked).unwrap();
    }
    Ok(CommandResult::ok(out))
}

fn xcheck_cmd(path: &Path, text: &str) -> Outcome {
    let (model, t) = load(path)?;
    let f = formula(&model, text)?;
    let usage = |e: &dyn std::fmt::Display| CommandResult::fail(EXIT_USAGE, e);
    let semantics = Semantics::new(&model, &t);
    let labels = check(&model, &t, &f).map_err(|e| usage(&e))?;
    let prop = to_propositional_with(
        &eliminate_until(&f, model.agent_count()),
        model.agents(),
        model.threshold(),
        TranslateOptions::default(),
    )
    .map_err(|e| usage(&e))?;

    let mut out = String::new();
    let mut disagreements = Vec::new();
    for i in t.positions() {
        let direct = semantics.eval_at(i, &f).map_err(|e| usage(&e))?;
        let labeled = labels.holds(i, &f);
        let translated = eval_prop(prop.formula.as_formula(), t.frame(i), model.network(), model.threshold())
            .map_err(|e| usage(&e))?;
        writeln!(
            out,
            "{i}: semantics={} checker={} translation={}",
            yes_no(direct),
            yes_no(labeled),
            yes_no(translated)
        )
        .unwrap();
        if direct != labeled || direct != translated {
            disagreements.push(i);
        }
    }
    if !disagreements.is_empty() {
        let list: Vec<String> = disagreements.iter().map(usize::to_string).collect();
        writeln!(out, "engines disagree at {}", list.join(",")).unwrap();
        return Err(CommandResult { exit_code: EXIT_DISAGREE, stdout: out, stderr: String::new() });
    }
    let holds = labels.holds(0, &f);
    writeln!(out, "engines agree at all {} positions", t.fixed_point_index() + 1).unwrap();
    writeln!(out, "holds at 0: {}", yes_no(holds)).unwrap();
    Ok(CommandResult { exit_code: if holds { EXIT_OK } else { EXIT_FAILS }, stdout: out, stderr: String::new() })
}
