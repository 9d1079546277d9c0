//! Command-line front end: translate goal formulas to DFAs, compile them
//! into classical FOND tasks, search for strong policies, validate them
//! end to end and emit controller graphs.
//!
//! Exit codes: 0 success (validation PASS), 1 input/compilation error,
//! 2 formula parse/classification error, 3 no strong policy exists,
//! 4 validation FAIL.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use tfond::automaton::{ltlf_to_dfa, minimize, pltlf_to_dfa, to_dot, Dfa};
use tfond::compiler::{
    compile, CompilationResult, CompileError, CompileOptions, InitialStateConvention,
};
use tfond::fond::{
    controller_graph, enumerate_traces, graph_to_dot, policy_from_text, policy_to_text,
    strong_solve_task, validate_compiled, GroundTask, Policy, SolveOutcome,
};
use tfond::pddl::{
    lint_domain, parse_domain, parse_problem, print_domain, print_problem, PlanningDomain,
    PlanningProblem,
};
use tfond::temporal::{classify, parse_formula, FormulaClass, TemporalFormula, TemporalError};

#[derive(Parser)]
#[command(
    name = "tfond",
    version,
    about = "Compile LTLf/PLTLf temporal goals into classical FOND planning tasks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PipelineFlags {
    /// Output directory for generated files
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Keep the DFA as constructed instead of minimizing it
    #[arg(long)]
    no_minimize: bool,
    /// Advance the automaton over the problem's initial state before
    /// planning starts
    #[arg(long)]
    eval_initial_state: bool,
    /// Also write the DFA as automa.dot
    #[arg(long)]
    emit_dot: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a goal formula into a DFA in DOT format (automa.dot)
    Translate {
        formula: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        no_minimize: bool,
    },
    /// Compile domain + problem + formula into new-dom.pddl / new-prob.pddl
    Compile {
        domain: PathBuf,
        problem: PathBuf,
        formula: String,
        #[command(flatten)]
        flags: PipelineFlags,
    },
    /// Compile, search for a strong policy, emit policy and controller
    /// graphs, and validate every policy trace against the formula
    Solve {
        domain: PathBuf,
        problem: PathBuf,
        formula: String,
        #[command(flatten)]
        flags: PipelineFlags,
    },
    /// Replay a policy file against the compiled task and report PASS/FAIL
    Validate {
        domain: PathBuf,
        problem: PathBuf,
        formula: String,
        policy: PathBuf,
        #[command(flatten)]
        flags: PipelineFlags,
    },
    /// Emit a controller graph for a previously saved policy
    Graph {
        domain: PathBuf,
        problem: PathBuf,
        formula: String,
        policy: PathBuf,
        /// Compose each domain step with its following automaton step
        #[arg(long)]
        collapse_trans: bool,
        #[command(flatten)]
        flags: PipelineFlags,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<TemporalError>().is_some() {
        return 2;
    }
    if let Some(compile_err) = err.downcast_ref::<CompileError>() {
        if matches!(compile_err, CompileError::MixedFormula) {
            return 2;
        }
    }
    1
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Translate {
            formula,
            out,
            no_minimize,
        } => cmd_translate(&formula, &out, no_minimize),
        Command::Compile {
            domain,
            problem,
            formula,
            flags,
        } => cmd_compile(&domain, &problem, &formula, &flags),
        Command::Solve {
            domain,
            problem,
            formula,
            flags,
        } => cmd_solve(&domain, &problem, &formula, &flags),
        Command::Validate {
            domain,
            problem,
            formula,
            policy,
            flags,
        } => cmd_validate(&domain, &problem, &formula, &policy, &flags),
        Command::Graph {
            domain,
            problem,
            formula,
            policy,
            collapse_trans,
            flags,
        } => cmd_graph(&domain, &problem, &formula, &policy, collapse_trans, &flags),
    }
}

/// The formula argument is either the formula text itself or the path of a
/// single-line file holding it.
fn load_formula(text: &str) -> Result<TemporalFormula> {
    let text = if Path::new(text).is_file() {
        fs::read_to_string(text)
            .with_context(|| format!("reading formula file {text}"))?
            .trim()
            .to_string()
    } else {
        text.to_string()
    };
    let formula = parse_formula(&text)?;
    if classify(&formula) == FormulaClass::Mixed {
        return Err(TemporalError::Mixed(text).into());
    }
    Ok(formula)
}

fn load_inputs(domain: &Path, problem: &Path) -> Result<(PlanningDomain, PlanningProblem)> {
    let domain_text = fs::read_to_string(domain)
        .with_context(|| format!("reading domain {}", domain.display()))?;
    let domain = parse_domain(&domain_text)
        .with_context(|| "could not parse domain".to_string())?;
    for warning in lint_domain(&domain) {
        eprintln!("warning: {warning}");
    }
    let problem_text = fs::read_to_string(problem)
        .with_context(|| format!("reading problem {}", problem.display()))?;
    let problem = parse_problem(&problem_text)
        .with_context(|| "could not parse problem".to_string())?;
    Ok((domain, problem))
}

fn options(flags: &PipelineFlags) -> CompileOptions {
    CompileOptions {
        minimize: !flags.no_minimize,
        convention: if flags.eval_initial_state {
            InitialStateConvention::EvalInitialState
        } else {
            InitialStateConvention::PostAction
        },
    }
}

fn build_dfa(formula: &TemporalFormula, minimize_dfa: bool) -> Result<Dfa> {
    let dfa = match classify(formula) {
        FormulaClass::Future | FormulaClass::Propositional => ltlf_to_dfa(formula)?,
        FormulaClass::Past => pltlf_to_dfa(formula)?,
        FormulaClass::Mixed => unreachable!("rejected at load time"),
    };
    Ok(if minimize_dfa { minimize(&dfa)? } else { dfa })
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn cmd_translate(formula_text: &str, out: &Path, no_minimize: bool) -> Result<u8> {
    let started = Instant::now();
    let formula = load_formula(formula_text)?;
    let dfa = build_dfa(&formula, !no_minimize)?;
    write_file(out, "automa.dot", &to_dot(&dfa))?;
    println!(
        "dfa: {} states, {} accepting",
        dfa.state_count(),
        dfa.accepting.len()
    );
    println!("# time: translate {:.3}s", started.elapsed().as_secs_f64());
    Ok(0)
}

struct Compiled {
    result: CompilationResult,
    task: GroundTask,
}

fn compile_inputs(
    domain: &Path,
    problem: &Path,
    formula_text: &str,
    flags: &PipelineFlags,
) -> Result<Compiled> {
    let formula = load_formula(formula_text)?;
    let (domain, problem) = load_inputs(domain, problem)?;
    let result = compile(&domain, &problem, &formula, options(flags))?;
    let task = GroundTask::new(&result.new_domain, &result.new_problem)
        .context("grounding the compiled task")?;
    Ok(Compiled { result, task })
}

fn write_compilation(compiled: &Compiled, flags: &PipelineFlags) -> Result<()> {
    write_file(
        &flags.out,
        "new-dom.pddl",
        &print_domain(&compiled.result.new_domain),
    )?;
    write_file(
        &flags.out,
        "new-prob.pddl",
        &print_problem(&compiled.result.new_problem),
    )?;
    if flags.emit_dot {
        write_file(&flags.out, "automa.dot", &to_dot(&compiled.result.dfa))?;
    }
    Ok(())
}

fn cmd_compile(
    domain: &Path,
    problem: &Path,
    formula_text: &str,
    flags: &PipelineFlags,
) -> Result<u8> {
    let started = Instant::now();
    let compiled = compile_inputs(domain, problem, formula_text, flags)?;
    write_compilation(&compiled, flags)?;
    report_compilation(&compiled);
    println!("# time: compile {:.3}s", started.elapsed().as_secs_f64());
    Ok(0)
}

fn report_compilation(compiled: &Compiled) {
    let trans = compiled
        .result
        .new_domain
        .actions
        .iter()
        .filter(|a| tfond::compiler::is_trans_action(&a.name))
        .count();
    println!(
        "dfa: {} states, {} accepting",
        compiled.result.dfa.state_count(),
        compiled.result.dfa.accepting.len()
    );
    println!(
        "compiled: {} actions ({} trans), {} ground actions",
        compiled.result.new_domain.actions.len(),
        trans,
        compiled.task.actions.len()
    );
}

fn cmd_solve(
    domain: &Path,
    problem: &Path,
    formula_text: &str,
    flags: &PipelineFlags,
) -> Result<u8> {
    let started = Instant::now();
    let compiled = compile_inputs(domain, problem, formula_text, flags)?;
    write_compilation(&compiled, flags)?;
    report_compilation(&compiled);

    let policy = match strong_solve_task(&compiled.task) {
        SolveOutcome::Solved(policy) => policy,
        SolveOutcome::Unsolvable => {
            println!("no strong policy exists");
            println!("# time: solve {:.3}s", started.elapsed().as_secs_f64());
            return Ok(3);
        }
    };
    println!("policy: {} entries", policy.len());
    write_file(
        &flags.out,
        "policy.txt",
        &policy_to_text(&compiled.task, &policy),
    )?;

    let traces = enumerate_traces(&compiled.task, &policy)
        .context("enumerating traces of the found policy")?;
    println!("traces: {}", traces.len());
    let full = controller_graph(&compiled.task, &traces, false)?;
    write_file(&flags.out, "controller.dot", &graph_to_dot(&full))?;
    let collapsed = controller_graph(&compiled.task, &traces, true)?;
    write_file(
        &flags.out,
        "controller-collapsed.dot",
        &graph_to_dot(&collapsed),
    )?;

    let report = validate_compiled(&compiled.result, &compiled.task, &policy);
    println!("validation: {report}");
    println!("# time: solve {:.3}s", started.elapsed().as_secs_f64());
    Ok(if report.pass { 0 } else { 4 })
}

fn load_policy(compiled: &Compiled, path: &Path) -> Result<Policy> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading policy {}", path.display()))?;
    let policy = policy_from_text(&compiled.task, &text)
        .with_context(|| "policy does not match the compiled task".to_string())?;
    Ok(policy)
}

fn cmd_validate(
    domain: &Path,
    problem: &Path,
    formula_text: &str,
    policy_path: &Path,
    flags: &PipelineFlags,
) -> Result<u8> {
    let started = Instant::now();
    let compiled = compile_inputs(domain, problem, formula_text, flags)?;
    let policy = load_policy(&compiled, policy_path)?;
    let report = validate_compiled(&compiled.result, &compiled.task, &policy);
    println!("validation: {report}");
    println!("# time: validate {:.3}s", started.elapsed().as_secs_f64());
    Ok(if report.pass { 0 } else { 4 })
}

fn cmd_graph(
    domain: &Path,
    problem: &Path,
    formula_text: &str,
    policy_path: &Path,
    collapse_trans: bool,
    flags: &PipelineFlags,
) -> Result<u8> {
    let started = Instant::now();
    let compiled = compile_inputs(domain, problem, formula_text, flags)?;
    let policy = load_policy(&compiled, policy_path)?;
    let traces =
        enumerate_traces(&compiled.task, &policy).context("enumerating policy traces")?;
    let graph = controller_graph(&compiled.task, &traces, collapse_trans)?;
    let name = if collapse_trans {
        "controller-collapsed.dot"
    } else {
        "controller.dot"
    };
    write_file(&flags.out, name, &graph_to_dot(&graph))?;
    println!(
        "controller: {} nodes, {} edges, {} goal nodes",
        graph.nodes.len(),
        graph.edges.len(),
        graph.goal_nodes.len()
    );
    println!("# time: graph {:.3}s", started.elapsed().as_secs_f64());
    Ok(0)
}
