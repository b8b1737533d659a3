use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use orthochron_core::lattice::{enumerate_closed, Counterexample};
use orthochron_core::logic::{compare_laws, sweep_trace, LawComparison, LawTemplate, SampleMode};
use orthochron_core::oracle::{self, MAX_ORACLE_PROCESSES};
use orthochron_core::{
    check_laws, eval_boolean, eval_ortho, gen_random, happened_before, is_closed, parse_formula, parse_trace,
    time_points, validate, CausalStructure, Law, OrthoLattice, SemanticsKind, Trace, DEFAULT_CAP,
};

#[derive(Parser)]
#[command(name = "orthochron", version, about = "Boolean and orthologic models of spatiotemporal traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a trace against the well-formedness rules.
    Validate(Common),
    /// List the time points of a timed trace.
    Timepoints(Common),
    /// Print the happened-before and causality relations.
    Hb(Common),
    /// Enumerate the closed sets of a trace.
    Lattice {
        #[command(flatten)]
        common: Common,
        /// Stop after this many elements.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Evaluate a formula.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = Sem::Ortho)]
        semantics: Sem,
    },
    /// Check a law, exiting 1 when a counterexample is found.
    Laws(LawsArgs),
    /// Compare the enumeration with a brute-force scan of all subsets.
    Oracle(Common),
    /// Print a seeded random trace.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        sites: usize,
        #[arg(long, default_value_t = 3)]
        procs: usize,
        #[arg(long, default_value_t = 3)]
        messages: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Trace file, or `-` for standard input.
    trace: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct LawsArgs {
    /// Trace file; random traces are generated when omitted.
    trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, value_parser = parse_law)]
    law: Option<Law>,
    /// Left side of a custom identity; its atoms are metavariables.
    #[arg(long, requires = "rhs", conflicts_with = "law")]
    lhs: Option<String>,
    #[arg(long, requires = "lhs")]
    rhs: Option<String>,
    #[arg(long, value_enum, default_value_t = Sem::Ortho)]
    semantics: Sem,
    /// Instantiate with process atoms, or range over all lattice elements.
    #[arg(long, value_enum)]
    scope: Option<Scope>,
    /// Random tuples per trace for large spaces; random traces when no trace is given.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_law(s: &str) -> Result<Law, String> {
    s.parse()
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sem {
    Ortho,
    Boolean,
}

impl From<Sem> for SemanticsKind {
    fn from(s: Sem) -> Self {
        match s {
            Sem::Ortho => SemanticsKind::Ortho,
            Sem::Boolean => SemanticsKind::Boolean,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scope {
    Atoms,
    Elements,
}

/// Exit status of a command that ran to completion.
enum Status {
    Ok,
    Counterexample,
    Invalid,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let status = run(cli.command, &mut out);
    let mut stdout = io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    match status {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Counterexample) => ExitCode::from(1),
        Ok(Status::Invalid) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_trace(path: &PathBuf) -> Result<Trace> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    parse_trace(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Loads a trace and refuses to analyse one that breaks the well-formedness rules.
fn load(path: &PathBuf) -> Result<Trace> {
    let trace = read_trace(path)?;
    if let Some(v) = validate(&trace).first() {
        bail!("{}: invalid trace: {v}", path.display());
    }
    Ok(trace)
}

fn no_dot(format: Format, command: &str) -> Result<()> {
    if format == Format::Dot {
        bail!("--format dot is only available for `lattice`, not `{command}`");
    }
    Ok(())
}

fn push_json(out: &mut String, v: &Value) {
    out.push_str(&serde_json::to_string_pretty(v).expect("serializable"));
    out.push('\n');
}

fn run(command: Command, out: &mut String) -> Result<Status> {
    match command {
        Command::Validate(c) => cmd_validate(&c, out),
        Command::Timepoints(c) => cmd_timepoints(&c, out),
        Command::Hb(c) => cmd_hb(&c, out),
        Command::Lattice { common, cap } => cmd_lattice(&common, cap, out),
        Command::Eval {
            common,
            formula,
            semantics,
        } => cmd_eval(&common, &formula, semantics.into(), out),
        Command::Laws(args) => cmd_laws(&args, out),
        Command::Oracle(c) => cmd_oracle(&c, out),
        Command::Gen {
            seed,
            sites,
            procs,
            messages,
        } => {
            let trace = gen_random(seed, sites, procs, messages)?;
            out.push_str(&trace.to_string());
            Ok(Status::Ok)
        }
    }
}

fn cmd_validate(c: &Common, out: &mut String) -> Result<Status> {
    no_dot(c.format, "validate")?;
    let trace = read_trace(&c.trace)?;
    let violations: Vec<String> = validate(&trace).iter().map(ToString::to_string).collect();
    match c.format {
        Format::Json => push_json(out, &json!({ "valid": violations.is_empty(), "violations": violations })),
        _ if violations.is_empty() => out.push_str(&format!(
            "valid: {} sites, {} processes, {} messages\n",
            trace.sites().len(),
            trace.process_count(),
            trace.messages().len()
        )),
        _ => {
            for v in &violations {
                out.push_str(&format!("invalid: {v}\n"));
            }
        }
    }
    Ok(if violations.is_empty() { Status::Ok } else { Status::Invalid })
}

fn cmd_timepoints(c: &Common, out: &mut String) -> Result<Status> {
    no_dot(c.format, "timepoints")?;
    let trace = load(&c.trace)?;
    let tl = time_points(&trace)?;
    match c.format {
        Format::Json => {
            let points: Vec<Vec<String>> = tl.points().iter().map(|t| trace.set_names(t.members())).collect();
            push_json(out, &json!(points));
        }
        _ => {
            for (i, t) in tl.points().iter().enumerate() {
                out.push_str(&format!("T{} = {}\n", i + 1, trace.format_set(t.members())));
            }
        }
    }
    Ok(Status::Ok)
}

fn cmd_hb(c: &Common, out: &mut String) -> Result<Status> {
    no_dot(c.format, "hb")?;
    let trace = load(&c.trace)?;
    let cs = happened_before(&trace)?;
    let names: Vec<&str> = trace.processes().iter().map(|p| p.name.as_str()).collect();
    let n = names.len();
    let hb = |p: usize, q: usize| cs.successors(p).contains(q);
    let c_rel = |p: usize, q: usize| cs.neighborhood(p).contains(q);
    match c.format {
        Format::Json => {
            let adjacency = |rel: &dyn Fn(usize, usize) -> bool| {
                let mut m = Map::new();
                for p in 0..n {
                    let row: Vec<&str> = (0..n).filter(|&q| rel(p, q)).map(|q| names[q]).collect();
                    m.insert(names[p].to_string(), json!(row));
                }
                Value::Object(m)
            };
            push_json(
                out,
                &json!({ "happened_before": adjacency(&hb), "causality": adjacency(&c_rel) }),
            );
        }
        _ => {
            let width = names.iter().map(|s| s.len()).max().unwrap_or(1);
            let matrix = |title: &str, rel: &dyn Fn(usize, usize) -> bool, out: &mut String| {
                out.push_str(&format!("{title:<width$}"));
                for name in &names {
                    out.push_str(&format!(" {name:>width$}"));
                }
                out.push('\n');
                for (p, name) in names.iter().enumerate() {
                    out.push_str(&format!("{name:<width$}"));
                    for q in 0..n {
                        out.push_str(&format!(" {:>width$}", u8::from(rel(p, q))));
                    }
                    out.push('\n');
                }
            };
            matrix("B", &hb, out);
            out.push('\n');
            matrix("C", &c_rel, out);
        }
    }
    Ok(Status::Ok)
}

fn cmd_lattice(c: &Common, cap: usize, out: &mut String) -> Result<Status> {
    let trace = load(&c.trace)?;
    let cs = happened_before(&trace)?;
    let lattice = enumerate_closed(&cs, cap)?;
    match c.format {
        Format::Dot => out.push_str(&lattice.to_dot(&trace)),
        Format::Json => {
            let elements: Vec<Vec<String>> = lattice.elements().iter().map(|e| trace.set_names(e.members())).collect();
            let hasse: Vec<[usize; 2]> = lattice.hasse_edges().into_iter().map(|(a, b)| [a, b]).collect();
            push_json(
                out,
                &json!({
                    "elements": elements,
                    "complement": lattice.complement_indices(),
                    "hasse": hasse,
                }),
            );
        }
        Format::Text => {
            let width = (lattice.len() - 1).to_string().len();
            for (i, e) in lattice.elements().iter().enumerate() {
                out.push_str(&format!(
                    "E{i:<width$} = {}  ~ E{}\n",
                    trace.format_set(e.members()),
                    lattice.complement_of(i)
                ));
            }
            out.push_str(&format!(
                "{} elements, {} covers\n",
                lattice.len(),
                lattice.hasse_edges().len()
            ));
        }
    }
    Ok(Status::Ok)
}

fn point_names(indices: &[usize]) -> String {
    let names: Vec<String> = indices.iter().map(|i| format!("T{}", i + 1)).collect();
    format!("{{{}}}", names.join(", "))
}

fn process_names(trace: &Trace, indices: &[usize]) -> Vec<String> {
    indices.iter().map(|&i| trace.processes()[i].name.clone()).collect()
}

fn cmd_eval(c: &Common, formula: &str, semantics: SemanticsKind, out: &mut String) -> Result<Status> {
    no_dot(c.format, "eval")?;
    let trace = load(&c.trace)?;
    let f = parse_formula(formula)?;
    let (text, value, closed) = match semantics {
        SemanticsKind::Boolean => {
            let tl = time_points(&trace)?;
            let v = eval_boolean(&f, &trace, &tl)?.to_vec();
            // Every set of time points is an element of the Boolean algebra.
            (point_names(&v), json!(v), true)
        }
        SemanticsKind::Ortho => {
            let cs = happened_before(&trace)?;
            let v = eval_ortho(&f, &trace, &cs)?;
            let closed = is_closed(&cs, v.members());
            (trace.format_set(v.members()), json!(trace.set_names(v.members())), closed)
        }
    };
    match c.format {
        Format::Json => push_json(
            out,
            &json!({ "semantics": semantics.name(), "value": value, "closed": closed }),
        ),
        _ => out.push_str(&format!("[{f}] = {text}\n")),
    }
    Ok(Status::Ok)
}

fn cmd_laws(args: &LawsArgs, out: &mut String) -> Result<Status> {
    no_dot(args.format, "laws")?;
    let semantics: SemanticsKind = args.semantics.into();
    let template = match (&args.lhs, &args.rhs, args.law) {
        (Some(l), Some(r), _) => Some(LawTemplate::parse(l, r)?),
        (_, _, Some(Law::Distributivity)) => Some(LawTemplate::distributivity()),
        (_, _, Some(Law::DeMorgan)) => Some(LawTemplate::de_morgan()),
        (_, _, Some(_)) => None,
        _ => bail!("give --law or both --lhs and --rhs"),
    };
    let scope = match (args.scope, &template) {
        (Some(Scope::Atoms), None) => bail!("{} ranges over lattice elements only", args.law.expect("law given")),
        (Some(Scope::Elements), _) if args.lhs.is_some() => bail!("custom identities are checked over atoms only"),
        (Some(s), _) => s,
        (None, Some(_)) => Scope::Atoms,
        (None, None) => Scope::Elements,
    };
    let trace = args.trace.as_ref().map(load).transpose()?;
    match (scope, template) {
        (Scope::Atoms, Some(tpl)) => {
            let result = compare_laws(trace.as_ref(), &tpl, semantics, args.trials, args.seed)?;
            report_comparison(args, trace.as_ref(), &tpl, &result, out);
            Ok(if result.holds() { Status::Ok } else { Status::Counterexample })
        }
        (Scope::Elements, _) => {
            let law = args.law.expect("element scope has a named law");
            if semantics == SemanticsKind::Boolean {
                bail!("element scope checks the closed-set lattice; use --semantics ortho");
            }
            let Some(trace) = trace else {
                bail!("element scope needs a trace");
            };
            let cs = happened_before(&trace)?;
            let lattice = enumerate_closed(&cs, DEFAULT_CAP)?;
            let verdict = check_laws(&lattice, law);
            report_elements(args.format, law, &trace, &lattice, verdict.counterexample.as_ref(), out);
            Ok(if verdict.holds() { Status::Ok } else { Status::Counterexample })
        }
        (Scope::Atoms, None) => unreachable!("rejected above"),
    }
}

fn law_label(args: &LawsArgs) -> String {
    args.law.map_or_else(|| "custom".to_string(), |l| l.name().to_string())
}

fn report_comparison(args: &LawsArgs, trace: Option<&Trace>, tpl: &LawTemplate, r: &LawComparison, out: &mut String) {
    let mode = match r.mode {
        SampleMode::Exhaustive => "exhaustive",
        SampleMode::Sampled => "sampled",
    };
    let render = |vals: &[usize], seed: Option<u64>| -> (String, Value) {
        match r.semantics {
            SemanticsKind::Boolean => (point_names(vals), json!(vals)),
            SemanticsKind::Ortho => {
                let generated;
                let t = match (trace, seed) {
                    (Some(t), _) => t,
                    (None, s) => {
                        generated = sweep_trace(s.unwrap_or_default()).expect("checked above");
                        &generated
                    }
                };
                let names = process_names(t, vals);
                (format!("{{{}}}", names.join(", ")), json!(names))
            }
        }
    };
    if args.format == Format::Json {
        let failures: Vec<Value> = r
            .failures
            .iter()
            .map(|f| {
                let mut m = Map::new();
                if let Some(s) = f.trace_seed {
                    m.insert("trace_seed".into(), json!(s));
                }
                m.insert("atoms".into(), json!(f.atoms));
                m.insert("lhs".into(), render(&f.lhs, f.trace_seed).1);
                m.insert("rhs".into(), render(&f.rhs, f.trace_seed).1);
                Value::Object(m)
            })
            .collect();
        push_json(
            out,
            &json!({
                "law": law_label(args),
                "lhs": tpl.lhs.to_string(),
                "rhs": tpl.rhs.to_string(),
                "semantics": r.semantics.name(),
                "scope": "atoms",
                "mode": mode,
                "space": r.space,
                "checked": r.checked,
                "holds": r.holds(),
                "failures": failures,
            }),
        );
        return;
    }
    out.push_str(&format!(
        "{}: {} = {} ({} semantics, {} over atoms, {} instantiations checked)\n",
        law_label(args),
        tpl.lhs,
        tpl.rhs,
        r.semantics,
        mode,
        r.checked
    ));
    if r.holds() {
        out.push_str("holds\n");
        return;
    }
    out.push_str(&format!("fails for {} instantiations\n", r.failures.len()));
    for f in &r.failures {
        let seed = f.trace_seed.map_or_else(String::new, |s| format!("trace seed {s}: "));
        out.push_str(&format!(
            "counterexample: {seed}({}) = ({}): lhs = {}, rhs = {}\n",
            r.metavariables.join(", "),
            f.atoms.join(", "),
            render(&f.lhs, f.trace_seed).0,
            render(&f.rhs, f.trace_seed).0,
        ));
    }
}

fn report_elements(
    format: Format,
    law: Law,
    trace: &Trace,
    lattice: &OrthoLattice,
    cx: Option<&Counterexample>,
    out: &mut String,
) {
    let set = |i: usize| trace.format_set(lattice.element(i).members());
    let names = |i: usize| trace.set_names(lattice.element(i).members());
    if format == Format::Json {
        let cx = cx.map(|c| {
            json!({
                "rule": c.rule,
                "elements": c.elements.iter().map(|&i| names(i)).collect::<Vec<_>>(),
                "lhs": c.lhs.map(names),
                "rhs": c.rhs.map(names),
            })
        });
        push_json(
            out,
            &json!({
                "law": law.name(),
                "semantics": "ortho",
                "scope": "elements",
                "elements": lattice.len(),
                "holds": cx.is_none(),
                "counterexample": cx,
            }),
        );
        return;
    }
    out.push_str(&format!(
        "{law}: checked over all {} lattice elements\n",
        lattice.len()
    ));
    match cx {
        None => out.push_str("holds\n"),
        Some(c) => {
            let elems: Vec<String> = c.elements.iter().map(|&i| set(i)).collect();
            out.push_str(&format!("counterexample ({}): {}", c.rule, elems.join(", ")));
            if let (Some(l), Some(r)) = (c.lhs, c.rhs) {
                out.push_str(&format!(": lhs = {}, rhs = {}", set(l), set(r)));
            }
            out.push('\n');
        }
    }
}

fn cmd_oracle(c: &Common, out: &mut String) -> Result<Status> {
    no_dot(c.format, "oracle")?;
    let trace = load(&c.trace)?;
    if trace.process_count() > MAX_ORACLE_PROCESSES {
        bail!(
            "{} processes is too many for brute force (limit {MAX_ORACLE_PROCESSES})",
            trace.process_count()
        );
    }
    let cs: CausalStructure = happened_before(&trace)?;
    let lattice = enumerate_closed(&cs, DEFAULT_CAP)?;
    let report = oracle::compare(&cs, &lattice)?;
    let sets = |v: &[orthochron_core::ProcSet]| v.iter().map(|s| trace.set_names(s)).collect::<Vec<_>>();
    match c.format {
        Format::Json => push_json(
            out,
            &json!({
                "match": report.matches(),
                "fast": report.fast_count,
                "brute": report.brute_count,
                "only_brute": sets(&report.only_brute),
                "only_fast": sets(&report.only_fast),
            }),
        ),
        _ if report.matches() => out.push_str(&format!(
            "match: fast enumeration = brute force ({} elements)\n",
            report.fast_count
        )),
        _ => {
            out.push_str(&format!(
                "mismatch: fast enumeration has {} elements, brute force has {}\n",
                report.fast_count, report.brute_count
            ));
            for s in &report.only_brute {
                out.push_str(&format!("only in brute force: {}\n", trace.format_set(s)));
            }
            for s in &report.only_fast {
                out.push_str(&format!("only in enumeration: {}\n", trace.format_set(s)));
            }
        }
    }
    Ok(if report.matches() { Status::Ok } else { Status::Counterexample })
}
