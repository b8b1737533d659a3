//! Checks an identity between two formula templates over atom instantiations.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eval::{evaluate, BooleanModel, EvalError, OrthoModel, Semantics, SemanticsKind};
use super::{parse_formula, Formula, FormulaError};
use crate::exec::Execution;
use crate::trace::{gen_random, GenError, Trace};

/// Instantiation spaces up to this many tuples are checked exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 10_000;

/// Two formulas whose atoms are metavariables, ranging over the process
/// atoms of a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawTemplate {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl LawTemplate {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        LawTemplate { lhs, rhs }
    }

    pub fn parse(lhs: &str, rhs: &str) -> Result<Self, FormulaError> {
        Ok(LawTemplate::new(parse_formula(lhs)?, parse_formula(rhs)?))
    }

    /// `(a | b) & c = (a & c) | (b & c)`
    pub fn distributivity() -> Self {
        LawTemplate::parse("(a | b) & c", "(a & c) | (b & c)").expect("valid template")
    }

    /// `~(a & b) = ~a | ~b`
    pub fn de_morgan() -> Self {
        LawTemplate::parse("~(a & b)", "~a | ~b").expect("valid template")
    }

    /// Metavariables by first occurrence, left side first.
    pub fn metavariables(&self) -> Vec<String> {
        let mut vars = self.lhs.atoms();
        for v in self.rhs.atoms() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawFailure {
    /// Seed of the generated trace, when no trace was given.
    pub trace_seed: Option<u64>,
    /// Atom bound to each metavariable, in metavariable order.
    pub atoms: Vec<String>,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawComparison {
    pub semantics: SemanticsKind,
    pub metavariables: Vec<String>,
    pub mode: SampleMode,
    /// Size of the instantiation space per trace.
    pub space: usize,
    pub checked: usize,
    /// All failing instantiations in scan order.
    pub failures: Vec<LawFailure>,
}

impl LawComparison {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&LawFailure> {
        self.failures.first()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompareError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Gen(#[from] GenError),
}

pub fn compare_laws(
    trace: Option<&Trace>,
    template: &LawTemplate,
    semantics: SemanticsKind,
    trials: usize,
    seed: u64,
) -> Result<LawComparison, CompareError> {
    compare_laws_with(trace, template, semantics, trials, seed, Execution::default())
}

/// Instantiates the template's metavariables with process atoms and compares
/// both sides under `semantics`.
///
/// For a given trace the tuple space is scanned exhaustively in
/// lexicographic order (atoms in process order) when it has at most
/// [`EXHAUSTIVE_LIMIT`] tuples; otherwise `trials` tuples are drawn with
/// `seed`. Without a trace, `trials` random traces (seeds `seed..`) are each
/// checked the same way.
pub fn compare_laws_with(
    trace: Option<&Trace>,
    template: &LawTemplate,
    semantics: SemanticsKind,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<LawComparison, CompareError> {
    let vars = template.metavariables();
    let mut result = LawComparison {
        semantics,
        metavariables: vars.clone(),
        mode: SampleMode::Exhaustive,
        space: 0,
        checked: 0,
        failures: Vec::new(),
    };
    match trace {
        Some(t) => check_trace(t, None, template, &vars, semantics, trials, seed, exec, &mut result)?,
        None => {
            for i in 0..trials as u64 {
                let s = seed.wrapping_add(i);
                let generated = sweep_trace(s)?;
                check_trace(&generated, Some(s), template, &vars, semantics, trials, s, exec, &mut result)?;
            }
        }
    }
    Ok(result)
}

/// The random trace checked for `seed` when no trace is given: three sites
/// of three processes with up to three messages.
pub fn sweep_trace(seed: u64) -> Result<Trace, GenError> {
    match gen_random(seed, 3, 3, 3) {
        Err(GenError::Unsatisfiable { placed, .. }) => gen_random(seed, 3, 3, placed),
        other => other,
    }
}

#[allow(clippy::too_many_arguments)]
fn check_trace(
    trace: &Trace,
    trace_seed: Option<u64>,
    template: &LawTemplate,
    vars: &[String],
    semantics: SemanticsKind,
    trials: usize,
    seed: u64,
    exec: Execution,
    out: &mut LawComparison,
) -> Result<(), CompareError> {
    match semantics {
        SemanticsKind::Boolean => {
            let model = BooleanModel::new(trace)?;
            scan(&model, trace, trace_seed, template, vars, trials, seed, exec, out)
        }
        SemanticsKind::Ortho => {
            let model = OrthoModel::new(trace)?;
            scan(&model, trace, trace_seed, template, vars, trials, seed, exec, out)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn scan<S: Semantics>(
    model: &S,
    trace: &Trace,
    trace_seed: Option<u64>,
    template: &LawTemplate,
    vars: &[String],
    trials: usize,
    seed: u64,
    exec: Execution,
    out: &mut LawComparison,
) -> Result<(), CompareError> {
    let n = trace.process_count();
    let k = vars.len();
    let space = n.checked_pow(k as u32).unwrap_or(usize::MAX);
    let tuples: Vec<Vec<usize>> = if space <= EXHAUSTIVE_LIMIT {
        (0..space).map(|t| digits(t, n, k)).collect()
    } else {
        out.mode = SampleMode::Sampled;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..trials).map(|_| (0..k).map(|_| rng.random_range(0..n)).collect()).collect()
    };
    out.space = space;
    out.checked += tuples.len();

    let results: Vec<Result<Option<LawFailure>, EvalError>> = exec.map(tuples.len(), |i| {
        let atoms: Vec<&str> = tuples[i].iter().map(|&p| trace.processes()[p].name.as_str()).collect();
        let bindings: HashMap<&str, &str> = vars.iter().map(String::as_str).zip(atoms.iter().copied()).collect();
        let lhs = evaluate(&template.lhs.substitute(&bindings), model)?;
        let rhs = evaluate(&template.rhs.substitute(&bindings), model)?;
        Ok((lhs != rhs).then(|| LawFailure {
            trace_seed,
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            lhs: model.indices(&lhs),
            rhs: model.indices(&rhs),
        }))
    });
    for r in results {
        if let Some(f) = r? {
            out.failures.push(f);
        }
    }
    Ok(())
}

/// Base-`n` digits of `t`, most significant first.
fn digits(mut t: usize, n: usize, k: usize) -> Vec<usize> {
    let mut d = vec![0; k];
    for slot in d.iter_mut().rev() {
        *slot = t % n;
        t /= n;
    }
    d
}
