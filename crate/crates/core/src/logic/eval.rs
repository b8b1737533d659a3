use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use super::Formula;
use crate::bitset::BitSet;
use crate::causal::{happened_before, CausalError, CausalStructure};
use crate::chronology::{time_points, ChronoError, TimeLine};
use crate::lattice::{self, ClosedSet};
use crate::trace::{ProcessId, Trace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error(transparent)]
    Chronology(#[from] ChronoError),
    #[error(transparent)]
    Causal(#[from] CausalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemanticsKind {
    Boolean,
    Ortho,
}

impl SemanticsKind {
    pub fn name(self) -> &'static str {
        match self {
            SemanticsKind::Boolean => "boolean",
            SemanticsKind::Ortho => "ortho",
        }
    }
}

impl fmt::Display for SemanticsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemanticsKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "boolean" => Ok(SemanticsKind::Boolean),
            "ortho" => Ok(SemanticsKind::Ortho),
            _ => Err(format!("unknown semantics `{s}`")),
        }
    }
}

/// An algebra of truth values for the connectives.
pub trait Semantics: Sync {
    type Value: Clone + PartialEq + Send;

    fn atom(&self, name: &str) -> Result<Self::Value, EvalError>;
    fn bottom(&self) -> Self::Value;
    fn top(&self) -> Self::Value;
    fn not(&self, v: &Self::Value) -> Self::Value;
    fn and(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn or(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// Members of a value as sorted indices (time points or processes).
    fn indices(&self, v: &Self::Value) -> Vec<usize>;
}

pub fn evaluate<S: Semantics>(formula: &Formula, sem: &S) -> Result<S::Value, EvalError> {
    Ok(match formula {
        Formula::Atom(name) => sem.atom(name)?,
        Formula::Bottom => sem.bottom(),
        Formula::Top => sem.top(),
        Formula::Not(f) => sem.not(&evaluate(f, sem)?),
        Formula::And(a, b) => sem.and(&evaluate(a, sem)?, &evaluate(b, sem)?),
        Formula::Or(a, b) => sem.or(&evaluate(a, sem)?, &evaluate(b, sem)?),
    })
}

fn resolve(trace: &Trace, name: &str) -> Result<ProcessId, EvalError> {
    trace.lookup(name).ok_or_else(|| EvalError::UnknownAtom(name.to_string()))
}

/// Truth values are sets of time points; connectives are the set operations.
#[derive(Debug, Clone)]
pub struct BooleanModel<'a> {
    trace: &'a Trace,
    timeline: Cow<'a, TimeLine>,
}

impl<'a> BooleanModel<'a> {
    pub fn new(trace: &'a Trace) -> Result<Self, EvalError> {
        Ok(BooleanModel {
            trace,
            timeline: Cow::Owned(time_points(trace)?),
        })
    }

    pub fn with_timeline(trace: &'a Trace, timeline: &'a TimeLine) -> Self {
        BooleanModel {
            trace,
            timeline: Cow::Borrowed(timeline),
        }
    }

    pub fn timeline(&self) -> &TimeLine {
        &self.timeline
    }
}

impl Semantics for BooleanModel<'_> {
    type Value = BitSet;

    fn atom(&self, name: &str) -> Result<BitSet, EvalError> {
        Ok(self.timeline.interval_of_process(resolve(self.trace, name)?)?)
    }

    fn bottom(&self) -> BitSet {
        BitSet::empty(self.timeline.len())
    }

    fn top(&self) -> BitSet {
        self.timeline.all()
    }

    fn not(&self, v: &BitSet) -> BitSet {
        v.complement()
    }

    fn and(&self, a: &BitSet, b: &BitSet) -> BitSet {
        a.intersection(b)
    }

    fn or(&self, a: &BitSet, b: &BitSet) -> BitSet {
        a.union(b)
    }

    fn indices(&self, v: &BitSet) -> Vec<usize> {
        v.to_vec()
    }
}

/// Truth values are closed process sets; an atom denotes the closure of its
/// singleton, negation is the orthocomplement, conjunction is intersection
/// and disjunction is the De Morgan join.
#[derive(Debug, Clone)]
pub struct OrthoModel<'a> {
    trace: &'a Trace,
    causal: Cow<'a, CausalStructure>,
}

impl<'a> OrthoModel<'a> {
    pub fn new(trace: &'a Trace) -> Result<Self, EvalError> {
        Ok(OrthoModel {
            trace,
            causal: Cow::Owned(happened_before(trace)?),
        })
    }

    pub fn with_structure(trace: &'a Trace, causal: &'a CausalStructure) -> Self {
        OrthoModel {
            trace,
            causal: Cow::Borrowed(causal),
        }
    }

    pub fn causal(&self) -> &CausalStructure {
        &self.causal
    }
}

impl Semantics for OrthoModel<'_> {
    type Value = ClosedSet;

    fn atom(&self, name: &str) -> Result<ClosedSet, EvalError> {
        let p = resolve(self.trace, name)?;
        let single = BitSet::from_indices(self.trace.process_count(), [p.0]);
        Ok(lattice::close(&self.causal, &single))
    }

    fn bottom(&self) -> ClosedSet {
        lattice::close(&self.causal, &BitSet::empty(self.trace.process_count()))
    }

    fn top(&self) -> ClosedSet {
        lattice::close(&self.causal, &self.causal.universe())
    }

    fn not(&self, v: &ClosedSet) -> ClosedSet {
        ClosedSet::assume_closed(lattice::ortho(&self.causal, v.members()))
    }

    fn and(&self, a: &ClosedSet, b: &ClosedSet) -> ClosedSet {
        ClosedSet::assume_closed(a.members().intersection(b.members()))
    }

    fn or(&self, a: &ClosedSet, b: &ClosedSet) -> ClosedSet {
        let na = lattice::ortho(&self.causal, a.members());
        let nb = lattice::ortho(&self.causal, b.members());
        ClosedSet::assume_closed(lattice::ortho(&self.causal, &na.intersection(&nb)))
    }

    fn indices(&self, v: &ClosedSet) -> Vec<usize> {
        v.members().to_vec()
    }
}

/// Boolean truth value of `formula` as a set of time point indices.
pub fn eval_boolean(formula: &Formula, trace: &Trace, timeline: &TimeLine) -> Result<BitSet, EvalError> {
    if !trace.is_timed() {
        return Err(ChronoError::Untimed.into());
    }
    evaluate(formula, &BooleanModel::with_timeline(trace, timeline))
}

/// Orthologic truth value of `formula`; always a closed set.
pub fn eval_ortho(formula: &Formula, trace: &Trace, causal: &CausalStructure) -> Result<ClosedSet, EvalError> {
    evaluate(formula, &OrthoModel::with_structure(trace, causal))
}
