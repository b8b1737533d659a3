//! Logical models of spatiotemporal traces.
//!
//! A [`Trace`] is a set of sites, each a sequence of processes, joined by
//! messages. Two constructions are built on top of it:
//!
//! * With timing, [`chronology`] forms time points (maximal sets of
//!   overlapping processes) and each process denotes the set of time points
//!   containing it. Propositions evaluate in a Boolean algebra.
//! * Without a global clock, [`causal`] builds the happened-before and
//!   causality relations and [`lattice`] enumerates the process sets closed
//!   under double orthocomplementation. Propositions evaluate in an
//!   ortholattice, where distributivity can fail.
//!
//! [`logic`] parses formulas and evaluates them in either semantics.

pub mod bitset;
pub mod causal;
pub mod chronology;
pub mod exec;
pub mod fixtures;
pub mod lattice;
pub mod logic;
pub mod oracle;
pub mod trace;

pub use bitset::{BitSet, ProcSet};
pub use causal::{happened_before, CausalError, CausalStructure};
pub use chronology::{earlier, simultaneous, time_points, ChronoError, SimultaneityRelation, TimeLine, TimePoint};
pub use exec::Execution;
pub use lattice::{
    check_laws, close, enumerate_closed, is_closed, ortho, ClosedSet, Law, LatticeError, LawVerdict, OrthoLattice,
    DEFAULT_CAP,
};
pub use logic::{eval_boolean, eval_ortho, parse_formula, Formula, FormulaError, SemanticsKind};
pub use trace::{gen_random, parse_trace, validate, Interval, ProcessId, Timestamp, Trace, Violation};
