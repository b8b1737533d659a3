//! Time points and time intervals of a timed trace.
//!
//! A process is earlier than another if it ends no later than the other
//! begins; two processes are simultaneous if neither is earlier. Time points
//! are the maximal sets of pairwise simultaneous processes, listed in their
//! linear order.

use crate::bitset::BitSet;
use crate::trace::{ProcessId, Trace};
use crate::ProcSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChronoError {
    #[error("trace has no timing")]
    Untimed,
    #[error("unknown process ordinal {0}")]
    UnknownProcess(usize),
}

fn intervals(trace: &Trace, p: ProcessId, q: ProcessId) -> Result<(&crate::Interval, &crate::Interval), ChronoError> {
    let n = trace.process_count();
    for id in [p, q] {
        if id.0 >= n {
            return Err(ChronoError::UnknownProcess(id.0));
        }
    }
    match (trace.interval(p), trace.interval(q)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(ChronoError::Untimed),
    }
}

/// `end(p) <= start(q)`: touching intervals count as earlier.
pub fn earlier(trace: &Trace, p: ProcessId, q: ProcessId) -> Result<bool, ChronoError> {
    let (a, b) = intervals(trace, p, q)?;
    Ok(a.end <= b.start)
}

/// Neither process is earlier than the other.
pub fn simultaneous(trace: &Trace, p: ProcessId, q: ProcessId) -> Result<bool, ChronoError> {
    let (a, b) = intervals(trace, p, q)?;
    Ok(a.start < b.end && b.start < a.end)
}

/// Reflexive, symmetric overlap relation as adjacency rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimultaneityRelation {
    rows: Vec<ProcSet>,
}

impl SimultaneityRelation {
    pub fn from_trace(trace: &Trace) -> Result<Self, ChronoError> {
        if !trace.is_timed() {
            return Err(ChronoError::Untimed);
        }
        let n = trace.process_count();
        let mut rows = vec![ProcSet::empty(n); n];
        for p in trace.process_ids() {
            for q in trace.process_ids() {
                if simultaneous(trace, p, q)? {
                    rows[p.0].insert(q.0);
                }
            }
        }
        Ok(SimultaneityRelation { rows })
    }

    pub fn related(&self, p: ProcessId, q: ProcessId) -> bool {
        self.rows[p.0].contains(q.0)
    }

    pub fn row(&self, p: ProcessId) -> &ProcSet {
        &self.rows[p.0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TimePoint {
    members: ProcSet,
}

impl TimePoint {
    pub fn members(&self) -> &ProcSet {
        &self.members
    }

    pub fn contains(&self, p: ProcessId) -> bool {
        self.members.contains(p.0)
    }
}

/// The time points of a trace in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeLine {
    points: Vec<TimePoint>,
    process_count: usize,
}

impl TimeLine {
    pub fn points(&self) -> &[TimePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// All time points, as a set of indices.
    pub fn all(&self) -> BitSet {
        BitSet::full(self.points.len())
    }

    /// `[p]`: indices of the time points containing `p`.
    pub fn interval_of_process(&self, p: ProcessId) -> Result<BitSet, ChronoError> {
        if p.0 >= self.process_count {
            return Err(ChronoError::UnknownProcess(p.0));
        }
        Ok(BitSet::from_indices(
            self.points.len(),
            self.points.iter().enumerate().filter(|(_, t)| t.contains(p)).map(|(i, _)| i),
        ))
    }
}

/// Maximal cliques of the simultaneity relation, by a sweep over interval
/// boundaries.
///
/// Boundaries are visited in time order with endings before beginnings at
/// equal timestamps. The active set is a maximal clique exactly when an
/// ending follows one or more beginnings, and cliques are emitted in the
/// order of the time points.
pub fn time_points(trace: &Trace) -> Result<TimeLine, ChronoError> {
    if !trace.is_timed() {
        return Err(ChronoError::Untimed);
    }
    let n = trace.process_count();
    // (time, is_start, process)
    let mut events = Vec::with_capacity(2 * n);
    for p in trace.process_ids() {
        let iv = trace.interval(p).expect("timed");
        events.push((&iv.start, true, p.0));
        events.push((&iv.end, false, p.0));
    }
    events.sort();

    let mut active = ProcSet::empty(n);
    let mut rising = false;
    let mut points = Vec::new();
    for (_, is_start, p) in events {
        if is_start {
            active.insert(p);
            rising = true;
        } else {
            if rising {
                points.push(TimePoint { members: active.clone() });
                rising = false;
            }
            active.remove(p);
        }
    }
    Ok(TimeLine { points, process_count: n })
}

/// `a < b`: some process only in `a` is earlier than some process only in `b`.
pub fn point_precedes(trace: &Trace, a: &TimePoint, b: &TimePoint) -> Result<bool, ChronoError> {
    let only_a = a.members.difference(&b.members);
    let only_b = b.members.difference(&a.members);
    for p in &only_a {
        for q in &only_b {
            if earlier(trace, ProcessId(p), ProcessId(q))? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
