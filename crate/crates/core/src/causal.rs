//! Happened-before, causality and temporal containment.

use std::fmt;

use crate::trace::{ProcessId, Trace};
use crate::ProcSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CausalError {
    #[error("causal cycle: {}", fmt_edges(.edges))]
    Cycle { edges: Vec<(String, String)> },
    #[error("unknown process ordinal {0}")]
    UnknownProcess(usize),
    #[error("temporal containment needs a non-empty cover set")]
    EmptyCovers,
}

fn fmt_edges(edges: &[(String, String)]) -> String {
    edges.iter().map(|(a, b)| format!("{a} -> {b}")).collect::<Vec<_>>().join(", ")
}

/// Happened-before and causality over the processes of one trace.
///
/// Both relations are stored as dense row bit sets: row `p` of
/// `happened_before` holds every `q` with `B(p, q)`, and row `p` of
/// `causality` is the neighborhood `N(p) = { q | C(p, q) }`.
#[derive(Clone, PartialEq, Eq)]
pub struct CausalStructure {
    happened_before: Vec<ProcSet>,
    causality: Vec<ProcSet>,
}

/// Direct happened-before edges: consecutive same-site processes and messages.
pub(crate) fn generator_edges(trace: &Trace) -> Vec<Vec<usize>> {
    let mut succ = vec![Vec::new(); trace.process_count()];
    for site in trace.sites() {
        let ids: Vec<ProcessId> = site.processes().collect();
        for w in ids.windows(2) {
            succ[w[0].0].push(w[1].0);
        }
    }
    for m in trace.messages() {
        succ[m.sender.0].push(m.receiver.0);
    }
    succ
}

/// Builds the smallest transitive relation containing the same-site order and
/// the message edges. Fails with one cycle's edge list if that relation would
/// be reflexive somewhere.
pub fn happened_before(trace: &Trace) -> Result<CausalStructure, CausalError> {
    let n = trace.process_count();
    let succ = generator_edges(trace);
    let order = topological_order(&succ).map_err(|cycle| CausalError::Cycle {
        edges: cycle
            .windows(2)
            .map(|w| (trace.name(ProcessId(w[0])).to_string(), trace.name(ProcessId(w[1])).to_string()))
            .collect(),
    })?;

    // Sinks first: each row is the union of its successors' rows.
    let mut hb = vec![ProcSet::empty(n); n];
    for &v in order.iter().rev() {
        let mut row = ProcSet::empty(n);
        for &w in &succ[v] {
            row.insert(w);
            row.union_with(&hb[w]);
        }
        hb[v] = row;
    }
    Ok(CausalStructure::from_happened_before(hb))
}

/// Topological order of the generator graph, or a cycle as a closed vertex
/// walk `[v0, v1, ..., v0]`.
fn topological_order(succ: &[Vec<usize>]) -> Result<Vec<usize>, Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let n = succ.len();
    let mut mark = vec![Mark::New; n];
    let mut post = Vec::with_capacity(n);
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        mark[root] = Mark::Open;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = succ[v].get(*next) {
                *next += 1;
                match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Open;
                        stack.push((w, 0));
                    }
                    Mark::Open => {
                        let from = stack.iter().position(|&(u, _)| u == w).expect("open vertex on stack");
                        let mut cycle: Vec<usize> = stack[from..].iter().map(|&(u, _)| u).collect();
                        cycle.push(w);
                        return Err(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[v] = Mark::Done;
                post.push(v);
                stack.pop();
            }
        }
    }
    post.reverse();
    Ok(post)
}

impl CausalStructure {
    pub fn from_trace(trace: &Trace) -> Result<Self, CausalError> {
        happened_before(trace)
    }

    fn from_happened_before(happened_before: Vec<ProcSet>) -> Self {
        let n = happened_before.len();
        let mut causality = happened_before.clone();
        for (p, row) in happened_before.iter().enumerate() {
            for q in row {
                causality[q].insert(p);
            }
        }
        debug_assert!((0..n).all(|p| !causality[p].contains(p)));
        CausalStructure {
            happened_before,
            causality,
        }
    }

    pub fn process_count(&self) -> usize {
        self.causality.len()
    }

    pub fn universe(&self) -> ProcSet {
        ProcSet::full(self.process_count())
    }

    fn check(&self, p: ProcessId) -> Result<(), CausalError> {
        if p.0 < self.process_count() {
            Ok(())
        } else {
            Err(CausalError::UnknownProcess(p.0))
        }
    }

    /// `B(p, q)`.
    pub fn precedes(&self, p: ProcessId, q: ProcessId) -> Result<bool, CausalError> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.happened_before[p.0].contains(q.0))
    }

    /// `C(p, q)`: `B(p, q)` or `B(q, p)`.
    pub fn causally_related(&self, p: ProcessId, q: ProcessId) -> Result<bool, CausalError> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.causality[p.0].contains(q.0))
    }

    /// `N(p)`; panics on an unknown ordinal.
    pub fn neighborhood(&self, p: usize) -> &ProcSet {
        &self.causality[p]
    }

    pub fn neighborhoods(&self) -> &[ProcSet] {
        &self.causality
    }

    pub fn successors(&self, p: usize) -> &ProcSet {
        &self.happened_before[p]
    }

    /// True iff every process causally related to all of `covers` is causally
    /// related to `r`, i.e. the intersection of the covers' neighborhoods is
    /// contained in `N(r)`.
    pub fn temporally_contains<I>(&self, covers: I, r: ProcessId) -> Result<bool, CausalError>
    where
        I: IntoIterator<Item = ProcessId>,
    {
        self.check(r)?;
        let mut premise: Option<ProcSet> = None;
        for q in covers {
            self.check(q)?;
            match premise.as_mut() {
                Some(acc) => acc.intersect_with(&self.causality[q.0]),
                None => premise = Some(self.causality[q.0].clone()),
            }
        }
        let premise = premise.ok_or(CausalError::EmptyCovers)?;
        Ok(premise.is_subset(&self.causality[r.0]))
    }
}

impl fmt::Debug for CausalStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CausalStructure")
            .field("happened_before", &self.happened_before)
            .finish()
    }
}
