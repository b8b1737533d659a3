//! The ortholattice of bi-orthogonally closed process sets.
//!
//! `ortho(A) = { q | C(q, r) for all r in A }` is the intersection of the
//! neighborhoods of the members of `A` (all of Proc when `A` is empty). A set
//! is closed when `ortho(ortho(A)) = A`. The closed sets are closed under
//! intersection but generally not under union; join is the De Morgan dual
//! of meet.

mod laws;

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

pub use laws::{check_laws, check_laws_with, Counterexample, Law, LawVerdict};

use crate::causal::CausalStructure;
use crate::exec::Execution;
use crate::trace::Trace;
use crate::ProcSet;

pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("element cap exceeded: {reached} closed sets generated, cap is {cap}")]
    CapExceeded { reached: usize, cap: usize },
    #[error("element cap must be positive")]
    ZeroCap,
}

/// `{ q | C(q, r) for all r in a }`.
pub fn ortho(cs: &CausalStructure, a: &ProcSet) -> ProcSet {
    ortho_in(cs.neighborhoods(), a)
}

fn ortho_in(neighborhoods: &[ProcSet], a: &ProcSet) -> ProcSet {
    let mut out = ProcSet::full(neighborhoods.len());
    for r in a {
        out.intersect_with(&neighborhoods[r]);
    }
    out
}

/// Least closed set containing `a`.
pub fn close(cs: &CausalStructure, a: &ProcSet) -> ClosedSet {
    ClosedSet(ortho(cs, &ortho(cs, a)))
}

pub fn is_closed(cs: &CausalStructure, a: &ProcSet) -> bool {
    close(cs, a).0 == *a
}

/// A process set equal to its double orthocomplement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClosedSet(ProcSet);

impl ClosedSet {
    /// Wraps a set already known to be closed, e.g. an orthocomplement or
    /// an intersection of closed sets.
    pub(crate) fn assume_closed(members: ProcSet) -> ClosedSet {
        ClosedSet(members)
    }

    pub fn members(&self) -> &ProcSet {
        &self.0
    }

    pub fn into_members(self) -> ProcSet {
        self.0
    }

    pub fn is_subset(&self, other: &ClosedSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl AsRef<ProcSet> for ClosedSet {
    fn as_ref(&self) -> &ProcSet {
        &self.0
    }
}

/// All closed sets of a causal structure in canonical order (cardinality,
/// then lexicographic on sorted member ordinals), with the orthocomplement
/// as an index map. Index 0 is the empty set and the last index is Proc.
#[derive(Debug, Clone)]
pub struct OrthoLattice {
    neighborhoods: Vec<ProcSet>,
    elements: Vec<ClosedSet>,
    index: HashMap<ProcSet, usize>,
    complement: Vec<usize>,
}

pub fn enumerate_closed(cs: &CausalStructure, cap: usize) -> Result<OrthoLattice, LatticeError> {
    enumerate_closed_with(cs, cap, Execution::default())
}

/// Generates the Moore family spanned by Proc and every neighborhood `N(p)`.
///
/// Each closed set is `ortho(B)` for `B = ortho(A)`, an intersection of
/// neighborhoods, so the intersection closure of the neighborhoods (plus
/// Proc for the empty intersection) is exactly the family of closed sets.
/// The closure runs in rounds: every element of the current frontier is
/// intersected with every element found so far.
pub fn enumerate_closed_with(cs: &CausalStructure, cap: usize, exec: Execution) -> Result<OrthoLattice, LatticeError> {
    if cap == 0 {
        return Err(LatticeError::ZeroCap);
    }
    let n = cs.process_count();
    let mut store: HashSet<ProcSet> = HashSet::new();
    let mut all: Vec<ProcSet> = Vec::new();
    for seed in std::iter::once(ProcSet::full(n)).chain(cs.neighborhoods().iter().cloned()) {
        if store.insert(seed.clone()) {
            all.push(seed);
        }
    }
    let over_cap = |reached: usize| LatticeError::CapExceeded { reached, cap };
    if all.len() > cap {
        return Err(over_cap(all.len()));
    }
    let mut frontier = 0..all.len();
    while !frontier.is_empty() {
        let (start, known) = (frontier.start, all.len());
        let found: Vec<Vec<ProcSet>> = exec.map(frontier.len(), |k| {
            let f = &all[start + k];
            let mut local: Vec<ProcSet> = Vec::new();
            for e in &all[..known] {
                let x = f.intersection(e);
                if !store.contains(&x) && !local.contains(&x) {
                    local.push(x);
                }
            }
            local
        });
        for x in found.into_iter().flatten() {
            if store.insert(x.clone()) {
                all.push(x);
                if all.len() > cap {
                    return Err(over_cap(all.len()));
                }
            }
        }
        frontier = known..all.len();
    }
    Ok(OrthoLattice::from_family(cs.neighborhoods().to_vec(), all))
}

impl OrthoLattice {
    fn from_family(neighborhoods: Vec<ProcSet>, mut family: Vec<ProcSet>) -> Self {
        family.sort_by(|a, b| a.canonical_cmp(b));
        let index: HashMap<ProcSet, usize> = family.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let complement = family
            .iter()
            .map(|s| index[&ortho_in(&neighborhoods, s)])
            .collect();
        OrthoLattice {
            neighborhoods,
            elements: family.into_iter().map(ClosedSet).collect(),
            index,
            complement,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn process_count(&self) -> usize {
        self.neighborhoods.len()
    }

    pub fn elements(&self) -> &[ClosedSet] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ClosedSet {
        &self.elements[i]
    }

    pub fn index_of(&self, set: &ProcSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn complement_indices(&self) -> &[usize] {
        &self.complement
    }

    pub fn complement_of(&self, i: usize) -> usize {
        self.complement[i]
    }

    pub fn ortho(&self, a: &ProcSet) -> ProcSet {
        ortho_in(&self.neighborhoods, a)
    }

    pub fn complement(&self, a: &ClosedSet) -> ClosedSet {
        ClosedSet(self.ortho(&a.0))
    }

    /// Infimum: set intersection.
    pub fn meet(&self, a: &ClosedSet, b: &ClosedSet) -> ClosedSet {
        ClosedSet(a.0.intersection(&b.0))
    }

    /// Supremum: `ortho(ortho(a) ∩ ortho(b))`.
    pub fn join(&self, a: &ClosedSet, b: &ClosedSet) -> ClosedSet {
        ClosedSet(self.ortho(&self.ortho(&a.0).intersection(&self.ortho(&b.0))))
    }

    pub fn meet_index(&self, i: usize, j: usize) -> usize {
        let x = self.elements[i].0.intersection(&self.elements[j].0);
        *self.index.get(&x).expect("closed sets are closed under intersection")
    }

    pub fn join_index(&self, i: usize, j: usize) -> usize {
        self.complement[self.meet_index(self.complement[i], self.complement[j])]
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.elements[i].0.is_subset(&self.elements[j].0)
    }

    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        self.hasse_edges_with(Execution::default())
    }

    /// Cover pairs `(lower, upper)` of the inclusion order, sorted.
    pub fn hasse_edges_with(&self, exec: Execution) -> Vec<(usize, usize)> {
        let per_upper = exec.map(self.len(), |b| {
            let below: Vec<usize> = (0..b)
                .filter(|&a| self.elements[a].0.len() < self.elements[b].0.len() && self.le(a, b))
                .collect();
            below
                .iter()
                .copied()
                .filter(|&a| {
                    !below
                        .iter()
                        .any(|&c| c != a && self.elements[a].0.len() < self.elements[c].0.len() && self.le(a, c))
                })
                .map(|a| (a, b))
                .collect::<Vec<_>>()
        });
        let mut edges: Vec<(usize, usize)> = per_upper.into_iter().flatten().collect();
        edges.sort_unstable();
        edges
    }

    /// Graphviz rendering: one node per element, one edge per cover.
    pub fn to_dot(&self, trace: &Trace) -> String {
        let mut out = String::from("digraph lattice {\n    rankdir=BT;\n");
        for (i, e) in self.elements.iter().enumerate() {
            let label = trace.format_set(&e.0);
            let _ = writeln!(out, "    n{i} [label=\"{label}\"];");
        }
        for (a, b) in self.hasse_edges() {
            let _ = writeln!(out, "    n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}
