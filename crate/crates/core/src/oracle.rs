//! Brute-force reference for the closed-set enumeration.
//!
//! Every subset `I` of Proc is tested against the defining condition of a
//! time interval, written out with plain quantifier loops over the causality
//! matrix:
//!
//! ```text
//! for all r: ( for all p: (for all q in I: C(p, q)) => C(p, r) )  <=>  r in I
//! ```
//!
//! None of this goes through `ortho` or the Moore-family generator.

use crate::causal::CausalStructure;
use crate::exec::Execution;
use crate::lattice::OrthoLattice;
use crate::trace::ProcessId;
use crate::ProcSet;

pub const MAX_ORACLE_PROCESSES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0} processes is too many for brute force (limit {MAX_ORACLE_PROCESSES})")]
pub struct TooLarge(pub usize);

fn causality_matrix(cs: &CausalStructure) -> Vec<Vec<bool>> {
    let n = cs.process_count();
    (0..n)
        .map(|p| {
            (0..n)
                .map(|q| cs.causally_related(ProcessId(p), ProcessId(q)).expect("in range"))
                .collect()
        })
        .collect()
}

fn satisfies_condition(c: &[Vec<bool>], mask: u32) -> bool {
    let n = c.len();
    let in_set = |x: usize| mask >> x & 1 == 1;
    (0..n).all(|r| {
        let lhs = (0..n).all(|p| {
            let premise = (0..n).filter(|&q| in_set(q)).all(|q| c[p][q]);
            !premise || c[p][r]
        });
        lhs == in_set(r)
    })
}

pub fn brute_force_closed(cs: &CausalStructure) -> Result<Vec<ProcSet>, TooLarge> {
    brute_force_closed_with(cs, Execution::default())
}

/// All subsets satisfying the condition, in canonical order.
pub fn brute_force_closed_with(cs: &CausalStructure, exec: Execution) -> Result<Vec<ProcSet>, TooLarge> {
    let n = cs.process_count();
    if n > MAX_ORACLE_PROCESSES {
        return Err(TooLarge(n));
    }
    let c = causality_matrix(cs);
    let mut out: Vec<ProcSet> = exec.filter_map(1 << n, |m| {
        let mask = m as u32;
        satisfies_condition(&c, mask).then(|| ProcSet::from_mask(n, mask as u64))
    });
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub fast_count: usize,
    pub brute_count: usize,
    /// Found by brute force but missing from the enumeration.
    pub only_brute: Vec<ProcSet>,
    /// Enumerated but rejected by brute force.
    pub only_fast: Vec<ProcSet>,
}

impl OracleReport {
    pub fn matches(&self) -> bool {
        self.only_brute.is_empty() && self.only_fast.is_empty()
    }
}

/// Compares an enumerated lattice with the brute-force family.
pub fn compare(cs: &CausalStructure, lattice: &OrthoLattice) -> Result<OracleReport, TooLarge> {
    let brute = brute_force_closed(cs)?;
    let fast: Vec<&ProcSet> = lattice.elements().iter().map(|e| e.members()).collect();
    let only_brute = brute.iter().filter(|s| lattice.index_of(s).is_none()).cloned().collect();
    let only_fast = fast
        .iter()
        .filter(|s| brute.binary_search_by(|b| b.canonical_cmp(s)).is_err())
        .map(|s| (*s).clone())
        .collect();
    Ok(OracleReport {
        fast_count: fast.len(),
        brute_count: brute.len(),
        only_brute,
        only_fast,
    })
}
