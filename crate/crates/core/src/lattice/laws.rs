//! Exhaustive law checks over the elements of an [`OrthoLattice`].

use std::fmt;
use std::str::FromStr;

use super::OrthoLattice;
use crate::exec::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    OrthoLatticeAxioms,
    DeMorgan,
    Distributivity,
    Orthomodularity,
}

impl Law {
    pub const ALL: [Law; 4] = [
        Law::OrthoLatticeAxioms,
        Law::DeMorgan,
        Law::Distributivity,
        Law::Orthomodularity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::OrthoLatticeAxioms => "ortholattice-axioms",
            Law::DeMorgan => "de-morgan",
            Law::Distributivity => "distributivity",
            Law::Orthomodularity => "orthomodularity",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown law `{s}`"))
    }
}

/// Element indices (canonical order) witnessing a failed law, with the two
/// sides of the failed identity where one applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub rule: &'static str,
    pub elements: Vec<usize>,
    pub lhs: Option<usize>,
    pub rhs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawVerdict {
    pub law: Law,
    pub counterexample: Option<Counterexample>,
}

impl LawVerdict {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub fn check_laws(lattice: &OrthoLattice, law: Law) -> LawVerdict {
    check_laws_with(lattice, law, Execution::default())
}

/// Scans element tuples in lexicographic index order and reports the first
/// failure.
pub fn check_laws_with(lattice: &OrthoLattice, law: Law, exec: Execution) -> LawVerdict {
    let counterexample = match law {
        Law::OrthoLatticeAxioms => axioms(lattice, exec),
        Law::DeMorgan => de_morgan(lattice, exec),
        Law::Distributivity => distributivity(lattice, exec),
        Law::Orthomodularity => orthomodularity(lattice, exec),
    };
    LawVerdict { law, counterexample }
}

fn cx(rule: &'static str, elements: Vec<usize>, sides: Option<(usize, usize)>) -> Counterexample {
    Counterexample {
        rule,
        elements,
        lhs: sides.map(|s| s.0),
        rhs: sides.map(|s| s.1),
    }
}

fn scan_pairs<F>(l: &OrthoLattice, exec: Execution, f: F) -> Option<Counterexample>
where
    F: Fn(usize, usize) -> Option<Counterexample> + Sync + Send,
{
    let n = l.len();
    exec.find_first(n * n, |t| f(t / n, t % n))
}

fn scan_triples<F>(l: &OrthoLattice, exec: Execution, f: F) -> Option<Counterexample>
where
    F: Fn(usize, usize, usize) -> Option<Counterexample> + Sync + Send,
{
    let n = l.len();
    exec.find_first(n * n * n, |t| f(t / (n * n), t / n % n, t % n))
}

fn axioms(l: &OrthoLattice, exec: Execution) -> Option<Counterexample> {
    let n = l.len();
    let (bot, top) = (l.bottom(), l.top());
    if !l.element(bot).members().is_empty() || !l.element(top).members().is_full() {
        return Some(cx("bounds", vec![bot, top], None));
    }
    let singles = exec.find_first(n, |a| {
        let c = l.complement_of(a);
        if l.complement_of(c) != a {
            return Some(cx("involution", vec![a], Some((l.complement_of(c), a))));
        }
        let m = l.element(a).members().intersection(l.element(c).members());
        if !m.is_empty() {
            return Some(cx("noncontradiction", vec![a], None));
        }
        let j = l.join_index(a, c);
        if j != top {
            return Some(cx("excluded-middle", vec![a], Some((j, top))));
        }
        None
    });
    if singles.is_some() {
        return singles;
    }
    let pairs = scan_pairs(l, exec, |a, b| {
        let x = l.element(a).members().intersection(l.element(b).members());
        if l.index_of(&x).is_none() {
            return Some(cx("intersection-closure", vec![a, b], None));
        }
        let (ca, cb) = (l.complement_of(a), l.complement_of(b));
        if l.le(a, b) != l.le(cb, ca) {
            return Some(cx("antitone", vec![a, b], None));
        }
        let j = l.join_index(a, b);
        if !l.le(a, j) || !l.le(b, j) {
            return Some(cx("join-upper-bound", vec![a, b], None));
        }
        let m = l.meet_index(a, b);
        if !l.le(m, a) || !l.le(m, b) {
            return Some(cx("meet-lower-bound", vec![a, b], None));
        }
        None
    });
    if pairs.is_some() {
        return pairs;
    }
    scan_triples(l, exec, |a, b, c| {
        if l.le(c, a) && l.le(c, b) && !l.le(c, l.meet_index(a, b)) {
            return Some(cx("meet-greatest", vec![a, b, c], None));
        }
        if l.le(a, c) && l.le(b, c) && !l.le(l.join_index(a, b), c) {
            return Some(cx("join-least", vec![a, b, c], None));
        }
        None
    })
}

fn de_morgan(l: &OrthoLattice, exec: Execution) -> Option<Counterexample> {
    scan_pairs(l, exec, |a, b| {
        let (ca, cb) = (l.complement_of(a), l.complement_of(b));
        let lhs = l.complement_of(l.join_index(a, b));
        let rhs = l.meet_index(ca, cb);
        if lhs != rhs {
            return Some(cx("not-join", vec![a, b], Some((lhs, rhs))));
        }
        let lhs = l.complement_of(l.meet_index(a, b));
        let rhs = l.join_index(ca, cb);
        if lhs != rhs {
            return Some(cx("not-meet", vec![a, b], Some((lhs, rhs))));
        }
        None
    })
}

/// `(a ∨ b) ∧ c = (a ∧ c) ∨ (b ∧ c)`.
fn distributivity(l: &OrthoLattice, exec: Execution) -> Option<Counterexample> {
    scan_triples(l, exec, |a, b, c| {
        let lhs = l.meet_index(l.join_index(a, b), c);
        let rhs = l.join_index(l.meet_index(a, c), l.meet_index(b, c));
        (lhs != rhs).then(|| cx("distributivity", vec![a, b, c], Some((lhs, rhs))))
    })
}

/// `a ≤ b ⇒ b = a ∨ (¬a ∧ b)`.
fn orthomodularity(l: &OrthoLattice, exec: Execution) -> Option<Counterexample> {
    scan_pairs(l, exec, |a, b| {
        if !l.le(a, b) {
            return None;
        }
        let rhs = l.join_index(a, l.meet_index(l.complement_of(a), b));
        (rhs != b).then(|| cx("orthomodularity", vec![a, b], Some((b, rhs))))
    })
}
