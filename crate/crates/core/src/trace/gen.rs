//! Seeded random trace generation for property tests and sweeps.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Trace, TraceError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("need at least one site and one process per site")]
    EmptyShape,
    #[error("requested {requested} messages but only {placed} sender/receiver pairs are admissible")]
    Unsatisfiable { requested: usize, placed: usize },
    #[error(transparent)]
    Trace(#[from] TraceError),
}

/// Generates a fully timed, valid trace.
///
/// Integer timestamps are drawn first: each site starts at 0, 1 or 2 and its
/// processes last 1 to 3 units. Messages are then sampled without replacement
/// among the cross-site pairs with `end(sender) < start(receiver)`, which
/// keeps the timing valid and happened-before acyclic. Sites are named
/// `s1, s2, ...`, processes `s1p1, s1p2, ...`.
pub fn gen_random(seed: u64, n_sites: usize, procs_per_site: usize, n_messages: usize) -> Result<Trace, GenError> {
    if n_sites == 0 || procs_per_site == 0 {
        return Err(GenError::EmptyShape);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut builder = Trace::builder();
    let mut spans = Vec::with_capacity(n_sites * procs_per_site);
    let mut names = Vec::with_capacity(n_sites * procs_per_site);
    for s in 1..=n_sites {
        let procs: Vec<String> = (1..=procs_per_site).map(|p| format!("s{s}p{p}")).collect();
        builder.site(&format!("s{s}"), &procs)?;
        let mut t: i64 = rng.random_range(0..=2);
        for _ in 0..procs_per_site {
            let next = t + rng.random_range(1..=3);
            spans.push((s, t, next));
            t = next;
        }
        names.extend(procs);
    }
    let candidates: Vec<(usize, usize)> = (0..spans.len())
        .flat_map(|a| (0..spans.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| spans[a].0 != spans[b].0 && spans[a].2 < spans[b].1)
        .collect();
    if candidates.len() < n_messages {
        return Err(GenError::Unsatisfiable {
            requested: n_messages,
            placed: candidates.len(),
        });
    }
    let mut chosen = sample(&mut rng, candidates.len(), n_messages).into_vec();
    chosen.sort_unstable();
    for i in chosen {
        let (a, b) = candidates[i];
        builder.message(&names[a], &names[b])?;
    }
    for (name, &(_, start, end)) in names.iter().zip(&spans) {
        builder.time(name, start, end)?;
    }
    Ok(builder.build()?)
}
