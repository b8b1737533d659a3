//! Reference traces shipped with the crate.

use crate::trace::{parse_trace, Trace};

pub const FIG2: &str = include_str!("../fixtures/fig2.trace");
pub const FIG5: &str = include_str!("../fixtures/fig5.trace");
pub const MO2: &str = include_str!("../fixtures/mo2.trace");
pub const FIG7: &str = include_str!("../fixtures/fig7.trace");
pub const SINGLE_SITE: &str = include_str!("../fixtures/single-site.trace");

fn load(text: &str) -> Trace {
    parse_trace(text).expect("shipped fixture parses")
}

/// Timed, three sites, no messages.
pub fn fig2() -> Trace {
    load(FIG2)
}

/// Two sites with a round-trip message pair.
pub fn fig5() -> Trace {
    load(FIG5)
}

/// Two sites of two processes each, no messages.
pub fn mo2() -> Trace {
    load(MO2)
}

/// Three sites, four messages; see the fixture file header.
pub fn fig7() -> Trace {
    load(FIG7)
}

pub fn single_site() -> Trace {
    load(SINGLE_SITE)
}

pub fn all() -> Vec<(&'static str, Trace)> {
    vec![
        ("fig2", fig2()),
        ("fig5", fig5()),
        ("mo2", mo2()),
        ("fig7", fig7()),
        ("single-site", single_site()),
    ]
}
