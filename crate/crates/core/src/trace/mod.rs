//! Traces: sites, their processes, messages, and optional timing.

mod gen;
mod parse;
mod time;

use std::collections::HashMap;
use std::fmt;

pub use gen::{gen_random, GenError};
pub use parse::{parse_trace, ParseError, ParseErrorKind};
pub use time::{InvalidTimestamp, Timestamp};

use crate::causal::{self, CausalError};

/// Global ordinal of a process. Ordinals follow (site index, position) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProcessId(pub usize);

impl ProcessId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Process {
    pub name: String,
    pub site: usize,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Site {
    pub name: String,
    first: usize,
    len: usize,
}

impl Site {
    pub fn processes(&self) -> impl ExactSizeIterator<Item = ProcessId> + '_ {
        (self.first..self.first + self.len).map(ProcessId)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// A message from the process ending with the send event to the process
/// beginning with the receive event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Message {
    pub sender: ProcessId,
    pub receiver: ProcessId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub start: Timestamp,
    pub end: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("site `{0}` has no processes")]
    EmptySite(String),
    #[error("unknown process `{0}`")]
    UnknownProcess(String),
    #[error("intra-site message {sender} -> {receiver}")]
    IntraSiteMessage { sender: String, receiver: String },
    #[error("duplicate time entry for `{0}`")]
    DuplicateTime(String),
    #[error("partial timing: untimed processes {}", .0.join(", "))]
    PartialTiming(Vec<String>),
}

/// An immutable trace. Build one with [`TraceBuilder`] or [`parse_trace`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    sites: Vec<Site>,
    processes: Vec<Process>,
    messages: Vec<Message>,
    timing: Option<Vec<Interval>>,
    by_name: HashMap<String, ProcessId>,
}

impl Trace {
    pub fn builder() -> TraceBuilder {
        TraceBuilder::default()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn processes(&self) -> &[Process] {
        &self.processes
    }

    pub fn process_count(&self) -> usize {
        self.processes.len()
    }

    pub fn process_ids(&self) -> impl ExactSizeIterator<Item = ProcessId> {
        (0..self.processes.len()).map(ProcessId)
    }

    pub fn process(&self, id: ProcessId) -> &Process {
        &self.processes[id.0]
    }

    pub fn name(&self, id: ProcessId) -> &str {
        &self.processes[id.0].name
    }

    pub fn lookup(&self, name: &str) -> Option<ProcessId> {
        self.by_name.get(name).copied()
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn is_timed(&self) -> bool {
        self.timing.is_some()
    }

    pub fn interval(&self, id: ProcessId) -> Option<&Interval> {
        self.timing.as_ref().map(|t| &t[id.0])
    }

    /// The same trace with timing dropped.
    pub fn untimed(&self) -> Trace {
        Trace {
            timing: None,
            ..self.clone()
        }
    }

    /// Formats a process set as `{a, b, c}` in ordinal order.
    pub fn format_set(&self, set: &crate::ProcSet) -> String {
        let names: Vec<&str> = set.iter().map(|i| self.processes[i].name.as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }

    pub fn set_names(&self, set: &crate::ProcSet) -> Vec<String> {
        set.iter().map(|i| self.processes[i].name.clone()).collect()
    }

    /// Resolves names to a process set.
    pub fn set_of(&self, names: &[&str]) -> Result<crate::ProcSet, TraceError> {
        let mut set = crate::ProcSet::empty(self.process_count());
        for name in names {
            let id = self
                .lookup(name)
                .ok_or_else(|| TraceError::UnknownProcess(name.to_string()))?;
            set.insert(id.0);
        }
        Ok(set)
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Default)]
pub struct TraceBuilder {
    sites: Vec<Site>,
    processes: Vec<Process>,
    messages: Vec<Message>,
    times: Vec<Option<Interval>>,
    by_name: HashMap<String, ProcessId>,
    site_names: HashMap<String, usize>,
}

impl TraceBuilder {
    pub fn site<S: AsRef<str>>(&mut self, name: &str, processes: &[S]) -> Result<&mut Self, TraceError> {
        if !is_valid_name(name) {
            return Err(TraceError::InvalidName(name.to_string()));
        }
        if self.site_names.contains_key(name) {
            return Err(TraceError::DuplicateName(name.to_string()));
        }
        if processes.is_empty() {
            return Err(TraceError::EmptySite(name.to_string()));
        }
        for (i, proc_name) in processes.iter().enumerate() {
            let proc_name = proc_name.as_ref();
            if !is_valid_name(proc_name) {
                return Err(TraceError::InvalidName(proc_name.to_string()));
            }
            if self.by_name.contains_key(proc_name) || processes[..i].iter().any(|p| p.as_ref() == proc_name) {
                return Err(TraceError::DuplicateName(proc_name.to_string()));
            }
        }
        let first = self.processes.len();
        let site = self.sites.len();
        for (position, proc_name) in processes.iter().enumerate() {
            let proc_name = proc_name.as_ref();
            self.by_name.insert(proc_name.to_string(), ProcessId(self.processes.len()));
            self.processes.push(Process {
                name: proc_name.to_string(),
                site,
                position,
            });
            self.times.push(None);
        }
        self.site_names.insert(name.to_string(), site);
        self.sites.push(Site {
            name: name.to_string(),
            first,
            len: processes.len(),
        });
        Ok(self)
    }

    fn resolve(&self, name: &str) -> Result<ProcessId, TraceError> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| TraceError::UnknownProcess(name.to_string()))
    }

    pub fn message(&mut self, sender: &str, receiver: &str) -> Result<&mut Self, TraceError> {
        let s = self.resolve(sender)?;
        let r = self.resolve(receiver)?;
        if self.processes[s.0].site == self.processes[r.0].site {
            return Err(TraceError::IntraSiteMessage {
                sender: sender.to_string(),
                receiver: receiver.to_string(),
            });
        }
        self.messages.push(Message { sender: s, receiver: r });
        Ok(self)
    }

    pub fn time(
        &mut self,
        process: &str,
        start: impl Into<Timestamp>,
        end: impl Into<Timestamp>,
    ) -> Result<&mut Self, TraceError> {
        let id = self.resolve(process)?;
        let slot = &mut self.times[id.0];
        if slot.is_some() {
            return Err(TraceError::DuplicateTime(process.to_string()));
        }
        *slot = Some(Interval {
            start: start.into(),
            end: end.into(),
        });
        Ok(self)
    }

    pub fn build(&mut self) -> Result<Trace, TraceError> {
        let b = std::mem::take(self);
        let timed = b.times.iter().filter(|t| t.is_some()).count();
        let timing = if timed == 0 {
            None
        } else if timed < b.times.len() {
            let missing = b
                .times
                .iter()
                .zip(&b.processes)
                .filter(|(t, _)| t.is_none())
                .map(|(_, p)| p.name.clone())
                .collect();
            return Err(TraceError::PartialTiming(missing));
        } else {
            Some(b.times.into_iter().map(|t| t.expect("counted")).collect())
        };
        Ok(Trace {
            sites: b.sites,
            processes: b.processes,
            messages: b.messages,
            timing,
            by_name: b.by_name,
        })
    }
}

/// Writes the line-oriented trace format, byte-stable under re-parsing.
impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for site in &self.sites {
            write!(f, "site {} :", site.name)?;
            for id in site.processes() {
                write!(f, " {}", self.name(id))?;
            }
            writeln!(f)?;
        }
        for m in &self.messages {
            writeln!(f, "msg {} -> {}", self.name(m.sender), self.name(m.receiver))?;
        }
        if let Some(timing) = &self.timing {
            for (p, iv) in self.processes.iter().zip(timing) {
                writeln!(f, "time {} = {} .. {}", p.name, iv.start, iv.end)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonPositiveDuration { process: String },
    Gap { site: String, before: String, after: String },
    Overlap { site: String, before: String, after: String },
    MessageTiming { sender: String, receiver: String },
    CausalCycle { edges: Vec<(String, String)> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositiveDuration { process } => {
                write!(f, "non-positive duration for process {process}")
            }
            Violation::Gap { site, before, after } => {
                write!(f, "gap at site {site} between {before} and {after}")
            }
            Violation::Overlap { site, before, after } => {
                write!(f, "overlap at site {site} between {before} and {after}")
            }
            Violation::MessageTiming { sender, receiver } => write!(
                f,
                "message {sender} -> {receiver} is not received strictly after it is sent"
            ),
            Violation::CausalCycle { edges } => {
                let path: Vec<String> = edges.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
                write!(f, "causal cycle: {}", path.join(", "))
            }
        }
    }
}

/// Lists every violated trace invariant; an empty report means valid.
pub fn validate(trace: &Trace) -> Vec<Violation> {
    let mut report = Vec::new();
    if let Some(timing) = &trace.timing {
        for (p, iv) in trace.processes.iter().zip(timing) {
            if iv.end <= iv.start {
                report.push(Violation::NonPositiveDuration { process: p.name.clone() });
            }
        }
        for site in &trace.sites {
            let ids: Vec<ProcessId> = site.processes().collect();
            for pair in ids.windows(2) {
                let (a, b) = (&timing[pair[0].0], &timing[pair[1].0]);
                let names = || (trace.name(pair[0]).to_string(), trace.name(pair[1]).to_string());
                if a.end < b.start {
                    let (before, after) = names();
                    report.push(Violation::Gap { site: site.name.clone(), before, after });
                } else if a.end > b.start {
                    let (before, after) = names();
                    report.push(Violation::Overlap { site: site.name.clone(), before, after });
                }
            }
        }
        for m in &trace.messages {
            if timing[m.sender.0].end >= timing[m.receiver.0].start {
                report.push(Violation::MessageTiming {
                    sender: trace.name(m.sender).to_string(),
                    receiver: trace.name(m.receiver).to_string(),
                });
            }
        }
    }
    if let Err(CausalError::Cycle { edges }) = causal::happened_before(trace) {
        report.push(Violation::CausalCycle { edges });
    }
    report
}
