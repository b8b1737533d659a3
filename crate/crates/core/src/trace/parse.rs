//! Line-oriented trace format.
//!
//! ```text
//! # comment
//! site <site_name> : <proc> <proc> ...
//! msg <proc> -> <proc>
//! time <proc> = <start> .. <end>
//! ```

use std::fmt;

use super::{Timestamp, Trace, TraceError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    Trace(TraceError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::Trace(err) => write!(f, "{err}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Name(&'a str),
    Number(&'a str),
    Colon,
    Arrow,
    Equals,
    Range,
    Stray(char),
}

impl fmt::Display for Tok<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(s) | Tok::Number(s) => write!(f, "`{s}`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Range => f.write_str("`..`"),
            Tok::Stray(c) => write!(f, "`{c}`"),
        }
    }
}

/// Tokens of a single line with 1-based columns.
fn lex(line: &str, line_no: usize) -> Result<Vec<(usize, Tok<'_>)>, ParseError> {
    let bytes = line.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    let err = |col: usize, msg: String| ParseError {
        line: line_no,
        column: col,
        kind: ParseErrorKind::Syntax(msg),
    };
    while i < bytes.len() {
        let c = bytes[i];
        let col = line[..i].chars().count() + 1;
        match c {
            b' ' | b'\t' | b'\r' => i += 1,
            b':' => {
                toks.push((col, Tok::Colon));
                i += 1;
            }
            b'=' => {
                toks.push((col, Tok::Equals));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                toks.push((col, Tok::Arrow));
                i += 2;
            }
            b'.' if bytes.get(i + 1) == Some(&b'.') => {
                toks.push((col, Tok::Range));
                i += 2;
            }
            b'+' | b'-' | b'.' | b'0'..=b'9' => {
                let start = i;
                if c == b'+' || c == b'-' {
                    i += 1;
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                // A single decimal point, unless it begins a `..`.
                if i < bytes.len() && bytes[i] == b'.' && bytes.get(i + 1) != Some(&b'.') {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = &line[start..i];
                if text.parse::<Timestamp>().is_err() {
                    return Err(err(col, format!("invalid number `{text}`")));
                }
                toks.push((col, Tok::Number(text)));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((col, Tok::Name(&line[start..i])));
            }
            _ => {
                // Reported by the parser, which knows what it expected here.
                let ch = line[i..].chars().next().unwrap_or('?');
                toks.push((col, Tok::Stray(ch)));
                i += ch.len_utf8();
            }
        }
    }
    Ok(toks)
}

struct LineParser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> LineParser<'a> {
    fn syntax(&self, column: usize, msg: String) -> ParseError {
        ParseError {
            line: self.line,
            column,
            kind: ParseErrorKind::Syntax(msg),
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, Tok<'a>), ParseError> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(self.syntax(self.end_col, format!("expected {what}, found end of line"))),
        }
    }

    fn name(&mut self) -> Result<(usize, &'a str), ParseError> {
        match self.next("a name")? {
            (col, Tok::Name(s)) => Ok((col, s)),
            (col, t) => Err(self.syntax(col, format!("expected a name, found {t}"))),
        }
    }

    fn number(&mut self) -> Result<Timestamp, ParseError> {
        match self.next("a number")? {
            (_, Tok::Number(s)) => Ok(s.parse().expect("validated by lexer")),
            (col, t) => Err(self.syntax(col, format!("expected a number, found {t}"))),
        }
    }

    fn expect(&mut self, want: Tok<'static>) -> Result<(), ParseError> {
        let what = want.to_string();
        match self.next(&what)? {
            (_, t) if t == want => Ok(()),
            (col, t) => Err(self.syntax(col, format!("expected {what}, found {t}"))),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some((col, t)) => Err(self.syntax(*col, format!("unexpected trailing {t}"))),
        }
    }
}

/// Parses the trace text format. Timing is present iff any `time` line is.
pub fn parse_trace(text: &str) -> Result<Trace, ParseError> {
    let mut builder = Trace::builder();
    let mut seen_body = false;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("");
        let toks = lex(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut p = LineParser {
            toks,
            pos: 0,
            line: line_no,
            end_col: line.chars().count() + 1,
        };
        let trace_err = |column: usize, e: TraceError| ParseError {
            line: line_no,
            column,
            kind: ParseErrorKind::Trace(e),
        };
        let (kw_col, keyword) = p.name()?;
        match keyword {
            "site" => {
                if seen_body {
                    return Err(p.syntax(kw_col, "`site` lines must precede `msg` and `time` lines".into()));
                }
                let (name_col, site_name) = p.name()?;
                p.expect(Tok::Colon)?;
                let mut procs = Vec::new();
                while p.pos < p.toks.len() {
                    procs.push(p.name()?);
                }
                let names: Vec<&str> = procs.iter().map(|(_, n)| *n).collect();
                if let Err(e) = builder.site(site_name, &names) {
                    let col = match &e {
                        TraceError::DuplicateName(n) | TraceError::InvalidName(n) => procs
                            .iter()
                            .rev()
                            .find(|(_, p)| p == n)
                            .map_or(name_col, |(c, _)| *c),
                        _ => name_col,
                    };
                    return Err(trace_err(col, e));
                }
            }
            "msg" => {
                seen_body = true;
                let (col, sender) = p.name()?;
                p.expect(Tok::Arrow)?;
                let (col2, receiver) = p.name()?;
                p.finish()?;
                if let Err(e) = builder.message(sender, receiver) {
                    let col = match &e {
                        TraceError::UnknownProcess(n) if n == receiver && n != sender => col2,
                        _ => col,
                    };
                    return Err(trace_err(col, e));
                }
            }
            "time" => {
                seen_body = true;
                let (col, process) = p.name()?;
                p.expect(Tok::Equals)?;
                let start = p.number()?;
                p.expect(Tok::Range)?;
                let end = p.number()?;
                p.finish()?;
                builder.time(process, start, end).map_err(|e| trace_err(col, e))?;
            }
            other => {
                return Err(p.syntax(kw_col, format!("unknown directive `{other}`")));
            }
        }
    }
    builder.build().map_err(|e| ParseError {
        line: last_line,
        column: 1,
        kind: ParseErrorKind::Trace(e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::trace::{gen_random, validate};
    use proptest::prelude::*;

    #[test]
    fn minimal_site() {
        let t = parse_trace("site x: a b").unwrap();
        assert_eq!(t.sites().len(), 1);
        assert_eq!(t.process_count(), 2);
        assert!(t.messages().is_empty());
        assert!(!t.is_timed());
    }

    #[test]
    fn fig2_fixture_is_timed_with_twelve_processes() {
        let t = parse_trace(fixtures::FIG2).unwrap();
        assert!(t.is_timed());
        assert_eq!(t.process_count(), 12);
        assert_eq!(t.sites().len(), 3);
    }

    #[test]
    fn intra_site_message_is_rejected() {
        let e = parse_trace("site x: a\nmsg a -> a").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(matches!(e.kind, ParseErrorKind::Trace(TraceError::IntraSiteMessage { .. })));
    }

    #[test]
    fn error_positions() {
        let e = parse_trace("site x : a b\nmsg a => b").unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        let e = parse_trace("site x : a a").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Trace(TraceError::DuplicateName("a".into())));
        assert_eq!(e.column, 12);
        let e = parse_trace("site x : a\nsite y : b\nmsg a -> zz").unwrap_err();
        assert_eq!((e.line, e.column), (3, 10));
        assert_eq!(e.kind, ParseErrorKind::Trace(TraceError::UnknownProcess("zz".into())));
        let e = parse_trace("site x : a b\ntime a = 0 .. 1\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Trace(TraceError::PartialTiming(vec!["b".into()])));
        let e = parse_trace("site x : a\ntime a = 0 ..\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 14));
        assert!(parse_trace("msg a -> b\nsite x : a").is_err());
        assert!(parse_trace("site x : a\ntime a = 0 .. 1\nsite y : b").is_err());
        assert!(parse_trace("sight x : a").is_err());
        assert!(parse_trace("site x : a\ntime a = 1e3 .. 2").is_err());
    }

    #[test]
    fn comments_blank_lines_and_tight_spacing() {
        let t = parse_trace("# header\n\nsite x:a b # trailing\nsite y:c\nmsg a->c\ntime a=0..1\ntime b=1..2.5\ntime c=-1..+3\n")
            .unwrap();
        assert_eq!(t.messages().len(), 1);
        assert_eq!(
            t.to_string(),
            "site x : a b\nsite y : c\nmsg a -> c\ntime a = 0 .. 1\ntime b = 1 .. 2.5\ntime c = -1 .. 3\n"
        );
    }

    #[test]
    fn fixtures_round_trip_byte_stable() {
        for (name, trace) in fixtures::all() {
            let text = trace.to_string();
            let again = parse_trace(&text).unwrap();
            assert_eq!(again, trace, "{name}");
            assert_eq!(again.to_string(), text, "{name}");
        }
    }

    proptest! {
        #[test]
        fn generated_traces_round_trip(seed in any::<u64>(), sites in 1usize..5, procs in 1usize..5, msgs in 0usize..4) {
            if let Ok(trace) = gen_random(seed, sites, procs, msgs) {
                prop_assert!(validate(&trace).is_empty());
                let text = trace.to_string();
                let again = parse_trace(&text).unwrap();
                prop_assert_eq!(&again, &trace);
                prop_assert_eq!(again.to_string(), text);
                let untimed = trace.untimed();
                prop_assert_eq!(parse_trace(&untimed.to_string()).unwrap(), untimed);
            }
        }
    }
}
