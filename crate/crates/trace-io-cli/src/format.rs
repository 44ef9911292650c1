//! The `mcck-trace v1` format: line-oriented UTF-8, `#` comments, blank
//! lines ignored. Serialization is canonical (threads ascending, single
//! spaces, trailing newline), and `parse ∘ serialize` is the identity on
//! validated executions.

use exec_core::{EventSpec, MemoryOrder, PartialExecution, ThreadId};
use std::collections::HashMap;
use thiserror::Error;

pub const HEADER: &str = "mcck-trace v1";

#[derive(Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("trace is not a valid execution: {0}")]
    Invalid(#[from] exec_core::ValidateError),
}

/// One parsed event line, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub tid: ThreadId,
    pub spec: EventSpec,
    /// `from=` writer for reads and RMWs.
    pub from: Option<u64>,
}

/// Event lines in file order plus the thread count. The building block for
/// both [`parse_trace`] and streaming consumers that care about arrival
/// order.
pub fn parse_trace_events(text: &str) -> Result<(Vec<TraceEvent>, usize), ParseError> {
    let syntax = |line: usize, msg: String| ParseError::Syntax { line, msg };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, l)) if l == HEADER => {}
        Some((n, l)) => return Err(syntax(n, format!("expected `{HEADER}`, got `{l}`"))),
        None => return Err(syntax(1, format!("missing `{HEADER}` header"))),
    }
    let mut events = Vec::new();
    let mut cur: Option<ThreadId> = None;
    let mut max_tid = 0usize;
    let mut seen_tids = std::collections::HashSet::new();
    for (n, line) in lines {
        let mut tok = line.split_whitespace();
        let kw = tok.next().expect("line is nonempty");
        if kw == "thread" {
            let tid: usize = tok
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| syntax(n, "expected `thread <tid>`".into()))?;
            if tok.next().is_some() {
                return Err(syntax(n, "trailing tokens after thread id".into()));
            }
            cur = Some(tid);
            seen_tids.insert(tid);
            max_tid = max_tid.max(tid);
            continue;
        }
        let tid = cur.ok_or_else(|| syntax(n, "event line before any `thread` line".into()))?;
        let (spec, from) = parse_event_line(kw, &mut tok, n)?;
        if tok.next().is_some() {
            return Err(syntax(n, "trailing tokens".into()));
        }
        events.push(TraceEvent { tid, spec, from });
    }
    let k = if seen_tids.is_empty() { 0 } else { max_tid + 1 };
    for t in 0..k {
        if !seen_tids.contains(&t) {
            return Err(syntax(0, format!("thread ids must be dense 0..{max_tid}, missing {t}")));
        }
    }
    Ok((events, k))
}

fn parse_event_line<'a>(
    kw: &str,
    tok: &mut impl Iterator<Item = &'a str>,
    n: usize,
) -> Result<(EventSpec, Option<u64>), ParseError> {
    let syntax = |msg: String| ParseError::Syntax { line: n, msg };
    let mut next = |what: &str| {
        tok.next()
            .map(str::to_string)
            .ok_or_else(|| ParseError::Syntax { line: n, msg: format!("expected {what}") })
    };
    let parse_ord = |s: &str| {
        let ord = match s {
            "rlx" => Some(MemoryOrder::Rlx),
            "acq" => Some(MemoryOrder::Acq),
            "rel" => Some(MemoryOrder::Rel),
            "acqrel" => Some(MemoryOrder::AcqRel),
            _ => None,
        };
        ord.ok_or_else(|| ParseError::Syntax { line: n, msg: format!("bad memory order `{s}`") })
    };
    let parse_kv = |s: &str, key: &str| -> Result<u64, ParseError> {
        s.strip_prefix(key)
            .and_then(|v| v.strip_prefix('='))
            .and_then(|v| v.parse::<u64>().ok())
            .filter(|&v| v > 0)
            .ok_or_else(|| ParseError::Syntax {
                line: n,
                msg: format!("expected `{key}=<positive id>`, got `{s}`"),
            })
    };
    let check_loc = |s: &str| -> Result<String, ParseError> {
        if !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
            Ok(s.to_string())
        } else {
            Err(ParseError::Syntax { line: n, msg: format!("bad location `{s}`") })
        }
    };
    match kw {
        "w" | "r" | "u" => {
            let loc = check_loc(&next("<loc>")?)?;
            let ord = parse_ord(&next("<ord>")?)?;
            let id = parse_kv(&next("id=<n>")?, "id")?;
            match kw {
                "w" => Ok((EventSpec::write(id, &loc, ord), None)),
                "r" => {
                    let from = parse_kv(&next("from=<m>")?, "from")?;
                    Ok((EventSpec::read(id, &loc, ord), Some(from)))
                }
                _ => {
                    let from = parse_kv(&next("from=<m>")?, "from")?;
                    Ok((EventSpec::rmw(id, &loc, ord), Some(from)))
                }
            }
        }
        "f" => {
            let ord = parse_ord(&next("<ord>")?)?;
            let id = parse_kv(&next("id=<n>")?, "id")?;
            Ok((EventSpec::fence(id, ord), None))
        }
        other => Err(syntax(format!("unknown event kind `{other}`"))),
    }
}

/// Parse a full trace into a validated execution.
pub fn parse_trace(text: &str) -> Result<PartialExecution, ParseError> {
    let (events, k) = parse_trace_events(text)?;
    let mut threads: Vec<Vec<EventSpec>> = vec![Vec::new(); k];
    let mut rf: HashMap<u64, u64> = HashMap::new();
    for ev in events {
        if let Some(from) = ev.from {
            rf.insert(ev.spec.id, from);
        }
        threads[ev.tid].push(ev.spec);
    }
    Ok(PartialExecution::new(threads, rf)?)
}

/// Canonical rendering: header, threads ascending, single spaces, trailing
/// newline.
pub fn serialize_trace(x: &PartialExecution) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for t in 0..x.num_threads() {
        out.push_str(&format!("thread {t}\n"));
        for e in x.thread(t) {
            let ord = e.ord.as_str();
            let line = match e.op {
                exec_core::Op::Write => {
                    format!("w {} {ord} id={}", x.loc_name(e.loc.unwrap()), e.id)
                }
                exec_core::Op::Read => format!(
                    "r {} {ord} id={} from={}",
                    x.loc_name(e.loc.unwrap()),
                    e.id,
                    x.writer_of(e.id).expect("validated read has a writer"),
                ),
                exec_core::Op::Rmw => format!(
                    "u {} {ord} id={} from={}",
                    x.loc_name(e.loc.unwrap()),
                    e.id,
                    x.writer_of(e.id).expect("validated rmw has a writer"),
                ),
                exec_core::Op::Fence => format!("f {ord} id={}", e.id),
            };
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}
