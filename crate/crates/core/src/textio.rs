//! Text format for networks, and text/JSON rendering of analysis reports.
//!
//! One declaration per line, `#` comments, blank lines ignored:
//!
//! ```text
//! network e1
//! channel f A -> B
//! task A mode=nondeterministic
//! init -> s0
//! a: s0 -> s0 produce f:1
//! task B mode=nondeterministic
//! init -> t0
//! t0 -> t0 consume f:1
//! ```
//!
//! Transition lines belong to the most recent `task`. A transition may carry
//! a `label:` prefix; unlabeled transitions are named `t0`, `t1`, ... in
//! order, skipping labels already taken. States are declared by use.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::analyzer::{
    DimensionReport, DimensionResult, LivenessReport, Verdict, Witness, WitnessSource, ZValue,
    ALL_BRANCHES_EMPTY_NOTE,
};
use crate::model::{
    is_identifier, validate, Channel, ChannelId, Dimensioning, InitialTransition, Network,
    StateId, Task, TaskId, TaskMode, Transition, INITIAL_STATE,
};
use crate::oracle::ExplorationResult;
use crate::simplex::Rational;

/// Location of a token, 1-based, in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParseErrorKind {
    Syntax,
    UnknownReference,
    DuplicateDefinition,
    RoleViolation,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::UnknownReference => "unknown reference",
            ParseErrorKind::DuplicateDefinition => "duplicate definition",
            ParseErrorKind::RoleViolation => "role violation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.span, self.kind, self.message)
    }
}

impl std::error::Error for ParseError {}

// ---------------------------------------------------------------------------
// parsing

#[derive(Debug, Clone)]
struct Tok<'a> {
    text: &'a str,
    span: SourceSpan,
}

fn tokenize(line: &str, number: usize) -> Vec<Tok<'_>> {
    let code = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices().chain(std::iter::once((code.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(sub_tok(line, number, s, i));
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn sub_tok(line: &str, number: usize, start: usize, end: usize) -> Tok<'_> {
    Tok {
        text: &line[start..end],
        span: SourceSpan {
            line: number,
            column: line[..start].chars().count() + 1,
            length: line[start..end].chars().count(),
        },
    }
}

#[derive(Debug, Clone)]
struct Item {
    channel: String,
    span: SourceSpan,
    qty: u64,
}

#[derive(Debug, Clone)]
struct PTransition {
    label: Option<(String, SourceSpan)>,
    source: (String, SourceSpan),
    target: (String, SourceSpan),
    consume: Vec<Item>,
    produce: Vec<Item>,
    line: SourceSpan,
}

#[derive(Debug, Clone)]
struct PInit {
    target: (String, SourceSpan),
    produce: Vec<Item>,
    line: SourceSpan,
}

#[derive(Debug, Clone)]
struct PTask {
    id: String,
    span: SourceSpan,
    mode: TaskMode,
    init: Option<PInit>,
    transitions: Vec<PTransition>,
}

#[derive(Debug, Clone)]
struct PChannel {
    id: String,
    span: SourceSpan,
    producer: (String, SourceSpan),
    consumer: (String, SourceSpan),
}

#[derive(Default)]
struct Parser {
    errors: Vec<ParseError>,
    name: Option<(String, SourceSpan)>,
    channels: Vec<PChannel>,
    tasks: Vec<PTask>,
}

impl Parser {
    fn err(&mut self, span: SourceSpan, kind: ParseErrorKind, message: impl Into<String>) {
        self.errors.push(ParseError {
            span,
            kind,
            message: message.into(),
        });
    }

    fn ident(&mut self, tok: &Tok, what: &str) -> Option<String> {
        if is_identifier(tok.text) {
            Some(tok.text.to_string())
        } else {
            self.err(
                tok.span,
                ParseErrorKind::Syntax,
                format!("invalid {what} identifier '{}'", tok.text),
            );
            None
        }
    }

    fn state(&mut self, tok: &Tok) -> Option<(String, SourceSpan)> {
        let s = self.ident(tok, "state")?;
        if s == INITIAL_STATE {
            self.err(
                tok.span,
                ParseErrorKind::Syntax,
                "'init' is reserved for the initial state",
            );
            return None;
        }
        Some((s, tok.span))
    }

    fn line(&mut self, toks: &[Tok], whole: SourceSpan) {
        match toks[0].text {
            "network" => self.network_line(toks),
            "channel" => self.channel_line(toks),
            "task" => self.task_line(toks),
            INITIAL_STATE => self.init_line(toks, whole),
            _ => self.transition_line(toks, whole),
        }
    }

    fn network_line(&mut self, toks: &[Tok]) {
        if toks.len() != 2 {
            self.err(toks[0].span, ParseErrorKind::Syntax, "expected 'network <id>'");
            return;
        }
        let Some(id) = self.ident(&toks[1], "network") else { return };
        if self.name.is_some() {
            self.err(toks[0].span, ParseErrorKind::DuplicateDefinition, "second 'network' line");
            return;
        }
        self.name = Some((id, toks[1].span));
    }

    fn channel_line(&mut self, toks: &[Tok]) {
        if toks.len() != 5 || toks[3].text != "->" {
            self.err(
                toks[0].span,
                ParseErrorKind::Syntax,
                "expected 'channel <id> <producer> -> <consumer>'",
            );
            return;
        }
        let id = self.ident(&toks[1], "channel");
        let p = self.ident(&toks[2], "task");
        let c = self.ident(&toks[4], "task");
        if let (Some(id), Some(p), Some(c)) = (id, p, c) {
            self.channels.push(PChannel {
                id,
                span: toks[1].span,
                producer: (p, toks[2].span),
                consumer: (c, toks[4].span),
            });
        }
    }

    fn task_line(&mut self, toks: &[Tok]) {
        if toks.len() != 3 || !toks[2].text.starts_with("mode=") {
            self.err(
                toks[0].span,
                ParseErrorKind::Syntax,
                "expected 'task <id> mode=<deterministic|nondeterministic>'",
            );
            // keep the block so its transitions do not cascade into errors
            self.tasks.push(PTask {
                id: String::new(),
                span: toks[0].span,
                mode: TaskMode::Nondeterministic,
                init: None,
                transitions: Vec::new(),
            });
            return;
        }
        let mode = match &toks[2].text["mode=".len()..] {
            "deterministic" => Some(TaskMode::Deterministic),
            "nondeterministic" => Some(TaskMode::Nondeterministic),
            other => {
                self.err(toks[2].span, ParseErrorKind::Syntax, format!("unknown mode '{other}'"));
                None
            }
        };
        let id = self.ident(&toks[1], "task").unwrap_or_default();
        self.tasks.push(PTask {
            id,
            span: toks[1].span,
            mode: mode.unwrap_or(TaskMode::Nondeterministic),
            init: None,
            transitions: Vec::new(),
        });
    }

    /// Parses `[consume L] [produce L]` starting at `toks[0]`.
    fn lists(&mut self, toks: &[Tok], allow_consume: bool) -> Option<(Vec<Item>, Vec<Item>)> {
        let mut consume: Option<Vec<Item>> = None;
        let mut produce: Option<Vec<Item>> = None;
        let mut i = 0;
        while i < toks.len() {
            let kw = &toks[i];
            let slot = match kw.text {
                "consume" if allow_consume => &mut consume,
                "produce" => &mut produce,
                "consume" => {
                    self.err(kw.span, ParseErrorKind::Syntax, "the initial transition cannot consume");
                    return None;
                }
                _ => {
                    self.err(
                        kw.span,
                        ParseErrorKind::Syntax,
                        format!("expected 'consume' or 'produce', found '{}'", kw.text),
                    );
                    return None;
                }
            };
            if slot.is_some() {
                self.err(kw.span, ParseErrorKind::Syntax, format!("repeated '{}' list", kw.text));
                return None;
            }
            i += 1;
            let mut items = Vec::new();
            while i < toks.len() && toks[i].text != "consume" && toks[i].text != "produce" {
                items.extend(self.items(&toks[i])?);
                i += 1;
            }
            if items.is_empty() {
                self.err(kw.span, ParseErrorKind::Syntax, format!("empty '{}' list", kw.text));
                return None;
            }
            let mut seen = BTreeSet::new();
            for it in &items {
                if !seen.insert(it.channel.clone()) {
                    self.err(
                        it.span,
                        ParseErrorKind::DuplicateDefinition,
                        format!("channel '{}' listed twice", it.channel),
                    );
                    return None;
                }
            }
            *slot = Some(items);
        }
        Some((consume.unwrap_or_default(), produce.unwrap_or_default()))
    }

    /// Comma-separated `ch:qty` items of one token.
    fn items(&mut self, tok: &Tok) -> Option<Vec<Item>> {
        let mut out = Vec::new();
        let mut offset = 0;
        for part in tok.text.split(',') {
            let start = tok.span.column + tok.text[..offset].chars().count();
            let span = SourceSpan {
                line: tok.span.line,
                column: start,
                length: part.chars().count().max(1),
            };
            offset += part.len() + 1;
            if tok.text.ends_with(',') && part.is_empty() && offset > tok.text.len() {
                // trailing comma: the list continues in the next token
                continue;
            }
            let Some((ch, qty)) = part.split_once(':') else {
                let message = if is_identifier(part) {
                    format!("unexpected word '{part}', expected 'consume', 'produce' or '<channel>:<quantity>'")
                } else {
                    format!("expected '<channel>:<quantity>', found '{part}'")
                };
                self.err(span, ParseErrorKind::Syntax, message);
                return None;
            };
            if !is_identifier(ch) {
                self.err(span, ParseErrorKind::Syntax, format!("invalid channel identifier '{ch}'"));
                return None;
            }
            let qty = match qty.parse::<u64>() {
                Ok(0) => {
                    self.err(span, ParseErrorKind::Syntax, "quantity must be positive");
                    return None;
                }
                Ok(q) if qty.bytes().all(|b| b.is_ascii_digit()) => q,
                _ => {
                    self.err(span, ParseErrorKind::Syntax, format!("invalid quantity '{qty}'"));
                    return None;
                }
            };
            out.push(Item {
                channel: ch.to_string(),
                span: SourceSpan {
                    length: ch.chars().count(),
                    ..span
                },
                qty,
            });
        }
        Some(out)
    }

    fn current_task(&mut self, at: SourceSpan) -> Option<&mut PTask> {
        if self.tasks.is_empty() {
            self.err(at, ParseErrorKind::Syntax, "transition outside of a task block");
            return None;
        }
        self.tasks.last_mut()
    }

    fn init_line(&mut self, toks: &[Tok], whole: SourceSpan) {
        if toks.len() < 3 || toks[1].text != "->" {
            self.err(toks[0].span, ParseErrorKind::Syntax, "expected 'init -> <state>'");
            return;
        }
        let Some(target) = self.state(&toks[2]) else { return };
        let Some((_, produce)) = self.lists(&toks[3..], false) else { return };
        let span = toks[0].span;
        let Some(task) = self.current_task(span) else { return };
        if task.init.is_some() {
            let id = task.id.clone();
            self.err(span, ParseErrorKind::DuplicateDefinition, format!("second 'init' line in task '{id}'"));
            return;
        }
        task.init = Some(PInit {
            target,
            produce,
            line: whole,
        });
    }

    fn transition_line(&mut self, toks: &[Tok], whole: SourceSpan) {
        let (label, rest) = match toks[0].text.strip_suffix(':') {
            Some(l) => {
                let tok = Tok {
                    text: l,
                    span: SourceSpan {
                        length: toks[0].span.length - 1,
                        ..toks[0].span
                    },
                };
                let Some(l) = self.ident(&tok, "transition") else { return };
                if l == INITIAL_STATE {
                    self.err(tok.span, ParseErrorKind::Syntax, "'init' is reserved for the initial transition");
                    return;
                }
                (Some((l, tok.span)), &toks[1..])
            }
            None => (None, toks),
        };
        if rest.len() < 3 || rest[1].text != "->" {
            self.err(
                toks[0].span,
                ParseErrorKind::Syntax,
                format!("unrecognized line starting with '{}'", toks[0].text),
            );
            return;
        }
        let source = self.state(&rest[0]);
        let target = self.state(&rest[2]);
        let Some((consume, produce)) = self.lists(&rest[3..], true) else { return };
        let (Some(source), Some(target)) = (source, target) else { return };
        let Some(task) = self.current_task(toks[0].span) else { return };
        task.transitions.push(PTransition {
            label,
            source,
            target,
            consume,
            produce,
            line: whole,
        });
    }

    /// Cross-line checks and construction of the network.
    fn finish(mut self, text: &str) -> Result<Network, Vec<ParseError>> {
        let Some((name, name_span)) = self.name.clone() else {
            let first = text.lines().next().unwrap_or("");
            self.err(
                SourceSpan {
                    line: 1,
                    column: 1,
                    length: first.chars().count(),
                },
                ParseErrorKind::Syntax,
                "missing 'network <id>' line",
            );
            return Err(self.errors);
        };
        let mut spans: BTreeMap<String, SourceSpan> = BTreeMap::new();
        spans.insert(name.clone(), name_span);

        let mut task_ids = BTreeSet::new();
        for t in &self.tasks.clone() {
            if t.id.is_empty() {
                continue;
            }
            if !task_ids.insert(t.id.clone()) {
                self.err(t.span, ParseErrorKind::DuplicateDefinition, format!("task '{}' defined twice", t.id));
            }
            spans.entry(t.id.clone()).or_insert(t.span);
        }
        let mut channels: BTreeMap<String, PChannel> = BTreeMap::new();
        for c in self.channels.clone() {
            for (end, span) in [&c.producer, &c.consumer] {
                if !task_ids.contains(end) {
                    self.err(*span, ParseErrorKind::UnknownReference, format!("unknown task '{end}'"));
                }
            }
            if channels.contains_key(&c.id) {
                self.err(c.span, ParseErrorKind::DuplicateDefinition, format!("channel '{}' defined twice", c.id));
                continue;
            }
            spans.entry(c.id.clone()).or_insert(c.span);
            channels.insert(c.id.clone(), c);
        }

        let mut tasks = Vec::new();
        for t in self.tasks.clone() {
            if t.id.is_empty() {
                continue;
            }
            let Some(init) = &t.init else {
                self.err(t.span, ParseErrorKind::Syntax, format!("task '{}' has no 'init' line", t.id));
                continue;
            };
            spans.insert(format!("{}.{INITIAL_STATE}", t.id), init.line);
            let role = |p: &mut Parser, items: &[Item], producing: bool| -> BTreeMap<ChannelId, u64> {
                let mut out = BTreeMap::new();
                for it in items {
                    match channels.get(&it.channel) {
                        None => p.err(
                            it.span,
                            ParseErrorKind::UnknownReference,
                            format!("unknown channel '{}'", it.channel),
                        ),
                        Some(c) => {
                            let owner = if producing { &c.producer.0 } else { &c.consumer.0 };
                            if owner != &t.id {
                                let verb = if producing { "produce on" } else { "consume from" };
                                p.err(
                                    it.span,
                                    ParseErrorKind::RoleViolation,
                                    format!("task '{}' may not {verb} channel '{}'", t.id, it.channel),
                                );
                            }
                        }
                    }
                    out.insert(ChannelId(it.channel.clone()), it.qty);
                }
                out
            };

            let mut states = BTreeSet::new();
            states.insert(StateId(init.target.0.clone()));
            let init_produce = role(&mut self, &init.produce, true);

            let mut labels = BTreeSet::new();
            for tr in &t.transitions {
                if let Some((l, span)) = &tr.label {
                    if !labels.insert(l.clone()) {
                        self.err(
                            *span,
                            ParseErrorKind::DuplicateDefinition,
                            format!("transition '{l}' defined twice in task '{}'", t.id),
                        );
                    }
                }
            }
            let mut next_auto = 0usize;
            let mut transitions = Vec::new();
            for tr in &t.transitions {
                let id = match &tr.label {
                    Some((l, _)) => l.clone(),
                    None => loop {
                        let candidate = format!("t{next_auto}");
                        next_auto += 1;
                        if !labels.contains(&candidate) {
                            break candidate;
                        }
                    },
                };
                spans.insert(format!("{}.{id}", t.id), tr.line);
                states.insert(StateId(tr.source.0.clone()));
                states.insert(StateId(tr.target.0.clone()));
                let consume = role(&mut self, &tr.consume, false);
                let produce = role(&mut self, &tr.produce, true);
                transitions.push(Transition {
                    id: id.into(),
                    source: StateId(tr.source.0.clone()),
                    target: StateId(tr.target.0.clone()),
                    consume,
                    produce,
                });
            }
            tasks.push(Task {
                id: TaskId(t.id.clone()),
                mode: t.mode,
                initial_state: INITIAL_STATE.into(),
                states,
                initial_transition: InitialTransition {
                    target: StateId(init.target.0.clone()),
                    produce: init_produce,
                },
                transitions,
            });
        }

        if !self.errors.is_empty() {
            self.errors.sort_by_key(|e| e.span);
            return Err(self.errors);
        }
        let network = Network {
            name,
            tasks,
            channels: channels
                .into_values()
                .map(|c| Channel {
                    id: ChannelId(c.id),
                    producer: TaskId(c.producer.0),
                    consumer: TaskId(c.consumer.0),
                })
                .collect(),
        };
        let report = validate(&network);
        for v in &report.violations {
            let span = spans.get(&v.entity).copied().unwrap_or(name_span);
            self.err(span, ParseErrorKind::RoleViolation, v.message.clone());
        }
        if self.errors.is_empty() {
            Ok(network)
        } else {
            self.errors.sort_by_key(|e| e.span);
            Err(self.errors)
        }
    }
}

/// Parses a network, collecting every error. Lines are checked one by one;
/// cross references and structural rules are checked once all lines are read.
pub fn parse(text: &str) -> Result<Network, Vec<ParseError>> {
    let mut p = Parser::default();
    for (i, line) in text.lines().enumerate() {
        let toks = tokenize(line, i + 1);
        if toks.is_empty() {
            continue;
        }
        let whole = SourceSpan {
            line: i + 1,
            column: toks[0].span.column,
            length: {
                let last = toks.last().expect("nonempty");
                last.span.column + last.span.length - toks[0].span.column
            },
        };
        p.line(&toks, whole);
    }
    p.finish(text)
}

// ---------------------------------------------------------------------------
// emitting networks

fn list(map: &BTreeMap<ChannelId, u64>) -> String {
    map.iter()
        .map(|(c, q)| format!("{c}:{q}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Canonical text: channels, tasks and transitions sorted by identifier,
/// every transition labeled.
pub fn emit_network(network: &Network) -> String {
    let n = network.canonical();
    let mut out = String::new();
    let _ = writeln!(out, "network {}", n.name);
    for c in &n.channels {
        let _ = writeln!(out, "channel {} {} -> {}", c.id, c.producer, c.consumer);
    }
    for t in &n.tasks {
        let _ = writeln!(out, "\ntask {} mode={}", t.id, t.mode.keyword());
        let _ = write!(out, "{INITIAL_STATE} -> {}", t.initial_transition.target);
        if !t.initial_transition.produce.is_empty() {
            let _ = write!(out, " produce {}", list(&t.initial_transition.produce));
        }
        out.push('\n');
        for tr in &t.transitions {
            let _ = write!(out, "{}: {} -> {}", tr.id, tr.source, tr.target);
            if !tr.consume.is_empty() {
                let _ = write!(out, " consume {}", list(&tr.consume));
            }
            if !tr.produce.is_empty() {
                let _ = write!(out, " produce {}", list(&tr.produce));
            }
            out.push('\n');
        }
    }
    out
}

// ---------------------------------------------------------------------------
// reports

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Anything a command can report.
#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Check {
        network: &'a str,
        report: &'a LivenessReport,
    },
    Dimension {
        network: &'a str,
        report: &'a DimensionReport,
    },
    Explore {
        network: &'a str,
        dims: &'a Dimensioning,
        result: &'a ExplorationResult,
    },
    /// Outcome of parsing and validating a source file; empty `errors`
    /// means valid.
    Validate {
        network: &'a str,
        errors: &'a [ParseError],
    },
    Mirror {
        network: &'a str,
        text: &'a str,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReportOptions {
    /// Wall-clock time to include; omitted by default to keep output
    /// reproducible.
    pub millis: Option<u128>,
    /// Print witnesses in full.
    pub full_witness: bool,
}

pub fn emit_report(report: &Report, format: Format) -> String {
    emit_report_with(report, format, &ReportOptions::default())
}

pub fn emit_report_with(report: &Report, format: Format, options: &ReportOptions) -> String {
    match format {
        Format::Text => text_report(report, options),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json_report(report, options))
                .expect("JSON values serialize");
            s.push('\n');
            s
        }
    }
}

/// Integers as JSON numbers when they fit, other rationals as `"p/q"`.
pub fn rational_json(r: &Rational) -> Value {
    match r.to_i64() {
        Some(v) if r.is_integer() => json!(v),
        _ => json!(r.to_string()),
    }
}

fn z_json(z: &ZValue) -> Value {
    match z {
        ZValue::Finite(v) => rational_json(v),
        ZValue::Unbounded => json!("unbounded"),
    }
}

fn dims_json(d: &Dimensioning) -> Value {
    Value::Object(
        d.capacities
            .iter()
            .map(|(c, v)| (c.to_string(), json!(v)))
            .collect(),
    )
}

fn witness_json(w: &Witness) -> Value {
    let source = match &w.source {
        WitnessSource::BigM => json!("big-m"),
        WitnessSource::Branch(ds) => json!(ds.iter().map(|d| d.to_string()).collect::<Vec<_>>()),
    };
    let values: Map<String, Value> = w
        .values()
        .iter()
        .map(|(k, v)| (k.clone(), rational_json(v)))
        .collect();
    json!({ "branch": source, "values": values })
}

fn stats_json(cuts: Option<u64>, pivots: Option<u64>, configs: Option<usize>, options: &ReportOptions) -> Value {
    let mut m = Map::new();
    if let Some(c) = configs {
        m.insert("configs".into(), json!(c));
    }
    if let Some(c) = cuts {
        m.insert("cuts".into(), json!(c));
    }
    if let Some(p) = pivots {
        m.insert("pivots".into(), json!(p));
    }
    if let Some(ms) = options.millis {
        m.insert("millis".into(), json!(ms as u64));
    }
    Value::Object(m)
}

fn json_report(report: &Report, options: &ReportOptions) -> Value {
    let mut m = Map::new();
    match report {
        Report::Check { network, report } => {
            m.insert("command".into(), json!("check"));
            m.insert("network".into(), json!(network));
            let (verdict, reason) = match &report.verdict {
                Verdict::Live { .. } => ("live", None),
                Verdict::Unknown { .. } => ("unknown", None),
                Verdict::Inconclusive { reason, .. } => ("inconclusive", Some(reason)),
            };
            m.insert("verdict".into(), json!(verdict));
            m.insert("method".into(), json!(report.verdict.method().name()));
            if let Some(r) = reason {
                m.insert("reason".into(), json!(r));
            }
            if let Verdict::Unknown { witness, .. } = &report.verdict {
                m.insert("witness".into(), witness_json(witness));
            }
            if let Some(b) = &report.branches {
                m.insert("branches".into(), json!(b));
            }
            m.insert(
                "stats".into(),
                stats_json(Some(report.stats.cuts), Some(report.stats.pivots), None, options),
            );
        }
        Report::Dimension { network, report } => {
            m.insert("command".into(), json!("dimension"));
            m.insert("network".into(), json!(network));
            let result = match &report.result {
                DimensionResult::BoundedLive { .. } => "bounded-live",
                DimensionResult::Unbounded { .. } => "unbounded",
                DimensionResult::LiveForAllValid { .. } => "live-for-all-valid",
                DimensionResult::Inconclusive { .. } => "inconclusive",
            };
            m.insert("result".into(), json!(result));
            m.insert("method".into(), json!(report.method.name()));
            match &report.result {
                DimensionResult::BoundedLive { z_ip, .. } => {
                    m.insert("z_ip".into(), json!(z_ip));
                }
                DimensionResult::Unbounded { .. } => {
                    m.insert("z_ip".into(), json!("unbounded"));
                }
                _ => {}
            }
            if let Some(z) = &report.z_lp {
                m.insert("z_lp".into(), z_json(z));
            }
            match &report.result {
                DimensionResult::BoundedLive { recommended, .. } => {
                    m.insert("recommended_dims".into(), dims_json(recommended));
                }
                DimensionResult::LiveForAllValid { minimal_valid } => {
                    m.insert("recommended_dims".into(), dims_json(minimal_valid));
                    m.insert("note".into(), json!(ALL_BRANCHES_EMPTY_NOTE));
                }
                DimensionResult::Unbounded { witness, .. } => {
                    m.insert("witness".into(), witness_json(witness));
                }
                DimensionResult::Inconclusive { reason } => {
                    m.insert("reason".into(), json!(reason));
                }
            }
            m.insert("branches".into(), json!(report.branches));
            m.insert(
                "stats".into(),
                stats_json(Some(report.stats.cuts), Some(report.stats.pivots), None, options),
            );
        }
        Report::Explore {
            network,
            dims,
            result,
        } => {
            m.insert("command".into(), json!("explore"));
            m.insert("network".into(), json!(network));
            m.insert("result".into(), json!(exploration_word(result)));
            m.insert("dims".into(), dims_json(dims));
            if let Some(b) = result.blocked.first() {
                m.insert(
                    "witness".into(),
                    json!({
                        "configuration": b.configuration,
                        "trace": b.trace.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                        "blocked_configurations": result.blocked.len(),
                    }),
                );
            }
            m.insert(
                "stats".into(),
                stats_json(None, None, Some(result.configurations_visited), options),
            );
        }
        Report::Validate { network, errors } => {
            m.insert("command".into(), json!("validate"));
            m.insert("network".into(), json!(network));
            m.insert(
                "result".into(),
                json!(if errors.is_empty() { "valid" } else { "invalid" }),
            );
            if !errors.is_empty() {
                m.insert("errors".into(), json!(errors));
            }
        }
        Report::Mirror { network, text } => {
            m.insert("command".into(), json!("mirror"));
            m.insert("network".into(), json!(network));
            m.insert("result".into(), json!(text));
        }
    }
    Value::Object(m)
}

fn exploration_word(result: &ExplorationResult) -> &'static str {
    if result.has_blocked() {
        "blocked"
    } else if result.truncated {
        "truncated"
    } else {
        "no-deadlock"
    }
}

fn write_witness(out: &mut String, w: &Witness, full: bool) {
    match &w.source {
        WitnessSource::BigM => out.push_str("relaxation: big-m\n"),
        WitnessSource::Branch(ds) => {
            let parts: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "branch: {}", parts.join(" "));
        }
    }
    out.push_str("witness:\n");
    for (name, v) in w.values() {
        if full || !v.is_zero() {
            let _ = writeln!(out, "  {name} = {v}");
        }
    }
}

fn write_branches(out: &mut String, b: &crate::analyzer::BranchCounts) {
    let _ = write!(
        out,
        "branches: {} total, {} feasible, {} infeasible, {} unbounded",
        b.total, b.feasible, b.infeasible, b.unbounded
    );
    if b.inconclusive > 0 {
        let _ = write!(out, ", {} inconclusive", b.inconclusive);
    }
    out.push('\n');
}

fn write_stats(out: &mut String, cuts: u64, pivots: u64, options: &ReportOptions) {
    let _ = write!(out, "stats: {cuts} cuts, {pivots} pivots");
    if let Some(ms) = options.millis {
        let _ = write!(out, ", {ms} ms");
    }
    out.push('\n');
}

fn text_report(report: &Report, options: &ReportOptions) -> String {
    let mut out = String::new();
    match report {
        Report::Check { report, .. } => {
            let m = report.verdict.method();
            match &report.verdict {
                Verdict::Live { .. } => {
                    let _ = writeln!(out, "LIVE ({m})");
                }
                Verdict::Unknown { witness, .. } => {
                    let _ = writeln!(out, "UNKNOWN ({m}): a blocked pseudo-state exists");
                    write_witness(&mut out, witness, options.full_witness);
                }
                Verdict::Inconclusive { reason, .. } => {
                    let _ = writeln!(out, "INCONCLUSIVE ({m}): {reason}");
                }
            }
            if let Some(b) = &report.branches {
                write_branches(&mut out, b);
            }
            write_stats(&mut out, report.stats.cuts, report.stats.pivots, options);
        }
        Report::Dimension { report, .. } => {
            let m = report.method;
            let z_lp = report
                .z_lp
                .as_ref()
                .map_or_else(|| "none".to_string(), |z| z.to_string());
            match &report.result {
                DimensionResult::BoundedLive {
                    z_ip, recommended, ..
                } => {
                    let _ = writeln!(out, "BOUNDED-LIVE ({m}): z_ip = {z_ip}, z_lp = {z_lp}");
                    let _ = writeln!(out, "recommended: {recommended}");
                }
                DimensionResult::Unbounded { witness, .. } => {
                    let _ = writeln!(
                        out,
                        "UNBOUNDED ({m}): blocked pseudo-states exist at every capacity"
                    );
                    write_witness(&mut out, witness, options.full_witness);
                }
                DimensionResult::LiveForAllValid { minimal_valid } => {
                    let _ = writeln!(out, "LIVE-FOR-ALL-VALID ({m}): minimal valid {minimal_valid}");
                    let _ = writeln!(out, "note: {ALL_BRANCHES_EMPTY_NOTE}");
                }
                DimensionResult::Inconclusive { reason } => {
                    let _ = writeln!(out, "INCONCLUSIVE ({m}): {reason}");
                }
            }
            write_branches(&mut out, &report.branches);
            write_stats(&mut out, report.stats.cuts, report.stats.pivots, options);
        }
        Report::Explore { dims, result, .. } => {
            let word = exploration_word(result).to_uppercase();
            let _ = writeln!(
                out,
                "{word} at {dims}: {} configurations, {} blocked",
                result.configurations_visited,
                result.blocked.len()
            );
            if let Some(b) = result.blocked.first() {
                let _ = writeln!(out, "first blocked: {}", b.configuration);
                let _ = writeln!(out, "trace ({} steps):", b.trace.len());
                for t in &b.trace {
                    let _ = writeln!(out, "{t}");
                }
            }
            if let Some(ms) = options.millis {
                let _ = writeln!(out, "time: {ms} ms");
            }
        }
        Report::Validate { errors, .. } => {
            if errors.is_empty() {
                out.push_str("VALID\n");
            } else {
                let _ = writeln!(out, "INVALID: {} errors", errors.len());
                for e in errors.iter() {
                    let _ = writeln!(out, "{e}");
                }
            }
        }
        Report::Mirror { text, .. } => out.push_str(text),
    }
    out
}
