//! The line-oriented model file format.
//!
//! ```text
//! # figure 1
//! agents a b c d e f
//! theta 1/3
//! edge a c
//! edge b c
//! initial a
//! strict            # optional: adopt only above theta
//! ```
//!
//! `agents` and `theta` are required and may appear once; `initial` may
//! appear at most once and may list no agents. Edges are undirected.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use ltlsn_core::{
    validate, AgentId, BehaviorSet, Model, ModelError, Network, Rational, RationalError, Threshold, Violation,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ErrorKind {
    #[error("unknown keyword `{0}`")]
    UnknownKeyword(String),
    #[error("`{keyword}` expects {expected}")]
    Arity { keyword: &'static str, expected: &'static str },
    #[error("`{0}` may appear only once")]
    Duplicate(&'static str),
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("invalid agent name `{0}`")]
    InvalidName(String),
    #[error("invalid theta: {0}")]
    Theta(RationalError),
    #[error("agent `{0}` is declared twice")]
    DuplicateAgent(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("theta {0} is outside [0,1]")]
    ThetaOutOfRange(Rational),
    #[error("a model needs at least 2 agents, got {0}")]
    TooFewAgents(usize),
    #[error("self-loop on `{0}` breaks irreflexivity")]
    SelfLoop(String),
    #[error("agent `{0}` has no neighbors, which breaks seriality")]
    Isolated(String),
}

impl ErrorKind {
    /// Whether the text is malformed, as opposed to well formed but
    /// describing an invalid model.
    pub fn is_syntax(&self) -> bool {
        matches!(
            self,
            ErrorKind::UnknownKeyword(_)
                | ErrorKind::Arity { .. }
                | ErrorKind::Duplicate(_)
                | ErrorKind::Missing(_)
                | ErrorKind::InvalidName(_)
                | ErrorKind::Theta(_)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFileError {
    /// 1-based line and column, absent for whole-file problems.
    pub position: Option<(usize, usize)>,
    pub kind: ErrorKind,
}

impl fmt::Display for ModelFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((line, column)) => write!(f, "line {line}, column {column}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl std::error::Error for ModelFileError {}

/// A word and its 1-based column.
type Word<'a> = (usize, &'a str);

fn words(line: &str) -> Vec<Word<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in content.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &content[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &content[s..]));
    }
    out.into_iter().map(|(i, w)| (content[..i].chars().count() + 1, w)).collect()
}

/// Where each name was seen, for error positions.
#[derive(Default)]
struct Spans {
    agents: BTreeMap<AgentId, (usize, usize)>,
    theta: Option<(usize, usize)>,
    self_loops: BTreeMap<AgentId, (usize, usize)>,
}

struct Parsed {
    model: Model,
    spans: Spans,
}

fn err(line: usize, column: usize, kind: ErrorKind) -> ModelFileError {
    ModelFileError { position: Some((line, column)), kind }
}

fn parse(text: &str) -> Result<Parsed, ModelFileError> {
    let mut spans = Spans::default();
    let mut agents: Option<Vec<AgentId>> = None;
    let mut theta: Option<Rational> = None;
    let mut initial: Option<Vec<(usize, usize, AgentId)>> = None;
    let mut edges: Vec<(usize, Word<'_>, Word<'_>)> = Vec::new();
    let mut strict = false;

    let name =
        |line: usize, (col, w): Word<'_>| AgentId::new(w).map_err(|_| err(line, col, ErrorKind::InvalidName(w.into())));

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let ws = words(raw);
        let Some(&(col, keyword)) = ws.first() else { continue };
        let args = &ws[1..];
        match keyword {
            "agents" => {
                if agents.is_some() {
                    return Err(err(line, col, ErrorKind::Duplicate("agents")));
                }
                if args.is_empty() {
                    return Err(err(line, col, ErrorKind::Arity { keyword: "agents", expected: "at least one name" }));
                }
                let mut list = Vec::new();
                for &w in args {
                    let a = name(line, w)?;
                    if spans.agents.insert(a.clone(), (line, w.0)).is_some() {
                        return Err(err(line, w.0, ErrorKind::DuplicateAgent(w.1.into())));
                    }
                    list.push(a);
                }
                agents = Some(list);
            }
            "theta" => {
                if theta.is_some() {
                    return Err(err(line, col, ErrorKind::Duplicate("theta")));
                }
                let [(tcol, value)] = args else {
                    return Err(err(line, col, ErrorKind::Arity { keyword: "theta", expected: "one value" }));
                };
                theta = Some(value.parse().map_err(|e| err(line, *tcol, ErrorKind::Theta(e)))?);
                spans.theta = Some((line, *tcol));
            }
            "edge" => {
                let [a, b] = args else {
                    return Err(err(line, col, ErrorKind::Arity { keyword: "edge", expected: "two agents" }));
                };
                name(line, *a)?;
                name(line, *b)?;
                edges.push((line, *a, *b));
            }
            "initial" => {
                if initial.is_some() {
                    return Err(err(line, col, ErrorKind::Duplicate("initial")));
                }
                let mut list = Vec::new();
                for &w in args {
                    list.push((line, w.0, name(line, w)?));
                }
                initial = Some(list);
            }
            "strict" => {
                if !args.is_empty() {
                    return Err(err(line, col, ErrorKind::Arity { keyword: "strict", expected: "no arguments" }));
                }
                strict = true;
            }
            other => return Err(err(line, col, ErrorKind::UnknownKeyword(other.into()))),
        }
    }

    let missing = |what| ModelFileError { position: None, kind: ErrorKind::Missing(what) };
    let agents = agents.ok_or_else(|| missing("agents"))?;
    let theta = theta.ok_or_else(|| missing("theta"))?;
    let set: BTreeSet<AgentId> = agents.iter().cloned().collect();

    let lookup = |line: usize, (col, w): Word<'_>| {
        set.get(w).cloned().ok_or_else(|| err(line, col, ErrorKind::UnknownAgent(w.into())))
    };
    let mut pairs = Vec::new();
    for &(line, a, b) in &edges {
        let (x, y) = (lookup(line, a)?, lookup(line, b)?);
        if x == y {
            spans.self_loops.entry(x.clone()).or_insert((line, b.0));
        }
        pairs.push((x, y));
    }
    let mut members = Vec::new();
    for (line, col, a) in initial.unwrap_or_default() {
        if !set.contains(&a) {
            return Err(err(line, col, ErrorKind::UnknownAgent(a.to_string())));
        }
        members.push(a);
    }
    let behaving: BehaviorSet = members.into_iter().collect();

    let network = Network::from_edges(&set, pairs.iter().map(|(a, b)| (a, b)));
    let threshold = if strict { Threshold::above(theta) } else { Threshold::at_least(theta) };
    let model = Model::new(set, network, threshold, behaving).map_err(|e| {
        let kind = match e {
            ModelError::TooFewAgents(n) => ErrorKind::TooFewAgents(n),
            ModelError::ThresholdOutOfRange(t) => {
                let (line, col) = spans.theta.expect("theta was read");
                return err(line, col, ErrorKind::ThetaOutOfRange(t));
            }
            other => unreachable!("checked while reading the file: {other}"),
        };
        ModelFileError { position: None, kind }
    })?;
    Ok(Parsed { model, spans })
}

/// Reads a model without checking the network axioms, so that
/// violations can be reported rather than rejected.
pub fn parse_model_unchecked(text: &str) -> Result<Model, ModelFileError> {
    parse(text).map(|p| p.model)
}

/// Reads a model and rejects it if the network breaks an axiom.
///
/// Declared edges are made symmetric, so the only possible violations are
/// self-loops and agents without neighbors.
pub fn parse_model(text: &str) -> Result<Model, ModelFileError> {
    let Parsed { model, spans } = parse(text)?;
    match validate(&model).into_iter().next() {
        None => Ok(model),
        Some(Violation::Irreflexivity(a)) => {
            let (line, col) = spans.self_loops[&a];
            Err(err(line, col, ErrorKind::SelfLoop(a.to_string())))
        }
        Some(Violation::Seriality(a)) => {
            let (line, col) = spans.agents[&a];
            Err(err(line, col, ErrorKind::Isolated(a.to_string())))
        }
        Some(Violation::Symmetry(a, b)) => unreachable!("edges are symmetric by construction ({a},{b})"),
    }
}
