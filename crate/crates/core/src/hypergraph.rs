//! Partite hypergraphs, structural predicates and the `.rhg` text format.
//!
//! Vertices are dense ids `0..n`. Classes keep their given order; vertex
//! lists inside classes and edges are kept sorted, and the edge list itself
//! is sorted lexicographically, so two equal hypergraphs serialize to the
//! same bytes.
//!
//! ```text
//! rhg 1
//! r 2
//! n 2
//! m 1
//! class 0
//! class 1
//! edge 0 1
//! label 0 a
//! meta construction example
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

pub const FORMAT_HEADER: &str = "rhg 1";

/// Metadata keys written by the constructions and read back by `verify`.
pub mod meta_keys {
    pub const CONSTRUCTION: &str = "construction";
    /// Proven lower bound on the cover number carried by a construction.
    pub const GUARANTEE: &str = "tau_lower_bound";
    pub const CLAIM_PARTITE: &str = "claim.partite";
    /// Common edge size.
    pub const CLAIM_UNIFORM: &str = "claim.uniform";
    pub const CLAIM_INTERSECTING: &str = "claim.intersecting";
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("validation error: {0}")]
    Validation(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, HypergraphError> {
    Err(HypergraphError::Validation(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartiteHypergraph {
    classes: Vec<Vec<u32>>,
    edges: Vec<Vec<u32>>,
    labels: BTreeMap<u32, String>,
    meta: BTreeMap<String, String>,
    class_of: Vec<u32>,
}

impl PartiteHypergraph {
    /// Validates and canonicalizes. Classes must partition `0..n`; edges
    /// must be nonempty, in range, without repeated vertices, and distinct.
    /// Partiteness of edges is deliberately not required here; see
    /// [`PartiteHypergraph::is_r_partite`].
    pub fn new(classes: Vec<Vec<u32>>, edges: Vec<Vec<u32>>) -> Result<Self, HypergraphError> {
        let n: usize = classes.iter().map(Vec::len).sum();
        let mut class_of = vec![u32::MAX; n];
        let mut classes = classes;
        for (ci, class) in classes.iter_mut().enumerate() {
            class.sort_unstable();
            for &v in class.iter() {
                let Some(slot) = class_of.get_mut(v as usize) else {
                    return invalid(format!("vertex {v} out of range (n = {n})"));
                };
                if *slot != u32::MAX {
                    return invalid(format!("vertex {v} appears in classes {} and {ci}", *slot));
                }
                *slot = ci as u32;
            }
        }
        let mut edges = edges;
        for (ei, edge) in edges.iter_mut().enumerate() {
            if edge.is_empty() {
                return invalid(format!("edge {ei} is empty"));
            }
            edge.sort_unstable();
            if let Some(w) = edge.windows(2).find(|w| w[0] == w[1]) {
                return invalid(format!("edge {ei} repeats vertex {}", w[0]));
            }
            if let Some(&v) = edge.last().filter(|&&v| v as usize >= n) {
                return invalid(format!("edge {ei} uses vertex {v} out of range (n = {n})"));
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return invalid(format!("duplicate edge {:?}", w[0]));
        }
        Ok(PartiteHypergraph {
            classes,
            edges,
            labels: BTreeMap::new(),
            meta: BTreeMap::new(),
            class_of,
        })
    }

    pub fn r(&self) -> usize {
        self.classes.len()
    }

    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn class_of(&self, v: u32) -> usize {
        self.class_of[v as usize] as usize
    }

    pub fn labels(&self) -> &BTreeMap<u32, String> {
        &self.labels
    }

    pub fn meta(&self) -> &BTreeMap<String, String> {
        &self.meta
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.get(key).map(String::as_str)
    }

    /// The carried cover-number lower bound, if any.
    pub fn guarantee(&self) -> Option<usize> {
        self.meta_value(meta_keys::GUARANTEE)?.parse().ok()
    }

    pub fn set_label(&mut self, v: u32, label: impl Into<String>) -> Result<(), HypergraphError> {
        let label = label.into();
        if v as usize >= self.n() {
            return invalid(format!("label for vertex {v} out of range"));
        }
        check_text(&label, "label")?;
        self.labels.insert(v, label);
        Ok(())
    }

    pub fn set_meta(
        &mut self,
        key: impl Into<String>,
        value: impl ToString,
    ) -> Result<(), HypergraphError> {
        let key = key.into();
        let value = value.to_string();
        if key.is_empty() || key.chars().any(char::is_whitespace) {
            return invalid(format!("bad meta key {key:?}"));
        }
        check_text(&value, "meta value")?;
        self.meta.insert(key, value);
        Ok(())
    }

    /// Every edge has at most one vertex in each class.
    pub fn is_r_partite(&self) -> bool {
        self.edges.iter().all(|e| {
            let mut seen = vec![false; self.r()];
            e.iter()
                .all(|&v| !std::mem::replace(&mut seen[self.class_of(v)], true))
        })
    }

    /// Every edge has exactly `k` vertices.
    pub fn is_uniform(&self, k: usize) -> bool {
        self.edges.iter().all(|e| e.len() == k)
    }

    /// r-partite and r-uniform: every edge has exactly one vertex per class.
    pub fn is_partite_uniform(&self) -> bool {
        self.is_r_partite() && self.is_uniform(self.r())
    }

    /// First pair of disjoint edges, if any.
    pub fn disjoint_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.m() {
            for j in i + 1..self.m() {
                if intersection_size(&self.edges[i], &self.edges[j]) == 0 {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_intersecting(&self) -> bool {
        self.disjoint_pair().is_none()
    }

    pub fn intersection_profile(&self) -> IntersectionProfile {
        let mut histogram = BTreeMap::new();
        for i in 0..self.m() {
            for j in i + 1..self.m() {
                *histogram
                    .entry(intersection_size(&self.edges[i], &self.edges[j]))
                    .or_insert(0u64) += 1;
            }
        }
        IntersectionProfile {
            min: histogram.keys().next().copied(),
            max: histogram.keys().next_back().copied(),
            histogram,
        }
    }

    /// Subhypergraph on the given vertices: edges restricted to them, empty
    /// restrictions and duplicates dropped, vertices renumbered in order.
    pub fn restrict_to(&self, keep: &[u32]) -> Result<Self, HypergraphError> {
        let mut new_id = vec![u32::MAX; self.n()];
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (i, &v) in sorted.iter().enumerate() {
            new_id[v as usize] = i as u32;
        }
        let classes = self
            .classes
            .iter()
            .map(|c| {
                c.iter()
                    .filter_map(|&v| Some(new_id[v as usize]).filter(|&x| x != u32::MAX))
                    .collect()
            })
            .collect();
        let mut edges: Vec<Vec<u32>> = self
            .edges
            .iter()
            .map(|e| {
                e.iter()
                    .filter_map(|&v| Some(new_id[v as usize]).filter(|&x| x != u32::MAX))
                    .collect()
            })
            .filter(|e: &Vec<u32>| !e.is_empty())
            .collect();
        edges.sort_unstable();
        edges.dedup();
        PartiteHypergraph::new(classes, edges)
    }

    /// Same vertices and classes without the given edge.
    pub fn without_edge(&self, index: usize) -> Self {
        let mut h = self.clone();
        h.edges.remove(index);
        h
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{FORMAT_HEADER}");
        let _ = writeln!(out, "r {}", self.r());
        let _ = writeln!(out, "n {}", self.n());
        let _ = writeln!(out, "m {}", self.m());
        for c in &self.classes {
            write_ids(&mut out, "class", c);
        }
        for e in &self.edges {
            write_ids(&mut out, "edge", e);
        }
        for (v, l) in &self.labels {
            let _ = writeln!(out, "label {v} {l}");
        }
        for (k, v) in &self.meta {
            let _ = writeln!(out, "meta {k} {v}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, HypergraphError> {
        Parser::new(text).parse()
    }
}

fn check_text(s: &str, what: &str) -> Result<(), HypergraphError> {
    if s.is_empty() || s.contains(['\n', '\r']) || s.trim() != s {
        return invalid(format!(
            "{what} {s:?} must be nonempty, single-line and trimmed"
        ));
    }
    Ok(())
}

fn write_ids(out: &mut String, tag: &str, ids: &[u32]) {
    out.push_str(tag);
    for v in ids {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
}

/// Size of the intersection of two sorted id lists.
pub fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Pairwise intersection statistics over all unordered edge pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionProfile {
    pub min: Option<usize>,
    pub max: Option<usize>,
    pub histogram: BTreeMap<usize, u64>,
}

impl IntersectionProfile {
    pub fn pairs(&self) -> u64 {
        self.histogram.values().sum()
    }
}

/// Adds one class holding a fresh vertex per edge, appended to that edge.
///
/// Each new vertex has degree one, so it never does better in a cover than
/// any other vertex of its edge and the cover number is unchanged.
pub fn extend_universal(h: &PartiteHypergraph) -> Result<PartiteHypergraph, HypergraphError> {
    if !h.is_partite_uniform() {
        return invalid("extend_universal needs an r-partite r-uniform hypergraph");
    }
    let n = h.n() as u32;
    let mut classes = h.classes.clone();
    classes.push((n..n + h.m() as u32).collect());
    let edges = h
        .edges
        .iter()
        .enumerate()
        .map(|(j, e)| {
            let mut e = e.clone();
            e.push(n + j as u32);
            e
        })
        .collect();
    let mut out = PartiteHypergraph::new(classes, edges)?;
    out.labels = h.labels.clone();
    for j in 0..h.m() as u32 {
        out.set_label(n + j, format!("ext:{j}"))?;
    }
    out.meta = h.meta.clone();
    let base = h
        .meta_value(meta_keys::CONSTRUCTION)
        .unwrap_or("unnamed")
        .to_string();
    out.set_meta(meta_keys::CONSTRUCTION, format!("extend({base})"))?;
    out.set_meta(meta_keys::CLAIM_UNIFORM, out.r())?;
    out.set_meta(meta_keys::CLAIM_PARTITE, true)?;
    Ok(out)
}

struct Parser<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    total: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            lines: text.lines().enumerate().peekable(),
            total: text.lines().count(),
        }
    }

    fn err<T>(line: usize, message: impl Into<String>) -> Result<T, HypergraphError> {
        Err(HypergraphError::Parse {
            line: line + 1,
            message: message.into(),
        })
    }

    fn next_line(&mut self, expect: &str) -> Result<(usize, &'a str), HypergraphError> {
        match self.lines.next() {
            Some(x) => Ok(x),
            None => Self::err(
                self.total,
                format!("unexpected end of input, expected {expect}"),
            ),
        }
    }

    fn count(&mut self, tag: &str) -> Result<usize, HypergraphError> {
        let (no, line) = self.next_line(tag)?;
        match line.split_once(' ') {
            Some((t, v)) if t == tag => v
                .parse()
                .or_else(|_| Self::err(no, format!("bad integer {v:?} for {tag}"))),
            _ => Self::err(no, format!("expected `{tag} <int>`")),
        }
    }

    fn ids(&mut self, tag: &str) -> Result<Vec<u32>, HypergraphError> {
        let (no, line) = self.next_line(tag)?;
        let rest = if line == tag {
            ""
        } else if let Some(rest) = line.strip_prefix(tag).and_then(|r| r.strip_prefix(' ')) {
            rest
        } else {
            return Self::err(no, format!("expected `{tag} ...`"));
        };
        if rest.is_empty() {
            return Ok(Vec::new());
        }
        rest.split(' ')
            .map(|tok| {
                tok.parse::<u32>()
                    .or_else(|_| Self::err(no, format!("bad vertex id {tok:?}")))
            })
            .collect()
    }

    fn parse(mut self) -> Result<PartiteHypergraph, HypergraphError> {
        let (no, header) = self.next_line("header")?;
        if header != FORMAT_HEADER {
            return Self::err(no, format!("unknown header {header:?}"));
        }
        let r = self.count("r")?;
        let n = self.count("n")?;
        let m = self.count("m")?;
        let classes = (0..r)
            .map(|_| self.ids("class"))
            .collect::<Result<Vec<_>, _>>()?;
        let edges = (0..m)
            .map(|_| self.ids("edge"))
            .collect::<Result<Vec<_>, _>>()?;
        let mut h = PartiteHypergraph::new(classes, edges)?;
        if h.n() != n {
            return invalid(format!(
                "declared n = {n} but classes hold {} vertices",
                h.n()
            ));
        }
        for (no, line) in self.lines {
            let (tag, rest) = line.split_once(' ').unwrap_or((line, ""));
            match tag {
                "label" => {
                    let Some((id, text)) = rest.split_once(' ') else {
                        return Self::err(no, "expected `label <id> <text>`");
                    };
                    let id: u32 = id
                        .parse()
                        .or_else(|_| Self::err(no, format!("bad label id {id:?}")))?;
                    if h.labels.contains_key(&id) {
                        return invalid(format!("duplicate label for vertex {id}"));
                    }
                    h.set_label(id, text)?;
                }
                "meta" => {
                    let Some((key, value)) = rest.split_once(' ') else {
                        return Self::err(no, "expected `meta <key> <value>`");
                    };
                    if h.meta.contains_key(key) {
                        return invalid(format!("duplicate meta key {key:?}"));
                    }
                    h.set_meta(key, value)?;
                }
                _ => return Self::err(no, format!("unexpected line {line:?}")),
            }
        }
        Ok(h)
    }
}
