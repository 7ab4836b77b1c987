//! Exact cover number and matching number with checkable certificates.
//!
//! The cover solver is a depth-first branch and bound. At each node it picks
//! the uncovered edge with the fewest still-allowed vertices and branches on
//! each of them in order of residual degree; branch `i` takes vertex `v_i`
//! and forbids `v_0..v_{i-1}`, so no cover is explored twice. A node is cut
//! when `chosen + lower_bound >= incumbent`, where the lower bound is the
//! larger of
//!
//! * the degree bound: the fewest allowed vertices whose residual degrees
//!   can add up to the number of uncovered edges (never below
//!   `ceil(uncovered / max_degree)`), and
//! * the packing bound: a greedy set of uncovered edges that are pairwise
//!   disjoint on allowed vertices.
//!
//! Packing is computed on the residual hypergraph, where disjoint edges
//! reappear even when the input is intersecting.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::hypergraph::PartiteHypergraph;

pub const CERT_HEADER: &str = "rcert 1";

/// Default time budget for a single solve.
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("ratio needs exact certificates; the cover or matching search did not finish")]
    RequiresExactCertificates,
    #[error("ratio undefined for r = {r}, nu = {nu}")]
    DegenerateRatio { r: usize, nu: usize },
    #[error(
        "cover of size {size} found below the construction's proven bound {guarantee}: \
         the construction or the solver is wrong"
    )]
    GuaranteeViolated { size: usize, guarantee: usize },
    #[error("certificate parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LbMethod {
    EdgeDegreeBound,
    Packing,
    ExhaustedSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UbMethod {
    Greedy,
    Seeded,
    BranchAndBound,
}

impl fmt::Display for LbMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LbMethod::EdgeDegreeBound => "edge-degree-bound",
            LbMethod::Packing => "packing",
            LbMethod::ExhaustedSearch => "exhausted-search",
        })
    }
}

impl fmt::Display for UbMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UbMethod::Greedy => "greedy",
            UbMethod::Seeded => "seeded",
            UbMethod::BranchAndBound => "branch-and-bound",
        })
    }
}

fn serialize_ms<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverCertificate {
    pub cover: Vec<u32>,
    pub size: usize,
    pub optimal: bool,
    pub lower_bound: usize,
    pub lb_method: LbMethod,
    pub ub_method: UbMethod,
    pub nodes_explored: u64,
    #[serde(rename = "elapsed_ms", serialize_with = "serialize_ms")]
    pub elapsed: Duration,
    pub timed_out: bool,
}

impl CoverCertificate {
    /// Equality ignoring wall-clock time.
    pub fn same_result(&self, other: &Self) -> bool {
        let mut a = self.clone();
        a.elapsed = other.elapsed;
        a == *other
    }

    pub fn to_text(&self) -> String {
        let cover: Vec<String> = self.cover.iter().map(u32::to_string).collect();
        let mut out = format!(
            "{CERT_HEADER}\nsize {}\noptimal {}\nlower_bound {}\nlb_method {}\nub_method {}\n\
             nodes_explored {}\nelapsed_ms {}\ntimed_out {}\ncover",
            self.size,
            self.optimal,
            self.lower_bound,
            self.lb_method,
            self.ub_method,
            self.nodes_explored,
            self.elapsed.as_millis(),
            self.timed_out,
        );
        if !cover.is_empty() {
            out.push(' ');
            out.push_str(&cover.join(" "));
        }
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Result<Self, CoverError> {
        let total = text.lines().count();
        let mut lines = text.lines().enumerate();
        let err = |line: usize, message: String| CoverError::Parse {
            line: line + 1,
            message,
        };
        let mut next = |key: &str| -> Result<(usize, String), CoverError> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| err(total, format!("missing {key}")))?;
            if key == "header" {
                return Ok((no, line.to_string()));
            }
            if line == key {
                return Ok((no, String::new()));
            }
            match line.split_once(' ') {
                Some((k, v)) if k == key => Ok((no, v.to_string())),
                _ => Err(err(no, format!("expected `{key} ...`"))),
            }
        };
        fn num<T: std::str::FromStr>(no: usize, v: &str) -> Result<T, CoverError> {
            v.parse().map_err(|_| CoverError::Parse {
                line: no + 1,
                message: format!("bad value {v:?}"),
            })
        }
        let (no, header) = next("header")?;
        if header != CERT_HEADER {
            return Err(err(no, format!("unknown header {header:?}")));
        }
        let (no, v) = next("size")?;
        let size = num(no, &v)?;
        let (no, v) = next("optimal")?;
        let optimal = num(no, &v)?;
        let (no, v) = next("lower_bound")?;
        let lower_bound = num(no, &v)?;
        let (no, v) = next("lb_method")?;
        let lb_method = match v.as_str() {
            "edge-degree-bound" => LbMethod::EdgeDegreeBound,
            "packing" => LbMethod::Packing,
            "exhausted-search" => LbMethod::ExhaustedSearch,
            _ => return Err(err(no, format!("unknown lb_method {v:?}"))),
        };
        let (no, v) = next("ub_method")?;
        let ub_method = match v.as_str() {
            "greedy" => UbMethod::Greedy,
            "seeded" => UbMethod::Seeded,
            "branch-and-bound" => UbMethod::BranchAndBound,
            _ => return Err(err(no, format!("unknown ub_method {v:?}"))),
        };
        let (no, v) = next("nodes_explored")?;
        let nodes_explored = num(no, &v)?;
        let (no, v) = next("elapsed_ms")?;
        let elapsed = Duration::from_millis(num(no, &v)?);
        let (no, v) = next("timed_out")?;
        let timed_out = num(no, &v)?;
        let (no, v) = next("cover")?;
        let cover: Vec<u32> = if v.is_empty() {
            Vec::new()
        } else {
            v.split(' ').map(|t| num(no, t)).collect::<Result<_, _>>()?
        };
        if cover.len() != size {
            return Err(err(
                no,
                format!("cover has {} vertices but size is {size}", cover.len()),
            ));
        }
        Ok(CoverCertificate {
            cover,
            size,
            optimal,
            lower_bound,
            lb_method,
            ub_method,
            nodes_explored,
            elapsed,
            timed_out,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingCertificate {
    pub matching: Vec<usize>,
    pub size: usize,
    pub optimal: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// `None` means no limit.
    pub budget: Option<Duration>,
    pub seed_cover: Option<Vec<u32>>,
    /// Split the root branching across threads.
    pub parallel: bool,
}

impl SolveOptions {
    pub fn with_budget(budget: Duration) -> Self {
        SolveOptions {
            budget: Some(budget),
            ..Default::default()
        }
    }
}

/// `Err(i)` names the first edge that `cover` misses.
pub fn verify_cover(h: &PartiteHypergraph, cover: &[u32]) -> Result<(), usize> {
    let mut hit = vec![false; h.n()];
    for &v in cover {
        if let Some(x) = hit.get_mut(v as usize) {
            *x = true;
        }
    }
    match h
        .edges()
        .iter()
        .position(|e| !e.iter().any(|&v| hit[v as usize]))
    {
        Some(i) => Err(i),
        None => Ok(()),
    }
}

/// Repeatedly takes a vertex of maximum degree among uncovered edges,
/// least id on ties. Returned sorted.
pub fn greedy_cover(h: &PartiteHypergraph) -> Vec<u32> {
    let inst = Instance::new(h);
    let mut cover = inst.greedy(&BitSet::full(inst.m));
    cover.sort_unstable();
    cover
}

/// Any cover smaller than the construction's carried lower bound is a
/// contradiction.
pub fn check_guarantee(h: &PartiteHypergraph, cert: &CoverCertificate) -> Result<(), CoverError> {
    match h.guarantee() {
        Some(g) if cert.size < g => Err(CoverError::GuaranteeViolated {
            size: cert.size,
            guarantee: g,
        }),
        _ => Ok(()),
    }
}

struct Instance {
    n: usize,
    m: usize,
    /// Edges through each vertex.
    inc: Vec<BitSet>,
    /// Vertices of each edge.
    edge_verts: Vec<BitSet>,
}

struct NodeBounds {
    degree: usize,
    packing: usize,
    branch_edge: usize,
}

impl Instance {
    fn new(h: &PartiteHypergraph) -> Self {
        let (n, m) = (h.n(), h.m());
        let mut inc = vec![BitSet::new(m); n];
        let mut edge_verts = Vec::with_capacity(m);
        for (ei, e) in h.edges().iter().enumerate() {
            for &v in e {
                inc[v as usize].insert(ei);
            }
            edge_verts.push(BitSet::from_indices(n, e.iter().map(|&v| v as usize)));
        }
        Instance {
            n,
            m,
            inc,
            edge_verts,
        }
    }

    fn greedy(&self, uncovered: &BitSet) -> Vec<u32> {
        let mut unc = uncovered.clone();
        let mut cover = Vec::new();
        while !unc.is_empty() {
            let (v, _) = (0..self.n)
                .map(|v| (v, self.inc[v].and_count(&unc)))
                .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
            cover.push(v as u32);
            unc.difference_with(&self.inc[v]);
        }
        cover
    }

    fn degree(&self, v: usize, uncovered: &BitSet) -> usize {
        self.inc[v].and_count(uncovered)
    }

    /// `None` if some uncovered edge has no allowed vertex left.
    fn bounds(&self, uncovered: &BitSet, excluded: &BitSet) -> Option<NodeBounds> {
        let need = uncovered.count();
        let mut degrees: Vec<usize> = (0..self.n)
            .filter(|&v| !excluded.contains(v))
            .map(|v| self.degree(v, uncovered))
            .filter(|&d| d > 0)
            .collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        let mut acc = 0;
        let mut degree = 0;
        for d in &degrees {
            if acc >= need {
                break;
            }
            acc += d;
            degree += 1;
        }
        if acc < need {
            return None;
        }

        let mut sized: Vec<(usize, usize)> = uncovered
            .iter()
            .map(|e| (self.edge_verts[e].and_not_count(excluded), e))
            .collect();
        sized.sort_unstable();
        if sized.first().is_some_and(|&(s, _)| s == 0) {
            return None;
        }
        let mut used = BitSet::new(self.n);
        let mut packing = 0;
        for &(_, e) in &sized {
            if !self.edge_verts[e].intersects(&used) {
                used.union_masked(&self.edge_verts[e], excluded);
                packing += 1;
            }
        }
        Some(NodeBounds {
            degree,
            packing,
            branch_edge: sized[0].1,
        })
    }

    /// Allowed vertices of `edge`, highest residual degree first.
    fn branch_order(&self, edge: usize, uncovered: &BitSet, excluded: &BitSet) -> Vec<usize> {
        let mut verts: Vec<(usize, usize)> = self.edge_verts[edge]
            .iter_and_not(excluded)
            .map(|v| (self.degree(v, uncovered), v))
            .collect();
        verts.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        verts.into_iter().map(|(_, v)| v).collect()
    }
}

struct Incumbent {
    size: AtomicUsize,
    best: Mutex<(Vec<u32>, UbMethod)>,
    deadline: Option<Instant>,
    timed_out: AtomicBool,
}

impl Incumbent {
    fn offer(&self, cover: &[u32]) {
        let mut best = self.best.lock().expect("incumbent lock");
        if cover.len() < best.0.len() {
            *best = (cover.to_vec(), UbMethod::BranchAndBound);
            self.size.store(cover.len(), Ordering::SeqCst);
        }
    }
}

struct Search<'a> {
    inst: &'a Instance,
    inc: &'a Incumbent,
    nodes: u64,
    chosen: Vec<u32>,
}

impl Search<'_> {
    fn node(&mut self, uncovered: &BitSet, excluded: &BitSet) {
        self.nodes += 1;
        if self.nodes % 256 == 1 {
            if let Some(d) = self.inc.deadline {
                if Instant::now() >= d {
                    self.inc.timed_out.store(true, Ordering::Relaxed);
                }
            }
        }
        if self.inc.timed_out.load(Ordering::Relaxed) {
            return;
        }
        let best = self.inc.size.load(Ordering::SeqCst);
        if uncovered.is_empty() {
            if self.chosen.len() < best {
                self.inc.offer(&self.chosen);
            }
            return;
        }
        if self.chosen.len() + 1 >= best {
            return;
        }
        let Some(b) = self.inst.bounds(uncovered, excluded) else {
            return;
        };
        if self.chosen.len() + b.degree.max(b.packing) >= best {
            return;
        }
        let order = self.inst.branch_order(b.branch_edge, uncovered, excluded);
        let mut excl = excluded.clone();
        for v in order {
            let mut unc = uncovered.clone();
            unc.difference_with(&self.inst.inc[v]);
            self.chosen.push(v as u32);
            self.node(&unc, &excl);
            self.chosen.pop();
            excl.insert(v);
        }
    }
}

/// Exact cover number with certificate; see the module docs for the search.
pub fn solve_exact(h: &PartiteHypergraph, opts: &SolveOptions) -> CoverCertificate {
    let start = Instant::now();
    let inst = Instance::new(h);
    let all = BitSet::full(inst.m);
    let none = BitSet::new(inst.n);

    let mut initial = (inst.greedy(&all), UbMethod::Greedy);
    if let Some(seed) = &opts.seed_cover {
        let mut seed = seed.clone();
        seed.sort_unstable();
        seed.dedup();
        if seed.len() < initial.0.len() && verify_cover(h, &seed).is_ok() {
            initial = (seed, UbMethod::Seeded);
        }
    }
    let root = if inst.m == 0 {
        None
    } else {
        inst.bounds(&all, &none)
    };
    let (root_lb, root_method) = match &root {
        Some(b) if b.packing > b.degree => (b.packing, LbMethod::Packing),
        Some(b) => (b.degree, LbMethod::EdgeDegreeBound),
        None => (0, LbMethod::EdgeDegreeBound),
    };

    let incumbent = Incumbent {
        size: AtomicUsize::new(initial.0.len()),
        best: Mutex::new(initial),
        deadline: opts.budget.map(|b| start + b),
        timed_out: AtomicBool::new(false),
    };

    let nodes = match &root {
        Some(b) if opts.parallel && root_lb < incumbent.size.load(Ordering::SeqCst) => {
            let order = inst.branch_order(b.branch_edge, &all, &none);
            order
                .par_iter()
                .enumerate()
                .map(|(i, &v)| {
                    let excluded = BitSet::from_indices(inst.n, order[..i].iter().copied());
                    let mut unc = all.clone();
                    unc.difference_with(&inst.inc[v]);
                    let mut s = Search {
                        inst: &inst,
                        inc: &incumbent,
                        nodes: 0,
                        chosen: vec![v as u32],
                    };
                    s.node(&unc, &excluded);
                    s.nodes
                })
                .sum::<u64>()
                + 1
        }
        _ => {
            let mut s = Search {
                inst: &inst,
                inc: &incumbent,
                nodes: 0,
                chosen: Vec::new(),
            };
            s.node(&all, &none);
            s.nodes
        }
    };

    let timed_out = incumbent.timed_out.load(Ordering::SeqCst);
    let (mut cover, ub_method) = incumbent.best.into_inner().expect("incumbent lock");
    cover.sort_unstable();
    let size = cover.len();
    let (lower_bound, lb_method) = if timed_out {
        (root_lb.min(size), root_method)
    } else {
        (size, LbMethod::ExhaustedSearch)
    };
    CoverCertificate {
        cover,
        size,
        optimal: !timed_out,
        lower_bound,
        lb_method,
        ub_method,
        nodes_explored: nodes,
        elapsed: start.elapsed(),
        timed_out,
    }
}

/// Maximum matching by branch and bound over edge inclusion.
pub fn maximum_matching(h: &PartiteHypergraph) -> MatchingCertificate {
    let n = h.n();
    let edges: Vec<BitSet> = h
        .edges()
        .iter()
        .map(|e| BitSet::from_indices(n, e.iter().map(|&v| v as usize)))
        .collect();
    let min_size = h.edges().iter().map(Vec::len).min().unwrap_or(1);

    struct M<'a> {
        edges: &'a [BitSet],
        n: usize,
        min_size: usize,
        best: Vec<usize>,
        cur: Vec<usize>,
    }
    impl M<'_> {
        fn rec(&mut self, i: usize, used: &BitSet) {
            let free = self.n - used.count();
            let room = (self.edges.len() - i).min(free / self.min_size);
            if self.cur.len() + room <= self.best.len() {
                return;
            }
            if i == self.edges.len() {
                self.best = self.cur.clone();
                return;
            }
            if !self.edges[i].intersects(used) {
                let mut u = used.clone();
                u.union_with(&self.edges[i]);
                self.cur.push(i);
                self.rec(i + 1, &u);
                self.cur.pop();
            }
            self.rec(i + 1, used);
        }
    }
    let mut s = M {
        edges: &edges,
        n,
        min_size,
        best: Vec::new(),
        cur: Vec::new(),
    };
    s.rec(0, &BitSet::new(n));
    MatchingCertificate {
        size: s.best.len(),
        matching: s.best,
        optimal: true,
    }
}

/// Matching number; intersecting hypergraphs answer immediately.
pub fn matching_number(h: &PartiteHypergraph) -> MatchingCertificate {
    if h.m() == 0 {
        return MatchingCertificate {
            matching: Vec::new(),
            size: 0,
            optimal: true,
        };
    }
    if h.is_intersecting() {
        return MatchingCertificate {
            matching: vec![0],
            size: 1,
            optimal: true,
        };
    }
    maximum_matching(h)
}

/// `tau / ((r - 1) nu)`; 1 means the hypergraph meets Ryser's bound.
pub fn ryser_ratio(
    h: &PartiteHypergraph,
    tau: &CoverCertificate,
    nu: &MatchingCertificate,
) -> Result<Ratio<u64>, CoverError> {
    if !tau.optimal || tau.timed_out || !nu.optimal {
        return Err(CoverError::RequiresExactCertificates);
    }
    let r = h.r();
    if r < 2 || nu.size == 0 {
        return Err(CoverError::DegenerateRatio { r, nu: nu.size });
    }
    Ok(Ratio::new(tau.size as u64, ((r - 1) * nu.size) as u64))
}
