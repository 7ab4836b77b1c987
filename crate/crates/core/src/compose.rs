//! Gadget compositions over A_p and the recursive prime-chain builder.
//!
//! Both compositions take A_p with vertex classes `V_0..V_p` and edge
//! classes `C_0..C_p`, attach a fresh copy `J^i` of a gadget to every edge
//! class, put one gadget class into `V_i` and the others into new host
//! classes, and extend each edge of `C_i` by gadget edges. Gadget copies get
//! vertex ids after A_p's, copy `i` before copy `i + 1`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hypergraph::{meta_keys, HypergraphError, PartiteHypergraph};
use crate::planes::{
    build_ap, build_j_gadget, truncate_projective, PlaneError, TruncatedStructure,
};
use crate::primes::{ChainDecomposition, ChainError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("placement does not fit a gadget with {r0} classes: {reason}")]
    PlacementSizeMismatch { r0: usize, reason: String },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("gadget is not intersecting (edges {0} and {1} are disjoint)")]
    GadgetNotIntersecting(usize, usize),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Where the classes of each gadget copy go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    /// Gadget class embedded into `V_i`.
    pub gadget_class_into_vi: usize,
    /// Remaining gadget classes in the order they fill the new host classes.
    pub class_map: Vec<usize>,
}

impl Placement {
    pub fn canonical(r0: usize) -> Self {
        Placement {
            gadget_class_into_vi: 0,
            class_map: (1..r0).collect(),
        }
    }

    /// Seeded random placement for exploring choice dependence.
    pub fn random(r0: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let into = rng.gen_range(0..r0);
        let mut rest: Vec<usize> = (0..r0).filter(|&c| c != into).collect();
        rest.shuffle(&mut rng);
        Placement {
            gadget_class_into_vi: into,
            class_map: rest,
        }
    }

    fn validate(&self, r0: usize) -> Result<(), ComposeError> {
        let mismatch = |reason: &str| ComposeError::PlacementSizeMismatch {
            r0,
            reason: reason.to_string(),
        };
        if self.class_map.len() + 1 != r0 {
            return Err(mismatch("class_map must name every class but one"));
        }
        let mut seen = vec![false; r0];
        for &c in std::iter::once(&self.gadget_class_into_vi).chain(&self.class_map) {
            match seen.get_mut(c) {
                Some(s) if !*s => *s = true,
                Some(_) => return Err(mismatch("class used twice")),
                None => return Err(mismatch("class index out of range")),
            }
        }
        Ok(())
    }

    /// Host class for each gadget class, given the A_p class `i` and the
    /// first new class index.
    fn host_classes(&self, vi: usize, first_new: usize) -> Vec<usize> {
        let mut host = vec![0; self.class_map.len() + 1];
        host[self.gadget_class_into_vi] = vi;
        for (slot, &c) in self.class_map.iter().enumerate() {
            host[c] = first_new + slot;
        }
        host
    }

    fn describe(&self) -> String {
        let rest: Vec<String> = self.class_map.iter().map(usize::to_string).collect();
        format!("vi:{};new:{}", self.gadget_class_into_vi, rest.join(","))
    }
}

/// Vertex layout of A_p plus `p + 1` gadget copies.
struct Layout {
    classes: Vec<Vec<u32>>,
    labels: Vec<(u32, String)>,
    /// Id offset of gadget copy `i`.
    offsets: Vec<u32>,
}

fn layout(a: &TruncatedStructure, gadget: &PartiteHypergraph, placement: &Placement) -> Layout {
    let ap = &a.base;
    let p1 = ap.r();
    let r0 = gadget.r();
    let mut classes: Vec<Vec<u32>> = ap.classes().to_vec();
    classes.extend(std::iter::repeat_n(Vec::new(), r0 - 1));
    let mut labels: Vec<(u32, String)> = ap
        .labels()
        .iter()
        .map(|(&v, l)| (v, format!("A:{l}")))
        .collect();
    let mut offsets = Vec::with_capacity(p1);
    let mut next = ap.n() as u32;
    for i in 0..p1 {
        offsets.push(next);
        let host = placement.host_classes(i, p1);
        for (gc, class) in gadget.classes().iter().enumerate() {
            classes[host[gc]].extend(class.iter().map(|&v| next + v));
        }
        for v in 0..gadget.n() as u32 {
            let inner = gadget.labels().get(&v).map(String::as_str).unwrap_or("-");
            labels.push((next + v, format!("J{i}:{v}:{inner}")));
        }
        next += gadget.n() as u32;
    }
    Layout {
        classes,
        labels,
        offsets,
    }
}

fn finish(layout: Layout, edges: Vec<Vec<u32>>) -> Result<PartiteHypergraph, ComposeError> {
    let mut h = PartiteHypergraph::new(layout.classes, edges)?;
    for (v, l) in layout.labels {
        h.set_label(v, l)?;
    }
    Ok(h)
}

fn check_ap(a: &TruncatedStructure) -> Result<usize, ComposeError> {
    let ap = &a.base;
    let p = ap.r().saturating_sub(1);
    if p < 2
        || a.parallel_classes.len() != p + 1
        || ap.meta_value(meta_keys::CONSTRUCTION) != Some("ap")
    {
        return Err(ComposeError::PreconditionViolated(
            "host must be an A_p structure".into(),
        ));
    }
    Ok(p)
}

/// Edge set `{ e + f : e in C_i, f in J^i }`.
pub fn compose_near_extremal(
    a: &TruncatedStructure,
    gadget: &PartiteHypergraph,
    placement: &Placement,
) -> Result<PartiteHypergraph, ComposeError> {
    let p = check_ap(a)?;
    let r0 = gadget.r();
    if r0 > p {
        return Err(ComposeError::PreconditionViolated(format!(
            "gadget has r0 = {r0} classes but p = {p}"
        )));
    }
    if r0 < 1 || !gadget.is_partite_uniform() {
        return Err(ComposeError::PreconditionViolated(
            "gadget must be r0-partite and r0-uniform".into(),
        ));
    }
    placement.validate(r0)?;
    if let Some((i, j)) = gadget.disjoint_pair() {
        return Err(ComposeError::GadgetNotIntersecting(i, j));
    }
    let g_j = match gadget.guarantee() {
        Some(g) if g >= 2 => g,
        other => {
            return Err(ComposeError::PreconditionViolated(format!(
                "gadget must carry a cover-number guarantee of at least 2, found {other:?}"
            )))
        }
    };

    let ap = &a.base;
    let lay = layout(a, gadget, placement);
    let mut edges = Vec::with_capacity((p + 1) * (p - 1) * gadget.m());
    for (i, class) in a.parallel_classes.iter().enumerate() {
        let off = lay.offsets[i];
        for &e in class {
            for f in gadget.edges() {
                let mut edge = ap.edges()[e].clone();
                edge.extend(f.iter().map(|&v| off + v));
                edges.push(edge);
            }
        }
    }
    let mut h = finish(lay, edges)?;
    let r = p + r0;
    // tau(J) >= r0 - 1 - d0 gives tau(H) >= r - 1 - (d0 + 1) = p - 1 + g_j
    let guarantee = p - 1 + g_j;
    h.set_meta(meta_keys::CONSTRUCTION, "hr")?;
    h.set_meta("p", p)?;
    h.set_meta("r0", r0)?;
    h.set_meta("placement", placement.describe())?;
    h.set_meta(
        "gadget",
        gadget
            .meta_value(meta_keys::CONSTRUCTION)
            .unwrap_or("unnamed"),
    )?;
    h.set_meta(meta_keys::CLAIM_PARTITE, true)?;
    h.set_meta(meta_keys::CLAIM_UNIFORM, r)?;
    h.set_meta(meta_keys::CLAIM_INTERSECTING, true)?;
    h.set_meta(meta_keys::GUARANTEE, guarantee)?;
    Ok(h)
}

/// `G_{2p-1}`: A_p composed with the AG(2,p-1) gadget, edge `j` of `C_i`
/// extended only by the edges of parallel class `j` of `J^i`.
pub fn compose_extremal(p: u64) -> Result<PartiteHypergraph, ComposeError> {
    compose_extremal_with(p, None)
}

/// As [`compose_extremal`]; with a seed, the placement and the matching
/// between `C_i` and the gadget classes are drawn at random per copy.
pub fn compose_extremal_with(p: u64, seed: Option<u64>) -> Result<PartiteHypergraph, ComposeError> {
    let a = build_ap(p)?;
    let j = build_j_gadget(p)?;
    let gadget = &j.base;
    let r0 = gadget.r();
    let pp = p as usize;
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let placement = match rng.as_mut() {
        Some(rng) => Placement::random(r0, rng.gen()),
        None => Placement::canonical(r0),
    };
    let lay = layout(&a, gadget, &placement);
    let ap = &a.base;
    let mut edges = Vec::with_capacity((pp + 1) * (pp - 1) * (pp - 1));
    for (i, class) in a.parallel_classes.iter().enumerate() {
        let off = lay.offsets[i];
        let mut matching: Vec<usize> = (0..j.parallel_classes.len()).collect();
        if let Some(rng) = rng.as_mut() {
            matching.shuffle(rng);
        }
        for (slot, &e) in class.iter().enumerate() {
            for &f in &j.parallel_classes[matching[slot]] {
                let mut edge = ap.edges()[e].clone();
                edge.extend(gadget.edges()[f].iter().map(|&v| off + v));
                edges.push(edge);
            }
        }
    }
    let mut h = finish(lay, edges)?;
    let r = 2 * pp - 1;
    h.set_meta(meta_keys::CONSTRUCTION, "gr")?;
    h.set_meta("p", p)?;
    h.set_meta("r0", r0)?;
    h.set_meta("placement", placement.describe())?;
    if let Some(seed) = seed {
        h.set_meta("seed", seed)?;
    }
    h.set_meta(meta_keys::CLAIM_PARTITE, true)?;
    h.set_meta(meta_keys::CLAIM_UNIFORM, r)?;
    h.set_meta(meta_keys::CLAIM_INTERSECTING, true)?;
    h.set_meta(meta_keys::GUARANTEE, r - 1)?;
    Ok(h)
}

/// Truncated plane of order `p_1`, then one near-extremal step per further
/// entry, each over `A_{p_i}`.
pub fn build_chain(chain: &ChainDecomposition) -> Result<PartiteHypergraph, ComposeError> {
    build_chain_with(chain, None)
}

pub fn build_chain_with(
    chain: &ChainDecomposition,
    seed: Option<u64>,
) -> Result<PartiteHypergraph, ComposeError> {
    // re-check in case the chain was built through deserialization paths
    let chain = ChainDecomposition::new(chain.primes().to_vec())?;
    let primes = chain.primes();
    let mut h = truncate_projective(primes[0])?.base;
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    for &p in &primes[1..] {
        let a = build_ap(p)?;
        let placement = match rng.as_mut() {
            Some(rng) => Placement::random(h.r(), rng.gen()),
            None => Placement::canonical(h.r()),
        };
        h = compose_near_extremal(&a, &h, &placement)?;
    }
    let list: Vec<String> = primes.iter().map(u64::to_string).collect();
    h.set_meta("chain", list.join(","))?;
    if primes.len() > 1 {
        h.set_meta(meta_keys::CONSTRUCTION, "hr-chain")?;
    }
    if let Some(seed) = seed {
        h.set_meta("seed", seed)?;
    }
    let expected = chain.r() as usize - chain.k();
    debug_assert_eq!(h.guarantee(), Some(expected));
    Ok(h)
}
