//! Desarguesian planes PG(2,q) and AG(2,q) and the truncated structures
//! built from them.
//!
//! Projective points are normalized homogeneous triples (leftmost nonzero
//! coordinate 1) in lexicographic order of element indices; lines use the
//! same triples as dual coordinates. The affine plane drops the line
//! `z = 0` and labels point `(x:y:1)` by `(x, y)`, indexed `x*q + y`. Its
//! parallel classes are ordered by slope with the vertical class last, and
//! the lines of a class by intercept.

use std::fmt;

use thiserror::Error;

use crate::gf::{make_field, Field, GfError};
use crate::hypergraph::{meta_keys, HypergraphError, PartiteHypergraph};
use crate::primes;

/// Largest plane order the constructors accept.
pub const MAX_PLANE_ORDER: u64 = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("plane order {0} exceeds the supported maximum {MAX_PLANE_ORDER}")]
    TooLarge(u64),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

impl PlaneError {
    pub fn is_not_a_prime_power(&self) -> bool {
        matches!(self, PlaneError::Field(GfError::NotAPrimePower(_)))
    }
}

/// Index-based arithmetic tables for a small field.
#[derive(Debug, Clone)]
pub struct FieldTables {
    q: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl FieldTables {
    pub fn new(field: &Field) -> Result<Self, GfError> {
        let q = field.order() as usize;
        let els = field.elements();
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for (i, a) in els.iter().enumerate() {
            for (j, b) in els.iter().enumerate() {
                add[i * q + j] = field.add(a, b)?.index() as u32;
                mul[i * q + j] = field.mul(a, b)?.index() as u32;
            }
        }
        let neg = els
            .iter()
            .map(|a| field.neg(a).map(|x| x.index() as u32))
            .collect::<Result<_, _>>()?;
        let inv = els
            .iter()
            .map(|a| {
                if a.is_zero() {
                    Ok(0)
                } else {
                    field.inv(a).map(|x| x.index() as u32)
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(FieldTables {
            q,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneKind {
    Projective,
    Affine,
}

impl fmt::Display for PlaneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneKind::Projective => write!(f, "projective"),
            PlaneKind::Affine => write!(f, "affine"),
        }
    }
}

/// Point/line incidence structure of a plane of order `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidencePlane {
    pub kind: PlaneKind,
    pub q: u64,
    /// Coordinates as field element indices: triples for projective,
    /// pairs for affine.
    pub points: Vec<Vec<u32>>,
    /// Sorted point indices of each line.
    pub lines: Vec<Vec<u32>>,
    /// Line indices grouped by direction; empty for projective planes.
    pub parallel_classes: Vec<Vec<usize>>,
}

fn coord_label(c: &[u32]) -> String {
    let parts: Vec<String> = c.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

impl IncidencePlane {
    /// Points as vertices, each in its own class, lines as edges.
    pub fn to_hypergraph(&self) -> Result<PartiteHypergraph, PlaneError> {
        let classes = (0..self.points.len() as u32).map(|v| vec![v]).collect();
        let mut h = PartiteHypergraph::new(classes, self.lines.clone())?;
        for (v, c) in self.points.iter().enumerate() {
            h.set_label(v as u32, coord_label(c))?;
        }
        let (name, size) = match self.kind {
            PlaneKind::Projective => ("pg", self.q + 1),
            PlaneKind::Affine => ("ag", self.q),
        };
        h.set_meta(meta_keys::CONSTRUCTION, name)?;
        h.set_meta("q", self.q)?;
        h.set_meta(meta_keys::CLAIM_PARTITE, true)?;
        h.set_meta(meta_keys::CLAIM_UNIFORM, size)?;
        h.set_meta(
            meta_keys::CLAIM_INTERSECTING,
            self.kind == PlaneKind::Projective,
        )?;
        if self.kind == PlaneKind::Affine {
            h.set_meta(meta_keys::GUARANTEE, 2 * self.q - 1)?;
        }
        Ok(h)
    }

    /// All points of the first line of the first parallel class plus the
    /// least point of every other line in that class: `2q - 1` points
    /// meeting every line. `None` for projective planes.
    pub fn canonical_affine_cover(&self) -> Option<Vec<u32>> {
        if self.kind != PlaneKind::Affine {
            return None;
        }
        let class = &self.parallel_classes[0];
        let mut cover = self.lines[class[0]].clone();
        cover.extend(class[1..].iter().map(|&l| self.lines[l][0]));
        cover.sort_unstable();
        Some(cover)
    }
}

fn field_for(q: u64) -> Result<(Field, FieldTables), PlaneError> {
    let field = make_field(q)?;
    if q > MAX_PLANE_ORDER {
        return Err(PlaneError::TooLarge(q));
    }
    let tables = FieldTables::new(&field)?;
    Ok((field, tables))
}

/// Index of a normalized triple in the canonical point order.
fn triple_index(q: u32, t: [u32; 3]) -> u32 {
    match t {
        [0, 0, _] => 0,
        [0, _, b] => 1 + b,
        [_, a, b] => 1 + q + a * q + b,
    }
}

fn normalize(f: &FieldTables, t: [u32; 3]) -> [u32; 3] {
    let lead = t.iter().copied().find(|&c| c != 0).expect("nonzero vector");
    let s = f.inv(lead);
    [f.mul(t[0], s), f.mul(t[1], s), f.mul(t[2], s)]
}

fn projective_triples(q: u32) -> Vec<[u32; 3]> {
    let mut out = vec![[0, 0, 1]];
    out.extend((0..q).map(|b| [0, 1, b]));
    for a in 0..q {
        out.extend((0..q).map(|b| [1, a, b]));
    }
    out
}

fn projective_with(f: &FieldTables) -> IncidencePlane {
    let q = f.order() as u32;
    let triples = projective_triples(q);
    let lines = triples
        .iter()
        .map(|&l| {
            // basis u, v of the solution space of l . x = 0
            let (u, v) = match l {
                [0, 0, _] => ([1, 0, 0], [0, 1, 0]),
                [0, _, c] => ([1, 0, 0], [0, f.neg(c), 1]),
                [_, b, c] => ([f.neg(b), 1, 0], [f.neg(c), 0, 1]),
            };
            let mut pts = vec![triple_index(q, normalize(f, u))];
            for a in 0..q {
                let w = [
                    f.add(v[0], f.mul(a, u[0])),
                    f.add(v[1], f.mul(a, u[1])),
                    f.add(v[2], f.mul(a, u[2])),
                ];
                pts.push(triple_index(q, normalize(f, w)));
            }
            pts.sort_unstable();
            pts
        })
        .collect();
    IncidencePlane {
        kind: PlaneKind::Projective,
        q: q as u64,
        points: triples.iter().map(|t| t.to_vec()).collect(),
        lines,
        parallel_classes: Vec::new(),
    }
}

pub fn build_projective(q: u64) -> Result<IncidencePlane, PlaneError> {
    let (_, f) = field_for(q)?;
    Ok(projective_with(&f))
}

/// Affine plane obtained from PG(2,q) by deleting the line `z = 0`.
pub fn build_affine(q: u64) -> Result<IncidencePlane, PlaneError> {
    let (_, f) = field_for(q)?;
    let pg = projective_with(&f);
    let qq = q as u32;
    // projective index -> affine index, or None on the line at infinity
    let affine_of: Vec<Option<u32>> = pg
        .points
        .iter()
        .map(|t| {
            (t[2] != 0).then(|| {
                let s = f.inv(t[2]);
                f.mul(t[0], s) * qq + f.mul(t[1], s)
            })
        })
        .collect();
    let at_infinity = [0u32, 0, 1];
    // class key: slope index, with the vertical direction (0:1:0) last
    let mut keyed: Vec<(u32, u32, Vec<u32>)> = Vec::new();
    for (li, line) in pg.lines.iter().enumerate() {
        if pg.points[li] == at_infinity {
            continue;
        }
        let mut pts = Vec::with_capacity(q as usize);
        let mut slope = None;
        for &p in line {
            match affine_of[p as usize] {
                Some(a) => pts.push(a),
                None => {
                    let t = &pg.points[p as usize];
                    slope = Some(if t[0] == 0 { qq } else { t[1] });
                }
            }
        }
        pts.sort_unstable();
        keyed.push((
            slope.expect("every affine line meets infinity once"),
            pts[0],
            pts,
        ));
    }
    keyed.sort_unstable();
    let mut parallel_classes = vec![Vec::new(); q as usize + 1];
    let mut lines = Vec::with_capacity(keyed.len());
    for (i, (slope, _, pts)) in keyed.into_iter().enumerate() {
        parallel_classes[slope as usize].push(i);
        lines.push(pts);
    }
    let points = (0..qq)
        .flat_map(|x| (0..qq).map(move |y| vec![x, y]))
        .collect();
    Ok(IncidencePlane {
        kind: PlaneKind::Affine,
        q,
        points,
        lines,
        parallel_classes,
    })
}

/// What was removed from the underlying plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deletion {
    pub line: Option<String>,
    pub point: Option<String>,
}

/// A partite hypergraph cut out of a plane, with its edge parallel classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedStructure {
    pub base: PartiteHypergraph,
    /// Edge indices of `base`, ascending within each class. Class `i` of
    /// edges is paired with vertex class `i` where that makes sense (A_p).
    pub parallel_classes: Vec<Vec<usize>>,
    pub deleted: Deletion,
    /// Order of the plane the structure was cut from.
    pub order: u64,
}

/// Maps edges (as vertex lists) to their index in the canonical edge order.
fn edge_indices(h: &PartiteHypergraph, groups: &[Vec<Vec<u32>>]) -> Vec<Vec<usize>> {
    groups
        .iter()
        .map(|g| {
            let mut idx: Vec<usize> = g
                .iter()
                .map(|e| {
                    let mut e = e.clone();
                    e.sort_unstable();
                    h.edges().binary_search(&e).expect("edge present")
                })
                .collect();
            idx.sort_unstable();
            idx
        })
        .collect()
}

/// PG(2,q) minus the point `(0:0:1)` and every line through it.
pub fn truncate_projective(q: u64) -> Result<TruncatedStructure, PlaneError> {
    let pg = build_projective(q)?;
    let x = 0u32;
    let (through, rest): (Vec<&Vec<u32>>, Vec<&Vec<u32>>) =
        pg.lines.iter().partition(|l| l.contains(&x));
    let classes = through
        .iter()
        .map(|l| l.iter().filter(|&&v| v != x).map(|&v| v - 1).collect())
        .collect();
    let edges = rest
        .iter()
        .map(|l| l.iter().map(|&v| v - 1).collect())
        .collect();
    let mut h = PartiteHypergraph::new(classes, edges)?;
    for (v, c) in pg.points.iter().enumerate().skip(1) {
        h.set_label(v as u32 - 1, coord_label(c))?;
    }
    h.set_meta(meta_keys::CONSTRUCTION, "trunc-pg")?;
    h.set_meta("q", q)?;
    h.set_meta(meta_keys::CLAIM_PARTITE, true)?;
    h.set_meta(meta_keys::CLAIM_UNIFORM, q + 1)?;
    h.set_meta(meta_keys::CLAIM_INTERSECTING, true)?;
    h.set_meta(meta_keys::GUARANTEE, q)?;
    Ok(TruncatedStructure {
        base: h,
        parallel_classes: Vec::new(),
        deleted: Deletion {
            line: None,
            point: Some("(0,0,1)".into()),
        },
        order: q,
    })
}

/// AG(2,p) minus the origin and the `p + 1` lines through it.
///
/// Vertex class `i` is the line of direction `i` through the origin, minus
/// the origin; edge class `i` holds the other `p - 1` lines of direction
/// `i`, so edges of class `i` avoid vertex class `i`.
pub fn build_ap(p: u64) -> Result<TruncatedStructure, PlaneError> {
    let ag = build_affine(p)?;
    let origin = 0u32;
    let mut classes = Vec::new();
    let mut groups = Vec::new();
    for class in &ag.parallel_classes {
        let mut group = Vec::new();
        for &l in class {
            let line = &ag.lines[l];
            if line.contains(&origin) {
                classes.push(
                    line.iter()
                        .filter(|&&v| v != origin)
                        .map(|&v| v - 1)
                        .collect(),
                );
            } else {
                group.push(line.iter().map(|&v| v - 1).collect::<Vec<u32>>());
            }
        }
        groups.push(group);
    }
    let edges = groups.iter().flatten().cloned().collect();
    let mut h = PartiteHypergraph::new(classes, edges)?;
    for (v, c) in ag.points.iter().enumerate().skip(1) {
        h.set_label(v as u32 - 1, coord_label(c))?;
    }
    let parallel_classes = edge_indices(&h, &groups);
    h.set_meta(meta_keys::CONSTRUCTION, "ap")?;
    h.set_meta("p", p)?;
    h.set_meta(meta_keys::CLAIM_PARTITE, true)?;
    h.set_meta(meta_keys::CLAIM_UNIFORM, p)?;
    // for p = 2 the three edges form a triangle
    h.set_meta(meta_keys::CLAIM_INTERSECTING, p == 2)?;
    if p == 2 {
        h.set_meta("degenerate", true)?;
    }
    Ok(TruncatedStructure {
        base: h,
        parallel_classes,
        deleted: Deletion {
            line: Some("z=0".into()),
            point: Some("(0,0)".into()),
        },
        order: p,
    })
}

/// AG(2,p-1) with its vertical parallel class turned into the vertex
/// partition; the remaining `p - 1` classes of lines are the edges.
pub fn build_j_gadget(p: u64) -> Result<TruncatedStructure, PlaneError> {
    if !primes::is_prime_power(p).is_prime_power {
        return Err(GfError::NotAPrimePower(p).into());
    }
    let s = p.saturating_sub(1);
    let ag = build_affine(s)?;
    let (vertical, rest) = ag.parallel_classes.split_last().expect("q + 1 classes");
    let classes = vertical.iter().map(|&l| ag.lines[l].clone()).collect();
    let groups: Vec<Vec<Vec<u32>>> = rest
        .iter()
        .map(|c| c.iter().map(|&l| ag.lines[l].clone()).collect())
        .collect();
    let edges = groups.iter().flatten().cloned().collect();
    let mut h = PartiteHypergraph::new(classes, edges)?;
    for (v, c) in ag.points.iter().enumerate() {
        h.set_label(v as u32, coord_label(c))?;
    }
    let parallel_classes = edge_indices(&h, &groups);
    h.set_meta(meta_keys::CONSTRUCTION, "gadget-j")?;
    h.set_meta("p", p)?;
    h.set_meta(meta_keys::CLAIM_PARTITE, true)?;
    h.set_meta(meta_keys::CLAIM_UNIFORM, s)?;
    h.set_meta(meta_keys::CLAIM_INTERSECTING, false)?;
    Ok(TruncatedStructure {
        base: h,
        parallel_classes,
        deleted: Deletion {
            line: Some("z=0; vertical class as partition".into()),
            point: None,
        },
        order: s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::intersection_size;

    fn check_projective_axioms(pg: &IncidencePlane) {
        let q = pg.q as usize;
        let n = q * q + q + 1;
        assert_eq!(pg.points.len(), n);
        assert_eq!(pg.lines.len(), n);
        for l in &pg.lines {
            assert_eq!(l.len(), q + 1);
        }
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(intersection_size(&pg.lines[i], &pg.lines[j]), 1);
            }
        }
        let mut pair_count = vec![0u8; n * n];
        for l in &pg.lines {
            for &a in l {
                for &b in l {
                    if a < b {
                        pair_count[a as usize * n + b as usize] += 1;
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                assert_eq!(pair_count[a * n + b], 1);
            }
        }
    }

    /// Incidence by direct dot products over the field, independent of the
    /// kernel-basis shortcut.
    fn dot_product_lines(q: u64) -> Vec<Vec<u32>> {
        let field = make_field(q).unwrap();
        let f = FieldTables::new(&field).unwrap();
        let t = projective_triples(q as u32);
        t.iter()
            .map(|l| {
                (0..t.len() as u32)
                    .filter(|&p| {
                        let pt = t[p as usize];
                        let s = f.add(
                            f.add(f.mul(l[0], pt[0]), f.mul(l[1], pt[1])),
                            f.mul(l[2], pt[2]),
                        );
                        s == 0
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn projective_counts_and_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let pg = build_projective(q).unwrap();
            check_projective_axioms(&pg);
            assert_eq!(pg.lines, dot_product_lines(q), "q={q}");
        }
    }

    #[test]
    fn fano_plane() {
        let pg = build_projective(2).unwrap();
        assert_eq!(pg.points.len(), 7);
        assert_eq!(pg.points[0], vec![0, 0, 1]);
        assert!(pg.lines.iter().all(|l| l.len() == 3));
    }

    #[test]
    fn not_prime_power() {
        assert!(build_projective(6).unwrap_err().is_not_a_prime_power());
        assert!(build_affine(10).unwrap_err().is_not_a_prime_power());
        assert!(build_ap(6).unwrap_err().is_not_a_prime_power());
        assert!(truncate_projective(12).unwrap_err().is_not_a_prime_power());
        // p = 7 is a prime but 6 is not a prime power
        assert!(build_j_gadget(7).unwrap_err().is_not_a_prime_power());
        assert!(build_j_gadget(6).unwrap_err().is_not_a_prime_power());
        assert!(build_j_gadget(2).unwrap_err().is_not_a_prime_power());
    }

    #[test]
    fn affine_counts() {
        for (q, classes) in [(2, 3), (3, 4), (4, 5)] {
            let ag = build_affine(q).unwrap();
            assert_eq!(ag.points.len() as u64, q * q);
            assert_eq!(ag.lines.len() as u64, q * (q + 1));
            assert_eq!(ag.parallel_classes.len(), classes);
            for class in &ag.parallel_classes {
                assert_eq!(class.len() as u64, q);
            }
        }
    }

    #[test]
    fn affine_structure_exhaustive() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let ag = build_affine(q).unwrap();
            let class_of: Vec<usize> = {
                let mut c = vec![0; ag.lines.len()];
                for (ci, class) in ag.parallel_classes.iter().enumerate() {
                    for &l in class {
                        c[l] = ci;
                    }
                }
                c
            };
            for l in &ag.lines {
                assert_eq!(l.len() as u64, q);
            }
            for i in 0..ag.lines.len() {
                for j in i + 1..ag.lines.len() {
                    let k = intersection_size(&ag.lines[i], &ag.lines[j]);
                    assert_eq!(k, usize::from(class_of[i] != class_of[j]), "q={q} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn affine_slopes_follow_coordinates() {
        // class 0 is slope 0: lines y = b, i.e. points {x*q + b}
        let ag = build_affine(3).unwrap();
        let first = &ag.lines[ag.parallel_classes[0][0]];
        assert_eq!(first, &vec![0, 3, 6]);
        // last class is vertical: x = c
        let vertical = &ag.lines[ag.parallel_classes[3][1]];
        assert_eq!(vertical, &vec![3, 4, 5]);
    }

    #[test]
    fn canonical_cover_examples() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11] {
            let ag = build_affine(q).unwrap();
            let cover = ag.canonical_affine_cover().unwrap();
            assert_eq!(cover.len() as u64, 2 * q - 1);
            let mut dedup = cover.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), cover.len());
            for l in &ag.lines {
                assert!(l.iter().any(|v| cover.binary_search(v).is_ok()));
            }
        }
        assert_eq!(build_projective(3).unwrap().canonical_affine_cover(), None);
    }

    #[test]
    fn truncated_counts() {
        for (q, n, m, k, classes) in [(2u64, 6, 4, 3, 3), (3, 12, 9, 4, 4)] {
            let t = truncate_projective(q).unwrap();
            let h = &t.base;
            assert_eq!((h.n(), h.m(), h.r()), (n, m, classes));
            assert!(h.is_uniform(k));
            assert!(h.classes().iter().all(|c| c.len() as u64 == q));
            assert!(h.is_partite_uniform());
            assert!(h.is_intersecting());
        }
        for q in [4, 5, 7] {
            let h = truncate_projective(q).unwrap().base;
            assert_eq!(h.m() as u64, q * q);
            assert!(h.is_intersecting());
        }
    }

    fn check_ap(p: u64) {
        let a = build_ap(p).unwrap();
        let h = &a.base;
        let pp = p as usize;
        assert_eq!(h.r(), pp + 1);
        assert_eq!(h.n(), pp * pp - 1);
        assert!(h.classes().iter().all(|c| c.len() == pp - 1));
        assert!(h.is_uniform(pp));
        assert!(h.is_r_partite());
        assert_eq!(a.parallel_classes.len(), pp + 1);
        let mut edge_class = vec![usize::MAX; h.m()];
        for (ci, class) in a.parallel_classes.iter().enumerate() {
            assert_eq!(class.len(), pp - 1);
            for &e in class {
                edge_class[e] = ci;
                assert!(h.edges()[e].iter().all(|&v| h.class_of(v) != ci));
            }
        }
        assert!(edge_class.iter().all(|&c| c != usize::MAX));
        for i in 0..h.m() {
            for j in i + 1..h.m() {
                let k = intersection_size(&h.edges()[i], &h.edges()[j]);
                assert_eq!(k, usize::from(edge_class[i] != edge_class[j]));
            }
        }
    }

    #[test]
    fn ap_properties() {
        for p in [2, 3, 4, 5, 7, 8, 9] {
            check_ap(p);
        }
        let a3 = build_ap(3).unwrap().base;
        assert_eq!((a3.n(), a3.r(), a3.m()), (8, 4, 8));
        let a5 = build_ap(5).unwrap().base;
        assert_eq!((a5.n(), a5.r(), a5.m()), (24, 6, 24));
        let a2 = build_ap(2).unwrap().base;
        assert_eq!((a2.n(), a2.r(), a2.m()), (3, 3, 3));
        assert!(a2.is_uniform(2));
    }

    fn check_gadget(p: u64) {
        let j = build_j_gadget(p).unwrap();
        let h = &j.base;
        let s = p as usize - 1;
        assert_eq!((h.n(), h.r(), h.m()), (s * s, s, s * s));
        assert!(h.is_partite_uniform());
        assert_eq!(j.parallel_classes.len(), s);
        let mut edge_class = vec![0; h.m()];
        for (ci, class) in j.parallel_classes.iter().enumerate() {
            assert_eq!(class.len(), s);
            for &e in class {
                edge_class[e] = ci;
            }
        }
        for i in 0..h.m() {
            for k in i + 1..h.m() {
                let x = intersection_size(&h.edges()[i], &h.edges()[k]);
                assert_eq!(x, usize::from(edge_class[i] != edge_class[k]));
            }
        }
    }

    #[test]
    fn gadget_properties() {
        for p in [3, 4, 5, 8, 9] {
            check_gadget(p);
        }
    }

    #[test]
    fn deterministic_builds() {
        for q in [4, 9] {
            assert_eq!(build_projective(q).unwrap(), build_projective(q).unwrap());
            assert_eq!(build_ap(q).unwrap(), build_ap(q).unwrap());
        }
    }
}
