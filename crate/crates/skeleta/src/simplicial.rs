//! Abstract simplicial complexes on a vertex set `[n]`, stored as bitsets,
//! together with the face-neighborhood operators (star, link, closure,
//! restriction, cone) and the classification of smooth components of the
//! associated skeleton.
//!
//! Vertices are 1-based in all public input/output; internally a [`Face`]
//! is an `u32` bitmask, which caps `n` at 20 for enumeration purposes.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on the vertex count for enumeration commands.
pub const MAX_VERTICES: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("face {0} is not a face of the complex")]
    NotAFace(Face),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex count {0} exceeds supported maximum {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("vertex {0} of [n] is not a face; pass allow_missing_vertices to accept")]
    MissingVertex(usize),
}

/// A subset of `[n]` encoded as a bitmask; bit `i` stands for vertex `i + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Face(pub u32);

impl Face {
    pub const EMPTY: Face = Face(0);

    /// Builds a face from 1-based vertex labels.
    pub fn from_verts(verts: &[usize]) -> Face {
        let mut bits = 0u32;
        for &v in verts {
            assert!(v >= 1 && v <= MAX_VERTICES, "vertex {v} out of range");
            bits |= 1 << (v - 1);
        }
        Face(bits)
    }

    pub fn singleton(v: usize) -> Face {
        Face::from_verts(&[v])
    }

    pub fn card(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v >= 1 && v <= 32 && self.0 & (1 << (v - 1)) != 0
    }

    pub fn is_subset(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    pub fn inter(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    pub fn minus(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Face) -> bool {
        self.0 & other.0 == 0
    }

    pub fn insert(self, v: usize) -> Face {
        self.union(Face::singleton(v))
    }

    pub fn remove(self, v: usize) -> Face {
        self.minus(Face::singleton(v))
    }

    /// 1-based vertices in increasing order.
    pub fn verts(self) -> Vec<usize> {
        (1..=32).filter(|&v| self.contains(v)).collect()
    }

    /// All subsets, in increasing bitmask order.
    pub fn subsets(self) -> Vec<Face> {
        let mut out = Vec::with_capacity(1 << self.card());
        let mut sub = self.0;
        loop {
            out.push(Face(sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & self.0;
        }
        out.reverse();
        out
    }

    /// Lexicographic order on the sorted vertex sequences, so that
    /// `{1,3} < {2}` and `{1} < {1,2}`. This is the tie-breaking order used
    /// for every deterministic choice in the crate; it differs from the
    /// derived `Ord` (plain bitmask order).
    pub fn cmp_lex(self, other: Face) -> std::cmp::Ordering {
        self.verts().cmp(&other.verts())
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        let verts: Vec<String> = self.verts().iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", verts.join(","))
    }
}

/// A downward-closed family of faces on the vertex set `[n]`.
///
/// Always contains the empty face. By default every singleton of `[n]`
/// must be a face; complexes produced by `link`/`restrict` relax this.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialComplex {
    n: usize,
    faces: BTreeSet<Face>,
}

impl SimplicialComplex {
    /// Smallest downward-closed family on `[n]` containing the given faces
    /// (and the empty face).
    pub fn closure(n: usize, faces: &[Face]) -> Result<SimplicialComplex, ComplexError> {
        if n > MAX_VERTICES {
            return Err(ComplexError::TooManyVertices(n));
        }
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut set = BTreeSet::new();
        set.insert(Face::EMPTY);
        for &f in faces {
            if f.0 & !full != 0 {
                let vertex = *f.verts().iter().find(|&&v| v > n).unwrap();
                return Err(ComplexError::VertexOutOfRange { vertex, n });
            }
            for sub in f.subsets() {
                set.insert(sub);
            }
        }
        Ok(SimplicialComplex { n, faces: set })
    }

    /// Validates that every vertex of `[n]` is a face.
    pub fn require_all_vertices(&self) -> Result<(), ComplexError> {
        for v in 1..=self.n {
            if !self.contains(Face::singleton(v)) {
                return Err(ComplexError::MissingVertex(v));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, f: Face) -> bool {
        self.faces.contains(&f)
    }

    /// Faces in increasing bitmask order.
    pub fn faces(&self) -> impl Iterator<Item = Face> + '_ {
        self.faces.iter().copied()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Vertices `v` with `{v}` a face.
    pub fn vertices(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&v| self.contains(Face::singleton(v)))
            .collect()
    }

    /// Faces not contained in any other face.
    pub fn maximal_faces(&self) -> Vec<Face> {
        self.faces
            .iter()
            .copied()
            .filter(|&f| {
                !self
                    .faces
                    .iter()
                    .any(|&g| g != f && f.is_subset(g))
            })
            .collect()
    }

    /// The star `{τ ∈ K : σ ⊆ τ}`.
    pub fn star(&self, sigma: Face) -> Result<Vec<Face>, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotAFace(sigma));
        }
        Ok(self
            .faces
            .iter()
            .copied()
            .filter(|t| sigma.is_subset(*t))
            .collect())
    }

    /// The link `{τ ∈ K : τ ∩ σ = ∅, τ ∪ σ ∈ K}`, kept on the same vertex
    /// set (it is usually not vertex-complete).
    pub fn link(&self, sigma: Face) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotAFace(sigma));
        }
        let faces: BTreeSet<Face> = self
            .faces
            .iter()
            .copied()
            .filter(|&t| t.is_disjoint(sigma) && self.contains(t.union(sigma)))
            .collect();
        Ok(SimplicialComplex { n: self.n, faces })
    }

    /// Vertices of the link of `sigma`.
    pub fn link_vertices(&self, sigma: Face) -> Result<Vec<usize>, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotAFace(sigma));
        }
        Ok((1..=self.n)
            .filter(|&v| !sigma.contains(v) && self.contains(sigma.insert(v)))
            .collect())
    }

    /// Restriction `{τ ∈ K : τ ⊆ I}` re-indexed onto the vertices of `I`
    /// in increasing order. Returns the restricted complex together with
    /// the map from new labels to original ones.
    pub fn restrict(&self, i_set: Face) -> (SimplicialComplex, Vec<usize>) {
        let old: Vec<usize> = i_set.verts();
        let mut faces = BTreeSet::new();
        for &f in &self.faces {
            if f.is_subset(i_set) {
                let relabeled: Vec<usize> = f
                    .verts()
                    .iter()
                    .map(|v| old.iter().position(|o| o == v).unwrap() + 1)
                    .collect();
                faces.insert(Face::from_verts(&relabeled));
            }
        }
        (
            SimplicialComplex {
                n: old.len(),
                faces,
            },
            old,
        )
    }

    /// The cone `K ∪ {σ ∪ {n+1} : σ ∈ K}` on `[n+1]`.
    pub fn cone(&self) -> SimplicialComplex {
        let apex = self.n + 1;
        let mut faces = self.faces.clone();
        for &f in &self.faces {
            faces.insert(f.insert(apex));
        }
        SimplicialComplex {
            n: apex,
            faces,
        }
    }

    /// Minimal number of vertices that must be removed from `I` to land in
    /// the complex: `d(I) = min { |I \ I'| : I' ⊆ I, I' ∈ K }`.
    pub fn nonface_distance(&self, i_set: Face) -> usize {
        let best = self
            .faces
            .iter()
            .filter(|f| f.is_subset(i_set))
            .map(|f| f.card())
            .max()
            .unwrap_or(0);
        i_set.card() - best
    }

    /// Inclusion-minimal non-faces contained in `I`, i.e. non-faces all of
    /// whose proper subsets are faces. Empty iff `I ∈ K`.
    pub fn minimal_nonfaces_within(&self, i_set: Face) -> Vec<Face> {
        let mut out: Vec<Face> = i_set
            .subsets()
            .into_iter()
            .filter(|&r| {
                !self.contains(r)
                    && r.verts().iter().all(|&v| self.contains(r.remove(v)))
            })
            .collect();
        out.sort_by(|a, b| a.cmp_lex(*b));
        out
    }

    /// One smooth component of the skeleton per face and sign function on
    /// the link vertices of that face.
    pub fn components(&self) -> Vec<SignedComponent> {
        let mut out = Vec::new();
        for &sigma in &self.faces {
            let lv = self.link_vertices(sigma).unwrap();
            for mask in 0..(1u32 << lv.len()) {
                let signs = lv
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (v, if mask & (1 << i) != 0 { -1 } else { 1 }))
                    .collect();
                out.push(SignedComponent { sigma, signs });
            }
        }
        out
    }
}

/// A smooth component of the stratum indexed by `sigma`, labeled by a sign
/// on each vertex of the link of `sigma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedComponent {
    pub sigma: Face,
    /// `(vertex, ±1)` for exactly the link vertices, in increasing order.
    pub signs: Vec<(usize, i8)>,
}

impl SignedComponent {
    /// An interior sample point of the component: base coordinate `±1` on
    /// link vertices, `+1` on the remaining off-face vertices, `0` on the
    /// face; fiber coordinate `√(2ε)` on the face, `0` elsewhere.
    pub fn sample_point(&self, n: usize, epsilon: f64) -> (Vec<f64>, Vec<f64>) {
        let mut x = vec![0.0; n];
        let mut y = vec![0.0; n];
        for v in 1..=n {
            if self.sigma.contains(v) {
                y[v - 1] = (2.0 * epsilon).sqrt();
            } else if let Some(&(_, s)) = self.signs.iter().find(|(w, _)| *w == v) {
                x[v - 1] = s as f64;
            } else {
                x[v - 1] = 1.0;
            }
        }
        (x, y)
    }
}

/// The punctured-plane complex `{∅, {1}, {2}}` on two vertices.
pub fn punctured_plane() -> SimplicialComplex {
    SimplicialComplex::closure(2, &[Face::singleton(1), Face::singleton(2)]).unwrap()
}

/// The full simplex on `[n]`.
pub fn full_simplex(n: usize) -> SimplicialComplex {
    let full = Face(if n == 0 { 0 } else { (1u32 << n) - 1 });
    SimplicialComplex::closure(n, &[full]).unwrap()
}

/// All downward-closed families on `[n]` (containing the empty face),
/// optionally restricted to vertex-complete ones. Intended for small `n`.
pub fn enumerate_complexes(n: usize, vertex_complete: bool) -> Vec<SimplicialComplex> {
    assert!(n <= 4, "exhaustive enumeration is meant for n <= 4");
    let npow = 1usize << n;
    let mut out = Vec::new();
    // Families are subsets of P([n]); bit f of the family mask stands for
    // the face with bitmask f.
    for family in 0u64..(1u64 << npow) {
        if family & 1 == 0 {
            continue; // must contain the empty face
        }
        if vertex_complete && (1..=n).any(|v| family & (1 << (1u32 << (v - 1))) == 0) {
            continue;
        }
        let mut closed = true;
        'outer: for f in 0..npow {
            if family & (1 << f) == 0 {
                continue;
            }
            for v in 0..n {
                if f & (1 << v) != 0 && family & (1 << (f & !(1 << v))) == 0 {
                    closed = false;
                    break 'outer;
                }
            }
        }
        if !closed {
            continue;
        }
        let faces: Vec<Face> = (0..npow)
            .filter(|&f| family & (1 << f) != 0)
            .map(|f| Face(f as u32))
            .collect();
        out.push(SimplicialComplex {
            n,
            faces: faces.into_iter().collect(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn faces(k: &SimplicialComplex) -> Vec<Face> {
        k.faces().collect()
    }

    #[test]
    fn closure_examples() {
        let empty = SimplicialComplex::closure(0, &[]).unwrap();
        assert_eq!(faces(&empty), vec![Face::EMPTY]);

        let full2 = SimplicialComplex::closure(2, &[Face::from_verts(&[1, 2])]).unwrap();
        assert_eq!(full2.face_count(), 4);

        let pp = punctured_plane();
        assert_eq!(
            faces(&pp),
            vec![Face::EMPTY, Face::singleton(1), Face::singleton(2)]
        );
    }

    #[test]
    fn closure_idempotent_and_monotone() {
        for k in enumerate_complexes(3, false) {
            let all: Vec<Face> = k.faces().collect();
            let again = SimplicialComplex::closure(3, &all).unwrap();
            assert_eq!(again, k);
            // adding a face can only grow the closure
            let bigger =
                SimplicialComplex::closure(3, &[all.last().copied().unwrap(), Face(0b111)])
                    .unwrap();
            assert!(k.faces().filter(|f| f.is_subset(Face(0b111))).count() <= bigger.face_count());
        }
    }

    #[test]
    fn star_examples() {
        let full2 = full_simplex(2);
        assert_eq!(
            full2.star(Face::singleton(1)).unwrap(),
            vec![Face(0b01), Face(0b11)]
        );
        let pp = punctured_plane();
        assert_eq!(pp.star(Face::singleton(1)).unwrap(), vec![Face(0b01)]);
        assert_eq!(pp.star(Face::EMPTY).unwrap().len(), pp.face_count());
        assert_eq!(
            pp.star(Face::from_verts(&[1, 2])),
            Err(ComplexError::NotAFace(Face(0b11)))
        );
    }

    #[test]
    fn link_examples() {
        let pp = punctured_plane();
        let l = pp.link(Face::EMPTY).unwrap();
        assert_eq!(l, pp);
        let l1 = pp.link(Face::singleton(1)).unwrap();
        assert_eq!(faces(&l1), vec![Face::EMPTY]);

        let full2 = full_simplex(2);
        let l1 = full2.link(Face::singleton(1)).unwrap();
        assert_eq!(faces(&l1), vec![Face::EMPTY, Face::singleton(2)]);
    }

    #[test]
    fn link_formula_cross_check() {
        // τ ∈ lk(σ) ⇔ τ ∩ σ = ∅ ∧ τ ∪ σ ∈ K, against the star/closure route:
        // clos(star(σ)) restricted to faces disjoint from σ.
        for n in 0..=4 {
            for k in enumerate_complexes(n, false) {
                for sigma in k.faces().collect::<Vec<_>>() {
                    let link = k.link(sigma).unwrap();
                    let star = k.star(sigma).unwrap();
                    let mut clos_star: BTreeSet<Face> = BTreeSet::new();
                    for t in star {
                        for s in t.subsets() {
                            clos_star.insert(s);
                        }
                    }
                    for tau in k.faces() {
                        let in_link = link.contains(tau);
                        let by_star = tau.is_disjoint(sigma)
                            && clos_star.contains(&tau.union(sigma));
                        assert_eq!(in_link, by_star, "K={:?} σ={sigma} τ={tau}", faces(&k));
                    }
                }
            }
        }
    }

    #[test]
    fn restrict_examples() {
        let full3 = full_simplex(3);
        let (r, map) = full3.restrict(Face::from_verts(&[1, 2]));
        assert_eq!(r, full_simplex(2));
        assert_eq!(map, vec![1, 2]);

        let pp = punctured_plane();
        let (r, _) = pp.restrict(Face::singleton(1));
        assert_eq!(r.face_count(), 2);

        let (r, _) = pp.restrict(Face::EMPTY);
        assert_eq!(faces(&r), vec![Face::EMPTY]);
    }

    #[test]
    fn cone_examples() {
        let empty = SimplicialComplex::closure(0, &[]).unwrap();
        assert_eq!(faces(&empty.cone()), vec![Face::EMPTY, Face::singleton(1)]);

        let pt = SimplicialComplex::closure(1, &[Face::singleton(1)]).unwrap();
        assert_eq!(pt.cone(), full_simplex(2));

        let pp_cone = punctured_plane().cone();
        let expect = SimplicialComplex::closure(
            3,
            &[Face::from_verts(&[1, 3]), Face::from_verts(&[2, 3])],
        )
        .unwrap();
        assert_eq!(pp_cone, expect);
    }

    #[test]
    fn cone_restriction_recovers_base() {
        for k in enumerate_complexes(3, false) {
            let c = k.cone();
            let (base, _) = c.restrict(Face::from_verts(&[1, 2, 3]));
            assert_eq!(base, k);
            for f in c.maximal_faces() {
                assert!(f.contains(4) || k.maximal_faces().contains(&f));
            }
        }
    }

    #[test]
    fn component_counts() {
        let pt = SimplicialComplex::closure(1, &[Face::singleton(1)]).unwrap();
        assert_eq!(pt.components().len(), 3);
        assert_eq!(punctured_plane().components().len(), 6);
        assert_eq!(full_simplex(2).components().len(), 9);
    }

    #[test]
    fn component_count_law() {
        for n in 0..=3 {
            for k in enumerate_complexes(n, false) {
                let expect: usize = k
                    .faces()
                    .map(|s| 1usize << k.link_vertices(s).unwrap().len())
                    .sum();
                assert_eq!(k.components().len(), expect);
            }
        }
    }

    #[test]
    fn nonface_distance_examples() {
        let pp = punctured_plane();
        for f in pp.faces() {
            assert_eq!(pp.nonface_distance(f), 0);
        }
        assert_eq!(pp.nonface_distance(Face::from_verts(&[1, 2])), 1);
        let empty2 = SimplicialComplex::closure(2, &[]).unwrap();
        assert_eq!(empty2.nonface_distance(Face::from_verts(&[1, 2])), 2);
    }

    #[test]
    fn minimal_nonfaces() {
        let pp = punctured_plane();
        assert_eq!(
            pp.minimal_nonfaces_within(Face(0b11)),
            vec![Face(0b11)]
        );
        // no-edges complex on [3]: the minimal non-faces inside {1,2,3} are
        // the pairs, in lexicographic order
        let k = SimplicialComplex::closure(
            3,
            &[Face::singleton(1), Face::singleton(2), Face::singleton(3)],
        )
        .unwrap();
        assert_eq!(
            k.minimal_nonfaces_within(Face(0b111)),
            vec![Face(0b011), Face(0b101), Face(0b110)]
        );
        assert!(k.minimal_nonfaces_within(Face(0b001)).is_empty());
    }

    #[test]
    fn lex_order() {
        assert!(Face::from_verts(&[1, 3]).cmp_lex(Face::from_verts(&[2])).is_lt());
        assert!(Face::from_verts(&[1]).cmp_lex(Face::from_verts(&[1, 2])).is_lt());
    }

    #[test]
    fn enumeration_counts() {
        // downward-closed families containing ∅ on [3]
        assert_eq!(enumerate_complexes(3, false).len(), 19);
        // vertex-complete ones are determined by the pairs plus the triple
        assert_eq!(enumerate_complexes(3, true).len(), 9);
        assert_eq!(enumerate_complexes(2, true).len(), 2);
        assert_eq!(enumerate_complexes(1, true).len(), 1);
    }

    #[test]
    fn vertex_validation() {
        let k = SimplicialComplex::closure(2, &[Face::singleton(1)]).unwrap();
        assert_eq!(k.require_all_vertices(), Err(ComplexError::MissingVertex(2)));
        assert!(punctured_plane().require_all_vertices().is_ok());
    }
}
