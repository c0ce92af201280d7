//! The toric side: per-weight alternating Čech cohomology of the structure
//! sheaf on the quasi-affine variety attached to a simplicial complex,
//! equivariant Ext between the line bundles it generates, and the graded
//! linear category these assemble into (with cup-product composition).
//!
//! The variety is covered by one chart per maximal face `σ`, the chart
//! where the coordinates off `σ` are invertible. A character `m ∈ Zⁿ`
//! has a section on the chart of `σ` iff `m_i ≥ 0` for every `i ∈ σ`;
//! the chart of a tuple of pieces is the chart of the intersection face.
//! Each chart-tuple section space at a fixed weight is at most
//! one-dimensional, so cochains are recorded by one scalar per tuple.

use std::collections::BTreeMap;

use crate::linalg::{homology_dims, Field, Rat, SparseMatrix};
use crate::lincat::{FunctorData, LinearCategory, Morphism};
use crate::simplicial::{Face, SimplicialComplex};

/// A character of the `n`-torus.
pub type Weight = Vec<i64>;

pub fn weight_of_face(f: Face, n: usize) -> Weight {
    (1..=n).map(|v| if f.contains(v) { 1 } else { 0 }).collect()
}

pub fn weight_sub(a: &Weight, b: &Weight) -> Weight {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn weight_add(a: &Weight, b: &Weight) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// The chart cover by maximal faces, in lexicographic piece order.
#[derive(Clone, Debug)]
pub struct ToricCover {
    pub n: usize,
    pub pieces: Vec<Face>,
}

impl ToricCover {
    pub fn new(complex: &SimplicialComplex) -> ToricCover {
        let mut pieces = complex.maximal_faces();
        pieces.sort_by(|a, b| a.cmp_lex(*b));
        ToricCover { n: complex.n(), pieces }
    }

    fn tuple_face(&self, tuple: &[usize]) -> Face {
        let all = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        tuple
            .iter()
            .fold(Face(all), |acc, &i| acc.inter(self.pieces[i]))
    }
}

/// Does the chart of `sigma` admit the monomial of weight `m`?
pub fn chart_has_weight(sigma: Face, m: &Weight) -> bool {
    sigma.verts().iter().all(|&v| m[v - 1] >= 0)
}

fn combinations(k: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > k {
        return out;
    }
    let mut cur: Vec<usize> = (0..size).collect();
    loop {
        out.push(cur.clone());
        // advance the rightmost position that can still move
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < k - (size - i) {
                cur[i] += 1;
                for j in i + 1..size {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// The alternating Čech complex of the cover at one weight. Level `p`
/// holds the strictly increasing `(p+1)`-tuples of pieces whose
/// intersection chart admits the weight.
#[derive(Clone, Debug)]
pub struct CechComplex {
    pub weight: Weight,
    /// `tuples[p]`: admissible tuples at level `p`, lexicographically.
    pub tuples: Vec<Vec<Vec<usize>>>,
    /// `diffs[p] : C^p → C^{p+1}` with alternating face signs.
    pub diffs: Vec<SparseMatrix<Rat>>,
}

impl CechComplex {
    pub fn build(cover: &ToricCover, m: &Weight) -> CechComplex {
        assert_eq!(m.len(), cover.n, "weight length must match vertex count");
        let k = cover.pieces.len();
        let mut tuples: Vec<Vec<Vec<usize>>> = Vec::new();
        for p in 0..k {
            let level: Vec<Vec<usize>> = combinations(k, p + 1)
                .into_iter()
                .filter(|t| chart_has_weight(cover.tuple_face(t), m))
                .collect();
            tuples.push(level);
        }
        let mut diffs = Vec::new();
        for p in 0..k.saturating_sub(1) {
            let rows = tuples[p + 1].len();
            let cols = tuples[p].len();
            let mut mat = SparseMatrix::zero(rows, cols);
            for (row, t) in tuples[p + 1].iter().enumerate() {
                for (j, _) in t.iter().enumerate() {
                    let mut sub = t.clone();
                    sub.remove(j);
                    if let Ok(col) = tuples[p].binary_search(&sub) {
                        let sign = if j % 2 == 0 { Rat::one() } else { Rat::one().neg() };
                        mat.add_to(row, col, &sign);
                    }
                }
            }
            diffs.push(mat);
        }
        CechComplex { weight: m.clone(), tuples, diffs }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.tuples.iter().map(|l| l.len()).collect()
    }

    /// Cohomology dimensions per degree; zero entries omitted.
    pub fn cohomology(&self) -> BTreeMap<i64, usize> {
        let dims = self.dims();
        let h = homology_dims(&dims, &self.diffs).expect("Čech differential squares to zero");
        h.into_iter()
            .enumerate()
            .filter(|&(_, d)| d > 0)
            .map(|(p, d)| (p as i64, d))
            .collect()
    }

    /// Chosen cocycle representatives per degree. The degree-0 basis, when
    /// nonempty, is normalized to the all-ones section so that identities
    /// and functor images are literal monomials.
    pub fn representatives(&self) -> BTreeMap<i64, Vec<Vec<Rat>>> {
        let dims = self.dims();
        let mut reps = BTreeMap::new();
        for p in 0..dims.len() {
            let dim_h = {
                let ker = if p < self.diffs.len() {
                    dims[p] - self.diffs[p].rank()
                } else {
                    dims[p]
                };
                let im = if p > 0 { self.diffs[p - 1].rank() } else { 0 };
                ker - im
            };
            if dim_h == 0 {
                continue;
            }
            if p == 0 {
                debug_assert_eq!(dim_h, 1, "degree-0 Čech cohomology is at most a line");
                let ones = vec![Rat::one(); dims[0]];
                debug_assert!(self.is_cocycle(0, &ones));
                reps.insert(0i64, vec![ones]);
                continue;
            }
            // kernel vectors independent modulo the image
            let ker = if p < self.diffs.len() {
                self.diffs[p].kernel_basis()
            } else {
                (0..dims[p])
                    .map(|i| {
                        let mut v = vec![Rat::zero(); dims[p]];
                        v[i] = Rat::one();
                        v
                    })
                    .collect()
            };
            let prev = &self.diffs[p - 1];
            let mut span = SparseMatrix::zero(dims[p], prev.cols + dim_h);
            for (&(r, c), v) in prev.entries() {
                span.set(r, c, v.clone());
            }
            let mut chosen = Vec::new();
            let mut rank = prev.rank();
            for v in ker {
                if chosen.len() == dim_h {
                    break;
                }
                let col = prev.cols + chosen.len();
                for (r, x) in v.iter().enumerate() {
                    span.set(r, col, x.clone());
                }
                let new_rank = span.rank();
                if new_rank > rank {
                    rank = new_rank;
                    chosen.push(v);
                } else {
                    for r in 0..dims[p] {
                        span.set(r, col, Rat::zero());
                    }
                }
            }
            assert_eq!(chosen.len(), dim_h, "failed to select cohomology basis");
            reps.insert(p as i64, chosen);
        }
        reps
    }

    fn is_cocycle(&self, p: usize, v: &[Rat]) -> bool {
        if p >= self.diffs.len() {
            return true;
        }
        let d = &self.diffs[p];
        (0..d.rows).all(|r| {
            let mut acc = Rat::zero();
            for c in 0..d.cols {
                acc = acc.add(&d.get(r, c).mul(&v[c]));
            }
            acc.is_zero()
        })
    }

    /// Coefficients of a cocycle in the chosen basis, modulo coboundaries.
    pub fn express(&self, p: usize, v: &[Rat], reps: &BTreeMap<i64, Vec<Vec<Rat>>>) -> Vec<Rat> {
        let dims = self.dims();
        let basis = reps.get(&(p as i64)).map_or(&[][..], |b| b.as_slice());
        if basis.is_empty() {
            debug_assert!(self.in_coboundaries(p, v), "nonzero class in trivial cohomology");
            return Vec::new();
        }
        let prev_cols = if p > 0 { dims[p - 1] } else { 0 };
        let mut m = SparseMatrix::zero(dims[p], basis.len() + prev_cols);
        for (col, b) in basis.iter().enumerate() {
            for (r, x) in b.iter().enumerate() {
                m.set(r, col, x.clone());
            }
        }
        if p > 0 {
            for (&(r, c), x) in self.diffs[p - 1].entries() {
                m.set(r, basis.len() + c, x.clone());
            }
        }
        let sol = m.solve(v).expect("cocycle expressible in basis + coboundaries");
        sol[..basis.len()].to_vec()
    }

    fn in_coboundaries(&self, p: usize, v: &[Rat]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        if p == 0 {
            return false;
        }
        self.diffs[p - 1].solve(v).is_some()
    }

    /// Cochain-level cup product: front face times back face, valid
    /// because the front and back of an increasing tuple are increasing.
    /// `f` lives at level `p` of `self`, `g` at level `q` of `other`; the
    /// result lives at level `p + q` of `out` (weights must add up).
    pub fn cup(
        &self,
        p: usize,
        f: &[Rat],
        other: &CechComplex,
        q: usize,
        g: &[Rat],
        out: &CechComplex,
    ) -> Vec<Rat> {
        let target_level = &out.tuples[p + q];
        let mut result = vec![Rat::zero(); target_level.len()];
        for (idx, t) in target_level.iter().enumerate() {
            let front = &t[..=p];
            let back = &t[p..];
            let fi = self.tuples[p].binary_search(&front.to_vec()).ok();
            let gi = other.tuples[q].binary_search(&back.to_vec()).ok();
            if let (Some(fi), Some(gi)) = (fi, gi) {
                result[idx] = f[fi].mul(&g[gi]);
            }
        }
        result
    }
}

/// `H^•` of the structure sheaf at one weight.
pub fn cohomology_weight(cover: &ToricCover, m: &Weight) -> BTreeMap<i64, usize> {
    CechComplex::build(cover, m).cohomology()
}

/// Equivariant Ext between the line bundles of characters `a` and `b`:
/// the weight-`(b − a)` piece of the cohomology of the structure sheaf.
pub fn eq_ext(cover: &ToricCover, a: &Weight, b: &Weight) -> BTreeMap<i64, usize> {
    cohomology_weight(cover, &weight_sub(b, a))
}

/// True iff the coordinate subspace of `I` misses every chart, i.e. no
/// face of the complex contains `I`. This is the geometric-support
/// counterpart of the Koszul acyclicity test.
pub fn koszul_support_check(complex: &SimplicialComplex, i_set: Face) -> bool {
    let cover = ToricCover::new(complex);
    cover.pieces.iter().all(|&sigma| !i_set.is_subset(sigma))
}

/// The toric category together with the canonical functor from the
/// monomial category and the per-weight Čech data backing the hom bases.
pub struct BModel {
    pub category: LinearCategory,
    pub functor: FunctorData,
    pub cover: ToricCover,
}

/// Builds the category of line bundles `O(e_I)`, `I ⊆ [n]`, with graded
/// Homs given by per-weight Čech cohomology and composition by the
/// cochain cup product. Object indices coincide with subset bitmasks, so
/// the canonical functor is the identity on indices.
pub fn build_b_category(complex: &SimplicialComplex) -> BModel {
    let n = complex.n();
    let cover = ToricCover::new(complex);
    let count = 1usize << n;
    let objects = (0..count)
        .map(|b| {
            let w = weight_of_face(Face(b as u32), n);
            let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            format!("O({})", parts.join(","))
        })
        .collect();
    let mut cat = LinearCategory::new(objects);

    // per-weight Čech complexes and cohomology bases
    let mut weight_data: BTreeMap<Weight, (CechComplex, BTreeMap<i64, Vec<Vec<Rat>>>)> =
        BTreeMap::new();
    let mut need: Vec<Weight> = Vec::new();
    for a in 0..count {
        for b in 0..count {
            let w = weight_sub(
                &weight_of_face(Face(b as u32), n),
                &weight_of_face(Face(a as u32), n),
            );
            if !weight_data.contains_key(&w) && !need.contains(&w) {
                need.push(w.clone());
            }
            // sums of two hom weights arise in compositions
            for c in 0..count {
                let w2 = weight_sub(
                    &weight_of_face(Face(c as u32), n),
                    &weight_of_face(Face(b as u32), n),
                );
                let sum = weight_add(&w, &w2);
                if !need.contains(&sum) {
                    need.push(sum);
                }
            }
        }
    }
    for w in need {
        let cech = CechComplex::build(&cover, &w);
        let reps = cech.representatives();
        weight_data.insert(w, (cech, reps));
    }

    for a in 0..count {
        for b in 0..count {
            let w = weight_sub(
                &weight_of_face(Face(b as u32), n),
                &weight_of_face(Face(a as u32), n),
            );
            let (_, reps) = &weight_data[&w];
            for (&deg, basis) in reps {
                let labels = (0..basis.len())
                    .map(|i| format!("h{deg}d{i}w{w:?}"))
                    .collect();
                cat.add_hom_basis(a, b, deg, labels);
            }
        }
    }
    for obj in 0..count {
        cat.declare_identity(obj, 0);
    }

    // composition by cup product, expressed back in the chosen bases
    for a in 0..count {
        for b in 0..count {
            let wab = weight_sub(
                &weight_of_face(Face(b as u32), n),
                &weight_of_face(Face(a as u32), n),
            );
            let (cech_ab, reps_ab) = &weight_data[&wab];
            for c in 0..count {
                let wbc = weight_sub(
                    &weight_of_face(Face(c as u32), n),
                    &weight_of_face(Face(b as u32), n),
                );
                let (cech_bc, reps_bc) = &weight_data[&wbc];
                let wac = weight_add(&wab, &wbc);
                let (cech_ac, reps_ac) = &weight_data[&wac];
                for (&dab, basis_ab) in reps_ab {
                    for (&dbc, basis_bc) in reps_bc {
                        let dac = dab + dbc;
                        for (i, f_rep) in basis_ab.iter().enumerate() {
                            for (j, g_rep) in basis_bc.iter().enumerate() {
                                let cup = cech_ab.cup(
                                    dab as usize,
                                    f_rep,
                                    cech_bc,
                                    dbc as usize,
                                    g_rep,
                                    cech_ac,
                                );
                                let coeffs = cech_ac.express(dac as usize, &cup, reps_ac);
                                let result: Vec<(usize, Rat)> = coeffs
                                    .into_iter()
                                    .enumerate()
                                    .filter(|(_, x)| !x.is_zero())
                                    .collect();
                                if cat.hom_dim(a, c, dac) > 0 {
                                    cat.set_comp((b, c, dbc, j), (a, b, dab, i), result);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // canonical functor: C_I ↦ O(e_I), e_{J\I} ↦ the monomial class
    let object_map: Vec<usize> = (0..count).collect();
    let mut morphism_map = BTreeMap::new();
    for src in 0..count {
        for dst in 0..count {
            if !Face(src as u32).is_subset(Face(dst as u32)) {
                continue;
            }
            let dim = cat.hom_dim(src, dst, 0);
            assert_eq!(dim, 1, "nonnegative weights always have a one-dimensional H^0");
            let mut m = Morphism::zero(src, dst, 0, dim);
            m.coeffs[0] = Rat::one();
            morphism_map.insert((src, dst, 0i64, 0usize), m);
        }
    }
    let functor = FunctorData { object_map, morphism_map };
    BModel { category: cat, functor, cover }
}

impl BModel {
    /// Graded dimensions between two generators, straight off the bases.
    pub fn ext_dims(&self, a: Face, b: Face) -> BTreeMap<i64, usize> {
        self.category.hom_dims(a.0 as usize, b.0 as usize)
    }

    /// The full graded table over all ordered generator pairs. Hom
    /// complexes between single generators carry no differential, so this
    /// is the twisted-level table as well.
    pub fn ext_table(&self) -> crate::table::ExtTable {
        let count = 1usize << self.cover.n;
        let mut table = crate::table::ExtTable::default();
        for a in 0..count {
            for b in 0..count {
                table.insert(
                    Face(a as u32),
                    Face(b as u32),
                    self.category.hom_dims(a, b),
                );
            }
        }
        table
    }

}

/// The toric category at the cochain level: hom spaces are whole Čech
/// complexes per weight (with their differential), composition is the
/// front-face/back-face cup product. This is the honest dg enhancement;
/// its twisted complexes see the acyclicity that the cohomology-level
/// category misses (classes like the degree-one generator compose to
/// zero there, but their cochain representatives do not).
pub struct BModelDg {
    pub category: LinearCategory,
    pub functor: FunctorData,
    pub cover: ToricCover,
}

struct CechEngine {
    n: usize,
    /// Weight per object index.
    obj_weights: Vec<Weight>,
    /// Tuple tables per pairwise weight.
    tables: BTreeMap<Weight, Vec<Vec<Vec<usize>>>>,
}

impl CechEngine {
    fn weight_of_pair(&self, src: usize, dst: usize) -> Weight {
        weight_sub(&self.obj_weights[dst], &self.obj_weights[src])
    }

    fn tuples(&self, w: &Weight) -> &Vec<Vec<Vec<usize>>> {
        &self.tables[w]
    }
}

impl crate::lincat::HomEngine for CechEngine {
    fn compose(&self, g: crate::lincat::MorKey, f: crate::lincat::MorKey) -> Vec<(usize, Rat)> {
        let (a, b1, p, i) = f;
        let (b2, c, q, j) = g;
        debug_assert_eq!(b1, b2);
        let w_ab = self.weight_of_pair(a, b1);
        let w_bc = self.weight_of_pair(b1, c);
        let front = &self.tuples(&w_ab)[p as usize][i];
        let back = &self.tuples(&w_bc)[q as usize][j];
        if front.last() != back.first() {
            return Vec::new();
        }
        let mut t = front.clone();
        t.extend_from_slice(&back[1..]);
        let w_ac = self.weight_of_pair(a, c);
        let level = &self.tuples(&w_ac)[(p + q) as usize];
        let idx = level
            .binary_search(&t)
            .expect("cup of admissible cochains is admissible");
        vec![(idx, Rat::one())]
    }

    fn differential(&self, key: crate::lincat::MorKey) -> Vec<(usize, Rat)> {
        let (a, b, p, i) = key;
        let w = self.weight_of_pair(a, b);
        let tables = self.tuples(&w);
        if (p + 1) as usize >= tables.len() {
            return Vec::new();
        }
        let t = &tables[p as usize][i];
        let next = &tables[(p + 1) as usize];
        let mut out = Vec::new();
        let piece_count = {
            // pieces indices run over 0..k; recover k from level 0 table
            // of the zero weight, which always lists every piece
            let zero = vec![0i64; self.n];
            self.tables[&zero][0].len()
        };
        for r in 0..piece_count {
            if t.contains(&r) {
                continue;
            }
            let pos = t.iter().filter(|&&x| x < r).count();
            let mut bigger = t.clone();
            bigger.insert(pos, r);
            let idx = next
                .binary_search(&bigger)
                .expect("refining a tuple keeps the weight admissible");
            let sign = if pos % 2 == 0 { Rat::one() } else { Rat::one().neg() };
            out.push((idx, sign));
        }
        out.sort_by_key(|(i, _)| *i);
        out
    }
}

/// Builds the cochain-level toric category with the canonical functor.
pub fn build_b_dg_category(complex: &SimplicialComplex) -> BModelDg {
    let n = complex.n();
    let cover = ToricCover::new(complex);
    let count = 1usize << n;
    let objects = (0..count)
        .map(|b| {
            let w = weight_of_face(Face(b as u32), n);
            let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            format!("O({})", parts.join(","))
        })
        .collect();
    let mut cat = LinearCategory::new(objects);

    let obj_weights: Vec<Weight> =
        (0..count).map(|b| weight_of_face(Face(b as u32), n)).collect();
    let mut tables: BTreeMap<Weight, Vec<Vec<Vec<usize>>>> = BTreeMap::new();
    for a in 0..count {
        for b in 0..count {
            let w = weight_sub(&obj_weights[b], &obj_weights[a]);
            tables
                .entry(w.clone())
                .or_insert_with(|| CechComplex::build(&cover, &w).tuples);
        }
    }
    for a in 0..count {
        for b in 0..count {
            let w = weight_sub(&obj_weights[b], &obj_weights[a]);
            for (p, level) in tables[&w].iter().enumerate() {
                let labels: Vec<String> =
                    level.iter().map(|t| format!("c{p}@{t:?}w{w:?}")).collect();
                cat.add_hom_basis(a, b, p as i64, labels);
            }
        }
    }
    let zero_w = vec![0i64; n];
    let all_charts = tables[&zero_w][0].len();
    for obj in 0..count {
        cat.declare_identity_combo(obj, (0..all_charts).map(|i| (i, Rat::one())).collect());
    }
    cat.set_engine(std::sync::Arc::new(CechEngine { n, obj_weights: obj_weights.clone(), tables }));

    let object_map: Vec<usize> = (0..count).collect();
    let mut morphism_map = BTreeMap::new();
    for src in 0..count {
        for dst in 0..count {
            if !Face(src as u32).is_subset(Face(dst as u32)) {
                continue;
            }
            let dim = cat.hom_dim(src, dst, 0);
            let mut m = Morphism::zero(src, dst, 0, dim);
            for c in m.coeffs.iter_mut() {
                *c = Rat::one();
            }
            morphism_map.insert((src, dst, 0i64, 0usize), m);
        }
    }
    let functor = FunctorData { object_map, morphism_map };
    BModelDg { category: cat, functor, cover }
}
