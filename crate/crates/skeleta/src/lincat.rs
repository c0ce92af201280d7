//! Finite graded linear categories with distinguished ordered hom bases
//! and explicit composition tables, plus functor data between them.
//!
//! The monomial category on subsets of `[n]` is built here: one object
//! `C_I` per subset, a single degree-0 morphism `e_{J\I}` for each
//! inclusion `I ⊆ J`, and composition given by disjoint union of labels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::{Field, Rat};
use crate::simplicial::Face;

/// Reference to a basis morphism: `(src, dst, degree, index in basis)`.
pub type MorKey = (usize, usize, i64, usize);

/// A morphism as a linear combination over the basis of one hom space.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    pub src: usize,
    pub dst: usize,
    pub deg: i64,
    pub coeffs: Vec<Rat>,
}

impl Morphism {
    pub fn zero(src: usize, dst: usize, deg: i64, dim: usize) -> Morphism {
        Morphism { src, dst, deg, coeffs: vec![Rat::zero(); dim] }
    }

    pub fn basis(cat: &LinearCategory, key: MorKey) -> Morphism {
        let dim = cat.hom_dim(key.0, key.1, key.2);
        let mut m = Morphism::zero(key.0, key.1, key.2, dim);
        m.coeffs[key.3] = Rat::one();
        m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: &Rat) -> Morphism {
        Morphism {
            src: self.src,
            dst: self.dst,
            deg: self.deg,
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        assert_eq!((self.src, self.dst, self.deg), (other.src, other.dst, other.deg));
        Morphism {
            src: self.src,
            dst: self.dst,
            deg: self.deg,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }
}

/// Structural composition/differential backend for categories whose hom
/// spaces are too regular (or too large) for an explicit table.
pub trait HomEngine: Send + Sync {
    /// Composite `g ∘ f` of basis morphisms, as a combination in
    /// `hom(f.src, g.dst, f.deg + g.deg)`.
    fn compose(&self, g: MorKey, f: MorKey) -> Vec<(usize, Rat)>;
    /// Differential of a basis morphism, as a combination in
    /// `hom(src, dst, deg + 1)`; empty when the category is not dg.
    fn differential(&self, _key: MorKey) -> Vec<(usize, Rat)> {
        Vec::new()
    }
}

/// A finite graded linear category with chosen bases, optionally carrying
/// a hom-space differential (a dg category with strictly associative
/// composition).
///
/// Hom spaces are stored per `(src, dst, degree)` with ordered, labeled
/// bases so every downstream matrix is reproducible run to run. The
/// composition law comes either from an explicit table (total on pairs of
/// basis morphisms whose composite lands in a nonzero hom space) or from
/// a [`HomEngine`].
#[derive(Clone, Default)]
pub struct LinearCategory {
    pub objects: Vec<String>,
    homs: BTreeMap<(usize, usize, i64), Vec<String>>,
    comp: BTreeMap<(MorKey, MorKey), Vec<(usize, Rat)>>,
    diff: BTreeMap<MorKey, Vec<(usize, Rat)>>,
    identities: Vec<Option<Vec<(usize, Rat)>>>,
    engine: Option<std::sync::Arc<dyn HomEngine>>,
}

impl std::fmt::Debug for LinearCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearCategory")
            .field("objects", &self.objects)
            .field("homs", &self.homs.len())
            .field("comp", &self.comp.len())
            .field("diff", &self.diff.len())
            .field("engine", &self.engine.is_some())
            .finish()
    }
}

impl LinearCategory {
    pub fn new(objects: Vec<String>) -> LinearCategory {
        let identities = vec![None; objects.len()];
        LinearCategory {
            objects,
            homs: BTreeMap::new(),
            comp: BTreeMap::new(),
            diff: BTreeMap::new(),
            identities,
            engine: None,
        }
    }

    pub fn set_engine(&mut self, engine: std::sync::Arc<dyn HomEngine>) {
        self.engine = Some(engine);
    }

    /// Declares `d(basis) = combination` in degree `deg + 1`.
    pub fn set_diff(&mut self, key: MorKey, value: Vec<(usize, Rat)>) {
        if !value.is_empty() {
            self.diff.insert(key, value);
        }
    }

    /// Differential of a basis morphism (empty for plain graded
    /// categories).
    pub fn diff_basis(&self, key: MorKey) -> Vec<(usize, Rat)> {
        if let Some(v) = self.diff.get(&key) {
            return v.clone();
        }
        if let Some(engine) = &self.engine {
            return engine.differential(key);
        }
        Vec::new()
    }

    /// Whether any hom space carries a differential.
    pub fn is_dg(&self) -> bool {
        !self.diff.is_empty() || self.engine.is_some()
    }

    /// Differential applied to a morphism, landing one degree up.
    pub fn apply_diff(&self, m: &Morphism) -> Morphism {
        let dim = self.hom_dim(m.src, m.dst, m.deg + 1);
        let mut out = Morphism::zero(m.src, m.dst, m.deg + 1, dim);
        if dim == 0 {
            return out;
        }
        for (i, c) in m.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, x) in self.diff_basis((m.src, m.dst, m.deg, i)) {
                out.coeffs[j] = out.coeffs[j].add(&x.mul(c));
            }
        }
        out
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn add_hom_basis(&mut self, src: usize, dst: usize, deg: i64, labels: Vec<String>) {
        if labels.is_empty() {
            return;
        }
        self.homs.insert((src, dst, deg), labels);
    }

    pub fn declare_identity(&mut self, obj: usize, idx: usize) {
        assert!(idx < self.hom_dim(obj, obj, 0), "identity index out of basis range");
        self.identities[obj] = Some(vec![(idx, Rat::one())]);
    }

    /// Identities need not be basis elements (the identity of a cochain
    /// category is the all-ones section).
    pub fn declare_identity_combo(&mut self, obj: usize, combo: Vec<(usize, Rat)>) {
        self.identities[obj] = Some(combo);
    }

    pub fn has_identity(&self, obj: usize) -> bool {
        self.identities[obj].is_some()
    }

    pub fn identity(&self, obj: usize) -> Morphism {
        let combo = self.identities[obj].as_ref().expect("object has no declared identity");
        let mut m = Morphism::zero(obj, obj, 0, self.hom_dim(obj, obj, 0));
        for (idx, c) in combo {
            m.coeffs[*idx] = c.clone();
        }
        m
    }

    pub fn hom_dim(&self, src: usize, dst: usize, deg: i64) -> usize {
        self.homs.get(&(src, dst, deg)).map_or(0, |b| b.len())
    }

    pub fn hom_basis(&self, src: usize, dst: usize, deg: i64) -> &[String] {
        self.homs.get(&(src, dst, deg)).map_or(&[], |b| b.as_slice())
    }

    /// Degrees with a nonzero hom space from `src` to `dst`.
    pub fn hom_degrees(&self, src: usize, dst: usize) -> Vec<i64> {
        self.homs
            .range((src, dst, i64::MIN)..=(src, dst, i64::MAX))
            .map(|(&(_, _, d), _)| d)
            .collect()
    }

    /// Graded dimensions of `Hom(src, dst)`.
    pub fn hom_dims(&self, src: usize, dst: usize) -> BTreeMap<i64, usize> {
        self.hom_degrees(src, dst)
            .into_iter()
            .map(|d| (d, self.hom_dim(src, dst, d)))
            .collect()
    }

    pub fn set_comp(&mut self, g: MorKey, f: MorKey, result: Vec<(usize, Rat)>) {
        assert_eq!(f.1, g.0, "morphisms not composable");
        self.comp.insert((g, f), result);
    }

    /// Composite `g ∘ f` of basis morphisms as a combination in
    /// `hom(f.src, g.dst, f.deg + g.deg)`. Compositions into a zero hom
    /// space are zero; otherwise the table (or engine) must answer.
    pub fn compose_basis(&self, g: MorKey, f: MorKey) -> Vec<(usize, Rat)> {
        assert_eq!(f.1, g.0, "morphisms not composable");
        if self.hom_dim(f.0, g.1, f.2 + g.2) == 0 {
            return Vec::new();
        }
        if let Some(v) = self.comp.get(&(g, f)) {
            return v.clone();
        }
        if let Some(engine) = &self.engine {
            return engine.compose(g, f);
        }
        panic!("missing composition entry for {g:?} ∘ {f:?}")
    }

    /// Bilinear composite `g ∘ f`.
    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Morphism {
        assert_eq!(f.dst, g.src, "morphisms not composable");
        let deg = f.deg + g.deg;
        let dim = self.hom_dim(f.src, g.dst, deg);
        let mut out = Morphism::zero(f.src, g.dst, deg, dim);
        if dim == 0 {
            return out;
        }
        for (i, a) in f.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in g.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let factor = a.mul(b);
                for (k, c) in self.compose_basis((g.src, g.dst, g.deg, j), (f.src, f.dst, f.deg, i))
                {
                    out.coeffs[k] = out.coeffs[k].add(&c.mul(&factor));
                }
            }
        }
        out
    }

    /// All basis morphism keys, in deterministic order.
    pub fn basis_keys(&self) -> Vec<MorKey> {
        let mut out = Vec::new();
        for (&(s, d, deg), basis) in &self.homs {
            for i in 0..basis.len() {
                out.push((s, d, deg, i));
            }
        }
        out
    }

    pub fn dump(&self) -> CategoryDump {
        CategoryDump {
            objects: self.objects.clone(),
            homs: self
                .homs
                .iter()
                .map(|(&(s, d, deg), b)| HomDump { src: s, dst: d, deg, basis: b.clone() })
                .collect(),
            identities: self
                .identities
                .iter()
                .map(|id| {
                    id.as_ref()
                        .map(|combo| combo.iter().map(|(i, c)| (*i, c.to_string())).collect())
                })
                .collect(),
            compositions: self
                .comp
                .iter()
                .map(|(&(g, f), res)| CompDump {
                    g,
                    f,
                    result: res.iter().map(|(i, c)| (*i, c.to_string())).collect(),
                })
                .collect(),
        }
    }

    pub fn from_dump(dump: &CategoryDump) -> LinearCategory {
        let mut cat = LinearCategory::new(dump.objects.clone());
        for h in &dump.homs {
            cat.add_hom_basis(h.src, h.dst, h.deg, h.basis.clone());
        }
        for (obj, id) in dump.identities.iter().enumerate() {
            if let Some(combo) = id {
                let combo = combo
                    .iter()
                    .map(|(i, c)| (*i, Rat(c.parse().expect("bad rational in dump"))))
                    .collect();
                cat.declare_identity_combo(obj, combo);
            }
        }
        for c in &dump.compositions {
            let result = c
                .result
                .iter()
                .map(|(i, s)| (*i, Rat(s.parse().expect("bad rational in dump"))))
                .collect();
            cat.set_comp(c.g, c.f, result);
        }
        cat
    }
}

/// Serializable category dump (objects, hom bases per degree, composition
/// table). Used by golden tests and the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CategoryDump {
    pub objects: Vec<String>,
    pub homs: Vec<HomDump>,
    pub identities: Vec<Option<Vec<(usize, String)>>>,
    pub compositions: Vec<CompDump>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomDump {
    pub src: usize,
    pub dst: usize,
    pub deg: i64,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompDump {
    pub g: MorKey,
    pub f: MorKey,
    pub result: Vec<(usize, String)>,
}

/// One failed check, with enough context to locate it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub witness: String,
}

/// Outcome of a structural check; `passed` iff no violations.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CheckReport {
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, rule: impl Into<String>, witness: impl Into<String>) {
        self.violations.push(Violation { rule: rule.into(), witness: witness.into() });
    }
}

/// Verifies associativity, identity neutrality and degree additivity on
/// all composable basis triples.
pub fn check_category_axioms(cat: &LinearCategory) -> CheckReport {
    let mut report = CheckReport::default();
    let keys = cat.basis_keys();
    for obj in 0..cat.object_count() {
        if !cat.has_identity(obj) {
            report.push("identity", format!("object {obj} has no identity"));
        }
    }
    for &f in &keys {
        let fm = Morphism::basis(cat, f);
        if cat.has_identity(f.0) {
            let id = cat.identity(f.0);
            if cat.compose(&fm, &id) != fm {
                report.push("identity-right", format!("f={f:?}"));
            }
        }
        if cat.has_identity(f.1) {
            let id = cat.identity(f.1);
            if cat.compose(&id, &fm) != fm {
                report.push("identity-left", format!("f={f:?}"));
            }
        }
    }
    for &f in &keys {
        for &g in &keys {
            if g.0 != f.1 {
                continue;
            }
            let gf = cat.compose(&Morphism::basis(cat, g), &Morphism::basis(cat, f));
            if gf.deg != f.2 + g.2 {
                report.push("degree-additive", format!("g={g:?} f={f:?}"));
            }
            for &h in &keys {
                if h.0 != g.1 {
                    continue;
                }
                let hm = Morphism::basis(cat, h);
                let h_gf = cat.compose(&hm, &gf);
                let hg = cat.compose(&hm, &Morphism::basis(cat, g));
                let hg_f = cat.compose(&hg, &Morphism::basis(cat, f));
                if h_gf != hg_f {
                    report.push("associativity", format!("h={h:?} g={g:?} f={f:?}"));
                }
            }
        }
    }
    if cat.is_dg() {
        for &f in &keys {
            let fm = Morphism::basis(cat, f);
            let ddf = cat.apply_diff(&cat.apply_diff(&fm));
            if !ddf.is_zero() {
                report.push("d-squared", format!("f={f:?}"));
            }
            // Leibniz: d(g∘f) = d(g)∘f + (−1)^{|g|} g∘d(f)
            for &g in &keys {
                if g.0 != f.1 {
                    continue;
                }
                let gm = Morphism::basis(cat, g);
                let lhs = cat.apply_diff(&cat.compose(&gm, &fm));
                let sign = if g.2.rem_euclid(2) == 0 { Rat::one() } else { Rat::one().neg() };
                let rhs = cat
                    .compose(&cat.apply_diff(&gm), &fm)
                    .add(&cat.compose(&gm, &cat.apply_diff(&fm)).scale(&sign));
                if lhs != rhs {
                    report.push("leibniz", format!("g={g:?} f={f:?}"));
                }
            }
        }
    }
    report
}

/// A degree-0 linear functor, given on objects and on basis morphisms.
#[derive(Clone, Debug)]
pub struct FunctorData {
    pub object_map: Vec<usize>,
    pub morphism_map: BTreeMap<MorKey, Morphism>,
}

impl FunctorData {
    pub fn identity(cat: &LinearCategory) -> FunctorData {
        let object_map = (0..cat.object_count()).collect();
        let morphism_map = cat
            .basis_keys()
            .into_iter()
            .map(|k| (k, Morphism::basis(cat, k)))
            .collect();
        FunctorData { object_map, morphism_map }
    }

    pub fn apply_object(&self, obj: usize) -> usize {
        self.object_map[obj]
    }

    pub fn apply(&self, target: &LinearCategory, m: &Morphism) -> Morphism {
        let src = self.object_map[m.src];
        let dst = self.object_map[m.dst];
        let dim = target.hom_dim(src, dst, m.deg);
        let mut out = Morphism::zero(src, dst, m.deg, dim);
        for (i, c) in m.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = self
                .morphism_map
                .get(&(m.src, m.dst, m.deg, i))
                .unwrap_or_else(|| panic!("functor undefined on {:?}", (m.src, m.dst, m.deg, i)));
            out = out.add(&img.scale(c));
        }
        out
    }

    /// Checks that identities and all basis compositions are preserved.
    pub fn check_functoriality(
        &self,
        source: &LinearCategory,
        target: &LinearCategory,
    ) -> CheckReport {
        let mut report = CheckReport::default();
        for obj in 0..source.object_count() {
            let id = source.identity(obj);
            let img = self.apply(target, &id);
            if img != target.identity(self.object_map[obj]) {
                report.push("preserves-identity", format!("object {obj}"));
            }
        }
        let keys = source.basis_keys();
        for &f in &keys {
            for &g in &keys {
                if g.0 != f.1 {
                    continue;
                }
                let fm = Morphism::basis(source, f);
                let gm = Morphism::basis(source, g);
                let lhs = self.apply(target, &source.compose(&gm, &fm));
                let rhs = target.compose(&self.apply(target, &gm), &self.apply(target, &fm));
                if lhs != rhs {
                    report.push("preserves-composition", format!("g={g:?} f={f:?}"));
                }
            }
        }
        report
    }
}

/// Object index of `C_I` in the monomial category: the bitmask itself.
pub fn monomial_object(i_set: Face) -> usize {
    i_set.0 as usize
}

pub fn monomial_face(obj: usize) -> Face {
    Face(obj as u32)
}

/// The monomial category on subsets of `[n]`: `Hom⁰(C_I, C_J) = K·e_{J\I}`
/// for `I ⊆ J`, zero otherwise, with `e_A ∘ e_B = e_{A∪B}`.
pub fn build_monomial_category(n: usize) -> LinearCategory {
    let count = 1usize << n;
    let objects = (0..count).map(|b| format!("C{}", Face(b as u32))).collect();
    let mut cat = LinearCategory::new(objects);
    for src in 0..count {
        for dst in 0..count {
            let fs = Face(src as u32);
            let fd = Face(dst as u32);
            if fs.is_subset(fd) {
                cat.add_hom_basis(src, dst, 0, vec![format!("e{}", fd.minus(fs))]);
            }
        }
    }
    for obj in 0..count {
        cat.declare_identity(obj, 0);
    }
    for src in 0..count {
        for mid in 0..count {
            for dst in 0..count {
                let (fs, fm, fd) = (Face(src as u32), Face(mid as u32), Face(dst as u32));
                if fs.is_subset(fm) && fm.is_subset(fd) {
                    cat.set_comp(
                        (mid, dst, 0, 0),
                        (src, mid, 0, 0),
                        vec![(0, Rat::one())],
                    );
                }
            }
        }
    }
    cat
}

/// Is `F` injective and surjective on `Hom⁰(C_I, C_J)` for every inclusion
/// `I ⊂ J`? The functor must be sourced at the monomial category on `[n]`
/// and bijective on objects.
pub fn check_delta_fully_faithful(
    f: &FunctorData,
    source: &LinearCategory,
    target: &LinearCategory,
    n: usize,
) -> CheckReport {
    let mut report = CheckReport::default();
    {
        let mut seen = vec![false; target.object_count()];
        for &o in &f.object_map {
            if seen[o] {
                report.push("bijective-on-objects", format!("target object {o} hit twice"));
            }
            seen[o] = true;
        }
        if f.object_map.len() != target.object_count() {
            report.push(
                "bijective-on-objects",
                format!("{} source vs {} target objects", f.object_map.len(), target.object_count()),
            );
        }
    }
    let count = 1usize << n;
    for src in 0..count {
        for dst in 0..count {
            let (fs, fd) = (Face(src as u32), Face(dst as u32));
            if !fs.is_subset(fd) || fs == fd {
                continue;
            }
            let e = Morphism::basis(source, (src, dst, 0, 0));
            let img = f.apply(target, &e);
            if img.is_zero() {
                report.push("delta-faithful", format!("e{} maps to zero", fd.minus(fs)));
            }
            let target_dim = target.hom_dim(f.object_map[src], f.object_map[dst], 0);
            if target_dim > 1 {
                report.push(
                    "delta-full",
                    format!(
                        "Hom0({}, {}) has dimension {target_dim}",
                        target.objects[f.object_map[src]], target.objects[f.object_map[dst]]
                    ),
                );
            } else if target_dim == 0 {
                report.push(
                    "delta-faithful",
                    format!(
                        "Hom0({}, {}) vanishes",
                        target.objects[f.object_map[src]], target.objects[f.object_map[dst]]
                    ),
                );
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_category_small() {
        let c0 = build_monomial_category(0);
        assert_eq!(c0.object_count(), 1);
        assert_eq!(c0.basis_keys().len(), 1);

        let c1 = build_monomial_category(1);
        assert_eq!(c1.object_count(), 2);
        // identities plus e_{1}
        assert_eq!(c1.basis_keys().len(), 3);

        let c2 = build_monomial_category(2);
        // one basis morphism per inclusion pair: 3^2
        assert_eq!(c2.basis_keys().len(), 9);
        // e2 ∘ e1 = e12 = e1 ∘ e2
        let e1 = Morphism::basis(&c2, (0, 1, 0, 0));
        let e2_after = Morphism::basis(&c2, (1, 3, 0, 0));
        let via1 = c2.compose(&e2_after, &e1);
        let e2 = Morphism::basis(&c2, (0, 2, 0, 0));
        let e1_after = Morphism::basis(&c2, (2, 3, 0, 0));
        let via2 = c2.compose(&e1_after, &e2);
        assert_eq!(via1, via2);
        assert!(!via1.is_zero());
    }

    #[test]
    fn monomial_hom_vanishing() {
        for n in 0..=5 {
            let c = build_monomial_category(n);
            // one basis morphism per inclusion pair, identities included
            assert_eq!(c.basis_keys().len(), 3usize.pow(n as u32));
            for src in 0..c.object_count() {
                for dst in 0..c.object_count() {
                    let expect = Face(src as u32).is_subset(Face(dst as u32));
                    assert_eq!(c.hom_dim(src, dst, 0) == 1, expect);
                    assert!(c.hom_degrees(src, dst).iter().all(|&d| d == 0));
                }
            }
        }
    }

    #[test]
    fn category_axioms_pass_and_fail() {
        let c2 = build_monomial_category(2);
        assert!(check_category_axioms(&c2).passed());

        // zero out a middle composition in the three-vertex category:
        // associativity along the chain ∅ ⊂ {1} ⊂ {1,2} ⊂ {1,2,3} breaks
        let mut bad = build_monomial_category(3);
        bad.set_comp((1, 3, 0, 0), (0, 1, 0, 0), vec![]);
        let report = check_category_axioms(&bad);
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| v.rule == "associativity"));
    }

    #[test]
    fn identity_functor_is_delta_ff() {
        let c2 = build_monomial_category(2);
        let id = FunctorData::identity(&c2);
        assert!(id.check_functoriality(&c2, &c2).passed());
        assert!(check_delta_fully_faithful(&id, &c2, &c2, 2).passed());
    }

    #[test]
    fn zero_morphism_map_fails_faithfulness() {
        let c1 = build_monomial_category(1);
        let mut f = FunctorData::identity(&c1);
        f.morphism_map.insert((0, 1, 0, 0), Morphism::zero(0, 1, 0, 1));
        let report = check_delta_fully_faithful(&f, &c1, &c1, 1);
        assert!(report.violations.iter().any(|v| v.rule == "delta-faithful"));
    }

    #[test]
    fn dump_round_trip() {
        let c2 = build_monomial_category(2);
        let dump = c2.dump();
        let text = serde_json::to_string(&dump).unwrap();
        let back = LinearCategory::from_dump(&serde_json::from_str(&text).unwrap());
        assert_eq!(back.basis_keys(), c2.basis_keys());
        assert!(check_category_axioms(&back).passed());
    }
}
