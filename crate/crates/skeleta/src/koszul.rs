//! Shifted Koszul complexes over the monomial category, pushed through a
//! functor into a target category, with their distinguished triangles and
//! acyclicity tests.
//!
//! The complex on a pair of disjoint subsets `(I, J)` has one summand per
//! `I' ⊆ I`, the object attached to `I' ∪ J` with shift `|I \ I'| `, and
//! differential entries `±e_i` from the `I'`-slot to the `I'∪{i}`-slot.
//! The sign on such an entry is the usual position count with respect to
//! a chosen ordering of `I`, which makes parallel square faces
//! anticommute.

use thiserror::Error;

use crate::linalg::{Field, Rat};
use crate::lincat::{monomial_object, FunctorData, LinearCategory, Morphism};
use crate::simplicial::Face;
use crate::twisted::{
    check_mc, cone, is_zero_object, TwMorphism, TwSummand, TwistedComplex, TwistedError,
};

#[derive(Debug, Error)]
pub enum KoszulError {
    #[error("sets {0} and {1} are not disjoint")]
    NotDisjoint(Face, Face),
    #[error("sgn must be a bijection from the vertices of {0}")]
    BadSgn(Face),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
}

/// Data of a shifted Koszul complex: disjoint subsets and an ordering of
/// the Koszul directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulSpec {
    pub i_set: Face,
    pub j_set: Face,
    /// The vertices of `i_set` in the order prescribed by the bijection
    /// `sgn : I → [|I|]`; position in the vector is the sgn value.
    pub order: Vec<usize>,
}

impl KoszulSpec {
    /// Default ordering: increasing vertex labels.
    pub fn new(i_set: Face, j_set: Face) -> Result<KoszulSpec, KoszulError> {
        KoszulSpec::with_order(i_set, j_set, i_set.verts())
    }

    pub fn with_order(i_set: Face, j_set: Face, order: Vec<usize>) -> Result<KoszulSpec, KoszulError> {
        if !i_set.is_disjoint(j_set) {
            return Err(KoszulError::NotDisjoint(i_set, j_set));
        }
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if sorted != i_set.verts() {
            return Err(KoszulError::BadSgn(i_set));
        }
        Ok(KoszulSpec { i_set, j_set, order })
    }

    fn position(&self, v: usize) -> usize {
        self.order.iter().position(|&w| w == v).unwrap()
    }

    /// `(−1)^{#{j ∈ I' : sgn(j) < sgn(i)}}` — the coefficient of the entry
    /// leaving the `I'`-slot in direction `i`.
    pub fn sign(&self, i_prime: Face, i: usize) -> Rat {
        let pos = self.position(i);
        let count = i_prime
            .verts()
            .iter()
            .filter(|&&v| self.position(v) < pos)
            .count();
        if count % 2 == 0 {
            Rat::one()
        } else {
            Rat::one().neg()
        }
    }
}

/// Deterministic slot order for the cube on `I`: decreasing shift
/// (`|I \ I'|`), then increasing bitmask of `I'`.
pub fn cube_slots(i_set: Face) -> Vec<Face> {
    let mut subs = i_set.subsets();
    subs.sort_by_key(|s| (s.card(), s.0));
    subs
}

/// Builds the Koszul complex of `spec` inside the target of `f`, which
/// must be sourced at the monomial category on `[n]`. The slot for `I'`
/// carries the image of the object attached to `I' ∪ J` with shift
/// `|I \ I'|`.
pub fn build_koszul(
    f: &FunctorData,
    target: &LinearCategory,
    spec: &KoszulSpec,
) -> Result<TwistedComplex, KoszulError> {
    let slots = cube_slots(spec.i_set);
    let slot_index = |s: Face| slots.iter().position(|&t| t == s).unwrap();
    let summands: Vec<TwSummand> = slots
        .iter()
        .map(|&ip| TwSummand {
            obj: f.apply_object(monomial_object(ip.union(spec.j_set))),
            shift: (spec.i_set.card() - ip.card()) as i64,
        })
        .collect();
    let mut x = TwistedComplex { summands, delta: Default::default() };
    for &ip in &slots {
        let src_obj = monomial_object(ip.union(spec.j_set));
        for &i in &spec.i_set.minus(ip).verts() {
            let next = ip.insert(i);
            let dst_obj = monomial_object(next.union(spec.j_set));
            let e = Morphism::basis_of_monomial(src_obj, dst_obj);
            let img = f.apply(target, &e).scale(&spec.sign(ip, i));
            x.set_entry(slot_index(next), slot_index(ip), img);
        }
    }
    check_mc(target, &x)?;
    Ok(x)
}

/// The comparison map `𝐞_k : K_I{J} → K_I{J ∪ {k}}`, its cone, and the
/// verified identification of that cone with `K_{I∪{k}}{J}`.
pub struct KoszulTriangle {
    pub map: TwMorphism,
    pub source: TwistedComplex,
    pub target: TwistedComplex,
    pub cone: TwistedComplex,
    /// Slot-wise isomorphism data onto `K_{I∪{k}}{J}`: for each cone slot,
    /// the matching slot of the rebuilt complex and the sign relating the
    /// differentials.
    pub witness: Vec<(usize, Rat)>,
}

/// Builds the distinguished triangle for adding the vertex `k` to `J`.
pub fn koszul_triangle(
    f: &FunctorData,
    target: &LinearCategory,
    i_set: Face,
    j_set: Face,
    k: usize,
    order: Option<Vec<usize>>,
) -> Result<KoszulTriangle, KoszulError> {
    let kf = Face::singleton(k);
    if !i_set.is_disjoint(kf) || !j_set.is_disjoint(kf) {
        return Err(KoszulError::NotDisjoint(i_set.union(j_set), kf));
    }
    let order = order.unwrap_or_else(|| i_set.verts());
    let spec_src = KoszulSpec::with_order(i_set, j_set, order.clone())?;
    let spec_dst = KoszulSpec::with_order(i_set, j_set.insert(k), order.clone())?;
    let src = build_koszul(f, target, &spec_src)?;
    let dst = build_koszul(f, target, &spec_dst)?;
    let slots = cube_slots(i_set);
    let mut map = TwMorphism::new(0);
    for (idx, &ip) in slots.iter().enumerate() {
        let a = monomial_object(ip.union(j_set));
        let b = monomial_object(ip.union(j_set).union(kf));
        let e = Morphism::basis_of_monomial(a, b);
        map.set(idx, idx, f.apply(target, &e));
    }
    let c = cone(target, &map, &src, &dst)?;

    // identify cone slots with the cube on I ∪ {k}: slots of the shifted
    // source are I' (with k outside), slots of the target are I' ∪ {k}
    let mut big_order = order;
    big_order.push(k);
    let spec_big = KoszulSpec::with_order(i_set.insert(k), j_set, big_order)?;
    let big = build_koszul(f, target, &spec_big)?;
    let big_slots = cube_slots(i_set.insert(k));
    let n_src = slots.len();
    let mut cone_to_big = Vec::with_capacity(c.summands.len());
    for (idx, _) in c.summands.iter().enumerate() {
        let ip_big = if idx < n_src { slots[idx] } else { slots[idx - n_src].insert(k) };
        cone_to_big.push(big_slots.iter().position(|&t| t == ip_big).unwrap());
    }
    let witness = match_diagonal_signs(target, &c, &big, &cone_to_big)
        .ok_or(TwistedError::NotMaurerCartan(0, 0))
        .map_err(KoszulError::Twisted)?;
    Ok(KoszulTriangle { map, source: src, target: dst, cone: c, witness })
}

/// Finds diagonal signs `ε` with `ε_b · δ_big[π(b), π(a)] = δ_cone[b, a] · ε_a`
/// slot-wise, certifying that the permutation `π` is an isomorphism of
/// twisted complexes. Returns `(π(slot), ε(slot))` per cone slot.
fn match_diagonal_signs(
    cat: &LinearCategory,
    cone: &TwistedComplex,
    big: &TwistedComplex,
    perm: &[usize],
) -> Option<Vec<(usize, Rat)>> {
    let n = cone.len();
    for (idx, s) in cone.summands.iter().enumerate() {
        let t = big.summands[perm[idx]];
        if s.obj != t.obj || s.shift != t.shift {
            return None;
        }
    }
    // propagate signs along the entry graph from an arbitrary root of each
    // weakly connected component
    let mut sign: Vec<Option<Rat>> = vec![None; n];
    for root in 0..n {
        if sign[root].is_some() {
            continue;
        }
        sign[root] = Some(Rat::one());
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let sv = sign[v].clone().unwrap();
            for (&(to, from), m) in &cone.delta {
                let (other, forward) = if from == v {
                    (to, true)
                } else if to == v {
                    (from, false)
                } else {
                    continue;
                };
                let big_m = big.entry(perm[to], perm[from])?;
                // both entries are scalar multiples of the same basis
                // morphism; find the ratio
                let ratio = scalar_ratio(m, big_m)?;
                let other_sign = if forward { sv.mul(&ratio.inv()) } else { sv.mul(&ratio) };
                // ε_to = ε_from / ratio with δ_cone = ratio · δ_big means
                // ε_to · big = cone · ε_from
                match &sign[other] {
                    None => {
                        sign[other] = Some(other_sign);
                        stack.push(other);
                    }
                    Some(existing) => {
                        if *existing != other_sign {
                            return None;
                        }
                    }
                }
            }
        }
    }
    // final verification: ε_to · δ_big = δ_cone · ε_from entry-wise
    for (&(to, from), m) in &cone.delta {
        let big_m = big.entry(perm[to], perm[from])?;
        let lhs = big_m.scale(sign[to].as_ref().unwrap());
        let rhs = m.scale(sign[from].as_ref().unwrap());
        if lhs != rhs {
            return None;
        }
    }
    for (&(to, from), big_m) in &big.delta {
        let back = perm.iter().position(|&p| p == to).zip(perm.iter().position(|&p| p == from));
        match back {
            Some((bt, bf)) => {
                if cone.entry(bt, bf).is_none() && !big_m.is_zero() {
                    return None;
                }
            }
            None => return None,
        }
    }
    let _ = cat;
    Some(perm.iter().zip(sign).map(|(&p, s)| (p, s.unwrap())).collect())
}

fn scalar_ratio(a: &Morphism, b: &Morphism) -> Option<Rat> {
    if (a.src, a.dst, a.deg) != (b.src, b.dst, b.deg) {
        return None;
    }
    let mut ratio: Option<Rat> = None;
    for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => {}
            (false, false) => {
                let r = x.mul(&y.inv());
                match &ratio {
                    None => ratio = Some(r),
                    Some(prev) => {
                        if *prev != r {
                            return None;
                        }
                    }
                }
            }
            _ => return None,
        }
    }
    ratio
}

/// Is the pushed-forward Koszul complex a zero object in the target?
pub fn acyclicity_test(
    f: &FunctorData,
    target: &LinearCategory,
    spec: &KoszulSpec,
) -> Result<bool, KoszulError> {
    let x = build_koszul(f, target, spec)?;
    Ok(is_zero_object(target, &x)?)
}

impl Morphism {
    /// The unique basis morphism of the monomial category between the
    /// objects of two nested subsets, as a one-hot combination.
    pub fn basis_of_monomial(src_obj: usize, dst_obj: usize) -> Morphism {
        debug_assert!(Face(src_obj as u32).is_subset(Face(dst_obj as u32)));
        Morphism { src: src_obj, dst: dst_obj, deg: 0, coeffs: vec![Rat::one()] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincat::{build_monomial_category, FunctorData};
    use crate::twisted::is_quasi_iso;

    #[test]
    fn empty_koszul_is_single_summand() {
        let cat = build_monomial_category(2);
        let f = FunctorData::identity(&cat);
        let spec = KoszulSpec::new(Face::EMPTY, Face::singleton(2)).unwrap();
        let x = build_koszul(&f, &cat, &spec).unwrap();
        assert_eq!(x.summands.len(), 1);
        assert!(x.delta.is_empty());
        assert_eq!(x.summands[0].obj, 0b10);
    }

    #[test]
    fn one_direction_is_two_term() {
        let cat = build_monomial_category(1);
        let f = FunctorData::identity(&cat);
        let spec = KoszulSpec::new(Face::singleton(1), Face::EMPTY).unwrap();
        let x = build_koszul(&f, &cat, &spec).unwrap();
        assert_eq!(x.summands.len(), 2);
        assert_eq!(x.delta.len(), 1);
    }

    #[test]
    fn square_anticommutes() {
        let cat = build_monomial_category(2);
        let f = FunctorData::identity(&cat);
        let spec = KoszulSpec::new(Face::from_verts(&[1, 2]), Face::EMPTY).unwrap();
        // build_koszul already asserts Maurer-Cartan
        let x = build_koszul(&f, &cat, &spec).unwrap();
        assert_eq!(x.summands.len(), 4);
        // flipping one sign must break it
        let mut bad = x.clone();
        let key = *bad.delta.keys().next().unwrap();
        let flipped = bad.delta[&key].scale(&Rat::one().neg());
        bad.set_entry(key.0, key.1, flipped);
        assert!(!crate::twisted::is_mc(&cat, &bad));
    }

    #[test]
    fn koszul_nonzero_in_monomial_category() {
        let cat = build_monomial_category(1);
        let f = FunctorData::identity(&cat);
        let spec = KoszulSpec::new(Face::singleton(1), Face::EMPTY).unwrap();
        assert!(!acyclicity_test(&f, &cat, &spec).unwrap());
    }

    #[test]
    fn triangle_cone_matches_bigger_cube() {
        let cat = build_monomial_category(2);
        let f = FunctorData::identity(&cat);
        // I = ∅, J = ∅, k = 1 in the category on one vertex, embedded in two
        let t = koszul_triangle(&f, &cat, Face::EMPTY, Face::EMPTY, 1, None).unwrap();
        assert_eq!(t.cone.summands.len(), 2);
        assert_eq!(t.witness.len(), 2);

        // I = {1}, J = ∅, k = 2
        let t = koszul_triangle(&f, &cat, Face::singleton(1), Face::EMPTY, 2, None).unwrap();
        assert_eq!(t.cone.summands.len(), 4);
        // the identification carries actual signs
        assert!(crate::twisted::is_mc(&cat, &t.cone));
    }

    #[test]
    fn triangle_cones_match_for_all_small_splits() {
        let cat = build_monomial_category(4);
        let f = FunctorData::identity(&cat);
        for i_bits in 0u32..16 {
            for j_bits in 0u32..16 {
                let (i_set, j_set) = (Face(i_bits), Face(j_bits));
                if !i_set.is_disjoint(j_set) {
                    continue;
                }
                for k in 1..=4 {
                    if i_set.contains(k) || j_set.contains(k) {
                        continue;
                    }
                    let t = koszul_triangle(&f, &cat, i_set, j_set, k, None).unwrap();
                    assert_eq!(t.witness.len(), t.cone.summands.len());
                }
            }
        }
    }

    #[test]
    fn sgn_independence_up_to_iso() {
        let cat = build_monomial_category(3);
        let f = FunctorData::identity(&cat);
        let i_set = Face::from_verts(&[1, 2, 3]);
        let a = build_koszul(&f, &cat, &KoszulSpec::new(i_set, Face::EMPTY).unwrap()).unwrap();
        let b = build_koszul(
            &f,
            &cat,
            &KoszulSpec::with_order(i_set, Face::EMPTY, vec![3, 1, 2]).unwrap(),
        )
        .unwrap();
        // same slots in the same order, so the identity permutation with
        // diagonal signs must relate them
        let perm: Vec<usize> = (0..a.summands.len()).collect();
        let w = match_diagonal_signs(&cat, &a, &b, &perm);
        assert!(w.is_some());
        // and the sign-diagonal map is a quasi-isomorphism
        let mut m = TwMorphism::new(0);
        for (slot, (target, sign)) in w.unwrap().into_iter().enumerate() {
            let obj = a.summands[slot].obj;
            m.set(target, slot, cat.identity(obj).scale(&sign));
        }
        assert!(is_quasi_iso(&cat, &m, &a, &b).unwrap());
    }
}
