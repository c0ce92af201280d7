// scratch: one n = 5 mirror run to probe the recursion depth
use std::time::Instant;
use skeleta::poset::build_poset_model;
use skeleta::simplicial::{Face, SimplicialComplex};
use skeleta::toric::build_b_category;

fn main() {
    // 2-skeleton flavored complex on [5]: all pairs, two triangles
    let mut facets: Vec<Face> = (1..=5)
        .flat_map(|i| (i + 1..=5).map(move |j| Face::from_verts(&[i, j])))
        .collect();
    facets.push(Face::from_verts(&[1, 2, 3]));
    facets.push(Face::from_verts(&[2, 4, 5]));
    let k = SimplicialComplex::closure(5, &facets).unwrap();
    println!("faces: {}", k.face_count());

    let t0 = Instant::now();
    let poset = build_poset_model(&k);
    let rep = poset.represent_subset(Face::from_verts(&[1, 2, 3, 4, 5]));
    println!("rep of the full set: {} slots in {:?}", rep.len(), t0.elapsed());

    let t0 = Instant::now();
    let a = poset.ext_table();
    println!("A table: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let b = build_b_category(&k).ext_table();
    println!("B table: {:?}", t0.elapsed());
    match a.first_difference(&b) {
        None => println!("tables agree"),
        Some((x, y)) => println!("MISMATCH at ({x}, {y}): {:?} vs {:?}", a.get(x, y), b.get(x, y)),
    }
}
