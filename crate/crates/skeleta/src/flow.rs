//! Numeric verification of the geometric substrate: squared distance to
//! the conical strata, the piecewise Hamiltonian field of the kinetic
//! energy relative to the skeleton, orbit integration clear of the
//! singular locus, and intersection counts between orthogonal Lagrangians
//! under the wrapped flow.
//!
//! The stratum of a face `σ` is `{x_i = 0, y_i ≥ 0 (i ∈ σ); y_j = 0
//! (j ∉ σ)}`. Everything here works with the idealized piecewise field;
//! orbits carry a tolerance margin around the locus where two strata are
//! equidistant with distinct nearest points.

use thiserror::Error;

use crate::simplicial::{Face, SimplicialComplex};

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("point is within tolerance of the singular locus (margin {0:.3e})")]
    OnSingularLocus(f64),
    #[error("orbit crossed the singular margin at t = {0}")]
    SingularCrossing(f64),
}

/// A point of the cotangent space: base and fiber coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> PhasePoint {
        assert_eq!(x.len(), y.len());
        assert!(x.iter().chain(&y).all(|v| v.is_finite()));
        PhasePoint { x, y }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// Integration and detection parameters.
#[derive(Clone, Copy, Debug)]
pub struct FlowParams {
    /// Neighborhood scale of the skeleton.
    pub epsilon: f64,
    /// Wrapping weight multiplying the field.
    pub w: f64,
    /// Integration step.
    pub dt: f64,
    /// Equidistance tolerance for singular-locus detection.
    pub tol: f64,
}

impl Default for FlowParams {
    fn default() -> FlowParams {
        FlowParams { epsilon: 0.25, w: 8.0, dt: 1e-3, tol: 1e-6 }
    }
}

/// Closed-form squared distance from `p` to the stratum of `sigma`:
/// `Σ_{i∈σ} (x_i² + max(−y_i, 0)²) + Σ_{j∉σ} y_j²`.
pub fn distance_sq_stratum(p: &PhasePoint, sigma: Face) -> f64 {
    let mut acc = 0.0;
    for j in 1..=p.dim() {
        let (x, y) = (p.x[j - 1], p.y[j - 1]);
        if sigma.contains(j) {
            acc += x * x + y.min(0.0) * y.min(0.0);
        } else {
            acc += y * y;
        }
    }
    acc
}

/// Nearest point of the stratum of `sigma`.
pub fn project_stratum(p: &PhasePoint, sigma: Face) -> PhasePoint {
    let mut q = p.clone();
    for j in 1..=p.dim() {
        if sigma.contains(j) {
            q.x[j - 1] = 0.0;
            q.y[j - 1] = q.y[j - 1].max(0.0);
        } else {
            q.y[j - 1] = 0.0;
        }
    }
    q
}

/// All strata with their squared distances, closest first; ties broken by
/// face order.
pub fn nearest_strata(p: &PhasePoint, complex: &SimplicialComplex) -> Vec<(Face, f64)> {
    let mut out: Vec<(Face, f64)> = complex
        .faces()
        .map(|f| (f, distance_sq_stratum(p, f)))
        .collect();
    out.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    out
}

/// Kinetic energy relative to the skeleton — half the squared distance to
/// the nearest stratum — together with that stratum.
pub fn kinetic_energy(p: &PhasePoint, complex: &SimplicialComplex) -> (f64, Face) {
    let near = nearest_strata(p, complex);
    (0.5 * near[0].1, near[0].0)
}

/// Distance margin to the singular locus: positive when the two nearest
/// strata with genuinely distinct nearest points are separated by more
/// than their common distance allows. Equidistance through (nearly) the
/// same nearest point — the shared boundary of neighboring strata, where
/// the kinetic energy stays differentiable — does not count; "distinct"
/// is judged on the scale of the distances themselves.
pub fn singular_margin(p: &PhasePoint, complex: &SimplicialComplex) -> f64 {
    let near = nearest_strata(p, complex);
    let (f0, d0) = near[0];
    let p0 = project_stratum(p, f0);
    let mut margin = f64::INFINITY;
    for &(f, d) in near.iter().skip(1) {
        let gap = d.sqrt() - d0.sqrt();
        if gap >= margin {
            break;
        }
        let proj = project_stratum(p, f);
        let sep: f64 = proj
            .x
            .iter()
            .zip(&p0.x)
            .chain(proj.y.iter().zip(&p0.y))
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        if sep.sqrt() > 0.25 * (d0.sqrt() + d.sqrt()) {
            margin = gap;
        }
    }
    margin
}

/// The Hamiltonian field of the kinetic energy at a regular point: in the
/// region of the stratum `σ`, drift `ẋ_j = y_j` off `σ` and restoring
/// `ẏ_i = −x_i` on `σ` (with the one-sided term where the fiber dips
/// negative).
pub fn hamiltonian_field(
    p: &PhasePoint,
    complex: &SimplicialComplex,
    tol: f64,
) -> Result<(Vec<f64>, Vec<f64>), FlowError> {
    let margin = singular_margin(p, complex);
    if margin < tol {
        return Err(FlowError::OnSingularLocus(margin));
    }
    let (_, sigma) = kinetic_energy(p, complex);
    Ok(field_for_stratum(p, sigma))
}

/// Field of half the squared distance to one stratum, valid everywhere.
pub fn field_for_stratum(p: &PhasePoint, sigma: Face) -> (Vec<f64>, Vec<f64>) {
    let n = p.dim();
    let mut dx = vec![0.0; n];
    let mut dy = vec![0.0; n];
    for j in 1..=n {
        if sigma.contains(j) {
            // H = ½(x² + max(−y,0)²): ẋ = ∂H/∂y, ẏ = −∂H/∂x
            dx[j - 1] = p.y[j - 1].min(0.0);
            dy[j - 1] = -p.x[j - 1];
        } else {
            dx[j - 1] = p.y[j - 1];
        }
    }
    (dx, dy)
}

/// Fourth-order integration of `w` times the piecewise field, checking
/// the singular margin at every step. Returns the sampled path.
pub fn integrate_orbit(
    p: &PhasePoint,
    complex: &SimplicialComplex,
    params: &FlowParams,
    t_end: f64,
) -> Result<Vec<(f64, PhasePoint)>, FlowError> {
    let steps = (t_end / params.dt).ceil() as usize;
    let mut path = Vec::with_capacity(steps + 1);
    let mut cur = p.clone();
    let mut t = 0.0;
    path.push((t, cur.clone()));
    for _ in 0..steps {
        if singular_margin(&cur, complex) < params.tol {
            return Err(FlowError::SingularCrossing(t));
        }
        cur = rk4_step(&cur, complex, params.w, params.dt);
        t += params.dt;
        path.push((t, cur.clone()));
    }
    Ok(path)
}

fn rk4_step(p: &PhasePoint, complex: &SimplicialComplex, w: f64, dt: f64) -> PhasePoint {
    let f = |q: &PhasePoint| -> (Vec<f64>, Vec<f64>) {
        let (_, sigma) = kinetic_energy(q, complex);
        let (dx, dy) = field_for_stratum(q, sigma);
        (dx.iter().map(|v| v * w).collect(), dy.iter().map(|v| v * w).collect())
    };
    let add = |q: &PhasePoint, k: &(Vec<f64>, Vec<f64>), h: f64| -> PhasePoint {
        PhasePoint {
            x: q.x.iter().zip(&k.0).map(|(a, b)| a + h * b).collect(),
            y: q.y.iter().zip(&k.1).map(|(a, b)| a + h * b).collect(),
        }
    };
    let k1 = f(p);
    let k2 = f(&add(p, &k1, dt / 2.0));
    let k3 = f(&add(p, &k2, dt / 2.0));
    let k4 = f(&add(p, &k3, dt));
    let n = p.dim();
    let mut out = p.clone();
    for i in 0..n {
        out.x[i] += dt / 6.0 * (k1.0[i] + 2.0 * k2.0[i] + 2.0 * k3.0[i] + k4.0[i]);
        out.y[i] += dt / 6.0 * (k1.1[i] + 2.0 * k2.1[i] + 2.0 * k3.1[i] + k4.1[i]);
    }
    out
}

/// Maximum energy drift per unit time along a path.
pub fn energy_drift(path: &[(f64, PhasePoint)], complex: &SimplicialComplex) -> f64 {
    let e0 = kinetic_energy(&path[0].1, complex).0;
    let mut worst: f64 = 0.0;
    for (t, p) in path.iter().skip(1) {
        let e = kinetic_energy(p, complex).0;
        if *t > 0.0 {
            worst = worst.max((e - e0).abs() / t);
        }
    }
    worst
}

/// The orthogonal-Lagrangian frame at a component sample point: which
/// coordinates of the fiber (off the face) and base (on the face) vary.
fn orthogonal_coords(sigma: Face, n: usize) -> Vec<(usize, bool)> {
    // (coordinate, varies-in-fiber)
    (1..=n)
        .map(|j| (j, !sigma.contains(j)))
        .collect()
}

/// Counts starting points on a grid discretization of the orthogonal
/// Lagrangian at `p1` whose time-1 flow lands on the orthogonal Lagrangian
/// at `p2`, refining bracketing cells by bisection. `sigma1`/`sigma2` are
/// the strata of the two sample points.
///
/// The landing conditions decouple per coordinate for the complexes this
/// is used on (each coordinate's flow depends only on that coordinate), so
/// roots are located coordinate-wise and then verified jointly.
pub fn count_flow_intersections(
    p1: &PhasePoint,
    sigma1: Face,
    p2: &PhasePoint,
    sigma2: Face,
    complex: &SimplicialComplex,
    params: &FlowParams,
    grid: usize,
) -> usize {
    let n = p1.dim();
    let coords = orthogonal_coords(sigma1, n);
    let span = (2.0 * params.epsilon).sqrt() * 0.98;
    // mismatch after time-1 flow, in the transverse directions of p2
    let mismatch = |start: &PhasePoint| -> Option<Vec<f64>> {
        let path = integrate_orbit(start, complex, params, 1.0).ok()?;
        let end = &path.last().unwrap().1;
        let mut out = Vec::new();
        for j in 1..=n {
            if sigma2.contains(j) {
                out.push(end.y[j - 1] - p2.y[j - 1]);
            } else {
                out.push(end.x[j - 1] - p2.x[j - 1]);
            }
        }
        Some(out)
    };
    let start_at = |offsets: &[f64]| -> PhasePoint {
        let mut q = p1.clone();
        for (&(j, fiber), &o) in coords.iter().zip(offsets) {
            if fiber {
                q.y[j - 1] = o;
            } else {
                q.x[j - 1] = o;
            }
        }
        q
    };

    // locate roots coordinate-wise on the grid, then refine and verify
    let mut per_coord_roots: Vec<Vec<f64>> = Vec::new();
    for (ci, _) in coords.iter().enumerate() {
        let mut roots = Vec::new();
        let sample = |o: f64| -> Option<f64> {
            let mut offsets = vec![0.0; coords.len()];
            offsets[ci] = o;
            mismatch(&start_at(&offsets)).map(|m| m[ci])
        };
        let mut prev: Option<(f64, f64)> = None;
        for g in 0..=grid {
            let o = -span + 2.0 * span * (g as f64) / (grid as f64);
            let Some(v) = sample(o) else {
                prev = None;
                continue;
            };
            if let Some((po, pv)) = prev {
                if pv == 0.0 {
                    roots.push(po);
                } else if pv * v < 0.0 {
                    // bisect
                    let (mut lo, mut hi, mut flo) = (po, o, pv);
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        match sample(mid) {
                            Some(fm) => {
                                if flo * fm <= 0.0 {
                                    hi = mid;
                                } else {
                                    lo = mid;
                                    flo = fm;
                                }
                            }
                            None => break,
                        }
                    }
                    roots.push(0.5 * (lo + hi));
                }
            }
            prev = Some((o, v));
        }
        per_coord_roots.push(roots);
    }
    // assemble joint candidates and verify the full landing
    let mut count = 0;
    let mut idx = vec![0usize; coords.len()];
    loop {
        if per_coord_roots.iter().any(|r| r.is_empty()) {
            break;
        }
        let offsets: Vec<f64> = idx.iter().zip(&per_coord_roots).map(|(&i, r)| r[i]).collect();
        if let Some(m) = mismatch(&start_at(&offsets)) {
            if m.iter().all(|v| v.abs() < 1e-5) {
                count += 1;
            }
        }
        // advance multi-index
        let mut c = 0;
        loop {
            idx[c] += 1;
            if idx[c] < per_coord_roots[c].len() {
                break;
            }
            idx[c] = 0;
            c += 1;
            if c == coords.len() {
                return count;
            }
        }
    }
    count
}
