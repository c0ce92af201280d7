//! Exact scalar arithmetic and a small sparse-matrix kernel (rank, kernel
//! bases, cohomology dimensions of a complex of maps).
//!
//! The default ground field is ℚ with arbitrary-precision rationals; a
//! prime field backend is available for cross-checking ranks. Matrices in
//! this crate are tiny (Čech and Hom-complex differentials with entries
//! ±1), so plain exact Gaussian elimination is the right tool.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("maps at positions {0} and {1} are not composable ({2}x{3} after {4}x{5})")]
    NotComposable(usize, usize, usize, usize, usize, usize),
    #[error("composite of differentials {0} and {1} is nonzero: not a complex")]
    NotAComplex(usize, usize),
}

/// Ground-field element. Everything structural is stored over ℚ; the prime
/// field enters only as an alternative rank backend.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self) -> Self;
}

/// Exact rational scalar.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn int(v: i64) -> Rat {
        Rat(BigRational::from_integer(v.into()))
    }

    pub fn frac(num: i64, den: i64) -> Rat {
        Rat(BigRational::new(num.into(), den.into()))
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Field for Rat {
    fn zero() -> Self {
        Rat(BigRational::zero())
    }
    fn one() -> Self {
        Rat(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        Rat(&self.0 + &other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        Rat(&self.0 - &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Rat(&self.0 * &other.0)
    }
    fn neg(&self) -> Self {
        Rat(-self.0.clone())
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        Rat(self.0.recip())
    }
}

/// Default prime for the fast backend; large enough that the ±1-valued
/// differentials produced in this crate never lose rank.
pub const DEFAULT_PRIME: u64 = 32003;

/// Element of the prime field `F_p` with runtime modulus.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    pub value: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(value: i64, p: u64) -> Fp {
        let v = value.rem_euclid(p as i64) as u64;
        Fp { value: v, p }
    }

    pub fn from_rat(r: &Rat, p: u64) -> Option<Fp> {
        use num_traits::ToPrimitive;
        let num = (r.0.numer() % p).to_i64()?;
        let den = (r.0.denom() % p).to_i64()?;
        let den = Fp::new(den, p);
        if den.value == 0 {
            return None; // bad prime for this scalar
        }
        Some(Fp::new(num, p).mul(&den.inv()))
    }
}

impl Field for Fp {
    fn zero() -> Self {
        Fp { value: 0, p: DEFAULT_PRIME }
    }
    fn one() -> Self {
        Fp { value: 1, p: DEFAULT_PRIME }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, other: &Self) -> Self {
        let p = self.modulus(other);
        Fp { value: (self.value + other.value) % p, p }
    }
    fn sub(&self, other: &Self) -> Self {
        let p = self.modulus(other);
        Fp { value: (self.value + p - other.value) % p, p }
    }
    fn mul(&self, other: &Self) -> Self {
        let p = self.modulus(other);
        Fp { value: self.value * other.value % p, p }
    }
    fn neg(&self) -> Self {
        Fp { value: (self.p - self.value) % self.p, p: self.p }
    }
    fn inv(&self) -> Self {
        assert!(self.value != 0, "division by zero in F_p");
        // Fermat: p is prime
        let mut base = self.value;
        let mut exp = self.p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        Fp { value: acc, p: self.p }
    }
}

impl Fp {
    fn modulus(&self, other: &Fp) -> u64 {
        // zero/one constants carry the default modulus; reconcile
        if self.p == other.p {
            self.p
        } else if self.value == 0 || self.value == 1 {
            other.p
        } else {
            debug_assert!(other.value <= 1, "mixed moduli {} and {}", self.p, other.p);
            self.p
        }
    }
}

/// Sparse matrix over a field; zero entries are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct SparseMatrix<F: Field> {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), F>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = SparseMatrix::zero(k, k);
        for i in 0..k {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn set(&mut self, row: usize, col: usize, value: F) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn add_to(&mut self, row: usize, col: usize, value: &F) {
        let cur = self.get(row, col);
        self.set(row, col, cur.add(value));
    }

    pub fn get(&self, row: usize, col: usize) -> F {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(F::zero)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &F)> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut t = SparseMatrix::zero(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            t.set(c, r, v.clone());
        }
        t
    }

    pub fn compose(&self, first: &SparseMatrix<F>) -> Result<SparseMatrix<F>, LinalgError> {
        if self.cols != first.rows {
            return Err(LinalgError::NotComposable(0, 1, self.rows, self.cols, first.rows, first.cols));
        }
        let mut out = SparseMatrix::zero(self.rows, first.cols);
        for (&(i, k), a) in &self.entries {
            for (&(k2, j), b) in &first.entries {
                if k == k2 {
                    out.add_to(i, j, &a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.is_empty()
    }

    fn to_dense(&self) -> Vec<Vec<F>> {
        let mut rows = vec![vec![F::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r][c] = v.clone();
        }
        rows
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.to_dense();
        let mut rank = 0;
        for col in 0..self.cols {
            let pivot = (rank..self.rows).find(|&r| !m[r][col].is_zero());
            let Some(pr) = pivot else { continue };
            m.swap(rank, pr);
            let inv = m[rank][col].inv();
            for c in col..self.cols {
                m[rank][c] = m[rank][c].mul(&inv);
            }
            for r in 0..self.rows {
                if r != rank && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in col..self.cols {
                        let delta = factor.mul(&m[rank][c]);
                        m[r][c] = m[r][c].sub(&delta);
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Basis of the right kernel, as column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let mut m = self.to_dense();
        let mut pivot_col_of_row = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let pivot = (rank..self.rows).find(|&r| !m[r][col].is_zero());
            let Some(pr) = pivot else { continue };
            m.swap(rank, pr);
            let inv = m[rank][col].inv();
            for c in 0..self.cols {
                m[rank][c] = m[rank][c].mul(&inv);
            }
            for r in 0..self.rows {
                if r != rank && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in 0..self.cols {
                        let delta = factor.mul(&m[rank][c]);
                        m[r][c] = m[r][c].sub(&delta);
                    }
                }
            }
            pivot_col_of_row.push(col);
            rank += 1;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_col_of_row.contains(&free) {
                continue;
            }
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (row, &pc) in pivot_col_of_row.iter().enumerate() {
                v[pc] = m[row][free].neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * x = rhs`; returns one solution if consistent.
    pub fn solve(&self, rhs: &[F]) -> Option<Vec<F>> {
        assert_eq!(rhs.len(), self.rows);
        let mut m = self.to_dense();
        let mut b: Vec<F> = rhs.to_vec();
        let mut pivot_col_of_row = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let pivot = (rank..self.rows).find(|&r| !m[r][col].is_zero());
            let Some(pr) = pivot else { continue };
            m.swap(rank, pr);
            b.swap(rank, pr);
            let inv = m[rank][col].inv();
            for c in 0..self.cols {
                m[rank][c] = m[rank][c].mul(&inv);
            }
            b[rank] = b[rank].mul(&inv);
            for r in 0..self.rows {
                if r != rank && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in 0..self.cols {
                        let delta = factor.mul(&m[rank][c]);
                        m[r][c] = m[r][c].sub(&delta);
                    }
                    let delta = factor.mul(&b[rank]);
                    b[r] = b[r].sub(&delta);
                }
            }
            pivot_col_of_row.push(col);
            rank += 1;
        }
        for r in rank..self.rows {
            if !b[r].is_zero() {
                return None;
            }
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            x[pc] = b[row].clone();
        }
        Some(x)
    }
}

impl SparseMatrix<Rat> {
    /// Reduction mod `p`; fails if a denominator vanishes mod `p`.
    pub fn reduce_mod(&self, p: u64) -> Option<SparseMatrix<Fp>> {
        let mut out = SparseMatrix::zero(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, Fp::from_rat(v, p)?);
        }
        Some(out)
    }
}

/// Rank backend: exact rationals by default, or a prime field for speed.
/// A denominator hitting the prime falls back to the exact computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Rational,
    Prime(u64),
}

pub fn rank_backend(m: &SparseMatrix<Rat>, backend: Backend) -> usize {
    match backend {
        Backend::Rational => m.rank(),
        Backend::Prime(p) => m.reduce_mod(p).map_or_else(|| m.rank(), |mp| mp.rank()),
    }
}

/// As [`homology_dims`], with ranks taken through the chosen backend (the
/// complex condition is still checked exactly).
pub fn homology_dims_backend(
    dims: &[usize],
    d_list: &[SparseMatrix<Rat>],
    backend: Backend,
) -> Result<Vec<usize>, LinalgError> {
    if backend == Backend::Rational {
        return homology_dims(dims, d_list);
    }
    for (i, d) in d_list.iter().enumerate() {
        assert_eq!(d.cols, dims[i]);
        assert_eq!(d.rows, dims[i + 1]);
    }
    for i in 0..d_list.len().saturating_sub(1) {
        let comp = d_list[i + 1].compose(&d_list[i])?;
        if !comp.is_zero_matrix() {
            return Err(LinalgError::NotAComplex(i, i + 1));
        }
    }
    let ranks: Vec<usize> = d_list.iter().map(|d| rank_backend(d, backend)).collect();
    let mut out = Vec::with_capacity(dims.len());
    for i in 0..dims.len() {
        let rank_out = if i < ranks.len() { ranks[i] } else { 0 };
        let rank_in = if i > 0 { ranks[i - 1] } else { 0 };
        out.push(dims[i] - rank_out - rank_in);
    }
    Ok(out)
}

/// Cohomology dimensions of a finite complex `C^0 → C^1 → …` presented by
/// its differentials. `dims[i]` is the dimension of the i-th term;
/// `d_list[i]` maps `C^i → C^{i+1}` (so it has shape `dims[i+1] × dims[i]`).
///
/// Returns `dim H^i = dim ker d_i − rank d_{i−1}` per degree after checking
/// `d ∘ d = 0`.
pub fn homology_dims<F: Field>(
    dims: &[usize],
    d_list: &[SparseMatrix<F>],
) -> Result<Vec<usize>, LinalgError> {
    assert_eq!(d_list.len() + 1, dims.len().max(1), "need one differential less than terms");
    for (i, d) in d_list.iter().enumerate() {
        assert_eq!(d.cols, dims[i], "differential {i} has wrong source dim");
        assert_eq!(d.rows, dims[i + 1], "differential {i} has wrong target dim");
    }
    for i in 0..d_list.len().saturating_sub(1) {
        let comp = d_list[i + 1].compose(&d_list[i])?;
        if !comp.is_zero_matrix() {
            return Err(LinalgError::NotAComplex(i, i + 1));
        }
    }
    let ranks: Vec<usize> = d_list.iter().map(|d| d.rank()).collect();
    let mut out = Vec::with_capacity(dims.len());
    for i in 0..dims.len() {
        let rank_out = if i < ranks.len() { ranks[i] } else { 0 };
        let rank_in = if i > 0 { ranks[i - 1] } else { 0 };
        out.push(dims[i] - rank_out - rank_in);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, data: &[(usize, usize, i64)]) -> SparseMatrix<Rat> {
        let mut m = SparseMatrix::zero(rows, cols);
        for &(r, c, v) in data {
            m.set(r, c, Rat::int(v));
        }
        m
    }

    #[test]
    fn rank_examples() {
        assert_eq!(SparseMatrix::<Rat>::zero(3, 4).rank(), 0);
        assert_eq!(SparseMatrix::<Rat>::identity(5).rank(), 5);
        let ones = mat(2, 2, &[(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]);
        assert_eq!(ones.rank(), 1);
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let m = mat(3, 4, &[(0, 0, 2), (0, 3, -1), (1, 1, 3), (2, 1, 6), (2, 3, 5)]);
        assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_and_solve() {
        let m = mat(2, 3, &[(0, 0, 1), (0, 1, 1), (1, 2, 1)]);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        // check M * k = 0
        for k in &ker {
            for r in 0..m.rows {
                let mut acc = Rat::zero();
                for c in 0..m.cols {
                    acc = acc.add(&m.get(r, c).mul(&k[c]));
                }
                assert!(acc.is_zero());
            }
        }
        let sol = m.solve(&[Rat::int(3), Rat::int(4)]).unwrap();
        assert_eq!(sol[2], Rat::int(4));
        // inconsistent system
        let m2 = mat(2, 1, &[(0, 0, 1), (1, 0, 1)]);
        assert!(m2.solve(&[Rat::int(0), Rat::int(1)]).is_none());
    }

    #[test]
    fn homology_examples() {
        // identity map K -> K: both dims vanish
        let d = mat(1, 1, &[(0, 0, 1)]);
        assert_eq!(homology_dims(&[1, 1], &[d]).unwrap(), vec![0, 0]);

        // zero differentials leave dimensions untouched
        let z01 = SparseMatrix::<Rat>::zero(2, 1);
        let z12 = SparseMatrix::<Rat>::zero(1, 2);
        assert_eq!(homology_dims(&[1, 2, 1], &[z01, z12]).unwrap(), vec![1, 2, 1]);

        // the weight (-1,-1) Čech piece of the punctured plane: 0 -> K
        let d = SparseMatrix::<Rat>::zero(1, 0);
        assert_eq!(homology_dims(&[0, 1], &[d]).unwrap(), vec![0, 1]);
    }

    #[test]
    fn homology_rejects_nonzero_composite() {
        let d0 = mat(1, 1, &[(0, 0, 1)]);
        let d1 = mat(1, 1, &[(0, 0, 1)]);
        assert_eq!(
            homology_dims(&[1, 1, 1], &[d0, d1]),
            Err(LinalgError::NotAComplex(0, 1))
        );
    }

    #[test]
    fn euler_characteristic_consistency() {
        // boundary maps of a filled triangle, cochain orientation
        let d0 = mat(3, 3, &[(0, 0, -1), (0, 1, 1), (1, 0, -1), (1, 2, 1), (2, 1, -1), (2, 2, 1)]);
        let d1 = mat(1, 3, &[(0, 0, 1), (0, 1, -1), (0, 2, 1)]);
        let dims = [3, 3, 1];
        let h = homology_dims(&dims, &[d0, d1]).unwrap();
        let chi_c: i64 = dims.iter().enumerate().map(|(i, &d)| (-1i64).pow(i as u32) * d as i64).sum();
        let chi_h: i64 = h.iter().enumerate().map(|(i, &d)| (-1i64).pow(i as u32) * d as i64).sum();
        assert_eq!(chi_c, chi_h);
        assert_eq!(h, vec![1, 0, 0]);
    }

    #[test]
    fn prime_field_rank_agrees() {
        let m = mat(3, 3, &[(0, 0, 1), (0, 2, -1), (1, 1, 1), (2, 0, 1), (2, 2, -1)]);
        let mp = m.reduce_mod(DEFAULT_PRIME).unwrap();
        assert_eq!(m.rank(), mp.rank());
    }
}
