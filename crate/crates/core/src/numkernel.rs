//! Dense complex matrix kernel.
//!
//! Square row-major matrices of [`Complex64`] with the handful of operations
//! the rest of the crate needs: products, traces, adjoints, Hilbert-Schmidt
//! norms and a cyclic Jacobi eigensolver for Hermitian input.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative off-diagonal mass at which the Jacobi iteration stops.
pub const JACOBI_REL_TOL: f64 = 1e-14;
/// Maximum number of Jacobi sweeps before giving up.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// A square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Argument("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Shape(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if let Some(pos) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Argument(format!(
                "non-finite entry at ({}, {})",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::Shape(format!(
                "row {bad} has {} entries, expected {dim}",
                rows[bad].len()
            )));
        }
        Self::new(dim, rows.iter().flatten().copied().collect())
    }

    /// Real matrix from nested rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            entries: vec![C_ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = C_ONE;
        }
        m
    }

    /// Diagonal matrix with the given real diagonal.
    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * diag.len() + i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// The outer product `|v⟩⟨w|`.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Result<Self> {
        if v.len() != w.len() {
            return Err(Error::Shape(format!(
                "outer product of vectors of length {} and {}",
                v.len(),
                w.len()
            )));
        }
        let dim = v.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in v {
            for b in w {
                entries.push(a * b.conj());
            }
        }
        Self::new(dim, entries)
    }

    /// The projector `|v⟩⟨v|` (no normalization applied).
    pub fn projector(v: &[Complex64]) -> Result<Self> {
        Self::outer(v, v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    /// Column `col` as a vector.
    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.entries[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Divides every entry by `divisor`.
    pub fn div_real(&self, divisor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z / divisor).collect(),
        }
    }

    /// Matrix product, checking dimensions.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        check_same_dim(self, rhs)?;
        Ok(self.matmul_unchecked(rhs))
    }

    fn matmul_unchecked(&self, rhs: &Self) -> Self {
        let d = self.dim;
        let mut out = vec![C_ZERO; d * d];
        for i in 0..d {
            let row = &self.entries[i * d..(i + 1) * d];
            let out_row = &mut out[i * d..(i + 1) * d];
            for (k, a) in row.iter().enumerate() {
                if *a == C_ZERO {
                    continue;
                }
                let rhs_row = &rhs.entries[k * d..(k + 1) * d];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self {
            dim: d,
            entries: out,
        }
    }

    /// `self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        Ok(&self.matmul(rhs)? - &rhs.matmul(self)?)
    }

    /// Largest entrywise `|A − A†|`.
    pub fn max_hermitian_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                let dev = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Frobenius norm, `sqrt(tr(A†A))`.
    pub fn frobenius_norm(&self) -> f64 {
        hs_norm_sq(self).sqrt()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Embeds the matrix in the top-left block of a `new_dim` matrix, padding with zeros.
    pub fn embed(&self, new_dim: usize) -> Result<Self> {
        if new_dim < self.dim {
            return Err(Error::Shape(format!(
                "cannot embed a {0}x{0} matrix into dimension {new_dim}",
                self.dim
            )));
        }
        let mut out = Self::zeros(new_dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(i, j));
            }
        }
        Ok(out)
    }
}

fn check_same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::Shape(format!(
            "dimension mismatch: {0}x{0} vs {1}x{1}",
            a.dim, b.dim
        )));
    }
    Ok(())
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({0}x{0}) [", self.dim)?;
        for row in self.entries.chunks(self.dim) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on dimension mismatch; use [`ComplexMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.matmul_unchecked(rhs)
    }
}

impl AsRef<ComplexMatrix> for ComplexMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        self
    }
}

/// `tr(M₁M₂⋯Mₖ)`, accumulating the product strictly left to right.
pub fn chain_product_trace<M: AsRef<ComplexMatrix>>(matrices: &[M]) -> Result<Complex64> {
    let (first, rest) = matrices
        .split_first()
        .ok_or_else(|| Error::Argument("chain_product_trace needs at least one matrix".into()))?;
    let first = first.as_ref();
    for m in rest {
        check_same_dim(first, m.as_ref())?;
    }
    match rest {
        [] => Ok(first.trace()),
        [only] => Ok(trace_of_product(first, only.as_ref())),
        [init @ .., last] => {
            let mut acc = first.clone();
            for m in init {
                acc = acc.matmul_unchecked(m.as_ref());
            }
            Ok(trace_of_product(&acc, last.as_ref()))
        }
    }
}

/// `tr(AB)` without forming the product.
fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let d = a.dim;
    let mut acc = C_ZERO;
    for i in 0..d {
        for k in 0..d {
            acc += a.entries[i * d + k] * b.entries[k * d + i];
        }
    }
    acc
}

/// `tr(A†A)`, the squared Hilbert-Schmidt norm.
pub fn hs_norm_sq(a: &ComplexMatrix) -> f64 {
    a.entries.iter().map(|z| z.norm_sqr()).sum()
}

/// Spectrum and eigenvectors of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector for `eigenvalues[j]`.
    pub eigenvectors: ComplexMatrix,
    pub sweeps: usize,
}

impl EigenSystem {
    /// `V·diag(λ)·V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for i in 0..d {
            for j in 0..d {
                scaled.set(i, j, v.get(i, j) * self.eigenvalues[j]);
            }
        }
        &scaled * &v.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Fails with [`Error::NotHermitian`] if `|A − A†|` exceeds `herm_tol` anywhere.
/// The input is symmetrized before iterating.
pub fn hermitian_eig(a: &ComplexMatrix, herm_tol: f64) -> Result<EigenSystem> {
    let dev = a.max_hermitian_deviation();
    if dev > herm_tol {
        return Err(Error::NotHermitian {
            max_deviation: dev,
            tol: herm_tol,
        });
    }
    let d = a.dim;
    let mut m = a.clone();
    for i in 0..d {
        for j in i..d {
            let avg = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            m.set(i, j, avg);
            m.set(j, i, avg.conj());
        }
    }
    let mut v = ComplexMatrix::identity(d);
    let threshold = JACOBI_REL_TOL * m.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if off <= threshold {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..d {
            for q in (p + 1)..d {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    let diag: Vec<f64> = (0..d).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(d);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..d {
            eigenvectors.set(r, new_col, v.get(r, old_col));
        }
    }
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
        sweeps,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let d = m.dim;
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                acc += m.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Zeroes `m[p][q]` with the unitary `U = diag(1, e^{-iφ})·R(θ)` on the (p, q) plane,
/// updating `m ← U†mU` and `v ← vU`.
fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = m.get(p, q);
    let r = b.norm();
    if r == 0.0 {
        return;
    }
    let phase = b / r;
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let theta = 0.5 * (2.0 * r).atan2(app - aqq);
    let (s, c) = theta.sin_cos();
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(-s, 0.0);
    let u_qp = phase.conj() * s;
    let u_qq = phase.conj() * c;

    let d = m.dim;
    for k in 0..d {
        let mkp = m.get(k, p);
        let mkq = m.get(k, q);
        m.set(k, p, mkp * u_pp + mkq * u_qp);
        m.set(k, q, mkp * u_pq + mkq * u_qq);
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * u_pp + vkq * u_qp);
        v.set(k, q, vkp * u_pq + vkq * u_qq);
    }
    for k in 0..d {
        let mpk = m.get(p, k);
        let mqk = m.get(q, k);
        m.set(p, k, u_pp.conj() * mpk + u_qp.conj() * mqk);
        m.set(q, k, u_pq.conj() * mpk + u_qq.conj() * mqk);
    }
    m.set(p, q, C_ZERO);
    m.set(q, p, C_ZERO);
    m.set(p, p, Complex64::new(m.get(p, p).re, 0.0));
    m.set(q, q, Complex64::new(m.get(q, q).re, 0.0));
}
