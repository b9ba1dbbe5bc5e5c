//! Validated positive operators and the maps built on them: Bloch vectors,
//! spectral profiles and seeded random ensembles.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{chain_product_trace, hermitian_eig, ComplexMatrix, C_ZERO};

/// Default hermiticity tolerance (entrywise).
pub const HERM_TOL: f64 = 1e-12;
/// Default tolerance on negative eigenvalues.
pub const PSD_TOL: f64 = 1e-10;
/// Default tolerance on `|tr ρ − 1|` for the normalized flag.
pub const NORM_TOL: f64 = 1e-9;
/// Default spectral gap below which adjacent eigenvalues count as degenerate.
pub const GAP_TOL: f64 = 1e-8;

/// A Hermitian positive semidefinite matrix with positive trace.
///
/// Need not have unit trace; `normalized` records whether it does.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveOperator {
    matrix: ComplexMatrix,
    trace: f64,
    normalized: bool,
    psd_slack: f64,
}

impl PositiveOperator {
    /// Validates with the default tolerances.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        validate_state(matrix, NORM_TOL, PSD_TOL)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Smallest eigenvalue seen during validation.
    pub fn psd_slack(&self) -> f64 {
        self.psd_slack
    }

    /// Pads the operator with a zero block up to `dim`.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.embed(dim)?,
            trace: self.trace,
            normalized: self.normalized,
            psd_slack: self.psd_slack.min(0.0),
        })
    }

    /// Multiplies by a positive scalar.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Argument(format!(
                "scale factor {factor} must be positive"
            )));
        }
        Self::new(self.matrix.scale_real(factor))
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, unitary: &ComplexMatrix) -> Result<Self> {
        let m = unitary.matmul(&self.matrix)?.matmul(&unitary.adjoint())?;
        Self::new(m)
    }
}

impl AsRef<ComplexMatrix> for PositiveOperator {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Checks hermiticity, positivity and trace, and records normalization.
pub fn validate_state(
    matrix: ComplexMatrix,
    norm_tol: f64,
    psd_tol: f64,
) -> Result<PositiveOperator> {
    let es = hermitian_eig(&matrix, HERM_TOL)?;
    let min_eig = es.eigenvalues[0];
    if min_eig < -psd_tol {
        return Err(Error::NotPositive {
            eigenvalue: min_eig,
            tol: psd_tol,
        });
    }
    let trace = matrix.trace().re;
    if trace <= 0.0 {
        return Err(Error::NonPositiveTrace { trace });
    }
    Ok(PositiveOperator {
        matrix,
        trace,
        normalized: (trace - 1.0).abs() <= norm_tol,
        psd_slack: min_eig,
    })
}

/// `tr(ρ²)`.
pub fn purity(state: &PositiveOperator) -> f64 {
    chain_product_trace(&[state, state])
        .expect("a matrix always matches its own dimension")
        .re
}

/// Which traceless Hermitian basis a Bloch vector refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlochConvention {
    /// Qubits only: `ρ = (I + r·σ)/2`, components `tr(ρX), tr(ρY), tr(ρZ)`.
    Pauli,
    /// Any dimension: `r_a = tr(ρ T_a)` with `tr(T_a T_b) = δ_ab`.
    Orthonormal,
}

impl BlochConvention {
    /// Pauli for qubits, orthonormal otherwise.
    pub fn default_for(dim: usize) -> Self {
        if dim == 2 {
            Self::Pauli
        } else {
            Self::Orthonormal
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Pauli => "pauli",
            Self::Orthonormal => "orthonormal",
        }
    }
}

impl fmt::Display for BlochConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BlochConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pauli" => Ok(Self::Pauli),
            "orthonormal" => Ok(Self::Orthonormal),
            _ => Err(Error::UnknownName {
                kind: "Bloch convention",
                name: s.into(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlochVector {
    pub dim: usize,
    pub components: Vec<f64>,
    pub convention: BlochConvention,
}

impl BlochVector {
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(
            self.components.len(),
            other.components.len(),
            "Bloch vector length mismatch"
        );
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// The orthonormal traceless Hermitian basis of `d×d` matrices, `d² − 1` elements.
///
/// Enumeration order: the symmetric family `(|j⟩⟨k| + |k⟩⟨j|)/√2` for `j < k`
/// in lexicographic order, then the antisymmetric family
/// `(−i|j⟩⟨k| + i|k⟩⟨j|)/√2` in the same order, then the diagonal family
/// `(Σ_{m<l} |m⟩⟨m| − l|l⟩⟨l|)/√(l(l+1))` for `l = 1, …, d−1`.
pub fn orthonormal_traceless_basis(dim: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(dim * dim - 1);
    let amp = 1.0 / SQRT_2;
    for j in 0..dim {
        for k in (j + 1)..dim {
            let mut t = ComplexMatrix::zeros(dim);
            t.set(j, k, Complex64::new(amp, 0.0));
            t.set(k, j, Complex64::new(amp, 0.0));
            basis.push(t);
        }
    }
    for j in 0..dim {
        for k in (j + 1)..dim {
            let mut t = ComplexMatrix::zeros(dim);
            t.set(j, k, Complex64::new(0.0, -amp));
            t.set(k, j, Complex64::new(0.0, amp));
            basis.push(t);
        }
    }
    for l in 1..dim {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; dim];
        diag[..l].iter_mut().for_each(|x| *x = 1.0 / norm);
        diag[l] = -(l as f64) / norm;
        basis.push(ComplexMatrix::diagonal(&diag));
    }
    basis
}

/// Bloch vector of a state under `convention`.
pub fn bloch_map(state: &PositiveOperator, convention: BlochConvention) -> Result<BlochVector> {
    let m = state.matrix();
    let dim = m.dim();
    let components = match convention {
        BlochConvention::Pauli => {
            if dim != 2 {
                return Err(Error::Convention {
                    convention: "pauli",
                    dim,
                });
            }
            let off = m.get(0, 1);
            // tr(ρX) = 2 Re ρ01, tr(ρY) = −2 Im ρ01, tr(ρZ) = ρ00 − ρ11
            vec![2.0 * off.re, -2.0 * off.im, m.get(0, 0).re - m.get(1, 1).re]
        }
        BlochConvention::Orthonormal => {
            // Closed forms of tr(ρ T_a) in the basis order above.
            let mut sym = Vec::new();
            let mut anti = Vec::new();
            for j in 0..dim {
                for k in (j + 1)..dim {
                    let z = m.get(j, k);
                    sym.push(SQRT_2 * z.re);
                    anti.push(-SQRT_2 * z.im);
                }
            }
            let mut diag = Vec::with_capacity(dim.saturating_sub(1));
            let mut partial = 0.0;
            for l in 1..dim {
                partial += m.get(l - 1, l - 1).re;
                let norm = ((l * (l + 1)) as f64).sqrt();
                diag.push((partial - l as f64 * m.get(l, l).re) / norm);
            }
            sym.into_iter().chain(anti).chain(diag).collect()
        }
    };
    Ok(BlochVector {
        dim,
        components,
        convention,
    })
}

/// Qubit state `(I + r·σ)/2`.
pub fn qubit_from_bloch(r: [f64; 3]) -> Result<PositiveOperator> {
    let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || norm > 1.0 + 1e-12 {
        return Err(Error::NotPositive {
            eigenvalue: (1.0 - norm) / 2.0,
            tol: 1e-12,
        });
    }
    let m = ComplexMatrix::from_rows(&[
        vec![
            Complex64::new((1.0 + r[2]) / 2.0, 0.0),
            Complex64::new(r[0] / 2.0, -r[1] / 2.0),
        ],
        vec![
            Complex64::new(r[0] / 2.0, r[1] / 2.0),
            Complex64::new((1.0 - r[2]) / 2.0, 0.0),
        ],
    ])?;
    PositiveOperator::new(m)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralProfile {
    pub eigenvalues: Vec<f64>,
    /// Smallest adjacent gap; infinite for a 1×1 operator.
    pub min_gap: f64,
    pub non_degenerate: bool,
}

pub fn spectral_profile(state: &PositiveOperator, gap_tol: f64) -> SpectralProfile {
    let es = hermitian_eig(state.matrix(), HERM_TOL).expect("validated states are Hermitian");
    let min_gap = es
        .eigenvalues
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    SpectralProfile {
        non_degenerate: min_gap > gap_tol,
        min_gap,
        eigenvalues: es.eigenvalues,
    }
}

/// Random state families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    /// `GG†/tr(GG†)` with `G` a square complex Ginibre matrix.
    GinibreMixed,
    /// Projector onto a normalized complex Gaussian vector.
    HaarPure,
    /// Diagonal with a flat-Dirichlet spectrum.
    RandomDiagonal,
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ginibre_mixed" => Ok(Self::GinibreMixed),
            "haar_pure" => Ok(Self::HaarPure),
            "random_diagonal" => Ok(Self::RandomDiagonal),
            _ => Err(Error::UnknownName {
                kind: "ensemble",
                name: s.into(),
            }),
        }
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / SQRT_2
}

/// Square matrix of i.i.d. standard complex Gaussians.
pub fn ginibre_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let entries = (0..dim * dim).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(dim, entries).expect("Gaussian samples are finite")
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre_matrix(dim, rng);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Haar-random unitary: Gram-Schmidt on the columns of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre_matrix(dim, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        // two passes of modified Gram-Schmidt for orthogonality at 1e-15
        for _ in 0..2 {
            for u in &cols {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(u).for_each(|(x, a)| *x -= proj * a);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    let mut u = ComplexMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u.set(i, j, *z);
        }
    }
    u
}

fn dirichlet_flat<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// Normalizes a Hermitian PSD matrix and wraps it, restoring exact hermiticity.
fn normalized_state(m: ComplexMatrix) -> PositiveOperator {
    let herm = (&m + &m.adjoint()).scale_real(0.5);
    let tr = herm.trace().re;
    PositiveOperator::new(herm.div_real(tr)).expect("construction yields a valid state")
}

/// Draws a normalized state from `ensemble`.
pub fn random_state<R: Rng + ?Sized>(
    dim: usize,
    ensemble: Ensemble,
    rng: &mut R,
) -> PositiveOperator {
    assert!(dim >= 1, "dimension must be positive");
    match ensemble {
        Ensemble::GinibreMixed => {
            let g = ginibre_matrix(dim, rng);
            normalized_state(&g * &g.adjoint())
        }
        Ensemble::HaarPure => {
            let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
            normalized_state(ComplexMatrix::projector(&v).expect("same length"))
        }
        Ensemble::RandomDiagonal => {
            normalized_state(ComplexMatrix::diagonal(&dirichlet_flat(dim, rng)))
        }
    }
}

/// `n` states `U Dᵢ U†` sharing one Haar-random eigenbasis `U`.
pub fn commuting_set<R: Rng + ?Sized>(dim: usize, n: usize, rng: &mut R) -> Vec<PositiveOperator> {
    let u = random_unitary(dim, rng);
    let u_dag = u.adjoint();
    (0..n)
        .map(|_| {
            let d = ComplexMatrix::diagonal(&dirichlet_flat(dim, rng));
            normalized_state(&(&u * &d) * &u_dag)
        })
        .collect()
}

/// Computational basis vector `|index⟩` in dimension `dim`.
pub fn basis_ket(dim: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![C_ZERO; dim];
    v[index] = Complex64::new(1.0, 0.0);
    v
}

/// Normalized projector onto `v`.
pub fn pure_state(v: &[Complex64]) -> Result<PositiveOperator> {
    let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if norm_sq <= 0.0 {
        return Err(Error::Argument("zero vector has no pure state".into()));
    }
    PositiveOperator::new(ComplexMatrix::projector(v)?.div_real(norm_sq))
}
