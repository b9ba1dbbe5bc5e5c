//! Commutativity and set-coherence criteria.
//!
//! The decisive test is the fourth-order gap
//! `Δ₁₁₂₂ − Δ₁₂₁₂ = tr(ρ₁²ρ₂²) − tr(ρ₁ρ₂ρ₁ρ₂) = ½‖[ρ₁, ρ₂]‖₂²`, which is
//! nonnegative and vanishes exactly when the two operators commute. A set of
//! states is set incoherent iff every pair has zero gap.
//!
//! The remaining checks are the weaker or dimension-dependent witnesses that
//! sit next to it: qubit overlap polynomials, Gram ranks of Bloch vectors,
//! the three-cycle event-graph facets, positivity of invariants and the
//! imaginarity bound on third-order invariants.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{bargmann_invariant, Word};
use crate::numkernel::{chain_product_trace, hermitian_eig, ComplexMatrix};
use crate::states::{bloch_map, spectral_profile, BlochConvention, PositiveOperator};

/// Default tolerance on the commutator gap.
pub const GAP_COMMUTE_TOL: f64 = 1e-10;
/// Imaginary residue on invariants known to be real beyond which input is
/// rejected, per unit of `‖A‖₂²‖B‖₂²`. Smaller residues are dropped.
pub const REAL_RESIDUE_ERROR: f64 = 1e-8;
/// Default slack tolerance on polytope facets.
pub const FACET_TOL: f64 = 1e-9;
/// Default relative threshold on Gram eigenvalues when counting rank.
pub const GRAM_RANK_TOL: f64 = 1e-9;
/// Slack allowed on the imaginarity bound.
pub const IMAGINARITY_SLACK: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    SetIncoherent,
    SetCoherent,
}

/// Fourth-order invariants of one pair and their difference.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairGap {
    /// 1-based labels of the pair.
    pub l: usize,
    pub k: usize,
    pub delta_llkk: f64,
    pub delta_lklk: f64,
    pub gap: f64,
    pub commutes: bool,
}

/// Real part of an invariant the theory guarantees to be real.
fn real_invariant(z: Complex64, scale: f64, what: &str) -> Result<f64> {
    let limit = REAL_RESIDUE_ERROR * scale.max(1.0);
    if z.im.abs() > limit {
        return Err(Error::NumericInconsistency(format!(
            "{what} should be real but has imaginary part {:e} (limit {limit:e})",
            z.im
        )));
    }
    Ok(z.re)
}

fn gap_for<M: AsRef<ComplexMatrix>>(
    a: &M,
    b: &M,
    labels: (usize, usize),
    tol: f64,
) -> Result<PairGap> {
    let (a, b) = (a.as_ref(), b.as_ref());
    let llkk = chain_product_trace(&[a, a, b, b])?;
    let lklk = chain_product_trace(&[a, b, a, b])?;
    // invariants of size ~‖a‖²‖b‖² carry proportionally larger rounding residue
    let scale = a.frobenius_norm().powi(2) * b.frobenius_norm().powi(2);
    let delta_llkk = real_invariant(llkk, scale, "tr(A²B²)")?;
    let delta_lklk = real_invariant(lklk, scale, "tr(ABAB)")?;
    let gap = delta_llkk - delta_lklk;
    Ok(PairGap {
        l: labels.0,
        k: labels.1,
        delta_llkk,
        delta_lklk,
        gap,
        commutes: gap <= tol,
    })
}

/// `tr(A²B²) − tr(ABAB)` for two Hermitian operators.
///
/// Positivity is not required. The pair is reported with labels (1, 2).
pub fn commutator_gap<M: AsRef<ComplexMatrix>>(a: &M, b: &M, tol: f64) -> Result<PairGap> {
    gap_for(a, b, (1, 2), tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Full,
    Reduced,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoherenceReport {
    pub n: usize,
    pub pairs: Vec<PairGap>,
    pub verdict: Verdict,
    pub mode: Mode,
    /// 1-based label of the reference state in reduced mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<usize>,
    pub invariant_count: usize,
}

impl CoherenceReport {
    fn assemble(n: usize, pairs: Vec<PairGap>, mode: Mode, reference: Option<usize>) -> Self {
        let verdict = if pairs.iter().all(|p| p.commutes) {
            Verdict::SetIncoherent
        } else {
            Verdict::SetCoherent
        };
        let invariant_count = 2 * pairs.len();
        Self {
            n,
            pairs,
            verdict,
            mode,
            reference,
            invariant_count,
        }
    }

    /// Largest gap over the evaluated pairs.
    pub fn max_gap(&self) -> f64 {
        self.pairs.iter().map(|p| p.gap).fold(0.0, f64::max)
    }
}

fn check_uniform_dim<M: AsRef<ComplexMatrix>>(states: &[M]) -> Result<()> {
    if let Some(first) = states.first() {
        let d = first.as_ref().dim();
        if let Some(bad) = states.iter().position(|s| s.as_ref().dim() != d) {
            return Err(Error::Shape(format!(
                "state {} has dimension {}, expected {d}",
                bad + 1,
                states[bad].as_ref().dim()
            )));
        }
    }
    Ok(())
}

/// Decides set coherence from all `n(n−1)/2` pair gaps.
pub fn set_coherence_decide<M: AsRef<ComplexMatrix>>(
    states: &[M],
    tol: f64,
) -> Result<CoherenceReport> {
    if states.is_empty() {
        return Err(Error::Argument("need at least one state".into()));
    }
    check_uniform_dim(states)?;
    let n = states.len();
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push(gap_for(&states[i], &states[j], (i + 1, j + 1), tol)?);
        }
    }
    Ok(CoherenceReport::assemble(n, pairs, Mode::Full, None))
}

/// Decides set coherence from the `n − 1` gaps against a non-degenerate reference.
///
/// `reference` is a 0-based index. If the reference has a simple spectrum,
/// every state commuting with it is diagonal in its eigenbasis, so these
/// pairs settle the whole set.
pub fn reduced_set_coherence(
    states: &[PositiveOperator],
    reference: usize,
    tol: f64,
    gap_tol: f64,
) -> Result<CoherenceReport> {
    let n = states.len();
    if reference >= n {
        return Err(Error::Argument(format!(
            "reference index {reference} out of range for {n} states"
        )));
    }
    check_uniform_dim(states)?;
    let profile = spectral_profile(&states[reference], gap_tol);
    if !profile.non_degenerate {
        return Err(Error::Precondition(format!(
            "reference state {} is degenerate: min eigenvalue gap {:e} <= {gap_tol:e}",
            reference + 1,
            profile.min_gap
        )));
    }
    let pairs = (0..n)
        .filter(|&i| i != reference)
        .map(|i| gap_for(&states[reference], &states[i], (reference + 1, i + 1), tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoherenceReport::assemble(
        n,
        pairs,
        Mode::Reduced,
        Some(reference + 1),
    ))
}

/// `tr(ρ₁²ρ₂²)` of two qubit states from their overlaps.
pub fn qubit_delta1122(d11: f64, d22: f64, d12: f64) -> f64 {
    d12 + 0.5 * (d11 * d22 - 1.0)
}

/// `tr(ρ₁ρ₂ρ₁ρ₂)` of two qubit states from their overlaps.
pub fn qubit_delta1212(d11: f64, d22: f64, d12: f64) -> f64 {
    d12 * d12 + 0.5 * (d11 + d22 - d11 * d22 - 1.0)
}

/// Notes on overlap values outside the range reachable by normalized qubits.
///
/// Estimated overlaps may stray outside it, so these are warnings only.
pub fn qubit_range_warnings(d11: f64, d22: f64, d12: f64) -> Vec<String> {
    let mut out = Vec::new();
    for (name, v) in [("d11", d11), ("d22", d22)] {
        if !(0.5..=1.0).contains(&v) {
            out.push(format!(
                "{name} = {v} outside the qubit purity range [1/2, 1]"
            ));
        }
    }
    if !(0.0..=1.0).contains(&d12) {
        out.push(format!("d12 = {d12} outside [0, 1]"));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QubitCheck {
    /// `|(d12 − ½)² − (d11 − ½)(d22 − ½)|`.
    pub residual: f64,
    pub commutes: bool,
    pub warnings: Vec<String>,
}

/// Qubit commutativity from purities and overlap alone.
pub fn qubit_criterion(d11: f64, d22: f64, d12: f64, tol: f64) -> QubitCheck {
    let residual = ((d12 - 0.5).powi(2) - (d11 - 0.5) * (d22 - 0.5)).abs();
    QubitCheck {
        residual,
        commutes: residual <= tol,
        warnings: qubit_range_warnings(d11, d22, d12),
    }
}

/// Gram matrix `G_ij = ⟨rᵢ, rⱼ⟩` of Bloch vectors.
pub fn gram_bloch(
    states: &[PositiveOperator],
    convention: BlochConvention,
) -> Result<ComplexMatrix> {
    if states.is_empty() {
        return Err(Error::Argument("need at least one state".into()));
    }
    check_uniform_dim(states)?;
    let vectors = states
        .iter()
        .map(|s| bloch_map(s, convention))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<f64>> = vectors
        .iter()
        .map(|a| vectors.iter().map(|b| a.dot(b)).collect())
        .collect();
    ComplexMatrix::from_real_rows(&rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramReport {
    pub dim: usize,
    pub convention: BlochConvention,
    pub gram: Vec<Vec<f64>>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub rank: usize,
    /// `d − 1`.
    pub rank_bound: usize,
    pub necessary_condition_passed: bool,
    /// Whether the rank test is also sufficient (qubits only).
    pub sufficient: bool,
    /// Present only when the rank test is decisive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

/// Rank test on the Bloch Gram matrix with the default convention for the dimension.
pub fn gram_rank_criterion(states: &[PositiveOperator], tol: f64) -> Result<GramReport> {
    let dim = states
        .first()
        .ok_or_else(|| Error::Argument("need at least one state".into()))?
        .dim();
    gram_rank_criterion_with(states, BlochConvention::default_for(dim), tol)
}

/// Rank test on the Bloch Gram matrix.
///
/// Rank counts eigenvalues above `tol × λ_max`. For qubits rank ≤ 1 decides
/// set incoherence; in higher dimension rank ≤ d − 1 is only necessary and no
/// verdict is given.
pub fn gram_rank_criterion_with(
    states: &[PositiveOperator],
    convention: BlochConvention,
    tol: f64,
) -> Result<GramReport> {
    let gram = gram_bloch(states, convention)?;
    let dim = states[0].dim();
    let es = hermitian_eig(&gram, 1e-12)?;
    let max_eig = es.eigenvalues.last().copied().unwrap_or(0.0);
    let rank = if max_eig <= f64::MIN_POSITIVE {
        0
    } else {
        es.eigenvalues
            .iter()
            .filter(|&&x| x > tol * max_eig)
            .count()
    };
    let rank_bound = dim.saturating_sub(1);
    let passed = rank <= rank_bound;
    let sufficient = dim == 2;
    let verdict = sufficient.then_some(if passed {
        Verdict::SetIncoherent
    } else {
        Verdict::SetCoherent
    });
    Ok(GramReport {
        dim,
        convention,
        gram: gram
            .rows()
            .iter()
            .map(|r| r.iter().map(|z| z.re).collect())
            .collect(),
        eigenvalues: es.eigenvalues,
        rank,
        rank_bound,
        necessary_condition_passed: passed,
        sufficient,
        verdict,
    })
}

/// Membership of overlap triples in the three-cycle event-graph polytope.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FacetReport {
    /// `(z₁₂, z₁₃, z₂₃)`.
    pub point: [f64; 3],
    /// `1 − (z₁₂ + z₁₃ − z₂₃)`, `1 − (z₁₂ − z₁₃ + z₂₃)`, `1 − (−z₁₂ + z₁₃ + z₂₃)`.
    pub facet_slacks: [f64; 3],
    pub box_ok: bool,
    pub member: bool,
}

pub fn c3_facet_check(z12: f64, z13: f64, z23: f64, tol: f64) -> FacetReport {
    let facet_slacks = [
        1.0 - (z12 + z13 - z23),
        1.0 - (z12 - z13 + z23),
        1.0 - (-z12 + z13 + z23),
    ];
    let box_ok = [z12, z13, z23].iter().all(|&z| z >= -tol && z <= 1.0 + tol);
    let member = box_ok && facet_slacks.iter().all(|&s| s >= -tol);
    FacetReport {
        point: [z12, z13, z23],
        facet_slacks,
        box_ok,
        member,
    }
}

/// Whether invariants come from normalized states or from the unnormalized cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Normalized,
    Cone,
}

/// Membership of `(z₁₁₂₂, z₁₂₁₂)` in the incoherent set for pairs: the
/// diagonal of the unit square, or the nonnegative diagonal ray in cone mode.
pub fn winc_membership(z1122: f64, z1212: f64, tol: f64, normalization: Normalization) -> bool {
    let on_diagonal = (z1122 - z1212).abs() <= tol;
    let in_range = |z: f64| match normalization {
        Normalization::Normalized => z >= -tol && z <= 1.0 + tol,
        Normalization::Cone => z >= -tol,
    };
    on_diagonal && in_range(z1122) && in_range(z1212)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImaginarityWitness {
    /// `2|Im tr(ρ_l ρ_k ρ_s)|`.
    pub lhs: f64,
    /// `√tr(ρ_l²) · √(2(Δ_kkss − Δ_ksks))`.
    pub rhs: f64,
    pub satisfied: bool,
    pub im_delta: f64,
}

/// Upper bound on the imaginary part of `tr(ρ_l ρ_k ρ_s)` from the `(k, s)` commutator gap.
pub fn imaginarity_witness<M: AsRef<ComplexMatrix>>(
    l: &M,
    k: &M,
    s: &M,
) -> Result<ImaginarityWitness> {
    let triple = chain_product_trace(&[l.as_ref(), k.as_ref(), s.as_ref()])?;
    let purity = chain_product_trace(&[l.as_ref(), l.as_ref()])?.re;
    let pair = gap_for(k, s, (2, 3), 0.0)?;
    let radicand = 2.0 * pair.gap;
    if radicand < -1e-10 {
        return Err(Error::NumericInconsistency(format!(
            "commutator norm estimate {radicand:e} is negative"
        )));
    }
    let lhs = 2.0 * triple.im.abs();
    let rhs = purity.max(0.0).sqrt() * radicand.max(0.0).sqrt();
    Ok(ImaginarityWitness {
        lhs,
        rhs,
        satisfied: lhs <= rhs + IMAGINARITY_SLACK,
        im_delta: triple.im,
    })
}

/// `tr(ρ₁ρ₂ρ₃ρ₄)` of four qubit states from their Pauli Bloch vectors.
pub fn qubit_fourth_order(r1: &[f64; 3], r2: &[f64; 3], r3: &[f64; 3], r4: &[f64; 3]) -> Complex64 {
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let add = |a: &[f64; 3], b: &[f64; 3]| [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
    let a0 = (1.0 + dot(r1, r2)) * (1.0 + dot(r3, r4)) - (1.0 - dot(r1, r3)) * (1.0 - dot(r2, r4))
        + (1.0 + dot(r1, r4)) * (1.0 + dot(r2, r3));
    let (u, v, w) = (add(r1, r2), add(r2, r3), add(r3, r4));
    let b0 = u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0]);
    Complex64::new(a0, b0) / 8.0
}

/// Words whose invariant is not a real number in `[−tol, 1 + tol]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    pub checked: usize,
    pub violations: Vec<(Word, Complex64)>,
    pub passed: bool,
}

/// Checks that every listed invariant is real and in `[0, 1]`, as it must be for
/// any set-incoherent collection of normalized states.
pub fn invariant_positivity_check<M: AsRef<ComplexMatrix>>(
    states: &[M],
    words: &[Word],
    tol: f64,
) -> Result<PositivityReport> {
    let mut violations = Vec::new();
    for w in words {
        let z = bargmann_invariant(states, w)?;
        if z.im.abs() > tol || z.re < -tol || z.re > 1.0 + tol {
            violations.push((w.clone(), z));
        }
    }
    Ok(PositivityReport {
        checked: words.len(),
        passed: violations.is_empty(),
        violations,
    })
}
