//! Canonical worked examples and their exact expected values.
//!
//! Each [`Fixture`] carries its states and a list of [`Expectation`]s whose
//! values are written as exact fractions and parsed to `f64` on load.
//! [`check`] recomputes every expectation with the library and tabulates the
//! deviations.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use crate::criteria::{
    c3_facet_check, commutator_gap, gram_bloch, gram_rank_criterion, set_coherence_decide, Verdict,
    FACET_TOL, GAP_COMMUTE_TOL, GRAM_RANK_TOL,
};
use crate::error::{Error, Result};
use crate::invariants::{bargmann_invariant, Word};
use crate::numkernel::{hermitian_eig, ComplexMatrix};
use crate::states::{basis_ket, pure_state, qubit_from_bloch, BlochConvention, PositiveOperator};

/// Absolute tolerance for scalar and matrix-entry expectations.
pub const SCALAR_TOL: f64 = 1e-12;
/// Absolute tolerance for eigenvalue lists.
pub const EIGENVALUE_TOL: f64 = 1e-10;

/// Names accepted by [`fixture`].
pub const FIXTURE_NAMES: [&str; 7] = [
    "mub_trio",
    "main_sigma_trio",
    "main_sigma_prime_trio",
    "trine",
    "c4_quartet",
    "emc_rho_pair",
    "emc_sigma_pair",
];

/// A quantity computed from a fixture's states.
#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Invariant(Word),
    /// Commutator gap of the 1-based pair.
    Gap(usize, usize),
    /// Ascending eigenvalues of the orthonormal-convention Bloch Gram matrix,
    /// after embedding the states in `embed_dim`.
    GramEigenvalues {
        embed_dim: usize,
    },
    /// Row-major entries of the orthonormal-convention Bloch Gram matrix.
    GramEntries,
    GramRank,
    /// `z₁₂ + z₁₃ − z₂₃` over the overlaps of a three-state fixture.
    C3FacetValue,
    C3Member,
    Verdict,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Invariant(w) => write!(f, "delta({w})"),
            Self::Gap(l, k) => write!(f, "gap({l},{k})"),
            Self::GramEigenvalues { embed_dim } => write!(f, "gram_eigenvalues(C^{embed_dim})"),
            Self::GramEntries => f.write_str("gram_entries"),
            Self::GramRank => f.write_str("gram_rank"),
            Self::C3FacetValue => f.write_str("z12+z13-z23"),
            Self::C3Member => f.write_str("c3_member"),
            Self::Verdict => f.write_str("verdict"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExpectedValue {
    Scalar(Complex64),
    List(Vec<f64>),
    Count(usize),
    Flag(bool),
    Verdict(Verdict),
}

impl ExpectedValue {
    fn to_json(&self) -> Value {
        match self {
            Self::Scalar(z) if z.im == 0.0 => json!(z.re),
            Self::Scalar(z) => json!([z.re, z.im]),
            Self::List(v) => json!(v),
            Self::Count(n) => json!(n),
            Self::Flag(b) => json!(b),
            Self::Verdict(v) => serde_json::to_value(v).expect("verdict serializes"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expectation {
    pub quantity: Quantity,
    /// The value as written, e.g. `"9/3200"` or `"1/4 + 1/4 i"`.
    pub exact: String,
    pub value: ExpectedValue,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub states: Vec<PositiveOperator>,
    pub expected: Vec<Expectation>,
    pub source: &'static str,
}

fn frac(text: &str) -> f64 {
    let r = Ratio::<i64>::from_str(text.trim())
        .unwrap_or_else(|e| panic!("bad fraction literal '{text}': {e}"));
    *r.numer() as f64 / *r.denom() as f64
}

fn real(quantity: Quantity, text: &str) -> Expectation {
    Expectation {
        quantity,
        exact: text.into(),
        value: ExpectedValue::Scalar(Complex64::new(frac(text), 0.0)),
    }
}

fn complex(quantity: Quantity, re: &str, im: &str) -> Expectation {
    Expectation {
        quantity,
        exact: format!("{re} + {im} i"),
        value: ExpectedValue::Scalar(Complex64::new(frac(re), frac(im))),
    }
}

fn list(quantity: Quantity, items: &[&str]) -> Expectation {
    Expectation {
        quantity,
        exact: items.join(", "),
        value: ExpectedValue::List(items.iter().map(|t| frac(t)).collect()),
    }
}

fn discrete(quantity: Quantity, value: ExpectedValue) -> Expectation {
    let exact = match &value {
        ExpectedValue::Count(n) => n.to_string(),
        ExpectedValue::Flag(b) => b.to_string(),
        ExpectedValue::Verdict(Verdict::SetCoherent) => "set_coherent".into(),
        ExpectedValue::Verdict(Verdict::SetIncoherent) => "set_incoherent".into(),
        other => format!("{other:?}"),
    };
    Expectation {
        quantity,
        exact,
        value,
    }
}

fn inv(letters: &[usize]) -> Quantity {
    Quantity::Invariant(Word::new(letters.to_vec()).expect("fixture words are valid"))
}

fn ket(coeffs: &[(f64, f64)]) -> Vec<Complex64> {
    coeffs
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect()
}

fn pure(v: Vec<Complex64>) -> PositiveOperator {
    pure_state(&v).expect("fixture vectors are nonzero")
}

fn state(m: ComplexMatrix) -> PositiveOperator {
    PositiveOperator::new(m).expect("fixture matrices are valid states")
}

fn emc_rho1() -> PositiveOperator {
    state(ComplexMatrix::diagonal(&[
        frac("1/2"),
        frac("3/8"),
        frac("1/8"),
        0.0,
    ]))
}

fn w23_expectations() -> Vec<Expectation> {
    vec![
        real(inv(&[1, 1]), "13/32"),
        real(inv(&[1, 1, 1]), "23/128"),
        real(inv(&[2, 2]), "137/450"),
        real(inv(&[2, 2, 2]), "31/300"),
        real(inv(&[1, 2]), "67/240"),
        real(inv(&[1, 1, 2]), "223/1920"),
        real(inv(&[1, 2, 2]), "653/7200"),
    ]
}

fn mub_trio() -> Fixture {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Fixture {
        name: "mub_trio",
        states: vec![
            pure(ket(&[(1.0, 0.0), (0.0, 0.0)])),
            pure(ket(&[(h, 0.0), (h, 0.0)])),
            pure(ket(&[(h, 0.0), (0.0, h)])),
        ],
        expected: vec![
            complex(inv(&[1, 2, 3]), "1/4", "1/4"),
            real(inv(&[1, 2]), "1/2"),
            real(inv(&[1, 3]), "1/2"),
            real(inv(&[2, 3]), "1/2"),
            list(
                Quantity::GramEigenvalues { embed_dim: 4 },
                &["1/2", "1/2", "5/4"],
            ),
            discrete(Quantity::C3Member, ExpectedValue::Flag(true)),
            discrete(
                Quantity::Verdict,
                ExpectedValue::Verdict(Verdict::SetCoherent),
            ),
        ],
        source: "qubit eigenstates of Z, X and Y: complex third-order invariant, all overlaps 1/2",
    }
}

fn main_sigma_trio() -> Fixture {
    Fixture {
        name: "main_sigma_trio",
        states: [0, 2, 4].iter().map(|&i| pure(basis_ket(5, i))).collect(),
        expected: vec![
            real(inv(&[1, 2, 3]), "0"),
            discrete(
                Quantity::Verdict,
                ExpectedValue::Verdict(Verdict::SetIncoherent),
            ),
        ],
        source: "orthogonal basis states |0>, |2>, |4> in C^5: zero triple product, incoherent",
    }
}

fn main_sigma_prime_trio() -> Fixture {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Fixture {
        name: "main_sigma_prime_trio",
        states: vec![
            pure(basis_ket(3, 0)),
            pure(ket(&[(h, 0.0), (h, 0.0), (0.0, 0.0)])),
            pure(basis_ket(3, 2)),
        ],
        expected: vec![
            real(inv(&[1, 2, 3]), "0"),
            discrete(
                Quantity::Verdict,
                ExpectedValue::Verdict(Verdict::SetCoherent),
            ),
        ],
        source: "|0>, |+>, |2> in C^3: same zero triple product, but coherent",
    }
}

fn trine() -> Fixture {
    let s = 3f64.sqrt() / 2.0;
    Fixture {
        name: "trine",
        states: [[1.0, 0.0, 0.0], [0.5, s, 0.0], [0.5, -s, 0.0]]
            .iter()
            .map(|&r| qubit_from_bloch(r).expect("unit Bloch vectors"))
            .collect(),
        expected: vec![
            real(inv(&[1, 2]), "3/4"),
            real(inv(&[1, 3]), "3/4"),
            real(inv(&[2, 3]), "1/4"),
            real(Quantity::C3FacetValue, "5/4"),
            discrete(Quantity::C3Member, ExpectedValue::Flag(false)),
            discrete(
                Quantity::Verdict,
                ExpectedValue::Verdict(Verdict::SetCoherent),
            ),
        ],
        source: "trine ensemble: coplanar qubit Bloch vectors violating a three-cycle facet",
    }
}

fn c4_quartet() -> Fixture {
    let half_sum = |i: usize, j: usize| {
        let mut d = [0.0; 4];
        d[i] = 0.5;
        d[j] = 0.5;
        state(ComplexMatrix::diagonal(&d))
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a = ket(&[(h, 0.0), (0.0, 0.0), (h, 0.0), (0.0, 0.0)]);
    let b = ket(&[(0.0, 0.0), (h, 0.0), (0.0, 0.0), (h, 0.0)]);
    let rho4 = (&ComplexMatrix::projector(&a).expect("length 4")
        + &ComplexMatrix::projector(&b).expect("length 4"))
        .scale_real(0.5);
    let mut gram = vec!["0"; 16];
    for i in 0..4 {
        gram[5 * i] = "1/4";
    }
    let mut expected = Vec::new();
    for l in 1..=4 {
        expected.push(real(inv(&[l, l]), "1/2"));
    }
    for l in 1..=4 {
        for k in (l + 1)..=4 {
            expected.push(real(inv(&[l, k]), "1/4"));
        }
    }
    expected.extend([
        real(inv(&[1, 2, 3]), "1/8"),
        real(inv(&[1, 2, 4]), "1/16"),
        real(inv(&[1, 3, 4]), "1/16"),
        real(inv(&[2, 3, 4]), "1/16"),
        real(inv(&[1, 2, 3, 4]), "1/32"),
        list(Quantity::GramEntries, &gram),
        discrete(Quantity::GramRank, ExpectedValue::Count(4)),
        discrete(
            Quantity::Verdict,
            ExpectedValue::Verdict(Verdict::SetCoherent),
        ),
    ]);
    Fixture {
        name: "c4_quartet",
        states: vec![half_sum(0, 1), half_sum(0, 2), half_sum(0, 3), state(rho4)],
        expected,
        source: "four rank-2 states in C^4 whose Bloch Gram matrix has full rank 4",
    }
}

fn emc_rho_pair() -> Fixture {
    let mut rho2 = ComplexMatrix::diagonal(&[frac("4/15"), frac("1/3"), frac("1/6"), frac("7/30")]);
    for (i, j) in [(0, 2), (2, 0), (1, 3), (3, 1)] {
        rho2.set(i, j, Complex64::new(frac("1/10"), 0.0));
    }
    let mut expected = w23_expectations();
    expected.push(real(Quantity::Gap(1, 2), "9/3200"));
    expected.push(discrete(
        Quantity::Verdict,
        ExpectedValue::Verdict(Verdict::SetCoherent),
    ));
    Fixture {
        name: "emc_rho_pair",
        states: vec![emc_rho1(), state(rho2)],
        expected,
        source:
            "noncommuting pair in C^4 sharing every 2- and 3-letter invariant with emc_sigma_pair",
    }
}

fn emc_sigma_pair() -> Fixture {
    let sigma2 =
        ComplexMatrix::diagonal(&[frac("11/30"), frac("2/15"), frac("11/30"), frac("2/15")]);
    let mut expected = w23_expectations();
    expected.push(real(Quantity::Gap(1, 2), "0"));
    expected.push(discrete(
        Quantity::Verdict,
        ExpectedValue::Verdict(Verdict::SetIncoherent),
    ));
    Fixture {
        name: "emc_sigma_pair",
        states: vec![emc_rho1(), state(sigma2)],
        expected,
        source:
            "commuting diagonal pair in C^4 matching emc_rho_pair on all 2- and 3-letter invariants",
    }
}

/// The named fixture.
pub fn fixture(name: &str) -> Result<Fixture> {
    Ok(match name {
        "mub_trio" => mub_trio(),
        "main_sigma_trio" => main_sigma_trio(),
        "main_sigma_prime_trio" => main_sigma_prime_trio(),
        "trine" => trine(),
        "c4_quartet" => c4_quartet(),
        "emc_rho_pair" => emc_rho_pair(),
        "emc_sigma_pair" => emc_sigma_pair(),
        _ => {
            return Err(Error::UnknownName {
                kind: "fixture",
                name: name.into(),
            })
        }
    })
}

pub fn all_fixtures() -> Vec<Fixture> {
    FIXTURE_NAMES
        .iter()
        .map(|n| fixture(n).expect("listed names exist"))
        .collect()
}

fn overlaps3(states: &[PositiveOperator]) -> Result<[f64; 3]> {
    if states.len() != 3 {
        return Err(Error::Argument(format!(
            "three-cycle check needs 3 states, got {}",
            states.len()
        )));
    }
    let z = |l: usize, k: usize| bargmann_invariant(states, &Word::new(vec![l, k])?).map(|d| d.re);
    Ok([z(1, 2)?, z(1, 3)?, z(2, 3)?])
}

/// Evaluates `quantity` on `states`.
pub fn compute(states: &[PositiveOperator], quantity: &Quantity) -> Result<ExpectedValue> {
    Ok(match quantity {
        Quantity::Invariant(w) => ExpectedValue::Scalar(bargmann_invariant(states, w)?),
        Quantity::Gap(l, k) => {
            let (a, b) = (
                states.get(l - 1).ok_or(Error::LetterOutOfRange {
                    letter: *l,
                    n: states.len(),
                })?,
                states.get(k - 1).ok_or(Error::LetterOutOfRange {
                    letter: *k,
                    n: states.len(),
                })?,
            );
            ExpectedValue::Scalar(Complex64::new(
                commutator_gap(a, b, GAP_COMMUTE_TOL)?.gap,
                0.0,
            ))
        }
        Quantity::GramEigenvalues { embed_dim } => {
            let embedded = states
                .iter()
                .map(|s| s.embed(*embed_dim))
                .collect::<Result<Vec<_>>>()?;
            let g = gram_bloch(&embedded, BlochConvention::Orthonormal)?;
            ExpectedValue::List(hermitian_eig(&g, 1e-12)?.eigenvalues)
        }
        Quantity::GramEntries => {
            let g = gram_bloch(states, BlochConvention::Orthonormal)?;
            ExpectedValue::List(g.entries().iter().map(|z| z.re).collect())
        }
        Quantity::GramRank => {
            ExpectedValue::Count(gram_rank_criterion(states, GRAM_RANK_TOL)?.rank)
        }
        Quantity::C3FacetValue => {
            let [z12, z13, z23] = overlaps3(states)?;
            ExpectedValue::Scalar(Complex64::new(z12 + z13 - z23, 0.0))
        }
        Quantity::C3Member => {
            let [z12, z13, z23] = overlaps3(states)?;
            ExpectedValue::Flag(c3_facet_check(z12, z13, z23, FACET_TOL).member)
        }
        Quantity::Verdict => {
            ExpectedValue::Verdict(set_coherence_decide(states, GAP_COMMUTE_TOL)?.verdict)
        }
    })
}

/// Deviation between a computed and expected value, and the tolerance that applies.
fn deviation(
    computed: &ExpectedValue,
    expected: &ExpectedValue,
    quantity: &Quantity,
) -> (f64, f64) {
    use ExpectedValue::*;
    match (computed, expected) {
        (Scalar(a), Scalar(b)) => ((a - b).norm(), SCALAR_TOL),
        (List(a), List(b)) if a.len() == b.len() => {
            let tol = match quantity {
                Quantity::GramEigenvalues { .. } => EIGENVALUE_TOL,
                _ => SCALAR_TOL,
            };
            (
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max),
                tol,
            )
        }
        (Count(a), Count(b)) => (if a == b { 0.0 } else { f64::INFINITY }, 0.0),
        (Flag(a), Flag(b)) => (if a == b { 0.0 } else { f64::INFINITY }, 0.0),
        (Verdict(a), Verdict(b)) => (if a == b { 0.0 } else { f64::INFINITY }, 0.0),
        _ => (f64::INFINITY, 0.0),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRow {
    pub fixture: String,
    pub quantity: String,
    pub exact: String,
    pub expected: Value,
    pub computed: Value,
    pub abs_error: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub rows: Vec<CheckRow>,
    pub passed: bool,
    /// Largest deviation among continuous quantities.
    pub max_abs_error: f64,
    pub warnings: Vec<String>,
}

/// Recomputes every expectation of the given fixtures.
///
/// Evaluation failures are recorded as failing rows rather than returned.
pub fn check_fixtures(fixtures: &[Fixture]) -> CheckReport {
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    if fixtures.is_empty() {
        warnings.push("no fixtures selected; nothing was checked".to_string());
    }
    for fx in fixtures {
        for exp in &fx.expected {
            let (computed, abs_error, pass) = match compute(&fx.states, &exp.quantity) {
                Ok(v) => {
                    let (err, tol) = deviation(&v, &exp.value, &exp.quantity);
                    (v.to_json(), err, err <= tol)
                }
                Err(e) => (json!(e.to_string()), f64::INFINITY, false),
            };
            rows.push(CheckRow {
                fixture: fx.name.to_string(),
                quantity: exp.quantity.to_string(),
                exact: exp.exact.clone(),
                expected: exp.value.to_json(),
                computed,
                abs_error,
                pass,
            });
        }
    }
    let passed = rows.iter().all(|r| r.pass);
    let max_abs_error = rows.iter().map(|r| r.abs_error).fold(0.0, f64::max);
    CheckReport {
        rows,
        passed,
        max_abs_error,
        warnings,
    }
}

/// Checks the named fixtures, or all of them when `names` is `None`.
pub fn check(names: Option<&[&str]>) -> Result<CheckReport> {
    let fixtures = match names {
        None => all_fixtures(),
        Some(list) => list
            .iter()
            .map(|n| fixture(n))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(check_fixtures(&fixtures))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_loads() {
        for name in FIXTURE_NAMES {
            let fx = fixture(name).unwrap();
            assert_eq!(fx.name, name);
            assert!(!fx.expected.is_empty());
            assert!(fx.states.iter().all(|s| s.is_normalized()));
        }
        assert!(matches!(fixture("nope"), Err(Error::UnknownName { .. })));
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!(frac("9/3200"), 9.0 / 3200.0);
        assert_eq!(frac("0"), 0.0);
        assert_eq!(frac("-3/4"), -0.75);
    }

    #[test]
    fn full_check_passes() {
        let report = check(None).unwrap();
        for row in report.rows.iter().filter(|r| !r.pass) {
            eprintln!("{row:?}");
        }
        assert!(report.passed);
        assert!(report.max_abs_error < 1e-12);
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn perturbed_states_fail() {
        let mut fx = fixture("emc_rho_pair").unwrap();
        let m = fx.states[1].matrix().clone();
        let mut bumped = m.clone();
        let eps = Complex64::new(1e-3, 0.0);
        bumped.set(0, 2, m.get(0, 2) + eps);
        bumped.set(2, 0, m.get(2, 0) + eps);
        fx.states[1] = PositiveOperator::new(bumped).unwrap();
        let report = check_fixtures(&[fx]);
        assert!(!report.passed);
        assert!(report
            .rows
            .iter()
            .any(|r| r.quantity == "gap(1,2)" && !r.pass));
    }

    #[test]
    fn empty_selection_is_vacuous_pass() {
        let report = check(Some(&[])).unwrap();
        assert!(report.passed);
        assert!(report.rows.is_empty());
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn row_json_keys() {
        let report = check(Some(&["trine"])).unwrap();
        let v = serde_json::to_value(&report.rows[0]).unwrap();
        for key in [
            "fixture",
            "quantity",
            "expected",
            "computed",
            "abs_error",
            "pass",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
