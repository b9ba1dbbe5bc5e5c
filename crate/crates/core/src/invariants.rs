//! Words, Bargmann scenarios and invariant evaluation.
//!
//! A [`Word`] is a sequence of 1-based state labels `(l₁, …, l_m)`; its
//! invariant on a tuple of states is `tr(ρ_{l₁}⋯ρ_{l_m})`. A
//! [`BargmannScenario`] is a finite set of words evaluated together.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numkernel::{chain_product_trace, hermitian_eig, ComplexMatrix};
use crate::states::HERM_TOL;

/// A nonempty sequence of 1-based state labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Argument("a word needs at least one letter".into()));
        }
        if letters.contains(&0) {
            return Err(Error::Argument(
                "letters are 1-based; 0 is not a label".into(),
            ));
        }
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest label used.
    pub fn max_letter(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Cyclic rotation by `shift` letters to the left.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut v = self.0.clone();
        let len = v.len();
        v.rotate_left(shift % len);
        Self(v)
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    fn check_against(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l > n) {
            Some(&letter) => Err(Error::LetterOutOfRange { letter, n }),
            None => Ok(()),
        }
    }
}

/// Shorthand for literal words in code and tests; panics on an invalid word.
#[macro_export]
macro_rules! word {
    ($($l:expr),+ $(,)?) => {
        $crate::invariants::Word::new(vec![$($l),+]).expect("valid word literal")
    };
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `"1,2,1,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .split(',')
            .map(|t| {
                t.trim().parse::<usize>().map_err(|e| {
                    Error::Parse(format!("bad letter '{}' in word '{s}': {e}", t.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A named finite set of distinct words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BargmannScenario {
    pub name: String,
    words: BTreeSet<Word>,
}

impl BargmannScenario {
    pub fn new(name: impl Into<String>, words: Vec<Word>) -> Result<Self> {
        let count = words.len();
        let words: BTreeSet<Word> = words.into_iter().collect();
        if words.len() != count {
            return Err(Error::Argument("scenario words must be distinct".into()));
        }
        Ok(Self {
            name: name.into(),
            words,
        })
    }

    /// Words in lexicographic order.
    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// The scenarios used throughout the crate: `winc2`, `c3`, `w3` and `w23`.
pub fn scenario_catalog(name: &str) -> Result<BargmannScenario> {
    let words = match name {
        "winc2" => vec![word![1, 1, 2, 2], word![1, 2, 1, 2]],
        "c3" => vec![word![1, 2], word![1, 3], word![2, 3]],
        "w3" => vec![word![1, 2, 3]],
        "w23" => vec![
            word![1, 1],
            word![1, 1, 1],
            word![2, 2],
            word![2, 2, 2],
            word![1, 2],
            word![1, 1, 2],
            word![1, 2, 2],
        ],
        _ => {
            return Err(Error::UnknownName {
                kind: "scenario",
                name: name.into(),
            })
        }
    };
    BargmannScenario::new(name, words)
}

/// `tr(ρ_{l₁}⋯ρ_{l_m})` for the states selected by `word`.
pub fn bargmann_invariant<M: AsRef<ComplexMatrix>>(states: &[M], word: &Word) -> Result<Complex64> {
    word.check_against(states.len())?;
    let chain: Vec<&ComplexMatrix> = word
        .letters()
        .iter()
        .map(|&l| states[l - 1].as_ref())
        .collect();
    chain_product_trace(&chain)
}

/// One invariant per scenario word, keyed and ordered lexicographically.
pub fn evaluate_scenario<M: AsRef<ComplexMatrix>>(
    states: &[M],
    scenario: &BargmannScenario,
) -> Result<BTreeMap<Word, Complex64>> {
    scenario
        .words()
        .map(|w| Ok((w.clone(), bargmann_invariant(states, w)?)))
        .collect()
}

/// Diagonal weights `p_λ^{(l)} = ⟨λ|ρ_l|λ⟩` of a jointly diagonal set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalRealization {
    /// `weights[l][λ]`, one sequence per letter.
    pub weights: Vec<Vec<f64>>,
}

impl ClassicalRealization {
    pub fn new(weights: Vec<Vec<f64>>) -> Result<Self> {
        let size = weights.first().map(Vec::len).unwrap_or(0);
        if let Some(bad) = weights.iter().position(|w| w.len() != size) {
            return Err(Error::Shape(format!(
                "weight sequence {} has length {}, expected {size}",
                bad + 1,
                weights[bad].len()
            )));
        }
        if let Some(x) = weights
            .iter()
            .flatten()
            .find(|&&x| x < -1e-12 || !x.is_finite())
        {
            return Err(Error::Argument(format!(
                "weight {x} is negative or not finite"
            )));
        }
        Ok(Self { weights })
    }

    /// `|Λ|`.
    pub fn basis_size(&self) -> usize {
        self.weights.first().map(Vec::len).unwrap_or(0)
    }

    /// Reads the diagonal of every state in the orthonormal basis given by the columns of `basis`.
    pub fn from_basis<M: AsRef<ComplexMatrix>>(
        states: &[M],
        basis: &ComplexMatrix,
    ) -> Result<Self> {
        let d = basis.dim();
        let mut weights = Vec::with_capacity(states.len());
        for s in states {
            let rotated = basis.adjoint().matmul(s.as_ref())?.matmul(basis)?;
            weights.push((0..d).map(|i| rotated.get(i, i).re).collect());
        }
        Self::new(weights)
    }

    /// Diagonal weights of a commuting set in its common eigenbasis.
    ///
    /// The basis is taken from a generic real combination of the states, so
    /// it is only meaningful when the states pairwise commute.
    pub fn from_commuting<M: AsRef<ComplexMatrix>>(states: &[M]) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::Argument("need at least one state".into()))?
            .as_ref();
        let mut combo = ComplexMatrix::zeros(first.dim());
        for (i, s) in states.iter().enumerate() {
            // incommensurate coefficients keep accidental degeneracies away
            let coeff = 1.0 + (i as f64 + 1.0) * std::f64::consts::FRAC_1_SQRT_2 * 0.37;
            combo = &combo + &s.as_ref().scale_real(coeff);
        }
        let es = hermitian_eig(&combo, HERM_TOL.max(1e-9))?;
        Self::from_basis(states, &es.eigenvectors)
    }
}

/// `Σ_λ p_λ^{(l₁)}⋯p_λ^{(l_m)}`.
pub fn classical_invariant(cr: &ClassicalRealization, word: &Word) -> Result<f64> {
    word.check_against(cr.weights.len())?;
    Ok((0..cr.basis_size())
        .map(|lambda| {
            word.letters()
                .iter()
                .map(|&l| cr.weights[l - 1][lambda])
                .product::<f64>()
        })
        .sum())
}

/// Every word of length `len` over the labels `1..=n`, lexicographically.
pub fn all_words(n: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=n).map(move |l| {
                    let mut w = prefix.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    out.into_iter().filter_map(|w| Word::new(w).ok()).collect()
}
