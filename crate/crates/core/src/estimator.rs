//! Shot-level simulation of cycle-test estimates of Bargmann invariants.
//!
//! An ideal cycle test for a word `w` ends with an ancilla measurement whose
//! `+1` probability is `(1 + Re Δ_w)/2` (real setting) or `(1 + Im Δ_w)/2`
//! (imaginary setting, with an extra phase gate on the ancilla). The outcome
//! distribution depends on the states only through `Δ_w`, so shots are drawn
//! directly from it: successes ~ Binomial(shots, p), estimate `2·k/shots − 1`.
//!
//! Randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`). Each
//! (seed, word, setting) triple gets its own generator: the 256-bit key is
//! built from the seed and an FNV-1a hash of the word, and the setting index
//! selects the ChaCha stream. Results are therefore reproducible bit for bit
//! and independent of call order.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{bargmann_invariant, Word};
use crate::states::PositiveOperator;

/// Floor on the reported standard error, in units of `1/√shots`.
pub const STDERR_FLOOR: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Settings {
    RealOnly,
    RealAndImag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimatorConfig {
    pub shots_per_setting: u64,
    pub seed: u64,
    pub settings: Settings,
}

impl EstimatorConfig {
    pub fn new(shots_per_setting: u64, seed: u64, settings: Settings) -> Result<Self> {
        if shots_per_setting == 0 {
            return Err(Error::Argument(
                "shots per setting must be at least 1".into(),
            ));
        }
        Ok(Self {
            shots_per_setting,
            seed,
            settings,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateResult {
    pub word: Word,
    #[serde(rename = "re")]
    pub estimate_re: f64,
    /// `None` when only the real setting was run.
    #[serde(rename = "im")]
    pub estimate_im: Option<f64>,
    pub stderr_re: f64,
    pub stderr_im: Option<f64>,
    /// Shots per setting.
    pub shots: u64,
    /// Total shots over all settings run.
    #[serde(skip)]
    pub shots_used: u64,
}

impl EstimateResult {
    /// The estimate as a complex number; the imaginary part is 0 if it was not measured.
    pub fn estimate(&self) -> Complex64 {
        Complex64::new(self.estimate_re, self.estimate_im.unwrap_or(0.0))
    }
}

/// Binomial standard error of a ±1 mean, floored at `STDERR_FLOOR/√shots`.
pub fn standard_error(component: f64, shots: u64) -> f64 {
    let n = shots as f64;
    let x = component.clamp(-1.0, 1.0);
    ((1.0 - x * x).sqrt() / n.sqrt()).max(STDERR_FLOOR / n.sqrt())
}

fn fnv1a(word: &Word) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &l in word.letters() {
        for b in (l as u64).to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

fn generator(seed: u64, word: &Word, setting: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a(word).to_le_bytes());
    key[16..24].copy_from_slice(&(word.len() as u64).to_le_bytes());
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(setting);
    rng
}

/// Samples one ±1 setting with expectation `expectation`; returns the empirical mean.
fn sample_setting(expectation: f64, shots: u64, rng: &mut ChaCha20Rng) -> f64 {
    let p = ((1.0 + expectation) / 2.0).clamp(0.0, 1.0);
    let successes = Binomial::new(shots, p)
        .expect("p is clamped to [0, 1]")
        .sample(rng);
    2.0 * successes as f64 / shots as f64 - 1.0
}

fn check_normalized(states: &[PositiveOperator], word: &Word) -> Result<()> {
    for &l in word.letters() {
        if let Some(s) = states.get(l - 1) {
            if !s.is_normalized() {
                return Err(Error::Precondition(format!(
                    "state {l} has trace {} but cycle-test estimation needs normalized states",
                    s.trace()
                )));
            }
        }
    }
    Ok(())
}

/// Simulated cycle-test estimate of `Δ_word`.
pub fn estimate_invariant(
    states: &[PositiveOperator],
    word: &Word,
    config: &EstimatorConfig,
) -> Result<EstimateResult> {
    if config.shots_per_setting == 0 {
        return Err(Error::Argument(
            "shots per setting must be at least 1".into(),
        ));
    }
    let exact = bargmann_invariant(states, word)?;
    check_normalized(states, word)?;
    let shots = config.shots_per_setting;

    let estimate_re = sample_setting(exact.re, shots, &mut generator(config.seed, word, 0));
    let (estimate_im, stderr_im) = match config.settings {
        Settings::RealOnly => (None, None),
        Settings::RealAndImag => {
            let im = sample_setting(exact.im, shots, &mut generator(config.seed, word, 1));
            (Some(im), Some(standard_error(im, shots)))
        }
    };
    let settings_run = if estimate_im.is_some() { 2 } else { 1 };
    Ok(EstimateResult {
        word: word.clone(),
        estimate_re,
        estimate_im,
        stderr_re: standard_error(estimate_re, shots),
        stderr_im,
        shots,
        shots_used: settings_run * shots,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapEstimate {
    pub gap_estimate: f64,
    pub standard_error: f64,
    pub delta1122: EstimateResult,
    pub delta1212: EstimateResult,
}

/// Estimates `Δ₁₁₂₂ − Δ₁₂₁₂` for a pair from two real-setting cycle tests.
pub fn estimate_gap(
    a: &PositiveOperator,
    b: &PositiveOperator,
    config: &EstimatorConfig,
) -> Result<GapEstimate> {
    let pair = [a.clone(), b.clone()];
    let real = EstimatorConfig {
        settings: Settings::RealOnly,
        ..*config
    };
    let w1122 = Word::new(vec![1, 1, 2, 2])?;
    let w1212 = Word::new(vec![1, 2, 1, 2])?;
    let delta1122 = estimate_invariant(&pair, &w1122, &real)?;
    let delta1212 = estimate_invariant(&pair, &w1212, &real)?;
    Ok(GapEstimate {
        gap_estimate: delta1122.estimate_re - delta1212.estimate_re,
        standard_error: delta1122.stderr_re.hypot(delta1212.stderr_re),
        delta1122,
        delta1212,
    })
}
