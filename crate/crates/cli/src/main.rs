//! `bargmann`: batch frontend over the bargmann library.
//!
//! Every subcommand prints one JSON report. Exit codes: 0 negative result or
//! pass, 1 positive finding (coherence, imaginarity, facet violation, failed
//! check), 2 operational error with a diagnostic on stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bargmann::criteria::{
    c3_facet_check, gram_rank_criterion_with, imaginarity_witness, qubit_criterion,
    reduced_set_coherence, set_coherence_decide, Verdict,
};
use bargmann::document::StateSetDocument;
use bargmann::estimator::{estimate_invariant, EstimatorConfig, Settings};
use bargmann::fixtures;
use bargmann::invariants::{bargmann_invariant, Word};
use bargmann::states::{
    commuting_set, random_state, BlochConvention, Ensemble, PositiveOperator, GAP_TOL,
};
use bargmann::Error;
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "bargmann",
    version,
    about = "Bargmann invariants and set-coherence tests for quantum states"
)]
struct Cli {
    /// Numerical tolerance for the decision being made.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Seed for random generation and shot sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Bloch convention (default: pauli for qubits, orthonormal otherwise).
    #[arg(long, global = true)]
    convention: Option<BlochConvention>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnsembleArg {
    GinibreMixed,
    HaarPure,
    RandomDiagonal,
    /// Random states sharing one random eigenbasis.
    Commuting,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one Bargmann invariant.
    Invariant {
        file: PathBuf,
        /// Comma-separated 1-based state indices, e.g. 1,2,3.
        #[arg(long)]
        word: Word,
    },
    /// Decide whether the states pairwise commute.
    Coherence {
        file: PathBuf,
        /// 1-based index of a non-degenerate reference state (reduced mode).
        #[arg(long)]
        reference: Option<usize>,
    },
    /// Simulate a cycle-test estimate of one invariant.
    Estimate {
        file: PathBuf,
        #[arg(long)]
        word: Word,
        /// Shots per measurement setting.
        #[arg(long)]
        shots: u64,
        /// Skip the imaginary-part setting.
        #[arg(long)]
        real_only: bool,
    },
    /// Recompute the built-in worked examples.
    PaperCheck {
        /// Restrict to these fixtures (repeatable).
        #[arg(long = "fixture")]
        fixtures: Vec<String>,
    },
    /// Print a built-in worked example as a state-set document.
    Fixture { name: String },
    /// Generate a random state-set document.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value = "ginibre-mixed")]
        ensemble: EnsembleArg,
    },
    /// Overlap-polynomial commutation test for every qubit pair.
    QubitCheck { file: PathBuf },
    /// Bloch Gram-matrix rank test.
    Gram { file: PathBuf },
    /// Three-cycle facet inequalities on the overlaps of three states.
    Facets { file: PathBuf },
    /// Imaginarity bound for a triple of states.
    Imaginarity {
        file: PathBuf,
        /// The triple l,k,s as 1-based indices.
        #[arg(long, default_value = "1,2,3")]
        triple: Word,
    },
}

type Outcome = std::result::Result<(Value, bool), Error>;

fn load(path: &Path) -> Result<Vec<PositiveOperator>, Error> {
    StateSetDocument::read(path)?.to_states()
}

fn pick(states: &[PositiveOperator], letter: usize) -> Result<&PositiveOperator, Error> {
    letter
        .checked_sub(1)
        .and_then(|i| states.get(i))
        .ok_or(Error::LetterOutOfRange {
            letter,
            n: states.len(),
        })
}

fn report<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

fn run(cli: &Cli) -> Outcome {
    let tol = cli.tol;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::Argument(format!(
            "--tol must be a nonnegative number, got {tol}"
        )));
    }
    match &cli.command {
        Command::Invariant { file, word } => {
            let states = load(file)?;
            let z = bargmann_invariant(&states, word)?;
            Ok((
                json!({"word": word.to_string(), "re": z.re, "im": z.im}),
                false,
            ))
        }
        Command::Coherence { file, reference } => {
            let states = load(file)?;
            let rep = match reference {
                None => set_coherence_decide(&states, tol)?,
                Some(r) => {
                    pick(&states, *r)?;
                    reduced_set_coherence(&states, r - 1, tol, GAP_TOL)?
                }
            };
            Ok((report(&rep), rep.verdict == Verdict::SetCoherent))
        }
        Command::Estimate {
            file,
            word,
            shots,
            real_only,
        } => {
            let states = load(file)?;
            let settings = if *real_only {
                Settings::RealOnly
            } else {
                Settings::RealAndImag
            };
            let config = EstimatorConfig::new(*shots, cli.seed, settings)?;
            Ok((report(&estimate_invariant(&states, word, &config)?), false))
        }
        Command::PaperCheck { fixtures: names } => {
            let rep = if names.is_empty() {
                fixtures::check(None)?
            } else {
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                fixtures::check(Some(&refs))?
            };
            for w in &rep.warnings {
                eprintln!("warning: {w}");
            }
            Ok((report(&rep), !rep.passed))
        }
        Command::Fixture { name } => {
            let fx = fixtures::fixture(name)?;
            Ok((report(&StateSetDocument::from_states(&fx.states)?), false))
        }
        Command::Random {
            dim,
            count,
            ensemble,
        } => {
            if *dim == 0 || *count == 0 {
                return Err(Error::Argument("--dim and --count must be positive".into()));
            }
            let mut rng = ChaCha20Rng::seed_from_u64(cli.seed);
            let states = match ensemble {
                EnsembleArg::Commuting => commuting_set(*dim, *count, &mut rng),
                other => {
                    let e = match other {
                        EnsembleArg::GinibreMixed => Ensemble::GinibreMixed,
                        EnsembleArg::HaarPure => Ensemble::HaarPure,
                        _ => Ensemble::RandomDiagonal,
                    };
                    (0..*count)
                        .map(|_| random_state(*dim, e, &mut rng))
                        .collect()
                }
            };
            Ok((report(&StateSetDocument::from_states(&states)?), false))
        }
        Command::QubitCheck { file } => {
            let states = load(file)?;
            if states[0].dim() != 2 {
                return Err(Error::Convention {
                    convention: "qubit overlap criterion",
                    dim: states[0].dim(),
                });
            }
            let mut pairs = Vec::new();
            let mut any_noncommuting = false;
            for l in 0..states.len() {
                for k in (l + 1)..states.len() {
                    let d = |a: usize, b: usize| {
                        bargmann_invariant(
                            &states,
                            &Word::new(vec![a + 1, b + 1]).expect("valid letters"),
                        )
                        .map(|z| z.re)
                    };
                    let (d11, d22, d12) = (d(l, l)?, d(k, k)?, d(l, k)?);
                    let check = qubit_criterion(d11, d22, d12, tol);
                    any_noncommuting |= !check.commutes;
                    pairs.push(json!({
                        "l": l + 1, "k": k + 1, "d11": d11, "d22": d22, "d12": d12,
                        "residual": check.residual, "commutes": check.commutes, "warnings": check.warnings,
                    }));
                }
            }
            let verdict = if any_noncommuting {
                Verdict::SetCoherent
            } else {
                Verdict::SetIncoherent
            };
            Ok((
                json!({"pairs": pairs, "verdict": verdict}),
                any_noncommuting,
            ))
        }
        Command::Gram { file } => {
            let states = load(file)?;
            let convention = cli
                .convention
                .unwrap_or(BlochConvention::default_for(states[0].dim()));
            let rep = gram_rank_criterion_with(&states, convention, tol)?;
            let coherent = !rep.necessary_condition_passed;
            Ok((report(&rep), coherent))
        }
        Command::Facets { file } => {
            let states = load(file)?;
            if states.len() != 3 {
                return Err(Error::Argument(format!(
                    "facets needs exactly 3 states, got {}",
                    states.len()
                )));
            }
            let z = |l: usize, k: usize| {
                bargmann_invariant(&states, &Word::new(vec![l, k]).expect("valid")).map(|d| d.re)
            };
            let rep = c3_facet_check(z(1, 2)?, z(1, 3)?, z(2, 3)?, tol);
            Ok((report(&rep), !rep.member))
        }
        Command::Imaginarity { file, triple } => {
            let states = load(file)?;
            if triple.len() != 3 {
                return Err(Error::Argument(format!(
                    "--triple needs 3 indices, got {}",
                    triple.len()
                )));
            }
            let t = triple.letters();
            let w = imaginarity_witness(
                pick(&states, t[0])?,
                pick(&states, t[1])?,
                pick(&states, t[2])?,
            )?;
            if !w.satisfied {
                return Err(Error::NumericInconsistency(format!(
                    "bound violated: lhs {} > rhs {}",
                    w.lhs, w.rhs
                )));
            }
            let imaginary = w.lhs > tol;
            Ok((report(&w), imaginary))
        }
    }
}

fn emit(value: &Value, out: Option<&Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
    match out {
        Some(path) => fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((value, finding)) => {
            if let Err(e) = emit(&value, cli.out.as_deref()) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(u8::from(finding))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
