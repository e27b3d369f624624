//! The invariant suite behind the `verify` command.
//!
//! Every check compares a construction against an independent oracle on
//! the shipped fixtures and reports pass or fail; nothing here panics or
//! returns early on a failed check.

use num_bigint::BigInt;
use pisot_wfa::normalizer::{
    build_base_normalizer, build_extended_normalizer, greedy_language_dfa, oracle_mismatch,
};
use pisot_wfa::pipeline::{
    greedy_to_value_linrep, value_oracle, value_to_greedy_linrep, Conversion, ConversionOptions,
};
use pisot_wfa::semiring::{Integer, Natural, Semiring};
use pisot_wfa::wfa::LinearRepresentation;
use pisot_wfa::{Letter, NumerationSystem, SystemTuple, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, ToolError};
use crate::fixtures;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationConfig {
    pub max_word_length: usize,
    /// Alphabets up to this size are enumerated exhaustively.
    pub exhaustive_alphabet_limit: usize,
    /// Number of random words drawn for larger alphabets.
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for VerificationConfig {
    fn default() -> Self {
        VerificationConfig {
            max_word_length: 7,
            exhaustive_alphabet_limit: 9,
            sample_count: 2000,
            seed: 0,
        }
    }
}

impl VerificationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_word_length == 0 {
            return Err(ToolError::Usage(
                "max word length must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Words over `alphabet` of length at most `max_len`: all of them for
    /// small alphabets, a seeded sample otherwise.
    pub fn words(&self, dim: usize, alphabet: &[Letter], max_len: usize) -> Vec<Word> {
        if alphabet.len() <= self.exhaustive_alphabet_limit {
            return Word::all_up_to(dim, alphabet, max_len);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.sample_count)
            .map(|_| {
                let len = rng.gen_range(0..=max_len);
                let letters = (0..len)
                    .map(|_| alphabet[rng.gen_range(0..alphabet.len())].clone())
                    .collect();
                Word::new(dim, letters).expect("letters come from the alphabet")
            })
            .collect()
    }
}

/// The inputs of the suite. [`Fixtures::shipped`] uses the embedded files;
/// callers may substitute their own to check them.
#[derive(Clone, Debug)]
pub struct Fixtures {
    pub phi2: NumerationSystem,
    pub zeckendorf: NumerationSystem,
    pub series: LinearRepresentation<Natural>,
    pub expected_value: LinearRepresentation<Natural>,
}

impl Fixtures {
    pub fn shipped() -> Self {
        Fixtures {
            phi2: fixtures::phi2(),
            zeckendorf: fixtures::zeckendorf(),
            series: fixtures::series_phi2(),
            expected_value: fixtures::value_phi2(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub group: &'static str,
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Suite {
    outcomes: Vec<CheckOutcome>,
}

impl Suite {
    fn record(
        &mut self,
        group: &'static str,
        check: &'static str,
        result: Result<std::result::Result<String, String>>,
    ) {
        let (passed, detail) = match result {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, format!("error: {e}")),
        };
        self.outcomes.push(CheckOutcome {
            group,
            check,
            passed,
            detail,
        });
    }
}

type Verdict = std::result::Result<String, String>;

fn first_difference<S: Semiring>(
    words: &[Word],
    mut left: impl FnMut(&Word) -> pisot_wfa::Result<S>,
    mut right: impl FnMut(&Word) -> pisot_wfa::Result<S>,
) -> Result<Verdict> {
    for w in words {
        let (a, b) = (left(w)?, right(w)?);
        if a != b {
            return Ok(Err(format!("{w}: {a} vs {b}")));
        }
    }
    Ok(Ok(format!("{} words", words.len())))
}

fn digits(xs: &[i64]) -> Vec<Letter> {
    xs.iter().map(|&x| Letter::scalar(x)).collect()
}

/// Runs every check and returns the outcomes in a fixed order.
pub fn run_suite(config: &VerificationConfig, fx: &Fixtures) -> Vec<CheckOutcome> {
    let mut suite = Suite {
        outcomes: Vec::new(),
    };
    let len = config.max_word_length;
    let abc = digits(&[0, 1, 2]);
    let ts = SystemTuple::single(fx.phi2.clone());

    suite.record(
        "series",
        "printed_coefficients",
        (|| {
            let got: Vec<Natural> = [[1, 1, 2, 1], [2, 1, 0, 1], [2, 1, 1, 2]]
                .iter()
                .map(|w| fx.series.eval(&Word::from_digits(w)))
                .collect::<pisot_wfa::Result<_>>()?;
            let want = [60u64, 18, 0].map(Natural::from).to_vec();
            Ok(if got == want {
                Ok("60, 18, 0".into())
            } else {
                Err(format!("{got:?}"))
            })
        })(),
    );

    for (check, ns) in [
        ("greedy_round_trip_phi2", &fx.phi2),
        ("greedy_round_trip_zeckendorf", &fx.zeckendorf),
    ] {
        suite.record(
            "numeration",
            check,
            (|| {
                for n in 0..10_000u32 {
                    let n = BigInt::from(n);
                    let rep = ns.greedy_rep(&n)?;
                    if ns.value(&rep) != n || !ns.is_greedy(&rep) {
                        return Ok(Err(format!("n = {n}")));
                    }
                }
                Ok(Ok("n < 10000".into()))
            })(),
        );
    }

    suite.record("numeration", "zeckendorf_eleven", {
        let z = &fx.zeckendorf;
        let ok = z.value(&[1, 1]) == 3.into()
            && z.value(&[1, 0, 0]) == 3.into()
            && z.normalize(&[1, 1]) == [1, 0, 0];
        Ok(if ok {
            Ok("val 11 = val 100 = 3".into())
        } else {
            Err("mismatch".into())
        })
    });

    suite.record(
        "normalizer",
        "phi2_base",
        (|| {
            let n = build_base_normalizer(&fx.phi2, &[0, 1, 2])?.minimize();
            if n.num_states() != 5 {
                return Ok(Err(format!("{} states", n.num_states())));
            }
            Ok(match oracle_mismatch(&ts, &abc, &n, len)? {
                None => Ok(format!("5 states, oracle up to length {len}")),
                Some((u, v)) => Err(format!("input {u}, output {v}")),
            })
        })(),
    );

    suite.record(
        "normalizer",
        "phi2_extended",
        (|| {
            let a: Vec<i64> = (-2..=2).collect();
            let n = build_extended_normalizer(&fx.phi2, &a)?;
            let max = len.min(4);
            Ok(match oracle_mismatch(&ts, &digits(&a), &n, max)? {
                None => Ok(format!("oracle up to length {max}")),
                Some((u, v)) => Err(format!("input {u}, output {v}")),
            })
        })(),
    );

    suite.record(
        "normalizer",
        "greedy_language",
        (|| {
            let g = greedy_language_dfa(&fx.phi2)?;
            if g.num_states() != 2 {
                return Ok(Err(format!("{} states", g.num_states())));
            }
            for w in config.words(1, &abc, len.max(1)) {
                if g.accepts(&w) != fx.phi2.is_greedy(&w.track(0)) {
                    return Ok(Err(format!("{w}")));
                }
            }
            Ok(Ok("2 states".into()))
        })(),
    );

    suite.record(
        "normalizer",
        "zeckendorf_base",
        (|| {
            let zt = SystemTuple::single(fx.zeckendorf.clone());
            let n = build_base_normalizer(&fx.zeckendorf, &[0, 1])?;
            let max = len.max(1) + 1;
            Ok(match oracle_mismatch(&zt, &digits(&[0, 1]), &n, max)? {
                None => Ok(format!("oracle up to length {max}")),
                Some((u, v)) => Err(format!("input {u}, output {v}")),
            })
        })(),
    );

    let conversion = greedy_to_value_linrep(&fx.series, &ts, &abc, &ConversionOptions::default());
    let conversion: Option<Conversion<Natural>> = match conversion {
        Ok(c) => Some(c),
        Err(e) => {
            suite.record("pipeline", "conversion", Err(e.into()));
            None
        }
    };
    if let Some(c) = conversion {
        pipeline_checks(&mut suite, config, fx, &ts, &abc, &c);
    }
    suite.outcomes
}

fn pipeline_checks(
    suite: &mut Suite,
    config: &VerificationConfig,
    fx: &Fixtures,
    ts: &SystemTuple,
    abc: &[Letter],
    c: &Conversion<Natural>,
) {
    let len = config.max_word_length;
    let words = config.words(1, abc, len);
    let short = config.words(1, abc, len.min(6));

    suite.record(
        "pipeline",
        "dimensions",
        Ok({
            let r = &c.report;
            let expected = r.r * r.s + 1;
            if r.dim_untrimmed == expected && c.linrep.dim() == fx.expected_value.dim() {
                Ok(format!(
                    "untrimmed {}, trimmed {}",
                    r.dim_untrimmed,
                    c.linrep.dim()
                ))
            } else {
                Err(format!(
                    "untrimmed {} (want {expected}), trimmed {}",
                    r.dim_untrimmed,
                    c.linrep.dim()
                ))
            }
        }),
    );

    suite.record(
        "pipeline",
        "main_theorem",
        first_difference(
            &words,
            |w| c.linrep.eval(w),
            |w| value_oracle(&fx.series, ts, w),
        ),
    );

    suite.record(
        "pipeline",
        "expected_matrices",
        first_difference(&short, |w| c.linrep.eval(w), |w| fx.expected_value.eval(w)),
    );

    suite.record(
        "pipeline",
        "unique_ell",
        Ok(if c.value_automaton.unique_ell_holds() {
            Ok(format!(
                "{} (letter, state) pairs",
                c.value_automaton.ell.len()
            ))
        } else {
            Err("a target admits two zero-prefix lengths".into())
        }),
    );

    suite.record(
        "pipeline",
        "alpha_row",
        (|| {
            for a in abc {
                if c.value_automaton.alpha_row_by_paths(a)? != c.value_automaton.alpha_row(a) {
                    return Ok(Err(format!("letter {a}")));
                }
            }
            Ok(Ok("path lengths agree with the power sum".into()))
        })(),
    );

    suite.record(
        "pipeline",
        "star_product",
        first_difference(
            &words,
            |w| Ok(c.value_automaton.star.automaton.weight(w)),
            |w| {
                if ts.delay(w)? == 0 {
                    fx.series.eval(&ts.normalize(w)?.abs())
                } else {
                    Ok(Natural::zero())
                }
            },
        ),
    );

    suite.record(
        "pipeline",
        "delay_decomposition",
        (|| {
            for w in &words {
                let parts = c.value_automaton.decompose(w)?;
                let slot = match ts.delay(w)?.signum() {
                    0 => 0,
                    -1 => 1,
                    _ => 2,
                };
                let oracle = value_oracle(&fx.series, ts, w)?;
                let others_zero = (0..3).filter(|&i| i != slot).all(|i| parts[i].is_zero());
                if parts[slot] != oracle || !others_zero {
                    return Ok(Err(format!("{w}: {parts:?}")));
                }
            }
            Ok(Ok(format!("{} words", words.len())))
        })(),
    );

    suite.record(
        "pipeline",
        "zero_padding",
        (|| {
            for w in config.words(1, abc, len.min(5)) {
                let base = c.linrep.eval(&w)?;
                for k in 1..=3 {
                    if c.linrep.eval(&w.with_leading_zeros(k))? != base {
                        return Ok(Err(format!("{w} with {k} zeros")));
                    }
                }
            }
            Ok(Ok("k ≤ 3".into()))
        })(),
    );

    suite.record(
        "pipeline",
        "round_trip",
        (|| {
            let back = value_to_greedy_linrep(&c.linrep, ts)?;
            first_difference(&short, |w| back.eval(w), |w| fx.series.eval(w))
        })(),
    );

    suite.record(
        "pipeline",
        "integer_instance",
        (|| {
            let g = fx.series.map(|x| Integer(x.0.clone().into()));
            let ci = greedy_to_value_linrep(&g, ts, abc, &ConversionOptions::default())?;
            first_difference(
                &short,
                |w| ci.linrep.eval(w),
                |w| c.linrep.eval(w).map(|x| Integer(x.0.into())),
            )
        })(),
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use pisot_wfa::semiring::Matrix;

    fn quick() -> VerificationConfig {
        VerificationConfig {
            max_word_length: 4,
            ..Default::default()
        }
    }

    #[test]
    fn shipped_fixtures_pass() {
        let out = run_suite(&quick(), &Fixtures::shipped());
        let failed: Vec<_> = out.iter().filter(|o| !o.passed).collect();
        assert!(failed.is_empty(), "{failed:?}");
        assert!(out.len() >= 15);
    }

    #[test]
    fn length_one_passes() {
        let cfg = VerificationConfig {
            max_word_length: 1,
            ..Default::default()
        };
        assert!(run_suite(&cfg, &Fixtures::shipped())
            .iter()
            .all(|o| o.passed));
    }

    #[test]
    fn corrupted_series_is_caught() {
        let mut fx = Fixtures::shipped();
        let mut mu = fx.series.mu_map().clone();
        let m: &mut Matrix<Natural> = mu.get_mut(&Letter::scalar(2)).unwrap();
        m.set(0, 2, Natural::from(5u64));
        fx.series =
            LinearRepresentation::new(1, fx.series.lambda().clone(), mu, fx.series.gamma().clone())
                .unwrap();
        let out = run_suite(&quick(), &fx);
        assert!(out
            .iter()
            .any(|o| !o.passed && o.check == "expected_matrices"));
    }

    #[test]
    fn sampling_is_seeded() {
        let cfg = VerificationConfig {
            exhaustive_alphabet_limit: 2,
            sample_count: 50,
            seed: 7,
            ..Default::default()
        };
        let abc = digits(&[0, 1, 2]);
        let a = cfg.words(1, &abc, 5);
        assert_eq!(a.len(), 50);
        assert_eq!(a, cfg.words(1, &abc, 5));
        assert!(a.iter().all(|w| w.len() <= 5));
        assert!(VerificationConfig {
            max_word_length: 0,
            ..cfg
        }
        .validate()
        .is_err());
    }
}
