//! JSON encodings of systems, automata, linear representations and
//! conversion reports, plus the command-line word and alphabet syntax.
//!
//! Semiring values are written as strings (`"3"`, `"-1/2"`, `"true"`,
//! `"inf"`) so that big integers survive untouched. Letters are keyed in
//! matrix maps by their comma-joined coordinates, e.g. `"0,-1"`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use pisot_wfa::dfa::MultiTapeDfa;
use pisot_wfa::pipeline::{ConversionReport, ValidationSummary};
use pisot_wfa::semiring::{Matrix, Semiring};
use pisot_wfa::wfa::LinearRepresentation;
use pisot_wfa::{Letter, NumerationSystem, Word};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToolError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFile {
    pub name: String,
    /// `c_1, …, c_k` in `U(n+k) = c_1 U(n+k−1) + … + c_k U(n)`.
    pub recurrence: Vec<i64>,
    pub initial: Vec<i64>,
}

impl SystemFile {
    pub fn from_system(ns: &NumerationSystem) -> Self {
        SystemFile {
            name: ns.name().to_string(),
            recurrence: ns.recurrence().to_vec(),
            initial: ns
                .initial_terms()
                .iter()
                .map(|t| i64::try_from(t).expect("initial terms of a parsed system fit in i64"))
                .collect(),
        }
    }

    pub fn to_system(&self) -> Result<NumerationSystem> {
        Ok(NumerationSystem::new(
            &self.name,
            self.recurrence.clone(),
            self.initial.clone(),
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonFile {
    /// Number of coordinates of every letter.
    pub dim: usize,
    pub states: usize,
    pub initial: usize,
    pub finals: Vec<usize>,
    pub alphabet: Vec<Vec<i64>>,
    /// `[from, index into alphabet, to]`.
    pub transitions: Vec<[usize; 3]>,
}

impl AutomatonFile {
    pub fn from_dfa(dfa: &MultiTapeDfa) -> Self {
        let alphabet: Vec<Letter> = dfa.alphabet().iter().cloned().collect();
        let index: BTreeMap<&Letter, usize> =
            alphabet.iter().enumerate().map(|(i, l)| (l, i)).collect();
        AutomatonFile {
            dim: dfa.dim(),
            states: dfa.num_states(),
            initial: dfa.initial(),
            finals: dfa.finals().collect(),
            transitions: dfa
                .transitions()
                .map(|(p, a, q)| [p, index[a], q])
                .collect(),
            alphabet: alphabet.into_iter().map(|l| l.0).collect(),
        }
    }

    pub fn to_dfa(&self) -> Result<MultiTapeDfa> {
        let alphabet: Vec<Letter> = self.alphabet.iter().cloned().map(Letter).collect();
        let transitions = self
            .transitions
            .iter()
            .map(|&[p, a, q]| {
                alphabet
                    .get(a)
                    .map(|l| (p, l.clone(), q))
                    .ok_or_else(|| ToolError::Input(format!("letter index {a} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiTapeDfa::new(
            self.dim,
            alphabet,
            self.states,
            self.initial,
            self.finals.iter().copied(),
            transitions,
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinrepFile {
    pub semiring: String,
    pub letter_dim: usize,
    pub dim: usize,
    pub lambda: Vec<String>,
    pub mu: BTreeMap<String, Vec<Vec<String>>>,
    pub gamma: Vec<String>,
}

fn letter_key(l: &Letter) -> String {
    l.to_string()
}

fn parse_letter_key(key: &str) -> Result<Letter> {
    key.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| ToolError::Input(format!("bad letter key {key:?}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(Letter)
}

impl LinrepFile {
    pub fn from_linrep<S: Semiring>(l: &LinearRepresentation<S>) -> Self {
        let strings = |m: &Matrix<S>| m.entries().iter().map(ToString::to_string).collect();
        LinrepFile {
            semiring: S::NAME.to_string(),
            letter_dim: l.letter_dim(),
            dim: l.dim(),
            lambda: strings(l.lambda()),
            gamma: strings(l.gamma()),
            mu: l
                .mu_map()
                .iter()
                .map(|(a, m)| {
                    let rows = m
                        .to_rows()
                        .into_iter()
                        .map(|r| r.iter().map(ToString::to_string).collect())
                        .collect();
                    (letter_key(a), rows)
                })
                .collect(),
        }
    }

    /// Parses the values as elements of `S`, regardless of the recorded
    /// semiring name.
    pub fn to_linrep<S: Semiring>(&self) -> Result<LinearRepresentation<S>> {
        let value = |x: &String| {
            S::parse(x).ok_or_else(|| ToolError::Input(format!("{x:?} is not a {} value", S::NAME)))
        };
        let vector = |xs: &[String]| xs.iter().map(value).collect::<Result<Vec<S>>>();
        let mu = self
            .mu
            .iter()
            .map(|(k, rows)| {
                let rows = rows.iter().map(|r| vector(r)).collect::<Result<Vec<_>>>()?;
                Ok((parse_letter_key(k)?, Matrix::from_rows(rows)?))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let l = LinearRepresentation::new(
            self.letter_dim,
            Matrix::row_vector(vector(&self.lambda)?),
            mu,
            Matrix::column_vector(vector(&self.gamma)?),
        )?;
        if l.dim() != self.dim {
            return Err(ToolError::Input(format!(
                "declared dimension {} but the vectors have length {}",
                self.dim,
                l.dim()
            )));
        }
        Ok(l)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllEntry {
    pub letter: Vec<i64>,
    pub state: usize,
    pub lengths: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationFile {
    pub max_len: usize,
    pub words_checked: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub r: usize,
    pub s: usize,
    pub dim_untrimmed: usize,
    pub dim_output: usize,
    pub trimmed: bool,
    pub zero_adjoined: bool,
    pub unique_ell: bool,
    pub alpha_row_cross_check: bool,
    pub ell: Vec<EllEntry>,
    pub validation: Option<ValidationFile>,
}

impl ReportFile {
    pub fn from_report(r: &ConversionReport) -> Self {
        ReportFile {
            r: r.r,
            s: r.s,
            dim_untrimmed: r.dim_untrimmed,
            dim_output: r.dim_output,
            trimmed: r.trimmed,
            zero_adjoined: r.zero_adjoined,
            unique_ell: r.unique_ell,
            alpha_row_cross_check: r.alpha_row_cross_check,
            ell: r
                .ell
                .iter()
                .map(|(l, j, ls)| EllEntry {
                    letter: l.0.clone(),
                    state: *j,
                    lengths: ls.clone(),
                })
                .collect(),
            validation: r.validation.as_ref().map(ValidationFile::from_summary),
        }
    }
}

impl ValidationFile {
    pub fn from_summary(v: &ValidationSummary) -> Self {
        ValidationFile {
            max_len: v.max_len,
            words_checked: v.words_checked,
            mismatches: v.mismatches,
            first_mismatch: v
                .first_mismatch
                .as_ref()
                .map(|w| w.letters().iter().map(|l| l.0.clone()).collect()),
        }
    }
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|source| ToolError::Json {
        origin: origin.to_string(),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| ToolError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_json(&text, &path.display().to_string())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types serialize");
    s.push('\n');
    s
}

/// A word given as a JSON array of integer vectors, or for dimension 1 as
/// a string of decimal digits.
pub fn parse_word(text: &str, dim: usize) -> Result<Word> {
    let text = text.trim();
    if text.starts_with('[') {
        let letters: Vec<Vec<i64>> = parse_json(text, "word")?;
        let w = Word::new(dim, letters.into_iter().map(Letter).collect())?;
        return Ok(w);
    }
    if dim != 1 {
        return Err(ToolError::Input(format!(
            "digit strings only describe 1-dimensional words, expected dimension {dim}"
        )));
    }
    text.chars()
        .map(|c| {
            c.to_digit(10)
                .map(i64::from)
                .ok_or_else(|| ToolError::Input(format!("{c:?} is not a digit in {text:?}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(|ds| Word::from_digits(&ds))
}

/// Digit string for 1-dimensional words over `0..=9`, bracket notation
/// otherwise.
pub fn format_word(w: &Word) -> String {
    let compact = w.dim() == 1 && w.letters().iter().all(|l| (0..=9).contains(&l.0[0]));
    if compact {
        w.letters().iter().map(|l| l.0[0].to_string()).collect()
    } else {
        w.to_string()
    }
}

/// An alphabet given as a JSON array of integer vectors, a comma-separated
/// list of digits (dimension 1) or a range `lo..hi` taken in every
/// coordinate.
pub fn parse_alphabet(text: &str, dim: usize) -> Result<Vec<Letter>> {
    let text = text.trim();
    let letters: Vec<Letter> = if text.starts_with('[') {
        let raw: Vec<Vec<i64>> = parse_json(text, "alphabet")?;
        raw.into_iter().map(Letter).collect()
    } else if let Some((lo, hi)) = text.split_once("..") {
        let bound = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| ToolError::Input(format!("bad range bound {x:?}")))
        };
        let (lo, hi) = (bound(lo)?, bound(hi)?);
        if lo > hi {
            return Err(ToolError::Input(format!("empty range {text:?}")));
        }
        let mut out = vec![Letter(Vec::new())];
        for _ in 0..dim {
            out = out
                .iter()
                .flat_map(|l| (lo..=hi).map(move |x| Letter([l.0.clone(), vec![x]].concat())))
                .collect();
        }
        out
    } else if dim == 1 {
        text.split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map(Letter::scalar)
                    .map_err(|_| ToolError::Input(format!("bad digit {x:?}")))
            })
            .collect::<Result<_>>()?
    } else {
        return Err(ToolError::Input(format!(
            "alphabet {text:?} must be a JSON array or a range for dimension {dim}"
        )));
    };
    if let Some(bad) = letters.iter().find(|l| l.dim() != dim) {
        return Err(ToolError::Input(format!(
            "letter ({bad}) does not have dimension {dim}"
        )));
    }
    let mut letters = letters;
    letters.sort();
    letters.dedup();
    Ok(letters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pisot_wfa::pipeline::fixture_series_phi2;
    use pisot_wfa::semiring::{Natural, Rational};

    #[test]
    fn system_round_trip() {
        let f = SystemFile::from_system(&NumerationSystem::phi_squared());
        assert_eq!(f.recurrence, vec![3, -1]);
        assert_eq!(f.initial, vec![1, 3]);
        let again: SystemFile = parse_json(&to_json(&f), "test").unwrap();
        assert_eq!(again, f);
        assert_eq!(again.to_system().unwrap().term(3), 21.into());
    }

    #[test]
    fn linrep_round_trip() {
        let s = fixture_series_phi2();
        let f = LinrepFile::from_linrep(&s);
        assert_eq!(f.mu["1"][0], ["0", "3", "0", "1"]);
        let again: LinrepFile = parse_json(&to_json(&f), "test").unwrap();
        assert_eq!(again.to_linrep::<Natural>().unwrap(), s);
        let q: LinearRepresentation<Rational> = again.to_linrep().unwrap();
        assert_eq!(
            q.eval(&Word::from_digits(&[1, 1, 2, 1])).unwrap(),
            Rational::from(60)
        );
    }

    #[test]
    fn linrep_rejects_bad_values() {
        let mut f = LinrepFile::from_linrep(&fixture_series_phi2());
        f.lambda[0] = "-1".into();
        assert!(matches!(f.to_linrep::<Natural>(), Err(ToolError::Input(_))));
        f.lambda[0] = "1".into();
        f.dim = 5;
        assert!(f.to_linrep::<Natural>().is_err());
    }

    #[test]
    fn automaton_round_trip() {
        let l = |x: i64| Letter::scalar(x);
        let dfa = MultiTapeDfa::new(
            1,
            [l(0), l(1)],
            2,
            0,
            [0, 1],
            [(0, l(0), 0), (0, l(1), 1), (1, l(0), 0)],
        )
        .unwrap();
        let f = AutomatonFile::from_dfa(&dfa);
        assert_eq!(f.transitions, vec![[0, 0, 0], [0, 1, 1], [1, 0, 0]]);
        let again: AutomatonFile = parse_json(&to_json(&f), "test").unwrap();
        assert_eq!(again.to_dfa().unwrap(), dfa);
    }

    #[test]
    fn words_and_alphabets() {
        assert_eq!(parse_word("021", 1).unwrap(), Word::from_digits(&[0, 2, 1]));
        assert_eq!(
            parse_word("[[-2],[-2]]", 1).unwrap(),
            Word::from_digits(&[-2, -2])
        );
        assert!(parse_word("12", 2).is_err());
        assert!(parse_word("[[1,2]]", 1).is_err());
        assert_eq!(format_word(&Word::from_digits(&[1, 0, 1])), "101");
        assert_eq!(format_word(&Word::from_digits(&[-1, 0])), "[[-1],[0]]");
        assert_eq!(parse_alphabet("2,0,1,1", 1).unwrap().len(), 3);
        assert_eq!(parse_alphabet("-1..1", 2).unwrap().len(), 9);
        assert_eq!(
            parse_alphabet("[[0,1],[1,0]]", 2).unwrap()[0],
            Letter(vec![0, 1])
        );
        assert!(parse_alphabet("0,1", 2).is_err());
        assert!(parse_alphabet("[[0]]", 2).is_err());
    }
}
