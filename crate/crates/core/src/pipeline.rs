//! From greedy-indexed to value-indexed linear representations and back.
//!
//! Given a weighted automaton `A_G` for `G_f = Σ f(n) rep_U(n)` and a
//! normalizer `N` for a letter set `A`, the star product `N ⊛ A_G` weights a
//! word `w` by the weight of `||v||` in `A_G`, where `(w, v)` is accepted by
//! `N`. That is right for words of zero delay. The value automaton `A_V`
//! adds a state `α` for positive delays and unit-weight edges between
//! copies of the initial state of `A_G` for negative delays, so that it
//! recognizes `V_{f,A} = Σ f(||val_U(w)||) w`.
//!
//! Index layout: `α` is 0 and the product state `(q, p)` is `1 + q·r + p`,
//! where `r` is the number of states of `A_G`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::dfa::MultiTapeDfa;
use crate::normalizer::{
    build_multidim_normalizer_with, greedy_condition_dfa_with, NormalizerOptions,
};
use crate::numeration::{Letter, SystemTuple, Word};
use crate::semiring::{Matrix, Natural, Semiring};
use crate::wfa::{
    initial_normal_form, restrict_to_language, LinearRepresentation, WeightedAutomaton,
};
use crate::{Error, Result};

/// `N ⊛ B` together with the factor sizes.
#[derive(Clone, Debug)]
pub struct StarProduct<S> {
    pub automaton: WeightedAutomaton<S>,
    /// Number of normalizer states.
    pub s: usize,
    /// Number of weighted-automaton states.
    pub r: usize,
}

impl<S> StarProduct<S> {
    /// `(normalizer state, automaton state)` of a product index.
    pub fn pair(&self, index: usize) -> (usize, usize) {
        (index / self.r, index % self.r)
    }

    pub fn index(&self, q: usize, p: usize) -> usize {
        q * self.r + p
    }
}

/// Star product of a normalizer over letters `(a, b)` (with `a` of
/// dimension `first_dim`) and a weighted automaton over `σ(b)`.
pub fn star_product<S: Semiring>(
    n: &MultiTapeDfa,
    first_dim: usize,
    sigma: impl Fn(&Letter) -> Letter,
    b: &WeightedAutomaton<S>,
) -> Result<StarProduct<S>> {
    n.check_at_most_one_output(first_dim)?;
    let (s, r) = (n.num_states(), b.num_states());
    let alphabet: BTreeSet<Letter> = n.alphabet().iter().map(|l| l.split(first_dim).0).collect();
    let mut out = WeightedAutomaton::new(first_dim, alphabet, s * r)?;
    for p in 0..r {
        out.set_initial(n.initial() * r + p, b.initial_weight(p).clone())?;
        for q in n.finals() {
            out.set_final(q * r + p, b.final_weight(p).clone())?;
        }
    }
    let mut by_letter: BTreeMap<&Letter, Vec<(usize, usize, &S)>> = BTreeMap::new();
    for (p1, l, p2, w) in b.edges() {
        by_letter.entry(l).or_default().push((p1, p2, w));
    }
    for (q1, l, q2) in n.transitions() {
        let (a, out_letter) = l.split(first_dim);
        if let Some(edges) = by_letter.get(&sigma(&out_letter)) {
            for &(p1, p2, w) in edges {
                out.set_edge(q1 * r + p1, &a, q2 * r + p2, w.clone())?;
            }
        }
    }
    Ok(StarProduct {
        automaton: out,
        s,
        r,
    })
}

/// The value automaton `A_V` with the pieces needed to inspect it.
#[derive(Clone, Debug)]
pub struct ValueAutomaton<S> {
    pub automaton: WeightedAutomaton<S>,
    pub star: StarProduct<S>,
    /// Index of the initial state of `A_G`.
    pub initial_g: usize,
    /// Unit edges `(from, letter, to)` between copies of the initial state of
    /// `A_G`, as indices of `automaton`.
    pub red_edges: Vec<(usize, Letter, usize)>,
    /// For each letter `a` and product index `j`, every `ℓ ≤ rs` such that
    /// a path labelled `0^ℓ a` leads from the initial product state to `j`.
    pub ell: BTreeMap<(Letter, usize), Vec<usize>>,
}

/// Index of `α` in the value automaton.
pub const ALPHA: usize = 0;

/// Builds `A_V` from a normalizer and an automaton in initial normal form.
pub fn build_av<S: Semiring>(
    n: &MultiTapeDfa,
    first_dim: usize,
    sigma: impl Fn(&Letter) -> Letter,
    g: &WeightedAutomaton<S>,
) -> Result<ValueAutomaton<S>> {
    if !g.is_initial_normal() {
        return Err(Error::Contract(
            "the weighted automaton is not in initial normal form".into(),
        ));
    }
    let initial_g = g
        .unique_initial()
        .expect("normal form has one initial state");
    let star = star_product(n, first_dim, sigma, g)?;
    let (s, r) = (star.s, star.r);
    let rs = s * r;
    let p = &star.automaton;
    let start = star.index(n.initial(), initial_g);
    let alphabet: Vec<Letter> = p.alphabet().iter().cloned().collect();
    let zero = Letter::zero(first_dim);

    let mut av = WeightedAutomaton::new(first_dim, alphabet.iter().cloned(), rs + 1)?;
    av.set_initial(ALPHA, p.initial_weight(start).clone())?;
    for k in 0..rs {
        av.set_initial(1 + k, p.initial_weight(k).clone())?;
        av.set_final(1 + k, p.final_weight(k).clone())?;
    }
    for (k1, a, k2, w) in p.edges() {
        av.set_edge(1 + k1, a, 1 + k2, w.clone())?;
    }
    let mut red_edges = Vec::new();
    let zero_out = Letter::zero(n.dim() - first_dim);
    for (q1, l, q2) in n.transitions() {
        let (a, b) = l.split(first_dim);
        if b == zero_out {
            let (from, to) = (1 + star.index(q1, initial_g), 1 + star.index(q2, initial_g));
            av.set_edge(from, &a, to, S::one())?;
            red_edges.push((from, a, to));
        }
    }

    let matrices: BTreeMap<Letter, Matrix<S>> = p.to_linrep()?.mu_map().clone();
    let m_zero = matrices
        .get(&zero)
        .cloned()
        .unwrap_or_else(|| Matrix::zeros(rs, rs));
    let mut row = Matrix::zeros(1, rs);
    row.set(0, start, S::one());
    let mut sums: BTreeMap<&Letter, Matrix<S>> =
        alphabet.iter().map(|a| (a, Matrix::zeros(1, rs))).collect();
    for _ in 0..rs {
        row = row.mul(&m_zero)?;
        for a in &alphabet {
            let term = row.mul(&matrices[a])?;
            let acc = sums.get_mut(a).expect("every letter has a sum");
            *acc = acc.add(&term)?;
        }
    }
    for (a, m) in &sums {
        for j in 0..rs {
            let w = m.get(0, j);
            if !w.is_zero() {
                av.set_edge(ALPHA, a, 1 + j, w.clone())?;
            }
        }
    }

    let ell = ell_table(p, start, &alphabet, &zero, rs);
    Ok(ValueAutomaton {
        automaton: av,
        star,
        initial_g,
        red_edges,
        ell,
    })
}

/// For each letter and target, the lengths `ℓ ∈ [0, rs]` of zero prefixes
/// admitting a path `0^ℓ a` from `start`.
fn ell_table<S: Semiring>(
    p: &WeightedAutomaton<S>,
    start: usize,
    alphabet: &[Letter],
    zero: &Letter,
    rs: usize,
) -> BTreeMap<(Letter, usize), Vec<usize>> {
    let mut succ: BTreeMap<&Letter, Vec<Vec<usize>>> = BTreeMap::new();
    for (k1, a, k2, _) in p.edges() {
        succ.entry(a).or_insert_with(|| vec![Vec::new(); rs])[k1].push(k2);
    }
    let step = |set: &BTreeSet<usize>, a: &Letter| -> BTreeSet<usize> {
        match succ.get(a) {
            Some(s) => set.iter().flat_map(|&k| s[k].iter().copied()).collect(),
            None => BTreeSet::new(),
        }
    };
    let mut table: BTreeMap<(Letter, usize), Vec<usize>> = BTreeMap::new();
    let mut reach: BTreeSet<usize> = [start].into();
    for l in 0..=rs {
        for a in alphabet {
            for j in step(&reach, a) {
                table.entry((a.clone(), j)).or_default().push(l);
            }
        }
        reach = step(&reach, zero);
    }
    table
}

impl<S: Semiring> ValueAutomaton<S> {
    /// Whether every `(a, j)` admits at most one zero-prefix length.
    pub fn unique_ell_holds(&self) -> bool {
        self.ell.values().all(|ls| ls.len() <= 1)
    }

    /// Row of `α` recomputed target by target: `M(0^ℓ a)` at the initial
    /// row for the unique positive `ℓ` of each target.
    pub fn alpha_row_by_paths(&self, a: &Letter) -> Result<Vec<S>> {
        let p = &self.star.automaton;
        let rs = p.num_states();
        let start = self.star.index(0, self.initial_g);
        let zero = Letter::zero(p.dim());
        let rep = p.to_linrep()?;
        let mut out = vec![S::zero(); rs];
        for (j, slot) in out.iter_mut().enumerate() {
            let ls: Vec<usize> = self
                .ell
                .get(&(a.clone(), j))
                .map(|ls| ls.iter().copied().filter(|&l| l >= 1).collect())
                .unwrap_or_default();
            if let [l] = ls[..] {
                let w = Word::new(p.dim(), [vec![zero.clone(); l], vec![a.clone()]].concat())?;
                *slot = rep.mu_word(&w)?.get(start, j).clone();
            } else if ls.len() > 1 {
                return Err(Error::Contract(format!(
                    "several zero-prefix lengths lead to state {j} on ({a})"
                )));
            }
        }
        Ok(out)
    }

    pub fn alpha_row(&self, a: &Letter) -> Vec<S> {
        (0..self.star.automaton.num_states())
            .map(|j| self.automaton.edge(ALPHA, a, 1 + j))
            .collect()
    }

    /// Weight of `w` split by the first step of its paths:
    /// `(inside the star product, first edge a unit edge, from α)`.
    pub fn decompose(&self, w: &Word) -> Result<[S; 3]> {
        let rep = self.automaton.to_linrep()?;
        let star_weight = self.star.automaton.weight(w);
        let Some((a, rest)) = w.letters().split_first() else {
            return Ok([star_weight, S::zero(), S::zero()]);
        };
        let rest = Word::new(w.dim(), rest.to_vec())?;
        let tail = rep.mu_word(&rest)?.mul(rep.gamma())?;
        let start = 1 + self.star.index(0, self.initial_g);
        let i = self.automaton.initial_weight(start);
        let red = S::sum(
            self.red_edges
                .iter()
                .filter(|(from, l, _)| *from == start && l == a)
                .map(|(_, _, to)| i.mul(tail.get(*to, 0))),
        );
        let alpha = S::sum((0..self.automaton.num_states()).map(|q| {
            self.automaton
                .initial_weight(ALPHA)
                .mul(&self.automaton.edge(ALPHA, a, q))
                .mul(tail.get(q, 0))
        }));
        Ok([star_weight, red, alpha])
    }
}

/// Sizes and diagnostics of a conversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConversionReport {
    /// States of the weighted automaton after normal form.
    pub r: usize,
    /// States of the normalizer.
    pub s: usize,
    pub dim_untrimmed: usize,
    pub dim_output: usize,
    pub trimmed: bool,
    /// Whether the zero letter was added to the alphabet internally.
    pub zero_adjoined: bool,
    /// `((letter, product index), lengths ℓ ≥ 1)` for nonempty entries.
    pub ell: Vec<(Letter, usize, Vec<usize>)>,
    pub unique_ell: bool,
    pub alpha_row_cross_check: bool,
    pub validation: Option<ValidationSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationSummary {
    pub max_len: usize,
    pub words_checked: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<Word>,
}

#[derive(Clone, Debug)]
pub struct ConversionOptions {
    pub trim: bool,
    pub normalizer: NormalizerOptions,
}

impl Default for ConversionOptions {
    fn default() -> Self {
        ConversionOptions {
            trim: true,
            normalizer: NormalizerOptions::default(),
        }
    }
}

/// Result of [`greedy_to_value_linrep`].
#[derive(Clone, Debug)]
pub struct Conversion<S> {
    pub linrep: LinearRepresentation<S>,
    pub value_automaton: ValueAutomaton<S>,
    pub normalizer: MultiTapeDfa,
    pub report: ConversionReport,
}

/// Linear representation of `V_{f,A}` from one of `G_f`.
pub fn greedy_to_value_linrep<S: Semiring>(
    g: &LinearRepresentation<S>,
    ts: &SystemTuple,
    a: &[Letter],
    opts: &ConversionOptions,
) -> Result<Conversion<S>> {
    let d = ts.dim();
    if g.letter_dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "series over letters of dimension {} for a {d}-tuple of systems",
            g.letter_dim()
        )));
    }
    let zero = Letter::zero(d);
    let mut letters: BTreeSet<Letter> = a.iter().cloned().collect();
    let zero_adjoined = letters.insert(zero.clone());
    let letters: Vec<Letter> = letters.into_iter().collect();

    let nf = initial_normal_form(&g.to_wfa()?);
    let i_g = nf.unique_initial().ok_or_else(|| {
        Error::Contract("the series has no initial weight; nothing to convert".into())
    })?;
    let order: Vec<usize> = core::iter::once(i_g)
        .chain((0..nf.num_states()).filter(|&q| q != i_g))
        .collect();
    let ag = nf.restrict_states(&order);

    let n = build_multidim_normalizer_with(ts, &letters, &opts.normalizer)?;
    let av = build_av(&n, d, Letter::abs, &ag)?;
    let rs = av.star.s * av.star.r;

    let full = av.automaton.to_linrep()?;
    let mut linrep = if opts.trim {
        full.select(&av.automaton.useful_states())
    } else {
        full
    };
    if zero_adjoined {
        let original: Vec<Letter> = a.to_vec();
        linrep = alphabet_restrict_linrep(&linrep, &original)?;
    }

    let mut cross_check = true;
    for l in &letters {
        if av.alpha_row_by_paths(l).ok().as_ref() != Some(&av.alpha_row(l)) {
            cross_check = false;
        }
    }
    let report = ConversionReport {
        r: av.star.r,
        s: av.star.s,
        dim_untrimmed: rs + 1,
        dim_output: linrep.dim(),
        trimmed: opts.trim,
        zero_adjoined,
        ell: av
            .ell
            .iter()
            .filter_map(|((l, j), ls)| {
                let pos: Vec<usize> = ls.iter().copied().filter(|&x| x >= 1).collect();
                (!pos.is_empty()).then(|| (l.clone(), *j, pos))
            })
            .collect(),
        unique_ell: av.unique_ell_holds(),
        alpha_row_cross_check: cross_check,
        validation: None,
    };
    Ok(Conversion {
        linrep,
        value_automaton: av,
        normalizer: n,
        report,
    })
}

/// `f(||val_U(w)||)` evaluated through the greedy-indexed series.
pub fn value_oracle<S: Semiring>(
    g: &LinearRepresentation<S>,
    ts: &SystemTuple,
    w: &Word,
) -> Result<S> {
    let v: Vec<_> = ts.val_vec(w)?.into_iter().map(|x| x.abs()).collect();
    g.eval(&ts.rep_vec(&v)?)
}

/// Compares `v` with [`value_oracle`] on every word over `a` of length at
/// most `max_len`.
pub fn validate_value_linrep<S: Semiring>(
    v: &LinearRepresentation<S>,
    g: &LinearRepresentation<S>,
    ts: &SystemTuple,
    a: &[Letter],
    max_len: usize,
) -> Result<ValidationSummary> {
    let mut summary = ValidationSummary {
        max_len,
        words_checked: 0,
        mismatches: 0,
        first_mismatch: None,
    };
    for w in Word::all_up_to(ts.dim(), a, max_len) {
        summary.words_checked += 1;
        if v.eval(&w)? != value_oracle(g, ts, &w)? {
            summary.mismatches += 1;
            summary.first_mismatch.get_or_insert(w);
        }
    }
    Ok(summary)
}

/// Acceptor of padded tuples of greedy words. Without `leading_zeros` this
/// is `rep_U(N^d)`, where no word starts with the zero letter; with it every
/// track ranges over `0*rep_U(N)`.
pub fn greedy_tuple_dfa(
    ts: &SystemTuple,
    leading_zeros: bool,
    opts: &NormalizerOptions,
) -> Result<MultiTapeDfa> {
    let parts = ts
        .systems()
        .iter()
        .map(|ns| greedy_condition_dfa_with(ns, opts))
        .collect::<Result<Vec<_>>>()?;
    let d = ts.dim();
    let zero = Letter::zero(d);
    let alphabet = ts.digit_alphabet();
    let start: (Vec<usize>, bool) = (
        parts.iter().map(MultiTapeDfa::initial).collect(),
        leading_zeros,
    );
    Ok(MultiTapeDfa::explore_from(
        d,
        alphabet.clone(),
        start,
        |(qs, _)| qs.iter().zip(&parts).all(|(&q, p)| p.is_final(q)),
        |(qs, started)| {
            alphabet
                .iter()
                .filter(|l| *started || **l != zero)
                .filter_map(|l| {
                    let next: Option<Vec<usize>> = qs
                        .iter()
                        .zip(&parts)
                        .zip(&l.0)
                        .map(|((&q, p), &x)| p.step(q, &Letter::scalar(x)))
                        .collect();
                    next.map(|n| (l.clone(), (n, true)))
                })
                .collect()
        },
    )
    .minimize())
}

/// `s ⊙ rep_U(N^d)`: the greedy-indexed series of a value-indexed one.
pub fn value_to_greedy_linrep<S: Semiring>(
    s: &LinearRepresentation<S>,
    ts: &SystemTuple,
) -> Result<LinearRepresentation<S>> {
    let digits: BTreeSet<Letter> = ts.digit_alphabet().into_iter().collect();
    let restricted = alphabet_restrict_linrep(
        s,
        &s.alphabet()
            .into_iter()
            .filter(|l| digits.contains(l))
            .collect::<Vec<_>>(),
    )?;
    restrict_to_language(
        &restricted,
        &greedy_tuple_dfa(ts, false, &NormalizerOptions::default())?,
    )
}

/// Drops the matrices of letters outside `sub`.
pub fn alphabet_restrict_linrep<S: Semiring>(
    s: &LinearRepresentation<S>,
    sub: &[Letter],
) -> Result<LinearRepresentation<S>> {
    let mu = sub
        .iter()
        .map(|a| {
            s.mu(a)
                .map(|m| (a.clone(), m.clone()))
                .ok_or_else(|| Error::Contract(format!("letter ({a}) is not in the alphabet")))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    LinearRepresentation::new(s.letter_dim(), s.lambda().clone(), mu, s.gamma().clone())
}

fn natural_matrix<const N: usize>(rows: [[u64; N]; N]) -> Matrix<Natural> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| Natural::from(x)).collect())
            .collect(),
    )
    .expect("square literal")
}

/// Linear representation over `ℕ` of the running example series on
/// `{0, 1, 2}`, states `W, X, Y, Z`.
pub fn fixture_series_phi2() -> LinearRepresentation<Natural> {
    let mu = [
        (
            0,
            natural_matrix([[0, 0, 0, 0], [0, 1, 0, 0], [0, 1, 0, 0], [0, 1, 0, 0]]),
        ),
        (
            1,
            natural_matrix([[0, 3, 0, 1], [0, 3, 0, 0], [0, 0, 3, 0], [0, 0, 0, 1]]),
        ),
        (
            2,
            natural_matrix([[0, 0, 2, 0], [0, 0, 2, 0], [0, 0, 0, 0], [0, 0, 2, 0]]),
        ),
    ]
    .into_iter()
    .map(|(a, m)| (Letter::scalar(a), m))
    .collect();
    let n = |x: u64| Natural::from(x);
    LinearRepresentation::new(
        1,
        Matrix::row_vector(vec![n(1), n(0), n(0), n(0)]),
        mu,
        Matrix::column_vector(vec![n(1); 4]),
    )
    .expect("fixture shapes agree")
}

/// The printed value-indexed representation for the running example over
/// `{0, 1, 2}`, states `α, (1,W), (1,X), (1,Z), (2,Y), (3,X), (3,Y), (3,Z),
/// (4,X), (5,X)`.
pub fn fixture_value_phi2() -> LinearRepresentation<Natural> {
    let mu = [
        (
            0,
            natural_matrix([
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 3, 1, 0, 0, 0],
                [0, 0, 1, 0, 0, 3, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0, 0, 1, 0, 0],
                [0, 0, 1, 0, 0, 0, 3, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                [0, 0, 3, 0, 0, 0, 2, 0, 0, 0],
            ]),
        ),
        (
            1,
            natural_matrix([
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                [0, 0, 3, 1, 0, 2, 0, 0, 0, 0],
                [0, 0, 3, 0, 0, 0, 2, 0, 0, 0],
                [0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 3, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
                [0, 0, 0, 0, 2, 0, 0, 0, 0, 0],
            ]),
        ),
        (
            2,
            natural_matrix([
                [0, 0, 0, 0, 0, 0, 0, 0, 4, 0],
                [0, 0, 0, 0, 2, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 2, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 2, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
                [0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
                [0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
                [0, 0, 0, 0, 0, 0, 0, 0, 3, 1],
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            ]),
        ),
    ]
    .into_iter()
    .map(|(a, m)| (Letter::scalar(a), m))
    .collect();
    let n = |x: u64| Natural::from(x);
    let lambda = [1, 1, 0, 0, 0, 0, 0, 0, 0, 0].map(n).to_vec();
    let gamma = [0, 1, 1, 1, 1, 0, 0, 0, 0, 1].map(n).to_vec();
    LinearRepresentation::new(
        1,
        Matrix::row_vector(lambda),
        mu,
        Matrix::column_vector(gamma),
    )
    .expect("fixture shapes agree")
}
