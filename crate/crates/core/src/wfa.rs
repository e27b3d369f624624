//! Weighted automata over a semiring and linear representations.
//!
//! Only nonzero edges are stored. The weight of a word is the sum over its
//! paths of `I(start) · E(path) · T(end)`; a linear representation
//! `(λ, μ, γ)` evaluates `w` as `λ μ(w) γ`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dfa::MultiTapeDfa;
use crate::numeration::{Letter, Word};
use crate::semiring::{Matrix, Semiring};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedAutomaton<S> {
    dim: usize,
    alphabet: BTreeSet<Letter>,
    initial: Vec<S>,
    terminal: Vec<S>,
    edges: Vec<BTreeMap<Letter, BTreeMap<usize, S>>>,
}

impl<S: Semiring> WeightedAutomaton<S> {
    /// `states` states with zero initial and final weights and no edges.
    pub fn new(
        dim: usize,
        alphabet: impl IntoIterator<Item = Letter>,
        states: usize,
    ) -> Result<Self> {
        let alphabet: BTreeSet<Letter> = alphabet.into_iter().collect();
        if let Some(l) = alphabet.iter().find(|l| l.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "letter ({l}) in an alphabet of dimension {dim}"
            )));
        }
        Ok(WeightedAutomaton {
            dim,
            alphabet,
            initial: vec![S::zero(); states],
            terminal: vec![S::zero(); states],
            edges: vec![BTreeMap::new(); states],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alphabet(&self) -> &BTreeSet<Letter> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.initial.len()
    }

    pub fn initial_weight(&self, q: usize) -> &S {
        &self.initial[q]
    }

    pub fn final_weight(&self, q: usize) -> &S {
        &self.terminal[q]
    }

    fn check_state(&self, q: usize) -> Result<()> {
        if q >= self.num_states() {
            return Err(Error::Contract(format!("state {q} out of range")));
        }
        Ok(())
    }

    pub fn set_initial(&mut self, q: usize, w: S) -> Result<()> {
        self.check_state(q)?;
        self.initial[q] = w;
        Ok(())
    }

    pub fn set_final(&mut self, q: usize, w: S) -> Result<()> {
        self.check_state(q)?;
        self.terminal[q] = w;
        Ok(())
    }

    /// Sets `E(p, a, q)`; a zero weight removes the edge.
    pub fn set_edge(&mut self, p: usize, a: &Letter, q: usize, w: S) -> Result<()> {
        self.check_state(p)?;
        self.check_state(q)?;
        if !self.alphabet.contains(a) {
            return Err(Error::UnknownLetter(format!("({a})")));
        }
        if w.is_zero() {
            if let Some(m) = self.edges[p].get_mut(a) {
                m.remove(&q);
                if m.is_empty() {
                    self.edges[p].remove(a);
                }
            }
        } else {
            self.edges[p].entry(a.clone()).or_default().insert(q, w);
        }
        Ok(())
    }

    /// Adds `w` to `E(p, a, q)`.
    pub fn add_edge(&mut self, p: usize, a: &Letter, q: usize, w: S) -> Result<()> {
        let sum = self.edge(p, a, q).add(&w);
        self.set_edge(p, a, q, sum)
    }

    pub fn edge(&self, p: usize, a: &Letter, q: usize) -> S {
        self.edges
            .get(p)
            .and_then(|m| m.get(a))
            .and_then(|m| m.get(&q))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    /// Nonzero edges `(from, letter, to, weight)` ordered by source, letter,
    /// target.
    pub fn edges(&self) -> impl Iterator<Item = (usize, &Letter, usize, &S)> + '_ {
        self.edges.iter().enumerate().flat_map(|(p, m)| {
            m.iter()
                .flat_map(move |(a, t)| t.iter().map(move |(&q, w)| (p, a, q, w)))
        })
    }

    pub fn num_edges(&self) -> usize {
        self.edges().count()
    }

    /// Path-sum weight of `w`; zero when a letter is outside the alphabet.
    pub fn weight(&self, w: &Word) -> S {
        let mut current: Vec<S> = self.initial.clone();
        for a in w.letters() {
            let mut next = vec![S::zero(); self.num_states()];
            for (p, x) in current.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                if let Some(targets) = self.edges[p].get(a) {
                    for (&q, e) in targets {
                        next[q] = next[q].add(&x.mul(e));
                    }
                }
            }
            current = next;
        }
        S::sum(current.iter().zip(&self.terminal).map(|(x, t)| x.mul(t)))
    }

    /// Linear representation with state `order[i]` at index `i`.
    pub fn to_linrep_ordered(&self, order: &[usize]) -> Result<LinearRepresentation<S>> {
        let n = self.num_states();
        let mut seen = vec![false; n];
        if order.len() != n
            || order
                .iter()
                .any(|&q| q >= n || core::mem::replace(&mut seen[q], true))
        {
            return Err(Error::Contract("state order is not a permutation".into()));
        }
        let mut index = vec![0; n];
        for (i, &q) in order.iter().enumerate() {
            index[q] = i;
        }
        let lambda = Matrix::row_vector(order.iter().map(|&q| self.initial[q].clone()).collect());
        let gamma =
            Matrix::column_vector(order.iter().map(|&q| self.terminal[q].clone()).collect());
        let mut mu: BTreeMap<Letter, Matrix<S>> = self
            .alphabet
            .iter()
            .map(|a| (a.clone(), Matrix::zeros(n, n)))
            .collect();
        for (p, a, q, w) in self.edges() {
            mu.get_mut(a)
                .expect("edge letters are in the alphabet")
                .set(index[p], index[q], w.clone());
        }
        LinearRepresentation::new(self.dim, lambda, mu, gamma)
    }

    pub fn to_linrep(&self) -> Result<LinearRepresentation<S>> {
        let order: Vec<usize> = (0..self.num_states()).collect();
        self.to_linrep_ordered(&order)
    }

    /// Whether there is exactly one state with nonzero initial weight, with
    /// no incoming edge and no outgoing edge labelled by the zero letter.
    pub fn is_initial_normal(&self) -> bool {
        let starts: Vec<usize> = (0..self.num_states())
            .filter(|&q| !self.initial[q].is_zero())
            .collect();
        let [i] = starts[..] else {
            return false;
        };
        let zero = Letter::zero(self.dim);
        !self.edges().any(|(_, _, q, _)| q == i) && !self.edges[i].contains_key(&zero)
    }

    /// The state with nonzero initial weight of an automaton in initial
    /// normal form.
    pub fn unique_initial(&self) -> Option<usize> {
        let mut it = (0..self.num_states()).filter(|&q| !self.initial[q].is_zero());
        match (it.next(), it.next()) {
            (Some(q), None) => Some(q),
            _ => None,
        }
    }

    /// Restriction to the states in `keep`, in the given order.
    pub fn restrict_states(&self, keep: &[usize]) -> Self {
        let mut index = vec![usize::MAX; self.num_states()];
        for (i, &q) in keep.iter().enumerate() {
            index[q] = i;
        }
        let mut out = WeightedAutomaton {
            dim: self.dim,
            alphabet: self.alphabet.clone(),
            initial: keep.iter().map(|&q| self.initial[q].clone()).collect(),
            terminal: keep.iter().map(|&q| self.terminal[q].clone()).collect(),
            edges: vec![BTreeMap::new(); keep.len()],
        };
        for (p, a, q, w) in self.edges() {
            if index[p] != usize::MAX && index[q] != usize::MAX {
                out.edges[index[p]]
                    .entry(a.clone())
                    .or_default()
                    .insert(index[q], w.clone());
            }
        }
        out
    }

    /// States reachable from a nonzero initial weight and reaching a nonzero
    /// final weight, in increasing order.
    pub fn useful_states(&self) -> Vec<usize> {
        let n = self.num_states();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (p, _, q, _) in self.edges() {
            succ[p].push(q);
            pred[q].push(p);
        }
        let closure = |seeds: Vec<usize>, next: &Vec<Vec<usize>>| {
            let mut mark = vec![false; n];
            let mut stack = seeds;
            for &q in &stack {
                mark[q] = true;
            }
            while let Some(q) = stack.pop() {
                for &t in &next[q] {
                    if !mark[t] {
                        mark[t] = true;
                        stack.push(t);
                    }
                }
            }
            mark
        };
        let acc = closure(
            (0..n).filter(|&q| !self.initial[q].is_zero()).collect(),
            &succ,
        );
        let coacc = closure(
            (0..n).filter(|&q| !self.terminal[q].is_zero()).collect(),
            &pred,
        );
        (0..n).filter(|&q| acc[q] && coacc[q]).collect()
    }

    /// Keeps the useful states in their original relative order.
    pub fn trim(&self) -> Self {
        self.restrict_states(&self.useful_states())
    }

    /// Same automaton with every weight mapped into another semiring.
    pub fn map<T: Semiring>(&self, f: impl Fn(&S) -> T) -> WeightedAutomaton<T> {
        let mut out = WeightedAutomaton {
            dim: self.dim,
            alphabet: self.alphabet.clone(),
            initial: self.initial.iter().map(&f).collect(),
            terminal: self.terminal.iter().map(&f).collect(),
            edges: vec![BTreeMap::new(); self.num_states()],
        };
        for (p, a, q, w) in self.edges() {
            let w = f(w);
            if !w.is_zero() {
                out.edges[p].entry(a.clone()).or_default().insert(q, w);
            }
        }
        out
    }
}

/// Linear representation `(λ, μ, γ)` of dimension `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRepresentation<S> {
    letter_dim: usize,
    lambda: Matrix<S>,
    mu: BTreeMap<Letter, Matrix<S>>,
    gamma: Matrix<S>,
}

impl<S: Semiring> LinearRepresentation<S> {
    pub fn new(
        letter_dim: usize,
        lambda: Matrix<S>,
        mu: BTreeMap<Letter, Matrix<S>>,
        gamma: Matrix<S>,
    ) -> Result<Self> {
        let r = lambda.cols();
        if lambda.rows() != 1 || gamma.cols() != 1 || gamma.rows() != r {
            return Err(Error::DimensionMismatch(format!(
                "lambda is {}x{} and gamma is {}x{}",
                lambda.rows(),
                lambda.cols(),
                gamma.rows(),
                gamma.cols()
            )));
        }
        for (a, m) in &mu {
            if a.dim() != letter_dim {
                return Err(Error::DimensionMismatch(format!(
                    "letter ({a}) of dimension {} in an alphabet of dimension {letter_dim}",
                    a.dim()
                )));
            }
            if m.rows() != r || m.cols() != r {
                return Err(Error::DimensionMismatch(format!(
                    "mu({a}) is {}x{}, expected {r}x{r}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(LinearRepresentation {
            letter_dim,
            lambda,
            mu,
            gamma,
        })
    }

    pub fn dim(&self) -> usize {
        self.lambda.cols()
    }

    pub fn letter_dim(&self) -> usize {
        self.letter_dim
    }

    pub fn lambda(&self) -> &Matrix<S> {
        &self.lambda
    }

    pub fn gamma(&self) -> &Matrix<S> {
        &self.gamma
    }

    pub fn mu(&self, a: &Letter) -> Option<&Matrix<S>> {
        self.mu.get(a)
    }

    pub fn mu_map(&self) -> &BTreeMap<Letter, Matrix<S>> {
        &self.mu
    }

    pub fn alphabet(&self) -> Vec<Letter> {
        self.mu.keys().cloned().collect()
    }

    /// `μ(w)`.
    pub fn mu_word(&self, w: &Word) -> Result<Matrix<S>> {
        let mut m = Matrix::identity(self.dim());
        for a in w.letters() {
            m = m.mul(self.letter_matrix(a)?)?;
        }
        Ok(m)
    }

    fn letter_matrix(&self, a: &Letter) -> Result<&Matrix<S>> {
        self.mu
            .get(a)
            .ok_or_else(|| Error::UnknownLetter(format!("({a})")))
    }

    /// `λ μ(w) γ`.
    pub fn eval(&self, w: &Word) -> Result<S> {
        if !w.is_empty() && w.dim() != self.letter_dim {
            return Err(Error::DimensionMismatch(format!(
                "word of dimension {} for letters of dimension {}",
                w.dim(),
                self.letter_dim
            )));
        }
        let mut row = self.lambda.clone();
        for a in w.letters() {
            row = row.mul(self.letter_matrix(a)?)?;
        }
        Ok(row.mul(&self.gamma)?.get(0, 0).clone())
    }

    pub fn map<T: Semiring>(&self, f: impl Fn(&S) -> T) -> LinearRepresentation<T> {
        LinearRepresentation {
            letter_dim: self.letter_dim,
            lambda: self.lambda.map(&f),
            mu: self
                .mu
                .iter()
                .map(|(a, m)| (a.clone(), m.map(&f)))
                .collect(),
            gamma: self.gamma.map(&f),
        }
    }

    /// Keeps the indices in `keep`, in order.
    pub fn select(&self, keep: &[usize]) -> Self {
        LinearRepresentation {
            letter_dim: self.letter_dim,
            lambda: self.lambda.select(&[0], keep),
            mu: self
                .mu
                .iter()
                .map(|(a, m)| (a.clone(), m.select(keep, keep)))
                .collect(),
            gamma: self.gamma.select(keep, &[0]),
        }
    }

    /// The automaton with one state per index.
    pub fn to_wfa(&self) -> Result<WeightedAutomaton<S>> {
        let r = self.dim();
        if r == 0 {
            return Err(Error::Contract(
                "a linear representation of dimension 0 has no automaton".into(),
            ));
        }
        let mut a = WeightedAutomaton::new(self.letter_dim, self.mu.keys().cloned(), r)?;
        for i in 0..r {
            a.initial[i] = self.lambda.get(0, i).clone();
            a.terminal[i] = self.gamma.get(i, 0).clone();
        }
        for (l, m) in &self.mu {
            for i in 0..r {
                for j in 0..r {
                    let w = m.get(i, j);
                    if !w.is_zero() {
                        a.edges[i]
                            .entry(l.clone())
                            .or_default()
                            .insert(j, w.clone());
                    }
                }
            }
        }
        Ok(a)
    }
}

pub fn weight_of_word<S: Semiring>(a: &WeightedAutomaton<S>, w: &Word) -> S {
    a.weight(w)
}

pub fn wfa_to_linrep<S: Semiring>(
    a: &WeightedAutomaton<S>,
    order: &[usize],
) -> Result<LinearRepresentation<S>> {
    a.to_linrep_ordered(order)
}

pub fn linrep_to_wfa<S: Semiring>(l: &LinearRepresentation<S>) -> Result<WeightedAutomaton<S>> {
    l.to_wfa()
}

/// Kronecker construction: `(s ⊙ t, w) = (s, w) · (t, w)`; index
/// `i · r_t + j` holds the pair `(i, j)`.
pub fn hadamard<S: Semiring>(
    s: &LinearRepresentation<S>,
    t: &LinearRepresentation<S>,
) -> Result<LinearRepresentation<S>> {
    if s.letter_dim != t.letter_dim || s.mu.keys().ne(t.mu.keys()) {
        return Err(Error::Contract(
            "Hadamard product of series over different alphabets".into(),
        ));
    }
    let mu =
        s.mu.iter()
            .map(|(a, m)| (a.clone(), m.kronecker(&t.mu[a])))
            .collect();
    LinearRepresentation::new(
        s.letter_dim,
        s.lambda.kronecker(&t.lambda),
        mu,
        s.gamma.kronecker(&t.gamma),
    )
}

/// Characteristic series of `L(d)` over `alphabet`, with one index per
/// state of `d`.
pub fn characteristic_series<S: Semiring>(
    d: &MultiTapeDfa,
    alphabet: &[Letter],
) -> Result<LinearRepresentation<S>> {
    let n = d.num_states();
    let mut lambda = Matrix::zeros(1, n);
    lambda.set(0, d.initial(), S::one());
    let gamma = Matrix::column_vector(
        (0..n)
            .map(|q| if d.is_final(q) { S::one() } else { S::zero() })
            .collect(),
    );
    let mu = alphabet
        .iter()
        .map(|a| {
            let mut m = Matrix::zeros(n, n);
            for p in 0..n {
                if let Some(q) = d.step(p, a) {
                    m.set(p, q, S::one());
                }
            }
            (a.clone(), m)
        })
        .collect();
    LinearRepresentation::new(d.dim(), lambda, mu, gamma)
}

/// `s ⊙ L(d)`: coefficients of words rejected by `d` become zero.
pub fn restrict_to_language<S: Semiring>(
    s: &LinearRepresentation<S>,
    d: &MultiTapeDfa,
) -> Result<LinearRepresentation<S>> {
    if d.dim() != s.letter_dim {
        return Err(Error::DimensionMismatch(format!(
            "automaton over letters of dimension {} for a series over dimension {}",
            d.dim(),
            s.letter_dim
        )));
    }
    hadamard(s, &characteristic_series(d, &s.alphabet())?)
}

/// Single initial state without incoming edges or outgoing zero-letter
/// edges. A fresh initial state is put at index 0 unless the automaton
/// already has this form. Weights of words starting with the zero letter
/// become zero; other weights are preserved.
pub fn initial_normal_form<S: Semiring>(a: &WeightedAutomaton<S>) -> WeightedAutomaton<S> {
    if a.is_initial_normal() {
        return a.clone();
    }
    let n = a.num_states();
    let zero = Letter::zero(a.dim);
    let mut out = WeightedAutomaton {
        dim: a.dim,
        alphabet: a.alphabet.clone(),
        initial: vec![S::zero(); n + 1],
        terminal: core::iter::once(S::sum(
            a.initial.iter().zip(&a.terminal).map(|(i, t)| i.mul(t)),
        ))
        .chain(a.terminal.iter().cloned())
        .collect(),
        edges: vec![BTreeMap::new(); n + 1],
    };
    out.initial[0] = S::one();
    for (p, l, q, w) in a.edges() {
        out.edges[p + 1]
            .entry(l.clone())
            .or_default()
            .insert(q + 1, w.clone());
        let i = &a.initial[p];
        if !i.is_zero() && *l != zero {
            let sum = out.edge(0, l, q + 1).add(&i.mul(w));
            if sum.is_zero() {
                if let Some(m) = out.edges[0].get_mut(l) {
                    m.remove(&(q + 1));
                }
            } else {
                out.edges[0]
                    .entry(l.clone())
                    .or_default()
                    .insert(q + 1, sum);
            }
        }
    }
    out.edges[0].retain(|_, m| !m.is_empty());
    out
}
