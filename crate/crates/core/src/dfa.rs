//! Deterministic partial automata over integer-vector letters.
//!
//! A pair letter `(a, b)` with `a, b` of dimension `d` is stored as the
//! `2d`-vector `a ++ b`. Every construction returns states numbered in
//! breadth-first discovery order from the initial state, exploring letters in
//! increasing order, so the initial state is always `0`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::numeration::{Letter, Word};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiTapeDfa {
    dim: usize,
    alphabet: BTreeSet<Letter>,
    initial: usize,
    finals: Vec<bool>,
    delta: Vec<BTreeMap<Letter, usize>>,
}

impl MultiTapeDfa {
    /// Builds an automaton from explicit parts, checking that every letter
    /// has dimension `dim` and belongs to `alphabet`, and that every state id
    /// is below `states`.
    pub fn new(
        dim: usize,
        alphabet: impl IntoIterator<Item = Letter>,
        states: usize,
        initial: usize,
        finals: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, Letter, usize)>,
    ) -> Result<Self> {
        let alphabet: BTreeSet<Letter> = alphabet.into_iter().collect();
        if let Some(l) = alphabet.iter().find(|l| l.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "letter ({l}) in an alphabet of dimension {dim}"
            )));
        }
        if initial >= states {
            return Err(Error::Contract(format!(
                "initial state {initial} out of range"
            )));
        }
        let mut is_final = vec![false; states];
        for f in finals {
            *is_final
                .get_mut(f)
                .ok_or_else(|| Error::Contract(format!("final state {f} out of range")))? = true;
        }
        let mut delta = vec![BTreeMap::new(); states];
        for (p, a, q) in transitions {
            if p >= states || q >= states {
                return Err(Error::Contract(format!(
                    "transition {p} -> {q} out of range"
                )));
            }
            if !alphabet.contains(&a) {
                return Err(Error::UnknownLetter(format!("({a})")));
            }
            if let Some(old) = delta[p].insert(a.clone(), q) {
                if old != q {
                    return Err(Error::Contract(format!(
                        "nondeterministic transitions from {p} on ({a})"
                    )));
                }
            }
        }
        Ok(MultiTapeDfa {
            dim,
            alphabet,
            initial,
            finals: is_final,
            delta,
        })
    }

    /// The one-state automaton accepting nothing.
    pub fn empty(dim: usize, alphabet: impl IntoIterator<Item = Letter>) -> Self {
        MultiTapeDfa {
            dim,
            alphabet: alphabet.into_iter().collect(),
            initial: 0,
            finals: vec![false],
            delta: vec![BTreeMap::new()],
        }
    }

    /// The one-state automaton accepting every word over `alphabet`.
    pub fn universal(dim: usize, alphabet: impl IntoIterator<Item = Letter>) -> Self {
        let alphabet: BTreeSet<Letter> = alphabet.into_iter().collect();
        let delta = vec![alphabet.iter().map(|a| (a.clone(), 0)).collect()];
        MultiTapeDfa {
            dim,
            alphabet,
            initial: 0,
            finals: vec![true],
            delta,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alphabet(&self) -> &BTreeSet<Letter> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.finals[q])
    }

    pub fn step(&self, q: usize, a: &Letter) -> Option<usize> {
        self.delta[q].get(a).copied()
    }

    /// Outgoing transitions of `q` in letter order.
    pub fn transitions_from(&self, q: usize) -> impl Iterator<Item = (&Letter, usize)> + '_ {
        self.delta[q].iter().map(|(a, &t)| (a, t))
    }

    /// All transitions `(from, letter, to)`, by source state then letter.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, &Letter, usize)> + '_ {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(p, m)| m.iter().map(move |(a, &q)| (p, a, q)))
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(BTreeMap::len).sum()
    }

    /// State reached on `w`, if the run exists.
    pub fn run(&self, w: &Word) -> Option<usize> {
        if w.dim() != self.dim && !w.is_empty() {
            return None;
        }
        w.letters()
            .iter()
            .try_fold(self.initial, |q, a| self.step(q, a))
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.run(w).is_some_and(|q| self.finals[q])
    }

    /// Renumbers reachable states in breadth-first order and drops the rest.
    pub fn canonical(&self) -> Self {
        let mut index = vec![usize::MAX; self.num_states()];
        let mut order = vec![self.initial];
        index[self.initial] = 0;
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            for &t in self.delta[q].values() {
                if index[t] == usize::MAX {
                    index[t] = order.len();
                    order.push(t);
                }
            }
        }
        let delta = order
            .iter()
            .map(|&q| {
                self.delta[q]
                    .iter()
                    .map(|(a, &t)| (a.clone(), index[t]))
                    .collect()
            })
            .collect();
        MultiTapeDfa {
            dim: self.dim,
            alphabet: self.alphabet.clone(),
            initial: 0,
            finals: order.iter().map(|&q| self.finals[q]).collect(),
            delta,
        }
    }

    /// Builds an automaton by exploring `key`-labelled states from `start`;
    /// `succ` lists the labelled successors of a key.
    pub fn explore_from<K: Ord + Clone>(
        dim: usize,
        alphabet: impl IntoIterator<Item = Letter>,
        start: K,
        mut is_final: impl FnMut(&K) -> bool,
        mut succ: impl FnMut(&K) -> Vec<(Letter, K)>,
    ) -> Self {
        let mut ids: BTreeMap<K, usize> = BTreeMap::new();
        let mut queue = VecDeque::new();
        let mut finals = Vec::new();
        let mut delta: Vec<BTreeMap<Letter, usize>> = Vec::new();
        ids.insert(start.clone(), 0);
        finals.push(is_final(&start));
        delta.push(BTreeMap::new());
        queue.push_back(start);
        while let Some(k) = queue.pop_front() {
            let p = ids[&k];
            let mut out = succ(&k);
            out.sort_by(|x, y| x.0.cmp(&y.0));
            for (a, t) in out {
                let q = match ids.get(&t) {
                    Some(&q) => q,
                    None => {
                        let q = delta.len();
                        ids.insert(t.clone(), q);
                        finals.push(is_final(&t));
                        delta.push(BTreeMap::new());
                        queue.push_back(t);
                        q
                    }
                };
                delta[p].insert(a, q);
            }
        }
        MultiTapeDfa {
            dim,
            alphabet: alphabet.into_iter().collect(),
            initial: 0,
            finals,
            delta,
        }
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "automata over letters of dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    /// Accessible product accepting `L(self) ∩ L(other)`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let alphabet: Vec<Letter> = self.alphabet.union(&other.alphabet).cloned().collect();
        Ok(Self::explore_from(
            self.dim,
            alphabet,
            (self.initial, other.initial),
            |&(p, q)| self.finals[p] && other.finals[q],
            |&(p, q)| {
                self.delta[p]
                    .iter()
                    .filter_map(|(a, &p2)| other.step(q, a).map(|q2| (a.clone(), (p2, q2))))
                    .collect()
            },
        ))
    }

    /// Product of the completed automata accepting `L(self) ∪ L(other)`; the
    /// pair of dead states is never created.
    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let alphabet: BTreeSet<Letter> = self.alphabet.union(&other.alphabet).cloned().collect();
        let letters: Vec<Letter> = alphabet.iter().cloned().collect();
        Ok(Self::explore_from(
            self.dim,
            alphabet,
            (Some(self.initial), Some(other.initial)),
            |&(p, q)| p.is_some_and(|p| self.finals[p]) || q.is_some_and(|q| other.finals[q]),
            |&(p, q)| {
                letters
                    .iter()
                    .filter_map(|a| {
                        let p2 = p.and_then(|p| self.step(p, a));
                        let q2 = q.and_then(|q| other.step(q, a));
                        (p2.is_some() || q2.is_some()).then(|| (a.clone(), (p2, q2)))
                    })
                    .collect()
            },
        ))
    }

    /// Complete automaton over the same alphabet accepting the complement.
    pub fn complement(&self) -> Self {
        let letters: Vec<Letter> = self.alphabet.iter().cloned().collect();
        Self::explore_from(
            self.dim,
            self.alphabet.clone(),
            Some(self.initial),
            |p| !p.is_some_and(|p| self.finals[p]),
            |p| {
                letters
                    .iter()
                    .map(|a| (a.clone(), p.and_then(|p| self.step(p, a))))
                    .collect()
            },
        )
    }

    /// States from which some final state is reachable.
    fn coaccessible(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (p, _, q) in self.transitions() {
            preds[q].push(p);
        }
        let mut live = self.finals.clone();
        let mut stack: Vec<usize> = self.finals().collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// Restriction to accessible and co-accessible states, or the canonical
    /// empty automaton when the initial state is not co-accessible.
    pub fn trim(&self) -> Self {
        let live = self.coaccessible();
        if !live[self.initial] {
            return Self::empty(self.dim, self.alphabet.iter().cloned());
        }
        let delta = self
            .delta
            .iter()
            .map(|m| {
                m.iter()
                    .filter(|(_, &q)| live[q])
                    .map(|(a, &q)| (a.clone(), q))
                    .collect()
            })
            .collect();
        MultiTapeDfa {
            dim: self.dim,
            alphabet: self.alphabet.clone(),
            initial: self.initial,
            finals: self.finals.clone(),
            delta,
        }
        .canonical()
    }

    /// Moore partition refinement on the completed automaton; the dead class
    /// is removed from the quotient.
    pub fn minimize(&self) -> Self {
        let a = self.trim();
        let n = a.num_states();
        let dead = n;
        let letters: Vec<&Letter> = a.alphabet.iter().collect();
        let target = |q: usize, l: &Letter| {
            if q == dead {
                dead
            } else {
                a.step(q, l).unwrap_or(dead)
            }
        };
        let mut class: Vec<usize> = (0..=n).map(|q| usize::from(q < n && a.finals[q])).collect();
        let mut count = class.iter().copied().collect::<BTreeSet<_>>().len();
        loop {
            let mut ids: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let next: Vec<usize> = (0..=n)
                .map(|q| {
                    let sig = (
                        class[q],
                        letters.iter().map(|l| class[target(q, l)]).collect(),
                    );
                    let fresh = ids.len();
                    *ids.entry(sig).or_insert(fresh)
                })
                .collect();
            let new_count = ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let dead_class = class[dead];
        if class[a.initial] == dead_class {
            return Self::empty(a.dim, a.alphabet.iter().cloned());
        }
        let mut finals = vec![false; count];
        let mut delta = vec![BTreeMap::new(); count];
        for q in 0..n {
            let c = class[q];
            finals[c] = a.finals[q];
            for (l, t) in a.delta[q].iter() {
                if class[*t] != dead_class {
                    delta[c].insert(l.clone(), class[*t]);
                }
            }
        }
        MultiTapeDfa {
            dim: a.dim,
            alphabet: a.alphabet.clone(),
            initial: class[a.initial],
            finals,
            delta,
        }
        .canonical()
    }

    /// Same language, exactly: minimized canonical forms coincide.
    pub fn language_equal(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let (x, y) = (self.minimize(), other.minimize());
        x.finals == y.finals && x.delta == y.delta
    }

    /// Keeps only transitions whose first block, of dimension
    /// `keep`-letter size, lies in `keep`.
    pub fn filter_first_component(&self, keep: &BTreeSet<Letter>) -> Result<Self> {
        let k = match keep.iter().next() {
            Some(l) => l.dim(),
            None => self.dim / 2,
        };
        if keep.iter().any(|l| l.dim() != k) || k > self.dim {
            return Err(Error::DimensionMismatch(
                "kept letters must share a dimension not above the letter dimension".into(),
            ));
        }
        let retained = |a: &Letter| keep.contains(&a.split(k).0);
        let delta = self
            .delta
            .iter()
            .map(|m| {
                m.iter()
                    .filter(|(a, _)| retained(a))
                    .map(|(a, &q)| (a.clone(), q))
                    .collect()
            })
            .collect();
        Ok(MultiTapeDfa {
            dim: self.dim,
            alphabet: self
                .alphabet
                .iter()
                .filter(|a| retained(a))
                .cloned()
                .collect(),
            initial: self.initial,
            finals: self.finals.clone(),
            delta,
        }
        .canonical())
    }

    /// Tensor product of pair-letter automata: reads
    /// `((a_1..a_d), (b_1..b_d))` and moves each component on `(a_j, b_j)`.
    pub fn tensor(parts: &[MultiTapeDfa]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Contract(
                "tensor of an empty list of automata".into(),
            ));
        }
        if let Some(p) = parts.iter().find(|p| p.dim % 2 != 0) {
            return Err(Error::DimensionMismatch(format!(
                "tensor factor over letters of odd dimension {}",
                p.dim
            )));
        }
        let dim = parts.iter().map(|p| p.dim).sum();
        let stack = |letters: &[&Letter]| {
            let halves: Vec<(Letter, Letter)> = letters.iter().map(|l| l.halves()).collect();
            let mut v: Vec<i64> = halves.iter().flat_map(|h| h.0 .0.iter().copied()).collect();
            v.extend(halves.iter().flat_map(|h| h.1 .0.iter().copied()));
            Letter(v)
        };
        let mut alphabet_parts: Vec<Vec<&Letter>> = vec![Vec::new()];
        for p in parts {
            alphabet_parts = alphabet_parts
                .into_iter()
                .flat_map(|pre| {
                    p.alphabet.iter().map(move |l| {
                        let mut v = pre.clone();
                        v.push(l);
                        v
                    })
                })
                .collect();
        }
        let alphabet: Vec<Letter> = alphabet_parts.iter().map(|ls| stack(ls)).collect();
        let start: Vec<usize> = parts.iter().map(|p| p.initial).collect();
        Ok(Self::explore_from(
            dim,
            alphabet,
            start,
            |qs| qs.iter().zip(parts).all(|(&q, p)| p.finals[q]),
            |qs| {
                let mut out: Vec<(Vec<&Letter>, Vec<usize>)> = vec![(Vec::new(), Vec::new())];
                for (&q, p) in qs.iter().zip(parts) {
                    out = out
                        .into_iter()
                        .flat_map(|(ls, ts)| {
                            p.delta[q].iter().map(move |(l, &t)| {
                                let (mut ls, mut ts) = (ls.clone(), ts.clone());
                                ls.push(l);
                                ts.push(t);
                                (ls, ts)
                            })
                        })
                        .collect();
                }
                out.into_iter().map(|(ls, ts)| (stack(&ls), ts)).collect()
            },
        ))
    }

    /// Negates every letter: accepts `(ū, v̄)` for each accepted `(u, v)`.
    pub fn mirror_negate(&self) -> Self {
        MultiTapeDfa {
            dim: self.dim,
            alphabet: self.alphabet.iter().map(Letter::negate).collect(),
            initial: self.initial,
            finals: self.finals.clone(),
            delta: self
                .delta
                .iter()
                .map(|m| m.iter().map(|(a, &q)| (a.negate(), q)).collect())
                .collect(),
        }
    }

    /// Single-tape automaton accepting `{w : (w, w) accepted}`.
    pub fn diagonal_projection(&self) -> Result<Self> {
        if !self.dim.is_multiple_of(2) {
            return Err(Error::DimensionMismatch(
                "diagonal projection needs pair letters".into(),
            ));
        }
        let diagonal = |a: &Letter| {
            let (x, y) = a.halves();
            (x == y).then_some(x)
        };
        Ok(MultiTapeDfa {
            dim: self.dim / 2,
            alphabet: self.alphabet.iter().filter_map(diagonal).collect(),
            initial: self.initial,
            finals: self.finals.clone(),
            delta: self
                .delta
                .iter()
                .map(|m| {
                    m.iter()
                        .filter_map(|(a, &q)| diagonal(a).map(|x| (x, q)))
                        .collect()
                })
                .collect(),
        }
        .canonical())
    }

    /// For every `(q, a, q')` at most one `b` labels a transition
    /// `q --(a, b)--> q'`, where `a` has dimension `first_dim`.
    pub fn check_at_most_one_output(&self, first_dim: usize) -> Result<()> {
        for (p, m) in self.delta.iter().enumerate() {
            let mut seen: BTreeSet<(Letter, usize)> = BTreeSet::new();
            for (l, &q) in m {
                let (a, _) = l.split(first_dim);
                if !seen.insert((a.clone(), q)) {
                    return Err(Error::AmbiguousOutput {
                        from: p,
                        input: format!("({a})"),
                        to: q,
                    });
                }
            }
        }
        Ok(())
    }

    /// Accepted words of length at most `max_len`, shortest first and
    /// lexicographic within a length.
    pub fn accepted_words(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut layer = vec![(Word::empty(self.dim), self.initial)];
        for len in 0..=max_len {
            out.extend(
                layer
                    .iter()
                    .filter(|(_, q)| self.finals[*q])
                    .map(|(w, _)| w.clone()),
            );
            if len == max_len {
                break;
            }
            layer = layer
                .iter()
                .flat_map(|(w, q)| {
                    self.delta[*q].iter().map(move |(a, &t)| {
                        let mut w2 = w.clone();
                        w2.push(a.clone());
                        (w2, t)
                    })
                })
                .collect();
        }
        out
    }
}
