//! Normalizers: automata accepting `(u, v)` with `v ∈ 0*ν_U(u)`.
//!
//! The base construction tracks the difference `val(u) − val(v)` of the
//! prefixes read so far as a polynomial reduced modulo the characteristic
//! polynomial `P`: after reading `z_1 … z_k` (with `z_i = a_i − b_i`) the
//! state is `Σ z_i X^{k−i} mod P`. Because `U` satisfies its recurrence from
//! index 0, the difference of the values of the full words is
//! `Σ s_j U(j)`, so a state is final exactly when that sum vanishes.
//!
//! States are discarded once their image under the dominant root is so
//! large that no continuation can bring the difference back to zero. The
//! bound comes from writing `U(i) = Σ_k C_k β_k^i` and is finite for Pisot
//! systems.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::dfa::MultiTapeDfa;
use crate::numeration::{Letter, NumerationSystem, PisotVerdict, SystemTuple, Word};
use crate::{Error, Result};

/// Limits applied while exploring carry states.
#[derive(Clone, Debug)]
pub struct NormalizerOptions {
    pub state_limit: usize,
    /// Build even when the Pisot check does not pass.
    pub allow_non_pisot: bool,
    pub pisot_tolerance: f64,
}

impl Default for NormalizerOptions {
    fn default() -> Self {
        NormalizerOptions {
            state_limit: 200_000,
            allow_non_pisot: false,
            pisot_tolerance: 1e-9,
        }
    }
}

/// Carry arithmetic for one numeration system.
#[derive(Clone, Debug)]
pub struct Carry<'a> {
    ns: &'a NumerationSystem,
    initial: Vec<i128>,
    roots: Vec<Complex64>,
    coefficients: Vec<Complex64>,
}

impl<'a> Carry<'a> {
    pub fn new(ns: &'a NumerationSystem) -> Result<Self> {
        let spectrum = ns.spectrum();
        let coefficients = spectrum.coefficients.clone().ok_or_else(|| {
            Error::NotPisot(format!(
                "characteristic polynomial of {} has no simple-root decomposition",
                ns.name()
            ))
        })?;
        let initial = ns
            .initial_terms()
            .iter()
            .map(|u| u.to_i128().expect("initial term fits in i128"))
            .collect();
        Ok(Carry {
            ns,
            initial,
            roots: spectrum.roots.clone(),
            coefficients,
        })
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.ns.order()]
    }

    /// Multiplies by `X` modulo `P`, then adds `z`.
    pub fn step(&self, s: &[i64], z: i64) -> Vec<i64> {
        let c = self.ns.recurrence();
        let m = c.len();
        let top = s[m - 1];
        let mut next = vec![0; m];
        next[0] = z + c[m - 1] * top;
        for j in 1..m {
            next[j] = s[j - 1] + c[m - 1 - j] * top;
        }
        next
    }

    /// `Σ s_j U(j)`: the value difference if the word ended here.
    pub fn value(&self, s: &[i64]) -> i128 {
        s.iter()
            .zip(&self.initial)
            .map(|(&x, &u)| x as i128 * u)
            .sum()
    }

    /// `π_k(s) = Σ s_j β_k^j`.
    pub fn image(&self, s: &[i64], k: usize) -> Complex64 {
        let r = self.roots[k];
        s.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &x| acc * r + x as f64)
    }

    /// A bound `B` such that a state with `|π_β(s)| > B` reached by letters
    /// of magnitude at most `d` keeps the sign of `π_β(s)` in its final value
    /// difference, whatever letters of magnitude at most `d` follow.
    pub fn bound(&self, d: i64) -> f64 {
        let d = d as f64;
        let beta = self.ns.spectrum().beta;
        let c0 = self.coefficients[0].norm();
        let conjugates: f64 = self.roots[1..]
            .iter()
            .zip(&self.coefficients[1..])
            .map(|(r, c)| 2.0 * d * c.norm() / (1.0 - r.norm()).max(f64::EPSILON))
            .sum();
        let rigorous = d / (beta - 1.0) + conjugates / c0;
        let plain = d * beta / (beta - 1.0);
        let b = rigorous.max(plain);
        b + 1e-9 * b + 1e-6
    }
}

fn refuse_non_pisot(ns: &NumerationSystem, opts: &NormalizerOptions) -> Result<()> {
    if opts.allow_non_pisot {
        return Ok(());
    }
    match ns.pisot_check(opts.pisot_tolerance)? {
        PisotVerdict::Pass => Ok(()),
        PisotVerdict::Fail(msg) | PisotVerdict::Inconclusive(msg) => {
            Err(Error::NotPisot(format!("{}: {msg}", ns.name())))
        }
    }
}

fn digit_letters(digits: impl IntoIterator<Item = i64>) -> Vec<Letter> {
    digits.into_iter().map(Letter::scalar).collect()
}

/// Acceptor of the words over `A_U` (leading zeros allowed) satisfying the
/// greedy condition, built directly from the condition: `v` qualifies iff
/// every suffix `s` has `val(1̄ s) < 0`.
///
/// A state is the set of pending suffix runs whose sign is not yet decided.
pub fn greedy_condition_dfa(ns: &NumerationSystem) -> Result<MultiTapeDfa> {
    greedy_condition_dfa_with(ns, &NormalizerOptions::default())
}

pub fn greedy_condition_dfa_with(
    ns: &NumerationSystem,
    opts: &NormalizerOptions,
) -> Result<MultiTapeDfa> {
    refuse_non_pisot(ns, opts)?;
    let carry = Carry::new(ns)?;
    let bound = carry.bound(ns.digit_bound().max(1));
    let fresh = carry.step(&carry.zero(), -1);
    let start: BTreeSet<Vec<i64>> = [fresh.clone()].into();
    let digits: Vec<i64> = ns.digit_alphabet();
    let mut explored = 0usize;
    let mut overflow = false;
    let dfa = MultiTapeDfa::explore_from(
        1,
        digit_letters(digits.iter().copied()),
        start,
        |runs: &BTreeSet<Vec<i64>>| runs.iter().all(|s| carry.value(s) < 0),
        |runs| {
            explored += 1;
            if explored > opts.state_limit {
                overflow = true;
                return Vec::new();
            }
            let mut out = Vec::new();
            'digit: for &b in &digits {
                let mut next = BTreeSet::new();
                for s in runs {
                    let t = carry.step(s, b);
                    let x = carry.image(&t, 0).re;
                    if x > bound {
                        continue 'digit;
                    }
                    if x >= -bound {
                        next.insert(t);
                    }
                }
                next.insert(fresh.clone());
                out.push((Letter::scalar(b), next));
            }
            out
        },
    );
    if overflow {
        return Err(Error::StateLimit(opts.state_limit));
    }
    Ok(dfa)
}

/// Trim minimal automaton of `{(u, v) ∈ (A × A_U)* : v ∈ 0*ν_U(u)}`
/// restricted to `val_U(u) ≥ 0`.
pub fn build_base_normalizer(ns: &NumerationSystem, a: &[i64]) -> Result<MultiTapeDfa> {
    build_base_normalizer_with(ns, a, &NormalizerOptions::default())
}

pub fn build_base_normalizer_with(
    ns: &NumerationSystem,
    a: &[i64],
    opts: &NormalizerOptions,
) -> Result<MultiTapeDfa> {
    Ok(raw_base_normalizer(ns, a, opts)?.minimize())
}

/// The explored carry automaton before trimming and minimization.
pub fn raw_base_normalizer(
    ns: &NumerationSystem,
    a: &[i64],
    opts: &NormalizerOptions,
) -> Result<MultiTapeDfa> {
    refuse_non_pisot(ns, opts)?;
    let greedy = greedy_condition_dfa_with(ns, opts)?;
    let carry = Carry::new(ns)?;
    let a: BTreeSet<i64> = a.iter().copied().collect();
    let digits = ns.digit_alphabet();
    let d = a
        .iter()
        .flat_map(|&x| digits.iter().map(move |&b| (x - b).abs()))
        .max()
        .unwrap_or(0);
    let bound = carry.bound(d.max(1));
    let alphabet: Vec<Letter> = a
        .iter()
        .flat_map(|&x| digits.iter().map(move |&b| Letter(vec![x, b])))
        .collect();
    let mut explored = 0usize;
    let mut overflow = false;
    let dfa = MultiTapeDfa::explore_from(
        2,
        alphabet,
        (carry.zero(), greedy.initial()),
        |(s, g): &(Vec<i64>, usize)| carry.value(s) == 0 && greedy.is_final(*g),
        |(s, g)| {
            explored += 1;
            if explored > opts.state_limit {
                overflow = true;
                return Vec::new();
            }
            let mut out = Vec::new();
            for &x in &a {
                for &b in &digits {
                    let Some(g2) = greedy.step(*g, &Letter::scalar(b)) else {
                        continue;
                    };
                    let t = carry.step(s, x - b);
                    if carry.image(&t, 0).re.abs() <= bound {
                        out.push((Letter(vec![x, b]), (t, g2)));
                    }
                }
            }
            out
        },
    );
    if overflow {
        return Err(Error::StateLimit(opts.state_limit));
    }
    Ok(dfa)
}

/// Normalizer for the extended normalization on digit set `a`, which may
/// contain negative digits: the base normalizer on `{−d, …, d}`, united with
/// its mirror image and filtered back to `a`.
pub fn build_extended_normalizer(ns: &NumerationSystem, a: &[i64]) -> Result<MultiTapeDfa> {
    build_extended_normalizer_with(ns, a, &NormalizerOptions::default())
}

pub fn build_extended_normalizer_with(
    ns: &NumerationSystem,
    a: &[i64],
    opts: &NormalizerOptions,
) -> Result<MultiTapeDfa> {
    let d = a.iter().map(|x| x.abs()).max().unwrap_or(0);
    let symmetric: Vec<i64> = (-d..=d).collect();
    let base = build_base_normalizer_with(ns, &symmetric, opts)?;
    let both = base.union(&base.mirror_negate())?;
    let keep: BTreeSet<Letter> = digit_letters(a.iter().copied()).into_iter().collect();
    Ok(both.filter_first_component(&keep)?.minimize())
}

/// Normalizer of a tuple of systems on the letter set `a ⊂ Z^d`. Letters of
/// the result are `(a_1, …, a_d, b_1, …, b_d)`.
pub fn build_multidim_normalizer(ts: &SystemTuple, a: &[Letter]) -> Result<MultiTapeDfa> {
    build_multidim_normalizer_with(ts, a, &NormalizerOptions::default())
}

pub fn build_multidim_normalizer_with(
    ts: &SystemTuple,
    a: &[Letter],
    opts: &NormalizerOptions,
) -> Result<MultiTapeDfa> {
    let d = ts.dim();
    if let Some(l) = a.iter().find(|l| l.dim() != d) {
        return Err(Error::DimensionMismatch(format!(
            "letter ({l}) for a {d}-tuple of systems"
        )));
    }
    let parts = ts
        .systems()
        .iter()
        .enumerate()
        .map(|(j, ns)| {
            let coords: BTreeSet<i64> = a.iter().map(|l| l.0[j]).collect();
            let coords: Vec<i64> = coords.into_iter().collect();
            build_extended_normalizer_with(ns, &coords, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let keep: BTreeSet<Letter> = a.iter().cloned().collect();
    let n = if parts.len() == 1 {
        parts.into_iter().next().expect("one part")
    } else {
        MultiTapeDfa::tensor(&parts)?
    };
    Ok(n.filter_first_component(&keep)?.minimize())
}

/// `ν_U(w)`: component-wise extended normalization, padded.
pub fn normalize_word(ts: &SystemTuple, w: &Word) -> Result<Word> {
    ts.normalize(w)
}

/// The word `v` of length `|u|` with `(u, v)` accepted by the normalizer,
/// if `ν_U(u)` fits in that length.
pub fn expected_output(ts: &SystemTuple, u: &Word) -> Result<Option<Word>> {
    let nu = ts.normalize(u)?;
    if nu.len() > u.len() {
        return Ok(None);
    }
    Ok(Some(nu.with_leading_zeros(u.len() - nu.len())))
}

/// `minimize(diagonal_projection(N_U))`: acceptor of `0*rep_U(N)`.
pub fn greedy_language_dfa(ns: &NumerationSystem) -> Result<MultiTapeDfa> {
    let n = build_base_normalizer(ns, &ns.digit_alphabet())?;
    Ok(n.diagonal_projection()?.minimize())
}

/// Compares a normalizer against the value/greedy oracle on every first
/// tape `u ∈ a^{≤ max_len}`: the outputs accepted with `u` must be exactly
/// the expected one. Returns the first discrepancy as `(u, v)`, where `v`
/// is a wrongly accepted word or the missing expected word.
pub fn oracle_mismatch(
    ts: &SystemTuple,
    a: &[Letter],
    n: &MultiTapeDfa,
    max_len: usize,
) -> Result<Option<(Word, Word)>> {
    let d = ts.dim();
    for u in Word::all_up_to(d, a, max_len) {
        let expected = expected_output(ts, &u)?;
        let accepted = accepted_outputs(n, &u);
        let ok = match &expected {
            Some(v) => accepted.len() == 1 && accepted[0] == *v,
            None => accepted.is_empty(),
        };
        if !ok {
            let v = accepted
                .into_iter()
                .find(|v| Some(v) != expected.as_ref())
                .or(expected)
                .expect("a discrepancy has a witness");
            return Ok(Some((u, v)));
        }
    }
    Ok(None)
}

/// All `v` with `(u, v)` accepted by a normalizer.
pub fn accepted_outputs(n: &MultiTapeDfa, u: &Word) -> Vec<Word> {
    let d = u.dim();
    let mut layer: Vec<(Vec<Letter>, usize)> = vec![(Vec::new(), n.initial())];
    for a in u.letters() {
        layer = layer
            .into_iter()
            .flat_map(|(v, q)| {
                n.transitions_from(q)
                    .filter(|(l, _)| l.split(d).0 == *a)
                    .map(|(l, t)| {
                        let mut v2 = v.clone();
                        v2.push(l.split(d).1);
                        (v2, t)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    layer
        .into_iter()
        .filter(|(_, q)| n.is_final(*q))
        .map(|(v, _)| Word::new(d, v).expect("output letters share a dimension"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi2() -> NumerationSystem {
        NumerationSystem::phi_squared()
    }

    fn pair(u: &[i64], v: &[i64]) -> Word {
        Word::from_digits(u).pair(&Word::from_digits(v)).unwrap()
    }

    fn scalars(xs: &[i64]) -> Vec<Letter> {
        digit_letters(xs.iter().copied())
    }

    #[test]
    fn carry_tracks_value_difference() {
        let u = phi2();
        let c = Carry::new(&u).unwrap();
        let word = [2, -1, 0, 2, 1, -2, 2];
        let mut s = c.zero();
        for (k, &z) in word.iter().enumerate() {
            s = c.step(&s, z);
            let v = u.value(&word[..=k]);
            assert_eq!(c.value(&s), v.to_i128().unwrap());
        }
    }

    #[test]
    fn greedy_condition_matches_predicate() {
        for u in [phi2(), NumerationSystem::zeckendorf()] {
            let g = greedy_condition_dfa(&u).unwrap();
            let alphabet = scalars(&u.digit_alphabet());
            for w in Word::all_up_to(1, &alphabet, 8) {
                assert_eq!(g.accepts(&w), u.is_greedy(&w.track(0)), "{w}");
            }
        }
        assert_eq!(
            greedy_condition_dfa(&phi2())
                .unwrap()
                .minimize()
                .num_states(),
            2
        );
    }

    #[test]
    fn base_normalizer_phi2() {
        let n = build_base_normalizer(&phi2(), &[0, 1, 2]).unwrap();
        assert_eq!(n.num_states(), 5);
        assert!(n.is_final(n.initial()));
        for l in 0..4 {
            let z = vec![0; l];
            let u = [z.clone(), vec![0, 2, 2]].concat();
            let v = [z, vec![1, 0, 0]].concat();
            assert!(n.accepts(&pair(&u, &v)));
        }
        n.check_at_most_one_output(1).unwrap();
        let ts = SystemTuple::single(phi2());
        assert_eq!(
            oracle_mismatch(&ts, &scalars(&[0, 1, 2]), &n, 7).unwrap(),
            None
        );
    }

    #[test]
    fn greedy_words_are_fixed_points() {
        let u = phi2();
        let n = build_base_normalizer(&u, &[0, 1, 2]).unwrap();
        for w in Word::all_up_to(1, &scalars(&[0, 1, 2]), 8) {
            let digits = w.track(0);
            if u.is_greedy(&digits) {
                assert!(n.accepts(&pair(&digits, &digits)));
            }
        }
    }

    #[test]
    fn extended_normalizer_phi2() {
        let u = phi2();
        let a: Vec<i64> = (-2..=2).collect();
        let n = build_extended_normalizer(&u, &a).unwrap();
        assert!(n.accepts(&pair(&[0, -2, -2], &[-1, 0, 0])));
        assert!(n.accepts(&pair(&[1, -2], &[0, 1])));
        assert!(!n.accepts(&pair(&[-2, -2], &[0, 0])));
        n.check_at_most_one_output(1).unwrap();
        let ts = SystemTuple::single(u.clone());
        assert_eq!(oracle_mismatch(&ts, &scalars(&a), &n, 5).unwrap(), None);

        let base = build_base_normalizer(&u, &[0, 1, 2]).unwrap();
        let restricted = build_extended_normalizer(&u, &[0, 1, 2]).unwrap();
        assert!(restricted.language_equal(&base));
        let keep: BTreeSet<Letter> = scalars(&[0, 1, 2]).into_iter().collect();
        let filtered = n.filter_first_component(&keep).unwrap();
        assert!(filtered.accepts(&pair(&[0, 2, 2], &[1, 0, 0])));
        assert!(!filtered.accepts(&pair(&[-2, -2], &[-1, 0])));
        let uni = base.union(&base.mirror_negate()).unwrap();
        assert!(uni.accepts(&pair(&[0, 2, 2], &[1, 0, 0])));
        assert!(uni.accepts(&pair(&[0, -2, -2], &[-1, 0, 0])));
    }

    #[test]
    fn multidim_reduces_to_extended() {
        let u = phi2();
        let ts = SystemTuple::single(u.clone());
        let a = scalars(&[-1, 0, 1]);
        let m = build_multidim_normalizer(&ts, &a).unwrap();
        let e = build_extended_normalizer(&u, &[-1, 0, 1]).unwrap();
        assert!(m.language_equal(&e));
    }

    #[test]
    fn delay_remark() {
        let u = phi2();
        let ts = SystemTuple::single(u.clone());
        let n = build_base_normalizer(&u, &[0, 1, 2]).unwrap();
        for w in Word::all_up_to(1, &scalars(&[0, 1, 2]), 5) {
            let delay = ts.delay(&w).unwrap();
            if delay > 0 {
                assert!(accepted_outputs(&n, &w).is_empty());
            }
            for l in delay.max(0) as usize..delay.max(0) as usize + 2 {
                let padded = w.with_leading_zeros(l);
                assert_eq!(accepted_outputs(&n, &padded).len(), 1, "{padded}");
            }
        }
    }

    #[test]
    fn greedy_language_phi2() {
        let g = greedy_language_dfa(&phi2()).unwrap();
        assert_eq!(g.num_states(), 2);
        assert!(g.accepts(&Word::from_digits(&[0, 0, 1, 1])));
        assert!(g.accepts(&Word::from_digits(&[1, 0, 1])));
        assert!(!g.accepts(&Word::from_digits(&[2, 2])));
        assert!(g.accepts(&Word::empty(1)));
        assert!(g.language_equal(&greedy_condition_dfa(&phi2()).unwrap()));
    }

    #[test]
    fn zeckendorf_normalizer() {
        let z = NumerationSystem::zeckendorf();
        let n = build_base_normalizer(&z, &[0, 1]).unwrap();
        assert!(n.accepts(&pair(&[0, 1, 1], &[1, 0, 0])));
        let ts = SystemTuple::single(z);
        assert_eq!(
            oracle_mismatch(&ts, &scalars(&[0, 1]), &n, 8).unwrap(),
            None
        );
    }

    #[test]
    fn integer_base_normalizer() {
        let b = NumerationSystem::integer_base(2).unwrap();
        let n = build_base_normalizer(&b, &[0, 1, 2]).unwrap();
        let ts = SystemTuple::single(b);
        assert_eq!(
            oracle_mismatch(&ts, &scalars(&[0, 1, 2]), &n, 6).unwrap(),
            None
        );
    }

    #[test]
    fn refuses_non_pisot() {
        let s = NumerationSystem::new("sq", vec![0, 4], vec![1, 2]).unwrap();
        assert!(matches!(
            build_base_normalizer(&s, &[0, 1]),
            Err(Error::NotPisot(_))
        ));
    }

    #[test]
    fn normalize_examples() {
        let uu = SystemTuple::new(vec![phi2(), phi2()]).unwrap();
        let w = Word::from_tracks(&[vec![-2, -2], vec![1, 0]]).unwrap();
        assert_eq!(
            normalize_word(&uu, &w).unwrap().tracks(),
            vec![vec![-1, 0, 0], vec![0, 1, 0]]
        );
        let ts = SystemTuple::single(phi2());
        assert!(normalize_word(&ts, &Word::from_digits(&[0, 0, 0, 0]))
            .unwrap()
            .is_empty());
    }
}
