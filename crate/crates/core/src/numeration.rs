//! Linear numeration systems and digit words.
//!
//! A [`NumerationSystem`] is an increasing integer sequence `U` with
//! `U(0) = 1` given by a linear recurrence and its initial terms. Words are
//! read most-significant letter first; the last letter of a word of length
//! `n` has weight `U(0)` and the first has weight `U(n - 1)`.

use alloc::borrow::Cow;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Number of terms computed eagerly when a system is created.
const CACHED_TERMS: usize = 128;

/// A letter: an integer vector of fixed dimension.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(pub Vec<i64>);

impl Letter {
    pub fn zero(dim: usize) -> Self {
        Letter(vec![0; dim])
    }

    pub fn scalar(digit: i64) -> Self {
        Letter(vec![digit])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn abs(&self) -> Letter {
        Letter(self.0.iter().map(|x| x.abs()).collect())
    }

    pub fn negate(&self) -> Letter {
        Letter(self.0.iter().map(|x| -x).collect())
    }

    /// Stacks `self` on top of `other`.
    pub fn concat(&self, other: &Letter) -> Letter {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Letter(v)
    }

    /// Splits a pair letter into its first `k` coordinates and the rest.
    pub fn split(&self, k: usize) -> (Letter, Letter) {
        (Letter(self.0[..k].to_vec()), Letter(self.0[k..].to_vec()))
    }

    /// Splits a pair letter into two halves of equal dimension.
    pub fn halves(&self) -> (Letter, Letter) {
        self.split(self.dim() / 2)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// A finite word over letters of dimension `dim`; the empty word keeps its
/// dimension.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word {
    dim: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty(dim: usize) -> Self {
        Word {
            dim,
            letters: Vec::new(),
        }
    }

    pub fn new(dim: usize, letters: Vec<Letter>) -> Result<Self> {
        if let Some(l) = letters.iter().find(|l| l.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "letter ({l}) has dimension {}, expected {dim}",
                l.dim()
            )));
        }
        Ok(Word { dim, letters })
    }

    /// One-dimensional word from digits, most significant first.
    pub fn from_digits(digits: &[i64]) -> Self {
        Word {
            dim: 1,
            letters: digits.iter().map(|&d| Letter::scalar(d)).collect(),
        }
    }

    /// Word whose `j`-th track is `tracks[j]`; all tracks must have equal
    /// length.
    pub fn from_tracks(tracks: &[Vec<i64>]) -> Result<Self> {
        let dim = tracks.len();
        let len = tracks.first().map_or(0, Vec::len);
        if tracks.iter().any(|t| t.len() != len) {
            return Err(Error::DimensionMismatch(
                "tracks of a multidimensional word must have equal lengths".into(),
            ));
        }
        let letters = (0..len)
            .map(|i| Letter(tracks.iter().map(|t| t[i]).collect()))
            .collect();
        Ok(Word { dim, letters })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn track(&self, j: usize) -> Vec<i64> {
        self.letters.iter().map(|l| l.0[j]).collect()
    }

    pub fn tracks(&self) -> Vec<Vec<i64>> {
        (0..self.dim).map(|j| self.track(j)).collect()
    }

    /// Component-wise absolute value, letter by letter.
    pub fn abs(&self) -> Word {
        Word {
            dim: self.dim,
            letters: self.letters.iter().map(Letter::abs).collect(),
        }
    }

    /// Letter-wise negation (the bar map).
    pub fn negate(&self) -> Word {
        Word {
            dim: self.dim,
            letters: self.letters.iter().map(Letter::negate).collect(),
        }
    }

    pub fn push(&mut self, letter: Letter) {
        assert_eq!(letter.dim(), self.dim, "letter dimension");
        self.letters.push(letter);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            dim: self.dim,
            letters,
        }
    }

    /// `0^k · self`.
    pub fn with_leading_zeros(&self, k: usize) -> Word {
        let mut letters = vec![Letter::zero(self.dim); k];
        letters.extend_from_slice(&self.letters);
        Word {
            dim: self.dim,
            letters,
        }
    }

    /// Pairs two words of equal length letter by letter: `(u, v)`.
    pub fn pair(&self, other: &Word) -> Result<Word> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot pair words of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Word {
            dim: self.dim + other.dim,
            letters: self
                .letters
                .iter()
                .zip(&other.letters)
                .map(|(a, b)| a.concat(b))
                .collect(),
        })
    }

    /// Every word of length `len` over `alphabet`, in lexicographic order of
    /// letter indices.
    pub fn all_of_length(dim: usize, alphabet: &[Letter], len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty(dim)];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * alphabet.len());
            for w in &out {
                for a in alphabet {
                    let mut w2 = w.clone();
                    w2.push(a.clone());
                    next.push(w2);
                }
            }
            out = next;
        }
        out
    }

    /// Every word of length at most `max_len` over `alphabet`, shortest
    /// first.
    pub fn all_up_to(dim: usize, alphabet: &[Letter], max_len: usize) -> Vec<Word> {
        (0..=max_len)
            .flat_map(|l| Word::all_of_length(dim, alphabet, l))
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "[{l}]")?;
        }
        f.write_str("]")
    }
}

/// Left-pads each word with zeros to the maximal length and reads the result
/// as a word of `ws.len()`-dimensional letters.
pub fn pad_tuple(ws: &[Vec<i64>]) -> Word {
    let len = ws.iter().map(Vec::len).max().unwrap_or(0);
    let padded: Vec<Vec<i64>> = ws
        .iter()
        .map(|w| {
            let mut p = vec![0; len - w.len()];
            p.extend_from_slice(w);
            p
        })
        .collect();
    Word::from_tracks(&padded).expect("padded tracks have equal length")
}

/// Roots of the characteristic polynomial and the decomposition of `U` on
/// them, `U(i) = Σ_k C_k · root_k^i`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Roots sorted by decreasing modulus.
    pub roots: Vec<Complex64>,
    /// Dominant real root.
    pub beta: f64,
    /// Half-width of an interval around `beta` on whose ends the
    /// characteristic polynomial changes sign.
    pub beta_error: f64,
    /// Coefficients `C_k`, aligned with `roots`; `None` when the roots are
    /// not numerically distinct.
    pub coefficients: Option<Vec<Complex64>>,
}

/// Outcome of [`pisot_check`].
#[derive(Clone, Debug, PartialEq)]
pub enum PisotVerdict {
    Pass,
    Fail(String),
    /// Some conjugate lies within the tolerance of the unit circle.
    Inconclusive(String),
}

impl PisotVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, PisotVerdict::Pass)
    }
}

/// A linear numeration system `U(i + m) = Σ_j c_j · U(i + m − j)`, with the
/// recurrence valid from index 0.
#[derive(Clone, Debug)]
pub struct NumerationSystem {
    name: String,
    recurrence: Vec<i64>,
    terms: Vec<BigInt>,
    spectrum: Spectrum,
    digit_bound: i64,
    quotients_stabilized: bool,
}

impl NumerationSystem {
    pub fn new(name: &str, recurrence: Vec<i64>, initial: Vec<i64>) -> Result<Self> {
        let m = recurrence.len();
        if m == 0 {
            return Err(Error::Contract(
                "recurrence must have order at least 1".into(),
            ));
        }
        if initial.len() != m {
            return Err(Error::Contract(format!(
                "expected {m} initial terms, got {}",
                initial.len()
            )));
        }
        if initial[0] != 1 {
            return Err(Error::Contract("U(0) must be 1".into()));
        }
        let mut terms: Vec<BigInt> = initial.iter().map(|&u| BigInt::from(u)).collect();
        while terms.len() < CACHED_TERMS {
            terms.push(next_term(&recurrence, &terms));
        }
        if let Some(i) = (0..terms.len() - 1).find(|&i| terms[i + 1] <= terms[i]) {
            return Err(Error::Contract(format!(
                "sequence is not increasing: U({}) = {} <= U({i}) = {}",
                i + 1,
                terms[i + 1],
                terms[i]
            )));
        }
        let spectrum = spectrum(&recurrence, &initial);
        let (digit_bound, quotients_stabilized) = digit_bound(&terms, spectrum.beta);
        Ok(NumerationSystem {
            name: name.to_string(),
            recurrence,
            terms,
            spectrum,
            digit_bound,
            quotients_stabilized,
        })
    }

    /// Bertrand system of `(3 + √5)/2`: `U(i) = 3U(i−1) − U(i−2)`, `1, 3`.
    pub fn phi_squared() -> Self {
        Self::new("phi2", vec![3, -1], vec![1, 3]).expect("valid system")
    }

    /// Fibonacci numbers `1, 2, 3, 5, 8, …`.
    pub fn zeckendorf() -> Self {
        Self::new("zeckendorf", vec![1, 1], vec![1, 2]).expect("valid system")
    }

    /// Integer base `b`.
    pub fn integer_base(b: i64) -> Result<Self> {
        Self::new(&format!("base{b}"), vec![b], vec![1])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.recurrence.len()
    }

    pub fn recurrence(&self) -> &[i64] {
        &self.recurrence
    }

    pub fn initial_terms(&self) -> &[BigInt] {
        &self.terms[..self.order()]
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Largest digit of the alphabet of greedy representations.
    pub fn digit_bound(&self) -> i64 {
        self.digit_bound
    }

    /// Whether the successive quotients `U(i+1)/U(i)` settled near the
    /// dominant root within the scanned prefix.
    pub fn quotients_stabilized(&self) -> bool {
        self.quotients_stabilized
    }

    /// `A_U = {0, …, digit_bound}`.
    pub fn digit_alphabet(&self) -> Vec<i64> {
        (0..=self.digit_bound).collect()
    }

    /// The first `n` terms.
    pub fn terms(&self, n: usize) -> Cow<'_, [BigInt]> {
        if n <= self.terms.len() {
            return Cow::Borrowed(&self.terms[..n]);
        }
        let mut terms = self.terms.clone();
        while terms.len() < n {
            terms.push(next_term(&self.recurrence, &terms));
        }
        Cow::Owned(terms)
    }

    /// `U(i)`.
    pub fn term(&self, i: usize) -> BigInt {
        match self.terms.get(i) {
            Some(t) => t.clone(),
            None => self.terms(i + 1)[i].clone(),
        }
    }

    /// `val_U(w) = Σ a_i U(i)`; digits may be arbitrary integers.
    pub fn value(&self, digits: &[i64]) -> BigInt {
        let terms = self.terms(digits.len());
        digits
            .iter()
            .rev()
            .zip(terms.iter())
            .filter(|(d, _)| **d != 0)
            .map(|(&d, u)| u * d)
            .sum()
    }

    /// Greedy representation of `n ≥ 0`, most significant digit first;
    /// `rep(0) = ε`.
    pub fn greedy_rep(&self, n: &BigInt) -> Result<Vec<i64>> {
        if n.is_negative() {
            return Err(Error::Contract(format!(
                "greedy representation of negative integer {n}"
            )));
        }
        if n.is_zero() {
            return Ok(Vec::new());
        }
        // Smallest L with U(L) > n; the representation has length L.
        let mut len = 0;
        let mut terms = Cow::Borrowed(&self.terms[..]);
        loop {
            if len >= terms.len() {
                terms = Cow::Owned(self.terms(2 * terms.len()).into_owned());
            }
            if terms[len] > *n {
                break;
            }
            len += 1;
        }
        let mut rest = n.clone();
        let mut digits = Vec::with_capacity(len);
        for j in (0..len).rev() {
            let (q, r) = rest.div_rem(&terms[j]);
            digits.push(q.to_i64().expect("greedy digit fits in i64"));
            rest = r;
        }
        Ok(digits)
    }

    /// The greedy condition: non-negative digits and
    /// `Σ_{i ≤ j} a_i U(i) < U(j + 1)` for every `j`. Leading zeros are
    /// allowed.
    pub fn is_greedy(&self, digits: &[i64]) -> bool {
        if digits.iter().any(|&d| d < 0) {
            return false;
        }
        let terms = self.terms(digits.len() + 1);
        let mut partial = BigInt::zero();
        for (j, &d) in digits.iter().rev().enumerate() {
            partial += &terms[j] * d;
            if partial >= terms[j + 1] {
                return false;
            }
        }
        true
    }

    /// Extended normalization: the greedy representation of the value, barred
    /// when the value is negative.
    pub fn normalize(&self, digits: &[i64]) -> Vec<i64> {
        let v = self.value(digits);
        if v.is_negative() {
            let rep = self.greedy_rep(&-v).expect("non-negative");
            rep.into_iter().map(|d| -d).collect()
        } else {
            self.greedy_rep(&v).expect("non-negative")
        }
    }

    /// `|ν_U(w)| − |w|`.
    pub fn delay(&self, digits: &[i64]) -> i64 {
        self.normalize(digits).len() as i64 - digits.len() as i64
    }

    pub fn pisot_check(&self, tolerance: f64) -> Result<PisotVerdict> {
        pisot_check(&self.recurrence, tolerance)
    }
}

fn next_term(recurrence: &[i64], terms: &[BigInt]) -> BigInt {
    let n = terms.len();
    recurrence
        .iter()
        .enumerate()
        .map(|(j, &c)| &terms[n - 1 - j] * c)
        .sum()
}

/// Digit bound from exact ceilings of `U(i+1)/U(i)` over a prefix that
/// extends past the point where quotients settle near `beta`, combined with
/// `⌈β⌉ − 1` when `beta` is not an integer.
fn digit_bound(terms: &[BigInt], beta: f64) -> (i64, bool) {
    let mut bound = 0i64;
    let mut stabilized_at = None;
    for i in 0..terms.len() - 1 {
        let (q, r) = terms[i + 1].div_rem(&terms[i]);
        let ceil = if r.is_zero() { q } else { q + 1 };
        bound = bound.max(ceil.to_i64().unwrap_or(i64::MAX) - 1);
        let ratio = ratio_f64(&terms[i + 1], &terms[i]);
        if stabilized_at.is_none() && (ratio - beta).abs() < 1e-6 {
            stabilized_at = Some(i);
        }
    }
    if (beta - libm::round(beta)).abs() > 1e-9 {
        bound = bound.max(libm::ceil(beta) as i64 - 1);
    }
    (bound, stabilized_at.is_some())
}

fn ratio_f64(a: &BigInt, b: &BigInt) -> f64 {
    // Scale both to keep the mantissas in range.
    let shift = b.bits().saturating_sub(60);
    let a = (a >> shift).to_f64().unwrap_or(f64::INFINITY);
    let b = (b >> shift).to_f64().unwrap_or(f64::INFINITY);
    a / b
}

/// Coefficients of `X^m − Σ c_j X^{m−j}`, highest degree first.
fn characteristic_polynomial(recurrence: &[i64]) -> Vec<f64> {
    let mut p = vec![1.0];
    p.extend(recurrence.iter().map(|&c| -(c as f64)));
    p
}

fn eval_poly(p: &[f64], x: Complex64) -> Complex64 {
    p.iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

fn eval_poly_real(p: &[f64], x: f64) -> f64 {
    p.iter().fold(0.0, |acc, &c| acc * x + c)
}

fn eval_derivative_real(p: &[f64], x: f64) -> f64 {
    let n = p.len() - 1;
    p[..n]
        .iter()
        .enumerate()
        .fold(0.0, |acc, (i, &c)| acc * x + c * (n - i) as f64)
}

/// Durand–Kerner iteration on a monic polynomial.
fn poly_roots(p: &[f64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    if n == 1 {
        return vec![Complex64::new(-p[1], 0.0)];
    }
    let radius = 1.0 + p[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32) * radius / (1.0 + k as f64 * 0.1))
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 1e-12);
            }
            let step = eval_poly(p, roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    for r in &mut roots {
        if r.im.abs() < 1e-10 {
            r.im = 0.0;
        }
    }
    roots.sort_by(|a, b| {
        b.norm()
            .partial_cmp(&a.norm())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    roots
}

/// Solves `Σ_k C_k r_k^i = U(i)` for `i < m` by Gaussian elimination.
fn decompose(roots: &[Complex64], initial: &[i64]) -> Option<Vec<Complex64>> {
    let m = roots.len();
    for i in 0..m {
        for j in i + 1..m {
            if (roots[i] - roots[j]).norm() < 1e-7 {
                return None;
            }
        }
    }
    let mut a: Vec<Vec<Complex64>> = (0..m)
        .map(|i| {
            let mut row: Vec<Complex64> = roots.iter().map(|r| r.powu(i as u32)).collect();
            row.push(Complex64::new(initial[i] as f64, 0.0));
            row
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m).max_by(|&x, &y| {
            a[x][col]
                .norm()
                .partial_cmp(&a[y][col].norm())
                .unwrap_or(core::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].norm() < 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        for row in 0..m {
            if row != col {
                let factor = a[row][col] / a[col][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[row].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= factor * p;
                }
            }
        }
    }
    Some((0..m).map(|i| a[i][m] / a[i][i]).collect())
}

fn spectrum(recurrence: &[i64], initial: &[i64]) -> Spectrum {
    let p = characteristic_polynomial(recurrence);
    let mut roots = poly_roots(&p);
    // Newton polish of the dominant root on the real line.
    let mut beta = roots[0].re;
    for _ in 0..100 {
        let d = eval_derivative_real(&p, beta);
        if d == 0.0 {
            break;
        }
        let step = eval_poly_real(&p, beta) / d;
        beta -= step;
        if step.abs() < 1e-16 * beta.abs().max(1.0) {
            break;
        }
    }
    if roots[0].im == 0.0 {
        roots[0].re = beta;
    }
    let mut beta_error = 1e-14 * beta.abs().max(1.0);
    while beta_error < 1e-3 {
        let lo = eval_poly_real(&p, beta - beta_error);
        let hi = eval_poly_real(&p, beta + beta_error);
        if lo * hi <= 0.0 {
            break;
        }
        beta_error *= 2.0;
    }
    let coefficients = decompose(&roots, initial);
    Spectrum {
        roots,
        beta,
        beta_error,
        coefficients,
    }
}

/// Root-isolation test that the characteristic polynomial of `recurrence`
/// has a single root of modulus above one, real and greater than one, with
/// every other root of modulus below `1 − tolerance`.
pub fn pisot_check(recurrence: &[i64], tolerance: f64) -> Result<PisotVerdict> {
    if recurrence.is_empty() {
        return Err(Error::Contract(
            "characteristic polynomial of degree 0".into(),
        ));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::Contract("tolerance must be positive".into()));
    }
    let roots = poly_roots(&characteristic_polynomial(recurrence));
    let dominant = roots[0];
    if dominant.im.abs() > tolerance || dominant.re <= 1.0 + tolerance {
        return Ok(PisotVerdict::Fail(format!(
            "dominant root {dominant} is not a real number greater than 1"
        )));
    }
    let mut near_circle = None;
    for r in &roots[1..] {
        let modulus = r.norm();
        if modulus >= 1.0 + tolerance {
            return Ok(PisotVerdict::Fail(format!(
                "conjugate {r} has modulus {modulus} > 1"
            )));
        }
        if modulus >= 1.0 - tolerance {
            near_circle = Some(*r);
        }
    }
    Ok(match near_circle {
        Some(r) => PisotVerdict::Inconclusive(format!(
            "conjugate {r} lies within {tolerance} of the unit circle"
        )),
        None => PisotVerdict::Pass,
    })
}

/// A `d`-tuple of numeration systems acting component-wise on `d`-dimensional
/// words.
#[derive(Clone, Debug)]
pub struct SystemTuple {
    systems: Vec<NumerationSystem>,
}

impl SystemTuple {
    pub fn new(systems: Vec<NumerationSystem>) -> Result<Self> {
        if systems.is_empty() {
            return Err(Error::Contract(
                "a system tuple needs at least one system".into(),
            ));
        }
        Ok(SystemTuple { systems })
    }

    pub fn single(system: NumerationSystem) -> Self {
        SystemTuple {
            systems: vec![system],
        }
    }

    pub fn dim(&self) -> usize {
        self.systems.len()
    }

    pub fn systems(&self) -> &[NumerationSystem] {
        &self.systems
    }

    /// Cartesian product of the component digit alphabets.
    pub fn digit_alphabet(&self) -> Vec<Letter> {
        let mut out = vec![Vec::new()];
        for s in &self.systems {
            let mut next = Vec::new();
            for prefix in &out {
                for d in s.digit_alphabet() {
                    let mut l: Vec<i64> = prefix.clone();
                    l.push(d);
                    next.push(l);
                }
            }
            out = next;
        }
        out.into_iter().map(Letter).collect()
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "word of dimension {dim} for a {}-tuple of systems",
                self.dim()
            )));
        }
        Ok(())
    }

    /// Component-wise greedy representations, padded to equal length.
    pub fn rep_vec(&self, n: &[BigInt]) -> Result<Word> {
        self.check_dim(n.len())?;
        let reps = self
            .systems
            .iter()
            .zip(n)
            .map(|(s, x)| s.greedy_rep(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(pad_tuple(&reps))
    }

    pub fn val_vec(&self, w: &Word) -> Result<Vec<BigInt>> {
        self.check_dim(w.dim())?;
        Ok(self
            .systems
            .iter()
            .enumerate()
            .map(|(j, s)| s.value(&w.track(j)))
            .collect())
    }

    /// Component-wise extended normalization, padded to equal length.
    pub fn normalize(&self, w: &Word) -> Result<Word> {
        self.check_dim(w.dim())?;
        let parts: Vec<Vec<i64>> = self
            .systems
            .iter()
            .enumerate()
            .map(|(j, s)| s.normalize(&w.track(j)))
            .collect();
        Ok(pad_tuple(&parts))
    }

    /// `|ν_U(w)| − |w|`.
    pub fn delay(&self, w: &Word) -> Result<i64> {
        Ok(self.normalize(w)?.len() as i64 - w.len() as i64)
    }

    /// `f(||val_U(w)||)` argument: component-wise absolute values.
    pub fn abs_value(&self, w: &Word) -> Result<Vec<BigInt>> {
        Ok(self.val_vec(w)?.into_iter().map(|v| v.abs()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi2() -> NumerationSystem {
        NumerationSystem::phi_squared()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn terms() {
        assert_eq!(phi2().term(2), big(8));
        assert_eq!(phi2().term(0), big(1));
        assert_eq!(NumerationSystem::zeckendorf().term(4), big(8));
        let far = phi2().term(200);
        assert_eq!(far, 3 * phi2().term(199) - phi2().term(198));
    }

    #[test]
    fn digit_alphabets() {
        assert_eq!(phi2().digit_alphabet(), vec![0, 1, 2]);
        assert_eq!(NumerationSystem::zeckendorf().digit_alphabet(), vec![0, 1]);
        assert_eq!(
            NumerationSystem::integer_base(10).unwrap().digit_alphabet(),
            (0..10).collect::<Vec<_>>()
        );
        assert!(phi2().quotients_stabilized());
    }

    #[test]
    fn values() {
        let u = phi2();
        assert_eq!(u.value(&[0, 1, 2]), big(5));
        assert_eq!(u.value(&[]), big(0));
        assert_eq!(u.value(&[-2, -2]), big(-8));
    }

    #[test]
    fn greedy_representations() {
        let u = phi2();
        assert_eq!(u.greedy_rep(&big(9)).unwrap(), vec![1, 0, 1]);
        assert_eq!(u.greedy_rep(&big(0)).unwrap(), Vec::<i64>::new());
        assert_eq!(u.greedy_rep(&big(8)).unwrap(), vec![1, 0, 0]);
        assert_eq!(u.greedy_rep(&big(7)).unwrap(), vec![2, 1]);
        assert!(matches!(u.greedy_rep(&big(-1)), Err(Error::Contract(_))));
    }

    #[test]
    fn padding() {
        let w = pad_tuple(&[vec![1, 2], vec![1, 0, 1]]);
        assert_eq!(w.tracks(), vec![vec![0, 1, 2], vec![1, 0, 1]]);
        assert_eq!(w.len(), 3);
        assert!(pad_tuple(&[vec![], vec![]]).is_empty());
        let w = pad_tuple(&[vec![-1, 0, 0], vec![1, 0]]);
        assert_eq!(w.tracks(), vec![vec![-1, 0, 0], vec![0, 1, 0]]);
    }

    #[test]
    fn vector_maps() {
        let uu = SystemTuple::new(vec![phi2(), phi2()]).unwrap();
        let w = uu.rep_vec(&[big(5), big(9)]).unwrap();
        assert_eq!(w.tracks(), vec![vec![0, 1, 2], vec![1, 0, 1]]);
        assert!(uu.rep_vec(&[big(0), big(0)]).unwrap().is_empty());
        let w = uu.rep_vec(&[big(7), big(1)]).unwrap();
        assert_eq!(w.tracks(), vec![vec![2, 1], vec![0, 1]]);
        assert!(uu.rep_vec(&[big(-1), big(0)]).is_err());

        let w = Word::from_tracks(&[vec![0, 2, 1], vec![0, 0, 0, 1]]);
        assert!(w.is_err());
        let w = pad_tuple(&[vec![0, 2, 1], vec![0, 0, 0, 1]]);
        assert_eq!(uu.val_vec(&w).unwrap(), vec![big(7), big(1)]);
        assert_eq!(uu.val_vec(&Word::empty(2)).unwrap(), vec![big(0), big(0)]);
        let w = Word::from_tracks(&[vec![-3, 1, -1], vec![0, 1, 1]]).unwrap();
        assert_eq!(uu.val_vec(&w).unwrap(), vec![big(-22), big(4)]);
        assert!(uu.val_vec(&Word::from_digits(&[1])).is_err());
    }

    #[test]
    fn bar_and_abs() {
        let w = Word::from_digits(&[-1, 0, 0]);
        assert_eq!(w.abs(), Word::from_digits(&[1, 0, 0]));
        assert_eq!(Word::empty(1).abs(), Word::empty(1));
        let w = Word::from_tracks(&[vec![-3, 1, -1], vec![0, 1, 1]]).unwrap();
        assert_eq!(w.abs().tracks(), vec![vec![3, 1, 1], vec![0, 1, 1]]);
        assert_eq!(
            Word::from_digits(&[1, 0, 0]).negate(),
            Word::from_digits(&[-1, 0, 0])
        );
        assert_eq!(Word::empty(1).negate(), Word::empty(1));
        assert_eq!(
            Word::from_digits(&[1, -2]).negate(),
            Word::from_digits(&[-1, 2])
        );
    }

    #[test]
    fn normalization_and_delay() {
        let u = phi2();
        assert_eq!(u.normalize(&[-2, -2]), vec![-1, 0, 0]);
        assert_eq!(u.delay(&[2, 2]), 1);
        assert_eq!(u.delay(&[1, 0]), 0);
        assert_eq!(u.delay(&[1, -2]), -1);
        assert_eq!(u.normalize(&[0, 0, 0, 0]), Vec::<i64>::new());
        let uu = SystemTuple::new(vec![phi2(), phi2()]).unwrap();
        let w = Word::from_tracks(&[vec![0, 2, 2], vec![0, 1, 0]]).unwrap();
        assert_eq!(uu.delay(&w).unwrap(), 0);
        let w = Word::from_tracks(&[vec![-2, -2], vec![1, 0]]).unwrap();
        assert_eq!(
            uu.normalize(&w).unwrap().tracks(),
            vec![vec![-1, 0, 0], vec![0, 1, 0]]
        );
    }

    #[test]
    fn pisot_verdicts() {
        assert!(pisot_check(&[3, -1], 1e-9).unwrap().is_pass());
        assert!(pisot_check(&[1, 1], 1e-9).unwrap().is_pass());
        assert!(matches!(
            pisot_check(&[0, 4], 1e-9).unwrap(),
            PisotVerdict::Fail(_)
        ));
        // X^3 - 2X^2 + X - 2 = (X - 2)(X^2 + 1).
        assert!(matches!(
            pisot_check(&[2, -1, 2], 1e-9).unwrap(),
            PisotVerdict::Inconclusive(_)
        ));
        assert!(pisot_check(&[], 1e-9).is_err());
        assert!(pisot_check(&[1, 1], 0.0).is_err());
    }

    #[test]
    fn spectrum_reconstructs_terms() {
        for u in [phi2(), NumerationSystem::zeckendorf()] {
            let s = u.spectrum();
            let c = s.coefficients.as_ref().unwrap();
            for i in 0..20 {
                let approx: Complex64 = c
                    .iter()
                    .zip(&s.roots)
                    .map(|(ck, r)| ck * r.powu(i as u32))
                    .sum();
                let exact = u.term(i).to_f64().unwrap();
                assert!((approx.re - exact).abs() < 1e-6 * exact.max(1.0));
            }
            assert!(s.beta_error < 1e-9);
        }
        let beta = phi2().spectrum().beta;
        assert!((beta - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_systems() {
        assert!(NumerationSystem::new("x", vec![], vec![]).is_err());
        assert!(NumerationSystem::new("x", vec![1, 1], vec![1]).is_err());
        assert!(NumerationSystem::new("x", vec![1, 1], vec![2, 3]).is_err());
        assert!(NumerationSystem::new("x", vec![1], vec![1]).is_err());
    }

    #[test]
    fn zeckendorf_words() {
        let z = NumerationSystem::zeckendorf();
        assert_eq!(z.value(&[1, 1]), big(3));
        assert_eq!(z.value(&[1, 0, 0]), big(3));
        assert_eq!(z.normalize(&[1, 1]), vec![1, 0, 0]);
    }
}
