//! Semirings and dense matrices over them.
//!
//! Every construction in the crate is written against [`Semiring`] and uses
//! only `zero`, `one`, `add` and `mul`. Five instances ship: [`Natural`],
//! [`Integer`], [`Rational`] (all arbitrary precision), [`Boolean`] and the
//! min-plus [`Tropical`] semiring.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// A semiring `(K, +, ×, 0, 1)` with commutative addition.
///
/// `Display` and [`Semiring::parse`] are inverse text encodings used by the
/// file formats: decimal for the integer instances, `p/q` for rationals,
/// `true`/`false` for booleans and a decimal or `inf` for tropical values.
pub trait Semiring: Clone + PartialEq + fmt::Debug + fmt::Display {
    /// Name used in serialized linear representations.
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn parse(text: &str) -> Option<Self>;

    /// Sum of an iterator of values, `zero` when empty.
    fn sum<I>(values: I) -> Self
    where
        I: IntoIterator<Item = Self>,
    {
        values.into_iter().fold(Self::zero(), |acc, v| acc.add(&v))
    }
}

/// Non-negative integers under the usual operations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Natural(pub BigUint);

/// Integers under the usual operations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Integer(pub BigInt);

/// Rationals under the usual operations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rational(pub BigRational);

/// Booleans with `or` as addition and `and` as multiplication.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Boolean(pub bool);

/// Min-plus semiring over the integers: addition is `min`, multiplication is
/// `+`, zero is `+∞` and one is `0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Tropical {
    Finite(BigInt),
    Infinity,
}

impl From<u64> for Natural {
    fn from(n: u64) -> Self {
        Natural(BigUint::from(n))
    }
}

impl From<i64> for Integer {
    fn from(n: i64) -> Self {
        Integer(BigInt::from(n))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<bool> for Boolean {
    fn from(b: bool) -> Self {
        Boolean(b)
    }
}

impl From<i64> for Tropical {
    fn from(n: i64) -> Self {
        Tropical::Finite(BigInt::from(n))
    }
}

impl Semiring for Natural {
    const NAME: &'static str = "natural";

    fn zero() -> Self {
        Natural(BigUint::zero())
    }
    fn one() -> Self {
        Natural(BigUint::one())
    }
    fn add(&self, rhs: &Self) -> Self {
        Natural(&self.0 + &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Natural(&self.0 * &rhs.0)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn parse(text: &str) -> Option<Self> {
        BigUint::from_str(text.trim()).ok().map(Natural)
    }
}

impl Semiring for Integer {
    const NAME: &'static str = "integer";

    fn zero() -> Self {
        Integer(BigInt::zero())
    }
    fn one() -> Self {
        Integer(BigInt::one())
    }
    fn add(&self, rhs: &Self) -> Self {
        Integer(&self.0 + &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Integer(&self.0 * &rhs.0)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn parse(text: &str) -> Option<Self> {
        BigInt::from_str(text.trim()).ok().map(Integer)
    }
}

impl Semiring for Rational {
    const NAME: &'static str = "rational";

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn add(&self, rhs: &Self) -> Self {
        Rational(&self.0 + &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rational(&self.0 * &rhs.0)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).ok()?;
                let q = BigInt::from_str(q.trim()).ok()?;
                if q.is_zero() {
                    return None;
                }
                Some(Rational(BigRational::new(p, q)))
            }
            None => BigInt::from_str(text)
                .ok()
                .map(|p| Rational(BigRational::from_integer(p))),
        }
    }
}

impl Semiring for Boolean {
    const NAME: &'static str = "boolean";

    fn zero() -> Self {
        Boolean(false)
    }
    fn one() -> Self {
        Boolean(true)
    }
    fn add(&self, rhs: &Self) -> Self {
        Boolean(self.0 || rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Boolean(self.0 && rhs.0)
    }
    fn parse(text: &str) -> Option<Self> {
        match text.trim() {
            "true" | "1" => Some(Boolean(true)),
            "false" | "0" => Some(Boolean(false)),
            _ => None,
        }
    }
}

impl Semiring for Tropical {
    const NAME: &'static str = "tropical";

    fn zero() -> Self {
        Tropical::Infinity
    }
    fn one() -> Self {
        Tropical::Finite(BigInt::zero())
    }
    fn add(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Tropical::Infinity, x) | (x, Tropical::Infinity) => x.clone(),
            (Tropical::Finite(a), Tropical::Finite(b)) => Tropical::Finite(a.min(b).clone()),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Tropical::Finite(a), Tropical::Finite(b)) => Tropical::Finite(a + b),
            _ => Tropical::Infinity,
        }
    }
    fn is_zero(&self) -> bool {
        matches!(self, Tropical::Infinity)
    }
    fn parse(text: &str) -> Option<Self> {
        match text.trim() {
            "inf" | "+inf" => Some(Tropical::Infinity),
            t => BigInt::from_str(t).ok().map(Tropical::Finite),
        }
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Display for Boolean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Tropical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tropical::Finite(v) => write!(f, "{v}"),
            Tropical::Infinity => f.write_str("inf"),
        }
    }
}

/// A semiring law that failed on concrete sample values.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomViolation {
    pub law: &'static str,
    pub operands: Vec<String>,
}

/// Checks every semiring law on all triples drawn from `samples`.
///
/// `Ok(())` means every law held on every triple; the first failing law is
/// reported otherwise.
pub fn check_axioms<S: Semiring>(samples: &[S]) -> core::result::Result<(), AxiomViolation> {
    let zero = S::zero();
    let one = S::one();
    let fail = |law: &'static str, vals: &[&S]| AxiomViolation {
        law,
        operands: vals.iter().map(|v| v.to_string()).collect(),
    };
    for a in samples {
        if a.add(&zero) != *a || zero.add(a) != *a {
            return Err(fail("additive identity", &[a]));
        }
        if a.mul(&one) != *a || one.mul(a) != *a {
            return Err(fail("multiplicative identity", &[a]));
        }
        if !a.mul(&zero).is_zero() || !zero.mul(a).is_zero() {
            return Err(fail("zero absorbs", &[a]));
        }
        for b in samples {
            if a.add(b) != b.add(a) {
                return Err(fail("additive commutativity", &[a, b]));
            }
            for c in samples {
                if a.add(b).add(c) != a.add(&b.add(c)) {
                    return Err(fail("additive associativity", &[a, b, c]));
                }
                if a.mul(b).mul(c) != a.mul(&b.mul(c)) {
                    return Err(fail("multiplicative associativity", &[a, b, c]));
                }
                if a.mul(&b.add(c)) != a.mul(b).add(&a.mul(c)) {
                    return Err(fail("left distributivity", &[a, b, c]));
                }
                if a.add(b).mul(c) != a.mul(c).add(&b.mul(c)) {
                    return Err(fail("right distributivity", &[a, b, c]));
                }
            }
        }
    }
    Ok(())
}

/// Dense row-major matrix over a semiring.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Semiring> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: alloc::vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn row_vector(entries: Vec<S>) -> Self {
        Matrix {
            rows: 1,
            cols: entries.len(),
            data: entries,
        }
    }

    pub fn column_vector(entries: Vec<S>) -> Self {
        Matrix {
            rows: entries.len(),
            cols: 1,
            data: entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Semiring::is_zero)
    }

    pub fn mul(&self, rhs: &Matrix<S>) -> Result<Matrix<S>> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix<S>) -> Result<Matrix<S>> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    /// Kronecker product; indices `(i, j)` of `self` and `(k, l)` of `rhs`
    /// map to `(i * rhs.rows + k, j * rhs.cols + l)`.
    pub fn kronecker(&self, rhs: &Matrix<S>) -> Matrix<S> {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a.mul(rhs.get(k, l)));
                    }
                }
            }
        }
        out
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix<S> {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn map<T: Semiring>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// Matrix product `a × b`.
pub fn mat_mul<S: Semiring>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    a.mul(b)
}

/// Entry-wise sum of a non-empty list of equally shaped matrices.
pub fn mat_sum<S: Semiring>(ms: &[Matrix<S>]) -> Result<Matrix<S>> {
    let (first, rest) = ms
        .split_first()
        .ok_or_else(|| Error::Contract("cannot sum an empty list of matrices".into()))?;
    rest.iter().try_fold(first.clone(), |acc, m| acc.add(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn nat(n: u64) -> Natural {
        Natural::from(n)
    }

    #[test]
    fn identity_times_matrix() {
        let m = Matrix::from_rows(vec![
            vec![nat(1), nat(2), nat(0)],
            vec![nat(0), nat(5), nat(7)],
            vec![nat(3), nat(0), nat(1)],
        ])
        .unwrap();
        assert_eq!(mat_mul(&Matrix::identity(3), &m).unwrap(), m);
        assert_eq!(mat_mul(&m, &Matrix::identity(3)).unwrap(), m);
    }

    #[test]
    fn boolean_row_times_column() {
        let a = Matrix::row_vector(vec![Boolean(true), Boolean(true)]);
        let b = Matrix::column_vector(vec![Boolean(true), Boolean(false)]);
        assert_eq!(*mat_mul(&a, &b).unwrap().get(0, 0), Boolean(true));
    }

    #[test]
    fn tropical_row_times_column() {
        // min(0 + 3, 2 + 1) = 3
        let a = Matrix::row_vector(vec![Tropical::from(0), Tropical::from(2)]);
        let b = Matrix::column_vector(vec![Tropical::from(3), Tropical::from(1)]);
        assert_eq!(*mat_mul(&a, &b).unwrap().get(0, 0), Tropical::from(3));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a: Matrix<Natural> = Matrix::zeros(2, 3);
        let b: Matrix<Natural> = Matrix::zeros(2, 3);
        assert!(matches!(mat_mul(&a, &b), Err(Error::DimensionMismatch(_))));
        assert!(matches!(
            mat_sum(&[a, Matrix::zeros(3, 2)]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn sums() {
        let m = Matrix::from_rows(vec![vec![nat(4), nat(1)]]).unwrap();
        assert_eq!(mat_sum(&[m.clone(), Matrix::zeros(1, 2)]).unwrap(), m);
        let s = mat_sum(&[
            Matrix::from_rows(vec![vec![nat(1)]]).unwrap(),
            Matrix::from_rows(vec![vec![nat(2)]]).unwrap(),
        ])
        .unwrap();
        assert_eq!(*s.get(0, 0), nat(3));
        let t = mat_sum(&[
            Matrix::from_rows(vec![vec![Tropical::from(5)]]).unwrap(),
            Matrix::from_rows(vec![vec![Tropical::from(2)]]).unwrap(),
        ])
        .unwrap();
        assert_eq!(*t.get(0, 0), Tropical::from(2));
        assert!(matches!(mat_sum::<Natural>(&[]), Err(Error::Contract(_))));
    }

    #[test]
    fn axioms_hold_on_shipped_instances() {
        assert!(check_axioms(&[nat(0), nat(1), nat(2), nat(3)]).is_ok());
        assert!(check_axioms(&[Boolean(false), Boolean(true)]).is_ok());
        assert!(check_axioms(&[
            Tropical::Infinity,
            Tropical::from(0),
            Tropical::from(1),
            Tropical::from(5)
        ])
        .is_ok());
        assert!(check_axioms(&[Integer::from(-3), Integer::from(0), Integer::from(7)]).is_ok());
        let half = Rational::parse("1/2").unwrap();
        assert!(check_axioms(&[half, Rational::from(-2), Rational::from(0)]).is_ok());
    }

    #[test]
    fn axioms_check_detects_a_broken_law() {
        // max-times with 0 as zero: 0 is not neutral for max on negatives.
        #[derive(Clone, PartialEq, Debug)]
        struct Broken(i64);
        impl fmt::Display for Broken {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
        impl Semiring for Broken {
            const NAME: &'static str = "broken";
            fn zero() -> Self {
                Broken(0)
            }
            fn one() -> Self {
                Broken(1)
            }
            fn add(&self, rhs: &Self) -> Self {
                Broken(self.0.max(rhs.0))
            }
            fn mul(&self, rhs: &Self) -> Self {
                Broken(self.0 * rhs.0)
            }
            fn parse(_: &str) -> Option<Self> {
                None
            }
        }
        let err = check_axioms(&[Broken(-1), Broken(2)]).unwrap_err();
        assert_eq!(err.law, "additive identity");
    }

    #[test]
    fn text_round_trip() {
        assert_eq!(Rational::parse("6/4").unwrap().to_string(), "3/2");
        assert_eq!(Rational::parse("5").unwrap().to_string(), "5/1");
        assert_eq!(Tropical::parse("inf").unwrap(), Tropical::Infinity);
        assert_eq!(Tropical::parse("-4").unwrap().to_string(), "-4");
        assert_eq!(Boolean::parse("true").unwrap(), Boolean(true));
        assert!(Natural::parse("-1").is_none());
        assert!(Rational::parse("1/0").is_none());
    }

    #[test]
    fn kronecker_layout() {
        let a = Matrix::from_rows(vec![vec![nat(1), nat(2)]]).unwrap();
        let b = Matrix::from_rows(vec![vec![nat(3)], vec![nat(4)]]).unwrap();
        let k = a.kronecker(&b);
        assert_eq!(
            k.to_rows(),
            vec![vec![nat(3), nat(6)], vec![nat(4), nat(8)]]
        );
    }
}
