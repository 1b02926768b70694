//! Coefficient fields and dense matrices over them.
//!
//! Fields are runtime values (the prime is chosen on the command line), so
//! arithmetic goes through a [`Field`] instance rather than operator traits on
//! the element type.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Parses an integer or (over the rationals) a fraction `a/b`.
    fn parse(&self, s: &str) -> Option<Self::Elem>;
    /// Canonical text form, used in reports.
    fn render(&self, a: &Self::Elem) -> String;
    /// Short name such as `F_101` or `Q`.
    fn name(&self) -> String;
    /// Characteristic (0 for the rationals).
    fn characteristic(&self) -> u64;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// The prime field `F_p`, elements stored reduced in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Returns `None` unless `p` is a prime below `2^32`.
    pub fn new(p: u64) -> Option<Self> {
        (p < 1 << 32 && is_prime(p)).then_some(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat
        let (mut base, mut exp, mut acc) = (*a, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        Some(acc)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn parse(&self, s: &str) -> Option<u64> {
        let n: BigInt = s.trim().parse().ok()?;
        let r = ((n % BigInt::from(self.p)) + BigInt::from(self.p)) % BigInt::from(self.p);
        u64::try_from(r).ok()
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        format!("F_{}", self.p)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

/// The rational numbers with exact big-integer fractions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn parse(&self, s: &str) -> Option<BigRational> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let d: BigInt = d.trim().parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n.trim().parse().ok()?, d))
            }
            None => Some(BigRational::from_integer(s.parse().ok()?)),
        }
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom().abs())
        }
    }
    fn name(&self) -> String {
        "Q".into()
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

/// Dense row-major matrix over a field.
#[derive(Clone)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Matrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; `None` if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<F::Elem>>) -> Option<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(field: &F, rows: &[Vec<i64>]) -> Option<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self, field: &F) -> bool {
        self.data.iter().all(|x| field.is_zero(x))
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = Self::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if field.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = field.add(&out.data[idx], &field.mul(a, b));
                }
            }
        }
        out
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| field.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| field.mul(a, c)).collect(),
        }
    }

    pub fn pow(&self, field: &F, e: usize) -> Self {
        let mut acc = Self::identity(field, self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(field, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(field, &base);
            }
        }
        acc
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn rank(&self, field: &F) -> usize {
        let mut m = self.clone();
        m.row_reduce(field)
    }

    /// Reduced row echelon form in place; returns the rank.
    pub fn row_reduce(&mut self, field: &F) -> usize {
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(p) = (pivot_row..self.rows).find(|&r| !field.is_zero(self.get(r, col))) else {
                continue;
            };
            self.swap_rows(p, pivot_row);
            let inv = field
                .inv(self.get(pivot_row, col))
                .expect("pivot is nonzero");
            for j in col..self.cols {
                let v = field.mul(self.get(pivot_row, j), &inv);
                self.set(pivot_row, j, v);
            }
            for r in 0..self.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if field.is_zero(&factor) {
                    continue;
                }
                for j in col..self.cols {
                    let v = field.sub(self.get(r, j), &field.mul(&factor, self.get(pivot_row, j)));
                    self.set(r, j, v);
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self, field: &F) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, field.one());
        }
        aug.row_reduce(field);
        let mut inv = Self::zeros(field, n, n);
        for i in 0..n {
            if field.is_zero(aug.get(i, i)) {
                return None;
            }
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}
