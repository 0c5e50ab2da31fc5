use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, FieldElement, Scalar, ZeroTest};

/// A square matrix over an exact scalar kind, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    entries: Vec<T>,
}

/// Three-valued answer of a membership or equality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Yes,
    No,
    Indeterminate,
}

impl Membership {
    pub fn is_yes(self) -> bool {
        self == Membership::Yes
    }

    /// Conjunction: any `No` wins, then any `Indeterminate`.
    pub fn and(self, other: Membership) -> Membership {
        use Membership::*;
        match (self, other) {
            (No, _) | (_, No) => No,
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            _ => Yes,
        }
    }

    fn all(items: impl IntoIterator<Item = Membership>) -> Membership {
        items.into_iter().fold(Membership::Yes, Membership::and)
    }
}

fn required_zero(x: ZeroTest) -> Membership {
    match x {
        ZeroTest::Zero => Membership::Yes,
        ZeroTest::Nonzero => Membership::No,
        ZeroTest::Indeterminate => Membership::Indeterminate,
    }
}

impl<T: FieldElement> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("expected {n} entries in every row")));
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }

    /// Builds an `n × n` matrix from a function of the position.
    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> T) -> Self {
        let mut f = f;
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { n, entries }
    }

    /// The identity, with entries of the same kind as `like`.
    pub fn identity(n: usize, like: &T) -> Self {
        let (zero, one) = (like.zero_like(), like.one_like());
        Self::from_fn(n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let zero = diag[0].zero_like();
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i].clone() } else { zero.clone() })
    }

    /// `I + t·E_{i,j}`.
    pub fn elementary(n: usize, i: usize, j: usize, t: T) -> Self {
        let mut m = Self::identity(n, &t);
        m.set(i, j, m.get(i, j).plus(&t));
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.entries[i * self.n + j] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.entries.chunks(self.n)
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::Dimension(format!("{}×{} vs {}×{}", self.n, self.n, other.n, other.n)))
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.n;
        Ok(Self::from_fn(n, |i, j| {
            (1..n)
                .fold(self.get(i, 0).times(other.get(0, j)), |acc, k| acc.plus(&self.get(i, k).times(other.get(k, j))))
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.minus(b)).collect() })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| c.times(x))
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let mut acc = Self::identity(self.n, self.get(0, 0));
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Entrywise equality (to precision for p-adic entries).
    pub fn equals(&self, other: &Self) -> Membership {
        match self.sub(other) {
            Ok(d) => Membership::all(d.entries.iter().map(|x| required_zero(x.zero_test()))),
            Err(_) => Membership::No,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.equals(&Self::identity(self.n, self.get(0, 0))).is_yes()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    ///
    /// Every division is exact; for p-adic entries a column whose candidate
    /// pivots all vanish to precision yields a zero-to-precision result.
    pub fn determinant(&self) -> Result<T> {
        let n = self.n;
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = self.get(0, 0).one_like();
        for k in 0..n {
            let pivot_row = (k..n).find(|&i| m.get(i, k).zero_test() == ZeroTest::Nonzero);
            let Some(r) = pivot_row else {
                if (k..n).any(|i| m.get(i, k).zero_test() == ZeroTest::Indeterminate) {
                    return Err(Error::InsufficientPrecision("determinant pivot cannot be certified".into()));
                }
                return Ok(m.get(k, k).clone());
            };
            if r != k {
                m.swap_rows(r, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = m.get(i, j).times(m.get(k, k)).minus(&m.get(i, k).times(m.get(k, j)));
                    m.set(i, j, v.try_div(&prev)?);
                }
            }
            prev = m.get(k, k).clone();
        }
        let det = m.get(n - 1, n - 1).clone();
        Ok(if negate { det.negate() } else { det })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.n {
                self.entries.swap(a * self.n + j, b * self.n + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.n {
                self.entries.swap(i * self.n + a, i * self.n + b);
            }
        }
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n, self.get(0, 0));
        for k in 0..n {
            let r = (k..n).find(|&i| a.get(i, k).zero_test() == ZeroTest::Nonzero).ok_or(Error::Singular)?;
            a.swap_rows(r, k);
            inv.swap_rows(r, k);
            let pivot_inv = a.get(k, k).try_inv()?;
            for j in 0..n {
                a.set(k, j, a.get(k, j).times(&pivot_inv));
                inv.set(k, j, inv.get(k, j).times(&pivot_inv));
            }
            for i in (0..n).filter(|&i| i != k) {
                let f = a.get(i, k).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(i, j, a.get(i, j).minus(&f.times(a.get(k, j))));
                    inv.set(i, j, inv.get(i, j).minus(&f.times(inv.get(k, j))));
                }
            }
        }
        Ok(inv)
    }

    /// Determinant equal to 1.
    pub fn det_is_one(&self) -> Membership {
        match self.determinant() {
            Ok(d) => required_zero(d.minus(&d.one_like()).zero_test()),
            Err(_) => Membership::Indeterminate,
        }
    }

    pub fn is_upper_triangular(&self) -> Membership {
        Membership::all(
            (0..self.n)
                .flat_map(|i| (0..i).map(move |j| (i, j)))
                .map(|(i, j)| required_zero(self.get(i, j).zero_test())),
        )
    }

    pub fn is_diagonal(&self) -> Membership {
        Membership::all(
            (0..self.n)
                .flat_map(|i| (0..self.n).map(move |j| (i, j)))
                .filter(|(i, j)| i != j)
                .map(|(i, j)| required_zero(self.get(i, j).zero_test())),
        )
    }

    /// Upper triangular with ones on the diagonal.
    pub fn is_unitriangular(&self) -> Membership {
        let diag = Membership::all(self.diag().iter().map(|d| required_zero(d.minus(&d.one_like()).zero_test())));
        self.is_upper_triangular().and(diag)
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    /// Row-major text: entries separated by `,`, rows by `;`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

/// Parses the row-major text format (`2,3;0,1/2`, Gaussian entries as
/// `a+bi`) into a matrix over `field`.
pub fn parse_matrix(text: &str, field: &FieldDescriptor, precision: u32) -> Result<Matrix<Scalar>> {
    let rows = text
        .split(';')
        .map(|row| row.split(',').map(|entry| Scalar::parse_in(entry, field, precision)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows).map_err(|e| match e {
        Error::Dimension(msg) => Error::Parse(format!("matrix '{text}': {msg}")),
        other => other,
    })
}
