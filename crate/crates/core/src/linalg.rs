//! Exact integer and rational matrices.
//!
//! Everything here works over arbitrary-precision integers ([`BigInt`]) or
//! canonical rationals ([`BigRational`]); there is no floating point and no
//! tolerance parameter anywhere. The Smith normal form is the workhorse: the
//! saturated kernel, integral solving and saturation are all read off from
//! its unimodular transforms.

use std::fmt;
use std::ops::{Index, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("ragged rows: row {row} has {got} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_from_int(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Representative of `v` modulo `modulus` in `[0, modulus)`.
pub fn rat_mod(v: &BigRational, modulus: &BigInt) -> BigRational {
    let m = rat_from_int(modulus);
    let q = (v / &m).floor();
    v - q * m
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(IntMat { rows, cols, data })
    }

    /// Builds a matrix from rows; the column count of an empty row list is zero.
    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`IntMat::from_rows`] but keeps the column count when there are no rows.
    pub fn from_rows_with_cols<T: Clone + Into<BigInt>>(rows: &[Vec<T>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::Ragged {
                    row: i,
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().cloned().map(Into::into));
        }
        Ok(IntMat {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, rhs: &IntMat) -> Result<IntMat> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self · x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `x · self` for a row vector `x`.
    pub fn vec_mul(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                x.len(),
                self.rows
            )));
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += xi * a;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &BigInt) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn neg(&self) -> IntMat {
        self.scale(&int(-1))
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &IntMat) -> Result<IntMat> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend(self.row(i).iter().cloned());
        }
        IntMat {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn to_rat(&self) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(rat_from_int).collect(),
        }
    }

    fn at(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(source, j) * factor;
            *self.at(target, j) += v;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, source) * factor;
            *self.at(i, target) += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            *self.at(i, j) = v;
        }
    }
}

impl Index<(usize, usize)> for IntMat {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        self.get(i, j)
    }
}

impl Mul for &IntMat {
    type Output = IntMat;

    /// Panics on a dimension mismatch; use [`IntMat::checked_mul`] for a `Result`.
    fn mul(self, rhs: &IntMat) -> IntMat {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMat{}x{}{}", self.rows, self.cols, self)
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Dense rational matrix; entries are always in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMat {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(RatMat { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<BigRational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::Ragged {
                    row: i,
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(RatMat {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        IntMat::identity(n).to_rat()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn transpose(&self) -> RatMat {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        RatMat {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn checked_mul(&self, rhs: &RatMat) -> Result<RatMat> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut data = vec![BigRational::zero(); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(RatMat {
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    pub fn scale(&self, factor: &BigRational) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(BigRational::is_integer)
    }

    pub fn to_int(&self) -> Option<IntMat> {
        if !self.is_integral() {
            return None;
        }
        Some(IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.to_integer()).collect(),
        })
    }

    pub fn denominator_lcm(&self) -> BigInt {
        denominator_lcm(&self.data)
    }

    /// Scales each row by the lcm of its denominators, giving an integer
    /// matrix with the same rational row span.
    pub fn clear_row_denominators(&self) -> IntMat {
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.rows {
            let l = rat_from_int(&denominator_lcm(self.row(i)));
            data.extend(self.row(i).iter().map(|v| (v * &l).to_integer()));
        }
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Rank by fraction-free elimination on the cleared integer matrix.
    pub fn rank(&self) -> usize {
        rank(&self.clear_row_denominators())
    }

    /// Gauss–Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Result<Option<RatMat>> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Ok(None);
            };
            a.swap(col, p);
            inv.swap(col, p);
            let pivot = a[col][col].clone();
            for j in 0..n {
                a[col][j] = &a[col][j] / &pivot;
                inv[col][j] = &inv[col][j] / &pivot;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let da = &f * &a[col][j];
                    a[r][j] -= da;
                    let di = &f * &inv[col][j];
                    inv[r][j] -= di;
                }
            }
        }
        Ok(Some(RatMat {
            rows: n,
            cols: n,
            data: inv.into_iter().flatten().collect(),
        }))
    }
}

impl Index<(usize, usize)> for RatMat {
    type Output = BigRational;

    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        self.get(i, j)
    }
}

impl Mul for &RatMat {
    type Output = RatMat;

    fn mul(self, rhs: &RatMat) -> RatMat {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `u · a · v = d` with `u`, `v` unimodular and `d` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SnfDecomposition {
    /// Diagonal entries of `d` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|v| !v.is_zero()).count()
    }

    /// Nonzero invariant factors different from one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|v| !v.is_zero() && !v.is_one())
            .collect()
    }
}

fn find_min_pivot(a: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a.get(bi, bj).abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form with unimodular transforms.
///
/// Pivots are the nonzero entries of minimal absolute value in the remaining
/// block, ties broken by (row, column) order, so the transforms are
/// reproducible.
pub fn snf(a: &IntMat) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMat::identity(m);
    let mut v = IntMat::identity(n);
    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = find_min_pivot(&d, t) else {
                return finish_snf(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let pivot = d.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..m {
                let q = d.get(i, t).div_floor(&pivot);
                let neg_q = -q;
                d.add_row_multiple(i, t, &neg_q);
                u.add_row_multiple(i, t, &neg_q);
                dirty |= !d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = d.get(t, j).div_floor(&pivot);
                let neg_q = -q;
                d.add_col_multiple(j, t, &neg_q);
                v.add_col_multiple(j, t, &neg_q);
                dirty |= !d.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let offending = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_snf(u, d, v)
}

fn finish_snf(u: IntMat, d: IntMat, v: IntMat) -> SnfDecomposition {
    SnfDecomposition { u, d, v }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn determinant(a: &IntMat) -> Result<BigInt> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                return Ok(BigInt::zero());
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                *m.at(i, j) = val;
            }
        }
        prev = m.get(k, k).clone();
    }
    Ok(sign * m.get(n - 1, n - 1))
}

/// Rank over the rationals.
pub fn rank(a: &IntMat) -> usize {
    hnf_rows(a).rows()
}

/// Row-style Hermite normal form of the integer row span, zero rows dropped.
///
/// The result is in echelon form with positive pivots and the entries above
/// each pivot reduced into `[0, pivot)`; two integer matrices span the same
/// row lattice iff their `hnf_rows` agree.
pub fn hnf_rows(a: &IntMat) -> IntMat {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut p = 0;
    for col in 0..cols {
        if p == rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in p..rows {
                let v = m.get(i, col);
                if v.is_zero() {
                    continue;
                }
                match best {
                    Some(b) if m.get(b, col).abs() <= v.abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else {
                break;
            };
            m.swap_rows(p, b);
            let pivot = m.get(p, col).clone();
            let mut done = true;
            for i in p + 1..rows {
                let q = m.get(i, col).div_floor(&pivot);
                m.add_row_multiple(i, p, &(-q));
                done &= m.get(i, col).is_zero();
            }
            if done {
                break;
            }
        }
        if m.get(p, col).is_zero() {
            continue;
        }
        if m.get(p, col).is_negative() {
            m.negate_row(p);
        }
        let pivot = m.get(p, col).clone();
        for i in 0..p {
            let q = m.get(i, col).div_floor(&pivot);
            m.add_row_multiple(i, p, &(-q));
        }
        p += 1;
    }
    m.select_rows(&(0..p).collect::<Vec<_>>())
}

/// Saturated basis of `{x integral : x · a = 0}`, one basis vector per row.
///
/// The result has `a.rows()` columns and may have zero rows.
pub fn saturated_kernel(a: &IntMat) -> IntMat {
    let dec = snf(a);
    let r = dec.rank();
    let idx: Vec<usize> = (r..a.rows()).collect();
    let k = dec.u.select_rows(&idx);
    if k.rows() == 0 {
        return k;
    }
    hnf_rows(&k)
}

/// Saturation of the row span: the rational row span intersected with the
/// integer lattice.
pub fn saturate_rows(a: &IntMat) -> IntMat {
    let orth = saturated_kernel(&a.transpose());
    if orth.rows() == 0 {
        return IntMat::identity(a.cols());
    }
    saturated_kernel(&orth.transpose())
}

/// Some integral `x` with `a · x = b`, or `None` if no integral solution exists.
pub fn solve_integral(a: &IntMat, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.rows()
        )));
    }
    let dec = snf(a);
    let c = dec.u.mul_vec(b)?;
    let r = dec.rank();
    if c[r..].iter().any(|v| !v.is_zero()) {
        return Ok(None);
    }
    let mut y = vec![BigInt::zero(); a.cols()];
    for k in 0..r {
        let dk = dec.d.get(k, k);
        if !c[k].is_multiple_of(dk) {
            return Ok(None);
        }
        y[k] = &c[k] / dk;
    }
    Ok(Some(dec.v.mul_vec(&y)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn g_star() -> IntMat {
        m(&[&[2, 1, 1, -2], &[1, 2, 0, 0], &[1, 0, -2, 0], &[-2, 0, 0, 0]])
    }

    fn check_snf(a: &IntMat) -> SnfDecomposition {
        let dec = snf(a);
        assert_eq!(&(&dec.u * a) * &dec.v, dec.d);
        assert_eq!(determinant(&dec.u).unwrap().abs(), int(1));
        assert_eq!(determinant(&dec.v).unwrap().abs(), int(1));
        dec
    }

    #[test]
    fn snf_identity() {
        let dec = check_snf(&IntMat::identity(3));
        assert_eq!(dec.d, IntMat::identity(3));
    }

    #[test]
    fn snf_normalizes_signs() {
        let dec = check_snf(&m(&[&[2, 0], &[0, -2]]));
        assert_eq!(dec.diagonal(), vec![int(2), int(2)]);
    }

    #[test]
    fn snf_of_g_star_is_1_1_4_4() {
        let dec = check_snf(&g_star());
        assert_eq!(dec.diagonal(), vec![int(1), int(1), int(4), int(4)]);
    }

    #[test]
    fn snf_rectangular_and_zero() {
        let dec = check_snf(&m(&[&[0, 0, 0], &[0, 0, 0]]));
        assert!(dec.d.is_zero());
        let dec = check_snf(&m(&[&[6, 4, 10]]));
        assert_eq!(dec.diagonal(), vec![int(2)]);
        let dec = check_snf(&IntMat::zeros(0, 3));
        assert_eq!(dec.rank(), 0);
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&IntMat::identity(5)).unwrap(), int(1));
        assert_eq!(determinant(&m(&[&[2, 0], &[0, -2]])).unwrap(), int(-4));
        assert_eq!(determinant(&g_star()).unwrap(), int(16));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])).unwrap(), int(-1));
        assert_eq!(determinant(&IntMat::zeros(0, 0)).unwrap(), int(1));
    }

    #[test]
    fn determinant_rejects_non_square() {
        assert!(matches!(
            determinant(&IntMat::zeros(2, 3)),
            Err(LinalgError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(saturated_kernel(&IntMat::zeros(2, 2)), IntMat::identity(2));
        // rows x with x·[[1],[2]] = 0 is the 1x2 map's kernel
        let k = saturated_kernel(&m(&[&[1], &[2]]));
        assert_eq!(k.rows(), 1);
        let row = k.row(0);
        assert!(row == [int(2), int(-1)] || row == [int(-2), int(1)]);
        assert_eq!(saturated_kernel(&m(&[&[2, 0], &[0, 2]])).rows(), 0);
    }

    #[test]
    fn solve_examples() {
        let b = vec![int(3), int(-7)];
        assert_eq!(solve_integral(&IntMat::identity(2), &b).unwrap(), Some(b));
        assert_eq!(solve_integral(&m(&[&[2]]), &[int(1)]).unwrap(), None);
        let x = solve_integral(&m(&[&[2, 3]]), &[int(1)]).unwrap().unwrap();
        assert_eq!(&x[0] * 2 + &x[1] * 3, int(1));
        assert!(solve_integral(&m(&[&[2, 3]]), &[int(1), int(2)]).is_err());
    }

    #[test]
    fn hnf_is_canonical() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let b = m(&[&[-6, 6, 12], &[2, 4, 4], &[12, 0, -12]]);
        assert_eq!(hnf_rows(&a), hnf_rows(&b));
        assert_eq!(hnf_rows(&m(&[&[0, 0], &[0, 0]])).rows(), 0);
    }

    #[test]
    fn saturation_of_index_two_span() {
        let s = saturate_rows(&m(&[&[1, 1], &[1, -1]]));
        assert_eq!(s, IntMat::identity(2));
        let s = saturate_rows(&m(&[&[2, 4, 0]]));
        assert_eq!(s, m(&[&[1, 2, 0]]));
    }

    #[test]
    fn rational_inverse() {
        let inv = g_star().to_rat().inverse().unwrap().unwrap();
        assert_eq!(&inv * &g_star().to_rat(), RatMat::identity(4));
        assert_eq!(inv.denominator_lcm(), int(4));
        assert!(m(&[&[1, 2], &[2, 4]]).to_rat().inverse().unwrap().is_none());
    }

    #[test]
    fn rat_mod_representatives() {
        assert_eq!(rat_mod(&rat(-1, 2), &int(2)), rat(3, 2));
        assert_eq!(rat_mod(&rat(7, 4), &int(1)), rat(3, 4));
        assert_eq!(rat_mod(&rat(4, 1), &int(2)), rat(0, 1));
    }
}
