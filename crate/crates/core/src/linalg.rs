//! Exact matrices over the integers and over the two-element field.
//!
//! [`IntMatrix`] stores machine integers; anything that can grow (Smith normal
//! form, determinants) is computed with arbitrary-precision integers.
//! [`F2Matrix`] packs each row into 64-bit words.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },
    #[error("a {rows}x{cols} matrix needs {expected} entries, got {actual}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },
    #[error("rows have different lengths (row {row} has {len}, expected {expected})")]
    RaggedRows { row: usize, len: usize, expected: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry ({row}, {col}) is negative ({value})")]
    NegativeEntry { row: usize, col: usize, value: i64 },
    #[error("entry ({row}, {col}) overflows when forming I - A")]
    Overflow { row: usize, col: usize },
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyShape { rows, cols });
        }
        let expected = rows * cols;
        if entries.len() != expected {
            return Err(MatrixError::EntryCount {
                rows,
                cols,
                expected,
                actual: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(MatrixError::RaggedRows {
                    row: i,
                    len: row.len(),
                    expected: cols,
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, entries)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1; n])
    }

    /// Square matrix with `diag` on the diagonal. Panics on an empty slice.
    pub fn diagonal(diag: &[i64]) -> Self {
        let n = diag.len();
        assert!(n > 0, "diagonal matrix needs at least one entry");
        let mut entries = vec![0; n * n];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * n + i] = d;
        }
        Self { rows: n, cols: n, entries }
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

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.cols + col]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[i64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn require_square(&self) -> Result<usize, MatrixError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn require_nonnegative(&self) -> Result<(), MatrixError> {
        match self.entries.iter().position(|&v| v < 0) {
            None => Ok(()),
            Some(i) => Err(MatrixError::NegativeEntry {
                row: i / self.cols,
                col: i % self.cols,
                value: self.entries[i],
            }),
        }
    }

    /// `I - A` for a square matrix.
    pub fn identity_minus(&self) -> Result<Self, MatrixError> {
        let n = self.require_square()?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for r in 0..n {
            for c in 0..n {
                let id = i64::from(r == c);
                let v = id
                    .checked_sub(self.get(r, c))
                    .ok_or(MatrixError::Overflow { row: r, col: c })?;
                entries.push(v);
            }
        }
        Ok(Self {
            rows: n,
            cols: n,
            entries,
        })
    }

    /// Reorders rows and columns simultaneously: entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn conjugate_by_permutation(&self, perm: &[usize]) -> Result<Self, MatrixError> {
        let n = self.require_square()?;
        assert_eq!(perm.len(), n, "permutation length must match matrix size");
        let mut entries = Vec::with_capacity(n * n);
        for &pi in perm {
            for &pj in perm {
                entries.push(self.get(pi, pj));
            }
        }
        Ok(Self {
            rows: n,
            cols: n,
            entries,
        })
    }

    fn to_big_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (c, v) in self.row(r).iter().enumerate() {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

const WORD_BITS: usize = 64;

/// Matrix over F2 with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(WORD_BITS);
        Self {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "index out of range");
        let word = self.bits[row * self.words_per_row + col / WORD_BITS];
        (word >> (col % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        let word = &mut self.bits[row * self.words_per_row + col / WORD_BITS];
        let mask = 1u64 << (col % WORD_BITS);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Entrywise sum over F2.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect();
        Self {
            bits,
            ..self.clone()
        }
    }

    fn row_words(&self, row: usize) -> &[u64] {
        &self.bits[row * self.words_per_row..(row + 1) * self.words_per_row]
    }

    /// Row rank by Gaussian elimination. Pivots are chosen column by column,
    /// taking the first row (top to bottom) with a set bit.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let wpr = work.words_per_row;
        let mut pivot_row = 0;
        for col in 0..work.cols {
            if pivot_row == work.rows {
                break;
            }
            let (w, mask) = (col / WORD_BITS, 1u64 << (col % WORD_BITS));
            let Some(found) =
                (pivot_row..work.rows).find(|&r| work.bits[r * wpr + w] & mask != 0)
            else {
                continue;
            };
            if found != pivot_row {
                for k in 0..wpr {
                    work.bits.swap(found * wpr + k, pivot_row * wpr + k);
                }
            }
            let pivot: Vec<u64> = work.row_words(pivot_row).to_vec();
            for r in pivot_row + 1..work.rows {
                if work.bits[r * wpr + w] & mask != 0 {
                    for (k, p) in pivot.iter().enumerate().skip(w) {
                        work.bits[r * wpr + k] ^= p;
                    }
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    /// Dimension of the right kernel `{x : M x = 0}` of a square matrix.
    pub fn kernel_dim(&self) -> Result<usize, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.cols - self.rank())
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("\n")?;
            }
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

/// Entrywise parity of an integer matrix.
pub fn mod2_reduce(a: &IntMatrix) -> F2Matrix {
    F2Matrix::from_fn(a.rows(), a.cols(), |r, c| a.get(r, c).rem_euclid(2) == 1)
}

pub fn f2_rank(m: &F2Matrix) -> usize {
    m.rank()
}

pub fn f2_kernel_dim(m: &F2Matrix) -> Result<usize, MatrixError> {
    m.kernel_dim()
}

/// Invariant factors `d1 | d2 | ... | dr` followed by zeros, `min(rows, cols)`
/// entries in total.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigUint>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().filter(|d| !d.is_zero()).count()
    }

    /// Number of even factors; zeros count as even.
    pub fn count_even(&self) -> usize {
        self.invariant_factors.iter().filter(|d| d.is_even()).count()
    }

    pub fn count_odd(&self) -> usize {
        self.invariant_factors.len() - self.count_even()
    }

    /// Product of all factors, which is zero as soon as one factor is zero.
    pub fn product(&self) -> BigUint {
        self.invariant_factors.iter().product()
    }
}

/// Smith normal form over the integers, with exact arithmetic throughout.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let mut m = a.to_big_rows();
    let (rows, cols) = (a.rows(), a.cols());
    let size = rows.min(cols);

    for t in 0..size {
        let Some((pr, pc)) = smallest_nonzero(&m, t) else {
            break;
        };
        m.swap(t, pr);
        swap_cols(&mut m, t, pc);

        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if m[r][t].is_zero() {
                    continue;
                }
                let q = m[r][t].div_floor(&m[t][t]);
                for c in t..cols {
                    let delta = &q * &m[t][c];
                    m[r][c] -= delta;
                }
                if !m[r][t].is_zero() {
                    dirty = true;
                }
            }
            for c in t + 1..cols {
                if m[t][c].is_zero() {
                    continue;
                }
                let q = m[t][c].div_floor(&m[t][t]);
                for r in t..rows {
                    let delta = &q * &m[r][t];
                    m[r][c] -= delta;
                }
                if !m[t][c].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                move_smallest_to_pivot(&mut m, t);
                continue;
            }
            // Row and column are clear; the pivot must divide the rest.
            let offender = (t + 1..rows).find_map(|r| {
                (t + 1..cols)
                    .any(|c| !m[r][c].is_multiple_of(&m[t][t]))
                    .then_some(r)
            });
            match offender {
                Some(r) => {
                    for c in t..cols {
                        let v = m[r][c].clone();
                        m[t][c] += v;
                    }
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            m[t][t] = -m[t][t].clone();
        }
    }

    let invariant_factors = (0..size)
        .map(|i| m[i][i].magnitude().clone())
        .collect();
    SmithForm { invariant_factors }
}

fn smallest_nonzero(m: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (r, row) in m.iter().enumerate().skip(t) {
        for (c, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            match best {
                Some((br, bc)) if m[br][bc].magnitude() <= v.magnitude() => {}
                _ => best = Some((r, c)),
            }
        }
    }
    best
}

fn move_smallest_to_pivot(m: &mut [Vec<BigInt>], t: usize) {
    // Only row t and column t can hold nonzero entries off the pivot here.
    let mut best = (t, t);
    for r in t + 1..m.len() {
        if !m[r][t].is_zero() && m[r][t].magnitude() < m[best.0][best.1].magnitude() {
            best = (r, t);
        }
    }
    for c in t + 1..m[t].len() {
        if !m[t][c].is_zero() && m[t][c].magnitude() < m[best.0][best.1].magnitude() {
            best = (t, c);
        }
    }
    m.swap(t, best.0);
    swap_cols(m, t, best.1);
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// `|det(a)|` by fraction-free (Bareiss) elimination.
pub fn det_abs(a: &IntMatrix) -> Result<BigUint, MatrixError> {
    let n = a.require_square()?;
    let mut m = a.to_big_rows();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                }
                None => return Ok(BigUint::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    // Row swaps only flip the sign, which the magnitude discards.
    Ok(m[n - 1][n - 1].magnitude().clone())
}
