//! Dense matrices over GF(2^r) and packed binary matrices over GF(2).
//!
//! [`BaseMatrix`] is the object every construction produces and all rank
//! analysis consumes. [`BinaryMatrix`] stores rows as packed 64-bit words so
//! that Gaussian elimination on dispersed arrays (thousands of rows) is
//! word-parallel. Both are immutable values once built; all operations here
//! are pure.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::galois::{FieldContext, FieldElement};

/// Outcome of the 2x2 submatrix constraint test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmCheck {
    Pass,
    /// First 2x2 submatrix with no zero entry and zero determinant.
    Violation {
        rows: (usize, usize),
        cols: (usize, usize),
    },
}

impl SmCheck {
    pub fn passed(self) -> bool {
        matches!(self, SmCheck::Pass)
    }
}

/// Outcome of the row-column constraint test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcCheck {
    Pass,
    /// First pair of rows sharing more than one 1-position.
    Violation { rows: (usize, usize) },
}

impl RcCheck {
    pub fn passed(self) -> bool {
        matches!(self, RcCheck::Pass)
    }
}

/// Girth information derived from the 4-cycle test. Exact girth beyond the
/// 4-cycle/6 threshold is out of scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Girth {
    Four,
    AtLeastSix,
}

/// Dense m x n matrix over GF(2^r), stored row-major.
#[derive(Debug, Clone)]
pub struct BaseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
    ctx: Arc<FieldContext>,
}

impl BaseMatrix {
    /// Builds a matrix from an entry function.
    pub fn from_fn<F>(ctx: Arc<FieldContext>, rows: usize, cols: usize, mut f: F) -> BaseMatrix
    where
        F: FnMut(usize, usize) -> FieldElement,
    {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        BaseMatrix {
            rows,
            cols,
            entries,
            ctx,
        }
    }

    pub fn zero(ctx: Arc<FieldContext>, rows: usize, cols: usize) -> BaseMatrix {
        BaseMatrix {
            rows,
            cols,
            entries: vec![FieldElement::Zero; rows * cols],
            ctx,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.cols + j] = v;
    }

    /// Number of zero entries.
    pub fn zero_count(&self) -> usize {
        self.entries.iter().filter(|x| x.is_zero()).count()
    }

    pub fn transpose(&self) -> BaseMatrix {
        BaseMatrix::from_fn(self.ctx.clone(), self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Copy of the block `rows x cols` starting at `(row0, col0)`.
    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> BaseMatrix {
        assert!(row0 + rows <= self.rows && col0 + cols <= self.cols);
        BaseMatrix::from_fn(self.ctx.clone(), rows, cols, |i, j| {
            self.get(row0 + i, col0 + j)
        })
    }

    /// Row rank over GF(2^r) by Gaussian elimination. Pivots are the first
    /// nonzero entry in column order, rows swapped top-down.
    pub fn rank(&self) -> usize {
        let mut work = self.entries.clone();
        let (m, n) = (self.rows, self.cols);
        let ctx = &self.ctx;
        let mut rank = 0;
        for col in 0..n {
            if rank == m {
                break;
            }
            let Some(pivot) = (rank..m).find(|&i| !work[i * n + col].is_zero()) else {
                continue;
            };
            if pivot != rank {
                for j in col..n {
                    work.swap(pivot * n + j, rank * n + j);
                }
            }
            let pivot_inv = ctx.inv(work[rank * n + col]);
            for i in (rank + 1)..m {
                let x = work[i * n + col];
                if x.is_zero() {
                    continue;
                }
                let factor = ctx.mul(x, pivot_inv);
                for j in col..n {
                    let delta = ctx.mul(factor, work[rank * n + j]);
                    work[i * n + j] = ctx.add(work[i * n + j], delta);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Entry-wise product. Shapes and fields must agree.
    pub fn hadamard(&self, other: &BaseMatrix) -> Result<BaseMatrix, Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        if !self.ctx.same_field(&other.ctx) {
            return Err(Error::FieldMismatch);
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.ctx.mul(a, b))
            .collect();
        Ok(BaseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
            ctx: self.ctx.clone(),
        })
    }

    /// Entry-wise t-th power. For `t = 0` the convention is `x^0 = 1` for
    /// nonzero `x` and `0^0 = 0`.
    pub fn hadamard_power(&self, t: u64) -> BaseMatrix {
        let entries = self
            .entries
            .iter()
            .map(|&x| {
                if t == 0 {
                    if x.is_zero() {
                        FieldElement::Zero
                    } else {
                        FieldElement::ONE
                    }
                } else {
                    self.ctx.pow(x, t)
                }
            })
            .collect();
        BaseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
            ctx: self.ctx.clone(),
        }
    }

    /// Checks that every 2x2 submatrix contains a zero entry or is
    /// non-singular. Brute force with early exit; base matrices are at most
    /// q x q at desk scale. Matrices with a dimension of 1 pass vacuously.
    pub fn sm_constraint(&self) -> SmCheck {
        let ctx = &self.ctx;
        for i1 in 0..self.rows {
            for i2 in (i1 + 1)..self.rows {
                for j1 in 0..self.cols {
                    let a = self.get(i1, j1);
                    let c = self.get(i2, j1);
                    if a.is_zero() || c.is_zero() {
                        continue;
                    }
                    for j2 in (j1 + 1)..self.cols {
                        let b = self.get(i1, j2);
                        let d = self.get(i2, j2);
                        if b.is_zero() || d.is_zero() {
                            continue;
                        }
                        if ctx.mul(a, d) == ctx.mul(b, c) {
                            return SmCheck::Violation {
                                rows: (i1, i2),
                                cols: (j1, j2),
                            };
                        }
                    }
                }
            }
        }
        SmCheck::Pass
    }
}

impl fmt::Display for BaseMatrix {
    /// Exponent grid, -1 for the zero element.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                match self.get(i, j) {
                    FieldElement::Zero => write!(f, "-1")?,
                    FieldElement::Alpha(k) => write!(f, "{k}")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

const WORD_BITS: usize = 64;

/// Binary matrix with rows packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> BinaryMatrix {
        let words_per_row = cols.div_ceil(WORD_BITS).max(1);
        BinaryMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> BinaryMatrix
    where
        F: FnMut(usize, usize) -> bool,
    {
        let mut m = BinaryMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
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

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.words_per_row + j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let word = &mut self.data[i * self.words_per_row + j / WORD_BITS];
        if v {
            *word |= 1 << (j % WORD_BITS);
        } else {
            *word &= !(1 << (j % WORD_BITS));
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_weight(&self, j: usize) -> usize {
        (0..self.rows).filter(|&i| self.get(i, j)).count()
    }

    /// Positions of the ones in row `i`, ascending.
    pub fn row_positions(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.row(i).iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(w * WORD_BITS + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Rank over GF(2) by packed-word elimination.
    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        let wpr = self.words_per_row;
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let word = col / WORD_BITS;
            let mask = 1u64 << (col % WORD_BITS);
            let Some(pivot) =
                (rank..self.rows).find(|&i| work[i * wpr + word] & mask != 0)
            else {
                continue;
            };
            if pivot != rank {
                for w in 0..wpr {
                    work.swap(pivot * wpr + w, rank * wpr + w);
                }
            }
            let (head, tail) = work.split_at_mut((rank + 1) * wpr);
            let pivot_row = &head[rank * wpr..];
            for i in 0..self.rows - rank - 1 {
                let row = &mut tail[i * wpr..(i + 1) * wpr];
                if row[word] & mask != 0 {
                    for w in word..wpr {
                        row[w] ^= pivot_row[w];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Checks that no two rows share more than one common 1-position, i.e.
    /// that the Tanner graph has no 4-cycle.
    pub fn rc_constraint(&self) -> RcCheck {
        for i1 in 0..self.rows {
            let r1 = self.row(i1);
            for i2 in (i1 + 1)..self.rows {
                let r2 = self.row(i2);
                let mut common = 0u32;
                for w in 0..self.words_per_row {
                    common += (r1[w] & r2[w]).count_ones();
                    if common > 1 {
                        return RcCheck::Violation { rows: (i1, i2) };
                    }
                }
            }
        }
        RcCheck::Pass
    }

    /// 4 if any 4-cycle exists, otherwise at least 6.
    pub fn girth_lower_bound(&self) -> Girth {
        match self.rc_constraint() {
            RcCheck::Pass => Girth::AtLeastSix,
            RcCheck::Violation { .. } => Girth::Four,
        }
    }

    /// Column `j` packed over the rows (bit `i` set iff entry `(i, j)` is 1).
    pub fn column_packed(&self, j: usize) -> Vec<u64> {
        let words = self.rows.div_ceil(WORD_BITS).max(1);
        let mut out = vec![0u64; words];
        for i in 0..self.rows {
            if self.get(i, j) {
                out[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        out
    }

    /// Syndrome bit of row `i` against a word packed the same way as
    /// [`Self::column_packed`].
    pub fn row_parity(&self, i: usize, word: &[bool]) -> bool {
        self.row_positions(i).iter().fold(false, |acc, &j| acc ^ word[j])
    }
}
