//! Dispersion of base matrices into arrays of circulant permutation blocks.
//!
//! Arrays are kept as descriptor grids (one tag per block) and expanded
//! lazily: a 64x64 array of 63x63 blocks is a few kilobytes as descriptors
//! but megabytes as bits. The binary form replaces a nonzero entry `a^k` by
//! the shift-k CPM and a zero entry by a zero block; the nonbinary form uses
//! alpha-multiplied CPMs whose column `c` carries the value `a^c`.

use std::sync::Arc;

use crate::error::Error;
use crate::galois::{FieldContext, FieldElement};
use crate::matrix::{BaseMatrix, BinaryMatrix};

/// Default expansion budget: 2^31 bits (256 MiB as packed words).
pub const DEFAULT_BUDGET_BITS: usize = 1 << 31;

/// One block of a dispersed array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    /// Zero block.
    Zero,
    /// Binary circulant permutation block with the given shift.
    Cpm(u32),
    /// Alpha-multiplied circulant permutation block with the given shift.
    AlphaCpm(u32),
}

/// Whether an array expands to GF(2) or to GF(q).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayKind {
    Binary,
    Nonbinary,
}

/// An m x n grid of CPM/zero block descriptors with a common block size.
#[derive(Debug, Clone)]
pub struct DispersedArray {
    block_rows: usize,
    block_cols: usize,
    block_size: u32,
    blocks: Vec<Block>,
    kind: ArrayKind,
    ctx: Arc<FieldContext>,
}

/// Binary mask applied entry-wise to a base matrix before dispersion.
pub type MaskMatrix = BinaryMatrix;

impl DispersedArray {
    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn block_size(&self) -> u32 {
        self.block_size
    }

    pub fn kind(&self) -> ArrayKind {
        self.kind
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn block(&self, i: usize, j: usize) -> Block {
        self.blocks[i * self.block_cols + j]
    }

    /// Total rows of the expanded matrix.
    pub fn rows(&self) -> usize {
        self.block_rows * self.block_size as usize
    }

    /// Total columns of the expanded matrix.
    pub fn cols(&self) -> usize {
        self.block_cols * self.block_size as usize
    }

    fn check_budget(&self, budget_bits: usize) -> Result<(), Error> {
        let needed = self.rows().saturating_mul(self.cols());
        if needed > budget_bits {
            return Err(Error::BudgetExceeded {
                needed_bits: needed,
                budget_bits,
            });
        }
        Ok(())
    }

    /// Expands a binary array to its packed GF(2) matrix.
    pub fn expand_binary(&self) -> Result<BinaryMatrix, Error> {
        self.expand_binary_with_budget(DEFAULT_BUDGET_BITS)
    }

    pub fn expand_binary_with_budget(&self, budget_bits: usize) -> Result<BinaryMatrix, Error> {
        assert!(
            self.kind == ArrayKind::Binary,
            "alpha-multiplied arrays expand over GF(q); use expand_field"
        );
        self.check_budget(budget_bits)?;
        let bs = self.block_size as usize;
        let mut out = BinaryMatrix::zeros(self.rows(), self.cols());
        for bi in 0..self.block_rows {
            for bj in 0..self.block_cols {
                if let Block::Cpm(shift) = self.block(bi, bj) {
                    for row in 0..bs {
                        let col = (shift as usize + row) % bs;
                        out.set(bi * bs + row, bj * bs + col, true);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Expands either kind to a dense GF(q) matrix (binary blocks become
    /// 0/1-valued field entries).
    pub fn expand_field(&self) -> Result<BaseMatrix, Error> {
        self.expand_field_with_budget(DEFAULT_BUDGET_BITS)
    }

    pub fn expand_field_with_budget(&self, budget_bits: usize) -> Result<BaseMatrix, Error> {
        self.check_budget(budget_bits)?;
        let bs = self.block_size as usize;
        let ctx = self.ctx.clone();
        let step = (ctx.e() / self.block_size) as u64;
        let mut out = BaseMatrix::zero(ctx.clone(), self.rows(), self.cols());
        for bi in 0..self.block_rows {
            for bj in 0..self.block_cols {
                match self.block(bi, bj) {
                    Block::Zero => {}
                    Block::Cpm(shift) => {
                        for row in 0..bs {
                            let col = (shift as usize + row) % bs;
                            out.set(bi * bs + row, bj * bs + col, FieldElement::ONE);
                        }
                    }
                    Block::AlphaCpm(shift) => {
                        for row in 0..bs {
                            let col = (shift as usize + row) % bs;
                            out.set(
                                bi * bs + row,
                                bj * bs + col,
                                ctx.alpha(col as u64 * step),
                            );
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Column weights of the expanded matrix, computed from descriptors.
    pub fn column_weights(&self) -> Vec<usize> {
        let bs = self.block_size as usize;
        let mut weights = vec![0usize; self.cols()];
        for bj in 0..self.block_cols {
            let nonzero = (0..self.block_rows)
                .filter(|&bi| self.block(bi, bj) != Block::Zero)
                .count();
            for c in 0..bs {
                weights[bj * bs + c] = nonzero;
            }
        }
        weights
    }

    /// Row weights of the expanded matrix, computed from descriptors.
    pub fn row_weights(&self) -> Vec<usize> {
        let bs = self.block_size as usize;
        let mut weights = vec![0usize; self.rows()];
        for bi in 0..self.block_rows {
            let nonzero = (0..self.block_cols)
                .filter(|&bj| self.block(bi, bj) != Block::Zero)
                .count();
            for r in 0..bs {
                weights[bi * bs + r] = nonzero;
            }
        }
        weights
    }
}

/// e-fold binary dispersion: `a^k` becomes the shift-k CPM, zero entries
/// become zero blocks. The 2x2 submatrix constraint is not required here;
/// callers check it separately.
pub fn disperse(base: &BaseMatrix) -> DispersedArray {
    disperse_block_size(base, base.ctx().e()).expect("full block size always divides q - 1")
}

/// Dispersion with block size `block_size` dividing `q - 1`. Every nonzero
/// entry must be a power of the subgroup generator `a^((q-1)/block_size)`;
/// its shift is the exponent divided by that step.
pub fn disperse_block_size(base: &BaseMatrix, block_size: u32) -> Result<DispersedArray, Error> {
    let ctx = base.ctx();
    let e = ctx.e();
    if block_size == 0 || e % block_size != 0 {
        return Err(Error::InvalidBlockSize { block_size, e });
    }
    let step = e / block_size;
    let mut blocks = Vec::with_capacity(base.rows() * base.cols());
    for i in 0..base.rows() {
        for j in 0..base.cols() {
            match base.get(i, j) {
                FieldElement::Zero => blocks.push(Block::Zero),
                FieldElement::Alpha(k) => {
                    if k % step != 0 {
                        return Err(Error::EntryOutsideSubgroup { row: i, col: j });
                    }
                    blocks.push(Block::Cpm(k / step));
                }
            }
        }
    }
    Ok(DispersedArray {
        block_rows: base.rows(),
        block_cols: base.cols(),
        block_size,
        blocks,
        kind: ArrayKind::Binary,
        ctx: ctx.clone(),
    })
}

/// e-fold nonbinary dispersion into alpha-multiplied CPMs: the block for
/// `a^k` has top-row value `a^k` at position k and each subsequent row is
/// the right cyclic shift of the row above multiplied by `a`.
pub fn disperse_alpha(base: &BaseMatrix) -> DispersedArray {
    let ctx = base.ctx();
    let mut blocks = Vec::with_capacity(base.rows() * base.cols());
    for i in 0..base.rows() {
        for j in 0..base.cols() {
            match base.get(i, j) {
                FieldElement::Zero => blocks.push(Block::Zero),
                FieldElement::Alpha(k) => blocks.push(Block::AlphaCpm(k)),
            }
        }
    }
    DispersedArray {
        block_rows: base.rows(),
        block_cols: base.cols(),
        block_size: ctx.e(),
        blocks,
        kind: ArrayKind::Nonbinary,
        ctx: ctx.clone(),
    }
}

/// Masked base matrix `Z o B`: keep `b_ij` where `z_ij = 1`, zero elsewhere.
/// Zeroing entries cannot create a violating 2x2 submatrix, so masking
/// preserves the submatrix constraint.
pub fn apply_mask(base: &BaseMatrix, mask: &MaskMatrix) -> Result<BaseMatrix, Error> {
    if base.rows() != mask.rows() || base.cols() != mask.cols() {
        return Err(Error::ShapeMismatch {
            left: (base.rows(), base.cols()),
            right: (mask.rows(), mask.cols()),
        });
    }
    Ok(BaseMatrix::from_fn(
        base.ctx().clone(),
        base.rows(),
        base.cols(),
        |i, j| {
            if mask.get(i, j) {
                base.get(i, j)
            } else {
                FieldElement::Zero
            }
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{fourier, FieldContext};
    use crate::matrix::{RcCheck, SmCheck};
    use crate::transform::transform_rank;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn ctx(r: u32) -> Arc<FieldContext> {
        Arc::new(FieldContext::new(r).unwrap())
    }

    fn random_base(rng: &mut StdRng, ctx: &Arc<FieldContext>, rows: usize, cols: usize) -> BaseMatrix {
        BaseMatrix::from_fn(ctx.clone(), rows, cols, |_, _| {
            let v = rng.gen_range(0..ctx.q());
            ctx.from_poly(v)
        })
    }

    #[test]
    fn identity_block_for_unit_entry() {
        let f = ctx(2);
        let base = BaseMatrix::from_fn(f, 1, 1, |_, _| FieldElement::ONE);
        let h = disperse(&base).expand_binary().unwrap();
        assert_eq!(h, BinaryMatrix::identity(3));
    }

    #[test]
    fn cpm_blocks_are_permutations() {
        let mut rng = StdRng::seed_from_u64(37);
        let f = ctx(3);
        let base = random_base(&mut rng, &f, 3, 4);
        let h = disperse(&base).expand_binary().unwrap();
        let e = 7usize;
        for bi in 0..3 {
            for bj in 0..4 {
                let expected = usize::from(!base.get(bi, bj).is_zero());
                for r in 0..e {
                    let weight = (0..e)
                        .filter(|&c| h.get(bi * e + r, bj * e + c))
                        .count();
                    assert_eq!(weight, expected);
                }
                for c in 0..e {
                    let weight = (0..e)
                        .filter(|&r| h.get(bi * e + r, bj * e + c))
                        .count();
                    assert_eq!(weight, expected);
                }
            }
        }
    }

    #[test]
    fn dispersion_is_injective() {
        let mut rng = StdRng::seed_from_u64(41);
        let f = ctx(3);
        let a = random_base(&mut rng, &f, 2, 3);
        let mut b = a.clone();
        b.set(1, 2, f.add(b.get(1, 2), FieldElement::ONE));
        let ha = disperse(&a).expand_binary().unwrap();
        let hb = disperse(&b).expand_binary().unwrap();
        assert_ne!(ha, hb);
    }

    #[test]
    fn per_block_transform_recovers_hadamard_powers() {
        // The Fourier transform of each block generator is the diagonal
        // (1, b, b^2, ..., b^(e-1)); collecting component t over all blocks
        // reproduces the t-th Hadamard power of the base matrix.
        let mut rng = StdRng::seed_from_u64(43);
        let f = ctx(3);
        let e = f.e() as usize;
        let base = random_base(&mut rng, &f, 2, 3);
        let h = disperse(&base).expand_binary().unwrap();
        for bi in 0..2 {
            for bj in 0..3 {
                let generator: Vec<FieldElement> = (0..e)
                    .map(|c| {
                        if h.get(bi * e, bj * e + c) {
                            FieldElement::ONE
                        } else {
                            FieldElement::Zero
                        }
                    })
                    .collect();
                let diag = fourier(&generator, &f).unwrap();
                for (t, &bt) in diag.iter().enumerate() {
                    assert_eq!(bt, base.hadamard_power(t as u64).get(bi, bj));
                }
            }
        }
    }

    #[test]
    fn weights_match_base_nonzero_counts() {
        let mut rng = StdRng::seed_from_u64(47);
        let f = ctx(4);
        let base = random_base(&mut rng, &f, 3, 5);
        let array = disperse(&base);
        let h = array.expand_binary().unwrap();
        let col_weights = array.column_weights();
        let row_weights = array.row_weights();
        for j in 0..h.cols() {
            assert_eq!(h.col_weight(j), col_weights[j]);
        }
        for i in 0..h.rows() {
            assert_eq!(h.row_weight(i), row_weights[i]);
        }
    }

    #[test]
    fn sm_constrained_base_disperses_to_rc_constrained_array() {
        let mut rng = StdRng::seed_from_u64(53);
        let f = ctx(3);
        // Random-partition bases always satisfy the submatrix constraint;
        // sample until one shows up.
        loop {
            let base = random_base(&mut rng, &f, 3, 4);
            let h = disperse(&base).expand_binary().unwrap();
            match base.sm_constraint() {
                SmCheck::Pass => {
                    assert!(h.rc_constraint().passed());
                    break;
                }
                SmCheck::Violation { .. } => {
                    assert!(!h.rc_constraint().passed());
                }
            }
        }
    }

    #[test]
    fn all_ones_base_dispersion_violates_rc() {
        let f = ctx(3);
        let ones = BaseMatrix::from_fn(f, 2, 2, |_, _| FieldElement::ONE);
        let h = disperse(&ones).expand_binary().unwrap();
        assert!(matches!(h.rc_constraint(), RcCheck::Violation { .. }));
    }

    #[test]
    fn alpha_block_structure() {
        // 1x1 base [1] over GF(2^2): rows (1,0,0), (0,a,0), (0,0,a^2).
        let f = ctx(2);
        let base = BaseMatrix::from_fn(f.clone(), 1, 1, |_, _| FieldElement::ONE);
        let ha = disperse_alpha(&base).expand_field().unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c { f.alpha(c as u64) } else { FieldElement::Zero };
                assert_eq!(ha.get(r, c), expect);
            }
        }
    }

    #[test]
    fn column_scaling_recovers_binary_dispersion() {
        let mut rng = StdRng::seed_from_u64(59);
        let f = ctx(3);
        let base = random_base(&mut rng, &f, 2, 3);
        let ha = disperse_alpha(&base).expand_field().unwrap();
        let h = disperse(&base).expand_binary().unwrap();
        let e = f.e() as usize;
        for i in 0..ha.rows() {
            for j in 0..ha.cols() {
                let scaled = f.mul(ha.get(i, j), f.inv(f.alpha((j % e) as u64)));
                assert_eq!(scaled.is_one(), h.get(i, j));
                assert_eq!(scaled.is_zero(), !h.get(i, j));
            }
        }
    }

    #[test]
    fn alpha_array_rank_matches_binary_rank() {
        let mut rng = StdRng::seed_from_u64(61);
        let f = ctx(3);
        let base = random_base(&mut rng, &f, 2, 3);
        let ha = disperse_alpha(&base).expand_field().unwrap();
        let h = disperse(&base).expand_binary().unwrap();
        assert_eq!(ha.rank(), h.rank());
        assert_eq!(h.rank(), transform_rank(&base).rank);
    }

    #[test]
    fn budget_is_enforced() {
        let f = ctx(6);
        let base = BaseMatrix::from_fn(f, 4, 4, |i, j| FieldElement::Alpha(((i + j) % 63) as u32));
        let err = disperse(&base).expand_binary_with_budget(100).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn sub_block_size_dispersion() {
        // GF(2^4): q - 1 = 15 = 3 * 5. Entries in the order-5 subgroup
        // generated by a^3 disperse with 5x5 blocks.
        let f = ctx(4);
        let base = BaseMatrix::from_fn(f.clone(), 2, 2, |i, j| f.alpha(3 * ((i * j + 1) % 5) as u64));
        let array = disperse_block_size(&base, 5).unwrap();
        assert_eq!(array.rows(), 10);
        let h = array.expand_binary().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let shift = ((i * j + 1) % 5) as usize;
                assert!(h.get(i * 5, j * 5 + shift));
            }
        }
        // An entry outside the subgroup is rejected.
        let bad = BaseMatrix::from_fn(f.clone(), 1, 1, |_, _| f.alpha(1));
        assert!(matches!(
            disperse_block_size(&bad, 5),
            Err(Error::EntryOutsideSubgroup { .. })
        ));
        assert!(matches!(
            disperse_block_size(&bad, 4),
            Err(Error::InvalidBlockSize { .. })
        ));
    }

    #[test]
    fn zero_block_expands_to_zero_matrix() {
        let f = ctx(3);
        let base = BaseMatrix::zero(f, 1, 1);
        let h = disperse(&base).expand_binary().unwrap();
        assert_eq!(h.rank(), 0);
        assert_eq!(h, BinaryMatrix::zeros(7, 7));
    }

    #[test]
    fn masking_keeps_and_zeroes_entries() {
        let mut rng = StdRng::seed_from_u64(67);
        let f = ctx(4);
        let base = random_base(&mut rng, &f, 3, 4);
        let all = MaskMatrix::from_fn(3, 4, |_, _| true);
        let none = MaskMatrix::from_fn(3, 4, |_, _| false);
        let kept = apply_mask(&base, &all).unwrap();
        for i in 0..3 {
            for j in 0..4 {
                assert_eq!(kept.get(i, j), base.get(i, j));
            }
        }
        let zeroed = apply_mask(&base, &none).unwrap();
        assert_eq!(zeroed.zero_count(), 12);
        let wrong = MaskMatrix::from_fn(2, 4, |_, _| true);
        assert!(apply_mask(&base, &wrong).is_err());
    }

    #[test]
    fn masking_preserves_sm_constraint() {
        let mut rng = StdRng::seed_from_u64(71);
        let f = ctx(4);
        for _ in 0..20 {
            let base = random_base(&mut rng, &f, 3, 4);
            if !base.sm_constraint().passed() {
                continue;
            }
            let mask = MaskMatrix::from_fn(3, 4, |_, _| rng.gen_bool(0.7));
            let masked = apply_mask(&base, &mask).unwrap();
            assert!(masked.sm_constraint().passed());
        }
    }
}
