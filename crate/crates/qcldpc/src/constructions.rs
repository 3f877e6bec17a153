//! Base-matrix families and their closed-form rank predictions.
//!
//! Six families are provided: the Latin square over GF(q), Vandermonde
//! matrices built on the largest prime-order subgroup, random and
//! consecutive field partitions, the diamond split, product-like coupling of
//! block-diagonal matrices, and degree-shaped masks derived from cyclic-code
//! circulants. Each construction is deterministic given its parameters (and
//! seed, where one applies), so CPM layouts reproduce bit-exactly.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::dispersion::{disperse, MaskMatrix};
use crate::error::Error;
use crate::galois::{FieldContext, FieldElement};
use crate::matrix::{BaseMatrix, BinaryMatrix, SmCheck};
use crate::transform::binomial;

// ---------------------------------------------------------------------------
// Latin squares
// ---------------------------------------------------------------------------

/// Element order used for Latin rows and columns: `1, a, ..., a^(q-2), 0`.
/// Index q-1 is the zero element.
fn latin_element(ctx: &FieldContext, idx: usize) -> FieldElement {
    if idx == ctx.q() as usize - 1 {
        FieldElement::Zero
    } else {
        FieldElement::Alpha(idx as u32)
    }
}

/// Submatrix of the q x q Latin square with upper-left corner `(row0, col0)`.
/// Entry `(i, j)` is the sum (= difference, in characteristic 2) of the
/// row element and the column element, so zeros sit exactly where row and
/// column index the same field element.
pub fn latin_submatrix(
    ctx: &Arc<FieldContext>,
    row0: usize,
    col0: usize,
    rows: usize,
    cols: usize,
) -> Result<BaseMatrix, Error> {
    let q = ctx.q() as usize;
    if rows == 0 || row0 + rows > q {
        return Err(Error::DimensionOutOfRange {
            what: "latin rows",
            value: row0 + rows,
            max: q,
        });
    }
    if cols == 0 || col0 + cols > q {
        return Err(Error::DimensionOutOfRange {
            what: "latin cols",
            value: col0 + cols,
            max: q,
        });
    }
    Ok(BaseMatrix::from_fn(ctx.clone(), rows, cols, |i, j| {
        ctx.add(latin_element(ctx, row0 + i), latin_element(ctx, col0 + j))
    }))
}

/// The m x n upper-left submatrix of the q x q Latin square base matrix.
pub fn latin_base(ctx: &Arc<FieldContext>, m: usize, n: usize) -> Result<BaseMatrix, Error> {
    latin_submatrix(ctx, 0, 0, m, n)
}

/// Rank of the zeroth Hadamard power of a top-left Latin submatrix, from the
/// zero count `k0`: `k0 + 1` when `k0 < min(m, n)`, `k0 - 1` for odd square
/// matrices with `k0 = m = n`, `k0` otherwise.
fn latin_mu0(k0: usize, m: usize, n: usize) -> usize {
    if k0 < m.min(n) {
        k0 + 1
    } else if k0 == m && m == n && m % 2 == 1 {
        k0 - 1
    } else {
        k0
    }
}

/// Closed-form rank of the e-fold dispersion of `latin_base(ctx, m, n)`,
/// valid when `m >= q/2` or `n >= q/2`. Each Hadamard power factors through
/// a pair of Vandermonde-structured matrices, giving per-power rank
/// `min(m, 2^w(t))` with `w(t)` the binary weight of `t` (or the transposed
/// statement when only `m >= q/2`); summing over weight classes yields
/// `mu0 + sum_i C(r, i) * min(m, 2^i)`.
pub fn latin_rank_formula(ctx: &Arc<FieldContext>, m: usize, n: usize) -> Result<usize, Error> {
    let q = ctx.q() as usize;
    let r = ctx.r();
    if m == 0 || m > q || n == 0 || n > q {
        return Err(Error::DimensionOutOfRange {
            what: "latin dims",
            value: m.max(n),
            max: q,
        });
    }
    let bounded = if 2 * n >= q {
        m
    } else if 2 * m >= q {
        n
    } else {
        return Err(Error::FormulaRange {
            reason: "latin rank formula needs m >= q/2 or n >= q/2",
        });
    };
    // Zeros of a top-left Latin submatrix sit exactly on the diagonal.
    let k0 = m.min(n);
    let mu0 = latin_mu0(k0, m, n);
    let mut total = mu0;
    for i in 1..r {
        total += binomial(r, i) * bounded.min(1usize << i);
    }
    Ok(total)
}

/// Oracle-backed check of the redundant-subarray equalities of the
/// full-height Latin array: for `n <= q/2` the rank of `H(q, n)` equals that
/// of `H(q/2, n)` (the lower half rows are redundant); for `n > q/2` it
/// equals the rank of `H(n, n)` plus one exactly when `n` is odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubarrayEqualityCheck {
    pub n: usize,
    /// GF(2) rank of the dispersed `H(q, n)`.
    pub full_rank: usize,
    /// GF(2) rank of the reduced subarray.
    pub reduced_rank: usize,
    /// Expected difference between the two ranks.
    pub expected_offset: usize,
    pub holds: bool,
}

pub fn latin_redundant_subarray_equalities(
    ctx: &Arc<FieldContext>,
    n: usize,
) -> Result<SubarrayEqualityCheck, Error> {
    if ctx.r() > 5 {
        return Err(Error::DimensionOutOfRange {
            what: "oracle-backed equality check extension degree",
            value: ctx.r() as usize,
            max: 5,
        });
    }
    let q = ctx.q() as usize;
    let oracle = |m: usize, nn: usize| -> Result<usize, Error> {
        Ok(disperse(&latin_base(ctx, m, nn)?).expand_binary()?.rank())
    };
    let full_rank = oracle(q, n)?;
    let (reduced_rank, expected_offset) = if 2 * n <= q {
        (oracle(q / 2, n)?, 0)
    } else {
        (oracle(n, n)?, n % 2)
    };
    Ok(SubarrayEqualityCheck {
        n,
        full_rank,
        reduced_rank,
        expected_offset,
        holds: full_rank == reduced_rank + expected_offset,
    })
}

// ---------------------------------------------------------------------------
// Vandermonde matrices
// ---------------------------------------------------------------------------

/// Parameters of the Vandermonde family over GF(q): `p` is the largest prime
/// factor of `q - 1`, `k = (q - 1) / p`, and `beta = a^k` has order exactly
/// `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VandermondeParams {
    pub p: u32,
    pub k: u32,
}

fn largest_prime_factor(mut x: u32) -> u32 {
    let mut best = 1;
    let mut d = 2;
    while d * d <= x {
        while x % d == 0 {
            best = d;
            x /= d;
        }
        d += 1;
    }
    if x > 1 {
        best = x;
    }
    best
}

pub fn vandermonde_params(ctx: &FieldContext) -> VandermondeParams {
    let p = largest_prime_factor(ctx.e());
    VandermondeParams { p, k: ctx.e() / p }
}

/// The m x n upper-left submatrix of the p x p matrix with entry
/// `beta^(i*j)`. Requires `m <= n <= p`; the submatrix keeps rank `m`.
pub fn vandermonde_base(ctx: &Arc<FieldContext>, m: usize, n: usize) -> Result<BaseMatrix, Error> {
    let params = vandermonde_params(ctx);
    let p = params.p as usize;
    if m == 0 || n == 0 || m > n || n > p {
        return Err(Error::DimensionOutOfRange {
            what: "vandermonde dims (need m <= n <= p)",
            value: m.max(n),
            max: p,
        });
    }
    let k = params.k as u64;
    Ok(BaseMatrix::from_fn(ctx.clone(), m, n, |i, j| {
        ctx.alpha(k * ((i * j) % p) as u64)
    }))
}

/// Predicted rank of the p-fold dispersion of an m x n Vandermonde base:
/// `m*p - m + 1` (for the full square this is `1 + (p-1)p`).
pub fn vandermonde_predicted_rank(p: u32, m: usize) -> usize {
    m * p as usize - m + 1
}

// ---------------------------------------------------------------------------
// Field partitions
// ---------------------------------------------------------------------------

/// Canonical consecutive partition: `G1 = {0, 1, a, ..., a^(m-2)}` and
/// `G2 = {a^(m-1), ..., a^(q-2)}`.
pub fn consecutive_partition(
    ctx: &Arc<FieldContext>,
    m: usize,
) -> Result<(Vec<FieldElement>, Vec<FieldElement>), Error> {
    let q = ctx.q() as usize;
    if m == 0 || m >= q {
        return Err(Error::DimensionOutOfRange {
            what: "partition size m (need 1 <= m <= q - 1)",
            value: m,
            max: q - 1,
        });
    }
    let mut g1 = vec![FieldElement::Zero];
    g1.extend((0..m as u32 - 1).map(FieldElement::Alpha));
    let g2 = (m as u32 - 1..ctx.e()).map(FieldElement::Alpha).collect();
    Ok((g1, g2))
}

/// Seeded random partition of the field into subsets of sizes `m` and
/// `q - m`.
pub fn random_partition(
    ctx: &Arc<FieldContext>,
    m: usize,
    seed: u64,
) -> Result<(Vec<FieldElement>, Vec<FieldElement>), Error> {
    let q = ctx.q() as usize;
    if m == 0 || m >= q {
        return Err(Error::DimensionOutOfRange {
            what: "partition size m (need 1 <= m <= q - 1)",
            value: m,
            max: q - 1,
        });
    }
    let mut elements: Vec<FieldElement> = ctx.elements().collect();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    elements.shuffle(&mut rng);
    let g2 = elements.split_off(m);
    Ok((elements, g2))
}

/// Base matrix with entry `(i, j) = G1[i] + G2[j]`. Disjointness makes every
/// entry nonzero, entries within a row or column pairwise distinct, and every
/// 2x2 submatrix non-singular.
pub fn partition_base(
    ctx: &Arc<FieldContext>,
    g1: &[FieldElement],
    g2: &[FieldElement],
) -> Result<BaseMatrix, Error> {
    let q = ctx.q() as usize;
    if g1.is_empty() || g2.is_empty() {
        return Err(Error::InvalidPartition {
            reason: "both subsets must be nonempty".into(),
        });
    }
    if g1.len() + g2.len() != q {
        return Err(Error::InvalidPartition {
            reason: format!("subset sizes {} + {} != q = {q}", g1.len(), g2.len()),
        });
    }
    let mut seen = vec![false; q];
    for &x in g1.iter().chain(g2) {
        let key = ctx.to_poly(x) as usize;
        if seen[key] {
            return Err(Error::InvalidPartition {
                reason: format!("element {x} appears twice"),
            });
        }
        seen[key] = true;
    }
    Ok(BaseMatrix::from_fn(
        ctx.clone(),
        g1.len(),
        g2.len(),
        |i, j| ctx.add(g1[i], g2[j]),
    ))
}

/// Closed-form rank of the e-fold dispersion of the consecutive-partition
/// base with `|G1| = m <= 2^(r-1)`:
/// `3^r - 2^r - sum_{w=w0+1}^{r-1} C(r, w) * (2^w - m)` with `w0` the largest
/// integer such that `2^w0 <= m`. For `m = 2^(r-1)` the sum is empty and the
/// rank is `3^r - 2^r`.
pub fn partition_rank_formula(ctx: &FieldContext, m: usize) -> Result<usize, Error> {
    let r = ctx.r();
    if m == 0 || m > 1usize << (r - 1) {
        return Err(Error::FormulaRange {
            reason: "partition rank formula needs a consecutive partition with m <= 2^(r-1)",
        });
    }
    let omega0 = u32::BITS - 1 - (m as u32).leading_zeros();
    let mut total = 3usize.pow(r) - 2usize.pow(r);
    for w in (omega0 + 1)..r {
        total -= binomial(r, w) * ((1usize << w) - m);
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Diamond split
// ---------------------------------------------------------------------------

/// Diamond base matrix together with the split halves it was assembled from.
#[derive(Debug, Clone)]
pub struct DiamondBase {
    /// The assembled `2m_w x 2n_w` base matrix `[[U, L], [L, U]]`.
    pub base: BaseMatrix,
    pub upper: BaseMatrix,
    pub lower: BaseMatrix,
    /// `c_w = n_w / m_w`.
    pub expansion: usize,
    /// Result of the post-hoc submatrix-constraint check; the split does not
    /// guarantee it for arbitrary inputs.
    pub sm: SmCheck,
}

/// Splits `w` by the rule `upper(i, j) = w(i, j)` iff `i <= floor(j / c_w)`
/// (lower takes the strict complement) and tiles `[[U, L], [L, U]]`.
/// `m_w` must divide `n_w`. A zero-free `w` of low rank maximizes the row
/// redundancy of the dispersed array.
pub fn diamond_base(w: &BaseMatrix) -> Result<DiamondBase, Error> {
    let (mw, nw) = (w.rows(), w.cols());
    if mw == 0 || nw % mw != 0 {
        return Err(Error::NotDivisible {
            what: "diamond base cols",
            value: nw,
            divisor: mw.max(1),
        });
    }
    let cw = nw / mw;
    let ctx = w.ctx().clone();
    let upper = BaseMatrix::from_fn(ctx.clone(), mw, nw, |i, j| {
        if i <= j / cw {
            w.get(i, j)
        } else {
            FieldElement::Zero
        }
    });
    let lower = BaseMatrix::from_fn(ctx.clone(), mw, nw, |i, j| {
        if i > j / cw {
            w.get(i, j)
        } else {
            FieldElement::Zero
        }
    });
    let base = BaseMatrix::from_fn(ctx, 2 * mw, 2 * nw, |i, j| {
        let (bi, ii) = (i / mw, i % mw);
        let (bj, jj) = (j / nw, j % nw);
        if bi == bj {
            upper.get(ii, jj)
        } else {
            lower.get(ii, jj)
        }
    });
    let sm = base.sm_constraint();
    Ok(DiamondBase {
        base,
        upper,
        lower,
        expansion: cw,
        sm,
    })
}

// ---------------------------------------------------------------------------
// Product-like coupling
// ---------------------------------------------------------------------------

/// Stacks `blocks` on a block diagonal and appends `coupling` below. The
/// assembled matrix must satisfy the 2x2 submatrix constraint; violations are
/// errors carrying the offending minor.
pub fn product_like_base(
    blocks: &[BaseMatrix],
    coupling: &BaseMatrix,
) -> Result<BaseMatrix, Error> {
    let first = blocks.first().ok_or(Error::InvalidPartition {
        reason: "product-like base needs at least one block".into(),
    })?;
    let (mw, nw) = (first.rows(), first.cols());
    for b in blocks {
        if b.rows() != mw || b.cols() != nw {
            return Err(Error::ShapeMismatch {
                left: (mw, nw),
                right: (b.rows(), b.cols()),
            });
        }
        if !b.ctx().same_field(first.ctx()) {
            return Err(Error::FieldMismatch);
        }
    }
    let l = blocks.len();
    if coupling.cols() != nw * l {
        return Err(Error::ShapeMismatch {
            left: (coupling.rows(), coupling.cols()),
            right: (coupling.rows(), nw * l),
        });
    }
    if coupling.rows() > 0 && !coupling.ctx().same_field(first.ctx()) {
        return Err(Error::FieldMismatch);
    }
    let rows = mw * l + coupling.rows();
    let assembled = BaseMatrix::from_fn(first.ctx().clone(), rows, nw * l, |i, j| {
        if i < mw * l {
            let (bi, ii) = (i / mw, i % mw);
            let (bj, jj) = (j / nw, j % nw);
            if bi == bj {
                blocks[bi].get(ii, jj)
            } else {
                FieldElement::Zero
            }
        } else {
            coupling.get(i - mw * l, j)
        }
    });
    match assembled.sm_constraint() {
        SmCheck::Pass => Ok(assembled),
        SmCheck::Violation { rows, cols } => Err(Error::SmViolation { rows, cols }),
    }
}

/// Draws a coupling matrix with exactly one nonzero entry per column and
/// balanced row weights, rejection-sampling entries until the assembled
/// product-like base passes the submatrix constraint. Deterministic for a
/// fixed seed.
pub fn sample_coupling(
    blocks: &[BaseMatrix],
    rows: usize,
    seed: u64,
) -> Result<BaseMatrix, Error> {
    let first = blocks.first().ok_or(Error::InvalidPartition {
        reason: "coupling needs at least one block".into(),
    })?;
    let ctx = first.ctx().clone();
    let cols = first.cols() * blocks.len();
    if rows == 0 {
        return Ok(BaseMatrix::zero(ctx, 0, cols));
    }
    let nw = first.cols();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    'draw: for _ in 0..200 {
        // Balanced column-to-row assignment, shuffled.
        let mut owners: Vec<usize> = (0..cols).map(|c| c % rows).collect();
        owners.shuffle(&mut rng);
        let mut candidate = BaseMatrix::zero(ctx.clone(), rows, cols);
        for col in 0..cols {
            let row = owners[col];
            // A minor formed by this coupling row and any block row is
            // singular only for specific value ratios against the entries
            // already placed in the same row and block; exclude those.
            let block = col / nw;
            let mut forbidden: Vec<FieldElement> = Vec::new();
            for prev in (block * nw..col).filter(|&c| owners[c] == row) {
                let c1 = candidate.get(row, prev);
                for i in 0..first.rows() {
                    let w1 = blocks[block].get(i, prev % nw);
                    let w2 = blocks[block].get(i, col % nw);
                    if !w1.is_zero() && !w2.is_zero() {
                        forbidden.push(ctx.mul(c1, ctx.mul(w2, ctx.inv(w1))));
                    }
                }
            }
            let offset = rng.gen_range(0..ctx.e()) as u64;
            let Some(value) = (0..ctx.e() as u64)
                .map(|k| ctx.alpha(offset + k))
                .find(|v| !forbidden.contains(v))
            else {
                continue 'draw;
            };
            candidate.set(row, col, value);
        }
        if product_like_base(blocks, &candidate).is_ok() {
            return Ok(candidate);
        }
    }
    Err(Error::SearchFailed {
        what: "coupling matrix",
    })
}

// ---------------------------------------------------------------------------
// Cyclic-code masks
// ---------------------------------------------------------------------------

/// The n x n circulant whose rows are the successive right cyclic shifts of
/// `generator`.
pub fn circulant(generator: &[bool]) -> BinaryMatrix {
    let n = generator.len();
    BinaryMatrix::from_fn(n, n, |i, j| generator[(j + n - i) % n])
}

/// Parity vector `h` of the cyclic code of length `n` generated by
/// `gen_poly`: the coefficients of `h(x) = (x^n + 1) / g(x)`, padded to
/// length `n`. Fails if `g(x)` does not divide `x^n + 1`.
pub fn cyclic_parity_vector(gen_poly: u64, n: usize) -> Result<Vec<bool>, Error> {
    if gen_poly == 0 {
        return Err(Error::Parse("zero generator polynomial".into()));
    }
    let deg_g = (63 - gen_poly.leading_zeros()) as usize;
    if deg_g >= n {
        return Err(Error::DimensionOutOfRange {
            what: "generator degree",
            value: deg_g,
            max: n - 1,
        });
    }
    // Long division of x^n + 1 by g(x) over GF(2).
    let mut work = vec![false; n + 1];
    work[0] = true;
    work[n] = true;
    let mut quotient = vec![false; n - deg_g + 1];
    for d in (deg_g..=n).rev() {
        if work[d] {
            quotient[d - deg_g] = true;
            for bit in 0..=deg_g {
                if gen_poly >> bit & 1 == 1 {
                    work[d - deg_g + bit] ^= true;
                }
            }
        }
    }
    if work.iter().any(|&b| b) {
        return Err(Error::Parse(format!(
            "generator {gen_poly:#x} does not divide x^{n} + 1"
        )));
    }
    quotient.resize(n, false);
    Ok(quotient)
}

/// Mask `M = C * circulant(h)` over GF(2). `C` shapes the degree
/// distribution; the result's rank is at most `min(rank(circulant(h)),
/// rows(C))`.
pub fn cyclic_mask(h: &[bool], c: &BinaryMatrix) -> Result<MaskMatrix, Error> {
    let n = h.len();
    if c.cols() != n {
        return Err(Error::ShapeMismatch {
            left: (c.rows(), c.cols()),
            right: (n, n),
        });
    }
    let phi = circulant(h);
    Ok(BinaryMatrix::from_fn(c.rows(), n, |i, j| {
        let mut acc = false;
        for k in c.row_positions(i) {
            acc ^= phi.get(k, j);
        }
        acc
    }))
}

/// A mask with a prescribed column-weight profile, produced from the
/// circulant of `h`.
#[derive(Debug, Clone)]
pub struct ShapedMask {
    /// The combining matrix (rows select sums of circulant shifts).
    pub c: BinaryMatrix,
    /// Columns of the full product kept in the mask, ascending.
    pub columns: Vec<usize>,
    /// The selected `rows x sum(counts)` mask.
    pub mask: MaskMatrix,
}

/// Searches for `rows` codewords of the circulant row space (repetition
/// allowed) and a column subset realizing the requested `(weight, count)`
/// profile, keeping the mask's rank equal to the circulant's. The
/// enumeration order is fixed, so the result is reproducible.
pub fn shape_mask_columns(
    h: &[bool],
    rows: usize,
    profile: &[(usize, usize)],
) -> Result<ShapedMask, Error> {
    let n = h.len();
    let phi = circulant(h);
    let dim = phi.rank();
    if dim == 0 || dim > 16 {
        return Err(Error::SearchFailed {
            what: "mask profile (circulant rank must be in 1..=16)",
        });
    }
    // The first `dim` shifts of a parity vector are independent and span the
    // row space.
    let basis: Vec<Vec<bool>> = (0..dim)
        .map(|i| (0..n).map(|j| phi.get(i, j)).collect())
        .collect();
    {
        let b = BinaryMatrix::from_fn(dim, n, |i, j| basis[i][j]);
        if b.rank() != dim {
            return Err(Error::SearchFailed {
                what: "independent circulant shifts",
            });
        }
    }
    let codeword_count = (1usize << dim) - 1;
    let codewords: Vec<Vec<bool>> = (1..=codeword_count)
        .map(|u| {
            let mut w = vec![false; n];
            for (b, basis_row) in basis.iter().enumerate() {
                if u >> b & 1 == 1 {
                    for (slot, &bit) in w.iter_mut().zip(basis_row) {
                        *slot ^= bit;
                    }
                }
            }
            w
        })
        .collect();
    let target_cols: usize = profile.iter().map(|&(_, c)| c).sum();
    if target_cols > n {
        return Err(Error::DimensionOutOfRange {
            what: "profile column count",
            value: target_cols,
            max: n,
        });
    }

    // Enumerate non-decreasing codeword multisets of size `rows`.
    let mut choice = vec![0usize; rows];
    loop {
        if let Some(shaped) = try_multiset(&choice, &codewords, dim, profile, n) {
            return Ok(shaped);
        }
        let mut idx = rows;
        loop {
            if idx == 0 {
                return Err(Error::SearchFailed {
                    what: "mask column-weight profile",
                });
            }
            idx -= 1;
            if choice[idx] + 1 < codeword_count {
                choice[idx] += 1;
                for k in idx + 1..rows {
                    choice[k] = choice[idx];
                }
                break;
            }
        }
    }
}

fn try_multiset(
    choice: &[usize],
    codewords: &[Vec<bool>],
    dim: usize,
    profile: &[(usize, usize)],
    n: usize,
) -> Option<ShapedMask> {
    // Column weights of the candidate row multiset.
    let mut weights = vec![0usize; n];
    for &c in choice {
        for (j, &bit) in codewords[c].iter().enumerate() {
            if bit {
                weights[j] += 1;
            }
        }
    }
    let mut columns: Vec<usize> = Vec::new();
    for &(w, count) in profile {
        let mut picked = 0;
        for (j, &wj) in weights.iter().enumerate() {
            if wj == w && !columns.contains(&j) {
                columns.push(j);
                picked += 1;
                if picked == count {
                    break;
                }
            }
        }
        if picked < count {
            return None;
        }
    }
    columns.sort_unstable();
    let mask = BinaryMatrix::from_fn(choice.len(), columns.len(), |i, jj| {
        codewords[choice[i]][columns[jj]]
    });
    if mask.rank() != dim {
        return None;
    }
    let c = BinaryMatrix::from_fn(choice.len(), n, |i, j| {
        j < dim && (choice[i] + 1) >> j & 1 == 1
    });
    Some(ShapedMask { c, columns, mask })
}

// ---------------------------------------------------------------------------
// Burst erasures
// ---------------------------------------------------------------------------

/// Result of scanning contiguous column windows for erasure recoverability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurstCheck {
    pub requested: usize,
    /// Largest length (at most `requested`) for which every window passes.
    pub max_correctable: usize,
    /// First failing window at the requested length, if any.
    pub first_failure: Option<BurstFailure>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BurstFailure {
    pub length: usize,
    pub start: usize,
}

/// A burst erasure of the columns `[start, start + len)` is recoverable
/// exactly when those columns are linearly independent over GF(2). Scans
/// downward from the requested length until every window passes.
pub fn burst_erasure_check(h: &BinaryMatrix, requested: usize) -> BurstCheck {
    let cols = h.cols();
    let packed: Vec<Vec<u64>> = (0..cols).map(|j| h.column_packed(j)).collect();
    let requested = requested.min(cols).max(1);
    let mut first_failure = None;
    for len in (1..=requested).rev() {
        let mut all_pass = true;
        for start in 0..=cols - len {
            if !columns_independent(&packed[start..start + len]) {
                if len == requested && first_failure.is_none() {
                    first_failure = Some(BurstFailure { length: len, start });
                }
                all_pass = false;
                break;
            }
        }
        if all_pass {
            return BurstCheck {
                requested,
                max_correctable: len,
                first_failure,
            };
        }
    }
    BurstCheck {
        requested,
        max_correctable: 0,
        first_failure,
    }
}

fn columns_independent(cols: &[Vec<u64>]) -> bool {
    let mut basis: Vec<Vec<u64>> = Vec::with_capacity(cols.len());
    let mut pivots: Vec<usize> = Vec::with_capacity(cols.len());
    for col in cols {
        let mut v = col.clone();
        for (b, &p) in basis.iter().zip(&pivots) {
            if v[p / 64] >> (p % 64) & 1 == 1 {
                for (slot, &w) in v.iter_mut().zip(b) {
                    *slot ^= w;
                }
            }
        }
        let Some(pivot) = v
            .iter()
            .enumerate()
            .find_map(|(w, &word)| (word != 0).then(|| w * 64 + word.trailing_zeros() as usize))
        else {
            return false;
        };
        basis.push(v);
        pivots.push(pivot);
    }
    true
}

// ---------------------------------------------------------------------------
// Declarative construction descriptors
// ---------------------------------------------------------------------------

/// A construction described as plain text (`key = value` lines, `#`
/// comments), the format consumed by the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstructionSpec {
    Latin {
        r: u32,
        m: usize,
        n: usize,
    },
    Vandermonde {
        r: u32,
        m: usize,
        n: usize,
    },
    Partition {
        r: u32,
        m: usize,
        consecutive: bool,
        seed: u64,
    },
    Diamond {
        r: u32,
        rows: usize,
        cols: usize,
        col_offset: usize,
    },
    Product {
        r: u32,
        rows: usize,
        cols: usize,
        blocks: usize,
        coupling_rows: usize,
        seed: u64,
    },
    Masked {
        r: u32,
        rows: usize,
        gen_poly: u64,
        profile: Vec<(usize, usize)>,
        col_offset: usize,
    },
}

impl ConstructionSpec {
    /// The family name used in descriptors and CLI output.
    pub fn family(&self) -> &'static str {
        match self {
            ConstructionSpec::Latin { .. } => "latin",
            ConstructionSpec::Vandermonde { .. } => "vandermonde",
            ConstructionSpec::Partition { .. } => "partition",
            ConstructionSpec::Diamond { .. } => "diamond",
            ConstructionSpec::Product { .. } => "product",
            ConstructionSpec::Masked { .. } => "masked",
        }
    }

    pub fn parse(text: &str) -> Result<ConstructionSpec, Error> {
        let mut kv = std::collections::BTreeMap::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected `key = value`, got `{line}`")))?;
            kv.insert(key.trim().to_string(), value.trim().to_string());
        }
        let get = |key: &str| -> Result<&str, Error> {
            kv.get(key)
                .map(String::as_str)
                .ok_or_else(|| Error::Parse(format!("missing key `{key}`")))
        };
        let get_usize = |key: &str| -> Result<usize, Error> {
            get(key)?
                .parse()
                .map_err(|_| Error::Parse(format!("invalid integer for `{key}`")))
        };
        let get_u64 = |key: &str| -> Result<u64, Error> {
            let raw = get(key)?;
            let parsed = if let Some(hex) = raw.strip_prefix("0x") {
                u64::from_str_radix(hex, 16)
            } else {
                raw.parse()
            };
            parsed.map_err(|_| Error::Parse(format!("invalid integer for `{key}`")))
        };
        let r = get_usize("r")? as u32;
        match get("family")? {
            "latin" => Ok(ConstructionSpec::Latin {
                r,
                m: get_usize("m")?,
                n: get_usize("n")?,
            }),
            "vandermonde" => Ok(ConstructionSpec::Vandermonde {
                r,
                m: get_usize("m")?,
                n: get_usize("n")?,
            }),
            "partition" => Ok(ConstructionSpec::Partition {
                r,
                m: get_usize("m")?,
                consecutive: kv.get("consecutive").map(String::as_str) == Some("true"),
                seed: if kv.contains_key("seed") {
                    get_u64("seed")?
                } else {
                    0
                },
            }),
            "diamond" => Ok(ConstructionSpec::Diamond {
                r,
                rows: get_usize("rows")?,
                cols: get_usize("cols")?,
                col_offset: if kv.contains_key("col_offset") {
                    get_usize("col_offset")?
                } else {
                    get_usize("rows")?
                },
            }),
            "product" => Ok(ConstructionSpec::Product {
                r,
                rows: get_usize("rows")?,
                cols: get_usize("cols")?,
                blocks: get_usize("blocks")?,
                coupling_rows: get_usize("coupling_rows")?,
                seed: if kv.contains_key("seed") {
                    get_u64("seed")?
                } else {
                    0
                },
            }),
            "masked" => Ok(ConstructionSpec::Masked {
                r,
                rows: get_usize("rows")?,
                gen_poly: get_u64("gen_poly")?,
                profile: parse_profile(get("profile")?)?,
                col_offset: if kv.contains_key("col_offset") {
                    get_usize("col_offset")?
                } else {
                    get_usize("rows")?
                },
            }),
            other => Err(Error::Parse(format!("unknown family `{other}`"))),
        }
    }

    /// Builds the described base matrix.
    pub fn build(&self) -> Result<BaseMatrix, Error> {
        match *self {
            ConstructionSpec::Latin { r, m, n } => {
                let ctx = Arc::new(FieldContext::new(r)?);
                latin_base(&ctx, m, n)
            }
            ConstructionSpec::Vandermonde { r, m, n } => {
                let ctx = Arc::new(FieldContext::new(r)?);
                vandermonde_base(&ctx, m, n)
            }
            ConstructionSpec::Partition {
                r,
                m,
                consecutive,
                seed,
            } => {
                let ctx = Arc::new(FieldContext::new(r)?);
                let (g1, g2) = if consecutive {
                    consecutive_partition(&ctx, m)?
                } else {
                    random_partition(&ctx, m, seed)?
                };
                partition_base(&ctx, &g1, &g2)
            }
            ConstructionSpec::Diamond {
                r,
                rows,
                cols,
                col_offset,
            } => {
                let ctx = Arc::new(FieldContext::new(r)?);
                let w = latin_submatrix(&ctx, 0, col_offset, rows, cols)?;
                Ok(diamond_base(&w)?.base)
            }
            ConstructionSpec::Product {
                r,
                rows,
                cols,
                blocks,
                coupling_rows,
                seed,
            } => {
                let ctx = Arc::new(FieldContext::new(r)?);
                let ws: Vec<BaseMatrix> = (0..blocks)
                    .map(|i| latin_submatrix(&ctx, 0, rows + i, rows, cols))
                    .collect::<Result<_, _>>()?;
                let coupling = sample_coupling(&ws, coupling_rows, seed)?;
                product_like_base(&ws, &coupling)
            }
            ConstructionSpec::Masked {
                r,
                rows,
                gen_poly,
                ref profile,
                col_offset,
            } => {
                let ctx = Arc::new(FieldContext::new(r)?);
                let h = cyclic_parity_vector(gen_poly, ctx.e() as usize)?;
                let shaped = shape_mask_columns(&h, rows, profile)?;
                let cols: usize = profile.iter().map(|&(_, c)| c).sum();
                let w = latin_submatrix(&ctx, 0, col_offset, rows, cols)?;
                crate::dispersion::apply_mask(&w, &shaped.mask)
            }
        }
    }
}

fn parse_profile(text: &str) -> Result<Vec<(usize, usize)>, Error> {
    text.split(',')
        .map(|part| {
            let (w, c) = part
                .trim()
                .split_once('x')
                .ok_or_else(|| Error::Parse(format!("profile entry `{part}` is not WxCOUNT")))?;
            let w = w
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad weight in `{part}`")))?;
            let c = c
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad count in `{part}`")))?;
            Ok((w, c))
        })
        .collect()
}
