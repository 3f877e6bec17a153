//! Transform-domain rank analysis of CPM/ZM arrays.
//!
//! A dispersed array's rank equals the sum of the ranks of the Hadamard
//! powers of its base matrix. Powers whose exponents share a cyclotomic
//! coset are conjugates and share one rank, so only one elimination per
//! conjugacy class is needed. This module builds that per-class ledger,
//! computes the exact rank, and evaluates the two closed-form upper bounds
//! (the per-class product recursion and the binary-weight bound) together
//! with the redundancy quantities derived from them.

use crate::galois::cyclotomic_cosets;
use crate::matrix::BaseMatrix;

/// One conjugacy class of Hadamard powers of the base matrix.
#[derive(Debug, Clone)]
pub struct ConjugacyClass {
    /// Coset representative `t_i` (smallest exponent in the class).
    pub representative: u32,
    /// Full cyclotomic coset, representative first, in doubling order.
    pub members: Vec<u32>,
    /// Index of the class containing `t_i - 1`; `None` for class 0.
    pub predecessor: Option<usize>,
    /// The ledger bound on this class's rank: `min(m, n)` for class 0, the
    /// base-matrix rank for class 1, and `min(m, n, mu1 * mu_{i*})` beyond,
    /// with `mu_{i*}` the true rank of the predecessor class.
    pub bound: usize,
    /// True rank of every member of the class, computed by elimination on
    /// the representative power only.
    pub rank: usize,
}

impl ConjugacyClass {
    /// Class size `c_i`.
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Per-class rank ledger for a base matrix: cyclotomic cosets, back
/// pointers, bounds and true ranks.
#[derive(Debug, Clone)]
pub struct ConjugacyTable {
    pub classes: Vec<ConjugacyClass>,
    pub m: usize,
    pub n: usize,
    pub r: u32,
    pub e: u32,
    /// Rank of the zeroth Hadamard power.
    pub mu0: usize,
    /// Rank of the base matrix itself.
    pub mu1: usize,
}

impl ConjugacyTable {
    /// Number of classes (the paper's lambda).
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

/// Rank summary of the e-fold dispersion of a base matrix.
#[derive(Debug, Clone)]
pub struct RankReport {
    /// Rows of the dispersed array, `m * e`.
    pub rows: usize,
    /// Columns of the dispersed array, `n * e`.
    pub cols: usize,
    /// Exact rank.
    pub rank: usize,
    /// Upper bound from the per-class product recursion.
    pub recursion_bound: usize,
    /// Upper bound from the binary-weight factorization.
    pub weight_bound: usize,
    /// Number of redundant (dependent) rows.
    pub redundant_rows: usize,
    /// Redundant rows divided by total rows.
    pub redundancy: f64,
    /// The per-class ledger behind the numbers.
    pub table: ConjugacyTable,
}

impl RankReport {
    /// Structured key-value form consumed by the CLI.
    pub fn key_values(&self) -> Vec<(String, String)> {
        let mut kv = vec![
            ("rows".to_string(), self.rows.to_string()),
            ("cols".to_string(), self.cols.to_string()),
            ("rank".to_string(), self.rank.to_string()),
            (
                "recursion_bound".to_string(),
                self.recursion_bound.to_string(),
            ),
            ("weight_bound".to_string(), self.weight_bound.to_string()),
            (
                "redundant_rows".to_string(),
                self.redundant_rows.to_string(),
            ),
            ("redundancy".to_string(), format!("{:.6}", self.redundancy)),
            ("classes".to_string(), self.table.class_count().to_string()),
        ];
        for (i, class) in self.table.classes.iter().enumerate() {
            kv.push((
                format!("class.{i}"),
                format!(
                    "rep={} size={} predecessor={} bound={} rank={}",
                    class.representative,
                    class.size(),
                    class
                        .predecessor
                        .map_or_else(|| "-".to_string(), |p| p.to_string()),
                    class.bound,
                    class.rank
                ),
            ));
        }
        kv
    }
}

impl std::fmt::Display for RankReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "dispersed array: {} x {} (base {} x {}, e = {})",
            self.rows, self.cols, self.table.m, self.table.n, self.table.e
        )?;
        writeln!(f, "rank            = {}", self.rank)?;
        writeln!(f, "recursion bound = {}", self.recursion_bound)?;
        writeln!(f, "weight bound    = {}", self.weight_bound)?;
        writeln!(f, "redundant rows  = {}", self.redundant_rows)?;
        writeln!(f, "redundancy      = {:.4}", self.redundancy)?;
        writeln!(f, "class  pred  size  bound  rank  coset")?;
        for (i, c) in self.table.classes.iter().enumerate() {
            let pred = c
                .predecessor
                .map_or_else(|| "-".to_string(), |p| p.to_string());
            let coset = c
                .members
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(
                f,
                "{:>5}  {:>4}  {:>4}  {:>5}  {:>4}  {}",
                i,
                pred,
                c.size(),
                c.bound,
                c.rank,
                coset
            )?;
        }
        Ok(())
    }
}

/// Builds the per-class ledger for `base`, computing one true rank per
/// conjugacy class. Classes are processed in increasing representative
/// order so each predecessor's true rank is already resolved when the
/// product bound is filled in.
pub fn conjugacy_table(base: &BaseMatrix) -> ConjugacyTable {
    let ctx = base.ctx();
    let e = ctx.e();
    let (m, n) = (base.rows(), base.cols());
    let cap = m.min(n);
    let cosets = cyclotomic_cosets(e);
    let mut classes: Vec<ConjugacyClass> = Vec::with_capacity(cosets.count());
    for (i, coset) in cosets.cosets().iter().enumerate() {
        let t = coset.representative();
        let rank = base.hadamard_power(t as u64).rank();
        let (predecessor, bound) = if i == 0 {
            (None, cap)
        } else {
            let pred = cosets.class_of(t - 1);
            let bound = if i == 1 {
                rank
            } else if pred < i {
                let mu1 = classes[1].rank;
                cap.min(mu1.saturating_mul(classes[pred].rank))
            } else {
                // Self-referential back pointer: the product bound is not
                // available, fall back to the dimension cap.
                cap
            };
            (Some(pred), bound)
        };
        classes.push(ConjugacyClass {
            representative: t,
            members: coset.members().to_vec(),
            predecessor,
            bound,
            rank,
        });
    }
    let mu0 = classes[0].rank;
    let mu1 = if classes.len() > 1 { classes[1].rank } else { mu0 };
    ConjugacyTable {
        classes,
        m,
        n,
        r: ctx.r(),
        e,
        mu0,
        mu1,
    }
}

/// Exact rank of the e-fold dispersion of `base`, computed entirely in the
/// transform domain: `mu0 + sum_i c_i * mu_i` over the conjugacy classes.
/// Equals the GF(2) rank of the expanded binary array and the GF(q) rank of
/// the alpha-multiplied array.
pub fn transform_rank(base: &BaseMatrix) -> RankReport {
    let table = conjugacy_table(base);
    report_from_table(table)
}

/// Assembles a [`RankReport`] from an already-built ledger.
pub fn report_from_table(table: ConjugacyTable) -> RankReport {
    let e = table.e as usize;
    let rows = table.m * e;
    let cols = table.n * e;
    let rank: usize = table
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| if i == 0 { c.rank } else { c.size() * c.rank })
        .sum();
    let recursion_bound = recursion_rank_bound(&table);
    let weight_bound = weight_rank_bound(table.m, table.n, table.mu0, table.mu1, table.r);
    let redundant_rows = rows - rank;
    RankReport {
        rows,
        cols,
        rank,
        recursion_bound,
        weight_bound,
        redundant_rows,
        redundancy: redundant_rows as f64 / rows as f64,
        table,
    }
}

/// Upper bound on the dispersed rank from the per-class ledger:
/// `mu0 + sum_i c_i * bound_i`.
pub fn recursion_rank_bound(table: &ConjugacyTable) -> usize {
    table
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| if i == 0 { c.rank } else { c.size() * c.bound })
        .sum()
}

/// Binomial coefficient, exact for the small arguments used here.
pub fn binomial(n: u32, k: u32) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc as usize
}

/// Upper bound on the dispersed rank that depends only on the base-matrix
/// dimensions and the ranks `mu0`, `mu1`:
/// `mu0 + sum_{i=1}^{r-1} C(r, i) * min(m, n, mu1^i)`.
pub fn weight_rank_bound(m: usize, n: usize, mu0: usize, mu1: usize, r: u32) -> usize {
    let cap = m.min(n);
    let mut total = mu0;
    for i in 1..r {
        let mut power = 1usize;
        for _ in 0..i {
            power = power.saturating_mul(mu1);
            if power >= cap {
                power = cap;
                break;
            }
        }
        total += binomial(r, i) * cap.min(power);
    }
    total
}

/// Lower bound on the redundant rows of the dispersed array:
/// `m*e` minus [`weight_rank_bound`].
pub fn min_redundant_rows(m: usize, n: usize, mu0: usize, mu1: usize, r: u32, e: u32) -> usize {
    (m * e as usize).saturating_sub(weight_rank_bound(m, n, mu0, mu1, r))
}

/// Redundancy floor `r * (m - mu1)` that holds whenever all Hadamard powers
/// outside the class of 1 reach full rank.
pub fn redundancy_floor_rank_deficit(r: u32, m: usize, mu1: usize) -> usize {
    r as usize * m.saturating_sub(mu1)
}

/// Redundancy floor for zero-free base matrices (where `mu0 = 1`):
/// `r * (m - mu1) + m - 1`.
pub fn redundancy_floor_zero_free(r: u32, m: usize, mu1: usize) -> usize {
    redundancy_floor_rank_deficit(r, m, mu1) + m.saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldContext;
    use crate::matrix::BaseMatrix;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    fn ctx(r: u32) -> Arc<FieldContext> {
        Arc::new(FieldContext::new(r).unwrap())
    }

    fn random_base(rng: &mut StdRng, ctx: &Arc<FieldContext>, rows: usize, cols: usize) -> BaseMatrix {
        BaseMatrix::from_fn(ctx.clone(), rows, cols, |_, _| {
            let v = rng.gen_range(0..ctx.q());
            ctx.from_poly(v)
        })
    }

    /// Reference rank: sum the rank of every Hadamard power directly.
    fn per_power_rank_sum(base: &BaseMatrix) -> usize {
        (0..base.ctx().e() as u64)
            .map(|t| base.hadamard_power(t).rank())
            .sum()
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(6, 0), 1);
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(16, 8), 12870);
        assert_eq!(binomial(4, 5), 0);
    }

    #[test]
    fn transform_rank_equals_per_power_sum() {
        let mut rng = StdRng::seed_from_u64(23);
        for r in [3u32, 4] {
            let f = ctx(r);
            for _ in 0..20 {
                let m = rng.gen_range(2..=5);
                let n = rng.gen_range(2..=6);
                let base = random_base(&mut rng, &f, m, n);
                let report = transform_rank(&base);
                assert_eq!(report.rank, per_power_rank_sum(&base));
            }
        }
    }

    #[test]
    fn trivial_single_entry_base() {
        // 1x1 base [a] over GF(2^2): classes {0} and {1, 2}.
        let f = ctx(2);
        let base = BaseMatrix::from_fn(f.clone(), 1, 1, |_, _| f.alpha(1));
        let table = conjugacy_table(&base);
        assert_eq!(table.class_count(), 2);
        assert_eq!(table.classes[1].members, vec![1, 2]);
        assert_eq!(table.mu0, 1);
        assert_eq!(table.mu1, 1);
        let report = transform_rank(&base);
        assert_eq!(report.rank, 3);
        assert_eq!(report.recursion_bound, report.rank);
    }

    #[test]
    fn class_ranks_respect_product_bounds() {
        let mut rng = StdRng::seed_from_u64(29);
        let f = ctx(4);
        for _ in 0..30 {
            let base = random_base(&mut rng, &f, 3, 5);
            let table = conjugacy_table(&base);
            for (i, class) in table.classes.iter().enumerate() {
                assert!(class.rank <= class.bound, "class {i} rank above its bound");
                if let Some(p) = class.predecessor {
                    assert!(p <= i);
                    assert!(table.classes[p]
                        .members
                        .contains(&(class.representative - 1)));
                }
            }
        }
    }

    #[test]
    fn bounds_dominate_exact_rank() {
        let mut rng = StdRng::seed_from_u64(31);
        for r in [3u32, 4, 5] {
            let f = ctx(r);
            for _ in 0..30 {
                let m = rng.gen_range(2..=6);
                let n = rng.gen_range(2..=8);
                let base = random_base(&mut rng, &f, m, n);
                let report = transform_rank(&base);
                assert!(report.rank <= report.recursion_bound);
                assert!(report.rank <= report.weight_bound);
                assert!(report.redundant_rows >= min_redundant_rows(m, n, report.table.mu0, report.table.mu1, r, report.table.e));
            }
        }
    }

    #[test]
    fn weight_bound_closed_form_case() {
        // m = n = 64, mu0 = 64, mu1 = 2, r = 6:
        // 64 + sum C(6,i) * min(64, 2^i) = 728.
        assert_eq!(weight_rank_bound(64, 64, 64, 2, 6), 728);
    }

    #[test]
    fn weight_bound_rank_one_base() {
        // mu1 = 1 keeps every product term at 1.
        let r = 4;
        let b = weight_rank_bound(5, 6, 1, 1, r);
        assert_eq!(b, 1 + (2usize.pow(r) - 2));
    }

    #[test]
    fn redundancy_floors() {
        assert_eq!(redundancy_floor_rank_deficit(6, 64, 2), 372);
        // Full-rank base: floor collapses to zero.
        assert_eq!(redundancy_floor_rank_deficit(4, 3, 3), 0);
        assert_eq!(redundancy_floor_zero_free(6, 6, 2), 24 + 5);
    }

    #[test]
    fn report_display_mentions_every_class() {
        let f = ctx(3);
        let base = BaseMatrix::from_fn(f.clone(), 2, 2, |i, j| f.alpha((i + 2 * j) as u64));
        let report = transform_rank(&base);
        let text = report.to_string();
        for class in &report.table.classes {
            assert!(text.contains(&class.representative.to_string()));
        }
        let kv = report.key_values();
        assert!(kv.iter().any(|(k, _)| k == "rank"));
    }
}
