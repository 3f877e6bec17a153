//! File formats: alist parity-check interchange and the exponent-grid base
//! matrix format.
//!
//! The alist layout follows the MacKay convention: a `N M` header (columns
//! then rows), maximum column/row degrees, the per-column and per-row degree
//! lists, then 1-indexed positions, column lists first, padded with zeros up
//! to the maximum degree. The reader also accepts the unpadded variant.
//!
//! Base matrices serialize as a `r m n` header followed by m lines of n
//! space-separated exponents, with -1 for the zero element. The format is
//! human-diffable and independent of the in-memory representation.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use crate::error::Error;
use crate::galois::{FieldContext, FieldElement};
use crate::matrix::{BaseMatrix, BinaryMatrix};

/// Renders a binary matrix as alist text.
pub fn alist_to_string(h: &BinaryMatrix) -> String {
    let cols: Vec<Vec<usize>> = (0..h.cols())
        .map(|j| (0..h.rows()).filter(|&i| h.get(i, j)).collect())
        .collect();
    let rows: Vec<Vec<usize>> = (0..h.rows()).map(|i| h.row_positions(i)).collect();
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", h.cols(), h.rows()));
    out.push_str(&format!("{max_col} {max_row}\n"));
    let degrees = |lists: &[Vec<usize>]| {
        lists
            .iter()
            .map(|l| l.len().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&degrees(&cols));
    out.push('\n');
    out.push_str(&degrees(&rows));
    out.push('\n');
    let positions = |lists: &[Vec<usize>], width: usize, out: &mut String| {
        for list in lists {
            let mut entries: Vec<String> = list.iter().map(|&p| (p + 1).to_string()).collect();
            entries.resize(width, "0".to_string());
            out.push_str(&entries.join(" "));
            out.push('\n');
        }
    };
    positions(&cols, max_col, &mut out);
    positions(&rows, max_row, &mut out);
    out
}

pub fn write_alist(h: &BinaryMatrix, path: &Path) -> Result<(), Error> {
    fs::write(path, alist_to_string(h)).map_err(Error::from)
}

/// Parses alist text into a binary matrix, verifying that the column and
/// row lists describe the same matrix.
pub fn alist_from_string(text: &str) -> Result<BinaryMatrix, Error> {
    let mut numbers = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::Parse(format!("alist token `{tok}` is not an integer")))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter();
    let mut next = |what: &str| {
        numbers
            .next()
            .ok_or_else(|| Error::Parse(format!("alist truncated before {what}")))
    };
    let n = next("column count")?;
    let m = next("row count")?;
    let max_col = next("max column degree")?;
    let max_row = next("max row degree")?;
    let col_degrees: Vec<usize> = (0..n)
        .map(|_| next("column degree"))
        .collect::<Result<_, _>>()?;
    let row_degrees: Vec<usize> = (0..m)
        .map(|_| next("row degree"))
        .collect::<Result<_, _>>()?;
    let mut h = BinaryMatrix::zeros(m, n);
    // Column lists. Peek-based handling of both padded and unpadded files:
    // consume exactly `degree` nonzero entries plus any zero padding up to
    // the maximum degree.
    let mut remaining: Vec<usize> = numbers.collect();
    remaining.reverse();
    let mut take = |degree: usize, width: usize, what: &str| -> Result<Vec<usize>, Error> {
        let mut entries = Vec::with_capacity(degree);
        let mut seen = 0;
        while entries.len() < degree {
            let Some(tok) = remaining.pop() else {
                return Err(Error::Parse(format!("alist truncated inside {what}")));
            };
            seen += 1;
            if tok != 0 {
                entries.push(tok);
            }
        }
        // Padded variant: swallow the remaining zeros of this entry.
        while seen < width {
            match remaining.last() {
                Some(0) => {
                    remaining.pop();
                    seen += 1;
                }
                _ => break,
            }
        }
        Ok(entries)
    };
    for (j, &degree) in col_degrees.iter().enumerate() {
        for pos in take(degree, max_col, "column positions")? {
            if pos > m {
                return Err(Error::Parse(format!("row index {pos} out of range")));
            }
            h.set(pos - 1, j, true);
        }
    }
    for (i, &degree) in row_degrees.iter().enumerate() {
        for pos in take(degree, max_row, "row positions")? {
            if pos > n {
                return Err(Error::Parse(format!("column index {pos} out of range")));
            }
            if !h.get(i, pos - 1) {
                return Err(Error::Parse(format!(
                    "row list marks ({i}, {}) but the column lists do not",
                    pos - 1
                )));
            }
        }
    }
    for (i, &degree) in row_degrees.iter().enumerate() {
        if h.row_weight(i) != degree {
            return Err(Error::Parse(format!(
                "row {i} weight {} does not match declared degree {degree}",
                h.row_weight(i)
            )));
        }
    }
    Ok(h)
}

pub fn read_alist(path: &Path) -> Result<BinaryMatrix, Error> {
    alist_from_string(&fs::read_to_string(path)?)
}

/// Renders a base matrix in the `r m n` exponent-grid format.
pub fn base_matrix_to_string(b: &BaseMatrix) -> String {
    let mut out = format!("{} {} {}\n", b.ctx().r(), b.rows(), b.cols());
    out.push_str(&b.to_string());
    out
}

pub fn write_base_matrix(b: &BaseMatrix, path: &Path) -> Result<(), Error> {
    fs::write(path, base_matrix_to_string(b)).map_err(Error::from)
}

pub fn base_matrix_from_string(text: &str) -> Result<BaseMatrix, Error> {
    let mut tokens = text.split_whitespace().map(|tok| {
        tok.parse::<i64>()
            .map_err(|_| Error::Parse(format!("base matrix token `{tok}` is not an integer")))
    });
    let mut next = |what: &str| {
        tokens
            .next()
            .transpose()?
            .ok_or_else(|| Error::Parse(format!("base matrix truncated before {what}")))
    };
    let r = next("r")?;
    let m = next("m")?;
    let n = next("n")?;
    if r < 0 || m <= 0 || n <= 0 {
        return Err(Error::Parse("non-positive header values".into()));
    }
    let ctx = Arc::new(FieldContext::new(r as u32)?);
    let e = ctx.e() as i64;
    let mut entries = Vec::with_capacity((m * n) as usize);
    for _ in 0..m * n {
        let v = next("matrix entry")?;
        let elem = match v {
            -1 => FieldElement::Zero,
            k if (0..e).contains(&k) => FieldElement::Alpha(k as u32),
            k => {
                return Err(Error::Parse(format!(
                    "exponent {k} out of range (expected -1 or 0..{})",
                    e - 1
                )))
            }
        };
        entries.push(elem);
    }
    let mut iter = entries.into_iter();
    Ok(BaseMatrix::from_fn(
        ctx,
        m as usize,
        n as usize,
        |_, _| iter.next().unwrap(),
    ))
}

pub fn read_base_matrix(path: &Path) -> Result<BaseMatrix, Error> {
    base_matrix_from_string(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn alist_round_trip_random_matrices() {
        let mut rng = StdRng::seed_from_u64(97);
        for _ in 0..30 {
            let rows = rng.gen_range(1..=12);
            let cols = rng.gen_range(1..=20);
            let h = BinaryMatrix::from_fn(rows, cols, |_, _| rng.gen_bool(0.3));
            let text = alist_to_string(&h);
            assert_eq!(alist_from_string(&text).unwrap(), h);
        }
    }

    #[test]
    fn alist_known_layout() {
        let mut h = BinaryMatrix::zeros(2, 3);
        h.set(0, 0, true);
        h.set(0, 2, true);
        h.set(1, 2, true);
        let text = alist_to_string(&h);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("3 2"));
        assert_eq!(lines.next(), Some("1 2"));
        assert_eq!(lines.next(), Some("1 0 2"));
        assert_eq!(lines.next(), Some("2 1"));
        // Column lists, 1-indexed, zero padded.
        assert_eq!(lines.next(), Some("1"));
        assert_eq!(lines.next(), Some("0"));
        assert_eq!(lines.next(), Some("1 2"));
        // Row lists.
        assert_eq!(lines.next(), Some("1 3"));
        assert_eq!(lines.next(), Some("3 0"));
    }

    #[test]
    fn alist_accepts_unpadded_input() {
        let text = "3 2\n1 2\n1 0 2\n2 1\n1\n\n1 2\n1 3\n3\n";
        let h = alist_from_string(text).unwrap();
        assert!(h.get(0, 0));
        assert!(h.get(0, 2));
        assert!(h.get(1, 2));
        assert_eq!(h.row_weight(0) + h.row_weight(1), 3);
    }

    #[test]
    fn alist_rejects_inconsistent_lists() {
        // Row list claims (0, 1) but column lists say (0, 0).
        let text = "2 1\n1 1\n1 0\n1\n1\n0\n2\n";
        assert!(alist_from_string(text).is_err());
    }

    #[test]
    fn base_matrix_round_trip() {
        let ctx = Arc::new(FieldContext::new(4).unwrap());
        let mut rng = StdRng::seed_from_u64(101);
        let b = BaseMatrix::from_fn(ctx.clone(), 5, 7, |_, _| {
            ctx.from_poly(rng.gen_range(0..ctx.q()))
        });
        let text = base_matrix_to_string(&b);
        let back = base_matrix_from_string(&text).unwrap();
        assert_eq!(back.rows(), 5);
        assert_eq!(back.cols(), 7);
        for i in 0..5 {
            for j in 0..7 {
                assert_eq!(back.get(i, j), b.get(i, j));
            }
        }
    }

    #[test]
    fn base_matrix_header_format() {
        let ctx = Arc::new(FieldContext::new(3).unwrap());
        let b = BaseMatrix::zero(ctx, 2, 2);
        let text = base_matrix_to_string(&b);
        assert!(text.starts_with("3 2 2\n-1 -1\n-1 -1\n"));
    }

    #[test]
    fn base_matrix_rejects_bad_exponents() {
        assert!(base_matrix_from_string("3 1 1\n9\n").is_err());
        assert!(base_matrix_from_string("3 1 1\n-2\n").is_err());
        assert!(base_matrix_from_string("3 1 2\n1\n").is_err());
    }
}
