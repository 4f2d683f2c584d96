//! Sparse GF(2) matrices with row and column adjacency views.
//!
//! A [`BitMatrix`] stores the support of every row and every column, which is
//! exactly the Tanner-graph adjacency needed by edge-growth construction and
//! message-passing decoding. Rank, inversion and products run on a dense
//! bit-packed scratch copy; everything here is small enough (a few thousand
//! rows) that dense elimination is the simplest correct tool.

use crate::error::{Error, Result};

/// Sparse binary matrix over GF(2).
///
/// Both adjacency views are kept in sync: `rows[r]` is the sorted list of
/// column indices with a one in row `r`, and `cols[c]` the sorted list of row
/// indices with a one in column `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl BitMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        BitMatrix {
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
            cols: vec![Vec::new(); n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i].push(i);
            m.cols[i].push(i);
        }
        m
    }

    /// Builds a matrix from `(row, col)` entries. Rejects out-of-range
    /// indices and duplicates.
    pub fn from_entries<I>(n_rows: usize, n_cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = BitMatrix::zeros(n_rows, n_cols);
        for (r, c) in entries {
            m.insert(r, c)?;
        }
        Ok(m)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    pub fn col(&self, c: usize) -> &[usize] {
        &self.cols[c]
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.rows[r].len()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        self.cols[c].len()
    }

    pub fn num_entries(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].binary_search(&c).is_ok()
    }

    /// Sets entry `(r, c)` to one, keeping both views sorted.
    pub fn insert(&mut self, r: usize, c: usize) -> Result<()> {
        if r >= self.n_rows || c >= self.n_cols {
            return Err(Error::IndexOutOfRange(format!(
                "entry ({r}, {c}) outside {}x{} matrix",
                self.n_rows, self.n_cols
            )));
        }
        match self.rows[r].binary_search(&c) {
            Ok(_) => return Err(Error::DuplicateEntry(r, c)),
            Err(pos) => self.rows[r].insert(pos, c),
        }
        match self.cols[c].binary_search(&r) {
            // unreachable if the row view was consistent
            Ok(_) => return Err(Error::DuplicateEntry(r, c)),
            Err(pos) => self.cols[c].insert(pos, r),
        }
        Ok(())
    }

    /// Iterates all `(row, col)` entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, cols)| cols.iter().map(move |&c| (r, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        BitMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    /// Copies the `rows` x `cols` window into a new matrix.
    pub fn submatrix(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> BitMatrix {
        let mut out = BitMatrix::zeros(rows.len(), cols.len());
        for r in rows.clone() {
            for &c in &self.rows[r] {
                if cols.contains(&c) {
                    out.insert(r - rows.start, c - cols.start).unwrap();
                }
            }
        }
        out
    }

    /// Verifies that the two adjacency views describe the same entry set and
    /// that all supports are strictly increasing and in range.
    pub fn validate(&self) -> Result<()> {
        let mut rebuilt: Vec<Vec<usize>> = vec![Vec::new(); self.n_cols];
        for (r, cols) in self.rows.iter().enumerate() {
            for w in cols.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::DuplicateEntry(r, w[1]));
                }
            }
            for &c in cols {
                if c >= self.n_cols {
                    return Err(Error::IndexOutOfRange(format!("column {c} in row {r}")));
                }
                rebuilt[c].push(r);
            }
        }
        if rebuilt != self.cols {
            return Err(Error::DimensionMismatch(
                "row and column supports are inconsistent".into(),
            ));
        }
        Ok(())
    }

    /// GF(2) rank by Gaussian elimination on a dense copy.
    pub fn rank(&self) -> usize {
        DenseBits::from_matrix(self).rank()
    }

    /// Inverse over GF(2); the matrix must be square and nonsingular.
    pub fn invert(&self) -> Result<BitMatrix> {
        if self.n_rows != self.n_cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert {}x{} matrix",
                self.n_rows, self.n_cols
            )));
        }
        DenseBits::from_matrix(self).invert()
    }

    /// GF(2) matrix product `self * rhs`.
    pub fn multiply(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.n_cols != rhs.n_rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.n_rows, self.n_cols, rhs.n_rows, rhs.n_cols
            )));
        }
        let dense_rhs = DenseBits::from_matrix(rhs);
        let words = dense_rhs.words;
        let mut acc = vec![0u64; words];
        let mut entries = Vec::new();
        for r in 0..self.n_rows {
            acc.iter_mut().for_each(|w| *w = 0);
            for &k in &self.rows[r] {
                let row = dense_rhs.row(k);
                for (a, b) in acc.iter_mut().zip(row) {
                    *a ^= *b;
                }
            }
            for c in 0..rhs.n_cols {
                if acc[c / 64] >> (c % 64) & 1 == 1 {
                    entries.push((r, c));
                }
            }
        }
        BitMatrix::from_entries(self.n_rows, rhs.n_cols, entries)
    }

    /// Matrix-vector product `self * v` over GF(2), `v` given as 0/1 bytes.
    pub fn mul_vec(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.n_cols {
            return Err(Error::LengthMismatch {
                expected: self.n_cols,
                got: v.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|cols| cols.iter().fold(0u8, |acc, &c| acc ^ (v[c] & 1)))
            .collect())
    }

    /// Serializes to the alist text format: `n_cols n_rows`, the maximum
    /// column/row degrees, the per-column and per-row degree lists, then the
    /// 1-based index lists, each padded with zeros to the maximum degree.
    pub fn to_alist(&self) -> String {
        let max_col = self.cols.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = String::new();
        out.push_str(&format!("{} {}\n", self.n_cols, self.n_rows));
        out.push_str(&format!("{} {}\n", max_col, max_row));
        let degs = |v: &[Vec<usize>]| {
            v.iter()
                .map(|s| s.len().to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push_str(&degs(&self.cols));
        out.push('\n');
        out.push_str(&degs(&self.rows));
        out.push('\n');
        let index_lines = |v: &[Vec<usize>], width: usize, out: &mut String| {
            for support in v {
                let mut toks: Vec<String> = support.iter().map(|&i| (i + 1).to_string()).collect();
                toks.resize(width, "0".to_string());
                out.push_str(&toks.join(" "));
                out.push('\n');
            }
        };
        index_lines(&self.cols, max_col, &mut out);
        index_lines(&self.rows, max_row, &mut out);
        out
    }

    /// Parses alist text. The parser is strict: every index line must carry
    /// exactly the maximum degree of tokens (zero-padded), indices must be in
    /// range and duplicate-free, and the row and column lists must describe
    /// the same matrix.
    pub fn from_alist(text: &str) -> Result<BitMatrix> {
        let mut lines = text.lines().enumerate();
        let mut next_line = |what: &str| -> Result<(usize, &str)> {
            lines
                .next()
                .map(|(i, l)| (i + 1, l))
                .ok_or_else(|| Error::AlistParse {
                    line: text.lines().count() + 1,
                    msg: format!("unexpected end of file, expected {what}"),
                })
        };
        let parse_ints = |line_no: usize, line: &str, expect: usize, what: &str| -> Result<Vec<usize>> {
            let vals: Vec<usize> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::AlistParse {
                        line: line_no,
                        msg: format!("invalid integer `{t}` in {what}"),
                    })
                })
                .collect::<Result<_>>()?;
            if vals.len() != expect {
                return Err(Error::AlistParse {
                    line: line_no,
                    msg: format!("{what}: expected {expect} values, found {}", vals.len()),
                });
            }
            Ok(vals)
        };

        let (ln, l) = next_line("matrix dimensions")?;
        let dims = parse_ints(ln, l, 2, "dimension line")?;
        let (n_cols, n_rows) = (dims[0], dims[1]);
        if n_cols == 0 || n_rows == 0 {
            return Err(Error::AlistParse {
                line: ln,
                msg: "matrix dimensions must be positive".into(),
            });
        }
        let (ln, l) = next_line("maximum degrees")?;
        let maxes = parse_ints(ln, l, 2, "maximum degree line")?;
        let (max_col, max_row) = (maxes[0], maxes[1]);
        let (ln, l) = next_line("column degree list")?;
        let col_degs = parse_ints(ln, l, n_cols, "column degree list")?;
        let (ln, l) = next_line("row degree list")?;
        let row_degs = parse_ints(ln, l, n_rows, "row degree list")?;
        for (what, degs, max) in [("column", &col_degs, max_col), ("row", &row_degs, max_row)] {
            if degs.iter().max().copied().unwrap_or(0) != max {
                return Err(Error::AlistParse {
                    line: 2,
                    msg: format!("stated maximum {what} degree {max} does not match degree list"),
                });
            }
        }

        // Reads one zero-padded 1-based index block.
        let mut read_block = |count: usize,
                              degs: &[usize],
                              width: usize,
                              limit: usize,
                              what: &str|
         -> Result<Vec<Vec<usize>>> {
            let mut blocks = Vec::with_capacity(count);
            for i in 0..count {
                let (ln, l) = next_line(what)?;
                let vals = parse_ints(ln, l, width, what)?;
                let deg = degs[i];
                let mut support = Vec::with_capacity(deg);
                for (j, &v) in vals.iter().enumerate() {
                    if j < deg {
                        if v == 0 {
                            return Err(Error::AlistParse {
                                line: ln,
                                msg: format!("{what} {i}: index {j} is zero but degree is {deg}"),
                            });
                        }
                        if v > limit {
                            return Err(Error::IndexOutOfRange(format!(
                                "line {ln}: index {v} exceeds {limit}"
                            )));
                        }
                        support.push(v - 1);
                    } else if v != 0 {
                        return Err(Error::AlistParse {
                            line: ln,
                            msg: format!("{what} {i}: expected zero padding, found {v}"),
                        });
                    }
                }
                support.sort_unstable();
                if support.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::AlistParse {
                        line: ln,
                        msg: format!("{what} {i}: duplicate index"),
                    });
                }
                blocks.push(support);
            }
            Ok(blocks)
        };

        let col_lists = read_block(n_cols, &col_degs, max_col, n_rows, "column index list")?;
        let row_lists = read_block(n_rows, &row_degs, max_row, n_cols, "row index list")?;
        for (i, (l, d)) in col_lists.iter().zip(&col_degs).enumerate() {
            if l.len() != *d {
                return Err(Error::AlistParse {
                    line: 3,
                    msg: format!("column {i}: degree list and index list disagree"),
                });
            }
        }
        let m = BitMatrix {
            n_rows,
            n_cols,
            rows: row_lists,
            cols: col_lists,
        };
        m.validate().map_err(|e| match e {
            Error::IndexOutOfRange(s) => Error::IndexOutOfRange(s),
            other => Error::AlistParse {
                line: 1,
                msg: format!("row and column lists are inconsistent: {other}"),
            },
        })?;
        Ok(m)
    }
}

/// Dense bit-packed scratch matrix for Gaussian elimination.
struct DenseBits {
    n_rows: usize,
    n_cols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl DenseBits {
    fn from_matrix(m: &BitMatrix) -> Self {
        let words = m.n_cols().div_ceil(64).max(1);
        let rows = (0..m.n_rows())
            .map(|r| {
                let mut row = vec![0u64; words];
                for &c in m.row(r) {
                    row[c / 64] |= 1 << (c % 64);
                }
                row
            })
            .collect();
        DenseBits {
            n_rows: m.n_rows(),
            n_cols: m.n_cols(),
            words,
            rows,
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.rows[r]
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }

    fn rank(mut self) -> usize {
        let mut rank = 0;
        for c in 0..self.n_cols {
            let Some(p) = (rank..self.n_rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.rows.swap(rank, p);
            let (pivot, rest) = self.rows.split_at_mut(rank + 1);
            let pivot = &pivot[rank];
            for row in rest.iter_mut() {
                if row[c / 64] >> (c % 64) & 1 == 1 {
                    for (a, b) in row.iter_mut().zip(pivot) {
                        *a ^= *b;
                    }
                }
            }
            rank += 1;
            if rank == self.n_rows {
                break;
            }
        }
        rank
    }

    /// Gauss-Jordan on `[self | I]`; returns the inverse as a sparse matrix.
    fn invert(mut self) -> Result<BitMatrix> {
        debug_assert_eq!(self.n_rows, self.n_cols);
        let n = self.n_rows;
        let aug_words = n.div_ceil(64);
        for (i, row) in self.rows.iter_mut().enumerate() {
            row.resize(self.words + aug_words, 0);
            row[self.words + i / 64] |= 1 << (i % 64);
        }
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| self.get(r, c)) else {
                return Err(Error::SingularMatrix);
            };
            self.rows.swap(c, p);
            let pivot = std::mem::take(&mut self.rows[c]);
            for (r, row) in self.rows.iter_mut().enumerate() {
                if r != c && row[c / 64] >> (c % 64) & 1 == 1 {
                    for (a, b) in row.iter_mut().zip(&pivot) {
                        *a ^= *b;
                    }
                }
            }
            self.rows[c] = pivot;
        }
        let mut entries = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if self.rows[r][self.words + c / 64] >> (c % 64) & 1 == 1 {
                    entries.push((r, c));
                }
            }
        }
        BitMatrix::from_entries(n, n, entries)
    }
}
