//! Compressed sparse row storage for document-term matrices.

use std::io::{self, Write};

use crate::error::{Error, Result};

/// Row-major sparse matrix. Column indices are strictly increasing within a row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Copy> CsrMatrix<T> {
    /// Validates and wraps raw CSR arrays.
    pub fn new(
        n_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::Config(format!("invalid CSR matrix: {m}")));
        if row_offsets.first() != Some(&0) {
            return bad("row_offsets must start at 0".into());
        }
        if *row_offsets.last().unwrap() != values.len() || col_indices.len() != values.len() {
            return bad("row_offsets, col_indices and values disagree on nnz".into());
        }
        for (r, w) in row_offsets.windows(2).enumerate() {
            if w[0] > w[1] {
                return bad(format!("row_offsets decrease at row {r}"));
            }
            let cols = &col_indices[w[0]..w[1]];
            if cols.windows(2).any(|c| c[0] >= c[1]) {
                return bad(format!("columns of row {r} are not strictly increasing"));
            }
            if cols.last().is_some_and(|&c| c >= n_cols) {
                return bad(format!("column index out of range in row {r}"));
            }
        }
        Ok(CsrMatrix {
            n_rows: row_offsets.len() - 1,
            n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Builds from per-row `(column, value)` lists already sorted by column.
    pub(crate) fn from_sorted_rows(n_cols: usize, rows: Vec<Vec<(usize, T)>>) -> Self {
        let nnz = rows.iter().map(Vec::len).sum();
        let mut row_offsets = Vec::with_capacity(rows.len() + 1);
        let mut col_indices = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        row_offsets.push(0);
        for row in &rows {
            for &(c, v) in row {
                debug_assert!(c < n_cols);
                col_indices.push(c);
                values.push(v);
            }
            row_offsets.push(col_indices.len());
        }
        CsrMatrix {
            n_rows: rows.len(),
            n_cols,
            row_offsets,
            col_indices,
            values,
        }
    }

    pub fn empty(n_cols: usize) -> Self {
        Self::from_sorted_rows(n_cols, Vec::new())
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let (a, b) = (self.row_offsets[i], self.row_offsets[i + 1]);
        (&self.col_indices[a..b], &self.values[a..b])
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[usize], &[T])> + '_ {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    /// New matrix made of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        CsrMatrix::from_sorted_rows(
            self.n_cols,
            rows.iter()
                .map(|&r| {
                    let (c, v) = self.row(r);
                    c.iter().copied().zip(v.iter().copied()).collect()
                })
                .collect(),
        )
    }

    /// Row-wise concatenation.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.n_cols != other.n_cols {
            return Err(Error::Dimension {
                expected: self.n_cols,
                actual: other.n_cols,
            });
        }
        let mut out = self.clone();
        let base = out.values.len();
        out.col_indices.extend_from_slice(&other.col_indices);
        out.values.extend_from_slice(&other.values);
        out.row_offsets
            .extend(other.row_offsets[1..].iter().map(|&o| o + base));
        out.n_rows += other.n_rows;
        Ok(out)
    }

    pub fn map_values<U: Copy>(&self, f: impl Fn(usize, T) -> U) -> CsrMatrix<U> {
        CsrMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            row_offsets: self.row_offsets.clone(),
            col_indices: self.col_indices.clone(),
            values: self
                .col_indices
                .iter()
                .zip(&self.values)
                .map(|(&c, &v)| f(c, v))
                .collect(),
        }
    }

    pub fn to_dense(&self, zero: T) -> Vec<Vec<T>> {
        let mut out = vec![vec![zero; self.n_cols]; self.n_rows];
        for (r, row) in out.iter_mut().enumerate() {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                row[c] = v;
            }
        }
        out
    }
}

impl<T: Copy + std::fmt::Display> CsrMatrix<T> {
    /// MatrixMarket coordinate dump (1-based indices). `field` is the header's
    /// field keyword, `integer` or `real`.
    pub fn write_matrix_market<W: Write>(&self, mut w: W, field: &str) -> io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate {field} general")?;
        writeln!(w, "{} {} {}", self.n_rows, self.n_cols, self.nnz())?;
        for r in 0..self.n_rows {
            let (cols, vals) = self.row(r);
            for (&c, v) in cols.iter().zip(vals) {
                writeln!(w, "{} {} {}", r + 1, c + 1, v)?;
            }
        }
        w.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CsrMatrix<f64> {
        CsrMatrix::new(3, vec![0, 2, 2, 3], vec![0, 2, 1], vec![1.0, 2.0, 3.0]).unwrap()
    }

    #[test]
    fn accessors() {
        let m = sample();
        assert_eq!((m.n_rows(), m.n_cols(), m.nnz()), (3, 3, 3));
        assert_eq!(m.row(0), (&[0usize, 2][..], &[1.0, 2.0][..]));
        assert_eq!(m.row(1).0.len(), 0);
        assert_eq!(
            m.to_dense(0.0),
            vec![vec![1.0, 0.0, 2.0], vec![0.0; 3], vec![0.0, 3.0, 0.0]]
        );
    }

    #[test]
    fn rejects_invalid_layouts() {
        assert!(CsrMatrix::new(3, vec![1, 2], vec![0], vec![1.0]).is_err());
        assert!(CsrMatrix::new(3, vec![0, 2], vec![2, 1], vec![1.0, 1.0]).is_err());
        assert!(CsrMatrix::new(3, vec![0, 1], vec![3], vec![1.0]).is_err());
        assert!(CsrMatrix::new(3, vec![0, 2], vec![0], vec![1.0]).is_err());
    }

    #[test]
    fn select_and_stack() {
        let m = sample();
        let s = m.select_rows(&[2, 0]);
        assert_eq!(s.row(0), (&[1usize][..], &[3.0][..]));
        let st = s.vstack(&m).unwrap();
        assert_eq!(st.n_rows(), 5);
        assert_eq!(st.row(4), m.row(2));
    }

    #[test]
    fn matrix_market() {
        let mut buf = Vec::new();
        sample().write_matrix_market(&mut buf, "real").unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "%%MatrixMarket matrix coordinate real general\n3 3 3\n1 1 1\n1 3 2\n3 2 3\n"
        );
    }
}
