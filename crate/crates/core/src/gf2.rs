//! Binary matrices: a dense form for base matrices and a sparse adjacency
//! form for lifted parity-check matrices, plus their text formats.
//!
//! Every public index (rows, columns, index sets) is 1-based. Storage is
//! 0-based internally.

use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{domain, Error, Result};

/// Dense binary matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl BinaryMatrix {
    /// All-zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return domain(format!("matrix must be at least 1x1, got {rows}x{cols}"));
        }
        Ok(BinaryMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        })
    }

    /// Builds a matrix from explicit rows of 0/1 values.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(nrows, ncols)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != ncols {
                return domain(format!(
                    "row {} has {} entries, expected {ncols}",
                    i + 1,
                    row.len()
                ));
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return domain(format!("entry ({}, {}) is {v}, not binary", i + 1, j + 1));
                }
                m.data[i * ncols + j] = v;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 1-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> Result<u8> {
        self.check_entry(row, col)?;
        Ok(self.at(row - 1, col - 1))
    }

    /// Sets the entry at 1-based `(row, col)`; any nonzero `value` stores a one.
    pub fn set(&mut self, row: usize, col: usize, value: u8) -> Result<()> {
        self.check_entry(row, col)?;
        self.put(row - 1, col - 1, value);
        Ok(())
    }

    fn check_entry(&self, row: usize, col: usize) -> Result<()> {
        if row == 0 || row > self.rows || col == 0 || col > self.cols {
            return domain(format!(
                "entry ({row}, {col}) outside a {}x{} matrix",
                self.rows, self.cols
            ));
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn at(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub(crate) fn put(&mut self, r: usize, c: usize, value: u8) {
        self.data[r * self.cols + c] = u8::from(value != 0);
    }

    /// Column `col` (1-based) as a vector of length `rows`.
    pub fn column(&self, col: usize) -> Result<Vec<u8>> {
        if col == 0 || col > self.cols {
            return domain(format!("column {col} outside [1, {}]", self.cols));
        }
        Ok(self.column0(col - 1))
    }

    pub(crate) fn column0(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    /// The column-selected matrix `H_S`, in the order the indices are given.
    pub fn submatrix_columns(&self, idx: &[usize]) -> Result<BinaryMatrix> {
        if idx.is_empty() {
            return domain("empty column selection");
        }
        if let Some(&bad) = idx.iter().find(|&&j| j == 0 || j > self.cols) {
            return domain(format!("column {bad} outside [1, {}]", self.cols));
        }
        let mut out = BinaryMatrix::zeros(self.rows, idx.len())?;
        for r in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.put(r, k, self.at(r, j - 1));
            }
        }
        Ok(out)
    }

    /// Weight of every row.
    pub fn row_weights(&self) -> Vec<usize> {
        self.data
            .chunks(self.cols)
            .map(|row| row.iter().filter(|&&v| v == 1).count())
            .collect()
    }

    /// Weight of every column.
    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in self.data.chunks(self.cols) {
            for (c, &v) in row.iter().enumerate() {
                w[c] += usize::from(v);
            }
        }
        w
    }

    pub fn to_sparse(&self) -> SparseParityCheck {
        let mut col_adj = vec![Vec::new(); self.cols];
        let mut row_adj = vec![Vec::new(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.at(r, c) == 1 {
                    row_adj[r].push(c);
                    col_adj[c].push(r);
                }
            }
        }
        SparseParityCheck {
            rows: self.rows,
            cols: self.cols,
            row_adj,
            col_adj,
        }
    }

    /// Reads a dense matrix from comma-separated 0/1 rows.
    pub fn read_csv<R: Read>(source: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(source);
        let mut rows: Vec<Vec<u8>> = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let line = record.position().map_or(i + 1, |p| p.line() as usize);
            let row = record
                .iter()
                .map(|field| match field {
                    "0" => Ok(0),
                    "1" => Ok(1),
                    other => Err(Error::Parse {
                        line,
                        msg: format!("expected 0 or 1, found {other:?}"),
                    }),
                })
                .collect::<Result<Vec<u8>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse {
                line: 1,
                msg: "no matrix rows".into(),
            });
        }
        Self::from_rows(&rows)
    }

    /// Writes the matrix as comma-separated 0/1 rows.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(sink);
        for row in self.data.chunks(self.cols) {
            writer.write_record(row.iter().map(|v| if *v == 1 { "1" } else { "0" }))?;
        }
        writer.flush()?;
        Ok(())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols) {
            for v in row {
                write!(f, "{v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Sparse binary parity-check matrix with row and column adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseParityCheck {
    rows: usize,
    cols: usize,
    row_adj: Vec<Vec<usize>>,
    col_adj: Vec<Vec<usize>>,
}

impl SparseParityCheck {
    /// Builds a matrix from 1-based `(row, col)` positions of its ones.
    /// Repeated positions are rejected.
    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut zero_based = Vec::new();
        for (r, c) in entries {
            if r == 0 || r > rows || c == 0 || c > cols {
                return domain(format!("entry ({r}, {c}) outside a {rows}x{cols} matrix"));
            }
            zero_based.push((r - 1, c - 1));
        }
        Self::from_zero_based(rows, cols, zero_based)
    }

    pub(crate) fn from_zero_based(
        rows: usize,
        cols: usize,
        entries: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return domain(format!("matrix must be at least 1x1, got {rows}x{cols}"));
        }
        let mut row_adj = vec![Vec::new(); rows];
        let mut col_adj = vec![Vec::new(); cols];
        for (r, c) in entries {
            row_adj[r].push(c);
            col_adj[c].push(r);
        }
        for (kind, lists) in [("row", &mut row_adj), ("column", &mut col_adj)] {
            for (i, list) in lists.iter_mut().enumerate() {
                list.sort_unstable();
                if list.windows(2).any(|w| w[0] == w[1]) {
                    return domain(format!("duplicate entry in {kind} {}", i + 1));
                }
            }
        }
        Ok(SparseParityCheck {
            rows,
            cols,
            row_adj,
            col_adj,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of ones.
    pub fn nnz(&self) -> usize {
        self.col_adj.iter().map(Vec::len).sum()
    }

    /// 1-based column indices of the ones in row `row` (1-based), ascending.
    pub fn row_indices(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_adj[row - 1].iter().map(|c| c + 1)
    }

    /// 1-based row indices of the ones in column `col` (1-based), ascending.
    pub fn col_indices(&self, col: usize) -> impl Iterator<Item = usize> + '_ {
        self.col_adj[col - 1].iter().map(|r| r + 1)
    }

    #[inline]
    pub(crate) fn col_adj(&self, c: usize) -> &[usize] {
        &self.col_adj[c]
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.row_adj.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        self.col_adj.iter().map(Vec::len).collect()
    }

    pub fn to_dense(&self) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(self.rows, self.cols).expect("non-empty shape");
        for (c, list) in self.col_adj.iter().enumerate() {
            for &r in list {
                m.put(r, c, 1);
            }
        }
        m
    }

    /// Writes the matrix in alist format, without zero padding.
    pub fn write_alist<W: Write>(&self, mut sink: W) -> Result<()> {
        let col_deg = self.col_weights();
        let row_deg = self.row_weights();
        let join = |v: &mut dyn Iterator<Item = usize>| {
            v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        };
        writeln!(sink, "{} {}", self.cols, self.rows)?;
        writeln!(
            sink,
            "{} {}",
            col_deg.iter().max().copied().unwrap_or(0),
            row_deg.iter().max().copied().unwrap_or(0)
        )?;
        writeln!(sink, "{}", join(&mut col_deg.iter().copied()))?;
        writeln!(sink, "{}", join(&mut row_deg.iter().copied()))?;
        for list in &self.col_adj {
            writeln!(sink, "{}", join(&mut list.iter().map(|r| r + 1)))?;
        }
        for list in &self.row_adj {
            writeln!(sink, "{}", join(&mut list.iter().map(|c| c + 1)))?;
        }
        Ok(())
    }

    /// Reads an alist file. Zero entries in the adjacency lists are treated
    /// as padding and skipped.
    pub fn read_alist<R: Read>(source: R) -> Result<Self> {
        let mut lines = AlistLines::new(source);

        let header = lines.numbers(2)?;
        let (cols, rows) = (header.1[0], header.1[1]);
        if rows == 0 || cols == 0 {
            return Err(lines.error(header.0, "matrix dimensions must be positive"));
        }
        lines.numbers(2)?;
        let (_, col_deg) = lines.numbers(cols)?;
        let (_, row_deg) = lines.numbers(rows)?;

        let mut entries = Vec::new();
        for (c, &deg) in col_deg.iter().enumerate() {
            let (line, list) = lines.adjacency(rows)?;
            if list.len() != deg {
                return Err(lines.error(
                    line,
                    format!("column {} lists {} rows, degree says {deg}", c + 1, list.len()),
                ));
            }
            entries.extend(list.into_iter().map(|r| (r - 1, c)));
        }
        let h = Self::from_zero_based(rows, cols, entries)?;

        for (r, &deg) in row_deg.iter().enumerate() {
            let (line, mut list) = lines.adjacency(cols)?;
            if list.len() != deg {
                return Err(lines.error(
                    line,
                    format!("row {} lists {} columns, degree says {deg}", r + 1, list.len()),
                ));
            }
            list.sort_unstable();
            if list.iter().map(|c| c - 1).ne(h.row_adj[r].iter().copied()) {
                return Err(lines.error(
                    line,
                    format!("row {} disagrees with the column lists", r + 1),
                ));
            }
        }
        Ok(h)
    }
}

impl From<&BinaryMatrix> for SparseParityCheck {
    fn from(m: &BinaryMatrix) -> Self {
        m.to_sparse()
    }
}

impl From<&SparseParityCheck> for BinaryMatrix {
    fn from(h: &SparseParityCheck) -> Self {
        h.to_dense()
    }
}

struct AlistLines<R> {
    inner: std::io::Lines<BufReader<R>>,
    line: usize,
}

impl<R: Read> AlistLines<R> {
    fn new(source: R) -> Self {
        AlistLines {
            inner: BufReader::new(source).lines(),
            line: 0,
        }
    }

    fn error(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    fn next_line(&mut self) -> Result<(usize, String)> {
        self.line += 1;
        match self.inner.next() {
            Some(text) => Ok((self.line, text?)),
            None => Err(self.error(self.line, "unexpected end of input")),
        }
    }

    fn parse_line(&mut self) -> Result<(usize, Vec<usize>)> {
        let (line, text) = self.next_line()?;
        let values = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| self.error(line, format!("invalid number {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((line, values))
    }

    /// A line that must hold exactly `count` numbers.
    fn numbers(&mut self, count: usize) -> Result<(usize, Vec<usize>)> {
        let (line, values) = self.parse_line()?;
        if values.len() != count {
            return Err(self.error(
                line,
                format!("expected {count} numbers, found {}", values.len()),
            ));
        }
        Ok((line, values))
    }

    /// An adjacency line with zero padding removed and indices checked
    /// against `[1, bound]`.
    fn adjacency(&mut self, bound: usize) -> Result<(usize, Vec<usize>)> {
        let (line, mut values) = self.parse_line()?;
        values.retain(|&v| v != 0);
        if let Some(&bad) = values.iter().find(|&&v| v > bound) {
            return Err(self.error(line, format!("index {bad} outside [1, {bound}]")));
        }
        Ok((line, values))
    }
}
