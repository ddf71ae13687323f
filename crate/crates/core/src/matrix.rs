//! Partial incidence matrices of projective planes.
//!
//! Rows are lines and columns are points. Indices are 0-based in the API and
//! 1-based in everything a person reads (`Display`, error messages, files).

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Zero,
    One,
    Unknown,
}

impl Cell {
    pub fn from_bool(b: bool) -> Cell {
        if b {
            Cell::One
        } else {
            Cell::Zero
        }
    }

    pub fn is_known(self) -> bool {
        self != Cell::Unknown
    }

    pub fn symbol(self) -> char {
        match self {
            Cell::Zero => '0',
            Cell::One => '1',
            Cell::Unknown => '?',
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    Empty { rows: usize, cols: usize },
    #[error("row {row} has length {len}, expected {cols}")]
    Ragged { row: usize, len: usize, cols: usize },
    #[error("index ({0}, {1}) out of range")]
    OutOfRange(usize, usize),
    #[error("row {0} compared with itself")]
    SameIndex(usize),
}

/// Order parameters of a projective plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlaneParams {
    order: usize,
}

impl PlaneParams {
    pub fn new(order: usize) -> PlaneParams {
        PlaneParams { order }
    }

    pub fn order(self) -> usize {
        self.order
    }

    /// Number of points (and lines): n² + n + 1.
    pub fn side(self) -> usize {
        self.order * self.order + self.order + 1
    }

    /// Points per line: n + 1.
    pub fn row_weight(self) -> usize {
        self.order + 1
    }
}

/// Two rows (or two columns) sharing at least two `One` positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    Rows { pair: (usize, usize), shared: (usize, usize) },
    Cols { pair: (usize, usize), shared: (usize, usize) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Rows { pair, shared } => {
                write!(f, "rows {},{} share cols {},{}", pair.0 + 1, pair.1 + 1, shared.0 + 1, shared.1 + 1)
            }
            Violation::Cols { pair, shared } => {
                write!(f, "cols {},{} share rows {},{}", pair.0 + 1, pair.1 + 1, shared.0 + 1, shared.1 + 1)
            }
        }
    }
}

/// Dense rows × cols grid of [`Cell`]s.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialIncidenceMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
}

impl PartialIncidenceMatrix {
    pub fn filled(rows: usize, cols: usize, cell: Cell) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty { rows, cols });
        }
        Ok(PartialIncidenceMatrix { rows, cols, cells: vec![cell; rows * cols] })
    }

    pub fn unknown(rows: usize, cols: usize) -> Result<Self, MatrixError> {
        Self::filled(rows, cols, Cell::Unknown)
    }

    pub fn from_rows(rows: &[Vec<Cell>]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::unknown(rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::Ragged { row: i + 1, len: row.len(), cols });
            }
            m.cells[i * cols..(i + 1) * cols].copy_from_slice(row);
        }
        Ok(m)
    }

    /// Fully known matrix from 0/1 rows.
    pub fn from_bits(rows: &[Vec<u8>]) -> Result<Self, MatrixError> {
        let cells: Vec<Vec<Cell>> = rows.iter().map(|r| r.iter().map(|&b| Cell::from_bool(b != 0)).collect()).collect();
        Self::from_rows(&cells)
    }

    pub fn identity(n: usize) -> Result<Self, MatrixError> {
        let mut m = Self::filled(n, n, Cell::Zero)?;
        for i in 0..n {
            m.set(i, i, Cell::One);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Cell {
        self.cells[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, cell: Cell) {
        self.cells[row * self.cols + col] = cell;
    }

    pub fn row(&self, row: usize) -> &[Cell] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn col(&self, col: usize) -> Vec<Cell> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn transpose(&self) -> PartialIncidenceMatrix {
        let mut t =
            PartialIncidenceMatrix { rows: self.cols, cols: self.rows, cells: vec![Cell::Unknown; self.cells.len()] };
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Column indices holding `One` in `row`.
    pub fn ones_in_row(&self, row: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(row, c) == Cell::One).collect()
    }

    pub fn ones_in_col(&self, col: usize) -> Vec<usize> {
        (0..self.rows).filter(|&r| self.get(r, col) == Cell::One).collect()
    }

    pub fn unknown_count(&self) -> usize {
        self.cells.iter().filter(|c| **c == Cell::Unknown).count()
    }

    pub fn row_intersection_count(&self, i: usize, j: usize) -> Result<usize, MatrixError> {
        if i >= self.rows || j >= self.rows {
            return Err(MatrixError::OutOfRange(i.max(j), 0));
        }
        if i == j {
            return Err(MatrixError::SameIndex(i + 1));
        }
        Ok((0..self.cols).filter(|&c| self.get(i, c) == Cell::One && self.get(j, c) == Cell::One).count())
    }

    pub fn col_intersection_count(&self, k: usize, l: usize) -> Result<usize, MatrixError> {
        self.transpose().row_intersection_count(k, l)
    }

    /// All row pairs and column pairs that meet in two or more `One`s.
    ///
    /// Each violation reports the first two shared positions.
    pub fn validate_partial(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (pair, shared) in double_intersections(self) {
            out.push(Violation::Rows { pair, shared });
        }
        for (pair, shared) in double_intersections(&self.transpose()) {
            out.push(Violation::Cols { pair, shared });
        }
        out
    }

    /// Text grid of `0`/`1`/`?` characters, one row per line.
    pub fn to_grid_string(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            s.extend(self.row(r).iter().map(|c| c.symbol()));
            s.push('\n');
        }
        s
    }
}

type Pair = (usize, usize);

fn double_intersections(m: &PartialIncidenceMatrix) -> Vec<(Pair, Pair)> {
    let ones: Vec<Vec<usize>> = (0..m.rows()).map(|r| m.ones_in_row(r)).collect();
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in i + 1..m.rows() {
            let shared: Vec<usize> =
                ones[i].iter().copied().filter(|c| ones[j].binary_search(c).is_ok()).take(2).collect();
            if shared.len() == 2 {
                out.push(((i, j), (shared[0], shared[1])));
            }
        }
    }
    out
}

/// Incidence matrix of the projective plane of prime order `p` over GF(p).
///
/// Points and lines are the 1-dimensional subspaces of GF(p)³ in normalized form.
pub fn desarguesian_plane(p: usize) -> PartialIncidenceMatrix {
    assert!(p >= 2 && (2..p).all(|d| !p.is_multiple_of(d)), "order must be prime");
    let mut pts: Vec<[usize; 3]> = Vec::new();
    for x in 0..p {
        for y in 0..p {
            pts.push([1, x, y]);
        }
    }
    for y in 0..p {
        pts.push([0, 1, y]);
    }
    pts.push([0, 0, 1]);
    let n = pts.len();
    let mut m = PartialIncidenceMatrix::filled(n, n, Cell::Zero).unwrap();
    for (i, l) in pts.iter().enumerate() {
        for (j, q) in pts.iter().enumerate() {
            if (l[0] * q[0] + l[1] * q[1] + l[2] * q[2]) % p == 0 {
                m.set(i, j, Cell::One);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Fano plane built from the difference set {1, 2, 4} mod 7.
    fn fano() -> PartialIncidenceMatrix {
        let rows: Vec<Vec<u8>> =
            (0..7).map(|i| (0..7).map(|j| u8::from([1, 2, 4].contains(&((j + 7 - i) % 7)))).collect()).collect();
        PartialIncidenceMatrix::from_bits(&rows).unwrap()
    }

    #[test]
    fn fano_is_a_plane() {
        let m = fano();
        assert!(m.validate_partial().is_empty());
        for i in 0..7 {
            assert_eq!(m.ones_in_row(i).len(), 3);
            for j in i + 1..7 {
                assert_eq!(m.row_intersection_count(i, j).unwrap(), 1);
                assert_eq!(m.col_intersection_count(i, j).unwrap(), 1);
            }
        }
    }

    #[test]
    fn all_ones_2x2_has_both_violations() {
        let m = PartialIncidenceMatrix::filled(2, 2, Cell::One).unwrap();
        let v = m.validate_partial();
        assert_eq!(
            v,
            vec![Violation::Rows { pair: (0, 1), shared: (0, 1) }, Violation::Cols { pair: (0, 1), shared: (0, 1) },]
        );
        assert_eq!(v[0].to_string(), "rows 1,2 share cols 1,2");
        assert_eq!(v[1].to_string(), "cols 1,2 share rows 1,2");
    }

    #[test]
    fn unknown_cells_never_intersect() {
        let m = PartialIncidenceMatrix::unknown(5, 4).unwrap();
        assert!(m.validate_partial().is_empty());
        assert_eq!(m.row_intersection_count(0, 1).unwrap(), 0);
    }

    #[test]
    fn intersection_counts() {
        let id = PartialIncidenceMatrix::identity(3).unwrap();
        assert_eq!(id.row_intersection_count(0, 1).unwrap(), 0);
        let m = PartialIncidenceMatrix::from_bits(&[vec![1, 1, 1, 0, 0], vec![0, 0, 1, 1, 1]]).unwrap();
        assert_eq!(m.row_intersection_count(0, 1).unwrap(), 1);
        assert!(m.row_intersection_count(0, 0).is_err());
        assert!(m.row_intersection_count(0, 2).is_err());
    }

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(PartialIncidenceMatrix::unknown(0, 3).is_err());
        assert!(PartialIncidenceMatrix::from_bits(&[vec![1, 0], vec![1]]).is_err());
    }

    #[test]
    fn desarguesian_planes_are_valid() {
        for p in [2, 3, 5, 7] {
            let m = desarguesian_plane(p);
            let params = PlaneParams::new(p);
            assert_eq!(m.rows(), params.side());
            assert!(m.validate_partial().is_empty());
            for r in 0..m.rows() {
                assert_eq!(m.ones_in_row(r).len(), params.row_weight());
            }
        }
    }

    fn cell_strategy() -> impl Strategy<Value = Cell> {
        prop_oneof![Just(Cell::Zero), Just(Cell::One), Just(Cell::Unknown)]
    }

    proptest! {
        #[test]
        fn filling_unknown_with_zero_is_monotone(
            cells in prop::collection::vec(cell_strategy(), 30),
            pick in 0usize..30,
        ) {
            let rows: Vec<Vec<Cell>> = cells.chunks(6).map(|c| c.to_vec()).collect();
            let m = PartialIncidenceMatrix::from_rows(&rows).unwrap();
            let before = m.validate_partial().len();
            let mut filled = m.clone();
            let (r, c) = (pick / 6, pick % 6);
            if filled.get(r, c) == Cell::Unknown {
                filled.set(r, c, Cell::Zero);
            }
            prop_assert!(filled.validate_partial().len() <= before);
        }
    }
}
