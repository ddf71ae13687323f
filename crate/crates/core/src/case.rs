//! Starting cases: the known leading rows of a partial plane plus the band
//! and block layout needed to encode the rest.
//!
//! Case files are plain text. Header lines come first, then one line of
//! `0`/`1` characters per known row; `#` starts a comment.
//!
//! ```text
//! case 1c
//! rows 8
//! cols 66
//! initial 18
//! blocks 19..24, 25..30
//! kvals 4 4 1 1 1
//! outside 9 10 11 12 13
//! colrows 1: 9 10 11
//! 110000...
//! ```
//!
//! `order`, `rowbands` and `colbands` are optional for order 10 and default
//! to `10`, `8 72 31` and `16 95`. All indices are 1-based.

use std::fmt::{self, Write as _};
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::matrix::{Cell, PartialIncidenceMatrix, PlaneParams};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CaseError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CaseId {
    C1a,
    C1b,
    C1c,
    C2,
    C3,
    C4,
    C5,
    C6a,
    C6b,
    C6c,
    /// Synthetic or user-defined cases.
    Other(String),
}

impl CaseId {
    pub const KNOWN_CASES: [CaseId; 10] = [
        CaseId::C1a,
        CaseId::C1b,
        CaseId::C1c,
        CaseId::C2,
        CaseId::C3,
        CaseId::C4,
        CaseId::C5,
        CaseId::C6a,
        CaseId::C6b,
        CaseId::C6c,
    ];

    pub fn as_str(&self) -> &str {
        match self {
            CaseId::C1a => "1a",
            CaseId::C1b => "1b",
            CaseId::C1c => "1c",
            CaseId::C2 => "2",
            CaseId::C3 => "3",
            CaseId::C4 => "4",
            CaseId::C5 => "5",
            CaseId::C6a => "6a",
            CaseId::C6b => "6b",
            CaseId::C6c => "6c",
            CaseId::Other(s) => s,
        }
    }

    /// Cases handled by the block method rather than lex-leader constraints.
    pub fn uses_block_method(&self) -> bool {
        matches!(self, CaseId::C1a | CaseId::C1b | CaseId::C1c)
    }

    /// Upper end of the block index range in the minimum-label condition.
    pub fn block_range_max(&self) -> usize {
        match self {
            CaseId::C1b => 4,
            _ => 8,
        }
    }

    /// Expected symmetry group size of the initial configuration.
    pub fn expected_group_size(&self) -> Option<usize> {
        Some(match self {
            CaseId::C1a | CaseId::C1c => 1152,
            CaseId::C1b => 576,
            CaseId::C2 => 48,
            CaseId::C3 | CaseId::C4 => 16,
            CaseId::C5 => 12,
            CaseId::C6a | CaseId::C6c => 4,
            CaseId::C6b => 2,
            CaseId::Other(_) => return None,
        })
    }

    /// Expected number of initial columns.
    pub fn expected_initial_cols(&self) -> Option<usize> {
        Some(match self {
            CaseId::C1a => 28,
            CaseId::C1b => 23,
            CaseId::C1c => 18,
            CaseId::C6b => 26,
            CaseId::C6c => 24,
            CaseId::Other(_) => return None,
            _ => 28,
        })
    }
}

impl FromStr for CaseId {
    type Err = CaseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "1a" => CaseId::C1a,
            "1b" => CaseId::C1b,
            "1c" => CaseId::C1c,
            "2" => CaseId::C2,
            "3" => CaseId::C3,
            "4" => CaseId::C4,
            "5" => CaseId::C5,
            "6a" => CaseId::C6a,
            "6b" => CaseId::C6b,
            "6c" => CaseId::C6c,
            other if !other.is_empty() && !other.contains(char::is_whitespace) => CaseId::Other(other.to_string()),
            _ => return Err(CaseError::Invalid(format!("bad case id {s:?}"))),
        })
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A validated starting case. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseSpec {
    pub id: CaseId,
    pub params: PlaneParams,
    /// Known leading rows over the inside columns; no `Unknown` cells.
    pub known_rows: PartialIncidenceMatrix,
    pub initial_col_count: usize,
    /// Top, middle and bottom row band sizes.
    pub row_bands: [usize; 3],
    /// First (fully determined) column band and the rest.
    pub col_bands: [usize; 2],
    /// Number of known-row `One`s for each inside column past the first band.
    pub col_params: Vec<usize>,
    pub blocks: Vec<RangeInclusive<usize>>,
    /// Row each outside column is made incident with.
    pub outside_rows: Vec<usize>,
    /// For first-band columns: `One` rows within the middle band, when known.
    pub column_rows: Vec<Option<Vec<usize>>>,
}

impl CaseSpec {
    pub fn top_rows(&self) -> usize {
        self.known_rows.rows()
    }

    pub fn inside_col_count(&self) -> usize {
        self.known_rows.cols()
    }

    /// Rows covered by the top and middle bands (80 for order 10).
    pub fn window_rows(&self) -> usize {
        self.row_bands[0] + self.row_bands[1]
    }

    pub fn first_band(&self) -> usize {
        self.col_bands[0]
    }

    /// `S(i)`: inside columns where known row `i` has a `One`.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        self.known_rows.ones_in_row(i)
    }

    /// `T(k)` for a first-band column: all `One` rows within the window, if known.
    pub fn column_support(&self, k: usize) -> Option<Vec<usize>> {
        let extra = self.column_rows.get(k)?.as_ref()?;
        let mut rows = self.known_rows.ones_in_col(k);
        rows.extend(extra.iter().copied());
        Some(rows)
    }

    pub fn from_path<P: AsRef<Path>>(path: P) -> Result<CaseSpec, CaseError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| CaseError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        text.parse()
    }

    /// Serializes to the case-file format; `parse(to_text())` is the identity.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "case {}", self.id).unwrap();
        writeln!(s, "order {}", self.params.order()).unwrap();
        writeln!(s, "rows {}", self.top_rows()).unwrap();
        writeln!(s, "cols {}", self.inside_col_count()).unwrap();
        writeln!(s, "initial {}", self.initial_col_count).unwrap();
        let [a, b, c] = self.row_bands;
        writeln!(s, "rowbands {a} {b} {c}").unwrap();
        writeln!(s, "colbands {} {}", self.col_bands[0], self.col_bands[1]).unwrap();
        if !self.blocks.is_empty() {
            let parts: Vec<String> =
                self.blocks.iter().map(|r| format!("{}..{}", r.start() + 1, r.end() + 1)).collect();
            writeln!(s, "blocks {}", parts.join(", ")).unwrap();
        }
        if !self.col_params.is_empty() {
            let ks: Vec<String> = self.col_params.iter().map(|k| k.to_string()).collect();
            writeln!(s, "kvals {}", ks.join(" ")).unwrap();
        }
        if !self.outside_rows.is_empty() {
            let rs: Vec<String> = self.outside_rows.iter().map(|r| (r + 1).to_string()).collect();
            writeln!(s, "outside {}", rs.join(" ")).unwrap();
        }
        for (k, rows) in self.column_rows.iter().enumerate() {
            if let Some(rows) = rows {
                let rs: Vec<String> = rows.iter().map(|r| (r + 1).to_string()).collect();
                writeln!(s, "colrows {}: {}", k + 1, rs.join(" ")).unwrap();
            }
        }
        s.push_str(&self.known_rows.to_grid_string());
        s
    }

    /// Checks every structural invariant of a starting case.
    pub fn validate(&self) -> Result<(), CaseError> {
        let side = self.params.side();
        let m = &self.known_rows;
        let invalid = |msg: String| Err(CaseError::Invalid(msg));
        if self.row_bands.iter().sum::<usize>() != side || self.col_bands.iter().sum::<usize>() != side {
            return invalid(format!("bands must sum to {side}"));
        }
        if self.row_bands[0] != m.rows() {
            return invalid(format!("top row band is {} but the grid has {} rows", self.row_bands[0], m.rows()));
        }
        if m.unknown_count() > 0 {
            return invalid("known rows contain unknown cells".into());
        }
        if m.cols() > side || self.col_bands[0] > m.cols() {
            return invalid(format!("{} inside columns do not fit the bands", m.cols()));
        }
        for i in 0..m.rows() {
            for j in i + 1..m.rows() {
                let shared: Vec<usize> =
                    (0..m.cols()).filter(|&k| m.get(i, k) == Cell::One && m.get(j, k) == Cell::One).collect();
                if shared.len() != 1 {
                    return invalid(format!(
                        "rows ({},{}) intersect {} times within the inside columns",
                        i + 1,
                        j + 1,
                        shared.len()
                    ));
                }
            }
            if m.ones_in_row(i).len() > self.params.row_weight() {
                return invalid(format!("row {} has more than {} ones", i + 1, self.params.row_weight()));
            }
        }
        for k in 0..m.cols() {
            let ones = m.ones_in_col(k).len();
            if k < self.col_bands[0] {
                if ones != 2 {
                    return invalid(format!("column {} in the first band has {ones} ones, expected 2", k + 1));
                }
            } else {
                let expected = self.col_params[k - self.col_bands[0]];
                if ones != expected {
                    return invalid(format!("column {} has {ones} ones, kvals says {expected}", k + 1));
                }
            }
            if ones == 0 {
                return invalid(format!("inside column {} meets no known row", k + 1));
            }
            let initial = ones >= 2;
            if initial != (k < self.initial_col_count) {
                return invalid(format!(
                    "initial columns must be exactly columns 1..{}; column {} has {ones} ones",
                    self.initial_col_count,
                    k + 1
                ));
            }
        }
        if self.col_params.len() != m.cols() - self.col_bands[0] {
            return invalid("kvals must list every inside column past the first band".into());
        }
        for (b, r) in self.blocks.iter().enumerate() {
            if r.start() > r.end() || *r.end() >= m.cols() {
                return invalid(format!("block {} lies outside the inside columns", b + 1));
            }
        }
        if self.id == CaseId::C1c {
            for a in 0..self.blocks.len() {
                for b in a + 1..self.blocks.len() {
                    let (x, y) = (&self.blocks[a], &self.blocks[b]);
                    if x.start() <= y.end() && y.start() <= x.end() {
                        return invalid(format!("blocks {} and {} overlap", a + 1, b + 1));
                    }
                }
            }
        }
        let window = self.window_rows();
        for &r in &self.outside_rows {
            if r < m.rows() || r >= window {
                return invalid(format!("outside column row {} must lie in the middle band", r + 1));
            }
        }
        if self.outside_rows.len() + m.cols() > side {
            return invalid("too many outside columns".into());
        }
        if self.column_rows.len() > self.col_bands[0] {
            return invalid("colrows given for a column past the first band".into());
        }
        for (k, rows) in self.column_rows.iter().enumerate() {
            if let Some(rows) = rows {
                if let Some(&r) = rows.iter().find(|&&r| r < m.rows() || r >= window) {
                    return invalid(format!("colrows {}: row {} outside the middle band", k + 1, r + 1));
                }
                let total = rows.len() + 2;
                if total > self.params.row_weight() {
                    return invalid(format!("colrows {}: column has {total} ones", k + 1));
                }
            }
        }
        // Known middle-band rows of the first band must not meet twice.
        let mut seen: std::collections::HashMap<(usize, usize), usize> = Default::default();
        for (k, rows) in self.column_rows.iter().enumerate() {
            let Some(rows) = rows else { continue };
            let mut all = m.ones_in_col(k);
            all.extend(rows);
            all.sort_unstable();
            for a in 0..all.len() {
                for b in a + 1..all.len() {
                    if let Some(prev) = seen.insert((all[a], all[b]), k) {
                        return invalid(format!(
                            "rows ({},{}) meet in columns {} and {}",
                            all[a] + 1,
                            all[b] + 1,
                            prev + 1,
                            k + 1
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for CaseSpec {
    type Err = CaseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut id = None;
        let mut order = 10usize;
        let mut rows = None;
        let mut cols = None;
        let mut initial = None;
        let mut row_bands = None;
        let mut col_bands = None;
        let mut blocks = Vec::new();
        let mut kvals = None;
        let mut outside = Vec::new();
        let mut colrows: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut grid: Vec<Vec<Cell>> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| CaseError::Parse { line: line_no, msg };
            if line.chars().all(|c| c == '0' || c == '1') {
                grid.push(line.chars().map(|c| Cell::from_bool(c == '1')).collect());
                continue;
            }
            if !grid.is_empty() {
                return Err(perr("header line after the grid".into()));
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let nums = |s: &str| -> Result<Vec<usize>, CaseError> {
                s.split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| perr(format!("bad number {t:?}"))))
                    .collect()
            };
            let one = |s: &str| -> Result<usize, CaseError> {
                s.parse::<usize>().map_err(|_| perr(format!("bad number {s:?}")))
            };
            let one_based = |v: Vec<usize>| -> Result<Vec<usize>, CaseError> {
                v.into_iter().map(|x| x.checked_sub(1).ok_or_else(|| perr("indices are 1-based".into()))).collect()
            };
            match key {
                "case" => id = Some(rest.parse::<CaseId>().map_err(|e| perr(e.to_string()))?),
                "order" => order = one(rest)?,
                "rows" => rows = Some(one(rest)?),
                "cols" => cols = Some(one(rest)?),
                "initial" => initial = Some(one(rest)?),
                "rowbands" => {
                    let v = nums(rest)?;
                    let arr: [usize; 3] = v.try_into().map_err(|_| perr("rowbands needs 3 values".into()))?;
                    row_bands = Some(arr);
                }
                "colbands" => {
                    let v = nums(rest)?;
                    let arr: [usize; 2] = v.try_into().map_err(|_| perr("colbands needs 2 values".into()))?;
                    col_bands = Some(arr);
                }
                "blocks" => {
                    for part in rest.split(',') {
                        let (a, b) =
                            part.trim().split_once("..").ok_or_else(|| perr(format!("bad block range {part:?}")))?;
                        let (a, b) = (one(a.trim())?, one(b.trim())?);
                        if a == 0 || b == 0 {
                            return Err(perr("indices are 1-based".into()));
                        }
                        blocks.push(a - 1..=b - 1);
                    }
                }
                "kvals" => kvals = Some(nums(rest)?),
                "outside" => outside = one_based(nums(rest)?)?,
                "colrows" => {
                    let (k, rs) = rest.split_once(':').ok_or_else(|| perr("colrows needs ':'".into()))?;
                    let k = one(k.trim())?.checked_sub(1).ok_or_else(|| perr("indices are 1-based".into()))?;
                    colrows.push((k, one_based(nums(rs)?)?));
                }
                other => return Err(perr(format!("unknown header {other:?}"))),
            }
        }

        let missing = |what: &str| CaseError::Parse { line: 0, msg: format!("missing '{what}' header") };
        let id = id.ok_or_else(|| missing("case"))?;
        let rows = rows.ok_or_else(|| missing("rows"))?;
        let cols = cols.ok_or_else(|| missing("cols"))?;
        let initial = initial.ok_or_else(|| missing("initial"))?;
        if grid.len() != rows {
            return Err(CaseError::Parse { line: 0, msg: format!("expected {rows} grid rows, found {}", grid.len()) });
        }
        if let Some((i, r)) = grid.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(CaseError::Parse {
                line: 0,
                msg: format!("grid row {} has {} columns, expected {cols}", i + 1, r.len()),
            });
        }
        let known_rows = PartialIncidenceMatrix::from_rows(&grid).map_err(|e| CaseError::Invalid(e.to_string()))?;
        let (row_bands, col_bands) = match (row_bands, col_bands, order) {
            (Some(r), Some(c), _) => (r, c),
            (r, c, 10) => (r.unwrap_or([8, 72, 31]), c.unwrap_or([16, 95])),
            _ => return Err(missing("rowbands/colbands")),
        };
        let first = col_bands[0].min(cols);
        let col_params = match kvals {
            Some(k) => k,
            None => (first..cols).map(|k| known_rows.ones_in_col(k).len()).collect(),
        };
        let mut column_rows: Vec<Option<Vec<usize>>> = Vec::new();
        for (k, mut rs) in colrows {
            if column_rows.len() <= k {
                column_rows.resize(k + 1, None);
            }
            rs.sort_unstable();
            column_rows[k] = Some(rs);
        }
        let spec = CaseSpec {
            id,
            params: PlaneParams::new(order),
            known_rows,
            initial_col_count: initial,
            row_bands,
            col_bands,
            col_params,
            blocks,
            outside_rows: outside,
            column_rows,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Reads a case file.
pub fn load_case<P: AsRef<Path>>(path: P) -> Result<CaseSpec, CaseError> {
    CaseSpec::from_path(path)
}

/// The first `k` lines of `plane` (greedily, in index order) with no three
/// through a common point.
pub fn lines_in_general_position(plane: &PartialIncidenceMatrix, k: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for l in 0..plane.rows() {
        if chosen.len() == k {
            break;
        }
        let concurrent = (0..plane.cols()).any(|p| {
            plane.get(l, p) == Cell::One && chosen.iter().filter(|&&m| plane.get(m, p) == Cell::One).count() >= 2
        });
        if !concurrent {
            chosen.push(l);
        }
    }
    chosen
}

/// A starting case cut from a complete plane: `lines` become the known rows.
///
/// Columns are the points on two known lines, then the points on one known
/// line grouped into a block per line; points on no known line become
/// outside columns. All other lines form the middle band, and every
/// first-band column is given in full.
pub fn synthetic_case(
    id: CaseId,
    plane: &PartialIncidenceMatrix,
    order: usize,
    lines: &[usize],
) -> Result<CaseSpec, CaseError> {
    let params = PlaneParams::new(order);
    let side = params.side();
    if plane.rows() != side || plane.cols() != side {
        return Err(CaseError::Invalid(format!("plane must be {side}x{side}")));
    }
    let hits = |p: usize| lines.iter().filter(|&&l| plane.get(l, p) == Cell::One).count();
    let mut cols: Vec<usize> = (0..side).filter(|&p| hits(p) >= 2).collect();
    let initial = cols.len();
    let mut blocks = Vec::new();
    for &l in lines {
        let start = cols.len();
        cols.extend((0..side).filter(|&p| hits(p) == 1 && plane.get(l, p) == Cell::One));
        if cols.len() > start {
            blocks.push(start..=cols.len() - 1);
        }
    }
    let outside: Vec<usize> = (0..side).filter(|&p| hits(p) == 0).collect();
    let rows: Vec<usize> = lines.iter().copied().chain((0..side).filter(|r| !lines.contains(r))).collect();
    let new_row = |r: usize| rows.iter().position(|&x| x == r).expect("every line has a row");
    let grid: Vec<Vec<Cell>> = lines.iter().map(|&l| cols.iter().map(|&p| plane.get(l, p)).collect()).collect();
    let known_rows = PartialIncidenceMatrix::from_rows(&grid).map_err(|e| CaseError::Invalid(e.to_string()))?;
    let top = lines.len();
    let middle = |p: usize| -> Vec<usize> {
        let mut rs: Vec<usize> = plane.ones_in_col(p).into_iter().map(new_row).filter(|&r| r >= top).collect();
        rs.sort_unstable();
        rs
    };
    let spec = CaseSpec {
        id,
        params,
        col_params: vec![1; cols.len() - initial],
        initial_col_count: initial,
        row_bands: [top, side - top, 0],
        col_bands: [initial, side - initial],
        blocks,
        outside_rows: outside.iter().map(|&p| middle(p)[0]).collect(),
        column_rows: cols[..initial].iter().map(|&p| Some(middle(p))).collect(),
        known_rows,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 8 rows forming a 4-regular graph on 16 first-band columns (K4,4),
    /// two columns for the two tetrahedra, then one block of 6 per row.
    pub(crate) fn tetrahedra_case_text() -> String {
        let mut grid = vec![vec![0u8; 18 + 48]; 8];
        let mut col = 0;
        for a in 0..4 {
            for b in 4..8 {
                grid[a][col] = 1;
                grid[b][col] = 1;
                col += 1;
            }
        }
        for r in 0..8 {
            grid[r][if r < 4 { 16 } else { 17 }] = 1;
            for c in 0..6 {
                grid[r][18 + 6 * r + c] = 1;
            }
        }
        let mut s = String::from("case 1c\nrows 8\ncols 66\ninitial 18\n");
        let blocks: Vec<String> = (0..8).map(|b| format!("{}..{}", 19 + 6 * b, 24 + 6 * b)).collect();
        s += &format!("blocks {}\n", blocks.join(", "));
        for row in grid {
            s.extend(row.iter().map(|&b| if b == 1 { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }

    #[test]
    fn loads_tetrahedra_configuration() {
        let spec: CaseSpec = tetrahedra_case_text().parse().unwrap();
        assert_eq!(spec.initial_col_count, 18);
        assert_eq!(spec.inside_col_count(), 66);
        assert_eq!(spec.blocks.len(), 8);
        assert_eq!(spec.col_params[..2], [4, 4]);
        for i in 0..8 {
            assert_eq!(spec.row_support(i).len(), 11);
            for j in i + 1..8 {
                assert_eq!(spec.known_rows.row_intersection_count(i, j).unwrap(), 1);
            }
        }
    }

    #[test]
    fn round_trip() {
        let spec: CaseSpec = tetrahedra_case_text().parse().unwrap();
        let again: CaseSpec = spec.to_text().parse().unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn double_intersection_names_rows() {
        let text = tetrahedra_case_text();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        // Give row 2 a One in row 1's block as well.
        let row2 = lines.len() - 7;
        let mut chars: Vec<char> = lines[row2].chars().collect();
        chars[18] = '1';
        lines[row2] = chars.into_iter().collect();
        let err = lines.join("\n").parse::<CaseSpec>().unwrap_err();
        assert!(err.to_string().contains("rows (1,2)"), "{err}");
    }

    #[test]
    fn band_sums_are_checked() {
        let text = tetrahedra_case_text().replace("initial 18\n", "initial 18\ncolbands 16 94\n");
        let err = text.parse::<CaseSpec>().unwrap_err();
        assert_eq!(err, CaseError::Invalid("bands must sum to 111".into()));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("rows 8\n".parse::<CaseSpec>(), Err(CaseError::Parse { .. })));
        let short = tetrahedra_case_text().replace("cols 66", "cols 65");
        assert!(short.parse::<CaseSpec>().is_err());
        let bad_header = tetrahedra_case_text().replace("initial 18", "initial x");
        assert!(matches!(bad_header.parse::<CaseSpec>(), Err(CaseError::Parse { line: 4, .. })));
        let wrong_initial = tetrahedra_case_text().replace("initial 18", "initial 17");
        assert!(wrong_initial.parse::<CaseSpec>().is_err());
    }

    #[test]
    fn synthetic_cases_from_small_planes() {
        let plane = crate::matrix::desarguesian_plane(5);
        let lines = lines_in_general_position(&plane, 5);
        assert_eq!(lines.len(), 5);
        let spec = synthetic_case(CaseId::Other("pg5".into()), &plane, 5, &lines).unwrap();
        // 10 pairwise intersections, then 2 private points per line.
        assert_eq!(spec.initial_col_count, 10);
        assert_eq!(spec.inside_col_count(), 20);
        assert_eq!(spec.blocks.len(), 5);
        assert!(spec.blocks.iter().all(|b| b.clone().count() == 2));
        assert_eq!(spec.outside_rows.len(), 11);
        let again: CaseSpec = spec.to_text().parse().unwrap();
        assert_eq!(again, spec);
    }
}
