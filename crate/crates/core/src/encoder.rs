//! Incidence constraints as CNF.
//!
//! A [`VarMap`] assigns one variable to every unknown cell of a window of the
//! incidence matrix (row-major). Known cells are folded into clauses as
//! constants: a clause containing a literal that is already true is dropped,
//! literals that are already false are removed.

use std::fmt::Write as _;
use std::ops::Range;

use thiserror::Error;

use crate::case::CaseSpec;
use crate::cnf::{CnfError, CnfFormula, Lit};
use crate::matrix::{Cell, PartialIncidenceMatrix, PlaneParams};
use crate::symbreak::{self, ColumnBlock, RowBlock, SymbreakError};

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("row {0} is not fully known inside the window")]
    RowNotKnown(usize),
    #[error("column {0} is not fully known inside the window")]
    ColNotKnown(usize),
    #[error("row {0} has no known ones")]
    EmptySupport(usize),
    #[error("cardinality target {target} exceeds band size {band}")]
    TargetTooLarge { target: usize, band: usize },
    #[error("known entries already violate the constraint: {0}")]
    Contradiction(String),
    #[error("block {0} does not exist")]
    NoSuchBlock(usize),
    #[error("window has {got} rows, at most {max} allowed")]
    TooManyRows { got: usize, max: usize },
    #[error("order must be at least 2")]
    OrderTooSmall,
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Symbreak(#[from] SymbreakError),
}

/// Value of a cell inside clause construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellLit {
    True,
    False,
    Var(Lit),
}

/// Bijection between the unknown cells of a window and variables `1..=V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    known: PartialIncidenceMatrix,
    cell_var: Vec<Option<u32>>,
    var_cell: Vec<(usize, usize)>,
    /// Plane column index (0-based) of each window column.
    col_labels: Vec<usize>,
}

impl VarMap {
    /// Numbers the `Unknown` cells of `window` row by row.
    pub fn new(window: PartialIncidenceMatrix) -> VarMap {
        let labels = (0..window.cols()).collect();
        VarMap::with_labels(window, labels)
    }

    pub fn with_labels(window: PartialIncidenceMatrix, col_labels: Vec<usize>) -> VarMap {
        assert_eq!(col_labels.len(), window.cols());
        let mut cell_var = vec![None; window.rows() * window.cols()];
        let mut var_cell = Vec::new();
        for r in 0..window.rows() {
            for c in 0..window.cols() {
                if window.get(r, c) == Cell::Unknown {
                    var_cell.push((r, c));
                    cell_var[r * window.cols() + c] = Some(var_cell.len() as u32);
                }
            }
        }
        VarMap { known: window, cell_var, var_cell, col_labels }
    }

    pub fn rows(&self) -> usize {
        self.known.rows()
    }

    pub fn cols(&self) -> usize {
        self.known.cols()
    }

    pub fn var_count(&self) -> u32 {
        self.var_cell.len() as u32
    }

    pub fn window(&self) -> &PartialIncidenceMatrix {
        &self.known
    }

    pub fn col_label(&self, c: usize) -> usize {
        self.col_labels[c]
    }

    pub fn var(&self, r: usize, c: usize) -> Option<u32> {
        self.cell_var[r * self.cols() + c]
    }

    pub fn cell_of(&self, var: u32) -> Option<(usize, usize)> {
        self.var_cell.get((var as usize).checked_sub(1)?).copied()
    }

    pub fn lit(&self, r: usize, c: usize) -> CellLit {
        match self.known.get(r, c) {
            Cell::One => CellLit::True,
            Cell::Zero => CellLit::False,
            Cell::Unknown => CellLit::Var(self.var(r, c).expect("unknown cells have variables") as Lit),
        }
    }

    pub fn is_row_known(&self, r: usize) -> bool {
        self.known.row(r).iter().all(|c| c.is_known())
    }

    pub fn is_col_known(&self, c: usize) -> bool {
        (0..self.rows()).all(|r| self.known.get(r, c).is_known())
    }

    /// Window filled in from a model (`model[v - 1]` is variable `v`).
    pub fn decode(&self, model: &[bool]) -> PartialIncidenceMatrix {
        let mut m = self.known.clone();
        for (i, &(r, c)) in self.var_cell.iter().enumerate() {
            m.set(r, c, Cell::from_bool(model.get(i).copied().unwrap_or(false)));
        }
        m
    }

    /// Primary-variable assignment matching a fully known matrix of the window's shape.
    pub fn assignment_of(&self, m: &PartialIncidenceMatrix) -> Vec<bool> {
        self.var_cell.iter().map(|&(r, c)| m.get(r, c) == Cell::One).collect()
    }

    /// Sidecar text: `v <var> = p <row> <col>` (1-based), then `aux <var>` lines.
    pub fn to_map_text(&self, formula: &CnfFormula) -> String {
        let mut s = String::new();
        for (i, &(r, c)) in self.var_cell.iter().enumerate() {
            writeln!(s, "v {} = p {} {}", i + 1, r + 1, self.col_labels[c] + 1).unwrap();
        }
        for v in self.var_count() + 1..=formula.var_count() {
            writeln!(s, "aux {v}").unwrap();
        }
        s
    }
}

/// Builds a clause from cell literals; `None` when a constant makes it true.
pub fn fold_clause<I: IntoIterator<Item = (CellLit, bool)>>(lits: I) -> Option<Vec<Lit>> {
    let mut out = Vec::new();
    for (cell, positive) in lits {
        match (cell, positive) {
            (CellLit::True, true) | (CellLit::False, false) => return None,
            (CellLit::True, false) | (CellLit::False, true) => {}
            (CellLit::Var(v), true) => out.push(v),
            (CellLit::Var(v), false) => out.push(-v),
        }
    }
    Some(out)
}

fn require_nonempty(clause: Vec<Lit>, what: impl FnOnce() -> String) -> Result<Vec<Lit>, EncodeError> {
    if clause.is_empty() {
        Err(EncodeError::Contradiction(what()))
    } else {
        Ok(clause)
    }
}

/// At-most-once intersection for every row pair in `rows` over every column pair in `cols`:
/// `¬p(i,k) ∨ ¬p(i,l) ∨ ¬p(j,k) ∨ ¬p(j,l)`.
///
/// The same clause forbids columns `k` and `l` from meeting twice, so within
/// one window this also covers every column pair.
pub fn encode_at_most_once_rows(
    vm: &VarMap,
    rows: Range<usize>,
    cols: Range<usize>,
) -> Result<Vec<Vec<Lit>>, EncodeError> {
    let mut out = Vec::new();
    let cols: Vec<usize> = cols.collect();
    for i in rows.clone() {
        for j in i + 1..rows.end {
            // Only columns where both rows may hold a One matter.
            let live: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|&k| vm.lit(i, k) != CellLit::False && vm.lit(j, k) != CellLit::False)
                .collect();
            for (a, &k) in live.iter().enumerate() {
                for &l in &live[a + 1..] {
                    let cells = [(i, k), (i, l), (j, k), (j, l)];
                    if let Some(c) = fold_clause(cells.iter().map(|&(r, c)| (vm.lit(r, c), false))) {
                        out.push(require_nonempty(c, || {
                            format!("rows {},{} share columns {},{}", i + 1, j + 1, k + 1, l + 1)
                        })?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Column-pair form of [`encode_at_most_once_rows`]: for each column pair in
/// `cols`, each row pair in `rows`. Generates the same clauses in column-major order.
pub fn encode_at_most_once_cols(
    vm: &VarMap,
    rows: Range<usize>,
    cols: Range<usize>,
) -> Result<Vec<Vec<Lit>>, EncodeError> {
    let mut out = Vec::new();
    let rows: Vec<usize> = rows.collect();
    for k in cols.clone() {
        for l in k + 1..cols.end {
            let live: Vec<usize> = rows
                .iter()
                .copied()
                .filter(|&r| vm.lit(r, k) != CellLit::False && vm.lit(r, l) != CellLit::False)
                .collect();
            for (a, &i) in live.iter().enumerate() {
                for &j in &live[a + 1..] {
                    let cells = [(i, k), (i, l), (j, k), (j, l)];
                    if let Some(c) = fold_clause(cells.iter().map(|&(r, c)| (vm.lit(r, c), false))) {
                        out.push(require_nonempty(c, || {
                            format!("columns {},{} share rows {},{}", k + 1, l + 1, i + 1, j + 1)
                        })?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Row `j` meets known row `known_row`: `∨_{k ∈ S(known_row)} p(j,k)` for each target.
pub fn encode_at_least_once_rows(
    vm: &VarMap,
    known_row: usize,
    target_rows: impl IntoIterator<Item = usize>,
) -> Result<Vec<Vec<Lit>>, EncodeError> {
    if !vm.is_row_known(known_row) {
        return Err(EncodeError::RowNotKnown(known_row + 1));
    }
    let support = vm.window().ones_in_row(known_row);
    if support.is_empty() {
        return Err(EncodeError::EmptySupport(known_row + 1));
    }
    let mut out = Vec::new();
    for j in target_rows {
        if j == known_row {
            continue;
        }
        if let Some(c) = fold_clause(support.iter().map(|&k| (vm.lit(j, k), true))) {
            out.push(require_nonempty(c, || format!("row {} cannot meet row {}", j + 1, known_row + 1))?);
        }
    }
    Ok(out)
}

/// Column `l` meets known column `known_col`: `∨_{i ∈ T(known_col)} p(i,l)`.
///
/// Targets that are themselves fully known are skipped.
pub fn encode_at_least_once_cols(
    vm: &VarMap,
    known_col: usize,
    target_cols: impl IntoIterator<Item = usize>,
) -> Result<Vec<Vec<Lit>>, EncodeError> {
    if !vm.is_col_known(known_col) {
        return Err(EncodeError::ColNotKnown(known_col + 1));
    }
    let support = vm.window().ones_in_col(known_col);
    if support.is_empty() {
        return Err(EncodeError::EmptySupport(known_col + 1));
    }
    let mut out = Vec::new();
    for l in target_cols {
        if l == known_col || vm.is_col_known(l) {
            continue;
        }
        if let Some(c) = fold_clause(support.iter().map(|&i| (vm.lit(i, l), true))) {
            out.push(require_nonempty(c, || format!("column {} cannot meet column {}", l + 1, known_col + 1))?);
        }
    }
    Ok(out)
}

/// Sequential-counter cardinality constraints over plain literals.
pub mod card {
    use crate::cnf::{CnfFormula, Lit};

    /// At most `k` of `lits` are true. Auxiliary variables come from `f`.
    pub fn at_most(f: &mut CnfFormula, lits: &[Lit], k: usize) -> Vec<Vec<Lit>> {
        let n = lits.len();
        if k >= n {
            return Vec::new();
        }
        if k == 0 {
            return lits.iter().map(|&l| vec![-l]).collect();
        }
        // s[i][j]: at least j+1 of lits[0..=i] are true.
        let mut s = vec![vec![0 as Lit; k]; n - 1];
        for row in s.iter_mut() {
            for v in row.iter_mut() {
                *v = f.fresh_var() as Lit;
            }
        }
        let mut out = Vec::new();
        out.push(vec![-lits[0], s[0][0]]);
        for j in 1..k {
            out.push(vec![-s[0][j]]);
        }
        for i in 1..n - 1 {
            out.push(vec![-lits[i], s[i][0]]);
            out.push(vec![-s[i - 1][0], s[i][0]]);
            for j in 1..k {
                out.push(vec![-lits[i], -s[i - 1][j - 1], s[i][j]]);
                out.push(vec![-s[i - 1][j], s[i][j]]);
            }
            out.push(vec![-lits[i], -s[i - 1][k - 1]]);
        }
        out.push(vec![-lits[n - 1], -s[n - 2][k - 1]]);
        out
    }

    /// At least `k` of `lits` are true.
    pub fn at_least(f: &mut CnfFormula, lits: &[Lit], k: usize) -> Vec<Vec<Lit>> {
        if k == 0 {
            return Vec::new();
        }
        if k == 1 {
            return vec![lits.to_vec()];
        }
        let negated: Vec<Lit> = lits.iter().map(|&l| -l).collect();
        at_most(f, &negated, lits.len().saturating_sub(k))
    }

    pub fn exactly(f: &mut CnfFormula, lits: &[Lit], k: usize) -> Vec<Vec<Lit>> {
        let mut out = at_most(f, lits, k);
        out.extend(at_least(f, lits, k));
        out
    }
}

/// Exactly `target` Ones among the cells `cells`, after folding known cells.
fn cells_cardinality(
    f: &mut CnfFormula,
    vm: &VarMap,
    cells: &[(usize, usize)],
    target: usize,
    exact: bool,
) -> Result<Vec<Vec<Lit>>, EncodeError> {
    if target > cells.len() {
        return Err(EncodeError::TargetTooLarge { target, band: cells.len() });
    }
    let mut ones = 0;
    let mut lits = Vec::new();
    for &(r, c) in cells {
        match vm.lit(r, c) {
            CellLit::True => ones += 1,
            CellLit::False => {}
            CellLit::Var(v) => lits.push(v),
        }
    }
    let rest = target
        .checked_sub(ones)
        .ok_or_else(|| EncodeError::Contradiction(format!("{ones} known ones exceed target {target}")))?;
    if exact && rest > lits.len() {
        return Err(EncodeError::Contradiction(format!("only {} free cells for {rest} more ones", lits.len())));
    }
    Ok(if exact { card::exactly(f, &lits, rest) } else { card::at_most(f, &lits, rest) })
}

/// Exactly `target` Ones in column `col` over the rows of `band`, using a
/// sequential counter with fresh auxiliaries from `f`.
pub fn encode_column_cardinality(
    f: &mut CnfFormula,
    vm: &VarMap,
    col: usize,
    target: usize,
    band: Range<usize>,
) -> Result<Vec<Vec<Lit>>, EncodeError> {
    let cells: Vec<(usize, usize)> = band.map(|r| (r, col)).collect();
    cells_cardinality(f, vm, &cells, target, true)
}

pub fn encode_row_cardinality(
    f: &mut CnfFormula,
    vm: &VarMap,
    row: usize,
    target: usize,
    band: Range<usize>,
) -> Result<Vec<Vec<Lit>>, EncodeError> {
    let cells: Vec<(usize, usize)> = band.map(|c| (row, c)).collect();
    cells_cardinality(f, vm, &cells, target, true)
}

/// A formula together with the map back to matrix cells.
#[derive(Debug, Clone)]
pub struct PlaneEncoding {
    pub formula: CnfFormula,
    pub varmap: VarMap,
}

impl PlaneEncoding {
    fn empty(vm: VarMap) -> PlaneEncoding {
        PlaneEncoding { formula: CnfFormula::new(vm.var_count()), varmap: vm }
    }

    fn push(&mut self, clauses: Vec<Vec<Lit>>) -> Result<(), EncodeError> {
        self.formula.extend_clauses(clauses)?;
        Ok(())
    }
}

/// How much of the plane's relabelling freedom is removed up front.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Canonical {
    /// No fixing.
    None,
    /// First line is points `1..=n+1`; the other lines through point 1 each
    /// take a consecutive block of `n` points; the lines through each point
    /// `c` of the first line occupy consecutive rows.
    Frame,
    /// `Frame` plus column-lex ordering inside every block, row-lex ordering
    /// inside every band of lines, and two families of anchor cells that fix
    /// the order of the blocks and of the bands.
    Normalized,
}

#[derive(Debug, Clone, Copy)]
pub struct FullPlaneOptions {
    pub canonical: Canonical,
    pub row_card: bool,
    pub col_card: bool,
}

impl Default for FullPlaneOptions {
    fn default() -> Self {
        FullPlaneOptions { canonical: Canonical::Normalized, row_card: true, col_card: true }
    }
}

/// Index helpers for the canonical frame of an order-`n` plane (0-based).
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub n: usize,
}

impl Frame {
    /// Point `m` of block `j`: the points other than 0 on line `1 + j`.
    pub fn block_point(self, j: usize, m: usize) -> usize {
        self.n + 1 + j * self.n + m
    }

    /// Line `m` through point `c` (`1 <= c <= n`), other than line 0.
    pub fn band_row(self, c: usize, m: usize) -> usize {
        self.n + 1 + (c - 1) * self.n + m
    }

    /// Row and column `0..=n` of the frame, fully determined.
    pub fn known_window(self) -> PartialIncidenceMatrix {
        let n = self.n;
        let side = n * n + n + 1;
        let mut m = PartialIncidenceMatrix::unknown(side, side).expect("side >= 7");
        for c in 0..side {
            m.set(0, c, Cell::from_bool(c <= n));
        }
        for j in 0..n {
            for c in 0..side {
                let on = c == 0 || (self.block_point(j, 0)..=self.block_point(j, n - 1)).contains(&c);
                m.set(1 + j, c, Cell::from_bool(on));
            }
        }
        for r in n + 1..side {
            m.set(r, 0, Cell::Zero);
        }
        for c in 1..=n {
            for r in n + 1..side {
                let on = (self.band_row(c, 0)..=self.band_row(c, n - 1)).contains(&r);
                m.set(r, c, Cell::from_bool(on));
            }
        }
        m
    }

    /// Column blocks ordered by their incidences with the lines through point 1.
    pub fn column_blocks(self) -> Vec<ColumnBlock> {
        (0..self.n)
            .map(|j| ColumnBlock {
                cols: (0..self.n).map(|m| self.block_point(j, m)).collect(),
                witness_rows: (0..self.n).map(|m| self.band_row(1, m)).collect(),
            })
            .collect()
    }

    /// Bands through points `2..=n`, ordered by their incidences with block 0.
    pub fn row_blocks(self) -> Vec<RowBlock> {
        (2..=self.n)
            .map(|c| RowBlock {
                rows: (0..self.n).map(|m| self.band_row(c, m)).collect(),
                witness_cols: (0..self.n).map(|m| self.block_point(0, m)).collect(),
            })
            .collect()
    }

    /// Cells set to One by the normalization.
    ///
    /// The line through point 2 and the first point of block `j` is the
    /// `j`-th such line (blocks ordered), and for `c >= 3` the line through
    /// point `c` and the first point of block 1 is the `(c-1)`-th line of
    /// its band (bands ordered).
    pub fn anchors(self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if self.n < 3 {
            return out;
        }
        for j in 1..self.n {
            out.push((self.band_row(2, j), self.block_point(j, 0)));
        }
        for c in 3..=self.n {
            out.push((self.band_row(c, c - 1), self.block_point(1, 0)));
        }
        out
    }
}

/// The whole `(n²+n+1)²` incidence matrix of an order-`n` plane.
///
/// At-most-once intersection for all pairs, at-least-once against every
/// fully known row and column, exactly `n+1` Ones per row (and per column
/// when `col_card` is set), plus the chosen canonical fixing.
pub fn encode_full_plane(params: PlaneParams, opts: FullPlaneOptions) -> Result<PlaneEncoding, EncodeError> {
    let n = params.order();
    if n < 2 {
        return Err(EncodeError::OrderTooSmall);
    }
    let side = params.side();
    let frame = Frame { n };
    let window = match opts.canonical {
        Canonical::None => PartialIncidenceMatrix::unknown(side, side).expect("side >= 7"),
        Canonical::Frame | Canonical::Normalized => frame.known_window(),
    };
    let vm = VarMap::new(window);
    let mut enc = PlaneEncoding::empty(vm);

    let clauses = encode_at_most_once_rows(&enc.varmap, 0..side, 0..side)?;
    enc.push(clauses)?;
    for i in 0..side {
        if enc.varmap.is_row_known(i) {
            let clauses = encode_at_least_once_rows(&enc.varmap, i, 0..side)?;
            enc.push(clauses)?;
        }
    }
    for k in 0..side {
        if enc.varmap.is_col_known(k) {
            let clauses = encode_at_least_once_cols(&enc.varmap, k, 0..side)?;
            enc.push(clauses)?;
        }
    }
    let weight = params.row_weight();
    for r in 0..side {
        if opts.row_card && !enc.varmap.is_row_known(r) {
            let clauses = encode_row_cardinality(&mut enc.formula, &enc.varmap, r, weight, 0..side)?;
            enc.push(clauses)?;
        }
    }
    for c in 0..side {
        if opts.col_card && !enc.varmap.is_col_known(c) {
            let clauses = encode_column_cardinality(&mut enc.formula, &enc.varmap, c, weight, 0..side)?;
            enc.push(clauses)?;
        }
    }
    if opts.canonical == Canonical::Normalized {
        // Anchors stay variables so that block columns remain interchangeable.
        let units: Vec<Vec<Lit>> =
            frame.anchors().into_iter().filter_map(|(r, c)| fold_clause([(enc.varmap.lit(r, c), true)])).collect();
        enc.push(units)?;
        for block in frame.column_blocks() {
            let clauses = symbreak::column_lex_clauses(&block, &enc.varmap)?;
            enc.push(clauses)?;
        }
        for block in frame.row_blocks() {
            let clauses = symbreak::row_lex_clauses(&block, &enc.varmap)?;
            enc.push(clauses)?;
        }
    }
    Ok(enc)
}

#[derive(Debug, Clone)]
pub struct CaseEncodeOptions {
    /// Rows of the window, counted from the top (80 for order 10).
    pub rows: usize,
    /// How many of the case's outside columns to append.
    pub include_outside: usize,
    /// 1-based block numbers whose non-initial columns are left out.
    pub omit_blocks: Vec<usize>,
    pub column_lex: bool,
    pub row_card: bool,
    pub col_card: bool,
}

impl CaseEncodeOptions {
    pub fn for_case(spec: &CaseSpec) -> CaseEncodeOptions {
        CaseEncodeOptions {
            rows: spec.window_rows(),
            include_outside: spec.outside_rows.len().min(5),
            omit_blocks: Vec::new(),
            column_lex: true,
            row_card: false,
            col_card: false,
        }
    }
}

/// Window columns of a case: kept inside columns, then the outside columns.
pub fn case_columns(spec: &CaseSpec, opts: &CaseEncodeOptions) -> Result<Vec<usize>, EncodeError> {
    let mut omitted = vec![false; spec.inside_col_count()];
    for &b in &opts.omit_blocks {
        let range = spec.blocks.get(b.wrapping_sub(1)).ok_or(EncodeError::NoSuchBlock(b))?;
        for k in range.clone() {
            if k >= spec.initial_col_count {
                omitted[k] = true;
            }
        }
    }
    let mut cols: Vec<usize> = (0..spec.inside_col_count()).filter(|&k| !omitted[k]).collect();
    let outside = opts.include_outside.min(spec.outside_rows.len());
    cols.extend((0..outside).map(|t| spec.inside_col_count() + t));
    Ok(cols)
}

/// The window of a case with every entry the case data determines.
pub fn case_window(spec: &CaseSpec, rows: usize, cols: &[usize]) -> PartialIncidenceMatrix {
    let top = spec.top_rows();
    let inside = spec.inside_col_count();
    let middle = top..spec.window_rows();
    let mut w = PartialIncidenceMatrix::unknown(rows, cols.len()).expect("non-empty window");
    for (wc, &pc) in cols.iter().enumerate() {
        for r in 0..top {
            let cell = if pc < inside { spec.known_rows.get(r, pc) } else { Cell::Zero };
            w.set(r, wc, cell);
        }
        if pc < inside {
            if let Some(Some(extra)) = spec.column_rows.get(pc) {
                for r in top..rows {
                    // Within the window's middle band the column is fully known.
                    if middle.contains(&r) {
                        w.set(r, wc, Cell::from_bool(extra.contains(&r)));
                    }
                }
            }
        } else {
            let r = spec.outside_rows[pc - inside];
            if r < rows {
                w.set(r, wc, Cell::One);
            }
        }
    }
    w
}

/// Column blocks of a case: non-initial columns owned by the same known row,
/// ordered within the rows where they can meet a reference first-band column.
pub fn case_column_blocks(spec: &CaseSpec, vm: &VarMap) -> Vec<ColumnBlock> {
    let top = spec.top_rows();
    let window_rows = vm.rows();
    let mut out = Vec::new();
    for i in 0..top {
        let cols: Vec<usize> = (0..vm.cols())
            .filter(|&wc| {
                let pc = vm.col_label(wc);
                pc >= spec.initial_col_count && pc < spec.inside_col_count() && spec.known_rows.get(i, pc) == Cell::One
            })
            .collect();
        if cols.len() < 2 {
            continue;
        }
        // Reference: the first fully known first-band column avoiding row i.
        let reference = (0..spec.first_band()).find(|&k| {
            spec.known_rows.get(i, k) == Cell::Zero
                && spec.column_rows.get(k).is_some_and(Option::is_some)
                && spec.window_rows() <= window_rows
        });
        let Some(k) = reference else { continue };
        let Some(wk) = (0..vm.cols()).find(|&wc| vm.col_label(wc) == k) else {
            continue;
        };
        let row_i_ones: Vec<usize> = vm.window().ones_in_row(i);
        let witness_rows: Vec<usize> = vm
            .window()
            .ones_in_col(wk)
            .into_iter()
            .filter(|&r| r >= top)
            .filter(|&r| !row_i_ones.iter().any(|&c| vm.window().get(r, c) == Cell::One))
            .collect();
        if !witness_rows.is_empty() {
            out.push(ColumnBlock { cols, witness_rows });
        }
    }
    out
}

/// Incidence constraints for a starting case over its first `opts.rows` rows.
///
/// Row at-least-once clauses are emitted only for known rows whose support
/// lies entirely inside the window, and column clauses only for first-band
/// columns that are fully known in the window.
pub fn encode_case(spec: &CaseSpec, opts: &CaseEncodeOptions) -> Result<PlaneEncoding, EncodeError> {
    let max = spec.params.side();
    if opts.rows > max || opts.rows < spec.top_rows() {
        return Err(EncodeError::TooManyRows { got: opts.rows, max });
    }
    let cols = case_columns(spec, opts)?;
    let window = case_window(spec, opts.rows, &cols);
    let vm = VarMap::with_labels(window, cols.clone());
    let mut enc = PlaneEncoding::empty(vm);
    let (rows, width) = (opts.rows, cols.len());
    let top = spec.top_rows();

    let clauses = encode_at_most_once_rows(&enc.varmap, 0..rows, 0..width)?;
    enc.push(clauses)?;

    for i in 0..top {
        let support = spec.row_support(i);
        if support.iter().all(|k| cols.contains(k)) {
            let clauses = encode_at_least_once_rows(&enc.varmap, i, top..rows)?;
            enc.push(clauses)?;
        }
    }
    for k in 0..spec.first_band() {
        let Some(wk) = cols.iter().position(|&c| c == k) else {
            continue;
        };
        if rows >= spec.window_rows() && enc.varmap.is_col_known(wk) {
            let targets: Vec<usize> = (0..width).filter(|&wc| cols[wc] >= spec.first_band()).collect();
            let clauses = encode_at_least_once_cols(&enc.varmap, wk, targets)?;
            enc.push(clauses)?;
        }
    }

    let weight = spec.params.row_weight();
    if opts.row_card {
        for r in top..rows {
            let cells: Vec<(usize, usize)> = (0..width).map(|c| (r, c)).collect();
            let clauses = cells_cardinality(&mut enc.formula, &enc.varmap, &cells, weight.min(width), false)?;
            enc.push(clauses)?;
        }
    }
    if opts.col_card {
        let full_middle = rows == spec.window_rows();
        for wc in 0..width {
            let pc = cols[wc];
            if enc.varmap.is_col_known(wc) || pc < spec.first_band() {
                continue;
            }
            let cells: Vec<(usize, usize)> = (top..rows).map(|r| (r, wc)).collect();
            let k = if pc < spec.inside_col_count() { spec.col_params[pc - spec.first_band()] } else { 0 };
            // For order 10 the middle band of a column with k top Ones holds 8 - 2k.
            let clauses = if spec.params.order() == 10 && full_middle && pc < spec.inside_col_count() && k <= 4 {
                cells_cardinality(&mut enc.formula, &enc.varmap, &cells, 8 - 2 * k, true)?
            } else if rows == max {
                let budget = weight.checked_sub(k).ok_or_else(|| {
                    EncodeError::Contradiction(format!("column {} has more than {weight} ones", pc + 1))
                })?;
                cells_cardinality(&mut enc.formula, &enc.varmap, &cells, budget, true)?
            } else {
                let budget = weight.saturating_sub(k).min(cells.len());
                cells_cardinality(&mut enc.formula, &enc.varmap, &cells, budget, false)?
            };
            enc.push(clauses)?;
        }
    }
    if opts.column_lex {
        for block in case_column_blocks(spec, &enc.varmap) {
            let clauses = symbreak::column_lex_clauses(&block, &enc.varmap)?;
            enc.push(clauses)?;
        }
    }
    Ok(enc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_internal, SolveResult, SolverConfig};

    fn all_unknown(rows: usize, cols: usize) -> VarMap {
        VarMap::new(PartialIncidenceMatrix::unknown(rows, cols).unwrap())
    }

    #[test]
    fn varmap_is_row_major_and_skips_known() {
        let mut w = PartialIncidenceMatrix::unknown(2, 3).unwrap();
        w.set(0, 1, Cell::One);
        let vm = VarMap::new(w);
        assert_eq!(vm.var_count(), 5);
        assert_eq!(vm.var(0, 0), Some(1));
        assert_eq!(vm.var(0, 1), None);
        assert_eq!(vm.var(0, 2), Some(2));
        assert_eq!(vm.cell_of(3), Some((1, 0)));
        assert_eq!(vm.cell_of(0), None);
        let f = CnfFormula::new(6);
        assert_eq!(vm.to_map_text(&f).lines().last(), Some("aux 6"));
        assert_eq!(vm.to_map_text(&f).lines().next(), Some("v 1 = p 1 1"));
    }

    #[test]
    fn at_most_once_2x2() {
        let vm = all_unknown(2, 2);
        let c = encode_at_most_once_rows(&vm, 0..2, 0..2).unwrap();
        assert_eq!(c, vec![vec![-1, -2, -3, -4]]);
    }

    #[test]
    fn at_most_once_7x7_count() {
        let vm = all_unknown(7, 7);
        assert_eq!(encode_at_most_once_rows(&vm, 0..7, 0..7).unwrap().len(), 441);
        let mut rows = encode_at_most_once_rows(&vm, 0..7, 0..7).unwrap();
        let mut cols = encode_at_most_once_cols(&vm, 0..7, 0..7).unwrap();
        for c in rows.iter_mut().chain(cols.iter_mut()) {
            c.sort();
        }
        rows.sort();
        cols.sort();
        assert_eq!(rows, cols);
    }

    #[test]
    fn at_most_once_folds_known_ones() {
        let mut w = PartialIncidenceMatrix::unknown(2, 2).unwrap();
        w.set(0, 0, Cell::One);
        w.set(0, 1, Cell::One);
        let vm = VarMap::new(w);
        let c = encode_at_most_once_rows(&vm, 0..2, 0..2).unwrap();
        assert_eq!(c, vec![vec![-1, -2]]);
        let mut bad = PartialIncidenceMatrix::filled(2, 2, Cell::One).unwrap();
        bad.set(1, 1, Cell::One);
        assert!(matches!(encode_at_most_once_rows(&VarMap::new(bad), 0..2, 0..2), Err(EncodeError::Contradiction(_))));
    }

    #[test]
    fn at_least_once_rows() {
        let mut w = PartialIncidenceMatrix::unknown(10, 5).unwrap();
        for c in 0..5 {
            w.set(0, c, Cell::from_bool(c < 3));
        }
        let vm = VarMap::new(w);
        let c = encode_at_least_once_rows(&vm, 0, [8]).unwrap();
        let expected: Vec<Lit> = (0..3).map(|k| vm.var(8, k).unwrap() as Lit).collect();
        assert_eq!(c, vec![expected]);
        assert!(matches!(encode_at_least_once_rows(&vm, 1, [8]), Err(EncodeError::RowNotKnown(2))));
        let mut empty = PartialIncidenceMatrix::unknown(3, 2).unwrap();
        empty.set(0, 0, Cell::Zero);
        empty.set(0, 1, Cell::Zero);
        assert!(matches!(encode_at_least_once_rows(&VarMap::new(empty), 0, [1]), Err(EncodeError::EmptySupport(1))));
    }

    #[test]
    fn at_least_once_cols_skips_known_targets() {
        let mut w = PartialIncidenceMatrix::unknown(4, 4).unwrap();
        for r in 0..4 {
            w.set(r, 0, Cell::from_bool(r < 2));
            w.set(r, 1, Cell::from_bool(r >= 2));
        }
        let vm = VarMap::new(w);
        let c = encode_at_least_once_cols(&vm, 0, 0..4).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0], vec![vm.var(0, 2).unwrap() as Lit, vm.var(1, 2).unwrap() as Lit]);
    }

    /// Primary assignments that extend to a model, checked with the solver.
    fn project_models(f: &CnfFormula, primary: usize) -> std::collections::BTreeSet<Vec<bool>> {
        let mut out = std::collections::BTreeSet::new();
        for bits in 0u64..1 << primary {
            let assumptions: Vec<Lit> =
                (0..primary).map(|i| if bits >> i & 1 == 1 { i as Lit + 1 } else { -(i as Lit + 1) }).collect();
            if solve_internal(f, &assumptions, SolverConfig::unbounded()).unwrap().is_sat() {
                out.insert(assumptions.iter().map(|&l| l > 0).collect());
            }
        }
        out
    }

    #[test]
    fn column_cardinality_three_cells_one_hot() {
        let vm = all_unknown(3, 1);
        let mut f = CnfFormula::new(vm.var_count());
        let c = encode_column_cardinality(&mut f, &vm, 0, 1, 0..3).unwrap();
        f.extend_clauses(c).unwrap();
        let models = project_models(&f, 3);
        let expected: std::collections::BTreeSet<Vec<bool>> =
            [vec![true, false, false], vec![false, true, false], vec![false, false, true]].into_iter().collect();
        assert_eq!(models, expected);
    }

    #[test]
    fn column_cardinality_zero_and_too_large() {
        let vm = all_unknown(3, 1);
        let mut f = CnfFormula::new(3);
        assert_eq!(encode_column_cardinality(&mut f, &vm, 0, 0, 0..3).unwrap(), vec![vec![-1], vec![-2], vec![-3]]);
        assert!(matches!(
            encode_column_cardinality(&mut f, &vm, 0, 4, 0..3),
            Err(EncodeError::TargetTooLarge { target: 4, band: 3 })
        ));
    }

    #[test]
    fn cardinality_matches_binomial_sets() {
        // Exhaustive check for small bands; the full-size sweep lives in the integration tests.
        for n in 1..=6usize {
            for k in 0..=n {
                let lits: Vec<Lit> = (1..=n as Lit).collect();
                let mut f = CnfFormula::new(n as u32);
                let c = card::exactly(&mut f, &lits, k);
                f.extend_clauses(c).unwrap();
                let models = project_models(&f, n);
                let expected: std::collections::BTreeSet<Vec<bool>> = (0u64..1 << n)
                    .filter(|b| b.count_ones() as usize == k)
                    .map(|b| (0..n).map(|i| b >> i & 1 == 1).collect())
                    .collect();
                assert_eq!(models, expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn order_two_plane_is_found_and_valid() {
        for canonical in [Canonical::None, Canonical::Frame, Canonical::Normalized] {
            let opts = FullPlaneOptions { canonical, ..Default::default() };
            let enc = encode_full_plane(PlaneParams::new(2), opts).unwrap();
            let SolveResult::Sat(model) = solve_internal(&enc.formula, &[], SolverConfig::unbounded()).unwrap() else {
                panic!("order 2 must be satisfiable");
            };
            let m = enc.varmap.decode(&model);
            assert!(m.validate_partial().is_empty());
            for r in 0..7 {
                assert_eq!(m.ones_in_row(r).len(), 3);
            }
        }
    }

    #[test]
    fn frame_window_is_consistent() {
        for n in 2..=7 {
            let frame = Frame { n };
            let mut w = frame.known_window();
            assert!(w.validate_partial().is_empty(), "n={n}");
            for (r, c) in frame.anchors() {
                w.set(r, c, Cell::One);
            }
            assert!(w.validate_partial().is_empty(), "n={n}");
        }
    }

    #[test]
    fn desarguesian_plane_satisfies_frame_encoding_after_relabeling() {
        // The Fano plane in frame form satisfies every clause.
        let enc = encode_full_plane(
            PlaneParams::new(2),
            FullPlaneOptions { canonical: Canonical::None, ..Default::default() },
        )
        .unwrap();
        let rows: Vec<Vec<u8>> =
            (0..7).map(|i| (0..7).map(|j| u8::from([1, 2, 4].contains(&((j + 7 - i) % 7)))).collect()).collect();
        let fano = PartialIncidenceMatrix::from_bits(&rows).unwrap();
        let mut model = enc.varmap.assignment_of(&fano);
        // Auxiliary counter variables: solve with the primary part fixed.
        let units: Vec<Lit> =
            model.iter().enumerate().map(|(i, &b)| if b { i as Lit + 1 } else { -(i as Lit + 1) }).collect();
        let result = solve_internal(&enc.formula, &units, SolverConfig::unbounded()).unwrap();
        assert!(result.is_sat());
        model.clear();
    }
}
