//! Finite permutation groups stored as explicit element lists.
//!
//! Groups here are small (at most a few thousand elements), so closure is a
//! plain breadth-first product search and orbits are enumerated directly.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::matrix::{Cell, PartialIncidenceMatrix};
use crate::perm::{PermError, Permutation};

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group exceeds the size cap of {0} elements")]
    TooLarge(usize),
    #[error("generator degrees disagree: expected {expected:?}, got {got:?}")]
    Degree { expected: (usize, usize), got: (usize, usize) },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("symmetry does not fix the known entries: {0}")]
    NotFixing(String),
    #[error("group action maps position {0} outside the scope")]
    OutsideScope(usize),
}

/// Anything that can be multiplied; used by the generic closure.
pub trait GroupElement: Clone + Ord + Hash {
    /// `self ∘ other`.
    fn then_after(&self, other: &Self) -> Self;
}

impl GroupElement for Permutation {
    fn then_after(&self, other: &Self) -> Self {
        self.compose(other).expect("closure elements share a degree")
    }
}

/// Smallest set containing `identity` and `gens` closed under products,
/// sorted ascending.
pub fn closure_of<T: GroupElement>(identity: T, gens: &[T], cap: usize) -> Result<Vec<T>, GroupError> {
    let mut seen: HashSet<T> = HashSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity];
    while let Some(e) = frontier.pop() {
        for g in gens {
            let h = g.then_after(&e);
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return Err(GroupError::TooLarge(cap));
                }
                frontier.push(h);
            }
        }
    }
    let mut out: Vec<T> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Paired row and column permutations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixSymmetry {
    pub row_perm: Permutation,
    pub col_perm: Permutation,
}

impl GroupElement for MatrixSymmetry {
    fn then_after(&self, other: &Self) -> Self {
        self.compose(other).expect("closure elements share degrees")
    }
}

impl MatrixSymmetry {
    pub fn new(row_perm: Permutation, col_perm: Permutation) -> Self {
        MatrixSymmetry { row_perm, col_perm }
    }

    pub fn identity(rows: usize, cols: usize) -> Self {
        MatrixSymmetry::new(Permutation::identity(rows), Permutation::identity(cols))
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.row_perm.degree(), self.col_perm.degree())
    }

    pub fn is_identity(&self) -> bool {
        self.row_perm.is_identity() && self.col_perm.is_identity()
    }

    pub fn compose(&self, other: &MatrixSymmetry) -> Result<MatrixSymmetry, PermError> {
        Ok(MatrixSymmetry {
            row_perm: self.row_perm.compose(&other.row_perm)?,
            col_perm: self.col_perm.compose(&other.col_perm)?,
        })
    }

    pub fn inverse(&self) -> MatrixSymmetry {
        MatrixSymmetry::new(self.row_perm.inverse(), self.col_perm.inverse())
    }

    /// Moves entry `(i, k)` to `(row_perm(i), col_perm(k))`.
    pub fn apply(&self, m: &PartialIncidenceMatrix) -> PartialIncidenceMatrix {
        let mut out = m.clone();
        for i in 0..m.rows() {
            for k in 0..m.cols() {
                out.set(self.row_perm.apply(i), self.col_perm.apply(k), m.get(i, k));
            }
        }
        out
    }

    pub fn fixes(&self, m: &PartialIncidenceMatrix) -> bool {
        self.degrees() == (m.rows(), m.cols()) && self.apply(m) == *m
    }

    pub fn parse(rows: usize, cols: usize, line: &str) -> Result<MatrixSymmetry, GroupError> {
        let bad = |msg: &str| GroupError::Parse { line: 0, msg: msg.to_string() };
        let (r, c) = line.split_once('|').ok_or_else(|| bad("missing '|'"))?;
        let r = r.trim().strip_prefix("rows:").ok_or_else(|| bad("missing 'rows:'"))?;
        let c = c.trim().strip_prefix("cols:").ok_or_else(|| bad("missing 'cols:'"))?;
        Ok(MatrixSymmetry::new(Permutation::parse_cycles(rows, r)?, Permutation::parse_cycles(cols, c)?))
    }
}

impl fmt::Display for MatrixSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rows: {} | cols: {}", self.row_perm, self.col_perm)
    }
}

/// A finite group of matrix symmetries with its generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryGroup {
    rows: usize,
    cols: usize,
    elements: Vec<MatrixSymmetry>,
    generators: Vec<MatrixSymmetry>,
}

impl SymmetryGroup {
    pub fn trivial(rows: usize, cols: usize) -> Self {
        SymmetryGroup { rows, cols, elements: vec![MatrixSymmetry::identity(rows, cols)], generators: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Elements in ascending order (row image table, then column image table).
    pub fn elements(&self) -> &[MatrixSymmetry] {
        &self.elements
    }

    pub fn generators(&self) -> &[MatrixSymmetry] {
        &self.generators
    }

    pub fn contains(&self, s: &MatrixSymmetry) -> bool {
        self.elements.binary_search(s).is_ok()
    }

    pub fn non_identity(&self) -> impl Iterator<Item = &MatrixSymmetry> {
        self.elements.iter().filter(|e| !e.is_identity())
    }

    /// Subgroup of elements satisfying `keep` (the caller guarantees closure).
    pub fn filter<F: Fn(&MatrixSymmetry) -> bool>(&self, keep: F) -> SymmetryGroup {
        let elements: Vec<MatrixSymmetry> = self.elements.iter().filter(|e| keep(e)).cloned().collect();
        SymmetryGroup { rows: self.rows, cols: self.cols, generators: elements.clone(), elements }
    }

    /// One `rows: .. | cols: ..` line per element.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.elements {
            s.push_str(&e.to_string());
            s.push('\n');
        }
        s
    }

    /// Reads a group file; the listed elements are taken as generators and closed.
    pub fn from_text(text: &str, rows: usize, cols: usize) -> Result<SymmetryGroup, GroupError> {
        let mut gens = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let s = MatrixSymmetry::parse(rows, cols, line).map_err(|e| match e {
                GroupError::Parse { msg, .. } => GroupError::Parse { line: idx + 1, msg },
                other => other,
            })?;
            gens.push(s);
        }
        closure(rows, cols, &gens, DEFAULT_GROUP_CAP)
    }

    /// Element permutations of the positions listed in `cells`.
    ///
    /// Position `p` holding cell `(r, c)` is sent to the position of
    /// `(row_perm(r), col_perm(c))`; every image must stay inside `cells`.
    pub fn cell_actions(&self, cells: &[(usize, usize)]) -> Result<Vec<Permutation>, GroupError> {
        let index: std::collections::HashMap<(usize, usize), usize> =
            cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        self.elements
            .iter()
            .map(|e| {
                let images = cells
                    .iter()
                    .enumerate()
                    .map(|(p, &(r, c))| {
                        index
                            .get(&(e.row_perm.apply(r), e.col_perm.apply(c)))
                            .copied()
                            .ok_or(GroupError::OutsideScope(p))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Permutation::from_images(images)?)
            })
            .collect()
    }
}

/// Closes `generators` under composition.
pub fn closure(
    rows: usize,
    cols: usize,
    generators: &[MatrixSymmetry],
    cap: usize,
) -> Result<SymmetryGroup, GroupError> {
    for g in generators {
        if g.degrees() != (rows, cols) {
            return Err(GroupError::Degree { expected: (rows, cols), got: g.degrees() });
        }
    }
    let elements = closure_of(MatrixSymmetry::identity(rows, cols), generators, cap)?;
    Ok(SymmetryGroup { rows, cols, elements, generators: generators.to_vec() })
}

/// All paired row/column permutations fixing every entry of `m`.
///
/// Rows outside `restrict_rows` stay fixed. Each row permutation that admits
/// a column completion contributes exactly one element: columns with equal
/// content are matched in ascending index order. `Unknown` is treated as a
/// third symbol that must map to itself.
pub fn matrix_symmetries(
    m: &PartialIncidenceMatrix,
    restrict_rows: Option<&[usize]>,
    cap: usize,
) -> Result<SymmetryGroup, GroupError> {
    let movable: Vec<usize> = match restrict_rows {
        Some(rows) => rows.to_vec(),
        None => (0..m.rows()).collect(),
    };
    let mut search = RowSearch {
        m,
        movable: &movable,
        images: (0..m.rows()).collect(),
        used: vec![false; movable.len()],
        found: Vec::new(),
        cap,
    };
    search.extend(0)?;
    let mut elements = search.found;
    elements.sort();
    Ok(SymmetryGroup { rows: m.rows(), cols: m.cols(), generators: elements.clone(), elements })
}

struct RowSearch<'a> {
    m: &'a PartialIncidenceMatrix,
    movable: &'a [usize],
    images: Vec<usize>,
    used: Vec<bool>,
    found: Vec<MatrixSymmetry>,
    cap: usize,
}

impl RowSearch<'_> {
    fn extend(&mut self, depth: usize) -> Result<(), GroupError> {
        if !self.consistent(depth) {
            return Ok(());
        }
        if depth == self.movable.len() {
            if let Some(cols) = canonical_columns(self.m, &self.images) {
                let rows = Permutation::from_images(self.images.clone())?;
                self.found.push(MatrixSymmetry::new(rows, cols));
                if self.found.len() > self.cap {
                    return Err(GroupError::TooLarge(self.cap));
                }
            }
            return Ok(());
        }
        let src = self.movable[depth];
        for t in 0..self.movable.len() {
            if self.used[t] {
                continue;
            }
            self.used[t] = true;
            self.images[src] = self.movable[t];
            self.extend(depth + 1)?;
            self.used[t] = false;
        }
        self.images[src] = src;
        Ok(())
    }

    /// Column signatures over the rows mapped so far (plus all fixed rows)
    /// must agree as multisets.
    fn consistent(&self, depth: usize) -> bool {
        let mut domain: Vec<usize> = self.movable[..depth].to_vec();
        let fixed: Vec<usize> = (0..self.m.rows()).filter(|r| !self.movable.contains(r)).collect();
        domain.extend(fixed);
        let mut before: Vec<Vec<Cell>> =
            (0..self.m.cols()).map(|k| domain.iter().map(|&i| self.m.get(i, k)).collect()).collect();
        let mut after: Vec<Vec<Cell>> =
            (0..self.m.cols()).map(|k| domain.iter().map(|&i| self.m.get(self.images[i], k)).collect()).collect();
        before.sort();
        after.sort();
        before == after
    }
}

/// The order-preserving column matching for a full row permutation, if any.
fn canonical_columns(m: &PartialIncidenceMatrix, row_images: &[usize]) -> Option<Permutation> {
    // Column k is sent to a column k' whose content equals column k moved by the rows.
    let moved: Vec<Vec<Cell>> = (0..m.cols())
        .map(|k| {
            let mut v = vec![Cell::Unknown; m.rows()];
            for i in 0..m.rows() {
                v[row_images[i]] = m.get(i, k);
            }
            v
        })
        .collect();
    let current: Vec<Vec<Cell>> = (0..m.cols()).map(|k| m.col(k)).collect();
    let mut taken = vec![false; m.cols()];
    let mut images = vec![0; m.cols()];
    for k in 0..m.cols() {
        let target = (0..m.cols()).find(|&t| !taken[t] && current[t] == moved[k])?;
        taken[target] = true;
        images[k] = target;
    }
    Permutation::from_images(images).ok()
}

/// A symmetry's action on the unknown cells of a larger region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellPermutation {
    /// Unknown cells in row-major order.
    pub cells: Vec<(usize, usize)>,
    /// Position `p` of `cells` is sent to position `perm.apply(p)`.
    pub perm: Permutation,
    pub row_perm: Permutation,
}

impl CellPermutation {
    pub fn image_of(&self, cell: (usize, usize)) -> Option<(usize, usize)> {
        let p = self.cells.iter().position(|&c| c == cell)?;
        Some(self.cells[self.perm.apply(p)])
    }
}

/// Extends a symmetry of the first `s.row_perm.degree()` rows of `region` to
/// all of its rows.
///
/// The remaining rows are matched by their known entries: row `r` goes to the
/// row whose known pattern equals row `r`'s pattern moved by the column
/// permutation; ties go to the lowest free index.
pub fn extend_to_region(s: &MatrixSymmetry, region: &PartialIncidenceMatrix) -> Result<CellPermutation, GroupError> {
    let (top, cols) = s.degrees();
    if cols != region.cols() || top > region.rows() {
        return Err(GroupError::Degree { expected: (top, region.cols()), got: (region.rows(), region.cols()) });
    }
    let mut top_block = PartialIncidenceMatrix::unknown(top, cols).map_err(|e| GroupError::NotFixing(e.to_string()))?;
    for i in 0..top {
        for k in 0..cols {
            top_block.set(i, k, region.get(i, k));
        }
    }
    if !s.fixes(&top_block) {
        return Err(GroupError::NotFixing("leading rows change".into()));
    }
    let moved_pattern = |r: usize| -> Vec<Cell> {
        let mut v = vec![Cell::Unknown; cols];
        for k in 0..cols {
            v[s.col_perm.apply(k)] = region.get(r, k);
        }
        v
    };
    let mut row_images: Vec<usize> = (0..top).map(|i| s.row_perm.apply(i)).collect();
    let mut taken = vec![false; region.rows()];
    for r in top..region.rows() {
        let target = moved_pattern(r);
        // Rows with equal known patterns are matched in ascending index order.
        let image = (top..region.rows())
            .find(|&t| !taken[t] && region.row(t) == target.as_slice())
            .ok_or_else(|| GroupError::NotFixing(format!("row {} has no image", r + 1)))?;
        taken[image] = true;
        row_images.push(image);
    }
    let row_perm = Permutation::from_images(row_images)?;
    let cells: Vec<(usize, usize)> = (0..region.rows())
        .flat_map(|r| (0..cols).map(move |k| (r, k)))
        .filter(|&(r, k)| region.get(r, k) == Cell::Unknown)
        .collect();
    let ext = MatrixSymmetry::new(row_perm.clone(), s.col_perm.clone());
    let group = SymmetryGroup { rows: region.rows(), cols, elements: vec![ext], generators: Vec::new() };
    let perm = group.cell_actions(&cells)?.remove(0);
    Ok(CellPermutation { cells, perm, row_perm })
}

/// Image of an assignment: the value at position `p` moves to `g(p)`.
pub fn act<T: Clone>(g: &Permutation, assignment: &[T]) -> Vec<T> {
    let mut out = assignment.to_vec();
    for (p, v) in assignment.iter().enumerate() {
        out[g.apply(p)] = v.clone();
    }
    out
}

/// `{ g(a) : g in group }`.
pub fn orbit<T: Clone + Ord>(group: &[Permutation], assignment: &[T]) -> BTreeSet<Vec<T>> {
    group.iter().map(|g| act(g, assignment)).collect()
}

/// Elements fixing `assignment`.
pub fn stabilizer<'g, T: Clone + Eq>(group: &'g [Permutation], assignment: &[T]) -> Vec<&'g Permutation> {
    group.iter().filter(|g| act(g, assignment) == assignment).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(rows: usize, cols: usize, r: &str, c: &str) -> MatrixSymmetry {
        MatrixSymmetry::new(Permutation::parse_cycles(rows, r).unwrap(), Permutation::parse_cycles(cols, c).unwrap())
    }

    #[test]
    fn closure_of_s3() {
        let gens = [sym(3, 1, "(1,2)", "()"), sym(3, 1, "(1,2,3)", "()")];
        let g = closure(3, 1, &gens, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.size(), 6);
        assert!(g.elements()[0].is_identity());
        assert_eq!(closure(3, 1, &[], DEFAULT_GROUP_CAP).unwrap().size(), 1);
    }

    #[test]
    fn closure_cap_and_degree_errors() {
        let gens = [sym(4, 1, "(1,2)", "()"), sym(4, 1, "(1,2,3,4)", "()")];
        assert_eq!(closure(4, 1, &gens, 10), Err(GroupError::TooLarge(10)));
        assert!(matches!(closure(3, 1, &gens, 10), Err(GroupError::Degree { .. })));
    }

    #[test]
    fn closure_is_idempotent() {
        let gens = [sym(4, 2, "(1,2)(3,4)", "(1,2)"), sym(4, 2, "(1,3)", "()")];
        let g = closure(4, 2, &gens, DEFAULT_GROUP_CAP).unwrap();
        let again = closure(4, 2, g.elements(), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(again.elements(), g.elements());
    }

    #[test]
    fn identity_matrix_symmetries_brute_force() {
        let m = PartialIncidenceMatrix::identity(2).unwrap();
        let g = matrix_symmetries(&m, None, DEFAULT_GROUP_CAP).unwrap();
        let mut brute = Vec::new();
        for r in ["()", "(1,2)"] {
            for c in ["()", "(1,2)"] {
                let s = sym(2, 2, r, c);
                if s.fixes(&m) {
                    brute.push(s);
                }
            }
        }
        brute.sort();
        assert_eq!(g.elements(), brute.as_slice());
        assert_eq!(g.size(), 2);
    }

    #[test]
    fn rigid_matrix_has_trivial_group() {
        let m = PartialIncidenceMatrix::from_bits(&[vec![1, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(matrix_symmetries(&m, None, DEFAULT_GROUP_CAP).unwrap().size(), 1);
    }

    #[test]
    fn fano_automorphism_group_has_168_elements() {
        let rows: Vec<Vec<u8>> =
            (0..7).map(|i| (0..7).map(|j| u8::from([1, 2, 4].contains(&((j + 7 - i) % 7)))).collect()).collect();
        let m = PartialIncidenceMatrix::from_bits(&rows).unwrap();
        let g = matrix_symmetries(&m, None, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.size(), 168);
        assert!(g.elements().iter().all(|e| e.fixes(&m)));
        assert_eq!(closure(7, 7, g.elements(), DEFAULT_GROUP_CAP).unwrap().size(), 168);
    }

    #[test]
    fn duplicate_columns_complete_in_index_order() {
        // Columns 1,2 identical; swapping rows forces the column swap 1,2 <-> 3,4.
        let m = PartialIncidenceMatrix::from_bits(&[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]).unwrap();
        let g = matrix_symmetries(&m, None, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.size(), 2);
        assert_eq!(g.elements()[1].to_string(), "rows: (1,2) | cols: (1,3)(2,4)");
    }

    #[test]
    fn group_text_round_trip() {
        let gens = [sym(4, 3, "(1,2)", "(2,3)"), sym(4, 3, "(3,4)", "()")];
        let g = closure(4, 3, &gens, DEFAULT_GROUP_CAP).unwrap();
        let back = SymmetryGroup::from_text(&g.to_text(), 4, 3).unwrap();
        assert_eq!(back.elements(), g.elements());
        assert!(SymmetryGroup::from_text("rows: (1,2)\n", 2, 2).is_err());
    }

    #[test]
    fn extension_of_identity_is_identity() {
        let mut region = PartialIncidenceMatrix::unknown(4, 3).unwrap();
        for k in 0..3 {
            region.set(0, k, Cell::from_bool(k == 0));
            region.set(1, k, Cell::from_bool(k == 1));
        }
        let ext = extend_to_region(&MatrixSymmetry::identity(2, 3), &region).unwrap();
        assert!(ext.perm.is_identity());
        assert_eq!(ext.cells.len(), 6);
    }

    #[test]
    fn row_swap_moves_cells_between_swapped_columns() {
        // Rows 1,2 known; rows 3..4 unknown. Swapping rows 1,2 swaps columns 1,2.
        let mut region = PartialIncidenceMatrix::unknown(4, 3).unwrap();
        for (k, (a, b)) in [(1, 0), (0, 1), (0, 0)].into_iter().enumerate() {
            region.set(0, k, Cell::from_bool(a == 1));
            region.set(1, k, Cell::from_bool(b == 1));
        }
        let s = sym(2, 3, "(1,2)", "(1,2)");
        let ext = extend_to_region(&s, &region).unwrap();
        assert!(ext.row_perm.apply(2) == 2 && ext.row_perm.apply(3) == 3);
        assert_eq!(ext.image_of((2, 0)), Some((2, 1)));
        assert_eq!(ext.image_of((3, 2)), Some((3, 2)));
        let bad = sym(2, 3, "(1,2)", "()");
        assert!(extend_to_region(&bad, &region).is_err());
    }

    #[test]
    fn extension_matches_rows_by_known_pattern() {
        // Rows 3,4 carry known entries in columns 1,2 that swap under the column swap.
        let mut region = PartialIncidenceMatrix::unknown(4, 3).unwrap();
        for (k, (a, b)) in [(1, 0), (0, 1), (0, 0)].into_iter().enumerate() {
            region.set(0, k, Cell::from_bool(a == 1));
            region.set(1, k, Cell::from_bool(b == 1));
        }
        region.set(2, 0, Cell::One);
        region.set(2, 1, Cell::Zero);
        region.set(3, 0, Cell::Zero);
        region.set(3, 1, Cell::One);
        let ext = extend_to_region(&sym(2, 3, "(1,2)", "(1,2)"), &region).unwrap();
        assert_eq!(ext.row_perm.to_string(), "(1,2)(3,4)");
        assert_eq!(ext.image_of((2, 2)), Some((3, 2)));
    }

    #[test]
    fn orbit_examples() {
        let id = vec![Permutation::identity(2)];
        assert_eq!(orbit(&id, &[true, false]).len(), 1);
        let s2 = vec![Permutation::identity(2), Permutation::swap(2, 0, 1)];
        let o = orbit(&s2, &[1u8, 0]);
        assert_eq!(o.into_iter().collect::<Vec<_>>(), vec![vec![0, 1], vec![1, 0]]);
        // S3 on three distinct labels: trivial stabilizer, orbit of size 6.
        let gens = [Permutation::swap(3, 0, 1), Permutation::from_images(vec![1, 2, 0]).unwrap()];
        let s3 = closure_of(Permutation::identity(3), &gens, 100).unwrap();
        let a = [0u8, 1, 2];
        assert_eq!(orbit(&s3, &a).len(), 6);
        assert_eq!(stabilizer(&s3, &a).len(), 1);
    }
}
