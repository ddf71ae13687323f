//! Symmetry-breaking clauses.
//!
//! Three mechanisms:
//!
//! - column-lex ordering of interchangeable columns, read through a set of
//!   witness rows in which every block column holds exactly one One;
//! - lex-leader constraints `L ≤lex φ(L)` for the symmetries of a region;
//! - the block method: first-block instantiations are labelled by orbit and
//!   every later block is kept from carrying a smaller label than block 1.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{CnfFormula, Lit};
use crate::encoder::{fold_clause, CellLit, VarMap};
use crate::group::{act, GroupError, MatrixSymmetry, SymmetryGroup};
use crate::matrix::Cell;
use crate::perm::Permutation;

#[derive(Debug, Error)]
pub enum SymbreakError {
    #[error("columns {0} and {1} differ outside the witness rows")]
    ColumnsDiffer(usize, usize),
    #[error("rows {0} and {1} differ outside the witness columns")]
    RowsDiffer(usize, usize),
    #[error("lex lists have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("lex lists are empty")]
    Empty,
    #[error("symmetry image {0} is not a permutation of the variable list")]
    NotPermutation(usize),
    #[error("cell ({0},{1}) is moved onto a determined cell")]
    OntoKnown(usize, usize),
    #[error("solution {0} lies in no orbit of the listed solutions")]
    Unreachable(usize),
    #[error("assignment has {got} values, scope has {expected}")]
    ScopeSize { expected: usize, got: usize },
    #[error("symmetry for block {0} sends a cell outside the first block")]
    OutsideBlock(usize),
    #[error("bad labelling manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Interchangeable columns, ordered by where they meet the witness rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnBlock {
    pub cols: Vec<usize>,
    pub witness_rows: Vec<usize>,
}

/// Interchangeable rows, ordered by where they meet the witness columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowBlock {
    pub rows: Vec<usize>,
    pub witness_cols: Vec<usize>,
}

fn lex_pairs(lines: &[usize], witnesses: &[usize], cell: impl Fn(usize, usize) -> CellLit) -> Vec<Vec<Lit>> {
    let mut out = Vec::new();
    for pair in lines.windows(2) {
        let (c, d) = (pair[0], pair[1]);
        for (a, &r) in witnesses.iter().enumerate() {
            for &s in &witnesses[..a] {
                // A One of `c` at witness `r` forbids a One of `d` at any earlier witness.
                if let Some(clause) = fold_clause([(cell(r, c), false), (cell(s, d), false)]) {
                    if !clause.is_empty() {
                        out.push(clause);
                    }
                }
            }
        }
    }
    out
}

/// `¬x ∨ ¬y` for `x` at `(r, c)` and `y` at `(r', c+1)` with `r'` above `r`
/// in witness order, for each adjacent pair of block columns.
pub fn column_lex_clauses(block: &ColumnBlock, vm: &VarMap) -> Result<Vec<Vec<Lit>>, SymbreakError> {
    let witness: BTreeSet<usize> = block.witness_rows.iter().copied().collect();
    if let Some(&first) = block.cols.first() {
        for &c in &block.cols[1..] {
            let differs = (0..vm.rows())
                .filter(|r| !witness.contains(r))
                .any(|r| vm.window().get(r, c) != vm.window().get(r, first));
            if differs {
                return Err(SymbreakError::ColumnsDiffer(first + 1, c + 1));
            }
        }
    }
    Ok(lex_pairs(&block.cols, &block.witness_rows, |r, c| vm.lit(r, c)))
}

/// Row analogue of [`column_lex_clauses`].
pub fn row_lex_clauses(block: &RowBlock, vm: &VarMap) -> Result<Vec<Vec<Lit>>, SymbreakError> {
    let witness: BTreeSet<usize> = block.witness_cols.iter().copied().collect();
    if let Some(&first) = block.rows.first() {
        for &r in &block.rows[1..] {
            let differs = (0..vm.cols())
                .filter(|c| !witness.contains(c))
                .any(|c| vm.window().get(r, c) != vm.window().get(first, c));
            if differs {
                return Err(SymbreakError::RowsDiffer(first + 1, r + 1));
            }
        }
    }
    Ok(lex_pairs(&block.rows, &block.witness_cols, |c, r| vm.lit(r, c)))
}

/// `xs ≤lex ys` (false < true) with `3n-2` clauses and `n-1` fresh variables.
///
/// `a_k` holds when the first `k` positions are equal.
pub fn lex_le_clauses(f: &mut CnfFormula, xs: &[Lit], ys: &[Lit]) -> Result<Vec<Vec<Lit>>, SymbreakError> {
    if xs.len() != ys.len() {
        return Err(SymbreakError::LengthMismatch(xs.len(), ys.len()));
    }
    let n = xs.len();
    if n == 0 {
        return Err(SymbreakError::Empty);
    }
    let aux: Vec<Lit> = (1..n).map(|_| f.fresh_var() as Lit).collect();
    let mut out = Vec::with_capacity(3 * n - 2);
    let guard = |k: usize| -> Option<Lit> { (k > 0).then(|| -aux[k - 1]) };
    for k in 0..n - 1 {
        let g = guard(k);
        let with = |mut c: Vec<Lit>| {
            c.extend(g);
            c
        };
        out.push(with(vec![-xs[k], ys[k]]));
        out.push(with(vec![-xs[k], aux[k]]));
        out.push(with(vec![ys[k], aux[k]]));
    }
    let mut last = vec![-xs[n - 1], ys[n - 1]];
    last.extend(guard(n - 1));
    out.push(last);
    Ok(out)
}

/// A variable list and its images under the symmetries of a region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexOrdering {
    pub var_list: Vec<Lit>,
    pub symmetry_images: Vec<Vec<Lit>>,
}

impl LexOrdering {
    /// Undetermined cells of `cells` in the given order; each group element
    /// sends the variable of cell `x` to the variable of its image cell.
    ///
    /// Elements acting as the identity on the list are skipped.
    pub fn from_group(
        vm: &VarMap,
        cells: &[(usize, usize)],
        group: &SymmetryGroup,
    ) -> Result<LexOrdering, SymbreakError> {
        Self::from_symmetries(vm, cells, group.non_identity())
    }

    /// As [`LexOrdering::from_group`], for symmetries given one by one.
    pub fn from_symmetries<'a>(
        vm: &VarMap,
        cells: &[(usize, usize)],
        symmetries: impl IntoIterator<Item = &'a MatrixSymmetry>,
    ) -> Result<LexOrdering, SymbreakError> {
        let cells: Vec<(usize, usize)> =
            cells.iter().copied().filter(|&(r, c)| vm.window().get(r, c) == Cell::Unknown).collect();
        let var_list: Vec<Lit> = cells.iter().map(|&(r, c)| vm.var(r, c).unwrap() as Lit).collect();
        let mut symmetry_images = Vec::new();
        for g in symmetries {
            let image = image_list(vm, &cells, g)?;
            if image != var_list {
                symmetry_images.push(image);
            }
        }
        Ok(LexOrdering { var_list, symmetry_images })
    }
}

fn image_list(vm: &VarMap, cells: &[(usize, usize)], g: &MatrixSymmetry) -> Result<Vec<Lit>, SymbreakError> {
    cells
        .iter()
        .map(|&(r, c)| {
            let (r2, c2) = (g.row_perm.apply(r), g.col_perm.apply(c));
            vm.var(r2, c2).map(|v| v as Lit).ok_or(SymbreakError::OntoKnown(r + 1, c + 1))
        })
        .collect()
}

/// One [`lex_le_clauses`] instance per symmetry image.
pub fn lex_leader_clauses(f: &mut CnfFormula, ord: &LexOrdering) -> Result<Vec<Vec<Lit>>, SymbreakError> {
    let sorted: Vec<Lit> = {
        let mut v = ord.var_list.clone();
        v.sort_unstable();
        v
    };
    let mut out = Vec::new();
    for (i, image) in ord.symmetry_images.iter().enumerate() {
        let mut s = image.clone();
        s.sort_unstable();
        if s != sorted {
            return Err(SymbreakError::NotPermutation(i + 1));
        }
        out.extend(lex_le_clauses(f, &ord.var_list, image)?);
    }
    Ok(out)
}

/// A map on scope assignments, such as a group element.
pub trait ScopeAction {
    fn apply(&self, assignment: &[bool]) -> Vec<bool>;
}

impl ScopeAction for Permutation {
    fn apply(&self, assignment: &[bool]) -> Vec<bool> {
        act(self, assignment)
    }
}

/// Orbit of `assignment` under the group generated by `actions`.
pub fn orbit_of<A: ScopeAction>(actions: &[A], assignment: &[bool]) -> BTreeSet<Vec<bool>> {
    let mut seen = BTreeSet::new();
    seen.insert(assignment.to_vec());
    let mut frontier = vec![assignment.to_vec()];
    while let Some(a) = frontier.pop() {
        for g in actions {
            let b = g.apply(&a);
            if !seen.contains(&b) {
                seen.insert(b.clone());
                frontier.push(b);
            }
        }
    }
    seen
}

pub fn stabilizer_size<A: ScopeAction>(actions: &[A], assignment: &[bool]) -> usize {
    actions.iter().filter(|g| g.apply(assignment) == assignment).count()
}

/// Puts interchangeable columns of a scope into column-lex order.
///
/// Columns are ranked by their values on the witness rows (a One on an
/// earlier witness row ranks first), then by all their values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColumnSorter {
    groups: Vec<SortGroup>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct SortGroup {
    /// Scope position of each column's cells, aligned by row.
    columns: Vec<Vec<usize>>,
    /// Indices into the aligned rows, in witness order.
    key: Vec<usize>,
}

impl ColumnSorter {
    /// Sort groups for the blocks whose cells all lie in `scope`.
    pub fn new(scope: &[(usize, usize)], blocks: &[ColumnBlock]) -> ColumnSorter {
        let pos: HashMap<(usize, usize), usize> = scope.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut groups = Vec::new();
        for block in blocks {
            let Some(&first) = block.cols.first() else { continue };
            let rows: Vec<usize> = {
                let mut r: Vec<usize> = scope.iter().filter(|&&(_, c)| c == first).map(|&(r, _)| r).collect();
                r.sort_unstable();
                r
            };
            let columns: Option<Vec<Vec<usize>>> =
                block.cols.iter().map(|&c| rows.iter().map(|&r| pos.get(&(r, c)).copied()).collect()).collect();
            let Some(columns) = columns else { continue };
            let key = block.witness_rows.iter().filter_map(|w| rows.iter().position(|r| r == w)).collect();
            if columns.len() > 1 {
                groups.push(SortGroup { columns, key });
            }
        }
        ColumnSorter { groups }
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn canonical(&self, assignment: &[bool]) -> Vec<bool> {
        let mut out = assignment.to_vec();
        for g in &self.groups {
            let mut cols: Vec<(Vec<bool>, Vec<bool>)> = g
                .columns
                .iter()
                .map(|c| {
                    let values: Vec<bool> = c.iter().map(|&p| assignment[p]).collect();
                    (g.key.iter().map(|&k| values[k]).collect(), values)
                })
                .collect();
            cols.sort_by(|a, b| b.cmp(a));
            for (slot, (_, values)) in g.columns.iter().zip(cols) {
                for (&p, v) in slot.iter().zip(values) {
                    out[p] = v;
                }
            }
        }
        out
    }
}

/// A permutation followed by column-lex sorting.
#[derive(Debug, Clone)]
pub struct SortedAction {
    pub perm: Permutation,
    pub sorter: std::sync::Arc<ColumnSorter>,
}

impl ScopeAction for SortedAction {
    fn apply(&self, assignment: &[bool]) -> Vec<bool> {
        self.sorter.canonical(&act(&self.perm, assignment))
    }
}

/// Orbit labels of first-block instantiations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLabeling {
    /// Cells of the first block, the positions of every assignment.
    pub scope: Vec<(usize, usize)>,
    /// Label `k` is `representatives[k - 1]`.
    pub representatives: Vec<Vec<bool>>,
    pub stabilizer_sizes: Vec<usize>,
    pub orbit_sizes: Vec<usize>,
    labels: HashMap<Vec<bool>, usize>,
}

impl BlockLabeling {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Label of a first-block instantiation.
    pub fn label(&self, assignment: &[bool]) -> Option<usize> {
        self.labels.get(assignment).copied()
    }

    /// Label of an instantiation of another block: the label of its image
    /// under `psi`, which sends that block's cells onto the first block.
    pub fn label_of(
        &self,
        block_cells: &[(usize, usize)],
        assignment: &[bool],
        psi: &MatrixSymmetry,
    ) -> Result<Option<usize>, SymbreakError> {
        let moved = move_to_first_block(&self.scope, block_cells, assignment, psi)?;
        Ok(self.label(&moved))
    }

    /// Manifest lines `label <k>: stabilizer <s> cells <r>,<c>=<v>,...` (1-based cells).
    pub fn to_manifest(&self) -> String {
        let mut s = String::new();
        for (k, rep) in self.representatives.iter().enumerate() {
            write!(s, "label {}: stabilizer {} cells ", k + 1, self.stabilizer_sizes[k]).unwrap();
            write_cells(&mut s, &self.scope, rep);
            s.push('\n');
        }
        s
    }
}

/// `r,c=v` pairs, 1-based, comma separated.
pub fn write_cells(s: &mut String, scope: &[(usize, usize)], values: &[bool]) {
    for (i, (&(r, c), &v)) in scope.iter().zip(values).enumerate() {
        if i > 0 {
            s.push(',');
        }
        write!(s, "{}:{}={}", r + 1, c + 1, u8::from(v)).unwrap();
    }
}

/// Parsed manifest line: label, stabilizer size and `(cell, value)` pairs.
pub type ManifestEntry = (usize, usize, Vec<((usize, usize), bool)>);

/// Reads the manifest format written by [`BlockLabeling::to_manifest`].
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>, SymbreakError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| SymbreakError::Manifest { line: i + 1, msg: msg.to_string() };
        let rest = line.strip_prefix("label ").ok_or_else(|| bad("expected `label`"))?;
        let (k, rest) = rest.split_once(':').ok_or_else(|| bad("missing `:`"))?;
        let k: usize = k.trim().parse().map_err(|_| bad("bad label"))?;
        let rest = rest.trim().strip_prefix("stabilizer ").ok_or_else(|| bad("expected `stabilizer`"))?;
        let (stab, cells) = rest.split_once(" cells").ok_or_else(|| bad("expected `cells`"))?;
        let stab: usize = stab.trim().parse().map_err(|_| bad("bad stabilizer size"))?;
        let mut values = Vec::new();
        for item in cells.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (cell, v) = item.split_once('=').ok_or_else(|| bad("expected `=`"))?;
            let (r, c) = cell.split_once(':').ok_or_else(|| bad("expected `row:col`"))?;
            let r: usize = r.parse().map_err(|_| bad("bad row"))?;
            let c: usize = c.parse().map_err(|_| bad("bad column"))?;
            if r == 0 || c == 0 {
                return Err(bad("cells are 1-based"));
            }
            let v = match v {
                "0" => false,
                "1" => true,
                _ => return Err(bad("value must be 0 or 1")),
            };
            values.push(((r - 1, c - 1), v));
        }
        out.push((k, stab, values));
    }
    Ok(out)
}

/// Partitions `solutions` into orbits under `actions` (permutations of the
/// scope positions) and labels the orbits.
///
/// Each representative is the lex-least orbit member (false < true); labels
/// follow increasing stabilizer size, then the representative.
pub fn build_labeling<A: ScopeAction>(
    scope: &[(usize, usize)],
    solutions: &[Vec<bool>],
    actions: &[A],
) -> Result<BlockLabeling, SymbreakError> {
    let known: BTreeSet<&Vec<bool>> = solutions.iter().collect();
    let mut seen: HashMap<Vec<bool>, ()> = HashMap::new();
    let mut orbits: Vec<(usize, Vec<bool>, BTreeSet<Vec<bool>>)> = Vec::new();
    for (i, sol) in solutions.iter().enumerate() {
        if sol.len() != scope.len() {
            return Err(SymbreakError::ScopeSize { expected: scope.len(), got: sol.len() });
        }
        if seen.contains_key(sol) {
            continue;
        }
        let members = orbit_of(actions, sol);
        if members.iter().any(|m| !known.contains(m)) {
            return Err(SymbreakError::Unreachable(i + 1));
        }
        for m in &members {
            seen.insert(m.clone(), ());
        }
        let rep = members.iter().next().expect("orbit contains the solution").clone();
        let stab = stabilizer_size(actions, &rep);
        orbits.push((stab, rep, members));
    }
    orbits.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let mut labels = HashMap::new();
    for (k, (_, _, members)) in orbits.iter().enumerate() {
        for m in members {
            labels.insert(m.clone(), k + 1);
        }
    }
    Ok(BlockLabeling {
        scope: scope.to_vec(),
        stabilizer_sizes: orbits.iter().map(|o| o.0).collect(),
        orbit_sizes: orbits.iter().map(|o| o.2.len()).collect(),
        representatives: orbits.into_iter().map(|o| o.1).collect(),
        labels,
    })
}

/// Image of a block-`i` instantiation on the first block's positions.
fn move_to_first_block(
    scope: &[(usize, usize)],
    block_cells: &[(usize, usize)],
    assignment: &[bool],
    psi: &MatrixSymmetry,
) -> Result<Vec<bool>, SymbreakError> {
    if assignment.len() != block_cells.len() || block_cells.len() != scope.len() {
        return Err(SymbreakError::ScopeSize { expected: scope.len(), got: assignment.len() });
    }
    let pos: HashMap<(usize, usize), usize> = scope.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut out = vec![false; scope.len()];
    for (&(r, c), &v) in block_cells.iter().zip(assignment) {
        let p = pos.get(&(psi.row_perm.apply(r), psi.col_perm.apply(c))).ok_or(SymbreakError::OutsideBlock(0))?;
        out[*p] = v;
    }
    Ok(out)
}

/// Another block of the same shape, with the symmetry sending it onto the first block.
#[derive(Debug, Clone)]
pub struct TargetBlock {
    pub cells: Vec<(usize, usize)>,
    pub psi: MatrixSymmetry,
    /// Column-lex order of this block, over `cells`.
    pub sorter: ColumnSorter,
}

/// Blocking clauses for instance `k`: no target block may carry a label
/// smaller than `k`.
///
/// For each representative with label below `k` and each member `B` of its
/// orbit, the instantiation `ψ⁻¹(B)` of each target block is excluded by
/// `∨ ¬p` over its Ones, which is exact when every instantiation of a block
/// has the same number of Ones. Targets past `range_max - 1` are ignored (blocks are
/// numbered from 1, so targets are blocks `2..=range_max`). Clauses are
/// deduplicated and sorted.
pub fn block_min_clauses<A: ScopeAction>(
    lab: &BlockLabeling,
    actions: &[A],
    instance_label: usize,
    targets: &[TargetBlock],
    range_max: usize,
    vm: &VarMap,
) -> Result<Vec<Vec<Lit>>, SymbreakError> {
    let pos: HashMap<(usize, usize), usize> = lab.scope.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    // For each target, the first-block position of each of its cells.
    let mut maps = Vec::new();
    for (t, target) in targets.iter().take(range_max.saturating_sub(1)).enumerate() {
        let map = target
            .cells
            .iter()
            .map(|&(r, c)| {
                pos.get(&(target.psi.row_perm.apply(r), target.psi.col_perm.apply(c)))
                    .copied()
                    .ok_or(SymbreakError::OutsideBlock(t + 2))
            })
            .collect::<Result<Vec<_>, _>>()?;
        maps.push(map);
    }
    let mut out = BTreeSet::new();
    for rep in lab.representatives.iter().take(instance_label.saturating_sub(1)) {
        for member in orbit_of(actions, rep) {
            for (target, map) in targets.iter().zip(&maps) {
                let moved: Vec<bool> = map.iter().map(|&p| member[p]).collect();
                let moved = target.sorter.canonical(&moved);
                let ones =
                    target.cells.iter().zip(&moved).filter(|&(_, &v)| v).map(|(&(r, c), _)| (vm.lit(r, c), false));
                if let Some(mut clause) = fold_clause(ones) {
                    clause.sort_unstable();
                    out.insert(clause);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::lit_value;
    use crate::matrix::PartialIncidenceMatrix;

    fn models(f: &CnfFormula) -> Vec<Vec<bool>> {
        let n = f.var_count() as usize;
        (0u64..1 << n)
            .map(|b| (0..n).map(|i| b >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|m| f.is_satisfied_by(m))
            .collect()
    }

    #[test]
    fn lex_le_small_shapes() {
        let mut f = CnfFormula::new(2);
        assert_eq!(lex_le_clauses(&mut f, &[1], &[2]).unwrap(), vec![vec![-1, 2]]);
        assert_eq!(f.var_count(), 2);
        let mut f = CnfFormula::new(4);
        let c = lex_le_clauses(&mut f, &[1, 2], &[3, 4]).unwrap();
        assert_eq!(c, vec![vec![-1, 3], vec![-1, 5], vec![3, 5], vec![-2, 4, -5]]);
        assert!(lex_le_clauses(&mut f, &[1], &[2, 3]).is_err());
        assert!(lex_le_clauses(&mut f, &[], &[]).is_err());
    }

    #[test]
    fn lex_le_projection_n4() {
        let n = 4;
        let xs: Vec<Lit> = (1..=n).collect();
        let ys: Vec<Lit> = (n + 1..=2 * n).collect();
        let mut f = CnfFormula::new(2 * n as u32);
        let c = lex_le_clauses(&mut f, &xs, &ys).unwrap();
        f.extend_clauses(c).unwrap();
        let projected: BTreeSet<Vec<bool>> = models(&f).into_iter().map(|m| m[..8].to_vec()).collect();
        let expected: BTreeSet<Vec<bool>> = (0u32..256)
            .map(|b| (0..8).map(|i| b >> i & 1 == 1).collect::<Vec<bool>>())
            .filter(|m| m[..4] <= m[4..])
            .collect();
        assert_eq!(projected, expected);
    }

    #[test]
    fn swap_symmetry_blocks_only_10() {
        let vm = VarMap::new(PartialIncidenceMatrix::unknown(1, 2).unwrap());
        let ord = LexOrdering { var_list: vec![1, 2], symmetry_images: vec![vec![2, 1]] };
        let mut f = CnfFormula::new(vm.var_count());
        let c = lex_leader_clauses(&mut f, &ord).unwrap();
        f.extend_clauses(c).unwrap();
        let kept: BTreeSet<(bool, bool)> = models(&f).iter().map(|m| (m[0], m[1])).collect();
        assert_eq!(kept, [(false, false), (false, true), (true, true)].into_iter().collect());
        let bad = LexOrdering { var_list: vec![1, 2], symmetry_images: vec![vec![1, 1]] };
        assert!(matches!(lex_leader_clauses(&mut f, &bad), Err(SymbreakError::NotPermutation(1))));
    }

    #[test]
    fn lex_leader_clause_count() {
        let n = 5usize;
        let ord = LexOrdering {
            var_list: (1..=n as Lit).collect(),
            symmetry_images: vec![vec![2, 1, 3, 4, 5], vec![1, 2, 4, 3, 5], vec![2, 1, 4, 3, 5]],
        };
        let mut f = CnfFormula::new(n as u32);
        let c = lex_leader_clauses(&mut f, &ord).unwrap();
        assert_eq!(c.len(), 3 * (3 * n - 2));
        assert_eq!(f.var_count() as usize, n + 3 * (n - 1));
    }

    #[test]
    fn column_lex_2x2_forbids_the_anti_diagonal() {
        let vm = VarMap::new(PartialIncidenceMatrix::unknown(2, 2).unwrap());
        let block = ColumnBlock { cols: vec![0, 1], witness_rows: vec![0, 1] };
        // x at (2,1), y at (1,2).
        assert_eq!(column_lex_clauses(&block, &vm).unwrap(), vec![vec![-3, -2]]);
        let single = ColumnBlock { cols: vec![0], witness_rows: vec![0, 1] };
        assert!(column_lex_clauses(&single, &vm).unwrap().is_empty());
    }

    #[test]
    fn column_lex_6x4_keeps_sorted_placements() {
        let vm = VarMap::new(PartialIncidenceMatrix::unknown(6, 4).unwrap());
        let block = ColumnBlock { cols: (0..4).collect(), witness_rows: (0..6).collect() };
        let clauses = column_lex_clauses(&block, &vm).unwrap();
        let mut kept = 0;
        // One One per column, distinct rows.
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    for d in 0..6 {
                        let rows = [a, b, c, d];
                        let distinct: BTreeSet<_> = rows.iter().collect();
                        if distinct.len() < 4 {
                            continue;
                        }
                        let mut model = vec![false; 24];
                        for (col, &r) in rows.iter().enumerate() {
                            model[vm.var(r, col).unwrap() as usize - 1] = true;
                        }
                        if clauses.iter().all(|cl| cl.iter().any(|&l| lit_value(&model, l))) {
                            kept += 1;
                            assert!(rows.windows(2).all(|w| w[0] < w[1]));
                        }
                    }
                }
            }
        }
        assert_eq!(kept, 15);
    }

    #[test]
    fn column_lex_rejects_distinct_columns() {
        let mut w = PartialIncidenceMatrix::unknown(3, 2).unwrap();
        w.set(2, 0, Cell::One);
        w.set(2, 1, Cell::Zero);
        let vm = VarMap::new(w);
        let block = ColumnBlock { cols: vec![0, 1], witness_rows: vec![0, 1] };
        assert!(matches!(column_lex_clauses(&block, &vm), Err(SymbreakError::ColumnsDiffer(1, 2))));
    }

    #[test]
    fn toy_labeling_two_orbits() {
        let scope = vec![(0, 0), (0, 1)];
        let solutions = vec![vec![false, true], vec![true, false], vec![true, true], vec![false, false]];
        let actions = vec![Permutation::identity(2), Permutation::swap(2, 0, 1)];
        let lab = build_labeling(&scope, &solutions, &actions).unwrap();
        // Orbits {01, 10} (stabilizer 1) and the fixed points 00, 11 (stabilizer 2).
        assert_eq!(lab.len(), 3);
        assert_eq!(lab.stabilizer_sizes, vec![1, 2, 2]);
        assert_eq!(lab.representatives[0], vec![false, true]);
        assert_eq!(lab.label(&[true, false]), Some(1));
        assert_eq!(lab.label(&[true, true]), Some(3));
        assert_eq!(lab.orbit_sizes.iter().sum::<usize>(), 4);
        let bad = build_labeling(&scope, &solutions[..1], &actions);
        assert!(matches!(bad, Err(SymbreakError::Unreachable(1))));
    }

    #[test]
    fn manifest_round_trip() {
        let scope = vec![(0, 0), (3, 4)];
        let lab = build_labeling(&scope, &[vec![true, false]], &[Permutation::identity(2)]).unwrap();
        let text = lab.to_manifest();
        assert_eq!(text, "label 1: stabilizer 1 cells 1:1=1,4:5=0\n");
        let parsed = parse_manifest(&text).unwrap();
        assert_eq!(parsed, vec![(1, 1, vec![((0, 0), true), ((3, 4), false)])]);
    }

    fn weight_two(bits: u8) -> Option<Vec<bool>> {
        (bits.count_ones() == 2).then(|| (0..4).map(|i| bits >> i & 1 == 1).collect())
    }

    /// Two blocks of four cells in one row, two Ones each; the symmetry
    /// group swaps the first two cells of the first block.
    fn two_block_toy() -> (VarMap, BlockLabeling, Vec<Permutation>, Vec<TargetBlock>) {
        let vm = VarMap::new(PartialIncidenceMatrix::unknown(1, 8).unwrap());
        let scope: Vec<(usize, usize)> = (0..4).map(|c| (0, c)).collect();
        let sols: Vec<Vec<bool>> = (0..16u8).filter_map(weight_two).collect();
        let actions = vec![Permutation::identity(4), Permutation::swap(4, 0, 1)];
        let lab = build_labeling(&scope, &sols, &actions).unwrap();
        let psi = MatrixSymmetry::new(
            Permutation::identity(1),
            Permutation::parse_cycles(8, "(1,5)(2,6)(3,7)(4,8)").unwrap(),
        );
        let targets =
            vec![TargetBlock { cells: (4..8).map(|c| (0, c)).collect(), psi, sorter: ColumnSorter::default() }];
        (vm, lab, actions, targets)
    }

    #[test]
    fn block_min_removes_smaller_labels() {
        let (vm, lab, actions, targets) = two_block_toy();
        assert_eq!(lab.len(), 4);
        assert!(block_min_clauses(&lab, &actions, 1, &targets, 8, &vm).unwrap().is_empty());
        for k in 1..=lab.len() {
            let first = &lab.representatives[k - 1];
            let mut f = CnfFormula::new(8);
            f.extend_clauses(block_min_clauses(&lab, &actions, k, &targets, 8, &vm).unwrap()).unwrap();
            for second in (0..16u8).filter_map(weight_two) {
                let model: Vec<bool> = first.iter().chain(&second).copied().collect();
                let label2 = lab.label_of(&targets[0].cells, &second, &targets[0].psi).unwrap().unwrap();
                assert_eq!(f.is_satisfied_by(&model), label2 >= k, "k={k} second={second:?}");
            }
        }
        // range_max 1 leaves no target blocks.
        assert!(block_min_clauses(&lab, &actions, 3, &targets, 1, &vm).unwrap().is_empty());
    }

    #[test]
    fn block_min_rejects_bad_psi() {
        let (vm, lab, actions, mut targets) = two_block_toy();
        targets[0].psi = MatrixSymmetry::identity(1, 8);
        assert!(matches!(block_min_clauses(&lab, &actions, 2, &targets, 8, &vm), Err(SymbreakError::OutsideBlock(2))));
    }
}
