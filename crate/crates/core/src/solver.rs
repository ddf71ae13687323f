//! A compact CDCL solver with optional DRAT proof logging.
//!
//! Two-watched-literal propagation, first-UIP learning, VSIDS or fixed
//! lowest-index branching, Luby restarts and LBD-based clause deletion. It is
//! meant for self-contained runs and as a test oracle; large instances should
//! go to an external solver.

use std::io::{self, Write};
use std::time::Instant;

use thiserror::Error;

use crate::cnf::{CnfFormula, Lit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branching {
    /// Highest activity first, saved phase.
    Vsids,
    /// Lowest-index unassigned variable, false first. Reproducible enumeration order.
    Ordered,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub branching: Branching,
    pub max_clauses: Option<usize>,
    pub conflict_limit: Option<u64>,
    pub deadline: Option<Instant>,
    pub restarts: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            branching: Branching::Vsids,
            max_clauses: Some(50_000),
            conflict_limit: None,
            deadline: None,
            restarts: true,
        }
    }
}

impl SolverConfig {
    pub fn unbounded() -> Self {
        SolverConfig { max_clauses: None, ..Default::default() }
    }

    pub fn ordered() -> Self {
        SolverConfig { branching: Branching::Ordered, max_clauses: None, restarts: false, ..Default::default() }
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("instance has {clauses} clauses, above the internal solver limit of {limit}; use an external solver")]
    TooLarge { clauses: usize, limit: usize },
    #[error("conflict or time limit reached after {conflicts} conflicts")]
    Interrupted { conflicts: u64 },
    #[error("proof output failed: {0}")]
    Proof(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    /// `model[v - 1]` is the value of variable `v`.
    Sat(Vec<bool>),
    Unsat,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SolverStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learnt_deleted: u64,
}

const UNDEF: u8 = 2;

// Internal literal code: 2 * var + (1 if negative), var 0-based.
#[inline]
fn code(lit: Lit) -> u32 {
    let v = lit.unsigned_abs() - 1;
    2 * v + u32::from(lit < 0)
}

#[inline]
fn decode(c: u32) -> Lit {
    let v = (c >> 1) as i32 + 1;
    if c & 1 == 1 {
        -v
    } else {
        v
    }
}

#[inline]
fn var_of(c: u32) -> usize {
    (c >> 1) as usize
}

struct Clause {
    lits: Vec<u32>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
}

#[derive(Clone, Copy)]
struct Watch {
    cref: u32,
    blocker: u32,
}

/// Max-heap over variable activities with position tracking.
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<i32>,
}

impl VarHeap {
    fn new(n: usize) -> Self {
        VarHeap { heap: Vec::with_capacity(n), pos: vec![-1; n] }
    }

    fn grow(&mut self, n: usize) {
        self.pos.resize(n, -1);
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v] >= 0
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = self.heap.len() as i32;
        self.heap.push(v as u32);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()? as usize;
        let last = self.heap.pop().unwrap();
        self.pos[top] = -1;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.pos[v] as usize, act);
        }
    }

    fn better(a: u32, b: u32, act: &[f64]) -> bool {
        let (x, y) = (act[a as usize], act[b as usize]);
        x > y || (x == y && a < b)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::better(v, self.heap[parent], act) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i] as usize] = i as i32;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as i32;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && Self::better(self.heap[right], self.heap[left], act) { right } else { left };
            if !Self::better(self.heap[child], v, act) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i] as usize] = i as i32;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as i32;
    }
}

pub struct Solver {
    config: SolverConfig,
    num_vars: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watch>>,
    assigns: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    proof: Option<Box<dyn Write + Send>>,
    learnt_count: usize,
    next_reduce: u64,
    stats: SolverStats,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Solver {
            config,
            num_vars: 0,
            clauses: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            heap: VarHeap::new(0),
            phase: Vec::new(),
            seen: Vec::new(),
            ok: true,
            proof: None,
            learnt_count: 0,
            next_reduce: 4000,
            stats: SolverStats::default(),
        }
    }

    /// Loads `formula`, enforcing the configured clause limit.
    pub fn from_formula(formula: &CnfFormula, config: SolverConfig) -> Result<Self, SolverError> {
        if let Some(limit) = config.max_clauses {
            if formula.len() > limit {
                return Err(SolverError::TooLarge { clauses: formula.len(), limit });
            }
        }
        let mut s = Solver::new(config);
        s.reserve_vars(formula.var_count() as usize);
        for clause in formula.clauses() {
            s.add_clause(clause)?;
        }
        Ok(s)
    }

    /// Routes DRAT lines (additions and `d` deletions) to `out`.
    pub fn set_proof_output(&mut self, out: Box<dyn Write + Send>) {
        self.proof = Some(out);
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn reserve_vars(&mut self, n: usize) {
        if n <= self.num_vars {
            return;
        }
        self.num_vars = n;
        self.watches.resize_with(2 * n, Vec::new);
        self.assigns.resize(n, UNDEF);
        self.level.resize(n, 0);
        self.reason.resize(n, None);
        self.activity.resize(n, 0.0);
        self.phase.resize(n, false);
        self.seen.resize(n, false);
        self.heap.grow(n);
        for v in 0..n {
            if self.assigns[v] == UNDEF {
                self.heap.insert(v, &self.activity);
            }
        }
    }

    #[inline]
    fn value(&self, c: u32) -> u8 {
        let a = self.assigns[var_of(c)];
        if a == UNDEF {
            UNDEF
        } else {
            a ^ (c & 1) as u8
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn log_add(&mut self, lits: &[u32]) -> io::Result<()> {
        if let Some(out) = self.proof.as_mut() {
            for &c in lits {
                write!(out, "{} ", decode(c))?;
            }
            out.write_all(b"0\n")?;
        }
        Ok(())
    }

    fn log_delete(&mut self, lits: &[u32]) -> io::Result<()> {
        if let Some(out) = self.proof.as_mut() {
            out.write_all(b"d ")?;
            for &c in lits {
                write!(out, "{} ", decode(c))?;
            }
            out.write_all(b"0\n")?;
        }
        Ok(())
    }

    pub fn flush_proof(&mut self) -> io::Result<()> {
        if let Some(out) = self.proof.as_mut() {
            out.flush()?;
        }
        Ok(())
    }

    /// Adds a permanent clause. Backtracks to the root level first.
    ///
    /// Returns `false` once the clause database is known to be unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> Result<bool, SolverError> {
        if !self.ok {
            return Ok(false);
        }
        self.backtrack(0);
        if let Some(max) = lits.iter().map(|l| l.unsigned_abs() as usize).max() {
            self.reserve_vars(max);
        }
        let mut clause: Vec<u32> = Vec::with_capacity(lits.len());
        let mut shortened = false;
        for &l in lits {
            let c = code(l);
            match self.value(c) {
                1 => return Ok(true),
                0 => shortened = true,
                _ => {
                    if clause.contains(&(c ^ 1)) {
                        return Ok(true);
                    }
                    if !clause.contains(&c) {
                        clause.push(c);
                    }
                }
            }
        }
        if shortened {
            self.log_add(&clause)?;
        }
        match clause.len() {
            0 => {
                self.ok = false;
                Ok(false)
            }
            1 => {
                self.enqueue(clause[0], None);
                if self.propagate().is_some() {
                    self.log_add(&[])?;
                    self.ok = false;
                    return Ok(false);
                }
                Ok(true)
            }
            _ => {
                self.attach(clause, false, 0);
                Ok(true)
            }
        }
    }

    fn attach(&mut self, lits: Vec<u32>, learnt: bool, lbd: u32) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[(lits[0] ^ 1) as usize].push(Watch { cref, blocker: lits[1] });
        self.watches[(lits[1] ^ 1) as usize].push(Watch { cref, blocker: lits[0] });
        if learnt {
            self.learnt_count += 1;
        }
        self.clauses.push(Clause { lits, learnt, deleted: false, lbd });
        cref
    }

    fn enqueue(&mut self, c: u32, reason: Option<u32>) {
        let v = var_of(c);
        self.assigns[v] = (c & 1) as u8 ^ 1;
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(c);
    }

    /// Unit propagation; returns a conflicting clause if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            // Clauses watching the negation of p (literal p ^ 1 just became false).
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[p as usize]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                if self.clauses[cref].deleted {
                    continue;
                }
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                if first != w.blocker && self.value(first) == 1 {
                    ws[j] = Watch { cref: w.cref, blocker: first };
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let lk = self.clauses[cref].lits[k];
                    if self.value(lk) != 0 {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[(lk ^ 1) as usize].push(Watch { cref: w.cref, blocker: first });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watch { cref: w.cref, blocker: first };
                j += 1;
                if self.value(first) == 0 {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[p as usize] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn backtrack(&mut self, target: usize) {
        if self.decision_level() <= target {
            return;
        }
        let start = self.trail_lim[target];
        for idx in (start..self.trail.len()).rev() {
            let c = self.trail[idx];
            let v = var_of(c);
            self.phase[v] = c & 1 == 0;
            self.assigns[v] = UNDEF;
            self.reason[v] = None;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(target);
        self.qhead = start;
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    /// First-UIP analysis. Returns the learnt clause (asserting literal first),
    /// the backjump level and the clause's LBD.
    fn analyze(&mut self, mut confl: u32) -> (Vec<u32>, usize, u32) {
        let mut learnt: Vec<u32> = vec![0];
        let mut counter = 0usize;
        let mut p: Option<u32> = None;
        let mut idx = self.trail.len();
        let current = self.decision_level() as u32;
        loop {
            let lits = self.clauses[confl as usize].lits.clone();
            let skip = usize::from(p.is_some());
            for &q in &lits[skip..] {
                let v = var_of(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] == current {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var_of(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            self.seen[var_of(lit)] = false;
            counter -= 1;
            if counter == 0 {
                learnt[0] = lit ^ 1;
                break;
            }
            confl = self.reason[var_of(lit)].expect("non-decision literal has a reason");
        }

        // Drop literals implied by the rest of the clause.
        let mut keep = vec![learnt[0]];
        for &q in &learnt[1..] {
            let v = var_of(q);
            let redundant = match self.reason[v] {
                None => false,
                Some(r) => self.clauses[r as usize].lits.iter().all(|&x| {
                    let u = var_of(x);
                    u == v || self.seen[u] || self.level[u] == 0
                }),
            };
            if !redundant {
                keep.push(q);
            }
        }
        for &q in &learnt {
            self.seen[var_of(q)] = false;
        }
        let mut learnt = keep;

        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[var_of(learnt[i])] > self.level[var_of(learnt[max_i])] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[var_of(learnt[1])] as usize
        };
        let mut levels: Vec<u32> = learnt.iter().map(|&c| self.level[var_of(c)]).collect();
        levels.sort_unstable();
        levels.dedup();
        (learnt, bt, levels.len() as u32)
    }

    fn locked(&self, cref: usize) -> bool {
        let first = self.clauses[cref].lits[0];
        self.value(first) == 1 && self.reason[var_of(first)] == Some(cref as u32)
    }

    fn reduce_db(&mut self) -> io::Result<()> {
        let mut cands: Vec<usize> = (0..self.clauses.len())
            .filter(|&i| {
                let c = &self.clauses[i];
                c.learnt && !c.deleted && c.lbd > 2 && !self.locked(i)
            })
            .collect();
        cands.sort_by_key(|&i| (std::cmp::Reverse(self.clauses[i].lbd), i));
        let remove = cands.len() / 2;
        for &i in &cands[..remove] {
            let lits = std::mem::take(&mut self.clauses[i].lits);
            self.log_delete(&lits)?;
            self.clauses[i].deleted = true;
            self.learnt_count -= 1;
            self.stats.learnt_deleted += 1;
        }
        for ws in self.watches.iter_mut() {
            ws.retain(|w| !self.clauses[w.cref as usize].deleted);
        }
        Ok(())
    }

    fn pick_branch(&mut self) -> Option<u32> {
        match self.config.branching {
            Branching::Ordered => (0..self.num_vars).find(|&v| self.assigns[v] == UNDEF).map(|v| 2 * v as u32 + 1),
            Branching::Vsids => loop {
                let v = self.heap.pop(&self.activity)?;
                if self.assigns[v] == UNDEF {
                    return Some(2 * v as u32 + u32::from(!self.phase[v]));
                }
            },
        }
    }

    fn model(&self) -> Vec<bool> {
        self.assigns.iter().map(|&a| a == 1).collect()
    }

    pub fn solve(&mut self) -> Result<SolveResult, SolverError> {
        self.solve_with_assumptions(&[])
    }

    /// Solves under `assumptions`. `Unsat` means unsatisfiable together with them.
    pub fn solve_with_assumptions(&mut self, assumptions: &[Lit]) -> Result<SolveResult, SolverError> {
        if !self.ok {
            return Ok(SolveResult::Unsat);
        }
        if let Some(max) = assumptions.iter().map(|l| l.unsigned_abs() as usize).max() {
            self.reserve_vars(max);
        }
        self.backtrack(0);
        let assumptions: Vec<u32> = assumptions.iter().map(|&l| code(l)).collect();
        let start_conflicts = self.stats.conflicts;
        let mut luby_index = 0u32;
        let mut restart_budget = 100 * luby(luby_index);
        let mut since_restart = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                since_restart += 1;
                if self.decision_level() == 0 {
                    self.log_add(&[])?;
                    self.flush_proof()?;
                    self.ok = false;
                    return Ok(SolveResult::Unsat);
                }
                let (learnt, bt, lbd) = self.analyze(confl);
                self.backtrack(bt);
                self.log_add(&learnt)?;
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cref = self.attach(learnt, true, lbd);
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= 0.95;
                if self.stats.conflicts.is_multiple_of(256) {
                    let used = self.stats.conflicts - start_conflicts;
                    let over_budget = self.config.conflict_limit.is_some_and(|lim| used >= lim);
                    let late = self.config.deadline.is_some_and(|d| Instant::now() >= d);
                    if over_budget || late {
                        self.backtrack(0);
                        self.flush_proof()?;
                        return Err(SolverError::Interrupted { conflicts: self.stats.conflicts });
                    }
                }
                continue;
            }

            if self.config.restarts && since_restart >= restart_budget {
                self.stats.restarts += 1;
                since_restart = 0;
                luby_index += 1;
                restart_budget = 100 * luby(luby_index);
                self.backtrack(0);
                continue;
            }
            if self.stats.conflicts >= self.next_reduce {
                self.next_reduce = self.stats.conflicts + 4000 + 300 * (self.stats.restarts + 1);
                self.reduce_db()?;
            }

            let mut next = None;
            while self.decision_level() < assumptions.len() {
                let a = assumptions[self.decision_level()];
                match self.value(a) {
                    1 => self.trail_lim.push(self.trail.len()),
                    0 => {
                        self.backtrack(0);
                        self.flush_proof()?;
                        return Ok(SolveResult::Unsat);
                    }
                    _ => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let decision = match next {
                Some(a) => a,
                None => match self.pick_branch() {
                    Some(d) => d,
                    None => {
                        let model = self.model();
                        self.backtrack(0);
                        self.flush_proof()?;
                        return Ok(SolveResult::Sat(model));
                    }
                },
            };
            self.stats.decisions += 1;
            self.trail_lim.push(self.trail.len());
            self.enqueue(decision, None);
        }
    }

    /// Root-level assignment of `lit` after propagation, if fixed.
    pub fn fixed_value(&self, lit: Lit) -> Option<bool> {
        let c = code(lit);
        if var_of(c) >= self.num_vars {
            return None;
        }
        match self.value(c) {
            UNDEF => None,
            v if self.level[var_of(c)] == 0 => Some(v == 1),
            _ => None,
        }
    }

    /// Propagates `cube` at a scratch level and returns the number of
    /// unassigned variables, or `None` on conflict. Leaves the root state intact.
    pub fn free_after(&mut self, cube: &[Lit]) -> Option<usize> {
        self.free_vars_after(cube).map(|v| v.len())
    }

    /// Like [`Solver::free_after`], listing the unassigned variables (1-based).
    pub fn free_vars_after(&mut self, cube: &[Lit]) -> Option<Vec<u32>> {
        if self.propagate_cube(cube) {
            self.backtrack(0);
            return None;
        }
        let free: Vec<u32> = (0..self.num_vars).filter(|&v| self.assigns[v] == UNDEF).map(|v| v as u32 + 1).collect();
        self.backtrack(0);
        Some(free)
    }

    /// True when asserting `lits` and propagating yields a conflict.
    pub fn refutes(&mut self, lits: &[Lit]) -> bool {
        let conflict = self.propagate_cube(lits);
        self.backtrack(0);
        conflict
    }

    fn propagate_cube(&mut self, cube: &[Lit]) -> bool {
        if !self.ok {
            return true;
        }
        self.backtrack(0);
        if self.propagate().is_some() {
            self.ok = false;
            return true;
        }
        if let Some(max) = cube.iter().map(|l| l.unsigned_abs() as usize).max() {
            self.reserve_vars(max);
        }
        for &l in cube {
            let c = code(l);
            match self.value(c) {
                1 => continue,
                0 => return true,
                _ => {
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(c, None);
                    if self.propagate().is_some() {
                        return true;
                    }
                }
            }
        }
        false
    }
}

fn luby(i: u32) -> u64 {
    // Luby sequence 1,1,2,1,1,2,4,...
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < u64::from(i) + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    let mut x = u64::from(i);
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1 << seq
}

/// Solves `formula` under `assumptions` with the internal solver.
pub fn solve_internal(
    formula: &CnfFormula,
    assumptions: &[Lit],
    config: SolverConfig,
) -> Result<SolveResult, SolverError> {
    let mut solver = Solver::from_formula(formula, config)?;
    let result = solver.solve_with_assumptions(assumptions)?;
    Ok(match result {
        SolveResult::Sat(mut model) => {
            model.resize(formula.var_count() as usize, false);
            SolveResult::Sat(model)
        }
        SolveResult::Unsat => SolveResult::Unsat,
    })
}

/// Solves `formula` and writes a DRAT refutation to `proof` when unsatisfiable.
pub fn solve_with_proof<W: Write + Send + 'static>(
    formula: &CnfFormula,
    config: SolverConfig,
    proof: W,
) -> Result<SolveResult, SolverError> {
    let mut solver = Solver::from_formula(formula, config)?;
    solver.set_proof_output(Box::new(proof));
    let result = solver.solve()?;
    solver.flush_proof()?;
    Ok(match result {
        SolveResult::Sat(mut model) => {
            model.resize(formula.var_count() as usize, false);
            SolveResult::Sat(model)
        }
        SolveResult::Unsat => SolveResult::Unsat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn formula(vars: u32, clauses: &[&[Lit]]) -> CnfFormula {
        let mut f = CnfFormula::new(vars);
        for c in clauses {
            f.add_clause(c.iter().copied()).unwrap();
        }
        f
    }

    fn brute_force_sat(f: &CnfFormula) -> bool {
        let n = f.var_count() as usize;
        (0u64..1 << n).any(|bits| {
            let model: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            f.is_satisfied_by(&model)
        })
    }

    #[test]
    fn trivial_verdicts() {
        let f = formula(1, &[&[1]]);
        assert_eq!(solve_internal(&f, &[], SolverConfig::default()).unwrap(), SolveResult::Sat(vec![true]));
        let f = formula(1, &[&[1], &[-1]]);
        assert_eq!(solve_internal(&f, &[], SolverConfig::default()).unwrap(), SolveResult::Unsat);
    }

    #[test]
    fn assumptions_restrict_without_poisoning() {
        let f = formula(2, &[&[1, 2]]);
        let mut s = Solver::from_formula(&f, SolverConfig::default()).unwrap();
        assert_eq!(s.solve_with_assumptions(&[-1, -2]).unwrap(), SolveResult::Unsat);
        match s.solve_with_assumptions(&[-1]).unwrap() {
            SolveResult::Sat(m) => assert!(!m[0] && m[1]),
            SolveResult::Unsat => panic!("expected SAT"),
        }
    }

    #[test]
    fn clause_limit_is_enforced() {
        let f = formula(1, &[&[1], &[1, 1]]);
        let cfg = SolverConfig { max_clauses: Some(1), ..Default::default() };
        assert!(matches!(Solver::from_formula(&f, cfg), Err(SolverError::TooLarge { .. })));
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 6 pigeons, 5 holes.
        let (p, h) = (6, 5);
        let var = |i: i32, j: i32| i * h + j + 1;
        let mut f = CnfFormula::new((p * h) as u32);
        for i in 0..p {
            f.add_clause((0..h).map(|j| var(i, j))).unwrap();
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    f.add_clause([-var(a, j), -var(b, j)]).unwrap();
                }
            }
        }
        for cfg in [SolverConfig::default(), SolverConfig::ordered()] {
            assert_eq!(solve_internal(&f, &[], cfg).unwrap(), SolveResult::Unsat);
        }
    }

    #[test]
    fn random_3sat_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(3..=12u32);
            let m = (n as f64 * 4.26).round() as usize;
            let mut f = CnfFormula::new(n);
            for _ in 0..m {
                let c: Vec<Lit> = (0..3)
                    .map(|_| {
                        let v = rng.gen_range(1..=n) as i32;
                        if rng.gen() {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect();
                let _ = f.add_clause(c);
            }
            let expected = brute_force_sat(&f);
            for cfg in [SolverConfig::default(), SolverConfig::ordered()] {
                match solve_internal(&f, &[], cfg).unwrap() {
                    SolveResult::Sat(model) => {
                        assert!(expected);
                        assert!(f.is_satisfied_by(&model));
                    }
                    SolveResult::Unsat => assert!(!expected),
                }
            }
        }
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn free_after_counts_unassigned() {
        let f = formula(3, &[&[-1, 2]]);
        let mut s = Solver::from_formula(&f, SolverConfig::default()).unwrap();
        assert_eq!(s.free_after(&[]), Some(3));
        assert_eq!(s.free_after(&[1]), Some(1));
        assert_eq!(s.free_after(&[1, -2]), None);
    }
}
