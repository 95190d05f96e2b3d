//! CDCL-based projected enumeration with blocking clauses.
//!
//! Search is split into a controlled prefix and free search above it. Free
//! search is an ordinary CDCL loop (watched literals, first-UIP learning,
//! Luby restarts) that extends the assignment to all variables. Every total
//! solution is generalized into a projected cube (or taken verbatim when
//! minimization is off), its size `2^(|P|-|S|)` is added to the count, the
//! negation of the cube becomes a blocking clause, and one unfixed cube
//! literal is forced as the next controlled decision, coupling the clause to
//! it. Retracting a controlled decision deletes the coupled clause and every
//! blocking clause added below it (they all contain its negation), which
//! keeps the number of live blocking clauses bounded by `|P|`.
//!
//! Learned clauses are consequences of the original plus current blocking
//! clauses and may be deleted at any time; blocking clauses are only ever
//! removed by the coupling rule. Conflict-driven backjumps are clamped to
//! the controlled depth, and a conflict inside the controlled region flips
//! its deepest unflipped decision.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::cnf::{Assignment, BigCount, Clause, Cube, Lit, ProjectedCnf, Var};

#[derive(Debug, Clone)]
pub struct EnumOptions {
    /// Shrink each solution into a cube before blocking it; off reproduces
    /// plain projected enumeration.
    pub minimize: bool,
    pub time_limit: Option<Duration>,
    /// Keep every counted cube together with the solution that produced it.
    pub record_cubes: bool,
    /// Reduce the learned-clause database once it exceeds this many clauses.
    pub learned_cap: usize,
}

impl Default for EnumOptions {
    fn default() -> EnumOptions {
        EnumOptions {
            minimize: true,
            time_limit: None,
            record_cubes: false,
            learned_cap: 10_000,
        }
    }
}

/// A counted cube plus the total solution it was shrunk from.
#[derive(Debug, Clone)]
pub struct RecordedCube {
    pub cube: Cube,
    pub witness: Assignment,
}

#[derive(Debug, Clone, Default)]
pub struct EnumStats {
    pub total_count: BigCount,
    pub num_cubes: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
    pub max_live_blocking: usize,
    pub cubes: Vec<RecordedCube>,
}

impl EnumStats {
    /// Cube quality `R = log2(count / cubes)`; 0 means unit cubes only and
    /// `|P|` means one cube covered the whole priority space.
    pub fn r_statistic(&self) -> Option<f64> {
        if self.num_cubes == 0 {
            return None;
        }
        let count = self.total_count.to_f64()?;
        Some(count.log2() - (self.num_cubes as f64).log2())
    }
}

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("resource limit reached after {} conflicts", stats.conflicts)]
    LimitReached { stats: Box<EnumStats> },
}

/// Literal occurrence counts over the original clause set.
#[derive(Debug, Clone)]
pub struct LitFrequencies {
    counts: Vec<u32>,
}

impl LitFrequencies {
    pub fn from_clauses(num_vars: u32, clauses: &[Clause]) -> LitFrequencies {
        let mut counts = vec![0u32; 2 * num_vars as usize];
        for c in clauses {
            for l in c.iter() {
                counts[l.code()] += 1;
            }
        }
        LitFrequencies { counts }
    }

    pub fn of(&self, lit: Lit) -> u32 {
        self.counts[lit.code()]
    }
}

/// Orders cube literals for deterministic selection: highest frequency in
/// the original CNF first, ties by smallest variable index.
fn freq_order(freq: &LitFrequencies, a: Lit, b: Lit) -> std::cmp::Ordering {
    freq.of(b)
        .cmp(&freq.of(a))
        .then(a.var().index().cmp(&b.var().index()))
}

/// Greedy generalization of a total solution into a projected cube.
///
/// The cube starts from the controlled decisions. Every original and live
/// blocking clause must then either be satisfied by a non-priority literal
/// of the solution or intersect the cube; otherwise the satisfying priority
/// literal with the highest frequency in the original CNF is added.
pub fn shrink(
    theta: &Assignment,
    original: &[Clause],
    blocking: &[Clause],
    controlled: &[Lit],
    pf: &ProjectedCnf,
    freq: &LitFrequencies,
) -> Cube {
    let mut lits: Vec<Lit> = Vec::new();
    let mut in_cube: HashSet<Lit> = HashSet::new();
    for &d in controlled {
        debug_assert!(pf.is_priority(d.var()));
        if in_cube.insert(d) {
            lits.push(d);
        }
    }
    for clause in original.iter().chain(blocking) {
        let mut best: Option<Lit> = None;
        let mut hit = false;
        for l in clause.iter() {
            if !theta.contains(l) {
                continue;
            }
            if !pf.is_priority(l.var()) || in_cube.contains(&l) {
                hit = true;
                break;
            }
            match best {
                Some(b) if freq_order(freq, b, l).is_le() => {}
                _ => best = Some(l),
            }
        }
        if !hit {
            let p = best.expect("solution must satisfy every live clause");
            if in_cube.insert(p) {
                lits.push(p);
            }
        }
    }
    Cube::new(Assignment::from_lits(lits))
}

/// Selects the literal forced as the next controlled decision: the first
/// unfixed cube literal by frequency-then-index. `None` signals that the
/// cube is entirely fixed, exhausting the current controlled level.
pub fn pick_controlled_literal(
    cube: &Cube,
    mut is_unfixed: impl FnMut(Var) -> bool,
    freq: &LitFrequencies,
) -> Option<Lit> {
    cube.assignment()
        .iter()
        .filter(|l| is_unfixed(l.var()))
        .min_by(|&a, &b| freq_order(freq, a, b))
}

// ---------------------------------------------------------------------------
// Solver core
// ---------------------------------------------------------------------------

const NO_REASON: u32 = u32::MAX;
const TICK_MASK: u64 = (1 << 14) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ClauseKind {
    Original,
    Learned,
    Blocking { tag: usize },
}

struct ClauseSlot {
    lits: Vec<Lit>,
    kind: ClauseKind,
    deleted: bool,
    activity: f64,
}

struct ControlledEntry {
    lit: Lit,
    flipped: bool,
}

enum Inserted {
    Stable,
    Unit(Lit),
    Conflict,
}

pub struct Enumerator {
    pf: ProjectedCnf,
    opts: EnumOptions,
    num_vars: usize,
    freq: LitFrequencies,
    original: Vec<Clause>,

    slots: Vec<ClauseSlot>,
    watches: Vec<Vec<u32>>,
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    queue_head: usize,
    phase: Vec<bool>,
    activity: Vec<f64>,
    act_inc: f64,
    clause_inc: f64,

    controlled: Vec<ControlledEntry>,
    blocking_stack: Vec<(usize, u32)>,
    learned_refs: Vec<u32>,

    stats: EnumStats,
    deadline: Option<Instant>,
    ticks: u64,
    restarts_done: u64,
    conflicts_since_restart: u64,
}

impl Enumerator {
    pub fn new(pf: &ProjectedCnf, opts: EnumOptions) -> Enumerator {
        let n = pf.formula().num_vars() as usize;
        Enumerator {
            freq: LitFrequencies::from_clauses(pf.formula().num_vars(), pf.formula().clauses()),
            original: pf.formula().clauses().to_vec(),
            pf: pf.clone(),
            num_vars: n,
            slots: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            value: vec![0; n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            queue_head: 0,
            phase: vec![false; n],
            activity: vec![0.0; n],
            act_inc: 1.0,
            clause_inc: 1.0,
            controlled: Vec::new(),
            blocking_stack: Vec::new(),
            learned_refs: Vec::new(),
            stats: EnumStats::default(),
            deadline: opts.time_limit.map(|limit| Instant::now() + limit),
            ticks: 0,
            restarts_done: 0,
            conflicts_since_restart: 0,
            opts,
        }
    }

    // -- assignment primitives ---------------------------------------------

    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[l.var().pos()];
        if l.is_positive() {
            v
        } else {
            -v
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn bl(&self) -> usize {
        self.controlled.len()
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        debug_assert_eq!(self.lit_value(l), 0);
        let pos = l.var().pos();
        self.value[pos] = if l.is_positive() { 1 } else { -1 };
        self.level[pos] = self.decision_level() as u32;
        self.reason[pos] = reason;
        self.trail.push(l);
    }

    fn new_decision(&mut self, l: Lit) {
        self.trail_lim.push(self.trail.len());
        self.enqueue(l, NO_REASON);
        self.stats.decisions += 1;
    }

    fn backtrack_to(&mut self, target: usize) {
        debug_assert!(target >= self.bl().saturating_sub(1));
        while self.decision_level() > target {
            let start = self.trail_lim.pop().expect("level start");
            for &l in &self.trail[start..] {
                let pos = l.var().pos();
                self.phase[pos] = l.is_positive();
                self.value[pos] = 0;
            }
            self.trail.truncate(start);
        }
        self.queue_head = self.trail.len();
    }

    fn tick(&mut self) -> Result<(), EnumError> {
        self.ticks += 1;
        if self.ticks & TICK_MASK == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(EnumError::LimitReached { stats: Box::new(self.stats.clone()) });
                }
            }
        }
        Ok(())
    }

    fn bump_var(&mut self, v: Var) {
        self.activity[v.pos()] += self.act_inc;
        if self.activity[v.pos()] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.act_inc *= 1e-100;
        }
    }

    fn bump_clause(&mut self, cref: u32) {
        let slot = &mut self.slots[cref as usize];
        slot.activity += self.clause_inc;
        if slot.activity > 1e20 {
            for s in &mut self.slots {
                s.activity *= 1e-20;
            }
            self.clause_inc *= 1e-20;
        }
    }

    // -- clause insertion ----------------------------------------------------

    /// Inserts a clause of length >= 2 and sets up watches. The clause may be
    /// unit or even falsified under the current assignment; the caller acts
    /// on the returned state.
    fn insert_clause(&mut self, mut lits: Vec<Lit>, kind: ClauseKind) -> (u32, Inserted) {
        debug_assert!(lits.len() >= 2);
        // Watch preference: unassigned or true literals; otherwise the most
        // recently assigned false ones, so backtracking wakes them first.
        let rank = |this: &Enumerator, l: Lit| -> (i8, u32) {
            match this.lit_value(l) {
                0 => (2, u32::MAX),
                1 => (1, this.level[l.var().pos()]),
                _ => (0, this.level[l.var().pos()]),
            }
        };
        for slot in 0..2 {
            let mut best = slot;
            for i in slot + 1..lits.len() {
                if rank(self, lits[i]) > rank(self, lits[best]) {
                    best = i;
                }
            }
            lits.swap(slot, best);
        }
        let state = match (self.lit_value(lits[0]), self.lit_value(lits[1])) {
            (-1, _) => Inserted::Conflict,
            (0, -1) => Inserted::Unit(lits[0]),
            _ => Inserted::Stable,
        };
        let cref = self.slots.len() as u32;
        self.watches[lits[0].code()].push(cref);
        self.watches[lits[1].code()].push(cref);
        self.slots.push(ClauseSlot { lits, kind, deleted: false, activity: 0.0 });
        (cref, state)
    }

    // -- propagation ---------------------------------------------------------

    fn propagate(&mut self) -> Result<Option<u32>, EnumError> {
        while self.queue_head < self.trail.len() {
            let p = self.trail[self.queue_head];
            self.queue_head += 1;
            self.stats.propagations += 1;
            self.tick()?;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let mut kept = 0;
            let mut i = 0;
            while i < ws.len() {
                let cref = ws[i];
                i += 1;
                if self.slots[cref as usize].deleted {
                    continue;
                }
                let slot = &mut self.slots[cref as usize];
                if slot.lits[0] == false_lit {
                    slot.lits.swap(0, 1);
                }
                debug_assert_eq!(slot.lits[1], false_lit);
                let first = slot.lits[0];
                if self.lit_value(first) == 1 {
                    ws[kept] = cref;
                    kept += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.slots[cref as usize].lits.len() {
                    let cand = self.slots[cref as usize].lits[k];
                    if self.lit_value(cand) != -1 {
                        self.slots[cref as usize].lits.swap(1, k);
                        self.watches[cand.code()].push(cref);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[kept] = cref;
                kept += 1;
                if self.lit_value(first) == -1 {
                    while i < ws.len() {
                        ws[kept] = ws[i];
                        kept += 1;
                        i += 1;
                    }
                    ws.truncate(kept);
                    self.watches[false_lit.code()] = ws;
                    return Ok(Some(cref));
                }
                self.enqueue(first, cref);
            }
            ws.truncate(kept);
            self.watches[false_lit.code()] = ws;
        }
        Ok(None)
    }

    // -- conflict analysis ---------------------------------------------------

    /// First-UIP analysis. Returns the learned clause (asserting literal
    /// first) and its asserting level.
    fn analyze(&mut self, confl: u32) -> (Vec<Lit>, usize) {
        let cur_level = self.decision_level() as u32;
        let mut seen = vec![false; self.num_vars];
        let mut learned: Vec<Lit> = Vec::new();
        let mut to_resolve = 0usize;
        let mut index = self.trail.len();
        let mut cref = confl;
        let mut skip_first = false;

        let uip = loop {
            self.bump_clause(cref);
            let lits = self.slots[cref as usize].lits.clone();
            for &q in lits.iter().skip(usize::from(skip_first)) {
                let pos = q.var().pos();
                if seen[pos] || self.level[pos] == 0 {
                    continue;
                }
                seen[pos] = true;
                self.bump_var(q.var());
                if self.level[pos] >= cur_level {
                    to_resolve += 1;
                } else {
                    learned.push(q);
                }
            }
            let p = loop {
                index -= 1;
                let l = self.trail[index];
                if seen[l.var().pos()] {
                    break l;
                }
            };
            seen[p.var().pos()] = false;
            to_resolve -= 1;
            if to_resolve == 0 {
                break p;
            }
            cref = self.reason[p.var().pos()];
            debug_assert_ne!(cref, NO_REASON, "only the UIP may be reasonless");
            skip_first = true;
        };

        let mut clause = Vec::with_capacity(learned.len() + 1);
        clause.push(!uip);
        clause.extend(learned);
        // Asserting level: deepest level among the non-UIP literals, with the
        // literal at that level watched second.
        let mut assert_level = 0;
        for i in 1..clause.len() {
            let lvl = self.level[clause[i].var().pos()] as usize;
            if lvl > assert_level {
                assert_level = lvl;
                clause.swap(1, i);
            }
        }
        (clause, assert_level)
    }

    fn handle_free_conflict(&mut self, confl: u32) -> Result<(), EnumError> {
        let (clause, assert_level) = self.analyze(confl);
        self.act_inc /= 0.95;
        self.clause_inc /= 0.999;
        // Never retract controlled levels: clamp the backjump to bl.
        let target = assert_level.max(self.bl());
        self.backtrack_to(target);
        let asserted = clause[0];
        if clause.len() == 1 {
            // Globally valid only when no blocking clause exists, which is
            // exactly the bl = 0 case the clamp leaves us in.
            self.enqueue(asserted, NO_REASON);
        } else {
            let (cref, state) = self.insert_clause(clause, ClauseKind::Learned);
            self.learned_refs.push(cref);
            debug_assert!(matches!(state, Inserted::Unit(_)));
            self.enqueue(asserted, cref);
        }
        self.reduce_learned_if_needed();
        self.maybe_restart();
        Ok(())
    }

    fn maybe_restart(&mut self) {
        self.conflicts_since_restart += 1;
        let threshold = 64 * luby(self.restarts_done);
        if self.conflicts_since_restart >= threshold {
            self.conflicts_since_restart = 0;
            self.restarts_done += 1;
            self.stats.restarts += 1;
            // Restarts never disturb the controlled prefix.
            self.backtrack_to(self.bl());
        }
    }

    fn reduce_learned_if_needed(&mut self) {
        if self.learned_refs.len() <= self.opts.learned_cap {
            return;
        }
        let reasons: HashSet<u32> = self
            .trail
            .iter()
            .map(|l| self.reason[l.var().pos()])
            .filter(|&r| r != NO_REASON)
            .collect();
        let mut live: Vec<u32> = self
            .learned_refs
            .iter()
            .copied()
            .filter(|&c| {
                let slot = &self.slots[c as usize];
                !slot.deleted && slot.kind == ClauseKind::Learned
            })
            .collect();
        live.sort_by(|&a, &b| {
            self.slots[a as usize]
                .activity
                .partial_cmp(&self.slots[b as usize].activity)
                .expect("clause activities are finite")
        });
        let goal = live.len() / 2;
        let mut removed = 0;
        for &cref in &live {
            if removed >= goal {
                break;
            }
            if reasons.contains(&cref) || self.slots[cref as usize].lits.len() <= 2 {
                continue;
            }
            let slot = &mut self.slots[cref as usize];
            slot.deleted = true;
            slot.lits = Vec::new();
            removed += 1;
        }
        self.learned_refs.retain(|&c| !self.slots[c as usize].deleted);
    }

    // -- controlled region ----------------------------------------------------

    /// Flips the deepest unflipped controlled decision after popping flipped
    /// ones. Returns false when the stack is exhausted, ending the search.
    fn flip_controlled(&mut self) -> bool {
        while let Some(top) = self.controlled.last() {
            if top.flipped {
                self.backtrack_to(self.bl() - 1);
                self.controlled.pop();
            } else {
                break;
            }
        }
        let Some(top_index) = self.controlled.len().checked_sub(1) else {
            return false;
        };
        let flip_level = top_index + 1;
        self.backtrack_to(flip_level - 1);
        self.delete_blocking_from(flip_level);
        let flipped_lit = !self.controlled[top_index].lit;
        self.controlled[top_index].lit = flipped_lit;
        self.controlled[top_index].flipped = true;
        self.new_decision(flipped_lit);
        true
    }

    /// Deletes every blocking clause coupled at or below controlled level
    /// `tag`; all of them contain the negation of the flipped decision.
    fn delete_blocking_from(&mut self, tag: usize) {
        while let Some(&(t, cref)) = self.blocking_stack.last() {
            if t < tag {
                break;
            }
            let slot = &mut self.slots[cref as usize];
            slot.deleted = true;
            slot.lits = Vec::new();
            self.blocking_stack.pop();
        }
    }

    // -- solution handling ----------------------------------------------------

    fn live_blocking_clauses(&self) -> Vec<Clause> {
        self.blocking_stack
            .iter()
            .map(|&(_, cref)| Clause::new(self.slots[cref as usize].lits.iter().copied()))
            .collect()
    }

    fn controlled_lits(&self) -> Vec<Lit> {
        self.controlled.iter().map(|e| e.lit).collect()
    }

    /// Counts the solution on the trail, blocks its cube, and forces the
    /// next controlled decision. Returns false when the search is exhausted.
    fn process_solution(&mut self, count: &mut BigCount) -> bool {
        debug_assert_eq!(self.trail.len(), self.num_vars);
        let theta = Assignment::from_lits(self.trail.iter().copied());
        let cube = if self.opts.minimize {
            shrink(
                &theta,
                &self.original,
                &self.live_blocking_clauses(),
                &self.controlled_lits(),
                &self.pf,
                &self.freq,
            )
        } else {
            Cube::new(theta.restrict(self.pf.priority()))
        };
        *count += cube.projected_size(self.pf.priority());
        self.stats.num_cubes += 1;
        if self.opts.record_cubes {
            self.stats.cubes.push(RecordedCube { cube: cube.clone(), witness: theta });
        }

        self.backtrack_to(self.bl());
        let pick = pick_controlled_literal(
            &cube,
            |v| self.value[v.pos()] == 0,
            &self.freq,
        );
        let Some(x) = pick else {
            // Everything under the current prefix lies inside this cube.
            return self.flip_controlled();
        };
        self.controlled.push(ControlledEntry { lit: x, flipped: false });
        self.new_decision(x);
        let tag = self.controlled.len();
        let block: Vec<Lit> = cube.assignment().iter().map(|l| !l).collect();
        debug_assert!(!block.is_empty());
        if block.len() == 1 {
            // Cube {x} alone: the blocking clause (¬x) is falsified by the
            // forced decision, which is precisely an exhausted branch.
            self.stats.conflicts += 1;
            return self.flip_controlled();
        }
        let (cref, state) = self.insert_clause(block, ClauseKind::Blocking { tag });
        self.blocking_stack.push((tag, cref));
        self.stats.max_live_blocking = self.stats.max_live_blocking.max(self.blocking_stack.len());
        match state {
            Inserted::Stable => true,
            Inserted::Unit(l) => {
                self.enqueue(l, cref);
                true
            }
            Inserted::Conflict => {
                self.stats.conflicts += 1;
                self.flip_controlled()
            }
        }
    }

    fn decide_free(&mut self) {
        let mut best: Option<(f64, usize)> = None;
        for pos in 0..self.num_vars {
            if self.value[pos] == 0 {
                let score = self.activity[pos];
                if best.is_none_or(|(s, _)| score > s) {
                    best = Some((score, pos));
                }
            }
        }
        let (_, pos) = best.expect("an unassigned variable exists");
        let lit = Lit::new(Var::new(pos as u32 + 1), self.phase[pos]);
        self.new_decision(lit);
    }

    // -- main loop -------------------------------------------------------------

    pub fn run(mut self) -> Result<(BigCount, EnumStats), EnumError> {
        let mut count = BigCount::from(0u8);

        // Load the original clauses.
        let clauses = self.original.clone();
        for clause in &clauses {
            match clause.len() {
                0 => return self.finish(count),
                1 => {
                    let l = clause.iter().next().expect("unit literal");
                    match self.lit_value(l) {
                        -1 => return self.finish(count),
                        0 => self.enqueue(l, NO_REASON),
                        _ => {}
                    }
                }
                _ => {
                    let (_, state) = self.insert_clause(clause.iter().collect(), ClauseKind::Original);
                    match state {
                        Inserted::Stable => {}
                        Inserted::Unit(l) => self.enqueue(l, NO_REASON),
                        Inserted::Conflict => return self.finish(count),
                    }
                }
            }
        }

        loop {
            match self.propagate()? {
                Some(confl) => {
                    self.stats.conflicts += 1;
                    if self.decision_level() <= self.bl() {
                        // The current controlled prefix admits no further
                        // solutions.
                        if !self.flip_controlled() {
                            break;
                        }
                    } else {
                        self.handle_free_conflict(confl)?;
                    }
                }
                None => {
                    if self.trail.len() == self.num_vars {
                        if !self.process_solution(&mut count) {
                            break;
                        }
                    } else {
                        self.decide_free();
                    }
                }
            }
        }
        self.finish(count)
    }

    fn finish(mut self, count: BigCount) -> Result<(BigCount, EnumStats), EnumError> {
        self.stats.total_count = count.clone();
        Ok((count, self.stats))
    }
}

fn luby(i: u64) -> u64 {
    // Sequence 1 1 2 1 1 2 4 ... as powers of two.
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    let mut x = i;
    while size - 1 != x {
        size = (size - 1) / 2;
        seq -= 1;
        x %= size;
    }
    1 << seq
}

/// Exact `ct(F, P)` by blocking-clause enumeration.
pub fn enumerate_count(
    pf: &ProjectedCnf,
    minimize: bool,
) -> Result<(BigCount, EnumStats), EnumError> {
    enumerate_with(pf, EnumOptions { minimize, ..EnumOptions::default() })
}

pub fn enumerate_with(
    pf: &ProjectedCnf,
    opts: EnumOptions,
) -> Result<(BigCount, EnumStats), EnumError> {
    Enumerator::new(pf, opts).run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{assignment, clause, CnfFormula};
    use crate::gen;
    use crate::oracle;

    fn example1() -> ProjectedCnf {
        let f = CnfFormula::new(
            6,
            vec![
                clause(&[-2, 4, -1]),
                clause(&[-3, -5, 6]),
                clause(&[3, -6, -1]),
                clause(&[6, 5, -1, 3]),
                clause(&[3, 6, -5, -1]),
                clause(&[1, 2]),
            ],
        );
        let p = [1, 2, 3].iter().map(|&i| Var::new(i)).collect();
        ProjectedCnf::new(f, p)
    }

    fn cube_lits(c: &Cube) -> Vec<i32> {
        c.assignment().iter().map(Lit::to_dimacs).collect()
    }

    #[test]
    fn shrink_first_solution_of_worked_example() {
        let pf = example1();
        let freq = LitFrequencies::from_clauses(6, pf.formula().clauses());
        let theta = assignment(&[1, -2, 4, 6, 3, -5]);
        let cube = shrink(&theta, pf.formula().clauses(), &[], &[], &pf, &freq);
        assert_eq!(cube_lits(&cube), vec![1, 3]); // {p, r}
        assert_eq!(cube.projected_size(pf.priority()), BigCount::from(2u8));
    }

    #[test]
    fn shrink_respects_blocking_clauses() {
        let pf = example1();
        let freq = LitFrequencies::from_clauses(6, pf.formula().clauses());
        let theta = assignment(&[3, -1, 2, -5, 6, 4]);
        let controlled = [Lit::from_dimacs(3)];
        let blocking = [clause(&[-3, -1])];
        let cube = shrink(&theta, pf.formula().clauses(), &blocking, &controlled, &pf, &freq);
        assert_eq!(cube_lits(&cube), vec![-1, 2, 3]); // {r, ¬p, q}
        // Without the blocking clause the cube would miss ¬p and be wrong.
        let wrong = shrink(&theta, pf.formula().clauses(), &[], &controlled, &pf, &freq);
        assert_eq!(cube_lits(&wrong), vec![2, 3]);
    }

    #[test]
    fn shrink_single_clause_minimal_hitting() {
        let f = CnfFormula::new(2, vec![clause(&[1])]);
        let p = [1, 2].iter().map(|&i| Var::new(i)).collect();
        let pf = ProjectedCnf::new(f, p);
        let freq = LitFrequencies::from_clauses(2, pf.formula().clauses());
        let theta = assignment(&[1, 2]);
        let cube = shrink(&theta, pf.formula().clauses(), &[], &[], &pf, &freq);
        assert_eq!(cube_lits(&cube), vec![1]);
        assert_eq!(cube.projected_size(pf.priority()), BigCount::from(2u8));
    }

    #[test]
    fn pick_prefers_frequency_then_index() {
        let pf = example1();
        let freq = LitFrequencies::from_clauses(6, pf.formula().clauses());
        // freq(r) = 3 beats freq(p) = 1
        let cube = Cube::new(assignment(&[3, 1]));
        assert_eq!(
            pick_controlled_literal(&cube, |_| true, &freq),
            Some(Lit::from_dimacs(3))
        );
        assert_eq!(pick_controlled_literal(&cube, |_| false, &freq), None);
        let single = Cube::new(assignment(&[1]));
        assert_eq!(
            pick_controlled_literal(&single, |_| true, &freq),
            Some(Lit::from_dimacs(1))
        );
    }

    #[test]
    fn example1_counts_4_in_both_modes() {
        let pf = example1();
        let opts = EnumOptions { record_cubes: true, ..EnumOptions::default() };
        let (with_min, s1) = enumerate_with(&pf, opts).unwrap();
        assert_eq!(with_min, BigCount::from(4u8));
        // Three cubes of sizes 2, 1, 1.
        let mut sizes: Vec<BigCount> = s1
            .cubes
            .iter()
            .map(|rc| rc.cube.projected_size(pf.priority()))
            .collect();
        sizes.sort();
        assert_eq!(
            sizes,
            vec![BigCount::from(1u8), BigCount::from(1u8), BigCount::from(2u8)]
        );
        let (without, s2) = enumerate_count(&pf, false).unwrap();
        assert_eq!(without, BigCount::from(4u8));
        assert_eq!(s2.num_cubes, 4); // pure enumeration: unit cubes
        assert_eq!(s2.r_statistic(), Some(0.0));
        assert!(s1.num_cubes <= s2.num_cubes);
    }

    #[test]
    fn zero_variable_formula_counts_one() {
        let pf = ProjectedCnf::all_priority(CnfFormula::empty(0));
        assert_eq!(enumerate_count(&pf, true).unwrap().0, BigCount::from(1u8));
        assert_eq!(enumerate_count(&pf, false).unwrap().0, BigCount::from(1u8));
    }

    #[test]
    fn unsat_counts_zero() {
        let f = CnfFormula::new(2, vec![clause(&[1]), clause(&[-1])]);
        let pf = ProjectedCnf::all_priority(f);
        assert_eq!(enumerate_count(&pf, true).unwrap().0, BigCount::from(0u8));
        assert_eq!(enumerate_count(&pf, false).unwrap().0, BigCount::from(0u8));
    }

    #[test]
    fn empty_formula_counts_whole_space() {
        let f = CnfFormula::empty(10);
        let pf = ProjectedCnf::all_priority(f);
        let (count, stats) = enumerate_count(&pf, true).unwrap();
        assert_eq!(count, BigCount::from(1024u32));
        assert_eq!(stats.num_cubes, 1);
        assert_eq!(stats.r_statistic(), Some(10.0));

        let (count, stats) = enumerate_count(&pf, false).unwrap();
        assert_eq!(count, BigCount::from(1024u32));
        assert_eq!(stats.num_cubes, 1024);
        assert_eq!(stats.r_statistic(), Some(0.0));
    }

    #[test]
    fn matches_oracle_on_random_instances() {
        for seed in 0..50 {
            let n = 8 + (seed % 8) as u32;
            let m = n / 2 + (seed % 4) as u32 * n;
            let k = 3 + (seed % (n as u64 - 3)) as u32;
            let pf = gen::gen_uf3sat(n, m, k, seed).unwrap();
            let want = oracle::count_projected_bruteforce(&pf).unwrap();
            let (min_count, stats) = enumerate_count(&pf, true).unwrap();
            assert_eq!(min_count, want, "minimize n={n} m={m} k={k} seed={seed}");
            assert!(stats.max_live_blocking <= k as usize);
            let (plain_count, _) = enumerate_count(&pf, false).unwrap();
            assert_eq!(plain_count, want, "plain n={n} m={m} k={k} seed={seed}");
        }
    }

    #[test]
    fn aggressive_learned_deletion_keeps_counts() {
        for seed in [2, 29] {
            let pf = gen::gen_uf3sat(13, 39, 8, seed).unwrap();
            let base = enumerate_with(&pf, EnumOptions::default()).unwrap().0;
            let aggressive = enumerate_with(
                &pf,
                EnumOptions { learned_cap: 4, ..EnumOptions::default() },
            )
            .unwrap()
            .0;
            assert_eq!(base, aggressive);
        }
    }

    #[test]
    fn recorded_cubes_partition_the_projected_models() {
        for seed in [5, 6, 7] {
            let pf = gen::gen_uf3sat(10, 25, 6, seed).unwrap();
            let opts = EnumOptions { record_cubes: true, ..EnumOptions::default() };
            let (count, stats) = enumerate_with(&pf, opts).unwrap();
            let sum: BigCount = stats
                .cubes
                .iter()
                .map(|rc| rc.cube.projected_size(pf.priority()))
                .sum();
            assert_eq!(sum, count);
            // pairwise disjoint: some variable appears with opposite signs
            for (i, a) in stats.cubes.iter().enumerate() {
                for b in &stats.cubes[i + 1..] {
                    let clash = a
                        .cube
                        .assignment()
                        .iter()
                        .any(|l| b.cube.assignment().contains(!l));
                    assert!(clash, "cubes {i} overlap");
                }
            }
        }
    }

    #[test]
    fn luby_sequence_prefix() {
        let got: Vec<u64> = (0..9).map(luby).collect();
        assert_eq!(got, vec![1, 1, 2, 1, 1, 2, 4, 1, 1]);
    }
}
