//! Exhaustive DPLL-style projected model counter.
//!
//! Search branches on priority variables first; unit propagation runs to
//! fixpoint before every decomposition; the residual splits into connected
//! components whose counts multiply; canonicalized components are cached
//! under an LRU byte budget. A component with no unfixed priority variable
//! is a plain satisfiability check contributing 1 or 0, with the search
//! stopping at its first solution. A clause-free component with `u` unfixed
//! priority variables is a cube contributing `2^u`.
//!
//! Run with every variable prioritized and trace emission on, the same
//! search doubles as a Decision-DNNF compiler: decisions become binary OR
//! nodes over branches that conjoin the decision literal, the propagated
//! literals and the child components, and cache hits reuse graph nodes.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Zero;
use thiserror::Error;

use crate::cnf::{pow2, BigCount, Clause, CnfFormula, Lit, ProjectedCnf, Var};
use crate::ddnnf::{NnfBuilder, NnfGraph, NodeId};

#[derive(Debug, Clone, Copy)]
pub enum Branching {
    /// Weighted sum of conflict activity and occurrence count in the current
    /// component, restricted to its priority variables.
    Vsads {
        activity_weight: f64,
        occurrence_weight: f64,
    },
    /// Smallest index first; reproduces worked traces exactly.
    ByIndex,
}

#[derive(Debug, Clone)]
pub struct CounterOptions {
    pub branching: Branching,
    /// Component caching; disabling it never changes counts.
    pub caching: bool,
    /// LRU byte budget for the component cache.
    pub cache_bytes: usize,
    pub time_limit: Option<Duration>,
}

impl Default for CounterOptions {
    fn default() -> CounterOptions {
        CounterOptions {
            branching: Branching::Vsads { activity_weight: 1.0, occurrence_weight: 1.0 },
            caching: true,
            cache_bytes: 512 << 20,
            time_limit: None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CounterStats {
    /// Branching choices only; unit propagations are not decisions.
    pub decisions: u64,
    pub propagations: u64,
    pub cache_hits: u64,
    pub cache_stores: u64,
    pub cubes_detected: u64,
}

#[derive(Debug, Error)]
pub enum CounterError {
    #[error("resource limit reached after {} decisions", stats.decisions)]
    LimitReached { stats: CounterStats },
}

/// A sub-problem: unfixed variables plus the residual clauses over them.
/// Sibling components produced by [`decompose`] share no variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Sorted unfixed variables.
    pub vars: Vec<Var>,
    /// Residual clauses, each over a subset of `vars`.
    pub clauses: Vec<Clause>,
}

impl Component {
    /// Canonical byte encoding: the sorted variable list, then the clauses
    /// in sorted order with each clause's literals sorted. Equal components
    /// produce equal keys regardless of construction order; distinct
    /// components produce distinct keys, so a lookup can never return a
    /// wrong count.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut sorted: Vec<&Clause> = self.clauses.iter().collect();
        sorted.sort_by(|a, b| a.lits().cmp(b.lits()));
        sorted.dedup_by(|a, b| a == b);
        let mut key = Vec::with_capacity(4 * (self.vars.len() + 2));
        for v in &self.vars {
            key.extend_from_slice(&(v.index() as i32).to_le_bytes());
        }
        key.extend_from_slice(&0i32.to_le_bytes());
        for c in sorted {
            for l in c.iter() {
                key.extend_from_slice(&l.to_dimacs().to_le_bytes());
            }
            key.extend_from_slice(&0i32.to_le_bytes());
        }
        key
    }
}

/// Splits a residual into connected components of the clause-variable
/// incidence graph. Variables occurring in no clause come out as singleton
/// clause-free components. Components are ordered by smallest variable;
/// their variable sets partition `vars`.
pub fn decompose(vars: &[Var], clauses: &[Clause]) -> Vec<Component> {
    decompose_owned(vars, clauses.to_vec())
}

fn decompose_owned(vars: &[Var], clauses: Vec<Clause>) -> Vec<Component> {
    // `vars` is sorted, so positions come from binary search.
    let index = |v: Var| vars.binary_search(&v).expect("clause variable inside component");
    let mut parent: Vec<u32> = (0..vars.len() as u32).collect();

    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }

    for clause in &clauses {
        debug_assert!(!clause.is_empty(), "decompose expects a conflict-free residual");
        let mut lits = clause.iter();
        let first = index(lits.next().expect("non-empty clause").var()) as u32;
        for l in lits {
            let (a, b) = (find(&mut parent, first), find(&mut parent, index(l.var()) as u32));
            parent[a.max(b) as usize] = a.min(b);
        }
    }

    // Iterating vars in sorted order numbers components by smallest member.
    let mut comp_of_root: HashMap<u32, usize> = HashMap::new();
    let mut parts: Vec<Component> = Vec::new();
    for (i, &v) in vars.iter().enumerate() {
        let root = find(&mut parent, i as u32);
        let comp = *comp_of_root.entry(root).or_insert_with(|| {
            parts.push(Component { vars: Vec::new(), clauses: Vec::new() });
            parts.len() - 1
        });
        parts[comp].vars.push(v);
    }
    for clause in clauses {
        let first = index(clause.iter().next().expect("non-empty clause").var()) as u32;
        let root = find(&mut parent, first);
        let comp = comp_of_root[&root];
        parts[comp].clauses.push(clause);
    }
    parts
}

// ---------------------------------------------------------------------------
// Component cache
// ---------------------------------------------------------------------------

struct CacheEntry {
    count: BigCount,
    node: Option<NodeId>,
    stamp: u64,
}

/// Exact-key component cache with least-recently-used eviction under a byte
/// budget. Keys are compared by their full canonical bytes, so hash
/// collisions cannot corrupt counts; eviction only discards reuse.
struct ComponentCache {
    map: HashMap<Arc<[u8]>, CacheEntry>,
    lru: BTreeMap<u64, Arc<[u8]>>,
    clock: u64,
    bytes: usize,
    budget: usize,
}

impl ComponentCache {
    fn new(budget: usize) -> ComponentCache {
        ComponentCache { map: HashMap::new(), lru: BTreeMap::new(), clock: 0, bytes: 0, budget }
    }

    fn get(&mut self, key: &[u8]) -> Option<(BigCount, Option<NodeId>)> {
        let key_arc = self.map.get_key_value(key).map(|(k, _)| k.clone())?;
        let entry = self.map.get_mut(key).expect("entry just found");
        self.clock += 1;
        self.lru.remove(&entry.stamp);
        entry.stamp = self.clock;
        self.lru.insert(self.clock, key_arc);
        Some((entry.count.clone(), entry.node))
    }

    fn peek(&self, key: &[u8]) -> Option<BigCount> {
        self.map.get(key).map(|e| e.count.clone())
    }

    fn insert(&mut self, key: Vec<u8>, count: BigCount, node: Option<NodeId>) {
        if self.map.contains_key(key.as_slice()) {
            return; // idempotent for equal keys
        }
        let size = Self::entry_size(&key, &count);
        while self.bytes + size > self.budget {
            let Some((_, victim)) = self.lru.pop_first() else { break };
            if let Some(e) = self.map.remove(victim.as_ref()) {
                self.bytes -= Self::entry_size(&victim, &e.count);
            }
        }
        if size > self.budget {
            return;
        }
        self.clock += 1;
        let key: Arc<[u8]> = key.into();
        self.lru.insert(self.clock, key.clone());
        self.map.insert(key, CacheEntry { count, node, stamp: self.clock });
        self.bytes += size;
    }

    fn entry_size(key: &[u8], count: &BigCount) -> usize {
        key.len() + (count.bits() as usize).div_ceil(8) + 96
    }
}

// ---------------------------------------------------------------------------
// Search engine
// ---------------------------------------------------------------------------

const TICK_MASK: u64 = (1 << 14) - 1;

struct Engine {
    priority: Vec<bool>,
    value: Vec<i8>,
    activity: Vec<f64>,
    act_inc: f64,
    branching: Branching,
    cache: Option<ComponentCache>,
    builder: Option<NnfBuilder>,
    stats: CounterStats,
    deadline: Option<Instant>,
    ticks: u64,
}

enum Propagation {
    Conflict { fixed: Vec<Lit> },
    Fixpoint { fixed: Vec<Lit>, residual: Vec<Clause> },
}

impl Engine {
    fn new(pf: &ProjectedCnf, opts: &CounterOptions) -> Engine {
        let n = pf.formula().num_vars() as usize;
        Engine {
            priority: pf.priority_mask(),
            value: vec![0; n],
            activity: vec![0.0; n],
            act_inc: 1.0,
            branching: opts.branching,
            cache: opts.caching.then(|| ComponentCache::new(opts.cache_bytes)),
            builder: None,
            stats: CounterStats::default(),
            deadline: opts.time_limit.map(|limit| Instant::now() + limit),
            ticks: 0,
        }
    }

    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[l.var().pos()];
        if l.is_positive() {
            v
        } else {
            -v
        }
    }

    fn assign(&mut self, l: Lit) {
        debug_assert_eq!(self.value[l.var().pos()], 0);
        self.value[l.var().pos()] = if l.is_positive() { 1 } else { -1 };
    }

    fn unassign_all(&mut self, lits: &[Lit]) {
        for l in lits.iter().rev() {
            self.value[l.var().pos()] = 0;
        }
    }

    /// Cooperative deadline check, rate-limited to every 2^14 ticks.
    fn tick(&mut self) -> Result<(), CounterError> {
        self.ticks += 1;
        if self.ticks & TICK_MASK == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(CounterError::LimitReached { stats: self.stats.clone() });
                }
            }
        }
        Ok(())
    }

    fn bump_clause(&mut self, clause: &Clause) {
        for l in clause.iter() {
            self.activity[l.var().pos()] += self.act_inc;
        }
        self.act_inc /= 0.95;
        if self.act_inc > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.act_inc *= 1e-100;
        }
    }

    /// Unit propagation to fixpoint over `clauses`, then the residual.
    /// Occurrence lists keep each propagated literal's cost proportional to
    /// its occurrences, so long definitional cascades stay linear.
    fn propagate(&mut self, clauses: &[Clause]) -> Result<Propagation, CounterError> {
        let mut fixed: Vec<Lit> = Vec::new();
        let mut satisfied = vec![false; clauses.len()];
        let mut remaining: Vec<u32> = Vec::with_capacity(clauses.len());
        let mut occ: HashMap<Var, Vec<u32>> = HashMap::new();
        let mut queue: Vec<Lit> = Vec::new();

        for (i, clause) in clauses.iter().enumerate() {
            let mut unassigned = 0u32;
            let mut unit = None;
            for l in clause.iter() {
                occ.entry(l.var()).or_default().push(i as u32);
                match self.lit_value(l) {
                    1 => satisfied[i] = true,
                    0 => {
                        unassigned += 1;
                        unit.get_or_insert(l);
                    }
                    _ => {}
                }
            }
            remaining.push(unassigned);
            if !satisfied[i] {
                match unassigned {
                    0 => {
                        self.bump_clause(clause);
                        return Ok(Propagation::Conflict { fixed });
                    }
                    1 => queue.push(unit.expect("counted one unassigned literal")),
                    _ => {}
                }
            }
        }

        let mut head = 0;
        while head < queue.len() {
            let l = queue[head];
            head += 1;
            match self.lit_value(l) {
                1 => continue, // implied twice
                -1 => {
                    // Two clauses forced complementary units.
                    return Ok(Propagation::Conflict { fixed });
                }
                _ => {}
            }
            self.assign(l);
            fixed.push(l);
            self.stats.propagations += 1;
            self.tick()?;
            for &ci in occ.get(&l.var()).into_iter().flatten() {
                let ci = ci as usize;
                if satisfied[ci] {
                    continue;
                }
                let clause = &clauses[ci];
                if clause.iter().any(|x| self.lit_value(x) == 1) {
                    satisfied[ci] = true;
                    continue;
                }
                remaining[ci] -= 1;
                match remaining[ci] {
                    0 => {
                        self.bump_clause(clause);
                        return Ok(Propagation::Conflict { fixed });
                    }
                    1 => {
                        let unit = clause
                            .iter()
                            .find(|x| self.lit_value(*x) == 0)
                            .expect("one literal left unassigned");
                        queue.push(unit);
                    }
                    _ => {}
                }
            }
        }

        let mut residual = Vec::new();
        for clause in clauses {
            let mut lits = Vec::with_capacity(clause.len());
            let mut satisfied = false;
            for l in clause.iter() {
                match self.lit_value(l) {
                    1 => {
                        satisfied = true;
                        break;
                    }
                    0 => lits.push(l),
                    _ => {}
                }
            }
            if !satisfied {
                debug_assert!(lits.len() >= 2, "fixpoint leaves no unit or empty clause");
                residual.push(Clause::from_sorted(lits));
            }
        }
        Ok(Propagation::Fixpoint { fixed, residual })
    }

    /// Propagates, decomposes the residual, and multiplies part counts.
    /// `decision` is a literal the caller just assigned; it only matters for
    /// the compile trace.
    fn solve_sub(
        &mut self,
        vars: &[Var],
        clauses: &[Clause],
        decision: Option<Lit>,
    ) -> Result<(BigCount, Option<NodeId>), CounterError> {
        let (fixed, residual) = match self.propagate(clauses)? {
            Propagation::Conflict { fixed } => {
                self.unassign_all(&fixed);
                let node = self.builder.as_mut().map(|b| b.mk_false());
                return Ok((BigCount::zero(), node));
            }
            Propagation::Fixpoint { fixed, residual } => (fixed, residual),
        };

        let unfixed: Vec<Var> = vars
            .iter()
            .copied()
            .filter(|v| self.value[v.pos()] == 0)
            .collect();
        let mut count = BigCount::from(1u8);
        let mut children: Vec<NodeId> = Vec::new();
        for part in decompose_owned(&unfixed, residual) {
            let (c, node) = match self.count_component(part) {
                Ok(r) => r,
                Err(e) => {
                    self.unassign_all(&fixed);
                    return Err(e);
                }
            };
            if c.is_zero() {
                count = BigCount::zero();
                break;
            }
            count *= &c;
            if let Some(n) = node {
                children.push(n);
            }
        }

        let node = match &mut self.builder {
            Some(b) if count.is_zero() => Some(b.mk_false()),
            Some(b) => {
                let mut ch = Vec::with_capacity(children.len() + fixed.len() + 1);
                for &l in decision.iter().chain(fixed.iter()) {
                    ch.push(b.lit(l));
                }
                ch.extend(children);
                Some(b.and(ch))
            }
            None => None,
        };
        self.unassign_all(&fixed);
        Ok((count, node))
    }

    fn count_component(
        &mut self,
        comp: Component,
    ) -> Result<(BigCount, Option<NodeId>), CounterError> {
        if comp.clauses.is_empty() {
            self.stats.cubes_detected += 1;
            let unfixed_priority =
                comp.vars.iter().filter(|v| self.priority[v.pos()]).count();
            let node = self.builder.as_mut().map(|b| b.mk_true());
            return Ok((pow2(unfixed_priority), node));
        }

        let key = self.cache.as_ref().map(|_| comp.canonical_key());
        if let (Some(cache), Some(k)) = (&mut self.cache, &key) {
            if let Some((count, node)) = cache.get(k) {
                self.stats.cache_hits += 1;
                return Ok((count, node));
            }
        }

        let has_priority = comp.vars.iter().any(|v| self.priority[v.pos()]);
        let (count, node) = if !has_priority {
            // Pure non-priority component: a satisfiability check, counting
            // 1 or 0. This realizes the parent-marking contract; the first
            // solution ends the search below here.
            debug_assert!(self.builder.is_none(), "compile mode has P = V");
            let sat = self.sat_search(&comp.clauses)?;
            (BigCount::from(u8::from(sat)), None)
        } else {
            let v = self.pick_branch_var(&comp);
            self.stats.decisions += 1;
            self.tick()?;
            let pos = v.lit();
            self.assign(pos);
            let pos_result = self.solve_sub(&comp.vars, &comp.clauses, Some(pos));
            self.value[v.pos()] = 0;
            let (c_pos, n_pos) = pos_result?;

            self.assign(!pos);
            let neg_result = self.solve_sub(&comp.vars, &comp.clauses, Some(!pos));
            self.value[v.pos()] = 0;
            let (c_neg, n_neg) = neg_result?;

            let count = &c_pos + &c_neg;
            let node = self.builder.as_mut().map(|b| {
                match (c_pos.is_zero(), c_neg.is_zero()) {
                    (false, false) => {
                        b.or(Some(v), vec![n_pos.expect("traced"), n_neg.expect("traced")])
                    }
                    (false, true) => n_pos.expect("traced"),
                    (true, false) => n_neg.expect("traced"),
                    (true, true) => b.mk_false(),
                }
            });
            (count, node)
        };

        if let (Some(cache), Some(k)) = (&mut self.cache, key) {
            cache.insert(k, count.clone(), node);
            self.stats.cache_stores += 1;
        }
        Ok((count, node))
    }

    /// Plain DPLL satisfiability on a non-priority component.
    fn sat_search(&mut self, clauses: &[Clause]) -> Result<bool, CounterError> {
        let (fixed, residual) = match self.propagate(clauses)? {
            Propagation::Conflict { fixed } => {
                self.unassign_all(&fixed);
                return Ok(false);
            }
            Propagation::Fixpoint { fixed, residual } => (fixed, residual),
        };
        if residual.is_empty() {
            self.unassign_all(&fixed);
            return Ok(true);
        }
        let branch = residual[0].iter().next().expect("non-empty clause");
        self.stats.decisions += 1;
        for lit in [branch, !branch] {
            self.assign(lit);
            let sat = self.sat_search(&residual);
            self.value[lit.var().pos()] = 0;
            match sat {
                Ok(true) => {
                    self.unassign_all(&fixed);
                    return Ok(true);
                }
                Ok(false) => {}
                Err(e) => {
                    self.unassign_all(&fixed);
                    return Err(e);
                }
            }
        }
        self.unassign_all(&fixed);
        Ok(false)
    }

    fn pick_branch_var(&self, comp: &Component) -> Var {
        match self.branching {
            Branching::ByIndex => comp
                .vars
                .iter()
                .copied()
                .find(|v| self.priority[v.pos()])
                .expect("component has a priority variable"),
            Branching::Vsads { activity_weight, occurrence_weight } => {
                let mut occurrences = vec![0u32; comp.vars.len()];
                for c in &comp.clauses {
                    for l in c.iter() {
                        let i = comp
                            .vars
                            .binary_search(&l.var())
                            .expect("clause variable inside component");
                        occurrences[i] += 1;
                    }
                }
                let mut best: Option<(f64, Var)> = None;
                for (i, &v) in comp.vars.iter().enumerate() {
                    if !self.priority[v.pos()] {
                        continue;
                    }
                    let score = activity_weight * self.activity[v.pos()]
                        + occurrence_weight * f64::from(occurrences[i]);
                    if best.is_none_or(|(s, _)| score > s) {
                        best = Some((score, v));
                    }
                }
                best.expect("component has a priority variable").1
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

/// A counting session; keeps its component cache inspectable afterwards.
pub struct Counter {
    engine: Engine,
    pf: ProjectedCnf,
}

impl Counter {
    pub fn new(pf: &ProjectedCnf, opts: &CounterOptions) -> Counter {
        Counter { engine: Engine::new(pf, opts), pf: pf.clone() }
    }

    /// Exact `ct(F, P)` plus run statistics.
    pub fn count(&mut self) -> Result<(BigCount, CounterStats), CounterError> {
        let vars: Vec<Var> = self.pf.formula().vars().collect();
        let clauses = self.pf.formula().clauses().to_vec();
        let (count, _) = self.engine.solve_sub(&vars, &clauses, None)?;
        Ok((count, self.engine.stats.clone()))
    }

    /// The cached count stored for `comp`, if any. Lookup by canonical key;
    /// intended for inspecting a finished run.
    pub fn cached_component_count(&self, comp: &Component) -> Option<BigCount> {
        self.engine.cache.as_ref()?.peek(&comp.canonical_key())
    }

    pub fn stats(&self) -> &CounterStats {
        &self.engine.stats
    }
}

/// One-shot projected count.
pub fn count_projected(
    pf: &ProjectedCnf,
    opts: &CounterOptions,
) -> Result<(BigCount, CounterStats), CounterError> {
    Counter::new(pf, opts).count()
}

/// Compiles a formula into a Decision-DNNF by running the counter over all
/// variables with trace emission on. Unsatisfiable input yields the false
/// graph; an unconstrained formula yields the true graph.
pub fn compile_ddnnf(
    f: &CnfFormula,
    opts: &CounterOptions,
) -> Result<(NnfGraph, CounterStats), CounterError> {
    let pf = ProjectedCnf::all_priority(f.clone());
    let mut engine = Engine::new(&pf, opts);
    engine.builder = Some(NnfBuilder::new(f.num_vars()));
    let vars: Vec<Var> = f.vars().collect();
    let (_, node) = engine.solve_sub(&vars, f.clauses(), None)?;
    let root = node.expect("compile mode always builds a node");
    let builder = engine.builder.take().expect("still compiling");
    Ok((builder.finish(root), engine.stats))
}
