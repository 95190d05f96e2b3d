//! Core propositional data model: variables, literals, clauses, formulas,
//! assignments, residuals and cubes.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Not;

use num_bigint::BigUint;

/// Arbitrary-precision nonnegative model count.
pub type BigCount = BigUint;

/// Returns 2^exp as a [`BigCount`].
pub fn pow2(exp: usize) -> BigCount {
    BigCount::from(1u8) << exp
}

/// A propositional variable, 1-based to match DIMACS numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Creates a variable from its 1-based DIMACS index.
    ///
    /// Panics if `index` is zero.
    pub fn new(index: u32) -> Var {
        assert!(index >= 1, "variable indices are 1-based");
        Var(index)
    }

    /// The 1-based DIMACS index.
    pub fn index(self) -> u32 {
        self.0
    }

    /// Zero-based position, for array lookups.
    pub fn pos(self) -> usize {
        (self.0 - 1) as usize
    }

    /// The positive literal of this variable.
    pub fn lit(self) -> Lit {
        Lit::new(self, true)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal: a variable or its negation, stored in DIMACS signed encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lit(i32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        let v = var.index() as i32;
        Lit(if positive { v } else { -v })
    }

    /// Creates a literal from a nonzero DIMACS integer.
    pub fn from_dimacs(code: i32) -> Lit {
        assert!(code != 0, "literal codes are nonzero");
        Lit(code)
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    pub fn var(self) -> Var {
        Var(self.0.unsigned_abs())
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// Dense index `2 * var.pos() + sign`, for watch lists and the like.
    pub fn code(self) -> usize {
        2 * self.var().pos() + usize::from(!self.is_positive())
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Lit) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lit {
    fn cmp(&self, other: &Lit) -> std::cmp::Ordering {
        (self.var(), self.is_positive()).cmp(&(other.var(), other.is_positive()))
    }
}

/// A disjunction of literals, deduplicated and kept in a canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Clause {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort();
        lits.dedup();
        Clause { lits }
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    /// Wraps literals already in canonical order without re-sorting.
    pub(crate) fn from_sorted(lits: Vec<Lit>) -> Clause {
        debug_assert!(lits.windows(2).all(|w| w[0] < w[1]));
        Clause { lits }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    /// True when the clause contains a literal and its negation.
    pub fn is_tautology(&self) -> bool {
        self.lits.iter().any(|&l| self.contains(!l))
    }

    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.lits.iter().copied()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.lits.iter().map(|l| l.var()).max()
    }
}

impl FromIterator<Lit> for Clause {
    fn from_iter<I: IntoIterator<Item = Lit>>(iter: I) -> Clause {
        Clause::new(iter)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// A CNF formula: a variable count and a sequence of clauses.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    /// Builds a formula, checking that every literal is within `num_vars`.
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> CnfFormula {
        for c in &clauses {
            if let Some(v) = c.max_var() {
                assert!(
                    v.index() <= num_vars,
                    "literal over variable {v} exceeds declared count {num_vars}"
                );
            }
        }
        CnfFormula { num_vars, clauses }
    }

    pub fn empty(num_vars: u32) -> CnfFormula {
        CnfFormula { num_vars, clauses: Vec::new() }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (1..=self.num_vars).map(Var::new)
    }

    /// Set of variables that occur in at least one clause.
    pub fn occurring_vars(&self) -> BTreeSet<Var> {
        self.clauses
            .iter()
            .flat_map(|c| c.iter().map(|l| l.var()))
            .collect()
    }

    /// The residual of this formula w.r.t. `theta`: clauses satisfied by a
    /// literal of `theta` are removed, and literals whose negation is in
    /// `theta` are deleted from the remaining clauses. The variable count is
    /// preserved. Clauses whose literals are all falsified come out empty;
    /// interpreting that as a conflict is up to the caller.
    pub fn residual(&self, theta: &Assignment) -> CnfFormula {
        let mut clauses = Vec::new();
        'next: for c in &self.clauses {
            let mut kept = Vec::with_capacity(c.len());
            for l in c.iter() {
                if theta.contains(l) {
                    continue 'next;
                }
                if !theta.contains(!l) {
                    kept.push(l);
                }
            }
            clauses.push(Clause::new(kept));
        }
        CnfFormula { num_vars: self.num_vars, clauses }
    }

    /// True iff `theta` is a solution cube: every clause contains a literal
    /// of `theta`, i.e. the residual is empty.
    pub fn is_cube(&self, theta: &Assignment) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| theta.contains(l)))
    }
}

/// A CNF formula together with its priority (projection) set `P`.
///
/// The non-priority set `N = V \ P` is derived, never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedCnf {
    formula: CnfFormula,
    priority: BTreeSet<Var>,
}

impl ProjectedCnf {
    /// Builds a projected formula; priority variables must be within range.
    pub fn new(formula: CnfFormula, priority: BTreeSet<Var>) -> ProjectedCnf {
        for &v in &priority {
            assert!(
                v.index() <= formula.num_vars(),
                "priority variable {v} exceeds variable count {}",
                formula.num_vars()
            );
        }
        ProjectedCnf { formula, priority }
    }

    /// Wraps a plain formula with `P = V`.
    pub fn all_priority(formula: CnfFormula) -> ProjectedCnf {
        let priority = formula.vars().collect();
        ProjectedCnf { formula, priority }
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    pub fn priority(&self) -> &BTreeSet<Var> {
        &self.priority
    }

    pub fn is_priority(&self, v: Var) -> bool {
        self.priority.contains(&v)
    }

    /// The non-priority variables `N = V \ P`, in increasing order.
    pub fn non_priority(&self) -> Vec<Var> {
        self.formula
            .vars()
            .filter(|v| !self.priority.contains(v))
            .collect()
    }

    /// Per-variable priority membership, indexed by `Var::pos`.
    pub fn priority_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.formula.num_vars() as usize];
        for &v in &self.priority {
            mask[v.pos()] = true;
        }
        mask
    }
}

/// A consistent set of literals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    lits: BTreeSet<Lit>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    /// Builds an assignment from literals, panicking on inconsistency.
    pub fn from_lits(lits: impl IntoIterator<Item = Lit>) -> Assignment {
        let mut a = Assignment::new();
        for l in lits {
            a.insert(l);
        }
        a
    }

    /// Adds a literal. Panics if its negation is already present.
    pub fn insert(&mut self, lit: Lit) {
        assert!(
            !self.lits.contains(&!lit),
            "inconsistent assignment: both {lit} and {}",
            !lit
        );
        self.lits.insert(lit);
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.contains(&lit)
    }

    pub fn assigns(&self, var: Var) -> bool {
        self.lits.contains(&var.lit()) || self.lits.contains(&!var.lit())
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.lits.iter().copied()
    }

    /// Restriction `θ_P`: the literals whose variable lies in `vars`.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Assignment {
        Assignment {
            lits: self
                .lits
                .iter()
                .copied()
                .filter(|l| vars.contains(&l.var()))
                .collect(),
        }
    }

    /// Union of two consistent assignments; panics if they clash.
    pub fn union(&self, other: &Assignment) -> Assignment {
        let mut a = self.clone();
        for l in other.iter() {
            a.insert(l);
        }
        a
    }
}

impl FromIterator<Lit> for Assignment {
    fn from_iter<I: IntoIterator<Item = Lit>>(iter: I) -> Assignment {
        Assignment::from_lits(iter)
    }
}

/// A solution cube: a partial assignment all of whose total extensions are
/// models of the formula it was extracted from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cube {
    assignment: Assignment,
}

impl Cube {
    pub fn new(assignment: Assignment) -> Cube {
        Cube { assignment }
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    /// `size(θ) = 2^(|V| − |θ|)` over a universe of `num_vars` variables.
    pub fn size(&self, num_vars: u32) -> BigCount {
        assert!(self.assignment.len() <= num_vars as usize);
        pow2(num_vars as usize - self.assignment.len())
    }

    /// Projected size `2^(|P| − |θ_P|)`.
    pub fn projected_size(&self, priority: &BTreeSet<Var>) -> BigCount {
        let fixed = self
            .assignment
            .iter()
            .filter(|l| priority.contains(&l.var()))
            .count();
        pow2(priority.len() - fixed)
    }
}

/// Convenience for tests and examples: builds a clause from DIMACS codes.
pub fn clause(codes: &[i32]) -> Clause {
    Clause::new(codes.iter().map(|&c| Lit::from_dimacs(c)))
}

/// Convenience: builds an assignment from DIMACS codes.
pub fn assignment(codes: &[i32]) -> Assignment {
    Assignment::from_lits(codes.iter().map(|&c| Lit::from_dimacs(c)))
}
