//! Seeded benchmark instance generators.
//!
//! Two families: uniform random 3-SAT (`n` variables, `m` clauses over three
//! distinct variables each) and random Boolean circuits (a working set of
//! signals is reduced to one output per round by randomly drawn AND/OR/NOT
//! gates, each gate definition encoded as equivalence clauses). Identical
//! [`GenSpec`]s produce byte-identical DIMACS output.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::cnf::{Clause, CnfFormula, Lit, ProjectedCnf, Var};
use crate::rng::Xoshiro256;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("need at least {need} variables for family {family}, got {got}")]
    TooFewVars { family: &'static str, need: u32, got: u32 },
    #[error("priority count {k} exceeds variable count {n}")]
    PriorityTooLarge { k: u32, n: u32 },
    #[error("{m} clauses requested but only {distinct} distinct 3-clauses exist over {n} variables")]
    TooManyClauses { m: u64, distinct: u64, n: u32 },
    #[error("circuit needs at least one round")]
    NoRounds,
}

/// Family-specific generator parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Uniform random 3-SAT with `vars` variables and `clauses` clauses.
    Uf3Sat { vars: u32, clauses: u32 },
    /// Random Boolean circuit over `inputs` input variables, `rounds` rounds.
    Circuit { inputs: u32, rounds: u32 },
}

/// A complete, reproducible instance description.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    /// Number of priority variables to draw.
    pub proj_count: u32,
    pub seed: u64,
}

impl GenSpec {
    pub fn generate(&self) -> Result<ProjectedCnf, GenError> {
        match self.family {
            Family::Uf3Sat { vars, clauses } => {
                gen_uf3sat(vars, clauses, self.proj_count, self.seed)
            }
            Family::Circuit { inputs, rounds } => {
                gen_circuit(inputs, rounds, self.proj_count, self.seed)
            }
        }
    }

    /// The `c gen-spec ...` comment line recorded in emitted DIMACS.
    pub fn comment_line(&self) -> String {
        format!("c gen-spec {self}")
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Uf3Sat { vars, clauses } => write!(
                f,
                "uf3sat vars={} clauses={} proj={} seed={}",
                vars, clauses, self.proj_count, self.seed
            ),
            Family::Circuit { inputs, rounds } => write!(
                f,
                "circuit inputs={} rounds={} proj={} seed={}",
                inputs, rounds, self.proj_count, self.seed
            ),
        }
    }
}

/// Uniform random 3-SAT: `m` clauses over three distinct variables with
/// independent random polarities; duplicate clauses are redrawn; the
/// priority set is `k` variables drawn without replacement.
pub fn gen_uf3sat(n: u32, m: u32, k: u32, seed: u64) -> Result<ProjectedCnf, GenError> {
    if n < 3 {
        return Err(GenError::TooFewVars { family: "uf3sat", need: 3, got: n });
    }
    if k > n {
        return Err(GenError::PriorityTooLarge { k, n });
    }
    let distinct = n as u64 * (n as u64 - 1) * (n as u64 - 2) / 6 * 8;
    if m as u64 > distinct {
        return Err(GenError::TooManyClauses { m: m as u64, distinct, n });
    }

    let mut rng = Xoshiro256::seed_from_u64(seed);
    let mut seen: HashSet<Clause> = HashSet::with_capacity(m as usize);
    let mut clauses = Vec::with_capacity(m as usize);
    while clauses.len() < m as usize {
        let mut vars = [0u32; 3];
        let mut chosen = 0;
        while chosen < 3 {
            let v = 1 + rng.below(n as u64) as u32;
            if !vars[..chosen].contains(&v) {
                vars[chosen] = v;
                chosen += 1;
            }
        }
        let clause = Clause::new(vars.iter().map(|&v| Lit::new(Var::new(v), rng.bool())));
        if seen.insert(clause.clone()) {
            clauses.push(clause);
        }
    }

    let priority = draw_priority(&mut rng, n, k);
    Ok(ProjectedCnf::new(CnfFormula::new(n, clauses), priority))
}

/// Random Boolean circuit. Each round starts from the original `n` inputs
/// and keeps gating until a single signal remains: an operator is drawn
/// uniformly from {AND, OR, NOT}, NOT consumes one operand and AND/OR
/// consume `j` operands with `j` uniform in `2..=min(4, |set|)`, a fresh
/// variable is defined by equivalence clauses and pushed back into the set.
/// Gates are definitions only; no output constraint is added.
pub fn gen_circuit(n: u32, c: u32, k: u32, seed: u64) -> Result<ProjectedCnf, GenError> {
    if n < 2 {
        return Err(GenError::TooFewVars { family: "circuit", need: 2, got: n });
    }
    if c < 1 {
        return Err(GenError::NoRounds);
    }

    let mut rng = Xoshiro256::seed_from_u64(seed);
    let mut num_vars = n;
    let mut clauses: Vec<Clause> = Vec::new();
    for _round in 0..c {
        let mut set: Vec<u32> = (1..=n).collect();
        while set.len() > 1 {
            let op = rng.below(3);
            let arity = if op == 2 {
                1
            } else {
                2 + rng.below(set.len().min(4) as u64 - 1) as usize
            };
            let mut operands = Vec::with_capacity(arity);
            for _ in 0..arity {
                let i = rng.below(set.len() as u64) as usize;
                operands.push(set.swap_remove(i));
            }
            num_vars += 1;
            let v = Lit::new(Var::new(num_vars), true);
            let ops: Vec<Lit> = operands.iter().map(|&o| Lit::new(Var::new(o), true)).collect();
            match op {
                // v <-> AND(ops)
                0 => {
                    for &o in &ops {
                        clauses.push(Clause::new([!v, o]));
                    }
                    clauses.push(Clause::new(ops.iter().map(|&o| !o).chain([v])));
                }
                // v <-> OR(ops)
                1 => {
                    for &o in &ops {
                        clauses.push(Clause::new([v, !o]));
                    }
                    clauses.push(Clause::new(ops.iter().copied().chain([!v])));
                }
                // v <-> NOT(op)
                _ => {
                    clauses.push(Clause::new([!v, !ops[0]]));
                    clauses.push(Clause::new([v, ops[0]]));
                }
            }
            set.push(num_vars);
        }
    }

    if k > num_vars {
        return Err(GenError::PriorityTooLarge { k, n: num_vars });
    }
    let priority = draw_priority(&mut rng, num_vars, k);
    Ok(ProjectedCnf::new(CnfFormula::new(num_vars, clauses), priority))
}

fn draw_priority(rng: &mut Xoshiro256, n: u32, k: u32) -> BTreeSet<Var> {
    rng.sample_distinct(n as u64, k as usize)
        .into_iter()
        .map(|i| Var::new(i as u32 + 1))
        .collect()
}
