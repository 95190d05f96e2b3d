//! Brute-force reference counting.
//!
//! Everything here enumerates assignments directly and shares no code with
//! the engineered solvers, so it can stand as an independent oracle for
//! them. It must stay obviously correct; there is nothing to optimize.

use thiserror::Error;

use crate::cnf::{pow2, BigCount, CnfFormula, ProjectedCnf, Var};

/// Largest variable block we are willing to enumerate (2^cap assignments).
pub const DEFAULT_VAR_CAP: u32 = 26;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{what} has {size} variables, above the enumeration cap {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: u32 },
}

/// Exact model count of `f` by enumerating all `2^numVars` assignments.
pub fn count_models_bruteforce(f: &CnfFormula) -> Result<BigCount, OracleError> {
    count_models_bruteforce_capped(f, DEFAULT_VAR_CAP)
}

pub fn count_models_bruteforce_capped(f: &CnfFormula, cap: u32) -> Result<BigCount, OracleError> {
    let n = f.num_vars();
    if n > cap {
        return Err(OracleError::CapExceeded { what: "formula", size: n as usize, cap });
    }
    let vars: Vec<Var> = f.vars().collect();
    let mut count = BigCount::from(0u8);
    for bits in 0u64..(1u64 << n) {
        if satisfies(f, &vars, bits) {
            count += 1u8;
        }
    }
    Ok(count)
}

/// Exact projected model count: for each of the `2^|P|` assignments to the
/// priority variables, search the `2^|N|` extensions for a model (stopping at
/// the first) and count the priority assignments that have one.
pub fn count_projected_bruteforce(pf: &ProjectedCnf) -> Result<BigCount, OracleError> {
    count_projected_bruteforce_capped(pf, DEFAULT_VAR_CAP)
}

pub fn count_projected_bruteforce_capped(
    pf: &ProjectedCnf,
    cap: u32,
) -> Result<BigCount, OracleError> {
    let priority: Vec<Var> = pf.priority().iter().copied().collect();
    let non_priority = pf.non_priority();
    if priority.len() > cap as usize {
        return Err(OracleError::CapExceeded { what: "priority set", size: priority.len(), cap });
    }
    if non_priority.len() > cap as usize {
        return Err(OracleError::CapExceeded {
            what: "non-priority set",
            size: non_priority.len(),
            cap,
        });
    }

    let f = pf.formula();
    let mut count = BigCount::from(0u8);
    let mut phase = vec![false; f.num_vars() as usize];
    for p_bits in 0u64..(1u64 << priority.len()) {
        for (i, v) in priority.iter().enumerate() {
            phase[v.pos()] = p_bits >> i & 1 == 1;
        }
        let mut extends = false;
        for n_bits in 0u64..(1u64 << non_priority.len()) {
            for (i, v) in non_priority.iter().enumerate() {
                phase[v.pos()] = n_bits >> i & 1 == 1;
            }
            if satisfies_phase(f, &phase) {
                extends = true;
                break;
            }
        }
        if extends {
            count += 1u8;
        }
    }
    Ok(count)
}

/// Evaluates `f` under the total assignment encoded by `bits` over `vars`.
fn satisfies(f: &CnfFormula, vars: &[Var], bits: u64) -> bool {
    f.clauses().iter().all(|c| {
        c.iter().any(|l| {
            let pos = vars.iter().position(|&v| v == l.var()).expect("in-range literal");
            (bits >> pos & 1 == 1) == l.is_positive()
        })
    })
}

/// Evaluates `f` under a phase vector indexed by `Var::pos`.
pub fn satisfies_phase(f: &CnfFormula, phase: &[bool]) -> bool {
    f.clauses()
        .iter()
        .all(|c| c.iter().any(|l| phase[l.var().pos()] == l.is_positive()))
}

/// Returns `2^|P|`, the trivial upper bound for a projected count.
pub fn projected_space(pf: &ProjectedCnf) -> BigCount {
    pow2(pf.priority().len())
}
