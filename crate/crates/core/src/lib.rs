//! Projected model counting (#∃SAT) toolkit.
//!
//! Given a CNF formula over variables `V` and a priority set `P ⊆ V`, the
//! projected model count is the number of assignments to `P` that extend to
//! at least one full model. This crate provides three engineered counting
//! methods plus a brute-force reference:
//!
//! * [`counter`] — exhaustive DPLL-style counting with priority-first
//!   branching, dynamic decomposition and component caching; doubles as a
//!   Decision-DNNF compiler when run over all variables.
//! * [`blocking`] — CDCL enumeration with controlled/free search, cube
//!   minimization and coupled blocking clauses.
//! * [`ddnnf`] — NNF graphs, projection by forgetting, and the `d2c`
//!   re-encoding of a projected DNNF into CNF whose model count equals the
//!   projected count.
//! * [`oracle`] — plain enumeration used to validate everything else.
//!
//! [`gen`] produces seeded benchmark instances (uniform random 3-SAT and
//! random Boolean circuits) in DIMACS with projection declarations.

pub mod blocking;
pub mod cnf;
pub mod counter;
pub mod ddnnf;
pub mod dimacs;
pub mod gen;
pub mod oracle;
mod rng;

pub use cnf::{Assignment, BigCount, Clause, CnfFormula, Cube, Lit, ProjectedCnf, Var};
