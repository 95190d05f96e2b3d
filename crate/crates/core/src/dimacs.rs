//! DIMACS CNF reader/writer with projection-set declarations.
//!
//! The accepted dialect is the usual `p cnf <vars> <clauses>` header followed
//! by zero-terminated clauses. Projection sets are declared in comment lines
//! of the form `c p show v1 ... vk 0` or `c ind v1 ... vk 0`; multiple
//! declarations are unioned. Without a declaration, every variable is a
//! priority variable.

use std::collections::BTreeSet;
use std::io::{self, Write};

use thiserror::Error;

use crate::cnf::{Clause, CnfFormula, Lit, ProjectedCnf, Var};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header: {msg}")]
    BadHeader { line: usize, msg: String },
    #[error("line {line}: missing `p cnf` header before clause data")]
    MissingHeader { line: usize },
    #[error("line {line}: duplicate `p cnf` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: bad token {token:?}")]
    BadToken { line: usize, token: String },
    #[error("line {line}: variable {var} out of range (declared {declared})")]
    VarOutOfRange { line: usize, var: u32, declared: u32 },
    #[error("line {line}: clause not terminated by 0")]
    UnterminatedClause { line: usize },
    #[error("line {line}: projection declaration not terminated by 0")]
    UnterminatedProjection { line: usize },
    #[error("header declared {declared} clauses but the file contains {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
}

/// Parses DIMACS CNF text into a formula plus its declared projection set.
///
/// Tautological clauses are dropped with a warning (they never constrain
/// counts); they still count toward the header's clause total. Duplicate
/// literals within a clause are deduplicated.
pub fn parse_dimacs(text: &str) -> Result<ProjectedCnf, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut parsed_clauses = 0usize;
    let mut show: BTreeSet<Var> = BTreeSet::new();
    let mut saw_show = false;
    let mut pending: Vec<Lit> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        // Some benchmark suites end files with a lone `%`.
        if trimmed.starts_with('%') {
            break;
        }
        if let Some(rest) = trimmed.strip_prefix('c') {
            let rest = rest.trim_start();
            let proj = rest
                .strip_prefix("p show")
                .or_else(|| rest.strip_prefix("ind"));
            if let Some(list) = proj {
                if !pending.is_empty() {
                    return Err(ParseError::UnterminatedClause { line });
                }
                let declared = header_vars(&header);
                parse_projection(list, line, declared, &mut show)?;
                saw_show = true;
            }
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::DuplicateHeader { line });
            }
            header = Some(parse_header(trimmed, line)?);
            continue;
        }

        let (num_vars, _) = header.ok_or(ParseError::MissingHeader { line })?;
        let mut terminated = false;
        for token in trimmed.split_ascii_whitespace() {
            if terminated {
                // Several clauses on one line are fine; reopen.
                terminated = false;
            }
            let value: i64 = token
                .parse()
                .map_err(|_| ParseError::BadToken { line, token: token.to_string() })?;
            if value == 0 {
                parsed_clauses += 1;
                let clause = Clause::new(pending.drain(..));
                if clause.is_tautology() {
                    log::warn!("line {line}: dropping tautological clause {clause}");
                } else {
                    clauses.push(clause);
                }
                terminated = true;
                continue;
            }
            let var = value.unsigned_abs();
            if var > num_vars as u64 {
                return Err(ParseError::VarOutOfRange {
                    line,
                    var: var.min(u32::MAX as u64) as u32,
                    declared: num_vars,
                });
            }
            pending.push(Lit::from_dimacs(value as i32));
        }
        if !terminated && !pending.is_empty() {
            return Err(ParseError::UnterminatedClause { line });
        }
    }

    let (num_vars, num_clauses) = header.ok_or(ParseError::MissingHeader { line: text.lines().count() })?;
    if !pending.is_empty() {
        return Err(ParseError::UnterminatedClause { line: text.lines().count() });
    }
    if parsed_clauses != num_clauses {
        return Err(ParseError::ClauseCountMismatch { declared: num_clauses, found: parsed_clauses });
    }

    let formula = CnfFormula::new(num_vars, clauses);
    let priority = if saw_show { show } else { formula.vars().collect() };
    Ok(ProjectedCnf::new(formula, priority))
}

fn header_vars(header: &Option<(u32, usize)>) -> Option<u32> {
    header.map(|(v, _)| v)
}

fn parse_header(line_text: &str, line: usize) -> Result<(u32, usize), ParseError> {
    let mut it = line_text.split_ascii_whitespace();
    let bad = |msg: &str| ParseError::BadHeader { line, msg: msg.to_string() };
    if it.next() != Some("p") || it.next() != Some("cnf") {
        return Err(bad("expected `p cnf <vars> <clauses>`"));
    }
    let vars: u32 = it
        .next()
        .ok_or_else(|| bad("missing variable count"))?
        .parse()
        .map_err(|_| bad("variable count is not a nonnegative integer"))?;
    let clauses: usize = it
        .next()
        .ok_or_else(|| bad("missing clause count"))?
        .parse()
        .map_err(|_| bad("clause count is not a nonnegative integer"))?;
    if it.next().is_some() {
        return Err(bad("trailing tokens after clause count"));
    }
    Ok((vars, clauses))
}

fn parse_projection(
    list: &str,
    line: usize,
    declared: Option<u32>,
    show: &mut BTreeSet<Var>,
) -> Result<(), ParseError> {
    let mut terminated = false;
    for token in list.split_ascii_whitespace() {
        if terminated {
            return Err(ParseError::BadToken { line, token: token.to_string() });
        }
        let value: u32 = token
            .parse()
            .map_err(|_| ParseError::BadToken { line, token: token.to_string() })?;
        if value == 0 {
            terminated = true;
            continue;
        }
        if let Some(num_vars) = declared {
            if value > num_vars {
                return Err(ParseError::VarOutOfRange { line, var: value, declared: num_vars });
            }
        }
        show.insert(Var::new(value));
    }
    if !terminated {
        return Err(ParseError::UnterminatedProjection { line });
    }
    Ok(())
}

/// Writes a formula in DIMACS, always emitting the projection declaration so
/// the priority set survives a round trip even when `P = V`.
pub fn write_dimacs(pf: &ProjectedCnf, sink: &mut dyn Write) -> io::Result<()> {
    let f = pf.formula();
    writeln!(sink, "p cnf {} {}", f.num_vars(), f.clauses().len())?;
    write!(sink, "c p show")?;
    for v in pf.priority() {
        write!(sink, " {v}")?;
    }
    writeln!(sink, " 0")?;
    for clause in f.clauses() {
        for lit in clause.iter() {
            write!(sink, "{lit} ")?;
        }
        writeln!(sink, "0")?;
    }
    Ok(())
}

/// Writes a bare formula without any projection declaration, for outputs
/// that are meant to be counted in full.
pub fn write_dimacs_plain(f: &CnfFormula, sink: &mut dyn Write) -> io::Result<()> {
    writeln!(sink, "p cnf {} {}", f.num_vars(), f.clauses().len())?;
    for clause in f.clauses() {
        for lit in clause.iter() {
            write!(sink, "{lit} ")?;
        }
        writeln!(sink, "0")?;
    }
    Ok(())
}

/// [`write_dimacs`] into a `String`.
pub fn dimacs_to_string(pf: &ProjectedCnf) -> String {
    let mut buf = Vec::new();
    write_dimacs(pf, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}
