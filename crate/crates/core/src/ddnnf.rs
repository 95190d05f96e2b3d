//! NNF graphs, c2d-format I/O, DNNF queries, projection by forgetting, and
//! the `d2c` re-encoding of a projected DNNF into CNF.
//!
//! Counting models of a deterministic decomposable graph is a bottom-up
//! satisfaction-probability computation. Projection replaces non-priority
//! literals with true, which preserves decomposability but in general
//! destroys determinism, making direct counting wrong; `d2c` instead encodes
//! the projected graph back into CNF with hash-consed introduced variables so
//! that the CNF's model count equals the projected count of the source.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{self, Write};

use num_traits::Zero;
use thiserror::Error;

use crate::cnf::{pow2, BigCount, Clause, CnfFormula, Lit, ProjectedCnf, Var};
use crate::counter::{self, CounterError, CounterOptions};

pub type NodeId = usize;

/// A node of an NNF graph. Children always precede parents in the node list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NnfNode {
    Literal(Lit),
    And(Vec<NodeId>),
    Or {
        /// Informational decision variable from the c2d `O` line; preserved
        /// on round trips, never validated.
        decision: Option<Var>,
        children: Vec<NodeId>,
    },
    True,
    False,
}

impl NnfNode {
    fn children(&self) -> &[NodeId] {
        match self {
            NnfNode::And(ch) => ch,
            NnfNode::Or { children, .. } => children,
            _ => &[],
        }
    }
}

/// Topologically ordered NNF DAG; the root is the last node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NnfGraph {
    nodes: Vec<NnfNode>,
    num_vars: u32,
}

impl NnfGraph {
    pub fn nodes(&self) -> &[NnfNode] {
        &self.nodes
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn root(&self) -> NodeId {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Incremental bottom-up graph builder. Performs the standard boolean
/// simplifications (true/false absorption, single-child collapse) and
/// dedupes literal leaves, so callers can compose nodes freely.
#[derive(Debug)]
pub struct NnfBuilder {
    nodes: Vec<NnfNode>,
    lit_ids: HashMap<Lit, NodeId>,
    true_id: Option<NodeId>,
    false_id: Option<NodeId>,
    num_vars: u32,
}

impl NnfBuilder {
    pub fn new(num_vars: u32) -> NnfBuilder {
        NnfBuilder {
            nodes: Vec::new(),
            lit_ids: HashMap::new(),
            true_id: None,
            false_id: None,
            num_vars,
        }
    }

    pub fn lit(&mut self, lit: Lit) -> NodeId {
        if let Some(&id) = self.lit_ids.get(&lit) {
            return id;
        }
        let id = self.push(NnfNode::Literal(lit));
        self.lit_ids.insert(lit, id);
        id
    }

    pub fn mk_true(&mut self) -> NodeId {
        if let Some(id) = self.true_id {
            return id;
        }
        let id = self.push(NnfNode::True);
        self.true_id = Some(id);
        id
    }

    pub fn mk_false(&mut self) -> NodeId {
        if let Some(id) = self.false_id {
            return id;
        }
        let id = self.push(NnfNode::False);
        self.false_id = Some(id);
        id
    }

    /// Conjunction: drops true children, collapses on false, unwraps a
    /// single child, and an empty conjunction is true.
    pub fn and(&mut self, children: Vec<NodeId>) -> NodeId {
        let mut kept = Vec::with_capacity(children.len());
        for c in children {
            match self.nodes[c] {
                NnfNode::True => {}
                NnfNode::False => return self.mk_false(),
                _ => kept.push(c),
            }
        }
        match kept.len() {
            0 => self.mk_true(),
            1 => kept[0],
            _ => self.push(NnfNode::And(kept)),
        }
    }

    /// Disjunction, dual to [`NnfBuilder::and`].
    pub fn or(&mut self, decision: Option<Var>, children: Vec<NodeId>) -> NodeId {
        let mut kept = Vec::with_capacity(children.len());
        for c in children {
            match self.nodes[c] {
                NnfNode::False => {}
                NnfNode::True => return self.mk_true(),
                _ => kept.push(c),
            }
        }
        match kept.len() {
            0 => self.mk_false(),
            1 => kept[0],
            _ => self.push(NnfNode::Or { decision, children: kept }),
        }
    }

    fn push(&mut self, node: NnfNode) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Finalizes the graph with `root` as its designated root. If the root is
    /// not already the last node, a single-child AND is appended so the
    /// last-node-is-root convention holds.
    pub fn finish(mut self, root: NodeId) -> NnfGraph {
        if self.nodes.is_empty() || root != self.nodes.len() - 1 {
            self.nodes.push(NnfNode::And(vec![root]));
        }
        NnfGraph { nodes: self.nodes, num_vars: self.num_vars }
    }
}

// ---------------------------------------------------------------------------
// c2d format I/O
// ---------------------------------------------------------------------------

#[derive(Debug, Error)]
pub enum NnfParseError {
    #[error("line {line}: malformed header, expected `nnf <nodes> <edges> <vars>`")]
    BadHeader { line: usize },
    #[error("node {node}: bad line {text:?}")]
    BadNode { node: usize, text: String },
    #[error("node {node}: forward or self reference to node {child}")]
    ForwardReference { node: usize, child: usize },
    #[error("node {node}: literal variable {var} out of range (declared {declared})")]
    VarOutOfRange { node: usize, var: u32, declared: u32 },
    #[error("header declared {declared} nodes but the file contains {found}")]
    NodeCountMismatch { declared: usize, found: usize },
    #[error("header declared {declared} edges but the file contains {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("file contains no nodes")]
    Empty,
}

/// Parses c2d NNF text. `A 0` denotes true and `O 0 0` denotes false.
pub fn parse_nnf(text: &str) -> Result<NnfGraph, NnfParseError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'));

    let (hline, header) = lines.next().ok_or(NnfParseError::BadHeader { line: 1 })?;
    let mut it = header.split_ascii_whitespace();
    if it.next() != Some("nnf") {
        return Err(NnfParseError::BadHeader { line: hline + 1 });
    }
    let mut next_num = || -> Result<usize, NnfParseError> {
        it.next()
            .and_then(|t| t.parse().ok())
            .ok_or(NnfParseError::BadHeader { line: hline + 1 })
    };
    let num_nodes = next_num()?;
    let num_edges = next_num()?;
    let num_vars = next_num()? as u32;

    let mut nodes: Vec<NnfNode> = Vec::with_capacity(num_nodes);
    let mut edges = 0usize;
    for (_, line) in lines {
        let node = nodes.len();
        let bad = || NnfParseError::BadNode { node, text: line.to_string() };
        let mut toks = line.split_ascii_whitespace();
        let kind = toks.next().ok_or_else(bad)?;
        let ints: Vec<i64> = toks
            .map(|t| t.parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let parsed = match kind {
            "L" => {
                let [code] = ints[..] else { return Err(bad()) };
                if code == 0 {
                    return Err(bad());
                }
                let var = code.unsigned_abs();
                if var > num_vars as u64 {
                    return Err(NnfParseError::VarOutOfRange {
                        node,
                        var: var.min(u32::MAX as u64) as u32,
                        declared: num_vars,
                    });
                }
                NnfNode::Literal(Lit::from_dimacs(code as i32))
            }
            "A" => {
                let (&count, children) = ints.split_first().ok_or_else(bad)?;
                let children = child_ids(node, count, children)?;
                edges += children.len();
                if children.is_empty() {
                    NnfNode::True
                } else {
                    NnfNode::And(children)
                }
            }
            "O" => {
                let [dec, count, rest @ ..] = &ints[..] else { return Err(bad()) };
                let children = child_ids(node, *count, rest)?;
                edges += children.len();
                if children.is_empty() {
                    NnfNode::False
                } else {
                    let decision =
                        if *dec == 0 { None } else { Some(Var::new(*dec as u32)) };
                    NnfNode::Or { decision, children }
                }
            }
            _ => return Err(bad()),
        };
        nodes.push(parsed);
    }

    if nodes.len() != num_nodes {
        return Err(NnfParseError::NodeCountMismatch { declared: num_nodes, found: nodes.len() });
    }
    if edges != num_edges {
        return Err(NnfParseError::EdgeCountMismatch { declared: num_edges, found: edges });
    }
    if nodes.is_empty() {
        return Err(NnfParseError::Empty);
    }
    Ok(NnfGraph { nodes, num_vars })
}

fn child_ids(node: usize, count: i64, raw: &[i64]) -> Result<Vec<NodeId>, NnfParseError> {
    if count < 0 || raw.len() as i64 != count {
        return Err(NnfParseError::BadNode { node, text: format!("expected {count} children") });
    }
    raw.iter()
        .map(|&c| {
            if c < 0 || c as usize >= node {
                Err(NnfParseError::ForwardReference {
                    node,
                    child: c.max(0) as usize,
                })
            } else {
                Ok(c as usize)
            }
        })
        .collect()
}

pub fn write_nnf(g: &NnfGraph, sink: &mut dyn Write) -> io::Result<()> {
    let edges: usize = g.nodes.iter().map(|n| n.children().len()).sum();
    writeln!(sink, "nnf {} {} {}", g.nodes.len(), edges, g.num_vars)?;
    for node in &g.nodes {
        match node {
            NnfNode::Literal(l) => writeln!(sink, "L {l}")?,
            NnfNode::True => writeln!(sink, "A 0")?,
            NnfNode::False => writeln!(sink, "O 0 0")?,
            NnfNode::And(ch) => {
                write!(sink, "A {}", ch.len())?;
                for c in ch {
                    write!(sink, " {c}")?;
                }
                writeln!(sink)?;
            }
            NnfNode::Or { decision, children } => {
                write!(sink, "O {} {}", decision.map_or(0, Var::index), children.len())?;
                for c in children {
                    write!(sink, " {c}")?;
                }
                writeln!(sink)?;
            }
        }
    }
    Ok(())
}

pub fn nnf_to_string(g: &NnfGraph) -> String {
    let mut buf = Vec::new();
    write_nnf(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("NNF output is ASCII")
}

// ---------------------------------------------------------------------------
// Structural validation
// ---------------------------------------------------------------------------

#[derive(Debug, Error)]
pub enum StructuralError {
    #[error("AND node {node} has children with overlapping variable sets")]
    NotDecomposable { node: NodeId },
    #[error("OR node {node} has disjuncts without complementary literals")]
    NotDeterministic { node: NodeId },
}

/// Word-packed variable set, sized to the graph's variable count.
#[derive(Debug, Clone, PartialEq, Eq)]
struct VarSet {
    words: Vec<u64>,
}

impl VarSet {
    fn new(num_vars: u32) -> VarSet {
        VarSet { words: vec![0; (num_vars as usize).div_ceil(64)] }
    }

    fn insert(&mut self, v: Var) {
        self.words[v.pos() / 64] |= 1 << (v.pos() % 64);
    }

    fn union_with(&mut self, other: &VarSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    fn intersects(&self, other: &VarSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }
}

/// Variable set below each node, bottom-up.
fn vars_below(g: &NnfGraph) -> Vec<VarSet> {
    let mut sets: Vec<VarSet> = Vec::with_capacity(g.len());
    for node in &g.nodes {
        let mut set = VarSet::new(g.num_vars);
        match node {
            NnfNode::Literal(l) => set.insert(l.var()),
            _ => {
                for &c in node.children() {
                    set.union_with(&sets[c]);
                }
            }
        }
        sets.push(set);
    }
    sets
}

/// Checks decomposability: each AND node's children have pairwise-disjoint
/// variable sets.
pub fn check_decomposable(g: &NnfGraph) -> Result<(), StructuralError> {
    let sets = vars_below(g);
    for (id, node) in g.nodes.iter().enumerate() {
        if let NnfNode::And(children) = node {
            let mut seen = VarSet::new(g.num_vars);
            for &c in children {
                if seen.intersects(&sets[c]) {
                    return Err(StructuralError::NotDecomposable { node: id });
                }
                seen.union_with(&sets[c]);
            }
        }
    }
    Ok(())
}

/// Checks structural determinism: under every OR node, each pair of
/// disjuncts asserts complementary literals of some variable. A disjunct
/// asserts the literals found on its AND spine (literal leaves reachable
/// through AND nodes only).
pub fn check_deterministic(g: &NnfGraph) -> Result<(), StructuralError> {
    let mut asserted: Vec<BTreeSet<Lit>> = Vec::with_capacity(g.len());
    for node in &g.nodes {
        let lits = match node {
            NnfNode::Literal(l) => BTreeSet::from([*l]),
            NnfNode::And(children) => children
                .iter()
                .flat_map(|&c| asserted[c].iter().copied())
                .collect(),
            _ => BTreeSet::new(),
        };
        asserted.push(lits);
    }
    for (id, node) in g.nodes.iter().enumerate() {
        if let NnfNode::Or { children, .. } = node {
            for (i, &a) in children.iter().enumerate() {
                for &b in &children[i + 1..] {
                    let complementary = asserted[a]
                        .iter()
                        .any(|&l| asserted[b].contains(&!l));
                    if !complementary {
                        return Err(StructuralError::NotDeterministic { node: id });
                    }
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Counting by satisfaction probability
// ---------------------------------------------------------------------------

#[derive(Debug, Error)]
#[error("satisfaction probability times 2^{num_vars} is not an integer; the graph is not deterministic")]
pub struct NonIntegralCount {
    num_vars: u32,
}

/// Exact dyadic rational `num / 2^exp`.
#[derive(Debug, Clone)]
struct Dyadic {
    num: BigCount,
    exp: u64,
}

impl Dyadic {
    fn zero() -> Dyadic {
        Dyadic { num: BigCount::zero(), exp: 0 }
    }

    fn one() -> Dyadic {
        Dyadic { num: BigCount::from(1u8), exp: 0 }
    }

    fn half() -> Dyadic {
        Dyadic { num: BigCount::from(1u8), exp: 1 }
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let num = (&self.num << (exp - self.exp)) + (&other.num << (exp - other.exp));
        Dyadic { num, exp }
    }

    fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic { num: &self.num * &other.num, exp: self.exp + other.exp }
    }
}

/// Model count of a deterministic decomposable graph: the satisfaction
/// probability (literal ↦ 1/2, OR ↦ sum, AND ↦ product) times `2^numVars`.
///
/// The caller asserts determinism; on a non-deterministic graph the result
/// is either silently an overcount (still integral) or a diagnosed
/// [`NonIntegralCount`]. Structural checks are available separately.
pub fn count_ddnnf(g: &NnfGraph) -> Result<BigCount, NonIntegralCount> {
    let mut probs: Vec<Dyadic> = Vec::with_capacity(g.len());
    for node in &g.nodes {
        let p = match node {
            NnfNode::Literal(_) => Dyadic::half(),
            NnfNode::True => Dyadic::one(),
            NnfNode::False => Dyadic::zero(),
            NnfNode::And(children) => children
                .iter()
                .fold(Dyadic::one(), |acc, &c| acc.mul(&probs[c])),
            NnfNode::Or { children, .. } => children
                .iter()
                .fold(Dyadic::zero(), |acc, &c| acc.add(&probs[c])),
        };
        probs.push(p);
    }
    let root = &probs[g.root()];
    if root.num.is_zero() {
        return Ok(BigCount::zero());
    }
    if root.exp <= g.num_vars as u64 {
        return Ok(&root.num << (g.num_vars as u64 - root.exp));
    }
    let shift = root.exp - g.num_vars as u64;
    if root.num.trailing_zeros().unwrap_or(0) >= shift {
        Ok(&root.num >> shift)
    } else {
        Err(NonIntegralCount { num_vars: g.num_vars })
    }
}

// ---------------------------------------------------------------------------
// Projection (forgetting)
// ---------------------------------------------------------------------------

/// Forgets the non-priority variables: every literal over `N` becomes true
/// and the graph is simplified. The result is a DNNF over `P` but in general
/// no longer deterministic.
pub fn project(g: &NnfGraph, priority: &BTreeSet<Var>) -> NnfGraph {
    let mut b = NnfBuilder::new(g.num_vars);
    let mut map: Vec<NodeId> = Vec::with_capacity(g.len());
    for node in &g.nodes {
        let id = match node {
            NnfNode::Literal(l) => {
                if priority.contains(&l.var()) {
                    b.lit(*l)
                } else {
                    b.mk_true()
                }
            }
            NnfNode::True => b.mk_true(),
            NnfNode::False => b.mk_false(),
            NnfNode::And(children) => {
                let ch = children.iter().map(|&c| map[c]).collect();
                b.and(ch)
            }
            NnfNode::Or { decision, children } => {
                let ch = children.iter().map(|&c| map[c]).collect();
                let decision = decision.filter(|v| priority.contains(v));
                b.or(decision, ch)
            }
        };
        map.push(id);
    }
    let root = map[g.root()];
    b.finish(root)
}

// ---------------------------------------------------------------------------
// d2c: CNF encoding of a projected DNNF
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct D2cOptions {
    /// Reuse one introduced variable per distinct (operator, children)
    /// expression. Disabling changes the output size but not its count.
    pub hash_consing: bool,
}

impl Default for D2cOptions {
    fn default() -> D2cOptions {
        D2cOptions { hash_consing: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum OpKind {
    And,
    Or,
}

#[derive(Debug, Clone, Copy)]
enum NodeLit {
    True,
    False,
    Lit(Lit),
}

/// Encodes a (projected) DNNF into CNF whose models over the priority
/// variables are exactly the projected models of the graph. Non-priority
/// literals are treated as true inline, operator nodes are simplified,
/// single-child nodes are aliased, and multi-child expressions get
/// hash-consed introduced variables defined by equivalence clauses.
/// Introduced variables are numbered from `numVars + 1`.
///
/// A true root yields the empty formula (count `2^|P|`); a false root yields
/// a formula containing the empty clause (count 0).
pub fn d2c(g: &NnfGraph, priority: &BTreeSet<Var>) -> CnfFormula {
    d2c_with(g, priority, D2cOptions::default())
}

pub fn d2c_with(g: &NnfGraph, priority: &BTreeSet<Var>, opts: D2cOptions) -> CnfFormula {
    let mut lit_at_node: Vec<NodeLit> = Vec::with_capacity(g.len());
    let mut lit_with_hash: HashMap<(OpKind, Vec<Lit>), Lit> = HashMap::new();
    let mut next_var = g.num_vars;
    let mut clauses: Vec<Clause> = Vec::new();

    for node in &g.nodes {
        let mapped = match node {
            NnfNode::Literal(l) => {
                if priority.contains(&l.var()) {
                    NodeLit::Lit(*l)
                } else {
                    NodeLit::True
                }
            }
            NnfNode::True => NodeLit::True,
            NnfNode::False => NodeLit::False,
            NnfNode::And(children) => encode_op(
                OpKind::And,
                children,
                &lit_at_node,
                &mut lit_with_hash,
                &mut next_var,
                &mut clauses,
                opts,
            ),
            NnfNode::Or { children, .. } => encode_op(
                OpKind::Or,
                children,
                &lit_at_node,
                &mut lit_with_hash,
                &mut next_var,
                &mut clauses,
                opts,
            ),
        };
        lit_at_node.push(mapped);
    }

    match lit_at_node[g.root()] {
        NodeLit::True => CnfFormula::empty(g.num_vars),
        NodeLit::False => CnfFormula::new(g.num_vars, vec![Clause::empty()]),
        NodeLit::Lit(root) => {
            clauses.push(Clause::new([root]));
            CnfFormula::new(next_var, clauses)
        }
    }
}

fn encode_op(
    kind: OpKind,
    children: &[NodeId],
    lit_at_node: &[NodeLit],
    lit_with_hash: &mut HashMap<(OpKind, Vec<Lit>), Lit>,
    next_var: &mut u32,
    clauses: &mut Vec<Clause>,
    opts: D2cOptions,
) -> NodeLit {
    // simplify: true absorbs an OR and drops out of an AND; dually for false
    let mut lits = Vec::with_capacity(children.len());
    for &c in children {
        match (lit_at_node[c], kind) {
            (NodeLit::True, OpKind::Or) => return NodeLit::True,
            (NodeLit::True, OpKind::And) => {}
            (NodeLit::False, OpKind::And) => return NodeLit::False,
            (NodeLit::False, OpKind::Or) => {}
            (NodeLit::Lit(l), _) => lits.push(l),
        }
    }
    match lits.len() {
        0 => match kind {
            OpKind::And => NodeLit::True,
            OpKind::Or => NodeLit::False,
        },
        1 => NodeLit::Lit(lits[0]),
        _ => {
            let mut key = lits.clone();
            key.sort();
            if opts.hash_consing {
                if let Some(&l) = lit_with_hash.get(&(kind, key.clone())) {
                    return NodeLit::Lit(l);
                }
            }
            *next_var += 1;
            let v = Lit::new(Var::new(*next_var), true);
            match kind {
                OpKind::And => {
                    for &l in &lits {
                        clauses.push(Clause::new([!v, l]));
                    }
                    clauses.push(Clause::new(lits.iter().map(|&l| !l).chain([v])));
                }
                OpKind::Or => {
                    for &l in &lits {
                        clauses.push(Clause::new([v, !l]));
                    }
                    clauses.push(Clause::new(lits.iter().copied().chain([!v])));
                }
            }
            if opts.hash_consing {
                lit_with_hash.insert((kind, key), v);
            }
            NodeLit::Lit(v)
        }
    }
}

/// Renumbers a formula down to its occurring variables (for DIMACS emission
/// of `d2c` output). Returns the compacted formula and the old-to-new
/// variable mapping in increasing order of the old index.
pub fn compact_vars(f: &CnfFormula) -> (CnfFormula, Vec<(Var, Var)>) {
    let occurring = f.occurring_vars();
    let mut mapping = Vec::with_capacity(occurring.len());
    let mut new_of: HashMap<Var, Var> = HashMap::with_capacity(occurring.len());
    for (i, &v) in occurring.iter().enumerate() {
        let nv = Var::new(i as u32 + 1);
        mapping.push((v, nv));
        new_of.insert(v, nv);
    }
    let clauses = f
        .clauses()
        .iter()
        .map(|c| Clause::new(c.iter().map(|l| Lit::new(new_of[&l.var()], l.is_positive()))))
        .collect();
    (CnfFormula::new(occurring.len() as u32, clauses), mapping)
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

/// Statistics from a [`count_via_d2c`] run.
#[derive(Debug, Clone, Default)]
pub struct D2cRunStats {
    /// Decisions taken while compiling the source formula.
    pub compile_decisions: u64,
    /// Decisions taken while counting the re-encoded CNF.
    pub count_decisions: u64,
    /// Byte size of the re-encoded CNF in DIMACS form (the S statistic).
    pub cnf_bytes: usize,
}

/// Projected counting via knowledge compilation: compile the formula to
/// Decision-DNNF, re-encode with [`d2c`], and count the resulting CNF over
/// its occurring variables. Priority variables absent from the encoding are
/// unconstrained and contribute a factor of two each.
pub fn count_via_d2c(
    pf: &ProjectedCnf,
    opts: &CounterOptions,
) -> Result<(BigCount, D2cRunStats), CounterError> {
    let (graph, compile_stats) = counter::compile_ddnnf(pf.formula(), opts)?;
    let encoded = d2c(&graph, pf.priority());
    let (compacted, _) = compact_vars(&encoded);
    let cnf_bytes = crate::dimacs::dimacs_to_string(&ProjectedCnf::all_priority(compacted.clone()))
        .len();
    let (count, count_stats) =
        counter::count_projected(&ProjectedCnf::all_priority(compacted), opts)?;
    let absent = pf
        .priority()
        .iter()
        .filter(|v| !encoded.occurring_vars().contains(v))
        .count();
    let total = count * pow2(absent);
    Ok((
        total,
        D2cRunStats {
            compile_decisions: compile_stats.decisions,
            count_decisions: count_stats.decisions,
            cnf_bytes,
        },
    ))
}

impl fmt::Display for NnfGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&nnf_to_string(self))
    }
}
