//! The condition-colouring engine: answers precolouring queries C1-C4 on
//! a decomposition tree and produces proper m-colourings of m-fragile
//! graphs for any m >= 4.
//!
//! Queries resolve over an explicit agenda with a memo table, so chains
//! of any depth are handled without deep call stacks. At a separation
//! {u, v} a query either lies in one side (solve there, force the other
//! side to agree on the cut by a colour permutation) or crosses, in which
//! case the engine runs the corresponding claim: a fixed sequence of
//! subqueries on the sides whose answers are relabelled into canonical
//! patterns and stitched together. "Up to relabeling" steps are realized
//! by a deterministic search for a colour permutation matching the
//! pattern.

use crate::decomp::{DecompTree, NodeKind, ROOT};
use crate::graph::{is_proper, Colouring, Graph, VertexTuple};
use crate::oracle::{self, OracleError, OracleLimits};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("graph is not m-fragile: 3-connected subgraph on {witness:?} is not (m-1)-colourable")]
    NotMFragile { witness: Vec<u32> },
    #[error("invalid condition: {0}")]
    ConditionInvalid(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error("oracle budget exhausted while colouring a 3-connected part: {0}")]
    OracleBudget(String),
    #[error("bad engine configuration: {0}")]
    Config(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConditionKind {
    C1,
    C2,
    C3,
    C4,
}

/// One of the four precolouring conditions on a pair or triple of
/// vertices. For C3 the first vertex is the distinguished one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub kind: ConditionKind,
    pub tuple: VertexTuple,
}

impl Condition {
    pub fn c1(x: u32, y: u32) -> Condition {
        Condition { kind: ConditionKind::C1, tuple: VertexTuple::Pair(x, y) }
    }
    pub fn c2(x: u32, y: u32) -> Condition {
        Condition { kind: ConditionKind::C2, tuple: VertexTuple::Pair(x, y) }
    }
    pub fn c3(x: u32, y: u32, z: u32) -> Condition {
        Condition { kind: ConditionKind::C3, tuple: VertexTuple::Triple(x, y, z) }
    }
    pub fn c4(x: u32, y: u32, z: u32) -> Condition {
        Condition { kind: ConditionKind::C4, tuple: VertexTuple::Triple(x, y, z) }
    }
}

/// True iff `c` is proper on `g` and satisfies the condition's defining
/// equation. Invariant under any permutation of the palette.
pub fn check_condition(
    g: &Graph,
    cond: &Condition,
    c: &Colouring,
) -> Result<bool, crate::graph::GraphError> {
    if !is_proper(g, c)? {
        return Ok(false);
    }
    Ok(condition_equation(cond, c))
}

fn condition_equation(cond: &Condition, c: &Colouring) -> bool {
    match (cond.kind, &cond.tuple) {
        (ConditionKind::C1, &VertexTuple::Pair(x, y)) => c.colour(x) == c.colour(y),
        (ConditionKind::C2, &VertexTuple::Pair(x, y)) => c.colour(x) != c.colour(y),
        (ConditionKind::C3, &VertexTuple::Triple(x, y, z)) => {
            c.colour(x) != c.colour(y) && c.colour(x) != c.colour(z)
        }
        (ConditionKind::C4, &VertexTuple::Triple(x, y, z)) => {
            let set = [c.colour(x), c.colour(y), c.colour(z)];
            let mut uniq = set.to_vec();
            uniq.sort_unstable();
            uniq.dedup();
            uniq.len() == 2
        }
        _ => false,
    }
}

/// A bijection on the palette {1..m}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourPermutation {
    map: Vec<u32>, // map[c - 1] = image of colour c
}

impl ColourPermutation {
    pub fn identity(m: u32) -> ColourPermutation {
        ColourPermutation { map: (1..=m).collect() }
    }
    pub fn apply(&self, c: u32) -> u32 {
        self.map[c as usize - 1]
    }
    pub fn apply_colouring(&self, c: &Colouring) -> Colouring {
        Colouring::new(c.m, c.assign.iter().map(|&x| self.apply(x)).collect())
    }
}

/// A per-vertex requirement for [`match_pattern`].
#[derive(Clone, Debug)]
pub enum ColourPattern {
    Exactly(u32),
    /// The image must land in this set (bitmask over colours 1..=m).
    In(u64),
}

pub fn colour_set(colours: &[u32]) -> u64 {
    colours.iter().fold(0u64, |m, &c| m | 1 << (c - 1))
}

pub fn colour_set_complement(colours: &[u32], m: u32) -> u64 {
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    full & !colour_set(colours)
}

/// Finds the first permutation, in lexicographic order of
/// `(pi(1), ..., pi(m))`, whose composition with `c` meets every
/// requirement; `None` when no permutation does.
pub fn match_pattern(
    c: &Colouring,
    required: &[(u32, ColourPattern)],
) -> Option<ColourPermutation> {
    let m = c.m;
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    // collapse vertex constraints into per-source-colour allowed sets
    let mut allowed = vec![full; m as usize];
    for (v, pat) in required {
        let src = c.colour(*v) as usize - 1;
        let mask = match pat {
            ColourPattern::Exactly(t) => 1u64 << (t - 1),
            ColourPattern::In(set) => *set & full,
        };
        allowed[src] &= mask;
        if allowed[src] == 0 {
            return None;
        }
    }
    let mut map = vec![0u32; m as usize];
    let mut used = 0u64;
    if assign_perm(&allowed, &mut map, &mut used, 0) {
        Some(ColourPermutation { map })
    } else {
        None
    }
}

fn assign_perm(allowed: &[u64], map: &mut [u32], used: &mut u64, pos: usize) -> bool {
    if pos == map.len() {
        return true;
    }
    let mut choices = allowed[pos] & !*used;
    while choices != 0 {
        let t = choices.trailing_zeros();
        choices &= choices - 1;
        map[pos] = t + 1;
        *used |= 1 << t;
        if assign_perm(allowed, map, used, pos + 1) {
            return true;
        }
        *used &= !(1 << t);
    }
    false
}

/// Engine configuration. `m` is the palette size (at least 4);
/// `verify_each_step` re-checks every produced colouring before it is
/// memoized; `memo_enabled` keeps the memo table across top-level calls
/// (within one call the table is always used, per the polynomial-time
/// construction).
#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub m: u32,
    pub verify_each_step: bool,
    pub memo_enabled: bool,
    pub oracle_limits: OracleLimits,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            m: 4,
            verify_each_step: true,
            memo_enabled: true,
            oracle_limits: OracleLimits::default(),
        }
    }
}

impl EngineConfig {
    pub fn with_m(m: u32) -> Self {
        EngineConfig { m, ..Default::default() }
    }
}

/// Internal query: a proper colouring with no side condition, or one of
/// C1-C4 with a canonicalized tuple (symmetric positions sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Query {
    Any,
    Cond(ConditionKind, [u32; 3], u8),
}

fn canon_query(cond: &Condition) -> Query {
    match (cond.kind, &cond.tuple) {
        (k @ (ConditionKind::C1 | ConditionKind::C2), &VertexTuple::Pair(x, y)) => {
            Query::Cond(k, [x.min(y), x.max(y), 0], 2)
        }
        (ConditionKind::C3, &VertexTuple::Triple(x, y, z)) => {
            Query::Cond(ConditionKind::C3, [x, y.min(z), y.max(z)], 3)
        }
        (ConditionKind::C4, &VertexTuple::Triple(x, y, z)) => {
            let mut t = [x, y, z];
            t.sort_unstable();
            Query::Cond(ConditionKind::C4, t, 3)
        }
        _ => unreachable!("tuple arity checked at construction"),
    }
}

fn query_to_condition(q: &Query) -> Option<Condition> {
    match *q {
        Query::Any => None,
        Query::Cond(ConditionKind::C1, [x, y, _], _) => Some(Condition::c1(x, y)),
        Query::Cond(ConditionKind::C2, [x, y, _], _) => Some(Condition::c2(x, y)),
        Query::Cond(ConditionKind::C3, [x, y, z], _) => Some(Condition::c3(x, y, z)),
        Query::Cond(ConditionKind::C4, [x, y, z], _) => Some(Condition::c4(x, y, z)),
    }
}

type Key = (usize, Query);

enum Attempt {
    Done(Colouring),
    Need(Vec<Key>),
}

/// The engine proper: owns the memo table for one decomposition tree.
/// One instance is used from one logical thread; distinct instances over
/// the same tree may run concurrently.
pub struct Engine<'t> {
    tree: &'t DecompTree,
    cfg: EngineConfig,
    memo: HashMap<Key, Colouring>,
    leaf_base: HashMap<usize, Colouring>,
}

impl<'t> Engine<'t> {
    pub fn new(tree: &'t DecompTree, cfg: EngineConfig) -> Result<Engine<'t>, EngineError> {
        if cfg.m < 4 {
            return Err(EngineError::Config(format!("m must be at least 4, got {}", cfg.m)));
        }
        if cfg.m > 64 {
            return Err(EngineError::Config(format!("palette sizes above 64 unsupported, got {}", cfg.m)));
        }
        Ok(Engine { tree, cfg, memo: HashMap::new(), leaf_base: HashMap::new() })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    /// Answers a condition query on a tree node: a proper m-colouring of
    /// the node's graph satisfying the condition. Vertex ids are local to
    /// the node (for the root they coincide with the input graph's).
    pub fn satisfy(&mut self, node: usize, cond: &Condition) -> Result<Colouring, EngineError> {
        self.validate(node, cond)?;
        if !self.cfg.memo_enabled {
            self.memo.clear();
        }
        self.resolve((node, canon_query(cond)))
    }

    pub fn satisfy_root(&mut self, cond: &Condition) -> Result<Colouring, EngineError> {
        self.satisfy(ROOT, cond)
    }

    /// A proper m-colouring with no side condition.
    pub fn any_colouring(&mut self, node: usize) -> Result<Colouring, EngineError> {
        if !self.cfg.memo_enabled {
            self.memo.clear();
        }
        self.resolve((node, Query::Any))
    }

    fn graph(&self, node: usize) -> &Graph {
        &self.tree.nodes[node].graph
    }

    fn validate(&self, node: usize, cond: &Condition) -> Result<(), EngineError> {
        let g = self.graph(node);
        let n = g.vertex_count() as u32;
        let verts = cond.tuple.vertices();
        if let Some(&v) = verts.iter().find(|&&v| v >= n) {
            return Err(EngineError::ConditionInvalid(format!(
                "vertex {v} out of range for a {n}-vertex graph"
            )));
        }
        let arity_ok = matches!(
            (cond.kind, &cond.tuple),
            (ConditionKind::C1 | ConditionKind::C2, VertexTuple::Pair(..))
                | (ConditionKind::C3 | ConditionKind::C4, VertexTuple::Triple(..))
        );
        if !arity_ok {
            return Err(EngineError::ConditionInvalid(format!(
                "{:?} used with the wrong tuple arity",
                cond.kind
            )));
        }
        if !cond.tuple.distinct() {
            return Err(EngineError::ConditionInvalid(format!(
                "{:?} needs distinct vertices, got {verts:?}",
                cond.kind
            )));
        }
        match cond.kind {
            ConditionKind::C1 => {
                if g.has_edge(verts[0], verts[1]) {
                    return Err(EngineError::ConditionInvalid(format!(
                        "C1 needs a nonadjacent pair; {} and {} are adjacent",
                        verts[0], verts[1]
                    )));
                }
            }
            ConditionKind::C4 => {
                let all_adj = g.has_edge(verts[0], verts[1])
                    && g.has_edge(verts[0], verts[2])
                    && g.has_edge(verts[1], verts[2]);
                if all_adj {
                    return Err(EngineError::ConditionInvalid(
                        "C4 needs a triple that is not all pairwise adjacent".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // agenda
    // ------------------------------------------------------------------

    fn resolve(&mut self, key: Key) -> Result<Colouring, EngineError> {
        let mut agenda = vec![key.clone()];
        let mut iterations = 0u64;
        let cap = 10_000 + 400 * self.tree.nodes.len() as u64;
        while let Some(top) = agenda.last().cloned() {
            iterations += 1;
            if iterations > cap {
                return Err(EngineError::InternalInvariant(
                    "query agenda failed to converge".into(),
                ));
            }
            if self.memo.contains_key(&top) {
                agenda.pop();
                continue;
            }
            match self.attempt(top.0, &top.1)? {
                Attempt::Done(col) => {
                    if self.cfg.verify_each_step {
                        self.verify(top.0, &top.1, &col)?;
                    }
                    self.memo.insert(top, col);
                    agenda.pop();
                }
                Attempt::Need(subs) => {
                    if subs.is_empty() {
                        return Err(EngineError::InternalInvariant(
                            "attempt stalled without subqueries".into(),
                        ));
                    }
                    for s in subs {
                        if !self.memo.contains_key(&s) {
                            agenda.push(s);
                        }
                    }
                }
            }
        }
        self.memo
            .get(&key)
            .cloned()
            .ok_or_else(|| EngineError::InternalInvariant("resolved query missing from memo".into()))
    }

    fn verify(&self, node: usize, q: &Query, col: &Colouring) -> Result<(), EngineError> {
        let g = self.graph(node);
        let proper = is_proper(g, col)
            .map_err(|e| EngineError::InternalInvariant(format!("bad colouring shape: {e}")))?;
        if !proper {
            return Err(EngineError::InternalInvariant(format!(
                "produced an improper colouring at node {node}"
            )));
        }
        if let Some(cond) = query_to_condition(q) {
            if !condition_equation(&cond, col) {
                return Err(EngineError::InternalInvariant(format!(
                    "colouring violates {:?} at node {node}",
                    cond.kind
                )));
            }
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // case dispatch
    // ------------------------------------------------------------------

    fn attempt(&mut self, node: usize, q: &Query) -> Result<Attempt, EngineError> {
        let g = self.graph(node);
        if g.vertex_count() <= 3 {
            return self.base_small(node, q).map(Attempt::Done);
        }
        match &self.tree.nodes[node].kind {
            NodeKind::Leaf { three_connected: true } => {
                self.leaf_query(node, q).map(Attempt::Done)
            }
            NodeKind::Leaf { three_connected: false } => Err(EngineError::InternalInvariant(
                format!("node {node} has more than 3 vertices but was not decomposed"),
            )),
            NodeKind::Internal { .. } => self.internal_query(node, q),
        }
    }

    // |V| <= 3: direct table by tiny exhaustive search; colours 1..=4
    // always suffice
    fn base_small(&self, node: usize, q: &Query) -> Result<Colouring, EngineError> {
        let g = self.graph(node);
        let n = g.vertex_count();
        let m = self.cfg.m;
        let span = m.min(4);
        let mut assign = vec![1u32; n];
        loop {
            let col = Colouring::new(m, assign.clone());
            let proper = g
                .edges()
                .all(|(u, v)| col.assign[u as usize] != col.assign[v as usize]);
            let ok = proper
                && match query_to_condition(q) {
                    None => true,
                    Some(c) => condition_equation(&c, &col),
                };
            if ok {
                return Ok(col);
            }
            // next assignment in lexicographic order over {1..span}^n
            let mut i = n;
            loop {
                if i == 0 {
                    return Err(EngineError::InternalInvariant(format!(
                        "no small-graph colouring found for {q:?} at node {node}"
                    )));
                }
                i -= 1;
                if assign[i] < span {
                    assign[i] += 1;
                    for a in assign[i + 1..].iter_mut() {
                        *a = 1;
                    }
                    break;
                }
            }
        }
    }

    // 3-connected leaf: exact (m-1)-colouring from the oracle, then the
    // spare colour m satisfies any condition
    fn leaf_query(&mut self, node: usize, q: &Query) -> Result<Colouring, EngineError> {
        if !self.leaf_base.contains_key(&node) {
            let g = self.graph(node);
            let limits = self.cfg.oracle_limits.clone();
            let witness = || {
                let mut w = self.tree.nodes[node].to_root.clone();
                w.sort_unstable();
                w
            };
            let res = oracle::exact_colour(g, self.cfg.m - 1, &[], &limits);
            let base = match res {
                Ok(r) => match r.value {
                    Some(c) => c,
                    None => return Err(EngineError::NotMFragile { witness: witness() }),
                },
                Err(OracleError::BudgetExceeded { nodes }) => {
                    return Err(EngineError::OracleBudget(format!(
                        "leaf with {} vertices, {nodes} nodes explored",
                        self.graph(node).vertex_count()
                    )))
                }
                Err(OracleError::TooLarge { n, cap }) => {
                    return Err(EngineError::OracleBudget(format!(
                        "leaf with {n} vertices exceeds the oracle cap {cap}"
                    )))
                }
            };
            self.leaf_base.insert(node, base);
        }
        let base = &self.leaf_base[&node];
        let m = self.cfg.m;
        let mut assign = base.assign.clone();
        match *q {
            Query::Any => {}
            Query::Cond(ConditionKind::C1, [x, y, _], _) => {
                assign[x as usize] = m;
                assign[y as usize] = m;
            }
            Query::Cond(ConditionKind::C2, [x, y, _], _) => {
                if assign[x as usize] == assign[y as usize] {
                    assign[x as usize] = m;
                }
            }
            Query::Cond(ConditionKind::C3, [x, y, z], _) => {
                if assign[x as usize] == assign[y as usize]
                    || assign[x as usize] == assign[z as usize]
                {
                    assign[x as usize] = m;
                }
            }
            Query::Cond(ConditionKind::C4, t, _) => {
                // recolour a nonadjacent pair of the triple with the spare
                // colour; the third keeps its base colour < m
                let g = self.graph(node);
                let pairs = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])];
                let Some(&(p, qq)) = pairs.iter().find(|&&(a, b)| !g.has_edge(a, b)) else {
                    return Err(EngineError::InternalInvariant(
                        "C4 validation let through an all-adjacent triple".into(),
                    ));
                };
                assign[p as usize] = m;
                assign[qq as usize] = m;
            }
        }
        Ok(Colouring::new(m, assign))
    }

    // ------------------------------------------------------------------
    // internal nodes
    // ------------------------------------------------------------------

    fn internal_query(&mut self, node: usize, q: &Query) -> Result<Attempt, EngineError> {
        let NodeKind::Internal { sep, .. } = &self.tree.nodes[node].kind else {
            unreachable!()
        };
        let side1 = sep.side1.clone();
        let side2 = sep.side2.clone();
        let verts: Vec<u32> = match q {
            Query::Any => Vec::new(),
            Query::Cond(_, t, len) => t[..*len as usize].to_vec(),
        };
        let within = |side: &[u32]| verts.iter().all(|v| side.binary_search(v).is_ok());
        if within(&side1) {
            self.same_side(node, q, 0)
        } else if within(&side2) {
            self.same_side(node, q, 1)
        } else {
            self.crossing(node, q)
        }
    }

    fn child_of(&self, node: usize, slot: usize) -> usize {
        let NodeKind::Internal { children, .. } = &self.tree.nodes[node].kind else {
            unreachable!()
        };
        children[slot]
    }

    fn side_of(&self, node: usize, slot: usize) -> &[u32] {
        let NodeKind::Internal { sep, .. } = &self.tree.nodes[node].kind else {
            unreachable!()
        };
        if slot == 0 {
            &sep.side1
        } else {
            &sep.side2
        }
    }

    fn cut_of(&self, node: usize) -> &[u32] {
        let NodeKind::Internal { sep, .. } = &self.tree.nodes[node].kind else {
            unreachable!()
        };
        &sep.cut
    }

    /// Parent-local id -> child-local id for vertices on the given side.
    fn to_child(&self, node: usize, slot: usize, v: u32) -> u32 {
        self.side_of(node, slot)
            .binary_search(&v)
            .expect("vertex lies on this side") as u32
    }

    fn child_query(&self, node: usize, slot: usize, q: Query) -> Key {
        (self.child_of(node, slot), q)
    }

    fn fetch(&self, needs: &mut Vec<Key>, key: Key) -> Option<Colouring> {
        match self.memo.get(&key) {
            Some(c) => Some(c.clone()),
            None => {
                needs.push(key);
                None
            }
        }
    }

    /// Child-level condition with parent-local vertices translated.
    fn cq(&self, node: usize, slot: usize, kind: ConditionKind, verts: &[u32]) -> Key {
        let t: Vec<u32> = verts.iter().map(|&v| self.to_child(node, slot, v)).collect();
        let cond = match (kind, t.len()) {
            (ConditionKind::C1, 2) => Condition::c1(t[0], t[1]),
            (ConditionKind::C2, 2) => Condition::c2(t[0], t[1]),
            (ConditionKind::C3, 3) => Condition::c3(t[0], t[1], t[2]),
            (ConditionKind::C4, 3) => Condition::c4(t[0], t[1], t[2]),
            _ => unreachable!(),
        };
        (self.child_of(node, slot), canon_query(&cond))
    }

    /// Union of child colourings into a parent colouring, with an
    /// optional permutation applied to each side; cut agreement is
    /// checked.
    fn amalgamate(
        &self,
        node: usize,
        cols: [(usize, &Colouring, Option<&ColourPermutation>); 2],
    ) -> Result<Colouring, EngineError> {
        let n = self.graph(node).vertex_count();
        let mut assign = vec![0u32; n];
        for (slot, col, perm) in cols {
            let side = self.side_of(node, slot);
            for (local, &parent) in side.iter().enumerate() {
                let mut c = col.assign[local];
                if let Some(p) = perm {
                    c = p.apply(c);
                }
                let cell = &mut assign[parent as usize];
                if *cell != 0 && *cell != c {
                    return Err(EngineError::InternalInvariant(format!(
                        "sides disagree on cut vertex {parent} at node {node}"
                    )));
                }
                *cell = c;
            }
        }
        Ok(Colouring::new(self.cfg.m, assign))
    }

    fn require(
        perm: Option<ColourPermutation>,
        what: &str,
    ) -> Result<ColourPermutation, EngineError> {
        perm.ok_or_else(|| {
            EngineError::InternalInvariant(format!("relabelling should exist: {what}"))
        })
    }

    // X inside one side: solve there, then force the other side to agree
    // on the cut via its C1 or C2
    fn same_side(&mut self, node: usize, q: &Query, slot: usize) -> Result<Attempt, EngineError> {
        let other = 1 - slot;
        let mut needs = Vec::new();
        let main_key = match q {
            Query::Any => self.child_query(node, slot, Query::Any),
            Query::Cond(kind, t, len) => self.cq(node, slot, *kind, &t[..*len as usize]),
        };
        let main = self.fetch(&mut needs, main_key);
        let cut: Vec<u32> = self.cut_of(node).to_vec();
        match cut.len() {
            0 => {
                let other_col = self.fetch(&mut needs, self.child_query(node, other, Query::Any));
                let (Some(main), Some(other_col)) = (main, other_col) else {
                    return Ok(Attempt::Need(needs));
                };
                let col =
                    self.amalgamate(node, [(slot, &main, None), (other, &other_col, None)])?;
                Ok(Attempt::Done(col))
            }
            1 => {
                let u = cut[0];
                let other_col = self.fetch(&mut needs, self.child_query(node, other, Query::Any));
                let (Some(main), Some(other_col)) = (main, other_col) else {
                    return Ok(Attempt::Need(needs));
                };
                let mu = main.colour(self.to_child(node, slot, u));
                let pi = Self::require(
                    match_pattern(
                        &other_col,
                        &[(self.to_child(node, other, u), ColourPattern::Exactly(mu))],
                    ),
                    "single constraint on a cut vertex",
                )?;
                let col =
                    self.amalgamate(node, [(slot, &main, None), (other, &other_col, Some(&pi))])?;
                Ok(Attempt::Done(col))
            }
            2 => {
                let (u, v) = (cut[0], cut[1]);
                let Some(main) = main else {
                    return Ok(Attempt::Need(needs));
                };
                let mu = main.colour(self.to_child(node, slot, u));
                let mv = main.colour(self.to_child(node, slot, v));
                let other_key = if mu == mv {
                    // equal cut colours are only proper when uv is a
                    // non-edge, so the other side's C1 applies
                    self.cq(node, other, ConditionKind::C1, &[u, v])
                } else {
                    self.cq(node, other, ConditionKind::C2, &[u, v])
                };
                let Some(other_col) = self.fetch(&mut needs, other_key) else {
                    return Ok(Attempt::Need(needs));
                };
                let (cu, cv) = (self.to_child(node, other, u), self.to_child(node, other, v));
                let constraints = if mu == mv {
                    vec![(cu, ColourPattern::Exactly(mu))]
                } else {
                    vec![
                        (cu, ColourPattern::Exactly(mu)),
                        (cv, ColourPattern::Exactly(mv)),
                    ]
                };
                let pi = Self::require(
                    match_pattern(&other_col, &constraints),
                    "cut agreement after C1/C2",
                )?;
                let col =
                    self.amalgamate(node, [(slot, &main, None), (other, &other_col, Some(&pi))])?;
                Ok(Attempt::Done(col))
            }
            _ => unreachable!("cuts have size at most 2"),
        }
    }

    // X crossing the separation
    fn crossing(&mut self, node: usize, q: &Query) -> Result<Attempt, EngineError> {
        let Query::Cond(kind, t, len) = q else {
            return Err(EngineError::InternalInvariant(
                "an unconditioned query cannot cross".into(),
            ));
        };
        let verts = &t[..*len as usize];
        match self.cut_of(node).len() {
            0 => self.crossing_s0(node, *kind, verts),
            1 => self.crossing_s1(node, *kind, verts),
            2 => match kind {
                ConditionKind::C1 => self.claim_c1(node, verts),
                ConditionKind::C3 => self.claim_c3(node, verts),
                ConditionKind::C2 => self.claim_c2(node, verts),
                ConditionKind::C4 => self.claim_c4(node, verts),
            },
            _ => unreachable!(),
        }
    }

    /// Which strict side a vertex lies in: Some(0), Some(1), or None for
    /// cut vertices.
    fn strict_side(&self, node: usize, v: u32) -> Option<usize> {
        if self.cut_of(node).contains(&v) {
            return None;
        }
        if self.side_of(node, 0).binary_search(&v).is_ok() {
            Some(0)
        } else {
            Some(1)
        }
    }

    // ------------------------------------------------------------------
    // crossing, S empty: permute one side freely
    // ------------------------------------------------------------------

    fn crossing_s0(
        &mut self,
        node: usize,
        kind: ConditionKind,
        verts: &[u32],
    ) -> Result<Attempt, EngineError> {
        let m = self.cfg.m;
        let mut needs = Vec::new();
        match kind {
            ConditionKind::C1 | ConditionKind::C2 => {
                let (x, y) = (verts[0], verts[1]);
                let sx = self.strict_side(node, x).unwrap();
                let sy = 1 - sx;
                let ca = self.fetch(&mut needs, self.child_query(node, sx, Query::Any));
                let cb = self.fetch(&mut needs, self.child_query(node, sy, Query::Any));
                let (Some(ca), Some(cb)) = (ca, cb) else {
                    return Ok(Attempt::Need(needs));
                };
                let target = ca.colour(self.to_child(node, sx, x));
                let pat = if kind == ConditionKind::C1 {
                    ColourPattern::Exactly(target)
                } else {
                    ColourPattern::In(colour_set_complement(&[target], m))
                };
                let pi = Self::require(
                    match_pattern(&cb, &[(self.to_child(node, sy, y), pat)]),
                    "one-vertex pattern with m >= 2 colours",
                )?;
                let col = self.amalgamate(node, [(sx, &ca, None), (sy, &cb, Some(&pi))])?;
                Ok(Attempt::Done(col))
            }
            ConditionKind::C3 => {
                let (x, y, z) = (verts[0], verts[1], verts[2]);
                let sx = self.strict_side(node, x).unwrap();
                let (sy, sz) = (
                    self.strict_side(node, y).unwrap(),
                    self.strict_side(node, z).unwrap(),
                );
                if sy != sx && sz != sx {
                    // x alone: permute x's side to avoid both colours
                    let other = 1 - sx;
                    let ca = self.fetch(&mut needs, self.child_query(node, sx, Query::Any));
                    let cb = self.fetch(&mut needs, self.child_query(node, other, Query::Any));
                    let (Some(ca), Some(cb)) = (ca, cb) else {
                        return Ok(Attempt::Need(needs));
                    };
                    let avoid = [
                        cb.colour(self.to_child(node, other, y)),
                        cb.colour(self.to_child(node, other, z)),
                    ];
                    let pi = Self::require(
                        match_pattern(
                            &ca,
                            &[(
                                self.to_child(node, sx, x),
                                ColourPattern::In(colour_set_complement(&avoid, m)),
                            )],
                        ),
                        "avoid two colours with m >= 3",
                    )?;
                    let col = self.amalgamate(node, [(sx, &ca, Some(&pi)), (other, &cb, None)])?;
                    Ok(Attempt::Done(col))
                } else {
                    // x plus one of y, z on the same side
                    let (mate, lone) = if sy == sx { (y, z) } else { (z, y) };
                    let other = 1 - sx;
                    let ca =
                        self.fetch(&mut needs, self.cq(node, sx, ConditionKind::C2, &[x, mate]));
                    let cb = self.fetch(&mut needs, self.child_query(node, other, Query::Any));
                    let (Some(ca), Some(cb)) = (ca, cb) else {
                        return Ok(Attempt::Need(needs));
                    };
                    let cx = ca.colour(self.to_child(node, sx, x));
                    let pi = Self::require(
                        match_pattern(
                            &cb,
                            &[(
                                self.to_child(node, other, lone),
                                ColourPattern::In(colour_set_complement(&[cx], m)),
                            )],
                        ),
                        "avoid one colour with m >= 2",
                    )?;
                    let col = self.amalgamate(node, [(sx, &ca, None), (other, &cb, Some(&pi))])?;
                    Ok(Attempt::Done(col))
                }
            }
            ConditionKind::C4 => {
                // pair on one side, single vertex on the other
                let sides: Vec<usize> = verts
                    .iter()
                    .map(|&v| self.strict_side(node, v).unwrap())
                    .collect();
                let lone_pos = (0..3)
                    .find(|&i| sides.iter().filter(|&&s| s == sides[i]).count() == 1)
                    .expect("crossing triple splits 2 + 1");
                let r = verts[lone_pos];
                let pair: Vec<u32> = (0..3)
                    .filter(|&i| i != lone_pos)
                    .map(|i| verts[i])
                    .collect();
                let (p, qv) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                let sp = sides[(lone_pos + 1) % 3];
                let sr = 1 - sp;
                let g = self.graph(node);
                let pq_edge = g.has_edge(p, qv);
                let ca_key = if pq_edge {
                    self.child_query(node, sp, Query::Any)
                } else {
                    self.cq(node, sp, ConditionKind::C1, &[p, qv])
                };
                let ca = self.fetch(&mut needs, ca_key);
                let cb = self.fetch(&mut needs, self.child_query(node, sr, Query::Any));
                let (Some(ca), Some(cb)) = (ca, cb) else {
                    return Ok(Attempt::Need(needs));
                };
                let cp = ca.colour(self.to_child(node, sp, p));
                // adjacent pair: r copies p's colour; equal pair: r avoids it
                let pat = if pq_edge {
                    ColourPattern::Exactly(cp)
                } else {
                    ColourPattern::In(colour_set_complement(&[cp], m))
                };
                let pi = Self::require(
                    match_pattern(&cb, &[(self.to_child(node, sr, r), pat)]),
                    "one-vertex pattern with m >= 2",
                )?;
                let col = self.amalgamate(node, [(sp, &ca, None), (sr, &cb, Some(&pi))])?;
                Ok(Attempt::Done(col))
            }
        }
    }

    // ------------------------------------------------------------------
    // crossing, S = {u}: amalgamation by permutation anchored at u
    // ------------------------------------------------------------------

    fn crossing_s1(
        &mut self,
        node: usize,
        kind: ConditionKind,
        verts: &[u32],
    ) -> Result<Attempt, EngineError> {
        let m = self.cfg.m;
        let u = self.cut_of(node)[0];
        let mut needs = Vec::new();
        match kind {
            ConditionKind::C1 | ConditionKind::C2 => {
                // x and y sit strictly on opposite sides; C1 is its C3
                // analogue anchored at u, C2 likewise
                let (x, y) = (verts[0], verts[1]);
                let sx = self.strict_side(node, x).unwrap();
                let sy = 1 - sx;
                let ca = self.fetch(&mut needs, self.cq(node, sx, ConditionKind::C2, &[x, u]));
                let cb = self.fetch(&mut needs, self.cq(node, sy, ConditionKind::C2, &[y, u]));
                let (Some(ca), Some(cb)) = (ca, cb) else {
                    return Ok(Attempt::Need(needs));
                };
                let cu = ca.colour(self.to_child(node, sx, u));
                let cx = ca.colour(self.to_child(node, sx, x));
                let ypat = if kind == ConditionKind::C1 {
                    ColourPattern::Exactly(cx)
                } else {
                    ColourPattern::In(colour_set_complement(&[cx], m))
                };
                let pi = Self::require(
                    match_pattern(
                        &cb,
                        &[
                            (self.to_child(node, sy, u), ColourPattern::Exactly(cu)),
                            (self.to_child(node, sy, y), ypat),
                        ],
                    ),
                    "anchored pair pattern at a 1-cut",
                )?;
                let col = self.amalgamate(node, [(sx, &ca, None), (sy, &cb, Some(&pi))])?;
                Ok(Attempt::Done(col))
            }
            ConditionKind::C3 => {
                let (x, y, z) = (verts[0], verts[1], verts[2]);
                if x == u {
                    // y and z on opposite sides: C2 against u on each
                    let sy = self.strict_side(node, y).unwrap();
                    let sz = 1 - sy;
                    let ca = self.fetch(&mut needs, self.cq(node, sy, ConditionKind::C2, &[u, y]));
                    let cb = self.fetch(&mut needs, self.cq(node, sz, ConditionKind::C2, &[u, z]));
                    let (Some(ca), Some(cb)) = (ca, cb) else {
                        return Ok(Attempt::Need(needs));
                    };
                    let cu = ca.colour(self.to_child(node, sy, u));
                    let pi = Self::require(
                        match_pattern(
                            &cb,
                            &[(self.to_child(node, sz, u), ColourPattern::Exactly(cu))],
                        ),
                        "agreement on u; injectivity keeps z clear",
                    )?;
                    let col = self.amalgamate(node, [(sy, &ca, None), (sz, &cb, Some(&pi))])?;
                    return Ok(Attempt::Done(col));
                }
                let sx = self.strict_side(node, x).unwrap();
                let other = 1 - sx;
                let y_here = self.strict_side(node, y) == Some(sx) && y != u;
                let z_here = self.strict_side(node, z) == Some(sx) && z != u;
                if !y_here && !z_here {
                    // both y, z live in the other side's vertex set
                    let ca = self.fetch(&mut needs, self.cq(node, sx, ConditionKind::C2, &[x, u]));
                    let cb = self.fetch(&mut needs, self.child_query(node, other, Query::Any));
                    let (Some(ca), Some(cb)) = (ca, cb) else {
                        return Ok(Attempt::Need(needs));
                    };
                    let cu = ca.colour(self.to_child(node, sx, u));
                    let cx = ca.colour(self.to_child(node, sx, x));
                    let avoid = ColourPattern::In(colour_set_complement(&[cx], m));
                    let mut constraints = vec![(
                        self.to_child(node, other, u),
                        ColourPattern::Exactly(cu),
                    )];
                    for w in [y, z] {
                        if w != u {
                            constraints.push((self.to_child(node, other, w), avoid_clone(&avoid)));
                        }
                    }
                    let pi = Self::require(
                        match_pattern(&cb, &constraints),
                        "u pinned plus at most two avoid-one constraints",
                    )?;
                    let col = self.amalgamate(node, [(sx, &ca, None), (other, &cb, Some(&pi))])?;
                    Ok(Attempt::Done(col))
                } else {
                    // one mate shares x's side, the lone one is opposite
                    let (mate, lone) = if y_here { (y, z) } else { (z, y) };
                    let ca = self
                        .fetch(&mut needs, self.cq(node, sx, ConditionKind::C3, &[x, mate, u]));
                    let cb = self.fetch(&mut needs, self.child_query(node, other, Query::Any));
                    let (Some(ca), Some(cb)) = (ca, cb) else {
                        return Ok(Attempt::Need(needs));
                    };
                    let cu = ca.colour(self.to_child(node, sx, u));
                    let cx = ca.colour(self.to_child(node, sx, x));
                    let pi = Self::require(
                        match_pattern(
                            &cb,
                            &[
                                (self.to_child(node, other, u), ColourPattern::Exactly(cu)),
                                (
                                    self.to_child(node, other, lone),
                                    ColourPattern::In(colour_set_complement(&[cx], m)),
                                ),
                            ],
                        ),
                        "u pinned plus one avoid-one constraint",
                    )?;
                    let col = self.amalgamate(node, [(sx, &ca, None), (other, &cb, Some(&pi))])?;
                    Ok(Attempt::Done(col))
                }
            }
            ConditionKind::C4 => {
                if verts.contains(&u) {
                    // triple {p, u, q} with p, q on opposite sides: force
                    // p and q to share a colour different from u's
                    let rest: Vec<u32> = verts.iter().copied().filter(|&w| w != u).collect();
                    let (p, qv) = (rest[0], rest[1]);
                    let sp = self.strict_side(node, p).unwrap();
                    let sq = 1 - sp;
                    let ca = self.fetch(&mut needs, self.cq(node, sp, ConditionKind::C2, &[p, u]));
                    let cb = self.fetch(&mut needs, self.cq(node, sq, ConditionKind::C2, &[qv, u]));
                    let (Some(ca), Some(cb)) = (ca, cb) else {
                        return Ok(Attempt::Need(needs));
                    };
                    let cu = ca.colour(self.to_child(node, sp, u));
                    let cp = ca.colour(self.to_child(node, sp, p));
                    let pi = Self::require(
                        match_pattern(
                            &cb,
                            &[
                                (self.to_child(node, sq, u), ColourPattern::Exactly(cu)),
                                (self.to_child(node, sq, qv), ColourPattern::Exactly(cp)),
                            ],
                        ),
                        "distinct sources to distinct targets",
                    )?;
                    let col = self.amalgamate(node, [(sp, &ca, None), (sq, &cb, Some(&pi))])?;
                    return Ok(Attempt::Done(col));
                }
                // pair on one side, lone vertex on the other
                let sides: Vec<usize> = verts
                    .iter()
                    .map(|&v| self.strict_side(node, v).unwrap())
                    .collect();
                let lone_pos = (0..3)
                    .find(|&i| sides.iter().filter(|&&s| s == sides[i]).count() == 1)
                    .expect("crossing triple splits 2 + 1");
                let r = verts[lone_pos];
                let pair: Vec<u32> = (0..3)
                    .filter(|&i| i != lone_pos)
                    .map(|i| verts[i])
                    .collect();
                let (p, qv) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                let sp = sides[(lone_pos + 1) % 3];
                let sr = 1 - sp;
                let pq_edge = self.graph(node).has_edge(p, qv);
                let ca_key = if pq_edge {
                    self.child_query(node, sp, Query::Any)
                } else {
                    self.cq(node, sp, ConditionKind::C1, &[p, qv])
                };
                let ca = self.fetch(&mut needs, ca_key);
                let cb = self.fetch(&mut needs, self.cq(node, sr, ConditionKind::C2, &[r, u]));
                let (Some(ca), Some(cb)) = (ca, cb) else {
                    return Ok(Attempt::Need(needs));
                };
                let cu = ca.colour(self.to_child(node, sp, u));
                let cp = ca.colour(self.to_child(node, sp, p));
                let cqv = ca.colour(self.to_child(node, sp, qv));
                let u_child = self.to_child(node, sr, u);
                let r_child = self.to_child(node, sr, r);
                let pi = if pq_edge {
                    // r copies whichever pair colour differs from u's
                    let target = if cp != cu { cp } else { cqv };
                    Self::require(
                        match_pattern(
                            &cb,
                            &[
                                (u_child, ColourPattern::Exactly(cu)),
                                (r_child, ColourPattern::Exactly(target)),
                            ],
                        ),
                        "r pinned to a pair colour distinct from u's",
                    )?
                } else {
                    Self::require(
                        match_pattern(
                            &cb,
                            &[
                                (u_child, ColourPattern::Exactly(cu)),
                                (
                                    r_child,
                                    ColourPattern::In(colour_set_complement(&[cp], m)),
                                ),
                            ],
                        ),
                        "r avoids the equal pair's colour",
                    )?
                };
                let col = self.amalgamate(node, [(sp, &ca, None), (sr, &cb, Some(&pi))])?;
                Ok(Attempt::Done(col))
            }
        }
    }

    // ------------------------------------------------------------------
    // crossing, S = {u, v}: the four claims
    // ------------------------------------------------------------------

    // C1 for a crossing nonadjacent pair
    fn claim_c1(&mut self, node: usize, verts: &[u32]) -> Result<Attempt, EngineError> {
        let cut = self.cut_of(node).to_vec();
        let (u, v) = (cut[0], cut[1]);
        let (mut x, mut y) = (verts[0], verts[1]);
        let mut sa = self.strict_side(node, x).unwrap();
        if sa == 1 {
            // keep x on side A by swapping names; C1 is symmetric
            std::mem::swap(&mut x, &mut y);
            sa = 0;
        }
        let mut sb = 1 - sa;
        let mut needs = Vec::new();

        let a1k = self.cq(node, sa, ConditionKind::C3, &[x, u, v]);
        let a2k = self.cq(node, sb, ConditionKind::C3, &[y, u, v]);
        let (a1, a2) = (self.fetch(&mut needs, a1k), self.fetch(&mut needs, a2k));
        let (Some(a1), Some(a2)) = (a1, a2) else {
            return Ok(Attempt::Need(needs));
        };
        // relabel both to x/y -> 1, u -> 2, v in {2, 3}
        let pat_a = |this: &Engine<'_>, slot: usize, first: u32, col: &Colouring| {
            let vt = this.to_child(node, slot, v);
            let shape = if col.colour(vt) == col.colour(this.to_child(node, slot, u)) {
                2
            } else {
                3
            };
            match_pattern(
                col,
                &[
                    (this.to_child(node, slot, first), ColourPattern::Exactly(1)),
                    (this.to_child(node, slot, u), ColourPattern::Exactly(2)),
                    (vt, ColourPattern::Exactly(shape)),
                ],
            )
        };
        let pa1 = Self::require(pat_a(self, sa, x, &a1), "claim C1 step a relabel")?;
        let pa2 = Self::require(pat_a(self, sb, y, &a2), "claim C1 step a relabel")?;
        let mut a1 = pa1.apply_colouring(&a1);
        let mut a2 = pa2.apply_colouring(&a2);
        let a1v = a1.colour(self.to_child(node, sa, v));
        let a2v = a2.colour(self.to_child(node, sb, v));
        if a1v == a2v {
            let col = self.amalgamate(node, [(sa, &a1, None), (sb, &a2, None)])?;
            return Ok(Attempt::Done(col));
        }
        if a1v == 2 {
            // mirror the configuration so that a1(v) = 3, a2(v) = 2
            std::mem::swap(&mut x, &mut y);
            std::mem::swap(&mut sa, &mut sb);
            std::mem::swap(&mut a1, &mut a2);
        }

        let b1k = self.cq(node, sa, ConditionKind::C3, &[u, x, v]);
        let b2k = self.cq(node, sb, ConditionKind::C3, &[u, y, v]);
        let (b1, b2) = (self.fetch(&mut needs, b1k), self.fetch(&mut needs, b2k));
        let (Some(b1), Some(b2)) = (b1, b2) else {
            return Ok(Attempt::Need(needs));
        };
        // relabel to x/y -> 1, u -> 2, v in {1, 3}
        let pat_b = |this: &Engine<'_>, slot: usize, first: u32, col: &Colouring| {
            let vt = this.to_child(node, slot, v);
            let shape = if col.colour(vt) == col.colour(this.to_child(node, slot, first)) {
                1
            } else {
                3
            };
            match_pattern(
                col,
                &[
                    (this.to_child(node, slot, first), ColourPattern::Exactly(1)),
                    (this.to_child(node, slot, u), ColourPattern::Exactly(2)),
                    (vt, ColourPattern::Exactly(shape)),
                ],
            )
        };
        let b1 = Self::require(pat_b(self, sa, x, &b1), "claim C1 step b relabel")?.apply_colouring(&b1);
        let b2 = Self::require(pat_b(self, sb, y, &b2), "claim C1 step b relabel")?.apply_colouring(&b2);
        let b1v = b1.colour(self.to_child(node, sa, v));
        let b2v = b2.colour(self.to_child(node, sb, v));
        if b1v == b2v {
            let col = self.amalgamate(node, [(sa, &b1, None), (sb, &b2, None)])?;
            return Ok(Attempt::Done(col));
        }
        if b2v == 3 {
            let col = self.amalgamate(node, [(sa, &a1, None), (sb, &b2, None)])?;
            return Ok(Attempt::Done(col));
        }
        // now b1(v) = 3 and b2(v) = 1

        let c1k = self.cq(node, sa, ConditionKind::C3, &[v, x, u]);
        let c2k = self.cq(node, sb, ConditionKind::C3, &[v, y, u]);
        let (c1, c2) = (self.fetch(&mut needs, c1k), self.fetch(&mut needs, c2k));
        let (Some(c1), Some(c2)) = (c1, c2) else {
            return Ok(Attempt::Need(needs));
        };
        // relabel to first -> 1 and (u, v) -> (1, 2) or (2, 3)
        let pat_c = |this: &Engine<'_>, slot: usize, first: u32, col: &Colouring| {
            let (ut, vt) = (this.to_child(node, slot, u), this.to_child(node, slot, v));
            let (us, vs) = if col.colour(ut) == col.colour(this.to_child(node, slot, first)) {
                (1, 2)
            } else {
                (2, 3)
            };
            match_pattern(
                col,
                &[
                    (this.to_child(node, slot, first), ColourPattern::Exactly(1)),
                    (ut, ColourPattern::Exactly(us)),
                    (vt, ColourPattern::Exactly(vs)),
                ],
            )
        };
        let c1 = Self::require(pat_c(self, sa, x, &c1), "claim C1 step c relabel")?.apply_colouring(&c1);
        let c2 = Self::require(pat_c(self, sb, y, &c2), "claim C1 step c relabel")?.apply_colouring(&c2);
        let c1u = c1.colour(self.to_child(node, sa, u));
        let c2u = c2.colour(self.to_child(node, sb, u));
        if c1u == c2u {
            let col = self.amalgamate(node, [(sa, &c1, None), (sb, &c2, None)])?;
            return Ok(Attempt::Done(col));
        }
        if c2u == 2 {
            let col = self.amalgamate(node, [(sa, &a1, None), (sb, &c2, None)])?;
            return Ok(Attempt::Done(col));
        }
        // now c1: u -> 2, v -> 3 and c2: u -> 1, v -> 2

        // a2 has u and v both on colour 2, so uv cannot be an edge
        if self.graph(node).has_edge(u, v) {
            return Err(EngineError::InternalInvariant(
                "claim C1 reached the C4 step with uv an edge".into(),
            ));
        }
        let d1k = self.cq(node, sa, ConditionKind::C4, &[x, u, v]);
        let Some(d1) = self.fetch(&mut needs, d1k) else {
            return Ok(Attempt::Need(needs));
        };
        // relabel: x -> 1, the triple's other colour -> 2
        let xs = d1.colour(self.to_child(node, sa, x));
        let mut constraints = vec![(self.to_child(node, sa, x), ColourPattern::Exactly(1))];
        for w in [u, v] {
            if d1.colour(self.to_child(node, sa, w)) != xs {
                constraints.push((self.to_child(node, sa, w), ColourPattern::Exactly(2)));
            }
        }
        let d1 = Self::require(match_pattern(&d1, &constraints), "claim C1 step d relabel")?
            .apply_colouring(&d1);
        let d1u = d1.colour(self.to_child(node, sa, u));
        let d1v = d1.colour(self.to_child(node, sa, v));
        let partner = match (d1u, d1v) {
            (1, 2) => &c2,
            (2, 1) => &b2,
            (2, 2) => &a2,
            other => {
                return Err(EngineError::InternalInvariant(format!(
                    "claim C1 step d produced pattern {other:?}"
                )))
            }
        };
        let col = self.amalgamate(node, [(sa, &d1, None), (sb, partner, None)])?;
        Ok(Attempt::Done(col))
    }

    // C3 for a crossing triple
    fn claim_c3(&mut self, node: usize, verts: &[u32]) -> Result<Attempt, EngineError> {
        let cut = self.cut_of(node).to_vec();
        let (mut u, mut v) = (cut[0], cut[1]);
        let (x, y0, z0) = (verts[0], verts[1], verts[2]);
        let m = self.cfg.m;
        let mut needs = Vec::new();

        if x == u || x == v {
            // rename the cut so the distinguished vertex is u; y and z
            // then sit strictly on opposite sides
            if x == v {
                std::mem::swap(&mut u, &mut v);
            }
            let (mut y, mut z) = (y0, z0);
            let mut sy = self.strict_side(node, y).unwrap();
            if sy == 1 {
                std::mem::swap(&mut y, &mut z);
                sy = 0;
            }
            let sz = 1 - sy;
            let a1k = self.cq(node, sy, ConditionKind::C3, &[x, v, y]);
            let a2k = self.cq(node, sz, ConditionKind::C3, &[x, v, z]);
            let (a1, a2) = (self.fetch(&mut needs, a1k), self.fetch(&mut needs, a2k));
            let (Some(a1), Some(a2)) = (a1, a2) else {
                return Ok(Attempt::Need(needs));
            };
            let pin = |this: &Engine<'_>, slot: usize, col: &Colouring| {
                match_pattern(
                    col,
                    &[
                        (this.to_child(node, slot, x), ColourPattern::Exactly(1)),
                        (this.to_child(node, slot, v), ColourPattern::Exactly(2)),
                    ],
                )
            };
            let a1 = Self::require(pin(self, sy, &a1), "claim C3 anchored relabel")?.apply_colouring(&a1);
            let a2 = Self::require(pin(self, sz, &a2), "claim C3 anchored relabel")?.apply_colouring(&a2);
            let col = self.amalgamate(node, [(sy, &a1, None), (sz, &a2, None)])?;
            return Ok(Attempt::Done(col));
        }

        let sa = self.strict_side(node, x).unwrap();
        let sb = 1 - sa;
        let in_b = |this: &Engine<'_>, w: u32| {
            w == u || w == v || this.strict_side(node, w) == Some(sb)
        };
        if in_b(self, y0) && in_b(self, z0) {
            self.claim_c3_case1(node, sa, sb, x, y0, z0, u, v, needs)
        } else {
            // one of y, z shares x's strict side, the other is strictly
            // opposite
            let (y, z) = if self.strict_side(node, y0) == Some(sa) {
                (y0, z0)
            } else {
                (z0, y0)
            };
            let a1k = self.cq(node, sa, ConditionKind::C3, &[x, y, u]);
            let Some(a1) = self.fetch(&mut needs, a1k) else {
                return Ok(Attempt::Need(needs));
            };
            let shape_u = if a1.colour(self.to_child(node, sa, u))
                == a1.colour(self.to_child(node, sa, y))
            {
                2
            } else {
                3
            };
            let a1 = Self::require(
                match_pattern(
                    &a1,
                    &[
                        (self.to_child(node, sa, x), ColourPattern::Exactly(1)),
                        (self.to_child(node, sa, y), ColourPattern::Exactly(2)),
                        (self.to_child(node, sa, u), ColourPattern::Exactly(shape_u)),
                    ],
                ),
                "claim C3 case 2 relabel",
            )?
            .apply_colouring(&a1);
            let a1u = a1.colour(self.to_child(node, sa, u));
            let a1v = a1.colour(self.to_child(node, sa, v));
            if a1v != 1 {
                // colour 1 misses u and v entirely; force agreement and
                // keep z off colour 1
                let bk = if a1u == a1v {
                    self.cq(node, sb, ConditionKind::C1, &[u, v])
                } else {
                    self.cq(node, sb, ConditionKind::C2, &[u, v])
                };
                let Some(cb) = self.fetch(&mut needs, bk) else {
                    return Ok(Attempt::Need(needs));
                };
                let mut constraints = vec![
                    (self.to_child(node, sb, u), ColourPattern::Exactly(a1u)),
                    (self.to_child(node, sb, v), ColourPattern::Exactly(a1v)),
                ];
                constraints.push((
                    self.to_child(node, sb, z),
                    ColourPattern::In(colour_set_complement(&[1], m)),
                ));
                let pi = Self::require(
                    match_pattern(&cb, &constraints),
                    "claim C3 case 2, colour 1 free on the cut",
                )?;
                let col = self.amalgamate(node, [(sa, &a1, None), (sb, &cb, Some(&pi))])?;
                return Ok(Attempt::Done(col));
            }
            // a1(v) = 1: ask the other side to keep v on 1, u matching,
            // and z off colour 1
            let b2k = self.cq(node, sb, ConditionKind::C3, &[v, u, z]);
            let Some(b2) = self.fetch(&mut needs, b2k) else {
                return Ok(Attempt::Need(needs));
            };
            let pi = Self::require(
                match_pattern(
                    &b2,
                    &[
                        (self.to_child(node, sb, v), ColourPattern::Exactly(1)),
                        (self.to_child(node, sb, u), ColourPattern::Exactly(a1u)),
                        (
                            self.to_child(node, sb, z),
                            ColourPattern::In(colour_set_complement(&[1], m)),
                        ),
                    ],
                ),
                "claim C3 case 2 final relabel",
            )?;
            let b2 = pi.apply_colouring(&b2);
            let col = self.amalgamate(node, [(sa, &a1, None), (sb, &b2, None)])?;
            Ok(Attempt::Done(col))
        }
    }

    // claim C3, case 1: x strictly in side A, both y and z in side B's
    // vertex set
    #[allow(clippy::too_many_arguments)]
    fn claim_c3_case1(
        &mut self,
        node: usize,
        sa: usize,
        sb: usize,
        x: u32,
        y: u32,
        z: u32,
        u: u32,
        v: u32,
        mut needs: Vec<Key>,
    ) -> Result<Attempt, EngineError> {
        let m = self.cfg.m;
        let g = self.graph(node);
        let uv_edge = g.has_edge(u, v);
        let off1 = ColourPattern::In(colour_set_complement(&[1], m));
        if uv_edge {
            let a1k = self.cq(node, sa, ConditionKind::C3, &[x, u, v]);
            let Some(a1) = self.fetch(&mut needs, a1k) else {
                return Ok(Attempt::Need(needs));
            };
            let a1 = Self::require(
                match_pattern(
                    &a1,
                    &[
                        (self.to_child(node, sa, x), ColourPattern::Exactly(1)),
                        (self.to_child(node, sa, u), ColourPattern::Exactly(2)),
                        (self.to_child(node, sa, v), ColourPattern::Exactly(3)),
                    ],
                ),
                "claim C3 case 1 relabel with uv an edge",
            )?
            .apply_colouring(&a1);
            // a colouring of side B using at most m-1 colours on u,v,y,z
            let distinct: std::collections::BTreeSet<u32> = [u, v, y, z].into_iter().collect();
            let a2k = if m >= 5 || distinct.len() <= 3 {
                self.child_query(node, sb, Query::Any)
            } else {
                let four: Vec<u32> = distinct.into_iter().collect();
                let mut pick = None;
                'outer: for i in 0..4 {
                    for j in i + 1..4 {
                        if !g.has_edge(four[i], four[j]) {
                            pick = Some((four[i], four[j]));
                            break 'outer;
                        }
                    }
                }
                match pick {
                    Some((p, qv)) => self.cq(node, sb, ConditionKind::C1, &[p, qv]),
                    None => {
                        // u,v,y,z induce a K4: the graph is not 4-fragile
                        let mut w: Vec<u32> = four
                            .iter()
                            .map(|&l| self.tree.nodes[node].to_root[l as usize])
                            .collect();
                        w.sort_unstable();
                        return Err(EngineError::NotMFragile { witness: w });
                    }
                }
            };
            let Some(a2) = self.fetch(&mut needs, a2k) else {
                return Ok(Attempt::Need(needs));
            };
            let pi = Self::require(
                match_pattern(
                    &a2,
                    &[
                        (self.to_child(node, sb, u), ColourPattern::Exactly(2)),
                        (self.to_child(node, sb, v), ColourPattern::Exactly(3)),
                        (self.to_child(node, sb, y), avoid_clone(&off1)),
                        (self.to_child(node, sb, z), avoid_clone(&off1)),
                    ],
                ),
                "claim C3 case 1 fit into colours 2..m",
            )?;
            let a2 = pi.apply_colouring(&a2);
            let col = self.amalgamate(node, [(sa, &a1, None), (sb, &a2, None)])?;
            return Ok(Attempt::Done(col));
        }

        // uv not an edge: probe for a colouring of side A with
        // c(u) = c(v) distinct from c(x)
        let braw_k = self.cq(node, sa, ConditionKind::C3, &[x, u, v]);
        let Some(braw) = self.fetch(&mut needs, braw_k) else {
            return Ok(Attempt::Need(needs));
        };
        let bu = braw.colour(self.to_child(node, sa, u));
        let bv = braw.colour(self.to_child(node, sa, v));
        let a1_equal: Option<Colouring> = if bu == bv {
            Some(braw.clone())
        } else {
            let craw_k = self.cq(node, sa, ConditionKind::C4, &[x, u, v]);
            let Some(craw) = self.fetch(&mut needs, craw_k) else {
                return Ok(Attempt::Need(needs));
            };
            let cu = craw.colour(self.to_child(node, sa, u));
            let cv = craw.colour(self.to_child(node, sa, v));
            if cu == cv {
                Some(craw)
            } else {
                None
            }
        };

        if let Some(a1) = a1_equal {
            // branch 1: side A gives u and v one shared colour
            let a1 = Self::require(
                match_pattern(
                    &a1,
                    &[
                        (self.to_child(node, sa, x), ColourPattern::Exactly(1)),
                        (self.to_child(node, sa, u), ColourPattern::Exactly(2)),
                    ],
                ),
                "claim C3 branch 1 relabel",
            )?
            .apply_colouring(&a1);
            let a2k = self.cq(node, sb, ConditionKind::C1, &[u, v]);
            let Some(a2) = self.fetch(&mut needs, a2k) else {
                return Ok(Attempt::Need(needs));
            };
            let pi = Self::require(
                match_pattern(
                    &a2,
                    &[
                        (self.to_child(node, sb, u), ColourPattern::Exactly(2)),
                        (self.to_child(node, sb, y), avoid_clone(&off1)),
                        (self.to_child(node, sb, z), avoid_clone(&off1)),
                    ],
                ),
                "claim C3 branch 1 fit",
            )?;
            let a2 = pi.apply_colouring(&a2);
            let col = self.amalgamate(node, [(sa, &a1, None), (sb, &a2, None)])?;
            return Ok(Attempt::Done(col));
        }

        // fallback: b1 with distinct cut colours plus c1 from C4 with x
        // stuck to one cut vertex
        let craw_k = self.cq(node, sa, ConditionKind::C4, &[x, u, v]);
        let Some(craw) = self.fetch(&mut needs, craw_k) else {
            return Ok(Attempt::Need(needs));
        };
        let cx = craw.colour(self.to_child(node, sa, x));
        // order the cut so x shares a colour with "uu" in craw
        let (uu, vv) = if craw.colour(self.to_child(node, sa, u)) == cx {
            (u, v)
        } else {
            (v, u)
        };
        let b1 = Self::require(
            match_pattern(
                &braw,
                &[
                    (self.to_child(node, sa, x), ColourPattern::Exactly(1)),
                    (self.to_child(node, sa, uu), ColourPattern::Exactly(2)),
                    (self.to_child(node, sa, vv), ColourPattern::Exactly(3)),
                ],
            ),
            "claim C3 fallback b relabel",
        )?
        .apply_colouring(&braw);
        let c1 = Self::require(
            match_pattern(
                &craw,
                &[
                    (self.to_child(node, sa, x), ColourPattern::Exactly(1)),
                    (self.to_child(node, sa, vv), ColourPattern::Exactly(2)),
                ],
            ),
            "claim C3 fallback c relabel",
        )?
        .apply_colouring(&craw);

        let d2k = self.cq(node, sb, ConditionKind::C2, &[u, v]);
        let Some(d2) = self.fetch(&mut needs, d2k) else {
            return Ok(Attempt::Need(needs));
        };
        let palette: std::collections::BTreeSet<u32> = [u, v, y, z]
            .into_iter()
            .map(|w| d2.colour(self.to_child(node, sb, w)))
            .collect();
        if palette.len() <= 3 {
            let pi = Self::require(
                match_pattern(
                    &d2,
                    &[
                        (self.to_child(node, sb, uu), ColourPattern::Exactly(2)),
                        (self.to_child(node, sb, vv), ColourPattern::Exactly(3)),
                        (self.to_child(node, sb, y), avoid_clone(&off1)),
                        (self.to_child(node, sb, z), avoid_clone(&off1)),
                    ],
                ),
                "claim C3 fallback, three colours on the quadruple",
            )?;
            let d2 = pi.apply_colouring(&d2);
            let col = self.amalgamate(node, [(sa, &b1, None), (sb, &d2, None)])?;
            Ok(Attempt::Done(col))
        } else {
            let pi = Self::require(
                match_pattern(
                    &d2,
                    &[
                        (self.to_child(node, sb, uu), ColourPattern::Exactly(1)),
                        (self.to_child(node, sb, vv), ColourPattern::Exactly(2)),
                        (self.to_child(node, sb, y), ColourPattern::Exactly(3)),
                        (self.to_child(node, sb, z), ColourPattern::Exactly(4)),
                    ],
                ),
                "claim C3 fallback, four distinct colours",
            )?;
            let d2 = pi.apply_colouring(&d2);
            let col = self.amalgamate(node, [(sa, &c1, None), (sb, &d2, None)])?;
            Ok(Attempt::Done(col))
        }
    }

    // C2 for a crossing pair reduces to C3 with any third vertex
    fn claim_c2(&mut self, node: usize, verts: &[u32]) -> Result<Attempt, EngineError> {
        let (x, y) = (verts[0], verts[1]);
        let n = self.graph(node).vertex_count() as u32;
        let w = (0..n)
            .find(|&w| w != x && w != y)
            .expect("internal nodes have at least 4 vertices");
        let key = (node, canon_query(&Condition::c3(x, y, w)));
        let mut needs = Vec::new();
        match self.fetch(&mut needs, key) {
            Some(col) => Ok(Attempt::Done(col)),
            None => Ok(Attempt::Need(needs)),
        }
    }

    // C4 for a crossing triple
    fn claim_c4(&mut self, node: usize, verts: &[u32]) -> Result<Attempt, EngineError> {
        let cut = self.cut_of(node).to_vec();
        let (mut u, mut v) = (cut[0], cut[1]);
        let m = self.cfg.m;
        let mut needs = Vec::new();

        // normalize to x strictly in side A, y in side B minus u, z
        // strictly in side B
        let mut in_s: Vec<u32> = verts.iter().copied().filter(|&w| w == u || w == v).collect();
        let strict: Vec<(u32, usize)> = verts
            .iter()
            .copied()
            .filter_map(|w| self.strict_side(node, w).map(|s| (w, s)))
            .collect();
        let (sa, x, y, z);
        if let Some(&s_elem) = in_s.pop().as_ref() {
            // one tuple vertex on the cut: it plays y; make it v
            if s_elem == u {
                std::mem::swap(&mut u, &mut v);
            }
            y = s_elem;
            let (&(w1, s1), &(w2, _)) = match (&strict[0], &strict[1]) {
                (a, b) => (a, b),
            };
            sa = s1;
            x = w1;
            z = w2;
        } else {
            // split 2 + 1 between the strict sides; the lone vertex is x
            let lone_pos = (0..3)
                .find(|&i| strict.iter().filter(|&&(_, s)| s == strict[i].1).count() == 1)
                .expect("crossing triple splits 2 + 1 over strict sides");
            sa = strict[lone_pos].1;
            x = strict[lone_pos].0;
            let rest: Vec<u32> = (0..3)
                .filter(|&i| i != lone_pos)
                .map(|i| strict[i].0)
                .collect();
            y = rest[0].min(rest[1]);
            z = rest[0].max(rest[1]);
        }
        let sb = 1 - sa;
        let g = self.graph(node);
        let uv_edge = g.has_edge(u, v);

        if uv_edge {
            let a1k = self.cq(node, sa, ConditionKind::C3, &[x, u, v]);
            let a2k = self.cq(node, sb, ConditionKind::C3, &[u, y, z]);
            let (a1, a2) = (self.fetch(&mut needs, a1k), self.fetch(&mut needs, a2k));
            let (Some(a1), Some(a2)) = (a1, a2) else {
                return Ok(Attempt::Need(needs));
            };
            let a1 = Self::require(
                match_pattern(
                    &a1,
                    &[
                        (self.to_child(node, sa, x), ColourPattern::Exactly(1)),
                        (self.to_child(node, sa, u), ColourPattern::Exactly(2)),
                        (self.to_child(node, sa, v), ColourPattern::Exactly(3)),
                    ],
                ),
                "claim C4 relabel with uv an edge",
            )?
            .apply_colouring(&a1);
            // choose targets for y and z that leave exactly two colours
            // on the triple
            let sy = a2.colour(self.to_child(node, sb, y));
            let sz = a2.colour(self.to_child(node, sb, z));
            let sv = a2.colour(self.to_child(node, sb, v));
            let (ty, tz) = if sy == sz {
                if sy == sv {
                    (3, 3)
                } else {
                    (4, 4)
                }
            } else if sy == sv {
                (3, 1)
            } else if sz == sv {
                (1, 3)
            } else {
                (1, 4)
            };
            let pi = Self::require(
                match_pattern(
                    &a2,
                    &[
                        (self.to_child(node, sb, u), ColourPattern::Exactly(2)),
                        (self.to_child(node, sb, v), ColourPattern::Exactly(3)),
                        (self.to_child(node, sb, y), ColourPattern::Exactly(ty)),
                        (self.to_child(node, sb, z), ColourPattern::Exactly(tz)),
                    ],
                ),
                "claim C4 target fit with uv an edge",
            )?;
            let a2 = pi.apply_colouring(&a2);
            let col = self.amalgamate(node, [(sa, &a1, None), (sb, &a2, None)])?;
            return Ok(Attempt::Done(col));
        }

        // uv not an edge: probe side A as in claim C3
        let braw_k = self.cq(node, sa, ConditionKind::C3, &[x, u, v]);
        let Some(braw) = self.fetch(&mut needs, braw_k) else {
            return Ok(Attempt::Need(needs));
        };
        let a1_equal = if braw.colour(self.to_child(node, sa, u))
            == braw.colour(self.to_child(node, sa, v))
        {
            Some(braw.clone())
        } else {
            let craw_k = self.cq(node, sa, ConditionKind::C4, &[x, u, v]);
            let Some(craw) = self.fetch(&mut needs, craw_k) else {
                return Ok(Attempt::Need(needs));
            };
            if craw.colour(self.to_child(node, sa, u)) == craw.colour(self.to_child(node, sa, v))
            {
                Some(craw)
            } else {
                None
            }
        };

        if let Some(a1) = a1_equal {
            let a1 = Self::require(
                match_pattern(
                    &a1,
                    &[
                        (self.to_child(node, sa, x), ColourPattern::Exactly(1)),
                        (self.to_child(node, sa, u), ColourPattern::Exactly(2)),
                    ],
                ),
                "claim C4 branch 1 relabel",
            )?
            .apply_colouring(&a1);
            let a2k = self.cq(node, sb, ConditionKind::C1, &[u, v]);
            let Some(a2) = self.fetch(&mut needs, a2k) else {
                return Ok(Attempt::Need(needs));
            };
            let su = a2.colour(self.to_child(node, sb, u));
            let sy = a2.colour(self.to_child(node, sb, y));
            let sz = a2.colour(self.to_child(node, sb, z));
            let mut constraints =
                vec![(self.to_child(node, sb, u), ColourPattern::Exactly(2))];
            if sy == sz {
                // shared colour lands anywhere off 1
                constraints.push((
                    self.to_child(node, sb, y),
                    ColourPattern::In(colour_set_complement(&[1], m)),
                ));
            } else {
                // route one of them onto colour 1
                let chosen = if sy != su { y } else { z };
                constraints.push((self.to_child(node, sb, chosen), ColourPattern::Exactly(1)));
            }
            let pi = Self::require(
                match_pattern(&a2, &constraints),
                "claim C4 branch 1 fit",
            )?;
            let a2 = pi.apply_colouring(&a2);
            let col = self.amalgamate(node, [(sa, &a1, None), (sb, &a2, None)])?;
            return Ok(Attempt::Done(col));
        }

        let craw_k = self.cq(node, sa, ConditionKind::C4, &[x, u, v]);
        let Some(craw) = self.fetch(&mut needs, craw_k) else {
            return Ok(Attempt::Need(needs));
        };
        let cx = craw.colour(self.to_child(node, sa, x));
        let (uu, vv) = if craw.colour(self.to_child(node, sa, u)) == cx {
            (u, v)
        } else {
            (v, u)
        };
        let b1 = Self::require(
            match_pattern(
                &braw,
                &[
                    (self.to_child(node, sa, x), ColourPattern::Exactly(1)),
                    (self.to_child(node, sa, uu), ColourPattern::Exactly(2)),
                    (self.to_child(node, sa, vv), ColourPattern::Exactly(3)),
                ],
            ),
            "claim C4 fallback b relabel",
        )?
        .apply_colouring(&braw);
        let c1 = Self::require(
            match_pattern(
                &craw,
                &[
                    (self.to_child(node, sa, x), ColourPattern::Exactly(1)),
                    (self.to_child(node, sa, vv), ColourPattern::Exactly(2)),
                ],
            ),
            "claim C4 fallback c relabel",
        )?
        .apply_colouring(&craw);

        let d2k = self.cq(node, sb, ConditionKind::C2, &[u, v]);
        let Some(d2) = self.fetch(&mut needs, d2k) else {
            return Ok(Attempt::Need(needs));
        };
        let su = d2.colour(self.to_child(node, sb, uu));
        let sv = d2.colour(self.to_child(node, sb, vv));
        let sy = d2.colour(self.to_child(node, sb, y));
        let sz = d2.colour(self.to_child(node, sb, z));
        if sy == sz {
            let pi = Self::require(
                match_pattern(
                    &d2,
                    &[
                        (self.to_child(node, sb, uu), ColourPattern::Exactly(2)),
                        (self.to_child(node, sb, vv), ColourPattern::Exactly(3)),
                        (
                            self.to_child(node, sb, y),
                            ColourPattern::In(colour_set_complement(&[1], m)),
                        ),
                    ],
                ),
                "claim C4 fallback, equal pair",
            )?;
            let d2 = pi.apply_colouring(&d2);
            let col = self.amalgamate(node, [(sa, &b1, None), (sb, &d2, None)])?;
            return Ok(Attempt::Done(col));
        }
        let palette: std::collections::BTreeSet<u32> = [su, sv, sy, sz].into_iter().collect();
        if palette.len() >= 3 {
            let chosen = if sy != su && sy != sv { y } else { z };
            let pi = Self::require(
                match_pattern(
                    &d2,
                    &[
                        (self.to_child(node, sb, uu), ColourPattern::Exactly(2)),
                        (self.to_child(node, sb, vv), ColourPattern::Exactly(3)),
                        (self.to_child(node, sb, chosen), ColourPattern::Exactly(1)),
                    ],
                ),
                "claim C4 fallback, three colours",
            )?;
            let d2 = pi.apply_colouring(&d2);
            let col = self.amalgamate(node, [(sa, &b1, None), (sb, &d2, None)])?;
            Ok(Attempt::Done(col))
        } else {
            let pi = Self::require(
                match_pattern(
                    &d2,
                    &[
                        (self.to_child(node, sb, uu), ColourPattern::Exactly(1)),
                        (self.to_child(node, sb, vv), ColourPattern::Exactly(2)),
                    ],
                ),
                "claim C4 fallback, two colours",
            )?;
            let d2 = pi.apply_colouring(&d2);
            let col = self.amalgamate(node, [(sa, &c1, None), (sb, &d2, None)])?;
            Ok(Attempt::Done(col))
        }
    }
}

fn avoid_clone(p: &ColourPattern) -> ColourPattern {
    match p {
        ColourPattern::Exactly(t) => ColourPattern::Exactly(*t),
        ColourPattern::In(s) => ColourPattern::In(*s),
    }
}

/// Proper m-colouring of an m-fragile graph: decompose, then satisfy C2
/// on the lexicographically smallest vertex pair.
pub fn colour(g: &Graph, m: u32) -> Result<Colouring, EngineError> {
    colour_with(g, EngineConfig::with_m(m))
}

pub fn colour_with(g: &Graph, cfg: EngineConfig) -> Result<Colouring, EngineError> {
    let m = cfg.m;
    let n = g.vertex_count();
    if n <= 1 {
        if m < 4 {
            return Err(EngineError::Config(format!("m must be at least 4, got {m}")));
        }
        return Ok(Colouring::new(m, vec![1; n]));
    }
    let tree = crate::decomp::decompose(g);
    let mut engine = Engine::new(&tree, cfg)?;
    engine.satisfy_root(&Condition::c2(0, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{double_subdivide, named, random_fragile, RandomFragileProfile};
    use crate::decomp::decompose;
    use crate::oracle::{exact_colour, ColourConstraint, OracleLimits};

    fn engine_for(tree: &DecompTree, m: u32) -> Engine<'_> {
        Engine::new(tree, EngineConfig::with_m(m)).unwrap()
    }

    #[test]
    fn check_condition_basics() {
        let k3 = named("k3").unwrap();
        let c = Colouring::new(4, vec![1, 2, 3]);
        assert!(check_condition(&k3, &Condition::c2(0, 1), &c).unwrap());
        assert!(!check_condition(&k3, &Condition::c4(0, 1, 2), &c).unwrap());
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let c = Colouring::new(4, vec![2, 1, 2]);
        assert!(check_condition(&p3, &Condition::c1(0, 2), &c).unwrap());
        assert!(check_condition(&p3, &Condition::c3(1, 0, 2), &c).unwrap());
    }

    #[test]
    fn check_condition_permutation_invariant() {
        let c5 = named("c5").unwrap();
        let c = Colouring::new(4, vec![1, 2, 1, 2, 3]);
        let pi = ColourPermutation { map: vec![4, 3, 2, 1] };
        for cond in [
            Condition::c1(0, 2),
            Condition::c2(0, 1),
            Condition::c3(4, 0, 1),
            Condition::c4(0, 1, 2),
        ] {
            assert_eq!(
                check_condition(&c5, &cond, &c).unwrap(),
                check_condition(&c5, &cond, &pi.apply_colouring(&c)).unwrap()
            );
        }
    }

    #[test]
    fn match_pattern_examples() {
        // single vertex to an exact colour
        let c = Colouring::new(4, vec![3]);
        let pi = match_pattern(&c, &[(0, ColourPattern::Exactly(1))]).unwrap();
        assert_eq!(pi.apply(3), 1);

        // injectivity on a rainbow triangle: three vertices cannot fold
        // into two colours
        let c = Colouring::new(4, vec![1, 2, 3]);
        assert!(match_pattern(
            &c,
            &[
                (0, ColourPattern::In(colour_set(&[1, 2]))),
                (1, ColourPattern::In(colour_set(&[1, 2]))),
                (2, ColourPattern::In(colour_set(&[1, 2]))),
            ]
        )
        .is_none());

        // identity is the lexicographically first fit
        let c = Colouring::new(4, vec![2, 2]);
        let pi = match_pattern(
            &c,
            &[
                (0, ColourPattern::Exactly(2)),
                (1, ColourPattern::In(colour_set(&[2, 3]))),
            ],
        )
        .unwrap();
        assert_eq!(pi, ColourPermutation::identity(4));
    }

    #[test]
    fn base_cases_all_conditions() {
        // single edge: C2 forced by properness
        let e = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let tree = decompose(&e);
        let mut eng = engine_for(&tree, 4);
        let col = eng.satisfy_root(&Condition::c2(0, 1)).unwrap();
        assert!(check_condition(&e, &Condition::c2(0, 1), &col).unwrap());
    }

    #[test]
    fn invalid_conditions_rejected() {
        let k4 = named("k4").unwrap();
        let tree = decompose(&k4);
        let mut eng = engine_for(&tree, 5);
        assert!(matches!(
            eng.satisfy_root(&Condition::c1(0, 1)),
            Err(EngineError::ConditionInvalid(_))
        ));
        assert!(matches!(
            eng.satisfy_root(&Condition::c4(0, 1, 2)),
            Err(EngineError::ConditionInvalid(_))
        ));
        assert!(matches!(
            eng.satisfy_root(&Condition::c2(0, 0)),
            Err(EngineError::ConditionInvalid(_))
        ));
        assert!(matches!(
            eng.satisfy_root(&Condition::c2(0, 99)),
            Err(EngineError::ConditionInvalid(_))
        ));
    }

    #[test]
    fn c5_c1_pair_monochromatic() {
        let c5 = named("c5").unwrap();
        let tree = decompose(&c5);
        let mut eng = engine_for(&tree, 4);
        let cond = Condition::c1(0, 2);
        let col = eng.satisfy_root(&cond).unwrap();
        assert!(check_condition(&c5, &cond, &col).unwrap());
        // oracle agrees such a colouring exists
        let r = exact_colour(&c5, 4, &[ColourConstraint::Equal(0, 2)], &OracleLimits::default())
            .unwrap();
        assert!(r.value.is_some());
    }

    #[test]
    fn k4_leaf_with_m5() {
        let k4 = named("k4").unwrap();
        let tree = decompose(&k4);
        let mut eng = engine_for(&tree, 5);
        let col = eng.satisfy_root(&Condition::c2(0, 1)).unwrap();
        assert!(check_condition(&k4, &Condition::c2(0, 1), &col).unwrap());
        // all proper colourings of K4 are rainbow, so 4 colours suffice
        assert!(col.colours_used() <= 4);
    }

    #[test]
    fn k4_minus_edge_c4() {
        let g = named("k4-e").unwrap();
        let tree = decompose(&g);
        let mut eng = engine_for(&tree, 4);
        let cond = Condition::c4(0, 1, 2);
        let col = eng.satisfy_root(&cond).unwrap();
        assert!(check_condition(&g, &cond, &col).unwrap());
    }

    #[test]
    fn k4_not_4_fragile() {
        let k4 = named("k4").unwrap();
        let tree = decompose(&k4);
        let mut eng = engine_for(&tree, 4);
        assert!(matches!(
            eng.satisfy_root(&Condition::c2(0, 1)),
            Err(EngineError::NotMFragile { .. })
        ));
    }

    #[test]
    fn colour_small_graphs() {
        assert_eq!(colour(&Graph::empty(0), 4).unwrap().assign.len(), 0);
        assert_eq!(colour(&Graph::empty(1), 4).unwrap().assign, vec![1]);
        let c5 = named("c5").unwrap();
        let col = colour(&c5, 4).unwrap();
        assert!(is_proper(&c5, &col).unwrap());
    }

    #[test]
    fn colour_subdivided_k5() {
        let (g, _) = double_subdivide(&named("k5").unwrap());
        let col = colour(&g, 4).unwrap();
        assert!(is_proper(&g, &col).unwrap());
    }

    #[test]
    fn colour_k4_with_5() {
        // K4 is 3-connected and 4-chromatic, hence 5-fragile
        let k4 = named("k4").unwrap();
        let col = colour(&k4, 5).unwrap();
        assert!(is_proper(&k4, &col).unwrap());
        assert_eq!(col.colours_used(), 4);
    }

    #[test]
    fn engine_deterministic() {
        let profile = RandomFragileProfile::default();
        let g = random_fragile(25, 11, &profile);
        let a = colour(&g, 4).unwrap();
        let b = colour(&g, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn memo_on_off_agree_on_satisfaction() {
        let profile = RandomFragileProfile::default();
        let g = random_fragile(20, 3, &profile);
        let tree = decompose(&g);
        let cond = Condition::c2(0, 1);
        for memo in [true, false] {
            let cfg = EngineConfig { memo_enabled: memo, ..EngineConfig::with_m(4) };
            let mut eng = Engine::new(&tree, cfg).unwrap();
            let col = eng.satisfy_root(&cond).unwrap();
            assert!(check_condition(&g, &cond, &col).unwrap(), "memo={memo}");
        }
    }

    #[test]
    fn exhaustive_small_fragile_queries() {
        // every valid condition on a couple of small fragile graphs,
        // engine output verified and cross-checked against the oracle
        let lim = OracleLimits::default();
        let samples = [
            named("c5").unwrap(),
            named("k4-e").unwrap(),
            named("c4").unwrap(),
            random_fragile(9, 5, &RandomFragileProfile::default()),
        ];
        for g in samples {
            let tree = decompose(&g);
            let n = g.vertex_count() as u32;
            let mut eng = engine_for(&tree, 4);
            for x in 0..n {
                for y in 0..n {
                    if x == y {
                        continue;
                    }
                    if !g.has_edge(x, y) {
                        let cond = Condition::c1(x, y);
                        let col = eng.satisfy_root(&cond).unwrap();
                        assert!(check_condition(&g, &cond, &col).unwrap(), "{g:?} C1({x},{y})");
                    }
                    let cond = Condition::c2(x, y);
                    let col = eng.satisfy_root(&cond).unwrap();
                    assert!(check_condition(&g, &cond, &col).unwrap());
                    for z in 0..n {
                        if z == x || z == y || y > z {
                            continue;
                        }
                        let cond = Condition::c3(x, y, z);
                        let col = eng.satisfy_root(&cond).unwrap();
                        assert!(check_condition(&g, &cond, &col).unwrap(), "{g:?} C3({x};{y},{z})");
                        if x < y {
                            let all_adj = g.has_edge(x, y) && g.has_edge(x, z) && g.has_edge(y, z);
                            if !all_adj {
                                let cond = Condition::c4(x, y, z);
                                let col = eng.satisfy_root(&cond).unwrap();
                                assert!(
                                    check_condition(&g, &cond, &col).unwrap(),
                                    "{g:?} C4({x},{y},{z})"
                                );
                                // the oracle confirms satisfiability too
                                let r = exact_colour(&g, 4, &[], &lim).unwrap();
                                assert!(r.value.is_some());
                            }
                        }
                    }
                }
            }
        }
    }
}
