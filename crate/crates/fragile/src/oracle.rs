//! Exhaustive ground truth for small graphs: exact chromatic number,
//! constrained colouring search, independence number, fragility by
//! brute force, and literal enumeration of all proper colourings.
//!
//! Everything here is deliberately independent of the decomposition and
//! engine modules so it can serve as their cross-check. All searches are
//! stateless per call and report the number of search nodes they explored.

use crate::graph::{Colouring, Graph};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
    #[error("graph too large for this oracle: {n} vertices, cap {cap}")]
    TooLarge { n: usize, cap: usize },
}

/// Size caps and the node budget. Caps are configuration, not constants.
#[derive(Clone, Debug)]
pub struct OracleLimits {
    pub chromatic_cap: usize,
    pub independence_cap: usize,
    pub fragile_cap: usize,
    pub enumeration_cap: usize,
    pub node_budget: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            chromatic_cap: 20,
            independence_cap: 40,
            fragile_cap: 16,
            enumeration_cap: 18,
            node_budget: 500_000_000,
        }
    }
}

impl OracleLimits {
    pub fn with_budget(nodes: u64) -> Self {
        OracleLimits { node_budget: nodes, ..Default::default() }
    }
}

/// A search answer together with the number of nodes explored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Searched<T> {
    pub value: T,
    pub nodes: u64,
}

struct Ticker {
    nodes: u64,
    budget: u64,
}

impl Ticker {
    fn new(budget: u64) -> Ticker {
        Ticker { nodes: 0, budget }
    }
    #[inline]
    fn tick(&mut self) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(OracleError::BudgetExceeded { nodes: self.nodes })
        } else {
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// constrained exact colouring
// ---------------------------------------------------------------------------

/// Side constraints for [`exact_colour`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColourConstraint {
    Equal(u32, u32),
    NotEqual(u32, u32),
    Fixed(u32, u32),
}

/// Finds a proper `k`-colouring of `g` satisfying all constraints, or
/// proves none exists. Exhaustive.
///
/// Equal-constrained vertices are contracted into classes; NotEqual
/// becomes an edge between classes; Fixed pins a class. Symmetry breaking
/// (new colours introduced in increasing order) is applied exactly when no
/// Fixed constraint is present, which preserves satisfiability.
pub fn exact_colour(
    g: &Graph,
    k: u32,
    constraints: &[ColourConstraint],
    limits: &OracleLimits,
) -> Result<Searched<Option<Colouring>>, OracleError> {
    let n = g.vertex_count();
    if n > limits.chromatic_cap.max(limits.enumeration_cap) {
        return Err(OracleError::TooLarge { n, cap: limits.chromatic_cap });
    }
    let mut t = Ticker::new(limits.node_budget);

    // union-find over Equal constraints
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut r = x;
        while parent[r as usize] != r {
            r = parent[r as usize];
        }
        let mut c = x;
        while parent[c as usize] != r {
            let next = parent[c as usize];
            parent[c as usize] = r;
            c = next;
        }
        r
    }
    for c in constraints {
        if let ColourConstraint::Equal(u, v) = *c {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv) as usize] = ru.min(rv);
            }
        }
    }
    // dense class ids
    let mut class_of = vec![0u32; n];
    let mut classes = 0u32;
    let mut rep_to_class = std::collections::HashMap::new();
    for v in 0..n as u32 {
        let r = find(&mut parent, v);
        let c = *rep_to_class.entry(r).or_insert_with(|| {
            let c = classes;
            classes += 1;
            c
        });
        class_of[v as usize] = c;
    }

    // quotient adjacency; a self-edge in the quotient is unsatisfiable
    let q = classes as usize;
    let mut qadj = vec![vec![false; q]; q];
    let mut add = |a: u32, b: u32| -> bool {
        if a == b {
            return false;
        }
        qadj[a as usize][b as usize] = true;
        qadj[b as usize][a as usize] = true;
        true
    };
    for (u, v) in g.edges() {
        if !add(class_of[u as usize], class_of[v as usize]) {
            return Ok(Searched { value: None, nodes: t.nodes });
        }
    }
    let mut has_fixed = false;
    let mut pinned: Vec<Option<u32>> = vec![None; q];
    for c in constraints {
        match *c {
            ColourConstraint::NotEqual(u, v) => {
                if !add(class_of[u as usize], class_of[v as usize]) {
                    return Ok(Searched { value: None, nodes: t.nodes });
                }
            }
            ColourConstraint::Fixed(v, col) => {
                has_fixed = true;
                if col == 0 || col > k {
                    return Ok(Searched { value: None, nodes: t.nodes });
                }
                let cl = class_of[v as usize] as usize;
                if pinned[cl].is_some_and(|p| p != col) {
                    return Ok(Searched { value: None, nodes: t.nodes });
                }
                pinned[cl] = Some(col);
            }
            ColourConstraint::Equal(..) => {}
        }
    }
    for (a, pin) in pinned.iter().enumerate() {
        if let Some(p) = *pin {
            for (b, other) in pinned.iter().enumerate() {
                if a != b && qadj[a][b] && *other == Some(p) {
                    return Ok(Searched { value: None, nodes: t.nodes });
                }
            }
        }
    }

    // backtracking over classes in id order
    let mut assign = vec![0u32; q];
    let symmetry = !has_fixed;
    let found = colour_backtrack(&qadj, &pinned, k, symmetry, &mut assign, 0, &mut t)?;
    let value = if found {
        let full = (0..n).map(|v| assign[class_of[v] as usize]).collect();
        Some(Colouring::new(k, full))
    } else {
        None
    };
    Ok(Searched { value, nodes: t.nodes })
}

fn colour_backtrack(
    qadj: &[Vec<bool>],
    pinned: &[Option<u32>],
    k: u32,
    symmetry: bool,
    assign: &mut [u32],
    pos: usize,
    t: &mut Ticker,
) -> Result<bool, OracleError> {
    if pos == assign.len() {
        return Ok(true);
    }
    let limit = if symmetry {
        let max_used = assign[..pos].iter().copied().max().unwrap_or(0);
        k.min(max_used + 1)
    } else {
        k
    };
    for col in 1..=limit {
        if let Some(p) = pinned[pos] {
            if p != col {
                continue;
            }
        }
        if (0..pos).any(|o| qadj[pos][o] && assign[o] == col) {
            continue;
        }
        t.tick()?;
        assign[pos] = col;
        if colour_backtrack(qadj, pinned, k, symmetry, assign, pos + 1, t)? {
            return Ok(true);
        }
        assign[pos] = 0;
    }
    Ok(false)
}

// ---------------------------------------------------------------------------
// chromatic number
// ---------------------------------------------------------------------------

/// Exact chromatic number by iterative deepening on `k`, with the first
/// colour class pinned through symmetry breaking.
pub fn chromatic_number(g: &Graph, limits: &OracleLimits) -> Result<Searched<u32>, OracleError> {
    let n = g.vertex_count();
    if n > limits.chromatic_cap {
        return Err(OracleError::TooLarge { n, cap: limits.chromatic_cap });
    }
    if n == 0 {
        return Ok(Searched { value: 0, nodes: 0 });
    }
    let mut nodes = 0;
    for k in 1..=n as u32 {
        let r = exact_colour(g, k, &[], limits)?;
        nodes += r.nodes;
        if r.value.is_some() {
            return Ok(Searched { value: k, nodes });
        }
    }
    unreachable!("every graph is |V|-colourable")
}

// ---------------------------------------------------------------------------
// independence number
// ---------------------------------------------------------------------------

/// Exact maximum independent set size, branch and bound on a maximum
/// degree vertex with a closed form once every degree drops to 2.
pub fn independence_number(g: &Graph, limits: &OracleLimits) -> Result<Searched<u32>, OracleError> {
    let n = g.vertex_count();
    if n > limits.independence_cap || n > 64 {
        return Err(OracleError::TooLarge { n, cap: limits.independence_cap.min(64) });
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| {
            g.neighbours(v as u32)
                .iter()
                .fold(0u64, |m, &w| m | 1 << w)
        })
        .collect();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut t = Ticker::new(limits.node_budget);
    let value = alpha_rec(&adj, full, &mut t)?;
    Ok(Searched { value, nodes: t.nodes })
}

fn alpha_rec(adj: &[u64], mask: u64, t: &mut Ticker) -> Result<u32, OracleError> {
    t.tick()?;
    if mask == 0 {
        return Ok(0);
    }
    // pick a max-degree vertex; if all degrees <= 2 the rest is paths and
    // cycles with a closed form
    let mut best_v = u32::MAX;
    let mut best_d = 0u32;
    let mut m = mask;
    while m != 0 {
        let v = m.trailing_zeros();
        m &= m - 1;
        let d = (adj[v as usize] & mask).count_ones();
        if d > best_d || best_v == u32::MAX {
            best_d = d;
            best_v = v;
        }
    }
    if best_d <= 2 {
        return Ok(alpha_paths_cycles(adj, mask));
    }
    let v = best_v;
    let without = alpha_rec(adj, mask & !(1 << v), t)?;
    let with = 1 + alpha_rec(adj, mask & !(adj[v as usize] | (1 << v)), t)?;
    Ok(without.max(with))
}

// alpha of a graph with max degree <= 2: per component, ceil(k/2) for a
// path on k vertices, floor(k/2) for a cycle
fn alpha_paths_cycles(adj: &[u64], mask: u64) -> u32 {
    let mut seen = 0u64;
    let mut total = 0u32;
    let mut m = mask;
    while m != 0 {
        let start = m.trailing_zeros();
        m &= m - 1;
        if seen & (1 << start) != 0 {
            continue;
        }
        let mut comp = 0u64;
        let mut stack = vec![start];
        comp |= 1 << start;
        let mut edge_endpoints = 0u32;
        while let Some(u) = stack.pop() {
            let nbrs = adj[u as usize] & mask;
            edge_endpoints += nbrs.count_ones();
            let mut nm = nbrs & !comp;
            while nm != 0 {
                let w = nm.trailing_zeros();
                nm &= nm - 1;
                comp |= 1 << w;
                stack.push(w);
            }
        }
        seen |= comp;
        let k = comp.count_ones();
        let edges = edge_endpoints / 2;
        total += if edges == k { k / 2 } else { k.div_ceil(2) };
    }
    total
}

// ---------------------------------------------------------------------------
// fragility by brute force
// ---------------------------------------------------------------------------

/// True iff no vertex subset of size >= 4 induces a 3-connected graph.
/// Exhaustive over subsets; induced subsets suffice because adding edges
/// never lowers vertex connectivity.
pub fn fragile_bruteforce(g: &Graph, limits: &OracleLimits) -> Result<Searched<bool>, OracleError> {
    match fragile_bruteforce_witness(g, limits)? {
        Searched { value: None, nodes } => Ok(Searched { value: true, nodes }),
        Searched { value: Some(_), nodes } => Ok(Searched { value: false, nodes }),
    }
}

/// As [`fragile_bruteforce`], but returns the lexicographically first
/// 3-connected induced subset when one exists.
pub fn fragile_bruteforce_witness(
    g: &Graph,
    limits: &OracleLimits,
) -> Result<Searched<Option<Vec<u32>>>, OracleError> {
    let n = g.vertex_count();
    if n > limits.fragile_cap || n > 63 {
        return Err(OracleError::TooLarge { n, cap: limits.fragile_cap.min(63) });
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbours(v as u32).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();
    let mut t = Ticker::new(limits.node_budget);
    for mask in 0u64..(1 << n) {
        if (mask.count_ones() as usize) < 4 {
            continue;
        }
        t.tick()?;
        // a 3-connected graph has min degree >= 3
        let mut mm = mask;
        let mut ok = true;
        while mm != 0 {
            let v = mm.trailing_zeros();
            mm &= mm - 1;
            if (adj[v as usize] & mask).count_ones() < 3 {
                ok = false;
                break;
            }
        }
        if ok && mask_three_connected(&adj, mask) {
            let mut verts = Vec::new();
            let mut mm = mask;
            while mm != 0 {
                verts.push(mm.trailing_zeros());
                mm &= mm - 1;
            }
            return Ok(Searched { value: Some(verts), nodes: t.nodes });
        }
    }
    Ok(Searched { value: None, nodes: t.nodes })
}

fn mask_connected(adj: &[u64], mask: u64) -> bool {
    if mask == 0 {
        return true;
    }
    let start = mask.trailing_zeros();
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros();
            f &= f - 1;
            next |= adj[v as usize] & mask & !seen;
        }
        seen |= next;
        frontier = next;
    }
    seen == mask
}

// straight from the definition: >= 4 vertices and no cutset of size <= 2
fn mask_three_connected(adj: &[u64], mask: u64) -> bool {
    if (mask.count_ones() as usize) < 4 {
        return false;
    }
    if !mask_connected(adj, mask) {
        return false;
    }
    let mut verts = Vec::new();
    let mut m = mask;
    while m != 0 {
        verts.push(m.trailing_zeros());
        m &= m - 1;
    }
    for (i, &u) in verts.iter().enumerate() {
        if !mask_connected(adj, mask & !(1 << u)) {
            return false;
        }
        for &v in &verts[i + 1..] {
            if !mask_connected(adj, mask & !(1 << u) & !(1 << v)) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// enumeration of all proper colourings
// ---------------------------------------------------------------------------

/// Streams proper `k`-colourings of `g` in lexicographic order of the
/// assignment vector.
///
/// With `canonical = false` (the default entry point) every proper
/// colouring appears exactly once, which is what gadget verification
/// needs. With `canonical = true` colour classes are introduced in
/// increasing order, cutting the stream by the colour symmetry.
pub struct AllColourings<'g> {
    g: &'g Graph,
    k: u32,
    canonical: bool,
    assign: Vec<u32>,
    pos: usize,
    state: EnumState,
    ticker: Ticker,
}

enum EnumState {
    Fresh,
    Running,
    Done,
}

pub fn all_k_colourings<'g>(
    g: &'g Graph,
    k: u32,
    limits: &OracleLimits,
) -> Result<AllColourings<'g>, OracleError> {
    enumerate_colourings(g, k, false, limits)
}

pub fn enumerate_colourings<'g>(
    g: &'g Graph,
    k: u32,
    canonical: bool,
    limits: &OracleLimits,
) -> Result<AllColourings<'g>, OracleError> {
    let n = g.vertex_count();
    if n > limits.enumeration_cap {
        return Err(OracleError::TooLarge { n, cap: limits.enumeration_cap });
    }
    Ok(AllColourings {
        g,
        k,
        canonical,
        assign: vec![0; n],
        pos: 0,
        state: EnumState::Fresh,
        ticker: Ticker::new(limits.node_budget),
    })
}

impl AllColourings<'_> {
    pub fn nodes_explored(&self) -> u64 {
        self.ticker.nodes
    }

    fn limit_at(&self, pos: usize) -> u32 {
        if self.canonical {
            let max_used = self.assign[..pos].iter().copied().max().unwrap_or(0);
            self.k.min(max_used + 1)
        } else {
            self.k
        }
    }

    fn conflict(&self, pos: usize, col: u32) -> bool {
        self.g.neighbours(pos as u32).iter().any(|&w| (w as usize) < pos && self.assign[w as usize] == col)
    }
}

impl Iterator for AllColourings<'_> {
    type Item = Result<Colouring, OracleError>;

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.assign.len();
        match self.state {
            EnumState::Done => return None,
            EnumState::Fresh => {
                self.state = EnumState::Running;
                if n == 0 {
                    self.state = EnumState::Done;
                    return Some(Ok(Colouring::new(self.k, Vec::new())));
                }
            }
            EnumState::Running => {
                // resume: backtrack off the previously emitted solution
                self.pos = n - 1;
            }
        }
        loop {
            if self.pos == n {
                return Some(Ok(Colouring::new(self.k, self.assign.clone())));
            }
            let mut col = self.assign[self.pos] + 1;
            let mut advanced = false;
            while col <= self.limit_at(self.pos) {
                if let Err(e) = self.ticker.tick() {
                    self.state = EnumState::Done;
                    return Some(Err(e));
                }
                if !self.conflict(self.pos, col) {
                    self.assign[self.pos] = col;
                    self.pos += 1;
                    advanced = true;
                    break;
                }
                col += 1;
            }
            if advanced {
                continue;
            }
            // exhausted this position: reset and backtrack
            self.assign[self.pos] = 0;
            if self.pos == 0 {
                self.state = EnumState::Done;
                return None;
            }
            self.pos -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_proper;

    fn k(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                e.push((u, v));
            }
        }
        Graph::from_edges(n, &e).unwrap()
    }

    fn c(n: usize) -> Graph {
        let e: Vec<_> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    fn petersen() -> Graph {
        Graph::from_edges(
            10,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
                (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
            ],
        )
        .unwrap()
    }

    fn lim() -> OracleLimits {
        OracleLimits::default()
    }

    #[test]
    fn chromatic_basics() {
        assert_eq!(chromatic_number(&k(4), &lim()).unwrap().value, 4);
        assert_eq!(chromatic_number(&c(5), &lim()).unwrap().value, 3);
        assert_eq!(chromatic_number(&petersen(), &lim()).unwrap().value, 3);
        assert_eq!(chromatic_number(&Graph::empty(0), &lim()).unwrap().value, 0);
        assert_eq!(chromatic_number(&Graph::empty(3), &lim()).unwrap().value, 1);
    }

    #[test]
    fn exact_colour_constraints() {
        // C5 with two nonadjacent vertices forced equal, 4 colours
        let r = exact_colour(&c(5), 4, &[ColourConstraint::Equal(0, 2)], &lim()).unwrap();
        let col = r.value.expect("satisfiable");
        assert!(is_proper(&c(5), &col).unwrap());
        assert_eq!(col.colour(0), col.colour(2));

        // adjacent vertices can never be equal
        let r = exact_colour(&k(3), 3, &[ColourConstraint::Equal(0, 1)], &lim()).unwrap();
        assert!(r.value.is_none());

        // K4 is not 3-colourable
        let r = exact_colour(&k(4), 3, &[], &lim()).unwrap();
        assert!(r.value.is_none());
    }

    #[test]
    fn exact_colour_fixed() {
        let r = exact_colour(
            &c(5),
            3,
            &[ColourConstraint::Fixed(0, 2), ColourConstraint::NotEqual(1, 3)],
            &lim(),
        )
        .unwrap();
        let col = r.value.expect("satisfiable");
        assert_eq!(col.colour(0), 2);
        assert_ne!(col.colour(1), col.colour(3));
        assert!(is_proper(&c(5), &col).unwrap());
    }

    #[test]
    fn chromatic_vs_exact_boundary() {
        for g in [k(4), c(5), petersen(), c(4)] {
            let chi = chromatic_number(&g, &lim()).unwrap().value;
            assert!(exact_colour(&g, chi, &[], &lim()).unwrap().value.is_some());
            if chi > 1 {
                assert!(exact_colour(&g, chi - 1, &[], &lim()).unwrap().value.is_none());
            }
        }
    }

    #[test]
    fn independence_basics() {
        assert_eq!(independence_number(&k(4), &lim()).unwrap().value, 1);
        assert_eq!(independence_number(&c(5), &lim()).unwrap().value, 2);
        assert_eq!(independence_number(&petersen(), &lim()).unwrap().value, 4);
        // C9 is the double subdivision of K3: alpha = 1 + 3
        assert_eq!(independence_number(&c(9), &lim()).unwrap().value, 4);
    }

    #[test]
    fn fragility_small_cases() {
        assert!(!fragile_bruteforce(&k(4), &lim()).unwrap().value);
        // a tree
        let tree = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 3), (1, 4)]).unwrap();
        assert!(fragile_bruteforce(&tree, &lim()).unwrap().value);
        // K4 minus an edge: the single 4-set is not 3-connected
        let k4e = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(fragile_bruteforce(&k4e, &lim()).unwrap().value);
        assert!(!fragile_bruteforce(&petersen(), &lim()).unwrap().value);
    }

    #[test]
    fn enumeration_counts() {
        let cols: Vec<_> = all_k_colourings(&k(3), 3, &lim())
            .unwrap()
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(cols.len(), 6);
        let cols: Vec<_> = all_k_colourings(&k(2), 2, &lim())
            .unwrap()
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(cols.len(), 2);
        let cols: Vec<_> = all_k_colourings(&c(4), 2, &lim())
            .unwrap()
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(cols.len(), 2);
    }

    #[test]
    fn enumeration_is_exact_and_unique() {
        let g = c(5);
        let cols: Vec<_> = all_k_colourings(&g, 3, &lim())
            .unwrap()
            .collect::<Result<_, _>>()
            .unwrap();
        for col in &cols {
            assert!(is_proper(&g, col).unwrap());
        }
        let mut keys: Vec<_> = cols.iter().map(|c| c.assign.clone()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), cols.len());
        // C5 has 3^5 total assignments; proper 3-colourings of C_n number
        // (k-1)^n + (-1)^n (k-1) = 2^5 - 2 = 30
        assert_eq!(cols.len(), 30);
    }

    #[test]
    fn budget_is_enforced() {
        let tiny = OracleLimits { node_budget: 5, ..Default::default() };
        assert!(matches!(
            chromatic_number(&petersen(), &tiny),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn chromatic_respects_degeneracy_bound() {
        // chi <= degeneracy + 1; spot checks
        for (g, degen) in [(k(4), 3), (c(5), 2), (petersen(), 3)] {
            let chi = chromatic_number(&g, &lim()).unwrap().value;
            assert!(chi <= degen + 1);
        }
    }
}
