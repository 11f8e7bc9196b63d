//! Small cutsets, separations, the decomposition tree, fragility, and
//! independent cutsets in triangle-free fragile graphs.
//!
//! Strategy for cutset search: connectivity first (size 0), then
//! articulation points (size 1), then articulation points of `G - u` for
//! each `u` in increasing order (size 2). Deterministic tie-breaking
//! throughout: the lexicographically smallest cutset wins and side one is
//! the cut plus the component holding the smallest remaining vertex id, so
//! decompositions are reproducible byte for byte.

use crate::graph::Graph;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("graph too small for cutset search: {0} vertices")]
    TooSmall(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// A separation of a graph: a cutset of size at most 2 and the two sides.
/// Both sides include the cut; no edge joins `side1 - cut` to
/// `side2 - cut`; both differences are nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub cut: Vec<u32>,
    pub side1: Vec<u32>,
    pub side2: Vec<u32>,
}

/// Articulation points (sorted ascending), optionally treating one vertex
/// as deleted. Iterative lowpoint computation, so chains of any depth are
/// fine.
fn articulation_points(g: &Graph, skip: Option<u32>) -> Vec<u32> {
    let n = g.vertex_count();
    let mut disc = vec![0u32; n];
    let mut low = vec![0u32; n];
    let mut is_art = vec![false; n];
    let mut timer = 1u32;

    let skipped = |v: u32| Some(v) == skip;
    // frame: (vertex, parent or u32::MAX, next neighbour index)
    let mut stack: Vec<(u32, u32, usize)> = Vec::new();

    for root in 0..n as u32 {
        if skipped(root) || disc[root as usize] != 0 {
            continue;
        }
        let mut root_children = 0u32;
        disc[root as usize] = timer;
        low[root as usize] = timer;
        timer += 1;
        stack.push((root, u32::MAX, 0));
        while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
            let nbrs = g.neighbours(v);
            if *idx < nbrs.len() {
                let w = nbrs[*idx];
                *idx += 1;
                if skipped(w) {
                    continue;
                }
                if disc[w as usize] == 0 {
                    disc[w as usize] = timer;
                    low[w as usize] = timer;
                    timer += 1;
                    stack.push((w, v, 0));
                } else if w != parent {
                    low[v as usize] = low[v as usize].min(disc[w as usize]);
                }
            } else {
                stack.pop();
                if parent != u32::MAX {
                    low[parent as usize] = low[parent as usize].min(low[v as usize]);
                    if parent == root {
                        root_children += 1;
                    } else if low[v as usize] >= disc[parent as usize] {
                        is_art[parent as usize] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_art[root as usize] = true;
        }
    }
    (0..n as u32).filter(|&v| is_art[v as usize]).collect()
}

/// Finds a minimum-size separation with |cut| <= 2, or `None` when the
/// graph is 3-connected (or has <= 3 vertices and no such separation).
///
/// Among minimum cutsets the lexicographically smallest vertex tuple is
/// chosen.
pub fn find_small_cutset(g: &Graph) -> Result<Option<Separation>, DecompError> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(DecompError::TooSmall(n));
    }
    if !g.is_connected() {
        return Ok(Some(separation_from_cut(g, &[])));
    }
    let arts = articulation_points(g, None);
    if let Some(&v) = arts.first() {
        return Ok(Some(separation_from_cut(g, &[v])));
    }
    // G is 2-connected, so G - u stays connected and {u, v} cuts G exactly
    // when v is an articulation point of G - u. Scanning u in increasing
    // order sees every pair containing u, so the first hit is the
    // lexicographically smallest cut pair.
    for u in 0..n as u32 {
        let arts = articulation_points(g, Some(u));
        if let Some(&v) = arts.first() {
            return Ok(Some(separation_from_cut(g, &[u, v])));
        }
    }
    Ok(None)
}

// side1 = cut + component of the smallest vertex outside the cut,
// side2 = cut + everything else
fn separation_from_cut(g: &Graph, cut: &[u32]) -> Separation {
    let n = g.vertex_count();
    let in_cut = |v: u32| cut.contains(&v);
    let first = (0..n as u32).find(|&v| !in_cut(v)).expect("cut is not all of V");
    let mut comp = vec![false; n];
    comp[first as usize] = true;
    let mut stack = vec![first];
    while let Some(u) = stack.pop() {
        for &w in g.neighbours(u) {
            if !in_cut(w) && !comp[w as usize] {
                comp[w as usize] = true;
                stack.push(w);
            }
        }
    }
    let mut side1: Vec<u32> = cut.to_vec();
    let mut side2: Vec<u32> = cut.to_vec();
    for v in 0..n as u32 {
        if in_cut(v) {
            continue;
        }
        if comp[v as usize] {
            side1.push(v);
        } else {
            side2.push(v);
        }
    }
    side1.sort_unstable();
    side2.sort_unstable();
    Separation { cut: cut.to_vec(), side1, side2 }
}

/// True iff the graph has at least 4 vertices and no cutset of size <= 2.
pub fn is_three_connected(g: &Graph) -> bool {
    g.vertex_count() >= 4 && matches!(find_small_cutset(g), Ok(None))
}

/// One node of a decomposition tree. `graph` uses local ids `0..k`;
/// `to_root[local]` recovers the vertex id in the root graph.
#[derive(Clone, Debug)]
pub struct DecompNode {
    pub graph: Graph,
    pub to_root: Vec<u32>,
    pub kind: NodeKind,
}

#[derive(Clone, Debug)]
pub enum NodeKind {
    Leaf { three_connected: bool },
    Internal {
        /// Separation in this node's local ids.
        sep: Separation,
        children: [usize; 2],
    },
}

/// Recursive decomposition of a graph along small separations. Every leaf
/// either has at most 3 vertices or is 3-connected. Children store id
/// maps so vertex identity is traceable to root ids throughout.
#[derive(Clone, Debug)]
pub struct DecompTree {
    pub nodes: Vec<DecompNode>,
}

pub const ROOT: usize = 0;

impl DecompTree {
    pub fn root(&self) -> &DecompNode {
        &self.nodes[ROOT]
    }

    pub fn leaves(&self) -> impl Iterator<Item = (usize, &DecompNode)> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n.kind, NodeKind::Leaf { .. }))
    }

    pub fn depth(&self) -> usize {
        // longest root-to-leaf path, computed iteratively
        let mut depth = vec![0usize; self.nodes.len()];
        let mut max = 0;
        for i in 0..self.nodes.len() {
            if let NodeKind::Internal { children, .. } = self.nodes[i].kind {
                for c in children {
                    depth[c] = depth[i] + 1;
                    max = max.max(depth[c]);
                }
            }
        }
        max
    }

    /// Line-oriented text form, one node per line, root last.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for id in (0..self.nodes.len()).rev() {
            let node = &self.nodes[id];
            match &node.kind {
                NodeKind::Leaf { .. } => {
                    out.push_str(&format!("node {id} leaf"));
                    for &v in &node.to_root {
                        out.push_str(&format!(" {v}"));
                    }
                }
                NodeKind::Internal { sep, children } => {
                    out.push_str(&format!("node {id} cut"));
                    for &s in &sep.cut {
                        out.push_str(&format!(" {}", node.to_root[s as usize]));
                    }
                    out.push_str(&format!(" children {} {}", children[0], children[1]));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Builds the full decomposition tree with an explicit work stack; tree
/// depth is bounded only by the graph size, never by call depth.
pub fn decompose(g: &Graph) -> DecompTree {
    let root = DecompNode {
        graph: g.clone(),
        to_root: (0..g.vertex_count() as u32).collect(),
        kind: NodeKind::Leaf { three_connected: false },
    };
    let mut nodes = vec![root];
    let mut agenda = vec![ROOT];
    while let Some(i) = agenda.pop() {
        let n = nodes[i].graph.vertex_count();
        if n <= 3 {
            continue; // already a (small) leaf
        }
        let sep = find_small_cutset(&nodes[i].graph).expect("n >= 2");
        match sep {
            None => {
                nodes[i].kind = NodeKind::Leaf { three_connected: true };
            }
            Some(sep) => {
                let mut children = [0usize; 2];
                for (slot, side) in [&sep.side1, &sep.side2].into_iter().enumerate() {
                    let (sub, map) = nodes[i]
                        .graph
                        .induced_subgraph(side)
                        .expect("sides are in range");
                    let to_root = map
                        .iter()
                        .map(|&l| nodes[i].to_root[l as usize])
                        .collect();
                    children[slot] = nodes.len();
                    nodes.push(DecompNode {
                        graph: sub,
                        to_root,
                        kind: NodeKind::Leaf { three_connected: false },
                    });
                }
                agenda.push(children[1]);
                agenda.push(children[0]);
                nodes[i].kind = NodeKind::Internal { sep, children };
            }
        }
    }
    DecompTree { nodes }
}

/// Fragility verdict with a witness and the decomposition behind it.
///
/// Soundness: a 3-connected subgraph cannot cross a separation of order
/// at most 2 (the crossing would hand it a cutset of size <= 2), so it
/// lives wholly inside one side and eventually inside a leaf.
#[derive(Clone, Debug)]
pub struct FragilityReport {
    pub fragile: bool,
    /// Root-id vertex set of a 3-connected leaf, when not fragile.
    pub witness: Option<Vec<u32>>,
    pub tree: DecompTree,
}

pub fn is_fragile(g: &Graph) -> FragilityReport {
    let tree = decompose(g);
    let witness = tree
        .nodes
        .iter()
        .find(|n| matches!(n.kind, NodeKind::Leaf { three_connected: true }))
        .map(|n| {
            let mut w = n.to_root.clone();
            w.sort_unstable();
            w
        });
    FragilityReport { fragile: witness.is_none(), witness, tree }
}

/// An independent cutset of size <= 2 in a triangle-free fragile graph,
/// found by the inductive argument: take a minimum cutset; if it is an
/// adjacent pair {u, v}, descend into the side spanned by one component,
/// where girth 4 guarantees progress.
///
/// Returns the cutset (root ids) and the vertex set of every subgraph the
/// recursion visited, outermost first.
pub fn find_independent_cutset(g: &Graph) -> Result<(Vec<u32>, Vec<Vec<u32>>), DecompError> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(DecompError::PreconditionViolated(format!(
            "need at least 3 vertices, got {n}"
        )));
    }
    if has_triangle(g) {
        return Err(DecompError::PreconditionViolated(
            "graph has a triangle (girth < 4)".into(),
        ));
    }
    if !is_fragile(g).fragile {
        return Err(DecompError::PreconditionViolated("graph is not fragile".into()));
    }

    let mut current: Vec<u32> = (0..n as u32).collect();
    let mut steps = Vec::new();
    loop {
        steps.push(current.clone());
        let (sub, map) = g.induced_subgraph(&current).expect("in range");
        let sep = find_small_cutset(&sub)
            .expect("recursion keeps >= 3 vertices")
            .expect("fragile graphs this size always separate");
        let cut_root: Vec<u32> = sep.cut.iter().map(|&l| map[l as usize]).collect();
        if sep.cut.len() < 2 || !sub.has_edge(sep.cut[0], sep.cut[1]) {
            return Ok((cut_root, steps));
        }
        // adjacent pair {u, v}: take the component holding the smallest
        // remaining vertex
        let (u, v) = (sep.cut[0], sep.cut[1]);
        let comp: Vec<u32> = sep
            .side1
            .iter()
            .copied()
            .filter(|&w| w != u && w != v)
            .collect();
        if comp.len() == 1 {
            // girth 4: the lone vertex sees at most one of u, v
            let w = comp[0];
            let anchor = if sub.has_edge(w, u) { u } else { v };
            return Ok((vec![map[anchor as usize]], steps));
        }
        let mut next: Vec<u32> = comp.iter().map(|&l| map[l as usize]).collect();
        next.push(map[u as usize]);
        next.push(map[v as usize]);
        next.sort_unstable();
        current = next;
    }
}

pub fn has_triangle(g: &Graph) -> bool {
    g.edges().any(|(u, v)| {
        let (a, b) = (g.neighbours(u), g.neighbours(v));
        // sorted lists: linear intersection test
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    })
}

/// Checks the separation invariants against its graph: sides cover V,
/// meet exactly in the cut, both strictly exceed it, and no edge crosses.
pub fn separation_is_valid(g: &Graph, sep: &Separation) -> bool {
    let n = g.vertex_count();
    let mut side = vec![0u8; n]; // bit 1: side1, bit 2: side2
    for &v in &sep.side1 {
        side[v as usize] |= 1;
    }
    for &v in &sep.side2 {
        side[v as usize] |= 2;
    }
    let cover = side.iter().all(|&s| s != 0);
    let meet_is_cut = (0..n as u32)
        .filter(|&v| side[v as usize] == 3)
        .eq(sep.cut.iter().copied());
    let proper = sep.side1.len() > sep.cut.len() && sep.side2.len() > sep.cut.len();
    let no_crossing = g
        .edges()
        .all(|(u, v)| !(side[u as usize] == 1 && side[v as usize] == 2 || side[u as usize] == 2 && side[v as usize] == 1));
    cover && meet_is_cut && proper && no_crossing && sep.cut.len() <= 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{fragile_bruteforce, OracleLimits};

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn c5() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
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

    #[test]
    fn disconnected_gives_empty_cut() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let sep = find_small_cutset(&g).unwrap().unwrap();
        assert!(sep.cut.is_empty());
        assert_eq!(sep.side1, vec![0, 1]);
        assert_eq!(sep.side2, vec![2, 3]);
        assert!(separation_is_valid(&g, &sep));
    }

    #[test]
    fn shared_vertex_is_articulation() {
        // two triangles sharing vertex 2
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        let sep = find_small_cutset(&g).unwrap().unwrap();
        assert_eq!(sep.cut, vec![2]);
        assert!(separation_is_valid(&g, &sep));
    }

    #[test]
    fn k4_has_no_small_cutset() {
        assert!(find_small_cutset(&k4()).unwrap().is_none());
        assert!(is_three_connected(&k4()));
    }

    #[test]
    fn c5_cut_is_lex_smallest_nonadjacent_pair() {
        let g = c5();
        let sep = find_small_cutset(&g).unwrap().unwrap();
        assert_eq!(sep.cut, vec![0, 2]);
        assert!(!g.has_edge(0, 2));
        assert!(separation_is_valid(&g, &sep));
        // brute force: every 2-cut of C5 is a nonadjacent pair
        for u in 0..5u32 {
            for v in u + 1..5 {
                let rest: Vec<u32> = (0..5).filter(|&w| w != u && w != v).collect();
                let (sub, _) = g.induced_subgraph(&rest).unwrap();
                if !sub.is_connected() {
                    assert!(!g.has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn too_small_rejected() {
        assert_eq!(
            find_small_cutset(&Graph::empty(1)),
            Err(DecompError::TooSmall(1))
        );
    }

    #[test]
    fn k3_and_k2_have_no_separation() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(find_small_cutset(&k3).unwrap().is_none());
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(find_small_cutset(&k2).unwrap().is_none());
        // but neither is 3-connected (fewer than 4 vertices)
        assert!(!is_three_connected(&k3));
    }

    #[test]
    fn petersen_three_connected() {
        assert!(is_three_connected(&petersen()));
        assert!(petersen().vertices().all(|v| petersen().degree(v) >= 3));
    }

    #[test]
    fn decompose_k4_single_leaf() {
        let t = decompose(&k4());
        assert_eq!(t.nodes.len(), 1);
        assert!(matches!(t.root().kind, NodeKind::Leaf { three_connected: true }));
    }

    #[test]
    fn decompose_k4_minus_edge() {
        let g = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let t = decompose(&g);
        let NodeKind::Internal { ref sep, .. } = t.root().kind else {
            panic!("expected internal root");
        };
        assert_eq!(sep.cut, vec![2, 3]);
        assert!(t
            .leaves()
            .all(|(_, n)| n.graph.vertex_count() <= 3));
        assert!(is_fragile(&g).fragile);
        assert!(fragile_bruteforce(&g, &OracleLimits::default()).unwrap().value);
    }

    #[test]
    fn decompose_c5_all_small_leaves() {
        let t = decompose(&c5());
        assert!(t.depth() >= 1);
        assert!(t.leaves().all(|(_, n)| n.graph.vertex_count() <= 3));
    }

    #[test]
    fn every_internal_separation_is_valid() {
        for g in [c5(), petersen(), Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap()] {
            let t = decompose(&g);
            for node in &t.nodes {
                if let NodeKind::Internal { sep, .. } = &node.kind {
                    assert!(separation_is_valid(&node.graph, sep));
                }
            }
        }
    }

    #[test]
    fn fragility_reports() {
        let r = is_fragile(&k4());
        assert!(!r.fragile);
        assert_eq!(r.witness, Some(vec![0, 1, 2, 3]));
        assert!(is_fragile(&c5()).fragile);
    }

    #[test]
    fn fragility_matches_bruteforce_on_samples() {
        let lim = OracleLimits::default();
        let samples = [
            k4(),
            c5(),
            petersen(),
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap(),
            Graph::from_edges(7, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 3)]).unwrap(),
        ];
        for g in samples {
            assert_eq!(
                is_fragile(&g).fragile,
                fragile_bruteforce(&g, &lim).unwrap().value,
                "{g:?}"
            );
        }
    }

    #[test]
    fn independent_cutset_c4() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let (cut, steps) = find_independent_cutset(&c4).unwrap();
        assert_eq!(cut.len(), 2);
        assert!(!c4.has_edge(cut[0], cut[1]));
        assert_eq!(steps.len(), 1);
    }

    #[test]
    fn independent_cutset_path() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let (cut, _) = find_independent_cutset(&p3).unwrap();
        assert_eq!(cut, vec![1]);
    }

    #[test]
    fn independent_cutset_preconditions() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(matches!(
            find_independent_cutset(&k3),
            Err(DecompError::PreconditionViolated(_))
        ));
        assert!(matches!(
            find_independent_cutset(&Graph::empty(2)),
            Err(DecompError::PreconditionViolated(_))
        ));
        assert!(matches!(
            find_independent_cutset(&petersen()),
            Err(DecompError::PreconditionViolated(_)) // not fragile
        ));
    }

    #[test]
    fn tree_text_root_last() {
        let t = decompose(&c5());
        let text = t.to_text();
        let last = text.lines().last().unwrap();
        assert!(last.starts_with("node 0 "));
    }

    #[test]
    fn three_connected_implies_min_degree_three() {
        for g in [k4(), petersen()] {
            if is_three_connected(&g) {
                assert!(g.min_degree().unwrap() >= 3);
            }
        }
    }
}
