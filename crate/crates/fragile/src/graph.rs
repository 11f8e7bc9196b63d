//! Simple undirected graphs with dense vertex ids, plus colourings.
//!
//! Graphs are immutable after construction: all mutation happens in
//! [`Graph::from_edges`] (or the generators), after which they are safe to
//! share across threads for concurrent reads.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    OutOfRange { vertex: u32, n: usize },
    #[error("colouring is partial: expected {expected} assignments, got {got}")]
    PartialColouring { expected: usize, got: usize },
    #[error("colour {colour} outside palette 1..={m}")]
    BadColour { colour: u32, m: u32 },
}

/// A finite simple undirected graph on vertices `0..n`.
///
/// Neighbour lists are kept sorted, so `has_edge` is a binary search and
/// iteration order is deterministic everywhere.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges are collapsed,
    /// self-loops are rejected, out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if w as usize >= n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Graph {
        Graph { adj: vec![Vec::new(); n] }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj
            .get(u as usize)
            .is_some_and(|l| l.binary_search(&v).is_ok())
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbours(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        0..self.adj.len() as u32
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, l)| {
            let u = u as u32;
            l.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    /// Induced subgraph on `verts`. Returns the subgraph together with the
    /// id map `new -> old`; vertices are renumbered in ascending old-id
    /// order so extraction is deterministic.
    ///
    /// Colourings of the subgraph pull back to the original ids through the
    /// returned map.
    pub fn induced_subgraph(&self, verts: &[u32]) -> Result<(Graph, Vec<u32>), GraphError> {
        let n = self.vertex_count();
        let mut map: Vec<u32> = verts.to_vec();
        map.sort_unstable();
        map.dedup();
        if let Some(&v) = map.iter().find(|&&v| v as usize >= n) {
            return Err(GraphError::OutOfRange { vertex: v, n });
        }
        let mut adj = vec![Vec::new(); map.len()];
        for (new_u, &old_u) in map.iter().enumerate() {
            for &old_v in &self.adj[old_u as usize] {
                if let Ok(new_v) = map.binary_search(&old_v) {
                    adj[new_u].push(new_v as u32);
                }
            }
        }
        // neighbour lists inherit sortedness from `map` being sorted
        Ok((Graph { adj }, map))
    }

    /// Connectivity of the whole vertex set (the null graph counts as
    /// connected, a single vertex too).
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in self.neighbours(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    /// Connected components as sorted vertex lists, ordered by smallest
    /// member.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n as u32 {
            if seen[s as usize] {
                continue;
            }
            let mut comp = vec![s];
            seen[s as usize] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in self.neighbours(u) {
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        comp.push(v);
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.iter().map(|l| l.len()).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.adj.iter().map(|l| l.len()).max()
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={}, edges=[", self.vertex_count(), self.edge_count())?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

/// A total colouring `vertex -> {1..m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colouring {
    pub m: u32,
    pub assign: Vec<u32>,
}

impl Colouring {
    pub fn new(m: u32, assign: Vec<u32>) -> Colouring {
        Colouring { m, assign }
    }

    pub fn colour(&self, v: u32) -> u32 {
        self.assign[v as usize]
    }

    /// Number of distinct colours actually used.
    pub fn colours_used(&self) -> usize {
        let mut seen = vec![false; self.m as usize + 1];
        let mut k = 0;
        for &c in &self.assign {
            if !seen[c as usize] {
                seen[c as usize] = true;
                k += 1;
            }
        }
        k
    }
}

/// True iff `c` is total on `g`, within palette, and no edge is
/// monochromatic.
pub fn is_proper(g: &Graph, c: &Colouring) -> Result<bool, GraphError> {
    if c.assign.len() != g.vertex_count() {
        return Err(GraphError::PartialColouring {
            expected: g.vertex_count(),
            got: c.assign.len(),
        });
    }
    for &col in &c.assign {
        if col == 0 || col > c.m {
            return Err(GraphError::BadColour { colour: col, m: c.m });
        }
    }
    Ok(g.edges().all(|(u, v)| c.assign[u as usize] != c.assign[v as usize]))
}

/// An ordered pair or triple of vertices, as used by the precolouring
/// conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexTuple {
    Pair(u32, u32),
    Triple(u32, u32, u32),
}

impl VertexTuple {
    pub fn vertices(&self) -> Vec<u32> {
        match *self {
            VertexTuple::Pair(x, y) => vec![x, y],
            VertexTuple::Triple(x, y, z) => vec![x, y, z],
        }
    }

    pub fn distinct(&self) -> bool {
        match *self {
            VertexTuple::Pair(x, y) => x != y,
            VertexTuple::Triple(x, y, z) => x != y && x != z && y != z,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    pub(crate) fn c5() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn build_k4() {
        let g = k4();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
        assert!(g.vertices().all(|v| g.degree(v) == 3));
    }

    #[test]
    fn build_c5() {
        let g = c5();
        assert_eq!(g.edge_count(), 5);
        assert!(g.vertices().all(|v| g.degree(v) == 2));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn self_loop_rejected() {
        assert_eq!(
            Graph::from_edges(3, &[(1, 1)]),
            Err(GraphError::SelfLoop(1))
        );
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(
            Graph::from_edges(2, &[(0, 5)]),
            Err(GraphError::OutOfRange { vertex: 5, .. })
        ));
    }

    #[test]
    fn handshake() {
        let g = k4();
        let sum: usize = g.vertices().map(|v| g.degree(v)).sum();
        assert_eq!(sum, 2 * g.edge_count());
    }

    #[test]
    fn induced_k4_triangle() {
        let (h, map) = k4().induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 3);
        assert_eq!(map, vec![0, 1, 2]);
    }

    #[test]
    fn induced_c5_path() {
        let (h, _) = c5().induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(h.edge_count(), 2);
    }

    #[test]
    fn induced_empty() {
        let (h, map) = c5().induced_subgraph(&[]).unwrap();
        assert_eq!(h.vertex_count(), 0);
        assert!(map.is_empty());
    }

    #[test]
    fn induced_never_gains_edges() {
        let g = c5();
        for s in [&[0u32, 2, 4][..], &[1, 3], &[0, 1, 2, 3, 4]] {
            let (h, _) = g.induced_subgraph(s).unwrap();
            assert!(h.edge_count() <= g.edge_count());
        }
    }

    #[test]
    fn proper_colourings() {
        let t = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(is_proper(&t, &Colouring::new(3, vec![1, 2, 3])).unwrap());
        assert!(!is_proper(&t, &Colouring::new(3, vec![1, 1, 2])).unwrap());
        let null = Graph::empty(0);
        assert!(is_proper(&null, &Colouring::new(4, vec![])).unwrap());
    }

    #[test]
    fn proper_rejects_partial() {
        let g = c5();
        assert!(matches!(
            is_proper(&g, &Colouring::new(3, vec![1, 2])),
            Err(GraphError::PartialColouring { .. })
        ));
    }

    #[test]
    fn proper_monotone_under_subgraphs() {
        let g = c5();
        let c = Colouring::new(3, vec![1, 2, 1, 2, 3]);
        assert!(is_proper(&g, &c).unwrap());
        let verts = [0u32, 1, 3, 4];
        let (h, map) = g.induced_subgraph(&verts).unwrap();
        let restricted = Colouring::new(3, map.iter().map(|&v| c.colour(v)).collect());
        assert!(is_proper(&h, &restricted).unwrap());
    }
}
