// Development-time search for the not-equal gadget: a triangle-free,
// 2-degenerate, 3-chromatic graph with two nonadjacent terminals a, b that
// receive different colours in every proper 3-colouring.
//
// Search space: forcing DAGs under the assumption c(a) = c(b) = 1. With
// gamma := c(x) for a root vertex x adjacent to b and delta the other
// non-1 colour, a derived vertex is typed One/Gam/Del and forced by two
// earlier sources of the complementary types (nonadjacent, so no
// triangles). A composite move adds an alternating 4-path: z1..z4 capped
// alternately by two same-typed vertices d1, d2, plus u adjacent to the
// nonadjacent ends z1, z4; the path alternates inside a 2-colour set, so
// its ends differ and u is forced to the caps' type. A contradiction is
// closed by an edge between two same-typed vertices or by a fresh vertex
// seeing all three types. Every candidate is verified by the exact oracle
// before being reported.

use fragile::graph::Graph;
use fragile::oracle::{exact_colour, ColourConstraint, OracleLimits};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Ty {
    One,
    Gam,
    Del,
    Path, // z-path vertex: constrained to a 2-set, never a source
}

#[derive(Clone)]
struct State {
    ty: Vec<Ty>,
    edges: Vec<(u32, u32)>,
    adj: Vec<u64>,
    slots: Vec<u8>,
    last_opt: (u8, u32, u32),
}

const A: usize = 0;
const B: usize = 1;
const X: usize = 2;

fn initial() -> State {
    let mut st = State {
        ty: vec![Ty::One, Ty::One, Ty::Gam],
        edges: vec![(B as u32, X as u32)],
        adj: vec![0; 3],
        slots: vec![0; 3],
        last_opt: (0, 0, 0),
    };
    st.adj[X] |= 1 << B;
    st.adj[B] |= 1 << X;
    st.slots[B] = 1;
    st
}

fn adjacent(st: &State, u: usize, v: usize) -> bool {
    st.adj[u] >> v & 1 == 1
}

enum Closure {
    Edge(usize, usize),
    Vertex(usize, usize, usize),
}

fn closures(st: &State, max_slots: u8) -> Vec<Closure> {
    let n = st.ty.len();
    let mut out = Vec::new();
    for s in 0..n {
        for t in s + 1..n {
            if (s, t) == (A, B) || st.ty[s] == Ty::Path || st.ty[s] != st.ty[t] {
                continue;
            }
            if st.slots[s] < max_slots
                && st.slots[t] < max_slots
                && !adjacent(st, s, t)
                && st.adj[s] & st.adj[t] == 0
            {
                out.push(Closure::Edge(s, t));
            }
        }
    }
    for i in 0..n {
        if st.ty[i] != Ty::One || st.slots[i] >= max_slots {
            continue;
        }
        for g in 0..n {
            if st.ty[g] != Ty::Gam || st.slots[g] >= max_slots || adjacent(st, i, g) {
                continue;
            }
            for d in 0..n {
                if st.ty[d] != Ty::Del
                    || st.slots[d] >= max_slots
                    || adjacent(st, i, d)
                    || adjacent(st, g, d)
                {
                    continue;
                }
                out.push(Closure::Vertex(i, g, d));
            }
        }
    }
    out
}

fn materialize(st: &State, close: &Closure) -> (Graph, usize, usize) {
    let mut edges = st.edges.clone();
    let mut n = st.ty.len();
    match *close {
        Closure::Edge(s, t) => edges.push((s as u32, t as u32)),
        Closure::Vertex(i, g, d) => {
            let v = n as u32;
            n += 1;
            edges.push((i as u32, v));
            edges.push((g as u32, v));
            edges.push((d as u32, v));
        }
    }
    (Graph::from_edges(n, &edges).unwrap(), A, B)
}

fn is_2_degenerate(g: &Graph) -> bool {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    for _ in 0..n {
        let Some(v) = (0..n).find(|&v| !removed[v] && deg[v] <= 2) else {
            return false;
        };
        removed[v] = true;
        for &w in g.neighbours(v as u32) {
            if !removed[w as usize] {
                deg[w as usize] -= 1;
            }
        }
    }
    true
}

fn verify(g: &Graph, a: usize, b: usize) -> bool {
    let lim = OracleLimits::default();
    if g.has_edge(a as u32, b as u32) || fragile::decomp::has_triangle(g) || !is_2_degenerate(g) {
        return false;
    }
    let eq = exact_colour(g, 3, &[ColourConstraint::Equal(a as u32, b as u32)], &lim).unwrap();
    if eq.value.is_some() {
        return false;
    }
    let three = exact_colour(g, 3, &[], &lim).unwrap();
    let two = exact_colour(g, 2, &[], &lim).unwrap();
    three.value.is_some() && two.value.is_none()
}

fn push_vertex(st: &mut State, ty: Ty, srcs: &[usize]) -> usize {
    let v = st.ty.len();
    st.ty.push(ty);
    let mut mask = 0u64;
    for &s in srcs {
        st.edges.push((s as u32, v as u32));
        mask |= 1 << s;
        st.adj[s] |= 1 << v;
        st.slots[s] += 1;
    }
    st.adj.push(mask);
    st.slots.push(0);
    v
}

fn pop_vertex(st: &mut State, srcs: &[usize]) {
    let v = st.ty.len() - 1;
    for &s in srcs {
        st.edges.pop();
        st.adj[s] &= !(1 << v);
        st.slots[s] -= 1;
    }
    st.adj.pop();
    st.slots.pop();
    st.ty.pop();
}

fn dfs(
    st: &mut State,
    n_max: usize,
    max_slots: u8,
    budget: &mut u64,
    found: &mut Vec<(Graph, usize, usize)>,
) {
    if *budget == 0 || !found.is_empty() {
        return;
    }
    *budget -= 1;
    for close in closures(st, max_slots) {
        let (g, a, b) = materialize(st, &close);
        if verify(&g, a, b) {
            found.push((g, a, b));
            return;
        }
    }
    let n = st.ty.len();
    let prev = n - 1;

    // regular typed vertex
    if n + 1 <= n_max {
        for tyi in 0..3u8 {
            let (ty, ta, tb) = match tyi {
                0 => (Ty::Del, Ty::One, Ty::Gam),
                1 => (Ty::Gam, Ty::One, Ty::Del),
                _ => (Ty::One, Ty::Gam, Ty::Del),
            };
            for p in 0..n {
                if st.ty[p] != ta || st.slots[p] >= max_slots {
                    continue;
                }
                for q in 0..n {
                    if st.ty[q] != tb || st.slots[q] >= max_slots || adjacent(st, p, q) {
                        continue;
                    }
                    let opt = (tyi, p as u32, q as u32);
                    if p != prev && q != prev && opt < st.last_opt {
                        continue;
                    }
                    let saved = st.last_opt;
                    st.last_opt = opt;
                    push_vertex(st, ty, &[p, q]);
                    dfs(st, n_max, max_slots, budget, found);
                    pop_vertex(st, &[p, q]);
                    st.last_opt = saved;
                    if !found.is_empty() || *budget == 0 {
                        return;
                    }
                }
            }
        }
    }

    // alternating path block: caps d1, d2 same-typed and distinct, each
    // donating 2 slots; z1-z2-z3-z4 capped d1,d2,d1,d2; u adjacent to the
    // ends, forced to the caps' type
    if n + 5 <= n_max {
        for d1 in 0..n {
            let t = st.ty[d1];
            if t == Ty::Path || st.slots[d1] as usize + 2 > max_slots as usize {
                continue;
            }
            for d2 in d1 + 1..n {
                if st.ty[d2] != t || st.slots[d2] as usize + 2 > max_slots as usize {
                    continue;
                }
                if (d1, d2) == (A, B) && t == Ty::One {
                    // allowed: caps need not be nonadjacent or related
                }
                let opt = (3u8, d1 as u32, d2 as u32);
                if d1 != prev && d2 != prev && opt < st.last_opt {
                    continue;
                }
                let saved = st.last_opt;
                st.last_opt = opt;
                let out_ty = t;
                let z1 = push_vertex(st, Ty::Path, &[d1]);
                let z2 = push_vertex(st, Ty::Path, &[d2, z1]);
                let z3 = push_vertex(st, Ty::Path, &[d1, z2]);
                let z4 = push_vertex(st, Ty::Path, &[d2, z3]);
                push_vertex(st, out_ty, &[z1, z4]);
                dfs(st, n_max, max_slots, budget, found);
                pop_vertex(st, &[z1, z4]);
                pop_vertex(st, &[d2, z3]);
                pop_vertex(st, &[d1, z2]);
                pop_vertex(st, &[d2, z1]);
                pop_vertex(st, &[d1]);
                st.last_opt = saved;
                if !found.is_empty() || *budget == 0 {
                    return;
                }
            }
        }
    }
}

fn main() {
    for max_slots in [2u8, 3] {
        for n_max in 8..=16 {
            let mut st = initial();
            let mut budget = 100_000_000u64;
            let mut found = Vec::new();
            dfs(&mut st, n_max, max_slots, &mut budget, &mut found);
            eprintln!(
                "slots<={max_slots} n_max={n_max}: explored {}, found {}",
                100_000_000 - budget,
                found.len()
            );
            if let Some((g, a, b)) = found.first() {
                println!("FOUND n={} m={}", g.vertex_count(), g.edge_count());
                println!("terminals a={a} b={b}");
                let edges: Vec<String> = g.edges().map(|(u, v)| format!("({u},{v})")).collect();
                println!("edges: {}", edges.join(", "));
                return;
            }
        }
    }
    println!("NOT FOUND");
}
