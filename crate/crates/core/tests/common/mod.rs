//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use coboson::graph::{
    make_chain, make_complete, make_hanoi, make_hexagonal_lattice, make_sierpinski,
    make_square_lattice, make_star, make_triangular_lattice, make_vicsek, Boundary, Graph,
};

/// Dense adjacency matrix.
pub fn adjacency(g: &Graph) -> Vec<Vec<f64>> {
    let m = g.num_nodes();
    let mut a = vec![vec![0.0; m]; m];
    for &(i, j) in g.edges() {
        a[i][j] = 1.0;
        a[j][i] = 1.0;
    }
    a
}

/// Occupation bitmasks with `pairs` bits set, increasing. Increasing
/// bitmask order is colex order of the occupied site sets.
pub fn states(m: usize, pairs: usize) -> Vec<u64> {
    assert!(m <= 24);
    (0u64..1 << m)
        .filter(|s| s.count_ones() as usize == pairs)
        .collect()
}

/// Hamiltonian built by applying every single-pair hop to every
/// configuration. Row-major dense matrix over [`states`].
pub fn brute_hop_matrix(g: &Graph, pairs: usize, nn_repulsion: bool) -> Vec<f64> {
    let basis = states(g.num_nodes(), pairs);
    let index: HashMap<u64, usize> = basis.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let d = basis.len();
    let mut h = vec![0.0; d * d];
    for (col, &s) in basis.iter().enumerate() {
        if nn_repulsion {
            let bonds = g
                .edges()
                .iter()
                .filter(|&&(a, b)| s >> a & 1 == 1 && s >> b & 1 == 1)
                .count();
            h[col * d + col] += bonds as f64;
        }
        for a in 0..g.num_nodes() {
            if s >> a & 1 == 0 {
                continue;
            }
            for &b in g.neighbors(a) {
                if s >> b & 1 == 1 {
                    continue;
                }
                let t = s & !(1 << a) | 1 << b;
                h[index[&t] * d + col] += -0.5;
            }
        }
    }
    h
}

/// Sorted site tuples in colex order.
fn tuples(m: usize, pairs: usize) -> Vec<Vec<usize>> {
    states(m, pairs)
        .into_iter()
        .map(|s| (0..m).filter(|&i| s >> i & 1 == 1).collect())
        .collect()
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Two-pair matrix from the closed formula
/// `H_{kl,mn} = A_kl δ_{kl,mn} - 1/2 (δ_ln A_km + δ_lm A_kn + δ_kn A_lm + δ_km A_ln)`.
pub fn formula_h2(g: &Graph, nn_repulsion: bool) -> Vec<f64> {
    let a = adjacency(g);
    let basis = tuples(g.num_nodes(), 2);
    let d = basis.len();
    let mut h = vec![0.0; d * d];
    for (r, kl) in basis.iter().enumerate() {
        let (k, l) = (kl[0], kl[1]);
        for (c, mn) in basis.iter().enumerate() {
            let (m, n) = (mn[0], mn[1]);
            let mut v = -0.5
                * (delta(l, n) * a[k][m]
                    + delta(l, m) * a[k][n]
                    + delta(k, n) * a[l][m]
                    + delta(k, m) * a[l][n]);
            if r == c && nn_repulsion {
                v += a[k][l];
            }
            h[r * d + c] = v;
        }
    }
    h
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Three-pair matrix from the hop formula summed over all permutations of
/// the target triple and every choice of moving pair in the source triple.
pub fn formula_h3(g: &Graph, nn_repulsion: bool) -> Vec<f64> {
    let a = adjacency(g);
    let basis = tuples(g.num_nodes(), 3);
    let d = basis.len();
    let mut h = vec![0.0; d * d];
    for (r, src) in basis.iter().enumerate() {
        for (c, dst) in basis.iter().enumerate() {
            let mut v = 0.0;
            for mover in 0..3 {
                let rest: Vec<usize> = (0..3).filter(|&p| p != mover).map(|p| src[p]).collect();
                for p in PERMUTATIONS {
                    let t = [dst[p[0]], dst[p[1]], dst[p[2]]];
                    v += -0.5 * delta(rest[0], t[1]) * delta(rest[1], t[2]) * a[src[mover]][t[0]];
                }
            }
            if r == c && nn_repulsion {
                v += a[src[0]][src[1]] + a[src[0]][src[2]] + a[src[1]][src[2]];
            }
            h[r * d + c] = v;
        }
    }
    h
}

/// Smallest nontrivial member of each of the nine generated families (plus
/// the closed variants), all with at least four sites.
pub fn smallest_graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("chain", make_chain(4, Boundary::Open).unwrap()),
        ("ring", make_chain(4, Boundary::Closed).unwrap()),
        ("square", make_square_lattice(2, 2, Boundary::Open).unwrap()),
        (
            "torus",
            make_square_lattice(3, 3, Boundary::Closed).unwrap(),
        ),
        ("triangular", make_triangular_lattice(2, 2).unwrap()),
        ("hexagonal", make_hexagonal_lattice(1, 1).unwrap()),
        ("sierpinski", make_sierpinski(1, Boundary::Open).unwrap()),
        (
            "sierpinski-closed",
            make_sierpinski(1, Boundary::Closed).unwrap(),
        ),
        ("hanoi", make_hanoi(1).unwrap()),
        ("vicsek", make_vicsek(3, 1).unwrap()),
        ("star", make_star(4).unwrap()),
        ("complete", make_complete(4).unwrap()),
    ]
}

/// BFS distances from `src` without using the crate's metric code.
pub fn bfs(g: &Graph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.num_nodes()];
    dist[src] = Some(0);
    let mut q = VecDeque::from([src]);
    while let Some(u) = q.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                q.push_back(v);
            }
        }
    }
    dist
}

/// Squared overlap without sign checks.
pub fn overlap2(a: &[f64], b: &[f64]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    s * s
}

/// Random connected graph on `m` nodes: a random spanning tree plus extra
/// edges, driven by the given raw choices.
pub fn random_connected(m: usize, parents: &[usize], extra: &[(usize, usize)]) -> Graph {
    let mut edges = std::collections::BTreeSet::new();
    for v in 1..m {
        let p = parents[v - 1] % v;
        edges.insert((p, v));
    }
    for &(a, b) in extra {
        let (a, b) = (a % m, b % m);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Graph::new(
        m,
        edges.into_iter().collect(),
        coboson::graph::GraphMeta::custom(),
    )
    .unwrap()
}
