//! Deterministic generators for every graph family.
//!
//! Fractal node numbering follows the recursive construction: nodes of copy
//! `c` precede those of copy `c + 1`, and within a copy the numbering of the
//! previous level is reused. Gluing (Sierpinski) keeps the id of the first
//! occurrence.

use std::collections::HashMap;

use super::{Boundary, Family, Graph, GraphMeta};
use crate::error::{Error, Result};

fn too_small(msg: impl Into<String>) -> Error {
    Error::SizeTooSmall(msg.into())
}

/// Path (`Open`) or cycle (`Closed`) on `m` nodes.
pub fn make_chain(m: usize, boundary: Boundary) -> Result<Graph> {
    if m < 2 {
        return Err(too_small(format!("chain needs M >= 2, got {m}")));
    }
    if boundary == Boundary::Closed && m < 3 {
        return Err(too_small(format!("closed chain needs M >= 3, got {m}")));
    }
    let mut edges: Vec<_> = (0..m - 1).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Closed {
        edges.push((0, m - 1));
    }
    Graph::new(m, edges, GraphMeta::new(Family::Chain, m, boundary))
}

/// `n x m` square lattice, node `(r, c)` has id `r * m + c`. `Closed` is the
/// torus.
pub fn make_square_lattice(n: usize, m: usize, boundary: Boundary) -> Result<Graph> {
    let min = match boundary {
        Boundary::Open => 2,
        Boundary::Closed => 3,
    };
    if n < min || m < min {
        return Err(too_small(format!(
            "{boundary} square lattice needs n, m >= {min}, got {n}x{m}"
        )));
    }
    let id = |r: usize, c: usize| r * m + c;
    let mut edges = Vec::with_capacity(2 * n * m);
    for r in 0..n {
        for c in 0..m {
            if c + 1 < m {
                edges.push((id(r, c), id(r, c + 1)));
            } else if boundary == Boundary::Closed {
                edges.push((id(r, 0), id(r, c)));
            }
            if r + 1 < n {
                edges.push((id(r, c), id(r + 1, c)));
            } else if boundary == Boundary::Closed {
                edges.push((id(0, c), id(r, c)));
            }
        }
    }
    Graph::new(
        n * m,
        edges,
        GraphMeta::new(Family::SquareLattice, n, boundary),
    )
}

/// Open triangular lattice: the square lattice plus the `(r, c)-(r+1, c+1)`
/// diagonal of every cell.
pub fn make_triangular_lattice(n: usize, m: usize) -> Result<Graph> {
    if n < 2 || m < 2 {
        return Err(too_small(format!(
            "triangular lattice needs n, m >= 2, got {n}x{m}"
        )));
    }
    let id = |r: usize, c: usize| r * m + c;
    let mut edges = Vec::new();
    for r in 0..n {
        for c in 0..m {
            if c + 1 < m {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < n {
                edges.push((id(r, c), id(r + 1, c)));
            }
            if r + 1 < n && c + 1 < m {
                edges.push((id(r, c), id(r + 1, c + 1)));
            }
        }
    }
    Graph::new(
        n * m,
        edges,
        GraphMeta::new(Family::TriangularLattice, n, Boundary::Open),
    )
}

/// Open honeycomb patch of `n` rows by `m` columns of hexagonal cells, built
/// as a brick wall. `(1, 1)` is a single hexagon.
pub fn make_hexagonal_lattice(n: usize, m: usize) -> Result<Graph> {
    if n < 1 || m < 1 {
        return Err(too_small(format!(
            "hexagonal lattice needs n, m >= 1, got {n}x{m}"
        )));
    }
    let rows = n + 1;
    let cols = 2 * m + 2;
    let site = |r: usize, c: usize| r * cols + c;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); rows * cols];
    let link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                link(site(r, c), site(r, c + 1), &mut adj);
            }
            if r + 1 < rows && (r + c) % 2 == 0 {
                link(site(r, c), site(r + 1, c), &mut adj);
            }
        }
    }
    // Strip dangling ends left over at the ragged brick-wall borders.
    let mut alive = vec![true; rows * cols];
    loop {
        let mut changed = false;
        for v in 0..rows * cols {
            if alive[v] && adj[v].iter().filter(|&&u| alive[u]).count() < 2 {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut ids = vec![usize::MAX; rows * cols];
    let mut next = 0;
    for v in 0..rows * cols {
        if alive[v] {
            ids[v] = next;
            next += 1;
        }
    }
    let mut edges = Vec::new();
    for v in 0..rows * cols {
        if !alive[v] {
            continue;
        }
        for &u in &adj[v] {
            if alive[u] && v < u {
                edges.push((ids[v], ids[u]));
            }
        }
    }
    Graph::new(
        next,
        edges,
        GraphMeta::new(Family::HexagonalLattice, n, Boundary::Open),
    )
}

/// Sierpinski gasket. Level 0 is a triangle; level `L` has
/// `(3^(L+1) + 3) / 2` nodes and `3^(L+1)` edges. `Closed` links the three
/// outer corners and needs `level >= 1`.
pub fn make_sierpinski(level: usize, boundary: Boundary) -> Result<Graph> {
    if boundary == Boundary::Closed && level == 0 {
        return Err(too_small(
            "closed Sierpinski gasket needs level >= 1 (level 0 corners are already linked)",
        ));
    }
    let mut ids: HashMap<(u64, u64), usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut stack = vec![(level, 0u64, 0u64)];
    // Depth-first with copies pushed in reverse so copy 0 is expanded first.
    while let Some((lvl, x, y)) = stack.pop() {
        if lvl == 0 {
            let mut corner = |p: (u64, u64)| {
                let next = ids.len();
                *ids.entry(p).or_insert(next)
            };
            let a = corner((x, y));
            let b = corner((x + 1, y));
            let c = corner((x, y + 1));
            edges.extend([(a, b), (a, c), (b, c)]);
        } else {
            let h = 1u64 << (lvl - 1);
            stack.push((lvl - 1, x, y + h));
            stack.push((lvl - 1, x + h, y));
            stack.push((lvl - 1, x, y));
        }
    }
    if boundary == Boundary::Closed {
        let side = 1u64 << level;
        let c0 = ids[&(0, 0)];
        let c1 = ids[&(side, 0)];
        let c2 = ids[&(0, side)];
        edges.extend([(c0, c1), (c0, c2), (c1, c2)]);
    }
    Graph::new(
        ids.len(),
        edges,
        GraphMeta::new(Family::SierpinskiGasket, level, boundary),
    )
}

/// Hanoi graph (dual Sierpinski gasket) with `3^(level+1)` nodes: level 0
/// is a triangle and level `L` joins three level `L-1` copies pairwise by
/// one edge between facing corners.
///
/// Nodes are words over `{0,1,2}` of length `level + 1`, numbered by their
/// base-3 value with the first letter most significant (the copy index).
pub fn make_hanoi(level: usize) -> Result<Graph> {
    let len = level as u32 + 1;
    let num_nodes = 3usize.pow(len);
    let mut edges = Vec::new();
    // Innermost triangles: words differing only in the last letter.
    for prefix in 0..num_nodes / 3 {
        let base = prefix * 3;
        edges.extend([(base, base + 1), (base, base + 2), (base + 1, base + 2)]);
    }
    // Bridges u i j^d -- u j i^d.
    for d in 1..len {
        let tail = 3usize.pow(d);
        let rep = |letter: usize| letter * (tail - 1) / 2; // letter repeated d times
        for prefix in 0..3usize.pow(len - 1 - d) {
            for i in 0..3 {
                for j in i + 1..3 {
                    let a = (prefix * 3 + i) * tail + rep(j);
                    let b = (prefix * 3 + j) * tail + rep(i);
                    edges.push((a, b));
                }
            }
        }
    }
    Graph::new(
        num_nodes,
        edges,
        GraphMeta::new(Family::HanoiDual, level, Boundary::Open),
    )
}

/// Vicsek fractal tree with branching `nu`.
///
/// Level 1 is a star with `nu + 1` nodes whose leaves are the corners.
/// Level `k + 1` places the level-`k` graph in the centre and `nu` copies
/// around it; copy `i` hangs off central corner `i` by a single edge from
/// its corner `(i + nu/2) mod nu`, and its corner `i` becomes the new
/// corner `i`. All corner pairs are equidistant at every level.
pub fn make_vicsek(nu: usize, level: usize) -> Result<Graph> {
    if nu < 2 {
        return Err(Error::InvalidParam(format!(
            "Vicsek needs nu >= 2, got {nu}"
        )));
    }
    if level < 1 {
        return Err(too_small("Vicsek level starts at 1"));
    }
    let mut n = nu + 1;
    let mut edges: Vec<(usize, usize)> = (1..=nu).map(|leaf| (0, leaf)).collect();
    let mut corners: Vec<usize> = (1..=nu).collect();
    for _ in 1..level {
        let mut next = Vec::with_capacity(edges.len() * (nu + 1) + nu);
        for copy in 0..=nu {
            let off = copy * n;
            next.extend(edges.iter().map(|&(a, b)| (a + off, b + off)));
        }
        let mut next_corners = Vec::with_capacity(nu);
        for (i, &central_corner) in corners.iter().enumerate() {
            let off = (i + 1) * n;
            let facing = corners[(i + nu / 2) % nu];
            next.push((central_corner, facing + off));
            next_corners.push(corners[i] + off);
        }
        edges = next;
        corners = next_corners;
        n *= nu + 1;
    }
    let mut meta = GraphMeta::new(Family::Vicsek, level, Boundary::Open);
    meta.nu = Some(nu);
    Graph::new(n, edges, meta)
}

/// Star `K_{1, m-1}` with node 0 as hub.
pub fn make_star(m: usize) -> Result<Graph> {
    if m < 2 {
        return Err(too_small(format!("star needs M >= 2, got {m}")));
    }
    let edges = (1..m).map(|leaf| (0, leaf)).collect();
    Graph::new(m, edges, GraphMeta::new(Family::Star, m, Boundary::Open))
}

pub fn make_complete(m: usize) -> Result<Graph> {
    if m < 2 {
        return Err(too_small(format!("complete graph needs M >= 2, got {m}")));
    }
    let edges = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .collect();
    Graph::new(
        m,
        edges,
        GraphMeta::new(Family::Complete, m, Boundary::Open),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_set(g: &Graph) -> Vec<(usize, usize)> {
        g.edges().to_vec()
    }

    #[test]
    fn chain_small_cases() {
        let open = make_chain(3, Boundary::Open).unwrap();
        assert_eq!(edge_set(&open), vec![(0, 1), (1, 2)]);
        let closed = make_chain(3, Boundary::Closed).unwrap();
        assert_eq!(edge_set(&closed), vec![(0, 1), (0, 2), (1, 2)]);
        let long = make_chain(900, Boundary::Open).unwrap();
        assert_eq!((long.num_nodes(), long.num_edges()), (900, 899));
        assert!(long.is_connected());
    }

    #[test]
    fn chain_size_errors() {
        assert!(matches!(
            make_chain(1, Boundary::Open),
            Err(Error::SizeTooSmall(_))
        ));
        assert!(matches!(
            make_chain(2, Boundary::Closed),
            Err(Error::SizeTooSmall(_))
        ));
    }

    #[test]
    fn square_lattice_counts() {
        let g = make_square_lattice(2, 2, Boundary::Open).unwrap();
        assert_eq!((g.num_nodes(), g.num_edges()), (4, 4));
        assert!((0..4).all(|v| g.degree(v) == 2));

        let torus = make_square_lattice(3, 3, Boundary::Closed).unwrap();
        assert_eq!((torus.num_nodes(), torus.num_edges()), (9, 18));
        assert!((0..9).all(|v| torus.degree(v) == 4));

        let g = make_square_lattice(4, 4, Boundary::Open).unwrap();
        assert_eq!((g.num_nodes(), g.num_edges()), (16, 24));
        assert!(make_square_lattice(2, 3, Boundary::Closed).is_err());
    }

    #[test]
    fn triangular_and_hexagonal_smallest() {
        let tri = make_triangular_lattice(2, 2).unwrap();
        assert_eq!((tri.num_nodes(), tri.num_edges()), (4, 5));
        let hex = make_hexagonal_lattice(1, 1).unwrap();
        assert_eq!((hex.num_nodes(), hex.num_edges()), (6, 6));
        assert!((0..6).all(|v| hex.degree(v) == 2));
    }

    #[test]
    fn honeycomb_degrees_are_two_or_three() {
        for (n, m) in [(1, 3), (2, 2), (3, 4), (5, 5)] {
            let g = make_hexagonal_lattice(n, m).unwrap();
            assert!(g.is_connected());
            assert!((0..g.num_nodes()).all(|v| (2..=3).contains(&g.degree(v))));
            // Each hexagon cell is a cycle: circuit rank equals the cell count.
            assert_eq!(g.num_edges() + 1 - g.num_nodes(), n * m);
        }
    }

    #[test]
    fn sierpinski_counts() {
        for level in 0..=6u32 {
            let g = make_sierpinski(level as usize, Boundary::Open).unwrap();
            assert_eq!(g.num_nodes(), (3usize.pow(level + 1) + 3) / 2);
            assert_eq!(g.num_edges(), 3usize.pow(level + 1));
        }
        assert_eq!(make_sierpinski(2, Boundary::Open).unwrap().num_nodes(), 15);
        assert_eq!(
            make_sierpinski(6, Boundary::Open).unwrap().num_nodes(),
            1095
        );
    }

    #[test]
    fn sierpinski_closed_links_degree_two_corners() {
        let open = make_sierpinski(2, Boundary::Open).unwrap();
        let corners: Vec<_> = (0..open.num_nodes())
            .filter(|&v| open.degree(v) == 2)
            .collect();
        assert_eq!(corners.len(), 3);
        let closed = make_sierpinski(2, Boundary::Closed).unwrap();
        assert_eq!(closed.num_edges(), open.num_edges() + 3);
        for &a in &corners {
            for &b in &corners {
                if a != b {
                    assert!(closed.has_edge(a, b));
                }
            }
        }
        assert!((0..closed.num_nodes()).all(|v| closed.degree(v) == 4));
        assert!(make_sierpinski(0, Boundary::Closed).is_err());
    }

    #[test]
    fn hanoi_structure() {
        let g0 = make_hanoi(0).unwrap();
        assert_eq!((g0.num_nodes(), g0.num_edges()), (3, 3));
        let g1 = make_hanoi(1).unwrap();
        assert_eq!((g1.num_nodes(), g1.num_edges()), (9, 12));
        for level in 0..=3 {
            let g = make_hanoi(level).unwrap();
            let deg2 = (0..g.num_nodes()).filter(|&v| g.degree(v) == 2).count();
            let deg3 = (0..g.num_nodes()).filter(|&v| g.degree(v) == 3).count();
            assert_eq!(deg2, 3);
            assert_eq!(deg2 + deg3, g.num_nodes());
        }
    }

    #[test]
    fn vicsek_is_a_tree_of_expected_size() {
        let star = make_vicsek(3, 1).unwrap();
        assert_eq!(star.edges(), &[(0, 1), (0, 2), (0, 3)]);
        for nu in 2..=4usize {
            for level in 1..=5u32 {
                let g = make_vicsek(nu, level as usize).unwrap();
                let m = (nu + 1).pow(level);
                assert_eq!(g.num_nodes(), m);
                assert_eq!(g.num_edges(), m - 1);
                assert!(g.is_connected());
            }
        }
        assert_eq!(make_vicsek(3, 5).unwrap().num_nodes(), 1024);
        assert_eq!(make_vicsek(4, 2).unwrap().num_edges(), 24);
    }

    #[test]
    fn star_and_complete() {
        assert_eq!(make_star(4).unwrap().edges(), &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(make_complete(4).unwrap().num_edges(), 6);
        assert_eq!(
            make_complete(3).unwrap().edges(),
            make_chain(3, Boundary::Closed).unwrap().edges()
        );
        assert!(make_star(1).is_err());
        assert!(make_complete(1).is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(
            make_sierpinski(4, Boundary::Closed).unwrap(),
            make_sierpinski(4, Boundary::Closed).unwrap()
        );
        assert_eq!(make_vicsek(4, 3).unwrap(), make_vicsek(4, 3).unwrap());
        assert_eq!(make_hanoi(3).unwrap(), make_hanoi(3).unwrap());
    }
}
