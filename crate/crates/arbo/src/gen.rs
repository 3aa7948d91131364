//! Constructors for the graph families used throughout the tests and
//! the command-line suite.

use crate::budget::{Error, Result};
use crate::graph::Multigraph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Path with `n` vertices `0 - 1 - ... - n-1`.
pub fn path(n: usize) -> Result<Multigraph> {
    if n == 0 {
        return Err(Error::Precondition("path needs at least one vertex".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Multigraph::new(n, &edges)
}

/// Cycle with `n` vertices; `n = 2` is the digon.
pub fn cycle(n: usize) -> Result<Multigraph> {
    if n < 2 {
        return Err(Error::Precondition("cycle needs at least two vertices".into()));
    }
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((n - 1, 0));
    Multigraph::new(n, &edges)
}

/// Cycle of length `len` with every edge in `multiplicity` parallel copies.
pub fn multicycle(len: usize, multiplicity: usize) -> Result<Multigraph> {
    if multiplicity == 0 {
        return Err(Error::Precondition("multiplicity must be positive".into()));
    }
    let base = cycle(len)?;
    let mut edges = Vec::with_capacity(len * multiplicity);
    for &(u, v) in base.edges() {
        for _ in 0..multiplicity {
            edges.push((u, v));
        }
    }
    Multigraph::new(len, &edges)
}

/// Complete simple graph on `n` vertices, edges in lexicographic order.
pub fn clique(n: usize) -> Result<Multigraph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Multigraph::new(n, &edges)
}

/// Star `K_{1,k}` with center `0` and leaves `1..=k`.
pub fn star(k: usize) -> Result<Multigraph> {
    let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    Multigraph::new(k + 1, &edges)
}

/// Theta graph: two terminals joined by `paths` internally disjoint
/// paths of `len` edges each. `len = 1` gives a multi-edge.
pub fn theta(paths: usize, len: usize) -> Result<Multigraph> {
    if paths == 0 || len == 0 {
        return Err(Error::Precondition(
            "theta needs at least one path of positive length".into(),
        ));
    }
    let mut n = 2;
    let mut edges = Vec::new();
    for _ in 0..paths {
        let mut prev = 0;
        for _ in 0..len - 1 {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
        edges.push((prev, 1));
    }
    Multigraph::new(n, &edges)
}

/// Ancestor closure of the complete `q`-ary tree whose root-to-leaf
/// paths have `height` vertices: every vertex is joined to each of its
/// proper ancestors. Vertices are numbered in breadth-first order.
///
/// The closure of a height-`h` tree is the canonical graph of tree-depth
/// exactly `h`.
pub fn tree_closure(q: usize, height: usize) -> Result<Multigraph> {
    if q == 0 || height == 0 {
        return Err(Error::Precondition(
            "tree closure needs positive arity and height".into(),
        ));
    }
    // Parents in breadth-first order; ancestors found by chasing them.
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut level: Vec<usize> = vec![0];
    for _ in 1..height {
        let next: Vec<usize> = level
            .iter()
            .flat_map(|&p| {
                (0..q).map(move |_| p)
            })
            .collect();
        let mut fresh = Vec::with_capacity(next.len());
        for p in next {
            fresh.push(parent.len());
            parent.push(Some(p));
        }
        level = fresh;
    }
    let mut edges = Vec::new();
    for v in 0..parent.len() {
        let mut a = parent[v];
        while let Some(anc) = a {
            edges.push((anc, v));
            a = parent[anc];
        }
    }
    Multigraph::new(parent.len(), &edges)
}

/// Uniformly random multigraph: `m` edges drawn independently over the
/// unordered non-loop pairs of `n >= 2` vertices. Deterministic in `seed`.
pub fn random_multigraph(n: usize, m: usize, seed: u64) -> Result<Multigraph> {
    if n < 2 {
        return Err(Error::Precondition(
            "random multigraph needs at least two vertices".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        loop {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                edges.push((u, v));
                break;
            }
        }
    }
    Multigraph::new(n, &edges)
}
