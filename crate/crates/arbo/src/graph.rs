use crate::budget::{Error, Result};

/// Vertices are dense indices `0..vertex_count`.
pub type VertexId = usize;
/// Edges are dense indices `0..edge_count`, in insertion order.
pub type EdgeId = usize;

/// A loopless undirected multigraph. Parallel edges are distinct
/// `EdgeId`s with the same endpoint pair; the endpoint pair of an edge
/// is stored as given at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
}

impl std::fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Multigraph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Multigraph {
    /// Builds a multigraph, rejecting loops and out-of-range endpoints.
    pub fn new(vertex_count: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::Precondition(format!(
                    "edge {i} endpoint out of range: ({u}, {v}) with {vertex_count} vertices"
                )));
            }
            if u == v {
                return Err(Error::Precondition(format!("edge {i} is a loop at {u}")));
            }
        }
        Ok(Multigraph {
            n: vertex_count,
            edges: edges.to_vec(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// Per-vertex incidence lists `(edge, other endpoint)`, ordered by
    /// ascending `EdgeId`.
    pub fn incidence(&self) -> Vec<Vec<(EdgeId, VertexId)>> {
        let mut inc = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push((e, v));
            inc[v].push((e, u));
        }
        inc
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Number of edges with both endpoints inside `keep` (given as a
    /// membership mask over the vertex set).
    pub fn edges_inside(&self, keep: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| keep[u] && keep[v])
            .count()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let inc = self.incidence();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(_, w) in &inc[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// The underlying simple graph: one edge per adjacent vertex pair,
    /// ordered by the pair `(min, max)`.
    pub fn simplified(&self) -> Multigraph {
        let mut pairs: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        Multigraph {
            n: self.n,
            edges: pairs,
        }
    }

    /// The subgraph induced by `keep` (sorted, deduplicated internally).
    /// Returns the new graph plus, per new edge, the original `EdgeId`.
    /// New vertex `i` is the `i`-th smallest kept original vertex.
    pub fn induced(&self, keep: &[VertexId]) -> (Multigraph, Vec<EdgeId>) {
        let mut vs: Vec<VertexId> = keep.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vs.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        let mut ids = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if local[u] != usize::MAX && local[v] != usize::MAX {
                edges.push((local[u], local[v]));
                ids.push(e);
            }
        }
        (
            Multigraph {
                n: vs.len(),
                edges,
            },
            ids,
        )
    }

    /// Lexicographic blow-up: every vertex becomes `m` copies, and each
    /// edge `{x, y}` becomes one edge per copy pair, so its multiplicity
    /// is multiplied by `m * m`. Copy `i` of vertex `x` is `x * m + i`;
    /// copies of the same vertex stay non-adjacent.
    pub fn blow_up(&self, m: usize) -> Result<Multigraph> {
        if m == 0 {
            return Err(Error::Precondition("blow-up factor must be positive".into()));
        }
        let mut edges = Vec::with_capacity(self.edges.len() * m * m);
        for &(u, v) in &self.edges {
            for i in 0..m {
                for j in 0..m {
                    edges.push((u * m + i, v * m + j));
                }
            }
        }
        Ok(Multigraph {
            n: self.n * m,
            edges,
        })
    }

    /// Subdivides edge `e` into a path of `times[e] + 1` edges. New
    /// vertices are appended after the originals, grouped by edge in
    /// `EdgeId` order; replacement path edges are emitted in the same
    /// order, walking from the stored tail to the stored head.
    pub fn subdivide(&self, times: &[usize]) -> Result<Multigraph> {
        if times.len() != self.edges.len() {
            return Err(Error::Precondition(format!(
                "subdivision vector has {} entries for {} edges",
                times.len(),
                self.edges.len()
            )));
        }
        let mut n = self.n;
        let mut edges = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let t = times[e];
            let mut prev = u;
            for _ in 0..t {
                edges.push((prev, n));
                prev = n;
                n += 1;
            }
            edges.push((prev, v));
        }
        Ok(Multigraph { n, edges })
    }

    /// Subdivides every edge `times` times.
    pub fn subdivide_all(&self, times: usize) -> Multigraph {
        self.subdivide(&vec![times; self.edges.len()])
            .expect("vector length matches by construction")
    }

    /// The graph without edge `e`; edges after it shift down one id.
    pub fn delete_edge(&self, e: EdgeId) -> Multigraph {
        let mut edges = self.edges.clone();
        edges.remove(e);
        Multigraph { n: self.n, edges }
    }

    /// Contracts edge `e`: its endpoints merge into the smaller id,
    /// vertices above the larger id shift down, and edges that become
    /// loops vanish. Parallel edges survive as parallels.
    pub fn contract_edge(&self, e: EdgeId) -> Multigraph {
        let (u, v) = self.edges[e];
        let (a, b) = (u.min(v), u.max(v));
        let map = |w: VertexId| {
            if w == b {
                a
            } else if w > b {
                w - 1
            } else {
                w
            }
        };
        let edges: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(f, _)| f != e)
            .map(|(_, &(x, y))| (map(x), map(y)))
            .filter(|&(x, y)| x != y)
            .collect();
        Multigraph {
            n: self.n - 1,
            edges,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_range() {
        assert!(Multigraph::new(3, &[(0, 0)]).is_err());
        assert!(Multigraph::new(3, &[(0, 3)]).is_err());
        assert!(Multigraph::new(3, &[(0, 1), (1, 2), (2, 0)]).is_ok());
    }

    #[test]
    fn blow_up_multiplies_multiplicities() {
        let single = Multigraph::new(2, &[(0, 1)]).unwrap();
        let b = single.blow_up(2).unwrap();
        assert_eq!(b.vertex_count(), 4);
        assert_eq!(b.edge_count(), 4);
        // Copies of one vertex never become adjacent.
        assert!(b.edges().iter().all(|&(u, v)| u / 2 != v / 2));

        let digon = Multigraph::new(2, &[(0, 1), (0, 1)]).unwrap();
        let b = digon.blow_up(3).unwrap();
        assert_eq!(b.vertex_count(), 6);
        assert_eq!(b.edge_count(), 18);
    }

    #[test]
    fn blow_up_by_one_is_identity() {
        let g = Multigraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let b = g.blow_up(1).unwrap();
        assert_eq!(b.edges(), g.edges());
        assert_eq!(b.vertex_count(), g.vertex_count());
    }

    #[test]
    fn subdivide_counts() {
        let g = Multigraph::new(2, &[(0, 1)]).unwrap();
        let s = g.subdivide(&[2]).unwrap();
        assert_eq!(s.vertex_count(), 4);
        assert_eq!(s.edge_count(), 3);
        // Path 0 - 2 - 3 - 1.
        assert_eq!(s.edges(), &[(0, 2), (2, 3), (3, 1)]);

        let tri = Multigraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let hex = tri.subdivide_all(1);
        assert_eq!(hex.vertex_count(), 6);
        assert_eq!(hex.edge_count(), 6);
        let deg = hex.degrees();
        assert!(deg.iter().all(|&d| d == 2));
        assert!(hex.is_connected());
    }

    #[test]
    fn induced_keeps_ids() {
        let g = Multigraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 2)]).unwrap();
        let (h, ids) = g.induced(&[1, 2]);
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(ids, vec![1, 4]);
    }

    #[test]
    fn delete_and_contract() {
        let c4 = Multigraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let p4 = c4.delete_edge(3);
        assert_eq!(p4.edge_count(), 3);
        assert!(p4.is_connected());
        let c3 = c4.contract_edge(1);
        assert_eq!(c3.vertex_count(), 3);
        assert_eq!(c3.edge_count(), 3);
        // Contracting a digon edge leaves nothing but drops the loop.
        let digon = Multigraph::new(2, &[(0, 1), (1, 0)]).unwrap();
        let point = digon.contract_edge(0);
        assert_eq!(point.vertex_count(), 1);
        assert_eq!(point.edge_count(), 0);
        // Parallel edges to the merged pair stay parallel.
        let g = Multigraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let h = g.contract_edge(0);
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edges(), &[(0, 1), (0, 1)]);
    }

    #[test]
    fn simplified_dedupes() {
        let g = Multigraph::new(3, &[(1, 0), (0, 1), (1, 2)]).unwrap();
        let s = g.simplified();
        assert_eq!(s.edge_count(), 2);
        assert_eq!(s.edges(), &[(0, 1), (1, 2)]);
    }
}
