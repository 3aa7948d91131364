//! Cycle enumeration and block (2-connected component) decomposition.

use crate::budget::{Budget, Error, Meter, Result};
use crate::graph::{EdgeId, Multigraph, VertexId};

/// A cycle in a multigraph: `edges[i]` joins `vertices[i]` and
/// `vertices[(i + 1) % len]`. Always stored in canonical form, so equal
/// cycles compare equal. Length 2 means a pair of parallel edges.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<VertexId>,
}

impl std::fmt::Debug for Cycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cycle(edges={:?}, vertices={:?})", self.edges, self.vertices)
    }
}

impl Cycle {
    /// Canonicalizes a traversal: among the two directions and all
    /// rotations, keep the one whose edge sequence is lexicographically
    /// least (so the smallest edge id comes first).
    pub fn canonical(edges: Vec<EdgeId>, vertices: Vec<VertexId>) -> Cycle {
        assert_eq!(edges.len(), vertices.len());
        assert!(edges.len() >= 2, "cycles have at least two edges");
        let fwd = orient_min_first(&edges, &vertices);
        // Reversed traversal from the same starting vertex; alignment is
        // preserved: reversed edge i joins reversed vertices i and i+1.
        let redges: Vec<EdgeId> = edges.iter().rev().copied().collect();
        let mut rverts = vec![vertices[0]];
        rverts.extend(vertices[1..].iter().rev().copied());
        let bwd = orient_min_first(&redges, &rverts);
        if fwd.0 <= bwd.0 {
            Cycle {
                edges: fwd.0,
                vertices: fwd.1,
            }
        } else {
            Cycle {
                edges: bwd.0,
                vertices: bwd.1,
            }
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Checks distinctness and the edge/vertex alignment against a host.
    pub fn validate(&self, g: &Multigraph) -> Result<()> {
        let k = self.len();
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k {
            return Err(Error::Precondition("cycle repeats an edge".into()));
        }
        let mut vs = self.vertices.clone();
        vs.sort_unstable();
        vs.dedup();
        if vs.len() != k {
            return Err(Error::Precondition("cycle repeats a vertex".into()));
        }
        for i in 0..k {
            let (u, v) = g.endpoints(self.edges[i]);
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % k]);
            if (u, v) != (a, b) && (v, u) != (a, b) {
                return Err(Error::Precondition(format!(
                    "edge {} does not join cycle vertices {} and {}",
                    self.edges[i], a, b
                )));
            }
        }
        Ok(())
    }
}

fn orient_min_first(edges: &[EdgeId], vertices: &[VertexId]) -> (Vec<EdgeId>, Vec<VertexId>) {
    let pos = edges
        .iter()
        .enumerate()
        .min_by_key(|&(_, &e)| e)
        .map(|(i, _)| i)
        .unwrap();
    let mut es = edges.to_vec();
    let mut vs = vertices.to_vec();
    es.rotate_left(pos);
    vs.rotate_left(pos);
    (es, vs)
}

struct CycleSearch {
    inc: Vec<Vec<(EdgeId, VertexId)>>,
    max_len: usize,
    out: Vec<Cycle>,
    nodes: Meter,
    cycles: Meter,
}

impl CycleSearch {
    /// Extends a path that started along pivot edge `e0 = (u0, v0)` and
    /// currently ends at `at`; `on_path` marks used vertices, u0 included.
    /// Only edges with ids above the pivot may be used, so each cycle is
    /// produced exactly once: removing its smallest edge leaves a single
    /// path between that edge's endpoints.
    fn extend(
        &mut self,
        e0: EdgeId,
        u0: VertexId,
        at: VertexId,
        on_path: &mut Vec<bool>,
        path_edges: &mut Vec<EdgeId>,
        path_verts: &mut Vec<VertexId>,
    ) -> Result<()> {
        self.nodes.tick()?;
        for i in 0..self.inc[at].len() {
            let (f, w) = self.inc[at][i];
            if f <= e0 {
                continue;
            }
            if w == u0 {
                self.cycles.tick()?;
                let mut edges = vec![e0];
                edges.extend(path_edges.iter().copied());
                edges.push(f);
                let mut verts = vec![u0];
                verts.extend(path_verts.iter().copied());
                self.out.push(Cycle::canonical(edges, verts));
                continue;
            }
            if on_path[w] || path_edges.len() + 3 > self.max_len {
                continue;
            }
            on_path[w] = true;
            path_edges.push(f);
            path_verts.push(w);
            self.extend(e0, u0, w, on_path, path_edges, path_verts)?;
            path_verts.pop();
            path_edges.pop();
            on_path[w] = false;
        }
        Ok(())
    }
}

/// Enumerates every cycle of length at most `max_len` (all cycles if
/// `None`), each exactly once, in canonical form. Output is sorted.
pub fn enumerate_cycles(
    g: &Multigraph,
    max_len: Option<usize>,
    budget: &Budget,
) -> Result<Vec<Cycle>> {
    let max_len = max_len.unwrap_or(g.vertex_count().max(2));
    if max_len < 2 {
        return Ok(Vec::new());
    }
    let mut search = CycleSearch {
        inc: g.incidence(),
        max_len,
        out: Vec::new(),
        nodes: Meter::new(budget.max_search_nodes, "cycle search nodes"),
        cycles: Meter::new(budget.max_cycles as u64, "enumerated cycles"),
    };
    for e0 in 0..g.edge_count() {
        let (u0, v0) = g.endpoints(e0);
        let mut on_path = vec![false; g.vertex_count()];
        on_path[u0] = true;
        on_path[v0] = true;
        let mut path_edges = Vec::new();
        let mut path_verts = vec![v0];
        search.extend(e0, u0, v0, &mut on_path, &mut path_edges, &mut path_verts)?;
    }
    search.out.sort();
    debug_assert!(search.out.windows(2).all(|w| w[0] != w[1]));
    debug_assert!(search.out.iter().all(|c| c.validate(g).is_ok()));
    Ok(search.out)
}

/// A longest cycle, or `None` for forests.
pub fn longest_cycle(g: &Multigraph, budget: &Budget) -> Result<Option<Cycle>> {
    let all = enumerate_cycles(g, None, budget)?;
    Ok(all.into_iter().max_by_key(|c| c.len()))
}

/// A block of a multigraph: a maximal 2-connected subgraph or a bridge.
/// Parallel edges share a block (a digon is 2-connected).
#[derive(Clone, Debug)]
pub struct Block {
    /// Original vertex ids, ascending; `graph` vertex `i` is `vertices[i]`.
    pub vertices: Vec<VertexId>,
    /// Original edge ids, ascending; `graph` edge `i` is `edges[i]`.
    pub edges: Vec<EdgeId>,
    pub graph: Multigraph,
}

/// Splits a multigraph into blocks via depth-first lowpoints. Isolated
/// vertices belong to no block.
pub fn blocks(g: &Multigraph) -> Vec<Block> {
    let n = g.vertex_count();
    let inc = g.incidence();
    let mut depth = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut out = Vec::new();

    // Frame: (vertex, incidence cursor, entry edge, edge-stack size just
    // before the entry edge was pushed). Each non-tree edge is pushed
    // from its deeper endpoint exactly once.
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        low[root] = 0;
        let mut stack: Vec<(VertexId, usize, Option<EdgeId>, usize)> = vec![(root, 0, None, 0)];
        while !stack.is_empty() {
            let top = stack.len() - 1;
            let (u, cursor, entry, _) = stack[top];
            if cursor < inc[u].len() {
                stack[top].1 += 1;
                let (f, w) = inc[u][cursor];
                if Some(f) == entry {
                    continue;
                }
                if depth[w] == usize::MAX {
                    let base = edge_stack.len();
                    edge_stack.push(f);
                    depth[w] = depth[u] + 1;
                    low[w] = depth[w];
                    stack.push((w, 0, Some(f), base));
                } else if depth[w] < depth[u] {
                    edge_stack.push(f);
                    low[u] = low[u].min(depth[w]);
                }
            } else {
                let (_, _, _, base) = stack.pop().unwrap();
                if let Some(&(p, _, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= depth[p] {
                        // u's subtree plus the tree edge p-u close a block.
                        out.push(make_block(g, edge_stack.split_off(base)));
                    }
                }
            }
        }
        debug_assert!(edge_stack.is_empty());
    }
    out.sort_by(|a, b| a.edges.cmp(&b.edges));
    out
}

fn make_block(g: &Multigraph, mut edge_ids: Vec<EdgeId>) -> Block {
    edge_ids.sort_unstable();
    let mut vs: Vec<VertexId> = edge_ids
        .iter()
        .flat_map(|&e| {
            let (u, v) = g.endpoints(e);
            [u, v]
        })
        .collect();
    vs.sort_unstable();
    vs.dedup();
    let mut local = std::collections::BTreeMap::new();
    for (i, &v) in vs.iter().enumerate() {
        local.insert(v, i);
    }
    let edges: Vec<_> = edge_ids
        .iter()
        .map(|&e| {
            let (u, v) = g.endpoints(e);
            (local[&u], local[&v])
        })
        .collect();
    Block {
        vertices: vs,
        edges: edge_ids,
        graph: Multigraph::new(local.len(), &edges).expect("block edges are valid"),
    }
}

/// 2-connected here means: connected, at least two edges, and a single
/// block covering the whole vertex set. The digon qualifies; a lone
/// bridge does not.
pub fn is_two_connected(g: &Multigraph) -> bool {
    if !g.is_connected() || g.edge_count() < 2 {
        return false;
    }
    let bs = blocks(g);
    bs.len() == 1 && bs[0].vertices.len() == g.vertex_count()
}
