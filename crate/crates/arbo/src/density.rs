//! Subgraph density, Nash-Williams arboricity, forest partitions, and
//! orientations minimizing the maximum indegree.

use crate::budget::{Error, Result};
use crate::flow::{FlowNetwork, INF};
use crate::graph::{EdgeId, Multigraph, VertexId};
use num::rational::Ratio;
use num::Zero;

/// Which denominator a density maximizes over vertex sets `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Denominator {
    /// `e(A) / |A|` over nonempty `A`; the guide for indegrees.
    Vertices,
    /// `e(A) / (|A| - 1)` over `|A| >= 2`; the Nash-Williams ratio.
    VerticesLessOne,
}

/// A vertex set certifying a density value.
#[derive(Clone, Debug)]
pub struct DensityWitness {
    /// Ascending vertex ids; the canonical optimizer (fewest vertices,
    /// then lexicographically least).
    pub vertices: Vec<VertexId>,
    /// Edges with both endpoints inside.
    pub edge_count: usize,
    pub denominator: Denominator,
    pub value: Ratio<i64>,
}

impl DensityWitness {
    /// Recomputes the ratio from the graph and checks it matches.
    pub fn verify(&self, g: &Multigraph) -> Result<()> {
        let mut keep = vec![false; g.vertex_count()];
        for &v in &self.vertices {
            if v >= g.vertex_count() {
                return Err(Error::Precondition(format!("witness vertex {v} out of range")));
            }
            keep[v] = true;
        }
        let inside = g.edges_inside(&keep);
        if inside != self.edge_count {
            return Err(Error::Internal(format!(
                "witness announces {} edges, graph has {inside}",
                self.edge_count
            )));
        }
        let den = match self.denominator {
            Denominator::Vertices => self.vertices.len(),
            Denominator::VerticesLessOne => self.vertices.len().saturating_sub(1),
        };
        let value = if den == 0 {
            Ratio::zero()
        } else {
            Ratio::new(inside as i64, den as i64)
        };
        if value != self.value {
            return Err(Error::Internal(format!(
                "witness value {} does not match recomputed {value}",
                self.value
            )));
        }
        Ok(())
    }
}

/// Maximizer of `den * e(A) - num * |A|` over sets containing `force`,
/// as (value, inclusion-minimal optimizer). The network routes `den`
/// units per edge through its endpoints, which pay `num` each.
fn best_excess(
    g: &Multigraph,
    num: i64,
    den: i64,
    force: &[VertexId],
) -> (i64, Vec<VertexId>) {
    let n = g.vertex_count();
    let m = g.edge_count();
    let (s, t) = (0, 1);
    let vnode = |v: VertexId| 2 + v;
    let enode = |e: EdgeId| 2 + n + e;
    let mut net = FlowNetwork::new(2 + n + m);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        net.add_arc(s, enode(e), den);
        net.add_arc(enode(e), vnode(u), INF);
        net.add_arc(enode(e), vnode(v), INF);
    }
    for v in 0..n {
        net.add_arc(vnode(v), t, num);
    }
    for &v in force {
        net.add_arc(s, vnode(v), INF);
    }
    let flow = net.max_flow(s, t);
    let value = den * m as i64 - flow;
    let reach = net.residual_reachable(s);
    let set: Vec<VertexId> = (0..n).filter(|&v| reach[vnode(v)]).collect();
    (value, set)
}

fn ratio_of(g: &Multigraph, set: &[VertexId], denom: Denominator) -> Ratio<i64> {
    let mut keep = vec![false; g.vertex_count()];
    for &v in set {
        keep[v] = true;
    }
    let e = g.edges_inside(&keep) as i64;
    let d = match denom {
        Denominator::Vertices => set.len() as i64,
        Denominator::VerticesLessOne => set.len() as i64 - 1,
    };
    Ratio::new(e, d)
}

fn witness(g: &Multigraph, set: Vec<VertexId>, denom: Denominator, value: Ratio<i64>) -> DensityWitness {
    let mut keep = vec![false; g.vertex_count()];
    for &v in &set {
        keep[v] = true;
    }
    DensityWitness {
        edge_count: g.edges_inside(&keep),
        vertices: set,
        denominator: denom,
        value,
    }
}

fn better(a: &[VertexId], b: &[VertexId]) -> bool {
    (a.len(), a) < (b.len(), b)
}

/// Maximum of the chosen density over vertex sets, with the canonical
/// optimizer. Dinkelbach iteration: each round asks, via a minimum cut,
/// whether any set beats the current ratio, and jumps to the best
/// violator until none remains.
pub fn max_density(g: &Multigraph, denom: Denominator) -> Result<(Ratio<i64>, DensityWitness)> {
    match denom {
        Denominator::Vertices => max_density_per_vertex(g),
        Denominator::VerticesLessOne => max_density_nash_williams(g),
    }
}

fn max_density_per_vertex(g: &Multigraph) -> Result<(Ratio<i64>, DensityWitness)> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::Precondition("density of an empty graph".into()));
    }
    if g.edge_count() == 0 {
        let w = witness(g, vec![0], Denominator::Vertices, Ratio::zero());
        return Ok((Ratio::zero(), w));
    }
    let mut lambda = Ratio::new(g.edge_count() as i64, n as i64);
    loop {
        let (value, set) = best_excess(g, *lambda.numer(), *lambda.denom(), &[]);
        if value > 0 {
            lambda = ratio_of(g, &set, Denominator::Vertices);
            continue;
        }
        // No set beats lambda; collect the minimal tight set through
        // each vertex and keep the canonical one.
        let mut best: Option<Vec<VertexId>> = None;
        for v in 0..n {
            let (value, set) = best_excess(g, *lambda.numer(), *lambda.denom(), &[v]);
            if value == 0 && best.as_deref().map_or(true, |b| better(&set, b)) {
                best = Some(set);
            }
        }
        let set = best.ok_or_else(|| Error::Internal("no tight density witness".into()))?;
        return Ok((lambda, witness(g, set, Denominator::Vertices, lambda)));
    }
}

fn max_density_nash_williams(g: &Multigraph) -> Result<(Ratio<i64>, DensityWitness)> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::Precondition(
            "per-(vertices - 1) density needs two vertices".into(),
        ));
    }
    if g.edge_count() == 0 {
        return Err(Error::Precondition(
            "per-(vertices - 1) density needs an edge".into(),
        ));
    }
    // Distinct endpoint pairs; any optimizer spans at least one edge.
    let mut pairs: Vec<(VertexId, VertexId)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();

    let mut lambda = Ratio::new(g.edge_count() as i64, n as i64 - 1);
    loop {
        // Excess against |A| - 1 equals -num exactly when A is tight.
        let threshold = -*lambda.numer();
        let mut best_val = i64::MIN;
        let mut best_set: Option<Vec<VertexId>> = None;
        for &(u, v) in &pairs {
            let (value, set) = best_excess(g, *lambda.numer(), *lambda.denom(), &[u, v]);
            if value > best_val || (value == best_val
                && best_set.as_deref().map_or(true, |b| better(&set, b)))
            {
                best_val = value;
                best_set = Some(set);
            }
        }
        let set = best_set.ok_or_else(|| Error::Internal("forced cut produced no set".into()))?;
        if best_val > threshold {
            lambda = ratio_of(g, &set, Denominator::VerticesLessOne);
            continue;
        }
        debug_assert_eq!(best_val, threshold);
        return Ok((lambda, witness(g, set, Denominator::VerticesLessOne, lambda)));
    }
}

/// Nash-Williams arboricity: the ceiling of the maximum of
/// `e(A) / (|A| - 1)`, which also equals the least number of forests
/// covering the edge set. Edgeless graphs get 0 and an empty witness.
pub fn arboricity(g: &Multigraph) -> Result<(u32, DensityWitness)> {
    if g.edge_count() == 0 {
        return Ok((
            0,
            DensityWitness {
                vertices: Vec::new(),
                edge_count: 0,
                denominator: Denominator::VerticesLessOne,
                value: Ratio::zero(),
            },
        ));
    }
    let (value, w) = max_density(g, Denominator::VerticesLessOne)?;
    let arb = value.ceil().to_integer();
    Ok((arb as u32, w))
}

/// Greedily homes every edge into one of `k` forests via augmenting
/// exchange chains; `home[e]` is the forest of edge `e`, or `None` if
/// the chains ran out before `e` could be placed. Chains are shortest
/// first, which keeps every exchange feasible.
pub(crate) fn pack_forests(g: &Multigraph, k: usize) -> Vec<Option<usize>> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut home: Vec<Option<usize>> = vec![None; m];

    // Forest path between a and b, as edge ids, or None if disconnected.
    let forest_path = |home: &[Option<usize>], i: usize, a: VertexId, b: VertexId| -> Option<Vec<EdgeId>> {
        let mut adj: Vec<Vec<(EdgeId, VertexId)>> = vec![Vec::new(); n];
        for e in 0..m {
            if home[e] == Some(i) {
                let (u, v) = g.endpoints(e);
                adj[u].push((e, v));
                adj[v].push((e, u));
            }
        }
        let mut pred: Vec<Option<(EdgeId, VertexId)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[a] = true;
        let mut queue = std::collections::VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            if u == b {
                let mut path = Vec::new();
                let mut at = b;
                while at != a {
                    let (e, p) = pred[at].unwrap();
                    path.push(e);
                    at = p;
                }
                return Some(path);
            }
            for &(e, w) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    pred[w] = Some((e, u));
                    queue.push_back(w);
                }
            }
        }
        None
    };

    'edges: for e0 in 0..m {
        // Breadth-first exchange search: an entry means the edge wants a
        // new forest; pred[x] = (y, i) records that y may enter forest i
        // once x leaves it.
        let mut pred: Vec<Option<(EdgeId, usize)>> = vec![None; m];
        let mut labeled = vec![false; m];
        labeled[e0] = true;
        let mut queue = std::collections::VecDeque::from([e0]);
        while let Some(x) = queue.pop_front() {
            let (a, b) = g.endpoints(x);
            for i in 0..k {
                match forest_path(&home, i, a, b) {
                    None => {
                        // x fits in forest i; replay the chain backwards.
                        let mut edge = x;
                        let mut forest = i;
                        loop {
                            let prev = pred[edge];
                            debug_assert!(edge == e0 || prev.is_some());
                            home[edge] = Some(forest);
                            match prev {
                                None => break,
                                Some((y, j)) => {
                                    forest = j;
                                    edge = y;
                                }
                            }
                        }
                        debug_assert!(forests_acyclic(g, &home, k));
                        continue 'edges;
                    }
                    Some(path) => {
                        for y in path {
                            if !labeled[y] {
                                labeled[y] = true;
                                pred[y] = Some((x, i));
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        // e0 is unplaceable; later edges only shrink the room, so it
        // stays unplaced.
    }
    home
}

fn forests_acyclic(g: &Multigraph, home: &[Option<usize>], k: usize) -> bool {
    for i in 0..k {
        let mut dsu: Vec<usize> = (0..g.vertex_count()).collect();
        fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
            if dsu[x] != x {
                let r = find(dsu, dsu[x]);
                dsu[x] = r;
            }
            dsu[x]
        }
        for e in 0..g.edge_count() {
            if home[e] == Some(i) {
                let (u, v) = g.endpoints(e);
                let (ru, rv) = (find(&mut dsu, u), find(&mut dsu, v));
                if ru == rv {
                    return false;
                }
                dsu[ru] = rv;
            }
        }
    }
    true
}

/// Partitions the edge set into at most `k` forests, or returns `None`
/// if no such partition exists.
pub fn forest_partition(g: &Multigraph, k: usize) -> Option<Vec<Vec<EdgeId>>> {
    let home = pack_forests(g, k);
    if home.iter().any(|h| h.is_none()) {
        return None;
    }
    let mut forests = vec![Vec::new(); k];
    for (e, h) in home.iter().enumerate() {
        forests[h.unwrap()].push(e);
    }
    Some(forests)
}

/// An orientation of a multigraph: `arcs[e]` is edge `e` as
/// (tail, head), one of the two directions of the underlying edge.
#[derive(Clone, Debug)]
pub struct Orientation {
    pub vertex_count: usize,
    pub arcs: Vec<(VertexId, VertexId)>,
}

impl Orientation {
    pub fn indegrees(&self) -> Vec<usize> {
        let mut indeg = vec![0; self.vertex_count];
        for &(_, h) in &self.arcs {
            indeg[h] += 1;
        }
        indeg
    }

    pub fn max_indegree(&self) -> usize {
        self.indegrees().into_iter().max().unwrap_or(0)
    }

    /// Checks that the arcs really orient `g`, edge by edge.
    pub fn verify(&self, g: &Multigraph) -> Result<()> {
        if self.vertex_count != g.vertex_count() || self.arcs.len() != g.edge_count() {
            return Err(Error::Precondition("orientation shape mismatch".into()));
        }
        for (e, &(tail, head)) in self.arcs.iter().enumerate() {
            let (u, v) = g.endpoints(e);
            if (tail, head) != (u, v) && (tail, head) != (v, u) {
                return Err(Error::Precondition(format!(
                    "arc {e} does not orient its edge"
                )));
            }
        }
        Ok(())
    }
}

/// Orients every edge so the maximum indegree is least possible; the
/// optimum equals the ceiling of the maximum of `e(A) / |A|`.
///
/// Local search: while some vertex carries the maximum indegree, look
/// for a directed path into it from a vertex at least two below, and
/// reverse the path. When no such path exists from any maximal vertex,
/// the vertices that can reach a maximal one form a set too dense for
/// any orientation to do better.
pub fn min_indegree_orientation(g: &Multigraph) -> Orientation {
    let n = g.vertex_count();
    let mut arcs: Vec<(VertexId, VertexId)> = g.edges().to_vec();
    let mut indeg = vec![0usize; n];
    for &(_, h) in &arcs {
        indeg[h] += 1;
    }
    'improve: loop {
        let delta = indeg.iter().copied().max().unwrap_or(0);
        if delta <= 1 {
            break;
        }
        for t in 0..n {
            if indeg[t] != delta {
                continue;
            }
            // Backward search along arcs into the frontier.
            let mut parent: Vec<Option<EdgeId>> = vec![None; n];
            let mut seen = vec![false; n];
            seen[t] = true;
            let mut queue = std::collections::VecDeque::from([t]);
            while let Some(b) = queue.pop_front() {
                for (e, &(tail, head)) in arcs.iter().enumerate() {
                    if head == b && !seen[tail] {
                        seen[tail] = true;
                        parent[tail] = Some(e);
                        if indeg[tail] <= delta - 2 {
                            // Reverse the path tail -> ... -> t.
                            let mut at = tail;
                            indeg[tail] += 1;
                            indeg[t] -= 1;
                            while let Some(e) = parent[at] {
                                let (a, b) = arcs[e];
                                arcs[e] = (b, a);
                                at = b;
                            }
                            continue 'improve;
                        }
                        queue.push_back(tail);
                    }
                }
            }
        }
        break;
    }
    Orientation {
        vertex_count: n,
        arcs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use proptest::prelude::*;

    fn density_pair(g: &Multigraph, d: Denominator) -> Ratio<i64> {
        let (v, w) = max_density(g, d).unwrap();
        w.verify(g).unwrap();
        assert_eq!(w.value, v);
        v
    }

    #[test]
    fn per_vertex_densities() {
        assert_eq!(density_pair(&gen::clique(4).unwrap(), Denominator::Vertices), Ratio::new(3, 2));
        assert_eq!(density_pair(&gen::cycle(5).unwrap(), Denominator::Vertices), Ratio::new(1, 1));
        assert_eq!(density_pair(&gen::cycle(2).unwrap(), Denominator::Vertices), Ratio::new(1, 1));
        assert_eq!(
            density_pair(&gen::multicycle(3, 2).unwrap(), Denominator::Vertices),
            Ratio::new(2, 1)
        );
        assert_eq!(density_pair(&gen::path(4).unwrap(), Denominator::Vertices), Ratio::new(3, 4));
        assert_eq!(
            density_pair(&gen::tree_closure(2, 3).unwrap(), Denominator::Vertices),
            Ratio::new(10, 7)
        );
    }

    #[test]
    fn nash_williams_densities() {
        assert_eq!(
            density_pair(&gen::clique(4).unwrap(), Denominator::VerticesLessOne),
            Ratio::new(2, 1)
        );
        assert_eq!(
            density_pair(&gen::cycle(5).unwrap(), Denominator::VerticesLessOne),
            Ratio::new(5, 4)
        );
        assert_eq!(
            density_pair(&gen::cycle(2).unwrap(), Denominator::VerticesLessOne),
            Ratio::new(2, 1)
        );
        assert_eq!(
            density_pair(&gen::multicycle(3, 2).unwrap(), Denominator::VerticesLessOne),
            Ratio::new(3, 1)
        );
    }

    #[test]
    fn dense_kernel_is_found_inside_sparse_padding() {
        // A triangle with a long pendant path; the witness is the triangle.
        let g = Multigraph::new(
            6,
            &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)],
        )
        .unwrap();
        let (v, w) = max_density(&g, Denominator::Vertices).unwrap();
        assert_eq!(v, Ratio::new(1, 1));
        assert_eq!(w.vertices, vec![0, 1, 2]);
    }

    #[test]
    fn witness_is_canonical_among_ties() {
        // Two disjoint triangles; both are optimal, the first wins.
        let g = Multigraph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let (v, w) = max_density(&g, Denominator::Vertices).unwrap();
        assert_eq!(v, Ratio::new(1, 1));
        assert_eq!(w.vertices, vec![0, 1, 2]);
    }

    #[test]
    fn arboricity_values() {
        assert_eq!(arboricity(&gen::path(5).unwrap()).unwrap().0, 1);
        assert_eq!(arboricity(&gen::cycle(5).unwrap()).unwrap().0, 2);
        assert_eq!(arboricity(&gen::cycle(2).unwrap()).unwrap().0, 2);
        assert_eq!(arboricity(&gen::clique(4).unwrap()).unwrap().0, 2);
        assert_eq!(arboricity(&gen::clique(5).unwrap()).unwrap().0, 3);
        assert_eq!(arboricity(&gen::multicycle(3, 2).unwrap()).unwrap().0, 3);
        assert_eq!(arboricity(&gen::theta(4, 1).unwrap()).unwrap().0, 4);
        let empty = Multigraph::new(3, &[]).unwrap();
        assert_eq!(arboricity(&empty).unwrap().0, 0);
    }

    #[test]
    fn forest_partitions_match_arboricity() {
        let k4 = gen::clique(4).unwrap();
        assert!(forest_partition(&k4, 1).is_none());
        let forests = forest_partition(&k4, 2).unwrap();
        assert_eq!(forests.iter().map(|f| f.len()).sum::<usize>(), 6);
        assert_eq!(forests.len(), 2);

        let c4 = gen::cycle(4).unwrap();
        assert!(forest_partition(&c4, 1).is_none());
        assert!(forest_partition(&c4, 2).is_some());

        let m32 = gen::multicycle(3, 2).unwrap();
        assert!(forest_partition(&m32, 2).is_none());
        assert!(forest_partition(&m32, 3).is_some());

        let empty = Multigraph::new(2, &[]).unwrap();
        assert_eq!(forest_partition(&empty, 0), Some(Vec::new()));
    }

    #[test]
    fn orientations_hit_the_density_bound() {
        let cases = [
            (gen::cycle(5).unwrap(), 1),
            (gen::cycle(2).unwrap(), 1),
            (gen::clique(4).unwrap(), 2),
            (gen::multicycle(3, 2).unwrap(), 2),
            (gen::star(3).unwrap(), 1),
            (gen::tree_closure(2, 3).unwrap(), 2),
        ];
        for (g, want) in cases {
            let o = min_indegree_orientation(&g);
            o.verify(&g).unwrap();
            assert_eq!(o.max_indegree(), want, "graph {g:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn random_graphs_are_consistent(n in 2usize..6, m in 0usize..10, seed in 0u64..500) {
            let g = gen::random_multigraph(n, m, seed).unwrap();
            let (arb, w) = arboricity(&g).unwrap();
            if m > 0 {
                w.verify(&g).unwrap();
            }
            // Arboricity is the least k admitting a forest partition.
            prop_assert!(forest_partition(&g, arb as usize).is_some());
            if arb > 0 {
                prop_assert!(forest_partition(&g, arb as usize - 1).is_none());
            }
            // Orientations match the per-vertex density ceiling.
            let (dv, _) = max_density(&g, Denominator::Vertices).unwrap();
            let o = min_indegree_orientation(&g);
            o.verify(&g).unwrap();
            prop_assert_eq!(o.max_indegree() as i64, dv.ceil().to_integer());
        }
    }
}
