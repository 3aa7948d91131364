//! Exact tree-depth, and the depth-first cycle family tying tree-depth
//! to the longest cycle in a 2-connected graph.

use crate::budget::{Budget, Error, Result};
use crate::cycles::{is_two_connected, longest_cycle, Cycle};
use crate::graph::{EdgeId, Multigraph, VertexId};
use std::collections::BTreeSet;
use std::collections::HashMap;

/// Ceiling of the base-2 logarithm; 0 for inputs 0 and 1.
pub fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// A rooted forest whose ancestor closure contains the graph. Tree-depth
/// is the least possible height (vertices per root-to-leaf chain).
#[derive(Clone, Debug)]
pub struct TdDecomposition {
    /// Forest parent of each vertex; roots carry `None`.
    pub parent: Vec<Option<VertexId>>,
    pub height: usize,
}

impl TdDecomposition {
    /// Depth of each vertex, root depth 1; errors if parents cycle.
    pub fn depths(&self) -> Result<Vec<usize>> {
        let n = self.parent.len();
        let mut depth = vec![0usize; n];
        for v in 0..n {
            let mut chain = Vec::new();
            let mut at = v;
            while depth[at] == 0 {
                chain.push(at);
                match self.parent[at] {
                    None => {
                        depth[at] = 1;
                        chain.pop();
                        break;
                    }
                    Some(p) => {
                        if chain.len() > n {
                            return Err(Error::Precondition("parent pointers cycle".into()));
                        }
                        at = p;
                    }
                }
            }
            for &x in chain.iter().rev() {
                depth[x] = depth[self.parent[x].unwrap()] + 1;
            }
        }
        Ok(depth)
    }

    /// Checks the forest really witnesses its height for `g`: every
    /// edge joins an ancestor-descendant pair and the deepest chain
    /// has `height` vertices.
    pub fn verify(&self, g: &Multigraph) -> Result<()> {
        if self.parent.len() != g.vertex_count() {
            return Err(Error::Precondition("decomposition size mismatch".into()));
        }
        let depth = self.depths()?;
        let max = depth.iter().copied().max().unwrap_or(0);
        if max != self.height {
            return Err(Error::Internal(format!(
                "announced height {} but deepest chain has {max}",
                self.height
            )));
        }
        let ancestor = |mut x: VertexId, y: VertexId| {
            loop {
                if x == y {
                    return true;
                }
                match self.parent[x] {
                    Some(p) => x = p,
                    None => return false,
                }
            }
        };
        for &(u, v) in g.edges() {
            if !ancestor(u, v) && !ancestor(v, u) {
                return Err(Error::Internal(format!(
                    "edge ({u}, {v}) joins incomparable vertices"
                )));
            }
        }
        Ok(())
    }
}

struct TdSolver {
    adj: Vec<u64>,
    /// mask -> (tree-depth, chosen root, or `u8::MAX` when the subgraph
    /// splits into components).
    memo: HashMap<u64, (u8, u8)>,
}

impl TdSolver {
    fn components(&self, mask: u64) -> Vec<u64> {
        let mut rest = mask;
        let mut comps = Vec::new();
        while rest != 0 {
            let seed = rest & rest.wrapping_neg();
            let mut comp = seed;
            loop {
                let mut grown = comp;
                let mut bits = comp;
                while bits != 0 {
                    let v = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    grown |= self.adj[v] & mask;
                }
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            comps.push(comp);
            rest &= !comp;
        }
        comps
    }

    fn solve(&mut self, mask: u64) -> u8 {
        debug_assert_ne!(mask, 0);
        if let Some(&(v, _)) = self.memo.get(&mask) {
            return v;
        }
        if mask.count_ones() == 1 {
            let v = mask.trailing_zeros() as u8;
            self.memo.insert(mask, (1, v));
            return 1;
        }
        let comps = self.components(mask);
        let entry = if comps.len() > 1 {
            let best = comps.into_iter().map(|c| self.solve(c)).max().unwrap();
            (best, u8::MAX)
        } else {
            let mut best = u8::MAX;
            let mut root = 0u8;
            let mut bits = mask;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let t = 1 + self.solve(mask & !(1u64 << v));
                if t < best {
                    best = t;
                    root = v as u8;
                }
            }
            (best, root)
        };
        self.memo.insert(mask, entry);
        entry.0
    }

    fn build(&self, mask: u64, anchor: Option<VertexId>, parent: &mut [Option<VertexId>]) {
        let &(_, root) = self.memo.get(&mask).expect("solved before building");
        if root == u8::MAX {
            for comp in self.components(mask) {
                self.build(comp, anchor, parent);
            }
            return;
        }
        let r = root as usize;
        parent[r] = anchor;
        let rest = mask & !(1u64 << r);
        if rest != 0 {
            self.build(rest, Some(r), parent);
        }
    }
}

/// Exact tree-depth with a witnessing elimination forest, by memoized
/// search over vertex subsets: a connected graph roots at the vertex
/// minimizing the depth of the rest, components split independently.
pub fn treedepth_exact(g: &Multigraph, budget: &Budget) -> Result<(usize, TdDecomposition)> {
    let n = g.vertex_count();
    if n > budget.max_td_vertices || n > 60 {
        return Err(Error::Budget(format!(
            "exact tree-depth over {n} vertices exceeds the cap of {}",
            budget.max_td_vertices.min(60)
        )));
    }
    if n == 0 {
        return Ok((
            0,
            TdDecomposition {
                parent: Vec::new(),
                height: 0,
            },
        ));
    }
    let mut adj = vec![0u64; n];
    for &(u, v) in g.simplified().edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut solver = TdSolver {
        adj,
        memo: HashMap::new(),
    };
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let value = solver.solve(full) as usize;
    let mut parent = vec![None; n];
    solver.build(full, None, &mut parent);
    let decomp = TdDecomposition {
        parent,
        height: value,
    };
    decomp.verify(g)?;
    Ok((value, decomp))
}

/// The cycle family the depth-first construction extracts from a
/// 2-connected graph: fundamental cycles whose symmetric difference is
/// again a cycle, double-covering the deep tree path.
#[derive(Clone, Debug)]
pub struct CycleFamily {
    /// Fundamental cycles of the chosen cotree edges.
    pub fundamental: Vec<Cycle>,
    /// Their symmetric difference, a single cycle.
    pub symmetric_difference: Cycle,
    /// Number of vertices on the deep root-to-leaf tree path.
    pub tree_path_length: usize,
    /// The deep path itself, root first.
    pub path: Vec<VertexId>,
    /// The chosen cotree edge for each fundamental cycle.
    pub cotree: Vec<EdgeId>,
}

/// Runs the depth-first construction: grow a DFS tree from vertex 0
/// (neighbours in ascending order), take a deepest root-to-leaf path,
/// then walk low-points down the path; each step contributes a cotree
/// edge whose fundamental cycle covers a stretch of the path. Verifies
/// the double-cover identity: every edge of the path and every chosen
/// cotree edge lies on exactly two of the k + 1 cycles.
pub fn dfs_cycle_family(g: &Multigraph) -> Result<CycleFamily> {
    if !is_two_connected(g) {
        return Err(Error::Precondition(
            "cycle family needs a 2-connected graph".into(),
        ));
    }
    let n = g.vertex_count();
    let mut inc = g.incidence();
    for l in &mut inc {
        l.sort_by_key(|&(e, w)| (w, e));
    }

    // Iterative DFS from 0; children in ascending (vertex, edge) order.
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; n];
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut level = vec![0usize; n]; // root level 1
    let mut tin = vec![usize::MAX; n];
    let mut tout = vec![0usize; n];
    let mut clock = 0;
    let mut stack: Vec<(VertexId, usize)> = vec![(0, 0)];
    tin[0] = clock;
    clock += 1;
    level[0] = 1;
    let mut tree_edges = vec![false; g.edge_count()];
    while let Some(&(u, cursor)) = stack.last() {
        if cursor < inc[u].len() {
            stack.last_mut().unwrap().1 += 1;
            let (e, w) = inc[u][cursor];
            if tin[w] == usize::MAX {
                tree_edges[e] = true;
                parent_edge[w] = Some(e);
                parent[w] = Some(u);
                level[w] = level[u] + 1;
                tin[w] = clock;
                clock += 1;
                stack.push((w, 0));
            }
        } else {
            tout[u] = clock;
            clock += 1;
            stack.pop();
        }
    }
    let is_ancestor =
        |a: VertexId, d: VertexId| tin[a] <= tin[d] && tout[d] <= tout[a];

    // Deepest leaf, first-visited on ties; P = tree path root..leaf.
    let leaf = (0..n)
        .max_by_key(|&v| (level[v], usize::MAX - tin[v]))
        .unwrap();
    let h = level[leaf];
    let mut path = vec![leaf];
    while let Some(p) = parent[*path.last().unwrap()] {
        path.push(p);
    }
    path.reverse();
    debug_assert_eq!(path.len(), h);

    // Cotree edges, stored as (ancestor endpoint, descendant endpoint).
    let mut cotree_edges: Vec<(EdgeId, VertexId, VertexId)> = Vec::new();
    for e in 0..g.edge_count() {
        if tree_edges[e] {
            continue;
        }
        let (u, v) = g.endpoints(e);
        let (a, d) = if is_ancestor(u, v) { (u, v) } else { (v, u) };
        if !is_ancestor(a, d) {
            return Err(Error::Internal("depth-first search produced a cross edge".into()));
        }
        cotree_edges.push((e, a, d));
    }

    // low(x): the shallowest vertex adjacent through a cotree edge into
    // the subtree of x. Levels of path vertices equal their positions.
    let low_level = |x: VertexId| -> Option<usize> {
        cotree_edges
            .iter()
            .filter(|&&(_, _, d)| is_ancestor(x, d))
            .map(|&(_, a, _)| level[a])
            .min()
    };

    // Walk the path: position indices are 1-based levels.
    let mut a_positions = vec![h];
    let mut b_positions = Vec::new();
    {
        let x = path[h - 1];
        let b = low_level(x)
            .ok_or_else(|| Error::Internal("no cotree edge above the deep leaf".into()))?;
        if b >= h {
            return Err(Error::Internal("low point not a proper ancestor".into()));
        }
        b_positions.push(b);
    }
    while *b_positions.last().unwrap() != 1 {
        let (bi, ai) = (*b_positions.last().unwrap(), *a_positions.last().unwrap());
        // Minimum low over path vertices strictly between, earliest
        // position on ties.
        let mut best: Option<(usize, usize)> = None;
        for pos in bi + 1..ai {
            let x = path[pos - 1];
            if let Some(l) = low_level(x) {
                if best.map_or(true, |(bl, _)| l < bl) {
                    best = Some((l, pos));
                }
            }
        }
        let (l, pos) = best.ok_or_else(|| {
            Error::Internal("no low point between positions; graph not 2-connected?".into())
        })?;
        if l >= bi {
            return Err(Error::Internal(
                "low points failed to descend; graph not 2-connected?".into(),
            ));
        }
        b_positions.push(l);
        a_positions.push(pos);
    }
    let k = a_positions.len();

    // Chosen cotree edge per step: from the subtree of the a-vertex to
    // the b-vertex; least descendant endpoint, then least edge id.
    let mut chosen: Vec<EdgeId> = Vec::new();
    for i in 0..k {
        let va = path[a_positions[i] - 1];
        let vb = path[b_positions[i] - 1];
        let e = cotree_edges
            .iter()
            .filter(|&&(_, a, d)| a == vb && is_ancestor(va, d))
            .min_by_key(|&&(e, _, d)| (d, e))
            .map(|&(e, _, _)| e)
            .ok_or_else(|| Error::Internal("no cotree edge realizes the low point".into()))?;
        chosen.push(e);
    }

    // Fundamental cycles: tree path from the b-vertex down to the
    // cotree edge's descendant endpoint, closed by the cotree edge.
    let mut fundamental = Vec::new();
    for &e in &chosen {
        let (u, v) = g.endpoints(e);
        let (top, bottom) = if is_ancestor(u, v) { (u, v) } else { (v, u) };
        let mut verts = vec![bottom];
        let mut edges = Vec::new();
        let mut at = bottom;
        while at != top {
            edges.push(parent_edge[at].unwrap());
            at = parent[at].unwrap();
            verts.push(at);
        }
        verts.reverse();
        edges.reverse();
        edges.push(e);
        let c = Cycle::canonical(edges, verts);
        c.validate(g)?;
        fundamental.push(c);
    }

    // Symmetric difference of the edge sets must be a single cycle.
    let mut odd: BTreeSet<EdgeId> = BTreeSet::new();
    for c in &fundamental {
        for &e in &c.edges {
            if !odd.insert(e) {
                odd.remove(&e);
            }
        }
    }
    let gamma = trace_single_cycle(g, &odd)?;

    // Double cover: each path edge and chosen cotree edge lies on
    // exactly two of the k + 1 cycles.
    let mut must_cover: Vec<EdgeId> = chosen.clone();
    for w in path.windows(2) {
        must_cover.push(parent_edge[w[1]].unwrap());
    }
    for &e in &must_cover {
        let mut count = fundamental.iter().filter(|c| c.edges.contains(&e)).count();
        if gamma.edges.contains(&e) {
            count += 1;
        }
        if count != 2 {
            return Err(Error::Internal(format!(
                "edge {e} lies on {count} cycles of the family, not 2"
            )));
        }
    }
    let total: usize = fundamental.iter().map(|c| c.len()).sum::<usize>() + gamma.len();
    if total < 2 * (h + k - 1) {
        return Err(Error::Internal(
            "family total length below the double-cover minimum".into(),
        ));
    }

    Ok(CycleFamily {
        fundamental,
        symmetric_difference: gamma,
        tree_path_length: h,
        path,
        cotree: chosen,
    })
}

fn trace_single_cycle(g: &Multigraph, edge_set: &BTreeSet<EdgeId>) -> Result<Cycle> {
    if edge_set.len() < 2 {
        return Err(Error::Internal("symmetric difference too small".into()));
    }
    let mut adj: HashMap<VertexId, Vec<(EdgeId, VertexId)>> = HashMap::new();
    for &e in edge_set {
        let (u, v) = g.endpoints(e);
        adj.entry(u).or_default().push((e, v));
        adj.entry(v).or_default().push((e, u));
    }
    for (v, l) in &adj {
        if l.len() != 2 {
            return Err(Error::Internal(format!(
                "symmetric difference has degree {} at vertex {v}",
                l.len()
            )));
        }
    }
    let start = *adj.keys().min().unwrap();
    let mut verts = vec![start];
    let mut edges = Vec::new();
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let mut at = start;
    loop {
        let &(e, w) = adj[&at]
            .iter()
            .find(|&&(e, _)| !used.contains(&e))
            .ok_or_else(|| Error::Internal("symmetric difference is not one cycle".into()))?;
        used.insert(e);
        edges.push(e);
        if w == start {
            break;
        }
        verts.push(w);
        at = w;
    }
    if used.len() != edge_set.len() {
        return Err(Error::Internal(
            "symmetric difference splits into several cycles".into(),
        ));
    }
    let c = Cycle::canonical(edges, verts);
    c.validate(g)?;
    Ok(c)
}

/// The two-sided relation between tree-depth and the longest cycle in a
/// 2-connected graph, measured exactly.
#[derive(Clone, Debug)]
pub struct CycleDepthReport {
    pub treedepth: usize,
    pub longest_cycle: usize,
    /// `1 + ceil(log2 L)`, never above the tree-depth.
    pub lower: usize,
    /// `(L - 1)(L - 2) / 2 + 2`, never below the tree-depth.
    pub upper: usize,
    pub lower_slack: usize,
    pub upper_slack: usize,
}

/// Computes tree-depth and longest cycle exactly and checks the
/// sandwich `1 + ceil(log2 L) <= td <= (L - 1 choose 2) + 2`.
pub fn check_td_cycle_bounds(g: &Multigraph, budget: &Budget) -> Result<CycleDepthReport> {
    if !is_two_connected(g) {
        return Err(Error::Precondition(
            "cycle bounds need a 2-connected graph".into(),
        ));
    }
    let (td, _) = treedepth_exact(g, budget)?;
    let l = longest_cycle(g, budget)?
        .ok_or_else(|| Error::Internal("2-connected graph without a cycle".into()))?
        .len();
    let lower = 1 + ceil_log2(l);
    let upper = (l - 1) * (l - 2) / 2 + 2;
    if td < lower || td > upper {
        return Err(Error::Internal(format!(
            "tree-depth {td} escapes [{lower}, {upper}] for longest cycle {l}"
        )));
    }
    Ok(CycleDepthReport {
        treedepth: td,
        longest_cycle: l,
        lower,
        upper,
        lower_slack: td - lower,
        upper_slack: upper - td,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn td(g: &Multigraph) -> usize {
        let (v, d) = treedepth_exact(g, &Budget::default()).unwrap();
        d.verify(g).unwrap();
        v
    }

    #[test]
    fn known_depths() {
        assert_eq!(td(&gen::clique(4).unwrap()), 4);
        assert_eq!(td(&gen::clique(5).unwrap()), 5);
        assert_eq!(td(&gen::cycle(4).unwrap()), 3);
        assert_eq!(td(&gen::cycle(2).unwrap()), 2);
        assert_eq!(td(&gen::path(4).unwrap()), 3);
        assert_eq!(td(&gen::path(8).unwrap()), 4);
        assert_eq!(td(&gen::star(5).unwrap()), 2);
        assert_eq!(td(&Multigraph::new(1, &[]).unwrap()), 1);
    }

    #[test]
    fn cycles_follow_the_log_formula() {
        for n in 3..=16 {
            assert_eq!(td(&gen::cycle(n).unwrap()), 1 + ceil_log2(n), "C_{n}");
        }
    }

    #[test]
    fn tree_closures_have_their_height() {
        for (q, height) in [(1, 3), (2, 2), (2, 3), (3, 2), (2, 4)] {
            let g = gen::tree_closure(q, height).unwrap();
            assert_eq!(td(&g), height, "closure q={q} height={height}");
        }
    }

    #[test]
    fn budget_guards_size() {
        let g = gen::path(17).unwrap();
        assert!(matches!(
            treedepth_exact(&g, &Budget::default()),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn depth_is_minor_monotone() {
        for g in [
            gen::clique(4).unwrap(),
            gen::cycle(6).unwrap(),
            gen::theta(3, 2).unwrap(),
            gen::multicycle(3, 2).unwrap(),
        ] {
            let base = td(&g);
            for e in 0..g.edge_count() {
                assert!(td(&g.delete_edge(e)) <= base);
                let contracted = g.contract_edge(e);
                if contracted.vertex_count() > 0 {
                    assert!(td(&contracted) <= base);
                }
            }
        }
    }

    #[test]
    fn family_on_cycles_is_the_cycle() {
        for n in [2usize, 3, 5, 8] {
            let g = gen::cycle(n).unwrap();
            let fam = dfs_cycle_family(&g).unwrap();
            assert_eq!(fam.fundamental.len(), 1);
            assert_eq!(fam.fundamental[0], fam.symmetric_difference);
            assert_eq!(fam.fundamental[0].len(), n);
            assert_eq!(fam.tree_path_length, n);
        }
    }

    #[test]
    fn family_cascades_on_a_chorded_path() {
        // Tree path 0..5 with cotree chords chosen so the low points
        // descend in three steps.
        let g = Multigraph::new(
            6,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (3, 5), (1, 4), (0, 2)],
        )
        .unwrap();
        let fam = dfs_cycle_family(&g).unwrap();
        assert_eq!(fam.tree_path_length, 6);
        assert_eq!(fam.fundamental.len(), 3);
        assert_eq!(fam.cotree, vec![5, 6, 7]);
        let lens: Vec<usize> = fam.fundamental.iter().map(|c| c.len()).collect();
        assert_eq!(lens, vec![3, 4, 3]);
        assert_eq!(fam.symmetric_difference.len(), 6);
    }

    #[test]
    fn family_rejects_non_two_connected() {
        assert!(matches!(
            dfs_cycle_family(&gen::path(3).unwrap()),
            Err(Error::Precondition(_))
        ));
        let bowtie =
            Multigraph::new(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(dfs_cycle_family(&bowtie).is_err());
    }

    #[test]
    fn family_on_dense_graphs() {
        for g in [
            gen::clique(4).unwrap(),
            gen::clique(5).unwrap(),
            gen::theta(3, 2).unwrap(),
            gen::multicycle(4, 2).unwrap(),
        ] {
            let fam = dfs_cycle_family(&g).unwrap();
            let total: usize =
                fam.fundamental.iter().map(|c| c.len()).sum::<usize>()
                    + fam.symmetric_difference.len();
            assert!(total >= 2 * (fam.tree_path_length + fam.fundamental.len() - 1));
        }
    }

    #[test]
    fn bound_reports() {
        let b = Budget::default();
        let r = check_td_cycle_bounds(&gen::cycle(8).unwrap(), &b).unwrap();
        assert_eq!((r.treedepth, r.longest_cycle, r.lower, r.upper), (4, 8, 4, 23));
        let r = check_td_cycle_bounds(&gen::clique(4).unwrap(), &b).unwrap();
        assert_eq!((r.treedepth, r.lower, r.upper), (4, 3, 5));
        let r = check_td_cycle_bounds(&gen::clique(5).unwrap(), &b).unwrap();
        assert_eq!((r.treedepth, r.lower, r.upper), (5, 4, 8));
        // The digon is tight on both sides.
        let r = check_td_cycle_bounds(&gen::cycle(2).unwrap(), &b).unwrap();
        assert_eq!((r.lower_slack, r.upper_slack), (0, 0));
    }
}
