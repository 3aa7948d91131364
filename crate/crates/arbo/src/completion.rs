//! Fraternal completions of an orientation: iterated layers of derived
//! arcs, their walks, the containment order, and the conflict relation
//! between base edges.

use crate::budget::{Budget, Error, Meter, Result};
use crate::density::{min_indegree_orientation, Orientation};
use crate::graph::{EdgeId, Multigraph, VertexId};
use serde::Serialize;
use std::collections::BTreeMap;

/// Dense index into [`FraternalCompletion::arcs`]; the first layer's
/// arc ids coincide with the base graph's edge ids.
pub type ArcId = usize;

/// One arc of a completion. Weight-1 arcs are the base orientation;
/// heavier arcs record the ordered pair that spawned them: for
/// `kappa = (f, g)`, the arcs f and g share their head, and the new arc
/// runs from f's tail to g's tail carrying weight w(f) + w(g).
#[derive(Clone, Debug, Serialize)]
pub struct CompletionArc {
    pub tail: VertexId,
    pub head: VertexId,
    pub weight: usize,
    pub kappa: Option<(ArcId, ArcId)>,
}

/// A fraternal completion of depth `a`: layer i holds exactly the arcs
/// of weight i, and every pair of arcs sharing a head with distinct
/// tails and weights summing to at most `a` has spawned exactly one arc.
#[derive(Clone, Debug)]
pub struct FraternalCompletion {
    pub base: Orientation,
    pub arcs: Vec<CompletionArc>,
    /// Arc id range of each layer; `layer_ranges[i]` is weight i + 1.
    pub layer_ranges: Vec<std::ops::Range<ArcId>>,
    /// Maximum indegree of each layer's own arc set, as oriented.
    pub layer_max_indegree: Vec<usize>,
}

/// The walk a completion arc expands to in the base graph: an arc with
/// `kappa = (f, g)` walks f's expansion, then g's backwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    /// Base edges in traversal order; `true` walks tail to head.
    pub steps: Vec<(EdgeId, bool)>,
    /// The `len + 1` vertices visited, in order.
    pub vertices: Vec<VertexId>,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Whether the walk visits pairwise distinct vertices.
    pub fn is_simple(&self) -> bool {
        let mut vs = self.vertices.clone();
        vs.sort_unstable();
        vs.windows(2).all(|w| w[0] != w[1])
    }
}

/// The completion of depth 1: the orientation itself.
pub fn depth1_completion(o: Orientation) -> FraternalCompletion {
    let m = o.arcs.len();
    let arcs = o
        .arcs
        .iter()
        .map(|&(t, h)| CompletionArc {
            tail: t,
            head: h,
            weight: 1,
            kappa: None,
        })
        .collect();
    let max_in = o.max_indegree();
    FraternalCompletion {
        base: o,
        arcs,
        layer_ranges: vec![0..m],
        layer_max_indegree: vec![max_in],
    }
}

/// Iterated [`FraternalCompletion::extend`] up to depth `p`.
pub fn complete_to_depth(o: Orientation, p: usize, budget: &Budget) -> Result<FraternalCompletion> {
    if p == 0 {
        return Err(Error::Precondition("completion depth must be positive".into()));
    }
    let mut fc = depth1_completion(o);
    for _ in 1..p {
        fc = fc.extend(budget)?;
    }
    Ok(fc)
}

impl FraternalCompletion {
    pub fn depth(&self) -> usize {
        self.layer_ranges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count
    }

    /// Arc ids of the layer carrying `weight`.
    pub fn layer(&self, weight: usize) -> std::ops::Range<ArcId> {
        self.layer_ranges[weight - 1].clone()
    }

    /// Maximum indegree over all layers together.
    pub fn total_max_indegree(&self) -> usize {
        let mut indeg = vec![0usize; self.vertex_count()];
        for arc in &self.arcs {
            indeg[arc.head] += 1;
        }
        indeg.into_iter().max().unwrap_or(0)
    }

    /// Extends the completion by one layer: every pair of arcs sharing
    /// a head, with distinct tails and weights summing to depth + 1,
    /// spawns one arc between the tails. The new arcs' directions come
    /// from a minimum-max-indegree orientation of their underlying
    /// multigraph, which is what keeps later layers shallow.
    pub fn extend(&self, budget: &Budget) -> Result<FraternalCompletion> {
        let a = self.depth();
        let target = a + 1;
        // Candidate pairs (f, g), f < g, in ascending order.
        let mut pairs: Vec<(ArcId, ArcId)> = Vec::new();
        for i in 1..=a.min(target - 1) {
            let j = target - i;
            if j < i || j > a {
                continue;
            }
            for f in self.layer(i) {
                let gs = self.layer(j);
                let from = if i == j { f + 1 } else { gs.start };
                for g in from..gs.end {
                    if self.arcs[f].head == self.arcs[g].head
                        && self.arcs[f].tail != self.arcs[g].tail
                    {
                        pairs.push((f, g));
                    }
                }
            }
        }
        if self.arcs.len() + pairs.len() > budget.max_completion_arcs {
            return Err(Error::Budget(format!(
                "completion would grow to {} arcs, over the cap of {}",
                self.arcs.len() + pairs.len(),
                budget.max_completion_arcs
            )));
        }
        let candidate_edges: Vec<(VertexId, VertexId)> = pairs
            .iter()
            .map(|&(f, g)| (self.arcs[f].tail, self.arcs[g].tail))
            .collect();
        let layer_graph = Multigraph::new(self.vertex_count(), &candidate_edges)?;
        let layer_orientation = min_indegree_orientation(&layer_graph);

        let mut out = self.clone();
        let start = out.arcs.len();
        for (idx, &(f, g)) in pairs.iter().enumerate() {
            let (tail, head) = layer_orientation.arcs[idx];
            let kappa = if tail == self.arcs[f].tail { (f, g) } else { (g, f) };
            debug_assert_eq!(self.arcs[kappa.0].tail, tail);
            debug_assert_eq!(self.arcs[kappa.1].tail, head);
            out.arcs.push(CompletionArc {
                tail,
                head,
                weight: target,
                kappa: Some(kappa),
            });
        }
        out.layer_ranges.push(start..out.arcs.len());
        out.layer_max_indegree.push(layer_orientation.max_indegree());
        Ok(out)
    }

    /// The walk of an arc in the base graph, by recursive expansion.
    pub fn walk_of(&self, id: ArcId) -> Walk {
        let arc = &self.arcs[id];
        match arc.kappa {
            None => Walk {
                steps: vec![(id, true)],
                vertices: vec![arc.tail, arc.head],
            },
            Some((f, g)) => {
                let wf = self.walk_of(f);
                let wg = self.walk_of(g);
                let mut steps = wf.steps;
                steps.extend(wg.steps.iter().rev().map(|&(e, fwd)| (e, !fwd)));
                let mut vertices = wf.vertices;
                vertices.extend(wg.vertices.iter().rev().skip(1));
                debug_assert_eq!(vertices.len(), steps.len() + 1);
                Walk { steps, vertices }
            }
        }
    }

    /// For every arc, the set of base edges its walk uses, as bitmasks
    /// over edge ids. Arcs only reference lower ids, so one pass does.
    fn base_supports(&self) -> Vec<Vec<bool>> {
        let m = self.base.arcs.len();
        let mut supports: Vec<Vec<bool>> = Vec::with_capacity(self.arcs.len());
        for (id, arc) in self.arcs.iter().enumerate() {
            let mut s = vec![false; m];
            match arc.kappa {
                None => s[id] = true,
                Some((f, g)) => {
                    for e in 0..m {
                        s[e] = supports[f][e] || supports[g][e];
                    }
                }
            }
            supports.push(s);
        }
        supports
    }

    /// All arcs whose walk passes through base edge `e`, ascending;
    /// contains `e` itself. This is the upward cone of `e` in the order
    /// generated by `kappa`.
    pub fn above(&self, e: EdgeId) -> Vec<ArcId> {
        let supports = self.base_supports();
        (0..self.arcs.len()).filter(|&id| supports[id][e]).collect()
    }

    /// The composition bound on upward cones: with d_i the recorded
    /// indegree maximum of layer i, count `N(0) = 1`,
    /// `N(s) = sum_i d_i N(s - i)`, and sum `N(s)` for `s < depth`.
    /// Every base edge has at most this many arcs above it.
    pub fn cone_bound(&self) -> u128 {
        let a = self.depth();
        let mut n = vec![0u128; a];
        n[0] = 1;
        for s in 1..a {
            let mut total = 0u128;
            for i in 1..=s {
                total = total
                    .saturating_add((self.layer_max_indegree[i - 1] as u128).saturating_mul(n[s - i]));
            }
            n[s] = total;
        }
        n.into_iter().fold(0u128, |acc, x| acc.saturating_add(x))
    }

    /// Upper bound on the directed conflict indegree of any base edge:
    /// `3 p C max(2, D)^p` with p the depth, C the composition bound and
    /// D the maximum indegree over all layers together.
    pub fn conflict_degree_bound(&self) -> u128 {
        self.bound_with(self.total_max_indegree())
    }

    /// The same bound read with only the last layer's indegree maximum;
    /// reported alongside the conservative form.
    pub fn conflict_degree_bound_last_layer(&self) -> u128 {
        self.bound_with(self.layer_max_indegree[self.depth() - 1])
    }

    fn bound_with(&self, indeg: usize) -> u128 {
        let p = self.depth() as u128;
        let base = indeg.max(2) as u128;
        let mut power = 1u128;
        for _ in 0..self.depth() {
            power = power.saturating_mul(base);
        }
        3u128
            .saturating_mul(p)
            .saturating_mul(self.cone_bound())
            .saturating_mul(power)
    }

    /// Structural audit: layers hold exactly their weight, `kappa`
    /// relations are coherent, every fraternal pair spawned exactly one
    /// arc, and every walk has matching length and endpoints.
    pub fn audit(&self) -> Result<()> {
        let a = self.depth();
        let m = self.base.arcs.len();
        if self.layer_ranges.first() != Some(&(0..m)) {
            return Err(Error::Internal("first layer is not the base arc set".into()));
        }
        for (i, range) in self.layer_ranges.iter().enumerate() {
            for id in range.clone() {
                let arc = &self.arcs[id];
                if arc.weight != i + 1 {
                    return Err(Error::Internal(format!(
                        "arc {id} has weight {} but sits in layer {}",
                        arc.weight,
                        i + 1
                    )));
                }
                match arc.kappa {
                    None if arc.weight == 1 => {
                        if self.base.arcs[id] != (arc.tail, arc.head) {
                            return Err(Error::Internal(format!(
                                "base arc {id} disagrees with the orientation"
                            )));
                        }
                    }
                    Some((f, g)) if arc.weight >= 2 => {
                        let (af, ag) = (&self.arcs[f], &self.arcs[g]);
                        let ok = af.weight + ag.weight == arc.weight
                            && af.head == ag.head
                            && af.tail != ag.tail
                            && arc.tail == af.tail
                            && arc.head == ag.tail;
                        if !ok {
                            return Err(Error::Internal(format!(
                                "arc {id} breaks the kappa relations"
                            )));
                        }
                    }
                    _ => {
                        return Err(Error::Internal(format!(
                            "arc {id} has weight {} and kappa {:?}",
                            arc.weight, arc.kappa
                        )));
                    }
                }
            }
        }
        // Uniqueness: every fraternal pair with weight sum <= depth has
        // spawned exactly one arc.
        let mut spawned: BTreeMap<(ArcId, ArcId), usize> = BTreeMap::new();
        for arc in &self.arcs {
            if let Some((f, g)) = arc.kappa {
                *spawned.entry((f.min(g), f.max(g))).or_insert(0) += 1;
            }
        }
        for f in 0..self.arcs.len() {
            for g in f + 1..self.arcs.len() {
                let (af, ag) = (&self.arcs[f], &self.arcs[g]);
                let fraternal = af.weight + ag.weight <= a
                    && af.head == ag.head
                    && af.tail != ag.tail;
                let count = spawned.get(&(f, g)).copied().unwrap_or(0);
                if fraternal && count != 1 {
                    return Err(Error::Internal(format!(
                        "fraternal pair ({f}, {g}) spawned {count} arcs"
                    )));
                }
                if !fraternal && af.weight + ag.weight <= a && count != 0 {
                    return Err(Error::Internal(format!(
                        "non-fraternal pair ({f}, {g}) spawned an arc"
                    )));
                }
            }
        }
        // Walk coherence.
        for (id, arc) in self.arcs.iter().enumerate() {
            let w = self.walk_of(id);
            if w.len() != arc.weight
                || w.vertices.first() != Some(&arc.tail)
                || w.vertices.last() != Some(&arc.head)
            {
                return Err(Error::Internal(format!("arc {id} walk mismatch")));
            }
        }
        Ok(())
    }

    /// The conflict relation between base edges: `(e1, e2)` conflict
    /// when some directed path of at most `depth` arcs starts with an
    /// arc above `e1` and ends at an endpoint of an arc above `e2`.
    /// Paths repeat no vertex; the one-arc path counts.
    pub fn conflicts(&self, budget: &Budget) -> Result<ConflictGraph> {
        let m = self.base.arcs.len();
        let n = self.vertex_count();
        let a = self.depth();
        let supports = self.base_supports();
        let mut out_arcs: Vec<Vec<ArcId>> = vec![Vec::new(); n];
        for (id, arc) in self.arcs.iter().enumerate() {
            out_arcs[arc.tail].push(id);
        }
        let mut meter = Meter::new(budget.max_search_nodes, "conflict path search");

        // reach[e]: vertices where a qualifying path from e may end.
        let mut reach: Vec<Vec<bool>> = vec![vec![false; n]; m];
        // ends[e]: endpoints of arcs above e.
        let mut ends: Vec<Vec<bool>> = vec![vec![false; n]; m];
        for e in 0..m {
            for (id, arc) in self.arcs.iter().enumerate() {
                if supports[id][e] {
                    ends[e][arc.tail] = true;
                    ends[e][arc.head] = true;
                }
            }
            let mut visited = vec![false; n];
            for (id, arc) in self.arcs.iter().enumerate() {
                if !supports[id][e] {
                    continue;
                }
                visited[arc.tail] = true;
                visited[arc.head] = true;
                reach[e][arc.head] = true;
                self.extend_paths(
                    arc.head,
                    1,
                    a,
                    &out_arcs,
                    &mut visited,
                    &mut reach[e],
                    &mut meter,
                )?;
                visited[arc.tail] = false;
                visited[arc.head] = false;
            }
        }
        let mut directed = vec![vec![false; m]; m];
        let mut self_conflicts = vec![false; m];
        for e1 in 0..m {
            for e2 in 0..m {
                let hit = (0..n).any(|v| reach[e1][v] && ends[e2][v]);
                if e1 == e2 {
                    self_conflicts[e1] = hit;
                } else {
                    directed[e1][e2] = hit;
                }
            }
        }
        Ok(ConflictGraph {
            directed,
            self_conflicts,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_paths(
        &self,
        at: VertexId,
        used: usize,
        cap: usize,
        out_arcs: &[Vec<ArcId>],
        visited: &mut Vec<bool>,
        reach: &mut Vec<bool>,
        meter: &mut Meter,
    ) -> Result<()> {
        meter.tick()?;
        if used == cap {
            return Ok(());
        }
        for &next in &out_arcs[at] {
            let w = self.arcs[next].head;
            if visited[w] {
                continue;
            }
            reach[w] = true;
            visited[w] = true;
            self.extend_paths(w, used + 1, cap, out_arcs, visited, reach, meter)?;
            visited[w] = false;
        }
        Ok(())
    }
}

/// Conflicts between base edges, kept in directed form (what the degree
/// bound controls) together with the symmetrized adjacency used for
/// colouring. Self-conflicts always hold and constrain nothing.
#[derive(Clone, Debug)]
pub struct ConflictGraph {
    directed: Vec<Vec<bool>>,
    pub self_conflicts: Vec<bool>,
}

impl ConflictGraph {
    pub fn base_edges(&self) -> usize {
        self.directed.len()
    }

    pub fn directed_conflict(&self, e1: EdgeId, e2: EdgeId) -> bool {
        e1 != e2 && self.directed[e1][e2]
    }

    /// Symmetrized adjacency: a conflict in either direction.
    pub fn adjacent(&self, e1: EdgeId, e2: EdgeId) -> bool {
        e1 != e2 && (self.directed[e1][e2] || self.directed[e2][e1])
    }

    /// How many edges conflict INTO `e2`; this is the quantity the
    /// completion's degree bound controls.
    pub fn in_degree(&self, e2: EdgeId) -> usize {
        (0..self.base_edges())
            .filter(|&e1| self.directed_conflict(e1, e2))
            .count()
    }

    pub fn max_in_degree(&self) -> usize {
        (0..self.base_edges()).map(|e| self.in_degree(e)).max().unwrap_or(0)
    }

    pub fn degree(&self, e: EdgeId) -> usize {
        (0..self.base_edges()).filter(|&f| self.adjacent(e, f)).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.base_edges()).map(|e| self.degree(e)).max().unwrap_or(0)
    }

    pub fn neighbours(&self, e: EdgeId) -> Vec<EdgeId> {
        (0..self.base_edges()).filter(|&f| self.adjacent(e, f)).collect()
    }
}
