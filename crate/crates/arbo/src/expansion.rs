//! Shallow-minor densities and their interplay with cycle colourings:
//! exact topological-minor density at bounded depth (with embedded
//! witnesses), ball-contraction minor density, the blow-up inequality,
//! embedding a completion layer into a blow-up, and colourings built
//! from low-treedepth vertex partitions.

use crate::budget::{Budget, Error, Meter, Result};
use crate::colouring::first_cycle_violation;
use crate::completion::FraternalCompletion;
use crate::cycles::Cycle;
use crate::density::{max_density, Denominator};
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::treedepth::{ceil_log2, treedepth_exact};
use num::rational::Ratio;
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};

/// Threshold functions for cycle-colouring demands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionSpec {
    Identity,
    Log2Ceil,
}

impl FunctionSpec {
    pub fn eval(&self, x: usize) -> usize {
        match self {
            FunctionSpec::Identity => x,
            FunctionSpec::Log2Ceil => ceil_log2(x),
        }
    }

    /// The largest argument the function maps to at most `p`.
    pub fn dual_max_arg(&self, p: usize) -> usize {
        match self {
            FunctionSpec::Identity => p,
            FunctionSpec::Log2Ceil => {
                if p >= usize::BITS as usize - 1 {
                    usize::MAX
                } else {
                    1usize << p
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FunctionSpec::Identity => "identity",
            FunctionSpec::Log2Ceil => "log2ceil",
        }
    }
}

/// A pattern multigraph realized inside a host graph: branch vertices
/// are mapped injectively, each pattern edge to a host path. Paths are
/// internally disjoint from each other and from all branch images, so
/// the union is a subdivision of the pattern sitting inside the host.
#[derive(Clone, Debug)]
pub struct SubdivisionEmbedding {
    pub pattern: Multigraph,
    pub branch_vertices: Vec<VertexId>,
    pub branch_paths: Vec<Vec<EdgeId>>,
}

impl SubdivisionEmbedding {
    /// Checks every structural promise against the host graph.
    pub fn verify(&self, g: &Multigraph, two_r: usize) -> Result<()> {
        let k = self.pattern.vertex_count();
        if self.branch_vertices.len() != k {
            return Err(Error::Precondition("one image per pattern vertex".into()));
        }
        let mut seen = BTreeSet::new();
        for &v in &self.branch_vertices {
            if v >= g.vertex_count() || !seen.insert(v) {
                return Err(Error::Precondition(
                    "branch images must be distinct host vertices".into(),
                ));
            }
        }
        if self.branch_paths.len() != self.pattern.edge_count() {
            return Err(Error::Precondition("one path per pattern edge".into()));
        }
        let branch: BTreeSet<VertexId> = self.branch_vertices.iter().copied().collect();
        let mut used_edges = BTreeSet::new();
        let mut used_interiors = BTreeSet::new();
        for (pe, path) in self.branch_paths.iter().enumerate() {
            let (a, b) = self.pattern.endpoints(pe);
            if path.is_empty() || path.len() > two_r + 1 {
                return Err(Error::Precondition(format!(
                    "path {pe} has {} edges, allowed 1..={}",
                    path.len(),
                    two_r + 1
                )));
            }
            let mut cur = self.branch_vertices[a];
            for (i, &e) in path.iter().enumerate() {
                if e >= g.edge_count() || !used_edges.insert(e) {
                    return Err(Error::Precondition(format!(
                        "path {pe} reuses or exceeds host edges"
                    )));
                }
                let (u, v) = g.endpoints(e);
                let next = if u == cur {
                    v
                } else if v == cur {
                    u
                } else {
                    return Err(Error::Precondition(format!("path {pe} breaks at step {i}")));
                };
                if i + 1 < path.len() {
                    if branch.contains(&next) || !used_interiors.insert(next) {
                        return Err(Error::Precondition(format!(
                            "path {pe} interior touches a branch vertex or another path"
                        )));
                    }
                }
                cur = next;
            }
            if cur != self.branch_vertices[b] {
                return Err(Error::Precondition(format!(
                    "path {pe} ends at the wrong vertex"
                )));
            }
        }
        Ok(())
    }

    pub fn density(&self, den: Denominator) -> Ratio<i64> {
        let k = self.pattern.vertex_count() as i64;
        let d = match den {
            Denominator::Vertices => k,
            Denominator::VerticesLessOne => k - 1,
        };
        Ratio::new(self.pattern.edge_count() as i64, d)
    }
}

struct Cand {
    a: usize,
    b: usize,
    edges: Vec<EdgeId>,
    imask: u64,
}

fn tri_index(a: usize, b: usize, k: usize) -> usize {
    a * (2 * k - a - 1) / 2 + (b - a - 1)
}

#[allow(clippy::too_many_arguments)]
fn collect_paths(
    inc: &[Vec<(EdgeId, VertexId)>],
    in_b: &[bool],
    bindex: &[usize],
    cap: usize,
    s: VertexId,
    cur: VertexId,
    visited: &mut u64,
    edges: &mut Vec<EdgeId>,
    imask: u64,
    out: &mut Vec<Cand>,
) {
    for &(eid, other) in &inc[cur] {
        if (*visited >> other) & 1 == 1 {
            continue;
        }
        if in_b[other] {
            // Length-1 paths are the direct edges, counted elsewhere.
            if s < other && !edges.is_empty() {
                let mut pe = edges.clone();
                pe.push(eid);
                out.push(Cand {
                    a: bindex[s],
                    b: bindex[other],
                    edges: pe,
                    imask,
                });
            }
            continue;
        }
        if edges.len() + 2 <= cap {
            edges.push(eid);
            *visited |= 1 << other;
            collect_paths(
                inc,
                in_b,
                bindex,
                cap,
                s,
                other,
                visited,
                edges,
                imask | (1 << other),
                out,
            );
            *visited &= !(1u64 << other);
            edges.pop();
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn pack(
    cands: &[Cand],
    idx: usize,
    imask: u64,
    pmask: u128,
    simple: bool,
    k: usize,
    count: usize,
    chosen: &mut Vec<usize>,
    best: &mut (usize, Vec<usize>),
    meter: &mut Meter,
) -> Result<()> {
    if count + (cands.len() - idx) <= best.0 {
        return Ok(());
    }
    if idx == cands.len() {
        *best = (count, chosen.clone());
        return Ok(());
    }
    meter.tick()?;
    let c = &cands[idx];
    let pbit = 1u128 << tri_index(c.a, c.b, k);
    if c.imask & imask == 0 && (!simple || pmask & pbit == 0) {
        chosen.push(idx);
        pack(
            cands,
            idx + 1,
            imask | c.imask,
            pmask | pbit,
            simple,
            k,
            count + 1,
            chosen,
            best,
            meter,
        )?;
        chosen.pop();
    }
    pack(cands, idx + 1, imask, pmask, simple, k, count, chosen, best, meter)
}

/// Exact maximum of pattern density over all multigraphs owning a
/// subdivision inside `g` where every edge is subdivided at most
/// `two_r` times. Returns the value with a verified witness.
pub fn top_minor_density(
    g: &Multigraph,
    two_r: usize,
    den: Denominator,
    budget: &Budget,
) -> Result<(Ratio<i64>, SubdivisionEmbedding)> {
    top_minor_density_with(g, two_r, den, false, budget)
}

/// Same search restricted to simple patterns: at most one path per
/// branch pair, so the optimum is over simple graphs only.
pub fn top_minor_density_simple(
    g: &Multigraph,
    two_r: usize,
    budget: &Budget,
) -> Result<(Ratio<i64>, SubdivisionEmbedding)> {
    top_minor_density_with(g, two_r, Denominator::Vertices, true, budget)
}

fn top_minor_density_with(
    g: &Multigraph,
    two_r: usize,
    den: Denominator,
    simple: bool,
    budget: &Budget,
) -> Result<(Ratio<i64>, SubdivisionEmbedding)> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let min_k = match den {
        Denominator::Vertices => 1,
        Denominator::VerticesLessOne => 2,
    };
    if n < min_k {
        return Err(Error::Precondition("graph too small for this density".into()));
    }
    if n >= 24 {
        return Err(Error::Budget(
            "topological-minor search enumerates subsets; 23 vertices is the cap".into(),
        ));
    }
    if simple && n > 16 {
        return Err(Error::Budget(
            "simple-pattern search is capped at 16 vertices".into(),
        ));
    }
    let cap = two_r + 1;
    let inc = g.incidence();
    let delta = min_k - 1;
    let mut meter = Meter::new(budget.max_search_nodes, "topological-minor search");

    // Baseline: the smallest allowed pattern with no edges at all.
    let mut best_val = Ratio::zero();
    let mut best_data: (Vec<VertexId>, Vec<(usize, usize, EdgeId)>, Vec<Cand>) =
        ((0..min_k).collect(), Vec::new(), Vec::new());

    for mask in 1u64..(1u64 << n) {
        meter.tick()?;
        let k = mask.count_ones() as usize;
        if k < min_k {
            continue;
        }
        let denom = (k - delta) as i64;
        if m == 0 || Ratio::new(m as i64, denom) <= best_val {
            continue;
        }
        let branch: Vec<VertexId> = (0..n).filter(|v| (mask >> v) & 1 == 1).collect();
        let mut in_b = vec![false; n];
        let mut bindex = vec![0usize; n];
        for (i, &v) in branch.iter().enumerate() {
            in_b[v] = true;
            bindex[v] = i;
        }
        // Direct pattern edges: host edges joining two branch vertices.
        let mut directs: Vec<(usize, usize, EdgeId)> = Vec::new();
        let mut adjacent_pairs = BTreeSet::new();
        for e in 0..m {
            let (u, v) = g.endpoints(e);
            if in_b[u] && in_b[v] {
                let (a, b) = (bindex[u].min(bindex[v]), bindex[u].max(bindex[v]));
                if !simple || adjacent_pairs.insert((a, b)) {
                    directs.push((a, b, e));
                }
            }
        }
        let mut cands = Vec::new();
        if cap >= 2 {
            for &s in &branch {
                let mut visited = 1u64 << s;
                let mut edges = Vec::new();
                collect_paths(
                    &inc, &in_b, &bindex, cap, s, s, &mut visited, &mut edges, 0, &mut cands,
                );
            }
        }
        if simple {
            cands.retain(|c| !adjacent_pairs.contains(&(c.a, c.b)));
        }
        if Ratio::new((directs.len() + cands.len()) as i64, denom) <= best_val {
            continue;
        }
        let mut pmask = 0u128;
        for &(a, b, _) in &directs {
            if simple {
                pmask |= 1u128 << tri_index(a, b, k);
            }
        }
        let mut chosen = Vec::new();
        let mut local = (0usize, Vec::new());
        pack(
            &cands, 0, 0, pmask, simple, k, 0, &mut chosen, &mut local, &mut meter,
        )?;
        let val = Ratio::new((directs.len() + local.0) as i64, denom);
        if val > best_val {
            best_val = val;
            let picked = local.1.iter().map(|&i| Cand {
                a: cands[i].a,
                b: cands[i].b,
                edges: cands[i].edges.clone(),
                imask: cands[i].imask,
            });
            best_data = (branch, directs, picked.collect());
        }
    }

    let (branch, directs, paths) = best_data;
    let mut pattern_edges = Vec::new();
    let mut branch_paths = Vec::new();
    for &(a, b, e) in &directs {
        pattern_edges.push((a, b));
        branch_paths.push(vec![e]);
    }
    for c in &paths {
        pattern_edges.push((c.a, c.b));
        branch_paths.push(c.edges.clone());
    }
    let witness = SubdivisionEmbedding {
        pattern: Multigraph::new(branch.len(), &pattern_edges)?,
        branch_vertices: branch,
        branch_paths,
    };
    witness.verify(g, two_r)?;
    Ok((best_val, witness))
}

fn matching_with_caps(caps: &mut Vec<usize>, pairs: &[(usize, usize)], idx: usize, acc: usize, best: &mut usize) {
    let slack: usize = caps.iter().sum::<usize>() / 2;
    if acc + slack <= *best && idx < pairs.len() {
        return;
    }
    if idx == pairs.len() {
        *best = (*best).max(acc);
        return;
    }
    let (x, y) = pairs[idx];
    let top = caps[x].min(caps[y]);
    for t in (0..=top).rev() {
        caps[x] -= t;
        caps[y] -= t;
        matching_with_caps(caps, pairs, idx + 1, acc + t, best);
        caps[x] += t;
        caps[y] += t;
    }
}

/// Exact depth-`two_r/2` topological-minor density of the `m`-fold
/// blow-up of `g`, computed without materializing it: twin copies are
/// interchangeable, so branch sets reduce to per-vertex counts, and at
/// path length at most 3 the disjoint-interior packing splits into a
/// closed count plus a tiny capacitated matching. Supports two_r <= 2.
pub fn blowup_top_minor_density(
    g: &Multigraph,
    m: usize,
    two_r: usize,
    den: Denominator,
    budget: &Budget,
) -> Result<Ratio<i64>> {
    if m == 0 {
        return Err(Error::Precondition("blow-up factor must be positive".into()));
    }
    if two_r > 2 {
        return Err(Error::Precondition(
            "profile search supports subdivision depth at most 2".into(),
        ));
    }
    let n = g.vertex_count();
    let min_k = match den {
        Denominator::Vertices => 1,
        Denominator::VerticesLessOne => 2,
    };
    if n == 0 {
        return Err(Error::Precondition("empty host graph".into()));
    }
    let delta = min_k - 1;
    let cap = two_r + 1;
    let mut nbrs: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); n];
    for &(u, v) in g.edges() {
        nbrs[u].insert(v);
        nbrs[v].insert(u);
    }
    let mut meter = Meter::new(budget.max_search_nodes, "blow-up profile search");
    let mut best = Ratio::zero();
    let mut profile = vec![0usize; n];
    loop {
        meter.tick()?;
        let k: usize = profile.iter().sum();
        if k >= min_k {
            let mut count = 0usize;
            for &(u, v) in g.edges() {
                count += profile[u] * profile[v];
            }
            if cap >= 2 {
                // How many branch copies each class sees.
                let towards: Vec<usize> = (0..n)
                    .map(|x| nbrs[x].iter().map(|&u| profile[u]).sum())
                    .collect();
                let mut w = Vec::new();
                for x in 0..n {
                    let avail = m - profile[x];
                    if avail == 0 {
                        continue;
                    }
                    if towards[x] >= 2 {
                        count += avail;
                    } else if cap >= 3 && towards[x] == 1 {
                        w.push(x);
                    }
                }
                if cap >= 3 && w.len() >= 2 {
                    let unique_nb = |x: usize| nbrs[x].iter().find(|&&u| profile[u] == 1).copied();
                    let mut pairs = Vec::new();
                    for i in 0..w.len() {
                        for j in i + 1..w.len() {
                            let (x, y) = (w[i], w[j]);
                            if nbrs[x].contains(&y) && unique_nb(x) != unique_nb(y) {
                                pairs.push((i, j));
                            }
                        }
                    }
                    if !pairs.is_empty() {
                        let mut caps: Vec<usize> = w.iter().map(|&x| m - profile[x]).collect();
                        let mut extra = 0usize;
                        matching_with_caps(&mut caps, &pairs, 0, 0, &mut extra);
                        count += extra;
                    }
                }
            }
            let val = Ratio::new(count as i64, (k - delta) as i64);
            if val > best {
                best = val;
            }
        }
        // Next profile in mixed radix.
        let mut i = 0;
        loop {
            if i == n {
                return Ok(best);
            }
            if profile[i] < m {
                profile[i] += 1;
                break;
            }
            profile[i] = 0;
            i += 1;
        }
    }
}

/// Exact shallow-minor density at integer radius `r`: the best ratio
/// of connecting edges to parts over families of disjoint connected
/// sets, each of induced radius at most `r`, in the simplification.
/// Returns the value and the optimal family of balls.
pub fn shallow_minor_density(
    g: &Multigraph,
    r: usize,
    budget: &Budget,
) -> Result<(Ratio<i64>, Vec<Vec<VertexId>>)> {
    let gs = g.simplified();
    let n = gs.vertex_count();
    if n == 0 {
        return Err(Error::Precondition("empty host graph".into()));
    }
    if n >= 16 {
        return Err(Error::Budget("ball-partition search is capped at 15 vertices".into()));
    }
    let mut meter = Meter::new(budget.max_search_nodes, "ball-partition search");
    let mut best = (Ratio::zero(), vec![vec![0usize]]);
    for mask in 1u32..(1u32 << n) {
        let verts: Vec<VertexId> = (0..n).filter(|v| (mask >> v) & 1 == 1).collect();
        let mut blocks: Vec<Vec<VertexId>> = Vec::new();
        each_partition(&verts, 0, &mut blocks, &mut |blocks| {
            meter.tick()?;
            if !blocks.iter().all(|b| ball_radius_at_most(&gs, b, r)) {
                return Ok(());
            }
            let mut owner = vec![usize::MAX; n];
            for (i, b) in blocks.iter().enumerate() {
                for &v in b {
                    owner[v] = i;
                }
            }
            let mut linked = BTreeSet::new();
            for &(u, v) in gs.edges() {
                let (a, b) = (owner[u], owner[v]);
                if a != usize::MAX && b != usize::MAX && a != b {
                    linked.insert((a.min(b), a.max(b)));
                }
            }
            let val = Ratio::new(linked.len() as i64, blocks.len() as i64);
            if val > best.0 {
                best = (val, blocks.to_vec());
            }
            Ok(())
        })?;
    }
    Ok(best)
}

fn each_partition(
    verts: &[VertexId],
    idx: usize,
    blocks: &mut Vec<Vec<VertexId>>,
    f: &mut impl FnMut(&[Vec<VertexId>]) -> Result<()>,
) -> Result<()> {
    if idx == verts.len() {
        return f(blocks);
    }
    let v = verts[idx];
    for b in 0..blocks.len() {
        blocks[b].push(v);
        each_partition(verts, idx + 1, blocks, f)?;
        blocks[b].pop();
    }
    blocks.push(vec![v]);
    each_partition(verts, idx + 1, blocks, f)?;
    blocks.pop();
    Ok(())
}

/// Can every vertex of `block` be reached from a common centre within
/// `r` steps inside the induced subgraph?
fn ball_radius_at_most(gs: &Multigraph, block: &[VertexId], r: usize) -> bool {
    let (sub, _) = gs.induced(block);
    let n = sub.vertex_count();
    let inc = sub.incidence();
    (0..n).any(|c| {
        let mut dist = vec![usize::MAX; n];
        dist[c] = 0;
        let mut queue = std::collections::VecDeque::from([c]);
        while let Some(x) = queue.pop_front() {
            for &(_, y) in &inc[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist.into_iter().all(|d| d <= r)
    })
}

/// One instance of the minor-density versus palette inequality.
#[derive(Clone, Debug)]
pub struct ExpansionCheck {
    pub radius: usize,
    pub minor_density: Ratio<i64>,
    pub palette: usize,
    pub dual_value: usize,
    pub bound: u128,
    pub holds: bool,
}

/// Verifies that the radius-`r` minor density is at most
/// N^(2r+1) * g(2r+1)^2, where N is the exact threshold palette for
/// `f` at parameter 2r+1 and g is the dual of `f`.
pub fn check_expansion_theorem(
    g: &Multigraph,
    f: &FunctionSpec,
    r: usize,
    budget: &Budget,
) -> Result<ExpansionCheck> {
    let p = 2 * r + 1;
    let (minor_density, _) = shallow_minor_density(g, r, budget)?;
    let palette = crate::colouring::nf_exact(g, f, p, budget)?;
    let dual_value = f.dual_max_arg(p);
    let bound = (palette as u128)
        .saturating_pow(p as u32)
        .saturating_mul(dual_value as u128)
        .saturating_mul(dual_value as u128);
    let holds = if bound > i64::MAX as u128 {
        true
    } else {
        minor_density <= Ratio::from_integer(bound as i64)
    };
    Ok(ExpansionCheck {
        radius: r,
        minor_density,
        palette,
        dual_value,
        bound,
        holds,
    })
}

/// One instance of the blow-up density inequality.
#[derive(Clone, Debug)]
pub struct BlowupCheck {
    pub m: usize,
    pub two_r: usize,
    pub lhs: Ratio<i64>,
    pub base_top_density: Ratio<i64>,
    pub base_max_density: Ratio<i64>,
    pub rhs: Ratio<i64>,
    pub holds: bool,
}

/// Verifies that the depth-`two_r/2` topological-minor density of the
/// m-fold blow-up is at most
/// (two_r (m - 1) + 1) * d_r + m^2 * d_0 + (m - 1)
/// where d_r and d_0 are densities of the base graph.
pub fn check_blowup_lemma(
    g: &Multigraph,
    m: usize,
    two_r: usize,
    budget: &Budget,
) -> Result<BlowupCheck> {
    if m == 0 || two_r == 0 {
        return Err(Error::Precondition("need m >= 1 and two_r >= 1".into()));
    }
    let lhs = blowup_top_minor_density(g, m, two_r, Denominator::Vertices, budget)?;
    let base_top_density = blowup_top_minor_density(g, 1, two_r, Denominator::Vertices, budget)?;
    let (base_max_density, _) = max_density(g, Denominator::Vertices)?;
    let rhs = Ratio::from_integer((two_r * (m - 1) + 1) as i64) * base_top_density
        + Ratio::from_integer((m * m) as i64) * base_max_density
        + Ratio::from_integer((m - 1) as i64);
    Ok(BlowupCheck {
        m,
        two_r,
        lhs,
        base_top_density,
        base_max_density,
        rhs,
        holds: lhs <= rhs,
    })
}

/// The weight-`a` layer of a completion drawn inside a blow-up of the
/// base graph: the pattern is the (a-1)-subdivision of the layer's
/// underlying multigraph, and every pattern vertex maps to a distinct
/// blow-up vertex because walk interiors take fresh copies.
#[derive(Clone, Debug)]
pub struct LayerEmbedding {
    pub depth: usize,
    pub copies: usize,
    pub pattern: Multigraph,
    pub vertex_image: Vec<VertexId>,
    pub blowup: Multigraph,
}

impl LayerEmbedding {
    pub fn verify(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &v in &self.vertex_image {
            if v >= self.blowup.vertex_count() || !seen.insert(v) {
                return Err(Error::Precondition(
                    "layer embedding must be injective into the blow-up".into(),
                ));
            }
        }
        if self.vertex_image.len() != self.pattern.vertex_count() {
            return Err(Error::Precondition("one image per pattern vertex".into()));
        }
        // The image must be a subgraph: count demanded edges per pair.
        let mut need: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        for e in 0..self.pattern.edge_count() {
            let (u, v) = self.pattern.endpoints(e);
            let (a, b) = (self.vertex_image[u], self.vertex_image[v]);
            *need.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
        let mut have: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        for &(u, v) in self.blowup.edges() {
            *have.entry((u.min(v), u.max(v))).or_insert(0) += 1;
        }
        for (pair, n) in need {
            if have.get(&pair).copied().unwrap_or(0) < n {
                return Err(Error::Precondition(format!(
                    "pattern demands {n} edges between blow-up vertices {} and {}",
                    pair.0, pair.1
                )));
            }
        }
        Ok(())
    }
}

/// Builds the subdivision embedding of layer `a` into the smallest
/// blow-up that can host it: interior occurrence j of a vertex goes to
/// copy j, copy 0 carries the branch vertices, and the number of
/// copies is one more than the worst interior count.
pub fn embed_layer_into_blowup(fc: &FraternalCompletion, a: usize) -> Result<LayerEmbedding> {
    if a == 0 || a > fc.depth() {
        return Err(Error::Precondition(format!(
            "layer {a} outside completed depth {}",
            fc.depth()
        )));
    }
    let n = fc.vertex_count();
    let base = Multigraph::new(n, &fc.base.arcs)?;
    let layer: Vec<usize> = fc.layer(a).collect();
    let underlying: Vec<(VertexId, VertexId)> = layer
        .iter()
        .map(|&id| (fc.arcs[id].tail, fc.arcs[id].head))
        .collect();
    let pattern = Multigraph::new(n, &underlying)?.subdivide_all(a - 1);
    let mut occurrences = vec![0usize; n];
    let walks: Vec<_> = layer.iter().map(|&id| fc.walk_of(id)).collect();
    for w in &walks {
        for &v in &w.vertices[1..w.vertices.len() - 1] {
            occurrences[v] += 1;
        }
    }
    let copies = 1 + occurrences.iter().copied().max().unwrap_or(0);
    let mut vertex_image: Vec<VertexId> = (0..n).map(|v| v * copies).collect();
    let mut next_copy = vec![1usize; n];
    for w in &walks {
        for &v in &w.vertices[1..w.vertices.len() - 1] {
            vertex_image.push(v * copies + next_copy[v]);
            next_copy[v] += 1;
        }
    }
    let blowup = base.blow_up(copies)?;
    let embedding = LayerEmbedding {
        depth: a,
        copies,
        pattern,
        vertex_image,
        blowup,
    };
    embedding.verify()?;
    Ok(embedding)
}

/// Outcome of checking a vertex colouring against the low-treedepth
/// hypothesis and the induced edge colouring against its cycle demand.
#[derive(Clone, Debug)]
pub struct F0Report {
    pub hypothesis_holds: bool,
    pub failing_classes: Option<(Vec<usize>, usize)>,
    pub conclusion_holds: bool,
    pub violating_cycle: Option<Cycle>,
    pub edge_colours: Vec<usize>,
    pub edge_palette: usize,
}

/// Hypothesis: every union of i <= r + 1 colour classes induces
/// treedepth at most i. Conclusion: colouring each edge by its pair of
/// endpoint colours gives every cycle of length l at least
/// min(r + 1, ceil(log2 l)) distinct colours. Both are checked.
pub fn verify_f0_colouring(
    g: &Multigraph,
    vertex_colours: &[usize],
    r: usize,
    budget: &Budget,
) -> Result<F0Report> {
    let n = g.vertex_count();
    if vertex_colours.len() != n {
        return Err(Error::Precondition("one colour per vertex".into()));
    }
    if vertex_colours.iter().any(|&c| c == 0) {
        return Err(Error::Precondition("colours are 1-based".into()));
    }
    let used: Vec<usize> = vertex_colours
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut failing: Option<(Vec<usize>, usize)> = None;
    for size in 1..=(r + 1).min(used.len()) {
        let mut cur = Vec::new();
        for_each_subset(&used, size, 0, &mut cur, &mut |subset| {
            let verts: Vec<VertexId> = (0..n)
                .filter(|&v| subset.contains(&vertex_colours[v]))
                .collect();
            let (sub, _) = g.induced(&verts);
            let (td, _) = treedepth_exact(&sub, budget)?;
            if td > size {
                failing = Some((subset.to_vec(), td));
                return Ok(true);
            }
            Ok(false)
        })?;
        if failing.is_some() {
            break;
        }
    }
    let mut pair_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in 0..g.edge_count() {
        let (u, v) = g.endpoints(e);
        let key = (
            vertex_colours[u].min(vertex_colours[v]),
            vertex_colours[u].max(vertex_colours[v]),
        );
        pair_index.entry(key).or_insert(0);
    }
    for (i, (_, slot)) in pair_index.iter_mut().enumerate() {
        *slot = i + 1;
    }
    let edge_colours: Vec<usize> = (0..g.edge_count())
        .map(|e| {
            let (u, v) = g.endpoints(e);
            let key = (
                vertex_colours[u].min(vertex_colours[v]),
                vertex_colours[u].max(vertex_colours[v]),
            );
            pair_index[&key]
        })
        .collect();
    let violation =
        first_cycle_violation(g, &edge_colours, &|l| (r + 1).min(ceil_log2(l)), budget)?;
    Ok(F0Report {
        hypothesis_holds: failing.is_none(),
        failing_classes: failing,
        conclusion_holds: violation.is_none(),
        violating_cycle: violation.map(|(c, _)| c),
        edge_palette: pair_index.len(),
        edge_colours,
    })
}

/// Smallest vertex palette whose unions of i <= p colour classes all
/// induce treedepth at most i, found by exhaustive search over
/// restricted-growth colourings.
pub fn low_td_colouring_bruteforce(
    g: &Multigraph,
    p: usize,
    budget: &Budget,
) -> Result<(Vec<usize>, usize)> {
    if p == 0 {
        return Err(Error::Precondition("p must be positive".into()));
    }
    let n = g.vertex_count();
    if n == 0 {
        return Ok((Vec::new(), 0));
    }
    let mut meter = Meter::new(budget.max_search_nodes, "low-treedepth palette search");
    for cap in 1..=n {
        let mut colours = vec![0usize; n];
        if assign_vertices(g, 0, 0, cap, p, &mut colours, budget, &mut meter)? {
            return Ok((colours.clone(), colours.iter().copied().max().unwrap()));
        }
    }
    Err(Error::Internal("distinct colours always satisfy the condition".into()))
}

#[allow(clippy::too_many_arguments)]
fn assign_vertices(
    g: &Multigraph,
    v: usize,
    used: usize,
    cap: usize,
    p: usize,
    colours: &mut Vec<usize>,
    budget: &Budget,
    meter: &mut Meter,
) -> Result<bool> {
    let n = g.vertex_count();
    if v == n {
        return low_td_condition(g, colours, used, p, budget);
    }
    meter.tick()?;
    for c in 1..=cap.min(used + 1) {
        colours[v] = c;
        if assign_vertices(g, v + 1, used.max(c), cap, p, colours, budget, meter)? {
            return Ok(true);
        }
    }
    colours[v] = 0;
    Ok(false)
}

fn low_td_condition(
    g: &Multigraph,
    colours: &[usize],
    palette: usize,
    p: usize,
    budget: &Budget,
) -> Result<bool> {
    let n = g.vertex_count();
    let all: Vec<usize> = (1..=palette).collect();
    for size in 1..=p.min(palette) {
        let mut cur = Vec::new();
        let mut bad = false;
        for_each_subset(&all, size, 0, &mut cur, &mut |subset| {
            let verts: Vec<VertexId> = (0..n)
                .filter(|&v| subset.contains(&colours[v]))
                .collect();
            let (sub, _) = g.induced(&verts);
            let (td, _) = treedepth_exact(&sub, budget)?;
            if td > size {
                bad = true;
                return Ok(true);
            }
            Ok(false)
        })?;
        if bad {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Calls `f` on every `size`-subset of `items` in lexicographic order;
/// `f` returning true stops the enumeration early.
fn for_each_subset(
    items: &[usize],
    size: usize,
    start: usize,
    cur: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> Result<bool>,
) -> Result<bool> {
    if cur.len() == size {
        return f(cur);
    }
    for i in start..items.len() {
        if items.len() - i < size - cur.len() {
            break;
        }
        cur.push(items[i]);
        let stop = for_each_subset(items, size, i + 1, cur, f)?;
        cur.pop();
        if stop {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::complete_to_depth;
    use crate::density::min_indegree_orientation;
    use crate::gen;
    use proptest::prelude::*;

    fn budget() -> Budget {
        Budget::default()
    }

    fn ratio(a: i64, b: i64) -> Ratio<i64> {
        Ratio::new(a, b)
    }

    #[test]
    fn function_duals() {
        let id = FunctionSpec::Identity;
        assert_eq!(id.eval(5), 5);
        assert_eq!(id.dual_max_arg(3), 3);
        assert_eq!(id.dual_max_arg(0), 0);
        let lg = FunctionSpec::Log2Ceil;
        assert_eq!(lg.eval(1), 0);
        assert_eq!(lg.eval(2), 1);
        assert_eq!(lg.eval(4), 2);
        assert_eq!(lg.eval(5), 3);
        assert_eq!(lg.dual_max_arg(0), 1);
        assert_eq!(lg.dual_max_arg(1), 2);
        assert_eq!(lg.dual_max_arg(3), 8);
    }

    #[test]
    fn depth_zero_matches_subgraph_density() {
        for g in [
            gen::cycle(4).unwrap(),
            gen::clique(4).unwrap(),
            gen::multicycle(3, 2).unwrap(),
            gen::theta(3, 2).unwrap(),
            gen::star(4).unwrap(),
        ] {
            let (want, _) = max_density(&g, Denominator::Vertices).unwrap();
            let (got, w) = top_minor_density(&g, 0, Denominator::Vertices, &budget()).unwrap();
            assert_eq!(got, want);
            w.verify(&g, 0).unwrap();
        }
    }

    #[test]
    fn frozen_top_minor_values() {
        let b = budget();
        let c6 = gen::cycle(6).unwrap();
        for two_r in 0..=2 {
            let (v, w) = top_minor_density(&c6, two_r, Denominator::Vertices, &b).unwrap();
            assert_eq!(v, ratio(1, 1), "c6 at depth {two_r}");
            w.verify(&c6, two_r).unwrap();
        }
        let k4 = gen::clique(4).unwrap();
        for two_r in 0..=2 {
            let (v, _) = top_minor_density(&k4, two_r, Denominator::Vertices, &b).unwrap();
            assert_eq!(v, ratio(3, 2));
        }
        let theta = gen::theta(3, 2).unwrap();
        let vals: Vec<_> = (0..=2)
            .map(|t| top_minor_density(&theta, t, Denominator::Vertices, &b).unwrap().0)
            .collect();
        assert_eq!(vals, vec![ratio(6, 5), ratio(3, 2), ratio(3, 2)]);
        // A subdivided clique recovers the clique one level up.
        let sk4 = k4.subdivide_all(1);
        let (v, w) = top_minor_density(&sk4, 2, Denominator::Vertices, &b).unwrap();
        assert_eq!(v, ratio(3, 2));
        assert_eq!(w.pattern.edge_count(), 6);
        w.verify(&sk4, 2).unwrap();
    }

    #[test]
    fn per_tree_denominator_reports_arboricity_numerator() {
        let b = budget();
        let k4 = gen::clique(4).unwrap();
        let (v, w) = top_minor_density(&k4, 0, Denominator::VerticesLessOne, &b).unwrap();
        assert_eq!(v, ratio(2, 1));
        w.verify(&k4, 0).unwrap();
        let c6 = gen::cycle(6).unwrap();
        let (v, _) = top_minor_density(&c6, 2, Denominator::VerticesLessOne, &b).unwrap();
        assert_eq!(v, ratio(2, 1));
    }

    #[test]
    fn profile_search_agrees_with_subset_search() {
        let b = budget();
        for g in [gen::cycle(2).unwrap(), gen::cycle(3).unwrap(), gen::path(3).unwrap()] {
            for m in 1..=2 {
                for two_r in 1..=2 {
                    let fast = blowup_top_minor_density(&g, m, two_r, Denominator::Vertices, &b)
                        .unwrap();
                    let blown = g.blow_up(m).unwrap();
                    let (slow, _) =
                        top_minor_density(&blown, two_r, Denominator::Vertices, &b).unwrap();
                    assert_eq!(fast, slow, "m={m} two_r={two_r}");
                }
            }
        }
    }

    #[test]
    fn frozen_blowup_densities() {
        let b = budget();
        let k2 = gen::path(2).unwrap();
        assert_eq!(
            blowup_top_minor_density(&k2, 2, 1, Denominator::Vertices, &b).unwrap(),
            ratio(1, 1)
        );
        let c3 = gen::cycle(3).unwrap();
        assert_eq!(
            blowup_top_minor_density(&c3, 2, 1, Denominator::Vertices, &b).unwrap(),
            ratio(2, 1)
        );
    }

    #[test]
    fn blowup_lemma_on_small_graphs() {
        let b = budget();
        for g in [gen::cycle(3).unwrap(), gen::clique(4).unwrap(), gen::theta(3, 2).unwrap()] {
            for m in 1..=2 {
                for two_r in 1..=2 {
                    let check = check_blowup_lemma(&g, m, two_r, &b).unwrap();
                    assert!(check.holds, "m={m} two_r={two_r} lhs={} rhs={}", check.lhs, check.rhs);
                }
            }
        }
        // m = 1 leaves the left side at the base density.
        let c = check_blowup_lemma(&gen::cycle(4).unwrap(), 1, 1, &b).unwrap();
        assert_eq!(c.lhs, c.base_top_density);
    }

    #[test]
    fn shallow_minor_values() {
        let b = budget();
        let c6 = gen::cycle(6).unwrap();
        let (v, balls) = shallow_minor_density(&c6, 1, &b).unwrap();
        assert_eq!(v, ratio(1, 1));
        assert!(balls.len() <= 3);
        let sk4 = gen::clique(4).unwrap().subdivide_all(1);
        let (v, _) = shallow_minor_density(&sk4, 1, &b).unwrap();
        assert_eq!(v, ratio(3, 2));
        // Radius zero is plain subgraph density of the simplification.
        for g in [gen::multicycle(3, 2).unwrap(), gen::clique(4).unwrap()] {
            let (v, _) = shallow_minor_density(&g, 0, &b).unwrap();
            let (want, _) = max_density(&g.simplified(), Denominator::Vertices).unwrap();
            assert_eq!(v, want);
        }
    }

    #[test]
    fn minors_dominate_simple_top_minors() {
        let b = budget();
        for g in [
            gen::cycle(6).unwrap(),
            gen::clique(4).unwrap(),
            gen::clique(4).unwrap().subdivide_all(1),
            gen::star(4).unwrap(),
        ] {
            for r in 0..=1 {
                let (minor, _) = shallow_minor_density(&g, r, &b).unwrap();
                let (top, _) = top_minor_density_simple(&g, 2 * r, &b).unwrap();
                assert!(minor >= top, "r={r}: {minor} < {top}");
            }
        }
    }

    #[test]
    fn expansion_theorem_instances() {
        let b = budget();
        let k3 = gen::cycle(3).unwrap();
        let c = check_expansion_theorem(&k3, &FunctionSpec::Identity, 0, &b).unwrap();
        assert!(c.holds);
        assert_eq!(c.palette, 2);
        assert_eq!(c.dual_value, 1);
        assert_eq!(c.minor_density, ratio(1, 1));
        let c4 = gen::cycle(4).unwrap();
        let c = check_expansion_theorem(&c4, &FunctionSpec::Log2Ceil, 0, &b).unwrap();
        assert!(c.holds);
        assert_eq!(c.palette, 2);
        assert_eq!(c.dual_value, 2);
        assert_eq!(c.bound, 8);
    }

    fn completion_of(arcs: &[(usize, usize)], n: usize, depth: usize) -> FraternalCompletion {
        let o = crate::density::Orientation {
            vertex_count: n,
            arcs: arcs.to_vec(),
        };
        complete_to_depth(o, depth, &budget()).unwrap()
    }

    #[test]
    fn embedding_a_shared_head_pair() {
        let fc = completion_of(&[(0, 2), (1, 2)], 3, 2);
        let emb = embed_layer_into_blowup(&fc, 2).unwrap();
        assert_eq!(emb.copies, 2);
        assert_eq!(emb.pattern.vertex_count(), 4);
        assert_eq!(emb.pattern.edge_count(), 2);
        // The interior occurrence of the shared head takes copy 1.
        assert_eq!(emb.vertex_image[3], 2 * 2 + 1);
        emb.verify().unwrap();
    }

    #[test]
    fn embedding_trivial_layers() {
        let fc = completion_of(&[(0, 1)], 2, 2);
        let emb = embed_layer_into_blowup(&fc, 2).unwrap();
        assert_eq!(emb.copies, 1);
        assert_eq!(emb.pattern.edge_count(), 0);
        emb.verify().unwrap();
        // A directed triangle spawns nothing: no shared heads anywhere.
        let fc = completion_of(&[(0, 1), (1, 2), (2, 0)], 3, 2);
        let emb = embed_layer_into_blowup(&fc, 2).unwrap();
        assert_eq!(emb.copies, 1);
        assert_eq!(emb.pattern.edge_count(), 0);
    }

    #[test]
    fn embedding_a_star_counts_head_pairs() {
        let fc = completion_of(&[(0, 3), (1, 3), (2, 3)], 4, 2);
        let emb = embed_layer_into_blowup(&fc, 2).unwrap();
        // The centre interiors all C(3, 2) = 3 weight-2 walks, so the
        // subdivided triangle pattern needs copies 1 + 3.
        assert_eq!(emb.copies, 4);
        assert_eq!(emb.pattern.edge_count(), 6);
        assert_eq!(emb.pattern.vertex_count(), 7);
        emb.verify().unwrap();
    }

    #[test]
    fn embedding_survives_non_simple_walks() {
        let fc = completion_of(&[(0, 2), (1, 2), (2, 1)], 3, 3);
        let emb = embed_layer_into_blowup(&fc, 3).unwrap();
        assert_eq!(emb.copies, 2);
        assert_eq!(emb.pattern.edge_count(), 3);
        assert_eq!(emb.pattern.vertex_count(), 5);
        emb.verify().unwrap();
    }

    #[test]
    fn f0_examples() {
        let b = budget();
        let p3 = gen::path(3).unwrap();
        let r = verify_f0_colouring(&p3, &[1, 2, 3], 1, &b).unwrap();
        assert!(r.hypothesis_holds && r.conclusion_holds);
        let c4 = gen::cycle(4).unwrap();
        let r = verify_f0_colouring(&c4, &[1, 2, 1, 3], 1, &b).unwrap();
        assert!(r.hypothesis_holds);
        assert!(r.conclusion_holds);
        assert_eq!(r.edge_palette, 2);
        let k3 = gen::cycle(3).unwrap();
        let r = verify_f0_colouring(&k3, &[1, 1, 1], 1, &b).unwrap();
        assert!(!r.hypothesis_holds);
        assert_eq!(r.failing_classes.as_ref().unwrap().0, vec![1]);
    }

    #[test]
    fn low_td_palettes() {
        let b = budget();
        let (cols, k) = low_td_colouring_bruteforce(&gen::cycle(3).unwrap(), 1, &b).unwrap();
        assert_eq!(k, 3);
        assert_eq!(cols.len(), 3);
        let (_, k) = low_td_colouring_bruteforce(&gen::cycle(4).unwrap(), 2, &b).unwrap();
        assert_eq!(k, 3);
        let (_, k) = low_td_colouring_bruteforce(&gen::path(4).unwrap(), 1, &b).unwrap();
        assert_eq!(k, 2);
        let (_, k) = low_td_colouring_bruteforce(&gen::clique(4).unwrap(), 3, &b).unwrap();
        assert_eq!(k, 4);
    }

    #[test]
    fn low_td_result_passes_the_hypothesis_check() {
        let b = budget();
        for g in [gen::cycle(4).unwrap(), gen::clique(4).unwrap(), gen::theta(3, 2).unwrap()] {
            for p in 1..=2 {
                let (cols, _) = low_td_colouring_bruteforce(&g, p, &b).unwrap();
                let report = verify_f0_colouring(&g, &cols, p - 1, &b).unwrap();
                assert!(report.hypothesis_holds);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn density_chain_is_monotone(n in 2usize..5, m in 1usize..7, seed in 0u64..60) {
            let g = gen::random_multigraph(n, m, seed).unwrap();
            let b = budget();
            let v0 = top_minor_density(&g, 0, Denominator::Vertices, &b).unwrap().0;
            let v1 = top_minor_density(&g, 1, Denominator::Vertices, &b).unwrap().0;
            let v2 = top_minor_density(&g, 2, Denominator::Vertices, &b).unwrap().0;
            prop_assert!(v0 <= v1 && v1 <= v2);
            let fast1 = blowup_top_minor_density(&g, 1, 1, Denominator::Vertices, &b).unwrap();
            let fast2 = blowup_top_minor_density(&g, 1, 2, Denominator::Vertices, &b).unwrap();
            prop_assert_eq!(fast1, v1);
            prop_assert_eq!(fast2, v2);
        }

        #[test]
        fn blowup_lemma_random(n in 2usize..4, m in 1usize..5, seed in 0u64..40, bm in 1usize..3, two_r in 1usize..3) {
            let g = gen::random_multigraph(n, m, seed).unwrap();
            let check = check_blowup_lemma(&g, bm, two_r, &budget()).unwrap();
            prop_assert!(check.holds);
        }
    }
}
