//! The cut-side mirror of the cycle story: colourings where every
//! edge cut must see many colours, spanning-tree packings that build
//! them, and exact values by exhaustive search.

use crate::budget::{Budget, Error, Result};
use crate::colouring::{min_palette_for, EdgeColouring};
use crate::cuts::{enumerate_cuts, Cut};
use crate::density::pack_forests;
use crate::flow::FlowNetwork;
use crate::graph::{EdgeId, Multigraph};
use std::collections::BTreeMap;

/// Outcome of checking one colouring against the cut condition.
#[derive(Clone, Debug)]
pub struct CutColouringReport {
    pub parameter_p: usize,
    pub valid: bool,
    pub violating_cut: Option<Cut>,
    pub colours_on_cut: usize,
}

/// Checks that every edge cut of size s gets at least min(s, p + 1)
/// colours, reporting the first violation in enumeration order. All
/// cuts are checked, not only the inclusion-minimal ones: a union of
/// bonds can fail the demand even when every bond meets it.
pub fn verify_cut_colouring(
    g: &Multigraph,
    col: &EdgeColouring,
    p: usize,
    budget: &Budget,
) -> Result<CutColouringReport> {
    if col.colours.len() != g.edge_count() {
        return Err(Error::Precondition(format!(
            "colouring covers {} edges, graph has {}",
            col.colours.len(),
            g.edge_count()
        )));
    }
    for cut in enumerate_cuts(g, budget)? {
        let distinct = col.distinct_on(&cut.edges);
        if distinct < cut.edges.len().min(p + 1) {
            return Ok(CutColouringReport {
                parameter_p: p,
                valid: false,
                violating_cut: Some(cut),
                colours_on_cut: distinct,
            });
        }
    }
    Ok(CutColouringReport {
        parameter_p: p,
        valid: true,
        violating_cut: None,
        colours_on_cut: 0,
    })
}

/// Exact minimum palette for the cut condition, by the same
/// restricted-growth search used on cycles.
pub fn arbstar_exact(g: &Multigraph, p: usize, budget: &Budget) -> Result<usize> {
    if p == 0 {
        return Err(Error::Precondition("p must be positive".into()));
    }
    if !g.is_connected() {
        return Err(Error::Precondition("cut palettes assume a connected graph".into()));
    }
    let constraints: Vec<(Vec<EdgeId>, usize)> = enumerate_cuts(g, budget)?
        .into_iter()
        .map(|c| {
            let t = c.edges.len().min(p + 1);
            (c.edges, t)
        })
        .collect();
    min_palette_for(g.edge_count(), &constraints, budget)
}

/// `k` pairwise edge-disjoint spanning trees, if they exist. Matroid
/// union packs `k` forests of maximum total size; the packing is a
/// tree packing exactly when it uses k(n - 1) edges.
pub fn tree_packing(g: &Multigraph, k: usize) -> Result<Option<Vec<Vec<EdgeId>>>> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::Precondition("empty graph has no spanning trees".into()));
    }
    if k == 0 {
        return Ok(Some(Vec::new()));
    }
    let home = pack_forests(g, k);
    let assigned = home.iter().filter(|h| h.is_some()).count();
    if assigned != k * (n - 1) {
        return Ok(None);
    }
    let mut trees = vec![Vec::new(); k];
    for (e, h) in home.iter().enumerate() {
        if let Some(i) = *h {
            trees[i].push(e);
        }
    }
    for tree in &trees {
        if !spans(g, tree) {
            return Err(Error::Internal("forest packing produced a non-tree".into()));
        }
    }
    Ok(Some(trees))
}

fn spans(g: &Multigraph, edges: &[EdgeId]) -> bool {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut merged = 0;
    for &e in edges {
        let (u, v) = g.endpoints(e);
        let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
        if ru == rv {
            return false;
        }
        parent[ru] = rv;
        merged += 1;
    }
    merged == n - 1
}

/// Which construction produced a packing-based cut colouring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PackingStrategy {
    /// p + 1 disjoint spanning trees, one colour each.
    Direct,
    /// 2p + 1 disjoint spanning trees of the edge-doubled graph; each
    /// original edge is coloured by its unordered pair of tree slots.
    Doubled,
}

/// Builds a valid cut colouring from spanning-tree packings when one
/// of the two constructions applies, verifying the result before
/// returning it. Direct needs p + 1 disjoint spanning trees and uses
/// p + 1 colours; Doubled needs 2p + 1 of them in the edge-doubled
/// graph and uses at most (p + 1)(2p + 1) colours.
pub fn colour_cuts_via_packing(
    g: &Multigraph,
    p: usize,
    budget: &Budget,
) -> Result<Option<(EdgeColouring, CutColouringReport, PackingStrategy)>> {
    if p == 0 {
        return Err(Error::Precondition("p must be positive".into()));
    }
    if !g.is_connected() {
        return Err(Error::Precondition("cut colourings assume a connected graph".into()));
    }
    let m = g.edge_count();
    if let Some(trees) = tree_packing(g, p + 1)? {
        let mut colours = vec![1usize; m];
        for (i, tree) in trees.iter().enumerate() {
            for &e in tree {
                colours[e] = i + 1;
            }
        }
        let col = EdgeColouring::new(colours)?;
        let report = verify_cut_colouring(g, &col, p, budget)?;
        if !report.valid {
            return Err(Error::Internal("direct tree packing coloured a cut badly".into()));
        }
        return Ok(Some((col, report, PackingStrategy::Direct)));
    }
    // Double every edge; copy of edge e gets id m + e.
    let mut doubled_edges = g.edges().to_vec();
    doubled_edges.extend_from_slice(g.edges());
    let doubled = Multigraph::new(g.vertex_count(), &doubled_edges)?;
    if let Some(trees) = tree_packing(&doubled, 2 * p + 1)? {
        let mut slot = vec![0usize; 2 * m];
        for (i, tree) in trees.iter().enumerate() {
            for &e in tree {
                slot[e] = i + 1;
            }
        }
        let mut pair_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for e in 0..m {
            let key = (slot[e].min(slot[m + e]), slot[e].max(slot[m + e]));
            pair_index.entry(key).or_insert(0);
        }
        for (i, (_, v)) in pair_index.iter_mut().enumerate() {
            *v = i + 1;
        }
        let colours: Vec<usize> = (0..m)
            .map(|e| pair_index[&(slot[e].min(slot[m + e]), slot[e].max(slot[m + e]))])
            .collect();
        let col = EdgeColouring::new(colours)?;
        if col.palette_size > (p + 1) * (2 * p + 1) {
            return Err(Error::Internal("doubled packing exceeded its palette".into()));
        }
        let report = verify_cut_colouring(g, &col, p, budget)?;
        if !report.valid {
            return Err(Error::Internal("doubled tree packing coloured a cut badly".into()));
        }
        return Ok(Some((col, report, PackingStrategy::Doubled)));
    }
    Ok(None)
}

/// Exact edge connectivity of a connected multigraph: the least
/// maximum flow from vertex 0 to any other vertex with unit
/// capacities both ways per edge.
pub fn edge_connectivity(g: &Multigraph) -> Result<usize> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::Precondition("edge connectivity needs two vertices".into()));
    }
    if !g.is_connected() {
        return Ok(0);
    }
    let mut best = u64::MAX;
    for t in 1..n {
        let mut net = FlowNetwork::new(n);
        for &(u, v) in g.edges() {
            net.add_undirected(u, v, 1);
        }
        best = best.min(net.max_flow(0, t) as u64);
    }
    Ok(best as usize)
}

/// The cut-palette growth checks on fat cycles plus, optionally, one
/// highly connected instance pinned to the exact value p + 1.
#[derive(Clone, Debug)]
pub struct DualPropositionReport {
    pub parameter_p: usize,
    /// (cycle length, exact cut palette of the p-fold fat cycle,
    /// demanded floor = ceil(length^(1/p))).
    pub cycle_values: Vec<(usize, usize, usize)>,
    pub growth_holds: bool,
    pub dense_connectivity: Option<usize>,
    pub dense_value: Option<usize>,
    pub dense_holds: Option<bool>,
}

/// Smallest t with t^p >= x.
pub fn ceil_root(x: usize, p: usize) -> usize {
    if p == 0 || x <= 1 {
        return x.min(1);
    }
    let mut t = 1u128;
    loop {
        if t.pow(p as u32) >= x as u128 {
            return t as usize;
        }
        t += 1;
    }
}

/// Checks the growth of the exact cut palette on fat cycles C_L with
/// every edge p-fold (value at least the p-th root of L, exactly L
/// when p = 1), and optionally that a (2p + 2)-edge-connected graph
/// sits exactly at p + 1. The growth floor is deliberately read
/// against the cut palette, not the cycle palette of the same graphs.
pub fn check_dual_proposition(
    p: usize,
    cycle_lengths: &[usize],
    dense: Option<&Multigraph>,
    budget: &Budget,
) -> Result<DualPropositionReport> {
    if p == 0 {
        return Err(Error::Precondition("p must be positive".into()));
    }
    let mut cycle_values = Vec::new();
    let mut growth_holds = true;
    for &len in cycle_lengths {
        let g = crate::gen::multicycle(len, p)?;
        let value = arbstar_exact(&g, p, budget)?;
        let need = ceil_root(len, p);
        growth_holds &= value >= need;
        if p == 1 {
            growth_holds &= value == len;
        }
        cycle_values.push((len, value, need));
    }
    let (mut dense_connectivity, mut dense_value, mut dense_holds) = (None, None, None);
    if let Some(d) = dense {
        let conn = edge_connectivity(d)?;
        if conn < 2 * p + 2 {
            return Err(Error::Precondition(format!(
                "dense instance is only {conn}-edge-connected, need {}",
                2 * p + 2
            )));
        }
        let value = arbstar_exact(d, p, budget)?;
        dense_connectivity = Some(conn);
        dense_value = Some(value);
        dense_holds = Some(value == p + 1);
    }
    Ok(DualPropositionReport {
        parameter_p: p,
        cycle_values,
        growth_holds,
        dense_connectivity,
        dense_value,
        dense_holds,
    })
}
