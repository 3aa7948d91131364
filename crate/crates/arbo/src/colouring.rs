//! Edge colourings where every cycle must see many colours: the
//! completion-based colouring pipeline, exhaustive verification, exact
//! brute-force palettes, and the density lower bound.

use crate::budget::{Budget, Error, Meter, Result};
use crate::completion::complete_to_depth;
use crate::cycles::{enumerate_cycles, Cycle};
use crate::density::{min_indegree_orientation, Denominator};
use crate::expansion::{top_minor_density, FunctionSpec};
use crate::graph::{EdgeId, Multigraph};
use num::rational::Ratio;

/// A total edge colouring with colours `1..=palette_size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColouring {
    pub colours: Vec<usize>,
    pub palette_size: usize,
}

impl EdgeColouring {
    /// Wraps per-edge colours; the palette is the distinct-colour count.
    pub fn new(colours: Vec<usize>) -> Result<Self> {
        if colours.iter().any(|&c| c == 0) {
            return Err(Error::Precondition("colours are 1-based".into()));
        }
        let mut seen = colours.clone();
        seen.sort_unstable();
        seen.dedup();
        Ok(EdgeColouring {
            colours,
            palette_size: seen.len(),
        })
    }

    pub fn distinct_on(&self, edges: &[EdgeId]) -> usize {
        let mut cs: Vec<usize> = edges.iter().map(|&e| self.colours[e]).collect();
        cs.sort_unstable();
        cs.dedup();
        cs.len()
    }
}

/// Outcome of checking one colouring against the cycle condition.
#[derive(Clone, Debug)]
pub struct ValidityReport {
    pub parameter_p: usize,
    pub valid: bool,
    pub violating_cycle: Option<Cycle>,
    pub colours_on_cycle: usize,
}

/// First cycle (in canonical order) getting fewer than `required(len)`
/// distinct colours, with its colour count.
pub(crate) fn first_cycle_violation(
    g: &Multigraph,
    colours: &[usize],
    required: &dyn Fn(usize) -> usize,
    budget: &Budget,
) -> Result<Option<(Cycle, usize)>> {
    let cycles = enumerate_cycles(g, None, budget)?;
    for cycle in cycles {
        let mut cs: Vec<usize> = cycle.edges.iter().map(|&e| colours[e]).collect();
        cs.sort_unstable();
        cs.dedup();
        if cs.len() < required(cycle.len()) {
            let count = cs.len();
            return Ok(Some((cycle, count)));
        }
    }
    Ok(None)
}

/// Checks that every cycle of length l gets at least min(l, p + 1)
/// colours, reporting the first violation in canonical cycle order.
pub fn verify_colouring(
    g: &Multigraph,
    col: &EdgeColouring,
    p: usize,
    budget: &Budget,
) -> Result<ValidityReport> {
    if col.colours.len() != g.edge_count() {
        return Err(Error::Precondition(format!(
            "colouring covers {} edges, graph has {}",
            col.colours.len(),
            g.edge_count()
        )));
    }
    let hit = first_cycle_violation(g, &col.colours, &|l| l.min(p + 1), budget)?;
    Ok(match hit {
        None => ValidityReport {
            parameter_p: p,
            valid: true,
            violating_cycle: None,
            colours_on_cycle: 0,
        },
        Some((cycle, count)) => ValidityReport {
            parameter_p: p,
            valid: false,
            violating_cycle: Some(cycle),
            colours_on_cycle: count,
        },
    })
}

/// The full upper-bound pipeline: orient with minimum max indegree,
/// complete to depth p, colour the conflict graph greedily (largest
/// degree first), and verify the result. With `proper`, edges sharing
/// an endpoint are also forced apart. The verification is mandatory:
/// an invalid result is an internal error, never returned.
pub fn colour_arbp(
    g: &Multigraph,
    p: usize,
    proper: bool,
    budget: &Budget,
) -> Result<(EdgeColouring, ValidityReport)> {
    if p == 0 {
        return Err(Error::Precondition("p must be positive".into()));
    }
    let m = g.edge_count();
    let o = min_indegree_orientation(g);
    let fc = complete_to_depth(o, p, budget)?;
    let cg = fc.conflicts(budget)?;
    let mut adj = vec![vec![false; m]; m];
    for e in 0..m {
        for f in 0..m {
            if e == f {
                continue;
            }
            let touching = {
                let (a, b) = g.endpoints(e);
                let (c, d) = g.endpoints(f);
                a == c || a == d || b == c || b == d
            };
            adj[e][f] = cg.adjacent(e, f) || (proper && touching);
        }
    }
    let degree = |e: usize| adj[e].iter().filter(|&&b| b).count();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&e| (usize::MAX - degree(e), e));
    let mut colours = vec![0usize; m];
    for &e in &order {
        let mut taken: Vec<usize> = (0..m)
            .filter(|&f| adj[e][f] && colours[f] != 0)
            .map(|f| colours[f])
            .collect();
        taken.sort_unstable();
        taken.dedup();
        let mut c = 1;
        for t in taken {
            if t == c {
                c += 1;
            } else if t > c {
                break;
            }
        }
        colours[e] = c;
    }
    let colouring = EdgeColouring::new(colours)?;
    let report = verify_colouring(g, &colouring, p, budget)?;
    if !report.valid {
        return Err(Error::Internal(format!(
            "pipeline colouring violates the cycle condition at p = {p}"
        )));
    }
    Ok((colouring, report))
}

/// Minimum palette admitting an assignment where every constraint's
/// edge set sees at least its threshold of distinct colours. Searches
/// restricted-growth strings, so colour permutations are tried once.
pub(crate) fn min_palette_for(
    edge_count: usize,
    constraints: &[(Vec<EdgeId>, usize)],
    budget: &Budget,
) -> Result<usize> {
    let active: Vec<&(Vec<EdgeId>, usize)> =
        constraints.iter().filter(|(_, t)| *t >= 2).collect();
    for (edges, t) in &active {
        if edges.len() < *t {
            return Err(Error::Precondition(format!(
                "a {}-edge constraint demands {} distinct colours",
                edges.len(),
                t
            )));
        }
    }
    if edge_count == 0 || active.is_empty() {
        return Ok(1);
    }
    // Constraints become checkable once their largest edge is coloured.
    let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); edge_count];
    for (i, (edges, _)) in active.iter().enumerate() {
        by_last[*edges.iter().max().unwrap()].push(i);
    }
    let floor = active.iter().map(|(_, t)| *t).max().unwrap();
    let mut meter = Meter::new(budget.max_search_nodes, "palette search");
    for cap in floor..=edge_count {
        let mut colours = vec![0usize; edge_count];
        if assign(0, 0, cap, &mut colours, &active, &by_last, &mut meter)? {
            return Ok(cap);
        }
    }
    Err(Error::Internal("rainbow colouring rejected".into()))
}

fn assign(
    e: usize,
    used: usize,
    cap: usize,
    colours: &mut Vec<usize>,
    active: &[&(Vec<EdgeId>, usize)],
    by_last: &[Vec<usize>],
    meter: &mut Meter,
) -> Result<bool> {
    if e == colours.len() {
        return Ok(true);
    }
    meter.tick()?;
    for c in 1..=cap.min(used + 1) {
        colours[e] = c;
        let ok = by_last[e].iter().all(|&i| {
            let (edges, t) = active[i];
            let mut cs: Vec<usize> = edges.iter().map(|&x| colours[x]).collect();
            cs.sort_unstable();
            cs.dedup();
            cs.len() >= *t
        });
        if ok && assign(e + 1, used.max(c), cap, colours, active, by_last, meter)? {
            return Ok(true);
        }
    }
    colours[e] = 0;
    Ok(false)
}

fn cycle_constraints(
    g: &Multigraph,
    required: &dyn Fn(usize) -> usize,
    budget: &Budget,
) -> Result<Vec<(Vec<EdgeId>, usize)>> {
    Ok(enumerate_cycles(g, None, budget)?
        .into_iter()
        .map(|c| {
            let t = required(c.len());
            (c.edges, t)
        })
        .collect())
}

/// Exact generalized arboricity: the least palette where every cycle
/// of length l gets at least min(l, p + 1) colours.
pub fn arbp_exact(g: &Multigraph, p: usize, budget: &Budget) -> Result<usize> {
    if p == 0 {
        return Err(Error::Precondition("p must be positive".into()));
    }
    let cs = cycle_constraints(g, &|l| l.min(p + 1), budget)?;
    min_palette_for(g.edge_count(), &cs, budget)
}

/// Exact minimum palette for an arbitrary threshold function: every
/// cycle of length l must get at least min(f(l), p + 1) colours.
pub fn nf_exact(g: &Multigraph, f: &FunctionSpec, p: usize, budget: &Budget) -> Result<usize> {
    let cs = cycle_constraints(g, &|l| f.eval(l).min(p + 1), budget)?;
    min_palette_for(g.edge_count(), &cs, budget)
}

/// Density lower bound: the largest of the depth-(p-1)/2 topological
/// minor density and the best arboricity over patterns with a short
/// subdivision in g. The p-th power of the exact value dominates it.
/// An alternative reading takes depth (p-2)/2; this uses the larger
/// radius, so the dominance tests exercise the stronger inequality.
pub fn arbp_lower_bound(g: &Multigraph, p: usize, budget: &Budget) -> Result<Ratio<i64>> {
    if p == 0 {
        return Err(Error::Precondition("p must be positive".into()));
    }
    let two_r = p - 1;
    let (per_vertex, _) = top_minor_density(g, two_r, Denominator::Vertices, budget)?;
    let (vertices_less_one, _) =
        top_minor_density(g, two_r, Denominator::VerticesLessOne, budget)?;
    let best_arboricity = vertices_less_one.ceil();
    Ok(per_vertex.max(best_arboricity))
}

/// Convenience: does value^p dominate the bound?
pub fn power_dominates(value: usize, p: usize, bound: Ratio<i64>) -> bool {
    let mut power = Ratio::from_integer(1i64);
    for _ in 0..p {
        power *= Ratio::from_integer(value as i64);
    }
    power >= bound
}
