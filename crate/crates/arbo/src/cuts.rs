//! Edge cuts of a multigraph: one per bipartition of the vertices, with
//! bonds (cuts whose two sides both induce connected subgraphs) singled
//! out. Enumeration is exhaustive over the side containing vertex 0.

use crate::budget::{Budget, Error, Result};
use crate::graph::{EdgeId, Multigraph, VertexId};

/// The edges crossing one bipartition; `side` lists the part holding
/// vertex 0, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub side: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// The cut determined by a side membership mask.
pub fn cut_for_side(g: &Multigraph, in_side: &[bool]) -> Cut {
    let side = (0..g.vertex_count()).filter(|&v| in_side[v]).collect();
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(_, &(u, v))| in_side[u] != in_side[v])
        .map(|(e, _)| e)
        .collect();
    Cut { side, edges }
}

/// All `2^(n-1) - 1` cuts of `g`, one per proper bipartition, ordered
/// by the side mask over vertices 1..n.
pub fn enumerate_cuts(g: &Multigraph, budget: &Budget) -> Result<Vec<Cut>> {
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(Vec::new());
    }
    if n - 1 >= usize::BITS as usize || (1usize << (n - 1)) - 1 > budget.max_cut_sides {
        return Err(Error::Budget(format!(
            "{n} vertices give too many cut sides to enumerate"
        )));
    }
    let mut cuts = Vec::with_capacity((1 << (n - 1)) - 1);
    // Vertex 0 always sits in the side; the mask ranges over the rest,
    // skipping the full set.
    for mask in 0..(1usize << (n - 1)) - 1 {
        let mut in_side = vec![false; n];
        in_side[0] = true;
        for v in 1..n {
            in_side[v] = mask >> (v - 1) & 1 == 1;
        }
        cuts.push(cut_for_side(g, &in_side));
    }
    Ok(cuts)
}

/// Whether both sides of the cut induce connected subgraphs; for a
/// connected graph these are exactly the inclusion-minimal cuts.
pub fn is_bond(g: &Multigraph, cut: &Cut) -> bool {
    let n = g.vertex_count();
    let mut in_side = vec![false; n];
    for &v in &cut.side {
        in_side[v] = true;
    }
    let co: Vec<VertexId> = (0..n).filter(|&v| !in_side[v]).collect();
    let (a, _) = g.induced(&cut.side);
    let (b, _) = g.induced(&co);
    a.is_connected() && b.is_connected()
}

/// The bonds of `g`, in enumeration order.
pub fn bonds(g: &Multigraph, budget: &Budget) -> Result<Vec<Cut>> {
    Ok(enumerate_cuts(g, budget)?
        .into_iter()
        .filter(|c| is_bond(g, c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn digon_has_one_cut() {
        let g = gen::cycle(2).unwrap();
        let cuts = enumerate_cuts(&g, &Budget::default()).unwrap();
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].edges, vec![0, 1]);
        assert!(is_bond(&g, &cuts[0]));
    }

    #[test]
    fn path_cut_counts() {
        let g = gen::path(3).unwrap();
        let cuts = enumerate_cuts(&g, &Budget::default()).unwrap();
        assert_eq!(cuts.len(), 3);
        let bonds = bonds(&g, &Budget::default()).unwrap();
        assert_eq!(bonds.len(), 2);
        assert!(bonds.iter().all(|c| c.edges.len() == 1));
    }

    #[test]
    fn square_bonds_are_the_edge_pairs() {
        let g = gen::cycle(4).unwrap();
        let cuts = enumerate_cuts(&g, &Budget::default()).unwrap();
        assert_eq!(cuts.len(), 7);
        let bs = bonds(&g, &Budget::default()).unwrap();
        assert_eq!(bs.len(), 6);
        assert!(bs.iter().all(|c| c.edges.len() == 2));
    }

    #[test]
    fn clique_cut_sizes() {
        let g = gen::clique(4).unwrap();
        let bs = bonds(&g, &Budget::default()).unwrap();
        let mut sizes: Vec<usize> = bs.iter().map(|c| c.edges.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3, 3, 3, 3, 4, 4, 4]);
    }

    #[test]
    fn star_bonds() {
        let g = gen::star(3).unwrap();
        let cuts = enumerate_cuts(&g, &Budget::default()).unwrap();
        assert_eq!(cuts.len(), 7);
        let bs = bonds(&g, &Budget::default()).unwrap();
        // One per leaf edge. The all-edges cut around the center is no
        // bond: its far side is three isolated leaves.
        assert_eq!(bs.len(), 3);
        assert!(bs.iter().all(|c| c.edges.len() == 1));
    }

    #[test]
    fn doubling_doubles_bond_sizes() {
        let g = gen::multicycle(3, 2).unwrap();
        let bs = bonds(&g, &Budget::default()).unwrap();
        assert_eq!(bs.len(), 3);
        assert!(bs.iter().all(|c| c.edges.len() == 4));
    }

    #[test]
    fn budget_refuses_wide_graphs() {
        let g = gen::path(6).unwrap();
        let tight = Budget {
            max_cut_sides: 7,
            ..Budget::default()
        };
        assert!(enumerate_cuts(&g, &tight).is_err());
    }
}
