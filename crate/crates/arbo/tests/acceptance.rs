//! Acceptance gate: one test per shipped guarantee, each driving the
//! fast construction against its independent oracle over the shared
//! corpus (every connected multigraph with at most 6 vertices and 9
//! edges, plus the named generated families).

use std::collections::BTreeMap;

use num::Zero;
use once_cell::sync::Lazy;

use arbo::budget::Budget;
use arbo::colouring::{arbp_exact, arbp_lower_bound, colour_arbp, power_dominates};
use arbo::completion::complete_to_depth;
use arbo::corpus::{connected_multigraphs, standard_families};
use arbo::cycles::enumerate_cycles;
use arbo::density::{arboricity, forest_partition, max_density, min_indegree_orientation, Denominator};
use arbo::dual::{arbstar_exact, ceil_root, check_dual_proposition, colour_cuts_via_packing, PackingStrategy};
use arbo::expansion::{check_blowup_lemma, check_expansion_theorem, embed_layer_into_blowup, FunctionSpec};
use arbo::gen;
use arbo::graph::EdgeId;
use arbo::treedepth::{ceil_log2, check_td_cycle_bounds, dfs_cycle_family, treedepth_exact};
use arbo::Multigraph;

/// Exhaustive census plus the named families, built once.
static CORPUS: Lazy<Vec<(String, Multigraph)>> = Lazy::new(|| {
    let mut out: Vec<(String, Multigraph)> = connected_multigraphs(6, 9)
        .into_iter()
        .enumerate()
        .map(|(i, g)| (format!("census_{i}"), g))
        .collect();
    out.extend(standard_families().unwrap());
    out
});

fn budget() -> Budget {
    Budget::default()
}

#[test]
fn criterion_01_pipeline_colourings_verify() {
    let b = budget();
    let mut runs = 0usize;
    for (name, g) in CORPUS.iter() {
        for p in 1..=3 {
            let (_, report) = colour_arbp(g, p, false, &b)
                .unwrap_or_else(|e| panic!("{name} p={p}: pipeline failed: {e}"));
            assert!(
                report.valid,
                "{name} p={p}: invalid colouring, cycle {:?}",
                report.violating_cycle
            );
            runs += 1;
        }
    }
    println!("PASS 01 pipeline soundness: {runs} colourings verified");
}

#[test]
fn criterion_02_palette_within_degree_bound() {
    let b = budget();
    let mut worst = (0u128, 0u128);
    for (name, g) in CORPUS.iter() {
        for p in 1..=3 {
            let fc = complete_to_depth(min_indegree_orientation(g), p, &b).unwrap();
            let bound = fc.conflict_degree_bound();
            let (col, _) = colour_arbp(g, p, false, &b).unwrap();
            let palette = col.palette_size as u128;
            assert!(
                palette <= bound + 1,
                "{name} p={p}: palette {palette} exceeds bound {bound} + 1"
            );
            if palette > worst.0 {
                worst = (palette, bound + 1);
            }
        }
    }
    println!("PASS 02 palette bound: worst palette {} against cap {}", worst.0, worst.1);
}

#[test]
fn criterion_03_exact_power_dominates_lower_bound() {
    let b = budget();
    let mut runs = 0usize;
    for (name, g) in CORPUS.iter().filter(|(_, g)| (1..=8).contains(&g.edge_count())) {
        for p in 1..=2 {
            let value = arbp_exact(g, p, &b).unwrap();
            let lb = arbp_lower_bound(g, p, &b).unwrap();
            assert!(
                power_dominates(value, p, lb),
                "{name} p={p}: {value}^{p} < lower bound {lb}"
            );
            runs += 1;
        }
    }
    println!("PASS 03 lower bound: {runs} instances dominated");
}

#[test]
fn criterion_04_p1_is_arboricity_with_density_sandwich() {
    let b = budget();
    let mut exact_runs = 0usize;
    for (name, g) in CORPUS.iter() {
        let (arb, _) = arboricity(g).unwrap();
        let (d0, _) = max_density(g, Denominator::Vertices).unwrap();
        let lo = d0.ceil().to_integer() as u32;
        assert!(
            lo <= arb && arb <= 2 * lo,
            "{name}: arboricity {arb} outside [{lo}, {}]",
            2 * lo
        );
        // The brute-force palette bottoms out at 1, so the edgeless
        // graph (arboricity 0) stays out of the equality check.
        if (1..=8).contains(&g.edge_count()) {
            assert_eq!(
                arbp_exact(g, 1, &b).unwrap(),
                arb as usize,
                "{name}: p = 1 palette disagrees with arboricity"
            );
            exact_runs += 1;
        }
    }
    println!("PASS 04 p = 1 degeneracy: {exact_runs} exact matches, sandwich on {}", CORPUS.len());
}

#[test]
fn criterion_05_arboricity_is_minimum_forest_partition() {
    for (name, g) in CORPUS.iter() {
        let (arb, _) = arboricity(g).unwrap();
        let k = arb as usize;
        assert!(
            forest_partition(g, k).is_some(),
            "{name}: no partition into {k} forests"
        );
        if k > 1 {
            assert!(
                forest_partition(g, k - 1).is_none(),
                "{name}: partition into {} forests contradicts arboricity {k}",
                k - 1
            );
        }
    }
    println!("PASS 05 forest partitions: minimum matches on {} instances", CORPUS.len());
}

#[test]
fn criterion_06_treedepth_of_cycles_and_cycle_bounds() {
    let b = budget();
    for n in 3..=16 {
        let g = gen::cycle(n).unwrap();
        let (td, _) = treedepth_exact(&g, &b).unwrap();
        assert_eq!(td, 1 + ceil_log2(n), "cycle length {n}");
    }
    let mut two_connected = 0usize;
    for (name, g) in CORPUS.iter() {
        let report = match check_td_cycle_bounds(g, &b) {
            Ok(r) => r,
            Err(_) => continue,
        };
        two_connected += 1;
        assert!(
            report.lower <= report.treedepth && report.treedepth <= report.upper,
            "{name}: tree-depth {} outside [{}, {}]",
            report.treedepth,
            report.lower,
            report.upper
        );
        // Independent recheck of the double-cover family: the chosen
        // cotree edges sit on exactly two cycles, and the extra cycle
        // is the exact symmetric difference of the fundamental ones.
        let fam = dfs_cycle_family(g)
            .unwrap_or_else(|e| panic!("{name}: family construction failed: {e}"));
        let mut count: BTreeMap<EdgeId, usize> = BTreeMap::new();
        for c in &fam.fundamental {
            for &e in &c.edges {
                *count.entry(e).or_default() += 1;
            }
        }
        let mut odd: Vec<EdgeId> = count
            .iter()
            .filter(|(_, &c)| c % 2 == 1)
            .map(|(&e, _)| e)
            .collect();
        odd.sort_unstable();
        let mut gamma = fam.symmetric_difference.edges.clone();
        gamma.sort_unstable();
        assert_eq!(odd, gamma, "{name}: symmetric difference mismatch");
        for &e in &fam.cotree {
            let on_gamma = fam.symmetric_difference.edges.contains(&e) as usize;
            assert_eq!(
                count.get(&e).copied().unwrap_or(0) + on_gamma,
                2,
                "{name}: cotree edge {e} not on exactly two cycles"
            );
        }
    }
    println!("PASS 06 tree-depth: 14 cycles exact, {two_connected} 2-connected instances bounded");
}

#[test]
fn criterion_07_completion_invariants_to_depth_three() {
    let b = budget();
    for (name, g) in CORPUS.iter() {
        for depth in 1..=3 {
            let fc = complete_to_depth(min_indegree_orientation(g), depth, &b)
                .unwrap_or_else(|e| panic!("{name} depth={depth}: completion failed: {e}"));
            fc.audit()
                .unwrap_or_else(|e| panic!("{name} depth={depth}: audit failed: {e}"));
            let cone = fc.cone_bound();
            for e in 0..g.edge_count() {
                assert!(
                    (fc.above(e).len() as u128) <= cone,
                    "{name} depth={depth}: |above({e})| exceeds {cone}"
                );
            }
            let cg = fc.conflicts(&b).unwrap();
            assert!(
                (cg.max_in_degree() as u128) <= fc.conflict_degree_bound(),
                "{name} depth={depth}: conflict in-degree {} over bound {}",
                cg.max_in_degree(),
                fc.conflict_degree_bound()
            );
        }
    }
    println!("PASS 07 completion invariants: {} instances at depths 1..=3", CORPUS.len());
}

#[test]
fn criterion_08_blowup_density_inequality() {
    let b = budget();
    let mut runs = 0usize;
    for (name, g) in CORPUS.iter().filter(|(_, g)| g.vertex_count() <= 5) {
        for m in 1..=3 {
            for two_r in 1..=2 {
                let check = check_blowup_lemma(g, m, two_r, &b).unwrap();
                assert!(
                    check.holds,
                    "{name} m={m} 2r={two_r}: density {} over bound {}",
                    check.lhs, check.rhs
                );
                runs += 1;
            }
        }
    }
    println!("PASS 08 blow-up inequality: {runs} checks");
}

#[test]
fn criterion_09_layer_embeddings_are_injective() {
    let b = budget();
    for (name, g) in CORPUS.iter() {
        let fc = complete_to_depth(min_indegree_orientation(g), 3, &b).unwrap();
        for a in 2..=3 {
            let emb = embed_layer_into_blowup(&fc, a)
                .unwrap_or_else(|e| panic!("{name} a={a}: embedding failed: {e}"));
            emb.verify()
                .unwrap_or_else(|e| panic!("{name} a={a}: embedding invalid: {e}"));
        }
    }
    println!("PASS 09 layer embeddings: {} instances at a = 2, 3", CORPUS.len());
}

#[test]
fn criterion_10_expansion_theorem_at_radius_zero() {
    let b = budget();
    let mut runs = 0usize;
    for (name, g) in CORPUS.iter().filter(|(_, g)| g.edge_count() <= 8) {
        for f in [FunctionSpec::Identity, FunctionSpec::Log2Ceil] {
            let check = check_expansion_theorem(g, &f, 0, &b).unwrap();
            assert!(
                check.holds,
                "{name} f={}: density {} over bound {}",
                f.name(),
                check.minor_density,
                check.bound
            );
            runs += 1;
        }
    }
    println!("PASS 10 expansion bound: {runs} checks at radius 0");
}

#[test]
fn criterion_11_dual_cut_values() {
    let b = budget();
    for len in [3usize, 4, 5] {
        let g = gen::cycle(len).unwrap();
        assert_eq!(arbstar_exact(&g, 1, &b).unwrap(), len, "plain cycle length {len}");
    }
    let k5 = gen::clique(5).unwrap();
    assert_eq!(arbstar_exact(&k5, 1, &b).unwrap(), 2);
    let (col, rep, strat) = colour_cuts_via_packing(&k5, 1, &b).unwrap().unwrap();
    assert!(rep.valid);
    assert_eq!(col.palette_size, 2);
    assert_eq!(strat, PackingStrategy::Direct);
    for len in [3usize, 4] {
        let g = gen::multicycle(len, 2).unwrap();
        let value = arbstar_exact(&g, 2, &b).unwrap();
        assert!(
            value >= ceil_root(len, 2),
            "doubled cycle length {len}: value {value} below root bound"
        );
    }
    let prop = check_dual_proposition(1, &[3, 4, 5], Some(&k5), &b).unwrap();
    assert!(prop.growth_holds);
    assert_eq!(prop.dense_holds, Some(true));
    println!("PASS 11 dual values: cycles, clique packing, doubled cycles");
}

#[test]
fn criterion_12_tree_closure_structure() {
    let b = budget();
    let g = gen::tree_closure(2, 3).unwrap();
    assert_eq!(g.vertex_count(), 7);
    let (td, decomp) = treedepth_exact(&g, &b).unwrap();
    decomp.verify(&g).unwrap();
    assert_eq!(td, 3);
    let cycles = enumerate_cycles(&g, None, &b).unwrap();
    assert!(!cycles.is_empty());
    let four = cycles.iter().find(|c| c.len() == 4).expect("no 4-cycle found");
    four.validate(&g).unwrap();
    println!("PASS 12 closure generator: depth 3 with a length-4 cycle {four:?}");
}

#[test]
fn corpus_is_substantial() {
    // Guard against silent corpus regressions: the census alone holds
    // three digits of instances and the families add the named ones.
    assert!(CORPUS.len() > 300, "corpus unexpectedly small: {}", CORPUS.len());
    for (name, g) in CORPUS.iter() {
        assert!(g.is_connected(), "{name} disconnected");
        assert!(!max_density(g, Denominator::Vertices).unwrap().0.is_zero() || g.edge_count() == 0);
    }
    println!("corpus size: {}", CORPUS.len());
}
