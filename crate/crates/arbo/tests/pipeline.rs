//! Cross-module journeys through the public API: text formats in and
//! out of the pipeline, packing certificates fed back to verifiers,
//! and closure graphs flowing into the tree-depth tools.

use arbo::colouring::{colour_arbp, verify_colouring, EdgeColouring};
use arbo::cuts::enumerate_cuts;
use arbo::dual::{colour_cuts_via_packing, verify_cut_colouring};
use arbo::treedepth::treedepth_exact;
use arbo::{gen, io, Budget};

#[test]
fn text_roundtrip_carries_a_colouring_end_to_end() {
    let b = Budget::default();
    let g = gen::theta(3, 2).unwrap();
    let text = io::write_multigraph(&g);
    let back = io::parse_multigraph(&text).unwrap();
    assert_eq!(back.vertex_count(), g.vertex_count());
    assert_eq!(back.edges(), g.edges());

    let (col, report) = colour_arbp(&back, 2, false, &b).unwrap();
    assert!(report.valid);
    let file = io::write_colouring(&col.colours);
    let parsed = EdgeColouring::new(io::parse_colouring(&file, back.edge_count()).unwrap()).unwrap();
    assert_eq!(parsed.colours, col.colours);
    assert!(verify_colouring(&back, &parsed, 2, &b).unwrap().valid);
}

#[test]
fn packing_certificate_survives_the_colour_file_format() {
    let b = Budget::default();
    let g = gen::clique(5).unwrap();
    let (col, report, _) = colour_cuts_via_packing(&g, 1, &b).unwrap().unwrap();
    assert!(report.valid);
    let file = io::write_colouring(&col.colours);
    let parsed = EdgeColouring::new(io::parse_colouring(&file, g.edge_count()).unwrap()).unwrap();
    let recheck = verify_cut_colouring(&g, &parsed, 1, &b).unwrap();
    assert!(recheck.valid);
    // The two verifiers measure different things: leftover edges share
    // colour 1 with a spanning tree, closing a one-coloured cycle.
    assert!(!verify_colouring(&g, &parsed, 1, &b).unwrap().valid);
}

#[test]
fn closure_graphs_flow_into_depth_and_cut_tools() {
    let b = Budget::default();
    let g = gen::tree_closure(2, 3).unwrap();
    let (td, decomp) = treedepth_exact(&g, &b).unwrap();
    assert_eq!(td, 3);
    assert!(decomp.verify(&g).is_ok());
    // The closure is connected, so its text form feeds every tool.
    let back = io::parse_multigraph(&io::write_multigraph(&g)).unwrap();
    assert!(back.is_connected());
    assert!(!enumerate_cuts(&back, &b).unwrap().is_empty());
}
