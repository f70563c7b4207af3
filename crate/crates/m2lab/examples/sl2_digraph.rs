//! The sum-product digraph on SL2 x M2 (edges (A,C) -> (B,D) when
//! A*B = C + D with A, B in SL2). Audits its degree, classifies pairs by
//! common-out-neighbor count, and checks the walk-matrix identity that
//! expresses M M^t through eleven component graphs.

use std::sync::Arc;

use m2lab::graph::{build_graph, Family, GraphSpec};
use m2lab::tables::GroupTable;
use m2lab::verify::{
    verify_case_analysis, verify_decomposition, verify_normality, DecompTarget, EntryMode, Mode,
};
use m2lab::Field;

fn main() -> m2lab::Result<()> {
    for q in [2u32, 3] {
        let tables = Arc::new(GroupTable::enumerate(Field::new(q)?)?);
        let g = build_graph(GraphSpec::new(Family::SpDigraphSl2, q), tables)?;
        println!(
            "q = {q}: n = |SL2| * |M2| = {}, degree = |SL2| = {}",
            g.n,
            g.degree()
        );
        let mode = if q == 2 {
            Mode::Exhaustive
        } else {
            Mode::Sampled {
                pairs: 50_000,
                seed: 7,
            }
        };
        let cases = verify_case_analysis(&g, mode)?;
        println!("  case analysis ({}): {}", cases.mode, cases.verdict);
        for (label, count) in cases.label_counts.as_ref().unwrap() {
            println!("    {label:<10} {count:>8} pairs");
        }
        if q == 2 {
            let decomp = verify_decomposition(&g, DecompTarget::G2Mmt, EntryMode::Exhaustive)?;
            println!(
                "  M M^t component identity over {} entries: {}",
                decomp.pairs_checked, decomp.verdict
            );
            let norm = verify_normality(&g, Mode::Exhaustive)?;
            println!(
                "  normality: {} ({} of {} pairs disagree)",
                norm.verdict, norm.mismatch_count, norm.pairs_checked
            );
        }
        println!();
    }
    Ok(())
}
