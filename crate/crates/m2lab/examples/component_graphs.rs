//! The difference graphs that appear as components of the digraph walk
//! identities: invertible-difference and singular-difference graphs on SL2
//! and on M2, plus the SL2-difference graph inside the unit Cayley graph.
//! Audits degrees and second eigenvalues, and checks eigenvalue
//! interlacing for the induced-subgraph pair.

use std::sync::Arc;

use m2lab::graph::{build_graph, Family, GraphSpec};
use m2lab::spectral::{interlacing_check, second_eigenvalue, MethodChoice};
use m2lab::tables::GroupTable;
use m2lab::Field;

fn main() -> m2lab::Result<()> {
    let q = 3u32;
    let tables = Arc::new(GroupTable::enumerate(Field::new(q)?)?);
    println!("component graphs at q = {q}:");
    println!(
        "{:<22} {:>5} {:>6} {:>12} {:>12}",
        "family", "n", "deg", "lambda2", "bound"
    );
    for family in [
        Family::Sl2InvertibleDiff,
        Family::Sl2SingularDiff,
        Family::Sl2Sl2Diff,
        Family::GlDiffM2,
        Family::SingularDiffM2,
    ] {
        let g = build_graph(GraphSpec::new(family, q), Arc::clone(&tables))?;
        let rep = second_eigenvalue(&g, MethodChoice::DenseFull, false, 2048)?;
        println!(
            "{:<22} {:>5} {:>6} {:>12.6} {:>12}",
            g.spec.name(),
            g.n,
            g.degree(),
            rep.lambda2,
            rep.claimed_bound
                .map(|b| format!("{b:.4}"))
                .unwrap_or_else(|| "-".into()),
        );
    }

    // the SL2-difference graph on SL2 is an induced subgraph of the unit
    // Cayley graph on M2, so its spectrum interlaces
    let host = build_graph(GraphSpec::new(Family::UnitCayley, q), Arc::clone(&tables))?;
    let minor = build_graph(GraphSpec::new(Family::Sl2Sl2Diff, q), Arc::clone(&tables))?;
    let host_rep = second_eigenvalue(&host, MethodChoice::DenseFull, false, 2048)?;
    let minor_rep = second_eigenvalue(&minor, MethodChoice::DenseFull, false, 2048)?;
    let ok = interlacing_check(
        host_rep.spectrum.as_ref().unwrap(),
        minor_rep.spectrum.as_ref().unwrap(),
        1e-7,
    )?;
    println!(
        "\ninterlacing of the SL2-difference graph (n={}) inside the unit Cayley graph (n={}): {}",
        minor.n,
        host.n,
        if ok { "holds" } else { "VIOLATED" }
    );
    println!(
        "  minor lambda2 = {:.6} <= host bound 2 q^(3/2) = {:.6}",
        minor_rep.lambda2,
        host_rep.claimed_bound.unwrap()
    );
    Ok(())
}
