//! The unit Cayley graph on M2(F_q): vertices are all 2x2 matrices, with an
//! edge between a and b when det(a - b) = 1. Builds it for several q and
//! audits n, degree, second eigenvalue, connectivity, and diameter.

use std::sync::Arc;

use m2lab::graph::{build_graph, Family, GraphSpec};
use m2lab::spectral::{second_eigenvalue, MethodChoice};
use m2lab::tables::GroupTable;
use m2lab::Field;

fn main() -> m2lab::Result<()> {
    println!("unit Cayley graph audit: n = q^4, degree = q^3 - q, lambda <= 2 q^(3/2)");
    println!(
        "{:>3} {:>6} {:>6} {:>12} {:>12} {:>7} {:>9}",
        "q", "n", "deg", "lambda2", "2q^1.5", "ratio", "diameter"
    );
    for q in [2u32, 3, 4, 5] {
        let tables = Arc::new(GroupTable::enumerate(Field::new(q)?)?);
        let g = build_graph(GraphSpec::new(Family::UnitCayley, q), tables)?;
        let report = second_eigenvalue(&g, MethodChoice::Auto, false, 2048)?;
        let diameter = g.diameter()?;
        println!(
            "{:>3} {:>6} {:>6} {:>12.6} {:>12.6} {:>7.4} {:>9}",
            q,
            g.n,
            g.degree(),
            report.lambda2,
            report.claimed_bound.unwrap(),
            report.ratio.unwrap(),
            diameter.map_or("inf".into(), |d| d.to_string()),
        );
    }
    Ok(())
}
