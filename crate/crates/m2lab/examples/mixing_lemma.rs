//! Edge-distribution check: for an (n, d, lambda)-graph and any vertex sets
//! B, C, the edge count e(B, C) stays within lambda * sqrt(|B||C|) of
//! d |B||C| / n. Runs random trials on the unit Cayley graph with its
//! measured lambda.

use std::sync::Arc;

use m2lab::graph::{build_graph, Family, GraphSpec};
use m2lab::rng::SplitMix64;
use m2lab::spectral::{mixing_check, second_eigenvalue, MethodChoice};
use m2lab::tables::GroupTable;
use m2lab::Field;

fn main() -> m2lab::Result<()> {
    let q = 3u32;
    let tables = Arc::new(GroupTable::enumerate(Field::new(q)?)?);
    let g = build_graph(GraphSpec::new(Family::UnitCayley, q), tables)?;
    let rep = second_eigenvalue(&g, MethodChoice::Auto, false, 2048)?;
    println!(
        "unit Cayley q={q}: n={}, d={}, measured lambda = {:.6}",
        g.n,
        g.degree(),
        rep.lambda2
    );

    let mut rng = SplitMix64::new(2024);
    let mut worst = 0.0f64;
    let trials = 200;
    for _ in 0..trials {
        let bs = 1 + rng.below(g.n as u64 - 1) as usize;
        let cs = 1 + rng.below(g.n as u64 - 1) as usize;
        let mut pool: Vec<u32> = (0..g.n as u32).collect();
        m2lab::rng::partial_shuffle(&mut pool, bs, &mut rng);
        let bset = pool[..bs].to_vec();
        let mut pool2: Vec<u32> = (0..g.n as u32).collect();
        m2lab::rng::partial_shuffle(&mut pool2, cs, &mut rng);
        let cset = pool2[..cs].to_vec();
        let check = mixing_check(&g, &bset, &cset, rep.lambda2);
        assert!(check.holds, "mixing bound violated");
        if check.bound > 0.0 {
            worst = worst.max(check.deviation / check.bound);
        }
    }
    println!("{trials} random (B, C) trials: all within the bound");
    println!("worst observed deviation / bound = {worst:.4}");
    Ok(())
}
