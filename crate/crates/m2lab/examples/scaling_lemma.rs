//! Determinant-slice products: scaling the first row of each matrix in D_i
//! by 1/i and the first column of each matrix in D_j by 1/j maps both sets
//! into SL2 without changing the product-set size, |D_i D_j| = |D_i' D_j'|.
//! Checks all full slices at q = 3 and random subsets at q = 5.

use m2lab::rng::{partial_shuffle, SplitMix64};
use m2lab::tables::GroupTable;
use m2lab::verify::verify_scaling_lemma;
use m2lab::{Fe, Field};

fn main() -> m2lab::Result<()> {
    let t3 = GroupTable::enumerate(Field::new(3)?)?;
    println!("q = 3, full determinant slices:");
    for i in 1..3u8 {
        for j in 1..3u8 {
            let ok =
                verify_scaling_lemma(&t3, Fe(i), Fe(j), t3.det_slice(Fe(i)), t3.det_slice(Fe(j)))?;
            println!(
                "  |D_{i} D_{j}| = |D_{i}' D_{j}'| : {}",
                if ok { "equal" } else { "DIFFER" }
            );
        }
    }

    let t5 = GroupTable::enumerate(Field::new(5)?)?;
    let mut rng = SplitMix64::new(99);
    let mut instances = 0;
    for i in 1..5u8 {
        for j in 1..5u8 {
            for _ in 0..25 {
                let si = 1 + rng.below(t5.det_slice(Fe(i)).len() as u64) as usize;
                let sj = 1 + rng.below(t5.det_slice(Fe(j)).len() as u64) as usize;
                let mut di = t5.det_slice(Fe(i)).to_vec();
                let mut dj = t5.det_slice(Fe(j)).to_vec();
                partial_shuffle(&mut di, si, &mut rng);
                partial_shuffle(&mut dj, sj, &mut rng);
                di.truncate(si);
                dj.truncate(sj);
                assert!(verify_scaling_lemma(&t5, Fe(i), Fe(j), &di, &dj)?);
                instances += 1;
            }
        }
    }
    println!("q = 5: {instances} random-subset instances, all product sizes equal");
    Ok(())
}
