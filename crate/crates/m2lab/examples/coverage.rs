//! Full-coverage experiments for xy + z + t: with operand sets sampled at
//! various sizes, how often does the image equal all of M2(F_q)?

use m2lab::expand::{coverage_experiment, ExperimentConfig, Poly, SizeSpec};
use m2lab::tables::{Domain, GroupTable};
use m2lab::Field;

fn main() -> m2lab::Result<()> {
    let q = 3u32;
    let t = GroupTable::enumerate(Field::new(q)?)?;
    println!("xy + z + t coverage at q = {q} (20 trials per size):");
    for e in [2.0f64, 2.5, 3.0, 3.5, 4.0] {
        let cfg = ExperimentConfig {
            q,
            poly: Poly::XyPlusZPlusT,
            domains: vec![Domain::M2; 4],
            sizes: vec![SizeSpec::Exp(e); 4],
            trials: 20,
            seed: 1234,
        };
        let rec = coverage_experiment(&t, &cfg, false)?;
        let covered = rec.trials.iter().filter(|tr| tr.covered).count();
        let size = rec.trials[0].sizes[0];
        println!(
            "  |A| = round(q^{e:.1}) = {size:>3}: covered in {covered:>2} / 20 trials (mean image/q^4 = {:.4})",
            rec.trials.iter().map(|tr| tr.ratio_q4).sum::<f64>() / 20.0
        );
    }
    println!("\nmixed domains (A from SL2, B from M2):");
    let cfg = ExperimentConfig {
        q,
        poly: Poly::XyPlusZPlusT,
        domains: vec![Domain::Sl2, Domain::Sl2, Domain::M2, Domain::M2],
        sizes: vec![
            SizeSpec::Exp(3.0),
            SizeSpec::Exp(3.0),
            SizeSpec::Exp(3.5),
            SizeSpec::Exp(3.5),
        ],
        trials: 20,
        seed: 1234,
    };
    let rec = coverage_experiment(&t, &cfg, false)?;
    let covered = rec.trials.iter().filter(|tr| tr.covered).count();
    println!(
        "  sizes {:?}: covered in {covered} / 20 trials",
        rec.trials[0].sizes
    );
    Ok(())
}
