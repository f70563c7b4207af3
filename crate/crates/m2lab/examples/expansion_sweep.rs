//! Threshold sweep: how fast does the image of x + yz fill M2(F_q) as the
//! operand sets grow? Sizes run over round(q^e) for a grid of exponents;
//! sets are nested prefixes per trial, so mean coverage is monotone.

use m2lab::expand::{
    image_size, sample_subset, self_sum_bound_report, sweep_summary_csv, threshold_sweep,
    GrowthBound, Poly,
};
use m2lab::rng::SplitMix64;
use m2lab::tables::{Domain, GroupTable};
use m2lab::Field;

fn main() -> m2lab::Result<()> {
    let q = 3u32;
    let t = GroupTable::enumerate(Field::new(q)?)?;
    let exponents = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];
    let sweep = threshold_sweep(&t, GrowthBound::XPlusYzMixed, &exponents, 20, 42, false)?;
    println!("x + yz over M2 x SL2 x SL2 at q = {q}, 20 trials per exponent cell\n");
    print!("{}", sweep_summary_csv(&sweep.summary));
    println!("\nmean image/q^4 climbs to 1.0 once the operand sets reach full size;");
    println!("per-trial rows carry the predicted lower bound for each cell.");
    let worst = sweep
        .rows
        .iter()
        .filter(|r| r.predicted_bound <= (t.n() as f64) / 2.0)
        .map(|r| r.bound_ratio)
        .fold(f64::INFINITY, f64::min);
    println!("min image / predicted-bound over bounded cells: {worst:.3}");

    // the epsilon-dependent self-sum statement over SL2 is report-only:
    // its implied constants are unknown, so both sides are printed
    let mut rng = SplitMix64::new(42);
    let a = sample_subset(&t, Domain::Sl2, 16, &mut rng)?;
    let (sum_size, _) = image_size(&t, Poly::Sum, &[a.clone(), a])?;
    println!("\nself-sum report for one |A| = 16 sample of SL2 (|A+A| = {sum_size}):");
    println!("  eps   q^(3/(2-eps))  hyp-met  min(|A|^(1+eps),|A|^(4/3))  measured/bound");
    for row in self_sum_bound_report(16, sum_size, q) {
        println!(
            "  {:<5} {:>12.3} {:>8} {:>26.3} {:>15.3}",
            row.eps, row.hypothesis_threshold, row.hypothesis_met, row.claimed_bound, row.ratio
        );
    }
    Ok(())
}
