//! Expansion experiments: sample operand sets from M2 / SL2 / GL2 / D0,
//! compute exact image sizes of the studied polynomials through a q^4-bit
//! presence buffer, compare against the predicted lower bounds, and run
//! threshold sweeps over set-size exponents.
//!
//! Reproducibility contract: a trial is fully determined by (seed, trial
//! index). Sweeps sample each domain once per trial and take prefixes for
//! the size grid, so image sizes are monotone in the exponent within every
//! trial and mean ratios are monotone by construction.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{partial_shuffle, SplitMix64};
use crate::tables::{Domain, GroupTable, MatIdx};

/// The polynomials whose images are measured.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Poly {
    /// x + y
    Sum,
    /// x * y
    Product,
    /// x + y*z
    XPlusYz,
    /// x * (y + z)
    XTimesYPlusZ,
    /// x*y + z + t
    XyPlusZPlusT,
    /// the pair (|A+A|, |AA|), reported as its max
    SumProductMax,
}

impl Poly {
    pub fn arity(&self) -> usize {
        match self {
            Poly::Sum | Poly::Product => 2,
            Poly::XPlusYz | Poly::XTimesYPlusZ => 3,
            Poly::XyPlusZPlusT => 4,
            Poly::SumProductMax => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Poly::Sum => "x+y",
            Poly::Product => "xy",
            Poly::XPlusYz => "x+yz",
            Poly::XTimesYPlusZ => "x(y+z)",
            Poly::XyPlusZPlusT => "xy+z+t",
            Poly::SumProductMax => "max(A+A,AA)",
        }
    }

    pub fn parse(s: &str) -> Result<Poly> {
        match s {
            "x+y" | "sum" => Ok(Poly::Sum),
            "xy" | "product" => Ok(Poly::Product),
            "x+yz" => Ok(Poly::XPlusYz),
            "x(y+z)" => Ok(Poly::XTimesYPlusZ),
            "xy+z+t" => Ok(Poly::XyPlusZPlusT),
            "sumproduct-max" | "max" => Ok(Poly::SumProductMax),
            _ => Err(Error::Usage(format!("unknown polynomial '{s}'"))),
        }
    }
}

/// Requested operand-set size: absolute, or round(q^e) capped at the domain.
#[derive(Copy, Clone, Debug)]
pub enum SizeSpec {
    Abs(u32),
    Exp(f64),
}

impl SizeSpec {
    pub fn resolve(&self, q: u32, domain_len: usize) -> Result<usize> {
        match self {
            SizeSpec::Abs(s) => {
                let s = *s as usize;
                if s == 0 || s > domain_len {
                    return Err(Error::Domain(format!("size {s} outside 1..={domain_len}")));
                }
                Ok(s)
            }
            SizeSpec::Exp(e) => {
                let raw = (q as f64).powf(*e).round() as usize;
                Ok(raw.clamp(1, domain_len))
            }
        }
    }
}

/// One experiment: a polynomial, per-variable domains and sizes, trials.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub q: u32,
    pub poly: Poly,
    pub domains: Vec<Domain>,
    pub sizes: Vec<SizeSpec>,
    pub trials: u32,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.domains.len() != self.poly.arity() || self.sizes.len() != self.poly.arity() {
            return Err(Error::Domain(format!(
                "{} takes {} operand sets, got {} domains / {} sizes",
                self.poly.name(),
                self.poly.arity(),
                self.domains.len(),
                self.sizes.len()
            )));
        }
        if self.trials == 0 {
            return Err(Error::Domain("trials must be >= 1".into()));
        }
        Ok(())
    }
}

/// Uniform sample without replacement from a domain, deterministic in rng.
pub fn sample_subset(
    t: &GroupTable,
    domain: Domain,
    size: usize,
    rng: &mut SplitMix64,
) -> Result<Vec<MatIdx>> {
    let pool = t.domain(domain);
    if size > pool.len() {
        return Err(Error::Domain(format!(
            "sample size {size} exceeds |{}| = {}",
            domain.name(),
            pool.len()
        )));
    }
    let mut copy = pool.to_vec();
    partial_shuffle(&mut copy, size, rng);
    copy.truncate(size);
    Ok(copy)
}

/// Reusable q^4-bit presence buffer.
struct Presence {
    bits: Vec<u64>,
}

impl Presence {
    fn new(n: usize) -> Presence {
        Presence {
            bits: vec![0u64; n.div_ceil(64)],
        }
    }

    fn clear(&mut self) {
        self.bits.iter_mut().for_each(|w| *w = 0);
    }

    #[inline]
    fn insert(&mut self, x: u32) -> bool {
        let w = &mut self.bits[x as usize / 64];
        let m = 1u64 << (x % 64);
        let fresh = *w & m == 0;
        *w |= m;
        fresh
    }
}

enum PairOp {
    Add,
    Mul,
}

fn distinct_pairwise(
    t: &GroupTable,
    xs: &[MatIdx],
    ys: &[MatIdx],
    op: PairOp,
    scratch: &mut Presence,
) -> Vec<MatIdx> {
    scratch.clear();
    let mut out = Vec::new();
    // smallest set outermost keeps the inner loop cache-resident
    let (outer, inner, swapped) = if xs.len() <= ys.len() {
        (xs, ys, false)
    } else {
        (ys, xs, true)
    };
    for &x in outer {
        for &y in inner {
            let v = match op {
                PairOp::Add => t.add_idx(x, y),
                PairOp::Mul => {
                    if swapped {
                        t.mul_idx(y, x)
                    } else {
                        t.mul_idx(x, y)
                    }
                }
            };
            if scratch.insert(v) {
                out.push(v);
            }
        }
    }
    out
}

/// Exact image size of the polynomial on explicit operand sets. For
/// `SumProductMax` the returned pair is (|A+A|, |AA|) and the image is
/// their max.
pub fn image_size(
    t: &GroupTable,
    poly: Poly,
    sets: &[Vec<MatIdx>],
) -> Result<(u64, Option<(u64, u64)>)> {
    if sets.len() != poly.arity() {
        return Err(Error::Domain(format!(
            "{} takes {} operand sets, got {}",
            poly.name(),
            poly.arity(),
            sets.len()
        )));
    }
    let n = t.n() as usize;
    let mut scratch = Presence::new(n);
    let size = |v: &Vec<MatIdx>| v.len() as u64;
    match poly {
        Poly::Sum => {
            let s = distinct_pairwise(t, &sets[0], &sets[1], PairOp::Add, &mut scratch);
            Ok((size(&s), None))
        }
        Poly::Product => {
            let s = distinct_pairwise(t, &sets[0], &sets[1], PairOp::Mul, &mut scratch);
            Ok((size(&s), None))
        }
        Poly::XPlusYz => {
            let prods = distinct_pairwise(t, &sets[1], &sets[2], PairOp::Mul, &mut scratch);
            let img = distinct_pairwise(t, &sets[0], &prods, PairOp::Add, &mut scratch);
            Ok((size(&img), None))
        }
        Poly::XTimesYPlusZ => {
            let sums = distinct_pairwise(t, &sets[1], &sets[2], PairOp::Add, &mut scratch);
            let img = distinct_pairwise(t, &sets[0], &sums, PairOp::Mul, &mut scratch);
            Ok((size(&img), None))
        }
        Poly::XyPlusZPlusT => {
            let prods = distinct_pairwise(t, &sets[0], &sets[1], PairOp::Mul, &mut scratch);
            let sums = distinct_pairwise(t, &sets[2], &sets[3], PairOp::Add, &mut scratch);
            let img = distinct_pairwise(t, &prods, &sums, PairOp::Add, &mut scratch);
            Ok((size(&img), None))
        }
        Poly::SumProductMax => {
            let sums = distinct_pairwise(t, &sets[0], &sets[0], PairOp::Add, &mut scratch);
            let prods = distinct_pairwise(t, &sets[0], &sets[0], PairOp::Mul, &mut scratch);
            let pair = (size(&sums), size(&prods));
            Ok((pair.0.max(pair.1), Some(pair)))
        }
    }
}

/// The measured growth lower-bound statements, with implied constant 1.
/// Each couples a polynomial with fixed operand domains.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum GrowthBound {
    /// |AB| over SL2 x SL2.
    ProductSl2,
    /// |A+B| over SL2 x M2.
    SumSl2M2,
    /// x+yz over M2 x SL2 x SL2.
    XPlusYzMixed,
    /// x(y+z) over SL2 x SL2 x M2.
    XTimesYPlusZMixed,
    /// x(y+z) over M2^3.
    XTimesYPlusZM2,
    /// x+yz over M2^3.
    XPlusYzM2,
    /// max(|A+A|, |AA|) over M2.
    SumProductM2,
}

pub const GROWTH_BOUNDS: [GrowthBound; 7] = [
    GrowthBound::ProductSl2,
    GrowthBound::SumSl2M2,
    GrowthBound::XPlusYzMixed,
    GrowthBound::XTimesYPlusZMixed,
    GrowthBound::XTimesYPlusZM2,
    GrowthBound::XPlusYzM2,
    GrowthBound::SumProductM2,
];

impl GrowthBound {
    pub fn name(&self) -> &'static str {
        match self {
            GrowthBound::ProductSl2 => "product-sl2",
            GrowthBound::SumSl2M2 => "sum-sl2-m2",
            GrowthBound::XPlusYzMixed => "x+yz-mixed",
            GrowthBound::XTimesYPlusZMixed => "x(y+z)-mixed",
            GrowthBound::XTimesYPlusZM2 => "x(y+z)-m2",
            GrowthBound::XPlusYzM2 => "x+yz-m2",
            GrowthBound::SumProductM2 => "sumproduct-m2",
        }
    }

    pub fn parse(s: &str) -> Result<GrowthBound> {
        GROWTH_BOUNDS
            .iter()
            .find(|t| t.name() == s)
            .copied()
            .ok_or_else(|| Error::Usage(format!("unknown bound id '{s}'")))
    }

    pub fn poly(&self) -> Poly {
        match self {
            GrowthBound::ProductSl2 => Poly::Product,
            GrowthBound::SumSl2M2 => Poly::Sum,
            GrowthBound::XPlusYzMixed => Poly::XPlusYz,
            GrowthBound::XTimesYPlusZMixed => Poly::XTimesYPlusZ,
            GrowthBound::XTimesYPlusZM2 => Poly::XTimesYPlusZ,
            GrowthBound::XPlusYzM2 => Poly::XPlusYz,
            GrowthBound::SumProductM2 => Poly::SumProductMax,
        }
    }

    pub fn domains(&self) -> Vec<Domain> {
        match self {
            GrowthBound::ProductSl2 => vec![Domain::Sl2, Domain::Sl2],
            GrowthBound::SumSl2M2 => vec![Domain::Sl2, Domain::M2],
            GrowthBound::XPlusYzMixed => vec![Domain::M2, Domain::Sl2, Domain::Sl2],
            GrowthBound::XTimesYPlusZMixed => vec![Domain::Sl2, Domain::Sl2, Domain::M2],
            GrowthBound::XTimesYPlusZM2 | GrowthBound::XPlusYzM2 => {
                vec![Domain::M2, Domain::M2, Domain::M2]
            }
            GrowthBound::SumProductM2 => vec![Domain::M2],
        }
    }
}

/// Predicted lower bound from stated set sizes (implied constant 1); a
/// ratio target for reports, never asserted as-is.
pub fn predicted_bound(claim: GrowthBound, sizes: &[u64], q: u32) -> Result<f64> {
    let needed = claim.poly().arity();
    if sizes.len() != needed {
        return Err(Error::Domain(format!(
            "bound {} takes {needed} sizes, got {}",
            claim.name(),
            sizes.len()
        )));
    }
    let qf = q as f64;
    let s: Vec<f64> = sizes.iter().map(|&x| x as f64).collect();
    let v = match claim {
        GrowthBound::ProductSl2 => (qf.powi(3)).min(s[0] * s[1] / qf.powi(2)),
        GrowthBound::SumSl2M2 => (s[0] * s[0] * s[1] / qf.powi(3)).min(s[0] * qf),
        GrowthBound::XPlusYzMixed => (qf.powi(4))
            .min(qf.powi(3) * s[0])
            .min(s[0] * s[1] * s[1] * s[2] * s[2] / qf.powi(7))
            .min(s[1] * s[2] / qf),
        GrowthBound::XTimesYPlusZMixed => (qf.powi(4))
            .min(s[0] * s[1] * s[1] * s[2] / qf.powi(5))
            .min(s[0] * s[1] / qf),
        GrowthBound::XTimesYPlusZM2 | GrowthBound::XPlusYzM2 => {
            (s[0] * s[1] * s[2] / qf.powi(7)).min(qf.powi(4))
        }
        GrowthBound::SumProductM2 => (s[0] * s[0] / qf.powf(3.5)).min(qf * qf * s[0].sqrt()),
    };
    Ok(v)
}

/// Report-only view of the epsilon-dependent self-sum bound for subsets of
/// SL2: under the hypothesis |A| >> q^(3/(2-eps)), the claim is
/// |A+A| >> min(|A|^(1+eps), |A|^(4/3)). The implied constants are
/// unknown, so both sides are reported per epsilon and nothing asserted.
#[derive(Clone, Debug, Serialize)]
pub struct SelfSumBoundRow {
    pub eps: f64,
    pub hypothesis_threshold: f64,
    pub hypothesis_met: bool,
    pub claimed_bound: f64,
    pub measured: u64,
    pub ratio: f64,
}

pub fn self_sum_bound_report(a_size: u64, measured_sum: u64, q: u32) -> Vec<SelfSumBoundRow> {
    let qf = q as f64;
    let af = a_size as f64;
    [0.1f64, 0.25, 0.5]
        .iter()
        .map(|&eps| {
            let threshold = qf.powf(3.0 / (2.0 - eps));
            let bound = af.powf(1.0 + eps).min(af.powf(4.0 / 3.0));
            SelfSumBoundRow {
                eps,
                hypothesis_threshold: threshold,
                hypothesis_met: af >= threshold,
                claimed_bound: bound,
                measured: measured_sum,
                ratio: measured_sum as f64 / bound,
            }
        })
        .collect()
}

/// Sum growth floor implied by the mixing inequality with a measured
/// lambda: the least |A+B| compatible with
///   |A||B| <= (d/n) |A+B| |B| + lambda sqrt(|A+B| |B|).
pub fn sum_floor_from_mixing(n: u64, d: u64, lambda: f64, a: u64, b: u64) -> f64 {
    let (nf, df, af, bf) = (n as f64, d as f64, a as f64, b as f64);
    let c2 = df / nf * bf;
    let c1 = lambda * bf.sqrt();
    let c0 = -af * bf;
    let x = (-c1 + (c1 * c1 - 4.0 * c2 * c0).sqrt()) / (2.0 * c2);
    x * x
}

/// One trial inside an experiment record.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub trial: u32,
    pub sizes: Vec<u64>,
    pub image: u64,
    /// (|A+A|, |AA|) for the sum-product pair measurement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(u64, u64)>,
    pub ratio_q4: f64,
    pub covered: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_ratio: Option<f64>,
    pub ms: u64,
}

/// Full result of one experiment config.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRecord {
    pub q: u32,
    pub poly: String,
    pub domains: Vec<String>,
    pub trials: Vec<TrialRecord>,
    pub seed: u64,
    pub runtime_ms: u64,
}

/// Run an experiment: `trials` independent draws, each deterministic in
/// (seed, trial). `bound_thm` attaches a predicted bound per trial.
pub fn run_experiment(
    t: &GroupTable,
    cfg: &ExperimentConfig,
    bound_claim: Option<GrowthBound>,
    no_timing: bool,
) -> Result<ExperimentRecord> {
    cfg.validate()?;
    if cfg.q != t.q() {
        return Err(Error::SpecMismatch(format!(
            "config q={} but tables q={}",
            cfg.q,
            t.q()
        )));
    }
    let started = Instant::now();
    let q4 = t.n() as u64;
    let sizes: Vec<usize> = cfg
        .domains
        .iter()
        .zip(&cfg.sizes)
        .map(|(d, s)| s.resolve(cfg.q, t.domain(*d).len()))
        .collect::<Result<_>>()?;

    let trials: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let t0 = Instant::now();
            let mut rng = SplitMix64::stream(cfg.seed, trial as u64);
            let sets: Vec<Vec<MatIdx>> = cfg
                .domains
                .iter()
                .zip(&sizes)
                .map(|(d, &s)| sample_subset(t, *d, s, &mut rng).expect("validated size"))
                .collect();
            let (image, pair) = image_size(t, cfg.poly, &sets).expect("validated arity");
            let szs: Vec<u64> = sizes.iter().map(|&s| s as u64).collect();
            let bound = bound_claim.map(|c| predicted_bound(c, &szs, cfg.q).unwrap());
            TrialRecord {
                trial,
                sizes: szs,
                image,
                pair,
                ratio_q4: image as f64 / q4 as f64,
                covered: image == q4,
                predicted_bound: bound,
                bound_ratio: bound.map(|b| {
                    if b > 0.0 {
                        image as f64 / b
                    } else {
                        f64::INFINITY
                    }
                }),
                ms: if no_timing {
                    0
                } else {
                    t0.elapsed().as_millis() as u64
                },
            }
        })
        .collect();

    Ok(ExperimentRecord {
        q: cfg.q,
        poly: cfg.poly.name().into(),
        domains: cfg.domains.iter().map(|d| d.name().into()).collect(),
        trials,
        seed: cfg.seed,
        runtime_ms: if no_timing {
            0
        } else {
            started.elapsed().as_millis() as u64
        },
    })
}

/// Coverage experiment for xy + z + t: does the image cover all of M2?
pub fn coverage_experiment(
    t: &GroupTable,
    cfg: &ExperimentConfig,
    no_timing: bool,
) -> Result<ExperimentRecord> {
    if cfg.poly != Poly::XyPlusZPlusT {
        return Err(Error::Domain(
            "coverage experiment is defined for xy+z+t".into(),
        ));
    }
    run_experiment(t, cfg, None, no_timing)
}

/// Image of x(y+z) with A = D0 and B = C = M2: exactly the singular
/// matrices, q^3 + q^2 - q of them.
#[derive(Clone, Debug, Serialize)]
pub struct SharpnessReport {
    pub q: u32,
    pub image: u64,
    pub expected: u64,
    pub subset_of_d0: bool,
    pub exact: bool,
}

pub fn sharpness_check(t: &GroupTable) -> Result<SharpnessReport> {
    if t.q() > 5 {
        return Err(Error::ResourceLimit(
            "sharpness check is capped at q = 5".into(),
        ));
    }
    let q = t.q() as u64;
    let d0: Vec<MatIdx> = t.domain(Domain::D0).to_vec();
    let m2: Vec<MatIdx> = t.domain(Domain::M2).to_vec();
    let sets = vec![d0, m2.clone(), m2];
    let (image, _) = image_size(t, Poly::XTimesYPlusZ, &sets)?;
    // recompute the image set to check containment in D0
    let mut scratch = Presence::new(t.n() as usize);
    let sums = distinct_pairwise(t, &sets[1], &sets[2], PairOp::Add, &mut scratch);
    let img = distinct_pairwise(t, &sets[0], &sums, PairOp::Mul, &mut scratch);
    let subset = img.iter().all(|&x| t.det_idx(x) == 0);
    let expected = q * q * q + q * q - q;
    Ok(SharpnessReport {
        q: t.q(),
        image,
        expected,
        subset_of_d0: subset,
        exact: image == expected,
    })
}

/// One row of a threshold sweep (one exponent cell, one trial).
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub q: u32,
    pub poly: String,
    pub domains: String,
    pub sizes: String,
    pub image: u64,
    pub q4: u64,
    pub ratio: f64,
    pub predicted_bound: f64,
    pub bound_ratio: f64,
    pub seed: u64,
    pub trial: u32,
    pub ms: u64,
}

/// Aggregated sweep cell.
#[derive(Clone, Debug, Serialize)]
pub struct SweepSummaryRow {
    pub q: u32,
    pub e: f64,
    pub mean_ratio: f64,
    pub min_ratio: f64,
    pub trials: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub bound: String,
    pub q: u32,
    pub exponents: Vec<f64>,
    pub trials: u32,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
    pub summary: Vec<SweepSummaryRow>,
}

/// Diagonal threshold sweep: every operand set of the bound gets size
/// round(q^e) (capped at its domain), drawn as nested prefixes per trial.
pub fn threshold_sweep(
    t: &GroupTable,
    claim: GrowthBound,
    exponents: &[f64],
    trials: u32,
    seed: u64,
    no_timing: bool,
) -> Result<SweepResult> {
    let q = t.q();
    let domains = claim.domains();
    let all_sl2 = domains.iter().all(|d| *d == Domain::Sl2);
    let emax = if all_sl2 { 3.0 } else { 4.0 };
    for &e in exponents {
        if !(1.0..=emax).contains(&e) {
            return Err(Error::Domain(format!(
                "exponent {e} outside [1, {emax}] for domains {:?}",
                domains.iter().map(|d| d.name()).collect::<Vec<_>>()
            )));
        }
    }
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    let mut exps = exponents.to_vec();
    exps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let poly = claim.poly();
    let q4 = t.n() as u64;

    // resolved size per (exponent, operand)
    let cell_sizes: Vec<Vec<usize>> = exps
        .iter()
        .map(|&e| {
            domains
                .iter()
                .map(|d| SizeSpec::Exp(e).resolve(q, t.domain(*d).len()).unwrap())
                .collect()
        })
        .collect();
    let max_sizes: Vec<usize> = (0..domains.len())
        .map(|i| cell_sizes.iter().map(|c| c[i]).max().unwrap())
        .collect();

    let per_trial: Vec<Vec<SweepRow>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = SplitMix64::stream(seed, trial as u64);
            // one shuffled pool per operand; exponent cells take prefixes
            let pools: Vec<Vec<MatIdx>> = domains
                .iter()
                .zip(&max_sizes)
                .map(|(d, &mx)| sample_subset(t, *d, mx, &mut rng).expect("capped size"))
                .collect();
            (0..exps.len())
                .map(|ei| {
                    let t0 = Instant::now();
                    let sets: Vec<Vec<MatIdx>> = pools
                        .iter()
                        .zip(&cell_sizes[ei])
                        .map(|(pool, &s)| pool[..s].to_vec())
                        .collect();
                    let (image, _) = image_size(t, poly, &sets).expect("arity fixed");
                    let szs: Vec<u64> = cell_sizes[ei].iter().map(|&s| s as u64).collect();
                    let bound = predicted_bound(claim, &szs, q).unwrap();
                    SweepRow {
                        q,
                        poly: poly.name().into(),
                        domains: domains
                            .iter()
                            .map(|d| d.name())
                            .collect::<Vec<_>>()
                            .join("x"),
                        sizes: szs
                            .iter()
                            .map(|s| s.to_string())
                            .collect::<Vec<_>>()
                            .join("x"),
                        image,
                        q4,
                        ratio: image as f64 / q4 as f64,
                        predicted_bound: bound,
                        bound_ratio: if bound > 0.0 {
                            image as f64 / bound
                        } else {
                            f64::INFINITY
                        },
                        seed,
                        trial,
                        ms: if no_timing {
                            0
                        } else {
                            t0.elapsed().as_millis() as u64
                        },
                    }
                })
                .collect()
        })
        .collect();

    // rows ordered by (exponent, trial) for stable output
    let mut rows = Vec::with_capacity(exps.len() * trials as usize);
    for (ei, _) in exps.iter().enumerate() {
        for tr in &per_trial {
            rows.push(tr[ei].clone());
        }
    }
    let summary: Vec<SweepSummaryRow> = exps
        .iter()
        .enumerate()
        .map(|(ei, &e)| {
            let cell: Vec<f64> = per_trial.iter().map(|tr| tr[ei].ratio).collect();
            SweepSummaryRow {
                q,
                e,
                mean_ratio: cell.iter().sum::<f64>() / cell.len() as f64,
                min_ratio: cell.iter().cloned().fold(f64::INFINITY, f64::min),
                trials,
            }
        })
        .collect();

    Ok(SweepResult {
        bound: claim.name().into(),
        q,
        exponents: exps,
        trials,
        seed,
        rows,
        summary,
    })
}

/// CSV for per-trial sweep rows.
pub fn sweep_rows_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(
        "q,poly,domains,sizes,image,q4,ratio,predicted_bound,bound_ratio,seed,trial,ms\n",
    );
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{},{},{}\n",
            r.q,
            r.poly,
            r.domains,
            r.sizes,
            r.image,
            r.q4,
            r.ratio,
            r.predicted_bound,
            r.bound_ratio,
            r.seed,
            r.trial,
            r.ms
        ));
    }
    s
}

/// CSV for sweep summaries.
pub fn sweep_summary_csv(summary: &[SweepSummaryRow]) -> String {
    let mut s = String::from("q,e,mean_ratio,min_ratio,trials\n");
    for r in summary {
        s.push_str(&format!(
            "{},{:.2},{:.6},{:.6},{}\n",
            r.q, r.e, r.mean_ratio, r.min_ratio, r.trials
        ));
    }
    s
}

/// CSV for experiment trial records.
pub fn experiment_csv(rec: &ExperimentRecord, q4: u64) -> String {
    let mut s = String::from(
        "q,poly,domains,sizes,image,q4,ratio,predicted_bound,bound_ratio,seed,trial,ms\n",
    );
    for tr in &rec.trials {
        s.push_str(&format!(
            "{},{},{},{},{},{},{:.6},{},{},{},{},{}\n",
            rec.q,
            rec.poly,
            rec.domains.join("x"),
            tr.sizes
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join("x"),
            tr.image,
            q4,
            tr.ratio_q4,
            tr.predicted_bound
                .map(|b| format!("{b:.6}"))
                .unwrap_or_else(|| "na".into()),
            tr.bound_ratio
                .map(|b| format!("{b:.6}"))
                .unwrap_or_else(|| "na".into()),
            rec.seed,
            tr.trial,
            tr.ms
        ));
    }
    s
}
