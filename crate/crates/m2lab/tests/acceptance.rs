//! Acceptance suite: one test per acceptance criterion, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.
//!
//! Three sub-criteria are expected to fail and are kept failing on
//! purpose: the claimed normality of the two sum-product digraphs
//! (criteria 5b, 7b) and the printed common-neighbor summary of the
//! singular-difference graph on SL2 (criterion 8b) are disproved by the
//! exhaustive checks in this repository. The assertions state the claims
//! as stated; the failure messages carry the counterexample data.

use std::fs;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;

use m2lab::expand::{
    predicted_bound, sharpness_check, threshold_sweep, GrowthBound, GROWTH_BOUNDS,
};
use m2lab::graph::{build_graph, tensor_product, Family, GraphSpec};
use m2lab::rng::{partial_shuffle, SplitMix64};
use m2lab::spectral::{
    general_eigenvalues, interlacing_check, mixing_check, second_eigenvalue, tensor_spectrum,
    MethodChoice,
};
use m2lab::tables::{Domain, GroupTable};
use m2lab::verify::{
    classify_pair, verify_case_analysis, verify_decomposition, verify_normality,
    verify_scaling_lemma, verify_sl2_sumcover, CaseFamily, CaseLabel, DecompTarget, EntryMode,
    Mode,
};
use m2lab::{Fe, Field, RegularGraph};

fn tables(q: u32) -> Arc<GroupTable> {
    Arc::new(GroupTable::enumerate(Field::new(q).unwrap()).unwrap())
}

fn graph(family: Family, q: u32) -> RegularGraph {
    build_graph(GraphSpec::new(family, q), tables(q)).unwrap()
}

fn pass(line: &str) {
    println!("[acceptance] {line}: PASS");
}

#[test]
fn criterion_01_cardinalities() {
    for q in [2u64, 3, 5, 7] {
        let started = Instant::now();
        let t = tables(q as u32);
        assert_eq!(t.sl2().len() as u64, q * q * q - q, "q={q} |SL2|");
        assert_eq!(
            t.gl2().len() as u64,
            (q * q - 1) * (q * q - q),
            "q={q} |GL2|"
        );
        assert_eq!(
            t.det_slice(Fe(0)).len() as u64,
            q * q * q + q * q - q,
            "q={q} |D0|"
        );
        for alpha in 1..q {
            assert_eq!(
                t.det_slice(Fe(alpha as u8)).len() as u64,
                q * q * q - q,
                "q={q} |D_{alpha}|"
            );
        }
        assert!(
            started.elapsed().as_secs() < 1,
            "q={q} enumeration exceeded 1 s"
        );
    }
    pass("criterion 01 cardinalities (q in {2,3,5,7})");
}

#[test]
fn criterion_02_unit_cayley_audit() {
    for q in [3u64, 4, 5, 7] {
        let started = Instant::now();
        let g = graph(Family::UnitCayley, q as u32);
        assert_eq!(g.n as u64, q * q * q * q, "q={q} n");
        assert_eq!(g.degree(), q * q * q - q, "q={q} degree");
        let audit = g.audit_degrees(g.n);
        assert!(audit.matches_claim, "q={q} degree audit");
        let rep = second_eigenvalue(&g, MethodChoice::Auto, false, 2048).unwrap();
        let bound = 2.0 * (q as f64).powf(1.5);
        assert!(
            rep.lambda2 <= bound + 1e-6,
            "q={q} lambda {} > {bound}",
            rep.lambda2
        );
        let diameter = g.diameter().unwrap();
        assert_eq!(diameter, Some(2), "q={q} diameter (None = disconnected)");
        let elapsed = started.elapsed();
        assert!(
            elapsed.as_secs() <= 300,
            "q={q} audit took {elapsed:?}, budget 5 min"
        );
    }
    pass("criterion 02 unit Cayley (n, d, lambda, diameter, runtime)");
}

#[test]
fn criterion_03_det_alpha_spectra_match() {
    for q in [2u32, 3] {
        let t = tables(q);
        let unit = build_graph(GraphSpec::new(Family::UnitCayley, q), Arc::clone(&t)).unwrap();
        let base = second_eigenvalue(&unit, MethodChoice::DenseFull, false, 2048).unwrap();
        let base_spec = base.spectrum.unwrap();
        for alpha in 1..q {
            let g = build_graph(
                GraphSpec::new(Family::DetAlpha(Fe(alpha as u8)), q),
                Arc::clone(&t),
            )
            .unwrap();
            let rep = second_eigenvalue(&g, MethodChoice::DenseFull, false, 2048).unwrap();
            let spec = rep.spectrum.unwrap();
            for (i, (x, y)) in base_spec.iter().zip(spec.iter()).enumerate() {
                assert!(
                    (x - y).abs() < 1e-8,
                    "q={q} alpha={alpha} eigenvalue {i}: {x} vs {y}"
                );
            }
        }
    }
    pass("criterion 03 det-alpha spectra equal unit Cayley (q in {2,3})");
}

#[test]
fn criterion_04_sl2_sum_cover() {
    for q in [2u32, 3, 5, 7] {
        assert!(verify_sl2_sumcover(&tables(q)).unwrap(), "q={q}");
    }
    pass("criterion 04 SL2 + SL2 = M2 (q in {2,3,5,7})");
}

#[test]
fn criterion_05a_g1_degrees() {
    for q in [2u64, 3] {
        let g = graph(Family::SpDigraphM2, q as u32);
        let audit = g.audit_degrees(g.n);
        assert_eq!(
            (audit.out_min, audit.out_max),
            (q * q * q * q, q * q * q * q),
            "q={q} out-degree"
        );
        assert_eq!(
            (audit.in_min.unwrap(), audit.in_max.unwrap()),
            (q * q * q * q, q * q * q * q),
            "q={q} in-degree"
        );
    }
    pass("criterion 05a sum-product digraph degrees (q in {2,3})");
}

#[test]
fn criterion_05b_g1_normality_as_claimed() {
    // Stated criterion: |N+| = |N-| for every pair, exhaustively at q = 2
    // and over 1e5 sampled pairs at q = 3, with zero violations.
    //
    // This fails, and the failure is genuine: the digraph is not normal.
    // N+ counts solutions of (A1-A2) X = C1-C2 and is governed by the ROW
    // profile of the rank-1 differences; N- counts solutions of
    // X (A1-A2) = C1-C2 and is governed by the COLUMN profile. The pair
    // A1-A2 = [[1,0],[0,0]], C1-C2 = [[1,1],[0,0]] has matching row
    // profiles (N+ = q^2) but mismatched column profiles (N- = 0); at
    // q = 2 exactly 4608 of the 32640 unordered pairs disagree.
    let g = graph(Family::SpDigraphM2, 2);
    let rep = verify_normality(&g, Mode::Exhaustive).unwrap();
    assert_eq!(
        rep.mismatch_count,
        0,
        "[acceptance] criterion 05b G1 normality: FAIL - {} of {} pairs have |N+| != |N-| \
         (first witness: {}); the claimed normality does not hold",
        rep.mismatch_count,
        rep.pairs_checked,
        rep.mismatches
            .first()
            .map(|m| m.to_string())
            .unwrap_or_default()
    );
    pass("criterion 05b G1 normality");
}

#[test]
fn criterion_05c_g1_walk_identity() {
    let g2 = graph(Family::SpDigraphM2, 2);
    let rep = verify_decomposition(&g2, DecompTarget::G1Mmt, EntryMode::Exhaustive).unwrap();
    assert_eq!(rep.pairs_checked, 65536);
    assert_eq!(
        rep.mismatch_count,
        0,
        "q=2 exhaustive: {:?}",
        rep.mismatches.first()
    );

    let g3 = graph(Family::SpDigraphM2, 3);
    let rep = verify_decomposition(
        &g3,
        DecompTarget::G1Mmt,
        EntryMode::Sampled {
            entries: 1_000_000,
            seed: 7,
        },
    )
    .unwrap();
    assert_eq!(rep.pairs_checked, 1_000_000);
    assert_eq!(
        rep.mismatch_count,
        0,
        "q=3 sampled: {:?}",
        rep.mismatches.first()
    );
    pass("criterion 05c M M^t decomposition (q=2 exact, q=3 sampled 1e6)");
}

#[test]
fn criterion_05d_g1_lambda_ratio() {
    // brute-force oracle first: eigenvalues of the full nonsymmetric
    // adjacency at q = 2 confirm the M M^t route, then the frozen
    // constant 3 bounds the measured ratio
    let g = graph(Family::SpDigraphM2, 2);
    let rep = second_eigenvalue(&g, MethodChoice::Auto, true, 2048).unwrap();

    let n = g.n;
    let mut dense = vec![0.0f64; n * n];
    for u in 0..n {
        for v in g.out_neighbors(u) {
            dense[u * n + v as usize] = 1.0;
        }
    }
    let eigs = general_eigenvalues(&mut dense, n).unwrap();
    let mut moduli: Vec<f64> = eigs.iter().map(|(re, im)| re.hypot(*im)).collect();
    moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
    assert!((moduli[0] - 16.0).abs() < 1e-6, "principal eigenvalue");
    assert!(
        (moduli[1] - rep.lambda2).abs() < 1e-6,
        "direct solve {} vs via-mmt {}",
        moduli[1],
        rep.lambda2
    );

    let ratio = rep.ratio.unwrap();
    assert!(
        ratio > 0.0 && ratio <= 3.0,
        "lambda/q^(7/2) = {ratio} outside (0, 3]"
    );
    pass(&format!(
        "criterion 05d G1 lambda via MM^t = {:.6}, ratio {:.4} in (0, 3]",
        rep.lambda2, ratio
    ));
}

#[test]
fn criterion_06_g1_case_analysis() {
    let g2 = graph(Family::SpDigraphM2, 2);
    let rep = verify_case_analysis(&g2, Mode::Exhaustive).unwrap();
    assert_eq!(rep.pairs_checked, 256 * 255);
    assert_eq!(rep.mismatch_count, 0, "q=2: {:?}", rep.mismatches.first());

    // the predicted counts are exactly {1, 0, 0, q^2, q^2, 0}
    let t = tables(2);
    let q4 = t.n() as usize;
    let enc = |m: [u8; 4]| t.encode(m2lab::Mat2::from_reps(m)) as usize;
    // (I, 0) vs (0, I): invertible A-difference, one solution
    let probe = classify_pair(
        &t,
        CaseFamily::SpDigraphM2,
        enc([1, 0, 0, 1]) * q4,
        enc([1, 0, 0, 1]),
    )
    .unwrap();
    assert_eq!(probe.label, CaseLabel::G1Case1);
    assert_eq!(probe.predicted, 1);
    // rank-1 A-difference with equal C: q^2 solutions
    let probe = classify_pair(
        &t,
        CaseFamily::SpDigraphM2,
        enc([1, 0, 0, 0]) * q4 + enc([0, 1, 1, 0]),
        enc([0, 1, 1, 0]),
    )
    .unwrap();
    assert_eq!(probe.label, CaseLabel::G1Case3_3);
    assert_eq!(probe.predicted, 4);

    let g3 = graph(Family::SpDigraphM2, 3);
    let rep = verify_case_analysis(
        &g3,
        Mode::Sampled {
            pairs: 100_000,
            seed: 11,
        },
    )
    .unwrap();
    assert_eq!(rep.pairs_checked, 100_000);
    assert_eq!(rep.mismatch_count, 0, "q=3: {:?}", rep.mismatches.first());
    pass("criterion 06 G1 case analysis (q=2 exhaustive, q=3 sampled 1e5)");
}

#[test]
fn criterion_07a_g2_degree_walk_identity_cases() {
    for q in [2u64, 3] {
        let g = graph(Family::SpDigraphSl2, q as u32);
        let audit = g.audit_degrees(g.n);
        let sl2 = q * q * q - q;
        assert_eq!((audit.out_min, audit.out_max), (sl2, sl2), "q={q} out");
        assert_eq!(
            (audit.in_min.unwrap(), audit.in_max.unwrap()),
            (sl2, sl2),
            "q={q} in"
        );
    }
    let g = graph(Family::SpDigraphSl2, 2);
    let rep = verify_decomposition(&g, DecompTarget::G2Mmt, EntryMode::Exhaustive).unwrap();
    assert_eq!(rep.pairs_checked, 96 * 96);
    assert_eq!(
        rep.mismatch_count,
        0,
        "walk identity (F_q reading): {:?}",
        rep.mismatches.first()
    );

    let cases = verify_case_analysis(&g, Mode::Exhaustive).unwrap();
    assert_eq!(cases.mismatch_count, 0, "{:?}", cases.mismatches.first());
    // predicted counts per case: {1, 0, 0, 0, 0, 0, q, 0}
    let t = tables(2);
    for (u, v) in [(0usize, 17usize), (5, 80), (33, 51)] {
        let cls = classify_pair(&t, CaseFamily::SpDigraphSl2, u, v).unwrap();
        let want = match cls.label {
            CaseLabel::G2Case1 => 1,
            CaseLabel::G2Case5_3 => 2,
            _ => 0,
        };
        assert_eq!(cls.predicted, want);
    }
    pass("criterion 07a G2 degree, walk identity (q=2), case analysis (q=2)");
}

#[test]
fn criterion_07b_g2_normality_as_claimed() {
    // Stated criterion: normality exhaustive at q = 2. Fails for the same
    // reason as the M2 digraph: row versus column profiles of rank-1
    // differences. The walk identity of criterion 07a and the case
    // analysis still hold exactly; only the normality claim is false.
    let g = graph(Family::SpDigraphSl2, 2);
    let rep = verify_normality(&g, Mode::Exhaustive).unwrap();
    assert_eq!(
        rep.mismatch_count,
        0,
        "[acceptance] criterion 07b G2 normality: FAIL - {} of {} pairs have |N+| != |N-| \
         (first witness: {}); the claimed normality does not hold",
        rep.mismatch_count,
        rep.pairs_checked,
        rep.mismatches
            .first()
            .map(|m| m.to_string())
            .unwrap_or_default()
    );
    pass("criterion 07b G2 normality");
}

#[test]
fn criterion_08a_component_lemmas() {
    // degrees exact at q in {3, 5}
    for q in [3u64, 5] {
        let g11 = graph(Family::Sl2InvertibleDiff, q as u32);
        assert_eq!(g11.audit_degrees(g11.n).out_min, q * q * q - q * q - q);
        assert_eq!(g11.audit_degrees(g11.n).out_max, q * q * q - q * q - q);
        let g31 = graph(Family::Sl2SingularDiff, q as u32);
        assert_eq!(g31.audit_degrees(g31.n).out_min, q * q - 1);
        assert_eq!(g31.audit_degrees(g31.n).out_max, q * q - 1);
        let g41 = graph(Family::SingularDiffM2, q as u32);
        assert_eq!(g41.audit_degrees(g41.n).out_min, q * q * q + q * q - q - 1);
        assert_eq!(g41.audit_degrees(g41.n).out_max, q * q * q + q * q - q - 1);
        let g212 = graph(Family::Sl2Sl2Diff, q as u32);
        let audit = g212.audit_degrees(g212.n);
        assert_eq!(audit.out_min, audit.out_max, "q={q} SL2-diff regular");
        println!(
            "[acceptance]   measured SL2-difference degree at q={q}: {}",
            audit.out_min
        );
    }

    // frozen constants c31 = c11 = 1 confirmed by dense solves at q = 3
    let q3 = 3f64;
    let g31 = graph(Family::Sl2SingularDiff, 3);
    let r31 = second_eigenvalue(&g31, MethodChoice::DenseFull, false, 2048).unwrap();
    assert!(
        r31.lambda2 <= q3.powf(1.5),
        "lambda(G31) = {} > q^1.5",
        r31.lambda2
    );
    let g11 = graph(Family::Sl2InvertibleDiff, 3);
    let r11 = second_eigenvalue(&g11, MethodChoice::DenseFull, false, 2048).unwrap();
    assert!(
        r11.lambda2 <= q3.powf(1.5),
        "lambda(G11) = {} > q^1.5",
        r11.lambda2
    );

    // lambda(G12) <= q^2 at q in {3, 5}
    for q in [3u32, 5] {
        let g12 = graph(Family::GlDiffM2, q);
        let r12 = second_eigenvalue(&g12, MethodChoice::DenseFull, false, 2048).unwrap();
        assert!(
            r12.lambda2 <= (q * q) as f64 + 1e-9,
            "q={q} lambda(G12) = {}",
            r12.lambda2
        );
    }

    // interlacing of the SL2-difference graph inside the unit Cayley graph
    for q in [3u32, 5] {
        let t = tables(q);
        let host = build_graph(GraphSpec::new(Family::UnitCayley, q), Arc::clone(&t)).unwrap();
        let minor = build_graph(GraphSpec::new(Family::Sl2Sl2Diff, q), Arc::clone(&t)).unwrap();
        let hr = second_eigenvalue(&host, MethodChoice::DenseFull, false, 2048).unwrap();
        let mr = second_eigenvalue(&minor, MethodChoice::DenseFull, false, 2048).unwrap();
        assert!(
            interlacing_check(
                hr.spectrum.as_ref().unwrap(),
                mr.spectrum.as_ref().unwrap(),
                1e-7
            )
            .unwrap(),
            "q={q} interlacing violated"
        );
        assert!(
            mr.lambda2 <= 2.0 * (q as f64).powf(1.5) + 1e-9,
            "q={q} lambda(SL2-diff) = {}",
            mr.lambda2
        );
    }
    pass("criterion 08a component degrees, lambda bounds, interlacing");
}

#[test]
fn criterion_08b_g31_common_neighbor_summary_as_claimed() {
    // Stated criterion: the claimed common-neighbor summary for the
    // singular-difference graph on SL2 (counts 2q-1 / 2q-1 / 2q-1 / 0 /
    // q-1 / q per case) matches brute force exhaustively at q = 3.
    //
    // This fails, and the failure is genuine: the claimed counts derive
    // from a parametrization that admits the degenerate solutions X = A1
    // and X = A2 and double-counts one X across parameter pairs. Brute
    // force gives q - 2 common neighbors for EVERY det-0 pair (the
    // claimed summary says 2q-1 for three subcases and 0 for the
    // fourth), and the det != 0 counts are not even constant per
    // claimed case: at q = 3 they take values {3, 4} and {0, 3}.
    let g = graph(Family::Sl2SingularDiff, 3);
    let rep = verify_case_analysis(&g, Mode::Exhaustive).unwrap();
    assert_eq!(rep.pairs_checked, 552);
    assert_eq!(
        rep.mismatch_count,
        0,
        "[acceptance] criterion 08b G31 common-neighbor summary: FAIL - {} of {} pairs \
         disagree with the claimed counts (first witness: {})",
        rep.mismatch_count,
        rep.pairs_checked,
        rep.mismatches
            .first()
            .map(|m| m.to_string())
            .unwrap_or_default()
    );
    pass("criterion 08b G31 common-neighbor summary");
}

#[test]
fn criterion_09_tensor_spectra() {
    let t = tables(2);
    let a = build_graph(GraphSpec::new(Family::GlDiffM2, 2), Arc::clone(&t)).unwrap();
    let b = build_graph(GraphSpec::new(Family::Sl2SingularDiff, 2), Arc::clone(&t)).unwrap();
    let ra = second_eigenvalue(&a, MethodChoice::DenseFull, false, 2048).unwrap();
    let rb = second_eigenvalue(&b, MethodChoice::DenseFull, false, 2048).unwrap();
    let composed = tensor_spectrum(ra.spectrum.as_ref().unwrap(), rb.spectrum.as_ref().unwrap());

    let product = tensor_product(a, b).unwrap();
    let rp = second_eigenvalue(&product, MethodChoice::DenseFull, false, 2048).unwrap();
    let direct = rp.spectrum.unwrap();
    assert_eq!(composed.len(), direct.len());
    for (i, (x, y)) in composed.iter().zip(direct.iter()).enumerate() {
        assert!(
            (x - y).abs() < 1e-6,
            "eigenvalue {i}: composed {x} vs direct {y}"
        );
    }
    pass("criterion 09 tensor spectrum composition (q=2, 96 eigenvalues)");
}

#[test]
fn criterion_10_mixing_lemma_trials() {
    let cases: Vec<(Family, u32, bool)> = vec![
        (Family::UnitCayley, 3, false),
        (Family::UnitCayley, 5, false),
        (Family::SpDigraphM2, 2, true),
        (Family::SpDigraphSl2, 2, true),
    ];
    for (family, q, digraph) in cases {
        let g = graph(family.clone(), q);
        let rep = second_eigenvalue(&g, MethodChoice::Auto, digraph, 2048).unwrap();
        let mut rng = SplitMix64::stream(0x1717, q as u64);
        for trial in 0..200 {
            let bs = 1 + rng.below(g.n as u64 - 1) as usize;
            let cs = 1 + rng.below(g.n as u64 - 1) as usize;
            let mut pool: Vec<u32> = (0..g.n as u32).collect();
            partial_shuffle(&mut pool, bs, &mut rng);
            let bset = pool[..bs].to_vec();
            let mut pool2: Vec<u32> = (0..g.n as u32).collect();
            partial_shuffle(&mut pool2, cs, &mut rng);
            let cset = pool2[..cs].to_vec();
            let check = mixing_check(&g, &bset, &cset, rep.lambda2);
            assert!(
                check.holds,
                "{} q={q} trial {trial}: deviation {} > bound {}",
                g.spec.name(),
                check.deviation,
                check.bound
            );
        }
    }
    pass("criterion 10 mixing inequality, 200 random (B,C) per graph");
}

#[test]
fn criterion_11_scaling_lemma() {
    let t3 = tables(3);
    for i in 1..3u8 {
        for j in 1..3u8 {
            assert!(verify_scaling_lemma(
                &t3,
                Fe(i),
                Fe(j),
                t3.det_slice(Fe(i)),
                t3.det_slice(Fe(j))
            )
            .unwrap());
        }
    }
    let t5 = tables(5);
    let mut rng = SplitMix64::new(0x5ca1e);
    for i in 1..5u8 {
        for j in 1..5u8 {
            for inst in 0..100 {
                let si = 1 + rng.below(t5.det_slice(Fe(i)).len() as u64) as usize;
                let sj = 1 + rng.below(t5.det_slice(Fe(j)).len() as u64) as usize;
                let mut di = t5.det_slice(Fe(i)).to_vec();
                let mut dj = t5.det_slice(Fe(j)).to_vec();
                partial_shuffle(&mut di, si, &mut rng);
                partial_shuffle(&mut dj, sj, &mut rng);
                di.truncate(si);
                dj.truncate(sj);
                assert!(
                    verify_scaling_lemma(&t5, Fe(i), Fe(j), &di, &dj).unwrap(),
                    "q=5 i={i} j={j} instance {inst}"
                );
            }
        }
    }
    pass("criterion 11 scaling lemma (q=3 full slices, q=5 1600 subset instances)");
}

#[test]
fn criterion_12_sharpness() {
    for (q, want) in [(2u32, 10u64), (3, 33), (5, 145)] {
        let rep = sharpness_check(&tables(q)).unwrap();
        assert_eq!(rep.image, want, "q={q}");
        assert!(rep.subset_of_d0 && rep.exact, "q={q}");
    }
    pass("criterion 12 sharpness image = q^3 + q^2 - q (q in {2,3,5})");
}

#[test]
fn criterion_13_expansion_trends() {
    let started = Instant::now();
    const SEED: u64 = 20_240_817;
    // the 0.1 floor below was validated against the q = 3 runs (min
    // observed bound ratio is printed) before being frozen here
    const BOUND_FLOOR: f64 = 0.1;
    let mut min_bound_ratio = f64::INFINITY;
    for q in [3u32, 5, 7] {
        let t = tables(q);
        for claim in GROWTH_BOUNDS {
            let all_sl2 = claim.domains().iter().all(|d| *d == Domain::Sl2);
            let exps: Vec<f64> = if all_sl2 {
                vec![1.0, 1.5, 2.0, 2.5, 3.0]
            } else {
                vec![1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]
            };
            let sweep = threshold_sweep(&t, claim, &exps, 20, SEED, true).unwrap();
            // (a) mean image/q^4 ratio is monotone nondecreasing in |A|
            for w in sweep.summary.windows(2) {
                assert!(
                    w[1].mean_ratio >= w[0].mean_ratio - 1e-12,
                    "bound {} q={q}: mean ratio decreases from e={} to e={}",
                    claim.name(),
                    w[0].e,
                    w[1].e
                );
            }
            // (b) every trial with a modest predicted bound beats 0.1x it
            let q4half = (t.n() as f64) / 2.0;
            for row in &sweep.rows {
                if row.predicted_bound <= q4half {
                    assert!(
                        row.image as f64 >= BOUND_FLOOR * row.predicted_bound,
                        "bound {} q={q} sizes {}: image {} < 0.1 x bound {}",
                        claim.name(),
                        row.sizes,
                        row.image,
                        row.predicted_bound
                    );
                    if row.predicted_bound > 0.0 {
                        min_bound_ratio = min_bound_ratio.min(row.bound_ratio);
                    }
                }
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() <= 1800,
        "sweeps took {elapsed:?}, budget 30 min"
    );
    pass(&format!(
        "criterion 13 expansion trends (min bound ratio {min_bound_ratio:.3}, {:?} total)",
        elapsed
    ));
}

#[test]
fn criterion_14_weil_bound() {
    for q in [3u32, 5, 7, 9] {
        let f = Field::new(q).unwrap();
        let bound = 2.0 * (q as f64).sqrt();
        for a in 1..q {
            for b in 1..q {
                let k = f.kloosterman(Fe(a as u8), Fe(b as u8));
                assert!(k.abs() <= bound + 1e-9, "q={q} K({a},{b}) = {k}");
            }
        }
    }
    pass("criterion 14 Weil bound |K(a,b)| <= 2 sqrt(q) (q in {3,5,7,9})");
}

static REPRO_SEQ: AtomicU64 = AtomicU64::new(0);

#[test]
fn criterion_15_reproducibility() {
    let seq = REPRO_SEQ.fetch_add(1, Ordering::Relaxed);
    let dir = std::env::temp_dir().join(format!(
        "m2lab-acceptance-repro-{}-{seq}",
        std::process::id()
    ));
    fs::create_dir_all(&dir).unwrap();
    let cache = dir.join("cache");
    let mut blobs: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
    for (tag, threads) in [("one", "1"), ("four", "4")] {
        let out = dir.join(format!("exp-{tag}.csv"));
        let code = m2lab::cli::dispatch(
            &[
                "experiment",
                "--poly",
                "x(y+z)",
                "--q",
                "5",
                "--domains",
                "SL2,SL2,M2",
                "--sizes",
                "q^2,q^2,q^2.5",
                "--trials",
                "10",
                "--seed",
                "90210",
                "--threads",
                threads,
                "--no-timing",
                "--out",
                out.to_str().unwrap(),
                "--cache-dir",
                cache.to_str().unwrap(),
            ]
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(code, 0);
        blobs.push((
            fs::read(&out).unwrap(),
            fs::read(out.with_extension("json")).unwrap(),
        ));
    }
    assert_eq!(blobs[0].0, blobs[1].0, "CSV differs across thread counts");
    assert_eq!(blobs[0].1, blobs[1].1, "JSON differs across thread counts");
    pass("criterion 15 byte-identical rerun at different thread counts");
}

// ---------------------------------------------------------------------------
// supporting consistency checks tied to the criteria above
// ---------------------------------------------------------------------------

/// The walk identity bounds the second singular value: lambda^2 is at most
/// (q^4 - 1) plus the coefficient-weighted component degrees.
#[test]
fn g1_walk_identity_implies_lambda_bound() {
    let q = 2u64;
    let g = graph(Family::SpDigraphM2, 2);
    let rep = second_eigenvalue(&g, MethodChoice::Auto, true, 2048).unwrap();
    let degree_of = |i: u8| -> u64 {
        let c = graph(Family::AuxE(i), 2);
        let audit = c.audit_degrees(c.n);
        assert_eq!(audit.out_min, audit.out_max, "component {i} regular");
        audit.out_min
    };
    let bound = (q.pow(4) - 1) as f64
        + degree_of(11) as f64
        + degree_of(12) as f64
        + (q * q - 1) as f64 * degree_of(13) as f64
        + (q * q - 1) as f64 * degree_of(14) as f64
        + degree_of(15) as f64;
    assert!(
        rep.lambda2 * rep.lambda2 <= bound,
        "lambda^2 = {} > assembled bound {bound}",
        rep.lambda2 * rep.lambda2
    );
}

/// Sum growth floor implied by the measured lambda of the unit Cayley
/// graph: measured |A + B| can never drop below the mixing floor.
#[test]
fn mixing_floor_consistency_q3_q5() {
    use m2lab::expand::{image_size, sample_subset, sum_floor_from_mixing, Poly};
    for q in [3u32, 5] {
        let t = tables(q);
        let g = build_graph(GraphSpec::new(Family::UnitCayley, q), Arc::clone(&t)).unwrap();
        let rep = second_eigenvalue(&g, MethodChoice::Auto, false, 2048).unwrap();
        for trial in 0..30u64 {
            let mut rng = SplitMix64::stream(0xf100 + q as u64, trial);
            let a_sz = 1 + rng.below(t.sl2().len() as u64 / 2) as usize;
            let b_sz = 1 + rng.below(t.n() as u64 / 2) as usize;
            let a = sample_subset(&t, Domain::Sl2, a_sz, &mut rng).unwrap();
            let b = sample_subset(&t, Domain::M2, b_sz, &mut rng).unwrap();
            let (img, _) = image_size(&t, Poly::Sum, &[a, b]).unwrap();
            let floor = sum_floor_from_mixing(
                g.n as u64,
                g.degree(),
                rep.lambda2,
                a_sz as u64,
                b_sz as u64,
            );
            assert!(
                img as f64 >= floor - 1e-6,
                "q={q} trial {trial}: |A+B| = {img} below floor {floor:.3}"
            );
        }
    }
}

/// Coverage thresholds that exceed the domain size are reported, not
/// asserted: at q = 3 the xy+z+t threshold round(q^3.75) caps at q^4.
#[test]
fn coverage_experiment_reports_frequencies() {
    use m2lab::expand::{coverage_experiment, ExperimentConfig, Poly, SizeSpec};
    let t = tables(3);
    let cfg = ExperimentConfig {
        q: 3,
        poly: Poly::XyPlusZPlusT,
        domains: vec![Domain::M2; 4],
        sizes: vec![SizeSpec::Exp(3.75); 4],
        trials: 20,
        seed: 5150,
    };
    let rec = coverage_experiment(&t, &cfg, true).unwrap();
    let covered = rec.trials.iter().filter(|tr| tr.covered).count();
    println!(
        "[acceptance]   xy+z+t coverage at q=3, |A| = round(q^3.75) capped to {}: {covered}/20 trials",
        rec.trials[0].sizes[0]
    );
    // with sets this large the image always covers; the assertion pins the
    // qualitative outcome without pretending the threshold was reachable
    assert!(covered == 20);
    // full sets trivially cover
    let full = ExperimentConfig {
        sizes: vec![SizeSpec::Abs(81); 4],
        trials: 1,
        ..cfg
    };
    let rec = coverage_experiment(&t, &full, true).unwrap();
    assert!(rec.trials[0].covered);
}

/// Criterion 13's 0.1 constant, validated against the q = 3 oracle before
/// freezing: the minimum observed image / bound over the q = 3 sweep cells
/// with bound <= q^4 / 2 stays above 0.1.
#[test]
fn bound_floor_validation_q3() {
    let t = tables(3);
    let mut min_ratio = f64::INFINITY;
    for claim in GROWTH_BOUNDS {
        let all_sl2 = claim.domains().iter().all(|d| *d == Domain::Sl2);
        let exps: Vec<f64> = if all_sl2 {
            vec![1.0, 1.5, 2.0, 2.5, 3.0]
        } else {
            vec![1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]
        };
        let sweep = threshold_sweep(&t, claim, &exps, 20, 20_240_817, true).unwrap();
        for row in &sweep.rows {
            if row.predicted_bound > 0.0 && row.predicted_bound <= 40.5 {
                min_ratio = min_ratio.min(row.bound_ratio);
            }
        }
    }
    println!("[acceptance]   q=3 oracle min image/bound = {min_ratio:.3}");
    assert!(min_ratio >= 0.1);
}

/// Spot check the bound arithmetic used by criterion 13.
#[test]
fn predicted_bound_spot_values() {
    assert_eq!(
        predicted_bound(GrowthBound::ProductSl2, &[60, 60], 5).unwrap(),
        125.0
    );
    let v = predicted_bound(GrowthBound::SumProductM2, &[27], 3).unwrap();
    assert!((v - 15.588457268119896).abs() < 1e-9);
}
