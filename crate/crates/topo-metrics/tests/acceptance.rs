//! Acceptance suite: one test per shipped guarantee, named by criterion
//! number. Each prints a `[PASS]` line (visible with `--nocapture`); the
//! harness's own per-test line carries the same number either way.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use topo_metrics::oracle::{kruskal_mst_weight, naive_persistence};
use topo_metrics::{
    evaluate, pairwise_distances, rips_h0_diagram, rips_h1_diagram, spearman, synth_cloud,
    total_persistence, Aggregation, CloudShape, CorrelationMode, EmbeddingMatrix, MetricKind,
    Orientation, PersistenceDiagram, RunRecord, RunTable, SpectralSummary,
};

/// 200 seeded clouds covering n in [3,12], d in [1,4], uniform and
/// Gaussian coordinates; shared by the oracle-equivalence and MST-identity
/// checks.
fn corpus() -> Vec<EmbeddingMatrix> {
    (0..200u64)
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial);
            let n = 3 + trial as usize % 10;
            let d = 1 + trial as usize % 4;
            let gaussian = trial % 2 == 1;
            let values: Vec<f64> = (0..n * d)
                .map(|_| {
                    if gaussian {
                        rng.sample(StandardNormal)
                    } else {
                        rng.random()
                    }
                })
                .collect();
            EmbeddingMatrix::new(n, d, values).unwrap()
        })
        .collect()
}

/// Exact multiset fingerprint of a diagram: bit patterns of every finite
/// (birth, death) plus the essential-bar count.
fn diagram_key(diagram: &PersistenceDiagram) -> (Vec<(u64, u64)>, usize) {
    let mut finite: Vec<(u64, u64)> = diagram
        .finite_pairs()
        .map(|p| (p.birth.to_bits(), p.death.to_bits()))
        .collect();
    finite.sort_unstable();
    (finite, diagram.essential_count())
}

fn p0_and_p1(cloud: &EmbeddingMatrix) -> (f64, f64) {
    let dm = pairwise_distances(cloud, MetricKind::Euclidean).unwrap();
    let p0 = total_persistence(&rips_h0_diagram(&dm).unwrap()).unwrap().value;
    let p1 = total_persistence(&rips_h1_diagram(&dm).unwrap()).unwrap().value;
    (p0, p1)
}

fn uniform_cloud(n: usize, d: usize, seed: u64, scale: f64) -> EmbeddingMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..n * d).map(|_| scale * rng.random::<f64>()).collect();
    EmbeddingMatrix::new(n, d, values).unwrap()
}

/// A seeded orthogonal d x d matrix, row-major.
fn orthogonal(d: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = nalgebra::DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let q = raw.qr().q();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            entries.push(q[(i, j)]);
        }
    }
    entries
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_topo-metrics"))
}

#[test]
fn criterion_1_oracle_equivalence_on_200_clouds() {
    let start = Instant::now();
    for (i, cloud) in corpus().iter().enumerate() {
        let dm = pairwise_distances(cloud, MetricKind::Euclidean).unwrap();
        let reference = naive_persistence(&dm, 1).unwrap();
        let h0 = rips_h0_diagram(&dm).unwrap();
        let h1 = rips_h1_diagram(&dm).unwrap();
        assert_eq!(diagram_key(&h0), diagram_key(&reference[0]), "cloud {i} H0");
        assert_eq!(diagram_key(&h1), diagram_key(&reference[1]), "cloud {i} H1");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!(
        "[PASS] criterion 1: optimized H0/H1 match the exhaustive reduction \
         exactly on 200 clouds ({elapsed:?})"
    );
}

#[test]
fn criterion_2_analytic_fixtures() {
    let square = EmbeddingMatrix::from_rows(&[
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 1.0],
    ])
    .unwrap();
    let (p0, p1) = p0_and_p1(&square);
    let sqrt2 = 2f64.sqrt();
    assert!((p0 - 3.0 / sqrt2).abs() <= 1e-12, "square p0 = {p0}");
    assert!(
        (p1 - (sqrt2 - 1.0) / sqrt2).abs() <= 1e-12,
        "square p1 = {p1}"
    );

    let equilateral = EmbeddingMatrix::from_rows(&[
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![0.5, 3f64.sqrt() / 2.0],
    ])
    .unwrap();
    let (_, p1) = p0_and_p1(&equilateral);
    assert!(p1.abs() <= 1e-12, "equilateral p1 = {p1}");
    println!("[PASS] criterion 2: unit-square and equilateral fixtures hit hand values at 1e-12");
}

#[test]
fn criterion_3_circle_has_one_dominant_loop() {
    let circle = synth_cloud(CloudShape::Circle, 60, 2, 0.0, 1, 0).unwrap();
    let dm = pairwise_distances(&circle, MetricKind::Euclidean).unwrap();
    let diagram = rips_h1_diagram(&dm).unwrap();
    let mut bars: Vec<(f64, f64)> = diagram
        .finite_pairs()
        .map(|p| (p.lifetime(), p.death))
        .collect();
    bars.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (longest, death) = bars[0];
    let second = bars.get(1).map_or(0.0, |b| b.0);
    assert!(
        longest >= 10.0 * second,
        "dominance ratio too small: {longest} vs {second}"
    );
    assert!(
        (death - 3f64.sqrt()).abs() <= 1e-6,
        "loop death {death} is not sqrt(3)"
    );
    println!("[PASS] criterion 3: 60-point circle has one dominant loop dying at sqrt(3)");
}

#[test]
fn criterion_4_growth_exponents_match_dimension() {
    let start = Instant::now();
    let output = binary()
        .args([
            "scaling",
            "--dims",
            "2,3",
            "--n-grid",
            "100,200,400,800,1600",
            "--trials",
            "10",
        ])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    let fits = doc["fits"].as_array().unwrap();
    for (fit, expected) in fits.iter().zip([0.5, 2.0 / 3.0]) {
        let got = fit["fitted_exponent"].as_f64().unwrap();
        assert!((fit["expected_exponent"].as_f64().unwrap() - expected).abs() < 1e-15);
        assert!(
            (got - expected).abs() <= 0.07,
            "d={} exponent {got} vs {expected}",
            fit["dimension_d"]
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!(
        "[PASS] criterion 4: connectivity persistence grows as n^(1-1/d) for d=2,3 ({elapsed:?})"
    );
}

#[test]
fn criterion_5_invariance_suite() {
    // persistence metrics: scale, rotate+translate, permute (1e-9)
    let base = uniform_cloud(40, 5, 11, 1.0);
    let (p0, p1) = p0_and_p1(&base);

    let scaled = EmbeddingMatrix::new(
        40,
        5,
        base.values().iter().map(|v| v * 3.7).collect(),
    )
    .unwrap();
    let (q0, q1) = p0_and_p1(&scaled);
    assert!((p0 - q0).abs() <= 1e-9 && (p1 - q1).abs() <= 1e-9, "scaling");

    let q = orthogonal(5, 21);
    let shift = [0.4, -1.0, 2.0, 0.1, -0.7];
    let rotated_rows: Vec<Vec<f64>> = base
        .rows()
        .map(|row| {
            (0..5)
                .map(|i| {
                    shift[i] + (0..5).map(|j| q[i * 5 + j] * row[j]).sum::<f64>()
                })
                .collect()
        })
        .collect();
    let rotated = EmbeddingMatrix::from_rows(&rotated_rows).unwrap();
    let (q0, q1) = p0_and_p1(&rotated);
    assert!(
        (p0 - q0).abs() <= 1e-9 && (p1 - q1).abs() <= 1e-9,
        "rigid motion: {p0} vs {q0}, {p1} vs {q1}"
    );

    let mut permuted_rows: Vec<Vec<f64>> = base.rows().map(<[f64]>::to_vec).collect();
    permuted_rows.reverse();
    permuted_rows.swap(3, 17);
    let permuted = EmbeddingMatrix::from_rows(&permuted_rows).unwrap();
    let (q0, q1) = p0_and_p1(&permuted);
    assert!((p0 - q0).abs() <= 1e-9 && (p1 - q1).abs() <= 1e-9, "permutation");

    // spectral metrics: feature rotation and positive scaling (1e-8);
    // coordinates are kept large so the effective-rank epsilon is inert
    let cloud = uniform_cloud(32, 6, 3, 40.0);
    let summary = |e: &EmbeddingMatrix| -> [f64; 6] {
        let s = SpectralSummary::compute(e).unwrap();
        [
            s.rankme().unwrap(),
            s.alpha_req().unwrap(),
            s.nesum().unwrap(),
            s.stable_rank().unwrap(),
            s.mu0_incoherence().unwrap(),
            s.pc_number().unwrap(),
        ]
    };
    let reference = summary(&cloud);
    let q = orthogonal(6, 5);
    let transformed_rows: Vec<Vec<f64>> = cloud
        .rows()
        .map(|row| {
            (0..6)
                .map(|i| 2.5 * (0..6).map(|j| row[j] * q[j * 6 + i]).sum::<f64>())
                .collect()
        })
        .collect();
    let transformed = EmbeddingMatrix::from_rows(&transformed_rows).unwrap();
    for (i, (a, b)) in reference.iter().zip(summary(&transformed)).enumerate() {
        assert!((a - b).abs() <= 1e-8, "spectral metric {i}: {a} vs {b}");
    }
    println!(
        "[PASS] criterion 5: persistence invariant under similarity transforms (1e-9), \
         spectral metrics under feature rotation and scaling (1e-8)"
    );
}

#[test]
fn criterion_6_h0_deaths_equal_mst_weights() {
    for (i, cloud) in corpus().iter().enumerate() {
        let dm = pairwise_distances(cloud, MetricKind::Euclidean).unwrap();
        let mut deaths: Vec<u64> = rips_h0_diagram(&dm)
            .unwrap()
            .finite_pairs()
            .map(|p| p.death.to_bits())
            .collect();
        deaths.sort_unstable();
        let (_, mut weights) = kruskal_mst_weight(&dm).unwrap();
        weights.sort_by(f64::total_cmp);
        let weights: Vec<u64> = weights.iter().map(|w| w.to_bits()).collect();
        assert_eq!(deaths, weights, "cloud {i}");
    }
    println!("[PASS] criterion 6: H0 death multiset equals Kruskal edge weights exactly");
}

#[test]
fn criterion_7_harness_reproduces_hand_computation() {
    let m_good = [0.10, 0.40, 0.20, 0.80, 0.60];
    let t_auc = [0.60, 0.65, 0.62, 0.80, 0.71];
    let t_acc = [0.55, 0.70, 0.58, 0.72, 0.69];
    let records: Vec<RunRecord> = (0..5)
        .map(|i| RunRecord {
            run_id: format!("r{}", i + 1),
            unsup: [
                ("m_good".to_owned(), m_good[i]),
                ("m_inv".to_owned(), 1.0 - m_good[i]),
            ]
            .into(),
            downstream: [
                ("t_auc".to_owned(), t_auc[i]),
                ("t_acc".to_owned(), t_acc[i]),
            ]
            .into(),
        })
        .collect();
    let orientation = [("m_inv".to_owned(), Orientation::LowerBetter)].into();
    let metrics = ["m_good".to_owned(), "m_inv".to_owned()];
    let tasks = ["t_auc".to_owned(), "t_acc".to_owned()];

    // spreadsheet-style reference values
    const P_AUC: f64 = 0.976_663_420_858_179_3;
    const P_ACC: f64 = 0.906_192_128_026_394_8;

    let table = RunTable::new(records.clone(), orientation, CorrelationMode::Signed).unwrap();
    let summary = evaluate(&table, &metrics, &tasks, Aggregation::Mean).unwrap();
    let row = |metric: &str, task: &str| {
        summary
            .rows
            .iter()
            .find(|r| r.metric == metric && r.task == task)
            .unwrap()
    };
    for (metric, sign) in [("m_good", 1.0), ("m_inv", -1.0)] {
        let auc = row(metric, "t_auc");
        assert!((auc.pearson - sign * P_AUC).abs() <= 1e-12, "{metric} {}", auc.pearson);
        assert!((auc.spearman - sign * 1.0).abs() <= 1e-12);
        let acc = row(metric, "t_acc");
        assert!((acc.pearson - sign * P_ACC).abs() <= 1e-12, "{metric} {}", acc.pearson);
        assert!((acc.spearman - sign * 0.9).abs() <= 1e-12);
        // argmax of m_good and argmin of m_inv both pick run r4
        assert_eq!(auc.selection_quality, 0.80);
        assert_eq!(auc.best_possible, 0.80);
        assert_eq!(acc.selection_quality, 0.72);
        assert_eq!(acc.best_possible, 0.72);
    }
    // the summary is ordered by mean Spearman: 0.95 before -0.95
    assert_eq!(summary.aggregates[0].metric, "m_good");
    assert!((summary.aggregates[0].spearman - 0.95).abs() <= 1e-12);

    // Absolute mode strips the sign from the inverted metric
    let table =
        RunTable::new(records, Default::default(), CorrelationMode::Absolute).unwrap();
    let summary = evaluate(&table, &metrics, &tasks, Aggregation::Mean).unwrap();
    for r in &summary.rows {
        assert!(r.pearson > 0.0 && r.spearman > 0.0);
    }
    let inv_auc = summary
        .rows
        .iter()
        .find(|r| r.metric == "m_inv" && r.task == "t_auc")
        .unwrap();
    assert!((inv_auc.pearson - P_AUC).abs() <= 1e-12);

    // average-rank tie handling, worked example
    let tie = spearman(&[1.0, 2.0, 3.0, 4.0], &[10.0, 10.0, 20.0, 30.0]).unwrap();
    assert!((tie - 4.5 / 22.5_f64.sqrt()).abs() <= 1e-12);
    assert!((tie - 0.948_683_298_050_513_8).abs() <= 1e-12);
    println!("[PASS] criterion 7: harness matches the 5-run hand fixture at 1e-12");
}

#[test]
fn criterion_8_collapsed_clusters_score_below_uniform_cloud() {
    for seed in 0..10 {
        let clusters = synth_cloud(CloudShape::GaussianClusters, 300, 8, 0.01, 3, seed).unwrap();
        let cube = synth_cloud(CloudShape::UniformCube, 300, 8, 0.0, 1, seed).unwrap();
        let collapsed = p0_and_p1(&clusters).0;
        let spread = p0_and_p1(&cube).0;
        assert!(
            collapsed < spread,
            "seed {seed}: clusters {collapsed} vs cube {spread}"
        );
    }
    println!(
        "[PASS] criterion 8: collapsed 3-cluster clouds score below uniform clouds, 10/10 seeds"
    );
}

#[test]
fn criterion_9_cli_outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).display().to_string();

    let manifest = dir.path().join("runs.csv");
    std::fs::write(
        &manifest,
        "run_id,rankme,auc\nr1,1.5,0.62\nr2,2.5,0.81\nr3,2.0,0.70\n",
    )
    .unwrap();
    let config = dir.path().join("eval.toml");
    std::fs::write(&config, "metrics = [\"rankme\"]\ntasks = [\"auc\"]\n").unwrap();

    let cloud_csv = path("cloud.csv");
    let circle_bin = path("circle.bin");
    let report_json = path("report.json");
    let scaling_json = path("scaling.json");
    let eval_json = path("eval.json");
    let commands: [Vec<&str>; 5] = [
        vec![
            "synth", "--shape", "clusters", "--n", "40", "--d", "3", "--noise", "0.05",
            "--clusters", "3", "--seed", "9", "--output", &cloud_csv,
        ],
        vec![
            "synth", "--shape", "circle", "--n", "24", "--d", "4", "--noise", "0.02",
            "--seed", "3", "--output", &circle_bin,
        ],
        vec![
            "compute", "--input", &cloud_csv, "--subsample", "20", "--seed", "7",
            "--output", &report_json,
        ],
        vec![
            "scaling", "--dims", "2", "--n-grid", "30,60,120", "--trials", "3", "--seed",
            "5", "--output", &scaling_json,
        ],
        vec![
            "evaluate",
            "--runs",
            manifest.to_str().unwrap(),
            "--config",
            config.to_str().unwrap(),
            "--output",
            &eval_json,
        ],
    ];
    let outputs = ["cloud.csv", "circle.bin", "report.json", "scaling.json", "eval.json"];

    let mut first_pass: Vec<Vec<u8>> = Vec::new();
    for round in 0..2 {
        for (i, args) in commands.iter().enumerate() {
            let output = binary().args(args).output().unwrap();
            assert!(
                output.status.success(),
                "round {round}, command {i}: {}",
                String::from_utf8_lossy(&output.stderr)
            );
            // stdout must be byte-stable too
            assert!(output.stdout.is_empty());
        }
        let bytes: Vec<Vec<u8>> = outputs
            .iter()
            .map(|name| std::fs::read(dir.path().join(name)).unwrap())
            .collect();
        if round == 0 {
            first_pass = bytes;
        } else {
            for (name, (a, b)) in outputs.iter().zip(first_pass.iter().zip(&bytes)) {
                assert_eq!(a, b, "{name} differs between runs");
            }
        }
    }
    println!("[PASS] criterion 9: every CLI command rewrites byte-identical outputs");
}
