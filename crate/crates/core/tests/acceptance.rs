//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::cell::OnceCell;
use std::path::Path;
use std::time::{Duration, Instant};

use gucnet::cli::{cmd_eval, cmd_train};
use gucnet::data::{
    gen_gaussian_mixture, read_gfv1, save_gfv1, stratified_split, write_gfv1, BinningKind, CoBinning, DatasetBundle,
    MixtureParams,
};
use gucnet::eval::{ablate_binning, ablate_hamming, HammingCondition};
use gucnet::model::{
    cross_entropy_loss, matching_loss, read_checkpoint, write_checkpoint, Architecture, GucnetModel, ModelMode, Objective,
};
use gucnet::numeric::{grad_check_masked, softmax_rows, Matrix, Rng64};
use gucnet::prototypes::{PrototypeSet, Separation};
use gucnet::training::{train_baseline, train_prototype, train_texture, Alternation, TrainConfig, TrainOutcome};

const GEOMETRY_MAX_SECS: f64 = 1.0;
const GRAD_REL_TOL: f64 = 1e-4;
const GRAD_STEP: f64 = 1e-5;
const GRAD_MAX_SECS: f64 = 30.0;
const GUIDE_MIN_ACC: f64 = 0.99;
const GUIDE_MAX_SECS: f64 = 120.0;
const GUIDED_MIN_GAIN: f64 = 0.02;
const GUIDED_MAX_SECS: f64 = 300.0;
const HAMMING_SLACK: f64 = 0.005;
const HAMMING_MAX_SECS: f64 = 600.0;
const BINNING_MAX_GAP: f64 = 0.02;
const BINNING_SEEDS: [u64; 3] = [1, 2, 3];
const SOFTMAX_SUM_TOL: f64 = 1e-9;
const CE_GRAD_SUM_TOL: f64 = 1e-12;

/// Training seed for every benchmark run; equal to the benchmark data seed.
const BENCH_TRAIN_SEED: u64 = 1;

fn benchmark_x() -> DatasetBundle {
    gen_gaussian_mixture(&MixtureParams { classes: 7, dim: 64, per_class: 400, radius: 1.0, sigma: 0.9, seed: 1 })
        .expect("benchmark data")
}

fn benchmark_guide(classes: usize) -> DatasetBundle {
    gen_gaussian_mixture(&MixtureParams { classes, dim: 64, per_class: 400, radius: 1.0, sigma: 0.05, seed: 2 })
        .expect("guide data")
}

fn bench_cfg(mode: ModelMode) -> TrainConfig {
    let mut c = TrainConfig::new(mode);
    c.seed = BENCH_TRAIN_SEED;
    c
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn pct(a: f64) -> String {
    format!("{:.2}%", 100.0 * a)
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn bits(m: &Matrix) -> Vec<u64> {
    m.as_slice().iter().map(|v| v.to_bits()).collect()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let v = f();
    (v, secs(t.elapsed()))
}

fn geometry() -> Verdict {
    let (res, elapsed) = timed(|| {
        let mut notes = Vec::new();
        let mut ok = true;
        for (k, c, m) in [(128, 7, 18), (128, 10, 12), (256, 250, 1)] {
            let p = PrototypeSet::multi_hot(c, k, m).expect("feasible");
            let h = p.pairwise_hamming().expect("block prototypes");
            let mut uniform = true;
            let mut oracle_ok = true;
            for i in 0..c {
                for j in 0..c {
                    let brute = p
                        .prototype(i)
                        .iter()
                        .zip(p.prototype(j))
                        .filter(|(a, b)| (**a != 0.0) != (**b != 0.0))
                        .count();
                    oracle_ok &= brute == h[i][j];
                    uniform &= h[i][j] == if i == j { 0 } else { 2 * m };
                }
            }
            ok &= uniform && oracle_ok;
            notes.push(format!("K={k} C={c} m={m} -> {}", h[0][1]));
        }
        (ok, notes.join(", "))
    });
    let (ok, notes) = res;
    verdict(ok && elapsed < GEOMETRY_MAX_SECS, format!("{notes}; {elapsed:.3}s"))
}

fn random_matrix(rows: usize, cols: usize, rng: &mut Rng64) -> Matrix {
    Matrix::new(rows, cols, (0..rows * cols).map(|_| rng.normal()).collect()).expect("shape")
}

/// Coordinates whose perturbation moves any latent across a matching-loss
/// kink are skipped.
fn kink_free<'a>(
    model: &'a GucnetModel,
    x: &'a Matrix,
    labels: &'a [usize],
) -> impl FnMut(usize) -> bool + 'a {
    let base = model.flat_params();
    let mut probe = model.clone();
    let g = model.prototypes().cloned();
    let signs = move |m: &GucnetModel| -> Vec<i8> {
        let Some(g) = &g else { return Vec::new() };
        let latent = m.forward(x, None, &mut Rng64::new(0)).expect("forward").latent_x;
        let mut s = Vec::with_capacity(latent.len());
        for (r, &l) in labels.iter().enumerate() {
            for (a, b) in latent.row(r).iter().zip(g.prototype(l)) {
                s.push(if a > b { 1 } else if a < b { -1 } else { 0 });
            }
        }
        s
    };
    let reference = signs(model);
    move |i| {
        let mut flat = base.clone();
        for delta in [GRAD_STEP, -GRAD_STEP] {
            flat.as_mut_slice()[i] = base.as_slice()[i] + delta;
            probe.set_flat_params(&flat).expect("shape");
            if signs(&probe) != reference {
                return false;
            }
        }
        true
    }
}

fn gradients() -> Verdict {
    let (results, elapsed) = timed(|| {
        let (d, dy, k, c, n) = (6, 7, 16, 4, 10);
        let arch = Architecture { input_dim: d, guide_input_dim: None, hidden: vec![12, 10], latent_dim: k, num_classes: c, dropout: 0.5 };
        let mut rng = Rng64::new(17);
        let x = random_matrix(n, d, &mut rng);
        let labels: Vec<usize> = (0..n).map(|i| i % c).collect();
        let mut out = Vec::new();

        let mut base = GucnetModel::new(&arch, ModelMode::Baseline, None, 1).expect("model");
        base.set_training(false);
        let g = PrototypeSet::with_separation(c, k, Separation::HMax).expect("prototypes");
        let mut proto = GucnetModel::new(&arch, ModelMode::Prototype, Some(g), 2).expect("model");
        proto.set_training(false);

        let cases: [(&str, &GucnetModel, Objective); 4] = [
            ("baseline ce", &base, Objective::CrossEntropy),
            ("prototype ce", &proto, Objective::CrossEntropy),
            ("matching", &proto, Objective::Matching { alpha: 0.3 }),
            ("combined", &proto, Objective::Joint { alpha: 0.3 }),
        ];
        for (name, model, obj) in cases {
            let step = model.guided_step(&x, &labels, obj, &mut Rng64::new(0)).expect("step");
            let mut probe = model.clone();
            let err = grad_check_masked(
                |p| {
                    probe.set_flat_params(p).expect("shape");
                    probe.guided_step(&x, &labels, obj, &mut Rng64::new(0)).expect("step").objective
                },
                &model.flat_params(),
                &step.grads.flatten(),
                GRAD_STEP,
                kink_free(model, &x, &labels),
            )
            .expect("grad check");
            out.push((name, err));
        }

        let tex_arch = Architecture { guide_input_dim: Some(dy), ..arch.clone() };
        let mut tex = GucnetModel::new(&tex_arch, ModelMode::Texture, None, 3).expect("model");
        tex.set_training(false);
        let y = random_matrix(n, dy, &mut rng);
        let ly: Vec<usize> = (0..n).map(|i| (i * 3 + 1) % c).collect();
        let step = tex.texture_step(&x, &labels, &y, &ly, &mut Rng64::new(0)).expect("step");
        let mut probe = tex.clone();
        let err = grad_check_masked(
            |p| {
                probe.set_flat_params(p).expect("shape");
                probe.texture_step(&x, &labels, &y, &ly, &mut Rng64::new(0)).expect("step").objective
            },
            &tex.flat_params(),
            &step.grads.flatten(),
            GRAD_STEP,
            |_| true,
        )
        .expect("grad check");
        out.push(("texture ce", err));
        out
    });
    let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let detail = results.iter().map(|(n, e)| format!("{n} {e:.1e}")).collect::<Vec<_>>().join(", ");
    verdict(worst < GRAD_REL_TOL && elapsed < GRAD_MAX_SECS, format!("{detail}; {elapsed:.1}s"))
}

fn small_config(mode: &str, extra: &str) -> String {
    format!(
        r#"{{"mode": "{mode}", "seed": 3, "epochs": 4, "hidden": [64, 32], "latent_dim": 21,
            "data": {{"synthetic": {{"classes": 7, "dim": 64, "per_class": 40, "sigma": 0.9, "seed": 1}}}}{extra}}}"#
    )
}

fn determinism(dir: &Path) -> Verdict {
    let cfg = dir.join("det.json");
    std::fs::write(&cfg, small_config("prototype", r#", "guide": {"prototypes": "h_max"}"#)).expect("write config");
    let runs: Vec<_> = ["a", "b"].iter().map(|r| cmd_train(&cfg, Some(&dir.join(r))).expect("train")).collect();
    let read = |r: &str, f: &str| std::fs::read(dir.join(r).join(f)).expect("read output");
    let metrics_same = read("a", "metrics.jsonl") == read("b", "metrics.jsonl");
    let ckpt_same = read("a", "checkpoint.gucw") == read("b", "checkpoint.gucw");
    verdict(
        metrics_same && ckpt_same && runs[0].test_accuracy == runs[1].test_accuracy,
        format!("metrics identical: {metrics_same}, checkpoint identical: {ckpt_same}"),
    )
}

fn zero_alpha_equivalence(x: &DatasetBundle) -> Verdict {
    let mut base_cfg = bench_cfg(ModelMode::Baseline);
    base_cfg.epochs = 5;
    let mut proto_cfg = bench_cfg(ModelMode::Prototype);
    proto_cfg.epochs = 5;
    proto_cfg.alpha = 0.0;
    proto_cfg.alternation = Alternation::Joint;
    let g = PrototypeSet::with_separation(7, 128, Separation::HMax).expect("prototypes");
    let a = train_baseline(x, &base_cfg).expect("baseline");
    let b = train_prototype(x, &g, &proto_cfg).expect("prototype");
    let same = a.metrics.len() == b.metrics.len()
        && a.metrics.iter().zip(&b.metrics).all(|(p, q)| {
            p.ce_loss.to_bits() == q.ce_loss.to_bits()
                && p.train_acc.to_bits() == q.train_acc.to_bits()
                && p.test_acc.to_bits() == q.test_acc.to_bits()
        });
    let heads_same = bits(&a.model.head().weight) == bits(&b.model.head().weight);
    verdict(same && heads_same, format!("5 epochs on the benchmark, metrics bit-identical: {same}, head identical: {heads_same}"))
}

fn numeric_invariants(x: &DatasetBundle) -> Verdict {
    let mut rng = Rng64::new(5);
    let mut logits = random_matrix(64, 10, &mut rng);
    logits.scale(40.0);
    let labels: Vec<usize> = (0..64).map(|i| i % 10).collect();
    let sum_err = softmax_rows(&logits).iter_rows().map(|r| (r.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max);
    let (_, dce) = cross_entropy_loss(&logits, &labels).expect("ce");
    let grad_sum = dce.iter_rows().map(|r| r.iter().sum::<f64>().abs()).fold(0.0, f64::max);

    let g = PrototypeSet::with_separation(7, 128, Separation::HMax).expect("prototypes");
    let pl: Vec<usize> = (0..14).map(|i| i % 7).collect();
    let at_protos = g.vectors().select_rows(&pl);
    let (ml, dml) = matching_loss(&at_protos, &pl, Some(&g)).expect("ml");
    let ml_zero = ml == 0.0 && dml.max_abs() == 0.0;

    let mut buf = Vec::new();
    write_gfv1(x, &mut buf).expect("write");
    let back = read_gfv1(buf.as_slice(), "x").expect("read");
    let gfv1_exact = back.labels() == x.labels() && bits(back.features()) == bits(x.features());

    let mut gucw_exact = true;
    for mode in [ModelMode::Baseline, ModelMode::Prototype, ModelMode::Texture] {
        let arch = Architecture {
            input_dim: 64,
            guide_input_dim: (mode == ModelMode::Texture).then_some(48),
            hidden: vec![32, 16],
            latent_dim: 128,
            num_classes: 7,
            dropout: 0.5,
        };
        let protos = (mode == ModelMode::Prototype).then(|| g.clone());
        let model = GucnetModel::new(&arch, mode, protos, 9).expect("model");
        let mut bytes = Vec::new();
        write_checkpoint(&model, &mut bytes).expect("write");
        let loaded = read_checkpoint(bytes.as_slice()).expect("read");
        let mut again = Vec::new();
        write_checkpoint(&loaded, &mut again).expect("write");
        gucw_exact &= bytes == again
            && bits(&loaded.flat_params()) == bits(&model.flat_params())
            && loaded.mode() == mode
            && loaded.prototypes().map(|p| bits(p.vectors())) == model.prototypes().map(|p| bits(p.vectors()));
    }
    verdict(
        sum_err <= SOFTMAX_SUM_TOL && grad_sum <= CE_GRAD_SUM_TOL && ml_zero && gfv1_exact && gucw_exact,
        format!(
            "softmax sum err {sum_err:.1e}, ce grad row sum {grad_sum:.1e}, matching at prototypes zero: {ml_zero}, gfv1 exact: {gfv1_exact}, gucw exact: {gucw_exact}"
        ),
    )
}

fn guide_free_inference(dir: &Path) -> Verdict {
    let guide = gen_gaussian_mixture(&MixtureParams { classes: 7, dim: 48, per_class: 40, radius: 1.0, sigma: 0.05, seed: 2 })
        .expect("guide");
    let guide_path = dir.join("guide.gfv1");
    save_gfv1(&guide, &guide_path).expect("save guide");
    let cfg = dir.join("tex.json");
    std::fs::write(
        &cfg,
        small_config("texture", r#", "guide": {"texture": {"data": {"gfv1": {"path": "guide.gfv1"}}}}"#),
    )
    .expect("write config");
    let out = dir.join("tex");
    let report = cmd_train(&cfg, Some(&out)).expect("texture training");
    std::fs::remove_file(&guide_path).expect("remove guide");

    let x = gen_gaussian_mixture(&MixtureParams { classes: 7, dim: 64, per_class: 40, radius: 1.0, sigma: 0.9, seed: 1 })
        .expect("data");
    let split = stratified_split(&x, 0.7, 3).expect("split");
    let (f, l) = x.select(&split.test);
    let test_path = dir.join("test.gfv1");
    save_gfv1(&DatasetBundle::new(f, l, 7, "test").expect("bundle"), &test_path).expect("save test");
    match cmd_eval(&out.join("checkpoint.gucw"), &test_path, None) {
        Ok(eval) => verdict(
            !guide_path.exists() && eval.accuracy == report.test_accuracy,
            format!(
                "evaluated {} X-only samples with the guide file removed; accuracy {} (training run reported {})",
                eval.num_test,
                pct(eval.accuracy),
                pct(report.test_accuracy)
            ),
        ),
        Err(e) => verdict(false, format!("evaluation failed: {e}")),
    }
}

fn guide_separability() -> Verdict {
    let y = benchmark_guide(10);
    let (out, elapsed) = timed(|| train_baseline(&y, &bench_cfg(ModelMode::Baseline)).expect("guide baseline"));
    let acc = out.final_report.accuracy;
    verdict(
        acc >= GUIDE_MIN_ACC && elapsed < GUIDE_MAX_SECS,
        format!("C=10 sigma=0.05 baseline test accuracy {}; {elapsed:.1}s", pct(acc)),
    )
}

struct BenchmarkRuns {
    baseline: TrainOutcome,
    prototype: TrainOutcome,
    texture: TrainOutcome,
    elapsed: f64,
}

fn benchmark_runs(x: &DatasetBundle) -> BenchmarkRuns {
    let y = benchmark_guide(7);
    let g = PrototypeSet::with_separation(7, 128, Separation::HMax).expect("prototypes");
    let t = Instant::now();
    let baseline = train_baseline(x, &bench_cfg(ModelMode::Baseline)).expect("baseline");
    let prototype = train_prototype(x, &g, &bench_cfg(ModelMode::Prototype)).expect("prototype");
    let binning = CoBinning::new(7, BinningKind::Identity);
    let texture = train_texture(x, &y, &binning, &bench_cfg(ModelMode::Texture)).expect("texture");
    BenchmarkRuns { baseline, prototype, texture, elapsed: secs(t.elapsed()) }
}

fn guided_improvement(runs: &BenchmarkRuns) -> Verdict {
    let base = runs.baseline.final_report.accuracy;
    let proto = runs.prototype.final_report.accuracy;
    let tex = runs.texture.final_report.accuracy;
    let same_split = runs.baseline.split == runs.prototype.split && runs.baseline.split == runs.texture.split;
    verdict(
        proto - base >= GUIDED_MIN_GAIN && tex - base >= GUIDED_MIN_GAIN && same_split && runs.elapsed < GUIDED_MAX_SECS,
        format!(
            "baseline {}, prototype {} ({:+.2} pts), texture {} ({:+.2} pts), shared split: {same_split}; {:.1}s",
            pct(base),
            pct(proto),
            100.0 * (proto - base),
            pct(tex),
            100.0 * (tex - base),
            runs.elapsed
        ),
    )
}

fn hamming_trend(x: &DatasetBundle, runs: &BenchmarkRuns) -> Verdict {
    let (report, elapsed) =
        timed(|| ablate_hamming(x, &bench_cfg(ModelMode::Prototype), &HammingCondition::ALL, 1).expect("hamming study"));
    let acc = |c: HammingCondition| report.accuracy(c.label()).expect("condition present");
    let hmax = acc(HammingCondition::HMax);
    let h2 = acc(HammingCondition::H2);
    let random = acc(HammingCondition::RandomUnit);
    let best = report.best_accuracy();
    let consistent = hmax == runs.prototype.final_report.accuracy;
    let detail = report
        .conditions
        .iter()
        .map(|c| format!("{} {}", c.label, pct(c.report.accuracy)))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(
        hmax >= h2 - HAMMING_SLACK && hmax >= random && hmax >= best - HAMMING_SLACK && elapsed < HAMMING_MAX_SECS,
        format!("{detail}; H_max matches the standalone run: {consistent}; {elapsed:.1}s"),
    )
}

fn binning_invariance(x: &DatasetBundle, runs: &BenchmarkRuns) -> Verdict {
    let y = benchmark_guide(7);
    let (report, elapsed) = timed(|| {
        ablate_binning(x, &y, &bench_cfg(ModelMode::Texture), &BINNING_SEEDS, 1).expect("binning study")
    });
    let same = report.accuracy("same").expect("identity condition");
    let consistent = same == runs.texture.final_report.accuracy;
    let gaps: Vec<f64> = report.conditions[1..].iter().map(|c| (c.report.accuracy - same).abs()).collect();
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    let detail = report
        .conditions
        .iter()
        .map(|c| format!("{} {}", c.label, pct(c.report.accuracy)))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(
        worst <= BINNING_MAX_GAP && gaps.len() == BINNING_SEEDS.len(),
        format!("{detail}; max gap {:.2} pts; identity matches the standalone run: {consistent}; {elapsed:.1}s", 100.0 * worst),
    )
}

fn main() {
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let dir = tempfile::tempdir().expect("temp dir");
    let x = benchmark_x();
    let mut failures = 0;
    let mut report = |id: u32, name: &str, run: &mut dyn FnMut() -> Verdict| {
        if let Some(f) = &filter {
            if !name.contains(f.as_str()) && f.parse::<u32>().ok() != Some(id) {
                return;
            }
        }
        let t = Instant::now();
        let v = run();
        if !v.pass {
            failures += 1;
        }
        println!(
            "{} [{id:>2}] {name}: {} ({:.1}s)",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            secs(t.elapsed())
        );
    };

    report(1, "prototype geometry", &mut geometry);
    report(2, "gradient correctness", &mut gradients);
    report(3, "determinism", &mut || determinism(dir.path()));
    report(8, "zero-alpha equivalence", &mut || zero_alpha_equivalence(&x));
    report(9, "numeric invariants", &mut || numeric_invariants(&x));
    report(10, "guide-free inference", &mut || guide_free_inference(dir.path()));
    report(4, "guide separability", &mut guide_separability);

    let runs = OnceCell::new();
    let bench = || runs.get_or_init(|| benchmark_runs(&x));
    report(5, "guided improvement", &mut || guided_improvement(bench()));
    report(6, "hamming trend", &mut || hamming_trend(&x, bench()));
    report(7, "co-binning invariance", &mut || binning_invariance(&x, bench()));

    println!("{} criteria failed", failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
