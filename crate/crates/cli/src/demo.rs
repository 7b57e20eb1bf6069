//! End-to-end demonstration pipelines.
//!
//! The torus demo builds the flat torus in R⁴ out of two trained disks: the
//! circle band is the big disk minus the small one, and the torus is the
//! i-product of the band with itself. Both difference variants are built;
//! the AND-NOT (`set_difference`) variant is the geometrically correct one,
//! while the OR-with-complement reading of the literal difference fires on
//! inner-disk points, which the probe subset makes visible.
//!
//! The multilabel demo trains one characteristic net per disjoint shape,
//! stacks them with the o-product into one multi-output net, and checks the
//! argmax rule plus per-component extraction.

use crate::dataset::{concat_datasets, product_dataset, LabeledDataset};
use crate::error::CliError;
use crate::eval::{accuracy_argmax, accuracy_scalar};
use crate::netfile;
use crate::sample::{
    make_characteristic_dataset, make_characteristic_dataset_in_window, make_multiclass_dataset,
    sample_positive, union_window, Epsilon, DEFAULT_BBOX_MARGIN,
};
use crate::seeds::derive_seed;
use crate::shape::Shape;
use crate::train::{init_mlp, train_sgd, TrainConfig};
use mlpalg_core::algebra::{
    align_depths, component, difference, i_product, multi_o_product, set_difference, Sharpness,
};
use mlpalg_core::{Matrix, Mlp};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::Path;

/// Everything the torus demo needs; see [`TorusConfig::default`] for the
/// reference setup (unit big disk, half-radius small disk, ε 0.05, λ 20).
#[derive(Debug, Clone)]
pub struct TorusConfig {
    pub r_big: f64,
    pub r_small: f64,
    pub eps: f64,
    pub lambda: f64,
    pub seed: u64,
    pub train: TrainConfig,
}

impl Default for TorusConfig {
    fn default() -> Self {
        TorusConfig {
            r_big: 1.0,
            r_small: 0.5,
            eps: 0.05,
            lambda: 20.0,
            seed: 0,
            train: TrainConfig::default(),
        }
    }
}

/// Disk training rows per class.
const TORUS_TRAIN_POS: usize = 500;
const TORUS_TRAIN_NEG: usize = 500;
/// Factor dataset sizes: 80·50 = 4000 evaluation points in R⁴.
const TORUS_EVAL_FACTORS: [(usize, usize); 2] = [(56, 24), (35, 15)];
/// Probe pairs drawn from deep inside the small disk.
const PROBE_POINTS: usize = 200;
/// Probe radius as a fraction of the small disk's radius, keeping probes
/// clear of the ε band around the inner boundary.
const PROBE_RADIUS_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, PartialEq)]
pub struct TorusReport {
    pub disk_big_train_accuracy: f64,
    pub disk_small_train_accuracy: f64,
    /// Accuracy of each variant on the fresh 4000-point torus dataset.
    pub torus_sd_accuracy: f64,
    pub torus_lit_accuracy: f64,
    /// Probe points (inner-disk pairs, true label negative): how many each
    /// variant classifies positive.
    pub probe_total: usize,
    pub probe_sd_positive: usize,
    pub probe_lit_positive: usize,
}

impl TorusReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,value\n");
        out.push_str(&format!(
            "disk_big_train_accuracy,{:.16e}\n",
            self.disk_big_train_accuracy
        ));
        out.push_str(&format!(
            "disk_small_train_accuracy,{:.16e}\n",
            self.disk_small_train_accuracy
        ));
        out.push_str(&format!("torus_sd_accuracy,{:.16e}\n", self.torus_sd_accuracy));
        out.push_str(&format!("torus_lit_accuracy,{:.16e}\n", self.torus_lit_accuracy));
        out.push_str(&format!("probe_total,{}\n", self.probe_total));
        out.push_str(&format!("probe_sd_positive,{}\n", self.probe_sd_positive));
        out.push_str(&format!("probe_lit_positive,{}\n", self.probe_lit_positive));
        out
    }

    pub fn table(&self) -> String {
        let mut t = String::new();
        let _ = writeln!(t, "{:<16} {:>10} {:>16}", "variant", "accuracy", "probe positives");
        let _ = writeln!(
            t,
            "{:<16} {:>10.4} {:>13}/{}",
            "set_difference", self.torus_sd_accuracy, self.probe_sd_positive, self.probe_total
        );
        let _ = writeln!(
            t,
            "{:<16} {:>10.4} {:>13}/{}",
            "difference", self.torus_lit_accuracy, self.probe_lit_positive, self.probe_total
        );
        t
    }
}

fn trained_provenance(shape: &Shape, dims: &[usize], cfg: &TrainConfig, accuracy: f64) -> Value {
    json!({
        "provenance": {
            "op": "trained",
            "shape": shape.to_string(),
            "dims": dims,
            "config": {
                "learning_rate": cfg.learning_rate,
                "epochs": cfg.epochs,
                "batch_size": cfg.batch_size,
                "loss": cfg.loss.to_string(),
                "init_scale": cfg.init_scale,
                "seed": cfg.seed,
            },
            "final_accuracy": accuracy,
        }
    })
}

fn composed_provenance(op: &str, lambda: Option<f64>, operands: Vec<Value>) -> Value {
    let mut node = json!({"op": op, "operands": operands});
    if let Some(l) = lambda {
        node["lambda"] = json!(l);
    }
    json!({ "provenance": node })
}

fn provenance_of(metadata: &Value) -> Value {
    metadata
        .get("provenance")
        .cloned()
        .unwrap_or_else(|| json!({"op": "unknown"}))
}

fn write_net(dir: &Path, name: &str, net: &Mlp, metadata: Value) -> Result<(), CliError> {
    netfile::save(&dir.join(name), net, metadata)?;
    Ok(())
}

/// Trains `dims` on `data` with seeds derived from `seed`.
fn train_fresh(
    data: &LabeledDataset,
    dims: &[usize],
    cfg: &TrainConfig,
    seed: u64,
) -> Result<(Mlp, f64, TrainConfig), CliError> {
    let net = init_mlp(dims, cfg.init_scale, derive_seed(seed, 0))?;
    let cfg = TrainConfig {
        seed: derive_seed(seed, 1),
        ..cfg.clone()
    };
    let (trained, report) = train_sgd(&net, data, &cfg)?;
    Ok((trained, report.accuracy, cfg))
}

/// Runs the torus pipeline, writing every net and `accuracy.csv` into
/// `out_dir`; returns the report and the printable comparison table.
pub fn run_torus(cfg: &TorusConfig, out_dir: &Path) -> Result<(TorusReport, String), CliError> {
    if !(cfg.r_small > 0.0 && cfg.r_small < cfg.r_big && cfg.r_big.is_finite()) {
        return Err(CliError::Usage(format!(
            "radii must satisfy 0 < r_small < r_big, got {} and {}",
            cfg.r_small, cfg.r_big
        )));
    }
    let eps = Epsilon::new(cfg.eps)?;
    let lambda = Sharpness::new(cfg.lambda)?;
    std::fs::create_dir_all(out_dir).map_err(|e| {
        CliError::Validation(format!("{}: {e}", out_dir.display()))
    })?;
    let seed = cfg.seed;

    let disk_big = Shape::Ball {
        center: vec![0.0, 0.0],
        radius: cfg.r_big,
    };
    let disk_small = Shape::Ball {
        center: vec![0.0, 0.0],
        radius: cfg.r_small,
    };
    let band = Shape::Annulus {
        center: vec![0.0, 0.0],
        r_inner: cfg.r_small,
        r_outer: cfg.r_big,
    };
    // Both disks see negatives from the big disk's inflated box, so the
    // small net is trained on the whole scene.
    let window = union_window(std::slice::from_ref(&disk_big), DEFAULT_BBOX_MARGIN);
    let window = (window.0.as_slice(), window.1.as_slice());
    let dims = [2, 3, 1];

    let data_big = make_characteristic_dataset_in_window(
        &disk_big,
        eps,
        window,
        TORUS_TRAIN_POS,
        TORUS_TRAIN_NEG,
        derive_seed(seed, 1),
    )?;
    let (net_big, acc_big, cfg_big) = train_fresh(&data_big, &dims, &cfg.train, derive_seed(seed, 2))?;
    let data_small = make_characteristic_dataset_in_window(
        &disk_small,
        eps,
        window,
        TORUS_TRAIN_POS,
        TORUS_TRAIN_NEG,
        derive_seed(seed, 3),
    )?;
    let (net_small, acc_small, cfg_small) =
        train_fresh(&data_small, &dims, &cfg.train, derive_seed(seed, 4))?;

    let meta_big = trained_provenance(&disk_big, &dims, &cfg_big, acc_big);
    let meta_small = trained_provenance(&disk_small, &dims, &cfg_small, acc_small);

    // The two difference readings of the band, then the torus as a product
    // of the band with itself. Depths already agree; align_depths is a
    // no-op pass-through here but keeps the pipeline shape-agnostic.
    let band_sd = set_difference(&net_big, &net_small, lambda)?;
    let band_lit = difference(&net_big, &net_small, lambda)?;
    let meta_band_sd = composed_provenance(
        "set_difference",
        Some(cfg.lambda),
        vec![provenance_of(&meta_big), provenance_of(&meta_small)],
    );
    let meta_band_lit = composed_provenance(
        "difference",
        Some(cfg.lambda),
        vec![provenance_of(&meta_big), provenance_of(&meta_small)],
    );

    let (band_sd_l, band_sd_r) = align_depths(&band_sd, &band_sd)?;
    let torus_sd = i_product(&band_sd_l, &band_sd_r, lambda)?;
    let (band_lit_l, band_lit_r) = align_depths(&band_lit, &band_lit)?;
    let torus_lit = i_product(&band_lit_l, &band_lit_r, lambda)?;
    let meta_torus_sd = composed_provenance(
        "i_product",
        Some(cfg.lambda),
        vec![
            provenance_of(&meta_band_sd),
            provenance_of(&meta_band_sd),
        ],
    );
    let meta_torus_lit = composed_provenance(
        "i_product",
        Some(cfg.lambda),
        vec![
            provenance_of(&meta_band_lit),
            provenance_of(&meta_band_lit),
        ],
    );

    // Fresh product evaluation set over the band × band torus.
    let eval = {
        let (pa, na) = TORUS_EVAL_FACTORS[0];
        let (pb, nb) = TORUS_EVAL_FACTORS[1];
        let fa = make_characteristic_dataset(&band, eps, pa, na, derive_seed(seed, 5))?;
        let fb = make_characteristic_dataset(&band, eps, pb, nb, derive_seed(seed, 6))?;
        product_dataset(&fa, &fb)?
    };
    let sd_accuracy = accuracy_scalar(&torus_sd, &eval)?.accuracy;
    let lit_accuracy = accuracy_scalar(&torus_lit, &eval)?.accuracy;

    // Probe: pairs deep inside the small disk. Both projections are in the
    // small disk, so the points are off the torus; the literal variant
    // fires on them, the AND-NOT variant must not.
    let probe_core = Shape::Ball {
        center: vec![0.0, 0.0],
        radius: cfg.r_small * PROBE_RADIUS_FRACTION,
    };
    let left = sample_positive(&probe_core, PROBE_POINTS, derive_seed(seed, 7))?;
    let right = sample_positive(&probe_core, PROBE_POINTS, derive_seed(seed, 8))?;
    let mut probe = Matrix::zeros(PROBE_POINTS, 4);
    for i in 0..PROBE_POINTS {
        probe.row_mut(i)[..2].copy_from_slice(left.row(i));
        probe.row_mut(i)[2..].copy_from_slice(right.row(i));
    }
    let count_positive = |net: &Mlp| -> Result<usize, CliError> {
        let out = net.forward_batch(&probe)?;
        Ok((0..PROBE_POINTS).filter(|&i| out.get(i, 0) >= 0.5).count())
    };
    let probe_sd_positive = count_positive(&torus_sd)?;
    let probe_lit_positive = count_positive(&torus_lit)?;

    let report = TorusReport {
        disk_big_train_accuracy: acc_big,
        disk_small_train_accuracy: acc_small,
        torus_sd_accuracy: sd_accuracy,
        torus_lit_accuracy: lit_accuracy,
        probe_total: PROBE_POINTS,
        probe_sd_positive,
        probe_lit_positive,
    };

    write_net(out_dir, "disk_big.net.json", &net_big, meta_big)?;
    write_net(out_dir, "disk_small.net.json", &net_small, meta_small)?;
    write_net(out_dir, "band_sd.net.json", &band_sd, meta_band_sd)?;
    write_net(out_dir, "band_lit.net.json", &band_lit, meta_band_lit)?;
    write_net(out_dir, "torus_sd.net.json", &torus_sd, meta_torus_sd)?;
    write_net(out_dir, "torus_lit.net.json", &torus_lit, meta_torus_lit)?;
    std::fs::write(out_dir.join("accuracy.csv"), report.to_csv()).map_err(|e| {
        CliError::Validation(format!("{}: {e}", out_dir.join("accuracy.csv").display()))
    })?;

    let table = report.table();
    Ok((report, table))
}

/// Multilabel demo configuration: `k ≥ 2` disjoint shapes in one space.
#[derive(Debug, Clone)]
pub struct MultilabelConfig {
    pub shapes: Vec<Shape>,
    pub eps: f64,
    pub seed: u64,
    pub train: TrainConfig,
}

const ML_TRAIN_POS: usize = 500;
const ML_TRAIN_NEG: usize = 500;
const ML_EVAL_PER_CLASS: usize = 400;
/// Sampled members per shape when checking pairwise disjointness.
const DISJOINT_PROBE: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct MultilabelReport {
    pub train_accuracies: Vec<f64>,
    pub argmax_accuracy: f64,
    pub component_accuracies: Vec<f64>,
}

impl MultilabelReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,value\n");
        for (i, a) in self.train_accuracies.iter().enumerate() {
            out.push_str(&format!("shape{i}_train_accuracy,{a:.16e}\n"));
        }
        out.push_str(&format!("argmax_accuracy,{:.16e}\n", self.argmax_accuracy));
        for (i, a) in self.component_accuracies.iter().enumerate() {
            out.push_str(&format!("component{i}_accuracy,{a:.16e}\n"));
        }
        out
    }

    pub fn table(&self) -> String {
        let mut t = String::new();
        let _ = writeln!(t, "argmax accuracy: {:.4}", self.argmax_accuracy);
        for (i, (tr, c)) in self
            .train_accuracies
            .iter()
            .zip(&self.component_accuracies)
            .enumerate()
        {
            let _ = writeln!(t, "shape {i}: train {tr:.4}, component {c:.4}");
        }
        t
    }
}

/// Runs the multilabel pipeline, writing per-shape nets, the stacked net,
/// and `report.csv` into `out_dir`.
pub fn run_multilabel(
    cfg: &MultilabelConfig,
    out_dir: &Path,
) -> Result<(MultilabelReport, String), CliError> {
    let k = cfg.shapes.len();
    if k < 2 {
        return Err(CliError::Usage(format!(
            "need at least 2 shapes, got {k}"
        )));
    }
    let eps = Epsilon::new(cfg.eps)?;
    let dim = cfg.shapes[0].dim();
    for s in &cfg.shapes {
        if s.dim() != dim {
            return Err(CliError::Validation(format!(
                "shapes must share one space, got dimensions {dim} and {}",
                s.dim()
            )));
        }
    }
    let seed = cfg.seed;

    // Disjointness: sampled members of one shape may not lie in another.
    for (i, si) in cfg.shapes.iter().enumerate() {
        let pts = sample_positive(si, DISJOINT_PROBE, derive_seed(seed, 900 + i as u64))?;
        for (j, sj) in cfg.shapes.iter().enumerate() {
            if i == j {
                continue;
            }
            for row in pts.iter_rows() {
                if sj.contains(row).map_err(|e| CliError::Validation(e.to_string()))? {
                    return Err(CliError::Validation(format!(
                        "shapes {i} and {j} overlap near ({})",
                        row.iter()
                            .map(|v| format!("{v:.3}"))
                            .collect::<Vec<_>>()
                            .join(", ")
                    )));
                }
            }
        }
    }

    std::fs::create_dir_all(out_dir).map_err(|e| {
        CliError::Validation(format!("{}: {e}", out_dir.display()))
    })?;

    // Shared negative window over the whole scene, so each net learns to
    // stay low on the other shapes' territory.
    let window = union_window(&cfg.shapes, DEFAULT_BBOX_MARGIN);
    let window = (window.0.as_slice(), window.1.as_slice());
    // 2·dim+2 hidden units: enough half-planes for a box (2·dim faces) with
    // slack, since the shapes here are arbitrary.
    let dims = [dim, 2 * dim + 2, 1];
    let mut nets = Vec::with_capacity(k);
    let mut metas = Vec::with_capacity(k);
    let mut train_accuracies = Vec::with_capacity(k);
    for (i, shape) in cfg.shapes.iter().enumerate() {
        let data = make_characteristic_dataset_in_window(
            shape,
            eps,
            window,
            ML_TRAIN_POS,
            ML_TRAIN_NEG,
            derive_seed(seed, 2 * i as u64),
        )?;
        let (net, acc, used_cfg) =
            train_fresh(&data, &dims, &cfg.train, derive_seed(seed, 2 * i as u64 + 1))?;
        metas.push(trained_provenance(shape, &dims, &used_cfg, acc));
        train_accuracies.push(acc);
        nets.push(net);
    }

    let stacked = multi_o_product(&nets)?;
    let meta_stacked = composed_provenance(
        "multi_o_product",
        None,
        metas.iter().map(provenance_of).collect(),
    );

    let eval = make_multiclass_dataset(&cfg.shapes, ML_EVAL_PER_CLASS, derive_seed(seed, 800))?;
    let argmax_accuracy = accuracy_argmax(&stacked, &eval)?.accuracy;

    // Component extraction: label-i coordinate against a scalar dataset of
    // shape-i members (1) vs. other shapes' members plus window negatives (0).
    let mut component_accuracies = Vec::with_capacity(k);
    for i in 0..k {
        let extracted = component(&stacked, i + 1)?;
        let mut parts: Vec<LabeledDataset> = Vec::new();
        let own = sample_positive(&cfg.shapes[i], 300, derive_seed(seed, 810 + i as u64))?;
        parts.push(LabeledDataset::new(
            own.clone(),
            Matrix::from_fn(own.rows(), 1, |_, _| 1.0),
        )?);
        for (j, other) in cfg.shapes.iter().enumerate() {
            if j == i {
                continue;
            }
            let pts = sample_positive(other, 150, derive_seed(seed, 820 + j as u64))?;
            parts.push(LabeledDataset::new(
                pts.clone(),
                Matrix::from_fn(pts.rows(), 1, |_, _| 0.0),
            )?);
        }
        let negs = crate::sample::sample_negative_in_window(
            &cfg.shapes[i],
            eps,
            window,
            150,
            derive_seed(seed, 830 + i as u64),
        )?;
        parts.push(LabeledDataset::new(
            negs.clone(),
            Matrix::from_fn(negs.rows(), 1, |_, _| 0.0),
        )?);
        let refs: Vec<&LabeledDataset> = parts.iter().collect();
        let data = concat_datasets(&refs)?;
        component_accuracies.push(accuracy_scalar(&extracted, &data)?.accuracy);
    }

    let report = MultilabelReport {
        train_accuracies,
        argmax_accuracy,
        component_accuracies,
    };

    for (i, (net, meta)) in nets.iter().zip(metas).enumerate() {
        write_net(out_dir, &format!("shape{i}.net.json"), net, meta)?;
    }
    write_net(out_dir, "stacked.net.json", &stacked, meta_stacked)?;
    std::fs::write(out_dir.join("report.csv"), report.to_csv()).map_err(|e| {
        CliError::Validation(format!("{}: {e}", out_dir.join("report.csv").display()))
    })?;

    let table = report.table();
    Ok((report, table))
}
