//! Desk-scale verification of the three characteristic-net equivalences:
//! complement, union via the sum net, and Cartesian product via the
//! i-product net. Each clause trains the composed side's operands and a
//! direct net for the same region, then reports both accuracies on a fresh
//! evaluation set.
//!
//! The equivalences hold exactly only for perfect characteristic nets;
//! trained nets are imperfect, so the report carries both sides and their
//! gap rather than asserting equality.

use crate::dataset::{product_dataset, LabeledDataset};
use crate::error::CliError;
use crate::eval::accuracy_scalar;
use crate::sample::{
    make_characteristic_dataset, make_characteristic_dataset_in_window, make_union_dataset,
    union_window, Epsilon, DEFAULT_BBOX_MARGIN,
};
use crate::seeds::derive_seed;
use crate::shape::Shape;
use crate::train::{init_mlp, train_sgd, TrainConfig};
use mlpalg_core::algebra::{complement, i_product, sum, Sharpness};
use mlpalg_core::Mlp;
use std::fmt;

/// Rows per class in each operand training set.
const TRAIN_POS: usize = 500;
const TRAIN_NEG: usize = 500;
/// Hidden width of a directly trained union net.
const UNION_HIDDEN: usize = 8;
/// Hidden width of a directly trained product net. The product region lives
/// in twice the dimensions, so the direct net gets a wider hidden layer and
/// more training rows than the union clause.
const PRODUCT_HIDDEN: usize = 16;
/// Factor dataset sizes for the product clause: 50·40 = 2000 evaluation
/// rows, with 0.7 positive fraction per factor so the AND labels are close
/// to balanced.
const PRODUCT_EVAL_FACTORS: [(usize, usize); 2] = [(35, 15), (28, 12)];
/// Rows per class when training the direct product net on independent
/// samples of the product shape.
const PRODUCT_TRAIN_POS: usize = 1800;
const PRODUCT_TRAIN_NEG: usize = 1800;

/// Accuracies of both sides of one equivalence on the same evaluation set.
#[derive(Debug, Clone, PartialEq)]
pub struct ClauseReport {
    pub clause: String,
    /// Accuracy of the net built by composition.
    pub composed: f64,
    /// Accuracy of the net trained directly on the composite region.
    pub trained: f64,
}

impl ClauseReport {
    pub fn gap(&self) -> f64 {
        (self.composed - self.trained).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Report {
    pub clauses: Vec<ClauseReport>,
}

impl Theorem1Report {
    /// `clause,composed,trained,gap` CSV rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("clause,composed,trained,gap\n");
        for c in &self.clauses {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e}\n",
                c.clause,
                c.composed,
                c.trained,
                c.gap()
            ));
        }
        out
    }
}

impl fmt::Display for Theorem1Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<12} {:>10} {:>10} {:>8}", "clause", "composed", "trained", "gap")?;
        for c in &self.clauses {
            writeln!(
                f,
                "{:<12} {:>10.4} {:>10.4} {:>8.4}",
                c.clause,
                c.composed,
                c.trained,
                c.gap()
            )?;
        }
        Ok(())
    }
}

fn train_on(
    data: &LabeledDataset,
    dims: &[usize],
    cfg: &TrainConfig,
    seed: u64,
) -> Result<Mlp, CliError> {
    let net = init_mlp(dims, cfg.init_scale, derive_seed(seed, 0))?;
    let cfg = TrainConfig {
        seed: derive_seed(seed, 1),
        ..cfg.clone()
    };
    let (trained, _) = train_sgd(&net, data, &cfg)?;
    Ok(trained)
}

/// Runs all three clauses over a pair of same-space shapes. The master seed
/// is `cfg.seed`; everything else derives from it.
pub fn verify_theorem1(
    shape_a: &Shape,
    shape_b: &Shape,
    eps: Epsilon,
    cfg: &TrainConfig,
    lambda: Sharpness,
) -> Result<Theorem1Report, CliError> {
    let dim = shape_a.dim();
    if shape_b.dim() != dim {
        return Err(CliError::Validation(format!(
            "shapes must share one space, got dimensions {dim} and {}",
            shape_b.dim()
        )));
    }
    let seed = cfg.seed;
    let shapes = [shape_a.clone(), shape_b.clone()];
    let window = union_window(&shapes, DEFAULT_BBOX_MARGIN);
    let window = (window.0.as_slice(), window.1.as_slice());
    // dim+1 hyperplanes is the bare minimum to bound a convex region, which
    // makes training fragile; one spare hidden unit costs little and avoids
    // bad local optima.
    let operand_dims = [dim, dim + 2, 1];

    // Operand nets, trained against the shared window so each is reliable
    // over the whole scene.
    let data_a = make_characteristic_dataset_in_window(
        shape_a,
        eps,
        window,
        TRAIN_POS,
        TRAIN_NEG,
        derive_seed(seed, 101),
    )?;
    let net_a = train_on(&data_a, &operand_dims, cfg, derive_seed(seed, 102))?;
    let data_b = make_characteristic_dataset_in_window(
        shape_b,
        eps,
        window,
        TRAIN_POS,
        TRAIN_NEG,
        derive_seed(seed, 103),
    )?;
    let net_b = train_on(&data_b, &operand_dims, cfg, derive_seed(seed, 104))?;

    // Clause 1: complement. The composed side negates net_a's final map; the
    // direct side trains on the complement-labeled region.
    let complement_train = make_characteristic_dataset(
        shape_a,
        eps,
        TRAIN_POS,
        TRAIN_NEG,
        derive_seed(seed, 111),
    )?
    .with_flipped_labels()?;
    let net_ac = train_on(&complement_train, &operand_dims, cfg, derive_seed(seed, 112))?;
    let complement_eval = make_characteristic_dataset(
        shape_a,
        eps,
        1000,
        1000,
        derive_seed(seed, 113),
    )?
    .with_flipped_labels()?;
    let clause1 = ClauseReport {
        clause: "complement".to_string(),
        composed: accuracy_scalar(&complement(&net_a)?, &complement_eval)?.accuracy,
        trained: accuracy_scalar(&net_ac, &complement_eval)?.accuracy,
    };

    // Clause 2: union. Composed side is the sum net of the operands; direct
    // side trains one net on the union dataset.
    let union_train =
        make_union_dataset(&shapes, eps, 2 * TRAIN_POS, 2 * TRAIN_NEG, derive_seed(seed, 121))?;
    let union_net = train_on(
        &union_train,
        &[dim, UNION_HIDDEN, 1],
        cfg,
        derive_seed(seed, 122),
    )?;
    let union_eval = make_union_dataset(&shapes, eps, 1000, 1000, derive_seed(seed, 123))?;
    let clause2 = ClauseReport {
        clause: "union".to_string(),
        composed: accuracy_scalar(&sum(&net_a, &net_b, lambda)?, &union_eval)?.accuracy,
        trained: accuracy_scalar(&union_net, &union_eval)?.accuracy,
    };

    // Clause 3: Cartesian product. Composed side is the i-product of the
    // operands; direct side trains on the product shape itself. Independent
    // samples of the product region cover the doubled space far better than
    // a cross of factor datasets, whose rows all lie on a lattice.
    let product_shape = Shape::Product {
        left: Box::new(shape_a.clone()),
        right: Box::new(shape_b.clone()),
    };
    let product_train = make_characteristic_dataset(
        &product_shape,
        eps,
        PRODUCT_TRAIN_POS,
        PRODUCT_TRAIN_NEG,
        derive_seed(seed, 131),
    )?;
    let product_net = train_on(
        &product_train,
        &[2 * dim, PRODUCT_HIDDEN, 1],
        cfg,
        derive_seed(seed, 133),
    )?;
    let product_eval = {
        let (pa, na) = PRODUCT_EVAL_FACTORS[0];
        let (pb, nb) = PRODUCT_EVAL_FACTORS[1];
        let fa = make_characteristic_dataset(shape_a, eps, pa, na, derive_seed(seed, 134))?;
        let fb = make_characteristic_dataset(shape_b, eps, pb, nb, derive_seed(seed, 135))?;
        product_dataset(&fa, &fb)?
    };
    let clause3 = ClauseReport {
        clause: "product".to_string(),
        composed: accuracy_scalar(&i_product(&net_a, &net_b, lambda)?, &product_eval)?.accuracy,
        trained: accuracy_scalar(&product_net, &product_eval)?.accuracy,
    };

    Ok(Theorem1Report {
        clauses: vec![clause1, clause2, clause3],
    })
}
