//! Command-line surface: argument definitions and the handlers behind each
//! verb. Handlers buffer their success output and return it, so nothing is
//! printed to stdout unless the whole command succeeded.

use crate::dataset::LabeledDataset;
use crate::demo::{run_multilabel, run_torus, MultilabelConfig, TorusConfig};
use crate::error::CliError;
use crate::eval::{accuracy_argmax, accuracy_scalar, EvalReport};
use crate::netfile::{self, provenance_summary};
use crate::sample::{make_characteristic_dataset, Epsilon};
use crate::seeds::derive_seed;
use crate::shape::Shape;
use crate::theorem::verify_theorem1;
use crate::train::{init_mlp, train_sgd, Loss, TrainConfig};
use clap::{Args, Parser, Subcommand};
use mlpalg_core::algebra::{
    align_depths, complement, component, conjunction, difference, i_product, identical_extension,
    multi_i_product, multi_o_product, multi_sum, o_product, set_difference, sum, Sharpness,
};
use mlpalg_core::Mlp;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const SHAPE_HELP: &str = "Shape spec: ball:cx,..:r | annulus:cx,..:r_in:r_out | \
box:min,..:max,.. | prod(<spec>,<spec>)";

/// Exact algebra over multilayer perceptrons: train characteristic nets on
/// geometric shapes, compose them at the weight level, and evaluate both
/// decision rules.
#[derive(Debug, Parser)]
#[command(name = "mlpalg", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a characteristic net for a shape.
    Train(TrainArgs),
    /// Combine saved nets with one of the algebra operations.
    Compose(ComposeArgs),
    /// Evaluate a saved net on a CSV dataset or a freshly sampled shape.
    Eval(EvalArgs),
    /// Print a saved net's structure and provenance.
    Inspect(InspectArgs),
    /// Verify the three composition equivalences on two shapes.
    Theorem(TheoremArgs),
    /// Build the torus in R4 from two trained disks and compare both
    /// difference variants.
    DemoTorus(DemoTorusArgs),
    /// Train several disjoint shapes and stack them into one multi-label
    /// net.
    DemoMultilabel(DemoMultilabelArgs),
}

#[derive(Debug, Args)]
pub struct CommonTrainArgs {
    /// Learning rate.
    #[arg(long, default_value_t = 0.5)]
    pub lr: f64,
    /// Training epochs.
    #[arg(long, default_value_t = 2000)]
    pub epochs: usize,
    /// Mini-batch size.
    #[arg(long, default_value_t = 32)]
    pub batch: usize,
    /// Loss function: bce or mse.
    #[arg(long, default_value = "bce")]
    pub loss: String,
    /// Half-width of the uniform parameter initialization.
    #[arg(long, default_value_t = 0.5)]
    pub init_scale: f64,
    /// Master seed; every internal stream derives from it.
    #[arg(long, env = "MLPALG_SEED", default_value_t = 0)]
    pub seed: u64,
}

impl CommonTrainArgs {
    fn to_config(&self) -> Result<TrainConfig, CliError> {
        let loss: Loss = self.loss.parse().map_err(CliError::Usage)?;
        let cfg = TrainConfig {
            learning_rate: self.lr,
            epochs: self.epochs,
            batch_size: self.batch,
            loss,
            init_scale: self.init_scale,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, help = SHAPE_HELP)]
    pub shape: String,
    /// Layer sizes, e.g. 2,3,1.
    #[arg(long)]
    pub dims: String,
    /// Separation between the shape and sampled negatives.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Positive training points.
    #[arg(long, default_value_t = 500)]
    pub n_pos: usize,
    /// Negative training points.
    #[arg(long, default_value_t = 500)]
    pub n_neg: usize,
    #[command(flatten)]
    pub train: CommonTrainArgs,
    /// Output net file.
    #[arg(long)]
    pub out: PathBuf,
    /// Report CSV path (default: <out> with extension report.csv).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    /// Operation: complement | sum | multi-sum | difference |
    /// set-difference | conjunction | i-product | multi-i-product |
    /// component | o-product | multi-o-product | extend | align.
    pub op: String,
    /// Operand net files.
    #[arg(required = true)]
    pub operands: Vec<PathBuf>,
    /// Sharpness of the combining layer.
    #[arg(long, default_value_t = 20.0)]
    pub lambda: f64,
    /// Output coordinate for `component` (1-based).
    #[arg(long)]
    pub index: Option<usize>,
    /// Output net file; `align` takes two comma-separated paths.
    #[arg(long)]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Net file to evaluate.
    #[arg(long)]
    pub net: PathBuf,
    /// Dataset CSV (alternative to --shape).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Sample a fresh characteristic dataset of this shape instead.
    #[arg(long, help = SHAPE_HELP)]
    pub shape: Option<String>,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 1000)]
    pub n_pos: usize,
    #[arg(long, default_value_t = 1000)]
    pub n_neg: usize,
    #[arg(long, env = "MLPALG_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Decision rule: scalar (threshold 0.5) or argmax.
    #[arg(long, default_value = "scalar")]
    pub rule: String,
    /// Report CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    /// Net file to describe.
    pub net: PathBuf,
}

#[derive(Debug, Args)]
pub struct TheoremArgs {
    /// First shape.
    #[arg(long, help = SHAPE_HELP)]
    pub shape_a: String,
    /// Second shape (same space).
    #[arg(long, help = SHAPE_HELP)]
    pub shape_b: String,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 20.0)]
    pub lambda: f64,
    #[command(flatten)]
    pub train: CommonTrainArgs,
    /// Report CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DemoTorusArgs {
    /// Radius of the big disk.
    #[arg(long, default_value_t = 1.0)]
    pub r_big: f64,
    /// Radius of the small disk.
    #[arg(long, default_value_t = 0.5)]
    pub r_small: f64,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[arg(long, default_value_t = 20.0)]
    pub lambda: f64,
    #[command(flatten)]
    pub train: CommonTrainArgs,
    /// Output directory for nets and the accuracy CSV.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DemoMultilabelArgs {
    /// A shape per class; pass at least twice.
    #[arg(long = "shape", help = SHAPE_HELP)]
    pub shapes: Vec<String>,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[command(flatten)]
    pub train: CommonTrainArgs,
    /// Output directory for nets and the report CSV.
    #[arg(long)]
    pub out: PathBuf,
}

/// Executes a parsed command, returning the text to print on success.
pub fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Train(args) => cmd_train(&args),
        Command::Compose(args) => cmd_compose(&args),
        Command::Eval(args) => cmd_eval(&args),
        Command::Inspect(args) => cmd_inspect(&args),
        Command::Theorem(args) => cmd_theorem(&args),
        Command::DemoTorus(args) => cmd_demo_torus(&args),
        Command::DemoMultilabel(args) => cmd_demo_multilabel(&args),
    }
}

fn parse_dims(s: &str) -> Result<Vec<usize>, CliError> {
    let dims: Result<Vec<usize>, _> = s.split(',').map(|p| p.trim().parse::<usize>()).collect();
    match dims {
        Ok(d) if d.len() >= 2 && d.iter().all(|n| *n > 0) => Ok(d),
        _ => Err(CliError::Usage(format!(
            "--dims must be at least two positive comma-separated sizes, got `{s}`"
        ))),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn dims_string(net: &Mlp) -> String {
    let dims: Vec<String> = net.layer_dims().iter().map(usize::to_string).collect();
    format!("({})", dims.join(","))
}

fn cmd_train(args: &TrainArgs) -> Result<String, CliError> {
    let shape = Shape::parse(&args.shape)?;
    let dims = parse_dims(&args.dims)?;
    let eps = Epsilon::new(args.eps)?;
    let base = args.train.to_config()?;
    let seed = base.seed;

    let data = make_characteristic_dataset(&shape, eps, args.n_pos, args.n_neg, derive_seed(seed, 1))?;
    let net = init_mlp(&dims, base.init_scale, derive_seed(seed, 2))?;
    let cfg = TrainConfig {
        seed: derive_seed(seed, 3),
        ..base
    };
    let (trained, report) = train_sgd(&net, &data, &cfg)?;

    let metadata = json!({
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
                "seed": seed,
            },
            "eps": eps.get(),
            "n_pos": args.n_pos,
            "n_neg": args.n_neg,
            "final_accuracy": report.accuracy,
        }
    });
    netfile::save(&args.out, &trained, metadata)?;
    let report_path = args
        .report
        .clone()
        .unwrap_or_else(|| args.out.with_extension("report.csv"));
    write_text(&report_path, &report.to_csv())?;
    let loss_path = report_path.with_extension("loss.csv");
    write_text(&loss_path, &report.loss_history_csv())?;

    let mut out = String::new();
    let _ = writeln!(out, "trained {} on {shape}", dims_string(&trained));
    let _ = writeln!(out, "final training accuracy: {:.4}", report.accuracy);
    let _ = writeln!(out, "net: {}", args.out.display());
    let _ = writeln!(out, "report: {}", report_path.display());
    let _ = writeln!(out, "loss history: {}", loss_path.display());
    Ok(out)
}

/// Arity check for compose: `expected` of `None` means "at least min".
fn expect_operands(
    op: &str,
    operands: &[(Mlp, Value)],
    min: usize,
    exact: Option<usize>,
) -> Result<(), CliError> {
    let n = operands.len();
    let bad = match exact {
        Some(e) => n != e,
        None => n < min,
    };
    if bad {
        let what = match exact {
            Some(e) => format!("exactly {e}"),
            None => format!("at least {min}"),
        };
        return Err(CliError::Usage(format!(
            "`{op}` takes {what} operand file(s), got {n}"
        )));
    }
    Ok(())
}

fn cmd_compose(args: &ComposeArgs) -> Result<String, CliError> {
    let mut operands: Vec<(Mlp, Value)> = Vec::with_capacity(args.operands.len());
    for path in &args.operands {
        operands.push(netfile::load(path)?);
    }
    let lambda = Sharpness::new(args.lambda)?;
    let op = args.op.as_str();

    let provenance = |lambda: Option<f64>| -> Value {
        let children: Vec<Value> = operands
            .iter()
            .map(|(_, meta)| {
                meta.get("provenance")
                    .cloned()
                    .unwrap_or_else(|| json!({"op": "unknown"}))
            })
            .collect();
        let mut node = json!({"op": op, "operands": children});
        if let Some(l) = lambda {
            node["lambda"] = json!(l);
        }
        if let Some(i) = args.index {
            node["index"] = json!(i);
        }
        json!({ "provenance": node })
    };

    let nets: Vec<Mlp> = operands.iter().map(|(n, _)| n.clone()).collect();
    let with_lambda = matches!(
        op,
        "sum" | "multi-sum"
            | "difference"
            | "set-difference"
            | "conjunction"
            | "i-product"
            | "multi-i-product"
    );

    let result = match op {
        "complement" => {
            expect_operands(op, &operands, 1, Some(1))?;
            complement(&nets[0])?
        }
        "sum" => {
            expect_operands(op, &operands, 2, Some(2))?;
            sum(&nets[0], &nets[1], lambda)?
        }
        "multi-sum" => {
            expect_operands(op, &operands, 1, None)?;
            multi_sum(&nets, lambda)?
        }
        "difference" => {
            expect_operands(op, &operands, 2, Some(2))?;
            difference(&nets[0], &nets[1], lambda)?
        }
        "set-difference" => {
            expect_operands(op, &operands, 2, Some(2))?;
            set_difference(&nets[0], &nets[1], lambda)?
        }
        "conjunction" => {
            expect_operands(op, &operands, 2, Some(2))?;
            conjunction(&nets[0], &nets[1], lambda)?
        }
        "i-product" => {
            expect_operands(op, &operands, 2, Some(2))?;
            i_product(&nets[0], &nets[1], lambda)?
        }
        "multi-i-product" => {
            expect_operands(op, &operands, 1, None)?;
            multi_i_product(&nets, lambda)?
        }
        "component" => {
            expect_operands(op, &operands, 1, Some(1))?;
            let index = args.index.ok_or_else(|| {
                CliError::Usage("`component` requires --index <1-based coordinate>".to_string())
            })?;
            component(&nets[0], index)?
        }
        "o-product" => {
            expect_operands(op, &operands, 2, Some(2))?;
            o_product(&nets[0], &nets[1])?
        }
        "multi-o-product" => {
            expect_operands(op, &operands, 2, None)?;
            multi_o_product(&nets)?
        }
        "extend" => {
            expect_operands(op, &operands, 1, Some(1))?;
            identical_extension(&nets[0])?
        }
        "align" => {
            expect_operands(op, &operands, 2, Some(2))?;
            return compose_align(args, &operands);
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown operation `{other}`; see `mlpalg compose --help`"
            )))
        }
    };

    let metadata = provenance(with_lambda.then_some(args.lambda));
    let out = PathBuf::from(&args.out);
    netfile::save(&out, &result, metadata)?;

    let operand_dims: Vec<String> = nets.iter().map(dims_string).collect();
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{op}: {} -> {}",
        operand_dims.join(" , "),
        dims_string(&result)
    );
    let _ = writeln!(text, "net: {}", out.display());
    Ok(text)
}

fn compose_align(args: &ComposeArgs, operands: &[(Mlp, Value)]) -> Result<String, CliError> {
    let paths: Vec<&str> = args.out.split(',').collect();
    if paths.len() != 2 {
        return Err(CliError::Usage(
            "`align` writes two nets; pass --out first.json,second.json".to_string(),
        ));
    }
    let (a, b) = align_depths(&operands[0].0, &operands[1].0)?;
    let mut text = String::new();
    for ((net, (_, meta)), path) in [(&a, &operands[0]), (&b, &operands[1])]
        .into_iter()
        .zip(&paths)
    {
        let child = meta
            .get("provenance")
            .cloned()
            .unwrap_or_else(|| json!({"op": "unknown"}));
        let metadata = json!({"provenance": {"op": "align", "operands": [child]}});
        let out = PathBuf::from(path.trim());
        netfile::save(&out, net, metadata)?;
        let _ = writeln!(text, "align: {} -> {}", dims_string(net), out.display());
    }
    Ok(text)
}

fn cmd_eval(args: &EvalArgs) -> Result<String, CliError> {
    let (net, _) = netfile::load(&args.net)?;
    let data = match (&args.data, &args.shape) {
        (Some(path), None) => LabeledDataset::load(path)?,
        (None, Some(spec)) => {
            let shape = Shape::parse(spec)?;
            let eps = Epsilon::new(args.eps)?;
            make_characteristic_dataset(&shape, eps, args.n_pos, args.n_neg, derive_seed(args.seed, 1))?
        }
        _ => {
            return Err(CliError::Usage(
                "pass exactly one of --data <csv> or --shape <spec>".to_string(),
            ))
        }
    };
    let report: EvalReport = match args.rule.as_str() {
        "scalar" => accuracy_scalar(&net, &data)?,
        "argmax" => accuracy_argmax(&net, &data)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown rule `{other}` (expected scalar or argmax)"
            )))
        }
    };
    if let Some(path) = &args.out {
        write_text(path, &report.to_csv())?;
    }
    let mut text = String::new();
    let _ = writeln!(
        text,
        "accuracy: {:.4} ({}/{} correct, {} rule)",
        report.accuracy, report.correct, report.total, args.rule
    );
    if let Some(path) = &args.out {
        let _ = writeln!(text, "report: {}", path.display());
    }
    Ok(text)
}

fn cmd_inspect(args: &InspectArgs) -> Result<String, CliError> {
    let text = std::fs::read_to_string(&args.net)
        .map_err(|e| CliError::Validation(format!("{}: {e}", args.net.display())))?;
    let file = netfile::parse(&text)?;
    let net = netfile::from_network_file(&file)?;
    let mut out = String::new();
    let _ = writeln!(out, "layers: {}", dims_string(&net));
    let _ = writeln!(out, "activations: {}", file.activations.join(" | "));
    let _ = writeln!(out, "parameters: {}", net.parameter_count());
    let _ = writeln!(out, "provenance: {}", provenance_summary(&file.metadata));
    Ok(out)
}

fn cmd_theorem(args: &TheoremArgs) -> Result<String, CliError> {
    let shape_a = Shape::parse(&args.shape_a)?;
    let shape_b = Shape::parse(&args.shape_b)?;
    let eps = Epsilon::new(args.eps)?;
    let lambda = Sharpness::new(args.lambda)?;
    let cfg = args.train.to_config()?;
    let report = verify_theorem1(&shape_a, &shape_b, eps, &cfg, lambda)?;
    if let Some(path) = &args.out {
        write_text(path, &report.to_csv())?;
    }
    Ok(report.to_string())
}

fn cmd_demo_torus(args: &DemoTorusArgs) -> Result<String, CliError> {
    let cfg = TorusConfig {
        r_big: args.r_big,
        r_small: args.r_small,
        eps: args.eps,
        lambda: args.lambda,
        seed: args.train.seed,
        train: args.train.to_config()?,
    };
    let (report, table) = run_torus(&cfg, &args.out)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "disk training accuracies: big {:.4}, small {:.4}",
        report.disk_big_train_accuracy, report.disk_small_train_accuracy
    );
    out.push_str(&table);
    let _ = writeln!(out, "artifacts: {}", args.out.display());
    Ok(out)
}

fn cmd_demo_multilabel(args: &DemoMultilabelArgs) -> Result<String, CliError> {
    let mut shapes = Vec::with_capacity(args.shapes.len());
    for spec in &args.shapes {
        shapes.push(Shape::parse(spec)?);
    }
    let cfg = MultilabelConfig {
        shapes,
        eps: args.eps,
        seed: args.train.seed,
        train: args.train.to_config()?,
    };
    let (_, table) = run_multilabel(&cfg, &args.out)?;
    let mut out = String::new();
    out.push_str(&table);
    let _ = writeln!(out, "artifacts: {}", args.out.display());
    Ok(out)
}
