//! Accuracy under the two decision rules: threshold at 0.5 for scalar nets,
//! argmax for multi-output nets over one-hot labels.

use crate::dataset::LabeledDataset;
use mlpalg_core::{Mlp, MlpError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("net outputs {net} values but the rule/labels expect {expected}")]
    WidthMismatch { net: usize, expected: usize },
    #[error("net takes {net}-dimensional input but the data is {data}-dimensional")]
    InputMismatch { net: usize, data: usize },
    #[error("the argmax rule needs at least two classes")]
    TooFewClasses,
    #[error("cannot evaluate on an empty dataset")]
    EmptyDataset,
    #[error(transparent)]
    Forward(#[from] MlpError),
}

/// Outcome of an evaluation (and, after training, the loss trajectory).
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub correct: usize,
    pub total: usize,
    pub accuracy: f64,
    /// Correct counts among rows of true class `i`; scalar rule uses classes
    /// `[0, 1]`, the argmax rule one entry per label column.
    pub per_class_correct: Vec<usize>,
    /// Row counts per true class, parallel to `per_class_correct`.
    pub per_class_total: Vec<usize>,
    /// `(epoch, mean loss)` per epoch; empty for plain evaluations.
    pub loss_history: Vec<(usize, f64)>,
}

impl EvalReport {
    fn from_counts(per_class_correct: Vec<usize>, per_class_total: Vec<usize>) -> Self {
        let correct = per_class_correct.iter().sum();
        let total = per_class_total.iter().sum();
        EvalReport {
            correct,
            total,
            accuracy: correct as f64 / total as f64,
            per_class_correct,
            per_class_total,
            loss_history: Vec::new(),
        }
    }

    /// `metric,value` CSV rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,value\n");
        out.push_str(&format!("correct,{}\n", self.correct));
        out.push_str(&format!("total,{}\n", self.total));
        out.push_str(&format!("accuracy,{:.16e}\n", self.accuracy));
        for (i, (c, t)) in self
            .per_class_correct
            .iter()
            .zip(&self.per_class_total)
            .enumerate()
        {
            out.push_str(&format!("class{i}_correct,{c}\n"));
            out.push_str(&format!("class{i}_total,{t}\n"));
        }
        out
    }

    /// `epoch,loss` CSV rows.
    pub fn loss_history_csv(&self) -> String {
        let mut out = String::from("epoch,loss\n");
        for (epoch, loss) in &self.loss_history {
            out.push_str(&format!("{epoch},{loss:.16e}\n"));
        }
        out
    }
}

/// Scalar decision rule: a point is classified positive iff the output is
/// at least 0.5 (ties at exactly 0.5 count as positive).
pub fn accuracy_scalar(net: &Mlp, data: &LabeledDataset) -> Result<EvalReport, EvalError> {
    if net.output_dim() != 1 || data.label_width() != 1 {
        return Err(EvalError::WidthMismatch {
            net: net.output_dim(),
            expected: data.label_width(),
        });
    }
    check_input(net, data)?;
    let outputs = net.forward_batch(data.data())?;
    let mut correct = [0usize; 2];
    let mut total = [0usize; 2];
    for i in 0..data.n_rows() {
        let truth = data.label(i)[0] == 1.0;
        let predicted = outputs.get(i, 0) >= 0.5;
        total[usize::from(truth)] += 1;
        if predicted == truth {
            correct[usize::from(truth)] += 1;
        }
    }
    Ok(EvalReport::from_counts(correct.to_vec(), total.to_vec()))
}

/// Argmax decision rule over one-hot labels; ties go to the lowest index.
pub fn accuracy_argmax(net: &Mlp, data: &LabeledDataset) -> Result<EvalReport, EvalError> {
    let k = data.label_width();
    if k < 2 {
        return Err(EvalError::TooFewClasses);
    }
    if net.output_dim() != k {
        return Err(EvalError::WidthMismatch {
            net: net.output_dim(),
            expected: k,
        });
    }
    check_input(net, data)?;
    let outputs = net.forward_batch(data.data())?;
    let mut correct = vec![0usize; k];
    let mut total = vec![0usize; k];
    for i in 0..data.n_rows() {
        let truth = data
            .label(i)
            .iter()
            .position(|v| *v == 1.0)
            .expect("validated one-hot row");
        let predicted = argmax_lowest(outputs.row(i));
        total[truth] += 1;
        if predicted == truth {
            correct[truth] += 1;
        }
    }
    Ok(EvalReport::from_counts(correct, total))
}

fn check_input(net: &Mlp, data: &LabeledDataset) -> Result<(), EvalError> {
    if net.input_dim() != data.input_dim() {
        return Err(EvalError::InputMismatch {
            net: net.input_dim(),
            data: data.input_dim(),
        });
    }
    if data.n_rows() == 0 {
        return Err(EvalError::EmptyDataset);
    }
    Ok(())
}

/// Index of the maximum value; the first occurrence wins ties.
fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}
