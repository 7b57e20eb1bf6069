//! Labeled datasets: a data matrix paired with scalar `{0,1}` or one-hot
//! label rows, plus CSV persistence and the Cartesian-product construction.

use mlpalg_core::Matrix;
use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use thiserror::Error;

/// Pair selection in [`product_dataset`] switches from the full cross
/// product to a random subset above this many pairs.
pub const PRODUCT_PAIR_LIMIT: usize = 1_000_000;

/// Seed for the subset case of [`product_dataset`]; fixed so the function
/// stays deterministic without threading a seed through its signature.
const PRODUCT_SUBSET_SEED: u64 = 0x4d4c_5047;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DataError {
    #[error("data has {data} rows but labels have {labels}")]
    RowCountMismatch { data: usize, labels: usize },
    #[error("labels must have at least one column")]
    ZeroLabelWidth,
    #[error("row {row}: scalar labels must be 0 or 1")]
    BadScalarLabel { row: usize },
    #[error("row {row}: one-hot labels must contain exactly one 1 and otherwise 0")]
    BadOneHotLabel { row: usize },
    #[error("csv line {line}: {reason}")]
    Csv { line: usize, reason: String },
    #[error("product operands must both carry scalar labels")]
    MultiLabelOperand,
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

/// A data matrix with one label row per data row. Scalar labels live in
/// `{0,1}`; wider label rows are one-hot.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    data: Matrix,
    labels: Matrix,
}

impl LabeledDataset {
    pub fn new(data: Matrix, labels: Matrix) -> Result<Self, DataError> {
        if data.rows() != labels.rows() {
            return Err(DataError::RowCountMismatch {
                data: data.rows(),
                labels: labels.rows(),
            });
        }
        if labels.cols() == 0 {
            return Err(DataError::ZeroLabelWidth);
        }
        for (i, row) in labels.iter_rows().enumerate() {
            if labels.cols() == 1 {
                if row[0] != 0.0 && row[0] != 1.0 {
                    return Err(DataError::BadScalarLabel { row: i });
                }
            } else {
                let ones = row.iter().filter(|v| **v == 1.0).count();
                let zeros = row.iter().filter(|v| **v == 0.0).count();
                if ones != 1 || ones + zeros != row.len() {
                    return Err(DataError::BadOneHotLabel { row: i });
                }
            }
        }
        Ok(LabeledDataset { data, labels })
    }

    /// Builds a dataset from row vectors; convenience for samplers and tests.
    pub fn from_rows(points: &[Vec<f64>], labels: &[Vec<f64>]) -> Result<Self, DataError> {
        let dim = points.first().map_or(0, Vec::len);
        let width = labels.first().map_or(1, Vec::len);
        let data = Matrix::from_rows(points).unwrap_or_else(|| Matrix::zeros(0, dim));
        let labels = Matrix::from_rows(labels).unwrap_or_else(|| Matrix::zeros(0, width));
        Self::new(data, labels)
    }

    pub fn n_rows(&self) -> usize {
        self.data.rows()
    }

    pub fn input_dim(&self) -> usize {
        self.data.cols()
    }

    pub fn label_width(&self) -> usize {
        self.labels.cols()
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn labels(&self) -> &Matrix {
        &self.labels
    }

    pub fn point(&self, i: usize) -> &[f64] {
        self.data.row(i)
    }

    pub fn label(&self, i: usize) -> &[f64] {
        self.labels.row(i)
    }

    /// Fraction of rows labeled positive (scalar datasets).
    pub fn positive_fraction(&self) -> f64 {
        if self.n_rows() == 0 {
            return 0.0;
        }
        let pos = (0..self.n_rows()).filter(|&i| self.label(i)[0] == 1.0).count();
        pos as f64 / self.n_rows() as f64
    }

    /// Returns the same rows in a deterministically shuffled order.
    pub fn shuffled(&self, seed: u64) -> Self {
        let mut order: Vec<usize> = (0..self.n_rows()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let data = Matrix::from_fn(self.data.rows(), self.data.cols(), |r, c| {
            self.data.get(order[r], c)
        });
        let labels = Matrix::from_fn(self.labels.rows(), self.labels.cols(), |r, c| {
            self.labels.get(order[r], c)
        });
        LabeledDataset { data, labels }
    }

    /// Swaps 0 and 1 labels; the dataset must be scalar-labeled.
    pub fn with_flipped_labels(&self) -> Result<Self, DataError> {
        if self.label_width() != 1 {
            return Err(DataError::MultiLabelOperand);
        }
        let labels = Matrix::from_fn(self.labels.rows(), 1, |r, _| {
            1.0 - self.labels.get(r, 0)
        });
        Ok(LabeledDataset {
            data: self.data.clone(),
            labels,
        })
    }

    /// Renders the CSV form: header `x1,…,xn,label` (or `label1,…,labelk`),
    /// coordinates with 17 significant digits so parsing recovers the exact
    /// bits, labels as 0/1.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut header: Vec<String> = (1..=self.input_dim()).map(|i| format!("x{i}")).collect();
        if self.label_width() == 1 {
            header.push("label".to_string());
        } else {
            header.extend((1..=self.label_width()).map(|i| format!("label{i}")));
        }
        out.push_str(&header.join(","));
        out.push('\n');
        for i in 0..self.n_rows() {
            let mut fields: Vec<String> =
                self.point(i).iter().map(|v| format!("{v:.16e}")).collect();
            fields.extend(self.label(i).iter().map(|v| format!("{}", *v as i64)));
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses the CSV form produced by [`to_csv`].
    pub fn from_csv(text: &str) -> Result<Self, DataError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(DataError::Csv {
            line: 1,
            reason: "missing header".to_string(),
        })?;
        let columns: Vec<&str> = header.split(',').collect();
        let n_coords = columns
            .iter()
            .position(|c| c.trim().starts_with("label"))
            .ok_or(DataError::Csv {
                line: 1,
                reason: "no label column in header".to_string(),
            })?;
        let width = columns.len() - n_coords;
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != columns.len() {
                return Err(DataError::Csv {
                    line: idx + 1,
                    reason: format!(
                        "expected {} fields, found {}",
                        columns.len(),
                        fields.len()
                    ),
                });
            }
            let parse = |s: &str, line: usize| -> Result<f64, DataError> {
                s.trim().parse().map_err(|_| DataError::Csv {
                    line,
                    reason: format!("`{s}` is not a number"),
                })
            };
            let mut row = Vec::with_capacity(n_coords);
            for f in &fields[..n_coords] {
                row.push(parse(f, idx + 1)?);
            }
            let mut label = Vec::with_capacity(width);
            for f in &fields[n_coords..] {
                label.push(parse(f, idx + 1)?);
            }
            points.push(row);
            labels.push(label);
        }
        if points.is_empty() {
            let data = Matrix::zeros(0, n_coords);
            let labels = Matrix::zeros(0, width);
            return Self::new(data, labels);
        }
        Self::from_rows(&points, &labels)
    }

    pub fn save(&self, path: &Path) -> Result<(), DataError> {
        std::fs::write(path, self.to_csv()).map_err(|e| DataError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, DataError> {
        let text = std::fs::read_to_string(path).map_err(|e| DataError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_csv(&text)
    }
}

/// Cartesian product of two scalar-labeled datasets: rows are concatenated
/// point pairs, the label is the AND of the operand labels. The full cross
/// product is used up to [`PRODUCT_PAIR_LIMIT`] pairs; above that, a
/// deterministic random subset of that many pairs is drawn.
pub fn product_dataset(
    d1: &LabeledDataset,
    d2: &LabeledDataset,
) -> Result<LabeledDataset, DataError> {
    if d1.label_width() != 1 || d2.label_width() != 1 {
        return Err(DataError::MultiLabelOperand);
    }
    let total = d1.n_rows().saturating_mul(d2.n_rows());
    let pairs: Vec<(usize, usize)> = if total <= PRODUCT_PAIR_LIMIT {
        (0..d1.n_rows())
            .flat_map(|i| (0..d2.n_rows()).map(move |j| (i, j)))
            .collect()
    } else {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(PRODUCT_SUBSET_SEED);
        (0..PRODUCT_PAIR_LIMIT)
            .map(|_| (rng.gen_range(0..d1.n_rows()), rng.gen_range(0..d2.n_rows())))
            .collect()
    };
    let dim = d1.input_dim() + d2.input_dim();
    let mut data = Matrix::zeros(pairs.len(), dim);
    let mut labels = Matrix::zeros(pairs.len(), 1);
    for (r, (i, j)) in pairs.iter().enumerate() {
        let row = data.row_mut(r);
        row[..d1.input_dim()].copy_from_slice(d1.point(*i));
        row[d1.input_dim()..].copy_from_slice(d2.point(*j));
        labels.set(r, 0, d1.label(*i)[0] * d2.label(*j)[0]);
    }
    LabeledDataset::new(data, labels)
}

/// Concatenates datasets with identical dimensions and label widths.
pub fn concat_datasets(parts: &[&LabeledDataset]) -> Result<LabeledDataset, DataError> {
    let dim = parts.first().map_or(0, |d| d.input_dim());
    let width = parts.first().map_or(1, |d| d.label_width());
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for part in parts {
        for i in 0..part.n_rows() {
            points.push(part.point(i).to_vec());
            labels.push(part.label(i).to_vec());
        }
    }
    if points.is_empty() {
        return LabeledDataset::new(Matrix::zeros(0, dim), Matrix::zeros(0, width));
    }
    LabeledDataset::from_rows(&points, &labels)
}
