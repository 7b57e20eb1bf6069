//! The on-disk network format: versioned JSON with floats rendered at 17
//! significant digits so `parse(render(net))` reproduces the exact bits.
//!
//! Activation tags are one string per affine map: a bare name (`"sigmoid"`)
//! when the map is uniform, otherwise run-length segments over the map's
//! neurons such as `"sigmoid*3+relu"` (a count of 1 may be omitted).
//! Mixed maps arise from composing depth-aligned nets, whose identity
//! extension layers are ReLU while trained layers are sigmoid.
//!
//! The free-form `metadata` object carries provenance. The toolkit writes
//! `{"provenance": {...}}` trees: leaves `{"op": "trained", "shape": ...,
//! "config": {...}}`, interior nodes `{"op": "sum", "lambda": 20.0,
//! "operands": [...]}`.

use mlpalg_core::{Activation, Matrix, Mlp};
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;
use std::io;
use std::path::Path;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: io::Error,
    },
    #[error("not a valid network file: {0}")]
    Parse(String),
    #[error("unsupported format_version {0} (this build reads version 1)")]
    UnsupportedVersion(u32),
    #[error("bad activation string `{0}`")]
    BadActivation(String),
    #[error("file describes an invalid network: {0}")]
    InvalidNet(String),
}

/// Serialized form of a network plus provenance metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub format_version: u32,
    pub layer_dims: Vec<usize>,
    pub activations: Vec<String>,
    /// One row-major matrix per affine map.
    pub weights: Vec<Vec<Vec<f64>>>,
    pub thresholds: Vec<Vec<f64>>,
    #[serde(default)]
    pub metadata: Value,
}

/// Encodes one map's per-neuron tags: bare name when uniform, otherwise
/// `name*count` run-length segments joined with `+` (count 1 omitted).
pub fn encode_activations(tags: &[Activation]) -> String {
    if tags.iter().all(|t| *t == tags[0]) {
        return tags[0].name().to_string();
    }
    let mut segments: Vec<(Activation, usize)> = Vec::new();
    for tag in tags {
        match segments.last_mut() {
            Some((t, n)) if t == tag => *n += 1,
            _ => segments.push((*tag, 1)),
        }
    }
    segments
        .iter()
        .map(|(t, n)| {
            if *n == 1 {
                t.name().to_string()
            } else {
                format!("{}*{n}", t.name())
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

/// Inverse of [`encode_activations`] for a map with `width` neurons.
pub fn decode_activations(s: &str, width: usize) -> Result<Vec<Activation>, FileError> {
    let bad = || FileError::BadActivation(s.to_string());
    let mut tags = Vec::with_capacity(width);
    for segment in s.split('+') {
        let (name, count) = match segment.split_once('*') {
            Some((name, count)) => (name, count.parse::<usize>().map_err(|_| bad())?),
            None => (segment, 1),
        };
        let tag = Activation::from_name(name.trim()).ok_or_else(bad)?;
        if count == 0 {
            return Err(bad());
        }
        tags.extend(std::iter::repeat_n(tag, count));
    }
    // A bare name covers the whole map.
    if tags.len() == 1 && width > 1 && !s.contains('+') && !s.contains('*') {
        tags = vec![tags[0]; width];
    }
    if tags.len() != width {
        return Err(bad());
    }
    Ok(tags)
}

/// Builds the serializable form of a net with the given metadata.
pub fn to_network_file(net: &Mlp, metadata: Value) -> NetworkFile {
    NetworkFile {
        format_version: FORMAT_VERSION,
        layer_dims: net.layer_dims().to_vec(),
        activations: net.activations().iter().map(|t| encode_activations(t)).collect(),
        weights: net
            .weights()
            .iter()
            .map(|w| w.iter_rows().map(<[f64]>::to_vec).collect())
            .collect(),
        thresholds: net.thresholds().to_vec(),
        metadata,
    }
}

/// Reconstructs the net, re-validating everything the file claims.
pub fn from_network_file(file: &NetworkFile) -> Result<Mlp, FileError> {
    if file.format_version != FORMAT_VERSION {
        return Err(FileError::UnsupportedVersion(file.format_version));
    }
    if file.layer_dims.len() < 2
        || file.weights.len() != file.layer_dims.len() - 1
        || file.activations.len() != file.weights.len()
        || file.thresholds.len() != file.weights.len()
    {
        return Err(FileError::InvalidNet(format!(
            "{} layer dims with {} weight matrices, {} threshold vectors, {} activation tags",
            file.layer_dims.len(),
            file.weights.len(),
            file.thresholds.len(),
            file.activations.len(),
        )));
    }
    let mut weights = Vec::with_capacity(file.weights.len());
    for (i, rows) in file.weights.iter().enumerate() {
        let m = Matrix::from_rows(rows).ok_or_else(|| {
            FileError::InvalidNet(format!("weight matrix {i} is ragged or empty"))
        })?;
        weights.push(m);
    }
    let mut activations = Vec::with_capacity(file.activations.len());
    for (s, dim) in file.activations.iter().zip(&file.layer_dims[1..]) {
        activations.push(decode_activations(s, *dim)?);
    }
    Mlp::new(weights, file.thresholds.clone(), activations)
        .map_err(|e| FileError::InvalidNet(e.to_string()))
}

/// Pretty JSON with every float at 17 significant digits.
pub fn render(file: &NetworkFile) -> String {
    let mut bytes = Vec::new();
    let mut serializer =
        serde_json::Serializer::with_formatter(&mut bytes, FullPrecisionPretty::new());
    file.serialize(&mut serializer)
        .expect("serializing a NetworkFile to memory cannot fail");
    bytes.push(b'\n');
    String::from_utf8(bytes).expect("serde_json emits UTF-8")
}

pub fn parse(text: &str) -> Result<NetworkFile, FileError> {
    serde_json::from_str(text).map_err(|e| FileError::Parse(e.to_string()))
}

pub fn save(path: &Path, net: &Mlp, metadata: Value) -> Result<(), FileError> {
    let text = render(&to_network_file(net, metadata));
    std::fs::write(path, text).map_err(|e| FileError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn load(path: &Path) -> Result<(Mlp, Value), FileError> {
    let text = std::fs::read_to_string(path).map_err(|e| FileError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let file = parse(&text)?;
    let net = from_network_file(&file)?;
    Ok((net, file.metadata))
}

/// Pretty formatter that renders `f64` as `{:.16e}` (17 significant digits,
/// enough to reproduce any double exactly).
struct FullPrecisionPretty {
    inner: PrettyFormatter<'static>,
}

impl FullPrecisionPretty {
    fn new() -> Self {
        FullPrecisionPretty {
            inner: PrettyFormatter::new(),
        }
    }
}

impl Formatter for FullPrecisionPretty {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// One-line rendering of a provenance tree, e.g.
/// `i_product(set_difference(trained[ball:0,0:1], trained[ball:0,0:0.5]), …)`.
pub fn provenance_summary(metadata: &Value) -> String {
    fn node(v: &Value) -> String {
        let Some(op) = v.get("op").and_then(Value::as_str) else {
            return "unknown".to_string();
        };
        if op == "trained" {
            let shape = v.get("shape").and_then(Value::as_str).unwrap_or("?");
            return format!("trained[{shape}]");
        }
        let mut rendered = op.to_string();
        if let Some(operands) = v.get("operands").and_then(Value::as_array) {
            let children: Vec<String> = operands.iter().map(node).collect();
            rendered.push('(');
            rendered.push_str(&children.join(", "));
            rendered.push(')');
        }
        rendered
    }
    match metadata.get("provenance") {
        Some(p) => node(p),
        None => "none".to_string(),
    }
}
