//! Geometric regions with exact membership tests, analytic distance, and a
//! compact spec-string grammar for the command line.
//!
//! All regions are open: boundary points do not belong to the shape. The
//! distance functions measure Euclidean distance to the closure of the
//! region (zero inside); `Product` uses the maximum of its factors'
//! distances, i.e. the sup metric on the product space, so a point is within
//! ε of a product iff each projection is within ε of its factor.
//!
//! Spec grammar (also shown in `--help`):
//!
//! ```text
//! ball:cx,cy,...:radius            e.g. ball:0,0:1
//! annulus:cx,cy,...:r_in:r_out     e.g. annulus:0,0:0.5:1
//! box:min1,min2,...:max1,max2,...  e.g. box:-1,-1:1,1
//! prod(<spec>,<spec>)              e.g. prod(ball:0,0:1,ball:0:0.5)
//! ```

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("point has dimension {point}, shape has dimension {shape}")]
    DimMismatch { shape: usize, point: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid shape spec `{spec}`: {reason}")]
pub struct ParseShapeError {
    pub spec: String,
    pub reason: String,
}

/// An open region of some Euclidean space.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Open ball: all points with `|p - center| < radius`.
    Ball { center: Vec<f64>, radius: f64 },
    /// Open annulus: all points with `r_inner < |p - center| < r_outer`.
    Annulus {
        center: Vec<f64>,
        r_inner: f64,
        r_outer: f64,
    },
    /// Open axis-aligned box: `min < p < max` coordinate-wise.
    Box { min: Vec<f64>, max: Vec<f64> },
    /// Cartesian product of two regions; the point is the concatenation of
    /// one point from each factor space.
    Product {
        left: std::boxed::Box<Shape>,
        right: std::boxed::Box<Shape>,
    },
}

impl Shape {
    /// Dimension of the ambient space.
    pub fn dim(&self) -> usize {
        match self {
            Shape::Ball { center, .. } => center.len(),
            Shape::Annulus { center, .. } => center.len(),
            Shape::Box { min, .. } => min.len(),
            Shape::Product { left, right } => left.dim() + right.dim(),
        }
    }

    /// Checks the structural invariants: positive radii, ordered annulus
    /// radii, `min < max` coordinate-wise, finite coordinates, nonzero
    /// dimension.
    pub fn validate(&self) -> Result<(), ParseShapeError> {
        let fail = |reason: String| {
            Err(ParseShapeError {
                spec: self.to_string(),
                reason,
            })
        };
        let all_finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            Shape::Ball { center, radius } => {
                if center.is_empty() {
                    return fail("center must have at least one coordinate".into());
                }
                if !all_finite(center) || !radius.is_finite() {
                    return fail("coordinates must be finite".into());
                }
                if *radius <= 0.0 {
                    return fail(format!("radius must be positive, got {radius}"));
                }
            }
            Shape::Annulus {
                center,
                r_inner,
                r_outer,
            } => {
                if center.is_empty() {
                    return fail("center must have at least one coordinate".into());
                }
                if !all_finite(center) || !r_inner.is_finite() || !r_outer.is_finite() {
                    return fail("coordinates must be finite".into());
                }
                if !(0.0 < *r_inner && r_inner < r_outer) {
                    return fail(format!(
                        "radii must satisfy 0 < r_inner < r_outer, got {r_inner} and {r_outer}"
                    ));
                }
            }
            Shape::Box { min, max } => {
                if min.is_empty() {
                    return fail("box must have at least one coordinate".into());
                }
                if min.len() != max.len() {
                    return fail(format!(
                        "min has {} coordinates but max has {}",
                        min.len(),
                        max.len()
                    ));
                }
                if !all_finite(min) || !all_finite(max) {
                    return fail("coordinates must be finite".into());
                }
                if min.iter().zip(max).any(|(lo, hi)| lo >= hi) {
                    return fail("min must be strictly below max in every coordinate".into());
                }
            }
            Shape::Product { left, right } => {
                left.validate()?;
                right.validate()?;
            }
        }
        Ok(())
    }

    /// Exact membership test (open region, boundary excluded).
    pub fn contains(&self, p: &[f64]) -> Result<bool, ShapeError> {
        self.check_dim(p)?;
        Ok(self.contains_raw(p))
    }

    /// Euclidean distance from `p` to the closure of the region; zero for
    /// points inside. `Product` takes the maximum of factor distances.
    pub fn distance(&self, p: &[f64]) -> Result<f64, ShapeError> {
        self.check_dim(p)?;
        Ok(self.distance_raw(p))
    }

    /// Smallest axis-aligned box containing the shape, as `(min, max)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Shape::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            Shape::Annulus {
                center, r_outer, ..
            } => (
                center.iter().map(|c| c - r_outer).collect(),
                center.iter().map(|c| c + r_outer).collect(),
            ),
            Shape::Box { min, max } => (min.clone(), max.clone()),
            Shape::Product { left, right } => {
                let (mut lo, mut hi) = left.bounding_box();
                let (rlo, rhi) = right.bounding_box();
                lo.extend(rlo);
                hi.extend(rhi);
                (lo, hi)
            }
        }
    }

    /// Parses the colon-delimited spec grammar described at module level.
    pub fn parse(spec: &str) -> Result<Self, ParseShapeError> {
        let shape = Self::parse_inner(spec.trim(), spec)?;
        shape.validate().map_err(|e| ParseShapeError {
            spec: spec.to_string(),
            reason: e.reason,
        })?;
        Ok(shape)
    }

    fn check_dim(&self, p: &[f64]) -> Result<(), ShapeError> {
        if p.len() != self.dim() {
            return Err(ShapeError::DimMismatch {
                shape: self.dim(),
                point: p.len(),
            });
        }
        Ok(())
    }

    /// Membership without the dimension check; callers guarantee `|p| = dim`.
    pub(crate) fn contains_raw(&self, p: &[f64]) -> bool {
        match self {
            Shape::Ball { center, radius } => dist2(p, center) < radius * radius,
            Shape::Annulus {
                center,
                r_inner,
                r_outer,
            } => {
                let d2 = dist2(p, center);
                r_inner * r_inner < d2 && d2 < r_outer * r_outer
            }
            Shape::Box { min, max } => p
                .iter()
                .zip(min.iter().zip(max))
                .all(|(x, (lo, hi))| lo < x && x < hi),
            Shape::Product { left, right } => {
                let split = left.dim();
                left.contains_raw(&p[..split]) && right.contains_raw(&p[split..])
            }
        }
    }

    /// Distance without the dimension check; callers guarantee `|p| = dim`.
    pub(crate) fn distance_raw(&self, p: &[f64]) -> f64 {
        match self {
            Shape::Ball { center, radius } => (dist2(p, center).sqrt() - radius).max(0.0),
            Shape::Annulus {
                center,
                r_inner,
                r_outer,
            } => {
                let rho = dist2(p, center).sqrt();
                if rho < *r_inner {
                    r_inner - rho
                } else if rho > *r_outer {
                    rho - r_outer
                } else {
                    0.0
                }
            }
            Shape::Box { min, max } => p
                .iter()
                .zip(min.iter().zip(max))
                .map(|(x, (lo, hi))| {
                    let d = (lo - x).max(x - hi).max(0.0);
                    d * d
                })
                .sum::<f64>()
                .sqrt(),
            Shape::Product { left, right } => {
                let split = left.dim();
                left.distance_raw(&p[..split])
                    .max(right.distance_raw(&p[split..]))
            }
        }
    }

    fn parse_inner(s: &str, whole: &str) -> Result<Self, ParseShapeError> {
        let err = |reason: String| ParseShapeError {
            spec: whole.to_string(),
            reason,
        };
        if let Some(rest) = s.strip_prefix("prod(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| err("`prod(` without closing `)`".into()))?;
            // Split at a top-level comma such that both halves parse; inner
            // specs contain commas of their own, so try each candidate.
            let mut depth = 0usize;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth = depth.saturating_sub(1),
                    ',' if depth == 0 => {
                        let (l, r) = (&inner[..i], &inner[i + 1..]);
                        if let (Ok(left), Ok(right)) =
                            (Self::parse_inner(l, whole), Self::parse_inner(r, whole))
                        {
                            if left.validate().is_ok() && right.validate().is_ok() {
                                return Ok(Shape::Product {
                                    left: left.into(),
                                    right: right.into(),
                                });
                            }
                        }
                    }
                    _ => {}
                }
            }
            return Err(err(
                "`prod(a,b)` needs two valid factor specs separated by a comma".into(),
            ));
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.first().copied() {
            Some("ball") => {
                if parts.len() != 3 {
                    return Err(err("expected `ball:<center coords>:<radius>`".into()));
                }
                Ok(Shape::Ball {
                    center: parse_coords(parts[1], whole)?,
                    radius: parse_num(parts[2], whole)?,
                })
            }
            Some("annulus") => {
                if parts.len() != 4 {
                    return Err(err(
                        "expected `annulus:<center coords>:<r_inner>:<r_outer>`".into(),
                    ));
                }
                Ok(Shape::Annulus {
                    center: parse_coords(parts[1], whole)?,
                    r_inner: parse_num(parts[2], whole)?,
                    r_outer: parse_num(parts[3], whole)?,
                })
            }
            Some("box") => {
                if parts.len() != 3 {
                    return Err(err("expected `box:<min coords>:<max coords>`".into()));
                }
                Ok(Shape::Box {
                    min: parse_coords(parts[1], whole)?,
                    max: parse_coords(parts[2], whole)?,
                })
            }
            Some(kind) => Err(err(format!(
                "unknown shape kind `{kind}` (expected ball, annulus, box, or prod)"
            ))),
            None => Err(err("empty spec".into())),
        }
    }
}

fn dist2(p: &[f64], center: &[f64]) -> f64 {
    p.iter()
        .zip(center)
        .map(|(x, c)| (x - c) * (x - c))
        .sum()
}

fn parse_num(s: &str, whole: &str) -> Result<f64, ParseShapeError> {
    s.trim().parse().map_err(|_| ParseShapeError {
        spec: whole.to_string(),
        reason: format!("`{s}` is not a number"),
    })
}

fn parse_coords(s: &str, whole: &str) -> Result<Vec<f64>, ParseShapeError> {
    s.split(',').map(|c| parse_num(c, whole)).collect()
}

impl fmt::Display for Shape {
    /// Renders the canonical spec string; `Shape::parse` accepts the output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = |v: &[f64]| {
            v.iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Shape::Ball { center, radius } => write!(f, "ball:{}:{radius}", coords(center)),
            Shape::Annulus {
                center,
                r_inner,
                r_outer,
            } => write!(f, "annulus:{}:{r_inner}:{r_outer}", coords(center)),
            Shape::Box { min, max } => write!(f, "box:{}:{}", coords(min), coords(max)),
            Shape::Product { left, right } => write!(f, "prod({left},{right})"),
        }
    }
}
