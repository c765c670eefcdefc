//! Ambient norms: ℓ₂, ℓ_p, ℓ₁, ℓ∞ and symmetric polygonal norms on ℝ².

use crate::error::{Error, Result};
use crate::linalg::C64;
use serde::Serialize;
use serde_json::{json, Value};

/// A centrally symmetric convex polygon used as the unit ball of a norm on ℝ².
///
/// Vertices are listed counterclockwise. `normals[k]` is the functional that
/// equals one on the edge from `vertices[k]` to `vertices[k + 1]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
    normals: Vec<[f64; 2]>,
}

impl Polygon {
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let m = vertices.len();
        if m < 4 || m % 2 != 0 {
            return Err(Error::InvalidPolygon(format!(
                "a symmetric polygon needs an even number (≥ 4) of vertices, got {m}"
            )));
        }
        let scale = vertices
            .iter()
            .map(|v| v[0].hypot(v[1]))
            .fold(0.0, f64::max);
        if vertices.iter().any(|v| !(v[0].is_finite() && v[1].is_finite())) {
            return Err(Error::InvalidPolygon("non-finite vertex".into()));
        }
        if vertices.iter().any(|v| v[0].hypot(v[1]) <= 1e-12 * scale.max(1e-300)) {
            return Err(Error::InvalidPolygon("zero vertex".into()));
        }
        let half = m / 2;
        for k in 0..half {
            let (a, b) = (vertices[k], vertices[k + half]);
            if (a[0] + b[0]).hypot(a[1] + b[1]) > 1e-9 * scale {
                return Err(Error::InvalidPolygon(format!(
                    "vertex {k} has no antipodal partner"
                )));
            }
        }
        for k in 0..m {
            let p = vertices[k];
            let q = vertices[(k + 1) % m];
            let r = vertices[(k + 2) % m];
            let turn = (q[0] - p[0]) * (r[1] - q[1]) - (q[1] - p[1]) * (r[0] - q[0]);
            if turn <= 1e-12 * scale * scale {
                return Err(Error::InvalidPolygon(format!(
                    "vertices are not in strictly convex counterclockwise position at {}",
                    (k + 1) % m
                )));
            }
        }
        let normals = (0..m)
            .map(|k| {
                let p = vertices[k];
                let q = vertices[(k + 1) % m];
                // a·p = a·q = 1
                let det = p[0] * q[1] - p[1] * q[0];
                [(q[1] - p[1]) / det, (p[0] - q[0]) / det]
            })
            .collect();
        Ok(Polygon { vertices, normals })
    }

    /// Regular polygon with `m` vertices on the Euclidean unit circle,
    /// the first one at angle `phase`.
    pub fn regular(m: usize, phase: f64) -> Result<Self> {
        let verts = (0..m)
            .map(|k| {
                let t = phase + 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                [t.cos(), t.sin()]
            })
            .collect();
        Polygon::new(verts)
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn normals(&self) -> &[[f64; 2]] {
        &self.normals
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, k: usize) -> [f64; 2] {
        self.vertices[k % self.len()]
    }

    pub fn normal(&self, k: usize) -> [f64; 2] {
        self.normals[k % self.len()]
    }

    /// Minkowski functional: the largest edge functional.
    pub fn norm(&self, x: &[f64]) -> f64 {
        self.normals
            .iter()
            .map(|a| a[0] * x[0] + a[1] * x[1])
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0)
    }

    /// Dual norm of a functional: its largest value on the vertices.
    pub fn dual_norm(&self, f: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| (f[0] * v[0] + f[1] * v[1]).abs())
            .fold(0.0, f64::max)
    }
}

/// The ambient norm.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum SpaceSpec {
    L2,
    Lp { p: f64 },
    L1,
    Linf,
    Polygon(Polygon),
}

/// Lightweight tag recording which norm a unit vector was normalized in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum NormTag {
    L2,
    Lp { p: f64 },
    L1,
    Linf,
    Polygon,
}

impl SpaceSpec {
    pub fn lp(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::UnsupportedSpace(format!("ℓ_p needs finite p > 1, got {p}")));
        }
        if p == 2.0 {
            return Ok(SpaceSpec::L2);
        }
        Ok(SpaceSpec::Lp { p })
    }

    pub fn tag(&self) -> NormTag {
        match self {
            SpaceSpec::L2 => NormTag::L2,
            SpaceSpec::Lp { p } => NormTag::Lp { p: *p },
            SpaceSpec::L1 => NormTag::L1,
            SpaceSpec::Linf => NormTag::Linf,
            SpaceSpec::Polygon(_) => NormTag::Polygon,
        }
    }

    /// Exponent of the norm when it is an ℓ_p norm (including 1, 2, ∞).
    pub fn exponent(&self) -> Option<f64> {
        match self {
            SpaceSpec::L2 => Some(2.0),
            SpaceSpec::Lp { p } => Some(*p),
            SpaceSpec::L1 => Some(1.0),
            SpaceSpec::Linf => Some(f64::INFINITY),
            SpaceSpec::Polygon(_) => None,
        }
    }

    pub fn is_strictly_convex(&self) -> bool {
        matches!(self, SpaceSpec::L2 | SpaceSpec::Lp { .. })
    }

    pub fn check_dimension(&self, n: usize) -> Result<()> {
        match self {
            SpaceSpec::Polygon(_) if n != 2 => Err(Error::DimensionMismatch { expected: 2, found: n }),
            _ if n == 0 => Err(Error::DimensionMismatch { expected: 1, found: 0 }),
            _ => Ok(()),
        }
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        match self {
            SpaceSpec::L2 => x.iter().map(|a| a * a).sum::<f64>().sqrt(),
            SpaceSpec::Lp { p } => lp_norm(x, *p),
            SpaceSpec::L1 => x.iter().map(|a| a.abs()).sum(),
            SpaceSpec::Linf => x.iter().map(|a| a.abs()).fold(0.0, f64::max),
            SpaceSpec::Polygon(poly) => poly.norm(x),
        }
    }

    /// Norm of a complex vector; polygonal norms only see real parts.
    pub fn norm_complex(&self, x: &[C64]) -> f64 {
        match self {
            SpaceSpec::Polygon(poly) => {
                let re: Vec<f64> = x.iter().map(|a| a.re).collect();
                poly.norm(&re)
            }
            _ => {
                let m: Vec<f64> = x.iter().map(|a| a.norm()).collect();
                self.norm(&m)
            }
        }
    }

    pub fn dual_norm(&self, f: &[f64]) -> f64 {
        match self {
            SpaceSpec::L2 => f.iter().map(|a| a * a).sum::<f64>().sqrt(),
            SpaceSpec::Lp { p } => lp_norm(f, *p / (*p - 1.0)),
            SpaceSpec::L1 => f.iter().map(|a| a.abs()).fold(0.0, f64::max),
            SpaceSpec::Linf => f.iter().map(|a| a.abs()).sum(),
            SpaceSpec::Polygon(poly) => poly.dual_norm(f),
        }
    }

    pub fn normalize(&self, x: &[f64]) -> Vec<f64> {
        let r = self.norm(x);
        x.iter().map(|a| a / r).collect()
    }

    pub fn unit_tolerance(&self, tol: &crate::Tolerances) -> f64 {
        match self {
            SpaceSpec::L2 => tol.unit_l2,
            _ => tol.unit,
        }
    }

    /// Parses the space descriptor: `"l1" | "linf" | "l2"`,
    /// `{"variant":"lp","p":4,"n":2}` or `{"variant":"polygon","vertices":[[x,y],...]}`.
    /// Returns the space and the declared dimension, if any.
    pub fn from_json(value: &Value) -> Result<(SpaceSpec, Option<usize>)> {
        let (variant, obj) = match value {
            Value::String(s) => (s.as_str(), None),
            Value::Object(map) => (
                map.get("variant")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Parse("space object needs a \"variant\" string".into()))?,
                Some(map),
            ),
            _ => return Err(Error::Parse("space must be a string or an object".into())),
        };
        let n = match obj.and_then(|m| m.get("n")) {
            None => None,
            Some(v) => Some(
                v.as_u64()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::Parse("space \"n\" must be a positive integer".into()))?
                    as usize,
            ),
        };
        let space = match variant.to_ascii_lowercase().as_str() {
            "l2" => SpaceSpec::L2,
            "l1" => SpaceSpec::L1,
            "linf" => SpaceSpec::Linf,
            "lp" => {
                let p = obj
                    .and_then(|m| m.get("p"))
                    .and_then(Value::as_f64)
                    .ok_or_else(|| Error::Parse("lp space needs a numeric \"p\"".into()))?;
                SpaceSpec::lp(p)?
            }
            "polygon" => {
                let verts = obj
                    .and_then(|m| m.get("vertices"))
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("polygon space needs \"vertices\"".into()))?;
                let mut vertices = Vec::with_capacity(verts.len());
                for v in verts {
                    let pair = v
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .and_then(|a| Some([a[0].as_f64()?, a[1].as_f64()?]))
                        .ok_or_else(|| Error::Parse("polygon vertex must be [x, y]".into()))?;
                    vertices.push(pair);
                }
                if let Some(n) = n {
                    if n != 2 {
                        return Err(Error::DimensionMismatch { expected: 2, found: n });
                    }
                }
                SpaceSpec::Polygon(Polygon::new(vertices)?)
            }
            other => return Err(Error::Parse(format!("unknown space variant {other:?}"))),
        };
        Ok((space, n))
    }

    pub fn parse(text: &str) -> Result<(SpaceSpec, Option<usize>)> {
        let trimmed = text.trim();
        let value = if trimmed.starts_with('{') || trimmed.starts_with('"') {
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?
        } else {
            Value::String(trimmed.to_string())
        };
        SpaceSpec::from_json(&value)
    }

    pub fn to_json(&self, n: usize) -> Value {
        match self {
            SpaceSpec::L2 => json!("l2"),
            SpaceSpec::L1 => json!("l1"),
            SpaceSpec::Linf => json!("linf"),
            SpaceSpec::Lp { p } => json!({"variant": "lp", "p": p, "n": n}),
            SpaceSpec::Polygon(poly) => json!({"variant": "polygon", "vertices": poly.vertices()}),
        }
    }
}

pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    let m = x.iter().map(|a| a.abs()).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    m * x.iter().map(|a| (a.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}
