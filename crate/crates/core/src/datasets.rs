//! Seeded synthetic point clouds with known circular structure.
//!
//! Angle parameters are reported in turns, i.e. in `[0, 1)`, so they compare
//! directly with inferred circular coordinates.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::metric::PointCloud;
use crate::scalar::Scalar;

/// Torus center-circle radius used by `Torus` and `DoubleTorus`.
pub const TORUS_MAJOR: f64 = 3.0;
/// Torus tube radius used by `Torus` and `DoubleTorus`.
pub const TORUS_MINOR: f64 = 1.0;
/// Distance from the torus axis of the plane that cuts the double torus.
pub const SLICE_PLANE: f64 = 3.7;
pub const KNOT_MAJOR: f64 = 2.0;
pub const KNOT_MINOR: f64 = 1.0;
pub const DEFAULT_LOOP_DIM: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DatasetKind {
    NoisyCircle,
    TrefoilKnot,
    ConjoinedCircles,
    DisjointCircles,
    Torus,
    DoubleTorus,
    EllipticCurve,
    HighDimLoop,
}

impl DatasetKind {
    pub const ALL: [DatasetKind; 8] = [
        DatasetKind::NoisyCircle,
        DatasetKind::TrefoilKnot,
        DatasetKind::ConjoinedCircles,
        DatasetKind::DisjointCircles,
        DatasetKind::Torus,
        DatasetKind::DoubleTorus,
        DatasetKind::EllipticCurve,
        DatasetKind::HighDimLoop,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DatasetKind::NoisyCircle => "noisy-circle",
            DatasetKind::TrefoilKnot => "trefoil-knot",
            DatasetKind::ConjoinedCircles => "conjoined-circles",
            DatasetKind::DisjointCircles => "disjoint-circles",
            DatasetKind::Torus => "torus",
            DatasetKind::DoubleTorus => "double-torus",
            DatasetKind::EllipticCurve => "elliptic-curve",
            DatasetKind::HighDimLoop => "high-dim-loop",
        }
    }

    /// Names of the ground-truth columns, empty when there are none.
    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            DatasetKind::NoisyCircle | DatasetKind::HighDimLoop => &["angle"],
            DatasetKind::TrefoilKnot => &["knot"],
            DatasetKind::ConjoinedCircles | DatasetKind::DisjointCircles => &["circle", "angle"],
            DatasetKind::Torus => &["longitude", "meridian"],
            DatasetKind::DoubleTorus => &["sheet", "longitude", "meridian"],
            DatasetKind::EllipticCurve => &[],
        }
    }

    /// Noise range used in the reference experiments.
    pub fn reference_noise(self) -> f64 {
        match self {
            DatasetKind::NoisyCircle => 0.4,
            DatasetKind::TrefoilKnot | DatasetKind::Torus => 0.2,
            DatasetKind::ConjoinedCircles => 0.3,
            DatasetKind::DisjointCircles => 0.5,
            DatasetKind::DoubleTorus | DatasetKind::EllipticCurve | DatasetKind::HighDimLoop => 0.0,
        }
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DatasetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DatasetKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown dataset {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetSpec {
    pub kind: DatasetKind,
    /// Number of samples; for `DoubleTorus` the number drawn on the torus
    /// before slicing.
    pub n: usize,
    /// Width of the uniform noise added to each coordinate.
    pub noise: f64,
    pub seed: u64,
    /// Noise in `[-noise/2, noise/2]` instead of `[0, noise]`.
    pub centered_noise: bool,
    /// Ambient dimension for `HighDimLoop`.
    pub ambient_dim: usize,
}

impl DatasetSpec {
    pub fn new(kind: DatasetKind, n: usize, noise: f64, seed: u64) -> Self {
        DatasetSpec { kind, n, noise, seed, centered_noise: false, ambient_dim: DEFAULT_LOOP_DIM }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("dataset needs at least one point"));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::invalid(format!("noise must be finite and nonnegative, got {}", self.noise)));
        }
        if self.kind == DatasetKind::HighDimLoop && self.ambient_dim < 4 {
            return Err(Error::invalid("high-dimensional loop needs ambient dimension >= 4"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Dataset<T> {
    pub cloud: PointCloud<T>,
    pub parameter_names: Vec<&'static str>,
    /// One row of ground-truth parameters per point (empty rows if none).
    pub parameters: Vec<Vec<T>>,
}

impl<T: Scalar> Dataset<T> {
    /// Values of one ground-truth column.
    pub fn parameter(&self, name: &str) -> Option<Vec<T>> {
        let col = self.parameter_names.iter().position(|&n| n == name)?;
        Some(self.parameters.iter().map(|row| row[col]).collect())
    }

    /// Sidecar table `point_index,<names...>`; `None` without ground truth.
    pub fn parameters_csv(&self) -> Option<String> {
        if self.parameter_names.is_empty() {
            return None;
        }
        let mut out = format!("point_index,{}\n", self.parameter_names.join(","));
        for (i, row) in self.parameters.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            out.push_str(&format!("{i},{}\n", cells.join(",")));
        }
        Some(out)
    }
}

fn circle(center: f64, angle: f64) -> Vec<f64> {
    vec![center + (TAU * angle).cos(), (TAU * angle).sin()]
}

fn torus(longitude: f64, meridian: f64) -> Vec<f64> {
    let (u, v) = (TAU * longitude, TAU * meridian);
    let ring = TORUS_MAJOR + TORUS_MINOR * v.cos();
    vec![ring * u.cos(), ring * u.sin(), TORUS_MINOR * v.sin()]
}

fn trefoil(t: f64) -> Vec<f64> {
    let phi = TAU * t;
    let ring = KNOT_MAJOR + KNOT_MINOR * (3.0 * phi).cos();
    vec![ring * (2.0 * phi).cos(), ring * (2.0 * phi).sin(), KNOT_MINOR * (3.0 * phi).sin()]
}

fn reflect(mut p: Vec<f64>) -> Vec<f64> {
    p[0] = 2.0 * SLICE_PLANE - p[0];
    p
}

/// Orthonormal `dim x 4` frame for the high-dimensional loop, stored by column.
fn loop_frame(seed: u64, dim: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(4);
    while frame.len() < 4 {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        for q in &frame {
            let dot: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(q).for_each(|(a, b)| *a -= dot * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-6 {
            v.iter_mut().for_each(|a| *a /= norm);
            frame.push(v);
        }
    }
    frame
}

fn high_dim_loop(frame: &[Vec<f64>], t: f64) -> Vec<f64> {
    let feats = [(TAU * t).cos(), (TAU * t).sin(), (2.0 * TAU * t).cos(), (2.0 * TAU * t).sin()];
    let dim = frame[0].len();
    (0..dim).map(|i| frame.iter().zip(feats).map(|(q, f)| q[i] * f).sum()).collect()
}

/// Noiseless point for a row of ground-truth parameters.
pub fn reconstruct(spec: &DatasetSpec, params: &[f64]) -> Option<Vec<f64>> {
    Some(match spec.kind {
        DatasetKind::NoisyCircle => circle(0.0, params[0]),
        DatasetKind::TrefoilKnot => trefoil(params[0]),
        DatasetKind::ConjoinedCircles => circle(if params[0] == 0.0 { -1.0 } else { 1.0 }, params[1]),
        DatasetKind::DisjointCircles => circle(if params[0] == 0.0 { -2.0 } else { 2.0 }, params[1]),
        DatasetKind::Torus => torus(params[0], params[1]),
        DatasetKind::DoubleTorus => {
            let p = torus(params[1], params[2]);
            if params[0] == 0.0 {
                p
            } else {
                reflect(p)
            }
        }
        DatasetKind::HighDimLoop => high_dim_loop(&loop_frame(spec.seed, spec.ambient_dim), params[0]),
        DatasetKind::EllipticCurve => return None,
    })
}

/// Draws a point of `x²y + y²z + z²x = 0` on the unit sphere of C³:
/// Gaussian `x, y`, then a random root `z` of the quadratic, normalized.
fn elliptic_point(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let gaussian = |rng: &mut ChaCha8Rng| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    loop {
        let x = gaussian(rng);
        let y = gaussian(rng);
        let pick_plus: bool = rng.random();
        // x z² + y² z + x² y = 0
        let (a, b, c) = (x, y * y, x * x * y);
        if a.norm() < 1e-6 {
            continue;
        }
        let root = (b * b - 4.0 * a * c).sqrt();
        let z = if pick_plus { (-b + root) / (2.0 * a) } else { (-b - root) / (2.0 * a) };
        let norm = (x.norm_sqr() + y.norm_sqr() + z.norm_sqr()).sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            continue;
        }
        let (x, y, z) = (x / norm, y / norm, z / norm);
        let residual = (x * x * y + y * y * z + z * z * x).norm();
        if residual <= 1e-12 {
            return vec![x.re, x.im, y.re, y.im, z.re, z.im];
        }
    }
}

/// Generates the dataset; output is a pure function of the spec.
/// `EllipticCurve` points are returned exactly on the curve (noise is not
/// applied there).
pub fn generate<T: Scalar>(spec: &DatasetSpec) -> Result<Dataset<T>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(spec.n);
    let mut params: Vec<Vec<f64>> = Vec::with_capacity(spec.n);
    let unit = |rng: &mut ChaCha8Rng| -> f64 { rng.random::<f64>() };
    for i in 0..spec.n {
        let row = match spec.kind {
            DatasetKind::NoisyCircle | DatasetKind::TrefoilKnot | DatasetKind::HighDimLoop => vec![unit(&mut rng)],
            DatasetKind::ConjoinedCircles | DatasetKind::DisjointCircles => {
                vec![if 2 * i < spec.n { 0.0 } else { 1.0 }, unit(&mut rng)]
            }
            DatasetKind::Torus => vec![unit(&mut rng), unit(&mut rng)],
            DatasetKind::DoubleTorus => vec![0.0, unit(&mut rng), unit(&mut rng)],
            DatasetKind::EllipticCurve => {
                points.push(elliptic_point(&mut rng));
                params.push(Vec::new());
                continue;
            }
        };
        points.push(reconstruct(spec, &row).expect("parametrized kind"));
        params.push(row);
    }

    if spec.kind != DatasetKind::EllipticCurve && spec.noise > 0.0 {
        let offset = if spec.centered_noise { -spec.noise / 2.0 } else { 0.0 };
        for p in &mut points {
            for x in p.iter_mut() {
                *x += offset + spec.noise * rng.random::<f64>();
            }
        }
    }

    if spec.kind == DatasetKind::DoubleTorus {
        let (kept, kept_params): (Vec<_>, Vec<_>) =
            points.into_iter().zip(params).filter(|(p, _)| p[0] <= SLICE_PLANE).unzip();
        let mirrored: Vec<Vec<f64>> = kept.iter().cloned().map(reflect).collect();
        let mirrored_params: Vec<Vec<f64>> = kept_params.iter().map(|r| vec![1.0, r[1], r[2]]).collect();
        points = kept.into_iter().chain(mirrored).collect();
        params = kept_params.into_iter().chain(mirrored_params).collect();
    }

    let cloud = PointCloud::new(points.into_iter().map(|p| p.into_iter().map(T::of).collect()).collect())?;
    Ok(Dataset {
        cloud,
        parameter_names: spec.kind.parameter_names().to_vec(),
        parameters: params.into_iter().map(|r| r.into_iter().map(T::of).collect()).collect(),
    })
}
