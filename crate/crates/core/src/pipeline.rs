//! End-to-end computation: distances, complex, persistent cocycles, lift,
//! harmonic smoothing and circle coordinates for every selected interval.

use std::fmt;
use std::fs;
use std::path::Path;

use num_complex::Complex;

use crate::analysis::{fit_degrees, histogram, histogram_csv, scatter_csv};
use crate::circular::{coordinates_from_potential, integrate_cocycle, CircularCoordinate};
use crate::cochain::{dump_cocycle, Cochain, PrimeField};
use crate::complex::{rips_2skeleton, total_order, witness_2skeleton, OrderedFiltration, Simplex};
use crate::datasets::{generate, Dataset, DatasetSpec};
use crate::error::Error;
use crate::harmonic::{harmonic_representative, to_real, HarmonicOptions, HarmonicResult};
use crate::lift::{lift_cocycle, LiftResult, RETRY_PRIMES};
use crate::metric::{euclidean_distances, maxmin_landmarks, projective_distances, DistanceMatrix, LandmarkSet, PointCloud};
use crate::persistence::{diagram_csv, live_cocycles_at, persistent_cocycles, PersistenceDiagram, PersistenceInterval};
use crate::scalar::{frac, Scalar};
use crate::svg::{diagram_svg, scatter_svg};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Config,
    Input,
    Complex,
    Persistence,
    Selection,
    Lift,
    Harmonic,
    Circularize,
    Output,
    Analysis,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Config => "config",
            Stage::Input => "input",
            Stage::Complex => "complex",
            Stage::Persistence => "persistence",
            Stage::Selection => "selection",
            Stage::Lift => "lift",
            Stage::Harmonic => "harmonic",
            Stage::Circularize => "circularize",
            Stage::Output => "output",
            Stage::Analysis => "analysis",
        };
        f.write_str(name)
    }
}

#[derive(Debug)]
pub struct PipelineError {
    pub stage: Stage,
    pub source: Error,
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage failed: {}", self.stage, self.source)
    }
}

impl std::error::Error for PipelineError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

trait AtStage<V> {
    fn at(self, stage: Stage) -> Result<V, PipelineError>;
}

impl<V> AtStage<V> for Result<V, Error> {
    fn at(self, stage: Stage) -> Result<V, PipelineError> {
        self.map_err(|source| PipelineError { stage, source })
    }
}

#[derive(Clone, Debug)]
pub enum InputSource<T> {
    Cloud(PointCloud<T>),
    Matrix(DistanceMatrix<T>),
    Dataset(DatasetSpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Euclidean,
    /// Points read as unit vectors of C^(dim/2), compared up to phase.
    Projective,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexKind {
    Rips,
    Witness { landmarks: usize, nu: usize, seed: usize },
}

/// How witness-complex coordinates reach non-landmark points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Extension {
    #[default]
    Nearest,
    /// Distance-weighted circular mean over the nearest landmarks that span
    /// a simplex of the complex.
    Interpolated,
}

#[derive(Clone, Debug)]
pub struct PipelineConfig<T> {
    pub input: InputSource<T>,
    pub metric: Metric,
    pub complex: ComplexKind,
    pub r_max: T,
    /// Primes to try in order; later ones are used after a torsion failure.
    pub primes: Vec<u32>,
    /// Scale at which cocycles are selected.
    pub delta: Option<T>,
    /// Keep at most this many (longest) intervals.
    pub top: Option<usize>,
    pub harmonic: HarmonicOptions<T>,
    pub extension: Extension,
}

impl<T: Scalar> PipelineConfig<T> {
    pub fn new(input: InputSource<T>, complex: ComplexKind, r_max: T) -> Self {
        PipelineConfig {
            input,
            metric: Metric::Euclidean,
            complex,
            r_max,
            primes: RETRY_PRIMES.to_vec(),
            delta: None,
            top: None,
            harmonic: HarmonicOptions::default(),
            extension: Extension::Nearest,
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if !(self.r_max >= T::zero() && self.r_max.is_finite()) {
            return Err(Error::invalid(format!("maximum radius must be finite and nonnegative, got {}", self.r_max)));
        }
        if let Some(d) = self.delta {
            if !(d >= T::zero()) {
                return Err(Error::invalid(format!("delta must be nonnegative, got {d}")));
            }
        }
        if self.delta.is_none() && self.top.is_none() {
            return Err(Error::invalid("choose cocycles with delta, top, or both"));
        }
        if self.top == Some(0) {
            return Err(Error::invalid("top must be at least 1"));
        }
        if self.primes.is_empty() {
            return Err(Error::invalid("at least one prime is required"));
        }
        for &p in &self.primes {
            PrimeField::new(p)?;
        }
        if let ComplexKind::Witness { landmarks, nu, .. } = self.complex {
            if landmarks == 0 || nu > 2 {
                return Err(Error::invalid("witness complex needs landmarks >= 1 and nu in 0..=2"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SelectedCoordinate<T> {
    /// Position in `PersistenceDiagram::all_intervals`.
    pub interval: usize,
    pub birth: T,
    pub death: Option<T>,
    pub lift: LiftResult,
    pub harmonic: HarmonicResult<T>,
    /// Angles on the vertices of the complex.
    pub vertex_coordinate: CircularCoordinate<T>,
    /// Angles on every input point.
    pub coordinate: CircularCoordinate<T>,
}

#[derive(Clone, Debug)]
pub struct PipelineOutput<T> {
    pub diagram: PersistenceDiagram<T>,
    pub delta: Option<T>,
    /// The complex `X^delta` the coordinates live on.
    pub complex: OrderedFiltration<T>,
    pub selected: Vec<SelectedCoordinate<T>>,
    pub landmarks: Option<LandmarkSet<T>>,
    pub dataset: Option<Dataset<T>>,
    pub prime_used: u32,
    pub point_count: usize,
}

fn distances<T: Scalar>(cloud: &PointCloud<T>, metric: Metric) -> Result<DistanceMatrix<T>, Error> {
    match metric {
        Metric::Euclidean => Ok(euclidean_distances(cloud)),
        Metric::Projective => projective_distances(cloud),
    }
}

/// Chooses the scale and the intervals alive there.
fn select<T: Scalar>(diagram: &PersistenceDiagram<T>, delta: Option<T>, top: Option<usize>) -> Result<(Option<T>, Vec<usize>), Error> {
    let position = |iv: &PersistenceInterval<T>| {
        diagram
            .all_intervals()
            .iter()
            .position(|other| other.birth_index == iv.birth_index)
            .expect("interval comes from this diagram")
    };
    if let Some(delta) = delta {
        let alive = live_cocycles_at(diagram, delta);
        let keep = top.unwrap_or(alive.len()).min(alive.len());
        return Ok((Some(delta), alive[..keep].iter().map(|iv| position(iv)).collect()));
    }
    let k = top.expect("validated");
    if diagram.intervals_of_dim(1).next().is_none() {
        return Ok((None, Vec::new()));
    }
    let k = k.min(diagram.intervals_of_dim(1).count());
    let band = diagram
        .selection_band(k)
        .ok_or_else(|| Error::invalid(format!("the {k} longest intervals are never alive together")))?;
    let chosen = &diagram.by_capped_length(1)[..k];
    Ok((Some(band.midpoint()), chosen.iter().map(|iv| position(iv)).collect()))
}

fn nearest_landmark<T: Scalar>(d: &DistanceMatrix<T>, marks: &[usize], s: usize) -> usize {
    let mut best = 0;
    for (i, &l) in marks.iter().enumerate() {
        if d.get(s, l) < d.get(s, marks[best]) {
            best = i;
        }
    }
    best
}

fn extend_to_points<T: Scalar>(
    theta: &CircularCoordinate<T>,
    d_all: &DistanceMatrix<T>,
    landmarks: &LandmarkSet<T>,
    complex: &OrderedFiltration<T>,
    mode: Extension,
) -> CircularCoordinate<T> {
    let marks = &landmarks.indices;
    let n = d_all.len();
    let theta_all = (0..n)
        .map(|s| {
            let nearest = nearest_landmark(d_all, marks, s);
            if mode == Extension::Nearest || d_all.get(s, marks[nearest]) == T::zero() {
                return theta.theta[nearest];
            }
            let mut order: Vec<usize> = (0..marks.len()).collect();
            order.sort_by(|&a, &b| d_all.get(s, marks[a]).partial_cmp(&d_all.get(s, marks[b])).unwrap().then(a.cmp(&b)));
            let mut cell = vec![order[0]];
            for &cand in order.iter().skip(1).take(2) {
                let mut verts = cell.clone();
                verts.push(cand);
                match Simplex::new(&verts) {
                    Ok(s) if complex.index_of(&s).is_some() => cell.push(cand),
                    _ => break,
                }
            }
            let mut acc = Complex::new(T::zero(), T::zero());
            for &l in &cell {
                let w = d_all.get(s, marks[l]).recip();
                let phase = T::TAU() * theta.theta[l];
                acc = acc + Complex::from_polar(w, phase);
            }
            if acc.norm() <= T::epsilon() {
                return theta.theta[nearest];
            }
            frac(acc.arg() / T::TAU())
        })
        .collect();
    CircularCoordinate { theta: theta_all }
}

/// Lift, smoothing and integration for one mod-p cocycle on `complex`.
/// Entries on simplices outside `complex` are dropped first.
pub fn coordinates_from_cocycle<T: Scalar>(
    cocycle: &Cochain<u32>,
    field: &PrimeField,
    complex: &OrderedFiltration<T>,
    harmonic: &HarmonicOptions<T>,
) -> Result<(LiftResult, HarmonicResult<T>, CircularCoordinate<T>), PipelineError> {
    let alpha_p = cocycle.restrict(complex.len());
    let lift = lift_cocycle(&alpha_p, field, complex).at(Stage::Lift)?;
    let smooth = harmonic_representative(&to_real::<T>(&lift.cocycle), complex, harmonic).at(Stage::Harmonic)?;
    let theta = coordinates_from_potential(&smooth.potential, complex);
    // The smoothed cocycle must integrate consistently around every cycle.
    integrate_cocycle(&smooth.smoothed, complex, &[]).at(Stage::Circularize)?;
    Ok((lift, smooth, theta))
}

pub fn run_pipeline<T: Scalar>(config: &PipelineConfig<T>) -> Result<PipelineOutput<T>, PipelineError> {
    config.validate().at(Stage::Config)?;
    let mut dataset = None;
    let d_all = match &config.input {
        InputSource::Cloud(cloud) => distances(cloud, config.metric).at(Stage::Input)?,
        InputSource::Matrix(d) => d.clone(),
        InputSource::Dataset(spec) => {
            let data: Dataset<T> = generate(spec).at(Stage::Input)?;
            let d = distances(&data.cloud, config.metric).at(Stage::Input)?;
            dataset = Some(data);
            d
        }
    };

    let (complex, landmarks) = match config.complex {
        ComplexKind::Rips => (rips_2skeleton(&d_all, config.r_max), None),
        ComplexKind::Witness { landmarks, nu, seed } => {
            let marks = maxmin_landmarks(&d_all, landmarks, seed).at(Stage::Complex)?;
            let c = witness_2skeleton(&d_all, &marks, nu, config.r_max).at(Stage::Complex)?;
            (c, Some(marks))
        }
    };
    let filtration = total_order(&complex).at(Stage::Complex)?;

    let mut last_torsion = None;
    for &p in &config.primes {
        let diagram = persistent_cocycles(filtration.clone(), p).at(Stage::Persistence)?;
        let (delta, chosen) = select(&diagram, config.delta, config.top).at(Stage::Selection)?;
        let sub = match delta {
            Some(d) => diagram.filtration().sublevel(d),
            None => diagram.filtration().prefix(0),
        };
        let field = diagram.field();
        let mut selected = Vec::with_capacity(chosen.len());
        let mut torsion = false;
        for idx in chosen {
            let iv = &diagram.all_intervals()[idx];
            match coordinates_from_cocycle(&iv.representative, &field, &sub, &config.harmonic) {
                Ok((lift, harmonic, vertex_coordinate)) => {
                    let coordinate = match &landmarks {
                        Some(marks) => extend_to_points(&vertex_coordinate, &d_all, marks, &sub, config.extension),
                        None => vertex_coordinate.clone(),
                    };
                    selected.push(SelectedCoordinate { interval: idx, birth: iv.birth, death: iv.death, lift, harmonic, vertex_coordinate, coordinate });
                }
                Err(PipelineError { source: Error::TorsionObstruction { prime }, .. }) => {
                    last_torsion = Some(prime);
                    torsion = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if torsion {
            continue;
        }
        return Ok(PipelineOutput {
            prime_used: p,
            point_count: d_all.len(),
            diagram,
            delta,
            complex: sub,
            selected,
            landmarks,
            dataset,
        });
    }
    Err(PipelineError {
        stage: Stage::Lift,
        source: Error::TorsionObstruction { prime: last_torsion.unwrap_or(0) },
    })
}

/// Writes the standard output files into `dir`:
/// `diagram.csv`, and per selected coordinate `i`: `cocycle_<i>.txt`,
/// `coords_<i>.csv`, `hist_<i>.csv`, plus `scatter_<i>_<j>.csv` for pairs
/// and `truth.csv` / `degrees.csv` when ground truth is known. With `svg`,
/// also `diagram.svg` and `scatter_<i>_<j>.svg`.
pub fn write_outputs<T: Scalar>(output: &PipelineOutput<T>, dir: &Path, bins: usize, svg: bool) -> Result<(), PipelineError> {
    write_all(output, dir, bins, svg).at(Stage::Output)
}

fn write_all<T: Scalar>(output: &PipelineOutput<T>, dir: &Path, bins: usize, svg: bool) -> Result<(), Error> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("diagram.csv"), diagram_csv(&output.diagram))?;
    let mut summary = format!(
        "points,{}\nsimplices,{}\nprime,{}\ndelta,{}\ncoordinates,{}\n",
        output.point_count,
        output.diagram.filtration().len(),
        output.prime_used,
        output.delta.map(|d| d.to_string()).unwrap_or_default(),
        output.selected.len()
    );
    if let Some(marks) = &output.landmarks {
        summary.push_str(&format!("landmarks,{}\ncovering_radius,{}\n", marks.indices.len(), marks.covering_radius));
    }
    fs::write(dir.join("summary.csv"), summary)?;
    for (i, sel) in output.selected.iter().enumerate() {
        fs::write(dir.join(format!("cocycle_{i}.txt")), dump_cocycle(&sel.lift.cocycle, &output.complex))?;
        fs::write(dir.join(format!("coords_{i}.csv")), sel.coordinate.to_csv())?;
        fs::write(dir.join(format!("hist_{i}.csv")), histogram_csv(&histogram(&sel.coordinate, bins)?))?;
        for (j, other) in output.selected.iter().enumerate().skip(i + 1) {
            fs::write(dir.join(format!("scatter_{i}_{j}.csv")), scatter_csv(&sel.coordinate, &other.coordinate))?;
            if svg {
                fs::write(dir.join(format!("scatter_{i}_{j}.svg")), scatter_svg(&sel.coordinate.theta, &other.coordinate.theta))?;
            }
        }
    }
    if let Some(data) = &output.dataset {
        if let Some(csv) = data.parameters_csv() {
            fs::write(dir.join("truth.csv"), csv)?;
            let angles: Vec<&str> = data.parameter_names.iter().copied().filter(|n| !matches!(*n, "circle" | "sheet")).collect();
            let columns: Vec<Vec<T>> = angles.iter().map(|n| data.parameter(n).expect("named column")).collect();
            let refs: Vec<&[T]> = columns.iter().map(Vec::as_slice).collect();
            let mut degrees = format!("coordinate,{},correlation\n", angles.join(","));
            for (i, sel) in output.selected.iter().enumerate() {
                let (k, r) = fit_degrees(&sel.coordinate.theta, &refs, 3);
                let ks: Vec<String> = k.iter().map(i64::to_string).collect();
                degrees.push_str(&format!("{i},{},{r:.6}\n", ks.join(",")));
            }
            fs::write(dir.join("degrees.csv"), degrees)?;
        }
    }
    if svg {
        fs::write(dir.join("diagram.svg"), diagram_svg(&output.diagram, output.delta))?;
    }
    Ok(())
}
