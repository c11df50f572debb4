use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use circular_coords::analysis::{circular_correlation, cyclic_ordering, degree_between, histogram, histogram_csv, scatter_csv};
use circular_coords::cochain::{dump_cocycle, parse_cocycle, PrimeField};
use circular_coords::complex::{parse_filtration, rips_2skeleton, total_order, witness_2skeleton};
use circular_coords::datasets::{generate, Dataset, DatasetKind, DatasetSpec, DEFAULT_LOOP_DIM};
use circular_coords::harmonic::HarmonicOptions;
use circular_coords::io::{parse_columns, parse_distance_matrix, parse_point_cloud, point_cloud_text};
use circular_coords::lift::RETRY_PRIMES;
use circular_coords::metric::{euclidean_distances, maxmin_landmarks, projective_distances};
use circular_coords::persistence::{diagram_csv, persistent_cocycles, DEFAULT_PRIME};
use circular_coords::pipeline::{
    coordinates_from_cocycle, run_pipeline, write_outputs, ComplexKind, Extension, InputSource, Metric, PipelineConfig,
    PipelineError, Stage,
};
use circular_coords::svg::diagram_svg;
use circular_coords::{CircularCoordinate, Error, Filtration64};
use clap::{Args, Parser, Subcommand};

/// Circle-valued coordinates for point clouds via persistent cohomology.
#[derive(Parser, Debug)]
#[command(name = "circcoords", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a synthetic point cloud
    Generate(GenerateArgs),
    /// Build a filtered Rips or witness 2-skeleton and print it
    Complex(ComplexCmd),
    /// Persistent cohomology of a complex
    Persistence(PersistenceCmd),
    /// Circular coordinate from a given cocycle
    Coords(CoordsCmd),
    /// Everything end to end, writing all outputs to a directory
    Pipeline(PipelineCmd),
    /// Histograms, degrees and scatter tables for coordinate files
    Analyze(AnalyzeCmd),
}

#[derive(Args, Debug, Clone)]
struct DatasetArgs {
    /// Synthetic dataset: noisy-circle, trefoil-knot, conjoined-circles,
    /// disjoint-circles, torus, double-torus, elliptic-curve, high-dim-loop
    #[arg(long)]
    dataset: Option<DatasetKind>,
    /// Number of samples
    #[arg(long, default_value_t = 400)]
    n: usize,
    /// Uniform noise width per coordinate [default: the dataset's reference value]
    #[arg(long)]
    noise: Option<f64>,
    /// Seed for sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noise centered on zero instead of one-sided
    #[arg(long)]
    centered_noise: bool,
    /// Ambient dimension of the high-dimensional loop
    #[arg(long, default_value_t = DEFAULT_LOOP_DIM)]
    ambient_dim: usize,
}

impl DatasetArgs {
    fn spec(&self, kind: DatasetKind) -> DatasetSpec {
        let mut spec = DatasetSpec::new(kind, self.n, self.noise.unwrap_or(kind.reference_noise()), self.seed);
        spec.centered_noise = self.centered_noise;
        spec.ambient_dim = self.ambient_dim;
        spec
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    data: DatasetArgs,
    /// Point file to write [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Ground-truth parameter table to write, when the dataset has one
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Point cloud, one point per line
    #[arg(long, conflicts_with_all = ["matrix", "dataset"])]
    points: Option<PathBuf>,
    /// Symmetric distance matrix, one row per line
    #[arg(long, conflicts_with = "dataset")]
    matrix: Option<PathBuf>,
    #[command(flatten)]
    data: DatasetArgs,
    /// Read points as unit vectors in C^(d/2) under the projective metric
    #[arg(long)]
    projective: bool,
}

#[derive(Args, Debug)]
struct ComplexArgs {
    /// Vietoris-Rips complex, optionally with its maximum radius
    #[arg(long, num_args = 0..=1, value_name = "R", conflicts_with = "witness")]
    rips: Option<Option<f64>>,
    /// Lazy witness complex on this many maxmin landmarks
    #[arg(long, value_name = "K")]
    witness: Option<usize>,
    /// Witness parameter: subtract the distance to the nu-th nearest landmark
    #[arg(long, default_value_t = 1, value_name = "V")]
    nu: usize,
    /// Index of the first landmark
    #[arg(long, default_value_t = 0)]
    landmark_seed: usize,
    /// Maximum filtration value
    #[arg(long, value_name = "R")]
    rmax: Option<f64>,
}

#[derive(Args, Debug)]
struct ComplexCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    complex: ComplexArgs,
    /// Filtration dump to write [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PersistenceCmd {
    /// Filtration dump (`value v0 [v1 [v2]]` per line) instead of building one
    #[arg(long)]
    filtration: Option<PathBuf>,
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    complex: ComplexArgs,
    /// Coefficient field
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
    /// Directory for diagram.csv and the representative cocycles
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write diagram.svg
    #[arg(long)]
    svg: bool,
}

#[derive(Args, Debug)]
struct CoordsCmd {
    /// Filtration dump
    #[arg(long)]
    filtration: PathBuf,
    /// Cocycle with coefficients mod the prime, `v0 v1 coefficient` per line
    #[arg(long)]
    cocycle: PathBuf,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
    /// Use the subcomplex up to this scale [default: the whole filtration]
    #[arg(long)]
    delta: Option<f64>,
    /// Coordinate table to write [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PipelineCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    complex: ComplexArgs,
    /// First prime to try; later ones are used only after a torsion failure
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
    /// Give up instead of retrying with other primes
    #[arg(long)]
    no_retry: bool,
    /// Scale at which cocycles are selected
    #[arg(long)]
    delta: Option<f64>,
    /// Number of longest intervals to parametrize
    #[arg(long)]
    top: Option<usize>,
    /// Stopping tolerance of the least-squares solver
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    /// Interpolate witness coordinates instead of copying the nearest landmark
    #[arg(long)]
    interpolate: bool,
    /// Histogram bins
    #[arg(long, default_value_t = 20)]
    bins: usize,
    /// Also write SVG renderings
    #[arg(long)]
    svg: bool,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct AnalyzeCmd {
    /// Coordinate table (`point_index,theta`)
    #[arg(long)]
    coords: PathBuf,
    /// Table holding a reference angle, e.g. truth.csv
    #[arg(long, requires = "column")]
    against: Option<PathBuf>,
    /// Column of the reference table to compare with
    #[arg(long)]
    column: Option<String>,
    /// Restrict the comparison to rows where COLUMN=VALUE
    #[arg(long = "where", value_name = "COLUMN=VALUE")]
    filter: Option<String>,
    /// Second coordinate table for a scatter table
    #[arg(long)]
    other: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    bins: usize,
    /// Directory for hist.csv and scatter.csv [default: print to stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit code 2 for configuration problems, 3 for a failing stage.
enum Failure {
    Config(String),
    Stage(PipelineError),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        if e.stage == Stage::Config {
            Failure::Config(e.source.to_string())
        } else {
            Failure::Stage(e)
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn config_err(e: impl std::fmt::Display) -> Failure {
    Failure::Config(e.to_string())
}

fn stage(stage: Stage) -> impl Fn(Error) -> Failure {
    move |source| Failure::Stage(PipelineError { stage, source })
}

fn output_err(e: std::io::Error) -> Failure {
    Failure::Stage(PipelineError { stage: Stage::Output, source: Error::Io(e) })
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(output_err),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

impl InputArgs {
    fn source(&self) -> CliResult<InputSource<f64>> {
        if let Some(p) = &self.points {
            return Ok(InputSource::Cloud(parse_point_cloud(&read(p)?).map_err(config_err)?));
        }
        if let Some(p) = &self.matrix {
            if self.projective {
                return Err(Failure::Config("--projective needs points, not a distance matrix".into()));
            }
            return Ok(InputSource::Matrix(parse_distance_matrix(&read(p)?).map_err(config_err)?));
        }
        match self.data.dataset {
            Some(kind) => Ok(InputSource::Dataset(self.data.spec(kind))),
            None => Err(Failure::Config("choose an input: --points, --matrix or --dataset".into())),
        }
    }

    fn metric(&self) -> Metric {
        if self.projective {
            Metric::Projective
        } else {
            Metric::Euclidean
        }
    }
}

impl ComplexArgs {
    fn kind(&self) -> CliResult<(ComplexKind, f64)> {
        let r_max = self.rmax.or(self.rips.flatten());
        let r_max = r_max.ok_or_else(|| Failure::Config("set the maximum radius with --rmax or --rips R".into()))?;
        let kind = match self.witness {
            Some(k) => ComplexKind::Witness { landmarks: k, nu: self.nu, seed: self.landmark_seed },
            None => ComplexKind::Rips,
        };
        Ok((kind, r_max))
    }
}

fn build_filtration(input: &InputArgs, complex: &ComplexArgs) -> CliResult<Filtration64> {
    let (kind, r_max) = complex.kind()?;
    let d = match input.source()? {
        InputSource::Matrix(d) => d,
        InputSource::Cloud(cloud) => match input.metric() {
            Metric::Euclidean => euclidean_distances(&cloud),
            Metric::Projective => projective_distances(&cloud).map_err(config_err)?,
        },
        InputSource::Dataset(spec) => {
            let data: Dataset<f64> = generate(&spec).map_err(config_err)?;
            match input.metric() {
                Metric::Euclidean => euclidean_distances(&data.cloud),
                Metric::Projective => projective_distances(&data.cloud).map_err(config_err)?,
            }
        }
    };
    if !(r_max >= 0.0) {
        return Err(Failure::Config(format!("maximum radius must be nonnegative, got {r_max}")));
    }
    let complex = match kind {
        ComplexKind::Rips => rips_2skeleton(&d, r_max),
        ComplexKind::Witness { landmarks, nu, seed } => {
            let marks = maxmin_landmarks(&d, landmarks, seed).map_err(config_err)?;
            eprintln!("landmarks: {}, covering radius {}", marks.indices.len(), marks.covering_radius);
            witness_2skeleton(&d, &marks, nu, r_max).map_err(config_err)?
        }
    };
    total_order(&complex).map_err(stage(Stage::Complex))
}

fn cmd_generate(args: &GenerateArgs) -> CliResult<()> {
    let kind = args.data.dataset.ok_or_else(|| Failure::Config("--dataset is required".into()))?;
    let data: Dataset<f64> = generate(&args.data.spec(kind)).map_err(config_err)?;
    emit(args.out.as_deref(), &point_cloud_text(&data.cloud))?;
    if let Some(path) = &args.truth {
        match data.parameters_csv() {
            Some(csv) => fs::write(path, csv).map_err(output_err)?,
            None => eprintln!("{kind} has no ground-truth parameters; {} not written", path.display()),
        }
    }
    Ok(())
}

fn cmd_complex(args: &ComplexCmd) -> CliResult<()> {
    let f = build_filtration(&args.input, &args.complex)?;
    eprintln!("{} simplices", f.len());
    emit(args.out.as_deref(), &f.dump())
}

fn cmd_persistence(args: &PersistenceCmd) -> CliResult<()> {
    let filtration = match &args.filtration {
        Some(p) => parse_filtration(&read(p)?).map_err(config_err)?,
        None => build_filtration(&args.input, &args.complex)?,
    };
    PrimeField::new(args.prime).map_err(config_err)?;
    let diagram = persistent_cocycles(filtration, args.prime).map_err(stage(Stage::Persistence))?;
    let cap = diagram.filtration().max_value().unwrap_or(0.0);
    println!("rank,birth,death,length");
    let ranked = diagram.by_capped_length(1);
    for (i, iv) in ranked.iter().enumerate() {
        let death = iv.death.map(|d| d.to_string()).unwrap_or_else(|| "inf".into());
        println!("{i},{},{death},{}", iv.birth, iv.length(cap));
    }
    if let Some(delta) = diagram.suggested_delta() {
        eprintln!("suggested delta: {delta}");
    }
    if let Some(dir) = &args.out {
        let write = |name: String, text: String| fs::write(dir.join(name), text).map_err(output_err);
        fs::create_dir_all(dir).map_err(output_err)?;
        write("diagram.csv".into(), diagram_csv(&diagram))?;
        for (i, iv) in ranked.iter().enumerate() {
            write(format!("cocycle_{i}.txt"), dump_cocycle(&iv.representative, diagram.filtration()))?;
        }
        if args.svg {
            write("diagram.svg".into(), diagram_svg(&diagram, None))?;
        }
    }
    Ok(())
}

fn cmd_coords(args: &CoordsCmd) -> CliResult<()> {
    let filtration: Filtration64 = parse_filtration(&read(&args.filtration)?).map_err(config_err)?;
    let field = PrimeField::new(args.prime).map_err(config_err)?;
    let cocycle = parse_cocycle(&field, &read(&args.cocycle)?, &filtration).map_err(config_err)?;
    let complex = match args.delta {
        Some(d) if d >= 0.0 => filtration.sublevel(d),
        Some(d) => return Err(Failure::Config(format!("delta must be nonnegative, got {d}"))),
        None => filtration,
    };
    let (lift, harmonic, theta) = coordinates_from_cocycle(&cocycle, &field, &complex, &HarmonicOptions::default())?;
    eprintln!(
        "lifted over p={}, {} least-squares iterations, residual {:e}",
        lift.prime_used, harmonic.iterations, harmonic.residual_norm
    );
    emit(args.out.as_deref(), &theta.to_csv())
}

fn cmd_pipeline(args: &PipelineCmd) -> CliResult<()> {
    let (complex, r_max) = args.complex.kind()?;
    let mut config = PipelineConfig::new(args.input.source()?, complex, r_max);
    config.metric = args.input.metric();
    config.primes = vec![args.prime];
    if !args.no_retry {
        config.primes.extend(RETRY_PRIMES.iter().copied().filter(|&p| p != args.prime));
    }
    config.delta = args.delta;
    config.top = args.top;
    config.harmonic.tolerance = args.tolerance;
    if args.interpolate {
        config.extension = Extension::Interpolated;
    }
    if args.bins == 0 {
        return Err(Failure::Config("--bins must be at least 1".into()));
    }
    let out = run_pipeline(&config)?;
    write_outputs(&out, &args.out, args.bins, args.svg)?;
    eprintln!(
        "{} points, {} simplices, p={}, delta {}, {} coordinates written to {}",
        out.point_count,
        out.diagram.filtration().len(),
        out.prime_used,
        out.delta.map(|d| d.to_string()).unwrap_or_else(|| "-".into()),
        out.selected.len(),
        args.out.display()
    );
    Ok(())
}

fn column<'a>(table: &'a [(String, Vec<f64>)], name: &str, path: &Path) -> CliResult<&'a [f64]> {
    table
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, c)| c.as_slice())
        .ok_or_else(|| Failure::Config(format!("{} has no column {name:?}", path.display())))
}

fn read_coordinate(path: &Path) -> CliResult<CircularCoordinate<f64>> {
    let table = parse_columns(&read(path)?).map_err(config_err)?;
    Ok(CircularCoordinate { theta: column(&table, "theta", path)?.to_vec() })
}

fn cmd_analyze(args: &AnalyzeCmd) -> CliResult<()> {
    let theta = read_coordinate(&args.coords)?;
    let counts = histogram(&theta, args.bins).map_err(config_err)?;
    let mut report = String::new();
    if let (Some(path), Some(name)) = (&args.against, &args.column) {
        let table = parse_columns(&read(path)?).map_err(config_err)?;
        let reference = CircularCoordinate { theta: column(&table, name, path)?.to_vec() };
        if reference.len() != theta.len() {
            return Err(Failure::Config(format!("{} rows against {} coordinates", reference.len(), theta.len())));
        }
        let subset: Option<Vec<usize>> = match &args.filter {
            None => None,
            Some(f) => {
                let (col, value) = f.split_once('=').ok_or_else(|| Failure::Config(format!("expected COLUMN=VALUE, got {f:?}")))?;
                let value: f64 = value.parse().map_err(|_| Failure::Config(format!("not a number: {value:?}")))?;
                let c = column(&table, col, path)?;
                Some((0..c.len()).filter(|&i| c[i] == value).collect())
            }
        };
        let ordering = cyclic_ordering(&reference.theta, subset.as_deref());
        let degree = degree_between(&reference, &theta, &ordering).map_err(stage(Stage::Analysis))?;
        let (a, b): (Vec<f64>, Vec<f64>) = ordering.iter().map(|&i| (theta.theta[i], reference.theta[i])).unzip();
        let r = circular_correlation(&a, &[&b], &[degree]);
        report.push_str(&format!("degree,{degree}\ncorrelation,{r:.6}\n"));
    }
    let scatter = match &args.other {
        Some(p) => {
            let other = read_coordinate(p)?;
            if other.len() != theta.len() {
                return Err(Failure::Config(format!("{} and {} coordinates", theta.len(), other.len())));
            }
            Some(scatter_csv(&theta, &other))
        }
        None => None,
    };
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(output_err)?;
            fs::write(dir.join("hist.csv"), histogram_csv(&counts)).map_err(output_err)?;
            if let Some(s) = scatter {
                fs::write(dir.join("scatter.csv"), s).map_err(output_err)?;
            }
            print!("{report}");
        }
        None => {
            print!("{report}");
            print!("{}", histogram_csv(&counts));
            if let Some(s) = scatter {
                print!("{s}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Complex(a) => cmd_complex(a),
        Command::Persistence(a) => cmd_persistence(a),
        Command::Coords(a) => cmd_coords(a),
        Command::Pipeline(a) => cmd_pipeline(a),
        Command::Analyze(a) => cmd_analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Stage(e)) => {
            eprintln!("error: {} stage failed: {}", e.stage, e.source);
            ExitCode::from(3)
        }
    }
}
