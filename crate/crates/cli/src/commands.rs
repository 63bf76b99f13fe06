use std::fs;
use std::path::Path;

use graphmean::align::{SolverConfig, EXACT_SAFETY_CAP};
use graphmean::data::{self, Dataset, Family, GeneratorSpec, Provenance};
use graphmean::eval::{self, BenchConfig, Metric, PerformanceTable, Protocol};
use graphmean::means::{self, Algorithm, InitPolicy, MeanConfig, MeanEstimate, OrderPolicy, StepSize, SGG_STEP_GRID};
use graphmean::symmetry::{degree_of_asymmetry, SymmetryOptions, SymmetryReport, DEFAULT_SYMMETRY_CAP};
use graphmean::{Error, Result};
use serde::Serialize;

use crate::args::*;
use crate::input::{self, io_error};
use crate::CliError;

/// Runs a parsed command line and returns the human summary.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let solver = solver(&cli.global)?;
    let out = &cli.global.output_dir;
    fs::create_dir_all(out).map_err(|e| io_error(out, e))?;
    write_json(&out.join("config.json"), &ConfigEcho { version: env!("CARGO_PKG_VERSION"), solver: &solver, cli })?;
    match &cli.command {
        Command::Mean(a) => mean(&cli.global, solver, a),
        Command::Bench(a) => bench(&cli.global, solver, a),
        Command::Classify(a) => classify(&cli.global, solver, a),
        Command::Gen(a) => gen(&cli.global, a),
        Command::Inspect(a) => inspect(&cli.global, solver, a),
    }
}

#[derive(Serialize)]
struct ConfigEcho<'a> {
    version: &'a str,
    solver: &'a SolverConfig,
    #[serde(flatten)]
    cli: &'a Cli,
}

fn solver(g: &GlobalArgs) -> Result<SolverConfig, CliError> {
    if g.solver_exact_threshold > EXACT_SAFETY_CAP {
        return Err(Error::UnsupportedSize { order: g.solver_exact_threshold, cap: EXACT_SAFETY_CAP }.into());
    }
    let cfg = SolverConfig {
        exact_threshold: g.solver_exact_threshold,
        restarts: g.restarts,
        seed: g.seed,
        ..SolverConfig::default()
    };
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn usage(e: Error) -> CliError {
    match e {
        Error::InvalidArgument(m) => CliError::Usage(m),
        other => other.into(),
    }
}

fn step_size(text: Option<&str>) -> Result<Option<StepSize>, CliError> {
    let Some(text) = text else { return Ok(None) };
    if text.eq_ignore_ascii_case("harmonic") {
        return Ok(Some(StepSize::Harmonic));
    }
    text.parse::<f64>()
        .map(|eta| Some(StepSize::Constant(eta)))
        .map_err(|_| CliError::usage(format!("step size must be a number or `harmonic`, got `{text}`")))
}

fn mean_config(
    g: &GlobalArgs,
    solver: SolverConfig,
    a: &AlgorithmArgs,
    step: Option<StepSize>,
) -> Result<MeanConfig<f64>, CliError> {
    let cfg = MeanConfig {
        solver,
        seed: g.seed,
        waiting_time: a.waiting_time,
        max_iterations: a.max_iterations,
        improvement_tol: a.improvement_tol,
        step_size: step,
        order_policy: match a.order {
            Order::Shuffled => OrderPolicy::Shuffled,
            Order::AsGiven => OrderPolicy::AsGiven,
            Order::Increasing => OrderPolicy::IncreasingFromReference,
        },
        init_policy: match a.init {
            Init::Random => InitPolicy::RandomSampleGraph,
            Init::Medoid => InitPolicy::Medoid,
        },
    };
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_error(path, e).into())
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse { location: path.display().to_string(), message: e.to_string() })?;
    text.push('\n');
    write_text(path, &text)
}

#[derive(Serialize)]
struct MeanReport<'a> {
    dataset: &'a str,
    sample_size: usize,
    dispersion: f64,
    mean_order: usize,
    #[serde(flatten)]
    estimate: &'a MeanEstimate<f64>,
}

fn mean(g: &GlobalArgs, solver: SolverConfig, a: &MeanArgs) -> Result<String, CliError> {
    let step = step_size(a.step_size.as_deref())?;
    if a.algorithm == Algorithm::Sgg && step.is_none() {
        return Err(CliError::usage("SGG needs --step-size"));
    }
    let cfg = mean_config(g, solver, &a.algorithm_args, step)?;
    let dataset = input::load(&a.input, &a.input_args)?;
    let sample = match &a.class {
        None => dataset.sample.clone(),
        Some(class) => {
            let classes = dataset.classes()?;
            let idx = classes.get(class).ok_or_else(|| Error::InvalidArgument(format!("no graphs labelled `{class}`")))?;
            dataset.sample.subset(idx)?
        }
    };
    let est = means::run(a.algorithm, &sample, &cfg)?;
    data::write_graph(g.output_dir.join("mean.json"), &est.mean)?;
    let report = MeanReport {
        dataset: &dataset.name,
        sample_size: sample.len(),
        dispersion: est.dispersion(),
        mean_order: est.mean.order(),
        estimate: &est,
    };
    write_json(&g.output_dir.join("report.json"), &report)?;
    Ok(format!(
        "{}: {} graphs, dispersion {:.6}, {} iterations, {} matchings -> {}",
        a.algorithm,
        sample.len(),
        est.dispersion(),
        est.iterations,
        est.total_matchings(),
        g.output_dir.display()
    ))
}

fn bench(g: &GlobalArgs, solver: SolverConfig, a: &BenchArgs) -> Result<String, CliError> {
    if a.trials < 1 {
        return Err(CliError::usage("--trials must be at least 1"));
    }
    if a.size_min < 1 || a.size_min > a.size_max {
        return Err(CliError::usage("sample sizes must satisfy 1 <= size-min <= size-max"));
    }
    if a.sgg_grid.iter().any(|&eta| !(eta > 0.0 && eta.is_finite())) {
        return Err(CliError::usage("SGG step sizes must be positive"));
    }
    let algorithms = if a.algorithms.is_empty() { Algorithm::ALL.to_vec() } else { a.algorithms.clone() };
    let config = BenchConfig {
        mean: mean_config(g, solver, &a.algorithm_args, None)?,
        protocol: match a.protocol {
            ProtocolKind::Random => Protocol::RandomSamples { count: a.trials, size_range: (a.size_min, a.size_max) },
            ProtocolKind::Class => Protocol::ClassSamples { replicates: a.trials },
        },
        sgg_grid: if a.sgg_grid.is_empty() { SGG_STEP_GRID.to_vec() } else { a.sgg_grid.clone() },
        eta_selection_trials: a.eta_trials.max(1),
    };
    let datasets = a
        .datasets
        .iter()
        .map(|p| input::load(p, &a.input_args))
        .collect::<Result<Vec<Dataset>, CliError>>()?;

    let records = eval::benchmark(&datasets, &algorithms, &config)?;
    let metric = match a.metric {
        MetricKind::Dispersion => Metric::Dispersion,
        MetricKind::Iterations => Metric::Iterations,
    };
    let table = PerformanceTable::from_records(&records, metric)?;
    let profiles = eval::performance_profiles(&table);
    let pairwise = eval::pairwise_comparison(&table);

    let out = &g.output_dir;
    write_text(&out.join("records.csv"), &eval::records_csv(&records)?)?;
    write_text(&out.join("profile.csv"), &eval::profiles_csv(&profiles))?;
    write_text(&out.join("pairwise.csv"), &pairwise.to_csv())?;

    let mut lines = vec![format!("{} runs on {} samples", records.len(), table.samples.len())];
    for (i, alg) in pairwise.algorithms.iter().enumerate() {
        lines.push(format!("{alg}: best on {} samples, {:.1}% pairwise wins", profiles[i].wins, pairwise.total[i]));
    }
    Ok(lines.join("\n"))
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    condense: String,
    train_size: usize,
    reference_size: usize,
    test_size: usize,
    #[serde(flatten)]
    result: &'a eval::Classification,
}

fn classify(g: &GlobalArgs, solver: SolverConfig, a: &ClassifyArgs) -> Result<String, CliError> {
    let condense = if a.condense.eq_ignore_ascii_case("none") {
        None
    } else {
        Some(a.condense.parse::<Algorithm>().map_err(usage)?)
    };
    let step = step_size(a.step_size.as_deref())?;
    if condense == Some(Algorithm::Sgg) && step.is_none() {
        return Err(CliError::usage("SGG needs --step-size"));
    }
    let cfg = mean_config(g, solver.clone(), &a.algorithm_args, step)?;
    let train = input::load(&a.train, &a.input_args)?;
    let test = input::load(&a.test, &a.input_args)?;

    let reference = match condense {
        None => train.sample.clone(),
        Some(alg) => {
            let protos = eval::condensed_prototypes(&train.sample, alg, &cfg)?;
            let sample = eval::prototype_sample(&protos)?;
            let provenance = Provenance::new(format!("{alg} class means")).with("train", &train.name);
            let dataset = Dataset::new(format!("{}-{alg}", train.name), sample.clone(), None, provenance)?;
            data::write_dataset(g.output_dir.join("prototypes.json"), &dataset)?;
            sample
        }
    };
    let result = eval::nn_classify(&reference, &test.sample, &solver)?;
    let report = ClassifyReport {
        condense: condense.map_or("none".to_string(), |a| a.to_string()),
        train_size: train.len(),
        reference_size: reference.len(),
        test_size: test.len(),
        result: &result,
    };
    write_json(&g.output_dir.join("classification.json"), &report)?;
    Ok(format!(
        "accuracy {:.4} on {} test graphs against {} references",
        result.accuracy,
        test.len(),
        reference.len()
    ))
}

fn gen(g: &GlobalArgs, a: &GenArgs) -> Result<String, CliError> {
    if a.file.is_empty() || Path::new(&a.file).components().count() != 1 {
        return Err(CliError::usage("--file must be a plain file name"));
    }
    let prototype = match &a.prototype {
        Some(p) => Some(data::graph_from_json(&fs::read_to_string(p).map_err(|e| io_error(p, e))?)?),
        None => None,
    };
    let spec = GeneratorSpec {
        family: match a.family {
            FamilyKind::LetterLike => Family::LetterLike,
            FamilyKind::RandomUniform => Family::RandomUniform,
        },
        prototype,
        letters: a.letters.clone(),
        noise_sigma: a.noise_sigma,
        structural_noise: a.structural_noise,
        count: a.count,
        seed: g.seed,
        order_range: (a.order_min, a.order_max),
        density: a.density,
        attr_dim: a.attr_dim,
    };
    spec.validate().map_err(usage)?;
    let mut dataset = data::generate(&spec)?;
    if let Some(name) = &a.name {
        dataset.name = name.clone();
    }
    let path = g.output_dir.join(&a.file);
    data::write_dataset(&path, &dataset)?;
    Ok(format!("{} graphs -> {}", dataset.len(), path.display()))
}

#[derive(Serialize)]
struct GraphSummary {
    index: usize,
    label: Option<String>,
    order: usize,
    attr_dim: usize,
    directed: bool,
    edges: usize,
    /// Absent above the symmetry order limit.
    symmetry: Option<SymmetryReport<f64>>,
}

#[derive(Serialize)]
struct InspectReport {
    name: String,
    size: usize,
    epsilon: f64,
    medoid: usize,
    /// `sqrt` of the sum of squared distances to the medoid.
    medoid_dispersion: f64,
    graphs: Vec<GraphSummary>,
}

fn inspect(g: &GlobalArgs, solver: SolverConfig, a: &InspectArgs) -> Result<String, CliError> {
    if a.symmetry_max_order > DEFAULT_SYMMETRY_CAP {
        return Err(Error::UnsupportedSize { order: a.symmetry_max_order, cap: DEFAULT_SYMMETRY_CAP }.into());
    }
    if !(a.epsilon >= 0.0) {
        return Err(CliError::usage("--epsilon must be nonnegative"));
    }
    let dataset = input::load(&a.input, &a.input_args)?;
    let labels = dataset.sample.labels();
    let opts = SymmetryOptions::with_cap(a.symmetry_max_order);
    let graphs = dataset
        .sample
        .graphs()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let symmetry = (x.order() <= a.symmetry_max_order).then(|| degree_of_asymmetry(x, &opts)).transpose()?;
            Ok(GraphSummary {
                index: i,
                label: labels.map(|l| l[i].clone()),
                order: x.order(),
                attr_dim: x.attr_dim(),
                directed: x.is_directed(),
                edges: x.edge_set(a.epsilon).len(),
                symmetry,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (medoid, sum, _) = means::medoid_index(&dataset.sample, &solver)?;
    let report = InspectReport {
        name: dataset.name.clone(),
        size: dataset.len(),
        epsilon: a.epsilon,
        medoid,
        medoid_dispersion: sum.sqrt(),
        graphs,
    };
    write_json(&g.output_dir.join("inspect.json"), &report)?;

    let mut lines = vec![format!(
        "{}: {} graphs, medoid #{} with dispersion {:.6}",
        report.name, report.size, report.medoid, report.medoid_dispersion
    )];
    for s in report.graphs.iter().take(20) {
        let sym = match &s.symmetry {
            Some(r) if r.asymmetric => format!("asymmetric, chi {:.6}", r.chi),
            Some(_) => "symmetric".to_string(),
            None => "symmetry not checked".to_string(),
        };
        lines.push(format!("#{}: order {}, attr_dim {}, {} edges, {sym}", s.index, s.order, s.attr_dim, s.edges));
    }
    if report.graphs.len() > 20 {
        lines.push(format!("... {} more in inspect.json", report.graphs.len() - 20));
    }
    Ok(lines.join("\n"))
}
