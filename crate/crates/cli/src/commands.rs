use crate::config::RunConfig;
use crate::source::load_graph;
use crate::{
    EstimateParamsArgs, EstimationArgs, EvaluateArgs, IngestArgs, Model, ParamArgs, RankArgs, SampleArgs, SizeArgs,
    SweepArgs,
};
use anyhow::{bail, Context, Result};
use degrank::eval::{abs_error, size_sweep, weighted_error, BaSpec, Experiment, ExperimentConfig};
use degrank::graph::{generate_ba, generate_er, load_edge_list, write_binary, write_edge_list};
use degrank::params::{ParamConfig, ParamSource};
use degrank::rank::RankEstimator;
use degrank::sampling::{sample_mhrw, sample_rw, sample_smoothed, sample_uniform};
use degrank::seed::derive;
use degrank::{Graph, NetworkParams, SamplingMethod};
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

const PARAMS_FORMAT: &str = "degrank-params/1";
const RANKS_FORMAT: &str = "degrank-ranks/1";
const SUMMARY_FORMAT: &str = "degrank-summary/1";
const SWEEP_FORMAT: &str = "degrank-sweep/1";
/// Stream used to derive the parameter-pipeline seed from a command seed.
const PARAM_STREAM: u64 = 0x7061_7261;

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn header(w: &mut dyn Write, format: &str, config: &RunConfig, extra: serde_json::Value) -> Result<()> {
    let mut meta = serde_json::json!({ "format": format, "config": config.to_json() });
    if let serde_json::Value::Object(map) = extra {
        meta.as_object_mut().unwrap().extend(map);
    }
    writeln!(w, "# {meta}")?;
    Ok(())
}

fn path_string(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

pub fn generate(model: Model) -> Result<()> {
    let (g, out, mut config) = match model {
        Model::Ba { n, k, seed, out } => {
            let out = out.unwrap_or_else(|| PathBuf::from(format!("ba-{n}-{k}.txt")));
            let mut config = RunConfig::new("generate");
            config.graph = Some(format!("ba:{n}:{k}:{}", seed.seed));
            config.seed = seed.seed;
            (generate_ba(n, k, seed.seed)?, out, config)
        }
        Model::Er { n, avg_deg, seed, out } => {
            let out = out.unwrap_or_else(|| PathBuf::from(format!("er-{n}-{avg_deg}.txt")));
            let mut config = RunConfig::new("generate");
            config.graph = Some(format!("er:{n}:{avg_deg}:{}", seed.seed));
            config.seed = seed.seed;
            (generate_er(n, avg_deg, seed.seed)?, out, config)
        }
    };
    config.output = Some(out.display().to_string());
    let mut w = output(Some(&out))?;
    header(&mut w, "degrank-edges/1", &config, serde_json::Value::Null)?;
    write_edge_list(&g, &mut w)?;
    w.flush()?;
    let cache = out.with_extension("bin");
    write_binary(&g, File::create(&cache).with_context(|| format!("creating {}", cache.display()))?)?;
    print_graph_summary(&g);
    Ok(())
}

fn print_graph_summary(g: &Graph) {
    println!("n={} m={} d_avg={:.4}", g.node_count(), g.edge_count(), g.avg_degree());
}

pub fn ingest(args: IngestArgs) -> Result<()> {
    let file = File::open(&args.input).with_context(|| format!("opening {}", args.input.display()))?;
    let g = load_edge_list(BufReader::new(file)).with_context(|| format!("parsing {}", args.input.display()))?;
    let out = args.out.unwrap_or_else(|| args.input.with_extension("bin"));
    write_binary(&g, File::create(&out).with_context(|| format!("creating {}", out.display()))?)?;
    print_graph_summary(&g);
    Ok(())
}

fn sample_size(g: &Graph, size: &SizeArgs) -> Result<usize> {
    if let Some(s) = size.sample_size {
        if s == 0 {
            bail!("--sample-size must be positive");
        }
        return Ok(s);
    }
    if !(size.fraction > 0.0 && size.fraction <= 1.0) {
        bail!("--fraction must lie in (0, 1], got {}", size.fraction);
    }
    Ok(((size.fraction * g.node_count() as f64).round() as usize).max(1))
}

fn param_config(est: &EstimationArgs, walk_length: usize, seed: u64) -> ParamConfig {
    let mut cfg = ParamConfig::new(walk_length.max(100), derive(seed, PARAM_STREAM), est.network_kind);
    cfg.repetitions = est.repetitions;
    cfg.min_gap_fraction = est.min_gap;
    cfg.min_gap_steps = est.min_gap_steps;
    cfg.smoothing_c = est.smoothing_c;
    cfg.neighbor_collisions = !est.no_neighbor_collisions;
    cfg
}

fn record_estimation(config: &mut RunConfig, est: &EstimationArgs) {
    config.network_kind = est.network_kind;
    config.min_gap_fraction = est.min_gap;
    config.min_gap_steps = est.min_gap_steps;
    config.smoothing_c = est.smoothing_c;
    config.repetitions = est.repetitions;
    config.walk_length = est.walk_length;
    config.neighbor_collisions = !est.no_neighbor_collisions;
}

fn read_params_file(path: &Path) -> Result<NetworkParams> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let inner = value.get("params").cloned().unwrap_or(value);
    serde_json::from_value(inner).with_context(|| format!("{} holds no network parameters", path.display()))
}

/// Resolves `--params` for `exp`; `default_walk` is the walk length used
/// when estimating without an explicit `--walk-length`.
fn resolve_params(
    exp: &Experiment,
    args: &ParamArgs,
    source: &str,
    default_walk: usize,
    seed: u64,
) -> Result<NetworkParams> {
    let walk = args.estimation.walk_length.unwrap_or(default_walk);
    let mut params = match source {
        "actual" => exp.params(ParamSource::Actual, &param_config(&args.estimation, walk, seed))?,
        "estimated" => exp
            .params(ParamSource::Estimated, &param_config(&args.estimation, walk, seed))
            .context("estimating network parameters")?,
        path => read_params_file(Path::new(path))?,
    };
    if let Some(n) = args.size {
        if !(n > 0.0) {
            bail!("--size must be positive");
        }
        params.est_size = n;
    }
    Ok(params)
}

pub fn estimate_params(args: EstimateParamsArgs) -> Result<()> {
    let g = load_graph(&args.graph.graph, args.seed.seed)?;
    let walk = args.estimation.walk_length.unwrap_or(sample_size(&g, &args.size)?);
    let exp = Experiment::new(&g);
    let params = exp
        .params(ParamSource::Estimated, &param_config(&args.estimation, walk, args.seed.seed))
        .context("estimating network parameters")?;

    let mut config = RunConfig::new("estimate-params");
    config.graph = Some(args.graph.graph.clone());
    config.sample_fraction = args.size.fraction;
    config.sample_size = args.size.sample_size;
    config.seed = args.seed.seed;
    config.output = path_string(&args.out);
    record_estimation(&mut config, &args.estimation);
    let doc = serde_json::json!({ "format": PARAMS_FORMAT, "config": config.to_json(), "params": params });
    let mut w = output(args.out.as_deref())?;
    writeln!(w, "{}", serde_json::to_string_pretty(&doc)?)?;
    w.flush()?;
    if args.out.is_some() {
        print!("{}", params.to_key_values());
    }
    Ok(())
}

pub fn sample(args: SampleArgs) -> Result<()> {
    let g = load_graph(&args.graph.graph, args.seed.seed)?;
    let s = sample_size(&g, &args.size)?;
    let start = match args.start {
        Some(id) => Some(g.node_index(id).with_context(|| format!("unknown node id {id}"))?),
        None => None,
    };
    let seed = args.seed.seed;
    let sample = match args.method {
        SamplingMethod::Uniform => sample_uniform(&g, s, seed)?,
        SamplingMethod::Rw => sample_rw(&g, s, seed, start)?,
        SamplingMethod::Mhrw => sample_mhrw(&g, s, seed, start)?,
        SamplingMethod::Smoothed => sample_smoothed(&g, s, args.c, seed, start)?,
    };
    let mut config = RunConfig::new("sample");
    config.graph = Some(args.graph.graph.clone());
    config.sample_fraction = args.size.fraction;
    config.sample_size = Some(s);
    config.seed = seed;
    config.smoothing_c = (args.method == SamplingMethod::Smoothed).then_some(args.c);
    config.output = path_string(&args.out);
    let mut w = output(args.out.as_deref())?;
    sample.write_csv_with_config(&mut w, &config.to_json())?;
    w.flush()?;
    Ok(())
}

fn read_batch(path: &Path) -> Result<Vec<u64>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut ids = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let first = line.split([',', ' ', '\t']).find(|t| !t.is_empty()).unwrap_or("");
        if first.is_empty() || first.starts_with('#') {
            continue;
        }
        match first.parse::<u64>() {
            Ok(id) => ids.push(id),
            Err(_) if idx == 0 => continue,
            Err(_) => bail!("{}:{}: invalid node id {first:?}", path.display(), idx + 1),
        }
    }
    Ok(ids)
}

pub fn rank(args: RankArgs) -> Result<()> {
    let g = load_graph(&args.graph.graph, args.seed.seed)?;
    let exp = Experiment::new(&g);
    let s = sample_size(&g, &args.size)?;
    let seed = args.seed.seed;
    let params = resolve_params(&exp, &args.params, &args.params.params, s, seed)?;
    let sample = exp.draw_sample_sized(args.method, s, seed)?;
    let estimator = RankEstimator::new(args.method, &params, sample.as_ref())?;

    let mut nodes = args.node.clone();
    if let Some(batch) = &args.batch {
        nodes.extend(read_batch(batch)?);
    }
    // (original node id, degree) queries; degree-only queries carry no id.
    let mut queries: Vec<(Option<u64>, usize)> = args.degree.iter().map(|&d| (None, d)).collect();
    for id in nodes {
        let u = g.node_index(id).with_context(|| format!("unknown node id {id}"))?;
        queries.push((Some(id), g.degree(u)));
    }
    if queries.is_empty() {
        queries = g.distinct_degrees().into_iter().map(|d| (None, d)).collect();
    }

    let mut config = RunConfig::new("rank");
    config.graph = Some(args.graph.graph.clone());
    config.methods = vec![args.method];
    config.sample_fraction = args.size.fraction;
    config.sample_size = Some(s);
    config.seed = seed;
    config.params = args.params.params.clone();
    config.size_override = args.params.size;
    config.round = args.round;
    config.output = path_string(&args.out);
    record_estimation(&mut config, &args.params.estimation);

    let mut w = output(args.out.as_deref())?;
    header(&mut w, RANKS_FORMAT, &config, serde_json::json!({ "params": params }))?;
    let mut columns = String::from("node_id,degree,est_rank");
    if args.with_truth {
        columns.push_str(",act_rank,abs_err,wtd_err");
    }
    writeln!(w, "{columns}")?;
    let n = g.node_count();
    for (id, d) in queries {
        let mut est = estimator.rank(d)?;
        if args.round {
            est = est.round();
        }
        let id = id.map(|i| i.to_string()).unwrap_or_default();
        write!(w, "{id},{d},{est}")?;
        if args.with_truth {
            let act = exp.ranks().rank_for_degree(d);
            write!(w, ",{act},{},{}", abs_error(est, act), weighted_error(est, act, n)?)?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

pub fn evaluate(args: EvaluateArgs) -> Result<()> {
    if args.methods.is_empty() {
        bail!("no methods given");
    }
    let g = load_graph(&args.graph.graph, args.seed.seed)?;
    let exp = Experiment::new(&g);
    let cfg = ExperimentConfig { sample_fraction: args.fraction, trials: args.trials, seed: args.seed.seed };
    let walk = exp.sample_size(args.fraction)?;
    let sources: Vec<&str> = match args.params.params.as_str() {
        "both" => vec!["actual", "estimated"],
        other => vec![other],
    };

    let mut config = RunConfig::new("evaluate");
    config.graph = Some(args.graph.graph.clone());
    config.methods = args.methods.clone();
    config.sample_fraction = args.fraction;
    config.trials = args.trials;
    config.seed = args.seed.seed;
    config.params = args.params.params.clone();
    config.size_override = args.params.size;
    config.output = Some(args.out_dir.display().to_string());
    record_estimation(&mut config, &args.params.estimation);

    fs::create_dir_all(&args.out_dir).with_context(|| format!("creating {}", args.out_dir.display()))?;
    let mut summaries = Vec::new();
    for source in sources {
        let params = resolve_params(&exp, &args.params, source, walk, args.seed.seed)?;
        let tag = match source {
            "actual" | "estimated" => source,
            _ => "file",
        };
        for &method in &args.methods {
            let report = exp.run(method, &params, &cfg).with_context(|| format!("evaluating {method}"))?;
            let path = args.out_dir.join(format!("report-{method}-{tag}.csv"));
            let meta = serde_json::json!({ "run": config.to_json(), "params": params });
            let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
            report.write_csv(&mut w, &meta)?;
            w.flush()?;
            summaries.push((method, tag, report));
        }
    }

    let summary_path = args.out_dir.join("summary.csv");
    let mut w = output(Some(&summary_path))?;
    header(&mut w, SUMMARY_FORMAT, &config, serde_json::Value::Null)?;
    writeln!(w, "method,params,paae,avg_wtd")?;
    println!("method,params,paae,avg_wtd");
    for (method, tag, report) in &summaries {
        let row = format!("{method},{tag},{},{}", report.paae, report.avg_wtd);
        writeln!(w, "{row}")?;
        println!("{row}");
    }
    w.flush()?;

    let json = serde_json::json!({
        "format": SUMMARY_FORMAT,
        "config": config.to_json(),
        "results": summaries.iter().map(|(_, tag, r)| {
            let mut s = r.summary_json();
            s["params"] = serde_json::json!(tag);
            s
        }).collect::<Vec<_>>(),
    });
    fs::write(args.out_dir.join("summary.json"), serde_json::to_string_pretty(&json)? + "\n")?;
    Ok(())
}

pub fn sweep(args: SweepArgs) -> Result<()> {
    let source = match args.params.as_str() {
        "actual" => ParamSource::Actual,
        "estimated" => ParamSource::Estimated,
        other => bail!("--params must be actual or estimated for a sweep, got {other:?}"),
    };
    let specs: Vec<BaSpec> = args.sizes.iter().map(|&n| BaSpec { n, k: args.k, seed: args.seed.seed }).collect();
    let cfg = ExperimentConfig { sample_fraction: args.fraction, trials: args.trials, seed: args.seed.seed };
    let rows = size_sweep(&specs, &args.methods, source, &cfg)?;

    let mut config = RunConfig::new("sweep");
    config.graph =
        Some(format!("ba:{}:{}", args.sizes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","), args.k));
    config.methods = args.methods.clone();
    config.sample_fraction = args.fraction;
    config.trials = args.trials;
    config.seed = args.seed.seed;
    config.params = args.params.clone();
    config.output = path_string(&args.out);
    let mut w = output(args.out.as_deref())?;
    header(&mut w, SWEEP_FORMAT, &config, serde_json::Value::Null)?;
    writeln!(w, "n,method,paae,avg_wtd")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.n, r.method, r.paae, r.avg_wtd)?;
    }
    w.flush()?;
    Ok(())
}
