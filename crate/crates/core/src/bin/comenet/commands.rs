use std::fmt;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use comenet::basis::BasisConfig;
use comenet::bench::{run_scaling, ScalingPlan};
use comenet::completeness::{
    compare_graphs, compare_tuples, reconstruct_with_tolerance, round_trip, Verdict, DISCRIMINATION_TOLERANCE,
    RECONSTRUCTION_TOLERANCE,
};
use comenet::fixtures::{butane_conformer, fixture, random_connected_graph, FIXTURES};
use comenet::geometry::{transform, TupleSet};
use comenet::graph::{apply_se3, build_radius_graph, random_se3, Graph3D};
use comenet::io::{
    format_xyz, parse_xyz, topology_from_json, topology_to_json, tuples_from_csv, tuples_from_json, tuples_to_csv,
    tuples_to_json, XyzFrame,
};
use comenet::mpnet::{MiniNet, MiniNetConfig};
use comenet::Error;
use serde_json::json;

use crate::{
    BenchArgs, Cli, Command, ConformersArgs, FeaturizeArgs, Format, InvarianceArgs, PredictArgs, ReconstructArgs,
};

pub const DEFAULT_FILE_CUTOFF: f64 = 5.0;
const INVARIANCE_TOLERANCE: f64 = 1e-9;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Parse { .. } | Error::Json(_) => 3,
            Error::InvalidParameter { .. } => 2,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: message.into(),
    }
}

/// Attaches the file name to IO and parse errors.
fn in_file(path: &Path) -> impl FnOnce(Error) -> CliError + '_ {
    move |e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    }
}

pub fn exit_code(e: &CliError) -> u8 {
    e.code
}

type CliResult<T = ExitCode> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| in_file(path)(Error::Io(e)))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| in_file(path)(Error::Io(e)))
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_positive(name: &str, value: Option<f64>) -> CliResult<()> {
    match value {
        Some(v) if !(v > 0.0 && v.is_finite()) => Err(usage(format!("--{name} must be positive and finite, got {v}"))),
        _ => Ok(()),
    }
}

fn read_frames(path: &Path) -> CliResult<Vec<XyzFrame>> {
    parse_xyz(&read(path)?).map_err(in_file(path))
}

fn graph_from_frame(frame: XyzFrame, cutoff: f64) -> CliResult<Graph3D> {
    Ok(build_radius_graph(frame.species, frame.positions, cutoff)?)
}

fn load_graph(path: &Path, cutoff: f64) -> CliResult<Graph3D> {
    let frame = read_frames(path)?.remove(0);
    graph_from_frame(frame, cutoff)
}

pub fn run(cli: &Cli) -> CliResult {
    check_positive("cutoff", cli.cutoff)?;
    check_positive("tolerance", cli.tolerance)?;
    match &cli.command {
        Command::Featurize(args) => featurize(cli, args),
        Command::Reconstruct(args) => reconstruct(cli, args),
        Command::Invariance(args) => invariance(cli, args),
        Command::Conformers(args) => conformers(cli, args),
        Command::Predict(args) => predict(cli, args),
        Command::Bench(args) => bench(cli, args),
    }
}

fn tuple_text(ts: &TupleSet, format: Format) -> CliResult<String> {
    Ok(match format {
        Format::Csv => tuples_to_csv(&ts.tuples),
        Format::Json => tuples_to_json(&ts.tuples)? + "\n",
    })
}

fn featurize(cli: &Cli, args: &FeaturizeArgs) -> CliResult {
    let cutoff = cli.cutoff.unwrap_or(DEFAULT_FILE_CUTOFF);
    let basis = if args.basis.is_some() || args.beta_table.is_some() {
        Some(BasisConfig::new(cutoff, args.num_radial, args.num_spherical)?)
    } else {
        None
    };
    let g = load_graph(&args.input, cutoff)?;
    let ts = transform(&g)?;
    emit(args.output.as_deref(), &tuple_text(&ts, cli.format)?)?;
    if let Some(path) = &args.topology_out {
        write(path, &(topology_to_json(&g.topology())? + "\n"))?;
    }
    if let Some(cfg) = &basis {
        if let Some(path) = &args.basis {
            let features = cfg.features_for(&ts)?;
            write(path, &(serde_json::to_string(&features).map_err(Error::from)? + "\n"))?;
        }
        if let Some(path) = &args.beta_table {
            write(path, &cfg.roots_csv())?;
        }
    }
    if !cli.quiet {
        eprintln!(
            "n={} m={} degenerate={}",
            g.num_nodes(),
            ts.len(),
            ts.degenerate_count()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn load_tuples(path: &Path, format: Format) -> CliResult<Vec<comenet::EdgeTuple>> {
    let text = read(path)?;
    let json = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => true,
        Some("csv") => false,
        _ => format == Format::Json,
    };
    let parsed = if json {
        tuples_from_json(&text)
    } else {
        tuples_from_csv(&text)
    };
    parsed.map_err(in_file(path))
}

fn reconstruct(cli: &Cli, args: &ReconstructArgs) -> CliResult {
    let tolerance = cli.tolerance.unwrap_or(RECONSTRUCTION_TOLERANCE);
    let topology = topology_from_json(&read(&args.topology)?).map_err(in_file(&args.topology))?;
    let tuples = load_tuples(&args.tuples, cli.format)?;
    let ts = TupleSet::from_tuples(&topology, tuples)?;
    let mut result = reconstruct_with_tolerance(&ts, &topology, tolerance)?;

    let mut alignment = None;
    let mut positions = result.positions.clone();
    if let Some(path) = &args.reference {
        let frame = read_frames(path)?.remove(0);
        if frame.species != topology.species {
            return Err(Error::TopologyMismatch(format!("{} has different species", path.display())).into());
        }
        let report = result.align_to(&frame.positions)?;
        positions = positions.iter().map(|p| report.apply(p)).collect();
        alignment = Some(report);
    }
    let frame = XyzFrame {
        comment: "reconstructed".into(),
        species: topology.species.clone(),
        positions,
    };
    emit(args.output.as_deref(), &format_xyz(&frame))?;

    let report = json!({
        "num_nodes": topology.num_nodes(),
        "trivial": result.trivial,
        "complete": result.is_complete(),
        "rmsd": result.rmsd,
        "order": result.order,
        "placement_case": result.placement_case,
        "alignment": alignment.as_ref().map(|a| json!({
            "rotation": a.rotation_rows(),
            "translation": [a.translation.x, a.translation.y, a.translation.z],
            "reflection_used": a.reflection_used,
        })),
    });
    if let Some(path) = &args.report {
        write(
            path,
            &(serde_json::to_string_pretty(&report).map_err(Error::from)? + "\n"),
        )?;
    }
    let pass = result.is_complete() && result.rmsd.is_none_or(|r| r < tolerance);
    if !cli.quiet {
        let rmsd = result.rmsd.map_or("n/a".to_string(), |r| format!("{r:.3e}"));
        eprintln!(
            "{} placed={} rmsd={rmsd}{}",
            if pass { "PASS" } else { "FAIL" },
            result.order.len(),
            if result.trivial {
                " (trivial: fewer than three nodes)"
            } else {
                ""
            }
        );
    }
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn invariance(cli: &Cli, args: &InvarianceArgs) -> CliResult {
    let tolerance = cli.tolerance.unwrap_or(INVARIANCE_TOLERANCE);
    let mut graphs: Vec<(String, Graph3D)> = Vec::new();
    if let Some(spec) = &args.random {
        let n: usize = spec[0]
            .parse()
            .map_err(|_| usage(format!("--random: invalid N `{}`", spec[0])))?;
        let k: f64 = spec[1]
            .parse()
            .map_err(|_| usage(format!("--random: invalid K `{}`", spec[1])))?;
        let seed: u64 = spec[2]
            .parse()
            .map_err(|_| usage(format!("--random: invalid SEED `{}`", spec[2])))?;
        graphs.push((
            format!("random(n={n}, k={k}, seed={seed})"),
            random_connected_graph(n, k, seed)?,
        ));
    } else if let Some(path) = &args.input {
        let g = load_graph(path, cli.cutoff.unwrap_or(DEFAULT_FILE_CUTOFF))?;
        graphs.push((path.display().to_string(), g));
    } else {
        let name = args.fixture.as_deref().unwrap_or("all");
        let chosen: Vec<_> = if name == "all" {
            FIXTURES.iter().collect()
        } else {
            vec![fixture(name).ok_or_else(|| usage(format!("unknown fixture `{name}`")))?]
        };
        for f in chosen {
            let frame = f.frame();
            graphs.push((
                f.name.to_string(),
                graph_from_frame(frame, cli.cutoff.unwrap_or(f.cutoff))?,
            ));
        }
    }

    let net = MiniNet::new(MiniNetConfig {
        num_layers: 2,
        hidden: 16,
        seed: cli.seed,
        ..MiniNetConfig::default()
    })?;
    let mut all_pass = true;
    let mut rows = Vec::new();
    for (name, g) in &graphs {
        g.ensure_connected()?;
        let base = transform(g)?;
        let prediction = net.forward(g)?;
        let mut tuple_dev: f64 = 0.0;
        let mut forward_dev: f64 = 0.0;
        for t in 0..args.trials {
            let moved = apply_se3(g, &random_se3(cli.seed.wrapping_add(t)))?;
            let c = compare_tuples(&base, &transform(&moved)?, true, tolerance)?;
            tuple_dev = tuple_dev.max(c.max_deviation);
            forward_dev = forward_dev.max((net.forward(&moved)? - prediction).abs());
        }
        let rmsd = round_trip(g)?.rmsd.unwrap_or(f64::NAN);
        let pass = tuple_dev < tolerance && forward_dev < tolerance && rmsd < RECONSTRUCTION_TOLERANCE;
        all_pass &= pass;
        let mirror = if args.mirror {
            Some(compare_graphs(g, &g.mirrored(), true, DISCRIMINATION_TOLERANCE)?.verdict)
        } else {
            None
        };
        rows.push((name.clone(), pass, tuple_dev, forward_dev, rmsd, mirror));
    }

    match cli.format {
        Format::Json => {
            let out: Vec<_> = rows
                .iter()
                .map(|(name, pass, td, fd, rmsd, mirror)| {
                    json!({"name": name, "pass": pass, "max_tuple_deviation": td,
                           "max_forward_deviation": fd, "rmsd": rmsd, "mirror": mirror})
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&out).map_err(Error::from)?);
        }
        Format::Csv if !cli.quiet => {
            for (name, pass, td, fd, rmsd, mirror) in &rows {
                let mirror = mirror.map(|v| format!(" mirror={v}")).unwrap_or_default();
                println!(
                    "{} {name}: max tuple deviation {td:.3e}, max forward deviation {fd:.3e}, round-trip rmsd {rmsd:.3e}{mirror}",
                    if *pass { "PASS" } else { "FAIL" }
                );
            }
        }
        Format::Csv => {}
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn conformers(cli: &Cli, args: &ConformersArgs) -> CliResult {
    let use_tau = !args.no_tau;
    let (labels, graphs): (Vec<String>, Vec<Graph3D>) = match &args.input {
        Some(path) => {
            let cutoff = cli.cutoff.unwrap_or(DEFAULT_FILE_CUTOFF);
            let frames = read_frames(path)?;
            let mut labels = Vec::new();
            let mut graphs = Vec::new();
            for (k, frame) in frames.into_iter().enumerate() {
                labels.push(format!("frame{k}"));
                graphs.push(graph_from_frame(frame, cutoff)?);
            }
            (labels, graphs)
        }
        None => args
            .angles
            .iter()
            .map(|&a| (format!("{a}°"), butane_conformer(a)))
            .unzip(),
    };
    let tolerance = cli.tolerance.unwrap_or(DISCRIMINATION_TOLERANCE);
    let mut matrix = vec![vec![Verdict::Equivalent; graphs.len()]; graphs.len()];
    for a in 0..graphs.len() {
        for b in 0..graphs.len() {
            matrix[a][b] = compare_graphs(&graphs[a], &graphs[b], use_tau, tolerance)?.verdict;
        }
    }
    match cli.format {
        Format::Json => {
            let out = json!({"use_tau": use_tau, "labels": labels, "matrix": matrix});
            println!("{}", serde_json::to_string_pretty(&out).map_err(Error::from)?);
        }
        Format::Csv => {
            if !cli.quiet {
                println!(
                    "# discrimination {} rotation angles",
                    if use_tau { "with" } else { "without" }
                );
            }
            println!(",{}", labels.join(","));
            for (label, row) in labels.iter().zip(&matrix) {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                println!("{label},{}", cells.join(","));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn predict(cli: &Cli, args: &PredictArgs) -> CliResult {
    let cfg = MiniNetConfig {
        num_layers: args.layers,
        hidden: args.hidden,
        num_radial: args.num_radial,
        num_spherical: args.num_spherical,
        seed: cli.seed,
        use_tau: !args.no_tau,
    };
    let net = MiniNet::new(cfg)?;
    let g = load_graph(&args.input, cli.cutoff.unwrap_or(DEFAULT_FILE_CUTOFF))?;
    let y = net.forward(&g)?;
    match cli.format {
        Format::Json => println!("{}", json!({"prediction": y, "num_nodes": g.num_nodes()})),
        Format::Csv => println!("{y:.17e}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn bench(cli: &Cli, args: &BenchArgs) -> CliResult {
    let plan = ScalingPlan {
        generator: args.generator,
        n_values: args.n_values.clone(),
        k_fixed: args.k_fixed,
        k_values: args.k_values.clone(),
        n_fixed: args.n_fixed,
        seed: cli.seed,
        repetitions: args.repetitions,
        timing: !args.no_timing,
        parallel_counts: args.parallel_counts,
    };
    let report = run_scaling(&plan)?;
    let json_text = report.to_json()? + "\n";
    if let Some(path) = &args.output {
        write(path, &json_text)?;
    }
    if let Some(path) = &args.csv {
        write(path, &report.samples_csv())?;
    }
    match cli.format {
        Format::Json => print!("{json_text}"),
        Format::Csv if !cli.quiet => print!("{}", report.table()),
        Format::Csv => {}
    }
    Ok(ExitCode::SUCCESS)
}
