//! Command-line interface for the colored-graph toolkit: validation and
//! topology of single graphs, dipole reduction, bracket computation, and
//! the melonic sampling/exponent pipelines.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use melonomicon_core::{
    algebra, bubbles, dimensions, dipoles, homology, jackets, melonic, ColoredGraph,
};

#[derive(Debug)]
enum Failure {
    Validation(String),
    Io(String),
    Config(String),
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Validation(_) => "validation",
            Failure::Io(_) => "io",
            Failure::Config(_) => "config",
        }
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Io(_) => 3,
            Failure::Config(_) => 4,
        }
    }

    fn detail(&self) -> &str {
        match self {
            Failure::Validation(d) | Failure::Io(d) | Failure::Config(d) => d,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "melonomicon",
    version,
    about = "Edge-colored graph toolkit: bubbles, homology, dipole reduction, \
             jacket degrees, graph brackets, and melonic statistics"
)]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores). Results are
    /// independent of this setting.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph file against all structural invariants.
    Validate { file: PathBuf },
    /// Boundary graph of an open graph (pinched-torus trace of cut edges).
    Boundary {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bubble census; optionally one color set, or the full dual complex.
    Bubbles {
        file: PathBuf,
        /// Comma-separated color set, e.g. `0,2,3`.
        #[arg(long)]
        colors: Option<String>,
        /// Export the dual complex and its pseudomanifold report instead.
        #[arg(long)]
        complex: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integer homology of the dual complex plus the fundamental-group
    /// presentation and its abelianization.
    Homology {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Route a closed graph to its core by 1-dipole contractions.
    Reduce {
        file: PathBuf,
        /// Where to write the core graph (default stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the routing log (default stdout).
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Degree: per-jacket genera, their sum, and identity residuals.
    Degree { file: PathBuf },
    /// Lie bracket of two marked graphs (graph file + negative-vertex mark).
    Bracket {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        mark_left: usize,
        #[arg(long)]
        mark_right: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact number of rooted melonic graphs of a given size.
    Count {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        p: usize,
    },
    /// Sample uniform melonic trees; emit a word-depth histogram as CSV
    /// and optionally the rooted graph files.
    Sample {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short = 'n', long, default_value_t = 1)]
        samples: usize,
        /// Directory to write `sample_<i>.json` graph files into.
        #[arg(long)]
        graphs_dir: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-point distance scaling on sampled trees (Hausdorff dimension).
    Hausdorff {
        #[arg(long)]
        dim: usize,
        /// Comma-separated tree sizes, e.g. `256,1024,4096`.
        #[arg(long)]
        sizes: String,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random-walk return probabilities and the spectral dimension.
    Spectral {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        walks: usize,
        #[arg(long, default_value_t = 512)]
        tmax: usize,
        /// Fit window `lo,hi` in walk time.
        #[arg(long)]
        window: String,
        #[arg(long)]
        seed: u64,
        /// Also cross-check the exact return series against the transfer
        /// matrix on this many small sampled trees.
        #[arg(long, default_value_t = 0)]
        verify_series: usize,
        /// Series truncation for the cross-check.
        #[arg(long, default_value_t = 40)]
        truncation: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Susceptibility exponent from the exact counting sequence.
    Susceptibility {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        pmin: usize,
        #[arg(long)]
        pmax: usize,
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version are not errors.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("error kind=config code=4 detail=\"{e}\"");
            return ExitCode::from(4);
        }
    };
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!(
                "error kind={} code={} detail=\"{}\"",
                f.kind(),
                f.code(),
                f.detail()
            );
            ExitCode::from(f.code())
        }
    }
}

fn read_graph(path: &Path) -> Result<ColoredGraph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    ColoredGraph::parse(&text).map_err(|e| Failure::Validation(e.to_string()))
}

fn require_valid(graph: &ColoredGraph) -> Result<(), Failure> {
    let report = graph.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("{report}")))
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Config header embedded in every artifact: `# key=value` lines.
fn header(entries: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (k, v) in entries {
        let _ = writeln!(out, "# {k}={v}");
    }
    out
}

fn parse_usize_list(text: &str, what: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| Failure::Config(format!("bad {what} entry {s:?}: {e}")))
        })
        .collect()
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { file } => {
            let graph = read_graph(&file)?;
            let report = graph.validate();
            if report.is_valid() {
                println!("valid: {} vertices, dimension {}", graph.vertex_count(), graph.dimension());
                Ok(())
            } else {
                Err(Failure::Validation(format!("{report}")))
            }
        }
        Command::Boundary { file, out } => {
            let graph = read_graph(&file)?;
            require_valid(&graph)?;
            let boundary = graph
                .boundary_graph()
                .map_err(|e| Failure::Validation(e.to_string()))?;
            let mut text = header(&[
                ("command", "boundary".into()),
                ("input", file.display().to_string()),
                ("dimension", boundary.dimension.to_string()),
            ]);
            for (v, color) in boundary.vertices.iter().enumerate() {
                let _ = writeln!(text, "vertex {v} color {color}");
            }
            for (v, w, (i, j)) in &boundary.edges {
                let _ = writeln!(text, "edge {v} {w} colors {i} {j}");
            }
            emit(out.as_ref(), &text)
        }
        Command::Bubbles { file, colors, complex, out } => {
            let graph = read_graph(&file)?;
            require_valid(&graph)?;
            let mut text = header(&[
                ("command", "bubbles".into()),
                ("input", file.display().to_string()),
            ]);
            if complex {
                let dual = bubbles::dual_complex(&graph);
                let report = bubbles::check_pseudomanifold(&dual);
                let _ = writeln!(text, "# pure={}", report.pure);
                let _ = writeln!(text, "# non_branching={}", report.non_branching);
                let _ = writeln!(text, "# strongly_connected={}", report.strongly_connected);
                text.push_str(&bubbles::export_complex(&dual));
            } else if let Some(spec) = colors {
                let set = parse_usize_list(&spec, "color")?;
                for b in bubbles::enumerate_bubbles(&graph, &set) {
                    let rows: Vec<String> =
                        b.vertex_rows.iter().map(|r| r.to_string()).collect();
                    let _ = writeln!(
                        text,
                        "bubble colors {:?} component {} rows {}",
                        b.colors,
                        b.component,
                        rows.join(" ")
                    );
                }
            } else {
                let _ = writeln!(text, "size,count");
                for (size, count) in bubbles::bubble_counts(&graph) {
                    let _ = writeln!(text, "{size},{count}");
                }
            }
            emit(out.as_ref(), &text)
        }
        Command::Homology { file, out } => {
            let graph = read_graph(&file)?;
            require_valid(&graph)?;
            let groups =
                homology::homology(&graph).map_err(|e| Failure::Validation(e.to_string()))?;
            let mut text = header(&[
                ("command", "homology".into()),
                ("input", file.display().to_string()),
            ]);
            text.push_str(&homology::homology_report(&groups));
            let pi1 = homology::fundamental_group_presentation(&graph)
                .map_err(|e| Failure::Validation(e.to_string()))?;
            let (rank, torsion) = homology::abelianization(&pi1);
            let _ = writeln!(
                text,
                "pi1: {} generators, {} relators; abelianization rank {} torsion {:?}",
                pi1.generators.len(),
                pi1.relators.len(),
                rank,
                torsion
            );
            emit(out.as_ref(), &text)
        }
        Command::Reduce { file, out, log } => {
            let graph = read_graph(&file)?;
            let (core, routing) = dipoles::route_to_core(&graph)
                .map_err(|e| Failure::Validation(e.to_string()))?;
            let serialized = core
                .serialize()
                .map_err(|e| Failure::Validation(e.to_string()))?;
            emit(out.as_ref(), &format!("{serialized}\n"))?;
            let mut log_text = header(&[
                ("command", "reduce".into()),
                ("input", file.display().to_string()),
                ("steps", routing.steps.len().to_string()),
            ]);
            log_text.push_str(&routing.to_text());
            emit(log.as_ref(), &log_text)
        }
        Command::Degree { file } => {
            let graph = read_graph(&file)?;
            require_valid(&graph)?;
            // The degree identities live on closed graphs; fill in any cut
            // edges before computing.
            let graph = graph.with_cuts(std::iter::empty());
            let jackets_list = jackets::enumerate_jackets(&graph);
            for j in &jackets_list {
                println!("jacket {:?} genus {}", j.cycle, j.genus);
            }
            println!("degree {}", jackets::degree(&graph));
            println!(
                "bubble identity residual {}",
                jackets::degree_bubble_residual(&graph)
            );
            println!(
                "top bubble inequality holds {}",
                jackets::bubble_degree_inequality_holds(&graph)
            );
            Ok(())
        }
        Command::Bracket { left, right, mark_left, mark_right, out } => {
            let l = algebra::MarkedGraph::new(read_graph(&left)?, mark_left)
                .map_err(|e| Failure::Validation(e.to_string()))?;
            let r = algebra::MarkedGraph::new(read_graph(&right)?, mark_right)
                .map_err(|e| Failure::Validation(e.to_string()))?;
            let chain =
                algebra::bracket(&l, &r).map_err(|e| Failure::Validation(e.to_string()))?;
            let mut text = header(&[
                ("command", "bracket".into()),
                ("left", format!("{} mark {}", left.display(), mark_left)),
                ("right", format!("{} mark {}", right.display(), mark_right)),
                ("terms", chain.len().to_string()),
            ]);
            text.push_str(
                &chain
                    .to_text()
                    .map_err(|e| Failure::Validation(e.to_string()))?,
            );
            emit(out.as_ref(), &text)
        }
        Command::Count { dim, p } => {
            if dim == 0 {
                return Err(Failure::Config("dimension must be at least 1".into()));
            }
            println!("{}", melonic::count_melonic(dim, p));
            Ok(())
        }
        Command::Sample { dim, p, seed, samples, graphs_dir, out } => {
            if dim == 0 || p == 0 {
                return Err(Failure::Config("need dim >= 1 and p >= 1".into()));
            }
            if let Some(dir) = &graphs_dir {
                fs::create_dir_all(dir)
                    .map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
            }
            let mut histogram = std::collections::BTreeMap::new();
            for i in 0..samples {
                let mut rng = ChaCha8Rng::seed_from_u64(dimensions::subseed(
                    seed, p as u64, i as u64,
                ));
                let tree = melonic::sample_uniform(dim, p, &mut rng);
                for node in 0..tree.order() {
                    let word = tree.word_of(node);
                    *histogram.entry(melonic::depth(&word, dim)).or_insert(0usize) += 1;
                }
                if let Some(dir) = &graphs_dir {
                    let graph = melonic::tree_to_graph(&tree);
                    let path = dir.join(format!("sample_{i}.json"));
                    let body = graph
                        .serialize()
                        .map_err(|e| Failure::Validation(e.to_string()))?;
                    fs::write(&path, body)
                        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                }
            }
            let mut text = header(&[
                ("command", "sample".into()),
                ("dim", dim.to_string()),
                ("p", p.to_string()),
                ("seed", seed.to_string()),
                ("samples", samples.to_string()),
            ]);
            let _ = writeln!(text, "depth,count");
            for (depth, count) in histogram {
                let _ = writeln!(text, "{depth},{count}");
            }
            emit(out.as_ref(), &text)
        }
        Command::Hausdorff { dim, sizes, samples, seed, out } => {
            let size_list = parse_usize_list(&sizes, "size")?;
            if size_list.len() < 3 {
                return Err(Failure::Config("need at least three sizes to fit".into()));
            }
            let report = dimensions::hausdorff_scan(dim, &size_list, samples, seed);
            let mut text = header(&[
                ("command", "hausdorff".into()),
                ("dim", dim.to_string()),
                ("sizes", sizes.clone()),
                ("samples", samples.to_string()),
                ("seed", seed.to_string()),
                ("exponent", report.exponent.to_string()),
                ("exponent_stderr", report.fit.slope_stderr.to_string()),
                ("hausdorff_dimension", report.hausdorff_dimension.to_string()),
                ("max_depth_gap", report.max_depth_gap.to_string()),
            ]);
            let _ = writeln!(text, "p,estimate,stderr,samples");
            for pt in &report.points {
                let _ = writeln!(
                    text,
                    "{},{},{},{}",
                    pt.p, pt.mean_distance, pt.stderr, pt.samples
                );
            }
            emit(out.as_ref(), &text)
        }
        Command::Spectral {
            dim,
            p,
            samples,
            walks,
            tmax,
            window,
            seed,
            verify_series,
            truncation,
            out,
        } => {
            let w = parse_usize_list(&window, "window")?;
            if w.len() != 2 || w[0] >= w[1] || w[1] > tmax {
                return Err(Failure::Config(
                    "window must be `lo,hi` with lo < hi <= tmax".into(),
                ));
            }
            let mut oracle_line = String::new();
            if verify_series > 0 {
                let mut rng = ChaCha8Rng::seed_from_u64(dimensions::subseed(seed, 0x5E41, 0));
                for i in 0..verify_series {
                    let small_p = 1 + (i % 20);
                    let tree = melonic::sample_uniform(dim, small_p, &mut rng);
                    let graph = melonic::tree_to_graph(&tree);
                    let full = dimensions::full_return_series(
                        &dimensions::first_return_series(&tree, truncation),
                    );
                    let oracle = dimensions::transfer_matrix_series(&graph, truncation);
                    if full != oracle {
                        return Err(Failure::Validation(format!(
                            "return series mismatch at tree {i} (p = {small_p})"
                        )));
                    }
                }
                oracle_line = format!(
                    "# series_verified={verify_series} trees to y^{truncation}\n"
                );
            }
            let report =
                dimensions::spectral_mc(dim, p, samples, walks, tmax, (w[0], w[1]), seed);
            let mut text = header(&[
                ("command", "spectral".into()),
                ("dim", dim.to_string()),
                ("p", p.to_string()),
                ("samples", samples.to_string()),
                ("walks", walks.to_string()),
                ("tmax", tmax.to_string()),
                ("window", window.clone()),
                ("seed", seed.to_string()),
                ("spectral_dimension", report.spectral_dimension.to_string()),
                ("slope_stderr", report.fit.slope_stderr.to_string()),
                ("odd_mass", report.odd_mass.to_string()),
            ]);
            text.push_str(&oracle_line);
            let _ = writeln!(text, "t,estimate");
            for (t, value) in report.returns.iter().enumerate() {
                let _ = writeln!(text, "{t},{value}");
            }
            emit(out.as_ref(), &text)
        }
        Command::Susceptibility { dim, pmin, pmax, stride, out } => {
            if pmin < 1 || pmin >= pmax {
                return Err(Failure::Config("need 1 <= pmin < pmax".into()));
            }
            let report = dimensions::susceptibility_check(dim, pmin, pmax, stride);
            let mut text = header(&[
                ("command", "susceptibility".into()),
                ("dim", dim.to_string()),
                ("pmin", pmin.to_string()),
                ("pmax", pmax.to_string()),
                ("stride", stride.to_string()),
                ("slope", report.slope.to_string()),
                ("slope_stderr", report.fit.slope_stderr.to_string()),
                ("prefactor", report.prefactor.to_string()),
                ("expected_prefactor", report.expected_prefactor.to_string()),
            ]);
            let _ = writeln!(text, "log_p,log_scaled_count");
            for (x, y) in &report.fit.points {
                let _ = writeln!(text, "{x},{y}");
            }
            emit(out.as_ref(), &text)
        }
    }
}
