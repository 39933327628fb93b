mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use coordspace::angles::ClassCounting;
use coordspace::extracop::e_one;
use coordspace::shape::moment_per_neighbour;
use coordspace::snapshot::{io::write_frames, with_noise, Format};
use coordspace::spacemap::{class_averages, order_typicality_scatter};
use coordspace::*;

use config::{read_config, Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "coordspace", version, about = "Extracopularity analysis of coordination geometries")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// DBSCAN neighbourhood radius for the angle discretizer, degrees [default: 2.85]
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// DBSCAN core-point threshold [default: 1]
    #[arg(long, global = true)]
    min_pts: Option<usize>,
    /// Embedding dimensionality [default: 8]
    #[arg(long, global = true)]
    dims: Option<usize>,
    /// Seed for random scaling starts [default: 0]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of scaling starts [default: 20]
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Output directory (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Neighbour cutoff for `analyze` (first RDF minimum when absent)
    #[arg(long, global = true)]
    rcut: Option<f64>,
    /// Output format: csv|text for `table`, newick|dot for `tree`, xyz|extxyz for `lattice`
    #[arg(long, global = true)]
    format: Option<String>,
    /// File of `key = value` settings; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-geometry k, m, E, sphericity, I/k and typicality, ordered by E
    Table,
    /// Extracopularity distance matrix
    Distances,
    /// Average-linkage dendrogram
    Tree,
    /// Metric-stress embedding coordinates
    Embed,
    /// Delaunay graph of the two-dimensional embedding
    Graph {
        #[arg(long, value_enum, default_value_t = Projection2d::Fresh)]
        projection: Projection2d,
    },
    /// Typicality per geometry, class averages and the order-typicality scatter
    Typicality,
    /// Inherent bond angles and bin edges of the discretizer
    InherentAngles,
    /// Classify every particle of an XYZ or extended-XYZ file
    Analyze { path: PathBuf },
    /// Write a periodic lattice snapshot
    Lattice {
        #[arg(value_parser = parse_lattice)]
        kind: LatticeKind,
        #[arg(long, default_value_t = 4)]
        cells: usize,
        #[arg(long, default_value_t = 1.0)]
        nn: f64,
        /// Gaussian noise per coordinate, in units of the nearest-neighbour distance
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
    /// Catalog operations
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    /// Vertex coordinates and metadata of all geometries as JSON
    Dump,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Projection2d {
    /// Separate two-dimensional scaling
    Fresh,
    /// Leading principal axes of the full embedding
    Principal,
}

fn parse_lattice(s: &str) -> std::result::Result<LatticeKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::InvalidEpsilon(_) | Error::InvalidMinPts => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

struct Context {
    cfg: RunConfig,
    catalog: Catalog,
    disc: Discretizer,
}

impl Context {
    fn new(cfg: RunConfig) -> Outcome<Self> {
        let catalog = Catalog::new();
        let params = DiscretizerParams {
            epsilon: cfg.epsilon,
            min_pts: cfg.min_pts,
            ..Default::default()
        };
        let disc = Discretizer::from_catalog(&catalog, &params)?;
        Ok(Context { cfg, catalog, disc })
    }

    fn matrix(&self) -> DistanceMatrix {
        distance_matrix(&self.catalog, &self.disc)
    }

    fn mds_params(&self, dims: usize) -> MdsParams {
        MdsParams {
            dims,
            restarts: self.cfg.restarts,
            seed: self.cfg.seed,
            ..Default::default()
        }
    }

    fn embedding(&self, dm: &DistanceMatrix) -> Outcome<Embedding> {
        let e = mds(dm, &self.mds_params(self.cfg.dims))?;
        if !e.converged {
            eprintln!("warning: scaling stopped at the iteration limit");
        }
        Ok(e)
    }

    fn codes(&self) -> Vec<GeometryCode> {
        self.catalog.geometries().iter().map(|g| g.code).collect()
    }

    fn e_values(&self) -> Vec<f64> {
        self.catalog
            .geometries()
            .iter()
            .map(|g| e_one(&ParticleDescriptor::from_geometry(g, &self.disc)))
            .collect()
    }

    fn format(&self, allowed: &[&str]) -> Outcome<String> {
        let f = self.cfg.format.clone().unwrap_or_else(|| allowed[0].to_string());
        if allowed.contains(&f.as_str()) {
            Ok(f)
        } else {
            Err(Failure::Usage(format!("format must be one of {}", allowed.join(", "))))
        }
    }

    /// Writes to `<out>/<name>` or to stdout.
    fn emit(&self, name: &str, content: &str) -> Outcome<()> {
        match &self.cfg.out {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                let path = dir.join(name);
                std::fs::write(&path, content)?;
                eprintln!("wrote {}", path.display());
            }
            None => print!("{content}"),
        }
        Ok(())
    }
}

fn cmd_table(ctx: &Context) -> Outcome<()> {
    let dm = ctx.matrix();
    let tau = typicality(&ctx.embedding(&dm)?);
    let es = ctx.e_values();
    let mut rows: Vec<usize> = (0..ctx.catalog.len()).collect();
    rows.sort_by(|&a, &b| es[a].total_cmp(&es[b]));
    let text = ctx.format(&["csv", "text"])? == "text";
    let mut s = String::new();
    if text {
        writeln!(s, "{:<5}{:>4}{:>4}{:>8}{:>10}{:>9}{:>7}", "code", "k", "m", "E", "tau", "Psi", "I/k").unwrap();
    } else {
        s.push_str("code,k,m,E,sphericity,moment_per_neighbour,tau\n");
    }
    for i in rows {
        let g = &ctx.catalog.geometries()[i];
        let p = ParticleDescriptor::from_geometry(g, &ctx.disc);
        let psi = sphericity(g)?;
        let ik = moment_per_neighbour(g);
        if text {
            writeln!(s, "{:<5}{:>4}{:>4}{:>8.3}{:>10.4}{:>9.4}{:>7.2}", g.code.as_str(), p.k(), p.m(), es[i], tau.tau[i], psi, ik)
                .unwrap();
        } else {
            writeln!(s, "{},{},{},{:.6},{psi:.6},{ik:.6},{:.6}", g.code, p.k(), p.m(), es[i], tau.tau[i]).unwrap();
        }
    }
    ctx.emit(if text { "table.txt" } else { "table.csv" }, &s)
}

fn cmd_distances(ctx: &Context) -> Outcome<()> {
    let dm = ctx.matrix();
    let report = dm.verify_metric(1e-9);
    if !report.is_metric() {
        return Err(Failure::Compute(format!("distance matrix is not a metric: {}", report.failures.join("; "))));
    }
    ctx.emit("distances.csv", &dm.to_csv())
}

fn cmd_tree(ctx: &Context) -> Outcome<()> {
    let tree = hierarchical_cluster(&ctx.matrix());
    match ctx.format(&["newick", "dot"])?.as_str() {
        "dot" => ctx.emit("tree.dot", &tree.to_dot()),
        _ => ctx.emit("tree.nwk", &tree.to_newick()),
    }
}

fn cmd_embed(ctx: &Context) -> Outcome<()> {
    let e = ctx.embedding(&ctx.matrix())?;
    ctx.emit("embedding.csv", &e.to_csv())
}

fn cmd_graph(ctx: &Context, projection: Projection2d) -> Outcome<()> {
    let dm = ctx.matrix();
    let e2 = match projection {
        Projection2d::Fresh => mds(&dm, &ctx.mds_params(2))?,
        Projection2d::Principal => ctx.embedding(&dm)?.principal(2, &dm)?,
    };
    let pts: Vec<[f64; 2]> = e2.coords.iter().map(|x| [x[0], x[1]]).collect();
    let tri = delaunay_2d(&pts)?;
    ctx.emit("graph.dot", &tri.to_dot(dm.codes(), &pts))
}

fn cmd_typicality(ctx: &Context) -> Outcome<()> {
    let dm = ctx.matrix();
    let tau = typicality(&ctx.embedding(&dm)?);
    let codes = ctx.codes();
    let psi = ctx
        .catalog
        .geometries()
        .iter()
        .map(sphericity)
        .collect::<Result<Vec<f64>>>()?;
    let ik: Vec<f64> = ctx.catalog.geometries().iter().map(moment_per_neighbour).collect();
    let mut classes = String::from("class,members,sphericity,moment_per_neighbour,tau\n");
    for a in class_averages(&codes, &psi, &ik, &tau.tau)? {
        writeln!(
            classes,
            "{},{},{:.6},{:.6},{:.6}",
            a.class.as_str(),
            a.members.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(" "),
            a.sphericity,
            a.moment_per_neighbour,
            a.tau
        )
        .unwrap();
    }
    let scatter = order_typicality_scatter(&codes, &ctx.e_values(), &tau)?;
    if ctx.cfg.out.is_some() {
        ctx.emit("typicality.csv", &tau.to_csv())?;
        ctx.emit("class_averages.csv", &classes)?;
        ctx.emit("order_typicality.csv", &scatter)
    } else {
        ctx.emit("typicality.csv", &tau.to_csv())
    }
}

fn cmd_inherent_angles(ctx: &Context) -> Outcome<()> {
    let mut json = ctx.disc.to_json()?;
    json.push('\n');
    ctx.emit("inherent_angles.json", &json)
}

fn cmd_analyze(ctx: &Context, path: &Path) -> Outcome<()> {
    let frames = read_frames(path).map_err(|e| match e {
        Error::Io(io) => Failure::Compute(format!("{}: {io}", path.display())),
        other => other.into(),
    })?;
    let mut summaries = Vec::with_capacity(frames.len());
    for (i, frame) in frames.iter().enumerate() {
        let a = analyze(frame, ctx.cfg.rcut, &ctx.catalog, &ctx.disc, ClassCounting::Classes)?;
        let name = if frames.len() == 1 {
            "particles.csv".to_string()
        } else {
            format!("particles_{i:04}.csv")
        };
        if ctx.cfg.out.is_none() && frames.len() > 1 {
            println!("# frame {i}");
        }
        ctx.emit(&name, &a.to_csv())?;
        summaries.push(a.summary());
    }
    if ctx.cfg.out.is_some() {
        let body = if summaries.len() == 1 {
            serde_json::to_string_pretty(&summaries[0])
        } else {
            serde_json::to_string_pretty(&summaries)
        }
        .map_err(|e| Failure::Compute(e.to_string()))?;
        ctx.emit("summary.json", &(body + "\n"))?;
    }
    Ok(())
}

fn cmd_lattice(ctx: &Context, kind: LatticeKind, cells: usize, nn: f64, noise: f64) -> Outcome<()> {
    let mut frame = generate_lattice(kind, cells, nn)?;
    if noise > 0.0 {
        frame = with_noise(&frame, noise * nn, ctx.cfg.seed)?;
    } else if noise < 0.0 {
        return Err(Failure::Usage("noise must be non-negative".into()));
    }
    let format = match ctx.format(&["extxyz", "xyz"])?.as_str() {
        "xyz" => Format::Xyz,
        _ => Format::ExtendedXyz,
    };
    ctx.emit(&format!("{kind}.xyz"), &write_frames(&[frame], format))
}

fn cmd_catalog_dump(ctx: &Context) -> Outcome<()> {
    let mut json = ctx.catalog.to_json()?;
    json.push('\n');
    ctx.emit("catalog.json", &json)
}

fn run(cli: Cli) -> Outcome<()> {
    let c = cli.common;
    let flags = Overrides {
        epsilon: c.epsilon,
        min_pts: c.min_pts,
        dims: c.dims,
        seed: c.seed,
        restarts: c.restarts,
        out: c.out,
        rcut: c.rcut,
        format: c.format,
    };
    let file = match &c.config {
        Some(p) => read_config(p).map_err(Failure::Usage)?,
        None => Overrides::default(),
    };
    let cfg = flags.or(file).resolve().map_err(Failure::Usage)?;
    let ctx = Context::new(cfg)?;
    match cli.command {
        Command::Table => cmd_table(&ctx),
        Command::Distances => cmd_distances(&ctx),
        Command::Tree => cmd_tree(&ctx),
        Command::Embed => cmd_embed(&ctx),
        Command::Graph { projection } => cmd_graph(&ctx, projection),
        Command::Typicality => cmd_typicality(&ctx),
        Command::InherentAngles => cmd_inherent_angles(&ctx),
        Command::Analyze { path } => cmd_analyze(&ctx, &path),
        Command::Lattice { kind, cells, nn, noise } => cmd_lattice(&ctx, kind, cells, nn, noise),
        Command::Catalog { action: CatalogAction::Dump } => cmd_catalog_dump(&ctx),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
