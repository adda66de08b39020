//! Command-line front end: ingestion, partitioning, drawing, metrics and
//! parameter sweeps.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use archipelago::geom::{Bbox, Point};
use archipelago::partition::{run_simulation, Filtration, PartitionConfig};
use archipelago::patterns::CategoricalPoint;
use archipelago::render::RenderStyle;
use archipelago::Error;

#[derive(Parser)]
#[command(name = "archipelago", version, about = "Categorical point-set visualization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the merge simulation and write the filtration.
    Partition(PartitionArgs),
    /// Render the partition at a time t as SVG.
    Draw(DrawArgs),
    /// Compute quality metrics for the partition at a time t.
    Metrics(MetricsArgs),
    /// Render and measure a list of times, sharing one filtration.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Tsv,
    Json,
}

#[derive(Args)]
struct IngestArgs {
    /// Input dataset path.
    #[arg(long)]
    input: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    ingest: IngestArgs,
    /// Dilation radius; default: bbox diagonal / 40.
    #[arg(long)]
    rd: Option<f64>,
    /// Disable the intersection delay.
    #[arg(long)]
    no_intersection_delay: bool,
    /// Output filtration path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DrawArgs {
    /// Filtration file produced by `partition`.
    #[arg(long)]
    filtration: PathBuf,
    /// Time parameter; default 3.5 * r_d.
    #[arg(long)]
    t: Option<f64>,
    /// Style file (JSON).
    #[arg(long)]
    style: Option<PathBuf>,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
    /// Dump resolved stacking relations to stderr.
    #[arg(long)]
    debug_stacking: bool,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    filtration: PathBuf,
    #[arg(long)]
    t: Option<f64>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    ingest: IngestArgs,
    #[arg(long)]
    rd: Option<f64>,
    #[arg(long)]
    no_intersection_delay: bool,
    /// Times to render; default 2.5, 3.5, 4.5 and 6 times r_d.
    #[arg(long, value_delimiter = ',')]
    t: Vec<f64>,
    #[arg(long)]
    style: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

fn verbose() -> bool {
    std::env::var("ARCHIPELAGO_LOG").map_or(false, |v| v != "0" && !v.is_empty())
}

fn log(msg: &str) {
    if verbose() {
        eprintln!("archipelago: {msg}");
    }
}

fn ingest(args: &IngestArgs) -> Result<Vec<CategoricalPoint>, Error> {
    let format = args.format.unwrap_or_else(|| {
        match args.input.extension().and_then(|e| e.to_str()) {
            Some("json") => InputFormat::Json,
            _ => InputFormat::Tsv,
        }
    });
    let text = std::fs::read_to_string(&args.input)?;
    let points = match format {
        InputFormat::Tsv => parse_tsv(&text)?,
        InputFormat::Json => serde_json::from_str::<Vec<CategoricalPoint>>(&text)
            .map_err(Error::from)?,
    };
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    // Duplicate (position, category) pairs are rejected.
    for (i, p) in points.iter().enumerate() {
        for q in &points[..i] {
            if p.category == q.category && p.pos.dist(q.pos) < 1e-12 {
                return Err(Error::DuplicatePoint(p.pos.x, p.pos.y, p.category));
            }
        }
    }
    Ok(points)
}

fn parse_tsv(text: &str) -> Result<Vec<CategoricalPoint>, Error> {
    let mut labels: Vec<String> = Vec::new();
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let parse_field = |f: Option<&str>, what: &str| -> Result<String, Error> {
            f.map(str::to_string).ok_or_else(|| Error::Parse {
                line: lineno + 1,
                message: format!("missing {what}"),
            })
        };
        let x: f64 = parse_field(fields.next(), "x")?
            .parse()
            .map_err(|e| Error::Parse {
                line: lineno + 1,
                message: format!("bad x: {e}"),
            })?;
        let y: f64 = parse_field(fields.next(), "y")?
            .parse()
            .map_err(|e| Error::Parse {
                line: lineno + 1,
                message: format!("bad y: {e}"),
            })?;
        let label = parse_field(fields.next(), "category")?;
        let category = match labels.iter().position(|l| *l == label) {
            Some(k) => k,
            None => {
                labels.push(label);
                labels.len() - 1
            }
        };
        out.push(CategoricalPoint {
            id: out.len(),
            pos: Point::new(x, y),
            category,
        });
    }
    Ok(out)
}

fn default_rd(points: &[CategoricalPoint]) -> f64 {
    let bbox = Bbox::from_points(points.iter().map(|p| p.pos));
    (bbox.diagonal() / 40.0).max(1e-9)
}

fn load_style(path: &Option<PathBuf>) -> Result<RenderStyle, Error> {
    match path {
        None => Ok(RenderStyle::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Ok(serde_json::from_str(&text)?)
        }
    }
}

fn build_filtration(
    ingest_args: &IngestArgs,
    rd: Option<f64>,
    no_delay: bool,
) -> Result<Filtration, Error> {
    let points = ingest(ingest_args)?;
    let r_d = rd.unwrap_or_else(|| default_rd(&points));
    let mut cfg = PartitionConfig::new(r_d)?;
    cfg.enable_intersection_delay = !no_delay;
    log(&format!(
        "partitioning {} points with r_d = {r_d}",
        points.len()
    ));
    run_simulation(&points, &cfg)
}

fn load_filtration(path: &Path) -> Result<Filtration, Error> {
    Filtration::from_json(&std::fs::read_to_string(path)?)
}

fn pick_time(t: Option<f64>, f: &Filtration) -> Result<f64, Error> {
    let t = t.unwrap_or(3.5 * f.config.r_d);
    if t < 0.0 {
        return Err(Error::InvalidInput("t must be non-negative".into()));
    }
    Ok(t)
}

fn run() -> Result<(), Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Partition(args) => {
            let f = build_filtration(&args.ingest, args.rd, args.no_intersection_delay)?;
            std::fs::write(&args.out, f.to_json()?)?;
            log(&format!("{} merges written", f.merges.len()));
        }
        Command::Draw(args) => {
            let f = load_filtration(&args.filtration)?;
            let t = pick_time(args.t, &f)?;
            let style = load_style(&args.style)?;
            let drawing = archipelago::build_drawing(&f, t)?;
            if args.debug_stacking {
                for r in &drawing.stacking.relations {
                    eprintln!("{r:?}");
                }
            }
            std::fs::write(&args.out, drawing.render_svg(&f, &style)?)?;
            log(&format!("drew {} patterns at t = {t}", drawing.patterns.len()));
        }
        Command::Metrics(args) => {
            let f = load_filtration(&args.filtration)?;
            let t = pick_time(args.t, &f)?;
            let drawing = archipelago::build_drawing(&f, t)?;
            let csv = drawing.metrics(&f)?.to_csv();
            match &args.out {
                Some(p) => std::fs::write(p, csv)?,
                None => print!("{csv}"),
            }
        }
        Command::Sweep(args) => {
            let f = build_filtration(&args.ingest, args.rd, args.no_intersection_delay)?;
            let style = load_style(&args.style)?;
            let times: Vec<f64> = if args.t.is_empty() {
                [2.5, 3.5, 4.5, 6.0]
                    .iter()
                    .map(|m| m * f.config.r_d)
                    .collect()
            } else {
                args.t.clone()
            };
            std::fs::create_dir_all(&args.out)?;
            std::fs::write(args.out.join("filtration.json"), f.to_json()?)?;
            let mut rows = String::new();
            for (k, &t) in times.iter().enumerate() {
                if t < 0.0 {
                    return Err(Error::InvalidInput("t must be non-negative".into()));
                }
                let drawing = archipelago::build_drawing(&f, t)?;
                let svg = drawing.render_svg(&f, &style)?;
                std::fs::write(args.out.join(format!("drawing-{k}.svg")), svg)?;
                let csv = drawing.metrics(&f)?.to_csv();
                let mut lines = csv.lines();
                if k == 0 {
                    rows.push_str("t,");
                    rows.push_str(lines.next().unwrap_or(""));
                    rows.push('\n');
                } else {
                    lines.next();
                }
                rows.push_str(&format!("{t},"));
                rows.push_str(lines.next().unwrap_or(""));
                rows.push('\n');
            }
            std::fs::write(args.out.join("metrics.csv"), rows)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::InvalidInput(_) => 1,
                Error::Parse { .. }
                | Error::DuplicatePoint(..)
                | Error::EmptyPointSet
                | Error::DegenerateBbox
                | Error::Io(_)
                | Error::Serde(_) => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}
