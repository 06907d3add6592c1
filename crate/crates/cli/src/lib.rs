//! Subcommand implementations behind the `segscope` binary.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use segscope_core::analytics::{correlation_report, write_correlation_csv};
use segscope_core::compositor::{superimpose, ColormapId};
use segscope_core::ingest::{
    generate_fixtures, load_manifest, load_rgb, load_weight_field, write_rgb, Resolution,
};
use segscope_core::metrics::build_mask_table;
use segscope_core::{CategoryTable, CompositeParams};
use segscope_server::{router, ServerConfig, SessionState};

pub const DEFAULT_RESOLUTION: &str = "1024x512";

#[derive(Debug, Parser)]
#[command(
    name = "segscope",
    version,
    about = "Inspect semantic segmentation results against ground truth"
)]
#[command(
    after_help = "Set SEGSCOPE_LOG (e.g. debug, segscope=trace) to change log verbosity. Default: info."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a deterministic synthetic dataset (PNG rasters, WGT1 weights, manifest.json).
    GenFixtures(GenFixtures),
    /// Build the per-object mask table CSV: image_id,category,iou_percent,size_pixels.
    BuildTable(BuildTable),
    /// Superimpose one category's weight heatmap on an image and write a PNG.
    Render(Render),
    /// Per-category Pearson/Spearman correlation of object size vs IoU as CSV.
    Report(Report),
    /// Serve the read-only JSON/PNG API under /api/v1 until interrupted.
    Serve(Serve),
}

#[derive(Debug, Args)]
pub struct GenFixtures {
    /// Seed for every random choice in the dataset.
    #[arg(long)]
    pub seed: u64,
    /// Number of images.
    #[arg(long)]
    pub count: usize,
    /// Output directory; created if missing.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ResolutionArg {
    /// Working resolution WIDTHxHEIGHT masks are resampled to (nearest neighbour), or "native".
    #[arg(long, default_value = DEFAULT_RESOLUTION, value_parser = parse_resolution)]
    pub resolution: WorkingResolution,
}

/// `None` keeps masks at their native size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkingResolution(pub Option<Resolution>);

#[derive(Debug, Args)]
pub struct BuildTable {
    /// Dataset manifest JSON: {"root": dir, "entries": [{image_id, image, given, pred, weights}]}.
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out_csv: PathBuf,
    #[command(flatten)]
    pub resolution: ResolutionArg,
}

#[derive(Debug, Args)]
pub struct Render {
    #[arg(long)]
    pub manifest: PathBuf,
    /// image_id from the manifest.
    #[arg(long)]
    pub image: String,
    /// Category name, e.g. "car" or "traffic light".
    #[arg(long)]
    pub category: String,
    /// One of turbo, rainbow, paired, nipy_spectral.
    #[arg(long, default_value = "turbo")]
    pub colormap: String,
    /// Image opacity, in (0, 1].
    #[arg(long, default_value_t = CompositeParams::DEFAULT_ALPHA1)]
    pub alpha1: f64,
    /// Heatmap opacity, in [0, 1] and below alpha1.
    #[arg(long, default_value_t = CompositeParams::DEFAULT_ALPHA2)]
    pub alpha2: f64,
    #[arg(long)]
    pub out_png: PathBuf,
}

#[derive(Debug, Args)]
pub struct Report {
    #[arg(long)]
    pub manifest: PathBuf,
    /// CSV: category,n_points,pearson_r,spearman_r (empty r when undefined).
    #[arg(long)]
    pub out_csv: PathBuf,
    #[command(flatten)]
    pub resolution: ResolutionArg,
}

#[derive(Debug, Args)]
pub struct Serve {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Listen address, e.g. 127.0.0.1:8080 (port 0 picks a free port).
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: String,
    /// Allowed CORS origin; "*" allows any.
    #[arg(long, default_value = "*")]
    pub cors_origin: String,
    #[command(flatten)]
    pub resolution: ResolutionArg,
}

pub fn parse_resolution(s: &str) -> Result<WorkingResolution, String> {
    if s.eq_ignore_ascii_case("native") {
        return Ok(WorkingResolution(None));
    }
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT or native, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<u32>().ok().filter(|n| *n > 0);
    match (parse(w), parse(h)) {
        (Some(w), Some(h)) => Ok(WorkingResolution(Some((w, h)))),
        _ => Err(format!(
            "resolution must be two positive integers, got {s:?}"
        )),
    }
}

#[derive(Debug)]
pub struct CliError(pub String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

impl From<segscope_core::Error> for CliError {
    fn from(e: segscope_core::Error) -> Self {
        CliError(e.to_string())
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GenFixtures(c) => gen_fixtures(&c),
        Command::BuildTable(c) => build_table(&c),
        Command::Render(c) => render(&c),
        Command::Report(c) => report(&c),
        Command::Serve(c) => serve(&c),
    }
}

pub fn gen_fixtures(c: &GenFixtures) -> Result<(), CliError> {
    let t = Instant::now();
    let ds = generate_fixtures(c.seed, c.count, &c.out)?;
    tracing::info!(
        images = ds.entries.len(),
        elapsed_ms = t.elapsed().as_millis() as u64,
        "fixtures written to {}",
        c.out.display()
    );
    Ok(())
}

pub fn build_table(c: &BuildTable) -> Result<(), CliError> {
    let ds = load_manifest(&c.manifest)?;
    let t = Instant::now();
    let table = build_mask_table(&ds, c.resolution.resolution.0)?;
    let mut out = create(&c.out_csv)?;
    table.write_csv(&CategoryTable::default(), &mut out)?;
    out.flush().map_err(io_err(&c.out_csv))?;
    tracing::info!(
        rows = table.len(),
        elapsed_ms = t.elapsed().as_millis() as u64,
        "mask table built"
    );
    Ok(())
}

pub fn render(c: &Render) -> Result<(), CliError> {
    let colormap: ColormapId = c.colormap.parse()?;
    let params = CompositeParams::new(c.alpha1, c.alpha2, colormap)?;
    let ds = load_manifest(&c.manifest)?;
    let categories = CategoryTable::default();
    let category = categories.category_by_name(&c.category)?;
    let entry = ds
        .entry(&c.image)
        .ok_or_else(|| CliError(format!("image {:?} is not in the manifest", c.image)))?;
    let weight_path = entry
        .weight_path(&categories, category)
        .ok_or_else(|| CliError(format!("image {:?} has no weights directory", c.image)))?;
    let image = load_rgb(&entry.image_path)?;
    let weights = load_weight_field(&weight_path)?;
    let out = superimpose(&image, &weights, &params)?;
    write_rgb(&out, &c.out_png)?;
    Ok(())
}

pub fn report(c: &Report) -> Result<(), CliError> {
    let ds = load_manifest(&c.manifest)?;
    let table = build_mask_table(&ds, c.resolution.resolution.0)?;
    let rows = correlation_report(&table);
    let mut out = create(&c.out_csv)?;
    write_correlation_csv(&rows, &CategoryTable::default(), &mut out)?;
    out.flush().map_err(io_err(&c.out_csv))?;
    Ok(())
}

pub fn serve(c: &Serve) -> Result<(), CliError> {
    let addr: SocketAddr = c
        .addr
        .parse()
        .map_err(|e| CliError(format!("bad --addr {:?}: {e}", c.addr)))?;
    let ds = load_manifest(&c.manifest)?;
    let rt = tokio::runtime::Runtime::new().map_err(|e| CliError(format!("runtime: {e}")))?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| CliError(format!("cannot listen on {addr}: {e}")))?;
        let local = listener.local_addr().map_err(|e| CliError(e.to_string()))?;

        let t = Instant::now();
        let n_images = ds.entries.len();
        let config = ServerConfig {
            resolution: c.resolution.resolution.0,
            ..ServerConfig::default()
        };
        let state = tokio::task::spawn_blocking(move || {
            SessionState::build(ds, CategoryTable::default(), &config)
        })
        .await
        .map_err(|e| CliError(format!("precompute failed: {e}")))??;
        tracing::info!(
            images = n_images,
            rows = state.mask_table.len(),
            elapsed_ms = t.elapsed().as_millis() as u64,
            "precomputed mask table and occupancy"
        );

        let app = router(Arc::new(state), Some(&c.cors_origin)).map_err(CliError)?;
        println!("listening on http://{local}");
        let _ = std::io::stdout().flush();
        segscope_server::serve(listener, app, async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| CliError(format!("server error: {e}")))
    })
}
