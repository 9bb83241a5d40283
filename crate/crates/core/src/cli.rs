//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 when a spatial level has
//! no auditable division.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::audit::{audit_features, AuditConfig, FeatureSet, DEFAULT_SHIFT_THRESHOLD, LOW_MCC_CAVEAT};
use crate::dataset::{load_customers, write_customers, CustomerTable, FeatureSchema, LoadOptions};
use crate::error::Error;
use crate::report::{report_json, trace_json, write_report_csv};
use crate::spatial::{
    audit_divisions, divisions_geojson, rasterize, render, skip_summary, write_divisions_csv, write_raster_csv, Bounds,
    Colormap, DivisionLevel, DivisionScore,
};
use crate::synthgen::{Scenario, PRESETS};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "covshift",
    version,
    about = "Quantify and map covariate shift of inspected customers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Audit every schema feature on its own.
    AuditFeature(AuditArgs),
    /// Audit feature combinations.
    AuditCompound(CompoundArgs),
    /// Audit each spatial division and rasterize the scores.
    AuditSpatial(SpatialArgs),
    /// Generate a synthetic population with inspection flags.
    GenSynthetic(GenArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// Schema file (TOML).
    #[arg(long)]
    pub schema: PathBuf,
    /// Customer CSV with an inspected-flag column.
    #[arg(long)]
    pub data: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Abort on the first invalid row.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EngineArgs {
    /// Cross-validation folds.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Random model candidates per audit.
    #[arg(long, default_value_t = 100)]
    pub models: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scores strictly above this are reported as shifted.
    #[arg(long, default_value_t = DEFAULT_SHIFT_THRESHOLD)]
    pub threshold: f64,
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

impl EngineArgs {
    fn config(&self) -> AuditConfig {
        AuditConfig {
            k: self.k,
            n_models: self.models,
            seed: self.seed,
            ..AuditConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AuditArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompoundArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Comma-separated feature set; repeatable.
    #[arg(long = "set")]
    pub sets: Vec<String>,
    /// Every pair of schema features.
    #[arg(long)]
    pub all_pairs: bool,
    /// All schema features together.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpatialArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Division levels: comma list of region, municipality, locality, neighborhood, or `all`.
    #[arg(long, default_value = "locality")]
    pub levels: String,
    /// Raster bounds `lon_min,lon_max,lat_min,lat_max`; defaults to the data extent.
    #[arg(long, allow_hyphen_values = true)]
    pub bounds: Option<String>,
    /// Raster size `nx,ny`.
    #[arg(long, default_value = "200,200")]
    pub resolution: String,
    /// Features audited per division.
    #[arg(long, default_value = "location")]
    pub features: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenArgs {
    /// Built-in scenario name.
    #[arg(long, conflicts_with = "spec")]
    pub preset: Option<String>,
    /// Scenario file (TOML) with `[population]` and `[bias]` tables.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the number of customers.
    #[arg(long)]
    pub n: Option<usize>,
    /// Overrides the bias strength.
    #[arg(long)]
    pub strength: Option<f64>,
    /// Output CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the matching schema file.
    #[arg(long)]
    pub schema_out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parse arguments, run, and return the process exit code.
pub fn run_from_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let argv: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match run(&cli, &argv) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure::input(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn run(cli: &Cli, argv: &[String]) -> CliResult<u8> {
    let started = Instant::now();
    let mut manifest = Manifest::new(argv);
    let (code, out_dir) = match &cli.command {
        Command::AuditFeature(a) => {
            manifest.config(a, a.engine.seed);
            let code = with_workers(a.engine.workers, || cmd_audit_feature(a, &mut manifest))??;
            (code, Some(a.input.out.clone()))
        }
        Command::AuditCompound(a) => {
            manifest.config(a, a.engine.seed);
            let code = with_workers(a.engine.workers, || cmd_audit_compound(a, &mut manifest))??;
            (code, Some(a.input.out.clone()))
        }
        Command::AuditSpatial(a) => {
            manifest.config(a, a.engine.seed);
            let code = with_workers(a.engine.workers, || cmd_audit_spatial(a, &mut manifest))??;
            (code, Some(a.input.out.clone()))
        }
        Command::GenSynthetic(a) => {
            let code = cmd_gen_synthetic(a, &mut manifest)?;
            (code, None)
        }
    };
    manifest.finish(started);
    let path = match (&cli.command, out_dir) {
        (_, Some(dir)) => dir.join("manifest.json"),
        (Command::GenSynthetic(a), None) => manifest_path_for(&a.out),
        _ => unreachable!("every audit command has an output directory"),
    };
    write_json(&path, &manifest.to_json())?;
    Ok(code)
}

fn manifest_path_for(file: &Path) -> PathBuf {
    let mut name = file.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    file.with_file_name(name)
}

/// Record of one invocation: enough to re-run it and get identical outputs.
struct Manifest {
    argv: Vec<String>,
    command: String,
    config: Json,
    seed: Option<u64>,
    inputs: Vec<Json>,
    outputs: Vec<String>,
    extra: serde_json::Map<String, Json>,
    elapsed_ms: u128,
}

impl Manifest {
    fn new(argv: &[String]) -> Self {
        Manifest {
            argv: argv.to_vec(),
            command: argv.get(1).cloned().unwrap_or_default(),
            config: Json::Null,
            seed: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
            extra: serde_json::Map::new(),
            elapsed_ms: 0,
        }
    }

    fn config(&mut self, args: &impl Serialize, seed: u64) {
        self.config = serde_json::to_value(args).expect("args serialize");
        self.seed = Some(seed);
    }

    fn input(&mut self, path: &Path) -> CliResult<()> {
        let bytes = fs::read(path).map_err(|e| Failure::from(Error::io(path, e)))?;
        self.inputs.push(json!({
            "path": path.display().to_string(),
            "sha256": hex::encode(Sha256::digest(&bytes)),
            "bytes": bytes.len(),
        }));
        Ok(())
    }

    fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    fn finish(&mut self, started: Instant) {
        self.elapsed_ms = started.elapsed().as_millis();
    }

    fn to_json(&self) -> Json {
        json!({
            "tool": "covshift",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "argv": self.argv,
            "config": self.config,
            "seed": self.seed,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "details": self.extra,
            "timing": { "elapsed_ms": self.elapsed_ms as u64 },
        })
    }
}

fn write_json(path: &Path, value: &Json) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json serializes");
    text.push('\n');
    fs::write(path, text).map_err(|e| Failure::from(Error::io(path, e)))
}

fn create_file(path: &Path) -> CliResult<fs::File> {
    fs::File::create(path).map_err(|e| Failure::from(Error::io(path, e)))
}

struct Loaded {
    schema: FeatureSchema,
    table: CustomerTable,
    inspected: Vec<bool>,
}

fn load_input(input: &InputArgs, manifest: &mut Manifest) -> CliResult<Loaded> {
    let schema = FeatureSchema::from_file(&input.schema)?;
    if schema.inspected_column.is_none() {
        return Err(Failure::input("schema declares no inspected_column"));
    }
    manifest.input(&input.schema)?;
    manifest.input(&input.data)?;
    let loaded = load_customers(&input.data, &schema, &LoadOptions { strict: input.strict })?;
    eprintln!("loaded {} rows, rejected {}", loaded.table.len(), loaded.rejected.len());
    for r in loaded.rejected.iter().take(10) {
        eprintln!("  row {}: {}", r.row, r.reason);
    }
    manifest.extra.insert("rows_loaded".into(), json!(loaded.table.len()));
    manifest
        .extra
        .insert("rows_rejected".into(), json!(loaded.rejected.len()));
    fs::create_dir_all(&input.out).map_err(|e| Failure::from(Error::io(&input.out, e)))?;
    Ok(Loaded {
        schema,
        table: loaded.table,
        inspected: loaded.inspected.expect("schema has an inspected column"),
    })
}

fn validate_engine(engine: &EngineArgs) -> CliResult<AuditConfig> {
    let config = engine.config();
    config.validate()?;
    if !engine.threshold.is_finite() {
        return Err(Failure::input("threshold must be finite"));
    }
    Ok(config)
}

fn write_reports(
    rows: &[crate::audit::ReportRow],
    engine: &EngineArgs,
    out: &Path,
    manifest: &mut Manifest,
) -> CliResult<()> {
    let csv_path = out.join("report.csv");
    write_report_csv(rows, engine.threshold, create_file(&csv_path)?)?;
    let json_path = out.join("report.json");
    write_json(&json_path, &report_json(rows, engine.threshold))?;
    let trace_path = out.join("trace.json");
    write_json(&trace_path, &trace_json(rows))?;
    for p in [csv_path, json_path, trace_path] {
        manifest.output(&p);
    }
    for row in rows {
        match &row.outcome {
            Ok(r) => eprintln!(
                "{:<40} {:>9.5} ± {:.5}",
                row.feature_set.label, r.mcc_max_mean, r.reliability
            ),
            Err(e) => eprintln!("{:<40} {e}", row.feature_set.label),
        }
    }
    eprintln!("note: {LOW_MCC_CAVEAT}");
    Ok(())
}

fn cmd_audit_feature(args: &AuditArgs, manifest: &mut Manifest) -> CliResult<u8> {
    let config = validate_engine(&args.engine)?;
    let data = load_input(&args.input, manifest)?;
    let names = data.schema.feature_names();
    let sets = FeatureSet::singletons(&names);
    let rows = audit_features(&data.table, &data.inspected, &sets, &config)?;
    write_reports(&rows, &args.engine, &args.input.out, manifest)?;
    Ok(EXIT_OK)
}

/// Parse `a,b,a` into `[a, b]`, warning about duplicates.
fn parse_set(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if out.iter().any(|n| n == name) {
            eprintln!("warning: duplicate feature `{name}` in set `{text}` ignored");
        } else {
            out.push(name.to_string());
        }
    }
    out
}

pub fn compound_sets(args: &CompoundArgs, schema: &FeatureSchema) -> CliResult<Vec<FeatureSet>> {
    let names = schema.feature_names();
    let mut sets = Vec::new();
    for text in &args.sets {
        let features = parse_set(text);
        if features.is_empty() {
            return Err(Failure::input(format!("empty feature set `{text}`")));
        }
        for f in &features {
            schema.feature_index(f)?;
        }
        sets.push(FeatureSet::new(features, &names));
    }
    if args.all_pairs {
        sets.extend(FeatureSet::pairs(&names));
    }
    if args.all {
        sets.push(FeatureSet::all(&names));
    }
    if sets.is_empty() {
        return Err(Failure::input("no feature sets: pass --set, --all-pairs or --all"));
    }
    Ok(sets)
}

fn cmd_audit_compound(args: &CompoundArgs, manifest: &mut Manifest) -> CliResult<u8> {
    let config = validate_engine(&args.engine)?;
    let schema = FeatureSchema::from_file(&args.input.schema)?;
    compound_sets(args, &schema)?;
    let data = load_input(&args.input, manifest)?;
    let sets = compound_sets(args, &data.schema)?;
    let rows = audit_features(&data.table, &data.inspected, &sets, &config)?;
    write_reports(&rows, &args.engine, &args.input.out, manifest)?;
    Ok(EXIT_OK)
}

fn parse_levels(text: &str) -> CliResult<Vec<DivisionLevel>> {
    if text.trim() == "all" {
        return Ok(DivisionLevel::ALL.to_vec());
    }
    let mut levels: Vec<DivisionLevel> = text
        .split(',')
        .map(|s| s.trim().parse::<DivisionLevel>())
        .collect::<crate::Result<_>>()?;
    levels.sort();
    levels.dedup();
    Ok(levels)
}

fn parse_floats<const N: usize>(text: &str, what: &str) -> CliResult<[f64; N]> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure::input(format!("cannot parse {what} `{text}`")))?;
    parts
        .try_into()
        .map_err(|_| Failure::input(format!("{what} needs {N} comma-separated values")))
}

fn cmd_audit_spatial(args: &SpatialArgs, manifest: &mut Manifest) -> CliResult<u8> {
    let config = validate_engine(&args.engine)?;
    let levels = parse_levels(&args.levels)?;
    let [nx, ny] = parse_floats::<2>(&args.resolution, "resolution")?;
    if nx < 1.0 || ny < 1.0 || nx.fract() != 0.0 || ny.fract() != 0.0 {
        return Err(Failure::input("resolution must be two positive integers"));
    }
    let (nx, ny) = (nx as usize, ny as usize);
    let features = parse_set(&args.features);
    let explicit_bounds = match &args.bounds {
        Some(b) => {
            let [a, b_, c, d] = parse_floats::<4>(b, "bounds")?;
            Some(Bounds::new(a, b_, c, d)?)
        }
        None => None,
    };

    let data = load_input(&args.input, manifest)?;
    for f in &features {
        data.schema.feature_index(f)?;
    }
    let bounds = match explicit_bounds {
        Some(b) => b,
        None => Bounds::of_table(&data.table, 0.01)
            .ok_or_else(|| Failure::input("no customer locations to derive raster bounds from; pass --bounds"))?,
    };
    manifest.extra.insert("bounds".into(), json!(bounds));

    let out = &args.input.out;
    let mut summary = serde_json::Map::new();
    let mut exit = EXIT_OK;
    for level in levels {
        let scores = audit_divisions(&data.table, &data.inspected, level, &features, &config)?;
        let name = level.as_str();

        let csv_path = out.join(format!("divisions_{name}.csv"));
        write_divisions_csv(&scores, create_file(&csv_path)?)?;
        let geo_path = out.join(format!("divisions_{name}.geojson"));
        write_json(&geo_path, &divisions_geojson(&scores))?;
        manifest.output(&csv_path);
        manifest.output(&geo_path);

        let skips = skip_summary(&scores);
        let scored = scores.iter().filter(|s| s.score().is_some()).count();
        eprintln!(
            "{name}: {} divisions, {scored} audited, skipped {:?}",
            scores.len(),
            skips
        );
        summary.insert(name.into(), level_summary(&scores, scored));

        match rasterize(&scores, bounds, nx, ny) {
            Ok(raster) => {
                let grid_path = out.join(format!("raster_{name}.csv"));
                let mut grid = create_file(&grid_path)?;
                write_raster_csv(&raster, &mut grid).map_err(|e| Failure::from(Error::io(&grid_path, e)))?;
                let png_path = out.join(format!("raster_{name}.png"));
                render(&raster, Colormap::Viridis, &png_path)?;
                manifest.output(&grid_path);
                manifest.output(&png_path);
                manifest.output(&crate::spatial::sidecar_path(&png_path));
            }
            Err(Error::NoScoredDivisions) => {
                eprintln!("{name}: no division could be audited; no raster written");
                exit = EXIT_INCONCLUSIVE;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let summary_path = out.join("skip_summary.json");
    write_json(&summary_path, &Json::Object(summary))?;
    manifest.output(&summary_path);
    Ok(exit)
}

fn level_summary(scores: &[DivisionScore], scored: usize) -> Json {
    let skipped: Vec<Json> = scores
        .iter()
        .filter_map(|s| {
            s.skip_reason().map(|r| {
                json!({
                    "division_id": s.division_id,
                    "reason": r.as_str(),
                    "n_customers": s.n_customers,
                    "n_selected": s.n_selected,
                })
            })
        })
        .collect();
    json!({
        "divisions": scores.len(),
        "audited": scored,
        "skipped_by_reason": skip_summary(scores),
        "skipped": skipped,
    })
}

fn cmd_gen_synthetic(args: &GenArgs, manifest: &mut Manifest) -> CliResult<u8> {
    let mut scenario = match (&args.preset, &args.spec) {
        (Some(name), None) => {
            if !PRESETS.contains(&name.as_str()) {
                return Err(Failure::input(format!(
                    "unknown preset `{name}`; available presets: {}",
                    PRESETS.join(", ")
                )));
            }
            Scenario::preset(name, args.seed.unwrap_or(0), args.n.unwrap_or(20_000))?
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::from(Error::io(path, e)))?;
            manifest.input(path)?;
            Scenario::from_toml_str(&text)?
        }
        _ => {
            return Err(Failure::input(format!(
                "pass exactly one of --preset or --spec; presets: {}",
                PRESETS.join(", ")
            )))
        }
    };
    if let Some(seed) = args.seed {
        scenario.population.seed = seed;
    }
    if let Some(n) = args.n {
        scenario.population.n_customers = n;
    }
    if let Some(s) = args.strength {
        scenario = scenario.with_strength(s);
    }
    scenario.bias.validate()?;
    manifest.config = json!({ "args": args, "scenario": scenario });
    manifest.seed = Some(scenario.population.seed);

    let (pop, flags) = scenario.generate()?;
    write_customers(&pop.table, Some(&flags), create_file(&args.out)?)?;
    manifest.output(&args.out);
    if let Some(schema_out) = &args.schema_out {
        fs::write(schema_out, pop.table.schema().to_toml_string())
            .map_err(|e| Failure::from(Error::io(schema_out, e)))?;
        manifest.output(schema_out);
    }
    eprintln!(
        "wrote {} customers ({} inspected) to {}",
        pop.table.len(),
        flags.iter().filter(|&&f| f).count(),
        args.out.display()
    );
    Ok(EXIT_OK)
}
