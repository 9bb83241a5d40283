//! Per-division audits, median locations and nearest-neighbour shift rasters.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::audit::{quantify_shift, AuditConfig, AuditResult};
use crate::dataset::{encode_split, resolve_features, CustomerTable};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisionLevel {
    Region,
    Municipality,
    Locality,
    Neighborhood,
}

impl DivisionLevel {
    pub const ALL: [DivisionLevel; 4] = [
        DivisionLevel::Region,
        DivisionLevel::Municipality,
        DivisionLevel::Locality,
        DivisionLevel::Neighborhood,
    ];

    /// Position in the hierarchy, coarsest first.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DivisionLevel::Region => "region",
            DivisionLevel::Municipality => "municipality",
            DivisionLevel::Locality => "locality",
            DivisionLevel::Neighborhood => "neighborhood",
        }
    }
}

impl std::str::FromStr for DivisionLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DivisionLevel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown division level `{s}`")))
    }
}

impl std::fmt::Display for DivisionLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Rows grouped by division id at one level.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Partition {
    pub groups: BTreeMap<String, Vec<usize>>,
    /// Rows with an empty division id; never audited.
    pub unassigned: Vec<usize>,
}

pub fn partition(customers: &CustomerTable, level: DivisionLevel) -> Partition {
    let mut p = Partition::default();
    for (row, ids) in customers.hierarchy_ids().iter().enumerate() {
        let id = &ids[level.index()];
        if id.is_empty() {
            p.unassigned.push(row);
        } else {
            p.groups.entry(id.clone()).or_default().push(row);
        }
    }
    p
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        values[n / 2 - 1] * 0.5 + values[n / 2] * 0.5
    }
}

/// Component-wise median location of the given rows, if any has a location.
pub fn median_location(customers: &CustomerTable, rows: &[usize]) -> Option<[f64; 2]> {
    let (mut lons, mut lats): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter_map(|&r| customers.location(r))
        .map(|[lon, lat]| (lon, lat))
        .unzip();
    if lons.is_empty() {
        return None;
    }
    Some([median(&mut lons), median(&mut lats)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    TooFewCustomers,
    SingleClass,
    MccUndefinedEverywhere,
}

impl SkipReason {
    pub fn as_str(self) -> &'static str {
        match self {
            SkipReason::TooFewCustomers => "too_few_customers",
            SkipReason::SingleClass => "single_class",
            SkipReason::MccUndefinedEverywhere => "mcc_undefined_everywhere",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DivisionOutcome {
    Scored(Box<AuditResult>),
    Skipped(SkipReason),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisionScore {
    pub division_id: String,
    pub level: DivisionLevel,
    pub n_customers: usize,
    pub n_selected: usize,
    /// `[lon, lat]` median of member locations.
    pub centroid: Option<[f64; 2]>,
    pub outcome: DivisionOutcome,
}

impl DivisionScore {
    pub fn score(&self) -> Option<f64> {
        match &self.outcome {
            DivisionOutcome::Scored(r) => Some(r.mcc_max_mean),
            DivisionOutcome::Skipped(_) => None,
        }
    }

    pub fn skip_reason(&self) -> Option<SkipReason> {
        match &self.outcome {
            DivisionOutcome::Skipped(r) => Some(*r),
            DivisionOutcome::Scored(_) => None,
        }
    }
}

/// Audit every division at `level`, in division-id order.
///
/// A division is skipped with `too_few_customers` below `max(k, 2)` members,
/// with `single_class` when either class has fewer than `k` usable rows (the
/// folds are stratified), and with `mcc_undefined_everywhere` when no model
/// yields a defined fold MCC. Each division audits with its own seed derived
/// from the config seed and the division id.
pub fn audit_divisions(
    customers: &CustomerTable,
    inspected: &[bool],
    level: DivisionLevel,
    features: &[impl AsRef<str> + Sync],
    config: &AuditConfig,
) -> Result<Vec<DivisionScore>> {
    config.validate()?;
    resolve_features(customers.schema(), features)?;
    if inspected.len() != customers.len() {
        return Err(Error::LengthMismatch(inspected.len(), customers.len()));
    }
    let groups: Vec<(String, Vec<usize>)> = partition(customers, level).groups.into_iter().collect();
    groups
        .par_iter()
        .map(|(id, rows)| {
            let n_selected = rows.iter().filter(|&&r| inspected[r]).count();
            let base = DivisionScore {
                division_id: id.clone(),
                level,
                n_customers: rows.len(),
                n_selected,
                centroid: median_location(customers, rows),
                outcome: DivisionOutcome::Skipped(SkipReason::TooFewCustomers),
            };
            if rows.len() < config.k.max(2) {
                return Ok(base);
            }
            let (sel, not) = encode_split(customers, inspected, features, Some(rows))?;
            if sel.n_rows() < config.k || not.n_rows() < config.k {
                return Ok(DivisionScore {
                    outcome: DivisionOutcome::Skipped(SkipReason::SingleClass),
                    ..base
                });
            }
            let div_config = AuditConfig {
                seed: rng::derive_seed(config.seed, &format!("division/{level}/{id}"), 0),
                ..config.clone()
            };
            let outcome = match quantify_shift(&sel, &not, &div_config) {
                Ok(r) => DivisionOutcome::Scored(Box::new(r)),
                Err(Error::Inconclusive(_)) => DivisionOutcome::Skipped(SkipReason::MccUndefinedEverywhere),
                Err(e) => return Err(e),
            };
            Ok(DivisionScore { outcome, ..base })
        })
        .collect()
}

/// Count of skipped divisions per reason.
pub fn skip_summary(scores: &[DivisionScore]) -> BTreeMap<&'static str, usize> {
    let mut out = BTreeMap::new();
    for s in scores {
        if let Some(r) = s.skip_reason() {
            *out.entry(r.as_str()).or_insert(0) += 1;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lon_min: f64,
    pub lon_max: f64,
    pub lat_min: f64,
    pub lat_max: f64,
}

impl Bounds {
    pub fn new(lon_min: f64, lon_max: f64, lat_min: f64, lat_max: f64) -> Result<Self> {
        let ok = [lon_min, lon_max, lat_min, lat_max].iter().all(|v| v.is_finite())
            && lon_min < lon_max
            && lat_min < lat_max;
        if !ok {
            return Err(Error::Config(format!(
                "invalid bounds lon [{lon_min}, {lon_max}] lat [{lat_min}, {lat_max}]"
            )));
        }
        Ok(Bounds {
            lon_min,
            lon_max,
            lat_min,
            lat_max,
        })
    }

    /// Smallest box holding every location of the table, padded by `pad`
    /// degrees on each side.
    pub fn of_table(customers: &CustomerTable, pad: f64) -> Option<Self> {
        let mut b: Option<[f64; 4]> = None;
        for r in 0..customers.len() {
            if let Some([lon, lat]) = customers.location(r) {
                let e = b.get_or_insert([lon, lon, lat, lat]);
                e[0] = e[0].min(lon);
                e[1] = e[1].max(lon);
                e[2] = e[2].min(lat);
                e[3] = e[3].max(lat);
            }
        }
        let [a, b_, c, d] = b?;
        Bounds::new(a - pad, b_ + pad, c - pad, d + pad).ok()
    }
}

/// Grid of nearest-centroid scores. Row 0 is the northern edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftRaster {
    pub bounds: Bounds,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `ny` rows of `nx` cells; `None` is no-data.
    pub cells: Vec<Option<f64>>,
}

impl ShiftRaster {
    /// `(lon, lat)` of the centre of cell `(col, row)`.
    pub fn cell_center(&self, col: usize, row: usize) -> (f64, f64) {
        cell_center(&self.bounds, self.nx, self.ny, col, row)
    }

    pub fn get(&self, col: usize, row: usize) -> Option<f64> {
        self.cells[row * self.nx + col]
    }

    pub fn max_score(&self) -> Option<f64> {
        self.cells.iter().flatten().copied().reduce(f64::max)
    }
}

fn cell_center(b: &Bounds, nx: usize, ny: usize, col: usize, row: usize) -> (f64, f64) {
    let dx = (b.lon_max - b.lon_min) / nx as f64;
    let dy = (b.lat_max - b.lat_min) / ny as f64;
    (b.lon_min + (col as f64 + 0.5) * dx, b.lat_max - (row as f64 + 0.5) * dy)
}

/// Nearest-neighbour raster of scored division centroids.
///
/// Distance is Euclidean in raw degrees; equidistant centroids resolve to
/// the lexicographically smallest division id.
pub fn rasterize(scores: &[DivisionScore], bounds: Bounds, nx: usize, ny: usize) -> Result<ShiftRaster> {
    if nx == 0 || ny == 0 {
        return Err(Error::Config("raster resolution must be positive".into()));
    }
    let mut sites: Vec<(&str, [f64; 2], f64)> = scores
        .iter()
        .filter_map(|s| Some((s.division_id.as_str(), s.centroid?, s.score()?)))
        .collect();
    if sites.is_empty() {
        return Err(Error::NoScoredDivisions);
    }
    sites.sort_by(|a, b| a.0.cmp(b.0));
    let cells: Vec<Option<f64>> = (0..ny)
        .into_par_iter()
        .flat_map_iter(|row| {
            let sites = &sites;
            (0..nx).map(move |col| {
                let (x, y) = cell_center(&bounds, nx, ny, col, row);
                let mut best = (f64::INFINITY, 0.0);
                for &(_, [lon, lat], score) in sites {
                    let d = (lon - x) * (lon - x) + (lat - y) * (lat - y);
                    if d < best.0 {
                        best = (d, score);
                    }
                }
                Some(best.1)
            })
        })
        .collect();
    Ok(ShiftRaster { bounds, nx, ny, cells })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Colormap {
    #[default]
    Viridis,
}

const VIRIDIS: [[u8; 3]; 9] = [
    [68, 1, 84],
    [71, 44, 122],
    [59, 81, 139],
    [44, 113, 142],
    [33, 144, 141],
    [39, 173, 129],
    [92, 200, 99],
    [170, 220, 50],
    [253, 231, 37],
];

impl Colormap {
    /// Colour for `t` in `[0, 1]`, linearly interpolated between anchors.
    pub fn color(self, t: f64) -> [u8; 3] {
        let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
        let ramp = &VIRIDIS;
        let pos = t * (ramp.len() - 1) as f64;
        let i = (pos.floor() as usize).min(ramp.len() - 2);
        let f = pos - i as f64;
        std::array::from_fn(|c| {
            let a = ramp[i][c] as f64;
            let b = ramp[i + 1][c] as f64;
            (a + (b - a) * f).round() as u8
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RasterSidecar {
    pub bounds: Bounds,
    pub resolution: [usize; 2],
    pub color_scale_max: Option<f64>,
    pub colormap: Colormap,
    pub no_data: String,
}

/// Write the raster as an RGBA PNG and a sidecar JSON next to it.
///
/// Colours span `[0, max score]`; no-data cells are fully transparent.
/// Returns the sidecar, which is also written to `out` with a `.json`
/// extension.
pub fn render(raster: &ShiftRaster, colormap: Colormap, out: &Path) -> Result<RasterSidecar> {
    let max = raster.max_score();
    let mut pixels = Vec::with_capacity(raster.cells.len() * 4);
    for cell in &raster.cells {
        match cell {
            Some(v) => {
                let t = match max {
                    Some(m) if m > 0.0 => v / m,
                    _ => 0.0,
                };
                let [r, g, b] = colormap.color(t);
                pixels.extend_from_slice(&[r, g, b, 255]);
            }
            None => pixels.extend_from_slice(&[0, 0, 0, 0]),
        }
    }
    let file = File::create(out).map_err(|e| Error::io(out, e))?;
    let mut encoder = png::Encoder::new(BufWriter::new(file), raster.nx as u32, raster.ny as u32);
    encoder.set_color(png::ColorType::Rgba);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder.write_header().map_err(|e| Error::Image(e.to_string()))?;
    writer
        .write_image_data(&pixels)
        .map_err(|e| Error::Image(e.to_string()))?;
    writer.finish().map_err(|e| Error::Image(e.to_string()))?;

    let sidecar = RasterSidecar {
        bounds: raster.bounds,
        resolution: [raster.nx, raster.ny],
        color_scale_max: max,
        colormap,
        no_data: "transparent".into(),
    };
    let path = sidecar_path(out);
    write_json(&path, &serde_json::to_value(&sidecar).expect("sidecar serializes"))?;
    Ok(sidecar)
}

pub fn sidecar_path(image: &Path) -> PathBuf {
    image.with_extension("json")
}

pub(crate) fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn opt_num(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Grid CSV: `ny` lines of `nx` values, north row first, empty for no-data.
pub fn write_raster_csv<W: Write>(raster: &ShiftRaster, mut w: W) -> std::io::Result<()> {
    for row in 0..raster.ny {
        let line: Vec<String> = (0..raster.nx).map(|c| opt_num(raster.get(c, row))).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_divisions_csv<W: Write>(scores: &[DivisionScore], w: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record([
        "division_id",
        "level",
        "n_customers",
        "n_selected",
        "centroid_lon",
        "centroid_lat",
        "mcc_max_mean",
        "reliability",
        "winning_params",
        "folds_skipped",
        "skip_reason",
    ])?;
    for s in scores {
        let (lon, lat) = match s.centroid {
            Some([a, b]) => (a.to_string(), b.to_string()),
            None => (String::new(), String::new()),
        };
        let (score, rel, params, skipped, reason) = match &s.outcome {
            DivisionOutcome::Scored(r) => (
                r.mcc_max_mean.to_string(),
                r.reliability.to_string(),
                r.winning_params.to_string(),
                r.folds_skipped.to_string(),
                String::new(),
            ),
            DivisionOutcome::Skipped(r) => (
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                r.as_str().to_string(),
            ),
        };
        w.write_record([
            s.division_id.clone(),
            s.level.to_string(),
            s.n_customers.to_string(),
            s.n_selected.to_string(),
            lon,
            lat,
            score,
            rel,
            params,
            skipped,
            reason,
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

/// Point FeatureCollection of division centroids. Divisions without a
/// centroid have a null geometry.
pub fn divisions_geojson(scores: &[DivisionScore]) -> serde_json::Value {
    let features: Vec<serde_json::Value> = scores
        .iter()
        .map(|s| {
            let geometry = match s.centroid {
                Some([lon, lat]) => json!({"type": "Point", "coordinates": [lon, lat]}),
                None => serde_json::Value::Null,
            };
            let mut props = json!({
                "division_id": s.division_id,
                "level": s.level.as_str(),
                "n_customers": s.n_customers,
                "n_selected": s.n_selected,
            });
            match &s.outcome {
                DivisionOutcome::Scored(r) => {
                    props["mcc_max_mean"] = json!(r.mcc_max_mean);
                    props["reliability"] = json!(r.reliability);
                    props["skip_reason"] = serde_json::Value::Null;
                }
                DivisionOutcome::Skipped(reason) => {
                    props["mcc_max_mean"] = serde_json::Value::Null;
                    props["reliability"] = serde_json::Value::Null;
                    props["skip_reason"] = json!(reason.as_str());
                }
            }
            json!({"type": "Feature", "geometry": geometry, "properties": props})
        })
        .collect();
    json!({"type": "FeatureCollection", "features": features})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{FeatureDef, FeatureSchema, Value};

    fn table(points: &[([f64; 2], &str)]) -> CustomerTable {
        let schema = FeatureSchema::new(vec![FeatureDef::location("location")]).unwrap();
        let mut t = CustomerTable::new(schema);
        for (i, (p, id)) in points.iter().enumerate() {
            t.push(
                format!("c{i}"),
                vec![Value::Location(Some(*p))],
                ["r".into(), id.to_string(), id.to_string(), id.to_string()],
            )
            .unwrap();
        }
        t
    }

    fn scored(id: &str, centroid: [f64; 2], score: f64) -> DivisionScore {
        let result = AuditResult {
            mcc_max_mean: score,
            reliability: 0.0,
            winning_params: crate::tree::TreeModelParams::new(2, 1, crate::tree::PurityMeasure::Gini, 1, 2).unwrap(),
            winning_index: 0,
            folds_skipped: 0,
            total_folds_skipped: 0,
            per_model_trace: vec![],
            fold_tests: vec![],
            n_selected: 0,
            n_not_selected: 0,
        };
        DivisionScore {
            division_id: id.into(),
            level: DivisionLevel::Locality,
            n_customers: 10,
            n_selected: 5,
            centroid: Some(centroid),
            outcome: DivisionOutcome::Scored(Box::new(result)),
        }
    }

    #[test]
    fn partition_groups_and_unassigned() {
        let t = table(&[
            ([0.0, 0.0], "a"),
            ([1.0, 0.0], "b"),
            ([2.0, 0.0], "a"),
            ([3.0, 0.0], ""),
            ([4.0, 0.0], "b"),
        ]);
        let p = partition(&t, DivisionLevel::Municipality);
        assert_eq!(p.groups.len(), 2);
        assert_eq!(p.groups["a"], vec![0, 2]);
        assert_eq!(p.unassigned, vec![3]);
        let p = partition(&t, DivisionLevel::Region);
        assert_eq!(p.groups.len(), 1);
        assert_eq!(p.groups["r"].len(), 5);
    }

    #[test]
    fn median_is_componentwise_and_robust() {
        let t = table(&[
            ([0.0, 5.0], "a"),
            ([1.0, 6.0], "a"),
            ([2.0, 7.0], "a"),
            ([100.0, -80.0], "a"),
            ([1.5, 6.5], "a"),
        ]);
        assert_eq!(median_location(&t, &[0, 1, 2, 3, 4]), Some([1.5, 6.0]));
        assert_eq!(median_location(&t, &[4, 3, 2, 1, 0]), Some([1.5, 6.0]));
        assert_eq!(median_location(&t, &[0, 1]), Some([0.5, 5.5]));
        assert_eq!(median_location(&t, &[]), None);
    }

    #[test]
    fn single_site_gives_uniform_raster() {
        let b = Bounds::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let r = rasterize(&[scored("a", [0.2, 0.3], 0.4)], b, 7, 5).unwrap();
        assert!(r.cells.iter().all(|c| *c == Some(0.4)));
    }

    #[test]
    fn two_sites_split_on_the_bisector() {
        let b = Bounds::new(0.0, 10.0, 0.0, 10.0).unwrap();
        let r = rasterize(&[scored("a", [2.0, 5.0], 0.1), scored("b", [8.0, 5.0], 0.9)], b, 10, 4).unwrap();
        for row in 0..4 {
            for col in 0..10 {
                let expected = if col < 5 { 0.1 } else { 0.9 };
                assert_eq!(r.get(col, row), Some(expected));
            }
        }
    }

    #[test]
    fn equidistant_sites_prefer_smallest_id() {
        let b = Bounds::new(0.0, 2.0, 0.0, 1.0).unwrap();
        // the single cell centre (1, 0.5) is equidistant from both
        let r = rasterize(&[scored("b", [0.0, 0.5], 0.9), scored("a", [2.0, 0.5], 0.1)], b, 1, 1).unwrap();
        assert_eq!(r.get(0, 0), Some(0.1));
    }

    #[test]
    fn no_scored_divisions_is_an_error() {
        let mut s = scored("a", [0.0, 0.0], 0.5);
        s.outcome = DivisionOutcome::Skipped(SkipReason::SingleClass);
        let b = Bounds::new(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(rasterize(&[s], b, 2, 2), Err(Error::NoScoredDivisions)));
    }

    #[test]
    fn colormap_endpoints() {
        assert_eq!(Colormap::Viridis.color(0.0), VIRIDIS[0]);
        assert_eq!(Colormap::Viridis.color(1.0), VIRIDIS[8]);
        assert_eq!(Colormap::Viridis.color(2.0), VIRIDIS[8]);
        assert_eq!(Colormap::Viridis.color(0.5), VIRIDIS[4]);
    }

    #[test]
    fn render_writes_png_and_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let b = Bounds::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let r = rasterize(&[scored("a", [0.1, 0.1], 0.5)], b, 3, 2).unwrap();
        let path = dir.path().join("map.png");
        let side = render(&r, Colormap::Viridis, &path).unwrap();
        assert_eq!(side.color_scale_max, Some(0.5));
        let json: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("map.json")).unwrap()).unwrap();
        assert_eq!(json["color_scale_max"], 0.5);

        let decoder = png::Decoder::new(std::io::BufReader::new(File::open(&path).unwrap()));
        let mut reader = decoder.read_info().unwrap();
        let mut buf = vec![0; reader.output_buffer_size().unwrap()];
        let info = reader.next_frame(&mut buf).unwrap();
        assert_eq!((info.width, info.height), (3, 2));
        let first = &buf[..4];
        assert!(buf.chunks(4).all(|px| px == first));
        assert_eq!(first, &[253, 231, 37, 255]);
    }

    #[test]
    fn unwritable_render_path_fails() {
        let b = Bounds::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let r = rasterize(&[scored("a", [0.1, 0.1], 0.5)], b, 1, 1).unwrap();
        assert!(render(&r, Colormap::Viridis, Path::new("/nonexistent/dir/x.png")).is_err());
    }

    #[test]
    fn level_parsing() {
        assert_eq!("locality".parse::<DivisionLevel>().unwrap(), DivisionLevel::Locality);
        assert!("street".parse::<DivisionLevel>().is_err());
        assert!(DivisionLevel::Region < DivisionLevel::Neighborhood);
    }
}
