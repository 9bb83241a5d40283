//! Customer tables, CSV ingestion, one-hot encoding and the selection-labeled
//! dataset that the audit engine consumes.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of administrative levels in the division hierarchy.
pub const HIERARCHY_DEPTH: usize = 4;

fn default_id_column() -> String {
    "customer_id".to_string()
}

fn default_longitude() -> String {
    "longitude".to_string()
}

fn default_latitude() -> String {
    "latitude".to_string()
}

fn default_hierarchy() -> Vec<String> {
    ["region", "municipality", "locality", "neighborhood"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureKind {
    Categorical {
        levels: Vec<String>,
    },
    Continuous,
    /// Longitude/latitude pair stored in two CSV columns.
    Location {
        #[serde(default = "default_longitude")]
        longitude_column: String,
        #[serde(default = "default_latitude")]
        latitude_column: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureDef {
    pub name: String,
    #[serde(flatten)]
    pub kind: FeatureKind,
}

impl FeatureDef {
    pub fn categorical(name: &str, levels: &[&str]) -> Self {
        FeatureDef {
            name: name.to_string(),
            kind: FeatureKind::Categorical {
                levels: levels.iter().map(|s| s.to_string()).collect(),
            },
        }
    }

    pub fn continuous(name: &str) -> Self {
        FeatureDef {
            name: name.to_string(),
            kind: FeatureKind::Continuous,
        }
    }

    pub fn location(name: &str) -> Self {
        FeatureDef {
            name: name.to_string(),
            kind: FeatureKind::Location {
                longitude_column: default_longitude(),
                latitude_column: default_latitude(),
            },
        }
    }

    /// CSV columns carrying this feature.
    pub fn csv_columns(&self) -> Vec<&str> {
        match &self.kind {
            FeatureKind::Location {
                longitude_column,
                latitude_column,
            } => vec![longitude_column.as_str(), latitude_column.as_str()],
            _ => vec![self.name.as_str()],
        }
    }

    /// Number of encoded columns.
    pub fn width(&self) -> usize {
        match &self.kind {
            FeatureKind::Categorical { levels } => levels.len(),
            FeatureKind::Continuous => 1,
            FeatureKind::Location { .. } => 2,
        }
    }

    pub fn encoded_names(&self) -> Vec<String> {
        match &self.kind {
            FeatureKind::Categorical { levels } => levels.iter().map(|l| format!("{}={}", self.name, l)).collect(),
            FeatureKind::Continuous => vec![self.name.clone()],
            FeatureKind::Location {
                longitude_column,
                latitude_column,
            } => vec![longitude_column.clone(), latitude_column.clone()],
        }
    }
}

/// Declarative description of the customer master data.
///
/// Loaded from TOML:
///
/// ```toml
/// id_column = "customer_id"
/// inspected_column = "inspected"
/// hierarchy_columns = ["region", "municipality", "locality", "neighborhood"]
///
/// [[features]]
/// name = "voltage"
/// kind = "categorical"
/// levels = ["<=2.3kV", ">2.3kV"]
///
/// [[features]]
/// name = "location"
/// kind = "location"
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureSchema {
    #[serde(default = "default_id_column")]
    pub id_column: String,
    #[serde(default)]
    pub inspected_column: Option<String>,
    #[serde(default = "default_hierarchy")]
    pub hierarchy_columns: Vec<String>,
    pub features: Vec<FeatureDef>,
}

impl FeatureSchema {
    pub fn new(features: Vec<FeatureDef>) -> Result<Self> {
        let schema = FeatureSchema {
            id_column: default_id_column(),
            inspected_column: Some("inspected".to_string()),
            hierarchy_columns: default_hierarchy(),
            features,
        };
        schema.validate()?;
        Ok(schema)
    }

    /// The six customer master-data features used for inspection audits:
    /// class, contract status, location, meter type, number of wires, voltage.
    pub fn customer_master_data() -> Self {
        let meter_types: Vec<String> = (1..=22).map(|i| format!("MT{i:02}")).collect();
        let meter_refs: Vec<&str> = meter_types.iter().map(String::as_str).collect();
        FeatureSchema::new(vec![
            FeatureDef::categorical(
                "class",
                &[
                    "power_generation_infrastructure",
                    "residential",
                    "commercial",
                    "industrial",
                    "public",
                    "public_illumination",
                    "rural",
                    "public_service",
                    "reseller",
                ],
            ),
            FeatureDef::categorical("contract_status", &["active", "suspended"]),
            FeatureDef::location("location"),
            FeatureDef::categorical("meter_type", &meter_refs),
            FeatureDef::categorical("number_of_wires", &["1", "2", "3"]),
            FeatureDef::categorical("voltage", &["<=2.3kV", ">2.3kV"]),
        ])
        .expect("built-in schema is valid")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let schema: FeatureSchema = toml::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("schema serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.features.is_empty() {
            return Err(Error::Schema("no features declared".into()));
        }
        if self.hierarchy_columns.len() != HIERARCHY_DEPTH {
            return Err(Error::Schema(format!(
                "expected {HIERARCHY_DEPTH} hierarchy columns, got {}",
                self.hierarchy_columns.len()
            )));
        }
        let mut names = HashSet::new();
        let mut locations = 0;
        for f in &self.features {
            if f.name.is_empty() {
                return Err(Error::Schema("empty feature name".into()));
            }
            if !names.insert(f.name.as_str()) {
                return Err(Error::Schema(format!("duplicate feature `{}`", f.name)));
            }
            match &f.kind {
                FeatureKind::Categorical { levels } => {
                    if levels.is_empty() {
                        return Err(Error::Schema(format!("feature `{}` has no levels", f.name)));
                    }
                    let mut seen = HashSet::new();
                    for l in levels {
                        if l.is_empty() {
                            return Err(Error::Schema(format!(
                                "feature `{}`: empty level is reserved for missing values",
                                f.name
                            )));
                        }
                        if !seen.insert(l.as_str()) {
                            return Err(Error::Schema(format!("feature `{}` has duplicate level `{l}`", f.name)));
                        }
                    }
                }
                FeatureKind::Continuous => {}
                FeatureKind::Location { .. } => locations += 1,
            }
        }
        if locations > 1 {
            return Err(Error::Schema("at most one location feature is allowed".into()));
        }
        let mut columns = HashSet::new();
        for c in self.csv_columns() {
            if !columns.insert(c) {
                return Err(Error::Schema(format!("duplicate CSV column `{c}`")));
            }
        }
        Ok(())
    }

    /// All CSV columns in canonical order: id, feature columns, hierarchy, inspected flag.
    pub fn csv_columns(&self) -> Vec<&str> {
        let mut cols = vec![self.id_column.as_str()];
        for f in &self.features {
            cols.extend(f.csv_columns());
        }
        cols.extend(self.hierarchy_columns.iter().map(String::as_str));
        if let Some(flag) = &self.inspected_column {
            cols.push(flag.as_str());
        }
        cols
    }

    pub fn feature_index(&self, name: &str) -> Result<usize> {
        self.features
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))
    }

    pub fn feature_names(&self) -> Vec<&str> {
        self.features.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn location_feature(&self) -> Option<usize> {
        self.features
            .iter()
            .position(|f| matches!(f.kind, FeatureKind::Location { .. }))
    }
}

/// One raw cell value before encoding.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    /// Index into the declared levels; `None` is missing.
    Level(Option<u32>),
    /// NaN is missing.
    Number(f64),
    /// `[longitude, latitude]`; `None` is missing.
    Location(Option<[f64; 2]>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum FeatureColumn {
    Categorical(Vec<Option<u32>>),
    Continuous(Vec<f64>),
    Location(Vec<Option<[f64; 2]>>),
}

impl FeatureColumn {
    fn empty_for(kind: &FeatureKind) -> Self {
        match kind {
            FeatureKind::Categorical { .. } => FeatureColumn::Categorical(Vec::new()),
            FeatureKind::Continuous => FeatureColumn::Continuous(Vec::new()),
            FeatureKind::Location { .. } => FeatureColumn::Location(Vec::new()),
        }
    }
}

/// The raw customer population, stored column-wise.
#[derive(Clone, Debug, PartialEq)]
pub struct CustomerTable {
    schema: FeatureSchema,
    columns: Vec<FeatureColumn>,
    hierarchy_ids: Vec<[String; HIERARCHY_DEPTH]>,
    customer_ids: Vec<String>,
    id_set: HashSet<String>,
}

impl CustomerTable {
    pub fn new(schema: FeatureSchema) -> Self {
        let columns = schema
            .features
            .iter()
            .map(|f| FeatureColumn::empty_for(&f.kind))
            .collect();
        CustomerTable {
            schema,
            columns,
            hierarchy_ids: Vec::new(),
            customer_ids: Vec::new(),
            id_set: HashSet::new(),
        }
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.customer_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.customer_ids.is_empty()
    }

    pub fn column(&self, feature: usize) -> &FeatureColumn {
        &self.columns[feature]
    }

    pub fn customer_ids(&self) -> &[String] {
        &self.customer_ids
    }

    pub fn hierarchy_ids(&self) -> &[[String; HIERARCHY_DEPTH]] {
        &self.hierarchy_ids
    }

    /// Location of a row, if the schema has a location feature and the row has one.
    pub fn location(&self, row: usize) -> Option<[f64; 2]> {
        let idx = self.schema.location_feature()?;
        match &self.columns[idx] {
            FeatureColumn::Location(v) => v[row],
            _ => None,
        }
    }

    /// Validate and append one customer.
    pub fn push(
        &mut self,
        customer_id: String,
        values: Vec<Value>,
        hierarchy: [String; HIERARCHY_DEPTH],
    ) -> Result<()> {
        if values.len() != self.schema.features.len() {
            return Err(Error::LengthMismatch(values.len(), self.schema.features.len()));
        }
        if self.id_set.contains(&customer_id) {
            return Err(Error::Schema(format!("duplicate customer id `{customer_id}`")));
        }
        for (f, v) in self.schema.features.iter().zip(&values) {
            match (&f.kind, v) {
                (FeatureKind::Categorical { levels }, Value::Level(l)) => {
                    if let Some(l) = l {
                        if *l as usize >= levels.len() {
                            return Err(Error::Schema(format!(
                                "feature `{}`: level index {l} out of range",
                                f.name
                            )));
                        }
                    }
                }
                (FeatureKind::Continuous, Value::Number(x)) => {
                    if x.is_infinite() {
                        return Err(Error::Schema(format!("feature `{}`: infinite value", f.name)));
                    }
                }
                (FeatureKind::Location { .. }, Value::Location(loc)) => {
                    if let Some([lon, lat]) = loc {
                        check_coordinates(*lon, *lat)?;
                    }
                }
                _ => {
                    return Err(Error::Schema(format!(
                        "feature `{}`: value kind does not match schema",
                        f.name
                    )))
                }
            }
        }
        for (col, v) in self.columns.iter_mut().zip(values) {
            match (col, v) {
                (FeatureColumn::Categorical(c), Value::Level(l)) => c.push(l),
                (FeatureColumn::Continuous(c), Value::Number(x)) => c.push(x),
                (FeatureColumn::Location(c), Value::Location(l)) => c.push(l),
                _ => unreachable!("checked above"),
            }
        }
        self.id_set.insert(customer_id.clone());
        self.customer_ids.push(customer_id);
        self.hierarchy_ids.push(hierarchy);
        Ok(())
    }

    /// Raw values of one row, in schema order.
    pub fn row_values(&self, row: usize) -> Vec<Value> {
        self.columns
            .iter()
            .map(|c| match c {
                FeatureColumn::Categorical(v) => Value::Level(v[row]),
                FeatureColumn::Continuous(v) => Value::Number(v[row]),
                FeatureColumn::Location(v) => Value::Location(v[row]),
            })
            .collect()
    }
}

fn check_coordinates(lon: f64, lat: f64) -> Result<()> {
    if !(-180.0..=180.0).contains(&lon) {
        return Err(Error::Schema(format!("longitude {lon} outside [-180, 180]")));
    }
    if !(-90.0..=90.0).contains(&lat) {
        return Err(Error::Schema(format!("latitude {lat} outside [-90, 90]")));
    }
    Ok(())
}

#[derive(Clone, Debug, Default)]
pub struct LoadOptions {
    /// Abort on the first rejected row instead of skipping it.
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rejection {
    /// 1-based data row number (header excluded).
    pub row: usize,
    pub reason: String,
}

#[derive(Debug)]
pub struct LoadedCustomers {
    pub table: CustomerTable,
    /// Present when the schema declares an inspected-flag column.
    pub inspected: Option<Vec<bool>>,
    pub rejected: Vec<Rejection>,
}

pub fn load_customers(
    path: impl AsRef<Path>,
    schema: &FeatureSchema,
    options: &LoadOptions,
) -> Result<LoadedCustomers> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_customers(file, schema, options)
}

fn is_missing_number(cell: &str) -> bool {
    cell.is_empty() || cell.eq_ignore_ascii_case("nan")
}

fn parse_number(cell: &str, column: &str) -> std::result::Result<f64, String> {
    if is_missing_number(cell) {
        return Ok(f64::NAN);
    }
    let x: f64 = cell
        .parse()
        .map_err(|_| format!("column `{column}`: `{cell}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("column `{column}`: non-finite value `{cell}`"))
    }
}

fn parse_flag(cell: &str, column: &str) -> std::result::Result<bool, String> {
    match cell.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" => Ok(true),
        "0" | "false" | "no" => Ok(false),
        _ => Err(format!("column `{column}`: `{cell}` is not a boolean flag")),
    }
}

pub fn read_customers<R: Read>(reader: R, schema: &FeatureSchema, options: &LoadOptions) -> Result<LoadedCustomers> {
    schema.validate()?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let expected: BTreeSet<&str> = schema.csv_columns().into_iter().collect();
    let got: BTreeSet<&str> = header.iter().collect();
    if got.len() != header.len() {
        return Err(Error::HeaderMismatch("duplicate column in header".into()));
    }
    if expected != got {
        let missing: Vec<_> = expected.difference(&got).collect();
        let extra: Vec<_> = got.difference(&expected).collect();
        return Err(Error::HeaderMismatch(format!(
            "missing {missing:?}, unexpected {extra:?}"
        )));
    }
    let position: HashMap<&str, usize> = header.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let level_maps: Vec<Option<HashMap<&str, u32>>> = schema
        .features
        .iter()
        .map(|f| match &f.kind {
            FeatureKind::Categorical { levels } => {
                Some(levels.iter().enumerate().map(|(i, l)| (l.as_str(), i as u32)).collect())
            }
            _ => None,
        })
        .collect();

    let mut table = CustomerTable::new(schema.clone());
    let mut inspected = schema.inspected_column.as_ref().map(|_| Vec::new());
    let mut rejected = Vec::new();

    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record?;
        let parsed = (|| -> std::result::Result<_, String> {
            let cell = |name: &str| record.get(position[name]).unwrap_or("");
            let mut values = Vec::with_capacity(schema.features.len());
            for (f, levels) in schema.features.iter().zip(&level_maps) {
                let v = match &f.kind {
                    FeatureKind::Categorical { .. } => {
                        let raw = cell(&f.name);
                        if raw.is_empty() {
                            Value::Level(None)
                        } else {
                            let idx = levels
                                .as_ref()
                                .and_then(|m| m.get(raw))
                                .ok_or_else(|| format!("feature `{}`: `{raw}` is not a declared level", f.name))?;
                            Value::Level(Some(*idx))
                        }
                    }
                    FeatureKind::Continuous => Value::Number(parse_number(cell(&f.name), &f.name)?),
                    FeatureKind::Location {
                        longitude_column,
                        latitude_column,
                    } => {
                        let lon = parse_number(cell(longitude_column), longitude_column)?;
                        let lat = parse_number(cell(latitude_column), latitude_column)?;
                        if lon.is_nan() || lat.is_nan() {
                            Value::Location(None)
                        } else {
                            check_coordinates(lon, lat).map_err(|e| e.to_string())?;
                            Value::Location(Some([lon, lat]))
                        }
                    }
                };
                values.push(v);
            }
            let hierarchy: [String; HIERARCHY_DEPTH] =
                std::array::from_fn(|l| cell(&schema.hierarchy_columns[l]).to_string());
            let flag = match &schema.inspected_column {
                Some(col) => Some(parse_flag(cell(col), col)?),
                None => None,
            };
            let id = cell(&schema.id_column).to_string();
            if id.is_empty() {
                return Err("empty customer id".to_string());
            }
            Ok((id, values, hierarchy, flag))
        })();
        let outcome = parsed.and_then(|(id, values, hierarchy, flag)| {
            table
                .push(id, values, hierarchy)
                .map(|_| flag)
                .map_err(|e| e.to_string())
        });
        match outcome {
            Ok(flag) => {
                if let (Some(v), Some(f)) = (inspected.as_mut(), flag) {
                    v.push(f);
                }
            }
            Err(reason) => {
                if options.strict {
                    return Err(Error::RejectedRow { row, reason });
                }
                rejected.push(Rejection { row, reason });
            }
        }
    }

    Ok(LoadedCustomers {
        table,
        inspected,
        rejected,
    })
}

fn format_number(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

/// Write a table in the canonical column order of its schema.
pub fn write_customers<W: Write>(table: &CustomerTable, inspected: Option<&[bool]>, writer: W) -> Result<()> {
    let schema = table.schema();
    if schema.inspected_column.is_some() != inspected.is_some() {
        return Err(Error::Config(
            "inspected flags must be supplied exactly when the schema declares the column".into(),
        ));
    }
    if let Some(flags) = inspected {
        if flags.len() != table.len() {
            return Err(Error::LengthMismatch(flags.len(), table.len()));
        }
    }
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(schema.csv_columns())?;
    for row in 0..table.len() {
        let mut rec: Vec<String> = vec![table.customer_ids[row].clone()];
        for (f, col) in schema.features.iter().zip(&table.columns) {
            match (&f.kind, col) {
                (FeatureKind::Categorical { levels }, FeatureColumn::Categorical(v)) => {
                    rec.push(v[row].map(|l| levels[l as usize].clone()).unwrap_or_default())
                }
                (_, FeatureColumn::Continuous(v)) => rec.push(format_number(v[row])),
                (_, FeatureColumn::Location(v)) => match v[row] {
                    Some([lon, lat]) => {
                        rec.push(format_number(lon));
                        rec.push(format_number(lat));
                    }
                    None => {
                        rec.push(String::new());
                        rec.push(String::new());
                    }
                },
                _ => unreachable!("columns follow schema"),
            }
        }
        rec.extend(table.hierarchy_ids[row].iter().cloned());
        if let Some(flags) = inspected {
            rec.push(if flags[row] { "1" } else { "0" }.to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

/// Dense row-major matrix of `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(n_rows: usize, n_cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n_rows * n_cols {
            return Err(Error::LengthMismatch(data.len(), n_rows * n_cols));
        }
        Ok(Matrix { n_rows, n_cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * n_cols);
        for r in rows {
            if r.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    expected: n_cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            n_rows: rows.len(),
            n_cols,
            data,
        })
    }

    /// Single-column matrix.
    pub fn column_vector(values: &[f64]) -> Self {
        Matrix {
            n_rows: values.len(),
            n_cols: 1,
            data: values.to_vec(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.n_cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            n_rows: rows.len(),
            n_cols: self.n_cols,
            data,
        }
    }
}

/// An encoded feature projection of some customer rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Encoded {
    pub matrix: Matrix,
    pub column_names: Vec<String>,
    /// Source row index of each matrix row.
    pub rows: Vec<usize>,
    /// Rows dropped because a continuous or location value under encoding was missing.
    pub dropped: usize,
}

impl Encoded {
    /// Wrap a bare matrix; rows are numbered `0..n`.
    pub fn from_matrix(matrix: Matrix, column_names: Vec<String>) -> Result<Self> {
        if column_names.len() != matrix.n_cols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.n_cols(),
                got: column_names.len(),
            });
        }
        let rows = (0..matrix.n_rows()).collect();
        Ok(Encoded {
            matrix,
            column_names,
            rows,
            dropped: 0,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.n_rows()
    }
}

/// Resolve a feature-name subset to schema indices in schema order, deduplicated.
pub fn resolve_features(schema: &FeatureSchema, features: &[impl AsRef<str>]) -> Result<Vec<usize>> {
    let mut idx = BTreeSet::new();
    for f in features {
        idx.insert(schema.feature_index(f.as_ref())?);
    }
    Ok(idx.into_iter().collect())
}

/// One-hot encode `features` for every row of `table`.
pub fn encode(table: &CustomerTable, features: &[impl AsRef<str>]) -> Result<Encoded> {
    let rows: Vec<usize> = (0..table.len()).collect();
    encode_rows(table, features, &rows)
}

/// One-hot encode `features` for the given subset of rows.
///
/// Categorical features expand to one column per declared level, missing
/// values become an all-zero block. Rows with a missing continuous or
/// location value are dropped and counted in [`Encoded::dropped`].
pub fn encode_rows(table: &CustomerTable, features: &[impl AsRef<str>], rows: &[usize]) -> Result<Encoded> {
    let schema = table.schema();
    let idx = resolve_features(schema, features)?;
    let width: usize = idx.iter().map(|&i| schema.features[i].width()).sum();
    let column_names: Vec<String> = idx.iter().flat_map(|&i| schema.features[i].encoded_names()).collect();

    let mut data = Vec::with_capacity(rows.len() * width);
    let mut kept = Vec::with_capacity(rows.len());
    let mut dropped = 0;
    let mut buf = Vec::with_capacity(width);
    'rows: for &r in rows {
        buf.clear();
        for &fi in &idx {
            match table.column(fi) {
                FeatureColumn::Categorical(v) => {
                    let n_levels = schema.features[fi].width();
                    let start = buf.len();
                    buf.resize(start + n_levels, 0.0);
                    if let Some(l) = v[r] {
                        buf[start + l as usize] = 1.0;
                    }
                }
                FeatureColumn::Continuous(v) => {
                    if v[r].is_nan() {
                        dropped += 1;
                        continue 'rows;
                    }
                    buf.push(v[r]);
                }
                FeatureColumn::Location(v) => match v[r] {
                    Some([lon, lat]) => {
                        buf.push(lon);
                        buf.push(lat);
                    }
                    None => {
                        dropped += 1;
                        continue 'rows;
                    }
                },
            }
        }
        data.extend_from_slice(&buf);
        kept.push(r);
    }
    Ok(Encoded {
        matrix: Matrix::new(kept.len(), width, data)?,
        column_names,
        rows: kept,
        dropped,
    })
}

/// Recover the level index from a one-hot block; `None` for the all-zero (missing) block.
pub fn decode_one_hot(block: &[f64]) -> Option<usize> {
    block.iter().position(|&x| x == 1.0)
}

/// Origin of a row in a [`LabeledTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowOrigin {
    pub selected: bool,
    /// Source row index within the originating encoded matrix.
    pub source_row: usize,
}

/// Selected and not-selected rows merged into one matrix with label `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledTable {
    pub matrix: Matrix,
    /// 1 = selected (inspected), 0 = not selected.
    pub s: Vec<u8>,
    pub column_names: Vec<String>,
    pub origin: Vec<RowOrigin>,
}

impl LabeledTable {
    pub fn n_rows(&self) -> usize {
        self.s.len()
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let pos = self.s.iter().filter(|&&v| v == 1).count();
        [self.s.len() - pos, pos]
    }
}

pub fn label_selection(selected: &Encoded, not_selected: &Encoded) -> Result<LabeledTable> {
    if selected.column_names != not_selected.column_names {
        return Err(Error::LayoutMismatch(format!(
            "{:?} vs {:?}",
            selected.column_names, not_selected.column_names
        )));
    }
    if selected.n_rows() == 0 {
        return Err(Error::NoSelected);
    }
    if not_selected.n_rows() == 0 {
        return Err(Error::NoNotSelected);
    }
    let n_cols = selected.matrix.n_cols();
    let n = selected.n_rows() + not_selected.n_rows();
    let mut data = Vec::with_capacity(n * n_cols);
    data.extend_from_slice(selected.matrix.as_slice());
    data.extend_from_slice(not_selected.matrix.as_slice());
    let mut s = vec![1u8; selected.n_rows()];
    s.resize(n, 0);
    let origin = selected
        .rows
        .iter()
        .map(|&r| RowOrigin {
            selected: true,
            source_row: r,
        })
        .chain(not_selected.rows.iter().map(|&r| RowOrigin {
            selected: false,
            source_row: r,
        }))
        .collect();
    Ok(LabeledTable {
        matrix: Matrix::new(n, n_cols, data)?,
        s,
        column_names: selected.column_names.clone(),
        origin,
    })
}

/// Split a table's rows by inspected flag and encode both halves.
pub fn encode_split(
    table: &CustomerTable,
    inspected: &[bool],
    features: &[impl AsRef<str>],
    rows: Option<&[usize]>,
) -> Result<(Encoded, Encoded)> {
    if inspected.len() != table.len() {
        return Err(Error::LengthMismatch(inspected.len(), table.len()));
    }
    let all: Vec<usize>;
    let rows = match rows {
        Some(r) => r,
        None => {
            all = (0..table.len()).collect();
            &all
        }
    };
    let (sel, not): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&r| inspected[r]);
    Ok((encode_rows(table, features, &sel)?, encode_rows(table, features, &not)?))
}
