//! Synthetic customer populations with feature-dependent inspection bias.
//!
//! Customers are drawn cluster by cluster: a cluster fixes the region,
//! municipality and locality ids and a Gaussian location around its centre;
//! neighbourhoods are square cells of `neighborhood_cell` degrees inside the
//! locality. Categorical features are drawn independently. Inspection flags
//! depend only on the generated features (and cluster), never on any outcome.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{CustomerTable, FeatureDef, FeatureKind, FeatureSchema, Value, HIERARCHY_DEPTH};
use crate::error::{Error, Result};
use crate::rng;

const BLOCK_ROWS: usize = 4096;

pub const PRESETS: [&str; 3] = ["fig1-two-cities", "null-uniform", "class-biased"];

fn default_cell() -> f64 {
    0.05
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureSpec {
    Categorical {
        name: String,
        levels: Vec<String>,
        weights: Vec<f64>,
    },
    Location {
        name: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub name: String,
    /// `[lon, lat]`
    pub center: [f64; 2],
    pub std: f64,
    pub weight: f64,
    pub region: String,
    pub municipality: String,
    pub locality: String,
    #[serde(default = "default_cell")]
    pub neighborhood_cell: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PopulationSpec {
    pub n_customers: usize,
    pub seed: u64,
    pub features: Vec<FeatureSpec>,
    pub clusters: Vec<ClusterSpec>,
}

fn check_weights(what: &str, weights: &[f64]) -> Result<()> {
    if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::Config(format!("{what}: weights must be finite and positive")));
    }
    Ok(())
}

impl PopulationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.clusters.is_empty() {
            return Err(Error::Config("at least one cluster is required".into()));
        }
        check_weights("clusters", &self.clusters.iter().map(|c| c.weight).collect::<Vec<_>>())?;
        for c in &self.clusters {
            if !(c.std.is_finite() && c.std >= 0.0) {
                return Err(Error::Config(format!(
                    "cluster `{}`: std must be finite and >= 0",
                    c.name
                )));
            }
            if !(c.neighborhood_cell.is_finite() && c.neighborhood_cell > 0.0) {
                return Err(Error::Config(format!(
                    "cluster `{}`: neighborhood_cell must be positive",
                    c.name
                )));
            }
            if !(-180.0..=180.0).contains(&c.center[0]) || !(-90.0..=90.0).contains(&c.center[1]) {
                return Err(Error::Config(format!("cluster `{}`: centre out of range", c.name)));
            }
        }
        for f in &self.features {
            if let FeatureSpec::Categorical { name, levels, weights } = f {
                if levels.len() != weights.len() {
                    return Err(Error::Config(format!(
                        "feature `{name}`: one weight per level required"
                    )));
                }
                check_weights(name, weights)?;
            }
        }
        self.schema().map(|_| ())
    }

    /// Schema of the generated table.
    pub fn schema(&self) -> Result<FeatureSchema> {
        let defs = self
            .features
            .iter()
            .map(|f| match f {
                FeatureSpec::Categorical { name, levels, .. } => FeatureDef {
                    name: name.clone(),
                    kind: FeatureKind::Categorical { levels: levels.clone() },
                },
                FeatureSpec::Location { name } => FeatureDef::location(name),
            })
            .collect();
        FeatureSchema::new(defs)
    }
}

/// A generated table with the cluster of each row.
#[derive(Clone, Debug)]
pub struct Population {
    pub table: CustomerTable,
    pub cluster: Vec<usize>,
    pub spec: PopulationSpec,
}

struct GeneratedRow {
    cluster: usize,
    values: Vec<Value>,
    hierarchy: [String; HIERARCHY_DEPTH],
}

pub fn generate_population(spec: &PopulationSpec) -> Result<Population> {
    spec.validate()?;
    let schema = spec.schema()?;
    let cluster_dist =
        WeightedIndex::new(spec.clusters.iter().map(|c| c.weight)).map_err(|e| Error::Config(e.to_string()))?;
    let level_dists: Vec<Option<WeightedIndex<f64>>> = spec
        .features
        .iter()
        .map(|f| match f {
            FeatureSpec::Categorical { weights, .. } => WeightedIndex::new(weights.iter().copied())
                .map(Some)
                .map_err(|e| Error::Config(e.to_string())),
            FeatureSpec::Location { .. } => Ok(None),
        })
        .collect::<Result<_>>()?;

    let n_blocks = spec.n_customers.div_ceil(BLOCK_ROWS);
    let blocks: Vec<Vec<GeneratedRow>> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng::stream(spec.seed, "population", b as u64);
            let rows = BLOCK_ROWS.min(spec.n_customers - b * BLOCK_ROWS);
            (0..rows)
                .map(|_| {
                    let ci = cluster_dist.sample(&mut rng);
                    let c = &spec.clusters[ci];
                    let mut loc = c.center;
                    let values = spec
                        .features
                        .iter()
                        .zip(&level_dists)
                        .map(|(f, dist)| match f {
                            FeatureSpec::Categorical { .. } => {
                                let d = dist.as_ref().expect("categorical has a distribution");
                                Value::Level(Some(d.sample(&mut rng) as u32))
                            }
                            FeatureSpec::Location { .. } => {
                                let zx: f64 = rng.sample(StandardNormal);
                                let zy: f64 = rng.sample(StandardNormal);
                                loc = [
                                    (c.center[0] + c.std * zx).clamp(-180.0, 180.0),
                                    (c.center[1] + c.std * zy).clamp(-90.0, 90.0),
                                ];
                                Value::Location(Some(loc))
                            }
                        })
                        .collect();
                    let ix = ((loc[0] - c.center[0]) / c.neighborhood_cell).floor() as i64;
                    let iy = ((loc[1] - c.center[1]) / c.neighborhood_cell).floor() as i64;
                    GeneratedRow {
                        cluster: ci,
                        values,
                        hierarchy: [
                            c.region.clone(),
                            c.municipality.clone(),
                            c.locality.clone(),
                            format!("{}:{ix}:{iy}", c.locality),
                        ],
                    }
                })
                .collect()
        })
        .collect();

    let mut table = CustomerTable::new(schema);
    let mut cluster = Vec::with_capacity(spec.n_customers);
    for (i, row) in blocks.into_iter().flatten().enumerate() {
        table.push(format!("C{i:07}"), row.values, row.hierarchy)?;
        cluster.push(row.cluster);
    }
    Ok(Population {
        table,
        cluster,
        spec: spec.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelFactor {
    pub feature: String,
    pub level: String,
    pub factor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterFactor {
    pub cluster: String,
    pub factor: f64,
}

/// Applies to customers whose location lies in the closed box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxFactor {
    pub lon_min: f64,
    pub lon_max: f64,
    pub lat_min: f64,
    pub lat_max: f64,
    pub factor: f64,
}

/// Inspection probability `min(1, base_rate · Π factor^strength)` over the
/// factors matching a customer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasSpec {
    pub base_rate: f64,
    #[serde(default = "one")]
    pub strength: f64,
    #[serde(default)]
    pub level_factors: Vec<LevelFactor>,
    #[serde(default)]
    pub cluster_factors: Vec<ClusterFactor>,
    #[serde(default)]
    pub box_factors: Vec<BoxFactor>,
}

fn one() -> f64 {
    1.0
}

impl BiasSpec {
    pub fn uniform(base_rate: f64) -> Self {
        BiasSpec {
            base_rate,
            strength: 1.0,
            level_factors: vec![],
            cluster_factors: vec![],
            box_factors: vec![],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.base_rate > 0.0 && self.base_rate < 1.0) {
            return Err(Error::Config("base_rate must lie in (0, 1)".into()));
        }
        if !(self.strength.is_finite() && self.strength >= 0.0) {
            return Err(Error::Config("strength must be finite and >= 0".into()));
        }
        let factors = self
            .level_factors
            .iter()
            .map(|f| f.factor)
            .chain(self.cluster_factors.iter().map(|f| f.factor))
            .chain(self.box_factors.iter().map(|f| f.factor));
        for f in factors {
            if !(f.is_finite() && f >= 0.0) {
                return Err(Error::Config(format!("bias factor {f} must be finite and >= 0")));
            }
        }
        Ok(())
    }
}

struct ResolvedBias {
    base_rate: f64,
    strength: f64,
    /// (feature index, level index, factor)
    levels: Vec<(usize, u32, f64)>,
    clusters: Vec<(usize, f64)>,
    boxes: Vec<BoxFactor>,
}

fn resolve_bias(pop: &Population, bias: &BiasSpec) -> Result<ResolvedBias> {
    bias.validate()?;
    let schema = pop.table.schema();
    let mut levels = Vec::new();
    for lf in &bias.level_factors {
        let fi = schema.feature_index(&lf.feature)?;
        let FeatureKind::Categorical { levels: names } = &schema.features[fi].kind else {
            return Err(Error::Config(format!("`{}` is not categorical", lf.feature)));
        };
        let li = names
            .iter()
            .position(|l| *l == lf.level)
            .ok_or_else(|| Error::Config(format!("`{}` has no level `{}`", lf.feature, lf.level)))?;
        levels.push((fi, li as u32, lf.factor));
    }
    let mut clusters = Vec::new();
    for cf in &bias.cluster_factors {
        let ci = pop
            .spec
            .clusters
            .iter()
            .position(|c| c.name == cf.cluster)
            .ok_or_else(|| Error::Config(format!("unknown cluster `{}`", cf.cluster)))?;
        clusters.push((ci, cf.factor));
    }
    Ok(ResolvedBias {
        base_rate: bias.base_rate,
        strength: bias.strength,
        levels,
        clusters,
        boxes: bias.box_factors.clone(),
    })
}

impl ResolvedBias {
    fn probability(&self, pop: &Population, row: usize) -> f64 {
        let mut p = self.base_rate;
        let mut apply = |factor: f64| p *= factor.powf(self.strength);
        for &(fi, li, factor) in &self.levels {
            if let crate::dataset::FeatureColumn::Categorical(col) = pop.table.column(fi) {
                if col[row] == Some(li) {
                    apply(factor);
                }
            }
        }
        for &(ci, factor) in &self.clusters {
            if pop.cluster[row] == ci {
                apply(factor);
            }
        }
        if let Some([lon, lat]) = pop.table.location(row) {
            for b in &self.boxes {
                if (b.lon_min..=b.lon_max).contains(&lon) && (b.lat_min..=b.lat_max).contains(&lat) {
                    apply(b.factor);
                }
            }
        }
        p.clamp(0.0, 1.0)
    }
}

/// Per-customer inspection probabilities under `bias`.
pub fn inspection_probabilities(pop: &Population, bias: &BiasSpec) -> Result<Vec<f64>> {
    let resolved = resolve_bias(pop, bias)?;
    Ok((0..pop.table.len()).map(|r| resolved.probability(pop, r)).collect())
}

/// Draw each customer's inspected flag independently.
pub fn apply_inspection_bias(pop: &Population, bias: &BiasSpec, seed: u64) -> Result<Vec<bool>> {
    let probs = inspection_probabilities(pop, bias)?;
    let flags: Vec<Vec<bool>> = probs
        .par_chunks(BLOCK_ROWS)
        .enumerate()
        .map(|(b, chunk)| {
            let mut rng = rng::stream(seed, "inspection", b as u64);
            chunk.iter().map(|&p| rng.random::<f64>() < p).collect()
        })
        .collect();
    Ok(flags.into_iter().flatten().collect())
}

/// A population together with its inspection policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub population: PopulationSpec,
    pub bias: BiasSpec,
}

fn master_data_features() -> Vec<FeatureSpec> {
    let schema = FeatureSchema::customer_master_data();
    let weights_for = |name: &str, n: usize| -> Vec<f64> {
        match name {
            "class" => vec![0.002, 0.70, 0.15, 0.03, 0.02, 0.01, 0.07, 0.01, 0.008],
            "contract_status" => vec![0.9, 0.1],
            "number_of_wires" => vec![0.5, 0.3, 0.2],
            "voltage" => vec![0.95, 0.05],
            _ => (0..n).map(|i| 1.0 / (i + 1) as f64).collect(),
        }
    };
    schema
        .features
        .iter()
        .map(|f| match &f.kind {
            FeatureKind::Categorical { levels } => FeatureSpec::Categorical {
                name: f.name.clone(),
                levels: levels.clone(),
                weights: weights_for(&f.name, levels.len()),
            },
            _ => FeatureSpec::Location { name: f.name.clone() },
        })
        .collect()
}

fn two_cities() -> Vec<ClusterSpec> {
    vec![
        ClusterSpec {
            name: "large-city".into(),
            center: [-43.2, -22.9],
            std: 0.12,
            weight: 0.8,
            region: "east".into(),
            municipality: "large-city".into(),
            locality: "large-city".into(),
            neighborhood_cell: 0.05,
        },
        ClusterSpec {
            name: "small-city".into(),
            center: [-47.0, -21.2],
            std: 0.06,
            weight: 0.2,
            region: "west".into(),
            municipality: "small-city".into(),
            locality: "small-city".into(),
            neighborhood_cell: 0.05,
        },
    ]
}

impl Scenario {
    /// Built-in scenarios:
    ///
    /// * `fig1-two-cities`: a large coastal city inspected at a low uniform
    ///   rate and a small interior city inspected more, most of all in its
    ///   northern half.
    /// * `null-uniform`: every customer inspected with the same probability.
    /// * `class-biased`: inspection depends on customer class only.
    pub fn preset(name: &str, seed: u64, n_customers: usize) -> Result<Self> {
        let population = PopulationSpec {
            n_customers,
            seed,
            features: master_data_features(),
            clusters: two_cities(),
        };
        let bias = match name {
            "fig1-two-cities" => BiasSpec {
                base_rate: 0.1,
                strength: 1.0,
                level_factors: vec![],
                cluster_factors: vec![
                    ClusterFactor {
                        cluster: "large-city".into(),
                        factor: 0.5,
                    },
                    ClusterFactor {
                        cluster: "small-city".into(),
                        factor: 1.5,
                    },
                ],
                box_factors: vec![BoxFactor {
                    lon_min: -48.0,
                    lon_max: -46.0,
                    lat_min: -21.2,
                    lat_max: -20.0,
                    factor: 4.0,
                }],
            },
            "null-uniform" => BiasSpec::uniform(0.2),
            "class-biased" => BiasSpec {
                base_rate: 0.15,
                strength: 1.0,
                level_factors: vec![
                    LevelFactor {
                        feature: "class".into(),
                        level: "commercial".into(),
                        factor: 3.0,
                    },
                    LevelFactor {
                        feature: "class".into(),
                        level: "industrial".into(),
                        factor: 3.0,
                    },
                    LevelFactor {
                        feature: "class".into(),
                        level: "rural".into(),
                        factor: 0.3,
                    },
                ],
                cluster_factors: vec![],
                box_factors: vec![],
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown preset `{other}`; available: {}",
                    PRESETS.join(", ")
                )))
            }
        };
        Ok(Scenario { population, bias })
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        s.population.validate()?;
        s.bias.validate()?;
        Ok(s)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn with_strength(mut self, strength: f64) -> Self {
        self.bias.strength = strength;
        self
    }

    /// Generate the population and draw inspections with a seed derived
    /// from the population seed.
    pub fn generate(&self) -> Result<(Population, Vec<bool>)> {
        let pop = generate_population(&self.population)?;
        let seed = rng::derive_seed(self.population.seed, "inspection", 0);
        let flags = apply_inspection_bias(&pop, &self.bias, seed)?;
        Ok((pop, flags))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize) -> PopulationSpec {
        Scenario::preset("null-uniform", 3, n).unwrap().population
    }

    /// Count must lie within 3 binomial standard deviations of n·p.
    fn within_three_sigma(count: usize, n: usize, p: f64) -> bool {
        let mean = n as f64 * p;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        (count as f64 - mean).abs() <= 3.0 * sd
    }

    #[test]
    fn empty_population() {
        let pop = generate_population(&spec(0)).unwrap();
        assert!(pop.table.is_empty());
    }

    #[test]
    fn zero_std_cluster_sits_on_its_center() {
        let mut s = spec(500);
        s.clusters.truncate(1);
        s.clusters[0].std = 0.0;
        let pop = generate_population(&s).unwrap();
        for r in 0..pop.table.len() {
            assert_eq!(pop.table.location(r), Some(s.clusters[0].center));
        }
    }

    #[test]
    fn categorical_frequencies_follow_weights() {
        let mut s = spec(10_000);
        s.features = vec![FeatureSpec::Categorical {
            name: "class".into(),
            levels: vec!["residential".into(), "commercial".into()],
            weights: vec![0.7, 0.3],
        }];
        let pop = generate_population(&s).unwrap();
        let crate::dataset::FeatureColumn::Categorical(col) = pop.table.column(0) else {
            panic!()
        };
        let residential = col.iter().filter(|v| **v == Some(0)).count();
        assert!(within_three_sigma(residential, 10_000, 0.7), "{residential}");
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_population(&spec(5000)).unwrap();
        let b = generate_population(&spec(5000)).unwrap();
        assert_eq!(a.table, b.table);
        let mut other = spec(5000);
        other.seed = 4;
        assert_ne!(generate_population(&other).unwrap().table, a.table);
    }

    #[test]
    fn zero_strength_is_uniform() {
        let pop = generate_population(&spec(10_000)).unwrap();
        let mut bias = Scenario::preset("class-biased", 0, 0).unwrap().bias;
        bias.base_rate = 0.2;
        bias.strength = 0.0;
        let probs = inspection_probabilities(&pop, &bias).unwrap();
        assert!(probs.iter().all(|&p| p == 0.2));
        let flags = apply_inspection_bias(&pop, &bias, 9).unwrap();
        let n = flags.iter().filter(|&&f| f).count();
        assert!(within_three_sigma(n, 10_000, 0.2), "{n}");
    }

    #[test]
    fn extreme_cluster_factors_confine_inspections() {
        let pop = generate_population(&spec(4000)).unwrap();
        let bias = BiasSpec {
            cluster_factors: vec![
                ClusterFactor {
                    cluster: "small-city".into(),
                    factor: 1e9,
                },
                ClusterFactor {
                    cluster: "large-city".into(),
                    factor: 0.0,
                },
            ],
            ..BiasSpec::uniform(0.1)
        };
        let flags = apply_inspection_bias(&pop, &bias, 1).unwrap();
        for (r, &f) in flags.iter().enumerate() {
            let small = pop.spec.clusters[pop.cluster[r]].name == "small-city";
            assert_eq!(f, small);
        }
    }

    #[test]
    fn bias_validation() {
        assert!(BiasSpec::uniform(0.0).validate().is_err());
        assert!(BiasSpec::uniform(1.0).validate().is_err());
        let mut b = BiasSpec::uniform(0.5);
        b.box_factors.push(BoxFactor {
            lon_min: 0.0,
            lon_max: 1.0,
            lat_min: 0.0,
            lat_max: 1.0,
            factor: f64::INFINITY,
        });
        assert!(b.validate().is_err());
        let pop = generate_population(&spec(10)).unwrap();
        let mut b = BiasSpec::uniform(0.5);
        b.level_factors.push(LevelFactor {
            feature: "class".into(),
            level: "spaceport".into(),
            factor: 2.0,
        });
        assert!(apply_inspection_bias(&pop, &b, 0).is_err());
    }

    #[test]
    fn presets_and_toml_round_trip() {
        for name in PRESETS {
            let s = Scenario::preset(name, 1, 100).unwrap();
            let back = Scenario::from_toml_str(&s.to_toml_string()).unwrap();
            assert_eq!(s, back);
            assert_eq!(s.population.schema().unwrap(), FeatureSchema::customer_master_data());
        }
        let err = Scenario::preset("nope", 1, 1).unwrap_err().to_string();
        assert!(err.contains("fig1-two-cities"));
    }

    #[test]
    fn two_cities_have_two_localities() {
        let (pop, flags) = Scenario::preset("fig1-two-cities", 7, 3000)
            .unwrap()
            .generate()
            .unwrap();
        let p = crate::spatial::partition(&pop.table, crate::spatial::DivisionLevel::Locality);
        assert_eq!(p.groups.len(), 2);
        assert_eq!(flags.len(), 3000);
    }
}
