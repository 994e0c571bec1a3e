//! Census orchestration: classify every scheme of a degree/genus pair,
//! decide exceptionality, persist and render the results.
//!
//! A scheme is exceptional when it is realized by exactly one connected
//! covering class. Schemes with no connected class are counted in the
//! summary but omitted from the table. Output is a pure function of
//! (degree, genus, format version): identical bytes across runs and worker
//! counts.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::character::CharacterTable;
use crate::dessin::{dessin_from_class, euler_genus};
use crate::enumerate::{class_mass_sum, enumerate_classes, CoveringClass, EnumerationLimits};
use crate::error::{Error, Result};
use crate::mass::{frobenius_mass, Mass};
use crate::partition::{schemes_of_genus, RamificationScheme};
use crate::perm::Permutation;

/// Version stamp carried by every census file; bump on layout changes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Default)]
pub struct CensusConfig {
    /// Directory for cached character tables; `None` recomputes per run.
    pub cache_dir: Option<PathBuf>,
    pub limits: EnumerationLimits,
}

/// One classified scheme.
#[derive(Clone, Debug)]
pub struct CensusRow {
    pub degree: u32,
    pub scheme: RamificationScheme,
    pub genus: u32,
    pub num_connected: usize,
    /// Automorphism orders of the connected classes, ascending.
    pub aut_orders: Vec<u64>,
    /// Character-formula mass: all coverings, disconnected included.
    pub total_mass: Mass,
    /// Sum of 1/aut over connected classes only.
    pub connected_mass: Mass,
    pub exceptional: bool,
    /// The unique connected class's monodromy triple, present iff exceptional.
    pub representative: Option<[Permutation; 3]>,
}

impl CensusRow {
    /// True when the character-formula mass exceeds the connected mass, i.e.
    /// disconnected coverings share this scheme and the formula alone does
    /// not equal 1/|Aut| of the exceptional covering.
    pub fn has_disconnected_companion(&self) -> bool {
        self.total_mass != self.connected_mass
    }
}

/// The classification of one (degree, genus) pair.
#[derive(Clone, Debug)]
pub struct CensusReport {
    pub degree: u32,
    pub genus: u32,
    /// Schemes of the right genus that were examined, realized or not.
    pub schemes_examined: usize,
    pub rows: Vec<CensusRow>,
}

impl CensusReport {
    pub fn summary(&self) -> DegreeSummary {
        DegreeSummary {
            degree: self.degree,
            genus: self.genus,
            schemes_examined: self.schemes_examined,
            schemes_realized: self.rows.len(),
            connected_classes: self.rows.iter().map(|r| r.num_connected).sum(),
            exceptional: self.rows.iter().filter(|r| r.exceptional).count(),
        }
    }
}

/// Per-degree counts for range runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSummary {
    pub degree: u32,
    pub genus: u32,
    pub schemes_examined: usize,
    pub schemes_realized: usize,
    pub connected_classes: usize,
    pub exceptional: usize,
}

impl std::fmt::Display for DegreeSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "degree {} genus {}: schemes examined {}, realized {}, connected classes {}, exceptional: {}",
            self.degree,
            self.genus,
            self.schemes_examined,
            self.schemes_realized,
            self.connected_classes,
            self.exceptional
        )
    }
}

fn build_row(
    scheme: &RamificationScheme,
    genus: u32,
    table: &CharacterTable,
    limits: &EnumerationLimits,
) -> Result<Option<CensusRow>> {
    let classes = enumerate_classes(scheme, limits)?;
    let connected: Vec<&CoveringClass> = classes.iter().filter(|c| c.connected()).collect();
    if connected.is_empty() {
        return Ok(None);
    }
    let mut aut_orders: Vec<u64> = connected.iter().map(|c| c.aut_order()).collect();
    aut_orders.sort_unstable();
    let total_mass = frobenius_mass(scheme, table);
    let connected_mass = class_mass_sum(&classes, true);
    assert!(
        connected_mass <= total_mass,
        "connected mass may not exceed the total for {scheme}"
    );
    let exceptional = connected.len() == 1;
    let representative = if exceptional {
        let t = connected[0].triple();
        Some([t[0].clone(), t[1].clone(), t[2].clone()])
    } else {
        None
    };
    Ok(Some(CensusRow {
        degree: scheme.degree(),
        scheme: scheme.clone(),
        genus,
        num_connected: connected.len(),
        aut_orders,
        total_mass,
        connected_mass,
        exceptional,
        representative,
    }))
}

/// Classifies every scheme of the given degree and genus. One row per
/// scheme realized by at least one connected covering, in scheme order.
/// Schemes are processed in parallel on the current rayon pool; the result
/// does not depend on the worker count.
pub fn census(degree: u32, genus: u32, config: &CensusConfig) -> Result<CensusReport> {
    let table = CharacterTable::load_or_compute(degree, config.cache_dir.as_deref());
    let schemes = schemes_of_genus(degree, genus);
    let rows: Vec<Option<CensusRow>> = schemes
        .par_iter()
        .map(|s| build_row(s, genus, &table, &config.limits))
        .collect::<Result<_>>()?;
    Ok(CensusReport {
        degree,
        genus,
        schemes_examined: schemes.len(),
        rows: rows.into_iter().flatten().collect(),
    })
}

/// Re-derives the consistency guarantees for one scheme: the character
/// formula must equal the sum of 1/aut over ALL enumerated classes, and
/// every connected class's dessin must have the Riemann-Hurwitz genus.
/// Returns the classes for reuse.
pub fn verify_scheme(
    scheme: &RamificationScheme,
    table: &CharacterTable,
    limits: &EnumerationLimits,
) -> Result<Vec<CoveringClass>> {
    let classes = enumerate_classes(scheme, limits)?;
    let by_enumeration = class_mass_sum(&classes, false);
    let by_formula = frobenius_mass(scheme, table);
    if by_enumeration != by_formula {
        return Err(Error::Verification {
            scheme: scheme.to_string(),
            detail: format!(
                "mass identity fails: enumeration gives {by_enumeration}, formula gives {by_formula}"
            ),
        });
    }
    for class in classes.iter().filter(|c| c.connected()) {
        let genus = euler_genus(&dessin_from_class(class)?);
        if Some(genus) != scheme.genus() {
            return Err(Error::Verification {
                scheme: scheme.to_string(),
                detail: format!(
                    "Euler genus {genus} disagrees with Riemann-Hurwitz {:?}",
                    scheme.genus()
                ),
            });
        }
    }
    Ok(classes)
}

/// Outcome counts of a verification pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyStats {
    pub schemes: usize,
    pub classes: usize,
}

/// Runs `verify_scheme` over every scheme of the degree/genus pair.
pub fn verify_degree(degree: u32, genus: u32, config: &CensusConfig) -> Result<VerifyStats> {
    let table = CharacterTable::load_or_compute(degree, config.cache_dir.as_deref());
    let schemes = schemes_of_genus(degree, genus);
    let class_counts: Vec<usize> = schemes
        .par_iter()
        .map(|s| verify_scheme(s, &table, &config.limits).map(|c| c.len()))
        .collect::<Result<_>>()?;
    Ok(VerifyStats {
        schemes: schemes.len(),
        classes: class_counts.iter().sum(),
    })
}

/// Output encodings for census files.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

const CSV_HEADER: [&str; 11] = [
    "degree",
    "scheme",
    "genus",
    "num_connected",
    "aut_orders",
    "total_mass",
    "connected_mass",
    "exceptional",
    "representative_g0",
    "representative_g1",
    "representative_ginf",
];

/// CSV rendering: a format-version comment, a counts comment, a header row,
/// then one record per scheme. `aut_orders` is semicolon-joined and the
/// representative columns are empty unless the row is exceptional.
pub fn render_csv(report: &CensusReport) -> String {
    let mut out = format!("# belyi-census format-version {FORMAT_VERSION}\n");
    out.push_str(&format!(
        "# degree {} genus {} schemes-examined {}\n",
        report.degree, report.genus, report.schemes_examined
    ));
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("csv header");
    for row in &report.rows {
        let auts = row
            .aut_orders
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let rep: [String; 3] = match &row.representative {
            Some([g0, g1, ginf]) => [
                g0.to_cycle_string(),
                g1.to_cycle_string(),
                ginf.to_cycle_string(),
            ],
            None => [String::new(), String::new(), String::new()],
        };
        writer
            .write_record([
                row.degree.to_string(),
                row.scheme.to_string(),
                row.genus.to_string(),
                row.num_connected.to_string(),
                auts,
                row.total_mass.to_string(),
                row.connected_mass.to_string(),
                row.exceptional.to_string(),
                rep[0].clone(),
                rep[1].clone(),
                rep[2].clone(),
            ])
            .expect("csv record");
    }
    let body = writer.into_inner().expect("csv flush");
    out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
    out
}

#[derive(Serialize)]
struct JsonTriple {
    g0: String,
    g1: String,
    g_inf: String,
}

#[derive(Serialize)]
struct JsonRow {
    degree: u32,
    scheme: String,
    genus: u32,
    num_connected: usize,
    aut_orders: Vec<u64>,
    total_mass: String,
    connected_mass: String,
    exceptional: bool,
    representative: Option<JsonTriple>,
}

#[derive(Serialize)]
struct JsonReport {
    format_version: u32,
    degree: u32,
    genus: u32,
    schemes_examined: usize,
    rows: Vec<JsonRow>,
}

/// JSON rendering mirroring the CSV columns.
pub fn render_json(report: &CensusReport) -> String {
    let doc = JsonReport {
        format_version: FORMAT_VERSION,
        degree: report.degree,
        genus: report.genus,
        schemes_examined: report.schemes_examined,
        rows: report
            .rows
            .iter()
            .map(|row| JsonRow {
                degree: row.degree,
                scheme: row.scheme.to_string(),
                genus: row.genus,
                num_connected: row.num_connected,
                aut_orders: row.aut_orders.clone(),
                total_mass: row.total_mass.to_string(),
                connected_mass: row.connected_mass.to_string(),
                exceptional: row.exceptional,
                representative: row.representative.as_ref().map(|[g0, g1, ginf]| JsonTriple {
                    g0: g0.to_cycle_string(),
                    g1: g1.to_cycle_string(),
                    g_inf: ginf.to_cycle_string(),
                }),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("json rendering");
    text.push('\n');
    text
}

/// On-disk result store: one format-versioned file per (degree, genus) pair.
/// Completed degrees are skipped on rerun after the version is validated.
pub struct ResultStore {
    dir: PathBuf,
    format: OutputFormat,
}

impl ResultStore {
    pub fn new(dir: impl Into<PathBuf>, format: OutputFormat) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(ResultStore { dir, format })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn format(&self) -> OutputFormat {
        self.format
    }

    pub fn path_for(&self, degree: u32, genus: u32) -> PathBuf {
        self.dir.join(format!(
            "census-d{degree:02}-g{genus}.{}",
            self.format.extension()
        ))
    }

    /// True when a file for the pair exists and carries the current format
    /// version. Files with other versions are recomputed.
    pub fn is_complete(&self, degree: u32, genus: u32) -> bool {
        let path = self.path_for(degree, genus);
        let Ok(text) = fs::read_to_string(&path) else {
            return false;
        };
        match self.format {
            OutputFormat::Csv => text
                .lines()
                .next()
                .is_some_and(|l| l == format!("# belyi-census format-version {FORMAT_VERSION}")),
            OutputFormat::Json => serde_json::from_str::<serde_json::Value>(&text)
                .ok()
                .and_then(|v| v.get("format_version").and_then(|x| x.as_u64()))
                .is_some_and(|v| v == u64::from(FORMAT_VERSION)),
        }
    }

    /// Writes the report via a temporary file and rename, so an interrupted
    /// run never leaves a half-written census behind.
    pub fn write(&self, report: &CensusReport) -> Result<PathBuf> {
        let path = self.path_for(report.degree, report.genus);
        let text = match self.format {
            OutputFormat::Csv => render_csv(report),
            OutputFormat::Json => render_json(report),
        };
        let tmp = path.with_extension(format!("{}.tmp", self.format.extension()));
        fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    /// Reconstructs the per-degree summary from a stored file.
    pub fn read_summary(&self, degree: u32, genus: u32) -> Result<DegreeSummary> {
        let path = self.path_for(degree, genus);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let bad = |reason: &str| Error::BadFile {
            path: path.clone(),
            reason: reason.to_string(),
        };
        match self.format {
            OutputFormat::Csv => {
                let counts = text
                    .lines()
                    .nth(1)
                    .and_then(|l| l.strip_prefix("# "))
                    .ok_or_else(|| bad("missing counts comment"))?;
                let fields: Vec<&str> = counts.split_whitespace().collect();
                if fields.len() != 6 || fields[0] != "degree" || fields[2] != "genus" {
                    return Err(bad("malformed counts comment"));
                }
                let schemes_examined: usize =
                    fields[5].parse().map_err(|_| bad("bad schemes-examined"))?;
                let mut reader = csv::ReaderBuilder::new()
                    .comment(Some(b'#'))
                    .from_reader(text.as_bytes());
                let mut realized = 0;
                let mut connected_classes = 0;
                let mut exceptional = 0;
                for record in reader.records() {
                    let record = record.map_err(|_| bad("malformed csv record"))?;
                    realized += 1;
                    connected_classes += record
                        .get(3)
                        .and_then(|v| v.parse::<usize>().ok())
                        .ok_or_else(|| bad("bad num_connected"))?;
                    if record.get(7) == Some("true") {
                        exceptional += 1;
                    }
                }
                Ok(DegreeSummary {
                    degree,
                    genus,
                    schemes_examined,
                    schemes_realized: realized,
                    connected_classes,
                    exceptional,
                })
            }
            OutputFormat::Json => {
                let doc: serde_json::Value =
                    serde_json::from_str(&text).map_err(|_| bad("malformed json"))?;
                let rows = doc
                    .get("rows")
                    .and_then(|r| r.as_array())
                    .ok_or_else(|| bad("missing rows"))?;
                Ok(DegreeSummary {
                    degree,
                    genus,
                    schemes_examined: doc
                        .get("schemes_examined")
                        .and_then(|v| v.as_u64())
                        .ok_or_else(|| bad("missing schemes_examined"))?
                        as usize,
                    schemes_realized: rows.len(),
                    connected_classes: rows
                        .iter()
                        .map(|r| r.get("num_connected").and_then(|v| v.as_u64()).unwrap_or(0))
                        .sum::<u64>() as usize,
                    exceptional: rows
                        .iter()
                        .filter(|r| r.get("exceptional").and_then(|v| v.as_bool()) == Some(true))
                        .count(),
                })
            }
        }
    }
}

/// Runs the census for every degree in `n_min..=n_max`, persisting each
/// degree on completion. Degrees whose files validate are skipped, so an
/// interrupted run resumes where it stopped.
pub fn run_range(
    n_min: u32,
    n_max: u32,
    genus: u32,
    store: &ResultStore,
    config: &CensusConfig,
) -> Result<Vec<DegreeSummary>> {
    let mut summaries = Vec::new();
    for degree in n_min..=n_max {
        if store.is_complete(degree, genus) {
            summaries.push(store.read_summary(degree, genus)?);
            continue;
        }
        let report = census(degree, genus, config)?;
        store.write(&report)?;
        summaries.push(report.summary());
    }
    Ok(summaries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_census() {
        let report = census(1, 0, &CensusConfig::default()).unwrap();
        assert_eq!(report.schemes_examined, 1);
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert!(row.exceptional);
        assert_eq!(row.num_connected, 1);
        assert_eq!(row.aut_orders, vec![1]);
        assert_eq!(row.total_mass, Mass::one());
        assert!(row.representative.is_some());
    }

    #[test]
    fn degree_six_genus_one_anchors() {
        let report = census(6, 1, &CensusConfig::default()).unwrap();
        let exceptional: Vec<String> = report
            .rows
            .iter()
            .filter(|r| r.exceptional)
            .map(|r| r.scheme.to_string())
            .collect();
        assert!(exceptional.contains(&"6|3,3|2,2,2".to_string()), "{exceptional:?}");
        assert!(exceptional.contains(&"5,1|3,3|3,3".to_string()), "{exceptional:?}");
    }

    #[test]
    fn row_invariants_hold() {
        let report = census(5, 1, &CensusConfig::default()).unwrap();
        assert!(!report.rows.is_empty());
        for row in &report.rows {
            assert_eq!(row.exceptional, row.num_connected == 1);
            assert_eq!(row.aut_orders.len(), row.num_connected);
            let mass: Mass = row
                .aut_orders
                .iter()
                .fold(Mass::zero(), |mut acc, &a| {
                    acc += &Mass::one_over(a);
                    acc
                });
            assert_eq!(mass, row.connected_mass);
            assert!(row.connected_mass <= row.total_mass);
            assert_eq!(row.representative.is_some(), row.exceptional);
        }
    }

    #[test]
    fn verify_degree_passes_small() {
        for (n, g) in [(4, 0), (5, 1), (6, 1)] {
            let stats = verify_degree(n, g, &CensusConfig::default()).unwrap();
            assert!(stats.schemes > 0);
        }
    }

    #[test]
    fn csv_rendering_shape() {
        let report = census(2, 0, &CensusConfig::default()).unwrap();
        let text = render_csv(&report);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# belyi-census format-version 1"));
        assert!(lines.next().unwrap().starts_with("# degree 2 genus 0"));
        assert_eq!(lines.next(), Some(CSV_HEADER.join(",").as_str()));
        assert_eq!(text.lines().count(), 3 + report.rows.len());
    }

    #[test]
    fn json_rendering_shape() {
        let report = census(2, 0, &CensusConfig::default()).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&render_json(&report)).unwrap();
        assert_eq!(doc["format_version"], 1);
        assert_eq!(doc["degree"], 2);
        assert_eq!(doc["rows"].as_array().unwrap().len(), report.rows.len());
    }

    #[test]
    fn format_parse() {
        assert_eq!("csv".parse::<OutputFormat>().unwrap(), OutputFormat::Csv);
        assert_eq!("json".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
