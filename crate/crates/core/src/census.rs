//! Exhaustive classification of all mixed graphs on `m` vertices, persisted
//! to an append-only JSON-lines store that can be resumed.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criteria::{criteria_table, CriteriaTable};
use crate::graph::{GraphError, MixedGraph, Vertex};
use crate::identify::{classify_graph, ClassifyOptions, GraphReport, IdentStatus, Verdict};
use crate::parametrize::TargetKind;

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("graph id {id} out of range for m = {m}")]
    IdOutOfRange { m: usize, id: u64 },
    #[error("m = {0} is not supported (need 1 <= m <= 8)")]
    UnsupportedM(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("store {path}: {message}")]
    Store { path: PathBuf, message: String },
    #[error("store {0} already exists; resume it or choose another path")]
    StoreExists(PathBuf),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn pairs(m: usize) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            out.push((i, j));
        }
    }
    out
}

/// Bit `k` is the `k`-th pair `i < j` (lexicographic) as a directed edge,
/// bit `P + k` the same pair as a bidirected edge, `P = m(m-1)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphId {
    pub m: usize,
    pub bits: u64,
}

impl GraphId {
    pub fn count(m: usize) -> Result<u64, CensusError> {
        if m == 0 || m > 8 {
            return Err(CensusError::UnsupportedM(m));
        }
        Ok(1u64 << (m * (m - 1)))
    }

    pub fn new(m: usize, bits: u64) -> Result<Self, CensusError> {
        if bits >= Self::count(m)? {
            return Err(CensusError::IdOutOfRange { m, id: bits });
        }
        Ok(GraphId { m, bits })
    }

    pub fn encode(g: &MixedGraph) -> Result<Self, CensusError> {
        let m = g.m();
        Self::count(m)?;
        let ps = pairs(m);
        let mut bits = 0u64;
        for (k, e) in ps.iter().enumerate() {
            if g.directed().contains(e) {
                bits |= 1 << k;
            }
            if g.bidirected().contains(e) {
                bits |= 1 << (ps.len() + k);
            }
        }
        Ok(GraphId { m, bits })
    }

    pub fn decode(&self) -> Result<MixedGraph, CensusError> {
        Self::new(self.m, self.bits)?;
        let ps = pairs(self.m);
        let pick = |offset: usize| -> Vec<(Vertex, Vertex)> {
            ps.iter()
                .enumerate()
                .filter(|(k, _)| self.bits >> (offset + k) & 1 == 1)
                .map(|(_, &e)| e)
                .collect()
        };
        Ok(MixedGraph::new(self.m, pick(0), pick(ps.len()))?)
    }
}

/// All graphs on `m` vertices in ascending id order.
pub fn enumerate_graphs(m: usize) -> Result<impl Iterator<Item = MixedGraph>, CensusError> {
    let n = GraphId::count(m)?;
    Ok((0..n).map(move |bits| GraphId { m, bits }.decode().expect("id in range")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub schema_version: u32,
    pub engine_version: String,
    pub id: GraphId,
    /// 1 for the first pass, 2 for the retry tier.
    pub tier: u32,
    pub report: GraphReport,
    pub criteria: CriteriaTable,
    pub seconds: f64,
}

impl CensusRecord {
    pub fn compute(id: GraphId, options: &ClassifyOptions, tier: u32) -> Result<Self, CensusError> {
        let g = id.decode()?;
        let start = Instant::now();
        let report = classify_graph(&g, options);
        let criteria = criteria_table(&g);
        Ok(CensusRecord {
            schema_version: SCHEMA_VERSION,
            engine_version: ENGINE_VERSION.to_string(),
            id,
            tier,
            report,
            criteria,
            seconds: start.elapsed().as_secs_f64(),
        })
    }

    /// The record with every timing zeroed.
    pub fn without_timings(&self) -> CensusRecord {
        CensusRecord {
            report: self.report.without_timings(),
            seconds: 0.0,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct StoreHeader {
    schema_version: u32,
    m: usize,
}

fn index_path(store: &Path) -> PathBuf {
    let mut s = store.as_os_str().to_owned();
    s.push(".idx");
    PathBuf::from(s)
}

fn store_error(path: &Path, message: impl Into<String>) -> CensusError {
    CensusError::Store {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// Reads a store. A final line without a newline (an interrupted write) is
/// dropped; any other malformed line is an error. Returns the latest record
/// per id and the byte length of the intact prefix.
fn read_store(
    path: &Path,
    m: Option<usize>,
) -> Result<(usize, BTreeMap<GraphId, CensusRecord>, u64), CensusError> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut records = BTreeMap::new();
    let mut good = 0u64;
    let mut line = String::new();
    let mut first = true;
    let mut m = m;
    loop {
        line.clear();
        let n = reader.read_line(&mut line)?;
        if n == 0 {
            break;
        }
        if !line.ends_with('\n') {
            break;
        }
        if first {
            let header: StoreHeader = serde_json::from_str(&line)
                .map_err(|e| store_error(path, format!("bad header: {e}")))?;
            if header.schema_version != SCHEMA_VERSION {
                return Err(store_error(
                    path,
                    format!(
                        "schema version {} (expected {SCHEMA_VERSION})",
                        header.schema_version
                    ),
                ));
            }
            match m {
                Some(m) if header.m != m => {
                    return Err(store_error(
                        path,
                        format!("store holds m = {}, asked for m = {m}", header.m),
                    ))
                }
                _ => m = Some(header.m),
            }
            first = false;
        } else {
            let rec: CensusRecord = serde_json::from_str(&line)
                .map_err(|e| store_error(path, format!("bad record at byte {good}: {e}")))?;
            if rec.schema_version != SCHEMA_VERSION || Some(rec.id.m) != m {
                return Err(store_error(path, format!("foreign record at byte {good}")));
            }
            records.insert(rec.id, rec);
        }
        good += n as u64;
    }
    match m {
        Some(m) if !first => Ok((m, records, good)),
        _ => Err(store_error(path, "missing header")),
    }
}

/// Latest record per graph id.
pub fn load_records(path: &Path, m: usize) -> Result<BTreeMap<GraphId, CensusRecord>, CensusError> {
    Ok(read_store(path, Some(m))?.1)
}

/// Vertex count from the header and the latest record per graph id.
pub fn load_store(path: &Path) -> Result<(usize, BTreeMap<GraphId, CensusRecord>), CensusError> {
    let (m, records, _) = read_store(path, None)?;
    Ok((m, records))
}

/// Where to find each id's latest record: `bits<TAB>byte offset`, one per line.
fn write_index(path: &Path, offsets: &BTreeMap<u64, u64>) -> Result<(), CensusError> {
    let mut w = BufWriter::new(File::create(index_path(path))?);
    for (id, off) in offsets {
        writeln!(w, "{id}\t{off}")?;
    }
    w.flush()?;
    Ok(())
}

fn record_offsets(path: &Path) -> Result<BTreeMap<u64, u64>, CensusError> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut out = BTreeMap::new();
    let mut line = String::new();
    let mut offset = 0u64;
    let mut first = true;
    loop {
        line.clear();
        let n = reader.read_line(&mut line)?;
        if n == 0 || !line.ends_with('\n') {
            break;
        }
        if !first {
            #[derive(Deserialize)]
            struct IdOnly {
                id: GraphId,
            }
            if let Ok(r) = serde_json::from_str::<IdOnly>(&line) {
                out.insert(r.id.bits, offset);
            }
        }
        first = false;
        offset += n as u64;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct CensusConfig {
    pub m: usize,
    pub options: ClassifyOptions,
    pub store: PathBuf,
    pub resume: bool,
    /// Worker threads; 0 means one per core.
    pub jobs: usize,
    /// Restrict the run (and the summary) to these ids.
    pub only: Option<Vec<u64>>,
    /// Time limit for re-running graphs left unresolved; `None` skips the tier.
    pub retry_time_limit: Option<Duration>,
}

impl CensusConfig {
    pub fn new(m: usize, store: impl Into<PathBuf>) -> Self {
        CensusConfig {
            m,
            options: ClassifyOptions::with_time_limit(Duration::from_secs(600)),
            store: store.into(),
            resume: false,
            jobs: 0,
            only: None,
            retry_time_limit: None,
        }
    }
}

fn run_batch(
    ids: &[GraphId],
    options: &ClassifyOptions,
    tier: u32,
    pool: &rayon::ThreadPool,
    path: &Path,
) -> Result<(), CensusError> {
    if ids.is_empty() {
        return Ok(());
    }
    let file = OpenOptions::new().append(true).open(path)?;
    let (tx, rx) = mpsc::channel::<CensusRecord>();
    std::thread::scope(|scope| -> Result<(), CensusError> {
        let writer = scope.spawn(move || -> Result<(), CensusError> {
            let mut w = BufWriter::new(file);
            for rec in rx {
                let line =
                    serde_json::to_string(&rec).map_err(|e| store_error(path, e.to_string()))?;
                w.write_all(line.as_bytes())?;
                w.write_all(b"\n")?;
                w.flush()?;
            }
            Ok(())
        });
        let work: Result<(), CensusError> = pool.install(|| {
            ids.par_iter().try_for_each_with(tx, |tx, &id| {
                let rec = CensusRecord::compute(id, options, tier)?;
                // a closed channel means the writer failed; its error wins
                let _ = tx.send(rec);
                Ok(())
            })
        });
        let written = writer.join().expect("writer thread panicked");
        written.and(work)
    })
}

/// Classifies every requested graph not yet in the store and summarizes.
pub fn run_census(config: &CensusConfig) -> Result<CensusSummary, CensusError> {
    let m = config.m;
    let n = GraphId::count(m)?;
    let path = &config.store;
    let mut done: BTreeSet<GraphId> = BTreeSet::new();
    if path.exists() {
        if !config.resume {
            return Err(CensusError::StoreExists(path.clone()));
        }
        let (_, records, good) = read_store(path, Some(m))?;
        let len = fs::metadata(path)?.len();
        if good < len {
            // drop a torn final line before appending
            OpenOptions::new().write(true).open(path)?.set_len(good)?;
        }
        done.extend(records.keys().copied());
    } else {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut f = File::create(path)?;
        let header = serde_json::to_string(&StoreHeader {
            schema_version: SCHEMA_VERSION,
            m,
        })
        .expect("header serializes");
        writeln!(f, "{header}")?;
    }
    let wanted: Vec<GraphId> = match &config.only {
        Some(ids) => {
            let set: BTreeSet<u64> = ids.iter().copied().collect();
            set.into_iter()
                .map(|b| GraphId::new(m, b))
                .collect::<Result<_, _>>()?
        }
        None => (0..n).map(|bits| GraphId { m, bits }).collect(),
    };
    let todo: Vec<GraphId> = wanted
        .iter()
        .filter(|id| !done.contains(id))
        .copied()
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if config.jobs > 0 {
        builder = builder.num_threads(config.jobs);
    }
    let pool = builder
        .build()
        .map_err(|e| store_error(path, e.to_string()))?;
    run_batch(&todo, &config.options, 1, &pool, path)?;
    if let Some(limit) = config.retry_time_limit {
        let records = load_records(path, m)?;
        let retry: Vec<GraphId> = wanted
            .iter()
            .filter(|id| {
                records
                    .get(id)
                    .is_some_and(|r| r.tier < 2 && r.report.any_unresolved())
            })
            .copied()
            .collect();
        let mut options = config.options.clone();
        options.budget.time_limit = Some(limit);
        run_batch(&retry, &options, 2, &pool, path)?;
    }
    write_index(path, &record_offsets(path)?)?;
    let records = load_records(path, m)?;
    let selected: Vec<&CensusRecord> = wanted.iter().filter_map(|id| records.get(id)).collect();
    Ok(CensusSummary::from_records(m, selected))
}

/// Tallies over a set of census records; everything is sorted by graph id.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CensusSummary {
    pub m: usize,
    pub graphs: usize,
    pub generically_identifiable: usize,
    /// `k -> count` for algebraically `k`-identified graphs.
    pub algebraically_identified: BTreeMap<u32, usize>,
    pub not_identifiable: usize,
    pub unresolved: Vec<u64>,
    pub bow_free: usize,
    pub bow_free_generically_identifiable: usize,
    /// Bow-free graphs whose direct effects are all single-door certified.
    pub bow_free_single_door: usize,
    /// Generically identifiable graphs with a direct effect certified by an
    /// instrument but not by the single-door criterion.
    pub needs_instrument: Vec<u64>,
    /// Generically identifiable graphs whose direct effects are all
    /// certified by single-door or instrumental variables.
    pub identifiable_by_criteria: usize,
    /// Generically identifiable graphs with a direct effect only the
    /// algebraic method identifies.
    pub identifiable_algebra_only: Vec<u64>,
    pub not_identifiable_with_identified_direct_effect: usize,
    /// `(id, label)` of direct effects with `d = 1` that no criterion certifies.
    pub uncertified_direct_effects: Vec<(u64, String)>,
    /// `(id, label)` of effects a criterion certifies but the algebra does
    /// not find generically identifiable. Should be empty.
    pub criteria_disagreements: Vec<(u64, String)>,
}

impl CensusSummary {
    pub fn from_records<'a>(m: usize, records: impl IntoIterator<Item = &'a CensusRecord>) -> Self {
        let mut s = CensusSummary {
            m,
            ..Default::default()
        };
        let mut records: Vec<&CensusRecord> = records.into_iter().collect();
        records.sort_by_key(|r| r.id);
        for rec in records {
            let id = rec.id.bits;
            s.graphs += 1;
            let generic = rec.report.verdict == Verdict::GenericallyIdentifiable;
            match rec.report.verdict {
                Verdict::GenericallyIdentifiable => s.generically_identifiable += 1,
                Verdict::AlgebraicallyIdentified { k } => {
                    *s.algebraically_identified.entry(k).or_default() += 1
                }
                Verdict::NotIdentifiable => s.not_identifiable += 1,
                Verdict::Unresolved => s.unresolved.push(id),
            }
            let c = &rec.criteria;
            if c.bow_free {
                s.bow_free += 1;
                s.bow_free_generically_identifiable += usize::from(generic);
                s.bow_free_single_door +=
                    usize::from(c.edges.iter().all(|e| e.single_door.satisfied()));
            }
            let mut any_identified_edge = false;
            let mut any_uncertified = false;
            for e in &c.edges {
                let status = rec.report.status(&TargetKind::DirectEffect {
                    from: e.from,
                    to: e.to,
                });
                let identified = status.is_some_and(IdentStatus::is_generic);
                any_identified_edge |= identified;
                let label = TargetKind::DirectEffect {
                    from: e.from,
                    to: e.to,
                }
                .label(m);
                if identified && !e.certified() {
                    any_uncertified = true;
                    s.uncertified_direct_effects.push((id, label.clone()));
                }
                if e.certified() && !identified && !status.is_some_and(IdentStatus::is_unresolved) {
                    s.criteria_disagreements.push((id, label));
                }
            }
            for p in &c.total_effects {
                let kind = TargetKind::TotalEffect {
                    from: p.from,
                    to: p.to,
                };
                let status = rec.report.status(&kind);
                if p.back_door.satisfied()
                    && !status.is_some_and(IdentStatus::is_generic)
                    && !status.is_some_and(IdentStatus::is_unresolved)
                {
                    s.criteria_disagreements.push((id, kind.label(m)));
                }
            }
            if generic {
                if c.edges
                    .iter()
                    .any(|e| !e.single_door.satisfied() && e.instrumental_variable.satisfied())
                {
                    s.needs_instrument.push(id);
                }
                if any_uncertified {
                    s.identifiable_algebra_only.push(id);
                } else {
                    s.identifiable_by_criteria += 1;
                }
            }
            if rec.report.verdict == Verdict::NotIdentifiable && any_identified_edge {
                s.not_identifiable_with_identified_direct_effect += 1;
            }
        }
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("graphs on {} vertices: {}", self.m, self.graphs));
        line(format!(
            "generically identifiable: {}",
            self.generically_identifiable
        ));
        for (k, n) in &self.algebraically_identified {
            line(format!("algebraically {k}-identified: {n}"));
        }
        line(format!(
            "not generically identifiable: {}",
            self.not_identifiable
        ));
        line(format!("unresolved: {}", self.unresolved.len()));
        line(format!(
            "bow-free: {} ({} generically identifiable, {} fully single-door)",
            self.bow_free, self.bow_free_generically_identifiable, self.bow_free_single_door
        ));
        line(format!(
            "identifiable via single-door/instrument: {}; with algebra-only direct effects: {}",
            self.identifiable_by_criteria,
            self.identifiable_algebra_only.len()
        ));
        line(format!(
            "identifiable graphs needing an instrument: {}",
            self.needs_instrument.len()
        ));
        line(format!(
            "non-identifiable graphs with an identified direct effect: {}",
            self.not_identifiable_with_identified_direct_effect
        ));
        line(format!(
            "criteria/algebra disagreements: {}",
            self.criteria_disagreements.len()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_decode_examples() {
        let empty = MixedGraph::empty(3);
        assert_eq!(GraphId::encode(&empty).unwrap().bits, 0);
        let full: MixedGraph = "3; 1->2 1->3 2->3; 1<->2 1<->3 2<->3".parse().unwrap();
        assert_eq!(GraphId::encode(&full).unwrap().bits, 63);
        let iv: MixedGraph = "3; 1->2 2->3; 2<->3".parse().unwrap();
        let id = GraphId::encode(&iv).unwrap();
        assert_eq!(id.bits, 37);
        assert_eq!(id.decode().unwrap(), iv);
        assert!(GraphId::new(3, 64).is_err());
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_graphs(1).unwrap().count(), 1);
        assert_eq!(enumerate_graphs(3).unwrap().count(), 64);
        assert_eq!(enumerate_graphs(4).unwrap().count(), 4096);
        for (k, g) in enumerate_graphs(3).unwrap().enumerate() {
            assert_eq!(GraphId::encode(&g).unwrap().bits, k as u64);
        }
    }
}
