//! Graphical identification criteria: single-door and unconditional
//! instrumental variables for direct effects, back-door for total effects,
//! and the bow-free property.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::{GraphError, MixedGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    SingleDoor,
    InstrumentalVariable,
    BackDoor,
}

impl Criterion {
    pub fn name(&self) -> &'static str {
        match self {
            Criterion::SingleDoor => "single-door",
            Criterion::InstrumentalVariable => "instrumental-variable",
            Criterion::BackDoor => "back-door",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Witness {
    ConditioningSet(BTreeSet<Vertex>),
    Instrument(Vertex),
}

/// `witness` is `Some` exactly when the criterion holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub criterion: Criterion,
    pub witness: Option<Witness>,
}

impl CriterionResult {
    pub fn satisfied(&self) -> bool {
        self.witness.is_some()
    }
}

/// Subsets of `pool`, smallest first, lexicographic within a size.
fn subsets_by_size(pool: &[Vertex]) -> Vec<BTreeSet<Vertex>> {
    let n = pool.len();
    let mut all: Vec<Vec<Vertex>> = (0u32..(1 << n))
        .map(|mask| {
            (0..n)
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| pool[k])
                .collect()
        })
        .collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all.into_iter().map(|v| v.into_iter().collect()).collect()
}

fn require_edge(g: &MixedGraph, i: Vertex, j: Vertex) -> Result<(), GraphError> {
    g.check_vertex(i)?;
    g.check_vertex(j)?;
    if g.has_directed(i, j) {
        Ok(())
    } else {
        Err(GraphError::Precondition(format!(
            "edge {i}->{j} is not in the graph"
        )))
    }
}

/// Smallest `Z` avoiding `forbidden` and `{i, j}` that d-separates `i` and `j` in `h`.
fn separating_set(
    h: &MixedGraph,
    i: Vertex,
    j: Vertex,
    forbidden: &BTreeSet<Vertex>,
) -> Result<Option<BTreeSet<Vertex>>, GraphError> {
    let pool: Vec<Vertex> = h
        .vertices()
        .filter(|v| *v != i && *v != j && !forbidden.contains(v))
        .collect();
    for z in subsets_by_size(&pool) {
        if h.d_separated(i, j, &z)? {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// `Z` free of descendants of `j` separating `i` and `j` once `i -> j` is removed.
pub fn single_door(g: &MixedGraph, i: Vertex, j: Vertex) -> Result<CriterionResult, GraphError> {
    require_edge(g, i, j)?;
    let h = g.without_directed(i, j);
    let z = separating_set(&h, i, j, &g.descendants(j)?)?;
    Ok(CriterionResult {
        criterion: Criterion::SingleDoor,
        witness: z.map(Witness::ConditioningSet),
    })
}

/// Unconditional instrument: with `i -> j` removed, `z` is d-separated from
/// `j` and d-connected to `i`, both given the empty set.
pub fn instrumental_variable(
    g: &MixedGraph,
    i: Vertex,
    j: Vertex,
) -> Result<CriterionResult, GraphError> {
    require_edge(g, i, j)?;
    let h = g.without_directed(i, j);
    let empty = BTreeSet::new();
    let mut witness = None;
    for z in g.vertices().filter(|z| *z != i && *z != j) {
        if h.d_separated(z, j, &empty)? && !h.d_separated(z, i, &empty)? {
            witness = Some(Witness::Instrument(z));
            break;
        }
    }
    Ok(CriterionResult {
        criterion: Criterion::InstrumentalVariable,
        witness,
    })
}

/// `Z` free of descendants of `i` blocking every path into `i`: equivalently,
/// separating `i` and `j` after deleting the edges out of `i`.
pub fn back_door(g: &MixedGraph, i: Vertex, j: Vertex) -> Result<CriterionResult, GraphError> {
    g.check_vertex(i)?;
    g.check_vertex(j)?;
    if i >= j {
        return Err(GraphError::Precondition(format!(
            "back-door needs i < j, got ({i},{j})"
        )));
    }
    let h = g.without_out_edges(i);
    let z = separating_set(&h, i, j, &g.descendants(i)?)?;
    Ok(CriterionResult {
        criterion: Criterion::BackDoor,
        witness: z.map(Witness::ConditioningSet),
    })
}

pub fn is_bow_free(g: &MixedGraph) -> bool {
    g.directed().iter().all(|&(i, j)| !g.has_bidirected(i, j))
}

/// Criteria results for every edge and every ordered pair with a path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriteriaTable {
    pub bow_free: bool,
    pub edges: Vec<EdgeCriteria>,
    pub total_effects: Vec<PairCriteria>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCriteria {
    pub from: Vertex,
    pub to: Vertex,
    pub single_door: CriterionResult,
    pub instrumental_variable: CriterionResult,
}

impl EdgeCriteria {
    pub fn certified(&self) -> bool {
        self.single_door.satisfied() || self.instrumental_variable.satisfied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCriteria {
    pub from: Vertex,
    pub to: Vertex,
    pub back_door: CriterionResult,
}

pub fn criteria_table(g: &MixedGraph) -> CriteriaTable {
    let edges = g
        .directed()
        .iter()
        .map(|&(i, j)| EdgeCriteria {
            from: i,
            to: j,
            single_door: single_door(g, i, j).expect("edge of the graph"),
            instrumental_variable: instrumental_variable(g, i, j).expect("edge of the graph"),
        })
        .collect();
    let mut total_effects = Vec::new();
    for i in g.vertices() {
        for j in i + 1..=g.m() {
            if !g.directed_paths(i, j).expect("valid vertices").is_empty() {
                total_effects.push(PairCriteria {
                    from: i,
                    to: j,
                    back_door: back_door(g, i, j).expect("i < j"),
                });
            }
        }
    }
    CriteriaTable {
        bow_free: is_bow_free(g),
        edges,
        total_effects,
    }
}
