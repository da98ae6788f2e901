//! Per-target classification: build the elimination ideal of the extended
//! parametrization `(s, Sigma)`, read off the lowest `q`-degree, and attach a
//! formula or identification polynomial.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use semident_algebra::{
    divide, eliminate_basis, rational, BigRational, Budget, GbError, IdealGens, Polynomial,
    ResourceLimit, Ring, Strategy, TermOrder, VarId,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{MixedGraph, Vertex};
use crate::linalg::RationalMatrix;
use crate::parametrize::{
    sigma_numeric, ParamError, ParamRing, ParameterTarget, Parametrization, TargetKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentifyError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("algebra failure: {0}")]
    Algebra(String),
    #[error("verification needs an identified status")]
    NothingToVerify,
}

/// How the target ideal is presented to the Gröbner engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Presentation {
    /// `<q - s(l, w), s_ij - Sigma_ij(l, w)>`.
    Direct,
    /// The same ideal with the omega variables solved for:
    /// `w = (I - L)^T S (I - L)` is substituted into `s`, and the entries of
    /// `(I - L)^T S (I - L)` at missing bidirected edges are kept as
    /// generators. Fewer variables, same elimination ideal.
    #[default]
    Reduced,
}

/// Per-target budget and ideal presentation. The default uses the sugar
/// strategy, which keeps the omega targets of 4-vertex graphs fast.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub budget: Budget,
    pub presentation: Presentation,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            budget: Budget {
                strategy: Strategy::Sugar,
                ..Budget::default()
            },
            presentation: Presentation::Reduced,
        }
    }
}

impl ClassifyOptions {
    pub fn with_time_limit(limit: Duration) -> Self {
        let mut o = ClassifyOptions::default();
        o.budget.time_limit = Some(limit);
        o
    }
}

/// `q = numerator / denominator` in the sigma variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFormula {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
}

impl RationalFormula {
    pub fn render(&self, ring: &Ring, order: &TermOrder) -> String {
        let num = self.numerator.display(ring, order).to_string();
        if self.denominator.is_constant()
            && self.denominator == Polynomial::one(self.denominator.dim())
        {
            return num;
        }
        let wrap = |p: &Polynomial, s: String| if p.len() > 1 { format!("({s})") } else { s };
        format!(
            "{} / {}",
            wrap(&self.numerator, num),
            wrap(
                &self.denominator,
                self.denominator.display(ring, order).to_string()
            )
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IdentStatus {
    GenericallyIdentifiable { formula: RationalFormula },
    AlgebraicallyDIdentifiable { d: u32, ident_poly: Polynomial },
    NotGenericallyIdentifiable,
    Unresolved { reason: ResourceLimit },
    TriviallyConstant { value: String },
}

impl IdentStatus {
    /// Lowest `q`-degree: 1 for generic identifiability, `None` when not
    /// identifiable or unresolved, 0 for constants.
    pub fn degree(&self) -> Option<u32> {
        match self {
            IdentStatus::GenericallyIdentifiable { .. } => Some(1),
            IdentStatus::AlgebraicallyDIdentifiable { d, .. } => Some(*d),
            IdentStatus::TriviallyConstant { .. } => Some(0),
            _ => None,
        }
    }

    /// Identified with a rational formula (or trivially).
    pub fn is_generic(&self) -> bool {
        matches!(
            self,
            IdentStatus::GenericallyIdentifiable { .. } | IdentStatus::TriviallyConstant { .. }
        )
    }

    pub fn is_unresolved(&self) -> bool {
        matches!(self, IdentStatus::Unresolved { .. })
    }

    pub fn describe(&self, ring: &Ring, order: &TermOrder) -> String {
        match self {
            IdentStatus::GenericallyIdentifiable { formula } => {
                format!(
                    "generically identifiable, formula {}",
                    formula.render(ring, order)
                )
            }
            IdentStatus::AlgebraicallyDIdentifiable { d, ident_poly } => format!(
                "algebraically {d}-identifiable, {} = 0",
                ident_poly.display(ring, order)
            ),
            IdentStatus::NotGenericallyIdentifiable => "not generically identifiable".to_string(),
            IdentStatus::Unresolved { reason } => format!("unresolved ({reason})"),
            IdentStatus::TriviallyConstant { value } => format!("constant {value}"),
        }
    }
}

/// Full output of one elimination, kept for inspection and tests.
#[derive(Debug, Clone)]
pub struct ParameterAnalysis {
    pub status: IdentStatus,
    /// Reduced basis of the elimination ideal in `Q[q, sigma]`.
    pub elimination_basis: Vec<Polynomial>,
}

/// Generators of the target ideal in the full parameter ring.
pub fn target_ideal(
    p: &Parametrization,
    target: &Polynomial,
    presentation: Presentation,
) -> IdealGens {
    let r = p.ring();
    let q = r.var(r.q());
    let gens = match presentation {
        Presentation::Direct => {
            let mut gens = vec![&q - target];
            for (&(i, j), f) in p.sigma_polys().iter() {
                gens.push(&r.var(r.sigma(i, j)) - f);
            }
            gens
        }
        Presentation::Reduced => {
            let images = p.omega_substitution();
            let s = target.compose(&images, r.dim()).expect("same ring");
            let mut gens = vec![&q - &s];
            gens.extend(p.zero_pattern_constraints());
            gens
        }
    };
    IdealGens::new(r.ring().clone(), r.elimination_order(), gens)
        .expect("generators live in the parameter ring")
}

fn vanishing_gens(p: &Parametrization, presentation: Presentation) -> IdealGens {
    let r = p.ring();
    let gens = match presentation {
        Presentation::Direct => p
            .sigma_polys()
            .iter()
            .map(|(&(i, j), f)| &r.var(r.sigma(i, j)) - f)
            .collect(),
        Presentation::Reduced => p.zero_pattern_constraints(),
    };
    IdealGens::new(r.ring().clone(), r.elimination_order(), gens)
        .expect("generators live in the parameter ring")
}

fn drop_set(r: &ParamRing) -> BTreeSet<VarId> {
    r.t_block().into_iter().collect()
}

/// Reduced basis of the vanishing ideal of the model, in the observed ring
/// (`q` does not occur).
pub fn vanishing_ideal(
    p: &Parametrization,
    options: &ClassifyOptions,
) -> Result<Vec<Polynomial>, GbError> {
    let gens = vanishing_gens(p, options.presentation);
    if gens.is_zero_ideal() {
        return Ok(Vec::new());
    }
    Ok(eliminate_basis(&gens, &drop_set(p.ring()), &options.budget)?.into_elements())
}

/// Classifies one target and returns the elimination basis as well.
pub fn analyze_parameter(
    p: &Parametrization,
    target: &ParameterTarget,
    options: &ClassifyOptions,
) -> Result<ParameterAnalysis, IdentifyError> {
    if target.polynomial.is_constant() {
        let value = if target.polynomial.is_zero() {
            BigRational::zero()
        } else {
            target
                .polynomial
                .terms()
                .next()
                .map(|(_, c)| c.clone())
                .unwrap()
        };
        return Ok(ParameterAnalysis {
            status: IdentStatus::TriviallyConstant {
                value: value.to_string(),
            },
            elimination_basis: Vec::new(),
        });
    }
    let r = p.ring();
    let gens = target_ideal(p, &target.polynomial, options.presentation);
    let basis = match eliminate_basis(&gens, &drop_set(r), &options.budget) {
        Ok(b) => b.into_elements(),
        Err(GbError::Unresolved(reason)) => {
            return Ok(ParameterAnalysis {
                status: IdentStatus::Unresolved { reason },
                elimination_basis: Vec::new(),
            })
        }
        Err(GbError::Algebra(e)) => return Err(IdentifyError::Algebra(e.to_string())),
    };
    let status = status_from_basis(&basis, &r.observed_order());
    Ok(ParameterAnalysis {
        status,
        elimination_basis: basis,
    })
}

/// Reads the identification status off a reduced elimination basis in
/// `Q[q, sigma]` with `q` as variable 0.
pub fn status_from_basis(basis: &[Polynomial], order: &TermOrder) -> IdentStatus {
    let q = VarId(0);
    let vanishing: Vec<Polynomial> = basis.iter().filter(|g| !g.involves(q)).cloned().collect();
    let in_vanishing = |f: &Polynomial| -> bool {
        if vanishing.is_empty() {
            return f.is_zero();
        }
        divide(f, &vanishing, order)
            .map(|d| d.remainder.is_zero())
            .unwrap_or(false)
    };
    // basis is sorted ascending by leading monomial, so the first admissible
    // element of a given degree has the smallest leading term
    let mut best: Option<(u32, &Polynomial, Vec<Polynomial>)> = None;
    for g in basis.iter().filter(|g| g.involves(q)) {
        let coeffs = g.coefficients_in(q);
        let d = (coeffs.len() - 1) as u32;
        if in_vanishing(&coeffs[coeffs.len() - 1]) {
            continue;
        }
        if best.as_ref().is_none_or(|(bd, _, _)| d < *bd) {
            best = Some((d, g, coeffs));
        }
    }
    match best {
        None => IdentStatus::NotGenericallyIdentifiable,
        Some((1, g, _)) => {
            let (_, prim) = g.primitive_part();
            let c = prim.coefficients_in(q);
            let (mut num, mut den) = (-&c[0], c[1].clone());
            if den
                .leading_term(order)
                .map(|(_, lc)| lc.is_negative())
                .unwrap_or(false)
            {
                num = -&num;
                den = -&den;
            }
            IdentStatus::GenericallyIdentifiable {
                formula: RationalFormula {
                    numerator: num,
                    denominator: den,
                },
            }
        }
        Some((d, g, _)) => IdentStatus::AlgebraicallyDIdentifiable {
            d,
            ident_poly: g.normalized(order),
        },
    }
}

pub fn classify_parameter(
    g: &MixedGraph,
    target: &ParameterTarget,
    options: &ClassifyOptions,
) -> Result<IdentStatus, IdentifyError> {
    let p = Parametrization::new(g);
    Ok(analyze_parameter(&p, target, options)?.status)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    GenericallyIdentifiable,
    AlgebraicallyIdentified { k: u32 },
    NotIdentifiable,
    Unresolved,
}

impl Verdict {
    /// Aggregates the statuses of the lambda and omega targets. A target
    /// with no `q`-polynomial settles the verdict even if others are still
    /// unresolved.
    pub fn aggregate<'a>(structural: impl IntoIterator<Item = &'a IdentStatus>) -> Verdict {
        let mut max_d = 1;
        let mut unresolved = false;
        for s in structural {
            match s {
                IdentStatus::NotGenericallyIdentifiable => return Verdict::NotIdentifiable,
                IdentStatus::Unresolved { .. } => unresolved = true,
                other => max_d = max_d.max(other.degree().unwrap_or(1)),
            }
        }
        if unresolved {
            Verdict::Unresolved
        } else if max_d <= 1 {
            Verdict::GenericallyIdentifiable
        } else {
            Verdict::AlgebraicallyIdentified { k: max_d }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Verdict::GenericallyIdentifiable => "generically identifiable".to_string(),
            Verdict::AlgebraicallyIdentified { k } => format!("algebraically {k}-identified"),
            Verdict::NotIdentifiable => "not generically identifiable".to_string(),
            Verdict::Unresolved => "unresolved".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetReport {
    pub target: TargetKind,
    pub label: String,
    pub status: IdentStatus,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphReport {
    pub graph: MixedGraph,
    /// Ring of the formulas and polynomials: `q` followed by the sigmas.
    pub ring: Ring,
    pub order: TermOrder,
    pub targets: Vec<TargetReport>,
    /// `None` when the budget ran out.
    pub vanishing_ideal: Option<Vec<Polynomial>>,
    pub verdict: Verdict,
}

impl GraphReport {
    pub fn status(&self, target: &TargetKind) -> Option<&IdentStatus> {
        self.targets
            .iter()
            .find(|t| &t.target == target)
            .map(|t| &t.status)
    }

    pub fn status_by_label(&self, label: &str) -> Option<&IdentStatus> {
        self.targets
            .iter()
            .find(|t| t.label == label)
            .map(|t| &t.status)
    }

    /// The report with all timings zeroed, for run-to-run comparison.
    pub fn without_timings(&self) -> GraphReport {
        let mut r = self.clone();
        for t in &mut r.targets {
            t.seconds = 0.0;
        }
        r
    }

    pub fn render(&self, p: &Polynomial) -> String {
        p.display(&self.ring, &self.order).to_string()
    }

    pub fn describe(&self, status: &IdentStatus) -> String {
        status.describe(&self.ring, &self.order)
    }

    pub fn any_unresolved(&self) -> bool {
        self.targets.iter().any(|t| t.status.is_unresolved())
    }
}

/// Classifies every target of `g`. Targets with the same polynomial (a
/// single-path total effect and its path effect, say) share one computation.
pub fn classify_graph(g: &MixedGraph, options: &ClassifyOptions) -> GraphReport {
    classify_selected(g, options, |_| true)
}

/// Like [`classify_graph`] restricted to the targets `select` accepts; the
/// verdict then only reflects the selected lambda and omega targets.
pub fn classify_selected(
    g: &MixedGraph,
    options: &ClassifyOptions,
    select: impl Fn(&TargetKind) -> bool,
) -> GraphReport {
    let p = Parametrization::new(g);
    let targets: Vec<ParameterTarget> = p
        .all_targets()
        .into_iter()
        .filter(|t| select(&t.kind))
        .collect();
    let mut unique: Vec<&Polynomial> = Vec::new();
    let mut slot: HashMap<&Polynomial, usize> = HashMap::new();
    let index: Vec<usize> = targets
        .iter()
        .map(|t| {
            *slot.entry(&t.polynomial).or_insert_with(|| {
                unique.push(&t.polynomial);
                unique.len() - 1
            })
        })
        .collect();
    let results: Vec<(IdentStatus, f64)> = unique
        .par_iter()
        .map(|poly| {
            let start = Instant::now();
            let target = ParameterTarget {
                kind: TargetKind::OmegaEntry { i: 0, j: 0 },
                polynomial: (*poly).clone(),
            };
            let status = analyze_parameter(&p, &target, options)
                .map(|a| a.status)
                .expect("targets are built from the graph");
            (status, start.elapsed().as_secs_f64())
        })
        .collect();
    let vanishing_ideal = vanishing_ideal(&p, options).ok();
    let m = g.m();
    let targets: Vec<TargetReport> = targets
        .iter()
        .zip(index)
        .map(|(t, k)| TargetReport {
            target: t.kind.clone(),
            label: t.kind.label(m),
            status: results[k].0.clone(),
            seconds: results[k].1,
        })
        .collect();
    let verdict = Verdict::aggregate(
        targets
            .iter()
            .filter(|t| t.target.is_structural())
            .map(|t| &t.status),
    );
    GraphReport {
        graph: g.clone(),
        ring: p.ring().observed_ring(),
        order: p.ring().observed_order(),
        targets,
        vanishing_ideal,
        verdict,
    }
}

/// Outcome of checking one status against exact samples of the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub target: TargetKind,
    /// Non-degenerate trials that were checked.
    pub passed: usize,
    /// Draws where the formula's denominator (or the leading coefficient of
    /// the identification polynomial) vanished.
    pub skipped: usize,
    pub failures: Vec<Counterexample>,
    /// For `d >= 2`: the specialized polynomial kept degree `d` in some trial.
    pub degree_witnessed: bool,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.degree_witnessed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub lambda: BTreeMap<String, String>,
    pub omega: RationalMatrix,
    pub expected: String,
    pub found: String,
}

/// Draws edge coefficients from `{k/2 : -6 <= k <= 6}` and a strictly
/// diagonally dominant Omega with the graph's zero pattern.
pub fn sample_parameters(
    g: &MixedGraph,
    rng: &mut impl Rng,
) -> (BTreeMap<(Vertex, Vertex), BigRational>, RationalMatrix) {
    let lambda = g
        .directed()
        .iter()
        .map(|&e| (e, rational(rng.gen_range(-6..=6), 2)))
        .collect();
    let m = g.m();
    let mut omega = RationalMatrix::zeros(m);
    for &(i, j) in g.bidirected() {
        let v = rational(rng.gen_range(-4..=4), 4);
        omega.set(i - 1, j - 1, v.clone());
        omega.set(j - 1, i - 1, v);
    }
    for i in 0..m {
        let off = (0..m)
            .filter(|&j| j != i)
            .fold(BigRational::zero(), |acc, j| acc + omega.get(i, j).abs());
        omega.set(i, i, off + rational(rng.gen_range(1..=4), 2));
    }
    (lambda, omega)
}

/// Checks `status` for `target` on `trials` non-degenerate exact draws.
pub fn verify_numeric(
    g: &MixedGraph,
    target: &ParameterTarget,
    status: &IdentStatus,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport, IdentifyError> {
    let p = Parametrization::new(g);
    let r = p.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport {
        target: target.kind.clone(),
        passed: 0,
        skipped: 0,
        failures: Vec::new(),
        degree_witnessed: !matches!(status, IdentStatus::AlgebraicallyDIdentifiable { .. }),
    };
    let max_draws = trials.saturating_mul(20).max(20);
    let mut draws = 0;
    while report.passed < trials && draws < max_draws {
        draws += 1;
        let (lambda, omega) = sample_parameters(g, &mut rng);
        let sigma = sigma_numeric(g, &lambda, &omega)?;
        let mut point = vec![BigRational::zero(); r.dim()];
        for (&e, &v) in r.lambdas() {
            point[v.0] = lambda[&e].clone();
        }
        for (&(i, j), &v) in r.omegas() {
            point[v.0] = omega.get(i - 1, j - 1).clone();
        }
        let value = target
            .polynomial
            .evaluate(&point)
            .map_err(|e| IdentifyError::Algebra(e.to_string()))?;
        let mut observed = vec![value.clone()];
        for &(i, j) in r.sigmas().keys() {
            observed.push(sigma.get(i - 1, j - 1).clone());
        }
        let eval = |f: &Polynomial| {
            f.evaluate(&observed)
                .map_err(|e| IdentifyError::Algebra(e.to_string()))
        };
        let failure = match status {
            IdentStatus::GenericallyIdentifiable { formula } => {
                let den = eval(&formula.denominator)?;
                if den.is_zero() {
                    report.skipped += 1;
                    continue;
                }
                let found = eval(&formula.numerator)? / den;
                (found != value).then(|| found.to_string())
            }
            IdentStatus::AlgebraicallyDIdentifiable { d, ident_poly } => {
                let coeffs = ident_poly.coefficients_in(VarId(0));
                if eval(&coeffs[coeffs.len() - 1])?.is_zero() {
                    report.skipped += 1;
                    continue;
                }
                report.degree_witnessed |= coeffs.len() as u32 - 1 == *d;
                let residual = eval(ident_poly)?;
                (!residual.is_zero()).then(|| format!("residual {residual}"))
            }
            IdentStatus::TriviallyConstant { value: v } => {
                (v != &value.to_string()).then(|| value.to_string())
            }
            _ => return Err(IdentifyError::NothingToVerify),
        };
        report.passed += 1;
        if let Some(found) = failure {
            report.failures.push(Counterexample {
                lambda: lambda
                    .iter()
                    .map(|(&(i, j), v)| (format!("l{i}{j}"), v.to_string()))
                    .collect(),
                omega: omega.clone(),
                expected: value.to_string(),
                found,
            });
        }
    }
    Ok(report)
}
