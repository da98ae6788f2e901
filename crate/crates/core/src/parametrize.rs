//! Polynomial parametrization of the linear SEM of a mixed graph:
//! `Sigma = (I - Lambda)^{-T} Omega (I - Lambda)^{-1}`, the effect
//! polynomials, and the list of identification targets.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use semident_algebra::{BigRational, OrderBlock, Polynomial, Ring, TermOrder, VarId};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DirectedPath, GraphError, MixedGraph, Vertex};
use crate::linalg::RationalMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge {0}->{1} is not in the graph")]
    EdgeAbsent(Vertex, Vertex),
    #[error("omega entry ({0},{1}) is structurally zero in this graph")]
    OmegaNotFree(Vertex, Vertex),
    #[error("covariance matrix must be {expected}x{expected}, got {found}x{found}")]
    WrongSize { expected: usize, found: usize },
    #[error("covariance matrix is not symmetric")]
    NotSymmetric,
    #[error("covariance matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("path {0} is not a directed path of the graph")]
    NotAPath(String),
}

fn pair_name(prefix: &str, i: Vertex, j: Vertex, m: usize) -> String {
    if m < 10 {
        format!("{prefix}{i}{j}")
    } else {
        format!("{prefix}{i}_{j}")
    }
}

/// The polynomial ring `Q[lambda, omega, q, sigma]` of a graph.
///
/// Variables are ordered: every `l_ij` (edges sorted), every `w_ij`
/// (diagonal entries and bidirected edges, sorted), `q`, then every `s_ij`
/// with `i <= j`. The elimination order has blocks `{l, w} > {q} > {s}`,
/// each graded reverse lexicographic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamRing {
    m: usize,
    ring: Ring,
    lambda: BTreeMap<(Vertex, Vertex), VarId>,
    omega: BTreeMap<(Vertex, Vertex), VarId>,
    q: VarId,
    sigma: BTreeMap<(Vertex, Vertex), VarId>,
}

impl ParamRing {
    pub fn new(g: &MixedGraph) -> Self {
        let m = g.m();
        let mut names = Vec::new();
        let mut lambda = BTreeMap::new();
        for &(i, j) in g.directed() {
            lambda.insert((i, j), VarId(names.len()));
            names.push(pair_name("l", i, j, m));
        }
        let mut omega_pairs: Vec<(Vertex, Vertex)> = (1..=m).map(|i| (i, i)).collect();
        omega_pairs.extend(g.bidirected().iter().copied());
        omega_pairs.sort();
        let mut omega = BTreeMap::new();
        for (i, j) in omega_pairs {
            omega.insert((i, j), VarId(names.len()));
            names.push(pair_name("w", i, j, m));
        }
        let q = VarId(names.len());
        names.push("q".to_string());
        let mut sigma = BTreeMap::new();
        for i in 1..=m {
            for j in i..=m {
                sigma.insert((i, j), VarId(names.len()));
                names.push(pair_name("s", i, j, m));
            }
        }
        // print parameters first, then sigma, then q: "s12*q"
        let mut print: Vec<usize> = (0..q.0).collect();
        print.extend(q.0 + 1..names.len());
        print.push(q.0);
        let ring = Ring::new(names)
            .with_print_order(print)
            .expect("valid permutation");
        ParamRing {
            m,
            ring,
            lambda,
            omega,
            q,
            sigma,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    pub fn q(&self) -> VarId {
        self.q
    }

    pub fn lambda(&self, i: Vertex, j: Vertex) -> Option<VarId> {
        self.lambda.get(&(i, j)).copied()
    }

    pub fn omega(&self, i: Vertex, j: Vertex) -> Option<VarId> {
        self.omega.get(&(i.min(j), i.max(j))).copied()
    }

    pub fn sigma(&self, i: Vertex, j: Vertex) -> VarId {
        self.sigma[&(i.min(j), i.max(j))]
    }

    pub fn lambdas(&self) -> &BTreeMap<(Vertex, Vertex), VarId> {
        &self.lambda
    }

    pub fn omegas(&self) -> &BTreeMap<(Vertex, Vertex), VarId> {
        &self.omega
    }

    pub fn sigmas(&self) -> &BTreeMap<(Vertex, Vertex), VarId> {
        &self.sigma
    }

    /// The parameter block: all lambda and omega variables.
    pub fn t_block(&self) -> Vec<VarId> {
        (0..self.q.0).map(VarId).collect()
    }

    pub fn sigma_block(&self) -> Vec<VarId> {
        (self.q.0 + 1..self.dim()).map(VarId).collect()
    }

    /// Block order `t > q > sigma`, graded reverse lex inside each block.
    pub fn elimination_order(&self) -> TermOrder {
        let mut blocks = Vec::new();
        if self.q.0 > 0 {
            blocks.push(OrderBlock::grevlex(0..self.q.0));
        }
        blocks.push(OrderBlock::grevlex([self.q.0]));
        blocks.push(OrderBlock::grevlex(self.q.0 + 1..self.dim()));
        TermOrder::Block(blocks)
    }

    /// The ring `Q[q, sigma]` left after eliminating the parameters, printed
    /// with `q` last.
    pub fn observed_ring(&self) -> Ring {
        let names: Vec<String> = self.ring.names()[self.q.0..].to_vec();
        let mut print: Vec<usize> = (1..names.len()).collect();
        print.push(0);
        Ring::new(names)
            .with_print_order(print)
            .expect("valid permutation")
    }

    /// The order `{q} > {sigma}` on [`ParamRing::observed_ring`].
    pub fn observed_order(&self) -> TermOrder {
        let n = self.dim() - self.q.0;
        TermOrder::Block(vec![OrderBlock::grevlex([0]), OrderBlock::grevlex(1..n)])
    }

    /// Index of `s_ij` inside the observed ring.
    pub fn observed_sigma(&self, i: Vertex, j: Vertex) -> VarId {
        VarId(self.sigma(i, j).0 - self.q.0)
    }

    pub fn var(&self, v: VarId) -> Polynomial {
        Polynomial::var(self.dim(), v)
    }

    /// Re-indexes a polynomial in `q` and sigma variables into the observed ring.
    pub fn to_observed(
        &self,
        p: &Polynomial,
    ) -> Result<Polynomial, semident_algebra::AlgebraError> {
        let map: Vec<Option<usize>> = (0..self.dim())
            .map(|i| {
                if i >= self.q.0 {
                    Some(i - self.q.0)
                } else {
                    None
                }
            })
            .collect();
        p.reindex(&map, self.dim() - self.q.0)
    }
}

/// Sigma entries as polynomials in the parameters, for `i <= j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaMap {
    entries: BTreeMap<(Vertex, Vertex), Polynomial>,
}

impl SigmaMap {
    pub fn get(&self, i: Vertex, j: Vertex) -> &Polynomial {
        &self.entries[&(i.min(j), i.max(j))]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Vertex, Vertex), &Polynomial)> {
        self.entries.iter()
    }
}

/// What is being identified.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetKind {
    DirectEffect { from: Vertex, to: Vertex },
    OmegaEntry { i: Vertex, j: Vertex },
    TotalEffect { from: Vertex, to: Vertex },
    PathEffect { path: DirectedPath },
}

impl TargetKind {
    /// Lambda and omega entries (the model coordinates).
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            TargetKind::DirectEffect { .. } | TargetKind::OmegaEntry { .. }
        )
    }

    pub fn label(&self, m: usize) -> String {
        match self {
            TargetKind::DirectEffect { from, to } => pair_name("l", *from, *to, m),
            TargetKind::OmegaEntry { i, j } => pair_name("w", *i, *j, m),
            TargetKind::TotalEffect { from, to } => format!("TE({from},{to})"),
            TargetKind::PathEffect { path } => format!("PE({path})"),
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label(9))
    }
}

/// A target together with its polynomial in the parameter variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterTarget {
    pub kind: TargetKind,
    pub polynomial: Polynomial,
}

type PolyMatrix = Vec<Vec<Polynomial>>;

fn mat_mul(a: &PolyMatrix, b: &PolyMatrix, dim: usize) -> PolyMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(Polynomial::zero(dim), |acc, k| {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&a[i][k] * &b[k][j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

fn transpose(a: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| a[j][i].clone()).collect())
        .collect()
}

/// The parametrization of one graph.
#[derive(Debug, Clone)]
pub struct Parametrization {
    graph: MixedGraph,
    ring: ParamRing,
    sigma: SigmaMap,
}

impl Parametrization {
    pub fn new(graph: &MixedGraph) -> Self {
        let ring = ParamRing::new(graph);
        let sigma = Self::build_sigma(graph, &ring);
        Parametrization {
            graph: graph.clone(),
            ring,
            sigma,
        }
    }

    pub fn graph(&self) -> &MixedGraph {
        &self.graph
    }

    pub fn ring(&self) -> &ParamRing {
        &self.ring
    }

    /// `Lambda` as a polynomial matrix (zero-based indices).
    pub fn lambda_matrix(&self) -> PolyMatrix {
        let (m, dim) = (self.graph.m(), self.ring.dim());
        let mut l = vec![vec![Polynomial::zero(dim); m]; m];
        for (&(i, j), &v) in self.ring.lambdas() {
            l[i - 1][j - 1] = self.ring.var(v);
        }
        l
    }

    /// `Omega` with free entries where the graph allows them, zero elsewhere.
    pub fn omega_matrix(&self) -> PolyMatrix {
        let (m, dim) = (self.graph.m(), self.ring.dim());
        let mut o = vec![vec![Polynomial::zero(dim); m]; m];
        for (&(i, j), &v) in self.ring.omegas() {
            o[i - 1][j - 1] = self.ring.var(v);
            o[j - 1][i - 1] = self.ring.var(v);
        }
        o
    }

    /// `(I - Lambda)^{-1}` via the finite Neumann series (Lambda is nilpotent).
    pub fn inverse_i_minus_lambda(&self) -> PolyMatrix {
        let (m, dim) = (self.graph.m(), self.ring.dim());
        let l = self.lambda_matrix();
        let identity: PolyMatrix = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if i == j {
                            Polynomial::one(dim)
                        } else {
                            Polynomial::zero(dim)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut total = identity.clone();
        let mut power = identity;
        for _ in 1..m {
            power = mat_mul(&power, &l, dim);
            for i in 0..m {
                for j in 0..m {
                    total[i][j] = &total[i][j] + &power[i][j];
                }
            }
        }
        total
    }

    fn build_sigma(graph: &MixedGraph, ring: &ParamRing) -> SigmaMap {
        let tmp = Parametrization {
            graph: graph.clone(),
            ring: ring.clone(),
            sigma: SigmaMap {
                entries: BTreeMap::new(),
            },
        };
        let t = tmp.inverse_i_minus_lambda();
        let s = mat_mul(
            &mat_mul(&transpose(&t), &tmp.omega_matrix(), ring.dim()),
            &t,
            ring.dim(),
        );
        let mut entries = BTreeMap::new();
        for i in 1..=graph.m() {
            for j in i..=graph.m() {
                entries.insert((i, j), s[i - 1][j - 1].clone());
            }
        }
        SigmaMap { entries }
    }

    pub fn sigma_polys(&self) -> &SigmaMap {
        &self.sigma
    }

    fn path_monomial(&self, path: &DirectedPath) -> Polynomial {
        path.edges()
            .fold(Polynomial::one(self.ring.dim()), |acc, (k, l)| {
                &acc * &self
                    .ring
                    .var(self.ring.lambda(k, l).expect("path edge in graph"))
            })
    }

    /// Sum over directed paths `i -> ... -> j` of the edge-coefficient products.
    pub fn total_effect_poly(&self, i: Vertex, j: Vertex) -> Result<Polynomial, ParamError> {
        let paths = self.graph.directed_paths(i, j)?;
        Ok(paths
            .iter()
            .fold(Polynomial::zero(self.ring.dim()), |acc, p| {
                &acc + &self.path_monomial(p)
            }))
    }

    /// One monomial per directed path of length at least one.
    pub fn path_effect_polys(
        &self,
        i: Vertex,
        j: Vertex,
    ) -> Result<Vec<(DirectedPath, Polynomial)>, ParamError> {
        Ok(self
            .graph
            .directed_paths(i, j)?
            .into_iter()
            .filter(|p| !p.is_empty())
            .map(|p| {
                let poly = self.path_monomial(&p);
                (p, poly)
            })
            .collect())
    }

    pub fn target(&self, kind: TargetKind) -> Result<ParameterTarget, ParamError> {
        let polynomial = match &kind {
            TargetKind::DirectEffect { from, to } => {
                let v = self
                    .ring
                    .lambda(*from, *to)
                    .ok_or(ParamError::EdgeAbsent(*from, *to))?;
                self.ring.var(v)
            }
            TargetKind::OmegaEntry { i, j } => {
                self.graph.check_vertex(*i)?;
                self.graph.check_vertex(*j)?;
                let v = self
                    .ring
                    .omega(*i, *j)
                    .ok_or(ParamError::OmegaNotFree(*i, *j))?;
                self.ring.var(v)
            }
            TargetKind::TotalEffect { from, to } => self.total_effect_poly(*from, *to)?,
            TargetKind::PathEffect { path } => {
                let ok = !path.is_empty()
                    && self
                        .graph
                        .directed_paths(path.source(), path.target())
                        .map(|ps| ps.contains(path))
                        .unwrap_or(false);
                if !ok {
                    return Err(ParamError::NotAPath(path.to_string()));
                }
                self.path_monomial(path)
            }
        };
        Ok(ParameterTarget { kind, polynomial })
    }

    /// Every direct effect, every free omega entry, every total effect with
    /// at least one path, and every path effect, in that order.
    pub fn all_targets(&self) -> Vec<ParameterTarget> {
        let mut kinds: Vec<TargetKind> = Vec::new();
        kinds.extend(
            self.graph
                .directed()
                .iter()
                .map(|&(from, to)| TargetKind::DirectEffect { from, to }),
        );
        kinds.extend(
            self.ring
                .omegas()
                .keys()
                .map(|&(i, j)| TargetKind::OmegaEntry { i, j }),
        );
        let m = self.graph.m();
        let mut paths = Vec::new();
        for i in 1..=m {
            for j in i + 1..=m {
                let ps = self.graph.directed_paths(i, j).expect("valid vertices");
                if !ps.is_empty() {
                    kinds.push(TargetKind::TotalEffect { from: i, to: j });
                    paths.extend(ps);
                }
            }
        }
        kinds.extend(
            paths
                .into_iter()
                .map(|path| TargetKind::PathEffect { path }),
        );
        kinds
            .into_iter()
            .map(|k| self.target(k).expect("targets built from the graph"))
            .collect()
    }

    /// `[(I - Lambda)^T S (I - Lambda)]_ij` with `S` the symmetric matrix of
    /// sigma variables: Omega written in lambda and sigma.
    pub fn omega_in_sigma(&self, i: Vertex, j: Vertex) -> Polynomial {
        let dim = self.ring.dim();
        let col = |c: Vertex| -> Vec<(Vertex, Polynomial)> {
            let mut v = vec![(c, Polynomial::one(dim))];
            for p in self.graph.parents(c) {
                let l = self.ring.var(self.ring.lambda(p, c).unwrap());
                v.push((p, -&l));
            }
            v
        };
        let mut acc = Polynomial::zero(dim);
        for (a, ca) in col(i) {
            for (b, cb) in col(j) {
                let s = self.ring.var(self.ring.sigma(a, b));
                acc = &acc + &(&(&ca * &cb) * &s);
            }
        }
        acc
    }

    /// Polynomials in lambda and sigma that vanish exactly when Omega has
    /// zeros at the non-adjacent pairs: one per missing bidirected edge.
    pub fn zero_pattern_constraints(&self) -> Vec<Polynomial> {
        let m = self.graph.m();
        let mut out = Vec::new();
        for i in 1..=m {
            for j in i + 1..=m {
                if !self.graph.has_bidirected(i, j) {
                    out.push(self.omega_in_sigma(i, j));
                }
            }
        }
        out
    }

    /// Images of every ring variable under the substitution
    /// `w_ij -> omega_in_sigma(i, j)`, other variables fixed.
    pub fn omega_substitution(&self) -> Vec<Polynomial> {
        let mut images: Vec<Polynomial> = (0..self.ring.dim())
            .map(|v| self.ring.var(VarId(v)))
            .collect();
        for (&(i, j), &v) in self.ring.omegas() {
            images[v.0] = self.omega_in_sigma(i, j);
        }
        images
    }
}

/// Exact numeric `Sigma` for given edge coefficients and Omega.
pub fn sigma_numeric(
    g: &MixedGraph,
    lambda: &BTreeMap<(Vertex, Vertex), BigRational>,
    omega: &RationalMatrix,
) -> Result<RationalMatrix, ParamError> {
    let m = g.m();
    if omega.size() != m {
        return Err(ParamError::WrongSize {
            expected: m,
            found: omega.size(),
        });
    }
    let l = lambda_numeric(g, lambda)?;
    let mut total = RationalMatrix::identity(m);
    let mut power = RationalMatrix::identity(m);
    for _ in 1..m {
        power = power.mul(&l);
        total = RationalMatrix::from_fn(m, |i, j| total.get(i, j) + power.get(i, j));
    }
    Ok(total.transpose().mul(omega).mul(&total))
}

fn lambda_numeric(
    g: &MixedGraph,
    lambda: &BTreeMap<(Vertex, Vertex), BigRational>,
) -> Result<RationalMatrix, ParamError> {
    let mut l = RationalMatrix::zeros(g.m());
    for (&(i, j), v) in lambda {
        if !g.has_directed(i, j) {
            return Err(ParamError::EdgeAbsent(i, j));
        }
        l.set(i - 1, j - 1, v.clone());
    }
    Ok(l)
}

/// `Omega = (I - Lambda)^T Sigma (I - Lambda)` in exact arithmetic.
pub fn omega_backsolve_numeric(
    g: &MixedGraph,
    sigma: &RationalMatrix,
    lambda: &BTreeMap<(Vertex, Vertex), BigRational>,
) -> Result<RationalMatrix, ParamError> {
    let m = g.m();
    if sigma.size() != m {
        return Err(ParamError::WrongSize {
            expected: m,
            found: sigma.size(),
        });
    }
    if !sigma.is_symmetric() {
        return Err(ParamError::NotSymmetric);
    }
    if !sigma.is_positive_definite() {
        return Err(ParamError::NotPositiveDefinite);
    }
    let a = RationalMatrix::identity(m).sub(&lambda_numeric(g, lambda)?);
    Ok(a.transpose().mul(sigma).mul(&a))
}

/// Evaluation point for the parameter variables of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterPoint {
    pub lambda: BTreeMap<(Vertex, Vertex), BigRational>,
    pub omega: RationalMatrix,
}

impl ParameterPoint {
    /// Values of every ring variable except `q` and sigma, as a dense
    /// vector suitable for evaluation (sigma entries filled from `Sigma`,
    /// `q` from `q_value`).
    pub fn assignment(
        &self,
        ring: &ParamRing,
        sigma: &RationalMatrix,
        q_value: BigRational,
    ) -> Vec<BigRational> {
        let mut values = vec![BigRational::zero(); ring.dim()];
        for (&(i, j), &v) in ring.lambdas() {
            values[v.0] = self
                .lambda
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(BigRational::zero);
        }
        for (&(i, j), &v) in ring.omegas() {
            values[v.0] = self.omega.get(i - 1, j - 1).clone();
        }
        values[ring.q().0] = q_value;
        for (&(i, j), &v) in ring.sigmas() {
            values[v.0] = sigma.get(i - 1, j - 1).clone();
        }
        values
    }
}

/// Omega evaluated at the identity and Lambda at zero gives Sigma = I.
pub fn identity_point(g: &MixedGraph) -> ParameterPoint {
    ParameterPoint {
        lambda: g
            .directed()
            .iter()
            .map(|&e| (e, BigRational::zero()))
            .collect(),
        omega: RationalMatrix::identity(g.m()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use semident_algebra::rational;

    fn parse(p: &Parametrization, text: &str) -> Polynomial {
        p.ring().ring().parse(text).unwrap()
    }

    #[test]
    fn chain_sigma_entries() {
        let g: MixedGraph = "3; 1->2 2->3".parse().unwrap();
        let p = Parametrization::new(&g);
        assert_eq!(p.sigma_polys().get(1, 3), &parse(&p, "w11*l12*l23"));
        assert_eq!(p.sigma_polys().get(1, 1), &parse(&p, "w11"));
        assert_eq!(p.sigma_polys().get(2, 2), &parse(&p, "w11*l12^2 + w22"));
    }

    #[test]
    fn single_edge_matches_hand_expansion() {
        let g: MixedGraph = "2; 1->2; 1<->2".parse().unwrap();
        let p = Parametrization::new(&g);
        // [[1, 0], [l, 1]] [[w11, w12], [w12, w22]] [[1, l], [0, 1]]
        assert_eq!(p.sigma_polys().get(1, 2), &parse(&p, "w11*l12 + w12"));
        assert_eq!(
            p.sigma_polys().get(2, 2),
            &parse(&p, "w11*l12^2 + 2*w12*l12 + w22")
        );
    }

    #[test]
    fn variable_layout_and_print_order() {
        let g: MixedGraph = "3; 1->3 1->2; 2<->3".parse().unwrap();
        let r = ParamRing::new(&g);
        let names: Vec<&str> = r.ring().names().iter().map(|s| s.as_str()).collect();
        assert_eq!(
            names,
            [
                "l12", "l13", "w11", "w22", "w23", "w33", "q", "s11", "s12", "s13", "s22", "s23",
                "s33"
            ]
        );
        let obs = r.observed_ring();
        let f = obs.parse("s12*q - s13").unwrap();
        assert_eq!(
            f.display(&obs, &r.observed_order()).to_string(),
            "s12*q - s13"
        );
    }

    #[test]
    fn targets_and_labels() {
        let g: MixedGraph = "3; 1->2 1->3 2->3".parse().unwrap();
        let p = Parametrization::new(&g);
        let labels: Vec<String> = p.all_targets().iter().map(|t| t.kind.label(3)).collect();
        assert_eq!(
            labels,
            [
                "l12",
                "l13",
                "l23",
                "w11",
                "w22",
                "w33",
                "TE(1,2)",
                "TE(1,3)",
                "TE(2,3)",
                "PE(1->2)",
                "PE(1->2->3)",
                "PE(1->3)",
                "PE(2->3)"
            ]
        );
        assert_eq!(
            p.total_effect_poly(1, 3).unwrap(),
            parse(&p, "l13 + l12*l23")
        );
        assert!(p
            .target(TargetKind::DirectEffect { from: 3, to: 1 })
            .is_err());
        assert!(p.target(TargetKind::OmegaEntry { i: 1, j: 2 }).is_err());
    }

    #[test]
    fn numeric_round_trip() {
        let g: MixedGraph = "3; 1->2 2->3; 1<->3".parse().unwrap();
        let lambda: BTreeMap<_, _> = [((1, 2), rational(3, 2)), ((2, 3), rational(-1, 2))].into();
        let mut omega = RationalMatrix::identity(3);
        omega.set(0, 2, rational(1, 4));
        omega.set(2, 0, rational(1, 4));
        let sigma = sigma_numeric(&g, &lambda, &omega).unwrap();
        assert_eq!(omega_backsolve_numeric(&g, &sigma, &lambda).unwrap(), omega);
        let bad = RationalMatrix::from_fn(3, |i, j| rational((i * 3 + j) as i64, 1));
        assert_eq!(
            omega_backsolve_numeric(&g, &bad, &lambda),
            Err(ParamError::NotSymmetric)
        );
    }
}
