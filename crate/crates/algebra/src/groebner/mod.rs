//! Division, Buchberger's algorithm, reduced Gröbner bases and elimination.

mod engine;

use std::collections::BTreeSet;
use std::time::Duration;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::AlgebraError;
use crate::monomial::Monomial;
use crate::order::TermOrder;
use crate::poly::Polynomial;
use crate::ring::{Ring, VarId};

/// Generators of an ideal together with the ring and the order used to
/// compute with them. Zero generators are dropped on construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealGens {
    ring: Ring,
    order: TermOrder,
    generators: Vec<Polynomial>,
}

impl IdealGens {
    pub fn new(
        ring: Ring,
        order: TermOrder,
        generators: Vec<Polynomial>,
    ) -> Result<Self, AlgebraError> {
        order.validate(ring.dim())?;
        for g in &generators {
            if g.dim() != ring.dim() {
                return Err(AlgebraError::DimensionMismatch {
                    expected: ring.dim(),
                    found: g.dim(),
                });
            }
        }
        Ok(IdealGens {
            ring,
            order,
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    /// Same generators under another order of the same ring.
    pub fn with_order(&self, order: TermOrder) -> Result<Self, AlgebraError> {
        IdealGens::new(self.ring.clone(), order, self.generators.clone())
    }
}

/// Pair-selection strategy for Buchberger's algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Strategy {
    /// Smallest lcm of leading monomials first (ties by sugar degree).
    #[default]
    Normal,
    /// Smallest sugar degree first (ties by lcm).
    Sugar,
}

/// Resource limits and pair strategy for one Gröbner basis computation.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Budget {
    pub max_pairs: Option<u64>,
    pub time_limit: Option<Duration>,
    pub strategy: Strategy,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_time_limit(limit: Duration) -> Self {
        Budget {
            time_limit: Some(limit),
            ..Budget::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResourceLimit {
    Time(Duration),
    Pairs(u64),
}

impl std::fmt::Display for ResourceLimit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResourceLimit::Time(d) => write!(f, "time limit of {:.1}s exceeded", d.as_secs_f64()),
            ResourceLimit::Pairs(n) => write!(f, "S-pair limit of {n} exceeded"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GbError {
    #[error("unresolved: {0}")]
    Unresolved(ResourceLimit),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<ResourceLimit> for GbError {
    fn from(l: ResourceLimit) -> Self {
        GbError::Unresolved(l)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbStats {
    pub pairs_reduced: u64,
    pub pairs_skipped: u64,
    pub zero_reductions: u64,
    pub reduction_steps: u64,
}

/// A Gröbner basis. When `reduced`, elements are monic, sorted ascending by
/// leading monomial, and the representation is unique for (ideal, order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerBasis {
    ring: Ring,
    order: TermOrder,
    elements: Vec<Polynomial>,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Polynomial> {
        self.elements
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// True for the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .map(|g| {
                g.leading_monomial(&self.order)
                    .expect("nonzero element")
                    .clone()
            })
            .collect()
    }

    /// Normal form of `f` modulo the basis.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial, AlgebraError> {
        Ok(divide(f, &self.elements, &self.order)?.remainder)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        ideal_membership(f, self)
    }

    /// Checks Buchberger's criterion directly: every S-polynomial of two
    /// elements has remainder zero.
    pub fn s_pairs_reduce_to_zero(&self) -> bool {
        for i in 0..self.elements.len() {
            for j in i + 1..self.elements.len() {
                let s = s_polynomial(&self.elements[i], &self.elements[j], &self.order)
                    .expect("nonzero basis elements");
                match divide(&s, &self.elements, &self.order) {
                    Ok(d) if d.remainder.is_zero() => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Checks the structural conditions of a reduced basis: monic elements,
    /// no leading monomial dividing another element's term, ascending order.
    pub fn satisfies_reduced_shape(&self) -> bool {
        let lms = self.leading_monomials();
        for (k, g) in self.elements.iter().enumerate() {
            let (_, lc) = g.leading_term(&self.order).expect("nonzero");
            if lc != BigRational::from_integer(1.into()) {
                return false;
            }
            for (m, _) in g.terms() {
                for (l, lm) in lms.iter().enumerate() {
                    if lm.divides(m) && !(l == k && m == lm) {
                        return false;
                    }
                }
            }
        }
        lms.windows(2)
            .all(|w| self.order.cmp(&w[0], &w[1]) == std::cmp::Ordering::Less)
    }
}

/// Quotients and remainder of a multivariate division.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

/// Multivariate division of `f` by an ordered list of divisors.
///
/// The leading term of the running dividend is cancelled with the first
/// divisor whose leading monomial divides it; otherwise it moves to the
/// remainder. Afterwards `f = sum(q_i * d_i) + r` and no term of `r` is
/// divisible by any divisor's leading monomial.
pub fn divide(
    f: &Polynomial,
    divisors: &[Polynomial],
    order: &TermOrder,
) -> Result<Division, AlgebraError> {
    let dim = f.dim();
    let mut leads = Vec::with_capacity(divisors.len());
    let mut sorted = Vec::with_capacity(divisors.len());
    for d in divisors {
        if d.dim() != dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim,
                found: d.dim(),
            });
        }
        leads.push(d.leading_term(order)?);
        sorted.push(
            d.sorted_terms(order)
                .into_iter()
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect::<Vec<_>>(),
        );
    }
    let mut quotients = vec![Polynomial::zero(dim); divisors.len()];
    let mut remainder = Polynomial::zero(dim);
    let mut p: Vec<(Monomial, BigRational)> = f
        .sorted_terms(order)
        .into_iter()
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect();
    // p is kept sorted descending; `start` marks the current leading term.
    let mut start = 0;
    while start < p.len() {
        let (m, c) = p[start].clone();
        let hit = leads.iter().position(|(lm, _)| lm.divides(&m));
        match hit {
            None => {
                remainder.add_term(m, c);
                start += 1;
            }
            Some(i) => {
                let (lm, lc) = &leads[i];
                let shift = lm.quotient_of(&m).expect("divides");
                let coef = &c / lc;
                quotients[i].add_term(shift.clone(), coef.clone());
                let tail = &p[start + 1..];
                let sub: Vec<(Monomial, BigRational)> = sorted[i][1..]
                    .iter()
                    .map(|(dm, dc)| (shift.mul(dm), dc * &coef))
                    .collect();
                p = merge_sub(order, tail, &sub);
                start = 0;
            }
        }
    }
    Ok(Division {
        quotients,
        remainder,
    })
}

fn merge_sub(
    order: &TermOrder,
    a: &[(Monomial, BigRational)],
    b: &[(Monomial, BigRational)],
) -> Vec<(Monomial, BigRational)> {
    use std::cmp::Ordering;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
            (Some(_), None) => Ordering::Greater,
            _ => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((b[j].0.clone(), -b[j].1.clone()));
                j += 1;
            }
            Ordering::Equal => {
                let c = &a[i].1 - &b[j].1;
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// The S-polynomial `lcm/lt(f) * f - lcm/lt(g) * g`.
pub fn s_polynomial(
    f: &Polynomial,
    g: &Polynomial,
    order: &TermOrder,
) -> Result<Polynomial, AlgebraError> {
    let (mf, cf) = f.leading_term(order)?;
    let (mg, cg) = g.leading_term(order)?;
    let l = mf.lcm(&mg);
    let a = f.mul_term(&mf.quotient_of(&l).unwrap(), &cf.recip());
    let b = g.mul_term(&mg.quotient_of(&l).unwrap(), &cg.recip());
    a.try_sub(&b)
}

/// Reduced Gröbner basis of the ideal under `gens.order()`.
pub fn buchberger(gens: &IdealGens, budget: &Budget) -> Result<GroebnerBasis, GbError> {
    buchberger_with_stats(gens, budget).map(|(gb, _)| gb)
}

pub fn buchberger_with_stats(
    gens: &IdealGens,
    budget: &Budget,
) -> Result<(GroebnerBasis, GbStats), GbError> {
    let order = &gens.order;
    let mut inputs: Vec<&Polynomial> = gens.generators.iter().collect();
    inputs.sort_by(|a, b| {
        order.cmp(
            a.leading_monomial(order).unwrap(),
            b.leading_monomial(order).unwrap(),
        )
    });
    let mut engine = engine::Engine::new(order, budget);
    for p in inputs {
        engine.add_generator(p)?;
    }
    engine.run()?;
    let stats = engine.stats;
    let elements = engine.finish(gens.ring.dim())?;
    Ok((
        GroebnerBasis {
            ring: gens.ring.clone(),
            order: order.clone(),
            elements,
            reduced: true,
        },
        stats,
    ))
}

/// `f` lies in the ideal iff its remainder modulo the reduced basis is zero.
pub fn ideal_membership(f: &Polynomial, gb: &GroebnerBasis) -> bool {
    match divide(f, &gb.elements, &gb.order) {
        Ok(d) => d.remainder.is_zero(),
        Err(_) => false,
    }
}

fn elimination_setup(gens: &IdealGens, drop: &BTreeSet<VarId>) -> TermOrder {
    let dim = gens.ring.dim();
    let top: Vec<usize> = drop.iter().map(|v| v.0).collect();
    if let TermOrder::Block(blocks) = &gens.order {
        let first: BTreeSet<usize> = blocks[0].vars.iter().copied().collect();
        if first == top.iter().copied().collect::<BTreeSet<_>>() {
            return gens.order.clone();
        }
    }
    TermOrder::elimination(dim, &top)
}

/// Reduced Gröbner basis of `<gens> ∩ Q[remaining variables]`, expressed in
/// the smaller ring under the restriction of the elimination order.
pub fn eliminate_basis(
    gens: &IdealGens,
    drop: &BTreeSet<VarId>,
    budget: &Budget,
) -> Result<GroebnerBasis, GbError> {
    let dim = gens.ring.dim();
    if let Some(v) = drop.iter().find(|v| v.0 >= dim) {
        return Err(AlgebraError::VariableOutOfRange { index: v.0, dim }.into());
    }
    if drop.is_empty() {
        return buchberger(gens, budget);
    }
    let order = elimination_setup(gens, drop);
    let full = buchberger(&gens.with_order(order.clone())?, budget)?;
    let mut keep = vec![None; dim];
    let mut names = Vec::new();
    let mut print = Vec::new();
    for (i, name) in gens.ring.names().iter().enumerate() {
        if !drop.contains(&VarId(i)) {
            keep[i] = Some(names.len());
            names.push(name.clone());
        }
    }
    for i in gens.ring.print_sequence() {
        if let Some(j) = keep[i] {
            print.push(j);
        }
    }
    let ring = Ring::new(names).with_print_order(print)?;
    let small_order = order.restrict(&keep);
    let dropped: Vec<usize> = drop.iter().map(|v| v.0).collect();
    let elements = full
        .elements
        .iter()
        .filter(|g| g.terms().all(|(m, _)| !m.involves_any(&dropped)))
        .map(|g| g.reindex(&keep, ring.dim()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroebnerBasis {
        ring,
        order: small_order,
        elements,
        reduced: true,
    })
}

/// Generators of the elimination ideal `<gens> ∩ Q[remaining variables]`.
pub fn eliminate(
    gens: &IdealGens,
    drop: &BTreeSet<VarId>,
    budget: &Budget,
) -> Result<IdealGens, GbError> {
    let gb = eliminate_basis(gens, drop, budget)?;
    Ok(IdealGens::new(gb.ring, gb.order, gb.elements)?)
}

#[cfg(test)]
mod tests;
