//! Fraction-free Buchberger engine.
//!
//! Polynomials are held as term vectors sorted descending under the active
//! order, with primitive integer coefficients. Pairs are managed with the
//! Gebauer–Möller update (product and chain criteria).

use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Budget, GbStats, ResourceLimit, Strategy};
use crate::monomial::Monomial;
use crate::order::TermOrder;
use crate::poly::Polynomial;

pub(crate) type Terms = Vec<(Monomial, BigInt)>;

struct Entry {
    terms: Terms,
    mask: u64,
    sugar: u32,
}

impl Entry {
    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }
    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

pub(crate) struct Engine<'a> {
    order: &'a TermOrder,
    budget: &'a Budget,
    started: Instant,
    entries: Vec<Entry>,
    basis: Vec<usize>,
    pairs: Vec<Pair>,
    pub(crate) stats: GbStats,
}

/// Converts a rational polynomial into sorted primitive integer form.
pub(crate) fn to_terms(p: &Polynomial, order: &TermOrder) -> Terms {
    let (_, prim) = p.primitive_part();
    let mut terms: Terms = prim
        .terms()
        .map(|(m, c)| (m.clone(), c.numer().clone()))
        .collect();
    terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
    make_primitive(&mut terms);
    terms
}

/// Divides out the integer content and makes the leading coefficient positive.
pub(crate) fn make_primitive(terms: &mut Terms) {
    if terms.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, c) in terms.iter() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if terms[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, c) in terms.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// `a * a_mul - b * shift * b_mul`, where both inputs are sorted descending.
fn combine(
    order: &TermOrder,
    a: &[(Monomial, BigInt)],
    a_mul: &BigInt,
    b: &[(Monomial, BigInt)],
    shift: &Monomial,
    b_mul: &BigInt,
) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let a_unit = a_mul.is_one();
    let mut ia = a.iter().peekable();
    let mut ib = b.iter().map(|(m, c)| (shift.mul(m), c)).peekable();
    loop {
        let ord = match (ia.peek(), ib.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (Some((ma, _)), Some((mb, _))) => order.cmp(ma, mb),
        };
        match ord {
            Ordering::Greater => {
                let (m, c) = ia.next().unwrap();
                out.push((m.clone(), if a_unit { c.clone() } else { c * a_mul }));
            }
            Ordering::Less => {
                let (m, c) = ib.next().unwrap();
                out.push((m, -(c * b_mul)));
            }
            Ordering::Equal => {
                let (m, ca) = ia.next().unwrap();
                let (_, cb) = ib.next().unwrap();
                let lhs = if a_unit { ca.clone() } else { ca * a_mul };
                let c = lhs - cb * b_mul;
                if !c.is_zero() {
                    out.push((m.clone(), c));
                }
            }
        }
    }
    out
}

impl<'a> Engine<'a> {
    pub(crate) fn new(order: &'a TermOrder, budget: &'a Budget) -> Self {
        Engine {
            order,
            budget,
            started: Instant::now(),
            entries: Vec::new(),
            basis: Vec::new(),
            pairs: Vec::new(),
            stats: GbStats::default(),
        }
    }

    fn check_time(&self) -> Result<(), ResourceLimit> {
        if let Some(limit) = self.budget.time_limit {
            if self.started.elapsed() > limit {
                return Err(ResourceLimit::Time(limit));
            }
        }
        Ok(())
    }

    fn find_divisor(&self, m: &Monomial, skip: Option<usize>) -> Option<usize> {
        let mask = m.support_mask();
        self.basis.iter().copied().find(|&k| {
            Some(k) != skip && {
                let e = &self.entries[k];
                e.mask & !mask == 0 && e.lm().divides(m)
            }
        })
    }

    /// Full reduction of `h` by the current basis (optionally excluding one
    /// element). The result is primitive with positive leading coefficient.
    fn reduce(&mut self, mut h: Terms, skip: Option<usize>) -> Result<Terms, ResourceLimit> {
        let mut k = 0;
        let mut steps = 0u64;
        while k < h.len() {
            let Some(d) = self.find_divisor(&h[k].0, skip) else {
                k += 1;
                continue;
            };
            steps += 1;
            self.stats.reduction_steps += 1;
            if steps.is_multiple_of(64) {
                self.check_time()?;
            }
            let div = &self.entries[d];
            let shift = div.lm().quotient_of(&h[k].0).expect("divisor divides");
            let g = h[k].1.gcd(div.lc());
            let h_mul = div.lc() / &g;
            let d_mul = &h[k].1 / &g;
            let mut next: Terms = Vec::with_capacity(h.len() + div.terms.len());
            if h_mul.is_one() {
                next.extend(h.drain(..k));
            } else {
                next.extend(h.drain(..k).map(|(m, c)| (m, c * &h_mul)));
            }
            let rest = combine(self.order, &h[1..], &h_mul, &div.terms[1..], &shift, &d_mul);
            next.extend(rest);
            h = next;
            if steps.is_multiple_of(8) {
                make_primitive(&mut h);
            }
        }
        make_primitive(&mut h);
        Ok(h)
    }

    fn s_poly(&self, i: usize, j: usize, lcm: &Monomial) -> Terms {
        let (f, g) = (&self.entries[i], &self.entries[j]);
        let tf = f.lm().quotient_of(lcm).unwrap();
        let tg = g.lm().quotient_of(lcm).unwrap();
        let c = f.lc().gcd(g.lc());
        let f_mul = g.lc() / &c;
        let g_mul = f.lc() / &c;
        let fa: Terms = f.terms[1..]
            .iter()
            .map(|(m, c)| (tf.mul(m), c.clone()))
            .collect();
        combine(self.order, &fa, &f_mul, &g.terms[1..], &tg, &g_mul)
    }

    fn push_entry(&mut self, terms: Terms, sugar: u32) -> usize {
        let mask = terms[0].0.support_mask();
        self.entries.push(Entry { terms, mask, sugar });
        self.entries.len() - 1
    }

    /// Gebauer–Möller update after adding entry `h`.
    fn update(&mut self, h: usize) {
        let lm_h = self.entries[h].lm().clone();
        let sugar_h = self.entries[h].sugar;
        let mut candidates: Vec<(Pair, bool)> = self
            .basis
            .iter()
            .map(|&g| {
                let e = &self.entries[g];
                let lcm = lm_h.lcm(e.lm());
                let sugar = (sugar_h + lcm.degree() - lm_h.degree())
                    .max(e.sugar + lcm.degree() - e.lm().degree());
                let coprime = lm_h.is_coprime(e.lm());
                (
                    Pair {
                        i: g,
                        j: h,
                        lcm,
                        sugar,
                    },
                    coprime,
                )
            })
            .collect();

        // Criterion M/F over the new pairs.
        let mut kept: Vec<(Pair, bool)> = Vec::with_capacity(candidates.len());
        while !candidates.is_empty() {
            let (p, coprime) = candidates.remove(0);
            let dominated = !coprime
                && (candidates.iter().any(|(q, _)| q.lcm.divides(&p.lcm))
                    || kept.iter().any(|(q, _)| q.lcm.divides(&p.lcm)));
            if !dominated {
                kept.push((p, coprime));
            }
        }
        let fresh: Vec<Pair> = kept
            .into_iter()
            .filter_map(|(p, coprime)| if coprime { None } else { Some(p) })
            .collect();
        self.stats.pairs_skipped += (self.basis.len() - fresh.len()) as u64;

        // Chain criterion on the old pairs.
        let entries = &self.entries;
        let before = self.pairs.len();
        self.pairs.retain(|p| {
            !lm_h.divides(&p.lcm)
                || lm_h.lcm(entries[p.i].lm()) == p.lcm
                || lm_h.lcm(entries[p.j].lm()) == p.lcm
        });
        self.stats.pairs_skipped += (before - self.pairs.len()) as u64;
        self.pairs.extend(fresh);

        let entries = &self.entries;
        self.basis.retain(|&g| !lm_h.divides(entries[g].lm()));
        self.basis.push(h);
    }

    fn select_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let better = |a: &Pair, b: &Pair| -> bool {
            let by_lcm = order.cmp(&a.lcm, &b.lcm);
            let ord = match self.budget.strategy {
                Strategy::Normal => by_lcm.then(a.sugar.cmp(&b.sugar)),
                Strategy::Sugar => a.sugar.cmp(&b.sugar).then(by_lcm),
            };
            ord.then((a.j, a.i).cmp(&(b.j, b.i))) == Ordering::Less
        };
        let mut best = 0;
        for k in 1..self.pairs.len() {
            if better(&self.pairs[k], &self.pairs[best]) {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    /// Adds an input generator, reducing it against the current basis first.
    pub(crate) fn add_generator(&mut self, p: &Polynomial) -> Result<(), ResourceLimit> {
        if p.is_zero() {
            return Ok(());
        }
        let sugar = p.total_degree().unwrap_or(0);
        let terms = to_terms(p, self.order);
        let h = self.reduce(terms, None)?;
        if !h.is_empty() {
            let idx = self.push_entry(h, sugar);
            self.update(idx);
        }
        Ok(())
    }

    pub(crate) fn run(&mut self) -> Result<(), ResourceLimit> {
        while let Some(pair) = self.select_pair() {
            self.check_time()?;
            self.stats.pairs_reduced += 1;
            if let Some(max) = self.budget.max_pairs {
                if self.stats.pairs_reduced > max {
                    return Err(ResourceLimit::Pairs(max));
                }
            }
            let s = self.s_poly(pair.i, pair.j, &pair.lcm);
            let h = self.reduce(s, None)?;
            if h.is_empty() {
                self.stats.zero_reductions += 1;
                continue;
            }
            let idx = self.push_entry(h, pair.sugar);
            self.update(idx);
        }
        Ok(())
    }

    /// Interreduces the (minimal) basis and returns it monic, sorted
    /// ascending by leading monomial.
    pub(crate) fn finish(mut self, dim: usize) -> Result<Vec<Polynomial>, ResourceLimit> {
        let basis = self.basis.clone();
        for &g in &basis {
            let terms = std::mem::take(&mut self.entries[g].terms);
            // The leading term is irreducible by the others (minimal basis).
            let reduced = self.reduce_tail(terms, g)?;
            self.entries[g].terms = reduced;
        }
        let mut out: Vec<(Monomial, Polynomial)> = basis
            .iter()
            .map(|&g| {
                let e = &self.entries[g];
                let lc = e.lc().clone();
                let poly = Polynomial::from_terms(
                    dim,
                    e.terms
                        .iter()
                        .map(|(m, c)| (m.clone(), BigRational::new(c.clone(), lc.clone()))),
                )
                .expect("consistent dimension");
                (e.lm().clone(), poly)
            })
            .collect();
        out.sort_by(|a, b| self.order.cmp(&a.0, &b.0));
        Ok(out.into_iter().map(|(_, p)| p).collect())
    }

    fn reduce_tail(&mut self, terms: Terms, own: usize) -> Result<Terms, ResourceLimit> {
        // Temporarily put a placeholder so find_divisor can skip `own`.
        let lead = terms[0].clone();
        self.entries[own].terms = vec![lead];
        let out = self.reduce(terms, Some(own))?;
        Ok(out)
    }
}
