use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::AlgebraError;
use crate::monomial::{Exponent, Monomial};
use crate::order::TermOrder;
use crate::ring::{Ring, VarId};

/// Sparse polynomial with exact rational coefficients.
///
/// Terms are kept in a map keyed by exponent vector, with no zero
/// coefficients, so equal polynomials have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: BigRational) -> Self {
        Self::term(dim, Monomial::one(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, BigRational::one())
    }

    pub fn var(dim: usize, v: VarId) -> Self {
        Self::term(dim, Monomial::var(dim, v.0, 1), BigRational::one())
    }

    pub fn term(dim: usize, mono: Monomial, coeff: BigRational) -> Self {
        assert_eq!(mono.dim(), dim, "monomial dimension mismatch");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        Polynomial { dim, terms }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and
    /// dropping zero coefficients.
    pub fn from_terms(
        dim: usize,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Result<Self, AlgebraError> {
        let mut p = Polynomial::zero(dim);
        for (m, c) in terms {
            if m.dim() != dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: dim,
                    found: m.dim(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in storage order (not a term order).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: &TermOrder) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn leading_term(&self, order: &TermOrder) -> Result<(Monomial, BigRational), AlgebraError> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or(AlgebraError::ZeroPolynomial)
    }

    pub fn leading_monomial(&self, order: &TermOrder) -> Option<&Monomial> {
        self.terms.keys().max_by(|a, b| order.cmp(a, b))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Largest exponent of `v` over all terms (0 for the zero polynomial).
    pub fn degree_in(&self, v: VarId) -> Exponent {
        self.terms
            .keys()
            .map(|m| m.exponent(v.0))
            .max()
            .unwrap_or(0)
    }

    pub fn involves(&self, v: VarId) -> bool {
        self.terms.keys().any(|m| m.exponent(v.0) > 0)
    }

    /// Variables occurring in at least one term.
    pub fn support(&self) -> Vec<VarId> {
        (0..self.dim)
            .filter(|&i| self.terms.keys().any(|m| m.exponent(i) > 0))
            .map(VarId)
            .collect()
    }

    fn check_dim(&self, other: &Polynomial) -> Result<(), AlgebraError> {
        if self.dim != other.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_dim(other)?;
        let mut out = Polynomial::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by the term `c * mono`.
    pub fn mul_term(&self, mono: &Monomial, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.dim);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at a full assignment of the occurring variables.
    pub fn substitute(
        &self,
        values: &BTreeMap<VarId, BigRational>,
    ) -> Result<BigRational, AlgebraError> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = values
                    .get(&VarId(i))
                    .ok_or(AlgebraError::MissingAssignment(VarId(i)))?;
                term *= num_traits::pow(v.clone(), usize::from(e));
            }
            total += term;
        }
        Ok(total)
    }

    /// Evaluates with a dense value vector (one entry per ring variable).
    pub fn evaluate(&self, values: &[BigRational]) -> Result<BigRational, AlgebraError> {
        if values.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: values.len(),
            });
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term *= num_traits::pow(values[i].clone(), usize::from(e));
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Substitutes the given variables by rational values, keeping the
    /// others symbolic.
    pub fn partial_substitute(&self, values: &BTreeMap<VarId, BigRational>) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps: Vec<Exponent> = m.exponents().to_vec();
            for (v, val) in values {
                let e = exps[v.0];
                if e > 0 {
                    coeff *= num_traits::pow(val.clone(), usize::from(e));
                    exps[v.0] = 0;
                }
            }
            out.add_term(Monomial::from_exponents(exps), coeff);
        }
        out
    }

    /// Ring map: replaces variable `i` by `images[i]`. All images must live
    /// in the same target ring.
    pub fn compose(
        &self,
        images: &[Polynomial],
        target_dim: usize,
    ) -> Result<Polynomial, AlgebraError> {
        if images.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: images.len(),
            });
        }
        if let Some(bad) = images.iter().find(|p| p.dim != target_dim) {
            return Err(AlgebraError::DimensionMismatch {
                expected: target_dim,
                found: bad.dim,
            });
        }
        let mut out = Polynomial::zero(target_dim);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target_dim, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = &term * &images[i].pow(u32::from(e));
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Moves the polynomial into another ring. `map[i]` is the new index of
    /// variable `i`, or `None` if the variable must not occur.
    pub fn reindex(
        &self,
        map: &[Option<usize>],
        new_dim: usize,
    ) -> Result<Polynomial, AlgebraError> {
        let mut out = Polynomial::zero(new_dim);
        for (m, c) in &self.terms {
            let mut exps = vec![0; new_dim];
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map.get(i).copied().flatten() {
                    Some(j) if j < new_dim => exps[j] = e,
                    _ => {
                        return Err(AlgebraError::VariableOutOfRange {
                            index: i,
                            dim: new_dim,
                        })
                    }
                }
            }
            out.add_term(Monomial::from_exponents(exps), c.clone());
        }
        Ok(out)
    }

    /// Coefficients of `self` viewed as a polynomial in `v`:
    /// `result[k]` is the coefficient of `v^k`.
    pub fn coefficients_in(&self, v: VarId) -> Vec<Polynomial> {
        let deg = usize::from(self.degree_in(v));
        let mut out = vec![Polynomial::zero(self.dim); deg + 1];
        for (m, c) in &self.terms {
            let k = usize::from(m.exponent(v.0));
            let mut exps = m.exponents().to_vec();
            exps[v.0] = 0;
            out[k].add_term(Monomial::from_exponents(exps), c.clone());
        }
        out
    }

    /// Least common multiple of the coefficient denominators divided out
    /// and the gcd of the numerators removed: the primitive integer
    /// polynomial associated to `self`, and the factor `self = factor * primitive`.
    pub fn primitive_part(&self) -> (BigRational, Polynomial) {
        if self.is_zero() {
            return (BigRational::one(), self.clone());
        }
        let lcm_den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let gcd_num = self.terms.values().fold(BigInt::zero(), |acc, c| {
            acc.gcd(&(c.numer() * (&lcm_den / c.denom())))
        });
        let factor = BigRational::new(gcd_num, lcm_den);
        let scaled = self.scale(&factor.recip());
        (factor, scaled)
    }

    /// Makes the leading coefficient under `order` equal to one.
    pub fn monic(&self, order: &TermOrder) -> Polynomial {
        match self.leading_term(order) {
            Ok((_, c)) => self.scale(&c.recip()),
            Err(_) => self.clone(),
        }
    }

    /// Primitive integer form with positive leading coefficient under `order`.
    pub fn normalized(&self, order: &TermOrder) -> Polynomial {
        let (_, p) = self.primitive_part();
        match p.leading_term(order) {
            Ok((_, c)) if c.is_negative() => -&p,
            _ => p,
        }
    }

    pub fn display<'a>(&'a self, ring: &'a Ring, order: &'a TermOrder) -> PolynomialDisplay<'a> {
        PolynomialDisplay {
            poly: self,
            ring,
            order,
        }
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

/// Text rendering: terms descending by the order, `*` between factors,
/// `^` for powers, coefficients as integers or `a/b`.
pub struct PolynomialDisplay<'a> {
    poly: &'a Polynomial,
    ring: &'a Ring,
    order: &'a TermOrder,
}

impl fmt::Display for PolynomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let seq = self.ring.print_sequence();
        for (k, (m, c)) in self.poly.sorted_terms(self.order).into_iter().enumerate() {
            let abs = c.abs();
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut first = true;
            if m.is_one() || !abs.is_one() {
                write_coeff(f, &abs)?;
                first = false;
            }
            for &v in &seq {
                let e = m.exponent(v);
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.ring.name(VarId(v)))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = Ring::new((0..self.dim).map(|i| format!("x{i}")));
        write!(
            f,
            "Polynomial({})",
            self.display(&ring, &TermOrder::Grevlex)
        )
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial dimension mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SerialPoly {
    dim: usize,
    terms: Vec<(Vec<Exponent>, String)>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SerialPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.exponents().to_vec(), c.to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SerialPoly::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for (exps, c) in raw.terms {
            let c: BigRational = c
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient {c:?}")))?;
            terms.push((Monomial::from_exponents(exps), c));
        }
        Polynomial::from_terms(raw.dim, terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational;

    fn ring() -> Ring {
        Ring::new(["x", "y"])
    }

    #[test]
    fn difference_of_squares() {
        let r = ring();
        let x = r.parse("x").unwrap();
        let y = r.parse("y").unwrap();
        assert_eq!(&(&x + &y) * &(&x - &y), r.parse("x^2 - y^2").unwrap());
    }

    #[test]
    fn cancellation_gives_empty_map() {
        let f = ring().parse("3*x*y - 2*x^2 + 7").unwrap();
        let z = &f + &(-&f);
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn exact_rational_product() {
        let r = ring();
        let a = r.parse("1/2*x").unwrap();
        let b = r.parse("2/3*x").unwrap();
        assert_eq!(&a * &b, r.parse("1/3*x^2").unwrap());
    }

    #[test]
    fn leading_terms() {
        let r = ring();
        let f = r.parse("x^2 + y").unwrap();
        assert_eq!(
            f.leading_term(&TermOrder::Lex).unwrap(),
            (Monomial::from_exponents([2, 0]), rational(1, 1))
        );
        let g = r.parse("3*x*y - 2*x^2").unwrap();
        assert_eq!(
            g.leading_term(&TermOrder::Grevlex).unwrap(),
            (Monomial::from_exponents([2, 0]), rational(-2, 1))
        );
        assert_eq!(
            Polynomial::zero(2).leading_term(&TermOrder::Lex),
            Err(AlgebraError::ZeroPolynomial)
        );
    }

    #[test]
    fn substitution() {
        let r = ring();
        let f = r.parse("x^2 + y").unwrap();
        let vals: BTreeMap<_, _> = [(VarId(0), rational(2, 1)), (VarId(1), rational(3, 1))].into();
        assert_eq!(f.substitute(&vals).unwrap(), rational(7, 1));
        assert_eq!(
            Polynomial::zero(2).substitute(&BTreeMap::new()).unwrap(),
            rational(0, 1)
        );
        let missing: BTreeMap<_, _> = [(VarId(0), rational(2, 1))].into();
        assert_eq!(
            f.substitute(&missing),
            Err(AlgebraError::MissingAssignment(VarId(1)))
        );
    }

    #[test]
    fn omega_lambda_product_substitution() {
        let r = Ring::new(["w11", "l12"]);
        let f = r.parse("w11*l12").unwrap();
        let vals: BTreeMap<_, _> = [(VarId(0), rational(1, 1)), (VarId(1), rational(2, 1))].into();
        assert_eq!(f.substitute(&vals).unwrap(), rational(2, 1));
    }

    #[test]
    fn mismatched_dimensions_are_errors() {
        let a = Polynomial::one(2);
        let b = Polynomial::one(3);
        assert!(a.try_add(&b).is_err());
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn rendering() {
        let r = Ring::new(["q", "s12", "s13"])
            .with_print_order(vec![1, 2, 0])
            .unwrap();
        let order = TermOrder::elimination(3, &[0]);
        let f = r.parse("q*s12 - s13").unwrap();
        assert_eq!(f.display(&r, &order).to_string(), "s12*q - s13");
        let g = Ring::new(["x", "y"]).parse("-1/3*x^2 + 2*y - 5").unwrap();
        assert_eq!(
            g.display(&ring(), &TermOrder::Lex).to_string(),
            "-1/3*x^2 + 2*y - 5"
        );
        assert_eq!(
            Polynomial::zero(1)
                .display(&Ring::new(["x"]), &TermOrder::Lex)
                .to_string(),
            "0"
        );
    }

    #[test]
    fn primitive_part_and_normalization() {
        let r = ring();
        let f = r.parse("-1/2*x + 3/4*y").unwrap();
        let (c, p) = f.primitive_part();
        assert_eq!(p, r.parse("-2*x + 3*y").unwrap());
        assert_eq!(p.scale(&c), f);
        assert_eq!(f.normalized(&TermOrder::Lex), r.parse("2*x - 3*y").unwrap());
    }

    #[test]
    fn compose_and_coefficients() {
        let r = ring();
        let f = r.parse("x^2*y + x").unwrap();
        // x -> y + 1, y -> 2
        let images = [r.parse("y + 1").unwrap(), r.parse("2").unwrap()];
        assert_eq!(
            f.compose(&images, 2).unwrap(),
            r.parse("2*y^2 + 5*y + 3").unwrap()
        );
        let coeffs = f.coefficients_in(VarId(0));
        assert_eq!(coeffs.len(), 3);
        assert!(coeffs[0].is_zero());
        assert_eq!(coeffs[2], r.parse("y").unwrap());
    }
}
