use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Exponent of a single variable.
pub type Exponent = u16;

/// A power product `x_0^e_0 * ... * x_{n-1}^e_{n-1}`, stored densely.
///
/// The derived `Ord` is a storage order (lexicographic on the raw exponent
/// vector) used for canonical maps; it is not a term order. Use
/// [`crate::TermOrder`] to compare monomials semantically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial {
    exps: SmallVec<[Exponent; 24]>,
}

impl Monomial {
    /// The monomial `1` in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, n),
        }
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = Exponent>) -> Self {
        Monomial {
            exps: exps.into_iter().collect(),
        }
    }

    /// `x_var^exp` in a ring with `n` variables.
    pub fn var(n: usize, var: usize, exp: Exponent) -> Self {
        let mut m = Self::one(n);
        m.exps[var] = exp;
        m
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> Exponent {
        self.exps[var]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.dim(), other.dim());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        }
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    /// True when the two monomials share no variable.
    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit `i % 64` is set when variable `i` occurs. If `a` divides `b` then
    /// `mask(a) & !mask(b) == 0`.
    pub fn support_mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |acc, (i, _)| acc | 1u64 << (i % 64))
    }

    /// Whether any of the variables in `vars` occurs.
    pub fn involves_any(&self, vars: &[usize]) -> bool {
        vars.iter().any(|&v| self.exps[v] > 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial{:?}", self.exps.as_slice())
    }
}
