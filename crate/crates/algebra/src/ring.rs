use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::poly::Polynomial;

/// Index of an indeterminate within a [`Ring`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(pub usize);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Ring descriptor: the ordered list of variable names of `Q[x_0, ..., x_{n-1}]`.
///
/// Polynomials only carry exponent vectors; names live here. The optional
/// print order controls the order of factors inside a printed monomial
/// (so that `q*s12` can be shown as `s12*q`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ring {
    names: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    print_order: Option<Vec<usize>>,
}

impl Ring {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Ring {
            names: names.into_iter().map(Into::into).collect(),
            print_order: None,
        }
    }

    /// Sets the order in which factors of a monomial are printed.
    pub fn with_print_order(mut self, order: Vec<usize>) -> Result<Self, AlgebraError> {
        let mut seen = vec![false; self.dim()];
        for &v in &order {
            if v >= self.dim() || std::mem::replace(&mut seen[v], true) {
                return Err(AlgebraError::InvalidOrder(
                    "print order must be a permutation of the ring variables".into(),
                ));
            }
        }
        if order.len() != self.dim() {
            return Err(AlgebraError::InvalidOrder(
                "print order must list every variable".into(),
            ));
        }
        self.print_order = Some(order);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v.0]
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name).map(VarId)
    }

    pub(crate) fn print_sequence(&self) -> Vec<usize> {
        match &self.print_order {
            Some(o) => o.clone(),
            None => (0..self.dim()).collect(),
        }
    }

    /// The polynomial consisting of the single variable `v`.
    pub fn var(&self, v: VarId) -> Polynomial {
        Polynomial::var(self.dim(), v)
    }

    /// Parses a polynomial written with this ring's variable names, e.g.
    /// `s12*q - s13` or `1/3*x^2 + 2`.
    pub fn parse(&self, text: &str) -> Result<Polynomial, AlgebraError> {
        let lookup: HashMap<&str, usize> = self
            .names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        crate::parse::parse_polynomial(text, self.dim(), &lookup)
    }
}
