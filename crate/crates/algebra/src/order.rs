use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::monomial::Monomial;

/// Order used inside one block of a block order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockOrder {
    Lex,
    Grevlex,
}

/// One block of a block order. `vars` lists the block's variables from most
/// to least expensive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderBlock {
    pub vars: Vec<usize>,
    pub inner: BlockOrder,
}

impl OrderBlock {
    pub fn grevlex(vars: impl IntoIterator<Item = usize>) -> Self {
        OrderBlock {
            vars: vars.into_iter().collect(),
            inner: BlockOrder::Grevlex,
        }
    }

    pub fn lex(vars: impl IntoIterator<Item = usize>) -> Self {
        OrderBlock {
            vars: vars.into_iter().collect(),
            inner: BlockOrder::Lex,
        }
    }

    fn compare(&self, a: &[u16], b: &[u16]) -> Ordering {
        match self.inner {
            BlockOrder::Lex => lex_by(&self.vars, a, b),
            BlockOrder::Grevlex => {
                let da: u32 = self.vars.iter().map(|&v| u32::from(a[v])).sum();
                let db: u32 = self.vars.iter().map(|&v| u32::from(b[v])).sum();
                da.cmp(&db).then_with(|| {
                    for &v in self.vars.iter().rev() {
                        if a[v] != b[v] {
                            // a smaller exponent on the cheapest differing variable wins
                            return b[v].cmp(&a[v]);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

/// A monomial order. Variable 0 is the most expensive variable for `Lex`
/// and `Grevlex`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermOrder {
    Lex,
    /// Lex with the variables ranked by the given permutation, most
    /// expensive first.
    LexPermuted(Vec<usize>),
    Grevlex,
    /// Block (product) order: blocks are compared in sequence, the first
    /// block dominating. Blocks must partition the ring's variables.
    Block(Vec<OrderBlock>),
}

fn lex_by(vars: &[usize], a: &[u16], b: &[u16]) -> Ordering {
    for &v in vars {
        match a[v].cmp(&b[v]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

impl TermOrder {
    /// Elimination order with `top` as the dominant block and the remaining
    /// variables (in ring order) as a second block, both graded reverse lex.
    pub fn elimination(dim: usize, top: &[usize]) -> TermOrder {
        let rest: Vec<usize> = (0..dim).filter(|v| !top.contains(v)).collect();
        let mut blocks = vec![OrderBlock::grevlex(top.iter().copied())];
        if !rest.is_empty() {
            blocks.push(OrderBlock::grevlex(rest));
        }
        TermOrder::Block(blocks)
    }

    /// Checks that the order is well formed for a ring of dimension `dim`.
    pub fn validate(&self, dim: usize) -> Result<(), AlgebraError> {
        let check_perm = |vars: &mut dyn Iterator<Item = usize>| {
            let mut seen = vec![false; dim];
            let mut count = 0;
            for v in vars {
                if v >= dim || std::mem::replace(&mut seen[v], true) {
                    return Err(AlgebraError::InvalidOrder(format!(
                        "variable {v} repeated or out of range"
                    )));
                }
                count += 1;
            }
            if count != dim {
                return Err(AlgebraError::InvalidOrder(format!(
                    "order covers {count} of {dim} variables"
                )));
            }
            Ok(())
        };
        match self {
            TermOrder::Lex | TermOrder::Grevlex => Ok(()),
            TermOrder::LexPermuted(p) => check_perm(&mut p.iter().copied()),
            TermOrder::Block(blocks) => {
                if blocks.iter().any(|b| b.vars.is_empty()) {
                    return Err(AlgebraError::InvalidOrder("empty block".into()));
                }
                check_perm(&mut blocks.iter().flat_map(|b| b.vars.iter().copied()))
            }
        }
    }

    /// Compares two monomials of the same dimension. Panics on a dimension
    /// mismatch; see [`TermOrder::try_compare`] for the checked version.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        assert_eq!(a.dim(), b.dim(), "monomial dimension mismatch");
        let (x, y) = (a.exponents(), b.exponents());
        match self {
            TermOrder::Lex => x.cmp(y),
            TermOrder::LexPermuted(p) => lex_by(p, x, y),
            TermOrder::Grevlex => a.degree().cmp(&b.degree()).then_with(|| {
                for v in (0..x.len()).rev() {
                    if x[v] != y[v] {
                        return y[v].cmp(&x[v]);
                    }
                }
                Ordering::Equal
            }),
            TermOrder::Block(blocks) => {
                for block in blocks {
                    match block.compare(x, y) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            }
        }
    }

    pub fn try_compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering, AlgebraError> {
        if a.dim() != b.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        Ok(self.cmp(a, b))
    }

    /// Restricts a block order to the variables kept by `keep`, where
    /// `keep[old] = Some(new)` re-indexes surviving variables. Blocks that
    /// become empty are dropped. Lex and grevlex restrict to themselves.
    pub fn restrict(&self, keep: &[Option<usize>]) -> TermOrder {
        match self {
            TermOrder::Lex => TermOrder::Lex,
            TermOrder::Grevlex => TermOrder::Grevlex,
            TermOrder::LexPermuted(p) => {
                TermOrder::LexPermuted(p.iter().filter_map(|&v| keep[v]).collect())
            }
            TermOrder::Block(blocks) => TermOrder::Block(
                blocks
                    .iter()
                    .map(|b| OrderBlock {
                        vars: b.vars.iter().filter_map(|&v| keep[v]).collect(),
                        inner: b.inner,
                    })
                    .filter(|b| !b.vars.is_empty())
                    .collect(),
            ),
        }
    }
}
