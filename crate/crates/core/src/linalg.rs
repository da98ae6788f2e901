//! Small dense matrices over the rationals.

use num_traits::{One, Zero};
use semident_algebra::BigRational;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalMatrix {
    n: usize,
    #[serde(with = "entries")]
    data: Vec<BigRational>,
}

mod entries {
    use super::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        use serde::de::Error;
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| {
                t.parse()
                    .map_err(|_| D::Error::custom(format!("bad rational {t:?}")))
            })
            .collect()
    }
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        RationalMatrix {
            n,
            data: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> BigRational) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_fn(self.n, |i, j| {
            (0..self.n).fold(BigRational::zero(), |acc, k| {
                acc + self.get(i, k) * other.get(k, j)
            })
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Determinant by fraction-exact Gaussian elimination.
    pub fn determinant(&self) -> BigRational {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return BigRational::zero();
            };
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                let factor = &a[r * n + col] / &p;
                if factor.is_zero() {
                    continue;
                }
                for k in col..n {
                    let v = &a[col * n + k] * &factor;
                    a[r * n + k] -= v;
                }
            }
        }
        det
    }

    /// Leading principal minors of orders 1..=n.
    pub fn leading_principal_minors(&self) -> Vec<BigRational> {
        (1..=self.n)
            .map(|k| Self::from_fn(k, |i, j| self.get(i, j).clone()).determinant())
            .collect()
    }

    /// Sylvester's criterion, exact.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric()
            && self
                .leading_principal_minors()
                .iter()
                .all(|d| d > &BigRational::zero())
    }
}
