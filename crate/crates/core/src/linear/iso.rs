//! Linear isomorphisms between subspaces, stored as matrices with respect to
//! the canonical echelon bases.

use rand::Rng;
use serde_json::{json, Value};

use super::ambient::AlgebraElement;
use super::rational::{self, Q};
use super::subspace::{random_q, Subspace, RANDOM_RADIUS};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearIso {
    domain: Subspace,
    codomain: Subspace,
    /// Column `j` holds the coordinates of the image of the `j`-th domain
    /// basis vector.
    matrix: Vec<Vec<Q>>,
}

impl LinearIso {
    pub fn new(domain: Subspace, codomain: Subspace, matrix: Vec<Vec<Q>>) -> Result<Self> {
        let n = domain.dim();
        if codomain.dim() != n {
            return Err(Error::DimensionMismatch { left: n, right: codomain.dim() });
        }
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { left: matrix.len(), right: n });
        }
        if rational::rank(&matrix) != n {
            return Err(Error::NotInvertible);
        }
        Ok(LinearIso { domain, codomain, matrix })
    }

    pub fn identity(domain: &Subspace, codomain: &Subspace) -> Result<Self> {
        LinearIso::new(domain.clone(), codomain.clone(), rational::identity(domain.dim()))
    }

    /// Multiplication by `alpha`, which must carry the domain onto the codomain.
    pub fn multiplication(alpha: &AlgebraElement, domain: &Subspace, codomain: &Subspace) -> Result<Self> {
        let cols = domain
            .basis()
            .iter()
            .map(|a| {
                codomain
                    .coordinates(&alpha.mul(a)?)?
                    .ok_or_else(|| Error::Precondition(format!("{alpha} does not map the domain into the codomain")))
            })
            .collect::<Result<Vec<_>>>()?;
        LinearIso::new(domain.clone(), codomain.clone(), rational::transpose(&cols, domain.dim()))
    }

    /// Random invertible matrix with integer entries in `[-9, 9]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, domain: &Subspace, codomain: &Subspace) -> Result<Self> {
        let n = domain.dim();
        loop {
            let m: Vec<Vec<Q>> = (0..n).map(|_| (0..n).map(|_| random_q(rng, RANDOM_RADIUS)).collect()).collect();
            if rational::rank(&m) == n {
                return LinearIso::new(domain.clone(), codomain.clone(), m);
            }
        }
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn codomain(&self) -> &Subspace {
        &self.codomain
    }

    pub fn matrix(&self) -> &[Vec<Q>] {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, v: &AlgebraElement) -> Result<AlgebraElement> {
        let c = self.domain.coordinates(v)?.ok_or_else(|| Error::Precondition(format!("{v} is not in the domain")))?;
        Ok(self.codomain.element(&rational::mat_vec(&self.matrix, &c)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearIso) -> Result<LinearIso> {
        if other.codomain != self.domain {
            return Err(Error::AmbientMismatch);
        }
        LinearIso::new(other.domain.clone(), self.codomain.clone(), rational::mat_mul(&self.matrix, &other.matrix))
    }

    pub fn inverse(&self) -> LinearIso {
        LinearIso {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            matrix: rational::inverse(&self.matrix).expect("isomorphisms are invertible"),
        }
    }

    pub fn scale(&self, c: &Q) -> Result<LinearIso> {
        let m = self.matrix.iter().map(|r| rational::scale(r, c)).collect();
        LinearIso::new(self.domain.clone(), self.codomain.clone(), m)
    }

    /// `c` with `self = c·other`.
    pub fn ratio_to(&self, other: &LinearIso) -> Option<Q> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return None;
        }
        let flat = |m: &[Vec<Q>]| m.iter().flatten().cloned().collect::<Vec<_>>();
        rational::proportionality(&flat(&self.matrix), &flat(&other.matrix))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "domain_basis": self.domain.basis().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "codomain_basis": self.codomain.basis().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "matrix": rational::matrix_json(&self.matrix),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::rational::q;

    fn t(k: i64) -> AlgebraElement {
        AlgebraElement::monomial(q(1), k)
    }

    #[test]
    fn multiplication_map() {
        let a = Subspace::span(&[t(0), t(1)]).unwrap();
        let b = Subspace::span(&[t(2), t(3)]).unwrap();
        let w = LinearIso::multiplication(&t(2), &a, &b).unwrap();
        assert_eq!(w.apply(&t(1)).unwrap(), t(3));
        assert_eq!(w.inverse().apply(&t(2)).unwrap(), t(0));
        assert!(LinearIso::multiplication(&t(1), &a, &b).is_err());
        let id = w.inverse().compose(&w).unwrap();
        assert_eq!(id.matrix(), rational::identity(2).as_slice());
        assert_eq!(w.scale(&q(3)).unwrap().ratio_to(&w), Some(q(3)));
    }
}
