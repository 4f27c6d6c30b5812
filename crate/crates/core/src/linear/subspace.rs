//! Finite-dimensional subspaces in reduced row echelon form.

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::ambient::{AlgebraElement, Ambient, AmbientSpec};
use super::rational::{self, Q};
use crate::error::{Error, Result};

/// JSON form: `{"ambient": {...}, "basis": [[...], ...]}`, one coefficient
/// array per vector, indexed by the ambient's coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceSpec {
    pub ambient: AmbientSpec,
    pub basis: Vec<Vec<Value>>,
}

/// A subspace stored by its canonical reduced echelon basis.
///
/// For Laurent ambients column `0` is the lowest degree of the window, so the
/// pivot of each basis row is its lowest degree.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: Ambient,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        let Ok(amb) = self.ambient.join(&other.ambient) else {
            return false;
        };
        match (self.embed(&amb), other.embed(&amb)) {
            (Ok(x), Ok(y)) => x.rows == y.rows,
            _ => false,
        }
    }
}

impl Eq for Subspace {}

impl Subspace {
    pub fn zero(ambient: &Ambient) -> Self {
        Subspace { ambient: ambient.clone(), rows: Vec::new(), pivots: Vec::new() }
    }

    /// Span of coordinate vectors in `ambient`.
    pub fn from_rows(ambient: &Ambient, rows: Vec<Vec<Q>>) -> Result<Self> {
        let w = ambient.width();
        if let Some(r) = rows.iter().find(|r| r.len() != w) {
            return Err(Error::DimensionMismatch { left: r.len(), right: w });
        }
        let (rows, pivots) = rational::rref(rows);
        Ok(Subspace { ambient: ambient.clone(), rows, pivots })
    }

    /// Span of elements; Laurent windows are enlarged to fit every vector.
    pub fn echelonize(ambient: &Ambient, vectors: &[AlgebraElement]) -> Result<Self> {
        let mut amb = ambient.clone();
        for v in vectors {
            amb = amb.join(v.ambient())?;
        }
        let rows = vectors.iter().map(|v| Ok(v.embed(&amb)?.into_coeffs())).collect::<Result<Vec<_>>>()?;
        Subspace::from_rows(&amb, rows)
    }

    /// Span of elements in the smallest common ambient.
    pub fn span(vectors: &[AlgebraElement]) -> Result<Self> {
        let first = vectors.first().ok_or(Error::Empty)?;
        Subspace::echelonize(first.ambient(), vectors)
    }

    pub fn from_spec(spec: &SubspaceSpec) -> Result<Self> {
        let amb = Ambient::from_spec(&spec.ambient)?;
        let vectors = spec.basis.iter().map(|v| AlgebraElement::from_values(&amb, v)).collect::<Result<Vec<_>>>()?;
        Subspace::echelonize(&amb, &vectors)
    }

    pub fn spec(&self) -> SubspaceSpec {
        SubspaceSpec {
            ambient: self.ambient.spec(),
            basis: self.rows.iter().map(|r| r.iter().map(rational::q_json).collect()).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ambient": serde_json::to_value(self.ambient.spec()).expect("ambient serializes"),
            "basis": rational::matrix_json(&self.rows),
            "dim": self.dim(),
            "display": self.basis().iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The canonical basis as elements.
    pub fn basis(&self) -> Vec<AlgebraElement> {
        self.rows
            .iter()
            .map(|r| AlgebraElement::new(self.ambient.clone(), r.clone()).expect("row width matches"))
            .collect()
    }

    pub fn embed(&self, target: &Ambient) -> Result<Subspace> {
        let rows = self.basis().iter().map(|v| Ok(v.embed(target)?.into_coeffs())).collect::<Result<Vec<_>>>()?;
        Subspace::from_rows(target, rows)
    }

    /// Subtracts the basis rows: the result vanishes on every pivot column and
    /// is zero exactly when `v` lies in the subspace.
    pub fn residue(&self, v: &[Q]) -> Vec<Q> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let c = out[p].clone();
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o -= &c * x;
                }
            }
        }
        out
    }

    /// Residue of an element, computed in an ambient containing both.
    pub fn residue_of(&self, v: &AlgebraElement) -> Result<(Ambient, Vec<Q>)> {
        let amb = self.ambient.join(v.ambient())?;
        let s = self.embed(&amb)?;
        Ok((amb.clone(), s.residue(v.embed(&amb)?.coeffs())))
    }

    pub fn contains(&self, v: &AlgebraElement) -> Result<bool> {
        if v.is_zero() {
            return Ok(true);
        }
        let amb = self.ambient.join(v.ambient())?;
        match v.embed(&amb) {
            Ok(x) => Ok(rational::is_zero_vec(&self.embed(&amb)?.residue(x.coeffs()))),
            Err(e) => Err(e),
        }
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &AlgebraElement) -> Result<Option<Vec<Q>>> {
        let amb = self.ambient.join(v.ambient())?;
        let s = self.embed(&amb)?;
        let x = v.embed(&amb)?;
        if !rational::is_zero_vec(&s.residue(x.coeffs())) {
            return Ok(None);
        }
        Ok(Some(s.pivots.iter().map(|&p| x.coeffs()[p].clone()).collect()))
    }

    /// `Σ c_i basis_i`
    pub fn element(&self, coords: &[Q]) -> AlgebraElement {
        AlgebraElement::new(self.ambient.clone(), rational::combine(coords, &self.rows, self.ambient.width()))
            .expect("width matches")
    }

    fn aligned(&self, other: &Subspace) -> Result<(Ambient, Subspace, Subspace)> {
        let amb = self.ambient.join(&other.ambient)?;
        Ok((amb.clone(), self.embed(&amb)?, other.embed(&amb)?))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        let (amb, x, y) = self.aligned(other)?;
        let mut rows = x.rows;
        rows.extend(y.rows);
        Subspace::from_rows(&amb, rows)
    }

    /// Kernel method: `Σ c_i u_i = Σ d_j v_j`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        let (amb, x, y) = self.aligned(other)?;
        let (p, q) = (x.dim(), y.dim());
        if p == 0 || q == 0 {
            return Ok(Subspace::zero(&amb));
        }
        // columns: u_1..u_p, -v_1..-v_q
        let w = amb.width();
        let system: Vec<Vec<Q>> = (0..w)
            .map(|k| x.rows.iter().map(|r| r[k].clone()).chain(y.rows.iter().map(|r| -r[k].clone())).collect())
            .collect();
        let rows =
            rational::nullspace(&system, p + q).into_iter().map(|c| rational::combine(&c[..p], &x.rows, w)).collect();
        Subspace::from_rows(&amb, rows)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        for v in self.basis() {
            if !other.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_unity(&self) -> Result<bool> {
        self.contains(&self.ambient.one())
    }

    /// `α·A`
    pub fn scaled_by(&self, alpha: &AlgebraElement) -> Result<Subspace> {
        let amb = self.ambient.product(alpha.ambient())?;
        let vectors = self.basis().iter().map(|a| alpha.mul(a)).collect::<Result<Vec<_>>>()?;
        Subspace::echelonize(&amb, &vectors)
    }

    /// Span of all pairwise products of basis vectors.
    pub fn minkowski_span(&self, other: &Subspace) -> Result<Subspace> {
        let amb = self.ambient.product(&other.ambient)?;
        let mut vectors = Vec::with_capacity(self.dim() * other.dim());
        for a in self.basis() {
            for b in other.basis() {
                vectors.push(a.mul(&b)?);
            }
        }
        Subspace::echelonize(&amb, &vectors)
    }

    /// Lowest and highest degree over the whole subspace (Laurent only).
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let ranges: Vec<(i64, i64)> = self.basis().iter().filter_map(AlgebraElement::degree_range).collect();
        let lo = ranges.iter().map(|r| r.0).min()?;
        let hi = ranges.iter().map(|r| r.1).max()?;
        Some((lo, hi))
    }

    /// Shrinks a Laurent ambient to the support of the subspace.
    pub fn trimmed(&self) -> Subspace {
        match self.degree_range() {
            Some((lo, hi)) => self.embed(&Ambient::Laurent { dmin: lo, dmax: hi }).expect("support fits"),
            None => self.clone(),
        }
    }

    /// Degrees attained as the lowest degree of some nonzero element.
    pub fn lowest_degrees(&self) -> Vec<i64> {
        match self.ambient {
            Ambient::Laurent { dmin, .. } => self.pivots.iter().map(|&p| dmin + p as i64).collect(),
            Ambient::Algebra(_) => Vec::new(),
        }
    }

    /// Degrees attained as the highest degree of some nonzero element.
    pub fn highest_degrees(&self) -> Vec<i64> {
        let Ambient::Laurent { dmax, .. } = self.ambient else {
            return Vec::new();
        };
        let reversed: Vec<Vec<Q>> = self.rows.iter().map(|r| r.iter().rev().cloned().collect()).collect();
        let mut out: Vec<i64> = rational::rref(reversed).1.into_iter().map(|p| dmax - p as i64).collect();
        out.sort_unstable();
        out
    }

    /// Elements supported in degrees `lo..=hi` (Laurent only).
    pub fn restrict_degrees(&self, lo: i64, hi: i64) -> Result<Subspace> {
        let Ambient::Laurent { dmin, .. } = self.ambient else {
            return Err(Error::Precondition("degree windows need a Laurent ambient".into()));
        };
        let w = self.ambient.width();
        let outside: Vec<usize> = (0..w).filter(|&k| dmin + (k as i64) < lo || dmin + (k as i64) > hi).collect();
        let system: Vec<Vec<Q>> = outside.iter().map(|&k| self.rows.iter().map(|r| r[k].clone()).collect()).collect();
        let rows = rational::nullspace(&system, self.dim())
            .into_iter()
            .map(|c| rational::combine(&c, &self.rows, w))
            .collect();
        Subspace::from_rows(&self.ambient, rows)
    }
}

/// Uniform random integer in `[-radius, radius]`.
pub fn random_q<R: Rng + ?Sized>(rng: &mut R, radius: i64) -> Q {
    rational::q(rng.gen_range(-radius..=radius))
}

/// Coefficient radius for random generation.
pub const RANDOM_RADIUS: i64 = 9;

/// A random subspace of the given dimension spanned by vectors with
/// integer coefficients in `[-9, 9]`, redrawn until independent. With
/// `sparse`, each coefficient is zero with probability one half.
pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, ambient: &Ambient, dim: usize, sparse: bool) -> Result<Subspace> {
    let w = ambient.width();
    if dim > w {
        return Err(Error::DimensionMismatch { left: dim, right: w });
    }
    loop {
        let rows: Vec<Vec<Q>> = (0..dim)
            .map(|_| {
                (0..w)
                    .map(|_| if sparse && rng.gen_bool(0.5) { Q::zero() } else { random_q(rng, RANDOM_RADIUS) })
                    .collect()
            })
            .collect();
        let s = Subspace::from_rows(ambient, rows)?;
        if s.dim() == dim {
            return Ok(s);
        }
    }
}

/// Random nonzero element with integer coefficients in `[-9, 9]`.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, ambient: &Ambient) -> AlgebraElement {
    loop {
        let coeffs = (0..ambient.width()).map(|_| random_q(rng, RANDOM_RADIUS)).collect();
        let v = AlgebraElement::new(ambient.clone(), coeffs).expect("width matches");
        if !v.is_zero() {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::rational::q;

    fn t(k: i64) -> AlgebraElement {
        AlgebraElement::monomial(q(1), k)
    }

    fn span(v: &[AlgebraElement]) -> Subspace {
        Subspace::span(v).unwrap()
    }

    #[test]
    fn echelon_examples() {
        let s = span(&[t(1), t(1).scale(&q(2))]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis()[0], t(1));
        let s = span(&[t(0).add(&t(1)).unwrap(), t(1)]);
        assert_eq!(s.basis(), vec![t(0), t(1)]);
        let z = Subspace::echelonize(&Ambient::laurent(0, 3).unwrap(), &[]).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn intersection_examples() {
        let u = span(&[t(0), t(1)]);
        let v = span(&[t(1), t(2)]);
        assert_eq!(u.intersect(&v).unwrap(), span(&[t(1)]));
        assert_eq!(u.intersect(&u).unwrap(), u);
        assert!(span(&[t(0)]).intersect(&span(&[t(1)])).unwrap().is_zero());
        assert_eq!(u.sum(&v).unwrap(), span(&[t(0), t(1), t(2)]));
    }

    #[test]
    fn minkowski_examples() {
        let a = span(&[t(0), t(1)]);
        let b = span(&[t(1), t(2)]);
        assert_eq!(a.minkowski_span(&b).unwrap(), span(&[t(1), t(2), t(3)]));
        assert_eq!(span(&[t(1)]).minkowski_span(&span(&[t(5)])).unwrap(), span(&[t(6)]));
        assert_eq!(a.minkowski_span(&span(&[t(0)])).unwrap(), a);
    }

    #[test]
    fn degree_profiles() {
        // ⟨1 + t², t⟩: lowest degrees {0, 1}, highest degrees {1, 2}
        let s = span(&[t(0).add(&t(2)).unwrap(), t(1)]);
        assert_eq!(s.lowest_degrees(), vec![0, 1]);
        assert_eq!(s.highest_degrees(), vec![1, 2]);
        assert_eq!(s.restrict_degrees(0, 1).unwrap(), span(&[t(1)]));
    }

    #[test]
    fn coordinates_and_residues() {
        let s = span(&[t(0), t(1)]);
        let v = t(0).scale(&q(3)).sub(&t(1)).unwrap();
        assert_eq!(s.coordinates(&v).unwrap(), Some(vec![q(3), q(-1)]));
        assert_eq!(s.coordinates(&t(2)).unwrap(), None);
        assert!(s.contains_unity().unwrap());
        assert!(!span(&[t(1)]).contains_unity().unwrap());
    }
}
