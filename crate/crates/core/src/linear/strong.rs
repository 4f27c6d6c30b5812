//! Strong matchings.
//!
//! A linear isomorphism `f : A → B` is a strong matching when every ordered
//! basis of `A` is matched to its image. With `U_a = {x ∈ B : a·x ∈ A}`,
//! every basis is matched exactly when `U_a = 0` for all nonzero `a ∈ A`,
//! that is when no product `a·b` of nonzero `a ∈ A`, `b ∈ B` lands in `A`.
//! This does not depend on `f`.
//!
//! Deciding whether such a product exists is a bilinear problem. The search
//! below is exact whenever one of the two sides can be cut down to
//! dimension at most two, which for Laurent ambients is done by splitting on
//! the lowest and highest degrees of the factors. Anything left over is
//! reported as undetermined.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::ambient::AlgebraElement;
use super::iso::LinearIso;
use super::matched::{matched_basis_failure, OrderedBasis};
use super::rational::{self, poly, Q};
use super::subspace::{random_q, Subspace, RANDOM_RADIUS};
use crate::error::{Error, Result};

const RANDOM_PROBES: usize = 4;
const PENCIL_DETERMINANTS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrongVerdict {
    /// No product of nonzero elements lies in `A`; every isomorphism is a
    /// strong matching.
    Exists,
    /// `a·b ∈ A` with `a ∈ A`, `b ∈ B` nonzero.
    Blocked {
        a: AlgebraElement,
        b: AlgebraElement,
    },
    Undetermined,
}

impl StrongVerdict {
    pub fn to_json(&self) -> Value {
        match self {
            StrongVerdict::Exists => json!({"verdict": "exists"}),
            StrongVerdict::Blocked { a, b } => json!({
                "verdict": "blocked",
                "a": a.to_json(),
                "b": b.to_json(),
                "display": {"a": a.to_string(), "b": b.to_string()},
            }),
            StrongVerdict::Undetermined => json!({"verdict": "undetermined"}),
        }
    }
}

/// Whether the span of all products meets `A` nontrivially.
pub fn product_span_meets(a: &Subspace, b: &Subspace) -> Result<bool> {
    Ok(!a.minkowski_span(b)?.intersect(a)?.is_zero())
}

enum Search {
    Found(AlgebraElement, AlgebraElement),
    Empty,
    Unknown,
}

/// Residues modulo `A` of all products `l_i·r_j`, restricted to the
/// non-pivot coordinates of `A`.
struct Products {
    left: Vec<AlgebraElement>,
    right: Vec<AlgebraElement>,
    tensor: Vec<Vec<Vec<Q>>>,
}

impl Products {
    fn new(a: &Subspace, left: Vec<AlgebraElement>, right: Vec<AlgebraElement>) -> Result<Self> {
        let mut products = Vec::with_capacity(left.len());
        let mut amb = a.ambient().clone();
        for l in &left {
            let row = right.iter().map(|r| l.mul(r)).collect::<Result<Vec<_>>>()?;
            for p in &row {
                amb = amb.join(p.ambient())?;
            }
            products.push(row);
        }
        let a = a.embed(&amb)?;
        let keep: Vec<usize> = (0..amb.width()).filter(|k| !a.pivots().contains(k)).collect();
        let tensor = products
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| {
                        let r = a.residue(p.embed(&amb)?.coeffs());
                        Ok(keep.iter().map(|&k| r[k].clone()).collect())
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Products { left, right, tensor })
    }

    fn transposed(&self) -> Products {
        let tensor =
            (0..self.right.len()).map(|j| (0..self.left.len()).map(|i| self.tensor[i][j].clone()).collect()).collect();
        Products { left: self.right.clone(), right: self.left.clone(), tensor }
    }

    fn rows(&self) -> usize {
        self.tensor.first().and_then(|r| r.first()).map_or(0, Vec::len)
    }

    /// Matrix of `d ↦ residue((Σ c_i l_i)·(Σ d_j r_j))`.
    fn matrix(&self, c: &[Q]) -> Vec<Vec<Q>> {
        let (m, q) = (self.rows(), self.right.len());
        let mut out = vec![rational::zero_vec(q); m];
        for (ci, row) in c.iter().zip(&self.tensor) {
            if ci.is_zero() {
                continue;
            }
            for (j, v) in row.iter().enumerate() {
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        out[k][j] += ci * x;
                    }
                }
            }
        }
        out
    }

    fn solve_left(&self, c: &[Q]) -> Option<(AlgebraElement, AlgebraElement)> {
        let d = rational::nullspace(&self.matrix(c), self.right.len()).into_iter().next()?;
        Some((combine(c, &self.left), combine(&d, &self.right)))
    }

    /// Exact search when the left side has dimension one.
    fn line(&self) -> Search {
        match self.solve_left(&[Q::one()]) {
            Some((a, b)) => Search::Found(a, b),
            None => Search::Empty,
        }
    }

    /// Exact search when the left side has dimension two: the pencil
    /// `l_1 + s·l_2` drops rank only at rational roots of every
    /// `det(R·M(s))`.
    fn pencil<R: Rng + ?Sized>(&self, rng: &mut R) -> Search {
        let (m, q) = (self.rows(), self.right.len());
        if let Some((a, b)) = self.solve_left(&[Q::zero(), Q::one()]) {
            return Search::Found(a, b);
        }
        if m < q {
            // rank is deficient everywhere
            return match self.solve_left(&[Q::one(), Q::zero()]) {
                Some((a, b)) => Search::Found(a, b),
                None => Search::Unknown,
            };
        }
        let (m0, m1) = (self.matrix(&[Q::one(), Q::zero()]), self.matrix(&[Q::zero(), Q::one()]));
        let mut g: Option<poly::Poly> = None;
        for _ in 0..PENCIL_DETERMINANTS {
            let r: Vec<Vec<Q>> = (0..q).map(|_| (0..m).map(|_| random_q(rng, RANDOM_RADIUS)).collect()).collect();
            let (r0, r1) = (rational::mat_mul(&r, &m0), rational::mat_mul(&r, &m1));
            let points: Vec<(Q, Q)> = (0..=q as i64)
                .map(|s| {
                    let s = rational::q(s);
                    let ms: Vec<Vec<Q>> =
                        r0.iter().zip(&r1).map(|(x, y)| rational::add(x, &rational::scale(y, &s))).collect();
                    let det = rational::determinant(&ms);
                    (s, det)
                })
                .collect();
            let d = poly::interpolate(&points);
            if d.is_empty() {
                continue;
            }
            g = Some(match g {
                Some(g) => poly::gcd(&g, &d),
                None => poly::monic(&d),
            });
            if g.as_ref().is_some_and(|g| g.len() <= 1) {
                break;
            }
        }
        let Some(g) = g else {
            return Search::Unknown;
        };
        let Some(roots) = poly::roots(&g) else {
            return Search::Unknown;
        };
        for s in roots {
            if let Some((a, b)) = self.solve_left(&[Q::one(), s]) {
                return Search::Found(a, b);
            }
        }
        Search::Empty
    }

    fn probe<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<(AlgebraElement, AlgebraElement)> {
        let p = self.left.len();
        for _ in 0..RANDOM_PROBES {
            let c: Vec<Q> = (0..p).map(|_| random_q(rng, RANDOM_RADIUS)).collect();
            if !rational::is_zero_vec(&c) {
                if let Some(hit) = self.solve_left(&c) {
                    return Some(hit);
                }
            }
        }
        (0..p).find_map(|i| self.solve_left(&rational::unit_vec(p, i)))
    }

    fn search<R: Rng + ?Sized>(&self, rng: &mut R) -> Search {
        let flipped = self.transposed();
        if let Some((a, b)) = self.probe(rng) {
            return Search::Found(a, b);
        }
        if let Some((b, a)) = flipped.probe(rng) {
            return Search::Found(a, b);
        }
        let (p, q) = (self.left.len(), self.right.len());
        let found = |s: Search, swap: bool| match s {
            Search::Found(x, y) if swap => Search::Found(y, x),
            other => other,
        };
        match (p, q) {
            (1, _) => self.line(),
            (_, 1) => found(flipped.line(), true),
            (2, _) => self.pencil(rng),
            (_, 2) => found(flipped.pencil(rng), true),
            _ => Search::Unknown,
        }
    }
}

fn combine(c: &[Q], basis: &[AlgebraElement]) -> AlgebraElement {
    let mut out = basis[0].scale(&c[0]);
    for (ci, v) in c.iter().zip(basis).skip(1) {
        out = out.add(&v.scale(ci)).expect("basis shares an ambient");
    }
    out
}

fn search_sides<R: Rng + ?Sized>(a: &Subspace, left: &Subspace, right: &Subspace, rng: &mut R) -> Result<Search> {
    if left.is_zero() || right.is_zero() || !product_span_meets_in(a, left, right)? {
        return Ok(Search::Empty);
    }
    Ok(Products::new(a, left.basis(), right.basis())?.search(rng))
}

fn product_span_meets_in(a: &Subspace, left: &Subspace, right: &Subspace) -> Result<bool> {
    Ok(!left.minkowski_span(right)?.intersect(a)?.is_zero())
}

/// Decides whether a strong matching from `A` to `B` exists.
pub fn strong_matching(a: &Subspace, b: &Subspace) -> Result<StrongVerdict> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    if a.is_zero() {
        return Err(Error::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    match search_sides(a, a, b, &mut rng)? {
        Search::Found(x, y) => return Ok(StrongVerdict::Blocked { a: x, b: y }),
        Search::Empty => return Ok(StrongVerdict::Exists),
        Search::Unknown => {}
    }
    if !(a.ambient().is_laurent() && b.ambient().is_laurent()) {
        return Ok(StrongVerdict::Undetermined);
    }
    // a·x keeps lowest and highest degrees additive, and both must be
    // attained inside A
    let (la, ha) = (a.lowest_degrees(), a.highest_degrees());
    let (lb, hb) = (b.lowest_degrees(), b.highest_degrees());
    let low_a: BTreeSet<i64> = la.iter().copied().collect();
    let high_a: BTreeSet<i64> = ha.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut undecided = false;
    for &da in &la {
        for &ea in ha.iter().filter(|&&e| e >= da) {
            for &db in lb.iter().filter(|&&d| low_a.contains(&(da + d))) {
                for &eb in hb.iter().filter(|&&e| e >= db && high_a.contains(&(ea + e))) {
                    if !seen.insert((da, ea, db, eb)) {
                        continue;
                    }
                    let left = a.restrict_degrees(da, ea)?;
                    let right = b.restrict_degrees(db, eb)?;
                    match search_sides(a, &left, &right, &mut rng)? {
                        Search::Found(x, y) => return Ok(StrongVerdict::Blocked { a: x, b: y }),
                        Search::Empty => {}
                        Search::Unknown => undecided = true,
                    }
                }
            }
        }
    }
    Ok(if undecided { StrongVerdict::Undetermined } else { StrongVerdict::Exists })
}

/// `true` when every isomorphism `A → B` is a strong matching.
pub fn strong_matching_exists(a: &Subspace, b: &Subspace) -> Result<bool> {
    match strong_matching(a, b)? {
        StrongVerdict::Exists => Ok(true),
        StrongVerdict::Blocked { .. } => Ok(false),
        StrongVerdict::Undetermined => Err(Error::Undetermined),
    }
}

/// A random ordered basis `P·e` of a subspace, `P` invertible with entries
/// in `[-9, 9]`.
pub fn random_ordered_basis<R: Rng + ?Sized>(rng: &mut R, s: &Subspace) -> Result<OrderedBasis> {
    let n = s.dim();
    loop {
        let cols: Vec<Vec<Q>> = (0..n).map(|_| (0..n).map(|_| random_q(rng, RANDOM_RADIUS)).collect()).collect();
        if rational::rank(&cols) == n {
            return OrderedBasis::from_coordinates(s, &cols);
        }
    }
}

/// An ordered basis starting with `a` whose remaining vectors span a
/// random hyperplane avoiding both `a` and `f⁻¹(b)`.
fn seeded_basis<R: Rng + ?Sized>(
    rng: &mut R,
    f: &LinearIso,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<Option<OrderedBasis>> {
    let dom = f.domain();
    let n = dom.dim();
    let (Some(ca), Some(cb)) = (dom.coordinates(a)?, dom.coordinates(&f.inverse().apply(b)?)?) else {
        return Ok(None);
    };
    let dot = |u: &[Q], v: &[Q]| u.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y);
    let lambda = loop {
        let l: Vec<Q> = (0..n).map(|_| random_q(rng, RANDOM_RADIUS)).collect();
        if !dot(&l, &ca).is_zero() && !dot(&l, &cb).is_zero() {
            break l;
        }
    };
    let hyperplane = rational::nullspace(&[lambda], n);
    let mut vectors = vec![a.clone()];
    if n > 1 {
        let k = n - 1;
        let mix = loop {
            let m: Vec<Vec<Q>> = (0..k).map(|_| (0..k).map(|_| random_q(rng, RANDOM_RADIUS)).collect()).collect();
            if rational::rank(&m) == k {
                break m;
            }
        };
        for row in &mix {
            vectors.push(dom.element(&rational::combine(row, &hyperplane, n)));
        }
    }
    Ok(Some(OrderedBasis::new(vectors)?))
}

/// Searches random ordered bases of `A` for one that `f` does not match.
///
/// With a witness `a·b ∈ A`, every other trial starts the basis with `a`.
/// Returns the basis and the number of trials used.
pub fn find_violating_basis<R: Rng + ?Sized>(
    f: &LinearIso,
    witness: Option<(&AlgebraElement, &AlgebraElement)>,
    trials: usize,
    rng: &mut R,
) -> Result<Option<(OrderedBasis, usize)>> {
    for trial in 0..trials {
        let basis = match witness {
            Some((a, b)) if trial % 2 == 0 => match seeded_basis(rng, f, a, b)? {
                Some(basis) => basis,
                None => random_ordered_basis(rng, f.domain())?,
            },
            _ => random_ordered_basis(rng, f.domain())?,
        };
        let images = OrderedBasis::new(basis.vectors().iter().map(|v| f.apply(v)).collect::<Result<_>>()?)?;
        if matched_basis_failure(&basis, &images)?.is_some() {
            return Ok(Some((basis, trial + 1)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::linear::ambient::StructureAlgebra;
    use crate::linear::rational::q;

    fn t(k: i64) -> AlgebraElement {
        AlgebraElement::monomial(q(1), k)
    }

    fn span(v: &[AlgebraElement]) -> Subspace {
        Subspace::span(v).unwrap()
    }

    fn lp(terms: &[(i64, i64)]) -> AlgebraElement {
        AlgebraElement::laurent(&terms.iter().map(|&(k, c)| (k, q(c))).collect::<Vec<_>>())
    }

    #[test]
    fn examples() {
        assert!(strong_matching_exists(&span(&[t(1), t(2)]), &span(&[t(3), t(4)])).unwrap());
        assert!(!strong_matching_exists(&span(&[t(0), t(1)]), &span(&[t(1), t(2)])).unwrap());
        assert!(!strong_matching_exists(&span(&[t(4)]), &span(&[t(0)])).unwrap());
        assert!(matches!(
            strong_matching_exists(&span(&[t(0)]), &span(&[t(0), t(1)])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn blocked_witness_is_a_product_in_a() {
        let a = span(&[t(0), t(1)]);
        let b = span(&[t(1), t(2)]);
        let StrongVerdict::Blocked { a: x, b: y } = strong_matching(&a, &b).unwrap() else { panic!() };
        assert!(a.contains(&x).unwrap() && b.contains(&y).unwrap());
        assert!(!x.is_zero() && !y.is_zero());
        assert!(a.contains(&x.mul(&y).unwrap()).unwrap());
    }

    #[test]
    fn pencil_finds_rational_parameter() {
        // (1 + 2t)·t ∉ A alone, but the pencil over A hits it exactly
        let a = span(&[lp(&[(0, 1), (1, 2)]), lp(&[(1, 1), (2, 2)])]);
        let b = span(&[t(1), t(5)]);
        let StrongVerdict::Blocked { a: x, b: y } = strong_matching(&a, &b).unwrap() else { panic!() };
        assert!(a.contains(&x.mul(&y).unwrap()).unwrap());
    }

    #[test]
    fn algebra_ambient() {
        let alg = Arc::new(StructureAlgebra::fourth_root_of_two());
        let x = |i| AlgebraElement::in_algebra(&alg, rational::unit_vec(4, i)).unwrap();
        let a = span(&[x(0), x(2)]);
        let b = span(&[x(1), x(2)]);
        assert!(!strong_matching_exists(&a, &b).unwrap());
    }

    #[test]
    fn violating_basis_from_witness() {
        let a = span(&[t(0), t(1)]);
        let b = span(&[t(1), t(2)]);
        let StrongVerdict::Blocked { a: x, b: y } = strong_matching(&a, &b).unwrap() else { panic!() };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = LinearIso::random(&mut rng, &a, &b).unwrap();
        let (basis, trials) = find_violating_basis(&f, Some((&x, &y)), 10, &mut rng).unwrap().unwrap();
        assert_eq!(trials, 1);
        assert_eq!(basis.vectors()[0], x);
    }
}
