//! Matched bases between equal-dimensional subspaces.
//!
//! An ordered basis `(a_1, …, a_n)` of `A` is matched to `(b_1, …, b_n)` of
//! `B` when for every `i` the space `U_i = {x ∈ B : a_i·x ∈ A}` lies in the
//! span of the `b_j` with `j ≠ i`. `U_i` is computed as the solution space
//! of a linear condition, so `a_i` is never inverted.

use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use super::ambient::{AlgebraElement, Ambient};
use super::rational::{self, Q};
use super::subspace::{random_q, Subspace, RANDOM_RADIUS};
use crate::error::{Error, Result};

/// Largest dimension for the subset search behind Hall violators.
pub const HALL_SEARCH_LIMIT: usize = 12;
/// Largest dimension for the deterministic basis search.
pub const DETERMINISTIC_SEARCH_LIMIT: usize = 6;
pub const DEFAULT_RETRIES: usize = 32;

/// Linearly independent vectors together with their span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedBasis {
    vectors: Vec<AlgebraElement>,
    span: Subspace,
}

impl OrderedBasis {
    pub fn new(vectors: Vec<AlgebraElement>) -> Result<Self> {
        let span = Subspace::span(&vectors)?;
        if span.dim() != vectors.len() {
            return Err(Error::Dependent);
        }
        Ok(OrderedBasis { vectors, span })
    }

    /// The canonical echelon basis of a subspace.
    pub fn canonical(s: &Subspace) -> Result<Self> {
        if s.is_zero() {
            return Err(Error::Empty);
        }
        Ok(OrderedBasis { vectors: s.basis(), span: s.clone() })
    }

    /// `Σ_j m[j][i] · basis_j` for each column `i` of a coordinate matrix.
    pub fn from_coordinates(s: &Subspace, columns: &[Vec<Q>]) -> Result<Self> {
        OrderedBasis::new(columns.iter().map(|c| s.element(c)).collect())
    }

    pub fn vectors(&self) -> &[AlgebraElement] {
        &self.vectors
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Coordinates of `v` in this basis.
    pub fn coordinates(&self, v: &AlgebraElement) -> Result<Option<Vec<Q>>> {
        let Some(canon) = self.span.coordinates(v)? else {
            return Ok(None);
        };
        // columns: canonical coordinates of each basis vector
        let cols: Vec<Vec<Q>> = self
            .vectors
            .iter()
            .map(|b| self.span.coordinates(b).map(|c| c.expect("basis lies in its span")))
            .collect::<Result<_>>()?;
        let m = rational::transpose(&cols, self.len());
        Ok(Some(rational::mat_vec(&rational::inverse(&m)?, &canon)))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vectors": self.vectors.iter().map(AlgebraElement::to_json).collect::<Vec<_>>(),
            "display": self.vectors.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }
}

/// Matrix whose null space is `{c : a·Σ c_j f_j ∈ A}`; column `j` is the
/// residue of `a·f_j` modulo `A`.
pub(crate) fn condition_matrix(
    a_space: &Subspace,
    a: &AlgebraElement,
    frame: &[AlgebraElement],
) -> Result<Vec<Vec<Q>>> {
    let products = frame.iter().map(|f| a.mul(f)).collect::<Result<Vec<_>>>()?;
    let mut amb = a_space.ambient().clone();
    for p in &products {
        amb = amb.join(p.ambient())?;
    }
    let a_big = a_space.embed(&amb)?;
    let cols: Vec<Vec<Q>> =
        products.iter().map(|p| Ok(a_big.residue(p.embed(&amb)?.coeffs()))).collect::<Result<_>>()?;
    // keep only the rows that can be nonzero
    let rows: Vec<Vec<Q>> = (0..amb.width())
        .filter(|k| !a_big.pivots().contains(k))
        .map(|k| cols.iter().map(|c| c[k].clone()).collect())
        .filter(|r: &Vec<Q>| !rational::is_zero_vec(r))
        .collect();
    Ok(rows)
}

/// `{x ∈ span(frame) : a·x ∈ A}` in frame coordinates.
pub fn solution_space(a_space: &Subspace, a: &AlgebraElement, frame: &[AlgebraElement]) -> Result<Vec<Vec<Q>>> {
    Ok(rational::nullspace(&condition_matrix(a_space, a, frame)?, frame.len()))
}

fn check_dims(a: &OrderedBasis, b_dim: usize) -> Result<()> {
    if a.len() != b_dim {
        return Err(Error::DimensionMismatch { left: a.len(), right: b_dim });
    }
    Ok(())
}

/// First index `i` at which the bases fail to be matched.
pub fn matched_basis_failure(a: &OrderedBasis, b: &OrderedBasis) -> Result<Option<usize>> {
    check_dims(a, b.len())?;
    for (i, ai) in a.vectors.iter().enumerate() {
        let u = solution_space(&a.span, ai, &b.vectors)?;
        if u.iter().any(|x| !x[i].is_zero()) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

pub fn is_matched_basis(a: &OrderedBasis, b: &OrderedBasis) -> Result<bool> {
    Ok(matched_basis_failure(a, b)?.is_none())
}

/// A set `I` of positions in the basis of `A` with `dim V_I > n - |I|`,
/// where `V_I = {x ∈ B : a_i·x ∈ A for all i ∈ I}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearHallViolator {
    /// Zero-based positions.
    pub indices: Vec<usize>,
    pub v_dim: usize,
    /// Basis of `V_I`.
    pub v_basis: Vec<AlgebraElement>,
}

impl LinearHallViolator {
    pub fn to_json(&self) -> Value {
        json!({
            "indices": self.indices,
            "dim_v": self.v_dim,
            "v_basis": self.v_basis.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Smallest `I`, then lexicographically first, violating Hall's condition.
pub fn linear_hall_violator(a: &OrderedBasis, b: &Subspace) -> Result<Option<LinearHallViolator>> {
    let n = a.len();
    check_dims(a, b.dim())?;
    if n > HALL_SEARCH_LIMIT {
        return Err(Error::TooLarge { size: n, limit: HALL_SEARCH_LIMIT });
    }
    let frame = b.basis();
    let conditions = a.vectors.iter().map(|ai| condition_matrix(&a.span, ai, &frame)).collect::<Result<Vec<_>>>()?;
    for k in 1..=n {
        for subset in combinations(n, k) {
            let stacked: Vec<Vec<Q>> = subset.iter().flat_map(|&i| conditions[i].iter().cloned()).collect();
            let v = rational::nullspace(&stacked, n);
            if v.len() > n - k {
                return Ok(Some(LinearHallViolator {
                    indices: subset,
                    v_dim: v.len(),
                    v_basis: v.iter().map(|c| b.element(c)).collect(),
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisMatch {
    Matched(OrderedBasis),
    Blocked(LinearHallViolator),
}

/// Annihilator of `U_i` for each `i`, as functionals on canonical `B` coordinates.
fn annihilators(a: &OrderedBasis, b: &Subspace) -> Result<Vec<Vec<Vec<Q>>>> {
    let frame = b.basis();
    let n = b.dim();
    a.vectors
        .iter()
        .map(|ai| {
            let u = solution_space(&a.span, ai, &frame)?;
            Ok(if u.is_empty() { rational::identity(n) } else { rational::nullspace(&u, n) })
        })
        .collect()
}

/// Dual basis of the rows of `phi`, as elements of `B`.
fn dual_basis(b: &Subspace, phi: &[Vec<Q>]) -> Result<OrderedBasis> {
    let inv = rational::inverse(phi)?;
    let columns = rational::transpose(&inv, phi.len());
    OrderedBasis::from_coordinates(b, &columns)
}

/// Picks one basis vector from each annihilator so that the choices are
/// independent. An independent choice exists among basis vectors whenever
/// one exists at all.
fn deterministic_choice(ann: &[Vec<Vec<Q>>]) -> Option<Vec<Vec<Q>>> {
    fn go(i: usize, ann: &[Vec<Vec<Q>>], chosen: &mut Vec<Vec<Q>>) -> bool {
        if i == ann.len() {
            return true;
        }
        for v in &ann[i] {
            chosen.push(v.clone());
            if rational::rank(chosen) == chosen.len() && go(i + 1, ann, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    go(0, ann, &mut chosen).then_some(chosen)
}

/// Finds a basis of `B` matched to `a`.
///
/// Each `b_j` comes from a dual basis: pick a functional `φ_i` vanishing on
/// `U_i` for every `i`; if the `φ_i` are independent their dual basis is
/// matched. Random functionals are tried first, then an exhaustive choice
/// among annihilator basis vectors for small dimensions. When no matched
/// basis exists a Hall violator is returned.
pub fn match_basis<R: Rng + ?Sized>(a: &OrderedBasis, b: &Subspace, retries: usize, rng: &mut R) -> Result<BasisMatch> {
    let n = a.len();
    check_dims(a, b.dim())?;
    if b.contains_unity()? {
        return Err(Error::UnityInB);
    }
    let ann = annihilators(a, b)?;
    let all_nonempty = ann.iter().all(|x| !x.is_empty());
    if all_nonempty {
        for _ in 0..retries {
            let phi: Vec<Vec<Q>> = ann
                .iter()
                .map(|basis| {
                    let coeffs: Vec<Q> = basis.iter().map(|_| random_q(rng, RANDOM_RADIUS)).collect();
                    rational::combine(&coeffs, basis, n)
                })
                .collect();
            if rational::rank(&phi) == n {
                return finish(a, dual_basis(b, &phi)?);
            }
        }
        if n <= DETERMINISTIC_SEARCH_LIMIT {
            if let Some(phi) = deterministic_choice(&ann) {
                return finish(a, dual_basis(b, &phi)?);
            }
        }
    }
    match linear_hall_violator(a, b)? {
        Some(v) => Ok(BasisMatch::Blocked(v)),
        None => Err(Error::Undetermined),
    }
}

fn finish(a: &OrderedBasis, basis: OrderedBasis) -> Result<BasisMatch> {
    if !is_matched_basis(a, &basis)? {
        return Err(Error::InvariantViolation("dual basis is not matched".into()));
    }
    Ok(BasisMatch::Matched(basis))
}

/// A nonzero `l` with `l·M ⊆ A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslateWitness {
    pub subalgebra: Subspace,
    pub translate: AlgebraElement,
    /// Every `l` with `l·M ⊆ A`.
    pub translates: Subspace,
}

impl TranslateWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "l": self.translate.to_json(),
            "l_display": self.translate.to_string(),
            "translates": self.translates.to_json(),
        })
    }
}

/// Checks that `m` contains unity and is closed under multiplication.
pub fn check_subalgebra(m: &Subspace) -> Result<()> {
    if !m.contains_unity()? {
        return Err(Error::NotSubalgebra("missing unity".into()));
    }
    let basis = m.basis();
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i..] {
            let p = x.mul(y)?;
            // products of Laurent elements may leave the window; they are then not in m
            if !m.contains(&p).unwrap_or(false) {
                return Err(Error::NotSubalgebra(format!("({x})·({y}) = {p} leaves the subspace")));
            }
        }
    }
    Ok(())
}

/// Whether `A` contains a translate `l·M` of the unital subalgebra `M`.
///
/// The trivial subalgebra spanned by unity is skipped. In `Q(t)` every
/// finite-dimensional unital subalgebra is trivial, so Laurent ambients
/// always return `None`.
pub fn contains_translate(a: &Subspace, m: &Subspace) -> Result<Option<TranslateWitness>> {
    check_subalgebra(m)?;
    if m.dim() <= 1 {
        return Ok(None);
    }
    let amb = a.ambient().join(m.ambient())?;
    let Ambient::Algebra(alg) = &amb else {
        return Ok(None);
    };
    let d = alg.dim();
    let frame: Vec<AlgebraElement> =
        (0..d).map(|k| AlgebraElement::in_algebra(alg, rational::unit_vec(d, k)).expect("unit vector")).collect();
    let a = a.embed(&amb)?;
    let mut system = Vec::new();
    for mj in m.basis() {
        system.extend(condition_matrix(&a, &mj, &frame)?);
    }
    let translates = Subspace::from_rows(&amb, rational::nullspace(&system, d))?;
    Ok(translates.basis().into_iter().next().map(|translate| TranslateWitness {
        subalgebra: m.clone(),
        translate,
        translates: translates.clone(),
    }))
}

/// `A = l·M` and `B = C ⊕ ⟨outside⟩`, where `C` is a complement of unity in
/// `M`; no basis of `B` is matched to a basis of `A`.
pub fn translate_obstruction(
    m: &Subspace,
    l: &AlgebraElement,
    outside: &AlgebraElement,
) -> Result<(Subspace, Subspace)> {
    check_subalgebra(m)?;
    if m.dim() < 2 {
        return Err(Error::Precondition("M must be nontrivial".into()));
    }
    if l.is_zero() {
        return Err(Error::Precondition("l must be nonzero".into()));
    }
    if m.contains(outside)? {
        return Err(Error::Precondition("outside must not lie in M".into()));
    }
    let a = m.scaled_by(l)?;
    let one = m.ambient().one();
    let k = one.coeffs().iter().position(|c| !c.is_zero()).expect("unity is nonzero");
    // complement of unity: elements of M with coordinate k equal to zero
    let c: Vec<AlgebraElement> = m
        .basis()
        .into_iter()
        .map(|v| v.sub(&one.scale(&(&v.coeffs()[k] / &one.coeffs()[k]))))
        .collect::<Result<_>>()?;
    let mut vectors: Vec<AlgebraElement> = c.into_iter().filter(|v| !v.is_zero()).collect();
    vectors.push(outside.clone());
    let b = Subspace::echelonize(m.ambient(), &vectors)?;
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::linear::ambient::StructureAlgebra;
    use crate::linear::rational::q;

    fn t(k: i64) -> AlgebraElement {
        AlgebraElement::monomial(q(1), k)
    }

    fn basis(v: &[AlgebraElement]) -> OrderedBasis {
        OrderedBasis::new(v.to_vec()).unwrap()
    }

    fn quartic() -> (Arc<StructureAlgebra>, impl Fn(usize) -> AlgebraElement) {
        let alg = Arc::new(StructureAlgebra::fourth_root_of_two());
        let a2 = alg.clone();
        (alg, move |i| AlgebraElement::in_algebra(&a2, rational::unit_vec(4, i)).unwrap())
    }

    #[test]
    fn matched_basis_examples() {
        let a = basis(&[t(0), t(1)]);
        assert!(is_matched_basis(&a, &basis(&[t(2), t(1)])).unwrap());
        assert!(!is_matched_basis(&a, &basis(&[t(1), t(2)])).unwrap());
        assert!(is_matched_basis(&basis(&[t(1)]), &basis(&[t(5)])).unwrap());
        assert!(matches!(is_matched_basis(&a, &basis(&[t(3)])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hall_violator_examples() {
        let (_, x) = quartic();
        let a = basis(&[x(0), x(2)]);
        let b = Subspace::span(&[x(1), x(2)]).unwrap();
        let v = linear_hall_violator(&a, &b).unwrap().unwrap();
        assert_eq!(v.indices, vec![0, 1]);
        assert_eq!(v.v_dim, 1);
        assert_eq!(Subspace::span(&v.v_basis).unwrap(), Subspace::span(&[x(2)]).unwrap());

        let a = basis(&[t(0), t(1)]);
        assert!(linear_hall_violator(&a, &Subspace::span(&[t(1), t(2)]).unwrap()).unwrap().is_none());
        assert!(linear_hall_violator(&basis(&[t(1)]), &Subspace::span(&[t(5)]).unwrap()).unwrap().is_none());
    }

    #[test]
    fn match_basis_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = basis(&[t(0), t(1)]);
        let b = Subspace::span(&[t(1), t(2)]).unwrap();
        let BasisMatch::Matched(m) = match_basis(&a, &b, 8, &mut rng).unwrap() else { panic!() };
        // b_2 must span U_1 = ⟨t⟩
        assert_eq!(Subspace::span(&m.vectors()[1..]).unwrap(), Subspace::span(&[t(1)]).unwrap());

        let (_, x) = quartic();
        let a = basis(&[x(0), x(2)]);
        let b = Subspace::span(&[x(1), x(2)]).unwrap();
        let BasisMatch::Blocked(v) = match_basis(&a, &b, 8, &mut rng).unwrap() else { panic!() };
        assert_eq!(v.indices, vec![0, 1]);

        let BasisMatch::Matched(m) =
            match_basis(&basis(&[t(1)]), &Subspace::span(&[t(5)]).unwrap(), 1, &mut rng).unwrap()
        else {
            panic!()
        };
        assert_eq!(Subspace::span(m.vectors()).unwrap(), Subspace::span(&[t(5)]).unwrap());

        assert_eq!(match_basis(&a, &Subspace::span(&[x(0), x(1)]).unwrap(), 1, &mut rng).unwrap_err(), Error::UnityInB);
    }

    #[test]
    fn deterministic_fallback_without_random_tries() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let a = basis(&[t(0), t(1)]);
        let b = Subspace::span(&[t(1), t(2)]).unwrap();
        assert!(matches!(match_basis(&a, &b, 0, &mut rng).unwrap(), BasisMatch::Matched(_)));
    }

    #[test]
    fn translate_examples() {
        let (_, x) = quartic();
        let m = Subspace::span(&[x(0), x(2)]).unwrap();
        let w = contains_translate(&m, &m).unwrap().unwrap();
        assert_eq!(w.translate, x(0));
        let w = contains_translate(&Subspace::span(&[x(1), x(3)]).unwrap(), &m).unwrap().unwrap();
        assert_eq!(w.translate, x(1));
        assert!(contains_translate(&Subspace::span(&[x(0), x(1)]).unwrap(), &m).unwrap().is_none());
        assert!(matches!(
            contains_translate(&m, &Subspace::span(&[x(0), x(1)]).unwrap()),
            Err(Error::NotSubalgebra(_))
        ));
        // Q(t) has only the trivial one
        let k = Subspace::span(&[t(0)]).unwrap();
        assert!(contains_translate(&Subspace::span(&[t(0), t(1)]).unwrap(), &k).unwrap().is_none());
        assert!(contains_translate(&k, &Subspace::span(&[t(0), t(1)]).unwrap()).is_err());
    }

    #[test]
    fn obstruction_examples() {
        let (_, x) = quartic();
        let m = Subspace::span(&[x(0), x(2)]).unwrap();
        let (a, b) = translate_obstruction(&m, &x(0), &x(1)).unwrap();
        assert_eq!(a, m);
        assert_eq!(b, Subspace::span(&[x(1), x(2)]).unwrap());
        let (a, b) = translate_obstruction(&m, &x(1), &x(3)).unwrap();
        assert_eq!(a, Subspace::span(&[x(1), x(3)]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ab = OrderedBasis::canonical(&a).unwrap();
        assert!(matches!(match_basis(&ab, &b, 4, &mut rng).unwrap(), BasisMatch::Blocked(_)));
    }
}
