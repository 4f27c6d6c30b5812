//! Scalings `B = α·A`, equivalence of isomorphisms, and the acyclic linear
//! matchings built from multiplication maps.
//!
//! Isomorphisms `f, g : A → B` are equivalent when some automorphism `φ` of
//! `A` satisfies `a·f(a) = φ(a)·g(φ(a))` for every `a ∈ A`. For equivalent
//! strong matchings either `f = c·g` for a rational `c`, or `B = α·A` and
//! `g∘φ` is multiplication by `α`.

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};

use super::ambient::{AlgebraElement, Ambient};
use super::iso::LinearIso;
use super::matched::condition_matrix;
use super::rational::{self, Q};
use super::strong::{strong_matching, StrongVerdict};
use super::subspace::{random_q, Subspace, RANDOM_RADIUS};
use crate::error::{Error, Result};

/// Every `l` in a window that could carry `A` onto `B`.
fn scaling_frame(a: &Subspace, b: &Subspace) -> Result<Option<(Ambient, Vec<AlgebraElement>)>> {
    match (a.ambient(), b.ambient()) {
        (Ambient::Laurent { .. }, Ambient::Laurent { .. }) => {
            // lowest and highest degrees add under multiplication
            let (la, ha) = (a.lowest_degrees(), a.highest_degrees());
            let (lb, hb) = (b.lowest_degrees(), b.highest_degrees());
            let lo = lb[0] - la[0];
            let hi = hb[hb.len() - 1] - ha[ha.len() - 1];
            if lo > hi {
                return Ok(None);
            }
            let frame = (lo..=hi).map(|k| AlgebraElement::monomial(Q::one(), k)).collect();
            Ok(Some((Ambient::laurent(lo, hi)?, frame)))
        }
        (Ambient::Algebra(x), Ambient::Algebra(y)) if x == y => {
            let d = x.dim();
            let frame =
                (0..d).map(|k| AlgebraElement::in_algebra(x, rational::unit_vec(d, k)).expect("unit vector")).collect();
            Ok(Some((a.ambient().clone(), frame)))
        }
        _ => Err(Error::AmbientMismatch),
    }
}

/// A nonzero `α` with `α·A = B`.
///
/// Over Laurent ambients the degrees of `α` are pinned down by those of `A`
/// and `B`, so the search is a single linear solve. Scalars that are not
/// Laurent polynomials are out of reach.
pub fn find_scaling(a: &Subspace, b: &Subspace) -> Result<Option<AlgebraElement>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    if a.is_zero() {
        return Err(Error::Empty);
    }
    let Some((window, frame)) = scaling_frame(a, b)? else {
        return Ok(None);
    };
    let mut system = Vec::new();
    for aj in a.basis() {
        system.extend(condition_matrix(b, &aj, &frame)?);
    }
    let solutions = Subspace::from_rows(&window, rational::nullspace(&system, frame.len()))?;
    for l in solutions.basis() {
        if a.scaled_by(&l)? == *b {
            return Ok(Some(l.trimmed()));
        }
    }
    Ok(None)
}

fn check_triple(f: &LinearIso, g: &LinearIso, phi: &LinearIso) -> Result<()> {
    let a = f.domain();
    if g.domain() != a || phi.domain() != a || phi.codomain() != a || g.codomain() != f.codomain() {
        return Err(Error::AmbientMismatch);
    }
    Ok(())
}

/// `a·f(a) = φ(a)·g(φ(a))` for all `a`, checked through the polarized
/// identity on pairs of basis vectors.
pub fn is_equivalent(f: &LinearIso, g: &LinearIso, phi: &LinearIso) -> Result<bool> {
    check_triple(f, g, phi)?;
    let basis = f.domain().basis();
    let fa = basis.iter().map(|x| f.apply(x)).collect::<Result<Vec<_>>>()?;
    let pa = basis.iter().map(|x| phi.apply(x)).collect::<Result<Vec<_>>>()?;
    let gpa = pa.iter().map(|x| g.apply(x)).collect::<Result<Vec<_>>>()?;
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let lhs = basis[i].mul(&fa[j])?.add(&basis[j].mul(&fa[i])?)?;
            let rhs = pa[i].mul(&gpa[j])?.add(&pa[j].mul(&gpa[i])?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Why two equivalent isomorphisms are related.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceBranch {
    /// `f = c·g`.
    Scalar { c: Q },
    /// `B = α·A` and `g∘φ` is multiplication by `α`.
    Scaling { alpha: AlgebraElement },
}

impl EquivalenceBranch {
    pub fn to_json(&self) -> Value {
        match self {
            EquivalenceBranch::Scalar { c } => json!({"scalar": rational::q_json(c)}),
            EquivalenceBranch::Scaling { alpha } => {
                json!({"scaling": alpha.to_json(), "display": alpha.to_string()})
            }
        }
    }
}

/// Decides which branch of the dichotomy an equivalent triple falls in.
/// Failing both is reported as an invariant violation.
pub fn classify_equivalent_pair(f: &LinearIso, g: &LinearIso, phi: &LinearIso) -> Result<EquivalenceBranch> {
    if !is_equivalent(f, g, phi)? {
        return Err(Error::Precondition("f and g are not equivalent under φ".into()));
    }
    if let Some(c) = f.ratio_to(g) {
        return Ok(EquivalenceBranch::Scalar { c });
    }
    if let Some(alpha) = find_scaling(f.domain(), f.codomain())? {
        let w = LinearIso::multiplication(&alpha, f.domain(), f.codomain())?;
        if let Some(lambda) = g.compose(phi)?.ratio_to(&w) {
            return Ok(EquivalenceBranch::Scaling { alpha: alpha.scale(&lambda) });
        }
    }
    Err(Error::InvariantViolation("equivalent isomorphisms are neither proportional nor a scaling".into()))
}

/// Isomorphisms `f`, `g` and an automorphism `φ` of their domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalentTriple {
    pub f: LinearIso,
    pub g: LinearIso,
    pub phi: LinearIso,
}

impl EquivalentTriple {
    /// `φ = c·id` and `g = c⁻²·f`.
    pub fn scalar(f: &LinearIso, c: &Q) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Precondition("c must be nonzero".into()));
        }
        let a = f.domain();
        let phi = LinearIso::identity(a, a)?.scale(c)?;
        let g = f.scale(&(c * c).recip())?;
        Ok(EquivalentTriple { f: f.clone(), g, phi })
    }

    /// `f = w_α∘φ` and `g = w_α∘φ⁻¹` on `A → α·A`.
    pub fn scaling(alpha: &AlgebraElement, phi: &LinearIso) -> Result<Self> {
        let a = phi.domain();
        let b = a.scaled_by(alpha)?;
        let w = LinearIso::multiplication(alpha, a, &b)?;
        Ok(EquivalentTriple { f: w.compose(phi)?, g: w.compose(&phi.inverse())?, phi: phi.clone() })
    }
}

/// A random automorphism of `s`.
pub fn random_automorphism<R: Rng + ?Sized>(rng: &mut R, s: &Subspace) -> Result<LinearIso> {
    LinearIso::random(rng, s, s)
}

/// Random nonzero rational `p/q` with `|p|, q ≤ 9`.
pub fn random_nonzero_q<R: Rng + ?Sized>(rng: &mut R) -> Q {
    loop {
        let p = random_q(rng, RANDOM_RADIUS);
        if !p.is_zero() {
            return p / rational::q(rng.gen_range(1..=RANDOM_RADIUS));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearCertificate {
    Scaling { alpha: AlgebraElement },
    Rigid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicLinearMatching {
    pub iso: LinearIso,
    pub certificate: LinearCertificate,
    /// Only claimed over `Q(t)`; structure-constant ambients may have
    /// intermediate subfields.
    pub acyclicity_claimed: bool,
}

impl AcyclicLinearMatching {
    pub fn to_json(&self) -> Value {
        let (kind, alpha) = match &self.certificate {
            LinearCertificate::Scaling { alpha } => ("scaling", Some(alpha)),
            LinearCertificate::Rigid => ("rigid", None),
        };
        json!({
            "certificate": kind,
            "alpha": alpha.map(AlgebraElement::to_json),
            "alpha_display": alpha.map(ToString::to_string),
            "iso": self.iso.to_json(),
            "acyclicity_claimed": self.acyclicity_claimed,
        })
    }
}

/// Multiplication by `α` when `B = α·A`, otherwise the identity matrix on
/// canonical bases, in which case every equivalent strong matching is a
/// rational multiple of it.
pub fn find_acyclic_linear_matching(a: &Subspace, b: &Subspace) -> Result<AcyclicLinearMatching> {
    match strong_matching(a, b)? {
        StrongVerdict::Exists => {}
        StrongVerdict::Blocked { .. } => return Err(Error::NoStrongMatching),
        StrongVerdict::Undetermined => return Err(Error::Undetermined),
    }
    let acyclicity_claimed = a.ambient().is_laurent() && b.ambient().is_laurent();
    Ok(match find_scaling(a, b)? {
        Some(alpha) => AcyclicLinearMatching {
            iso: LinearIso::multiplication(&alpha, a, b)?,
            certificate: LinearCertificate::Scaling { alpha },
            acyclicity_claimed,
        },
        None => AcyclicLinearMatching {
            iso: LinearIso::identity(a, b)?,
            certificate: LinearCertificate::Rigid,
            acyclicity_claimed,
        },
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
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
    fn scaling_examples() {
        let a = span(&[t(0), t(1)]);
        assert_eq!(find_scaling(&a, &span(&[t(2), t(3)])).unwrap(), Some(t(2)));
        assert_eq!(find_scaling(&a, &span(&[t(1), t(3)])).unwrap(), None);
        assert_eq!(find_scaling(&a, &a).unwrap(), Some(t(0)));
        let alpha = lp(&[(-1, 3), (2, -1)]);
        let b = a.scaled_by(&alpha).unwrap();
        let found = find_scaling(&a, &b).unwrap().unwrap();
        assert_eq!(a.scaled_by(&found).unwrap(), b);
    }

    #[test]
    fn equivalence_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = span(&[t(0), t(1)]);
        let b = span(&[t(3), t(5)]);
        let f = LinearIso::random(&mut rng, &a, &b).unwrap();
        let id = LinearIso::identity(&a, &a).unwrap();
        assert!(is_equivalent(&f, &f, &id).unwrap());
        let triple = EquivalentTriple::scalar(&f, &q(3)).unwrap();
        assert!(is_equivalent(&triple.f, &triple.g, &triple.phi).unwrap());
        let g = loop {
            let g = LinearIso::random(&mut rng, &a, &b).unwrap();
            if g.ratio_to(&f).is_none() {
                break g;
            }
        };
        assert!(!is_equivalent(&f, &g, &id).unwrap());
    }

    #[test]
    fn dichotomy() {
        let a = span(&[t(0), t(1)]);
        let b = span(&[t(3), t(5)]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = LinearIso::random(&mut rng, &a, &b).unwrap();
        let id = LinearIso::identity(&a, &a).unwrap();
        assert_eq!(classify_equivalent_pair(&f, &f, &id).unwrap(), EquivalenceBranch::Scalar { c: q(1) });
        let triple = EquivalentTriple::scalar(&f, &q(2)).unwrap();
        assert_eq!(
            classify_equivalent_pair(&triple.f, &triple.g, &triple.phi).unwrap(),
            EquivalenceBranch::Scalar { c: q(4) }
        );
        // φ(1) = 1 + t, φ(t) = 2t is not a multiple of an involution
        let phi = LinearIso::new(a.clone(), a.clone(), vec![vec![q(1), q(0)], vec![q(1), q(2)]]).unwrap();
        let triple = EquivalentTriple::scaling(&t(2), &phi).unwrap();
        assert_eq!(
            classify_equivalent_pair(&triple.f, &triple.g, &triple.phi).unwrap(),
            EquivalenceBranch::Scaling { alpha: t(2) }
        );
    }

    #[test]
    fn acyclic_examples() {
        let m = find_acyclic_linear_matching(&span(&[t(0), t(1)]), &span(&[t(2), t(3)])).unwrap();
        assert_eq!(m.certificate, LinearCertificate::Scaling { alpha: t(2) });
        assert!(m.acyclicity_claimed);
        let m = find_acyclic_linear_matching(&span(&[t(1), t(2)]), &span(&[t(3), t(4)])).unwrap();
        assert_eq!(m.certificate, LinearCertificate::Scaling { alpha: t(2) });
        let b = span(&[t(3), lp(&[(4, 1), (5, 1)])]);
        let m = find_acyclic_linear_matching(&span(&[t(0), t(1)]), &b).unwrap();
        assert_eq!(m.certificate, LinearCertificate::Rigid);
        assert_eq!(
            find_acyclic_linear_matching(&span(&[t(0), t(1)]), &span(&[t(1), t(2)])).unwrap_err(),
            Error::NoStrongMatching
        );
    }
}
