//! Ambient algebras: windows of Laurent polynomials in `Q(t)` and
//! finite-dimensional commutative algebras given by structure constants.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::rational::{self, format_q, parse_q, poly, Q};
use crate::error::{Error, Result};

/// A commutative associative unital algebra over `Q` with basis `e_0 … e_{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureAlgebra {
    dim: usize,
    /// `table[i][j]` is the coordinate vector of `e_i e_j`.
    table: Vec<Vec<Vec<Q>>>,
    unity: Vec<Q>,
    labels: Vec<String>,
}

impl StructureAlgebra {
    pub fn new(table: Vec<Vec<Vec<Q>>>, unity: Vec<Q>, labels: Option<Vec<String>>) -> Result<Self> {
        let dim = table.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        let shape_ok = table.iter().all(|row| row.len() == dim && row.iter().all(|v| v.len() == dim));
        if !shape_ok || unity.len() != dim {
            return Err(Error::InvalidAlgebra(format!(
                "expected a {dim}×{dim}×{dim} tensor and a unity of length {dim}"
            )));
        }
        let labels = labels.unwrap_or_else(|| (0..dim).map(|i| format!("e{i}")).collect());
        if labels.len() != dim {
            return Err(Error::InvalidAlgebra("wrong number of basis labels".into()));
        }
        let alg = StructureAlgebra { dim, table, unity, labels };
        alg.validate()?;
        Ok(alg)
    }

    /// `Q[x]/(f)` with basis `1, x, …, x^{d-1}`; `coeffs` lowest degree first.
    pub fn from_minimal_polynomial(coeffs: &[Q]) -> Result<Self> {
        let f = poly::trim(coeffs.to_vec());
        let d = poly::degree(&f)
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::InvalidAlgebra("polynomial must have positive degree".into()))?;
        let f = poly::monic(&f);
        // x^k reduced modulo f, for k < 2d - 1
        let mut powers: Vec<Vec<Q>> = Vec::with_capacity(2 * d - 1);
        for k in 0..2 * d - 1 {
            let mut mono = rational::zero_vec(k + 1);
            mono[k] = Q::one();
            let mut r = poly::divmod(&mono, &f).1;
            r.resize(d, Q::zero());
            powers.push(r);
        }
        let table = (0..d).map(|i| (0..d).map(|j| powers[i + j].clone()).collect()).collect();
        let labels = (0..d)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        StructureAlgebra::new(table, rational::unit_vec(d, 0), Some(labels))
    }

    /// `Q(2^{1/4})`, basis `1, x, x², x³` with `x⁴ = 2`.
    pub fn fourth_root_of_two() -> Self {
        StructureAlgebra::from_minimal_polynomial(&[rational::q(-2), Q::zero(), Q::zero(), Q::zero(), Q::one()])
            .expect("x^4 - 2 defines an algebra")
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                if self.table[i][j] != self.table[j][i] {
                    return Err(Error::InvalidAlgebra(format!("e{i}e{j} ≠ e{j}e{i}")));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let left = self.mul(&self.table[i][j], &rational::unit_vec(d, k));
                    let right = self.mul(&rational::unit_vec(d, i), &self.table[j][k]);
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!("(e{i}e{j})e{k} ≠ e{i}(e{j}e{k})")));
                    }
                }
            }
        }
        for i in 0..d {
            let e = rational::unit_vec(d, i);
            if self.mul(&self.unity, &e) != e {
                return Err(Error::InvalidAlgebra(format!("unity does not fix e{i}")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unity(&self) -> &[Q] {
        &self.unity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<Vec<Q>>] {
        &self.table
    }

    pub fn mul(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let mut out = rational::zero_vec(self.dim);
        for (i, x) in u.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in v.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let c = x * y;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    if !t.is_zero() {
                        *o += &c * t;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ u·y`; column `j` is `u·e_j`.
    pub fn multiplication_matrix(&self, u: &[Q]) -> Vec<Vec<Q>> {
        let cols: Vec<Vec<Q>> = (0..self.dim).map(|j| self.mul(u, &rational::unit_vec(self.dim, j))).collect();
        rational::transpose(&cols, self.dim)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ambient {
    /// Laurent polynomials `Σ c_k t^k` with `dmin ≤ k ≤ dmax`.
    Laurent {
        dmin: i64,
        dmax: i64,
    },
    Algebra(Arc<StructureAlgebra>),
}

/// JSON form of an ambient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmbientSpec {
    Laurent {
        dmin: i64,
        dmax: i64,
    },
    Algebra {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tensor: Option<Vec<Vec<Vec<Value>>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unity: Option<Vec<Value>>,
        /// Alternative to `tensor`: coefficients of `f`, lowest degree first, for `Q[x]/(f)`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        minimal_polynomial: Option<Vec<Value>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

fn parse_vec(v: &[Value]) -> Result<Vec<Q>> {
    v.iter().map(parse_q).collect()
}

impl Ambient {
    pub fn laurent(dmin: i64, dmax: i64) -> Result<Self> {
        if dmin > dmax {
            return Err(Error::Precondition(format!("empty Laurent window [{dmin}, {dmax}]")));
        }
        Ok(Ambient::Laurent { dmin, dmax })
    }

    pub fn algebra(alg: StructureAlgebra) -> Self {
        Ambient::Algebra(Arc::new(alg))
    }

    pub fn from_spec(spec: &AmbientSpec) -> Result<Self> {
        match spec {
            AmbientSpec::Laurent { dmin, dmax } => Ambient::laurent(*dmin, *dmax),
            AmbientSpec::Algebra { dim, tensor, unity, minimal_polynomial, labels } => {
                let alg = match (tensor, minimal_polynomial) {
                    (Some(t), None) => {
                        let table = t
                            .iter()
                            .map(|row| row.iter().map(|v| parse_vec(v)).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()?;
                        let d = table.len();
                        let unity = match unity {
                            Some(u) => parse_vec(u)?,
                            None => return Err(Error::InvalidAlgebra("missing unity".into())),
                        };
                        if dim.is_some_and(|n| n != d) {
                            return Err(Error::InvalidAlgebra(format!("dim does not match the tensor ({d})")));
                        }
                        StructureAlgebra::new(table, unity, labels.clone())?
                    }
                    (None, Some(f)) => {
                        let alg = StructureAlgebra::from_minimal_polynomial(&parse_vec(f)?)?;
                        if dim.is_some_and(|n| n != alg.dim) {
                            return Err(Error::InvalidAlgebra("dim does not match the polynomial degree".into()));
                        }
                        alg
                    }
                    _ => return Err(Error::InvalidAlgebra("give exactly one of tensor or minimal_polynomial".into())),
                };
                Ok(Ambient::algebra(alg))
            }
        }
    }

    pub fn spec(&self) -> AmbientSpec {
        match self {
            Ambient::Laurent { dmin, dmax } => AmbientSpec::Laurent { dmin: *dmin, dmax: *dmax },
            Ambient::Algebra(a) => AmbientSpec::Algebra {
                dim: Some(a.dim),
                tensor: Some(
                    a.table
                        .iter()
                        .map(|row| row.iter().map(|v| v.iter().map(rational::q_json).collect()).collect())
                        .collect(),
                ),
                unity: Some(a.unity.iter().map(rational::q_json).collect()),
                minimal_polynomial: None,
                labels: Some(a.labels.clone()),
            },
        }
    }

    pub fn width(&self) -> usize {
        match self {
            Ambient::Laurent { dmin, dmax } => (dmax - dmin + 1) as usize,
            Ambient::Algebra(a) => a.dim,
        }
    }

    pub fn is_laurent(&self) -> bool {
        matches!(self, Ambient::Laurent { .. })
    }

    /// Smallest ambient containing both; Laurent windows are united.
    pub fn join(&self, other: &Ambient) -> Result<Ambient> {
        match (self, other) {
            (Ambient::Laurent { dmin: a, dmax: b }, Ambient::Laurent { dmin: c, dmax: d }) => {
                Ok(Ambient::Laurent { dmin: *a.min(c), dmax: *b.max(d) })
            }
            (Ambient::Algebra(x), Ambient::Algebra(y)) if x == y => Ok(self.clone()),
            _ => Err(Error::AmbientMismatch),
        }
    }

    /// Ambient of products of elements of `self` and `other`.
    pub fn product(&self, other: &Ambient) -> Result<Ambient> {
        match (self, other) {
            (Ambient::Laurent { dmin: a, dmax: b }, Ambient::Laurent { dmin: c, dmax: d }) => {
                Ok(Ambient::Laurent { dmin: a + c, dmax: b + d })
            }
            _ => self.join(other),
        }
    }

    pub fn one(&self) -> AlgebraElement {
        match self {
            Ambient::Laurent { .. } => {
                AlgebraElement { ambient: Ambient::Laurent { dmin: 0, dmax: 0 }, coeffs: vec![Q::one()] }
            }
            Ambient::Algebra(a) => AlgebraElement { ambient: self.clone(), coeffs: a.unity.clone() },
        }
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement { ambient: self.clone(), coeffs: rational::zero_vec(self.width()) }
    }

    /// Label of coordinate `i`.
    pub fn label(&self, i: usize) -> String {
        match self {
            Ambient::Laurent { dmin, .. } => match dmin + i as i64 {
                0 => "1".into(),
                1 => "t".into(),
                k => format!("t^{k}"),
            },
            Ambient::Algebra(a) => a.labels[i].clone(),
        }
    }
}

/// An element of an ambient algebra, as a coordinate vector.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    ambient: Ambient,
    coeffs: Vec<Q>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        match self.ambient.join(&other.ambient) {
            Ok(amb) => match (self.embed(&amb), other.embed(&amb)) {
                (Ok(x), Ok(y)) => x.coeffs == y.coeffs,
                _ => false,
            },
            Err(_) => false,
        }
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn new(ambient: Ambient, coeffs: Vec<Q>) -> Result<Self> {
        if coeffs.len() != ambient.width() {
            return Err(Error::DimensionMismatch { left: coeffs.len(), right: ambient.width() });
        }
        Ok(AlgebraElement { ambient, coeffs })
    }

    /// `Σ c_k t^k` from `(k, c_k)` terms.
    pub fn laurent(terms: &[(i64, Q)]) -> Self {
        if terms.is_empty() {
            return AlgebraElement { ambient: Ambient::Laurent { dmin: 0, dmax: 0 }, coeffs: vec![Q::zero()] };
        }
        let lo = terms.iter().map(|t| t.0).min().expect("nonempty");
        let hi = terms.iter().map(|t| t.0).max().expect("nonempty");
        let mut coeffs = rational::zero_vec((hi - lo + 1) as usize);
        for (k, c) in terms {
            coeffs[(k - lo) as usize] += c;
        }
        AlgebraElement { ambient: Ambient::Laurent { dmin: lo, dmax: hi }, coeffs }
    }

    /// `c·t^k`
    pub fn monomial(c: Q, k: i64) -> Self {
        AlgebraElement::laurent(&[(k, c)])
    }

    /// `Σ c_i e_i` in a structure-constant algebra.
    pub fn in_algebra(alg: &Arc<StructureAlgebra>, coeffs: Vec<Q>) -> Result<Self> {
        AlgebraElement::new(Ambient::Algebra(alg.clone()), coeffs)
    }

    pub fn from_values(ambient: &Ambient, values: &[Value]) -> Result<Self> {
        AlgebraElement::new(ambient.clone(), parse_vec(values)?)
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Q> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        rational::is_zero_vec(&self.coeffs)
    }

    /// Lowest and highest degrees with nonzero coefficient.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let Ambient::Laurent { dmin, .. } = self.ambient else {
            return None;
        };
        let lo = self.coeffs.iter().position(|c| !c.is_zero())?;
        let hi = self.coeffs.iter().rposition(|c| !c.is_zero())?;
        Some((dmin + lo as i64, dmin + hi as i64))
    }

    /// Re-expresses the element in a larger ambient.
    pub fn embed(&self, target: &Ambient) -> Result<AlgebraElement> {
        match (&self.ambient, target) {
            (Ambient::Laurent { dmin, .. }, Ambient::Laurent { dmin: tmin, dmax: tmax }) => {
                let mut coeffs = rational::zero_vec(target.width());
                for (i, c) in self.coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let k = dmin + i as i64;
                    if k < *tmin || k > *tmax {
                        return Err(Error::Precondition(format!("t^{k} lies outside the window [{tmin}, {tmax}]")));
                    }
                    coeffs[(k - tmin) as usize] = c.clone();
                }
                Ok(AlgebraElement { ambient: target.clone(), coeffs })
            }
            (Ambient::Algebra(a), Ambient::Algebra(b)) if a == b => Ok(self.clone()),
            _ => Err(Error::AmbientMismatch),
        }
    }

    /// Shrinks a Laurent element to the window of its support.
    pub fn trimmed(&self) -> AlgebraElement {
        match self.degree_range() {
            Some((lo, hi)) => self.embed(&Ambient::Laurent { dmin: lo, dmax: hi }).expect("support fits"),
            None if self.ambient.is_laurent() => AlgebraElement::laurent(&[]),
            None => self.clone(),
        }
    }

    fn aligned(&self, other: &AlgebraElement) -> Result<(Ambient, Vec<Q>, Vec<Q>)> {
        let amb = self.ambient.join(&other.ambient)?;
        let x = self.embed(&amb)?.coeffs;
        let y = other.embed(&amb)?.coeffs;
        Ok((amb, x, y))
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        let (ambient, x, y) = self.aligned(other)?;
        Ok(AlgebraElement { ambient, coeffs: rational::add(&x, &y) })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        let (ambient, x, y) = self.aligned(other)?;
        Ok(AlgebraElement { ambient, coeffs: rational::sub(&x, &y) })
    }

    pub fn scale(&self, c: &Q) -> AlgebraElement {
        AlgebraElement { ambient: self.ambient.clone(), coeffs: rational::scale(&self.coeffs, c) }
    }

    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        match (&self.ambient, &other.ambient) {
            (Ambient::Laurent { .. }, Ambient::Laurent { .. }) => {
                let ambient = self.ambient.product(&other.ambient)?;
                let mut coeffs = rational::zero_vec(ambient.width());
                for (i, x) in self.coeffs.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in other.coeffs.iter().enumerate() {
                        if !y.is_zero() {
                            coeffs[i + j] += x * y;
                        }
                    }
                }
                Ok(AlgebraElement { ambient, coeffs })
            }
            (Ambient::Algebra(a), Ambient::Algebra(b)) if a == b => {
                Ok(AlgebraElement { ambient: self.ambient.clone(), coeffs: a.mul(&self.coeffs, &other.coeffs) })
            }
            _ => Err(Error::AmbientMismatch),
        }
    }

    /// Multiplicative inverse: Laurent monomials, or invertible algebra elements.
    pub fn invert(&self) -> Result<AlgebraElement> {
        match &self.ambient {
            Ambient::Laurent { .. } => match self.degree_range() {
                Some((lo, hi)) if lo == hi => {
                    let c = self.trimmed().coeffs[0].recip();
                    Ok(AlgebraElement::monomial(c, -lo))
                }
                Some(_) => Err(Error::Precondition("only Laurent monomials are inverted".into())),
                None => Err(Error::NotInvertible),
            },
            Ambient::Algebra(a) => {
                let m = a.multiplication_matrix(&self.coeffs);
                let inv = rational::inverse(&m)?;
                Ok(AlgebraElement { ambient: self.ambient.clone(), coeffs: rational::mat_vec(&inv, &a.unity) })
            }
        }
    }

    /// `self / den` when the quotient exists in the ambient.
    pub fn divide_exact(&self, den: &AlgebraElement) -> Result<Option<AlgebraElement>> {
        if den.is_zero() {
            return Err(Error::NotInvertible);
        }
        match (&self.ambient, &den.ambient) {
            (Ambient::Laurent { .. }, Ambient::Laurent { .. }) => {
                let Some((nlo, _)) = self.degree_range() else {
                    return Ok(Some(AlgebraElement::laurent(&[])));
                };
                let (dlo, _) = den.degree_range().expect("nonzero");
                let (n, d) = (self.trimmed().coeffs, den.trimmed().coeffs);
                let (quot, rem) = poly::divmod(&n, &d);
                if !rem.is_empty() {
                    return Ok(None);
                }
                let terms: Vec<(i64, Q)> =
                    quot.into_iter().enumerate().map(|(i, c)| (nlo - dlo + i as i64, c)).collect();
                Ok(Some(AlgebraElement::laurent(&terms).trimmed()))
            }
            _ => match den.invert() {
                Ok(inv) => Ok(Some(self.mul(&inv)?)),
                Err(Error::NotInvertible) => Ok(None),
                Err(e) => Err(e),
            },
        }
    }

    /// Coefficients with the window offset for Laurent elements.
    pub fn to_json(&self) -> Value {
        let t = self.trimmed();
        match t.ambient {
            Ambient::Laurent { dmin, .. } => json!({"dmin": dmin, "coeffs": rational::vec_json(&t.coeffs)}),
            Ambient::Algebra(_) => json!({"coeffs": rational::vec_json(&t.coeffs)}),
        }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let terms: Vec<(usize, &Q)> = match self.ambient {
            // highest degree first
            Ambient::Laurent { .. } => self.coeffs.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).collect(),
            Ambient::Algebra(_) => self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect(),
        };
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in terms {
            let label = self.ambient.label(i);
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (abs.is_one(), label.as_str()) {
                (true, "1") => write!(f, "1")?,
                (true, l) => write!(f, "{l}")?,
                (false, "1") => write!(f, "{}", format_q(&abs))?,
                (false, l) if abs.is_integer() => write!(f, "{}{l}", format_q(&abs))?,
                (false, l) => write!(f, "({}){l}", format_q(&abs))?,
            }
        }
        Ok(())
    }
}
