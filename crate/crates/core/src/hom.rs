use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupSpec, Subgroup};

const EXHAUSTIVE_HOM_CHECK: usize = 64;
const SAMPLED_PAIRS: usize = 20_000;

/// A homomorphism out of a finite group, stored as its full image table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    source: Group,
    target: Group,
    images: Vec<Element>,
    kernel: Subgroup,
}

/// How the map is given in JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    /// `"mod_k"`: reduce a cyclic source modulo the target order;
    /// `"project_i"`: projection of a product onto factor `i`;
    /// `"identity"`.
    Named(String),
    Images(Vec<Value>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomSpec {
    pub source: GroupSpec,
    pub target: GroupSpec,
    pub map: MapSpec,
}

impl Homomorphism {
    /// Validates `images[x] = η(x)` as a homomorphism.
    pub fn new(source: Group, target: Group, images: Vec<Element>) -> Result<Self> {
        let n = source.finite_order()?;
        if images.len() != n {
            return Err(Error::InvalidHomomorphism(format!("expected {n} images, got {}", images.len())));
        }
        for &y in &images {
            target.check(y)?;
        }
        let respects = |x: Element, y: Element| -> Result<bool> {
            Ok(images[source.op(x, y)?] == target.op(images[x], images[y])?)
        };
        if n <= EXHAUSTIVE_HOM_CHECK {
            for x in 0..n {
                for y in 0..n {
                    if !respects(x, y)? {
                        return Err(Error::InvalidHomomorphism(format!(
                            "η({}·{}) ≠ η({})η({})",
                            source.label(x),
                            source.label(y),
                            source.label(x),
                            source.label(y)
                        )));
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..SAMPLED_PAIRS {
                let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if !respects(x, y)? {
                    return Err(Error::InvalidHomomorphism("not multiplicative".into()));
                }
            }
        }
        let e = target.identity();
        let kernel_elems: Vec<Element> = (0..n).filter(|&x| images[x] == e).collect();
        let kernel = source.subgroup(&kernel_elems)?;
        if !source.is_normal(&kernel)? {
            return Err(Error::InvariantViolation("kernel is not normal".into()));
        }
        Ok(Homomorphism { source, target, images, kernel })
    }

    pub fn identity(g: &Group) -> Result<Self> {
        let images = g.elements()?.collect();
        Homomorphism::new(g.clone(), g.clone(), images)
    }

    /// `Z/n → Z/k, x ↦ x mod k`, for `k | n`.
    pub fn reduction(n: usize, k: usize) -> Result<Self> {
        if k == 0 || !n.is_multiple_of(k) {
            return Err(Error::InvalidHomomorphism(format!("{k} does not divide {n}")));
        }
        Homomorphism::new(Group::cyclic(n)?, Group::cyclic(k)?, (0..n).map(|x| x % k).collect())
    }

    /// Projection of `Z/f_0 × … × Z/f_m` onto factor `i`.
    pub fn projection(factors: &[usize], i: usize) -> Result<Self> {
        let source = Group::product(factors)?;
        let f = *factors.get(i).ok_or_else(|| Error::InvalidHomomorphism(format!("no factor {i}")))?;
        let target = Group::cyclic(f)?;
        let stride: usize = factors[i + 1..].iter().product();
        let images = source.elements()?.map(|x| (x / stride) % f).collect();
        Homomorphism::new(source, target, images)
    }

    pub fn from_spec(spec: &HomSpec) -> Result<Self> {
        let source = Group::from_spec(&spec.source)?;
        let target = Group::from_spec(&spec.target)?;
        match &spec.map {
            MapSpec::Images(values) => {
                let images = values.iter().map(|v| target.parse_element(v)).collect::<Result<Vec<_>>>()?;
                Homomorphism::new(source, target, images)
            }
            MapSpec::Named(name) => match (name.as_str(), &spec.source) {
                ("identity", _) => Homomorphism::new(source.clone(), target, source.elements()?.collect()),
                ("mod_k", GroupSpec::Cyclic { n }) => {
                    let k = target.finite_order()?;
                    let h = Homomorphism::reduction(*n, k)?;
                    Homomorphism::new(source, target, h.images)
                }
                (p, GroupSpec::Product { factors }) if p.starts_with("project_") => {
                    let i: usize = p["project_".len()..]
                        .parse()
                        .map_err(|_| Error::InvalidHomomorphism(format!("bad map {p}")))?;
                    let h = Homomorphism::projection(factors, i)?;
                    Homomorphism::new(source, target, h.images)
                }
                (other, _) => Err(Error::InvalidHomomorphism(format!("unsupported map {other}"))),
            },
        }
    }

    pub fn spec(&self) -> HomSpec {
        HomSpec {
            source: self.source.spec(),
            target: self.target.spec(),
            map: MapSpec::Images(self.images.iter().map(|&y| self.target.element_value(y)).collect()),
        }
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn apply(&self, x: Element) -> Result<Element> {
        self.source.check(x)?;
        Ok(self.images[x])
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_examples() {
        let h = Homomorphism::reduction(6, 3).unwrap();
        assert_eq!(h.apply(4).unwrap(), 1);
        assert_eq!(h.kernel().elements(), &[0, 3]);
        let id = Homomorphism::identity(&Group::cyclic(5).unwrap()).unwrap();
        assert_eq!(id.kernel().elements(), &[0]);
    }

    #[test]
    fn projection_kernel_is_the_other_factor() {
        let p = Homomorphism::projection(&[2, 3], 1).unwrap();
        let g = p.source();
        let kernel: Vec<String> = p.kernel().elements().iter().map(|&x| g.label(x)).collect();
        assert_eq!(kernel, vec!["(0,0)", "(1,0)"]);
        let p0 = Homomorphism::projection(&[2, 3], 0).unwrap();
        assert_eq!(p0.kernel().order(), 3);
    }

    #[test]
    fn rejects_non_homomorphisms() {
        let z4 = Group::cyclic(4).unwrap();
        let z2 = Group::cyclic(2).unwrap();
        assert!(Homomorphism::new(z4.clone(), z2.clone(), vec![0, 1, 1, 0]).is_err());
        assert!(Homomorphism::reduction(6, 4).is_err());
    }

    #[test]
    fn sign_map_on_s3_has_normal_kernel() {
        let s3 = Group::symmetric3();
        let z2 = Group::cyclic(2).unwrap();
        // e, (12), (13), (23), (123), (132)
        let h = Homomorphism::new(s3, z2, vec![0, 1, 1, 1, 0, 0]).unwrap();
        assert_eq!(h.kernel().order(), 3);
    }

    #[test]
    fn named_maps_from_json() {
        let spec: HomSpec = serde_json::from_str(
            r#"{"source":{"kind":"cyclic","n":12},"target":{"kind":"cyclic","n":4},"map":"mod_k"}"#,
        )
        .unwrap();
        let h = Homomorphism::from_spec(&spec).unwrap();
        assert_eq!(h.apply(7).unwrap(), 3);
        let spec: HomSpec = serde_json::from_str(
            r#"{"source":{"kind":"product","factors":[2,3]},"target":{"kind":"cyclic","n":3},"map":"project_1"}"#,
        )
        .unwrap();
        assert_eq!(Homomorphism::from_spec(&spec).unwrap().kernel().order(), 2);
        let round = Homomorphism::from_spec(&h.spec()).unwrap();
        assert_eq!(round, h);
    }
}
