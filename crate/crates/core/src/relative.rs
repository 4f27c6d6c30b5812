//! Matchings between tuples of group elements relative to a normal subgroup.
//!
//! For tuples `a = (a_1, …, a_n)` and `b = (b_1, …, b_n)` and a normal
//! subgroup `N`, a permutation `σ` is a matching relative to `N` when
//! `a_i·b_σ(i) ∉ a_j·N` for all `i, j`. Under a homomorphism `η`, matchings
//! of the image tuples are exactly the matchings relative to `ker η`.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bipartite::{self, Outcome};
use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupSpec, Side, Subgroup};
use crate::hom::Homomorphism;

/// JSON form: `{"group": {...}, "entries": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleSpec {
    pub group: GroupSpec,
    pub entries: Vec<Value>,
}

/// An ordered array of elements; repeats allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleOfElements {
    group: Group,
    entries: Vec<Element>,
}

impl TupleOfElements {
    pub fn new(group: Group, entries: Vec<Element>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        for &x in &entries {
            group.check(x)?;
        }
        Ok(TupleOfElements { group, entries })
    }

    pub fn from_spec(spec: &TupleSpec) -> Result<Self> {
        let g = Group::from_spec(&spec.group)?;
        Self::from_values(&g, &spec.entries)
    }

    pub fn from_values(g: &Group, values: &[Value]) -> Result<Self> {
        let entries = values.iter().map(|v| g.parse_element(v)).collect::<Result<Vec<_>>>()?;
        TupleOfElements::new(g.clone(), entries)
    }

    pub fn spec(&self) -> TupleSpec {
        TupleSpec { group: self.group.spec(), entries: self.values() }
    }

    pub fn values(&self) -> Vec<Value> {
        self.entries.iter().map(|&x| self.group.element_value(x)).collect()
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct entries, ascending.
    pub fn support(&self) -> Vec<Element> {
        self.multiplicities().into_keys().collect()
    }

    /// Number of occurrences of each distinct entry.
    pub fn multiplicities(&self) -> BTreeMap<Element, usize> {
        let mut m = BTreeMap::new();
        for &x in &self.entries {
            *m.entry(x).or_insert(0) += 1;
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeMatching {
    pub sigma: Vec<usize>,
    pub normal: Subgroup,
}

impl RelativeMatching {
    pub fn to_json(&self, g: &Group) -> Value {
        json!({
            "sigma": self.sigma,
            "normal": self.normal.elements().iter().map(|&x| g.element_value(x)).collect::<Vec<_>>(),
        })
    }
}

fn same_group(a: &TupleOfElements, b: &TupleOfElements) -> Result<()> {
    if a.group != b.group {
        return Err(Error::Precondition("tuples live in different groups".into()));
    }
    if a.len() != b.len() {
        return Err(Error::SizeMismatch { left: a.len(), right: b.len() });
    }
    Ok(())
}

/// `∪_j a_j·N`
fn forbidden_set(a: &TupleOfElements, n: &Subgroup) -> Result<HashSet<Element>> {
    let mut out = HashSet::new();
    for x in a.support() {
        out.extend(a.group.coset(x, n, Side::Left)?);
    }
    Ok(out)
}

fn check_normal(g: &Group, n: &Subgroup) -> Result<()> {
    if n.is_trivial() && n.contains(g.identity()) {
        return Ok(());
    }
    let checked = g.subgroup(n.elements())?;
    if !g.is_normal(&checked)? {
        return Err(Error::NotNormal);
    }
    Ok(())
}

/// Admissible `b`-indices per `a`-index.
fn relative_graph(a: &TupleOfElements, b: &TupleOfElements, forbidden: &HashSet<Element>) -> Result<Vec<Vec<usize>>> {
    let g = &a.group;
    a.entries
        .iter()
        .map(|&x| {
            let mut row = Vec::new();
            for (k, &y) in b.entries.iter().enumerate() {
                if !forbidden.contains(&g.op(x, y)?) {
                    row.push(k);
                }
            }
            Ok(row)
        })
        .collect()
}

/// Whether `σ` satisfies the relative condition for `N`.
pub fn is_relative_matching(a: &TupleOfElements, b: &TupleOfElements, n: &Subgroup, sigma: &[usize]) -> Result<bool> {
    same_group(a, b)?;
    if sigma.len() != a.len() {
        return Err(Error::SizeMismatch { left: sigma.len(), right: a.len() });
    }
    let mut used = vec![false; a.len()];
    for &k in sigma {
        if k >= a.len() || std::mem::replace(&mut used[k], true) {
            return Ok(false);
        }
    }
    let forbidden = forbidden_set(a, n)?;
    for (i, &k) in sigma.iter().enumerate() {
        if forbidden.contains(&a.group.op(a.entries[i], b.entries[k])?) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn find_relative_matching(
    a: &TupleOfElements,
    b: &TupleOfElements,
    n: &Subgroup,
) -> Result<Option<RelativeMatching>> {
    same_group(a, b)?;
    check_normal(&a.group, n)?;
    let forbidden = forbidden_set(a, n)?;
    let adj = relative_graph(a, b, &forbidden)?;
    Ok(match bipartite::perfect_matching(&adj, b.len()) {
        Outcome::Perfect(sigma) => Some(RelativeMatching { sigma, normal: n.clone() }),
        Outcome::Violator { .. } => None,
    })
}

pub fn push_forward(h: &Homomorphism, a: &TupleOfElements) -> Result<TupleOfElements> {
    if a.group != *h.source() {
        return Err(Error::Precondition("tuple is not in the source group".into()));
    }
    let images = a.entries.iter().map(|&x| h.apply(x)).collect::<Result<Vec<_>>>()?;
    TupleOfElements::new(h.target().clone(), images)
}

/// Both sides of the homomorphism transfer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferCheck {
    /// A matching relative to the kernel, in the source.
    pub kernel_relative: Option<RelativeMatching>,
    /// A plain matching between the image tuples.
    pub image: Option<RelativeMatching>,
}

impl TransferCheck {
    /// Existence agrees on both sides.
    pub fn holds(&self) -> bool {
        self.kernel_relative.is_some() == self.image.is_some()
    }

    /// Each side's permutation also works on the other side.
    pub fn permutations_transfer(&self, h: &Homomorphism, a: &TupleOfElements, b: &TupleOfElements) -> Result<bool> {
        let (ia, ib) = (push_forward(h, a)?, push_forward(h, b)?);
        let trivial = h.target().trivial_subgroup();
        if let Some(m) = &self.kernel_relative {
            if !is_relative_matching(&ia, &ib, &trivial, &m.sigma)? {
                return Ok(false);
            }
        }
        if let Some(m) = &self.image {
            if !is_relative_matching(a, b, h.kernel(), &m.sigma)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn verify_hom_transfer(h: &Homomorphism, a: &TupleOfElements, b: &TupleOfElements) -> Result<TransferCheck> {
    same_group(a, b)?;
    let kernel_relative = find_relative_matching(a, b, h.kernel())?;
    let (ia, ib) = (push_forward(h, a)?, push_forward(h, b)?);
    let image = find_relative_matching(&ia, &ib, &h.target().trivial_subgroup())?;
    Ok(TransferCheck { kernel_relative, image })
}

/// Lifts a matching of supports blockwise: the `k`-th occurrence of `s` in
/// `a` goes to the `k`-th occurrence of `f(s)` in `b`. The lift is kept only
/// if every `a_i·b_σ(i)` avoids `Supp(a)`.
pub fn lift_support_matching(
    a: &TupleOfElements,
    b: &TupleOfElements,
    f: &BTreeMap<Element, Element>,
) -> Result<Option<RelativeMatching>> {
    same_group(a, b)?;
    let (ma, mb) = (a.multiplicities(), b.multiplicities());
    if f.keys().copied().collect::<Vec<_>>() != a.support() {
        return Err(Error::Precondition("f must be defined exactly on Supp(a)".into()));
    }
    let mut image: Vec<Element> = f.values().copied().collect();
    image.sort_unstable();
    image.dedup();
    if image != b.support() {
        return Err(Error::Precondition("f must be a bijection onto Supp(b)".into()));
    }
    for (s, t) in f {
        if ma[s] != mb[t] {
            return Err(Error::Precondition(format!(
                "{} occurs {} times in a but {} occurs {} times in b",
                a.group.label(*s),
                ma[s],
                a.group.label(*t),
                mb[t]
            )));
        }
    }
    let mut positions: HashMap<Element, Vec<usize>> = HashMap::new();
    for (k, &y) in b.entries.iter().enumerate() {
        positions.entry(y).or_default().push(k);
    }
    let mut slots: HashMap<Element, std::vec::IntoIter<usize>> =
        positions.into_iter().map(|(y, ks)| (y, ks.into_iter())).collect();
    let sigma: Vec<usize> = a
        .entries
        .iter()
        .map(|x| slots.get_mut(&f[x]).and_then(Iterator::next).expect("multiplicities agree"))
        .collect();
    let trivial = a.group.trivial_subgroup();
    Ok(is_relative_matching(a, b, &trivial, &sigma)?.then_some(RelativeMatching { sigma, normal: trivial }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(g: &Group, xs: &[usize]) -> TupleOfElements {
        TupleOfElements::new(g.clone(), xs.to_vec()).unwrap()
    }

    #[test]
    fn relative_examples() {
        let z6 = Group::cyclic(6).unwrap();
        let n = z6.subgroup(&[0, 3]).unwrap();
        let m = find_relative_matching(&tuple(&z6, &[1]), &tuple(&z6, &[1]), &n).unwrap().unwrap();
        assert_eq!(m.sigma, vec![0]);
        assert!(find_relative_matching(&tuple(&z6, &[1, 2]), &tuple(&z6, &[1, 1]), &n).unwrap().is_none());
    }

    #[test]
    fn non_normal_subgroup_is_rejected() {
        let s3 = Group::symmetric3();
        let h = s3.subgroup(&[0, 1]).unwrap();
        let t = tuple(&s3, &[2]);
        assert_eq!(find_relative_matching(&t, &t, &h).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn push_forward_examples() {
        let h = Homomorphism::reduction(6, 3).unwrap();
        let z6 = h.source().clone();
        assert_eq!(push_forward(&h, &tuple(&z6, &[1, 2, 4])).unwrap().entries(), &[1, 2, 1]);
        let h = Homomorphism::reduction(4, 2).unwrap();
        assert_eq!(push_forward(&h, &tuple(h.source(), &[1, 3])).unwrap().entries(), &[1, 1]);
        let id = Homomorphism::identity(&z6).unwrap();
        assert_eq!(push_forward(&id, &tuple(&z6, &[5, 0])).unwrap().entries(), &[5, 0]);
    }

    #[test]
    fn transfer_examples() {
        let h = Homomorphism::reduction(6, 3).unwrap();
        let z6 = h.source().clone();
        let t = verify_hom_transfer(&h, &tuple(&z6, &[1]), &tuple(&z6, &[1])).unwrap();
        assert!(t.holds() && t.image.is_some());
        let t = verify_hom_transfer(&h, &tuple(&z6, &[1, 2]), &tuple(&z6, &[1, 1])).unwrap();
        assert!(t.holds() && t.image.is_none());
    }

    #[test]
    fn lift_examples() {
        let z9 = Group::cyclic(9).unwrap();
        let f: BTreeMap<_, _> = [(1, 3), (2, 5)].into_iter().collect();
        let m = lift_support_matching(&tuple(&z9, &[1, 1, 2]), &tuple(&z9, &[3, 3, 5]), &f).unwrap().unwrap();
        assert_eq!(m.sigma, vec![0, 1, 2]);

        let f: BTreeMap<_, _> = [(1, 3)].into_iter().collect();
        assert!(lift_support_matching(&tuple(&z9, &[1, 1]), &tuple(&z9, &[3, 5]), &f).is_err());

        let f: BTreeMap<_, _> = [(4, 7)].into_iter().collect();
        let m = lift_support_matching(&tuple(&z9, &[4]), &tuple(&z9, &[7]), &f).unwrap().unwrap();
        assert_eq!(m.sigma, vec![0]);
    }

    #[test]
    fn lift_follows_occurrence_order() {
        let z9 = Group::cyclic(9).unwrap();
        let f: BTreeMap<_, _> = [(1, 3), (2, 5)].into_iter().collect();
        let m = lift_support_matching(&tuple(&z9, &[2, 1, 1]), &tuple(&z9, &[3, 5, 3]), &f).unwrap().unwrap();
        assert_eq!(m.sigma, vec![1, 0, 2]);
    }
}
