//! Matchings between equal-size subsets of a group.
//!
//! A matching from `A` to `B` is a bijection `f` with `a·f(a) ∉ A` for every
//! `a`. Matchings are stored as index permutations `σ` sending the position
//! of `a` in `A` to a position in `B`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::bipartite::{self, Outcome};
use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupSpec};

/// Largest `|A|` accepted by the enumeration-based operations.
pub const ENUMERATION_LIMIT: usize = 20;

/// JSON form of a pair: `{"group": {...}, "A": [...], "B": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub group: GroupSpec,
    #[serde(rename = "A")]
    pub a: Vec<Value>,
    #[serde(rename = "B")]
    pub b: Vec<Value>,
}

#[derive(Clone, Debug)]
pub struct SubsetPair {
    group: Group,
    a: Vec<Element>,
    b: Vec<Element>,
    /// `products[i][j] = A[i]·B[j]`
    products: Vec<Vec<Element>>,
    /// admissible B-indices per A-index, ascending
    adjacency: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    sigma: Vec<usize>,
}

impl Matching {
    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.sigma.len()];
        for (i, &j) in self.sigma.iter().enumerate() {
            inv[j] = i;
        }
        inv
    }
}

/// Counts of product values `a·f(a)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiplicity(BTreeMap<Element, usize>);

impl Multiplicity {
    pub fn get(&self, x: Element) -> usize {
        self.0.get(&x).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = Element> + '_ {
        self.0.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Element, usize)> + '_ {
        self.0.iter().map(|(&x, &c)| (x, c))
    }

    pub fn to_json(&self, g: &Group) -> Value {
        let map: Map<String, Value> = self.0.iter().map(|(&x, &c)| (g.label(x), Value::from(c))).collect();
        Value::Object(map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallViolator {
    /// A-indices.
    pub subset: Vec<usize>,
    /// B-indices adjacent to some member of `subset`.
    pub neighbourhood: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Matchability {
    Matched(Matching),
    Blocked(HallViolator),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub matchings: Vec<Matching>,
    pub truncated: bool,
}

/// Matchings grouped by multiplicity function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub matchings: usize,
    /// Number of distinct multiplicity functions.
    pub classes: usize,
    /// Matchings alone in their class, in lexicographic order.
    pub acyclic: Vec<Matching>,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AcyclicSearch {
    Found {
        matching: Matching,
        examined: usize,
    },
    /// Every matching was enumerated and none is acyclic.
    VerifiedAbsent {
        examined: usize,
    },
    /// The cap was reached before the search finished.
    Inconclusive {
        examined: usize,
    },
}

fn check_distinct(g: &Group, xs: &[Element]) -> Result<()> {
    let mut seen = HashSet::new();
    for &x in xs {
        g.check(x)?;
        if !seen.insert(x) {
            return Err(Error::DuplicateElement(g.label(x)));
        }
    }
    Ok(())
}

impl SubsetPair {
    pub fn new(group: Group, a: Vec<Element>, b: Vec<Element>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Empty);
        }
        if a.len() != b.len() {
            return Err(Error::SizeMismatch { left: a.len(), right: b.len() });
        }
        check_distinct(&group, &a)?;
        check_distinct(&group, &b)?;
        if b.contains(&group.identity()) {
            return Err(Error::IdentityInB);
        }
        let in_a: HashSet<Element> = a.iter().copied().collect();
        let products = a
            .iter()
            .map(|&x| b.iter().map(|&y| group.op(x, y)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let adjacency =
            products.iter().map(|row| (0..row.len()).filter(|&j| !in_a.contains(&row[j])).collect()).collect();
        Ok(SubsetPair { group, a, b, products, adjacency })
    }

    pub fn from_spec(spec: &PairSpec) -> Result<Self> {
        let g = Group::from_spec(&spec.group)?;
        let a = spec.a.iter().map(|v| g.parse_element(v)).collect::<Result<Vec<_>>>()?;
        let b = spec.b.iter().map(|v| g.parse_element(v)).collect::<Result<Vec<_>>>()?;
        SubsetPair::new(g, a, b)
    }

    pub fn spec(&self) -> PairSpec {
        PairSpec {
            group: self.group.spec(),
            a: self.a.iter().map(|&x| self.group.element_value(x)).collect(),
            b: self.b.iter().map(|&x| self.group.element_value(x)).collect(),
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn a(&self) -> &[Element] {
        &self.a
    }

    pub fn b(&self) -> &[Element] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn product(&self, i: usize, j: usize) -> Element {
        self.products[i][j]
    }

    /// For each A-index, the B-indices `j` with `A[i]·B[j] ∉ A`.
    pub fn compatibility_graph(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn matching(&self, sigma: Vec<usize>) -> Result<Matching> {
        let n = self.len();
        if sigma.len() != n {
            return Err(Error::SizeMismatch { left: sigma.len(), right: n });
        }
        let mut used = vec![false; n];
        for (i, &j) in sigma.iter().enumerate() {
            if j >= n || std::mem::replace(&mut used[j], true) {
                return Err(Error::Precondition("sigma is not a permutation".into()));
            }
            if self.adjacency[i].binary_search(&j).is_err() {
                return Err(Error::Precondition(format!(
                    "{}·{} lies in A",
                    self.group.label(self.a[i]),
                    self.group.label(self.b[j])
                )));
            }
        }
        Ok(Matching { sigma })
    }

    pub fn matchability(&self) -> Matchability {
        match bipartite::perfect_matching(&self.adjacency, self.len()) {
            Outcome::Perfect(sigma) => Matchability::Matched(Matching { sigma }),
            Outcome::Violator { left, right } => {
                Matchability::Blocked(HallViolator { subset: left, neighbourhood: right })
            }
        }
    }

    pub fn find_matching(&self) -> Option<Matching> {
        match self.matchability() {
            Matchability::Matched(m) => Some(m),
            Matchability::Blocked(_) => None,
        }
    }

    pub fn hall_violator(&self) -> Result<HallViolator> {
        match self.matchability() {
            Matchability::Matched(_) => Err(Error::MatchingExists),
            Matchability::Blocked(v) => Ok(v),
        }
    }

    /// Checks `|S| > |N(S)|` directly against the compatibility graph.
    pub fn verifies_violator(&self, v: &HallViolator) -> bool {
        let nbhd = bipartite::neighbourhood(&self.adjacency, &v.subset);
        nbhd == v.neighbourhood && v.subset.len() > nbhd.len()
    }

    pub fn products_of(&self, m: &Matching) -> Vec<Element> {
        m.sigma.iter().enumerate().map(|(i, &j)| self.products[i][j]).collect()
    }

    pub fn multiplicity(&self, m: &Matching) -> Multiplicity {
        let mut counts = BTreeMap::new();
        for x in self.products_of(m) {
            *counts.entry(x).or_insert(0) += 1;
        }
        Multiplicity(counts)
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.len() > ENUMERATION_LIMIT {
            return Err(Error::TooLarge { size: self.len(), limit: ENUMERATION_LIMIT });
        }
        Ok(())
    }

    /// Visits all matchings in lexicographic order of `σ`; returns `Break` if the visitor stopped.
    fn walk(&self, visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        fn go(
            pair: &SubsetPair,
            i: usize,
            used: &mut [bool],
            sigma: &mut Vec<usize>,
            visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
        ) -> ControlFlow<()> {
            if i == pair.len() {
                return visit(sigma);
            }
            for &j in &pair.adjacency[i] {
                if used[j] {
                    continue;
                }
                used[j] = true;
                sigma.push(j);
                let flow = go(pair, i + 1, used, sigma, visit);
                sigma.pop();
                used[j] = false;
                flow?;
            }
            ControlFlow::Continue(())
        }
        let mut used = vec![false; self.len()];
        go(self, 0, &mut used, &mut Vec::with_capacity(self.len()), visit)
    }

    /// All matchings in lexicographic order, truncated after `cap`.
    pub fn enumerate_matchings(&self, cap: usize) -> Result<Enumeration> {
        self.check_enumerable()?;
        if cap == 0 {
            return Err(Error::Precondition("cap must be positive".into()));
        }
        let mut matchings = Vec::new();
        let mut truncated = false;
        let _ = self.walk(&mut |sigma| {
            if matchings.len() == cap {
                truncated = true;
                return ControlFlow::Break(());
            }
            matchings.push(Matching { sigma: sigma.to_vec() });
            ControlFlow::Continue(())
        });
        Ok(Enumeration { matchings, truncated })
    }

    /// Number of matchings with the same multiplicity function as `m`, stopping at `limit`.
    fn count_with_multiplicity(&self, m: &Multiplicity, limit: usize) -> usize {
        let ids: HashMap<Element, usize> = m.support().enumerate().map(|(k, x)| (x, k)).collect();
        let mut remaining: Vec<usize> = m.iter().map(|(_, c)| c).collect();
        let n = self.len();
        // per A-index, admissible (B-index, value-id) pairs
        let options: Vec<Vec<(usize, usize)>> = (0..n)
            .map(|i| self.adjacency[i].iter().filter_map(|&j| ids.get(&self.products[i][j]).map(|&k| (j, k))).collect())
            .collect();

        fn go(
            i: usize,
            options: &[Vec<(usize, usize)>],
            used: &mut [bool],
            remaining: &mut [usize],
            found: &mut usize,
            limit: usize,
        ) {
            if i == options.len() {
                *found += 1;
                return;
            }
            for &(j, k) in &options[i] {
                if used[j] || remaining[k] == 0 {
                    continue;
                }
                used[j] = true;
                remaining[k] -= 1;
                go(i + 1, options, used, remaining, found, limit);
                remaining[k] += 1;
                used[j] = false;
                if *found >= limit {
                    return;
                }
            }
        }
        let mut found = 0;
        go(0, &options, &mut vec![false; n], &mut remaining, &mut found, limit);
        found
    }

    /// A matching is acyclic when no other matching shares its multiplicity function.
    pub fn is_acyclic(&self, m: &Matching) -> Result<bool> {
        self.check_enumerable()?;
        Ok(self.count_with_multiplicity(&self.multiplicity(m), 2) == 1)
    }

    /// First acyclic matching in enumeration order, examining at most `cap` matchings.
    pub fn find_acyclic_matching(&self, cap: usize) -> Result<AcyclicSearch> {
        self.check_enumerable()?;
        if cap == 0 {
            return Err(Error::Precondition("cap must be positive".into()));
        }
        let mut examined = 0;
        let mut rejected: HashSet<Multiplicity> = HashSet::new();
        let mut result = None;
        let flow = self.walk(&mut |sigma| {
            if examined == cap {
                result = Some(AcyclicSearch::Inconclusive { examined });
                return ControlFlow::Break(());
            }
            examined += 1;
            let m = Matching { sigma: sigma.to_vec() };
            let mult = self.multiplicity(&m);
            if rejected.contains(&mult) {
                return ControlFlow::Continue(());
            }
            if self.count_with_multiplicity(&mult, 2) == 1 {
                result = Some(AcyclicSearch::Found { matching: m, examined });
                return ControlFlow::Break(());
            }
            rejected.insert(mult);
            ControlFlow::Continue(())
        });
        Ok(match (flow, result) {
            (_, Some(r)) => r,
            (_, None) => AcyclicSearch::VerifiedAbsent { examined },
        })
    }

    /// Enumerates every matching and groups them by multiplicity function.
    /// Stops after `cap` matchings with `truncated` set.
    pub fn multiplicity_census(&self, cap: usize) -> Result<Census> {
        self.check_enumerable()?;
        let mut classes: HashMap<Multiplicity, (usize, Matching)> = HashMap::new();
        let mut matchings = 0;
        let mut truncated = false;
        let _ = self.walk(&mut |sigma| {
            if matchings == cap {
                truncated = true;
                return ControlFlow::Break(());
            }
            matchings += 1;
            let m = Matching { sigma: sigma.to_vec() };
            classes.entry(self.multiplicity(&m)).or_insert((0, m)).0 += 1;
            ControlFlow::Continue(())
        });
        let mut acyclic: Vec<Matching> =
            classes.values().filter(|(count, _)| *count == 1).map(|(_, m)| m.clone()).collect();
        acyclic.sort_by(|x, y| x.sigma.cmp(&y.sigma));
        Ok(Census { matchings, classes: classes.len(), acyclic, truncated })
    }

    /// `{"sigma": [...], "products": [...], "multiplicity": {...}}`
    pub fn matching_json(&self, m: &Matching) -> Value {
        json!({
            "sigma": m.sigma,
            "products": self.products_of(m).iter().map(|&x| self.group.element_value(x)).collect::<Vec<_>>(),
            "multiplicity": self.multiplicity(m).to_json(&self.group),
        })
    }

    pub fn elements_json(&self, xs: &[Element]) -> Value {
        Value::from(xs.iter().map(|&x| self.group.element_value(x)).collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(n: usize, a: &[usize], b: &[usize]) -> SubsetPair {
        SubsetPair::new(Group::cyclic(n).unwrap(), a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        let z6 = Group::cyclic(6).unwrap();
        assert_eq!(
            SubsetPair::new(z6.clone(), vec![1, 2], vec![3]).unwrap_err(),
            Error::SizeMismatch { left: 2, right: 1 }
        );
        assert_eq!(SubsetPair::new(z6.clone(), vec![1], vec![0]).unwrap_err(), Error::IdentityInB);
        assert!(matches!(SubsetPair::new(z6.clone(), vec![1, 1], vec![2, 3]), Err(Error::DuplicateElement(_))));
        assert_eq!(SubsetPair::new(z6, vec![], vec![]).unwrap_err(), Error::Empty);
    }

    #[test]
    fn compatibility_graph_examples() {
        let p = pair(7, &[1, 2, 4], &[1, 2, 4]);
        assert_eq!(p.compatibility_graph(), &[vec![1, 2], vec![0, 2], vec![0, 1]]);
        let p = pair(6, &[1, 4], &[3, 2]);
        assert_eq!(p.compatibility_graph(), &[vec![1], vec![1]]);
        let p = pair(5, &[1], &[3]);
        assert_eq!(p.compatibility_graph(), &[vec![0]]);
    }

    #[test]
    fn find_matching_examples() {
        assert_eq!(pair(5, &[1, 2], &[1, 2]).find_matching().unwrap().sigma(), &[1, 0]);
        assert!(pair(6, &[1, 4], &[3, 2]).find_matching().is_none());
        let p = pair(7, &[1, 2, 4], &[1, 2, 4]);
        let m = p.find_matching().unwrap();
        assert!(m.sigma().iter().enumerate().all(|(i, &j)| i != j));
    }

    #[test]
    fn hall_violator_examples() {
        let p = pair(6, &[1, 4], &[3, 2]);
        let v = p.hall_violator().unwrap();
        assert_eq!(v.subset, vec![0, 1]);
        assert_eq!(v.neighbourhood, vec![1]);
        assert!(p.verifies_violator(&v));

        let p = pair(4, &[0, 2], &[2, 1]);
        assert_eq!(p.hall_violator().unwrap().subset, vec![0, 1]);

        let p = pair(4, &[1], &[2]);
        // 1 + 2 = 3 ∉ A, so a matching exists
        assert_eq!(p.hall_violator(), Err(Error::MatchingExists));
    }

    #[test]
    fn singleton_pairs_always_match() {
        // with |A| = 1 the only forbidden partner is the identity, which B excludes;
        // the isolated-vertex case is covered in the bipartite tests
        let g = Group::free_abelian(1, 5).unwrap();
        let a = g.from_coordinates(&[0]).unwrap();
        let b = g.from_coordinates(&[1]).unwrap();
        let p = SubsetPair::new(g, vec![a], vec![b]).unwrap();
        assert_eq!(p.find_matching().unwrap().sigma(), &[0]);
    }

    #[test]
    fn multiplicity_examples() {
        let p = pair(7, &[1, 2, 4], &[1, 2, 4]);
        let m = p.matching(vec![1, 2, 0]).unwrap();
        let expected: Multiplicity = Multiplicity([(3, 1), (6, 1), (5, 1)].into_iter().collect());
        assert_eq!(p.multiplicity(&m), expected);
        let m2 = p.matching(vec![2, 0, 1]).unwrap();
        assert_eq!(p.multiplicity(&m2), expected);
        let single = pair(5, &[1], &[3]);
        let m = single.find_matching().unwrap();
        assert_eq!(single.multiplicity(&m).total(), 1);
    }

    #[test]
    fn enumeration_examples() {
        let e = pair(7, &[1, 2, 4], &[1, 2, 4]).enumerate_matchings(100).unwrap();
        assert_eq!(e.matchings.len(), 2);
        assert!(!e.truncated);
        assert_eq!(e.matchings[0].sigma(), &[1, 2, 0]);
        assert_eq!(e.matchings[1].sigma(), &[2, 0, 1]);
        assert!(pair(6, &[1, 4], &[3, 2]).enumerate_matchings(10).unwrap().matchings.is_empty());
        assert_eq!(pair(5, &[1], &[3]).enumerate_matchings(10).unwrap().matchings.len(), 1);
        let t = pair(7, &[1, 2, 4], &[1, 2, 4]).enumerate_matchings(1).unwrap();
        assert!(t.truncated);
        assert_eq!(t.matchings.len(), 1);
    }

    #[test]
    fn acyclicity_examples() {
        let p = pair(7, &[1, 2, 4], &[1, 2, 4]);
        for m in p.enumerate_matchings(10).unwrap().matchings {
            assert!(!p.is_acyclic(&m).unwrap());
        }
        assert_eq!(p.find_acyclic_matching(100).unwrap(), AcyclicSearch::VerifiedAbsent { examined: 2 });
        assert_eq!(p.find_acyclic_matching(1).unwrap(), AcyclicSearch::Inconclusive { examined: 1 });

        // Z/5, A = B = {1,2}: both bijections; only σ = (1↦2, 2↦1) is a matching
        let p = pair(5, &[1, 2], &[1, 2]);
        let all = p.enumerate_matchings(10).unwrap().matchings;
        assert_eq!(all.len(), 1);
        assert!(p.is_acyclic(&all[0]).unwrap());
        let mult = p.multiplicity(&all[0]);
        assert_eq!(mult.get(3), 2);
    }

    #[test]
    fn census_groups_by_multiplicity() {
        let c = pair(7, &[1, 2, 4], &[1, 2, 4]).multiplicity_census(100).unwrap();
        assert_eq!((c.matchings, c.classes, c.acyclic.len(), c.truncated), (2, 1, 0, false));
        let c = pair(5, &[1, 2], &[1, 2]).multiplicity_census(100).unwrap();
        assert_eq!(c.acyclic.len(), 1);
        assert!(pair(7, &[1, 2, 4], &[1, 2, 4]).multiplicity_census(1).unwrap().truncated);
    }

    #[test]
    fn size_limits() {
        let g = Group::cyclic(64).unwrap();
        let p = SubsetPair::new(g, (1..=21).collect(), (22..=42).collect()).unwrap();
        assert!(p.find_matching().is_some());
        assert_eq!(p.enumerate_matchings(1).unwrap_err(), Error::TooLarge { size: 21, limit: 20 });
    }

    #[test]
    fn window_overflow_is_an_error() {
        let g = Group::free_abelian(1, 2).unwrap();
        let a = g.from_coordinates(&[2]).unwrap();
        let b = g.from_coordinates(&[1]).unwrap();
        assert_eq!(SubsetPair::new(g, vec![a], vec![b]).unwrap_err(), Error::WindowOverflow { window: 2 });
    }

    #[test]
    fn json_shape() {
        let p = pair(7, &[1, 2, 4], &[1, 2, 4]);
        let m = p.matching(vec![1, 2, 0]).unwrap();
        assert_eq!(
            p.matching_json(&m),
            json!({"sigma": [1, 2, 0], "products": [3, 6, 5], "multiplicity": {"3": 1, "5": 1, "6": 1}})
        );
    }
}
