//! Sufficient conditions for matchability and the coset obstruction.
//!
//! If `A` contains no left or right coset of a proper nontrivial finite
//! subgroup, every `B` with `|B| = |A|` and `e ∉ B` can be matched to `A`.
//! In an abelian group it is enough that `A` contains no coset of `⟨b⟩` for
//! each `b ∈ B`. The converse obstruction is `A = xH`,
//! `B = (H \ {e}) ∪ {g}` with `g ∉ H`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{Element, Group, Side, Subgroup, MAX_ENUMERATION_ORDER};
use crate::matching::SubsetPair;

/// A coset `xH` or `Hx` contained in a set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetWitness {
    pub subgroup: Subgroup,
    pub translate: Element,
    pub side: Side,
}

impl CosetWitness {
    pub fn to_json(&self, g: &Group) -> Value {
        json!({
            "subgroup": self.subgroup.elements().iter().map(|&x| g.element_value(x)).collect::<Vec<_>>(),
            "x": g.element_value(self.translate),
            "side": self.side,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetFreeness {
    pub coset_free: bool,
    pub witness: Option<CosetWitness>,
}

/// `b` and the coset of `⟨b⟩` found inside `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicCosetWitness {
    pub b: Element,
    pub coset: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicCosetCondition {
    pub holds: bool,
    pub witness: Option<CyclicCosetWitness>,
}

fn sorted_set(a: &[Element]) -> Vec<Element> {
    let mut s = a.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

fn contained(coset: &[Element], set: &[Element]) -> bool {
    coset.iter().all(|x| set.binary_search(x).is_ok())
}

/// Whether `A` avoids every coset of every proper nontrivial subgroup.
///
/// Subgroups are scanned in enumeration order (by order, then
/// lexicographically), translates in increasing element order, left before
/// right, so the first witness is the one with the smallest subgroup.
pub fn is_coset_free(g: &Group, a: &[Element]) -> Result<CosetFreeness> {
    if a.is_empty() {
        return Err(Error::Empty);
    }
    for &x in a {
        g.check(x)?;
    }
    let n = match g.order() {
        crate::group::Order::Finite(n) => n,
        // a free abelian window has no nontrivial finite subgroups
        crate::group::Order::InfiniteWindow => return Ok(CosetFreeness { coset_free: true, witness: None }),
    };
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::GroupTooLarge { order: n, limit: MAX_ENUMERATION_ORDER });
    }
    let set = sorted_set(a);
    let sides: &[Side] = if g.is_abelian() { &[Side::Left] } else { &[Side::Left, Side::Right] };
    for h in g.enumerate_subgroups()? {
        if h.is_trivial() || h.order() == n || h.order() > set.len() {
            continue;
        }
        // every coset xH or Hx inside A has x ∈ A, since e ∈ H
        for &x in &set {
            for &side in sides {
                if contained(&g.coset(x, &h, side)?, &set) {
                    return Ok(CosetFreeness {
                        coset_free: false,
                        witness: Some(CosetWitness { subgroup: h, translate: x, side }),
                    });
                }
            }
        }
    }
    Ok(CosetFreeness { coset_free: true, witness: None })
}

/// `A = xH`, `B = (H \ {e}) ∪ {outside}`: a pair with no matching.
pub fn counterexample_pair(g: &Group, h: &Subgroup, x: Element, outside: Element) -> Result<SubsetPair> {
    g.check(x)?;
    g.check(outside)?;
    let n = g.finite_order().ok();
    if h.is_trivial() || Some(h.order()) == n {
        return Err(Error::Precondition("H must be nontrivial and proper".into()));
    }
    if h.contains(outside) {
        return Err(Error::Precondition(format!("{} lies in H", g.label(outside))));
    }
    let a = g.coset(x, h, Side::Left)?;
    let e = g.identity();
    let b: Vec<Element> = h.elements().iter().copied().filter(|&y| y != e).chain(std::iter::once(outside)).collect();
    SubsetPair::new(g.clone(), a, b)
}

/// For every `b ∈ B`, `A` contains no coset of `⟨b⟩`.
pub fn cyclic_coset_condition(g: &Group, a: &[Element], b: &[Element]) -> Result<CyclicCosetCondition> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    g.finite_order()?;
    if a.len() != b.len() {
        return Err(Error::SizeMismatch { left: a.len(), right: b.len() });
    }
    let set = sorted_set(a);
    for &y in b {
        let h = g.generated_subgroup(&[y])?;
        if h.order() > set.len() {
            continue;
        }
        for &x in &set {
            let coset = g.coset(x, &h, Side::Left)?;
            if contained(&coset, &set) {
                return Ok(CyclicCosetCondition { holds: false, witness: Some(CyclicCosetWitness { b: y, coset }) });
            }
        }
    }
    Ok(CyclicCosetCondition { holds: true, witness: None })
}
