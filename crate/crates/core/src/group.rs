//! Finite groups and bounded windows of free abelian groups.
//!
//! Every element is a canonical integer index. Cyclic groups use residues,
//! direct products of cyclic groups use a mixed-radix code with the first
//! factor most significant (so index order is lexicographic tuple order),
//! explicit tables use row indices, and a free abelian window of rank `k`
//! and radius `w` encodes coordinates in `[-w, w]^k` the same way.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Element = usize;

/// Largest group order accepted by subgroup enumeration.
pub const MAX_ENUMERATION_ORDER: usize = 512;

/// Tables up to this order are checked for associativity on every triple.
const EXHAUSTIVE_TABLE_CHECK: usize = 64;
const SAMPLED_TRIPLES: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(usize),
    InfiniteWindow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Table {
    labels: Vec<String>,
    mul: Vec<Element>,
    identity: Element,
    inverse: Vec<Element>,
    abelian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Cyclic(usize),
    Product(Vec<usize>),
    Table(Arc<Table>),
    FreeAbelian { rank: usize, window: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    repr: Repr,
}

/// JSON description of a group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Product { factors: Vec<usize> },
    Table { elements: Vec<Value>, table: Vec<Vec<Value>> },
    FreeAbelian { rank: usize, window: i64 },
}

/// A subgroup, stored as its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<Element>,
}

impl Subgroup {
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }
}

fn label_of(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Group {
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("cyclic group of order 0".into()));
        }
        Ok(Group { repr: Repr::Cyclic(n) })
    }

    pub fn product(factors: &[usize]) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::Precondition("product factors must be positive".into()));
        }
        factors
            .iter()
            .try_fold(1usize, |acc, &f| acc.checked_mul(f))
            .ok_or_else(|| Error::Precondition("product order overflows".into()))?;
        Ok(Group { repr: Repr::Product(factors.to_vec()) })
    }

    pub fn free_abelian(rank: usize, window: i64) -> Result<Self> {
        if rank == 0 || window < 0 {
            return Err(Error::Precondition("free abelian group needs rank >= 1 and window >= 0".into()));
        }
        let side = 2 * window as u128 + 1;
        let mut total: u128 = 1;
        for _ in 0..rank {
            total = total
                .checked_mul(side)
                .filter(|&t| t <= usize::MAX as u128)
                .ok_or_else(|| Error::Precondition("free abelian window too large to index".into()))?;
        }
        Ok(Group { repr: Repr::FreeAbelian { rank, window } })
    }

    /// Builds a group from an explicit multiplication table, `table[x][y] = x*y`.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<Element>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidTable("no elements".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidTable(format!("table must be {n}x{n}")));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::InvalidTable(format!("duplicate label {l}")));
            }
        }
        let mul: Vec<Element> = table.iter().flatten().copied().collect();
        if let Some(&bad) = mul.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidTable(format!("entry {bad} out of range")));
        }
        let at = |x: usize, y: usize| mul[x * n + y];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidTable("no identity".into()))?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {} has no inverse", labels[x])))?;
        }
        let assoc = |x: usize, y: usize, z: usize| at(at(x, y), z) == at(x, at(y, z));
        if n <= EXHAUSTIVE_TABLE_CHECK {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if !assoc(x, y, z) {
                            return Err(Error::InvalidTable(format!(
                                "not associative on ({}, {}, {})",
                                labels[x], labels[y], labels[z]
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..SAMPLED_TRIPLES {
                let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(x, y, z) {
                    return Err(Error::InvalidTable("not associative".into()));
                }
            }
        }
        let abelian = (0..n).all(|x| (0..n).all(|y| at(x, y) == at(y, x)));
        Ok(Group { repr: Repr::Table(Arc::new(Table { labels, mul, identity, inverse, abelian })) })
    }

    /// The symmetric group on three letters, with elements labelled in cycle notation.
    pub fn symmetric3() -> Self {
        // permutations of {1,2,3} as images of (1,2,3)
        let perms: [([usize; 3], &str); 6] = [
            ([1, 2, 3], "e"),
            ([2, 1, 3], "(12)"),
            ([3, 2, 1], "(13)"),
            ([1, 3, 2], "(23)"),
            ([2, 3, 1], "(123)"),
            ([3, 1, 2], "(132)"),
        ];
        let index = |p: [usize; 3]| perms.iter().position(|(q, _)| *q == p).unwrap();
        // x*y means apply y first, then x
        let table = perms
            .iter()
            .map(|(x, _)| perms.iter().map(|(y, _)| index([x[y[0] - 1], x[y[1] - 1], x[y[2] - 1]])).collect())
            .collect();
        let labels = perms.iter().map(|(_, l)| l.to_string()).collect();
        Group::from_table(labels, table).expect("S3 table is a group")
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        match spec {
            GroupSpec::Cyclic { n } => Group::cyclic(*n),
            GroupSpec::Product { factors } => Group::product(factors),
            GroupSpec::FreeAbelian { rank, window } => Group::free_abelian(*rank, *window),
            GroupSpec::Table { elements, table } => {
                let labels: Vec<String> = elements.iter().map(label_of).collect();
                let lookup = |v: &Value| -> Result<Element> {
                    match v {
                        Value::Number(num) if num.is_u64() => {
                            let i = num.as_u64().unwrap() as usize;
                            if i < labels.len() {
                                Ok(i)
                            } else {
                                Err(Error::InvalidTable(format!("index {i} out of range")))
                            }
                        }
                        other => {
                            let l = label_of(other);
                            labels
                                .iter()
                                .position(|x| *x == l)
                                .ok_or_else(|| Error::InvalidTable(format!("unknown label {l}")))
                        }
                    }
                };
                let rows = table
                    .iter()
                    .map(|row| row.iter().map(lookup).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Group::from_table(labels, rows)
            }
        }
    }

    pub fn spec(&self) -> GroupSpec {
        match &self.repr {
            Repr::Cyclic(n) => GroupSpec::Cyclic { n: *n },
            Repr::Product(f) => GroupSpec::Product { factors: f.clone() },
            Repr::FreeAbelian { rank, window } => GroupSpec::FreeAbelian { rank: *rank, window: *window },
            Repr::Table(t) => {
                let n = t.labels.len();
                GroupSpec::Table {
                    elements: t.labels.iter().map(|l| Value::String(l.clone())).collect(),
                    table: (0..n)
                        .map(|x| (0..n).map(|y| Value::String(t.labels[t.mul[x * n + y]].clone())).collect())
                        .collect(),
                }
            }
        }
    }

    pub fn order(&self) -> Order {
        match &self.repr {
            Repr::Cyclic(n) => Order::Finite(*n),
            Repr::Product(f) => Order::Finite(f.iter().product()),
            Repr::Table(t) => Order::Finite(t.labels.len()),
            Repr::FreeAbelian { .. } => Order::InfiniteWindow,
        }
    }

    pub fn finite_order(&self) -> Result<usize> {
        match self.order() {
            Order::Finite(n) => Ok(n),
            Order::InfiniteWindow => Err(Error::InfiniteGroup),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.order(), Order::Finite(_))
    }

    /// Number of valid indices: the group order, or the number of points in the window.
    fn index_bound(&self) -> usize {
        match &self.repr {
            Repr::FreeAbelian { rank, window } => (2 * *window as usize + 1).pow(*rank as u32),
            _ => self.finite_order().unwrap(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match &self.repr {
            Repr::Table(t) => t.abelian,
            _ => true,
        }
    }

    pub fn identity(&self) -> Element {
        match &self.repr {
            Repr::Table(t) => t.identity,
            Repr::FreeAbelian { rank, window } => self.encode_free(&vec![0; *rank], *window),
            _ => 0,
        }
    }

    pub fn is_valid(&self, x: Element) -> bool {
        x < self.index_bound()
    }

    pub fn check(&self, x: Element) -> Result<()> {
        if self.is_valid(x) {
            Ok(())
        } else {
            Err(Error::InvalidElement(x.to_string()))
        }
    }

    /// Indices of all elements of a finite group.
    pub fn elements(&self) -> Result<std::ops::Range<Element>> {
        Ok(0..self.finite_order()?)
    }

    fn digits(x: Element, radices: &[usize]) -> Vec<usize> {
        let mut out = vec![0; radices.len()];
        let mut rest = x;
        for (slot, &r) in out.iter_mut().zip(radices).rev() {
            *slot = rest % r;
            rest /= r;
        }
        out
    }

    fn undigits(digits: &[usize], radices: &[usize]) -> Element {
        digits.iter().zip(radices).fold(0, |acc, (&d, &r)| acc * r + d)
    }

    /// Coordinates of a free-abelian element.
    pub fn coordinates(&self, x: Element) -> Option<Vec<i64>> {
        match &self.repr {
            Repr::FreeAbelian { rank, window } => {
                let side = 2 * *window as usize + 1;
                let digits = Self::digits(x, &vec![side; *rank]);
                Some(digits.into_iter().map(|d| d as i64 - window).collect())
            }
            _ => None,
        }
    }

    fn encode_free(&self, coords: &[i64], window: i64) -> Element {
        let side = 2 * window as usize + 1;
        coords.iter().fold(0, |acc, &c| acc * side + (c + window) as usize)
    }

    /// Encodes free-abelian coordinates, failing when they leave the window.
    pub fn from_coordinates(&self, coords: &[i64]) -> Result<Element> {
        match &self.repr {
            Repr::FreeAbelian { rank, window } => {
                if coords.len() != *rank {
                    return Err(Error::InvalidElement(format!("{coords:?}")));
                }
                if coords.iter().any(|c| c.abs() > *window) {
                    return Err(Error::WindowOverflow { window: *window });
                }
                Ok(self.encode_free(coords, *window))
            }
            Repr::Product(f) => {
                if coords.len() != f.len() || coords.iter().zip(f).any(|(&c, &r)| c < 0 || c as usize >= r) {
                    return Err(Error::InvalidElement(format!("{coords:?}")));
                }
                let d: Vec<usize> = coords.iter().map(|&c| c as usize).collect();
                Ok(Self::undigits(&d, f))
            }
            _ => Err(Error::InvalidElement(format!("{coords:?}"))),
        }
    }

    /// Group product (sum, for the abelian kinds).
    pub fn op(&self, x: Element, y: Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(match &self.repr {
            Repr::Cyclic(n) => (x + y) % n,
            Repr::Product(f) => {
                let (dx, dy) = (Self::digits(x, f), Self::digits(y, f));
                let sum: Vec<usize> = dx.iter().zip(&dy).zip(f).map(|((a, b), r)| (a + b) % r).collect();
                Self::undigits(&sum, f)
            }
            Repr::Table(t) => t.mul[x * t.labels.len() + y],
            Repr::FreeAbelian { window, .. } => {
                let (cx, cy) = (self.coordinates(x).unwrap(), self.coordinates(y).unwrap());
                let sum: Vec<i64> = cx.iter().zip(&cy).map(|(a, b)| a + b).collect();
                if sum.iter().any(|c| c.abs() > *window) {
                    return Err(Error::WindowOverflow { window: *window });
                }
                self.encode_free(&sum, *window)
            }
        })
    }

    pub fn inverse(&self, x: Element) -> Result<Element> {
        self.check(x)?;
        Ok(match &self.repr {
            Repr::Cyclic(n) => (n - x) % n,
            Repr::Product(f) => {
                let d: Vec<usize> = Self::digits(x, f).iter().zip(f).map(|(a, r)| (r - a) % r).collect();
                Self::undigits(&d, f)
            }
            Repr::Table(t) => t.inverse[x],
            Repr::FreeAbelian { window, .. } => {
                let c: Vec<i64> = self.coordinates(x).unwrap().iter().map(|v| -v).collect();
                self.encode_free(&c, *window)
            }
        })
    }

    /// Human-readable element name.
    pub fn label(&self, x: Element) -> String {
        match &self.repr {
            Repr::Cyclic(_) => x.to_string(),
            Repr::Table(t) => t.labels.get(x).cloned().unwrap_or_else(|| format!("#{x}")),
            Repr::Product(f) => {
                let d = Self::digits(x, f);
                format!("({})", d.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            }
            Repr::FreeAbelian { .. } => {
                let c = self.coordinates(x).unwrap();
                format!("({})", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            }
        }
    }

    /// JSON form of an element: an integer, a coordinate array, or a table label.
    pub fn element_value(&self, x: Element) -> Value {
        match &self.repr {
            Repr::Cyclic(_) => Value::from(x),
            Repr::Table(_) => Value::String(self.label(x)),
            Repr::Product(f) => Value::from(Self::digits(x, f)),
            Repr::FreeAbelian { .. } => Value::from(self.coordinates(x).unwrap()),
        }
    }

    pub fn parse_element(&self, v: &Value) -> Result<Element> {
        let bad = || Error::InvalidElement(v.to_string());
        let x = match (&self.repr, v) {
            (Repr::Cyclic(_), Value::Number(n)) => n.as_u64().ok_or_else(bad)? as usize,
            (Repr::Table(t), Value::String(s)) => t.labels.iter().position(|l| l == s).ok_or_else(bad)?,
            (Repr::Table(_), Value::Number(n)) => n.as_u64().ok_or_else(bad)? as usize,
            (Repr::Product(_) | Repr::FreeAbelian { .. }, Value::Array(items)) => {
                let coords = items.iter().map(|c| c.as_i64().ok_or_else(bad)).collect::<Result<Vec<_>>>()?;
                self.from_coordinates(&coords)?
            }
            _ => return Err(bad()),
        };
        self.check(x).map_err(|_| bad())?;
        Ok(x)
    }

    /// Order of an element of a finite group.
    pub fn element_order(&self, x: Element) -> Result<usize> {
        self.finite_order()?;
        let e = self.identity();
        let mut k = 1;
        let mut y = x;
        while y != e {
            y = self.op(y, x)?;
            k += 1;
        }
        Ok(k)
    }

    fn closure(&self, seed: &[Element], gens: &[Element]) -> Result<Vec<Element>> {
        let n = self.finite_order()?;
        let mut member = vec![false; n];
        let mut queue = VecDeque::new();
        for &s in std::iter::once(&self.identity()).chain(seed) {
            if !member[s] {
                member[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.op(x, g)?;
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Ok((0..n).filter(|&i| member[i]).collect())
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated_subgroup(&self, gens: &[Element]) -> Result<Subgroup> {
        if gens.is_empty() {
            return Err(Error::Empty);
        }
        for &g in gens {
            self.check(g)?;
        }
        if !self.is_finite() {
            let e = self.identity();
            return if gens.iter().all(|&g| g == e) { Ok(self.trivial_subgroup()) } else { Err(Error::InfiniteOrder) };
        }
        Ok(Subgroup { elements: self.closure(&[], gens)? })
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![self.identity()] }
    }

    /// The whole (finite) group as a subgroup.
    pub fn whole(&self) -> Result<Subgroup> {
        Ok(Subgroup { elements: self.elements()?.collect() })
    }

    /// Validates an element list as a subgroup.
    pub fn subgroup(&self, elements: &[Element]) -> Result<Subgroup> {
        let mut elements = elements.to_vec();
        elements.sort_unstable();
        elements.dedup();
        for &x in &elements {
            self.check(x)?;
        }
        let h = Subgroup { elements };
        if !h.contains(self.identity()) {
            return Err(Error::NotSubgroup);
        }
        for &x in h.elements() {
            if !h.contains(self.inverse(x)?) {
                return Err(Error::NotSubgroup);
            }
            for &y in h.elements() {
                match self.op(x, y) {
                    Ok(z) if h.contains(z) => {}
                    _ => return Err(Error::NotSubgroup),
                }
            }
        }
        Ok(h)
    }

    /// All subgroups, sorted by order and then lexicographically.
    pub fn enumerate_subgroups(&self) -> Result<Vec<Subgroup>> {
        let n = match self.order() {
            Order::InfiniteWindow => return Ok(vec![self.trivial_subgroup()]),
            Order::Finite(n) => n,
        };
        if n > MAX_ENUMERATION_ORDER {
            return Err(Error::GroupTooLarge { order: n, limit: MAX_ENUMERATION_ORDER });
        }
        // cyclic subgroups, each with one generator
        let mut cyclic: BTreeMap<Vec<Element>, Element> = BTreeMap::new();
        for g in 0..n {
            let h = self.closure(&[], &[g])?;
            cyclic.entry(h).or_insert(g);
        }
        let mut found: BTreeMap<Vec<Element>, Vec<Element>> =
            cyclic.iter().map(|(h, &g)| (h.clone(), vec![g])).collect();
        let mut queue: VecDeque<Vec<Element>> = found.keys().cloned().collect();
        while let Some(h) = queue.pop_front() {
            let gens = found[&h].clone();
            let members: Vec<bool> = {
                let mut m = vec![false; n];
                h.iter().for_each(|&x| m[x] = true);
                m
            };
            for &g in cyclic.values() {
                if members[g] {
                    continue;
                }
                let mut next_gens = gens.clone();
                next_gens.push(g);
                let joined = self.closure(&h, &next_gens)?;
                if !found.contains_key(&joined) {
                    found.insert(joined.clone(), next_gens);
                    queue.push_back(joined);
                }
            }
        }
        let mut out: Vec<Subgroup> = found.into_keys().map(|elements| Subgroup { elements }).collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        Ok(out)
    }

    /// `x·H` (left) or `H·x` (right), sorted.
    pub fn coset(&self, x: Element, h: &Subgroup, side: Side) -> Result<Vec<Element>> {
        let mut out = h
            .elements()
            .iter()
            .map(|&y| match side {
                Side::Left => self.op(x, y),
                Side::Right => self.op(y, x),
            })
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        Ok(out)
    }

    pub fn is_normal(&self, h: &Subgroup) -> Result<bool> {
        if self.is_abelian() {
            return Ok(true);
        }
        for g in self.elements()? {
            let gi = self.inverse(g)?;
            for &x in h.elements() {
                if !h.contains(self.op(self.op(g, x)?, gi)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Cyclic(n) => write!(f, "Z/{n}"),
            Repr::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|n| format!("Z/{n}")).collect();
                write!(f, "{}", parts.join("×"))
            }
            Repr::Table(t) => write!(f, "table group of order {}", t.labels.len()),
            Repr::FreeAbelian { rank, window } => write!(f, "Z^{rank} window {window}"),
        }
    }
}
