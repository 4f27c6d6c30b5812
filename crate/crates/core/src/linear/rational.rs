//! Exact rational scalars and dense matrix routines.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"`, or a JSON integer.
pub fn parse_q(v: &Value) -> Result<Q> {
    match v {
        Value::Number(n) => {
            n.as_i64().map(q).ok_or_else(|| Error::Parse(format!("{n} is not an integer; write rationals as \"p/q\"")))
        }
        Value::String(s) => parse_q_str(s),
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

pub fn parse_q_str(s: &str) -> Result<Q> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_json(x: &Q) -> Value {
    Value::String(format_q(x))
}

pub fn vec_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(q_json).collect())
}

pub fn matrix_json(m: &[Vec<Q>]) -> Value {
    Value::Array(m.iter().map(|r| vec_json(r)).collect())
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn zero_vec(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = zero_vec(n);
    v[i] = Q::one();
    v
}

pub fn identity(n: usize) -> Vec<Vec<Q>> {
    (0..n).map(|i| unit_vec(n, i)).collect()
}

pub fn scale(v: &[Q], c: &Q) -> Vec<Q> {
    v.iter().map(|x| x * c).collect()
}

pub fn add(u: &[Q], v: &[Q]) -> Vec<Q> {
    u.iter().zip(v).map(|(x, y)| x + y).collect()
}

pub fn sub(u: &[Q], v: &[Q]) -> Vec<Q> {
    u.iter().zip(v).map(|(x, y)| x - y).collect()
}

/// `Σ c_i rows_i`
pub fn combine(coeffs: &[Q], rows: &[Vec<Q>], width: usize) -> Vec<Q> {
    let mut out = zero_vec(width);
    for (c, row) in coeffs.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += c * x;
        }
    }
    out
}

pub fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter().map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum()).collect()).collect()
}

pub fn transpose(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Reduced row echelon form with zero rows dropped; returns the pivot columns.
pub fn rref(mut m: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<usize>) {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    rref(m.to_vec()).1.len()
}

/// Basis of `{x : M x = 0}` for `M` with `cols` columns.
pub fn nullspace(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(m.to_vec());
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = zero_vec(cols);
            x[f] = Q::one();
            for (row, &p) in r.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

pub fn inverse(m: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let n = m.len();
    let aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != n {
                return Err(Error::DimensionMismatch { left: row.len(), right: n });
            }
            let mut r = row.clone();
            r.extend(unit_vec(n, i));
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let (r, pivots) = rref(aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::NotInvertible);
    }
    Ok(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            let pivot_row = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// `c` with `u = c·v`, if it exists and `v ≠ 0`.
pub fn proportionality(u: &[Q], v: &[Q]) -> Option<Q> {
    let k = v.iter().position(|x| !x.is_zero())?;
    let c = &u[k] / &v[k];
    u.iter().zip(v).all(|(x, y)| *x == &c * y).then_some(c)
}

/// Univariate polynomials over `Q`, lowest degree first, no trailing zeros.
pub mod poly {
    use super::*;

    pub type Poly = Vec<Q>;

    pub fn trim(mut p: Poly) -> Poly {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    pub fn degree(p: &Poly) -> Option<usize> {
        (!p.is_empty()).then(|| p.len() - 1)
    }

    pub fn add(a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| a.get(i).cloned().unwrap_or_else(Q::zero) + b.get(i).cloned().unwrap_or_else(Q::zero))
                .collect(),
        )
    }

    pub fn neg(a: &Poly) -> Poly {
        a.iter().map(|x| -x.clone()).collect()
    }

    pub fn mul(a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = zero_vec(a.len() + b.len() - 1);
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    /// Quotient and remainder.
    pub fn divmod(a: &Poly, b: &Poly) -> (Poly, Poly) {
        let b = trim(b.clone());
        let db = degree(&b).expect("division by the zero polynomial");
        let mut r = trim(a.clone());
        let mut quot = Vec::new();
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let c = &r[dr] / &b[db];
            let shift = dr - db;
            if quot.len() <= shift {
                quot.resize(shift + 1, Q::zero());
            }
            quot[shift] = c.clone();
            for (i, y) in b.iter().enumerate() {
                r[i + shift] -= &c * y;
            }
            r = trim(r);
        }
        (trim(quot), r)
    }

    pub fn monic(p: &Poly) -> Poly {
        match p.last() {
            Some(lead) => p.iter().map(|x| x / lead).collect(),
            None => Vec::new(),
        }
    }

    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
        while !b.is_empty() {
            let r = divmod(&a, &b).1;
            a = b;
            b = r;
        }
        monic(&a)
    }

    pub fn eval(p: &Poly, x: &Q) -> Q {
        p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    fn divisors(n: &BigInt, limit: u64) -> Option<Vec<BigInt>> {
        let n = n.abs().to_u64()?;
        if n == 0 {
            return None;
        }
        let mut out = Vec::new();
        let mut d = 1u64;
        while d * d <= n {
            if d > limit {
                return None;
            }
            if n % d == 0 {
                out.push(BigInt::from(d));
                if d * d != n {
                    out.push(BigInt::from(n / d));
                }
            }
            d += 1;
        }
        Some(out)
    }

    /// All rational roots, or `None` when the coefficients are too large to
    /// enumerate divisor candidates.
    pub fn rational_roots(p: &Poly) -> Option<Vec<Q>> {
        let mut p = trim(p.clone());
        let mut roots = Vec::new();
        if p.is_empty() {
            return None;
        }
        if p[0].is_zero() {
            roots.push(Q::zero());
            while p.first().is_some_and(Zero::is_zero) {
                p.remove(0);
            }
        }
        if p.len() <= 1 {
            return Some(roots);
        }
        let lcm = p.iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
        let nums = divisors(&ints[0], 2_000_000)?;
        let dens = divisors(ints.last().expect("nonempty"), 2_000_000)?;
        for n in &nums {
            for d in &dens {
                for sign in [1, -1] {
                    let x = Q::new(n * sign, d.clone());
                    if !roots.contains(&x) && eval(&p, &x).is_zero() {
                        roots.push(x);
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }

    /// The polynomial of degree below `points.len()` through the given points.
    pub fn interpolate(points: &[(Q, Q)]) -> Poly {
        let mut out = Vec::new();
        for (i, (xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis: Poly = vec![yi.clone()];
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let d = (xi - xj).recip();
                    basis = mul(&basis, &vec![-xj * &d, d]);
                }
            }
            out = add(&out, &basis);
        }
        out
    }

    fn rational_sqrt(x: &Q) -> Option<Q> {
        if x.is_negative() {
            return None;
        }
        let (n, d) = (x.numer().sqrt(), x.denom().sqrt());
        (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Q::new(n, d))
    }

    /// Rational roots, solved directly up to degree two and by candidate
    /// enumeration above.
    pub fn roots(p: &Poly) -> Option<Vec<Q>> {
        let p = trim(p.clone());
        match p.len() {
            0 => None,
            1 => Some(Vec::new()),
            2 => Some(vec![-&p[0] / &p[1]]),
            3 => {
                let disc = &p[1] * &p[1] - Q::from_integer(4.into()) * &p[0] * &p[2];
                let Some(r) = rational_sqrt(&disc) else {
                    return Some(Vec::new());
                };
                let two_a = Q::from_integer(2.into()) * &p[2];
                let mut out = vec![(-&p[1] - &r) / &two_a, (-&p[1] + &r) / &two_a];
                out.sort();
                out.dedup();
                Some(out)
            }
            _ => rational_roots(&p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_q(&json!("3/6")).unwrap(), q_frac(1, 2));
        assert_eq!(parse_q(&json!(-4)).unwrap(), q(-4));
        assert_eq!(parse_q(&json!(" -7 ")).unwrap(), q(-7));
        assert!(parse_q(&json!("1/0")).is_err());
        assert!(parse_q(&json!(0.5)).is_err());
        assert_eq!(format_q(&q_frac(-2, 4)), "-1/2");
    }

    #[test]
    fn rref_and_nullspace() {
        let (r, p) = rref(m(&[&[1, 1, 0], &[0, 1, 0], &[2, 3, 0]]));
        assert_eq!(r, m(&[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(p, vec![0, 1]);
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for x in &ns {
            assert!(is_zero_vec(&mat_vec(&a, x)));
        }
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(mat_mul(&a, &inverse(&a).unwrap()), identity(2));
        assert_eq!(determinant(&a), q(1));
        assert_eq!(inverse(&m(&[&[1, 2], &[2, 4]])).unwrap_err(), Error::NotInvertible);
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), q(-1));
    }

    #[test]
    fn polynomial_roots() {
        // (2s - 1)(s + 3) s = 2s^3 + 5s^2 - 3s
        let p = vec![q(0), q(-3), q(5), q(2)];
        assert_eq!(poly::rational_roots(&p).unwrap(), vec![q(-3), q(0), q_frac(1, 2)]);
        let g = poly::gcd(&p, &vec![q(-1), q(2)]);
        assert_eq!(g, vec![q_frac(-1, 2), q(1)]);
        assert_eq!(poly::rational_roots(&vec![q(2), q(0), q(1)]).unwrap(), vec![]);
    }
}
