//! Exact bounded-height enumeration: rational points on D_m, base points
//! with x0² − q a square, and a brute-force quadruple finder used as an
//! independent oracle.
//!
//! Scans split their ranges across rayon workers; results are merged and
//! sorted, so output does not depend on the worker count.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::curves::{check_q_m, DPoint};
use crate::error::{Error, Result};
use crate::exactmath::{height, is_square, sqrt_exact, Rational};
use crate::quadruples::Quadruple;

/// Admits p/s (lowest terms) iff max(|p|, s) ≤ bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct HeightBound(u64);

impl HeightBound {
    pub fn new(bound: u64) -> Result<Self> {
        if bound == 0 {
            return Err(Error::InvalidParams("height bound must be positive".into()));
        }
        Ok(HeightBound(bound))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn admits(self, r: &Rational) -> bool {
        height(r) <= BigInt::from(self.0)
    }
}

/// All rationals with the given denominator and height at most `bound`.
fn with_denominator(den: u64, bound: u64) -> impl Iterator<Item = Rational> {
    let b = bound as i64;
    (-b..=b)
        .filter(move |n| (n.unsigned_abs()).gcd(&den) == 1)
        .map(move |n| Rational::new(BigInt::from(n), BigInt::from(den)))
}

/// Canonical order on x: height, |numerator|, positive before negative,
/// then denominator.
fn x_order(a: &Rational, b: &Rational) -> Ordering {
    height(a)
        .cmp(&height(b))
        .then_with(|| a.numer().abs().cmp(&b.numer().abs()))
        .then_with(|| a.is_negative().cmp(&b.is_negative()))
        .then_with(|| a.denom().cmp(b.denom()))
}

fn point_order(a: &DPoint, b: &DPoint) -> Ordering {
    x_order(&a.x, &b.x).then_with(|| a.y.is_negative().cmp(&b.y.is_negative()))
}

/// Every (x, y) on D_m with height(x) ≤ bound: y² = q + m/(x² − q).
pub fn search_d_points(q: &Rational, m: &Rational, bound: HeightBound) -> Result<Vec<DPoint>> {
    check_q_m(q, m)?;
    let h = bound.get();
    let mut points: Vec<DPoint> = (1..=h)
        .into_par_iter()
        .flat_map_iter(|den| {
            with_denominator(den, h)
                .filter_map(|x| {
                    let shifted = &x * &x - q;
                    if shifted.is_zero() {
                        return None;
                    }
                    let y = sqrt_exact(&(q + m / &shifted)).ok()?;
                    let mut found = vec![DPoint::new(x.clone(), y.clone())];
                    if !y.is_zero() {
                        found.push(DPoint::new(x, -y));
                    }
                    Some(found)
                })
                .flatten()
                .collect::<Vec<_>>()
        })
        .collect();
    points.sort_by(point_order);
    Ok(points)
}

/// First searched point with x0² − q a rational square. `None` proves nothing.
pub fn find_square_base_point(
    q: &Rational,
    m: &Rational,
    bound: HeightBound,
) -> Result<Option<DPoint>> {
    Ok(search_d_points(q, m, bound)?
        .into_iter()
        .find(|p| is_square(&(&p.x * &p.x - q))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceBounds {
    pub numerator: u64,
    pub denominator: u64,
    /// Include negative entries.
    pub signed: bool,
}

/// All D(q)-quadruples with entries p/s, |p| ≤ numerator, 1 ≤ s ≤ denominator,
/// listed once each with entries ascending. Pairs are tested first and only
/// square-compatible pairs are extended.
pub fn brute_force_quadruples(q: &Rational, bounds: BruteForceBounds) -> Vec<Quadruple> {
    let mut cands: Vec<Rational> = Vec::new();
    for den in 1..=bounds.denominator {
        for num in 1..=bounds.numerator {
            if num.gcd(&den) != 1 {
                continue;
            }
            let r = Rational::new(BigInt::from(num), BigInt::from(den));
            if bounds.signed {
                cands.push(-&r);
            }
            cands.push(r);
        }
    }
    cands.sort();
    let n = cands.len();
    let adjacency: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .filter(|&j| is_square(&(&cands[i] * &cands[j] + q)))
                .collect()
        })
        .collect();
    let linked = |i: usize, j: usize| adjacency[i].binary_search(&j).is_ok();

    let mut found: Vec<(usize, usize, usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut local = Vec::new();
            let nb = &adjacency[a];
            for (x, &b) in nb.iter().enumerate() {
                for (y, &c) in nb.iter().enumerate().skip(x + 1) {
                    if !linked(b, c) {
                        continue;
                    }
                    for &d in &nb[y + 1..] {
                        if linked(b, d) && linked(c, d) {
                            local.push((a, b, c, d));
                        }
                    }
                }
            }
            local
        })
        .collect();
    found.sort();
    found
        .into_iter()
        .map(|(a, b, c, d)| {
            let entries = [a, b, c, d].map(|i| cands[i].clone());
            Quadruple::new(q.clone(), entries).expect("clique entries satisfy the D(q) property")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{on_curve_d, Params};
    use crate::exactmath::{int, rat};

    fn hb(h: u64) -> HeightBound {
        HeightBound::new(h).unwrap()
    }

    #[test]
    fn height_bound() {
        assert!(HeightBound::new(0).is_err());
        assert!(hb(7).admits(&rat(-7, 3)));
        assert!(!hb(7).admits(&rat(1, 8)));
    }

    #[test]
    fn negative_example_points() {
        let pts = search_d_points(&int(3), &int(1012), hb(10)).unwrap();
        for (x, y) in [(5, 7), (7, 5), (-5, 7), (5, -7), (-7, -5)] {
            assert!(pts.contains(&DPoint::new(int(x), int(y))), "({x},{y})");
        }
        let params = Params::new(int(3), int(5), int(7)).unwrap();
        assert!(pts.iter().all(|p| on_curve_d(&params, &p.x, &p.y)));
    }

    #[test]
    fn fermat_pairs() {
        let pts = search_d_points(&int(1), &int(2880), hb(40)).unwrap();
        for (x, y) in [(2, 31), (3, 19), (5, 11)] {
            assert!(pts.contains(&DPoint::new(int(x), int(y))));
        }
    }

    #[test]
    fn excluded_products() {
        assert!(search_d_points(&int(7), &int(0), hb(5)).is_err());
        assert!(search_d_points(&int(3), &int(9), hb(5)).is_err());
    }

    #[test]
    fn square_base_point_examples() {
        let w = find_square_base_point(&int(-3), &int(28), hb(5)).unwrap();
        assert_eq!(w, Some(DPoint::new(int(1), int(2))));
        let w = find_square_base_point(&int(3), &int(13), hb(5)).unwrap();
        assert_eq!(w, Some(DPoint::new(int(2), int(4))));
        assert_eq!(
            find_square_base_point(&int(3), &int(1012), hb(50)).unwrap(),
            None
        );
    }

    #[test]
    fn superset_on_larger_bound() {
        let small = search_d_points(&int(1), &int(2880), hb(12)).unwrap();
        let big = search_d_points(&int(1), &int(2880), hb(35)).unwrap();
        assert!(small.iter().all(|p| big.contains(p)));
    }

    #[test]
    fn brute_force_integer_fermat() {
        let b = BruteForceBounds {
            numerator: 130,
            denominator: 1,
            signed: false,
        };
        let found = brute_force_quadruples(&int(1), b);
        assert!(found
            .iter()
            .any(|q| q.entries() == &[int(1), int(3), int(8), int(120)]));
        assert!(found.iter().all(|q| q.certificate().pass));
    }

    #[test]
    fn brute_force_signed_includes_negation() {
        let b = BruteForceBounds {
            numerator: 120,
            denominator: 1,
            signed: true,
        };
        let found = brute_force_quadruples(&int(1), b);
        assert!(found
            .iter()
            .any(|q| q.entries() == &[int(-120), int(-8), int(-3), int(-1)]));
    }
}
