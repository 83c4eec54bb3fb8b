//! The curves D_m: (X²−q)(Y²−q) = m and E_m: W² = T³ + (4q²−2m)T² + m²T,
//! the chord-tangent law on E_m over any exact field, and the distinguished
//! points R, S, S1, R1, S2, R2.

use num_traits::Zero;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{
    format_rational, int, is_square, parse_rational, sqrt_exact, Field, QuadExtElem, Rational,
};

/// Point on E_m, affine or the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EPoint<K = Rational> {
    Infinity,
    Affine { t: K, w: K },
}

impl<K> EPoint<K> {
    pub fn affine(t: K, w: K) -> Self {
        EPoint::Affine { t, w }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, EPoint::Infinity)
    }

    pub fn coords(&self) -> Option<(&K, &K)> {
        match self {
            EPoint::Infinity => None,
            EPoint::Affine { t, w } => Some((t, w)),
        }
    }
}

impl EPoint<Rational> {
    /// Same point viewed over the field of `sample`.
    pub fn lift<K: Field>(&self, sample: &K) -> EPoint<K> {
        match self {
            EPoint::Infinity => EPoint::Infinity,
            EPoint::Affine { t, w } => EPoint::affine(sample.embed(t), sample.embed(w)),
        }
    }
}

impl EPoint<QuadExtElem> {
    /// Some(point over Q) when both coordinates are rational.
    pub fn to_rational(&self) -> Option<EPoint<Rational>> {
        match self {
            EPoint::Infinity => Some(EPoint::Infinity),
            EPoint::Affine { t, w } => Some(EPoint::affine(
                t.as_rational()?.clone(),
                w.as_rational()?.clone(),
            )),
        }
    }
}

/// Affine point on D_m.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DPoint {
    pub x: Rational,
    pub y: Rational,
}

impl DPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        DPoint { x, y }
    }
}

/// Weierstrass curve y² = x³ + a2·x² + a4·x over an exact field.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve<K> {
    a2: K,
    a4: K,
}

impl<K: Field> Curve<K> {
    pub fn new(a2: K, a4: K) -> Self {
        Curve { a2, a4 }
    }

    pub fn contains(&self, p: &EPoint<K>) -> bool {
        match p {
            EPoint::Infinity => true,
            EPoint::Affine { t, w } => {
                let rhs = t
                    .mul_el(t)
                    .add_el(&self.a2.mul_el(t))
                    .add_el(&self.a4)
                    .mul_el(t);
                w.square() == rhs
            }
        }
    }

    pub fn neg(&self, p: &EPoint<K>) -> EPoint<K> {
        match p {
            EPoint::Infinity => EPoint::Infinity,
            EPoint::Affine { t, w } => EPoint::affine(t.clone(), w.neg_el()),
        }
    }

    /// Group law. Inputs are assumed to lie on the curve.
    pub fn add(&self, p: &EPoint<K>, q: &EPoint<K>) -> EPoint<K> {
        let (t1, w1, t2, w2) = match (p, q) {
            (EPoint::Infinity, _) => return q.clone(),
            (_, EPoint::Infinity) => return p.clone(),
            (EPoint::Affine { t: t1, w: w1 }, EPoint::Affine { t: t2, w: w2 }) => (t1, w1, t2, w2),
        };
        let slope = if t1 == t2 {
            if w1.add_el(w2).is_zero_el() {
                return EPoint::Infinity;
            }
            // tangent: (3t² + 2·a2·t + a4) / 2w
            let three = t1.embed(&int(3));
            let two = t1.embed(&int(2));
            let num = three
                .mul_el(&t1.square())
                .add_el(&two.mul_el(&self.a2).mul_el(t1))
                .add_el(&self.a4);
            num.div_el(&two.mul_el(w1))
                .expect("w ≠ 0 after the 2-torsion check")
        } else {
            w2.sub_el(w1)
                .div_el(&t2.sub_el(t1))
                .expect("distinct abscissae")
        };
        let t3 = slope.square().sub_el(&self.a2).sub_el(t1).sub_el(t2);
        let w3 = slope.mul_el(&t1.sub_el(&t3)).sub_el(w1);
        EPoint::affine(t3, w3)
    }

    pub fn double(&self, p: &EPoint<K>) -> EPoint<K> {
        self.add(p, p)
    }

    pub fn sub(&self, p: &EPoint<K>, q: &EPoint<K>) -> EPoint<K> {
        self.add(p, &self.neg(q))
    }

    /// n·P by double-and-add; negative n multiplies −P.
    pub fn mul(&self, n: i64, p: &EPoint<K>) -> EPoint<K> {
        let base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = EPoint::Infinity;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &pow);
            }
            k >>= 1;
            if k > 0 {
                pow = self.double(&pow);
            }
        }
        acc
    }

    pub fn checked_add(&self, p: &EPoint<K>, q: &EPoint<K>) -> Result<EPoint<K>> {
        if !self.contains(p) || !self.contains(q) {
            return Err(Error::PointNotOnCurve);
        }
        Ok(self.add(p, q))
    }

    pub fn checked_mul(&self, n: i64, p: &EPoint<K>) -> Result<EPoint<K>> {
        if !self.contains(p) {
            return Err(Error::PointNotOnCurve);
        }
        Ok(self.mul(n, p))
    }
}

/// Problem data: q, m and a base point (x1, y1) on D_m, with the derived
/// curve E_m and the points R and S cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    q: Rational,
    m: Rational,
    x1: Rational,
    y1: Rational,
    curve: Curve<Rational>,
    r: EPoint,
    s: EPoint,
}

impl Params {
    /// Builds params from a base point; m = (x1²−q)(y1²−q).
    pub fn new(q: Rational, x1: Rational, y1: Rational) -> Result<Self> {
        let m = (&x1 * &x1 - &q) * (&y1 * &y1 - &q);
        Self::with_product(q, m, x1, y1)
    }

    pub fn with_product(q: Rational, m: Rational, x1: Rational, y1: Rational) -> Result<Self> {
        check_q_m(&q, &m)?;
        if x1.is_zero() || y1.is_zero() {
            return Err(Error::InvalidParams(
                "base point needs x1 ≠ 0 and y1 ≠ 0".into(),
            ));
        }
        if (&x1 * &x1 - &q) * (&y1 * &y1 - &q) != m {
            return Err(Error::InvalidParams(format!(
                "({}, {}) is not on D_m for m = {}",
                x1, y1, m
            )));
        }
        let curve = Curve::new(int(4) * &q * &q - int(2) * &m, &m * &m);
        let r = EPoint::affine(m.clone(), int(2) * &m * &q);
        let alpha = &x1 * &x1 - &q;
        let s_t = &y1 * &y1 * &alpha * &alpha / (&x1 * &x1);
        let s_w = &q * &y1 * (&x1 * &x1 + &y1 * &y1) * &alpha * &alpha / (&x1 * &x1 * &x1);
        let s = EPoint::affine(s_t, s_w);
        Ok(Params {
            q,
            m,
            x1,
            y1,
            curve,
            r,
            s,
        })
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }
    pub fn m(&self) -> &Rational {
        &self.m
    }
    pub fn x1(&self) -> &Rational {
        &self.x1
    }
    pub fn y1(&self) -> &Rational {
        &self.y1
    }

    /// x1² − q
    pub fn alpha(&self) -> Rational {
        &self.x1 * &self.x1 - &self.q
    }

    /// y1² − q
    pub fn beta(&self) -> Rational {
        &self.y1 * &self.y1 - &self.q
    }

    pub fn base_point(&self) -> DPoint {
        DPoint::new(self.x1.clone(), self.y1.clone())
    }

    pub fn curve(&self) -> &Curve<Rational> {
        &self.curve
    }

    /// E_m over the field that `sample` belongs to.
    pub fn curve_over<K: Field>(&self, sample: &K) -> Curve<K> {
        Curve::new(sample.embed(&self.curve.a2), sample.embed(&self.curve.a4))
    }

    pub fn q_is_square(&self) -> bool {
        is_square(&self.q)
    }
}

/// Rejects the excluded products m = 0 and m = q² (and q = 0).
pub fn check_q_m(q: &Rational, m: &Rational) -> Result<()> {
    if q.is_zero() {
        return Err(Error::InvalidParams("q must be nonzero".into()));
    }
    if m.is_zero() {
        return Err(Error::InvalidParams("m = 0 gives a reducible curve".into()));
    }
    if *m == q * q {
        return Err(Error::InvalidParams(
            "m = q² gives a curve of genus 0".into(),
        ));
    }
    Ok(())
}

pub fn on_curve_e(params: &Params, p: &EPoint) -> bool {
    params.curve.contains(p)
}

pub fn on_curve_d(params: &Params, x: &Rational, y: &Rational) -> bool {
    (x * x - &params.q) * (y * y - &params.q) == params.m
}

pub fn e_add(params: &Params, p: &EPoint, q: &EPoint) -> Result<EPoint> {
    params.curve.checked_add(p, q)
}

pub fn e_neg(params: &Params, p: &EPoint) -> Result<EPoint> {
    if !params.curve.contains(p) {
        return Err(Error::PointNotOnCurve);
    }
    Ok(params.curve.neg(p))
}

pub fn e_scalar_mul(params: &Params, n: i64, p: &EPoint) -> Result<EPoint> {
    params.curve.checked_mul(n, p)
}

/// R = (m, 2mq), a point of order 4.
pub fn point_r(params: &Params) -> EPoint {
    params.r.clone()
}

/// S = (y1²(x1²−q)²/x1², q·y1(x1²+y1²)(x1²−q)²/x1³).
pub fn point_s(params: &Params) -> EPoint {
    params.s.clone()
}

/// The zeros S1, S2 and poles R1, R2 of g.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialPoints<K> {
    pub s1: EPoint<K>,
    pub r1: EPoint<K>,
    pub s2: EPoint<K>,
    pub r2: EPoint<K>,
}

/// Special points over Q when q is a rational square, over Q(√q) otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecialPointSet {
    Rational(SpecialPoints<Rational>),
    Extension(SpecialPoints<QuadExtElem>),
}

/// Builds S1, R1, S2, R2 from a square root of q in K:
///   S1 = (β(x1−√q)²,  2y1√q·β(x1−√q)²),   R1 = (α(y1+√q)²,  2x1√q·α(y1+√q)²),
///   S2 = (β(x1+√q)², −2y1√q·β(x1+√q)²),   R2 = (α(y1−√q)², −2x1√q·α(y1−√q)²),
/// with α = x1²−q, β = y1²−q.
pub fn special_points_with<K: Field>(params: &Params, root: &K) -> SpecialPoints<K> {
    let e = |r: &Rational| root.embed(r);
    let (x1, y1) = (e(&params.x1), e(&params.y1));
    let (alpha, beta) = (e(&params.alpha()), e(&params.beta()));
    let two = e(&int(2));
    let point = |scale: &K, base: &K, coeff: &K, sign: i64| {
        let t = scale.mul_el(&base.square());
        let w = e(&int(sign))
            .mul_el(&two)
            .mul_el(coeff)
            .mul_el(root)
            .mul_el(&t);
        EPoint::affine(t, w)
    };
    SpecialPoints {
        s1: point(&beta, &x1.sub_el(root), &y1, 1),
        r1: point(&alpha, &y1.add_el(root), &x1, 1),
        s2: point(&beta, &x1.add_el(root), &y1, -1),
        r2: point(&alpha, &y1.sub_el(root), &x1, -1),
    }
}

pub fn special_points(params: &Params) -> SpecialPointSet {
    match sqrt_exact(&params.q) {
        Ok(root) => SpecialPointSet::Rational(special_points_with(params, &root)),
        Err(_) => {
            let root = QuadExtElem::sqrt_of(params.q.clone()).expect("q is not a square");
            SpecialPointSet::Extension(special_points_with(params, &root))
        }
    }
}

/// Rational special points, present only when q is a square.
pub fn rational_special_points(params: &Params) -> Option<SpecialPoints<Rational>> {
    match special_points(params) {
        SpecialPointSet::Rational(sp) => Some(sp),
        SpecialPointSet::Extension(_) => None,
    }
}

impl Serialize for EPoint<Rational> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            EPoint::Infinity => map.serialize_entry("inf", &true)?,
            EPoint::Affine { t, w } => {
                map.serialize_entry("T", &format_rational(t))?;
                map.serialize_entry("W", &format_rational(w))?;
            }
        }
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEPoint {
    Inf {
        inf: bool,
    },
    Affine {
        #[serde(rename = "T")]
        t: String,
        #[serde(rename = "W")]
        w: String,
    },
}

impl<'de> Deserialize<'de> for EPoint<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawEPoint::deserialize(d)? {
            RawEPoint::Inf { inf: true } => Ok(EPoint::Infinity),
            RawEPoint::Inf { inf: false } => Err(de::Error::custom("\"inf\" must be true")),
            RawEPoint::Affine { t, w } => Ok(EPoint::affine(
                parse_rational(&t).map_err(de::Error::custom)?,
                parse_rational(&w).map_err(de::Error::custom)?,
            )),
        }
    }
}

impl Serialize for DPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("x", &format_rational(&self.x))?;
        map.serialize_entry("y", &format_rational(&self.y))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for DPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            x: String,
            y: String,
        }
        let raw = Raw::deserialize(d)?;
        Ok(DPoint::new(
            parse_rational(&raw.x).map_err(de::Error::custom)?,
            parse_rational(&raw.y).map_err(de::Error::custom)?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn p(q: i64, x1: i64, y1: i64) -> Params {
        Params::new(int(q), int(x1), int(y1)).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(int(3), int(0), int(7)).is_err());
        assert!(Params::new(int(3), int(5), int(0)).is_err());
        // y1² = q makes m = 0
        assert!(Params::new(int(4), int(5), int(2)).is_err());
        // m = q²: q = -1, x1 = y1 = ... (x²+1)(y²+1) = 1 only at 0; use with_product instead
        assert!(Params::with_product(int(3), int(9), int(2), int(2)).is_err());
        assert!(Params::with_product(int(3), int(1012), int(5), int(6)).is_err());
        assert!(Params::with_product(int(3), int(1012), int(5), int(7)).is_ok());
    }

    #[test]
    fn r_examples() {
        let fermat = Params::with_product(int(1), int(2880), int(2), int(31)).unwrap();
        assert_eq!(point_r(&fermat), EPoint::affine(int(2880), int(5760)));
        let neg = p(3, 5, 7);
        assert_eq!(*neg.m(), int(1012));
        assert_eq!(point_r(&neg), EPoint::affine(int(1012), int(6072)));
        assert!(on_curve_e(&neg, &point_r(&neg)));
    }

    #[test]
    fn s_examples() {
        let params = p(3, 5, 7);
        let s = point_s(&params);
        assert_eq!(s, EPoint::affine(rat(23716, 25), rat(752136, 125)));
        assert!(on_curve_e(&params, &s));
        let params = p(-3, 1, 2);
        assert_eq!(*params.m(), int(28));
        assert_eq!(point_s(&params), EPoint::affine(int(64), int(-480)));
        assert!(on_curve_e(&params, &point_s(&params)));
    }

    #[test]
    fn group_law_examples() {
        let params = p(3, 5, 7);
        let r = point_r(&params);
        assert_eq!(e_add(&params, &r, &EPoint::Infinity).unwrap(), r);
        assert_eq!(
            e_add(&params, &r, &r).unwrap(),
            EPoint::affine(int(0), int(0))
        );
        assert_eq!(e_scalar_mul(&params, 4, &r).unwrap(), EPoint::Infinity);
        assert_eq!(e_scalar_mul(&params, 1, &r).unwrap(), r);
        assert_eq!(e_scalar_mul(&params, 0, &r).unwrap(), EPoint::Infinity);
        let s = point_s(&params);
        assert_eq!(
            e_scalar_mul(&params, -1, &s).unwrap(),
            e_neg(&params, &s).unwrap()
        );

        let fermat = Params::with_product(int(1), int(2880), int(2), int(31)).unwrap();
        let origin = EPoint::affine(int(0), int(0));
        assert_eq!(e_scalar_mul(&fermat, 2, &origin).unwrap(), EPoint::Infinity);

        let off = EPoint::affine(int(1), int(1));
        assert!(!on_curve_e(&params, &off));
        assert_eq!(e_add(&params, &off, &r), Err(Error::PointNotOnCurve));
        assert_eq!(e_scalar_mul(&params, 2, &off), Err(Error::PointNotOnCurve));
    }

    #[test]
    fn d_membership() {
        let params = p(3, 5, 7);
        assert!(on_curve_d(&params, &int(5), &int(7)));
        assert!(on_curve_d(&params, &int(-7), &int(5)));
        assert!(!on_curve_d(&params, &int(1), &int(1)));
    }

    #[test]
    fn special_points_rational_when_q_square() {
        let params = Params::with_product(int(1), int(2880), int(2), int(31)).unwrap();
        let SpecialPointSet::Rational(sp) = special_points(&params) else {
            panic!("q = 1 should give rational points");
        };
        for pt in [&sp.s1, &sp.r1, &sp.s2, &sp.r2] {
            assert!(on_curve_e(&params, pt));
        }
    }

    #[test]
    fn special_points_identities_over_extension() {
        let params = p(3, 5, 7);
        let SpecialPointSet::Extension(sp) = special_points(&params) else {
            panic!("q = 3 is not a square");
        };
        let root = QuadExtElem::sqrt_of(int(3)).unwrap();
        let curve = params.curve_over(&root);
        let r = point_r(&params).lift(&root);
        let s = point_s(&params).lift(&root);
        for pt in [&sp.s1, &sp.r1, &sp.s2, &sp.r2] {
            assert!(curve.contains(pt));
        }
        let s_plus_2r = curve.add(&s, &curve.double(&r));
        assert_eq!(curve.double(&sp.s1), s_plus_2r);
        assert_eq!(curve.double(&sp.s2), s_plus_2r);
        assert_eq!(curve.double(&sp.r1), s);
        assert_eq!(curve.double(&sp.r2), s);
        // translation by R cycles S1 → R2 → S2 → R1 → S1
        assert_eq!(curve.add(&sp.s1, &r), sp.r2);
        assert_eq!(curve.add(&sp.r2, &r), sp.s2);
        assert_eq!(curve.add(&sp.s2, &r), sp.r1);
        assert_eq!(curve.add(&sp.r1, &r), sp.s1);
    }

    #[test]
    fn epoint_json() {
        let pt = EPoint::affine(rat(7, 2), int(-3));
        let s = serde_json::to_string(&pt).unwrap();
        assert_eq!(s, r#"{"T":"7/2","W":"-3"}"#);
        assert_eq!(serde_json::from_str::<EPoint>(&s).unwrap(), pt);
        assert_eq!(
            serde_json::to_string(&EPoint::<Rational>::Infinity).unwrap(),
            r#"{"inf":true}"#
        );
        assert_eq!(
            serde_json::from_str::<EPoint>(r#"{"inf":true}"#).unwrap(),
            EPoint::Infinity
        );
        let d = DPoint::new(int(2), rat(-31, 1));
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"x":"2","y":"-31"}"#);
    }

    #[test]
    fn one_is_identity_for_mul() {
        let params = p(2, 3, 1);
        let s = point_s(&params);
        assert_eq!(params.curve().mul(1, &s), s);
        assert_eq!(
            params.curve().mul(-3, &s),
            params.curve().neg(&params.curve().mul(3, &s))
        );
    }
}
