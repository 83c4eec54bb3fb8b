//! The birational map f: D_m → E_m anchored at the base point (x1, y1), its
//! inverse, and the function g(P) = (x1²−q)·((x∘f⁻¹(P))² − q).

use num_traits::Zero;

use crate::curves::{
    on_curve_d, point_r, point_s, rational_special_points, DPoint, EPoint, Params,
};
use crate::error::{Error, Result};
use crate::exactmath::{int, sqrt_exact, squarefree_part, Rational, SquareClass};

/// Images of the four points of D_m with y = ±y1, where the closed-form
/// expressions for f have vanishing denominators.
fn anchor(params: &Params, p: &DPoint) -> Option<EPoint> {
    let (x1, y1) = (params.x1(), params.y1());
    let curve = params.curve();
    let r = point_r(params);
    let s = point_s(params);
    let plus_x = p.x == *x1;
    if p.y == *y1 {
        Some(if plus_x { EPoint::Infinity } else { s })
    } else if p.y == -y1 {
        let two_r = curve.double(&r);
        Some(if plus_x { curve.add(&s, &two_r) } else { two_r })
    } else {
        None
    }
}

/// f(x, y). Points with y = ±y1 (hence x = ±x1) go through the anchor table:
/// (x1,y1) ↦ O, (−x1,y1) ↦ S, (x1,−y1) ↦ S+2R, (−x1,−y1) ↦ 2R.
pub fn f_map(params: &Params, p: &DPoint) -> Result<EPoint> {
    if !on_curve_d(params, &p.x, &p.y) {
        return Err(Error::PointNotOnCurve);
    }
    if let Some(image) = anchor(params, p) {
        return Ok(image);
    }
    let (q, x1, y1) = (params.q(), params.x1(), params.y1());
    let (x, y) = (&p.x, &p.y);
    let beta = params.beta();
    let x1_sq = x1 * x1;
    let y1_sq = y1 * y1;
    let y_sq = y * y;
    let num = int(2) * x1 * (&y_sq - q) * x + (&x1_sq + q) * &y_sq + &x1_sq * &y1_sq
        - int(2) * &x1_sq * q
        - &y1_sq * q;
    let dy = y - y1;
    let t = &beta * num / (&dy * &dy);
    let w =
        &t * (int(2) * y1 * x * (q - &y_sq) + int(2) * x1 * y * (q - &y1_sq)) / (&y_sq - &y1_sq);
    Ok(EPoint::affine(t, w))
}

/// Inverse of f on points with an affine preimage.
///
/// For fixed T the T-equation is linear in x; substituting into D_m and
/// clearing denominators leaves (y²−q)(y−y1)²·(A y² + B y + C) = 0 with
///   A = T² − 2T(x1²+q)(y1²−q) + m²
///   B = 2y1(m² − T²)
///   C = y1²T² − 2T(y1²−q)(x1²y1² − qy1² − 2qx1²) + y1²m².
/// The quadratic's roots are the y-coordinates of f⁻¹(T, ±W); the one that
/// reproduces W is returned.
pub fn f_inv(params: &Params, p: &EPoint) -> Result<DPoint> {
    if !params.curve().contains(p) {
        return Err(Error::PointNotOnCurve);
    }
    let (q, m, x1, y1) = (params.q(), params.m(), params.x1(), params.y1());
    let anchors = [
        DPoint::new(x1.clone(), y1.clone()),
        DPoint::new(-x1, y1.clone()),
        DPoint::new(x1.clone(), -y1),
        DPoint::new(-x1, -y1),
    ];
    for a in anchors {
        if anchor(params, &a).as_ref() == Some(p) {
            return Ok(a);
        }
    }
    let Some((t, _)) = p.coords() else {
        unreachable!("infinity is an anchor")
    };
    let beta = params.beta();
    let x1_sq = x1 * x1;
    let y1_sq = y1 * y1;
    let m_sq = m * m;
    let t_sq = t * t;
    let a = &t_sq - int(2) * t * (&x1_sq + q) * &beta + &m_sq;
    let b = int(2) * y1 * (&m_sq - &t_sq);
    let c = &y1_sq * &t_sq
        - int(2) * t * &beta * (&x1_sq * &y1_sq - q * &y1_sq - int(2) * q * &x1_sq)
        + &y1_sq * &m_sq;

    let roots: Vec<Rational> = if a.is_zero() {
        if b.is_zero() {
            Vec::new()
        } else {
            vec![-&c / &b]
        }
    } else {
        let disc = &b * &b - int(4) * &a * &c;
        match sqrt_exact(&disc) {
            Ok(d) => vec![(-&b + &d) / (int(2) * &a), (-&b - &d) / (int(2) * &a)],
            Err(_) => Vec::new(),
        }
    };

    for y in roots {
        let y_sq = &y * &y;
        if y_sq == *q || y_sq == y1_sq {
            continue;
        }
        let dy = &y - y1;
        let x = (t * &dy * &dy
            - &beta * ((&x1_sq + q) * &y_sq + &x1_sq * &y1_sq - int(2) * &x1_sq * q - &y1_sq * q))
            / (int(2) * x1 * &beta * (&y_sq - q));
        let candidate = DPoint::new(x, y);
        if on_curve_d(params, &candidate.x, &candidate.y) && f_map(params, &candidate)? == *p {
            return Ok(candidate);
        }
    }
    Err(Error::NonAffineImage)
}

/// g(P) = (x1²−q)·(x(f⁻¹(P))² − q). Zero at S1, S2 and a pole at R1, R2;
/// those points are rational only when q is a square.
pub fn g_eval(params: &Params, p: &EPoint) -> Result<Rational> {
    match f_inv(params, p) {
        Ok(pre) => Ok(params.alpha() * (&pre.x * &pre.x - params.q())),
        Err(Error::NonAffineImage) => match rational_special_points(params) {
            Some(sp) if *p == sp.s1 || *p == sp.s2 => Ok(Rational::zero()),
            _ => Err(Error::PoleOfG),
        },
        Err(e) => Err(e),
    }
}

/// Square class of g(P); zeros of g have no class and report `ZeroInput`.
pub fn g_square_class(params: &Params, p: &EPoint) -> Result<SquareClass> {
    squarefree_part(&g_eval(params, p)?)
}
