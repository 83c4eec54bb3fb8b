//! Quadruples from triples of points on E_m and back, the (t, u)
//! parametrization of admissible products, and the coset-based admissibility
//! check.

use num_traits::Zero;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::birational::{f_map, g_eval};
use crate::curves::{check_q_m, point_r, point_s, DPoint, EPoint, Params};
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, int, is_square, sqrt_exact, Rational};

/// Index pairs behind t12, t13, t14, t23, t24, t34.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub q1: EPoint,
    pub q2: EPoint,
    pub q3: EPoint,
}

impl Triple {
    pub fn new(q1: EPoint, q2: EPoint, q3: EPoint) -> Self {
        Triple { q1, q2, q3 }
    }

    pub fn points(&self) -> [&EPoint; 3] {
        [&self.q1, &self.q2, &self.q3]
    }

    pub fn sum(&self, params: &Params) -> EPoint {
        let c = params.curve();
        c.add(&c.add(&self.q1, &self.q2), &self.q3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Four distinct nonzero rationals whose pairwise products plus q are squares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadruple {
    q: Rational,
    entries: [Rational; 4],
}

impl Quadruple {
    /// Validates the D(q) property; fails with `NotAQuadruple` otherwise.
    pub fn new(q: Rational, entries: [Rational; 4]) -> Result<Self> {
        let cert = verify_quadruple(&q, &entries);
        if !cert.pass {
            return Err(Error::NotAQuadruple(cert.failure_reason()));
        }
        Ok(Quadruple { q, entries })
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn entries(&self) -> &[Rational; 4] {
        &self.entries
    }

    pub fn product(&self) -> Rational {
        self.entries.iter().fold(int(1), |acc, e| acc * e)
    }

    pub fn negated(&self) -> Quadruple {
        Quadruple {
            q: self.q.clone(),
            entries: self.entries.clone().map(|e| -e),
        }
    }

    pub fn certificate(&self) -> Certificate {
        verify_quadruple(&self.q, &self.entries)
    }
}

/// Outcome of checking the D(q) conditions, with the six nonnegative roots
/// t12, t13, t14, t23, t24, t34 (None where the value is not a square).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub q: Rational,
    pub entries: [Rational; 4],
    pub roots: [Option<Rational>; 6],
    pub distinct: bool,
    pub nonzero: bool,
    pub pass: bool,
}

impl Certificate {
    pub fn failure_reason(&self) -> String {
        let mut reasons = Vec::new();
        if !self.nonzero {
            reasons.push("an entry is zero".to_string());
        }
        if !self.distinct {
            reasons.push("entries are not distinct".to_string());
        }
        for (k, (i, j)) in PAIRS.iter().enumerate() {
            if self.roots[k].is_none() {
                reasons.push(format!(
                    "{}·{} + {} is not a square",
                    self.entries[*i], self.entries[*j], self.q
                ));
            }
        }
        reasons.join("; ")
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("q", &format_rational(&self.q))?;
        for (name, e) in ["a", "b", "c", "d"].iter().zip(&self.entries) {
            map.serialize_entry(name, &format_rational(e))?;
        }
        let roots: Vec<Option<String>> = self
            .roots
            .iter()
            .map(|r| r.as_ref().map(format_rational))
            .collect();
        map.serialize_entry("roots", &roots)?;
        map.serialize_entry("distinct", &self.distinct)?;
        map.serialize_entry("nonzero", &self.nonzero)?;
        map.serialize_entry("pass", &self.pass)?;
        map.end()
    }
}

pub fn verify_quadruple(q: &Rational, entries: &[Rational; 4]) -> Certificate {
    let roots = PAIRS.map(|(i, j)| sqrt_exact(&(&entries[i] * &entries[j] + q)).ok());
    let nonzero = entries.iter().all(|e| !e.is_zero());
    let distinct = PAIRS.iter().all(|&(i, j)| entries[i] != entries[j]);
    let pass = nonzero && distinct && roots.iter().all(Option::is_some);
    Certificate {
        q: q.clone(),
        entries: entries.clone(),
        roots,
        distinct,
        nonzero,
        pass,
    }
}

/// G·P = {P + kR} ∪ {S − P + kR}, k = 0..3, without repeats.
pub fn orbit(params: &Params, p: &EPoint) -> Result<Vec<EPoint>> {
    let c = params.curve();
    if !c.contains(p) {
        return Err(Error::PointNotOnCurve);
    }
    let r = point_r(params);
    let reflected = c.sub(&point_s(params), p);
    let mut out: Vec<EPoint> = Vec::with_capacity(8);
    for start in [p.clone(), reflected] {
        let mut cur = start;
        for _ in 0..4 {
            if !out.contains(&cur) {
                out.push(cur.clone());
            }
            cur = c.add(&cur, &r);
        }
    }
    Ok(out)
}

/// True iff the three G-orbits are pairwise disjoint. Off-curve members make
/// the triple unusable and yield false.
pub fn is_nondegenerate(params: &Params, t: &Triple) -> bool {
    let Ok(o1) = orbit(params, &t.q1) else {
        return false;
    };
    let Ok(o2) = orbit(params, &t.q2) else {
        return false;
    };
    if !params.curve().contains(&t.q3) {
        return false;
    }
    !(o1.contains(&t.q2) || o1.contains(&t.q3) || o2.contains(&t.q3))
}

/// Whether (y1²−q)·g(P) is a rational square.
pub fn square_condition(params: &Params, p: &EPoint) -> Result<bool> {
    let g = g_eval(params, p)?;
    Ok(!g.is_zero() && is_square(&(params.beta() * g)))
}

/// a = ±√(g(Q1)g(Q2)g(Q3) / ((x1²−q)³ m)), then b, c, d = g(Qi) / (a(x1²−q)).
pub fn construct_from_triple(params: &Params, t: &Triple, sign: Sign) -> Result<Quadruple> {
    let curve = params.curve();
    if t.points().iter().any(|p| !curve.contains(p)) {
        return Err(Error::PointNotOnCurve);
    }
    if !is_nondegenerate(params, t) {
        return Err(Error::DegenerateTriple);
    }
    if !square_condition(params, &t.sum(params))? {
        return Err(Error::SquareConditionFails);
    }
    let gs = [
        g_eval(params, &t.q1)?,
        g_eval(params, &t.q2)?,
        g_eval(params, &t.q3)?,
    ];
    let alpha = params.alpha();
    let a_sq = &gs[0] * &gs[1] * &gs[2] / (&alpha * &alpha * &alpha * params.m());
    if a_sq.is_zero() {
        return Err(Error::DegenerateQuadruple(
            "g vanishes at a triple member".into(),
        ));
    }
    let mut a = sqrt_exact(&a_sq)?;
    if sign == Sign::Minus {
        a = -a;
    }
    let scale = &a * &alpha;
    let [g1, g2, g3] = gs;
    let entries = [a.clone(), g1 / &scale, g2 / &scale, g3 / &scale];
    let cert = verify_quadruple(params.q(), &entries);
    if !cert.pass {
        return Err(Error::DegenerateQuadruple(cert.failure_reason()));
    }
    let quad = Quadruple {
        q: params.q().clone(),
        entries,
    };
    let product = quad.product();
    if product != *params.m() {
        return Err(Error::ProductMismatch {
            expected: format_rational(params.m()),
            found: format_rational(&product),
        });
    }
    Ok(quad)
}

/// Points f(t12, t34), f(t13, t24), f(t14, t23) with every t_ij ≥ 0.
pub fn quadruple_to_triple(params: &Params, quad: &Quadruple) -> Result<Triple> {
    if quad.q() != params.q() {
        return Err(Error::InvalidParams(
            "quadruple and params use different q".into(),
        ));
    }
    let product = quad.product();
    if product != *params.m() {
        return Err(Error::ProductMismatch {
            expected: format_rational(params.m()),
            found: format_rational(&product),
        });
    }
    let cert = quad.certificate();
    let roots: Vec<Rational> = cert
        .roots
        .iter()
        .map(|r| {
            r.clone()
                .ok_or_else(|| Error::NotAQuadruple(cert.failure_reason()))
        })
        .collect::<Result<_>>()?;
    let point = |i: usize, j: usize| {
        f_map(params, &DPoint::new(roots[i].clone(), roots[j].clone())).map_err(|e| match e {
            Error::PointNotOnCurve => Error::MapUndefined,
            other => other,
        })
    };
    Ok(Triple::new(point(0, 5)?, point(1, 4)?, point(2, 3)?))
}

/// Base point x1 = (q+u²)/(2u), y1 = t and m = (t²−q)·((u²−q)/(2u))², for
/// which x1² − q is a square.
pub fn m_from_tu(
    q: &Rational,
    t: &Rational,
    u: &Rational,
) -> Result<(Rational, Rational, Rational)> {
    if u.is_zero() {
        return Err(Error::InvalidParams("u must be nonzero".into()));
    }
    let two_u = int(2) * u;
    let x1 = (q + u * u) / &two_u;
    let k = (u * u - q) / &two_u;
    let m = (t * t - q) * &k * &k;
    check_q_m(q, &m)?;
    if x1.is_zero() || t.is_zero() {
        return Err(Error::InvalidParams("x1 and y1 = t must be nonzero".into()));
    }
    Ok((m, x1, t.clone()))
}

pub fn family_params(q: &Rational, t: &Rational, u: &Rational) -> Result<Params> {
    let (m, x1, y1) = m_from_tu(q, t, u)?;
    Params::with_product(q.clone(), m, x1, y1)
}

/// The triple (S+R, 2S, 3S).
pub fn family_triple(params: &Params) -> Triple {
    let c = params.curve();
    let s = point_s(params);
    Triple::new(c.add(&s, &point_r(params)), c.double(&s), c.mul(3, &s))
}

pub fn construct_family_quadruple(q: &Rational, t: &Rational, u: &Rational) -> Result<Quadruple> {
    let params = family_params(q, t, u)?;
    construct_from_triple(&params, &family_triple(&params), Sign::Plus)
}

/// Builds a quadruple from any point W satisfying the square condition, using
/// triples (W + aS + iR, bS + jR, cS + kR) with a+b+c and i+j+k even, so the
/// sum stays in the class of W modulo 2E_m(Q). The first candidate is
/// (W+S, 2S, 3S), which for W = R is the family triple.
pub fn construct_from_witness(params: &Params, witness: &EPoint) -> Result<(Triple, Quadruple)> {
    let c = params.curve();
    let s = point_s(params);
    let r = point_r(params);
    let combo = |n: i64, k: i64| c.add(&c.mul(n, &s), &c.mul(k, &r));
    let mut shapes = vec![(1, 2, 3, 0, 0, 0)];
    for total in 2..=12i64 {
        for a in 0..=4 {
            for b in 1..=5 {
                let cc = total - a - b;
                if !(1..=6).contains(&cc) || b >= cc {
                    continue;
                }
                for (i, j, k) in [(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)] {
                    if (a, b, cc, i, j, k) != (1, 2, 3, 0, 0, 0) {
                        shapes.push((a, b, cc, i, j, k));
                    }
                }
            }
        }
    }
    let mut last = Error::DegenerateTriple;
    for (a, b, cc, i, j, k) in shapes {
        let triple = Triple::new(c.add(witness, &combo(a, i)), combo(b, j), combo(cc, k));
        match construct_from_triple(params, &triple, Sign::Plus) {
            Ok(quad) => return Ok((triple, quad)),
            Err(e) => last = e,
        }
    }
    Err(last)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// `witness` satisfies the square condition; `representative` is the
    /// supplied point it stands for (differs only after a pole shift).
    Exists {
        witness: EPoint,
        representative: EPoint,
    },
    NoneAmongSupplied,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityVerdict {
    pub verdict: Verdict,
    pub coset_reps_checked: usize,
    /// Representatives at a zero or pole of g with no usable shift.
    pub unresolved: Vec<EPoint>,
    pub warnings: Vec<String>,
}

impl AdmissibilityVerdict {
    pub fn exists(&self) -> bool {
        matches!(self.verdict, Verdict::Exists { .. })
    }
}

/// Scans coset representatives for a T with (y1²−q)·g(T) a square, shifting by
/// 2X (X drawn from the representatives, S and R) where g has a zero or pole.
/// A negative verdict is conclusive only if the representatives cover all of
/// E_m(Q)/2E_m(Q); coverage is the caller's claim.
pub fn admissibility_check(params: &Params, coset_reps: &[EPoint]) -> AdmissibilityVerdict {
    let mut aux: Vec<EPoint> = coset_reps.to_vec();
    aux.push(point_s(params));
    aux.push(point_r(params));
    admissibility_check_with_aux(params, coset_reps, &aux)
}

pub fn admissibility_check_with_aux(
    params: &Params,
    coset_reps: &[EPoint],
    aux: &[EPoint],
) -> AdmissibilityVerdict {
    let c = params.curve();
    let beta = params.beta();
    let mut out = AdmissibilityVerdict {
        verdict: Verdict::NoneAmongSupplied,
        coset_reps_checked: 0,
        unresolved: Vec::new(),
        warnings: Vec::new(),
    };
    // nonzero g value at the point itself or at a shift by twice an auxiliary point
    let usable = |p: &EPoint| -> Option<(EPoint, Rational)> {
        let candidates =
            std::iter::once(p.clone()).chain(aux.iter().map(|x| c.add(p, &c.double(x))));
        candidates
            .filter_map(|cand| match g_eval(params, &cand) {
                Ok(g) if !g.is_zero() => Some((cand, g)),
                _ => None,
            })
            .next()
    };
    for rep in coset_reps {
        if !c.contains(rep) {
            out.warnings
                .push("skipped a representative that is not on E_m".into());
            continue;
        }
        out.coset_reps_checked += 1;
        let Some((point, g)) = usable(rep) else {
            out.warnings
                .push("representative at a zero or pole of g left unresolved".into());
            out.unresolved.push(rep.clone());
            continue;
        };
        if point != *rep {
            out.warnings
                .push("representative at a zero or pole of g shifted by 2X".into());
        }
        if is_square(&(&beta * &g)) {
            out.verdict = Verdict::Exists {
                witness: point,
                representative: rep.clone(),
            };
            return out;
        }
    }
    out
}

/// Convenience: the converse condition of the triple built from a quadruple.
pub fn converse_condition(params: &Params, quad: &Quadruple) -> Result<bool> {
    let triple = quadruple_to_triple(params, quad)?;
    square_condition(params, &triple.sum(params))
}
