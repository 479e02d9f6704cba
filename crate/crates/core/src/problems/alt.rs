//! The 15-polynomial four-bar coupler-curve system in isotropic coordinates.
//! A trailing `b` marks the conjugate coordinate (`ab` is a-bar).

use std::sync::Arc;

use super::{Conjugation, ProblemInstance};
use crate::arith::{Field, Rationals};
use crate::error::{Error, Result};
use crate::poly::{parse_polynomial, MonomialOrder, Polynomial, Ring};

const VARS: [&str; 8] = ["a", "ab", "b", "bb", "x", "xb", "y", "yb"];
const VAR_CONJ: [usize; 8] = [1, 0, 3, 2, 5, 4, 7, 6];
// 0-based: conj(f_j) = f_{POLY_CONJ[j]}
pub(crate) const POLY_CONJ: [usize; 15] = [0, 2, 1, 4, 3, 6, 5, 7, 9, 8, 11, 10, 12, 14, 13];

/// Written-out members; `None` entries are conjugates of their partner.
const SOURCES: [Option<&str>; 15] = [
    Some("(x - y)*(yb - xb)"),
    Some("(x - y)*(ab*xb - 2*ab*yb + 2*bb*xb - bb*yb)"),
    None,
    Some("(x - y)*(ab^2*yb - 2*ab*bb*xb + 2*ab*bb*yb - bb^2*xb)"),
    None,
    Some("ab*bb*(x - y)*(bb*xb - ab*yb)"),
    None,
    Some(
        "x^2*yb*(ab - yb) + xb^2*y*(a - y) \
         + x*xb*(2*y*yb + (ab - 2*bb)*y + (a - 2*b)*yb - a*ab - 2*a*bb - 2*ab*b - 2*b*bb) \
         + x*(b*yb^2 + y*yb*(bb - 2*ab) + yb*(a*ab + a*bb + 4*ab*b + b*bb)) \
         - y*yb*(2*a*ab + 2*a*bb + 2*ab*b + b*bb) \
         + xb*(bb*y^2 + y*yb*(b - 2*a) + y*(a*ab + ab*b + 4*a*bb + b*bb))",
    ),
    Some(
        "ab*x^2*yb*(2*yb - ab - bb) + 2*bb*xb^2*y*(y - a) \
         - ab*x*yb*(a*bb + 2*ab*(b - y) + 2*b*(bb + yb)) \
         + x*xb*(bb*(2*bb*y + 2*a*ab + 2*ab*b + a*bb) + yb*(ab + bb)*(2*b - a - 2*y)) \
         + ab*y*yb*(2*a*bb + ab*b + 2*b*bb) \
         + xb*y*((2*a*yb - 2*a*bb - b*yb - bb*y)*(ab + bb) - ab*b*bb)",
    ),
    None,
    Some(
        "ab^2*x^2*yb*(bb - yb) + bb^2*xb^2*y*(a - y) \
         - ab*bb*x*xb*(a*(bb - yb) + 2*yb*(b - y) + bb*y) \
         + ab^2*x*yb*(b*bb + b*yb - bb*y) \
         + ab*bb*xb*y*(bb*(a + y) + yb*(b - 2*a)) - ab^2*b*bb*y*yb",
    ),
    None,
    Some(
        "ab*x^2*yb*(ab*(2*b - y) + b*(bb - 3*yb) + bb*y) \
         + a*xb^2*y*(a*(2*bb - yb) + bb*(b - 3*y) + b*yb) \
         + x*xb*(bb*y^2*(ab - bb) + 3*y*yb*(a*bb + ab*b) + b*yb^2*(a - b) \
                 - bb*y*(ab*b + 2*a*bb) - b*yb*(a*bb + 2*ab*b) - 2*a*ab*b*bb) \
         + ab*x*yb*(a*(b*bb + b*yb - bb*y) + b*(ab*(b - 2*y) + 2*b*yb)) \
         + a*xb*y*(ab*(b*bb - b*yb + bb*y) + bb*(a*(bb - 2*yb) + 2*bb*y)) \
         - 2*a*ab*b*bb*y*yb",
    ),
    Some("(ab*b*x*yb - a*bb*xb*y)*((ab - xb)*(bb*y - b*yb) + (bb - yb)*(a*xb - ab*x))"),
    None,
];

const BASE_LOCUS: [&[&str]; 7] = [
    &["x", "y"],
    &["x - y", "x - b", "a - b"],
    &["x - y", "a - b", "xb - ab", "yb - bb"],
    &["x - y", "xb - yb", "a - b", "ab - bb"],
    &["xb", "yb"],
    &["xb - yb", "xb - bb", "ab - bb"],
    &["xb - yb", "ab - bb", "x - a", "y - b"],
];

/// The four-bar system `f_1..f_15` in `(a, ab, b, bb, x, xb, y, yb)`.
pub fn alt_system() -> ProblemInstance {
    let ring = Ring::new(&VARS, Rationals, MonomialOrder::GrevLex).expect("valid variables");
    let parse = |s: &str| parse_polynomial(s, &ring).expect("built-in polynomial parses");
    let mut polys: Vec<Option<Polynomial<Rationals>>> = SOURCES.iter().map(|s| s.map(parse)).collect();
    for j in 0..15 {
        if polys[j].is_none() {
            let partner = polys[POLY_CONJ[j]].as_ref().expect("partner is written out");
            polys[j] = Some(partner.permute_vars(&VAR_CONJ).expect("arity"));
        }
    }
    let polys = polys.into_iter().map(|p| p.unwrap()).collect();
    let base_locus = BASE_LOCUS.iter().map(|space| space.iter().map(|s| parse(s)).collect()).collect();
    ProblemInstance {
        name: "alt".into(),
        ring,
        polys,
        base_locus,
        conjugation: Some(Conjugation { var_perm: VAR_CONJ.to_vec(), poly_perm: POLY_CONJ.to_vec() }),
    }
}

/// Exponents `(i, j)` of `c_k = p^i * pbar^j`.
pub const COUPLER_EXPONENTS: [(u32, u32); 15] = [
    (3, 3),
    (3, 2),
    (2, 3),
    (3, 1),
    (1, 3),
    (3, 0),
    (0, 3),
    (2, 2),
    (2, 1),
    (1, 2),
    (2, 0),
    (0, 2),
    (1, 1),
    (1, 0),
    (0, 1),
];

/// The 15 coupler-curve coefficients at a point `(p, pbar)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplerCoefficients<E> {
    pub point: (E, E),
    pub c: Vec<E>,
}

pub fn coupler_coefficients<F: Field>(field: &F, p: &F::Elem, pbar: &F::Elem) -> CouplerCoefficients<F::Elem> {
    let c = COUPLER_EXPONENTS
        .iter()
        .map(|&(i, j)| field.mul(&field.pow(p, i as u64), &field.pow(pbar, j as u64)))
        .collect();
    CouplerCoefficients { point: (p.clone(), pbar.clone()), c }
}

/// `G_i = sum_j c_j(p_i, pbar_i) f_j` for each supplied point, in `ring`
/// (which must use the same eight variables).
pub fn alt_coupler_instance<F: Field>(points: &[(F::Elem, F::Elem)], ring: &Arc<Ring<F>>) -> Result<Vec<Polynomial<F>>> {
    let inst = alt_system();
    if ring.vars() != inst.vars() {
        return Err(Error::RingMismatch);
    }
    let f: Vec<Polynomial<F>> = inst.polys.iter().map(|p| p.reduce_into(ring)).collect::<Result<_>>()?;
    let field = ring.field();
    points
        .iter()
        .map(|(p, pb)| {
            let cc = coupler_coefficients(field, p, pb);
            f.iter().zip(&cc.c).try_fold(Polynomial::zero(ring), |acc, (fj, c)| acc.add(&fj.scalar_mul(c)))
        })
        .collect()
}
