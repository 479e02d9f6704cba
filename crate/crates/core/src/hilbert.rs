//! Affine Hilbert functions, symbolic-reduction upper bounds, Veronese
//! rank lower bounds and the certification system built from them.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::{Field, PrimeField};
use crate::error::{Error, Result};
use crate::groebner::{is_zero_dimensional, standard_monomials, GroebnerBasis};
use crate::linalg::{inverse, rank, SparseEchelon, SparseRow};
use crate::poly::{monomials_up_to_degree, Monomial, MonomialOrder, Polynomial, Ring};

/// `HF(0..=d_max)` and, for zero-dimensional ideals, where it settles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertProfile {
    pub values: Vec<u64>,
    pub stabilized_at: Option<u32>,
    pub stable_value: Option<u64>,
}

impl HilbertProfile {
    pub fn at(&self, d: u32) -> Option<u64> {
        match self.values.get(d as usize) {
            Some(&v) => Some(v),
            None => self.stabilized_at.filter(|&s| d >= s).and(self.stable_value),
        }
    }
}

/// `HF(d)` as the number of standard monomials of degree at most `d`.
pub fn affine_hilbert_function<F: Field>(g: &GroebnerBasis<F>, d_max: u32) -> Result<HilbertProfile> {
    if !g.order().is_degree_compatible() {
        return Err(Error::OrderNotDegreeCompatible);
    }
    let n = g.ring().nvars();
    let lms = g.leading_monomials();
    let mut per_degree = vec![0u64; d_max as usize + 1];
    for m in standard_monomials(lms, n, Some(d_max)) {
        per_degree[m.total_degree() as usize] += 1;
    }
    let values: Vec<u64> = per_degree
        .iter()
        .scan(0u64, |acc, &c| {
            *acc += c;
            Some(*acc)
        })
        .collect();
    let (stabilized_at, stable_value) = if g.is_unit() {
        (Some(0), Some(0))
    } else if is_zero_dimensional(lms, n) {
        let all = standard_monomials(lms, n, None);
        let top = all.iter().map(|m| m.total_degree()).max().unwrap_or(0);
        (Some(top), Some(all.len() as u64))
    } else {
        (None, None)
    };
    Ok(HilbertProfile { values, stabilized_at, stable_value })
}

/// `C(n + d, d)`, the number of monomials of degree at most `d`.
pub fn monomial_count(n: usize, d: u32) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for k in 1..=d as usize {
        acc = acc * BigUint::from(n + k) / BigUint::from(k);
    }
    acc
}

fn small_count(n: usize, d: u32) -> usize {
    usize::try_from(monomial_count(n, d)).expect("monomial count fits in usize")
}

/// `dim J_d^e` together with the bound `C(n+d, d) - dim J_d^e >= HF(d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JdeDimension {
    pub d: u32,
    pub e: u32,
    pub dim: usize,
    pub bound: usize,
}

/// Dimension of the degree-`<= d` part of the span of all `m * h_i` with
/// `deg(m * h_i) <= d + e`. Columns run by descending degree, so one
/// echelon pass yields both ranks: pivots past the high-degree prefix
/// count exactly the truncated span.
pub fn jde_dimension<F: SparseEchelon>(h: &[Polynomial<F>], d: u32, e: u32) -> Result<JdeDimension> {
    let ring = h.first().map(|f| f.ring().clone()).ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
    if h.iter().any(|f| f.ring() != &ring) {
        return Err(Error::RingMismatch);
    }
    let n = ring.nvars();
    let top = d + e;
    let mut columns = monomials_up_to_degree(n, top, MonomialOrder::GrevLex);
    // GrevLex is degree-first, so descending order is already degree-sorted
    debug_assert!(columns.windows(2).all(|w| w[0].total_degree() >= w[1].total_degree()));
    let split = columns.iter().take_while(|m| m.total_degree() > d).count();
    let index: HashMap<Monomial, usize> = columns.drain(..).enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Vec<SparseRow<F::Elem>> = Vec::new();
    for f in h.iter().filter(|f| !f.is_zero()) {
        let f = f.normalized();
        let deg = f.total_degree().unwrap_or(0);
        if deg > top {
            continue;
        }
        for m in monomials_up_to_degree(n, top - deg, MonomialOrder::GrevLex) {
            let mut row: SparseRow<F::Elem> = f.terms().iter().map(|(c, t)| (index[&t.mul(&m)], c.clone())).collect();
            row.sort_unstable_by_key(|(c, _)| *c);
            rows.push(row);
        }
    }
    let field = ring.field().clone();
    let pivots = field.echelon_pivots(rows, index.len());
    let dim = pivots.iter().filter(|&&c| c >= split).count();
    Ok(JdeDimension { d, e, dim, bound: small_count(n, d) - dim })
}

/// Rows `nu_d(point)` over the monomials of degree at most `d`, in the
/// canonical (descending GrevLex) enumeration.
#[derive(Debug, Clone)]
pub struct VeroneseMatrix<E> {
    pub points: Vec<Vec<E>>,
    pub degree: u32,
    pub columns: Vec<Monomial>,
    pub entries: Vec<Vec<E>>,
    /// Repeated input points that were dropped.
    pub duplicates_removed: usize,
}

fn eval_monomial<F: Field>(field: &F, m: &Monomial, pt: &[F::Elem]) -> F::Elem {
    m.exponents().iter().zip(pt).fold(field.one(), |acc, (&e, x)| field.mul(&acc, &field.pow(x, e as u64)))
}

impl<E: Clone + PartialEq> VeroneseMatrix<E> {
    pub fn new<F: Field<Elem = E>>(field: &F, points: &[Vec<E>], d: u32) -> Result<Self> {
        let n = points.first().map_or(0, |p| p.len());
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: p.len() });
        }
        let mut distinct: Vec<Vec<E>> = Vec::with_capacity(points.len());
        for p in points {
            if !distinct.contains(p) {
                distinct.push(p.clone());
            }
        }
        let columns = monomials_up_to_degree(n, d, MonomialOrder::GrevLex);
        let entries =
            distinct.iter().map(|p| columns.iter().map(|m| eval_monomial(field, m, p)).collect()).collect();
        Ok(VeroneseMatrix { duplicates_removed: points.len() - distinct.len(), points: distinct, degree: d, columns, entries })
    }
}

/// `rank M_d(points)`, a lower bound for `HF(d)` of any ideal vanishing at
/// the points.
pub fn veronese_rank_lower_bound<F: Field>(field: &F, points: &[Vec<F::Elem>], d: u32) -> Result<usize> {
    let m = VeroneseMatrix::new(field, points, d)?;
    Ok(rank(field, &m.entries))
}

/// Default enumeration budget for [`find_points_bruteforce`].
pub const DEFAULT_POINT_BUDGET: u64 = 10_000_000;

/// Every `F_p`-rational common zero, by exhaustive search over `F_p^n`.
pub fn find_points_bruteforce(gens: &[Polynomial<PrimeField>], budget: u64) -> Result<Vec<Vec<u64>>> {
    let ring = gens.first().map(|f| f.ring().clone()).ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
    let p = ring.field().modulus();
    let n = ring.nvars();
    let needed = BigUint::from(p).pow(n as u32);
    if needed > BigUint::from(budget) {
        return Err(Error::BudgetExceeded { needed: needed.to_string(), budget });
    }
    let mut out = Vec::new();
    let mut pt = vec![0u64; n];
    loop {
        let mut zero = true;
        for g in gens {
            if g.evaluate(&pt)? != 0 {
                zero = false;
                break;
            }
        }
        if zero {
            out.push(pt.clone());
        }
        // odometer, last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            pt[k] += 1;
            if pt[k] < p {
                break;
            }
            pt[k] = 0;
        }
    }
}

/// The well-constrained system `(G(y_1), ..., G(y_k), Lambda * S_d(y) - I)`.
#[derive(Debug, Clone)]
pub struct CertificationSystem<F: Field> {
    pub ring: Arc<Ring<F>>,
    pub polynomials: Vec<Polynomial<F>>,
    pub degree: u32,
    pub columns: Vec<Monomial>,
    /// `S_d(points)^{-1}`, the exact value of `Lambda` at the given points.
    pub lambda_start: Vec<Vec<F::Elem>>,
}

impl<F: Field> CertificationSystem<F> {
    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn len(&self) -> usize {
        self.polynomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polynomials.is_empty()
    }
}

/// Builds the certification system for `k` points and `k` selected columns
/// of degree at most `d`. Variables are `<x>_<j>` for the copies and
/// `L_<r>_<c>` for `Lambda`.
pub fn emit_certification_system<F: Field>(
    g: &[Polynomial<F>],
    points: &[Vec<F::Elem>],
    d: u32,
    columns: &[Monomial],
) -> Result<CertificationSystem<F>> {
    let ring = g.first().map(|f| f.ring().clone()).ok_or_else(|| Error::InvalidArgument("empty system".into()))?;
    let (n, k) = (ring.nvars(), points.len());
    if g.len() != n {
        return Err(Error::InvalidArgument(format!("system has {} equations in {n} variables", g.len())));
    }
    if columns.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: columns.len() });
    }
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: p.len() });
    }
    if let Some(m) = columns.iter().find(|m| m.nvars() != n || m.total_degree() > d) {
        return Err(Error::InvalidArgument(format!("column {m:?} is not a monomial of degree <= {d}")));
    }
    let field = ring.field().clone();
    let s: Vec<Vec<F::Elem>> = points.iter().map(|p| columns.iter().map(|m| eval_monomial(&field, m, p)).collect()).collect();
    let lambda_start = inverse(&field, &s).ok_or(Error::SingularSubmatrix)?;

    let mut names: Vec<String> = Vec::with_capacity(k * n + k * k);
    for j in 1..=k {
        names.extend(ring.vars().iter().map(|v| format!("{v}_{j}")));
    }
    for r in 1..=k {
        names.extend((1..=k).map(|c| format!("L_{r}_{c}")));
    }
    let big = Ring::new(&names, field.clone(), ring.order())?;
    let total = big.nvars();
    let var = |i: usize| Polynomial::var(&big, i);
    let lam = |r: usize, t: usize| var(k * n + r * k + t);

    let mut polys = Vec::with_capacity(k * n + k * k);
    for j in 0..k {
        let images: Vec<Polynomial<F>> = (0..n).map(|i| var(j * n + i)).collect();
        for f in g {
            polys.push(f.compose(&big, &images)?);
        }
    }
    // S_d(y)[t][c] = column c at y_t
    let lift = |m: &Monomial, t: usize| {
        let mut exps = vec![0u16; total];
        exps[t * n..(t + 1) * n].copy_from_slice(m.exponents());
        Monomial::from_vec(exps)
    };
    for r in 0..k {
        for c in 0..k {
            let mut acc = Polynomial::zero(&big);
            for t in 0..k {
                let term = Polynomial::monomial(&big, field.one(), lift(&columns[c], t));
                acc = acc.add(&lam(r, t).mul(&term)?)?;
            }
            if r == c {
                acc = acc.sub(&Polynomial::one(&big))?;
            }
            polys.push(acc);
        }
    }
    Ok(CertificationSystem { ring: big, polynomials: polys, degree: d, columns: columns.to_vec(), lambda_start })
}
