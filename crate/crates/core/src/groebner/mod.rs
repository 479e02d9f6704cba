//! Buchberger's algorithm, normal forms and quotient-ring data.

mod buchberger;
mod reduce;

use std::sync::Arc;
use std::time::Duration;

pub use buchberger::{buchberger, buchberger_in, BuchbergerOptions};
pub use reduce::Engine;

use crate::arith::Field;
use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Polynomial, Ring, Term};
use reduce::{Deadline, Reducers};

/// Counters collected during a basis computation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GbStats {
    pub pairs_reduced: usize,
    pub pairs_pruned: usize,
    pub zero_reductions: usize,
    pub elapsed: Duration,
}

/// A reduced Groebner basis: monic generators, sorted ascending by leading
/// monomial. The unit ideal is `{1}`, the zero ideal has no generators.
#[derive(Debug, Clone)]
pub struct GroebnerBasis<F: Field> {
    ring: Arc<Ring<F>>,
    generators: Vec<Polynomial<F>>,
    leading_monomials: Vec<Monomial>,
    stats: GbStats,
}

impl<F: Field> GroebnerBasis<F> {
    pub(crate) fn from_reduced(ring: Arc<Ring<F>>, generators: Vec<Polynomial<F>>, stats: GbStats) -> Self {
        let leading_monomials = generators.iter().map(|g| g.leading_monomial().expect("nonzero").clone()).collect();
        GroebnerBasis { ring, generators, leading_monomials, stats }
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading_monomials
    }

    pub fn stats(&self) -> &GbStats {
        &self.stats
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.leading_monomials.len() == 1 && self.leading_monomials[0].is_one()
    }

    /// Normal form of `f` with respect to this basis.
    pub fn reduce(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        normal_form(f, &self.generators)
    }

    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    pub fn quotient_basis(&self) -> QuotientBasis {
        quotient_basis(self)
    }

    pub fn degree(&self) -> Result<usize> {
        ideal_degree(self)
    }

    /// Whether a monomial lies outside the leading-term ideal.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leading_monomials.iter().any(|l| l.divides(m))
    }
}

/// Remainder of `f` on division by `gens`; reducers are tried in sequence
/// order, so the result is deterministic for a given generator list.
pub fn normal_form<F: Field>(f: &Polynomial<F>, gens: &[Polynomial<F>]) -> Result<Polynomial<F>> {
    normal_form_with(f, gens, Engine::default())
}

pub fn normal_form_with<F: Field>(f: &Polynomial<F>, gens: &[Polynomial<F>], engine: Engine) -> Result<Polynomial<F>> {
    let ring = f.ring();
    let mut polys: Vec<Vec<Term<F::Elem>>> = Vec::new();
    for g in gens {
        if **g.ring() != **ring {
            return Err(Error::RingMismatch);
        }
        if !g.is_zero() {
            polys.push(g.terms().to_vec());
        }
    }
    let masks: Vec<u64> = polys.iter().map(|p| p[0].1.divmask()).collect();
    let active: Vec<usize> = (0..polys.len()).collect();
    let reducers = Reducers { polys: &polys, masks: &masks, active: &active, first: true };
    let field = ring.field();
    let (scale, mut r) = reduce::reduce(field, ring.order(), engine, f.terms().to_vec(), &reducers, &mut Deadline::new(None))?;
    if !field.is_one(&scale) {
        let inv = field.inv(&scale)?;
        for t in &mut r {
            t.0 = field.mul(&t.0, &inv);
        }
    }
    Ok(Polynomial::from_sorted(ring, r))
}

/// Standard monomials of a reduced basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientBasis {
    /// Ascending under the basis order; empty when the quotient is infinite.
    pub standard_monomials: Vec<Monomial>,
    pub is_finite: bool,
}

impl QuotientBasis {
    pub fn len(&self) -> Option<usize> {
        self.is_finite.then_some(self.standard_monomials.len())
    }
}

/// Finite iff every variable has a pure power among the leading monomials.
pub fn is_zero_dimensional(lms: &[Monomial], nvars: usize) -> bool {
    if lms.iter().any(|m| m.is_one()) {
        return true;
    }
    let mut seen = vec![false; nvars];
    for m in lms {
        if let Some(v) = m.pure_power_var() {
            seen[v] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

/// Enumerates the order ideal of monomials not divisible by any of `lms`,
/// stopping at total degree `max_degree` when given.
pub(crate) fn standard_monomials(lms: &[Monomial], nvars: usize, max_degree: Option<u32>) -> Vec<Monomial> {
    if lms.iter().any(|m| m.is_one()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u16; nvars];
    // extend only with variable indices >= the last one used, so each
    // monomial is visited once; divisibility is closed upward, so pruning is sound
    fn rec(cur: &mut Vec<u16>, from: usize, deg: u32, lms: &[Monomial], max_degree: Option<u32>, out: &mut Vec<Monomial>) {
        out.push(Monomial::new(cur));
        if max_degree.is_some_and(|d| deg >= d) {
            return;
        }
        for v in from..cur.len() {
            cur[v] += 1;
            let m = Monomial::new(cur);
            if !lms.iter().any(|l| l.divides(&m)) {
                rec(cur, v, deg + 1, lms, max_degree, out);
            }
            cur[v] -= 1;
        }
    }
    rec(&mut cur, 0, 0, lms, max_degree, &mut out);
    out
}

pub fn quotient_basis<F: Field>(g: &GroebnerBasis<F>) -> QuotientBasis {
    let n = g.ring.nvars();
    if !is_zero_dimensional(&g.leading_monomials, n) {
        return QuotientBasis { standard_monomials: Vec::new(), is_finite: false };
    }
    let mut sm = standard_monomials(&g.leading_monomials, n, None);
    let order = g.order();
    sm.sort_by(|a, b| order.cmp(a, b));
    QuotientBasis { standard_monomials: sm, is_finite: true }
}

/// Vector-space dimension of the quotient ring; 0 for the unit ideal.
pub fn ideal_degree<F: Field>(g: &GroebnerBasis<F>) -> Result<usize> {
    if g.is_unit() {
        return Ok(0);
    }
    let n = g.ring.nvars();
    if !is_zero_dimensional(&g.leading_monomials, n) {
        return Err(Error::NotZeroDimensional);
    }
    Ok(standard_monomials(&g.leading_monomials, n, None).len())
}

#[cfg(test)]
mod tests;
