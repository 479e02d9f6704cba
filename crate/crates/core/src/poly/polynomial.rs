use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::monomial::{Monomial, MonomialOrder};
use crate::arith::{Field, Rational, Rationals};
use crate::error::{invalid, Error, Result};

/// A coefficient paired with its monomial.
pub type Term<E> = (E, Monomial);

/// Polynomial ring `K[x_1, ..., x_n]` with an active monomial order.
#[derive(Debug, Clone, PartialEq)]
pub struct Ring<F: Field> {
    vars: Vec<String>,
    field: F,
    order: MonomialOrder,
}

impl<F: Field> Ring<F> {
    pub fn new<S: AsRef<str>>(vars: &[S], field: F, order: MonomialOrder) -> Result<Arc<Self>> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(invalid(format!("`{v}` is not a valid variable name")));
            }
            if vars[..i].contains(v) {
                return Err(invalid(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Arc::new(Ring { vars, field, order }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables and field under another order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        Arc::new(Ring { vars: self.vars.clone(), field: self.field.clone(), order })
    }

    /// Same variables and order over another field.
    pub fn with_field<G: Field>(&self, field: G) -> Arc<Ring<G>> {
        Arc::new(Ring { vars: self.vars.clone(), field, order: self.order })
    }

    /// Appends fresh variables (placed last, i.e. least in priority).
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Arc<Self>> {
        let mut vars = self.vars.clone();
        vars.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Ring::new(&vars, self.field.clone(), self.order)
    }

    /// A name not yet used in this ring, starting from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.vars.contains(&name) {
            name.push('_');
        }
        name
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Sparse polynomial; terms are sorted strictly descending under the ring's
/// order and carry no zero coefficients.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    ring: Arc<Ring<F>>,
    terms: Vec<Term<F::Elem>>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_ring(&self.ring, &other.ring)
    }
}

fn same_ring<F: Field>(a: &Arc<Ring<F>>, b: &Arc<Ring<F>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Sorts descending, merges duplicates and drops zeros.
pub(crate) fn canonicalize<F: Field>(field: &F, order: MonomialOrder, terms: &mut Vec<Term<F::Elem>>) {
    terms.sort_by(|a, b| order.cmp(&b.1, &a.1));
    let mut out: Vec<Term<F::Elem>> = Vec::with_capacity(terms.len());
    for (c, m) in terms.drain(..) {
        match out.last_mut() {
            Some(last) if last.1 == m => last.0 = field.add(&last.0, &c),
            _ => {
                if let Some(last) = out.last() {
                    if field.is_zero(&last.0) {
                        out.pop();
                    }
                }
                out.push((c, m));
            }
        }
    }
    if let Some(last) = out.last() {
        if field.is_zero(&last.0) {
            out.pop();
        }
    }
    *terms = out;
}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Arc<Ring<F>>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring<F>>, c: F::Elem) -> Self {
        let terms = if ring.field.is_zero(&c) { vec![] } else { vec![(c, Monomial::one(ring.nvars()))] };
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn one(ring: &Arc<Ring<F>>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn var(ring: &Arc<Ring<F>>, index: usize) -> Self {
        Polynomial { ring: ring.clone(), terms: vec![(ring.field.one(), Monomial::var(ring.nvars(), index))] }
    }

    pub fn monomial(ring: &Arc<Ring<F>>, c: F::Elem, m: Monomial) -> Self {
        Self::from_terms(ring, vec![(c, m)]).expect("monomial matches ring")
    }

    /// Builds a polynomial from arbitrary terms, sorting and merging them.
    pub fn from_terms(ring: &Arc<Ring<F>>, mut terms: Vec<Term<F::Elem>>) -> Result<Self> {
        for (_, m) in &terms {
            if m.nvars() != ring.nvars() {
                return Err(Error::DimensionMismatch { expected: ring.nvars(), got: m.nvars() });
            }
        }
        canonicalize(&ring.field, ring.order, &mut terms);
        Ok(Polynomial { ring: ring.clone(), terms })
    }

    /// Trusted constructor for already canonical term lists.
    pub(crate) fn from_sorted(ring: &Arc<Ring<F>>, terms: Vec<Term<F::Elem>>) -> Self {
        debug_assert!(terms.windows(2).all(|w| ring.order.cmp(&w[0].1, &w[1].1) == Ordering::Greater));
        debug_assert!(terms.iter().all(|(c, _)| !ring.field.is_zero(c)));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        &self.ring.field
    }

    pub fn terms(&self) -> &[Term<F::Elem>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term<F::Elem>> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(_, m)| m.is_one())
    }

    pub fn leading_term(&self) -> Option<&Term<F::Elem>> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn leading_coefficient(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(_, m)| m.total_degree()).max()
    }

    /// Largest exponent of variable `index`.
    pub fn degree_in(&self, index: usize) -> u16 {
        self.terms.iter().map(|(_, m)| m.exponents()[index]).max().unwrap_or(0)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.combine(other, false))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.combine(other, true))
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let field = &self.ring.field;
        let order = self.ring.order;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let map_b = |c: &F::Elem| if negate { field.neg(c) } else { c.clone() };
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].1, &b[j].1) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((map_b(&b[j].0), b[j].1.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { field.sub(&a[i].0, &b[j].0) } else { field.add(&a[i].0, &b[j].0) };
                    if !field.is_zero(&c) {
                        out.push((c, a[i].1.clone()));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(c, m)| (map_b(c), m.clone())));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn neg(&self) -> Self {
        let field = &self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(c, m)| (field.neg(c), m.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let field = &self.ring.field;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (c1, m1) in &self.terms {
            for (c2, m2) in &other.terms {
                terms.push((field.mul(c1, c2), m1.try_mul(m2)?));
            }
        }
        canonicalize(field, self.ring.order, &mut terms);
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn scalar_mul(&self, c: &F::Elem) -> Self {
        let field = &self.ring.field;
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(a, m)| (field.mul(a, c), m.clone())).collect(),
        }
    }

    /// Multiplies by `c * m`; order is preserved so no re-sort is needed.
    pub fn mul_term(&self, c: &F::Elem, m: &Monomial) -> Result<Self> {
        let field = &self.ring.field;
        if field.is_zero(c) {
            return Ok(Self::zero(&self.ring));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (a, n) in &self.terms {
            terms.push((field.mul(a, c), n.try_mul(m)?));
        }
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Divides through by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) => self.scalar_mul(&self.ring.field.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    /// Canonical scaling: monic over prime fields, integer-primitive with
    /// positive leading coefficient over the rationals.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let coeffs: Vec<&F::Elem> = self.terms.iter().map(|(c, _)| c).collect();
        self.scalar_mul(&self.ring.field.normalizer(&coeffs))
    }

    pub fn evaluate(&self, point: &[F::Elem]) -> Result<F::Elem> {
        let n = self.ring.nvars();
        if point.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: point.len() });
        }
        let field = &self.ring.field;
        let mut acc = field.zero();
        for (c, m) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = field.mul(&t, &field.pow(x, e as u64));
                }
            }
            acc = field.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Substitutes `images[i]` for variable `i`; the images may live in a
    /// different ring over the same field.
    pub fn compose(&self, target: &Arc<Ring<F>>, images: &[Polynomial<F>]) -> Result<Polynomial<F>> {
        let n = self.ring.nvars();
        if images.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: images.len() });
        }
        for img in images {
            if !same_ring(img.ring(), target) {
                return Err(Error::RingMismatch);
            }
        }
        // powers[i][k] = images[i]^k, built lazily
        let mut powers: Vec<Vec<Polynomial<F>>> = images.iter().map(|_| vec![Polynomial::one(target)]).collect();
        let mut acc = Polynomial::zero(target);
        for (c, m) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i])?;
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize])?;
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Re-embeds into a ring with the same field and a superset of the
    /// variables (matched by name).
    pub fn embed(&self, target: &Arc<Ring<F>>) -> Result<Polynomial<F>> {
        let map: Vec<usize> = self
            .ring
            .vars()
            .iter()
            .map(|v| target.var_index(v).ok_or_else(|| Error::UnknownVariable(v.clone())))
            .collect::<Result<_>>()?;
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(c, m)| {
                let mut e = vec![0u16; n];
                for (i, &x) in m.exponents().iter().enumerate() {
                    e[map[i]] = x;
                }
                (c.clone(), Monomial::from_vec(e))
            })
            .collect();
        Polynomial::from_terms(target, terms)
    }

    /// Same polynomial, re-sorted for another ring with identical variables
    /// and field (typically a different order).
    pub fn with_ring(&self, target: &Arc<Ring<F>>) -> Result<Polynomial<F>> {
        if target.vars() != self.ring.vars() || target.field() != self.ring.field() {
            return Err(Error::RingMismatch);
        }
        Polynomial::from_terms(target, self.terms.clone())
    }

    /// Applies the variable permutation `perm` (variable `i` becomes
    /// variable `perm[i]`).
    pub fn permute_vars(&self, perm: &[usize]) -> Result<Polynomial<F>> {
        let n = self.ring.nvars();
        if perm.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: perm.len() });
        }
        let terms = self
            .terms
            .iter()
            .map(|(c, m)| {
                let mut e = vec![0u16; n];
                for (i, &x) in m.exponents().iter().enumerate() {
                    e[perm[i]] = x;
                }
                (c.clone(), Monomial::from_vec(e))
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Image under a field homomorphism `K -> G` given coefficient-wise.
    pub fn map_coefficients<G: Field>(
        &self,
        target: &Arc<Ring<G>>,
        mut f: impl FnMut(&F::Elem) -> Result<G::Elem>,
    ) -> Result<Polynomial<G>> {
        if target.nvars() != self.ring.nvars() {
            return Err(Error::DimensionMismatch { expected: self.ring.nvars(), got: target.nvars() });
        }
        let terms = self.terms.iter().map(|(c, m)| Ok((f(c)?, m.clone()))).collect::<Result<Vec<_>>>()?;
        Polynomial::from_terms(target, terms)
    }
}

impl Polynomial<Rationals> {
    /// Reduction into another field (e.g. `F_p`); fails if a denominator is
    /// not invertible there.
    pub fn reduce_into<G: Field>(&self, target: &Arc<Ring<G>>) -> Result<Polynomial<G>> {
        let field = target.field().clone();
        self.map_coefficients(target, |q| field.from_rational(q))
    }

    /// Largest absolute value among the coefficients.
    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms.iter().map(|(c, _)| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    /// Whether the coefficients are coprime integers.
    pub fn is_integer_primitive(&self) -> bool {
        use num_integer::Integer;
        use num_traits::One;
        if !self.terms.iter().all(|(c, _)| c.is_integer()) {
            return false;
        }
        let g = self.terms.iter().fold(num_bigint::BigInt::default(), |g, (c, _)| g.gcd(c.numer()));
        self.is_zero() || g.is_one()
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::print_polynomial(self))
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}
