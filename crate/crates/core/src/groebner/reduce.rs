//! Multivariate division: a geobucket engine for production use and a plain
//! merge engine kept as an independent cross-check.

use std::cmp::Ordering;
use std::time::Instant;

use crate::arith::Field;
use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Term};

/// Reduction engine used by normal forms and Buchberger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Geobucket,
    Merge,
}

/// Read-only view of the reducers available during a division.
pub(crate) struct Reducers<'a, E> {
    pub polys: &'a [Vec<Term<E>>],
    pub masks: &'a [u64],
    pub active: &'a [usize],
    /// Take the first divisor in `active` order instead of the shortest.
    pub first: bool,
}

impl<E> Reducers<'_, E> {
    /// Active reducer whose leading monomial divides `m`.
    #[inline]
    pub fn find(&self, m: &Monomial) -> Option<usize> {
        let mask = m.divmask();
        let mut best: Option<usize> = None;
        for &j in self.active {
            if self.masks[j] & !mask != 0 {
                continue;
            }
            let g = &self.polys[j];
            if g[0].1.divides(m) && best.is_none_or(|b| g.len() < self.polys[b].len()) {
                best = Some(j);
                if self.first {
                    break;
                }
            }
        }
        best
    }
}

pub(crate) struct Deadline {
    at: Option<Instant>,
    ticks: u32,
}

impl Deadline {
    pub fn new(at: Option<Instant>) -> Self {
        Deadline { at, ticks: 0 }
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks & 0x3f == 0 {
            if let Some(at) = self.at {
                if Instant::now() >= at {
                    return Err(Error::Timeout);
                }
            }
        }
        Ok(())
    }
}

/// `a*f + b*m*g` for descending term lists, optionally skipping leading terms.
pub(crate) fn lin_comb<F: Field>(
    field: &F,
    order: MonomialOrder,
    a: &F::Elem,
    ma: &Monomial,
    f: &[Term<F::Elem>],
    b: &F::Elem,
    mb: &Monomial,
    g: &[Term<F::Elem>],
) -> Vec<Term<F::Elem>> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut fi = f.first().map(|t| ma.mul(&t.1));
    let mut gj = g.first().map(|t| mb.mul(&t.1));
    loop {
        match (fi.take(), gj.take()) {
            (None, None) => break,
            (Some(x), None) => {
                out.push((field.mul(a, &f[i].0), x));
                i += 1;
                fi = f.get(i).map(|t| ma.mul(&t.1));
            }
            (None, Some(y)) => {
                out.push((field.mul(b, &g[j].0), y));
                j += 1;
                gj = g.get(j).map(|t| mb.mul(&t.1));
            }
            (Some(x), Some(y)) => match order.cmp(&x, &y) {
                Ordering::Greater => {
                    out.push((field.mul(a, &f[i].0), x));
                    i += 1;
                    fi = f.get(i).map(|t| ma.mul(&t.1));
                    gj = Some(y);
                }
                Ordering::Less => {
                    out.push((field.mul(b, &g[j].0), y));
                    j += 1;
                    gj = g.get(j).map(|t| mb.mul(&t.1));
                    fi = Some(x);
                }
                Ordering::Equal => {
                    let c = field.add(&field.mul(a, &f[i].0), &field.mul(b, &g[j].0));
                    if !field.is_zero(&c) {
                        out.push((c, x));
                    }
                    i += 1;
                    j += 1;
                    fi = f.get(i).map(|t| ma.mul(&t.1));
                    gj = g.get(j).map(|t| mb.mul(&t.1));
                }
            },
        }
    }
    out
}

/// Merges two ascending term lists.
fn merge_ascending<F: Field>(field: &F, order: MonomialOrder, a: Vec<Term<F::Elem>>, b: Vec<Term<F::Elem>>) -> Vec<Term<F::Elem>> {
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        let ord = match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) => order.cmp(&x.1, &y.1),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => break,
        };
        match ord {
            Ordering::Less => out.push(ia.next().unwrap()),
            Ordering::Greater => out.push(ib.next().unwrap()),
            Ordering::Equal => {
                let (c, m) = ia.next().unwrap();
                let (d, _) = ib.next().unwrap();
                let s = field.add(&c, &d);
                if !field.is_zero(&s) {
                    out.push((s, m));
                }
            }
        }
    }
    out
}

/// Sum of polynomials kept in buckets of geometrically growing capacity.
/// Each bucket is sorted ascending so its leading term is the last entry.
struct Geobucket<E> {
    buckets: Vec<Vec<Term<E>>>,
}

fn capacity(k: usize) -> usize {
    4usize << (2 * k)
}

fn bucket_for(len: usize) -> usize {
    let mut k = 0;
    while capacity(k) < len {
        k += 1;
    }
    k
}

impl<E: Clone> Geobucket<E> {
    fn new() -> Self {
        Geobucket { buckets: Vec::new() }
    }

    fn add<F: Field<Elem = E>>(&mut self, field: &F, order: MonomialOrder, mut p: Vec<Term<E>>) {
        if p.is_empty() {
            return;
        }
        let mut k = bucket_for(p.len());
        loop {
            if self.buckets.len() <= k {
                self.buckets.resize_with(k + 1, Vec::new);
            }
            let cur = std::mem::take(&mut self.buckets[k]);
            p = merge_ascending(field, order, cur, p);
            if p.len() <= capacity(k) {
                self.buckets[k] = p;
                return;
            }
            k += 1;
        }
    }

    fn pop_leading<F: Field<Elem = E>>(&mut self, field: &F, order: MonomialOrder) -> Option<Term<E>> {
        loop {
            let mut best: Option<usize> = None;
            for k in 0..self.buckets.len() {
                let Some(t) = self.buckets[k].last() else { continue };
                match best {
                    None => best = Some(k),
                    Some(b) => {
                        let bt = self.buckets[b].last().unwrap();
                        match order.cmp(&t.1, &bt.1) {
                            Ordering::Greater => best = Some(k),
                            Ordering::Equal => {
                                let (c, _) = self.buckets[k].pop().unwrap();
                                let bt = self.buckets[b].last_mut().unwrap();
                                bt.0 = field.add(&bt.0, &c);
                            }
                            Ordering::Less => {}
                        }
                    }
                }
            }
            let b = best?;
            let t = self.buckets[b].pop().unwrap();
            if !field.is_zero(&t.0) {
                return Some(t);
            }
        }
    }
}

/// Scaled tail `-c*m*g[1..]` in ascending order.
fn neg_scaled_tail<F: Field>(field: &F, c: &F::Elem, m: &Monomial, g: &[Term<F::Elem>]) -> Vec<Term<F::Elem>> {
    let nc = field.neg(c);
    g[1..].iter().rev().map(|(d, n)| (field.mul(&nc, d), m.mul(n))).collect()
}

/// Full reduction of `f` (descending terms) by `reducers`. Returns
/// `(s, r)` with `s * f = r + sum(q_i g_i)` and no term of `r` divisible by
/// a reducer's leading monomial. `s` is one unless the field prefers
/// fraction-free steps.
pub(crate) fn reduce<F: Field>(
    field: &F,
    order: MonomialOrder,
    engine: Engine,
    f: Vec<Term<F::Elem>>,
    reducers: &Reducers<'_, F::Elem>,
    deadline: &mut Deadline,
) -> Result<(F::Elem, Vec<Term<F::Elem>>)> {
    match engine {
        Engine::Geobucket => reduce_geobucket(field, order, f, reducers, deadline),
        Engine::Merge => reduce_merge(field, order, f, reducers, deadline),
    }
}

fn scale_terms<F: Field>(field: &F, a: &F::Elem, terms: &mut [Term<F::Elem>]) {
    for t in terms {
        t.0 = field.mul(&t.0, a);
    }
}

fn reduce_geobucket<F: Field>(
    field: &F,
    order: MonomialOrder,
    mut f: Vec<Term<F::Elem>>,
    reducers: &Reducers<'_, F::Elem>,
    deadline: &mut Deadline,
) -> Result<(F::Elem, Vec<Term<F::Elem>>)> {
    let mut out = Vec::new();
    let mut scale = field.one();
    f.reverse();
    let mut gb = Geobucket::new();
    gb.add(field, order, f);
    while let Some((c, m)) = gb.pop_leading(field, order) {
        deadline.tick()?;
        match reducers.find(&m) {
            Some(j) => {
                let g = &reducers.polys[j];
                let q = m.div(&g[0].1).expect("divisor checked");
                let (a, b) = field.reduction_cofactors(&c, &g[0].0);
                if !field.is_one(&a) {
                    for bucket in &mut gb.buckets {
                        scale_terms(field, &a, bucket);
                    }
                    scale_terms(field, &a, &mut out);
                    scale = field.mul(&scale, &a);
                }
                gb.add(field, order, neg_scaled_tail(field, &b, &q, g));
            }
            None => out.push((c, m)),
        }
    }
    Ok((scale, out))
}

fn reduce_merge<F: Field>(
    field: &F,
    order: MonomialOrder,
    mut f: Vec<Term<F::Elem>>,
    reducers: &Reducers<'_, F::Elem>,
    deadline: &mut Deadline,
) -> Result<(F::Elem, Vec<Term<F::Elem>>)> {
    let mut out = Vec::new();
    let mut scale = field.one();
    let nvars = f.first().map_or(0, |t| t.1.nvars());
    let one = Monomial::one(nvars);
    while !f.is_empty() {
        deadline.tick()?;
        let (c, m) = f[0].clone();
        match reducers.find(&m) {
            Some(j) => {
                let g = &reducers.polys[j];
                let q = m.div(&g[0].1).expect("divisor checked");
                let (a, b) = field.reduction_cofactors(&c, &g[0].0);
                if !field.is_one(&a) {
                    scale_terms(field, &a, &mut out);
                    scale = field.mul(&scale, &a);
                }
                f = lin_comb(field, order, &a, &one, &f[1..], &field.neg(&b), &q, &g[1..]);
            }
            None => {
                out.push((c, m));
                f.remove(0);
            }
        }
    }
    Ok((scale, out))
}
