use std::cmp::Ordering;
use std::sync::Arc;
use std::time::Instant;

use super::reduce::{lin_comb, reduce, Deadline, Engine, Reducers};
use super::{GbStats, GroebnerBasis};
use crate::arith::Field;
use crate::error::{invalid, Error, Result};
use crate::poly::{Monomial, MonomialOrder, Polynomial, Ring, Term};

/// Knobs for a basis computation.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuchbergerOptions {
    pub engine: Engine,
    pub deadline: Option<Instant>,
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Selection order: smallest lcm first (degree first even under lex).
fn pair_cmp(order: MonomialOrder, a: &Pair, b: &Pair) -> Ordering {
    a.lcm
        .total_degree()
        .cmp(&b.lcm.total_degree())
        .then_with(|| order.cmp(&a.lcm, &b.lcm))
        .then_with(|| a.j.cmp(&b.j))
        .then_with(|| a.i.cmp(&b.i))
}

struct State<'a, F: Field> {
    field: &'a F,
    order: MonomialOrder,
    opts: BuchbergerOptions,
    polys: Vec<Vec<Term<F::Elem>>>,
    masks: Vec<u64>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    deadline: Deadline,
    stats: GbStats,
}

impl<F: Field> State<'_, F> {
    fn lm(&self, k: usize) -> &Monomial {
        &self.polys[k][0].1
    }

    fn normalize(&self, mut p: Vec<Term<F::Elem>>) -> Vec<Term<F::Elem>> {
        let refs: Vec<&F::Elem> = p.iter().map(|t| &t.0).collect();
        let s = self.field.normalizer(&refs);
        if !self.field.is_one(&s) {
            for t in &mut p {
                t.0 = self.field.mul(&t.0, &s);
            }
        }
        p
    }

    fn reduce(&mut self, p: Vec<Term<F::Elem>>) -> Result<Vec<Term<F::Elem>>> {
        let reducers = Reducers { polys: &self.polys, masks: &self.masks, active: &self.active, first: false };
        Ok(reduce(self.field, self.order, self.opts.engine, p, &reducers, &mut self.deadline)?.1)
    }

    fn spoly(&self, pair: &Pair) -> Vec<Term<F::Elem>> {
        let f = &self.polys[pair.i];
        let g = &self.polys[pair.j];
        let mf = pair.lcm.div(&f[0].1).expect("lcm");
        let mg = pair.lcm.div(&g[0].1).expect("lcm");
        let (a, b) = self.field.reduction_cofactors(&f[0].0, &g[0].0);
        let (a, b) = (a, self.field.neg(&b));
        // a*mf*f - b*mg*g cancels the leading terms
        lin_comb(self.field, self.order, &a, &mf, &f[1..], &b, &mg, &g[1..])
    }

    /// Inserts a reduced, normalized polynomial and updates the pair set
    /// with the Gebauer-Moeller criteria.
    fn insert(&mut self, h: Vec<Term<F::Elem>>) -> Result<()> {
        let hk = self.polys.len();
        let hm = h[0].1.clone();
        self.masks.push(hm.divmask());
        self.polys.push(h);

        let mut cands: Vec<(Pair, bool)> = self
            .active
            .iter()
            .rev()
            .map(|&g| {
                let lcm = self.lm(g).lcm(&hm);
                let coprime = self.lm(g).is_coprime(&hm);
                (Pair { i: g, j: hk, lcm }, coprime)
            })
            .collect();
        // chain criterion on the new pairs; a coprime pair kills its lcm class
        let mut kept: Vec<(Pair, bool)> = Vec::with_capacity(cands.len());
        while let Some((p, coprime)) = cands.pop() {
            let covered = |v: &[(Pair, bool)]| v.iter().any(|(q, _)| q.lcm.divides(&p.lcm));
            if coprime || (!covered(&cands) && !covered(&kept)) {
                kept.push((p, coprime));
            }
        }
        let fresh: Vec<Pair> = kept.into_iter().filter_map(|(p, coprime)| (!coprime).then_some(p)).collect();
        self.stats.pairs_pruned += self.active.len() - fresh.len();

        let before = self.pairs.len();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(hm.divides(&p.lcm)
                && polys[p.i][0].1.lcm(&hm) != p.lcm
                && polys[p.j][0].1.lcm(&hm) != p.lcm)
        });
        self.stats.pairs_pruned += before - self.pairs.len();
        self.pairs.extend(fresh);
        let order = self.order;
        self.pairs.sort_by(|a, b| pair_cmp(order, b, a));

        let polys = &self.polys;
        self.active.retain(|&g| !hm.divides(&polys[g][0].1));
        self.active.push(hk);
        if !self.field.monic_in_engine() {
            self.retail(hk)?;
        }
        Ok(())
    }

    /// Tail-reduces every active element that has a term divisible by the
    /// new leading monomial. Leading monomials are unchanged, so the pair
    /// set stays valid; over `Q` this keeps coefficients near the size of
    /// the reduced basis instead of compounding.
    fn retail(&mut self, hk: usize) -> Result<()> {
        let hm = self.lm(hk).clone();
        for idx in 0..self.active.len() {
            let g = self.active[idx];
            if g == hk || !self.polys[g][1..].iter().any(|t| hm.divides(&t.1)) {
                continue;
            }
            let others: Vec<usize> = self.active.iter().copied().filter(|&k| k != g).collect();
            let tail = self.polys[g][1..].to_vec();
            let reducers = Reducers { polys: &self.polys, masks: &self.masks, active: &others, first: false };
            let (scale, rest) = reduce(self.field, self.order, self.opts.engine, tail, &reducers, &mut self.deadline)?;
            let lead = &self.polys[g][0];
            let mut r = vec![(self.field.mul(&lead.0, &scale), lead.1.clone())];
            r.extend(rest);
            self.polys[g] = self.normalize(r);
        }
        Ok(())
    }
}

/// Reduced Groebner basis of the ideal generated by `gens`.
pub fn buchberger<F: Field>(gens: &[Polynomial<F>]) -> Result<GroebnerBasis<F>> {
    let ring = gens.first().ok_or_else(|| invalid("empty generator list"))?.ring().clone();
    buchberger_in(&ring, gens, BuchbergerOptions::default())
}

/// Same as [`buchberger`] with an explicit ring (so the zero ideal is
/// expressible) and options.
pub fn buchberger_in<F: Field>(
    ring: &Arc<Ring<F>>,
    gens: &[Polynomial<F>],
    opts: BuchbergerOptions,
) -> Result<GroebnerBasis<F>> {
    for g in gens {
        if **g.ring() != **ring {
            return Err(Error::RingMismatch);
        }
    }
    let started = Instant::now();
    let field = ring.field();
    let order = ring.order();
    let mut st = State {
        field,
        order,
        opts,
        polys: Vec::new(),
        masks: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        deadline: Deadline::new(opts.deadline),
        stats: GbStats::default(),
    };

    let mut input: Vec<Vec<Term<F::Elem>>> =
        gens.iter().filter(|g| !g.is_zero()).map(|g| g.terms().to_vec()).collect();
    input.sort_by(|a, b| {
        a[0].1.total_degree().cmp(&b[0].1.total_degree()).then_with(|| order.cmp(&a[0].1, &b[0].1)).then_with(|| a.len().cmp(&b.len()))
    });

    let mut unit = false;
    'outer: {
        for p in input {
            let r = st.reduce(p)?;
            if r.is_empty() {
                continue;
            }
            if r[0].1.is_one() {
                unit = true;
                break 'outer;
            }
            let r = st.normalize(r);
            st.insert(r)?;
        }
        while let Some(pair) = st.pairs.pop() {
            st.stats.pairs_reduced += 1;
            let s = st.spoly(&pair);
            let r = st.reduce(s)?;
            if r.is_empty() {
                st.stats.zero_reductions += 1;
                continue;
            }
            if r[0].1.is_one() {
                unit = true;
                break 'outer;
            }
            let r = st.normalize(r);
            st.insert(r)?;
        }
    }

    let gens = if unit {
        vec![Polynomial::one(ring)]
    } else {
        interreduce(&mut st)?.into_iter().map(|t| Polynomial::from_sorted(ring, t)).collect()
    };
    st.stats.elapsed = started.elapsed();
    Ok(GroebnerBasis::from_reduced(ring.clone(), gens, st.stats))
}

fn interreduce<F: Field>(st: &mut State<'_, F>) -> Result<Vec<Vec<Term<F::Elem>>>> {
    let order = st.order;
    let mut active = st.active.clone();
    active.sort_by(|&a, &b| order.cmp(&st.polys[a][0].1, &st.polys[b][0].1));
    let mut out = Vec::with_capacity(active.len());
    for (k, &g) in active.iter().enumerate() {
        let others: Vec<usize> = active.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, &x)| x).collect();
        let lead = st.polys[g][0].clone();
        let tail = st.polys[g][1..].to_vec();
        let reducers = Reducers { polys: &st.polys, masks: &st.masks, active: &others, first: false };
        let (scale, rest) = reduce(st.field, order, st.opts.engine, tail, &reducers, &mut st.deadline)?;
        let mut r = vec![(st.field.mul(&lead.0, &scale), lead.1)];
        r.extend(rest);
        let inv = st.field.inv(&r[0].0)?;
        if !st.field.is_one(&inv) {
            for t in &mut r {
                t.0 = st.field.mul(&t.0, &inv);
            }
        }
        out.push(r);
    }
    Ok(out)
}
