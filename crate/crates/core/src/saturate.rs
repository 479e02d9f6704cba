//! Randomized saturated systems `<Theta x - 1, Lambda f, 1 - (mu . f) T>`
//! and the solution counts they certify.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{Field, FieldDescriptor, PrimeField, Rational, Rationals};
use crate::error::{Error, Result};
use crate::groebner::{buchberger_in, BuchbergerOptions, Engine, GroebnerBasis};
use crate::poly::{Monomial, MonomialOrder, Polynomial, Ring};
use crate::problems::ProblemInstance;

pub use crate::problems::degree_profile;

/// `Theta` (i x n), `Lambda` ((n-i) x r) and `mu` (r).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationParameters<E> {
    pub i: usize,
    pub theta: Vec<Vec<E>>,
    pub lambda: Vec<Vec<E>>,
    pub mu: Vec<E>,
    pub rng_seed: Option<u64>,
}

impl<E: Clone> SaturationParameters<E> {
    /// Draws every entry with `sample`, in the order Theta, Lambda, mu
    /// (row-major), from a ChaCha stream seeded with `seed`.
    pub fn draw(i: usize, n: usize, r: usize, seed: u64, mut sample: impl FnMut(&mut ChaCha8Rng) -> E) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = (0..i).map(|_| (0..n).map(|_| sample(&mut rng)).collect()).collect();
        let lambda = (0..n - i).map(|_| (0..r).map(|_| sample(&mut rng)).collect()).collect();
        let mu = (0..r).map(|_| sample(&mut rng)).collect();
        SaturationParameters { i, theta, lambda, mu, rng_seed: Some(seed) }
    }

    pub fn check_shape(&self, n: usize, r: usize) -> Result<()> {
        let bad = |expected, got| Err(Error::DimensionMismatch { expected, got });
        if self.i >= n.max(1) && !(n == 0 && self.i == 0) {
            return Err(Error::InvalidArgument(format!("i = {} must lie in [0, {}]", self.i, n.saturating_sub(1))));
        }
        if self.theta.len() != self.i {
            return bad(self.i, self.theta.len());
        }
        if let Some(row) = self.theta.iter().find(|row| row.len() != n) {
            return bad(n, row.len());
        }
        if self.lambda.len() != n - self.i {
            return bad(n - self.i, self.lambda.len());
        }
        if let Some(row) = self.lambda.iter().find(|row| row.len() != r) {
            return bad(r, row.len());
        }
        if self.mu.len() != r {
            return bad(r, self.mu.len());
        }
        Ok(())
    }

    pub fn map<G>(&self, mut f: impl FnMut(&E) -> G) -> SaturationParameters<G> {
        SaturationParameters {
            i: self.i,
            theta: self.theta.iter().map(|row| row.iter().map(&mut f).collect()).collect(),
            lambda: self.lambda.iter().map(|row| row.iter().map(&mut f).collect()).collect(),
            mu: self.mu.iter().map(&mut f).collect(),
            rng_seed: self.rng_seed,
        }
    }
}

/// Uniform draw over the whole of `F_p`.
pub fn random_prime_parameters(field: &PrimeField, i: usize, n: usize, r: usize, seed: u64) -> SaturationParameters<u64> {
    let p = field.modulus();
    SaturationParameters::draw(i, n, r, seed, |rng| rng.gen_range(0..p))
}

/// Integers uniform on `[-bound, bound]`.
pub fn random_rational_parameters(i: usize, n: usize, r: usize, seed: u64, bound: i64) -> SaturationParameters<Rational> {
    SaturationParameters::draw(i, n, r, seed, |rng| Rational::from_integer(rng.gen_range(-bound..=bound)))
}

/// Default integer range for draws over `Q`.
pub const RATIONAL_PARAMETER_BOUND: i64 = 99;

/// Per-trial seed derived from a master seed, independent of scheduling.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    master ^ splitmix64(trial)
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generators of the saturated system in the ring `x_1..x_n, T`.
#[derive(Debug, Clone)]
pub struct SaturatedSystem<F: Field> {
    pub ring: Arc<Ring<F>>,
    pub generators: Vec<Polynomial<F>>,
    pub params: SaturationParameters<F::Elem>,
    pub source: String,
}

/// An instance specialized to a field, reusable across many draws.
#[derive(Debug, Clone)]
pub struct Saturator<F: Field> {
    name: String,
    base: Arc<Ring<F>>,
    ring: Arc<Ring<F>>,
    f: Vec<Polynomial<F>>,
}

impl<F: Field> Saturator<F> {
    pub fn new(inst: &ProblemInstance, field: F, order: MonomialOrder) -> Result<Self> {
        let base = inst.ring.with_field(field).with_order(order);
        let t = inst.ring.fresh_name("T");
        let ring = base.extended(&[t])?;
        let f = inst
            .polys
            .iter()
            .map(|p| p.reduce_into(&base)?.embed(&ring))
            .collect::<Result<Vec<_>>>()?;
        Ok(Saturator { name: inst.name.clone(), base, ring, f })
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.base.nvars()
    }

    pub fn npolys(&self) -> usize {
        self.f.len()
    }

    fn combination(&self, coeffs: &[F::Elem]) -> Result<Polynomial<F>> {
        let mut acc = Polynomial::zero(&self.ring);
        for (c, fj) in coeffs.iter().zip(&self.f) {
            acc = acc.add(&fj.scalar_mul(c))?;
        }
        Ok(acc)
    }

    /// The linear equations and the combinations `Lambda f`, without the
    /// excision generator.
    pub fn linear_section(&self, params: &SaturationParameters<F::Elem>) -> Result<Vec<Polynomial<F>>> {
        let n = self.nvars();
        params.check_shape(n, self.npolys())?;
        let field = self.ring.field();
        let mut gens = Vec::with_capacity(n + 1);
        for row in &params.theta {
            let mut terms: Vec<(F::Elem, Monomial)> =
                row.iter().enumerate().map(|(j, c)| (c.clone(), Monomial::var(n + 1, j))).collect();
            terms.push((field.neg(&field.one()), Monomial::one(n + 1)));
            gens.push(Polynomial::from_terms(&self.ring, terms)?);
        }
        for row in &params.lambda {
            gens.push(self.combination(row)?);
        }
        Ok(gens)
    }

    pub fn build(&self, params: &SaturationParameters<F::Elem>) -> Result<SaturatedSystem<F>> {
        let mut generators = self.linear_section(params)?;
        let n = self.nvars();
        let muf = self.combination(&params.mu)?;
        let t = Polynomial::var(&self.ring, n);
        generators.push(Polynomial::one(&self.ring).sub(&muf.mul(&t)?)?);
        Ok(SaturatedSystem { ring: self.ring.clone(), generators, params: params.clone(), source: self.name.clone() })
    }

    pub fn basis(&self, sys: &SaturatedSystem<F>, opts: BuchbergerOptions) -> Result<GroebnerBasis<F>> {
        buchberger_in(&self.ring, &sys.generators, opts)
    }
}

/// Builds the saturated system for `inst` over `field` (GrevLex, `T` last).
pub fn build_saturated_system<F: Field>(
    inst: &ProblemInstance,
    field: F,
    params: &SaturationParameters<F::Elem>,
) -> Result<SaturatedSystem<F>> {
    Saturator::new(inst, field, MonomialOrder::GrevLex)?.build(params)
}

/// Result of one randomized count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GiResult {
    pub value: usize,
    pub i: usize,
    pub field: String,
    pub seed: u64,
    /// Set when the draw produced the unit ideal.
    pub unit: bool,
    pub basis_size: usize,
    pub elapsed_ms: f64,
    pub params: SaturationParameters<String>,
}

/// Options for [`compute_gi_with`].
#[derive(Debug, Clone, Copy)]
pub struct GiOptions {
    pub timeout: Option<Duration>,
    pub engine: Engine,
    pub rational_bound: i64,
}

impl Default for GiOptions {
    fn default() -> Self {
        GiOptions { timeout: None, engine: Engine::Geobucket, rational_bound: RATIONAL_PARAMETER_BOUND }
    }
}

/// Checks that `p` exceeds every coefficient magnitude of the system.
pub fn check_prime(inst: &ProblemInstance, p: u64) -> Result<()> {
    let max = inst.max_abs_coefficient();
    if Rational::from_integer(p) <= max {
        return Err(Error::PrimeTooSmall { prime: p, max_coeff: max.to_string() });
    }
    Ok(())
}

/// Randomized `g_i`: one draw from `seed`, reduced GrevLex basis, quotient
/// dimension.
pub fn compute_gi(inst: &ProblemInstance, i: usize, field: FieldDescriptor, seed: u64) -> Result<GiResult> {
    compute_gi_with(inst, i, field, seed, GiOptions::default())
}

pub fn compute_gi_with(inst: &ProblemInstance, i: usize, field: FieldDescriptor, seed: u64, opts: GiOptions) -> Result<GiResult> {
    if i >= inst.nvars() {
        return Err(Error::InvalidArgument(format!("i = {i} must lie in [0, {}]", inst.nvars() - 1)));
    }
    match field {
        FieldDescriptor::PrimeField(p) => {
            let fp = PrimeField::new(p)?;
            check_prime(inst, p)?;
            let sat = Saturator::new(inst, fp, MonomialOrder::GrevLex)?;
            let params = random_prime_parameters(&fp, i, inst.nvars(), inst.npolys(), seed);
            run_draw(&sat, &params, seed, opts)
        }
        FieldDescriptor::Rationals => {
            let sat = Saturator::new(inst, Rationals, MonomialOrder::GrevLex)?;
            let params = random_rational_parameters(i, inst.nvars(), inst.npolys(), seed, opts.rational_bound);
            run_draw(&sat, &params, seed, opts)
        }
    }
}

/// Runs one draw with a prepared saturator.
pub fn run_draw<F: Field>(sat: &Saturator<F>, params: &SaturationParameters<F::Elem>, seed: u64, opts: GiOptions) -> Result<GiResult> {
    let start = Instant::now();
    let sys = sat.build(params)?;
    let bopts = BuchbergerOptions { engine: opts.engine, deadline: opts.timeout.map(|t| start + t) };
    let gb = sat.basis(&sys, bopts)?;
    let value = gb.degree()?;
    let field = sat.ring().field();
    Ok(GiResult {
        value,
        i: params.i,
        field: field.descriptor().to_string(),
        seed,
        unit: gb.is_unit(),
        basis_size: gb.len(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        params: params.map(|e| field.format(e)),
    })
}

/// Outcome of comparing leading monomials over `Q` and `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LmAgreement {
    Agree,
    /// A monomial in exactly one of the two sets; `in_rational` says which.
    Disagree { witness: Vec<u16>, in_rational: bool },
}

/// Clears denominators, computes reduced bases over `Q` and over `F_p` and
/// compares their leading monomials. A disagreement proves `p` unlucky; an
/// agreement is only evidence.
pub fn lm_agreement_test(gens: &[Polynomial<Rationals>], p: u64, order: MonomialOrder) -> Result<LmAgreement> {
    let first = gens.first().ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
    let qring = first.ring().with_order(order);
    let fring = qring.with_field(PrimeField::new(p)?);
    let mut qgens = Vec::with_capacity(gens.len());
    let mut pgens = Vec::with_capacity(gens.len());
    for (j, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let g = g.normalized().with_ring(&qring)?;
        let gp = g.reduce_into(&fring)?;
        if gp.is_zero() {
            return Err(Error::GeneratorVanishesModP(j));
        }
        qgens.push(g);
        pgens.push(gp);
    }
    let gq = buchberger_in(&qring, &qgens, BuchbergerOptions::default())?;
    let gp = buchberger_in(&fring, &pgens, BuchbergerOptions::default())?;
    let a: BTreeSet<Vec<u16>> = gq.leading_monomials().iter().map(|m| m.exponents().to_vec()).collect();
    let b: BTreeSet<Vec<u16>> = gp.leading_monomials().iter().map(|m| m.exponents().to_vec()).collect();
    if let Some(w) = a.difference(&b).next() {
        return Ok(LmAgreement::Disagree { witness: w.clone(), in_rational: true });
    }
    if let Some(w) = b.difference(&a).next() {
        return Ok(LmAgreement::Disagree { witness: w.clone(), in_rational: false });
    }
    Ok(LmAgreement::Agree)
}

/// [`lm_agreement_test`] on the system built from `inst` and rational
/// parameters; `excise` adds the `1 - (mu . f) T` generator.
pub fn lm_agreement_for_instance(
    inst: &ProblemInstance,
    params: &SaturationParameters<Rational>,
    p: u64,
    order: MonomialOrder,
    excise: bool,
) -> Result<LmAgreement> {
    let sat = Saturator::new(inst, Rationals, order)?;
    let gens = if excise { sat.build(params)?.generators } else { sat.linear_section(params)? };
    if excise {
        lm_agreement_test(&gens, p, order)
    } else {
        // drop the unused T so leading monomials live in the original ring
        let base = inst.ring.with_order(order);
        let gens = gens
            .iter()
            .map(|g| {
                let terms = g.terms().iter().map(|(c, m)| (c.clone(), Monomial::new(&m.exponents()[..base.nvars()]))).collect();
                Polynomial::from_terms(&base, terms)
            })
            .collect::<Result<Vec<_>>>()?;
        lm_agreement_test(&gens, p, order)
    }
}
