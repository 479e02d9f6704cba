//! Degree bounds and lucky-prime probability bounds, in exact integer and
//! rational arithmetic.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Parameters of a system `f_1..f_r` in `n` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsInput {
    pub n: u32,
    pub r: u32,
    pub d_min: u32,
    pub d_max: u32,
    pub degrees: Vec<u32>,
    /// Bezout-type bound on the degree of the variety.
    pub deg_v: BigUint,
    /// Upper bound on the solution count being certified.
    pub g_upper: BigUint,
    pub p: Option<BigUint>,
    pub nu: BigUint,
}

impl BoundsInput {
    /// Input from a degree list: `r`, `D_min`, `D_max`, `deg V` and `nu`
    /// are derived.
    pub fn from_degrees(n: u32, degrees: &[u32], g_upper: BigUint) -> Result<Self> {
        if n == 0 || degrees.is_empty() || degrees.contains(&0) {
            return Err(Error::InvalidArgument("need n >= 1 and a non-empty list of positive degrees".into()));
        }
        Ok(BoundsInput {
            n,
            r: degrees.len() as u32,
            d_min: *degrees.iter().min().unwrap(),
            d_max: *degrees.iter().max().unwrap(),
            degrees: degrees.to_vec(),
            deg_v: bezout_bound(degrees),
            nu: nu_upper_bound(&g_upper, n),
            g_upper,
            p: None,
        })
    }

    /// Input from explicit constants; `nu` is derived from `g_upper`.
    pub fn from_constants(n: u32, r: u32, d_min: u32, d_max: u32, deg_v: BigUint, g_upper: BigUint) -> Result<Self> {
        if n == 0 || r == 0 || d_min == 0 || d_min > d_max || deg_v.is_zero() {
            return Err(Error::InvalidArgument("need positive n, r, D_min <= D_max and deg V >= 1".into()));
        }
        let nu = nu_upper_bound(&g_upper, n);
        Ok(BoundsInput { n, r, d_min, d_max, degrees: Vec::new(), deg_v, g_upper, p: None, nu })
    }

    pub fn with_prime(mut self, p: BigUint) -> Self {
        self.p = Some(p);
        self
    }

    /// `g_upper + discriminant_degree_bound`, the numerator subtracted in
    /// the success bound.
    pub fn additive_constant(&self) -> BigUint {
        &self.g_upper + discriminant_degree_bound(self)
    }

    pub fn success_params(&self) -> SuccessParams {
        SuccessParams { nu: self.nu.clone(), constant: self.additive_constant() }
    }

    /// Success bound at the stored prime, if any.
    pub fn success_probability(&self) -> Option<Probability> {
        self.p.as_ref().map(|p| success_probability_lower_bound(&self.success_params(), p))
    }
}

/// Product of the degrees.
pub fn bezout_bound(degrees: &[u32]) -> BigUint {
    degrees.iter().map(|&d| BigUint::from(d)).product()
}

/// `2^n * (D_min + (r + n) * D_max) * deg V`.
pub fn discriminant_degree_bound(input: &BoundsInput) -> BigUint {
    let inner = BigUint::from(input.d_min) + BigUint::from(input.r + input.n) * BigUint::from(input.d_max);
    (BigUint::one() << input.n) * inner * &input.deg_v
}

/// `C(deg + n + 1, n + 1)`.
pub fn nu_upper_bound(deg_ideal: &BigUint, n: u32) -> BigUint {
    let k = n + 1;
    let mut acc = BigUint::one();
    for j in 1..=k {
        acc = acc * (deg_ideal + BigUint::from(j)) / BigUint::from(j);
    }
    acc
}

/// A probability bound: exact, or a rigorous enclosure `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Probability {
    Exact(BigRational),
    Interval { lo: BigRational, hi: BigRational },
}

impl Probability {
    /// The guaranteed value: the exact number or the lower end.
    pub fn lower(&self) -> &BigRational {
        match self {
            Probability::Exact(v) => v,
            Probability::Interval { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> &BigRational {
        match self {
            Probability::Exact(v) => v,
            Probability::Interval { hi, .. } => hi,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Probability::Exact(_))
    }

    fn scale(self, c: &BigRational) -> Probability {
        match self {
            Probability::Exact(v) => Probability::Exact(v * c),
            Probability::Interval { lo, hi } => Probability::Interval { lo: lo * c, hi: hi * c },
        }
    }
}

/// Largest `nu * bits(p)` for which `((p-1)/p)^nu` is expanded exactly.
pub const EXACT_BIT_BUDGET: u64 = 1 << 16;

/// `((p - 1) / p)^nu`, exact when small enough, otherwise enclosed.
pub fn lucky_probability_lower_bound(p: &BigUint, nu: &BigUint) -> Probability {
    assert!(*p >= BigUint::from(2u32), "p must be at least 2");
    if nu.is_zero() {
        return Probability::Exact(BigRational::one());
    }
    let bits = p.bits();
    if let Some(e) = nu.to_u64().filter(|e| e.saturating_mul(bits) <= EXACT_BIT_BUDGET) {
        let base = BigRational::new(to_int(&(p - 1u32)), to_int(p));
        return Probability::Exact(pow(&base, e));
    }
    // -ln(1 - 1/p) lies in [1/p, 1/(p-1)]
    let y_small = BigRational::new(to_int(nu), to_int(p));
    let y_big = BigRational::new(to_int(nu), to_int(&(p - 1u32)));
    Probability::Interval { lo: exp_neg_bounds(&y_big).0, hi: exp_neg_bounds(&y_small).1 }
}

fn to_int(v: &BigUint) -> BigInt {
    BigInt::from(v.clone())
}

fn pow(base: &BigRational, mut e: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

/// Rational `(lo, hi)` with `lo <= exp(-y) <= hi` for `y >= 0`.
fn exp_neg_bounds(y: &BigRational) -> (BigRational, BigRational) {
    let one = BigRational::one();
    if *y > BigRational::from_integer(16.into()) {
        // exp(y) >= 1 + y + y^2/2
        let hi = &one / (&one + y + y * y / BigRational::from_integer(2.into()));
        return (BigRational::zero(), hi);
    }
    // alternating Taylor series: once terms decrease, partial sums ending
    // on a negative term are below the limit and those ending on a positive
    // term are above it
    let tiny = BigRational::new(BigInt::one(), BigInt::one() << 200u32);
    let mut sum = one.clone();
    let mut term = one;
    let mut lo = None;
    let mut hi = None;
    for k in 1u32..400 {
        term = -(term * y) / BigRational::from_integer(k.into());
        sum += &term;
        let decreasing = BigRational::from_integer(k.into()) > *y;
        if decreasing {
            if k % 2 == 1 {
                lo = Some(sum.clone());
            } else {
                hi = Some(sum.clone());
            }
            if lo.is_some() && hi.is_some() && num_traits::Signed::abs(&term) < tiny {
                break;
            }
        }
    }
    let lo = lo.expect("series converges").max(BigRational::zero());
    let hi = hi.expect("series converges").min(BigRational::one());
    (lo, hi)
}

/// `nu` and the additive constant `C`; the success bound at `p` is
/// `((p-1)/p)^nu * (1 - C/p)`, clamped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessParams {
    pub nu: BigUint,
    pub constant: BigUint,
}

pub fn success_probability_lower_bound(params: &SuccessParams, p: &BigUint) -> Probability {
    if *p <= params.constant {
        return Probability::Exact(BigRational::zero());
    }
    let linear = BigRational::new(to_int(&(p - &params.constant)), to_int(p));
    lucky_probability_lower_bound(p, &params.nu).scale(&linear)
}

/// Smallest `k >= 1` with the guaranteed success bound at `p = 2^k` at
/// least `target`. The bound is monotone in `p`, so this is a binary search.
pub fn min_prime_exponent(params: &SuccessParams, target: &BigRational) -> u32 {
    assert!(*target > BigRational::zero() && *target < BigRational::one(), "target must lie in (0, 1)");
    let ok = |k: u32| success_probability_lower_bound(params, &(BigUint::one() << k)).lower() >= target;
    let mut hi = 1u32;
    while !ok(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2; // ok(lo) is false unless lo == 0
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi.max(1)
}

/// Every bound for one input, with decimal renderings for reports.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub bezout_bound: String,
    pub discriminant_degree_bound: String,
    pub nu_upper_bound: String,
    pub additive_constant: String,
    pub prime: Option<String>,
    pub lucky_probability: Option<ProbabilityReport>,
    pub success_probability: Option<ProbabilityReport>,
    pub target: String,
    pub min_prime_exponent: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbabilityReport {
    pub exact: bool,
    /// Lower end as a decimal truncated toward zero.
    pub lower: String,
    /// Upper end as a decimal rounded away from zero.
    pub upper: String,
    /// The exact lower end as `num/den`, omitted when very large.
    pub lower_rational: Option<String>,
}

impl ProbabilityReport {
    pub fn new(p: &Probability) -> Self {
        let small = p.lower().numer().bits() + p.lower().denom().bits() <= 512;
        ProbabilityReport {
            exact: p.is_exact(),
            lower: decimal(p.lower(), 12, false),
            upper: decimal(p.upper(), 12, true),
            lower_rational: small.then(|| p.lower().to_string()),
        }
    }
}

/// `q >= 0` in fixed point with `digits` decimals, truncated or rounded up.
pub fn decimal(q: &BigRational, digits: u32, round_up: bool) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = q * BigRational::from_integer(scale.clone());
    let v = if round_up { scaled.ceil().to_integer() } else { scaled.floor().to_integer() };
    let int = &v / &scale;
    let frac = (&v % &scale).to_string();
    format!("{int}.{}{frac}", "0".repeat(digits as usize - frac.len()))
}

/// Builds a report for `input` at its prime, if set.
pub fn bounds_report(input: &BoundsInput, target: &BigRational) -> BoundsReport {
    let params = input.success_params();
    BoundsReport {
        bezout_bound: input.deg_v.to_string(),
        discriminant_degree_bound: discriminant_degree_bound(input).to_string(),
        nu_upper_bound: params.nu.to_string(),
        additive_constant: params.constant.to_string(),
        prime: input.p.as_ref().map(|p| p.to_string()),
        lucky_probability: input.p.as_ref().map(|p| ProbabilityReport::new(&lucky_probability_lower_bound(p, &params.nu))),
        success_probability: input.p.as_ref().map(|p| ProbabilityReport::new(&success_probability_lower_bound(&params, p))),
        target: target.to_string(),
        min_prime_exponent: min_prime_exponent(&params, target),
    }
}
