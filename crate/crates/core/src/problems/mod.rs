//! Built-in polynomial systems with structural self-checks.

mod alt;

use std::sync::Arc;

use crate::arith::{Field, Rational, Rationals};
use crate::error::{Error, Result};
use crate::linalg::rref;
use crate::poly::{parse_polynomial, MonomialOrder, Polynomial, Ring, SystemFile};

pub use alt::{alt_coupler_instance, alt_system, coupler_coefficients, CouplerCoefficients, COUPLER_EXPONENTS};

/// Variable involution together with the induced permutation of the system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjugation {
    /// `var_perm[i]` is the index of the conjugate of variable `i`.
    pub var_perm: Vec<usize>,
    /// `poly_perm[j]` is the index of `conj(f_j)`.
    pub poly_perm: Vec<usize>,
}

/// A named system `f = [f_1, ..., f_r]` over the rationals.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub name: String,
    pub ring: Arc<Ring<Rationals>>,
    pub polys: Vec<Polynomial<Rationals>>,
    /// Linear spaces whose union is (contained in) the base locus, each
    /// given by linear equations.
    pub base_locus: Vec<Vec<Polynomial<Rationals>>>,
    pub conjugation: Option<Conjugation>,
}

impl ProblemInstance {
    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn npolys(&self) -> usize {
        self.polys.len()
    }

    pub fn vars(&self) -> &[String] {
        self.ring.vars()
    }

    pub fn to_file(&self) -> SystemFile {
        SystemFile::from_polys(&self.polys, &self.ring)
    }

    /// Largest absolute coefficient over all (integer-primitive) `f_j`.
    pub fn max_abs_coefficient(&self) -> Rational {
        self.polys.iter().map(|f| f.max_abs_coefficient()).max().unwrap_or_else(Rational::zero)
    }

    /// Loads a system file over `Q` as an instance without base-locus data.
    pub fn from_file(name: &str, file: &SystemFile) -> Result<Self> {
        if file.descriptor()? != crate::arith::FieldDescriptor::Rationals {
            return Err(Error::InvalidArgument("problem files must be over Q".into()));
        }
        let (ring, polys) = file.to_polys(Rationals, MonomialOrder::GrevLex)?;
        let polys = polys.into_iter().filter(|f| !f.is_zero()).map(|f| if f.is_integer_primitive() { f } else { f.normalized() }).collect();
        Ok(ProblemInstance { name: name.to_string(), ring, polys, base_locus: Vec::new(), conjugation: None })
    }

    /// Applies the variable involution to `f`.
    pub fn conj(&self, f: &Polynomial<Rationals>) -> Result<Polynomial<Rationals>> {
        let c = self.conjugation.as_ref().ok_or_else(|| Error::InvalidArgument(format!("{} has no conjugation", self.name)))?;
        f.permute_vars(&c.var_perm)
    }

    /// Indices `j` with `conj(f_j) != f_{sigma(j)}` or `conj(conj(f_j)) != f_j`.
    pub fn conjugation_failures(&self) -> Result<Vec<usize>> {
        let c = self.conjugation.as_ref().ok_or_else(|| Error::InvalidArgument(format!("{} has no conjugation", self.name)))?;
        let mut bad = Vec::new();
        for (j, f) in self.polys.iter().enumerate() {
            let g = f.permute_vars(&c.var_perm)?;
            if g != self.polys[c.poly_perm[j]] || g.permute_vars(&c.var_perm)? != *f {
                bad.push(j);
            }
        }
        Ok(bad)
    }
}

fn build(
    name: &str,
    vars: &[&str],
    polys: &[&str],
    base_locus: &[&[&str]],
    conjugation: Option<Conjugation>,
) -> ProblemInstance {
    let ring = Ring::new(vars, Rationals, MonomialOrder::GrevLex).expect("valid variables");
    let parse = |s: &&str| parse_polynomial(s, &ring).expect("built-in polynomial parses");
    let polys = polys.iter().map(parse).collect();
    let base_locus = base_locus.iter().map(|space| space.iter().map(parse).collect()).collect();
    ProblemInstance { name: name.to_string(), ring, polys, base_locus, conjugation }
}

/// `f = [x1, x2, x1*x2^2, x1^3*x2^2]` with base locus the origin.
pub fn example_monomial_system() -> ProblemInstance {
    build("monomial-example", &["x1", "x2"], &["x1", "x2", "x1*x2^2", "x1^3*x2^2"], &[&["x1", "x2"]], None)
}

/// Affine patch of the plane-conics system in `(a1, a2, a3, a4, b1, b2)`;
/// the first entry is the constant 1, so the base locus is empty.
pub fn conics_affine_system() -> ProblemInstance {
    build(
        "conics-affine",
        &["a1", "a2", "a3", "a4", "b1", "b2"],
        &[
            "1",
            "a1",
            "a2",
            "a3",
            "a4",
            "a3*b1",
            "a3*b2",
            "a4*b1",
            "a4*b2",
            "a1*b1 - 2*b2",
            "a1*b2 - 2*a2*b1",
            "b1*(a4*b1 - a3*b2)",
            "b2*(a4*b1 - a3*b2)",
            "a2*b1^2 - a1*b1*b2 + b2^2",
        ],
        &[],
        None,
    )
}

/// The fixed 6 x 14 integer matrix used to specialize the conics system.
pub const CONICS_PSTAR: [[i64; 14]; 6] = [
    [1, -2, 2, -4, -4, -5, -3, 1, -1, -1, -2, -3, 1, -5],
    [0, 0, 3, 4, 5, -1, -3, -4, -5, -5, 4, -1, -5, -4],
    [-5, -4, -1, 0, -5, -3, -4, 4, -3, 4, -1, -4, -3, 2],
    [-2, 1, -5, 5, 3, 3, -4, 1, -4, 5, -4, -4, -2, 3],
    [-4, -3, -3, -5, 3, -1, 4, -2, -3, 0, 3, 5, 4, 2],
    [3, 2, 5, -1, 4, 5, 1, 0, -3, 0, -1, 5, -5, -1],
];

/// The six combinations `P* . F` of the conics system.
pub fn conics_specialized_system() -> Vec<Polynomial<Rationals>> {
    let inst = conics_affine_system();
    CONICS_PSTAR
        .iter()
        .map(|row| {
            row.iter().zip(&inst.polys).fold(Polynomial::zero(&inst.ring), |acc, (&c, f)| {
                acc.add(&f.scalar_mul(&Rational::from_integer(c))).expect("same ring")
            })
        })
        .collect()
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 3] = ["monomial-example", "conics-affine", "alt"];

pub fn builtin(name: &str) -> Option<ProblemInstance> {
    match name {
        "monomial-example" => Some(example_monomial_system()),
        "conics-affine" => Some(conics_affine_system()),
        "alt" => Some(alt_system()),
        _ => None,
    }
}

/// Outcome of substituting each base-locus space into each `f_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseLocusReport {
    pub checks: usize,
    /// `(space, j)` pairs where `f_j` does not vanish identically.
    pub failures: Vec<(usize, usize)>,
}

impl BaseLocusReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Solves the linear equations of a space and returns the substitution
/// (pivot variables in terms of free ones), or `None` if the space is empty.
pub fn linear_space_parameterization(
    ring: &Arc<Ring<Rationals>>,
    equations: &[Polynomial<Rationals>],
) -> Result<Option<Vec<Polynomial<Rationals>>>> {
    let n = ring.nvars();
    let field = Rationals;
    let mut rows = Vec::with_capacity(equations.len());
    for eq in equations {
        if eq.total_degree().is_some_and(|d| d > 1) {
            return Err(Error::InvalidArgument(format!("`{eq}` is not linear")));
        }
        let mut row = vec![Rational::zero(); n + 1];
        for (c, m) in eq.terms() {
            match m.exponents().iter().position(|&e| e > 0) {
                Some(v) => row[v] = c.clone(),
                None => row[n] = c.clone(),
            }
        }
        rows.push(row);
    }
    let pivots = rref(&field, &mut rows);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut images: Vec<Polynomial<Rationals>> = (0..n).map(|i| Polynomial::var(ring, i)).collect();
    for (row, &pc) in rows.iter().zip(&pivots) {
        // x_pc = -sum_{free} row[v] x_v - row[n]
        let mut img = Polynomial::constant(ring, field.neg(&row[n]));
        for v in 0..n {
            if v != pc && !row[v].is_zero() && !pivots.contains(&v) {
                img = img.sub(&Polynomial::var(ring, v).scalar_mul(&row[v]))?;
            }
        }
        images[pc] = img;
    }
    Ok(Some(images))
}

/// Checks that every `f_j` vanishes identically on each declared space.
pub fn verify_base_locus(inst: &ProblemInstance) -> Result<BaseLocusReport> {
    let mut failures = Vec::new();
    let mut checks = 0;
    for (s, space) in inst.base_locus.iter().enumerate() {
        let images = linear_space_parameterization(&inst.ring, space)?;
        for (j, f) in inst.polys.iter().enumerate() {
            checks += 1;
            let vanishes = match &images {
                Some(img) => f.compose(&inst.ring, img)?.is_zero(),
                None => true,
            };
            if !vanishes {
                failures.push((s, j));
            }
        }
    }
    Ok(BaseLocusReport { checks, failures })
}

/// Total degree of each `f_j` and the extremes.
pub fn degree_profile(inst: &ProblemInstance) -> (Vec<u32>, u32, u32) {
    let degs: Vec<u32> = inst.polys.iter().map(|f| f.total_degree().unwrap_or(0)).collect();
    let lo = degs.iter().copied().min().unwrap_or(0);
    let hi = degs.iter().copied().max().unwrap_or(0);
    (degs, lo, hi)
}

/// Evaluates `f` over any field after reducing its rational coefficients.
pub fn specialize<F: Field>(f: &[Polynomial<Rationals>], ring: &Arc<Ring<F>>) -> Result<Vec<Polynomial<F>>> {
    f.iter().map(|p| p.reduce_into(ring)).collect()
}
