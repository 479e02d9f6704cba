//! Sparse JSON interchange format:
//!
//! ```json
//! {"vars":["x","y"],"field":"Q","polys":[[["3",[1,0]],["-1/2",[0,0]]]]}
//! ```
//!
//! Coefficients are decimal strings, terms appear in canonical (descending
//! grevlex) order.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::{Polynomial, Ring};
use crate::arith::{Field, FieldDescriptor, PrimeField, Rationals};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub vars: Vec<String>,
    pub field: String,
    pub polys: Vec<Vec<(String, Vec<u16>)>>,
}

impl SystemFile {
    pub fn from_polys<F: Field>(polys: &[Polynomial<F>], ring: &Arc<Ring<F>>) -> Self {
        let field = ring.field();
        SystemFile {
            vars: ring.vars().to_vec(),
            field: field.descriptor().to_string(),
            polys: polys
                .iter()
                .map(|p| p.terms().iter().map(|(c, m)| (field.format(c), m.exponents().to_vec())).collect())
                .collect(),
        }
    }

    pub fn descriptor(&self) -> Result<FieldDescriptor> {
        self.field.parse()
    }

    /// Materializes the polynomials in a ring over `field`.
    pub fn to_polys<F: Field>(&self, field: F, order: MonomialOrder) -> Result<(Arc<Ring<F>>, Vec<Polynomial<F>>)> {
        let ring = Ring::new(&self.vars, field, order)?;
        let n = ring.nvars();
        let mut out = Vec::with_capacity(self.polys.len());
        for terms in &self.polys {
            let mut ts = Vec::with_capacity(terms.len());
            for (c, e) in terms {
                if e.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: e.len() });
                }
                ts.push((ring.field().parse(c)?, Monomial::new(e)));
            }
            out.push(Polynomial::from_terms(&ring, ts)?);
        }
        Ok((ring, out))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A polynomial system whose field is only known at run time.
#[derive(Debug, Clone)]
pub enum AnySystem {
    Rational(Arc<Ring<Rationals>>, Vec<Polynomial<Rationals>>),
    Modular(Arc<Ring<PrimeField>>, Vec<Polynomial<PrimeField>>),
}

impl AnySystem {
    pub fn from_file(file: &SystemFile, order: MonomialOrder) -> Result<Self> {
        match file.descriptor()? {
            FieldDescriptor::Rationals => {
                let (r, p) = file.to_polys(Rationals, order)?;
                Ok(AnySystem::Rational(r, p))
            }
            FieldDescriptor::PrimeField(p) => {
                let (r, ps) = file.to_polys(PrimeField::new(p)?, order)?;
                Ok(AnySystem::Modular(r, ps))
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        match self {
            AnySystem::Rational(r, _) => r.vars(),
            AnySystem::Modular(r, _) => r.vars(),
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            AnySystem::Rational(r, _) => r.field().descriptor(),
            AnySystem::Modular(r, _) => r.field().descriptor(),
        }
    }

    pub fn to_file(&self) -> SystemFile {
        match self {
            AnySystem::Rational(r, p) => SystemFile::from_polys(p, r),
            AnySystem::Modular(r, p) => SystemFile::from_polys(p, r),
        }
    }

    /// Re-targets the system to another field; rationals reduce into `F_p`,
    /// `F_p` systems cannot be lifted.
    pub fn into_field(self, target: FieldDescriptor, order: MonomialOrder) -> Result<AnySystem> {
        match (self, target) {
            (AnySystem::Rational(r, p), FieldDescriptor::Rationals) => {
                let ring = r.with_order(order);
                let p = p.iter().map(|f| f.with_ring(&ring)).collect::<Result<_>>()?;
                Ok(AnySystem::Rational(ring, p))
            }
            (AnySystem::Rational(r, p), FieldDescriptor::PrimeField(q)) => {
                let ring = r.with_field(PrimeField::new(q)?).with_order(order);
                let p = p.iter().map(|f| f.reduce_into(&ring)).collect::<Result<_>>()?;
                Ok(AnySystem::Modular(ring, p))
            }
            (AnySystem::Modular(r, p), FieldDescriptor::PrimeField(q)) if r.field().modulus() == q => {
                let ring = r.with_order(order);
                let p = p.iter().map(|f| f.with_ring(&ring)).collect::<Result<_>>()?;
                Ok(AnySystem::Modular(ring, p))
            }
            (s, t) => Err(Error::InvalidArgument(format!("cannot move a system over {} to {}", s.descriptor(), t))),
        }
    }
}

/// Parses a system given as text: one polynomial per line (or separated by
/// `;` / `,` at top level), variables listed explicitly.
pub fn parse_text_system<F: Field>(text: &str, ring: &Arc<Ring<F>>) -> Result<Vec<Polynomial<F>>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let flush = |cur: &mut String, out: &mut Vec<Polynomial<F>>| -> Result<()> {
        let t = cur.trim();
        if !t.is_empty() && !t.starts_with('#') {
            out.push(super::parse::parse_polynomial(t, ring)?);
        }
        cur.clear();
        Ok(())
    };
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            ';' | ',' | '\n' if depth == 0 => flush(&mut cur, &mut out)?,
            _ => cur.push(ch),
        }
    }
    flush(&mut cur, &mut out)?;
    Ok(out)
}
