//! Gaussian elimination: dense over any field, sparse echelon forms for
//! rank profiles.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_prime, Field, PrimeField, Rational, Rationals};

/// A sparse row: `(column, value)` pairs with strictly increasing columns
/// and no zero values.
pub type SparseRow<E> = Vec<(usize, E)>;

/// Brings `rows` to reduced row echelon form in place, drops zero rows and
/// returns the pivot column of each remaining row.
pub fn rref<F: Field>(field: &F, rows: &mut Vec<Vec<F::Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        let Some(p) = (top..rows.len()).find(|&r| !field.is_zero(&rows[r][col])) else { continue };
        rows.swap(top, p);
        let inv = field.inv(&rows[top][col]).expect("pivot is nonzero");
        for x in rows[top].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[top].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == top || field.is_zero(&row[col]) {
                continue;
            }
            let c = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&c, y));
                }
            }
        }
        pivots.push(col);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    rows.truncate(top);
    pivots
}

pub fn rank<F: Field>(field: &F, rows: &[Vec<F::Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m).len()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse<F: Field>(field: &F, m: &[Vec<F::Elem>]) -> Option<Vec<Vec<F::Elem>>> {
    let k = m.len();
    let mut aug: Vec<Vec<F::Elem>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let piv = rref(field, &mut aug);
    if piv.len() < k || piv[k - 1] >= k {
        return None;
    }
    Some(aug.into_iter().map(|r| r[k..].to_vec()).collect())
}

/// Incremental echelon form over sparse rows, pivoting on the leftmost
/// nonzero column.
pub trait SparseEchelon: Field {
    /// Pivot columns (ascending) of the row space of `rows` in `ncols`
    /// columns.
    fn echelon_pivots(&self, rows: Vec<SparseRow<Self::Elem>>, ncols: usize) -> Vec<usize>;
}

impl SparseEchelon for PrimeField {
    fn echelon_pivots(&self, rows: Vec<SparseRow<u64>>, ncols: usize) -> Vec<usize> {
        let mut piv: Vec<Option<SparseRow<u64>>> = vec![None; ncols];
        for mut r in rows {
            while let Some(&(c, lead)) = r.first() {
                match &piv[c] {
                    Some(p) => r = axpy_mod(self, &r, self.neg(&lead), p),
                    None => {
                        let inv = self.inv(&lead).expect("nonzero lead");
                        r.iter_mut().for_each(|(_, v)| *v = self.mul(v, &inv));
                        piv[c] = Some(r);
                        break;
                    }
                }
            }
        }
        piv.iter().enumerate().filter(|(_, p)| p.is_some()).map(|(c, _)| c).collect()
    }
}

// r + s * p, dropping zeros
fn axpy_mod(f: &PrimeField, r: &[(usize, u64)], s: u64, p: &[(usize, u64)]) -> SparseRow<u64> {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let take_r = j == p.len() || (i < r.len() && r[i].0 < p[j].0);
        let take_p = i == r.len() || (j < p.len() && p[j].0 < r[i].0);
        if take_r {
            out.push(r[i]);
            i += 1;
        } else if take_p {
            out.push((p[j].0, f.mul(&s, &p[j].1)));
            j += 1;
        } else {
            let v = f.add(&r[i].1, &f.mul(&s, &p[j].1));
            if v != 0 {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact over `Q` by certified multi-modular rank profiles. The echelon
/// pivots are the columns where the rank of the column prefix grows; that
/// rank is at least its value mod any prime, and a larger rational rank
/// would need a nonzero minor of absolute value at most the Hadamard bound
/// `H`. Once the primes used multiply past `H`, some prime would have seen
/// that minor, so the pointwise maximum over primes is the rational profile.
impl SparseEchelon for Rationals {
    fn echelon_pivots(&self, rows: Vec<SparseRow<Rational>>, ncols: usize) -> Vec<usize> {
        let rows: Vec<SparseRow<BigInt>> = rows.iter().map(|r| integer_row(r)).filter(|r| !r.is_empty()).collect();
        multimodular_pivots(&rows, ncols)
    }
}

fn multimodular_pivots(rows: &[SparseRow<BigInt>], ncols: usize) -> Vec<usize> {
    let mut norms: Vec<BigUint> =
        rows.iter().map(|r| r.iter().map(|(_, v)| v.magnitude() * v.magnitude()).sum()).collect();
    norms.sort_unstable_by(|a, b| b.cmp(a));
    // profile[c] = rank of columns 0..=c, maximized over primes
    let mut profile = vec![0usize; ncols];
    let mut modulus_sq = BigUint::one();
    let mut p = 1u64 << 31;
    loop {
        p = previous_prime(p);
        let fp = PrimeField::new(p).expect("word-sized prime");
        let reduced: Vec<SparseRow<u64>> = rows
            .iter()
            .map(|r| r.iter().filter_map(|(c, v)| Some((*c, fp.from_bigint(v))).filter(|(_, x)| *x != 0)).collect())
            .collect();
        let mut rank = 0;
        let mut pivots = fp.echelon_pivots(reduced, ncols).into_iter().peekable();
        for (c, slot) in profile.iter_mut().enumerate() {
            if pivots.next_if_eq(&c).is_some() {
                rank += 1;
            }
            *slot = (*slot).max(rank);
        }
        modulus_sq *= BigUint::from(p) * BigUint::from(p);
        // squared Hadamard bound for minors of size rank + 1
        let k = (profile.last().copied().unwrap_or(0) + 1).min(norms.len());
        let h_sq: BigUint = norms[..k].iter().product();
        if modulus_sq > h_sq {
            break;
        }
    }
    let mut out = Vec::new();
    let mut prev = 0;
    for (c, &r) in profile.iter().enumerate() {
        if r > prev {
            out.push(c);
        }
        prev = r;
    }
    out
}

fn previous_prime(mut n: u64) -> u64 {
    loop {
        n -= 1;
        if is_prime(n) {
            return n;
        }
    }
}

/// Pivot columns over `Q` by direct fraction-free elimination: rows are
/// cleared to integers, kept primitive, and combined as `a*r - b*p` with
/// the lead gcd divided out. Exact but prone to coefficient growth.
pub fn fraction_free_pivots(rows: &[SparseRow<Rational>], ncols: usize) -> Vec<usize> {
    let mut piv: Vec<Option<SparseRow<BigInt>>> = vec![None; ncols];
    for row in rows {
        let mut r = integer_row(row);
        while let Some(c) = r.first().map(|(c, _)| *c) {
            let Some(p) = piv[c].as_ref() else {
                piv[c] = Some(r);
                break;
            };
            let lead = &r[0].1;
            let g = lead.gcd(&p[0].1);
            r = combine_int(&(&p[0].1 / &g), &r, &(lead / &g), p);
            make_primitive(&mut r);
        }
    }
    piv.iter().enumerate().filter(|(_, p)| p.is_some()).map(|(c, _)| c).collect()
}

fn integer_row(row: &[(usize, Rational)]) -> SparseRow<BigInt> {
    let l = row.iter().fold(BigInt::one(), |l, (_, q)| l.lcm(q.denom()));
    let mut r: SparseRow<BigInt> = row.iter().map(|(c, q)| (*c, q.numer() * (&l / q.denom()))).collect();
    make_primitive(&mut r);
    r
}

fn make_primitive(r: &mut SparseRow<BigInt>) {
    let Some(first) = r.first() else { return };
    let mut g = r.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if first.1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        r.iter_mut().for_each(|(_, v)| *v /= &g);
    }
}

// a*r - b*p
fn combine_int(a: &BigInt, r: &[(usize, BigInt)], b: &BigInt, p: &[(usize, BigInt)]) -> SparseRow<BigInt> {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        if j == p.len() || (i < r.len() && r[i].0 < p[j].0) {
            out.push((r[i].0, a * &r[i].1));
            i += 1;
        } else if i == r.len() || p[j].0 < r[i].0 {
            out.push((p[j].0, -(b * &p[j].1)));
            j += 1;
        } else {
            let v = a * &r[i].1 - b * &p[j].1;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{PrimeField, Rational, Rationals};

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    #[test]
    fn rank_and_rref() {
        let f = Rationals;
        let mut m = vec![q(&[1, 2, 3]), q(&[2, 4, 6]), q(&[1, 0, 1])];
        let piv = rref(&f, &mut m);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(m[0], q(&[1, 0, 1]));
        assert_eq!(m[1], q(&[0, 1, 1]));
        assert_eq!(rank(&f, &[q(&[0, 0])]), 0);
    }

    #[test]
    fn inverse_mod_p() {
        let f = PrimeField::new(7).unwrap();
        let m = vec![vec![1, 2], vec![3, 4]];
        let inv = inverse(&f, &m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let s = (0..2).fold(0, |acc, k| f.add(&acc, &f.mul(&m[i][k], &inv[k][j])));
                assert_eq!(s, u64::from(i == j));
            }
        }
        assert!(inverse(&f, &[vec![1, 2], vec![2, 4]]).is_none());
    }

    fn sparse<E: Clone>(dense: &[Vec<E>], zero: impl Fn(&E) -> bool) -> Vec<SparseRow<E>> {
        dense.iter().map(|r| r.iter().cloned().enumerate().filter(|(_, v)| !zero(v)).collect()).collect()
    }

    #[test]
    fn sparse_echelon_agrees_with_dense() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let fp = PrimeField::new(101).unwrap();
        for _ in 0..50 {
            let (m, n) = (rng.gen_range(1..7), rng.gen_range(1..7));
            let dq: Vec<Vec<Rational>> =
                (0..m).map(|_| (0..n).map(|_| Rational::from_integer(rng.gen_range(-2i64..=2))).collect()).collect();
            let mut dense = dq.clone();
            let want = rref(&Rationals, &mut dense);
            assert_eq!(Rationals.echelon_pivots(sparse(&dq, |v| v.is_zero()), n), want);
            assert_eq!(fraction_free_pivots(&sparse(&dq, |v| v.is_zero()), n), want);
            let dp: Vec<Vec<u64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..3)).collect()).collect();
            let mut dense = dp.clone();
            let want = rref(&fp, &mut dense);
            assert_eq!(fp.echelon_pivots(sparse(&dp, |v| *v == 0), n), want);
        }
    }
}
