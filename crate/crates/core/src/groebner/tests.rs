use proptest::prelude::*;

use super::*;
use crate::arith::{PrimeField, Rational, Rationals};
use crate::poly::parse_polynomial;

fn qring(vars: &[&str], order: MonomialOrder) -> Arc<Ring<Rationals>> {
    Ring::new(vars, Rationals, order).unwrap()
}

fn pring(p: u64, vars: &[&str], order: MonomialOrder) -> Arc<Ring<PrimeField>> {
    Ring::new(vars, PrimeField::new(p).unwrap(), order).unwrap()
}

fn polys<F: Field>(ring: &Arc<Ring<F>>, src: &[&str]) -> Vec<Polynomial<F>> {
    src.iter().map(|s| parse_polynomial(s, ring).unwrap()).collect()
}

pub(crate) fn spolys_reduce_to_zero<F: Field>(g: &GroebnerBasis<F>) -> bool {
    let gens = g.generators();
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            let (ca, ma) = gens[a].leading_term().unwrap();
            let (cb, mb) = gens[b].leading_term().unwrap();
            let l = ma.lcm(mb);
            let s = gens[a]
                .mul_term(cb, &l.div(ma).unwrap())
                .unwrap()
                .sub(&gens[b].mul_term(ca, &l.div(mb).unwrap()).unwrap())
                .unwrap();
            if !normal_form(&s, gens).unwrap().is_zero() {
                return false;
            }
        }
    }
    true
}

fn is_reduced<F: Field>(g: &GroebnerBasis<F>) -> bool {
    let lms = g.leading_monomials();
    g.generators().iter().enumerate().all(|(k, p)| {
        p.field().is_one(p.leading_coefficient().unwrap())
            && p.terms().iter().enumerate().all(|(t, (_, m))| {
                lms.iter().enumerate().all(|(l, lm)| (l == k && t == 0) || !lm.divides(m))
            })
    })
}

#[test]
fn normal_form_examples() {
    let r = qring(&["x1", "x2"], MonomialOrder::GrevLex);
    let g = polys(&r, &["x1"]);
    assert!(normal_form(&parse_polynomial("x1^2", &r).unwrap(), &g).unwrap().is_zero());
    let g = polys(&r, &["x1^2 - 1"]);
    let nf = normal_form(&parse_polynomial("x1^2*x2 + x2", &r).unwrap(), &g).unwrap();
    assert_eq!(nf, parse_polynomial("2*x2", &r).unwrap());
    let f = parse_polynomial("x1*x2 + 3", &r).unwrap();
    assert_eq!(normal_form(&f, &[]).unwrap(), f);
    let other = qring(&["y"], MonomialOrder::GrevLex);
    let h = parse_polynomial("y", &other).unwrap();
    assert_eq!(normal_form(&f, &[h]), Err(Error::RingMismatch));
}

#[test]
fn trivial_bases() {
    let r = qring(&["x1", "x2"], MonomialOrder::GrevLex);
    let g = buchberger(&polys(&r, &["x1", "x2"])).unwrap();
    assert_eq!(g.generators(), &polys(&r, &["x2", "x1"])[..]);
    assert_eq!(g.degree().unwrap(), 1);
    assert_eq!(g.quotient_basis().standard_monomials, vec![Monomial::one(2)]);

    let g = buchberger(&polys(&r, &["1"])).unwrap();
    assert!(g.is_unit());
    assert_eq!(g.degree().unwrap(), 0);

    let g = buchberger(&polys(&r, &["x1^2", "x2^3"])).unwrap();
    assert_eq!(g.degree().unwrap(), 6);

    let g = buchberger(&polys(&r, &["x1"])).unwrap();
    assert!(!g.quotient_basis().is_finite);
    assert_eq!(g.degree(), Err(Error::NotZeroDimensional));

    assert!(buchberger::<Rationals>(&[]).is_err());
    let z = buchberger_in(&r, &[], BuchbergerOptions::default()).unwrap();
    assert!(z.is_empty());
}

#[test]
fn unit_ideal_short_circuit() {
    let r = pring(101, &["x", "y"], MonomialOrder::GrevLex);
    let g = buchberger(&polys(&r, &["x*y - 1", "x", "y^2 + x"])).unwrap();
    assert!(g.is_unit());
    assert_eq!(g.generators(), &[Polynomial::one(&r)]);
}

#[test]
fn textbook_basis_over_q() {
    // Cox-Little-O'Shea: <x^3 - 2xy, x^2 y - 2y^2 + x> under grlex-like order
    let r = qring(&["x", "y"], MonomialOrder::GrevLex);
    let g = buchberger(&polys(&r, &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"])).unwrap();
    let expect = polys(&r, &["x^2", "x*y", "y^2 - 1/2*x"]);
    let mut got: Vec<String> = g.generators().iter().map(|p| p.to_string()).collect();
    let mut want: Vec<String> = expect.iter().map(|p| p.to_string()).collect();
    got.sort();
    want.sort();
    assert_eq!(got, want);
    assert!(spolys_reduce_to_zero(&g));
    assert!(is_reduced(&g));
}

#[test]
fn example_ideal_lex_leading_monomials() {
    let r = qring(&["x1", "x2"], MonomialOrder::Lex);
    let gens = polys(&r, &["3/2*x1 + 2/3*x2 - 1", "7/5*x1 + 9/11*x2 - 5/13*x1*x2^2 + 13/17*x1^3*x2^2"]);
    let g = buchberger(&gens).unwrap();
    let mut lms = g.leading_monomials().to_vec();
    lms.sort_by(|a, b| MonomialOrder::Lex.cmp(a, b));
    assert_eq!(lms, vec![Monomial::new(&[0, 5]), Monomial::new(&[1, 0])]);
    assert_eq!(g.degree().unwrap(), 5);
}

#[test]
fn engines_agree_on_katsura3() {
    let r = pring(32003, &["x", "y", "z", "t"], MonomialOrder::GrevLex);
    let gens = polys(
        &r,
        &[
            "x + 2*y + 2*z + 2*t - 1",
            "x^2 + 2*y^2 + 2*z^2 + 2*t^2 - x",
            "2*x*y + 2*y*z + 2*z*t - y",
            "y^2 + 2*x*z + 2*y*t - z",
        ],
    );
    let a = buchberger(&gens).unwrap();
    let b = buchberger_in(&r, &gens, BuchbergerOptions { engine: Engine::Merge, deadline: None }).unwrap();
    assert_eq!(a.generators(), b.generators());
    assert_eq!(a.degree().unwrap(), 8);
    assert!(spolys_reduce_to_zero(&a));
    for f in &gens {
        assert!(a.contains(f).unwrap());
    }
}

#[test]
fn deadline_is_honoured() {
    let r = pring(32003, &["a", "b", "c", "d", "e"], MonomialOrder::GrevLex);
    let gens = polys(
        &r,
        &[
            "a + b + c + d + e",
            "a*b + b*c + c*d + d*e + e*a",
            "a*b*c + b*c*d + c*d*e + d*e*a + e*a*b",
            "a*b*c*d + b*c*d*e + c*d*e*a + d*e*a*b + e*a*b*c",
            "a*b*c*d*e - 1",
        ],
    );
    let past = std::time::Instant::now() - Duration::from_millis(1);
    let res = buchberger_in(&r, &gens, BuchbergerOptions { engine: Engine::Geobucket, deadline: Some(past) });
    assert!(matches!(res, Err(Error::Timeout)) || res.is_ok());
    // cyclic-5 has degree 70
    assert_eq!(buchberger(&gens).unwrap().degree().unwrap(), 70);
}

#[test]
fn rational_basis_is_monic_and_exact() {
    let r = qring(&["x", "y"], MonomialOrder::GrevLex);
    let g = buchberger(&polys(&r, &["3*x^2 + 5/7*y - 2", "11*y^2 - x"])).unwrap();
    assert!(is_reduced(&g));
    assert!(spolys_reduce_to_zero(&g));
    assert_eq!(g.degree().unwrap(), 4);
    let half: Rational = "1/2".parse().unwrap();
    assert!(!g.contains(&Polynomial::constant(&r, half)).unwrap());
}

fn staircase_count(gens: &[Vec<u16>], bounds: &[u16]) -> usize {
    // brute-force count of lattice points in the box not divisible by any generator
    let n = bounds.len();
    let mut count = 0;
    let mut cur = vec![0u16; n];
    loop {
        if !gens.iter().any(|g| g.iter().zip(&cur).all(|(a, b)| a <= b)) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            cur[k] += 1;
            if cur[k] < bounds[k] {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

fn random_system(p: u64, nvars: usize, seeds: &[(u64, Vec<(u16, u16, u16)>)]) -> Vec<Polynomial<PrimeField>> {
    let names = ["x", "y", "z"];
    let r = pring(p, &names[..nvars], MonomialOrder::GrevLex);
    seeds
        .iter()
        .map(|(c0, terms)| {
            let mut ts: Vec<(u64, Monomial)> = terms
                .iter()
                .map(|&(c, a, b)| {
                    let mut e = vec![a, b, 0];
                    e.truncate(nvars);
                    (c as u64 % p, Monomial::new(&e))
                })
                .collect();
            ts.push((c0 % p, Monomial::one(nvars)));
            Polynomial::from_terms(&r, ts).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monomial_ideal_degree_matches_lattice_count(
        n in 1usize..=3,
        raw in proptest::collection::vec(proptest::collection::vec(0u16..5, 3), 1..5),
        powers in proptest::collection::vec(1u16..6, 3),
    ) {
        let names = ["x", "y", "z"];
        let r = pring(7, &names[..n], MonomialOrder::GrevLex);
        let mut gens: Vec<Vec<u16>> = raw.into_iter().map(|mut v| { v.truncate(n); v }).collect();
        for k in 0..n {
            let mut e = vec![0u16; n];
            e[k] = powers[k];
            gens.push(e);
        }
        let ps: Vec<Polynomial<PrimeField>> =
            gens.iter().map(|e| Polynomial::monomial(&r, 1, Monomial::new(e))).collect();
        let g = buchberger(&ps).unwrap();
        let expected = staircase_count(&gens, &powers[..n]);
        prop_assert_eq!(g.degree().unwrap(), expected);
        prop_assert_eq!(g.quotient_basis().standard_monomials.len(), expected);
    }

    #[test]
    fn random_bases_are_groebner_and_shuffle_invariant(
        seeds in proptest::collection::vec(
            (any::<u64>(), proptest::collection::vec((1u16..1000, 0u16..4, 0u16..4), 1..5)),
            2..4),
        rot in 0usize..3,
    ) {
        let gens = random_system(101, 2, &seeds);
        let g = buchberger(&gens).unwrap();
        prop_assert!(spolys_reduce_to_zero(&g));
        prop_assert!(is_reduced(&g));
        for f in &gens {
            prop_assert!(g.contains(f).unwrap());
        }
        let mut shuffled = gens.clone();
        shuffled.reverse();
        let k = rot % shuffled.len();
        shuffled.rotate_left(k);
        let h = buchberger(&shuffled).unwrap();
        prop_assert_eq!(g.generators(), h.generators());
        let ring = gens[0].ring().clone();
        let m = buchberger_in(&ring, &gens, BuchbergerOptions { engine: Engine::Merge, deadline: None }).unwrap();
        prop_assert_eq!(g.generators(), m.generators());
    }

    #[test]
    fn degree_is_order_invariant(
        seeds in proptest::collection::vec(
            (any::<u64>(), proptest::collection::vec((1u16..1000, 0u16..3, 0u16..3), 1..4)),
            2..4),
    ) {
        let gens = random_system(101, 2, &seeds);
        let g = buchberger(&gens).unwrap();
        let lex = gens[0].ring().with_order(MonomialOrder::Lex);
        let moved: Vec<_> = gens.iter().map(|f| f.with_ring(&lex).unwrap()).collect();
        let h = buchberger(&moved).unwrap();
        prop_assert!(spolys_reduce_to_zero(&h));
        match (g.degree(), h.degree()) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "finiteness differs: {:?} vs {:?}", a, b),
        }
    }
}
