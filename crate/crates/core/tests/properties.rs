#![allow(clippy::needless_range_loop)]

//! Cross-module property tests: the structural invariants tying scalars,
//! polynomials, Jacobian rings and GW classes together.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use quadchi_core::gw::{diagonalize, gw_equal, hilbert_symbol, GWClass, Place};
use quadchi_core::jacobian::{hilbert_series_ci, JacobianRing};
use quadchi_core::linalg::{check_congruence, dense_rank, Rref, SparseRow};
use quadchi_core::poly::{Monomial, Poly, WeightedRing};
use quadchi_core::scalars::{square_class, FieldId, Scalar};

fn q(n: i64) -> Scalar {
    Scalar::from_int(n, FieldId::Rationals)
}

fn qq(n: i64, d: i64) -> Scalar {
    Scalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)), FieldId::Rationals)
        .unwrap()
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (-60i64..=60, 1i64..=20)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn small_t_poly() -> impl Strategy<Value = Scalar> {
    proptest::collection::vec(-6i64..=6, 1..4).prop_map(|coeffs| {
        let k = FieldId::RationalFunctions;
        let num: Vec<Scalar> = coeffs.iter().map(|&c| Scalar::from_int(c, k.base())).collect();
        Scalar::rat_func(k, num, vec![Scalar::one(k.base())]).unwrap()
    })
}

proptest! {
    #[test]
    fn qt_division_round_trips(a in small_t_poly(), b in small_t_poly()) {
        prop_assume!(!b.is_zero());
        let quotient = a.checked_div(&b).unwrap();
        prop_assert_eq!(quotient.checked_mul(&b).unwrap(), a);
    }

    #[test]
    fn square_class_ignores_squares(a in nonzero_rational(), c in nonzero_rational()) {
        let sa = Scalar::from_rational(a, FieldId::Rationals).unwrap();
        let sc = Scalar::from_rational(c, FieldId::Rationals).unwrap();
        let scaled = sa.checked_mul(&sc.checked_mul(&sc).unwrap()).unwrap();
        prop_assert_eq!(square_class(&sa).unwrap(), square_class(&scaled).unwrap());
    }

    #[test]
    fn square_class_is_multiplicative(a in nonzero_rational(), b in nonzero_rational()) {
        let sa = Scalar::from_rational(a, FieldId::Rationals).unwrap();
        let sb = Scalar::from_rational(b, FieldId::Rationals).unwrap();
        let lhs = square_class(&sa).unwrap().mul(&square_class(&sb).unwrap()).unwrap();
        let rhs = square_class(&sa.checked_mul(&sb).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn t_order_is_multiplicative(a in small_t_poly(), b in small_t_poly()) {
        let k = FieldId::RationalFunctions;
        let t = Scalar::t(k).unwrap();
        let fa = a.checked_mul(&t).unwrap(); // force nonzero order sometimes
        prop_assume!(!fa.is_zero() && !b.is_zero());
        let (oa, ua) = fa.t_order_and_unit().unwrap();
        let (ob, ub) = b.t_order_and_unit().unwrap();
        let (oab, uab) = fa.checked_mul(&b).unwrap().t_order_and_unit().unwrap();
        prop_assert_eq!(oab, oa + ob);
        prop_assert_eq!(uab, ua.checked_mul(&ub).unwrap());
    }

    #[test]
    fn hilbert_symbol_symmetry_and_bimultiplicativity(
        a in -30i64..=30, b in -30i64..=30, c in -30i64..=30,
        p_idx in 0usize..5,
    ) {
        prop_assume!(a != 0 && b != 0 && c != 0);
        let places = [Place::Infinity, Place::Prime(2), Place::Prime(3), Place::Prime(5), Place::Prime(7)];
        let v = places[p_idx];
        let (ra, rb, rc) = (
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
            BigRational::from_integer(c.into()),
        );
        prop_assert_eq!(hilbert_symbol(&ra, &rb, v), hilbert_symbol(&rb, &ra, v));
        let ac = &ra * &rc;
        prop_assert_eq!(
            hilbert_symbol(&ac, &rb, v),
            hilbert_symbol(&ra, &rb, v) * hilbert_symbol(&rc, &rb, v)
        );
    }

    #[test]
    fn specialization_is_additive_and_multiplicative(
        a in small_t_poly(), b in small_t_poly(), ka in 0u32..3, kb in 0u32..3,
    ) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let k = FieldId::RationalFunctions;
        let t = Scalar::t(k).unwrap();
        let mut fa = a;
        let mut fb = b;
        for _ in 0..ka { fa = fa.checked_mul(&t).unwrap(); }
        for _ in 0..kb { fb = fb.checked_mul(&t).unwrap(); }
        let qa = GWClass::rank_one(&fa).unwrap();
        let qb = GWClass::rank_one(&fb).unwrap();
        let sum_sp = qa.add(&qb).unwrap().specialize().unwrap();
        let sp_sum = qa.specialize().unwrap().add(&qb.specialize().unwrap()).unwrap();
        prop_assert!(gw_equal(&sum_sp, &sp_sum).unwrap().equal);
        let prod_sp = qa.mul(&qb).unwrap().specialize().unwrap();
        let sp_prod = qa.specialize().unwrap().mul(&qb.specialize().unwrap()).unwrap();
        prop_assert!(gw_equal(&prod_sp, &sp_prod).unwrap().equal);
        // sp(H) = H
        let h = GWClass::hyperbolic(k, 2);
        prop_assert_eq!(h.specialize().unwrap(), GWClass::hyperbolic(FieldId::Rationals, 2));
    }

    #[test]
    fn monomial_counts_match_generating_series(
        weights in proptest::collection::vec(1u32..=4, 1..=4),
        degree in 0i64..=18,
    ) {
        let ring = WeightedRing::new(
            FieldId::Rationals,
            (0..weights.len()).map(|i| format!("x{i}")).collect(),
            weights.clone(),
        ).unwrap();
        let bound = degree as usize;
        let mut series = vec![0i64; bound + 1];
        series[0] = 1;
        for &a in &weights {
            for m in a as usize..=bound {
                series[m] += series[m - a as usize];
            }
        }
        prop_assert_eq!(ring.monomials_of_degree(degree).len() as i64, series[bound]);
    }

    #[test]
    fn euler_defect_vanishes_for_homogeneous(
        weights in proptest::collection::vec(1u32..=3, 2..=4),
        seed_terms in proptest::collection::vec((proptest::collection::vec(0u32..=4, 4), -5i64..=5), 1..6),
        degree in 2i64..=8,
    ) {
        let ring = WeightedRing::new(
            FieldId::Rationals,
            (0..weights.len()).map(|i| format!("x{i}")).collect(),
            weights.clone(),
        ).unwrap();
        // project the random exponent seeds onto the monomials of the target
        // degree by rejection
        let monos = ring.monomials_of_degree(degree);
        prop_assume!(!monos.is_empty());
        let mut f = Poly::zero(&ring);
        for (exps, c) in &seed_terms {
            let idx = (exps.iter().map(|&e| e as usize).sum::<usize>()) % monos.len();
            f = f.add(&Poly::from_term(&ring, monos[idx].clone(), q(*c)));
        }
        prop_assert!(f.euler_defect().is_zero());
    }

    #[test]
    fn rref_is_insertion_order_independent(
        rows in proptest::collection::vec(
            proptest::collection::vec((0usize..8, -5i64..=5), 1..5), 1..7
        ),
        swap_a in 0usize..7, swap_b in 0usize..7,
    ) {
        let clean: Vec<SparseRow> = rows.iter().map(|r| {
            let mut row: SparseRow = r.iter()
                .filter(|(_, v)| *v != 0)
                .map(|(c, v)| (*c, q(*v)))
                .collect();
            row.sort_by_key(|(c, _)| *c);
            row.dedup_by(|a, b| {
                if a.0 == b.0 {
                    b.1 = &b.1 + &a.1;
                    true
                } else {
                    false
                }
            });
            row.retain(|(_, v)| !v.is_zero());
            row
        }).collect();
        let r1 = Rref::from_rows(clean.clone());
        let mut shuffled = clean;
        if !shuffled.is_empty() {
            let a = swap_a % shuffled.len();
            let b = swap_b % shuffled.len();
            shuffled.swap(a, b);
            shuffled.reverse();
        }
        let r2 = Rref::from_rows(shuffled);
        prop_assert_eq!(r1.rank(), r2.rank());
        let p1: Vec<usize> = r1.pivot_columns().collect();
        let p2: Vec<usize> = r2.pivot_columns().collect();
        prop_assert_eq!(p1.clone(), p2);
        for c in p1 {
            prop_assert_eq!(r1.row_for_pivot(c), r2.row_for_pivot(c));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn diagonalization_certificates_hold(
        n in 1usize..=5,
        entries in proptest::collection::vec(-4i64..=4, 25),
        field_pick in 0usize..2,
    ) {
        let field = if field_pick == 0 {
            FieldId::Rationals
        } else {
            FieldId::prime_field(7).unwrap()
        };
        let mut g = vec![vec![Scalar::zero(field); n]; n];
        let mut it = entries.into_iter();
        for i in 0..n {
            for j in 0..=i {
                let v = Scalar::from_int(it.next().unwrap(), field);
                g[i][j] = v.clone();
                g[j][i] = v;
            }
        }
        prop_assume!(dense_rank(&g) == n);
        let (class, diag, p) = diagonalize(field, &g).unwrap();
        prop_assert!(check_congruence(&g, &diag, &p));
        prop_assert_eq!(class.rank(), n as i64);
        // adding the zero class changes nothing
        let again = class.add(&GWClass::zero(field)).unwrap();
        prop_assert!(gw_equal(&class, &again).unwrap().equal);
    }

    #[test]
    fn gorenstein_symmetry_and_milnor_number(
        e in 2i64..=4,
        perturb in proptest::collection::vec((0usize..20, -2i64..=2), 0..3),
        nvars in 2usize..=3,
    ) {
        let ring = WeightedRing::standard(
            FieldId::Rationals,
            (0..nvars).map(|i| format!("x{i}")).collect(),
        ).unwrap();
        let mut f = Poly::zero(&ring);
        for i in 0..nvars {
            let mut exps = vec![0u32; nvars];
            exps[i] = e as u32;
            f = f.add(&Poly::from_term(&ring, Monomial::new(exps), q(1)));
        }
        let monos = ring.monomials_of_degree(e);
        for (idx, c) in &perturb {
            f = f.add(&Poly::from_term(&ring, monos[idx % monos.len()].clone(), q(*c)));
        }
        let j = match JacobianRing::build(&f) {
            Ok(j) => j,
            Err(_) => return Ok(()),
        };
        prop_assume!(j.is_smooth_quotient());
        let socle = j.socle_degree();
        for m in 0..=socle {
            prop_assert_eq!(j.dim_in_degree(m), j.dim_in_degree(socle - m));
        }
        // Milnor number of the smooth case: prod (e - 1) per variable
        prop_assert_eq!(j.total_dimension() as i64, (e - 1).pow(nvars as u32));
        // Hilbert function equals the closed-form series
        let series = hilbert_series_ci(j.ring().weights(), e, socle);
        let hf: Vec<i64> = j.hilbert_function(socle).iter().map(|&d| d as i64).collect();
        prop_assert_eq!(hf, series);
    }
}

/// Brute-force small-height isometry search: finds P with P^T G1 P = G2 for
/// 2x2 forms; used to confirm gw_equal verdicts from the invariant route.
fn isometry_search_2x2(g1: &[Vec<Scalar>], g2: &[Vec<Scalar>]) -> bool {
    let mut values = Vec::new();
    for num in -4i64..=4 {
        for den in 1i64..=2 {
            values.push(qq(num, den));
        }
    }
    let target = |p: &[&Scalar; 4]| -> bool {
        // compute P^T G1 P entrywise for P = [[a,b],[c,d]]
        let (a, b, c, d) = (p[0], p[1], p[2], p[3]);
        let col = |x: &Scalar, y: &Scalar| {
            vec![
                &(&g1[0][0] * x) + &(&g1[0][1] * y),
                &(&g1[1][0] * x) + &(&g1[1][1] * y),
            ]
        };
        let g1_p0 = col(a, c);
        let g1_p1 = col(b, d);
        let e00 = &(a * &g1_p0[0]) + &(c * &g1_p0[1]);
        let e01 = &(a * &g1_p1[0]) + &(c * &g1_p1[1]);
        let e11 = &(b * &g1_p1[0]) + &(d * &g1_p1[1]);
        e00 == g2[0][0] && e01 == g2[0][1] && e11 == g2[1][1]
    };
    for a in &values {
        for b in &values {
            for c in &values {
                for d in &values {
                    // nonsingular P only
                    let det = &(a * d) - &(b * c);
                    if det.is_zero() {
                        continue;
                    }
                    if target(&[a, b, c, d]) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[test]
fn gw_equal_matches_isometry_search() {
    // <2,2> vs <1,1>: equal over Q, witnessed by ((1,1),(1,-1))
    let d22 = vec![vec![q(2), q(0)], vec![q(0), q(2)]];
    let d11 = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
    let c22 = diagonalize(FieldId::Rationals, &d22).unwrap().0;
    let c11 = diagonalize(FieldId::Rationals, &d11).unwrap().0;
    assert!(gw_equal(&c22, &c11).unwrap().equal);
    assert!(isometry_search_2x2(&d11, &d22));

    // <1,1> vs <3,3>: NOT equal (Hasse at 2 and 3); the search agrees
    let d33 = vec![vec![q(3), q(0)], vec![q(0), q(3)]];
    let c33 = diagonalize(FieldId::Rationals, &d33).unwrap().0;
    assert!(!gw_equal(&c11, &c33).unwrap().equal);
    assert!(!isometry_search_2x2(&d11, &d33));

    // <1,-1> vs the hyperbolic Gram [[0,1],[1,0]]
    let dpm = vec![vec![q(1), q(0)], vec![q(0), q(-1)]];
    let h = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
    let cpm = diagonalize(FieldId::Rationals, &dpm).unwrap().0;
    let ch = diagonalize(FieldId::Rationals, &h).unwrap().0;
    assert!(gw_equal(&cpm, &ch).unwrap().equal);
    assert!(isometry_search_2x2(&dpm, &h));
}

#[test]
fn chi_rank_equals_hodge_oracle_on_weighted_examples() {
    use quadchi_core::hyper::HypersurfaceData;
    use quadchi_core::parse::parse_poly;
    for (src, vars, weights) in [
        ("y0^4 + y1^4 + y2^2", vec!["y0", "y1", "y2"], vec![1u32, 1, 2]),
        ("y0^6 + y1^6 + y2^2", vec!["y0", "y1", "y2"], vec![1, 1, 3]),
        ("y0^4 + y1^2", vec!["y0", "y1"], vec![1, 2]),
        ("y0^6 + y1^3 + y2^2", vec!["y0", "y1", "y2"], vec![1, 2, 3]),
        ("y0^6 + y1^6 + y2^3 + y3^2", vec!["y0", "y1", "y2", "y3"], vec![1u32, 1, 2, 3]),
    ] {
        let ring = WeightedRing::new(
            FieldId::Rationals,
            vars.iter().map(|s| s.to_string()).collect(),
            weights,
        )
        .unwrap();
        let h = HypersurfaceData::new(&parse_poly(src, &ring).unwrap()).unwrap();
        assert_eq!(h.chi_smooth().unwrap().rank(), h.hodge_rank_oracle(), "oracle mismatch for {src}");
    }
}

/// Legendre symbol by exhausting squares mod p; independent of the
/// powering-based route inside the symbol formulas.
fn legendre_by_exhaustion(u: u64, p: u64) -> i8 {
    let r = u % p;
    assert!(r != 0);
    if (1..p).any(|x| x * x % p == r) {
        1
    } else {
        -1
    }
}

#[test]
fn hilbert_symbol_matches_exhaustive_legendre() {
    // for odd p, a unit u and b = p v with v a unit: (u, p v)_p = (u | p)
    for p in [3u64, 5, 7, 11, 13] {
        for u in 1..p {
            for v in 1..p.min(6) {
                let a = BigRational::from_integer(BigInt::from(u));
                let b = BigRational::from_integer(BigInt::from(p * v));
                assert_eq!(
                    hilbert_symbol(&a, &b, Place::Prime(p)),
                    legendre_by_exhaustion(u, p),
                    "(u, pv)_p for u={u}, v={v}, p={p}"
                );
            }
        }
    }
    // the worked example: (2,3)_3 = Legendre(2|3) = -1
    assert_eq!(legendre_by_exhaustion(2, 3), -1);
}

#[test]
fn jacobian_cache_is_shareable_across_threads() {
    use std::sync::Arc;
    let ring = WeightedRing::standard(
        FieldId::Rationals,
        vec!["x".into(), "y".into(), "z".into(), "w".into()],
    )
    .unwrap();
    let f = quadchi_core::parse::parse_poly("x^4 + y^4 + z^4 + w^4", &ring).unwrap();
    let j = Arc::new(JacobianRing::build(&f).unwrap());
    let dims: Vec<usize> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..=j.socle_degree())
            .map(|m| {
                let j = Arc::clone(&j);
                scope.spawn(move || j.dim_in_degree(m))
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let series = hilbert_series_ci(&[1, 1, 1, 1], 4, j.socle_degree());
    let expected: Vec<usize> = series.iter().map(|&d| d as usize).collect();
    assert_eq!(dims, expected);
}
