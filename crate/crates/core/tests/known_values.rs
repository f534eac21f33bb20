//! Cross-checks against classical values: topological Euler characteristics
//! of standard hypersurfaces (rank of chi) and Euler characteristics of
//! real loci (signature of chi). These numbers are external to the engine,
//! so they pin the sign and normalization conventions end to end.

use quadchi_core::gw::invariants;
use quadchi_core::hyper::HypersurfaceData;
use quadchi_core::parse::parse_poly;
use quadchi_core::poly::WeightedRing;
use quadchi_core::scalars::FieldId;

fn hyp(src: &str, vars: &[&str], weights: &[u32]) -> HypersurfaceData {
    let ring = WeightedRing::new(
        FieldId::Rationals,
        vars.iter().map(|s| s.to_string()).collect(),
        weights.to_vec(),
    )
    .unwrap();
    HypersurfaceData::new(&parse_poly(src, &ring).unwrap()).unwrap()
}

#[test]
fn classical_euler_characteristics() {
    // smooth plane curves of degree d: chi_top = 2 - 2g = d(3 - d)
    for (d, expected) in [(2i64, 2i64), (3, 0), (4, -4), (5, -10), (6, -18)] {
        let src = format!("x^{d} + y^{d} + z^{d}");
        let h = hyp(&src, &["x", "y", "z"], &[1, 1, 1]);
        assert_eq!(h.chi_smooth().unwrap().rank(), expected, "plane curve degree {d}");
        assert_eq!(h.hodge_rank_oracle(), expected);
    }

    // surfaces in P^3: chi_top = d^3 - 4d^2 + 6d
    for (d, expected) in [(2i64, 4i64), (3, 9), (4, 24), (5, 55), (6, 108)] {
        let src = format!("x^{d} + y^{d} + z^{d} + w^{d}");
        let h = hyp(&src, &["x", "y", "z", "w"], &[1, 1, 1, 1]);
        assert_eq!(h.chi_smooth().unwrap().rank(), expected, "surface degree {d}");
    }

    // threefolds in P^4: quadric 4, cubic -6, quartic -56, quintic -200
    for (d, expected) in [(2i64, 4i64), (3, -6), (4, -56), (5, -200)] {
        let src = format!("x^{d} + y^{d} + z^{d} + w^{d} + v^{d}");
        let h = hyp(&src, &["x", "y", "z", "w", "v"], &[1, 1, 1, 1, 1]);
        let chi = h.chi_smooth().unwrap();
        assert_eq!(chi.rank(), expected, "threefold degree {d}");
        // odd-dimensional: an exact multiple of H
        assert!(chi.is_hyperbolic_multiple());
    }
}

#[test]
fn weighted_k3_double_cover_of_p2() {
    // the double cover of P^2 branched over a sextic is a K3: degree 6 in
    // P(1,1,1,3), Hodge numbers (1, 19, 1) on the primitive part, chi_top 24
    let h = hyp(
        "y0^6 + y1^6 + y2^6 + y3^2",
        &["y0", "y1", "y2", "y3"],
        &[1, 1, 1, 3],
    );
    assert!(h.warnings().is_empty());
    let j = h.jacobian();
    let degrees = j.primitive_degrees(2);
    assert_eq!(degrees, vec![0, 6, 12]);
    let dims: Vec<usize> = degrees.iter().map(|&d| j.dim_in_degree(d)).collect();
    assert_eq!(dims, vec![1, 19, 1]);
    let chi = h.chi_smooth().unwrap();
    assert_eq!(chi.rank(), 24);
    // the branch sextic has no real points below y3^2 = -(...), so X(R) is
    // empty and the signature vanishes
    assert_eq!(invariants(&chi).unwrap().signature, Some(0));
}

#[test]
fn hyperelliptic_genus_two_curve() {
    // y2^2 = -(y0^6 + y1^6) in P(1,1,3): genus 2, chi_top = -2
    let h = hyp("y0^6 + y1^6 + y2^2", &["y0", "y1", "y2"], &[1, 1, 3]);
    let chi = h.chi_smooth().unwrap();
    assert_eq!(chi.rank(), -2);
    assert_eq!(h.hodge_rank_oracle(), -2);
}

#[test]
fn signature_counts_real_points() {
    // sig(chi(X/Q)) = chi_top(X(R))
    // x^2 + y^2 + z^2 - w^2 = 0 is the sphere S^2: chi_top = 2
    let h = hyp("x^2 + y^2 + z^2 - w^2", &["x", "y", "z", "w"], &[1, 1, 1, 1]);
    let chi = h.chi_smooth().unwrap();
    assert_eq!(chi.rank(), 4);
    assert_eq!(invariants(&chi).unwrap().signature, Some(2));

    // the definite quadric has no real points
    let h = hyp("x^2 + y^2 + z^2 + w^2", &["x", "y", "z", "w"], &[1, 1, 1, 1]);
    assert_eq!(invariants(&h.chi_smooth().unwrap()).unwrap().signature, Some(0));

    // the hyperbolic quadric x^2 + y^2 - z^2 - w^2 = 0 is a torus: chi_top 0
    let h = hyp("x^2 + y^2 - z^2 - w^2", &["x", "y", "z", "w"], &[1, 1, 1, 1]);
    assert_eq!(invariants(&h.chi_smooth().unwrap()).unwrap().signature, Some(0));

    // quartic K3 with real points: w^4 = x^4 + y^4 + z^4 forces w != 0 on
    // the real locus, which is therefore the affine surface
    // x^4 + y^4 + z^4 = 1, a topological sphere: chi_top = 2
    let h = hyp("x^4 + y^4 + z^4 - w^4", &["x", "y", "z", "w"], &[1, 1, 1, 1]);
    let chi = h.chi_smooth().unwrap();
    assert_eq!(chi.rank(), 24);
    assert_eq!(invariants(&chi).unwrap().signature, Some(2));
}
