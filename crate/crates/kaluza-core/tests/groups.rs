//! Integration tests for the affine symmetry groups: membership under random
//! parameters, group axioms, algebra bases and adjoint closure.

mod common;

use common::*;
use kaluza_core::groups::*;
use kaluza_core::hyperlin::SemiMetric;
use kaluza_core::linalg::{self, Matrix};
use rand_chacha::ChaCha8Rng;

pub fn random_lorentz(r: &mut ChaCha8Rng) -> Matrix {
    let v = random_velocity(r, 0.8);
    let rot = random_rotation(r);
    lorentz_from_boost_rotation(&v, &rot).unwrap()
}

pub fn random_element(r: &mut ChaCha8Rng, flavor: GroupFlavor) -> GroupElement {
    match flavor {
        GroupFlavor::Poincare => {
            GroupElement::poincare(&random_vec(r, 4, 2.0), &random_lorentz(r)).unwrap()
        }
        _ => loop {
            let c = random_vec(r, 4, 2.0);
            let xi = uniform(r, -2.0, 2.0);
            let b = random_vec(r, 4, 1.5);
            let p_l = random_lorentz(r);
            match GroupElement::hat(flavor, &c, xi, &p_l, &b) {
                Ok(el) => return el,
                Err(_) => continue, // 1 + w^2 b*b <= 0; resample
            }
        },
    }
}

pub fn random_algebra_element(r: &mut ChaCha8Rng, flavor: GroupFlavor) -> AlgebraElement {
    let basis = algebra_basis(flavor);
    let mut dc = vec![0.0; flavor.space_dim()];
    let mut dp = Matrix::zeros(flavor.space_dim(), flavor.space_dim());
    for z in &basis {
        let w = uniform(r, -1.0, 1.0);
        dc = linalg::add(&dc, &linalg::scale(z.delta_c(), w));
        dp = dp.add(&z.delta_p().scale(w));
    }
    AlgebraElement::new(flavor, &dc, &dp).unwrap()
}

const FLAVORS: [GroupFlavor; 5] = [
    GroupFlavor::Poincare,
    GroupFlavor::G1,
    GroupFlavor::GOmega(1.0),
    GroupFlavor::GOmega(0.1),
    GroupFlavor::G0,
];

#[test]
fn random_lorentz_conserves_metric() {
    let mut r = rng(31);
    let g = kaluza_core::hyperlin::Metric::minkowski();
    for _ in 0..200 {
        let p = random_lorentz(&mut r);
        let resid = p.transpose().mul(g.gram()).mul(&p).max_abs_diff(g.gram());
        assert!(resid < 1e-12);
        assert!(p[(0, 0)] >= 1.0 - 1e-12);
    }
}

#[test]
fn membership_violation_small_for_random_elements() {
    let mut r = rng(32);
    for flavor in FLAVORS {
        for _ in 0..100 {
            let el = random_element(&mut r, flavor);
            assert!(
                el.membership_violation() < 1e-12,
                "flavor {flavor:?} violates membership"
            );
        }
    }
}

#[test]
fn g0_preserves_debris_tensors_exactly_by_block() {
    let mut r = rng(33);
    let semi = SemiMetric::g0_hat();
    for _ in 0..100 {
        let el = random_element(&mut r, GroupFlavor::G0);
        let p = el.linear();
        let resid = p.transpose().mul(semi.gram()).mul(p).max_abs_diff(semi.gram());
        assert!(resid < 1e-12);
        let omega0 = [0.0, 0.0, 0.0, 0.0, 1.0];
        assert!(linalg::max_abs_diff(&p.apply(&omega0), &omega0) < 1e-15);
    }
}

#[test]
fn group_axioms() {
    let mut r = rng(34);
    for flavor in FLAVORS {
        for _ in 0..50 {
            let a = random_element(&mut r, flavor);
            let b = random_element(&mut r, flavor);
            let c = random_element(&mut r, flavor);
            // a a^-1 = identity
            let id = a.compose(&a.inverse()).unwrap();
            assert!(id.linear().max_abs_diff(&Matrix::identity(flavor.space_dim())) < 1e-12);
            assert!(linalg::max_abs(id.translation()) < 1e-12);
            // associativity
            let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
            let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
            assert!(ab_c.linear().max_abs_diff(a_bc.linear()) < 1e-12);
            assert!(linalg::max_abs_diff(ab_c.translation(), a_bc.translation()) < 1e-11);
            // closure
            assert!(a.compose(&b).unwrap().membership_violation() < 1e-11);
        }
    }
}

#[test]
fn g0_composition_twists_b_rows() {
    // b-parameters add after a Lorentz twist: b12* = b1* P2 + b2*
    let mut r = rng(35);
    for _ in 0..50 {
        let a1 = random_element(&mut r, GroupFlavor::G0);
        let a2 = random_element(&mut r, GroupFlavor::G0);
        let composed = a1.compose(&a2).unwrap();
        let g = kaluza_core::hyperlin::Metric::minkowski();
        let b1_star = g.lower(&a1.b_param());
        let b2_star = g.lower(&a2.b_param());
        let twisted: Vec<f64> = {
            let p2 = a2.p4();
            let mut row = vec![0.0; 4];
            for j in 0..4 {
                for k in 0..4 {
                    row[j] += b1_star[k] * p2[(k, j)];
                }
                row[j] += b2_star[j];
            }
            row
        };
        let got = g.lower(&composed.b_param());
        assert!(linalg::max_abs_diff(&got, &twisted) < 1e-12);
    }
}

#[test]
fn gomega_one_equals_g1() {
    let mut r = rng(36);
    for _ in 0..50 {
        let c = random_vec(&mut r, 4, 2.0);
        let xi = uniform(&mut r, -2.0, 2.0);
        let p_l = random_lorentz(&mut r);
        let b = random_vec(&mut r, 4, 1.0);
        let e1 = GroupElement::hat(GroupFlavor::G1, &c, xi, &p_l, &b);
        let ew = GroupElement::hat(GroupFlavor::GOmega(1.0), &c, xi, &p_l, &b);
        match (e1, ew) {
            (Ok(e1), Ok(ew)) => {
                assert!(e1.linear().max_abs_diff(ew.linear()) < 1e-15);
                assert!(linalg::max_abs_diff(e1.translation(), ew.translation()) < 1e-15);
            }
            (Err(a), Err(b)) => assert_eq!(a, b),
            _ => panic!("G1 and GOmega(1) disagree on validity"),
        }
    }
}

#[test]
fn g1_with_zero_fifth_parameters_restricts_to_poincare() {
    let mut r = rng(37);
    for _ in 0..50 {
        let c = random_vec(&mut r, 4, 2.0);
        let p_l = random_lorentz(&mut r);
        let hat = GroupElement::hat(GroupFlavor::G1, &c, 0.0, &p_l, &[0.0; 4]).unwrap();
        // upper 4x4 / 4-block is exactly the Poincare element
        assert!(hat.p4().max_abs_diff(&p_l) < 1e-15);
        assert!(linalg::max_abs_diff(hat.c4(), &c) < 1e-15);
        let poin = GroupElement::poincare(&c, &p_l).unwrap();
        assert!(poin.membership_violation() < 1e-12);
        // fifth row/column trivial
        for j in 0..4 {
            assert_eq!(hat.linear()[(4, j)], 0.0);
            assert_eq!(hat.linear()[(j, 4)], 0.0);
        }
        assert_eq!(hat.linear()[(4, 4)], 1.0);
    }
}

#[test]
fn basis_spans_algebra_by_svd_rank() {
    for flavor in FLAVORS {
        let basis = algebra_basis(flavor);
        let n = flavor.space_dim();
        // stack vectorized (dC, dP) as columns
        let m = Matrix::from_fn(n + n * n, basis.len(), |i, j| {
            let z = &basis[j];
            if i < n {
                z.delta_c()[i]
            } else {
                let k = i - n;
                z.delta_p()[(k / n, k % n)]
            }
        });
        assert_eq!(m.rank(1e-10), flavor.algebra_dim(), "flavor {flavor:?}");
    }
}

#[test]
fn adjoint_identity_inverse_and_closure() {
    let mut r = rng(38);
    for flavor in FLAVORS {
        let id = GroupElement::identity(flavor);
        for _ in 0..100 {
            let z = random_algebra_element(&mut r, flavor);
            // identity acts trivially
            let z_id = adjoint(&id, &z).unwrap();
            assert!(z_id.delta_p().max_abs_diff(z.delta_p()) < 1e-15);
            assert!(linalg::max_abs_diff(z_id.delta_c(), z.delta_c()) < 1e-15);

            let a = random_element(&mut r, flavor);
            // Ad(a) Ad(a^-1) = id
            let round = adjoint(&a, &adjoint(&a.inverse(), &z).unwrap()).unwrap();
            assert!(round.delta_p().max_abs_diff(z.delta_p()) < 1e-11);
            assert!(linalg::max_abs_diff(round.delta_c(), z.delta_c()) < 1e-10);
            // closure
            let az = adjoint(&a, &z).unwrap();
            let scale = 1.0 + az.delta_p().max_abs();
            assert!(az.invariant_violation() < 1e-11 * scale, "flavor {flavor:?}");
        }
    }
}

#[test]
fn exp_approx_nearly_member() {
    let mut r = rng(39);
    for flavor in FLAVORS {
        for _ in 0..20 {
            let z = random_algebra_element(&mut r, flavor);
            let el = exp_approx(&z, 1e-5);
            // membership error is O(t^3)
            assert!(el.membership_violation() < 1e-13);
        }
    }
}
