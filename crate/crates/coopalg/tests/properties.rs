//! Randomized property tests for the linear-algebra core and the
//! derivation action.

use proptest::prelude::*;

use coopalg::comod::{ModulePres, Ring};
use coopalg::ext::{ext_chart, koszul_basis, koszul_diff};
use coopalg::gf2::{homology, Mat2};
use coopalg::margolis::margolis;
use coopalg::milnor::{q_action, q_monomial, AlgebraId, Element, Monomial};

fn arb_mat(max_dim: usize) -> impl Strategy<Value = Mat2> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::bool::ANY, r * c).prop_map(move |bits| {
            let mut m = Mat2::zero(r, c);
            for (i, &b) in bits.iter().enumerate() {
                if b {
                    m.set(i / c, i % c, true);
                }
            }
            m
        })
    })
}

/// Exponent vectors constrained to the ambient algebra: even on the
/// first three generators.
fn arb_monomial() -> impl Strategy<Value = Monomial> {
    (0u32..5, 0u32..4, 0u32..3, 0u32..3, 0u32..2).prop_map(|(e1, e2, e3, e4, e5)| {
        Monomial::from_pairs(&[(1, 2 * e1), (2, 2 * e2), (3, 2 * e3), (4, e4), (5, e5)])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity(m in arb_mat(10)) {
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
    }

    #[test]
    fn rref_idempotent(m in arb_mat(10)) {
        let r = m.rref().reduced;
        prop_assert_eq!(r.rref().reduced, r);
    }

    #[test]
    fn kernel_inclusion_is_exact(m in arb_mat(9)) {
        let kernel = m.kernel_basis();
        let mut incl = Mat2::zero(m.cols(), kernel.len());
        for (c, v) in kernel.iter().enumerate() {
            for r in v.ones() {
                incl.set(r, c, true);
            }
        }
        let h = homology(&incl, &m).unwrap();
        prop_assert_eq!(h.dim, 0);
    }

    #[test]
    fn solve_agrees_with_mul(m in arb_mat(8), seed in proptest::collection::vec(proptest::bool::ANY, 8)) {
        let mut x = coopalg::gf2::BitVec::zeros(m.cols());
        for (i, &b) in seed.iter().take(m.cols()).enumerate() {
            if b {
                x.set(i, true);
            }
        }
        let target = m.mul_vec(&x);
        let solution = m.solve(&target).unwrap();
        prop_assert_eq!(m.mul_vec(&solution), target);
    }

    #[test]
    fn q_square_zero_and_commute(m in arb_monomial()) {
        let amb = AlgebraId::AModE(2);
        let e = Element::from_monomial(amb, m);
        for i in 0..3u8 {
            prop_assert!(q_action(i, &q_action(i, &e)).is_zero());
            for j in 0..3u8 {
                prop_assert_eq!(
                    q_action(i, &q_action(j, &e)),
                    q_action(j, &q_action(i, &e))
                );
            }
        }
    }

    #[test]
    fn derivation_law(x in arb_monomial(), y in arb_monomial()) {
        let amb = AlgebraId::AModE(2);
        for i in 0..3u8 {
            let lhs = q_monomial(i, &x.mul(&y), amb);
            let mut rhs = Element::zero(amb);
            for t in q_monomial(i, &x, amb).terms {
                rhs.toggle(t.mul(&y));
            }
            for t in q_monomial(i, &y, amb).terms {
                rhs.toggle(x.mul(&t));
            }
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn length_weight_degree_shift(m in arb_monomial()) {
        let amb = AlgebraId::AModE(2);
        for i in 0..3u8 {
            let q = q_monomial(i, &m, amb);
            if m.length() == 0 {
                prop_assert!(q.is_zero());
            }
            for t in &q.terms {
                prop_assert_eq!(t.length() + 1, m.length());
                prop_assert_eq!(t.weight(), m.weight());
                prop_assert_eq!(t.degree(), m.degree() - ((1i64 << (i + 1)) - 1));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn koszul_d_squared_zero(j in 1i64..5, t in 0i64..20, s in 0u32..4) {
        let m = ModulePres::brown_gitler(1, j, Ring::E2);
        let d1 = koszul_diff(&m, Ring::E2, s, t);
        let d2 = koszul_diff(&m, Ring::E2, s + 1, t);
        prop_assert!(d2.mul(&d1).is_zero());
        prop_assert_eq!(d1.cols(), koszul_basis(&m, Ring::E2, s, t).len());
    }

    #[test]
    fn margolis_kunneth_on_weight_pieces(a in 0i64..4, b in 0i64..4) {
        let ma = ModulePres::weight_component(2, a, Ring::E2);
        let mb = ModulePres::weight_component(2, b, Ring::E2);
        let t = ma.tensor(&mb, None).unwrap();
        for i in 0..3u8 {
            let ha = margolis(&ma, i);
            let hb = margolis(&mb, i);
            let ht = margolis(&t, i);
            for d in 0..=t.max_degree().unwrap_or(0) {
                let want: usize = (0..=d).map(|x| ha.dim(x) * hb.dim(d - x)).sum();
                prop_assert_eq!(ht.dim(d), want);
            }
        }
    }

    #[test]
    fn ext_additivity(a in 0i64..4, b in 1i64..4) {
        let ma = ModulePres::weight_component(2, a, Ring::E2);
        let mb = ModulePres::brown_gitler(1, b, Ring::E2);
        let sum = ModulePres::direct_sum(&[&ma, &mb]).unwrap();
        let ca = ext_chart(&ma, Ring::E2, 4, 14).unwrap();
        let cb = ext_chart(&mb, Ring::E2, 4, 14).unwrap();
        let cs = ext_chart(&sum, Ring::E2, 4, 14).unwrap();
        for s in 0..=4u32 {
            for t in 0..=14i64 {
                prop_assert_eq!(cs.dim(s, t), ca.dim(s, t) + cb.dim(s, t));
            }
        }
    }
}
