mod common;

use common::*;
use fermat_hh::cuptable::{xi, CupConfig, CupEngine};
use fermat_hh::cyclotomic::CycNum;
use fermat_hh::gaction::Action;
use fermat_hh::group::GroupElement;
use fermat_hh::invariants::{hh_algebra, invariant_sector_basis, is_invariant, symmetrize, vector_to_element};
use fermat_hh::polyring::{Poly, VarId};

#[test]
fn example_one_is_four_dimensional() {
    let e = CupEngine::new(CupConfig::default());
    for g in [g1(), g2()] {
        let r = hh_algebra(&e, &g).unwrap();
        assert_eq!(r.dimension, 4);
        assert!(r.flags.associative && r.flags.supercommutative && r.flags.frobenius && r.flags.nondegenerate);
    }
}

#[test]
fn example_two_is_twenty_four_dimensional() {
    let e = CupEngine::new(CupConfig::default());
    let r = hh_algebra(&e, &example2()).unwrap();
    assert_eq!(r.dimension, 24);
}

/// In the (1,2)(3,4) sector of A4 the invariants are the classes φ(x̃₁₂, x̃₃₄)
/// that change sign when the two eigen-coordinates are swapped.
#[test]
fn a4_double_transposition_sector_is_antisymmetric() {
    let g = a4(3);
    let e = CupEngine::new(CupConfig::default());
    let act = Action::new(&e);
    let u = el(4, 3, "(1,2)(3,4)", &[]);
    let vs = invariant_sector_basis(&act, &g, &u);
    // for n = 3 the Jacobian is spanned by 1, x̃₁₂, x̃₃₄, x̃₁₂x̃₃₄
    assert_eq!(vs.len(), 1);
    let swap = |p: &Poly| p.substitute_partial(&[(VarId::Eigen(0), Poly::var(VarId::Eigen(2))), (VarId::Eigen(2), Poly::var(VarId::Eigen(0)))].into_iter().collect());
    for v in &vs {
        let a = vector_to_element(&u, v);
        let p = a.component(&u);
        assert_eq!(swap(&p), p.scale(&CycNum::from_int(-1)), "{p}");
    }
}

#[test]
fn symmetrizing_a_unit_gives_an_invariant() {
    let g = g1();
    let e = CupEngine::new(CupConfig::default());
    let act = Action::new(&e);
    let j = GroupElement::diagonal(vec![1, 1, 1], 3);
    let s = symmetrize(&act, &g, &xi(&j));
    assert!(is_invariant(&act, &g.generators, &s));
    assert_eq!(s, xi(&j).scale(&CycNum::from_int(9)));
    // J acts on ξ_(1,2,3) by a nontrivial cube root of unity
    let c = el(3, 3, "(1,2,3)", &[]);
    assert!(symmetrize(&act, &g, &xi(&c)).is_zero());
}
