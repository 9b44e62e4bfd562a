#![allow(dead_code)]

use fermat_hh::cyclotomic::CycNum;
use fermat_hh::fixedlocus::{monomial_basis, AlgebraElement};
use fermat_hh::group::{Group, GroupElement};
use fermat_hh::linalg::solve_in_span;

pub fn el(nv: usize, n: u32, perm: &str, diag: &[i64]) -> GroupElement {
    GroupElement::parse(nv, n, perm, diag).unwrap()
}

pub fn grp(nv: usize, n: u32, gens: &[(&str, &[i64])]) -> Group {
    let g: Vec<GroupElement> = gens.iter().map(|(p, d)| el(nv, n, p, d)).collect();
    Group::generate(nv, n, &g, 5000).unwrap()
}

pub fn s3() -> Group {
    grp(3, 3, &[("(1,2)", &[]), ("(1,2,3)", &[])])
}

pub fn g1() -> Group {
    grp(3, 3, &[("(1,2,3)", &[]), ("", &[1, 1, 1])])
}

pub fn g2() -> Group {
    grp(3, 3, &[("(1,2,3)", &[]), ("", &[1, 2, 0])])
}

/// ⟨(1,2)t_1t_2⁻¹⟩ for n = 4.
pub fn m4() -> Group {
    grp(2, 4, &[("(1,2)", &[1, 3])])
}

pub fn example2() -> Group {
    grp(4, 4, &[("", &[1, 1, 1, 1]), ("(1,2)(3,4)", &[]), ("(1,3)(2,4)", &[])])
}

pub fn s2_mu(n: u32) -> Group {
    grp(2, n, &[("(1,2)", &[]), ("", &[1, 0])])
}

pub fn s3_mu(n: u32) -> Group {
    grp(3, n, &[("(1,2)", &[]), ("(1,2,3)", &[]), ("", &[1, 0, 0])])
}

pub fn a4(n: u32) -> Group {
    grp(4, n, &[("(1,2,3)", &[]), ("(1,2)(3,4)", &[])])
}

/// Coordinates of y in the span of xs, over the union of their sectors.
pub fn coords(xs: &[AlgebraElement], y: &AlgebraElement) -> Option<Vec<CycNum>> {
    let mut sectors: Vec<GroupElement> = xs.iter().chain([y]).flat_map(|a| a.terms.keys().cloned()).collect();
    sectors.sort();
    sectors.dedup();
    let vec_of = |a: &AlgebraElement| -> Vec<CycNum> {
        sectors
            .iter()
            .flat_map(|u| {
                let p = a.component(u);
                monomial_basis(u).into_iter().map(move |s| p.coeff(s.poly.terms.keys().next().unwrap()))
            })
            .collect()
    };
    let vs: Vec<Vec<CycNum>> = xs.iter().map(vec_of).collect();
    solve_in_span(&vs, &vec_of(y))
}
