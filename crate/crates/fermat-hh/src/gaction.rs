//! The action v ↦ v^* of G on the phase space.
//!
//! Elementary actors (t_k and transpositions) act on generators by closed
//! formulas; a general v is split into elementary actors and a general
//! sector unit into its generator word, using that v^* is an algebra
//! automorphism.

use dashmap::DashMap;
use thiserror::Error;

use crate::cuptable::{CupEngine, Generator};
use crate::cyclotomic::CycNum;
use crate::fixedlocus::{lift, monomial_basis, restrict, AlgebraElement, SectorClass};
use crate::group::{cycle_decompose, fixed_data, Group, GroupElement};
use crate::polyring::group_twist;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("{0} is not in the group")]
    NotInGroup(String),
}

/// t_k or the transposition (a,b).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Elementary {
    T(usize),
    Swap(usize, usize),
}

impl Elementary {
    pub fn element(&self, nvars: usize, n: u32) -> GroupElement {
        match *self {
            Elementary::T(k) => GroupElement::t(nvars, n, k, 1),
            Elementary::Swap(a, b) => GroupElement::transposition(nvars, n, a, b),
        }
    }
}

/// Elementary actors in application order: v^* = e_m^* ∘ … ∘ e_1^* for the
/// returned list e_1, …, e_m.
pub fn elementary_factors(v: &GroupElement) -> Vec<Elementary> {
    let mut out = Vec::new();
    // v = σ∘diag(g): the diagonal part acts first
    for (k, &d) in v.diag.iter().enumerate() {
        out.extend(std::iter::repeat_n(Elementary::T(k), d as usize));
    }
    // σ = τ_1∘τ_2∘…∘τ_m, peeled from the left
    let mut cur = v.perm.clone();
    let mut swaps = Vec::new();
    while let Some(i) = (0..cur.len()).find(|&i| cur[i] != i) {
        let j = cur[i];
        swaps.push(Elementary::Swap(i.min(j), i.max(j)));
        for x in cur.iter_mut() {
            if *x == i {
                *x = j;
            } else if *x == j {
                *x = i;
            }
        }
    }
    out.extend(swaps.into_iter().rev());
    out
}

/// Action of t_k on a generator.
pub fn diag_on_generator(k: usize, g: &Generator, n: u32) -> (CycNum, Generator) {
    let zinv = CycNum::root_of_unity(n, -1);
    match *g {
        Generator::Diag { i, .. } if i == k => (zinv, *g),
        Generator::Diag { .. } => (CycNum::one(), *g),
        Generator::Trans { i, j, d } if k == i => (CycNum::one(), Generator::trans(i, j, d as i64 - 1, n)),
        Generator::Trans { i, j, d } if k == j => (zinv, Generator::trans(i, j, d as i64 + 1, n)),
        Generator::Trans { .. } => (CycNum::one(), *g),
    }
}

/// (σ,id)^* on ξ_{t_i^d}: conjugation with scalar 1.
pub fn act_on_diag_by_perm(sigma: &GroupElement, g: &GroupElement) -> SectorClass {
    SectorClass::unit(&g.conjugate_by(sigma))
}

/// Action of the transposition (a,b), a < b, on a transposition generator.
pub fn trans_on_trans(a: usize, b: usize, g: &Generator, n: u32) -> (CycNum, Generator) {
    let Generator::Trans { i, j, d } = *g else {
        panic!("trans_on_trans expects a transposition generator");
    };
    let d = d as i64;
    let one = CycNum::one();
    let twisted = || -(CycNum::root_of_unity(n, d));
    if (a, b) == (i, j) {
        return (twisted(), Generator::trans(i, j, -d, n));
    }
    let shared = [a, b].iter().filter(|x| **x == i || **x == j).count();
    if shared == 0 {
        return (one, *g);
    }
    let mut s = [a, b, i, j];
    s.sort_unstable();
    let mut idx: Vec<usize> = s.to_vec();
    idx.dedup();
    let (p, q, r) = (idx[0], idx[1], idx[2]);
    match ((a, b), (i, j)) {
        (x, y) if x == (p, r) && y == (p, q) => (twisted(), Generator::trans(q, r, -d, n)),
        (x, y) if x == (p, q) && y == (p, r) => (one, Generator::trans(q, r, d, n)),
        (x, y) if x == (p, r) && y == (q, r) => (twisted(), Generator::trans(p, q, -d, n)),
        (x, y) if x == (p, q) && y == (q, r) => (one, Generator::trans(p, r, d, n)),
        (x, y) if x == (q, r) && y == (p, r) => (one, Generator::trans(p, q, d, n)),
        (x, y) if x == (q, r) && y == (p, q) => (one, Generator::trans(p, r, d, n)),
        _ => unreachable!("three-index shapes are exhausted"),
    }
}

/// Action of one elementary actor on a generator.
pub fn elementary_on_generator(e: &Elementary, g: &Generator, n: u32) -> (CycNum, Generator) {
    match (*e, g) {
        (Elementary::T(k), _) => diag_on_generator(k, g, n),
        (Elementary::Swap(a, b), Generator::Diag { i, d }) => {
            let i2 = if *i == a { b } else if *i == b { a } else { *i };
            (CycNum::one(), Generator::Diag { i: i2, d: *d })
        }
        (Elementary::Swap(a, b), Generator::Trans { .. }) => trans_on_trans(a, b, g, n),
    }
}

/// Diagonal h on a special cycle sector: (∏_{p≥2} h_{i_p})⁻¹.
pub fn act_on_special(h: &GroupElement, c: &GroupElement) -> SectorClass {
    let cyc = &cycle_decompose(c).cycles[0];
    let e: i64 = cyc.indices[1..].iter().map(|&i| h.diag[i] as i64).sum();
    SectorClass::new(c.conjugate_by(h), crate::polyring::Poly::constant(CycNum::root_of_unity(c.n, -e)))
}

/// Diagonal h on a non-special sector: (∏_{i∈I} h_i)⁻¹ over the moved indices.
pub fn act_on_nonspecial(h: &GroupElement, u: &GroupElement) -> SectorClass {
    let e: i64 = fixed_data(u).moved.iter().map(|&i| h.diag[i] as i64).sum();
    SectorClass::new(u.conjugate_by(h), crate::polyring::Poly::constant(CycNum::root_of_unity(u.n, -e)))
}

/// v^* backed by a cup engine, with per-(v,u) memo of v^*ξ_u.
pub struct Action<'e> {
    pub engine: &'e CupEngine,
    units: DashMap<(GroupElement, GroupElement), CycNum>,
}

impl<'e> Action<'e> {
    pub fn new(engine: &'e CupEngine) -> Self {
        Action { engine, units: DashMap::new() }
    }

    /// c with v^*ξ_u = c·ξ_{vuv⁻¹}.
    pub fn unit_scalar(&self, v: &GroupElement, u: &GroupElement) -> CycNum {
        let key = (v.clone(), u.clone());
        if let Some(c) = self.units.get(&key) {
            return c.clone();
        }
        let (nv, n) = (u.nvars(), u.n);
        let word = self.engine.generator_word(u);
        let actors = elementary_factors(v);
        let mut coeff = word.scalar.clone();
        let mut acc = GroupElement::identity(nv, n);
        for g in &word.factors {
            let mut g = *g;
            for e in &actors {
                let (c, g2) = elementary_on_generator(e, &g, n);
                debug_assert_eq!(g2.element(nv, n), g.element(nv, n).conjugate_by(&e.element(nv, n)));
                coeff = &coeff * &c;
                g = g2;
            }
            let ge = g.element(nv, n);
            coeff = &coeff * &self.engine.lead(&acc, &ge);
            acc = acc.compose(&ge);
        }
        debug_assert_eq!(acc, u.conjugate_by(v));
        self.units.insert(key, coeff.clone());
        coeff
    }

    /// v^*(⌊φ⌋ξ_u) = ⌊φ(v(x))⌋·v^*ξ_u.
    pub fn act_class(&self, v: &GroupElement, s: &SectorClass) -> SectorClass {
        let target = s.u.conjugate_by(v);
        let c = self.unit_scalar(v, &s.u);
        let p = group_twist(&lift(s), v);
        restrict(&p.scale(&c), &target)
    }

    pub fn act(&self, v: &GroupElement, a: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for s in a.classes() {
            out.add_class(self.act_class(v, &s));
        }
        out
    }

    /// Same as [`Action::act`] with a membership check.
    pub fn act_in(&self, g: &Group, v: &GroupElement, a: &AlgebraElement) -> Result<AlgebraElement, ActionError> {
        if !g.contains(v) {
            return Err(ActionError::NotInGroup(v.label()));
        }
        Ok(self.act(v, a))
    }

    /// Matrix of v^* from monomial_basis(u) to monomial_basis(vuv⁻¹);
    /// column b holds the image of basis element b.
    pub fn matrix(&self, v: &GroupElement, u: &GroupElement) -> Vec<Vec<CycNum>> {
        let src = monomial_basis(u);
        let dst = monomial_basis(&u.conjugate_by(v));
        let mut m = vec![vec![CycNum::zero(); src.len()]; dst.len()];
        for (b, s) in src.iter().enumerate() {
            let img = self.act_class(v, s);
            for (a, t) in dst.iter().enumerate() {
                let mono = t.poly.terms.keys().next().unwrap();
                m[a][b] = img.poly.coeff(mono);
            }
        }
        m
    }
}

/// Serializes a CycNum matrix as rows of rendered entries.
pub fn serialize_matrix<S: serde::Serializer>(m: &[Vec<CycNum>], s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(|c| c.render()).collect()).collect();
    rows.serialize(s)
}
