//! The invariant subalgebra (A'_{f,G})^G and its Frobenius structure.
//!
//! Invariants are computed per conjugacy class as Z(u)-fixed vectors in
//! A'_u and then symmetrized over G.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cuptable::CupEngine;
use crate::cyclotomic::CycNum;
use crate::fixedlocus::{monomial_basis, AlgebraElement, SectorClass};
use crate::gaction::{serialize_matrix, Action};
use crate::grading_pairing::{bidegree, eta_full, Bidegree};
use crate::group::{fixed_data, Group, GroupElement};
use crate::linalg::{nullspace, rank, solve_in_span, Matrix};
use crate::polyring::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("product {0} is not in the span of the invariant basis")]
    NotInSpan(String),
}

/// Elements generating the subgroup they sit in, chosen greedily.
pub fn generating_subset(elements: &[GroupElement]) -> Vec<GroupElement> {
    let Some(first) = elements.first() else {
        return Vec::new();
    };
    let (nv, n) = (first.nvars(), first.n);
    let mut gens: Vec<GroupElement> = Vec::new();
    let mut span = Group::generate(nv, n, &[], usize::MAX).expect("trivial group");
    for z in elements {
        if !span.contains(z) {
            gens.push(z.clone());
            span = Group::generate(nv, n, &gens, usize::MAX).expect("subgroup of a finite group");
        }
    }
    gens
}

/// Basis of (A'_u)^{Z(u)} as coefficient vectors over monomial_basis(u),
/// each supported in a single polynomial degree.
pub fn invariant_sector_basis(act: &Action, g: &Group, u: &GroupElement) -> Vec<Vec<CycNum>> {
    let basis = monomial_basis(u);
    let m = basis.len();
    let gens = generating_subset(&g.centralizer(u));
    let mats: Vec<Matrix> = gens.iter().map(|z| act.matrix(z, u)).collect();
    let degrees: Vec<u32> = basis.iter().map(|s| s.poly.degree()).collect();
    let mut distinct = degrees.clone();
    distinct.dedup();
    let mut out = Vec::new();
    for d in distinct {
        let cols: Vec<usize> = (0..m).filter(|&c| degrees[c] == d).collect();
        let mut stacked: Matrix = Vec::new();
        for mz in &mats {
            for r in 0..m {
                let row: Vec<CycNum> = cols
                    .iter()
                    .map(|&c| if r == c { &mz[r][c] - &CycNum::one() } else { mz[r][c].clone() })
                    .collect();
                if row.iter().any(|x| !x.is_zero()) {
                    stacked.push(row);
                }
            }
        }
        for v in nullspace(&stacked, cols.len()) {
            let mut full = vec![CycNum::zero(); m];
            for (k, &c) in cols.iter().enumerate() {
                full[c] = v[k].clone();
            }
            out.push(full);
        }
    }
    out
}

/// Σ_b v_b·(basis element b of sector u).
pub fn vector_to_element(u: &GroupElement, v: &[CycNum]) -> AlgebraElement {
    let mut p = Poly::zero();
    for (s, c) in monomial_basis(u).iter().zip(v) {
        if !c.is_zero() {
            p = &p + &s.poly.scale(c);
        }
    }
    AlgebraElement::from_class(SectorClass { u: u.clone(), poly: p })
}

/// x ↦ Σ_{w∈G} w^*(x).
pub fn symmetrize(act: &Action, g: &Group, a: &AlgebraElement) -> AlgebraElement {
    g.elements.iter().fold(AlgebraElement::zero(), |acc, w| acc.add(&act.act(w, a)))
}

/// Whether w^*(a) = a for every w in the list.
pub fn is_invariant(act: &Action, ws: &[GroupElement], a: &AlgebraElement) -> bool {
    ws.iter().all(|w| act.act(w, a) == *a)
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantElement {
    pub sector: String,
    /// The Z(u)-invariant in the representative sector before symmetrizing.
    pub representative: String,
    pub bidegree: Bidegree,
    pub parity: usize,
    #[serde(skip)]
    pub u: GroupElement,
    #[serde(skip)]
    pub element: AlgebraElement,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Flags {
    pub associative: bool,
    pub supercommutative: bool,
    pub frobenius: bool,
    pub nondegenerate: bool,
    pub diagonal_in_sl: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedDimension {
    pub bidegree: Bidegree,
    pub dimension: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductEntry {
    pub left: usize,
    pub right: usize,
    /// (basis index, coefficient) pairs with nonzero coefficient.
    pub value: Vec<(usize, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusAlgebraReport {
    pub dimension: usize,
    pub graded_dimensions: Vec<GradedDimension>,
    pub basis: Vec<InvariantElement>,
    pub products: Vec<ProductEntry>,
    #[serde(serialize_with = "serialize_matrix")]
    pub gram: Matrix,
    pub flags: Flags,
    #[serde(skip)]
    pub structure: Vec<Vec<Vec<CycNum>>>,
}

impl FrobeniusAlgebraReport {
    /// Index of the basis element with the given sector and representative
    /// polynomial, if any.
    pub fn find(&self, u: &GroupElement, rep: &Poly) -> Option<usize> {
        self.basis.iter().position(|b| b.u == *u && b.element.component(u) == *rep)
    }
}

/// Symmetrized invariant basis, in class-representative order.
pub fn invariant_basis(act: &Action, g: &Group) -> Vec<InvariantElement> {
    let reps: Vec<GroupElement> = g.conjugacy_classes().into_iter().map(|(u, _)| u).collect();
    let per_rep: Vec<Vec<InvariantElement>> = reps
        .par_iter()
        .map(|u| {
            invariant_sector_basis(act, g, u)
                .into_iter()
                .map(|v| {
                    let rep = vector_to_element(u, &v);
                    let class = rep.classes().next().expect("nullspace vectors are nonzero");
                    let element = symmetrize(act, g, &rep);
                    InvariantElement {
                        sector: u.label(),
                        representative: class.poly.to_string(),
                        bidegree: bidegree(&class).expect("degree-homogeneous by construction"),
                        parity: fixed_data(u).parity,
                        u: u.clone(),
                        element,
                    }
                })
                .collect()
        })
        .collect();
    per_rep.into_iter().flatten().collect()
}

/// Coordinates of an invariant element in the basis.
fn coordinates(basis: &[InvariantElement], y: &AlgebraElement) -> Result<Vec<CycNum>, InvariantError> {
    let mut out = vec![CycNum::zero(); basis.len()];
    if y.is_zero() {
        return Ok(out);
    }
    // an invariant is determined by its components on class representatives
    let mut by_rep: BTreeMap<&GroupElement, Vec<usize>> = BTreeMap::new();
    for (i, b) in basis.iter().enumerate() {
        by_rep.entry(&b.u).or_default().push(i);
    }
    for (u, idx) in by_rep {
        let target = sector_vector(u, &y.component(u));
        if target.iter().all(|c| c.is_zero()) {
            continue;
        }
        let vecs: Vec<Vec<CycNum>> = idx.iter().map(|&i| sector_vector(u, &basis[i].element.component(u))).collect();
        let c = solve_in_span(&vecs, &target).ok_or_else(|| InvariantError::NotInSpan(y.to_string()))?;
        for (k, &i) in idx.iter().enumerate() {
            out[i] = c[k].clone();
        }
    }
    let mut back = AlgebraElement::zero();
    for (b, c) in basis.iter().zip(&out) {
        if !c.is_zero() {
            back = back.add(&b.element.scale(c));
        }
    }
    if back != *y {
        return Err(InvariantError::NotInSpan(y.to_string()));
    }
    Ok(out)
}

fn sector_vector(u: &GroupElement, p: &Poly) -> Vec<CycNum> {
    monomial_basis(u).iter().map(|s| p.coeff(s.poly.terms.keys().next().expect("monomial"))).collect()
}

fn sign(parity: usize) -> CycNum {
    CycNum::from_int(if parity % 2 == 0 { 1 } else { -1 })
}

/// HH*(ℂ[x]⋊G, f) as the invariant algebra with all verification flags.
pub fn hh_algebra(engine: &CupEngine, g: &Group) -> Result<FrobeniusAlgebraReport, InvariantError> {
    let act = Action::new(engine);
    let basis = invariant_basis(&act, g);
    let dim = basis.len();
    let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).collect();
    let prods: Vec<Result<Vec<CycNum>, InvariantError>> = pairs
        .par_iter()
        .map(|&(i, j)| coordinates(&basis, &engine.cup(&basis[i].element, &basis[j].element)))
        .collect();
    let mut structure = vec![vec![Vec::new(); dim]; dim];
    for ((i, j), c) in pairs.iter().zip(prods) {
        structure[*i][*j] = c?;
    }
    let gram: Matrix = (0..dim)
        .into_par_iter()
        .map(|i| (0..dim).map(|j| eta_full(&basis[i].element, &basis[j].element)).collect())
        .collect();

    let flags = Flags {
        associative: check_associative(&structure),
        supercommutative: check_supercommutative(&structure, &basis),
        frobenius: check_frobenius(&structure, &gram),
        nondegenerate: rank(&gram, dim) == dim,
        diagonal_in_sl: g.diagonal_in_sl(),
    };

    let mut graded: BTreeMap<Bidegree, usize> = BTreeMap::new();
    for b in &basis {
        *graded.entry(b.bidegree.clone()).or_default() += 1;
    }
    let products = pairs
        .iter()
        .filter_map(|&(i, j)| {
            let value: Vec<(usize, String)> = structure[i][j]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.render()))
                .collect();
            (!value.is_empty()).then_some(ProductEntry { left: i, right: j, value })
        })
        .collect();
    Ok(FrobeniusAlgebraReport {
        dimension: dim,
        graded_dimensions: graded.into_iter().map(|(bidegree, dimension)| GradedDimension { bidegree, dimension }).collect(),
        basis,
        products,
        gram,
        flags,
        structure,
    })
}

fn mul_coords(st: &[Vec<Vec<CycNum>>], x: &[CycNum], j: usize) -> Vec<CycNum> {
    let dim = st.len();
    let mut out = vec![CycNum::zero(); dim];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (k, c) in st[i][j].iter().enumerate() {
            if !c.is_zero() {
                out[k] = &out[k] + &(xi * c);
            }
        }
    }
    out
}

fn check_associative(st: &[Vec<Vec<CycNum>>]) -> bool {
    let dim = st.len();
    (0..dim).into_par_iter().all(|i| {
        (0..dim).all(|j| {
            (0..dim).all(|k| {
                let left = mul_coords(st, &st[i][j], k);
                let mut e_i = vec![CycNum::zero(); dim];
                e_i[i] = CycNum::one();
                let mut right = vec![CycNum::zero(); dim];
                for (m, c) in st[j][k].iter().enumerate() {
                    if !c.is_zero() {
                        for (r, x) in st[i][m].iter().enumerate() {
                            right[r] = &right[r] + &(c * x);
                        }
                    }
                }
                left == right
            })
        })
    })
}

fn check_supercommutative(st: &[Vec<Vec<CycNum>>], basis: &[InvariantElement]) -> bool {
    let dim = st.len();
    (0..dim).all(|i| {
        (0..dim).all(|j| {
            let s = sign(basis[i].parity * basis[j].parity);
            st[i][j] == st[j][i].iter().map(|c| &s * c).collect::<Vec<_>>()
        })
    })
}

fn check_frobenius(st: &[Vec<Vec<CycNum>>], gram: &Matrix) -> bool {
    let dim = st.len();
    let pair = |x: &[CycNum], z: usize| x.iter().enumerate().fold(CycNum::zero(), |a, (k, c)| a + c * &gram[k][z]);
    let pair_left = |x: usize, y: &[CycNum]| y.iter().enumerate().fold(CycNum::zero(), |a, (k, c)| a + c * &gram[x][k]);
    (0..dim).all(|i| (0..dim).all(|j| (0..dim).all(|k| pair(&st[i][j], k) == pair_left(i, &st[j][k]))))
}

/// dim (A'_{f,G})^G as the rank of the averaging operator on all of
/// A'_{f,G}; blocks are conjugacy classes times polynomial degree.
pub fn global_average_dimension(act: &Action, g: &Group) -> usize {
    g.conjugacy_classes()
        .par_iter()
        .map(|(_, members)| {
            let mut by_degree: BTreeMap<u32, Vec<SectorClass>> = BTreeMap::new();
            for u in members {
                for s in monomial_basis(u) {
                    by_degree.entry(s.poly.degree()).or_default().push(s);
                }
            }
            by_degree
                .values()
                .map(|block| {
                    let index: Vec<(GroupElement, crate::polyring::Monomial)> =
                        block.iter().map(|s| (s.u.clone(), s.poly.terms.keys().next().unwrap().clone())).collect();
                    let rows: Matrix = block
                        .iter()
                        .map(|s| {
                            let img = symmetrize(act, g, &AlgebraElement::from_class(s.clone()));
                            index.iter().map(|(u, m)| img.component(u).coeff(m)).collect()
                        })
                        .collect();
                    rank(&rows, index.len())
                })
                .sum::<usize>()
        })
        .sum()
}
