//! Bigrading (q_l, q_r) and the pairing η on the phase space.

use std::ops::Add;

use num_rational::BigRational as Rational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::CycNum;
use crate::fixedlocus::{hessian_class, lift, m_u, monomial_basis, restrict, top_monomial, AlgebraElement, SectorClass};
use crate::group::{age, fixed_data, Group, GroupElement};
use crate::linalg::rank;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("class {0} is not homogeneous")]
    Inhomogeneous(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub q_l: Rational,
    pub q_r: Rational,
}

impl Bidegree {
    pub fn swap(&self) -> Bidegree {
        Bidegree { q_l: self.q_r.clone(), q_r: self.q_l.clone() }
    }
}

impl Add for &Bidegree {
    type Output = Bidegree;
    fn add(self, o: &Bidegree) -> Bidegree {
        Bidegree { q_l: &self.q_l + &o.q_l, q_r: &self.q_r + &o.q_r }
    }
}

impl Serialize for Bidegree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.q_l.to_string(), self.q_r.to_string()).serialize(s)
    }
}

/// ((deg φ − d_u)/n + age(u), (deg φ − d_u)/n + age(u⁻¹)).
pub fn bidegree(s: &SectorClass) -> Result<Bidegree, GradingError> {
    let deg = if s.poly.is_zero() {
        0
    } else {
        s.poly.homogeneous_degree().ok_or_else(|| GradingError::Inhomogeneous(s.to_string()))?
    };
    let du = fixed_data(&s.u).d_u as i64;
    let shift = Rational::new((deg as i64 - du).into(), (s.u.n as i64).into());
    Ok(Bidegree { q_l: &shift + age(&s.u), q_r: &shift + age(&s.u.inverse()) })
}

/// η_u(a, b) for a in sector u and b in sector u⁻¹; 0 across other blocks.
pub fn eta(a: &SectorClass, b: &SectorClass) -> CycNum {
    if b.u != a.u.inverse() {
        return CycNum::zero();
    }
    let u = &a.u;
    let prod = restrict(&(&lift(a) * &lift(b)), u);
    let top = prod.poly.coeff(&top_monomial(u));
    if top.is_zero() {
        return top;
    }
    let (_, lambda) = hessian_class(u);
    let nu = fixed_data(u).n_u as i64;
    CycNum::from_int(u.n as i64 - 1).pow(nu) * top * lambda.inv().expect("λ_u is nonzero")
}

pub fn eta_full(a: &AlgebraElement, b: &AlgebraElement) -> CycNum {
    let mut acc = CycNum::zero();
    for x in a.classes() {
        for y in b.classes() {
            acc = acc + eta(&x, &y);
        }
    }
    acc
}

/// (−1)^{M_u}·det(g_u)⁻¹, the factor with η_u(a,b) = factor·η_{u⁻¹}(b,a).
pub fn symmetry_factor(u: &GroupElement) -> CycNum {
    let sign = if m_u(u) % 2 == 0 { 1 } else { -1 };
    CycNum::root_of_unity(u.n, -(u.det_exponent() as i64)) * CycNum::from_int(sign)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingBlock {
    pub u: String,
    pub rank: usize,
    pub size: usize,
    #[serde(serialize_with = "crate::gaction::serialize_matrix")]
    pub gram: Vec<Vec<CycNum>>,
}

/// Gram block of η_u on monomial_basis(u) × monomial_basis(u⁻¹).
pub fn gram_block(u: &GroupElement) -> PairingBlock {
    let rows = monomial_basis(u);
    let cols = monomial_basis(&u.inverse());
    let gram: Vec<Vec<CycNum>> = rows.iter().map(|a| cols.iter().map(|b| eta(a, b)).collect()).collect();
    PairingBlock { u: u.label(), rank: rank(&gram, cols.len()), size: rows.len(), gram }
}

pub fn gram(g: &Group) -> Vec<PairingBlock> {
    g.elements.par_iter().map(gram_block).collect()
}

/// Whether every Gram block has full rank.
pub fn nondegenerate(g: &Group) -> bool {
    gram(g).iter().all(|b| b.rank == b.size)
}

/// Whether η_u(x,y) = η_{u⁻¹}(y,x) on every block.
pub fn is_symmetric(g: &Group) -> bool {
    g.elements.iter().all(|u| {
        let rows = monomial_basis(u);
        let cols = monomial_basis(&u.inverse());
        rows.iter().all(|a| cols.iter().all(|b| eta(a, b) == eta(b, a)))
    })
}

pub fn zero_bidegree() -> Bidegree {
    Bidegree { q_l: Rational::zero(), q_r: Rational::zero() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Poly;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn unit_bidegrees() {
        let id = GroupElement::identity(3, 3);
        assert_eq!(bidegree(&SectorClass::unit(&id)).unwrap(), zero_bidegree());
        for (n, k) in [(3u32, 2usize), (3, 3), (4, 3), (5, 4)] {
            let cyc: Vec<usize> = (0..k).collect();
            let c = GroupElement::from_cycles(k, n, &[cyc]);
            let b = bidegree(&SectorClass::unit(&c)).unwrap();
            let expect = q(k as i64 - 1, 2) - q(k as i64 - 1, n as i64);
            assert_eq!((b.q_l.clone(), b.q_r.clone()), (expect.clone(), expect), "n={n} k={k}");
        }
    }

    #[test]
    fn nonspecial_cycle_bidegree() {
        let n = 3;
        let u = GroupElement::parse(2, n, "(1,2)", &[1, 0]).unwrap();
        let b = bidegree(&SectorClass::unit(&u)).unwrap();
        // q_l + q_r − 2(deg φ − d_u)/n = d_u
        assert_eq!(&b.q_l + &b.q_r + q(4, 3), q(2, 1));
    }

    #[test]
    fn inhomogeneous_rejected() {
        let id = GroupElement::identity(2, 4);
        let p = &Poly::one() + &Poly::x(0);
        assert!(bidegree(&SectorClass::new(id, p)).is_err());
    }

    #[test]
    fn normalization_on_identity() {
        let id = GroupElement::identity(3, 4);
        let (h, _) = hessian_class(&id);
        assert_eq!(eta(&SectorClass::unit(&id), &h), CycNum::from_int(27));
        let sub = SectorClass::new(id.clone(), Poly::x(0));
        assert!(eta(&SectorClass::unit(&id), &sub).is_zero());
    }

    #[test]
    fn empty_locus_pairs_units_by_inverse_lambda() {
        let j = GroupElement::diagonal(vec![1, 1, 1], 3);
        let (_, lambda) = hessian_class(&j);
        assert_eq!(eta(&SectorClass::unit(&j), &SectorClass::unit(&j.inverse())), lambda.inv().unwrap());
    }

    #[test]
    fn off_block_is_zero() {
        let a = GroupElement::t(2, 3, 0, 1);
        assert!(eta(&SectorClass::unit(&a), &SectorClass::unit(&a)).is_zero());
    }
}
