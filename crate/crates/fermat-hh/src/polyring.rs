//! Sparse multivariate polynomials over ℚ(ζ).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::cyclotomic::CycNum;
use crate::group::GroupElement;

/// Variables: ambient x_i, eigen coordinates x̃_c (c = smallest index of the
/// cycle), and the shadow copies y_i, z_i used by difference derivatives.
/// The derived order is the rendering order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarId {
    X(u8),
    Eigen(u8),
    Y(u8),
    Z(u8),
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::X(i) => write!(f, "x{}", i + 1),
            VarId::Eigen(i) => write!(f, "xt{}", i + 1),
            VarId::Y(i) => write!(f, "y{}", i + 1),
            VarId::Z(i) => write!(f, "z{}", i + 1),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Tier {
    X,
    Y,
    Z,
}

impl Tier {
    pub fn var(self, i: usize) -> VarId {
        match self {
            Tier::X => VarId::X(i as u8),
            Tier::Y => VarId::Y(i as u8),
            Tier::Z => VarId::Z(i as u8),
        }
    }

    fn index_of(self, v: VarId) -> Option<usize> {
        match (self, v) {
            (Tier::X, VarId::X(i)) | (Tier::Y, VarId::Y(i)) | (Tier::Z, VarId::Z(i)) => Some(i as usize),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable {0} has no assignment")]
    Unassigned(VarId),
}

/// Sorted (var, exponent) list without zero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(pub Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(VarId, u32)>) -> Self {
        pairs.retain(|p| p.1 > 0);
        pairs.sort();
        let mut out: Vec<(VarId, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn exp(&self, v: VarId) -> u32 {
        self.0.iter().find(|p| p.0 == v).map_or(0, |p| p.1)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn max_exp(&self) -> u32 {
        self.0.iter().map(|p| p.1).max().unwrap_or(0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    pub terms: BTreeMap<Monomial, CycNum>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: CycNum) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Poly::constant(CycNum::one())
    }

    pub fn var(v: VarId) -> Self {
        Poly::monomial(Monomial::var(v, 1), CycNum::one())
    }

    pub fn x(i: usize) -> Self {
        Poly::var(VarId::X(i as u8))
    }

    pub fn monomial(m: Monomial, c: CycNum) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: CycNum) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn coeff(&self, m: &Monomial) -> CycNum {
        self.terms.get(m).cloned().unwrap_or_else(CycNum::zero)
    }

    /// The constant coefficient when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<CycNum> {
        match self.terms.len() {
            0 => Some(CycNum::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &CycNum) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Total degree of the highest term (0 for zero).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Some(d) if every term has total degree d.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn vars(&self) -> Vec<VarId> {
        let mut v: Vec<VarId> = self.terms.keys().flat_map(|m| m.0.iter().map(|p| p.0)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Apply f to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&CycNum) -> CycNum) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Drop every monomial in which some variable accepted by `filter` has
    /// exponent > bound.
    pub fn truncate(&self, bound: u32, filter: impl Fn(VarId) -> bool) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0.iter().all(|&(v, e)| !filter(v) || e <= bound))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Simultaneous substitution; every variable must be assigned.
    pub fn substitute(&self, assignment: &HashMap<VarId, Poly>) -> Result<Poly, PolyError> {
        for v in self.vars() {
            if !assignment.contains_key(&v) {
                return Err(PolyError::Unassigned(v));
            }
        }
        Ok(self.substitute_partial(assignment))
    }

    /// Substitution leaving unassigned variables in place.
    pub fn substitute_partial(&self, assignment: &HashMap<VarId, Poly>) -> Poly {
        let mut powers: HashMap<(VarId, u32), Poly> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            let mut kept = Vec::new();
            for &(v, e) in &m.0 {
                match assignment.get(&v) {
                    Some(p) => {
                        let pw = powers.entry((v, e)).or_insert_with(|| p.pow(e));
                        term = &term * &*pw;
                    }
                    None => kept.push((v, e)),
                }
                if term.is_zero() {
                    break;
                }
            }
            if term.is_zero() {
                continue;
            }
            let km = Monomial(kept);
            for (tm, tc) in term.terms {
                out.add_term(tm.mul(&km), tc);
            }
        }
        out
    }

    /// Linear substitution x_k ↦ c_k·x_{π(k)} done monomial-wise.
    pub fn rename_scaled(&self, map: &HashMap<VarId, (VarId, CycNum)>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut pairs = Vec::with_capacity(m.0.len());
            for &(v, e) in &m.0 {
                match map.get(&v) {
                    Some((w, s)) => {
                        if !s.is_one() {
                            coef = &coef * &s.pow(e as i64);
                        }
                        pairs.push((*w, e));
                    }
                    None => pairs.push((v, e)),
                }
            }
            out.add_term(Monomial::from_pairs(pairs), coef);
        }
        out
    }

    /// Deterministic rendering in the fixed variable order.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("[{c}]*{m}")).collect();
        parts.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

/// Replace x_k by ζ_n^{d_k}·x_{σ(k)}: the pullback φ ↦ φ∘u.
pub fn group_twist(p: &Poly, u: &GroupElement) -> Poly {
    let map: HashMap<VarId, (VarId, CycNum)> = (0..u.nvars())
        .map(|k| {
            (VarId::X(k as u8), (VarId::X(u.perm[k] as u8), CycNum::root_of_unity(u.n, u.diag[k] as i64)))
        })
        .collect();
    p.rename_scaled(&map)
}

/// Difference derivative ∇_i from tier `src` into (`src`, `dst`):
/// (l_i(p) − l_{i+1}(p))/(s_i − d_i) with l_i(p) = p(d_1..d_{i−1}, s_i..s_N).
/// Variables outside the source tier pass through.
pub fn diff_derivative(p: &Poly, i: usize, src: Tier, dst: Tier) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in &p.terms {
        let a = m.exp(src.var(i));
        if a == 0 {
            continue;
        }
        let mut base = Vec::with_capacity(m.0.len());
        for &(v, e) in &m.0 {
            match src.index_of(v) {
                Some(k) if k < i => base.push((dst.var(k), e)),
                Some(k) if k == i => {}
                _ => base.push((v, e)),
            }
        }
        let base = Monomial::from_pairs(base);
        for s in 0..a {
            let t = a - 1 - s;
            let extra = Monomial::from_pairs(vec![(src.var(i), s), (dst.var(i), t)]);
            out.add_term(base.mul(&extra), c.clone());
        }
    }
    out
}

/// Fermat polynomial Σ x_i^n.
pub fn fermat(nvars: usize, n: u32) -> Poly {
    let mut p = Poly::zero();
    for i in 0..nvars {
        p.add_term(Monomial::var(VarId::X(i as u8), n), CycNum::one());
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;
    use proptest::prelude::*;

    fn x(i: usize) -> Poly {
        Poly::x(i)
    }

    #[test]
    fn substitution_examples() {
        let mut a = HashMap::new();
        a.insert(VarId::X(0), x(1));
        assert_eq!(x(0).pow(2).substitute(&a).unwrap(), x(1).pow(2));
        let mut b = HashMap::new();
        b.insert(VarId::X(0), Poly::zero());
        b.insert(VarId::X(1), x(1));
        assert_eq!((&x(0) + &x(1)).substitute(&b).unwrap(), x(1));
        let z = CycNum::root_of_unity(4, 1);
        let mut c = HashMap::new();
        c.insert(VarId::X(0), x(1).scale(&z));
        assert_eq!(x(0).substitute(&c).unwrap(), x(1).scale(&z));
        assert_eq!(x(2).substitute(&c), Err(PolyError::Unassigned(VarId::X(2))));
    }

    #[test]
    fn twist_examples() {
        let sw = GroupElement::transposition(2, 4, 0, 1);
        assert_eq!(group_twist(&x(0), &sw), x(1));
        let t = GroupElement::t(2, 4, 0, 3);
        assert_eq!(group_twist(&x(0), &t), x(0).scale(&CycNum::root_of_unity(4, 3)));
        let f = fermat(3, 4);
        let u = GroupElement::parse(3, 4, "(1,3,2)", &[1, 2, 3]).unwrap();
        assert_eq!(group_twist(&f, &u), f);
    }

    #[test]
    fn single_variable_difference_derivative() {
        // (x^n − y^n)/(x − y)
        let n = 5;
        let p = x(0).pow(n);
        let d = diff_derivative(&p, 0, Tier::X, Tier::Y);
        let mut expect = Poly::zero();
        for s in 0..n {
            expect.add_term(Monomial::from_pairs(vec![(VarId::X(0), s), (VarId::Y(0), n - 1 - s)]), CycNum::one());
        }
        assert_eq!(d, expect);
        // times (x − y) gives back the difference
        let xy = &x(0) - &Poly::var(VarId::Y(0));
        assert_eq!(&d * &xy, &p - &Poly::var(VarId::Y(0)).pow(n));
        assert!(diff_derivative(&x(1).pow(3), 0, Tier::X, Tier::Y).is_zero());
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u32..4, 3), -3i64..4, 0i64..4), 0..6).prop_map(|terms| {
            let mut p = Poly::zero();
            for (exps, c, e) in terms {
                let m = Monomial::from_pairs(exps.iter().enumerate().map(|(i, &a)| (VarId::X(i as u8), a)).collect());
                p.add_term(m, CycNum::root_of_unity(4, e) * CycNum::from_int(c));
            }
            p
        })
    }

    fn arb_elem() -> impl Strategy<Value = GroupElement> {
        (Just((0..3usize).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(0i64..4, 3))
            .prop_map(|(perm, diag)| GroupElement::new(perm, diag, 4))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn telescoping_identity(p in arb_poly()) {
            let mut lhs = Poly::zero();
            for i in 0..3 {
                let diff = &Poly::x(i) - &Poly::var(VarId::Y(i as u8));
                lhs = &lhs + &(&diff * &diff_derivative(&p, i, Tier::X, Tier::Y));
            }
            let ymap: HashMap<VarId, Poly> = (0..3).map(|i| (VarId::X(i as u8), Poly::var(VarId::Y(i as u8)))).collect();
            prop_assert_eq!(lhs, &p - &p.substitute(&ymap).unwrap());
        }

        #[test]
        fn twist_is_homomorphism(a in arb_poly(), b in arb_poly(), u in arb_elem(), v in arb_elem()) {
            prop_assert_eq!(group_twist(&(&a * &b), &u), &group_twist(&a, &u) * &group_twist(&b, &u));
            prop_assert_eq!(group_twist(&a, &u.compose(&v)), group_twist(&group_twist(&a, &v), &u));
        }
    }
}
