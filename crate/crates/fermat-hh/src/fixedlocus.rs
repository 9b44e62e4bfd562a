//! Fixed loci, sector Jacobian algebras Jac(f^u) and Hessian classes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::cyclotomic::CycNum;
use crate::group::{cycle_decompose, fixed_data, CycleFactor, GroupElement};
use crate::polyring::{Monomial, Poly, VarId};

/// Coordinates on Fix(u): free fixed indices and one eigen coordinate per
/// special cycle. Non-special cycles and moved diagonal indices contribute
/// nothing.
#[derive(Clone, Debug)]
pub struct SectorVars {
    pub free: Vec<usize>,
    pub eigen: Vec<CycleFactor>,
}

impl SectorVars {
    pub fn of(u: &GroupElement) -> Self {
        let fd = fixed_data(u);
        let dec = cycle_decompose(u);
        SectorVars { free: fd.fixed, eigen: dec.cycles.into_iter().filter(|c| c.is_special()).collect() }
    }

    pub fn len(&self) -> usize {
        self.free.len() + self.eigen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sector variables in the fixed VarId order.
    pub fn vars(&self) -> Vec<VarId> {
        let mut v: Vec<VarId> = self.free.iter().map(|&i| VarId::X(i as u8)).collect();
        v.extend(self.eigen.iter().map(|c| VarId::Eigen(c.indices[0] as u8)));
        v.sort();
        v
    }
}

/// ⌊φ⌋ξ_u with φ a reduced polynomial in the sector variables of u.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SectorClass {
    pub u: GroupElement,
    pub poly: Poly,
}

impl SectorClass {
    pub fn new(u: GroupElement, poly: Poly) -> Self {
        let poly = jac_reduce(&poly, u.n);
        SectorClass { u, poly }
    }

    pub fn unit(u: &GroupElement) -> Self {
        SectorClass { u: u.clone(), poly: Poly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        SectorClass { u: self.u.clone(), poly: self.poly.scale(c) }
    }
}

impl fmt::Display for SectorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⌊{}⌋ξ_{}", self.poly, self.u)
    }
}

/// Finite sum of sector classes.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AlgebraElement {
    pub terms: BTreeMap<GroupElement, Poly>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn from_class(s: SectorClass) -> Self {
        let mut a = AlgebraElement::zero();
        a.add_class(s);
        a
    }

    pub fn add_class(&mut self, s: SectorClass) {
        if s.poly.is_zero() {
            return;
        }
        let entry = self.terms.entry(s.u).or_insert_with(Poly::zero);
        *entry = &*entry + &s.poly;
        let key = self.terms.iter().find(|(_, p)| p.is_zero()).map(|(k, _)| k.clone());
        if let Some(k) = key {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (u, p) in &other.terms {
            out.add_class(SectorClass { u: u.clone(), poly: p.clone() });
        }
        out
    }

    pub fn scale(&self, c: &CycNum) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (u, p) in &self.terms {
            out.add_class(SectorClass { u: u.clone(), poly: p.scale(c) });
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn classes(&self) -> impl Iterator<Item = SectorClass> + '_ {
        self.terms.iter().map(|(u, p)| SectorClass { u: u.clone(), poly: p.clone() })
    }

    pub fn component(&self, u: &GroupElement) -> Poly {
        self.terms.get(u).cloned().unwrap_or_else(Poly::zero)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.classes().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Kill every monomial with an exponent ≥ n−1 (ambient or eigen variable).
pub fn jac_reduce(p: &Poly, n: u32) -> Poly {
    p.truncate(n.saturating_sub(2), |v| matches!(v, VarId::X(_) | VarId::Eigen(_)))
}

/// f restricted to Fix(u): Σ_free x_l^n + Σ_special k·x̃^n.
pub fn f_restricted(u: &GroupElement) -> Poly {
    let sv = SectorVars::of(u);
    let mut p = Poly::zero();
    for &l in &sv.free {
        p.add_term(Monomial::var(VarId::X(l as u8), u.n), CycNum::one());
    }
    for c in &sv.eigen {
        p.add_term(Monomial::var(VarId::Eigen(c.indices[0] as u8), u.n), CycNum::from_int(c.len() as i64));
    }
    p
}

/// Ambient → sector substitution for u.
pub fn restriction_map(u: &GroupElement) -> HashMap<VarId, Poly> {
    let nv = u.nvars();
    let mut map: HashMap<VarId, Poly> = (0..nv).map(|i| (VarId::X(i as u8), Poly::zero())).collect();
    let sv = SectorVars::of(u);
    for &l in &sv.free {
        map.insert(VarId::X(l as u8), Poly::x(l));
    }
    for c in &sv.eigen {
        let e = Poly::var(VarId::Eigen(c.indices[0] as u8));
        for (a, &i) in c.indices.iter().enumerate() {
            map.insert(VarId::X(i as u8), e.scale(&CycNum::root_of_unity(u.n, -(c.gtilde[a] as i64))));
        }
    }
    map
}

/// Sector → ambient substitution: x̃ ↦ (1/k)Σ g̃_{i_a} x_{i_a}.
pub fn lift_map(u: &GroupElement) -> HashMap<VarId, Poly> {
    let sv = SectorVars::of(u);
    let mut map: HashMap<VarId, Poly> = sv.free.iter().map(|&l| (VarId::X(l as u8), Poly::x(l))).collect();
    for c in &sv.eigen {
        let k = c.len() as i64;
        let mut p = Poly::zero();
        for (a, &i) in c.indices.iter().enumerate() {
            p = &p + &Poly::x(i).scale(&(CycNum::root_of_unity(u.n, c.gtilde[a] as i64) * CycNum::frac(1, k)));
        }
        map.insert(VarId::Eigen(c.indices[0] as u8), p);
    }
    map
}

pub fn restrict(p: &Poly, u: &GroupElement) -> SectorClass {
    let q = p.substitute_partial(&restriction_map(u));
    SectorClass::new(u.clone(), q)
}

pub fn lift(s: &SectorClass) -> Poly {
    s.poly.substitute_partial(&lift_map(&s.u))
}

/// Monomials with exponents ≤ n−2 in the sector variables, ordered by
/// degree then by the fixed monomial order.
pub fn monomial_basis(u: &GroupElement) -> Vec<SectorClass> {
    let vars = SectorVars::of(u).vars();
    let bound = u.n.saturating_sub(2);
    let mut monos = vec![Monomial::one()];
    for v in &vars {
        let mut next = Vec::new();
        for m in &monos {
            for e in 0..=bound {
                next.push(m.mul(&Monomial::var(*v, e)));
            }
        }
        monos = next;
    }
    monos.sort_by(|a, b| a.degree().cmp(&b.degree()).then(a.cmp(b)));
    monos.into_iter().map(|m| SectorClass { u: u.clone(), poly: Poly::monomial(m, CycNum::one()) }).collect()
}

/// The top monomial ∏ v^{n−2} over the sector variables.
pub fn top_monomial(u: &GroupElement) -> Monomial {
    let bound = u.n.saturating_sub(2);
    Monomial::from_pairs(SectorVars::of(u).vars().into_iter().map(|v| (v, bound)).collect())
}

/// Pieces of u entering the Hessian sign: (p, M-contribution) per part.
fn hessian_parts(u: &GroupElement) -> (Vec<usize>, usize, CycNum) {
    let dec = cycle_decompose(u);
    let mut ps = Vec::new();
    let mut nonspecial = 0;
    let mut scalar = CycNum::one();
    let n = u.n as i64;
    let nn = CycNum::from_int(n * (n - 1));
    for c in &dec.cycles {
        let k = c.len();
        if c.is_special() {
            ps.push(k - 1);
            let sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
            scalar = scalar * CycNum::from_int(sign) * &nn;
        } else {
            ps.push(k);
            nonspecial += 1;
            scalar = scalar * (CycNum::root_of_unity(u.n, c.exp_sum() as i64) - CycNum::one());
        }
    }
    for &d in &dec.diagonal_rest.diag {
        if d != 0 {
            ps.push(1);
            nonspecial += 1;
            scalar = scalar * (CycNum::root_of_unity(u.n, d as i64) - CycNum::one());
        }
    }
    for _ in fixed_data(u).fixed {
        scalar = scalar * &nn;
    }
    (ps, nonspecial, scalar)
}

/// Number of non-special cycles of u, moved diagonal indices counted as
/// non-special 1-cycles.
pub fn m_u(u: &GroupElement) -> usize {
    hessian_parts(u).1
}

/// H_u as a reduced class together with λ_u, H_u = λ_u·(top monomial).
pub fn hessian_class(u: &GroupElement) -> (SectorClass, CycNum) {
    let (ps, _, scalar) = hessian_parts(u);
    let mut d = 0usize;
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            d += ps[i] * ps[j];
        }
    }
    let lambda = if d % 2 == 0 { scalar } else { -scalar };
    let class = SectorClass { u: u.clone(), poly: Poly::monomial(top_monomial(u), lambda.clone()) };
    (class, lambda)
}

#[derive(Serialize)]
pub struct SectorDump {
    pub u: String,
    pub variables: Vec<String>,
    pub monomials: Vec<String>,
}

pub fn sector_dump(u: &GroupElement) -> SectorDump {
    SectorDump {
        u: u.label(),
        variables: SectorVars::of(u).vars().iter().map(|v| v.to_string()).collect(),
        monomials: monomial_basis(u).iter().map(|s| s.poly.terms.keys().next().map_or("0".into(), |m| m.to_string())).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::fermat;

    fn el(nv: usize, n: u32, perm: &str, diag: &[i64]) -> GroupElement {
        GroupElement::parse(nv, n, perm, diag).unwrap()
    }

    #[test]
    fn restricted_polynomials() {
        let id = GroupElement::identity(3, 3);
        assert_eq!(f_restricted(&id), fermat(3, 3));
        let c = el(3, 3, "(1,2,3)", &[]);
        assert_eq!(f_restricted(&c), Poly::monomial(Monomial::var(VarId::Eigen(0), 3), CycNum::from_int(3)));
        assert!(f_restricted(&GroupElement::diagonal(vec![1, 1, 1], 3)).is_zero());
    }

    #[test]
    fn restriction_of_fermat_matches_restricted_fermat() {
        let u = el(4, 4, "(1,3,2)", &[1, 2, 1, 0]);
        let s = restrict(&fermat(4, 4), &u).poly;
        let expect = jac_reduce(&f_restricted(&u), 4);
        assert_eq!(s, expect);
    }

    #[test]
    fn restrict_gtilde_weighted_coordinate() {
        let u = el(3, 4, "(1,2,3)", &[1, 2, 1]);
        let dec = cycle_decompose(&u);
        let c = &dec.cycles[0];
        for (a, &i) in c.indices.iter().enumerate() {
            let p = Poly::x(i).scale(&CycNum::root_of_unity(4, c.gtilde[a] as i64));
            assert_eq!(restrict(&p, &u).poly, Poly::var(VarId::Eigen(0)));
        }
        assert!(restrict(&Poly::x(0), &GroupElement::t(3, 4, 0, 1)).is_zero());
    }

    #[test]
    fn lift_examples() {
        let u = el(2, 4, "(1,2)", &[]);
        let s = SectorClass::new(u.clone(), Poly::var(VarId::Eigen(0)));
        let half = CycNum::frac(1, 2);
        assert_eq!(lift(&s), &Poly::x(0).scale(&half) + &Poly::x(1).scale(&half));
        let c = SectorClass::new(u.clone(), Poly::constant(CycNum::from_int(3)));
        assert_eq!(lift(&c), Poly::constant(CycNum::from_int(3)));
        // Example-2 style class round trip
        let v = el(4, 4, "(1,2)(3,4)", &[2, 0, 2, 0]);
        let p = &(&Poly::x(0) + &Poly::x(1)).pow(2) - &(&Poly::x(2) + &Poly::x(3)).pow(2);
        let cls = restrict(&p, &v);
        assert_eq!(restrict(&lift(&cls), &v), cls);
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(monomial_basis(&GroupElement::diagonal(vec![1, 1, 1], 3)).len(), 1);
        assert_eq!(monomial_basis(&GroupElement::identity(3, 3)).len(), 8);
        let sw = el(2, 4, "(1,2)", &[]);
        let b = monomial_basis(&sw);
        assert_eq!(b.len(), 3);
        assert_eq!(b[2].poly, Poly::var(VarId::Eigen(0)).pow(2));
    }

    #[test]
    fn hessian_of_identity() {
        let (h, lambda) = hessian_class(&GroupElement::identity(3, 4));
        assert_eq!(lambda, CycNum::from_int(12 * 12 * 12));
        assert_eq!(h.poly, Poly::monomial(top_monomial(&GroupElement::identity(3, 4)), CycNum::from_int(1728)));
    }

    #[test]
    fn hessian_symmetry_under_inverse() {
        for (perm, diag) in [("(1,2,3)", vec![1, 0, 0]), ("(1,2)", vec![1, 3, 2]), ("", vec![1, 2, 0]), ("(1,3)", vec![2, 0, 2])] {
            let u = el(3, 4, perm, &diag);
            let (_, l) = hessian_class(&u);
            let (_, li) = hessian_class(&u.inverse());
            let sign = if m_u(&u) % 2 == 0 { 1 } else { -1 };
            let det_inv = CycNum::root_of_unity(4, -(u.det_exponent() as i64));
            assert_eq!(CycNum::from_int(sign) * det_inv * l, li, "{u}");
        }
    }
}
