//! Structure constants σ_{u,v} from the Clifford-algebra formula, computed
//! from scratch: tilde coordinates, difference derivatives, the two-form
//! H_{f,u}, exponentials and the contraction map Υ. Used as an independent
//! check on the closed-form engine in [`crate::cuptable`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::cyclotomic::CycNum;
use crate::fixedlocus::{restrict, SectorClass};
use crate::group::{cycle_decompose, fixed_data, GroupElement};
use crate::polyring::{diff_derivative, fermat, group_twist, Poly, Tier, VarId};

/// Sign of moving the generators of `a` past those of `b` to sort a ∪ b.
fn merge_sign(a: u32, b: u32) -> i64 {
    // count pairs (s in a, t in b) with s > t
    let mut inv = 0;
    let mut bb = b;
    while bb != 0 {
        let t = bb.trailing_zeros();
        bb &= bb - 1;
        inv += (a >> (t + 1)).count_ones();
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn mask_len(m: u32) -> usize {
    m.count_ones() as usize
}

/// Σ_S p_S(x)·∂θ_S, with S a bitmask and ∂θ_S taken in increasing order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CliffordElem {
    pub terms: BTreeMap<u32, Poly>,
}

/// Σ_T p_T(x)·θ_T in the exterior algebra on the θ's.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ThetaPoly {
    pub terms: BTreeMap<u32, Poly>,
}

/// Σ p(x)·θ_{S1}⊗θ_{S2}.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BiWedge {
    pub terms: BTreeMap<(u32, u32), Poly>,
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Poly>, k: K, p: Poly) {
    if p.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(k) {
        Entry::Vacant(e) => {
            e.insert(p);
        }
        Entry::Occupied(mut e) => {
            let s = e.get() + &p;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

impl CliffordElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut e = Self::zero();
        e.terms.insert(0, Poly::one());
        e
    }

    /// ∂θ_i
    pub fn dtheta(i: usize) -> Self {
        let mut e = Self::zero();
        e.terms.insert(1 << i, Poly::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &CliffordElem) -> CliffordElem {
        let mut out = self.clone();
        for (k, p) in &other.terms {
            add_into(&mut out.terms, *k, p.clone());
        }
        out
    }

    pub fn scale(&self, c: &CycNum) -> CliffordElem {
        let mut out = Self::zero();
        for (k, p) in &self.terms {
            add_into(&mut out.terms, *k, p.scale(c));
        }
        out
    }

    pub fn scale_poly(&self, q: &Poly) -> CliffordElem {
        let mut out = Self::zero();
        for (k, p) in &self.terms {
            add_into(&mut out.terms, *k, p * q);
        }
        out
    }

    /// Product in ℂ[x]⊗ℂ[∂θ].
    pub fn mul(&self, other: &CliffordElem) -> CliffordElem {
        let mut out = Self::zero();
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let s = merge_sign(*a, *b);
                add_into(&mut out.terms, a | b, (p * q).scale(&CycNum::from_int(s)));
            }
        }
        out
    }

    /// Homogeneous component of degree d.
    pub fn degree_part(&self, d: usize) -> CliffordElem {
        CliffordElem { terms: self.terms.iter().filter(|(k, _)| mask_len(**k) == d).map(|(k, p)| (*k, p.clone())).collect() }
    }

    pub fn map_polys(&self, f: impl Fn(&Poly) -> Poly) -> CliffordElem {
        let mut out = Self::zero();
        for (k, p) in &self.terms {
            add_into(&mut out.terms, *k, f(p));
        }
        out
    }

    /// Sorted, deterministic dump.
    pub fn dump(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, p)| {
                let idx: Vec<String> = (0..32).filter(|i| k & (1 << i) != 0).map(|i| (i + 1).to_string()).collect();
                format!("({p})·∂θ[{}]", idx.join(","))
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for CliffordElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dump())
    }
}

/// θ_i·q via θ_i∂θ_S = (−1)^{pos−1}∂θ_{S∖i}, θ_i·1 = 0.
pub fn theta_action(i: usize, e: &CliffordElem) -> CliffordElem {
    let mut out = CliffordElem::zero();
    for (k, p) in &e.terms {
        if k & (1 << i) == 0 {
            continue;
        }
        let before = (k & ((1u32 << i) - 1)).count_ones();
        let sign = if before % 2 == 0 { 1 } else { -1 };
        add_into(&mut out.terms, k & !(1 << i), p.scale(&CycNum::from_int(sign)));
    }
    out
}

/// θ_T(q) = θ_{t1}(θ_{t2}(…θ_{tm}(q))).
fn theta_monomial_action(t: u32, q: &CliffordElem) -> CliffordElem {
    let idx: Vec<usize> = (0..32).filter(|i| t & (1 << i) != 0).collect();
    let mut r = q.clone();
    for &i in idx.iter().rev() {
        r = theta_action(i, &r);
        if r.is_zero() {
            break;
        }
    }
    r
}

impl ThetaPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut e = Self::zero();
        e.terms.insert(0, Poly::one());
        e
    }

    pub fn add(&self, other: &ThetaPoly) -> ThetaPoly {
        let mut out = self.clone();
        for (k, p) in &other.terms {
            add_into(&mut out.terms, *k, p.clone());
        }
        out
    }

    pub fn mul(&self, other: &ThetaPoly) -> ThetaPoly {
        let mut out = Self::zero();
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                add_into(&mut out.terms, a | b, (p * q).scale(&CycNum::from_int(merge_sign(*a, *b))));
            }
        }
        out
    }

    pub fn scale(&self, c: &CycNum) -> ThetaPoly {
        let mut out = Self::zero();
        for (k, p) in &self.terms {
            add_into(&mut out.terms, *k, p.scale(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Action on ℂ[∂θ].
    pub fn act(&self, q: &CliffordElem) -> CliffordElem {
        let mut out = CliffordElem::zero();
        for (t, p) in &self.terms {
            let r = theta_monomial_action(*t, q).scale_poly(p);
            out = out.add(&r);
        }
        out
    }

    /// exp of an even nilpotent element.
    pub fn exp(&self) -> ThetaPoly {
        let mut out = ThetaPoly::one();
        let mut power = ThetaPoly::one();
        let mut m = 1i64;
        loop {
            power = power.mul(self).scale(&CycNum::frac(1, m));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
            m += 1;
        }
        out
    }

    pub fn map_polys(&self, f: impl Fn(&Poly) -> Poly) -> ThetaPoly {
        let mut out = Self::zero();
        for (k, p) in &self.terms {
            add_into(&mut out.terms, *k, f(p));
        }
        out
    }
}

impl BiWedge {
    pub fn mul(&self, other: &BiWedge) -> BiWedge {
        let mut out = BiWedge::default();
        for ((a1, a2), p) in &self.terms {
            for ((b1, b2), q) in &other.terms {
                if a1 & b1 != 0 || a2 & b2 != 0 {
                    continue;
                }
                // (p1⊗p2)(q1⊗q2) = (−1)^{|p2||q1|} p1q1⊗p2q2
                let mut s = merge_sign(*a1, *b1) * merge_sign(*a2, *b2);
                if (mask_len(*a2) * mask_len(*b1)) % 2 == 1 {
                    s = -s;
                }
                add_into(&mut out.terms, (a1 | b1, a2 | b2), (p * q).scale(&CycNum::from_int(s)));
            }
        }
        out
    }

    pub fn exp(&self) -> BiWedge {
        let mut one = BiWedge::default();
        one.terms.insert((0, 0), Poly::one());
        let mut out = one.clone();
        let mut power = one;
        let mut m = 1i64;
        loop {
            power = power.mul(self);
            let inv = CycNum::frac(1, m);
            power.terms.values_mut().for_each(|p| *p = p.scale(&inv));
            if power.terms.is_empty() {
                break;
            }
            for (k, p) in &power.terms {
                add_into(&mut out.terms, *k, p.clone());
            }
            m += 1;
        }
        out
    }
}

/// Υ(p1⊗p2⊗q1⊗q2) = (−1)^{|q1||p2|} p1(q1)·p2(q2), ℂ[x]-linear.
pub fn upsilon(b: &BiWedge, q1: &CliffordElem, q2: &CliffordElem) -> CliffordElem {
    let mut out = CliffordElem::zero();
    for ((t1, t2), p) in &b.terms {
        for (s1, c1) in &q1.terms {
            let mut single1 = CliffordElem::zero();
            single1.terms.insert(*s1, c1.clone());
            let a = theta_monomial_action(*t1, &single1);
            if a.is_zero() {
                continue;
            }
            let sign = if (mask_len(*s1) * mask_len(*t2)) % 2 == 1 { -1 } else { 1 };
            let bq = theta_monomial_action(*t2, q2);
            if bq.is_zero() {
                continue;
            }
            let r = a.mul(&bq).scale_poly(p).scale(&CycNum::from_int(sign));
            out = out.add(&r);
        }
    }
    out
}

/// H_f(x, y, z) = Σ_{j≤i} ∇_j^{y→(y,z)}∇_i^{x→(x,y)}(f) θ_i⊗θ_j.
pub fn h_f_general(nvars: usize, n: u32) -> BiWedge {
    let f = fermat(nvars, n);
    let mut out = BiWedge::default();
    for i in 0..nvars {
        let di = diff_derivative(&f, i, Tier::X, Tier::Y);
        for j in 0..=i {
            let dji = diff_derivative(&di, j, Tier::Y, Tier::Z);
            add_into(&mut out.terms, (1 << i, 1 << j), dji);
        }
    }
    out
}

/// H_f(x, u(x), x) obtained by substituting y = u(x), z = x.
pub fn h_f_twisted(u: &GroupElement) -> BiWedge {
    let nv = u.nvars();
    let mut sub: HashMap<VarId, Poly> = HashMap::new();
    for k in 0..nv {
        sub.insert(VarId::Y(k as u8), group_twist(&Poly::x(k), u));
        sub.insert(VarId::Z(k as u8), Poly::x(k));
    }
    let general = h_f_general(nv, u.n);
    let mut out = BiWedge::default();
    for (k, p) in &general.terms {
        add_into(&mut out.terms, *k, p.substitute_partial(&sub));
    }
    out
}

/// Closed form Σ_i Σ_{a+b=n−2}(a+1) g_i^b x_i^a x_{σ(i)}^b θ_i⊗θ_i.
pub fn h_f_twisted_closed_form(u: &GroupElement) -> BiWedge {
    let mut out = BiWedge::default();
    let n = u.n;
    for i in 0..u.nvars() {
        let mut p = Poly::zero();
        for a in 0..=n - 2 {
            let b = n - 2 - a;
            let c = CycNum::from_int(a as i64 + 1) * CycNum::root_of_unity(n, (u.diag[i] * b) as i64);
            let term = &Poly::x(i).pow(a) * &Poly::x(u.perm[i]).pow(b);
            p = &p + &term.scale(&c);
        }
        add_into(&mut out.terms, (1 << i, 1 << i), p);
    }
    out
}

/// Linear change of coordinates diagonalizing u.
#[derive(Clone, Debug)]
pub struct TildeCoords {
    /// eigenvalue of slot s
    pub lambda: Vec<CycNum>,
    /// x̃_s = Σ_i fwd[s][i] x_i (also θ̃_s in terms of θ_i)
    pub fwd: Vec<Vec<CycNum>>,
    /// x_i = Σ_s bwd[i][s] x̃_s
    pub bwd: Vec<Vec<CycNum>>,
}

impl TildeCoords {
    pub fn of(u: &GroupElement) -> Self {
        let nv = u.nvars();
        let n = u.n;
        let zero = || vec![vec![CycNum::zero(); nv]; nv];
        let (mut fwd, mut bwd) = (zero(), zero());
        let mut lambda = vec![CycNum::one(); nv];
        for i in 0..nv {
            if u.perm[i] == i {
                fwd[i][i] = CycNum::one();
                bwd[i][i] = CycNum::one();
                lambda[i] = CycNum::root_of_unity(n, u.diag[i] as i64);
            }
        }
        for c in cycle_decompose(u).cycles {
            let k = c.len() as u32;
            let mu = CycNum::root_of_unity(n * k, (c.exp_sum() % n) as i64);
            let inv_k = CycNum::frac(1, k as i64);
            for b in 0..k as usize {
                let s = c.indices[b];
                lambda[s] = &mu * &CycNum::root_of_unity(k, b as i64);
                for a in 0..k as usize {
                    let i = c.indices[a];
                    let gt = CycNum::root_of_unity(n, c.gtilde[a] as i64);
                    let w = CycNum::root_of_unity(k, -((b * a) as i64));
                    fwd[s][i] = &(&(&w * &mu.pow(-(a as i64))) * &gt) * &inv_k;
                    let w2 = CycNum::root_of_unity(k, (b * a) as i64);
                    bwd[i][s] = &(&w2 * &mu.pow(a as i64)) * &gt.inv().unwrap();
                }
            }
        }
        TildeCoords { lambda, fwd, bwd }
    }

    fn is_moved(&self, s: usize) -> bool {
        !self.lambda[s].is_one()
    }
}

fn linear_form(coeffs: &[CycNum]) -> Poly {
    let mut p = Poly::zero();
    for (i, c) in coeffs.iter().enumerate() {
        p = &p + &Poly::x(i).scale(c);
    }
    p
}

/// The two-form H_{f,u} in the original θ basis with coefficients in x.
pub fn h_fu(u: &GroupElement) -> ThetaPoly {
    let nv = u.nvars();
    let tc = TildeCoords::of(u);
    // f in tilde coordinates (X tier holds x̃)
    let to_tilde: HashMap<VarId, Poly> = (0..nv).map(|i| (VarId::X(i as u8), linear_form(&tc.bwd[i]))).collect();
    let f_t = fermat(nv, u.n).substitute_partial(&to_tilde);
    let y_to_ux: HashMap<VarId, Poly> =
        (0..nv).map(|s| (VarId::Y(s as u8), Poly::x(s).scale(&tc.lambda[s]))).collect();
    let y_to_fix: HashMap<VarId, Poly> = (0..nv)
        .map(|s| (VarId::Y(s as u8), if tc.is_moved(s) { Poly::zero() } else { Poly::x(s) }))
        .collect();
    let from_tilde: HashMap<VarId, Poly> = (0..nv).map(|s| (VarId::X(s as u8), linear_form(&tc.fwd[s]))).collect();
    let theta_tilde = |s: usize| -> ThetaPoly {
        let mut t = ThetaPoly::zero();
        for i in 0..nv {
            if !tc.fwd[s][i].is_zero() {
                add_into(&mut t.terms, 1 << i, Poly::constant(tc.fwd[s][i].clone()));
            }
        }
        t
    };
    let mut h = ThetaPoly::zero();
    for i in (0..nv).filter(|&s| tc.is_moved(s)) {
        let pi = diff_derivative(&f_t, i, Tier::X, Tier::Y).substitute_partial(&y_to_ux);
        for j in (0..i).filter(|&s| tc.is_moved(s)) {
            let q = diff_derivative(&pi, j, Tier::X, Tier::Y).substitute_partial(&y_to_fix);
            if q.is_zero() {
                continue;
            }
            let w = (CycNum::one() - tc.lambda[j].clone()).inv().expect("moved slot has λ ≠ 1");
            let coeff = q.substitute_partial(&from_tilde).scale(&w);
            let mut term = theta_tilde(j).mul(&theta_tilde(i));
            term = term.map_polys(|p| p * &coeff);
            h = h.add(&term);
        }
    }
    h
}

/// ∂θ̃_u assembled from its parts ordered by minimal index.
pub fn lead_clifford(u: &GroupElement) -> CliffordElem {
    let n = u.n;
    let dec = cycle_decompose(u);
    let mut parts: Vec<(usize, CliffordElem)> = Vec::new();
    for c in &dec.cycles {
        let k = c.len();
        let e = if c.is_special() {
            let mut sum = CliffordElem::zero();
            for m in 0..k {
                let mut w = CliffordElem::one();
                for (a, &i) in c.indices.iter().enumerate() {
                    if a != m {
                        w = w.mul(&CliffordElem::dtheta(i));
                    }
                }
                let sign = if m % 2 == 0 { 1 } else { -1 };
                let coef = CycNum::root_of_unity(n, c.gtilde[m] as i64) * CycNum::from_int(sign);
                sum = sum.add(&w.scale(&coef));
            }
            sum
        } else {
            let mut w = CliffordElem::one();
            for &i in &c.indices {
                w = w.mul(&CliffordElem::dtheta(i));
            }
            w
        };
        parts.push((c.indices[0], e));
    }
    let moved_diag: Vec<usize> = (0..u.nvars()).filter(|&i| dec.diagonal_rest.diag[i] != 0).collect();
    if let Some(&first) = moved_diag.first() {
        let mut w = CliffordElem::one();
        for &i in &moved_diag {
            w = w.mul(&CliffordElem::dtheta(i));
        }
        parts.push((first, w));
    }
    parts.sort_by_key(|p| p.0);
    parts.into_iter().fold(CliffordElem::one(), |acc, (_, e)| acc.mul(&e))
}

/// ξ̃_u = exp(H_{f,u})·∂θ̃_u.
pub fn xi_tilde(u: &GroupElement) -> CliffordElem {
    h_fu(u).exp().act(&lead_clifford(u))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSigma {
    pub value: SectorClass,
    pub conclusive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// evaluate the right factor's coefficients at u(x)
    pub right_twist: bool,
    /// include exp(H_{f,u}) in ξ̃_u
    pub two_form: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { right_twist: true, two_form: true }
    }
}

pub fn sigma(u: &GroupElement, v: &GroupElement) -> OracleSigma {
    sigma_with(u, v, OracleConfig::default())
}

pub fn sigma_with(u: &GroupElement, v: &GroupElement, cfg: OracleConfig) -> OracleSigma {
    let uv = u.compose(v);
    let (du, dv, duv) = (fixed_data(u).d_u, fixed_data(v).d_u, fixed_data(&uv).d_u);
    let zero = OracleSigma { value: SectorClass { u: uv.clone(), poly: Poly::zero() }, conclusive: true };
    if du + dv < duv || (du + dv - duv) % 2 == 1 {
        return zero;
    }
    let xi = |w: &GroupElement| if cfg.two_form { xi_tilde(w) } else { lead_clifford(w) };
    let xu = xi(u);
    let mut xv = xi(v);
    if cfg.right_twist {
        xv = xv.map_polys(|p| group_twist(p, u));
    }
    let image = upsilon(&h_f_twisted(u).exp(), &xu, &xv).degree_part(duv);
    let (c, conclusive) = extract_coefficient(&image, &uv);
    OracleSigma { value: SectorClass::new(uv, c), conclusive }
}

/// Write a degree-d_w Clifford element as c·∂θ̃_w; the flag is false when
/// the remainder does not vanish on Fix(w).
pub fn extract_coefficient(image: &CliffordElem, w: &GroupElement) -> (Poly, bool) {
    let restricted = image.map_polys(|p| restrict(p, w).poly);
    let tc = TildeCoords::of(w);
    let image_t = to_tilde_basis(&restricted, &tc);
    let lead_t = to_tilde_basis(&lead_clifford(w), &tc);
    let moved: u32 = (0..w.nvars()).filter(|&s| tc.is_moved(s)).fold(0, |m, s| m | (1 << s));
    let e = lead_t.terms.get(&moved).and_then(|p| p.as_constant()).expect("leading element spans the moved slots");
    let c = image_t.terms.get(&moved).cloned().unwrap_or_else(Poly::zero).scale(&e.inv().unwrap());
    let residual = image_t.add(&lead_t.scale_poly(&c).scale(&CycNum::from_int(-1)));
    let residual = residual.map_polys(|p| restrict(p, w).poly);
    (c, residual.is_zero())
}

/// σ_{u,v} for d_u + d_v = d_{uv}: the coefficient of ∂θ̃_{uv} in ∂θ̃_u·∂θ̃_v.
pub fn leading_product(u: &GroupElement, v: &GroupElement) -> CycNum {
    let uv = u.compose(v);
    let prod = lead_clifford(u).mul(&lead_clifford(v));
    let (c, ok) = extract_coefficient(&prod, &uv);
    debug_assert!(ok);
    c.as_constant().expect("leading terms have constant coefficients")
}

/// Rewrite Σ p_S ∂θ_S in the basis ∂θ̃ dual to the tilde coordinates.
pub fn to_tilde_basis(e: &CliffordElem, tc: &TildeCoords) -> CliffordElem {
    let nv = tc.lambda.len();
    // ∂θ_i = Σ_s fwd[s][i] ∂θ̃_s
    let images: Vec<CliffordElem> = (0..nv)
        .map(|i| {
            let mut t = CliffordElem::zero();
            for s in 0..nv {
                if !tc.fwd[s][i].is_zero() {
                    add_into(&mut t.terms, 1 << s, Poly::constant(tc.fwd[s][i].clone()));
                }
            }
            t
        })
        .collect();
    let mut out = CliffordElem::zero();
    for (mask, p) in &e.terms {
        let mut w = CliffordElem::one();
        for i in (0..nv).filter(|i| mask & (1 << i) != 0) {
            w = w.mul(&images[i]);
        }
        out = out.add(&w.scale_poly(p));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixedlocus::jac_reduce;
    use crate::polyring::Monomial;

    fn el(nv: usize, n: u32, perm: &str, diag: &[i64]) -> GroupElement {
        GroupElement::parse(nv, n, perm, diag).unwrap()
    }

    #[test]
    fn theta_contractions() {
        assert_eq!(theta_action(0, &CliffordElem::dtheta(0)), CliffordElem::one());
        assert!(theta_action(0, &CliffordElem::one()).is_zero());
        // θ₂·∂θ₁∂θ₂ = −∂θ₁ by normal ordering θ₂∂₁∂₂ = −∂₁θ₂∂₂ = −∂₁
        let e = CliffordElem::dtheta(0).mul(&CliffordElem::dtheta(1));
        assert_eq!(theta_action(1, &e), CliffordElem::dtheta(0).scale(&CycNum::from_int(-1)));
    }

    #[test]
    fn twisted_hf_matches_closed_form() {
        for (perm, diag) in [("", vec![0, 0, 0]), ("(1,2)", vec![1, 3, 0]), ("(1,3,2)", vec![2, 1, 1])] {
            let u = el(3, 4, perm, &diag);
            assert_eq!(h_f_twisted(&u), h_f_twisted_closed_form(&u));
        }
    }

    #[test]
    fn upsilon_sign_rule() {
        let mut b = BiWedge::default();
        b.terms.insert((0, 1 << 1), Poly::one());
        let q1 = CliffordElem::dtheta(0);
        let q2 = CliffordElem::dtheta(1);
        // (1⊗θ₂)(∂₁⊗∂₂) = (−1)^{1·1} ∂₁·1
        assert_eq!(upsilon(&b, &q1, &q2), CliffordElem::dtheta(0).scale(&CycNum::from_int(-1)));
        let q1e = CliffordElem::one();
        assert_eq!(upsilon(&b, &q1e, &q2), CliffordElem::one());
    }

    #[test]
    fn transposition_type_has_trivial_two_form() {
        let u = el(3, 4, "(1,2)", &[1, 3, 0]);
        assert!(h_fu(&u).is_zero());
        assert!(h_fu(&GroupElement::t(3, 4, 1, 1)).is_zero());
        let d = 1;
        let lead = lead_clifford(&u);
        let expect = CliffordElem::dtheta(1).add(&CliffordElem::dtheta(0).scale(&-CycNum::root_of_unity(4, d)));
        assert_eq!(lead, expect);
        assert_eq!(xi_tilde(&u), expect);
    }

    #[test]
    fn leading_degrees() {
        for (perm, diag) in [("(1,2,3)", vec![0, 0, 0]), ("(1,2)", vec![1, 0, 0]), ("", vec![1, 0, 2]), ("(1,3)", vec![0, 2, 0])] {
            let u = el(3, 3, perm, &diag);
            let lead = lead_clifford(&u);
            assert!(!lead.is_zero());
            assert!(lead.terms.keys().all(|k| k.count_ones() as usize == fixed_data(&u).d_u), "{u}");
            assert_eq!(xi_tilde(&u).degree_part(fixed_data(&u).d_u), lead);
        }
    }

    #[test]
    fn identity_on_the_left_is_unit() {
        let id = GroupElement::identity(3, 3);
        let v = el(3, 3, "(1,2,3)", &[]);
        let s = sigma(&id, &v);
        assert!(s.conclusive);
        assert_eq!(s.value.poly, Poly::one());
    }

    #[test]
    fn square_of_transposition() {
        for n in [3u32, 4] {
            let t = el(2, n, "(1,2)", &[]);
            let s = sigma(&t, &t);
            assert!(s.conclusive);
            // −n Φ_12, Φ_12 = Σ_{a+b=n−2} x1^a x2^b
            let mut phi = Poly::zero();
            for a in 0..=n - 2 {
                phi.add_term(Monomial::from_pairs(vec![(VarId::X(0), a), (VarId::X(1), n - 2 - a)]), CycNum::one());
            }
            assert_eq!(s.value.poly, jac_reduce(&phi.scale(&CycNum::from_int(-(n as i64))), n));
        }
    }

    #[test]
    fn diagonal_inverse_pair() {
        let n = 4;
        for p in 1..n as i64 {
            let g = GroupElement::t(2, n, 0, p);
            let s = sigma(&g, &g.inverse());
            assert!(s.conclusive);
            let c = CycNum::from_int(n as i64) * (CycNum::root_of_unity(n, p) - CycNum::one()).inv().unwrap();
            let expect = Poly::monomial(Monomial::var(VarId::X(0), n - 2), c);
            assert_eq!(s.value.poly, expect, "p = {p}");
        }
    }
}
