//! Cup product on the phase space via generator words.
//!
//! Every sector unit ξ_u is, up to a nonzero constant, a cup product of odd
//! generators ξ_{t_i^d} and ξ_{(i,j)t_i^d t_j^{-d}}. σ_{u,v} is obtained by
//! multiplying ξ_u by the generators of v one at a time. A step either adds
//! one moved direction (a product of leading Clifford terms) or removes one,
//! in which case ξ_w is first rewritten as ξ_{wb}∪ξ_{b⁻¹} and the inverse
//! pair ξ_{b⁻¹}∪ξ_b is contracted.

use std::collections::BTreeMap;
use std::fmt;

use dashmap::DashMap;
use serde::Serialize;
use thiserror::Error;

use crate::clifford_oracle::leading_product;
use crate::cyclotomic::CycNum;
use crate::fixedlocus::{jac_reduce, lift, monomial_basis, restrict, AlgebraElement, SectorClass};
use crate::group::{cycle_decompose, fixed_data, CycleFactor, Group, GroupElement};
use crate::polyring::{group_twist, Monomial, Poly, VarId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CupError {
    #[error("shape not covered by a closed-form rule: {0}")]
    Uncovered(String),
}

/// t_i^d, or (i,j)·t_i^d·t_j^{-d} with i < j. Exponents live in 0..n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum Generator {
    Diag { i: usize, d: u32 },
    Trans { i: usize, j: usize, d: u32 },
}

impl Generator {
    pub fn diag(i: usize, d: i64, n: u32) -> Self {
        Generator::Diag { i, d: d.rem_euclid(n as i64) as u32 }
    }

    /// (a,b)·t_a^d t_b^{-d} for any order of a, b.
    pub fn trans(a: usize, b: usize, d: i64, n: u32) -> Self {
        let (i, j, d) = if a < b { (a, b, d) } else { (b, a, -d) };
        Generator::Trans { i, j, d: d.rem_euclid(n as i64) as u32 }
    }

    pub fn element(&self, nvars: usize, n: u32) -> GroupElement {
        match *self {
            Generator::Diag { i, d } => GroupElement::t(nvars, n, i, d as i64),
            Generator::Trans { i, j, d } => {
                let mut perm: Vec<usize> = (0..nvars).collect();
                perm.swap(i, j);
                let mut diag = vec![0i64; nvars];
                diag[i] = d as i64;
                diag[j] = -(d as i64);
                GroupElement::new(perm, diag, n)
            }
        }
    }

    pub fn inverse(&self, n: u32) -> Self {
        match *self {
            Generator::Diag { i, d } => Generator::diag(i, -(d as i64), n),
            t @ Generator::Trans { .. } => t,
        }
    }

    /// The generator whose element is u, if any.
    pub fn from_element(u: &GroupElement) -> Option<Self> {
        let nv = u.nvars();
        let moved: Vec<usize> = (0..nv).filter(|&k| u.perm[k] != k || u.diag[k] != 0).collect();
        let g = match moved.as_slice() {
            [i] if u.perm[*i] == *i => Generator::Diag { i: *i, d: u.diag[*i] },
            [i, j] if u.perm[*i] == *j => Generator::trans(*i, *j, u.diag[*i] as i64, u.n),
            _ => return None,
        };
        (g.element(nv, u.n) == *u).then_some(g)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Diag { i, d } => write!(f, "t{}^{}", i + 1, d),
            Generator::Trans { i, j, d } => write!(f, "({},{})t{}^{}t{}^-{}", i + 1, j + 1, i + 1, d, j + 1, d),
        }
    }
}

/// Cup-multiplying `factors` left to right gives scalar⁻¹·ξ_target.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorWord {
    pub scalar: CycNum,
    pub factors: Vec<Generator>,
    pub target: GroupElement,
}

/// Word of a special cycle: trans generators on consecutive cycle pairs.
fn special_cycle_word(c: &CycleFactor, nvars: usize) -> Vec<Generator> {
    let n = c.n;
    let k = c.len();
    let target = c.element(nvars);
    let mut exps = vec![0u32; k - 1];
    loop {
        let gens: Vec<Generator> =
            (0..k - 1).map(|a| Generator::trans(c.indices[a], c.indices[a + 1], exps[a] as i64, n)).collect();
        let prod = gens.iter().fold(GroupElement::identity(nvars, n), |acc, g| acc.compose(&g.element(nvars, n)));
        if prod == target {
            return gens;
        }
        // odometer over the exponents
        let mut a = 0;
        loop {
            assert!(a < k - 1, "special cycle {target} has no transposition word");
            exps[a] += 1;
            if exps[a] < n {
                break;
            }
            exps[a] = 0;
            a += 1;
        }
    }
}

/// Unnormalized generator factors of u (parts ordered by minimal index).
pub fn generator_factors(u: &GroupElement) -> Vec<Generator> {
    let nv = u.nvars();
    let n = u.n;
    let dec = cycle_decompose(u);
    let mut parts: Vec<(usize, Vec<Generator>)> = Vec::new();
    for c in &dec.cycles {
        let i1 = c.indices[0];
        if c.is_special() {
            parts.push((i1, special_cycle_word(c, nv)));
        } else {
            // detach t_{i1}^{det} on the left
            let e = c.exp_sum() as i64;
            let t = GroupElement::t(nv, n, i1, e);
            let rest = t.inverse().compose(&c.element(nv));
            let rc = cycle_decompose(&rest).cycles.remove(0);
            let mut w = vec![Generator::diag(i1, e, n)];
            w.extend(special_cycle_word(&rc, nv));
            parts.push((i1, w));
        }
    }
    for (i, &d) in dec.diagonal_rest.diag.iter().enumerate() {
        if d != 0 {
            parts.push((i, vec![Generator::Diag { i, d }]));
        }
    }
    parts.sort_by_key(|p| p.0);
    parts.into_iter().flat_map(|p| p.1).collect()
}

/// Φ^{(D)}: Σ over a_1+…+a_k = (k−1)(n−2), 0 ≤ a ≤ n−2, of
/// (ζ^{-D}x_{i_1})^{a_1}·x_{i_2}^{a_2}···x_{i_k}^{a_k}.
pub fn phi(indices: &[usize], d: i64, n: u32) -> Poly {
    let k = indices.len();
    let bound = n.saturating_sub(2);
    let total = (k as u32 - 1) * bound;
    let mut out = Poly::zero();
    let mut exps = vec![0u32; k];
    loop {
        if exps.iter().sum::<u32>() == total {
            let m = Monomial::from_pairs(indices.iter().zip(&exps).map(|(&i, &e)| (VarId::X(i as u8), e)).collect());
            out.add_term(m, CycNum::root_of_unity(n, -d * exps[0] as i64));
        }
        let mut a = 0;
        loop {
            if a == k {
                return out;
            }
            exps[a] += 1;
            if exps[a] <= bound {
                break;
            }
            exps[a] = 0;
            a += 1;
        }
    }
}

/// ξ_a ∪ ξ_{a⁻¹} for a generator a, as an identity-sector polynomial.
pub fn inverse_pair(a: &Generator, n: u32) -> Poly {
    let nn = CycNum::from_int(n as i64);
    match *a {
        Generator::Diag { i, d } => {
            let c = &nn * &(CycNum::root_of_unity(n, d as i64) - CycNum::one()).inv().expect("d ≢ 0");
            Poly::monomial(Monomial::var(VarId::X(i as u8), n - 2), c)
        }
        // −n·Σ_{a+b=n−2} ζ^{-db} x_j^a x_i^b
        Generator::Trans { i, j, d } => phi(&[i, j], d as i64, n).scale(&-nn),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct CupConfig {
    /// Force ξ_{(i,j)t_i^a t_j^{-a}} ∪ ξ_{(i,j)t_i^b t_j^{-b}} = 0 for a ≢ b.
    pub mixed_transposition_vanishing: bool,
}

/// Memoizing engine for σ_{u,v}; one instance per configuration.
#[derive(Default)]
pub struct CupEngine {
    pub config: CupConfig,
    words: DashMap<GroupElement, GeneratorWord>,
    leads: DashMap<(GroupElement, GroupElement), CycNum>,
    sigmas: DashMap<(GroupElement, GroupElement), Poly>,
}

impl CupEngine {
    pub fn new(config: CupConfig) -> Self {
        CupEngine { config, ..Default::default() }
    }

    /// σ for an additive pair, d_u + d_v = d_{uv}.
    pub fn lead(&self, u: &GroupElement, v: &GroupElement) -> CycNum {
        let key = (u.clone(), v.clone());
        if let Some(c) = self.leads.get(&key) {
            return c.clone();
        }
        let c = if self.config.mixed_transposition_vanishing && mixed_pair(u, v) {
            CycNum::zero()
        } else {
            leading_product(u, v)
        };
        self.leads.insert(key, c.clone());
        c
    }

    pub fn generator_word(&self, u: &GroupElement) -> GeneratorWord {
        if let Some(w) = self.words.get(u) {
            return w.clone();
        }
        let nv = u.nvars();
        let n = u.n;
        let factors = generator_factors(u);
        let mut acc = GroupElement::identity(nv, n);
        let mut lc = CycNum::one();
        for g in &factors {
            let ge = g.element(nv, n);
            let next = acc.compose(&ge);
            debug_assert_eq!(fixed_data(&next).d_u, fixed_data(&acc).d_u + 1);
            lc = &lc * &self.lead(&acc, &ge);
            acc = next;
        }
        assert_eq!(&acc, u, "generator word multiplies back to its target");
        let w = GeneratorWord { scalar: lc.inv().expect("generator words are nondegenerate"), factors, target: u.clone() };
        self.words.insert(u.clone(), w.clone());
        w
    }

    /// ⌊φ⌋ξ_w ∪ ξ_b as an ambient lift on sector wb.
    pub fn step(&self, phi: &Poly, w: &GroupElement, b: &Generator) -> (Poly, GroupElement) {
        let (nv, n) = (w.nvars(), w.n);
        let be = b.element(nv, n);
        let wb = w.compose(&be);
        let (dw, dwb) = (fixed_data(w).d_u, fixed_data(&wb).d_u);
        let out = if dwb == dw + 1 {
            phi.scale(&self.lead(w, &be))
        } else if dwb + 1 == dw {
            // ξ_w = c⁻¹·ξ_{wb} ∪ ξ_{b⁻¹}
            let binv = b.inverse(n);
            let c = self.lead(&wb, &binv.element(nv, n));
            if c.is_zero() {
                Poly::zero()
            } else {
                let rho = group_twist(&inverse_pair(&binv, n), &wb);
                (phi * &rho).scale(&c.inv().unwrap())
            }
        } else {
            Poly::zero()
        };
        (jac_reduce(&out, n), wb)
    }

    /// Ambient lift of σ_{u,v}.
    pub fn sigma_lift(&self, u: &GroupElement, v: &GroupElement) -> Poly {
        let key = (u.clone(), v.clone());
        if let Some(p) = self.sigmas.get(&key) {
            return p.clone();
        }
        let uv = u.compose(v);
        let (du, dv, duv) = (fixed_data(u).d_u, fixed_data(v).d_u, fixed_data(&uv).d_u);
        let p = if du + dv < duv || (du + dv - duv) % 2 == 1 {
            Poly::zero()
        } else {
            let word = self.generator_word(v);
            let mut phi = Poly::constant(word.scalar.clone());
            let mut w = u.clone();
            for b in &word.factors {
                if phi.is_zero() {
                    break;
                }
                let (p, next) = self.step(&phi, &w, b);
                phi = p;
                w = next;
            }
            restrict_lift(&phi, &uv)
        };
        self.sigmas.insert(key, p.clone());
        p
    }

    pub fn sigma(&self, u: &GroupElement, v: &GroupElement) -> SectorClass {
        restrict(&self.sigma_lift(u, v), &u.compose(v))
    }

    /// ⌊φ⌋ξ_u ∪ ⌊ψ⌋ξ_v = ⌊φ·ψ(u(x))·σ_{u,v}⌋ξ_{uv}.
    pub fn cup_classes(&self, a: &SectorClass, b: &SectorClass) -> SectorClass {
        let uv = a.u.compose(&b.u);
        let s = self.sigma_lift(&a.u, &b.u);
        if s.is_zero() || a.is_zero() || b.is_zero() {
            return SectorClass::new(uv, Poly::zero());
        }
        let n = uv.n;
        let p = jac_reduce(&(&lift(a) * &group_twist(&lift(b), &a.u)), n);
        restrict(&jac_reduce(&(&p * &s), n), &uv)
    }

    pub fn cup(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for x in a.classes() {
            for y in b.classes() {
                out.add_class(self.cup_classes(&x, &y));
            }
        }
        out
    }

    /// Value of an arbitrary generator word applied to ⌊φ⌋ξ_start.
    pub fn word_value(&self, start: &SectorClass, word: &[Generator]) -> SectorClass {
        let mut phi = lift(start);
        let mut w = start.u.clone();
        for b in word {
            let (p, next) = self.step(&phi, &w, b);
            phi = p;
            w = next;
        }
        restrict(&phi, &w)
    }
}

fn mixed_pair(u: &GroupElement, v: &GroupElement) -> bool {
    matches!(
        (Generator::from_element(u), Generator::from_element(v)),
        (Some(Generator::Trans { i, j, d }), Some(Generator::Trans { i: i2, j: j2, d: d2 }))
            if i == i2 && j == j2 && d != d2
    )
}

/// Canonical ambient representative of the class of p on Fix(w).
fn restrict_lift(p: &Poly, w: &GroupElement) -> Poly {
    jac_reduce(&lift(&restrict(p, w)), w.n)
}

// ---------------------------------------------------------------------------
// Closed-form rules

fn zeta(n: u32, e: i64) -> CycNum {
    CycNum::root_of_unity(n, e)
}

fn moved_indices(u: &GroupElement) -> Vec<usize> {
    (0..u.nvars()).filter(|&k| u.perm[k] != k || u.diag[k] != 0).collect()
}

fn top_of(indices: &[usize], n: u32) -> Monomial {
    Monomial::from_pairs(indices.iter().map(|&i| (VarId::X(i as u8), n - 2)).collect())
}

/// Shape of a group element as a single cycle: Some(cycle) when u moves
/// exactly the indices of one permutation cycle.
fn single_cycle(u: &GroupElement) -> Option<CycleFactor> {
    let dec = cycle_decompose(u);
    (dec.cycles.len() == 1 && dec.diagonal_rest.is_identity()).then(|| dec.cycles[0].clone())
}

/// Sign (or g̃-unit) relating ∂θ̃_u·∂θ̃_v to ∂θ̃_{uv} for pairs whose
/// product is additive in the moved directions.
pub fn epsilon(u: &GroupElement, v: &GroupElement) -> Result<CycNum, CupError> {
    let uv = u.compose(v);
    let additive = fixed_data(u).d_u + fixed_data(v).d_u == fixed_data(&uv).d_u;
    let (mu, mv) = (moved_indices(u), moved_indices(v));
    let shared = mu.iter().filter(|i| mv.contains(i)).count();
    if !additive || shared > 1 || (shared == 1 && (single_cycle(u).is_none() || single_cycle(v).is_none())) {
        return Err(CupError::Uncovered(format!("{u} · {v}")));
    }
    Ok(leading_product(u, v))
}

/// ξ_g ∪ ξ_{g⁻¹} for diagonal g: (−1)^{d(d−1)/2}·∏ n/(g_i − 1)·∏ x_i^{n−2}.
pub fn rule_diag_inverse(g: &GroupElement) -> SectorClass {
    assert!(g.is_diagonal() && !g.is_identity());
    let n = g.n;
    let moved = moved_indices(g);
    let d = moved.len();
    let mut c = CycNum::from_int(if (d * (d.saturating_sub(1)) / 2) % 2 == 0 { 1 } else { -1 });
    for &i in &moved {
        c = &c * &(CycNum::from_int(n as i64) * (zeta(n, g.diag[i] as i64) - CycNum::one()).inv().unwrap());
    }
    SectorClass::new(GroupElement::identity(g.nvars(), g.n), Poly::monomial(top_of(&moved, n), c))
}

/// The diagonal product ξ_g ∪ ξ_h vanishes when some index is moved by g, h
/// and gh at once.
pub fn rule_diag_vanishing(g: &GroupElement, h: &GroupElement) -> bool {
    let gh = g.compose(h);
    (0..g.nvars()).any(|i| g.diag[i] != 0 && h.diag[i] != 0 && gh.diag[i] != 0)
}

/// ε_{u,v}·ξ_{uv} for disjoint supports.
pub fn rule_nonintersecting(u: &GroupElement, v: &GroupElement) -> Result<SectorClass, CupError> {
    let (mu, mv) = (moved_indices(u), moved_indices(v));
    if mu.iter().any(|i| mv.contains(i)) {
        return Err(CupError::Uncovered(format!("{u} and {v} intersect")));
    }
    let e = epsilon(u, v)?;
    Ok(SectorClass::new(u.compose(v), Poly::constant(e)))
}

/// ξ_u ∪ ξ_{u⁻¹} for a special cycle: (−n)^{k−1}·Φ^{(D)}, D = d_1+…+d_{k−1}.
/// For k = 2 this is the transposition square; pairs of transpositions with
/// different exponents are covered by [`rule_mixed_transposition`].
pub fn rule_cycle_inverse(u: &GroupElement) -> Result<SectorClass, CupError> {
    let c = single_cycle(u).filter(|c| c.is_special()).ok_or_else(|| CupError::Uncovered(format!("{u}")))?;
    let n = u.n;
    let k = c.len();
    let dsum: i64 = c.exps[..k - 1].iter().map(|&e| e as i64).sum();
    let scale = CycNum::from_int(-(n as i64)).pow(k as i64 - 1);
    Ok(SectorClass::new(GroupElement::identity(u.nvars(), u.n), phi(&c.indices, dsum, n).scale(&scale)))
}

/// ξ_{(i,j)t_i^a t_j^{-a}} ∪ ξ_{(i,j)t_i^b t_j^{-b}}: the transposition
/// square for a ≡ b, and 0 otherwise.
pub fn rule_mixed_transposition(u1: &GroupElement, u2: &GroupElement) -> Result<SectorClass, CupError> {
    match (Generator::from_element(u1), Generator::from_element(u2)) {
        (Some(Generator::Trans { i, j, d }), Some(Generator::Trans { i: i2, j: j2, d: d2 })) if i == i2 && j == j2 => {
            let target = u1.compose(u2);
            if d != d2 {
                return Ok(SectorClass::new(target, Poly::zero()));
            }
            let n = u1.n;
            Ok(SectorClass::new(target, phi(&[i, j], d as i64, n).scale(&CycNum::from_int(-(n as i64)))))
        }
        _ => Err(CupError::Uncovered(format!("{u1} · {u2}"))),
    }
}

/// ξ_u ∪ ξ_{u⁻¹} for a non-special cycle: n^k/(det−1)·∏ x^{n−2}, which for
/// k = 1 is the diagonal inverse rule.
pub fn rule_nonspecial_inverse(u: &GroupElement) -> Result<SectorClass, CupError> {
    let n = u.n;
    let (indices, det) = match single_cycle(u) {
        Some(c) if !c.is_special() => (c.indices.clone(), c.exp_sum()),
        None if u.is_diagonal() && moved_indices(u).len() == 1 => {
            let i = moved_indices(u)[0];
            (vec![i], u.diag[i])
        }
        _ => return Err(CupError::Uncovered(format!("{u}"))),
    };
    let k = indices.len() as i64;
    let dz = zeta(n, det as i64);
    let c = CycNum::from_int(n as i64).pow(k) * (dz - CycNum::one()).inv().unwrap();
    Ok(SectorClass::new(GroupElement::identity(u.nvars(), u.n), Poly::monomial(top_of(&indices, n), c)))
}

/// Special cycles sharing one index: ε·h̃_{j_b}·ξ_{uv} when i₁ < j₁, else
/// ε·g̃_{i_a}·ξ_{uv}; i_a = j_b is the shared index.
pub fn rule_special_overlap(u: &GroupElement, v: &GroupElement) -> Result<SectorClass, CupError> {
    let cu = single_cycle(u).filter(|c| c.is_special());
    let cv = single_cycle(v).filter(|c| c.is_special());
    let (Some(cu), Some(cv)) = (cu, cv) else {
        return Err(CupError::Uncovered(format!("{u} · {v}")));
    };
    let shared: Vec<usize> = cu.indices.iter().copied().filter(|i| cv.indices.contains(i)).collect();
    let uv = u.compose(v);
    if shared.len() != 1 || single_cycle(&uv).is_none() {
        return Err(CupError::Uncovered(format!("{u} · {v}")));
    }
    let s = shared[0];
    let a = cu.indices.iter().position(|&i| i == s).unwrap();
    let b = cv.indices.iter().position(|&i| i == s).unwrap();
    let eps = epsilon_pure(&cu, &cv, u.nvars(), u.n);
    let unit = if cu.indices[0] < cv.indices[0] { zeta(u.n, cv.gtilde[b] as i64) } else { zeta(u.n, cu.gtilde[a] as i64) };
    Ok(SectorClass::new(uv, Poly::constant(eps * unit)))
}

/// ε of the underlying pure permutations.
fn epsilon_pure(cu: &CycleFactor, cv: &CycleFactor, nvars: usize, n: u32) -> CycNum {
    let pu = GroupElement::from_cycles(nvars, n, &[cu.indices.clone()]);
    let pv = GroupElement::from_cycles(nvars, n, &[cv.indices.clone()]);
    leading_product(&pu, &pv)
}

/// Special cycle c times a diagonal h supported on the cycle, in both orders.
/// Returns (ξ_c ∪ ξ_h, ξ_h ∪ ξ_c).
pub fn rule_special_times_diag(c: &GroupElement, h: &GroupElement) -> Result<(SectorClass, SectorClass), CupError> {
    let cyc = single_cycle(c).filter(|x| x.is_special()).ok_or_else(|| CupError::Uncovered(format!("{c}")))?;
    let n = c.n;
    let hm = moved_indices(h);
    if !h.is_diagonal() || hm.is_empty() || hm.iter().any(|i| !cyc.indices.contains(i)) {
        return Err(CupError::Uncovered(format!("{c} · {h}")));
    }
    let (ch, hc) = (c.compose(h), h.compose(c));
    let zero = || (SectorClass::new(ch.clone(), Poly::zero()), SectorClass::new(hc.clone(), Poly::zero()));
    let gt = |a: usize| zeta(n, cyc.gtilde[a] as i64);
    let pos = |i: usize| cyc.indices.iter().position(|&x| x == i).unwrap();
    let k = cyc.len();
    if hm.len() == 1 {
        let a = pos(hm[0]);
        let sign = CycNum::from_int(if (k - 1) % 2 == 0 { 1 } else { -1 });
        return Ok((
            SectorClass::new(ch, Poly::constant(&sign * &gt(a))),
            SectorClass::new(hc, Poly::constant(gt(a))),
        ));
    }
    let special = (hm.iter().map(|&i| h.diag[i]).sum::<u32>() % n) == 0;
    if !special {
        return Ok(zero());
    }
    if hm.len() != 2 {
        return Err(CupError::Uncovered(format!("{c} · {h}")));
    }
    // h = t_{i_a}^d t_{i_b}^{-d}
    let (a, b) = (pos(hm[0]), pos(hm[1]));
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    let hp = zeta(n, h.diag[hm[0].min(hm[1])] as i64);
    let base = CycNum::from_int(n as i64) * gt(a) * gt(b);
    let inv = (&hp - &CycNum::one()).inv().unwrap();
    let xt = Poly::monomial(Monomial::var(VarId::Eigen(cyc.indices[0] as u8), n - 2), CycNum::one());
    let left = xt.scale(&(&(&base * &hp) * &inv));
    let right = xt.scale(&(&base * &inv));
    Ok((SectorClass::new(ch, left), SectorClass::new(hc, right)))
}

/// Overlapping non-special pieces with det(u)·det(v) ≠ 1 multiply to zero.
pub fn rule_nonspecial_vanishing(u: &GroupElement, v: &GroupElement) -> Result<bool, CupError> {
    let det = |w: &GroupElement| -> Option<u32> {
        match single_cycle(w) {
            Some(c) if !c.is_special() => Some(c.exp_sum()),
            None if w.is_diagonal() && moved_indices(w).len() == 1 => Some(w.diag[moved_indices(w)[0]]),
            _ => None,
        }
    };
    let (Some(a), Some(b)) = (det(u), det(v)) else {
        return Err(CupError::Uncovered(format!("{u} · {v}")));
    };
    let (mu, mv) = (moved_indices(u), moved_indices(v));
    if !mu.iter().any(|i| mv.contains(i)) {
        return Err(CupError::Uncovered(format!("{u} · {v} do not overlap")));
    }
    Ok((a + b) % u.n != 0)
}

// ---------------------------------------------------------------------------
// Export

#[derive(Clone, Debug, Serialize)]
pub struct StructureEntry {
    pub u: String,
    pub v: String,
    pub uv: String,
    /// coefficient lists of ⌊m⌋ξ_u ∪ ⌊m'⌋ξ_v over monomial_basis(uv), keyed by "m|m'"
    pub products: BTreeMap<String, Vec<String>>,
}

/// Structure constants of all nonzero sector pairs of G on monomial bases.
pub fn structure_constants(engine: &CupEngine, g: &Group) -> Vec<StructureEntry> {
    use rayon::prelude::*;
    let pairs: Vec<(&GroupElement, &GroupElement)> =
        g.elements.iter().flat_map(|u| g.elements.iter().map(move |v| (u, v))).collect();
    pairs
        .par_iter()
        .filter_map(|(u, v)| {
            if engine.sigma_lift(u, v).is_zero() {
                return None;
            }
            let uv = u.compose(v);
            let target = monomial_basis(&uv);
            let mut products = BTreeMap::new();
            for a in monomial_basis(u) {
                for b in monomial_basis(v) {
                    let p = engine.cup_classes(&a, &b);
                    if p.is_zero() {
                        continue;
                    }
                    let coeffs = target
                        .iter()
                        .map(|t| {
                            let m = t.poly.terms.keys().next().unwrap();
                            p.poly.coeff(m).render()
                        })
                        .collect();
                    products.insert(format!("{}|{}", a.poly, b.poly), coeffs);
                }
            }
            Some(StructureEntry { u: u.label(), v: v.label(), uv: uv.label(), products })
        })
        .collect()
}

/// Unit ξ_u as an algebra element.
pub fn xi(u: &GroupElement) -> AlgebraElement {
    AlgebraElement::from_class(SectorClass::unit(u))
}
