//! Elements and subgroups of S_N ⋉ (ℤ/n)^N.
//!
//! An element `u = (σ, d)` acts on coordinate functions by
//! `x_k ↦ ζ_n^{d_k} x_{σ(k)}`. Indices are 0-based internally and 1-based in
//! every rendered or parsed form.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{CycNum, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("mismatched group parameters: (N={0}, n={1}) vs (N={2}, n={3})")]
    Mismatch(usize, u32, usize, u32),
    #[error("group order exceeds cap {0}")]
    TooLarge(usize),
    #[error("cannot parse {0:?}: {1}")]
    Parse(String, String),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    /// `perm[k] = σ(k)`
    pub perm: Vec<usize>,
    /// exponents of ζ_n, reduced to 0..n
    pub diag: Vec<u32>,
    pub n: u32,
}

impl GroupElement {
    pub fn identity(nvars: usize, n: u32) -> Self {
        GroupElement { perm: (0..nvars).collect(), diag: vec![0; nvars], n }
    }

    pub fn new(perm: Vec<usize>, diag: Vec<i64>, n: u32) -> Self {
        assert_eq!(perm.len(), diag.len());
        let diag = diag.into_iter().map(|d| d.rem_euclid(n as i64) as u32).collect();
        GroupElement { perm, diag, n }
    }

    /// t_i^d
    pub fn t(nvars: usize, n: u32, i: usize, d: i64) -> Self {
        let mut u = Self::identity(nvars, n);
        u.diag[i] = d.rem_euclid(n as i64) as u32;
        u
    }

    pub fn diagonal(diag: Vec<i64>, n: u32) -> Self {
        let nvars = diag.len();
        Self::new((0..nvars).collect(), diag, n)
    }

    /// Pure permutation from disjoint cycles (0-based).
    pub fn from_cycles(nvars: usize, n: u32, cycles: &[Vec<usize>]) -> Self {
        let mut perm: Vec<usize> = (0..nvars).collect();
        for c in cycles {
            for a in 0..c.len() {
                perm[c[a]] = c[(a + 1) % c.len()];
            }
        }
        GroupElement { perm, diag: vec![0; nvars], n }
    }

    /// Transposition (i, j) with trivial diagonal.
    pub fn transposition(nvars: usize, n: u32, i: usize, j: usize) -> Self {
        Self::from_cycles(nvars, n, &[vec![i, j]])
    }

    pub fn nvars(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(k, &p)| k == p) && self.diag.iter().all(|&d| d == 0)
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(k, &p)| k == p)
    }

    /// `self · other`: the composite acting as `T_self ∘ T_other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        self.try_compose(other).expect("group parameter mismatch")
    }

    pub fn try_compose(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        if self.nvars() != other.nvars() || self.n != other.n {
            return Err(GroupError::Mismatch(self.nvars(), self.n, other.nvars(), other.n));
        }
        let perm = other.perm.iter().map(|&t| self.perm[t]).collect();
        let diag = (0..self.nvars())
            .map(|k| (self.diag[other.perm[k]] + other.diag[k]) % self.n)
            .collect();
        Ok(GroupElement { perm, diag, n: self.n })
    }

    pub fn inverse(&self) -> GroupElement {
        let nv = self.nvars();
        let mut inv = vec![0; nv];
        for k in 0..nv {
            inv[self.perm[k]] = k;
        }
        let diag = (0..nv).map(|k| (self.n - self.diag[inv[k]]) % self.n).collect();
        GroupElement { perm: inv, diag, n: self.n }
    }

    /// v·u·v⁻¹
    pub fn conjugate_by(&self, v: &GroupElement) -> GroupElement {
        v.compose(self).compose(&v.inverse())
    }

    pub fn pow(&self, e: i64) -> GroupElement {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = GroupElement::identity(self.nvars(), self.n);
        for _ in 0..e.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }

    pub fn order(&self) -> usize {
        let mut x = self.clone();
        let mut k = 1;
        while !x.is_identity() {
            x = x.compose(self);
            k += 1;
        }
        k
    }

    /// Exponent sum of the diagonal part, mod n.
    pub fn det_exponent(&self) -> u32 {
        self.diag.iter().sum::<u32>() % self.n
    }

    pub fn is_special(&self) -> bool {
        self.det_exponent() == 0
    }

    /// Sign of the permutation part.
    pub fn perm_sign(&self) -> i64 {
        let cycles = perm_cycles(&self.perm);
        let transpositions: usize = cycles.iter().map(|c| c.len() - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The monomial matrix M with M·e_k = g_k e_{σ(k)}, entries as (row, col, exponent).
    pub fn matrix(&self) -> Vec<Vec<Option<u32>>> {
        let nv = self.nvars();
        let mut m = vec![vec![None; nv]; nv];
        for k in 0..nv {
            m[self.perm[k]][k] = Some(self.diag[k]);
        }
        m
    }

    /// Parse "(1,2,3)(4,5)" and a diagonal exponent list.
    pub fn parse(nvars: usize, n: u32, perm: &str, diag: &[i64]) -> Result<Self, GroupError> {
        let perm_u = parse_cycles(nvars, n, perm)?;
        if diag.is_empty() {
            return Ok(perm_u);
        }
        if diag.len() != nvars {
            return Err(GroupError::Parse(format!("{diag:?}"), format!("expected {nvars} exponents")));
        }
        Ok(perm_u.compose(&GroupElement::diagonal(diag.to_vec(), n)))
    }

    /// Compact 1-based rendering such as `(1,2)·t1^2·t3`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        for c in perm_cycles(&self.perm) {
            if c.len() > 1 {
                let s: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
                parts.push(format!("({})", s.join(",")));
            }
        }
        for (k, &d) in self.diag.iter().enumerate() {
            match d {
                0 => {}
                1 => parts.push(format!("t{}", k + 1)),
                d => parts.push(format!("t{}^{}", k + 1, d)),
            }
        }
        if parts.is_empty() {
            "id".to_string()
        } else {
            parts.join("·")
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Disjoint cycles of a permutation, each starting at its minimal index,
/// ordered by that index; fixed points included as 1-cycles.
pub fn perm_cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut c = vec![s];
        seen[s] = true;
        let mut k = perm[s];
        while k != s {
            seen[k] = true;
            c.push(k);
            k = perm[k];
        }
        out.push(c);
    }
    out
}

fn parse_cycles(nvars: usize, n: u32, s: &str) -> Result<GroupElement, GroupError> {
    let err = |m: &str| GroupError::Parse(s.to_string(), m.to_string());
    let t = s.trim();
    if t.is_empty() || t == "id" || t == "()" {
        return Ok(GroupElement::identity(nvars, n));
    }
    let mut u = GroupElement::identity(nvars, n);
    let mut rest = t;
    while !rest.is_empty() {
        rest = rest.trim_start();
        if !rest.starts_with('(') {
            return Err(err("expected '('"));
        }
        let close = rest.find(')').ok_or_else(|| err("missing ')'"))?;
        let body = &rest[1..close];
        let idx: Result<Vec<usize>, _> = body.split(',').map(|x| x.trim().parse::<usize>()).collect();
        let idx = idx.map_err(|_| err("bad index"))?;
        let mut uniq = BTreeSet::new();
        for &i in &idx {
            if i == 0 || i > nvars || !uniq.insert(i) {
                return Err(err("index out of range or repeated"));
            }
        }
        let cyc: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        // cycles written left to right compose right to left
        u = u.compose(&GroupElement::from_cycles(nvars, n, &[cyc]));
        rest = &rest[close + 1..];
    }
    Ok(u)
}

/// Parse "t1^2*t3" style diagonal into an exponent vector.
pub fn parse_diag_word(nvars: usize, s: &str) -> Result<Vec<i64>, GroupError> {
    let err = |m: &str| GroupError::Parse(s.to_string(), m.to_string());
    let mut d = vec![0i64; nvars];
    let t = s.trim();
    if t.starts_with('[') {
        let body = t.trim_start_matches('[').trim_end_matches(']');
        let v: Result<Vec<i64>, _> = body.split(',').filter(|x| !x.trim().is_empty()).map(|x| x.trim().parse()).collect();
        let v = v.map_err(|_| err("bad exponent"))?;
        if v.len() != nvars {
            return Err(err("wrong length"));
        }
        return Ok(v);
    }
    for factor in t.split('*').map(str::trim).filter(|f| !f.is_empty()) {
        let f = factor.strip_prefix('t').ok_or_else(|| err("expected t<i>"))?;
        let (i, e) = match f.split_once('^') {
            Some((i, e)) => (i, e.trim().parse::<i64>().map_err(|_| err("bad exponent"))?),
            None => (f, 1),
        };
        let i: usize = i.trim().parse().map_err(|_| err("bad index"))?;
        if i == 0 || i > nvars {
            return Err(err("index out of range"));
        }
        d[i - 1] += e;
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleFactor {
    /// (i_1, …, i_k) with i_1 minimal and i_{a+1} = σ(i_a)
    pub indices: Vec<usize>,
    /// d_{i_a} in cycle order
    pub exps: Vec<u32>,
    /// exponents of g̃_{i_a}: 0, d_{i_1}, d_{i_1}+d_{i_2}, …
    pub gtilde: Vec<u32>,
    pub n: u32,
}

impl CycleFactor {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn exp_sum(&self) -> u32 {
        self.exps.iter().sum::<u32>() % self.n
    }

    pub fn is_special(&self) -> bool {
        self.exp_sum() == 0
    }

    pub fn element(&self, nvars: usize) -> GroupElement {
        let mut u = GroupElement::identity(nvars, self.n);
        let k = self.len();
        for a in 0..k {
            u.perm[self.indices[a]] = self.indices[(a + 1) % k];
            u.diag[self.indices[a]] = self.exps[a];
        }
        u
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleDecomp {
    pub diagonal_rest: GroupElement,
    pub cycles: Vec<CycleFactor>,
}

pub fn cycle_decompose(u: &GroupElement) -> CycleDecomp {
    let nv = u.nvars();
    let mut rest = GroupElement::identity(nv, u.n);
    let mut cycles = Vec::new();
    for c in perm_cycles(&u.perm) {
        if c.len() == 1 {
            rest.diag[c[0]] = u.diag[c[0]];
            continue;
        }
        let exps: Vec<u32> = c.iter().map(|&i| u.diag[i]).collect();
        let mut gtilde = Vec::with_capacity(c.len());
        let mut acc = 0;
        for e in &exps {
            gtilde.push(acc);
            acc = (acc + e) % u.n;
        }
        cycles.push(CycleFactor { indices: c, exps, gtilde, n: u.n });
    }
    CycleDecomp { diagonal_rest: rest, cycles }
}

/// Pairs (u¹, u²) with u¹ special and u² diagonal on the first index of the
/// cycle, u = ∏ u¹·u². Diagonal moved indices come as (id, t_i^{d_i}).
pub fn special_decompose(u: &GroupElement) -> Vec<(GroupElement, GroupElement)> {
    let nv = u.nvars();
    let id = GroupElement::identity(nv, u.n);
    let dec = cycle_decompose(u);
    let mut parts: Vec<(usize, GroupElement, GroupElement)> = Vec::new();
    for c in &dec.cycles {
        let el = c.element(nv);
        let a = c.exp_sum();
        let u2 = GroupElement::t(nv, u.n, c.indices[0], a as i64);
        let u1 = el.compose(&u2.inverse());
        parts.push((c.indices[0], u1, u2));
    }
    for (i, &d) in dec.diagonal_rest.diag.iter().enumerate() {
        if d != 0 {
            parts.push((i, id.clone(), GroupElement::t(nv, u.n, i, d as i64)));
        }
    }
    parts.sort_by_key(|p| p.0);
    parts.into_iter().map(|(_, a, b)| (a, b)).collect()
}

/// Refine both elements into cycle pieces whose pairwise supports meet in at
/// most one index or coincide. Each side multiplies back (left to right) to
/// its input.
pub fn pair_decompose(a: &GroupElement, b: &GroupElement) -> (Vec<GroupElement>, Vec<GroupElement>) {
    fn pieces(u: &GroupElement) -> Vec<Vec<usize>> {
        perm_cycles(&u.perm).into_iter().filter(|c| c.len() > 1).collect()
    }
    fn split(c: &[usize], other: &[usize]) -> (Vec<usize>, Vec<usize>) {
        // (r_0 … r_k) = (r_0 … r_m)(r_m … r_k) for a rotation starting at a
        // shared index, r_m the next shared one
        let k = c.len();
        for s in (0..k).filter(|&p| other.contains(&c[p])) {
            let r: Vec<usize> = (0..k).map(|p| c[(s + p) % k]).collect();
            if let Some(m) = (1..k).find(|&p| other.contains(&r[p])) {
                if m < k - 1 {
                    return (r[..=m].to_vec(), r[m..].to_vec());
                }
            }
        }
        unreachable!("cycle of length ≥ 3 sharing two indices always splits")
    }
    fn same_cycle(p: &[usize], q: &[usize]) -> bool {
        p.len() == q.len() && {
            let mut a = p.to_vec();
            let mut b = q.to_vec();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        }
    }
    let mut pa = pieces(a);
    let mut pb = pieces(b);
    loop {
        let mut changed = false;
        'outer: for x in 0..pa.len() {
            for y in 0..pb.len() {
                let shared = pa[x].iter().filter(|i| pb[y].contains(i)).count();
                if shared >= 2 && !same_cycle(&pa[x], &pb[y]) {
                    if pa[x].len() >= pb[y].len() && pa[x].len() > 2 {
                        let (f, s) = split(&pa[x], &pb[y]);
                        pa.splice(x..=x, [f, s]);
                    } else {
                        let (f, s) = split(&pb[y], &pa[x]);
                        pb.splice(y..=y, [f, s]);
                    }
                    changed = true;
                    break 'outer;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let build = |u: &GroupElement, ps: &[Vec<usize>]| -> Vec<GroupElement> {
        let nv = u.nvars();
        let mut out: Vec<GroupElement> =
            ps.iter().map(|c| GroupElement::from_cycles(nv, u.n, &[c.clone()])).collect();
        let mut prod = GroupElement::identity(nv, u.n);
        for p in &out {
            prod = prod.compose(p);
        }
        // remaining diagonal correction lands on the right
        let corr = prod.inverse().compose(u);
        if !corr.is_identity() {
            out.push(corr);
        }
        out
    };
    (build(a, &pa), build(b, &pb))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedData {
    pub fixed: Vec<usize>,
    pub moved: Vec<usize>,
    pub n_u: usize,
    pub d_u: usize,
    #[serde(with = "rational_serde")]
    pub age: Rational,
    pub det_exponent: u32,
    pub special: bool,
    pub parity: usize,
}

mod rational_serde {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};
    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn frac(q: Rational) -> Rational {
    &q - q.floor()
}

pub fn age(u: &GroupElement) -> Rational {
    let n = u.n as i64;
    let dec = cycle_decompose(u);
    let mut total = Rational::zero();
    for c in &dec.cycles {
        let k = c.len() as i64;
        let a = c.exp_sum() as i64;
        for p in 0..k {
            total += frac(Rational::new((a + p * n).into(), (n * k).into()));
        }
    }
    for &d in &dec.diagonal_rest.diag {
        total += Rational::new((d as i64).into(), n.into());
    }
    total
}

pub fn fixed_data(u: &GroupElement) -> FixedData {
    let nv = u.nvars();
    let dec = cycle_decompose(u);
    let fixed: Vec<usize> = (0..nv).filter(|&k| u.perm[k] == k && u.diag[k] == 0).collect();
    let moved: Vec<usize> = (0..nv).filter(|k| !fixed.contains(k)).collect();
    let n_u = fixed.len() + dec.cycles.iter().filter(|c| c.is_special()).count();
    let d_u = nv - n_u;
    FixedData {
        fixed,
        moved,
        n_u,
        d_u,
        age: age(u),
        det_exponent: u.det_exponent(),
        special: u.is_special(),
        parity: d_u % 2,
    }
}

/// ζ_n^e for the engine.
pub fn zeta_n(n: u32, e: i64) -> CycNum {
    CycNum::root_of_unity(n, e)
}

/// A finite subgroup with a deterministic element order.
#[derive(Clone, Debug)]
pub struct Group {
    pub nvars: usize,
    pub n: u32,
    pub generators: Vec<GroupElement>,
    pub elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
}

pub const DEFAULT_CAP: usize = 20000;

impl Group {
    pub fn generate(nvars: usize, n: u32, generators: &[GroupElement], cap: usize) -> Result<Self, GroupError> {
        for g in generators {
            if g.nvars() != nvars || g.n != n {
                return Err(GroupError::Mismatch(nvars, n, g.nvars(), g.n));
            }
        }
        let elements = closure(nvars, n, generators, cap)?;
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Ok(Group { nvars, n, generators: generators.to_vec(), elements, index })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, u: &GroupElement) -> bool {
        self.index.contains_key(u)
    }

    pub fn index_of(&self, u: &GroupElement) -> Option<usize> {
        self.index.get(u).copied()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.nvars, self.n)
    }

    /// Diagonal subgroup G^d.
    pub fn diagonal_part(&self) -> Vec<GroupElement> {
        self.elements.iter().filter(|u| u.is_diagonal()).cloned().collect()
    }

    /// G^d ⊆ SL_N
    pub fn diagonal_in_sl(&self) -> bool {
        self.elements.iter().filter(|u| u.is_diagonal()).all(|u| u.is_special())
    }

    pub fn centralizer(&self, u: &GroupElement) -> Vec<GroupElement> {
        self.elements
            .iter()
            .filter(|z| z.compose(u) == u.compose(z))
            .cloned()
            .collect()
    }

    /// Classes as (representative, members); representative is the first
    /// member in element order.
    pub fn conjugacy_classes(&self) -> Vec<(GroupElement, Vec<GroupElement>)> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for (i, u) in self.elements.iter().enumerate() {
            if seen[i] {
                continue;
            }
            let mut members = BTreeSet::new();
            for v in &self.elements {
                members.insert(u.conjugate_by(v));
            }
            for m in &members {
                seen[self.index[m]] = true;
            }
            out.push((u.clone(), members.into_iter().collect()));
        }
        out
    }
}

/// Breadth-first closure, sorted lexicographically on (perm, diag).
pub fn closure(nvars: usize, n: u32, generators: &[GroupElement], cap: usize) -> Result<Vec<GroupElement>, GroupError> {
    let id = GroupElement::identity(nvars, n);
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.compose(g);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(GroupError::TooLarge(cap));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}
