//! Exact arithmetic in cyclotomic fields ℚ(ζ_L).
//!
//! A [`CycNum`] stores its own order `L` and a dense coefficient vector in the
//! power basis `1, ζ_L, …, ζ_L^{φ(L)-1}` over a common denominator. Values of
//! different orders can be mixed freely; both sides are embedded into the
//! field of order `lcm` first.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycError {
    #[error("root order {m} does not divide field order {l}")]
    OrderMismatch { m: u32, l: u32 },
    #[error("division by zero in cyclotomic field")]
    DivisionByZero,
}

/// Precomputed data for ℚ(ζ_L).
struct FieldData {
    deg: usize,
    /// Φ_L, low degree first, monic.
    modulus: Vec<i64>,
    /// `table[e]` expresses ζ_L^e in the power basis, for e < max(L, 2·deg).
    table: Vec<Vec<i64>>,
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // both low-first, den monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[k + j] = rem[k + j]
                    .checked_sub(c.checked_mul(d).expect("cyclotomic coefficient overflow"))
                    .expect("cyclotomic coefficient overflow");
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// The L-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_poly(l: u32) -> Vec<i64> {
    fn rec(l: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
        if let Some(p) = memo.get(&l) {
            return p.clone();
        }
        let mut p = vec![0i64; l as usize + 1];
        p[0] = -1;
        p[l as usize] = 1;
        for d in 1..l {
            if l % d == 0 {
                let pd = rec(d, memo);
                p = poly_divexact(&p, &pd);
            }
        }
        memo.insert(l, p.clone());
        p
    }
    rec(l, &mut HashMap::new())
}

impl FieldData {
    fn new(l: u32) -> Self {
        let modulus = cyclotomic_poly(l);
        let deg = modulus.len() - 1;
        let len = (l as usize).max(2 * deg);
        let mut table = Vec::with_capacity(len);
        let mut cur = vec![0i64; deg];
        cur[0] = 1;
        for _ in 0..len {
            table.push(cur.clone());
            // multiply by ζ
            let top = cur[deg - 1];
            for j in (1..deg).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for j in 0..deg {
                    cur[j] -= top * modulus[j];
                }
            }
        }
        FieldData { deg, modulus, table }
    }
}

thread_local! {
    static FIELDS: RefCell<HashMap<u32, Rc<FieldData>>> = RefCell::new(HashMap::new());
}

fn field(l: u32) -> Rc<FieldData> {
    FIELDS.with(|f| {
        f.borrow_mut()
            .entry(l)
            .or_insert_with(|| Rc::new(FieldData::new(l)))
            .clone()
    })
}

/// Degree of ℚ(ζ_L) over ℚ.
pub fn field_degree(l: u32) -> usize {
    field(l).deg
}

/// Element of ℚ(ζ_order): Σ num[e]/den · ζ^e.
#[derive(Clone, Debug)]
pub struct CycNum {
    order: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum { order: 1, num: vec![BigInt::zero()], den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(i: i64) -> Self {
        CycNum { order: 1, num: vec![BigInt::from(i)], den: BigInt::one() }
    }

    pub fn from_bigint(i: BigInt) -> Self {
        CycNum { order: 1, num: vec![i], den: BigInt::one() }
    }

    pub fn from_rational(q: &Rational) -> Self {
        CycNum { order: 1, num: vec![q.numer().clone()], den: q.denom().clone() }
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Self::from_rational(&Rational::new(p.into(), q.into()))
    }

    /// ζ_m^e as an element of ℚ(ζ_m).
    pub fn root_of_unity(m: u32, e: i64) -> Self {
        assert!(m > 0);
        if m == 1 {
            return Self::one();
        }
        let f = field(m);
        let e = e.rem_euclid(m as i64) as usize;
        let num = f.table[e].iter().map(|&c| BigInt::from(c)).collect();
        CycNum { order: m, num, den: BigInt::one() }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// Some(q) when the value is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.iter().skip(1).all(|c| c.is_zero()) {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Canonical coefficients as (exponent, rational) with zeros dropped.
    pub fn coeffs(&self) -> Vec<(u32, Rational)> {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e as u32, Rational::new(c.clone(), self.den.clone())))
            .collect()
    }

    fn normalize(mut self) -> Self {
        if self.den.is_negative() {
            self.den = -self.den;
            for c in self.num.iter_mut() {
                *c = -c.clone();
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
        } else if !g.is_one() {
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
        self
    }

    /// Re-express in ℚ(ζ_l); requires order | l.
    pub fn embed(&self, l: u32) -> Self {
        if l == self.order {
            return self.clone();
        }
        assert!(l % self.order == 0, "cannot embed order {} into {}", self.order, l);
        let f = field(l);
        let step = (l / self.order) as usize;
        let mut num = vec![BigInt::zero(); f.deg];
        for (e, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &f.table[(e * step) % l as usize];
            for (j, &t) in row.iter().enumerate() {
                if t != 0 {
                    num[j] += c * t;
                }
            }
        }
        CycNum { order: l, num, den: self.den.clone() }
    }

    /// Smallest order the value can be written in (within divisors of its order).
    pub fn minimal_order(&self) -> u32 {
        if self.as_rational().is_some() {
            return 1;
        }
        let mut best = self.order;
        for d in 2..self.order {
            if self.order % d == 0 && d < best {
                let probe = self.try_restrict(d);
                if probe.is_some() {
                    best = d;
                }
            }
        }
        best
    }

    fn try_restrict(&self, d: u32) -> Option<CycNum> {
        // brute force: solve via embedding basis of ℚ(ζ_d) into ℚ(ζ_order)
        let fd = field(d);
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for e in 0..fd.deg {
            let b = CycNum::root_of_unity(d, e as i64).embed(self.order);
            rows.push(b.num.iter().map(|c| Rational::from(c.clone())).collect());
        }
        let target: Vec<Rational> =
            self.num.iter().map(|c| Rational::new(c.clone(), self.den.clone())).collect();
        let sol = crate::linalg::solve_rational_rows(&rows, &target)?;
        let mut out = CycNum::zero();
        for (e, q) in sol.iter().enumerate() {
            out += &(CycNum::root_of_unity(d, e as i64) * &CycNum::from_rational(q));
        }
        Some(out.embed(d))
    }

    fn lift_pair(a: &CycNum, b: &CycNum) -> (CycNum, CycNum) {
        let l = lcm(a.order, b.order);
        (a.embed(l), b.embed(l))
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut result = CycNum::one();
        let mut base = self.clone();
        let mut k = e as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        result
    }

    /// Multiplicative inverse via extended Euclid against Φ_L.
    pub fn inv(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(CycNum::from_rational(&q.recip()).embed(self.order));
        }
        let f = field(self.order);
        let a: Vec<Rational> = self.num.iter().map(|c| Rational::from(c.clone())).collect();
        let m: Vec<Rational> = f.modulus.iter().map(|&c| Rational::from(BigInt::from(c))).collect();
        let s = qpoly::inverse_mod(&a, &m);
        let mut out = qpoly_to_cyc(self.order, &s, f.deg);
        // multiply by den
        for c in out.num.iter_mut() {
            *c = &*c * &self.den;
        }
        Ok(out.normalize())
    }

    /// Value of a rational scalar multiple.
    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = self.clone();
        for c in out.num.iter_mut() {
            *c = &*c * q.numer();
        }
        out.den = &out.den * q.denom();
        out.normalize()
    }

    /// Human-readable rendering "Σ (p/q)·ζm^e" in the smallest field
    /// ℚ(ζ_m) containing the value.
    pub fn render(&self) -> String {
        if let Some(q) = self.as_rational() {
            return if q.is_zero() { "0".to_string() } else { format!("({q})") };
        }
        let m = self.minimal_order();
        let v = if m == self.order { self.clone() } else { self.try_restrict(m).unwrap_or_else(|| self.clone()) };
        let cs = v.coeffs();
        if cs.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = cs
            .iter()
            .map(|(e, q)| match *e {
                0 => format!("({q})"),
                1 => format!("({q})·ζ{m}"),
                e => format!("({q})·ζ{m}^{e}"),
            })
            .collect();
        parts.join(" + ")
    }

    /// Serialization triples (exponent, numerator, denominator) in ℚ(ζ_l).
    pub fn to_triples(&self, l: u32) -> Vec<(u32, String, String)> {
        self.embed(lcm(l, self.order))
            .coeffs()
            .into_iter()
            .map(|(e, q)| (e, q.numer().to_string(), q.denom().to_string()))
            .collect()
    }

    pub fn from_triples(l: u32, triples: &[(u32, String, String)]) -> Option<Self> {
        let mut out = CycNum::zero();
        for (e, p, q) in triples {
            let r = Rational::new(p.parse().ok()?, q.parse().ok()?);
            out += &(CycNum::root_of_unity(l, *e as i64) * &CycNum::from_rational(&r));
        }
        Some(out.embed(lcm(l, out.order)))
    }
}

fn qpoly_to_cyc(order: u32, p: &[Rational], deg: usize) -> CycNum {
    let mut den = BigInt::one();
    for c in p {
        den = den.lcm(c.denom());
    }
    let mut num = vec![BigInt::zero(); deg];
    for (i, c) in p.iter().enumerate().take(deg) {
        num[i] = c.numer() * (&den / c.denom());
    }
    CycNum { order, num, den }.normalize()
}

/// Dense univariate polynomials over ℚ, low degree first.
mod qpoly {
    use super::Rational;
    use num_traits::Zero;

    fn trim(p: &mut Vec<Rational>) {
        while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }

    fn deg(p: &[Rational]) -> usize {
        p.len() - 1
    }

    fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = deg(b);
        if r.len() <= db || (r.len() == 1 && r[0].is_zero()) {
            return (vec![Rational::zero()], r);
        }
        let mut q = vec![Rational::zero(); r.len() - db];
        let lead = b[db].clone();
        for k in (0..q.len()).rev() {
            let c = &r[k + db] / &lead;
            if !c.is_zero() {
                for (j, bj) in b.iter().enumerate() {
                    r[k + j] = &r[k + j] - &c * bj;
                }
            }
            q[k] = c;
        }
        r.truncate(db.max(1));
        trim(&mut r);
        (q, r)
    }

    fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = &out[i + j] + x * y;
            }
        }
        trim(&mut out);
        out
    }

    fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = a.len().max(b.len());
        let mut out = vec![Rational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] = x.clone();
        }
        for (i, y) in b.iter().enumerate() {
            out[i] = &out[i] - y;
        }
        trim(&mut out);
        out
    }

    fn is_zero(p: &[Rational]) -> bool {
        p.iter().all(|c| c.is_zero())
    }

    /// s with a·s ≡ 1 mod m; gcd(a, m) = 1 assumed.
    pub fn inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
        let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
        trim(&mut r1);
        let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::from_integer(1.into())]);
        while !is_zero(&r1) {
            let (q, r) = divrem(&r0, &r1);
            let s2 = sub(&s0, &mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant
        assert_eq!(r0.len(), 1, "element not invertible modulo the cyclotomic polynomial");
        let c = r0[0].clone();
        let (_, s) = divrem(&s0, m);
        s.into_iter().map(|x| x / &c).collect()
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = CycNum::lift_pair(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CycNum {}

impl Default for CycNum {
    fn default() -> Self {
        CycNum::zero()
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let (a, b);
        let (x, y) = if self.order == rhs.order {
            (self, rhs)
        } else {
            (a, b) = CycNum::lift_pair(self, rhs);
            (&a, &b)
        };
        let num = if x.den == y.den {
            x.num.iter().zip(&y.num).map(|(p, q)| p + q).collect()
        } else {
            x.num.iter().zip(&y.num).map(|(p, q)| p * &y.den + q * &x.den).collect()
        };
        let den = if x.den == y.den { x.den.clone() } else { &x.den * &y.den };
        CycNum { order: x.order, num, den }.normalize()
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        if self.is_zero() || rhs.is_zero() {
            return CycNum::zero();
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(&q).embed(lcm(self.order, rhs.order));
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(&q).embed(lcm(self.order, rhs.order));
        }
        let (a, b);
        let (x, y) = if self.order == rhs.order {
            (self, rhs)
        } else {
            (a, b) = CycNum::lift_pair(self, rhs);
            (&a, &b)
        };
        let f = field(x.order);
        let d = f.deg;
        let mut acc = vec![BigInt::zero(); 2 * d - 1];
        for (i, p) in x.num.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, q) in y.num.iter().enumerate() {
                if !q.is_zero() {
                    acc[i + j] += p * q;
                }
            }
        }
        let mut num: Vec<BigInt> = acc[..d].to_vec();
        for (e, c) in acc.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (j, &t) in f.table[e].iter().enumerate() {
                if t != 0 {
                    num[j] += c * t;
                }
            }
        }
        CycNum { order: x.order, num, den: &x.den * &y.den }.normalize()
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { order: self.order, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self + &(-rhs)
    }
}

impl<'a> Div<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn div(self, rhs: &CycNum) -> CycNum {
        self * &rhs.inv().expect("division by zero")
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
        impl $tr<CycNum> for &CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                self.$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, rhs: &CycNum) {
        *self = &*self * rhs;
    }
}

impl From<i64> for CycNum {
    fn from(i: i64) -> Self {
        CycNum::from_int(i)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// The engine's field ℚ(ζ_L) with L = lcm(n, 2, …, N).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycField {
    pub l: u32,
}

impl CycField {
    pub fn for_fermat(n: u32, nvars: usize) -> Self {
        let mut l = n.max(1);
        for k in 2..=nvars as u32 {
            l = lcm(l, k);
        }
        CycField { l }
    }

    pub fn new(l: u32) -> Self {
        CycField { l }
    }

    /// ζ_m^e inside ℚ(ζ_L).
    pub fn zeta(&self, m: u32, e: i64) -> Result<CycNum, CycError> {
        if m == 0 || self.l % m != 0 {
            return Err(CycError::OrderMismatch { m, l: self.l });
        }
        Ok(CycNum::root_of_unity(m, e).embed(self.l))
    }

    pub fn embed(&self, x: &CycNum) -> CycNum {
        x.embed(lcm(self.l, x.order()))
    }
}

/// Multiplicative order of a root of unity ζ_m^e.
pub fn root_order(m: u32, e: i64) -> u32 {
    let e = e.rem_euclid(m as i64) as u32;
    m / m.gcd(&e)
}
