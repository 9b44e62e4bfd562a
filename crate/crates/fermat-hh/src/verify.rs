//! Property suites over a closed group: associativity, braided
//! commutativity, Frobenius identity, bigrading, G-invariance of η, the
//! action axioms and the sanity identities.

use rayon::prelude::*;
use serde::Serialize;

use crate::cuptable::CupEngine;
use crate::cyclotomic::CycNum;
use crate::fixedlocus::{monomial_basis, SectorClass};
use crate::gaction::Action;
use crate::grading_pairing::{bidegree, eta, nondegenerate};
use crate::group::{age, fixed_data, Group};
use crate::invariants::{global_average_dimension, hh_algebra, invariant_basis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize, clap::ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum VerifyLevel {
    /// Sector units only.
    #[default]
    Golden,
    /// Every monomial basis element.
    Full,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    /// Up to three failing cases.
    pub examples: Vec<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn tally(name: &str, cases: Vec<Option<String>>) -> PropertyReport {
    let checked = cases.len();
    let fails: Vec<String> = cases.into_iter().flatten().collect();
    PropertyReport { name: name.into(), checked, failures: fails.len(), examples: fails.into_iter().take(3).collect() }
}

pub fn basis(g: &Group, level: VerifyLevel) -> Vec<SectorClass> {
    match level {
        VerifyLevel::Golden => g.elements.iter().map(SectorClass::unit).collect(),
        VerifyLevel::Full => g.elements.iter().flat_map(monomial_basis).collect(),
    }
}

fn sign(p: usize) -> CycNum {
    CycNum::from_int(if p % 2 == 0 { 1 } else { -1 })
}

pub fn associativity(e: &CupEngine, b: &[SectorClass]) -> PropertyReport {
    let cases = b
        .par_iter()
        .flat_map_iter(|x| {
            b.iter().flat_map(move |y| {
                let xy = e.cup_classes(x, y);
                b.iter().map(move |z| {
                    let l = e.cup_classes(&xy, z);
                    let r = e.cup_classes(x, &e.cup_classes(y, z));
                    (l != r).then(|| format!("({x})({y})({z})"))
                })
            })
        })
        .collect();
    tally("associativity", cases)
}

/// a∪b = (−1)^{|a||b|}·b∪(v⁻¹)^*a for a in sector u, b in sector v.
pub fn braided_commutativity(act: &Action, b: &[SectorClass]) -> PropertyReport {
    let e = act.engine;
    let cases = b
        .par_iter()
        .flat_map_iter(|x| {
            b.iter().map(move |y| {
                let s = sign(fixed_data(&x.u).parity * fixed_data(&y.u).parity);
                let l = e.cup_classes(x, y);
                let r = e.cup_classes(y, &act.act_class(&y.u.inverse(), x)).scale(&s);
                (l != r).then(|| format!("({x})({y})"))
            })
        })
        .collect();
    tally("braided commutativity", cases)
}

pub fn frobenius(e: &CupEngine, b: &[SectorClass]) -> PropertyReport {
    let cases = b
        .par_iter()
        .flat_map_iter(|x| {
            b.iter().flat_map(move |y| {
                let xy = e.cup_classes(x, y);
                b.iter().filter(move |z| z.u == x.u.compose(&y.u).inverse()).map(move |z| {
                    let ok = eta(&xy, z) == eta(x, &e.cup_classes(y, z));
                    (!ok).then(|| format!("({x})({y})({z})"))
                })
            })
        })
        .collect();
    tally("Frobenius identity", cases)
}

pub fn bigrading(e: &CupEngine, b: &[SectorClass]) -> PropertyReport {
    let cases = b
        .par_iter()
        .flat_map_iter(|x| {
            b.iter().filter_map(move |y| {
                let xy = e.cup_classes(x, y);
                if xy.is_zero() {
                    return None;
                }
                let ok = match (bidegree(&xy), bidegree(x), bidegree(y)) {
                    (Ok(p), Ok(a), Ok(c)) => p == &a + &c,
                    _ => false,
                };
                Some((!ok).then(|| format!("({x})({y})")))
            })
        })
        .collect();
    tally("bigrading additivity", cases)
}

pub fn eta_invariance(act: &Action, g: &Group, b: &[SectorClass]) -> PropertyReport {
    let cases = b
        .par_iter()
        .flat_map_iter(|x| {
            b.iter().filter(move |y| y.u == x.u.inverse()).flat_map(move |y| {
                g.elements.iter().map(move |v| {
                    let ok = eta(&act.act_class(v, x), &act.act_class(v, y)) == eta(x, y);
                    (!ok).then(|| format!("{v}: ({x})({y})"))
                })
            })
        })
        .collect();
    tally("pairing G-invariance", cases)
}

pub fn action_axioms(act: &Action, g: &Group, b: &[SectorClass]) -> PropertyReport {
    let e = act.engine;
    let cases = g
        .elements
        .par_iter()
        .flat_map_iter(|v| {
            b.iter().flat_map(move |x| {
                let composite = g.elements.iter().map(move |w| {
                    let ok = act.act_class(v, &act.act_class(w, x)) == act.act_class(&v.compose(w), x);
                    (!ok).then(|| format!("{v}·{w} on {x}"))
                });
                let auto = b.iter().map(move |y| {
                    let l = act.act_class(v, &e.cup_classes(x, y));
                    let r = e.cup_classes(&act.act_class(v, x), &act.act_class(v, y));
                    (l != r).then(|| format!("{v} on ({x})({y})"))
                });
                composite.chain(auto)
            })
        })
        .collect();
    tally("action and automorphism", cases)
}

/// age(u)+age(u⁻¹) = d_u, dim Jac(f^u) = (n−1)^{N_u}, class and global
/// invariant dimensions agree.
pub fn sanity(act: &Action, g: &Group) -> Vec<PropertyReport> {
    let ages = g
        .elements
        .iter()
        .map(|u| {
            let ok = age(u) + age(&u.inverse()) == num_rational::BigRational::from_integer((fixed_data(u).d_u as i64).into());
            (!ok).then(|| u.label())
        })
        .collect();
    let dims = g
        .elements
        .iter()
        .map(|u| {
            let ok = monomial_basis(u).len() == ((u.n - 1) as usize).pow(fixed_data(u).n_u as u32);
            (!ok).then(|| u.label())
        })
        .collect();
    let by_class = invariant_basis(act, g).len();
    let global = global_average_dimension(act, g);
    vec![
        tally("age(u)+age(u⁻¹) = d_u", ages),
        tally("dim Jac(f^u) = (n−1)^N_u", dims),
        tally(
            "class vs global invariant dimension",
            vec![(by_class != global).then(|| format!("{by_class} by classes, {global} by averaging"))],
        ),
    ]
}

/// Every suite on one group; G-invariance of η only when G^d ⊆ SL_N.
pub fn run_all(engine: &CupEngine, g: &Group, level: VerifyLevel) -> Vec<PropertyReport> {
    let act = Action::new(engine);
    let b = basis(g, level);
    let mut out = vec![
        associativity(engine, &b),
        braided_commutativity(&act, &b),
        frobenius(engine, &b),
        bigrading(engine, &b),
        action_axioms(&act, g, &b),
    ];
    let sl = g.diagonal_in_sl();
    if sl {
        out.push(eta_invariance(&act, g, &b));
    }
    out.push(tally("pairing nondegenerate", vec![(!nondegenerate(g)).then(|| "rank deficient block".to_string())]));
    out.extend(sanity(&act, g));
    match hh_algebra(engine, g) {
        Ok(r) => {
            out.push(tally("invariant algebra associative", vec![(!r.flags.associative).then(String::new)]));
            out.push(tally("invariant algebra supercommutative", vec![(!r.flags.supercommutative).then(String::new)]));
            if sl {
                out.push(tally("invariant algebra Frobenius", vec![(!r.flags.frobenius).then(String::new)]));
                out.push(tally("invariant pairing nondegenerate", vec![(!r.flags.nondegenerate).then(String::new)]));
            }
        }
        Err(err) => out.push(tally("invariant algebra closed", vec![Some(err.to_string())])),
    }
    out
}
