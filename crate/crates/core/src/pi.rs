//! PI verdicts for towers of q-skew type and centrality witnesses.
//!
//! For height at least two the verdict follows Haynal's criterion: under the
//! hypotheses (finite order of every `sigma_i` on `R_0`, constant `lambda_ij`,
//! q-skew derivations with `q_i != 1`) the tower is PI exactly when every
//! `lambda_ij` is a root of unity. For a single level the criterion is the
//! finite order of `sigma` on the center of `R_0`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::error::Result;
use crate::matrix::BaseElement;
use crate::scalar::root_of_unity_order;
use crate::skewpoly::SkewPoly;
use crate::tower::{map_order, validate_tower, BaseMap, OreTower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    PI,
    NotPI,
    Undecided(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::PI => write!(f, "PI"),
            Verdict::NotPI => write!(f, "NotPI"),
            Verdict::Undecided(why) => write!(f, "Undecided: {why}"),
        }
    }
}

/// A power of a variable found to be central.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralPower {
    /// 0-based variable index.
    pub var: usize,
    pub exponent: u32,
    pub element: SkewPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PIReport {
    /// Orders of `lambda_ij`, keyed by 1-based `(i, j)`.
    pub lambda_orders: BTreeMap<(usize, usize), Option<u64>>,
    /// Orders of `sigma_i` on `R_0` (on its center for a single level), keyed by 1-based `i`.
    pub base_orders: BTreeMap<usize, Option<u64>>,
    pub verdict: Verdict,
    /// Least central power of each variable, searched when the verdict is PI.
    pub witnesses: Vec<CentralPower>,
}

/// `true` when `s` is a central scalar fixed by every `sigma_k` and killed by every `delta_k`.
fn is_constant(t: &OreTower, s: &BaseElement) -> bool {
    s.as_scalar().is_some()
        && (0..t.height()).all(|k| t.level_sigma_base(k, s) == *s && t.level_delta_base(k, s).is_zero())
}

fn order_on_center(t: &OreTower, map: &BaseMap, bound: u64) -> Option<u64> {
    if t.base().is_field() {
        map_order(t, map, bound)
    } else {
        // maps on matrix bases are F-linear, hence trivial on the center F
        Some(1)
    }
}

/// Checks the hypotheses and evaluates the criterion.
pub fn haynal_report(t: &OreTower, order_bound: u64) -> PIReport {
    let mut report = haynal_verdict(t, order_bound);
    if report.verdict == Verdict::PI {
        let bound = u32::try_from(order_bound).unwrap_or(u32::MAX);
        for var in 0..t.height() {
            report.witnesses.extend(central_powers(t, var, bound, true).unwrap_or_default());
        }
    }
    report
}

/// `haynal_report` without the witness search.
pub(crate) fn haynal_verdict(t: &OreTower, order_bound: u64) -> PIReport {
    let mut report = PIReport {
        lambda_orders: BTreeMap::new(),
        base_orders: BTreeMap::new(),
        verdict: Verdict::PI,
        witnesses: Vec::new(),
    };
    let undecided = |why: String| Verdict::Undecided(why);
    let n = t.height();
    if n == 0 {
        report.verdict = undecided("the tower has no levels".into());
        return report;
    }
    let validation = validate_tower(t, 0);
    if let Some((level, fail)) = validation.first_failure() {
        report.verdict = undecided(format!("tower fails validation at level {level}: {fail}"));
        return report;
    }
    let mut failure: Option<String> = None;
    for (i, level) in t.levels().iter().enumerate() {
        let order = if n == 1 {
            order_on_center(t, &level.sigma_base, order_bound)
        } else {
            map_order(t, &level.sigma_base, order_bound)
        };
        report.base_orders.insert(i + 1, order);
        if order.is_none() && failure.is_none() {
            failure = Some(format!("sigma_{} has no finite order <= {order_bound} on the base", i + 1));
        }
        if !level.delta_is_trivial() {
            match &level.q {
                None => {
                    failure.get_or_insert_with(|| format!("delta_{} is nonzero but no q is declared", i + 1));
                }
                Some(q) if q.is_one() => {
                    failure.get_or_insert_with(|| format!("q_{} = 1", i + 1));
                }
                Some(q) if !is_constant(t, &t.base().scalar(q)) => {
                    failure.get_or_insert_with(|| format!("q_{} is not a constant", i + 1));
                }
                Some(_) => {}
            }
        }
        for (j, img) in level.sigma_vars.iter().enumerate() {
            if !img.c.is_zero() {
                failure.get_or_insert_with(|| format!("sigma_{}({}) has a lower-order term", i + 1, t.var_name(j)));
                continue;
            }
            let lam = &img.a;
            if !is_constant(t, lam) || lam.is_zero() {
                failure.get_or_insert_with(|| format!("lambda_{}{} is not a nonzero constant", i + 1, j + 1));
                continue;
            }
            let s = lam.as_scalar().expect("constant is scalar");
            let ord = root_of_unity_order(&s).expect("nonzero");
            report.lambda_orders.insert((i + 1, j + 1), ord);
        }
    }
    if let Some(why) = failure {
        report.verdict = undecided(why);
        return report;
    }
    let all_finite =
        report.lambda_orders.values().all(Option::is_some) && report.base_orders.values().all(Option::is_some);
    report.verdict = if all_finite { Verdict::PI } else { Verdict::NotPI };
    report
}

/// Every central `x_var^e` has `e` divisible by the returned step: comparing
/// leading terms forces `sigma_var^e = id` on `R_0` and `lambda^e = 1` for each
/// constant twist between `x_var` and another variable. `None` when no
/// exponent up to `bound` can qualify.
fn exponent_step(t: &OreTower, var: usize, bound: u64) -> Option<u64> {
    let mut step = map_order(t, &t.level(var).sigma_base, bound)?;
    let twists = (0..var).map(|j| t.level(var).lambda(j)).chain((var + 1..t.height()).map(|k| t.level(k).lambda(var)));
    for lam in twists.flatten() {
        if lam.is_zero() || !is_constant(t, lam) {
            continue;
        }
        let s = lam.as_scalar().expect("constant is scalar");
        step = step.lcm(&root_of_unity_order(&s).ok()??);
    }
    (step <= bound).then_some(step)
}

fn central_powers(t: &OreTower, var: usize, bound: u32, first_only: bool) -> Result<Vec<CentralPower>> {
    let mut out = Vec::new();
    let Some(step) = exponent_step(t, var, u64::from(bound)) else {
        return Ok(out);
    };
    let step = step as u32;
    let x_step = t.pow(&t.var(var), step)?;
    let mut p = x_step.clone();
    let mut e = step;
    while e <= bound {
        if t.is_central(&p)?.is_central() {
            out.push(CentralPower { var, exponent: e, element: p.clone() });
            if first_only {
                break;
            }
        }
        e += step;
        if e <= bound {
            p = t.mul(&p, &x_step)?;
        }
    }
    Ok(out)
}

/// Every `x_i^N`, `N <= n_bound`, that is central.
pub fn centrality_witness(t: &OreTower, n_bound: u32) -> Result<Vec<CentralPower>> {
    let mut out = Vec::new();
    for var in 0..t.height() {
        out.extend(central_powers(t, var, n_bound, false)?);
    }
    Ok(out)
}
