//! Associated graded towers and filtration checks.
//!
//! Degenerating by the degree in `x_k` kills `delta_k` and the lower-order
//! terms `c_ik` of the higher twists on `x_k`. Doing this for every variable,
//! top first, leaves `sigma'_i(y_j) = a_ij y_j`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ringmap::RingMap;
use crate::skewpoly::{Degree, Monomial, SkewPoly};
use crate::tower::{validate_tower, BaseMap, OreTower, TowerLevel, VarImage};

/// What one degeneration step removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedStep {
    /// 1-based level whose variable defines the filtration.
    pub level: usize,
    pub dropped_delta: bool,
    /// 1-based levels `i` whose `c_i,level` was nonzero.
    pub dropped_c: Vec<usize>,
}

impl fmt::Display for GradedStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "filter by x{}:", self.level)?;
        if self.dropped_delta {
            write!(f, " drop delta_{}", self.level)?;
        }
        for i in &self.dropped_c {
            write!(f, " drop c_{},{}", i, self.level)?;
        }
        if !self.dropped_delta && self.dropped_c.is_empty() {
            write!(f, " nothing to drop")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct GradedPresentation {
    pub source: OreTower,
    pub result: OreTower,
    pub step_log: Vec<GradedStep>,
}

/// Degenerates `t` to `R_0[y_1; sigma'_1]...[y_n; sigma'_n]`.
pub fn associated_graded_tower(t: &OreTower) -> Result<GradedPresentation> {
    let n = t.height();
    for (i, level) in t.levels().iter().enumerate() {
        for (j, img) in level.sigma_vars.iter().enumerate() {
            if img.a.inverse().is_none() {
                return Err(Error::HypothesisViolation(format!(
                    "a_{}{} = {} is not invertible",
                    i + 1,
                    j + 1,
                    t.render(&SkewPoly::constant(img.a.clone()))
                )));
            }
            if img.c.support() > j {
                return Err(Error::HypothesisViolation(format!(
                    "c_{}{} involves variables at or above x{}",
                    i + 1,
                    j + 1,
                    j + 1
                )));
            }
        }
    }
    let step_log = (0..n)
        .rev()
        .map(|k| GradedStep {
            level: k + 1,
            dropped_delta: !t.level(k).delta_is_trivial(),
            dropped_c: (k + 1..n).filter(|&i| !t.level(i).sigma_vars[k].c.is_zero()).map(|i| i + 1).collect(),
        })
        .collect();
    let levels = t
        .levels()
        .iter()
        .enumerate()
        .map(|(i, level)| TowerLevel {
            name: format!("y{}", i + 1),
            sigma_base: level.sigma_base.clone(),
            delta_base: BaseMap::Zero,
            sigma_vars: level.sigma_vars.iter().map(|v| VarImage { a: v.a.clone(), c: SkewPoly::zero() }).collect(),
            delta_vars: vec![SkewPoly::zero(); i],
            q: None,
        })
        .collect();
    let result = OreTower::from_levels(t.base().clone(), levels)?;
    let report = validate_tower(&result, 0);
    if let Some((level, fail)) = report.first_failure() {
        return Err(Error::HypothesisViolation(format!("graded tower fails validation at level {level}: {fail}")));
    }
    Ok(GradedPresentation { source: t.clone(), result, step_log })
}

/// Outcome of `rees_closure_check`.
#[derive(Clone, Debug, PartialEq)]
pub enum ReesClosure {
    Ok,
    /// `map(monomial)` has `x_i`-degree `image_degree`, above that of `monomial`.
    Fail {
        monomial: Monomial,
        image_degree: Degree,
    },
}

impl ReesClosure {
    pub fn is_ok(&self) -> bool {
        matches!(self, ReesClosure::Ok)
    }
}

/// Checks that `map` does not raise the degree in `x_i` (0-based) on monomials
/// in `x_1..x_i` of total degree at most `degree_bound`.
pub fn rees_closure_check(t: &OreTower, i: usize, map: &RingMap, degree_bound: u32) -> Result<ReesClosure> {
    if i >= t.height() || map.var_images.len() <= i {
        return Err(Error::HypothesisViolation(format!("the map is not defined up to level {}", i + 1)));
    }
    let restricted = RingMap { base: map.base.clone(), var_images: map.var_images[..=i].to_vec() };
    let mut monos = vec![Monomial::one()];
    for d in 1..=degree_bound {
        monos.extend(monomials_of_degree(i + 1, d));
    }
    monos.sort_by_key(|m| (m.exponent(i), m.clone()));
    for m in monos {
        let p = SkewPoly::term(t.base().one(), m.clone());
        let image = t.apply_ring_map(&restricted, &p)?;
        let image_degree = image.degree(i);
        if image_degree > Degree::Finite(m.exponent(i)) {
            return Ok(ReesClosure::Fail { monomial: m, image_degree });
        }
    }
    Ok(ReesClosure::Ok)
}

fn monomials_of_degree(k: usize, d: u32) -> Vec<Monomial> {
    fn go(k: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == k {
            prefix.push(d);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=d {
            prefix.push(e);
            go(k, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        go(k, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Terms of `p` of maximal degree in `x_j`.
pub fn leading_form(p: &SkewPoly, j: usize) -> SkewPoly {
    p.degree_leading(j).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::scalar::{Field, Scalar};

    #[test]
    fn graded_three_degenerates() {
        let t = presets::graded_three().unwrap();
        let g = associated_graded_tower(&t).unwrap();
        let top = g.result.level(2);
        let five = t.base().scalar(&Scalar::integer(5));
        let two = t.base().scalar(&Scalar::integer(2));
        assert_eq!(top.sigma_vars[1], VarImage { a: five, c: SkewPoly::zero() });
        assert_eq!(top.sigma_vars[0], VarImage { a: two, c: SkewPoly::zero() });
        assert!(g.result.levels().iter().all(TowerLevel::delta_is_trivial));
        assert_eq!(g.result.names(), vec!["y1", "y2", "y3"]);
        assert_eq!(g.step_log[0], GradedStep { level: 3, dropped_delta: true, dropped_c: vec![] });
        assert_eq!(g.step_log[1], GradedStep { level: 2, dropped_delta: false, dropped_c: vec![3] });
        for (i, level) in t.levels().iter().enumerate() {
            for (j, v) in level.sigma_vars.iter().enumerate() {
                assert_eq!(g.result.level(i).sigma_vars[j].a, v.a);
            }
        }
    }

    #[test]
    fn weyl_becomes_commutative() {
        let t = presets::weyl(Field::prime(5).unwrap()).unwrap();
        let g = associated_graded_tower(&t).unwrap();
        let (y1, y2) = (g.result.var(0), g.result.var(1));
        assert_eq!(g.result.mul(&y2, &y1).unwrap(), g.result.mul(&y1, &y2).unwrap());
    }

    #[test]
    fn zero_twist_is_rejected() {
        let t = presets::quantum_plane(Field::Rational, Scalar::integer(0)).unwrap();
        assert!(matches!(associated_graded_tower(&t), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn rees_closure_examples() {
        let t = presets::graded_three().unwrap();
        for k in 1..3 {
            for i in 0..k {
                let m = t.level_ring_map(k);
                assert!(rees_closure_check(&t, i, &m, 4).unwrap().is_ok());
            }
        }
        let x2 = t.var(1);
        let square = RingMap::substitution(vec![t.var(0), t.mul(&x2, &x2).unwrap()]);
        let got = rees_closure_check(&t, 1, &square, 4).unwrap();
        assert_eq!(got, ReesClosure::Fail { monomial: Monomial::var(1), image_degree: Degree::Finite(2) });
    }

    #[test]
    fn leading_form_of_weyl_product() {
        let t = presets::quantum_weyl_generic().unwrap();
        let p = t.var(1).add(&t.var(0));
        let prod = t.mul(&p, &p).unwrap();
        let lp = leading_form(&p, 1);
        assert_eq!(leading_form(&prod, 1), leading_form(&t.mul(&lp, &lp).unwrap(), 1));
    }
}
