//! Ring operations of `R_n` on normal forms.
//!
//! `x_k * beta x^f` is rewritten as `sigma_k(beta) (x_k x^f) + delta_k(beta) x^f`,
//! and `x_k x^f` moves `x_k` past the variables below it through
//! `x_k u = sigma_k(u) x_k + delta_k(u)` with `u` the part of `x^f` below `k`.
//! The images `sigma_k(u)`, `delta_k(u)` of monomials live in `R_{k-1}` and are
//! memoized per tower, as are the products `x_k x^f`.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::matrix::BaseElement;
use crate::skewpoly::{Monomial, SkewPoly};
use crate::tower::{LevelMap, OreTower};

/// A ring generator of `R_n`: a base basis element or a variable.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Base(BaseElement),
    Var(usize),
}

impl Generator {
    pub fn render(&self, tower: &OreTower) -> String {
        match self {
            Generator::Base(b) => tower.render(&SkewPoly::constant(b.clone())),
            Generator::Var(j) => tower.var_name(*j),
        }
    }

    pub fn as_poly(&self, tower: &OreTower) -> SkewPoly {
        match self {
            Generator::Base(b) => SkewPoly::constant(b.clone()),
            Generator::Var(j) => tower.var(*j),
        }
    }
}

/// Outcome of a centrality test.
#[derive(Clone, Debug, PartialEq)]
pub enum Centrality {
    Central,
    /// First generator that does not commute with the element.
    NotCentral(Generator),
}

impl Centrality {
    pub fn is_central(&self) -> bool {
        matches!(self, Centrality::Central)
    }
}

impl fmt::Display for Centrality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Centrality::Central => write!(f, "central"),
            Centrality::NotCentral(g) => write!(f, "not central ({g:?})"),
        }
    }
}

fn cached(
    map: &RwLock<HashMap<(usize, Monomial), SkewPoly>>,
    key: (usize, Monomial),
    compute: impl FnOnce() -> SkewPoly,
) -> SkewPoly {
    if let Some(v) = map.read().expect("cache lock").get(&key) {
        return v.clone();
    }
    let v = compute();
    map.write().expect("cache lock").insert(key, v.clone());
    v
}

impl OreTower {
    /// Product `p * r` in normal form.
    pub fn mul(&self, p: &SkewPoly, r: &SkewPoly) -> Result<SkewPoly> {
        self.check(p)?;
        self.check(r)?;
        Ok(self.mul_nf(p, r))
    }

    pub fn pow(&self, p: &SkewPoly, k: u32) -> Result<SkewPoly> {
        self.check(p)?;
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul_nf(&acc, p);
        }
        Ok(acc)
    }

    /// `p r - r p`.
    pub fn commutator(&self, p: &SkewPoly, r: &SkewPoly) -> Result<SkewPoly> {
        Ok(self.mul(p, r)?.sub(&self.mul(r, p)?))
    }

    pub(crate) fn mul_nf(&self, p: &SkewPoly, r: &SkewPoly) -> SkewPoly {
        let mut out = SkewPoly::zero();
        if r.is_zero() {
            return out;
        }
        for (e, beta) in p.terms() {
            let mut cur = r.clone();
            for k in (0..e.support()).rev() {
                for _ in 0..e.exponent(k) {
                    cur = self.var_mul(k, &cur);
                }
            }
            for (m, b) in cur.terms() {
                out.add_term(m.clone(), beta.mul(b));
            }
        }
        out
    }

    /// `x_k * p`.
    fn var_mul(&self, k: usize, p: &SkewPoly) -> SkewPoly {
        let mut out = SkewPoly::zero();
        for (f, gamma) in p.terms() {
            let s = self.level_sigma_base(k, gamma);
            if !s.is_zero() {
                for (m, b) in self.var_mono(k, f).terms() {
                    out.add_term(m.clone(), s.mul(b));
                }
            }
            out.add_term(f.clone(), self.level_delta_base(k, gamma));
        }
        out
    }

    /// `x_k * x^f`.
    fn var_mono(&self, k: usize, f: &Monomial) -> SkewPoly {
        let one = self.base().one();
        let bumped = f.with_exponent(k, f.exponent(k) + 1);
        let low = f.below(k);
        if low.is_one() {
            return SkewPoly::term(one, bumped);
        }
        cached(&self.cache.var_mono, (k, f.clone()), || {
            let s = self.sigma_mono(k, &low);
            let d = self.delta_mono(k, &low);
            s.join_upper(k, &bumped).add(&d.join_upper(k, f))
        })
    }

    /// `sigma_k(x_j)` as a polynomial.
    fn sigma_var(&self, k: usize, j: usize) -> SkewPoly {
        let img = &self.level(k).sigma_vars[j];
        let mut p = img.c.clone();
        p.add_term(Monomial::var(j), img.a.clone());
        p
    }

    /// `sigma_k(x^m)` for `m` supported below `k`.
    fn sigma_mono(&self, k: usize, m: &Monomial) -> SkewPoly {
        let Some(j) = m.first_var() else {
            return self.one();
        };
        cached(&self.cache.sigma_mono, (k, m.clone()), || {
            let rest = m.with_exponent(j, m.exponent(j) - 1);
            self.mul_nf(&self.sigma_var(k, j), &self.sigma_mono(k, &rest))
        })
    }

    /// `delta_k(x^m)` for `m` supported below `k`.
    fn delta_mono(&self, k: usize, m: &Monomial) -> SkewPoly {
        let Some(j) = m.first_var() else {
            return SkewPoly::zero();
        };
        cached(&self.cache.delta_mono, (k, m.clone()), || {
            let rest = m.with_exponent(j, m.exponent(j) - 1);
            let rest_poly = SkewPoly::term(self.base().one(), rest.clone());
            let a = self.mul_nf(&self.sigma_var(k, j), &self.delta_mono(k, &rest));
            let b = self.mul_nf(&self.level(k).delta_vars[j], &rest_poly);
            a.add(&b)
        })
    }

    /// Applies `sigma_i` or `delta_i` to a polynomial of `R_{i-1}`.
    pub fn apply_level_map(&self, kind: LevelMap, i: usize, p: &SkewPoly) -> Result<SkewPoly> {
        self.check(p)?;
        if i >= self.height() {
            return Err(Error::TowerMismatch(format!("no level {}", i + 1)));
        }
        if p.support() > i {
            return Err(Error::SupportTooHigh { level: i + 1, var: p.support() });
        }
        Ok(match kind {
            LevelMap::Sigma => self.sigma_nf(i, p),
            LevelMap::Delta => self.delta_nf(i, p),
        })
    }

    pub fn apply_sigma(&self, i: usize, p: &SkewPoly) -> Result<SkewPoly> {
        self.apply_level_map(LevelMap::Sigma, i, p)
    }

    pub fn apply_delta(&self, i: usize, p: &SkewPoly) -> Result<SkewPoly> {
        self.apply_level_map(LevelMap::Delta, i, p)
    }

    pub(crate) fn sigma_nf(&self, i: usize, p: &SkewPoly) -> SkewPoly {
        let mut out = SkewPoly::zero();
        for (m, beta) in p.terms() {
            let s = self.level_sigma_base(i, beta);
            for (mm, b) in self.sigma_mono(i, m).terms() {
                out.add_term(mm.clone(), s.mul(b));
            }
        }
        out
    }

    pub(crate) fn delta_nf(&self, i: usize, p: &SkewPoly) -> SkewPoly {
        let mut out = SkewPoly::zero();
        for (m, beta) in p.terms() {
            let s = self.level_sigma_base(i, beta);
            for (mm, b) in self.delta_mono(i, m).terms() {
                out.add_term(mm.clone(), s.mul(b));
            }
            out.add_term(m.clone(), self.level_delta_base(i, beta));
        }
        out
    }

    /// Generators of `R_n`: the base basis followed by the variables.
    pub fn generators(&self) -> Vec<Generator> {
        let mut out: Vec<Generator> = self.base().basis().into_iter().map(Generator::Base).collect();
        out.extend((0..self.height()).map(Generator::Var));
        out
    }

    /// Tests whether `p` commutes with every base basis element and every variable.
    pub fn is_central(&self, p: &SkewPoly) -> Result<Centrality> {
        self.check(p)?;
        for g in self.generators() {
            let gp = g.as_poly(self);
            if self.mul_nf(&gp, p) != self.mul_nf(p, &gp) {
                return Ok(Centrality::NotCentral(g));
            }
        }
        Ok(Centrality::Central)
    }
}
