//! Ring homomorphisms between towers over the same base, given by a base map
//! and the images of the variables.

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::skewpoly::{Monomial, SkewPoly};
use crate::tower::{BaseMap, OreTower};

/// A multiplicative map: `beta x_1^{e_1} ... x_k^{e_k} -> base(beta) img_1^{e_1} ... img_k^{e_k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RingMap {
    pub base: BaseMap,
    pub var_images: Vec<SkewPoly>,
}

impl RingMap {
    /// Substitution `x_j -> images[j]` fixing the base.
    pub fn substitution(var_images: Vec<SkewPoly>) -> RingMap {
        RingMap { base: BaseMap::Identity, var_images }
    }
}

impl OreTower {
    /// Applies `map` to `p`, multiplying the images in this tower.
    pub fn apply_ring_map(&self, map: &RingMap, p: &SkewPoly) -> Result<SkewPoly> {
        if p.support() > map.var_images.len() {
            return Err(Error::SupportTooHigh { level: map.var_images.len() + 1, var: p.support() });
        }
        for img in &map.var_images {
            self.check(img)?;
        }
        Ok(self.apply_ring_map_nf(map, p))
    }

    pub(crate) fn apply_ring_map_nf(&self, map: &RingMap, p: &SkewPoly) -> SkewPoly {
        let mut out = SkewPoly::zero();
        for (m, beta) in p.terms() {
            let mut acc = SkewPoly::constant(self.apply_base_sigma(&map.base, beta));
            for (j, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    acc = self.mul_nf(&acc, &map.var_images[j]);
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// `sigma_i` as a ring map on `R_{i-1}`.
    pub fn level_ring_map(&self, i: usize) -> RingMap {
        let level = self.level(i);
        let var_images = level
            .sigma_vars
            .iter()
            .enumerate()
            .map(|(j, img)| {
                let mut p = img.c.clone();
                p.add_term(Monomial::var(j), img.a.clone());
                p
            })
            .collect();
        RingMap { base: level.sigma_base.clone(), var_images }
    }

    /// Inverse of a bijective base automorphism.
    pub fn inverse_base_map(&self, map: &BaseMap) -> Result<BaseMap> {
        let not_bijective = || Error::HypothesisViolation(format!("{map:?} is not invertible"));
        match map {
            BaseMap::Identity => Ok(BaseMap::Identity),
            BaseMap::Zero => Err(not_bijective()),
            BaseMap::Linear(l) => l.inverse().map(BaseMap::Linear).ok_or_else(not_bijective),
            BaseMap::Generator(w) => match self.field() {
                Field::Cyclotomic(n) => {
                    let n = *n as u64;
                    let z = self.field().generator().ok_or_else(not_bijective)?;
                    let k = (1..n).find(|&k| z.pow_u64(k) == *w).ok_or_else(not_bijective)?;
                    let inv = (1..n).find(|&j| (j * k) % n == 1).ok_or_else(not_bijective)?;
                    Ok(BaseMap::Generator(z.pow_u64(inv)))
                }
                Field::Function(_) => {
                    let (num, den) = w.generator_expansion().ok_or_else(not_bijective)?;
                    if num.len() > 2 || den.len() > 2 {
                        return Err(not_bijective());
                    }
                    let t = self.field().generator().ok_or_else(not_bijective)?;
                    let coef = |p: &[Scalar], k: usize| {
                        self.field().embed(&p.get(k).cloned().unwrap_or_else(|| Scalar::integer(0)))
                    };
                    // w = (a t + b) / (c t + d), inverse (d t - b) / (-c t + a)
                    let (a, b) = (coef(&num, 1)?, coef(&num, 0)?);
                    let (c, d) = (coef(&den, 1)?, coef(&den, 0)?);
                    let top = &(&d * &t) - &b;
                    let bottom = &a - &(&c * &t);
                    Ok(BaseMap::Generator(top.checked_div(&bottom)?))
                }
                _ => Err(not_bijective()),
            },
        }
    }

    /// `sigma_i^{-1}` on `R_{i-1}`: `x_j -> b x_j - sigma^{-1}(a^{-1} c)` with
    /// `b = sigma^{-1}(a^{-1})`, built from the lowest variable up.
    pub fn sigma_inverse(&self, i: usize) -> Result<RingMap> {
        let level = self.level(i);
        let base = self.inverse_base_map(&level.sigma_base)?;
        let mut inv = RingMap { base, var_images: Vec::new() };
        for (j, img) in level.sigma_vars.iter().enumerate() {
            let a_inv = img.a.inverse().ok_or_else(|| {
                Error::HypothesisViolation(format!("level {}: a for {} is not invertible", i + 1, self.var_name(j)))
            })?;
            let b = self.apply_base_sigma(&inv.base, &a_inv);
            let shifted = self.apply_ring_map_nf(&inv, &img.c.left_scale(&a_inv));
            let image = SkewPoly::term(b, Monomial::var(j)).sub(&shifted);
            inv.var_images.push(image);
        }
        Ok(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn sigma_inverse_undoes_sigma() {
        let t = presets::graded_three().unwrap();
        let inv = t.sigma_inverse(2).unwrap();
        for j in 0..2 {
            let s = t.apply_sigma(2, &t.var(j)).unwrap();
            assert_eq!(t.apply_ring_map(&inv, &s).unwrap(), t.var(j));
        }
    }

    #[test]
    fn cyclotomic_inverse() {
        let t = presets::cyclotomic_five().unwrap();
        let inv = t.inverse_base_map(&t.level(0).sigma_base).unwrap();
        let z = t.field().generator().unwrap();
        assert_eq!(inv, BaseMap::Generator(z.pow_u64(3)));
    }
}
