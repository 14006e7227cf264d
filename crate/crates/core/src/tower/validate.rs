//! Exact identity checks on tower presentations.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{BaseMap, OreTower};
use crate::error::{Error, Result};
use crate::matrix::{BaseElement, Matrix};
use crate::scalar::{Field, Scalar};
use crate::skewpoly::{Generator, SkewPoly};

/// The identities verified for each level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    /// (a) `sigma(uv) = sigma(u) sigma(v)`.
    SigmaMultiplicative,
    /// (b) `sigma` is bijective on `R_{i-1}`.
    SigmaBijective,
    /// (c) `delta(uv) = sigma(u) delta(v) + delta(u) v`.
    TwistedLeibniz,
    /// (d) `delta sigma = q sigma delta`.
    QSkew,
    /// (e) `sigma(q) = q`, `delta(q) = 0`, `q` central.
    QInvariant,
}

impl Check {
    pub fn label(&self) -> &'static str {
        match self {
            Check::SigmaMultiplicative => "sigma multiplicative",
            Check::SigmaBijective => "sigma bijective",
            Check::TwistedLeibniz => "twisted Leibniz rule",
            Check::QSkew => "q-skew relation",
            Check::QInvariant => "q fixed by sigma and killed by delta",
        }
    }
}

/// First failing identity of one check, both sides rendered.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckFailure {
    pub check: Check,
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {} != {}", self.check.label(), self.identity, self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelReport {
    /// 1-based level number.
    pub level: usize,
    pub name: String,
    pub passed: Vec<Check>,
    pub failures: Vec<CheckFailure>,
    /// `Some(true)` when `q` is declared and the q-skew relation holds.
    pub q_skew: Option<bool>,
}

impl LevelReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub levels: Vec<LevelReport>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.levels.iter().all(LevelReport::is_valid)
    }

    pub fn first_failure(&self) -> Option<(usize, &CheckFailure)> {
        self.levels.iter().find_map(|l| l.failures.first().map(|f| (l.level, f)))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.levels {
            let status = if l.is_valid() { "ok" } else { "FAILED" };
            write!(f, "level {} ({}): {status}", l.level, l.name)?;
            match l.q_skew {
                Some(true) => write!(f, ", q-skew")?,
                Some(false) => write!(f, ", not q-skew")?,
                None => {}
            }
            writeln!(f)?;
            for fail in &l.failures {
                writeln!(f, "  {fail}")?;
            }
        }
        Ok(())
    }
}

struct Level<'a> {
    tower: &'a OreTower,
    i: usize,
    failures: Vec<CheckFailure>,
}

impl Level<'_> {
    fn render(&self, p: &SkewPoly) -> String {
        self.tower.render(p)
    }

    /// Records a failure of `check` unless one is already recorded.
    fn expect_eq(&mut self, check: Check, identity: impl FnOnce() -> String, lhs: &SkewPoly, rhs: &SkewPoly) {
        if lhs == rhs || self.failures.iter().any(|f| f.check == check) {
            return;
        }
        let failure = CheckFailure { check, identity: identity(), lhs: self.render(lhs), rhs: self.render(rhs) };
        self.failures.push(failure);
    }

    fn sigma(&self, p: &SkewPoly) -> SkewPoly {
        self.tower.sigma_nf(self.i, p)
    }

    fn delta(&self, p: &SkewPoly) -> SkewPoly {
        self.tower.delta_nf(self.i, p)
    }

    fn mul(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        self.tower.mul_nf(a, b)
    }

    fn pair(&mut self, u: &SkewPoly, v: &SkewPoly) {
        let t = self.tower;
        let uv = self.mul(u, v);
        let su = self.sigma(u);
        let sv = self.sigma(v);
        let lhs = self.sigma(&uv);
        let rhs = self.mul(&su, &sv);
        let name = |p: &SkewPoly| t.render(p);
        self.expect_eq(
            Check::SigmaMultiplicative,
            || format!("sigma({} * {}) = sigma({}) sigma({})", name(u), name(v), name(u), name(v)),
            &lhs,
            &rhs,
        );
        let lhs = self.delta(&uv);
        let rhs = self.mul(&su, &self.delta(v)).add(&self.mul(&self.delta(u), v));
        self.expect_eq(
            Check::TwistedLeibniz,
            || format!("delta({} * {}) = sigma(u) delta(v) + delta(u) v", name(u), name(v)),
            &lhs,
            &rhs,
        );
    }

    fn q_skew(&mut self, g: &SkewPoly, q: &SkewPoly) {
        let lhs = self.delta(&self.sigma(g));
        let rhs = self.mul(q, &self.sigma(&self.delta(g)));
        let name = self.render(g);
        self.expect_eq(Check::QSkew, || format!("delta(sigma({name})) = q sigma(delta({name}))"), &lhs, &rhs);
    }
}

fn generator_polys(t: &OreTower, below: usize) -> Vec<SkewPoly> {
    let mut out: Vec<SkewPoly> = t.base().basis().into_iter().map(SkewPoly::constant).collect();
    out.extend((0..below).map(|j| t.var(j)));
    out
}

/// `true` when the field map `generator -> w` is onto.
fn generator_map_bijective(field: &Field, w: &Scalar) -> bool {
    match field {
        // construction guarantees w is a primitive root of unity
        Field::Cyclotomic(_) => true,
        Field::Function(_) => {
            let Some((num, den)) = w.generator_expansion() else {
                return false;
            };
            if num.len() > 2 || den.len() > 2 {
                return false;
            }
            let coef = |p: &[Scalar], k: usize| p.get(k).cloned().unwrap_or_else(|| Scalar::integer(0));
            let det = &(&coef(&num, 1) * &coef(&den, 0)) - &(&coef(&num, 0) * &coef(&den, 1));
            !det.is_zero()
        }
        _ => true,
    }
}

pub(crate) fn base_map_bijective(t: &OreTower, map: &BaseMap) -> bool {
    match map {
        BaseMap::Identity => true,
        BaseMap::Zero => false,
        BaseMap::Generator(w) => generator_map_bijective(t.field(), w),
        BaseMap::Linear(l) => l.inverse().is_some(),
    }
}

fn validate_level(t: &OreTower, i: usize, sample_budget: usize) -> LevelReport {
    let level = t.level(i);
    let mut lv = Level { tower: t, i, failures: Vec::new() };
    let gens = generator_polys(t, i);
    let q = level.q.as_ref().map(|q| t.scalar(q));

    // (a), (c)
    for u in &gens {
        for v in &gens {
            lv.pair(u, v);
        }
    }
    if sample_budget > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + i as u64);
        for _ in 0..sample_budget {
            let u = t.random_element(&mut rng, i, 2, 3);
            let v = t.random_element(&mut rng, i, 2, 3);
            lv.pair(&u, &v);
            if let Some(q) = &q {
                lv.q_skew(&u, q);
            }
        }
    }

    // (b)
    if !base_map_bijective(t, &level.sigma_base) {
        lv.failures.push(CheckFailure {
            check: Check::SigmaBijective,
            identity: "sigma restricted to the base is onto".into(),
            lhs: format!("{:?}", level.sigma_base),
            rhs: "an automorphism".into(),
        });
    } else if let Some(j) = level.sigma_vars.iter().position(|img| img.a.inverse().is_none()) {
        lv.failures.push(CheckFailure {
            check: Check::SigmaBijective,
            identity: format!("a in sigma({}) is invertible", t.var_name(j)),
            lhs: t.render(&SkewPoly::constant(level.sigma_vars[j].a.clone())),
            rhs: "a unit".into(),
        });
    }

    // (d), (e)
    let mut q_skew = None;
    if let Some(qp) = &q {
        for g in &gens {
            lv.q_skew(g, qp);
        }
        q_skew = Some(!lv.failures.iter().any(|f| f.check == Check::QSkew));
        let sq = lv.sigma(qp);
        lv.expect_eq(Check::QInvariant, || "sigma(q) = q".into(), &sq, qp);
        let dq = lv.delta(qp);
        lv.expect_eq(Check::QInvariant, || "delta(q) = 0".into(), &dq, &SkewPoly::zero());
        for g in &gens {
            let a = lv.mul(g, qp);
            let b = lv.mul(qp, g);
            let name = t.render(g);
            lv.expect_eq(Check::QInvariant, || format!("q * {name} = {name} * q"), &b, &a);
        }
    }

    let mut checks = vec![Check::SigmaMultiplicative, Check::SigmaBijective, Check::TwistedLeibniz];
    if q.is_some() {
        checks.extend([Check::QSkew, Check::QInvariant]);
    }
    let passed = checks.into_iter().filter(|c| !lv.failures.iter().any(|f| f.check == *c)).collect();
    let mut failures = lv.failures;
    failures.sort_by_key(|f| f.check);
    LevelReport { level: i + 1, name: level.name.clone(), passed, failures, q_skew }
}

/// Checks the Ore-extension axioms of every level on generating pairs, plus
/// `sample_budget` pseudo-random pairs per level (fixed seed).
pub fn validate_tower(t: &OreTower, sample_budget: usize) -> ValidationReport {
    ValidationReport { levels: (0..t.height()).map(|i| validate_level(t, i, sample_budget)).collect() }
}

/// Result of [`check_swap_compatibility`].
#[derive(Clone, Debug, PartialEq)]
pub struct SwapCheck {
    /// First generator `r` violating one of the two commutation identities.
    pub witness: Option<Generator>,
    /// Description of the violated identity.
    pub identity: Option<String>,
    /// `delta_{i-1}(lambda) = 0`.
    pub q_preserved: bool,
}

impl SwapCheck {
    pub fn is_ok(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks that level `i` (0-based, `i >= 1`) can be moved below level `i - 1`:
/// `sigma_i sigma_{i-1}(r) = lambda sigma_{i-1} sigma_i(r) lambda^-1` and
/// `sigma_i delta_{i-1}(r) = lambda delta_{i-1} sigma_i(r)` for every base basis
/// element and every variable below `x_{i-1}`.
pub fn check_swap_compatibility(t: &OreTower, i: usize, lambda: &BaseElement) -> Result<SwapCheck> {
    if i == 0 || i >= t.height() {
        return Err(Error::HypothesisViolation(format!("no adjacent pair ending at level {}", i + 1)));
    }
    let img = &t.level(i).sigma_vars[i - 1];
    if !img.c.is_zero() {
        return Err(Error::NotDiagonal { level: i + 1, var: i });
    }
    let lambda = t.base().coerce(lambda)?;
    if img.a != lambda {
        return Err(Error::HypothesisViolation(format!(
            "level {}: sigma({}) is not {} * {}",
            i + 1,
            t.var_name(i - 1),
            t.render(&SkewPoly::constant(lambda.clone())),
            t.var_name(i - 1)
        )));
    }
    let lam_inv = lambda
        .inverse()
        .ok_or_else(|| Error::HypothesisViolation(format!("level {}: lambda is not invertible", i + 1)))?;
    let lam = SkewPoly::constant(lambda.clone());
    let lam_inv = SkewPoly::constant(lam_inv);
    let lower = i - 1;
    let mut witness = None;
    let mut identity = None;
    for r in generator_polys(t, lower) {
        let lhs = t.sigma_nf(i, &t.sigma_nf(lower, &r));
        let inner = t.sigma_nf(lower, &t.sigma_nf(i, &r));
        let rhs = t.mul_nf(&t.mul_nf(&lam, &inner), &lam_inv);
        if lhs != rhs {
            identity = Some(format!(
                "sigma_{a} sigma_{b}(r) = lambda sigma_{b} sigma_{a}(r) lambda^-1: {} != {}",
                t.render(&lhs),
                t.render(&rhs),
                a = i + 1,
                b = lower + 1
            ));
            witness = Some(r);
            break;
        }
        let lhs = t.sigma_nf(i, &t.delta_nf(lower, &r));
        let rhs = t.mul_nf(&lam, &t.delta_nf(lower, &t.sigma_nf(i, &r)));
        if lhs != rhs {
            identity = Some(format!(
                "sigma_{a} delta_{b}(r) = lambda delta_{b} sigma_{a}(r): {} != {}",
                t.render(&lhs),
                t.render(&rhs),
                a = i + 1,
                b = lower + 1
            ));
            witness = Some(r);
            break;
        }
    }
    let witness = witness.map(|r| match r.as_constant() {
        Some(b) => Generator::Base(b.clone()),
        None => Generator::Var(r.support() - 1),
    });
    let q_preserved = t.delta_nf(lower, &lam).is_zero();
    Ok(SwapCheck { witness, identity, q_preserved })
}

/// Least `N <= bound` with `map^N = id` on the base ring.
pub fn map_order(t: &OreTower, map: &BaseMap, bound: u64) -> Option<u64> {
    match map {
        BaseMap::Identity => Some(1),
        BaseMap::Zero => None,
        BaseMap::Linear(l) => {
            let mut p = l.clone();
            for n in 1..=bound {
                if p.is_identity() {
                    return Some(n);
                }
                p = p.mul(l);
            }
            None
        }
        BaseMap::Generator(w) => {
            let g = t.field().generator()?;
            let mut cur = w.clone();
            for n in 1..=bound {
                if cur == g {
                    return Some(n);
                }
                cur = cur.substitute_generator(w)?;
            }
            None
        }
    }
}

impl OreTower {
    /// Pseudo-random element of `R_below` with at most `max_terms` terms of
    /// total degree at most `max_degree`.
    pub fn random_element<R: rand::Rng>(
        &self,
        rng: &mut R,
        below: usize,
        max_degree: u32,
        max_terms: usize,
    ) -> SkewPoly {
        let m = self.base().size();
        let field = self.field();
        let mut out = SkewPoly::zero();
        let terms = rng.gen_range(1..=max_terms.max(1));
        for _ in 0..terms {
            let mut exps = vec![0u32; below];
            let mut budget = rng.gen_range(0..=max_degree);
            while budget > 0 && below > 0 {
                exps[rng.gen_range(0..below)] += 1;
                budget -= 1;
            }
            let coeff = if m == 1 {
                self.base().scalar(&field.sample(rng))
            } else {
                Matrix::from_fn(m, m, |_, _| field.sample(rng))
            };
            out.add_term(crate::skewpoly::Monomial::new(exps), coeff);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::tower::{BaseRing, TowerLevel};

    fn valid(t: &OreTower) -> bool {
        let r = validate_tower(t, 4);
        if !r.is_valid() {
            eprintln!("{r}");
        }
        r.is_valid()
    }

    #[test]
    fn presets_are_valid() {
        assert!(valid(&presets::quantum_plane(Field::Rational, Scalar::integer(2)).unwrap()));
        assert!(valid(&presets::quantum_weyl_generic().unwrap()));
        assert!(valid(&presets::inner_matrix().unwrap()));
        assert!(valid(&presets::cyclotomic_five().unwrap()));
        assert!(valid(&presets::graded_three().unwrap()));
        assert!(valid(&presets::weyl(Field::prime(5).unwrap()).unwrap()));
    }

    #[test]
    fn quantum_weyl_is_q_skew() {
        let t = presets::quantum_weyl_generic().unwrap();
        let r = validate_tower(&t, 0);
        assert_eq!(r.levels[1].q_skew, Some(true));
    }

    #[test]
    fn wrong_delta_breaks_q_skew() {
        let mut t = presets::quantum_weyl_generic().unwrap();
        let mut levels = t.levels().to_vec();
        levels[1].delta_vars[0] = t.var(0);
        t = t.with_levels(levels).unwrap();
        let r = validate_tower(&t, 0);
        assert!(!r.is_valid());
        let (level, fail) = r.first_failure().unwrap();
        assert_eq!(level, 2);
        assert_eq!(fail.check, Check::QSkew);
        // delta sigma (x1) = q x1 while q sigma delta (x1) = q^2 x1
        assert_eq!(fail.lhs, "q * x1");
        assert_eq!(fail.rhs, "q^2 * x1");
    }

    #[test]
    fn swap_compatibility_of_quantum_plane() {
        let t = presets::quantum_plane(Field::Rational, Scalar::integer(2)).unwrap();
        let lam = t.base().scalar(&Scalar::integer(2));
        let c = check_swap_compatibility(&t, 1, &lam).unwrap();
        assert!(c.is_ok());
        assert!(c.q_preserved);
    }

    #[test]
    fn swap_compatibility_fails_on_noncommuting_conjugations() {
        let f = Field::Rational;
        let base = BaseRing::Matrix { field: f.clone(), size: 2 };
        let perm = Matrix::from_rows(vec![vec![f.zero(), f.one()], vec![f.one(), f.zero()]]).unwrap();
        let diag = Matrix::from_rows(vec![vec![f.one(), f.zero()], vec![f.zero(), f.from_i64(2)]]).unwrap();
        let mut l1 = TowerLevel::plain("x1", &base, 0);
        l1.sigma_base = BaseMap::conjugation(&perm).unwrap();
        let mut l2 = TowerLevel::plain("x2", &base, 1);
        l2.sigma_base = BaseMap::conjugation(&diag).unwrap();
        let t = OreTower::from_levels(base.clone(), vec![l1, l2]).unwrap();
        let c = check_swap_compatibility(&t, 1, &base.one()).unwrap();
        // e11 is fixed by both orders of composition; e12 is the first basis element that is not
        assert_eq!(c.witness, Some(Generator::Base(Matrix::unit(&f, 2, 0, 1))));
    }

    #[test]
    fn swap_compatibility_with_derivative_below() {
        // Q(t)[x1; d/dt][x2; sigma2], sigma2(t) = 1/t, sigma2(x1) = -t^2 x1
        let f = Field::function(Field::Rational, "t").unwrap();
        let t = f.generator().unwrap();
        let base = BaseRing::Field(f.clone());
        let mut l1 = TowerLevel::plain("x1", &base, 0);
        l1.delta_base = BaseMap::Generator(f.one());
        let mut l2 = TowerLevel::plain("x2", &base, 1);
        l2.sigma_base = BaseMap::Generator(t.inv().unwrap());
        let lam = base.scalar(&(&t * &t).neg_ref());
        l2.sigma_vars[0].a = lam.clone();
        let tower = OreTower::from_levels(base.clone(), vec![l1, l2]).unwrap();
        let c = check_swap_compatibility(&tower, 1, &lam).unwrap();
        assert!(c.is_ok(), "{:?}", c.identity);
        assert!(!c.q_preserved);
        assert!(valid(&tower));

        // with sigma2 = id and lambda = t the identity sigma2 delta1 = lambda delta1 sigma2 fails at t
        let mut l2 = TowerLevel::plain("x2", &base, 1);
        l2.sigma_vars[0].a = base.scalar(&t);
        let mut l1 = TowerLevel::plain("x1", &base, 0);
        l1.delta_base = BaseMap::Generator(f.one());
        let tower = OreTower::from_levels(base.clone(), vec![l1, l2]).unwrap();
        let c = check_swap_compatibility(&tower, 1, &base.scalar(&t)).unwrap();
        assert_eq!(c.witness, Some(Generator::Base(base.scalar(&t))));
        assert!(!c.q_preserved);
    }

    #[test]
    fn not_diagonal_is_reported() {
        let base = BaseRing::Field(Field::Rational);
        let mut l2 = TowerLevel::plain("x2", &base, 1);
        l2.sigma_vars[0].a = base.scalar(&Scalar::integer(2));
        l2.sigma_vars[0].c = SkewPoly::constant(base.one());
        let t = OreTower::from_levels(base.clone(), vec![TowerLevel::plain("x1", &base, 0), l2]).unwrap();
        let err = check_swap_compatibility(&t, 1, &base.scalar(&Scalar::integer(2))).unwrap_err();
        assert_eq!(err, Error::NotDiagonal { level: 2, var: 1 });
    }

    #[test]
    fn map_orders() {
        let q = OreTower::new(BaseRing::Field(Field::Rational));
        assert_eq!(map_order(&q, &BaseMap::Identity, 10), Some(1));

        let f = Field::Rational;
        let m2 = OreTower::new(BaseRing::Matrix { field: f.clone(), size: 2 });
        let d = Matrix::from_rows(vec![vec![f.one(), f.zero()], vec![f.zero(), f.from_i64(-1)]]).unwrap();
        assert_eq!(map_order(&m2, &BaseMap::conjugation(&d).unwrap(), 10), Some(2));

        let c5 = OreTower::new(BaseRing::Field(Field::Cyclotomic(5)));
        let z = Field::Cyclotomic(5).generator().unwrap();
        assert_eq!(map_order(&c5, &BaseMap::Generator(&z * &z), 10), Some(4));
        assert_eq!(map_order(&c5, &BaseMap::Generator(&z * &z), 3), None);
    }
}
