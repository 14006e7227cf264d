//! Standard towers used throughout the documentation, tests and benchmarks.

use crate::error::Result;
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::skewpoly::SkewPoly;
use crate::tower::{BaseMap, BaseRing, OreTower, TowerLevel};

fn first_level(base: &BaseRing) -> TowerLevel {
    TowerLevel::plain("x1", base, 0)
}

/// `k[x1][x2; sigma]` with `sigma(x1) = lambda x1`, so `x2 x1 = lambda x1 x2`.
pub fn quantum_plane(field: Field, lambda: Scalar) -> Result<OreTower> {
    let base = BaseRing::Field(field);
    let mut top = TowerLevel::plain("x2", &base, 1);
    top.sigma_vars[0].a = base.scalar(&lambda);
    OreTower::from_levels(base.clone(), vec![first_level(&base), top])
}

/// `k[x1][x2; sigma, delta]` with `sigma(x1) = q x1`, `delta(x1) = 1`, declared q-skew for `q`.
pub fn quantum_weyl(field: Field, q: Scalar) -> Result<OreTower> {
    let base = BaseRing::Field(field);
    let mut top = TowerLevel::plain("x2", &base, 1);
    top.sigma_vars[0].a = base.scalar(&q);
    top.delta_vars[0] = SkewPoly::constant(base.one());
    top.q = Some(q);
    OreTower::from_levels(base.clone(), vec![first_level(&base), top])
}

/// Quantum Weyl algebra over `Q(q)` with generic `q`.
pub fn quantum_weyl_generic() -> Result<OreTower> {
    let field = Field::function(Field::Rational, "q")?;
    let q = field.generator().expect("function field generator");
    quantum_weyl(field, q)
}

/// Weyl algebra `k[x1][x2; delta = d/dx1]` (`sigma = id`, no declared q).
pub fn weyl(field: Field) -> Result<OreTower> {
    let base = BaseRing::Field(field);
    let mut top = TowerLevel::plain("x2", &base, 1);
    top.delta_vars[0] = SkewPoly::constant(base.one());
    OreTower::from_levels(base.clone(), vec![first_level(&base), top])
}

/// `Mat_2(Q(q))[x; sigma, delta]` with `sigma` conjugation by `diag(1, q)` and
/// `delta(r) = e12 r - sigma(r) e12`, q-skew for `q`.
pub fn inner_matrix() -> Result<OreTower> {
    let field = Field::function(Field::Rational, "q")?;
    let q = field.generator().expect("function field generator");
    let base = BaseRing::Matrix { field: field.clone(), size: 2 };
    let d = Matrix::from_rows(vec![vec![field.one(), field.zero()], vec![field.zero(), q.clone()]])?;
    let sigma = BaseMap::conjugation(&d)?;
    let delta = BaseMap::inner_derivation(&sigma, &Matrix::unit(&field, 2, 0, 1))?;
    let mut level = TowerLevel::plain("x1", &base, 0);
    level.sigma_base = sigma;
    level.delta_base = delta;
    level.q = Some(q);
    OreTower::from_levels(base, vec![level])
}

/// `Q(z)[x; sigma, delta]` over the fifth cyclotomic field, `sigma(z) = z^2`,
/// `delta = e (sigma - id)` with `e = z - z^2 - z^3 + z^4` (so `sigma(e) = -e`),
/// q-skew for `q = -1`.
pub fn cyclotomic_five() -> Result<OreTower> {
    let field = Field::cyclotomic(5)?;
    let z = field.generator().expect("cyclotomic generator");
    let z2 = &z * &z;
    let e = cyclotomic_five_shift();
    let d = &e * &(&z2 - &z);
    let base = BaseRing::Field(field);
    let mut level = TowerLevel::plain("x1", &base, 0);
    level.sigma_base = BaseMap::Generator(z2);
    level.delta_base = BaseMap::Generator(d);
    level.q = Some(Scalar::integer(-1));
    OreTower::from_levels(base, vec![level])
}

/// The element `z - z^2 - z^3 + z^4` of `Q(zeta_5)`.
pub fn cyclotomic_five_shift() -> Scalar {
    let z = Field::Cyclotomic(5).generator().expect("cyclotomic generator");
    let p = |k: i64| z.pow(k).expect("nonzero");
    &(&(&p(1) - &p(2)) - &p(3)) + &p(4)
}

/// Three-level tower over `Q`: `x1, x2` commute; `sigma3(x1) = 2 x1`,
/// `sigma3(x2) = 5 x2 + x1`, `delta3 = sigma3 - id` on the variables.
pub fn graded_three() -> Result<OreTower> {
    let base = BaseRing::Field(Field::Rational);
    let one = base.one();
    let x1 = SkewPoly::term(one.clone(), crate::skewpoly::Monomial::var(0));
    let x2 = SkewPoly::term(one.clone(), crate::skewpoly::Monomial::var(1));
    let mut top = TowerLevel::plain("x3", &base, 2);
    top.sigma_vars[0].a = base.scalar(&Scalar::integer(2));
    top.sigma_vars[1].a = base.scalar(&Scalar::integer(5));
    top.sigma_vars[1].c = x1.clone();
    top.delta_vars[0] = x1.clone();
    top.delta_vars[1] = x2.left_scale(&base.scalar(&Scalar::integer(4))).add(&x1);
    OreTower::from_levels(base.clone(), vec![first_level(&base), TowerLevel::plain("x2", &base, 1), top])
}

/// Quantum `2 x 2` matrices over `Q(q)` as `a, b, c, d`: `ba = q ab`, `ca = q ac`,
/// `cb = bc`, `db = q bd`, `dc = q cd`, `da = ad + (q - q^-1) bc`.
/// The top derivation is q-skew for `q^-2`.
pub fn quantum_matrices() -> Result<OreTower> {
    let field = Field::function(Field::Rational, "q")?;
    let q = field.generator().expect("function field generator");
    let q_inv = q.inv()?;
    let base = BaseRing::Field(field);
    let mut b = TowerLevel::plain("b", &base, 1);
    b.sigma_vars[0].a = base.scalar(&q);
    let mut c = TowerLevel::plain("c", &base, 2);
    c.sigma_vars[0].a = base.scalar(&q);
    let mut d = TowerLevel::plain("d", &base, 3);
    d.sigma_vars[1].a = base.scalar(&q);
    d.sigma_vars[2].a = base.scalar(&q);
    let bc = crate::skewpoly::Monomial::new(vec![0, 1, 1]);
    d.delta_vars[0] = SkewPoly::term(base.scalar(&(&q - &q_inv)), bc);
    d.q = Some(&q_inv * &q_inv);
    OreTower::from_levels(base.clone(), vec![TowerLevel::plain("a", &base, 0), b, c, d])
}
