use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::upoly::{self, Coeff};

impl Coeff for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

pub(crate) fn euler_phi(n: u32) -> usize {
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi as usize
}

fn compute_cyclotomic(n: u32) -> Vec<BigRational> {
    // Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}
    let mut num = vec![BigRational::one()];
    let mut den = vec![BigRational::one()];
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let mut factor = vec![BigRational::zero(); d as usize + 1];
        factor[0] = -BigRational::one();
        factor[d as usize] = BigRational::one();
        match mobius(n / d) {
            1 => num = upoly::mul(&num, &factor),
            -1 => den = upoly::mul(&den, &factor),
            _ => {}
        }
    }
    let (q, r) = upoly::divrem(&num, &den);
    debug_assert!(r.is_empty());
    q
}

/// The n-th cyclotomic polynomial as ascending rational coefficients, cached per order.
pub(crate) fn cyclotomic_polynomial(n: u32) -> Arc<Vec<BigRational>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigRational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic(n));
    cache.lock().unwrap().insert(n, p.clone());
    p
}

/// Element of Q(zeta_n), coefficients of 1, zeta, ..., zeta^{phi(n)-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    /// Reduces an arbitrary coefficient vector modulo Phi_n.
    pub fn from_poly(order: u32, coeffs: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let mut c = coeffs;
        upoly::trim(&mut c);
        let (_, mut r) = upoly::divrem(&c, &phi);
        r.resize(phi.len() - 1, BigRational::zero());
        Cyclotomic { order, coeffs: r }
    }

    pub fn from_rational(order: u32, r: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); euler_phi(order)];
        coeffs[0] = r;
        Cyclotomic { order, coeffs }
    }

    pub fn generator(order: u32) -> Self {
        Self::from_poly(order, vec![BigRational::zero(), BigRational::one()])
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `Some(r)` when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub(crate) fn trimmed(&self) -> Vec<BigRational> {
        let mut c = self.coeffs.clone();
        upoly::trim(&mut c);
        c
    }

    pub fn add(&self, o: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Cyclotomic { order: self.order, coeffs }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        Cyclotomic { order: self.order, coeffs }
    }

    pub fn neg(&self) -> Self {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_poly(self.order, upoly::mul(&self.trimmed(), &o.trimmed()))
    }

    pub fn inv(&self) -> Option<Self> {
        let phi = cyclotomic_polynomial(self.order);
        upoly::inverse_mod(&self.trimmed(), &phi).map(|c| Self::from_poly(self.order, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ints(p: &[BigRational]) -> Vec<BigInt> {
        p.iter().map(|c| c.to_integer()).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        let v = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(ints(&cyclotomic_polynomial(1)), v(&[-1, 1]));
        assert_eq!(ints(&cyclotomic_polynomial(2)), v(&[1, 1]));
        assert_eq!(ints(&cyclotomic_polynomial(3)), v(&[1, 1, 1]));
        assert_eq!(ints(&cyclotomic_polynomial(4)), v(&[1, 0, 1]));
        assert_eq!(ints(&cyclotomic_polynomial(6)), v(&[1, -1, 1]));
        assert_eq!(ints(&cyclotomic_polynomial(12)), v(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn phi_matches_degree() {
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, euler_phi(n));
        }
    }

    #[test]
    fn zeta_cubed_is_one() {
        let z = Cyclotomic::generator(3);
        let z3 = z.mul(&z).mul(&z);
        assert_eq!(z3.as_rational(), Some(BigRational::one()));
    }
}
