//! Dense univariate polynomials over an exact field, stored as ascending
//! coefficient vectors with no trailing zeros (the zero polynomial is empty).

pub(crate) trait Coeff: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; only called on nonzero values.
    fn inv(&self) -> Self;

    fn zero_like(&self) -> Self {
        self.sub(self)
    }

    fn one_like(&self) -> Self {
        self.mul(&self.inv())
    }
}

pub(crate) fn trim<T: Coeff>(p: &mut Vec<T>) {
    while p.last().is_some_and(Coeff::is_zero) {
        p.pop();
    }
}

pub(crate) fn add<T: Coeff>(a: &[T], b: &[T]) -> Vec<T> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out: Vec<T> = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = o.add(s);
    }
    trim(&mut out);
    out
}

pub(crate) fn neg<T: Coeff>(a: &[T]) -> Vec<T> {
    a.iter().map(Coeff::neg).collect()
}

pub(crate) fn sub<T: Coeff>(a: &[T], b: &[T]) -> Vec<T> {
    add(a, &neg(b))
}

pub(crate) fn mul<T: Coeff>(a: &[T], b: &[T]) -> Vec<T> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let zero = a[0].zero_like();
    let mut out = vec![zero; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn scale<T: Coeff>(a: &[T], c: &T) -> Vec<T> {
    if c.is_zero() {
        return Vec::new();
    }
    let mut out: Vec<T> = a.iter().map(|x| x.mul(c)).collect();
    trim(&mut out);
    out
}

/// Euclidean division `a = q*b + r`, `deg r < deg b`. `b` must be nonzero.
pub(crate) fn divrem<T: Coeff>(a: &[T], b: &[T]) -> (Vec<T>, Vec<T>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let lead_inv = b[b.len() - 1].inv();
    let mut rem = a.to_vec();
    let zero = b[0].zero_like();
    let mut quot = vec![zero; a.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem[rem.len() - 1].mul(&lead_inv);
        for (k, bk) in b.iter().enumerate() {
            rem[shift + k] = rem[shift + k].sub(&c.mul(bk));
        }
        quot[shift] = c;
        // the leading coefficient cancels exactly
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub(crate) fn make_monic<T: Coeff>(a: &[T]) -> Vec<T> {
    match a.last() {
        None => Vec::new(),
        Some(l) => scale(a, &l.inv()),
    }
}

/// Monic gcd; gcd(0, 0) = 0.
pub(crate) fn gcd<T: Coeff>(a: &[T], b: &[T]) -> Vec<T> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    make_monic(&x)
}

/// Returns `s` with `s*a = 1 mod m`, or `None` when `a` and `m` are not coprime.
pub(crate) fn inverse_mod<T: Coeff>(a: &[T], m: &[T]) -> Option<Vec<T>> {
    let (_, a) = divrem(a, m);
    if a.is_empty() {
        return None;
    }
    let one = vec![a[a.len() - 1].one_like()];
    // invariant: s_i * a = r_i (mod m)
    let (mut r0, mut r1) = (m.to_vec(), a);
    let (mut s0, mut s1): (Vec<T>, Vec<T>) = (Vec::new(), one);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].inv();
    let (_, s) = divrem(&scale(&s0, &c), m);
    Some(s)
}

/// Horner evaluation at a point of a (possibly larger) ring.
pub(crate) fn eval_with<T, U, F, G>(p: &[T], x: &U, zero: U, embed: F, mut mul_add: G) -> U
where
    F: Fn(&T) -> U,
    G: FnMut(&U, &U, &U) -> U,
{
    let mut acc = zero;
    for c in p.iter().rev() {
        acc = mul_add(&acc, x, &embed(c));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn poly(c: &[i64]) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = c.iter().map(|&x| q(x)).collect();
        trim(&mut v);
        v
    }

    #[test]
    fn divrem_reconstructs() {
        let a = poly(&[-1, 0, 0, 1]);
        let b = poly(&[-1, 1]);
        let (qq, r) = divrem(&a, &b);
        assert!(r.is_empty());
        assert_eq!(qq, poly(&[1, 1, 1]));
    }

    #[test]
    fn gcd_is_monic() {
        // (t^2-1) and (2t-2) share t-1
        let g = gcd(&poly(&[-1, 0, 1]), &poly(&[-2, 2]));
        assert_eq!(g, poly(&[-1, 1]));
    }

    #[test]
    fn inverse_mod_cyclotomic_three() {
        // z mod z^2+z+1 has inverse -z-1
        let m = poly(&[1, 1, 1]);
        let inv = inverse_mod(&poly(&[0, 1]), &m).unwrap();
        assert_eq!(inv, poly(&[-1, -1]));
        assert!(inverse_mod(&poly(&[1, 1, 1]), &m).is_none());
    }
}
