//! Exact ground fields: Q, cyclotomic fields Q(zeta_n), prime fields GF(p) and
//! univariate function fields K(t) over any of those.
//!
//! Every [`Scalar`] carries enough information to know its field. Rational
//! values act as universal constants: combining a rational with an element of
//! another field embeds the rational first, so literals such as `2` can be
//! used everywhere. Combining elements of two unrelated fields is a
//! programming error and panics.

mod cyclotomic;
mod prime;
mod ratfunc;
pub(crate) mod upoly;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

pub use cyclotomic::Cyclotomic;
pub use prime::PrimeResidue;
pub use ratfunc::{FunctionField, RationalFunction};

use crate::error::{Error, Result};

/// Descriptor of a supported ground field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Cyclotomic(u32),
    Prime(u64),
    Function(Arc<FunctionField>),
}

impl Field {
    pub fn cyclotomic(n: u32) -> Result<Field> {
        if n == 0 {
            return Err(Error::InvalidField("cyclotomic order must be positive".into()));
        }
        Ok(Field::Cyclotomic(n))
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !prime::is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn function(inner: Field, var: impl Into<String>) -> Result<Field> {
        if matches!(inner, Field::Function(_)) {
            return Err(Error::InvalidField("function fields in more than one indeterminate are not supported".into()));
        }
        Ok(Field::Function(Arc::new(FunctionField { inner, var: var.into() })))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(p) => *p,
            Field::Function(f) => f.inner.characteristic(),
            _ => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.embed(&Scalar::Rational(BigRational::from_integer(n.into()))).expect("integers embed in every field")
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        self.embed(&Scalar::Rational(BigRational::new(num.into(), den.into())))
    }

    /// Name of the adjoined generator (`z` for cyclotomic fields, the declared
    /// indeterminate for function fields).
    pub fn generator_name(&self) -> Option<&str> {
        match self {
            Field::Cyclotomic(n) if *n > 2 => Some("z"),
            Field::Function(f) => Some(&f.var),
            _ => None,
        }
    }

    /// The generator over the prime field (zeta_n or t).
    pub fn generator(&self) -> Option<Scalar> {
        match self {
            Field::Cyclotomic(n) if *n > 2 => Some(Scalar::Cyclotomic(Cyclotomic::generator(*n))),
            Field::Function(f) => Some(Scalar::Function(RationalFunction::generator(f.clone()))),
            _ => None,
        }
    }

    /// Spanning set used for identity checks: the power basis of Q(zeta_n),
    /// `{1, t}` for K(t) (maps are K-linear), `{1}` otherwise.
    pub fn basis(&self) -> Vec<Scalar> {
        match self {
            Field::Cyclotomic(n) => {
                let z = Scalar::Cyclotomic(Cyclotomic::generator(*n));
                let mut out = vec![self.one()];
                for _ in 1..cyclotomic::euler_phi(*n) {
                    let next = out.last().unwrap() * &z;
                    out.push(next);
                }
                out
            }
            Field::Function(f) => {
                vec![self.one(), Scalar::Function(RationalFunction::generator(f.clone()))]
            }
            _ => vec![self.one()],
        }
    }

    /// Maps a scalar of a subfield into this field.
    pub fn embed(&self, s: &Scalar) -> Result<Scalar> {
        let mismatch = || Error::FieldMismatch(format!("{} is not an element of {}", s, self));
        match (self, s) {
            (Field::Rational, Scalar::Rational(_)) => Ok(s.clone()),
            (Field::Cyclotomic(n), Scalar::Rational(r)) => {
                Ok(Scalar::Cyclotomic(Cyclotomic::from_rational(*n, r.clone())))
            }
            (Field::Cyclotomic(n), Scalar::Cyclotomic(c)) if c.order() == *n => Ok(s.clone()),
            (Field::Prime(p), Scalar::Rational(r)) => {
                let m = BigInt::from(*p);
                let num = r.numer().mod_floor(&m).to_i128().unwrap();
                let den = r.denom().mod_floor(&m).to_i128().unwrap();
                let den = PrimeResidue::new(*p, den).inv().ok_or(Error::DivisionByZero)?;
                Ok(Scalar::Prime(PrimeResidue::new(*p, num) * den))
            }
            (Field::Prime(p), Scalar::Prime(x)) if x.modulus() == *p => Ok(s.clone()),
            (Field::Function(f), Scalar::Function(g)) if **f == **g.field() => Ok(s.clone()),
            (Field::Function(f), _) => {
                let c = f.inner.embed(s).map_err(|_| mismatch())?;
                Ok(Scalar::Function(RationalFunction::constant(f.clone(), c)))
            }
            _ => Err(mismatch()),
        }
    }

    /// Small pseudo-random element, used by sampled identity checks.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Scalar {
        match self {
            Field::Rational => {
                let n: i64 = rng.gen_range(-3..=3);
                let d: i64 = rng.gen_range(1..=2);
                self.from_ratio(n, d).unwrap()
            }
            Field::Prime(p) => Scalar::Prime(PrimeResidue::new(*p, rng.gen_range(0..*p) as i128)),
            Field::Cyclotomic(_) => {
                let mut acc = self.zero();
                for b in self.basis() {
                    let c = self.from_i64(rng.gen_range(-2..=2));
                    acc = &acc + &(&c * &b);
                }
                acc
            }
            Field::Function(f) => {
                let t = Scalar::Function(RationalFunction::generator(f.clone()));
                let a = self.embed(&f.inner.sample(rng)).unwrap();
                let b = self.embed(&f.inner.sample(rng)).unwrap();
                &(&a * &t) + &b
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Cyclotomic(n) => write!(f, "cyclotomic({n})"),
            Field::Prime(p) => write!(f, "gf({p})"),
            Field::Function(ff) => write!(f, "{}({})", ff.inner, ff.var),
        }
    }
}

/// Element of one of the supported exact fields, always in canonical form.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Cyclotomic(Cyclotomic),
    Function(RationalFunction),
    Prime(PrimeResidue),
}

impl Scalar {
    pub fn integer(n: i64) -> Scalar {
        Scalar::Rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Result<Scalar> {
        Field::Rational.from_ratio(num, den)
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Cyclotomic(c) => Field::Cyclotomic(c.order()),
            Scalar::Prime(x) => Field::Prime(x.modulus()),
            Scalar::Function(f) => Field::Function(f.field().clone()),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Scalar::Rational(_) => 0,
            Scalar::Cyclotomic(_) | Scalar::Prime(_) => 1,
            Scalar::Function(_) => 2,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Cyclotomic(c) => c.is_zero(),
            Scalar::Prime(x) => x.residue() == 0,
            Scalar::Function(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::integer(1)
    }

    /// Rational value of a prime-field-free constant, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Rational(r) => Some(r.clone()),
            Scalar::Cyclotomic(c) => c.as_rational(),
            Scalar::Function(f) => f.as_constant().and_then(|c| c.as_rational()),
            Scalar::Prime(_) => None,
        }
    }

    fn unify(&self, other: &Scalar) -> (Scalar, Scalar) {
        let lift = |target: &Scalar, s: &Scalar| {
            target.field().embed(s).unwrap_or_else(|e| panic!("scalar arithmetic across fields: {e}"))
        };
        if self.rank() >= other.rank() {
            (self.clone(), lift(self, other))
        } else {
            (lift(other, self), other.clone())
        }
    }

    pub fn add_ref(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) if a.order() == b.order() => Scalar::Cyclotomic(a.add(b)),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.modulus() == b.modulus() => Scalar::Prime(*a + *b),
            (Scalar::Function(a), Scalar::Function(b)) if a.field() == b.field() => Scalar::Function(a.add(b)),
            _ => {
                let (a, b) = self.unify(o);
                a.add_ref(&b)
            }
        }
    }

    pub fn mul_ref(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) if a.order() == b.order() => Scalar::Cyclotomic(a.mul(b)),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.modulus() == b.modulus() => Scalar::Prime(*a * *b),
            (Scalar::Function(a), Scalar::Function(b)) if a.field() == b.field() => Scalar::Function(a.mul(b)),
            _ => {
                let (a, b) = self.unify(o);
                a.mul_ref(&b)
            }
        }
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Cyclotomic(a) => Scalar::Cyclotomic(a.neg()),
            Scalar::Prime(a) => Scalar::Prime(-*a),
            Scalar::Function(a) => Scalar::Function(a.neg()),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        let out = match self {
            Scalar::Rational(a) => (!a.is_zero()).then(|| Scalar::Rational(a.recip())),
            Scalar::Cyclotomic(a) => a.inv().map(Scalar::Cyclotomic),
            Scalar::Prime(a) => a.inv().map(Scalar::Prime),
            Scalar::Function(a) => a.inv().map(Scalar::Function),
        };
        out.ok_or(Error::DivisionByZero)
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(base.pow_u64(e.unsigned_abs()))
    }

    pub fn pow_u64(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Applies the field endomorphism determined by `generator -> image`
    /// (constants are fixed). `None` when the image makes a denominator vanish.
    pub fn substitute_generator(&self, image: &Scalar) -> Option<Scalar> {
        match self {
            Scalar::Rational(_) | Scalar::Prime(_) => Some(self.clone()),
            Scalar::Cyclotomic(c) => {
                let field = self.field();
                let image = field.embed(image).ok()?;
                let coeffs: Vec<Scalar> = c.coeffs().iter().cloned().map(Scalar::Rational).collect();
                Some(upoly::eval_with(&coeffs, &image, field.zero(), Clone::clone, |acc, x, c| &(acc * x) + c))
            }
            Scalar::Function(f) => {
                let Scalar::Function(img) = self.field().embed(image).ok()? else {
                    return None;
                };
                f.substitute(&img).map(Scalar::Function)
            }
        }
    }

    /// Numerator and denominator as polynomials in the field generator
    /// (ascending coefficients in the prime/inner field). `None` for fields
    /// without a generator.
    pub fn generator_expansion(&self) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
        match self {
            Scalar::Cyclotomic(c) => {
                let num = c.trimmed().into_iter().map(Scalar::Rational).collect();
                Some((num, vec![Scalar::integer(1)]))
            }
            Scalar::Function(f) => Some((f.numerator().to_vec(), f.denominator().to_vec())),
            _ => None,
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => a == b,
            (Scalar::Prime(a), Scalar::Prime(b)) => a == b,
            (Scalar::Function(a), Scalar::Function(b)) => a == b,
            _ if self.rank() < other.rank() => other.field().embed(self).is_ok_and(|s| s == *other),
            _ if self.rank() > other.rank() => self.field().embed(other).is_ok_and(|s| s == *self),
            _ => false,
        }
    }
}

impl upoly::Coeff for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn inv(&self) -> Self {
        Scalar::inv(self).expect("inverse of zero")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_ref(b));
forward_binop!(Sub, sub, |a, b| a.add_ref(&b.neg_ref()));
forward_binop!(Mul, mul, |a, b| a.mul_ref(b));
forward_binop!(Div, div, |a, b| a.checked_div(b).expect("scalar division by zero"));

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `true` when a rendered value needs parentheses before `*` or `^`.
pub(crate) fn is_compound(s: &str) -> bool {
    s.char_indices().any(|(i, c)| i > 0 && (c == '+' || c == '-'))
}

fn generator_poly_string(coeffs: &[String], var: &str) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_empty() {
            continue;
        }
        let term = if k == 0 {
            c.clone()
        } else {
            let pw = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
            match c.as_str() {
                "1" => pw,
                "-1" => format!("-{pw}"),
                _ if is_compound(c) => format!("({c})*{pw}"),
                _ => format!("{c}*{pw}"),
            }
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push('-');
            out.push_str(rest);
        } else {
            out.push('+');
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", rational_string(r)),
            Scalar::Prime(x) => write!(f, "{}", x.residue()),
            Scalar::Cyclotomic(c) => {
                let coeffs: Vec<String> =
                    c.coeffs().iter().map(|r| if r.is_zero() { String::new() } else { rational_string(r) }).collect();
                write!(f, "{}", generator_poly_string(&coeffs, "z"))
            }
            Scalar::Function(rf) => {
                let render = |p: &[Scalar]| {
                    let coeffs: Vec<String> =
                        p.iter().map(|c| if c.is_zero() { String::new() } else { c.to_string() }).collect();
                    generator_poly_string(&coeffs, &rf.field().var)
                };
                let num = render(rf.numerator());
                if rf.denominator().len() == 1 {
                    return write!(f, "{num}");
                }
                let den = render(rf.denominator());
                let num = if is_compound(&num) { format!("({num})") } else { num };
                let den =
                    if is_compound(&den) || den.contains('*') || den.contains('/') { format!("({den})") } else { den };
                write!(f, "{num}/{den}")
            }
        }
    }
}

/// Re-normalizes a scalar; idempotent, and canonical forms decide equality.
pub fn canonicalize(s: &Scalar) -> Scalar {
    match s {
        Scalar::Rational(r) => Scalar::Rational(BigRational::new(r.numer().clone(), r.denom().clone())),
        Scalar::Cyclotomic(c) => Scalar::Cyclotomic(Cyclotomic::from_poly(c.order(), c.coeffs().to_vec())),
        Scalar::Prime(x) => Scalar::Prime(PrimeResidue::new(x.modulus(), x.residue() as i128)),
        Scalar::Function(f) => Scalar::Function(
            RationalFunction::new(f.field().clone(), f.numerator().to_vec(), f.denominator().to_vec())
                .expect("stored denominators are nonzero"),
        ),
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Least `N >= 1` with `s^N = 1`, or `None` when `s` is not a root of unity.
pub fn root_of_unity_order(s: &Scalar) -> Result<Option<u64>> {
    if s.is_zero() {
        return Err(Error::ZeroInput);
    }
    let search = |bound: u64| divisors(bound).into_iter().find(|&d| s.pow_u64(d).is_one());
    Ok(match s {
        Scalar::Rational(r) => {
            if r.is_one() {
                Some(1)
            } else if r.abs().is_one() {
                Some(2)
            } else {
                None
            }
        }
        Scalar::Cyclotomic(c) => {
            let n = c.order() as u64;
            search(n.lcm(&2))
        }
        Scalar::Prime(x) => search(x.modulus() - 1),
        Scalar::Function(f) => match f.as_constant() {
            Some(c) => root_of_unity_order(&c)?,
            None => None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta(n: u32) -> Scalar {
        Field::Cyclotomic(n).generator().unwrap()
    }

    #[test]
    fn reduces_rationals() {
        assert_eq!(Scalar::ratio(2, 4).unwrap().to_string(), "1/2");
        assert_eq!(Scalar::ratio(3, -6).unwrap().to_string(), "-1/2");
        assert_eq!(Scalar::ratio(1, 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn zeta_three_cubed_is_one() {
        let z = zeta(3);
        assert!(z.pow(3).unwrap().is_one());
        assert_eq!(canonicalize(&z.pow(3).unwrap()), Scalar::integer(1));
    }

    #[test]
    fn rational_function_cancels_common_factor() {
        let f = Field::function(Field::Rational, "t").unwrap();
        let t = f.generator().unwrap();
        let num = &(&t * &t) - &Scalar::integer(1);
        let den = &t - &Scalar::integer(1);
        let q = &num / &den;
        assert_eq!(q, &t + &Scalar::integer(1));
        assert_eq!(q.to_string(), "t+1");
        assert_eq!(canonicalize(&q), q);
    }

    #[test]
    fn root_of_unity_orders() {
        assert_eq!(root_of_unity_order(&zeta(3)).unwrap(), Some(3));
        assert_eq!(root_of_unity_order(&Scalar::integer(-1)).unwrap(), Some(2));
        assert_eq!(root_of_unity_order(&Scalar::integer(1)).unwrap(), Some(1));
        assert_eq!(root_of_unity_order(&Scalar::integer(2)).unwrap(), None);
        let t = Field::function(Field::Rational, "t").unwrap().generator().unwrap();
        assert_eq!(root_of_unity_order(&t).unwrap(), None);
        assert_eq!(root_of_unity_order(&Scalar::integer(0)), Err(Error::ZeroInput));
        // -zeta_3 is a primitive 6th root of unity inside Q(zeta_3)
        assert_eq!(root_of_unity_order(&-zeta(3)).unwrap(), Some(6));
        let two = Field::prime(7).unwrap().from_i64(2);
        assert_eq!(root_of_unity_order(&two).unwrap(), Some(3));
        let x = Field::prime(7).unwrap().from_i64(3);
        assert_eq!(root_of_unity_order(&x).unwrap(), Some(6));
    }

    #[test]
    fn cyclotomic_display_round_shape() {
        let z = zeta(3);
        assert_eq!((&z - &Scalar::integer(1)).to_string(), "z-1");
        // z^2 = -z - 1 in Q(zeta_3)
        assert_eq!((&z * &z).to_string(), "-z-1");
        let f = Field::function(Field::Rational, "q").unwrap();
        let q = f.generator().unwrap();
        let inv = (&q - &Scalar::integer(1)).inv().unwrap();
        assert_eq!(inv.to_string(), "1/(q-1)");
    }

    #[test]
    fn prime_field_embedding() {
        let f = Field::prime(5).unwrap();
        let half = f.from_ratio(1, 2).unwrap();
        assert_eq!(half, f.from_i64(3));
        assert_eq!(f.from_i64(5), f.zero());
        assert!(f.from_ratio(1, 5).is_err());
    }

    #[test]
    fn substitution_is_galois_action() {
        let z = zeta(5);
        let z2 = z.pow(2).unwrap();
        let w = (&z + &Scalar::integer(3)).substitute_generator(&z2).unwrap();
        assert_eq!(w, &z2 + &Scalar::integer(3));
    }
}
