use std::sync::Arc;

use super::upoly::{self, Coeff};
use super::{Field, Scalar};

/// Univariate function field K(t) over an inner field K.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionField {
    pub inner: Field,
    pub var: String,
}

/// Element of K(t): coprime numerator and monic denominator over K.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    field: Arc<FunctionField>,
    num: Vec<Scalar>,
    den: Vec<Scalar>,
}

impl RationalFunction {
    pub fn new(field: Arc<FunctionField>, num: Vec<Scalar>, den: Vec<Scalar>) -> Option<Self> {
        let embed = |v: Vec<Scalar>| -> Vec<Scalar> {
            let mut v: Vec<Scalar> =
                v.iter().map(|c| field.inner.embed(c).expect("coefficient outside the inner field")).collect();
            upoly::trim(&mut v);
            v
        };
        let num = embed(num);
        let den = embed(den);
        if den.is_empty() {
            return None;
        }
        Some(Self::normalized(field, num, den))
    }

    fn normalized(field: Arc<FunctionField>, num: Vec<Scalar>, den: Vec<Scalar>) -> Self {
        if num.is_empty() {
            let one = vec![field.inner.one()];
            return RationalFunction { field, num, den: one };
        }
        let g = upoly::gcd(&num, &den);
        let (num, _) = upoly::divrem(&num, &g);
        let (den, _) = upoly::divrem(&den, &g);
        let lead = Coeff::inv(&den[den.len() - 1]);
        RationalFunction { num: upoly::scale(&num, &lead), den: upoly::scale(&den, &lead), field }
    }

    pub fn constant(field: Arc<FunctionField>, c: Scalar) -> Self {
        let one = field.inner.one();
        Self::new(field, vec![c], vec![one]).expect("unit denominator")
    }

    pub fn generator(field: Arc<FunctionField>) -> Self {
        let inner = &field.inner;
        let num = vec![inner.zero(), inner.one()];
        let den = vec![inner.one()];
        Self::new(field, num, den).expect("unit denominator")
    }

    pub fn field(&self) -> &Arc<FunctionField> {
        &self.field
    }

    pub fn numerator(&self) -> &[Scalar] {
        &self.num
    }

    pub fn denominator(&self) -> &[Scalar] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// The constant value when the function has degree zero.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.den.len() != 1 {
            return None;
        }
        match self.num.len() {
            0 => Some(self.field.inner.zero()),
            1 => Some(self.num[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let num = upoly::add(&upoly::mul(&self.num, &o.den), &upoly::mul(&o.num, &self.den));
        Self::normalized(self.field.clone(), num, upoly::mul(&self.den, &o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { field: self.field.clone(), num: upoly::neg(&self.num), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::normalized(self.field.clone(), upoly::mul(&self.num, &o.num), upoly::mul(&self.den, &o.den))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalized(self.field.clone(), self.den.clone(), self.num.clone()))
    }

    /// Substitutes `t := image`; `None` when the denominator vanishes there.
    pub fn substitute(&self, image: &RationalFunction) -> Option<Self> {
        let eval = |p: &[Scalar]| {
            let zero = RationalFunction::constant(self.field.clone(), self.field.inner.zero());
            upoly::eval_with(
                p,
                image,
                zero,
                |c| RationalFunction::constant(self.field.clone(), c.clone()),
                |acc, x, c| acc.mul(x).add(c),
            )
        };
        let den = eval(&self.den);
        let num = eval(&self.num);
        den.inv().map(|d| num.mul(&d))
    }
}
