//! Normal-form elements of an iterated Ore extension.
//!
//! An element is a finite sum of terms `beta * x_1^{e_1} ... x_n^{e_n}` with
//! the base coefficient written on the left. Exponent vectors are stored
//! without trailing zeros, so an element of `R_j` is literally the same value
//! in every `R_k`, `k >= j`. The ring structure lives on [`crate::OreTower`].

mod arith;

pub use arith::{Centrality, Generator};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::matrix::{coefficient_string, BaseElement};

/// Exponent vector, lowest variable first, trailing zeros trimmed.
///
/// Ordered lexicographically from the top variable down, so the last term of
/// a [`SkewPoly`] is the one of highest degree in the top variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Monomial {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    /// `x_k` for a 0-based variable index.
    pub fn var(k: usize) -> Monomial {
        let mut v = vec![0; k + 1];
        v[k] = 1;
        Monomial(v)
    }

    pub fn exponent(&self, k: usize) -> u32 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of variables the monomial can involve (index of top variable + 1).
    pub fn support(&self) -> usize {
        self.0.len()
    }

    /// Lowest variable with positive exponent.
    pub fn first_var(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    pub fn with_exponent(&self, k: usize, e: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= k {
            v.resize(k + 1, 0);
        }
        v[k] = e;
        Monomial::new(v)
    }

    /// Variables `< k` only.
    pub fn below(&self, k: usize) -> Monomial {
        Monomial::new(self.0.iter().take(k).copied().collect())
    }

    /// Concatenates a monomial supported below `k` with the part of `upper`
    /// at indices `>= k`.
    pub fn join(&self, k: usize, upper: &Monomial) -> Monomial {
        debug_assert!(self.support() <= k);
        let mut v = self.0.clone();
        v.resize(k.max(upper.support()), 0);
        if upper.support() > k {
            v[k..upper.support()].copy_from_slice(&upper.0[k..upper.support()]);
        }
        Monomial::new(v)
    }

    /// Reorders variables: exponent of old variable `i` moves to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Monomial {
        let mut v = vec![0; perm.len()];
        for (i, &e) in self.0.iter().enumerate() {
            v[perm[i]] = e;
        }
        Monomial::new(v)
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
            match e {
                0 => {}
                1 => parts.push(name),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        parts.join(" ")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.support().max(other.support());
        for k in (0..n).rev() {
            match self.exponent(k).cmp(&other.exponent(k)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree in one variable; the zero polynomial has degree minus infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl std::ops::Add for Degree {
    type Output = Degree;

    fn add(self, o: Degree) -> Degree {
        match (self, o) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Element of `R_n` in normal form: no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SkewPoly {
    terms: BTreeMap<Monomial, BaseElement>,
}

impl SkewPoly {
    pub fn zero() -> SkewPoly {
        SkewPoly::default()
    }

    pub fn constant(beta: BaseElement) -> SkewPoly {
        SkewPoly::term(beta, Monomial::one())
    }

    pub fn term(beta: BaseElement, m: Monomial) -> SkewPoly {
        let mut p = SkewPoly::zero();
        p.add_term(m, beta);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BaseElement)>) -> SkewPoly {
        let mut p = SkewPoly::zero();
        for (m, b) in terms {
            p.add_term(m, b);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, beta: BaseElement) {
        if beta.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, beta);
            }
            Some(old) => {
                let sum = old.add(&beta);
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BaseElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&BaseElement> {
        self.terms.get(m)
    }

    /// Number of variables involved (top variable index + 1).
    pub fn support(&self) -> usize {
        self.terms.keys().map(Monomial::support).max().unwrap_or(0)
    }

    /// The base element when the polynomial has no variables (zero gives `None`).
    pub fn as_constant(&self) -> Option<&BaseElement> {
        match self.terms.len() {
            1 => self.terms.get(&Monomial::one()),
            _ => None,
        }
    }

    /// `Some((beta, m))` when the polynomial is a single term.
    pub fn as_term(&self) -> Option<(&Monomial, &BaseElement)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().unwrap())
    }

    pub fn add(&self, o: &SkewPoly) -> SkewPoly {
        let mut out = self.clone();
        for (m, b) in &o.terms {
            out.add_term(m.clone(), b.clone());
        }
        out
    }

    pub fn neg(&self) -> SkewPoly {
        SkewPoly { terms: self.terms.iter().map(|(m, b)| (m.clone(), b.neg())).collect() }
    }

    pub fn sub(&self, o: &SkewPoly) -> SkewPoly {
        self.add(&o.neg())
    }

    /// `beta * self`; left multiplication by a base element acts on coefficients.
    pub fn left_scale(&self, beta: &BaseElement) -> SkewPoly {
        SkewPoly::from_terms(self.terms.iter().map(|(m, b)| (m.clone(), beta.mul(b))))
    }

    /// `self * x^upper` for `self` supported below `k` and `upper` supported at `>= k`.
    pub fn join_upper(&self, k: usize, upper: &Monomial) -> SkewPoly {
        SkewPoly::from_terms(self.terms.iter().map(|(m, b)| (m.join(k, upper), b.clone())))
    }

    /// Maximal exponent of variable `j` and the sum of terms attaining it.
    pub fn degree_leading(&self, j: usize) -> (Degree, SkewPoly) {
        let Some(d) = self.terms.keys().map(|m| m.exponent(j)).max() else {
            return (Degree::NegInfinity, SkewPoly::zero());
        };
        let lead = SkewPoly::from_terms(
            self.terms.iter().filter(|(m, _)| m.exponent(j) == d).map(|(m, b)| (m.clone(), b.clone())),
        );
        (Degree::Finite(d), lead)
    }

    pub fn degree(&self, j: usize) -> Degree {
        self.terms.keys().map(|m| m.exponent(j)).max().map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Renders as `coeff * x1^a x2^b + ...`, highest term first.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (m, b) in self.terms.iter().rev() {
            let coeff = coefficient_string(b);
            let (negative, magnitude) = match coeff.strip_prefix('-') {
                Some(rest) if !rest.starts_with('(') => (true, rest.to_string()),
                _ => (false, coeff),
            };
            let body = if m.is_one() {
                magnitude
            } else if magnitude == "1" {
                m.render(names)
            } else {
                format!("{magnitude} * {}", m.render(names))
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::scalar::{Field, Scalar};

    fn c(n: i64) -> BaseElement {
        Matrix::scalar(&Field::Rational, 1, Scalar::integer(n))
    }

    fn names() -> Vec<String> {
        vec!["x1".into(), "x2".into()]
    }

    #[test]
    fn monomial_order_is_top_variable_first() {
        let a = Monomial::new(vec![5, 0]);
        let b = Monomial::new(vec![0, 1]);
        assert!(a < b);
        assert!(Monomial::new(vec![2, 1]) > Monomial::new(vec![1, 1]));
        assert_eq!(Monomial::new(vec![1, 0, 0]), Monomial::var(0));
    }

    #[test]
    fn degree_leading_reads_terms() {
        let p = SkewPoly::from_terms([(Monomial::new(vec![2, 1]), c(1)), (Monomial::new(vec![1, 1]), c(1))]);
        let (d, lead) = p.degree_leading(0);
        assert_eq!(d, Degree::Finite(2));
        assert_eq!(lead, SkewPoly::term(c(1), Monomial::new(vec![2, 1])));
        let (d, lead) = SkewPoly::zero().degree_leading(1);
        assert_eq!(d, Degree::NegInfinity);
        assert!(lead.is_zero());
        assert!(Degree::NegInfinity < Degree::Finite(0));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut p = SkewPoly::term(c(2), Monomial::var(1));
        p.add_term(Monomial::var(1), c(-2));
        assert!(p.is_zero());
    }

    #[test]
    fn rendering() {
        let p = SkewPoly::from_terms([
            (Monomial::new(vec![1, 1]), c(2)),
            (Monomial::one(), c(1)),
            (Monomial::var(0), c(-1)),
        ]);
        assert_eq!(p.render(&names()), "2 * x1 x2 - x1 + 1");
        let q = SkewPoly::term(c(-3), Monomial::new(vec![2]));
        assert_eq!(q.render(&names()), "-3 * x1^2");
    }
}
