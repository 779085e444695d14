//! Sparse multivariate polynomials over the integers.
//!
//! Every ring element in the crate is ultimately an [`IntPoly`]: a map from
//! exponent vectors to nonzero arbitrary-precision coefficients. Iteration is
//! in a fixed graded monomial order, so printing and hashing are reproducible.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("monomial has {found} exponents, expected {expected}")]
    MonomialLength { expected: usize, found: usize },
    #[error("expected {expected} substitution images, got {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("substitution image {index} is not homogeneous of degree 1")]
    NonLinearImage { index: usize },
    #[error("cannot parse polynomial {text:?}: {message}")]
    Parse { text: String, message: String },
}

/// Exponent vector, one slot per ring variable. All variables have degree 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(var_count: usize) -> Self {
        Monomial(vec![0; var_count])
    }

    pub fn var(var_count: usize, index: usize) -> Self {
        let mut e = vec![0; var_count];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0[index]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.len(), other.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

// Total degree first, then lexicographic with the last variable most
// significant, so fibre variables lead.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `var_count` variables with integer coefficients.
///
/// The term map never stores a zero coefficient, so structural equality is
/// polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    var_count: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPoly {
    pub fn zero(var_count: usize) -> Self {
        IntPoly {
            var_count,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(var_count: usize) -> Self {
        Self::constant(var_count, BigInt::one())
    }

    pub fn constant(var_count: usize, c: impl Into<BigInt>) -> Self {
        Self::term(var_count, Monomial::one(var_count), c)
    }

    /// The variable with the given index.
    pub fn var(var_count: usize, index: usize) -> Self {
        assert!(index < var_count, "variable index out of range");
        Self::term(var_count, Monomial::var(var_count, index), 1)
    }

    fn term(var_count: usize, m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(var_count);
        p.add_term(m, c.into());
        p
    }

    /// Build from `(exponents, coefficient)` pairs; repeated monomials are summed.
    pub fn from_terms<I, C>(var_count: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(var_count);
        for (e, c) in terms {
            if e.len() != var_count {
                return Err(PolyError::MonomialLength {
                    expected: var_count,
                    found: e.len(),
                });
            }
            p.add_term(Monomial(e), c.into());
        }
        Ok(p)
    }

    /// Dense univariate constructor: `coeffs[i]` is the coefficient of `t^i`.
    pub fn univariate<C: Into<BigInt>>(coeffs: impl IntoIterator<Item = C>) -> Self {
        let mut p = Self::zero(1);
        for (i, c) in coeffs.into_iter().enumerate() {
            p.add_term(Monomial(vec![i as u32]), c.into());
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.degree() == 0 && c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// Largest total degree of a term; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// True for zero and for polynomials whose terms all have degree `d`.
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn homogeneous_component(&self, d: u32) -> IntPoly {
        IntPoly {
            var_count: self.var_count,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn coefficient_of(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Coefficient of `t^i` in a univariate polynomial.
    pub fn coeff_univariate(&self, i: u32) -> BigInt {
        debug_assert_eq!(self.var_count, 1);
        self.coefficient_of(&Monomial(vec![i]))
    }

    /// Coefficients of the variables in the degree-1 part.
    pub fn linear_coords(&self) -> Vec<BigInt> {
        (0..self.var_count)
            .map(|i| self.coefficient_of(&Monomial::var(self.var_count, i)))
            .collect()
    }

    /// Homogeneous degree-1 polynomial with the given variable coefficients.
    pub fn from_linear_coords(coords: &[BigInt]) -> Self {
        let n = coords.len();
        let mut p = Self::zero(n);
        for (i, c) in coords.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    fn check_same(&self, other: &IntPoly) -> Result<(), PolyError> {
        if self.var_count != other.var_count {
            return Err(PolyError::VarCountMismatch {
                left: self.var_count,
                right: other.var_count,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &IntPoly) -> Result<IntPoly, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &IntPoly) -> Result<IntPoly, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &IntPoly) -> Result<IntPoly, PolyError> {
        self.check_same(other)?;
        let mut out = IntPoly::zero(self.var_count);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        if k.is_zero() {
            return IntPoly::zero(self.var_count);
        }
        IntPoly {
            var_count: self.var_count,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Multiply every term by the monomial `m`.
    pub fn mul_monomial(&self, m: &Monomial) -> IntPoly {
        IntPoly {
            var_count: self.var_count,
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    /// `self^k` by repeated squaring; `pow(0)` is 1.
    pub fn pow(&self, mut k: u32) -> IntPoly {
        let mut base = self.clone();
        let mut acc = IntPoly::one(self.var_count);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Apply the ring homomorphism sending variable `i` to `images[i]`.
    ///
    /// Each image must be homogeneous of degree 1 (zero is allowed); all
    /// images share the target variable count.
    pub fn substitute_linear(&self, images: &[IntPoly]) -> Result<IntPoly, PolyError> {
        if images.len() != self.var_count {
            return Err(PolyError::ImageCount {
                expected: self.var_count,
                found: images.len(),
            });
        }
        for (index, img) in images.iter().enumerate() {
            if !img.is_homogeneous_of(1) {
                return Err(PolyError::NonLinearImage { index });
            }
        }
        let target = images.first().map_or(0, IntPoly::var_count);
        if let Some(bad) = images.iter().find(|p| p.var_count != target) {
            return Err(PolyError::VarCountMismatch {
                left: target,
                right: bad.var_count,
            });
        }
        // powers[i][e] = images[i]^e, filled lazily
        let mut powers: Vec<Vec<IntPoly>> = vec![vec![IntPoly::one(target)]; self.var_count];
        let mut out = IntPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = IntPoly::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Canonical text: terms in descending monomial order, e.g. `3*t^2*u + 1`.
    pub fn render(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.var_count, "one name per variable");
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].to_string()),
                    _ => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parse the canonical text form (or any sum of `coeff*var^exp` products).
    pub fn parse(text: &str, names: &[&str]) -> Result<IntPoly, PolyError> {
        Parser::new(text, names).parse()
    }
}

impl fmt::Display for IntPoly {
    /// Renders with default names `x0, x1, …` (`t` for univariate polynomials).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let owned: Vec<String> = if self.var_count == 1 {
            vec!["t".to_string()]
        } else {
            (0..self.var_count).map(|i| format!("x{i}")).collect()
        };
        let names: Vec<&str> = owned.iter().map(String::as_str).collect();
        f.write_str(&self.render(&names))
    }
}

// Operator impls panic on a variable-count mismatch; use the `try_` methods
// when the operands come from untrusted input.
impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        self.try_add(rhs).expect("IntPoly add")
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self.try_sub(rhs).expect("IntPoly sub")
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        self.try_mul(rhs).expect("IntPoly mul")
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            var_count: self.var_count,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

struct Parser<'a> {
    text: &'a str,
    chars: Vec<char>,
    pos: usize,
    names: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, names: &'a [&'a str]) -> Self {
        Parser {
            text,
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            names,
        }
    }

    fn err(&self, message: impl Into<String>) -> PolyError {
        PolyError::Parse {
            text: self.text.to_string(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<IntPoly, PolyError> {
        let n = self.names.len();
        let mut out = IntPoly::zero(n);
        if self.chars.is_empty() {
            return Err(self.err("empty input"));
        }
        let mut first = true;
        while self.pos < self.chars.len() {
            let mut sign = BigInt::one();
            match self.peek() {
                Some('+') if !first => self.pos += 1,
                Some('-') => {
                    sign = -sign;
                    self.pos += 1;
                }
                _ if !first => return Err(self.err("expected '+' or '-' between terms")),
                _ => {}
            }
            first = false;
            let (m, c) = self.term()?;
            out.add_term(m, sign * c);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, BigInt), PolyError> {
        let mut coeff = BigInt::one();
        let mut exps = vec![0u32; self.names.len()];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= self.number()?,
                Some(c) if c.is_alphabetic() || c == '_' => {
                    let start = self.pos;
                    while self
                        .peek()
                        .is_some_and(|c| c.is_alphanumeric() || c == '_')
                    {
                        self.pos += 1;
                    }
                    let name: String = self.chars[start..self.pos].iter().collect();
                    let idx = self
                        .names
                        .iter()
                        .position(|n| *n == name)
                        .ok_or_else(|| self.err(format!("unknown variable {name:?}")))?;
                    let mut e = 1u32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        e = u32::try_from(self.number()?)
                            .map_err(|_| self.err("exponent out of range"))?;
                    }
                    exps[idx] += e;
                }
                _ => return Err(self.err(format!("unexpected input at position {}", self.pos))),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Monomial(exps), coeff))
    }

    fn number(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("bad number"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TU: [&str; 2] = ["t", "u"];

    fn p(text: &str, names: &[&str]) -> IntPoly {
        IntPoly::parse(text, names).unwrap()
    }

    fn t(text: &str) -> IntPoly {
        p(text, &["t"])
    }

    /// Naive dense univariate adder, independent of the sparse map.
    fn dense_add(a: &[i64], b: &[i64]) -> Vec<i64> {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
            .collect()
    }

    #[test]
    fn add_examples() {
        let xy = ["x", "y"];
        assert_eq!(&p("x + y", &xy) + &p("x - y", &xy), p("2*x", &xy));
        let q = p("3*x^2*y - 7", &xy);
        assert_eq!(&q + &IntPoly::zero(2), q);
        let sum = &t("1 + t") + &t("t + t^2");
        assert_eq!(sum, IntPoly::univariate(dense_add(&[1, 1], &[0, 1, 1])));
        assert_eq!(sum, t("1 + 2*t + t^2"));
    }

    #[test]
    fn mismatched_var_counts_are_rejected() {
        let a = IntPoly::one(2);
        let b = IntPoly::one(3);
        assert_eq!(
            a.try_add(&b),
            Err(PolyError::VarCountMismatch { left: 2, right: 3 })
        );
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&t("1 + t") * &t("1 - t"), t("1 - t^2"));
        let q = t("5*t^3 - 2");
        assert_eq!(&q * &IntPoly::one(1), q);
        assert_eq!(&t("1 + t + t^2") * &t("1 + t"), t("1 + 2*t + 2*t^2 + t^3"));
    }

    #[test]
    fn pow_examples() {
        let h = ["h"];
        assert_eq!(p("1 + h", &h).pow(2), p("1 + 2*h + h^2", &h));
        assert_eq!(p("3*h - 1", &h).pow(0), IntPoly::one(1));
        let cube = p("T + 2*U", &["T", "U"]).pow(3);
        assert_eq!(cube, p("T^3 + 6*T^2*U + 12*T*U^2 + 8*U^3", &["T", "U"]));
        // binom(3,1) * 2
        assert_eq!(
            cube.coefficient_of(&Monomial::new(vec![2, 1])),
            BigInt::from(6)
        );
    }

    #[test]
    fn substitute_examples() {
        let xy = ["x", "y"];
        let ids = [p("t", &TU), p("u", &TU)];
        assert_eq!(p("x + y", &xy).substitute_linear(&ids).unwrap(), p("t + u", &TU));
        let imgs = [p("t + u", &TU), p("u", &TU)];
        assert_eq!(
            p("x^2", &xy).substitute_linear(&imgs).unwrap(),
            p("t^2 + 2*t*u + u^2", &TU)
        );
        // v = u - x, squared
        let xu = ["x", "u"];
        let v = [p("x", &xu), p("u - x", &xu)];
        assert_eq!(
            p("u^2", &xu).substitute_linear(&v).unwrap(),
            p("u^2 - 2*x*u + x^2", &xu)
        );
    }

    #[test]
    fn substitute_rejects_nonlinear_images() {
        let bad = [p("t^2", &TU), p("u", &TU)];
        assert_eq!(
            p("t", &TU).substitute_linear(&bad),
            Err(PolyError::NonLinearImage { index: 0 })
        );
        let affine = [p("t + 1", &TU), p("u", &TU)];
        assert!(p("t", &TU).substitute_linear(&affine).is_err());
        assert_eq!(
            p("t", &TU).substitute_linear(&[p("t", &TU)]),
            Err(PolyError::ImageCount { expected: 2, found: 1 })
        );
    }

    #[test]
    fn coefficient_examples() {
        let names = ["T", "U1", "U2"];
        let sq = p("T + U1 + 2*U2", &names).pow(2);
        // (m+1) * b2 * b1^m with m = 1, b1 = 1, b2 = 2
        assert_eq!(sq.coefficient_of(&Monomial::new(vec![0, 1, 1])), BigInt::from(4));
        assert_eq!(t("1 + t").coeff_univariate(5), BigInt::zero());
        assert_eq!((&t("1 + t") * &t("1 + t + t^2")).coeff_univariate(1), BigInt::from(2));
    }

    #[test]
    fn big_coefficients_stay_exact() {
        let big = t("1 + t").pow(100);
        let expected: BigInt = "100891344545564193334812497256".parse().unwrap(); // C(100,50)
        assert_eq!(big.coeff_univariate(50), expected);
    }

    #[test]
    fn rendering() {
        assert_eq!(p("1 + 3*t^2*u", &TU).render(&TU), "3*t^2*u + 1");
        assert_eq!(p("u^2 - t*u", &TU).render(&TU), "u^2 - t*u");
        assert_eq!(p("-u", &TU).render(&TU), "-u");
        assert_eq!(IntPoly::zero(2).render(&TU), "0");
        assert_eq!(p("-1 + t", &TU).render(&TU), "t - 1");
        assert_eq!(t("1 + 2*t + t^2").to_string(), "t^2 + 2*t + 1");
    }

    #[test]
    fn parse_errors() {
        assert!(IntPoly::parse("", &TU).is_err());
        assert!(IntPoly::parse("t + w", &TU).is_err());
        assert!(IntPoly::parse("t u", &TU).is_err());
        assert!(IntPoly::parse("t^", &TU).is_err());
    }

    fn arb_poly(vars: usize) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec((prop::collection::vec(0u32..=3, vars), -9i64..=9), 0..6)
            .prop_map(move |terms| IntPoly::from_terms(vars, terms).unwrap())
    }

    fn arb_triple() -> impl Strategy<Value = (IntPoly, IntPoly, IntPoly)> {
        (1usize..=4).prop_flat_map(|n| (arb_poly(n), arb_poly(n), arb_poly(n)))
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a + &(-&a)).is_zero());
            prop_assert_eq!(&(&a - &b) + &b, a);
        }

        #[test]
        fn pow_is_additive_in_exponent(a in arb_poly(2), j in 0u32..4, k in 0u32..4) {
            prop_assert_eq!(a.pow(j + k), &a.pow(j) * &a.pow(k));
        }

        #[test]
        fn render_parse_roundtrip(a in arb_poly(3)) {
            let names = ["x", "u1", "u2"];
            prop_assert_eq!(IntPoly::parse(&a.render(&names), &names).unwrap(), a);
        }

        #[test]
        fn identity_substitution(a in arb_poly(3)) {
            let ids: Vec<IntPoly> = (0..3).map(|i| IntPoly::var(3, i)).collect();
            prop_assert_eq!(a.substitute_linear(&ids).unwrap(), a);
        }

        #[test]
        fn substitution_composes(
            a in arb_poly(2),
            m1 in prop::collection::vec(-3i64..=3, 4),
            m2 in prop::collection::vec(-3i64..=3, 4),
        ) {
            // images as matrices acting on variable vectors: x_i -> sum_j M[i][j] y_j
            let lin = |m: &[i64]| -> Vec<IntPoly> {
                (0..2).map(|i| IntPoly::from_linear_coords(
                    &[BigInt::from(m[2 * i]), BigInt::from(m[2 * i + 1])])).collect()
            };
            let first = a.substitute_linear(&lin(&m1)).unwrap();
            let twice = first.substitute_linear(&lin(&m2)).unwrap();
            // composite: x_i -> sum_j M1[i][j] sum_k M2[j][k] z_k
            let mut comp = [0i64; 4];
            for i in 0..2 {
                for k in 0..2 {
                    comp[2 * i + k] = (0..2).map(|j| m1[2 * i + j] * m2[2 * j + k]).sum();
                }
            }
            prop_assert_eq!(twice, a.substitute_linear(&lin(&comp)).unwrap());
        }
    }
}
