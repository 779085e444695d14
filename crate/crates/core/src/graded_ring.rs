//! Graded quotient rings `Z[v_0, …, v_k] / (rel_0, …, rel_k)` with a
//! triangular monic relation system.
//!
//! Relation `i` is homogeneous of degree `d_i`, contains `v_i^{d_i}` with
//! coefficient 1, and only involves variables `v_0 … v_i`. Rewriting
//! `v_i^{d_i}` by the remaining terms of its relation strictly decreases a
//! monomial in the order where later variables are more significant, so
//! reduction terminates and the reduced monomials
//! `{ v : exponent_i < d_i }` form a free basis.
//!
//! Chow rings of projective spaces, projective bundles over them, fibre
//! products and towers all have this shape.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::chern::TotalChernClass;
use crate::intpoly::{IntPoly, Monomial, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("{names} variable names for {relations} relations")]
    Arity { names: usize, relations: usize },
    #[error("relation {index} is not homogeneous")]
    NotHomogeneous { index: usize },
    #[error("relation {index} is not monic in its own variable")]
    NotMonic { index: usize },
    #[error("relation {index} involves a later variable")]
    NotTriangular { index: usize },
    #[error("a bundle of rank {0} cannot be projectivized; rank must be at least 2")]
    RankTooSmall(u32),
    #[error("duplicate or empty variable name {0:?}")]
    BadName(String),
    #[error("element does not belong to this ring")]
    ForeignElement,
    #[error("cannot parse ring presentation: {0}")]
    Parse(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A presentation of a graded ring generated in degree 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedRingPresentation {
    var_names: Vec<String>,
    relations: Vec<IntPoly>,
    degrees: Vec<u32>,
    // relation minus its leading power, cached for rewriting
    tails: Vec<Vec<(Monomial, BigInt)>>,
}

impl GradedRingPresentation {
    /// Validate a triangular monic presentation.
    pub fn new(var_names: Vec<String>, relations: Vec<IntPoly>) -> Result<Self, RingError> {
        if var_names.len() != relations.len() {
            return Err(RingError::Arity {
                names: var_names.len(),
                relations: relations.len(),
            });
        }
        let n = var_names.len();
        for (i, name) in var_names.iter().enumerate() {
            if name.is_empty() || var_names[..i].contains(name) {
                return Err(RingError::BadName(name.clone()));
            }
        }
        let mut degrees = Vec::with_capacity(n);
        let mut tails = Vec::with_capacity(n);
        for (i, rel) in relations.iter().enumerate() {
            if rel.var_count() != n {
                return Err(PolyError::VarCountMismatch {
                    left: n,
                    right: rel.var_count(),
                }
                .into());
            }
            let d = rel.total_degree().unwrap_or(0);
            if d == 0 || !rel.is_homogeneous_of(d) {
                return Err(RingError::NotHomogeneous { index: i });
            }
            let lead = pure_power(n, i, d);
            if !rel.coefficient_of(&lead).is_one() {
                return Err(RingError::NotMonic { index: i });
            }
            if rel
                .terms()
                .any(|(m, _)| m.exponents()[i + 1..].iter().any(|&e| e > 0))
            {
                return Err(RingError::NotTriangular { index: i });
            }
            degrees.push(d);
            tails.push(
                rel.terms()
                    .filter(|(m, _)| **m != lead)
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .collect(),
            );
        }
        Ok(GradedRingPresentation {
            var_names,
            relations,
            degrees,
            tails,
        })
    }

    /// `Z[h]/(h^{n+1})`.
    pub fn projective_space(n: u32, var_name: &str) -> Self {
        let rel = IntPoly::var(1, 0).pow(n + 1);
        Self::new(vec![var_name.to_string()], vec![rel]).expect("valid presentation")
    }

    /// Product of projective spaces `P^{n_1} × … × P^{n_k}`, variables named
    /// `names[i]`.
    pub fn multiprojective_space(dims: &[u32], names: &[&str]) -> Result<Self, RingError> {
        let k = dims.len();
        let relations = dims
            .iter()
            .enumerate()
            .map(|(i, &d)| IntPoly::var(k, i).pow(d + 1))
            .collect();
        Self::new(names.iter().map(|s| s.to_string()).collect(), relations)
    }

    /// Ring of the projectivization of a rank-`rank` bundle with total Chern
    /// class `c`: appends a variable `u` with relation
    /// `sum_{i=0}^{rank} (-1)^i c_i u^{rank-i}`.
    pub fn projectivize(
        &self,
        c: &TotalChernClass,
        rank: u32,
        var_name: &str,
    ) -> Result<Self, RingError> {
        if rank < 2 {
            return Err(RingError::RankTooSmall(rank));
        }
        if c.ring().as_ref() != self {
            return Err(RingError::ForeignElement);
        }
        let n = self.var_count();
        let widen = |p: &IntPoly| embed(p, n + 1);
        let u = IntPoly::var(n + 1, n);
        let mut rel = IntPoly::zero(n + 1);
        for i in 0..=rank {
            let ci = widen(c.component(i as usize).value());
            let mut term = &ci * &u.pow(rank - i);
            if i % 2 == 1 {
                term = -term;
            }
            rel = &rel + &term;
        }
        let mut names = self.var_names.clone();
        names.push(var_name.to_string());
        let mut relations: Vec<IntPoly> = self.relations.iter().map(widen).collect();
        relations.push(rel);
        Self::new(names, relations)
    }

    pub fn var_count(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn names(&self) -> Vec<&str> {
        self.var_names.iter().map(String::as_str).collect()
    }

    pub fn relations(&self) -> &[IntPoly] {
        &self.relations
    }

    /// `d_i`, the degree of relation `i` in its own variable.
    pub fn relation_degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Degree of the top nonzero graded piece.
    pub fn top_degree(&self) -> u32 {
        self.degrees.iter().map(|d| d - 1).sum()
    }

    /// True when every variable survives in degree 1, i.e. degree 1 is free
    /// on the variables.
    pub fn degree_one_is_free(&self) -> bool {
        self.degrees.iter().all(|&d| d >= 2)
    }

    /// True when `self` is the presentation of a base ring of `other`: same
    /// leading variables and relations.
    pub fn is_prefix_of(&self, other: &GradedRingPresentation) -> bool {
        let n = self.var_count();
        n <= other.var_count()
            && self.var_names[..] == other.var_names[..n]
            && self
                .relations
                .iter()
                .zip(&other.relations)
                .all(|(a, b)| embed(a, other.var_count()) == *b)
    }

    pub fn is_reduced(&self, p: &IntPoly) -> bool {
        p.terms().all(|(m, _)| self.is_basis_monomial(m))
    }

    fn is_basis_monomial(&self, m: &Monomial) -> bool {
        m.exponents().iter().zip(&self.degrees).all(|(e, d)| e < d)
    }

    /// Fully reduced representative of `p` modulo the relations.
    pub fn normal_form(&self, p: &IntPoly) -> IntPoly {
        assert_eq!(p.var_count(), self.var_count(), "polynomial from another ring");
        let n = self.var_count();
        let mut work: BTreeMap<RevLex, BigInt> = p
            .terms()
            .map(|(m, c)| (RevLex(m.exponents().to_vec()), c.clone()))
            .collect();
        let mut out = IntPoly::zero(n);
        while let Some((RevLex(e), c)) = work.pop_last() {
            match (0..n).rev().find(|&i| e[i] >= self.degrees[i]) {
                None => out.add_term(Monomial::new(e), c),
                Some(i) => {
                    let mut quot = e.clone();
                    quot[i] -= self.degrees[i];
                    for (tm, tc) in &self.tails[i] {
                        let key: Vec<u32> =
                            quot.iter().zip(tm.exponents()).map(|(a, b)| a + b).collect();
                        let delta = -(&c * tc);
                        match work.entry(RevLex(key)) {
                            Entry::Vacant(v) => {
                                v.insert(delta);
                            }
                            Entry::Occupied(mut o) => {
                                *o.get_mut() += delta;
                                if o.get().is_zero() {
                                    o.remove();
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Apply one rewrite `v_i^{d_i} -> -tail_i` to one reducible term.
    ///
    /// `pick(k)` chooses among the `k` available (term, variable) redexes.
    /// Returns `None` when `p` is already reduced. Repeating until `None`
    /// reaches the same result as [`normal_form`](Self::normal_form) for any
    /// choice sequence.
    pub fn reduce_step(&self, p: &IntPoly, mut pick: impl FnMut(usize) -> usize) -> Option<IntPoly> {
        let redexes: Vec<(Monomial, BigInt, usize)> = p
            .terms()
            .flat_map(|(m, c)| {
                (0..self.var_count())
                    .filter(|&i| m.exponent(i) >= self.degrees[i])
                    .map(move |i| (m.clone(), c.clone(), i))
            })
            .collect();
        if redexes.is_empty() {
            return None;
        }
        let (m, c, i) = &redexes[pick(redexes.len()) % redexes.len()];
        let n = self.var_count();
        let mut quot = m.exponents().to_vec();
        quot[*i] -= self.degrees[*i];
        let quot = Monomial::new(quot);
        let mut out = p.clone();
        out.add_term(m.clone(), -c);
        for (tm, tc) in &self.tails[*i] {
            out.add_term(quot.mul(tm), -(c * tc));
        }
        debug_assert_eq!(out.var_count(), n);
        Some(out)
    }

    /// Number of basis monomials of total degree `k`.
    pub fn graded_rank(&self, k: u32) -> u64 {
        // counts[j] = number of reduced monomials of degree j in the variables so far
        let mut counts = vec![0u64; k as usize + 1];
        counts[0] = 1;
        for &d in &self.degrees {
            let mut next = vec![0u64; k as usize + 1];
            for (j, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for e in 0..d as usize {
                    if j + e > k as usize {
                        break;
                    }
                    next[j + e] += c;
                }
            }
            counts = next;
        }
        counts[k as usize]
    }

    /// Basis monomials of degree `k`, in ascending graded-lex order.
    pub fn basis(&self, k: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.var_count()];
        self.basis_rec(0, k, &mut cur, &mut out);
        out.sort();
        out
    }

    fn basis_rec(&self, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.var_count() {
            if left == 0 {
                out.push(Monomial::new(cur.clone()));
            }
            return;
        }
        for e in 0..self.degrees[i].min(left + 1) {
            cur[i] = e;
            self.basis_rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }

    /// `prod_i (1 + t + … + t^{d_i - 1})`.
    pub fn poincare_polynomial(&self) -> IntPoly {
        self.degrees
            .iter()
            .fold(IntPoly::one(1), |acc, &d| &acc * &IntPoly::univariate(vec![1; d as usize]))
    }

    /// `sum_k rank_k t^k`, by counting basis monomials.
    pub fn poincare_by_counting(&self) -> IntPoly {
        IntPoly::univariate((0..=self.top_degree()).map(|k| BigInt::from(self.graded_rank(k))))
    }

    /// `Z[x,u1]/(x^2, u1^2)` style rendering.
    pub fn render(&self) -> String {
        let names = self.names();
        let rels: Vec<String> = self.relations.iter().map(|r| r.render(&names)).collect();
        format!("Z[{}]/({})", self.var_names.join(","), rels.join(", "))
    }

    /// Inverse of [`render`](Self::render).
    pub fn parse(text: &str) -> Result<Self, RingError> {
        let bad = || RingError::Parse(text.to_string());
        let rest = text.trim().strip_prefix("Z[").ok_or_else(bad)?;
        let (vars, rest) = rest.split_once(']').ok_or_else(bad)?;
        let rels = rest
            .strip_prefix("/(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let names: Vec<String> = vars.split(',').map(|s| s.trim().to_string()).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let relations = rels
            .split(',')
            .map(|r| IntPoly::parse(r, &refs))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(names, relations)
    }
}

impl fmt::Display for GradedRingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `v_i^d` as a monomial in `n` variables.
fn pure_power(n: usize, i: usize, d: u32) -> Monomial {
    let mut e = vec![0; n];
    e[i] = d;
    Monomial::new(e)
}

/// Pad a polynomial with trailing unused variables.
pub(crate) fn embed(p: &IntPoly, n: usize) -> IntPoly {
    assert!(n >= p.var_count());
    let extra = n - p.var_count();
    IntPoly::from_terms(
        n,
        p.terms().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.extend(std::iter::repeat_n(0, extra));
            (e, c.clone())
        }),
    )
    .expect("lengths match")
}

// Later variables most significant; reduction of v_i only lowers the key.
#[derive(Debug, Clone, PartialEq, Eq)]
struct RevLex(Vec<u32>);

impl Ord for RevLex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for RevLex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A reduced element of a presented ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: Arc<GradedRingPresentation>,
    value: IntPoly,
}

impl RingElement {
    /// Reduce `p` into `ring`.
    pub fn new(ring: &Arc<GradedRingPresentation>, p: &IntPoly) -> Result<Self, RingError> {
        if p.var_count() != ring.var_count() {
            return Err(PolyError::VarCountMismatch {
                left: ring.var_count(),
                right: p.var_count(),
            }
            .into());
        }
        Ok(RingElement {
            value: ring.normal_form(p),
            ring: Arc::clone(ring),
        })
    }

    pub fn zero(ring: &Arc<GradedRingPresentation>) -> Self {
        RingElement {
            value: IntPoly::zero(ring.var_count()),
            ring: Arc::clone(ring),
        }
    }

    pub fn one(ring: &Arc<GradedRingPresentation>) -> Self {
        Self::new(ring, &IntPoly::one(ring.var_count())).expect("constant")
    }

    pub fn var(ring: &Arc<GradedRingPresentation>, index: usize) -> Self {
        Self::new(ring, &IntPoly::var(ring.var_count(), index)).expect("variable")
    }

    /// Degree-1 element with the given coordinates on the variables.
    pub fn linear(ring: &Arc<GradedRingPresentation>, coords: &[BigInt]) -> Result<Self, RingError> {
        Self::new(ring, &IntPoly::from_linear_coords(coords))
    }

    pub fn ring(&self) -> &Arc<GradedRingPresentation> {
        &self.ring
    }

    pub fn value(&self) -> &IntPoly {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn belongs_to(&self, ring: &GradedRingPresentation) -> bool {
        same_ring(&self.ring, ring)
    }

    fn check(&self, other: &RingElement) -> Result<(), RingError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(RingError::ForeignElement)
        }
    }

    pub fn try_add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check(other)?;
        Ok(RingElement {
            value: &self.value + &other.value,
            ring: Arc::clone(&self.ring),
        })
    }

    pub fn try_sub(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check(other)?;
        Ok(RingElement {
            value: &self.value - &other.value,
            ring: Arc::clone(&self.ring),
        })
    }

    pub fn try_mul(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check(other)?;
        RingElement::new(&self.ring, &(&self.value * &other.value))
    }

    pub fn neg(&self) -> RingElement {
        RingElement {
            value: -&self.value,
            ring: Arc::clone(&self.ring),
        }
    }

    pub fn scale(&self, k: &BigInt) -> RingElement {
        RingElement {
            value: self.value.scale(k),
            ring: Arc::clone(&self.ring),
        }
    }

    pub fn pow(&self, k: u32) -> RingElement {
        let mut acc = RingElement::one(&self.ring);
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same ring");
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn homogeneous_component(&self, d: u32) -> RingElement {
        RingElement {
            value: self.value.homogeneous_component(d),
            ring: Arc::clone(&self.ring),
        }
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.value.is_homogeneous_of(d)
    }

    /// Coordinates in the degree-1 basis, or `None` if the element is not
    /// homogeneous of degree 1.
    pub fn degree_one_coords(&self) -> Option<Vec<BigInt>> {
        self.is_homogeneous_of(1).then(|| self.value.linear_coords())
    }

    /// Image in a ring that has `self.ring()` as a base (prefix) ring.
    pub fn pullback_to(&self, target: &Arc<GradedRingPresentation>) -> Result<RingElement, RingError> {
        if !self.ring.is_prefix_of(target) {
            return Err(RingError::ForeignElement);
        }
        RingElement::new(target, &embed(&self.value, target.var_count()))
    }

    pub fn render(&self) -> String {
        self.value.render(&self.ring.names())
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub(crate) fn same_ring(a: &Arc<GradedRingPresentation>, b: &GradedRingPresentation) -> bool {
    std::ptr::eq(a.as_ref(), b) || a.as_ref() == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::TotalChernClass;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(text: &str) -> Arc<GradedRingPresentation> {
        Arc::new(GradedRingPresentation::parse(text).unwrap())
    }

    fn el(r: &Arc<GradedRingPresentation>, text: &str) -> RingElement {
        RingElement::new(r, &IntPoly::parse(text, &r.names()).unwrap()).unwrap()
    }

    #[test]
    fn projective_space_ranks() {
        let pt = GradedRingPresentation::projective_space(0, "h");
        assert_eq!(pt.render(), "Z[h]/(h)");
        assert_eq!(pt.graded_rank(0), 1);
        assert!((1..5).all(|k| pt.graded_rank(k) == 0));
        assert_eq!(GradedRingPresentation::projective_space(1, "h").render(), "Z[h]/(h^2)");
        let p4 = GradedRingPresentation::projective_space(4, "h");
        let ranks: Vec<u64> = (0..7).map(|k| p4.graded_rank(k)).collect();
        assert_eq!(ranks, vec![1, 1, 1, 1, 1, 0, 0]);
    }

    #[test]
    fn projectivize_examples() {
        let p1 = Arc::new(GradedRingPresentation::projective_space(1, "x"));
        let trivial = TotalChernClass::one(&p1);
        let f0 = p1.projectivize(&trivial, 2, "u").unwrap();
        assert_eq!(f0.render(), "Z[x,u]/(x^2, u^2)");

        // O(1)+O(1): (1+x)^2 = 1 + 2x since x^2 = 0
        let c = TotalChernClass::from_element(el(&p1, "1 + 2*x")).unwrap();
        let r = p1.projectivize(&c, 2, "u").unwrap();
        assert_eq!(r.render(), "Z[x,u]/(x^2, u^2 - 2*x*u)");

        assert_eq!(p1.projectivize(&trivial, 1, "u"), Err(RingError::RankTooSmall(1)));
        let other = Arc::new(GradedRingPresentation::projective_space(2, "x"));
        assert_eq!(
            other.projectivize(&trivial, 2, "u"),
            Err(RingError::ForeignElement)
        );
    }

    #[test]
    fn projectivize_matches_signed_chern_formula() {
        // c = 1 + b1 t + b2 t^2 on P^3, rank 3: u^3 - b1 t u^2 + b2 t^2 u - 0
        let p3 = Arc::new(GradedRingPresentation::projective_space(3, "t"));
        let c = TotalChernClass::from_element(el(&p3, "1 + 5*t - 2*t^2")).unwrap();
        let r = p3.projectivize(&c, 3, "u").unwrap();
        assert_eq!(r.render(), "Z[t,u]/(t^4, u^3 - 5*t*u^2 - 2*t^2*u)");
    }

    #[test]
    fn rejects_bad_presentations() {
        let xy = ["x", "y"];
        let rel = |s: &str| IntPoly::parse(s, &xy).unwrap();
        let names = || vec!["x".to_string(), "y".to_string()];
        assert_eq!(
            GradedRingPresentation::new(names(), vec![rel("x^2 + y^2"), rel("y^2")]),
            Err(RingError::NotTriangular { index: 0 })
        );
        assert_eq!(
            GradedRingPresentation::new(names(), vec![rel("x^2"), rel("2*y^2")]),
            Err(RingError::NotMonic { index: 1 })
        );
        assert_eq!(
            GradedRingPresentation::new(names(), vec![rel("x^2"), rel("y^2 + x")]),
            Err(RingError::NotHomogeneous { index: 1 })
        );
        assert!(GradedRingPresentation::new(vec!["x".into(), "x".into()], vec![rel("x^2"), rel("y^2")]).is_err());
    }

    #[test]
    fn normal_form_examples() {
        let r = ring("Z[x,u]/(x^2, u^2 - 2*x*u)");
        assert_eq!(el(&r, "u^2"), el(&r, "2*x*u"));
        let h = ring("Z[h]/(h^3)");
        assert!(el(&h, "h^5").is_zero());
        let f0 = ring("Z[x,u]/(x^2, u^2)");
        assert_eq!(el(&f0, "x + u").pow(2), el(&f0, "2*x*u"));
    }

    #[test]
    fn graded_rank_examples() {
        let r = GradedRingPresentation::multiprojective_space(&[1, 2], &["a", "b"]).unwrap();
        assert_eq!(r.graded_rank(1), 2);
        assert_eq!(r.graded_rank(0), 1);
        let f0 = GradedRingPresentation::multiprojective_space(&[1, 1], &["x", "u"]).unwrap();
        assert_eq!(f0.graded_rank(2), 1);
        assert_eq!(f0.basis(2), vec![Monomial::new(vec![1, 1])]);
    }

    #[test]
    fn poincare_examples() {
        let p3 = GradedRingPresentation::projective_space(3, "h");
        assert_eq!(p3.poincare_polynomial(), IntPoly::univariate([1, 1, 1, 1]));
        let r = GradedRingPresentation::multiprojective_space(&[1, 2], &["a", "b"]).unwrap();
        assert_eq!(r.poincare_polynomial(), IntPoly::univariate([1, 2, 2, 1]));
        assert_eq!(r.poincare_by_counting(), r.poincare_polynomial());
    }

    #[test]
    fn is_zero_examples() {
        let pm = Arc::new(GradedRingPresentation::projective_space(2, "x"));
        assert!(RingElement::var(&pm, 0).pow(3).is_zero());
        // t^{j+1} != 0 for j < n in a projective bundle over P^n
        let p3 = Arc::new(GradedRingPresentation::projective_space(3, "t"));
        let c = TotalChernClass::from_element(el(&p3, "1 + t")).unwrap();
        let pf = Arc::new(p3.projectivize(&c, 2, "u").unwrap());
        for j in 0..3 {
            assert!(!RingElement::var(&pf, 0).pow(j + 1).is_zero());
        }
        assert!(RingElement::zero(&pf).is_zero());
    }

    #[test]
    fn render_parse_roundtrip() {
        let r = ring("Z[x,u1,u2]/(x^3, u1^2 - x*u1, u2^2 + 3*x*u2 - u1*u2)");
        assert_eq!(GradedRingPresentation::parse(&r.render()).unwrap(), *r);
        assert!(GradedRingPresentation::parse("Q[x]/(x^2)").is_err());
    }

    #[test]
    fn pullback_along_prefix() {
        let p2 = Arc::new(GradedRingPresentation::projective_space(2, "x"));
        let c = TotalChernClass::from_element(el(&p2, "1 + x")).unwrap();
        let top = Arc::new(p2.projectivize(&c, 2, "u1").unwrap());
        assert!(p2.is_prefix_of(&top));
        let x2 = RingElement::var(&p2, 0).pow(2);
        let img = x2.pullback_to(&top).unwrap();
        assert_eq!(img.render(), "x^2");
        assert!(RingElement::var(&top, 0).pullback_to(&p2).is_err());
    }

    /// Random tower ring with up to four variables.
    pub(crate) fn random_tower(rng: &mut ChaCha8Rng) -> Arc<GradedRingPresentation> {
        let base = rng.gen_range(1..=3);
        let mut r = Arc::new(GradedRingPresentation::projective_space(base, "x"));
        let levels = rng.gen_range(0..=3);
        for lvl in 0..levels {
            let rank = rng.gen_range(2..=3u32);
            let summands: Vec<RingElement> = (0..rank)
                .map(|_| {
                    let coords: Vec<BigInt> =
                        (0..r.var_count()).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
                    RingElement::linear(&r, &coords).unwrap()
                })
                .collect();
            let c = summands
                .iter()
                .fold(RingElement::one(&r), |acc, l| {
                    acc.try_mul(&RingElement::one(&r).try_add(l).unwrap()).unwrap()
                });
            let c = TotalChernClass::from_element(c).unwrap();
            r = Arc::new(r.projectivize(&c, rank, &format!("u{}", lvl + 1)).unwrap());
        }
        r
    }

    fn random_poly(rng: &mut ChaCha8Rng, n: usize) -> IntPoly {
        let terms: Vec<(Vec<u32>, i64)> = (0..rng.gen_range(0..6))
            .map(|_| {
                ((0..n).map(|_| rng.gen_range(0..=4)).collect(), rng.gen_range(-9..=9))
            })
            .collect();
        IntPoly::from_terms(n, terms).unwrap()
    }

    #[test]
    fn reduction_is_confluent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let r = random_tower(&mut rng);
            let p = random_poly(&mut rng, r.var_count());
            let mut cur = p.clone();
            let mut steps = 0;
            while let Some(next) = r.reduce_step(&cur, |k| rng.gen_range(0..k)) {
                cur = next;
                steps += 1;
                assert!(steps < 100_000, "reduction did not terminate");
            }
            assert_eq!(cur, r.normal_form(&p));
        }
    }

    #[test]
    fn ring_invariants_on_random_towers() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let r = random_tower(&mut rng);
            let p = random_poly(&mut rng, r.var_count());
            let q = random_poly(&mut rng, r.var_count());
            let np = r.normal_form(&p);
            assert!(r.is_reduced(&np));
            assert_eq!(r.normal_form(&np), np);
            assert_eq!(
                r.normal_form(&(&p * &q)),
                r.normal_form(&(&np * &r.normal_form(&q)))
            );
            let pp = r.poincare_polynomial();
            assert_eq!(pp, r.poincare_by_counting());
            let top = r.top_degree();
            for k in 0..=top {
                assert_eq!(r.graded_rank(k), r.graded_rank(top - k));
            }
            assert_eq!(r.graded_rank(top), 1);
        }
    }
}
