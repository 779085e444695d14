//! Bundle descriptors and total Chern class calculus.
//!
//! Two input fidelities exist. A [`SplitBundle`] is a sum of line bundles,
//! for which "trivial up to a line bundle twist" is decidable exactly: all
//! summands must agree. A [`ChernVector`] only records `c_i(E) = a_i h^i` on
//! a projective space, so decisions on it are statements about Chern
//! classes, not about the bundle.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::graded_ring::{same_ring, GradedRingPresentation, RingElement, RingError};
use crate::intpoly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error("bundle rank {0} is below 2")]
    RankTooSmall(u32),
    #[error("{found} Chern coefficients given, at most {max} allowed (min of rank and base dimension)")]
    TooManyCoefficients { found: usize, max: usize },
    #[error("class is not homogeneous of degree 1")]
    NotDegreeOne,
    #[error("degree-0 component of a total Chern class must be 1")]
    LeadingComponent,
    #[error("Chern component c_{index} is nonzero but the rank is {rank}")]
    ComponentBeyondRank { index: usize, rank: u32 },
    #[error("rank mismatch: target has rank {target}, source has rank {source_rank}")]
    RankMismatch { target: u32, source_rank: u32 },
    #[error("ring is not the Chow ring of P^{0}")]
    NotProjectiveSpace(u32),
    #[error("element does not belong to the expected ring")]
    ForeignElement,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `binom(n, k)` as a big integer.
pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Chern data of a bundle on `P^n`: `c_i(E) = a_i h^i` for `i = 1..=k`,
/// `k = min(rank, n)`; the `a_i` past `k` vanish.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChernVector {
    base_dim: u32,
    rank: u32,
    coeffs: Vec<BigInt>,
}

impl ChernVector {
    /// Shorter coefficient lists are padded with zeros.
    pub fn new(base_dim: u32, rank: u32, coeffs: Vec<BigInt>) -> Result<Self, ChernError> {
        if rank < 2 {
            return Err(ChernError::RankTooSmall(rank));
        }
        let k = rank.min(base_dim) as usize;
        if coeffs.len() > k {
            return Err(ChernError::TooManyCoefficients {
                found: coeffs.len(),
                max: k,
            });
        }
        let mut coeffs = coeffs;
        coeffs.resize(k, BigInt::zero());
        Ok(ChernVector {
            base_dim,
            rank,
            coeffs,
        })
    }

    pub fn trivial(base_dim: u32, rank: u32) -> Result<Self, ChernError> {
        Self::new(base_dim, rank, Vec::new())
    }

    /// Chern vector of `O(a_1) ⊕ … ⊕ O(a_N)`: elementary symmetric functions
    /// of the twists, truncated at the base dimension.
    pub fn from_twists(base_dim: u32, twists: &[BigInt]) -> Result<Self, ChernError> {
        let rank = twists.len() as u32;
        if rank < 2 {
            return Err(ChernError::RankTooSmall(rank));
        }
        let k = rank.min(base_dim) as usize;
        // e[j] after processing some twists
        let mut e = vec![BigInt::zero(); k + 1];
        e[0] = BigInt::one();
        for a in twists {
            for j in (1..=k).rev() {
                let prev = &e[j - 1] * a;
                e[j] += prev;
            }
        }
        Self::new(base_dim, rank, e.split_off(1))
    }

    /// `(1 + a h)^rank`.
    pub fn binomial_power(base_dim: u32, rank: u32, a: &BigInt) -> Result<Self, ChernError> {
        Self::from_twists(base_dim, &vec![a.clone(); rank as usize])
    }

    pub fn base_dim(&self) -> u32 {
        self.base_dim
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// `a_1 … a_k`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `a_i`, with `a_0 = 1` and zero past `k`.
    pub fn coeff(&self, i: usize) -> BigInt {
        match i {
            0 => BigInt::one(),
            _ => self.coeffs.get(i - 1).cloned().unwrap_or_default(),
        }
    }

    /// Chern vector of `E ⊗ O(a)`.
    pub fn twisted(&self, a: &BigInt) -> ChernVector {
        let n = self.rank;
        let coeffs = (1..=self.coeffs.len())
            .map(|i| {
                (0..=i)
                    .map(|j| {
                        binomial(n - j as u32, (i - j) as u32) * self.coeff(j) * a.pow((i - j) as u32)
                    })
                    .sum()
            })
            .collect();
        ChernVector {
            base_dim: self.base_dim,
            rank: self.rank,
            coeffs,
        }
    }

    /// The integer `a` with `c = (1 + a h)^rank`, if one exists.
    pub fn trivializing_twist(&self) -> Option<BigInt> {
        if self.coeffs.is_empty() {
            return Some(BigInt::zero());
        }
        let (a, rem) = self.coeffs[0].div_rem(&BigInt::from(self.rank));
        if !rem.is_zero() {
            return None;
        }
        (Self::binomial_power(self.base_dim, self.rank, &a).ok()? == *self).then_some(a)
    }

    /// `Z[name]/(name^{n+1})` for the base.
    pub fn base_ring(&self, var_name: &str) -> Arc<GradedRingPresentation> {
        Arc::new(GradedRingPresentation::projective_space(self.base_dim, var_name))
    }

    /// Total Chern class in the base ring, which must be `A*(P^n)`.
    pub fn total_chern(&self, ring: &Arc<GradedRingPresentation>) -> Result<TotalChernClass, ChernError> {
        if ring.var_count() != 1 || ring.relation_degrees()[0] != self.base_dim + 1 {
            return Err(ChernError::NotProjectiveSpace(self.base_dim));
        }
        pullback_chern(self, ring, &RingElement::var(ring, 0))
    }
}

/// A direct sum of line bundles given by their first Chern classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitBundle {
    ring: Arc<GradedRingPresentation>,
    summands: Vec<RingElement>,
}

impl SplitBundle {
    pub fn new(ring: &Arc<GradedRingPresentation>, summands: Vec<RingElement>) -> Result<Self, ChernError> {
        if summands.len() < 2 {
            return Err(ChernError::RankTooSmall(summands.len() as u32));
        }
        for s in &summands {
            if !s.belongs_to(ring) {
                return Err(ChernError::ForeignElement);
            }
            if !s.is_homogeneous_of(1) {
                return Err(ChernError::NotDegreeOne);
            }
        }
        Ok(SplitBundle {
            ring: Arc::clone(ring),
            summands,
        })
    }

    /// `O(a_1) ⊕ … ⊕ O(a_N)` on a ring whose first variable is the
    /// hyperplane class.
    pub fn on_projective_space(ring: &Arc<GradedRingPresentation>, twists: &[BigInt]) -> Result<Self, ChernError> {
        let h = RingElement::var(ring, 0);
        Self::new(ring, twists.iter().map(|a| h.scale(a)).collect())
    }

    pub fn ring(&self) -> &Arc<GradedRingPresentation> {
        &self.ring
    }

    pub fn rank(&self) -> u32 {
        self.summands.len() as u32
    }

    pub fn summands(&self) -> &[RingElement] {
        &self.summands
    }

    /// Integer twists when the base is a projective space (one variable).
    pub fn integer_twists(&self) -> Option<Vec<BigInt>> {
        (self.ring.var_count() == 1).then(|| {
            self.summands
                .iter()
                .map(|s| s.value().linear_coords()[0].clone())
                .collect()
        })
    }

    /// Whitney product `prod (1 + λ_k)`.
    pub fn total_chern(&self) -> TotalChernClass {
        let one = RingElement::one(&self.ring);
        let c = self.summands.iter().fold(one.clone(), |acc, l| {
            acc.try_mul(&one.try_add(l).expect("same ring"))
                .expect("same ring")
        });
        TotalChernClass::from_element(c).expect("constant term is 1")
    }

    /// The common summand class if all summands are equal.
    pub fn is_constant_twist(&self) -> Option<RingElement> {
        let first = &self.summands[0];
        self.summands
            .iter()
            .all(|s| s == first)
            .then(|| first.clone())
    }

    /// `self ⊗ L` with `c_1(L) = mu`.
    pub fn twisted(&self, mu: &RingElement) -> Result<SplitBundle, ChernError> {
        let summands = self
            .summands
            .iter()
            .map(|s| s.try_add(mu))
            .collect::<Result<Vec<_>, _>>()?;
        SplitBundle::new(&self.ring, summands)
    }

    pub fn direct_sum(&self, other: &SplitBundle) -> Result<SplitBundle, ChernError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(ChernError::ForeignElement);
        }
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        SplitBundle::new(&self.ring, summands)
    }

    /// Chern vector, when the base is `P^n`.
    pub fn chern_vector(&self) -> Result<ChernVector, ChernError> {
        let twists = self
            .integer_twists()
            .ok_or(ChernError::NotProjectiveSpace(self.ring.top_degree()))?;
        ChernVector::from_twists(self.ring.top_degree(), &twists)
    }
}

/// `c_0 + c_1 + …` with `c_0 = 1`, each `c_i` homogeneous of degree `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalChernClass {
    ring: Arc<GradedRingPresentation>,
    // c_0 ..= c_top, top = top degree of the ring
    components: Vec<RingElement>,
}

impl TotalChernClass {
    pub fn one(ring: &Arc<GradedRingPresentation>) -> Self {
        Self::from_element(RingElement::one(ring)).expect("1 is a total Chern class")
    }

    /// Split an element into graded components; the degree-0 part must be 1.
    pub fn from_element(e: RingElement) -> Result<Self, ChernError> {
        let top = e.ring().top_degree();
        let components: Vec<RingElement> = (0..=top).map(|d| e.homogeneous_component(d)).collect();
        if !components[0].is_one() {
            return Err(ChernError::LeadingComponent);
        }
        Ok(TotalChernClass {
            ring: Arc::clone(e.ring()),
            components,
        })
    }

    /// From explicit components `c_1, c_2, …`; `c_0 = 1` is implied.
    pub fn from_components(
        ring: &Arc<GradedRingPresentation>,
        higher: &[RingElement],
    ) -> Result<Self, ChernError> {
        let mut total = RingElement::one(ring);
        for (i, c) in higher.iter().enumerate() {
            if !c.belongs_to(ring) {
                return Err(ChernError::ForeignElement);
            }
            if !c.is_homogeneous_of(i as u32 + 1) {
                return Err(ChernError::Ring(RingError::NotHomogeneous { index: i + 1 }));
            }
            total = total.try_add(c)?;
        }
        Self::from_element(total)
    }

    pub fn ring(&self) -> &Arc<GradedRingPresentation> {
        &self.ring
    }

    /// `c_i`; zero past the top degree.
    pub fn component(&self, i: usize) -> RingElement {
        self.components
            .get(i)
            .cloned()
            .unwrap_or_else(|| RingElement::zero(&self.ring))
    }

    pub fn components(&self) -> &[RingElement] {
        &self.components
    }

    pub fn to_element(&self) -> RingElement {
        self.components
            .iter()
            .skip(1)
            .fold(self.components[0].clone(), |acc, c| acc.try_add(c).expect("same ring"))
    }

    pub fn is_one(&self) -> bool {
        self.components.iter().skip(1).all(RingElement::is_zero)
    }

    /// Highest index with a nonzero component.
    pub fn effective_degree(&self) -> usize {
        self.components
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    pub fn render(&self) -> String {
        self.to_element().render()
    }

    /// Total Chern class of `E ⊗ L` where `E` has rank `rank` and `c_1(L) = lambda`:
    /// `c_i(E⊗L) = sum_{j<=i} binom(rank-j, i-j) c_j(E) lambda^{i-j}`.
    pub fn twist(&self, rank: u32, lambda: &RingElement) -> Result<TotalChernClass, ChernError> {
        if !lambda.belongs_to(&self.ring) {
            return Err(ChernError::ForeignElement);
        }
        if !lambda.is_homogeneous_of(1) {
            return Err(ChernError::NotDegreeOne);
        }
        let deg = self.effective_degree();
        if deg > rank as usize {
            return Err(ChernError::ComponentBeyondRank { index: deg, rank });
        }
        let top = self.components.len() - 1;
        let powers: Vec<RingElement> = (0..=top as u32).map(|k| lambda.pow(k)).collect();
        let mut out = Vec::with_capacity(top + 1);
        for i in 0..=top {
            let mut ci = RingElement::zero(&self.ring);
            for j in 0..=i.min(rank as usize) {
                let coeff = binomial(rank - j as u32, (i - j) as u32);
                if coeff.is_zero() || self.components[j].is_zero() {
                    continue;
                }
                let term = self.components[j].try_mul(&powers[i - j])?.scale(&coeff);
                ci = ci.try_add(&term)?;
            }
            out.push(ci);
        }
        Ok(TotalChernClass {
            ring: Arc::clone(&self.ring),
            components: out,
        })
    }

    /// `lambda` with `self = (1 + lambda)^rank`, if it exists. Degree 1 is
    /// free, so the candidate `c_1 / rank` is the only possibility.
    pub fn is_trivial_up_to_twist(&self, rank: u32) -> Option<RingElement> {
        let lambda = divide_degree_one(&self.component(1), rank)?;
        let power = RingElement::one(&self.ring).try_add(&lambda).ok()?.pow(rank);
        (TotalChernClass::from_element(power).ok()? == *self).then_some(lambda)
    }
}

/// Exact quotient of a degree-1 class by `n` in the variable basis.
fn divide_degree_one(c: &RingElement, n: u32) -> Option<RingElement> {
    let coords = c.degree_one_coords()?;
    let n = BigInt::from(n);
    let q = coords
        .iter()
        .map(|a| {
            let (q, r) = a.div_rem(&n);
            r.is_zero().then_some(q)
        })
        .collect::<Option<Vec<_>>>()?;
    RingElement::linear(c.ring(), &q).ok()
}

/// Pull `c` back along a map sending the hyperplane class to `image_of_h`.
pub fn pullback_chern(
    c: &ChernVector,
    ring: &Arc<GradedRingPresentation>,
    image_of_h: &RingElement,
) -> Result<TotalChernClass, ChernError> {
    if !image_of_h.belongs_to(ring) {
        return Err(ChernError::ForeignElement);
    }
    if !image_of_h.is_homogeneous_of(1) {
        return Err(ChernError::NotDegreeOne);
    }
    let mut total = IntPoly::one(ring.var_count());
    let mut power = RingElement::one(ring);
    for i in 1..=c.coeffs().len() {
        power = power.try_mul(image_of_h)?;
        if power.is_zero() {
            break;
        }
        total = &total + &power.value().scale(&c.coeff(i));
    }
    TotalChernClass::from_element(RingElement::new(ring, &total)?)
}

/// `lambda` with `target = twist(pullback(source), lambda)`, if one exists.
pub fn is_pullback_twist(
    target: &TotalChernClass,
    rank: u32,
    source: &ChernVector,
    image_of_h: &RingElement,
) -> Result<Option<RingElement>, ChernError> {
    if source.rank() != rank {
        return Err(ChernError::RankMismatch {
            target: rank,
            source_rank: source.rank(),
        });
    }
    let pulled = pullback_chern(source, target.ring(), image_of_h)?;
    let diff = target.component(1).try_sub(&pulled.component(1))?;
    let Some(lambda) = divide_degree_one(&diff, rank) else {
        return Ok(None);
    };
    let twisted = match pulled.twist(rank, &lambda) {
        Ok(t) => t,
        Err(ChernError::ComponentBeyondRank { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok((twisted == *target).then_some(lambda))
}

/// Render an integer twist list like `O(1)+O(-2)`.
pub fn describe_twists(twists: &[BigInt]) -> String {
    twists
        .iter()
        .map(|a| format!("O({a})"))
        .collect::<Vec<_>>()
        .join("+")
}
