//! Decision procedures for isomorphism of projective bundles, multiprojective
//! bundles and height-3 towers over projective spaces.
//!
//! Every [`Verdict`] carries a [`Fidelity`]. `SPLIT_EXACT` verdicts speak
//! about the varieties; `CHERN_LEVEL` verdicts speak only about Chow rings
//! and Chern classes, and `CONSISTENT` never claims an isomorphism.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::chern::{is_pullback_twist, ChernError, ChernVector, SplitBundle, TotalChernClass};
use crate::graded_ring::{GradedRingPresentation, RingElement, RingError};
use crate::intpoly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),
    #[error("not the Poincaré polynomial of a multiprojective space: {0}")]
    NotAProduct(String),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn violation<T>(msg: impl Into<String>) -> Result<T, DecideError> {
    Err(DecideError::HypothesisViolation(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Iso,
    NotIso,
    Consistent,
    RuledOut,
}

impl Decision {
    pub fn code(self) -> &'static str {
        match self {
            Decision::Iso => "ISO",
            Decision::NotIso => "NOT_ISO",
            Decision::Consistent => "CONSISTENT",
            Decision::RuledOut => "RULED_OUT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fidelity {
    SplitExact,
    ChernLevel,
}

impl Fidelity {
    pub fn code(self) -> &'static str {
        match self {
            Fidelity::SplitExact => "SPLIT_EXACT",
            Fidelity::ChernLevel => "CHERN_LEVEL",
        }
    }

    pub fn explanation(self) -> &'static str {
        match self {
            Fidelity::SplitExact => {
                "SPLIT_EXACT: inputs are sums of line bundles, so triviality up to a twist \
                 is decided exactly and the verdict is about the varieties themselves."
            }
            Fidelity::ChernLevel => {
                "CHERN_LEVEL: only Chern classes are known. The verdict concerns Chow rings \
                 and total Chern classes; c(E(x)L) = 1 does not make E(x)L trivial."
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReasonCode {
    CriteriaMet,
    MultisetMismatch,
    NotTwistTrivial,
    FactorCount,
    Rank,
    TwistListMismatch,
    NotPullbackTwist,
}

impl ReasonCode {
    pub fn code(self) -> &'static str {
        match self {
            ReasonCode::CriteriaMet => "CRITERIA_MET",
            ReasonCode::MultisetMismatch => "MULTISET_MISMATCH",
            ReasonCode::NotTwistTrivial => "NOT_TWIST_TRIVIAL",
            ReasonCode::FactorCount => "FACTOR_COUNT",
            ReasonCode::Rank => "RANK",
            ReasonCode::TwistListMismatch => "TWIST_LIST_MISMATCH",
            ReasonCode::NotPullbackTwist => "NOT_PULLBACK_TWIST",
        }
    }
}

/// Which branch of the height-3 tower classification applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TowerCase {
    /// `r` differs from both `m` and `n`.
    I,
    /// `r = m`.
    Ii,
    /// `r = n`.
    Iii,
}

impl TowerCase {
    pub fn label(self) -> &'static str {
        match self {
            TowerCase::I => "(i)",
            TowerCase::Ii => "(ii)",
            TowerCase::Iii => "(iii)",
        }
    }
}

/// Sorted list of projective-space dimensions with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultisetOfDims(Vec<u32>);

impl MultisetOfDims {
    pub fn new(mut dims: Vec<u32>) -> Self {
        dims.sort_unstable();
        MultisetOfDims(dims)
    }

    pub fn dims(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `prod (1 + t + … + t^{d})`.
    pub fn poincare_polynomial(&self) -> IntPoly {
        self.0.iter().fold(IntPoly::one(1), |acc, &d| {
            &acc * &IntPoly::univariate(vec![1; d as usize + 1])
        })
    }
}

impl fmt::Display for MultisetOfDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Recover `{n_1, …, n_r}` from `prod (1 + … + t^{n_i})` by peeling off the
/// smallest factor each round.
pub fn multiset_from_poincare(p: &IntPoly) -> Result<MultisetOfDims, DecideError> {
    let bad = |msg: &str| Err(DecideError::NotAProduct(msg.to_string()));
    if p.var_count() > 1 {
        return bad("polynomial is not univariate");
    }
    let deg = p.total_degree().unwrap_or(0) as usize;
    let coeffs: Vec<BigInt> = (0..=deg as u32).map(|i| p.coeff_univariate(i)).collect();
    if !coeffs[0].is_one() {
        return bad("constant term is not 1");
    }
    if coeffs.iter().any(Signed::is_negative) {
        return bad("negative coefficient");
    }
    let r = match coeffs.get(1).map(|c| c.to_usize()) {
        None => 0,
        Some(Some(r)) if r <= deg => r,
        Some(_) => return bad("coefficient of t exceeds the degree"),
    };
    // q = p * (1 - t)^r
    let mut q = coeffs;
    q.resize(deg + r + 1, BigInt::zero());
    for _ in 0..r {
        for i in (1..q.len()).rev() {
            let prev = q[i - 1].clone();
            q[i] -= prev;
        }
    }
    let mut dims = Vec::with_capacity(r);
    loop {
        while q.len() > 1 && q.last().is_some_and(Zero::is_zero) {
            q.pop();
        }
        if q.len() == 1 {
            break;
        }
        let d = (1..q.len()).find(|&i| !q[i].is_zero()).expect("nonconstant");
        if d == 1 {
            return bad("factor of dimension 0");
        }
        if dims.len() == r {
            return bad("more factors than the coefficient of t allows");
        }
        // divide by 1 - t^d: quot[i] = q[i] + quot[i-d]
        let mut quot: Vec<BigInt> = Vec::with_capacity(q.len());
        for i in 0..q.len() {
            let carry = if i >= d { quot[i - d].clone() } else { BigInt::zero() };
            quot.push(&q[i] + carry);
        }
        // exact iff the quotient's top d coefficients vanish
        let cut = q.len() - d;
        if quot[cut..].iter().any(|c| !c.is_zero()) {
            return bad("division by (1 - t^d) is not exact");
        }
        quot.truncate(cut);
        q = quot;
        dims.push(d as u32 - 1);
    }
    if !q[0].is_one() {
        return bad("leftover factor is not 1");
    }
    if dims.len() != r {
        return bad("factor count differs from the coefficient of t");
    }
    Ok(MultisetOfDims::new(dims))
}

/// Status of one necessary condition, with its witness when it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    /// `lambda` with `c = (1 + lambda)^rank`, or the twist in a pullback check.
    pub lambda: Option<RingElement>,
    /// Image of the hyperplane class in a pullback check.
    pub image_of_h: Option<RingElement>,
}

impl Check {
    fn new(name: &str, lambda: Option<RingElement>) -> Self {
        Check {
            name: name.to_string(),
            holds: lambda.is_some(),
            lambda,
            image_of_h: None,
        }
    }

    fn flag(name: &str, holds: bool) -> Self {
        Check {
            name: name.to_string(),
            holds,
            lambda: None,
            image_of_h: None,
        }
    }
}

/// `c(subject) = (1 + lambda)^rank`, so `c(subject ⊗ O(-lambda)) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistWitness {
    pub subject: String,
    pub lambda: RingElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub decision: Decision,
    pub fidelity: Fidelity,
    pub reason: ReasonCode,
    pub message: String,
    pub case: Option<TowerCase>,
    pub checks: Vec<Check>,
    pub twists: Vec<TwistWitness>,
    pub multisets: Option<(MultisetOfDims, MultisetOfDims)>,
    /// `E ≅ F ⊗ O(shift)` for same-base split decisions.
    pub shift: Option<BigInt>,
    pub violated: Option<String>,
}

impl Verdict {
    fn new(decision: Decision, fidelity: Fidelity, reason: ReasonCode, message: impl Into<String>) -> Self {
        Verdict {
            decision,
            fidelity,
            reason,
            message: message.into(),
            case: None,
            checks: Vec::new(),
            twists: Vec::new(),
            multisets: None,
            shift: None,
            violated: None,
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self.decision, Decision::Iso | Decision::Consistent)
    }
}

/// Chow ring of `P^n` with hyperplane class `x`.
pub fn base_ring(n: u32) -> Arc<GradedRingPresentation> {
    Arc::new(GradedRingPresentation::projective_space(n, "x"))
}

/// Fibre product over `base` of the projectivizations of the given bundles,
/// with new variables named by `names`.
pub fn multiprojective_bundle_ring(
    base: &Arc<GradedRingPresentation>,
    factors: &[(TotalChernClass, u32)],
    names: &[String],
) -> Result<Arc<GradedRingPresentation>, DecideError> {
    assert_eq!(factors.len(), names.len(), "one name per factor");
    let mut ring = Arc::clone(base);
    for ((c, rank), name) in factors.iter().zip(names) {
        if c.ring().as_ref() != base.as_ref() {
            return Err(ChernError::ForeignElement.into());
        }
        let lifted = TotalChernClass::from_element(c.to_element().pullback_to(&ring)?)?;
        ring = Arc::new(ring.projectivize(&lifted, *rank, name)?);
    }
    Ok(ring)
}

/// Ring of `P(E)` over its base, variables `x, u1`.
pub fn projective_bundle_ring(c: &ChernVector) -> Result<Arc<GradedRingPresentation>, DecideError> {
    let base = base_ring(c.base_dim());
    let total = c.total_chern(&base)?;
    Ok(Arc::new(base.projectivize(&total, c.rank(), "u1")?))
}

fn recovered_multiset(ring: &Arc<GradedRingPresentation>) -> Result<MultisetOfDims, DecideError> {
    multiset_from_poincare(&ring.poincare_polynomial())
}

fn fiber_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("u{i}")).collect()
}

fn constant_lambda(ring: &Arc<GradedRingPresentation>, a: &BigInt) -> RingElement {
    RingElement::var(ring, 0).scale(a)
}

/// `P(E) ≅ P(F)` at Chow-ring level for bundles on projective spaces of
/// different dimensions.
pub fn decide_pb_chow(e: &ChernVector, f: &ChernVector) -> Result<Verdict, DecideError> {
    let (m, n) = (e.base_dim(), f.base_dim());
    if m == n {
        return violation(format!(
            "base dimensions are both {m}; Chern data cannot decide same-base isomorphism, \
             use decide-pb-samebase with split bundles"
        ));
    }
    let left = recovered_multiset(&projective_bundle_ring(e)?)?;
    let right = recovered_multiset(&projective_bundle_ring(f)?)?;
    let multisets = Some((left.clone(), right.clone()));
    if left != right {
        let mut v = Verdict::new(
            Decision::NotIso,
            Fidelity::ChernLevel,
            ReasonCode::MultisetMismatch,
            format!("dimension multisets differ: {left} vs {right}"),
        );
        v.multisets = multisets;
        return Ok(v);
    }
    let mut twists = Vec::new();
    for (subject, bundle) in [("E", e), ("F", f)] {
        match bundle.trivializing_twist() {
            Some(a) => twists.push(TwistWitness {
                subject: subject.to_string(),
                lambda: constant_lambda(&base_ring(bundle.base_dim()), &a),
            }),
            None => {
                let mut v = Verdict::new(
                    Decision::NotIso,
                    Fidelity::ChernLevel,
                    ReasonCode::NotTwistTrivial,
                    format!("c({subject}) is not (1 + a h)^{} for any integer a", bundle.rank()),
                );
                v.multisets = multisets;
                v.violated = Some(subject.to_string());
                return Ok(v);
            }
        }
    }
    let mut v = Verdict::new(
        Decision::Iso,
        Fidelity::ChernLevel,
        ReasonCode::CriteriaMet,
        "dimension multisets agree and both total Chern classes are binomial powers",
    );
    v.multisets = multisets;
    v.twists = twists;
    Ok(v)
}

/// Split bundles on the same `P^n`: `P(E) ≅ P(F)` iff the twist lists agree
/// up to a common shift.
pub fn decide_pb_split_same_base(e: &SplitBundle, f: &SplitBundle) -> Result<Verdict, DecideError> {
    let (Some(te), Some(tf)) = (e.integer_twists(), f.integer_twists()) else {
        return violation("split bundles must live on a projective space");
    };
    let (m, n) = (e.ring().top_degree(), f.ring().top_degree());
    if m != n {
        return violation(format!("base dimensions differ ({m} vs {n}); use decide-pb"));
    }
    if te.len() != tf.len() {
        return Ok(Verdict::new(
            Decision::NotIso,
            Fidelity::SplitExact,
            ReasonCode::Rank,
            format!("ranks differ: {} vs {}", te.len(), tf.len()),
        ));
    }
    let normalize = |t: &[BigInt]| {
        let mut t = t.to_vec();
        t.sort();
        let min = t[0].clone();
        let shifted: Vec<BigInt> = t.iter().map(|a| a - &min).collect();
        (shifted, min)
    };
    let (ne, min_e) = normalize(&te);
    let (nf, min_f) = normalize(&tf);
    if ne != nf {
        return Ok(Verdict::new(
            Decision::NotIso,
            Fidelity::SplitExact,
            ReasonCode::TwistListMismatch,
            "normalized twist lists differ",
        ));
    }
    let shift = min_e - min_f;
    let mut v = Verdict::new(
        Decision::Iso,
        Fidelity::SplitExact,
        ReasonCode::CriteriaMet,
        format!("E is F twisted by O({shift})"),
    );
    v.shift = Some(shift);
    Ok(v)
}

fn check_split_base(bundles: &[SplitBundle], dim: u32, side: &str) -> Result<(), DecideError> {
    for (i, b) in bundles.iter().enumerate() {
        if b.integer_twists().is_none() || b.ring().top_degree() != dim {
            return violation(format!("{side}_{} does not live on P^{dim}", i + 1));
        }
    }
    Ok(())
}

/// Multiprojective bundles of split bundles over projective spaces of
/// different dimensions.
pub fn decide_mpb_split(
    m: u32,
    es: &[SplitBundle],
    n: u32,
    fs: &[SplitBundle],
) -> Result<Verdict, DecideError> {
    if m == n {
        return violation(format!("base dimensions are both {m}"));
    }
    check_split_base(es, m, "E")?;
    check_split_base(fs, n, "F")?;
    if es.len() != fs.len() {
        return Ok(Verdict::new(
            Decision::NotIso,
            Fidelity::SplitExact,
            ReasonCode::FactorCount,
            format!("factor counts differ: {} vs {}", es.len(), fs.len()),
        ));
    }
    let ring_of = |dim: u32, bs: &[SplitBundle]| {
        let base = base_ring(dim);
        let factors: Vec<(TotalChernClass, u32)> = bs
            .iter()
            .map(|b| {
                let c = b.chern_vector()?.total_chern(&base)?;
                Ok((c, b.rank()))
            })
            .collect::<Result<_, DecideError>>()?;
        multiprojective_bundle_ring(&base, &factors, &fiber_names(bs.len()))
    };
    let left = recovered_multiset(&ring_of(m, es)?)?;
    let right = recovered_multiset(&ring_of(n, fs)?)?;
    let multisets = Some((left.clone(), right.clone()));
    if left != right {
        let mut v = Verdict::new(
            Decision::NotIso,
            Fidelity::SplitExact,
            ReasonCode::MultisetMismatch,
            format!("dimension multisets differ: {left} vs {right}"),
        );
        v.multisets = multisets;
        return Ok(v);
    }
    let mut twists = Vec::new();
    for (side, bundles) in [("E", es), ("F", fs)] {
        for (i, b) in bundles.iter().enumerate() {
            let subject = format!("{side}_{}", i + 1);
            match b.is_constant_twist() {
                Some(lambda) => twists.push(TwistWitness { subject, lambda }),
                None => {
                    let mut v = Verdict::new(
                        Decision::NotIso,
                        Fidelity::SplitExact,
                        ReasonCode::NotTwistTrivial,
                        format!("{subject} is not a twist of a trivial bundle"),
                    );
                    v.multisets = multisets;
                    v.violated = Some(subject);
                    return Ok(v);
                }
            }
        }
    }
    let mut v = Verdict::new(
        Decision::Iso,
        Fidelity::SplitExact,
        ReasonCode::CriteriaMet,
        "factor counts and dimension multisets agree and every factor is a twisted trivial bundle",
    );
    v.multisets = multisets;
    v.twists = twists;
    Ok(v)
}

/// Height-3 towers `P_{P(E1)}(E2)` over `P^m` and `P_{P(F1)}(F2)` over
/// `P^n`, with `rank E1 = rank F1 = r + 1`, `rank E2 = n + 1`,
/// `rank F2 = m + 1`. `e2` lives on the ring of `P(E1)`, `f2` on that of
/// `P(F1)`.
#[derive(Debug, Clone)]
pub struct Tower3 {
    pub m: u32,
    pub n: u32,
    pub r: u32,
    pub e1: ChernVector,
    pub e2: TotalChernClass,
    pub f1: ChernVector,
    pub f2: TotalChernClass,
}

pub const CHECK_PRECHECK: &str = "dimension multisets agree";

fn trivial_name(subject: &str) -> String {
    format!("{subject} trivial upto twist")
}

fn pullback_name(target: &str, source: &str) -> String {
    format!("{target} pullback-twist of {source}")
}

/// Second-projection class on `P(B) = P^k × P^r` when `c(B) = (1 + l)^{r+1}`:
/// `u1 - l`.
fn second_projection(ring: &Arc<GradedRingPresentation>, lambda: Option<&RingElement>) -> Result<RingElement, DecideError> {
    let u = RingElement::var(ring, 1);
    match lambda {
        Some(l) => Ok(u.try_sub(&l.pullback_to(ring)?)?),
        None => Ok(u),
    }
}

fn pullback_check(
    target_name: &str,
    target: &TotalChernClass,
    rank: u32,
    source_name: &str,
    source: &ChernVector,
    source_trivializer: Option<&RingElement>,
) -> Result<Check, DecideError> {
    let image = second_projection(target.ring(), source_trivializer)?;
    let lambda = is_pullback_twist(target, rank, source, &image)?;
    let mut check = Check::new(&pullback_name(target_name, source_name), lambda);
    check.image_of_h = Some(image);
    Ok(check)
}

/// Necessary Chern-level conclusions for an isomorphism of height-3 towers.
/// Never returns `ISO`: passing all checks gives `CONSISTENT`.
pub fn classify_tower3(t: &Tower3) -> Result<Verdict, DecideError> {
    let Tower3 { m, n, r, .. } = *t;
    if m >= n {
        return violation(format!("need m < n, got m = {m}, n = {n}"));
    }
    if r < 1 {
        return violation("r must be positive");
    }
    if t.e1.base_dim() != m || t.f1.base_dim() != n {
        return violation("E_1 must live on P^m and F_1 on P^n");
    }
    if t.e1.rank() != r + 1 || t.f1.rank() != r + 1 {
        return violation(format!("E_1 and F_1 must have rank r+1 = {}", r + 1));
    }
    let ring_e1 = projective_bundle_ring(&t.e1)?;
    let ring_f1 = projective_bundle_ring(&t.f1)?;
    if t.e2.ring().as_ref() != ring_e1.as_ref() {
        return violation("c(E_2) does not live on the ring of P(E_1)");
    }
    if t.f2.ring().as_ref() != ring_f1.as_ref() {
        return violation("c(F_2) does not live on the ring of P(F_1)");
    }
    if t.e2.effective_degree() > (n + 1) as usize {
        return violation(format!("c(E_2) has components beyond rank {}", n + 1));
    }
    if t.f2.effective_degree() > (m + 1) as usize {
        return violation(format!("c(F_2) has components beyond rank {}", m + 1));
    }

    let tower_e = Arc::new(ring_e1.projectivize(&t.e2, n + 1, "u2")?);
    let tower_f = Arc::new(ring_f1.projectivize(&t.f2, m + 1, "u2")?);
    let left = recovered_multiset(&tower_e)?;
    let right = recovered_multiset(&tower_f)?;
    let precheck = Check::flag(CHECK_PRECHECK, left == right);

    let case = if r == m {
        TowerCase::Ii
    } else if r == n {
        TowerCase::Iii
    } else {
        TowerCase::I
    };

    let lift = |c: &ChernVector, ring: &Arc<GradedRingPresentation>| {
        c.trivializing_twist().map(|a| constant_lambda(ring, &a))
    };
    let base_m = base_ring(m);
    let base_n = base_ring(n);
    let mut checks = vec![precheck];
    match case {
        TowerCase::I => {
            checks.push(Check::new(&trivial_name("E_1"), lift(&t.e1, &base_m)));
            checks.push(Check::new(&trivial_name("E_2"), t.e2.is_trivial_up_to_twist(n + 1)));
            checks.push(Check::new(&trivial_name("F_1"), lift(&t.f1, &base_n)));
            checks.push(Check::new(&trivial_name("F_2"), t.f2.is_trivial_up_to_twist(m + 1)));
        }
        TowerCase::Ii => {
            checks.push(Check::new(&trivial_name("E_2"), t.e2.is_trivial_up_to_twist(n + 1)));
            let f1 = Check::new(&trivial_name("F_1"), lift(&t.f1, &base_n));
            let pb = pullback_check("F_2", &t.f2, m + 1, "E_1", &t.e1, f1.lambda.as_ref())?;
            checks.push(f1);
            checks.push(pb);
        }
        TowerCase::Iii => {
            checks.push(Check::new(&trivial_name("F_2"), t.f2.is_trivial_up_to_twist(m + 1)));
            let e1 = Check::new(&trivial_name("E_1"), lift(&t.e1, &base_m));
            let pb = pullback_check("E_2", &t.e2, n + 1, "F_1", &t.f1, e1.lambda.as_ref())?;
            checks.push(e1);
            checks.push(pb);
        }
    }

    let failed = checks.iter().find(|c| !c.holds).map(|c| c.name.clone());
    let mut v = match &failed {
        None => Verdict::new(
            Decision::Consistent,
            Fidelity::ChernLevel,
            ReasonCode::CriteriaMet,
            format!("all necessary conditions of case {} hold", case.label()),
        ),
        Some(name) => {
            let reason = if name.contains("pullback") {
                ReasonCode::NotPullbackTwist
            } else if name == CHECK_PRECHECK {
                ReasonCode::MultisetMismatch
            } else {
                ReasonCode::NotTwistTrivial
            };
            Verdict::new(
                Decision::RuledOut,
                Fidelity::ChernLevel,
                reason,
                format!("violated: {name}"),
            )
        }
    };
    v.case = Some(case);
    v.violated = failed;
    v.multisets = Some((left, right));
    v.checks = checks;
    Ok(v)
}

pub const COR_RANKS: &str = "(i) r=n and s=m";
pub const COR_E_TRIVIAL: &str = "(ii) E trivial upto twist";
pub const COR_F_STABLE: &str = "(iii) c(F(x)M)=1 for some M";

/// Status of the three necessary conditions for `P(E) ≅ P(F)` with `m < n`.
pub fn corollary43_report(e: &ChernVector, f: &ChernVector) -> Result<Verdict, DecideError> {
    let (m, n) = (e.base_dim(), f.base_dim());
    if m >= n {
        return violation(format!("need m < n, got m = {m}, n = {n}"));
    }
    let ranks_ok = e.rank() - 1 == n && f.rank() - 1 == m;
    let base_m = base_ring(m);
    let base_n = base_ring(n);
    let checks = vec![
        Check::flag(COR_RANKS, ranks_ok),
        Check::new(
            COR_E_TRIVIAL,
            e.trivializing_twist().map(|a| constant_lambda(&base_m, &a)),
        ),
        Check::new(
            COR_F_STABLE,
            f.trivializing_twist().map(|a| constant_lambda(&base_n, &a)),
        ),
    ];
    let failed = checks.iter().find(|c| !c.holds).map(|c| c.name.clone());
    let mut v = match &failed {
        None => Verdict::new(
            Decision::Consistent,
            Fidelity::ChernLevel,
            ReasonCode::CriteriaMet,
            "all three conditions hold; whether F itself is trivial is not decided",
        ),
        Some(name) => Verdict::new(
            Decision::RuledOut,
            Fidelity::ChernLevel,
            if name == COR_RANKS { ReasonCode::Rank } else { ReasonCode::NotTwistTrivial },
            format!("violated: {name}"),
        ),
    };
    v.violated = failed;
    v.checks = checks;
    Ok(v)
}
