//! JSON input documents and their conversion to library values.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::chern::{ChernVector, SplitBundle, TotalChernClass};
use crate::decide::{base_ring, multiprojective_bundle_ring};
use crate::graded_ring::{GradedRingPresentation, RingElement};
use crate::intpoly::IntPoly;

/// Invalid input, located by line/column or by field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub location: String,
    pub message: String,
}

impl InputError {
    pub fn at(path: &str, message: impl ToString) -> Self {
        InputError {
            location: if path.is_empty() { ".".to_string() } else { path.to_string() },
            message: message.to_string(),
        }
    }
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid input at {}: {}", self.location, self.message)
    }
}

/// Parse `text` as `T`, reporting syntax errors by line and column and
/// type errors by field path.
pub fn parse_document<T: DeserializeOwned>(text: &str) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        let path = e.path().to_string();
        if inner.is_syntax() || inner.is_eof() || path == "." {
            InputError {
                location: format!("line {} column {}", inner.line(), inner.column()),
                message: strip_position(&inner.to_string()),
            }
        } else {
            InputError::at(&path, strip_position(&inner.to_string()))
        }
    })?;
    Ok(value)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ScalarDoc {
    Int(i64),
    Text(String),
}

/// A cohomology class: an integer multiple of `x^degree`, or explicit
/// `{monomial: coefficient}` terms in the ring's variable names.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ClassDoc {
    Int(i64),
    Text(String),
    Terms(BTreeMap<String, ScalarDoc>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitDoc {
    pub base: Option<u32>,
    pub twists: Vec<ClassDoc>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChernDoc {
    pub base: Option<u32>,
    pub rank: u32,
    #[serde(default)]
    pub coeffs: Vec<ClassDoc>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BundleDoc {
    SplitBundle(SplitDoc),
    ChernBundle(ChernDoc),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimDoc {
    pub dim: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerDoc {
    pub base: u32,
    pub levels: Vec<BundleDoc>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiprojDoc {
    pub base: u32,
    pub bundles: Vec<BundleDoc>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceDoc {
    ProjectiveSpace(DimDoc),
    Tower(TowerDoc),
    Multiproj(MultiprojDoc),
    /// Ring presentation text such as `Z[x,u1]/(x^2, u1^2)`.
    Presentation(String),
}

/// Payload of `ring` and `poincare`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceQuery {
    pub query: Option<String>,
    pub space: Option<SpaceDoc>,
    pub polynomial: Option<String>,
}

/// Payload of `decide-pb`, `decide-pb-samebase` and `cor43`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundlePair {
    pub query: Option<String>,
    #[serde(rename = "E")]
    pub e: BundleDoc,
    #[serde(rename = "F")]
    pub f: BundleDoc,
}

/// Payload of `decide-mpb`, `decide-tower3` and `oracle`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacePair {
    pub query: Option<String>,
    pub left: SpaceDoc,
    pub right: SpaceDoc,
}

fn join(path: &str, field: &str) -> String {
    if path.is_empty() {
        field.to_string()
    } else {
        format!("{path}.{field}")
    }
}

fn scalar(doc: &ScalarDoc, path: &str) -> Result<BigInt, InputError> {
    match doc {
        ScalarDoc::Int(a) => Ok(BigInt::from(*a)),
        ScalarDoc::Text(s) => s
            .trim()
            .parse()
            .map_err(|_| InputError::at(path, format!("`{s}` is not an integer"))),
    }
}

fn integer(doc: &ClassDoc, path: &str) -> Result<BigInt, InputError> {
    match doc {
        ClassDoc::Int(a) => Ok(BigInt::from(*a)),
        ClassDoc::Text(s) => scalar(&ScalarDoc::Text(s.clone()), path),
        ClassDoc::Terms(_) => Err(InputError::at(path, "expected an integer on a projective space")),
    }
}

fn class_in(
    ring: &Arc<GradedRingPresentation>,
    doc: &ClassDoc,
    degree: u32,
    path: &str,
) -> Result<RingElement, InputError> {
    let names = ring.names();
    let poly = match doc {
        ClassDoc::Int(_) | ClassDoc::Text(_) => {
            IntPoly::var(ring.var_count(), 0).pow(degree).scale(&integer(doc, path)?)
        }
        ClassDoc::Terms(terms) => {
            let mut acc = IntPoly::zero(ring.var_count());
            for (mono, coeff) in terms {
                let key_path = join(path, mono);
                let m = IntPoly::parse(mono, &names).map_err(|e| InputError::at(&key_path, e))?;
                acc = &acc + &m.scale(&scalar(coeff, &key_path)?);
            }
            acc
        }
    };
    if !poly.is_zero() && !poly.is_homogeneous_of(degree) {
        return Err(InputError::at(path, format!("class is not homogeneous of degree {degree}")));
    }
    RingElement::new(ring, &poly).map_err(|e| InputError::at(path, e))
}

fn check_base(declared: Option<u32>, expected: u32, path: &str) -> Result<(), InputError> {
    match declared {
        Some(b) if b != expected => Err(InputError::at(
            &join(path, "base"),
            format!("base {b} does not match the enclosing base {expected}"),
        )),
        _ => Ok(()),
    }
}

fn bundle_path(path: &str, doc: &BundleDoc) -> String {
    match doc {
        BundleDoc::SplitBundle(_) => join(path, "split_bundle"),
        BundleDoc::ChernBundle(_) => join(path, "chern_bundle"),
    }
}

/// Chern vector of a bundle on `P^base`; `base` may come from the document.
pub fn chern_vector(doc: &BundleDoc, base: Option<u32>, path: &str) -> Result<ChernVector, InputError> {
    let path = bundle_path(path, doc);
    let declared = match doc {
        BundleDoc::SplitBundle(s) => s.base,
        BundleDoc::ChernBundle(c) => c.base,
    };
    if let Some(b) = base {
        check_base(declared, b, &path)?;
    }
    let base = base
        .or(declared)
        .ok_or_else(|| InputError::at(&path, "missing field `base`"))?;
    match doc {
        BundleDoc::SplitBundle(s) => {
            let twists = s
                .twists
                .iter()
                .enumerate()
                .map(|(i, t)| integer(t, &format!("{path}.twists[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            ChernVector::from_twists(base, &twists).map_err(|e| InputError::at(&join(&path, "twists"), e))
        }
        BundleDoc::ChernBundle(c) => {
            let coeffs = c
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, t)| integer(t, &format!("{path}.coeffs[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            if c.rank < 2 {
                return Err(InputError::at(&join(&path, "rank"), "rank must be at least 2"));
            }
            ChernVector::new(base, c.rank, coeffs).map_err(|e| InputError::at(&join(&path, "coeffs"), e))
        }
    }
}

/// Split bundle with integer twists on `P^base`.
pub fn split_on_projective_space(doc: &BundleDoc, path: &str) -> Result<SplitBundle, InputError> {
    let BundleDoc::SplitBundle(s) = doc else {
        return Err(InputError::at(&bundle_path(path, doc), "a split_bundle is required"));
    };
    let path = bundle_path(path, doc);
    let base = s.base.ok_or_else(|| InputError::at(&path, "missing field `base`"))?;
    split_in_ring(&base_ring(base), s, &path)
}

fn split_in_ring(
    ring: &Arc<GradedRingPresentation>,
    s: &SplitDoc,
    path: &str,
) -> Result<SplitBundle, InputError> {
    let summands = s
        .twists
        .iter()
        .enumerate()
        .map(|(i, t)| class_in(ring, t, 1, &format!("{path}.twists[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    SplitBundle::new(ring, summands).map_err(|e| InputError::at(&join(path, "twists"), e))
}

/// Total Chern class and rank of a bundle on `ring`, whose base projective
/// space has dimension `base`.
pub fn bundle_in_ring(
    ring: &Arc<GradedRingPresentation>,
    base: u32,
    doc: &BundleDoc,
    path: &str,
) -> Result<(TotalChernClass, u32), InputError> {
    let path = bundle_path(path, doc);
    match doc {
        BundleDoc::SplitBundle(s) => {
            check_base(s.base, base, &path)?;
            let b = split_in_ring(ring, s, &path)?;
            Ok((b.total_chern(), b.rank()))
        }
        BundleDoc::ChernBundle(c) => {
            check_base(c.base, base, &path)?;
            if c.rank < 2 {
                return Err(InputError::at(&join(&path, "rank"), "rank must be at least 2"));
            }
            let max = c.rank.min(ring.top_degree()) as usize;
            if c.coeffs.len() > max {
                return Err(InputError::at(
                    &join(&path, "coeffs"),
                    format!("{} coefficients given, at most {max} allowed", c.coeffs.len()),
                ));
            }
            let comps = c
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, d)| class_in(ring, d, i as u32 + 1, &format!("{path}.coeffs[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let total = TotalChernClass::from_components(ring, &comps)
                .map_err(|e| InputError::at(&join(&path, "coeffs"), e))?;
            Ok((total, c.rank))
        }
    }
}

/// Chow ring of a described space with canonical names `x, u1, u2, …`.
pub fn space_ring(doc: &SpaceDoc, path: &str) -> Result<Arc<GradedRingPresentation>, InputError> {
    match doc {
        SpaceDoc::ProjectiveSpace(d) => Ok(base_ring(d.dim)),
        SpaceDoc::Presentation(text) => GradedRingPresentation::parse(text)
            .map(Arc::new)
            .map_err(|e| InputError::at(&join(path, "presentation"), e)),
        SpaceDoc::Tower(t) => {
            let path = join(path, "tower");
            let mut ring = base_ring(t.base);
            for (i, level) in t.levels.iter().enumerate() {
                let lp = format!("{path}.levels[{i}]");
                let (c, rank) = bundle_in_ring(&ring, t.base, level, &lp)?;
                let next = ring
                    .projectivize(&c, rank, &format!("u{}", i + 1))
                    .map_err(|e| InputError::at(&lp, e))?;
                ring = Arc::new(next);
            }
            Ok(ring)
        }
        SpaceDoc::Multiproj(mp) => {
            let path = join(path, "multiproj");
            let base = base_ring(mp.base);
            let factors = mp
                .bundles
                .iter()
                .enumerate()
                .map(|(i, b)| bundle_in_ring(&base, mp.base, b, &format!("{path}.bundles[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let names: Vec<String> = (1..=factors.len()).map(|i| format!("u{i}")).collect();
            multiprojective_bundle_ring(&base, &factors, &names).map_err(|e| InputError::at(&path, e))
        }
    }
}

/// Base dimension and split factors of a `multiproj` space.
pub fn multiproj_split(doc: &SpaceDoc, path: &str) -> Result<(u32, Vec<SplitBundle>), InputError> {
    let SpaceDoc::Multiproj(mp) = doc else {
        return Err(InputError::at(path, "a multiproj space is required"));
    };
    let path = join(path, "multiproj");
    let ring = base_ring(mp.base);
    let bundles = mp
        .bundles
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let bp = format!("{path}.bundles[{i}]");
            match b {
                BundleDoc::SplitBundle(s) => {
                    let bp = join(&bp, "split_bundle");
                    check_base(s.base, mp.base, &bp)?;
                    split_in_ring(&ring, s, &bp)
                }
                BundleDoc::ChernBundle(_) => Err(InputError::at(&bp, "decide-mpb requires split bundles")),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((mp.base, bundles))
}

/// A height-2 tower description: base dimension, first bundle as a Chern
/// vector and second bundle on the ring of its projectivization.
pub struct Tower2 {
    pub base: u32,
    pub first: ChernVector,
    pub second: TotalChernClass,
    pub second_rank: u32,
}

pub fn tower2(doc: &SpaceDoc, path: &str) -> Result<Tower2, InputError> {
    let SpaceDoc::Tower(t) = doc else {
        return Err(InputError::at(path, "a tower space is required"));
    };
    let path = join(path, "tower");
    if t.levels.len() != 2 {
        return Err(InputError::at(
            &join(&path, "levels"),
            format!("expected 2 levels, found {}", t.levels.len()),
        ));
    }
    let first = chern_vector(&t.levels[0], Some(t.base), &format!("{path}.levels[0]"))?;
    let ring = crate::decide::projective_bundle_ring(&first)
        .map_err(|e| InputError::at(&format!("{path}.levels[0]"), e))?;
    let (second, second_rank) = bundle_in_ring(&ring, t.base, &t.levels[1], &format!("{path}.levels[1]"))?;
    Ok(Tower2 {
        base: t.base,
        first,
        second,
        second_rank,
    })
}

/// Univariate polynomial in `t`.
pub fn poincare_text(text: &str, path: &str) -> Result<IntPoly, InputError> {
    IntPoly::parse(text, &["t"]).map_err(|e| InputError::at(path, e))
}
