//! Bounded brute-force search for graded ring isomorphisms.
//!
//! All rings here are generated in degree 1 with a free degree-1 part, so a
//! graded isomorphism is determined by an invertible integer matrix acting on
//! the variables. The search tries every unimodular matrix with entries in
//! `[-B, B]`; success is a certificate, failure at a bound proves nothing.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::graded_ring::GradedRingPresentation;
use crate::intpoly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("matrix is not square of size {expected}")]
    Dimension { expected: usize },
    #[error("determinant is {0}, not ±1")]
    NotUnimodular(BigInt),
    #[error("ring has a relation of degree {degree} in variable {index}; need degree >= 2")]
    DegenerateRing { index: usize, degree: u32 },
}

/// Square integer matrix with determinant ±1. Row `j` lists the image of
/// source variable `j` in the target's variable basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl UniMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self, OracleError> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(OracleError::Dimension { expected: k });
        }
        let det = determinant(&rows);
        if det.abs() != BigInt::one() {
            return Err(OracleError::NotUnimodular(det));
        }
        Ok(UniMatrix { rows })
    }

    pub fn identity(k: usize) -> Self {
        let rows = (0..k)
            .map(|i| (0..k).map(|j| BigInt::from((i == j) as i32)).collect())
            .collect();
        UniMatrix { rows }
    }

    fn from_small(k: usize, entries: &[i64]) -> Self {
        let rows = entries
            .chunks(k)
            .map(|r| r.iter().map(|&a| BigInt::from(a)).collect())
            .collect();
        UniMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.rows)
    }

    /// Inverse, which is integral since the determinant is ±1.
    pub fn inverse(&self) -> UniMatrix {
        let k = self.size();
        let det = self.determinant();
        let rows = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        // adj[i][j] = (-1)^{i+j} minor(j, i)
                        let minor = determinant(&minor_of(&self.rows, j, i));
                        let cof = if (i + j) % 2 == 0 { minor } else { -minor };
                        cof * &det
                    })
                    .collect()
            })
            .collect();
        UniMatrix { rows }
    }

    pub fn mul(&self, other: &UniMatrix) -> UniMatrix {
        let k = self.size();
        let rows = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| (0..k).map(|l| &self.rows[i][l] * &other.rows[l][j]).sum())
                    .collect()
            })
            .collect();
        UniMatrix { rows }
    }

    /// Images of the source variables as linear forms.
    fn images(&self) -> Vec<IntPoly> {
        self.rows.iter().map(|r| IntPoly::from_linear_coords(r)).collect()
    }
}

impl fmt::Display for UniMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let entries: Vec<String> = r.iter().map(BigInt::to_string).collect();
                format!("[{}]", entries.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

fn minor_of(rows: &[Vec<BigInt>], skip_row: usize, skip_col: usize) -> Vec<Vec<BigInt>> {
    rows.iter()
        .enumerate()
        .filter(|&(i, _)| i != skip_row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|&(j, _)| j != skip_col)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect()
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let k = rows.len();
    if k == 0 {
        return BigInt::one();
    }
    let mut a = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for p in 0..k - 1 {
        if a[p][p].is_zero() {
            match (p + 1..k).find(|&i| !a[i][p].is_zero()) {
                Some(i) => {
                    a.swap(p, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in p + 1..k {
            for j in p + 1..k {
                a[i][j] = (&a[i][j] * &a[p][p] - &a[i][p] * &a[p][j]) / &prev;
            }
        }
        prev = a[p][p].clone();
    }
    sign * &a[k - 1][k - 1]
}

fn small_determinant(k: usize, entries: &[i64]) -> i128 {
    let mut a: Vec<i128> = entries.iter().map(|&x| x as i128).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for p in 0..k.saturating_sub(1) {
        if a[p * k + p] == 0 {
            match (p + 1..k).find(|&i| a[i * k + p] != 0) {
                Some(i) => {
                    for j in 0..k {
                        a.swap(p * k + j, i * k + j);
                    }
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in p + 1..k {
            for j in p + 1..k {
                a[i * k + j] = (a[i * k + j] * a[p * k + p] - a[i * k + p] * a[p * k + j]) / prev;
            }
        }
        prev = a[p * k + p];
    }
    sign * a[k * k - 1]
}

/// Lazy enumeration of all integer `k×k` tuples with entries in `[-B, B]`,
/// grouped by L1 distance from the identity; within a group the order is
/// row-major lexicographic with entries ascending.
struct Shells {
    k: usize,
    bound: i64,
    shell: u64,
    max_shell: u64,
    current: Option<Vec<i64>>,
    // suffix_cap[p] = max cost of positions p..k*k
    suffix_cap: Vec<u64>,
}

impl Shells {
    fn new(k: usize, bound: i64) -> Self {
        let n = k * k;
        let mut suffix_cap = vec![0u64; n + 1];
        for p in (0..n).rev() {
            let diag = p / k == p % k;
            suffix_cap[p] = suffix_cap[p + 1] + bound as u64 + diag as u64;
        }
        Shells {
            k,
            bound,
            shell: 0,
            max_shell: suffix_cap[0],
            current: None,
            suffix_cap,
        }
    }

    fn cost(&self, p: usize, v: i64) -> u64 {
        let centre = (p / self.k == p % self.k) as i64;
        (v - centre).unsigned_abs()
    }

    /// Lex-smallest fill of positions `from..` spending exactly `budget`.
    fn fill(&self, entries: &mut [i64], from: usize, mut budget: u64) -> bool {
        for (p, slot) in entries.iter_mut().enumerate().skip(from) {
            let rest = self.suffix_cap[p + 1];
            let v = (-self.bound..=self.bound).find(|&v| {
                let c = self.cost(p, v);
                c <= budget && budget - c <= rest
            });
            match v {
                Some(v) => {
                    budget -= self.cost(p, v);
                    *slot = v;
                }
                None => return false,
            }
        }
        budget == 0
    }

    fn advance(&self, entries: &mut [i64]) -> bool {
        let n = entries.len();
        let mut spent: Vec<u64> = Vec::with_capacity(n + 1);
        spent.push(0);
        for p in 0..n {
            spent.push(spent[p] + self.cost(p, entries[p]));
        }
        for p in (0..n).rev() {
            for v in entries[p] + 1..=self.bound {
                let used = spent[p] + self.cost(p, v);
                if used <= self.shell && self.shell - used <= self.suffix_cap[p + 1] {
                    entries[p] = v;
                    if self.fill(entries, p + 1, self.shell - used) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

impl Iterator for Shells {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.bound < 0 || self.k == 0 {
            return None;
        }
        if let Some(mut cur) = self.current.take() {
            if self.advance(&mut cur) {
                self.current = Some(cur.clone());
                return Some(cur);
            }
            self.shell += 1;
        }
        while self.shell <= self.max_shell {
            let mut entries = vec![0i64; self.k * self.k];
            if self.fill(&mut entries, 0, self.shell) {
                self.current = Some(entries.clone());
                return Some(entries);
            }
            self.shell += 1;
        }
        None
    }
}

fn unimodular_entries(k: usize, bound: u32) -> impl Iterator<Item = Vec<i64>> {
    Shells::new(k, bound as i64).filter(move |e| small_determinant(k, e).abs() == 1)
}

/// Every `k×k` integer matrix with entries in `[-B, B]` and determinant ±1,
/// each once, nearest to the identity first.
pub fn enumerate_unimodular(k: usize, bound: u32) -> impl Iterator<Item = UniMatrix> {
    unimodular_entries(k, bound).map(move |e| UniMatrix::from_small(k, &e))
}

/// Outcome of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub found: Option<UniMatrix>,
    /// Unimodular candidates tested, up to and including the hit.
    pub matrices_tried: u64,
    pub bound: u32,
    pub poincare_mismatch: bool,
}

impl SearchReport {
    /// Not finding a matrix at a finite bound is not a proof of
    /// non-isomorphism.
    pub fn caveat(&self) -> bool {
        self.found.is_none() && !self.poincare_mismatch
    }
}

/// Every relation must have degree at least 2, so that degree 1 is free on
/// the variables.
pub fn check_generated_in_degree_one(r: &GradedRingPresentation) -> Result<(), OracleError> {
    match r.relation_degrees().iter().position(|&d| d < 2) {
        Some(index) => Err(OracleError::DegenerateRing {
            index,
            degree: r.relation_degrees()[index],
        }),
        None => Ok(()),
    }
}

/// Source relations with ascending degree, so cheap failures come first.
fn sorted_relations(r1: &GradedRingPresentation) -> Vec<&IntPoly> {
    let mut rels: Vec<(u32, &IntPoly)> = r1
        .relations()
        .iter()
        .zip(r1.relation_degrees())
        .map(|(p, &d)| (d, p))
        .collect();
    rels.sort_by_key(|&(d, _)| d);
    rels.into_iter().map(|(_, p)| p).collect()
}

fn relations_vanish(relations: &[&IntPoly], r2: &GradedRingPresentation, a: &UniMatrix) -> bool {
    let images = a.images();
    relations.iter().all(|rel| {
        let image = rel.substitute_linear(&images).expect("linear images of matching size");
        r2.normal_form(&image).is_zero()
    })
}

/// True iff `a` is unimodular and sends every relation of `r1` to zero in
/// `r2`.
pub fn verify_matrix(
    r1: &GradedRingPresentation,
    r2: &GradedRingPresentation,
    a: &[Vec<BigInt>],
) -> Result<bool, OracleError> {
    let k = r1.var_count();
    if r2.var_count() != k || a.len() != k || a.iter().any(|r| r.len() != k) {
        return Err(OracleError::Dimension { expected: k });
    }
    let Ok(m) = UniMatrix::new(a.to_vec()) else {
        return Ok(false);
    };
    Ok(relations_vanish(&sorted_relations(r1), r2, &m))
}

fn prepare(
    r1: &GradedRingPresentation,
    r2: &GradedRingPresentation,
    bound: u32,
) -> Result<Option<SearchReport>, OracleError> {
    check_generated_in_degree_one(r1)?;
    check_generated_in_degree_one(r2)?;
    if r1.var_count() != r2.var_count() || r1.poincare_polynomial() != r2.poincare_polynomial() {
        return Ok(Some(SearchReport {
            found: None,
            matrices_tried: 0,
            bound,
            poincare_mismatch: true,
        }));
    }
    Ok(None)
}

/// First matrix in enumeration order realizing an isomorphism `r1 → r2`.
pub fn find_graded_iso(
    r1: &GradedRingPresentation,
    r2: &GradedRingPresentation,
    bound: u32,
) -> Result<SearchReport, OracleError> {
    if let Some(report) = prepare(r1, r2, bound)? {
        return Ok(report);
    }
    let relations = sorted_relations(r1);
    let mut tried = 0u64;
    for a in enumerate_unimodular(r1.var_count(), bound) {
        tried += 1;
        if relations_vanish(&relations, r2, &a) {
            return Ok(SearchReport {
                found: Some(a),
                matrices_tried: tried,
                bound,
                poincare_mismatch: false,
            });
        }
    }
    Ok(SearchReport {
        found: None,
        matrices_tried: tried,
        bound,
        poincare_mismatch: false,
    })
}

const CHUNK: usize = 2048;

/// Same result as [`find_graded_iso`], testing candidates in parallel
/// chunks and keeping the earliest hit.
pub fn find_graded_iso_parallel(
    r1: &GradedRingPresentation,
    r2: &GradedRingPresentation,
    bound: u32,
) -> Result<SearchReport, OracleError> {
    if let Some(report) = prepare(r1, r2, bound)? {
        return Ok(report);
    }
    let k = r1.var_count();
    let relations = sorted_relations(r1);
    let mut candidates = unimodular_entries(k, bound);
    let mut tried = 0u64;
    loop {
        let chunk: Vec<Vec<i64>> = candidates.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let hit = chunk
            .par_iter()
            .position_first(|e| relations_vanish(&relations, r2, &UniMatrix::from_small(k, e)));
        if let Some(pos) = hit {
            return Ok(SearchReport {
                found: Some(UniMatrix::from_small(k, &chunk[pos])),
                matrices_tried: tried + pos as u64 + 1,
                bound,
                poincare_mismatch: false,
            });
        }
        tried += chunk.len() as u64;
    }
    Ok(SearchReport {
        found: None,
        matrices_tried: tried,
        bound,
        poincare_mismatch: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    use crate::chern::SplitBundle;
    use crate::decide::base_ring;

    fn ring(text: &str) -> GradedRingPresentation {
        GradedRingPresentation::parse(text).unwrap()
    }

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&a| BigInt::from(a)).collect()).collect()
    }

    fn brute_count(k: usize, b: i64) -> usize {
        let n = k * k;
        let side = (2 * b + 1) as usize;
        (0..side.pow(n as u32))
            .filter(|&code| {
                let mut c = code;
                let e: Vec<i64> = (0..n)
                    .map(|_| {
                        let v = (c % side) as i64 - b;
                        c /= side;
                        v
                    })
                    .collect();
                determinant(&m(&e.chunks(k).collect::<Vec<_>>())).abs() == BigInt::one()
            })
            .count()
    }

    #[test]
    fn enumeration_counts() {
        let one: Vec<UniMatrix> = enumerate_unimodular(1, 1).collect();
        assert_eq!(one.len(), 2);
        assert!(one.contains(&UniMatrix::new(m(&[&[1]])).unwrap()));
        assert!(one.contains(&UniMatrix::new(m(&[&[-1]])).unwrap()));
        assert_eq!(enumerate_unimodular(2, 0).count(), 0);
        // independent nested-loop count over {-1,0,1}
        let mut count = 0;
        for a in -1i64..=1 {
            for b in -1i64..=1 {
                for c in -1i64..=1 {
                    for d in -1i64..=1 {
                        if (a * d - b * c).abs() == 1 {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(count, 40);
        assert_eq!(enumerate_unimodular(2, 1).count(), 40);
        assert_eq!(enumerate_unimodular(2, 2).count(), brute_count(2, 2));
        assert_eq!(enumerate_unimodular(3, 1).count(), brute_count(3, 1));
    }

    #[test]
    fn enumeration_is_distinct_and_deterministic() {
        let first: Vec<UniMatrix> = enumerate_unimodular(2, 3).collect();
        let again: Vec<UniMatrix> = enumerate_unimodular(2, 3).collect();
        assert_eq!(first, again);
        let set: HashSet<&UniMatrix> = first.iter().collect();
        assert_eq!(set.len(), first.len());
        assert_eq!(first[0], UniMatrix::identity(2));
        assert!(first.iter().all(|a| a.determinant().abs() == BigInt::one()));
        assert!(first
            .iter()
            .all(|a| a.rows().iter().flatten().all(|x| x.abs() <= BigInt::from(3))));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 3, 1], &[1, 2, 0], &[0, 0, 1]]);
        assert_eq!(determinant(&a), BigInt::from(1));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), BigInt::zero());
        let u = UniMatrix::new(a).unwrap();
        assert_eq!(u.mul(&u.inverse()), UniMatrix::identity(3));
        assert!(UniMatrix::new(m(&[&[1, 2], &[2, 4]])).is_err());
        for (i, a) in enumerate_unimodular(3, 1).enumerate().step_by(37) {
            assert_eq!(a.inverse().mul(&a), UniMatrix::identity(3), "candidate {i}");
        }
    }

    #[test]
    fn hirzebruch_f0_and_twisted_sum() {
        let f0 = ring("Z[x,u]/(x^2, u^2)");
        let o11 = ring("Z[x,u]/(x^2, u^2 - 2*x*u)");
        let report = find_graded_iso(&f0, &o11, 1).unwrap();
        let a = report.found.clone().unwrap();
        assert_eq!(a.rows(), &m(&[&[1, 0], &[-1, 1]])[..]);
        assert!(verify_matrix(&f0, &o11, a.rows()).unwrap());
        assert!(verify_matrix(&o11, &f0, a.inverse().rows()).unwrap());
        assert_eq!(find_graded_iso_parallel(&f0, &o11, 1).unwrap(), report);
    }

    #[test]
    fn identical_rings_give_identity() {
        let r = ring("Z[x,u1]/(x^3, u1^2 - x*u1)");
        let report = find_graded_iso(&r, &r, 3).unwrap();
        assert_eq!(report.found, Some(UniMatrix::identity(2)));
        assert_eq!(report.matrices_tried, 1);
    }

    #[test]
    fn f0_and_f1_not_found() {
        let f0 = ring("Z[x,u]/(x^2, u^2)");
        let f1 = ring("Z[x,u]/(x^2, u^2 - x*u)");
        for b in 1..=3 {
            let report = find_graded_iso(&f0, &f1, b).unwrap();
            assert!(report.found.is_none());
            assert!(report.caveat());
            assert_eq!(report.matrices_tried, enumerate_unimodular(2, b).count() as u64);
            assert_eq!(find_graded_iso_parallel(&f0, &f1, b).unwrap(), report);
        }
        // square-zero degree-1 classes of f1: (a x + b u)^2 = b(2a + b) x u
        // so no square-zero class has b = ±1
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let v = IntPoly::from_linear_coords(&[BigInt::from(a), BigInt::from(b)]);
                let square_zero = f1.normal_form(&v.pow(2)).is_zero();
                assert_eq!(square_zero, b * (2 * a + b) == 0);
                assert!(!(square_zero && b.abs() == 1));
            }
        }
    }

    #[test]
    fn poincare_mismatch_short_circuits() {
        let a = ring("Z[x,u]/(x^2, u^3)");
        let b = ring("Z[x,u]/(x^2, u^2)");
        let report = find_graded_iso(&a, &b, 3).unwrap();
        assert!(report.poincare_mismatch);
        assert!(!report.caveat());
        assert_eq!(report.matrices_tried, 0);
        let p0 = GradedRingPresentation::projective_space(0, "x");
        assert!(find_graded_iso(&p0, &p0, 1).is_err());
    }

    #[test]
    fn verify_matrix_contract() {
        let f0 = ring("Z[x,u]/(x^2, u^2)");
        assert!(verify_matrix(&f0, &f0, &m(&[&[1, 0], &[0, 1]])).unwrap());
        assert!(!verify_matrix(&f0, &f0, &m(&[&[1, 1], &[1, 1]])).unwrap());
        assert!(verify_matrix(&f0, &f0, &m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).is_err());
        // swapping the two factors of P^1 x P^1
        assert!(verify_matrix(&f0, &f0, &m(&[&[0, 1], &[1, 0]])).unwrap());
    }

    #[test]
    fn found_matrices_are_sound_and_invertible() {
        let base = base_ring(2);
        let rings: Vec<GradedRingPresentation> = [[0i64, 0], [1, 1], [0, 2], [1, 0], [-1, 1]]
            .iter()
            .map(|tw| {
                let tw: Vec<BigInt> = tw.iter().map(|&a| BigInt::from(a)).collect();
                let c = SplitBundle::on_projective_space(&base, &tw).unwrap().total_chern();
                base.projectivize(&c, 2, "u1").unwrap()
            })
            .collect();
        for r1 in &rings {
            for r2 in &rings {
                let report = find_graded_iso(r1, r2, 2).unwrap();
                if let Some(a) = &report.found {
                    assert!(verify_matrix(r1, r2, a.rows()).unwrap());
                    assert!(verify_matrix(r2, r1, a.inverse().rows()).unwrap());
                    assert!(find_graded_iso(r2, r1, 2).unwrap().found.is_some());
                }
                assert_eq!(find_graded_iso_parallel(r1, r2, 2).unwrap(), report);
            }
        }
    }
}
