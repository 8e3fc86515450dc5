//! Kazhdan-Lusztig and Z-polynomial engines.
//!
//! Three independent routes are provided: the generic axiomatic recursion on
//! the lattice of flats of an explicit matroid, the same recursion run on the
//! partition lattice for braid matroids too large for a bases list, and the
//! Stirling-number recurrence specific to braid matroids. The defining axioms:
//! P = 1 in rank 0, deg P < rank/2 otherwise, and
//! Z(t) = sum over flats F of t^rk(F) P_{M/F}(t) palindromic of degree rank.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use thiserror::Error;

use crate::exactmath::{poly_is_palindromic, set_partitions, stirling2, IntPolynomial};
use crate::matroid::Matroid;
use crate::report::VerifyReport;
use crate::spenum::CountTable;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KlError {
    #[error("matroid has a loop; the Kazhdan-Lusztig axioms require loopless input")]
    LoopyInput,
    #[error("palindromic completion failed validation: {0}")]
    Validation(String),
}

/// A computed Kazhdan-Lusztig / Z-polynomial pair for a matroid of the
/// given rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KLResult {
    pub p: IntPolynomial,
    pub z: IntPolynomial,
    pub rank: usize,
}

impl KLResult {
    fn rank_zero() -> Self {
        KLResult {
            p: IntPolynomial::one(),
            z: IntPolynomial::one(),
            rank: 0,
        }
    }
}

/// The unique polynomial P of degree < d/2 such that q + P is palindromic of
/// degree d, where q is the flat-sum tail over the nonminimal flats:
/// p_i = q_(d-i) - q_i for i < d/2. A negative coefficient means the tail
/// was not a legitimate Z-tail and is reported as a validation failure.
/// For d = 0 the axioms force P = 1.
pub fn palindromic_complete(q: &IntPolynomial, d: usize) -> Result<IntPolynomial, KlError> {
    if d == 0 {
        if !q.is_zero() {
            return Err(KlError::Validation(format!(
                "rank-0 tail must be empty, got {q}"
            )));
        }
        return Ok(IntPolynomial::one());
    }
    if q.degree().is_some_and(|deg| deg > d) {
        return Err(KlError::Validation(format!(
            "tail degree exceeds rank {d}: {q}"
        )));
    }
    let mut coeffs = Vec::new();
    let mut i = 0;
    while 2 * i < d {
        coeffs.push(q.coeff(d - i) - q.coeff(i));
        i += 1;
    }
    let p = IntPolynomial::new(coeffs);
    if !p.has_nonnegative_coeffs() {
        return Err(KlError::Validation(format!(
            "completion has a negative coefficient: {p} (tail {q}, rank {d})"
        )));
    }
    let z = q + &p;
    if !poly_is_palindromic(&z, d) {
        return Err(KlError::Validation(format!(
            "completed polynomial {z} is not palindromic of degree {d}"
        )));
    }
    Ok(p)
}

/// Generic engine with a memo table keyed on the canonical bases list of the
/// simplified contraction. The table sits behind a mutex: concurrent lookups
/// and idempotent inserts are safe, and a duplicated computation yields the
/// same value.
#[derive(Default)]
pub struct KlEngine {
    memo: Mutex<HashMap<Matroid, KLResult>>,
}

impl KlEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// P and Z of a loopless matroid by the axiomatic recursion over flats,
    /// contracting by each nonminimal flat and simplifying before recursing
    /// (simplification preserves the lattice of flats).
    pub fn kl_generic(&self, m: &Matroid) -> Result<KLResult, KlError> {
        if !m.is_loopless() {
            return Err(KlError::LoopyInput);
        }
        self.kl_simple(&m.simplify().matroid)
    }

    fn kl_simple(&self, m: &Matroid) -> Result<KLResult, KlError> {
        if let Some(hit) = self.memo.lock().unwrap().get(m) {
            return Ok(hit.clone());
        }
        let result = if m.rank() == 0 {
            KLResult::rank_zero()
        } else {
            let lattice = m.flats_lattice();
            let mut tail = IntPolynomial::zero();
            for (r, flat) in lattice.iter() {
                if r == 0 {
                    continue;
                }
                let sub = m.contract_set(flat).simplify().matroid;
                let sub_kl = self.kl_simple(&sub)?;
                tail += &sub_kl.p.shift(r);
            }
            let p = palindromic_complete(&tail, m.rank())?;
            let z = &tail + &p;
            KLResult {
                p,
                z,
                rank: m.rank(),
            }
        };
        self.memo
            .lock()
            .unwrap()
            .entry(m.clone())
            .or_insert_with(|| result.clone());
        Ok(result)
    }
}

/// P and Z of the braid matroid on n vertices through the partition
/// structure of its lattice of flats: a flat with k blocks has rank n-k and
/// its contraction simplifies to the braid matroid on k vertices, so
/// Z(t) = sum_k S(n,k) t^(n-k) P_{K_k}(t). Runs in milliseconds well past
/// the explicit-bases range.
pub fn braid_kl(n: usize) -> Result<KLResult, KlError> {
    braid_family(n).map(|v| v.into_iter().last().unwrap())
}

/// KLResults for K_1 .. K_n via the Stirling recurrence.
pub fn braid_family(n: usize) -> Result<Vec<KLResult>, KlError> {
    assert!(n >= 1);
    let mut out: Vec<KLResult> = Vec::with_capacity(n);
    out.push(KLResult::rank_zero()); // K_1 is the empty matroid
    for m in 2..=n {
        let mut tail = IntPolynomial::zero();
        for k in 1..m {
            let count = stirling2(m, k);
            tail += &out[k - 1].p.shift(m - k).scale(&count);
        }
        let p = palindromic_complete(&tail, m - 1)?;
        let z = &tail + &p;
        out.push(KLResult { p, z, rank: m - 1 });
    }
    Ok(out)
}

/// The generic flats recursion run directly on the partition lattice of the
/// braid matroid: flats are enumerated as explicit set partitions instead of
/// being counted by Stirling numbers, giving an independent route for n
/// beyond the 16-element bases representation.
pub fn braid_kl_partition_lattice(n: usize) -> Result<KLResult, KlError> {
    assert!(n >= 1);
    let mut memo: Vec<Option<KLResult>> = vec![None; n + 1];
    fn go(m: usize, memo: &mut Vec<Option<KLResult>>) -> Result<KLResult, KlError> {
        if let Some(hit) = &memo[m] {
            return Ok(hit.clone());
        }
        let result = if m == 1 {
            KLResult::rank_zero()
        } else {
            let mut tail = IntPolynomial::zero();
            for assignment in set_partitions(m) {
                let blocks = assignment.iter().copied().max().unwrap() + 1;
                if blocks == m {
                    continue; // the bottom flat (all singletons) has rank 0
                }
                let sub = go(blocks, memo)?;
                tail += &sub.p.shift(m - blocks);
            }
            let p = palindromic_complete(&tail, m - 1)?;
            let z = &tail + &p;
            KLResult { p, z, rank: m - 1 }
        };
        memo[m] = Some(result.clone());
        Ok(result)
    }
    go(n, &mut memo)
}

/// Check every coefficient of P_{K_n} against the simple quasi
/// series-parallel counts on [n-1] and of Z_{K_n} against the quasi
/// series-parallel counts, coefficient of t^i against rank n-1-i.
pub fn verify_theorem_main(
    n: usize,
    counts_simple: &CountTable,
    counts_all: &CountTable,
) -> Result<VerifyReport, KlError> {
    assert!(n >= 2 && counts_simple.n == n - 1 && counts_all.n == n - 1);
    let kl = braid_kl(n)?;
    let mut report = VerifyReport::new(format!("theorem-main n={n}"));
    for i in 0..n {
        let rank = n - 1 - i;
        report.check_eq(
            format!("[t^{i}] P_K{n} = #simple-qsp({}, {rank})", n - 1),
            kl.p.coeff(i),
            counts_simple.get(rank),
        );
        report.check_eq(
            format!("[t^{i}] Z_K{n} = #qsp({}, {rank})", n - 1),
            kl.z.coeff(i),
            counts_all.get(rank),
        );
    }
    Ok(report)
}

/// Axiom-level validation of a computed result: palindromic Z of the right
/// degree, the degree bound on P, nonnegative coefficients, unit constant
/// term.
pub fn validate_axioms(kl: &KLResult) -> Result<(), KlError> {
    let d = kl.rank;
    if !poly_is_palindromic(&kl.z, d) {
        return Err(KlError::Validation(format!(
            "Z = {} is not palindromic of degree {d}",
            kl.z
        )));
    }
    if d > 0 {
        if let Some(deg) = kl.p.degree() {
            if 2 * deg >= d {
                return Err(KlError::Validation(format!(
                    "deg P = {deg} violates the rank/2 bound at rank {d}"
                )));
            }
        }
    }
    if !kl.p.has_nonnegative_coeffs() || !kl.z.has_nonnegative_coeffs() {
        return Err(KlError::Validation("negative coefficient".into()));
    }
    if kl.p.coeff(0) != BigInt::from(1) {
        return Err(KlError::Validation(format!(
            "constant term of P is {} rather than 1",
            kl.p.coeff(0)
        )));
    }
    Ok(())
}
