//! Cyclic covering types `y^d = prod (x - x_i)^{a_i}` and their eigenspace data.
//!
//! Everything here is exact. The `k`-th eigenspace of the Galois action has
//! local exponents `mu_i(k) = {k a_i / d}`; its rank and signature follow from
//! the sum `sigma(k)` and the count `s(k)` of exponents that do not vanish.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, TypeRejection};
use crate::rational::{frac, q, to_u64, Q};

/// A validated covering type `(d; a_1, ..., a_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoveringType {
    d: u64,
    a: Vec<u64>,
}

impl CoveringType {
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn exponents(&self) -> &[u64] {
        &self.a
    }

    /// Number of branch points `N`.
    pub fn n_points(&self) -> usize {
        self.a.len()
    }

    /// Dimension of the ball, `N - 3`.
    pub fn ball_dim(&self) -> usize {
        self.a.len() - 3
    }

    /// Base weights `mu_i = a_i / d`.
    pub fn base_weights(&self) -> Vec<Q> {
        self.a.iter().map(|&a| q(a as i64, self.d as i64)).collect()
    }

    /// Units of `Z/d` in `1..d`.
    pub fn units(&self) -> Vec<u64> {
        (1..self.d).filter(|k| k.gcd(&self.d) == 1).collect()
    }
}

impl fmt::Display for CoveringType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.d)?;
        for (i, a) in self.a.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Checks the covering-type conditions on raw input.
pub fn validate_type(d: u64, a: &[u64]) -> std::result::Result<CoveringType, TypeRejection> {
    if d < 2 {
        return Err(TypeRejection::RejectDegree(d));
    }
    if a.len() < 4 {
        return Err(TypeRejection::RejectLength(a.len()));
    }
    if let Some((i, &v)) = a.iter().enumerate().find(|(_, &v)| v == 0 || v >= d) {
        return Err(TypeRejection::RejectRange { index: i + 1, value: v });
    }
    let g = a.iter().fold(d, |g, &v| g.gcd(&v));
    if g != 1 {
        return Err(TypeRejection::RejectGcd(g));
    }
    let sum: u64 = a.iter().sum();
    if !sum.is_multiple_of(d) {
        return Err(TypeRejection::RejectSum { sum, d });
    }
    Ok(CoveringType { d, a: a.to_vec() })
}

/// Local exponents and Hodge numbers of the `k`-th eigenspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    pub k: u64,
    pub mu: Vec<Q>,
    /// `sum mu_i(k)`; always an integer.
    pub sigma: u64,
    /// Number of `a_i` with `k a_i` not divisible by `d`.
    pub s: usize,
    /// `(sigma - 1, s - 1 - sigma)`.
    pub signature: (u32, u32),
}

impl WeightVector {
    /// `a_i(k) = mu_i(k) d`.
    pub fn exponents(&self, d: u64) -> Vec<u64> {
        self.mu
            .iter()
            .map(|m| to_u64(&(m * q(d as i64, 1))).expect("a_i(k) is integral"))
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.s.saturating_sub(2)
    }
}

pub fn weight_vector(ct: &CoveringType, k: u64) -> Result<WeightVector> {
    if k == 0 || k >= ct.d {
        return Err(Error::OutOfRange { k, max: ct.d - 1 });
    }
    let d = ct.d as i64;
    let mu: Vec<Q> = ct
        .a
        .iter()
        .map(|&a| frac(&q(k as i64 * a as i64, d)))
        .collect();
    let total: Q = mu.iter().sum();
    let sigma = to_u64(&total).expect("k * sum(a_i) is divisible by d");
    let s = ct.a.iter().filter(|&&a| !(k * a).is_multiple_of(ct.d)).count();
    let p = sigma.saturating_sub(1) as u32;
    let qn = (s as u64).saturating_sub(1 + sigma) as u32;
    Ok(WeightVector { k, mu, sigma, s, signature: (p, qn) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairKind {
    /// One member has `sigma = 2`, hence signature `(1, N - 3)`.
    UniformizingType,
    /// One member is definite.
    Unitary,
    Unsupported,
}

/// A Galois-conjugate pair `{k, d - k}` with `gcd(k, d) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugatePair {
    /// `(min(k, d-k), max(k, d-k))`.
    pub reps: (u64, u64),
    /// The member with `sigma = 2`, if any.
    pub uniformizing_rep: Option<u64>,
    pub kind: PairKind,
    pub weights: (WeightVector, WeightVector),
}

impl ConjugatePair {
    pub fn contains(&self, k: u64) -> bool {
        self.reps.0 == k || self.reps.1 == k
    }

    /// Real rank of the summand `L_k + L_{d-k}`, i.e. `2 (s - 2)`.
    pub fn real_rank(&self) -> usize {
        2 * self.weights.0.rank()
    }
}

pub fn conjugate_classes(ct: &CoveringType) -> Vec<ConjugatePair> {
    ct.units()
        .into_iter()
        .filter(|&k| k <= ct.d - k)
        .map(|k| {
            let w1 = weight_vector(ct, k).expect("unit lies in range");
            let w2 = weight_vector(ct, ct.d - k).expect("unit lies in range");
            let uniformizing_rep = [&w1, &w2].iter().find(|w| w.sigma == 2).map(|w| w.k);
            let definite = |w: &WeightVector| w.signature.0 == 0 || w.signature.1 == 0;
            let kind = if uniformizing_rep.is_some() {
                PairKind::UniformizingType
            } else if definite(&w1) || definite(&w2) {
                PairKind::Unitary
            } else {
                PairKind::Unsupported
            };
            ConjugatePair { reps: (k, ct.d - k), uniformizing_rep, kind, weights: (w1, w2) }
        })
        .collect()
}

/// Riemann-Hurwitz genus of the fibre curve.
pub fn genus(ct: &CoveringType) -> u64 {
    let n = ct.a.len() as u64;
    let gsum: u64 = ct.a.iter().map(|a| a.gcd(&ct.d)).sum();
    let twice = (n - 2) * ct.d + 2 - gsum;
    assert!(twice.is_multiple_of(2), "Riemann-Hurwitz genus of {ct} is not integral");
    twice / 2
}

/// `(dim_R P, dim_R U)` for the primitive part and its maximal unitary subsystem.
pub fn primitive_dimensions(ct: &CoveringType) -> (usize, usize) {
    conjugate_classes(ct).iter().fold((0, 0), |(p, u), pair| {
        let r = pair.real_rank();
        (p + r, if pair.kind == PairKind::Unitary { u + r } else { u })
    })
}

/// Every conjugate other than `{1, d-1}` is definite.
pub fn is_arithmetic(ct: &CoveringType) -> Result<bool> {
    let w = weight_vector(ct, 1)?;
    if w.sigma != 2 {
        return Err(Error::PreconditionFailed(w.sigma.to_string()));
    }
    Ok(conjugate_classes(ct)
        .iter()
        .filter(|p| p.reps.0 != 1)
        .all(|p| p.kind == PairKind::Unitary))
}
