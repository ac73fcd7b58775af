//! Lyapunov exponents of the primitive summands.
//!
//! For a conjugate pair whose `sigma = 2` member is `k`, the second exponent is
//! `lambda = 1 - D_k . K^{n-1} / K^n`, where `K` is the orbifold log-canonical
//! class of the compactified base and `D_k` records the vanishing orders of the
//! Jacobian of the `k`-th period map along the elliptic boundary divisors.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chow::{build_model, DivisorClass, ModelId, Realization};
use crate::conditions::{check_sigma_int, pair_profiles, ConditionReport, Pair, PairClass};
use crate::covering::{conjugate_classes, is_arithmetic, weight_vector, CoveringType, PairKind};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, qi, to_u64, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `mu_i(k) + mu_j(k) < 1`
    BelowOne,
    /// `mu_i(k) + mu_j(k) > 1`
    AboveOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Order {
    pub ell: u64,
    pub n: u64,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingOrders {
    pub k: u64,
    pub orders: BTreeMap<Pair, Order>,
}

fn check_uniformizing(ct: &CoveringType, k: u64) -> Result<Vec<Q>> {
    if k == 0 || k >= ct.d() {
        return Err(Error::OutOfRange { k, max: ct.d() - 1 });
    }
    if k.gcd(&ct.d()) != 1 {
        return Err(Error::NotCoprime { k, d: ct.d() });
    }
    let w = weight_vector(ct, k)?;
    if w.sigma != 2 {
        return Err(Error::NotUniformizingSignature { k, sigma: w.sigma.to_string() });
    }
    Ok(w.mu)
}

/// Vanishing orders `n^k_ij` on the elliptic pairs of the base weights.
pub fn vanishing_orders(ct: &CoveringType, k: u64) -> Result<VanishingOrders> {
    let mu_k = check_uniformizing(ct, k)?;
    let dim = ct.ball_dim() as u64;
    let mut orders = BTreeMap::new();
    for prof in pair_profiles(&ct.base_weights())? {
        if prof.kind != PairClass::Elliptic {
            continue;
        }
        let kappa = prof.kappa_value().expect("elliptic pairs have finite kappa");
        let gap = Q::one() - &mu_k[prof.pair.0] - &mu_k[prof.pair.1];
        let ell_q = kappa * gap.abs();
        let ell = to_u64(&ell_q)
            .filter(|&e| e > 0)
            .ok_or_else(|| Error::NonIntegralOrder { pair: prof.pair, value: fmt_q(&ell_q) })?;
        let (regime, n) = if gap.is_positive() {
            (Regime::BelowOne, ell - 1)
        } else {
            (Regime::AboveOne, dim * ell - 1)
        };
        orders.insert(prof.pair, Order { ell, n, regime });
    }
    Ok(VanishingOrders { k, orders })
}

/// The base data every exponent computation of one covering type shares.
#[derive(Debug, Clone)]
pub struct LatticeContext {
    pub ct: CoveringType,
    pub report: ConditionReport,
    pub realization: Realization,
    pub k_orb: DivisorClass,
    /// `(K^orb)^n`
    pub volume: Q,
}

impl LatticeContext {
    pub fn new(ct: &CoveringType) -> Result<Self> {
        let w1 = weight_vector(ct, 1)?;
        if w1.sigma != 2 {
            return Err(Error::PreconditionFailed(w1.sigma.to_string()));
        }
        let report = check_sigma_int(&w1.mu)?;
        if !report.condition.is_lattice() {
            return Err(Error::LatticeConditionFailed);
        }
        let realization = Realization::for_report(&report)?;
        Self::with_realization(ct, report, realization)
    }

    pub fn with_realization(ct: &CoveringType, report: ConditionReport, realization: Realization) -> Result<Self> {
        let k_orb = orbifold_canonical_in(&report, &realization);
        let volume = realization.power(&k_orb)?;
        Ok(LatticeContext { ct: ct.clone(), report, realization, k_orb, volume })
    }

    pub fn dim(&self) -> usize {
        self.realization.dim()
    }

    pub fn divisor_dk(&self, k: u64) -> Result<DivisorClass> {
        let orders = vanishing_orders(&self.ct, k)?;
        let mut d = self.realization.zero();
        for (pair, ord) in &orders.orders {
            if ord.n == 0 {
                continue;
            }
            let kappa = self.report.profile(*pair).kappa_value().expect("elliptic");
            let class = self
                .realization
                .class(*pair)
                .expect("elliptic pairs are boundary divisors of the model");
            d.add_scaled(&(qi(ord.n as i64) / kappa), class);
        }
        Ok(d)
    }

    pub fn lambda1(&self, k: u64) -> Result<Q> {
        let d = self.divisor_dk(k)?;
        Ok(Q::one() - self.realization.against_power(&d, &self.k_orb)? / &self.volume)
    }

    /// `E^a . K^b / K^n` for `a + b = n`, with `E = (K - D_k) / (n + 1)`.
    pub fn cab(&self, k: u64) -> Result<BTreeMap<(usize, usize), Q>> {
        let n = self.dim();
        let d = self.divisor_dk(k)?;
        let e = (&self.k_orb - &d).scaled(&(Q::one() / qi(n as i64 + 1)));
        (0..=n)
            .map(|a| {
                let mut v = vec![&e; a];
                v.extend(std::iter::repeat_n(&self.k_orb, n - a));
                Ok(((a, n - a), self.realization.intersect(&v)? / &self.volume))
            })
            .collect()
    }
}

fn orbifold_canonical_in(report: &ConditionReport, real: &Realization) -> DivisorClass {
    let mut k = real.canonical.clone();
    for prof in &report.pairs {
        let Some(inv) = prof.inv_kappa() else { continue };
        // a parabolic pair may be a point of the model rather than a divisor
        let Some(class) = real.class(prof.pair) else { continue };
        k.add_scaled(&(Q::one() - inv), class);
    }
    k
}

/// `D_k = sum (n^k_ij / kappa_ij) [L_ij]` on the type's model.
pub fn divisor_dk(ct: &CoveringType, k: u64) -> Result<DivisorClass> {
    LatticeContext::new(ct)?.divisor_dk(k)
}

/// `K^orb = K + sum (1 - 1/kappa_ij) [L_ij]`, parabolic pairs with coefficient 1.
pub fn orbifold_canonical(ct: &CoveringType) -> Result<DivisorClass> {
    Ok(LatticeContext::new(ct)?.k_orb)
}

pub fn lambda1(ct: &CoveringType, k: u64) -> Result<Q> {
    LatticeContext::new(ct)?.lambda1(k)
}

/// The exponent of the conjugate pair `{k, d - k}`, computed on its `sigma = 2` member.
pub fn pair_lambda1(ct: &CoveringType, k: u64) -> Result<Q> {
    let other = ct.d().checked_sub(k).filter(|&o| o > 0).ok_or(Error::OutOfRange { k, max: ct.d() - 1 })?;
    let rep = if weight_vector(ct, k)?.sigma == 2 { k } else { other };
    lambda1(ct, rep)
}

pub fn cab_invariants(ct: &CoveringType, k: u64) -> Result<BTreeMap<(usize, usize), Q>> {
    LatticeContext::new(ct)?.cab(k)
}

/// The second exponent computed on a quotient by a symmetric group on three
/// letters, when the type's model admits one. `None` otherwise.
pub fn lambda1_on_quotient(ct: &CoveringType, k: u64) -> Result<Option<Q>> {
    let ctx = LatticeContext::new(ct)?;
    let Some(choice) = &ctx.report.model else { return Ok(None) };
    let Some(s) = ctx.report.condition.symmetry_set() else { return Ok(None) };
    let quot_id = match choice.id {
        ModelId::B9 => ModelId::QuotB9Sigma3,
        ModelId::B7 => ModelId::QuotB7Sigma3,
        _ => return Ok(None),
    };
    let mut cat_s: Vec<usize> = s.iter().map(|&i| choice.labels[i]).collect();
    cat_s.sort();
    if cat_s != [0, 1, 2] {
        return Ok(None);
    }
    let quot = build_model(quot_id);
    let orders = vanishing_orders(ct, k)?;
    // catalog index -> branch point
    let mut inverse = vec![0; choice.labels.len()];
    for (i, &c) in choice.labels.iter().enumerate() {
        inverse[c] = i;
    }
    let mut k_orb = quot.canonical.clone();
    let mut d = DivisorClass::zero(quot.id, quot.rank());
    for (rep, gen) in &quot.catalog {
        let pair = Pair::new(inverse[rep.0], inverse[rep.1]);
        let prof = ctx.report.profile(pair);
        let ramified = cat_s.contains(&rep.0) && cat_s.contains(&rep.1);
        let mult = if ramified { qi(2) } else { qi(1) };
        let inv = prof.inv_kappa().expect("quotient generators are not contracted");
        k_orb.add_scaled(&(Q::one() - &inv / &mult), gen);
        if let Some(ord) = orders.orders.get(&pair) {
            d.add_scaled(&(qi(ord.n as i64) * &inv / &mult), gen);
        }
    }
    let vol = quot.intersect(&[&k_orb, &k_orb])?;
    Ok(Some(Q::one() - quot.intersect(&[&d, &k_orb])? / vol))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSpectrum {
    pub reps: (u64, u64),
    pub kind: PairKind,
    /// The member with `sigma = 2`, used for the computation.
    pub rep: Option<u64>,
    /// `None` when the summand has no `(1, n)` member.
    pub lambda: Option<Q>,
    /// Signature of the smaller representative.
    pub signature: (u32, u32),
    /// Lower bound `2 |p - q|` on the number of zero exponents.
    pub guaranteed_zeros: usize,
    /// Non-negative half of the exponents of the real summand.
    pub nonnegative: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub pairs: Vec<PairSpectrum>,
    /// Distinct non-negative exponents, descending.
    pub distinct_nonnegative: Vec<Q>,
    /// All non-negative exponents with multiplicity, descending.
    pub nonnegative_with_multiplicity: Vec<Q>,
    pub maximally_degenerate: bool,
    /// `cab` values by the `sigma = 2` representative.
    pub cab: BTreeMap<u64, BTreeMap<(usize, usize), Q>>,
    /// Distinct relative Euler numbers, descending (surfaces only).
    pub relative_euler: Option<Vec<Q>>,
}

fn desc_dedup(mut v: Vec<Q>) -> Vec<Q> {
    v.sort_by(|a, b| b.cmp(a));
    v.dedup();
    v
}

impl LatticeContext {
    pub fn spectrum(&self) -> Result<SpectrumReport> {
        let n = self.dim();
        let mut pairs = Vec::new();
        let mut cab = BTreeMap::new();
        for cp in conjugate_classes(&self.ct) {
            let (p, q) = cp.weights.0.signature;
            let zeros = 2 * (p as i64 - q as i64).unsigned_abs() as usize;
            let half = cp.weights.0.rank();
            let (lambda, nonnegative) = match (cp.kind, cp.uniformizing_rep) {
                (PairKind::UniformizingType, Some(k)) => {
                    let l = self.lambda1(k)?;
                    cab.insert(k, self.cab(k)?);
                    let mut v = vec![l.clone(), l.clone()];
                    v.extend(std::iter::repeat_n(Q::zero(), half.saturating_sub(2)));
                    (Some(l), v)
                }
                (PairKind::Unitary, _) => (Some(Q::zero()), vec![Q::zero(); half]),
                _ => (None, vec![Q::zero(); zeros / 2]),
            };
            pairs.push(PairSpectrum {
                reps: cp.reps,
                kind: cp.kind,
                rep: cp.uniformizing_rep,
                lambda,
                signature: (p, q),
                guaranteed_zeros: zeros,
                nonnegative,
            });
        }
        let mut all: Vec<Q> = pairs.iter().flat_map(|p| p.nonnegative.iter().cloned()).collect();
        all.sort_by(|a, b| b.cmp(a));
        let distinct = desc_dedup(all.clone());
        let relative_euler = (n == 2).then(|| desc_dedup(cab.values().map(|c| qi(9) * &c[&(2, 0)]).collect()));
        Ok(SpectrumReport {
            maximally_degenerate: is_arithmetic(&self.ct)?,
            pairs,
            distinct_nonnegative: distinct,
            nonnegative_with_multiplicity: all,
            cab,
            relative_euler,
        })
    }
}

pub fn spectrum(ct: &CoveringType) -> Result<SpectrumReport> {
    LatticeContext::new(ct)?.spectrum()
}

impl SpectrumReport {
    /// Exponents strictly between 0 and 1.
    pub fn interior(&self) -> Vec<Q> {
        self.distinct_nonnegative.iter().filter(|x| !x.is_zero() && !x.is_one()).cloned().collect()
    }
}
