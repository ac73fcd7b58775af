//! Orbifold Euler numbers of weighted surface pairs and the log-BMY equality.

use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chow::{DivisorClass, Realization};
use crate::conditions::{pair_profiles, Pair, PairClass};
use crate::covering::{weight_vector, CoveringType};
use crate::error::{Error, Result};
use crate::lyapunov::LatticeContext;
use crate::par::{self, ExecMode};
use crate::rational::{fmt_q, q, qi, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerReport {
    pub e_orb: Q,
    /// `(K + R)^2`
    pub c1_sq: Q,
    pub bmy_holds: bool,
    pub relative: Option<Q>,
}

fn require_surface_weights(mu: &[Q]) -> Result<()> {
    if mu.len() != 5 {
        return Err(Error::NotASurface);
    }
    let total: Q = mu.iter().sum();
    if total != qi(2) {
        return Err(Error::BadWeightSum(fmt_q(&total)));
    }
    if let Some(m) = mu.iter().find(|m| !m.is_positive() || **m >= Q::one()) {
        return Err(Error::PreconditionFailed(format!("weight {} is not in (0, 1)", fmt_q(m))));
    }
    Ok(())
}

/// `R = sum (mu_i + mu_j) [L_ij]` over pairs with `mu_i + mu_j <= 1`.
pub fn boundary_r(mu: &[Q], real: &Realization) -> Result<DivisorClass> {
    if real.dim() != 2 || mu.len() != 5 {
        return Err(Error::NotASurface);
    }
    let mut r = real.zero();
    for prof in pair_profiles(mu)? {
        if prof.kind == PairClass::Contracted {
            continue;
        }
        let class = real
            .class(prof.pair)
            .ok_or_else(|| Error::UnsupportedProfile(format!("{} is not a divisor of {}", prof.pair, real.name)))?;
        r.add_scaled(&prof.sum, class);
    }
    Ok(r)
}

/// Closed formula for `e^orb(B^mu, R^mu)` with five weights summing to 2.
///
/// Terms: 7 for the blown-up plane, the pair sum `s` per surviving boundary
/// curve, `(s - 1)^2 - 2` per contracted line, and `(1 - s)(1 - s') - 1` per
/// node where two surviving boundary curves meet.
pub fn orb_euler(mu: &[Q]) -> Result<Q> {
    require_surface_weights(mu)?;
    let profiles = pair_profiles(mu)?;
    let mut e = qi(7);
    for p in &profiles {
        if p.kind == PairClass::Contracted {
            let t = &p.sum - Q::one();
            e += &t * &t - qi(2);
        } else {
            e += &p.sum;
        }
    }
    let kept: Vec<_> = profiles.iter().filter(|p| p.kind != PairClass::Contracted).collect();
    for (i, a) in kept.iter().enumerate() {
        for b in &kept[i + 1..] {
            if a.pair.is_disjoint(&b.pair) {
                e += (Q::one() - &a.sum) * (Q::one() - &b.sum) - Q::one();
            }
        }
    }
    Ok(e)
}

/// `(K + R)^2` on `B10`, contracted lines handled by total transforms.
pub fn log_chern_square(mu: &[Q]) -> Result<Q> {
    require_surface_weights(mu)?;
    let contracted: Vec<Pair> = pair_profiles(mu)?
        .into_iter()
        .filter(|p| p.kind == PairClass::Contracted)
        .map(|p| p.pair)
        .collect();
    let real = Realization::blown_down_b10(&contracted)?;
    let kr = &real.canonical + &boundary_r(mu, &real)?;
    real.power(&kr)
}

pub fn bmy_check(mu: &[Q]) -> Result<EulerReport> {
    let e_orb = orb_euler(mu)?;
    let c1_sq = log_chern_square(mu)?;
    Ok(EulerReport { bmy_holds: qi(3) * &e_orb == c1_sq, e_orb, c1_sq, relative: None })
}

impl LatticeContext {
    /// `(K^orb - D_k)^2 / (K^orb)^2`.
    pub fn relative_euler(&self, k: u64) -> Result<Q> {
        if self.dim() != 2 {
            return Err(Error::NotASurface);
        }
        let mu_k = weight_vector(&self.ct, k)?.mu;
        for pair in &self.report.contracted_pairs {
            if &mu_k[pair.0] + &mu_k[pair.1] <= Q::one() {
                return Err(Error::BlowdownNotMonotone { pair: *pair, k });
            }
        }
        let e = &self.k_orb - &self.divisor_dk(k)?;
        Ok(self.realization.power(&e)? / &self.volume)
    }
}

pub fn relative_euler(ct: &CoveringType, k: u64) -> Result<Q> {
    LatticeContext::new(ct)?.relative_euler(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuintupleKind {
    /// No pair sums to 1.
    Generic,
    /// No pair sums to 1 and at least one pair sums past 1.
    Contracted,
    /// At least one pair sums to exactly 1.
    Parabolic,
}

/// Largest denominator used for random weights.
pub const MAX_HEIGHT: i64 = 24;

fn random_weight<R: Rng>(rng: &mut R) -> Q {
    let den = rng.gen_range(2..=MAX_HEIGHT);
    q(rng.gen_range(1..den), den)
}

/// Rejection-samples five weights in `(0, 1)` with sum 2.
pub fn random_quintuple<R: Rng>(rng: &mut R, kind: QuintupleKind) -> Vec<Q> {
    loop {
        let mu = match kind {
            QuintupleKind::Parabolic => {
                let a = random_weight(rng);
                let b = Q::one() - &a;
                let c = random_weight(rng);
                let d = random_weight(rng);
                let e = Q::one() - &c - &d;
                let mut v = vec![a, b, c, d, e];
                v.shuffle(rng);
                v
            }
            _ => {
                let mut v: Vec<Q> = (0..4).map(|_| random_weight(rng)).collect();
                let last = qi(2) - v.iter().sum::<Q>();
                v.push(last);
                v
            }
        };
        if mu.iter().any(|m| !m.is_positive() || *m >= Q::one()) {
            continue;
        }
        let Ok(profiles) = pair_profiles(&mu) else { continue };
        let parabolic = profiles.iter().any(|p| p.kind == PairClass::Parabolic);
        let contracted = profiles.iter().any(|p| p.kind == PairClass::Contracted);
        let ok = match kind {
            QuintupleKind::Generic => !parabolic,
            QuintupleKind::Contracted => !parabolic && contracted,
            QuintupleKind::Parabolic => parabolic,
        };
        if ok {
            return mu;
        }
    }
}

/// Sampling schedule: one trial in ten parabolic, two in ten forced contracted.
pub fn trial_kind(i: u64) -> QuintupleKind {
    match i % 10 {
        0 => QuintupleKind::Parabolic,
        1 | 2 => QuintupleKind::Contracted,
        _ => QuintupleKind::Generic,
    }
}

/// The weights of trial `i`; independent of execution order.
pub fn trial_weights(seed: u64, i: u64) -> Vec<Q> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    random_quintuple(&mut rng, trial_kind(i))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmyTrial {
    pub index: u64,
    pub mu: Vec<Q>,
    pub contracted: bool,
    pub parabolic: bool,
    pub report: EulerReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmySummary {
    pub seed: u64,
    pub trials: Vec<BmyTrial>,
}

impl BmySummary {
    pub fn holds(&self) -> usize {
        self.trials.iter().filter(|t| t.report.bmy_holds).count()
    }

    pub fn with_contracted(&self) -> usize {
        self.trials.iter().filter(|t| t.contracted).count()
    }

    pub fn with_parabolic(&self) -> usize {
        self.trials.iter().filter(|t| t.parabolic).count()
    }

    pub fn failures(&self) -> Vec<&BmyTrial> {
        self.trials.iter().filter(|t| !t.report.bmy_holds).collect()
    }
}

pub fn bmy_sweep_with(mode: ExecMode, trials: u64, seed: u64) -> Result<BmySummary> {
    let results = par::map(mode, (0..trials).collect(), |i| {
        let mu = trial_weights(seed, i);
        let profiles = pair_profiles(&mu)?;
        let report = bmy_check(&mu)?;
        Ok(BmyTrial {
            index: i,
            contracted: profiles.iter().any(|p| p.kind == PairClass::Contracted),
            parabolic: profiles.iter().any(|p| p.kind == PairClass::Parabolic),
            mu,
            report,
        })
    });
    Ok(BmySummary { seed, trials: results.into_iter().collect::<Result<_>>()? })
}

pub fn bmy_sweep(trials: u64, seed: u64) -> Result<BmySummary> {
    bmy_sweep_with(ExecMode::default(), trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::ModelId;
    use crate::conditions::check_sigma_int;
    use crate::covering::validate_type;

    fn sym() -> Vec<Q> {
        vec![q(2, 5); 5]
    }

    fn ct(d: u64, a: &[u64]) -> CoveringType {
        validate_type(d, a).unwrap()
    }

    /// `18 sum mu_i mu_j - 27 + 9 sum_{contracted} (1 - s)^2`
    fn c1_sq_oracle(mu: &[Q]) -> Q {
        let mut acc = qi(-27);
        for p in Pair::all(5) {
            acc += qi(18) * &mu[p.0] * &mu[p.1];
            let s = &mu[p.0] + &mu[p.1];
            if s > Q::one() {
                let t = Q::one() - s;
                acc += qi(9) * &t * &t;
            }
        }
        acc
    }

    #[test]
    fn symmetric_weights() {
        let mu = sym();
        assert_eq!(orb_euler(&mu).unwrap(), q(3, 5));
        let rep = bmy_check(&mu).unwrap();
        assert_eq!(rep.c1_sq, q(9, 5));
        assert!(rep.bmy_holds);
        let real = Realization::blown_down_b10(&[]).unwrap();
        let r = boundary_r(&mu, &real).unwrap();
        let mut expect = real.zero();
        for c in real.boundary.values() {
            expect.add_scaled(&q(4, 5), c);
        }
        assert_eq!(r, expect);
    }

    #[test]
    fn no_contraction_closed_form() {
        let mu = vec![q(1, 3), q(1, 3), q(1, 3), q(1, 2), q(1, 2)];
        let sum: Q = Pair::all(5).map(|p| &mu[p.0] * &mu[p.1]).sum();
        assert_eq!(orb_euler(&mu).unwrap(), qi(6) * sum - qi(9));
    }

    #[test]
    fn row_one_boundary_on_b9() {
        let report = check_sigma_int(&ct(12, &[3, 3, 3, 7, 8]).base_weights()).unwrap();
        let real = Realization::for_report(&report).unwrap();
        assert_eq!(real.model.id, ModelId::B9);
        let r = boundary_r(&report.weights, &real).unwrap();
        let mut expect = real.zero();
        for (pair, class) in &real.boundary {
            let c = match pair.1 {
                4 => q(11, 12),
                3 => q(5, 6),
                _ => q(1, 2),
            };
            expect.add_scaled(&c, class);
        }
        assert_eq!(r, expect);
        let e = orb_euler(&report.weights).unwrap();
        assert_eq!(qi(3) * e, real.power(&(&real.canonical + &r)).unwrap());
    }

    #[test]
    fn parabolic_coefficient_one() {
        let report = check_sigma_int(&ct(12, &[3, 3, 5, 6, 7]).base_weights()).unwrap();
        let real = Realization::for_report(&report).unwrap();
        let r = boundary_r(&report.weights, &real).unwrap();
        // L35 appears with coefficient one: its pairing with an exceptional curve
        let l35 = real.class(Pair(2, 4)).unwrap();
        assert!(report.profile(Pair(2, 4)).sum == Q::one());
        assert_ne!(real.intersect(&[&r, l35]).unwrap(), qi(0));
        assert!(bmy_check(&report.weights).unwrap().bmy_holds);
    }

    #[test]
    fn oracle_on_seeded_sample() {
        let summary = bmy_sweep_with(ExecMode::Sequential, 60, 7).unwrap();
        for t in &summary.trials {
            assert_eq!(t.report.c1_sq, c1_sq_oracle(&t.mu), "{:?}", t.mu);
            assert!(t.report.bmy_holds);
        }
    }

    #[test]
    fn sweep_is_reproducible_across_modes() {
        let a = bmy_sweep_with(ExecMode::Sequential, 40, 11).unwrap();
        let b = bmy_sweep_with(ExecMode::Parallel, 40, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.with_parabolic() >= 4);
        assert!(a.with_contracted() >= 8);
    }

    #[test]
    fn relative_values() {
        assert_eq!(relative_euler(&ct(12, &[3, 3, 5, 6, 7]), 5).unwrap(), q(1, 17));
        assert_eq!(relative_euler(&ct(12, &[3, 3, 3, 7, 8]), 5).unwrap(), q(1, 13));
        assert_eq!(relative_euler(&ct(12, &[3, 3, 3, 7, 8]), 1).unwrap(), qi(1));
        assert!(matches!(
            relative_euler(&ct(12, &[7, 5, 3, 3, 3, 3]), 1),
            Err(Error::NotASurface)
        ));
    }

    #[test]
    fn precondition_errors() {
        assert!(matches!(orb_euler(&vec![q(1, 2); 4]), Err(Error::NotASurface)));
        assert!(matches!(orb_euler(&vec![q(1, 5); 5]), Err(Error::BadWeightSum(_))));
        let bad = vec![qi(1), q(1, 4), q(1, 4), q(1, 4), q(1, 4)];
        assert!(matches!(bmy_check(&bad), Err(Error::PreconditionFailed(_))));
    }
}
