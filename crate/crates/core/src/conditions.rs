//! Lattice conditions INT and Sigma-INT, boundary pair profiles, model
//! selection and the enumeration of candidate covering types.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chow::ModelId;
use crate::covering::{is_arithmetic, validate_type, CoveringType};
use crate::error::{Error, Result};
use crate::par::{self, ExecMode};
use crate::rational::{fmt_q, is_half_integer, q, qi, Q};

/// An unordered pair of branch-point indices, stored 0-based with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pair(pub usize, pub usize);

impl Pair {
    pub fn new(i: usize, j: usize) -> Self {
        assert_ne!(i, j, "a boundary pair needs two distinct indices");
        if i < j {
            Pair(i, j)
        } else {
            Pair(j, i)
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 == i || self.1 == i
    }

    pub fn is_disjoint(&self, other: &Pair) -> bool {
        !other.contains(self.0) && !other.contains(self.1)
    }

    /// The image under an index relabelling.
    pub fn map(&self, labels: &[usize]) -> Pair {
        Pair::new(labels[self.0], labels[self.1])
    }

    /// 1-based divisor name such as `L35`.
    pub fn label(&self) -> String {
        format!("L{}{}", self.0 + 1, self.1 + 1)
    }

    /// Every pair of `0..n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Pair> {
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| Pair(i, j)))
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0 + 1, self.1 + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairClass {
    /// `mu_i + mu_j < 1`
    Elliptic,
    /// `mu_i + mu_j = 1`
    Parabolic,
    /// `mu_i + mu_j > 1`
    Contracted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kappa {
    Finite(Q),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairProfile {
    pub pair: Pair,
    pub sum: Q,
    pub kind: PairClass,
    /// `(1 - mu_i - mu_j)^{-1}`; `Infinite` for parabolic pairs, `None` when contracted.
    pub kappa: Option<Kappa>,
    pub in_s: bool,
}

impl PairProfile {
    /// `1 / kappa`, zero for parabolic pairs.
    pub fn inv_kappa(&self) -> Option<Q> {
        match &self.kappa {
            Some(Kappa::Finite(k)) => Some(k.recip()),
            Some(Kappa::Infinite) => Some(Q::zero()),
            None => None,
        }
    }

    pub fn kappa_value(&self) -> Option<&Q> {
        match &self.kappa {
            Some(Kappa::Finite(k)) => Some(k),
            _ => None,
        }
    }
}

fn require_sum_two(mu: &[Q]) -> Result<()> {
    let s: Q = mu.iter().sum();
    if s != qi(2) {
        return Err(Error::BadWeightSum(fmt_q(&s)));
    }
    Ok(())
}

pub fn pair_profiles(mu: &[Q]) -> Result<Vec<PairProfile>> {
    require_sum_two(mu)?;
    Ok(Pair::all(mu.len())
        .map(|pair| {
            let sum = &mu[pair.0] + &mu[pair.1];
            let gap = Q::one() - &sum;
            let (kind, kappa) = if gap.is_positive() {
                (PairClass::Elliptic, Some(Kappa::Finite(gap.recip())))
            } else if gap.is_zero() {
                (PairClass::Parabolic, Some(Kappa::Infinite))
            } else {
                (PairClass::Contracted, None)
            };
            PairProfile { pair, sum, kind, kappa, in_s: false }
        })
        .collect())
}

pub fn check_int(mu: &[Q]) -> Result<bool> {
    Ok(pair_profiles(mu)?
        .iter()
        .filter_map(|p| p.kappa_value())
        .all(|k| k.is_integer()))
}

fn satisfies_sigma_int(profiles: &[PairProfile], mu: &[Q], s: &[usize]) -> bool {
    if s.len() < 2 || s.iter().any(|&i| mu[i] != mu[s[0]]) {
        return false;
    }
    profiles.iter().all(|p| match p.kappa_value() {
        None => true,
        Some(k) if s.contains(&p.pair.0) && s.contains(&p.pair.1) => is_half_integer(k),
        Some(k) => k.is_integer(),
    })
}

/// Candidate symmetry sets: maximal equal-weight classes by decreasing size,
/// then their proper subsets (size >= 2) by decreasing size.
fn sigma_candidates(mu: &[Q]) -> Vec<Vec<usize>> {
    let mut classes: BTreeMap<&Q, Vec<usize>> = BTreeMap::new();
    for (i, m) in mu.iter().enumerate() {
        classes.entry(m).or_default().push(i);
    }
    let mut maximal: Vec<Vec<usize>> = classes.into_values().filter(|c| c.len() >= 2).collect();
    maximal.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));

    let mut subsets = Vec::new();
    for class in &maximal {
        let m = class.len();
        for mask in 1u32..(1 << m) - 1 {
            if mask.count_ones() >= 2 {
                subsets.push((0..m).filter(|b| mask & (1 << b) != 0).map(|b| class[b]).collect::<Vec<_>>());
            }
        }
    }
    subsets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    maximal.into_iter().chain(subsets).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "set", rename_all = "lowercase")]
pub enum Condition {
    Int,
    /// Sigma-INT with the given (0-based) symmetry set.
    SigmaInt(Vec<usize>),
    Neither,
}

impl Condition {
    pub fn is_lattice(&self) -> bool {
        !matches!(self, Condition::Neither)
    }

    /// Short tag: `INT`, `ΣINT` or `none`.
    pub fn tag(&self) -> &'static str {
        match self {
            Condition::Int => "INT",
            Condition::SigmaInt(_) => "ΣINT",
            Condition::Neither => "none",
        }
    }

    pub fn symmetry_set(&self) -> Option<&[usize]> {
        match self {
            Condition::SigmaInt(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub weights: Vec<Q>,
    pub condition: Condition,
    pub pairs: Vec<PairProfile>,
    pub parabolic_pairs: Vec<Pair>,
    pub contracted_pairs: Vec<Pair>,
    /// Every candidate set for which Sigma-INT holds.
    pub satisfying_sets: Vec<Vec<usize>>,
    /// Compactification model, when one is catalogued for this profile.
    pub model: Option<ModelChoice>,
}

impl ConditionReport {
    pub fn profile(&self, pair: Pair) -> &PairProfile {
        self.pairs.iter().find(|p| p.pair == pair).expect("all pairs are profiled")
    }
}

/// INT is tried first; otherwise the first Sigma-INT candidate set wins.
pub fn check_sigma_int(mu: &[Q]) -> Result<ConditionReport> {
    let mut pairs = pair_profiles(mu)?;
    let int = pairs.iter().filter_map(|p| p.kappa_value()).all(|k| k.is_integer());
    let satisfying_sets: Vec<Vec<usize>> = sigma_candidates(mu)
        .into_iter()
        .filter(|s| satisfies_sigma_int(&pairs, mu, s))
        .collect();
    let condition = if int {
        Condition::Int
    } else if let Some(s) = satisfying_sets.first() {
        Condition::SigmaInt(s.clone())
    } else {
        Condition::Neither
    };
    if let Condition::SigmaInt(s) = &condition {
        for p in &mut pairs {
            p.in_s = s.contains(&p.pair.0) && s.contains(&p.pair.1);
        }
    }
    let of_kind = |k: PairClass| pairs.iter().filter(|p| p.kind == k).map(|p| p.pair).collect::<Vec<_>>();
    let mut report = ConditionReport {
        parabolic_pairs: of_kind(PairClass::Parabolic),
        contracted_pairs: of_kind(PairClass::Contracted),
        weights: mu.to_vec(),
        condition,
        pairs,
        satisfying_sets,
        model: None,
    };
    report.model = select_model(&report, mu.len()).ok();
    Ok(report)
}

/// Lattice-condition report for the base weights of a covering type.
pub fn lattice_report(ct: &CoveringType) -> Result<ConditionReport> {
    check_sigma_int(&ct.base_weights())
}

/// A catalogued model plus the relabelling that matches its printed catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelChoice {
    pub id: ModelId,
    /// Order of the symmetry group acting, for Sigma-INT.
    pub symmetry: Option<usize>,
    /// `labels[i]` is the catalog index of branch point `i`.
    pub labels: Vec<usize>,
}

impl fmt::Display for ModelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        if let Some(s) = self.symmetry {
            write!(f, "/Σ{s}")?;
        }
        Ok(())
    }
}

/// Weights whose semistable chamber realises the catalogued threefold.
pub fn threefold_reference_weights() -> Vec<Q> {
    [7, 5, 3, 3, 3, 3].iter().map(|&a| q(a, 12)).collect()
}

fn chamber_signs(mu: &[Q]) -> Vec<std::cmp::Ordering> {
    let n = mu.len();
    (1u32..(1 << n))
        .filter(|m| (2..n as u32 - 1).contains(&m.count_ones()))
        .map(|m| {
            let s: Q = (0..n).filter(|b| m & (1 << b) != 0).map(|b| &mu[b]).sum();
            s.cmp(&Q::one())
        })
        .collect()
}

fn next_permutation<T: Ord>(p: &mut [T]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn threefold_labels(mu: &[Q]) -> Option<Vec<usize>> {
    let reference = chamber_signs(&threefold_reference_weights());
    let mut labels: Vec<usize> = (0..6).collect();
    loop {
        let mut permuted = vec![Q::zero(); 6];
        for (i, &l) in labels.iter().enumerate() {
            permuted[l] = mu[i].clone();
        }
        if chamber_signs(&permuted) == reference {
            return Some(labels);
        }
        if !next_permutation(&mut labels) {
            return None;
        }
    }
}

pub fn select_model(report: &ConditionReport, n_points: usize) -> Result<ModelChoice> {
    let symmetry = report.condition.symmetry_set().map(|s| s.len());
    match n_points {
        5 => {
            let contracted = &report.contracted_pairs;
            let mut labels = vec![usize::MAX; 5];
            let id = match contracted.as_slice() {
                [] => {
                    labels = (0..5).collect();
                    ModelId::B10
                }
                [p] => {
                    labels[p.0] = 3;
                    labels[p.1] = 4;
                    ModelId::B9
                }
                [a, b, c] => {
                    let hub = (0..5)
                        .find(|&i| a.contains(i) && b.contains(i) && c.contains(i))
                        .ok_or_else(|| Error::UnsupportedProfile(profile_text(contracted)))?;
                    let free = (0..5)
                        .find(|&i| contracted.iter().all(|p| !p.contains(i)))
                        .expect("a star of three pairs leaves one index free");
                    labels[hub] = 4;
                    labels[free] = 3;
                    ModelId::B7
                }
                _ => return Err(Error::UnsupportedProfile(profile_text(contracted))),
            };
            for (next, l) in labels.iter_mut().filter(|l| **l == usize::MAX).enumerate() {
                *l = next;
            }
            Ok(ModelChoice { id, symmetry, labels })
        }
        6 => {
            threefold_labels(&report.weights)
                .map(|labels| ModelChoice { id: ModelId::B14, symmetry, labels })
                .ok_or_else(|| Error::UnsupportedProfile("six-point chamber differs from B14".into()))
        }
        n => Err(Error::UnsupportedDimension(n)),
    }
}

fn profile_text(contracted: &[Pair]) -> String {
    let names: Vec<String> = contracted.iter().map(|p| p.to_string()).collect();
    format!("contracted pairs [{}]", names.join(", "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeFilter {
    /// INT holds.
    Int,
    /// INT or Sigma-INT holds.
    SigmaInt,
    /// A lattice condition holds and some nontrivial conjugate is indefinite.
    NonArithmetic,
}

impl TypeFilter {
    pub fn accepts(&self, ct: &CoveringType) -> bool {
        let Ok(report) = lattice_report(ct) else {
            return false;
        };
        match self {
            TypeFilter::Int => report.condition == Condition::Int,
            TypeFilter::SigmaInt => report.condition.is_lattice(),
            TypeFilter::NonArithmetic => {
                report.condition.is_lattice() && is_arithmetic(ct).map(|a| !a).unwrap_or(false)
            }
        }
    }
}

fn partitions_into(total: u64, parts: usize, min: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if parts == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    let mut v = min;
    while v <= max && v * parts as u64 <= total {
        if total - v <= max * (parts as u64 - 1) {
            prefix.push(v);
            partitions_into(total - v, parts - 1, v, max, prefix, out);
            prefix.pop();
        }
        v += 1;
    }
}

/// Non-decreasing types `(d; a)` with `sum a_i = 2d` of one degree.
pub fn types_of_degree(d: u64, n_points: usize, filter: TypeFilter) -> Vec<CoveringType> {
    if d < 2 {
        return Vec::new();
    }
    let mut raw = Vec::new();
    partitions_into(2 * d, n_points, 1, d - 1, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .filter_map(|a| validate_type(d, &a).ok())
        .filter(|ct| filter.accepts(ct))
        .collect()
}

pub fn enumerate_types_with(
    mode: ExecMode,
    degrees: std::ops::RangeInclusive<u64>,
    n_points: usize,
    filter: TypeFilter,
) -> Vec<CoveringType> {
    par::map(mode, degrees.collect(), |d| types_of_degree(d, n_points, filter))
        .into_iter()
        .flatten()
        .collect()
}

/// Every distinct ordering of the exponents of `ct`, lexicographically.
pub fn relabelings(ct: &CoveringType) -> Vec<CoveringType> {
    let mut a = ct.exponents().to_vec();
    a.sort();
    let mut out = Vec::new();
    loop {
        out.push(validate_type(ct.d(), &a).expect("a reordering of a valid type is valid"));
        if !next_permutation(&mut a) {
            return out;
        }
    }
}

/// All candidate types with `d <= max_d`, ordered by `(d, a)`.
pub fn enumerate_types(max_d: u64, n_points: usize, filter: TypeFilter) -> Vec<CoveringType> {
    enumerate_types_with(ExecMode::default(), 2..=max_d, n_points, filter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::weight_vector;

    fn base(d: u64, a: &[u64]) -> Vec<Q> {
        validate_type(d, a).unwrap().base_weights()
    }

    fn kappa(profiles: &[PairProfile], i: usize, j: usize) -> Option<Kappa> {
        profiles.iter().find(|p| p.pair == Pair::new(i - 1, j - 1)).unwrap().kappa.clone()
    }

    #[test]
    fn profiles_of_row_two() {
        let p = pair_profiles(&base(12, &[3, 3, 5, 6, 7])).unwrap();
        assert_eq!(p.len(), 10);
        for (i, j, k) in [(1, 2, 2), (1, 3, 3), (1, 4, 4), (1, 5, 6), (3, 4, 12)] {
            assert_eq!(kappa(&p, i, j), Some(Kappa::Finite(qi(k))), "{i}{j}");
        }
        assert_eq!(kappa(&p, 3, 5), Some(Kappa::Infinite));
        assert_eq!(kappa(&p, 4, 5), None);
    }

    #[test]
    fn profiles_of_row_one() {
        let p = pair_profiles(&base(12, &[3, 3, 3, 7, 8])).unwrap();
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            assert_eq!(kappa(&p, i, j), Some(Kappa::Finite(qi(2))));
        }
        for i in 1..=3 {
            assert_eq!(kappa(&p, i, 4), Some(Kappa::Finite(qi(6))));
            assert_eq!(kappa(&p, i, 5), Some(Kappa::Finite(qi(12))));
        }
        assert_eq!(kappa(&p, 4, 5), None);
        assert!(p.iter().all(|x| x.kind != PairClass::Parabolic));
    }

    #[test]
    fn symmetric_weights_are_all_elliptic() {
        let p = pair_profiles(&vec![q(2, 5); 5]).unwrap();
        assert!(p.iter().all(|x| x.kappa == Some(Kappa::Finite(qi(5)))));
        assert!(check_int(&vec![q(2, 5); 5]).unwrap());
    }

    #[test]
    fn bad_weight_sum() {
        assert!(matches!(pair_profiles(&vec![q(1, 5); 5]), Err(Error::BadWeightSum(_))));
        assert!(matches!(check_int(&vec![q(1, 5); 5]), Err(Error::BadWeightSum(_))));
    }

    #[test]
    fn int_checks() {
        assert!(check_int(&base(12, &[3, 3, 5, 6, 7])).unwrap());
        assert!(!check_int(&base(18, &[2, 7, 7, 7, 13])).unwrap());
    }

    #[test]
    fn sigma_int_choices() {
        let r = check_sigma_int(&base(18, &[2, 7, 7, 7, 13])).unwrap();
        assert_eq!(r.condition, Condition::SigmaInt(vec![1, 2, 3]));
        assert!(r.profile(Pair(1, 2)).in_s);
        assert_eq!(r.model.as_ref().unwrap().to_string(), "B7/Σ3");

        let r = check_sigma_int(&base(12, &[3, 3, 5, 6, 7])).unwrap();
        assert_eq!(r.condition, Condition::Int);
        assert_eq!(r.parabolic_pairs, vec![Pair(2, 4)]);

        let r = check_sigma_int(&base(20, &[6, 6, 9, 9, 10])).unwrap();
        assert_eq!(r.condition, Condition::SigmaInt(vec![0, 1]));
        assert_eq!(r.model.as_ref().unwrap().to_string(), "B10/Σ2");
    }

    #[test]
    fn model_selection() {
        let m = |d, a: &[u64]| check_sigma_int(&base(d, a)).unwrap().model.unwrap();
        assert_eq!(m(12, &[4, 4, 4, 5, 7]).id, ModelId::B10);
        let row1 = m(12, &[3, 3, 3, 7, 8]);
        assert_eq!(row1.id, ModelId::B9);
        assert_eq!(row1.labels, vec![0, 1, 2, 3, 4]);
        let row6 = m(18, &[2, 7, 7, 7, 13]);
        assert_eq!(row6.labels, vec![3, 0, 1, 2, 4]);
        let three = m(12, &[7, 5, 3, 3, 3, 3]);
        assert_eq!(three.id, ModelId::B14);
        assert_eq!(three.labels, vec![0, 1, 2, 3, 4, 5]);
        let permuted = m(12, &[3, 7, 3, 3, 5, 3]);
        assert_eq!(permuted.id, ModelId::B14);
        assert_eq!(permuted.labels[1], 0);
        assert_eq!(permuted.labels[4], 1);
    }

    #[test]
    fn unsupported_profiles() {
        // two contracted pairs sharing an index
        let mu = vec![q(7, 10), q(4, 10), q(4, 10), q(3, 10), q(2, 10)];
        let r = check_sigma_int(&mu).unwrap();
        assert_eq!(r.contracted_pairs.len(), 2);
        assert!(matches!(select_model(&r, 5), Err(Error::UnsupportedProfile(_))));
        assert!(matches!(select_model(&r, 7), Err(Error::UnsupportedDimension(7))));
    }

    #[test]
    fn enumeration_small_cases() {
        assert!(enumerate_types(2, 5, TypeFilter::Int).is_empty());
        let three = enumerate_types(3, 5, TypeFilter::Int);
        assert!(three.contains(&validate_type(3, &[1, 1, 1, 1, 2]).unwrap()));
    }

    #[test]
    fn degree_twelve_non_arithmetic() {
        let got: Vec<CoveringType> = types_of_degree(12, 5, TypeFilter::NonArithmetic);
        let rows = [[3, 3, 3, 7, 8], [3, 3, 5, 6, 7], [4, 4, 4, 5, 7], [4, 4, 5, 5, 6]];
        let want: Vec<CoveringType> = rows.iter().map(|a| validate_type(12, a).unwrap()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn enumeration_order_is_mode_independent() {
        let a = enumerate_types_with(ExecMode::Sequential, 2..=14, 5, TypeFilter::SigmaInt);
        let b = enumerate_types_with(ExecMode::Parallel, 2..=14, 5, TypeFilter::SigmaInt);
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_by(|x, y| (x.d(), x.exponents()).cmp(&(y.d(), y.exponents())));
        assert_eq!(a, sorted);
    }

    #[test]
    fn relabeling_counts() {
        let ct = validate_type(12, &[3, 3, 5, 6, 7]).unwrap();
        let all = relabelings(&ct);
        assert_eq!(all.len(), 60);
        assert_eq!(all[0], ct);
        assert_eq!(relabelings(&validate_type(5, &[2, 2, 2, 2, 2]).unwrap()).len(), 1);
    }

    #[test]
    fn branch_order_part_a() {
        let ct = validate_type(12, &[3, 3, 5, 6, 7]).unwrap();
        let mu1 = ct.base_weights();
        for k in ct.units() {
            let mk = weight_vector(&ct, k).unwrap().mu;
            for p in Pair::all(5) {
                let one = |m: &[Q]| &m[p.0] + &m[p.1] == Q::one();
                assert_eq!(one(&mu1), one(&mk), "k={k} {p}");
            }
        }
    }
}
