//! Intersection rings of the compactified moduli spaces.
//!
//! Surfaces: `B10` is the plane blown up in four general points, `B9` and `B7`
//! arise from it by blowing down one, respectively three, boundary lines.
//! `B14` is projective 3-space blown up in four points. The two quotient rings
//! by a symmetric group on three letters are given by their pairing matrices
//! on orbit generators.
//!
//! Catalog indices are 0-based: pair `Pair(2, 4)` is the divisor `L35`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::conditions::{ConditionReport, ModelChoice, Pair};
use crate::error::{Error, Result};
use crate::rational::{q, qi, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelId {
    B10,
    B9,
    B7,
    B14,
    QuotB9Sigma3,
    QuotB7Sigma3,
}

impl ModelId {
    pub fn dim(&self) -> usize {
        match self {
            ModelId::B14 => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelId::B10 => "B10",
            ModelId::B9 => "B9",
            ModelId::B7 => "B7",
            ModelId::B14 => "B14",
            ModelId::QuotB9Sigma3 => "B9/Σ3",
            ModelId::QuotB7Sigma3 => "B7/Σ3",
        })
    }
}

/// Rational coefficient vector over a model's divisor basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    pub model: ModelId,
    pub coeffs: Vec<Q>,
}

impl DivisorClass {
    pub fn zero(model: ModelId, rank: usize) -> Self {
        DivisorClass { model, coeffs: vec![Q::zero(); rank] }
    }

    pub fn from_ints(model: ModelId, c: &[i64]) -> Self {
        DivisorClass { model, coeffs: c.iter().map(|&x| qi(x)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, s: &Q) -> Self {
        DivisorClass { model: self.model, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: &Q, other: &DivisorClass) {
        debug_assert_eq!(self.model, other.model);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        let mut out = self.clone();
        out.add_scaled(&qi(1), rhs);
        out
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        let mut out = self.clone();
        out.add_scaled(&qi(-1), rhs);
        out
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scaled(&qi(-1))
    }
}

impl Mul<&DivisorClass> for &Q {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scaled(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntersectionTensor {
    /// Symmetric pairing on a surface.
    Bilinear(Vec<Vec<Q>>),
    /// Symmetric trilinear form, stored densely as `t[(a * r + b) * r + c]`.
    Trilinear { rank: usize, entries: Vec<Q> },
}

impl IntersectionTensor {
    pub fn rank(&self) -> usize {
        match self {
            IntersectionTensor::Bilinear(m) => m.len(),
            IntersectionTensor::Trilinear { rank, .. } => *rank,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            IntersectionTensor::Bilinear(_) => 2,
            IntersectionTensor::Trilinear { .. } => 3,
        }
    }

    fn eval(&self, v: &[&[Q]]) -> Q {
        let mut acc = Q::zero();
        match self {
            IntersectionTensor::Bilinear(m) => {
                for (i, row) in m.iter().enumerate() {
                    if v[0][i].is_zero() {
                        continue;
                    }
                    for (j, x) in row.iter().enumerate() {
                        if !x.is_zero() && !v[1][j].is_zero() {
                            acc += &v[0][i] * &v[1][j] * x;
                        }
                    }
                }
            }
            IntersectionTensor::Trilinear { rank, entries } => {
                let r = *rank;
                for a in 0..r {
                    if v[0][a].is_zero() {
                        continue;
                    }
                    for b in 0..r {
                        if v[1][b].is_zero() {
                            continue;
                        }
                        for c in 0..r {
                            let t = &entries[(a * r + b) * r + c];
                            if !t.is_zero() && !v[2][c].is_zero() {
                                acc += &v[0][a] * &v[1][b] * &v[2][c] * t;
                            }
                        }
                    }
                }
            }
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub id: ModelId,
    pub basis: Vec<String>,
    pub tensor: IntersectionTensor,
    /// Boundary divisor classes by catalog pair. For quotients only the
    /// orbit representatives are listed.
    pub catalog: BTreeMap<Pair, DivisorClass>,
    pub canonical: DivisorClass,
    /// Pairs of `B10` blown down to reach this model (surfaces only).
    pub contracted: Vec<Pair>,
}

impl Model {
    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    pub fn rank(&self) -> usize {
        self.tensor.rank()
    }

    pub fn class(&self, pair: Pair) -> Option<&DivisorClass> {
        self.catalog.get(&pair)
    }

    pub fn class_from(&self, coeffs: Vec<Q>) -> DivisorClass {
        assert_eq!(coeffs.len(), self.rank());
        DivisorClass { model: self.id, coeffs }
    }

    pub fn intersect(&self, classes: &[&DivisorClass]) -> Result<Q> {
        if classes.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: classes.len() });
        }
        if let Some(c) = classes.iter().find(|c| c.model != self.id) {
            return Err(Error::ModelMismatch(self.id.to_string(), c.model.to_string()));
        }
        let v: Vec<&[Q]> = classes.iter().map(|c| c.coeffs.as_slice()).collect();
        Ok(self.tensor.eval(&v))
    }

    /// Self-intersection `D^dim`.
    pub fn power(&self, d: &DivisorClass) -> Result<Q> {
        self.intersect(&vec![d; self.dim()])
    }

    /// Total transform on `B10` along the blowdown `B10 -> self`.
    pub fn pullback_to_b10(&self, class: &DivisorClass) -> Result<DivisorClass> {
        if class.model != self.id {
            return Err(Error::ModelMismatch(self.id.to_string(), class.model.to_string()));
        }
        // images of the basis vectors in (h, e1, e2, e3, e4)
        let images: Vec<[i64; 5]> = match self.id {
            ModelId::B10 => return Ok(class.clone()),
            ModelId::B9 => vec![[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]],
            ModelId::B7 => vec![[1, 0, 0, 0, 0], [0, 0, 0, 0, 1]],
            _ => return Err(Error::NotASurface),
        };
        let mut out = DivisorClass::zero(ModelId::B10, 5);
        for (c, img) in class.coeffs.iter().zip(&images) {
            for (o, &x) in out.coeffs.iter_mut().zip(img) {
                *o += c * qi(x);
            }
        }
        Ok(out)
    }
}

/// Top intersection number of `classes` on `model`.
pub fn intersect(model: &Model, classes: &[&DivisorClass]) -> Result<Q> {
    model.intersect(classes)
}

fn diag(entries: &[i64]) -> IntersectionTensor {
    let n = entries.len();
    IntersectionTensor::Bilinear(
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { qi(entries[i]) } else { Q::zero() }).collect())
            .collect(),
    )
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// `[L_ij]` on `B10` in the basis `(h, e1, ..., e4)`.
pub fn b10_boundary(pair: Pair) -> DivisorClass {
    let mut c = [0i64; 5];
    if pair.1 == 4 {
        c[pair.0 + 1] = 1;
    } else {
        c[0] = 1;
        for m in (0..4).filter(|&m| !pair.contains(m)) {
            c[m + 1] = -1;
        }
    }
    DivisorClass::from_ints(ModelId::B10, &c)
}

fn build_b10() -> Model {
    Model {
        id: ModelId::B10,
        basis: names(&["h", "e1", "e2", "e3", "e4"]),
        tensor: diag(&[1, -1, -1, -1, -1]),
        catalog: Pair::all(5).map(|p| (p, b10_boundary(p))).collect(),
        canonical: DivisorClass::from_ints(ModelId::B10, &[-3, 1, 1, 1, 1]),
        contracted: vec![],
    }
}

fn build_b9() -> Model {
    let id = ModelId::B9;
    let mut catalog = BTreeMap::new();
    for p in Pair::all(5).filter(|p| *p != Pair(3, 4)) {
        let mut c = [0i64; 4];
        match p {
            Pair(i, 4) => c[i + 1] = 1,
            Pair(i, 3) => {
                c[0] = 1;
                for m in (0..3).filter(|&m| m != i) {
                    c[m + 1] = -1;
                }
            }
            Pair(i, j) => {
                c[0] = 1;
                let m = 3 - i - j;
                c[m + 1] = -1;
            }
        }
        catalog.insert(p, DivisorClass::from_ints(id, &c));
    }
    Model {
        id,
        basis: names(&["h", "e1", "e2", "e3"]),
        tensor: diag(&[1, -1, -1, -1]),
        catalog,
        canonical: DivisorClass::from_ints(id, &[-3, 1, 1, 1]),
        contracted: vec![Pair(3, 4)],
    }
}

fn build_b7() -> Model {
    let id = ModelId::B7;
    let contracted = vec![Pair(0, 4), Pair(1, 4), Pair(2, 4)];
    let catalog = Pair::all(5)
        .filter(|p| !contracted.contains(p))
        .map(|p| {
            let c = match p {
                Pair(3, 4) => [0, 1],
                Pair(_, 3) => [1, 0],
                _ => [1, -1],
            };
            (p, DivisorClass::from_ints(id, &c))
        })
        .collect();
    Model {
        id,
        basis: names(&["h", "e"]),
        tensor: diag(&[1, -1]),
        catalog,
        canonical: DivisorClass::from_ints(id, &[-3, 1]),
        contracted,
    }
}

fn matrix(rows: [[Q; 3]; 3]) -> IntersectionTensor {
    IntersectionTensor::Bilinear(rows.into_iter().map(|r| r.to_vec()).collect())
}

fn build_quot_b9() -> Model {
    let id = ModelId::QuotB9Sigma3;
    let unit = |i: usize| {
        let mut c = [0i64; 3];
        c[i] = 1;
        DivisorClass::from_ints(id, &c)
    };
    Model {
        id,
        basis: names(&["L̄14", "L̄15", "L̄12"]),
        tensor: matrix([
            [q(-1, 2), qi(1), qi(1)],
            [qi(1), q(-1, 2), qi(1)],
            [qi(1), qi(1), qi(4)],
        ]),
        catalog: [(Pair(0, 3), unit(0)), (Pair(0, 4), unit(1)), (Pair(0, 1), unit(2))].into(),
        canonical: DivisorClass::from_ints(id, &[0, 0, -1]),
        contracted: vec![Pair(3, 4)],
    }
}

fn build_quot_b7() -> Model {
    let id = ModelId::QuotB7Sigma3;
    let unit = |i: usize| {
        let mut c = [0i64; 3];
        c[i] = 1;
        DivisorClass::from_ints(id, &c)
    };
    Model {
        id,
        basis: names(&["L̄12", "L̄14", "L̄45"]),
        tensor: matrix([
            [qi(0), qi(3), qi(1)],
            [qi(3), q(3, 2), qi(0)],
            [qi(1), qi(0), q(-1, 6)],
        ]),
        catalog: [(Pair(0, 1), unit(0)), (Pair(0, 3), unit(1)), (Pair(3, 4), unit(2))].into(),
        canonical: DivisorClass { model: id, coeffs: vec![q(-2, 3), q(-2, 3), qi(0)] },
        contracted: vec![Pair(0, 4), Pair(1, 4), Pair(2, 4)],
    }
}

/// Conventions for the threefold ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct B14Convention {
    /// Cube of each exceptional divisor of a point blowup.
    pub epsilon: i64,
    /// Also blow up the cusp `P12`, adding an exceptional class `f`.
    pub cusp_blowup: bool,
}

/// The frozen convention. `e^3 = +1` is the one reproducing the published
/// threefold exponent 25/93; the cusp blowup does not change any number,
/// since the log-canonical class has coefficient zero on `f`.
pub const B14_CONVENTION: B14Convention = B14Convention { epsilon: 1, cusp_blowup: false };

pub fn build_b14(conv: B14Convention) -> Model {
    let id = ModelId::B14;
    let rank = if conv.cusp_blowup { 6 } else { 5 };
    let mut entries = vec![Q::zero(); rank * rank * rank];
    let at = |a: usize| (a * rank + a) * rank + a;
    entries[at(0)] = qi(1);
    for a in 1..rank {
        entries[at(a)] = qi(conv.epsilon);
    }
    // basis h, e3..e6 (catalog labels 2..5 at positions 1..4), then f
    let e = |j: usize| j - 1;
    let mut catalog = BTreeMap::new();
    for p in Pair::all(6) {
        let mut c = vec![0i64; rank];
        match p {
            Pair(0, 1) => {
                if !conv.cusp_blowup {
                    continue;
                }
                c[5] = 1;
            }
            Pair(0, j) => c[e(j)] = 1,
            Pair(1, j) => {
                c[0] = 1;
                for m in (2..6).filter(|&m| m != j) {
                    c[e(m)] = -1;
                }
            }
            Pair(j, k) => {
                c[0] = 1;
                for m in (2..6).filter(|&m| m != j && m != k) {
                    c[e(m)] = -1;
                }
                if conv.cusp_blowup {
                    c[5] = -1;
                }
            }
        }
        catalog.insert(p, DivisorClass::from_ints(id, &c));
    }
    let mut k = vec![-4, 2, 2, 2, 2];
    let mut basis = names(&["h", "e3", "e4", "e5", "e6"]);
    if conv.cusp_blowup {
        k.push(2);
        basis.push("f".into());
    }
    Model {
        id,
        basis,
        tensor: IntersectionTensor::Trilinear { rank, entries },
        catalog,
        canonical: DivisorClass::from_ints(id, &k),
        contracted: vec![],
    }
}

pub fn build_model(id: ModelId) -> Model {
    match id {
        ModelId::B10 => build_b10(),
        ModelId::B9 => build_b9(),
        ModelId::B7 => build_b7(),
        ModelId::B14 => build_b14(B14_CONVENTION),
        ModelId::QuotB9Sigma3 => build_quot_b9(),
        ModelId::QuotB7Sigma3 => build_quot_b7(),
    }
}

/// Parses a model name such as `B9` or `B7/Σ3`.
pub fn model_by_name(name: &str) -> Result<ModelId> {
    Ok(match name.trim() {
        "B10" => ModelId::B10,
        "B9" => ModelId::B9,
        "B7" => ModelId::B7,
        "B14" => ModelId::B14,
        "B9/Σ3" | "B9/S3" => ModelId::QuotB9Sigma3,
        "B7/Σ3" | "B7/S3" => ModelId::QuotB7Sigma3,
        other => return Err(Error::UnknownModel(other.to_string())),
    })
}

/// Pairing of two classes on one of the quotient surfaces.
pub fn quotient_intersect(id: ModelId, d1: &DivisorClass, d2: &DivisorClass) -> Result<Q> {
    match id {
        ModelId::QuotB9Sigma3 | ModelId::QuotB7Sigma3 => build_model(id).intersect(&[d1, d2]),
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

/// Orbit pullback `eta^*` from a quotient generator basis to the cover's basis.
pub fn quotient_pullback(quot: &Model, class: &DivisorClass) -> Result<DivisorClass> {
    let cover = match quot.id {
        ModelId::QuotB9Sigma3 => build_b9(),
        ModelId::QuotB7Sigma3 => build_b7(),
        other => return Err(Error::UnknownModel(other.to_string())),
    };
    let s = [0usize, 1, 2];
    let mut out = DivisorClass::zero(cover.id, cover.rank());
    for (rep, gen) in &quot.catalog {
        let slot = gen.coeffs.iter().position(|x| !x.is_zero()).expect("generators are basis vectors");
        let c = &class.coeffs[slot];
        if c.is_zero() {
            continue;
        }
        let in_s = s.contains(&rep.0) && s.contains(&rep.1);
        let weight = if in_s { qi(2) } else { qi(1) };
        for member in orbit(*rep, &s) {
            out.add_scaled(&(c * &weight), &cover.catalog[&member]);
        }
    }
    Ok(out)
}

fn permutations3() -> [[usize; 3]; 6] {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// Distinct images of `pair` under permutations of the indices in `s`.
pub fn orbit(pair: Pair, s: &[usize]) -> Vec<Pair> {
    let mut out: Vec<Pair> = Vec::new();
    for perm in permutations3() {
        let apply = |i: usize| s.iter().position(|&x| x == i).map(|p| s[perm[p]]).unwrap_or(i);
        let image = Pair::new(apply(pair.0), apply(pair.1));
        if !out.contains(&image) {
            out.push(image);
        }
    }
    out.sort();
    out
}

/// A formal combination `c K + sum c_ij [L_ij]` on a blown-down surface.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundaryCombination {
    pub canonical: Q,
    pub terms: BTreeMap<Pair, Q>,
}

fn check_contractible(contracted: &[Pair]) -> Result<()> {
    if contracted.iter().any(|p| p.1 >= 5) {
        return Err(Error::NotASurface);
    }
    for (i, a) in contracted.iter().enumerate() {
        if let Some(b) = contracted[i + 1..].iter().find(|b| a.is_disjoint(b)) {
            return Err(Error::UnsupportedProfile(format!("contracted pairs {a} and {b} are disjoint")));
        }
    }
    Ok(())
}

/// Total transform on `B10` of a class on the surface obtained by blowing down
/// the lines `L_ab` for the given pairs:
/// `b^*[L_ij] = [L_ij] + sum [L_ab]` over contracted pairs disjoint from `{i, j}`,
/// and `b^*K = K_B10 - sum [L_ab]`.
pub fn blowdown_pullback(contracted: &[Pair], class: &BoundaryCombination) -> Result<DivisorClass> {
    check_contractible(contracted)?;
    let mut out = DivisorClass::zero(ModelId::B10, 5);
    if !class.canonical.is_zero() {
        let mut k = build_b10().canonical;
        for ab in contracted {
            k.add_scaled(&qi(-1), &b10_boundary(*ab));
        }
        out.add_scaled(&class.canonical, &k);
    }
    for (pair, c) in &class.terms {
        if pair.1 >= 5 {
            return Err(Error::NotASurface);
        }
        if contracted.contains(pair) {
            return Err(Error::UnsupportedProfile(format!("{pair} is contracted")));
        }
        out.add_scaled(c, &b10_boundary(*pair));
        for ab in contracted.iter().filter(|ab| ab.is_disjoint(pair)) {
            out.add_scaled(c, &b10_boundary(*ab));
        }
    }
    Ok(out)
}

/// A model together with the classes of the boundary divisors and the
/// canonical class, indexed by the *original* branch-point labels.
#[derive(Debug, Clone)]
pub struct Realization {
    pub name: String,
    pub model: Model,
    pub boundary: BTreeMap<Pair, DivisorClass>,
    pub canonical: DivisorClass,
}

impl Realization {
    /// Relabels a catalogued model to the type's own indices.
    pub fn catalogued(choice: &ModelChoice) -> Self {
        Self::catalogued_with(choice, build_model(choice.id))
    }

    pub fn catalogued_with(choice: &ModelChoice, model: Model) -> Self {
        let n = choice.labels.len();
        let boundary = Pair::all(n)
            .filter_map(|p| model.class(p.map(&choice.labels)).map(|c| (p, c.clone())))
            .collect();
        Realization {
            name: model.id.to_string(),
            canonical: model.canonical.clone(),
            boundary,
            model,
        }
    }

    /// Works on `B10` through total transforms; valid for any contraction pattern.
    pub fn blown_down_b10(contracted: &[Pair]) -> Result<Self> {
        let boundary = Pair::all(5)
            .filter(|p| !contracted.contains(p))
            .map(|p| {
                let comb = BoundaryCombination { canonical: Q::zero(), terms: [(p, qi(1))].into() };
                blowdown_pullback(contracted, &comb).map(|c| (p, c))
            })
            .collect::<Result<_>>()?;
        let canonical = blowdown_pullback(
            contracted,
            &BoundaryCombination { canonical: qi(1), terms: BTreeMap::new() },
        )?;
        Ok(Realization { name: "B10*".into(), model: build_b10(), boundary, canonical })
    }

    /// The catalogued model when available; for surfaces otherwise `B10`.
    pub fn for_report(report: &ConditionReport) -> Result<Self> {
        match &report.model {
            Some(choice) => Ok(Self::catalogued(choice)),
            None if report.weights.len() == 5 => Self::blown_down_b10(&report.contracted_pairs),
            None => crate::conditions::select_model(report, report.weights.len()).map(|c| Self::catalogued(&c)),
        }
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn class(&self, pair: Pair) -> Option<&DivisorClass> {
        self.boundary.get(&pair)
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass::zero(self.model.id, self.model.rank())
    }

    pub fn intersect(&self, classes: &[&DivisorClass]) -> Result<Q> {
        self.model.intersect(classes)
    }

    /// `a . b^{dim-1}`.
    pub fn against_power(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Q> {
        let mut v = vec![a];
        v.extend(std::iter::repeat_n(b, self.dim() - 1));
        self.intersect(&v)
    }

    pub fn power(&self, d: &DivisorClass) -> Result<Q> {
        self.model.power(d)
    }
}
