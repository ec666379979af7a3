//! Concrete models: U, E8(−1), the K3 lattice, the Mukai lattice, B-fields
//! and the lattices built from them.
//!
//! Mukai pairing convention: `(r, c, m)·(r′, c′, m′) = c·c′ − r·m′ − r′·m`.
//! Mukai coordinates are ordered `e0`, the 22 K3 labels, `e4`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{
    direct_sum, intersect_with_subspace, kernel_sublattice, orthogonal_complement,
    Embedding, Lattice, LatticeError, RationalFunctional,
};
use crate::linalg::{int, rat, rat_from_int, IntMat, RatMat};

pub const MUKAI_CONVENTION: &str = "(r,c,m).(r',c',m') = c.c' - r*m' - r'*m";

/// Simple-root Gram of E8(−1), Bourbaki numbering (branch node 4, attached to 2).
pub const E8_MINUS_GRAM: [[i64; 8]; 8] = [
    [-2, 0, 1, 0, 0, 0, 0, 0],
    [0, -2, 0, 1, 0, 0, 0, 0],
    [1, 0, -2, 1, 0, 0, 0, 0],
    [0, 1, 1, -2, 1, 0, 0, 0],
    [0, 0, 0, 1, -2, 1, 0, 0],
    [0, 0, 0, 0, 1, -2, 1, 0],
    [0, 0, 0, 0, 0, 1, -2, 1],
    [0, 0, 0, 0, 0, 0, 1, -2],
];

pub const K3_LABELS: [&str; 22] = [
    "U1.e", "U1.f", "U2.e", "U2.f", "U3.e", "U3.f", "E8a.r1", "E8a.r2", "E8a.r3", "E8a.r4",
    "E8a.r5", "E8a.r6", "E8a.r7", "E8a.r8", "E8b.r1", "E8b.r2", "E8b.r3", "E8b.r4", "E8b.r5",
    "E8b.r6", "E8b.r7", "E8b.r8",
];

pub const K3_RANK: usize = 22;
pub const MUKAI_RANK: usize = 24;

/// K3 index of `s`, a simple root of the first E8(−1) with two neighbours.
pub const S_INDEX: usize = 8;
/// K3 indices of the roots adjacent to `s`.
pub const S_NEIGHBOURS: [usize; 2] = [6, 9];
/// Search coordinates for [`realize_bfield`]: U1, U2, U3 and the neighbours of `s`.
const SEARCH_INDICES: [usize; 8] = [0, 1, 2, 3, 4, 5, 6, 9];
/// Numerators of the half-integral search coefficients lie in `[-SEARCH_BOUND, SEARCH_BOUND]`.
pub const SEARCH_BOUND: i64 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown lattice name {0:?}")]
    UnknownName(String),
    #[error("inadmissible B-field parameters: {0}")]
    Inadmissible(String),
    #[error("no B-field found with numerators bounded by {bound}")]
    Capacity { bound: i64 },
    #[error("inconsistent construction: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub type Result<T> = std::result::Result<T, CatalogError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardName {
    U,
    E8Minus,
    K3,
    Mukai,
}

impl StandardName {
    pub const ALL: [StandardName; 4] = [
        StandardName::U,
        StandardName::E8Minus,
        StandardName::K3,
        StandardName::Mukai,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StandardName::U => "U",
            StandardName::E8Minus => "E8minus",
            StandardName::K3 => "K3",
            StandardName::Mukai => "Mukai",
        }
    }
}

impl fmt::Display for StandardName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StandardName {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self> {
        StandardName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| CatalogError::UnknownName(s.to_string()))
    }
}

/// A lattice with a label per basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedLattice {
    pub lattice: Lattice,
    pub labels: Vec<String>,
}

impl NamedLattice {
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn u_lattice() -> Lattice {
    Lattice::from_rows(&[vec![0, 1], vec![1, 0]]).expect("symmetric")
}

fn e8_minus_lattice() -> Lattice {
    let rows: Vec<Vec<i64>> = E8_MINUS_GRAM.iter().map(|r| r.to_vec()).collect();
    Lattice::from_rows(&rows).expect("symmetric")
}

pub fn k3_lattice() -> Lattice {
    static K3: OnceLock<Lattice> = OnceLock::new();
    K3.get_or_init(|| {
        let u = u_lattice();
        let e8 = e8_minus_lattice();
        direct_sum(&[&u, &u, &u, &e8, &e8])
    })
    .clone()
}

pub fn mukai_lattice() -> Lattice {
    static MUKAI: OnceLock<Lattice> = OnceLock::new();
    MUKAI.get_or_init(build_mukai).clone()
}

fn build_mukai() -> Lattice {
    // e0·e4 = −1, K3 block in the middle
    let k3 = k3_lattice();
    let mut rows = vec![vec![BigInt::zero(); MUKAI_RANK]; MUKAI_RANK];
    rows[0][MUKAI_RANK - 1] = int(-1);
    rows[MUKAI_RANK - 1][0] = int(-1);
    for i in 0..K3_RANK {
        for j in 0..K3_RANK {
            rows[i + 1][j + 1] = k3.gram().get(i, j).clone();
        }
    }
    Lattice::new(IntMat::from_rows(&rows).expect("square")).expect("symmetric")
}

pub fn mukai_labels() -> Vec<String> {
    std::iter::once("e0")
        .chain(K3_LABELS)
        .chain(std::iter::once("e4"))
        .map(str::to_string)
        .collect()
}

pub fn standard_lattice(name: StandardName) -> NamedLattice {
    match name {
        StandardName::U => NamedLattice {
            lattice: u_lattice(),
            labels: vec!["e".into(), "f".into()],
        },
        StandardName::E8Minus => NamedLattice {
            lattice: e8_minus_lattice(),
            labels: (1..=8).map(|i| format!("r{i}")).collect(),
        },
        StandardName::K3 => NamedLattice {
            lattice: k3_lattice(),
            labels: K3_LABELS.iter().map(|s| s.to_string()).collect(),
        },
        StandardName::Mukai => NamedLattice {
            lattice: mukai_lattice(),
            labels: mukai_labels(),
        },
    }
}

pub fn standard_lattice_by_name(name: &str) -> Result<NamedLattice> {
    Ok(standard_lattice(name.parse()?))
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

/// `h = U1.e + U1.f` in K3 coordinates.
pub fn h_vector() -> Vec<BigInt> {
    let mut v = unit(K3_RANK, 0);
    v[1] = BigInt::one();
    v
}

/// `s = E8a.r3` in K3 coordinates.
pub fn s_vector() -> Vec<BigInt> {
    unit(K3_RANK, S_INDEX)
}

/// The fiber class `f = h − s`.
pub fn f_vector() -> Vec<BigInt> {
    h_vector().iter().zip(s_vector()).map(|(a, b)| a - b).collect()
}

/// `⟨h, s⟩ ⊂ K3`.
pub fn picard_embedding() -> Embedding {
    let basis = IntMat::from_rows(&[h_vector(), s_vector()]).expect("rectangular");
    Embedding::new(k3_lattice(), basis).expect("h, s independent")
}

/// `⟨f⟩ ⊂ K3`, a degenerate rank-one sublattice.
pub fn fiber_embedding() -> Embedding {
    let basis = IntMat::from_rows(&[f_vector()]).expect("rectangular");
    Embedding::new(k3_lattice(), basis).expect("f nonzero")
}

fn k3_dot(x: &[BigRational], y: &[BigRational]) -> BigRational {
    static K3: OnceLock<Lattice> = OnceLock::new();
    K3.get_or_init(k3_lattice).pairing_rat(x, y)
}

fn to_rat_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(rat_from_int).collect()
}

/// A Mukai vector `(r, c, m)` with rational entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MukaiVector {
    pub r: BigRational,
    pub c: Vec<BigRational>,
    pub m: BigRational,
}

impl MukaiVector {
    pub fn new(r: BigRational, c: Vec<BigRational>, m: BigRational) -> Self {
        assert_eq!(c.len(), K3_RANK, "K3 component has rank 22");
        MukaiVector { r, c, m }
    }

    pub fn zero() -> Self {
        Self::new(
            BigRational::zero(),
            vec![BigRational::zero(); K3_RANK],
            BigRational::zero(),
        )
    }

    pub fn e0() -> Self {
        MukaiVector {
            r: BigRational::one(),
            ..Self::zero()
        }
    }

    pub fn e4() -> Self {
        MukaiVector {
            m: BigRational::one(),
            ..Self::zero()
        }
    }

    /// `(0, c, 0)`.
    pub fn from_k3(c: &[BigInt]) -> Self {
        Self::new(BigRational::zero(), to_rat_vec(c), BigRational::zero())
    }

    /// From 24 Mukai coordinates.
    pub fn from_coords(v: &[BigRational]) -> Self {
        assert_eq!(v.len(), MUKAI_RANK);
        Self::new(
            v[0].clone(),
            v[1..MUKAI_RANK - 1].to_vec(),
            v[MUKAI_RANK - 1].clone(),
        )
    }

    pub fn from_int_coords(v: &[BigInt]) -> Self {
        Self::from_coords(&to_rat_vec(v))
    }

    pub fn coords(&self) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(MUKAI_RANK);
        out.push(self.r.clone());
        out.extend(self.c.iter().cloned());
        out.push(self.m.clone());
        out
    }

    pub fn int_coords(&self) -> Option<Vec<BigInt>> {
        self.coords()
            .into_iter()
            .map(|v| v.is_integer().then(|| v.to_integer()))
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.int_coords().is_some()
    }

    pub fn pairing(&self, other: &MukaiVector) -> BigRational {
        k3_dot(&self.c, &other.c) - &self.r * &other.m - &other.r * &self.m
    }

    pub fn square(&self) -> BigRational {
        self.pairing(self)
    }

    pub fn add(&self, other: &MukaiVector) -> MukaiVector {
        MukaiVector {
            r: &self.r + &other.r,
            c: self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect(),
            m: &self.m + &other.m,
        }
    }

    pub fn scale(&self, k: &BigRational) -> MukaiVector {
        MukaiVector {
            r: &self.r * k,
            c: self.c.iter().map(|a| a * k).collect(),
            m: &self.m * k,
        }
    }

    pub fn neg(&self) -> MukaiVector {
        self.scale(&-BigRational::one())
    }
}

/// The triple `(B², B·h, B·s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BFieldParams {
    pub bsq: BigRational,
    pub bh: BigRational,
    pub bs: BigRational,
}

fn is_half_odd(v: &BigRational) -> bool {
    let twice = v * rat(2, 1);
    twice.is_integer() && twice.to_integer().is_odd()
}

impl BFieldParams {
    /// Admissible triples only: `2B²`, `2B·h`, `2B·s` odd.
    pub fn new(bsq: BigRational, bh: BigRational, bs: BigRational) -> Result<Self> {
        let p = BFieldParams { bsq, bh, bs };
        p.check_admissible()?;
        Ok(p)
    }

    /// Without the admissibility check.
    pub fn unchecked(bsq: BigRational, bh: BigRational, bs: BigRational) -> Self {
        BFieldParams { bsq, bh, bs }
    }

    /// From the numerators of the three half-integers.
    pub fn from_numerators(nsq: i64, nh: i64, ns: i64) -> Result<Self> {
        Self::new(rat(nsq, 2), rat(nh, 2), rat(ns, 2))
    }

    pub fn default_params() -> Self {
        Self::from_numerators(1, 1, 1).expect("admissible")
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible().is_ok()
    }

    fn check_admissible(&self) -> Result<()> {
        for (name, v) in [("B^2", &self.bsq), ("B.h", &self.bh), ("B.s", &self.bs)] {
            if !is_half_odd(v) {
                return Err(CatalogError::Inadmissible(format!(
                    "2*{name} = {} is not an odd integer",
                    v * rat(2, 1)
                )));
            }
        }
        Ok(())
    }

    /// The triple with `B²` replaced by `value`.
    pub fn with_bsq(&self, value: BigRational) -> Result<Self> {
        Self::new(value, self.bh.clone(), self.bs.clone())
    }
}

impl fmt::Display for BFieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(B^2={}, B.h={}, B.s={})", self.bsq, self.bh, self.bs)
    }
}

/// A half-integral class `B` in K3 coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConcreteBField {
    vector: Vec<BigRational>,
}

impl ConcreteBField {
    /// Any vector with `2B` integral.
    pub fn new(vector: Vec<BigRational>) -> Result<Self> {
        if vector.len() != K3_RANK {
            return Err(CatalogError::Inconsistent(format!(
                "B-field has {} entries",
                vector.len()
            )));
        }
        if vector.iter().any(|v| !(v * rat(2, 1)).is_integer()) {
            return Err(CatalogError::Inadmissible("2B is not integral".into()));
        }
        Ok(ConcreteBField { vector })
    }

    pub fn vector(&self) -> &[BigRational] {
        &self.vector
    }

    pub fn dot(&self, c: &[BigRational]) -> BigRational {
        k3_dot(&self.vector, c)
    }

    pub fn dot_int(&self, c: &[BigInt]) -> BigRational {
        self.dot(&to_rat_vec(c))
    }

    /// The triple this vector realizes.
    pub fn params(&self) -> BFieldParams {
        BFieldParams::unchecked(
            self.dot(&self.vector),
            self.dot_int(&h_vector()),
            self.dot_int(&s_vector()),
        )
    }

    /// `B + u + (k·h + l·s)/2`.
    pub fn relift(&self, u: &[BigInt], k: i64, l: i64) -> ConcreteBField {
        let h = h_vector();
        let s = s_vector();
        let vector = (0..K3_RANK)
            .map(|i| {
                &self.vector[i]
                    + rat_from_int(&u[i])
                    + rat_from_int(&(&h[i] * k + &s[i] * l)) / rat(2, 1)
            })
            .collect();
        ConcreteBField { vector }
    }

    pub fn negate(&self) -> ConcreteBField {
        ConcreteBField {
            vector: self.vector.iter().map(|v| -v).collect(),
        }
    }
}

/// `0, 1, −1, 2, −2, …` up to `bound` in absolute value.
fn small_first(bound: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=bound).flat_map(|k| [k, -k]))
}

/// A concrete half-integral `B` supported on U1 ⊕ U2 ⊕ U3 and the two roots
/// adjacent to `s`, realizing `params` exactly. Deterministic.
pub fn realize_bfield(params: &BFieldParams) -> Result<ConcreteBField> {
    params.check_admissible()?;
    let two = rat(2, 1);
    let th = (&params.bh * &two).to_integer();
    let ts = (&params.bs * &two).to_integer();
    let tsq = (&params.bsq * &two).to_integer();
    let bound = int(SEARCH_BOUND);
    let in_range = |v: &BigInt| v.abs() <= bound;
    // With n_i the numerators on SEARCH_INDICES:
    //   n1e + n1f = 2bh, nr1 + nr4 = 2bs,
    //   n1e·n1f + n2e·n2f + n3e·n3f − nr1² − nr4² = 2bsq
    for a in small_first(SEARCH_BOUND) {
        let n1e = int(a);
        let n1f = &th - &n1e;
        if !in_range(&n1f) {
            continue;
        }
        for r in small_first(SEARCH_BOUND) {
            let nr1 = int(r);
            let nr4 = &ts - &nr1;
            if !in_range(&nr4) {
                continue;
            }
            let base = &n1e * &n1f - &nr1 * &nr1 - &nr4 * &nr4;
            for c in small_first(SEARCH_BOUND) {
                let n3e = int(c);
                for d in small_first(SEARCH_BOUND) {
                    let n3f = int(d);
                    let rest = &tsq - &base - &n3e * &n3f;
                    for e in small_first(SEARCH_BOUND) {
                        if e == 0 {
                            if !rest.is_zero() {
                                continue;
                            }
                        } else if !rest.is_multiple_of(&int(e)) {
                            continue;
                        }
                        let n2e = int(e);
                        let n2f = if e == 0 { BigInt::zero() } else { &rest / &n2e };
                        if !in_range(&n2f) {
                            continue;
                        }
                        let numerators = [&n1e, &n1f, &n2e, &n2f, &n3e, &n3f, &nr1, &nr4];
                        let mut vector = vec![BigRational::zero(); K3_RANK];
                        for (&idx, n) in SEARCH_INDICES.iter().zip(numerators) {
                            vector[idx] = BigRational::new(n.clone(), int(2));
                        }
                        let b = ConcreteBField { vector };
                        if &b.params() != params {
                            return Err(CatalogError::Inconsistent(format!(
                                "search produced {} for {}",
                                b.params(),
                                params
                            )));
                        }
                        return Ok(b);
                    }
                }
            }
        }
    }
    Err(CatalogError::Capacity {
        bound: SEARCH_BOUND,
    })
}

/// `(r, c, m) ↦ (r, c + r·B, m + c·B + r·B²/2)`.
pub fn exp_b(b: &ConcreteBField, v: &MukaiVector) -> MukaiVector {
    let bsq = b.dot(b.vector());
    let c: Vec<BigRational> = v
        .c
        .iter()
        .zip(b.vector())
        .map(|(ci, bi)| ci + &v.r * bi)
        .collect();
    let m = &v.m + b.dot(&v.c) + &v.r * bsq / rat(2, 1);
    MukaiVector::new(v.r.clone(), c, m)
}

fn mukai_rows(vs: &[MukaiVector]) -> Result<IntMat> {
    let rows: Vec<Vec<BigInt>> = vs
        .iter()
        .map(|v| {
            v.int_coords()
                .ok_or_else(|| CatalogError::Inconsistent("non-integral generator".into()))
        })
        .collect::<Result<_>>()?;
    Ok(IntMat::from_rows_with_cols(&rows, MUKAI_RANK).expect("rectangular"))
}

/// The named generators `2e0 + 2B, p_1, …, p_k, e4` for Picard vectors `p_i`.
pub fn twisted_generators(b: &ConcreteBField, picard: &[Vec<BigInt>]) -> Vec<MukaiVector> {
    let two = rat(2, 1);
    let g = MukaiVector::new(
        two.clone(),
        b.vector().iter().map(|v| v * &two).collect(),
        BigRational::zero(),
    );
    let mut out = vec![g];
    out.extend(picard.iter().map(|p| MukaiVector::from_k3(p)));
    out.push(MukaiVector::e4());
    out
}

/// Saturated intersection of the Mukai lattice with
/// `exp(B)·span_Q(e0, picard, e4)`.
pub fn twisted_algebraic_saturation(
    b: &ConcreteBField,
    picard: &[Vec<BigInt>],
) -> Result<Embedding> {
    let mut span = vec![exp_b(b, &MukaiVector::e0())];
    span.extend(picard.iter().map(|p| exp_b(b, &MukaiVector::from_k3(p))));
    span.push(exp_b(b, &MukaiVector::e4()));
    let rows: Vec<Vec<BigRational>> = span.iter().map(|v| v.coords()).collect();
    let spanning = RatMat::from_rows(&rows).map_err(LatticeError::from)?;
    Ok(intersect_with_subspace(&mukai_lattice(), &spanning)?)
}

/// The twisted algebraic lattice in the basis of its named generators; fails
/// if they do not span the saturated intersection.
pub fn twisted_algebraic_lattice_with(
    b: &ConcreteBField,
    picard: &[Vec<BigInt>],
) -> Result<Embedding> {
    let sat = twisted_algebraic_saturation(b, picard)?;
    let named = Embedding::new(mukai_lattice(), mukai_rows(&twisted_generators(b, picard))?)?;
    if !named.same_span(&sat) {
        return Err(CatalogError::Inconsistent(
            "named generators do not span the saturated lattice".into(),
        ));
    }
    Ok(named)
}

/// `⟨2e0 + 2B, h, s, e4⟩ ⊂ Mukai`, rank 4. Requires admissible `b`.
pub fn twisted_algebraic_lattice(b: &ConcreteBField) -> Result<Embedding> {
    b.params().check_admissible()?;
    twisted_algebraic_lattice_with(b, &[h_vector(), s_vector()])
}

/// `⟨2e0 + 2B, h, e4⟩`, the rank-3 lattice for a Picard group `⟨h⟩`.
pub fn twisted_algebraic_lattice_single(b: &ConcreteBField) -> Result<Embedding> {
    if !is_half_odd(&b.dot_int(&h_vector())) {
        return Err(CatalogError::Inadmissible("2B.h is not odd".into()));
    }
    twisted_algebraic_lattice_with(b, &[h_vector()])
}

/// Expected Gram of [`twisted_algebraic_lattice`] in its named basis.
pub fn twisted_gram(params: &BFieldParams) -> Option<IntMat> {
    let four = rat(4, 1);
    let two = rat(2, 1);
    let entries = [
        [&params.bsq * &four, &params.bh * &two, &params.bs * &two, rat(-2, 1)],
        [&params.bh * &two, rat(2, 1), rat(0, 1), rat(0, 1)],
        [&params.bs * &two, rat(0, 1), rat(-2, 1), rat(0, 1)],
        [rat(-2, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
    ];
    let rows: Vec<Vec<BigRational>> = entries.iter().map(|r| r.to_vec()).collect();
    RatMat::from_rows(&rows).ok()?.to_int()
}

/// The models `T(S) ⊂ K3`, `α: T(S) → Q/Z` and `ker α ⊂ T(S)`.
#[derive(Clone, Debug)]
pub struct TranscendentalModels {
    /// complement of `⟨h, s⟩` in K3
    pub t_s: Embedding,
    /// kernel of `alpha`, inside `t_s.sublattice()`
    pub t_x: Embedding,
    pub alpha: RationalFunctional,
    pub index: BigInt,
}

impl TranscendentalModels {
    /// `ker α` as a sublattice of K3.
    pub fn t_x_in_k3(&self) -> Result<Embedding> {
        Ok(self.t_s.compose(&self.t_x)?)
    }
}

pub fn transcendental_models(b: &ConcreteBField) -> Result<TranscendentalModels> {
    b.params().check_admissible()?;
    let t_s = orthogonal_complement(&picard_embedding())?;
    let values: Vec<BigRational> = (0..t_s.rank())
        .map(|i| b.dot_int(t_s.basis().row(i)))
        .collect();
    let alpha = RationalFunctional::new(values);
    let (t_x, index) = kernel_sublattice(&t_s.sublattice(), &alpha)?;
    Ok(TranscendentalModels {
        t_s,
        t_x,
        alpha,
        index,
    })
}

/// Pullback of `phi` along the basis of `e`.
pub fn brauer_restrict(phi: &RationalFunctional, e: &Embedding) -> Result<RationalFunctional> {
    if phi.rank() != e.ambient().rank() {
        return Err(CatalogError::Lattice(LatticeError::DimensionMismatch(format!(
            "functional has rank {}, embedding ambient has rank {}",
            phi.rank(),
            e.ambient().rank()
        ))));
    }
    Ok(phi.pullback(e.basis())?)
}

/// The parities of `(2B², 2B·h, 2B·s)` as `0`/`1`, or `None` if one of them
/// is not an integer.
pub fn parity_triple(b: &ConcreteBField) -> Option<[u8; 3]> {
    let p = b.params();
    let two = rat(2, 1);
    let mut out = [0u8; 3];
    for (slot, v) in out.iter_mut().zip([&p.bsq, &p.bh, &p.bs]) {
        let t = v * &two;
        if !t.is_integer() {
            return None;
        }
        *slot = t.to_integer().mod_floor(&int(2)).to_u8().expect("0 or 1");
    }
    Some(out)
}

/// Pairwise Mukai pairings.
pub fn mukai_pairings(vs: &[MukaiVector]) -> Vec<Vec<BigRational>> {
    vs.iter()
        .map(|x| vs.iter().map(|y| x.pairing(y)).collect())
        .collect()
}
