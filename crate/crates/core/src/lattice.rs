//! Integral lattices given by Gram matrices, embeddings into ambient
//! lattices, discriminant forms and overlattices.
//!
//! A [`Lattice`] is abstract: just a symmetric integer Gram matrix. Where a
//! lattice sits inside another is carried by an [`Embedding`], whose basis rows
//! are coordinates in the ambient basis. Degenerate lattices are fine to build
//! and embed; only the discriminant machinery insists on `det ≠ 0`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::forms::{self, FiniteQuadraticForm, FormError, Subgroup, TorsionElement};
use crate::linalg::{
    self, denominator_lcm, determinant, hnf_rows, int, rat_from_int, rat_mod, saturate_rows,
    saturated_kernel, snf, IntMat, LinalgError, RatMat,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("lattice is degenerate (determinant 0)")]
    Degenerate,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("embeddings live in different ambient lattices")]
    AmbientMismatch,
    #[error("basis rows are linearly dependent")]
    DependentRows,
    #[error("result is not integral: {0}")]
    NonIntegral(String),
    #[error("quotient is not cyclic: invariant factors {0:?}")]
    NonCyclicQuotient(Vec<String>),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// `(positive, negative, zero)` counts of a diagonalized Gram matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    gram: IntMat,
}

impl Lattice {
    pub fn new(gram: IntMat) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(Lattice { gram })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMat::from_rows(rows)?)
    }

    /// The rank-zero lattice.
    pub fn zero() -> Self {
        Lattice {
            gram: IntMat::zeros(0, 0),
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMat {
        &self.gram
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.gram).expect("Gram matrix is square")
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram.get(i, i).is_even())
    }

    pub fn pairing(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let gy = self.gram.mul_vec(y).expect("vector length matches rank");
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn pairing_rat(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let n = self.rank();
        assert!(x.len() == n && y.len() == n, "vector length matches rank");
        let mut acc = BigRational::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                let g = self.gram.get(i, j);
                if !g.is_zero() && !y[j].is_zero() {
                    acc += &x[i] * &y[j] * rat_from_int(g);
                }
            }
        }
        acc
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        direct_sum(&[self, other])
    }

    /// Counts from an exact symmetric diagonalization over the rationals.
    pub fn signature(&self) -> Signature {
        let n = self.rank();
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| self.gram.row(i).iter().map(rat_from_int).collect())
            .collect();
        let mut sig = Signature {
            positive: 0,
            negative: 0,
            zero: 0,
        };
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                    a.swap(k, j);
                    for row in a.iter_mut() {
                        row.swap(k, j);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                    // a[j][j] = 0 here, so adding j to k makes the pivot 2 a[k][j]
                    for c in 0..n {
                        let v = a[j][c].clone();
                        a[k][c] += v;
                    }
                    for row in a.iter_mut() {
                        let v = row[j].clone();
                        row[k] += v;
                    }
                } else {
                    sig.zero += 1;
                    continue;
                }
            }
            let pivot = a[k][k].clone();
            if pivot.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                for j in k + 1..n {
                    let d = &f * &a[k][j];
                    a[i][j] -= d;
                }
                a[i][k] = BigRational::zero();
                a[k][i] = BigRational::zero();
            }
        }
        sig
    }

    /// Discriminant group `L^∨ / L` with its bilinear and quadratic forms.
    pub fn discriminant_group(&self) -> Result<DiscriminantGroup> {
        DiscriminantGroup::of(self)
    }

    /// Multiplies the Gram matrix by `factor`; the result must stay integral.
    pub fn rescale(&self, factor: &BigRational) -> Result<Lattice> {
        if factor.is_zero() {
            return Err(LatticeError::NonIntegral("scaling factor is zero".into()));
        }
        let scaled = self.gram.to_rat().scale(factor);
        let gram = scaled.to_int().ok_or_else(|| {
            LatticeError::NonIntegral(format!("Gram matrix times {factor}"))
        })?;
        Ok(Lattice { gram })
    }
}

pub fn direct_sum(parts: &[&Lattice]) -> Lattice {
    let n: usize = parts.iter().map(|l| l.rank()).sum();
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut offset = 0;
    for l in parts {
        for i in 0..l.rank() {
            let mut row = vec![BigInt::zero(); n];
            for j in 0..l.rank() {
                row[offset + j] = l.gram.get(i, j).clone();
            }
            rows.push(row);
        }
        offset += l.rank();
    }
    Lattice {
        gram: IntMat::from_rows_with_cols(&rows, n).expect("square by construction"),
    }
}

/// Multiplies by `factor`.
pub fn rescale(l: &Lattice, factor: &BigRational) -> Result<Lattice> {
    l.rescale(factor)
}

/// A sublattice given by basis rows in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    ambient: Lattice,
    basis: IntMat,
}

impl Embedding {
    pub fn new(ambient: Lattice, basis: IntMat) -> Result<Self> {
        if basis.cols() != ambient.rank() {
            return Err(LatticeError::DimensionMismatch(format!(
                "basis has {} columns, ambient rank is {}",
                basis.cols(),
                ambient.rank()
            )));
        }
        if linalg::rank(&basis) != basis.rows() {
            return Err(LatticeError::DependentRows);
        }
        Ok(Embedding { ambient, basis })
    }

    /// The ambient lattice embedded into itself.
    pub fn full(ambient: Lattice) -> Self {
        let n = ambient.rank();
        Embedding {
            ambient,
            basis: IntMat::identity(n),
        }
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Induced lattice `B · G · Bᵀ`.
    pub fn sublattice(&self) -> Lattice {
        let g = &(&self.basis * self.ambient.gram()) * &self.basis.transpose();
        Lattice { gram: g }
    }

    /// Saturation of the basis span inside the ambient lattice.
    pub fn saturation(&self) -> Embedding {
        if self.rank() == 0 {
            return self.clone();
        }
        Embedding {
            ambient: self.ambient.clone(),
            basis: saturate_rows(&self.basis),
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.same_span(&self.saturation())
    }

    /// Whether both bases span the same subgroup of the same ambient lattice.
    pub fn same_span(&self, other: &Embedding) -> bool {
        self.ambient == other.ambient && self.canonical_basis() == other.canonical_basis()
    }

    /// Hermite normal form of the basis.
    pub fn canonical_basis(&self) -> IntMat {
        if self.rank() == 0 {
            return self.basis.clone();
        }
        hnf_rows(&self.basis)
    }

    /// `[ambient : span]` when the embedding has full rank, else `None`.
    pub fn index(&self) -> Option<BigInt> {
        if self.rank() != self.ambient.rank() {
            return None;
        }
        Some(determinant(&self.basis).expect("square").abs())
    }

    /// Coordinates of an ambient vector in this basis, if it lies in the span.
    pub fn coordinates_of(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        Ok(linalg::solve_integral(&self.basis.transpose(), v)?)
    }

    /// Embeds a sublattice of `self.sublattice()` into `self.ambient()`.
    pub fn compose(&self, inner: &Embedding) -> Result<Embedding> {
        if inner.ambient != self.sublattice() {
            return Err(LatticeError::AmbientMismatch);
        }
        Embedding::new(self.ambient.clone(), &inner.basis * &self.basis)
    }
}

/// Primitive sublattice of ambient vectors orthogonal to the embedded lattice.
pub fn orthogonal_complement(e: &Embedding) -> Result<Embedding> {
    if !e.ambient.is_nondegenerate() {
        return Err(LatticeError::Degenerate);
    }
    if e.rank() == 0 {
        return Ok(Embedding::full(e.ambient.clone()));
    }
    let cols = e.ambient.gram() * &e.basis.transpose();
    let k = saturated_kernel(&cols);
    Embedding::new(e.ambient.clone(), k)
}

/// Saturated basis of the ambient vectors lying in the rational row span of
/// `spanning`.
pub fn intersect_with_subspace(ambient: &Lattice, spanning: &RatMat) -> Result<Embedding> {
    if spanning.cols() != ambient.rank() {
        return Err(LatticeError::DimensionMismatch(format!(
            "spanning vectors have {} entries, ambient rank is {}",
            spanning.cols(),
            ambient.rank()
        )));
    }
    if spanning.rank() != spanning.rows() {
        return Err(LatticeError::DependentRows);
    }
    if spanning.rows() == 0 {
        return Embedding::new(ambient.clone(), IntMat::zeros(0, ambient.rank()));
    }
    let cleared = spanning.clear_row_denominators();
    Embedding::new(ambient.clone(), saturate_rows(&cleared))
}

/// Exact intersection of the two integer spans (not of their saturations).
pub fn sublattice_intersection(e1: &Embedding, e2: &Embedding) -> Result<Embedding> {
    if e1.ambient != e2.ambient {
        return Err(LatticeError::AmbientMismatch);
    }
    let n = e1.ambient.rank();
    if e1.rank() == 0 || e2.rank() == 0 {
        return Embedding::new(e1.ambient.clone(), IntMat::zeros(0, n));
    }
    let stacked = e1.basis.vstack(&e2.basis.neg())?;
    let k = saturated_kernel(&stacked);
    if k.rows() == 0 {
        return Embedding::new(e1.ambient.clone(), IntMat::zeros(0, n));
    }
    let first: Vec<Vec<BigInt>> = (0..k.rows()).map(|i| k.row(i)[..e1.rank()].to_vec()).collect();
    let coeffs = IntMat::from_rows_with_cols(&first, e1.rank())?;
    let vectors = &coeffs * &e1.basis;
    Embedding::new(e1.ambient.clone(), hnf_rows(&vectors))
}

/// Whether the columns of `map` (images of the source basis, in target
/// coordinates) preserve all pairings: `mapᵀ · G_target · map = G_source`.
pub fn is_isometry(map: &IntMat, source: &Lattice, target: &Lattice) -> Result<bool> {
    if map.rows() != target.rank() || map.cols() != source.rank() {
        return Err(LatticeError::DimensionMismatch(format!(
            "map is {}x{}, expected {}x{}",
            map.rows(),
            map.cols(),
            target.rank(),
            source.rank()
        )));
    }
    let pulled = &(&map.transpose() * target.gram()) * map;
    Ok(&pulled == source.gram())
}

/// Rational version of [`is_isometry`], for maps that may not be integral.
pub fn is_rational_isometry(map: &RatMat, source: &Lattice, target: &Lattice) -> Result<bool> {
    if map.rows() != target.rank() || map.cols() != source.rank() {
        return Err(LatticeError::DimensionMismatch(format!(
            "map is {}x{}, expected {}x{}",
            map.rows(),
            map.cols(),
            target.rank(),
            source.rank()
        )));
    }
    let pulled = &(&map.transpose() * &target.gram().to_rat()) * map;
    Ok(pulled == source.gram().to_rat())
}

/// A homomorphism `L → Q/Z`, stored by its values on the basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunctional {
    values: Vec<BigRational>,
    order: BigInt,
}

impl RationalFunctional {
    pub fn new(values: Vec<BigRational>) -> Self {
        let values: Vec<BigRational> = values.iter().map(|v| rat_mod(v, &BigInt::one())).collect();
        let order = denominator_lcm(&values);
        RationalFunctional { values, order }
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![BigRational::zero(); rank])
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.order.is_one()
    }

    /// Value on a lattice vector, in `[0, 1)`.
    pub fn evaluate(&self, x: &[BigInt]) -> BigRational {
        let sum: BigRational = self
            .values
            .iter()
            .zip(x)
            .map(|(v, c)| v * rat_from_int(c))
            .sum();
        rat_mod(&sum, &BigInt::one())
    }

    /// Pullback along a basis (rows in this functional's coordinates).
    pub fn pullback(&self, basis: &IntMat) -> Result<RationalFunctional> {
        if basis.cols() != self.rank() {
            return Err(LatticeError::DimensionMismatch(format!(
                "basis has {} columns, functional has rank {}",
                basis.cols(),
                self.rank()
            )));
        }
        Ok(RationalFunctional::new(
            (0..basis.rows()).map(|i| self.evaluate(basis.row(i))).collect(),
        ))
    }

    /// The functional on `e.ambient()` with kernel exactly the span of `e`,
    /// for a full-rank sublattice with cyclic quotient.
    pub fn vanishing_exactly_on(e: &Embedding) -> Result<RationalFunctional> {
        let n = e.ambient.rank();
        if e.rank() != n {
            return Err(LatticeError::DimensionMismatch(
                "sublattice must have full rank".into(),
            ));
        }
        let dec = snf(&e.basis);
        let nontrivial: Vec<usize> = (0..n).filter(|&k| !dec.d.get(k, k).is_one()).collect();
        match nontrivial.as_slice() {
            [] => Ok(RationalFunctional::zero(n)),
            [k] => {
                let dk = dec.d.get(*k, *k).clone();
                Ok(RationalFunctional::new(
                    (0..n)
                        .map(|i| BigRational::new(dec.v.get(i, *k).clone(), dk.clone()))
                        .collect(),
                ))
            }
            many => Err(LatticeError::NonCyclicQuotient(
                many.iter().map(|&k| dec.d.get(k, k).to_string()).collect(),
            )),
        }
    }
}

/// `{x : phi(x) ≡ 0 mod 1}` together with its index in `l`.
pub fn kernel_sublattice(l: &Lattice, phi: &RationalFunctional) -> Result<(Embedding, BigInt)> {
    let n = l.rank();
    if phi.rank() != n {
        return Err(LatticeError::DimensionMismatch(format!(
            "functional has rank {}, lattice has rank {n}",
            phi.rank()
        )));
    }
    if phi.is_zero() {
        return Ok((Embedding::full(l.clone()), BigInt::one()));
    }
    let order = phi.order().clone();
    // x · a + y · N = 0 with a_i = N · phi_i
    let mut column: Vec<Vec<BigInt>> = phi
        .values()
        .iter()
        .map(|v| vec![(v * rat_from_int(&order)).to_integer()])
        .collect();
    column.push(vec![order]);
    let k = saturated_kernel(&IntMat::from_rows(&column)?);
    let projected: Vec<Vec<BigInt>> = (0..k.rows()).map(|i| k.row(i)[..n].to_vec()).collect();
    let basis = hnf_rows(&IntMat::from_rows_with_cols(&projected, n)?);
    let e = Embedding::new(l.clone(), basis)?;
    let index = e.index().expect("kernel has full rank");
    Ok((e, index))
}

/// The discriminant group of a nondegenerate lattice, with the dual vectors
/// representing its generators.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    form: FiniteQuadraticForm,
    /// rows: dual-lattice vectors (lattice coordinates) lifting the generators
    generators: RatMat,
    /// rows of the SNF left transform that read off generator coefficients
    coefficient_rows: IntMat,
    lattice: Lattice,
}

impl DiscriminantGroup {
    fn of(l: &Lattice) -> Result<Self> {
        if !l.is_nondegenerate() {
            return Err(LatticeError::Degenerate);
        }
        let n = l.rank();
        let dec = snf(l.gram());
        let torsion: Vec<usize> = (0..n).filter(|&k| !dec.d.get(k, k).is_one()).collect();
        let mut orders = Vec::with_capacity(torsion.len());
        let mut gens: Vec<Vec<BigRational>> = Vec::with_capacity(torsion.len());
        for &k in &torsion {
            let dk = dec.d.get(k, k);
            let d = dk.to_u64().ok_or_else(|| {
                LatticeError::Form(FormError::Capacity {
                    size: dk.to_string(),
                    bound: u64::MAX,
                })
            })?;
            orders.push(d);
            gens.push(
                (0..n)
                    .map(|i| BigRational::new(dec.v.get(i, k).clone(), dk.clone()))
                    .collect(),
            );
        }
        let m = gens.len();
        let mut b = vec![vec![BigRational::zero(); m]; m];
        let mut q = vec![BigRational::zero(); m];
        for i in 0..m {
            for j in 0..m {
                b[i][j] = l.pairing_rat(&gens[i], &gens[j]);
            }
            q[i] = b[i][i].clone();
        }
        let form = FiniteQuadraticForm::new(orders, b, q, l.is_even())?;
        let generators = if m == 0 {
            RatMat::zeros(0, n)
        } else {
            RatMat::from_rows(&gens)?
        };
        Ok(DiscriminantGroup {
            form,
            generators,
            coefficient_rows: dec.u.select_rows(&torsion),
            lattice: l.clone(),
        })
    }

    pub fn form(&self) -> &FiniteQuadraticForm {
        &self.form
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn generator_lift(&self, i: usize) -> &[BigRational] {
        self.generators.row(i)
    }

    /// A dual vector (lattice coordinates) representing `x`.
    pub fn lift(&self, x: &TorsionElement) -> Vec<BigRational> {
        let n = self.lattice.rank();
        let mut out = vec![BigRational::zero(); n];
        for (i, &c) in x.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = BigRational::from_integer(int(c as i64));
            for (o, g) in out.iter_mut().zip(self.generators.row(i)) {
                *o += &c * g;
            }
        }
        out
    }

    /// Class of a dual vector; fails if the vector is not in the dual lattice.
    pub fn class_of(&self, dual: &[BigRational]) -> Result<TorsionElement> {
        let n = self.lattice.rank();
        if dual.len() != n {
            return Err(LatticeError::DimensionMismatch("dual vector length".into()));
        }
        let g = self.lattice.gram().to_rat();
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let v: BigRational = (0..n).map(|j| g.get(i, j) * &dual[j]).sum();
            if !v.is_integer() {
                return Err(LatticeError::NonIntegral("vector is not in the dual lattice".into()));
            }
            y.push(v.to_integer());
        }
        let c = self.coefficient_rows.mul_vec(&y)?;
        let orders = self.form.orders();
        let coeffs: Vec<i64> = c
            .iter()
            .zip(orders)
            .map(|(v, &d)| v.mod_floor(&int(d as i64)).to_i64().expect("reduced"))
            .collect();
        Ok(self.form.element(&coeffs)?)
    }
}

/// One even overlattice `l ⊂ L'` of a given index.
#[derive(Clone, Debug)]
pub struct Overlattice {
    /// the overlattice as an abstract lattice
    pub lattice: Lattice,
    /// rows: overlattice basis in `l ⊗ Q` coordinates
    pub basis: RatMat,
    /// `l` inside the overlattice
    pub inclusion: Embedding,
    /// invariant factors of `L' / l` greater than one
    pub quotient: Vec<BigInt>,
    /// the isotropic subgroup of the discriminant group it comes from
    pub subgroup: Subgroup,
}

impl Overlattice {
    /// Coordinates of this overlattice's basis in the basis of `other`, when
    /// both are overlattices of the same lattice and this one is contained in
    /// `other`.
    pub fn inside(&self, other: &Overlattice) -> Result<Embedding> {
        let inv = other
            .basis
            .inverse()?
            .ok_or(LatticeError::DependentRows)?;
        let coords = (&self.basis * &inv)
            .to_int()
            .ok_or_else(|| LatticeError::NonIntegral("overlattice is not contained".into()))?;
        Embedding::new(other.lattice.clone(), coords)
    }
}

/// Common denominator clearing every overlattice of `l` (its dual is in
/// `|det|⁻¹ · l`).
fn overlattice_scale(l: &Lattice) -> BigInt {
    l.determinant().abs()
}

/// Integer HNF of the overlattice basis scaled into `l`.
fn overlattice_key(l: &Lattice, basis: &RatMat) -> IntMat {
    let scale = rat_from_int(&overlattice_scale(l));
    hnf_rows(&basis.scale(&scale).to_int().expect("scaled into l"))
}

/// Builds the overlattice `l + span(lifts)`.
pub fn overlattice_from_lifts(l: &Lattice, lifts: &[Vec<BigRational>]) -> Result<(RatMat, Lattice)> {
    let n = l.rank();
    let scale = overlattice_scale(l);
    let scale_r = rat_from_int(&scale);
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { scale.clone() } else { BigInt::zero() }).collect())
        .collect();
    for lift in lifts {
        let scaled: Option<Vec<BigInt>> = lift
            .iter()
            .map(|v| {
                let s = v * &scale_r;
                s.is_integer().then(|| s.to_integer())
            })
            .collect();
        rows.push(scaled.ok_or_else(|| LatticeError::NonIntegral("lift outside the dual".into()))?);
    }
    let h = hnf_rows(&IntMat::from_rows_with_cols(&rows, n)?);
    let basis = h.to_rat().scale(&(BigRational::one() / scale_r));
    let gram = (&(&basis * &l.gram().to_rat()) * &basis.transpose())
        .to_int()
        .ok_or_else(|| LatticeError::NonIntegral("overlattice pairing".into()))?;
    Ok((basis, Lattice::new(gram)?))
}

/// All even overlattices of `l` containing it with index `n`, one per
/// isotropic subgroup of order `n`, sorted by the Hermite normal form of their
/// basis.
pub fn overlattices_of_index(l: &Lattice, n: u64) -> Result<Vec<Overlattice>> {
    let disc = l.discriminant_group()?;
    let order = disc.form().group_order();
    let n_big = int(n as i64);
    if n == 0 || !order.is_multiple_of(&(&n_big * &n_big)) {
        return Ok(vec![]);
    }
    let subgroups = forms::isotropic_subgroups(disc.form(), n)?;
    let mut out = Vec::with_capacity(subgroups.len());
    for sub in subgroups {
        let lifts: Vec<Vec<BigRational>> = sub.generators.iter().map(|g| disc.lift(g)).collect();
        let (basis, lattice) = overlattice_from_lifts(l, &lifts)?;
        let inv = basis.inverse()?.ok_or(LatticeError::DependentRows)?;
        let incl = inv
            .to_int()
            .ok_or_else(|| LatticeError::NonIntegral("inclusion of l".into()))?;
        let quotient = snf(&incl).torsion();
        let inclusion = Embedding::new(lattice.clone(), incl)?;
        out.push(Overlattice {
            lattice,
            basis,
            inclusion,
            quotient,
            subgroup: sub,
        });
    }
    out.sort_by(|a, b| cmp_mats(&overlattice_key(l, &a.basis), &overlattice_key(l, &b.basis)));
    Ok(out)
}

fn cmp_mats(a: &IntMat, b: &IntMat) -> Ordering {
    (a.rows(), a.cols())
        .cmp(&(b.rows(), b.cols()))
        .then_with(|| a.entries().cmp(b.entries()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn lat(rows: &[&[i64]]) -> Lattice {
        Lattice::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn u() -> Lattice {
        lat(&[&[0, 1], &[1, 0]])
    }

    fn g_star() -> Lattice {
        lat(&[&[2, 1, 1, -2], &[1, 2, 0, 0], &[1, 0, -2, 0], &[-2, 0, 0, 0]])
    }

    fn mat(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rejects_asymmetric_gram() {
        assert_eq!(
            Lattice::new(mat(&[&[1, 2], &[0, 1]])),
            Err(LatticeError::NotSymmetric)
        );
    }

    #[test]
    fn signatures() {
        let s = u().signature();
        assert_eq!((s.positive, s.negative, s.zero), (1, 1, 0));
        let s = g_star().signature();
        assert_eq!((s.positive, s.negative, s.zero), (2, 2, 0));
        let s = lat(&[&[0, 0], &[0, 0]]).signature();
        assert_eq!((s.positive, s.negative, s.zero), (0, 0, 2));
        let s = lat(&[&[0, 0, 0], &[0, 2, 1], &[0, 1, 0]]).signature();
        assert_eq!((s.positive, s.negative, s.zero), (1, 1, 1));
    }

    #[test]
    fn discriminant_of_unimodular_is_trivial() {
        let d = u().discriminant_group().unwrap();
        assert!(d.form().is_trivial());
    }

    #[test]
    fn discriminant_of_diag_2_minus_2() {
        let d = lat(&[&[2, 0], &[0, -2]]).discriminant_group().unwrap();
        assert_eq!(d.form().orders(), &[2, 2]);
        let mut qs: Vec<_> = (0..2).map(|i| d.form().q_gen(i).clone()).collect();
        qs.sort();
        assert_eq!(qs, vec![rat(1, 2), rat(3, 2)]);
        assert_eq!(d.form().b_gen(0, 1), &rat(0, 1));
    }

    #[test]
    fn discriminant_of_g_star_realizes_the_z4z4_form() {
        let d = g_star().discriminant_group().unwrap();
        let f = d.form();
        assert_eq!(f.orders(), &[4, 4]);
        let els = f.elements(100).unwrap();
        let mut found = false;
        for x in &els {
            for y in &els {
                if f.q(x).unwrap() == rat(1, 2)
                    && f.q(y).unwrap() == rat(1, 2)
                    && f.b(x, y).unwrap() == rat(3, 4)
                    && x.order() == 4
                    && y.order() == 4
                    && forms::element_sum(&x.scale(2), &y.scale(2)).unwrap() != f.zero()
                    && x.scale(2) != y.scale(2)
                {
                    found = true;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn class_of_inverts_lift() {
        let d = g_star().discriminant_group().unwrap();
        for x in d.form().elements(100).unwrap() {
            assert_eq!(d.class_of(&d.lift(&x)).unwrap(), x);
        }
    }

    #[test]
    fn degenerate_lattice_has_no_discriminant_group() {
        assert!(matches!(
            lat(&[&[0]]).discriminant_group(),
            Err(LatticeError::Degenerate)
        ));
    }

    #[test]
    fn complement_in_u_plus_u() {
        let uu = u().direct_sum(&u());
        let first = Embedding::new(uu.clone(), mat(&[&[1, 0, 0, 0], &[0, 1, 0, 0]])).unwrap();
        let comp = orthogonal_complement(&first).unwrap();
        let second = Embedding::new(uu, mat(&[&[0, 0, 1, 0], &[0, 0, 0, 1]])).unwrap();
        assert!(comp.same_span(&second));
    }

    #[test]
    fn subspace_intersections() {
        let l = g_star();
        let all = intersect_with_subspace(&l, &RatMat::identity(4)).unwrap();
        assert!(all.same_span(&Embedding::full(l.clone())));
        let span = RatMat::from_rows(&[vec![rat(1, 3), rat(2, 3), rat(0, 1), rat(0, 1)]]).unwrap();
        let line = intersect_with_subspace(&l, &span).unwrap();
        assert_eq!(line.basis(), &mat(&[&[1, 2, 0, 0]]));
    }

    #[test]
    fn kernel_of_half_functional_on_u() {
        let (k, index) =
            kernel_sublattice(&u(), &RationalFunctional::new(vec![rat(1, 2), rat(0, 1)])).unwrap();
        assert_eq!(index, int(2));
        assert_eq!(k.sublattice().gram(), &mat(&[&[0, 2], &[2, 0]]));
        assert_eq!(k.sublattice().determinant(), int(-4));
        let (k, index) = kernel_sublattice(&u(), &RationalFunctional::zero(2)).unwrap();
        assert_eq!(index, int(1));
        assert!(k.same_span(&Embedding::full(u())));
    }

    #[test]
    fn vanishing_functional_recovers_kernel() {
        let l = lat(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
        let phi = RationalFunctional::new(vec![rat(1, 3), rat(2, 3), rat(0, 1)]);
        let (k, index) = kernel_sublattice(&l, &phi).unwrap();
        assert_eq!(index, int(3));
        let psi = RationalFunctional::vanishing_exactly_on(&k).unwrap();
        let (k2, _) = kernel_sublattice(&l, &psi).unwrap();
        assert!(k.same_span(&k2));
        assert_eq!(psi.order(), &int(3));
    }

    #[test]
    fn overlattices_of_unimodular_and_g_star() {
        assert!(overlattices_of_index(&u(), 2).unwrap().is_empty());
        let ov4 = overlattices_of_index(&g_star(), 4).unwrap();
        assert_eq!(ov4.len(), 1);
        assert_eq!(ov4[0].quotient, vec![int(2), int(2)]);
        assert!(ov4[0].lattice.is_unimodular());
        assert!(ov4[0].lattice.is_even());
        let ov2 = overlattices_of_index(&g_star(), 2).unwrap();
        assert_eq!(ov2.len(), 3);
        for o in &ov2 {
            assert_eq!(o.lattice.determinant().abs(), int(4));
            assert_eq!(o.quotient, vec![int(2)]);
            assert!(o.inside(&ov4[0]).is_ok());
        }
    }

    #[test]
    fn intersections() {
        let uu = u().direct_sum(&u());
        let a = Embedding::new(uu.clone(), mat(&[&[1, 0, 0, 0], &[0, 1, 0, 0]])).unwrap();
        assert!(sublattice_intersection(&a, &a).unwrap().same_span(&a));
        let b = Embedding::new(uu.clone(), mat(&[&[0, 0, 1, 0], &[0, 0, 0, 1]])).unwrap();
        assert_eq!(sublattice_intersection(&a, &b).unwrap().rank(), 0);
        let even = Embedding::new(uu.clone(), mat(&[&[2, 0, 0, 0], &[0, 1, 0, 0]])).unwrap();
        let odd = Embedding::new(uu.clone(), mat(&[&[3, 0, 0, 0], &[0, 1, 0, 0]])).unwrap();
        let meet = sublattice_intersection(&even, &odd).unwrap();
        assert_eq!(meet.basis(), &mat(&[&[6, 0, 0, 0], &[0, 1, 0, 0]]));
        let other = Embedding::full(u());
        assert_eq!(
            sublattice_intersection(&a, &other),
            Err(LatticeError::AmbientMismatch)
        );
    }

    #[test]
    fn rescale_examples() {
        let l = g_star();
        assert_eq!(l.rescale(&rat(1, 1)).unwrap(), l);
        assert_eq!(lat(&[&[0, 2], &[2, 0]]).rescale(&rat(1, 2)).unwrap(), u());
        assert!(matches!(l.rescale(&rat(1, 2)), Err(LatticeError::NonIntegral(_))));
        assert_eq!(l.rescale(&rat(-1, 1)).unwrap().determinant(), l.determinant());
    }

    #[test]
    fn isometry_examples() {
        let uu = u().direct_sum(&u());
        assert!(is_isometry(&IntMat::identity(4), &uu, &uu).unwrap());
        let swap = mat(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        assert!(is_isometry(&swap, &uu, &uu).unwrap());
        let bad = mat(&[&[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(!is_isometry(&bad, &uu, &uu).unwrap());
        assert!(is_isometry(&IntMat::identity(2), &uu, &uu).is_err());
    }

    #[test]
    fn fiber_like_degenerate_sublattice() {
        let l = lat(&[&[2, 0], &[0, -2]]);
        let f = Embedding::new(l, mat(&[&[1, -1]])).unwrap();
        assert_eq!(f.sublattice().gram(), &mat(&[&[0]]));
        assert!(f.is_primitive());
        assert!(!f.sublattice().is_nondegenerate());
    }
}
