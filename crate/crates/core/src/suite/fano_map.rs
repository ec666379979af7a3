//! Images of Fano-variety classes in twisted algebraic lattices, the induced
//! map between two such lattices, and the solver for `w`.
//!
//! Vectors here are coordinates in the named basis `(g, h, s, e4)` of the
//! rank-4 twisted algebraic lattice, `g = 2e0 + 2B`, whose Gram is
//! [`twisted_gram`]. Two quantities have competing readings:
//!
//! * `h′`: literal `(B·h)h − 4e0 − 4B = −2g + (B·h)h`, or rescaled
//!   `−2g + (2B·h)h`;
//! * `k_s`: `B·s` or `2B·s`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::catalog::{
    h_vector, twisted_algebraic_lattice, twisted_algebraic_lattice_single, twisted_gram,
    BFieldParams, CatalogError, ConcreteBField, MukaiVector,
};
use crate::lattice::{Embedding, LatticeError};
use crate::linalg::{rat, rat_from_int, saturated_kernel, snf, solve_integral, IntMat, RatMat};

pub type AlgVector = Vec<BigRational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HPrimeReading {
    Literal,
    Rescaled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KsReading {
    /// `k_s = B·s`
    Plain,
    /// `k_s = 2B·s`
    Doubled,
}

impl HPrimeReading {
    pub const ALL: [HPrimeReading; 2] = [HPrimeReading::Literal, HPrimeReading::Rescaled];

    pub fn as_str(self) -> &'static str {
        match self {
            HPrimeReading::Literal => "h'=(B.h)h-4e0-4B",
            HPrimeReading::Rescaled => "h'=(2B.h)h-4e0-4B",
        }
    }
}

impl KsReading {
    pub const ALL: [KsReading; 2] = [KsReading::Plain, KsReading::Doubled];

    pub fn as_str(self) -> &'static str {
        match self {
            KsReading::Plain => "k_s=B.s",
            KsReading::Doubled => "k_s=2B.s",
        }
    }
}

impl fmt::Display for HPrimeReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for KsReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn two() -> BigRational {
    rat(2, 1)
}

fn gram_of(params: &BFieldParams) -> RatMat {
    // twisted_gram is integral for admissible triples; fall back to the
    // rational entries otherwise
    match twisted_gram(params) {
        Some(g) => g.to_rat(),
        None => {
            let four = rat(4, 1);
            let rows = vec![
                vec![&params.bsq * &four, &params.bh * two(), &params.bs * two(), rat(-2, 1)],
                vec![&params.bh * two(), rat(2, 1), rat(0, 1), rat(0, 1)],
                vec![&params.bs * two(), rat(0, 1), rat(-2, 1), rat(0, 1)],
                vec![rat(-2, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
            ];
            RatMat::from_rows(&rows).expect("4x4")
        }
    }
}

/// Pairing in the named basis.
pub fn alg_pairing(params: &BFieldParams, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let g = gram_of(params);
    let mut acc = BigRational::zero();
    for i in 0..4 {
        for j in 0..4 {
            acc += &x[i] * g.get(i, j) * &y[j];
        }
    }
    acc
}

pub fn basis_vector(i: usize) -> AlgVector {
    let mut v = vec![BigRational::zero(); 4];
    v[i] = BigRational::one();
    v
}

pub fn g_vec() -> AlgVector {
    basis_vector(0)
}

pub fn h_vec() -> AlgVector {
    basis_vector(1)
}

pub fn s_vec() -> AlgVector {
    basis_vector(2)
}

pub fn e4_vec() -> AlgVector {
    basis_vector(3)
}

fn lin(terms: &[(BigRational, &AlgVector)]) -> AlgVector {
    let mut out = vec![BigRational::zero(); 4];
    for (c, v) in terms {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += c * x;
        }
    }
    out
}

pub fn is_integral(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn h_prime(params: &BFieldParams, reading: HPrimeReading) -> AlgVector {
    let coeff = match reading {
        HPrimeReading::Literal => params.bh.clone(),
        HPrimeReading::Rescaled => &params.bh * two(),
    };
    lin(&[(rat(-2, 1), &g_vec()), (coeff, &h_vec())])
}

/// `(6 − h′²)/8`.
pub fn k4(params: &BFieldParams, reading: HPrimeReading) -> BigRational {
    let hp = h_prime(params, reading);
    (rat(6, 1) - alg_pairing(params, &hp, &hp)) / rat(8, 1)
}

pub fn k_s(params: &BFieldParams, reading: KsReading) -> BigRational {
    match reading {
        KsReading::Plain => params.bs.clone(),
        KsReading::Doubled => &params.bs * two(),
    }
}

/// The triple with `B²` chosen so that `k4 = 0` under the rescaled `h′`:
/// `B² = ((2B·h)² + 3)/8`.
pub fn k4_normalized(params: &BFieldParams) -> Result<BFieldParams, CatalogError> {
    let p = &params.bh * two();
    params.with_bsq((&p * &p + rat(3, 1)) / rat(8, 1))
}

/// Images of `g, [F_1], [F_2], [F_3]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoImages {
    pub g: AlgVector,
    pub f1: AlgVector,
    pub f2: AlgVector,
    pub f3: AlgVector,
}

pub fn fano_images(params: &BFieldParams, hr: HPrimeReading, kr: KsReading) -> FanoImages {
    let hp = h_prime(params, hr);
    let k4 = k4(params, hr);
    let ks = k_s(params, kr);
    let one = BigRational::one();
    FanoImages {
        g: lin(&[(one.clone(), &hp), (k4.clone(), &e4_vec())]),
        f1: lin(&[(one.clone(), &hp), (&k4 - &one, &e4_vec())]),
        f2: lin(&[(-one.clone(), &s_vec()), ((&one - &ks) / two(), &e4_vec())]),
        f3: lin(&[(one.clone(), &s_vec()), ((&one + &ks) / two(), &e4_vec())]),
    }
}

/// The map `⟨g1, h, s, e4⟩ → ⟨g2, h, s, e4⟩`, column `j` holding the image of
/// the `j`-th source basis vector. `h′` and `k4` are those of the target
/// side, `k_s` that of the source side.
pub fn composed_map(
    source: &BFieldParams,
    target: &BFieldParams,
    hr: HPrimeReading,
    kr: KsReading,
) -> RatMat {
    let hp = h_prime(target, hr);
    let k4 = k4(target, hr);
    let ks = k_s(source, kr);
    let one = BigRational::one();
    let e4 = e4_vec();
    // h' + (k4 − 1)e4
    let f1 = lin(&[(one.clone(), &hp), (&k4 - &one, &e4)]);
    let g_img = lin(&[
        (one.clone(), &g_vec()),
        (-(&k4 / two()), &e4),
        (&k4 / two(), &f1),
    ]);
    let s_img = lin(&[
        ((&one - &ks) / two(), &s_vec()),
        ((&one - &ks) / two() * (&one + &ks) / two(), &e4),
        (-((&one + &ks) / two()), &f1),
    ]);
    let e4_img = lin(&[
        (one.clone(), &hp),
        (one.clone(), &s_vec()),
        ((&k4 * two() + &ks - &one) / two(), &e4),
    ]);
    let cols = [g_img, h_vec(), s_img, e4_img];
    let rows: Vec<Vec<BigRational>> = (0..4)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    RatMat::from_rows(&rows).expect("4x4")
}

/// Whether `map` pulls the target Gram back to the source Gram, and whether
/// it is integral.
pub fn composed_outcome(
    source: &BFieldParams,
    target: &BFieldParams,
    hr: HPrimeReading,
    kr: KsReading,
) -> (bool, bool) {
    let m = composed_map(source, target, hr, kr);
    let pulled = &(&m.transpose() * &gram_of(target)) * &m;
    (pulled == gram_of(source), m.is_integral())
}

/// `4e0 + 4B − (B·h)h − s − ((2k4 + k_s − 1)/2)e4`, i.e. `−(h′ + s + …)`.
pub fn moduli_vector(params: &BFieldParams, hr: HPrimeReading, kr: KsReading) -> AlgVector {
    let hp = h_prime(params, hr);
    let k4 = k4(params, hr);
    let ks = k_s(params, kr);
    let one = BigRational::one();
    lin(&[
        (-one.clone(), &hp),
        (-one.clone(), &s_vec()),
        (-((&k4 * two() + &ks - &one) / two()), &e4_vec()),
    ])
}

/// Constraints `w² = square`, `w·e4 = e4_pairing`, `w·h = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constraints {
    pub square: i64,
    pub e4_pairing: i64,
}

/// Solutions of [`Constraints`] inside a twisted algebraic lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    /// solutions as Mukai vectors
    pub solutions: Vec<MukaiVector>,
    /// the same solutions in the lattice's named basis
    pub coordinates: Vec<Vec<BigInt>>,
    /// `w + k·e4` is a solution for every solution `w` and every integer `k`;
    /// representatives are then reported with no e4 shift, and a zero
    /// representative is replaced by `e4`
    pub free_e4_shift: bool,
    /// false when the solution set is infinite and only a window was listed
    pub exhaustive: bool,
}

/// Coefficient window used when the solution set is infinite.
pub const DEFAULT_WINDOW: i64 = 6;

fn mukai_of(e: &Embedding, coords: &[BigInt]) -> MukaiVector {
    let v = e.basis().vec_mul(coords).expect("coordinate length");
    MukaiVector::from_int_coords(&v)
}

/// Solver on the rank-3 lattice `⟨2e0 + 2B, h, e4⟩`, where the solution set
/// is finite (up to the e4 shift when `e4_pairing = 0`).
pub fn solve_w(b: &ConcreteBField, c: Constraints) -> Result<SolveOutcome, CatalogError> {
    let alg = twisted_algebraic_lattice_single(b)?;
    solve_in(&alg, c, DEFAULT_WINDOW)
}

/// Solver on the rank-4 lattice `⟨2e0 + 2B, h, s, e4⟩`.
pub fn solve_w_two_planes(
    b: &ConcreteBField,
    c: Constraints,
    window: i64,
) -> Result<SolveOutcome, CatalogError> {
    let alg = twisted_algebraic_lattice(b)?;
    solve_in(&alg, c, window)
}

/// Integer roots of `a t² + b t + c = 0`, or `None` if every `t` is a root.
fn integer_roots(a: &BigInt, b: &BigInt, c: &BigInt) -> Option<Vec<BigInt>> {
    if a.is_zero() {
        if b.is_zero() {
            return if c.is_zero() { None } else { Some(vec![]) };
        }
        return Some(if c.is_multiple_of(b) { vec![-(c / b)] } else { vec![] });
    }
    let disc = b * b - a * c * BigInt::from(4);
    if disc.is_negative() {
        return Some(vec![]);
    }
    let root = disc.sqrt();
    if &root * &root != disc {
        return Some(vec![]);
    }
    let mut out = Vec::new();
    for num in [-b + &root, -b - &root] {
        let den = a * BigInt::from(2);
        if num.is_multiple_of(&den) {
            let t = num / &den;
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    out.sort();
    Some(out)
}

/// Solves `w·h = 0`, `w·e4 = e`, `w² = n` in the lattice spanned by `alg`
/// (rows in Mukai coordinates, last row `e4`).
pub fn solve_in(alg: &Embedding, c: Constraints, window: i64) -> Result<SolveOutcome, CatalogError> {
    let lat = alg.sublattice();
    let n = lat.rank();
    let mukai = alg.ambient();
    let h = MukaiVector::from_k3(&h_vector()).int_coords().expect("integral");
    let e4 = MukaiVector::e4().int_coords().expect("integral");
    // x·A = (0, e) with A columns the pairings of the basis with h and e4
    let gh = mukai.gram().mul_vec(&h).expect("rank 24");
    let ge4 = mukai.gram().mul_vec(&e4).expect("rank 24");
    let col_h = alg.basis().mul_vec(&gh).expect("rank 24");
    let col_e4 = alg.basis().mul_vec(&ge4).expect("rank 24");
    let a_rows: Vec<Vec<BigInt>> = (0..n).map(|i| vec![col_h[i].clone(), col_e4[i].clone()]).collect();
    let a = IntMat::from_rows_with_cols(&a_rows, 2).map_err(LatticeError::from)?;
    let rhs = [BigInt::zero(), BigInt::from(c.e4_pairing)];
    let x0 = match solve_integral(&a.transpose(), &rhs).map_err(LatticeError::from)? {
        Some(x) => x,
        None => {
            return Ok(SolveOutcome {
                solutions: vec![],
                coordinates: vec![],
                free_e4_shift: false,
                exhaustive: true,
            })
        }
    };
    let kernel = saturated_kernel(&a);
    let e4_coords = alg
        .coordinates_of(&e4)
        .map_err(CatalogError::from)?
        .ok_or_else(|| CatalogError::Inconsistent("e4 is not in the lattice".into()))?;
    let in_kernel = solve_integral(&kernel.transpose(), &e4_coords)
        .map_err(LatticeError::from)?
        .ok_or_else(|| CatalogError::Inconsistent("e4 is not orthogonal to h and e4".into()))?;
    // complete the primitive vector `in_kernel` to a basis: its SNF column
    // transform v has in_kernel·v = ±(1, 0, …), so v⁻¹ has it as first row
    let row = IntMat::from_rows(std::slice::from_ref(&in_kernel)).map_err(LatticeError::from)?;
    let dec = snf(&row);
    let vinv = dec
        .v
        .to_rat()
        .inverse()
        .map_err(LatticeError::from)?
        .and_then(|m| m.to_int())
        .ok_or_else(|| CatalogError::Inconsistent("unimodular inverse".into()))?;
    let k = kernel.rows();
    let others: Vec<Vec<BigInt>> = (1..k)
        .map(|i| kernel.vec_mul(vinv.row(i)).expect("kernel rank"))
        .collect();

    let pair = |x: &[BigInt], y: &[BigInt]| lat.pairing(x, y);
    let add = |x: &[BigInt], y: &[BigInt], t: &BigInt| -> Vec<BigInt> {
        x.iter().zip(y).map(|(a, b)| a + b * t).collect()
    };
    let e = BigInt::from(c.e4_pairing);
    let target = BigInt::from(c.square);

    let mut coords: Vec<Vec<BigInt>> = Vec::new();
    let mut exhaustive = true;
    let free_e4_shift = e.is_zero();
    // y = x0 + Σ t_i k_i, w = y + u·e4, w² = y² + 2u·e
    let finish = |y: Vec<BigInt>, coords: &mut Vec<Vec<BigInt>>| {
        let rest = &target - pair(&y, &y);
        if e.is_zero() {
            if rest.is_zero() {
                let rep = if y.iter().all(|v| v.is_zero()) { e4_coords.clone() } else { y };
                coords.push(rep);
            }
        } else {
            let two_e = &e * 2;
            if rest.is_multiple_of(&two_e) {
                let u = &rest / &two_e;
                coords.push(add(&y, &e4_coords, &u));
            }
        }
    };
    match others.len() {
        0 => finish(x0.clone(), &mut coords),
        1 if e.is_zero() => {
            // y(t)² = A t² + 2 B t + C
            let kv = &others[0];
            let qa = pair(kv, kv);
            let qb = pair(&x0, kv) * 2;
            let qc = pair(&x0, &x0) - &target;
            match integer_roots(&qa, &qb, &qc) {
                Some(ts) => {
                    for t in ts {
                        finish(add(&x0, kv, &t), &mut coords);
                    }
                }
                None => {
                    exhaustive = false;
                    for t in -window..=window {
                        finish(add(&x0, kv, &BigInt::from(t)), &mut coords);
                    }
                }
            }
        }
        dims => {
            exhaustive = false;
            let mut ts = vec![-window; dims];
            loop {
                let mut y = x0.clone();
                for (kv, t) in others.iter().zip(&ts) {
                    y = add(&y, kv, &BigInt::from(*t));
                }
                finish(y, &mut coords);
                let mut i = 0;
                while i < dims {
                    ts[i] += 1;
                    if ts[i] <= window {
                        break;
                    }
                    ts[i] = -window;
                    i += 1;
                }
                if i == dims {
                    break;
                }
            }
        }
    }
    coords.sort();
    coords.dedup();
    Ok(SolveOutcome {
        solutions: coords.iter().map(|x| mukai_of(alg, x)).collect(),
        coordinates: coords,
        free_e4_shift,
        exhaustive,
    })
}

/// `h′` and `k4` checks for one reading on the rank-3 lattice: integrality,
/// `h′·h = 0`, and that the solver returns exactly `h′ + k4·e4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReading {
    pub reading: HPrimeReading,
    pub h_prime_integral: bool,
    pub h_prime_orthogonal: bool,
    pub k4: BigRational,
    pub k4_integral: bool,
    pub unique_solution_matches: bool,
    pub family_matches: bool,
}

impl SolveReading {
    pub fn holds(&self) -> bool {
        self.h_prime_integral
            && self.h_prime_orthogonal
            && self.k4_integral
            && self.unique_solution_matches
            && self.family_matches
    }
}

fn single_coords(v: &AlgVector) -> Option<Vec<BigInt>> {
    // (g, h, s, e4) → (g, h, e4) when the s-coefficient vanishes
    if !v[2].is_zero() || !is_integral(v) {
        return None;
    }
    Some([0, 1, 3].iter().map(|&i| v[i].to_integer()).collect())
}

/// Evaluates one `h′` reading against the solver output for `b`.
pub fn solve_reading(
    b: &ConcreteBField,
    reading: HPrimeReading,
) -> Result<SolveReading, CatalogError> {
    let params = b.params();
    let hp = h_prime(&params, reading);
    let k4 = k4(&params, reading);
    let expected = lin(&[(BigRational::one(), &hp), (k4.clone(), &e4_vec())]);
    let single = solve_w(b, Constraints { square: 6, e4_pairing: 4 })?;
    let unique_solution_matches = match single_coords(&expected) {
        Some(x) => single.exhaustive && single.coordinates == vec![x],
        None => false,
    };
    let family = solve_w_two_planes(
        b,
        Constraints { square: 6, e4_pairing: 4 },
        DEFAULT_WINDOW,
    )?;
    let q = &params.bs * two();
    let family_matches = is_integral(&expected)
        && family.coordinates.iter().any(|x| x.iter().map(rat_from_int).eq(expected.iter().cloned()))
        && family.coordinates.iter().all(|x| {
            // w = h′ + c·s + d·e4 with c even, d = k4 + c(c + 2q)/4
            let w: Vec<BigRational> = x.iter().map(rat_from_int).collect();
            let c = &w[2];
            let d = &k4 + c * (c + &q * two()) / rat(4, 1);
            c.is_integer()
                && c.to_integer().is_even()
                && w[0] == hp[0]
                && w[1] == hp[1]
                && w[3] == d
        });
    Ok(SolveReading {
        reading,
        h_prime_integral: is_integral(&hp),
        h_prime_orthogonal: alg_pairing(&params, &hp, &h_vec()).is_zero(),
        k4_integral: k4.is_integer(),
        k4,
        unique_solution_matches,
        family_matches,
    })
}

/// Small helper for witnesses: the integer value of a rational, if any.
pub fn as_i64(v: &BigRational) -> Option<i64> {
    v.is_integer().then(|| v.to_integer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::realize_bfield;

    fn default_b() -> ConcreteBField {
        realize_bfield(&BFieldParams::default_params()).unwrap()
    }

    #[test]
    fn rescaled_h_prime_default() {
        let p = BFieldParams::default_params();
        let hp = h_prime(&p, HPrimeReading::Rescaled);
        assert_eq!(hp, vec![rat(-2, 1), rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(alg_pairing(&p, &hp, &hp), rat(6, 1));
        assert_eq!(k4(&p, HPrimeReading::Rescaled), rat(0, 1));
        assert!(!is_integral(&h_prime(&p, HPrimeReading::Literal)));
    }

    #[test]
    fn solver_examples() {
        let b = default_b();
        let s = solve_w(&b, Constraints { square: 6, e4_pairing: 4 }).unwrap();
        assert!(s.exhaustive);
        assert_eq!(s.coordinates, vec![vec![BigInt::from(-2), BigInt::from(1), BigInt::from(0)]]);
        let none = solve_w_two_planes(&b, Constraints { square: 6, e4_pairing: 0 }, 6).unwrap();
        assert!(none.solutions.is_empty());
        assert!(none.exhaustive);
        let line = solve_w_two_planes(&b, Constraints { square: 0, e4_pairing: 0 }, 6).unwrap();
        assert!(line.free_e4_shift);
        assert_eq!(line.solutions, vec![MukaiVector::e4()]);
    }

    #[test]
    fn solve_readings_default() {
        let b = default_b();
        assert!(solve_reading(&b, HPrimeReading::Rescaled).unwrap().holds());
        assert!(!solve_reading(&b, HPrimeReading::Literal).unwrap().holds());
    }

    #[test]
    fn fano_identities_default() {
        let p = BFieldParams::default_params();
        let f = fano_images(&p, HPrimeReading::Rescaled, KsReading::Doubled);
        let gf = lin(&[(rat(1, 1), &f.g), (rat(-1, 1), &f.f1)]);
        assert_eq!(gf, e4_vec());
        assert_eq!(lin(&[(rat(1, 1), &f.f2), (rat(1, 1), &f.f3)]), e4_vec());
        assert_eq!(alg_pairing(&p, &f.g, &f.g), rat(6, 1));
        assert_eq!(alg_pairing(&p, &f.g, &gf), rat(4, 1));
        assert_eq!(alg_pairing(&p, &f.g, &f.f2), rat(2, 1));
        assert!(is_integral(&f.f2));
        let plain = fano_images(&p, HPrimeReading::Rescaled, KsReading::Plain);
        assert!(!is_integral(&plain.f2));
    }

    #[test]
    fn composed_map_default_shared() {
        let p = BFieldParams::default_params();
        assert_eq!(
            composed_outcome(&p, &p, HPrimeReading::Rescaled, KsReading::Doubled),
            (true, true)
        );
        let mv = moduli_vector(&p, HPrimeReading::Rescaled, KsReading::Doubled);
        assert!(is_integral(&mv));
        assert_eq!(alg_pairing(&p, &mv, &mv), rat(0, 1));
    }

    #[test]
    fn normalization_gives_k4_zero() {
        let p = BFieldParams::from_numerators(-7, 5, 3).unwrap();
        let n = k4_normalized(&p).unwrap();
        assert_eq!(k4(&n, HPrimeReading::Rescaled), rat(0, 1));
    }

    #[test]
    fn integer_roots_cases() {
        let i = BigInt::from;
        assert_eq!(integer_roots(&i(1), &i(0), &i(-4)), Some(vec![i(-2), i(2)]));
        assert_eq!(integer_roots(&i(-2), &i(0), &i(-6)), Some(vec![]));
        assert_eq!(integer_roots(&i(0), &i(0), &i(0)), None);
        assert_eq!(integer_roots(&i(0), &i(2), &i(-4)), Some(vec![i(2)]));
    }
}
