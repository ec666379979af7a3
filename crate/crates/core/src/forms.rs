//! Finite abelian groups carrying a bilinear form `b: A × A → Q/Z` and a
//! quadratic refinement `q: A → Q/2Z`.
//!
//! Groups are presented as `⊕ Z/d_i` on fixed generators. All enumeration is
//! exhaustive and capped by an explicit element bound; these routines are
//! meant for discriminant groups of a few thousand elements at most.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{int, rat_mod};

pub const DEFAULT_ENUMERATION_BOUND: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("group of order {size} exceeds the enumeration bound {bound}")]
    Capacity { size: String, bound: u64 },
    #[error("elements belong to different groups: {left:?} vs {right:?}")]
    ParentMismatch { left: Vec<u64>, right: Vec<u64> },
    #[error("invalid form: {0}")]
    Invalid(String),
    #[error("quadratic form is not defined (odd parent lattice)")]
    QuadraticUndefined,
}

pub type Result<T> = std::result::Result<T, FormError>;

fn modulo(v: &BigRational, m: i64) -> BigRational {
    rat_mod(v, &int(m))
}

/// An element of `⊕ Z/d_i` with coefficients in `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsionElement {
    orders: Vec<u64>,
    coeffs: Vec<u64>,
}

impl TorsionElement {
    pub fn new(orders: &[u64], coeffs: &[i64]) -> Result<Self> {
        if orders.len() != coeffs.len() {
            return Err(FormError::Invalid(format!(
                "{} coefficients for {} generators",
                coeffs.len(),
                orders.len()
            )));
        }
        let coeffs = orders
            .iter()
            .zip(coeffs)
            .map(|(&d, &c)| c.rem_euclid(d as i64) as u64)
            .collect();
        Ok(TorsionElement {
            orders: orders.to_vec(),
            coeffs,
        })
    }

    pub fn zero(orders: &[u64]) -> Self {
        TorsionElement {
            orders: orders.to_vec(),
            coeffs: vec![0; orders.len()],
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> TorsionElement {
        let coeffs = self
            .orders
            .iter()
            .zip(&self.coeffs)
            .map(|(&d, &c)| ((c as i128 * k as i128).rem_euclid(d as i128)) as u64)
            .collect();
        TorsionElement {
            orders: self.orders.clone(),
            coeffs,
        }
    }

    /// Additive order of the element.
    pub fn order(&self) -> u64 {
        self.orders
            .iter()
            .zip(&self.coeffs)
            .map(|(&d, &c)| d / gcd(d, c))
            .fold(1, lcm)
    }
}

/// Componentwise sum modulo the generator orders.
pub fn element_sum(x: &TorsionElement, y: &TorsionElement) -> Result<TorsionElement> {
    if x.orders != y.orders {
        return Err(FormError::ParentMismatch {
            left: x.orders.clone(),
            right: y.orders.clone(),
        });
    }
    let coeffs = x
        .orders
        .iter()
        .zip(x.coeffs.iter().zip(&y.coeffs))
        .map(|(&d, (&a, &b))| (a + b) % d)
        .collect();
    Ok(TorsionElement {
        orders: x.orders.clone(),
        coeffs,
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A finite quadratic form on `⊕ Z/d_i`.
///
/// `b` values are kept in `[0, 1)` and `q` values in `[0, 2)`. When the
/// parent lattice is odd, `q` is still stored but is only meaningful modulo
/// 1; `quadratic_defined` records which case applies.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteQuadraticForm {
    orders: Vec<u64>,
    b: Vec<Vec<BigRational>>,
    q: Vec<BigRational>,
    quadratic_defined: bool,
}

impl FiniteQuadraticForm {
    pub fn new(
        orders: Vec<u64>,
        b: Vec<Vec<BigRational>>,
        q: Vec<BigRational>,
        quadratic_defined: bool,
    ) -> Result<Self> {
        let n = orders.len();
        if b.len() != n || b.iter().any(|r| r.len() != n) || q.len() != n {
            return Err(FormError::Invalid("shape mismatch".into()));
        }
        if orders.iter().any(|&d| d < 2) {
            return Err(FormError::Invalid("generator orders must be at least 2".into()));
        }
        let b: Vec<Vec<BigRational>> = b
            .iter()
            .map(|r| r.iter().map(|v| modulo(v, 1)).collect())
            .collect();
        let q: Vec<BigRational> = q.iter().map(|v| modulo(v, 2)).collect();
        for i in 0..n {
            for j in 0..n {
                if b[i][j] != b[j][i] {
                    return Err(FormError::Invalid(format!("b not symmetric at ({i}, {j})")));
                }
                let scaled = &b[i][j] * BigRational::from_integer(int(orders[i] as i64));
                if !scaled.is_integer() {
                    return Err(FormError::Invalid(format!(
                        "d_{i} * b({i}, {j}) is not integral"
                    )));
                }
            }
            if modulo(&q[i], 1) != b[i][i] {
                return Err(FormError::Invalid(format!("q({i}) does not refine b({i}, {i})")));
            }
            if quadratic_defined {
                let d = BigRational::from_integer(int(orders[i] as i64));
                if !modulo(&(&q[i] * &d * &d), 2).is_zero() {
                    return Err(FormError::Invalid(format!("d_{i}^2 * q({i}) is not even")));
                }
            }
        }
        Ok(FiniteQuadraticForm {
            orders,
            b,
            q,
            quadratic_defined,
        })
    }

    pub fn trivial() -> Self {
        FiniteQuadraticForm {
            orders: vec![],
            b: vec![],
            q: vec![],
            quadratic_defined: true,
        }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn generator_count(&self) -> usize {
        self.orders.len()
    }

    pub fn b_gen(&self, i: usize, j: usize) -> &BigRational {
        &self.b[i][j]
    }

    pub fn q_gen(&self, i: usize) -> &BigRational {
        &self.q[i]
    }

    pub fn quadratic_defined(&self) -> bool {
        self.quadratic_defined
    }

    /// Group order as an arbitrary-precision integer.
    pub fn group_order(&self) -> BigInt {
        self.orders.iter().map(|&d| int(d as i64)).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn element(&self, coeffs: &[i64]) -> Result<TorsionElement> {
        TorsionElement::new(&self.orders, coeffs)
    }

    pub fn zero(&self) -> TorsionElement {
        TorsionElement::zero(&self.orders)
    }

    pub fn generator(&self, i: usize) -> TorsionElement {
        let mut coeffs = vec![0; self.orders.len()];
        coeffs[i] = 1;
        TorsionElement {
            orders: self.orders.clone(),
            coeffs,
        }
    }

    fn check_parent(&self, x: &TorsionElement) -> Result<()> {
        if x.orders != self.orders {
            return Err(FormError::ParentMismatch {
                left: self.orders.clone(),
                right: x.orders.clone(),
            });
        }
        Ok(())
    }

    /// `q(x)` in `[0, 2)`.
    pub fn q(&self, x: &TorsionElement) -> Result<BigRational> {
        self.check_parent(x)?;
        let n = self.orders.len();
        let mut acc = BigRational::zero();
        for i in 0..n {
            let xi = x.coeffs[i];
            if xi == 0 {
                continue;
            }
            let xi = BigRational::from_integer(int(xi as i64));
            acc += &xi * &xi * &self.q[i];
            for j in i + 1..n {
                if x.coeffs[j] != 0 {
                    let xj = BigRational::from_integer(int(x.coeffs[j] as i64));
                    acc += BigRational::from_integer(int(2)) * &xi * xj * &self.b[i][j];
                }
            }
        }
        Ok(modulo(&acc, 2))
    }

    /// `b(x, y)` in `[0, 1)`.
    pub fn b(&self, x: &TorsionElement, y: &TorsionElement) -> Result<BigRational> {
        self.check_parent(x)?;
        self.check_parent(y)?;
        let mut acc = BigRational::zero();
        for (i, &xi) in x.coeffs.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.coeffs.iter().enumerate() {
                if yj != 0 {
                    acc += BigRational::from_integer(int((xi * yj) as i64)) * &self.b[i][j];
                }
            }
        }
        Ok(modulo(&acc, 1))
    }

    /// `(q(x) mod 2, b(x, y) mod 1)`.
    pub fn qb_eval(
        &self,
        x: &TorsionElement,
        y: &TorsionElement,
    ) -> Result<(BigRational, BigRational)> {
        Ok((self.q(x)?, self.b(x, y)?))
    }

    /// `q ↦ −q`, `b ↦ −b`.
    pub fn negate(&self) -> FiniteQuadraticForm {
        FiniteQuadraticForm {
            orders: self.orders.clone(),
            b: self
                .b
                .iter()
                .map(|r| r.iter().map(|v| modulo(&-v, 1)).collect())
                .collect(),
            q: self.q.iter().map(|v| modulo(&-v, 2)).collect(),
            quadratic_defined: self.quadratic_defined,
        }
    }

    fn checked_size(&self, bound: u64) -> Result<u64> {
        let size = self.group_order();
        match size.to_u64() {
            Some(s) if s <= bound => Ok(s),
            _ => Err(FormError::Capacity {
                size: size.to_string(),
                bound,
            }),
        }
    }

    /// All elements in mixed-radix order (last coordinate fastest).
    pub fn elements(&self, bound: u64) -> Result<Vec<TorsionElement>> {
        let size = self.checked_size(bound)?;
        Ok((0..size).map(|i| self.element_at(i)).collect())
    }

    fn element_at(&self, mut index: u64) -> TorsionElement {
        let mut coeffs = vec![0; self.orders.len()];
        for (c, &d) in coeffs.iter_mut().zip(&self.orders).rev() {
            *c = index % d;
            index /= d;
        }
        TorsionElement {
            orders: self.orders.clone(),
            coeffs,
        }
    }

    fn index_of(&self, x: &TorsionElement) -> u64 {
        x.coeffs
            .iter()
            .zip(&self.orders)
            .fold(0, |acc, (&c, &d)| acc * d + c)
    }
}

/// A subgroup, listed by its elements (sorted) and a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<TorsionElement>,
    pub generators: Vec<TorsionElement>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &TorsionElement) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

fn closure(form: &FiniteQuadraticForm, base: &BTreeSet<u64>, x: &TorsionElement) -> BTreeSet<u64> {
    let mut out = base.clone();
    let ord = x.order();
    for &h in base {
        let he = form.element_at(h);
        let mut cur = he;
        for _ in 1..ord {
            cur = element_sum(&cur, x).expect("same parent");
            out.insert(form.index_of(&cur));
        }
    }
    out
}

fn greedy_generators(form: &FiniteQuadraticForm, members: &BTreeSet<u64>) -> Vec<TorsionElement> {
    let mut span: BTreeSet<u64> = BTreeSet::from([0]);
    let mut gens = Vec::new();
    for &m in members {
        if !span.contains(&m) {
            let x = form.element_at(m);
            span = closure(form, &span, &x);
            gens.push(x);
        }
    }
    gens
}

/// All subgroups of exact order `order` on which `q` vanishes identically.
pub fn isotropic_subgroups(form: &FiniteQuadraticForm, order: u64) -> Result<Vec<Subgroup>> {
    isotropic_subgroups_bounded(form, order, DEFAULT_ENUMERATION_BOUND)
}

pub fn isotropic_subgroups_bounded(
    form: &FiniteQuadraticForm,
    order: u64,
    bound: u64,
) -> Result<Vec<Subgroup>> {
    if !form.quadratic_defined {
        return Err(FormError::QuadraticUndefined);
    }
    let size = form.checked_size(bound)?;
    if order == 0 || size % order != 0 {
        return Ok(vec![]);
    }
    let candidates: Vec<TorsionElement> = (0..size)
        .map(|i| form.element_at(i))
        .filter(|x| !x.is_zero() && order.is_multiple_of(x.order()))
        .filter(|x| form.q(x).map(|v| v.is_zero()).unwrap_or(false))
        .collect();

    let trivial: BTreeSet<u64> = BTreeSet::from([0]);
    let mut seen: HashSet<BTreeSet<u64>> = HashSet::from([trivial.clone()]);
    let mut frontier = vec![(trivial, Vec::<TorsionElement>::new())];
    let mut found: Vec<BTreeSet<u64>> = Vec::new();
    while let Some((members, gens)) = frontier.pop() {
        if members.len() as u64 == order {
            found.push(members);
            continue;
        }
        for x in &candidates {
            if members.contains(&form.index_of(x)) {
                continue;
            }
            // q vanishes on <H, x> iff q(x) = 0 and b(x, g) = 0 for generators g of H
            let orthogonal = gens
                .iter()
                .all(|g| form.b(x, g).map(|v| v.is_zero()).unwrap_or(false));
            if !orthogonal {
                continue;
            }
            let grown = closure(form, &members, x);
            if !order.is_multiple_of(grown.len() as u64) || !seen.insert(grown.clone()) {
                continue;
            }
            let mut next_gens = gens.clone();
            next_gens.push(x.clone());
            frontier.push((grown, next_gens));
        }
    }
    found.sort();
    Ok(found
        .into_iter()
        .map(|members| Subgroup {
            generators: greedy_generators(form, &members),
            elements: members.iter().map(|&i| form.element_at(i)).collect(),
        })
        .collect())
}

/// A group isomorphism given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormIsomorphism {
    pub images: Vec<TorsionElement>,
}

impl FormIsomorphism {
    pub fn apply(&self, x: &TorsionElement) -> Result<TorsionElement> {
        if x.coeffs.len() != self.images.len() {
            return Err(FormError::Invalid("element does not match source group".into()));
        }
        let Some(first) = self.images.first() else {
            return Ok(x.clone());
        };
        let mut acc = TorsionElement::zero(&first.orders);
        for (img, &c) in self.images.iter().zip(&x.coeffs) {
            acc = element_sum(&acc, &img.scale(c as i64))?;
        }
        Ok(acc)
    }
}

/// Searches for an isomorphism `f1 → f2` preserving `q` (or `b` alone when
/// `q` is undefined on either side).
pub fn form_isomorphism(
    f1: &FiniteQuadraticForm,
    f2: &FiniteQuadraticForm,
) -> Result<Option<FormIsomorphism>> {
    form_isomorphism_bounded(f1, f2, DEFAULT_ENUMERATION_BOUND)
}

pub fn form_isomorphism_bounded(
    f1: &FiniteQuadraticForm,
    f2: &FiniteQuadraticForm,
    bound: u64,
) -> Result<Option<FormIsomorphism>> {
    let size1 = f1.checked_size(bound)?;
    let size2 = f2.checked_size(bound)?;
    if size1 != size2 || f1.orders != f2.orders {
        return Ok(None);
    }
    if f1.is_trivial() {
        return Ok(Some(FormIsomorphism { images: vec![] }));
    }
    let use_q = f1.quadratic_defined && f2.quadratic_defined;
    let targets = f2.elements(bound)?;
    let n = f1.orders.len();
    let mut candidates: Vec<Vec<TorsionElement>> = Vec::with_capacity(n);
    for i in 0..n {
        let g = f1.generator(i);
        let d = f1.orders[i];
        let want_q = f1.q(&g)?;
        let want_b = f1.b(&g, &g)?;
        let mut list = Vec::new();
        for y in &targets {
            if !d.is_multiple_of(y.order()) {
                continue;
            }
            let ok = if use_q {
                f2.q(y)? == want_q
            } else {
                f2.b(y, y)? == want_b
            };
            if ok {
                list.push(y.clone());
            }
        }
        if list.is_empty() {
            return Ok(None);
        }
        candidates.push(list);
    }
    let mut chosen: Vec<TorsionElement> = Vec::with_capacity(n);
    if search(f1, f2, &candidates, &mut chosen, size2)? {
        return Ok(Some(FormIsomorphism { images: chosen }));
    }
    Ok(None)
}

fn search(
    f1: &FiniteQuadraticForm,
    f2: &FiniteQuadraticForm,
    candidates: &[Vec<TorsionElement>],
    chosen: &mut Vec<TorsionElement>,
    size: u64,
) -> Result<bool> {
    let i = chosen.len();
    if i == candidates.len() {
        let mut span: BTreeSet<u64> = BTreeSet::from([0]);
        for y in chosen.iter() {
            span = closure(f2, &span, y);
        }
        return Ok(span.len() as u64 == size);
    }
    let gi = f1.generator(i);
    for y in &candidates[i] {
        let mut consistent = true;
        for (j, yj) in chosen.iter().enumerate() {
            if f2.b(y, yj)? != f1.b(&gi, &f1.generator(j))? {
                consistent = false;
                break;
            }
        }
        if !consistent {
            continue;
        }
        chosen.push(y.clone());
        if search(f1, f2, candidates, chosen, size)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// Checks `iso` element by element: well defined on the generators,
/// bijective, `q`-preserving (or `b`-preserving when `q` is undefined) on
/// every element, and `b`-preserving on every (element, generator) pair,
/// which covers all pairs since both sides are bilinear.
pub fn verify_isomorphism_exhaustively(
    f1: &FiniteQuadraticForm,
    f2: &FiniteQuadraticForm,
    iso: &FormIsomorphism,
    bound: u64,
) -> Result<bool> {
    if iso.images.len() != f1.orders.len() {
        return Ok(false);
    }
    for (img, &d) in iso.images.iter().zip(&f1.orders) {
        f2.check_parent(img)?;
        if d % img.order() != 0 {
            return Ok(false);
        }
    }
    let source = f1.elements(bound)?;
    let images = source
        .iter()
        .map(|x| iso.apply(x))
        .collect::<Result<Vec<_>>>()?;
    let use_q = f1.quadratic_defined && f2.quadratic_defined;
    for (x, y) in source.iter().zip(&images) {
        if use_q && f1.q(x)? != f2.q(y)? {
            return Ok(false);
        }
        if !use_q && f1.b(x, x)? != f2.b(y, y)? {
            return Ok(false);
        }
    }
    let image_set: HashSet<&TorsionElement> = images.iter().collect();
    if image_set.len() != source.len() || source.len() as u64 != f2.checked_size(bound)? {
        return Ok(false);
    }
    for (x, y) in source.iter().zip(&images) {
        for (j, img) in iso.images.iter().enumerate() {
            if f1.b(x, &f1.generator(j))? != f2.b(y, img)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    /// (Z/4)^2 with q = (1/2, 1/2) and b(x, y) = 3/4.
    fn z4z4() -> FiniteQuadraticForm {
        FiniteQuadraticForm::new(
            vec![4, 4],
            vec![vec![rat(1, 2), rat(3, 4)], vec![rat(3, 4), rat(1, 2)]],
            vec![rat(1, 2), rat(1, 2)],
            true,
        )
        .unwrap()
    }

    fn z2(q: BigRational) -> FiniteQuadraticForm {
        let b = rat_mod(&q, &int(1));
        FiniteQuadraticForm::new(vec![2], vec![vec![b]], vec![q], true).unwrap()
    }

    #[test]
    fn qb_eval_examples() {
        let f = z4z4();
        let zero = f.zero();
        assert_eq!(f.qb_eval(&zero, &zero).unwrap(), (rat(0, 1), rat(0, 1)));
        let x = f.element(&[1, 0]).unwrap();
        let y = f.element(&[0, 1]).unwrap();
        assert_eq!(f.q(&x).unwrap(), rat(1, 2));
        assert_eq!(f.b(&x, &y).unwrap(), rat(3, 4));
    }

    #[test]
    fn quadratic_refines_bilinear_on_every_pair() {
        let f = z4z4();
        let els = f.elements(DEFAULT_ENUMERATION_BOUND).unwrap();
        for x in &els {
            for y in &els {
                let s = element_sum(x, y).unwrap();
                let lhs = f.q(&s).unwrap() - f.q(x).unwrap() - f.q(y).unwrap();
                let rhs = rat(2, 1) * f.b(x, y).unwrap();
                assert!(rat_mod(&(lhs - rhs), &int(2)).is_zero());
            }
        }
    }

    #[test]
    fn isotropic_subgroups_of_z4z4() {
        let f = z4z4();
        let four = isotropic_subgroups(&f, 4).unwrap();
        assert_eq!(four.len(), 1);
        let expected: Vec<TorsionElement> = [[0, 0], [0, 2], [2, 0], [2, 2]]
            .iter()
            .map(|c| f.element(c).unwrap())
            .collect();
        assert_eq!(four[0].elements, expected);
        assert_eq!(isotropic_subgroups(&f, 2).unwrap().len(), 3);
        assert_eq!(isotropic_subgroups(&f, 8).unwrap().len(), 0);
        assert_eq!(isotropic_subgroups(&f, 3).unwrap().len(), 0);
    }

    #[test]
    fn trivial_group_has_only_trivial_subgroup() {
        let t = FiniteQuadraticForm::trivial();
        let subs = isotropic_subgroups(&t, 1).unwrap();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].elements, vec![t.zero()]);
    }

    #[test]
    fn order_two_elements_sum_to_the_third() {
        let f = z4z4();
        let subs = isotropic_subgroups(&f, 2).unwrap();
        let gens: Vec<_> = subs.iter().map(|s| s.generators[0].clone()).collect();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let k = 3 - i - j;
                    assert_eq!(element_sum(&gens[i], &gens[j]).unwrap(), gens[k]);
                }
            }
        }
        let a = f.element(&[2, 0]).unwrap();
        let b = f.element(&[0, 2]).unwrap();
        assert_eq!(element_sum(&a, &b).unwrap(), f.element(&[2, 2]).unwrap());
        assert_eq!(element_sum(&a, &f.zero()).unwrap(), a);
    }

    #[test]
    fn element_sum_rejects_other_parent() {
        let a = TorsionElement::new(&[4, 4], &[1, 1]).unwrap();
        let b = TorsionElement::new(&[2], &[1]).unwrap();
        assert!(matches!(element_sum(&a, &b), Err(FormError::ParentMismatch { .. })));
    }

    #[test]
    fn negate_examples() {
        let t = FiniteQuadraticForm::trivial();
        assert_eq!(t.negate(), t);
        let f = z4z4();
        assert_eq!(f.negate().negate(), f);
        assert_eq!(f.negate().q_gen(0), &rat(3, 2));
        assert_eq!(f.negate().q_gen(1), &rat(3, 2));
    }

    #[test]
    fn isomorphism_search() {
        let f = z4z4();
        let iso = form_isomorphism(&f, &f).unwrap().unwrap();
        assert!(verify_isomorphism_exhaustively(&f, &f, &iso, 100).unwrap());
        assert!(form_isomorphism(&z2(rat(1, 2)), &z2(rat(3, 2))).unwrap().is_none());
        let neg = f.negate();
        if let Some(iso) = form_isomorphism(&f, &neg).unwrap() {
            assert!(verify_isomorphism_exhaustively(&f, &neg, &iso, 100).unwrap());
        }
        let twice = f.negate().negate();
        let iso = form_isomorphism(&f, &twice).unwrap().unwrap();
        assert!(verify_isomorphism_exhaustively(&f, &twice, &iso, 100).unwrap());
    }

    #[test]
    fn capacity_is_enforced() {
        let f = FiniteQuadraticForm::new(
            vec![128, 128],
            vec![vec![rat(1, 128), rat(0, 1)], vec![rat(0, 1), rat(1, 128)]],
            vec![rat(1, 128), rat(1, 128)],
            false,
        )
        .unwrap();
        assert!(matches!(
            form_isomorphism_bounded(&f, &f, 1000),
            Err(FormError::Capacity { .. })
        ));
        assert!(matches!(
            isotropic_subgroups(&f, 2),
            Err(FormError::QuadraticUndefined)
        ));
    }

    #[test]
    fn invalid_forms_are_rejected() {
        assert!(FiniteQuadraticForm::new(vec![2], vec![vec![rat(1, 4)]], vec![rat(1, 4)], true).is_err());
        assert!(FiniteQuadraticForm::new(vec![2], vec![vec![rat(1, 2)]], vec![rat(0, 1)], true).is_err());
        assert!(FiniteQuadraticForm::new(vec![1], vec![vec![rat(0, 1)]], vec![rat(0, 1)], true).is_err());
    }
}
