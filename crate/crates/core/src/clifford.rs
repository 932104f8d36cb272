//! Complexified Clifford algebra Cl(0,m) for 2 ≤ m ≤ 8.
//!
//! Basis blades are bitmasks over the generators `e_1 … e_m` (bit `j-1` set
//! means `e_j` is present, factors in ascending order). Every generator
//! squares to `-1`. Complex scalars live in the coefficient field and commute
//! with all blades; the imaginary unit is never a blade.
//!
//! Geometric products use a per-dimension sign table that is built once and
//! shared read-only afterwards.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub const MIN_DIM: usize = 1;
pub const MAX_DIM: usize = 8;

/// Basis blade `e_{i1} e_{i2} … e_{ij}` with `i1 < i2 < … < ij`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BladeIndex(u16);

impl BladeIndex {
    pub const SCALAR: BladeIndex = BladeIndex(0);

    pub fn from_mask(mask: u16) -> Self {
        BladeIndex(mask)
    }

    /// Blade from 1-based generator indices. Indices must be strictly
    /// ascending; anything else is rejected so the blade stays canonical.
    pub fn from_generators(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u16;
        let mut last = 0usize;
        for &j in indices {
            if j == 0 || j > MAX_DIM || j <= last {
                return Err(Error::OutOfRange(format!(
                    "generator indices must be ascending in 1..={MAX_DIM}, got {indices:?}"
                )));
            }
            mask |= 1 << (j - 1);
            last = j;
        }
        Ok(BladeIndex(mask))
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// Generators present in the blade, ascending, 1-based.
    pub fn generators(self) -> impl Iterator<Item = usize> {
        (0..16).filter(move |b| self.0 & (1 << b) != 0).map(|b| b + 1)
    }

    /// Text label: `1` for the scalar blade, otherwise `e` followed by the
    /// generator digits, e.g. `e12`.
    pub fn label(self) -> String {
        if self.0 == 0 {
            return "1".to_string();
        }
        let mut s = String::from("e");
        for g in self.generators() {
            s.push_str(&g.to_string());
        }
        s
    }

    pub fn parse_label(label: &str) -> Result<Self> {
        let label = label.trim();
        if label == "1" {
            return Ok(BladeIndex::SCALAR);
        }
        let digits = label.strip_prefix('e').ok_or_else(|| Error::Parse {
            input: label.to_string(),
            reason: "blade label must be `1` or `e<digits>`".into(),
        })?;
        let idx: Vec<usize> = digits
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse {
                input: label.to_string(),
                reason: "non-digit in blade label".into(),
            })?;
        BladeIndex::from_generators(&idx)
    }
}

/// Sign of `e_a e_b` (as bitmasks) in Cl(0,m): reordering transpositions
/// plus one factor of -1 per shared generator.
fn blade_product_sign(a: u16, b: u16) -> i8 {
    let mut swaps = 0u32;
    let mut shifted = a >> 1;
    while shifted != 0 {
        swaps += (shifted & b).count_ones();
        shifted >>= 1;
    }
    swaps += (a & b).count_ones();
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

struct SignTable {
    size: usize,
    signs: Vec<i8>,
}

fn sign_table(dim: usize) -> &'static SignTable {
    static TABLES: [OnceLock<SignTable>; MAX_DIM + 1] = [const { OnceLock::new() }; MAX_DIM + 1];
    TABLES[dim].get_or_init(|| {
        let size = 1usize << dim;
        let mut signs = vec![0i8; size * size];
        for a in 0..size {
            for b in 0..size {
                signs[a * size + b] = blade_product_sign(a as u16, b as u16);
            }
        }
        SignTable { size, signs }
    })
}

fn check_dim(dim: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim, "1 ≤ m ≤ 8"))
    }
}

type Coeffs = SmallVec<[Complex64; 16]>;

/// Element of the complexified Clifford algebra, stored densely with one
/// complex coefficient per basis blade.
#[derive(Clone, PartialEq)]
pub struct Multivector {
    dim: usize,
    coeffs: Coeffs,
}

impl Multivector {
    pub fn zero(dim: usize) -> Self {
        assert!(check_dim(dim).is_ok(), "unsupported dimension {dim}");
        Multivector {
            dim,
            coeffs: SmallVec::from_elem(Complex64::new(0.0, 0.0), 1 << dim),
        }
    }

    pub fn try_zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::zero(dim))
    }

    pub fn scalar(dim: usize, value: Complex64) -> Self {
        let mut mv = Self::zero(dim);
        mv.coeffs[0] = value;
        mv
    }

    pub fn real_scalar(dim: usize, value: f64) -> Self {
        Self::scalar(dim, Complex64::new(value, 0.0))
    }

    pub fn one(dim: usize) -> Self {
        Self::real_scalar(dim, 1.0)
    }

    pub fn blade(dim: usize, blade: BladeIndex, value: Complex64) -> Self {
        let mut mv = Self::zero(dim);
        mv.set(blade, value);
        mv
    }

    /// Generator `e_j`, 1-based.
    pub fn generator(dim: usize, j: usize) -> Self {
        assert!(j >= 1 && j <= dim, "generator e_{j} outside Cl(0,{dim})");
        Self::blade(dim, BladeIndex(1 << (j - 1)), Complex64::new(1.0, 0.0))
    }

    /// `e_1 e_2`, the unit bivector of the 2D plane.
    pub fn e12(dim: usize) -> Self {
        Self::blade(dim, BladeIndex(0b11), Complex64::new(1.0, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, blade: BladeIndex) -> Complex64 {
        self.coeffs
            .get(blade.0 as usize)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn set(&mut self, blade: BladeIndex, value: Complex64) {
        assert!((blade.0 as usize) < self.coeffs.len(), "blade outside algebra");
        self.coeffs[blade.0 as usize] = value;
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Blades paired with their coefficients, in bitmask order.
    pub fn terms(&self) -> impl Iterator<Item = (BladeIndex, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (BladeIndex(i as u16), *c))
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn grade_part(&self, grade: u32) -> Multivector {
        let mut out = Self::zero(self.dim);
        for (i, c) in self.coeffs.iter().enumerate() {
            if (i as u16).count_ones() == grade {
                out.coeffs[i] = *c;
            }
        }
        out
    }

    /// Largest grade with a coefficient above `tol` in modulus, or `None`
    /// when the multivector is numerically zero.
    pub fn max_grade(&self, tol: f64) -> Option<u32> {
        self.terms()
            .filter(|(_, c)| c.norm() > tol)
            .map(|(b, _)| b.grade())
            .max()
    }

    pub fn is_scalar(&self, tol: f64) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.norm() <= tol)
    }

    pub fn scale(&self, factor: Complex64) -> Multivector {
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Multivector {
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// In-place `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Multivector, factor: Complex64) {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add_scaled");
        for (a, b) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *a += b * factor;
        }
    }

    /// Coefficient 2-norm. Defined on all multivectors, unlike the Clifford
    /// norm `x x̄`, which is only scalar on vectors.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Multivector) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in distance");
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Clifford conjugation: `e_{j1}…e_{jl} ↦ (-1)^l e_{jl}…e_{j1}`, extended
    /// linearly; the imaginary unit is left fixed.
    pub fn conjugate(&self) -> Multivector {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let l = (i as u16).count_ones();
            // reversal gives (-1)^{l(l-1)/2}, conjugation another (-1)^l
            let exponent = l * (l + 1) / 2;
            if exponent % 2 == 1 {
                *c = -*c;
            }
        }
        out
    }

    pub fn geometric_product(&self, other: &Multivector) -> Result<Multivector> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let table = sign_table(self.dim);
        let n = table.size;
        let mut out = Self::zero(self.dim);
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.re == 0.0 && ca.im == 0.0 {
                continue;
            }
            let row = &table.signs[a * n..(a + 1) * n];
            for (b, cb) in other.coeffs.iter().enumerate() {
                if cb.re == 0.0 && cb.im == 0.0 {
                    continue;
                }
                let prod = ca * cb;
                if row[b] > 0 {
                    out.coeffs[a ^ b] += prod;
                } else {
                    out.coeffs[a ^ b] -= prod;
                }
            }
        }
        Ok(out)
    }

    /// Clifford norm `x x̄` for grade-1 inputs; errors on anything else.
    pub fn vector_norm(&self) -> Result<f64> {
        if let Some(g) = self.max_grade(0.0) {
            if g != 1 || self.coeffs[0].norm() != 0.0 {
                return Err(Error::OutOfRange(
                    "vector_norm expects a grade-1 multivector".into(),
                ));
            }
        }
        let sq = self.geometric_product(&self.conjugate())?;
        Ok(sq.scalar_part().re.sqrt())
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector[m={}]({})", self.dim, self)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (blade, c) in self.terms() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            if blade != BladeIndex::SCALAR {
                write!(f, "{}", blade.label())?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in addition");
        Multivector {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .zip(rhs.coeffs.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        &self + &rhs
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in addition");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl AddAssign<Multivector> for Multivector {
    fn add_assign(&mut self, rhs: Multivector) {
        *self += &rhs;
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in subtraction");
        Multivector {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .zip(rhs.coeffs.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        &self - &rhs
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale_real(-1.0)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale_real(-1.0)
    }
}

/// Geometric product. Panics on dimension mismatch; use
/// [`Multivector::geometric_product`] for a fallible version.
impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs)
            .expect("dimension mismatch in geometric product")
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        &self * &rhs
    }
}

impl Mul<Complex64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Complex64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<Complex64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Complex64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale_real(rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale_real(rhs)
    }
}

/// `cos(angle) + B sin(angle)` for a bivector-like `B` with `B² = -1`.
pub fn exp_unit_bivector(b: &Multivector, angle: f64) -> Result<Multivector> {
    let sq = b.geometric_product(b)?;
    let residual = sq.distance(&Multivector::real_scalar(b.dim(), -1.0));
    if residual > 1e-10 {
        return Err(Error::NotUnitBivector(residual));
    }
    let mut out = b.scale_real(angle.sin());
    out.coeffs[0] += Complex64::new(angle.cos(), 0.0);
    Ok(out)
}

/// Point of R^m identified with the vector variable `Σ e_j x_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorM {
    coords: Vec<f64>,
}

impl VectorM {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_dim(coords.len())?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::OutOfRange("vector coordinates must be finite".into()));
        }
        Ok(VectorM { coords })
    }

    pub fn zeros(dim: usize) -> Self {
        VectorM {
            coords: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scaled(&self, t: f64) -> VectorM {
        VectorM {
            coords: self.coords.iter().map(|c| c * t).collect(),
        }
    }

    pub fn negated(&self) -> VectorM {
        self.scaled(-1.0)
    }

    pub fn to_multivector(&self) -> Multivector {
        let mut mv = Multivector::zero(self.dim());
        for (j, &c) in self.coords.iter().enumerate() {
            mv.coeffs[1 << j] = Complex64::new(c, 0.0);
        }
        mv
    }

    fn same_dim(&self, other: &VectorM) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }
}

/// Euclidean inner product `(x, y) = Σ x_j y_j`.
pub fn inner(x: &VectorM, y: &VectorM) -> Result<f64> {
    x.same_dim(y)?;
    Ok(x.coords.iter().zip(&y.coords).map(|(a, b)| a * b).sum())
}

/// Inner product through the algebra, `-(xy + yx)/2`.
pub fn inner_via_product(x: &VectorM, y: &VectorM) -> Result<Complex64> {
    x.same_dim(y)?;
    let (xm, ym) = (x.to_multivector(), y.to_multivector());
    let sym = &(&xm * &ym) + &(&ym * &xm);
    Ok(-sym.scalar_part() * 0.5)
}

/// `x ∧ y = Σ_{j<k} e_j e_k (x_j y_k - x_k y_j)`.
pub fn wedge(x: &VectorM, y: &VectorM) -> Result<Multivector> {
    x.same_dim(y)?;
    let m = x.dim();
    let mut out = Multivector::zero(m);
    for j in 0..m {
        for k in (j + 1)..m {
            let c = x.coords[j] * y.coords[k] - x.coords[k] * y.coords[j];
            out.coeffs[(1 << j) | (1 << k)] = Complex64::new(c, 0.0);
        }
    }
    Ok(out)
}

/// `(x ∧ y)²` computed by blade multiplication. For real vectors this is the
/// scalar `-|x|²|y|² + (x,y)²`.
pub fn wedge_square_check(x: &VectorM, y: &VectorM) -> Result<Complex64> {
    let w = wedge(x, y)?;
    let sq = &w * &w;
    if !sq.is_scalar(1e-9 * (1.0 + sq.norm())) {
        return Err(Error::OutOfRange("(x∧y)² has non-scalar part".into()));
    }
    Ok(sq.scalar_part())
}
