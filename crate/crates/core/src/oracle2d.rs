//! Two-dimensional ground truth through Jacobi–Anger.
//!
//! In the plane `Γ_y = −e₁₂ ∂_θ`, so `exp(∓e₁₂ k θ_y)` are exact
//! eigenfunctions with eigenvalues `∓k`. Expanding
//! `e^{−i(x,y)} = e^{−iz cos u}` (with `z = |x||y|`, `u = θ_y − θ_x`) as
//!
//! ```text
//! J₀(z) + Σ_{k≥1} (−i)^k J_k(z) [exp(−e₁₂ku) + exp(e₁₂ku)]
//! ```
//!
//! and attaching `i^{G(λ)}` to each eigen-component gives the kernel
//! without going through the Laplace domain at all.

use num_complex::Complex64;

use crate::clifford::{BladeIndex, Multivector, VectorM};
use crate::error::{Error, Result};
use crate::intpoly::{phase, IntPoly, Phase};
use crate::specfun::{bessel_j_all, MAX_BESSEL_ORDER};

/// Largest `|x||y|` accepted by the oracle.
pub const MAX_Z: f64 = 100.0;

const RUN: usize = 8;

/// One order `k ≥ 1` of the expansion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenTerm {
    pub k: usize,
    pub bessel: f64,
    /// `i^{G(−k)}`, on `exp(−e₁₂ku)`.
    pub minus: Phase,
    /// `i^{G(k)}`, on `exp(+e₁₂ku)`.
    pub plus: Phase,
}

#[derive(Clone, Debug)]
pub struct EigenDecomposition2D {
    pub z: f64,
    pub u: f64,
    pub k_max: usize,
    pub j0: f64,
    pub zero_phase: Phase,
    pub terms: Vec<EigenTerm>,
}

fn angle(v: &VectorM) -> f64 {
    let c = v.coords();
    if c[0] == 0.0 && c[1] == 0.0 {
        0.0
    } else {
        c[1].atan2(c[0])
    }
}

fn check_planar(x: &VectorM, y: &VectorM) -> Result<()> {
    for v in [x, y] {
        if v.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: v.dim() });
        }
    }
    Ok(())
}

/// `(−i)^k`.
fn minus_i_pow(k: usize) -> Complex64 {
    Phase::MINUS_I.pow((k % 4) as u32).to_complex()
}

/// `a + b e₁₂` in the planar algebra.
fn even_mv(a: Complex64, b: Complex64) -> Multivector {
    let mut out = Multivector::scalar(2, a);
    out.set(BladeIndex::from_mask(0b11), b);
    out
}

/// Smallest `K` with `|J_K|, …, |J_{K+7}|` all below `threshold`.
pub fn truncation_order(bessel: &[f64], threshold: f64) -> Option<usize> {
    let mut run = 0;
    for (k, j) in bessel.iter().enumerate().skip(1) {
        if j.abs() < threshold {
            run += 1;
            if run == RUN {
                return Some(k + 1 - RUN);
            }
        } else {
            run = 0;
        }
    }
    None
}

/// `J_0(z), …` up to the truncation order, and that order.
fn bessel_sequence(z: f64, tol: f64) -> Result<(Vec<f64>, usize)> {
    if !(z <= MAX_Z) {
        return Err(Error::OutOfRange(format!("|x||y| = {z} exceeds {MAX_Z}")));
    }
    let guess = (z + 12.0 * z.cbrt() + 40.0).ceil() as usize;
    let nmax = guess.min(MAX_BESSEL_ORDER);
    let bessel = bessel_j_all(nmax, z)?;
    let k_max = truncation_order(&bessel, tol / 10.0).ok_or(Error::NonConvergence {
        method: "Jacobi–Anger truncation",
        change: bessel[nmax].abs(),
        tolerance: tol,
    })?;
    Ok((bessel, k_max))
}

/// `i^{G(k)}` indexed by `k mod 4`.
pub fn phase_table(g: &IntPoly) -> [Complex64; 4] {
    [0, 1, 2, 3].map(|k| phase(g, k).to_complex())
}

/// Coefficients `(a, b)` of the planar kernel `a + b e₁₂` for several
/// phase tables at once, sharing one Bessel sequence. `z = |x||y|` and
/// `u = θ_y − θ_x`.
pub fn kernel_coefficients(tables: &[[Complex64; 4]], z: f64, u: f64, tol: f64) -> Result<Vec<(Complex64, Complex64)>> {
    let (bessel, k_max) = bessel_sequence(z, tol)?;
    let mut out: Vec<(Complex64, Complex64)> =
        tables.iter().map(|t| (t[0] * bessel[0], Complex64::new(0.0, 0.0))).collect();
    let (s1, c1) = u.sin_cos();
    let (mut sk, mut ck) = (0.0, 1.0);
    let mut w = Complex64::from(1.0);
    for (k, jk) in bessel.iter().enumerate().take(k_max + 1).skip(1) {
        (sk, ck) = (sk * c1 + ck * s1, ck * c1 - sk * s1);
        w *= Complex64::new(0.0, -1.0);
        let wk = w * jk;
        for (t, (a, b)) in tables.iter().zip(out.iter_mut()) {
            let pm = t[(4 - k % 4) % 4];
            let pp = t[k % 4];
            *a += wk * (pm + pp) * ck;
            *b += wk * (pp - pm) * sk;
        }
    }
    Ok(out)
}

impl EigenDecomposition2D {
    pub fn new(g: &IntPoly, x: &VectorM, y: &VectorM, tol: f64) -> Result<Self> {
        check_planar(x, y)?;
        if !(tol > 0.0) {
            return Err(Error::OutOfRange(format!("tolerance must be positive, got {tol}")));
        }
        let z = x.norm() * y.norm();
        let u = angle(y) - angle(x);
        let (bessel, k_max) = bessel_sequence(z, tol)?;
        let terms = (1..=k_max)
            .map(|k| EigenTerm {
                k,
                bessel: bessel[k],
                minus: phase(g, -(k as i64)),
                plus: phase(g, k as i64),
            })
            .collect();
        Ok(EigenDecomposition2D { z, u, k_max, j0: bessel[0], zero_phase: phase(g, 0), terms })
    }

    pub fn assemble(&self) -> Multivector {
        let mut a = self.zero_phase.to_complex() * self.j0;
        let mut b = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let w = minus_i_pow(t.k) * t.bessel;
            let (sn, cs) = (t.k as f64 * self.u).sin_cos();
            let pm = t.minus.to_complex();
            let pp = t.plus.to_complex();
            a += w * (pm + pp) * cs;
            b += w * (pp - pm) * sn;
        }
        even_mv(a, b)
    }
}

/// `e^{iπ/2·G(Γ_y)} e^{−i(x,y)}` in the plane.
pub fn oracle_kernel(g: &IntPoly, x: &VectorM, y: &VectorM, tol: f64) -> Result<Multivector> {
    Ok(EigenDecomposition2D::new(g, x, y, tol)?.assemble())
}

/// Which eigen-component of order `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `exp(−e₁₂ku)`, eigenvalue `−k`.
    Minus,
    /// `exp(+e₁₂ku)`, eigenvalue `+k`.
    Plus,
}

/// `(−i)^k J_k(|x||y|) exp(∓e₁₂k(θ_y−θ_x))` as a function of `y`.
pub fn component(x: &VectorM, y: &VectorM, k: usize, branch: Branch) -> Result<Multivector> {
    check_planar(x, y)?;
    let z = x.norm() * y.norm();
    let j = crate::specfun::bessel_j(k, z)?;
    let u = angle(y) - angle(x);
    let w = minus_i_pow(k) * j;
    let sign = match branch {
        Branch::Minus => -1.0,
        Branch::Plus => 1.0,
    };
    let (sn, cs) = (k as f64 * u).sin_cos();
    Ok(even_mv(w * cs, w * sign * sn))
}

/// Outcome of applying `Γ_y` numerically to one eigen-component.
#[derive(Clone, Debug)]
pub struct FiniteDifferenceCheck {
    pub expected: f64,
    /// `⟨Γc, c⟩ / ⟨c, c⟩`.
    pub estimated: Complex64,
    /// `|Γc − λc|`.
    pub residual: f64,
}

/// `Γ_y = −e₁₂ (y₁∂₂ − y₂∂₁)` by central differences (`h = 1e−5`) on the
/// minus and plus components of order `k`.
pub fn gamma_finite_difference_check(
    x: &VectorM,
    y: &VectorM,
    k: usize,
) -> Result<[FiniteDifferenceCheck; 2]> {
    check_planar(x, y)?;
    const H: f64 = 1e-5;
    let e12 = Multivector::e12(2);
    let at = |dy: [f64; 2], branch| {
        let c = y.coords();
        component(x, &VectorM::new(vec![c[0] + dy[0], c[1] + dy[1]])?, k, branch)
    };
    let one = |branch: Branch| -> Result<FiniteDifferenceCheck> {
        let c = at([0.0, 0.0], branch)?;
        let d1 = (at([H, 0.0], branch)? - at([-H, 0.0], branch)?).scale_real(0.5 / H);
        let d2 = (at([0.0, H], branch)? - at([0.0, -H], branch)?).scale_real(0.5 / H);
        let (y1, y2) = (y.coords()[0], y.coords()[1]);
        let angular = d2.scale_real(y1) - d1.scale_real(y2);
        let gamma = (&e12 * &angular).scale_real(-1.0);
        let expected = match branch {
            Branch::Minus => -(k as f64),
            Branch::Plus => k as f64,
        };
        let residual = gamma.distance(&c.scale_real(expected));
        let num: Complex64 = gamma.coeffs().iter().zip(c.coeffs()).map(|(a, b)| a * b.conj()).sum();
        let den: f64 = c.coeffs().iter().map(|b| b.norm_sqr()).sum();
        let estimated = if den > 0.0 { num / den } else { Complex64::new(f64::NAN, 0.0) };
        Ok(FiniteDifferenceCheck { expected, estimated, residual })
    };
    Ok([one(Branch::Minus)?, one(Branch::Plus)?])
}
