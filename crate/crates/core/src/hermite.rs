//! The planar transform `T_G f(y) = (2π)^{-1} ∫ K_G(x, y) f(x) dx` applied
//! by tensor Gauss–Legendre quadrature, and the Clifford–Hermite functions
//! it should act on diagonally.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{BladeIndex, Multivector};
use crate::error::{Error, Result};
use crate::intpoly::{phase, IntPoly, Phase};
use crate::oracle2d::{kernel_coefficients, phase_table};
use crate::quadrature::gauss_legendre;
use crate::specfun::laguerre;

/// Planar multivector as `[scalar, e₁, e₂, e₁₂]`.
pub type Planar = [Complex64; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn to_planar(v: &Multivector) -> Planar {
    let c = v.coeffs();
    [c[0], c[1], c[2], c[3]]
}

pub fn from_planar(p: Planar) -> Multivector {
    let mut out = Multivector::zero(2);
    for (mask, c) in p.into_iter().enumerate() {
        out.set(BladeIndex::from_mask(mask as u16), c);
    }
    out
}

/// `(a + b e₁₂) · f`.
fn even_times(a: Complex64, b: Complex64, f: &Planar) -> Planar {
    [a * f[0] - b * f[3], a * f[1] - b * f[2], a * f[2] + b * f[1], a * f[3] + b * f[0]]
}

/// `f · (a + b e₁₂)`.
fn times_even(f: &Planar, a: Complex64, b: Complex64) -> Planar {
    [a * f[0] - b * f[3], a * f[1] + b * f[2], a * f[2] - b * f[1], a * f[3] + b * f[0]]
}

/// Which side the kernel multiplies the input on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[default]
    Left,
    Right,
}

/// Spherical monogenic `M_k^l` in the plane: `M_k^1 = (x₁ − e₁₂x₂)^k`,
/// `M_k^2 = M_k^1 e₁`.
///
/// The second copy is multiplied by `e₁` on the right: `Γ` and `D` act from
/// the left, so a right factor keeps both monogenicity and the eigenvalue.
pub fn monogenic(k: usize, l: u8, x: [f64; 2]) -> Multivector {
    let w = Complex64::new(x[0], x[1]).powu(k as u32);
    let (re, im) = (Complex64::from(w.re), Complex64::from(w.im));
    match l {
        1 => from_planar([re, ZERO, ZERO, -im]),
        _ => from_planar([ZERO, re, -im, ZERO]),
    }
}

/// Index triple of a Clifford–Hermite function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HermiteIndex {
    pub j: usize,
    pub k: usize,
    pub l: u8,
}

impl HermiteIndex {
    pub fn new(j: usize, k: usize, l: u8) -> Result<Self> {
        if !(l == 1 || l == 2) {
            return Err(Error::OutOfRange(format!("monogenic copy index must be 1 or 2, got {l}")));
        }
        Ok(HermiteIndex { j, k, l })
    }

    /// All `(j, k, l)` with `j ≤ j_max`, `k ≤ k_max`.
    pub fn all(j_max: usize, k_max: usize) -> Vec<HermiteIndex> {
        let mut out = Vec::new();
        for j in 0..=j_max {
            for k in 0..=k_max {
                for l in [1, 2] {
                    out.push(HermiteIndex { j, k, l });
                }
            }
        }
        out
    }

    /// `ψ_{2p,k,l} = 2^p p! L_p^{k}(r²) M_k^l e^{−r²/2}` and
    /// `ψ_{2p+1,k,l} = 2^p p! L_p^{k+1}(r²) x M_k^l e^{−r²/2}` (`m = 2`).
    pub fn eval(&self, x: [f64; 2]) -> Multivector {
        let p = self.j / 2;
        let r2 = x[0] * x[0] + x[1] * x[1];
        let odd = self.j % 2 == 1;
        let alpha = (self.k + usize::from(odd)) as f64;
        let norm = 2f64.powi(p as i32) * (1..=p).map(|v| v as f64).product::<f64>();
        let radial = norm * laguerre(p, alpha, r2) * (-0.5 * r2).exp();
        let mono = monogenic(self.k, self.l, x);
        let body = if odd {
            let vx = from_planar([ZERO, x[0].into(), x[1].into(), ZERO]);
            &vx * &mono
        } else {
            mono
        };
        body.scale_real(radial)
    }
}

/// `μ_{j,k}` with `T_G ψ_{j,k,l} = μ ψ_{j,k,l}`: the Fourier eigenvalue
/// `(−i)^{j+k}` times `i^{G(λ)}`, where `λ = −k` on `M_k` (even `j`) and
/// `λ = k + m − 1` on `x M_k` (odd `j`).
pub fn predicted_mu(g: &IntPoly, j: usize, k: usize, m: usize) -> Phase {
    let fourier = Phase::MINUS_I.pow(((j + k) % 4) as u32);
    let lambda = if j % 2 == 0 { -(k as i64) } else { (k + m - 1) as i64 };
    phase(g, lambda) * fourier
}

/// Quadrature and sampling parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HermiteSpec {
    /// Gauss–Legendre nodes per axis on `[−half_width, half_width]`.
    pub nodes: usize,
    pub half_width: f64,
    /// Uniform output grid `y_nodes × y_nodes` on `[−y_half_width, y_half_width]²`.
    pub y_nodes: usize,
    pub y_half_width: f64,
    pub side: Side,
    /// Jacobi–Anger truncation tolerance for kernel values.
    pub kernel_tolerance: f64,
    /// Largest admissible `max |f|` on the outer ring of the grid relative to `max |f|`.
    pub boundary_tolerance: f64,
}

impl Default for HermiteSpec {
    fn default() -> Self {
        HermiteSpec {
            nodes: 120,
            half_width: 6.0,
            y_nodes: 16,
            y_half_width: 4.0,
            side: Side::Left,
            kernel_tolerance: 1e-12,
            boundary_tolerance: 1e-3,
        }
    }
}

impl HermiteSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 4 || self.y_nodes < 1 {
            return Err(Error::Config("grids need at least 4 quadrature and 1 output node".into()));
        }
        if !(self.half_width > 0.0 && self.y_half_width >= 0.0) {
            return Err(Error::Config("grid widths must be positive".into()));
        }
        Ok(())
    }

    pub fn y_grid(&self) -> Vec<[f64; 2]> {
        let n = self.y_nodes;
        let at = |i: usize| {
            if n == 1 {
                0.0
            } else {
                -self.y_half_width + 2.0 * self.y_half_width * i as f64 / (n - 1) as f64
            }
        };
        (0..n).flat_map(|i| (0..n).map(move |j| [at(i), at(j)])).collect()
    }
}

/// Tensor quadrature grid on a square.
#[derive(Clone, Debug)]
pub struct XGrid {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    /// Indices of points in the outermost ring of nodes.
    ring: Vec<usize>,
}

impl XGrid {
    pub fn new(nodes: usize, half_width: f64) -> Self {
        let rule = gauss_legendre(nodes);
        let axis: Vec<(f64, f64)> = rule.mapped(-half_width, half_width).collect();
        let mut points = Vec::with_capacity(nodes * nodes);
        let mut weights = Vec::with_capacity(nodes * nodes);
        let mut ring = Vec::new();
        for (i, &(a, wa)) in axis.iter().enumerate() {
            for (j, &(b, wb)) in axis.iter().enumerate() {
                if i == 0 || j == 0 || i + 1 == nodes || j + 1 == nodes {
                    ring.push(points.len());
                }
                points.push([a, b]);
                weights.push(wa * wb);
            }
        }
        XGrid { points, weights, ring }
    }

    pub fn from_spec(spec: &HermiteSpec) -> Self {
        Self::new(spec.nodes, spec.half_width)
    }

    pub fn sample<F: Fn([f64; 2]) -> Multivector>(&self, f: F) -> Vec<Multivector> {
        self.points.iter().map(|&p| f(p)).collect()
    }

    fn check_decay(&self, values: &[Planar], tolerance: f64) -> Result<()> {
        let mag = |v: &Planar| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let peak = values.iter().map(mag).fold(0.0, f64::max);
        let edge = self.ring.iter().map(|&i| mag(&values[i])).fold(0.0, f64::max);
        if peak > 0.0 && edge > tolerance * peak {
            return Err(Error::OutOfRange(format!(
                "input does not decay on the quadrature square: edge/peak = {:.3e}",
                edge / peak
            )));
        }
        Ok(())
    }
}

/// `T_G f` for several `G` and several inputs `f` at once, at the points
/// `ys`. Returns `out[g][f][y]`.
pub fn apply_transform_many(
    gs: &[IntPoly],
    inputs: &[Vec<Multivector>],
    grid: &XGrid,
    ys: &[[f64; 2]],
    spec: &HermiteSpec,
) -> Result<Vec<Vec<Vec<Multivector>>>> {
    spec.validate()?;
    let tables: Vec<[Complex64; 4]> = gs.iter().map(phase_table).collect();
    let fs: Vec<Vec<Planar>> = inputs
        .iter()
        .map(|f| {
            if f.len() != grid.points.len() {
                return Err(Error::DimensionMismatch { expected: grid.points.len(), found: f.len() });
            }
            let p: Vec<Planar> = f.iter().map(to_planar).collect();
            grid.check_decay(&p, spec.boundary_tolerance)?;
            Ok(p)
        })
        .collect::<Result<_>>()?;
    let scale = 1.0 / (2.0 * std::f64::consts::PI);
    let per_y: Vec<Vec<Vec<Planar>>> = ys
        .par_iter()
        .map(|y| {
            let ry = (y[0] * y[0] + y[1] * y[1]).sqrt();
            let ty = y[1].atan2(y[0]);
            let mut acc = vec![vec![[ZERO; 4]; fs.len()]; gs.len()];
            for (idx, (x, w)) in grid.points.iter().zip(&grid.weights).enumerate() {
                let rx = (x[0] * x[0] + x[1] * x[1]).sqrt();
                let tx = x[1].atan2(x[0]);
                let coeffs = kernel_coefficients(&tables, rx * ry, ty - tx, spec.kernel_tolerance)?;
                for (gi, &(a, b)) in coeffs.iter().enumerate() {
                    let (a, b) = (a * w, b * w);
                    for (fi, f) in fs.iter().enumerate() {
                        let term = match spec.side {
                            Side::Left => even_times(a, b, &f[idx]),
                            Side::Right => times_even(&f[idx], a, b),
                        };
                        let slot = &mut acc[gi][fi];
                        for c in 0..4 {
                            slot[c] += term[c];
                        }
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok((0..gs.len())
        .map(|gi| {
            (0..fs.len())
                .map(|fi| per_y.iter().map(|acc| from_planar(acc[gi][fi]).scale_real(scale)).collect())
                .collect()
        })
        .collect())
}

/// `T_G f` at the points `ys`, `f` sampled on `grid`.
pub fn apply_transform(
    g: &IntPoly,
    f: &[Multivector],
    grid: &XGrid,
    ys: &[[f64; 2]],
    spec: &HermiteSpec,
) -> Result<Vec<Multivector>> {
    let mut out = apply_transform_many(std::slice::from_ref(g), &[f.to_vec()], grid, ys, spec)?;
    Ok(out.remove(0).remove(0))
}

/// `‖a − b‖ / ‖b‖` over a sample set.
pub fn relative_residual(a: &[Multivector], b: &[Multivector]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(p, q)| p.distance(q).powi(2)).sum();
    let den: f64 = b.iter().map(|q| q.norm().powi(2)).sum();
    (num / den).sqrt()
}

/// One eigenvalue check.
#[derive(Clone, Debug, Serialize)]
pub struct EigenCheck {
    pub g: String,
    pub index: HermiteIndex,
    pub mu: String,
    pub residual: f64,
}

/// Relative grid residual `‖T_G ψ − μ ψ‖ / ‖μ ψ‖` for each `(G, index)`.
pub fn eigen_residuals(gs: &[IntPoly], indices: &[HermiteIndex], spec: &HermiteSpec) -> Result<Vec<EigenCheck>> {
    let grid = XGrid::from_spec(spec);
    let ys = spec.y_grid();
    let inputs: Vec<Vec<Multivector>> = indices.iter().map(|ix| grid.sample(|x| ix.eval(x))).collect();
    let images = apply_transform_many(gs, &inputs, &grid, &ys, spec)?;
    let mut out = Vec::new();
    for (g, per_g) in gs.iter().zip(images) {
        for (ix, image) in indices.iter().zip(per_g) {
            let mu = predicted_mu(g, ix.j, ix.k, 2);
            let expect: Vec<Multivector> = ys.iter().map(|&y| ix.eval(y).scale(mu.to_complex())).collect();
            out.push(EigenCheck {
                g: g.to_string(),
                index: *ix,
                mu: mu.to_string(),
                residual: relative_residual(&image, &expect),
            });
        }
    }
    Ok(out)
}

/// Single-case convenience wrapper around [`eigen_residuals`].
pub fn eigen_residual(g: &IntPoly, j: usize, k: usize, l: u8, spec: &HermiteSpec) -> Result<f64> {
    let ix = HermiteIndex::new(j, k, l)?;
    Ok(eigen_residuals(std::slice::from_ref(g), &[ix], spec)?[0].residual)
}

/// `D f = e₁∂₁f + e₂∂₂f` by central differences.
pub fn dirac_fd<F: Fn([f64; 2]) -> Multivector>(f: &F, x: [f64; 2], h: f64) -> Multivector {
    let d1 = (f([x[0] + h, x[1]]) - f([x[0] - h, x[1]])).scale_real(0.5 / h);
    let d2 = (f([x[0], x[1] + h]) - f([x[0], x[1] - h])).scale_real(0.5 / h);
    &Multivector::generator(2, 1) * &d1 + &Multivector::generator(2, 2) * &d2
}

/// `Γ f = −e₁₂ (x₁∂₂ − x₂∂₁) f` by central differences.
pub fn gamma_fd<F: Fn([f64; 2]) -> Multivector>(f: &F, x: [f64; 2], h: f64) -> Multivector {
    let d1 = (f([x[0] + h, x[1]]) - f([x[0] - h, x[1]])).scale_real(0.5 / h);
    let d2 = (f([x[0], x[1] + h]) - f([x[0], x[1] - h])).scale_real(0.5 / h);
    let ang = d2.scale_real(x[0]) - d1.scale_real(x[1]);
    (&Multivector::e12(2) * &ang).scale_real(-1.0)
}

/// The constant `c` in `T_G(D f) = c · y · T_G f` for a Gaussian input:
/// `c = i^{1 + G(1) − G(0)}`.
pub fn helmholtz_constant(g: &IntPoly) -> Complex64 {
    let e = 1 + g.residue_mod4(1) as i64 - g.residue_mod4(0) as i64;
    Phase::from_exponent(e).to_complex()
}

/// Relative residual of `T_G(D ψ₀) = c · y · T_G ψ₀` with `D ψ₀` taken by
/// finite differences of the Gaussian.
pub fn helmholtz_residual(g: &IntPoly, spec: &HermiteSpec) -> Result<f64> {
    helmholtz_residual_with(g, helmholtz_constant(g), spec)
}

/// As [`helmholtz_residual`] with the constant `c` supplied by the caller.
pub fn helmholtz_residual_with(g: &IntPoly, c: Complex64, spec: &HermiteSpec) -> Result<f64> {
    let grid = XGrid::from_spec(spec);
    let ys = spec.y_grid();
    let gauss = |x: [f64; 2]| HermiteIndex { j: 0, k: 0, l: 1 }.eval(x);
    let f = grid.sample(gauss);
    let df = grid.sample(|x| dirac_fd(&gauss, x, 1e-4));
    let images = apply_transform_many(std::slice::from_ref(g), &[f, df], &grid, &ys, spec)?;
    let rhs: Vec<Multivector> = ys
        .iter()
        .zip(&images[0][0])
        .map(|(y, tf)| {
            let vy = from_planar([ZERO, y[0].into(), y[1].into(), ZERO]);
            (&vy * tf).scale(c)
        })
        .collect();
    Ok(relative_residual(&images[0][1], &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small() -> HermiteSpec {
        HermiteSpec { nodes: 64, y_nodes: 5, y_half_width: 2.5, ..Default::default() }
    }

    #[test]
    fn planar_products_match_general_product() {
        let a = Complex64::new(0.3, -1.2);
        let b = Complex64::new(-0.7, 0.4);
        let f: Planar = [
            Complex64::new(1.0, 0.5),
            Complex64::new(-0.2, 0.1),
            Complex64::new(0.8, -0.9),
            Complex64::new(0.05, 2.0),
        ];
        let k = from_planar([a, ZERO, ZERO, b]);
        let fm = from_planar(f);
        assert!(from_planar(even_times(a, b, &f)).distance(&(&k * &fm)) < 1e-15);
        assert!(from_planar(times_even(&f, a, b)).distance(&(&fm * &k)) < 1e-15);
    }

    #[test]
    fn monogenics_are_monogenic_and_gamma_eigen() {
        for k in 0..=5 {
            for l in [1u8, 2] {
                let f = |x: [f64; 2]| monogenic(k, l, x);
                let x0 = [0.63, -0.41];
                let scale = 1.0 + f(x0).norm();
                assert!(dirac_fd(&f, x0, 1e-5).norm() / scale < 1e-6, "D M_{k}^{l}");
                let g = gamma_fd(&f, x0, 1e-5);
                assert!(g.distance(&f(x0).scale_real(-(k as f64))) / scale < 1e-6, "Γ M_{k}^{l}");
                if k >= 1 {
                    let xm = |x: [f64; 2]| &from_planar([ZERO, x[0].into(), x[1].into(), ZERO]) * &monogenic(k - 1, l, x);
                    let gx = gamma_fd(&xm, x0, 1e-5);
                    let s2 = 1.0 + xm(x0).norm();
                    assert!(gx.distance(&xm(x0).scale_real(k as f64)) / s2 < 1e-6, "Γ x M_{}^{l}", k - 1);
                }
            }
        }
    }

    #[test]
    fn left_e1_copy_is_not_monogenic() {
        let f = |x: [f64; 2]| &Multivector::generator(2, 1) * &monogenic(1, 1, x);
        assert!(dirac_fd(&f, [0.3, 0.7], 1e-5).norm() > 0.1);
    }

    #[test]
    fn mu_examples() {
        let zero = IntPoly::zero();
        assert_eq!(predicted_mu(&zero, 1, 0, 2), Phase::MINUS_I);
        assert_eq!(predicted_mu(&zero, 2, 1, 2), Phase::I);
        let g = IntPoly::parse("3x^4+x^3-2").unwrap();
        assert_eq!(predicted_mu(&g, 0, 0, 2), phase(&g, 0));
        assert_eq!(predicted_mu(&IntPoly::monomial(1, 1), 1, 0, 2), Phase::ONE);
        assert_eq!(predicted_mu(&IntPoly::monomial(1, 2), 0, 1, 2), Phase::ONE);
    }

    #[test]
    fn gaussian_and_first_odd_function_under_fourier() {
        let spec = small();
        let g = IntPoly::zero();
        let checks = eigen_residuals(
            &[g],
            &[HermiteIndex { j: 0, k: 0, l: 1 }, HermiteIndex { j: 1, k: 0, l: 1 }],
            &spec,
        )
        .unwrap();
        assert!(checks[0].residual < 1e-6, "{checks:?}");
        assert!(checks[1].residual < 1e-6, "{checks:?}");
    }

    #[test]
    fn square_on_psi_011_is_identity() {
        let r = eigen_residual(&IntPoly::monomial(1, 2), 0, 1, 1, &small()).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn helmholtz_constant_cases() {
        assert_eq!(helmholtz_constant(&IntPoly::zero()), Complex64::new(0.0, 1.0));
        assert_eq!(helmholtz_constant(&IntPoly::parse("2x^2").unwrap()), Complex64::new(0.0, -1.0));
        for g in ["0", "2x^2", "x"] {
            let r = helmholtz_residual(&IntPoly::parse(g).unwrap(), &small()).unwrap();
            assert!(r < 1e-4, "{g}: {r}");
        }
    }

    #[test]
    fn slow_decay_is_rejected() {
        let spec = small();
        let grid = XGrid::from_spec(&spec);
        let f = grid.sample(|_| Multivector::one(2));
        assert!(apply_transform(&IntPoly::zero(), &f, &grid, &[[0.0, 0.0]], &spec).is_err());
    }

    proptest! {
        #[test]
        fn mu_has_order_dividing_four(coeffs in prop::collection::vec(-20i64..20, 1..7), j in 0usize..=8, k in 0usize..=8) {
            let g = IntPoly::new(coeffs);
            prop_assert_eq!(predicted_mu(&g, j, k, 2).pow(4), Phase::ONE);
        }
    }
}
