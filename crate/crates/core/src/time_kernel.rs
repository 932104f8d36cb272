//! Time-domain kernels `K_{m,G}(x, y)`.
//!
//! Several independent routes are provided and every value records which
//! one produced it:
//!
//! * `oracle2d`: Jacobi–Anger eigen-expansion (m = 2 only);
//! * `closed-form`: plane-wave combination for the bounded family;
//! * `quadrature`: Bessel convolutions `K_{U¹..U⁴}` for `G ≡ x²`, even `m ≥ 4`;
//! * `generating-function`: coefficient extraction from `H(x, y, a, G)`;
//! * `talbot`: numerical inversion of the s-domain kernel at `t = 1`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::{inner, wedge, Multivector, VectorM, MAX_DIM};
use crate::error::{Error, Result};
use crate::intpoly::{is_bounded_family, phase, IntPoly};
use crate::laplace_forms::{eval_form, kernel_laplace_eigen, FormVariant, LaplaceContext, Part, Tag};
use crate::numlaplace::{inverse_laplace, QuadratureSpec};
use crate::oracle2d::oracle_kernel;
use crate::quadrature::adaptive_gk;
use crate::specfun::{bessel_j, gamma_fn};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// How a kernel value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    ClosedForm,
    Quadrature,
    GeneratingFunction,
    Talbot,
    Oracle2d,
}

impl Route {
    pub const ALL: [Route; 5] =
        [Route::ClosedForm, Route::Quadrature, Route::GeneratingFunction, Route::Talbot, Route::Oracle2d];

    pub fn tag(self) -> &'static str {
        match self {
            Route::ClosedForm => "closed-form",
            Route::Quadrature => "quadrature",
            Route::GeneratingFunction => "generating-function",
            Route::Talbot => "talbot",
            Route::Oracle2d => "oracle2d",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.tag() == s)
            .ok_or_else(|| Error::Config(format!("unknown route `{s}`")))
    }
}

/// One evaluated kernel value.
#[derive(Clone, Debug)]
pub struct KernelSample {
    pub x: VectorM,
    pub y: VectorM,
    pub m: usize,
    pub g: IntPoly,
    pub value: Multivector,
    pub route: Route,
}

fn check_pair(m: usize, x: &VectorM, y: &VectorM) -> Result<()> {
    if !(2..=MAX_DIM).contains(&m) {
        return Err(Error::UnsupportedDimension(m, "2..=8"));
    }
    for v in [x, y] {
        if v.dim() != m {
            return Err(Error::DimensionMismatch { expected: m, found: v.dim() });
        }
    }
    Ok(())
}

fn plane_wave(m: usize, xi: f64, sign: f64) -> Multivector {
    Multivector::scalar(m, Complex64::new(0.0, -sign * xi).exp())
}

/// `∫₀¹ τ^p e^{−iσξτ} J₀(z(1−τ)) dτ`.
pub fn bessel_convolution(p: f64, sigma: f64, xi: f64, z: f64, tol: f64) -> Result<Complex64> {
    let f = |tau: f64| -> Result<Complex64> {
        let w = if p == 0.0 { 1.0 } else { tau.powf(p) };
        Ok(Complex64::new(0.0, -sigma * xi * tau).exp() * w * bessel_j(0, z * (1.0 - tau))?)
    };
    Ok(adaptive_gk(f, 0.0, 1.0, tol, 2000)?.value)
}

/// `K_{U^j}` for even `m ≥ 4`: the time-domain function whose transform
/// (after `t^{m/2−1}` scaling) is `U^j/√+`. With `σ = (−1)^{m−1}`,
/// `Γ = Γ(m/2)`, `Γ' = Γ(m/2−1)` and `∫_p^± = ∫₀¹ τ^p e^{∓iξτ} J₀(z(1−τ)) dτ`:
///
/// ```text
/// K_{U¹} =  e^{−iξ}/Γ + ∫_{m/2−2}^+/Γ' + i(x∧y) ∫_{m/2−1}^+/Γ
/// K_{U²} =  e^{+iξ}/Γ + ∫_{m/2−2}^−/Γ' − i(x∧y) ∫_{m/2−1}^−/Γ
/// K_{U³} =  σ(e^{−iσξ}/Γ − ∫_{m/2−2}^{σ}/Γ') − i(x∧y) ∫_{m/2−1}^{σ}/Γ
/// K_{U⁴} = −σ e^{iσξ}/Γ + σ ∫_{m/2−2}^{−σ}/Γ' − i(x∧y) ∫_{m/2−1}^{−σ}/Γ
/// ```
pub fn kernel_ku(j: u8, m: usize, x: &VectorM, y: &VectorM, spec: &QuadratureSpec) -> Result<Multivector> {
    ku_terms(j, m, x, y, spec, false)
}

/// `K_{U^j}` with the `x∧y` term as printed: `e^{∓iξ}` outside the integral
/// and no `τ^{m/2−1}` weight. Only the audit uses this.
pub fn kernel_ku_printed(j: u8, m: usize, x: &VectorM, y: &VectorM, spec: &QuadratureSpec) -> Result<Multivector> {
    ku_terms(j, m, x, y, spec, true)
}

fn ku_terms(j: u8, m: usize, x: &VectorM, y: &VectorM, spec: &QuadratureSpec, printed: bool) -> Result<Multivector> {
    check_pair(m, x, y)?;
    if m % 2 == 1 || m < 4 {
        return Err(Error::UnsupportedRoute(format!(
            "K_U forms need even m ≥ 4 (got m = {m}); m = 2 has its own closed form"
        )));
    }
    let xi = inner(x, y)?;
    let z = x.norm() * y.norm();
    let w = wedge(x, y)?;
    let g = gamma_fn(m as f64 / 2.0)?;
    let g1 = gamma_fn(m as f64 / 2.0 - 1.0)?;
    let sigma = -1.0;
    let tol = spec.tolerance * 0.1;
    let lo = m as f64 / 2.0 - 2.0;
    let hi = m as f64 / 2.0 - 1.0;
    let conv = |p, dir| bessel_convolution(p, dir, xi, z, tol);
    let e = |dir: f64| Complex64::new(0.0, -dir * xi).exp();
    let top = |dir: f64| -> Result<Complex64> {
        if printed {
            Ok(e(dir) * bessel_convolution(0.0, 0.0, xi, z, tol)?)
        } else {
            conv(hi, dir)
        }
    };
    let (scalar, biv) = match j {
        1 => (e(1.0) / g + conv(lo, 1.0)? / g1, I * top(1.0)? / g),
        2 => (e(-1.0) / g + conv(lo, -1.0)? / g1, -I * top(-1.0)? / g),
        3 => (sigma * (e(sigma) / g - conv(lo, sigma)? / g1), -I * top(sigma)? / g),
        4 => (-sigma * e(-sigma) / g + sigma * conv(lo, -sigma)? / g1, -I * top(-sigma)? / g),
        _ => return Err(Error::OutOfRange(format!("K_U index must be 1..=4, got {j}"))),
    };
    let mut out = w.scale(biv);
    out += Multivector::scalar(m, scalar);
    Ok(out)
}

/// `Γ(m/2)/4 ((1+i)K_{U¹} + (1−i)K_{U²} + e^{iπ/2(m−1)²}((1+i)K_{U³} + (1−i)K_{U⁴}))`.
pub fn kernel_gamma2_quadrature(m: usize, x: &VectorM, y: &VectorM, spec: &QuadratureSpec) -> Result<Multivector> {
    gamma2_assembly(m, x, y, spec, kernel_ku)
}

/// The same assembly over [`kernel_ku_printed`].
pub fn kernel_gamma2_printed(m: usize, x: &VectorM, y: &VectorM, spec: &QuadratureSpec) -> Result<Multivector> {
    gamma2_assembly(m, x, y, spec, kernel_ku_printed)
}

type KuFn = fn(u8, usize, &VectorM, &VectorM, &QuadratureSpec) -> Result<Multivector>;

fn gamma2_assembly(m: usize, x: &VectorM, y: &VectorM, spec: &QuadratureSpec, ku: KuFn) -> Result<Multivector> {
    let u: Vec<Multivector> = (1..=4).map(|j| ku(j, m, x, y, spec)).collect::<Result<_>>()?;
    let p = Complex64::new(1.0, 1.0);
    let q = Complex64::new(1.0, -1.0);
    let mut out = u[0].scale(p);
    out.add_scaled(&u[1], q);
    out.add_scaled(&u[2], I * p);
    out.add_scaled(&u[3], I * q);
    Ok(out.scale_real(gamma_fn(m as f64 / 2.0)? / 4.0))
}

/// The `m = 2`, `G = x²` display evaluated as printed:
/// `e^{iξ} + J₀(z) + i(x∧y) ∫₀¹ e^{−iξ(1−τ)} J₀(zτ) dτ`.
pub fn kernel_m2_gamma2_printed(x: &VectorM, y: &VectorM, spec: &QuadratureSpec) -> Result<Multivector> {
    check_pair(2, x, y)?;
    let xi = inner(x, y)?;
    let z = x.norm() * y.norm();
    // Substituting τ → 1−τ turns the integral into ∫₀¹ e^{−iξτ} J₀(z(1−τ)) dτ.
    let integral = bessel_convolution(0.0, 1.0, xi, z, spec.tolerance * 0.1)?;
    let mut out = wedge(x, y)?.scale(I * integral);
    out += Multivector::scalar(2, Complex64::new(0.0, xi).exp() + bessel_j(0, z)?);
    Ok(out)
}

/// `(i^{G(0)} + i^{G(1)})/2 · e^{−iξ} + (i^{G(0)} − i^{G(1)})/2 · K^π`, where
/// `K^π = e^{iξ}` for even `m` and otherwise the Talbot inverse of
/// `Γ(m/2)/2 (f_β + (−1)^{m−1} g_β)`.
pub fn kernel_bounded_family(g: &IntPoly, m: usize, x: &VectorM, y: &VectorM, spec: &QuadratureSpec) -> Result<Multivector> {
    check_pair(m, x, y)?;
    if !is_bounded_family(g) {
        return Err(Error::NotBoundedFamily(format!(
            "{g}: a₁ and (G(1)−G(−1))/2 must both be even"
        )));
    }
    let xi = inner(x, y)?;
    let p0 = phase(g, 0).to_complex();
    let p1 = phase(g, 1).to_complex();
    let k_pi = if m % 2 == 0 { plane_wave(m, xi, -1.0) } else { fractional_pi_kernel(m, x, y, spec)? };
    let mut out = plane_wave(m, xi, 1.0).scale((p0 + p1) * 0.5);
    out.add_scaled(&k_pi, (p0 - p1) * 0.5);
    Ok(out)
}

fn talbot_radius(x: &VectorM, y: &VectorM) -> Result<f64> {
    Ok((x.norm() * y.norm()).max(inner(x, y)?.abs()))
}

/// `K^π` by Talbot inversion.
pub fn fractional_pi_kernel(m: usize, x: &VectorM, y: &VectorM, spec: &QuadratureSpec) -> Result<Multivector> {
    check_pair(m, x, y)?;
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    let scale = gamma_fn(m as f64 / 2.0)? / 2.0;
    let f = |s: Complex64| -> Result<Multivector> {
        let ctx = LaplaceContext::continued(s, x, y)?;
        let mut out = eval_form(FormVariant::new(Tag::Beta, Part::F), &ctx)?;
        out.add_scaled(&eval_form(FormVariant::new(Tag::Beta, Part::G), &ctx)?, Complex64::from(sign));
        Ok(out.scale_real(scale))
    };
    inverse_laplace(f, 1.0, &spec.with_radius(talbot_radius(x, y)?))
}

/// `K_{m,G}` by Talbot inversion of the eigen-assembled s-domain kernel.
pub fn kernel_talbot(g: &IntPoly, m: usize, x: &VectorM, y: &VectorM, spec: &QuadratureSpec) -> Result<Multivector> {
    check_pair(m, x, y)?;
    let f = |s: Complex64| -> Result<Multivector> {
        let ctx = LaplaceContext::continued(s, x, y)?;
        kernel_laplace_eigen(g, &ctx)
    };
    inverse_laplace(f, 1.0, &spec.with_radius(talbot_radius(x, y)?))
}

/// `cos √w` and `sin √w / √w`, entire in `w`.
fn cos_sinc_sqrt(w: Complex64) -> (Complex64, Complex64) {
    if w.norm() < 1e-4 {
        let mut c = Complex64::from(1.0);
        let mut s = Complex64::from(1.0);
        let mut term_c = Complex64::from(1.0);
        let mut term_s = Complex64::from(1.0);
        for n in 1..6 {
            let nf = n as f64;
            term_c *= -w / ((2.0 * nf - 1.0) * (2.0 * nf));
            term_s *= -w / ((2.0 * nf) * (2.0 * nf + 1.0));
            c += term_c;
            s += term_s;
        }
        (c, s)
    } else {
        let r = w.sqrt();
        (r.cos(), r.sin() / r)
    }
}

/// The four weights of `H`, built from `i^{G(−1)}`, `i^{G(1)}`, `(−1)^{G'(0)}`
/// of `G` without its constant term and then multiplied by `i^{a₀}`.
pub fn generating_coefficients(g: &IntPoly) -> [Complex64; 4] {
    let bare = g.without_constant();
    let pm = phase(&bare, -1).to_complex();
    let pp = phase(&bare, 1).to_complex();
    let sd = if bare.coeff(1).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let a0 = phase(&IntPoly::new(vec![g.constant_term()]), 0).to_complex();
    [
        (1.0 - I * pm - sd + I * pp) * 0.5 * a0,
        (1.0 + I * pm - sd - I * pp) * 0.5 * a0,
        (1.0 + pm + sd + pp) * 0.5 * a0,
        (1.0 - pm + sd - pp) * 0.5 * a0,
    ]
}

/// `H(x, y, a, G)` evaluated as printed, for complex `a`:
///
/// ```text
/// c₁ (cos√w₊ − (x∧y − a) sin√w₊/√w₊) + c₂ (cos√w₋ + (x∧y + a) sin√w₋/√w₋)
///   + c₃ e^{a − iξ} + c₄ e^{a + iξ},      w± = |x|²|y|² − (ξ ± a)²
/// ```
pub fn generating_h(x: &VectorM, y: &VectorM, a: Complex64, g: &IntPoly) -> Result<Multivector> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    let m = x.dim();
    let xi = inner(x, y)?;
    let z2 = x.norm_sq() * y.norm_sq();
    let w = wedge(x, y)?;
    let [c1, c2, c3, c4] = generating_coefficients(g);
    let mut out = Multivector::zero(m);
    let mut add_branch = |c: Complex64, shift: f64| {
        if c.norm() == 0.0 {
            return;
        }
        let arg = Complex64::from(xi) + shift * a;
        let (cs, sc) = cos_sinc_sqrt(z2 - arg * arg);
        // shift = +1: −(x∧y − a) ; shift = −1: +(x∧y + a)
        let biv_sign = -shift;
        out.add_scaled(&w, c * biv_sign * sc);
        out += Multivector::scalar(m, c * (cs + a * sc));
    };
    add_branch(c1, 1.0);
    add_branch(c2, -1.0);
    out += Multivector::scalar(m, c3 * (a - I * xi).exp() + c4 * (a + I * xi).exp());
    Ok(out)
}

/// Nodes on `|a| = ρ` for coefficient extraction.
pub const GENERATING_NODES: usize = 256;
pub const GENERATING_RADIUS: f64 = 1.0;

fn raw_coefficient(g: &IntPoly, n: usize, x: &VectorM, y: &VectorM, nodes: usize) -> Result<Multivector> {
    let m = x.dim();
    let mut acc = Multivector::zero(m);
    for j in 0..nodes {
        let phi = 2.0 * PI * j as f64 / nodes as f64;
        let a = Complex64::from_polar(GENERATING_RADIUS, phi);
        let h = generating_h(x, y, a, g)?;
        acc.add_scaled(&h, Complex64::from_polar(GENERATING_RADIUS.powi(-(n as i32)), -(n as f64) * phi));
    }
    Ok(acc.scale_real(1.0 / nodes as f64))
}

/// `Γ(m/2) · [a^{m/2−1}] H`, before normalization, with the node-doubling
/// disagreement.
pub fn extract_coefficient(g: &IntPoly, m: usize, x: &VectorM, y: &VectorM) -> Result<(Multivector, f64)> {
    if m % 2 == 1 || m < 2 {
        return Err(Error::UnsupportedRoute(format!("generating function covers even m only (got {m})")));
    }
    let n = m / 2 - 1;
    let gm = gamma_fn(m as f64 / 2.0)?;
    let coarse = raw_coefficient(g, n, x, y, GENERATING_NODES)?.scale_real(gm);
    let fine = raw_coefficient(g, n, x, y, 2 * GENERATING_NODES)?.scale_real(gm);
    let change = coarse.distance(&fine);
    Ok((fine, change))
}

/// The single normalization constant of the generating function: the
/// extracted `G = 0`, `m = 2` coefficient divided by `e^{−i(x,y)}`.
pub fn kappa() -> Complex64 {
    static KAPPA: OnceLock<Complex64> = OnceLock::new();
    *KAPPA.get_or_init(|| {
        let x = VectorM::new(vec![0.6, -0.2]).expect("finite");
        let y = VectorM::new(vec![1.1, 0.7]).expect("finite");
        let (raw, _) = extract_coefficient(&IntPoly::zero(), 2, &x, &y).expect("calibration point is regular");
        let xi = inner(&x, &y).expect("same dimension");
        raw.scalar_part() / Complex64::new(0.0, -xi).exp()
    })
}

/// `K_{m,G}` from the generating function, divided by [`kappa`].
pub fn kernel_from_generating(g: &IntPoly, m: usize, x: &VectorM, y: &VectorM, spec: &QuadratureSpec) -> Result<Multivector> {
    check_pair(m, x, y)?;
    let (raw, change) = extract_coefficient(g, m, x, y)?;
    if change > spec.tolerance * (1.0 + raw.norm()) {
        return Err(Error::NonConvergence {
            method: "generating-function extraction",
            change,
            tolerance: spec.tolerance,
        });
    }
    Ok(raw.scale(kappa().inv()))
}

/// Evaluates `K_{m,G}(x, y)` by a specific route.
pub fn kernel_with_route(
    g: &IntPoly,
    m: usize,
    x: &VectorM,
    y: &VectorM,
    route: Route,
    spec: &QuadratureSpec,
) -> Result<KernelSample> {
    check_pair(m, x, y)?;
    let value = match route {
        Route::Oracle2d => {
            if m != 2 {
                return Err(Error::UnsupportedRoute(format!("oracle2d needs m = 2 (got {m})")));
            }
            oracle_kernel(g, x, y, spec.tolerance * 0.01)?
        }
        Route::ClosedForm => {
            if m % 2 == 1 {
                return Err(Error::UnsupportedRoute(format!(
                    "no closed form in odd dimension m = {m}; use talbot"
                )));
            }
            if !is_bounded_family(g) {
                return Err(Error::UnsupportedRoute(format!("{g} is outside the bounded family")));
            }
            kernel_bounded_family(g, m, x, y, spec)?
        }
        Route::Quadrature => {
            if g.residue_table() != IntPoly::monomial(1, 2).residue_table() {
                return Err(Error::UnsupportedRoute(format!(
                    "K_U quadrature covers G ≡ x² (mod 4) only, not {g}"
                )));
            }
            kernel_gamma2_quadrature(m, x, y, spec)?
        }
        Route::GeneratingFunction => kernel_from_generating(g, m, x, y, spec)?,
        Route::Talbot => kernel_talbot(g, m, x, y, spec)?,
    };
    Ok(KernelSample { x: x.clone(), y: y.clone(), m, g: g.clone(), value, route })
}

/// Default route for `(G, m)`.
pub fn default_route(g: &IntPoly, m: usize) -> Route {
    if m == 2 {
        Route::Oracle2d
    } else if is_bounded_family(g) && m % 2 == 0 {
        Route::ClosedForm
    } else if m % 2 == 0 {
        Route::GeneratingFunction
    } else {
        Route::Talbot
    }
}

/// Dispatcher: oracle at `m = 2`; bounded-family closed form; generating
/// function for even `m` (Talbot if extraction fails); Talbot for odd `m`.
pub fn kernel_general(g: &IntPoly, m: usize, x: &VectorM, y: &VectorM, spec: &QuadratureSpec) -> Result<KernelSample> {
    check_pair(m, x, y)?;
    let z = x.norm() * y.norm();
    if !(z <= crate::oracle2d::MAX_Z) {
        return Err(Error::OutOfRange(format!("|x||y| = {z} exceeds {}", crate::oracle2d::MAX_Z)));
    }
    if is_bounded_family(g) && m % 2 == 1 {
        let value = kernel_bounded_family(g, m, x, y, spec)?;
        return Ok(KernelSample { x: x.clone(), y: y.clone(), m, g: g.clone(), value, route: Route::Talbot });
    }
    match default_route(g, m) {
        Route::GeneratingFunction => kernel_with_route(g, m, x, y, Route::GeneratingFunction, spec)
            .or_else(|_| kernel_with_route(g, m, x, y, Route::Talbot, spec)),
        route => kernel_with_route(g, m, x, y, route, spec),
    }
}

/// A sample re-evaluated by a second route.
#[derive(Clone, Debug)]
pub struct Confirmation {
    pub route: Route,
    pub value: Multivector,
    /// `|K − K'| / (1 + |K|)`.
    pub difference: f64,
}

/// Re-evaluates `sample` by a route independent of the one that produced
/// it. Talbot inversion of the eigen form confirms everything except values
/// that already came from it; the odd-`m` bounded family (whose `K^π` part
/// is a different Talbot inversion) is the one Talbot value that can still
/// be confirmed.
pub fn confirm(sample: &KernelSample, spec: &QuadratureSpec) -> Result<Confirmation> {
    let (g, m, x, y) = (&sample.g, sample.m, &sample.x, &sample.y);
    let odd_bounded = m % 2 == 1 && is_bounded_family(g);
    if sample.route == Route::Talbot && !odd_bounded {
        return Err(Error::UnsupportedRoute(format!(
            "no second route available for {g} at m = {m}"
        )));
    }
    let value = kernel_talbot(g, m, x, y, spec)?;
    let difference = value.distance(&sample.value) / (1.0 + sample.value.norm());
    Ok(Confirmation { route: Route::Talbot, value, difference })
}

/// Growth statistics of `|K| / (1 + |x||y|)^q`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundAudit {
    pub g: String,
    pub m: usize,
    pub exponent: f64,
    pub samples: usize,
    pub max_ratio: f64,
    pub median_ratio: f64,
    /// Median ratio among the samples whose `|x||y|` lies in the top decile.
    pub top_decile_ratio: f64,
    /// Least-squares slope of ratio against `|x||y|`, relative to the median.
    pub relative_slope: f64,
    pub no_growth: bool,
}

/// Sampling plan for [`bound_audit`].
#[derive(Clone, Copy, Debug)]
pub struct BoundGrid {
    pub samples: usize,
    pub z_max: f64,
    pub seed: u64,
}

impl Default for BoundGrid {
    fn default() -> Self {
        BoundGrid { samples: 400, z_max: 50.0, seed: 7 }
    }
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn random_unit(rng: &mut ChaCha8Rng, m: usize) -> VectorM {
    loop {
        let c: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return VectorM::new(c.into_iter().map(|v| v / n).collect()).expect("finite");
        }
    }
}

/// Samples `|x||y|` uniformly on `[0, z_max]` with random directions and
/// reports whether `|K|/(1+|x||y|)^q` grows: the top-decile median may not
/// exceed 1.1 times the overall median.
pub fn bound_audit(g: &IntPoly, m: usize, exponent: f64, grid: BoundGrid, spec: &QuadratureSpec) -> Result<BoundAudit> {
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    let points: Vec<(VectorM, VectorM, f64)> = (0..grid.samples)
        .map(|_| {
            let z = rng.gen_range(0.0..=grid.z_max);
            let x = random_unit(&mut rng, m);
            let y = random_unit(&mut rng, m).scaled(z);
            (x, y, z)
        })
        .collect();
    let mut pairs: Vec<(f64, f64)> = points
        .par_iter()
        .map(|(x, y, z)| {
            let k = kernel_general(g, m, x, y, spec)?;
            Ok((*z, k.value.norm() / (1.0 + z).powf(exponent)))
        })
        .collect::<Result<_>>()?;
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut ratios: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    let med = median(&mut ratios.clone());
    let cut = pairs.len() - (pairs.len() / 10).max(1);
    let top = median(&mut ratios.split_off(cut));
    let n = pairs.len() as f64;
    let mz = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let mr = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = pairs.iter().map(|p| (p.0 - mz) * (p.1 - mr)).sum();
    let var: f64 = pairs.iter().map(|p| (p.0 - mz).powi(2)).sum();
    let slope = if var > 0.0 { cov / var } else { 0.0 };
    Ok(BoundAudit {
        g: g.to_string(),
        m,
        exponent,
        samples: pairs.len(),
        max_ratio,
        median_ratio: med,
        top_decile_ratio: top,
        relative_slope: if med > 0.0 { slope / med } else { slope },
        no_growth: top <= 1.1 * med,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laplace_forms::kernel_laplace_th2_printed;
    use crate::numlaplace::{forward_laplace, Envelope};

    fn vm(c: &[f64]) -> VectorM {
        VectorM::new(c.to_vec()).unwrap()
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn route_tags_round_trip() {
        for r in Route::ALL {
            assert_eq!(r.tag().parse::<Route>().unwrap(), r);
        }
        assert!("fast".parse::<Route>().is_err());
    }

    #[test]
    fn ku_transforms_match_u_over_sqrt_plus() {
        let m = 4;
        let x = vm(&[0.4, -0.3, 0.2, 0.5]);
        let y = vm(&[0.6, 0.1, -0.7, 0.3]);
        let s = Complex64::from(2.0);
        let ctx = LaplaceContext::new(s, &x, &y).unwrap();
        let fspec = QuadratureSpec { truncation: 30.0, tolerance: 1e-7, ..spec() };
        let z = x.norm() * y.norm();
        let env = Envelope::new(3.0 * (1.0 + z), m as f64 / 2.0 + 1.0, z);
        // U¹/√+ = f, U²/√+ = f_β; U³, U⁴ are the g-side numerators.
        let targets = [
            eval_form(FormVariant::new(Tag::Plain, Part::F), &ctx).unwrap(),
            eval_form(FormVariant::new(Tag::Beta, Part::F), &ctx).unwrap(),
            eval_form(FormVariant::new(Tag::Beta, Part::G), &ctx).unwrap(),
            eval_form(FormVariant::new(Tag::Plain, Part::G), &ctx).unwrap(),
        ];
        for (j, target) in (1u8..=4).zip(targets) {
            let h = |t: f64| -> Result<Multivector> {
                Ok(kernel_ku(j, m, &x.scaled(t), &y, &fspec)?.scale_real(t.powf(m as f64 / 2.0 - 1.0)))
            };
            let num = forward_laplace(h, s, env, &fspec).unwrap();
            assert!(num.distance(&target) < 1e-6 * (1.0 + target.norm()), "j={j}: {}", num.distance(&target));
        }
    }

    #[test]
    fn ku_reflection_symmetry() {
        let x = vm(&[0.4, -0.3, 0.2, 0.5]);
        let y = vm(&[1.6, 0.1, -0.7, 0.3]);
        let a = kernel_ku(2, 4, &x, &y.negated(), &spec()).unwrap();
        let b = kernel_ku(1, 4, &x, &y, &spec()).unwrap();
        assert!(a.distance(&b) < 1e-12);
        assert!(matches!(kernel_ku(1, 3, &vm(&[1.0, 0.0, 0.0]), &vm(&[1.0, 0.0, 0.0]), &spec()), Err(Error::UnsupportedRoute(_))));
        assert!(matches!(kernel_ku(1, 2, &vm(&[1.0, 0.0]), &vm(&[1.0, 0.0]), &spec()), Err(Error::UnsupportedRoute(_))));
    }

    #[test]
    fn square_routes_agree_in_dimension_4_and_6() {
        for m in [4usize, 6] {
            let x: Vec<f64> = (0..m).map(|i| 0.3 + 0.2 * i as f64).collect();
            let y: Vec<f64> = (0..m).map(|i| 0.9 - 0.35 * i as f64).collect();
            let (x, y) = (vm(&x), vm(&y));
            let g = IntPoly::monomial(1, 2);
            let closed = kernel_bounded_family(&g, m, &x, &y, &spec()).unwrap();
            let quad = kernel_gamma2_quadrature(m, &x, &y, &spec()).unwrap();
            let tal = kernel_talbot(&g, m, &x, &y, &spec()).unwrap();
            assert!(quad.distance(&closed) < 1e-8, "m={m}: {}", quad.distance(&closed));
            assert!(tal.distance(&closed) < 1e-8, "m={m}: {}", tal.distance(&closed));
        }
    }

    #[test]
    fn talbot_matches_oracle_in_the_plane() {
        let x = vm(&[0.8, -0.5]);
        let y = vm(&[1.2, 1.9]);
        for g in ["x", "x^3", "3x^5-2x^2+x", "x^2+1", "7"] {
            let g = IntPoly::parse(g).unwrap();
            let o = oracle_kernel(&g, &x, &y, 1e-13).unwrap();
            let t = kernel_talbot(&g, 2, &x, &y, &spec()).unwrap();
            assert!(o.distance(&t) < 1e-8, "{g}: {}", o.distance(&t));
        }
    }

    #[test]
    fn odd_dimension_bounded_family_matches_talbot_of_eigen() {
        let g = IntPoly::parse("x^2").unwrap();
        let x = vm(&[0.5, -0.2, 0.9]);
        let y = vm(&[0.3, 1.1, -0.4]);
        let a = kernel_bounded_family(&g, 3, &x, &y, &spec()).unwrap();
        let b = kernel_talbot(&g, 3, &x, &y, &spec()).unwrap();
        assert!(a.distance(&b) < 1e-8);
    }

    #[test]
    fn kappa_is_two() {
        assert!((kappa() - 2.0).norm() < 1e-12, "{}", kappa());
    }

    #[test]
    fn generating_coefficients_patterns() {
        let c = |s: &str| generating_coefficients(&IntPoly::parse(s).unwrap()).map(|v| (v.re.round() as i64, v.im.round() as i64));
        assert_eq!(c("0"), [(0, 0), (0, 0), (2, 0), (0, 0)]);
        assert_eq!(c("x"), [(0, 0), (2, 0), (0, 0), (0, 0)]);
        assert_eq!(c("-x"), [(2, 0), (0, 0), (0, 0), (0, 0)]);
    }

    #[test]
    fn generating_matches_other_routes() {
        let x2 = vm(&[0.7, -0.4]);
        let y2 = vm(&[1.3, 0.8]);
        for g in ["0", "x", "x^2", "-x", "2x^2"] {
            let g = IntPoly::parse(g).unwrap();
            let a = kernel_from_generating(&g, 2, &x2, &y2, &spec()).unwrap();
            let b = oracle_kernel(&g, &x2, &y2, 1e-13).unwrap();
            assert!(a.distance(&b) < 1e-9, "{g}: {}", a.distance(&b));
        }
        let x4 = vm(&[0.7, -0.4, 0.2, 0.5]);
        let y4 = vm(&[1.3, 0.8, -0.3, 0.1]);
        for g in ["0", "x", "x^2", "2x^2"] {
            let g = IntPoly::parse(g).unwrap();
            let a = kernel_from_generating(&g, 4, &x4, &y4, &spec()).unwrap();
            let b = kernel_talbot(&g, 4, &x4, &y4, &spec()).unwrap();
            assert!(a.distance(&b) < 1e-7, "{g}: {}", a.distance(&b));
        }
    }

    #[test]
    fn generating_matches_talbot_for_general_polynomials() {
        for m in [4usize, 6] {
            let x: Vec<f64> = (0..m).map(|i| 0.5 - 0.15 * i as f64).collect();
            let y: Vec<f64> = (0..m).map(|i| -0.4 + 0.3 * i as f64).collect();
            let (x, y) = (vm(&x), vm(&y));
            for g in ["x^3", "3x^5-2x^2+x", "x^4+x^3+2x", "-x^2+3x+1", "5x^6-x^5"] {
                let g = IntPoly::parse(g).unwrap();
                let a = kernel_from_generating(&g, m, &x, &y, &spec()).unwrap();
                let b = kernel_talbot(&g, m, &x, &y, &spec()).unwrap();
                assert!(a.distance(&b) < 1e-7, "m={m} {g}: {}", a.distance(&b));
            }
        }
    }

    #[test]
    fn degenerate_wedge_uses_series() {
        let x = vm(&[1.0, 0.0]);
        let y = vm(&[2.0, 0.0]);
        let a = kernel_from_generating(&IntPoly::monomial(1, 1), 2, &x, &y, &spec()).unwrap();
        assert!(a.distance(&Multivector::one(2)) < 1e-10);
    }

    #[test]
    fn printed_m2_display_misses_oracle_either_way() {
        let x = vm(&[1.0, 0.0]);
        let y = vm(&[0.0, 1.0]);
        let p = kernel_m2_gamma2_printed(&x, &y, &spec()).unwrap();
        let o = oracle_kernel(&IntPoly::monomial(1, 2), &x, &y, 1e-13).unwrap();
        assert!((o.scalar_part() - 1.0).norm() < 1e-12);
        assert!((p.scalar_part() - (1.0 + bessel_j(0, 1.0).unwrap())).norm() < 1e-12);
        assert!(p.distance(&o) > 0.1 && p.scale_real(0.5).distance(&o) > 0.1);
    }

    #[test]
    fn dispatcher_routes_and_zero_x() {
        let y3 = vm(&[0.3, -1.0, 0.6]);
        let x3 = vm(&[0.9, 0.2, -0.5]);
        let s = kernel_general(&IntPoly::monomial(4, 1), 3, &x3, &y3, &spec()).unwrap();
        let xi = inner(&x3, &y3).unwrap();
        assert!(s.value.distance(&plane_wave(3, xi, 1.0)) < 1e-8);
        let zero = VectorM::zeros(3);
        for g in ["x^3+2", "x", "3x^2+x+1"] {
            let g = IntPoly::parse(g).unwrap();
            let k = kernel_general(&g, 3, &zero, &y3, &spec()).unwrap();
            let expect = Multivector::scalar(3, phase(&g, 0).to_complex());
            assert!(k.value.distance(&expect) < 1e-8, "{g}");
        }
        assert_eq!(kernel_general(&IntPoly::monomial(1, 2), 2, &vm(&[1.0, 0.0]), &vm(&[0.0, 1.0]), &spec()).unwrap().route, Route::Oracle2d);
        assert!(matches!(
            kernel_with_route(&IntPoly::zero(), 3, &x3, &y3, Route::Oracle2d, &spec()),
            Err(Error::UnsupportedRoute(_))
        ));
    }

    #[test]
    fn printed_gamma2_form_in_laplace_domain_agrees_at_m2() {
        let x = vm(&[1.0, 0.0]);
        let y = vm(&[0.0, 1.0]);
        let ctx = LaplaceContext::new(Complex64::from(1.0), &x, &y).unwrap();
        let a = kernel_laplace_th2_printed(&ctx).unwrap();
        let b = kernel_laplace_eigen(&IntPoly::monomial(1, 2), &ctx).unwrap();
        assert!(a.distance(&b) < 1e-12);
    }

    #[test]
    fn bound_audit_plane_wave() {
        let grid = BoundGrid { samples: 60, z_max: 50.0, seed: 3 };
        let a = bound_audit(&IntPoly::zero(), 4, 0.0, grid, &spec()).unwrap();
        assert!((a.max_ratio - 1.0).abs() < 1e-9 && a.no_growth);
    }

    #[test]
    fn confirmation_routes() {
        let (x, y) = (vm(&[0.4, -0.3, 0.2]), vm(&[1.0, 0.5, -0.7]));
        let s = kernel_general(&IntPoly::monomial(1, 2), 3, &x, &y, &spec()).unwrap();
        assert!(confirm(&s, &spec()).unwrap().difference < 1e-8);
        let s = kernel_general(&IntPoly::monomial(1, 1), 3, &x, &y, &spec()).unwrap();
        assert!(matches!(confirm(&s, &spec()), Err(Error::UnsupportedRoute(_))));
        let (x2, y2) = (vm(&[0.4, -0.3]), vm(&[1.0, 0.5]));
        let s = kernel_general(&IntPoly::parse("x^3+x").unwrap(), 2, &x2, &y2, &spec()).unwrap();
        assert!(confirm(&s, &spec()).unwrap().difference < 1e-8);
    }
}
