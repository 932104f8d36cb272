//! Numerical forward and inverse Laplace transforms of multivector-valued
//! functions.
//!
//! The forward transform is composite Gauss–Legendre on `[0, T]` plus an
//! analytic tail bound. The inverse uses a fixed Talbot contour over the
//! full angle range (the transforms here are complex-valued, so the usual
//! conjugate-symmetry halving does not apply).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::quadrature::{adaptive_gk, composite_gl};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Talbot radius `ρ = max(floor, slope·ω·t + offset)`, where `ω` is the
/// distance of the furthest singularity from the real axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TalbotContour {
    pub floor: f64,
    pub slope: f64,
    pub offset: f64,
}

impl Default for TalbotContour {
    fn default() -> Self {
        TalbotContour { floor: 4.0, slope: 0.9, offset: 2.0 }
    }
}

impl TalbotContour {
    pub fn radius(&self, omega: f64, t: f64) -> f64 {
        self.floor.max(self.slope * omega * t + self.offset)
    }
}

/// Numerical parameters shared by forward and inverse transforms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Forward transform truncation `T`.
    pub truncation: f64,
    /// Gauss–Legendre order per forward panel.
    pub order: usize,
    /// Talbot node count `N`; `2N` is used for the error estimate.
    pub nodes: usize,
    pub contour: TalbotContour,
    /// Largest `|Im|` of a singularity of the transform being inverted.
    pub singularity_radius: f64,
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            truncation: 60.0,
            order: 16,
            nodes: 48,
            contour: TalbotContour::default(),
            singularity_radius: 0.0,
            tolerance: 1e-9,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.truncation > 0.0) {
            return Err(Error::Config(format!("truncation must be positive, got {}", self.truncation)));
        }
        if self.nodes < 16 {
            return Err(Error::Config(format!("need at least 16 Talbot nodes, got {}", self.nodes)));
        }
        if self.order < 2 {
            return Err(Error::Config(format!("panel order must be at least 2, got {}", self.order)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if !(self.singularity_radius >= 0.0) {
            return Err(Error::Config("singularity radius must be non-negative".into()));
        }
        Ok(())
    }

    pub fn with_radius(mut self, omega: f64) -> Self {
        self.singularity_radius = omega;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }
}

/// What is known about a time-domain function: `|h(t)| ≤ C(1+t)^p`, and it
/// oscillates with angular frequency at most `frequency`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub constant: f64,
    pub power: f64,
    pub frequency: f64,
}

impl Envelope {
    pub fn new(constant: f64, power: f64, frequency: f64) -> Self {
        Envelope { constant, power, frequency }
    }

    /// Bound on `∫_T^∞ C(1+t)^p e^{−σt} dt`, using
    /// `(1+t)^p ≤ (1+T)^p e^{p(t−T)/(1+T)}` for `t ≥ T`.
    pub fn tail_bound(&self, sigma: f64, truncation: f64) -> f64 {
        let rate = sigma - self.power.max(0.0) / (1.0 + truncation);
        if rate <= 0.0 {
            return f64::INFINITY;
        }
        self.constant * (1.0 + truncation).powf(self.power) * (-sigma * truncation).exp() / rate
    }
}

/// `∫₀^∞ e^{−st} h(t) dt`.
///
/// Panels are at most a quarter period of `e^{−i Im(s) t}` times the
/// envelope's own oscillation, and at most unit length. The first panel
/// is integrated in `u = √t`, which absorbs `t^{±1/2}` endpoint behaviour.
/// The result is accepted when it agrees with a higher-order rule and the
/// tail bound to within `spec.tolerance`.
pub fn forward_laplace<F>(h: F, s: Complex64, envelope: Envelope, spec: &QuadratureSpec) -> Result<Multivector>
where
    F: Fn(f64) -> Result<Multivector>,
{
    spec.validate()?;
    if !(s.re > 0.0) {
        return Err(Error::OutOfRange(format!("forward transform needs Re(s) > 0, got {s}")));
    }
    let t_max = spec.truncation;
    let tail = envelope.tail_bound(s.re, t_max);
    if tail > 0.5 * spec.tolerance {
        return Err(Error::TailBound { bound: tail, tolerance: spec.tolerance, truncation: t_max });
    }
    let omega = s.im.abs() + envelope.frequency.abs();
    let quarter = if omega > 0.0 { std::f64::consts::FRAC_PI_2 / omega } else { f64::INFINITY };
    let width = quarter.min(1.0);
    let panels = (t_max / width).ceil() as usize;
    let width = t_max / panels as f64;

    let integrand = |t: f64| -> Result<Multivector> { Ok(h(t)?.scale((-s * t).exp())) };
    let head = |u: f64| -> Result<Multivector> { Ok(integrand(u * u)?.scale_real(2.0 * u)) };

    let run = |order: usize| -> Result<Multivector> {
        let mut acc = composite_gl(head, 0.0, width.sqrt(), 1, order)?;
        if panels > 1 {
            let rest = composite_gl(integrand, width, t_max, panels - 1, order)?;
            acc += rest;
        }
        Ok(acc)
    };
    let coarse = run(spec.order)?;
    let fine = run(spec.order + 8)?;
    let change = coarse.distance(&fine);
    if change + tail > spec.tolerance * (1.0 + fine.norm()) {
        return Err(Error::NonConvergence {
            method: "forward Laplace quadrature",
            change: change + tail,
            tolerance: spec.tolerance,
        });
    }
    Ok(fine)
}

/// One Talbot sum with `2n` midpoint nodes on `θ ∈ (−π, π)`.
fn talbot_sum<F>(f: &F, t: f64, n: usize, rho: f64) -> Result<Multivector>
where
    F: Fn(Complex64) -> Result<Multivector> + Sync,
{
    let r = rho / t;
    let terms: Vec<Multivector> = (0..2 * n)
        .into_par_iter()
        .map(|j| {
            let theta = std::f64::consts::PI * (j as f64 - n as f64 + 0.5) / n as f64;
            let cot = theta.cos() / theta.sin();
            let s = r * theta * Complex64::new(cot, 1.0);
            let ds = r * Complex64::new(cot - theta / theta.sin().powi(2), 1.0);
            let weight = (s * t).exp() * ds;
            Ok(f(s)?.scale(weight))
        })
        .collect::<Result<_>>()?;
    let mut iter = terms.into_iter();
    let mut acc = iter.next().expect("at least one node");
    for term in iter {
        acc += term;
    }
    let factor = Complex64::from(std::f64::consts::PI / n as f64) / (2.0 * std::f64::consts::PI * I);
    Ok(acc.scale(factor))
}

/// Talbot estimate together with its node-doubling disagreement.
#[derive(Clone, Debug)]
pub struct Inversion {
    pub value: Multivector,
    pub estimate: f64,
    pub radius: f64,
}

/// `L⁻¹[F](t)` at `0 < t ≤ 4`, with `N` and `2N` nodes.
pub fn inverse_laplace_detailed<F>(f: F, t: f64, spec: &QuadratureSpec) -> Result<Inversion>
where
    F: Fn(Complex64) -> Result<Multivector> + Sync,
{
    spec.validate()?;
    if !(t > 0.0 && t <= 4.0) {
        return Err(Error::OutOfRange(format!("inversion time must lie in (0, 4], got {t}")));
    }
    let rho = spec.contour.radius(spec.singularity_radius, t);
    let coarse = talbot_sum(&f, t, spec.nodes, rho)?;
    let fine = talbot_sum(&f, t, 2 * spec.nodes, rho)?;
    let estimate = coarse.distance(&fine);
    Ok(Inversion { value: fine, estimate, radius: rho })
}

/// `L⁻¹[F](t)`; fails when `N` and `2N` nodes disagree by more than the
/// tolerance (relative to `1 + |value|`).
pub fn inverse_laplace<F>(f: F, t: f64, spec: &QuadratureSpec) -> Result<Multivector>
where
    F: Fn(Complex64) -> Result<Multivector> + Sync,
{
    let inv = inverse_laplace_detailed(f, t, spec)?;
    if inv.estimate > spec.tolerance * (1.0 + inv.value.norm()) {
        return Err(Error::NonConvergence {
            method: "Talbot inversion",
            change: inv.estimate,
            tolerance: spec.tolerance,
        });
    }
    Ok(inv.value)
}

/// A time-domain function together with its closed-form transform.
pub struct TransformPair<'a> {
    pub time: &'a (dyn Fn(f64) -> Result<Multivector> + Sync),
    pub laplace: &'a (dyn Fn(Complex64) -> Result<Multivector> + Sync),
}

/// Outcome of [`convolve_check`].
#[derive(Clone, Debug)]
pub struct ConvolutionCheck {
    pub direct: Multivector,
    pub via_transform: Multivector,
    pub difference: f64,
}

impl ConvolutionCheck {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.difference <= 2.0 * tolerance * (1.0 + self.direct.norm())
    }
}

/// `∫₀^t g(t−τ) f(τ) dτ` by adaptive quadrature, compared against Talbot
/// inversion of the product `G(s)·F(s)` of the closed-form transforms.
pub fn convolve_check(g: &TransformPair<'_>, f: &TransformPair<'_>, t: f64, spec: &QuadratureSpec) -> Result<ConvolutionCheck> {
    let direct = convolve(g.time, f.time, t, spec.tolerance)?;
    let product = |s: Complex64| -> Result<Multivector> { (g.laplace)(s)?.geometric_product(&(f.laplace)(s)?) };
    let via_transform = inverse_laplace(product, t, spec)?;
    let difference = direct.distance(&via_transform);
    Ok(ConvolutionCheck { direct, via_transform, difference })
}

/// `∫₀^t g(t−τ) f(τ) dτ` (geometric product in that order).
pub fn convolve(
    g: &(dyn Fn(f64) -> Result<Multivector> + Sync),
    f: &(dyn Fn(f64) -> Result<Multivector> + Sync),
    t: f64,
    tolerance: f64,
) -> Result<Multivector> {
    let integrand = |tau: f64| -> Result<Multivector> { g(t - tau)?.geometric_product(&f(tau)?) };
    Ok(adaptive_gk(integrand, 0.0, t, tolerance * 0.1, 4000)?.value)
}

/// Errors of a forward/inverse round trip for a function with known transform.
#[derive(Clone, Debug)]
pub struct RoundTrip {
    /// Largest forward-transform error over the probe points `s`.
    pub forward_error: f64,
    /// Largest inversion error over the probe times `t`.
    pub inverse_error: f64,
}

/// Forward transform of `pair.time` against `pair.laplace` at real probe
/// points, and Talbot inversion of `pair.laplace` against `pair.time`.
///
/// The numeric forward transform is not usable at Talbot nodes (they lie
/// in `Re s ≤ 0`), so the two legs meet at the closed form.
pub fn round_trip(
    pair: &TransformPair<'_>,
    envelope: Envelope,
    probes_s: &[Complex64],
    probes_t: &[f64],
    spec: &QuadratureSpec,
) -> Result<RoundTrip> {
    let mut forward_error: f64 = 0.0;
    for &s in probes_s {
        let num = forward_laplace(pair.time, s, envelope, spec)?;
        forward_error = forward_error.max(num.distance(&(pair.laplace)(s)?));
    }
    let mut inverse_error: f64 = 0.0;
    for &t in probes_t {
        let num = inverse_laplace(pair.laplace, t, spec)?;
        inverse_error = inverse_error.max(num.distance(&(pair.time)(t)?));
    }
    Ok(RoundTrip { forward_error, inverse_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_j, gamma_fn};

    fn sc(v: Complex64) -> Multivector {
        Multivector::scalar(1, v)
    }

    fn real(v: f64) -> Multivector {
        Multivector::real_scalar(1, v)
    }

    #[test]
    fn forward_examples() {
        let spec = QuadratureSpec::default();
        let s = Complex64::from(1.0);
        let a = forward_laplace(|t| Ok(real((-2.0 * t).exp())), s, Envelope::new(1.0, 0.0, 0.0), &spec).unwrap();
        assert!((a.scalar_part() - 1.0 / 3.0).norm() < 1e-12);
        let b = forward_laplace(|t| Ok(real(bessel_j(0, t)?)), s, Envelope::new(1.0, 0.0, 1.0), &spec).unwrap();
        assert!((b.scalar_part() - 0.5f64.sqrt()).norm() < 1e-11);
        let c = forward_laplace(|t| Ok(real(t * (-t).exp())), s, Envelope::new(1.0, 0.0, 0.0), &spec).unwrap();
        assert!((c.scalar_part() - 0.25).norm() < 1e-12);
    }

    #[test]
    fn forward_half_integer_power() {
        // ∫ t^{-1/2} e^{-t} e^{-2it} dt = Γ(1/2)/(1+2i)^{1/2}
        let spec = QuadratureSpec::default();
        let s = Complex64::from(1.0);
        let v = forward_laplace(
            |t| Ok(sc(Complex64::new(0.0, -2.0 * t).exp() / t.sqrt())),
            s,
            Envelope::new(1e3, 0.0, 2.0),
            &spec,
        )
        .unwrap();
        let expect = gamma_fn(0.5).unwrap() / Complex64::new(1.0, 2.0).sqrt();
        assert!((v.scalar_part() - expect).norm() < 1e-10, "{}", v.scalar_part());
    }

    #[test]
    fn tail_bound_error() {
        let spec = QuadratureSpec { truncation: 5.0, ..Default::default() };
        let r = forward_laplace(|_| Ok(real(1.0)), Complex64::from(0.5), Envelope::new(1.0, 0.0, 0.0), &spec);
        assert!(matches!(r, Err(Error::TailBound { .. })));
    }

    #[test]
    fn inverse_examples() {
        let spec = QuadratureSpec::default().with_radius(1.0);
        let a = inverse_laplace(|s| Ok(sc(1.0 / (s + 2.0))), 1.0, &spec).unwrap();
        assert!((a.scalar_part() - (-2.0f64).exp()).norm() < 1e-10);
        let b = inverse_laplace(|s| Ok(sc(((s - I).sqrt() * (s + I).sqrt()).inv())), 1.0, &spec).unwrap();
        assert!((b.scalar_part() - bessel_j(0, 1.0).unwrap()).norm() < 1e-10);
        let c = inverse_laplace(|s| Ok(sc(1.0 / ((s + 1.0) * (s + 1.0)))), 1.0, &spec).unwrap();
        assert!((c.scalar_part() - (-1.0f64).exp()).norm() < 1e-10);
    }

    #[test]
    fn inverse_oscillatory_half_power() {
        let xi = 3.0;
        let spec = QuadratureSpec::default().with_radius(xi);
        let v = inverse_laplace(|s| Ok(sc((s + I * xi).powf(-1.5))), 1.0, &spec).unwrap();
        let expect = Complex64::new(0.0, -xi).exp() / gamma_fn(1.5).unwrap();
        assert!((v.scalar_part() - expect).norm() < 1e-10);
    }

    #[test]
    fn round_trips() {
        let spec = QuadratureSpec::default().with_radius(1.0).with_tolerance(1e-10);
        let probes_s = [Complex64::from(0.7), Complex64::from(1.5), Complex64::new(2.0, 1.0)];
        let probes_t = [0.5, 1.0, 2.0];
        let e_time = |t: f64| Ok(real((-t).exp()));
        let e_lap = |s: Complex64| Ok(sc(1.0 / (s + 1.0)));
        let j_time = |t: f64| Ok(real(bessel_j(0, t)?));
        let j_lap = |s: Complex64| Ok(sc(((s - I).sqrt() * (s + I).sqrt()).inv()));
        let p_time = |t: f64| Ok(real(t * (-2.0 * t).exp()));
        let p_lap = |s: Complex64| Ok(sc(1.0 / ((s + 2.0) * (s + 2.0))));
        let pairs: [(TransformPair<'_>, Envelope); 3] = [
            (TransformPair { time: &e_time, laplace: &e_lap }, Envelope::new(1.0, 0.0, 0.0)),
            (TransformPair { time: &j_time, laplace: &j_lap }, Envelope::new(1.0, 0.0, 1.0)),
            (TransformPair { time: &p_time, laplace: &p_lap }, Envelope::new(1.0, 0.0, 0.0)),
        ];
        for (pair, env) in &pairs {
            let rt = round_trip(pair, *env, &probes_s, &probes_t, &spec).unwrap();
            assert!(rt.forward_error < 1e-8 && rt.inverse_error < 1e-8, "{rt:?}");
        }
    }

    #[test]
    fn convolution_of_ones_and_plane_wave_with_bessel() {
        let spec = QuadratureSpec::default().with_radius(2.0);
        let one_t = |_t: f64| Ok(real(1.0));
        let one_s = |s: Complex64| Ok(sc(s.inv()));
        let one = TransformPair { time: &one_t, laplace: &one_s };
        let c = convolve_check(&one, &one, 1.0, &spec).unwrap();
        assert!((c.direct.scalar_part() - 1.0).norm() < 1e-12);
        assert!(c.passes(spec.tolerance), "{c:?}");

        let (xi, z) = (0.8, 1.7);
        let pw_t = move |t: f64| Ok(sc(Complex64::new(0.0, -xi * t).exp()));
        let pw_s = move |s: Complex64| Ok(sc((s + I * xi).inv()));
        let j_t = move |t: f64| Ok(real(bessel_j(0, z * t)?));
        let j_s = move |s: Complex64| Ok(sc(((s - I * z).sqrt() * (s + I * z).sqrt()).inv()));
        let pw = TransformPair { time: &pw_t, laplace: &pw_s };
        let jj = TransformPair { time: &j_t, laplace: &j_s };
        let spec = spec.with_radius(z);
        let c1 = convolve_check(&pw, &jj, 1.0, &spec).unwrap();
        assert!(c1.passes(spec.tolerance), "{c1:?}");
        let c2 = convolve_check(&jj, &pw, 1.0, &spec).unwrap();
        assert!(c1.direct.distance(&c2.direct) < 1e-10);
    }

    #[test]
    fn spec_validation_and_defaults_from_json() {
        let s: QuadratureSpec = serde_json::from_str(r#"{"nodes": 64}"#).unwrap();
        assert_eq!(s.nodes, 64);
        assert_eq!(s.truncation, QuadratureSpec::default().truncation);
        assert!(QuadratureSpec { nodes: 8, ..Default::default() }.validate().is_err());
        assert!(QuadratureSpec { tolerance: 0.0, ..Default::default() }.validate().is_err());
    }
}
