//! Closed forms in the Laplace variable `s`.
//!
//! Every object here is the Laplace transform (in `t`) of
//! `t^{m/2-1}·(something)(tx, y)`. Writing `ξ = (x,y)`, `z = |x||y|` and
//! `√+ = √(s² + z²)`, the building blocks are
//!
//! ```text
//! f   = (s+√+ − iyx) / (√+ (s+iξ)^{m/2})       g   = (√+ − s + iyx) / (√+ (s+iξ)^{m/2})
//! f_α = (s+√+ + yx)  / (√+ (√+−ξ)^{m/2})       g_α = (i(√+−s) + iyx) / (√+ (√+−ξ)^{m/2})
//! f_β = (s+√+ + iyx) / (√+ (s−iξ)^{m/2})       g_β = (s−√+ + iyx) / (√+ (s−iξ)^{m/2})
//! f_γ = (s+√+ − yx)  / (√+ (√+ +ξ)^{m/2})      g_γ = (i(s−√+) + iyx) / (√+ (√+ +ξ)^{m/2})
//! ```
//!
//! with each `g_•` equal to `(iy/(s+√+))·f_•·x`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;

use crate::clifford::{Multivector, VectorM};
use crate::error::{Error, Result};
use crate::intpoly::{phase, row_a1, row_a2, IntPoly};
use crate::specfun::gamma_fn;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The `(s, x, y)` point at which s-domain forms are evaluated.
#[derive(Clone, Debug)]
pub struct LaplaceContext {
    s: Complex64,
    x: Multivector,
    y: Multivector,
    m: usize,
    xi: f64,
    z: f64,
    sqrt_plus: Complex64,
    yx: Multivector,
}

impl LaplaceContext {
    /// Context on the right half-plane `Re s > 0`.
    pub fn new(s: Complex64, x: &VectorM, y: &VectorM) -> Result<Self> {
        if !(s.re > 0.0) || !s.im.is_finite() {
            return Err(Error::OutOfRange(format!("Re(s) must be positive, got s = {s}")));
        }
        Self::continued(s, x, y)
    }

    /// Context anywhere off the branch cuts of `√+`.
    ///
    /// `√+` is taken as `√(s−iz)·√(s+iz)`. On `Re s > 0` this is the principal
    /// root of `s²+z²`; elsewhere it is the analytic continuation with cuts
    /// running left from `±iz`, which is what contour inversion needs.
    pub fn continued(s: Complex64, x: &VectorM, y: &VectorM) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
        }
        if !s.re.is_finite() || !s.im.is_finite() {
            return Err(Error::OutOfRange(format!("non-finite s = {s}")));
        }
        if x.coords().iter().chain(y.coords()).any(|c| !c.is_finite()) {
            return Err(Error::OutOfRange("non-finite x or y".into()));
        }
        let m = x.dim();
        let xm = x.to_multivector();
        let ym = y.to_multivector();
        let yx = ym.geometric_product(&xm)?;
        let z = x.norm() * y.norm();
        let xi = crate::clifford::inner(x, y)?;
        let sqrt_plus = (s - I * z).sqrt() * (s + I * z).sqrt();
        if sqrt_plus.norm() == 0.0 {
            return Err(Error::Singular(format!("√(s²+|x|²|y|²) vanishes at s = {s}")));
        }
        Ok(LaplaceContext { s, x: xm, y: ym, m, xi, z, sqrt_plus, yx })
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// `(x, y)`.
    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// `|x||y|`.
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn sqrt_plus(&self) -> Complex64 {
        self.sqrt_plus
    }

    /// The geometric product `yx`.
    pub fn yx(&self) -> &Multivector {
        &self.yx
    }

    /// `c + d·yx` as a multivector.
    fn affine(&self, c: Complex64, d: Complex64) -> Multivector {
        let mut out = self.yx.scale(d);
        let one = Multivector::scalar(self.m, c);
        out += one;
        out
    }

    fn divide(&self, num: Multivector, base: Complex64, what: &str) -> Result<Multivector> {
        let den = self.sqrt_plus * half_power(base, self.m);
        if den.norm() == 0.0 || !den.is_finite() {
            return Err(Error::Singular(format!("{what}: denominator vanishes at s = {}", self.s)));
        }
        let out = num.scale(den.inv());
        if !out.is_finite() {
            return Err(Error::Singular(format!("{what}: overflow at s = {}", self.s)));
        }
        Ok(out)
    }

    /// `(iy/(s+√+)) · a · x`.
    pub fn g_transfer(&self, a: &Multivector) -> Result<Multivector> {
        let r = self.s + self.sqrt_plus;
        if r.norm() == 0.0 {
            return Err(Error::Singular(format!("s + √+ vanishes at s = {}", self.s)));
        }
        let left = self.y.scale(I / r);
        left.geometric_product(a)?.geometric_product(&self.x)
    }
}

/// Principal `w^{m/2}`.
pub fn half_power(w: Complex64, m: usize) -> Complex64 {
    if m % 2 == 0 {
        w.powi((m / 2) as i32)
    } else {
        w.sqrt().powi(m as i32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    Plain,
    Alpha,
    Beta,
    Gamma,
}

impl Tag {
    pub const ALL: [Tag; 4] = [Tag::Plain, Tag::Alpha, Tag::Beta, Tag::Gamma];

    /// Angle `p` with `F_p = f_tag`.
    pub fn f_angle(self) -> f64 {
        match self {
            Tag::Plain => 0.0,
            Tag::Alpha => -FRAC_PI_2,
            Tag::Beta => std::f64::consts::PI,
            Tag::Gamma => FRAC_PI_2,
        }
    }

    /// Angle `p` with `G_p = g_tag`. The α and γ angles are swapped
    /// relative to the `f` ladder.
    pub fn g_angle(self) -> f64 {
        match self {
            Tag::Alpha => FRAC_PI_2,
            Tag::Gamma => -FRAC_PI_2,
            other => other.f_angle(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    F,
    G,
}

/// One of `f, f_α, f_β, f_γ, g, g_α, g_β, g_γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormVariant {
    pub tag: Tag,
    pub part: Part,
}

impl FormVariant {
    pub const fn new(tag: Tag, part: Part) -> Self {
        FormVariant { tag, part }
    }

    pub fn all() -> impl Iterator<Item = FormVariant> {
        [Part::F, Part::G]
            .into_iter()
            .flat_map(|part| Tag::ALL.into_iter().map(move |tag| FormVariant { tag, part }))
    }
}

impl fmt::Display for FormVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.part {
            Part::F => "f",
            Part::G => "g",
        };
        match self.tag {
            Tag::Plain => write!(f, "{p}"),
            Tag::Alpha => write!(f, "{p}_alpha"),
            Tag::Beta => write!(f, "{p}_beta"),
            Tag::Gamma => write!(f, "{p}_gamma"),
        }
    }
}

/// Evaluates the closed rational/algebraic expression of a form.
pub fn eval_form(v: FormVariant, ctx: &LaplaceContext) -> Result<Multivector> {
    let s = ctx.s;
    let sp = ctx.sqrt_plus;
    let xi = Complex64::from(ctx.xi);
    let r = s + sp;
    let (num, base) = match (v.part, v.tag) {
        (Part::F, Tag::Plain) => (ctx.affine(r, -I), s + I * xi),
        (Part::F, Tag::Alpha) => (ctx.affine(r, Complex64::from(1.0)), sp - xi),
        (Part::F, Tag::Beta) => (ctx.affine(r, I), s - I * xi),
        (Part::F, Tag::Gamma) => (ctx.affine(r, Complex64::from(-1.0)), sp + xi),
        (Part::G, Tag::Plain) => (ctx.affine(sp - s, I), s + I * xi),
        (Part::G, Tag::Alpha) => (ctx.affine(I * (sp - s), I), sp - xi),
        (Part::G, Tag::Beta) => (ctx.affine(s - sp, I), s - I * xi),
        (Part::G, Tag::Gamma) => (ctx.affine(I * (s - sp), I), sp + xi),
    };
    ctx.divide(num, base, &v.to_string())
}

/// First (`F`) or second (`G`) part of the fractional family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FractionalPart {
    F,
    G,
}

/// `F_p` or `G_p`:
///
/// ```text
/// F_p = (s+√+ − i e^{−ip} yx) / (√+ (e^{−ip}(s cos p + i√+ sin p + iξ))^{m/2})
/// G_p = −e^{ip} (s−√+ − i e^{−ip} yx) / (√+ (e^{ip}(s cos p − i√+ sin p + iξ))^{m/2})
/// ```
///
/// The bracket is multiplied out before the principal power is taken.
pub fn eval_fractional(p: f64, part: FractionalPart, ctx: &LaplaceContext) -> Result<Multivector> {
    let s = ctx.s;
    let sp = ctx.sqrt_plus;
    let xi = Complex64::from(ctx.xi);
    let (c, sn) = (p.cos(), p.sin());
    let em = Complex64::from_polar(1.0, -p);
    let ep = Complex64::from_polar(1.0, p);
    match part {
        FractionalPart::F => {
            let num = ctx.affine(s + sp, -I * em);
            let base = em * (s * c + I * sp * sn + I * xi);
            ctx.divide(num, base, "F_p")
        }
        FractionalPart::G => {
            let num = ctx.affine(-ep * (s - sp), ep * I * em);
            let base = ep * (s * c - I * sp * sn + I * xi);
            ctx.divide(num, base, "G_p")
        }
    }
}

/// `C = (f, f_α, f_β, f_γ)`.
pub fn c_vector(ctx: &LaplaceContext) -> Result<[Multivector; 4]> {
    let f = |tag| eval_form(FormVariant::new(tag, Part::F), ctx);
    Ok([f(Tag::Plain)?, f(Tag::Alpha)?, f(Tag::Beta)?, f(Tag::Gamma)?])
}

/// The 4×4 matrix `B` taking `C` to `4·(f₀, f₁, f₂, f₃)`.
pub fn b_matrix() -> [[Complex64; 4]; 4] {
    let o = Complex64::from(1.0);
    let n = Complex64::from(-1.0);
    [[o, o, o, o], [o, -I, n, I], [o, n, o, n], [o, I, n, -I]]
}

/// Monogenic-degree classes of `f`: `f_k` collects the `M_{4n+k}` terms.
pub fn split_components(ctx: &LaplaceContext) -> Result<[Multivector; 4]> {
    let c = c_vector(ctx)?;
    let b = b_matrix();
    Ok(std::array::from_fn(|k| {
        let mut acc = Multivector::zero(ctx.m);
        for (j, cj) in c.iter().enumerate() {
            acc.add_scaled(cj, b[k][j] * 0.25);
        }
        acc
    }))
}

/// Row vectors `A¹B` and `A²B`: the weights on `(f, f_α, f_β, f_γ)` in the
/// `f`-part and in the `g`-part of the kernel (before the overall `Γ(m/2)/8`).
pub fn assembly_weights(g: &IntPoly, m: usize) -> ([Complex64; 4], [Complex64; 4]) {
    let b = b_matrix();
    let times_b = |a: [Complex64; 4]| -> [Complex64; 4] {
        std::array::from_fn(|j| (0..4).map(|k| a[k] * b[k][j]).sum())
    };
    (times_b(row_a1(g).to_complex()), times_b(row_a2(g, m).to_complex()))
}

/// `Γ(m/2)/2 · [Σ_k i^{G(−k)} f_k + (iy/(s+√+)) (Σ_k i^{G(m−1+k)} f_k) x]`:
/// the phase of `e^{iπ/2·G(Γ_y)}` applied to each monogenic class.
pub fn kernel_laplace_eigen(g: &IntPoly, ctx: &LaplaceContext) -> Result<Multivector> {
    let parts = split_components(ctx)?;
    let m = ctx.m;
    let mut first = Multivector::zero(m);
    let mut second = Multivector::zero(m);
    for (k, fk) in parts.iter().enumerate() {
        let k = k as i64;
        first.add_scaled(fk, phase(g, -k).to_complex());
        second.add_scaled(fk, phase(g, m as i64 - 1 + k).to_complex());
    }
    let mut out = first;
    out += ctx.g_transfer(&second)?;
    Ok(out.scale_real(gamma_fn(m as f64 / 2.0)? / 2.0))
}

/// `Γ(m/2)/8 · (A¹BCᵀ + (iy/(s+√+)) A²BCᵀ x)`.
pub fn kernel_laplace_th5(g: &IntPoly, ctx: &LaplaceContext) -> Result<Multivector> {
    let c = c_vector(ctx)?;
    let (w1, w2) = assembly_weights(g, ctx.m);
    let mut first = Multivector::zero(ctx.m);
    let mut second = Multivector::zero(ctx.m);
    for j in 0..4 {
        first.add_scaled(&c[j], w1[j]);
        second.add_scaled(&c[j], w2[j]);
    }
    let mut out = first;
    out += ctx.g_transfer(&second)?;
    Ok(out.scale_real(gamma_fn(ctx.m as f64 / 2.0)? / 8.0))
}

/// The `G = x²` closed form written with `U¹..U⁴`, evaluated exactly as
/// printed (kept for auditing against [`kernel_laplace_eigen`]):
///
/// ```text
/// Γ(m/2)/(4√+) · ((1+i)U¹ + (1−i)U² + e^{iπ/2(m−1)²}((1+i)U³ + (1−i)U⁴))
/// U¹ = (s+√+ − iyx)/(s+iξ)^{m/2}          U² = (s+√+ + iyx)/(s−iξ)^{m/2}
/// U³ = (σ(√+−s) + iyx)/(s+σiξ)^{m/2}      U⁴ = (σ(s−√+) + iyx)/(s−σiξ)^{m/2}
/// ```
///
/// with `σ = (−1)^{m−1}`.
pub fn kernel_laplace_th2_printed(ctx: &LaplaceContext) -> Result<Multivector> {
    let m = ctx.m;
    let s = ctx.s;
    let sp = ctx.sqrt_plus;
    let xi = Complex64::from(ctx.xi);
    let sigma = if m % 2 == 1 { 1.0 } else { -1.0 };
    let u = |num: Multivector, base: Complex64| -> Result<Multivector> {
        let den = half_power(base, m);
        if den.norm() == 0.0 {
            return Err(Error::Singular(format!("U-term denominator vanishes at s = {s}")));
        }
        Ok(num.scale(den.inv()))
    };
    let u1 = u(ctx.affine(s + sp, -I), s + I * xi)?;
    let u2 = u(ctx.affine(s + sp, I), s - I * xi)?;
    let u3 = u(ctx.affine(sigma * (sp - s), I), s + sigma * I * xi)?;
    let u4 = u(ctx.affine(sigma * (s - sp), I), s - sigma * I * xi)?;
    // e^{iπ/2 (m−1)²}: (m−1)² ≡ 0 or 1 mod 4.
    let twist = if m % 2 == 1 { Complex64::from(1.0) } else { I };
    let (p, q) = (Complex64::new(1.0, 1.0), Complex64::new(1.0, -1.0));
    let mut out = u1.scale(p);
    out.add_scaled(&u2, q);
    out.add_scaled(&u3, twist * p);
    out.add_scaled(&u4, twist * q);
    Ok(out.scale(gamma_fn(m as f64 / 2.0)? / (4.0 * sp)))
}

/// The `m = 2` reduction as printed:
/// `(1/(2√+)) (√+/(s−iξ) + (s − iyx)/(s+iξ))`.
pub fn laplace_m2_display_printed(ctx: &LaplaceContext) -> Result<Multivector> {
    if ctx.m != 2 {
        return Err(Error::UnsupportedDimension(ctx.m, "m = 2 only"));
    }
    let s = ctx.s;
    let sp = ctx.sqrt_plus;
    let xi = Complex64::from(ctx.xi);
    let a = sp / (s - I * xi);
    let mut out = ctx.affine(s, -I).scale((s + I * xi).inv());
    out += Multivector::scalar(2, a);
    Ok(out.scale((2.0 * sp).inv()))
}

/// `Γ(m/2)/(s+iξ)^{m/2}`: transform of `t^{m/2−1} e^{−itξ}`.
pub fn plane_wave_transform(ctx: &LaplaceContext, sign: f64) -> Result<Complex64> {
    let base = ctx.s + sign * I * ctx.xi;
    let den = half_power(base, ctx.m);
    if den.norm() == 0.0 {
        return Err(Error::Singular(format!("(s ± iξ) vanishes at s = {}", ctx.s)));
    }
    Ok(gamma_fn(ctx.m as f64 / 2.0)? / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::wedge;
    use proptest::prelude::*;

    fn ctx(s: Complex64, x: &[f64], y: &[f64]) -> LaplaceContext {
        LaplaceContext::new(s, &VectorM::new(x.to_vec()).unwrap(), &VectorM::new(y.to_vec()).unwrap())
            .unwrap()
    }

    fn form(tag: Tag, part: Part, c: &LaplaceContext) -> Multivector {
        eval_form(FormVariant::new(tag, part), c).unwrap()
    }

    fn arb_ctx() -> impl Strategy<Value = LaplaceContext> {
        (2usize..=6)
            .prop_flat_map(|m| {
                (
                    0.2f64..3.0,
                    -3.0f64..3.0,
                    prop::collection::vec(-2.0f64..2.0, m),
                    prop::collection::vec(-2.0f64..2.0, m),
                )
            })
            .prop_map(|(re, im, x, y)| ctx(Complex64::new(re, im), &x, &y))
    }

    fn arb_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-9i64..9, 1..6).prop_map(IntPoly::new)
    }

    #[test]
    fn m2_orthogonal_example() {
        let c = ctx(Complex64::from(1.0), &[1.0, 0.0], &[0.0, 1.0]);
        let f = form(Tag::Plain, Part::F, &c);
        let w = wedge(&VectorM::new(vec![1.0, 0.0]).unwrap(), &VectorM::new(vec![0.0, 1.0]).unwrap())
            .unwrap();
        let r2 = 2f64.sqrt();
        let mut expect = Multivector::real_scalar(2, (1.0 + r2) / r2);
        expect.add_scaled(&w, I / r2);
        assert!(f.distance(&expect) < 1e-14, "{f:?}");
    }

    #[test]
    fn fractional_ladder_small() {
        let c = ctx(Complex64::new(0.7, 0.4), &[0.3, -1.1, 0.5], &[1.2, 0.4, -0.8]);
        for tag in Tag::ALL {
            let f = eval_fractional(tag.f_angle(), FractionalPart::F, &c).unwrap();
            let g = eval_fractional(tag.g_angle(), FractionalPart::G, &c).unwrap();
            assert!(f.distance(&form(tag, Part::F, &c)) < 1e-12, "{tag:?}");
            assert!(g.distance(&form(tag, Part::G, &c)) < 1e-12, "{tag:?}");
        }
    }

    #[test]
    fn clifford_fourier_combination_in_dimension_5() {
        let c = ctx(
            Complex64::new(1.3, -0.6),
            &[0.4, -0.2, 1.0, 0.3, -0.7],
            &[-0.5, 0.9, 0.1, 0.6, 0.2],
        );
        let k = kernel_laplace_eigen(&IntPoly::parse("x").unwrap(), &c).unwrap();
        let mut expect = form(Tag::Gamma, Part::F, &c);
        expect += form(Tag::Alpha, Part::G, &c);
        let expect = expect.scale_real(gamma_fn(2.5).unwrap() / 2.0);
        assert!(k.distance(&expect) < 1e-12);
    }

    #[test]
    fn m2_display_is_not_the_eigen_kernel() {
        let c = ctx(Complex64::from(1.0), &[1.0, 0.0], &[0.0, 1.0]);
        let eig = kernel_laplace_eigen(&IntPoly::parse("x^2").unwrap(), &c).unwrap();
        let disp = laplace_m2_display_printed(&c).unwrap();
        assert!(eig.distance(&disp) > 1e-3);
    }

    #[test]
    fn continued_context_matches_principal_on_right_half_plane() {
        let x = VectorM::new(vec![0.5, 1.0, -0.2]).unwrap();
        let y = VectorM::new(vec![1.5, -0.3, 0.9]).unwrap();
        let s = Complex64::new(0.3, 2.5);
        let a = LaplaceContext::new(s, &x, &y).unwrap();
        let principal = (s * s + a.z() * a.z()).sqrt();
        assert!((a.sqrt_plus() - principal).norm() < 1e-13);
        assert!(LaplaceContext::new(Complex64::new(-0.1, 0.0), &x, &y).is_err());
        assert!(LaplaceContext::continued(Complex64::new(-0.1, 3.0), &x, &y).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn cancellation_identities(c in arb_ctx()) {
            let m = c.dim();
            let mut sum = form(Tag::Plain, Part::F, &c);
            sum += form(Tag::Plain, Part::G, &c);
            let expect = Multivector::scalar(m, 2.0 / half_power(c.s() + I * c.xi(), m));
            prop_assert!(sum.distance(&expect) <= 1e-10 * (1.0 + expect.norm()));
            let diff = form(Tag::Beta, Part::F, &c) - form(Tag::Beta, Part::G, &c);
            let expect = Multivector::scalar(m, 2.0 / half_power(c.s() - I * c.xi(), m));
            prop_assert!(diff.distance(&expect) <= 1e-10 * (1.0 + expect.norm()));
        }

        #[test]
        fn g_forms_are_transfers_of_f_forms(c in arb_ctx()) {
            for tag in Tag::ALL {
                let f = form(tag, Part::F, &c);
                let g = form(tag, Part::G, &c);
                let t = c.g_transfer(&f).unwrap();
                prop_assert!(g.distance(&t) <= 1e-12 * (1.0 + g.norm()), "{:?}", tag);
            }
        }

        #[test]
        fn fractional_specialisations(c in arb_ctx()) {
            for tag in Tag::ALL {
                let f = eval_fractional(tag.f_angle(), FractionalPart::F, &c).unwrap();
                let g = eval_fractional(tag.g_angle(), FractionalPart::G, &c).unwrap();
                let fe = form(tag, Part::F, &c);
                let ge = form(tag, Part::G, &c);
                prop_assert!(f.distance(&fe) <= 1e-12 * (1.0 + fe.norm()));
                prop_assert!(g.distance(&ge) <= 1e-12 * (1.0 + ge.norm()));
            }
        }

        #[test]
        fn split_reconstructs(c in arb_ctx()) {
            let [f0, f1, f2, f3] = split_components(&c).unwrap();
            let f = form(Tag::Plain, Part::F, &c);
            let fa = form(Tag::Alpha, Part::F, &c);
            let sum = f0.clone() + f1.clone() + f2.clone() + f3.clone();
            prop_assert!(sum.distance(&f) <= 1e-12 * (1.0 + f.norm()));
            let mut alt = f0;
            alt.add_scaled(&f1, I);
            alt.add_scaled(&f2, Complex64::from(-1.0));
            alt.add_scaled(&f3, -I);
            prop_assert!(alt.distance(&fa) <= 1e-12 * (1.0 + fa.norm()));
        }

        #[test]
        fn th5_assembly_equals_eigen(g in arb_poly(), c in arb_ctx()) {
            let a = kernel_laplace_eigen(&g, &c).unwrap();
            let b = kernel_laplace_th5(&g, &c).unwrap();
            prop_assert!(a.distance(&b) <= 1e-12 * (1.0 + a.norm()));
        }

        #[test]
        fn trivial_and_period_four_polys_give_plane_wave(c in arb_ctx(), k in -3i64..3) {
            let expect = Multivector::scalar(c.dim(), plane_wave_transform(&c, 1.0).unwrap());
            for g in [IntPoly::zero(), IntPoly::monomial(4 * k, 1)] {
                let a = kernel_laplace_eigen(&g, &c).unwrap();
                prop_assert!(a.distance(&expect) <= 1e-11 * (1.0 + expect.norm()));
            }
        }

        #[test]
        fn square_in_even_dimension(c in arb_ctx()) {
            prop_assume!(c.dim() % 2 == 0);
            let a = kernel_laplace_eigen(&IntPoly::monomial(1, 2), &c).unwrap();
            let p = plane_wave_transform(&c, 1.0).unwrap();
            let q = plane_wave_transform(&c, -1.0).unwrap();
            let expect = Multivector::scalar(
                c.dim(),
                Complex64::new(0.5, 0.5) * p + Complex64::new(0.5, -0.5) * q,
            );
            prop_assert!(a.distance(&expect) <= 1e-11 * (1.0 + expect.norm()));
        }

        #[test]
        fn printed_u_form_matches_eigen_for_square(c in arb_ctx()) {
            let a = kernel_laplace_eigen(&IntPoly::monomial(1, 2), &c).unwrap();
            let b = kernel_laplace_th2_printed(&c).unwrap();
            prop_assert!(a.distance(&b) <= 1e-11 * (1.0 + a.norm()));
        }

        #[test]
        fn bounded_family_weights_skip_alpha_gamma(g in arb_poly(), m in 2usize..=8) {
            prop_assume!(crate::intpoly::is_bounded_family(&g));
            let (w1, w2) = assembly_weights(&g, m);
            for w in [w1, w2] {
                prop_assert!(w[1].norm() < 1e-15 && w[3].norm() < 1e-15);
            }
        }
    }
}
