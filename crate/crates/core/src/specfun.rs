//! Bessel functions of integer order, the Gamma function and generalized
//! Laguerre polynomials.
//!
//! `J_n(z)` uses the ascending series while its terms decrease from the
//! start (`z ≤ 1` or `(z/2)² ≤ n+1`), where there is no cancellation, and
//! Miller's backward recurrence normalized by `J_0 + 2ΣJ_{2k} = 1` otherwise.
//! No asymptotic expansions are used; inputs outside the supported range are
//! rejected.

use crate::error::{Error, Result};

pub const MAX_BESSEL_ORDER: usize = 400;
pub const MAX_BESSEL_ARG: f64 = 250.0;

fn check_bessel_args(n: usize, z: f64) -> Result<()> {
    if n > MAX_BESSEL_ORDER {
        return Err(Error::OutOfRange(format!(
            "Bessel order {n} exceeds {MAX_BESSEL_ORDER}"
        )));
    }
    if !(0.0..=MAX_BESSEL_ARG).contains(&z) {
        return Err(Error::OutOfRange(format!(
            "Bessel argument {z} outside [0, {MAX_BESSEL_ARG}]"
        )));
    }
    Ok(())
}

/// `J_n(z)` for `0 ≤ z ≤ 250`, `n ≤ 400`.
pub fn bessel_j(n: usize, z: f64) -> Result<f64> {
    check_bessel_args(n, z)?;
    if z == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let h = 0.5 * z;
    if z <= 1.0 || h * h <= (n + 1) as f64 {
        Ok(bessel_series(n, z))
    } else {
        Ok(miller(n, z)[n])
    }
}

/// `J_0(z), …, J_nmax(z)` from one backward recurrence.
pub fn bessel_j_all(nmax: usize, z: f64) -> Result<Vec<f64>> {
    check_bessel_args(nmax, z)?;
    if z == 0.0 {
        let mut v = vec![0.0; nmax + 1];
        v[0] = 1.0;
        return Ok(v);
    }
    let mut v = miller(nmax, z);
    v.truncate(nmax + 1);
    Ok(v)
}

fn bessel_series(n: usize, z: f64) -> f64 {
    let h = 0.5 * z;
    let mut term = 1.0;
    for j in 1..=n {
        term *= h / j as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = -h * h;
    let mut sum = term;
    let mut k = 1usize;
    loop {
        term *= q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        k += 1;
    }
    sum
}

/// Backward recurrence; returns at least `nmax + 1` normalized values.
fn miller(nmax: usize, z: f64) -> Vec<f64> {
    let top = nmax.max(z.ceil() as usize);
    let start = {
        let s = top + ((160 * top) as f64).sqrt() as usize + 20;
        s + (s & 1)
    };
    let mut vals = vec![0.0f64; start + 2];
    let mut next = 0.0f64;
    let mut cur = 1e-300f64;
    let mut norm = 0.0f64;
    let two_over_z = 2.0 / z;
    for k in (1..=start).rev() {
        let prev = k as f64 * two_over_z * cur - next;
        next = cur;
        cur = prev;
        vals[k - 1] = cur;
        vals[k] = next;
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            for v in vals.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
        }
    }
    norm += vals[0];
    for v in &mut vals {
        *v /= norm;
    }
    vals
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(x)` for `x > 0`. Integers and half-integers are computed exactly by
/// recurrence; other arguments use the Lanczos approximation.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::OutOfRange(format!("gamma requires x > 0, got {x}")));
    }
    if x > 171.6 {
        return Err(Error::OutOfRange(format!("gamma overflows at x = {x}")));
    }
    let twice = 2.0 * x;
    if twice.fract() == 0.0 && twice <= 340.0 {
        let (mut acc, mut k) = if x.fract() == 0.0 {
            (1.0, 1.0)
        } else {
            (std::f64::consts::PI.sqrt(), 0.5)
        };
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return pi / ((pi * x).sin() * lanczos(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Generalized Laguerre polynomial `L_p^α(t)` by the three-term recurrence.
pub fn laguerre(p: usize, alpha: f64, t: f64) -> f64 {
    let mut prev = 1.0;
    if p == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - t;
    for k in 1..p {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - t) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// `(1/π)∫_0^π cos(nt − z sin t) dt`, periodic trapezoid rule.
    fn bessel_integral(n: usize, z: f64) -> f64 {
        let nodes = 400 + 2 * (n + z.ceil() as usize);
        let h = 2.0 * PI / nodes as f64;
        let s: f64 = (0..nodes)
            .map(|k| {
                let t = k as f64 * h;
                (n as f64 * t - z * t.sin()).cos()
            })
            .sum();
        s * h / (2.0 * PI)
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j_all(3, 0.0).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn first_zero_of_j0() {
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if bessel_integral(0, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!(bessel_j(0, root).unwrap().abs() <= 1e-10);
    }

    #[test]
    fn matches_integral_representation() {
        for n in [0usize, 1, 2, 5, 13, 20, 45] {
            for z in [0.1, 0.9, 1.7, 4.0, 11.3, 25.0, 49.0, 99.5] {
                let a = bessel_j(n, z).unwrap();
                let b = bessel_integral(n, z);
                assert!((a - b).abs() < 1e-12, "J_{n}({z}): {a} vs {b}");
            }
        }
    }

    #[test]
    fn all_orders_agree_with_single_order() {
        for z in [0.3, 2.0, 17.0, 80.0] {
            let all = bessel_j_all(60, z).unwrap();
            for (n, v) in all.iter().enumerate() {
                assert!((v - bessel_j(n, z).unwrap()).abs() < 1e-13, "n={n} z={z}");
            }
        }
    }

    #[test]
    fn large_order_small_argument_underflows_cleanly() {
        let v = bessel_j(300, 2.0).unwrap();
        assert!((0.0..1e-300).contains(&v));
        assert!(bessel_j(401, 1.0).is_err());
        assert!(bessel_j(0, 300.0).is_err());
        assert!(bessel_j(0, -1.0).is_err());
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert!((gamma_fn(0.5).unwrap() - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_fn(2.5).unwrap() - 0.75 * PI.sqrt()).abs() < 1e-15);
        assert_eq!(gamma_fn(5.0).unwrap(), 24.0);
        assert!((gamma_fn(0.1).unwrap() - 9.513_507_698_668_732).abs() < 1e-12);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre(0, 3.2, 1.1), 1.0);
        assert!((laguerre(1, 0.7, 2.5) - (0.7 + 1.0 - 2.5)).abs() < 1e-15);
        // Explicit sum Σ_i (-1)^i C(p+α, p-i) t^i / i! with p = 2, α = 1, t = 2.
        let explicit = 3.0 - 3.0 * 2.0 + 4.0 / 2.0;
        assert!((laguerre(2, 1.0, 2.0) - explicit).abs() < 1e-14);
    }

    #[test]
    fn laguerre_matches_explicit_sum() {
        fn binom(a: f64, k: usize) -> f64 {
            (0..k).fold(1.0, |acc, j| acc * (a - j as f64) / (j + 1) as f64)
        }
        for p in 0..8usize {
            for &alpha in &[0.0, 1.0, 2.5] {
                for &t in &[0.3f64, 1.9, 4.2] {
                    let mut fact = 1.0;
                    let mut sum = 0.0;
                    for i in 0..=p {
                        if i > 0 {
                            fact *= i as f64;
                        }
                        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                        sum += sign * binom(p as f64 + alpha, p - i) * t.powi(i as i32) / fact;
                    }
                    let v = laguerre(p, alpha, t);
                    assert!((v - sum).abs() < 1e-11 * (1.0 + sum.abs()), "p={p}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn jacobi_anger(z in 0.0f64..30.0, u in 0.0f64..(2.0 * PI)) {
            let kmax = (z as usize) + 40;
            let j = bessel_j_all(kmax, z).unwrap();
            let mut re = j[0];
            let mut im = 0.0;
            for (k, jk) in j.iter().enumerate().skip(1) {
                let c = 2.0 * jk * (k as f64 * u).cos();
                match k % 4 {
                    0 => re += c,
                    1 => im -= c,
                    2 => re -= c,
                    _ => im += c,
                }
            }
            let arg = -z * u.cos();
            prop_assert!((re - arg.cos()).abs() < 1e-10);
            prop_assert!((im - arg.sin()).abs() < 1e-10);
        }

        #[test]
        fn squares_sum_to_one(z in 0.0f64..100.0) {
            let j = bessel_j_all(z as usize + 60, z).unwrap();
            let s = j[0] * j[0] + 2.0 * j.iter().skip(1).map(|v| v * v).sum::<f64>();
            prop_assert!((s - 1.0).abs() < 1e-10);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn gamma_recurrence(x in 0.01f64..20.0) {
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        }
    }
}
