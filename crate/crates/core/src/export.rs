//! CSV and JSON output for kernel samples, and CSV round trips for sampled
//! planar functions.
//!
//! Numbers are written with Rust's shortest round-trip formatting, which is
//! locale independent and byte-identical across runs.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::{BladeIndex, Multivector};
use crate::error::{Error, Result};
use crate::time_kernel::KernelSample;

/// Shortest round-trip text for `v`, switching to exponent form outside
/// `[1e-4, 1e16)`.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) || !a.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn coordinate_header(prefix: char, m: usize, out: &mut String) {
    for j in 1..=m {
        let _ = write!(out, "{prefix}{j},");
    }
}

/// Components written for `v`: the scalar blade always, every other blade
/// when its coefficient is nonzero.
fn emitted_terms(v: &Multivector) -> impl Iterator<Item = (BladeIndex, Complex64)> + '_ {
    v.terms().filter(|(b, c)| b.mask() == 0 || *c != Complex64::new(0.0, 0.0))
}

/// One row per emitted blade: `x1..xm, y1..ym, blade, re, im, route`.
pub fn samples_to_csv(samples: &[KernelSample]) -> Result<String> {
    let Some(first) = samples.first() else {
        return Ok(String::new());
    };
    let m = first.m;
    let mut out = String::new();
    coordinate_header('x', m, &mut out);
    coordinate_header('y', m, &mut out);
    out.push_str("blade,re,im,route\n");
    for s in samples {
        if s.m != m {
            return Err(Error::DimensionMismatch { expected: m, found: s.m });
        }
        let mut coords = String::new();
        for &c in s.x.coords().iter().chain(s.y.coords()) {
            let _ = write!(coords, "{},", format_number(c));
        }
        for (blade, c) in emitted_terms(&s.value) {
            let (re, im) = (format_number(c.re), format_number(c.im));
            let _ = writeln!(out, "{coords}{},{re},{im},{}", blade.label(), s.route);
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct Component {
    blade: String,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct SampleRecord<'a> {
    g: String,
    m: usize,
    x: &'a [f64],
    y: &'a [f64],
    route: &'static str,
    value: Vec<Component>,
}

fn components(v: &Multivector) -> Vec<Component> {
    emitted_terms(v)
        .map(|(b, c)| Component { blade: b.label(), re: c.re, im: c.im })
        .collect()
}

/// Pretty-printed JSON array of samples.
pub fn samples_to_json(samples: &[KernelSample]) -> String {
    let records: Vec<SampleRecord<'_>> = samples
        .iter()
        .map(|s| SampleRecord {
            g: s.g.to_string(),
            m: s.m,
            x: s.x.coords(),
            y: s.y.coords(),
            route: s.route.tag(),
            value: components(&s.value),
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("plain data serializes")
}

/// `x1,x2,blade,re,im` rows for a sampled planar function.
pub fn planar_to_csv(points: &[[f64; 2]], values: &[Multivector]) -> Result<String> {
    if points.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: points.len(), found: values.len() });
    }
    let mut out = String::from("x1,x2,blade,re,im\n");
    for (p, v) in points.iter().zip(values) {
        if v.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: v.dim() });
        }
        for (blade, c) in emitted_terms(v) {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                format_number(p[0]),
                format_number(p[1]),
                blade.label(),
                format_number(c.re),
                format_number(c.im)
            );
        }
    }
    Ok(out)
}

fn field<'a>(it: &mut impl Iterator<Item = &'a str>, line: usize, name: &str) -> Result<&'a str> {
    it.next()
        .map(str::trim)
        .ok_or_else(|| Error::Config(format!("line {line}: missing `{name}`")))
}

fn number(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Config(format!("line {line}: `{s}` is not a number")))
}

/// Reads the format written by [`planar_to_csv`]. Consecutive rows with the
/// same point are merged into one multivector; points keep their first-seen
/// order.
pub fn planar_from_csv(text: &str) -> Result<(Vec<[f64; 2]>, Vec<Multivector>)> {
    let mut points: Vec<[f64; 2]> = Vec::new();
    let mut values: Vec<Multivector> = Vec::new();
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.replace(' ', "") == "x1,x2,blade,re,im" => {}
        _ => return Err(Error::Config("expected header `x1,x2,blade,re,im`".into())),
    }
    for (i, line) in lines {
        let n = i + 1;
        let mut it = line.split(',');
        let p = [number(field(&mut it, n, "x1")?, n)?, number(field(&mut it, n, "x2")?, n)?];
        let blade = BladeIndex::parse_label(field(&mut it, n, "blade")?)?;
        if blade.mask() > 3 {
            return Err(Error::Config(format!("line {n}: blade {} is not planar", blade.label())));
        }
        let c = Complex64::new(number(field(&mut it, n, "re")?, n)?, number(field(&mut it, n, "im")?, n)?);
        if it.next().is_some() {
            return Err(Error::Config(format!("line {n}: too many fields")));
        }
        if points.last() != Some(&p) {
            points.push(p);
            values.push(Multivector::zero(2));
        }
        let v = values.last_mut().expect("pushed above");
        v.set(blade, v.coeff(blade) + c);
    }
    Ok((points, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::VectorM;
    use crate::intpoly::IntPoly;
    use crate::time_kernel::Route;

    fn sample() -> KernelSample {
        let mut value = Multivector::scalar(2, Complex64::new(0.25, -1.5));
        value.set(BladeIndex::from_mask(3), Complex64::new(0.0, 0.125));
        KernelSample {
            x: VectorM::new(vec![0.5, -1.0]).unwrap(),
            y: VectorM::new(vec![2.0, 0.1]).unwrap(),
            m: 2,
            g: IntPoly::monomial(1, 2),
            value,
            route: Route::Oracle2d,
        }
    }

    #[test]
    fn csv_rows_and_header() {
        let csv = samples_to_csv(&[sample()]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x1,x2,y1,y2,blade,re,im,route");
        assert_eq!(lines[1], "0.5,-1,2,0.1,1,0.25,-1.5,oracle2d");
        assert_eq!(lines[2], "0.5,-1,2,0.1,e12,0,0.125,oracle2d");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn json_carries_route() {
        let v: serde_json::Value = serde_json::from_str(&samples_to_json(&[sample()])).unwrap();
        assert_eq!(v[0]["route"], "oracle2d");
        assert_eq!(v[0]["g"], "x^2");
        assert_eq!(v[0]["value"][1]["blade"], "e12");
    }

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.5), "0.5");
        assert_eq!(format_number(-2.0), "-2");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(1.5e-7), "1.5e-7");
        assert_eq!(format_number(-3e20), "-3e20");
        for v in [1.0 / 3.0, 1e-300, 123456.789, -7.25e-5] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn planar_round_trip() {
        let pts = vec![[0.1, 0.2], [-3.0, 1e-17]];
        let mut a = Multivector::zero(2);
        a.set(BladeIndex::from_mask(1), Complex64::new(1.0 / 3.0, 2.0));
        let b = Multivector::scalar(2, Complex64::new(-0.7, 0.0));
        let csv = planar_to_csv(&pts, &[a.clone(), b.clone()]).unwrap();
        let (p, v) = planar_from_csv(&csv).unwrap();
        assert_eq!(p, pts);
        assert_eq!(v, vec![a, b]);
    }

    #[test]
    fn planar_rejects_bad_rows() {
        assert!(planar_from_csv("a,b\n").is_err());
        assert!(planar_from_csv("x1,x2,blade,re,im\n0,0,e3,1,0\n").is_err());
        assert!(planar_from_csv("x1,x2,blade,re,im\n0,zero,1,1,0\n").is_err());
    }
}
