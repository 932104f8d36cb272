//! Integer polynomials `G` and the fourth-root-of-unity phase calculus.
//!
//! `i^{G(k)}` only depends on `G(k) mod 4`, which in turn only depends on
//! `k mod 4` and the coefficients mod 4. Everything here is exact integer
//! arithmetic; coefficients are reduced before evaluation so no input can
//! overflow.
//!
//! Text grammar accepted by [`IntPoly::parse`]:
//!
//! ```text
//! poly   := list | expr
//! list   := int ("," int)*            coefficients a_n, …, a_1, a_0
//! expr   := ["+"|"-"] term (("+"|"-") term)*
//! term   := int | [int ["*"]] "x" ["^" uint]
//! ```
//!
//! Whitespace is ignored. Decimal points and fractions are rejected.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Polynomial with integer coefficients, stored ascending (`a_0` first) with
/// trailing zeros trimmed. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    /// From ascending coefficients `a_0, a_1, …`.
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// From descending coefficients `a_n, …, a_0`.
    pub fn from_descending(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().rev().copied().collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn monomial(coeff: i64, power: usize) -> Self {
        let mut c = vec![0; power + 1];
        c[power] = coeff;
        IntPoly::new(c)
    }

    pub fn parse(input: &str) -> Result<Self> {
        let cleaned: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(parse_err(input, "empty polynomial"));
        }
        if cleaned.contains('.') || cleaned.contains('/') {
            return Err(Error::NonIntegerCoefficient(input.trim().to_string()));
        }
        if cleaned.contains('x') || cleaned.contains('X') {
            parse_expr(input, &cleaned.to_lowercase())
        } else {
            let parts: Vec<&str> = cleaned.split(',').collect();
            let mut desc = Vec::with_capacity(parts.len());
            for p in parts {
                desc.push(
                    p.parse::<i64>()
                        .map_err(|_| parse_err(input, &format!("`{p}` is not an integer")))?,
                );
            }
            Ok(IntPoly::from_descending(&desc))
        }
    }

    /// Ascending coefficients.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> i64 {
        self.coeffs.get(power).copied().unwrap_or(0)
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn constant_term(&self) -> i64 {
        self.coeff(0)
    }

    pub fn without_constant(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        if let Some(a0) = c.first_mut() {
            *a0 = 0;
        }
        IntPoly::new(c)
    }

    pub fn plus_constant(&self, c: i64) -> IntPoly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        coeffs[0] += c;
        IntPoly::new(coeffs)
    }

    /// Exact value `G(k)`, or `None` on overflow.
    pub fn eval_exact(&self, k: i64) -> Option<i128> {
        let k = k as i128;
        let mut acc: i128 = 0;
        for &a in self.coeffs.iter().rev() {
            acc = acc.checked_mul(k)?.checked_add(a as i128)?;
        }
        Some(acc)
    }

    /// `G(k) mod 4` in `{0,1,2,3}` for any integer `k`.
    pub fn residue_mod4(&self, k: i64) -> u8 {
        let k4 = k.rem_euclid(4);
        let mut acc = 0i64;
        for &a in self.coeffs.iter().rev() {
            acc = (acc * k4 + a.rem_euclid(4)).rem_euclid(4);
        }
        acc as u8
    }

    /// Residues of `G(0), G(1), G(2), G(3)` mod 4; they determine every phase.
    pub fn residue_table(&self) -> [u8; 4] {
        [0, 1, 2, 3].map(|k| self.residue_mod4(k))
    }

    pub fn parity_profile(&self) -> ParityProfile {
        let s0: i128 = self.coeffs.iter().step_by(2).map(|&a| a as i128).sum();
        let s1: i128 = self.coeffs.iter().skip(1).step_by(2).map(|&a| a as i128).sum();
        ParityProfile {
            s0,
            s1,
            a1: self.coeff(1) as i128,
            g_at_1: s0 + s1,
            g_at_minus_1: s0 - s1,
        }
    }
}

fn parse_err(input: &str, reason: &str) -> Error {
    Error::Parse {
        input: input.trim().to_string(),
        reason: reason.to_string(),
    }
}

fn parse_expr(original: &str, s: &str) -> Result<IntPoly> {
    let bytes = s.as_bytes();
    let mut pos = 0usize;
    let mut coeffs: Vec<i64> = Vec::new();
    let mut first = true;
    while pos < bytes.len() {
        let mut sign = 1i64;
        match bytes[pos] {
            b'+' => pos += 1,
            b'-' => {
                sign = -1;
                pos += 1;
            }
            _ if first => {}
            c => {
                return Err(parse_err(
                    original,
                    &format!("expected `+` or `-` at offset {pos}, found `{}`", c as char),
                ))
            }
        }
        first = false;
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let coef: Option<i64> = if pos > start {
            Some(
                s[start..pos]
                    .parse()
                    .map_err(|_| parse_err(original, "coefficient out of range"))?,
            )
        } else {
            None
        };
        if pos < bytes.len() && bytes[pos] == b'*' {
            if coef.is_none() {
                return Err(parse_err(original, "`*` without a coefficient"));
            }
            pos += 1;
            if pos >= bytes.len() || bytes[pos] != b'x' {
                return Err(parse_err(original, "`*` must be followed by `x`"));
            }
        }
        let power = if pos < bytes.len() && bytes[pos] == b'x' {
            pos += 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let pstart = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == pstart {
                    return Err(parse_err(original, "missing exponent after `^`"));
                }
                let p: usize = s[pstart..pos]
                    .parse()
                    .map_err(|_| parse_err(original, "exponent out of range"))?;
                if p > 64 {
                    return Err(parse_err(original, "exponent larger than 64"));
                }
                p
            } else {
                1
            }
        } else {
            if coef.is_none() {
                return Err(parse_err(original, &format!("empty term at offset {start}")));
            }
            0
        };
        let value = sign * coef.unwrap_or(1);
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] = coeffs[power]
            .checked_add(value)
            .ok_or_else(|| parse_err(original, "coefficient overflow"))?;
    }
    Ok(IntPoly::new(coeffs))
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (power, &a) in self.coeffs.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let sign = if a < 0 { "-" } else if first { "" } else { "+" };
            let mag = a.unsigned_abs();
            let body = match (power, mag) {
                (0, _) => mag.to_string(),
                (1, 1) => "x".to_string(),
                (1, _) => format!("{mag}x"),
                (_, 1) => format!("x^{power}"),
                _ => format!("{mag}x^{power}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// A fourth root of unity `i^e`, stored by its exponent mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(e: i64) -> Self {
        Phase(e.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn pow(self, n: u32) -> Phase {
        Phase(((self.0 as u32 * n) % 4) as u8)
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = ["1", "i", "-1", "-i"][self.0 as usize];
        write!(f, "{s}")
    }
}

/// `i^{G(k)}`, exact.
pub fn phase(g: &IntPoly, k: i64) -> Phase {
    Phase(g.residue_mod4(k))
}

/// Ordered 4-tuple of fourth roots of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PhaseQuad(pub [Phase; 4]);

impl PhaseQuad {
    pub fn to_complex(self) -> [Complex64; 4] {
        self.0.map(Phase::to_complex)
    }
}

impl fmt::Display for PhaseQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// Phases on the monogenic pieces: `(i^{G(0)}, i^{G(-1)}, i^{G(-2)}, i^{G(-3)})`.
pub fn row_a1(g: &IntPoly) -> PhaseQuad {
    PhaseQuad([0, -1, -2, -3].map(|k| phase(g, k)))
}

/// Phases on the `y M_k` pieces:
/// `(i^{G(m-1)}, i^{G(m)}, i^{G(m+1)}, i^{G(m+2)})`.
pub fn row_a2(g: &IntPoly, m: usize) -> PhaseQuad {
    let m = m as i64;
    PhaseQuad([m - 1, m, m + 1, m + 2].map(|k| phase(g, k)))
}

/// Coefficient sums and special values of `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParityProfile {
    /// Sum of even-index coefficients, `(G(1)+G(-1))/2`.
    pub s0: i128,
    /// Sum of odd-index coefficients, `(G(1)-G(-1))/2`.
    pub s1: i128,
    pub a1: i128,
    pub g_at_1: i128,
    pub g_at_minus_1: i128,
}

/// Kernel is a combination of the `f, f_β, g, g_β` forms only: `a_1` and
/// `s_1` both even.
pub fn is_bounded_family(g: &IntPoly) -> bool {
    let p = g.parity_profile();
    let by_parity = p.a1.rem_euclid(2) == 0 && p.s1.rem_euclid(2) == 0;
    debug_assert_eq!(by_parity, is_bounded_family_by_congruence(g));
    by_parity
}

/// Same predicate through the residue congruences
/// `G(0)≡G(-2)`, `G(-1)≡G(-3)`, `G(m-1)≡G(m+1)`, `G(m)≡G(m+2)` (mod 4),
/// checked for every residue class of `m`.
pub fn is_bounded_family_by_congruence(g: &IntPoly) -> bool {
    let r = |k: i64| g.residue_mod4(k);
    let low = r(0) == r(-2) && r(-1) == r(-3);
    low && (2..=5).all(|m: i64| r(m - 1) == r(m + 1) && r(m) == r(m + 2))
}

/// Named kernels recognised from the residue table of `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpecialCase {
    /// Every residue vanishes: the plain Fourier kernel `e^{-i(x,y)}`.
    IdentityPlaneWave,
    /// `G ≡ ±x`: the Clifford–Fourier kernel.
    CliffordFourier,
    /// `G ≡ 2x²`: the inverse kernel `e^{i(x,y)}` in even dimension.
    InversePlaneWave,
}

impl SpecialCase {
    pub fn tag(self) -> &'static str {
        match self {
            SpecialCase::IdentityPlaneWave => "identity-plane-wave",
            SpecialCase::CliffordFourier => "clifford-fourier",
            SpecialCase::InversePlaneWave => "inverse-plane-wave",
        }
    }
}

pub fn special_case(g: &IntPoly) -> Option<SpecialCase> {
    match g.residue_table() {
        [0, 0, 0, 0] => Some(SpecialCase::IdentityPlaneWave),
        [0, 1, 2, 3] | [0, 3, 2, 1] => Some(SpecialCase::CliffordFourier),
        [0, 2, 0, 2] => Some(SpecialCase::InversePlaneWave),
        _ => None,
    }
}
