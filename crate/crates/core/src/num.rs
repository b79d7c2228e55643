//! Exact rational helpers: parsing, formatting, float conversion and
//! continued-fraction rationalization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| invalid(format!("bad numerator in {s:?}")))?;
        let q: BigInt = q.trim().parse().map_err(|_| invalid(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(invalid(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(invalid(format!("bad decimal {s:?}")));
        }
        let num: BigInt = digits.parse().unwrap();
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    let p: BigInt = s.parse().map_err(|_| invalid(format!("bad rational {s:?}")))?;
    Ok(Rational::from_integer(p))
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerator/denominator pairs: scale down by a common power of two.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = r.numer() >> shift;
        let d = r.denom() >> shift;
        n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
    })
}

/// Best rational approximation of `x` whose denominator does not exceed
/// `max_den`, via continued-fraction convergents.
pub fn rationalize(x: f64, max_den: u64) -> Rational {
    assert!(x.is_finite(), "cannot rationalize {x}");
    let neg = x < 0.0;
    let mut y = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let max_den = BigInt::from(max_den);
    for _ in 0..64 {
        let a = y.floor();
        let a_int = BigInt::from(a as u64);
        let p2 = &a_int * &p1 + &p0;
        let q2 = &a_int * &q1 + &q0;
        if q2 > max_den {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = y - a;
        if frac < 1e-300 {
            break;
        }
        y = 1.0 / frac;
        if !y.is_finite() {
            break;
        }
    }
    if q1.is_zero() {
        return Rational::zero();
    }
    let r = Rational::new(p1, q1);
    if neg {
        -r
    } else {
        r
    }
}

/// A rational `r <= x` close to `x` (denominator `den`).
pub fn rational_below(x: f64, den: u64) -> Rational {
    let scaled = (x * den as f64).floor();
    Rational::new(BigInt::from(scaled as i128), BigInt::from(den))
}

/// A rational `r >= x` close to `x` (denominator `den`).
pub fn rational_above(x: f64, den: u64) -> Rational {
    let scaled = (x * den as f64).ceil();
    Rational::new(BigInt::from(scaled as i128), BigInt::from(den))
}

/// Rational bounds with `PI_LO < pi < PI_HI`.
pub fn pi_bounds() -> (Rational, Rational) {
    (rat(3_141_592_653, 1_000_000_000), rat(3_141_592_654, 1_000_000_000))
}

/// Volume of the Euclidean unit ball in dimension `d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * std::f64::consts::PI / d as f64,
    }
}

/// Exact rational bounds `(lo, hi)` with `lo <= kappa_d <= hi`.
pub fn unit_ball_volume_bounds(d: usize) -> (Rational, Rational) {
    let (pl, ph) = pi_bounds();
    fn rec(d: usize, pi: &Rational) -> Rational {
        match d {
            0 => Rational::one(),
            1 => int(2),
            _ => rec(d - 2, pi) * int(2) * pi / int(d as i64),
        }
    }
    (rec(d, &pl), rec(d, &ph))
}

/// `a^k` for a rational and a small exponent.
pub fn pow(a: &Rational, k: usize) -> Rational {
    let mut out = Rational::one();
    for _ in 0..k {
        out *= a;
    }
    out
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// `ceil(r)` as an integer.
pub fn ceil_to_usize(r: &Rational) -> usize {
    let c = r.ceil();
    c.to_integer().to_usize().unwrap_or(usize::MAX)
}

/// Greatest common divisor based normalization helper used when hashing
/// hyperplanes: divides the vector by the absolute value of its first
/// nonzero entry.
pub fn normalize_leading(v: &mut [Rational], extra: &mut Rational) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        let lead = lead.abs();
        for x in v.iter_mut() {
            *x /= &lead;
        }
        *extra /= &lead;
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
