//! Exact rational vectors, matrices and subspaces.
//!
//! Everything here works over `BigRational`; there is no floating point and
//! no rounding. Bases are kept in reduced row echelon form so that two
//! subspaces are equal exactly when their bases are.

mod matrix;
mod subspace;
mod vector;

pub use matrix::{kernel, rref, solve_linear, Matrix};
pub use subspace::{affine_hull_points, orthogonal_complement, Subspace};
pub use vector::Vector;

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"3"`, `"-2"` or `"3/7"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Renders in the same syntax [`parse_rational`] accepts.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sign as -1, 0 or 1.
pub fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Decimal rendering with `digits` significant digits, rounding half to even.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return format!("0.{}e0", "0".repeat(digits.saturating_sub(1)));
    }
    let negative = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);
    // find exponent e with 10^e <= a < 10^(e+1)
    let mut exp: i64 = 0;
    let mut scaled = a.clone();
    while scaled >= Rational::from_integer(ten.clone()) {
        scaled /= Rational::from_integer(ten.clone());
        exp += 1;
    }
    while scaled < Rational::one() {
        scaled *= Rational::from_integer(ten.clone());
        exp -= 1;
    }
    let shift = num::pow(ten.clone(), digits - 1);
    let big = scaled * Rational::from_integer(shift);
    let floor = big.floor().to_integer();
    let rem = big - Rational::from_integer(floor.clone());
    let half = frac(1, 2);
    let mut mantissa = if rem > half || (rem == half && (&floor % BigInt::from(2)) != BigInt::zero()) {
        floor + BigInt::one()
    } else {
        floor
    };
    if mantissa == num::pow(ten.clone(), digits) {
        mantissa /= ten;
        exp += 1;
    }
    let s = mantissa.to_string();
    let (head, tail) = s.split_at(1);
    let sign = if negative { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}
