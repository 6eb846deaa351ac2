//! Exact Cantor-square dynamics.
//!
//! A sequence over `n` letters is written in base `b = 2n` using only even
//! digits: indices 0, 1, 2, ... fill the digits of `x` and indices -1, -2,
//! ... fill the digits of `y`. Window words then correspond to disjoint
//! rectangles separated by gaps, and a generalized shift becomes a
//! piecewise-affine map whose pieces all have unit Jacobian determinant.

mod blocks;
mod disc;
pub mod export;
pub mod twist;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::shift::{BiInfiniteSeq, Letter};

pub use blocks::{gs_to_block_map, halting_region, AffinePiece, Block, BlockMap, HaltingRegion, OpenRect};
pub use disc::{disc_map, embed_square_in_disc, unembed, DiscPoint};
pub use twist::TwistMap;

pub type Rational = BigRational;

pub(crate) fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn pow(base: u32, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Point of the unit square with exact rational coordinates, tagged with the
/// digit base of the alphabet it encodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CantorPoint {
    pub x: Rational,
    pub y: Rational,
    pub base: u32,
}

impl CantorPoint {
    pub fn new(x: Rational, y: Rational, base: u32) -> Self {
        Self { x, y, base }
    }

    /// First `n` base-`b` digits of `x`.
    pub fn x_digits(&self, n: usize) -> Vec<u32> {
        digits(&self.x, self.base, n)
    }

    /// First `n` base-`b` digits of `y`.
    pub fn y_digits(&self, n: usize) -> Vec<u32> {
        digits(&self.y, self.base, n)
    }

    /// Whether both coordinates lie in `[0, 1)` and expand with even digits
    /// only. Expansions are followed until they terminate or repeat.
    pub fn in_cantor_square(&self) -> bool {
        even_expansion(&self.x, self.base) && even_expansion(&self.y, self.base)
    }

    /// Recovers the sequence when both expansions terminate with even digits.
    pub fn to_seq(&self) -> Option<BiInfiniteSeq> {
        let xs = terminating_digits(&self.x, self.base)?;
        let ys = terminating_digits(&self.y, self.base)?;
        let letters = |ds: Vec<u32>| -> Option<Vec<Letter>> {
            ds.into_iter().map(|d| (d % 2 == 0).then_some(Letter((d / 2) as u16))).collect()
        };
        Some(BiInfiniteSeq::new(letters(ys)?, letters(xs)?, Letter(0)))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", exact_decimal(&self.x), exact_decimal(&self.y))
    }
}

/// Digit base for an alphabet of `n` letters.
pub fn base_for(alphabet_size: usize) -> u32 {
    2 * alphabet_size as u32
}

/// Maps a canonical sequence (fill letter 0) into the Cantor square:
/// `x = Σ_{i≥0} 2·s_i·b^-(i+1)` and `y = Σ_{i≥1} 2·s_{-i}·b^-i`.
pub fn encode_config(s: &BiInfiniteSeq, alphabet_size: usize) -> CantorPoint {
    assert_eq!(s.fill, Letter(0), "encoding assumes the fill letter is letter 0");
    let base = base_for(alphabet_size);
    CantorPoint { x: series(&s.right, base), y: series(&s.left, base), base }
}

fn series(word: &[Letter], base: u32) -> Rational {
    let b = BigInt::from(base);
    let numer = word.iter().fold(BigInt::zero(), |acc, l| acc * &b + BigInt::from(2 * l.0 as u32));
    BigRational::new(numer, pow(base, word.len() as u32))
}

pub(crate) fn digits(v: &Rational, base: u32, n: usize) -> Vec<u32> {
    let b = BigInt::from(base);
    let mut rem = v.fract();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        rem *= Rational::from_integer(b.clone());
        let d = rem.to_integer();
        out.push(d.to_u32().unwrap_or(0));
        rem -= Rational::from_integer(d);
    }
    out
}

fn in_unit_interval(v: &Rational) -> bool {
    !v.is_negative() && v < &Rational::one()
}

fn even_expansion(v: &Rational, base: u32) -> bool {
    if !in_unit_interval(v) {
        return false;
    }
    // digits of p/q repeat once the remainder p (mod q) repeats
    let q = v.denom().clone();
    let mut p = v.numer().clone();
    let b = BigInt::from(base);
    let mut seen = std::collections::HashSet::new();
    while !p.is_zero() && seen.insert(p.clone()) {
        let (d, r) = (&p * &b).div_rem(&q);
        if d.is_odd() {
            return false;
        }
        p = r;
    }
    true
}

fn terminating_digits(v: &Rational, base: u32) -> Option<Vec<u32>> {
    if !in_unit_interval(v) {
        return None;
    }
    let b = BigInt::from(base);
    let mut q = v.denom().clone();
    let mut n = 0u32;
    while !q.is_one() {
        let g = q.gcd(&b);
        if g.is_one() {
            return None;
        }
        q /= g;
        n += 1;
    }
    // b^n is a multiple of the denominator; scale and read off n digits
    let scaled = v * Rational::from_integer(pow(base, n));
    let mut int = scaled.to_integer();
    let mut ds = vec![0; n as usize];
    for slot in ds.iter_mut().rev() {
        let (rest, d) = int.div_rem(&b);
        *slot = d.to_u32()?;
        int = rest;
    }
    while ds.last() == Some(&0) {
        ds.pop();
    }
    Some(ds)
}

/// Finite decimal expansion when one exists, otherwise `p/q`.
pub fn exact_decimal(v: &Rational) -> String {
    let mut q = v.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&q % &two).is_zero() {
        q /= &two;
        twos += 1;
    }
    while (&q % &five).is_zero() {
        q /= &five;
        fives += 1;
    }
    if !q.is_one() {
        return format!("{}/{}", v.numer(), v.denom());
    }
    let places = twos.max(fives);
    if places == 0 {
        return v.numer().to_string();
    }
    let scaled = (v * Rational::from_integer(num_traits::pow(BigInt::from(10), places as usize))).to_integer();
    let neg = scaled.is_negative();
    let mut s = scaled.abs().to_string();
    if s.len() <= places as usize {
        s = "0".repeat(places as usize - s.len() + 1) + &s;
    }
    let split = s.len() - places as usize;
    format!("{}{}.{}", if neg { "-" } else { "" }, &s[..split], &s[split..])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(xs: &[u16]) -> Vec<Letter> {
        xs.iter().map(|&x| Letter(x)).collect()
    }

    #[test]
    fn all_fill_sequence_is_the_origin() {
        let p = encode_config(&BiInfiniteSeq::filled(Letter(0)), 4);
        assert!(p.x.is_zero() && p.y.is_zero());
    }

    #[test]
    fn single_letter_on_the_right() {
        let s = BiInfiniteSeq::new(vec![], letters(&[1]), Letter(0));
        let p = encode_config(&s, 2);
        assert_eq!(p.base, 4);
        assert_eq!(p.x, rat(1, 2));
        assert!(p.y.is_zero());
    }

    #[test]
    fn left_word_fills_y() {
        // b = 6; y = 2·2/6 + 2·1/36 = 26/36
        let s = BiInfiniteSeq::new(letters(&[2, 1]), vec![], Letter(0));
        let p = encode_config(&s, 3);
        assert_eq!(p.y, rat(26, 36));
    }

    #[test]
    fn to_seq_inverts_encoding() {
        let s = BiInfiniteSeq::new(letters(&[3, 0, 1]), letters(&[0, 2, 7]), Letter(0));
        let p = encode_config(&s, 8);
        assert!(p.in_cantor_square());
        assert_eq!(p.to_seq(), Some(s));
    }

    #[test]
    fn odd_digits_leave_the_cantor_square() {
        let p = CantorPoint::new(rat(1, 4), rat(0, 1), 4);
        assert!(!p.in_cantor_square());
        // 1/3 = 0.111... in base 4
        assert!(!CantorPoint::new(rat(1, 3), rat(0, 1), 4).in_cantor_square());
        // 2/3 = 0.222... in base 4
        assert!(CantorPoint::new(rat(2, 3), rat(0, 1), 4).in_cantor_square());
        assert!(!CantorPoint::new(rat(1, 1), rat(0, 1), 4).in_cantor_square());
    }

    #[test]
    fn decimal_strings() {
        assert_eq!(exact_decimal(&rat(1, 2)), "0.5");
        assert_eq!(exact_decimal(&rat(-1, 2)), "-0.5");
        assert_eq!(exact_decimal(&rat(3, 256)), "0.01171875");
        assert_eq!(exact_decimal(&rat(1, 12)), "1/12");
        assert_eq!(exact_decimal(&rat(0, 1)), "0");
        assert_eq!(exact_decimal(&rat(7, 1)), "7");
    }

    #[test]
    fn digit_extraction() {
        let p = CantorPoint::new(rat(2 * 16 + 6, 256), rat(4, 16), 16);
        assert_eq!(p.x_digits(3), [2, 6, 0]);
        assert_eq!(p.y_digits(2), [4, 0]);
    }
}
