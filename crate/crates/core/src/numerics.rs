//! Signed-digit fixed-precision reals.
//!
//! A value is `Σ int[i]·2^i + Σ frac[i]·2^-i` with every digit in `{-1, 0, 1}`.
//! All arithmetic on values is exact (dyadic rationals); nothing here touches
//! floating point.
//!
//! Signed-digit strings are redundant (`3 = [1,1] = [-1,0,1]`), so a canonical
//! form is fixed: the non-adjacent form with no leading integer zeros and no
//! trailing fractional zeros. Every dyadic rational has exactly one canonical
//! string.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Errors raised while building or decoding a [`FixedPrecisionReal`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("digit {digit} at position {position} is not a signed bit")]
    InvalidDigit { position: usize, digit: i64 },
    #[error("truncated input at bit {bit}: expected {expected} bytes, found {found}")]
    Truncated {
        bit: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid digit code 0b10 at bit {bit}")]
    InvalidCode { bit: usize },
    #[error("non-zero padding at bit {bit}")]
    NonZeroPadding { bit: usize },
    #[error("{extra} trailing byte(s) at bit {bit}")]
    TrailingBytes { bit: usize, extra: usize },
    #[error("width {width} exceeds the 16-bit header limit")]
    TooWide { width: usize },
    #[error("{0} is not a dyadic rational")]
    NotDyadic(BigRational),
    #[error("invalid hex: {0}")]
    Hex(String),
}

/// One signed binary digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Digit {
    NegOne,
    Zero,
    One,
}

impl Digit {
    pub fn from_i64(d: i64) -> Option<Self> {
        match d {
            -1 => Some(Digit::NegOne),
            0 => Some(Digit::Zero),
            1 => Some(Digit::One),
            _ => None,
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Digit::NegOne => -1,
            Digit::Zero => 0,
            Digit::One => 1,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Digit::Zero
    }

    fn negate(self) -> Self {
        match self {
            Digit::NegOne => Digit::One,
            Digit::Zero => Digit::Zero,
            Digit::One => Digit::NegOne,
        }
    }

    fn code(self) -> u8 {
        match self {
            Digit::Zero => 0b00,
            Digit::One => 0b01,
            Digit::NegOne => 0b11,
        }
    }
}

/// Signed-digit fixed-precision real number.
///
/// `int_digits[i]` carries weight `2^i`; `frac_digits[i]` carries weight
/// `2^-(i+1)`. Structural equality (`==`) compares digit strings; use
/// [`FixedPrecisionReal::cmp_value`] to compare represented values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FixedPrecisionReal {
    int_digits: Vec<Digit>,
    frac_digits: Vec<Digit>,
}

impl FixedPrecisionReal {
    pub fn new(int_digits: Vec<Digit>, frac_digits: Vec<Digit>) -> Self {
        Self {
            int_digits,
            frac_digits,
        }
    }

    /// Builds a value from raw integer digits, rejecting anything outside `{-1, 0, 1}`.
    pub fn from_digits(int_digits: &[i64], frac_digits: &[i64]) -> Result<Self, EncodingError> {
        let conv = |offset: usize, ds: &[i64]| -> Result<Vec<Digit>, EncodingError> {
            ds.iter()
                .enumerate()
                .map(|(i, &d)| {
                    Digit::from_i64(d).ok_or(EncodingError::InvalidDigit {
                        position: offset + i,
                        digit: d,
                    })
                })
                .collect()
        };
        Ok(Self {
            int_digits: conv(0, int_digits)?,
            frac_digits: conv(int_digits.len(), frac_digits)?,
        })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_dyadic(&BigRational::from_integer(BigInt::from(v)))
            .expect("integers are dyadic")
    }

    /// Canonical representation of a dyadic rational.
    pub fn from_dyadic(value: &BigRational) -> Result<Self, EncodingError> {
        let denom = value.denom();
        let shift = match dyadic_exponent(denom) {
            Some(s) => s,
            None => return Err(EncodingError::NotDyadic(value.clone())),
        };
        let naf = non_adjacent_form(value.numer());
        let int_len = naf.len().saturating_sub(shift);
        let int_digits = (0..int_len).map(|i| naf[shift + i]).collect();
        let frac_digits = (1..=shift)
            .map(|i| naf.get(shift - i).copied().unwrap_or(Digit::Zero))
            .collect();
        Ok(Self {
            int_digits,
            frac_digits,
        })
    }

    pub fn int_digits(&self) -> &[Digit] {
        &self.int_digits
    }

    pub fn frac_digits(&self) -> &[Digit] {
        &self.frac_digits
    }

    /// Integer width `P`.
    pub fn int_width(&self) -> usize {
        self.int_digits.len()
    }

    /// Fractional width `Q`.
    pub fn frac_width(&self) -> usize {
        self.frac_digits.len()
    }

    pub fn digit_count(&self) -> usize {
        self.int_width() + self.frac_width()
    }

    /// Exact value; the denominator always divides `2^Q`.
    pub fn value(&self) -> BigRational {
        let q = self.frac_width();
        let mut numer = BigInt::zero();
        // Horner over all digits from most to least significant, in units of 2^-Q.
        for d in self.int_digits.iter().rev().chain(self.frac_digits.iter()) {
            numer <<= 1;
            numer += d.to_i8();
        }
        BigRational::new(numer, BigInt::one() << q)
    }

    pub fn is_zero(&self) -> bool {
        self.int_digits
            .iter()
            .chain(&self.frac_digits)
            .all(|d| d.is_zero())
    }

    /// Keeps the first `width` fractional digits. Integer digits are untouched and
    /// the result is not canonicalized, so the dropped tail is exactly the error.
    pub fn truncate_fraction(&self, width: usize) -> Self {
        if width >= self.frac_width() {
            return self.clone();
        }
        Self {
            int_digits: self.int_digits.clone(),
            frac_digits: self.frac_digits[..width].to_vec(),
        }
    }

    pub fn canonicalize(&self) -> Self {
        Self::from_dyadic(&self.value()).expect("digit strings are dyadic")
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonicalize()
    }

    pub fn negate(&self) -> Self {
        Self {
            int_digits: self.int_digits.iter().map(|d| d.negate()).collect(),
            frac_digits: self.frac_digits.iter().map(|d| d.negate()).collect(),
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.value().cmp(&other.value())
    }

    /// Wire encoding: `P` and `Q` as big-endian u16, then `P` integer digits and
    /// `Q` fractional digits at two bits each (`00`=0, `01`=+1, `11`=-1), packed
    /// most-significant-first and zero-padded to a byte boundary.
    pub fn encode(&self) -> Result<Vec<u8>, EncodingError> {
        let p = u16::try_from(self.int_width()).map_err(|_| EncodingError::TooWide {
            width: self.int_width(),
        })?;
        let q = u16::try_from(self.frac_width()).map_err(|_| EncodingError::TooWide {
            width: self.frac_width(),
        })?;
        let mut out = Vec::with_capacity(encoded_len(p as usize, q as usize));
        out.extend_from_slice(&p.to_be_bytes());
        out.extend_from_slice(&q.to_be_bytes());
        let mut acc = 0u8;
        let mut filled = 0;
        for d in self.int_digits.iter().chain(&self.frac_digits) {
            acc = (acc << 2) | d.code();
            filled += 1;
            if filled == 4 {
                out.push(acc);
                acc = 0;
                filled = 0;
            }
        }
        if filled > 0 {
            out.push(acc << (2 * (4 - filled)));
        }
        Ok(out)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, EncodingError> {
        if bytes.len() < 4 {
            return Err(EncodingError::Truncated {
                bit: bytes.len() * 8,
                expected: 4,
                found: bytes.len(),
            });
        }
        let p = u16::from_be_bytes([bytes[0], bytes[1]]) as usize;
        let q = u16::from_be_bytes([bytes[2], bytes[3]]) as usize;
        let expected = encoded_len(p, q);
        if bytes.len() < expected {
            return Err(EncodingError::Truncated {
                bit: bytes.len() * 8,
                expected,
                found: bytes.len(),
            });
        }
        if bytes.len() > expected {
            return Err(EncodingError::TrailingBytes {
                bit: expected * 8,
                extra: bytes.len() - expected,
            });
        }
        let payload = &bytes[4..];
        let code_at = |i: usize| (payload[i / 4] >> (2 * (3 - i % 4))) & 0b11;
        let mut digits = Vec::with_capacity(p + q);
        for i in 0..p + q {
            let d = match code_at(i) {
                0b00 => Digit::Zero,
                0b01 => Digit::One,
                0b11 => Digit::NegOne,
                _ => {
                    return Err(EncodingError::InvalidCode {
                        bit: 32 + 2 * i,
                    })
                }
            };
            digits.push(d);
        }
        for i in p + q..payload.len() * 4 {
            if code_at(i) != 0 {
                return Err(EncodingError::NonZeroPadding { bit: 32 + 2 * i });
            }
        }
        let frac_digits = digits.split_off(p);
        Ok(Self {
            int_digits: digits,
            frac_digits,
        })
    }

    pub fn to_hex(&self) -> Result<String, EncodingError> {
        Ok(hex::encode(self.encode()?))
    }

    pub fn from_hex(s: &str) -> Result<Self, EncodingError> {
        let bytes = hex::decode(s).map_err(|e| EncodingError::Hex(e.to_string()))?;
        Self::decode(&bytes)
    }

    /// Pads with leading integer zeros and trailing fractional zeros up to the
    /// given widths. Returns `None` if the value does not fit.
    pub fn padded(&self, int_width: usize, frac_width: usize) -> Option<Self> {
        if self.int_width() > int_width || self.frac_width() > frac_width {
            return None;
        }
        let mut int_digits = self.int_digits.clone();
        int_digits.resize(int_width, Digit::Zero);
        let mut frac_digits = self.frac_digits.clone();
        frac_digits.resize(frac_width, Digit::Zero);
        Some(Self {
            int_digits,
            frac_digits,
        })
    }
}

impl fmt::Display for FixedPrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.value()))
    }
}

/// Three-way comparison of represented values.
pub fn compare(x: &FixedPrecisionReal, y: &FixedPrecisionReal) -> Ordering {
    x.cmp_value(y)
}

/// Byte length of the wire encoding for widths `(p, q)`.
pub fn encoded_len(p: usize, q: usize) -> usize {
    4 + (2 * (p + q)).div_ceil(8)
}

/// `Some(q)` if `denom == 2^q`.
fn dyadic_exponent(denom: &BigInt) -> Option<usize> {
    if denom.is_zero() || denom.is_negative() {
        return None;
    }
    let tz = denom.trailing_zeros().unwrap_or(0) as usize;
    if (denom >> tz).is_one() {
        Some(tz)
    } else {
        None
    }
}

/// Non-adjacent form of an integer, least significant digit first.
fn non_adjacent_form(n: &BigInt) -> Vec<Digit> {
    let mut m = n.clone();
    let four = BigInt::from(4);
    let mut out = Vec::new();
    while !m.is_zero() {
        if m.is_odd() {
            let r = m.mod_floor(&four).to_u8().expect("residue mod 4");
            let d = if r == 1 { Digit::One } else { Digit::NegOne };
            m -= d.to_i8();
            out.push(d);
        } else {
            out.push(Digit::Zero);
        }
        m >>= 1;
    }
    out
}

/// `p/q` (or `p` for integers), the textual form used in certificates.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, or a finite decimal such as `-0.125` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{whole_digits}{frac}").parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(digits, scale);
        return Some(if negative { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n >= 1, "ceil_log2 of zero");
    64 - (n - 1).leading_zeros()
}

/// `base^exp` as an exact rational.
pub fn rational_pow(base: u64, exp: u32) -> BigRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(base), exp as usize))
}

/// `2^-exp`.
pub fn inverse_pow2(exp: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << exp)
}

/// Smallest multiple of `2^-width` that is `≥ r`.
pub fn ceil_to_dyadic(r: &BigRational, width: usize) -> BigRational {
    let scale = BigInt::one() << width;
    let scaled = r * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.ceil().to_integer(), scale)
}
