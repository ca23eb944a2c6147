//! The coefficient field: Gaussian rationals, i.e. `a + b*i` with exact
//! rational `a`, `b`.
//!
//! Backed by `num_complex::Complex<BigRational>`, which already provides
//! exact field arithmetic. This module adds the canonical text form used
//! by serialization and reports, its parser, constructors, and the
//! deterministic sampling used by chain search.
//!
//! Canonical text (round-trips through [`parse_gauss`]):
//!
//! * zero prints `0`;
//! * a real value prints `p` or `p/q` (reduced, denominator positive);
//! * a purely imaginary value prints `r*i` or `r/s*i`;
//! * a general value prints `p/q+r/s*i` or `p/q-r/s*i`.
//!
//! No spaces anywhere, which keeps the series serialization separator
//! ` * ` (spaces around the star) unambiguous.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::str::FromStr;

pub type GaussRat = Complex<BigRational>;

/// `n` as a Gaussian rational.
pub fn from_int(n: i64) -> GaussRat {
    Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
}

/// `num/den` as a (real) Gaussian rational. `den` must be nonzero.
pub fn ratio(num: i64, den: i64) -> GaussRat {
    assert!(den != 0, "ratio: zero denominator");
    Complex::new(
        BigRational::new(BigInt::from(num), BigInt::from(den)),
        BigRational::zero(),
    )
}

/// `(re_n/re_d) + (im_n/im_d) i`.
pub fn ratio_c(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> GaussRat {
    assert!(re_d != 0 && im_d != 0, "ratio_c: zero denominator");
    Complex::new(
        BigRational::new(BigInt::from(re_n), BigInt::from(re_d)),
        BigRational::new(BigInt::from(im_n), BigInt::from(im_d)),
    )
}

/// The imaginary unit.
pub fn i_unit() -> GaussRat {
    Complex::new(BigRational::zero(), BigRational::one())
}

pub fn zero() -> GaussRat {
    Complex::zero()
}

pub fn one() -> GaussRat {
    Complex::one()
}

/// Complex conjugate.
pub fn conj(c: &GaussRat) -> GaussRat {
    c.conj()
}

/// Exact `c^e` for a nonnegative integer exponent.
pub fn pow(c: &GaussRat, e: u32) -> GaussRat {
    c.powu(e)
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text form (see module docs).
pub fn fmt_gauss(c: &GaussRat) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (true, true) => "0".to_string(),
        (false, true) => fmt_rational(&c.re),
        (true, false) => format!("{}*i", fmt_rational(&c.im)),
        (false, false) => {
            if c.im.is_negative() {
                format!("{}-{}*i", fmt_rational(&c.re), fmt_rational(&(-&c.im)))
            } else {
                format!("{}+{}*i", fmt_rational(&c.re), fmt_rational(&c.im))
            }
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if s.is_empty() {
        return None;
    }
    // BigRational::from_str accepts "p" and "p/q"; reject stray whitespace
    // and an empty numerator ourselves for clearer failures.
    if s.contains(char::is_whitespace) {
        return None;
    }
    let r = BigRational::from_str(s).ok()?;
    Some(r)
}

/// Parse the canonical text form. Returns `None` on anything that
/// [`fmt_gauss`] cannot produce (this is the round-trip parser, not the
/// CLI expression grammar).
pub fn parse_gauss(s: &str) -> Option<GaussRat> {
    let s = s.trim();
    if s == "0" {
        return Some(zero());
    }
    // Split off an imaginary tail "...*i" at the last top-level +/-.
    if let Some(body) = s.strip_suffix("*i") {
        // find a separating sign after position 0
        let sep = body
            .char_indices()
            .skip(1)
            .find(|(_, ch)| *ch == '+' || *ch == '-')
            .map(|(idx, _)| idx);
        match sep {
            Some(idx) => {
                let re = parse_rational(&body[..idx])?;
                let sign = if body.as_bytes()[idx] == b'-' { -1 } else { 1 };
                let im_mag = parse_rational(&body[idx + 1..])?;
                let im = if sign < 0 { -im_mag } else { im_mag };
                Some(Complex::new(re, im))
            }
            None => Some(Complex::new(BigRational::zero(), parse_rational(body)?)),
        }
    } else {
        Some(Complex::new(parse_rational(s)?, BigRational::zero()))
    }
}

/// Format a point (tuple of Gaussian rationals) as `(c1, c2, …)`.
pub fn fmt_point(p: &[GaussRat]) -> String {
    let parts: Vec<String> = p.iter().map(fmt_gauss).collect();
    format!("({})", parts.join(", "))
}

// ---------------------------------------------------------------------
// Deterministic randomness.
//
// Every random draw in the crate flows from a caller-supplied u64 seed.
// Sub-workloads derive their own streams via splitmix64 over (seed,
// tag...), so adding draws to one workload never shifts another.

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Derive a child seed from `seed` and a tag path.
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    let mut acc = splitmix64(seed);
    for &t in tags {
        acc = splitmix64(acc ^ splitmix64(t.wrapping_add(0x517c_c1b7_2722_0a95)));
    }
    acc
}

/// Deterministic generator for a (seed, tag path) pair.
pub fn rng_for(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, tags))
}

/// A small random Gaussian rational: numerators in `[-bound, bound]`,
/// denominators in `[1, bound]`, independently for the real and
/// imaginary parts. `bound >= 1`.
pub fn sample_gauss<R: Rng>(rng: &mut R, bound: i64) -> GaussRat {
    assert!(bound >= 1, "sample_gauss: bound must be >= 1");
    let part = |rng: &mut R| {
        let n = rng.gen_range(-bound..=bound);
        let d = rng.gen_range(1..=bound);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    };
    let re = part(rng);
    let im = part(rng);
    Complex::new(re, im)
}
