use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number.
pub type Rational = BigRational;

/// Exact Gaussian rational `re + i im`.
pub type Qi = Complex<Rational>;

/// Rational `num / den`. Panics if `den == 0`.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Gaussian rational with the given real and imaginary parts.
pub fn qi(re: Rational, im: Rational) -> Qi {
    Complex::new(re, im)
}

/// Gaussian integer `re + i im`.
pub fn qi_int(re: i64, im: i64) -> Qi {
    Complex::new(rational(re, 1), rational(im, 1))
}

/// Renders a rational as `n` or `n/d`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a Gaussian rational compactly, e.g. `3/2`, `-i`, `1/3 - 2i`.
pub fn fmt_qi(z: &Qi) -> String {
    let im_part = |im: &Rational| -> String {
        if im.abs().is_one() {
            "i".to_string()
        } else {
            format!("{}i", fmt_rational(&im.abs()))
        }
    };
    match (z.re.is_zero(), z.im.is_zero()) {
        (true, true) => "0".to_string(),
        (false, true) => fmt_rational(&z.re),
        (true, false) => {
            let sign = if z.im.is_negative() { "-" } else { "" };
            format!("{sign}{}", im_part(&z.im))
        }
        (false, false) => {
            let sign = if z.im.is_negative() { '-' } else { '+' };
            format!("{} {sign} {}", fmt_rational(&z.re), im_part(&z.im))
        }
    }
}
