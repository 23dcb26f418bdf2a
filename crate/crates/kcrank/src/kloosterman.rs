//! Kloosterman-type exponential sums over residues h coprime to p, with all
//! phases assembled exactly as rationals modulo 2 before a single rounded
//! evaluation per summand.
//!
//! Three families:
//!   A_p(n, m)      = sum_h e^{pi i k s(h,p) + 2 pi i (m H - n h)/p},  H = h^{-1} mod p
//!   B_{a,c,p}(n,m) = (-1)^{ap+1} sin(pi a/c) sum_h omega_{h,p}^k
//!                      e^{-pi i a^2 p1 h'/c} e^{2 pi i (n h + m h')/p} / sin(pi a h'/c)
//!                    for c | p
//!   D_{a,c,p}(n,m) = (-1)^{ap+l} sum_h omega_{h,p}^k e^{2 pi i (n h + m h')/p}
//!                    for c not dividing p
//! where h' is the canonical negative inverse and m may be rational in D.

use crate::error::{Error, Result};
use crate::modular::{dedekind_sum, frame, gcd_i64, inverse_neg, sin_pi_rational, UnitPhase};
use rug::{Complex, Rational};

fn mod_inverse_plain(h: i64, p: i64) -> i64 {
    // p >= 1, gcd(h, p) = 1; the plain inverse in [0, p)
    if p == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (h.rem_euclid(p) as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_s.rem_euclid(p as i128)) as i64
}

/// A_p(n, m): plain-inverse variant with multiplier omega_{h,p}^k.
/// Summed in ascending h; each summand is one exact phase, evaluated once.
pub fn sum_a(p: i64, k: i64, n: i64, m: i64, prec: u32) -> Result<Complex> {
    if p < 1 {
        return Err(Error::NonPositiveModulus(p));
    }
    let wprec = prec + 16;
    let mut acc = Complex::with_val(wprec, (0, 0));
    for h in 0..p.max(1) {
        if gcd_i64(h, p) != 1 && !(p == 1 && h == 0) {
            continue;
        }
        let hinv = mod_inverse_plain(h, p);
        let mut t = Rational::from(k) * dedekind_sum(h, p)?;
        t += Rational::from((2 * (m * hinv - n * h), p));
        acc += UnitPhase::new(t).eval(wprec);
    }
    Ok(Complex::with_val(prec, acc))
}

/// B_{a,c,p}(n, m) for c | p, c odd, gcd(a, c) = 1.
pub fn sum_b(a: i64, c: i64, p: i64, k: i64, n: i64, m: i64, prec: u32) -> Result<Complex> {
    if c < 3 || c % 2 == 0 {
        return Err(Error::OddCRequired { c, min: 3 });
    }
    if p < 1 {
        return Err(Error::NonPositiveModulus(p));
    }
    if p % c != 0 {
        return Err(Error::ExpectedDivides { c, p });
    }
    if a <= 0 || a >= c || gcd_i64(a, c) != 1 {
        return Err(Error::BadResidue { a, c });
    }
    let p1 = p / c;
    let wprec = prec + 16;
    let sign = UnitPhase::new(Rational::from(a * p + 1));
    let sin_front = sin_pi_rational(&Rational::from((a, c)), wprec);
    let mut acc = Complex::with_val(wprec, (0, 0));
    for h in 0..p {
        if gcd_i64(h, p) != 1 && !(p == 1 && h == 0) {
            continue;
        }
        let hp = inverse_neg(h, p)?;
        let mut t = Rational::from(k) * dedekind_sum(h, p)?;
        t -= Rational::from((a * a * p1 * hp, c));
        t += Rational::from((2 * (n * h + m * hp), p));
        let denom = sin_pi_rational(&Rational::from((a * hp, c)), wprec);
        // gcd(h', c) = 1 keeps a h' off the zero set of sin(pi x /c)
        debug_assert!(denom.clone().abs() > 0);
        acc += UnitPhase::new(t).eval(wprec) / denom;
    }
    acc *= sign.eval(wprec);
    acc *= sin_front;
    Ok(Complex::with_val(prec, acc))
}

/// D_{a,c,p}(n, m) for c not dividing p, c odd, gcd(a, c) = 1; m may be a
/// non-integral rational, in which case the h'-dependence uses the exact
/// rational phase 2 m h'/p.
pub fn sum_d(a: i64, c: i64, p: i64, k: i64, n: i64, m: &Rational, prec: u32) -> Result<Complex> {
    if c < 3 || c % 2 == 0 {
        return Err(Error::OddCRequired { c, min: 3 });
    }
    if p < 1 {
        return Err(Error::NonPositiveModulus(p));
    }
    if p % c == 0 {
        return Err(Error::ExpectedNotDivides { c, p });
    }
    if a <= 0 || a >= c || gcd_i64(a, c) != 1 {
        return Err(Error::BadResidue { a, c });
    }
    let fr = frame(a, c, p, 1)?;
    let l = fr.l.expect("c does not divide p");
    let wprec = prec + 16;
    let sign = UnitPhase::new(Rational::from(a * p + l));
    let mut acc = Complex::with_val(wprec, (0, 0));
    for h in 0..p.max(1) {
        if gcd_i64(h, p) != 1 && !(p == 1 && h == 0) {
            continue;
        }
        let hp = inverse_neg(h, p)?;
        let mut t = Rational::from(k) * dedekind_sum(h, p)?;
        t += Rational::from((2 * n * h, p));
        t += Rational::from(2 * hp) * m / Rational::from(p);
        acc += UnitPhase::new(t).eval(wprec);
    }
    acc *= sign.eval(wprec);
    Ok(Complex::with_val(prec, acc))
}

/// Euler's totient, for the trivial bound |A_p| <= phi(p).
pub fn totient(p: i64) -> i64 {
    let mut n = p;
    let mut result = p;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            while n % f == 0 {
                n /= f;
            }
            result -= result / f;
        }
        f += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}
