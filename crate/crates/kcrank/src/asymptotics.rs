//! Convergent exact-formula and asymptotic-series evaluation for k-colored
//! partition counts and their crank residue counts.
//!
//! The partition count has an exact Bessel-series expansion over
//! denominators p; truncating at P leaves an error that vanishes as the
//! table side confirms. The residue counts add, for each unit root index
//! beta, one Bessel line over denominators divisible by c and one over the
//! rest, the latter indexed by (r, sign) pairs with positive exponent
//! parameter delta. Working precision is widened by the bit size of the
//! dominant exponential so that requested output precision survives the
//! cancellation between lines.

use crate::error::{Error, Result};
use crate::kloosterman::{sum_a, sum_b, sum_d};
use crate::modular::{delta_term, gcd_i64, m_shift, Sign, UnitPhase};
use crate::special::{bessel_i, BesselMethod};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

fn check_k(k: i64) -> Result<()> {
    if !(1..=12).contains(&k) {
        return Err(Error::KOutOfRange { k, lo: 1, hi: 12 });
    }
    Ok(())
}

fn check_n(n: i64) -> Result<()> {
    if n < 1 {
        return Err(Error::NonPositiveArgument(format!("n = {n}")));
    }
    Ok(())
}

/// Floor of sqrt(n) for n >= 0.
pub fn isqrt(n: i64) -> i64 {
    if n < 2 {
        return n.max(0);
    }
    let mut s = (n as f64).sqrt() as i64;
    while s > 0 && s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

/// Default truncation point for the denominator sums.
pub fn default_pmax(n: i64, c: i64) -> i64 {
    isqrt(n).max(2 * c)
}

/// Bits needed to represent e^{pi sqrt(2 k n / 3)}, the size of the
/// dominant term; added to the working precision so absolute error targets
/// survive.
fn scale_bits(k: i64, n: i64) -> u32 {
    let x = std::f64::consts::PI * ((2.0 * k as f64 * n as f64) / 3.0).sqrt();
    (x / std::f64::consts::LN_2).ceil() as u32 + 8
}

/// Exact-formula evaluation of p_k(n) for 1 <= k <= 12: the single m = 0
/// term of the Bessel expansion,
///   2 pi (n - k/24)^{-k/4 - 1/2} (k/24)^{k/4 + 1/2}
///     sum_{p <= P} A_p(n, 0)/p I_{k/2+1}((4 pi / p) sqrt((k/24)(n - k/24))).
/// Converges to the true integer as P grows; P = floor(sqrt(n)) already
/// brings the error under 1/2 in the tested range.
pub fn pk_exact_formula(k: i64, n: i64, pmax: i64, prec: u32) -> Result<Float> {
    check_k(k)?;
    check_n(n)?;
    if pmax < 1 {
        return Err(Error::NonPositiveArgument(format!("pmax = {pmax}")));
    }
    let wprec = prec + scale_bits(k, n) + 32;

    // n - k/24 and k/24 as exact rationals pushed into floats once
    let nk = Float::with_val(wprec, Rational::from((24 * n - k, 24)));
    let k24 = Float::with_val(wprec, Rational::from((k, 24)));

    let expo = Float::with_val(wprec, Rational::from((k + 2, 4)));
    let mut pref = pi(wprec) * 2u32;
    pref *= k24.clone().pow(&expo);
    pref *= nk.clone().pow(&(-expo.clone()));

    let root = (k24 * &nk).sqrt();
    let mut acc = Complex::with_val(wprec, (0, 0));
    for p in 1..=pmax {
        let a = sum_a(p, k, n, 0, wprec)?;
        if a.real().is_zero() && a.imag().is_zero() {
            continue;
        }
        let mut arg = pi(wprec) * 4u32;
        arg *= &root;
        arg /= Float::with_val(wprec, p);
        let bess = bessel_i(k + 2, &arg, wprec, BesselMethod::Series)?;
        let mut term = a;
        term *= bess;
        term /= Float::with_val(wprec, p);
        acc += term;
    }
    acc *= pref;
    // the exponential sums pair h with p - h, so the result is real
    debug_assert!(
        acc.imag().clone().abs()
            < Float::with_val(wprec, Float::i_exp(1, -(prec as i32))),
        "imaginary residue in a real-valued expansion"
    );
    Ok(Float::with_val(prec, acc.real()))
}

/// Leading-order asymptotic 2 (k/3)^{(1+k)/4} (8n)^{-(3+k)/4} e^{pi sqrt(2kn/3)}.
pub fn pk_leading(k: i64, n: i64, prec: u32) -> Result<Float> {
    check_k(k)?;
    check_n(n)?;
    let wprec = prec + 32;
    let mut expo = pi(wprec);
    expo *= Float::with_val(wprec, Rational::from((2 * k * n, 3))).sqrt();
    let mut v = expo.exp();
    v *= 2u32;
    v *= Float::with_val(wprec, Rational::from((k, 3)))
        .pow(Float::with_val(wprec, Rational::from((1 + k, 4))));
    v *= Float::with_val(wprec, 8 * n)
        .pow(-Float::with_val(wprec, Rational::from((3 + k, 4))));
    Ok(Float::with_val(prec, v))
}

/// Leading-order asymptotic of M_k(a, c; n): equidistribution gives
/// pk_leading / c.
pub fn mk_leading(k: i64, a: i64, c: i64, n: i64, prec: u32) -> Result<Float> {
    check_mk_params(k, a, c)?;
    check_n(n)?;
    let v = pk_leading(k, n, prec + 8)?;
    Ok(Float::with_val(prec, v / Float::with_val(prec + 8, c)))
}

fn check_mk_params(k: i64, a: i64, c: i64) -> Result<()> {
    check_k(k)?;
    if c < 3 || c % 2 == 0 {
        return Err(Error::OddCRequired { c, min: 3 });
    }
    if a <= 0 || a >= c || gcd_i64(a, c) != 1 {
        return Err(Error::BadResidue { a, c });
    }
    Ok(())
}

/// One summand of the line over denominators divisible by c.
#[derive(Clone, Debug)]
pub struct BTerm {
    pub beta: i64,
    pub p: i64,
    /// Full contribution to M_k(a, c; n), all prefactors included.
    pub value: Complex,
}

/// One summand of the line over denominators not divisible by c.
#[derive(Clone, Debug)]
pub struct DTerm {
    pub beta: i64,
    pub p: i64,
    pub r: i64,
    pub sign: Sign,
    pub delta: Rational,
    pub m: Rational,
    pub m_is_integer: bool,
    /// Full contribution to M_k(a, c; n), all prefactors included.
    pub value: Complex,
}

/// Magnitude of the last included term in each family; the truncation error
/// of the evaluation is of this order.
#[derive(Clone, Debug)]
pub struct LastTerms {
    pub a_line: Float,
    pub b_line: Float,
    pub d_line: Float,
}

/// Full term-by-term evaluation of the asymptotic series for M_k(a, c; n).
#[derive(Clone, Debug)]
pub struct AsymBreakdown {
    pub k: i64,
    pub a: i64,
    pub c: i64,
    pub n: i64,
    pub pmax: i64,
    /// p_k(n)-line over c: the equidistributed main term.
    pub main_term: Float,
    pub b_terms: Vec<BTerm>,
    pub d_terms: Vec<DTerm>,
    /// main_term + sum of all B and D contributions.
    pub total: Complex,
    pub last_terms: LastTerms,
}

/// Evaluates the asymptotic series for M_k(a, c; n) with denominators up to
/// `pmax` (default max(floor(sqrt n), 2c)), at `prec` output bits. The
/// working precision is widened by the size of the dominant exponential, so
/// the imaginary part of `total` measures pure cancellation error.
pub fn mk_asym(
    k: i64,
    a: i64,
    c: i64,
    n: i64,
    pmax: Option<i64>,
    prec: u32,
) -> Result<AsymBreakdown> {
    check_mk_params(k, a, c)?;
    check_n(n)?;
    let pmax = pmax.unwrap_or_else(|| default_pmax(n, c));
    if pmax < 1 {
        return Err(Error::NonPositiveArgument(format!("pmax = {pmax}")));
    }
    let wprec = prec + scale_bits(k, n) + 64;

    let cf = Float::with_val(wprec, c);
    let main_full = pk_exact_formula(k, n, pmax, wprec)?;
    let main_term = main_full / &cf;

    // 24 n - k > 0 throughout the supported range
    let base = Float::with_val(wprec, 24 * n - k);
    let k4 = Float::with_val(wprec, Rational::from((k, 4)));

    // 2 pi i (k / (24 n - k))^{k/4}, then divided by c
    let mut b_pref_mag = pi(wprec) * 2u32;
    b_pref_mag *= (Float::with_val(wprec, k) / &base).pow(&k4);
    b_pref_mag /= &cf;
    let b_pref = Complex::with_val(wprec, (Float::new(wprec), b_pref_mag));

    // 4 * 24^{k/4} pi / (24 n - k)^{k/4}, then divided by c; the sin(pi
    // beta / c) factor joins per beta
    let mut d_pref = pi(wprec) * 4u32;
    d_pref *= Float::with_val(wprec, 24).pow(&k4);
    d_pref *= base.clone().pow(&(-k4.clone()));
    d_pref /= &cf;

    let mut b_terms = Vec::new();
    let mut d_terms = Vec::new();
    let mut total = Complex::with_val(wprec, (&main_term, Float::new(wprec)));
    let mut last_b = Float::with_val(wprec, 0);
    let mut last_d = Float::with_val(wprec, 0);

    for beta in 1..c {
        let zeta = UnitPhase::new(Rational::from((-2 * a * beta, c))).eval(wprec);

        // line over denominators divisible by c
        let mut p = c;
        while p <= pmax {
            let b = sum_b(beta, c, p, k, -n, 0, wprec)?;
            let mut arg = pi(wprec);
            arg *= Float::with_val(wprec, Rational::from((k * (24 * n - k), 1))).sqrt();
            arg /= Float::with_val(wprec, 6 * p);
            let bess = bessel_i(k, &arg, wprec, BesselMethod::Series)?;
            let mut value = b;
            value *= &b_pref;
            value *= &zeta;
            value *= bess;
            value /= Float::with_val(wprec, p);
            last_b = value.clone().abs().real().clone();
            total += &value;
            b_terms.push(BTerm {
                beta,
                p,
                value: Complex::with_val(prec, &value),
            });
            p += c;
        }

        // line over the remaining denominators, (r, sign) pairs with
        // positive delta
        let sin_beta = crate::modular::sin_pi_rational(&Rational::from((beta, c)), wprec);
        for p in 1..=pmax {
            if p % c == 0 {
                continue;
            }
            for sign in [Sign::Plus, Sign::Minus] {
                let mut r = 0i64;
                loop {
                    let delta = delta_term(beta, c, p, r, k, sign)?;
                    if delta <= 0 {
                        break;
                    }
                    let (m, m_is_integer) = m_shift(beta, c, p, r, sign)?;
                    let d = sum_d(beta, c, p, k, -n, &m, wprec)?;
                    let mut arg = Float::with_val(
                        wprec,
                        Rational::from(&delta * Rational::from((2 * (24 * n - k), 3))),
                    )
                    .sqrt();
                    arg *= pi(wprec);
                    arg /= Float::with_val(wprec, p);
                    let bess = bessel_i(k, &arg, wprec, BesselMethod::Series)?;
                    let mut value = d;
                    value *= Float::with_val(wprec, &delta).pow(&k4);
                    value *= &d_pref;
                    value *= &sin_beta;
                    value *= &zeta;
                    value *= bess;
                    value /= Float::with_val(wprec, p);
                    last_d = value.clone().abs().real().clone();
                    total += &value;
                    d_terms.push(DTerm {
                        beta,
                        p,
                        r,
                        sign,
                        delta,
                        m,
                        m_is_integer,
                        value: Complex::with_val(prec, &value),
                    });
                    r += 1;
                }
            }
        }
    }

    // the last A-line term magnitude is reconstructed from its summand
    let last_a = {
        let aa = sum_a(pmax, k, n, 0, wprec)?;
        let nk = Float::with_val(wprec, Rational::from((24 * n - k, 24)));
        let k24 = Float::with_val(wprec, Rational::from((k, 24)));
        let expo = Float::with_val(wprec, Rational::from((k + 2, 4)));
        let mut pref = pi(wprec) * 2u32;
        pref *= k24.clone().pow(&expo);
        pref *= nk.clone().pow(&(-expo.clone()));
        let mut arg = pi(wprec) * 4u32;
        arg *= (k24 * nk).sqrt();
        arg /= Float::with_val(wprec, pmax);
        let bess = bessel_i(k + 2, &arg, wprec, BesselMethod::Series)?;
        let mut t = aa;
        t *= bess;
        t *= pref;
        t /= Float::with_val(wprec, pmax);
        t /= &cf;
        t.abs().real().clone()
    };

    Ok(AsymBreakdown {
        k,
        a,
        c,
        n,
        pmax,
        main_term: Float::with_val(prec, main_term),
        b_terms,
        d_terms,
        total: Complex::with_val(prec, total),
        last_terms: LastTerms {
            a_line: Float::with_val(prec, last_a),
            b_line: Float::with_val(prec, last_b),
            d_line: Float::with_val(prec, last_d),
        },
    })
}
