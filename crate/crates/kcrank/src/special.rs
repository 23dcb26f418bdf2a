//! Arbitrary-precision special functions: modified Bessel I of half-integer
//! and integer order, Dedekind eta, the odd Jacobi theta function, the eta
//! multiplier system, and numeric evaluators for the crank generating
//! function in its one-variable and four-variable forms, together with
//! residual checks for their modular transformation laws.
//!
//! Precision discipline: every function takes a target precision in bits,
//! works at a widened internal precision, and rounds once on return. Series
//! are truncated when a term drops below 2^-(prec+16) times the running
//! maximum term; denominators are rejected within 2^-(prec/2) of a pole.

use crate::error::{Error, Result};
use crate::modular::{dedekind_sum, frame, inverse_neg, sin_pi_rational, UnitPhase};
use rug::float::Constant;
use rug::ops::{CompleteRound, Pow};
use rug::{Complex, Float, Integer, Rational};

const LOOP_CAP: usize = 1 << 22;

fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

fn cabs(z: &Complex) -> Float {
    z.clone().abs().real().clone()
}

/// Threshold below which a term no longer moves the accumulated sum.
fn term_eps(prec: u32) -> Float {
    Float::with_val(prec, Float::i_exp(1, -((prec as i32) + 16)))
}

/// Method selector for `bessel_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselMethod {
    Series,
    ClosedForm,
}

/// Modified Bessel function I_nu(x) for nu = nu2/2, x > 0.
///
/// `Series` sums the ascending series, valid for every supported order;
/// `ClosedForm` evaluates the elementary expressions for nu in
/// {1/2, 3/2, 5/2} and rejects other orders. The series has positive terms,
/// so truncation by relative term size loses nothing to cancellation.
pub fn bessel_i(nu2: i64, x: &Float, prec: u32, method: BesselMethod) -> Result<Float> {
    if !(1..=16).contains(&nu2) {
        return Err(Error::BesselOrder { nu2 });
    }
    if !(x.is_finite() && *x > 0) {
        return Err(Error::NonPositiveArgument(format!("bessel_i at x = {x}")));
    }
    match method {
        BesselMethod::Series => bessel_series(nu2, x, prec),
        BesselMethod::ClosedForm => bessel_closed(nu2, x, prec),
    }
}

fn double_factorial_odd(j: i64) -> Integer {
    // (2j + 1)!!
    let mut acc = Integer::from(1);
    let mut i = 1i64;
    while 2 * i + 1 <= 2 * j + 1 {
        acc *= 2 * i + 1;
        i += 1;
    }
    acc
}

fn bessel_series(nu2: i64, x: &Float, prec: u32) -> Result<Float> {
    let wprec = prec + 32;
    let half = Float::with_val(wprec, x) / 2u32;
    let half_sq = half.clone().square();

    // leading term (x/2)^nu / Gamma(nu + 1)
    let mut term = if nu2 % 2 == 0 {
        let n = (nu2 / 2) as u32;
        let mut t = half.clone().pow(n);
        t /= Float::with_val(wprec, Integer::from(Integer::factorial(n)));
        t
    } else {
        let j = (nu2 - 1) / 2;
        // Gamma(j + 3/2) = sqrt(pi) (2j + 1)!! / 2^{j+1}
        let mut gamma = pi(wprec).sqrt();
        gamma *= Float::with_val(wprec, double_factorial_odd(j));
        gamma /= Float::with_val(wprec, Integer::from(1) << (j + 1) as u32);
        let mut t = half.clone().pow(j as u32);
        t *= half.clone().sqrt();
        t /= gamma;
        t
    };

    let eps = term_eps(prec);
    let mut sum = term.clone();
    for s in 0u64.. {
        if s as usize > LOOP_CAP {
            return Err(Error::TruncationCap {
                cap: LOOP_CAP,
                what: "summing the Bessel series",
            });
        }
        // t_{s+1} = t_s * (x/2)^2 / ((s + 1)(s + 1 + nu))
        term *= &half_sq;
        let denom = Rational::from(((s as i64 + 1) * (2 * (s as i64) + 2 + nu2), 2));
        term /= Float::with_val(wprec, denom);
        sum += &term;
        if term < Float::with_val(wprec, &eps * &sum) {
            break;
        }
    }
    Ok(Float::with_val(prec, sum))
}

fn bessel_closed(nu2: i64, x: &Float, prec: u32) -> Result<Float> {
    let wprec = prec + 64;
    let x = Float::with_val(wprec, x);
    let mut pref = Float::with_val(wprec, 2);
    pref /= pi(wprec) * &x;
    let pref = pref.sqrt();
    let sinh = x.clone().sinh();
    let cosh = x.clone().cosh();
    let val = match nu2 {
        1 => pref * sinh,
        3 => pref * (cosh - sinh / &x),
        5 => {
            let inv2 = x.clone().square().recip();
            let a = (Float::with_val(wprec, 1) + 3u32 * inv2) * sinh;
            let b = Float::with_val(wprec, 3) / &x * cosh;
            pref * (a - b)
        }
        _ => return Err(Error::BesselOrder { nu2 }),
    };
    Ok(Float::with_val(prec, val))
}

/// The infinite product (q; q)_inf = prod_{n >= 1} (1 - q^n) for |q| < 1.
pub fn qpoch_inf(q: &Complex, prec: u32) -> Result<Complex> {
    let mag = cabs(q);
    if !(mag < 1) {
        return Err(Error::InvalidParameter(format!(
            "(q; q)_inf needs |q| < 1, got |q| = {mag}"
        )));
    }
    let eps = term_eps(prec);
    let mut prod = Complex::with_val(prec, (1, 0));
    let mut qn = Complex::with_val(prec, (1, 0));
    for _ in 0..LOOP_CAP {
        qn *= q;
        let factor = Complex::with_val(prec, (1, 0)) - &qn;
        prod *= factor;
        if cabs(&qn) < eps {
            return Ok(prod);
        }
    }
    Err(Error::TruncationCap {
        cap: LOOP_CAP,
        what: "expanding (q; q)_inf",
    })
}

fn check_upper_half(tau: &Complex) -> Result<()> {
    if !(tau.imag().is_finite() && *tau.imag() > 0) {
        return Err(Error::NotUpperHalfPlane(tau.imag().to_string()));
    }
    Ok(())
}

/// e^{2 pi i tau t} for rational t, the canonical fractional power of
/// q = e^{2 pi i tau}.
fn q_power(tau: &Complex, t: &Rational, wprec: u32) -> Complex {
    let mut e = Complex::with_val(wprec, (0, 2));
    e *= pi(wprec);
    e *= tau;
    e *= Float::with_val(wprec, t);
    e.exp()
}

/// Dedekind eta(tau) = e^{pi i tau / 12} (q; q)_inf, Im tau > 0.
pub fn eta(tau: &Complex, prec: u32) -> Result<Complex> {
    check_upper_half(tau)?;
    let wprec = prec + 24;
    let q = q_power(tau, &Rational::from(1), wprec);
    let lead = q_power(tau, &Rational::from((1, 24)), wprec);
    let prod = qpoch_inf(&q, wprec)?;
    Ok(Complex::with_val(prec, lead * prod))
}

/// Odd Jacobi theta: sum over nu in Z + 1/2 of
/// e^{pi i nu^2 tau + 2 pi i nu (u + 1/2)}, summed in cancelling +-nu pairs.
pub fn theta(u: &Complex, tau: &Complex, prec: u32) -> Result<Complex> {
    check_upper_half(tau)?;
    // terms peak near nu = |Im u| / Im tau before quadratic decay wins
    let im_u = u.imag().to_f64().abs();
    let im_tau = tau.imag().to_f64();
    let peak_bits = (std::f64::consts::PI * im_u * im_u / im_tau / std::f64::consts::LN_2).ceil();
    if !(peak_bits.is_finite() && peak_bits < 1_000_000.0) {
        return Err(Error::InvalidParameter(
            "theta argument too far from the real axis".into(),
        ));
    }
    let wprec = prec + 48 + peak_bits as u32;
    let eps = term_eps(prec + 16);
    let pi_w = pi(wprec);

    let mut sum = Complex::with_val(wprec, (0, 0));
    let mut max_mag = Float::with_val(wprec, 0);
    let mut low_streak = 0u32;
    for j in 0..LOOP_CAP {
        // nu = j + 1/2
        let nu = Rational::from((2 * j as i64 + 1, 2));
        // e^{pi i nu^2 tau} * 2 cos(pi nu (2u + 1))
        let mut expo = Complex::with_val(wprec, (0, 1));
        expo *= &pi_w;
        expo *= tau;
        expo *= Float::with_val(wprec, Rational::from(&nu * &nu));
        let gauss = expo.exp();

        let mut w = Complex::with_val(wprec, u);
        w *= 2u32;
        w += 1u32;
        w *= &pi_w;
        w *= Float::with_val(wprec, &nu);
        let mut term = w.cos();
        term *= Float::with_val(wprec, 2);
        term *= gauss;

        sum += &term;
        let mag = cabs(&term);
        if mag > max_mag {
            max_mag = mag.clone();
        }
        if mag < Float::with_val(wprec, &eps * &max_mag) {
            low_streak += 1;
            if low_streak >= 2 {
                return Ok(Complex::with_val(prec, sum));
            }
        } else {
            low_streak = 0;
        }
    }
    Err(Error::TruncationCap {
        cap: LOOP_CAP,
        what: "summing the theta series",
    })
}

/// The multiplier chi(h, h', p) = i^{-1/2} omega_{h,p}^{-1} e^{-pi i (h' - h)/(12 p)}
/// as an exact unit phase; any lift of h' works, shifting eta by the
/// matching factor.
pub fn chi(h: i64, hp: i64, p: i64) -> Result<UnitPhase> {
    if p < 1 {
        return Err(Error::NonPositiveModulus(p));
    }
    let s = dedekind_sum(h, p)?;
    let mut t = Rational::from((-1, 4));
    t -= s;
    t -= Rational::from((hp - h, 12 * p));
    Ok(UnitPhase::new(t))
}

/// Pole-proximity threshold 2^{-prec/2}.
fn pole_floor(prec: u32) -> Float {
    Float::with_val(prec, Float::i_exp(1, -((prec / 2) as i32)))
}

/// Numeric crank generating function
///   C_k(x; q) = (1 - x) / (q; q)_inf^k * sum_{m in Z} (-1)^m q^{m(m+1)/2} / (1 - x q^m),
/// summed bilaterally with the m < 0 tail rewritten as
///   (-1)^{j+1} q^{j(j+1)/2} / (x - q^j), j = -m,
/// so no intermediate grows. At x = 1 the limit (q; q)_inf^{-k} is returned.
pub fn ck_series_eval(
    k: i64,
    x: &Complex,
    q: &Complex,
    prec: u32,
    trunc: Option<usize>,
) -> Result<Complex> {
    if !(1..=12).contains(&k) {
        return Err(Error::KOutOfRange { k, lo: 1, hi: 12 });
    }
    let mag = cabs(q);
    if !(mag < 1) {
        return Err(Error::InvalidParameter(format!(
            "C_k(x; q) needs |q| < 1, got |q| = {mag}"
        )));
    }
    let wprec = prec + 32;
    let poch = qpoch_inf(&Complex::with_val(wprec, q), wprec)?;
    if *x == 1 {
        return Ok(Complex::with_val(prec, poch.pow(-(k as i32))));
    }
    let cap = trunc.unwrap_or(LOOP_CAP);
    let eps = term_eps(prec + 8);
    let floor = pole_floor(prec);
    let one = Complex::with_val(wprec, (1, 0));

    let check_pole = |den: &Complex, what: &'static str| -> Result<()> {
        if cabs(den) < floor {
            return Err(Error::PoleProximity {
                what,
                magnitude: cabs(den).to_string(),
                threshold_log2: prec / 2,
            });
        }
        Ok(())
    };

    // m = 0
    let den0 = one.clone() - x;
    check_pole(&den0, "C_k bilateral sum, m = 0")?;
    let mut sum = den0.recip();
    let mut max_mag = cabs(&sum);

    // m > 0: (-1)^m q^{m(m+1)/2} / (1 - x q^m)
    let mut qm = Complex::with_val(wprec, (1, 0));
    let mut qtri = Complex::with_val(wprec, (1, 0));
    let mut low = 0u32;
    let mut m = 0usize;
    loop {
        m += 1;
        if m > cap {
            return Err(Error::TruncationCap {
                cap,
                what: "C_k bilateral sum, ascending side",
            });
        }
        qm *= q;
        qtri *= &qm;
        let den = one.clone() - (x * &qm).complete((wprec, wprec));
        check_pole(&den, "C_k bilateral sum, ascending side")?;
        let mut term = qtri.clone() / den;
        if m % 2 == 1 {
            term = -term;
        }
        sum += &term;
        let tm = cabs(&term);
        if tm > max_mag {
            max_mag = tm.clone();
        }
        if tm < Float::with_val(wprec, &eps * &max_mag) {
            low += 1;
            if low >= 2 {
                break;
            }
        } else {
            low = 0;
        }
    }

    // m = -j < 0, rewritten with positive powers only
    let mut qj = Complex::with_val(wprec, (1, 0));
    let mut qtri2 = Complex::with_val(wprec, (1, 0));
    low = 0;
    let mut j = 0usize;
    loop {
        j += 1;
        if j > cap {
            return Err(Error::TruncationCap {
                cap,
                what: "C_k bilateral sum, descending side",
            });
        }
        qj *= q;
        qtri2 *= &qj;
        let den = (x - &qj).complete((wprec, wprec));
        check_pole(&den, "C_k bilateral sum, descending side")?;
        let mut term = qtri2.clone() / den;
        if j % 2 == 0 {
            term = -term;
        }
        sum += &term;
        let tm = cabs(&term);
        if tm > max_mag {
            max_mag = tm.clone();
        }
        if tm < Float::with_val(wprec, &eps * &max_mag) {
            low += 1;
            if low >= 2 {
                break;
            }
        } else {
            low = 0;
        }
    }

    let mut pref = one - x;
    pref *= poch.pow(-(k as i32));
    Ok(Complex::with_val(prec, pref * sum))
}

/// Four-variable crank sum taken at tau (q = e^{2 pi i tau}, Im tau > 0):
///   C_k(a, b, c; q) = i / (2 (q; q)_inf^k) * sum_{m in Z}
///     (-1)^m e^{-pi i a/c} q^{m(m+1)/2 + b/(2c)} / (1 - e^{-2 pi i a/c} q^{m + b/c}).
/// Needs 0 < b < c so both directions decay; the m < 0 side is rewritten
/// with positive q-powers before evaluation.
pub fn ck4_eval_tau(
    k: i64,
    a: i64,
    b: i64,
    c: i64,
    tau: &Complex,
    prec: u32,
    trunc: Option<usize>,
) -> Result<Complex> {
    if !(1..=12).contains(&k) {
        return Err(Error::KOutOfRange { k, lo: 1, hi: 12 });
    }
    if c < 1 {
        return Err(Error::NonPositiveModulus(c));
    }
    if b <= 0 || b >= c {
        return Err(Error::InvalidParameter(format!(
            "four-variable crank sum needs 0 < b < c, got b = {b}, c = {c}"
        )));
    }
    check_upper_half(tau)?;
    let wprec = prec + 32;
    let cap = trunc.unwrap_or(LOOP_CAP);
    let eps = term_eps(prec + 8);
    let floor = pole_floor(prec);

    let q = q_power(tau, &Rational::from(1), wprec);
    let phase_a = UnitPhase::new(Rational::from((-a, c))).eval(wprec);
    let zeta = UnitPhase::new(Rational::from((-2 * a, c))).eval(wprec);
    let zeta_inv = UnitPhase::new(Rational::from((2 * a, c))).eval(wprec);

    let check_pole = |den: &Complex| -> Result<()> {
        if cabs(den) < floor {
            return Err(Error::PoleProximity {
                what: "four-variable crank sum",
                magnitude: cabs(den).to_string(),
                threshold_log2: prec / 2,
            });
        }
        Ok(())
    };

    let one = Complex::with_val(wprec, (1, 0));
    let mut sum = Complex::with_val(wprec, (0, 0));
    let mut max_mag = Float::with_val(wprec, 0);

    // m >= 0: numerator power m(m+1)/2 + b/(2c), denominator power m + b/c
    let mut num_pow = q_power(tau, &Rational::from((b, 2 * c)), wprec);
    let mut den_pow = q_power(tau, &Rational::from((b, c)), wprec);
    let mut qm = Complex::with_val(wprec, (1, 0));
    let mut low = 0u32;
    let mut m = 0usize;
    loop {
        if m > cap {
            return Err(Error::TruncationCap {
                cap,
                what: "four-variable crank sum, ascending side",
            });
        }
        let den = one.clone() - (&zeta * &den_pow).complete((wprec, wprec));
        check_pole(&den)?;
        let mut term = (&phase_a * &num_pow).complete((wprec, wprec)) / den;
        if m % 2 == 1 {
            term = -term;
        }
        sum += &term;
        let tm = cabs(&term);
        if tm > max_mag {
            max_mag = tm.clone();
        }
        if m >= 1 && tm < Float::with_val(wprec, &eps * &max_mag) {
            low += 1;
            if low >= 2 {
                break;
            }
        } else {
            low = 0;
        }
        m += 1;
        qm *= &q;
        num_pow *= &qm; // exponent gains m going m-1 -> m
        den_pow *= &q;
    }

    // m = -j < 0: term = -(-1)^j e^{-pi i a/c} zeta^{-1}
    //   q^{j(j+1)/2 - b/(2c)} / (1 - zeta^{-1} q^{j - b/c})
    let mut num_pow = q_power(tau, &Rational::from((2 * c - b, 2 * c)), wprec); // j = 1
    let mut den_pow = q_power(tau, &Rational::from((c - b, c)), wprec);
    let mut qj = q.clone();
    low = 0;
    let mut j = 1usize;
    loop {
        if j > cap {
            return Err(Error::TruncationCap {
                cap,
                what: "four-variable crank sum, descending side",
            });
        }
        let den = one.clone() - (&zeta_inv * &den_pow).complete((wprec, wprec));
        check_pole(&den)?;
        let mut term = (&phase_a * &num_pow).complete((wprec, wprec)) / den;
        term *= &zeta_inv;
        // sign -(-1)^j from pulling the dominant factor out of the denominator
        if j % 2 == 0 {
            term = -term;
        }
        sum += &term;
        let tm = cabs(&term);
        if tm > max_mag {
            max_mag = tm.clone();
        }
        if tm < Float::with_val(wprec, &eps * &max_mag) {
            low += 1;
            if low >= 2 {
                break;
            }
        } else {
            low = 0;
        }
        j += 1;
        qj *= &q;
        num_pow *= &qj;
        den_pow *= &q;
    }

    let poch = qpoch_inf(&q, wprec)?;
    let mut pref = Complex::with_val(wprec, (0, 1));
    pref /= Float::with_val(wprec, 2);
    pref *= poch.pow(-(k as i32));
    Ok(Complex::with_val(prec, pref * sum))
}

/// Four-variable crank sum at a point q, taking the principal logarithm to
/// define the fractional powers of q.
pub fn ck4_eval(
    k: i64,
    a: i64,
    b: i64,
    c: i64,
    q: &Complex,
    prec: u32,
    trunc: Option<usize>,
) -> Result<Complex> {
    let wprec = prec + 32;
    let mag = cabs(q);
    if !(mag < 1) || *q == 0 {
        return Err(Error::InvalidParameter(format!(
            "four-variable crank sum needs 0 < |q| < 1, got |q| = {mag}"
        )));
    }
    let mut tau = Complex::with_val(wprec, q).ln();
    tau /= pi(wprec) * Float::with_val(wprec, 2);
    let tau = tau.mul_i(true); // divide by i
    ck4_eval_tau(k, a, b, c, &tau, prec, trunc)
}

/// Which transformation law to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformCase {
    Eta,
    ThetaT2,
    CkDivides,
    CkNotDivides,
}

/// Inputs for `verify_transform`. `z` must have positive real part; `u` is
/// only read by the theta case; `k`, `a`, `c` are ignored by the pure eta
/// and theta cases.
#[derive(Clone, Debug)]
pub struct TransformParams {
    pub k: i64,
    pub a: i64,
    pub c: i64,
    pub p: i64,
    pub h: i64,
    pub z: Complex,
    pub u: Option<Complex>,
}

fn check_right_half(z: &Complex) -> Result<()> {
    if !(z.real().is_finite() && *z.real() > 0) {
        return Err(Error::NotRightHalfPlane(z.real().to_string()));
    }
    Ok(())
}

/// z^{k/2 - 1} through the principal logarithm, assembled as
/// z^{floor} * sqrt(z) so only one square root is taken; exact for even k.
fn z_pow_half(z: &Complex, k: i64, wprec: u32) -> Complex {
    let e2 = k - 2; // exponent is e2 / 2
    let z = Complex::with_val(wprec, z);
    if e2 % 2 == 0 {
        z.pow((e2 / 2) as i32)
    } else {
        let m = (e2 - 1) / 2;
        z.clone().pow(m as i32) * z.sqrt()
    }
}

/// Evaluates both sides of the selected transformation law and returns the
/// absolute residual |lhs - rhs| at `prec` bits. A vanishing residual at
/// high precision is the acceptance signal; any algebra slip shows up as an
/// O(1) residual instead.
pub fn verify_transform(case: TransformCase, params: &TransformParams, prec: u32) -> Result<Float> {
    let wprec = prec + 64;
    let TransformParams { k, a, c, p, h, z, u } = params;
    let (k, a, c, p, h) = (*k, *a, *c, *p, *h);
    check_right_half(z)?;
    if p < 1 {
        return Err(Error::NonPositiveModulus(p));
    }
    let z = Complex::with_val(wprec, z);
    let hp = inverse_neg(h, p)?;
    let pf = Float::with_val(wprec, p);

    // tau1 = (h + i z)/p, tau2 = (h' + i/z)/p
    let iz = z.clone().mul_i(false);
    let izi = z.clone().recip().mul_i(false);
    let mut tau1 = iz;
    tau1 += Float::with_val(wprec, h);
    tau1 /= &pf;
    let mut tau2 = izi;
    tau2 += Float::with_val(wprec, hp);
    tau2 /= &pf;

    // sqrt(i/z), principal; i/z stays off the branch cut for Re z > 0
    let root = z.clone().recip().mul_i(false).sqrt();

    let residual = match case {
        TransformCase::Eta => {
            let lhs = eta(&tau1, wprec)?;
            let mut rhs = root;
            rhs *= chi(h, hp, p)?.eval(wprec);
            rhs *= eta(&tau2, wprec)?;
            cabs(&(lhs - rhs))
        }
        TransformCase::ThetaT2 => {
            let u = u.clone().ok_or_else(|| {
                Error::InvalidParameter("theta transformation needs the elliptic argument".into())
            })?;
            let u = Complex::with_val(wprec, u);
            let lhs = theta(&u, &tau1, wprec)?;
            // chi^3 sqrt(i/z) e^{-pi p u^2 / z} theta(i u / z; tau2)
            let mut rhs = chi(h, hp, p)?.pow(3).eval(wprec);
            rhs *= &root;
            let mut gauss = u.clone().square();
            gauss *= &pf;
            gauss *= -pi(wprec);
            gauss /= &z;
            rhs *= gauss.exp();
            let u2 = (u.clone() / &z).mul_i(false);
            rhs *= theta(&u2, &tau2, wprec)?;
            cabs(&(lhs - rhs))
        }
        TransformCase::CkDivides => {
            if c < 2 || p % c != 0 {
                return Err(Error::ExpectedDivides { c, p });
            }
            let fr = frame(a, c, p, h)?;
            let x1 = UnitPhase::new(Rational::from((2 * a, c))).eval(wprec);
            let q1 = q_power(&tau1, &Rational::from(1), wprec);
            let lhs = ck_series_eval(k, &x1, &q1, wprec, None)?;

            let x2 = UnitPhase::new(Rational::from((2 * a * fr.hp, c))).eval(wprec);
            let q2 = q_power(&tau2, &Rational::from(1), wprec);
            let ck2 = ck_series_eval(k, &x2, &q2, wprec, None)?;

            let sin1 = sin_pi_rational(&Rational::from((a, c)), wprec);
            let sin2 = sin_pi_rational(&Rational::from((a * fr.hp, c)), wprec);
            if sin2.clone().abs() < pole_floor(wprec) {
                return Err(Error::PoleProximity {
                    what: "sin(pi a h'/c) in the divides branch",
                    magnitude: sin2.to_string(),
                    threshold_log2: wprec / 2,
                });
            }
            // i sin(pi omega1)/sin(pi omega2) z^{k/2-1}
            //   (-1)^{ap+1} omega_{h,p}^k e^{(k pi /12p)(1/z - z) - pi i a^2 p1 h'/(c c1)}
            let mut t = Rational::from((a * p + 1, 1));
            t += Rational::from(k) * dedekind_sum(h, p)?;
            t -= Rational::from((a * a * fr.p1 * fr.hp, c * fr.c1));
            t += Rational::from((1, 2)); // the standalone factor i
            let phase = UnitPhase::new(t).eval(wprec);

            let mut growth = z.clone().recip();
            growth -= &z;
            growth *= pi(wprec);
            growth *= Float::with_val(wprec, Rational::from((k, 12 * p)));
            let growth = growth.exp();

            let mut rhs = phase;
            rhs *= sin1;
            rhs /= sin2;
            rhs *= z_pow_half(&z, k, wprec);
            rhs *= growth;
            rhs *= ck2;
            cabs(&(lhs - rhs))
        }
        TransformCase::CkNotDivides => {
            if c < 2 || p % c == 0 {
                return Err(Error::ExpectedNotDivides { c, p });
            }
            let fr = frame(a, c, p, h)?;
            let l = fr.l.expect("c does not divide p, so l exists");
            let x1 = UnitPhase::new(Rational::from((2 * a, c))).eval(wprec);
            let q1 = q_power(&tau1, &Rational::from(1), wprec);
            let lhs = ck_series_eval(k, &x1, &q1, wprec, None)?;

            // 4 i (-1)^{ap+l+1} sin(pi omega1) z^{k/2-1} omega_{h,p}^k
            //   e^{-pi i a^2 p1 h'/(c c1) + 2 pi i a l h'/(c c1)}
            //   e^{(k pi /12 p)(1/z - z)} q1^{-l^2/(2 c1^2)} C_k(a h', l c/c1, c; q1)
            let mut t = Rational::from((a * p + l + 1, 1));
            t += Rational::from(k) * dedekind_sum(h, p)?;
            t -= Rational::from((a * a * fr.p1 * fr.hp, c * fr.c1));
            t += Rational::from((2 * a * l * fr.hp, c * fr.c1));
            t += Rational::from((1, 2));
            let phase = UnitPhase::new(t).eval(wprec);

            let sin1 = sin_pi_rational(&Rational::from((a, c)), wprec);

            let mut growth = z.clone().recip();
            growth -= &z;
            growth *= pi(wprec);
            growth *= Float::with_val(wprec, Rational::from((k, 12 * p)));
            let growth = growth.exp();

            let qpow = q_power(
                &tau2,
                &-Rational::from((l * l, 2 * fr.c1 * fr.c1)),
                wprec,
            );
            let ck4 = ck4_eval_tau(k, a * fr.hp, l * (c / fr.c1), c, &tau2, wprec, None)?;

            let mut rhs = phase;
            rhs *= Float::with_val(wprec, 4);
            rhs *= sin1;
            rhs *= z_pow_half(&z, k, wprec);
            rhs *= growth;
            rhs *= qpow;
            rhs *= ck4;
            cabs(&(lhs - rhs))
        }
    };
    Ok(Float::with_val(prec, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f64_of(x: &Float) -> f64 {
        x.to_f64()
    }

    fn tiny(prec: i32) -> Float {
        Float::with_val(64, Float::i_exp(1, -prec))
    }

    #[test]
    fn bessel_half_order_value() {
        // I_{1/2}(1) = sqrt(2/pi) sinh(1)
        let x = Float::with_val(128, 1);
        let v = bessel_i(1, &x, 128, BesselMethod::Series).unwrap();
        assert!((f64_of(&v) - 0.937674888245489).abs() < 1e-13);
        let c = bessel_i(1, &x, 128, BesselMethod::ClosedForm).unwrap();
        let diff = (v - c).abs();
        assert!(diff < tiny(120));
    }

    #[test]
    fn bessel_series_matches_closed_forms() {
        for nu2 in [1i64, 3, 5] {
            for xv in [0.5f64, 1.0, 2.0, 5.0, 10.0, 20.0] {
                let x = Float::with_val(128, xv);
                let s = bessel_i(nu2, &x, 128, BesselMethod::Series).unwrap();
                let c = bessel_i(nu2, &x, 128, BesselMethod::ClosedForm).unwrap();
                let rel = ((s.clone() - &c) / c).abs();
                assert!(rel < tiny(120), "nu2 = {nu2}, x = {xv}, rel = {rel}");
            }
        }
    }

    #[test]
    fn bessel_three_term_recurrence() {
        // I_{nu-1}(x) - I_{nu+1}(x) = (2 nu / x) I_nu(x)
        for nu2 in [3i64, 5, 7, 9, 11] {
            for xv in [0.5f64, 2.0, 10.0] {
                let x = Float::with_val(128, xv);
                let lo = bessel_i(nu2 - 2, &x, 128, BesselMethod::Series).unwrap();
                let hi = bessel_i(nu2 + 2, &x, 128, BesselMethod::Series).unwrap();
                let mid = bessel_i(nu2, &x, 128, BesselMethod::Series).unwrap();
                let lhs = lo - hi;
                let rhs = Float::with_val(160, nu2) / &x * mid;
                let scale = lhs.clone().abs().max(&rhs.clone().abs());
                let resid = ((lhs - rhs) / scale).abs();
                assert!(resid < tiny(110), "nu2 = {nu2}, x = {xv}, resid = {resid}");
            }
        }
    }

    #[test]
    fn bessel_rejects_bad_input() {
        let x = Float::with_val(64, 1);
        assert!(bessel_i(0, &x, 64, BesselMethod::Series).is_err());
        assert!(bessel_i(17, &x, 64, BesselMethod::Series).is_err());
        assert!(bessel_i(4, &x, 64, BesselMethod::ClosedForm).is_err());
        let neg = Float::with_val(64, -1);
        assert!(bessel_i(1, &neg, 64, BesselMethod::Series).is_err());
    }

    #[test]
    fn eta_at_i() {
        // eta(i) = Gamma(1/4) / (2 pi^{3/4})
        let prec = 192;
        let tau = Complex::with_val(prec, (0, 1));
        let v = eta(&tau, prec).unwrap();
        let gamma_q = Float::with_val(prec, Rational::from((1, 4))).gamma();
        let want = gamma_q / (Float::with_val(prec, 2) * pi(prec).pow(3u32).root(4));
        let resid = cabs(&(v - Complex::with_val(prec, (want, Float::new(prec)))));
        assert!(resid < tiny(180), "resid = {resid}");
    }

    #[test]
    fn eta_functional_equation_on_the_imaginary_axis() {
        // p = 1, h = 0: eta(i z) = sqrt(i / (i z)) ... reduces to eta(i/z) = sqrt(z) eta(iz)
        for zv in [0.7f64, 1.0, 1.9] {
            let params = TransformParams {
                k: 1,
                a: 1,
                c: 2,
                p: 1,
                h: 0,
                z: Complex::with_val(256, (zv, 0)),
                u: None,
            };
            let r = verify_transform(TransformCase::Eta, &params, 256).unwrap();
            assert!(r < tiny(220), "z = {zv}, resid = {r}");
        }
    }

    #[test]
    fn theta_vanishes_at_zero_and_matches_triple_product() {
        let prec = 192;
        let tau = Complex::with_val(prec, (0.13, 0.41));
        let zero = Complex::with_val(prec, (0, 0));
        let t0 = theta(&zero, &tau, prec).unwrap();
        assert!(cabs(&t0) < tiny(170));

        // theta(u; tau) = -2 sin(pi u) q^{1/8} prod (1-q^n)(1-x q^n)(1-x^{-1} q^n)
        let u = Complex::with_val(prec, (0.31, 0.07));
        let lhs = theta(&u, &tau, prec).unwrap();
        let q = q_power(&tau, &Rational::from(1), prec);
        let x = {
            let mut e = Complex::with_val(prec, (0, 2));
            e *= pi(prec);
            e *= &u;
            e.exp()
        };
        let mut rhs = (u.clone() * pi(prec)).sin();
        rhs *= Float::with_val(prec, -2);
        rhs *= q_power(&tau, &Rational::from((1, 8)), prec);
        rhs *= qpoch_inf(&q, prec).unwrap();
        let mut prod_x = Complex::with_val(prec, (1, 0));
        let mut prod_xi = Complex::with_val(prec, (1, 0));
        let xi = x.clone().recip();
        let mut qn = Complex::with_val(prec, (1, 0));
        for _ in 0..2000 {
            qn *= &q;
            prod_x *= Complex::with_val(prec, (1, 0)) - (&x * &qn).complete((prec, prec));
            prod_xi *= Complex::with_val(prec, (1, 0)) - (&xi * &qn).complete((prec, prec));
            if cabs(&qn) < tiny(200) {
                break;
            }
        }
        rhs *= prod_x;
        rhs *= prod_xi;
        let resid = cabs(&(lhs - rhs));
        assert!(resid < tiny(150), "resid = {resid}");
    }

    #[test]
    fn theta_modular_transformation() {
        let params = TransformParams {
            k: 1,
            a: 1,
            c: 2,
            p: 3,
            h: 2,
            z: Complex::with_val(256, (0.8, 0.3)),
            u: Some(Complex::with_val(256, (0.27, -0.04))),
        };
        let r = verify_transform(TransformCase::ThetaT2, &params, 256).unwrap();
        assert!(r < tiny(200), "resid = {r}");
    }

    #[test]
    fn chi_at_the_identity_cusp() {
        let ph = chi(0, 0, 1).unwrap();
        assert_eq!(ph.exponent(), &Rational::from((7, 4)));
    }

    #[test]
    fn ck_series_at_x_one_is_inverse_euler_power() {
        let prec = 128;
        let q = Complex::with_val(prec, (0.12, 0.05));
        let one = Complex::with_val(prec, (1, 0));
        for k in [1i64, 4] {
            let v = ck_series_eval(k, &one, &q, prec, None).unwrap();
            let want = qpoch_inf(&Complex::with_val(prec + 32, &q), prec + 32)
                .unwrap()
                .pow(-(k as i32));
            let resid = cabs(&(v - Complex::with_val(prec, want)));
            assert!(resid < tiny(100), "k = {k}, resid = {resid}");
        }
    }

    #[test]
    fn ck_series_matches_integer_table() {
        // sum_n row_n(x) q^n from the exact table against the bilateral series
        let prec = 160;
        let n_max = 48;
        for k in [1i64, 2, 3, 5] {
            let table = crate::qseries::CrankTable::build(k, n_max).unwrap();
            let q = Complex::with_val(prec, (0.08, 0.03));
            let x = UnitPhase::new(Rational::from((2, 5))).eval(prec);
            let direct = ck_series_eval(k, &x, &q, prec, None).unwrap();
            let mut fromtable = Complex::with_val(prec, (0, 0));
            let mut qn = Complex::with_val(prec, (1, 0));
            let xi = x.clone().recip();
            for n in 0..=n_max {
                let row = table.row(n);
                let mut rowval = Complex::with_val(prec, (0, 0));
                let mut xp = Complex::with_val(prec, (1, 0));
                for m in 0..=n as i64 {
                    let idx = (m + n as i64) as usize;
                    if row[idx] != 0 {
                        let mut t = xp.clone();
                        t *= Float::with_val(prec, &row[idx]);
                        rowval += t;
                    }
                    xp *= &x;
                }
                let mut xn = xi.clone();
                for m in 1..=n as i64 {
                    let idx = (-m + n as i64) as usize;
                    if row[idx] != 0 {
                        let mut t = xn.clone();
                        t *= Float::with_val(prec, &row[idx]);
                        rowval += t;
                    }
                    xn *= &xi;
                }
                fromtable += rowval * &qn;
                qn *= &q;
            }
            let resid = cabs(&(direct - fromtable));
            // tail of the table truncation dominates: |q|^{n_max+1} ~ 2^{-170}
            assert!(resid < tiny(120), "k = {k}, resid = {resid}");
        }
    }

    #[test]
    fn ck4_tau_and_point_forms_agree() {
        let prec = 128;
        let tau = Complex::with_val(prec + 32, (0.21, 0.37));
        let q = q_power(&tau, &Rational::from(1), prec + 32);
        let a = ck4_eval_tau(3, 2, 1, 3, &tau, prec, None).unwrap();
        let b = ck4_eval(3, 2, 1, 3, &q, prec, None).unwrap();
        let resid = cabs(&(a - b));
        assert!(resid < tiny(100), "resid = {resid}");
    }

    #[test]
    fn ck_transform_divides_branch() {
        let params = TransformParams {
            k: 3,
            a: 1,
            c: 3,
            p: 3,
            h: 1,
            z: Complex::with_val(256, (1.0, 0.0)),
            u: None,
        };
        let r = verify_transform(TransformCase::CkDivides, &params, 256).unwrap();
        assert!(r < tiny(200), "resid = {r}");
    }

    #[test]
    fn ck_transform_not_divides_branch() {
        let params = TransformParams {
            k: 3,
            a: 1,
            c: 3,
            p: 2,
            h: 1,
            z: Complex::with_val(256, (0.9, 0.2)),
            u: None,
        };
        let r = verify_transform(TransformCase::CkNotDivides, &params, 256).unwrap();
        assert!(r < tiny(200), "resid = {r}");
    }

    #[test]
    fn transform_rejects_left_half_plane() {
        let params = TransformParams {
            k: 1,
            a: 1,
            c: 2,
            p: 1,
            h: 0,
            z: Complex::with_val(64, (-1.0, 0.0)),
            u: None,
        };
        assert!(matches!(
            verify_transform(TransformCase::Eta, &params, 64),
            Err(Error::NotRightHalfPlane(_))
        ));
    }
}
