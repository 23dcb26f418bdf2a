//! Certified inequality machinery: the positive main term T1, the explicit
//! error ledger T~0..T~9, crossover thresholds, the k = 3 bound chain down
//! to the two-sided p3 sandwich, and exact-integer verification of the
//! ordering, log-subadditivity and log-concavity claims on finite windows.
//!
//! Rounding discipline: quantities used as upper bounds are rounded up at
//! the output precision, lower bounds down, each with a few extra ulp steps
//! to absorb guard-bit slop, so a reported positive margin is a true
//! positive margin. Exact-table verifiers use integer arithmetic only.

use crate::error::{Error, Result};
use crate::modular::{cos_pi_rational, sin_pi_rational};
use crate::qseries::{pk_table, ResidueTable};
use crate::special::{bessel_i, BesselMethod};
use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::collections::BTreeMap;

fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

const GUARD: u32 = 64;

/// Round to `prec` in the given direction, then take four more ulp steps
/// the same way; the inputs carry GUARD extra bits, so this absorbs every
/// accumulated rounding error.
fn round_dir(v: &Float, prec: u32, round: Round) -> Float {
    let (mut r, _) = Float::with_val_round(prec, v, round);
    for _ in 0..4 {
        match round {
            Round::Up => {
                r.next_up();
            }
            _ => {
                r.next_down();
            }
        }
    }
    r
}

fn round_up(v: &Float, prec: u32) -> Float {
    round_dir(v, prec, Round::Up)
}

fn round_down(v: &Float, prec: u32) -> Float {
    round_dir(v, prec, Round::Down)
}

/// delta0 = 1/(2c^2) - 1/(2c) + k/24, the largest exponent parameter that
/// occurs among the positive-delta terms.
pub fn delta0_rat(c: i64, k: i64) -> Rational {
    Rational::from((1, 2 * c * c)) - Rational::from((1, 2 * c)) + Rational::from((k, 24))
}

/// rho_1(a, b, c) = cos(2 pi a / c) - cos(2 pi b / c).
pub fn rho1(a: i64, b: i64, c: i64, prec: u32) -> Float {
    cos_pi_rational(&Rational::from((2 * a, c)), prec)
        - cos_pi_rational(&Rational::from((2 * b, c)), prec)
}

fn check_t1_shape(a: i64, b: i64, c: i64, k: i64, n: i64) -> Result<()> {
    if c < 3 || c % 2 == 0 {
        return Err(Error::OddCRequired { c, min: 3 });
    }
    if !(3..=12).contains(&k) {
        return Err(Error::KOutOfRange { k, lo: 3, hi: 12 });
    }
    if !(0 <= a && a < b && b <= (c - 1) / 2) {
        return Err(Error::Hypotheses(format!(
            "need 0 <= a < b <= (c-1)/2, got a = {a}, b = {b}, c = {c}"
        )));
    }
    if n < 2 {
        return Err(Error::NonPositiveArgument(format!("n = {n}, need n >= 2")));
    }
    Ok(())
}

fn check_t1_hypotheses(a: i64, b: i64, c: i64, k: i64, n: i64) -> Result<()> {
    check_t1_shape(a, b, c, k, n)?;
    let odd_k_case = k % 2 == 1 && (5..=12).contains(&k);
    let k3_case = k == 3 && c >= 5;
    if !(odd_k_case || k3_case) {
        return Err(Error::Hypotheses(format!(
            "need odd k in [5,12] (any odd c >= 3), or k = 3 with odd c >= 5; got k = {k}, c = {c}"
        )));
    }
    Ok(())
}

/// T1 evaluated at working precision, no directional rounding.
fn t1_value(a: i64, b: i64, c: i64, k: i64, n: i64, wprec: u32) -> Result<Float> {
    let d0 = delta0_rat(c, k);
    let k4 = Float::with_val(wprec, Rational::from((k, 4)));
    let base = Float::with_val(wprec, 24 * n - k);
    let arg = (Float::with_val(wprec, Rational::from(&d0 * Rational::from((2 * (24 * n - k), 3))))
        .sqrt())
        * pi(wprec);
    let bess = bessel_i(k, &arg, wprec, BesselMethod::Series)?;
    let mut v = rho1(a, b, c, wprec);
    v *= 8u32;
    v *= Float::with_val(wprec, 24).pow(&k4);
    v *= pi(wprec);
    v *= Float::with_val(wprec, &d0).pow(&k4);
    v *= sin_pi_rational(&Rational::from((1, c)), wprec);
    v /= Float::with_val(wprec, c);
    v /= base.pow(&k4);
    v *= bess;
    Ok(v)
}

/// The positive main term
///   T1 = rho_1(a,b,c) 8 * 24^{k/4} pi delta0^{k/4} sin(pi/c)
///        / (c (24n-k)^{k/4}) * I_{k/2}(pi sqrt(2 delta0 (24n-k)/3)),
/// rounded down. Requires the ordering-theorem hypotheses: 0 <= a < b <=
/// (c-1)/2 with odd c, and either odd k in [5,12] or k = 3 with c >= 5.
pub fn main_term_t1(a: i64, b: i64, c: i64, k: i64, n: i64, prec: u32) -> Result<Float> {
    check_t1_hypotheses(a, b, c, k, n)?;
    let v = t1_value(a, b, c, k, n, prec + GUARD)?;
    Ok(round_down(&v, prec))
}

/// The three exponential-sum constants of the error analysis, each with a
/// certified tail bound: value is a nearest rounding of the truncated sum,
/// and value + tail is a true upper bound for the full sum.
#[derive(Clone, Debug)]
pub struct Constants {
    pub k: i64,
    pub c1: Float,
    pub c1_tail: Float,
    pub c2: Float,
    pub c2_tail: Float,
    pub c3: Float,
    pub c3_tail: Float,
}

impl Constants {
    pub fn c1_hi(&self) -> Float {
        let prec = self.c1.prec();
        round_up(&Float::with_val(prec + 8, &self.c1 + &self.c1_tail), prec)
    }
    pub fn c2_hi(&self) -> Float {
        let prec = self.c2.prec();
        round_up(&Float::with_val(prec + 8, &self.c2 + &self.c2_tail), prec)
    }
    pub fn c3_hi(&self) -> Float {
        let prec = self.c3.prec();
        round_up(&Float::with_val(prec + 8, &self.c3 + &self.c3_tail), prec)
    }
}

/// c1 = sum_{n>=1} p_k(n) e^{-pi n};
/// c2 = sum_{m>=1} e^{-pi m(m+1)/2} / (1 - e^{-pi m});
/// c3 = sum_{m>=2} e^{-pi m(m+1)/2} / (1 - e^{-pi (m-1)}).
/// Tails are certified: p_k(n) <= F_k(e^{-2}) e^{2n} bounds the c1 tail by
/// a geometric series with ratio e^{2-pi}; the c2/c3 term ratios are below
/// e^{-2 pi}, so twice the first omitted term bounds those tails.
pub fn constants(k: i64, prec: u32) -> Result<Constants> {
    if !(1..=12).contains(&k) {
        return Err(Error::KOutOfRange { k, lo: 1, hi: 12 });
    }
    let wprec = prec + GUARD;
    let pi_w = pi(wprec);
    let x = (-pi_w.clone()).exp();

    // F_k(e^{-2}) = prod_j (1 - e^{-2j})^{-k}, truncated once the factors
    // are below working epsilon; the omitted factors only shrink the
    // product we are inverting, so a (1 + 2^{-wprec/2}) bump keeps the
    // bound valid
    let y = (-Float::with_val(wprec, 2)).exp();
    let mut poch = Float::with_val(wprec, 1);
    let mut yj = Float::with_val(wprec, 1);
    loop {
        yj *= &y;
        if yj.clone().abs() < Float::with_val(wprec, Float::i_exp(1, -((wprec / 2) as i32))) {
            break;
        }
        poch *= Float::with_val(wprec, 1 - yj.clone());
    }
    let mut fk = poch.pow(Float::with_val(wprec, -k));
    fk *= Float::with_val(wprec, 1) + Float::with_val(wprec, Float::i_exp(1, -((wprec / 2) as i32)));

    // pick the c1 truncation point from a float estimate, then certify the
    // tail in exact-direction arithmetic and extend if it is not yet small
    let ln_ratio = std::f64::consts::PI - 2.0;
    let mut n0 = (((prec as f64 + 24.0) * std::f64::consts::LN_2 + fk.to_f64().ln().max(0.0))
        / ln_ratio)
        .ceil() as i64
        + 4;
    let (c1, c1_tail) = loop {
        let table = pk_table(k, n0 as usize)?;
        // Horner from the top keeps every intermediate bounded
        let mut s = Float::new(wprec);
        for n in (1..=n0).rev() {
            s += Float::with_val(wprec, &table[n as usize]);
            s *= &x;
        }
        // tail <= F_k rho^{n0+1} / (1 - rho), rho = e^{2 - pi}
        let rho = (Float::with_val(wprec, 2) - pi_w.clone()).exp();
        let mut tail = fk.clone();
        tail *= rho.clone().pow(Float::with_val(wprec, n0 + 1));
        tail /= Float::with_val(wprec, 1) - rho;
        if tail < Float::with_val(wprec, Float::i_exp(1, -(prec as i32 + 8))) {
            break (s, tail);
        }
        n0 += 32;
    };

    let term2 = |m: i64| -> Float {
        let num = (-pi_w.clone() * Float::with_val(wprec, Rational::from((m * (m + 1), 2)))).exp();
        let den = Float::with_val(wprec, 1) - (-pi_w.clone() * Float::with_val(wprec, m)).exp();
        num / den
    };
    let term3 = |m: i64| -> Float {
        let num = (-pi_w.clone() * Float::with_val(wprec, Rational::from((m * (m + 1), 2)))).exp();
        let den = Float::with_val(wprec, 1) - (-pi_w.clone() * Float::with_val(wprec, m - 1)).exp();
        num / den
    };
    let eps = Float::with_val(wprec, Float::i_exp(1, -(prec as i32 + 16)));
    let mut c2 = Float::new(wprec);
    let mut m = 1i64;
    let c2_tail = loop {
        let t = term2(m);
        if t < eps {
            break t * 2u32;
        }
        c2 += t;
        m += 1;
    };
    let mut c3 = Float::new(wprec);
    m = 2;
    let c3_tail = loop {
        let t = term3(m);
        if t < eps {
            break t * 2u32;
        }
        c3 += t;
        m += 1;
    };

    Ok(Constants {
        k,
        c1: Float::with_val(prec, &c1),
        c1_tail: round_up(&c1_tail, prec),
        c2: Float::with_val(prec, &c2),
        c2_tail: round_up(&c2_tail, prec),
        c3: Float::with_val(prec, &c3),
        c3_tail: round_up(&c3_tail, prec),
    })
}

/// The ten closed-form error bounds alongside the main term, with the
/// multiplicity weights used to combine them, all at one (a, b, c, k, n).
#[derive(Clone, Debug)]
pub struct BoundLedger {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub k: i64,
    pub n: i64,
    pub delta0: Rational,
    /// Rounded down.
    pub t1: Float,
    /// Each rounded up.
    pub ttilde: [Float; 10],
    pub weights: [i64; 10],
    /// Rounded up.
    pub weighted_sum: Float,
    /// t1 - weighted_sum, rounded down; positive implies the true margin
    /// is positive.
    pub margin: Float,
}

/// Default per-index multiplicities: the decomposition sums over
/// beta = 1..(c-1)/2 and both signs. T~0 covers every beta; T~1 covers the
/// beta >= 2 pairs (both signs); T~2 and T~3 are the beta = 1 refinements;
/// T~4..T~9 cover every beta.
pub fn default_weights(c: i64) -> [i64; 10] {
    let half = (c - 1) / 2;
    let mut w = [half; 10];
    w[1] = 2 * (half - 1).max(0);
    w[2] = 1;
    w[3] = 1;
    w
}

/// Builds the ledger with the default weights, evaluating the constants
/// afresh; use `bound_ledger_with` to reuse a `Constants` across many n.
pub fn bound_ledger(a: i64, b: i64, c: i64, k: i64, n: i64, prec: u32) -> Result<BoundLedger> {
    let consts = constants(k, prec + GUARD)?;
    bound_ledger_with(a, b, c, k, n, prec, &consts, default_weights(c))
}

pub fn bound_ledger_with(
    a: i64,
    b: i64,
    c: i64,
    k: i64,
    n: i64,
    prec: u32,
    consts: &Constants,
    weights: [i64; 10],
) -> Result<BoundLedger> {
    check_t1_shape(a, b, c, k, n)?;
    if weights.iter().any(|&w| w < 0) {
        return Err(Error::InvalidParameter("weights must be nonnegative".into()));
    }
    let wprec = prec + GUARD;
    let d0 = delta0_rat(c, k);
    let k4 = Float::with_val(wprec, Rational::from((k, 4)));
    let base = Float::with_val(wprec, 24 * n - k); // 24n - k
    let base_k4 = base.clone().pow(&k4);
    let sqrt_n = Float::with_val(wprec, n).sqrt();
    let log_half = Float::with_val(wprec, Rational::from((c - 1, 2))).ln();
    let one_plus_log = Float::with_val(wprec, 1) + log_half;
    // 1 - pi^2/24 > 0
    let one_minus = Float::with_val(wprec, 1) - pi(wprec).square() / 24u32;
    let d0f = Float::with_val(wprec, &d0);
    let d0_k4 = d0f.clone().pow(&k4);
    let pow24 = Float::with_val(wprec, 24).pow(&k4);

    // the two recurring Bessel arguments: pi sqrt(delta0 (24n-k)/6) and
    // pi sqrt(2 delta0 (24n-k)/3)
    let arg_small = (d0f.clone() * &base / 6u32).sqrt() * pi(wprec);
    let arg_large = (d0f.clone() * &base * 2u32 / 3u32).sqrt() * pi(wprec);
    let bess_small = bessel_i(k, &arg_small, wprec, BesselMethod::Series)?;
    let bess_large = bessel_i(k, &arg_large, wprec, BesselMethod::Series)?;

    let t1 = t1_value(a, b, c, k, n, wprec)?;

    // T~0: the divisible-by-c line
    let arg0 = (Float::with_val(wprec, k) * &base).sqrt() * pi(wprec)
        / Float::with_val(wprec, 6 * c);
    let bess0 = bessel_i(k, &arg0, wprec, BesselMethod::Series)?;
    let mut t0 = Float::with_val(wprec, 16);
    t0 *= Float::with_val(wprec, k).pow(&k4);
    t0 *= &one_plus_log;
    t0 *= &sqrt_n;
    t0 /= Float::with_val(wprec, c);
    t0 /= &base_k4;
    t0 /= &one_minus;
    t0 *= bess0;

    // shared prefactor 2k 24^{k/4} pi delta0^{k/4} / (3 (24n-k)^{k/4})
    let mut pre = Float::with_val(wprec, 2 * k);
    pre *= &pow24;
    pre *= pi(wprec);
    pre *= &d0_k4;
    pre /= 3u32;
    pre /= &base_k4;

    let t1e = pre.clone() * (sqrt_n.clone() * &bess_small + &bess_large);
    let t2e = pre.clone() * &sqrt_n * &bess_small;
    let t3e = pre.clone() * &sqrt_n * &bess_large;

    let c1 = Float::with_val(wprec, consts.c1_hi());
    let c2 = Float::with_val(wprec, consts.c2_hi());
    let c3 = Float::with_val(wprec, consts.c3_hi());
    let e2pi = (pi(wprec) * 2u32).exp();
    let ekpi12 = (pi(wprec) * Float::with_val(wprec, Rational::from((k, 12)))).exp();
    let n_2k4 = Float::with_val(wprec, n).pow(Float::with_val(wprec, Rational::from((2 - k, 4))));
    let n_4k8 = Float::with_val(wprec, n).pow(Float::with_val(wprec, Rational::from((4 - k, 8))));
    let pow2 = |num: i64| -> Float {
        Float::with_val(wprec, 2).pow(Float::with_val(wprec, Rational::from((num, 4))))
    };

    // T~4
    let cos_c = cos_pi_rational(&Rational::from((1, c)), wprec).abs();
    let mut inner4 = Float::with_val(wprec, 1) + &cos_c;
    inner4 *= 2u32;
    inner4 *= Float::with_val(wprec, 1) + &c1;
    inner4 *= &c2;
    inner4 += &c1;
    let mut t4 = pow2(k + 6);
    t4 *= &e2pi;
    t4 *= &ekpi12;
    t4 *= &n_2k4;
    t4 *= inner4;
    t4 *= &one_plus_log;
    t4 /= pi(wprec);
    t4 /= &one_minus;

    // T~5 with f(c) in its three displayed summands
    let e_pid0 = (pi(wprec) * &d0f).exp();
    let ek24 = (pi(wprec) * Float::with_val(wprec, Rational::from((k, 24)))).exp();
    let den_c = Float::with_val(wprec, 1)
        - (-pi(wprec) / Float::with_val(wprec, c)).exp();
    let f1 = ek24.clone() * (Float::with_val(wprec, 1) + c1.clone() * &e_pid0) / &den_c;
    let mut f23 = e_pid0.clone() * &ek24;
    f23 *= Float::with_val(wprec, 1) + &c1;
    f23 /= 2u32;
    let fc = f1 + f23.clone() * &c2 + f23 * &c3;
    let mut t5 = Float::with_val(wprec, 8);
    t5 *= pow2(k - 2);
    t5 *= &e2pi;
    t5 *= &n_2k4;
    t5 *= fc;

    // T~6
    let mut t6 = Float::with_val(wprec, 8);
    t6 *= pow2(k - 2);
    t6 *= &e2pi;
    t6 *= &ekpi12;
    t6 *= &one_plus_log;
    t6 *= &n_2k4;
    t6 /= pi(wprec);
    t6 /= &one_minus;

    // T~7
    let den_2c = Float::with_val(wprec, 1)
        - (-pi(wprec) * 2u32 / Float::with_val(wprec, c)).exp();
    let mut t7 = Float::with_val(wprec, 16);
    t7 *= pow2(k - 2);
    t7 *= &e2pi;
    t7 *= &n_2k4;
    t7 *= (pi(wprec) * 2u32 * &d0f).exp();
    t7 /= &den_2c;

    // shared coefficient 2^{(k+6)/4}/(k+2) + 2^{(k+4)/4}/k
    let coef89 = pow2(k + 6) / Float::with_val(wprec, k + 2)
        + pow2(k + 4) / Float::with_val(wprec, k);

    // T~8
    let mut t8 = Float::with_val(wprec, 4);
    t8 *= &coef89;
    t8 *= &one_plus_log;
    t8 *= &e2pi;
    t8 *= &ekpi12;
    t8 *= &n_4k8;
    t8 /= pi(wprec);
    t8 /= &one_minus;

    // T~9
    let mut t9 = Float::with_val(wprec, 8);
    t9 *= &coef89;
    t9 *= &e2pi;
    t9 *= (pi(wprec) * 2u32 * &d0f).exp();
    t9 *= &n_4k8;
    t9 /= &den_2c;

    let raw = [t0, t1e, t2e, t3e, t4, t5, t6, t7, t8, t9];
    let ttilde: [Float; 10] = std::array::from_fn(|i| round_up(&raw[i], prec));
    let mut weighted = Float::new(wprec);
    for (w, t) in weights.iter().zip(raw.iter()) {
        weighted += Float::with_val(wprec, t * Float::with_val(wprec, *w));
    }
    let weighted_sum = round_up(&weighted, prec);
    let margin_w = Float::with_val(wprec, &t1 - &weighted);
    Ok(BoundLedger {
        a,
        b,
        c,
        k,
        n,
        delta0: d0,
        t1: round_down(&t1, prec),
        ttilde,
        weights,
        weighted_sum,
        margin: round_down(&margin_w, prec),
    })
}

/// Outcome of the crossover scan.
#[derive(Clone, Debug)]
pub enum Threshold {
    Found {
        n: i64,
        margin: Float,
        prev_margin: Option<Float>,
    },
    CapExceeded {
        nmax: i64,
        last_margin: Float,
    },
}

/// Smallest n in [2, nmax] where T1 exceeds the weighted error sum, or an
/// honest cap-exceeded report. The documented default weights make the
/// weighted sum grow like sqrt(n) relative to T1 for c = 3, so a cap
/// report is the expected outcome there.
pub fn threshold_n(a: i64, b: i64, c: i64, k: i64, nmax: i64, prec: u32) -> Result<Threshold> {
    threshold_n_with(a, b, c, k, nmax, prec, default_weights(c))
}

pub fn threshold_n_with(
    a: i64,
    b: i64,
    c: i64,
    k: i64,
    nmax: i64,
    prec: u32,
    weights: [i64; 10],
) -> Result<Threshold> {
    check_t1_hypotheses(a, b, c, k, 2)?;
    if nmax < 2 {
        return Err(Error::NonPositiveArgument(format!("nmax = {nmax}")));
    }
    let consts = constants(k, prec + GUARD)?;
    let mut prev: Option<Float> = None;
    let mut last = Float::new(prec);
    for n in 2..=nmax {
        let ledger = bound_ledger_with(a, b, c, k, n, prec, &consts, weights)?;
        if ledger.margin > 0 {
            return Ok(Threshold::Found {
                n,
                margin: ledger.margin,
                prev_margin: prev,
            });
        }
        last = ledger.margin.clone();
        prev = Some(ledger.margin);
    }
    Ok(Threshold::CapExceeded {
        nmax,
        last_margin: last,
    })
}

/// The k = 3 bound chain at one (c, n): Bessel-line bounds G1/G2, the
/// explicit error constant, the two-sided p3 bounds, and the sandwich
/// factors with their gate.
#[derive(Clone, Debug)]
pub struct K3Bounds {
    pub c: i64,
    pub n: i64,
    pub mu: Float,
    pub delta0: Rational,
    pub g1_bound: Float,
    pub g2_bound: Float,
    pub err_bound: Float,
    /// Two-sided p3 bounds with the (8n-1)^{3/2} prefactor that the
    /// derivation (exact I_{5/2} form plus tail bound) actually yields.
    pub p3_lo: Float,
    pub p3_hi: Float,
    /// The same bounds with the (8n-1)^{9/8} prefactor as displayed in the
    /// source statement; kept for traceability. These fail against exact
    /// p3 from n = 2 on, which is how the typo was isolated.
    pub p3_lo_displayed: Float,
    pub p3_hi_displayed: Float,
    /// Sandwich m3_lo_factor p3 < M3(a,c;n) < m3_hi_factor p3, valid once
    /// n >= m3_gate.
    pub m3_lo_factor: Float,
    pub m3_hi_factor: Float,
    pub m3_gate: Float,
    /// Ratio bound |R_3(a,c,n)/p3(n)| <= rc for n >= 2.
    pub rc: Float,
}

/// mu(n) = pi sqrt(2n - 1/4).
pub fn mu_of_n(n: i64, prec: u32) -> Float {
    Float::with_val(prec, Rational::from((8 * n - 1, 4))).sqrt() * pi(prec)
}

fn p3_pair(n: i64, expo: Rational, wprec: u32, prec: u32) -> (Float, Float) {
    let mu = mu_of_n(n, wprec);
    let emu = mu.clone().exp();
    let base = Float::with_val(wprec, 8 * n - 1).pow(Float::with_val(wprec, expo));
    let three_mu = Float::with_val(wprec, 3) / &mu;
    let lo = Float::with_val(wprec, 2) * (Float::with_val(wprec, 1) - &three_mu) * &emu / &base;
    let hi = Float::with_val(wprec, 2)
        * (Float::with_val(wprec, Rational::from((9, 7))) + &three_mu)
        * &emu
        / &base;
    (round_down(&lo, prec), round_up(&hi, prec))
}

pub fn k3_bounds(c: i64, n: i64, prec: u32) -> Result<K3Bounds> {
    if c < 3 || c % 2 == 0 {
        return Err(Error::OddCRequired { c, min: 3 });
    }
    if n < 1 {
        return Err(Error::NonPositiveArgument(format!("n = {n}")));
    }
    let wprec = prec + GUARD;
    let d0 = delta0_rat(c, 3);
    let mu = mu_of_n(n, wprec);
    let nf = Float::with_val(wprec, n);
    let den = Float::with_val(wprec, 8 * n - 1);

    // |G1| <= 1.0816 c^{3/2} n^{1/2} e^{mu/c} / (8n - 1)
    let mut g1 = Float::with_val(wprec, Rational::from((10816, 10000)));
    g1 *= Float::with_val(wprec, c).pow(Float::with_val(wprec, Rational::from((3, 2))));
    g1 *= nf.clone().sqrt();
    g1 *= (mu.clone() / Float::with_val(wprec, c)).exp();
    g1 /= &den;

    // 2 sqrt(2 delta0) = 1 - 2/c exactly at k = 3
    let expo2 = Rational::from((c - 2, c));
    let mut g2 = Float::with_val(wprec, Rational::from((c, 2)));
    g2 *= nf.clone().sqrt();
    g2 *= (mu.clone() * Float::with_val(wprec, &expo2)).exp();
    g2 /= &den;

    // error <= (392785.264 c + 178.307) n^{1/8}
    let mut err = Float::with_val(wprec, Rational::from((392785264i64 * c + 178307, 1000)));
    err *= nf
        .clone()
        .pow(Float::with_val(wprec, Rational::from((1, 8))));

    let (p3_lo, p3_hi) = p3_pair(n, Rational::from((3, 2)), wprec, prec);
    let (p3_lo_d, p3_hi_d) = p3_pair(n, Rational::from((9, 8)), wprec, prec);

    // ratio bound: for c = 3 the dominant exponential is e^{-2 mu/3} with
    // the merged coefficient 1.2063e7; for c >= 5 it is e^{-2 mu/c} with
    // coefficient 4.0201e6 c^{3/2} + 1824.9112
    let n54 = nf
        .clone()
        .pow(Float::with_val(wprec, Rational::from((5, 4))));
    let rc = if c == 3 {
        let mut r = Float::with_val(wprec, 12063000);
        r *= &n54;
        r *= (-mu.clone() * Float::with_val(wprec, Rational::from((2, 3)))).exp();
        r
    } else {
        let mut coef = Float::with_val(wprec, 4020100);
        coef *= Float::with_val(wprec, c).pow(Float::with_val(wprec, Rational::from((3, 2))));
        coef += Float::with_val(wprec, Rational::from((18249112, 10000)));
        coef * &n54 * (-mu.clone() * Float::with_val(wprec, Rational::from((2, c)))).exp()
    };

    let (m3_lo, m3_hi, gate) = if c == 3 {
        (
            Float::with_val(wprec, Rational::from((172, 10000))),
            Float::with_val(wprec, Rational::from((6495, 10000))),
            Float::with_val(wprec, 58),
        )
    } else {
        (
            Float::with_val(wprec, Rational::from((1, 2 * c))),
            Float::with_val(wprec, Rational::from((3, 2 * c))),
            mc(c, prec)?.theorem,
        )
    };

    Ok(K3Bounds {
        c,
        n,
        mu: Float::with_val(prec, &mu),
        delta0: d0,
        g1_bound: round_up(&g1, prec),
        g2_bound: round_up(&g2, prec),
        err_bound: round_up(&err, prec),
        p3_lo,
        p3_hi,
        p3_lo_displayed: p3_lo_d,
        p3_hi_displayed: p3_hi_d,
        m3_lo_factor: round_down(&m3_lo, prec),
        m3_hi_factor: round_up(&m3_hi, prec),
        m3_gate: Float::with_val(prec, gate),
        rc: round_up(&rc, prec),
    })
}

/// The sandwich gate constant in both published variants: the theorem
/// statement carries 4.0102e6 where its own proof derives 4.0201e6; the
/// two differ by a digit transposition and we do not guess which was
/// intended.
#[derive(Clone, Debug)]
pub struct McPair {
    pub c: i64,
    /// 2^3 3^12 (4.0102e6 c^{5/2} + 1824.9112 c)^4 / (2 pi / c)^{12} + 1.
    pub theorem: Float,
    /// Same display with the proof-derived 4.0201e6.
    pub proof: Float,
    /// 1/c^2 - 1/c + 1/4 = ((c-2)/(2c))^2 checked in exact rationals, so
    /// the displayed denominator (pi - 2 pi sqrt(...))^{12} is (2 pi/c)^{12}.
    pub denominator_identity: bool,
}

pub fn mc(c: i64, prec: u32) -> Result<McPair> {
    if c < 3 || c % 2 == 0 {
        return Err(Error::OddCRequired { c, min: 3 });
    }
    let wprec = prec + GUARD;
    let under_root = Rational::from((1, c * c)) - Rational::from((1, c)) + Rational::from((1, 4));
    let square = Rational::from((c - 2, 2 * c)) * Rational::from((c - 2, 2 * c));
    let identity = under_root == square;

    let denom = (pi(wprec) * 2u32 / Float::with_val(wprec, c))
        .pow(Float::with_val(wprec, 12));
    let c52 = Float::with_val(wprec, c).pow(Float::with_val(wprec, Rational::from((5, 2))));
    let lin = Float::with_val(wprec, Rational::from((18249112, 10000))) * Float::with_val(wprec, c);
    let build = |coef: i64| -> Float {
        let mut inner = Float::with_val(wprec, coef);
        inner *= &c52;
        inner += &lin;
        let mut v = inner.pow(Float::with_val(wprec, 4));
        v *= Float::with_val(wprec, 8i64 * 531441);
        v /= &denom;
        v += 1u32;
        round_up(&v, prec)
    };
    Ok(McPair {
        c,
        theorem: build(4010200),
        proof: build(4020100),
        denominator_identity: identity,
    })
}

/// Exact-table certification report; serializes directly to the published
/// JSON shape.
#[derive(Clone, Debug, serde::Serialize)]
pub struct VerifyReport {
    pub claim: String,
    pub window: String,
    pub parameters: BTreeMap<String, String>,
    pub violations: Vec<String>,
    pub checked: u64,
    pub margins_summary: String,
    pub passed: bool,
}

fn params_map(entries: &[(&str, String)]) -> BTreeMap<String, String> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Tabulates sign(M_k(a,c;n) - M_k(b,c;n)) over 1 <= n <= n_max; a
/// violation is any n where the difference is not positive.
pub fn verify_ordering(k: i64, c: i64, a: i64, b: i64, n_max: i64) -> Result<VerifyReport> {
    if c < 2 {
        return Err(Error::NonPositiveModulus(c));
    }
    if a == b || !(0..c).contains(&a) || !(0..c).contains(&b) {
        return Err(Error::InvalidParameter(format!(
            "need distinct residues 0 <= a, b < c, got a = {a}, b = {b}, c = {c}"
        )));
    }
    if n_max < 1 {
        return Err(Error::NonPositiveArgument(format!("n_max = {n_max}")));
    }
    let table = ResidueTable::direct(k, c, n_max as usize)?;
    let mut violations = Vec::new();
    let mut min_margin: Option<(Integer, i64)> = None;
    let (mut pos, mut zero, mut neg) = (0u64, 0u64, 0u64);
    for n in 1..=n_max {
        let diff = table.count(a, n as usize) - table.count(b, n as usize);
        match diff.cmp0() {
            std::cmp::Ordering::Greater => pos += 1,
            std::cmp::Ordering::Equal => zero += 1,
            std::cmp::Ordering::Less => neg += 1,
        }
        if diff <= 0 {
            violations.push(format!("n = {n}: difference {diff}"));
        }
        if min_margin.as_ref().map_or(true, |(m, _)| diff < *m) {
            min_margin = Some((diff, n));
        }
    }
    let (mm, mn) = min_margin.unwrap();
    Ok(VerifyReport {
        claim: format!("M_{k}({a},{c};n) > M_{k}({b},{c};n)"),
        window: format!("1 <= n <= {n_max}"),
        parameters: params_map(&[
            ("k", k.to_string()),
            ("c", c.to_string()),
            ("a", a.to_string()),
            ("b", b.to_string()),
        ]),
        passed: violations.is_empty(),
        checked: n_max as u64,
        margins_summary: format!(
            "signs: {pos} positive, {zero} zero, {neg} negative; smallest difference {mm} at n = {mn}"
        ),
        violations,
    })
}

/// M_k(a,c;n1) M_k(a,c;n2) > M_k(a,c;n1+n2) over the rectangle
/// n_lo <= n1 <= n2 <= n_hi, as exact integers.
pub fn verify_log_subadd(k: i64, c: i64, a: i64, n_lo: i64, n_hi: i64) -> Result<VerifyReport> {
    if !(0..c.max(1)).contains(&a) {
        return Err(Error::BadResidue { a, c });
    }
    if n_lo < 1 || n_hi < n_lo {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= n_lo <= n_hi, got [{n_lo}, {n_hi}]"
        )));
    }
    let table = ResidueTable::direct(k, c, 2 * n_hi as usize)?;
    let mut violations = Vec::new();
    let mut checked = 0u64;
    let mut min_margin: Option<(Integer, i64, i64)> = None;
    for n1 in n_lo..=n_hi {
        for n2 in n1..=n_hi {
            let lhs = table.count(a, n1 as usize) * table.count(a, n2 as usize);
            let rhs = table.count(a, (n1 + n2) as usize);
            let diff = lhs - rhs;
            checked += 1;
            if diff <= 0 {
                violations.push(format!("(n1, n2) = ({n1}, {n2}): difference {diff}"));
            }
            if min_margin.as_ref().map_or(true, |(m, _, _)| diff < *m) {
                min_margin = Some((diff, n1, n2));
            }
        }
    }
    let (mm, m1, m2) = min_margin.unwrap();
    Ok(VerifyReport {
        claim: format!("M_{k}({a},{c};n1) M_{k}({a},{c};n2) > M_{k}({a},{c};n1+n2)"),
        window: format!("{n_lo} <= n1 <= n2 <= {n_hi}"),
        parameters: params_map(&[
            ("k", k.to_string()),
            ("c", c.to_string()),
            ("a", a.to_string()),
        ]),
        passed: violations.is_empty(),
        checked,
        margins_summary: format!("smallest product gap {mm} at (n1, n2) = ({m1}, {m2})"),
        violations,
    })
}

/// M_k(a,c;n)^2 > M_k(a,c;n-1) M_k(a,c;n+1) for n in [n_lo, n_hi].
pub fn verify_log_concave(k: i64, c: i64, a: i64, n_lo: i64, n_hi: i64) -> Result<VerifyReport> {
    if !(0..c.max(1)).contains(&a) {
        return Err(Error::BadResidue { a, c });
    }
    if n_lo < 2 || n_hi < n_lo {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= n_lo <= n_hi, got [{n_lo}, {n_hi}]"
        )));
    }
    let table = ResidueTable::direct(k, c, (n_hi + 1) as usize)?;
    let mut violations = Vec::new();
    let mut min_margin: Option<(Integer, i64)> = None;
    for n in n_lo..=n_hi {
        let lhs = table.count(a, n as usize).square();
        let rhs = table.count(a, (n - 1) as usize) * table.count(a, (n + 1) as usize);
        let diff = lhs - rhs;
        if diff <= 0 {
            violations.push(format!("n = {n}: difference {diff}"));
        }
        if min_margin.as_ref().map_or(true, |(m, _)| diff < *m) {
            min_margin = Some((diff, n));
        }
    }
    let (mm, mn) = min_margin.unwrap();
    Ok(VerifyReport {
        claim: format!("M_{k}({a},{c};n)^2 > M_{k}({a},{c};n-1) M_{k}({a},{c};n+1)"),
        window: format!("{n_lo} <= n <= {n_hi}"),
        parameters: params_map(&[
            ("k", k.to_string()),
            ("c", c.to_string()),
            ("a", a.to_string()),
        ]),
        passed: violations.is_empty(),
        checked: (n_hi - n_lo + 1) as u64,
        margins_summary: format!("smallest gap {mm} at n = {mn}"),
        violations,
    })
}

/// The finite leg of the log-subadditivity theorem at c = 3: both coprime
/// residues over the full small window 4 <= n1 <= n2 <= 57.
pub fn verify_thm17_small(c: i64) -> Result<VerifyReport> {
    if c != 3 {
        return Err(Error::InvalidParameter(format!(
            "the small-window certification is stated for c = 3, got c = {c}"
        )));
    }
    let mut violations = Vec::new();
    let mut checked = 0u64;
    let mut summaries = Vec::new();
    for a in [1i64, 2] {
        let rep = verify_log_subadd(3, 3, a, 4, 57)?;
        checked += rep.checked;
        summaries.push(format!("a = {a}: {}", rep.margins_summary));
        violations.extend(rep.violations.into_iter().map(|v| format!("a = {a}: {v}")));
    }
    Ok(VerifyReport {
        claim: "M_3(a,3;n1) M_3(a,3;n2) > M_3(a,3;n1+n2) for a in {1,2}".into(),
        window: "4 <= n1 <= n2 <= 57".into(),
        parameters: params_map(&[("k", "3".into()), ("c", "3".into())]),
        passed: violations.is_empty(),
        checked,
        margins_summary: summaries.join("; "),
        violations,
    })
}

/// 0.0172 p3(n) < M_3(a,3;n) < 0.6495 p3(n) for a in {1,2}, checked by
/// exact integer cross-multiplication (172 p3 < 10^4 M3 < 6495 p3).
pub fn verify_sandwich_k3(n_lo: i64, n_hi: i64) -> Result<VerifyReport> {
    if n_lo < 1 || n_hi < n_lo {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= n_lo <= n_hi, got [{n_lo}, {n_hi}]"
        )));
    }
    let p3 = pk_table(3, n_hi as usize)?;
    let table = ResidueTable::direct(3, 3, n_hi as usize)?;
    let mut violations = Vec::new();
    let mut checked = 0u64;
    let mut min_lo: Option<Integer> = None;
    let mut min_hi: Option<Integer> = None;
    for a in [1i64, 2] {
        for n in n_lo..=n_hi {
            let m3 = table.count(a, n as usize) * Integer::from(10000);
            let lo = Integer::from(172) * &p3[n as usize];
            let hi = Integer::from(6495) * &p3[n as usize];
            checked += 1;
            let gap_lo = Integer::from(&m3 - &lo);
            let gap_hi = Integer::from(&hi - &m3);
            if gap_lo <= 0 {
                violations.push(format!("a = {a}, n = {n}: lower side fails by {gap_lo}"));
            }
            if gap_hi <= 0 {
                violations.push(format!("a = {a}, n = {n}: upper side fails by {gap_hi}"));
            }
            if min_lo.as_ref().map_or(true, |m| gap_lo < *m) {
                min_lo = Some(gap_lo);
            }
            if min_hi.as_ref().map_or(true, |m| gap_hi < *m) {
                min_hi = Some(gap_hi);
            }
        }
    }
    Ok(VerifyReport {
        claim: "0.0172 p_3(n) < M_3(a,3;n) < 0.6495 p_3(n) for a in {1,2}".into(),
        window: format!("{n_lo} <= n <= {n_hi}"),
        parameters: params_map(&[("k", "3".into()), ("c", "3".into())]),
        passed: violations.is_empty(),
        checked,
        margins_summary: format!(
            "smallest scaled gaps: lower {}, upper {} (units of 1e-4 p_3)",
            min_lo.unwrap(),
            min_hi.unwrap()
        ),
        violations,
    })
}

/// Checks the three claimed constant bounds c1 < 2.7439, c2 < 0.0085,
/// c3 < 0.00002 against certified evaluations. The c2 and c3 claims are
/// refuted by direct summation (first terms already exceed the stated
/// bounds); the report says so rather than hiding it.
pub fn verify_constants(k: i64, prec: u32) -> Result<VerifyReport> {
    let cs = constants(k, prec)?;
    let wprec = prec + 16;
    let claims: [(&str, Float, Float, Float); 3] = [
        (
            "c1",
            cs.c1.clone(),
            cs.c1_tail.clone(),
            Float::with_val(wprec, Rational::from((27439, 10000))),
        ),
        (
            "c2",
            cs.c2.clone(),
            cs.c2_tail.clone(),
            Float::with_val(wprec, Rational::from((85, 10000))),
        ),
        (
            "c3",
            cs.c3.clone(),
            cs.c3_tail.clone(),
            Float::with_val(wprec, Rational::from((1, 50000))),
        ),
    ];
    let mut violations = Vec::new();
    let mut lines = Vec::new();
    for (name, value, tail, bound) in &claims {
        let hi = Float::with_val(wprec, value + tail);
        let lo = Float::with_val(wprec, value - tail);
        if hi < *bound {
            lines.push(format!("{name} = {:.6e} < {:.6e} holds", value.to_f64(), bound.to_f64()));
        } else if lo > *bound {
            violations.push(format!(
                "{name} claim refuted: computed {:.6e} (tail {:.1e}) exceeds the stated bound {:.6e}",
                value.to_f64(),
                tail.to_f64(),
                bound.to_f64()
            ));
        } else {
            violations.push(format!(
                "{name} undecided at this precision: {:.6e} +- {:.1e} vs {:.6e}",
                value.to_f64(),
                tail.to_f64(),
                bound.to_f64()
            ));
        }
    }
    Ok(VerifyReport {
        claim: "c1 < 2.7439, c2 < 0.0085, c3 < 0.00002".into(),
        window: format!("series tails certified below 2^-{prec}"),
        parameters: params_map(&[("k", k.to_string()), ("prec", prec.to_string())]),
        passed: violations.is_empty(),
        checked: 3,
        margins_summary: if lines.is_empty() {
            "no claim holds".into()
        } else {
            lines.join("; ")
        },
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho1_anchor() {
        // 1 - cos(2 pi / 3) = 3/2
        let v = rho1(0, 1, 3, 128);
        let diff = (v - Float::with_val(128, Rational::from((3, 2)))).abs();
        assert!(diff < Float::with_val(64, Float::i_exp(1, -120)));
    }

    #[test]
    fn t1_positive_and_increasing() {
        let t100 = main_term_t1(0, 1, 3, 5, 100, 96).unwrap();
        let t200 = main_term_t1(0, 1, 3, 5, 200, 96).unwrap();
        assert!(t100 > 0);
        assert!(t200 > t100);
    }

    #[test]
    fn t1_hypothesis_gate() {
        assert!(main_term_t1(0, 1, 3, 3, 100, 96).is_err()); // k = 3 needs c >= 5
        assert!(main_term_t1(0, 1, 5, 3, 100, 96).is_ok());
        assert!(main_term_t1(0, 1, 3, 4, 100, 96).is_err()); // even k
        assert!(main_term_t1(1, 1, 3, 5, 100, 96).is_err()); // a = b
        assert!(main_term_t1(0, 2, 3, 5, 100, 96).is_err()); // b > (c-1)/2
        assert!(main_term_t1(0, 1, 4, 5, 100, 96).is_err()); // even c
    }

    #[test]
    fn constants_k3_values() {
        let cs = constants(3, 128).unwrap();
        let c1 = cs.c1.to_f64();
        let c2 = cs.c2.to_f64();
        let c3 = cs.c3.to_f64();
        assert!((0.148 < c1) && (c1 < 0.149), "c1 = {c1}");
        assert!((0.0451 < c2) && (c2 < 0.0453), "c2 = {c2}");
        assert!((8.0e-5 < c3) && (c3 < 9.0e-5), "c3 = {c3}");
        assert!(cs.c1_tail.to_f64() < 1e-10);
        assert!(cs.c2_tail.to_f64() < 1e-10);
        assert!(cs.c3_tail.to_f64() < 1e-10);
        // the first claimed bound holds, the other two do not
        assert!(cs.c1_hi() < Float::with_val(64, 2.7439));
        assert!(cs.c2 > Float::with_val(64, 0.0085));
        assert!(cs.c3 > Float::with_val(64, 0.00002));
    }

    #[test]
    fn constants_stable_under_prec_doubling() {
        let lo = constants(3, 96).unwrap();
        let hi = constants(3, 192).unwrap();
        for (a, b) in [(&lo.c1, &hi.c1), (&lo.c2, &hi.c2), (&lo.c3, &hi.c3)] {
            let diff = Float::with_val(192, a - b).abs();
            assert!(diff < Float::with_val(64, Float::i_exp(1, -88)), "diff = {diff}");
        }
    }

    #[test]
    fn ledger_shape_and_double_transcription() {
        let led = bound_ledger(0, 1, 3, 5, 100, 128).unwrap();
        assert_eq!(led.delta0, delta0_rat(3, 5));
        for t in &led.ttilde {
            assert!(*t >= 0);
        }
        assert_eq!(led.weights, [1, 0, 1, 1, 1, 1, 1, 1, 1, 1]);

        // independent transcription of T~2 with different grouping:
        // (2 k pi / 3) (24 delta0)^{k/4} sqrt(n) / (24n-k)^{k/4} I_{k/2}(...)
        let wprec = 128 + 64;
        let (k, c, n) = (5i64, 3i64, 100i64);
        let d0 = delta0_rat(c, k);
        let arg = (Float::with_val(wprec, Rational::from(&d0 * Rational::from((24 * n - k, 6)))))
            .sqrt()
            * pi(wprec);
        let bess = bessel_i(k, &arg, wprec, BesselMethod::Series).unwrap();
        let k4 = Float::with_val(wprec, Rational::from((k, 4)));
        let mut indep = pi(wprec) * Float::with_val(wprec, 2 * k) / 3u32;
        indep *= Float::with_val(wprec, Rational::from(&d0 * 24u32)).pow(&k4);
        indep *= Float::with_val(wprec, n).sqrt();
        indep /= Float::with_val(wprec, 24 * n - k).pow(&k4);
        indep *= bess;
        let rel = (Float::with_val(wprec, &led.ttilde[2] - &indep) / indep).abs();
        assert!(rel < Float::with_val(64, Float::i_exp(1, -120)), "rel = {rel}");
    }

    #[test]
    fn threshold_reports_cap_honestly() {
        // the weighted error sum outgrows T1 like sqrt(n) at c = 3, so no
        // crossover exists; the scan must say so rather than invent one
        match threshold_n(0, 1, 3, 5, 60, 96).unwrap() {
            Threshold::CapExceeded { nmax, last_margin } => {
                assert_eq!(nmax, 60);
                assert!(last_margin < 0);
            }
            Threshold::Found { n, .. } => panic!("unexpected crossover at n = {n}"),
        }
    }

    #[test]
    fn p3_sandwich_corrected_exponent() {
        let table = pk_table(3, 100).unwrap();
        for n in 1..=100i64 {
            let kb = k3_bounds(3, n, 128).unwrap();
            let exact = Float::with_val(192, &table[n as usize]);
            assert!(kb.p3_lo < exact, "n = {n}: lo {} vs {exact}", kb.p3_lo);
            assert!(exact < kb.p3_hi, "n = {n}: hi {} vs {exact}", kb.p3_hi);
            assert!(kb.p3_lo < kb.p3_hi);
        }
    }

    #[test]
    fn p3_displayed_exponent_fails() {
        // pins the typo: with the displayed 9/8 prefactor the lower bound
        // already exceeds exact p3(2) = 9
        let kb = k3_bounds(3, 2, 128).unwrap();
        assert!(kb.p3_lo_displayed > Float::with_val(64, 9));
    }

    #[test]
    fn k3_bounds_fields() {
        let kb = k3_bounds(3, 58, 128).unwrap();
        // mu(58) = pi sqrt(463/4)
        let mu = Float::with_val(192, Rational::from((463, 4))).sqrt() * pi(192);
        assert!((kb.mu.clone() - mu).abs() < Float::with_val(64, 1e-30));
        assert!(kb.rc < Float::with_val(64, 0.3161), "rc = {}", kb.rc);
        assert!(kb.g1_bound > 0 && kb.g2_bound > 0 && kb.err_bound > 0);
        assert_eq!(kb.m3_lo_factor.to_f64(), 0.0172);
        assert_eq!(kb.m3_hi_factor.to_f64(), 0.6495);
        // 2 sqrt(2 delta0) = 1 - 2/c at k = 3
        let d0 = delta0_rat(5, 3);
        let lhs = Float::with_val(192, Rational::from(&d0 * 2u32)).sqrt() * 2u32;
        let rhs = Float::with_val(192, Rational::from((3, 5)));
        assert!((lhs - rhs).abs() < Float::with_val(64, 1e-40));
    }

    #[test]
    fn mc_variants_and_identity() {
        for c in (3..=99i64).step_by(2) {
            let pair = mc(c, 96).unwrap();
            assert!(pair.denominator_identity, "c = {c}");
            assert!(pair.proof > pair.theorem, "c = {c}");
        }
        let m3 = mc(3, 96).unwrap();
        let v = m3.theorem.to_f64();
        assert!((8e33 < v) && (v < 1e34), "M_3 = {v:e}");
        let mut prev = Float::with_val(96, 0);
        for c in (3..=21i64).step_by(2) {
            let v = mc(c, 96).unwrap().theorem;
            assert!(v > prev, "not increasing at c = {c}");
            prev = v;
        }
    }

    #[test]
    fn small_window_certifications() {
        let rep = verify_thm17_small(3).unwrap();
        assert!(rep.passed, "violations: {:?}", rep.violations);
        assert_eq!(rep.checked, 2 * (54 * 55 / 2));

        let rep = verify_log_concave(3, 3, 1, 60, 120).unwrap();
        assert!(rep.passed, "violations: {:?}", rep.violations);

        let rep = verify_sandwich_k3(58, 120).unwrap();
        assert!(rep.passed, "violations: {:?}", rep.violations);

        let rep = verify_ordering(5, 3, 0, 1, 100).unwrap();
        assert!(rep.passed, "violations: {:?}", rep.violations);
        assert_eq!(rep.checked, 100);
    }

    #[test]
    fn constants_report_is_honest() {
        let rep = verify_constants(3, 128).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.violations.len(), 2);
        assert!(rep.violations.iter().all(|v| v.contains("refuted")));
        assert!(rep.margins_summary.contains("c1"));
    }
}
