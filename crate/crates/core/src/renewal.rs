//! Renewal sequences on the positive integers, their complex generating
//! functions, and the brute-force circle oracle for the centered renewal
//! series `sum_n (u_n - u_inf) z^n`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kendall::lower_bound_const;

/// A finitely supported probability distribution `(b_1, ..., b_N)` on the
/// positive integers together with a certified floor `b_floor <= b_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementDistribution {
    probs: Vec<f64>,
    b_floor: f64,
}

impl IncrementDistribution {
    /// Validates mass-one, nonnegativity and `b_1 >= b_floor > 0`.
    pub fn new(probs: Vec<f64>, b_floor: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid("increment distribution needs at least one atom"));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::invalid("increment probabilities must be finite and >= 0"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("increment probabilities sum to {total} != 1")));
        }
        if !(b_floor > 0.0) || probs[0] < b_floor {
            return Err(Error::invalid(format!(
                "requires b_1 >= b_floor > 0, got b_1 = {}, b_floor = {b_floor}",
                probs[0]
            )));
        }
        Ok(IncrementDistribution { probs, b_floor })
    }

    /// Skips validation. Intended for negative controls such as periodic
    /// distributions with `b_1 = 0`.
    pub fn from_probs_unchecked(probs: Vec<f64>, b_floor: f64) -> Self {
        IncrementDistribution { probs, b_floor }
    }

    /// `b_1, ..., b_N` (index 0 is `b_1`).
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn b_floor(&self) -> f64 {
        self.b_floor
    }

    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    /// `b(z) = sum_n b_n z^n`.
    pub fn gen_b(&self, z: Complex64) -> Complex64 {
        // Horner on b_N z^{N-1} + ... + b_1, then multiply by z.
        let mut acc = Complex64::new(0.0, 0.0);
        for &p in self.probs.iter().rev() {
            acc = acc * z + p;
        }
        acc * z
    }

    /// `c(z) = (b(z) - 1)/(z - 1)`, evaluated through the tail sums
    /// `c_j = sum_{n > j} b_n` so that `z = 1` needs no special case:
    /// `c(z) = sum_{j >= 0} c_j z^j` and `c(1) = sum_n n b_n`.
    pub fn gen_c(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut tail = 0.0;
        // iterate j = N-1 down to 0 with tail = c_j
        for &p in self.probs.iter().rev() {
            tail += p;
            acc = acc * z + tail;
        }
        acc
    }

    /// `c(1) = sum_n n b_n = 1/u_inf`.
    pub fn c1(&self) -> f64 {
        self.probs.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p).sum()
    }
}

/// The renewal sequence `u_0, ..., u_m` with its limit `u_inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct RenewalSequence {
    pub u: Vec<f64>,
    pub u_inf: f64,
}

/// Convolution recursion `u_n = sum_{k=1}^{n} u_{n-k} b_k`, `u_0 = 1`,
/// together with `u_inf = 1 / sum_n n b_n`.
pub fn renewal_sequence(inc: &IncrementDistribution, m: usize) -> RenewalSequence {
    let b = inc.probs();
    let mut u = Vec::with_capacity(m + 1);
    u.push(1.0);
    for n in 1..=m {
        let kmax = n.min(b.len());
        let mut acc = 0.0;
        for k in 1..=kmax {
            acc += u[n - k] * b[k - 1];
        }
        u.push(acc);
    }
    RenewalSequence { u, u_inf: 1.0 / inc.c1() }
}

fn extend_renewal(inc: &IncrementDistribution, u: &mut Vec<f64>, upto: usize) {
    let b = inc.probs();
    for n in u.len()..=upto {
        let kmax = n.min(b.len());
        let mut acc = 0.0;
        for k in 1..=kmax {
            acc += u[n - k] * b[k - 1];
        }
        u.push(acc);
    }
}

/// Empirical geometric decay ratio of `|u_n - u_inf|` over the last stretch
/// of the computed sequence. Used to budget the series truncation.
fn tail_ratio(u: &[f64], u_inf: f64) -> f64 {
    let m = u.len() - 1;
    let lo = m / 2;
    let a = (u[lo] - u_inf).abs().max(1e-300);
    let b = (u[m] - u_inf).abs().max(1e-300);
    let ratio = (b / a).powf(1.0 / (m - lo) as f64);
    ratio.clamp(1e-6, 1.0 - 1e-9)
}

fn eval_tail_sup(u: &[f64], u_inf: f64, r: f64, theta_points: usize) -> f64 {
    // max over theta in [0, pi] (conjugate symmetry) of
    // |sum_n (u_n - u_inf) (r e^{i theta})^n|, with one golden refinement
    // pass around the best grid angle.
    let coefs: Vec<f64> = u.iter().map(|&un| un - u_inf).collect();
    let eval = |theta: f64| -> f64 {
        let z = Complex64::from_polar(r, theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coefs.iter().rev() {
            acc = acc * z + c;
        }
        acc.norm()
    };
    let n = theta_points.max(8);
    let mut best_theta = 0.0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=n {
        let theta = std::f64::consts::PI * (i as f64) / (n as f64);
        let v = eval(theta);
        if v > best {
            best = v;
            best_theta = theta;
        }
    }
    let h = std::f64::consts::PI / (n as f64);
    let lo = (best_theta - h).max(0.0);
    let hi = (best_theta + h).min(std::f64::consts::PI);
    let cfg = crate::numerics::NumericConfig { abs_tol: 1e-12, rel_tol: 1e-12, max_iter: 80 };
    let (_, neg) = crate::numerics::minimize_scalar(
        |t| -eval(t),
        crate::numerics::Bracket { lo, hi },
        &cfg,
    );
    best.max(-neg)
}

/// Truncated direct evaluation of `sup_{|z|=r} |sum_n (u_n - u_inf) z^n|`
/// on a uniform angle grid with local refinement.
///
/// The caller supplies the truncation length `m`; the tail term
/// `|u_m - u_inf| r^m / (1 - rho r)` must stay below `1e-6` of the result,
/// otherwise `TruncationTooShort` is returned.
pub fn tail_sup_oracle(
    inc: &IncrementDistribution,
    r: f64,
    m: usize,
    theta_points: usize,
) -> Result<f64> {
    if r < 1.0 {
        return Err(Error::invalid(format!("oracle radius must satisfy r >= 1, got {r}")));
    }
    let seq = renewal_sequence(inc, m);
    let rho = tail_ratio(&seq.u, seq.u_inf);
    let geom = (1.0 - (rho * r).min(1.0 - 1e-12)).recip();
    let tail = (seq.u[m] - seq.u_inf).abs() * r.powi(m as i32) * geom;
    let value = eval_tail_sup(&seq.u, seq.u_inf, r, theta_points);
    if tail > 1e-6 * value.max(1e-300) {
        return Err(Error::TruncationTooShort { tail, value });
    }
    Ok(value)
}

/// Doubles the truncation length until the estimated tail contribution
/// falls below `1e-10` (absolute and relative), then evaluates the oracle.
pub fn tail_sup_oracle_auto(
    inc: &IncrementDistribution,
    r: f64,
    theta_points: usize,
) -> Result<f64> {
    if r < 1.0 {
        return Err(Error::invalid(format!("oracle radius must satisfy r >= 1, got {r}")));
    }
    let mut u = vec![1.0];
    let mut m = 256usize.max(4 * inc.support_len());
    let u_inf = 1.0 / inc.c1();
    const M_MAX: usize = 1 << 22;
    loop {
        extend_renewal(inc, &mut u, m);
        let rho = tail_ratio(&u, u_inf);
        let geom = (1.0 - (rho * r).min(1.0 - 1e-12)).recip();
        let tail = (u[m] - u_inf).abs() * r.powi(m as i32) * geom;
        if tail <= 1e-10 || m >= M_MAX {
            let value = eval_tail_sup(&u, u_inf, r, theta_points);
            if tail > 1e-6 * value.max(1e-300) {
                return Err(Error::TruncationTooShort { tail, value });
            }
            return Ok(value);
        }
        m *= 2;
    }
}

/// Grid check of the circle lower bound: for every angle in `(0, pi]`,
/// `|c(e^{i theta})|` must dominate the constant `(1-b) D(alpha)` built
/// from `b = b_floor` and `alpha = (c(1)-1)/(1-b)`.
///
/// Returns `(ok, margin)` where `margin` is the worst observed slack; the
/// inequality is a theorem, so `ok = margin >= -1e-9` failing indicates an
/// implementation bug.
pub fn circle_lower_bound_check(
    inc: &IncrementDistribution,
    theta_points: usize,
) -> (bool, f64) {
    let n = theta_points.max(128);
    let b = inc.b_floor();
    let c1 = inc.c1();
    let alpha = if b >= 1.0 { 0.0 } else { ((c1 - 1.0) / (1.0 - b)).max(0.0) };
    let threshold = lower_bound_const(b, alpha);
    let eval = |theta: f64| inc.gen_c(Complex64::from_polar(1.0, theta)).norm();
    let mut worst = f64::INFINITY;
    let mut worst_theta = std::f64::consts::PI;
    for i in 1..=n {
        let theta = std::f64::consts::PI * (i as f64) / (n as f64);
        let v = eval(theta);
        if v < worst {
            worst = v;
            worst_theta = theta;
        }
    }
    // one local refinement pass around the minimizer
    let h = std::f64::consts::PI / (n as f64);
    let lo = (worst_theta - h).max(1e-12);
    let hi = (worst_theta + h).min(std::f64::consts::PI);
    let cfg = crate::numerics::NumericConfig { abs_tol: 1e-13, rel_tol: 1e-13, max_iter: 80 };
    let (_, refined) = crate::numerics::minimize_scalar(eval, crate::numerics::Bracket { lo, hi }, &cfg);
    worst = worst.min(refined);
    let margin = worst - threshold;
    (margin >= -1e-9, margin)
}
