//! The atomic-case Kendall bound family: the circle constant `D(alpha)`,
//! the exponent `kappa(alpha)`, the a-priori range cap `alpha_0`, the
//! certified radius `r_0` with its tail-sup envelope `K_0(r)` (known and
//! unknown mean return time), the simplified `K_1`/`r_1` variant, the
//! comparison root `r_2`, and the `R -> 1` asymptotics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{minimize_scalar, solve_root_bracketed, Bracket, NumericConfig};
use crate::split::SplitEnvelope;

/// `(1-b) D(alpha)` in the cancellation-free form
/// `(sqrt((1-b)^2 + 4 b sin^2(phi/2)) - (1-b)) / (2 sin(phi/2))` with
/// `phi = pi/(1+alpha)`. Well defined for all `b in [0, 1]`, including the
/// degenerate `b = 1`, `alpha = 0` case where it equals 1.
pub fn lower_bound_const(b: f64, alpha: f64) -> f64 {
    let phi = std::f64::consts::PI / (1.0 + alpha);
    let s = (0.5 * phi).sin();
    let omb = 1.0 - b;
    ((omb * omb + 4.0 * b * s * s).sqrt() - omb) / (2.0 * s)
}

/// The circle constant `D(alpha)` for `b in [0, 1)`, decreasing in `alpha`.
pub fn d_alpha(b: f64, alpha: f64) -> f64 {
    lower_bound_const(b, alpha) / (1.0 - b)
}

#[cfg(test)]
fn d_alpha_prime(b: f64, alpha: f64) -> f64 {
    let h = 1e-6 * (1.0 + alpha.abs());
    (d_alpha(b, alpha + h) - d_alpha(b, alpha - h)) / (2.0 * h)
}

/// Input data for the Kendall bounds: a floor `b <= b_1`, a radius `R > 1`
/// with `b(R) <= L`, and optionally the exact mean return time `c(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KendallInput {
    pub b: f64,
    pub big_r: f64,
    pub big_l: f64,
    pub c1_known: Option<f64>,
}

impl KendallInput {
    pub fn new(b: f64, big_r: f64, big_l: f64, c1_known: Option<f64>) -> Result<Self> {
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::invalid(format!("requires 0 < b < 1, got b = {b}")));
        }
        if !(big_r > 1.0) {
            return Err(Error::invalid(format!("requires R > 1, got R = {big_r}")));
        }
        if !(big_l > 1.0) {
            return Err(Error::invalid(format!("requires L > 1, got L = {big_l}")));
        }
        if let Some(c1) = c1_known {
            if c1 < 2.0 - b {
                return Err(Error::invalid(format!(
                    "requires c(1) >= 2 - b (mean return time at least 2 - b), got c(1) = {c1}, b = {b}"
                )));
            }
        }
        Ok(KendallInput { b, big_r, big_l, c1_known })
    }

    /// `N = (L-1)/(R-1)`, the divided-difference cap `c(R) <= N`.
    pub fn n_cap(&self) -> f64 {
        (self.big_l - 1.0) / (self.big_r - 1.0)
    }
}

/// `alpha_0 = log((L - bR)/((1-b)R)) / log R`, the a-priori upper bound on
/// `alpha` transferred from `b(R) <= L`.
pub fn alpha0(input: &KendallInput) -> Result<f64> {
    let (b, r, l) = (input.b, input.big_r, input.big_l);
    if l <= b * r {
        return Err(Error::invalid(format!("alpha_0 requires L > bR, got L = {l}, bR = {}", b * r)));
    }
    let ratio = (l - b * r) / ((1.0 - b) * r);
    if ratio < 1.0 {
        return Err(Error::invalid(format!(
            "alpha_0 requires (L - bR)/((1-b)R) >= 1, got {ratio} (data inconsistent with b(R) >= R)"
        )));
    }
    Ok(ratio.ln() / r.ln())
}

/// `kappa(alpha) = log((N-1)/((1-b) alpha)) / log R`.
pub fn kappa(input: &KendallInput, alpha: f64) -> Result<f64> {
    let n = input.n_cap();
    if n <= 1.0 {
        return Err(Error::invalid(format!("kappa requires N > 1, got N = {n}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!("kappa requires alpha > 0, got {alpha}")));
    }
    Ok(((n - 1.0) / ((1.0 - input.b) * alpha)).ln() / input.big_r.ln())
}

/// Which construction produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    KnownC1,
    UnknownC1,
    SimplifiedK1,
    BaxendaleR2,
}

#[derive(Debug, Clone)]
pub(crate) enum K0Eval {
    /// b = 1 perfect renewal: the centered series vanishes.
    Zero,
    Known { b: f64, pi_c: f64, alpha: f64, kappa: f64 },
    Unknown { b: f64, big_r: f64, n: f64, alpha_lo: f64, alpha_hi: f64 },
    Simplified { b: f64, big_r: f64, n: f64, d_alpha0: f64, alpha_lo: f64, alpha_hi: f64 },
    SplitKnown { env: SplitEnvelope, alpha_bar: f64, prefactor: f64, b: f64 },
    SplitUnknown { env: SplitEnvelope, prefactor: f64, b: f64, alpha_lo: f64, alpha_hi: f64 },
}

/// A certified radius `r_0` together with the tail-sup envelope `K_0`.
///
/// `k0(r)` is finite for `1 <= r < r_0` and `+inf` wherever the positive
/// part in the denominator vanishes (in particular for `r >= r_0` when the
/// minimum is attained inside, and everywhere past the domain caps).
#[derive(Debug, Clone)]
pub struct KendallBound {
    pub r0: f64,
    pub alpha_star: f64,
    pub method: BoundMethod,
    pub(crate) eval: K0Eval,
    /// Degenerate-range and clamp notes accumulated during construction.
    pub flags: Vec<String>,
}

fn k0_term(b: f64, r: f64, kap: f64, alpha: f64, d: f64) -> f64 {
    debug_assert!(b < 1.0);
    if r < 1.0 {
        return f64::INFINITY;
    }
    let rk = r.powf(kap);
    let bracket = d / alpha - rk + 1.0;
    if bracket <= 0.0 {
        return f64::INFINITY;
    }
    if r == 1.0 {
        // limit of (r^kappa - 1)/(r - 1) as r -> 1
        return kap / bracket;
    }
    (rk - 1.0) / ((r - 1.0) * bracket)
}

/// Maximizes `term(alpha)` over `[lo, hi]` on a scan grid with golden
/// refinement; any scanned point with a vanished bracket forces `+inf`.
fn scan_max(lo: f64, hi: f64, mut term: impl FnMut(f64) -> f64) -> f64 {
    if hi <= lo {
        return term(lo);
    }
    const SCAN: usize = 96;
    let mut best = f64::NEG_INFINITY;
    let mut best_i = 0;
    for i in 0..=SCAN {
        let a = lo + (hi - lo) * (i as f64) / (SCAN as f64);
        let v = term(a);
        if v.is_infinite() {
            return f64::INFINITY;
        }
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let a = if best_i == 0 { lo } else { lo + (hi - lo) * ((best_i - 1) as f64) / (SCAN as f64) };
    let b = if best_i == SCAN { hi } else { lo + (hi - lo) * ((best_i + 1) as f64) / (SCAN as f64) };
    let cfg = NumericConfig { abs_tol: 1e-12, rel_tol: 1e-12, max_iter: 100 };
    let (_, neg) = minimize_scalar(|a| -term(a), Bracket { lo: a, hi: b }, &cfg);
    best.max(-neg)
}

impl KendallBound {
    /// `b = 1`: every return happens in one step, `u_n` is constant and the
    /// centered series is identically zero.
    pub fn perfect_renewal(big_r: f64, method: BoundMethod) -> Self {
        KendallBound {
            r0: big_r,
            alpha_star: 0.0,
            method,
            eval: K0Eval::Zero,
            flags: vec!["degenerate b = 1: perfect renewal, K0 = 0".into()],
        }
    }

    /// Evaluates the tail-sup envelope at radius `r`.
    pub fn k0(&self, r: f64) -> f64 {
        match &self.eval {
            K0Eval::Zero => 0.0,
            K0Eval::Known { b, pi_c, alpha, kappa } => {
                pi_c * k0_term(*b, r, *kappa, *alpha, d_alpha(*b, *alpha))
            }
            K0Eval::Unknown { b, big_r, n, alpha_lo, alpha_hi } => {
                let (b, big_r, n) = (*b, *big_r, *n);
                scan_max(*alpha_lo, *alpha_hi, |a| {
                    let kap = ((n - 1.0) / ((1.0 - b) * a)).ln() / big_r.ln();
                    k0_term(b, r, kap, a, d_alpha(b, a))
                })
            }
            K0Eval::Simplified { b, big_r, n, d_alpha0, alpha_lo, alpha_hi } => {
                let (b, big_r, n, d0) = (*b, *big_r, *n, *d_alpha0);
                if r <= 1.0 {
                    return scan_max(*alpha_lo, *alpha_hi, |a| {
                        let kap = ((n - 1.0) / ((1.0 - b) * a)).ln() / big_r.ln();
                        k0_term(b, r, kap, a, d0)
                    });
                }
                // explicit interior maximizer of alpha (r^kappa(alpha) - 1)
                let u = r.ln() / big_r.ln();
                let interior = (n - 1.0) / (1.0 - b) * (1.0 - u).powf(1.0 / u);
                let a = interior.clamp(*alpha_lo, *alpha_hi);
                let kap = ((n - 1.0) / ((1.0 - b) * a)).ln() / big_r.ln();
                k0_term(b, r, kap, a, d0)
            }
            K0Eval::SplitKnown { env, alpha_bar, prefactor, b } => {
                let kap = env.kappa_bar(*alpha_bar, r);
                prefactor * k0_term(*b, r, kap, *alpha_bar, d_alpha(*b, *alpha_bar))
            }
            K0Eval::SplitUnknown { env, prefactor, b, alpha_lo, alpha_hi } => {
                let b = *b;
                prefactor
                    * scan_max(*alpha_lo, *alpha_hi, |a| {
                        let kap = env.kappa_bar(a, r);
                        k0_term(b, r, kap, a, d_alpha(b, a))
                    })
            }
        }
    }
}

/// Certified radius/envelope when `c(1) = pi(C)^{-1}` is known:
/// `r_0 = min(R, (1 + D(alpha)/alpha)^{1/kappa(alpha)})` at the pinned
/// `alpha = (c(1)-1)/(1-b)`.
pub fn bound_known_c1(input: &KendallInput) -> Result<KendallBound> {
    let c1 = input
        .c1_known
        .ok_or_else(|| Error::invalid("bound_known_c1 requires c1_known"))?;
    let b = input.b;
    let alpha = (c1 - 1.0) / (1.0 - b);
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!("requires alpha = (c1-1)/(1-b) > 0, got {alpha}")));
    }
    let kap = kappa(input, alpha)?;
    let mut flags = Vec::new();
    let r0 = if kap <= 0.0 {
        // c(1) saturates the divided-difference cap; no transfer below R
        flags.push(format!("kappa(alpha) = {kap} <= 0: radius capped at R"));
        input.big_r
    } else {
        let d = d_alpha(b, alpha);
        input.big_r.min((1.0 + d / alpha).powf(1.0 / kap))
    };
    Ok(KendallBound {
        r0,
        alpha_star: alpha,
        method: BoundMethod::KnownC1,
        eval: K0Eval::Known { b, pi_c: 1.0 / c1, alpha, kappa: kap.max(0.0) },
        flags,
    })
}

/// Feasible `alpha` range for the extremizations: `[1, alpha_0]` clipped to
/// the region where `kappa > 0` (larger `alpha` is inconsistent with
/// `c(R) <= N`). Returns `(lo, hi, flags)`.
fn alpha_range(input: &KendallInput) -> Result<(f64, f64, Vec<String>)> {
    let n = input.n_cap();
    if n <= 1.0 {
        return Err(Error::invalid(format!("requires N = (L-1)/(R-1) > 1, got N = {n}")));
    }
    let a0 = alpha0(input)?;
    let feas = (n - 1.0) / (1.0 - input.b) * (1.0 - 1e-12);
    let mut flags = Vec::new();
    let hi = a0.min(feas);
    if hi < 1.0 {
        flags.push(format!(
            "alpha range [1, {hi:.6}] is empty (alpha_0 = {a0:.6}); evaluating at the collapsed point"
        ));
        let pt = hi.max(f64::MIN_POSITIVE).min(1.0);
        return Ok((pt, pt, flags));
    }
    if feas < a0 {
        flags.push(format!("alpha_0 = {a0:.6} clipped to kappa > 0 region at {feas:.6}"));
    }
    Ok((1.0, hi, flags))
}

/// Certified radius/envelope when `c(1)` is unknown: extremize over the
/// feasible `alpha` range (scan + golden refinement; the stationarity
/// equations are verified in tests, not used as the solver).
pub fn bound_unknown_c1(input: &KendallInput) -> Result<KendallBound> {
    let (lo, hi, flags) = alpha_range(input)?;
    let b = input.b;
    let n = input.n_cap();
    let big_r = input.big_r;
    let radius = |a: f64| -> f64 {
        let kap = ((n - 1.0) / ((1.0 - b) * a)).ln() / big_r.ln();
        if kap <= 0.0 {
            return f64::INFINITY;
        }
        (1.0 + d_alpha(b, a) / a).powf(1.0 / kap)
    };
    let (alpha_star, rmin) = if hi > lo {
        let cfg = NumericConfig { abs_tol: 1e-13, rel_tol: 1e-13, max_iter: 120 };
        minimize_scalar(radius, Bracket { lo, hi }, &cfg)
    } else {
        (lo, radius(lo))
    };
    Ok(KendallBound {
        r0: big_r.min(rmin),
        alpha_star,
        method: BoundMethod::UnknownC1,
        eval: K0Eval::Unknown { b, big_r, n, alpha_lo: lo, alpha_hi: hi },
        flags,
    })
}

/// The simplified family: `D(alpha)` frozen at `D(alpha_0)`, giving the
/// weaker `r_1 <= r_0` and the pointwise larger `K_1(r) >= K_0(r)` with an
/// explicit interior maximizer.
pub fn bound_simplified(input: &KendallInput) -> Result<KendallBound> {
    let (lo, hi, flags) = alpha_range(input)?;
    let b = input.b;
    let n = input.n_cap();
    let big_r = input.big_r;
    let a0 = alpha0(input)?;
    let d0 = d_alpha(b, a0.max(lo));
    let radius = |a: f64| -> f64 {
        let kap = ((n - 1.0) / ((1.0 - b) * a)).ln() / big_r.ln();
        if kap <= 0.0 {
            return f64::INFINITY;
        }
        (1.0 + d0 / a).powf(1.0 / kap)
    };
    let (alpha_star, rmin) = if hi > lo {
        let cfg = NumericConfig { abs_tol: 1e-13, rel_tol: 1e-13, max_iter: 120 };
        minimize_scalar(radius, Bracket { lo, hi }, &cfg)
    } else {
        (lo, radius(lo))
    };
    Ok(KendallBound {
        r0: big_r.min(rmin),
        alpha_star,
        method: BoundMethod::SimplifiedK1,
        eval: K0Eval::Simplified { b, big_r, n, d_alpha0: d0, alpha_lo: lo, alpha_hi: hi },
        flags,
    })
}

/// The comparison root `r_2`: unique solution of
/// `(r-1)/r * 1/log^2(R/r) = b/(2N)` on `(1, R)`.
pub fn r2_baxendale(input: &KendallInput) -> Result<f64> {
    let n = input.n_cap();
    if n <= 0.0 {
        return Err(Error::invalid(format!("r_2 requires N > 0, got {n}")));
    }
    let rhs = input.b / (2.0 * n);
    let big_r = input.big_r;
    let f = |r: f64| (r - 1.0) / (r * (big_r / r).ln().powi(2)) - rhs;
    let lo = 1.0 + (big_r - 1.0) * 1e-15;
    let hi = big_r - (big_r - 1.0) * 1e-14;
    if f(lo) >= 0.0 {
        return Ok(lo);
    }
    let cfg = NumericConfig { abs_tol: 1e-14, rel_tol: 1e-13, max_iter: 200 };
    solve_root_bracketed(f, Bracket { lo, hi }, &cfg)
}

/// Regimes of the `R -> 1` expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticRegime {
    /// `(L-1)/((1-b) log((L-b)/(1-b))) >= sqrt(e)`: the range endpoint
    /// `alpha_0` is the minimizer.
    BoundaryMinimizer,
    /// Otherwise the interior stationary point drives the rate.
    InteriorMinimizer,
}

/// Leading-order approximation of `r_0(R)` as `R -> 1` with `b, L` fixed.
///
/// Returns the selected regime and whether the inputs sit on the seam
/// between the two expansions.
pub fn r0_asymptotic_detail(b: f64, big_l: f64, big_r: f64) -> (f64, AsymptoticRegime, bool) {
    let lam = ((big_l - b) / (1.0 - b)).ln();
    let x = (big_l - 1.0) / ((1.0 - b) * lam);
    let seam = (x - 0.5f64.exp()).abs() < 1e-9;
    let dr3 = (big_r - 1.0).powi(3);
    if x >= 0.5f64.exp() {
        let v = 1.0
            + b * std::f64::consts::PI * dr3 / (2.0 * (1.0 - b) * (1.0 - b)) / (lam * lam) / x.ln();
        (v, AsymptoticRegime::BoundaryMinimizer, seam)
    } else {
        let v = 1.0
            + b * std::f64::consts::E * std::f64::consts::PI * dr3
                / ((big_l - 1.0) * (big_l - 1.0));
        (v, AsymptoticRegime::InteriorMinimizer, seam)
    }
}

/// Leading-order approximation of `r_0(R)` as `R -> 1`.
pub fn r0_asymptotic(b: f64, big_l: f64, big_r: f64) -> f64 {
    r0_asymptotic_detail(b, big_l, big_r).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table1_p23() -> KendallInput {
        // reflecting random walk at p = 2/3: R = 1/lambda, L = K R
        let lam = 2.0 * 2.0f64.sqrt() / 3.0;
        let k = (2.0 + 2.0f64.sqrt()) / 3.0;
        KendallInput::new(2.0 / 3.0, 1.0 / lam, k / lam, Some(2.0)).unwrap()
    }

    fn table1_p09() -> KendallInput {
        KendallInput::new(0.9, 1.0 / 0.6, 2.0, Some(1.125)).unwrap()
    }

    #[test]
    fn d_alpha_hand_values() {
        assert!(d_alpha(0.0, 3.7).abs() < 1e-15);
        // e^{i pi/2} = i: (sqrt5 - 1)/sqrt2
        assert!((d_alpha(0.5, 1.0) - 0.874_032_048_897_642_1).abs() < 1e-14);
        // alpha D(alpha) -> b pi / (2 (1-b)^2) = pi at b = 1/2
        let a = 1e6;
        assert!((a * d_alpha(0.5, a) - std::f64::consts::PI).abs() < 1e-3);
        // monotone decreasing in alpha
        let mut prev = d_alpha(0.3, 0.5);
        for i in 1..60 {
            let cur = d_alpha(0.3, 0.5 + i as f64 * 0.25);
            assert!(cur < prev);
            prev = cur;
        }
    }

    #[test]
    fn lower_bound_const_degenerate() {
        assert!((lower_bound_const(1.0, 0.0) - 1.0).abs() < 1e-15);
        // (1-b) D(alpha) continuous across b -> 1
        assert!((lower_bound_const(1.0 - 1e-9, 0.0) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn alpha0_examples() {
        let i = table1_p23();
        assert!((alpha0(&i).unwrap() - 5.884_949_192_361_719).abs() < 1e-9);
        let i = table1_p09();
        assert!((alpha0(&i).unwrap() - 2.150_660_103_087_123_5).abs() < 1e-9);
        // L = R boundary: alpha_0 = 0
        let i = KendallInput::new(0.5, 2.0, 2.0, None).unwrap();
        assert!(alpha0(&i).unwrap().abs() < 1e-15);
    }

    #[test]
    fn kappa_pins() {
        let i = table1_p23();
        let n = i.n_cap();
        let a_zero = (n - 1.0) / (1.0 - i.b);
        assert!(kappa(&i, a_zero).unwrap().abs() < 1e-12);
        let a_one = (n - 1.0) / ((1.0 - i.b) * i.big_r);
        assert!((kappa(&i, a_one).unwrap() - 1.0).abs() < 1e-12);
        assert!((kappa(&i, 2.0).unwrap() - 21.851_002_361_356_866).abs() < 1e-9);
    }

    #[test]
    fn known_c1_reproduces_reflecting_walk() {
        let b = bound_known_c1(&table1_p23()).unwrap();
        assert!((1.0 / b.r0 - 0.973_712_233_797_435_5).abs() < 1e-9);
        assert!((b.alpha_star - 3.0).abs() < 1e-12);

        let b = bound_known_c1(&table1_p09()).unwrap();
        // cap at R is active: rho = lambda exactly
        assert!((1.0 / b.r0 - 0.6).abs() < 1e-12);
    }

    #[test]
    fn known_c1_cap_activates() {
        // huge D/alpha relative to the transfer: min clamps at R
        let i = KendallInput::new(0.9, 1.2, 3.0, Some(1.2)).unwrap();
        let b = bound_known_c1(&i).unwrap();
        assert!(b.r0 <= i.big_r + 1e-15);
    }

    #[test]
    fn unknown_c1_reproduces_reflecting_walk() {
        let b = bound_unknown_c1(&table1_p23()).unwrap();
        // frozen from an independent high-resolution scan
        assert!((1.0 / b.r0 - 0.973_731_393_862_830_3).abs() < 1e-7, "rho = {}", 1.0 / b.r0);
        // interior minimizer
        assert!(b.alpha_star > 1.0 && b.alpha_star < alpha0(&table1_p23()).unwrap());

        let b = bound_unknown_c1(&table1_p09()).unwrap();
        assert!((1.0 / b.r0 - 0.6).abs() < 1e-12);
    }

    #[test]
    fn unknown_c1_interior_minimizer_satisfies_stationarity() {
        // residual of the stationarity identity at the located argmin
        let i = table1_p23();
        let b = bound_unknown_c1(&i).unwrap();
        let a = b.alpha_star;
        let d = d_alpha(i.b, a);
        let dp = d_alpha_prime(i.b, a);
        let lhs = ((i.n_cap() - 1.0) / (1.0 - i.b)).ln();
        let rhs = a.ln() + (1.0 + d / a).ln() * (d + a) / (d - a * dp);
        assert!((lhs - rhs).abs() < 1e-4, "residual {}", lhs - rhs);
    }

    #[test]
    fn unknown_c1_degenerate_range() {
        // alpha_0 exactly 1: single-point range
        let b = 0.5f64;
        let big_r = 1.5f64;
        let big_l = b * big_r + (1.0 - b) * big_r * big_r;
        let i = KendallInput::new(b, big_r, big_l, None).unwrap();
        assert!((alpha0(&i).unwrap() - 1.0).abs() < 1e-12);
        let bd = bound_unknown_c1(&i).unwrap();
        assert!((bd.alpha_star - 1.0).abs() < 1e-9);
    }

    #[test]
    fn k0_blow_up_near_r0_and_monotone_region() {
        let i = table1_p23();
        let b = bound_known_c1(&i).unwrap();
        assert!(b.r0 < i.big_r);
        let just_in = 1.0 + 0.999 * (b.r0 - 1.0);
        let v = b.k0(just_in);
        assert!(v.is_finite() && v > 0.0);
        assert!(b.k0(b.r0 * 1.0001).is_infinite());
        // k0 finite at the R cap when active and bracket positive
        let b9 = bound_known_c1(&table1_p09()).unwrap();
        assert_eq!(b9.r0, table1_p09().big_r);
        assert!(b9.k0(b9.r0).is_finite());
    }

    #[test]
    fn simplified_is_weaker_and_consistent() {
        for &(b, lam, k, c1) in &[
            (2.0 / 3.0, 0.942_809_041_582_063_4, 1.138_071_187_457_698_3, 2.0),
            (0.9, 0.6, 1.2, 1.125),
            (0.25, 0.6, 2.5, 1.9375),
            (0.4, 0.8, 1.5, 2.2),
        ] {
            let i = KendallInput::new(b, 1.0 / lam, k / lam, Some(c1)).unwrap();
            let b0 = bound_unknown_c1(&i).unwrap();
            let b1 = bound_simplified(&i).unwrap();
            assert!(b1.r0 <= b0.r0 + 1e-12, "r1 = {} > r0 = {}", b1.r0, b0.r0);
            // pointwise K1 >= K0 on a shared grid
            for j in 1..8 {
                let r = 1.0 + (b1.r0 - 1.0) * (j as f64) / 9.0;
                let k0 = b0.k0(r);
                let k1 = b1.k0(r);
                if k0.is_finite() && k1.is_finite() {
                    assert!(k1 >= k0 - 1e-9, "K1({r}) = {k1} < K0({r}) = {k0}");
                }
            }
        }
    }

    #[test]
    fn simplified_k1_continuous_at_clamp_seam() {
        // K1 continuity in r where the explicit maximizer crosses the range
        let i = KendallInput::new(0.25, 1.0 / 0.6, 2.5 / 0.6, None).unwrap();
        let b1 = bound_simplified(&i).unwrap();
        let mut prev: Option<f64> = None;
        let mut max_jump: f64 = 0.0;
        let n = 4000;
        for j in 1..n {
            let r = 1.0 + (b1.r0 - 1.0) * 0.9 * (j as f64) / (n as f64);
            let v = b1.k0(r);
            if let Some(p) = prev {
                if v.is_finite() && p.is_finite() {
                    max_jump = max_jump.max((v - p).abs() / p.max(1.0));
                }
            }
            prev = Some(v);
        }
        assert!(max_jump < 5e-3, "relative jump {max_jump}");
    }

    #[test]
    fn r2_limits_and_interior() {
        // b/(2N) -> 0+: r2 -> 1+
        let i = KendallInput::new(1e-9, 1.5, 1e6, None).unwrap();
        let r2 = r2_baxendale(&i).unwrap();
        assert!(r2 - 1.0 < 1e-6);
        // large b, tiny N: r2 -> R-
        let i = KendallInput::new(0.999, 1.5, 1.5005, None).unwrap();
        let r2 = r2_baxendale(&i).unwrap();
        assert!(i.big_r - r2 < 0.02, "r2 = {r2}");
        // interior residual vanishes
        let i = table1_p23();
        let r2 = r2_baxendale(&i).unwrap();
        assert!(r2 > 1.0 && r2 < i.big_r);
        let resid = (r2 - 1.0) / (r2 * (i.big_r / r2).ln().powi(2)) - i.b / (2.0 * i.n_cap());
        assert!(resid.abs() < 1e-10);
    }

    #[test]
    fn ordering_r2_le_r1_le_r0_on_tables() {
        for &(b, lam, k) in &[
            (2.0 / 3.0, 0.942_809_041_582_063_4, 1.138_071_187_457_698_3),
            (0.9, 0.6, 1.2),
            (0.25, 0.6, 2.5),
        ] {
            let i = KendallInput::new(b, 1.0 / lam, k / lam, None).unwrap();
            let r0 = bound_unknown_c1(&i).unwrap().r0;
            let r1 = bound_simplified(&i).unwrap().r0;
            let r2 = r2_baxendale(&i).unwrap();
            assert!(r2 <= r1 + 1e-10 && r1 <= r0 + 1e-12, "r2={r2} r1={r1} r0={r0}");
        }
    }

    #[test]
    fn rasta_monotonicity_in_b() {
        // (1 + D/alpha)^{1/kappa} nondecreasing in b at fixed (L, R, c(1))
        let (big_r, big_l, c1) = (1.3, 2.0, 2.5);
        let mut prev = 0.0;
        for i in 1..=30 {
            let b = 0.02 * i as f64;
            if c1 < 2.0 - b {
                continue;
            }
            let input = KendallInput::new(b, big_r, big_l, Some(c1)).unwrap();
            let alpha = (c1 - 1.0) / (1.0 - b);
            let kap = kappa(&input, alpha).unwrap();
            if kap <= 0.0 {
                continue;
            }
            let v = (1.0 + d_alpha(b, alpha) / alpha).powf(1.0 / kap);
            assert!(v >= prev - 1e-12, "b = {b}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn known_c1_monotone_in_c1() {
        // r0 nonincreasing as c(1) grows, alpha >= 1 regime
        let lam = 0.8;
        let mut prev = f64::INFINITY;
        for j in 0..20 {
            let c1 = 1.7 + 0.2 * j as f64;
            let i = KendallInput::new(0.3, 1.0 / lam, 3.0 / lam, Some(c1)).unwrap();
            let b = bound_known_c1(&i).unwrap();
            assert!(b.r0 <= prev + 1e-12, "c1 = {c1}");
            prev = b.r0;
        }
    }

    #[test]
    fn asymptotic_regimes_and_agreement() {
        // b = 0.5, L = 2 sits in the boundary-minimizer regime
        let (v, regime, seam) = r0_asymptotic_detail(0.5, 2.0, 1.001);
        assert_eq!(regime, AsymptoticRegime::BoundaryMinimizer);
        assert!(!seam);
        let i = KendallInput::new(0.5, 1.001, 2.0, None).unwrap();
        let exact = bound_unknown_c1(&i).unwrap().r0;
        let rel = ((v - 1.0) - (exact - 1.0)).abs() / (exact - 1.0);
        assert!(rel < 0.10, "rel = {rel}");
        // L close to 1: interior regime
        let (_, regime, _) = r0_asymptotic_detail(0.5, 1.01, 1.0001);
        assert_eq!(regime, AsymptoticRegime::InteriorMinimizer);
    }

    #[test]
    fn input_validation() {
        assert!(KendallInput::new(0.0, 1.5, 2.0, None).is_err());
        assert!(KendallInput::new(0.5, 1.0, 2.0, None).is_err());
        assert!(KendallInput::new(0.5, 1.5, 2.0, Some(1.2)).is_err()); // c1 < 2 - b
        let i = KendallInput::new(0.5, 1.5, 1.1, None).unwrap(); // L < R
        assert!(alpha0(&i).is_err());
    }
}
