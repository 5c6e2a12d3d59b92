//! The non-atomic (split-chain) pipeline: the generating-function envelope
//! `L(r)`, the exponents `alpha_1`/`alpha_2`, the admissible range of the
//! normalized mean return time, the convex envelope exponent
//! `kappa_bar(alpha, r)` with its tangency point `x_0`, the fixed-point
//! radius, and the full `M_1`/`M_V` certificates.

use serde::Serialize;

use crate::certificate::{CertKind, ErgodicityCertificate, Provenance};
use crate::error::{Error, Result};
use crate::kendall::{d_alpha, BoundMethod, K0Eval, KendallBound};
use crate::numerics::{minimize_scalar, Bracket, NumericConfig};

/// Drift/minorization data for a chain regenerating through a small set:
/// minorization weight `bbar`, one-step regeneration floor `b <= bbar`,
/// contraction `lambda`, drift level `k` on the small set, and optionally
/// the stationary mass `pi_c` of the small set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitDriftSpec {
    pub b: f64,
    pub bbar: f64,
    pub lambda: f64,
    pub k: f64,
    pub pi_c: Option<f64>,
}

impl SplitDriftSpec {
    pub fn new(b: f64, bbar: f64, lambda: f64, k: f64, pi_c: Option<f64>) -> Result<Self> {
        if !(b > 0.0 && b <= bbar && bbar <= 1.0) {
            return Err(Error::invalid(format!("requires 0 < b <= bbar <= 1, got b = {b}, bbar = {bbar}")));
        }
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::invalid(format!("requires 0 < lambda < 1, got {lambda}")));
        }
        if !(k >= 1.0) {
            return Err(Error::invalid(format!("requires K >= 1, got {k}")));
        }
        if let Some(p) = pi_c {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::invalid(format!("requires 0 < pi_C <= 1, got {p}")));
            }
        }
        Ok(SplitDriftSpec { b, bbar, lambda, k, pi_c })
    }

    pub fn big_r(&self) -> f64 {
        1.0 / self.lambda
    }

    pub fn big_l(&self) -> f64 {
        self.k / self.lambda
    }
}

/// Return-time generating-function exponents of the split construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponents {
    pub alpha1: f64,
    /// `None` when `bbar = b` (the second branch loses its term).
    pub alpha2: Option<f64>,
}

/// `alpha_1 = log((K - bbar)/(1 - bbar)) / log(1/lambda)` and
/// `alpha_2 = log((K - 1 + bbar - b)/(bbar - b)) / log(1/lambda)`.
pub fn exponents(spec: &SplitDriftSpec) -> Result<Exponents> {
    if spec.bbar >= 1.0 {
        return Err(Error::invalid(
            "bbar = 1 is the atomic case; use the atomic certificate instead",
        ));
    }
    if spec.k <= spec.bbar {
        return Err(Error::invalid(format!("requires K > bbar, got K = {}, bbar = {}", spec.k, spec.bbar)));
    }
    let ln_r = -spec.lambda.ln();
    let alpha1 = ((spec.k - spec.bbar) / (1.0 - spec.bbar)).ln() / ln_r;
    let alpha2 = if spec.bbar - spec.b > 1e-15 {
        Some(((spec.k - 1.0 + spec.bbar - spec.b) / (spec.bbar - spec.b)).ln() / ln_r)
    } else {
        None
    };
    Ok(Exponents { alpha1, alpha2 })
}

/// The return-time generating-function envelope
/// `L(r) = max( bbar r / (1 - (1-bbar) r^{1+alpha1}),
///              (b r + (bbar-b) r^{1+alpha2}) / (1 - (1-bbar) r) )`.
pub fn l_of_r(spec: &SplitDriftSpec, alpha1: f64, alpha2: Option<f64>, r: f64) -> Result<f64> {
    if r < 1.0 {
        return Err(Error::invalid(format!("L(r) requires r >= 1, got {r}")));
    }
    let bb = spec.bbar;
    let den1 = 1.0 - (1.0 - bb) * r.powf(1.0 + alpha1);
    if den1 <= 0.0 {
        return Err(Error::DomainExceeded(format!(
            "first branch denominator 1 - (1-bbar) r^(1+alpha1) = {den1} <= 0 at r = {r}"
        )));
    }
    let branch1 = bb * r / den1;
    let den2 = 1.0 - (1.0 - bb) * r;
    if den2 <= 0.0 {
        return Err(Error::DomainExceeded(format!(
            "second branch denominator 1 - (1-bbar) r = {den2} <= 0 at r = {r}"
        )));
    }
    let num2 = match alpha2 {
        Some(a2) => spec.b * r + (bb - spec.b) * r.powf(1.0 + a2),
        None => spec.b * r,
    };
    Ok(branch1.max(num2 / den2))
}

/// Range of the normalized mean return time for the unknown-`pi_C` bound:
/// `[1/bbar, alpha_bar_0 / bbar]`. When the range would be empty it is
/// collapsed to its lower end and flagged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaBarRange {
    pub lo: f64,
    pub hi: f64,
    pub collapsed: bool,
}

pub fn alpha_bar_range(spec: &SplitDriftSpec, alpha1: f64, alpha2: Option<f64>) -> AlphaBarRange {
    let (b, bb) = (spec.b, spec.bbar);
    let t1 = (1.0 - bb) / (1.0 - b) * (1.0 + alpha1);
    let t2 = (1.0 - bb) / (1.0 - b) + (bb - b) / (1.0 - b) * alpha2.unwrap_or(0.0);
    let abar0 = t1.max(t2);
    let lo = 1.0 / bb;
    let hi = abar0 / bb;
    if hi < lo {
        AlphaBarRange { lo, hi: lo, collapsed: true }
    } else {
        AlphaBarRange { lo, hi, collapsed: false }
    }
}

/// The convex-envelope exponent machinery for a split drift specification.
///
/// `kappa_bar(alpha, r)` is the slope `Fbar(log r)/log r` of the maximal
/// convex minorant through the origin of
/// `F_1(x) = log( (L(e^x) - e^x) / ((1-b) alpha (e^x - 1)) )`,
/// realized as `min_{y in [log r, x_cap]} F_1(y)/y`.
#[derive(Debug, Clone, Serialize)]
pub struct SplitEnvelope {
    pub alpha1: f64,
    pub alpha2: Option<f64>,
    /// `min(R, (1-bbar)^{-1/(1+alpha1)})`, the hard radius cap.
    pub r_cap: f64,
    /// Tangency abscissa of the envelope at the reference mean-return
    /// parameter (the known-`pi_C` value when available, else `1/bbar`).
    pub x0: f64,
    b: f64,
    bbar: f64,
    big_r: f64,
    /// `min(log R, -log(1-bbar)/(1+alpha1))`, right end of the envelope.
    ln_cap: f64,
}

impl SplitEnvelope {
    /// `log q(x)` where `q(x) = (L(e^x) - e^x)/(e^x - 1)`, in the
    /// subtraction-free branch forms.
    fn ln_q(&self, x: f64) -> f64 {
        let (b, bb) = (self.b, self.bbar);
        let beta = 1.0 + self.alpha1;
        let em = x.exp_m1();
        let r = x.exp();
        let den1 = 1.0 - (1.0 - bb) * (beta * x).exp();
        let q1 = if den1 > 0.0 {
            (1.0 - bb) * r * (beta * x).exp_m1() / (em * den1)
        } else {
            f64::INFINITY
        };
        let den2 = 1.0 - (1.0 - bb) * r;
        let q2 = if den2 > 0.0 {
            match self.alpha2 {
                Some(a2) => ((bb - b) * r * (a2 * x).exp_m1() + (1.0 - bb) * r * em) / (em * den2),
                None => (1.0 - bb) * r / den2,
            }
        } else {
            f64::INFINITY
        };
        q1.max(q2).ln()
    }

    /// Global minimizer of `F_1(y)/y` on `(0, x_cap]`: the tangency point
    /// of the envelope and its slope.
    fn envelope_min(&self, alpha_bar: f64) -> (f64, f64) {
        let c = ((1.0 - self.b) * alpha_bar).ln();
        let cap = self.ln_cap * (1.0 - 1e-9);
        let f = |y: f64| (self.ln_q(y) - c) / y;
        let cfg = NumericConfig { abs_tol: 1e-14, rel_tol: 1e-13, max_iter: 80 };
        let (mut ystar, mut s0) =
            minimize_scalar(f, Bracket { lo: cap * 1e-9, hi: cap }, &cfg);
        // probe the y -> 0 limit, binding when F_1(0) = 0
        for frac in [1e-7, 1e-5, 1e-3] {
            let y = cap * frac;
            let v = f(y);
            if v < s0 {
                ystar = y;
                s0 = v;
            }
        }
        (ystar, s0)
    }

    /// Tangency abscissa for a given mean-return parameter.
    pub fn x0_for(&self, alpha_bar: f64) -> f64 {
        self.envelope_min(alpha_bar).0
    }

    /// Envelope exponent `kappa_bar(alpha, r) = Fbar(log r)/log r`,
    /// clamped at zero; `+inf` past the domain cap.
    pub fn kappa_bar(&self, alpha_bar: f64, r: f64) -> f64 {
        let cap = self.ln_cap * (1.0 - 1e-9);
        let x = if r <= 1.0 { 0.0 } else { r.ln() };
        if x >= cap {
            return f64::INFINITY;
        }
        let c = ((1.0 - self.b) * alpha_bar).ln();
        let f = |y: f64| (self.ln_q(y) - c) / y;
        let lo = if x > 0.0 { x } else { cap * 1e-9 };
        let cfg = NumericConfig { abs_tol: 1e-14, rel_tol: 1e-13, max_iter: 60 };
        let (_, mut s) = minimize_scalar(f, Bracket { lo, hi: cap }, &cfg);
        if x <= cap * 1e-3 {
            for frac in [1e-7, 1e-5, 1e-3] {
                let y = cap * frac;
                if y >= lo {
                    s = s.min(f(y));
                }
            }
        }
        s.max(0.0)
    }

    /// The fixed-point radius for a given mean-return parameter: the unique
    /// `r` with `r = (1 + D(alpha)/alpha)^{1/kappa_bar(alpha, r)}`,
    /// equivalently `Fbar(log r) = log(1 + D(alpha)/alpha)`, capped at
    /// `r_cap`. The tangent-segment closed form is used as a fast path and
    /// the generic bisection as fallback.
    pub fn fixed_point_radius(&self, alpha_bar: f64) -> f64 {
        let a_gap = (1.0 + d_alpha(self.b, alpha_bar) / alpha_bar).ln();
        let cap = self.ln_cap * (1.0 - 1e-9);
        let (ystar, s0) = self.envelope_min(alpha_bar);
        if s0 > 0.0 && a_gap / s0 <= ystar {
            // tangent segment: Fbar(x) = s0 x
            return self.r_cap.min((a_gap / s0).exp());
        }
        let c = ((1.0 - self.b) * alpha_bar).ln();
        let fbar = |x: f64| {
            let f = |y: f64| (self.ln_q(y) - c) / y;
            let cfg = NumericConfig { abs_tol: 1e-14, rel_tol: 1e-13, max_iter: 60 };
            let (_, s) = minimize_scalar(f, Bracket { lo: x, hi: cap }, &cfg);
            x * s
        };
        if fbar(cap) < a_gap {
            return self.r_cap;
        }
        let (mut lo, mut hi) = (ystar.min(cap * 0.5), cap);
        if fbar(lo) > a_gap {
            lo = cap * 1e-9;
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if fbar(mid) > a_gap {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-14 * cap {
                break;
            }
        }
        self.r_cap.min((0.5 * (lo + hi)).exp())
    }
}

/// Builds the envelope for a split drift specification.
pub fn envelope(spec: &SplitDriftSpec) -> Result<SplitEnvelope> {
    let exps = exponents(spec)?;
    let big_r = spec.big_r();
    let x_v = -(1.0 - spec.bbar).ln() / (1.0 + exps.alpha1);
    let ln_cap = big_r.ln().min(x_v);
    let r_cap = big_r.min(x_v.exp());
    let mut env = SplitEnvelope {
        alpha1: exps.alpha1,
        alpha2: exps.alpha2,
        r_cap,
        x0: 0.0,
        b: spec.b,
        bbar: spec.bbar,
        big_r,
        ln_cap,
    };
    let reference_alpha = match spec.pi_c {
        Some(p) => (1.0 / (spec.bbar * p) - 1.0) / (1.0 - spec.b),
        None => 1.0 / spec.bbar,
    };
    env.x0 = env.x0_for(reference_alpha);
    Ok(env)
}

/// The split-chain Kendall bound: radius and tail-sup envelope for the
/// regeneration renewal sequence, with `pi_C` known (pinned parameter) or
/// unknown (extremized over the admissible range).
pub fn split_kendall_bound(spec: &SplitDriftSpec) -> Result<KendallBound> {
    match spec.pi_c {
        Some(_) => split_kendall_bound_known(spec),
        None => split_kendall_bound_unknown(spec),
    }
}

pub(crate) fn split_kendall_bound_known(spec: &SplitDriftSpec) -> Result<KendallBound> {
    let pi_c = spec
        .pi_c
        .ok_or_else(|| Error::invalid("known-pi_C split bound requires pi_c"))?;
    let env = envelope(spec)?;
    let cbar1 = 1.0 / (spec.bbar * pi_c);
    if cbar1 < 1.0 {
        return Err(Error::invalid(format!("requires bbar * pi_C <= 1, got mean return {cbar1} < 1")));
    }
    let alpha_bar = (cbar1 - 1.0) / (1.0 - spec.b);
    let mut flags = Vec::new();
    if alpha_bar * spec.bbar < 1.0 - 1e-12 {
        flags.push(format!(
            "alpha_bar = {alpha_bar:.6} below the generic lower endpoint 1/bbar = {:.6}; inputs may be inconsistent",
            1.0 / spec.bbar
        ));
    }
    let r0 = env.fixed_point_radius(alpha_bar);
    Ok(KendallBound {
        r0,
        alpha_star: alpha_bar,
        method: BoundMethod::KnownC1,
        eval: K0Eval::SplitKnown {
            env,
            alpha_bar,
            prefactor: spec.bbar * pi_c,
            b: spec.b,
        },
        flags,
    })
}

pub(crate) fn split_kendall_bound_unknown(spec: &SplitDriftSpec) -> Result<KendallBound> {
    let env = envelope(spec)?;
    let range = alpha_bar_range(spec, env.alpha1, env.alpha2);
    let mut flags = Vec::new();
    if range.collapsed {
        flags.push(format!(
            "alpha_bar range empty (alpha_bar_0 < 1); collapsed to the lower endpoint {:.6}",
            range.lo
        ));
    }
    let (alpha_star, r0) = if range.hi > range.lo {
        let cfg = NumericConfig { abs_tol: 1e-12, rel_tol: 1e-12, max_iter: 60 };
        minimize_scalar(
            |a| env.fixed_point_radius(a),
            Bracket { lo: range.lo, hi: range.hi },
            &cfg,
        )
    } else {
        (range.lo, env.fixed_point_radius(range.lo))
    };
    Ok(KendallBound {
        r0,
        alpha_star,
        method: BoundMethod::UnknownC1,
        eval: K0Eval::SplitUnknown {
            env,
            prefactor: spec.bbar,
            b: spec.b,
            alpha_lo: range.lo,
            alpha_hi: range.hi,
        },
        flags,
    })
}

/// Supporting generating-function bounds of the split construction at
/// radius `r`. Off-set entries are `(coefficient of V(x)-1, coefficient of
/// V(x), constant)` triples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitSupportBounds {
    pub gbar_onatom: f64,
    pub gbar_weighted_coeff: f64,
    pub h1bar_off_c_terms: (f64, f64, f64),
    pub h1bar_atom: f64,
    pub h1bar_diff_quot: f64,
    pub hvbar_off_c_terms: (f64, f64, f64),
    pub hvbar_atom: f64,
    pub hvbar_at1: f64,
    pub hvbar_diff_quot: f64,
}

/// `(r^{1+a} - 1)/(r - 1)`, stable at `r = 1` where it equals `1 + a`.
fn power_ratio(r: f64, a: f64) -> f64 {
    if r == 1.0 {
        return 1.0 + a;
    }
    let x = r.ln();
    ((1.0 + a) * x).exp_m1() / x.exp_m1()
}

pub fn split_supporting_bounds(spec: &SplitDriftSpec, r: f64) -> Result<SplitSupportBounds> {
    let exps = exponents(spec)?;
    let (a1, lam, k, bb) = (exps.alpha1, spec.lambda, spec.k, spec.bbar);
    let cap = spec.big_r().min((1.0 - bb).powf(-1.0 / (1.0 + a1)));
    if !(1.0 <= r && r <= cap) {
        return Err(Error::invalid(format!(
            "supporting bounds need 1 <= r <= min(1/lambda, (1-bbar)^(-1/(1+alpha1))) = {cap}, got r = {r}"
        )));
    }
    let den_a = 1.0 - (1.0 - bb) * r.powf(1.0 + a1);
    let ratio = power_ratio(r, a1);
    let one_m_lam = 1.0 - lam;
    let one_m_rlam = 1.0 - r * lam;
    let hv_scale = if one_m_rlam > 0.0 { 1.0 / one_m_rlam } else { f64::INFINITY };

    let h1_atom = r * (k - lam) / (one_m_lam * den_a);
    let h1_diff = r * lam * (k - 1.0) / (bb * one_m_lam * one_m_lam)
        + (1.0 - bb) * ratio / (bb * den_a) * r * (k - lam) / one_m_lam;
    let hv_gap = (k - r * lam) * hv_scale - bb;
    Ok(SplitSupportBounds {
        gbar_onatom: l_of_r(spec, a1, exps.alpha2, r)?,
        gbar_weighted_coeff: bb / den_a,
        h1bar_off_c_terms: (r * lam / one_m_lam, (1.0 - bb) * ratio * r / den_a, 0.0),
        h1bar_atom: h1_atom,
        h1bar_diff_quot: h1_diff,
        hvbar_off_c_terms: (lam * r * hv_scale, hv_gap * r / den_a, 0.0),
        hvbar_atom: r * (k - r * lam) * hv_scale / bb
            + hv_gap * (r - 1.0) / (bb * den_a) * r * (k - lam) / one_m_lam,
        hvbar_at1: (k - lam) / (bb * one_m_lam),
        hvbar_diff_quot: r * (k - 1.0) / (bb * one_m_lam) * hv_scale
            + hv_gap / (bb * den_a) * r * (k - lam) / one_m_lam,
    })
}

/// Full split-chain ergodicity certificate. At `bbar = 1` the construction
/// reduces to (and delegates to) the atomic certificate.
pub fn split_certificate(spec: &SplitDriftSpec) -> Result<ErgodicityCertificate> {
    if spec.bbar >= 1.0 {
        let atomic = crate::atomic::AtomicDriftSpec::new(spec.b, spec.lambda, spec.k, spec.pi_c)?;
        let mut cert = crate::atomic::atomic_certificate(&atomic)?;
        cert.provenance.construction = "split (delegated to atomic at bbar = 1)".into();
        return Ok(cert);
    }
    let unknown = split_kendall_bound_unknown(spec)?;
    let mut bounds = vec![unknown];
    if spec.pi_c.is_some() {
        bounds.push(split_kendall_bound_known(spec)?);
    }
    let best = bounds
        .iter()
        .map(|b| b.r0)
        .fold(f64::NEG_INFINITY, f64::max);
    let r0_method = bounds
        .iter()
        .max_by(|a, b| a.r0.total_cmp(&b.r0))
        .map(|b| format!("{:?}", b.method))
        .unwrap_or_default();
    let mut warnings: Vec<String> = Vec::new();
    for b in &bounds {
        warnings.extend(b.flags.iter().cloned());
    }
    let env = envelope(spec)?;
    Ok(ErgodicityCertificate {
        rho_bound: 1.0 / best,
        r0: best,
        provenance: Provenance {
            construction: "split".into(),
            r0_method,
            k0_paths: bounds.iter().map(|b| format!("{:?}", b.method)).collect(),
            warnings,
        },
        kind: CertKind::Split {
            bbar: spec.bbar,
            lambda: spec.lambda,
            k: spec.k,
            alpha1: env.alpha1,
            bounds,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(b: f64, bbar: f64, lambda: f64, k: f64, pi_c: Option<f64>) -> SplitDriftSpec {
        SplitDriftSpec::new(b, bbar, lambda, k, pi_c).unwrap()
    }

    #[test]
    fn exponent_hand_value() {
        // alpha_1 = log(1.4)/log(5/3)
        let s = spec(0.5, 0.5, 0.6, 1.2, None);
        let e = exponents(&s).unwrap();
        assert!((e.alpha1 - 1.4f64.ln() / (5.0f64 / 3.0).ln()).abs() < 1e-14);
        assert!(e.alpha2.is_none());
        // bbar > b activates alpha_2
        let s = spec(0.2, 0.5, 0.6, 1.2, None);
        let e = exponents(&s).unwrap();
        let expect = ((1.2 - 1.0 + 0.3) / 0.3f64).ln() / (5.0f64 / 3.0).ln();
        assert!((e.alpha2.unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn exponents_reject_atomic_and_small_k() {
        assert!(exponents(&spec(0.5, 1.0, 0.6, 1.2, None)).is_err());
        let bad = SplitDriftSpec { b: 0.5, bbar: 0.6, lambda: 0.6, k: 0.55, pi_c: None };
        assert!(exponents(&bad).is_err());
    }

    #[test]
    fn l_of_r_normalization_and_domain() {
        let s = spec(0.2, 0.5, 0.6, 1.2, None);
        let e = exponents(&s).unwrap();
        // both branches equal 1 at r = 1
        let v = l_of_r(&s, e.alpha1, e.alpha2, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        // L(r) >= r on the domain
        for i in 1..20 {
            let r = 1.0 + 0.01 * i as f64;
            if let Ok(v) = l_of_r(&s, e.alpha1, e.alpha2, r) {
                assert!(v >= r - 1e-12);
            }
        }
        // denominator exhaustion reports DomainExceeded
        let err = l_of_r(&s, e.alpha1, e.alpha2, 3.0);
        assert!(matches!(err, Err(Error::DomainExceeded(_))));
    }

    #[test]
    fn l_of_r_regression_pinned() {
        // b=0.2, bbar=0.5, alpha1=0.66, alpha2=2, r=1.2:
        // branch1 = 0.6/(1 - 0.5*1.2^1.66), branch2 = (0.24 + 0.3*1.728)/0.4
        let s = spec(0.2, 0.5, 0.6, 1.2, None);
        let b1 = 0.5 * 1.2 / (1.0 - 0.5 * 1.2f64.powf(1.66));
        let b2 = (0.2 * 1.2 + 0.3 * 1.2f64.powi(3)) / (1.0 - 0.5 * 1.2);
        let v = l_of_r(&s, 0.66, Some(2.0), 1.2).unwrap();
        assert!((v - b1.max(b2)).abs() < 1e-12);
    }

    #[test]
    fn l_of_r_atomic_style_at_bbar_one() {
        // (1 - bbar) = 0 kills the first denominator term
        let s = SplitDriftSpec { b: 0.4, bbar: 1.0, lambda: 0.6, k: 1.2, pi_c: None };
        let v = l_of_r(&s, 3.0, Some(2.0), 1.3).unwrap();
        let expect = (1.3f64).max(0.4 * 1.3 + 0.6 * 1.3f64.powi(3));
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn first_branch_dominates_when_1_plus_b_ge_2bbar() {
        // branch-selection rule, checked on grids
        for &(b, bb, lam, k) in
            &[(0.5, 0.5, 0.6, 1.2), (0.4, 0.6, 0.7, 1.5), (0.35, 0.62, 0.8, 2.0)]
        {
            assert!(1.0 + b >= 2.0 * bb);
            let s = spec(b, bb, lam, k, None);
            let e = exponents(&s).unwrap();
            for i in 0..40 {
                let r = 1.0 + 0.005 * i as f64;
                let den1 = 1.0 - (1.0 - bb) * r.powf(1.0 + e.alpha1);
                if den1 <= 0.0 || 1.0 - (1.0 - bb) * r <= 0.0 {
                    break;
                }
                let branch1 = bb * r / den1;
                let num2 = match e.alpha2 {
                    Some(a2) => b * r + (bb - b) * r.powf(1.0 + a2),
                    None => b * r,
                };
                let branch2 = num2 / (1.0 - (1.0 - bb) * r);
                assert!(branch1 >= branch2 - 1e-10, "r = {r}");
            }
        }
    }

    #[test]
    fn alpha_bar_range_hand_value() {
        // b=0.2, bbar=0.5, alpha1=0.66, alpha2=2 -> lo=2, hi=2.75
        let s = spec(0.2, 0.5, 0.6, 1.2, None);
        let r = alpha_bar_range(&s, 0.66, Some(2.0));
        assert!((r.lo - 2.0).abs() < 1e-15);
        assert!((r.hi - 2.75).abs() < 1e-12);
        assert!(!r.collapsed);
    }

    #[test]
    fn alpha_bar_range_first_branch_rule() {
        // 1 + b >= 2 bbar: the max equals (1-bbar)/(1-b) (1+alpha1)
        let s = spec(0.5, 0.5, 0.6, 1.2, None);
        let e = exponents(&s).unwrap();
        let r = alpha_bar_range(&s, e.alpha1, e.alpha2);
        let expect = (1.0 - s.bbar) / (1.0 - s.b) * (1.0 + e.alpha1) / s.bbar;
        assert!((r.hi - expect).abs() < 1e-12);
    }

    #[test]
    fn envelope_properties() {
        // Fbar <= F1 pointwise, convex, Fbar(0) = 0 (as a limit)
        let s = spec(0.37, 0.37, 0.71, 2.31, Some(0.87));
        let env = envelope(&s).unwrap();
        let abar = (1.0 / (s.bbar * 0.87) - 1.0) / (1.0 - s.b);
        let c = ((1.0 - s.b) * abar).ln();
        let cap = env.ln_cap * (1.0 - 1e-6);
        let mut prev2: Option<(f64, f64)> = None;
        let mut prev1: Option<(f64, f64)> = None;
        for i in 1..=60 {
            let x = cap * i as f64 / 60.0;
            let f1 = env.ln_q(x) - c;
            let fbar = x * env.kappa_bar(abar, x.exp());
            assert!(fbar <= f1 + 1e-9, "Fbar({x}) = {fbar} > F1 = {f1}");
            if let (Some((x2, f2)), Some((x1, fb1))) = (prev2, prev1) {
                // second difference >= 0 (uniform grid)
                let _ = (x2, x1);
                let dd = fbar - 2.0 * fb1 + f2;
                assert!(dd >= -1e-7, "convexity violated at {x}: {dd}");
            }
            prev2 = prev1;
            prev1 = Some((x, fbar));
        }
        // x0 below the hard cap
        assert!(env.x0 <= -(1.0 - s.bbar).ln() / (1.0 + env.alpha1) + 1e-12);
    }

    #[test]
    fn kappa_bar_piecewise_shape() {
        // constant on the tangent segment, then the chord value
        let s = spec(0.37, 0.37, 0.71, 2.31, Some(0.87));
        let env = envelope(&s).unwrap();
        let abar = (1.0 / (s.bbar * 0.87) - 1.0) / (1.0 - s.b);
        let x0 = env.x0_for(abar);
        let k_small = env.kappa_bar(abar, (0.3 * x0).exp());
        let k_mid = env.kappa_bar(abar, (0.8 * x0).exp());
        assert!((k_small - k_mid).abs() < 1e-6 * k_small);
        // beyond the tangency the exponent grows
        let k_big = env.kappa_bar(abar, (1.5 * x0).exp().min(env.r_cap * 0.999));
        assert!(k_big >= k_mid - 1e-9);
    }

    #[test]
    fn fixed_point_matches_defining_equation() {
        let s = spec(0.37, 0.37, 0.71, 2.31, Some(0.87));
        let env = envelope(&s).unwrap();
        let abar = (1.0 / (s.bbar * 0.87) - 1.0) / (1.0 - s.b);
        let r0 = env.fixed_point_radius(abar);
        assert!(r0 > 1.0 && r0 < env.r_cap);
        let kap = env.kappa_bar(abar, r0);
        let lhs = r0;
        let rhs = (1.0 + d_alpha(s.b, abar) / abar).powf(1.0 / kap);
        assert!((lhs - rhs).abs() < 1e-8, "fixed point residual {}", lhs - rhs);
    }

    #[test]
    fn supporting_bounds_hand_values_and_limits() {
        // hvbar_at1 = (K - lambda)/(bbar (1 - lambda)) = 3 at these inputs
        let s = spec(0.5, 0.5, 0.6, 1.2, None);
        let sb = split_supporting_bounds(&s, 1.2).unwrap();
        assert!((sb.hvbar_at1 - 3.0).abs() < 1e-12);
        // r = 1 limits: power ratio collapses to (1 + alpha1)
        let sb1 = split_supporting_bounds(&s, 1.0).unwrap();
        let e = exponents(&s).unwrap();
        let expect_h1_v = (1.0 - s.bbar) * (1.0 + e.alpha1) / s.bbar;
        assert!((sb1.h1bar_off_c_terms.1 - expect_h1_v).abs() < 1e-10);
        // continuity against r = 1 + 1e-8
        let sb_eps = split_supporting_bounds(&s, 1.0 + 1e-8).unwrap();
        assert!((sb_eps.h1bar_off_c_terms.1 - sb1.h1bar_off_c_terms.1).abs() < 1e-5);
        assert!((sb_eps.h1bar_diff_quot - sb1.h1bar_diff_quot).abs() < 1e-4);
    }

    #[test]
    fn supporting_bounds_atomic_reduction() {
        // bbar = 1 - tiny: split corrections vanish against the atomic forms
        let lam = 0.6;
        let k = 1.2;
        let s = spec(0.9, 1.0 - 1e-13, lam, k, None);
        let r = 1.2;
        let sb = split_supporting_bounds(&s, r).unwrap();
        assert!((sb.h1bar_off_c_terms.0 - r * lam / (1.0 - lam)).abs() < 1e-9);
        assert!(sb.h1bar_off_c_terms.1.abs() < 1e-9);
        assert!((sb.h1bar_atom - r * (k - lam) / (1.0 - lam)).abs() < 1e-9);
        assert!((sb.h1bar_diff_quot - r * lam * (k - 1.0) / (1.0 - lam / 1.0).powi(2)).abs() < 1e-6);
        assert!((sb.hvbar_off_c_terms.0 - lam * r / (1.0 - r * lam)).abs() < 1e-9);
        assert!((sb.hvbar_at1 - (k - lam) / (1.0 - lam)).abs() < 1e-9);
        assert!((sb.gbar_weighted_coeff - 1.0).abs() < 1e-9);
    }

    #[test]
    fn supporting_bounds_domain_checks() {
        let s = spec(0.5, 0.5, 0.6, 1.2, None);
        assert!(split_supporting_bounds(&s, 0.9).is_err());
        assert!(split_supporting_bounds(&s, 1e9).is_err());
    }
}
