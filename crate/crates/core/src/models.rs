//! Built-in toy chains: drift parameters, exact quantities and
//! deterministic oracles (transition-matrix iteration, closed-form
//! Gaussian evolution) used for validity testing and table reproduction.

use num_complex::Complex64;
use serde::Serialize;

use crate::atomic::AtomicDriftSpec;
use crate::error::{Error, Result};
use crate::numerics::{integrate_adaptive, std_normal_cdf, NumericConfig};
use crate::split::SplitDriftSpec;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// A toy-chain description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ModelSpec {
    /// Random walk on the nonnegative integers reflected at 0,
    /// `P(i, i-1) = p > 1/2`.
    ReflectingRw { p: f64 },
    /// Reflecting walk with a sticky origin: `P(0, {0}) = eps`.
    StickyRw { p: f64, eps: f64 },
    /// Metropolis chain targeting the standard normal with a unit normal
    /// proposal; `nu_choice` selects the regeneration measure (1 or 2).
    MhNormal { d: f64, s: f64, nu_choice: u8 },
    /// Autoregression `X_{n+1} ~ N(theta X_n, 1 - theta^2)`.
    ContractingNormals { theta: f64, c: f64 },
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::ReflectingRw { p } => {
                if !(p > 0.5 && p < 1.0) {
                    return Err(Error::invalid(format!("reflecting walk needs 1/2 < p < 1, got {p}")));
                }
            }
            ModelSpec::StickyRw { p, eps } => {
                if !(p > 0.5 && p < 1.0) {
                    return Err(Error::invalid(format!("sticky walk needs 1/2 < p < 1, got {p}")));
                }
                if !(eps > 0.0 && eps < p) {
                    return Err(Error::invalid(format!("sticky walk needs 0 < eps < p, got eps = {eps}")));
                }
            }
            ModelSpec::MhNormal { d, s, nu_choice } => {
                if !(d > 0.0 && s > 0.0) {
                    return Err(Error::invalid(format!("Metropolis model needs d > 0 and s > 0, got d = {d}, s = {s}")));
                }
                if nu_choice != 1 && nu_choice != 2 {
                    return Err(Error::invalid(format!("nu_choice must be 1 or 2, got {nu_choice}")));
                }
            }
            ModelSpec::ContractingNormals { theta, c } => {
                if !(theta.abs() < 1.0) {
                    return Err(Error::invalid(format!("contraction needs |theta| < 1, got {theta}")));
                }
                if !(c > 0.0) {
                    return Err(Error::invalid(format!("contraction needs c > 0, got {c}")));
                }
            }
        }
        Ok(())
    }
}

/// Drift data derived from a model, plus the exact quantities the model
/// makes available.
#[derive(Debug, Clone, Serialize)]
pub struct DerivedParams {
    pub drift: DriftData,
    pub pi_c_exact: Option<f64>,
    pub rho_optimal: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DriftData {
    Atomic(AtomicDriftSpec),
    Split(SplitDriftSpec),
}

impl DerivedParams {
    pub fn atomic(&self) -> Option<&AtomicDriftSpec> {
        match &self.drift {
            DriftData::Atomic(a) => Some(a),
            DriftData::Split(_) => None,
        }
    }

    pub fn split(&self) -> Option<&SplitDriftSpec> {
        match &self.drift {
            DriftData::Split(s) => Some(s),
            DriftData::Atomic(_) => None,
        }
    }
}

/// Reflecting walk: `lambda = 2 sqrt(pq)`, `K = p + sqrt(pq)`, `b = p`,
/// `pi({0}) = 1 - q/p`; the true rate equals `lambda`.
pub fn derive_reflecting_rw(p: f64) -> Result<DerivedParams> {
    ModelSpec::ReflectingRw { p }.validate()?;
    let q = 1.0 - p;
    let pq = (p * q).sqrt();
    let pi0 = 1.0 - q / p;
    Ok(DerivedParams {
        drift: DriftData::Atomic(AtomicDriftSpec::new(p, 2.0 * pq, p + pq, Some(pi0))?),
        pi_c_exact: Some(pi0),
        rho_optimal: Some(2.0 * pq),
    })
}

/// Sticky walk: `lambda = 2 sqrt(pq)`, `K = eps + (1-eps) sqrt(p/q)`,
/// `b = eps`; the origin is an atom, with an explicit return-time
/// generating function and a piecewise-closed-form optimal rate.
pub fn derive_sticky_rw(p: f64, eps: f64) -> Result<DerivedParams> {
    ModelSpec::StickyRw { p, eps }.validate()?;
    let q = 1.0 - p;
    let lambda = 2.0 * (p * q).sqrt();
    let k = eps + (1.0 - eps) * (p / q).sqrt();
    let pi0 = 1.0 / sticky_c1(p, eps);
    let threshold = (p - q) / (1.0 + (q / p).sqrt());
    let rho_opt = if eps < threshold {
        (p * q + (p - eps) * (p - eps)) / (p - eps)
    } else {
        lambda
    };
    Ok(DerivedParams {
        drift: DriftData::Atomic(AtomicDriftSpec::new(eps, lambda, k, Some(pi0))?),
        pi_c_exact: Some(pi0),
        rho_optimal: Some(rho_opt),
    })
}

/// Mean return time to the sticky origin, `b'(1) = eps + 2p(1-eps)/(p-q)`.
pub fn sticky_c1(p: f64, eps: f64) -> f64 {
    eps + 2.0 * p * (1.0 - eps) / (p - (1.0 - p))
}

/// Exact return-time generating function of the sticky origin,
/// `b(z) = eps z + (1-eps)/(2q) (1 - sqrt(1 - 4pq z^2))`, principal branch,
/// valid for `|z| < 1/sqrt(4pq)`.
pub fn sticky_exact_b_gen(p: f64, eps: f64, z: Complex64) -> Result<Complex64> {
    let q = 1.0 - p;
    if z.norm() >= 1.0 / (4.0 * p * q).sqrt() {
        return Err(Error::DomainExceeded(format!(
            "sticky b(z) needs |z| < {}, got |z| = {}",
            1.0 / (4.0 * p * q).sqrt(),
            z.norm()
        )));
    }
    let root = (Complex64::new(1.0, 0.0) - 4.0 * p * q * z * z).sqrt();
    Ok(eps * z + (1.0 - eps) / (2.0 * q) * (Complex64::new(1.0, 0.0) - root))
}

/// Metropolis transition density from `x` (the absolutely continuous part;
/// the rejection probability stays at `x`).
fn mh_density(x: f64, y: f64) -> f64 {
    if y.abs() <= x.abs() {
        normal_pdf(y - x)
    } else {
        INV_SQRT_2PI * (-0.5 * ((y - x) * (y - x) + y * y - x * x)).exp()
    }
}

/// `P V(x)` for `V(y) = e^{s|y|}`: the density integral split at the
/// acceptance-region kinks plus the rejection mass at `x` itself.
pub fn mh_pv(x: f64, s: f64, cfg: &NumericConfig) -> Result<f64> {
    let ax = x.abs();
    // integrand peaks: outside [-ax, ax] the exponent is -(y^2 - xy -+ sy);
    // truncate where the Gaussian factor is below ~1e-18 of its peak
    let reach = 9.0 + ax + s;
    let pieces = [
        (-(ax + reach), -ax),
        (-ax, 0.0),
        (0.0, ax),
        (ax, ax + reach),
    ];
    let mut acc_v = 0.0;
    let mut acc_mass = 0.0;
    for &(lo, hi) in &pieces {
        if hi <= lo {
            continue;
        }
        acc_v += integrate_adaptive(|y| mh_density(x, y) * (s * y.abs()).exp(), lo, hi, cfg)?;
        acc_mass += integrate_adaptive(|y| mh_density(x, y), lo, hi, cfg)?;
    }
    let rejection = (1.0 - acc_mass).max(0.0);
    Ok(acc_v + rejection * (s * ax).exp())
}

/// Metropolis-for-normal drift data: `lambda = PV(d) e^{-sd}`, `K = PV(d)`,
/// regeneration weights per the chosen minorization measure, and
/// `pi(C) = 2 Phi(d) - 1` from the standard normal target.
pub fn derive_mh_normal(d: f64, s: f64, nu_choice: u8) -> Result<DerivedParams> {
    ModelSpec::MhNormal { d, s, nu_choice }.validate()?;
    let cfg = NumericConfig { abs_tol: 1e-14, rel_tol: 1e-12, max_iter: 200 };
    let pv = mh_pv(d, s, &cfg)?;
    let lambda = pv * (-s * d).exp();
    if lambda >= 1.0 {
        return Err(Error::invalid(format!(
            "drift does not contract: lambda = {lambda} >= 1 at d = {d}, s = {s}"
        )));
    }
    let k = pv;
    let sqrt2 = std::f64::consts::SQRT_2;
    let (b, bbar) = match nu_choice {
        1 => {
            let b = sqrt2 * (-d * d).exp() * (std_normal_cdf(sqrt2 * d) - 0.5);
            (b, b)
        }
        _ => {
            let b = 2.0 * (std_normal_cdf(2.0 * d) - std_normal_cdf(d));
            let extra = sqrt2 * (d * d / 4.0).exp() * (1.0 - std_normal_cdf(3.0 * d / sqrt2));
            (b, b + extra)
        }
    };
    let pi_c = 2.0 * std_normal_cdf(d) - 1.0;
    Ok(DerivedParams {
        drift: DriftData::Split(SplitDriftSpec::new(b, bbar.min(1.0), lambda, k, Some(pi_c))?),
        pi_c_exact: Some(pi_c),
        rho_optimal: None,
    })
}

/// Contracting-normals drift data: `lambda = theta^2 + 2(1-theta^2)/(1+c^2)`,
/// `K = 2 + theta^2 (c^2 - 1)`, minorization concentrated on the small set
/// (`b = bbar`), and `pi(C) = 2 Phi(c) - 1`.
pub fn derive_contracting_normals(theta: f64, c: f64) -> Result<DerivedParams> {
    ModelSpec::ContractingNormals { theta, c }.validate()?;
    let lambda = theta * theta + 2.0 * (1.0 - theta * theta) / (1.0 + c * c);
    if lambda >= 1.0 {
        return Err(Error::invalid(format!(
            "drift does not contract: lambda = {lambda} >= 1 (c too small for theta = {theta})"
        )));
    }
    let k = 2.0 + theta * theta * (c * c - 1.0);
    let t = theta.abs();
    let sd = (1.0 - theta * theta).sqrt();
    let bbar = 2.0 * (std_normal_cdf((1.0 + t) * c / sd) - std_normal_cdf(t * c / sd));
    let pi_c = 2.0 * std_normal_cdf(c) - 1.0;
    Ok(DerivedParams {
        drift: DriftData::Split(SplitDriftSpec::new(bbar, bbar, lambda, k, Some(pi_c))?),
        pi_c_exact: Some(pi_c),
        rho_optimal: None,
    })
}

/// Total-variation trajectory of a truncated birth-death walk started at
/// the origin, with the fitted geometric decay rate.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixOracle {
    pub tv: Vec<f64>,
    pub fitted_rate: f64,
}

/// Iterates the truncated transition matrix of a reflecting or sticky walk
/// and fits the decay rate of `tv[n] = (1/2) sum_i |P^n(0,i) - pi(i)|`.
///
/// The fit uses the least-squares slope of `log tv` over the last half of
/// the steps where `tv` is still comfortably above the underflow floor.
pub fn rw_matrix_oracle(spec: &ModelSpec, state_cap: usize, n_steps: usize) -> Result<MatrixOracle> {
    spec.validate()?;
    let (p, p00) = match *spec {
        ModelSpec::ReflectingRw { p } => (p, p),
        ModelSpec::StickyRw { p, eps } => (p, eps),
        _ => return Err(Error::invalid("matrix oracle supports the discrete walks only")),
    };
    if state_cap < 200 {
        return Err(Error::invalid(format!("state_cap must be >= 200, got {state_cap}")));
    }
    let q = 1.0 - p;
    // exact stationary law on the truncated space: pi(i) ~ pi(1) (q/p)^{i-1}
    // for i >= 1 with pi(1) = pi(0)(1 - p00)/p
    let mut pi = vec![0.0; state_cap + 1];
    pi[0] = 1.0;
    if state_cap >= 1 {
        pi[1] = (1.0 - p00) / p;
        for i in 2..=state_cap {
            pi[i] = pi[i - 1] * (q / p);
        }
    }
    let total: f64 = pi.iter().sum();
    for v in pi.iter_mut() {
        *v /= total;
    }

    let mut dist = vec![0.0; state_cap + 1];
    dist[0] = 1.0;
    let mut next = vec![0.0; state_cap + 1];
    let mut tv = Vec::with_capacity(n_steps);
    let mut leak = 0.0f64;
    for _ in 0..n_steps {
        next.iter_mut().for_each(|v| *v = 0.0);
        next[0] += dist[0] * p00;
        next[1] += dist[0] * (1.0 - p00);
        for i in 1..=state_cap {
            let m = dist[i];
            if m == 0.0 {
                continue;
            }
            next[i - 1] += m * p;
            if i < state_cap {
                next[i + 1] += m * q;
            } else {
                // outflow past the cap is reflected but accounted as leak
                next[i] += m * q;
                leak += m * q;
            }
        }
        std::mem::swap(&mut dist, &mut next);
        let d: f64 = dist.iter().zip(pi.iter()).map(|(a, b)| (a - b).abs()).sum();
        tv.push(0.5 * d);
        if *tv.last().unwrap() < 1e-220 {
            break;
        }
    }
    if leak > 1e-12 {
        return Err(Error::MassLeak { leak, cap: state_cap });
    }
    // least-squares slope of log tv over the last half of usable steps
    let usable: Vec<(f64, f64)> = tv
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 1e-220)
        .map(|(i, &v)| (i as f64, v.ln()))
        .collect();
    let half = &usable[usable.len() / 2..];
    let n = half.len() as f64;
    let sx: f64 = half.iter().map(|(x, _)| x).sum();
    let sy: f64 = half.iter().map(|(_, y)| y).sum();
    let sxx: f64 = half.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = half.iter().map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Ok(MatrixOracle { tv, fitted_rate: slope.exp() })
}

/// Exact total variation between the `n`-step law `N(theta^n x0,
/// 1 - theta^{2n})` and the stationary `N(0, 1)`, by quadrature of the
/// density difference split at the crossing points.
pub fn contracting_exact_tv(theta: f64, x0: f64, n: u32) -> Result<f64> {
    if !(theta.abs() < 1.0) {
        return Err(Error::invalid(format!("needs |theta| < 1, got {theta}")));
    }
    let mu = theta.powi(n as i32) * x0;
    let var = 1.0 - theta.powi(2 * n as i32);
    if var <= 0.0 {
        // n = 0 or theta = +-1 degenerate: point mass against N(0,1)
        return Ok(1.0);
    }
    let sd = var.sqrt();
    let f = move |x: f64| (normal_pdf((x - mu) / sd) / sd - normal_pdf(x)).abs();
    // density crossings: quadratic a x^2 + b x + c = 0 from equating logs
    let a = 0.5 * (1.0 - 1.0 / var);
    let bq = mu / var;
    let cq = -mu * mu / (2.0 * var) - sd.ln();
    let mut knots = vec![];
    let lo = (mu - 10.0 * sd).min(-10.0);
    let hi = (mu + 10.0 * sd).max(10.0);
    if a.abs() > 1e-300 {
        let disc = bq * bq - 4.0 * a * cq;
        if disc >= 0.0 {
            let r = disc.sqrt();
            for root in [(-bq - r) / (2.0 * a), (-bq + r) / (2.0 * a)] {
                if root > lo && root < hi {
                    knots.push(root);
                }
            }
        }
    } else if bq.abs() > 1e-300 {
        let root = -cq / bq;
        if root > lo && root < hi {
            knots.push(root);
        }
    }
    knots.sort_by(f64::total_cmp);
    let mut pts = vec![lo];
    pts.extend(knots);
    pts.push(hi);
    let cfg = NumericConfig { abs_tol: 1e-14, rel_tol: 1e-11, max_iter: 200 };
    let mut acc = 0.0;
    for w in pts.windows(2) {
        acc += integrate_adaptive(f, w[0], w[1], &cfg)?;
    }
    Ok(0.5 * acc)
}
