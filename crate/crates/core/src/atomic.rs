//! Atomic-case ergodicity: drift/minorization data with a true atom
//! translated into rate and constant bounds.

use serde::Serialize;

use crate::certificate::{CertKind, ErgodicityCertificate, Provenance};
use crate::error::{Error, Result};
use crate::kendall::{bound_known_c1, bound_unknown_c1, BoundMethod, KendallBound, KendallInput};

/// Drift/minorization parameters with the small set an atom: regeneration
/// floor `b`, contraction `lambda`, drift level `k` on the atom, and
/// optionally its stationary mass `pi_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomicDriftSpec {
    pub b: f64,
    pub lambda: f64,
    pub k: f64,
    pub pi_c: Option<f64>,
}

impl AtomicDriftSpec {
    pub fn new(b: f64, lambda: f64, k: f64, pi_c: Option<f64>) -> Result<Self> {
        if !(b > 0.0 && b <= 1.0) {
            return Err(Error::invalid(format!("requires 0 < b <= 1, got b = {b}")));
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
        Ok(AtomicDriftSpec { b, lambda, k, pi_c })
    }

    pub fn big_r(&self) -> f64 {
        1.0 / self.lambda
    }

    pub fn big_l(&self) -> f64 {
        self.k / self.lambda
    }
}

/// Scalar components of the return-time generating-function bounds at
/// radius `r`. Off-set coefficients multiply `V(x) - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GhBounds {
    pub g_off_c_coeff: f64,
    pub g_on_c: f64,
    pub h1_off_c_coeff: f64,
    pub h1_on_c: f64,
    pub h1_diff_quot: f64,
    pub hv_off_c_coeff: f64,
    pub hv_on_c: f64,
    pub hv_diff_quot: f64,
}

/// The eight scalar bounds on `G`, `H_1` and `H_V` for `1 <= r <= 1/lambda`
/// (the `H_V` entries diverge at the right endpoint).
pub fn g_h_bounds(spec: &AtomicDriftSpec, r: f64) -> Result<GhBounds> {
    let (lam, k) = (spec.lambda, spec.k);
    if !(1.0 <= r && r <= 1.0 / lam) {
        return Err(Error::invalid(format!("g_h_bounds needs 1 <= r <= 1/lambda = {}, got r = {r}", 1.0 / lam)));
    }
    let one_m_lam = 1.0 - lam;
    let one_m_rlam = 1.0 - r * lam;
    let hv = if one_m_rlam > 0.0 { 1.0 / one_m_rlam } else { f64::INFINITY };
    Ok(GhBounds {
        g_off_c_coeff: 1.0,
        g_on_c: r * k,
        h1_off_c_coeff: r * lam / one_m_lam,
        h1_on_c: r * (k - lam) / one_m_lam,
        h1_diff_quot: r * lam * (k - 1.0) / (one_m_lam * one_m_lam),
        hv_off_c_coeff: r * lam * hv,
        hv_on_c: r * (k - r * lam) * hv,
        hv_diff_quot: r * lam * (k - 1.0) / one_m_lam * hv,
    })
}

/// Builds the certificate: translates `(b, lambda, K, pi_C)` into the
/// renewal-theoretic inputs `R = 1/lambda`, `L = K/lambda`, computes the
/// available radius/envelope bounds and combines them.
///
/// When `pi_c` is given, both the pinned-parameter and the extremized
/// bounds are computed; the certificate carries both and uses their best
/// radius and pointwise-minimal envelope.
pub fn atomic_certificate(spec: &AtomicDriftSpec) -> Result<ErgodicityCertificate> {
    let big_r = spec.big_r();
    let mut warnings: Vec<String> = Vec::new();
    let bounds: Vec<KendallBound> = if spec.b >= 1.0 {
        // every step regenerates: the renewal series is identically zero
        let method = if spec.pi_c.is_some() { BoundMethod::KnownC1 } else { BoundMethod::UnknownC1 };
        vec![KendallBound::perfect_renewal(big_r, method)]
    } else {
        let mut effective_b = spec.b;
        let c1 = spec.pi_c.map(|p| 1.0 / p);
        if let Some(c1v) = c1 {
            if c1v < 2.0 - spec.b {
                // a true chain always satisfies c(1) >= 2 - b_1, so the floor
                // may be raised to 2 - c(1); the bound improves with b
                effective_b = 2.0 - c1v;
                warnings.push(format!(
                    "c(1) = {c1v:.9} < 2 - b: floor raised from b = {} to {effective_b:.9} for the pinned-parameter bound",
                    spec.b
                ));
            }
        }
        let unknown_input = KendallInput::new(spec.b, big_r, spec.big_l(), None)?;
        let unknown = bound_unknown_c1(&unknown_input)?;
        let mut bounds = vec![unknown];
        if let Some(c1v) = c1 {
            let known_input = KendallInput::new(effective_b, big_r, spec.big_l(), Some(c1v))?;
            bounds.push(bound_known_c1(&known_input)?);
        }
        bounds
    };
    let best = bounds.iter().map(|b| b.r0).fold(f64::NEG_INFINITY, f64::max);
    let r0_method = bounds
        .iter()
        .max_by(|a, b| a.r0.total_cmp(&b.r0))
        .map(|b| format!("{:?}", b.method))
        .unwrap_or_default();
    for b in &bounds {
        warnings.extend(b.flags.iter().cloned());
    }
    Ok(ErgodicityCertificate {
        rho_bound: 1.0 / best,
        r0: best,
        provenance: Provenance {
            construction: "atomic".into(),
            r0_method,
            k0_paths: bounds.iter().map(|b| format!("{:?}", b.method)).collect(),
            warnings,
        },
        kind: CertKind::Atomic { lambda: spec.lambda, k: spec.k, bounds },
    })
}
