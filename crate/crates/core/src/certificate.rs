//! Ergodicity certificates: the certified rate `rho <= 1/r_0` together
//! with evaluators for the deviation constants `M_1(r)` and `M_V(r)`.

use serde::Serialize;

use crate::kendall::KendallBound;

/// Records which constructions produced the certificate's numbers.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    /// "atomic", "split", or the delegation note.
    pub construction: String,
    /// The bound whose radius won the combined `r_0`.
    pub r0_method: String,
    /// All envelope paths available to the `M` evaluators (their pointwise
    /// minimum is used).
    pub k0_paths: Vec<String>,
    /// Clamps, degenerate ranges and recorded inconsistencies.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub(crate) enum CertKind {
    Atomic {
        lambda: f64,
        k: f64,
        bounds: Vec<KendallBound>,
    },
    Split {
        bbar: f64,
        lambda: f64,
        k: f64,
        alpha1: f64,
        bounds: Vec<KendallBound>,
    },
}

/// A computed convergence certificate.
///
/// `rho_bound = 1/r_0` bounds the geometric rate; `m1(r)` and `mv(r)`
/// evaluate the multiplicative constants for test functions bounded by 1
/// and by the Lyapunov function respectively, returning `+inf` outside the
/// certified radius range.
#[derive(Debug, Clone)]
pub struct ErgodicityCertificate {
    pub rho_bound: f64,
    pub r0: f64,
    pub provenance: Provenance,
    pub(crate) kind: CertKind,
}

impl ErgodicityCertificate {
    /// Pointwise-minimal tail-sup envelope over the available bounds.
    pub fn k0(&self, r: f64) -> f64 {
        let bounds = match &self.kind {
            CertKind::Atomic { bounds, .. } => bounds,
            CertKind::Split { bounds, .. } => bounds,
        };
        bounds.iter().map(|b| b.k0(r)).fold(f64::INFINITY, f64::min)
    }

    /// Deviation constant for test functions with `|g| <= 1`.
    pub fn m1(&self, r: f64) -> f64 {
        if !(r > 1.0) {
            return f64::INFINITY;
        }
        match &self.kind {
            CertKind::Atomic { lambda, k, .. } => {
                let (lam, k) = (*lambda, *k);
                let k0 = self.k0(r);
                2.0 * r * lam / (1.0 - lam)
                    + r * lam * (k - 1.0) / ((1.0 - lam) * (1.0 - lam))
                    + r * (k - lam) / (1.0 - lam) * k0
            }
            CertKind::Split { bbar, lambda, k, alpha1, .. } => {
                let (bb, lam, k, a1) = (*bbar, *lambda, *k, *alpha1);
                let den_a = 1.0 - (1.0 - bb) * r.powf(1.0 + a1);
                if den_a <= 0.0 {
                    return f64::INFINITY;
                }
                let k0 = self.k0(r);
                if k0.is_infinite() {
                    return f64::INFINITY;
                }
                let ratio = ((1.0 + a1) * r.ln()).exp_m1() / r.ln().exp_m1();
                2.0 * lam * r / (1.0 - lam)
                    + 2.0 * (1.0 - bb) * ratio * r / den_a
                    + bb / den_a * r * lam * (k - 1.0) / ((1.0 - lam) * (1.0 - lam))
                    + (k0 + bb * (1.0 - bb) * ratio) / (den_a * den_a) * r * (k - lam)
                        / (1.0 - lam)
            }
        }
    }

    /// Deviation constant in the Lyapunov norm; diverges as `r` approaches
    /// `1/lambda`.
    pub fn mv(&self, r: f64) -> f64 {
        if !(r > 1.0) {
            return f64::INFINITY;
        }
        match &self.kind {
            CertKind::Atomic { lambda, k, .. } => {
                let (lam, k) = (*lambda, *k);
                if r * lam >= 1.0 {
                    return f64::INFINITY;
                }
                let k0 = self.k0(r);
                r * lam / (1.0 - r * lam)
                    + r * lam * (k - lam) / ((1.0 - lam) * (1.0 - lam))
                    + r * lam * (k - 1.0) / ((1.0 - lam) * (1.0 - r * lam))
                    + r * (k - r * lam) / (1.0 - r * lam) * k0
            }
            CertKind::Split { bbar, lambda, k, alpha1, .. } => {
                let (bb, lam, k, a1) = (*bbar, *lambda, *k, *alpha1);
                if r * lam >= 1.0 {
                    return f64::INFINITY;
                }
                let den_a = 1.0 - (1.0 - bb) * r.powf(1.0 + a1);
                if den_a <= 0.0 {
                    return f64::INFINITY;
                }
                let k0 = self.k0(r);
                if k0.is_infinite() {
                    return f64::INFINITY;
                }
                let ratio = ((1.0 + a1) * r.ln()).exp_m1() / r.ln().exp_m1();
                let gap = (k - r * lam) / (1.0 - r * lam) - bb;
                let s1 = lam * r / (1.0 - r * lam);
                let s2 = gap * r / den_a;
                let s3 = (k - lam) / (1.0 - lam)
                    * (r * lam / (1.0 - lam) + (1.0 - bb) * ratio * r / den_a);
                let s4 = bb / den_a
                    * (r * (k - 1.0) / ((1.0 - lam) * (1.0 - r * lam))
                        + gap / den_a * r * (k - lam) / (1.0 - lam));
                let s5 = k0 / den_a
                    * (r * (k - r * lam) / (1.0 - r * lam)
                        + gap * (r - 1.0) / den_a * r * (k - lam) / (1.0 - lam));
                s1 + s2 + s3 + s4 + s5
            }
        }
    }

    /// The individual bounds backing this certificate.
    pub fn bounds(&self) -> &[KendallBound] {
        match &self.kind {
            CertKind::Atomic { bounds, .. } => bounds,
            CertKind::Split { bounds, .. } => bounds,
        }
    }
}
