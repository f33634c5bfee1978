//! Cross-entropy, α-balanced cross-entropy and focal loss for a single binary
//! prediction, with the analytic derivative of the focal loss.
//!
//! With `p` the probability assigned to the ground-truth class (`x` for a
//! positive, `1 - x` for a negative) and `α_t` the class weight (`α` for a
//! positive, `1 - α` for a negative):
//!
//! ```text
//! CE  = -ln p
//! BCE = α_t · CE
//! FL  = α_t · (1 - p)^γ · (-ln p)
//! ```
//!
//! Differentiating FL in `p`:
//!
//! ```text
//! dFL/dp = α_t · [ γ (1 - p)^(γ-1) ln p  -  (1 - p)^γ / p ]
//! ```
//!
//! and `dp/dx = +1` for positives, `-1` for negatives, so
//!
//! ```text
//! positive: dFL/dx = -α     · [ (1 - x)^γ / x  -  γ (1 - x)^(γ-1) ln x ]
//! negative: dFL/dx =  (1-α) · [ x^γ / (1 - x)  -  γ x^(γ-1) ln(1 - x) ]
//! ```
//!
//! Inputs are clamped to `[EPSILON, 1 - EPSILON]` in both the loss and its
//! gradient so the logarithm stays finite.

use core::fmt;

use libm::{log, pow};

pub const EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroundTruth {
    Positive,
    Negative,
}

impl GroundTruth {
    /// `+1` or `-1`.
    pub fn sign(self) -> f64 {
        match self {
            GroundTruth::Positive => 1.0,
            GroundTruth::Negative => -1.0,
        }
    }

    /// Accepts `+1`, `1`, `-1`, `pos`, `neg`, `positive`, `negative`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let any = |names: &[&str]| names.iter().any(|n| n.eq_ignore_ascii_case(s));
        if any(&["+1", "1", "pos", "positive"]) {
            Some(GroundTruth::Positive)
        } else if any(&["-1", "neg", "negative"]) {
            Some(GroundTruth::Negative)
        } else {
            None
        }
    }
}

impl fmt::Display for GroundTruth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroundTruth::Positive => "+1",
            GroundTruth::Negative => "-1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("probability {0} must lie strictly between 0 and 1")]
    Probability(f64),
    #[error("alpha {0} must lie in [0, 1]")]
    Alpha(f64),
    #[error("gamma {0} must be a finite number >= 0")]
    Gamma(f64),
}

/// Model-estimated probability of the positive class, in the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(x: f64) -> Result<Self, DomainError> {
        if x > 0.0 && x < 1.0 {
            Ok(Self(x))
        } else {
            Err(DomainError::Probability(x))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    fn clamped(self) -> f64 {
        self.0.clamp(EPSILON, 1.0 - EPSILON)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocalLossParams {
    alpha: f64,
    gamma: f64,
}

impl FocalLossParams {
    pub fn new(alpha: f64, gamma: f64) -> Result<Self, DomainError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(DomainError::Alpha(alpha));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(DomainError::Gamma(gamma));
        }
        Ok(Self { alpha, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Default for FocalLossParams {
    fn default() -> Self {
        Self {
            alpha: 0.25,
            gamma: 2.0,
        }
    }
}

fn alpha_t(alpha: f64, z: GroundTruth) -> f64 {
    match z {
        GroundTruth::Positive => alpha,
        GroundTruth::Negative => 1.0 - alpha,
    }
}

fn pt_clamped(x: Probability, z: GroundTruth) -> f64 {
    let x = x.clamped();
    match z {
        GroundTruth::Positive => x,
        GroundTruth::Negative => 1.0 - x,
    }
}

/// Probability assigned to the ground-truth class.
pub fn p_t(x: Probability, z: GroundTruth) -> f64 {
    match z {
        GroundTruth::Positive => x.get(),
        GroundTruth::Negative => 1.0 - x.get(),
    }
}

pub fn cross_entropy(x: Probability, z: GroundTruth) -> f64 {
    -log(pt_clamped(x, z))
}

pub fn balanced_ce(x: Probability, z: GroundTruth, alpha: f64) -> f64 {
    alpha_t(alpha, z) * cross_entropy(x, z)
}

pub fn focal_loss(x: Probability, z: GroundTruth, params: FocalLossParams) -> f64 {
    let p = pt_clamped(x, z);
    alpha_t(params.alpha, z) * pow(1.0 - p, params.gamma) * -log(p)
}

/// Analytic `d focal_loss / d x`.
pub fn focal_loss_grad(x: Probability, z: GroundTruth, params: FocalLossParams) -> f64 {
    let p = pt_clamped(x, z);
    let q = 1.0 - p;
    let gamma = params.gamma;
    let focusing = if gamma == 0.0 {
        0.0
    } else {
        gamma * pow(q, gamma - 1.0) * log(p)
    };
    let d_dp = alpha_t(params.alpha, z) * (focusing - pow(q, gamma) / p);
    z.sign() * d_dp
}
