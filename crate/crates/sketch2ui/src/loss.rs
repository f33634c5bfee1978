//! The `loss` subcommand: evaluate the loss family at one point, or sweep the
//! analytic gradient against central finite differences.

use std::fmt::Write as _;

use sketch2ui_core::focal::{
    balanced_ce, cross_entropy, focal_loss, focal_loss_grad, FocalLossParams, GroundTruth, Probability,
};

use crate::error::CliError;

pub const GRADCHECK_STEP: f64 = 1e-6;
pub const GRADCHECK_TOLERANCE: f64 = 1e-6;
pub const GRADCHECK_GAMMAS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];
pub const GRADCHECK_ALPHAS: [f64; 3] = [0.25, 0.5, 1.0];

/// Prints CE, balanced CE, focal loss and its gradient at one point.
pub fn evaluate(x: f64, z: &str, alpha: f64, gamma: f64) -> Result<String, CliError> {
    let z = GroundTruth::parse(z).ok_or_else(|| CliError::input(format!("z `{z}` must be +1 or -1")))?;
    let prob = Probability::new(x).map_err(|e| CliError::input(e.to_string()))?;
    let params = FocalLossParams::new(alpha, gamma).map_err(|e| CliError::input(e.to_string()))?;
    let mut out = String::new();
    let _ = writeln!(out, "x={x} z={z} alpha={alpha} gamma={gamma}");
    let _ = writeln!(out, "ce={:.4e}", cross_entropy(prob, z));
    let _ = writeln!(out, "balanced_ce={:.4e}", balanced_ce(prob, z, alpha));
    let _ = writeln!(out, "fl={:.4e}", focal_loss(prob, z, params));
    let _ = writeln!(out, "grad={:.4e}", focal_loss_grad(prob, z, params));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradcheckResult {
    pub points: usize,
    pub max_rel_error: f64,
    pub worst: (f64, GroundTruth, f64, f64),
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Sweeps x in {0.01, ..., 0.99} over the gamma and alpha grids and both labels.
pub fn gradcheck() -> GradcheckResult {
    let mut result = GradcheckResult {
        points: 0,
        max_rel_error: 0.0,
        worst: (0.0, GroundTruth::Positive, 0.0, 0.0),
    };
    let h = GRADCHECK_STEP;
    for i in 1..=99 {
        let x = i as f64 / 100.0;
        for gamma in GRADCHECK_GAMMAS {
            for alpha in GRADCHECK_ALPHAS {
                for z in [GroundTruth::Positive, GroundTruth::Negative] {
                    let params = FocalLossParams::new(alpha, gamma).expect("grid is in domain");
                    let at = |v: f64| focal_loss(Probability::new(v).expect("grid is in domain"), z, params);
                    let numeric = (at(x + h) - at(x - h)) / (2.0 * h);
                    let analytic = focal_loss_grad(Probability::new(x).unwrap(), z, params);
                    let err = relative_error(analytic, numeric);
                    result.points += 1;
                    if err > result.max_rel_error {
                        result.max_rel_error = err;
                        result.worst = (x, z, alpha, gamma);
                    }
                }
            }
        }
    }
    result
}

pub fn gradcheck_report(result: &GradcheckResult) -> String {
    let (x, z, alpha, gamma) = result.worst;
    format!(
        "gradcheck points={} step={GRADCHECK_STEP:e} max_rel_error={:.3e} worst_x={x} worst_z={z} \
         worst_alpha={alpha} worst_gamma={gamma} tolerance={GRADCHECK_TOLERANCE:e} status={}\n",
        result.points,
        result.max_rel_error,
        if result.max_rel_error <= GRADCHECK_TOLERANCE { "ok" } else { "fail" }
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_reference_point() {
        let out = evaluate(0.9, "+1", 0.25, 2.0).unwrap();
        assert!(out.contains("fl=2.6340e-4"), "{out}");
        assert!(out.contains("ce=1.0536e-1"), "{out}");
    }

    #[test]
    fn rejects_out_of_domain() {
        assert_eq!(evaluate(1.5, "+1", 0.25, 2.0).unwrap_err().exit_code(), 1);
        assert_eq!(evaluate(0.5, "0", 0.25, 2.0).unwrap_err().exit_code(), 1);
        assert_eq!(evaluate(0.5, "-1", 2.0, 2.0).unwrap_err().exit_code(), 1);
        assert_eq!(evaluate(0.5, "-1", 0.5, -2.0).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn gradcheck_passes() {
        let r = gradcheck();
        assert_eq!(r.points, 99 * 5 * 3 * 2);
        assert!(r.max_rel_error <= GRADCHECK_TOLERANCE, "{}", gradcheck_report(&r));
    }
}
