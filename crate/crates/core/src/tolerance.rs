use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every stage of the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Maximum grid deviation of `a*a~ - b*b~` accepted for a matching pair.
    pub matching: f64,
    /// Minimum modulus for a symbol to count as invertible.
    pub invertibility: f64,
    /// Minimum modulus of a symbol curve for its winding number to be taken.
    pub winding: f64,
    /// Singular value threshold for numerical kernels.
    pub sv_threshold: f64,
    /// Absolute error target for quadrature-based Fourier coefficients.
    pub quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            matching: 1e-9,
            invertibility: 1e-9,
            winding: 1e-7,
            sv_threshold: 1e-8,
            quadrature: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("matching", self.matching),
            ("invertibility", self.invertibility),
            ("winding", self.winding),
            ("sv_threshold", self.sv_threshold),
            ("quadrature", self.quadrature),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("tolerances.{name} must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

/// Number of equispaced angles in the default evaluation grid.
pub const GRID_SIZE: usize = 1024;
