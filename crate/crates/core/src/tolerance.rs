use crate::error::{Error, Result};
use serde::Serialize;

/// Every numeric threshold used by the checks, in one place so that a front
/// end can override them by name.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// | ‖x‖₂ − 1 | bound for Hilbert-space unit vectors.
    pub unit_l2: f64,
    /// | ‖x‖ − 1 | bound in every other norm.
    pub unit: f64,
    /// Eigenvalue / singular value grouping, relative to max(1, ‖H‖).
    pub group: f64,
    /// 0 ∈ W(T) test, relative to ‖T‖.
    pub containment: f64,
    /// Golden-section stopping width in θ.
    pub theta: f64,
    /// Numerical rank cut-off relative to σ_max.
    pub rank: f64,
    /// |⟨Tx,x⟩| ≤ zero·‖T‖ counts as zero.
    pub zero: f64,
    /// ‖A(x)x − κ²x‖ ≤ quadratic·‖T‖² for the complex eigen characterizations.
    pub quadratic: f64,
    /// Eigen-residual and value checks, relative to ‖T‖.
    pub eigen: f64,
    /// Sign tests and (a, b)-grid inequalities, relative to ‖T‖.
    pub alt: f64,
    /// Pointwise condition lists of the intersection deciders, relative to ‖T‖².
    pub pointwise: f64,
    /// Tx = ±‖T‖x and similar branch evidence, relative to ‖T‖.
    pub branch: f64,
    /// Equalities of the restriction-to-(ker T)^⊥ report, relative.
    pub restriction: f64,
    /// Nonzero singular values equal to one.
    pub partial_isometry: f64,
    /// Largest principal angle between initial and final subspaces.
    pub principal_angle: f64,
    /// Set intersection tests (σ comparisons), relative to ‖T‖.
    pub intersection: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unit_l2: 1e-12,
            unit: 1e-10,
            group: 1e-8,
            containment: 1e-9,
            theta: 1e-10,
            rank: 1e-10,
            zero: 1e-8,
            quadratic: 1e-7,
            eigen: 1e-7,
            alt: 1e-7,
            pointwise: 1e-7,
            branch: 1e-8,
            restriction: 1e-7,
            partial_isometry: 1e-8,
            principal_angle: 1e-7,
            intersection: 1e-9,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 16] = [
        "unit_l2",
        "unit",
        "group",
        "containment",
        "theta",
        "rank",
        "zero",
        "quadratic",
        "eigen",
        "alt",
        "pointwise",
        "branch",
        "restriction",
        "partial_isometry",
        "principal_angle",
        "intersection",
    ];

    /// Overrides one tolerance by name. Values must be positive and finite.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Parse(format!("tolerance {name} must be positive, got {value}")));
        }
        let slot = match name {
            "unit_l2" => &mut self.unit_l2,
            "unit" => &mut self.unit,
            "group" => &mut self.group,
            "containment" => &mut self.containment,
            "theta" => &mut self.theta,
            "rank" => &mut self.rank,
            "zero" => &mut self.zero,
            "quadratic" => &mut self.quadratic,
            "eigen" => &mut self.eigen,
            "alt" => &mut self.alt,
            "pointwise" => &mut self.pointwise,
            "branch" => &mut self.branch,
            "restriction" => &mut self.restriction,
            "partial_isometry" => &mut self.partial_isometry,
            "principal_angle" => &mut self.principal_angle,
            "intersection" => &mut self.intersection,
            _ => return Err(Error::Parse(format!("unknown tolerance name {name:?}"))),
        };
        *slot = value;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_is_settable() {
        let mut t = Tolerances::default();
        for name in Tolerances::NAMES {
            t.set(name, 0.5).unwrap();
        }
        assert_eq!(t.rank, 0.5);
        assert!(t.set("bogus", 1.0).is_err());
        assert!(t.set("rank", -1.0).is_err());
    }
}
