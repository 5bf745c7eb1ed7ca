//! Unit system, physical constants and shared numerical tolerances.
//!
//! All formulas in this crate are written with explicit factors of `mass`,
//! `c` and `hbar`, so any self-consistent unit system works. The default is
//! natural units (mass = c = hbar = 1), in which energies come out in units
//! of the rest energy and radii in Compton wavelengths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rest mass, speed of light, reduced Planck constant and the dimensionless
/// Coulomb coupling used by the Coulomb potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalContext {
    pub mass: f64,
    pub c: f64,
    pub hbar: f64,
    /// Dimensionless Coulomb strength e^2/(hbar c); zero when no Coulomb
    /// term is in play.
    pub coupling: f64,
}

impl PhysicalContext {
    pub fn new(mass: f64, c: f64, hbar: f64, coupling: f64) -> Result<Self> {
        let ctx = Self {
            mass,
            c,
            hbar,
            coupling,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    /// mass = c = hbar = 1, coupling = 0.
    pub fn natural_units() -> Self {
        Self {
            mass: 1.0,
            c: 1.0,
            hbar: 1.0,
            coupling: 0.0,
        }
    }

    /// Natural units with a hydrogen-like Coulomb coupling.
    pub fn hydrogen(alpha: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, alpha)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("mass", self.mass), ("c", self.c), ("hbar", self.hbar)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidContext(format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        if !self.coupling.is_finite() || self.coupling < 0.0 {
            return Err(Error::InvalidContext(format!(
                "coupling must be finite and non-negative, got {}",
                self.coupling
            )));
        }
        Ok(())
    }

    /// Rest energy m c^2.
    pub fn rest_energy(&self) -> f64 {
        self.mass * self.c * self.c
    }

    /// Reduced Compton wavelength hbar / (m c), the natural radial scale.
    pub fn compton_wavelength(&self) -> f64 {
        self.hbar / (self.mass * self.c)
    }

    pub fn hbar_c(&self) -> f64 {
        self.hbar * self.c
    }

    /// Coulomb strength e^2 = coupling * hbar c (energy * length).
    pub fn coulomb_strength(&self) -> f64 {
        self.coupling * self.hbar_c()
    }

    /// Langer-corrected angular factor (l + 1/2) * hbar c in energy * length
    /// units; this is what enters the centrifugal term for every potential.
    pub fn langer_angular(&self, l: u32) -> f64 {
        (l as f64 + 0.5) * self.hbar_c()
    }
}

/// Numerical tolerances shared by the quadrature and root-finding layers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance for the radial action quadrature.
    pub quadrature_rel: f64,
    /// Absolute tolerance for level solving: the action residual in units of
    /// hbar, and energy roots as a fraction of m c^2.
    pub root_abs: f64,
    /// Growth factor of the geometric turning-point scan.
    pub bracket_expansion: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quadrature_rel: 1e-10,
            root_abs: 1e-9,
            bracket_expansion: 1.5,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("quadrature_rel", self.quadrature_rel),
            ("root_abs", self.root_abs),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidTolerances(format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        if !(self.bracket_expansion.is_finite() && self.bracket_expansion > 1.0) {
            return Err(Error::InvalidTolerances(format!(
                "bracket_expansion must exceed 1, got {}",
                self.bracket_expansion
            )));
        }
        Ok(())
    }
}

/// A total energy stored as an offset from the rest energy.
///
/// Bound levels sit within a sliver of m c^2 (the hydrogen ground state is
/// already within 3e-5 of it), so the offset E - mc^2 is the resolved
/// quantity everywhere; combinations like m^2 c^4 - E^2 are formed in product
/// form from it rather than by subtracting near-equal squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energy {
    rest: f64,
    offset: f64,
}

impl Energy {
    pub fn from_offset(offset: f64, ctx: &PhysicalContext) -> Self {
        Self {
            rest: ctx.rest_energy(),
            offset,
        }
    }

    /// Builds from a total energy; offsets smaller than one ulp of the rest
    /// energy are lost here, so prefer `from_offset` for tightly bound levels.
    pub fn from_total(total: f64, ctx: &PhysicalContext) -> Self {
        let rest = ctx.rest_energy();
        Self {
            rest,
            offset: total - rest,
        }
    }

    pub fn total(&self) -> f64 {
        self.rest + self.offset
    }

    /// E - m c^2.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn rest(&self) -> f64 {
        self.rest
    }

    /// m^2 c^4 - E^2 = -offset * (2 mc^2 + offset), exact in the offset.
    pub fn rest_gap_sq(&self) -> f64 {
        -self.offset * (2.0 * self.rest + self.offset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_units_are_the_identity_context() {
        let ctx = PhysicalContext::natural_units();
        assert_eq!(ctx.mass, 1.0);
        assert_eq!(ctx.c, 1.0);
        assert_eq!(ctx.hbar, 1.0);
        assert_eq!(ctx.coupling, 0.0);
        assert_eq!(ctx.rest_energy(), 1.0);
        assert_eq!(ctx.compton_wavelength(), 1.0);
    }

    #[test]
    fn hydrogen_context_carries_the_fine_structure_coupling() {
        let ctx = PhysicalContext::hydrogen(1.0 / 137.035999).unwrap();
        assert!((ctx.coupling - 7.2974e-3).abs() < 1e-7);
    }

    #[test]
    fn context_rejects_nonpositive_constants() {
        assert!(PhysicalContext::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(PhysicalContext::new(1.0, -1.0, 1.0, 0.0).is_err());
        assert!(PhysicalContext::new(1.0, 1.0, f64::NAN, 0.0).is_err());
        assert!(PhysicalContext::new(1.0, 1.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn langer_angular_scales_with_hbar_c() {
        let ctx = PhysicalContext::new(2.0, 3.0, 0.5, 0.0).unwrap();
        assert_eq!(ctx.langer_angular(0), 0.5 * 1.5);
        assert_eq!(ctx.langer_angular(2), 2.5 * 1.5);
    }

    #[test]
    fn default_tolerances_validate_and_stay_within_spec_bounds() {
        let tol = Tolerances::default();
        tol.validate().unwrap();
        assert!(tol.quadrature_rel <= 1e-8);
    }

    #[test]
    fn energy_offset_round_trip_and_gap() {
        let ctx = PhysicalContext::natural_units();
        let e = Energy::from_offset(-2.5e-5, &ctx);
        assert_eq!(e.offset(), -2.5e-5);
        assert!((e.total() - (1.0 - 2.5e-5)).abs() < 1e-16);
        // product form agrees with the naive one at representable scales
        let naive = 1.0 - e.total() * e.total();
        assert!((e.rest_gap_sq() - naive).abs() < 1e-15);
        assert!(e.rest_gap_sq() > 0.0);
    }
}
