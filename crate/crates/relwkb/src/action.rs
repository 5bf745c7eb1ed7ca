//! Radial action integral over one libration, with quadrature that absorbs
//! the inverse-square-root vanishing of p_r at both turning points, and the
//! closed-form Coulomb action as an independent cross-check.

use crate::context::{Energy, PhysicalContext, Tolerances};
use crate::error::{Error, Result};
use crate::kinematics::ClassicalRegion;
use crate::numeric::{gl16, gl_composite};
use crate::potential::{effective_radicand_at, RadialPotential};

/// Radial action in units of hbar, with the region it was computed on and a
/// two-resolution error estimate.
#[derive(Debug, Clone, Copy)]
pub struct ActionValue {
    /// I_r / hbar.
    pub action: f64,
    pub estimated_error: f64,
    pub region: ClassicalRegion,
}

/// I_r / hbar = (1 / (pi hbar)) * integral of p_r over [r_a, r_b].
///
/// Both oriented halves of the libration loop contribute equally, so the
/// loop integral divided by 2 pi reduces to the one-way integral divided by
/// pi. The substitution r = r_a + (r_b - r_a) sin^2(theta) turns the
/// square-root turning-point behavior into an analytic integrand in theta,
/// which composite Gauss-Legendre then resolves spectrally; panel counts are
/// doubled until two successive resolutions agree.
pub fn radial_action(
    potential: &RadialPotential,
    ctx: &PhysicalContext,
    tol: &Tolerances,
    region: &ClassicalRegion,
) -> Result<ActionValue> {
    let mut previous = action_composite(potential, ctx, region, 1, gl16())?;
    let mut panels = 2usize;
    loop {
        let current = action_composite(potential, ctx, region, panels, gl16())?;
        let estimate = (current - previous).abs();
        let budget = tol.quadrature_rel * current.abs().max(1.0);
        if estimate <= budget {
            debug_assert!(current >= 0.0);
            return Ok(ActionValue {
                action: current,
                estimated_error: estimate,
                region: *region,
            });
        }
        if panels >= 4096 {
            return Err(Error::QuadratureAccuracy { estimate, budget });
        }
        previous = current;
        panels *= 2;
    }
}

/// Fixed-resolution composite rule in theta; exposed to the tests that
/// measure convergence order directly.
pub(crate) fn action_composite(
    potential: &RadialPotential,
    ctx: &PhysicalContext,
    region: &ClassicalRegion,
    panels: usize,
    rule: &[(f64, f64)],
) -> Result<f64> {
    let width = region.width();
    if width <= 0.0 {
        return Ok(0.0);
    }
    let scale = width / (std::f64::consts::PI * ctx.hbar * ctx.c);
    let mut integrand = |theta: f64| -> Result<f64> {
        let s = theta.sin();
        let r = (region.r_a + width * s * s).min(region.r_b);
        let radicand =
            effective_radicand_at(potential, ctx, region.energy, region.angular, r)?.max(0.0);
        Ok(radicand.sqrt() * (2.0 * theta).sin())
    };
    let integral = gl_composite(
        rule,
        0.0,
        std::f64::consts::FRAC_PI_2,
        panels,
        &mut integrand,
    )?;
    Ok(scale * integral)
}

#[cfg(test)]
pub(crate) fn low_order_rule(order: usize) -> Vec<(f64, f64)> {
    crate::numeric::gauss_legendre(order)
}

/// Closed-form Coulomb action in units of hbar:
/// E * alpha / sqrt(m^2c^4 - E^2) - sqrt((l + 1/2)^2 - alpha^2).
///
/// A negative return signals that no level exists at this energy (the
/// centrifugal part outweighs the accumulated phase), so unlike the
/// quadrature this function may legitimately return values below zero.
pub fn closed_form_coulomb_action(ctx: &PhysicalContext, energy: Energy, l: u32) -> Result<f64> {
    let alpha = ctx.coupling;
    let half_l = l as f64 + 0.5;
    if alpha >= half_l {
        return Err(Error::CouplingTooStrong {
            coupling: alpha,
            angular: ctx.langer_angular(l),
        });
    }
    if !(energy.offset() < 0.0 && energy.total() > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "closed-form Coulomb action needs 0 < E < mc^2, got E - mc^2 = {:e}",
            energy.offset()
        )));
    }
    let gap = energy.rest_gap_sq().sqrt();
    Ok(energy.total() * alpha / gap - (half_l * half_l - alpha * alpha).sqrt())
}
