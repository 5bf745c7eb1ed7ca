//! Relativistic radial kinematics: momentum, turning points and the
//! classically allowed interval for a given energy and angular factor.

use crate::context::{Energy, PhysicalContext, Tolerances};
use crate::error::{Error, Result};
use crate::numeric::{golden_min, refine_sign_change};
use crate::potential::{effective_offset, effective_radicand_at, RadialPotential};

/// The classically allowed radial interval [r_a, r_b] for one (E, angular)
/// pair on the particle branch.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalRegion {
    /// Inner turning radius.
    pub r_a: f64,
    /// Outer turning radius.
    pub r_b: f64,
    pub energy: Energy,
    /// Angular factor in energy * length units; (l + 1/2) hbar c under the
    /// Langer rule.
    pub angular: f64,
}

impl ClassicalRegion {
    pub fn width(&self) -> f64 {
        self.r_b - self.r_a
    }
}

/// Radial momentum p_r >= 0 at a radius inside the allowed region.
pub fn radial_momentum(
    potential: &RadialPotential,
    ctx: &PhysicalContext,
    energy: Energy,
    angular: f64,
    r: f64,
) -> Result<f64> {
    let radicand = effective_radicand_at(potential, ctx, energy, angular, r)?;
    if radicand < 0.0 {
        return Err(Error::ClassicallyForbidden {
            radius: r,
            radicand,
        });
    }
    Ok(radicand.sqrt() / ctx.c)
}

/// Scan bounds: Compton-wavelength multiples clamped to the potential's
/// domain.
pub(crate) fn scan_bounds(potential: &RadialPotential, ctx: &PhysicalContext) -> (f64, f64) {
    let lc = ctx.compton_wavelength();
    let (dom_lo, dom_hi) = potential.domain();
    let lo = (lc * 1e-3).max(dom_lo);
    let hi = (lc * 1e6).min(dom_hi);
    (lo, hi)
}

/// Locates the classically allowed interval. The search works on the
/// effective potential U+(r) = V + sqrt(m^2c^4 + (angular/r)^2), whose
/// sub-level set at E is exactly the particle-branch region; confining
/// potentials reopen an antiparticle region at large r which must not be
/// mistaken for a second well.
pub fn find_classical_region(
    potential: &RadialPotential,
    ctx: &PhysicalContext,
    tol: &Tolerances,
    energy: Energy,
    angular: f64,
) -> Result<ClassicalRegion> {
    if !angular.is_finite() || angular < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "angular factor must be non-negative, got {angular}"
        )));
    }
    if let RadialPotential::Coulomb = potential {
        if ctx.coupling > 0.0 {
            return coulomb_region(ctx, energy, angular);
        }
    }
    generic_region(potential, ctx, tol, energy, angular)
}

/// Coulomb turning points from the quadratic in u = 1/r:
/// (e^4 - angular^2) u^2 + 2 E e^2 u + (E^2 - m^2c^4) = 0.
fn coulomb_region(ctx: &PhysicalContext, energy: Energy, angular: f64) -> Result<ClassicalRegion> {
    let e2 = ctx.coulomb_strength();
    let a = e2 * e2 - angular * angular;
    if a >= 0.0 {
        return Err(Error::CouplingTooStrong {
            coupling: ctx.coupling,
            angular,
        });
    }
    if energy.offset() >= 0.0 || energy.total() <= 0.0 {
        return Err(Error::NoBoundRegion {
            offset: energy.offset(),
        });
    }
    let gap_sq = energy.rest_gap_sq();
    // disc/4 = e^4 m^2c^4 - angular^2 * gap_sq
    let rest = energy.rest();
    let disc4 = e2 * e2 * rest * rest - angular * angular * gap_sq;
    if disc4 <= 0.0 {
        return Err(Error::NoBoundRegion {
            offset: energy.offset(),
        });
    }
    let b = 2.0 * energy.total() * e2;
    let u_inner = (b + 2.0 * disc4.sqrt()) / (-2.0 * a); // larger root, -a > 0
    let u_outer = (gap_sq / (-a)) / u_inner; // via the root product
    if !(u_outer > 0.0 && u_inner > u_outer) {
        return Err(Error::NoBoundRegion {
            offset: energy.offset(),
        });
    }
    Ok(ClassicalRegion {
        r_a: 1.0 / u_inner,
        r_b: 1.0 / u_outer,
        energy,
        angular,
    })
}

fn generic_region(
    potential: &RadialPotential,
    ctx: &PhysicalContext,
    tol: &Tolerances,
    energy: Energy,
    angular: f64,
) -> Result<ClassicalRegion> {
    let (lo, hi) = scan_bounds(potential, ctx);
    if lo >= hi {
        return Err(Error::InvalidArgument(format!(
            "empty scan domain [{lo}, {hi}]"
        )));
    }
    let samples = geometric_samples(lo, hi, tol.bracket_expansion);
    let g = |r: f64| -> Result<f64> {
        Ok(energy.offset() - effective_offset(potential, ctx, angular, r)?)
    };

    let mut values = Vec::with_capacity(samples.len());
    for &r in &samples {
        values.push(g(r)?);
    }

    // maximal runs of g > 0
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = None;
    for (i, &v) in values.iter().enumerate() {
        if v > 0.0 {
            if start.is_none() {
                start = Some(i);
            }
        } else if let Some(s) = start.take() {
            runs.push((s, i - 1));
        }
    }
    if let Some(s) = start.take() {
        runs.push((s, values.len() - 1));
    }

    let (first, last) = match runs.len() {
        0 => {
            // the well may be narrower than the scan step: chase the
            // minimum of the effective potential
            let (i_min, _) = values
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap();
            let a = samples[i_min.saturating_sub(1)];
            let b = samples[(i_min + 1).min(samples.len() - 1)];
            let mut neg_g = |r: f64| -g(r).unwrap_or(f64::INFINITY);
            let (r_min, neg_best) = golden_min(a, b, &mut neg_g);
            if -neg_best <= 0.0 {
                return Err(Error::NoBoundRegion {
                    offset: energy.offset(),
                });
            }
            let ra = refine_turning(a, r_min, &g)?;
            let rb = refine_turning(r_min, b, &g)?;
            return Ok(ClassicalRegion {
                r_a: ra,
                r_b: rb,
                energy,
                angular,
            });
        }
        1 => runs[0],
        n => return Err(Error::MultipleWells { count: n }),
    };
    if first == 0 || last == values.len() - 1 {
        return Err(Error::UnboundedMotion);
    }
    let r_a = refine_turning(samples[first - 1], samples[first], &g)?;
    let r_b = refine_turning(samples[last], samples[last + 1], &g)?;
    Ok(ClassicalRegion {
        r_a,
        r_b,
        energy,
        angular,
    })
}

fn refine_turning(lo: f64, hi: f64, g: &impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut failed = None;
    let root = refine_sign_change(lo, hi, &mut |r| match g(r) {
        Ok(v) => v,
        Err(e) => {
            failed = Some(e);
            f64::NAN
        }
    });
    match failed {
        Some(e) => Err(e),
        None => Ok(root),
    }
}

fn geometric_samples(lo: f64, hi: f64, factor: f64) -> Vec<f64> {
    let mut samples = vec![lo];
    let mut r = lo;
    while r < hi {
        r *= factor;
        samples.push(r.min(hi));
    }
    samples
}

/// The open interval of energy offsets with a bounded classical region:
/// (min_r U+ - mc^2, U+ at the outer scan edge - mc^2).
pub fn bound_offset_range(
    potential: &RadialPotential,
    ctx: &PhysicalContext,
    tol: &Tolerances,
    angular: f64,
) -> Result<(f64, f64)> {
    if let RadialPotential::Coulomb = potential {
        if ctx.coupling > 0.0 {
            let e2 = ctx.coulomb_strength();
            if e2 >= angular {
                return Err(Error::CouplingTooStrong {
                    coupling: ctx.coupling,
                    angular,
                });
            }
            // min U+ = mc^2 sqrt(1 - (e^2/angular)^2), offset form via ln1p
            let ratio = e2 / angular;
            let floor = ctx.rest_energy() * (0.5 * (-ratio * ratio).ln_1p()).exp_m1();
            let (_, hi) = scan_bounds(potential, ctx);
            let ceiling = effective_offset(potential, ctx, angular, hi)?;
            return Ok((floor, ceiling));
        }
    }
    let (lo, hi) = scan_bounds(potential, ctx);
    let samples = geometric_samples(lo, hi, 1.1_f64.min(tol.bracket_expansion));
    let mut best = (0usize, f64::INFINITY);
    for (i, &r) in samples.iter().enumerate() {
        let u = effective_offset(potential, ctx, angular, r)?;
        if u < best.1 {
            best = (i, u);
        }
    }
    let a = samples[best.0.saturating_sub(1)];
    let b = samples[(best.0 + 1).min(samples.len() - 1)];
    let mut u = |r: f64| effective_offset(potential, ctx, angular, r).unwrap_or(f64::INFINITY);
    let (_, floor) = golden_min(a, b, &mut u);
    let ceiling = effective_offset(potential, ctx, angular, hi)?;
    Ok((floor.min(best.1), ceiling))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::effective_radicand_at;
    use approx::assert_relative_eq;

    fn hydrogen() -> PhysicalContext {
        PhysicalContext::hydrogen(0.0072974).unwrap()
    }

    #[test]
    fn free_momentum_is_radius_independent() {
        let ctx = PhysicalContext::natural_units();
        let pot = RadialPotential::Coulomb; // zero coupling
        let energy = Energy::from_total(1.25, &ctx);
        for r in [0.1, 1.0, 42.0] {
            let p = radial_momentum(&pot, &ctx, energy, 0.0, r).unwrap();
            assert_relative_eq!(p, 0.75, max_relative = 1e-14);
        }
    }

    #[test]
    fn momentum_errors_in_the_forbidden_zone() {
        let ctx = hydrogen();
        let pot = RadialPotential::Coulomb;
        let energy = Energy::from_offset(-2.6626e-5, &ctx);
        let err = radial_momentum(&pot, &ctx, energy, ctx.langer_angular(0), 1e5);
        assert!(matches!(err, Err(Error::ClassicallyForbidden { .. })));
    }

    #[test]
    fn coulomb_region_matches_quadratic_roots_and_vanishing_radicand() {
        let ctx = hydrogen();
        let pot = RadialPotential::Coulomb;
        let tol = Tolerances::default();
        let energy = Energy::from_offset(-2.6626e-5, &ctx);
        let angular = ctx.langer_angular(0);
        let region = find_classical_region(&pot, &ctx, &tol, energy, angular).unwrap();

        // independent root computation for the quadratic in 1/r
        let alpha = ctx.coupling;
        let e = energy.total();
        let (a, b, c) = (alpha * alpha - 0.25, 2.0 * e * alpha, e * e - 1.0);
        let disc = (b * b - 4.0 * a * c).sqrt();
        let u1 = (-b - disc) / (2.0 * a);
        let u2 = (-b + disc) / (2.0 * a);
        assert_relative_eq!(region.r_a, 1.0 / u1.max(u2), max_relative = 1e-10);
        assert_relative_eq!(region.r_b, 1.0 / u1.min(u2), max_relative = 1e-10);

        for r in [region.r_a, region.r_b] {
            let f = effective_radicand_at(&pot, &ctx, energy, angular, r).unwrap();
            assert!(f.abs() < 1e-12, "radicand {f} at turning radius {r}");
        }
        let p_mid =
            radial_momentum(&pot, &ctx, energy, angular, 0.5 * (region.r_a + region.r_b)).unwrap();
        assert!(p_mid > 0.0 && p_mid.is_finite());
        assert!(
            radial_momentum(
                &pot,
                &ctx,
                energy,
                angular,
                region.r_a + 1e-9 * region.width()
            )
            .unwrap()
                < 1e-3
        );
    }

    #[test]
    fn harmonic_region_matches_brute_force_scan() {
        let ctx = PhysicalContext::natural_units();
        let pot = RadialPotential::Harmonic { omega: 1.0 };
        let tol = Tolerances::default();
        let energy = Energy::from_total(2.5, &ctx);
        let region = find_classical_region(&pot, &ctx, &tol, energy, 1.5).unwrap();

        // brute-force oracle on a fine linear grid over the particle branch
        let r_v = (2.0 * energy.total()).sqrt();
        let n = 2_000_000;
        let mut brute_a = None;
        let mut brute_b = None;
        let mut prev_pos = false;
        for i in 1..n {
            let r = r_v * i as f64 / n as f64;
            let f = effective_radicand_at(&pot, &ctx, energy, 1.5, r).unwrap();
            let pos = f > 0.0;
            if pos && !prev_pos {
                brute_a = Some(r);
            }
            if !pos && prev_pos {
                brute_b = Some(r);
            }
            prev_pos = pos;
        }
        assert!((region.r_a - brute_a.unwrap()).abs() < 1e-5);
        assert!((region.r_b - brute_b.unwrap()).abs() < 1e-5);
        // and the refined points zero the radicand far more tightly
        for r in [region.r_a, region.r_b] {
            let f = effective_radicand_at(&pot, &ctx, energy, 1.5, r).unwrap();
            assert!(f.abs() < 1e-10);
        }
    }

    #[test]
    fn coulomb_above_rest_energy_has_no_bound_region() {
        let ctx = hydrogen();
        let tol = Tolerances::default();
        let energy = Energy::from_total(1.0, &ctx);
        let err = find_classical_region(
            &RadialPotential::Coulomb,
            &ctx,
            &tol,
            energy,
            ctx.langer_angular(0),
        );
        assert!(matches!(err, Err(Error::NoBoundRegion { .. })));
    }

    #[test]
    fn region_shrinks_toward_the_effective_minimum() {
        let ctx = hydrogen();
        let tol = Tolerances::default();
        let angular = ctx.langer_angular(0);
        let pot = RadialPotential::Coulomb;
        let (floor, _) = bound_offset_range(&pot, &ctx, &tol, angular).unwrap();
        let energy = Energy::from_offset(floor * (1.0 - 1e-10), &ctx);
        let region = find_classical_region(&pot, &ctx, &tol, energy, angular).unwrap();
        assert!(region.width() > 0.0);
        assert!(region.width() < 1e-3 * region.r_b);
    }

    #[test]
    fn turning_points_move_monotonically_with_energy() {
        let tol = Tolerances::default();
        let ctx = hydrogen();
        let cases: [(RadialPotential, f64, Vec<f64>); 2] = [
            (
                RadialPotential::Coulomb,
                ctx.langer_angular(1),
                (1..=20)
                    .map(|k| -2.0e-6 + 1.8e-6 * k as f64 / 21.0)
                    .collect(),
            ),
            (
                RadialPotential::Harmonic { omega: 0.001 },
                ctx.langer_angular(1),
                (1..=20).map(|k| 1.6e-3 + 1e-2 * k as f64 / 21.0).collect(),
            ),
        ];
        for (pot, angular, offsets) in cases {
            let mut prev: Option<ClassicalRegion> = None;
            for offset in offsets {
                let energy = Energy::from_offset(offset, &ctx);
                let region = find_classical_region(&pot, &ctx, &tol, energy, angular).unwrap();
                if let Some(p) = prev {
                    assert!(region.r_a <= p.r_a * (1.0 + 1e-12), "{pot}");
                    assert!(region.r_b >= p.r_b * (1.0 - 1e-12), "{pot}");
                }
                prev = Some(region);
            }
        }
    }

    #[test]
    fn momentum_identity_reproduces_the_dispersion_relation() {
        // p^2 c^2 + m^2 c^4 + (angular/r)^2 - (E - V)^2 = 0 pointwise
        let ctx = hydrogen();
        let tol = Tolerances::default();
        let pot = RadialPotential::Coulomb;
        let energy = Energy::from_offset(-8.0e-6, &ctx);
        let angular = ctx.langer_angular(1);
        let region = find_classical_region(&pot, &ctx, &tol, energy, angular).unwrap();
        for k in 1..40 {
            let r = region.r_a + region.width() * k as f64 / 40.0;
            let p = radial_momentum(&pot, &ctx, energy, angular, r).unwrap();
            let v = pot.evaluate(&ctx, r).unwrap();
            let lhs = p * p * ctx.c * ctx.c
                + ctx.rest_energy() * ctx.rest_energy()
                + (angular / r) * (angular / r);
            let rhs = (energy.total() - v) * (energy.total() - v);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn harmonic_with_zero_angular_reports_unbounded_motion() {
        // no centrifugal wall and a regular potential: the allowed set
        // touches the origin, which is not a two-turning-point libration
        let ctx = PhysicalContext::natural_units();
        let tol = Tolerances::default();
        let energy = Energy::from_total(1.5, &ctx);
        let err = find_classical_region(
            &RadialPotential::Harmonic { omega: 0.1 },
            &ctx,
            &tol,
            energy,
            0.0,
        );
        assert!(matches!(err, Err(Error::UnboundedMotion)));
    }
}
