//! Independent eigensolver for the stationary radial wave equation
//! u'' + Q(r) u = 0 with Q = [(E - V)^2 - m^2 c^4] / (hbar c)^2 - l(l+1)/r^2,
//! by fourth-order Numerov integration and two-sided shooting. This is the
//! ground truth the semiclassical results are judged against, so it shares
//! no quadrature or quantization machinery with them.

use crate::context::{Energy, PhysicalContext, Tolerances};
use crate::error::{Error, Result};
use crate::kinematics::{bound_offset_range, find_classical_region};
use crate::potential::RadialPotential;

/// Grid controls; `None` fields are sized automatically from the classical
/// region of the level being solved.
#[derive(Debug, Clone, Copy, Default)]
pub struct GridSpec {
    pub points: Option<usize>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
}

/// A converged eigenpair on a uniform radial grid (u = r * phi convention).
#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub energy: Energy,
    /// Interior node count of u, equal to the requested radial quantum
    /// number at convergence.
    pub n_r: u32,
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    /// Normalized logarithmic-derivative mismatch of the outward and inward
    /// integrations at the matching point.
    pub match_defect: f64,
}

const RESCALE_LIMIT: f64 = 1e250;
const DEFECT_LIMIT: f64 = 1e-10;

pub fn solve_exact(
    potential: &RadialPotential,
    ctx: &PhysicalContext,
    tol: &Tolerances,
    n_r: u32,
    l: u32,
    spec: &GridSpec,
) -> Result<OracleSolution> {
    ctx.validate()?;
    tol.validate()?;
    if matches!(potential, RadialPotential::Table(_)) {
        return Err(Error::InvalidArgument(
            "the exact solver needs a potential defined down to r -> 0; tables are not".into(),
        ));
    }
    if matches!(potential, RadialPotential::Coulomb) && ctx.coupling >= l as f64 + 0.5 {
        return Err(Error::CouplingTooStrong {
            coupling: ctx.coupling,
            angular: ctx.langer_angular(l),
        });
    }

    let angular = ctx.langer_angular(l);
    let (floor, ceiling) = bound_offset_range(potential, ctx, tol, angular)?;
    let span = ceiling - floor;
    if span <= 0.0 {
        return Err(Error::NoBoundRegion { offset: floor });
    }
    let guard = (1e-9 * ctx.rest_energy()).min(1e-3 * span);
    let offset_lo = floor + guard;

    // climb until the grid built for the top candidate sees more than n_r
    // outward nodes; that grid then serves every subsequent shot
    let mut offset_hi = offset_lo;
    let mut shooter = None;
    for _ in 0..120 {
        offset_hi = if potential.confining() {
            (floor + (offset_hi - floor) * 4.0).min(ceiling - guard)
        } else {
            ceiling - 0.25 * (ceiling - offset_hi)
        };
        let candidate = Shooter::new(potential, ctx, tol, l, angular, offset_hi, spec)?;
        if candidate.march(offset_hi).nodes > n_r as usize {
            shooter = Some(candidate);
            break;
        }
        if ceiling - offset_hi <= guard * 1e-3 {
            break;
        }
    }
    let shooter = shooter.ok_or(Error::NodeCountUnreachable {
        target: n_r,
        lo: offset_lo,
        hi: offset_hi,
    })?;

    // isolate the window where the outward solution carries exactly n_r nodes
    let right = shooter.node_transition(n_r as usize, offset_lo, offset_hi);
    let left = if n_r == 0 {
        offset_lo
    } else {
        shooter.node_transition(n_r as usize - 1, offset_lo, right)
    };
    let window = right - left;
    if window <= 0.0 {
        return Err(Error::NodeCountUnreachable {
            target: n_r,
            lo: left,
            hi: right,
        });
    }

    // the matching Wronskian changes sign exactly once inside the window
    let mut a = left + 1e-6 * window;
    let mut b = right - 1e-6 * window;
    let mut w_a = shooter.march(a).wronskian();
    let w_b = shooter.march(b).wronskian();
    if w_a != 0.0 && w_b != 0.0 && w_a.signum() == w_b.signum() {
        let mut found = false;
        let mut prev = (a, w_a);
        for k in 1..=64 {
            let x = a + (b - a) * k as f64 / 64.0;
            let w_x = shooter.march(x).wronskian();
            if w_x == 0.0 || w_x.signum() != prev.1.signum() {
                a = prev.0;
                w_a = prev.1;
                b = x;
                found = true;
                break;
            }
            prev = (x, w_x);
        }
        if !found {
            return Err(Error::NoConvergence(format!(
                "matching defect does not change sign in the node-{n_r} window"
            )));
        }
    }
    for _ in 0..160 {
        let scale = a.abs().max(b.abs()) + f64::MIN_POSITIVE;
        if (b - a).abs() <= 2.0 * f64::EPSILON * scale {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a.min(b) || mid >= a.max(b) {
            break;
        }
        let w_mid = shooter.march(mid).wronskian();
        if w_mid == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if w_mid.signum() == w_a.signum() {
            a = mid;
            w_a = w_mid;
        } else {
            b = mid;
        }
    }
    let offset = 0.5 * (a + b);

    let (u, defect, nodes) = shooter.assemble(offset)?;
    if nodes != n_r as usize {
        return Err(Error::NodeCount {
            expected: n_r,
            found: nodes,
        });
    }
    if defect.is_nan() || defect > DEFECT_LIMIT {
        return Err(Error::NoConvergence(format!(
            "matching defect {defect:e} above {DEFECT_LIMIT:e}"
        )));
    }
    Ok(OracleSolution {
        energy: Energy::from_offset(offset, ctx),
        n_r,
        grid: shooter.grid,
        u,
        match_defect: defect,
    })
}

struct March {
    /// Outward solution, valid on [0, m + 3].
    u: Vec<f64>,
    /// Inward solution, valid on [m - 3, n).
    v: Vec<f64>,
    m: usize,
    /// Sign changes of the outward solution strictly below the match index.
    nodes: usize,
    h: f64,
}

impl March {
    fn wronskian(&self) -> f64 {
        let m = self.m;
        (self.u[m + 1] - self.u[m - 1]) * self.v[m] - (self.v[m + 1] - self.v[m - 1]) * self.u[m]
    }

    /// Probe index near the match point where both branches carry amplitude.
    fn probe(&self) -> usize {
        let mut probe = self.m;
        let mut best = -1.0;
        for i in self.m - 2..=self.m + 2 {
            let weight = (self.u[i] * self.v[i]).abs();
            if weight > best {
                best = weight;
                probe = i;
            }
        }
        probe
    }

    fn defect(&self) -> f64 {
        let p = self.probe();
        let du = (self.u[p + 1] - self.u[p - 1]) / (2.0 * self.h);
        let dv = (self.v[p + 1] - self.v[p - 1]) / (2.0 * self.h);
        let l_out = du / self.u[p];
        let l_in = dv / self.v[p];
        (l_out - l_in).abs() / (1.0 + l_out.abs() + l_in.abs())
    }
}

struct Shooter<'a> {
    ctx: &'a PhysicalContext,
    l: u32,
    grid: Vec<f64>,
    v_grid: Vec<f64>,
    h: f64,
    start: usize,
    coulomb_strength: f64,
    inv_hbarc_sq: f64,
}

impl<'a> Shooter<'a> {
    fn new(
        potential: &RadialPotential,
        ctx: &'a PhysicalContext,
        tol: &Tolerances,
        l: u32,
        angular: f64,
        offset_ref: f64,
        spec: &GridSpec,
    ) -> Result<Self> {
        let energy = Energy::from_offset(offset_ref, ctx);
        let region = find_classical_region(potential, ctx, tol, energy, angular)?;
        let hbar_c = ctx.hbar_c();
        let rest = ctx.rest_energy();
        let ll1 = (l * (l + 1)) as f64;
        let q_physical = |r: f64| -> Result<f64> {
            let v = potential.evaluate(ctx, r)?;
            let a = offset_ref - v;
            Ok(a * (a + 2.0 * rest) / (hbar_c * hbar_c) - ll1 / (r * r))
        };

        let r_max = if let Some(r_max) = spec.r_max {
            r_max
        } else if potential.confining() {
            // march until the tunneling exponent reaches 40, staying short
            // of the large-r reopening of the radicand
            let step = region.width() / 32.0;
            let mut exponent = 0.0;
            let mut r = region.r_b + step;
            let mut kappa_prev = 0.0;
            let mut steps = 0usize;
            loop {
                let q = q_physical(r)?;
                if q >= 0.0 {
                    r -= step;
                    break;
                }
                let kappa = (-q).sqrt();
                exponent += 0.5 * (kappa + kappa_prev) * step;
                kappa_prev = kappa;
                if exponent >= 40.0 {
                    break;
                }
                r += step;
                steps += 1;
                if steps > 400_000 {
                    return Err(Error::NoConvergence(
                        "outer boundary march did not close the forbidden region".into(),
                    ));
                }
            }
            r
        } else {
            let kappa = energy.rest_gap_sq().sqrt() / hbar_c;
            region.r_b + 15.0 / kappa
        };

        // the wavenumber inside the well sets the spacing
        let mut k_max: f64 = 0.0;
        for i in 1..64 {
            let r = region.r_a + region.width() * i as f64 / 64.0;
            let radicand =
                crate::potential::effective_radicand_at(potential, ctx, energy, angular, r)?;
            k_max = k_max.max(radicand.max(0.0).sqrt() / hbar_c);
        }
        let n = if let Some(points) = spec.points {
            points.max(64)
        } else {
            let h_target = (0.02 / k_max.max(1e-300)).min(r_max / 12_000.0);
            ((r_max / h_target).ceil() as usize).clamp(2_000, 250_000)
        };
        let r_min = spec.r_min.unwrap_or(r_max / n as f64);
        if !(r_min.is_finite() && r_min > 0.0 && r_min < r_max) {
            return Err(Error::InvalidArgument(format!(
                "grid bounds [{r_min}, {r_max}] are not usable"
            )));
        }
        let h = (r_max - r_min) / (n - 1) as f64;
        let grid: Vec<f64> = (0..n).map(|i| r_min + h * i as f64).collect();
        let mut v_grid = Vec::with_capacity(n);
        for &r in &grid {
            v_grid.push(potential.evaluate(ctx, r)?);
        }

        // keep 1 + h^2 Q / 12 away from zero against the centrifugal spike
        let mut start = 0usize;
        while start + 16 < n && ll1 * h * h / (grid[start] * grid[start]) > 1.0 {
            start += 1;
        }

        Ok(Self {
            ctx,
            l,
            grid,
            v_grid,
            h,
            start,
            coulomb_strength: match potential {
                RadialPotential::Coulomb => ctx.coulomb_strength(),
                _ => 0.0,
            },
            inv_hbarc_sq: 1.0 / (hbar_c * hbar_c),
        })
    }

    fn q_at(&self, offset: f64, i: usize) -> f64 {
        let ll1 = (self.l * (self.l + 1)) as f64;
        let r = self.grid[i];
        let a = offset - self.v_grid[i];
        a * (a + 2.0 * self.ctx.rest_energy()) * self.inv_hbarc_sq - ll1 / (r * r)
    }

    /// Power-series start u = r^s (a0 + a1 r + a2 r^2 + a3 r^3) from the
    /// expansion Q = A/r^2 + B/r + C + D r near the origin; four terms keep
    /// the seeding error at the h^4 level of the integrator itself.
    fn seed_values(&self, offset: f64) -> impl Fn(f64) -> f64 {
        let rest = self.ctx.rest_energy();
        let total = rest + offset;
        let (b_coef, c_coef, d_coef, s) = if self.coulomb_strength > 0.0 {
            let e2 = self.coulomb_strength;
            let b = 2.0 * total * e2 * self.inv_hbarc_sq;
            let c = offset * (offset + 2.0 * rest) * self.inv_hbarc_sq;
            let half_l = self.l as f64 + 0.5;
            let coupling = e2 * self.inv_hbarc_sq.sqrt();
            let s = 0.5 + (half_l * half_l - coupling * coupling).sqrt();
            (b, c, 0.0, s)
        } else {
            let v1 = (self.v_grid[1] - self.v_grid[0]) / (self.grid[1] - self.grid[0]);
            let c = offset * (offset + 2.0 * rest) * self.inv_hbarc_sq;
            let d = -2.0 * total * v1 * self.inv_hbarc_sq;
            (0.0, c, d, self.l as f64 + 1.0)
        };
        let a0 = 1.0;
        let a1 = -b_coef * a0 / (2.0 * s);
        let a2 = -(b_coef * a1 + c_coef * a0) / (2.0 * (2.0 * s + 1.0));
        let a3 = -(b_coef * a2 + c_coef * a1 + d_coef * a0) / (3.0 * (2.0 * s + 2.0));
        move |r: f64| r.powf(s) * (a0 + r * (a1 + r * (a2 + r * a3)))
    }

    /// Index of the outermost classically allowed grid point.
    fn match_index(&self, offset: f64) -> usize {
        let n = self.grid.len();
        let mut m = n / 2;
        for i in (0..n).rev() {
            if self.q_at(offset, i) > 0.0 {
                m = i;
                break;
            }
        }
        m.clamp(self.start + 8, n - 8)
    }

    #[allow(clippy::needless_range_loop)]
    fn march(&self, offset: f64) -> March {
        let n = self.grid.len();
        let m = self.match_index(offset);
        let h2 = self.h * self.h;
        let f = |i: usize| 1.0 + h2 * self.q_at(offset, i) / 12.0;

        let seed = self.seed_values(offset);
        let mut u = vec![0.0; n];
        for i in 0..=self.start + 1 {
            u[i] = seed(self.grid[i]);
        }
        for i in self.start + 1..=m + 2 {
            u[i + 1] = ((12.0 - 10.0 * f(i)) * u[i] - f(i - 1) * u[i - 1]) / f(i + 1);
            if u[i + 1].abs() > RESCALE_LIMIT {
                let scale = 1.0 / u[i + 1].abs();
                for value in u[..=i + 1].iter_mut() {
                    *value *= scale;
                }
            }
        }
        let mut nodes = 0usize;
        let mut prev = 0.0f64;
        for &value in &u[self.start..m] {
            if value == 0.0 {
                continue;
            }
            if prev != 0.0 && value.signum() != prev.signum() {
                nodes += 1;
            }
            prev = value;
        }

        let mut v = vec![0.0; n];
        v[n - 1] = 0.0;
        v[n - 2] = 1e-140;
        let lowest = m.saturating_sub(3).max(1);
        for i in (lowest..=n - 2).rev() {
            v[i - 1] = ((12.0 - 10.0 * f(i)) * v[i] - f(i + 1) * v[i + 1]) / f(i - 1);
            if v[i - 1].abs() > RESCALE_LIMIT {
                let scale = 1.0 / v[i - 1].abs();
                for value in v[i - 1..].iter_mut() {
                    *value *= scale;
                }
            }
        }

        March {
            u,
            v,
            m,
            nodes,
            h: self.h,
        }
    }

    fn node_transition(&self, count: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..90 {
            let scale = lo.abs().max(hi.abs()) + f64::MIN_POSITIVE;
            if (hi - lo).abs() <= 4.0 * f64::EPSILON * scale {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.march(mid).nodes > count {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Glues the two branches at the probe point, normalizes and counts the
    /// interior nodes of the assembled eigenfunction.
    fn assemble(&self, offset: f64) -> Result<(Vec<f64>, f64, usize)> {
        let march = self.march(offset);
        let defect = march.defect();
        let probe = march.probe();
        let mut u = march.u;
        // the ratio carries the relative sign of the branches, so the tail
        // continues the outward sign pattern smoothly
        let ratio = u[probe] / march.v[probe];
        for (glued, tail) in u[probe..].iter_mut().zip(&march.v[probe..]) {
            *glued = tail * ratio;
        }
        let sq: Vec<f64> = u.iter().map(|x| x * x).collect();
        let norm_sq = crate::numeric::trapezoid(&self.grid, &sq);
        if !norm_sq.is_finite() || norm_sq <= 0.0 {
            return Err(Error::NoConvergence("non-finite eigenfunction norm".into()));
        }
        let inv = 1.0 / norm_sq.sqrt();
        for value in u.iter_mut() {
            *value *= inv;
        }
        let nodes = count_interior_nodes(&u);
        Ok((u, defect, nodes))
    }
}

/// Sign changes across the grid, ignoring samples below a relative
/// amplitude floor so the truncated tails cannot contribute.
pub(crate) fn count_interior_nodes(u: &[f64]) -> usize {
    let peak = u.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let floor = peak * 1e-9;
    let mut nodes = 0;
    let mut prev = 0.0f64;
    for &value in u {
        if value.abs() <= floor {
            continue;
        }
        if prev != 0.0 && value.signum() != prev.signum() {
            nodes += 1;
        }
        prev = value;
    }
    nodes
}
