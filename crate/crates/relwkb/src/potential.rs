//! Radial scalar potentials V(r) entering the wave equation through E - V,
//! plus the effective-radicand evaluator c^2 p_r^2 built from them.

use std::fmt;
use std::path::Path;

use crate::context::{Energy, PhysicalContext};
use crate::error::{Error, Result};

/// A central potential V(r).
///
/// The Coulomb kind reads its strength from the context coupling, so the
/// closed-form Coulomb expressions elsewhere in the crate see the same
/// number. Tabulated potentials are evaluated with shape-preserving cubic
/// interpolation and refuse to extrapolate.
#[derive(Debug, Clone)]
pub enum RadialPotential {
    /// V(r) = -(coupling * hbar c) / r.
    Coulomb,
    /// V(r) = 1/2 * mass * omega^2 * r^2.
    Harmonic { omega: f64 },
    /// V(r) = slope * r.
    Linear { slope: f64 },
    /// Interpolated two-column table.
    Table(TablePotential),
}

impl RadialPotential {
    pub fn evaluate(&self, ctx: &PhysicalContext, r: f64) -> Result<f64> {
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::NonPositiveRadius { radius: r });
        }
        match self {
            Self::Coulomb => Ok(-ctx.coulomb_strength() / r),
            Self::Harmonic { omega } => Ok(0.5 * ctx.mass * omega * omega * r * r),
            Self::Linear { slope } => Ok(slope * r),
            Self::Table(table) => table.evaluate(r),
        }
    }

    /// True iff V diverges as r -> 0+.
    pub fn origin_singularity(&self) -> bool {
        matches!(self, Self::Coulomb)
    }

    /// True for potentials growing without bound, whose levels sit above the
    /// rest energy.
    pub fn confining(&self) -> bool {
        matches!(self, Self::Harmonic { .. } | Self::Linear { .. })
    }

    /// Radial interval on which the potential is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Self::Table(table) => table.range(),
            _ => (0.0, f64::INFINITY),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Coulomb => "coulomb",
            Self::Harmonic { .. } => "harmonic",
            Self::Linear { .. } => "linear",
            Self::Table(_) => "table",
        }
    }
}

impl fmt::Display for RadialPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Coulomb => write!(f, "coulomb"),
            Self::Harmonic { omega } => write!(f, "harmonic(omega={omega})"),
            Self::Linear { slope } => write!(f, "linear(slope={slope})"),
            Self::Table(t) => {
                let (lo, hi) = t.range();
                write!(f, "table({} points on [{lo}, {hi}])", t.len())
            }
        }
    }
}

/// Tabulated potential with monotone (Fritsch-Carlson) cubic interpolation.
#[derive(Debug, Clone)]
pub struct TablePotential {
    radii: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl TablePotential {
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidTable(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        let mut radii = Vec::with_capacity(points.len());
        let mut values = Vec::with_capacity(points.len());
        for &(r, v) in points {
            if !r.is_finite() || !v.is_finite() {
                return Err(Error::InvalidTable(format!("non-finite entry ({r}, {v})")));
            }
            if r <= 0.0 {
                return Err(Error::InvalidTable(format!("non-positive radius {r}")));
            }
            if let Some(&prev) = radii.last() {
                if r <= prev {
                    return Err(Error::InvalidTable(format!(
                        "radii must be strictly increasing ({prev} then {r})"
                    )));
                }
            }
            radii.push(r);
            values.push(v);
        }
        let slopes = monotone_slopes(&radii, &values);
        Ok(Self {
            radii,
            values,
            slopes,
        })
    }

    /// Parses `r value` pairs, one per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let r = fields.next();
            let v = fields.next();
            let extra = fields.next();
            match (r, v, extra) {
                (Some(r), Some(v), None) => {
                    let r: f64 = r.parse().map_err(|_| {
                        Error::InvalidTable(format!("line {}: bad number {r:?}", lineno + 1))
                    })?;
                    let v: f64 = v.parse().map_err(|_| {
                        Error::InvalidTable(format!("line {}: bad number {v:?}", lineno + 1))
                    })?;
                    points.push((r, v));
                }
                _ => {
                    return Err(Error::InvalidTable(format!(
                        "line {}: expected `r value`, got {raw:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Self::new(&points)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn range(&self) -> (f64, f64) {
        (self.radii[0], *self.radii.last().unwrap())
    }

    pub fn evaluate(&self, r: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if r < lo || r > hi {
            return Err(Error::TableRange {
                radius: r,
                min: lo,
                max: hi,
            });
        }
        let i = match self.radii.binary_search_by(|v| v.total_cmp(&r)) {
            Ok(i) => return Ok(self.values[i]),
            Err(i) => i.clamp(1, self.radii.len() - 1),
        };
        let h = self.radii[i] - self.radii[i - 1];
        let t = (r - self.radii[i - 1]) / h;
        let (y0, y1) = (self.values[i - 1], self.values[i]);
        let (m0, m1) = (self.slopes[i - 1] * h, self.slopes[i] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        Ok(y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2))
    }
}

/// Fritsch-Carlson limited slopes: the resulting cubic never overshoots the
/// data and is monotone wherever the data are.
fn monotone_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = (1..n).map(|i| x[i] - x[i - 1]).collect();
    let d: Vec<f64> = (1..n).map(|i| (y[i] - y[i - 1]) / h[i - 1]).collect();
    if n == 2 {
        return vec![d[0], d[0]];
    }
    let mut m = vec![0.0; n];
    for i in 1..n - 1 {
        if d[i - 1] * d[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    m[0] = endpoint_slope(h[0], h[1], d[0], d[1]);
    m[n - 1] = endpoint_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let mut m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        m = 0.0;
    } else if d0 * d1 < 0.0 && m.abs() > 3.0 * d0.abs() {
        m = 3.0 * d0;
    }
    m
}

/// sqrt(m^2 c^4 + (angular/r)^2): the minimum local energy for real radial
/// momentum at radius r.
pub(crate) fn transverse_energy(ctx: &PhysicalContext, angular: f64, r: f64) -> f64 {
    let rest = ctx.rest_energy();
    let cent = angular / r;
    (rest * rest + cent * cent).sqrt()
}

/// U+(r) - mc^2 where U+(r) = V(r) + sqrt(m^2 c^4 + (angular/r)^2) is the
/// lower edge of the classically allowed energies at radius r. Written so
/// that no rest-energy cancellation occurs: the centrifugal piece is
/// (angular/r)^2 / (W + mc^2).
pub fn effective_offset(
    potential: &RadialPotential,
    ctx: &PhysicalContext,
    angular: f64,
    r: f64,
) -> Result<f64> {
    let v = potential.evaluate(ctx, r)?;
    let w = transverse_energy(ctx, angular, r);
    let cent = angular / r;
    Ok(v + cent * cent / (w + ctx.rest_energy()))
}

/// c^2 p_r^2 at radius r: (E - V)^2 - m^2 c^4 - (angular/r)^2, evaluated in
/// the factored form (E - V - W)(E - V + W) with W the transverse energy.
pub fn effective_radicand_at(
    potential: &RadialPotential,
    ctx: &PhysicalContext,
    energy: Energy,
    angular: f64,
    r: f64,
) -> Result<f64> {
    let v = potential.evaluate(ctx, r)?;
    let w = transverse_energy(ctx, angular, r);
    let below = energy.offset() - effective_offset(potential, ctx, angular, r)?;
    let above = energy.total() - v + w;
    Ok(below * above)
}

/// The radicand as a reusable evaluator of r.
pub fn effective_radicand<'a>(
    potential: &'a RadialPotential,
    ctx: &'a PhysicalContext,
    energy: Energy,
    angular: f64,
) -> impl Fn(f64) -> Result<f64> + 'a {
    move |r| effective_radicand_at(potential, ctx, energy, angular, r)
}
