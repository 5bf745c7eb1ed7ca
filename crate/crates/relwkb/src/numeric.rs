//! Small numerical building blocks: Gauss-Legendre rules, bracketing root
//! refinement, golden-section minimization and grid helpers.

use std::sync::OnceLock;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre polynomial.
pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi-style initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((-x, w));
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn cached_rule(cell: &OnceLock<Vec<(f64, f64)>>, order: usize) -> &[(f64, f64)] {
    cell.get_or_init(|| gauss_legendre(order))
}

static GL16: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
static GL24: OnceLock<Vec<(f64, f64)>> = OnceLock::new();

pub(crate) fn gl16() -> &'static [(f64, f64)] {
    cached_rule(&GL16, 16)
}

pub(crate) fn gl24() -> &'static [(f64, f64)] {
    cached_rule(&GL24, 24)
}

/// Integrates `f` over `[a, b]` with a single fixed-order rule.
pub(crate) fn gl_panel<E>(
    rule: &[(f64, f64)],
    a: f64,
    b: f64,
    f: &mut impl FnMut(f64) -> Result<f64, E>,
) -> Result<f64, E> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for &(x, w) in rule {
        sum += w * f(mid + half * x)?;
    }
    Ok(half * sum)
}

/// Integrates `f` over `[a, b]` split into `panels` equal panels.
pub(crate) fn gl_composite<E>(
    rule: &[(f64, f64)],
    a: f64,
    b: f64,
    panels: usize,
    f: &mut impl FnMut(f64) -> Result<f64, E>,
) -> Result<f64, E> {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == panels { b } else { lo + h };
        total += gl_panel(rule, lo, hi, f)?;
    }
    Ok(total)
}

/// Refines a sign change of `f` inside `[lo, hi]` by bisection down to
/// relative machine width, then one secant polish. `f(lo)` and `f(hi)` must
/// have opposite signs (zero counts as either).
pub(crate) fn refine_sign_change(mut lo: f64, mut hi: f64, f: &mut impl FnMut(f64) -> f64) -> f64 {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 {
        return hi;
    }
    debug_assert!(f_lo.signum() != f_hi.signum());
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    // secant polish inside the final bracket
    let g_lo = f(lo);
    let g_hi = f(hi);
    if g_lo != g_hi {
        let x = lo - g_lo * (hi - lo) / (g_hi - g_lo);
        if x > lo && x < hi {
            return x;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimization of a unimodal `f` on `[a, b]`.
pub(crate) fn golden_min(mut a: f64, mut b: f64, f: &mut impl FnMut(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_895;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * (a.abs() + b.abs() + 1e-300) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Trapezoid integral of samples `y` over abscissae `x` (same length).
pub(crate) fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 1..x.len() {
        sum += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    }
    sum
}

/// Linear interpolation of `(xs, ys)` samples at `x`; xs strictly increasing
/// and `x` within range.
pub(crate) fn lerp_sample(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    match xs.binary_search_by(|v| v.total_cmp(&x)) {
        Ok(i) => ys[i],
        Err(i) => {
            let i = i.clamp(1, xs.len() - 1);
            let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            ys[i - 1] + t * (ys[i] - ys[i - 1])
        }
    }
}
