//! Initial conditions for the grid experiments: indicator fields for the
//! disk, C-shape, Schwarz P cylinder skeleton and gyroid, plus optimal
//! profile smoothing for validation runs. Indicator data is relaxed by a
//! separate warm-up of convex-concave GD steps where an experiment needs
//! finite energy.

use super::{Field, GridError, PeriodicGrid};
use crate::ode::Profile;

/// Distance on the unit torus between `x` and `c`, per axis.
fn torus_delta(x: f64, c: f64) -> f64 {
    let d = (x - c).abs();
    d.min(1.0 - d)
}

fn torus_dist2(p: &[f64], c: &[f64]) -> f64 {
    p.iter().zip(c).map(|(&x, &cc)| torus_delta(x, cc).powi(2)).sum()
}

/// `±1` indicator of a disk of the given radius (2D).
pub fn disk_init(grid: &PeriodicGrid, center: [f64; 2], radius: f64) -> Result<Field, GridError> {
    if radius > 0.5 {
        return Err(GridError::RadiusTooLarge { radius });
    }
    debug_assert_eq!(grid.dim(), 2);
    let n = grid.n();
    let mut vals = vec![-1.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let d2 = torus_dist2(&[grid.coord(i), grid.coord(j)], &center);
            if d2 < radius * radius {
                vals[i * n + j] = 1.0;
            }
        }
    }
    Ok(Field::from_values(2, n, vals))
}

/// Disk smoothed with the optimal transition profile at width `eps`:
/// `u = phi(sdist / eps)`, positive inside.
pub fn profile_disk_init(
    grid: &PeriodicGrid,
    center: [f64; 2],
    radius: f64,
    eps: f64,
    profile: &Profile,
) -> Result<Field, GridError> {
    if radius > 0.5 {
        return Err(GridError::RadiusTooLarge { radius });
    }
    debug_assert_eq!(grid.dim(), 2);
    let n = grid.n();
    let mut vals = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let d = torus_dist2(&[grid.coord(i), grid.coord(j)], &center).sqrt();
            vals[i * n + j] = profile.eval((radius - d) / eps);
        }
    }
    Ok(Field::from_values(2, n, vals))
}

/// `u = +1` everywhere except a profile-smoothed dip to `-1` on a ball of
/// the given radius; used by the finite-speed-of-propagation probe.
pub fn profile_bump_init(
    grid: &PeriodicGrid,
    center: [f64; 2],
    radius: f64,
    eps: f64,
    profile: &Profile,
) -> Result<Field, GridError> {
    if radius > 0.5 {
        return Err(GridError::RadiusTooLarge { radius });
    }
    debug_assert_eq!(grid.dim(), 2);
    let n = grid.n();
    let mut vals = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let d = torus_dist2(&[grid.coord(i), grid.coord(j)], &center).sqrt();
            vals[i * n + j] = profile.eval((d - radius) / eps);
        }
    }
    Ok(Field::from_values(2, n, vals))
}

/// `±1` indicator of a C-shaped set: an annulus with an angular opening.
pub fn cshape_init(grid: &PeriodicGrid) -> Field {
    debug_assert_eq!(grid.dim(), 2);
    let n = grid.n();
    let (r_inner, r_outer, gap_half_angle) = (0.18, 0.33, 0.7);
    let mut vals = vec![-1.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let (dx, dy) = (grid.coord(i) - 0.5, grid.coord(j) - 0.5);
            let r = (dx * dx + dy * dy).sqrt();
            let theta = dy.atan2(dx);
            if r >= r_inner && r <= r_outer && theta.abs() > gap_half_angle {
                vals[i * n + j] = 1.0;
            }
        }
    }
    Field::from_values(2, n, vals)
}

/// `±1` indicator of three axis-aligned cylinders of radius 0.3 through the
/// cell center, coarsely approximating the inside of a Schwarz P surface.
pub fn schwarzp_init(grid: &PeriodicGrid) -> Field {
    debug_assert_eq!(grid.dim(), 3);
    let n = grid.n();
    let r2 = 0.3 * 0.3;
    let mut vals = vec![-1.0; n * n * n];
    for i in 0..n {
        let dx2 = torus_delta(grid.coord(i), 0.5).powi(2);
        for j in 0..n {
            let dy2 = torus_delta(grid.coord(j), 0.5).powi(2);
            for k in 0..n {
                let dz2 = torus_delta(grid.coord(k), 0.5).powi(2);
                let inside = dx2 + dy2 < r2 || dy2 + dz2 < r2 || dz2 + dx2 < r2;
                if inside {
                    vals[(i * n + j) * n + k] = 1.0;
                }
            }
        }
    }
    Field::from_values(3, n, vals)
}

/// `±1` indicator of the gyroid nodal set
/// `cos X sin Y + cos Y sin Z + cos Z sin X < 0`, `X = 2 pi (x - 1/2)` etc.;
/// splits the period cell into equal volumes.
pub fn gyroid_init(grid: &PeriodicGrid) -> Field {
    debug_assert_eq!(grid.dim(), 3);
    let n = grid.n();
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut vals = vec![0.0; n * n * n];
    for i in 0..n {
        let x = two_pi * (grid.coord(i) - 0.5);
        for j in 0..n {
            let y = two_pi * (grid.coord(j) - 0.5);
            for k in 0..n {
                let z = two_pi * (grid.coord(k) - 0.5);
                let g = x.cos() * y.sin() + y.cos() * z.sin() + z.cos() * x.sin();
                vals[(i * n + j) * n + k] = if g < 0.0 { 1.0 } else { -1.0 };
            }
        }
    }
    Field::from_values(3, n, vals)
}
