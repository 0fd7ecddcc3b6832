//! Energy and geometry estimators on grid fields.

use super::{Field, PeriodicGrid};
use crate::potentials::SplitPotential;

/// Ginzburg-Landau energy `int (eps/2) ||grad u||^2 + W(u)/eps dx`: gradient
/// term spectrally (Parseval), potential term by midpoint quadrature.
pub fn gl_energy(grid: &PeriodicGrid, u: &Field, eps: f64, w: &impl SplitPotential) -> f64 {
    let dirichlet = grid.dirichlet_half(u);
    let pot: f64 = u.values().iter().map(|&v| w.eval(v)).sum::<f64>() * grid.cell_volume();
    eps * dirichlet + pot / eps
}

#[derive(Debug, Clone, Copy)]
pub struct AreaPerimeter {
    pub area: f64,
    /// `2 sqrt(pi A)`; meaningful while a single disk persists.
    pub perimeter: f64,
    /// Set when the raw area integral was negative and clamped to zero
    /// (momentum runs overshoot the wells around the vanishing time).
    pub clamped: bool,
}

/// Disk area `A = int (u+1)/2 dx` and the area-perimeter relation
/// `P = 2 sqrt(pi A)`.
pub fn area_perimeter_estimate(u: &Field) -> AreaPerimeter {
    debug_assert_eq!(u.dim(), 2);
    let raw = (u.mean() + 1.0) / 2.0;
    let clamped = raw < 0.0;
    let area = raw.max(0.0);
    AreaPerimeter { area, perimeter: 2.0 * (std::f64::consts::PI * area).sqrt(), clamped }
}

/// Shift the field so that its mean (zeroth spectral coefficient) is exactly
/// `p`; all other modes are untouched.
pub fn enforce_mean(u: &Field, p: f64) -> Field {
    let shift = p - u.mean();
    let mut out = u.map(|v| v + shift);
    // a constant shift only moves mode zero
    if let Some(spec) = u.cached_spectrum() {
        let mut spec = spec.to_vec();
        spec[0] = num_complex::Complex64::new(p, 0.0);
        out = Field::with_spectrum(u.dim(), u.n(), out.values().to_vec(), spec);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::solve_profile;
    use crate::potentials::DoubleWell;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn gl_energy_vanishes_at_wells() {
        let grid = PeriodicGrid::new(2, 32).unwrap();
        let w = DoubleWell::scalar(2.0).unwrap();
        let u = Field::from_values(2, 32, vec![1.0; grid.len()]);
        assert_abs_diff_eq!(gl_energy(&grid, &u, 0.05, &w), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn gl_energy_of_planar_profile_matches_c0() {
        // a 1D optimal profile across the domain carries c0 per unit length
        // of interface; two interfaces fit on the torus
        let w = DoubleWell::scalar(2.0).unwrap();
        let profile = solve_profile(&w, 32.0, 4097).unwrap();
        let c0 = w.profile_constant().unwrap();
        let n = 512;
        let eps = 0.015;
        let grid = PeriodicGrid::new(2, n).unwrap();
        let mut vals = vec![0.0; n * n];
        for i in 0..n {
            let x = grid.coord(i);
            // distance to the slab {0.25 < x < 0.75}, signed positive inside
            let sdist = (0.25 - (x - 0.5).abs()).min(0.25);
            let u = profile.eval(sdist / eps);
            for j in 0..n {
                vals[i * n + j] = u;
            }
        }
        let u = Field::from_values(2, n, vals);
        let e = gl_energy(&grid, &u, eps, &w);
        assert_relative_eq!(e, 2.0 * c0, max_relative = 0.02);
    }

    #[test]
    fn gl_energy_of_profile_disk_matches_c0_times_circumference() {
        let w = DoubleWell::scalar(2.0).unwrap();
        let profile = solve_profile(&w, 32.0, 4097).unwrap();
        let c0 = w.profile_constant().unwrap();
        let n = 512;
        let eps = 0.015;
        let grid = PeriodicGrid::new(2, n).unwrap();
        let u = super::super::profile_disk_init(&grid, [0.5, 0.5], 0.3, eps, &profile).unwrap();
        let e = gl_energy(&grid, &u, eps, &w);
        assert_relative_eq!(e, c0 * 2.0 * std::f64::consts::PI * 0.3, max_relative = 0.05);
    }

    #[test]
    fn area_perimeter_extremes() {
        let minus = Field::from_values(2, 16, vec![-1.0; 256]);
        let ap = area_perimeter_estimate(&minus);
        assert_abs_diff_eq!(ap.area, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ap.perimeter, 0.0, epsilon = 1e-15);
        assert!(!ap.clamped);

        let plus = Field::from_values(2, 16, vec![1.0; 256]);
        let ap = area_perimeter_estimate(&plus);
        assert_abs_diff_eq!(ap.area, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ap.perimeter, 2.0 * std::f64::consts::PI.sqrt(), epsilon = 1e-14);

        let negative = Field::from_values(2, 16, vec![-1.2; 256]);
        let ap = area_perimeter_estimate(&negative);
        assert!(ap.clamped);
        assert_eq!(ap.area, 0.0);
    }

    #[test]
    fn area_perimeter_of_smooth_disk() {
        let w = DoubleWell::scalar(2.0).unwrap();
        let profile = solve_profile(&w, 32.0, 4097).unwrap();
        let grid = PeriodicGrid::new(2, 256).unwrap();
        let u = super::super::profile_disk_init(&grid, [0.5, 0.5], 0.3, 0.015, &profile).unwrap();
        let ap = area_perimeter_estimate(&u);
        assert_relative_eq!(ap.area, std::f64::consts::PI * 0.09, max_relative = 0.02);
        assert_relative_eq!(ap.perimeter, 2.0 * std::f64::consts::PI * 0.3, max_relative = 0.02);
    }

    #[test]
    fn enforce_mean_examples() {
        let grid = PeriodicGrid::new(2, 16).unwrap();
        let u = Field::from_values(2, 16, (0..256).map(|i| (i % 3) as f64).collect());
        let same = enforce_mean(&u, u.mean());
        for (a, b) in u.values().iter().zip(same.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }

        let c = Field::from_values(2, 16, vec![0.3; 256]);
        let zeroed = enforce_mean(&c, 0.0);
        for v in zeroed.values() {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-14);
        }

        // subtraction oracle + spectral check: only mode 0 moves
        let out = enforce_mean(&u, 0.0);
        for (a, b) in u.values().iter().zip(out.values()) {
            assert_abs_diff_eq!(*b, a - u.mean(), epsilon = 1e-14);
        }
        assert_abs_diff_eq!(out.mean(), 0.0, epsilon = 1e-13);
        let (su, so) = (grid.forward(u.values()), grid.forward(out.values()));
        for k in 1..su.len() {
            assert_abs_diff_eq!(su[k].re, so[k].re, epsilon = 1e-12);
            assert_abs_diff_eq!(su[k].im, so[k].im, epsilon = 1e-12);
        }
    }
}
