//! The periodic grid as a scheme backend. The implicit solve is diagonal in
//! frequency space; the optional mean constraint pins the zeroth coefficient
//! inside every solve, which conserves the enclosed volume along GD and
//! (after one plain GD step to set the average) along FISTA.

use super::{Field, PeriodicGrid};
use crate::potentials::SplitPotential;
use crate::schemes::Backend;

pub struct GridBackend<P: SplitPotential> {
    grid: PeriodicGrid,
    well: P,
    eps: f64,
    fix_mean: Option<f64>,
}

impl<P: SplitPotential> GridBackend<P> {
    pub fn new(grid: PeriodicGrid, well: P, eps: f64) -> Self {
        assert!(eps > 0.0);
        Self { grid, well, eps, fix_mean: None }
    }

    /// Enforce `mean(u) = p` in every implicit solve.
    pub fn with_fixed_mean(mut self, p: f64) -> Self {
        self.fix_mean = Some(p);
        self
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn well(&self) -> &P {
        &self.well
    }

    pub fn fixed_mean(&self) -> Option<f64> {
        self.fix_mean
    }
}

impl<P: SplitPotential> Backend for GridBackend<P> {
    type Field = Field;

    fn implicit_solve(&self, rhs: &Field, h: f64) -> Field {
        let mass = 1.0 + 2.0 * h / (self.eps * self.eps);
        self.grid.implicit_solve(rhs, mass, h, self.fix_mean)
    }

    fn descent_source(&self, u: &Field) -> Field {
        let inv_eps2 = 1.0 / (self.eps * self.eps);
        u.map(|v| self.well.concave_prime(v) * inv_eps2)
    }

    fn convex_apply(&self, u: &Field) -> Field {
        self.grid.convex_operator(u, self.eps)
    }

    fn objective(&self, u: &Field) -> f64 {
        let pot: f64 =
            u.values().iter().map(|&v| self.well.eval(v)).sum::<f64>() * self.grid.cell_volume();
        self.grid.dirichlet_half(u) + pot / (self.eps * self.eps)
    }

    fn eps(&self) -> f64 {
        self.eps
    }

    fn lincomb(&self, a: f64, x: &Field, b: f64, y: &Field) -> Field {
        debug_assert_eq!(x.len(), y.len());
        let values: Vec<f64> =
            x.values().iter().zip(y.values()).map(|(&xv, &yv)| a * xv + b * yv).collect();
        Field::from_values(x.dim(), x.n(), values)
    }

    fn norm_sq(&self, x: &Field) -> f64 {
        self.grid.l2_norm_sq(x)
    }

    fn mean_value(&self, x: &Field) -> f64 {
        x.mean()
    }

    fn zeros_like(&self, x: &Field) -> Field {
        Field::zeros(x.dim(), x.n())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{disk_init, gl_energy};
    use crate::potentials::DoubleWell;
    use crate::schemes::{self, Scheme, SchemeParams, SchemeState};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn backend(n: usize, eps: f64) -> GridBackend<DoubleWell> {
        let grid = PeriodicGrid::new(2, n).unwrap();
        GridBackend::new(grid, DoubleWell::scalar(2.0).unwrap(), eps)
    }

    fn perturbed_disk(b: &GridBackend<DoubleWell>, amplitude: f64, seed: u64) -> Field {
        let grid = b.grid();
        let mut u = disk_init(grid, [0.5, 0.5], 0.3).unwrap();
        let mut state = seed | 1;
        for v in u.values_mut() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *v += amplitude * (2.0 * ((state >> 11) as f64 / (1u64 << 53) as f64) - 1.0);
        }
        u
    }

    #[test]
    fn constant_field_follows_scalar_recursion() {
        // Laplacian of constants vanishes, so the grid GD step must equal
        // the standalone scalar iteration.
        let b = backend(32, 0.5);
        let params = SchemeParams::gd(0.01, 0.5);
        let mut state = SchemeState::from_rest(&b, Field::from_values(2, 32, vec![0.3; 1024]));
        let sb = schemes::ScalarBackend::new(DoubleWell::scalar(2.0).unwrap(), 0.5);
        let mut c = SchemeState::from_rest(&sb, 0.3);
        for _ in 0..20 {
            state = schemes::gd_step(&b, &params, &state);
            c = schemes::gd_step(&sb, &params, &c);
            for v in state.u.values() {
                assert_abs_diff_eq!(*v, c.u, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn well_fields_are_fixed_points() {
        let b = backend(16, 0.2);
        let params = SchemeParams::momentum(Scheme::Cinema, 0.1, 3.0, 0.2);
        let state = SchemeState::from_rest(&b, Field::from_values(2, 16, vec![1.0; 256]));
        let next = schemes::cinema_step(&b, &params, &state);
        for v in next.u.values() {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-12);
        }
        for v in next.v.values() {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn gd_monotone_on_grid_across_step_sizes() {
        let b = backend(64, 0.05);
        let u0 = perturbed_disk(&b, 0.1, 7);
        for h in [1e-4, 1.0, 1e4] {
            let params = SchemeParams::gd(h, 0.05);
            let mut state = SchemeState::from_rest(&b, u0.clone());
            let mut prev = b.objective(&state.u);
            for _ in 0..60 {
                state = schemes::gd_step(&b, &params, &state);
                let e = b.objective(&state.u);
                assert!(e <= prev * (1.0 + 1e-10) + 1e-12, "h={h}");
                prev = e;
            }
        }
    }

    #[test]
    fn cinema_discrete_energy_law_on_grid() {
        let b = backend(64, 0.05);
        let u0 = perturbed_disk(&b, 0.1, 23);
        for tau in [1e-2, 1e-1, 1.0] {
            let params = SchemeParams::momentum(Scheme::Cinema, tau, 3.0, 0.05);
            let rho = params.rho_at(0);
            let mut s = SchemeState::from_rest(&b, u0.clone());
            for _ in 0..40 {
                let e_n = b.objective(&s.u) + b.norm_sq(&s.v) / (2.0 * rho * rho);
                let s_next = schemes::cinema_step(&b, &params, &s);
                let drift = b.lincomb(1.0, &s.u, tau, &s.v);
                let g = b.lincomb(1.0 / params.eta, &drift, -1.0 / params.eta, &s_next.u);
                let e_next = b.objective(&s_next.u) + b.norm_sq(&s_next.v) / (2.0 * rho * rho);
                let bound = e_n - 0.5 * (1.0 / (rho * rho) - 1.0) * b.norm_sq(&s.v)
                    + (tau * tau / 2.0 - params.eta) * b.norm_sq(&g);
                assert!(
                    e_next <= bound + 1e-9 * (1.0 + e_n.abs()),
                    "tau={tau}: e={e_next}, bound={bound}"
                );
                s = s_next;
            }
        }
    }

    #[test]
    fn discrete_gradient_matches_energy_finite_differences() {
        // g_n from a CINEMA step is the split gradient; compare against
        // central finite differences of the objective at random points.
        let n = 32;
        let b = backend(n, 0.2);
        let mut vals = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (i as f64 / n as f64, j as f64 / n as f64);
                vals[i * n + j] = 0.4 * (2.0 * std::f64::consts::PI * x).cos()
                    * (4.0 * std::f64::consts::PI * y).cos()
                    + 0.1;
            }
        }
        let u0 = Field::from_values(2, n, vals);
        // eta small enough that the implicit evaluation offset
        // eta * ||A|| ~ eta (2 pi n/2)^2 stays below the tolerance
        let params = SchemeParams::momentum(Scheme::Cinema, 1e-5, 0.0, 0.2);
        let s = SchemeState::from_rest(&b, u0.clone());
        let s1 = schemes::cinema_step(&b, &params, &s);
        let g = b.lincomb(1.0 / params.eta, &s.u, -1.0 / params.eta, &s1.u);
        // the split gradient is evaluated between u_n and u_{n+1}; for tiny
        // eta both are near u0 and g approximates grad E(u0).
        let cell = b.grid().cell_volume();
        let g_scale = g.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let fd_step = 1e-6;
        let mut state = 0xfeedu64;
        for _ in 0..20 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let idx = (state >> 33) as usize % u0.len();
            let mut up = u0.clone();
            up.values_mut()[idx] += fd_step;
            let mut dn = u0.clone();
            dn.values_mut()[idx] -= fd_step;
            // objective differentiates w.r.t. the L2 structure: the discrete
            // partial derivative carries the cell volume
            let fd = (b.objective(&up) - b.objective(&dn)) / (2.0 * fd_step * cell);
            let gi = g.values()[idx];
            assert_relative_eq!(fd, gi, max_relative = 1e-5, epsilon = 1e-5 * g_scale);
        }
    }

    #[test]
    fn schemes_agree_at_tau_zero_on_grid() {
        let b = backend(32, 0.1);
        let u0 = perturbed_disk(&b, 0.02, 3);
        let mut p_cin = SchemeParams::momentum(Scheme::Cinema, 1.0, 0.0, 0.1).with_eta(0.25);
        let mut p_fis = p_cin.clone();
        p_cin.scheme = Scheme::Cinema;
        p_cin.tau = 0.0;
        p_fis.scheme = Scheme::Fista;
        p_fis.tau = 0.0;
        let p_gd = SchemeParams::gd(0.25, 0.1);
        let mut a = SchemeState::from_rest(&b, u0.clone());
        let mut c = a.clone();
        let mut f = a.clone();
        for _ in 0..10 {
            a = schemes::gd_step(&b, &p_gd, &a);
            c = schemes::cinema_step(&b, &p_cin, &c);
            f = schemes::fista_step(&b, &p_fis, &f);
        }
        let scale = b.grid().l2_norm_sq(&a.u).sqrt();
        assert!(b.grid().l2_distance(&a.u, &c.u) <= 1e-10 * scale);
        assert!(b.grid().l2_distance(&a.u, &f.u) <= 1e-10 * scale);
    }

    #[test]
    fn translation_equivariance() {
        // shifting the input by whole cells shifts the output identically
        let b = backend(32, 0.1);
        let u0 = perturbed_disk(&b, 0.05, 11);
        let n = 32usize;
        let shift = |f: &Field, si: usize, sj: usize| -> Field {
            let mut vals = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    vals[((i + si) % n) * n + ((j + sj) % n)] = f.values()[i * n + j];
                }
            }
            Field::from_values(2, n, vals)
        };
        let params = SchemeParams::momentum(Scheme::Fista, 0.05, 3.0, 0.1);
        let a = schemes::fista_step(&b, &params, &SchemeState::from_rest(&b, u0.clone()));
        let shifted =
            schemes::fista_step(&b, &params, &SchemeState::from_rest(&b, shift(&u0, 5, 9)));
        let expect = shift(&a.u, 5, 9);
        for (x, y) in expect.values().iter().zip(shifted.u.values()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn evenness_is_preserved() {
        // u0 even about the domain center and v0 = 0: all schemes keep the
        // symmetry (spectral operators and W are even-compatible)
        let n = 32;
        let b = backend(n, 0.1);
        let mut vals = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (i as f64 / n as f64 - 0.5, j as f64 / n as f64 - 0.5);
                vals[i * n + j] = (8.0 * (x * x + y * y)).cos() * 0.4;
            }
        }
        let u0 = Field::from_values(2, n, vals);
        let reflect = |f: &Field| -> Field {
            let mut out = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    out[((n - i) % n) * n + ((n - j) % n)] = f.values()[i * n + j];
                }
            }
            Field::from_values(2, n, out)
        };
        for scheme in [Scheme::Gd, Scheme::Cinema, Scheme::Fista] {
            let params = match scheme {
                Scheme::Gd => SchemeParams::gd(0.1, 0.1),
                _ => SchemeParams::momentum(scheme, 0.05, 1.0, 0.1),
            };
            let mut s = SchemeState::from_rest(&b, u0.clone());
            for _ in 0..10 {
                s = schemes::step(&b, &params, &s);
            }
            let r = reflect(&s.u);
            for (a, bb) in s.u.values().iter().zip(r.values()) {
                assert_abs_diff_eq!(a, bb, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn volume_preserving_solves_keep_mean_and_zero_mean_velocity() {
        let grid = PeriodicGrid::new(2, 64).unwrap();
        let b = GridBackend::new(grid, DoubleWell::scalar(2.0).unwrap(), 0.05).with_fixed_mean(0.0);
        let u0 = {
            let mut u = perturbed_disk(&backend(64, 0.05), 0.1, 99);
            u = crate::grid::enforce_mean(&u, 0.0);
            u
        };
        // one plain GD step to set the average, then FISTA
        let p_gd = SchemeParams::gd(0.16, 0.05);
        let p_fista = SchemeParams::momentum(Scheme::Fista, 0.4, 1.4, 0.05);
        let mut s = schemes::gd_step(&b, &p_gd, &SchemeState::from_rest(&b, u0));
        for _ in 0..20 {
            s = schemes::fista_step(&b, &p_fista, &s);
            assert_abs_diff_eq!(s.u.mean(), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(s.v.mean(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn gl_energy_exposed_through_backend_matches_free_function() {
        let b = backend(32, 0.07);
        let u = perturbed_disk(&b, 0.03, 1);
        let free = gl_energy(b.grid(), &u, 0.07, b.well());
        assert_relative_eq!(b.gl_energy(&u), free, max_relative = 1e-12);
    }
}
