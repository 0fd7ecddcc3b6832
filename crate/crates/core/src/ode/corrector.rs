//! The corrector `psi`: the even, square-integrable solution of
//!
//! ```text
//! psi'' = W''(phi) psi + phi' + 2 x phi''
//! ```
//!
//! orthogonal to translations in the sense `int phi'' psi' dx = 0`.
//!
//! Construction by shooting: integrate from `psi(0) = c`, `psi'(0) = 0` on
//! `[0, x_max]` for two trial values of `c`; the map `c -> int phi'' psi_c'`
//! is affine, so a single secant step lands on the root. The table is then
//! extended to `[-x_max, 0]` by even reflection. The corrector equation has
//! an exponentially growing homogeneous mode, so trajectories that blow up
//! are re-shot on a reduced domain.

use crate::ode::profile::{simpson, Profile};
use crate::ode::OdeError;
use crate::potentials::{DoubleWell, SplitPotential};

#[derive(Debug, Clone)]
pub struct Corrector {
    x_max: f64,
    h: f64,
    /// Symmetric table over `[-x_max, x_max]`, same spacing as the profile.
    psi: Vec<f64>,
    dpsi: Vec<f64>,
    /// The shooting value `psi(0)`.
    pub c: f64,
    /// Set when the domain had to be reduced to avoid blow-up.
    pub warning: Option<String>,
}

impl Corrector {
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.x_max + self.h * i as f64
    }

    pub fn psi_at(&self, i: usize) -> f64 {
        self.psi[i]
    }

    pub fn dpsi_at(&self, i: usize) -> f64 {
        self.dpsi[i]
    }

    /// `|int phi'' psi'| / (||phi''||_2 ||psi'||_2)`, the normalized
    /// orthogonality defect. The profile must be the one `psi` was built on.
    pub fn orthogonality_defect(&self, profile: &Profile, w: &DoubleWell) -> f64 {
        let f: Vec<f64> = (0..self.psi.len())
            .map(|i| ddphi_of(profile, w, self.node(i)) * self.dpsi[i])
            .collect();
        let raw = simpson(&f, self.h);
        let n1: Vec<f64> = (0..self.psi.len())
            .map(|i| ddphi_of(profile, w, self.node(i)).powi(2))
            .collect();
        let n2: Vec<f64> = self.dpsi.iter().map(|d| d * d).collect();
        let norm = simpson(&n1, self.h).sqrt() * simpson(&n2, self.h).sqrt();
        raw.abs() / norm
    }

    /// Sup-norm of `psi'' - W''(phi) psi - phi' - 2 x phi''` by a
    /// fourth-order stencil on the table.
    pub fn residual_sup(&self, profile: &Profile, w: &DoubleWell) -> f64 {
        let h = self.h;
        let mut worst = 0.0f64;
        for i in 2..self.psi.len() - 2 {
            let x = self.node(i);
            let second = (-self.psi[i - 2] + 16.0 * self.psi[i - 1] - 30.0 * self.psi[i]
                + 16.0 * self.psi[i + 1]
                - self.psi[i + 2])
                / (12.0 * h * h);
            let phi = profile.eval(x);
            let dphi = (2.0 * w.eval(phi).max(0.0)).sqrt();
            let rhs = w.second_derivative(phi) * self.psi[i] + dphi + 2.0 * x * w.grad(phi);
            worst = worst.max((second - rhs).abs());
        }
        worst
    }
}

fn ddphi_of(profile: &Profile, w: &DoubleWell, x: f64) -> f64 {
    w.grad(profile.eval(x))
}

struct Shot {
    psi: Vec<f64>,
    dpsi: Vec<f64>,
    /// `int_0^{x_max} phi'' psi' dx`, or None if the trajectory blew up.
    moment: Option<f64>,
}

fn shoot(profile: &Profile, w: &DoubleWell, c: f64, n_half: usize, h: f64) -> Shot {
    const BLOW_UP: f64 = 1e6;
    let substeps = (h / 1.0e-3).ceil().max(1.0) as usize;
    let dt = h / substeps as f64;
    let accel = |x: f64, psi: f64| {
        let phi = profile.eval(x);
        let dphi = (2.0 * w.eval(phi).max(0.0)).sqrt();
        w.second_derivative(phi) * psi + dphi + 2.0 * x * w.grad(phi)
    };
    let mut psi = Vec::with_capacity(n_half + 1);
    let mut dpsi = Vec::with_capacity(n_half + 1);
    let (mut p, mut v) = (c, 0.0);
    psi.push(p);
    dpsi.push(v);
    let mut x = 0.0;
    for _ in 0..n_half {
        for _ in 0..substeps {
            // classical RK4 on the first-order system (psi, psi')
            let (k1p, k1v) = (v, accel(x, p));
            let (k2p, k2v) = (v + 0.5 * dt * k1v, accel(x + 0.5 * dt, p + 0.5 * dt * k1p));
            let (k3p, k3v) = (v + 0.5 * dt * k2v, accel(x + 0.5 * dt, p + 0.5 * dt * k2p));
            let (k4p, k4v) = (v + dt * k3v, accel(x + dt, p + dt * k3p));
            p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            x += dt;
        }
        if !p.is_finite() || p.abs() > BLOW_UP {
            return Shot { psi, dpsi, moment: None };
        }
        psi.push(p);
        dpsi.push(v);
    }
    let f: Vec<f64> = (0..=n_half)
        .map(|i| ddphi_of(profile, w, h * i as f64) * dpsi[i])
        .collect();
    Shot { psi, dpsi, moment: Some(simpson(&f, h)) }
}

/// Shooting domain cap. The corrector equation carries a homogeneous mode
/// growing like `exp(sqrt(W''(1)) x)`; beyond roughly 20 profile units the
/// amplified round-off would dominate the decaying solution in f64.
const SHOOTING_X_MAX: f64 = 20.0;

/// Build the corrector for `profile` (which must belong to `w`). Shooting is
/// performed on `[0, min(profile.x_max(), 20)]`; on blow-up the domain
/// shrinks by 20% and a warning is recorded.
pub fn solve_corrector(profile: &Profile, w: &DoubleWell) -> Result<Corrector, OdeError> {
    let h = profile.spacing();
    let mut n_half = (((profile.len() - 1) / 2) as f64 * (SHOOTING_X_MAX / profile.x_max()).min(1.0))
        .floor() as usize;
    let mut warning = None;
    for _ in 0..12 {
        let x_max = h * n_half as f64;
        let a = shoot(profile, w, 0.0, n_half, h);
        let b = shoot(profile, w, 1.0, n_half, h);
        if let (Some(m0), Some(m1)) = (a.moment, b.moment) {
            let c = -m0 / (m1 - m0);
            let shot = shoot(profile, w, c, n_half, h);
            if shot.moment.is_some() {
                // even reflection onto the symmetric grid
                let mut psi: Vec<f64> = shot.psi.iter().rev().copied().collect();
                psi.extend_from_slice(&shot.psi[1..]);
                let mut dpsi: Vec<f64> = shot.dpsi.iter().rev().map(|d| -d).collect();
                dpsi.extend_from_slice(&shot.dpsi[1..]);
                return Ok(Corrector { x_max, h, psi, dpsi, c, warning });
            }
        }
        n_half = (n_half * 4) / 5;
        warning = Some(format!(
            "corrector shooting blew up; retrying on reduced domain [0, {:.3}]",
            h * n_half as f64
        ));
        if n_half < 16 {
            break;
        }
    }
    Err(OdeError::CorrectorBlowUp { x_max: h * n_half as f64 })
}

/// Evaluate the moment map `c -> int phi'' psi_c'` at one trial value; used
/// by tests to confirm the map is affine.
pub fn corrector_moment(profile: &Profile, w: &DoubleWell, c: f64) -> Option<f64> {
    let n_half = (((profile.len() - 1) / 2) as f64 * (SHOOTING_X_MAX / profile.x_max()).min(1.0))
        .floor() as usize;
    shoot(profile, w, c, n_half, profile.spacing()).moment
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::profile::solve_profile;
    use approx::assert_abs_diff_eq;

    fn setup() -> (DoubleWell, Profile, Corrector) {
        let w = DoubleWell::scalar(2.0).unwrap();
        let p = solve_profile(&w, 32.0, 4097).unwrap();
        let c = solve_corrector(&p, &w).unwrap();
        (w, p, c)
    }

    #[test]
    fn orthogonality_holds() {
        let (w, p, c) = setup();
        assert!(c.orthogonality_defect(&p, &w) <= 1e-6);
    }

    #[test]
    fn corrector_is_even() {
        let (_, _, c) = setup();
        let n = c.len();
        for i in 0..n {
            assert_abs_diff_eq!(c.psi_at(i), c.psi_at(n - 1 - i), epsilon = 1e-10);
        }
    }

    #[test]
    fn residual_is_small() {
        let (w, p, c) = setup();
        let r = c.residual_sup(&p, &w);
        assert!(r <= 1e-5, "corrector residual {r:.3e}");
    }

    #[test]
    fn moment_map_is_affine() {
        let (w, p, _) = setup();
        let m0 = corrector_moment(&p, &w, 0.0).unwrap();
        let mh = corrector_moment(&p, &w, 0.5).unwrap();
        let m1 = corrector_moment(&p, &w, 1.0).unwrap();
        let scale = m0.abs().max(m1.abs()).max(1.0);
        assert_abs_diff_eq!(mh, 0.5 * (m0 + m1), epsilon = 1e-8 * scale);
    }
}
