//! The optimal transition profile between the wells of a scalar double-well
//! potential: the monotone solution of `phi' = sqrt(2 W(phi))`, `phi(0) = 0`,
//! connecting `-1` to `+1`. Its energy per unit interface length is the
//! profile constant `c0`.

use crate::ode::OdeError;
use crate::potentials::SplitPotential;

/// Tabulated optimal profile on a symmetric uniform grid.
///
/// Stores `phi`, `phi' = sqrt(2 W(phi))` and `phi'' = W'(phi)`; evaluation
/// between nodes is cubic Hermite (node values plus exact node derivatives).
#[derive(Debug, Clone)]
pub struct Profile {
    x_max: f64,
    h: f64,
    phi: Vec<f64>,
    dphi: Vec<f64>,
    ddphi: Vec<f64>,
}

impl Profile {
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.x_max + self.h * i as f64
    }

    pub fn phi_at(&self, i: usize) -> f64 {
        self.phi[i]
    }

    pub fn dphi_at(&self, i: usize) -> f64 {
        self.dphi[i]
    }

    pub fn ddphi_at(&self, i: usize) -> f64 {
        self.ddphi[i]
    }

    /// Cubic Hermite evaluation of `phi`; the tails continue constantly at
    /// `±1` beyond the tabulated range.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= -self.x_max {
            return -1.0;
        }
        if x >= self.x_max {
            return 1.0;
        }
        let s = (x + self.x_max) / self.h;
        let i = (s.floor() as usize).min(self.phi.len() - 2);
        let t = s - i as f64;
        hermite(
            t,
            self.phi[i],
            self.phi[i + 1],
            self.h * self.dphi[i],
            self.h * self.dphi[i + 1],
        )
    }

    /// `phi'` by the defining identity `sqrt(2 W(phi))` at the interpolated value.
    pub fn eval_dphi(&self, x: f64, w: &impl SplitPotential) -> f64 {
        (2.0 * w.eval(self.eval(x)).max(0.0)).sqrt()
    }

    /// One-dimensional Ginzburg-Landau energy `int 1/2 (phi')^2 + W(phi)` of
    /// the tabulated profile (composite Simpson), which equals `c0`.
    pub fn energy(&self, w: &impl SplitPotential) -> f64 {
        let f: Vec<f64> = self
            .phi
            .iter()
            .zip(&self.dphi)
            .map(|(&p, &dp)| 0.5 * dp * dp + w.eval(p))
            .collect();
        simpson(&f, self.h)
    }
}

fn hermite(t: f64, p0: f64, p1: f64, m0: f64, m1: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * p0
        + (t3 - 2.0 * t2 + t) * m0
        + (-2.0 * t3 + 3.0 * t2) * p1
        + (t3 - t2) * m1
}

pub(crate) fn simpson(f: &[f64], h: f64) -> f64 {
    // Composite Simpson; falls back to a trapezoid on the last interval when
    // the point count is even.
    let n = f.len();
    assert!(n >= 3);
    let odd_count = if n % 2 == 1 { n } else { n - 1 };
    let mut acc = f[0] + f[odd_count - 1];
    for (k, &v) in f[1..odd_count - 1].iter().enumerate() {
        acc += if k % 2 == 0 { 4.0 * v } else { 2.0 * v };
    }
    let mut total = acc * h / 3.0;
    if n % 2 == 0 {
        total += 0.5 * h * (f[n - 2] + f[n - 1]);
    }
    total
}

/// Solve `phi' = sqrt(2 W(phi))` from `phi(0) = 0` in both directions and
/// tabulate on `n_points` nodes over `[-x_max, x_max]`.
///
/// The right-hand side is clamped to zero once `|phi| >= 1`, which removes
/// the spurious re-growth of round-off overshoots past the wells. RK4 with
/// sub-steps keeps the tabulation error well below the `1e-10` endpoint
/// tolerance; failure to reach the well by `x_max` is an error.
pub fn solve_profile<P: SplitPotential>(
    w: &P,
    x_max: f64,
    n_points: usize,
) -> Result<Profile, OdeError> {
    if !(x_max > 0.0) || n_points < 9 || n_points % 2 == 0 {
        return Err(OdeError::InvalidArgument(format!(
            "need x_max > 0 and an odd n_points >= 9, got x_max={x_max}, n_points={n_points}"
        )));
    }
    let h = 2.0 * x_max / (n_points - 1) as f64;
    let half = (n_points - 1) / 2;
    let rhs = |p: f64| {
        if p.abs() >= 1.0 {
            0.0
        } else {
            (2.0 * w.eval(p).max(0.0)).sqrt()
        }
    };

    let substeps = (h / 1.5e-3).ceil().max(1.0) as usize;
    let march = |direction: f64| -> Vec<f64> {
        let mut out = Vec::with_capacity(half + 1);
        let mut p = 0.0;
        out.push(p);
        let dt = direction * h / substeps as f64;
        for _ in 0..half {
            for _ in 0..substeps {
                let k1 = rhs(p);
                let k2 = rhs(p + 0.5 * dt * k1);
                let k3 = rhs(p + 0.5 * dt * k2);
                let k4 = rhs(p + dt * k3);
                p += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            out.push(p);
        }
        out
    };

    let forward = march(1.0);
    let backward = march(-1.0);

    let reached = forward[half].min(-backward[half]);
    if (1.0 - reached).abs() > 1e-10 {
        return Err(OdeError::XMaxTooSmall { reached });
    }

    let mut phi = Vec::with_capacity(n_points);
    phi.extend(backward.iter().rev());
    phi.extend_from_slice(&forward[1..]);
    let dphi: Vec<f64> = phi.iter().map(|&p| rhs(p)).collect();
    let ddphi: Vec<f64> = phi.iter().map(|&p| w.grad(p)).collect();
    Ok(Profile { x_max, h, phi, dphi, ddphi })
}
