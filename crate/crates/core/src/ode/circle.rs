//! Singular-limit radius law for a shrinking circle under the momentum flow,
//!
//! ```text
//! r'' = (1 - r'^2) (-1/r - alpha r'),
//! ```
//!
//! integrated by a fixed-step Adams-Bashforth-Moulton PECE pair of order
//! five, bootstrapped with RK4. The factor `(1 - r'^2)` keeps the normal
//! velocity inside the light cone `|r'| < 1`.

use crate::ode::OdeError;
use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CircleState {
    pub t: f64,
    pub r: f64,
    pub rdot: f64,
}

#[derive(Debug, Clone)]
pub struct CircleTrajectory {
    pub states: Vec<CircleState>,
    /// True when the radius reached `r_stop` before `t_end`.
    pub vanished: bool,
    pub alpha: f64,
}

impl CircleTrajectory {
    pub fn final_state(&self) -> CircleState {
        *self.states.last().expect("trajectory is never empty")
    }

    pub fn t_end(&self) -> f64 {
        self.final_state().t
    }

    /// Linear interpolation in time; clamped to the recorded range.
    pub fn sample(&self, t: f64) -> CircleState {
        let first = self.states[0];
        let last = self.final_state();
        if t <= first.t {
            return first;
        }
        if t >= last.t {
            return last;
        }
        let dt = self.states[1].t - first.t;
        let idx = ((t - first.t) / dt) as usize;
        let idx = idx.min(self.states.len() - 2);
        let a = self.states[idx];
        let b = self.states[idx + 1];
        let s = ((t - a.t) / (b.t - a.t)).clamp(0.0, 1.0);
        CircleState {
            t,
            r: a.r + s * (b.r - a.r),
            rdot: a.rdot + s * (b.rdot - a.rdot),
        }
    }
}

fn accel(r: f64, v: f64, alpha: f64) -> f64 {
    (1.0 - v * v) * (-1.0 / r - alpha * v)
}

/// Integrate the radius law from `(r0, rdot0)` until `t_end` or until
/// `r <= r_stop` (vanished). Fixed step `dt`; no continuation past the
/// singularity is attempted.
pub fn circle_ode_solve(
    r0: f64,
    rdot0: f64,
    alpha: f64,
    dt: f64,
    t_end: f64,
    r_stop: f64,
) -> Result<CircleTrajectory, OdeError> {
    if !(r0 > 0.0) {
        return Err(OdeError::InvalidArgument(format!("r0 must be positive, got {r0}")));
    }
    if rdot0.abs() >= 1.0 {
        return Err(OdeError::InvalidArgument(format!(
            "|rdot0| must be < 1, got {rdot0}"
        )));
    }
    if !(dt > 0.0) || !(t_end > 0.0) {
        return Err(OdeError::InvalidArgument("dt and t_end must be positive".into()));
    }

    // Adams-Bashforth 5 (predictor) and Adams-Moulton 5th order (corrector).
    const AB: [f64; 5] = [1901.0, -2774.0, 2616.0, -1274.0, 251.0];
    const AM: [f64; 5] = [251.0, 646.0, -264.0, 106.0, -19.0];

    let n_steps = (t_end / dt).round() as usize;
    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(CircleState { t: 0.0, r: r0, rdot: rdot0 });
    // derivative history f = (rdot, accel), most recent first
    let mut hist: Vec<(f64, f64)> = vec![(rdot0, accel(r0, rdot0, alpha))];
    let mut vanished = false;

    let push = |states: &mut Vec<CircleState>, t: f64, r: f64, v: f64| -> bool {
        states.push(CircleState { t, r, rdot: v });
        r <= r_stop || !r.is_finite()
    };

    'outer: for n in 0..n_steps {
        let t = dt * n as f64;
        let CircleState { r, rdot: v, .. } = *states.last().unwrap();
        if hist.len() < 5 {
            // RK4 bootstrap for the first four steps
            let (k1r, k1v) = (v, accel(r, v, alpha));
            let (r2, v2) = (r + 0.5 * dt * k1r, v + 0.5 * dt * k1v);
            let (k2r, k2v) = (v2, accel(r2, v2, alpha));
            let (r3, v3) = (r + 0.5 * dt * k2r, v + 0.5 * dt * k2v);
            let (k3r, k3v) = (v3, accel(r3, v3, alpha));
            let (r4, v4) = (r + dt * k3r, v + dt * k3v);
            let (k4r, k4v) = (v4, accel(r4, v4, alpha));
            let rn = r + dt / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
            let vn = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            if push(&mut states, t + dt, rn, vn) {
                vanished = true;
                break 'outer;
            }
            hist.insert(0, (vn, accel(rn, vn, alpha)));
        } else {
            // predict
            let mut pr = 0.0;
            let mut pv = 0.0;
            for (c, f) in AB.iter().zip(hist.iter()) {
                pr += c * f.0;
                pv += c * f.1;
            }
            let rp = r + dt / 720.0 * pr;
            let vp = v + dt / 720.0 * pv;
            if rp <= r_stop || !rp.is_finite() {
                states.push(CircleState { t: t + dt, r: rp.max(0.0), rdot: vp });
                vanished = true;
                break 'outer;
            }
            // evaluate, correct, evaluate
            let fp = (vp, accel(rp, vp, alpha));
            let mut cr = AM[0] * fp.0;
            let mut cv = AM[0] * fp.1;
            for (c, f) in AM[1..].iter().zip(hist.iter()) {
                cr += c * f.0;
                cv += c * f.1;
            }
            let rn = r + dt / 720.0 * cr;
            let vn = v + dt / 720.0 * cv;
            if push(&mut states, t + dt, rn, vn) {
                vanished = true;
                break 'outer;
            }
            hist.pop();
            hist.insert(0, (vn, accel(rn, vn, alpha)));
        }
    }
    Ok(CircleTrajectory { states, vanished, alpha })
}

/// Closed-form radius of the gradient-flow circle, `r(t) = sqrt(r0^2 - 2t)`;
/// `None` once the disk has vanished.
pub fn allen_cahn_circle(r0: f64, t: f64) -> Option<f64> {
    let s = r0 * r0 - 2.0 * t;
    (s > 0.0).then(|| s.sqrt())
}

/// Vanishing time `r0^2 / 2` of the gradient-flow circle.
pub fn allen_cahn_vanishing_time(r0: f64) -> f64 {
    0.5 * r0 * r0
}

/// Perimeter predictors for a circle of radius `r` moving with normal
/// velocity `rdot`: the plain diffuse perimeter `c0 * 2 pi r` and the
/// velocity-adjusted value `c0 * pi r ((1-v^2)^{1/2} + (1-v^2)^{-1/2})`.
pub fn velocity_adjusted_perimeter(r: f64, rdot: f64, c0: f64) -> Result<(f64, f64), OdeError> {
    if rdot.abs() >= 1.0 {
        return Err(OdeError::InvalidArgument(format!(
            "|rdot| must be < 1, got {rdot}"
        )));
    }
    let plain = c0 * 2.0 * std::f64::consts::PI * r;
    let lorentz = (1.0 - rdot * rdot).sqrt();
    let adjusted = c0 * std::f64::consts::PI * r * (lorentz + 1.0 / lorentz);
    Ok((plain, adjusted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn initial_acceleration_from_rest() {
        assert_abs_diff_eq!(accel(0.45, 0.0, 3.0), -1.0 / 0.45, epsilon = 0.0);
    }

    #[test]
    fn speed_stays_inside_light_cone() {
        for alpha in [0.0, 0.5, 3.0, 10.0] {
            let tr = circle_ode_solve(0.45, 0.0, alpha, 1e-5, 2.0, 0.01).unwrap();
            for s in &tr.states {
                assert!(s.rdot.abs() < 1.0, "alpha={alpha}, t={}: rdot={}", s.t, s.rdot);
            }
            assert!(tr.vanished);
        }
    }

    #[test]
    fn fifth_order_convergence_on_smooth_segment() {
        // Richardson: err(dt) / err(dt/2) ~ 2^5 against a dt/4 reference.
        let endpoint = |dt: f64| {
            circle_ode_solve(0.45, 0.0, 3.0, dt, 0.4, 1e-4)
                .unwrap()
                .final_state()
                .r
        };
        let r1 = endpoint(8e-3);
        let r2 = endpoint(4e-3);
        let r4 = endpoint(2e-3);
        let e1 = (r1 - r4).abs();
        let e2 = (r2 - r4).abs();
        let ratio = e1 / e2;
        assert!(
            (16.0..80.0).contains(&ratio),
            "order-5 Richardson ratio {ratio} (errors {e1:.3e}, {e2:.3e})"
        );
    }

    #[test]
    fn overdamped_limit_matches_gradient_flow() {
        // alpha r' = -1/r: the trajectory follows the gradient-flow circle
        // in the rescaled time t / alpha.
        let alpha = 100.0;
        let t = 5.0;
        let tr = circle_ode_solve(0.45, 0.0, alpha, 1e-4, t, 0.01).unwrap();
        let expect = allen_cahn_circle(0.45, t / alpha).unwrap();
        assert_relative_eq!(tr.final_state().r, expect, max_relative = 0.02);
    }

    #[test]
    fn gradient_flow_closed_form() {
        assert_abs_diff_eq!(allen_cahn_circle(0.45, 0.0).unwrap(), 0.45, epsilon = 0.0);
        assert_abs_diff_eq!(allen_cahn_vanishing_time(0.45), 0.10125, epsilon = 1e-15);
        assert!(allen_cahn_circle(0.45, 0.10125).is_none());
        // independent oracle: RK4 on rdot = -1/r
        let (mut r, dt) = (0.45f64, 1e-6);
        let mut t = 0.0;
        while t < 0.08 {
            let k1 = -1.0 / r;
            let k2 = -1.0 / (r + 0.5 * dt * k1);
            let k3 = -1.0 / (r + 0.5 * dt * k2);
            let k4 = -1.0 / (r + dt * k3);
            r += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += dt;
        }
        assert_abs_diff_eq!(r, allen_cahn_circle(0.45, t).unwrap(), epsilon = 1e-8);
    }

    #[test]
    fn adjusted_perimeter_examples() {
        let c0 = 0.9215538180921235;
        let (plain, adjusted) = velocity_adjusted_perimeter(0.3, 0.0, c0).unwrap();
        assert_abs_diff_eq!(plain, adjusted, epsilon = 1e-15);
        let (plain, adjusted) = velocity_adjusted_perimeter(0.3, 0.6, c0).unwrap();
        assert_relative_eq!(adjusted / plain, 1.025, max_relative = 1e-12);
        for v in [-0.99, -0.5, 0.0, 0.3, 0.9] {
            let (p, a) = velocity_adjusted_perimeter(1.0, v, c0).unwrap();
            assert!(a >= p - 1e-12);
        }
        assert!(velocity_adjusted_perimeter(0.3, 1.0, c0).is_err());
    }

    #[test]
    fn rejects_invalid_initial_data() {
        assert!(circle_ode_solve(-0.1, 0.0, 3.0, 1e-4, 1.0, 0.01).is_err());
        assert!(circle_ode_solve(0.45, 1.0, 3.0, 1e-4, 1.0, 0.01).is_err());
    }
}
