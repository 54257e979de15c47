//! Differential-drive robot state and exact unicycle integration.

use uanav_num::Real;

use crate::error::SimError;
use crate::geometry::{wrap_angle, Vec2};

/// Velocity command limits. Linear is one-sided (no reversing), angular
/// symmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionBounds<T> {
    pub v_min: T,
    pub v_max: T,
    pub w_max: T,
}

impl<T: Real> Default for ActionBounds<T> {
    fn default() -> Self {
        Self {
            v_min: T::zero(),
            v_max: T::one(),
            w_max: T::one(),
        }
    }
}

impl<T: Real> ActionBounds<T> {
    pub fn clamp(&self, action: (T, T)) -> (T, T) {
        (
            action.0.max(self.v_min).min(self.v_max),
            action.1.max(-self.w_max).min(self.w_max),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotState<T> {
    pub position: Vec2<T>,
    /// Heading, kept in (−π, π].
    pub heading: T,
    /// Last executed (linear, angular) velocity.
    pub velocity: (T, T),
    pub goal: Vec2<T>,
    pub radius: T,
    /// Cleared once the robot reaches its goal or collides; inactive robots
    /// neither move nor appear to sensors.
    pub active: bool,
}

impl<T: Real> RobotState<T> {
    pub fn new(position: Vec2<T>, heading: T, goal: Vec2<T>, radius: T) -> Self {
        Self {
            position,
            heading: wrap_angle(heading),
            velocity: (T::zero(), T::zero()),
            goal,
            radius,
            active: true,
        }
    }

    pub fn goal_distance(&self) -> T {
        self.position.dist(self.goal)
    }
}

/// Threshold below which the arc update degenerates to straight motion.
pub fn omega_epsilon<T: Real>() -> T {
    T::of(1e-6)
}

/// Advance one robot by (v, ω) over dt using the exact arc solution of the
/// unicycle model. Heading is renormalized to (−π, π].
pub fn step_robot<T: Real>(
    state: &RobotState<T>,
    action: (T, T),
    dt: T,
) -> Result<RobotState<T>, SimError> {
    let (v, w) = action;
    if !v.is_finite() || !w.is_finite() {
        return Err(SimError::NonFiniteAction {
            robot: usize::MAX,
            v: v.to_f64_lossy(),
            w: w.to_f64_lossy(),
        });
    }
    debug_assert!(dt > T::zero());

    let mut next = *state;
    let theta = state.heading;
    if w.abs() < omega_epsilon() {
        next.position = state.position + Vec2::from_angle(theta).scaled(v * dt);
    } else {
        let radius = v / w;
        let theta_next = theta + w * dt;
        next.position = state.position
            + Vec2::new(
                radius * (theta_next.sin() - theta.sin()),
                radius * (theta.cos() - theta_next.cos()),
            );
    }
    next.heading = wrap_angle(theta + w * dt);
    next.velocity = (v, w);
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pose(x: f64, y: f64, th: f64) -> RobotState<f64> {
        RobotState::new(Vec2::new(x, y), th, Vec2::new(0.0, 0.0), 0.3)
    }

    #[test]
    fn zero_action_is_fixed_point() {
        let s = pose(1.3, -2.0, 0.7);
        let n = step_robot(&s, (0.0, 0.0), 0.1).unwrap();
        assert_eq!(n.position, s.position);
        assert_eq!(n.heading, s.heading);
    }

    #[test]
    fn straight_motion() {
        let n = step_robot(&pose(0.0, 0.0, 0.0), (1.0, 0.0), 0.1).unwrap();
        assert!((n.position.x - 0.1).abs() < 1e-15);
        assert_eq!(n.position.y, 0.0);
        assert_eq!(n.heading, 0.0);
    }

    #[test]
    fn arc_matches_closed_form() {
        // Δx = (v/ω)(sin(θ+ωdt) − sinθ), Δy = (v/ω)(cosθ − cos(θ+ωdt))
        let n = step_robot(&pose(0.0, 0.0, 0.0), (1.0, 1.0), 0.1).unwrap();
        assert!((n.position.x - 0.1f64.sin()).abs() < 1e-12);
        assert!((n.position.y - (1.0 - 0.1f64.cos())).abs() < 1e-12);
        assert!((n.heading - 0.1).abs() < 1e-12);
    }

    #[test]
    fn non_finite_action_rejected() {
        assert!(step_robot(&pose(0.0, 0.0, 0.0), (f64::NAN, 0.0), 0.1).is_err());
        assert!(step_robot(&pose(0.0, 0.0, 0.0), (0.0, f64::INFINITY), 0.1).is_err());
    }

    #[test]
    fn heading_stays_normalized() {
        let mut s = pose(0.0, 0.0, 3.0);
        for _ in 0..100 {
            s = step_robot(&s, (0.5, 1.0), 0.1).unwrap();
            assert!(s.heading > -std::f64::consts::PI && s.heading <= std::f64::consts::PI);
        }
    }

    /// Euler integration converges to the arc solution at rate O(dt²).
    #[test]
    fn euler_converges_quadratically() {
        fn euler(s: &RobotState<f64>, v: f64, w: f64, dt: f64) -> Vec2<f64> {
            s.position + Vec2::from_angle(s.heading).scaled(v * dt)
                + Vec2::zero().scaled(w) // heading change does not move Euler position this step
        }
        let s = pose(0.2, -0.4, 0.9);
        let (v, w) = (0.8, 0.9);
        let err = |dt: f64| {
            let exact = step_robot(&s, (v, w), dt).unwrap().position;
            exact.dist(euler(&s, v, w, dt))
        };
        let e1 = err(0.1);
        let e2 = err(0.05);
        let ratio = e1 / e2;
        assert!(
            (ratio - 4.0).abs() < 0.8,
            "expected ~4x error reduction per halving, got {ratio}"
        );
    }
}
