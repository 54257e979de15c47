//! World state and stepping: robots, obstacles, collision events, reward.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uanav_num::Real;

use crate::error::SimError;
use crate::geometry::{wrap_angle, Shape, Vec2};
use crate::lidar::{cast_scan, LidarSpec, Scan};
use crate::obstacle::Obstacle;
use crate::robot::{step_robot, ActionBounds, RobotState};

/// Reward constants of the shaped navigation reward.
pub const GOAL_REWARD: f64 = 20.0;
pub const COLLISION_REWARD: f64 = -20.0;
pub const PROGRESS_WEIGHT: f64 = 2.5;
/// A robot closer than this to its goal has arrived.
pub const GOAL_RADIUS: f64 = 0.1;

/// Per-robot events reported by [`World::step`], evaluated after motion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepEvents {
    pub reached_goal: bool,
    pub collided: bool,
}

#[derive(Debug, Clone)]
pub struct World<T: Real> {
    pub robots: Vec<RobotState<T>>,
    pub obstacles: Vec<Obstacle<T>>,
    pub dt: T,
    pub step_count: u64,
    pub bounds: ActionBounds<T>,
    pub seed: u64,
    rng: ChaCha8Rng,
}

impl<T: Real> World<T> {
    pub fn new(dt: T, bounds: ActionBounds<T>, seed: u64) -> Self {
        debug_assert!(dt > T::zero());
        Self {
            robots: Vec::new(),
            obstacles: Vec::new(),
            dt,
            step_count: 0,
            bounds,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Advance every active robot by its action, then the obstacles, then
    /// report per-robot events. Robots whose event fires are deactivated and
    /// disappear from subsequent sensing and collision checks.
    pub fn step(&mut self, actions: &[(T, T)]) -> Result<Vec<StepEvents>, SimError> {
        if actions.len() != self.robots.len() {
            return Err(SimError::ActionCountMismatch {
                expected: self.robots.len(),
                got: actions.len(),
            });
        }
        for (i, (&action, robot)) in actions.iter().zip(&self.robots).enumerate() {
            if robot.active && (!action.0.is_finite() || !action.1.is_finite()) {
                return Err(SimError::NonFiniteAction {
                    robot: i,
                    v: action.0.to_f64_lossy(),
                    w: action.1.to_f64_lossy(),
                });
            }
        }

        for (robot, &action) in self.robots.iter_mut().zip(actions) {
            if robot.active {
                let clamped = self.bounds.clamp(action);
                *robot = step_robot(robot, clamped, self.dt)?;
            }
        }
        for obstacle in &mut self.obstacles {
            obstacle.step(self.dt, &mut self.rng);
        }
        self.step_count += 1;

        let events: Vec<StepEvents> = (0..self.robots.len())
            .map(|i| {
                let robot = &self.robots[i];
                if !robot.active {
                    return StepEvents::default();
                }
                let reached_goal = robot.goal_distance() < T::of(GOAL_RADIUS);
                let collided = self.check_collision(i);
                StepEvents { reached_goal, collided }
            })
            .collect();
        for (robot, ev) in self.robots.iter_mut().zip(&events) {
            if ev.reached_goal || ev.collided {
                robot.active = false;
            }
        }
        Ok(events)
    }

    /// Does robot `i`'s disc touch any obstacle or other active robot?
    /// Boundary contact counts.
    pub fn check_collision(&self, i: usize) -> bool {
        let robot = &self.robots[i];
        let p = robot.position;
        let r = robot.radius;
        for obstacle in &self.obstacles {
            if obstacle.shape.distance_to_point(p) <= r {
                return true;
            }
        }
        for (j, other) in self.robots.iter().enumerate() {
            if j != i && other.active && p.dist(other.position) <= r + other.radius {
                return true;
            }
        }
        false
    }

    /// Shortest distance from robot `i`'s disc boundary to any obstacle or
    /// other active robot (0 when touching or overlapping).
    pub fn clearance(&self, i: usize) -> T {
        let robot = &self.robots[i];
        let p = robot.position;
        let mut best = T::infinity();
        for obstacle in &self.obstacles {
            best = best.min(obstacle.shape.distance_to_point(p));
        }
        for (j, other) in self.robots.iter().enumerate() {
            if j != i && other.active {
                best = best.min(p.dist(other.position) - other.radius);
            }
        }
        (best - robot.radius).max(T::zero())
    }

    /// Scan from an arbitrary pose against all obstacles and active robots.
    pub fn cast_lidar(&self, pose: (Vec2<T>, T), spec: &LidarSpec<T>) -> Scan<T> {
        self.cast_lidar_excluding(pose, spec, None)
    }

    pub fn cast_lidar_excluding(
        &self,
        pose: (Vec2<T>, T),
        spec: &LidarSpec<T>,
        exclude_robot: Option<usize>,
    ) -> Scan<T> {
        let robot_discs: Vec<Shape<T>> = self
            .robots
            .iter()
            .enumerate()
            .filter(|(j, r)| r.active && Some(*j) != exclude_robot)
            .map(|(_, r)| Shape::Circle {
                center: r.position,
                radius: r.radius,
            })
            .collect();
        let shapes = self
            .obstacles
            .iter()
            .map(|o| &o.shape)
            .chain(robot_discs.iter());
        cast_scan(pose, spec, shapes)
    }

    /// Observation of robot `i`: own-excluded scan, goal in the robot frame
    /// as (distance, bearing), and current velocity.
    pub fn make_observation(&self, i: usize, spec: &LidarSpec<T>) -> Observation<T> {
        let robot = &self.robots[i];
        let scan = self.cast_lidar_excluding((robot.position, robot.heading), spec, Some(i));
        let to_goal = robot.goal - robot.position;
        let distance = to_goal.norm();
        let bearing = wrap_angle(to_goal.angle() - robot.heading);
        Observation {
            scan,
            goal: (distance, bearing),
            velocity: robot.velocity,
        }
    }

    pub fn active_count(&self) -> usize {
        self.robots.iter().filter(|r| r.active).count()
    }
}

/// What the policy sees: laser scan, relative goal, current velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation<T> {
    pub scan: Scan<T>,
    /// (distance m, bearing rad in robot frame, counter-clockwise positive).
    pub goal: (T, T),
    pub velocity: (T, T),
}

/// Shaped navigation reward. The goal branch dominates the collision branch;
/// otherwise dense progress toward the goal.
pub fn compute_reward<T: Real>(prev: &RobotState<T>, curr: &RobotState<T>, collided: bool) -> T {
    debug_assert_eq!(prev.goal, curr.goal, "reward assumes a fixed goal");
    if curr.goal_distance() < T::of(GOAL_RADIUS) {
        T::of(GOAL_REWARD)
    } else if collided {
        T::of(COLLISION_REWARD)
    } else {
        T::of(PROGRESS_WEIGHT) * (prev.goal_distance() - curr.goal_distance())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstacle::Behavior;

    fn world_with_robot(pos: Vec2<f64>, goal: Vec2<f64>) -> World<f64> {
        let mut w = World::new(0.1, ActionBounds::default(), 0);
        w.robots.push(RobotState::new(pos, 0.0, goal, 0.3));
        w
    }

    #[test]
    fn reward_goal_branch() {
        let prev = RobotState::new(Vec2::new(0.0, 0.0), 0.0, Vec2::new(1.0, 0.0), 0.3);
        let mut curr = prev;
        curr.position = Vec2::new(0.95, 0.0);
        assert_eq!(compute_reward(&prev, &curr, false), 20.0);
        // Goal dominates collision.
        assert_eq!(compute_reward(&prev, &curr, true), 20.0);
    }

    #[test]
    fn reward_collision_branch() {
        let prev = RobotState::new(Vec2::new(0.0, 0.0), 0.0, Vec2::new(1.0, 0.0), 0.3);
        assert_eq!(compute_reward(&prev, &prev, true), -20.0);
    }

    #[test]
    fn reward_progress_branch() {
        let prev = RobotState::new(Vec2::new(0.0, 0.0), 0.0, Vec2::new(3.0, 0.0), 0.3);
        let mut curr = prev;
        curr.position = Vec2::new(0.2, 0.0);
        let r: f64 = compute_reward(&prev, &curr, false);
        assert!((r - 0.5).abs() < 1e-12, "2.5 * 0.2 = 0.5, got {r}");
    }

    #[test]
    fn collision_conventions() {
        let mut w = world_with_robot(Vec2::new(0.0, 0.0), Vec2::new(5.0, 0.0));
        w.obstacles.push(Obstacle::new(
            Shape::Circle {
                center: Vec2::new(1.0, 0.0),
                radius: 0.5,
            },
            Behavior::Static,
            0.0,
        ));
        assert!(!w.check_collision(0), "1.0 > 0.3 + 0.5");
        w.robots[0].position = Vec2::new(0.21, 0.0);
        assert!(w.check_collision(0), "0.79 < 0.8");
    }

    #[test]
    fn robot_robot_boundary_contact_collides_symmetrically() {
        let mut w = world_with_robot(Vec2::new(0.0, 0.0), Vec2::new(5.0, 0.0));
        w.robots
            .push(RobotState::new(Vec2::new(0.6, 0.0), 0.0, Vec2::new(-5.0, 0.0), 0.3));
        assert!(w.check_collision(0));
        assert!(w.check_collision(1));
    }

    #[test]
    fn step_requires_one_action_per_robot() {
        let mut w = world_with_robot(Vec2::new(0.0, 0.0), Vec2::new(5.0, 0.0));
        assert!(w.step(&[]).is_err());
    }

    #[test]
    fn static_world_zero_actions_only_counts_steps() {
        let mut w = world_with_robot(Vec2::new(0.0, 0.0), Vec2::new(5.0, 0.0));
        w.obstacles.push(Obstacle::new(
            Shape::Segment {
                a: Vec2::new(2.0, -1.0),
                b: Vec2::new(2.0, 1.0),
            },
            Behavior::Static,
            0.0,
        ));
        let before = w.clone();
        let events = w.step(&[(0.0, 0.0)]).unwrap();
        assert_eq!(events[0], StepEvents::default());
        assert_eq!(w.robots[0], before.robots[0]);
        assert_eq!(w.obstacles[0].shape, before.obstacles[0].shape);
        assert_eq!(w.step_count, 1);
    }

    #[test]
    fn reaching_goal_deactivates() {
        let mut w = world_with_robot(Vec2::new(0.0, 0.0), Vec2::new(0.05, 0.0));
        let events = w.step(&[(0.0, 0.0)]).unwrap();
        assert!(events[0].reached_goal);
        assert!(!w.robots[0].active);
    }

    #[test]
    fn observation_goal_frame() {
        let w = world_with_robot(Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0));
        let spec = LidarSpec::default();
        let obs = w.make_observation(0, &spec);
        assert!((obs.goal.0 - 2.0).abs() < 1e-12);
        assert_eq!(obs.goal.1, 0.0);

        // Goal directly left → bearing +π/2.
        let w = world_with_robot(Vec2::new(0.0, 0.0), Vec2::new(0.0, 2.0));
        let obs = w.make_observation(0, &spec);
        assert!((obs.goal.1 - std::f64::consts::FRAC_PI_2).abs() < 1e-12);

        // Goal at (1,1) from origin heading 0 → (√2, π/4).
        let w = world_with_robot(Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0));
        let obs = w.make_observation(0, &spec);
        assert!((obs.goal.0 - 2.0f64.sqrt()).abs() < 1e-12);
        assert!((obs.goal.1 - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn own_disc_is_excluded_from_scan() {
        let w = world_with_robot(Vec2::new(0.0, 0.0), Vec2::new(5.0, 0.0));
        let spec = LidarSpec::default();
        let obs = w.make_observation(0, &spec);
        assert!(obs.scan.iter().all(|&r| r == spec.max_range));
    }

    #[test]
    fn deterministic_stepping() {
        let build = || {
            let mut w = world_with_robot(Vec2::new(0.0, 0.0), Vec2::new(5.0, 0.0));
            w.obstacles.push(Obstacle::new(
                Shape::Circle {
                    center: Vec2::new(3.0, 1.0),
                    radius: 0.4,
                },
                Behavior::StraightToGoal {
                    goal: Vec2::new(-3.0, 1.0),
                    speed: 0.5,
                },
                0.03,
            ));
            w
        };
        let mut a = build();
        let mut b = build();
        for k in 0..200 {
            let act = (0.5, (k as f64 * 0.37).sin() * 0.5);
            let ea = a.step(&[act]).unwrap();
            let eb = b.step(&[act]).unwrap();
            assert_eq!(ea, eb);
            assert_eq!(a.robots[0], b.robots[0]);
            assert_eq!(a.obstacles[0].shape, b.obstacles[0].shape);
        }
    }
}
