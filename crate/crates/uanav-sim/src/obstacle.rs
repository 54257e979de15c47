//! Obstacles: a boundary shape plus a scripted behavior and optional
//! positional jitter.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use uanav_num::Real;

use crate::geometry::{Shape, Vec2};

#[derive(Debug, Clone, PartialEq)]
pub enum Behavior<T> {
    Static,
    /// Move toward a fixed point at constant speed; stop on arrival.
    /// Non-reactive: no avoidance.
    StraightToGoal { goal: Vec2<T>, speed: T },
    /// Visit waypoints in order; optionally cycle.
    Waypoints {
        points: Vec<Vec2<T>>,
        speed: T,
        cycle: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle<T> {
    pub shape: Shape<T>,
    pub behavior: Behavior<T>,
    /// Std of the per-step Gaussian positional noise, meters. Individual
    /// steps are clamped to 4σ so an obstacle never teleports farther than
    /// speed·dt + 4σ in one step.
    pub jitter_std: T,
    waypoint_index: usize,
}

impl<T: Real> Obstacle<T> {
    pub fn new(shape: Shape<T>, behavior: Behavior<T>, jitter_std: T) -> Self {
        debug_assert!(jitter_std >= T::zero());
        Self {
            shape,
            behavior,
            jitter_std,
            waypoint_index: 0,
        }
    }

    pub fn is_static(&self) -> bool {
        matches!(self.behavior, Behavior::Static) && self.jitter_std == T::zero()
    }

    /// Displacement prescribed by the behavior script for one step.
    fn scripted_delta(&mut self, dt: T) -> Vec2<T> {
        let anchor = self.shape.anchor();
        match &mut self.behavior {
            Behavior::Static => Vec2::zero(),
            Behavior::StraightToGoal { goal, speed } => step_toward(anchor, *goal, *speed * dt),
            Behavior::Waypoints { points, speed, cycle } => {
                if points.is_empty() {
                    return Vec2::zero();
                }
                let idx = self.waypoint_index % points.len();
                let target = points[idx];
                let delta = step_toward(anchor, target, *speed * dt);
                let arrived = (anchor + delta).dist(target) < T::of(1e-9);
                if arrived {
                    if *cycle {
                        self.waypoint_index = (idx + 1) % points.len();
                    } else if idx + 1 < points.len() {
                        self.waypoint_index = idx + 1;
                    }
                }
                delta
            }
        }
    }

    /// Advance one step: scripted motion plus clamped Gaussian jitter drawn
    /// from the world's seeded stream (two draws per obstacle per step, in
    /// x/y order, even when jitter_std is 0, to keep stream alignment
    /// independent of obstacle configuration).
    pub fn step(&mut self, dt: T, rng: &mut impl Rng) -> Vec2<T> {
        let scripted = self.scripted_delta(dt);
        let nx: f64 = StandardNormal.sample(rng);
        let ny: f64 = StandardNormal.sample(rng);
        let jitter = if self.jitter_std > T::zero() {
            let mut j = Vec2::new(T::of(nx), T::of(ny)).scaled(self.jitter_std);
            let cap = T::of(4.0) * self.jitter_std;
            let n = j.norm();
            if n > cap {
                j = j.scaled(cap / n);
            }
            j
        } else {
            Vec2::zero()
        };
        let delta = scripted + jitter;
        self.shape = self.shape.translated(delta);
        delta
    }
}

fn step_toward<T: Real>(from: Vec2<T>, to: Vec2<T>, max_step: T) -> Vec2<T> {
    let diff = to - from;
    let dist = diff.norm();
    if dist <= max_step || dist == T::zero() {
        diff
    } else {
        diff.scaled(max_step / dist)
    }
}
