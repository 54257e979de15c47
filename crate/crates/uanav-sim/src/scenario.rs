//! Named scenario constructors used by training and evaluation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use uanav_num::Real;

use crate::error::SimError;
use crate::geometry::{Shape, Vec2};
use crate::obstacle::{Behavior, Obstacle};
use crate::robot::{ActionBounds, RobotState};
use crate::world::World;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioName {
    Encounter,
    NarrowCorridor,
    UncertainCorridor,
    RandomCrossing,
    EmptyRoom,
}

impl ScenarioName {
    pub fn parse(s: &str) -> Result<Self, SimError> {
        match s {
            "encounter" => Ok(Self::Encounter),
            "narrow_corridor" => Ok(Self::NarrowCorridor),
            "uncertain_corridor" => Ok(Self::UncertainCorridor),
            "random_crossing" => Ok(Self::RandomCrossing),
            "empty_room" => Ok(Self::EmptyRoom),
            other => Err(SimError::UnknownScenario(other.to_string())),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Encounter => "encounter",
            Self::NarrowCorridor => "narrow_corridor",
            Self::UncertainCorridor => "uncertain_corridor",
            Self::RandomCrossing => "random_crossing",
            Self::EmptyRoom => "empty_room",
        }
    }
}

/// Which passage of the uncertain corridor carries the jittering obstacles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Upper,
    Lower,
}

/// Construction facts the evaluation harness needs but cannot recover from
/// the world geometry alone.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioMeta {
    pub name: ScenarioName,
    /// Set for `uncertain_corridor`: the high-uncertainty passage.
    pub uncertain_side: Option<Side>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams<T> {
    pub dt: T,
    pub bounds: ActionBounds<T>,
    pub robot_radius: T,
    /// Corridor width for `narrow_corridor`, meters.
    pub corridor_width: T,
    /// Jitter std for the uncertain corridor's jittering row.
    pub jitter_std: T,
    /// Jitter std for the encounter obstacle.
    pub encounter_jitter: T,
    /// Base speed of the oncoming encounter obstacle.
    pub obstacle_speed: T,
    /// Robot count for `random_crossing`.
    pub n_robots: usize,
    /// Half side length of the `random_crossing` arena.
    pub arena_half: T,
}

impl<T: Real> Default for ScenarioParams<T> {
    fn default() -> Self {
        Self {
            dt: T::of(0.1),
            bounds: ActionBounds::default(),
            robot_radius: T::of(0.3),
            corridor_width: T::of(1.0),
            jitter_std: T::of(0.08),
            encounter_jitter: T::of(0.05),
            obstacle_speed: T::of(0.6),
            n_robots: 20,
            arena_half: T::of(6.0),
        }
    }
}

/// Serializable scenario reference: a name plus parameter overrides, applied
/// on top of the run's base parameters.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: ScenarioName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corridor_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jitter_std: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encounter_jitter: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstacle_speed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_robots: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arena_half: Option<f64>,
}

impl ScenarioSpec {
    pub fn new(name: ScenarioName) -> Self {
        Self {
            name,
            corridor_width: None,
            jitter_std: None,
            encounter_jitter: None,
            obstacle_speed: None,
            n_robots: None,
            arena_half: None,
        }
    }

    pub fn apply<T: Real>(&self, base: &ScenarioParams<T>) -> ScenarioParams<T> {
        let mut p = base.clone();
        if let Some(v) = self.corridor_width {
            p.corridor_width = T::of(v);
        }
        if let Some(v) = self.jitter_std {
            p.jitter_std = T::of(v);
        }
        if let Some(v) = self.encounter_jitter {
            p.encounter_jitter = T::of(v);
        }
        if let Some(v) = self.obstacle_speed {
            p.obstacle_speed = T::of(v);
        }
        if let Some(v) = self.n_robots {
            p.n_robots = v;
        }
        if let Some(v) = self.arena_half {
            p.arena_half = T::of(v);
        }
        p
    }

    pub fn build<T: Real>(
        &self,
        base: &ScenarioParams<T>,
        seed: u64,
    ) -> Result<(World<T>, ScenarioMeta), SimError> {
        build_scenario(self.name, &self.apply(base), seed)
    }
}

pub fn build_scenario<T: Real>(
    name: ScenarioName,
    params: &ScenarioParams<T>,
    seed: u64,
) -> Result<(World<T>, ScenarioMeta), SimError> {
    match name {
        ScenarioName::Encounter => encounter(params, seed),
        ScenarioName::NarrowCorridor => narrow_corridor(params, seed),
        ScenarioName::UncertainCorridor => uncertain_corridor(params, seed),
        ScenarioName::RandomCrossing => random_crossing(params, seed),
        ScenarioName::EmptyRoom => empty_room(params, seed),
    }
}

fn base_world<T: Real>(params: &ScenarioParams<T>, seed: u64) -> World<T> {
    World::new(params.dt, params.bounds, seed)
}

fn meta(name: ScenarioName) -> ScenarioMeta {
    ScenarioMeta {
        name,
        uncertain_side: None,
    }
}

fn range<T: Real>(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> T {
    T::of(rng.random_range(lo..hi))
}

/// One robot heading straight at its goal, one non-reactive oncoming
/// obstacle on the robot–goal line.
fn encounter<T: Real>(
    params: &ScenarioParams<T>,
    seed: u64,
) -> Result<(World<T>, ScenarioMeta), SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut world = base_world(params, seed);
    let start = Vec2::new(T::of(-4.0), T::zero());
    let goal = Vec2::new(T::of(4.0), T::zero());
    world
        .robots
        .push(RobotState::new(start, T::zero(), goal, params.robot_radius));

    // The obstacle starts on the line and drives anti-parallel to the
    // robot–goal direction, through the robot's start and beyond.
    let x0: T = range(&mut rng, 0.5, 2.5);
    let speed_scale: T = range(&mut rng, 0.75, 1.25);
    world.obstacles.push(Obstacle::new(
        Shape::Circle {
            center: Vec2::new(x0, T::zero()),
            radius: T::of(0.3),
        },
        Behavior::StraightToGoal {
            goal: Vec2::new(T::of(-9.0), T::zero()),
            speed: params.obstacle_speed * speed_scale,
        },
        params.encounter_jitter,
    ));
    Ok((world, meta(ScenarioName::Encounter)))
}

/// Static room split by a corridor of the requested width, walls on a 1 m
/// grid where the width allows.
fn narrow_corridor<T: Real>(
    params: &ScenarioParams<T>,
    seed: u64,
) -> Result<(World<T>, ScenarioMeta), SimError> {
    let w = params.corridor_width;
    let diameter = params.robot_radius + params.robot_radius;
    if w < diameter {
        return Err(SimError::InfeasibleScenario(format!(
            "corridor width {} narrower than robot diameter {}",
            w.to_f64_lossy(),
            diameter.to_f64_lossy()
        )));
    }
    let mut world = base_world(params, seed);
    let half = w * T::of(0.5);
    let seg = |a: Vec2<T>, b: Vec2<T>| {
        Obstacle::new(Shape::Segment { a, b }, Behavior::Static, T::zero())
    };
    let (x_in, x_out) = (T::of(-2.0), T::of(2.0));
    let (room_x, room_y) = (T::of(6.0), T::of(3.0));
    // Room box.
    world.obstacles.extend([
        seg(Vec2::new(-room_x, -room_y), Vec2::new(room_x, -room_y)),
        seg(Vec2::new(-room_x, room_y), Vec2::new(room_x, room_y)),
        seg(Vec2::new(-room_x, -room_y), Vec2::new(-room_x, room_y)),
        seg(Vec2::new(room_x, -room_y), Vec2::new(room_x, room_y)),
    ]);
    // Entrance and exit plates.
    for x in [x_in, x_out] {
        world.obstacles.extend([
            seg(Vec2::new(x, half), Vec2::new(x, room_y)),
            seg(Vec2::new(x, -room_y), Vec2::new(x, -half)),
        ]);
    }
    // Corridor walls.
    world.obstacles.extend([
        seg(Vec2::new(x_in, half), Vec2::new(x_out, half)),
        seg(Vec2::new(x_in, -half), Vec2::new(x_out, -half)),
    ]);
    world.robots.push(RobotState::new(
        Vec2::new(T::of(-4.5), T::zero()),
        T::zero(),
        Vec2::new(T::of(4.5), T::zero()),
        params.robot_radius,
    ));
    Ok((world, meta(ScenarioName::NarrowCorridor)))
}

/// Two parallel passages; the seed picks which one is lined with jittering
/// obstacles. The jittering discs are tethered to their base position so
/// they wiggle in place instead of random-walking away.
fn uncertain_corridor<T: Real>(
    params: &ScenarioParams<T>,
    seed: u64,
) -> Result<(World<T>, ScenarioMeta), SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter_upper: bool = rng.random();
    let mut world = base_world(params, seed);

    let (room_x, room_y) = (T::of(6.5), T::of(3.2));
    let seg = |a: Vec2<T>, b: Vec2<T>| {
        Obstacle::new(Shape::Segment { a, b }, Behavior::Static, T::zero())
    };
    world.obstacles.extend([
        seg(Vec2::new(-room_x, -room_y), Vec2::new(room_x, -room_y)),
        seg(Vec2::new(-room_x, room_y), Vec2::new(room_x, room_y)),
        seg(Vec2::new(-room_x, -room_y), Vec2::new(-room_x, room_y)),
        seg(Vec2::new(room_x, -room_y), Vec2::new(room_x, room_y)),
    ]);

    let disc_r = T::of(0.3);
    let row_y = T::of(2.35);
    let xs: Vec<T> = (0..8).map(|k| T::of(-2.8 + 0.8 * k as f64)).collect();
    let push_row = |world: &mut World<T>, y: T, jitters: bool| {
        for &x in &xs {
            let center = Vec2::new(x, y);
            let (behavior, jitter) = if jitters {
                (
                    // Tether: constantly steered back to the base position.
                    Behavior::StraightToGoal {
                        goal: center,
                        speed: T::of(0.8),
                    },
                    params.jitter_std,
                )
            } else {
                (Behavior::Static, T::zero())
            };
            world.obstacles.push(Obstacle::new(
                Shape::Circle {
                    center,
                    radius: disc_r,
                },
                behavior,
                jitter,
            ));
        }
    };
    push_row(&mut world, row_y, jitter_upper);
    push_row(&mut world, T::zero(), false);
    push_row(&mut world, -row_y, !jitter_upper);

    world.robots.push(RobotState::new(
        Vec2::new(T::of(-5.0), T::zero()),
        T::zero(),
        Vec2::new(T::of(5.0), T::zero()),
        params.robot_radius,
    ));
    Ok((
        world,
        ScenarioMeta {
            name: ScenarioName::UncertainCorridor,
            uncertain_side: Some(if jitter_upper { Side::Upper } else { Side::Lower }),
        },
    ))
}

/// N robots with random start and goal positions in a square arena.
fn random_crossing<T: Real>(
    params: &ScenarioParams<T>,
    seed: u64,
) -> Result<(World<T>, ScenarioMeta), SimError> {
    let n = params.n_robots;
    if n == 0 {
        return Err(SimError::InvalidParameter("n_robots must be >= 1".into()));
    }
    let half = params.arena_half.to_f64_lossy();
    let margin = 0.8;
    let lim = half - margin;
    if lim <= 0.0 {
        return Err(SimError::InfeasibleScenario("arena too small".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut world = base_world(params, seed);
    let seg = |a: Vec2<T>, b: Vec2<T>| {
        Obstacle::new(Shape::Segment { a, b }, Behavior::Static, T::zero())
    };
    let h = params.arena_half;
    world.obstacles.extend([
        seg(Vec2::new(-h, -h), Vec2::new(h, -h)),
        seg(Vec2::new(-h, h), Vec2::new(h, h)),
        seg(Vec2::new(-h, -h), Vec2::new(-h, h)),
        seg(Vec2::new(h, -h), Vec2::new(h, h)),
    ]);

    let sample = |rng: &mut ChaCha8Rng,
                  taken: &[Vec2<f64>],
                  min_sep: f64,
                  extra: Option<(Vec2<f64>, f64)>|
     -> Result<Vec2<f64>, SimError> {
        for _ in 0..4000 {
            let p = Vec2::new(rng.random_range(-lim..lim), rng.random_range(-lim..lim));
            let clear = taken.iter().all(|q| p.dist(*q) >= min_sep)
                && extra.map_or(true, |(q, d)| p.dist(q) >= d);
            if clear {
                return Ok(p);
            }
        }
        Err(SimError::InfeasibleScenario(
            "could not place robots with the required separation".into(),
        ))
    };

    let mut starts: Vec<Vec2<f64>> = Vec::with_capacity(n);
    for _ in 0..n {
        let p = sample(&mut rng, &starts, 1.5, None)?;
        starts.push(p);
    }
    let mut goals: Vec<Vec2<f64>> = Vec::with_capacity(n);
    for &start in &starts {
        let g = sample(&mut rng, &goals, 1.0, Some((start, 3.0)))?;
        goals.push(g);
    }
    for (start, goal) in starts.into_iter().zip(goals) {
        let heading = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        world.robots.push(RobotState::new(
            Vec2::new(T::of(start.x), T::of(start.y)),
            T::of(heading),
            Vec2::new(T::of(goal.x), T::of(goal.y)),
            params.robot_radius,
        ));
    }
    Ok((world, meta(ScenarioName::RandomCrossing)))
}

/// Single robot, no obstacles: the training sanity scenario.
fn empty_room<T: Real>(
    params: &ScenarioParams<T>,
    seed: u64,
) -> Result<(World<T>, ScenarioMeta), SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut world = base_world(params, seed);
    let lim = 3.5;
    let start = Vec2::new(rng.random_range(-lim..lim), rng.random_range(-lim..lim));
    let goal = loop {
        let g = Vec2::new(rng.random_range(-lim..lim), rng.random_range(-lim..lim));
        if g.dist(start) >= 3.0 {
            break g;
        }
    };
    let heading = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    world.robots.push(RobotState::new(
        Vec2::new(T::of(start.x), T::of(start.y)),
        T::of(heading),
        Vec2::new(T::of(goal.x), T::of(goal.y)),
        params.robot_radius,
    ));
    Ok((world, meta(ScenarioName::EmptyRoom)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ScenarioParams<f64> {
        ScenarioParams::default()
    }

    #[test]
    fn unknown_name_rejected() {
        assert!(ScenarioName::parse("maze").is_err());
        assert_eq!(
            ScenarioName::parse("empty_room").unwrap(),
            ScenarioName::EmptyRoom
        );
    }

    #[test]
    fn random_crossing_is_deterministic_per_seed() {
        let mut p = params();
        p.n_robots = 6;
        let (a, _) = build_scenario(ScenarioName::RandomCrossing, &p, 7).unwrap();
        let (b, _) = build_scenario(ScenarioName::RandomCrossing, &p, 7).unwrap();
        assert_eq!(a.robots, b.robots);
        let (c, _) = build_scenario(ScenarioName::RandomCrossing, &p, 8).unwrap();
        assert_ne!(a.robots[0].position, c.robots[0].position);
    }

    #[test]
    fn narrow_corridor_rejects_sub_diameter_width() {
        let mut p = params();
        p.corridor_width = 0.5;
        assert!(matches!(
            build_scenario(ScenarioName::NarrowCorridor, &p, 0),
            Err(SimError::InfeasibleScenario(_))
        ));
        p.corridor_width = 1.0;
        assert!(build_scenario(ScenarioName::NarrowCorridor, &p, 0).is_ok());
    }

    #[test]
    fn encounter_obstacle_heading_anti_parallel() {
        for seed in 0..20 {
            let (w, _) = build_scenario(ScenarioName::Encounter, &params(), seed).unwrap();
            let robot = &w.robots[0];
            let goal_dir = (robot.goal - robot.position).scaled(1.0 / (robot.goal - robot.position).norm());
            match &w.obstacles[0].behavior {
                Behavior::StraightToGoal { goal, .. } => {
                    let anchor = w.obstacles[0].shape.anchor();
                    let d = *goal - anchor;
                    let dir = d.scaled(1.0 / d.norm());
                    assert!((dir.x + goal_dir.x).abs() < 1e-6);
                    assert!((dir.y + goal_dir.y).abs() < 1e-6);
                }
                other => panic!("unexpected behavior {other:?}"),
            }
        }
    }

    #[test]
    fn uncertain_corridor_sides_vary_with_seed() {
        let mut upper = 0;
        for seed in 0..40 {
            let (w, m) = build_scenario(ScenarioName::UncertainCorridor, &params(), seed).unwrap();
            assert!(m.uncertain_side.is_some());
            assert_eq!(w.obstacles.len(), 4 + 24);
            let jittering: Vec<_> = w.obstacles.iter().filter(|o| o.jitter_std > 0.0).collect();
            assert_eq!(jittering.len(), 8);
            let y = jittering[0].shape.anchor().y;
            match m.uncertain_side.unwrap() {
                Side::Upper => {
                    assert!(y > 0.0);
                    upper += 1;
                }
                Side::Lower => assert!(y < 0.0),
            }
        }
        assert!(upper > 5 && upper < 35, "side choice should vary: {upper}/40");
    }

    #[test]
    fn empty_room_has_reachable_goal_and_no_obstacles() {
        let (w, _) = build_scenario(ScenarioName::EmptyRoom, &params(), 3).unwrap();
        assert!(w.obstacles.is_empty());
        assert!(w.robots[0].goal_distance() >= 3.0);
    }
}
