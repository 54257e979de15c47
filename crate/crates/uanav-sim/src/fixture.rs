//! JSON scenario fixtures: a resolved world layout that round-trips to disk.

use std::path::Path;

use serde::{Deserialize, Serialize};
use uanav_num::Real;

use crate::error::SimError;
use crate::geometry::{Shape, Vec2};
use crate::lidar::LidarSpec;
use crate::obstacle::{Behavior, Obstacle};
use crate::robot::{ActionBounds, RobotState};
use crate::world::World;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WorldFixture {
    pub name: String,
    pub seed: u64,
    pub lidar: LidarFixture,
    pub robots: Vec<RobotFixture>,
    pub obstacles: Vec<ObstacleFixture>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LidarFixture {
    pub num_beams: usize,
    pub fov: f64,
    pub max_range: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RobotFixture {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub gx: f64,
    pub gy: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ObstacleFixture {
    pub shape: ShapeFixture,
    pub behavior: BehaviorFixture,
    pub jitter_std: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeFixture {
    Circle { cx: f64, cy: f64, radius: f64 },
    Segment { ax: f64, ay: f64, bx: f64, by: f64 },
    Box { min_x: f64, min_y: f64, max_x: f64, max_y: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BehaviorFixture {
    Static,
    StraightToGoal { gx: f64, gy: f64, speed: f64 },
    Waypoints { points: Vec<[f64; 2]>, speed: f64, cycle: bool },
}

pub fn fixture_from_world<T: Real>(
    name: &str,
    world: &World<T>,
    lidar: &LidarSpec<T>,
) -> WorldFixture {
    let f = |v: T| v.to_f64_lossy();
    WorldFixture {
        name: name.to_string(),
        seed: world.seed,
        lidar: LidarFixture {
            num_beams: lidar.num_beams,
            fov: f(lidar.fov_deg),
            max_range: f(lidar.max_range),
        },
        robots: world
            .robots
            .iter()
            .map(|r| RobotFixture {
                x: f(r.position.x),
                y: f(r.position.y),
                theta: f(r.heading),
                gx: f(r.goal.x),
                gy: f(r.goal.y),
                radius: f(r.radius),
            })
            .collect(),
        obstacles: world
            .obstacles
            .iter()
            .map(|o| ObstacleFixture {
                shape: match o.shape {
                    Shape::Circle { center, radius } => ShapeFixture::Circle {
                        cx: f(center.x),
                        cy: f(center.y),
                        radius: f(radius),
                    },
                    Shape::Segment { a, b } => ShapeFixture::Segment {
                        ax: f(a.x),
                        ay: f(a.y),
                        bx: f(b.x),
                        by: f(b.y),
                    },
                    Shape::Aabb { min, max } => ShapeFixture::Box {
                        min_x: f(min.x),
                        min_y: f(min.y),
                        max_x: f(max.x),
                        max_y: f(max.y),
                    },
                },
                behavior: match &o.behavior {
                    Behavior::Static => BehaviorFixture::Static,
                    Behavior::StraightToGoal { goal, speed } => BehaviorFixture::StraightToGoal {
                        gx: f(goal.x),
                        gy: f(goal.y),
                        speed: f(*speed),
                    },
                    Behavior::Waypoints { points, speed, cycle } => BehaviorFixture::Waypoints {
                        points: points.iter().map(|p| [f(p.x), f(p.y)]).collect(),
                        speed: f(*speed),
                        cycle: *cycle,
                    },
                },
                jitter_std: f(o.jitter_std),
            })
            .collect(),
    }
}

pub fn fixture_to_world<T: Real>(
    fixture: &WorldFixture,
    dt: T,
    bounds: ActionBounds<T>,
) -> Result<(World<T>, LidarSpec<T>), SimError> {
    let lidar = LidarSpec {
        num_beams: fixture.lidar.num_beams,
        fov_deg: T::of(fixture.lidar.fov),
        max_range: T::of(fixture.lidar.max_range),
    };
    lidar.validate().map_err(SimError::InvalidParameter)?;

    let mut world = World::new(dt, bounds, fixture.seed);
    for r in &fixture.robots {
        if r.radius <= 0.0 {
            return Err(SimError::InvalidParameter("robot radius must be > 0".into()));
        }
        world.robots.push(RobotState::new(
            Vec2::new(T::of(r.x), T::of(r.y)),
            T::of(r.theta),
            Vec2::new(T::of(r.gx), T::of(r.gy)),
            T::of(r.radius),
        ));
    }
    for o in &fixture.obstacles {
        if o.jitter_std < 0.0 {
            return Err(SimError::InvalidParameter("jitter_std must be >= 0".into()));
        }
        let shape = match o.shape {
            ShapeFixture::Circle { cx, cy, radius } => Shape::Circle {
                center: Vec2::new(T::of(cx), T::of(cy)),
                radius: T::of(radius),
            },
            ShapeFixture::Segment { ax, ay, bx, by } => Shape::Segment {
                a: Vec2::new(T::of(ax), T::of(ay)),
                b: Vec2::new(T::of(bx), T::of(by)),
            },
            ShapeFixture::Box { min_x, min_y, max_x, max_y } => Shape::Aabb {
                min: Vec2::new(T::of(min_x), T::of(min_y)),
                max: Vec2::new(T::of(max_x), T::of(max_y)),
            },
        };
        let behavior = match &o.behavior {
            BehaviorFixture::Static => Behavior::Static,
            BehaviorFixture::StraightToGoal { gx, gy, speed } => Behavior::StraightToGoal {
                goal: Vec2::new(T::of(*gx), T::of(*gy)),
                speed: T::of(*speed),
            },
            BehaviorFixture::Waypoints { points, speed, cycle } => Behavior::Waypoints {
                points: points
                    .iter()
                    .map(|p| Vec2::new(T::of(p[0]), T::of(p[1])))
                    .collect(),
                speed: T::of(*speed),
                cycle: *cycle,
            },
        };
        world
            .obstacles
            .push(Obstacle::new(shape, behavior, T::of(o.jitter_std)));
    }
    Ok((world, lidar))
}

pub fn save_fixture(path: &Path, fixture: &WorldFixture) -> Result<(), SimError> {
    let json = serde_json::to_string_pretty(fixture)?;
    std::fs::write(path, json)?;
    Ok(())
}

pub fn load_fixture(path: &Path) -> Result<WorldFixture, SimError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
