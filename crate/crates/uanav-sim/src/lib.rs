//! Deterministic 2D navigation world: differential-drive kinematics, LiDAR
//! raycasting, scripted/stochastic obstacles, collision events, the shaped
//! navigation reward and named benchmark scenarios.
//!
//! Everything is generic over the scalar type via [`uanav_num::Real`]; the
//! aliases at the crate root pin the f64 instantiation used by the pipeline.

pub mod error;
pub mod fixture;
pub mod geometry;
pub mod lidar;
pub mod obstacle;
pub mod robot;
pub mod scenario;
pub mod seed;
pub mod trajectory;
pub mod world;

pub use error::SimError;
pub use geometry::{wrap_angle, Shape, Vec2};
pub use lidar::{cast_scan, LidarSpec, Scan};
pub use obstacle::{Behavior, Obstacle};
pub use robot::{step_robot, ActionBounds, RobotState};
pub use scenario::{build_scenario, ScenarioMeta, ScenarioName, ScenarioParams, ScenarioSpec, Side};
pub use seed::{resolve_seed, splitmix64, SeedPurpose};
pub use world::{compute_reward, Observation, StepEvents, World};

/// f64 instantiations used by the shipped pipeline.
pub type Vec2f = Vec2<uanav_num::Scalar>;
pub type Worldf = World<uanav_num::Scalar>;
pub type LidarSpecf = LidarSpec<uanav_num::Scalar>;
pub type RobotStatef = RobotState<uanav_num::Scalar>;
