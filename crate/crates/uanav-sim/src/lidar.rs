//! LiDAR model: evenly spaced beams over a field of view, ranges clamped to
//! the sensor maximum when nothing is hit.

use uanav_num::Real;

use crate::geometry::Vec2;

/// One scan: ranges in meters, one per bearing, each in (0, max_range].
pub type Scan<T> = Vec<T>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LidarSpec<T> {
    pub num_beams: usize,
    /// Full field of view in degrees, in (0, 360].
    pub fov_deg: T,
    pub max_range: T,
}

impl<T: Real> Default for LidarSpec<T> {
    fn default() -> Self {
        Self {
            num_beams: 180,
            fov_deg: T::of(180.0),
            max_range: T::of(6.0),
        }
    }
}

impl<T: Real> LidarSpec<T> {
    pub fn validate(&self) -> Result<(), String> {
        if self.num_beams < 1 {
            return Err("num_beams must be >= 1".into());
        }
        let f = self.fov_deg.to_f64_lossy();
        if !(f > 0.0 && f <= 360.0) {
            return Err(format!("fov {f} outside (0, 360]"));
        }
        if self.max_range <= T::zero() {
            return Err("max_range must be > 0".into());
        }
        Ok(())
    }

    /// Nominal angular resolution in degrees (fov / num_beams).
    pub fn angular_resolution_deg(&self) -> T {
        self.fov_deg / T::of(self.num_beams as f64)
    }

    /// Bearing of beam `i` relative to the sensor heading, radians.
    /// Beams span the FOV inclusively: fov·(i/(N−1) − 1/2).
    pub fn beam_bearing(&self, i: usize) -> T {
        let fov = self.fov_deg.to_radians();
        if self.num_beams == 1 {
            return T::zero();
        }
        let frac = T::of(i as f64) / T::of((self.num_beams - 1) as f64);
        fov * (frac - T::of(0.5))
    }
}

/// Cast all beams from `pose` against the provided shapes. Pure function:
/// no-hit beams read max_range.
pub fn cast_scan<'a, T: Real>(
    pose: (Vec2<T>, T),
    spec: &LidarSpec<T>,
    shapes: impl Iterator<Item = &'a crate::geometry::Shape<T>> + Clone,
) -> Scan<T> {
    let (origin, heading) = pose;
    debug_assert!(origin.is_finite() && heading.is_finite());
    (0..spec.num_beams)
        .map(|i| {
            let dir = Vec2::from_angle(heading + spec.beam_bearing(i));
            let mut best = spec.max_range;
            for shape in shapes.clone() {
                if let Some(t) = shape.raycast(origin, dir) {
                    if t < best {
                        best = t;
                    }
                }
            }
            best
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Shape;

    #[test]
    fn bearings_are_symmetric_and_span_fov() {
        let spec = LidarSpec::<f64>::default();
        let half = 90.0f64.to_radians();
        assert!((spec.beam_bearing(0) + half).abs() < 1e-12);
        assert!((spec.beam_bearing(179) - half).abs() < 1e-12);
        assert!((spec.beam_bearing(89) + spec.beam_bearing(90)).abs() < 1e-12);
    }

    #[test]
    fn empty_world_reads_max_range() {
        let spec = LidarSpec::<f64>::default();
        let scan = cast_scan((Vec2::zero(), 0.0), &spec, [].iter());
        assert_eq!(scan.len(), 180);
        assert!(scan.iter().all(|&r| r == 6.0));
    }

    #[test]
    fn perpendicular_wall_center_beam() {
        let spec = LidarSpec::<f64>::default();
        let wall = [Shape::Segment {
            a: Vec2::new(2.0, -5.0),
            b: Vec2::new(2.0, 5.0),
        }];
        let scan = cast_scan((Vec2::zero(), 0.0), &spec, wall.iter());
        // 180 beams: bearings ±0.5029° straddle the axis symmetrically.
        let b = spec.beam_bearing(90);
        assert!((scan[90] - 2.0 / b.cos()).abs() < 1e-12);
        assert!((scan[89] - scan[90]).abs() < 1e-12);
    }

    #[test]
    fn single_beam_points_forward() {
        let spec = LidarSpec::<f64> {
            num_beams: 1,
            ..Default::default()
        };
        assert_eq!(spec.beam_bearing(0), 0.0);
        let wall = [Shape::Segment {
            a: Vec2::new(2.0, -5.0),
            b: Vec2::new(2.0, 5.0),
        }];
        let scan = cast_scan((Vec2::zero(), 0.0), &spec, wall.iter());
        assert!((scan[0] - 2.0).abs() < 1e-12);
    }
}
