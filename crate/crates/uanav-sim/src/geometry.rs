//! Planar geometry kernels: vectors, angle normalization, ray casts and
//! point-to-shape distances for the three obstacle primitives.

use uanav_num::Real;

/// 2D vector / point, generic over the scalar.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Vec2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the cross product.
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }

    pub fn scaled(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }

    /// Unit vector with the given heading angle.
    pub fn from_angle(theta: T) -> Self {
        Self::new(theta.cos(), theta.sin())
    }

    pub fn angle(self) -> T {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<T: Real> std::ops::Add for Vec2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Real> std::ops::Sub for Vec2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

/// Normalize an angle to (−π, π].
pub fn wrap_angle<T: Real>(a: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut w = a % two_pi;
    if w <= -T::PI() {
        w += two_pi;
    } else if w > T::PI() {
        w -= two_pi;
    }
    w
}

/// Obstacle boundary primitives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape<T> {
    Circle { center: Vec2<T>, radius: T },
    Segment { a: Vec2<T>, b: Vec2<T> },
    Aabb { min: Vec2<T>, max: Vec2<T> },
}

impl<T: Real> Shape<T> {
    /// Reference point moved by obstacle behaviors.
    pub fn anchor(&self) -> Vec2<T> {
        match *self {
            Shape::Circle { center, .. } => center,
            Shape::Segment { a, b } => (a + b).scaled(T::of(0.5)),
            Shape::Aabb { min, max } => (min + max).scaled(T::of(0.5)),
        }
    }

    pub fn translated(&self, d: Vec2<T>) -> Self {
        match *self {
            Shape::Circle { center, radius } => Shape::Circle { center: center + d, radius },
            Shape::Segment { a, b } => Shape::Segment { a: a + d, b: b + d },
            Shape::Aabb { min, max } => Shape::Aabb { min: min + d, max: max + d },
        }
    }

    /// Distance from a point to the shape boundary-or-interior (0 inside).
    pub fn distance_to_point(&self, p: Vec2<T>) -> T {
        match *self {
            Shape::Circle { center, radius } => (p.dist(center) - radius).max(T::zero()),
            Shape::Segment { a, b } => point_segment_distance(p, a, b),
            Shape::Aabb { min, max } => {
                let cx = p.x.max(min.x).min(max.x);
                let cy = p.y.max(min.y).min(max.y);
                p.dist(Vec2::new(cx, cy))
            }
        }
    }

    /// Smallest positive ray parameter hitting the shape, if any.
    pub fn raycast(&self, origin: Vec2<T>, dir: Vec2<T>) -> Option<T> {
        match *self {
            Shape::Circle { center, radius } => ray_circle(origin, dir, center, radius),
            Shape::Segment { a, b } => ray_segment(origin, dir, a, b),
            Shape::Aabb { min, max } => ray_aabb(origin, dir, min, max),
        }
    }
}

pub fn point_segment_distance<T: Real>(p: Vec2<T>, a: Vec2<T>, b: Vec2<T>) -> T {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == T::zero() {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len_sq).max(T::zero()).min(T::one());
    p.dist(a + ab.scaled(t))
}

/// Ray–circle: smallest t > 0 with |o + t·d − c| = r. A ray starting inside
/// the disc reports the exit distance.
pub fn ray_circle<T: Real>(o: Vec2<T>, d: Vec2<T>, c: Vec2<T>, r: T) -> Option<T> {
    let oc = o - c;
    // d is unit length, so the quadratic leading coefficient is 1.
    let b = oc.dot(d);
    let disc = b * b - (oc.norm_sq() - r * r);
    if disc < T::zero() {
        return None;
    }
    let sq = disc.sqrt();
    let t1 = -b - sq;
    let t2 = -b + sq;
    if t1 > T::zero() {
        Some(t1)
    } else if t2 > T::zero() {
        Some(t2)
    } else {
        None
    }
}

/// Ray–segment intersection. Parallel (including collinear) pairs miss.
pub fn ray_segment<T: Real>(o: Vec2<T>, d: Vec2<T>, a: Vec2<T>, b: Vec2<T>) -> Option<T> {
    let ab = b - a;
    let denom = d.cross(ab);
    if denom == T::zero() {
        return None;
    }
    let ao = a - o;
    let t = ao.cross(ab) / denom;
    let u = ao.cross(d) / denom;
    if t > T::zero() && u >= T::zero() && u <= T::one() {
        Some(t)
    } else {
        None
    }
}

/// Slab-method ray–box. A ray starting inside reports the exit distance.
pub fn ray_aabb<T: Real>(o: Vec2<T>, d: Vec2<T>, min: Vec2<T>, max: Vec2<T>) -> Option<T> {
    let mut t_near = T::neg_infinity();
    let mut t_far = T::infinity();
    for axis in 0..2 {
        let (o_a, d_a, lo, hi) = if axis == 0 {
            (o.x, d.x, min.x, max.x)
        } else {
            (o.y, d.y, min.y, max.y)
        };
        if d_a == T::zero() {
            if o_a < lo || o_a > hi {
                return None;
            }
        } else {
            let inv = T::one() / d_a;
            let (t0, t1) = {
                let a = (lo - o_a) * inv;
                let b = (hi - o_a) * inv;
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            };
            t_near = t_near.max(t0);
            t_far = t_far.min(t1);
            if t_near > t_far {
                return None;
            }
        }
    }
    if t_far <= T::zero() {
        None
    } else if t_near > T::zero() {
        Some(t_near)
    } else {
        Some(t_far)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(0.0f64), 0.0);
        assert!((wrap_angle(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        // −π maps to +π: the interval is half-open at −π.
        assert!(wrap_angle(-std::f64::consts::PI) > 0.0);
        for k in -7..=7 {
            let a = 0.3 + 2.0 * std::f64::consts::PI * k as f64;
            assert!((wrap_angle(a) - 0.3).abs() < 1e-9);
        }
    }

    #[test]
    fn ray_circle_head_on() {
        let t = ray_circle(
            Vec2::new(0.0f64, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(3.0, 0.0),
            0.5,
        )
        .unwrap();
        assert!((t - 2.5).abs() < 1e-12);
    }

    #[test]
    fn ray_circle_from_inside_reports_exit() {
        let t = ray_circle(
            Vec2::new(0.0f64, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 0.0),
            1.0,
        )
        .unwrap();
        assert!((t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ray_segment_perpendicular_wall() {
        let t = ray_segment(
            Vec2::new(0.0f64, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0, -5.0),
            Vec2::new(2.0, 5.0),
        )
        .unwrap();
        assert!((t - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ray_segment_behind_misses() {
        assert!(ray_segment(
            Vec2::new(0.0f64, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(-2.0, -5.0),
            Vec2::new(-2.0, 5.0),
        )
        .is_none());
    }

    #[test]
    fn ray_aabb_faces() {
        let min = Vec2::new(1.0f64, -1.0);
        let max = Vec2::new(2.0, 1.0);
        let t = ray_aabb(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), min, max).unwrap();
        assert!((t - 1.0).abs() < 1e-12);
        // From inside: exit through the far face.
        let t = ray_aabb(Vec2::new(1.5, 0.0), Vec2::new(1.0, 0.0), min, max).unwrap();
        assert!((t - 0.5).abs() < 1e-12);
    }

    #[test]
    fn distance_kernels() {
        let seg = Shape::Segment {
            a: Vec2::new(0.0f64, 0.0),
            b: Vec2::new(2.0, 0.0),
        };
        assert!((seg.distance_to_point(Vec2::new(1.0, 0.7)) - 0.7).abs() < 1e-12);
        assert!((seg.distance_to_point(Vec2::new(3.0, 0.0)) - 1.0).abs() < 1e-12);
        let boxy = Shape::Aabb {
            min: Vec2::new(0.0f64, 0.0),
            max: Vec2::new(1.0, 1.0),
        };
        assert_eq!(boxy.distance_to_point(Vec2::new(0.5, 0.5)), 0.0);
        assert!((boxy.distance_to_point(Vec2::new(2.0, 0.5)) - 1.0).abs() < 1e-12);
    }
}
