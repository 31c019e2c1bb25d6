//! Points of the unit circle and one-sided approach directions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Angles closer than this are treated as the same point of the circle.
pub const ANGLE_EPS: f64 = 1e-12;

/// Reduce an angle into `[0, 2pi)`.
pub fn canonical_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Cyclic distance between two angles.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = canonical_angle(a - b);
    d.min(TAU - d)
}

pub fn angles_close(a: f64, b: f64) -> bool {
    angle_distance(a, b) < ANGLE_EPS
}

/// A point `t = exp(i*angle)` of the unit circle with canonical angle in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct CirclePoint {
    angle: f64,
}

impl From<f64> for CirclePoint {
    fn from(angle: f64) -> Self {
        CirclePoint::new(angle)
    }
}

impl From<CirclePoint> for f64 {
    fn from(p: CirclePoint) -> f64 {
        p.angle
    }
}

impl CirclePoint {
    pub const ONE: CirclePoint = CirclePoint { angle: 0.0 };
    pub const MINUS_ONE: CirclePoint = CirclePoint { angle: PI };

    pub fn new(angle: f64) -> Self {
        CirclePoint {
            angle: canonical_angle(angle),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        CirclePoint::new(z.arg())
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }

    /// The point `1/t`, which equals the complex conjugate on the circle.
    pub fn reflect(&self) -> CirclePoint {
        CirclePoint::new(-self.angle)
    }

    pub fn is_close(&self, other: &CirclePoint) -> bool {
        angles_close(self.angle, other.angle)
    }

    /// True for `t = 1` and `t = -1`, the fixed points of `t -> 1/t`.
    pub fn is_real(&self) -> bool {
        angles_close(self.angle, 0.0) || angles_close(self.angle, PI)
    }

    /// Points with positive imaginary part.
    pub fn in_open_upper(&self) -> bool {
        self.angle > ANGLE_EPS && self.angle < PI - ANGLE_EPS
    }
}

/// Direction of a one-sided limit along the counterclockwise orientation.
///
/// `Right` is `a(t+0)`, approached from larger angles; `Left` is `a(t-0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Sort angles and drop near-duplicates (cyclically).
pub fn dedup_angles(mut angles: Vec<f64>) -> Vec<f64> {
    for a in angles.iter_mut() {
        *a = canonical_angle(*a);
    }
    angles.sort_by(|a, b| a.total_cmp(b));
    let mut out: Vec<f64> = Vec::with_capacity(angles.len());
    for a in angles {
        if out.last().is_none_or(|&last| !angles_close(last, a)) {
            out.push(a);
        }
    }
    if out.len() > 1 && angles_close(out[0], out[out.len() - 1]) {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalization() {
        assert_eq!(CirclePoint::new(TAU).angle(), 0.0);
        assert_eq!(CirclePoint::new(-PI / 2.0).angle(), 1.5 * PI);
        assert_eq!(CirclePoint::new(5.0 * PI), CirclePoint::new(PI));
        assert!(CirclePoint::new(-1e-18).angle() < TAU);
    }

    #[test]
    fn reflection_is_conjugation() {
        let t = CirclePoint::new(0.7);
        let z = t.reflect().to_complex();
        assert!((z - t.to_complex().conj()).norm() < 1e-15);
        assert_eq!(CirclePoint::ONE.reflect(), CirclePoint::ONE);
        assert!(CirclePoint::MINUS_ONE.reflect().is_close(&CirclePoint::MINUS_ONE));
    }

    #[test]
    fn dedup_wraps_around() {
        let v = dedup_angles(vec![0.0, TAU - 1e-14, 1.0, 1.0 + 1e-14]);
        assert_eq!(v.len(), 2);
    }
}
