use std::fmt;

/// Products accumulated before a unit quaternion is renormalized.
pub const RENORMALIZE_EVERY: u8 = 64;

/// Unit quaternion `w + x i + y j + z k`, an element of SU(2).
#[derive(Debug, Clone, Copy)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    depth: u8,
}

impl PartialEq for Quat {
    fn eq(&self, other: &Self) -> bool {
        self.w == other.w && self.x == other.x && self.y == other.y && self.z == other.z
    }
}

impl Quat {
    pub const IDENTITY: Quat = Quat { w: 1.0, x: 0.0, y: 0.0, z: 0.0, depth: 0 };

    /// Normalized quaternion from raw coordinates.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat { w, x, y, z, depth: 0 }.renormalized()
    }

    /// Coordinates as given, without renormalizing.
    pub fn from_raw(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat { w, x, y, z, depth: 0 }
    }

    /// Rotation by `2 * half_angle` about `axis`.
    pub fn from_axis_half_angle(axis: [f64; 3], half_angle: f64) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let s = half_angle.sin() / n;
        Quat::new(half_angle.cos(), axis[0] * s, axis[1] * s, axis[2] * s)
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn renormalized(self) -> Self {
        let n = self.norm();
        Quat { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n, depth: 0 }
    }

    /// Hamilton product `self * rhs`.
    pub fn mul(&self, rhs: &Quat) -> Quat {
        let (a, b) = (self, rhs);
        let q = Quat {
            w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
            depth: a.depth.max(b.depth) + 1,
        };
        if q.depth >= RENORMALIZE_EVERY {
            q.renormalized()
        } else {
            q
        }
    }

    pub fn conjugate(&self) -> Quat {
        Quat { w: self.w, x: -self.x, y: -self.y, z: -self.z, depth: self.depth }
    }

    /// The `t` in `[0, pi]` with eigenvalues `e^{+-it}`; `w = cos t`.
    pub fn half_angle(&self) -> f64 {
        let v = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        v.atan2(self.w)
    }

    pub fn euclidean_distance(&self, other: &Quat) -> f64 {
        let d = [self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z];
        d.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.w, self.x, self.y, self.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drift_stays_bounded() {
        let step = Quat::new(0.3, -0.5, 0.7, 0.2);
        let mut q = Quat::IDENTITY;
        for _ in 0..100_000 {
            q = q.mul(&step);
            assert!((q.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn half_angle_and_inverse() {
        let q = Quat::from_axis_half_angle([0.0, 0.0, 1.0], 0.4);
        assert!((q.half_angle() - 0.4).abs() < 1e-15);
        let e = q.mul(&q.conjugate());
        assert!(e.euclidean_distance(&Quat::IDENTITY) < 1e-15);
        assert!((Quat::new(-1.0, 0.0, 0.0, 0.0).half_angle() - std::f64::consts::PI).abs() < 1e-15);
    }
}
