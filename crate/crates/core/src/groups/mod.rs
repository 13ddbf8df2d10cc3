//! Compact connected groups: U(1), tori, SU(2) and finite products.
//!
//! Circle angles are stored as 64-bit fixed point turns, so U(1) and torus
//! arithmetic is exact modular arithmetic on dyadic rationals. SU(2) uses
//! unit quaternions.

mod nielsen;
mod quat;
mod rep;

pub use nielsen::{nielsen_alpha, nielsen_beta};
pub use quat::{Quat, RENORMALIZE_EVERY};
pub use rep::{character, rep_matrix, Representation, UnitaryMatrix, MAX_MATRIX_TWO_J, MAX_TWO_J, MAX_U1_LABEL};

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// The group operation used by the cocycle machinery.
pub trait GroupOp: Clone {
    /// `self * rhs`.
    fn op(&self, rhs: &Self) -> Self;
}

const TURN: f64 = 18_446_744_073_709_551_616.0; // 2^64

/// A point of the circle `R/Z` in units of `2^-64` turns.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle(u64);

impl Angle {
    pub const ZERO: Angle = Angle(0);

    pub fn from_raw(raw: u64) -> Self {
        Angle(raw)
    }

    pub fn raw(self) -> u64 {
        self.0
    }

    /// Reduces `turns` modulo 1 and rounds to the fixed point grid.
    pub fn from_turns(turns: f64) -> Self {
        let frac = turns - turns.floor();
        let scaled = (frac * TURN).round();
        if scaled >= TURN {
            Angle(0)
        } else {
            Angle(scaled as u64)
        }
    }

    /// `p/q` turns, rounded to the grid.
    pub fn from_fraction(p: i64, q: u64) -> Self {
        let p = p.rem_euclid(q as i64) as u128;
        Angle(((p << 64) / q as u128) as u64)
    }

    /// Angle in `[0, 1)` turns.
    pub fn turns(self) -> f64 {
        self.0 as f64 / TURN
    }

    /// `m * self` modulo 1.
    pub fn times(self, m: i64) -> Angle {
        Angle(self.0.wrapping_mul(m as u64))
    }

    /// Arc-length distance on the unit circle.
    pub fn distance(self, other: Angle) -> f64 {
        let d = self.0.wrapping_sub(other.0);
        let d = d.min(d.wrapping_neg());
        TAU * (d as f64 / TURN)
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;

    fn add(self, other: Angle) -> Angle {
        Angle(self.0.wrapping_add(other.0))
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;

    fn neg(self) -> Angle {
        Angle(self.0.wrapping_neg())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    U1,
    Torus(usize),
    Su2,
    Product(Vec<GroupDescriptor>),
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::U1 => write!(f, "u1"),
            GroupDescriptor::Torus(m) => write!(f, "torus:{m}"),
            GroupDescriptor::Su2 => write!(f, "su2"),
            GroupDescriptor::Product(parts) => {
                let names: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "{}", names.join("*"))
            }
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    /// `u1`, `su2`, `torus:m`, or a `*`-separated product such as `u1*su2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s.contains('*') {
            let parts = s.split('*').map(str::parse).collect::<Result<Vec<_>>>()?;
            return Ok(GroupDescriptor::Product(parts));
        }
        match s.as_str() {
            "u1" => Ok(GroupDescriptor::U1),
            "su2" => Ok(GroupDescriptor::Su2),
            t if t.starts_with("torus") => {
                let m = t.trim_start_matches("torus").trim_start_matches(':');
                let m: usize = m.parse().map_err(|_| Error::Parse(format!("bad torus dimension in '{s}'")))?;
                if m == 0 {
                    return Err(Error::Parse("torus dimension must be positive".into()));
                }
                Ok(GroupDescriptor::Torus(m))
            }
            _ => Err(Error::Parse(format!("unknown group '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    U1(Angle),
    Torus(Vec<Angle>),
    Su2(Quat),
    Product(Vec<GroupElement>),
}

fn mismatch(a: &GroupElement, b: &GroupElement) -> Error {
    Error::DescriptorMismatch(format!("{} vs {}", a.descriptor(), b.descriptor()))
}

impl GroupElement {
    pub fn identity(desc: &GroupDescriptor) -> Self {
        match desc {
            GroupDescriptor::U1 => GroupElement::U1(Angle::ZERO),
            GroupDescriptor::Torus(m) => GroupElement::Torus(vec![Angle::ZERO; *m]),
            GroupDescriptor::Su2 => GroupElement::Su2(Quat::IDENTITY),
            GroupDescriptor::Product(parts) => GroupElement::Product(parts.iter().map(GroupElement::identity).collect()),
        }
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        match self {
            GroupElement::U1(_) => GroupDescriptor::U1,
            GroupElement::Torus(v) => GroupDescriptor::Torus(v.len()),
            GroupElement::Su2(_) => GroupDescriptor::Su2,
            GroupElement::Product(parts) => GroupDescriptor::Product(parts.iter().map(GroupElement::descriptor).collect()),
        }
    }

    pub fn try_mul(&self, rhs: &GroupElement) -> Result<GroupElement> {
        use GroupElement::*;
        match (self, rhs) {
            (U1(a), U1(b)) => Ok(U1(*a + *b)),
            (Torus(a), Torus(b)) if a.len() == b.len() => Ok(Torus(a.iter().zip(b).map(|(x, y)| *x + *y).collect())),
            (Su2(a), Su2(b)) => Ok(Su2(a.mul(b))),
            (Product(a), Product(b)) if a.len() == b.len() => {
                a.iter().zip(b).map(|(x, y)| x.try_mul(y)).collect::<Result<_>>().map(Product)
            }
            _ => Err(mismatch(self, rhs)),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::U1(a) => GroupElement::U1(-*a),
            GroupElement::Torus(v) => GroupElement::Torus(v.iter().map(|a| -*a).collect()),
            GroupElement::Su2(q) => GroupElement::Su2(q.conjugate()),
            GroupElement::Product(parts) => GroupElement::Product(parts.iter().map(GroupElement::inverse).collect()),
        }
    }

    /// `c * self * c^{-1}`.
    pub fn conjugated_by(&self, c: &GroupElement) -> Result<GroupElement> {
        c.try_mul(self)?.try_mul(&c.inverse())
    }

    /// Bi-invariant distance: arc length on circles (max over torus
    /// coordinates), Euclidean quaternion distance on SU(2), maximum over
    /// product components.
    pub fn distance(&self, other: &GroupElement) -> Result<f64> {
        use GroupElement::*;
        match (self, other) {
            (U1(a), U1(b)) => Ok(a.distance(*b)),
            (Torus(a), Torus(b)) if a.len() == b.len() => {
                Ok(a.iter().zip(b).map(|(x, y)| x.distance(*y)).fold(0.0, f64::max))
            }
            (Su2(a), Su2(b)) => Ok(a.euclidean_distance(b)),
            (Product(a), Product(b)) if a.len() == b.len() => {
                a.iter().zip(b).map(|(x, y)| x.distance(y)).try_fold(0.0, |m, d| d.map(|d| f64::max(m, d)))
            }
            _ => Err(mismatch(self, other)),
        }
    }

    /// Text form used in CSV and JSONL output: U(1) as a decimal angle in
    /// turns, a torus as space separated angles, SU(2) as `w x y z`, and
    /// product components joined by `|`.
    pub fn serialize(&self) -> String {
        match self {
            GroupElement::U1(a) => a.turns().to_string(),
            GroupElement::Torus(v) => v.iter().map(|a| a.turns().to_string()).collect::<Vec<_>>().join(" "),
            GroupElement::Su2(q) => q.to_string(),
            GroupElement::Product(parts) => parts.iter().map(GroupElement::serialize).collect::<Vec<_>>().join("|"),
        }
    }

    pub fn parse(desc: &GroupDescriptor, s: &str) -> Result<GroupElement> {
        let nums = |s: &str| -> Result<Vec<f64>> {
            s.split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad group coordinate '{t}'"))))
                .collect()
        };
        match desc {
            GroupDescriptor::U1 => match nums(s)?.as_slice() {
                [a] => Ok(GroupElement::U1(Angle::from_turns(*a))),
                _ => Err(Error::Parse(format!("expected one angle, got '{s}'"))),
            },
            GroupDescriptor::Torus(m) => {
                let v = nums(s)?;
                if v.len() != *m {
                    return Err(Error::Parse(format!("expected {m} angles, got '{s}'")));
                }
                Ok(GroupElement::Torus(v.into_iter().map(Angle::from_turns).collect()))
            }
            GroupDescriptor::Su2 => match nums(s)?.as_slice() {
                [w, x, y, z] => {
                    let q = Quat::from_raw(*w, *x, *y, *z);
                    if (q.norm() - 1.0).abs() > 1e-6 {
                        return Err(Error::Parse(format!("quaternion '{s}' is not a unit quaternion")));
                    }
                    Ok(GroupElement::Su2(q.renormalized()))
                }
                _ => Err(Error::Parse(format!("expected four quaternion coordinates, got '{s}'"))),
            },
            GroupDescriptor::Product(parts) => {
                let pieces: Vec<&str> = s.split('|').collect();
                if pieces.len() != parts.len() {
                    return Err(Error::Parse(format!("expected {} product components in '{s}'", parts.len())));
                }
                parts.iter().zip(pieces).map(|(d, p)| GroupElement::parse(d, p)).collect::<Result<_>>().map(GroupElement::Product)
            }
        }
    }
}

impl GroupOp for GroupElement {
    fn op(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("elements of one group")
    }
}

/// Haar-random element: uniform angles, and normalized 4-vectors of
/// independent standard normals for SU(2).
pub fn haar_sample<R: Rng + ?Sized>(desc: &GroupDescriptor, rng: &mut R) -> GroupElement {
    match desc {
        GroupDescriptor::U1 => GroupElement::U1(Angle(rng.random())),
        GroupDescriptor::Torus(m) => GroupElement::Torus((0..*m).map(|_| Angle(rng.random())).collect()),
        GroupDescriptor::Su2 => loop {
            let c: [f64; 4] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
            let q = Quat::from_raw(c[0], c[1], c[2], c[3]);
            if q.norm() > 1e-9 {
                break GroupElement::Su2(q.renormalized());
            }
        },
        GroupDescriptor::Product(parts) => GroupElement::Product(parts.iter().map(|d| haar_sample(d, rng)).collect()),
    }
}

/// `min_c d(c a c^{-1}, b)` in closed form.
///
/// Abelian factors are conjugation invariant. On SU(2) the conjugacy class
/// is determined by the half angle `t`, and aligning the rotation axes gives
/// `2 |sin((t_a - t_b) / 2)|`.
pub fn conj_min_distance(a: &GroupElement, b: &GroupElement) -> Result<f64> {
    use GroupElement::*;
    match (a, b) {
        (U1(_), U1(_)) | (Torus(_), Torus(_)) => a.distance(b),
        (Su2(p), Su2(q)) => Ok(2.0 * ((p.half_angle() - q.half_angle()) / 2.0).sin().abs()),
        (Product(x), Product(y)) if x.len() == y.len() => {
            x.iter().zip(y).map(|(u, v)| conj_min_distance(u, v)).try_fold(0.0, |m, d| d.map(|d| f64::max(m, d)))
        }
        _ => Err(mismatch(a, b)),
    }
}

/// Sampling estimate of `min_c d(c a c^{-1}, b)`: `samples` Haar-random
/// conjugators followed by a shrinking random local search around the best
/// one. Approximate; it only ever overestimates the true minimum.
pub fn conj_min_distance_sampled<R: Rng + ?Sized>(a: &GroupElement, b: &GroupElement, samples: usize, rng: &mut R) -> Result<f64> {
    let desc = a.descriptor();
    if desc != b.descriptor() {
        return Err(mismatch(a, b));
    }
    let cost = |c: &GroupElement| -> Result<f64> { a.conjugated_by(c)?.distance(b) };
    let mut best = GroupElement::identity(&desc);
    let mut best_cost = cost(&best)?;
    for _ in 0..samples {
        let c = haar_sample(&desc, rng);
        let v = cost(&c)?;
        if v < best_cost {
            best = c;
            best_cost = v;
        }
    }
    let mut radius = 0.2;
    while radius > 1e-9 {
        let mut improved = false;
        for _ in 0..32 {
            let c = best.try_mul(&small_perturbation(&desc, radius, rng))?;
            let v = cost(&c)?;
            if v < best_cost {
                best = c;
                best_cost = v;
                improved = true;
            }
        }
        if !improved {
            radius *= 0.5;
        }
    }
    Ok(best_cost)
}

fn small_perturbation<R: Rng + ?Sized>(desc: &GroupDescriptor, radius: f64, rng: &mut R) -> GroupElement {
    match desc {
        GroupDescriptor::U1 => GroupElement::U1(Angle::from_turns(radius * (rng.random::<f64>() - 0.5))),
        GroupDescriptor::Torus(m) => {
            GroupElement::Torus((0..*m).map(|_| Angle::from_turns(radius * (rng.random::<f64>() - 0.5))).collect())
        }
        GroupDescriptor::Su2 => {
            let axis: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
            GroupElement::Su2(Quat::from_axis_half_angle(axis, radius * rng.random::<f64>()))
        }
        GroupDescriptor::Product(parts) => GroupElement::Product(parts.iter().map(|d| small_perturbation(d, radius, rng)).collect()),
    }
}

/// An `n`-tuple of elements of one group.
#[derive(Debug, Clone, PartialEq)]
pub struct GTuple {
    descriptor: GroupDescriptor,
    elements: Vec<GroupElement>,
}

impl GTuple {
    pub fn new(descriptor: GroupDescriptor, elements: Vec<GroupElement>) -> Result<Self> {
        if let Some(bad) = elements.iter().find(|e| e.descriptor() != descriptor) {
            return Err(Error::DescriptorMismatch(format!("{} in a tuple over {}", bad.descriptor(), descriptor)));
        }
        Ok(Self { descriptor, elements })
    }

    pub fn identity(descriptor: &GroupDescriptor, n: usize) -> Self {
        Self { descriptor: descriptor.clone(), elements: vec![GroupElement::identity(descriptor); n] }
    }

    pub fn haar<R: Rng + ?Sized>(descriptor: &GroupDescriptor, n: usize, rng: &mut R) -> Self {
        Self { descriptor: descriptor.clone(), elements: (0..n).map(|_| haar_sample(descriptor, rng)).collect() }
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<GroupElement> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Product metric: maximum of the componentwise distances.
    pub fn distance(&self, other: &GTuple) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: other.len() });
        }
        self.elements.iter().zip(&other.elements).try_fold(0.0, |m, (a, b)| a.distance(b).map(|d| f64::max(m, d)))
    }

    /// Componentwise global conjugation `a g_k a^{-1}`.
    pub fn conjugated_by(&self, a: &GroupElement) -> Result<GTuple> {
        let elements = self.elements.iter().map(|g| g.conjugated_by(a)).collect::<Result<_>>()?;
        GTuple::new(self.descriptor.clone(), elements)
    }

    pub fn serialize(&self) -> String {
        serialize_tuple(&self.elements)
    }

    /// Parses `;`-separated elements.
    pub fn parse(descriptor: &GroupDescriptor, s: &str) -> Result<GTuple> {
        let elements = s.split(';').map(|p| GroupElement::parse(descriptor, p.trim())).collect::<Result<_>>()?;
        GTuple::new(descriptor.clone(), elements)
    }
}

pub fn serialize_tuple(elements: &[GroupElement]) -> String {
    elements.iter().map(GroupElement::serialize).collect::<Vec<_>>().join(";")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_descriptors() -> Vec<GroupDescriptor> {
        vec![
            GroupDescriptor::U1,
            GroupDescriptor::Torus(2),
            GroupDescriptor::Su2,
            GroupDescriptor::Product(vec![GroupDescriptor::U1, GroupDescriptor::Su2]),
        ]
    }

    #[test]
    fn group_axioms_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for desc in all_descriptors() {
            let e = GroupElement::identity(&desc);
            for _ in 0..10_000 {
                let (a, b, c) = (haar_sample(&desc, &mut rng), haar_sample(&desc, &mut rng), haar_sample(&desc, &mut rng));
                let left = a.op(&b).op(&c);
                let right = a.op(&b.op(&c));
                assert!(left.distance(&right).unwrap() <= 1e-12);
                assert!(a.op(&a.inverse()).distance(&e).unwrap() <= 1e-12);
                assert_eq!(a.op(&e).distance(&a).unwrap(), 0.0);
                if !matches!(desc, GroupDescriptor::Su2 | GroupDescriptor::Product(_)) {
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn distance_is_bi_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for desc in all_descriptors() {
            for _ in 0..10_000 {
                let (a, g, h) = (haar_sample(&desc, &mut rng), haar_sample(&desc, &mut rng), haar_sample(&desc, &mut rng));
                let d = g.distance(&h).unwrap();
                assert!((a.op(&g).distance(&a.op(&h)).unwrap() - d).abs() <= 1e-10);
                assert!((g.op(&a).distance(&h.op(&a)).unwrap() - d).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn angle_arithmetic() {
        let a = Angle::from_fraction(1, 4);
        assert_eq!(a.turns(), 0.25);
        assert_eq!(a.times(4), Angle::ZERO);
        assert_eq!(Angle::from_turns(-0.25), Angle::from_fraction(3, 4));
        assert!((Angle::from_fraction(1, 10).distance(Angle::from_fraction(9, 10)) - TAU * 0.2).abs() < 1e-12);
    }

    #[test]
    fn conj_distance_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = haar_sample(&GroupDescriptor::Su2, &mut rng);
        assert_eq!(conj_min_distance(&a, &a).unwrap(), 0.0);
        let c = haar_sample(&GroupDescriptor::Su2, &mut rng);
        assert!(conj_min_distance(&a.conjugated_by(&c).unwrap(), &a).unwrap() < 1e-10);
        let u = GroupElement::U1(Angle::from_fraction(1, 3));
        assert!(matches!(conj_min_distance(&a, &u), Err(Error::DescriptorMismatch(_))));
    }

    #[test]
    fn parse_and_serialize() {
        for desc in all_descriptors() {
            assert_eq!(desc.to_string().parse::<GroupDescriptor>().unwrap(), desc);
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            let t = GTuple::haar(&desc, 3, &mut rng);
            let back = GTuple::parse(&desc, &t.serialize()).unwrap();
            assert!(t.distance(&back).unwrap() < 1e-12);
        }
        assert!("spin7".parse::<GroupDescriptor>().is_err());
        assert!(GroupElement::parse(&GroupDescriptor::Su2, "1 1 0 0").is_err());
    }

    #[test]
    fn haar_is_reproducible() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..5).map(|_| haar_sample(&GroupDescriptor::U1, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }
}
