//! Irreducible unitary representations and their characters.
//!
//! The inventory is finite: U(1) labels `|m| <= 8` (per torus coordinate),
//! SU(2) spins `j <= 5` for characters and `j <= 1` for matrices.

use std::f64::consts::TAU;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{GroupDescriptor, GroupElement, Quat};
use crate::error::{Error, Result};

pub const MAX_U1_LABEL: i64 = 8;
/// Largest `2j` with a character.
pub const MAX_TWO_J: u32 = 10;
/// Largest `2j` with a matrix realization.
pub const MAX_MATRIX_TWO_J: u32 = 2;

pub type UnitaryMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Representation {
    /// `e^{2 pi i m theta}`.
    U1(i64),
    /// `e^{2 pi i <m, theta>}`.
    Torus(Vec<i64>),
    /// Spin `j = two_j / 2`, dimension `two_j + 1`.
    Su2 { two_j: u32 },
    /// Outer tensor product of component representations.
    Product(Vec<Representation>),
}

impl Representation {
    pub fn spin_half() -> Self {
        Representation::Su2 { two_j: 1 }
    }

    pub fn spin_one() -> Self {
        Representation::Su2 { two_j: 2 }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Representation::U1(_) | Representation::Torus(_) => 1,
            Representation::Su2 { two_j } => *two_j as usize + 1,
            Representation::Product(parts) => parts.iter().map(Representation::dimension).product(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Representation::U1(m) => *m == 0,
            Representation::Torus(v) => v.iter().all(|m| *m == 0),
            Representation::Su2 { two_j } => *two_j == 0,
            Representation::Product(parts) => parts.iter().all(Representation::is_trivial),
        }
    }

    pub fn fits(&self, desc: &GroupDescriptor) -> bool {
        match (self, desc) {
            (Representation::U1(_), GroupDescriptor::U1) | (Representation::Su2 { .. }, GroupDescriptor::Su2) => true,
            (Representation::Torus(v), GroupDescriptor::Torus(m)) => v.len() == *m,
            (Representation::Product(r), GroupDescriptor::Product(d)) => {
                r.len() == d.len() && r.iter().zip(d).all(|(r, d)| r.fits(d))
            }
            _ => false,
        }
    }

    fn check_label(&self) -> Result<()> {
        let ok = match self {
            Representation::U1(m) => m.abs() <= MAX_U1_LABEL,
            Representation::Torus(v) => v.iter().all(|m| m.abs() <= MAX_U1_LABEL),
            Representation::Su2 { two_j } => *two_j <= MAX_TWO_J,
            Representation::Product(parts) => return parts.iter().try_for_each(Representation::check_label),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnsupportedLabel(self.to_string()))
        }
    }

    /// Parses a label for the given group: an integer for U(1), `:`-separated
    /// integers for a torus, `1/2`-style spins for SU(2), and `*`-separated
    /// component labels for products.
    pub fn parse(desc: &GroupDescriptor, s: &str) -> Result<Representation> {
        let s = s.trim();
        let int = |t: &str| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad representation label '{t}'")));
        let rep = match desc {
            GroupDescriptor::U1 => Representation::U1(int(s)?),
            GroupDescriptor::Torus(m) => {
                let v = s.split(':').map(int).collect::<Result<Vec<_>>>()?;
                if v.len() != *m {
                    return Err(Error::Parse(format!("torus label '{s}' needs {m} entries")));
                }
                Representation::Torus(v)
            }
            GroupDescriptor::Su2 => {
                let two_j = match s.split_once('/') {
                    Some((p, "2")) => int(p)?,
                    Some(_) => return Err(Error::Parse(format!("bad spin '{s}'"))),
                    None => 2 * int(s)?,
                };
                if two_j < 0 {
                    return Err(Error::Parse(format!("negative spin '{s}'")));
                }
                Representation::Su2 { two_j: two_j as u32 }
            }
            GroupDescriptor::Product(parts) => {
                let pieces: Vec<&str> = s.split('*').collect();
                if pieces.len() != parts.len() {
                    return Err(Error::Parse(format!("product label '{s}' needs {} components", parts.len())));
                }
                Representation::Product(parts.iter().zip(pieces).map(|(d, p)| Representation::parse(d, p)).collect::<Result<_>>()?)
            }
        };
        rep.check_label()?;
        Ok(rep)
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::U1(m) => write!(f, "{m}"),
            Representation::Torus(v) => {
                write!(f, "{}", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(":"))
            }
            Representation::Su2 { two_j } if two_j % 2 == 0 => write!(f, "{}", two_j / 2),
            Representation::Su2 { two_j } => write!(f, "{two_j}/2"),
            Representation::Product(parts) => {
                write!(f, "{}", parts.iter().map(ToString::to_string).collect::<Vec<_>>().join("*"))
            }
        }
    }
}

fn label_mismatch(rep: &Representation, x: &GroupElement) -> Error {
    Error::DescriptorMismatch(format!("representation {rep} on {}", x.descriptor()))
}

fn circle(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * turns)
}

/// `U_{two_j}(cos t)`, Chebyshev polynomial of the second kind; equals
/// `sin((2j+1) t) / sin t` and stays regular at `t = 0, pi`.
fn su2_character(two_j: u32, q: &Quat) -> f64 {
    let c = q.w / q.norm();
    let (mut prev, mut cur) = (1.0, 2.0 * c);
    if two_j == 0 {
        return 1.0;
    }
    for _ in 1..two_j {
        let next = 2.0 * c * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Trace of the representation at `x`.
pub fn character(rep: &Representation, x: &GroupElement) -> Result<Complex64> {
    rep.check_label()?;
    match (rep, x) {
        (Representation::U1(m), GroupElement::U1(a)) => Ok(circle(a.times(*m).turns())),
        (Representation::Torus(ms), GroupElement::Torus(v)) if ms.len() == v.len() => {
            let total = ms.iter().zip(v).fold(super::Angle::ZERO, |acc, (m, a)| acc + a.times(*m));
            Ok(circle(total.turns()))
        }
        (Representation::Su2 { two_j }, GroupElement::Su2(q)) => Ok(Complex64::new(su2_character(*two_j, q), 0.0)),
        (Representation::Product(rs), GroupElement::Product(xs)) if rs.len() == xs.len() => {
            rs.iter().zip(xs).try_fold(Complex64::new(1.0, 0.0), |acc, (r, x)| character(r, x).map(|c| acc * c))
        }
        _ => Err(label_mismatch(rep, x)),
    }
}

/// Matrix realization, available for dimension at most 3.
pub fn rep_matrix(rep: &Representation, x: &GroupElement) -> Result<UnitaryMatrix> {
    rep.check_label()?;
    if rep.dimension() > 3 {
        return Err(Error::UnsupportedLabel(format!("{rep} (no matrix realization above dimension 3)")));
    }
    match (rep, x) {
        (Representation::U1(_), GroupElement::U1(_)) | (Representation::Torus(_), GroupElement::Torus(_)) => {
            Ok(DMatrix::from_element(1, 1, character(rep, x)?))
        }
        (Representation::Su2 { two_j }, GroupElement::Su2(q)) => Ok(match two_j {
            0 => DMatrix::identity(1, 1),
            1 => spin_half_matrix(q),
            2 => rotation_matrix(q),
            _ => return Err(Error::UnsupportedLabel(rep.to_string())),
        }),
        (Representation::Product(rs), GroupElement::Product(xs)) if rs.len() == xs.len() => {
            rs.iter().zip(xs).try_fold(DMatrix::identity(1, 1), |acc: UnitaryMatrix, (r, x)| {
                rep_matrix(r, x).map(|m| acc.kronecker(&m))
            })
        }
        _ => Err(label_mismatch(rep, x)),
    }
}

/// `[[w + ix, y + iz], [-y + iz, w - ix]]`.
fn spin_half_matrix(q: &Quat) -> UnitaryMatrix {
    let c = Complex64::new;
    DMatrix::from_row_slice(2, 2, &[c(q.w, q.x), c(q.y, q.z), c(-q.y, q.z), c(q.w, -q.x)])
}

/// Rotation `v -> q v q*` of the imaginary quaternions.
fn rotation_matrix(q: &Quat) -> UnitaryMatrix {
    let (w, x, y, z) = (q.w, q.x, q.y, q.z);
    let r = [
        1.0 - 2.0 * (y * y + z * z),
        2.0 * (x * y - z * w),
        2.0 * (x * z + y * w),
        2.0 * (x * y + z * w),
        1.0 - 2.0 * (x * x + z * z),
        2.0 * (y * z - x * w),
        2.0 * (x * z - y * w),
        2.0 * (y * z + x * w),
        1.0 - 2.0 * (x * x + y * y),
    ];
    DMatrix::from_row_slice(3, 3, &r.map(|v| Complex64::new(v, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::super::{haar_sample, Angle, GroupOp};
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn su2(t: f64) -> GroupElement {
        GroupElement::Su2(Quat::new(t.cos(), t.sin(), 0.0, 0.0))
    }

    #[test]
    fn characters_at_identity_are_dimensions() {
        let e = GroupElement::identity(&GroupDescriptor::Su2);
        for two_j in 0..=MAX_TWO_J {
            let chi = character(&Representation::Su2 { two_j }, &e).unwrap();
            assert!((chi.re - (two_j + 1) as f64).abs() < 1e-12);
        }
        let e = GroupElement::identity(&GroupDescriptor::U1);
        assert_eq!(character(&Representation::U1(3), &e).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn known_values() {
        let chi = character(&Representation::spin_half(), &su2(std::f64::consts::FRAC_PI_2)).unwrap();
        assert!(chi.norm() < 1e-15);
        let chi = character(&Representation::U1(1), &GroupElement::U1(Angle::from_fraction(1, 4))).unwrap();
        assert!((chi - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        // j = 1 at the antipode -1 is 3
        let chi = character(&Representation::spin_one(), &su2(std::f64::consts::PI)).unwrap();
        assert!((chi.re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn character_matches_sine_ratio() {
        for two_j in 0..=MAX_TWO_J {
            for i in 1..50 {
                let t = i as f64 * 0.06;
                let expected = ((two_j + 1) as f64 * t).sin() / t.sin();
                let chi = character(&Representation::Su2 { two_j }, &su2(t)).unwrap();
                assert!((chi.re - expected).abs() < 1e-10, "two_j {two_j} t {t}");
            }
        }
    }

    #[test]
    fn matrices_trace_to_characters() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let reps = [
            (GroupDescriptor::Su2, Representation::spin_half()),
            (GroupDescriptor::Su2, Representation::spin_one()),
            (GroupDescriptor::U1, Representation::U1(-3)),
            (GroupDescriptor::Torus(2), Representation::Torus(vec![1, 2])),
            (
                GroupDescriptor::Product(vec![GroupDescriptor::U1, GroupDescriptor::Su2]),
                Representation::Product(vec![Representation::U1(1), Representation::spin_half()]),
            ),
        ];
        for (desc, rep) in reps {
            for _ in 0..1000 {
                let (g, h) = (haar_sample(&desc, &mut rng), haar_sample(&desc, &mut rng));
                let (mg, mh) = (rep_matrix(&rep, &g).unwrap(), rep_matrix(&rep, &h).unwrap());
                let d = rep.dimension();
                assert!((&mg * mg.adjoint() - UnitaryMatrix::identity(d, d)).norm() < 1e-12);
                assert!((rep_matrix(&rep, &g.op(&h)).unwrap() - &mg * &mh).norm() < 1e-10);
                assert!((mg.trace() - character(&rep, &g).unwrap()).norm() < 1e-12);
                let a = haar_sample(&desc, &mut rng);
                let conj = g.conjugated_by(&a).unwrap();
                assert!((character(&rep, &conj).unwrap() - character(&rep, &g).unwrap()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn spin_half_eigenvalues() {
        let t = 0.7;
        let m = rep_matrix(&Representation::spin_half(), &su2(t)).unwrap();
        assert!((m[(0, 0)] - Complex64::from_polar(1.0, t)).norm() < 1e-15);
        assert!((m[(1, 1)] - Complex64::from_polar(1.0, -t)).norm() < 1e-15);
        let r = rep_matrix(&Representation::spin_one(), &su2(t)).unwrap();
        assert!((r.trace().re - (1.0 + 2.0 * (2.0 * t).cos())).abs() < 1e-14);
    }

    #[test]
    fn inventory_limits() {
        let e = GroupElement::identity(&GroupDescriptor::Su2);
        assert!(matches!(rep_matrix(&Representation::Su2 { two_j: 3 }, &e), Err(Error::UnsupportedLabel(_))));
        assert!(matches!(character(&Representation::Su2 { two_j: 11 }, &e), Err(Error::UnsupportedLabel(_))));
        assert!(matches!(Representation::parse(&GroupDescriptor::U1, "9"), Err(Error::UnsupportedLabel(_))));
        assert_eq!(Representation::parse(&GroupDescriptor::Su2, "1/2").unwrap(), Representation::spin_half());
        assert_eq!(Representation::parse(&GroupDescriptor::Su2, "1").unwrap(), Representation::spin_one());
        assert!(character(&Representation::U1(1), &e).is_err());
    }
}
