//! Exact qubit geometry over the field Q(√3).
//!
//! Bloch vectors of the equatorial 60° triple have coordinates in Q(√3), so
//! mixtures of those states can be checked without rounding.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::scalar::{format_rational, Scalar};

/// `a + b·√3` with rational `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surd3 {
    pub a: BigRational,
    pub b: BigRational,
}

impl Surd3 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        Self { a, b: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * 3f64.sqrt()
    }
}

impl fmt::Display for Surd3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.a)),
            (true, false) => write!(f, "{}√3", format_rational(&self.b)),
            (false, false) => write!(f, "{} + {}√3", format_rational(&self.a), format_rational(&self.b)),
        }
    }
}

impl Serialize for Surd3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<BigRational> for Surd3 {
    fn from(a: BigRational) -> Self {
        Self::rational(a)
    }
}

impl Add for Surd3 {
    type Output = Surd3;
    fn add(self, o: Surd3) -> Surd3 {
        Surd3::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Surd3 {
    type Output = Surd3;
    fn sub(self, o: Surd3) -> Surd3 {
        Surd3::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Surd3 {
    type Output = Surd3;
    fn neg(self) -> Surd3 {
        Surd3::new(-self.a, -self.b)
    }
}

impl Mul for Surd3 {
    type Output = Surd3;
    fn mul(self, o: Surd3) -> Surd3 {
        let three = BigRational::from_i64(3);
        Surd3::new(
            &self.a * &o.a + three * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

pub type ExactBloch = [Surd3; 3];

pub fn exact_dot(u: &ExactBloch, v: &ExactBloch) -> Surd3 {
    u.iter()
        .zip(v)
        .fold(Surd3::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn exact_neg(u: &ExactBloch) -> ExactBloch {
    u.clone().map(|x| -x)
}

pub fn exact_to_f64(u: &ExactBloch) -> [f64; 3] {
    [u[0].to_f64(), u[1].to_f64(), u[2].to_f64()]
}

/// Exact Bloch data for a family of qubit states and a common target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactQubitGeometry {
    /// Bloch vector of the target density operator.
    pub target: ExactBloch,
    /// Bloch vector of each pure state.
    pub states: Vec<ExactBloch>,
}

impl ExactQubitGeometry {
    pub fn is_pure(&self, i: usize) -> bool {
        exact_dot(&self.states[i], &self.states[i]) == Surd3::one()
    }

    pub fn orthogonal(&self, i: usize, j: usize) -> bool {
        self.states[i] == exact_neg(&self.states[j])
    }

    /// Exact check that `Σ w_k ½(I + r_k·σ) = ½(I + target·σ)`.
    pub fn mixes_to_target(&self, terms: &[(usize, BigRational)]) -> bool {
        let total = terms
            .iter()
            .fold(BigRational::zero(), |acc, (_, w)| acc + w);
        if !total.is_one() {
            return false;
        }
        let mut sum: ExactBloch = [Surd3::zero(), Surd3::zero(), Surd3::zero()];
        for (i, w) in terms {
            let w = Surd3::rational(w.clone());
            for (k, x) in self.states[*i].iter().enumerate() {
                sum[k] = sum[k].clone() + w.clone() * x.clone();
            }
        }
        sum == self.target
    }
}
