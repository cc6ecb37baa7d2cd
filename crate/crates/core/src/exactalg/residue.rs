use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid over the integers: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn gcd_ext(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// An element of `Z/N`, always stored reduced into `[0, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Panics if `modulus < 2`.
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let value = value.rem_euclid(modulus as i64) as u64;
        Residue { value, modulus }
    }

    pub fn from_u64(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        Residue {
            value: value % modulus,
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Additive order of the residue in `Z/N`.
    pub fn order(self) -> u64 {
        self.modulus / gcd(self.value, self.modulus)
    }

    pub fn is_unit(self) -> bool {
        gcd(self.value, self.modulus) == 1
    }

    pub fn inverse(self) -> Option<Residue> {
        let (g, x, _) = gcd_ext(self.value as i64, self.modulus as i64);
        (g == 1).then(|| Residue::new(x, self.modulus))
    }

    fn check(self, other: Residue) {
        assert_eq!(self.modulus, other.modulus, "mixed moduli");
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue::from_u64(self.value + rhs.value, self.modulus)
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue::from_u64(self.value + self.modulus - rhs.value, self.modulus)
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue::from_u64(self.value * rhs.value, self.modulus)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue::from_u64(self.modulus - self.value, self.modulus)
    }
}
