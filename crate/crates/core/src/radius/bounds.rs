//! Closed-form bounds on the shortest 2-radius sequence length, plus the
//! reference values they are compared against.
//!
//! The rational-valued bounds are generic over any numeric type that can be
//! built from integers; use [`crate::Rational`] for exact arithmetic.

use num_traits::{FromPrimitive, Num};

use crate::design::covering_number;
use crate::error::{Error, Result};

fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn lift<T: Num + FromPrimitive>(v: usize) -> T {
    T::from_usize(v).expect("value representable in target type")
}

/// Counting lower bound on the shortest 2-radius sequence of order `n`.
pub fn bound_l(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::Domain(format!("bound needs n >= 2, got {n}")));
    }
    let extra = match n % 4 {
        0 => n + 4,
        1 => 8,
        2 => 3 * n,
        _ => 2 * n,
    };
    let quad = 2 * pairs(n) + extra;
    debug_assert_eq!(quad % 4, 0);
    Ok(quad / 4)
}

/// Exact length of the shortest 1-radius sequence.
pub fn bound_f1(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::Domain(format!("bound needs n >= 2, got {n}")));
    }
    Ok(if n % 2 == 1 {
        pairs(n) + 1
    } else {
        pairs(n) + n / 2
    })
}

/// Length of the sequence induced by a 2-shift universal cycle of a
/// minimum covering.
pub fn bound_2c1(n: usize) -> Result<usize> {
    Ok(2 * covering_number(n)? + 1)
}

/// The upper bound `n²/3 + n`.
pub fn bound_gilkerson<T: Num + FromPrimitive>(n: usize) -> Result<T> {
    if n < 3 {
        return Err(Error::Domain(format!("bound needs n >= 3, got {n}")));
    }
    Ok(lift::<T>(n * n) / lift(3) + lift(n))
}

/// `bound_gilkerson(n) − bound_2c1(n)`, evaluated directly.
pub fn gap<T: Num + FromPrimitive>(n: usize) -> Result<T> {
    Ok(bound_gilkerson::<T>(n)? - lift(bound_2c1(n)?))
}

/// Closed form of [`gap`] by residue modulo 6.
pub fn gap_piecewise<T: Num + FromPrimitive>(n: usize) -> Result<T> {
    if n < 3 {
        return Err(Error::Domain(format!("bound needs n >= 3, got {n}")));
    }
    let three = || lift::<T>(3);
    Ok(match n % 6 {
        1 | 3 => lift::<T>(4 * n) / three() - T::one(),
        2 | 4 => lift::<T>(n) - lift::<T>(5) / three(),
        5 => lift::<T>(4 * n - 7) / three(),
        _ => lift::<T>(n) - T::one(),
    })
}

/// Known value or interval for the shortest 2-radius sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct F2Known {
    pub n: usize,
    pub lo: usize,
    pub hi: usize,
}

impl F2Known {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: usize) -> bool {
        (self.lo..=self.hi).contains(&v)
    }
}

const fn known(n: usize, lo: usize, hi: usize) -> F2Known {
    F2Known { n, lo, hi }
}

/// State of knowledge for orders 2 through 18.
pub const F2_KNOWN: [F2Known; 17] = [
    known(2, 2, 2),
    known(3, 3, 3),
    known(4, 5, 5),
    known(5, 7, 7),
    known(6, 12, 12),
    known(7, 14, 14),
    known(8, 17, 17),
    known(9, 20, 21),
    known(10, 30, 30),
    known(11, 33, 33),
    known(12, 37, 37),
    known(13, 41, 42),
    known(14, 56, 56),
    known(15, 60, 60),
    known(16, 65, 65),
    known(17, 70, 73),
    known(18, 90, 90),
];

/// Reference lengths for `9 ≤ n ≤ 44`: `(n, number-theoretic bound,
/// number-theoretic construction, covering construction)`.
pub const TABLE4: [(usize, usize, usize, usize); 36] = [
    (9, 346, 37, 25),
    (10, 410, 49, 35),
    (11, 479, 39, 39),
    (12, 552, 53, 49),
    (13, 629, 45, 53),
    (14, 711, 62, 67),
    (15, 798, 80, 71),
    (16, 888, 99, 87),
    (17, 983, 76, 93),
    (18, 1082, 98, 109),
    (19, 1185, 105, 115),
    (20, 1292, 129, 135),
    (21, 1403, 158, 141),
    (22, 1518, 185, 163),
    (23, 1638, 150, 171),
    (24, 1761, 179, 193),
    (25, 1888, 170, 201),
    (26, 2019, 202, 227),
    (27, 2153, 256, 235),
    (28, 2292, 290, 263),
    (29, 2434, 217, 273),
    (30, 2580, 254, 301),
    (31, 2730, 297, 311),
    (32, 2884, 336, 343),
    (33, 3041, 382, 353),
    (34, 3202, 424, 387),
    (35, 3366, 361, 399),
    (36, 3535, 405, 433),
    (37, 3707, 351, 445),
    (38, 3882, 398, 483),
    (39, 4061, 446, 495),
    (40, 4244, 495, 535),
    (41, 4430, 430, 549),
    (42, 4620, 482, 589),
    (43, 4813, 540, 603),
    (44, 5010, 594, 647),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn lower_bound_cases() {
        assert_eq!(bound_l(8).unwrap(), 17);
        assert_eq!(bound_l(12).unwrap(), 37);
        assert_eq!(bound_l(9).unwrap(), 20);
        assert!(bound_l(1).is_err());
    }

    #[test]
    fn ghosh_cases() {
        assert_eq!(bound_f1(3).unwrap(), 4);
        assert_eq!(bound_f1(4).unwrap(), 8);
        assert_eq!(bound_f1(5).unwrap(), 11);
    }

    #[test]
    fn covering_bound_and_gap() {
        assert_eq!(bound_2c1(9).unwrap(), 25);
        assert_eq!(bound_2c1(33).unwrap(), 353);
        assert_eq!(gap::<Rational>(12).unwrap(), Rational::from_integer(11));
        assert_eq!(
            bound_gilkerson::<Rational>(4).unwrap(),
            Rational::new(28, 3)
        );
        assert_eq!(gap_piecewise::<f64>(12).unwrap(), 11.0);
    }

    #[test]
    fn known_intervals() {
        assert!(!F2_KNOWN[7].is_exact());
        assert!(F2_KNOWN[7].contains(21));
        for k in F2_KNOWN {
            assert!(bound_l(k.n).unwrap() <= k.lo);
        }
    }
}
