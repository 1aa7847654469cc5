//! Directed rational enclosures of irrational quantities such as `m^(1/(k+1))`
//! or `sqrt(k)`.
//!
//! An [`Enclosure`] holds `lo <= x <= hi`. Rational roots are detected and
//! returned exactly (`lo == hi`); otherwise the endpoints are dyadic and the
//! relative width `(hi - lo) / lo` is below `1e-12`.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::value::Value;

/// Upper bound on `(hi - lo) / lo`, held as `1 / 2^44 < 1e-12`.
const MIN_ROOT_BITS: u64 = 44;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: Value,
    hi: Value,
}

impl Enclosure {
    pub fn exact(v: Value) -> Self {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn lo(&self) -> &Value {
        &self.lo
    }

    pub fn hi(&self) -> &Value {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Enclosure of `1 / x`. Requires `lo > 0`.
    pub fn recip(&self) -> Enclosure {
        Enclosure {
            lo: self.hi.recip().expect("enclosure must be positive"),
            hi: self.lo.recip().expect("enclosure must be positive"),
        }
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo * &other.lo,
            hi: &self.hi * &other.hi,
        }
    }

    pub fn scale(&self, factor: &Value) -> Enclosure {
        Enclosure {
            lo: &self.lo * factor,
            hi: &self.hi * factor,
        }
    }

    /// True when the relative width is within `tol` (exact enclosures always pass).
    pub fn relative_width_within(&self, tol: &Value) -> bool {
        if self.is_exact() {
            return true;
        }
        match self.hi.checked_sub(&self.lo).and_then(|w| w.checked_div(&self.lo)) {
            Some(rel) => &rel <= tol,
            None => false,
        }
    }
}

/// Encloses `x^(1/r)`.
pub fn root(x: &Value, r: u32) -> Enclosure {
    assert!(r >= 1, "root degree must be positive");
    if r == 1 || x.is_zero() {
        return Enclosure::exact(x.clone());
    }
    let numer = x.numer();
    let denom = x.denom();
    let a = numer.nth_root(r);
    let b = denom.nth_root(r);
    if Pow::pow(&a, r) == *numer && Pow::pow(&b, r) == *denom {
        let v = Value::from_ratio(num_rational::BigRational::new(a, b)).expect("non-negative");
        return Enclosure::exact(v);
    }
    let mut bits: u64 = 64;
    loop {
        let shift = BigInt::one() << (bits as usize * r as usize);
        let scaled = (numer * shift) / denom;
        let q = scaled.nth_root(r);
        if q.bits() > MIN_ROOT_BITS {
            let unit = BigInt::one() << bits as usize;
            let lo = num_rational::BigRational::new(q.clone(), unit.clone());
            let hi = num_rational::BigRational::new(q + BigInt::one(), unit);
            return Enclosure {
                lo: Value::from_ratio(lo).expect("non-negative"),
                hi: Value::from_ratio(hi).expect("non-negative"),
            };
        }
        bits += 64;
    }
}

/// Encloses `x^(p/r)`.
pub fn power(x: &Value, p: u32, r: u32) -> Enclosure {
    root(&x.pow(p), r)
}

/// Encloses `x^(-p/r)`. Requires `x > 0`.
pub fn inverse_power(x: &Value, p: u32, r: u32) -> Enclosure {
    power(x, p, r).recip()
}

pub fn sqrt(x: &Value) -> Enclosure {
    root(x, 2)
}

/// Smallest integer `c` with `c >= x^(p/r)`, computed exactly.
pub fn ceil_power(x: &Value, p: u32, r: u32) -> BigInt {
    let target = x.pow(p);
    let enc = root(&target, r);
    let mut c = enc.hi().ceil();
    // Walk down while the next smaller integer still dominates.
    while c > BigInt::zero() {
        let smaller = &c - BigInt::one();
        let s = Value::from_ratio(num_rational::BigRational::from_integer(smaller.clone()))
            .expect("non-negative");
        if s.pow(r) >= target {
            c = smaller;
        } else {
            break;
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::val;

    #[test]
    fn perfect_powers_are_exact() {
        assert_eq!(root(&val("9"), 2), Enclosure::exact(val("3")));
        assert_eq!(root(&val("8/27"), 3), Enclosure::exact(val("2/3")));
        assert_eq!(inverse_power(&val("4"), 1, 2), Enclosure::exact(val("1/2")));
        assert_eq!(power(&val("8"), 2, 3), Enclosure::exact(val("4")));
    }

    #[test]
    fn irrational_roots_are_tight_and_ordered() {
        let tol = val("1/1000000000000");
        for (x, r) in [("2", 2u32), ("3", 2), ("6", 2), ("1024", 3), ("1/7", 5), ("243", 3)] {
            let e = root(&val(x), r);
            assert!(!e.is_exact());
            assert!(e.lo() < e.hi());
            assert!(e.lo().pow(r) < val(x));
            assert!(e.hi().pow(r) > val(x));
            assert!(e.relative_width_within(&tol), "{x}^(1/{r})");
        }
    }

    #[test]
    fn recip_swaps_endpoints() {
        let e = sqrt(&val("2"));
        let r = e.recip();
        assert!(r.lo() < r.hi());
        assert!(&(r.lo() * e.hi()) == &Value::one());
        assert!(&(r.hi() * e.lo()) == &Value::one());
    }

    #[test]
    fn ceil_power_is_exact() {
        assert_eq!(ceil_power(&val("8"), 1, 3), BigInt::from(2));
        assert_eq!(ceil_power(&val("9"), 1, 3), BigInt::from(3));
        assert_eq!(ceil_power(&val("27"), 1, 3), BigInt::from(3));
        assert_eq!(ceil_power(&val("32"), 3, 5), BigInt::from(8));
        assert_eq!(ceil_power(&val("33"), 3, 5), BigInt::from(9));
    }
}
