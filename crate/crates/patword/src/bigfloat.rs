//! Minimal arbitrary-precision binary floating point.
//!
//! Values are `mantissa * 2^exp` with a big-integer mantissa kept at a fixed
//! working precision (truncating rounding). This exists because the
//! asymptotics module divides 300-digit integers by 12^300-sized powers —
//! far outside f64 range — and needs logs, exponentials and square roots at
//! around sixty decimal digits. Nothing here tries to be IEEE; errors are
//! a few ulps per operation, which at 256 bits of precision is irrelevant
//! for the extrapolation targets.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Default working precision in bits (~77 decimal digits).
pub const DEFAULT_PRECISION: u64 = 256;

#[derive(Debug, Clone)]
pub struct BigFloat {
    mantissa: BigInt,
    exp: i64,
    prec: u64,
}

impl BigFloat {
    pub fn zero(prec: u64) -> Self {
        BigFloat {
            mantissa: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn from_bigint(x: &BigInt, prec: u64) -> Self {
        BigFloat {
            mantissa: x.clone(),
            exp: 0,
            prec,
        }
        .normalized()
    }

    pub fn from_i64(x: i64, prec: u64) -> Self {
        Self::from_bigint(&BigInt::from(x), prec)
    }

    /// num/den as a float; den must be nonzero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u64) -> Self {
        assert!(!den.is_zero(), "division by zero");
        let shift = prec as i64 + den.bits() as i64 - num.bits() as i64 + 8;
        let scaled = if shift >= 0 {
            num << shift as u64
        } else {
            num >> (-shift) as u64
        };
        BigFloat {
            mantissa: scaled / den,
            exp: -shift,
            prec,
        }
        .normalized()
    }

    pub fn precision(&self) -> u64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    // Keep the mantissa at most `prec + 8` bits; truncation rounding.
    fn normalized(mut self) -> Self {
        let bits = self.mantissa.bits();
        let cap = self.prec + 8;
        if bits > cap {
            let drop = (bits - cap) as i64;
            self.mantissa >>= drop as u64;
            self.exp += drop;
        }
        if self.mantissa.is_zero() {
            self.exp = 0;
        }
        self
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mantissa: -&self.mantissa,
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.exp <= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.exp - lo.exp) as u64;
        // Aligning to the smaller exponent is exact; normalization trims.
        let cap = prec + 16;
        if shift > cap + hi.mantissa.bits() {
            // The smaller addend is below one ulp of the larger.
            return hi.clone().normalized();
        }
        BigFloat {
            mantissa: (&hi.mantissa << shift) + &lo.mantissa,
            exp: lo.exp,
            prec,
        }
        .normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        BigFloat {
            mantissa: &self.mantissa * &other.mantissa,
            exp: self.exp + other.exp,
            prec: self.prec.max(other.prec),
        }
        .normalized()
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero");
        let prec = self.prec.max(other.prec);
        let shift = prec + 16 + other.mantissa.bits();
        let num = &self.mantissa << shift;
        BigFloat {
            mantissa: num / &other.mantissa,
            exp: self.exp - other.exp - shift as i64,
            prec,
        }
        .normalized()
    }

    pub fn powi(&self, n: i64) -> Self {
        if n == 0 {
            return BigFloat::from_i64(1, self.prec);
        }
        let mut base = if n < 0 {
            BigFloat::from_i64(1, self.prec).div(self)
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut acc = BigFloat::from_i64(1, self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Square root by integer Newton iteration on a widened mantissa.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative value");
        if self.is_zero() {
            return self.clone();
        }
        // Make mantissa * 2^exp with even exp and a wide mantissa.
        let widen = 2 * (self.prec + 16);
        let mut exp = self.exp - widen as i64;
        let mut m = &self.mantissa << widen;
        if exp % 2 != 0 {
            m <<= 1u32;
            exp -= 1;
        }
        BigFloat {
            mantissa: m.sqrt(),
            exp: exp / 2,
            prec: self.prec,
        }
        .normalized()
    }

    /// Compare by value.
    pub fn cmp_value(&self, other: &Self) -> std::cmp::Ordering {
        let diff = self.sub(other);
        if diff.is_zero() {
            std::cmp::Ordering::Equal
        } else if diff.is_negative() {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits();
        let (top, extra_exp) = if bits > 63 {
            let drop = bits - 63;
            ((&self.mantissa >> drop).to_string(), drop as i64)
        } else {
            (self.mantissa.to_string(), 0)
        };
        let top: f64 = top.parse().expect("i64-range integer parses");
        top * 2f64.powi((self.exp + extra_exp) as i32)
    }

    /// Natural logarithm. Argument must be positive.
    pub fn ln(&self) -> Self {
        assert!(
            !self.is_negative() && !self.is_zero(),
            "ln needs a positive value"
        );
        let prec = self.prec;
        // Split off the binary exponent: self = m * 2^k with m in [1, 2).
        let bits = self.mantissa.bits() as i64;
        let k = self.exp + bits - 1;
        let m = BigFloat {
            mantissa: self.mantissa.clone(),
            exp: -(bits - 1),
            prec,
        };
        // ln m = 2 atanh((m-1)/(m+1)); t <= 1/3 so the series converges fast.
        let one = BigFloat::from_i64(1, prec);
        let t = m.sub(&one).div(&m.add(&one));
        let mut acc = t.clone();
        let t2 = t.mul(&t);
        let mut term = t;
        let mut denom = 1i64;
        loop {
            term = term.mul(&t2);
            denom += 2;
            let inc = term.div(&BigFloat::from_i64(denom, prec));
            if inc.is_zero() || inc.mantissa.bits() as i64 + inc.exp < acc.exp - prec as i64 - 16 {
                break;
            }
            acc = acc.add(&inc);
        }
        let ln_m = acc.add(&acc); // 2 * atanh
        ln_m.add(&ln2(prec).mul(&BigFloat::from_i64(k, prec)))
    }

    /// Exponential, by argument reduction against ln 2 and a Taylor tail.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        if self.is_zero() {
            return BigFloat::from_i64(1, prec);
        }
        let l2 = ln2(prec);
        let k_float = self.div(&l2);
        let k = k_float.to_f64().round() as i64;
        let r = self.sub(&l2.mul(&BigFloat::from_i64(k, prec)));
        // |r| <= ln2/2; Taylor sum of exp(r).
        let one = BigFloat::from_i64(1, prec);
        let mut acc = one.clone();
        let mut term = one;
        let mut i = 1i64;
        loop {
            term = term.mul(&r).div(&BigFloat::from_i64(i, prec));
            if term.is_zero() || term.mantissa.bits() as i64 + term.exp < acc.exp - prec as i64 - 16
            {
                break;
            }
            acc = acc.add(&term);
            i += 1;
        }
        BigFloat {
            mantissa: acc.mantissa,
            exp: acc.exp + k,
            prec,
        }
        .normalized()
    }
}

/// ln 2 = 2 atanh(1/3).
pub fn ln2(prec: u64) -> BigFloat {
    let third = BigFloat::from_ratio(&BigInt::one(), &BigInt::from(3), prec + 32);
    let mut acc = third.clone();
    let t2 = third.mul(&third);
    let mut term = third;
    let mut denom = 1i64;
    loop {
        term = term.mul(&t2);
        denom += 2;
        let inc = term.div(&BigFloat::from_i64(denom, prec + 32));
        if inc.is_zero() || inc.mantissa.bits() as i64 + inc.exp < -(prec as i64) - 48 {
            break;
        }
        acc = acc.add(&inc);
    }
    let mut result = acc.add(&acc);
    result.prec = prec;
    result.normalized()
}

/// pi via Machin's formula: 16 atan(1/5) - 4 atan(1/239).
pub fn pi(prec: u64) -> BigFloat {
    let work = prec + 32;
    let a5 = atan_inv(5, work);
    let a239 = atan_inv(239, work);
    let mut result = a5
        .mul(&BigFloat::from_i64(16, work))
        .sub(&a239.mul(&BigFloat::from_i64(4, work)));
    result.prec = prec;
    result.normalized()
}

// atan(1/q) by the alternating Taylor series.
fn atan_inv(q: i64, prec: u64) -> BigFloat {
    let x = BigFloat::from_ratio(&BigInt::one(), &BigInt::from(q), prec);
    let x2 = x.mul(&x);
    let mut term = x.clone();
    let mut acc = x;
    let mut k = 1i64;
    let mut sign = -1i64;
    loop {
        term = term.mul(&x2);
        k += 2;
        let inc = term.div(&BigFloat::from_i64(sign * k, prec));
        if term.is_zero() || term.mantissa.bits() as i64 + term.exp < -(prec as i64) - 48 {
            break;
        }
        acc = acc.add(&inc);
        sign = -sign;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 256;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn ratio_and_to_f64() {
        let x = BigFloat::from_ratio(&BigInt::from(1), &BigInt::from(3), P);
        assert!(close(x.to_f64(), 1.0 / 3.0, 1e-15));
        let y = BigFloat::from_ratio(&BigInt::from(-7), &BigInt::from(2), P);
        assert!(close(y.to_f64(), -3.5, 1e-15));
    }

    #[test]
    fn arithmetic_against_f64() {
        let a = BigFloat::from_ratio(&BigInt::from(355), &BigInt::from(113), P);
        let b = BigFloat::from_ratio(&BigInt::from(22), &BigInt::from(7), P);
        assert!(close(a.add(&b).to_f64(), 355.0 / 113.0 + 22.0 / 7.0, 1e-14));
        assert!(close(a.sub(&b).to_f64(), 355.0 / 113.0 - 22.0 / 7.0, 1e-10));
        assert!(close(a.mul(&b).to_f64(), 355.0 / 113.0 * 22.0 / 7.0, 1e-14));
        assert!(close(
            a.div(&b).to_f64(),
            (355.0 / 113.0) / (22.0 / 7.0),
            1e-14
        ));
    }

    #[test]
    fn huge_powers_stay_in_range() {
        // 12^300 overflows f64; the float form keeps the exponent symbolic.
        let twelve = BigFloat::from_i64(12, P);
        let p = twelve.powi(300);
        let back = p.ln().to_f64();
        assert!(close(back, 300.0 * 12f64.ln(), 1e-12));
        let inv = twelve.powi(-300);
        assert!(close(p.mul(&inv).to_f64(), 1.0, 1e-12));
    }

    #[test]
    fn sqrt_matches_f64() {
        for v in [2i64, 3, 7, 21, 1000003] {
            let x = BigFloat::from_i64(v, P).sqrt();
            assert!(close(x.to_f64(), (v as f64).sqrt(), 1e-14), "sqrt({v})");
        }
        let s = BigFloat::from_i64(2, P).sqrt();
        assert!(close(s.mul(&s).to_f64(), 2.0, 1e-14));
    }

    #[test]
    fn ln_and_exp_round_trip() {
        for v in [(3i64, 2i64), (1, 7), (12, 1), (100, 3)] {
            let x = BigFloat::from_ratio(&BigInt::from(v.0), &BigInt::from(v.1), P);
            assert!(close(
                x.ln().to_f64(),
                (v.0 as f64 / v.1 as f64).ln(),
                1e-13
            ));
            assert!(close(x.ln().exp().to_f64(), x.to_f64(), 1e-13));
        }
        assert!(close(
            BigFloat::from_i64(1, P).exp().to_f64(),
            std::f64::consts::E,
            1e-14
        ));
    }

    #[test]
    fn pi_matches_f64_constant() {
        assert!(close(pi(P).to_f64(), std::f64::consts::PI, 1e-15));
        assert!(close(ln2(P).to_f64(), std::f64::consts::LN_2, 1e-15));
    }

    #[test]
    fn big_integer_to_float_does_not_overflow() {
        // A 320-digit integer must convert with its magnitude intact.
        let big: BigInt = BigInt::from(10).pow(320u32) + BigInt::from(12345);
        let x = BigFloat::from_bigint(&big, P);
        assert!(close(x.ln().to_f64(), 320.0 * 10f64.ln(), 1e-12));
    }
}
