//! Truncated power series with exact rational coefficients and 2x2
//! matrices of them, as needed for return/transit walk generating
//! functions.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Power series in one variable truncated at order `T`: coefficients
/// `c[0..=T]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    pub coefficients: Vec<BigRational>,
}

impl Series {
    pub fn zero(truncation: usize) -> Self {
        Series { coefficients: vec![BigRational::zero(); truncation + 1] }
    }

    pub fn constant(value: BigRational, truncation: usize) -> Self {
        let mut s = Series::zero(truncation);
        s.coefficients[0] = value;
        s
    }

    pub fn one(truncation: usize) -> Self {
        Series::constant(BigRational::one(), truncation)
    }

    /// The monomial y.
    pub fn y(truncation: usize) -> Self {
        let mut s = Series::zero(truncation);
        if truncation >= 1 {
            s.coefficients[1] = BigRational::one();
        }
        s
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_zero())
    }

    pub fn coefficient(&self, t: usize) -> BigRational {
        self.coefficients.get(t).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Series) -> Series {
        assert_eq!(self.truncation(), other.truncation());
        Series {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        assert_eq!(self.truncation(), other.truncation());
        Series {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Series {
        Series { coefficients: self.coefficients.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, k: &BigRational) -> Series {
        Series { coefficients: self.coefficients.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, other: &Series) -> Series {
        assert_eq!(self.truncation(), other.truncation());
        let t = self.truncation();
        let mut out = Series::zero(t);
        for i in 0..=t {
            if self.coefficients[i].is_zero() {
                continue;
            }
            for j in 0..=(t - i) {
                if other.coefficients[j].is_zero() {
                    continue;
                }
                let prod = &self.coefficients[i] * &other.coefficients[j];
                out.coefficients[i + j] += prod;
            }
        }
        out
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn reciprocal(&self) -> Series {
        let t = self.truncation();
        let c0 = &self.coefficients[0];
        assert!(!c0.is_zero(), "series with zero constant term has no reciprocal");
        let inv0 = c0.recip();
        let mut out = Series::zero(t);
        out.coefficients[0] = inv0.clone();
        for n in 1..=t {
            // c0 * out[n] = - sum_{k=1..n} self[k] * out[n-k]
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if self.coefficients[k].is_zero() {
                    continue;
                }
                acc += &self.coefficients[k] * &out.coefficients[n - k];
            }
            out.coefficients[n] = -acc * &inv0;
        }
        out
    }
}

/// A 2x2 matrix of truncated series; index 1 = the `I` side, 2 = `O`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesMatrix2 {
    pub entries: [[Series; 2]; 2],
}

impl SeriesMatrix2 {
    pub fn zero(truncation: usize) -> Self {
        let z = Series::zero(truncation);
        SeriesMatrix2 { entries: [[z.clone(), z.clone()], [z.clone(), z]] }
    }

    pub fn identity(truncation: usize) -> Self {
        let mut m = SeriesMatrix2::zero(truncation);
        m.entries[0][0] = Series::one(truncation);
        m.entries[1][1] = Series::one(truncation);
        m
    }

    /// Scalar matrix k*I.
    pub fn scalar(k: &BigRational, truncation: usize) -> Self {
        let mut m = SeriesMatrix2::zero(truncation);
        m.entries[0][0] = Series::constant(k.clone(), truncation);
        m.entries[1][1] = Series::constant(k.clone(), truncation);
        m
    }

    /// The base first-return/first-transit matrix [[0, y], [y, 0]].
    pub fn base_melon(truncation: usize) -> Self {
        let mut m = SeriesMatrix2::zero(truncation);
        m.entries[0][1] = Series::y(truncation);
        m.entries[1][0] = Series::y(truncation);
        m
    }

    /// Matrix unit E^{ab} (1-based indices as in the recurrence).
    pub fn unit(a: usize, b: usize, truncation: usize) -> Self {
        let mut m = SeriesMatrix2::zero(truncation);
        m.entries[a - 1][b - 1] = Series::one(truncation);
        m
    }

    pub fn truncation(&self) -> usize {
        self.entries[0][0].truncation()
    }

    pub fn add(&self, other: &SeriesMatrix2) -> SeriesMatrix2 {
        let mut out = SeriesMatrix2::zero(self.truncation());
        for r in 0..2 {
            for c in 0..2 {
                out.entries[r][c] = self.entries[r][c].add(&other.entries[r][c]);
            }
        }
        out
    }

    pub fn sub(&self, other: &SeriesMatrix2) -> SeriesMatrix2 {
        let mut out = SeriesMatrix2::zero(self.truncation());
        for r in 0..2 {
            for c in 0..2 {
                out.entries[r][c] = self.entries[r][c].sub(&other.entries[r][c]);
            }
        }
        out
    }

    pub fn mul(&self, other: &SeriesMatrix2) -> SeriesMatrix2 {
        let t = self.truncation();
        let mut out = SeriesMatrix2::zero(t);
        for r in 0..2 {
            for c in 0..2 {
                let a = self.entries[r][0].mul(&other.entries[0][c]);
                let b = self.entries[r][1].mul(&other.entries[1][c]);
                out.entries[r][c] = a.add(&b);
            }
        }
        out
    }

    /// Inverse via the adjugate; requires an invertible determinant
    /// constant term.
    pub fn inverse(&self) -> SeriesMatrix2 {
        let [[a, b], [c, d]] = &self.entries;
        let det = a.mul(d).sub(&b.mul(c));
        let det_inv = det.reciprocal();
        let t = self.truncation();
        let mut out = SeriesMatrix2::zero(t);
        out.entries[0][0] = d.mul(&det_inv);
        out.entries[0][1] = b.neg().mul(&det_inv);
        out.entries[1][0] = c.neg().mul(&det_inv);
        out.entries[1][1] = a.mul(&det_inv);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn geometric_series_reciprocal() {
        // 1/(1 - y) = 1 + y + y^2 + ...
        let one = Series::one(8);
        let denom = one.sub(&Series::y(8));
        let inv = denom.reciprocal();
        for t in 0..=8 {
            assert_eq!(inv.coefficient(t), q(1, 1));
        }
        assert_eq!(denom.mul(&inv), Series::one(8));
    }

    #[test]
    fn base_melon_full_return_is_even_geometric() {
        // P = (I - P1)^{-1} with P1 = [[0,y],[y,0]] gives P^{II} = 1/(1-y^2).
        let t = 10;
        let p1 = SeriesMatrix2::base_melon(t);
        let p = SeriesMatrix2::identity(t).sub(&p1).inverse();
        for k in 0..=t {
            let expect = if k % 2 == 0 { q(1, 1) } else { q(0, 1) };
            assert_eq!(p.entries[0][0].coefficient(k), expect, "t = {k}");
        }
        // Transit P^{IO} = y/(1-y^2): odd powers only.
        for k in 0..=t {
            let expect = if k % 2 == 1 { q(1, 1) } else { q(0, 1) };
            assert_eq!(p.entries[0][1].coefficient(k), expect);
        }
    }

    #[test]
    fn matrix_inverse_round_trip() {
        let t = 6;
        let mut m = SeriesMatrix2::scalar(&q(4, 1), t);
        m.entries[0][1] = Series::y(t).scale(&q(-3, 1));
        m.entries[1][0] = Series::y(t);
        let inv = m.inverse();
        let id = m.mul(&inv);
        assert_eq!(id, SeriesMatrix2::identity(t));
    }
}
