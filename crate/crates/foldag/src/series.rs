//! Truncated power series over a [`FieldSpec`], the workhorse of local
//! expansions at places and of the coefficient bookkeeping in the lift tree.

use crate::field::{Fe, FieldSpec};
use crate::poly::UniPoly;

/// Power series truncated to a fixed number of terms (t^0 .. t^(n-1)).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    pub coeffs: Vec<Fe>,
}

impl Series {
    pub fn zero(n: usize) -> Series {
        Series {
            coeffs: vec![Fe::ZERO; n],
        }
    }

    pub fn constant(c: Fe, n: usize) -> Series {
        let mut s = Series::zero(n);
        if n > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// The uniformizer t itself.
    pub fn t(f: &FieldSpec, n: usize) -> Series {
        let mut s = Series::zero(n);
        if n > 1 {
            s.coeffs[1] = f.one();
        }
        s
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, n: usize) -> Series {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, Fe::ZERO);
        Series { coeffs }
    }

    pub fn add(&self, f: &FieldSpec, other: &Series) -> Series {
        debug_assert_eq!(self.len(), other.len());
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, f: &FieldSpec, other: &Series) -> Series {
        debug_assert_eq!(self.len(), other.len());
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn neg(&self, f: &FieldSpec) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    pub fn scale(&self, f: &FieldSpec, c: Fe) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, f: &FieldSpec, other: &Series) -> Series {
        let n = self.len();
        debug_assert_eq!(n, other.len());
        let mut out = vec![Fe::ZERO; n];
        for i in 0..n {
            let a = self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in 0..n - i {
                let b = other.coeffs[j];
                if !b.is_zero() {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Series { coeffs: out }
    }

    pub fn pow(&self, f: &FieldSpec, e: usize) -> Series {
        let mut acc = Series::constant(f.one(), self.len());
        for _ in 0..e {
            acc = acc.mul(f, self);
        }
        acc
    }

    /// Multiplicative inverse of a unit (nonzero constant term).
    pub fn inverse(&self, f: &FieldSpec) -> Series {
        let n = self.len();
        assert!(n > 0 && !self.coeffs[0].is_zero(), "series is not a unit");
        let c0_inv = f.inv(self.coeffs[0]);
        let mut out = vec![Fe::ZERO; n];
        out[0] = c0_inv;
        for i in 1..n {
            // coefficient of t^i in self * out must vanish
            let mut acc = Fe::ZERO;
            for j in 0..i {
                acc = f.add(acc, f.mul(self.coeffs[i - j], out[j]));
            }
            out[i] = f.neg(f.mul(acc, c0_inv));
        }
        Series { coeffs: out }
    }

    /// Evaluates a polynomial at this series (Horner).
    pub fn eval_poly(&self, f: &FieldSpec, p: &UniPoly) -> Series {
        let n = self.len();
        let mut acc = Series::zero(n);
        for &c in p.coeffs.iter().rev() {
            acc = acc.mul(f, self);
            acc.coeffs[0] = f.add(acc.coeffs[0], c);
        }
        acc
    }

    /// Raises every coefficient to the q^power (the sigma action on a local
    /// expansion at a place where sigma is the Frobenius and fixes t).
    pub fn frobenius(&self, f: &FieldSpec, q: u128, power: u32) -> Series {
        let mut e: u128 = 1;
        for _ in 0..power {
            e = e.saturating_mul(q);
        }
        Series {
            coeffs: self.coeffs.iter().map(|&c| f.pow(c, e)).collect(),
        }
    }
}

/// Solves P(x(t)) = t for x(t) with x(0) = a, by Newton iteration.
/// Requires P(a) = 0 and P'(a) != 0.
pub fn newton_invert(f: &FieldSpec, p: &UniPoly, a: Fe, n: usize) -> Series {
    debug_assert!(p.eval(f, a).is_zero());
    let dp = p.derivative(f);
    debug_assert!(!dp.eval(f, a).is_zero());
    let mut x = Series::constant(a, n);
    let t = Series::t(f, n);
    // Quadratic convergence; a few fixed iterations at full precision suffice.
    let steps = usize::BITS - n.leading_zeros() + 1;
    for _ in 0..steps {
        let px = x.eval_poly(f, p).sub(f, &t);
        let dpx = x.eval_poly(f, &dp);
        x = x.sub(f, &px.mul(f, &dpx.inverse(f)));
    }
    debug_assert!(x.eval_poly(f, p).sub(f, &t).is_zero());
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn inverse_runs_cancellation() {
        let f = FieldSpec::new(13, 1, None).unwrap();
        let s = Series {
            coeffs: vec![f.from_index(3), f.from_index(7), f.from_index(1), f.from_index(11)],
        };
        let inv = s.inverse(&f);
        let prod = s.mul(&f, &inv);
        assert_eq!(prod, Series::constant(f.one(), 4));
    }

    #[test]
    fn newton_inverts_a_uniformizer() {
        // p(x) = x^2 - 2 over GF(7), root 3 (9 = 2). x(t) with x^2 - 2 = t.
        let f = FieldSpec::new(7, 1, None).unwrap();
        let p = UniPoly::from_coeffs(vec![f.from_index(5), f.zero(), f.one()]);
        let a = f.from_index(3);
        let x = newton_invert(&f, &p, a, 6);
        let check = x.eval_poly(&f, &p);
        let t = Series::t(&f, 6);
        assert_eq!(check, t);
    }
}
