//! Univariate polynomials over a [`FieldSpec`]: arithmetic, gcd, modular
//! exponentiation, root finding, irreducibility over extension fields, and
//! subfield embeddings.

use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};

/// Dense univariate polynomial, little-endian coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    pub coeffs: Vec<Fe>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Fe>) -> UniPoly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: Fe) -> UniPoly {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn one(f: &FieldSpec) -> UniPoly {
        UniPoly::constant(f.one())
    }

    pub fn x(f: &FieldSpec) -> UniPoly {
        UniPoly::from_coeffs(vec![f.zero(), f.one()])
    }

    pub fn monomial(c: Fe, deg: usize) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Fe::ZERO; deg + 1];
        coeffs[deg] = c;
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn lead(&self) -> Fe {
        *self.coeffs.last().expect("lead of zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn add(&self, f: &FieldSpec, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.add(self.coeff(i), other.coeff(i)));
        }
        UniPoly::from_coeffs(out)
    }

    pub fn neg(&self, f: &FieldSpec) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, f: &FieldSpec, other: &UniPoly) -> UniPoly {
        self.add(f, &other.neg(f))
    }

    pub fn scale(&self, f: &FieldSpec, c: Fe) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, f: &FieldSpec, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        UniPoly::from_coeffs(out)
    }

    /// Squaring; term-wise in characteristic 2.
    pub fn square(&self, f: &FieldSpec) -> UniPoly {
        if f.characteristic() == 2 {
            if self.is_zero() {
                return UniPoly::zero();
            }
            let mut out = vec![Fe::ZERO; 2 * self.coeffs.len() - 1];
            for (i, &a) in self.coeffs.iter().enumerate() {
                if !a.is_zero() {
                    out[2 * i] = f.square(a);
                }
            }
            UniPoly::from_coeffs(out)
        } else {
            self.mul(f, self)
        }
    }

    /// Quotient and remainder; divisor must be nonzero. Remainder reduction
    /// walks nonzero divisor coefficients only, so sparse moduli stay cheap.
    pub fn divrem(&self, f: &FieldSpec, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        if self.degree().map_or(true, |n| n < dd) {
            return (UniPoly::zero(), self.clone());
        }
        let lead_inv = f.inv(d.lead());
        let support: Vec<(usize, Fe)> = d
            .coeffs
            .iter()
            .enumerate()
            .take(dd)
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i, c))
            .collect();
        let mut rem = self.coeffs.clone();
        let nq = rem.len() - dd;
        let mut quot = vec![Fe::ZERO; nq];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c.is_zero() {
                continue;
            }
            let q = f.mul(c, lead_inv);
            quot[top - dd] = q;
            rem[top] = Fe::ZERO;
            for &(i, dc) in &support {
                let idx = top - dd + i;
                rem[idx] = f.sub(rem[idx], f.mul(q, dc));
            }
        }
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    pub fn rem(&self, f: &FieldSpec, d: &UniPoly) -> UniPoly {
        self.divrem(f, d).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, f: &FieldSpec, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let li = f.inv(a.lead());
            a.scale(f, li)
        }
    }

    pub fn eval(&self, f: &FieldSpec, x: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    pub fn derivative(&self, f: &FieldSpec) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let p = f.characteristic();
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            let m = (i as u64) % p;
            out.push(f.mul(c, f.scalar(m)));
        }
        UniPoly::from_coeffs(out)
    }

    /// self^e mod m.
    pub fn powmod(&self, f: &FieldSpec, mut e: u128, m: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::one(f).rem(f, m);
        let mut base = self.rem(f, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.square(f).rem(f, m);
            }
        }
        acc
    }

    /// Irreducibility over `f`: trial division against all monic polynomials
    /// of degree <= n/2 at desk scale, Rabin's criterion above.
    pub fn is_irreducible(&self, f: &FieldSpec) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let half = n / 2;
        let mut scan: u128 = 1;
        let mut in_cap = true;
        for _ in 0..half {
            scan = scan.saturating_mul(f.order());
            if scan > (1 << 20) {
                in_cap = false;
                break;
            }
        }
        if in_cap {
            for d in 1..=half {
                let mut count: u128 = 1;
                for _ in 0..d {
                    count *= f.order();
                }
                for idx in 0..count {
                    let div = monic_by_index(f, d, idx);
                    if self.rem(f, &div).is_zero() {
                        return false;
                    }
                }
            }
            true
        } else {
            self.is_irreducible_rabin(f)
        }
    }

    fn is_irreducible_rabin(&self, f: &FieldSpec) -> bool {
        let n = self.degree().unwrap();
        let x = UniPoly::x(f);
        let q = f.order();
        // powers[j] = z^(q^j) mod self
        let mut powers = Vec::with_capacity(n + 1);
        let mut t = x.rem(f, self);
        powers.push(t.clone());
        for _ in 0..n {
            t = t.powmod(f, q, self);
            powers.push(t.clone());
        }
        if !powers[n].sub(f, &x).is_zero() {
            return false;
        }
        let mut m = n;
        let mut primes = Vec::new();
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                primes.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        for r in primes {
            let diff = powers[n / r].sub(f, &x);
            if self.gcd(f, &diff).degree() != Some(0) {
                return false;
            }
        }
        true
    }
}

/// Monic polynomial of degree d whose lower coefficients are the base-order
/// digits of `idx` (coefficient i = element of index digit i).
pub fn monic_by_index(f: &FieldSpec, d: usize, mut idx: u128) -> UniPoly {
    let mut coeffs = vec![Fe::ZERO; d + 1];
    coeffs[d] = f.one();
    for c in coeffs.iter_mut().take(d) {
        *c = f.from_index(idx % f.order());
        idx /= f.order();
    }
    UniPoly { coeffs }
}

/// First monic irreducible of degree d over `f` in coordinate scan order.
pub fn first_irreducible_over(f: &FieldSpec, d: usize) -> UniPoly {
    let mut idx = 0u128;
    loop {
        let cand = monic_by_index(f, d, idx);
        if cand.is_irreducible(f) {
            return cand;
        }
        idx += 1;
    }
}

/// All monic irreducibles of degree d over `f`, in scan order.
pub fn monic_irreducibles(f: &FieldSpec, d: usize) -> Vec<UniPoly> {
    let mut count: u128 = 1;
    for _ in 0..d {
        count *= f.order();
    }
    (0..count)
        .map(|idx| monic_by_index(f, d, idx))
        .filter(|c| c.is_irreducible(f))
        .collect()
}

/// Exhaustive-evaluation threshold for root finding.
const EXHAUSTIVE_CAP: u128 = 1 << 20;

/// Roots of a nonzero polynomial in its coefficient field, no multiplicity,
/// sorted by element index. The splitting part is isolated as
/// gcd(f, z^order - z) via modular exponentiation; its roots are then found
/// exhaustively at desk scale and by deterministic trace-form splitting above.
pub fn poly_roots(f: &FieldSpec, poly: &UniPoly) -> Result<Vec<Fe>> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if poly.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let zq = UniPoly::x(f).powmod(f, f.order(), poly);
    let diff = zq.sub(f, &UniPoly::x(f));
    let split = poly.gcd(f, &diff);
    let mut roots = match split.degree() {
        None => return roots_exhaustive(f, poly), // z^order - z divisible by poly
        Some(0) => Vec::new(),
        Some(1) => vec![f.neg(f.mul(split.coeff(0), f.inv(split.coeff(1))))],
        Some(_) => {
            if f.order() <= EXHAUSTIVE_CAP {
                roots_exhaustive(f, &split)?
            } else {
                let mut out = Vec::new();
                split_all_linear(f, &split, &mut out);
                out
            }
        }
    };
    roots.sort_by_key(|&r| f.index(r));
    roots.dedup();
    Ok(roots)
}

fn roots_exhaustive(f: &FieldSpec, poly: &UniPoly) -> Result<Vec<Fe>> {
    assert!(f.order() <= EXHAUSTIVE_CAP, "field too large for exhaustive scan");
    Ok(f
        .elements()
        .filter(|&x| poly.eval(f, x).is_zero())
        .collect())
}

/// Deterministic equal-degree splitting for a monic product of distinct
/// linear factors: successive gcds with the prime-field trace forms
/// Tr(c·z) - a, c running over the power basis. Distinct roots differ in
/// some prime-field coordinate, so every factor eventually splits.
fn split_all_linear(f: &FieldSpec, poly: &UniPoly, out: &mut Vec<Fe>) {
    let mut work = vec![poly.clone()];
    let p = f.characteristic();
    let k = f.degree();
    'basis: for j in 0..k {
        let c = f.pow(f.gen(), j as u128);
        let mut next = Vec::new();
        for g in work.drain(..) {
            match g.degree() {
                None | Some(0) => {}
                Some(1) => {
                    out.push(f.neg(f.mul(g.coeff(0), f.inv(g.coeff(1)))));
                }
                Some(_) => {
                    // Tr(c·z) mod g = sum over i of (c·z)^(p^i) mod g.
                    let cz = UniPoly::from_coeffs(vec![Fe::ZERO, c]);
                    let mut term = cz.rem(f, &g);
                    let mut tr = term.clone();
                    for _ in 1..k {
                        term = term.powmod(f, p as u128, &g);
                        tr = tr.add(f, &term);
                    }
                    let mut remaining = g.clone();
                    for a in 0..p {
                        let shifted = tr.sub(f, &UniPoly::constant(f.scalar(a)));
                        let h = remaining.gcd(f, &shifted);
                        if let Some(d) = h.degree() {
                            if d > 0 {
                                remaining = remaining.divrem(f, &h).0;
                                next.push(h);
                            }
                        }
                        if remaining.degree() == Some(0) || remaining.is_zero() {
                            break;
                        }
                    }
                    if remaining.degree().map_or(false, |d| d > 0) {
                        next.push(remaining);
                    }
                }
            }
        }
        work = next;
        if work.is_empty() {
            break 'basis;
        }
    }
    // All factors must be linear by now; any leftovers indicate roots outside
    // the field, which cannot happen for a divisor of z^order - z.
    for g in work {
        assert!(
            g.degree() <= Some(1),
            "trace-form splitting left a nonlinear factor"
        );
        if g.degree() == Some(1) {
            out.push(f.neg(f.mul(g.coeff(0), f.inv(g.coeff(1)))));
        }
    }
}

/// Embedding of a subfield into an extension with the same characteristic.
/// The image of the subfield generator is the smallest-index root of the
/// subfield modulus in the extension, which makes the embedding canonical.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub sub: FieldSpec,
    pub sup: FieldSpec,
    powers: Vec<Fe>,
}

impl Embedding {
    pub fn new(sub: &FieldSpec, sup: &FieldSpec) -> Result<Embedding> {
        if sub.characteristic() != sup.characteristic() || sup.degree() % sub.degree() != 0 {
            return Err(Error::NotAnExtension {
                field: sup.order(),
                sub: sub.order(),
            });
        }
        let lifted = UniPoly::from_coeffs(
            sub.modulus().iter().map(|&c| sup.scalar(c)).collect(),
        );
        let roots = poly_roots(sup, &lifted)?;
        let img = *roots.first().expect("subfield modulus has a root in the extension");
        let mut powers = Vec::with_capacity(sub.degree());
        let mut acc = sup.one();
        for _ in 0..sub.degree() {
            powers.push(acc);
            acc = sup.mul(acc, img);
        }
        Ok(Embedding {
            sub: sub.clone(),
            sup: sup.clone(),
            powers,
        })
    }

    pub fn map(&self, x: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        for (i, &pw) in self.powers.iter().enumerate() {
            let d = self.sub.coords(x)[i];
            if d != 0 {
                acc = self.sup.add(acc, self.sup.mul(self.sup.scalar(d), pw));
            }
        }
        acc
    }

    /// Lifts a polynomial coefficient-wise.
    pub fn map_poly(&self, p: &UniPoly) -> UniPoly {
        UniPoly::from_coeffs(p.coeffs.iter().map(|&c| self.map(c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, k: usize) -> FieldSpec {
        FieldSpec::new(p, k, None).unwrap()
    }

    #[test]
    fn roots_of_quadratic_over_gf5() {
        let f = gf(5, 1);
        // z^2 - 1 = z^2 + 4
        let p = UniPoly::from_coeffs(vec![f.from_index(4), f.zero(), f.one()]);
        let roots = poly_roots(&f, &p).unwrap();
        let idx: Vec<u128> = roots.iter().map(|&r| f.index(r)).collect();
        assert_eq!(idx, vec![1, 4]);
    }

    #[test]
    fn irreducible_quadratic_has_no_roots() {
        let f = gf(2, 1);
        let p = UniPoly::from_coeffs(vec![f.one(), f.one(), f.one()]);
        assert!(poly_roots(&f, &p).unwrap().is_empty());
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        let f = gf(2, 1);
        assert!(matches!(
            poly_roots(&f, &UniPoly::zero()),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn random_degree6_roots_match_exhaustive_over_gf16() {
        let f = gf(2, 4);
        let mut state = 0xdeadbeefu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..25 {
            let coeffs: Vec<Fe> = (0..7).map(|_| f.from_index((next() % 16) as u128)).collect();
            let p = UniPoly::from_coeffs(coeffs);
            if p.is_zero() {
                continue;
            }
            let fast = poly_roots(&f, &p).unwrap();
            let brute: Vec<Fe> = f.elements().filter(|&x| p.eval(&f, x).is_zero()).collect();
            assert_eq!(fast, brute);
        }
    }

    #[test]
    fn trace_splitting_matches_exhaustive() {
        // Same field, but force the trace-form path and compare.
        let f = gf(3, 4); // order 81
        let mut polys = Vec::new();
        for seed in 1..20u128 {
            let coeffs: Vec<Fe> = (0..5)
                .map(|i| f.from_index((seed * 31 + i * 17) % 81))
                .collect();
            let p = UniPoly::from_coeffs(coeffs);
            if !p.is_zero() && p.degree() > Some(0) {
                polys.push(p);
            }
        }
        for p in polys {
            let zq = UniPoly::x(&f).powmod(&f, f.order(), &p);
            let split = zq.sub(&f, &UniPoly::x(&f)).gcd(&f, &p);
            if split.degree().map_or(true, |d| d < 2) {
                continue;
            }
            let mut via_split = Vec::new();
            split_all_linear(&f, &split, &mut via_split);
            via_split.sort_by_key(|&r| f.index(r));
            let brute: Vec<Fe> = f.elements().filter(|&x| p.eval(&f, x).is_zero()).collect();
            assert_eq!(via_split, brute);
        }
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let sub = gf(2, 4);
        let sup = gf(2, 8);
        let emb = Embedding::new(&sub, &sup).unwrap();
        for a in 0..16u128 {
            for b in 0..16u128 {
                let x = sub.from_index(a);
                let y = sub.from_index(b);
                assert_eq!(
                    emb.map(sub.mul(x, y)),
                    sup.mul(emb.map(x), emb.map(y))
                );
                assert_eq!(
                    emb.map(sub.add(x, y)),
                    sup.add(emb.map(x), emb.map(y))
                );
            }
        }
        assert_eq!(emb.map(sub.one()), sup.one());
    }

    #[test]
    fn divrem_round_trip() {
        let f = gf(7, 2);
        let a = UniPoly::from_coeffs((0..9).map(|i| f.from_index((i * 13 + 5) % 49)).collect());
        let b = UniPoly::from_coeffs((0..4).map(|i| f.from_index((i * 11 + 3) % 49)).collect());
        let (q, r) = a.divrem(&f, &b);
        let back = q.mul(&f, &b).add(&f, &r);
        assert_eq!(back, a);
        assert!(r.degree() < b.degree());
    }
}
