//! Additive (linearized) polynomials z -> sum_j c_j z^(Q^(j-1)) over an
//! extension field, viewed as linear maps over the size-Q subfield: kernel,
//! image, and preimage computations back the second root-finding step of the
//! decoder.

use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};
use crate::linalg::{solve_linear, LinOutcome, LinSystem, Mat, Store};

/// c_1..c_s with evaluation map z -> sum_j c_j z^(Q_RES^(j-1)).
#[derive(Clone, Debug)]
pub struct AdditivePoly {
    pub q_res: u128,
    pub coeffs: Vec<Fe>,
}

impl AdditivePoly {
    pub fn new(q_res: u128, coeffs: Vec<Fe>) -> AdditivePoly {
        AdditivePoly { q_res, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, f: &FieldSpec, z: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        let mut zq = z;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = f.add(acc, f.mul(c, zq));
            }
            if j + 1 < self.coeffs.len() {
                zq = f.pow(zq, self.q_res);
            }
        }
        acc
    }
}

/// The size-Q subfield of F_w together with coordinate machinery: a cached
/// prime-field basis of the subfield (fixed space of z -> z^Q) and the
/// subfield-basis {1, g, .., g^(m-1)} of F_w, g the canonical generator.
pub struct SubfieldCtx {
    pub field: FieldSpec,
    pub q_res: u128,
    /// [F_w : F_u]
    pub ext_degree: usize,
    /// prime-field dimension of F_u
    sub_dim: usize,
    /// GF(p)-basis of the subfield, as field elements
    pub sub_basis: Vec<Fe>,
    /// F_u-basis of F_w: powers of the generator
    pow_basis: Vec<Fe>,
    /// inverse transition: prime coords of z -> prime coords over {u_i g^j}
    inv_transition: Mat,
    prime: FieldSpec,
}

impl SubfieldCtx {
    pub fn new(field: &FieldSpec, q_res: u128) -> Result<SubfieldCtx> {
        let p = field.characteristic();
        // q_res = p^d for some d >= 1
        let mut d = 0usize;
        let mut t = q_res;
        while t > 1 {
            if t % p as u128 != 0 {
                return Err(Error::BadSubfieldOrder(q_res));
            }
            t /= p as u128;
            d += 1;
        }
        if d == 0 {
            return Err(Error::BadSubfieldOrder(q_res));
        }
        let k = field.degree();
        if k % d != 0 {
            return Err(Error::NotAnExtension {
                field: field.order(),
                sub: q_res,
            });
        }
        let ext_degree = k / d;
        let prime = FieldSpec::new(p, 1, None)?;

        // Fixed space of z -> z^q_res as a GF(p)-linear map on F_w.
        let mut m = Mat::zeros(k, k);
        for a in 0..k {
            let img = field.pow(field.unit(a), q_res);
            let img = field.sub(img, field.unit(a));
            for (b, &digit) in field.coords(img).iter().enumerate() {
                m.set(b, a, prime.scalar(digit));
            }
        }
        let sys = LinSystem::homogeneous(prime.clone(), m);
        let LinOutcome::Solved { nullspace, .. } = solve_linear(&sys)? else {
            unreachable!("homogeneous system")
        };
        if nullspace.len() != d {
            return Err(Error::NotAnExtension {
                field: field.order(),
                sub: q_res,
            });
        }
        let sub_basis: Vec<Fe> = nullspace
            .iter()
            .map(|v| {
                let coords: Vec<u64> = v.iter().map(|&x| prime.index(x) as u64).collect();
                field.from_coords(&coords)
            })
            .collect();

        let g = field.gen();
        let mut pow_basis = Vec::with_capacity(ext_degree);
        let mut acc = field.one();
        for _ in 0..ext_degree {
            pow_basis.push(acc);
            acc = field.mul(acc, g);
        }

        // Transition matrix: columns (i, j) -> prime coords of u_i * g^j.
        let mut trans = Mat::zeros(k, k);
        for j in 0..ext_degree {
            for i in 0..d {
                let col = j * d + i;
                let v = field.mul(sub_basis[i], pow_basis[j]);
                for (b, &digit) in field.coords(v).iter().enumerate() {
                    trans.set(b, col, prime.scalar(digit));
                }
            }
        }
        let inv_transition = trans
            .inverse(&prime)
            .expect("subfield power basis is a basis");
        Ok(SubfieldCtx {
            field: field.clone(),
            q_res,
            ext_degree,
            sub_dim: d,
            sub_basis,
            pow_basis,
            inv_transition,
            prime,
        })
    }

    pub fn in_subfield(&self, z: Fe) -> bool {
        self.field.pow(z, self.q_res) == z
    }

    /// F_u-coordinates of z with respect to the power basis; entries are
    /// subfield elements represented inside F_w.
    pub fn coords(&self, z: Fe) -> Vec<Fe> {
        let digits: Vec<Fe> = self
            .field
            .coords(z)
            .iter()
            .map(|&x| self.prime.scalar(x))
            .collect();
        let mixed = self.inv_transition.mul_vec(&self.prime, &digits);
        (0..self.ext_degree)
            .map(|j| {
                let mut acc = Fe::ZERO;
                for i in 0..self.sub_dim {
                    let c = self.prime.index(mixed[j * self.sub_dim + i]) as u64;
                    if c != 0 {
                        acc = self.field.add(
                            acc,
                            self.field.mul(self.field.scalar(c), self.sub_basis[i]),
                        );
                    }
                }
                acc
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[Fe]) -> Fe {
        debug_assert_eq!(coords.len(), self.ext_degree);
        let mut acc = Fe::ZERO;
        for (j, &c) in coords.iter().enumerate() {
            if !c.is_zero() {
                acc = self.field.add(acc, self.field.mul(c, self.pow_basis[j]));
            }
        }
        acc
    }

    /// Matrix of the evaluation map of F over F_u (entries are subfield
    /// elements inside F_w), column j = coords of F(g^j).
    fn map_matrix(&self, f_poly: &AdditivePoly) -> Mat {
        let m = self.ext_degree;
        let mut out = Mat::zeros(m, m);
        for j in 0..m {
            let img = f_poly.eval(&self.field, self.pow_basis[j]);
            for (i, c) in self.coords(img).into_iter().enumerate() {
                out.set(i, j, c);
            }
        }
        out
    }

    fn check(&self, f_poly: &AdditivePoly) -> Result<()> {
        if f_poly.q_res != self.q_res {
            return Err(Error::BadSubfieldOrder(f_poly.q_res));
        }
        Ok(())
    }

    /// F_u-basis of the root space U of a nonzero additive polynomial.
    /// #U = q_res^(basis length).
    pub fn kernel(&self, f_poly: &AdditivePoly) -> Result<Vec<Fe>> {
        self.check(f_poly)?;
        let mat = self.map_matrix(f_poly);
        let sys = LinSystem {
            spec: self.field.clone(),
            mat: Store::Dense(mat),
            rhs: vec![Fe::ZERO; self.ext_degree],
        };
        let LinOutcome::Solved { nullspace, .. } = solve_linear(&sys)? else {
            unreachable!("homogeneous system")
        };
        Ok(nullspace.iter().map(|v| self.from_coords(v)).collect())
    }

    /// One γ with F(γ) = δ, or None when δ is outside the image. The full
    /// solution set is γ + U.
    pub fn preimage(&self, f_poly: &AdditivePoly, delta: Fe) -> Result<Option<Fe>> {
        self.check(f_poly)?;
        let mat = self.map_matrix(f_poly);
        let sys = LinSystem {
            spec: self.field.clone(),
            mat: Store::Dense(mat),
            rhs: self.coords(delta),
        };
        match solve_linear(&sys)? {
            LinOutcome::Solved { particular, .. } => Ok(Some(self.from_coords(&particular))),
            LinOutcome::Inconsistent => Ok(None),
        }
    }

    /// F_u-basis of the image F(F_w): canonical echelon basis of the column
    /// space. dim(image) = ext_degree - dim(kernel).
    pub fn image(&self, f_poly: &AdditivePoly) -> Result<Vec<Fe>> {
        self.check(f_poly)?;
        let mat = self.map_matrix(f_poly);
        let m = self.ext_degree;
        // Row-reduce the transpose; nonzero rows span the column space.
        let mut tr = Mat::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                tr.set(j, i, mat.get(i, j));
            }
        }
        let sys = LinSystem {
            spec: self.field.clone(),
            mat: Store::Dense(tr.clone()),
            rhs: vec![Fe::ZERO; m],
        };
        let ech = crate::linalg::Echelon::reduce(&sys);
        let rank = ech.rank();
        // Recover the reduced rows from a fresh reduction of the transpose.
        let mut rows: Vec<Vec<Fe>> = (0..m)
            .map(|i| (0..m).map(|j| tr.get(i, j)).collect())
            .collect();
        gauss_rows(&self.field, &mut rows);
        rows.truncate(rank);
        Ok(rows.into_iter().map(|v| self.from_coords(&v)).collect())
    }

    /// Enumerates an F_u-coset γ + U in deterministic order: scalar tuples
    /// over the subfield in index order.
    pub fn enumerate_coset(&self, gamma: Fe, u_basis: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let mut out = vec![gamma];
        for &b in u_basis {
            let mut next = Vec::with_capacity(out.len() * self.q_res as usize);
            // subfield scalars in index order
            let scalars = self.subfield_elements();
            for &s in &scalars {
                for &x in &out {
                    next.push(f.add(x, f.mul(s, b)));
                }
            }
            out = next;
        }
        out
    }

    /// All subfield elements in index order. Desk scale only.
    pub fn subfield_elements(&self) -> Vec<Fe> {
        let p = self.field.characteristic();
        let mut elems: Vec<Fe> = Vec::with_capacity(self.q_res as usize);
        let mut counters = vec![0u64; self.sub_dim];
        loop {
            let mut acc = Fe::ZERO;
            for (i, &c) in counters.iter().enumerate() {
                if c != 0 {
                    acc = self.field.add(
                        acc,
                        self.field.mul(self.field.scalar(c), self.sub_basis[i]),
                    );
                }
            }
            elems.push(acc);
            let mut i = 0;
            loop {
                if i == counters.len() {
                    elems.sort_by_key(|&x| self.field.index(x));
                    return elems;
                }
                counters[i] += 1;
                if counters[i] < p {
                    break;
                }
                counters[i] = 0;
                i += 1;
            }
        }
    }
}

/// In-place row reduction used for canonical image bases.
fn gauss_rows(f: &FieldSpec, rows: &mut Vec<Vec<Fe>>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = f.inv(rows[rank][c]);
        for x in rows[rank].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let s = rows[i][c];
                for j in 0..ncols {
                    rows[i][j] = f.sub(rows[i][j], f.mul(s, rows[rank][j]));
                }
            }
        }
        rank += 1;
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_minus_identity_kernel_is_subfield() {
        // F(z) = z^4 - z over GF(16), Q = 4: kernel = GF(4), dimension 1.
        let f = FieldSpec::new(2, 4, None).unwrap();
        let ctx = SubfieldCtx::new(&f, 4).unwrap();
        let poly = AdditivePoly::new(4, vec![f.neg(f.one()), f.one()]);
        let kernel = ctx.kernel(&poly).unwrap();
        assert_eq!(kernel.len(), 1);
        let image = ctx.image(&poly).unwrap();
        assert_eq!(image.len(), 1); // rank-nullity: 2 - 1
        // Kernel elements really are fixed by z -> z^4.
        for &b in &kernel {
            assert_eq!(f.pow(b, 4), b);
        }
    }

    #[test]
    fn identity_map_has_trivial_kernel_full_image() {
        let f = FieldSpec::new(2, 4, None).unwrap();
        let ctx = SubfieldCtx::new(&f, 4).unwrap();
        let ident = AdditivePoly::new(4, vec![f.one()]);
        assert!(ctx.kernel(&ident).unwrap().is_empty());
        assert_eq!(ctx.image(&ident).unwrap().len(), 2);
        let delta = f.from_index(11);
        assert_eq!(ctx.preimage(&ident, delta).unwrap(), Some(delta));
    }

    #[test]
    fn squaring_preimage_in_char2() {
        // F(z) = z^2 over GF(4) with Q = 2 is additive; squaring is a
        // bijection, so every delta has the unique square root preimage.
        let f = FieldSpec::new(2, 2, None).unwrap();
        let ctx = SubfieldCtx::new(&f, 2).unwrap();
        let sq = AdditivePoly::new(2, vec![Fe::ZERO, f.one()]);
        for idx in 0..4u128 {
            let delta = f.from_index(idx);
            let gamma = ctx.preimage(&sq, delta).unwrap().unwrap();
            assert_eq!(f.mul(gamma, gamma), delta);
        }
    }

    #[test]
    fn random_kernels_match_exhaustive_over_gf64() {
        let f = FieldSpec::new(2, 6, None).unwrap();
        let ctx = SubfieldCtx::new(&f, 2).unwrap();
        let mut st = 99u64;
        let mut next = move || {
            st ^= st << 13;
            st ^= st >> 7;
            st ^= st << 17;
            st
        };
        for _ in 0..10 {
            let coeffs: Vec<Fe> = (0..3).map(|_| f.from_index((next() % 64) as u128)).collect();
            let poly = AdditivePoly::new(2, coeffs);
            if poly.is_zero() {
                continue;
            }
            let kernel = ctx.kernel(&poly).unwrap();
            let brute: Vec<Fe> = f
                .elements()
                .filter(|&z| poly.eval(&f, z).is_zero())
                .collect();
            assert_eq!(brute.len(), 1usize << kernel.len());
            // Every enumerated kernel combination is a root.
            for z in ctx.enumerate_coset(Fe::ZERO, &kernel) {
                assert!(poly.eval(&f, z).is_zero());
            }
            // Image membership matches exhaustive image.
            let image: std::collections::HashSet<u128> =
                f.elements().map(|z| f.index(poly.eval(&f, z))).collect();
            for idx in 0..64u128 {
                let delta = f.from_index(idx);
                let pre = ctx.preimage(&poly, delta).unwrap();
                assert_eq!(pre.is_some(), image.contains(&idx));
                if let Some(g) = pre {
                    assert_eq!(poly.eval(&f, g), delta);
                }
            }
        }
    }

    #[test]
    fn mixed_characteristic_kernel() {
        // GF(81) over GF(3): F(z) = z^3 - z has kernel GF(3), dim 1 over F_u = GF(3).
        let f = FieldSpec::new(3, 4, None).unwrap();
        let ctx = SubfieldCtx::new(&f, 3).unwrap();
        let poly = AdditivePoly::new(3, vec![f.neg(f.one()), f.one()]);
        let kernel = ctx.kernel(&poly).unwrap();
        assert_eq!(kernel.len(), 1);
        assert_eq!(ctx.image(&poly).unwrap().len(), 3);
    }

    #[test]
    fn rejects_bad_subfield_order() {
        let f = FieldSpec::new(2, 4, None).unwrap();
        assert!(SubfieldCtx::new(&f, 6).is_err()); // not a power of 2
        assert!(SubfieldCtx::new(&f, 8).is_err()); // 8 does not divide 16 compatibly
    }
}
