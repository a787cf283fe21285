//! Multiplicity interpolation: one point per length-s window per block, a
//! vanishing condition of order r at each point, and coefficient functions
//! a_beta drawn from L((l - (alpha-1)|beta|) P_inf).

use crate::code::{CodeParams, FoldedWord};
use crate::curve::{binom_mod_p, rr_basis, CurveKind, CurveSpec, FieldFunction};
use crate::decoder::DecoderParams;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::linalg::{Echelon, LinSystem};
use crate::local::ExpansionCtx;

/// Q = sum over beta of a_beta z^beta, with the monomial set in graded
/// lexicographic order and every a_beta bounded by l - (alpha-1)|beta|.
#[derive(Clone, Debug)]
pub struct InterpolationPoly {
    pub terms: Vec<(Vec<usize>, FieldFunction)>,
}

impl InterpolationPoly {
    /// Q(f_1, .., f_s) by exact function-field arithmetic.
    pub fn eval_functions(&self, curve: &CurveSpec, funcs: &[FieldFunction]) -> FieldFunction {
        let s = funcs.len();
        let max_deg: Vec<usize> = (0..s)
            .map(|c| self.terms.iter().map(|(b, _)| b[c]).max().unwrap_or(0))
            .collect();
        // power tables per slot
        let mut pows: Vec<Vec<FieldFunction>> = Vec::with_capacity(s);
        for c in 0..s {
            let mut table = vec![FieldFunction::one(curve)];
            for e in 1..=max_deg[c] {
                let next = table[e - 1].mul(curve, &funcs[c]);
                table.push(next);
            }
            pows.push(table);
        }
        let mut acc = FieldFunction::zero(curve);
        for (beta, a_beta) in &self.terms {
            if a_beta.is_zero() {
                continue;
            }
            let mut term = a_beta.clone();
            for (c, &b) in beta.iter().enumerate() {
                if b > 0 {
                    term = term.mul(curve, &pows[c][b]);
                }
            }
            acc = acc.add(curve, &term);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, f)| f.is_zero())
    }
}

/// Multi-indices of weight <= max in s slots, graded lexicographic.
pub(crate) fn multi_indices(s: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; s];
    for total in 0..=max {
        gen_weight(s, total, 0, &mut cur, &mut out);
    }
    out
}

fn gen_weight(s: usize, rem: usize, pos: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if pos == s - 1 {
        cur[pos] = rem;
        out.push(cur.clone());
        return;
    }
    for v in 0..=rem {
        cur[pos] = v;
        gen_weight(s, rem - v, pos + 1, cur, out);
    }
}

/// Monomial exponents (x-power, y-power) and pole orders matching the
/// rr_basis order for bound l.
pub(crate) fn master_monomials(curve: &CurveSpec, bound: usize) -> Vec<(usize, usize, usize)> {
    match curve.kind {
        CurveKind::RationalCyclic => (0..=bound).map(|i| (i, 0, i)).collect(),
        CurveKind::Hermitian => {
            let q = curve.q as usize;
            let mut monos = Vec::new();
            for j in 0..q {
                let base = j * (q + 1);
                if base > bound {
                    break;
                }
                for i in 0..=(bound - base) / q {
                    monos.push((i * q + base, j, i));
                }
            }
            monos.sort();
            monos.into_iter().map(|(pole, j, i)| (i, j, pole)).collect()
        }
    }
}

/// Assembles the homogeneous interpolation system. Unknowns are the
/// constants-field coefficients of every a_beta over the Riemann-Roch basis;
/// one constraint per point and per pair (j0, kappa) with j0 + |kappa| < r.
pub fn build_interpolation(
    code: &CodeParams,
    params: &DecoderParams,
    received: &FoldedWord,
) -> Result<LinSystem> {
    let curve = &code.curve;
    let cf = curve.constants.clone();
    let s = code.s;
    let r = params.r;
    let l = params.l;
    let am1 = code.alpha - 1;
    if received.blocks.len() != code.n_blocks
        || received.blocks.iter().any(|b| b.len() != code.m_prime)
    {
        return Err(Error::WordShapeMismatch);
    }

    let betas = multi_indices(s, params.d);
    let master = master_monomials(curve, l);
    // dims[j] = dim of the weight-j coefficient space, a prefix of master
    let dims: Vec<usize> = (0..=params.d)
        .map(|j| {
            let bound = l - am1 * j;
            master.partition_point(|&(_, _, pole)| pole <= bound)
        })
        .collect();
    let mut offsets = Vec::with_capacity(betas.len());
    let mut cols = 0usize;
    for beta in &betas {
        offsets.push(cols);
        cols += dims[beta.iter().sum::<usize>()];
    }
    let kappas = multi_indices(s, r - 1);
    let rows_per_point: usize = kappas.iter().map(|k| r - k.iter().sum::<usize>()).sum();
    let points = code.n_blocks * (code.m_prime - s + 1);
    let rows = points * rows_per_point;
    let mut sys = LinSystem::new(cf.clone(), rows, cols);

    let mut row = 0usize;
    for (j, orbit) in code.blocks.iter().enumerate() {
        for o in 0..=code.m_prime - s {
            let v = &orbit.places[o];
            let yvals: Vec<Fe> = (0..s).map(|c| received.blocks[j][o + c]).collect();
            let mut ctx = ExpansionCtx::at_place(curve, v, r)?;
            // t-expansions of the master monomials, to order r-1
            let tser: Vec<Vec<Fe>> = master
                .iter()
                .map(|&(xp, yp, _)| {
                    let ser = ctx.monomial_series(xp, yp);
                    (0..r).map(|j0| ser.coeff(j0)).collect()
                })
                .collect();
            let ypows: Vec<Vec<Fe>> = yvals
                .iter()
                .map(|&y| {
                    let mut t = vec![cf.one()];
                    for e in 1..=params.d {
                        t.push(cf.mul(t[e - 1], y));
                    }
                    t
                })
                .collect();
            for kappa in &kappas {
                let kw: usize = kappa.iter().sum();
                // per-beta scalars: prod binom(beta_c, kappa_c) * y^(beta - kappa)
                let mut active: Vec<(usize, usize, Fe)> = Vec::new();
                for (bi, beta) in betas.iter().enumerate() {
                    if beta.iter().zip(kappa).any(|(b, k)| b < k) {
                        continue;
                    }
                    let mut bin: u64 = 1;
                    for (b, k) in beta.iter().zip(kappa) {
                        bin = bin * binom_mod_p(*b as u64, *k as u64, cf.characteristic())
                            % cf.characteristic();
                    }
                    if bin == 0 {
                        continue;
                    }
                    let mut scalar = cf.scalar(bin);
                    for c in 0..s {
                        scalar = cf.mul(scalar, ypows[c][beta[c] - kappa[c]]);
                    }
                    if scalar.is_zero() {
                        continue;
                    }
                    let w: usize = beta.iter().sum();
                    active.push((offsets[bi], dims[w], scalar));
                }
                for j0 in 0..r - kw {
                    for &(off, dim, sc) in &active {
                        for (i, ts) in tser.iter().enumerate().take(dim) {
                            let val = cf.mul(sc, ts[j0]);
                            if !val.is_zero() {
                                sys.mat.set(row, off + i, val);
                            }
                        }
                    }
                    row += 1;
                }
            }
        }
    }
    debug_assert_eq!(row, rows);
    Ok(sys)
}

/// Solves the interpolation system and returns the canonical nonzero Q (the
/// first nullspace basis vector).
pub fn interpolate(
    code: &CodeParams,
    params: &DecoderParams,
    received: &FoldedWord,
) -> Result<InterpolationPoly> {
    let sys = build_interpolation(code, params, received)?;
    let ech = Echelon::reduce(&sys);
    let vec = ech.nullspace_first().ok_or(Error::EmptyNullspace)?;
    let curve = &code.curve;
    let am1 = code.alpha - 1;
    let l = params.l;
    let basis = rr_basis(curve, l);
    let betas = multi_indices(code.s, params.d);
    let master = master_monomials(curve, l);
    let mut terms = Vec::with_capacity(betas.len());
    let mut off = 0usize;
    for beta in betas {
        let w: usize = beta.iter().sum();
        let bound = l - am1 * w;
        let dim = master.partition_point(|&(_, _, pole)| pole <= bound);
        let mut f = FieldFunction::zero(curve);
        for i in 0..dim {
            let c = vec[off + i];
            if !c.is_zero() {
                f = f.add(curve, &basis[i].scale(curve, c));
            }
        }
        off += dim;
        terms.push((beta, f));
    }
    debug_assert_eq!(off, vec.len());
    let q_poly = InterpolationPoly { terms };
    debug_assert!(!q_poly.is_zero());
    Ok(q_poly)
}
