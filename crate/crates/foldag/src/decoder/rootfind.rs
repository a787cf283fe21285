//! Root finding for the reduced interpolation polynomial: the large-order
//! backend inverts the injective evaluation map at a place of degree >=
//! alpha; the local-completion backend grows the lift tree of truncated
//! expansion coefficients, one additive-polynomial solve per node.

use std::collections::HashMap;

use crate::additive::{AdditivePoly, SubfieldCtx};
use crate::code::{CodeParams, Message};
use crate::curve::{evaluate, Place};
use crate::decoder::{DecoderParams, LocalQ};
use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};
use crate::linalg::{solve_linear, LinOutcome, LinSystem, Mat, Store};
use crate::local::local_expand;
use crate::poly::poly_roots;
use crate::series::Series;

/// Prime-coordinate system mapping message coefficient digits to residue
/// field values: column (b, t) is unit_t * item_b, where item_b is the
/// evaluation (or expansion coefficient block) of basis function b.
fn prime_system(
    rf: &FieldSpec,
    prime: &FieldSpec,
    unit_imgs: &[Fe],
    items: &[Vec<Fe>],
) -> Mat {
    let k_rf = rf.degree();
    let depth = items.first().map_or(0, |v| v.len());
    let rows = depth * k_rf;
    let cols = items.len() * unit_imgs.len();
    let mut m = Mat::zeros(rows, cols);
    for (b, item) in items.iter().enumerate() {
        for (t, &u) in unit_imgs.iter().enumerate() {
            let col = b * unit_imgs.len() + t;
            for (c, &val) in item.iter().enumerate() {
                let prod = rf.mul(u, val);
                for (bit, &digit) in rf.coords(prod).iter().enumerate() {
                    m.set(c * k_rf + bit, col, prime.scalar(digit));
                }
            }
        }
    }
    m
}

fn prime_rhs(rf: &FieldSpec, prime: &FieldSpec, values: &[Fe]) -> Vec<Fe> {
    let mut rhs = Vec::with_capacity(values.len() * rf.degree());
    for &v in values {
        for &digit in rf.coords(v).iter() {
            rhs.push(prime.scalar(digit));
        }
    }
    rhs
}

fn digits_to_message(
    code: &CodeParams,
    prime: &FieldSpec,
    solution: &[Fe],
) -> Message {
    let cf = &code.curve.constants;
    let k0 = cf.degree();
    let coeffs = (0..code.k)
        .map(|b| {
            let digits: Vec<u64> = (0..k0)
                .map(|t| prime.index(solution[b * k0 + t]) as u64)
                .collect();
            cf.from_coords(&digits)
        })
        .collect();
    Message { coeffs }
}

/// Large-order backend: roots of R(z) in F_w, each inverted through the
/// evaluation map of the message space (injective since deg(w) >= alpha).
/// Roots whose inversion is inconsistent do not come from messages and are
/// dropped. The candidate count is bounded by deg R <= d * q_res^(s-1).
pub fn rootfind_large_order(
    code: &CodeParams,
    params: &DecoderParams,
    local_q: &LocalQ,
    w: &Place,
) -> Result<Vec<Message>> {
    let Place::Extension(ext) = w else {
        return Err(Error::RamifiedPlace);
    };
    debug_assert!(w.degree(&code.curve) >= code.alpha);
    let rf = &local_q.rf;
    let prime = FieldSpec::new(rf.characteristic(), 1, None)?;
    let cf = &code.curve.constants;
    let unit_imgs: Vec<Fe> = (0..cf.degree()).map(|t| ext.emb.map(cf.unit(t))).collect();
    let evals: Vec<Vec<Fe>> = code
        .basis
        .iter()
        .map(|b| vec![evaluate(&code.curve, b, w).expect("no pole at w")])
        .collect();
    let mat = prime_system(rf, &prime, &unit_imgs, &evals);
    let roots = poly_roots(rf, &local_q.reduced)?;
    debug_assert!(
        roots.len() as u128 <= params.d as u128 * local_q.q_res.pow(code.s as u32 - 1),
        "list bound of the degree argument violated"
    );
    let mut out = Vec::new();
    for rho in roots {
        let sys = LinSystem {
            spec: prime.clone(),
            mat: Store::Dense(mat.clone()),
            rhs: prime_rhs(rf, &prime, &[rho]),
        };
        match solve_linear(&sys)? {
            LinOutcome::Solved {
                particular,
                nullspace,
                ..
            } => {
                debug_assert!(nullspace.is_empty(), "evaluation map must be injective");
                out.push(digits_to_message(code, &prime, &particular));
            }
            LinOutcome::Inconsistent => {}
        }
    }
    Ok(out)
}

/// F(z) = sum_j c_j z^(q_res^(j-1)) with
/// c_j = sum over beta with beta_j != 0 of
///       a_{beta,0} * (beta_j mod p) * f0^(lambda_beta - q_res^(j-1)),
/// the additive polynomial governing every lift level below f0. In
/// characteristic p the slot multiplicity beta_j enters mod p; 0^0 = 1.
pub fn build_f_polynomial(local_q: &LocalQ, f0: Fe) -> AdditivePoly {
    let rf = &local_q.rf;
    let s = local_q.terms.first().map_or(1, |(b, _)| b.len());
    let p = rf.characteristic();
    let mut coeffs = vec![Fe::ZERO; s];
    let mut qpow: u128 = 1;
    for (j, cj) in coeffs.iter_mut().enumerate() {
        for ((beta, ser), &lam) in local_q.terms.iter().zip(&local_q.lambda) {
            if beta[j] == 0 {
                continue;
            }
            let mult = (beta[j] as u64) % p;
            if mult == 0 {
                continue;
            }
            let a0 = ser.coeff(0);
            if a0.is_zero() {
                continue;
            }
            let term = rf.mul(
                rf.mul(a0, rf.scalar(mult)),
                rf.pow(f0, lam - qpow),
            );
            *cj = rf.add(*cj, term);
        }
        qpow = qpow.saturating_mul(local_q.q_res);
    }
    AdditivePoly::new(local_q.q_res, coeffs)
}

/// delta_i for the path (f_0, .., f_(i-1)): minus the t^i-coefficient of
/// Q evaluated at the truncated twisted expansions with f_i set to zero.
pub fn delta_coefficient(local_q: &LocalQ, path: &[Fe]) -> Fe {
    let i = path.len();
    debug_assert!(i >= 1);
    let rf = &local_q.rf;
    let n = i + 1;
    let s = local_q.terms.first().map_or(1, |(b, _)| b.len());
    // twisted partial expansions z_c(t), c = 0..s-1
    let mut zser = Vec::with_capacity(s);
    let mut qpow: u128 = 1;
    for _ in 0..s {
        let mut ser = Series::zero(n);
        for (c_idx, &fc) in path.iter().enumerate() {
            ser.coeffs[c_idx] = rf.pow(fc, qpow);
        }
        zser.push(ser);
        qpow = qpow.saturating_mul(local_q.q_res);
    }
    let max_deg: Vec<usize> = (0..s)
        .map(|c| {
            local_q
                .terms
                .iter()
                .map(|(b, _)| b[c])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut pows: Vec<Vec<Series>> = Vec::with_capacity(s);
    for c in 0..s {
        let mut table = vec![Series::constant(rf.one(), n)];
        for e in 1..=max_deg[c] {
            let next = table[e - 1].mul(rf, &zser[c]);
            table.push(next);
        }
        pows.push(table);
    }
    let mut acc = Series::zero(n);
    for (beta, ser) in &local_q.terms {
        let mut term = ser.truncate(n);
        if term.is_zero() {
            continue;
        }
        for (c, &b) in beta.iter().enumerate() {
            if b > 0 {
                term = term.mul(rf, &pows[c][b]);
            }
        }
        acc = acc.add(rf, &term);
    }
    rf.neg(acc.coeff(i))
}

/// (mu_i, delta_i) for a path extended by f_i, through the decomposition
/// mu_i = F(f_i) - delta_i.
pub fn mu_coefficient(local_q: &LocalQ, path: &[Fe], f_i: Fe) -> (Fe, Fe) {
    let rf = &local_q.rf;
    let f_poly = build_f_polynomial(local_q, path[0]);
    let delta = delta_coefficient(local_q, path);
    (rf.sub(f_poly.eval(rf, f_i), delta), delta)
}

/// Lift-tree outcome: complete coefficient paths (f_0..f_e) plus statistics.
#[derive(Clone, Debug)]
pub struct LiftResult {
    pub leaves: Vec<Vec<Fe>>,
    /// nodes per level 0..e
    pub level_widths: Vec<usize>,
    pub nodes: usize,
    pub budget_exceeded: bool,
}

/// Breadth-first construction of the lift tree. Level 0 holds the roots of
/// the substituted polynomial; at level i a path extends by the solutions of
/// F(z) = delta_i, a coset gamma + U or nothing. A zero F branches to the
/// whole residue field when delta_i = 0 (guarded by the width cap); the node
/// budget turns pathological growth into a distinct signal instead of a hang.
pub fn tree_lift_roots(
    _code: &CodeParams,
    params: &DecoderParams,
    local_q: &LocalQ,
) -> Result<LiftResult> {
    let rf = &local_q.rf;
    let ctx = SubfieldCtx::new(rf, local_q.q_res)?;
    let roots = poly_roots(rf, &local_q.reduced)?;
    let mut nodes = roots.len();
    let mut level_widths = vec![roots.len()];
    let mut paths: Vec<Vec<Fe>> = roots.into_iter().map(|r| vec![r]).collect();
    let mut budget_exceeded = false;
    struct F0Cache {
        poly: AdditivePoly,
        kernel: Vec<Fe>,
        zero: bool,
    }
    let mut caches: HashMap<u128, F0Cache> = HashMap::new();
    'levels: for _i in 1..=local_q.e {
        let mut next: Vec<Vec<Fe>> = Vec::new();
        for path in &paths {
            let f0 = path[0];
            let key = rf.index(f0);
            if !caches.contains_key(&key) {
                let poly = build_f_polynomial(local_q, f0);
                let zero = poly.is_zero();
                let kernel = if zero { Vec::new() } else { ctx.kernel(&poly)? };
                caches.insert(key, F0Cache { poly, kernel, zero });
            }
            let cache = &caches[&key];
            let delta = delta_coefficient(local_q, path);
            let children: Vec<Fe> = if cache.zero {
                if delta.is_zero() {
                    if rf.order() > params.width_cap as u128 {
                        budget_exceeded = true;
                        break 'levels;
                    }
                    rf.elements().collect()
                } else {
                    Vec::new()
                }
            } else {
                match ctx.preimage(&cache.poly, delta)? {
                    Some(gamma) => ctx.enumerate_coset(gamma, &cache.kernel),
                    None => Vec::new(),
                }
            };
            nodes += children.len();
            if nodes > params.node_budget {
                budget_exceeded = true;
                break 'levels;
            }
            for child in children {
                let mut ext = path.clone();
                ext.push(child);
                next.push(ext);
            }
        }
        level_widths.push(next.len());
        paths = next;
    }
    let leaves = if budget_exceeded {
        Vec::new()
    } else {
        paths
    };
    Ok(LiftResult {
        leaves,
        level_widths,
        nodes,
        budget_exceeded,
    })
}

/// Inverts the truncation map: finds the unique message whose expansion at w
/// matches a series to order e, or reports that no message lifts.
pub struct MessageLifter {
    code_k: usize,
    prime: FieldSpec,
    rf: FieldSpec,
    mat: Mat,
    k0: usize,
    constants: FieldSpec,
}

impl MessageLifter {
    pub fn new(code: &CodeParams, w: &Place, e: usize) -> Result<MessageLifter> {
        let Place::Extension(ext) = w else {
            return Err(Error::RamifiedPlace);
        };
        let rf = ext.residue.clone();
        let prime = FieldSpec::new(rf.characteristic(), 1, None)?;
        let cf = &code.curve.constants;
        let unit_imgs: Vec<Fe> = (0..cf.degree()).map(|t| ext.emb.map(cf.unit(t))).collect();
        let expansions: Vec<Vec<Fe>> = code
            .basis
            .iter()
            .map(|b| {
                local_expand(&code.curve, b, w, e)
                    .expect("basis functions have no pole at w")
                    .coeffs
            })
            .collect();
        let mat = prime_system(&rf, &prime, &unit_imgs, &expansions);
        Ok(MessageLifter {
            code_k: code.k,
            prime,
            rf,
            mat,
            k0: cf.degree(),
            constants: cf.clone(),
        })
    }

    /// The rank of the truncation map over the constants field.
    pub fn rank_over_constants(&self) -> usize {
        let prime_rank = self.mat.rank(&self.prime);
        debug_assert_eq!(prime_rank % self.k0, 0);
        prime_rank / self.k0
    }

    pub fn lift(&self, series: &Series) -> Option<Message> {
        let sys = LinSystem {
            spec: self.prime.clone(),
            mat: Store::Dense(self.mat.clone()),
            rhs: prime_rhs(&self.rf, &self.prime, &series.coeffs),
        };
        match solve_linear(&sys).expect("well-formed system") {
            LinOutcome::Solved {
                particular,
                nullspace,
                ..
            } => {
                debug_assert!(nullspace.is_empty(), "truncation map must be injective");
                let coeffs = (0..self.code_k)
                    .map(|b| {
                        let digits: Vec<u64> = (0..self.k0)
                            .map(|t| self.prime.index(particular[b * self.k0 + t]) as u64)
                            .collect();
                        self.constants.from_coords(&digits)
                    })
                    .collect();
                Some(Message { coeffs })
            }
            LinOutcome::Inconsistent => None,
        }
    }
}

/// One-shot form of the truncation inverse.
pub fn series_to_message(
    code: &CodeParams,
    w: &Place,
    e: usize,
    series: &Series,
) -> Result<Option<Message>> {
    Ok(MessageLifter::new(code, w, e)?.lift(series))
}
