//! The list decoder: parameter selection, multiplicity interpolation, the
//! large-order and local-completion root-finding backends, series lifting,
//! and the agreement filter.

mod interpolation;
mod rootfind;

pub use interpolation::{build_interpolation, interpolate, InterpolationPoly};
pub use rootfind::{
    build_f_polynomial, delta_coefficient, mu_coefficient, rootfind_large_order,
    series_to_message, tree_lift_roots, LiftResult, MessageLifter,
};

use crate::code::{agreement, encode, CodeParams, FoldedWord, Message};
use crate::curve::{CurveKind, Place};
use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};
use crate::frobenius::{designated_cyclic_place, frobenius_places};
use crate::local::ExpansionCtx;
use crate::poly::UniPoly;
use crate::series::Series;

/// Root-finding backend.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub enum Backend {
    /// Lemma 4.x route: roots of the reduced polynomial at a place of degree
    /// >= alpha, lifted through the injective evaluation map.
    LargeOrder,
    /// Local-completion route: lift tree over truncated expansions.
    LocalLift,
}

/// Derived decoding parameters, all pinned at construction.
#[derive(Clone, Debug)]
pub struct DecoderParams {
    pub backend: Backend,
    /// Multiplicity.
    pub r: usize,
    /// Pole bound on Q(f_1, .., f_s).
    pub l: usize,
    /// Block-agreement threshold.
    pub t_min: usize,
    /// Total-degree bound on Q.
    pub d: usize,
    pub eta: usize,
    pub q_res: u128,
    /// Truncation order for the local lift (0 for large-order).
    pub e: usize,
    /// Designated Frobenius place.
    pub w: Place,
    /// Further Frobenius places at the same degree, for the zero-reduction
    /// fallback.
    pub w_fallbacks: Vec<Place>,
    /// Recorded counting-check numbers.
    pub unknowns: usize,
    pub constraints: usize,
    /// Interpolation point count.
    pub points: usize,
    pub node_budget: usize,
    pub width_cap: usize,
}

const MULTIPLICITY_CAP: usize = 64;
const ETA_CAP: usize = 8;
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;
pub const DEFAULT_WIDTH_CAP: usize = 1 << 16;

/// Number of multi-indices of weight j in s slots: C(j+s-1, s-1).
fn weight_count(j: usize, s: usize) -> u128 {
    binom_u128((j + s - 1) as u64, (s - 1) as u64)
}

pub(crate) fn binom_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// RR-bound count of interpolation unknowns for pole bound l.
pub fn count_unknowns(alpha_minus_1: usize, genus: usize, s: usize, l: usize) -> u128 {
    let mut total: u128 = 0;
    let mut j = 0usize;
    while alpha_minus_1 * j <= l {
        let deg = l - alpha_minus_1 * j;
        if deg + 1 > genus {
            total += weight_count(j, s) * (deg + 1 - genus) as u128;
        }
        j += 1;
        if alpha_minus_1 == 0 {
            break;
        }
    }
    total
}

/// Constraint count: points * C(r+s, s+1).
pub fn count_constraints(points: usize, r: usize, s: usize) -> u128 {
    points as u128 * binom_u128((r + s) as u64, (s + 1) as u64)
}

/// Derives decoder parameters: the agreement threshold from the adapted
/// root bound, the smallest multiplicity passing the dimension count, and a
/// Frobenius place satisfying the degree constraints of the backend.
pub fn choose_parameters(code: &CodeParams, backend: Backend) -> Result<DecoderParams> {
    let am1 = code.alpha - 1;
    if am1 == 0 {
        return Err(Error::BadCodeParams(
            "decoding needs alpha - 1 >= 1".into(),
        ));
    }
    let s = code.s;
    let genus = code.curve.genus;
    // T_min = ceil((N' (alpha-1)^s)^(1/(s+1))) + 1, exact in integers.
    let mut target: u128 = code.n_blocks as u128;
    for _ in 0..s {
        target *= am1 as u128;
    }
    let t_min = {
        let mut c: u128 = 0;
        loop {
            let mut pow: u128 = 1;
            for _ in 0..s + 1 {
                pow *= c;
            }
            if pow >= target {
                break;
            }
            c += 1;
        }
        c as usize + 1
    };
    let t = (code.m_prime - s + 1) * t_min;
    let points = code.n_blocks * (code.m_prime - s + 1);
    let mut accepted = None;
    for r in 1..=MULTIPLICITY_CAP {
        let l = r * t - 1;
        let unknowns = count_unknowns(am1, genus, s, l);
        let constraints = count_constraints(points, r, s);
        if unknowns > constraints {
            accepted = Some((r, l, unknowns, constraints));
            break;
        }
    }
    let Some((r, l, unknowns, constraints)) = accepted else {
        return Err(Error::ParamsOutOfRange);
    };
    let d = (l - genus) / am1;

    // Frobenius place: smallest eta with q_res > d, plus deg(w) >= alpha for
    // the large-order backend, at which a place exists.
    let constants_order = code.curve.constants.order();
    let (w, fallbacks, eta, q_res) = match code.curve.kind {
        CurveKind::RationalCyclic => {
            let q_res = constants_order;
            if q_res <= d as u128 {
                return Err(Error::ParamsOutOfRange);
            }
            if backend == Backend::LargeOrder && code.m < code.alpha {
                return Err(Error::ParamsOutOfRange);
            }
            (designated_cyclic_place(&code.curve)?, Vec::new(), 1, q_res)
        }
        CurveKind::Hermitian => {
            let mut eta = 1usize;
            loop {
                let mut q_res: u128 = 1;
                for _ in 0..eta {
                    q_res *= constants_order;
                }
                let degree_ok = match backend {
                    Backend::LargeOrder => code.m * eta >= code.alpha,
                    Backend::LocalLift => true,
                };
                if q_res > d as u128 && degree_ok {
                    let mut tested = 0;
                    let mut hits = 0;
                    let mut places =
                        frobenius_places(&code.curve, eta, 8, &mut tested, &mut hits);
                    if !places.is_empty() {
                        let w = places.remove(0);
                        break (w, places, eta, q_res);
                    }
                }
                eta += 1;
                if eta > ETA_CAP {
                    return Err(Error::NoFrobeniusPlace { eta });
                }
            }
        }
    };
    let e = match backend {
        Backend::LargeOrder => 0,
        Backend::LocalLift => code.alpha.div_ceil(w.degree(&code.curve)),
    };
    Ok(DecoderParams {
        backend,
        r,
        l,
        t_min,
        d,
        eta,
        q_res,
        e,
        w,
        w_fallbacks: fallbacks,
        unknowns: unknowns.min(u128::from(u32::MAX)) as usize,
        constraints: constraints.min(u128::from(u32::MAX)) as usize,
        points,
        node_budget: DEFAULT_NODE_BUDGET,
        width_cap: DEFAULT_WIDTH_CAP,
    })
}

/// The interpolation polynomial reduced at w: per-monomial expansions of the
/// coefficients a_beta to order e, their exponents lambda_beta, and the
/// substituted one-variable polynomial R(z) = sum a_{beta,0} z^(lambda_beta).
#[derive(Clone, Debug)]
pub struct LocalQ {
    pub rf: FieldSpec,
    pub q_res: u128,
    pub e: usize,
    /// (beta, expansion of a_beta at w), in the monomial order of Q.
    pub terms: Vec<(Vec<usize>, Series)>,
    pub lambda: Vec<u128>,
    pub reduced: UniPoly,
}

/// Expands Q at one Frobenius place to order e. A zero substituted
/// polynomial is reported via `LocalQ::reduced.is_zero()`; callers fall back
/// to the next candidate place.
pub fn reduce_at_w(
    code: &CodeParams,
    q_poly: &InterpolationPoly,
    w: &Place,
    e: usize,
) -> Result<LocalQ> {
    let Place::Extension(ext) = w else {
        return Err(Error::RamifiedPlace);
    };
    let rf = ext.residue.clone();
    let q_res = ext.q_res;
    let mut ctx = ExpansionCtx::at_place(&code.curve, w, e + 1)?;
    let mut terms = Vec::with_capacity(q_poly.terms.len());
    let mut lambda = Vec::with_capacity(q_poly.terms.len());
    for (beta, a_beta) in &q_poly.terms {
        let ser = if a_beta.is_zero() {
            Series::zero(e + 1)
        } else {
            ctx.expand(a_beta)
        };
        let mut lam: u128 = 0;
        let mut qpow: u128 = 1;
        for &b in beta {
            lam += b as u128 * qpow;
            qpow = qpow.saturating_mul(q_res);
        }
        terms.push((beta.clone(), ser));
        lambda.push(lam);
    }
    let max_lambda = lambda.iter().copied().max().unwrap_or(0);
    assert!(
        max_lambda <= 10_000_000,
        "substituted polynomial degree out of desk-scale range"
    );
    let mut coeffs = vec![Fe::ZERO; max_lambda as usize + 1];
    for ((_, ser), &lam) in terms.iter().zip(&lambda) {
        let c = ser.coeff(0);
        if !c.is_zero() {
            coeffs[lam as usize] = rf.add(coeffs[lam as usize], c);
        }
    }
    Ok(LocalQ {
        rf,
        q_res,
        e,
        terms,
        lambda,
        reduced: UniPoly::from_coeffs(coeffs),
    })
}

/// Decode outcome: the filtered list plus diagnostics.
#[derive(Clone, Debug)]
pub struct DecodeReport {
    /// (message, agreement), agreement descending then message key ascending.
    pub candidates: Vec<(Message, usize)>,
    /// Backend candidates before the agreement filter.
    pub pre_filter: usize,
    /// Lift-tree statistics (empty for the large-order backend).
    pub level_widths: Vec<usize>,
    pub nodes: usize,
    pub budget_exceeded: bool,
    /// Frobenius places tried until the reduction was nonzero.
    pub reduction_attempts: usize,
}

/// Full decoding pipeline: interpolate, reduce at a Frobenius place, root
/// find with the configured backend, lift, and keep candidates with
/// agreement >= T_min. The output contains every message whose codeword
/// agrees with the received word in at least T_min blocks.
pub fn decode(
    code: &CodeParams,
    params: &DecoderParams,
    received: &FoldedWord,
) -> Result<DecodeReport> {
    let q_poly = interpolate(code, params, received)?;
    let mut attempt = 0usize;
    let mut local_q = None;
    let mut places: Vec<&Place> = vec![&params.w];
    places.extend(params.w_fallbacks.iter());
    for w in &places {
        attempt += 1;
        let lq = reduce_at_w(code, &q_poly, w, params.e)?;
        if !lq.reduced.is_zero() {
            local_q = Some((lq, (*w).clone()));
            break;
        }
    }
    let Some((local_q, w_used)) = local_q else {
        return Err(Error::ExhaustedPlaces { eta: params.eta });
    };

    let mut level_widths = Vec::new();
    let mut nodes = 0;
    let mut budget_exceeded = false;
    let raw: Vec<Message> = match params.backend {
        Backend::LargeOrder => rootfind_large_order(code, params, &local_q, &w_used)?,
        Backend::LocalLift => {
            let lift = tree_lift_roots(code, params, &local_q)?;
            level_widths = lift.level_widths.clone();
            nodes = lift.nodes;
            budget_exceeded = lift.budget_exceeded;
            let lifter = MessageLifter::new(code, &w_used, params.e)?;
            lift.leaves
                .iter()
                .filter_map(|leaf| lifter.lift(&Series {
                    coeffs: leaf.clone(),
                }))
                .collect()
        }
    };
    let pre_filter = raw.len();
    let mut filtered: Vec<(u128, Message, usize)> = Vec::new();
    for msg in raw {
        let word = encode(code, &msg);
        let agr = agreement(code, &word, received)?;
        if agr >= params.t_min {
            let key = code.message_key(&msg);
            if !filtered.iter().any(|(k, _, _)| *k == key) {
                filtered.push((key, msg, agr));
            }
        }
    }
    filtered.sort_by(|a, b| b.2.cmp(&a.2).then(a.0.cmp(&b.0)));
    Ok(DecodeReport {
        candidates: filtered.into_iter().map(|(_, m, a)| (m, a)).collect(),
        pre_filter,
        level_widths,
        nodes,
        budget_exceeded,
        reduction_attempts: attempt,
    })
}
