//! Local expansions of functions at places.
//!
//! The uniformizer is always taken inside the fixed field — x - a at a
//! rational point, p_u(x) at an extension place — so sigma fixes t exactly
//! and acts on a truncated expansion coefficient-wise as the q_res-power
//! Frobenius. x(t) comes from Newton inversion of the uniformizer equation
//! and y(t) from Hensel lifting of Y^q + Y = x(t)^(q+1), whose derivative
//! is the unit 1.

use crate::curve::{CurveKind, CurveSpec, FieldFunction, Place};
use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};
use crate::poly::UniPoly;
use crate::series::{newton_invert, Series};

/// Truncated expansion (f_0, .., f_e) of a function at a designated place.
pub type LocalSeries = Series;

/// Expansion machinery at one place, with cached monomial series.
pub struct ExpansionCtx {
    /// Coefficient field of the series (constants or the residue field).
    pub rf: FieldSpec,
    pub n: usize,
    curve_kind: CurveKind,
    x_series: Series,
    y_series: Option<Series>,
    /// Lift of constants coefficients into rf (identity at rational places).
    emb: Option<crate::poly::Embedding>,
    x_powers: Vec<Series>,
    y_powers: Vec<Series>,
}

/// f^(p^j) of a truncated series: coefficient-wise p-th powers with exponent
/// spread, applied j times (exact in characteristic p).
fn series_pow_char_p(rf: &FieldSpec, s: &Series, mut q: u64) -> Series {
    let p = rf.characteristic();
    let n = s.len();
    let mut cur = s.clone();
    while q > 1 {
        debug_assert_eq!(q % p, 0);
        let mut out = Series::zero(n);
        for (i, &c) in cur.coeffs.iter().enumerate() {
            if i * p as usize >= n {
                break;
            }
            if !c.is_zero() {
                out.coeffs[i * p as usize] = rf.pow(c, p as u128);
            }
        }
        cur = out;
        q /= p;
    }
    cur
}

impl ExpansionCtx {
    /// Expansion context at a place, to `n` series terms.
    pub fn at_place(curve: &CurveSpec, place: &Place, n: usize) -> Result<ExpansionCtx> {
        match place {
            Place::Infinity => Err(Error::PoleAtPlace),
            Place::Rational { x, y } => {
                let rf = curve.constants.clone();
                // t = x - a, so x(t) = a + t exactly.
                let mut x_series = Series::constant(*x, n);
                if n > 1 {
                    x_series.coeffs[1] = rf.one();
                }
                let y_series = match curve.kind {
                    CurveKind::RationalCyclic => None,
                    CurveKind::Hermitian => Some(hensel_y(
                        curve,
                        &rf,
                        &x_series,
                        y.expect("hermitian place carries y"),
                    )),
                };
                Ok(ExpansionCtx {
                    rf,
                    n,
                    curve_kind: curve.kind,
                    x_series,
                    y_series,
                    emb: None,
                    x_powers: Vec::new(),
                    y_powers: Vec::new(),
                })
            }
            Place::Extension(w) => {
                let rf = w.residue.clone();
                // t = p_u(x): Newton-invert p_u around x_res.
                let lifted = w.emb.map_poly(&w.p_u);
                let x_series = newton_invert(&rf, &lifted, w.x_res, n);
                let y_series = match curve.kind {
                    CurveKind::RationalCyclic => None,
                    CurveKind::Hermitian => Some(hensel_y(curve, &rf, &x_series, w.y_res)),
                };
                Ok(ExpansionCtx {
                    rf,
                    n,
                    curve_kind: curve.kind,
                    x_series,
                    y_series,
                    emb: Some(w.emb.clone()),
                    x_powers: Vec::new(),
                    y_powers: Vec::new(),
                })
            }
        }
    }

    fn lift_poly(&self, p: &UniPoly) -> UniPoly {
        match &self.emb {
            Some(e) => e.map_poly(p),
            None => p.clone(),
        }
    }

    /// Series of the monomial x^i y^j.
    pub fn monomial_series(&mut self, i: usize, j: usize) -> Series {
        while self.x_powers.len() <= i {
            let next = match self.x_powers.last() {
                None => Series::constant(self.rf.one(), self.n),
                Some(prev) => prev.mul(&self.rf, &self.x_series),
            };
            self.x_powers.push(next);
        }
        while self.y_powers.len() <= j {
            let next = match self.y_powers.last() {
                None => Series::constant(self.rf.one(), self.n),
                Some(prev) => prev.mul(
                    &self.rf,
                    self.y_series.as_ref().expect("y only on hermitian"),
                ),
            };
            self.y_powers.push(next);
        }
        self.x_powers[i].mul(&self.rf, &self.y_powers[j])
    }

    /// Full expansion of a function (no pole at the place).
    pub fn expand(&mut self, f: &FieldFunction) -> Series {
        match f {
            FieldFunction::Rational(p) => {
                debug_assert_eq!(self.curve_kind, CurveKind::RationalCyclic);
                let lifted = self.lift_poly(p);
                self.x_series.eval_poly(&self.rf, &lifted)
            }
            FieldFunction::Hermitian(parts) => {
                let mut acc = Series::zero(self.n);
                let y = self
                    .y_series
                    .clone()
                    .expect("hermitian expansion context");
                for p in parts.iter().rev() {
                    acc = acc.mul(&self.rf, &y);
                    let lifted = self.lift_poly(p);
                    let term = self.x_series.eval_poly(&self.rf, &lifted);
                    acc = acc.add(&self.rf, &term);
                }
                acc
            }
        }
    }
}

/// Hensel-lifts Y^q + Y = x(t)^(q+1) from Y(0) = b. Each step replaces
/// Y by c - Y^q and multiplies the error order by q.
fn hensel_y(curve: &CurveSpec, rf: &FieldSpec, x_series: &Series, b: Fe) -> Series {
    let n = x_series.len();
    let q = curve.q;
    let c = {
        let mut acc = Series::constant(rf.one(), n);
        for _ in 0..q + 1 {
            acc = acc.mul(rf, x_series);
        }
        acc
    };
    let mut y = Series::constant(b, n);
    let mut prec: u64 = 1;
    while prec < n as u64 {
        y = c.sub(rf, &series_pow_char_p(rf, &y, q));
        prec *= q;
    }
    // residual check: Y^q + Y - x^(q+1) = 0 mod t^n
    debug_assert!(series_pow_char_p(rf, &y, q)
        .add(rf, &y)
        .sub(rf, &c)
        .is_zero());
    y
}

/// Expansion of f at a place to order e (coefficients f_0..f_e).
pub fn local_expand(
    curve: &CurveSpec,
    f: &FieldFunction,
    place: &Place,
    e: usize,
) -> Result<LocalSeries> {
    let mut ctx = ExpansionCtx::at_place(curve, place, e + 1)?;
    Ok(ctx.expand(f))
}

/// The sigma-action on an expansion at a Frobenius place: every coefficient
/// is raised to q_res^power; t is fixed.
pub fn series_frobenius(rf: &FieldSpec, s: &LocalSeries, q_res: u128, power: u32) -> LocalSeries {
    s.frobenius(rf, q_res, power)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{enumerate_split_places, evaluate, galois_apply, rr_basis};
    use crate::frobenius::find_frobenius_place;

    #[test]
    fn uniformizer_expands_to_t_exactly() {
        // hermitian q=2, eta=2 place: p_u(x) expands to the series t.
        let curve = CurveSpec::hermitian(2, 1, None).unwrap();
        let search = find_frobenius_place(&curve, 2).unwrap();
        let Place::Extension(w) = &search.place else { panic!() };
        let pu_fn = FieldFunction::Hermitian(vec![w.p_u.clone()]);
        let s = local_expand(&curve, &pu_fn, &search.place, 4).unwrap();
        let rf = &w.residue;
        let mut expect = Series::zero(5);
        expect.coeffs[1] = rf.one();
        assert_eq!(s, expect);
    }

    #[test]
    fn linear_uniformizer_x_is_a_plus_t() {
        let curve = CurveSpec::hermitian(2, 2, None).unwrap();
        let split = enumerate_split_places(&curve);
        let x = FieldFunction::x(&curve);
        let s = local_expand(&curve, &x, &split[3], 3).unwrap();
        let Place::Rational { x: a, .. } = &split[3] else { panic!() };
        let f = &curve.constants;
        assert_eq!(s.coeffs[0], *a);
        assert_eq!(s.coeffs[1], f.one());
        assert!(s.coeffs[2].is_zero());
        assert!(s.coeffs[3].is_zero());
    }

    #[test]
    fn y_expansion_satisfies_the_curve_equation() {
        // f = y over hermitian q=2: residual check to order 4.
        let curve = CurveSpec::hermitian(2, 1, None).unwrap();
        let search = find_frobenius_place(&curve, 2).unwrap();
        let y = FieldFunction::y(&curve);
        let e = 4;
        let s = local_expand(&curve, &y, &search.place, e).unwrap();
        let Place::Extension(w) = &search.place else { panic!() };
        let rf = &w.residue;
        let x = local_expand(&curve, &FieldFunction::x(&curve), &search.place, e).unwrap();
        let x3 = x.pow(rf, 3);
        let resid = series_pow_char_p(rf, &s, 2).add(rf, &s).sub(rf, &x3);
        assert!(resid.is_zero());
    }

    #[test]
    fn expansion_constant_term_is_evaluation() {
        let curve = CurveSpec::hermitian(2, 2, None).unwrap();
        let search = find_frobenius_place(&curve, 2).unwrap();
        let basis = rr_basis(&curve, 10);
        for f in &basis {
            let s = local_expand(&curve, f, &search.place, 3).unwrap();
            assert_eq!(s.coeffs[0], evaluate(&curve, f, &search.place).unwrap());
        }
    }

    #[test]
    fn expansion_respects_multiplication() {
        let curve = CurveSpec::hermitian(2, 2, None).unwrap();
        let search = find_frobenius_place(&curve, 2).unwrap();
        let Place::Extension(w) = &search.place else { panic!() };
        let rf = &w.residue;
        let basis = rr_basis(&curve, 10);
        let mut st = 11u64;
        let mut next = move || {
            st ^= st << 13;
            st ^= st >> 7;
            st ^= st << 17;
            st
        };
        let fcf = &curve.constants;
        for _ in 0..10 {
            let mut a = FieldFunction::zero(&curve);
            let mut b = FieldFunction::zero(&curve);
            for item in &basis {
                a = a.add(&curve, &item.scale(&curve, fcf.from_index((next() % 16) as u128)));
                b = b.add(&curve, &item.scale(&curve, fcf.from_index((next() % 16) as u128)));
            }
            let sa = local_expand(&curve, &a, &search.place, 5).unwrap();
            let sb = local_expand(&curve, &b, &search.place, 5).unwrap();
            let sab = local_expand(&curve, &a.mul(&curve, &b), &search.place, 5).unwrap();
            assert_eq!(sa.mul(rf, &sb), sab);
        }
    }

    #[test]
    fn frobenius_twist_matches_galois_expansion() {
        // series_frobenius(expand(f), 1) = expand(sigma(f)) at a Frobenius place.
        for curve in [
            CurveSpec::hermitian(2, 1, None).unwrap(),
            CurveSpec::hermitian(2, 2, None).unwrap(),
        ] {
            let search = find_frobenius_place(&curve, 2).unwrap();
            let Place::Extension(w) = &search.place else { panic!() };
            let basis = rr_basis(&curve, 8);
            let fcf = &curve.constants;
            let mut st = 3u64;
            let mut next = move || {
                st ^= st << 13;
                st ^= st >> 7;
                st ^= st << 17;
                st
            };
            for _ in 0..30 {
                let mut f = FieldFunction::zero(&curve);
                for item in &basis {
                    f = f.add(
                        &curve,
                        &item.scale(&curve, fcf.from_index(next() as u128 % fcf.order())),
                    );
                }
                let twisted = series_frobenius(
                    &w.residue,
                    &local_expand(&curve, &f, &search.place, 4).unwrap(),
                    w.q_res,
                    1,
                );
                let direct =
                    local_expand(&curve, &galois_apply(&curve, &f, 1), &search.place, 4).unwrap();
                assert_eq!(twisted, direct);
            }
        }
    }

    #[test]
    fn cyclic_expansion_at_designated_place() {
        let f = FieldSpec::new(7, 1, None).unwrap();
        let curve = CurveSpec::rational_cyclic(f, None).unwrap();
        let search = find_frobenius_place(&curve, 1).unwrap();
        let Place::Extension(w) = &search.place else { panic!() };
        let rf = &w.residue;
        // x(t)^6 - gamma = t
        let x = local_expand(&curve, &FieldFunction::x(&curve), &search.place, 5).unwrap();
        let x6 = x.pow(rf, 6);
        let mut expect = Series::constant(w.emb.map(curve.auto_elem), 6);
        expect.coeffs[1] = rf.one();
        assert_eq!(x6, expect);
        // constant coefficient is the residue of x
        assert_eq!(x.coeffs[0], w.x_res);
    }
}
