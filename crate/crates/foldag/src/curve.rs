//! Concrete function fields with a designated folding automorphism.
//!
//! Two variants are provided: the rational function field GF(q)(x) with
//! sigma: x -> gamma*x of order q-1, and the Hermitian field
//! GF(q^2)(x, y), y^q + y = x^(q+1), folded by sigma_beta: y -> y + beta for
//! a trace-zero beta (order p, the characteristic). Functions live in a
//! reduced monomial form, places carry their residue fields, and the Galois
//! action on functions and places satisfies sigma(f)(v) = f(sigma^(-1) v).

use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};
use crate::poly::{Embedding, UniPoly};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CurveKind {
    RationalCyclic,
    Hermitian,
}

/// A function field plus folding automorphism.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub kind: CurveKind,
    /// Full constants field: GF(q) for rational-cyclic, GF(q^2) for Hermitian.
    pub constants: FieldSpec,
    /// Curve parameter: the q in y^q + y = x^(q+1) for Hermitian, the
    /// constants order for rational-cyclic.
    pub q: u64,
    pub genus: usize,
    /// Order of the folding automorphism.
    pub m: usize,
    /// Rational-cyclic: the primitive element gamma; Hermitian: beta.
    pub auto_elem: Fe,
}

impl CurveSpec {
    /// GF(q)(x) with sigma: x -> gamma*x. `gamma` defaults to the
    /// smallest-index generator of the multiplicative group.
    pub fn rational_cyclic(constants: FieldSpec, gamma: Option<Fe>) -> Result<CurveSpec> {
        let q = constants.order();
        let gamma = gamma.unwrap_or_else(|| constants.smallest_primitive());
        if constants.mult_order(gamma) != q - 1 {
            return Err(Error::BadCodeParams(
                "gamma does not generate the multiplicative group".into(),
            ));
        }
        Ok(CurveSpec {
            kind: CurveKind::RationalCyclic,
            q: q as u64,
            genus: 0,
            m: (q - 1) as usize,
            auto_elem: gamma,
            constants,
        })
    }

    /// The Hermitian curve y^q + y = x^(q+1) over GF(q^2), q = p^j, with
    /// sigma_beta: y -> y + beta. `beta` defaults to the smallest-index
    /// nonzero trace-zero element.
    pub fn hermitian(p: u64, j: usize, beta: Option<Fe>) -> Result<CurveSpec> {
        let constants = FieldSpec::new(p, 2 * j, None)?;
        let q = {
            let mut t = 1u64;
            for _ in 0..j {
                t *= p;
            }
            t
        };
        let beta = match beta {
            Some(b) => b,
            None => {
                let mut found = None;
                for idx in 1..constants.order() {
                    let b = constants.from_index(idx);
                    if constants.add(constants.pow(b, q as u128), b).is_zero() {
                        found = Some(b);
                        break;
                    }
                }
                found.expect("trace-zero elements exist")
            }
        };
        if beta.is_zero()
            || !constants
                .add(constants.pow(beta, q as u128), beta)
                .is_zero()
        {
            return Err(Error::BadCodeParams(
                "beta must be a nonzero trace-zero element".into(),
            ));
        }
        Ok(CurveSpec {
            kind: CurveKind::Hermitian,
            q,
            genus: (q as usize * (q as usize - 1)) / 2,
            m: p as usize,
            auto_elem: beta,
            constants,
        })
    }

    /// The trace-zero group Omega = {b : b^q + b = 0}, in index order.
    pub fn trace_zero_group(&self) -> Vec<Fe> {
        assert_eq!(self.kind, CurveKind::Hermitian);
        let f = &self.constants;
        f.elements()
            .filter(|&b| f.add(f.pow(b, self.q as u128), b).is_zero())
            .collect()
    }
}

/// Element of the function field in reduced monomial form. Hermitian
/// functions keep y-degree < q via y^q = x^(q+1) - y.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FieldFunction {
    Rational(UniPoly),
    /// coefficient polynomials in x, index = power of y, length <= q
    Hermitian(Vec<UniPoly>),
}

impl FieldFunction {
    pub fn zero(curve: &CurveSpec) -> FieldFunction {
        match curve.kind {
            CurveKind::RationalCyclic => FieldFunction::Rational(UniPoly::zero()),
            CurveKind::Hermitian => FieldFunction::Hermitian(Vec::new()),
        }
    }

    pub fn constant(curve: &CurveSpec, c: Fe) -> FieldFunction {
        match curve.kind {
            CurveKind::RationalCyclic => FieldFunction::Rational(UniPoly::constant(c)),
            CurveKind::Hermitian => {
                FieldFunction::Hermitian(vec![UniPoly::constant(c)]).normalized()
            }
        }
    }

    pub fn one(curve: &CurveSpec) -> FieldFunction {
        FieldFunction::constant(curve, curve.constants.one())
    }

    pub fn x(curve: &CurveSpec) -> FieldFunction {
        match curve.kind {
            CurveKind::RationalCyclic => FieldFunction::Rational(UniPoly::x(&curve.constants)),
            CurveKind::Hermitian => FieldFunction::Hermitian(vec![UniPoly::x(&curve.constants)]),
        }
    }

    pub fn y(curve: &CurveSpec) -> FieldFunction {
        assert_eq!(curve.kind, CurveKind::Hermitian);
        FieldFunction::Hermitian(vec![UniPoly::zero(), UniPoly::one(&curve.constants)])
    }

    /// Monomial x^i y^j (j = 0 for rational-cyclic).
    pub fn monomial(curve: &CurveSpec, i: usize, j: usize) -> FieldFunction {
        let f = &curve.constants;
        match curve.kind {
            CurveKind::RationalCyclic => {
                assert_eq!(j, 0);
                FieldFunction::Rational(UniPoly::monomial(f.one(), i))
            }
            CurveKind::Hermitian => {
                assert!(j < curve.q as usize);
                let mut parts = vec![UniPoly::zero(); j + 1];
                parts[j] = UniPoly::monomial(f.one(), i);
                FieldFunction::Hermitian(parts)
            }
        }
    }

    fn normalized(self) -> FieldFunction {
        match self {
            FieldFunction::Hermitian(mut parts) => {
                while parts.last().map_or(false, |p| p.is_zero()) {
                    parts.pop();
                }
                FieldFunction::Hermitian(parts)
            }
            r => r,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldFunction::Rational(p) => p.is_zero(),
            FieldFunction::Hermitian(parts) => parts.iter().all(|p| p.is_zero()),
        }
    }

    pub fn add(&self, curve: &CurveSpec, other: &FieldFunction) -> FieldFunction {
        let f = &curve.constants;
        match (self, other) {
            (FieldFunction::Rational(a), FieldFunction::Rational(b)) => {
                FieldFunction::Rational(a.add(f, b))
            }
            (FieldFunction::Hermitian(a), FieldFunction::Hermitian(b)) => {
                let n = a.len().max(b.len());
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    let pa = a.get(i).cloned().unwrap_or_else(UniPoly::zero);
                    let pb = b.get(i).cloned().unwrap_or_else(UniPoly::zero);
                    out.push(pa.add(f, &pb));
                }
                FieldFunction::Hermitian(out).normalized()
            }
            _ => panic!("mixed curve variants"),
        }
    }

    pub fn neg(&self, curve: &CurveSpec) -> FieldFunction {
        let f = &curve.constants;
        match self {
            FieldFunction::Rational(a) => FieldFunction::Rational(a.neg(f)),
            FieldFunction::Hermitian(a) => {
                FieldFunction::Hermitian(a.iter().map(|p| p.neg(f)).collect()).normalized()
            }
        }
    }

    pub fn sub(&self, curve: &CurveSpec, other: &FieldFunction) -> FieldFunction {
        self.add(curve, &other.neg(curve))
    }

    pub fn scale(&self, curve: &CurveSpec, c: Fe) -> FieldFunction {
        let f = &curve.constants;
        match self {
            FieldFunction::Rational(a) => FieldFunction::Rational(a.scale(f, c)),
            FieldFunction::Hermitian(a) => {
                FieldFunction::Hermitian(a.iter().map(|p| p.scale(f, c)).collect()).normalized()
            }
        }
    }

    pub fn mul(&self, curve: &CurveSpec, other: &FieldFunction) -> FieldFunction {
        let f = &curve.constants;
        match (self, other) {
            (FieldFunction::Rational(a), FieldFunction::Rational(b)) => {
                FieldFunction::Rational(a.mul(f, b))
            }
            (FieldFunction::Hermitian(a), FieldFunction::Hermitian(b)) => {
                if self.is_zero() || other.is_zero() {
                    return FieldFunction::Hermitian(Vec::new());
                }
                let q = curve.q as usize;
                let n = a.len() + b.len() - 1;
                let mut conv = vec![UniPoly::zero(); n];
                for (i, pa) in a.iter().enumerate() {
                    if pa.is_zero() {
                        continue;
                    }
                    for (j, pb) in b.iter().enumerate() {
                        if !pb.is_zero() {
                            conv[i + j] = conv[i + j].add(f, &pa.mul(f, pb));
                        }
                    }
                }
                // y^q = x^(q+1) - y, applied from the top down.
                let xq1 = UniPoly::monomial(f.one(), q + 1);
                for k in (q..n).rev() {
                    if conv[k].is_zero() {
                        continue;
                    }
                    let c = std::mem::replace(&mut conv[k], UniPoly::zero());
                    let lowered = c.mul(f, &xq1);
                    conv[k - q] = conv[k - q].add(f, &lowered);
                    conv[k - q + 1] = conv[k - q + 1].sub(f, &c);
                }
                conv.truncate(q);
                FieldFunction::Hermitian(conv).normalized()
            }
            _ => panic!("mixed curve variants"),
        }
    }

    pub fn pow(&self, curve: &CurveSpec, e: usize) -> FieldFunction {
        let mut acc = FieldFunction::one(curve);
        for _ in 0..e {
            acc = acc.mul(curve, self);
        }
        acc
    }

    /// y-parts accessor (empty for rational).
    pub fn hermitian_parts(&self) -> &[UniPoly] {
        match self {
            FieldFunction::Hermitian(p) => p,
            FieldFunction::Rational(_) => &[],
        }
    }
}

/// A place of the function field.
#[derive(Clone, Debug)]
pub enum Place {
    Infinity,
    /// Rational point: x-coordinate, plus y for the Hermitian curve.
    Rational { x: Fe, y: Option<Fe> },
    Extension(ExtPlace),
}

/// A higher-degree place, given by a monic irreducible p_u(x) over the
/// constants together with residue data in F_w.
#[derive(Clone, Debug)]
pub struct ExtPlace {
    pub p_u: UniPoly,
    pub eta: usize,
    pub residue: FieldSpec,
    pub emb: Embedding,
    pub x_res: Fe,
    /// Hermitian: the y-image; rational-cyclic: unused (zero).
    pub y_res: Fe,
    /// Degree over the constants field.
    pub degree: usize,
    /// #F_u = (constants order)^eta.
    pub q_res: u128,
}

impl Place {
    /// Lexicographic key on (x-index, y-index); infinity sorts last.
    pub fn key(&self, curve: &CurveSpec) -> (u128, u128) {
        match self {
            Place::Infinity => (u128::MAX, u128::MAX),
            Place::Rational { x, y } => (
                curve.constants.index(*x),
                y.map_or(0, |b| curve.constants.index(b)),
            ),
            Place::Extension(_) => (u128::MAX - 1, u128::MAX - 1),
        }
    }

    pub fn degree(&self, curve: &CurveSpec) -> usize {
        match self {
            Place::Infinity | Place::Rational { .. } => 1,
            Place::Extension(e) => {
                let _ = curve;
                e.degree
            }
        }
    }
}

impl PartialEq for Place {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Place::Infinity, Place::Infinity) => true,
            (Place::Rational { x: a, y: b }, Place::Rational { x: c, y: d }) => a == c && b == d,
            (Place::Extension(a), Place::Extension(b)) => {
                a.p_u == b.p_u && a.x_res == b.x_res && a.y_res == b.y_res
            }
            _ => false,
        }
    }
}
impl Eq for Place {}

/// Ordered Galois orbit block: places[i] = sigma^(-i)(rep).
#[derive(Clone, Debug)]
pub struct Orbit {
    pub places: Vec<Place>,
}

impl Orbit {
    pub fn rep(&self) -> &Place {
        &self.places[0]
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }
}

/// All completely split rational places (excluding infinity), sorted by the
/// serialization key. Rational-cyclic: the q-1 places x = gamma^i; Hermitian:
/// the q^3 points (a, b) with b^q + b = a^(q+1).
pub fn enumerate_split_places(curve: &CurveSpec) -> Vec<Place> {
    let f = &curve.constants;
    let mut out = Vec::new();
    match curve.kind {
        CurveKind::RationalCyclic => {
            for idx in 1..f.order() {
                out.push(Place::Rational {
                    x: f.from_index(idx),
                    y: None,
                });
            }
        }
        CurveKind::Hermitian => {
            let q = curve.q as u128;
            for a_idx in 0..f.order() {
                let a = f.from_index(a_idx);
                let rhs = f.pow(a, q + 1);
                for b_idx in 0..f.order() {
                    let b = f.from_index(b_idx);
                    if f.add(f.pow(b, q), b) == rhs {
                        out.push(Place::Rational { x: a, y: Some(b) });
                    }
                }
            }
        }
    }
    out.sort_by_key(|p| p.key(curve));
    out
}

/// Ordered basis of L(bound * P_inf). Rational-cyclic: 1, x, .., x^bound.
/// Hermitian: monomials x^i y^j with j < q and iq + j(q+1) <= bound, ordered
/// by pole order (pole orders of distinct reduced monomials are distinct).
pub fn rr_basis(curve: &CurveSpec, bound: usize) -> Vec<FieldFunction> {
    match curve.kind {
        CurveKind::RationalCyclic => (0..=bound)
            .map(|i| FieldFunction::monomial(curve, i, 0))
            .collect(),
        CurveKind::Hermitian => {
            let q = curve.q as usize;
            let mut monos: Vec<(usize, usize, usize)> = Vec::new(); // (pole, j, i)
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
            monos
                .into_iter()
                .map(|(_, j, i)| FieldFunction::monomial(curve, i, j))
                .collect()
        }
    }
}

/// Pole order at infinity, i.e. -V_Pinf(f). Errors on the zero function.
pub fn pole_order_at_infinity(curve: &CurveSpec, f: &FieldFunction) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    match f {
        FieldFunction::Rational(p) => Ok(p.degree().unwrap()),
        FieldFunction::Hermitian(parts) => {
            let q = curve.q as usize;
            let mut best = 0;
            for (j, p) in parts.iter().enumerate() {
                if let Some(d) = p.degree() {
                    best = best.max(d * q + j * (q + 1));
                }
            }
            Ok(best)
        }
    }
}

/// Evaluation at a place without a pole there. Rational places land in the
/// constants field, extension places in their residue field.
pub fn evaluate(curve: &CurveSpec, f: &FieldFunction, v: &Place) -> Result<Fe> {
    let c = &curve.constants;
    match v {
        Place::Infinity => {
            if matches!(f, FieldFunction::Rational(p) if p.degree() <= Some(0))
                || f.is_zero()
            {
                Ok(match f {
                    FieldFunction::Rational(p) => p.coeff(0),
                    FieldFunction::Hermitian(_) => Fe::ZERO,
                })
            } else {
                Err(Error::PoleAtPlace)
            }
        }
        Place::Rational { x, y } => match f {
            FieldFunction::Rational(p) => Ok(p.eval(c, *x)),
            FieldFunction::Hermitian(parts) => {
                let b = y.expect("hermitian place carries a y-coordinate");
                let mut acc = Fe::ZERO;
                for p in parts.iter().rev() {
                    acc = c.add(c.mul(acc, b), p.eval(c, *x));
                }
                Ok(acc)
            }
        },
        Place::Extension(w) => {
            let rf = &w.residue;
            match f {
                FieldFunction::Rational(p) => Ok(w.emb.map_poly(p).eval(rf, w.x_res)),
                FieldFunction::Hermitian(parts) => {
                    let mut acc = Fe::ZERO;
                    for p in parts.iter().rev() {
                        let px = w.emb.map_poly(p).eval(rf, w.x_res);
                        acc = rf.add(rf.mul(acc, w.y_res), px);
                    }
                    Ok(acc)
                }
            }
        }
    }
}

/// sigma^power applied to a function. Rational-cyclic: x -> gamma^power x.
/// Hermitian: y -> y + (power mod p) * beta. Applying with power = m is the
/// identity.
pub fn galois_apply(curve: &CurveSpec, f: &FieldFunction, power: i64) -> FieldFunction {
    let c = &curve.constants;
    match f {
        FieldFunction::Rational(p) => {
            let e = power.rem_euclid(curve.m as i64) as u128;
            let g = c.pow(curve.auto_elem, e);
            let mut coeffs = Vec::with_capacity(p.coeffs.len());
            let mut gi = c.one();
            for &a in &p.coeffs {
                coeffs.push(c.mul(a, gi));
                gi = c.mul(gi, g);
            }
            FieldFunction::Rational(UniPoly::from_coeffs(coeffs))
        }
        FieldFunction::Hermitian(parts) => {
            let p_char = curve.constants.characteristic();
            let e = power.rem_euclid(p_char as i64) as u64;
            let delta = c.mul(c.scalar(e), curve.auto_elem);
            if delta.is_zero() {
                return f.clone();
            }
            // substitute y -> y + delta; j < q stays in reduced form
            let mut out = vec![UniPoly::zero(); parts.len()];
            for (j, pj) in parts.iter().enumerate() {
                if pj.is_zero() {
                    continue;
                }
                // (y + delta)^j = sum_i C(j,i) delta^(j-i) y^i
                for i in 0..=j {
                    let bin = binom_mod_p(j as u64, i as u64, p_char);
                    if bin == 0 {
                        continue;
                    }
                    let coef = c.mul(c.scalar(bin), c.pow(delta, (j - i) as u128));
                    out[i] = out[i].add(c, &pj.scale(c, coef));
                }
            }
            FieldFunction::Hermitian(out).normalized()
        }
    }
}

/// sigma^power applied to a place. Infinity is totally ramified and fixed.
/// The defining identity sigma(f)(v) = f(sigma^(-1) v) holds against
/// `galois_apply`.
pub fn galois_apply_place(curve: &CurveSpec, v: &Place, power: i64) -> Place {
    let c = &curve.constants;
    match v {
        Place::Infinity => Place::Infinity,
        Place::Rational { x, y } => match curve.kind {
            CurveKind::RationalCyclic => {
                // sigma(place x = a) = place x = gamma^(-1) a
                let e = (-power).rem_euclid(curve.m as i64) as u128;
                Place::Rational {
                    x: c.mul(*x, c.pow(curve.auto_elem, e)),
                    y: *y,
                }
            }
            CurveKind::Hermitian => {
                let p_char = c.characteristic();
                let e = power.rem_euclid(p_char as i64) as u64;
                let delta = c.mul(c.scalar(e), curve.auto_elem);
                Place::Rational {
                    x: *x,
                    y: Some(c.sub(y.expect("hermitian place"), delta)),
                }
            }
        },
        Place::Extension(w) => match curve.kind {
            // Totally inert below: the designated place is sigma-stable.
            CurveKind::RationalCyclic => Place::Extension(w.clone()),
            CurveKind::Hermitian => {
                let p_char = c.characteristic();
                let e = power.rem_euclid(p_char as i64) as u64;
                let delta = w
                    .residue
                    .mul(w.residue.scalar(e), w.emb.map(curve.auto_elem));
                let mut w2 = w.clone();
                w2.y_res = w.residue.sub(w.y_res, delta);
                Place::Extension(w2)
            }
        },
    }
}

/// Partitions the split places into ordered orbit blocks of width m_prime.
/// Within a full sigma-orbit the m/m_prime sub-blocks follow the
/// sigma^(-m_prime) sequence; full orbits are ordered by their smallest
/// place, which is taken as the representative.
pub fn orbit_partition(
    curve: &CurveSpec,
    split: &[Place],
    m_prime: usize,
) -> Result<Vec<Orbit>> {
    let m = curve.m;
    if m_prime == 0 || m % m_prime != 0 {
        return Err(Error::FoldingMismatch { m_prime, m });
    }
    let mut sorted: Vec<Place> = split.to_vec();
    sorted.sort_by_key(|p| p.key(curve));
    let mut used: std::collections::HashSet<(u128, u128)> = std::collections::HashSet::new();
    let mut blocks = Vec::new();
    for v in &sorted {
        let key = v.key(curve);
        if used.contains(&key) {
            continue;
        }
        // full orbit under sigma^(-1)
        let mut orbit = Vec::with_capacity(m);
        let mut cur = v.clone();
        for i in 0..m {
            let ck = cur.key(curve);
            if used.contains(&ck) || (i > 0 && cur == *v) {
                return Err(Error::ShortOrbit);
            }
            used.insert(ck);
            orbit.push(cur.clone());
            cur = galois_apply_place(curve, &cur, -1);
        }
        if cur != *v {
            return Err(Error::ShortOrbit);
        }
        for chunk in orbit.chunks(m_prime) {
            blocks.push(Orbit {
                places: chunk.to_vec(),
            });
        }
    }
    Ok(blocks)
}

/// C(n, k) mod p for small n.
pub fn binom_mod_p(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.checked_mul((n - i) as u128).expect("binomial overflow");
        den = den.checked_mul((i + 1) as u128).expect("binomial overflow");
        let g = gcd_u128(num, den);
        num /= g;
        den /= g;
    }
    debug_assert_eq!(den, 1);
    (num % p as u128) as u64
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm_q4() -> CurveSpec {
        CurveSpec::hermitian(2, 2, None).unwrap()
    }

    fn rc(q: u64) -> CurveSpec {
        let f = FieldSpec::new(q, 1, None).unwrap();
        CurveSpec::rational_cyclic(f, None).unwrap()
    }

    #[test]
    fn hermitian_q4_has_64_split_places() {
        let c = herm_q4();
        assert_eq!(enumerate_split_places(&c).len(), 64);
        assert_eq!(c.genus, 6);
        assert_eq!(c.m, 2);
        // beta = 1 is trace zero in characteristic 2
        assert_eq!(c.constants.index(c.auto_elem), 1);
    }

    #[test]
    fn hermitian_q2_has_8_split_places() {
        let c = CurveSpec::hermitian(2, 1, None).unwrap();
        assert_eq!(enumerate_split_places(&c).len(), 8);
        assert_eq!(c.genus, 1);
    }

    #[test]
    fn rational_q13_split_places_are_the_multiplicative_group() {
        let c = rc(13);
        let places = enumerate_split_places(&c);
        assert_eq!(places.len(), 12);
        for p in &places {
            match p {
                Place::Rational { x, .. } => assert!(!x.is_zero()),
                _ => panic!(),
            }
        }
    }

    #[test]
    fn rr_basis_hermitian_q4_bound10() {
        let c = herm_q4();
        let basis = rr_basis(&c, 10);
        // pole numbers in <4,5> up to 10: 0,4,5,8,9,10
        assert_eq!(basis.len(), 6);
        let poles: Vec<usize> = basis
            .iter()
            .map(|f| pole_order_at_infinity(&c, f).unwrap())
            .collect();
        assert_eq!(poles, vec![0, 4, 5, 8, 9, 10]);
        assert_eq!(basis[0], FieldFunction::one(&c));
        assert_eq!(basis[1], FieldFunction::x(&c));
        assert_eq!(basis[2], FieldFunction::y(&c));
    }

    #[test]
    fn rr_basis_hermitian_bound3_is_constants_only() {
        let c = herm_q4();
        assert_eq!(rr_basis(&c, 3).len(), 1);
    }

    #[test]
    fn pole_orders_multiply() {
        let c = herm_q4();
        let x = FieldFunction::x(&c);
        let y = FieldFunction::y(&c);
        assert_eq!(pole_order_at_infinity(&c, &x).unwrap(), 4);
        assert_eq!(pole_order_at_infinity(&c, &y).unwrap(), 5);
        let x2y3 = x.pow(&c, 2).mul(&c, &y.pow(&c, 3));
        assert_eq!(pole_order_at_infinity(&c, &x2y3).unwrap(), 23);
    }

    #[test]
    fn hermitian_relation_reduces() {
        // y^q * y = y^(q+1) stays reduced and respects the curve equation.
        let c = herm_q4();
        let y = FieldFunction::y(&c);
        let yq = y.pow(&c, 4);
        // y^4 = x^5 - y
        let x5 = FieldFunction::x(&c).pow(&c, 5);
        let expect = x5.sub(&c, &y);
        assert_eq!(yq, expect);
    }

    #[test]
    fn galois_fixes_x_and_shifts_y() {
        let c = herm_q4();
        let x = FieldFunction::x(&c);
        assert_eq!(galois_apply(&c, &x, 1), x);
        let y = FieldFunction::y(&c);
        // order 2: applying twice is the identity
        assert_eq!(galois_apply(&c, &galois_apply(&c, &y, 1), 1), y);
        assert_ne!(galois_apply(&c, &y, 1), y);
    }

    #[test]
    fn galois_rational_scales_coefficients() {
        // q=5, gamma=2: sigma(x^2) = (2x)^2 = 4x^2
        let f = FieldSpec::new(5, 1, None).unwrap();
        let gamma = f.from_index(2);
        let c = CurveSpec::rational_cyclic(f.clone(), Some(gamma)).unwrap();
        let x2 = FieldFunction::monomial(&c, 2, 0);
        let got = galois_apply(&c, &x2, 1);
        assert_eq!(got, x2.scale(&c, f.from_index(4)));
    }

    #[test]
    fn galois_consistency_on_places() {
        // sigma(f)(v) = f(sigma^(-1)(v)) on every split place and basis function
        for curve in [herm_q4(), rc(13)] {
            let split = enumerate_split_places(&curve);
            let basis = rr_basis(&curve, 9);
            for i in 0..curve.m as i64 {
                for f in &basis {
                    let sf = galois_apply(&curve, f, i);
                    for v in split.iter().take(20) {
                        let lhs = evaluate(&curve, &sf, v).unwrap();
                        let rhs =
                            evaluate(&curve, f, &galois_apply_place(&curve, v, -i)).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_partition_hermitian_q4() {
        let c = herm_q4();
        let split = enumerate_split_places(&c);
        let blocks = orbit_partition(&c, &split, 2).unwrap();
        assert_eq!(blocks.len(), 32);
        for b in &blocks {
            assert_eq!(b.len(), 2);
            assert_eq!(
                galois_apply_place(&c, b.rep(), -1),
                b.places[1]
            );
        }
        let singles = orbit_partition(&c, &split, 1).unwrap();
        assert_eq!(singles.len(), 64);
        assert!(orbit_partition(&c, &split, 3).is_err());
    }

    #[test]
    fn orbit_partition_rational_q13() {
        let c = rc(13);
        let split = enumerate_split_places(&c);
        let blocks = orbit_partition(&c, &split, 4).unwrap();
        assert_eq!(blocks.len(), 3);
        // first block starts at x = 1 and walks sigma^(-1): x = gamma^i
        let g = c.auto_elem;
        let f = &c.constants;
        let expect: Vec<u128> = (0..4).map(|i| f.index(f.pow(g, i))).collect();
        let got: Vec<u128> = blocks[0]
            .places
            .iter()
            .map(|p| match p {
                Place::Rational { x, .. } => f.index(*x),
                _ => panic!(),
            })
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn orbits_cover_exactly_once() {
        let c = herm_q4();
        let split = enumerate_split_places(&c);
        let blocks = orbit_partition(&c, &split, 2).unwrap();
        let mut seen: Vec<(u128, u128)> = blocks
            .iter()
            .flat_map(|b| b.places.iter().map(|p| p.key(&c)))
            .collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 64);
    }

    #[test]
    fn sigma_order_m_is_identity_on_places() {
        for curve in [herm_q4(), rc(7)] {
            for v in enumerate_split_places(&curve) {
                assert_eq!(galois_apply_place(&curve, &v, curve.m as i64), v);
            }
        }
    }

    #[test]
    fn evaluate_x_at_rational_point() {
        let c = herm_q4();
        let split = enumerate_split_places(&c);
        let x = FieldFunction::x(&c);
        for v in split.iter().take(8) {
            match v {
                Place::Rational { x: a, .. } => {
                    assert_eq!(evaluate(&c, &x, v).unwrap(), *a);
                }
                _ => panic!(),
            }
        }
        let one = FieldFunction::one(&c);
        assert_eq!(evaluate(&c, &one, &split[0]).unwrap(), c.constants.one());
    }

    #[test]
    fn valuation_laws_on_random_combinations() {
        let c = herm_q4();
        let basis = rr_basis(&c, 10);
        let f = &c.constants;
        let mut st = 5u64;
        let mut next = move || {
            st ^= st << 13;
            st ^= st >> 7;
            st ^= st << 17;
            st
        };
        for _ in 0..30 {
            let mut a = FieldFunction::zero(&c);
            let mut b = FieldFunction::zero(&c);
            for item in &basis {
                a = a.add(&c, &item.scale(&c, f.from_index((next() % 16) as u128)));
                b = b.add(&c, &item.scale(&c, f.from_index((next() % 16) as u128)));
            }
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let va = pole_order_at_infinity(&c, &a).unwrap();
            let vb = pole_order_at_infinity(&c, &b).unwrap();
            let prod = a.mul(&c, &b);
            assert_eq!(pole_order_at_infinity(&c, &prod).unwrap(), va + vb);
            let sum = a.add(&c, &b);
            if !sum.is_zero() {
                assert!(pole_order_at_infinity(&c, &sum).unwrap() <= va.max(vb));
            }
        }
    }
}
