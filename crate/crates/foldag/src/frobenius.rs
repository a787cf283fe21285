//! Search for places where the folding automorphism acts as the Frobenius,
//! plus the exhaustive per-degree counts behind the density experiment.
//!
//! At such a place w above a degree-eta place u of the fixed field, sigma
//! satisfies sigma(f) = f^(#F_u) mod w, which the decoder uses to turn
//! sigma-twists into power maps.

use crate::curve::{CurveKind, CurveSpec, ExtPlace, Place};
use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};
use crate::linalg::{solve_linear, LinOutcome, LinSystem, Mat, Store};
use crate::poly::{monic_by_index, poly_roots, Embedding, UniPoly};

/// Outcome of a Frobenius-place search at one degree.
#[derive(Clone, Debug)]
pub struct FrobeniusSearch {
    pub place: Place,
    /// Degree-eta places of the fixed field scanned before stopping.
    pub tested: usize,
    /// Places above scanned u's where sigma is the Frobenius.
    pub hits: usize,
}

/// Full-scan counts at one degree, for the density experiment.
#[derive(Clone, Debug)]
pub struct DensityCount {
    pub eta: usize,
    /// All degree-eta places of the fixed field (all unramified here).
    pub tested: usize,
    /// Places of L above them with sigma as Frobenius, counted per place w.
    pub w_hits: usize,
}

/// Residue field F_w = GF(constants^(m*eta)) for Hermitian extension places,
/// with the embedding of the constants.
fn hermitian_residue_field(curve: &CurveSpec, eta: usize) -> Result<(FieldSpec, Embedding)> {
    let p = curve.constants.characteristic();
    let k = curve.constants.degree() * curve.m * eta;
    let rf = FieldSpec::new(p, k, None)?;
    let emb = Embedding::new(&curve.constants, &rf)?;
    Ok((rf, emb))
}

/// GF(p)-matrix of z -> z^q + z on F_w.
fn artin_schreier_matrix(rf: &FieldSpec, q: u64, prime: &FieldSpec) -> Mat {
    let k = rf.degree();
    let mut m = Mat::zeros(k, k);
    for a in 0..k {
        let e = rf.unit(a);
        let img = rf.add(rf.pow(e, q as u128), e);
        for (b, &digit) in rf.coords(img).iter().enumerate() {
            m.set(b, a, prime.scalar(digit));
        }
    }
    m
}

struct HermitianScanner {
    rf: FieldSpec,
    emb: Embedding,
    prime: FieldSpec,
    as_matrix: Mat,
    q_res: u128,
    beta_img: Fe,
    omega_img: Vec<Fe>,
}

impl HermitianScanner {
    fn new(curve: &CurveSpec, eta: usize) -> Result<HermitianScanner> {
        let (rf, emb) = hermitian_residue_field(curve, eta)?;
        let prime = FieldSpec::new(curve.constants.characteristic(), 1, None)?;
        let as_matrix = artin_schreier_matrix(&rf, curve.q, &prime);
        let mut q_res: u128 = 1;
        for _ in 0..eta {
            q_res *= curve.constants.order();
        }
        let beta_img = emb.map(curve.auto_elem);
        let omega_img = curve
            .trace_zero_group()
            .into_iter()
            .map(|b| emb.map(b))
            .collect();
        Ok(HermitianScanner {
            rf,
            emb,
            prime,
            as_matrix,
            q_res,
            beta_img,
            omega_img,
        })
    }

    /// Artin symbol of u (as the beta with sigma_beta the Frobenius above u),
    /// plus one solution b of b^q + b = x_res^(q+1).
    fn artin_symbol(&self, curve: &CurveSpec, x_res: Fe) -> (Fe, Fe) {
        let rf = &self.rf;
        let rhs_elem = rf.pow(x_res, curve.q as u128 + 1);
        let rhs: Vec<Fe> = rf
            .coords(rhs_elem)
            .iter()
            .map(|&d| self.prime.scalar(d))
            .collect();
        let sys = LinSystem {
            spec: self.prime.clone(),
            mat: Store::Dense(self.as_matrix.clone()),
            rhs,
        };
        let LinOutcome::Solved { particular, .. } =
            solve_linear(&sys).expect("well-formed system")
        else {
            panic!("Artin-Schreier equation is always solvable in F_w");
        };
        let coords: Vec<u64> = particular
            .iter()
            .map(|&x| self.prime.index(x) as u64)
            .collect();
        let b = rf.from_coords(&coords);
        let beta1 = rf.sub(rf.pow(b, self.q_res), b);
        (beta1, b)
    }

    /// Canonical places above a hit u: orbit representatives of the root set
    /// b + Omega under z -> z^q_res, ordered by element index.
    fn places_above(&self, curve: &CurveSpec, p_u: &UniPoly, eta: usize, x_res: Fe, b: Fe) -> Vec<Place> {
        let rf = &self.rf;
        let mut roots: Vec<Fe> = self.omega_img.iter().map(|&w| rf.add(b, w)).collect();
        roots.sort_by_key(|&r| rf.index(r));
        let mut seen: Vec<Fe> = Vec::new();
        let mut reps = Vec::new();
        for &r in &roots {
            if seen.contains(&r) {
                continue;
            }
            reps.push(r);
            let mut cur = r;
            for _ in 0..curve.m {
                seen.push(cur);
                cur = rf.pow(cur, self.q_res);
            }
        }
        reps.into_iter()
            .map(|y_res| {
                Place::Extension(ExtPlace {
                    p_u: p_u.clone(),
                    eta,
                    residue: rf.clone(),
                    emb: self.emb.clone(),
                    x_res,
                    y_res,
                    degree: curve.m * eta,
                    q_res: self.q_res,
                })
            })
            .collect()
    }
}

/// Scans monic irreducibles of degree eta over the constants in coordinate
/// order and returns the first place where sigma is the Frobenius, together
/// with the number of degree-eta places tested and the hit count among them.
pub fn find_frobenius_place(curve: &CurveSpec, eta: usize) -> Result<FrobeniusSearch> {
    match curve.kind {
        CurveKind::RationalCyclic => {
            if eta != 1 {
                return Err(Error::NoFrobeniusPlace { eta });
            }
            Ok(FrobeniusSearch {
                place: designated_cyclic_place(curve)?,
                tested: 1,
                hits: 1,
            })
        }
        CurveKind::Hermitian => {
            let mut tested = 0;
            let mut hits = 0;
            let places = frobenius_places(curve, eta, 1, &mut tested, &mut hits);
            match places.into_iter().next() {
                Some(place) => Ok(FrobeniusSearch {
                    place,
                    tested,
                    hits,
                }),
                None => Err(Error::NoFrobeniusPlace { eta }),
            }
        }
    }
}

/// Up to `want` Frobenius places at degree eta, in deterministic scan order.
/// `tested`/`hits` accumulate the scan counts.
pub fn frobenius_places(
    curve: &CurveSpec,
    eta: usize,
    want: usize,
    tested: &mut usize,
    hits: &mut usize,
) -> Vec<Place> {
    match curve.kind {
        CurveKind::RationalCyclic => {
            if eta != 1 || want == 0 {
                return Vec::new();
            }
            *tested += 1;
            *hits += 1;
            designated_cyclic_place(curve).into_iter().collect()
        }
        CurveKind::Hermitian => {
            let Ok(scanner) = HermitianScanner::new(curve, eta) else {
                return Vec::new();
            };
            let mut out = Vec::new();
            let order = curve.constants.order();
            let mut count: u128 = 1;
            for _ in 0..eta {
                count *= order;
            }
            for idx in 0..count {
                if out.len() >= want {
                    break;
                }
                let p_u = monic_by_index(&curve.constants, eta, idx);
                if !p_u.is_irreducible(&curve.constants) {
                    continue;
                }
                *tested += 1;
                let lifted = scanner.emb.map_poly(&p_u);
                let roots = poly_roots(&scanner.rf, &lifted).expect("p_u splits in F_w");
                let x_res = roots[0];
                let (beta1, b) = scanner.artin_symbol(curve, x_res);
                if beta1 == scanner.beta_img {
                    let places = scanner.places_above(curve, &p_u, eta, x_res, b);
                    *hits += places.len();
                    out.extend(places);
                }
            }
            out
        }
    }
}

/// Exhaustive density count at one degree: the fraction w_hits/tested tends
/// to 1/m by the Tchebotarev count of Frobenius places.
pub fn density_count(curve: &CurveSpec, eta: usize) -> Result<DensityCount> {
    match curve.kind {
        CurveKind::RationalCyclic => {
            // single designated place, constructed directly
            Ok(DensityCount {
                eta: 1,
                tested: 1,
                w_hits: 1,
            })
        }
        CurveKind::Hermitian => {
            let scanner = HermitianScanner::new(curve, eta)?;
            let order = curve.constants.order();
            let mut count: u128 = 1;
            for _ in 0..eta {
                count *= order;
            }
            let mut tested = 0;
            let mut w_hits = 0;
            let per_hit = curve.q as usize / curve.m;
            for idx in 0..count {
                let p_u = monic_by_index(&curve.constants, eta, idx);
                if !p_u.is_irreducible(&curve.constants) {
                    continue;
                }
                tested += 1;
                let lifted = scanner.emb.map_poly(&p_u);
                let roots = poly_roots(&scanner.rf, &lifted).expect("p_u splits in F_w");
                let (beta1, _) = scanner.artin_symbol(curve, roots[0]);
                if beta1 == scanner.beta_img {
                    w_hits += per_hit;
                }
            }
            Ok(DensityCount {
                eta,
                tested,
                w_hits,
            })
        }
    }
}

/// The degree-(q-1) place of x^(q-1) - gamma, at which sigma: x -> gamma x
/// acts as the q-power Frobenius (x^q = gamma x mod w identically).
pub fn designated_cyclic_place(curve: &CurveSpec) -> Result<Place> {
    assert_eq!(curve.kind, CurveKind::RationalCyclic);
    let c = &curve.constants;
    let qm1 = curve.m; // q - 1
    let gamma = curve.auto_elem;
    let mut coeffs = vec![Fe::ZERO; qm1 + 1];
    coeffs[0] = c.neg(gamma);
    coeffs[qm1] = c.one();
    let p_w = UniPoly::from_coeffs(coeffs);
    let (residue, emb, x_res) = if c.degree() == 1 {
        // Prime constants: reuse x^(q-1) - gamma as the modulus, so the class
        // of z is the residue of x.
        let modulus: Vec<u64> = p_w.coeffs.iter().map(|&v| c.index(v) as u64).collect();
        let rf = FieldSpec::new(c.characteristic(), qm1, Some(modulus))?;
        let emb = Embedding::new(c, &rf)?;
        let x_res = rf.gen();
        (rf, emb, x_res)
    } else {
        let rf = FieldSpec::new(c.characteristic(), c.degree() * qm1, None)?;
        let emb = Embedding::new(c, &rf)?;
        let lifted = emb.map_poly(&p_w);
        let roots = poly_roots(&rf, &lifted)?;
        let x_res = *roots.first().ok_or(Error::NoFrobeniusPlace { eta: 1 })?;
        (rf, emb, x_res)
    };
    // Frobenius property: x^q = gamma * x mod w.
    debug_assert_eq!(
        residue.pow(x_res, curve.q as u128),
        residue.mul(emb.map(gamma), x_res)
    );
    Ok(Place::Extension(ExtPlace {
        p_u: p_w,
        eta: 1,
        residue,
        emb,
        x_res,
        y_res: Fe::ZERO,
        degree: qm1,
        q_res: c.order(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_q13_designated_place_frobenius_property() {
        let f = FieldSpec::new(13, 1, None).unwrap();
        let curve = CurveSpec::rational_cyclic(f, None).unwrap();
        let place = designated_cyclic_place(&curve).unwrap();
        let Place::Extension(w) = &place else { panic!() };
        assert_eq!(w.degree, 12);
        // direct reduction check: x^13 mod (x^12 - gamma) = gamma * x
        let rf = &w.residue;
        assert_eq!(
            rf.pow(w.x_res, 13),
            rf.mul(w.emb.map(curve.auto_elem), w.x_res)
        );
    }

    #[test]
    fn hermitian_q4_all_degree1_places_split() {
        // The Hermitian curve is maximal: every finite degree-1 place splits
        // completely, so there are no Frobenius hits at eta = 1.
        let curve = CurveSpec::hermitian(2, 2, None).unwrap();
        let count = density_count(&curve, 1).unwrap();
        assert_eq!(count.tested, 16);
        assert_eq!(count.w_hits, 0);
        assert!(matches!(
            find_frobenius_place(&curve, 1),
            Err(Error::NoFrobeniusPlace { eta: 1 })
        ));
    }

    #[test]
    fn hermitian_q4_first_hit_at_eta2() {
        let curve = CurveSpec::hermitian(2, 2, None).unwrap();
        let search = find_frobenius_place(&curve, 2).unwrap();
        let Place::Extension(w) = &search.place else { panic!() };
        assert_eq!(w.degree, 4); // m * eta = 2 * 2
        assert_eq!(w.residue.order(), 1 << 16);
        assert_eq!(w.q_res, 256);
        // residue data satisfies the curve equation and the Frobenius shift
        let rf = &w.residue;
        let lhs = rf.add(rf.pow(w.y_res, 4), w.y_res);
        assert_eq!(lhs, rf.pow(w.x_res, 5));
        assert_eq!(
            rf.pow(w.y_res, w.q_res),
            rf.add(w.y_res, w.emb.map(curve.auto_elem))
        );
    }

    #[test]
    fn hermitian_q2_eta2_degree_check() {
        let curve = CurveSpec::hermitian(2, 1, None).unwrap();
        let search = find_frobenius_place(&curve, 2).unwrap();
        let Place::Extension(w) = &search.place else { panic!() };
        assert_eq!(w.degree, curve.m * 2);
        assert_eq!(w.residue.order(), 256); // GF(4^4)
    }

    #[test]
    fn hermitian_q2_density_near_half() {
        // q = p = 2: the Galois group is generated by sigma, so the fraction
        // of degree-eta places with a Frobenius hit tends to 1/m = 1/2.
        let curve = CurveSpec::hermitian(2, 1, None).unwrap();
        let count = density_count(&curve, 3).unwrap();
        // 20 cubic places over GF(4)
        assert_eq!(count.tested, 20);
        let frac = count.w_hits as f64 / count.tested as f64;
        let sigma = (0.25f64 / count.tested as f64).sqrt();
        assert!((frac - 0.5).abs() <= 3.0 * sigma, "fraction {frac}");
    }
}
