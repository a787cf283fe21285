//! Code parameterization, the folded encoder, agreement accounting, and the
//! seeded block-substitution channel.

use crate::curve::{enumerate_split_places, evaluate, orbit_partition, rr_basis, CurveSpec,
    FieldFunction, Orbit};
use crate::error::{Error, Result};
use crate::field::{uniform_u128_below, uniform_usize_below, Fe};
use rand_core::SeedableRng;

/// Folded code parameters: message space L((alpha-1) P_inf) evaluated over
/// the split places, folded into blocks of width m_prime along sigma-orbits.
#[derive(Clone, Debug)]
pub struct CodeParams {
    pub curve: CurveSpec,
    /// Pole bound + 1: the divisor is (alpha - 1) P_inf.
    pub alpha: usize,
    pub m: usize,
    pub m_prime: usize,
    /// Interpolation variable count, 1 <= s <= m_prime.
    pub s: usize,
    pub n: usize,
    /// Block length N' = n / m_prime.
    pub n_blocks: usize,
    pub k: usize,
    pub basis: Vec<FieldFunction>,
    pub blocks: Vec<Orbit>,
    /// Evaluation table: [block][slot][basis index].
    eval_table: Vec<Vec<Vec<Fe>>>,
}

/// Message: coefficient vector over the constants field, paired with the
/// Riemann-Roch basis order of its code.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Message {
    pub coeffs: Vec<Fe>,
}

/// Codeword or received word: N' blocks of m' constants-field symbols.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FoldedWord {
    pub blocks: Vec<Vec<Fe>>,
}

impl CodeParams {
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Display-only theoretical radius fraction in the Theorem 7.1 shape,
    /// with the exponent adapted to the s-variate interpolation.
    pub fn theoretical_radius_fraction(&self) -> f64 {
        let r = self.rate() + (self.m as f64) * (self.curve.genus as f64) / (self.n as f64);
        1.0 - r.powf(self.s as f64 / (self.s as f64 + 1.0))
    }

    pub fn message_from_indices(&self, idx: &[u128]) -> Message {
        Message {
            coeffs: idx
                .iter()
                .map(|&i| self.curve.constants.from_index(i))
                .collect(),
        }
    }

    /// Serialization key of a message: base-(field order) integer.
    pub fn message_key(&self, msg: &Message) -> u128 {
        let f = &self.curve.constants;
        let mut acc: u128 = 0;
        for &c in msg.coeffs.iter().rev() {
            acc = acc * f.order() + f.index(c);
        }
        acc
    }

    pub fn message_function(&self, msg: &Message) -> FieldFunction {
        let mut f = FieldFunction::zero(&self.curve);
        for (c, b) in msg.coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                f = f.add(&self.curve, &b.scale(&self.curve, *c));
            }
        }
        f
    }

    pub fn random_message<R: rand_core::RngCore>(&self, rng: &mut R) -> Message {
        Message {
            coeffs: (0..self.k)
                .map(|_| self.curve.constants.random(rng))
                .collect(),
        }
    }

    /// All messages in key order. Desk scale only.
    pub fn all_messages(&self) -> impl Iterator<Item = Message> + '_ {
        let f = &self.curve.constants;
        let order = f.order();
        let total = order.pow(self.k as u32);
        (0..total).map(move |mut key| {
            let coeffs = (0..self.k)
                .map(|_| {
                    let c = f.from_index(key % order);
                    key /= order;
                    c
                })
                .collect();
            Message { coeffs }
        })
    }
}

/// Builds the code: places, orbit blocks, basis, and dimensions.
pub fn make_code(
    curve: &CurveSpec,
    alpha_minus_1: usize,
    m_prime: usize,
    s: usize,
) -> Result<CodeParams> {
    let split = enumerate_split_places(curve);
    let n = split.len();
    if s == 0 || s > m_prime {
        return Err(Error::BadCodeParams(format!(
            "need 1 <= s <= m_prime, got s={s}, m_prime={m_prime}"
        )));
    }
    if alpha_minus_1 >= n {
        return Err(Error::BadCodeParams(format!(
            "alpha - 1 = {alpha_minus_1} must stay below n = {n}"
        )));
    }
    let blocks = orbit_partition(curve, &split, m_prime)?;
    let basis = rr_basis(curve, alpha_minus_1);
    let k = basis.len();
    let n_blocks = blocks.len();
    debug_assert_eq!(n_blocks * m_prime, n);
    let eval_table: Vec<Vec<Vec<Fe>>> = blocks
        .iter()
        .map(|orbit| {
            orbit
                .places
                .iter()
                .map(|v| {
                    basis
                        .iter()
                        .map(|b| evaluate(curve, b, v).expect("no pole at split places"))
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(CodeParams {
        curve: curve.clone(),
        alpha: alpha_minus_1 + 1,
        m: curve.m,
        m_prime,
        s,
        n,
        n_blocks,
        k,
        basis,
        blocks,
        eval_table,
    })
}

/// Encodes a message: block j, slot i carries f(sigma^(-i)(v_j)).
pub fn encode(code: &CodeParams, msg: &Message) -> FoldedWord {
    assert_eq!(msg.coeffs.len(), code.k, "message length mismatch");
    let f = &code.curve.constants;
    let blocks = code
        .eval_table
        .iter()
        .map(|block| {
            block
                .iter()
                .map(|slot| {
                    let mut acc = Fe::ZERO;
                    for (c, &e) in msg.coeffs.iter().zip(slot) {
                        if !c.is_zero() && !e.is_zero() {
                            acc = f.add(acc, f.mul(*c, e));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    FoldedWord { blocks }
}

/// Number of blocks matching in every slot.
pub fn agreement(code: &CodeParams, a: &FoldedWord, b: &FoldedWord) -> Result<usize> {
    if a.blocks.len() != code.n_blocks
        || b.blocks.len() != code.n_blocks
        || a.blocks.iter().any(|bl| bl.len() != code.m_prime)
        || b.blocks.iter().any(|bl| bl.len() != code.m_prime)
    {
        return Err(Error::WordShapeMismatch);
    }
    Ok(a.blocks.iter().zip(&b.blocks).filter(|(x, y)| x == y).count())
}

/// Replaces `errors` distinct blocks with uniformly random tuples that differ
/// from the originals. Deterministic under the seed (ChaCha12 stream).
pub fn corrupt(code: &CodeParams, word: &FoldedWord, errors: usize, seed: u64) -> Result<FoldedWord> {
    if errors > code.n_blocks {
        return Err(Error::ErrorCountOutOfRange {
            e: errors,
            max: code.n_blocks,
        });
    }
    if word.blocks.len() != code.n_blocks {
        return Err(Error::WordShapeMismatch);
    }
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let f = &code.curve.constants;
    let mut chosen: Vec<usize> = Vec::with_capacity(errors);
    while chosen.len() < errors {
        let idx = uniform_usize_below(&mut rng, code.n_blocks);
        if !chosen.contains(&idx) {
            chosen.push(idx);
        }
    }
    chosen.sort_unstable();
    let mut out = word.clone();
    for &j in &chosen {
        loop {
            let tuple: Vec<Fe> = (0..code.m_prime)
                .map(|_| f.from_index(uniform_u128_below(&mut rng, f.order())))
                .collect();
            if tuple != word.blocks[j] {
                out.blocks[j] = tuple;
                break;
            }
        }
    }
    Ok(out)
}

/// FoldedWord CSV: a header row (p, k_field, q, m', N') followed by one row
/// of m' integer-encoded symbols per block.
pub fn word_to_csv(code: &CodeParams, word: &FoldedWord) -> String {
    let f = &code.curve.constants;
    let mut out = format!(
        "p,k_field,q,m_prime,n_blocks\n{},{},{},{},{}\n",
        f.characteristic(),
        f.degree(),
        code.curve.q,
        code.m_prime,
        code.n_blocks
    );
    for block in &word.blocks {
        let row: Vec<String> = block.iter().map(|&x| f.index(x).to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn word_from_csv(code: &CodeParams, text: &str) -> Result<FoldedWord> {
    let f = &code.curve.constants;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty word file".into()))?;
    if header.trim() != "p,k_field,q,m_prime,n_blocks" {
        return Err(Error::Parse("missing word header".into()));
    }
    let meta = lines
        .next()
        .ok_or_else(|| Error::Parse("missing word metadata".into()))?;
    let fields: Vec<u128> = meta
        .split(',')
        .map(|t| t.trim().parse::<u128>().map_err(|e| Error::Parse(e.to_string())))
        .collect::<Result<_>>()?;
    if fields.len() != 5
        || fields[0] != f.characteristic() as u128
        || fields[1] != f.degree() as u128
        || fields[2] != code.curve.q as u128
        || fields[3] != code.m_prime as u128
        || fields[4] != code.n_blocks as u128
    {
        return Err(Error::WordShapeMismatch);
    }
    let mut blocks = Vec::with_capacity(code.n_blocks);
    for line in lines {
        let row: Vec<u128> = line
            .split(',')
            .map(|t| t.trim().parse::<u128>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<_>>()?;
        if row.len() != code.m_prime {
            return Err(Error::WordShapeMismatch);
        }
        if row.iter().any(|&v| v >= f.order()) {
            return Err(Error::Parse("symbol index out of range".into()));
        }
        blocks.push(row.into_iter().map(|v| f.from_index(v)).collect());
    }
    if blocks.len() != code.n_blocks {
        return Err(Error::WordShapeMismatch);
    }
    Ok(FoldedWord { blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{galois_apply, pole_order_at_infinity};
    use crate::field::FieldSpec;

    fn herm_code() -> CodeParams {
        let curve = CurveSpec::hermitian(2, 2, None).unwrap();
        make_code(&curve, 10, 2, 2).unwrap()
    }

    fn frs_code(q: u64, am1: usize, mp: usize, s: usize) -> CodeParams {
        let f = FieldSpec::new(q, 1, None).unwrap();
        let curve = CurveSpec::rational_cyclic(f, None).unwrap();
        make_code(&curve, am1, mp, s).unwrap()
    }

    #[test]
    fn hermitian_q4_dimensions() {
        let code = herm_code();
        assert_eq!(code.n, 64);
        assert_eq!(code.n_blocks, 32);
        assert_eq!(code.k, 6);
        assert!((code.rate() - 6.0 / 64.0).abs() < 1e-12);
    }

    #[test]
    fn frs_q13_dimensions() {
        let code = frs_code(13, 3, 4, 2);
        assert_eq!(code.n, 12);
        assert_eq!(code.n_blocks, 3);
        assert_eq!(code.k, 4);
        assert!((code.rate() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn folding_width_must_divide() {
        let curve = CurveSpec::hermitian(2, 2, None).unwrap();
        assert!(matches!(
            make_code(&curve, 10, 3, 2),
            Err(Error::FoldingMismatch { m_prime: 3, m: 2 })
        ));
    }

    #[test]
    fn constant_one_encodes_to_all_ones() {
        let code = herm_code();
        let one = code.curve.constants.one();
        let msg = Message {
            coeffs: {
                let mut v = vec![Fe::ZERO; code.k];
                v[0] = one;
                v
            },
        };
        let w = encode(&code, &msg);
        assert!(w.blocks.iter().all(|b| b.iter().all(|&x| x == one)));
        let zero = Message {
            coeffs: vec![Fe::ZERO; code.k],
        };
        let wz = encode(&code, &zero);
        assert!(wz.blocks.iter().all(|b| b.iter().all(|x| x.is_zero())));
    }

    #[test]
    fn basis_x_gives_equal_slots_per_block() {
        // sigma fixes x, so both slots of a block agree for the message x.
        let code = herm_code();
        let msg = Message {
            coeffs: {
                let mut v = vec![Fe::ZERO; code.k];
                v[1] = code.curve.constants.one(); // basis[1] = x
                v
            },
        };
        let w = encode(&code, &msg);
        for (j, block) in w.blocks.iter().enumerate() {
            assert_eq!(block[0], block[1]);
            // and the value is the x-coordinate of the orbit representative
            let rep = code.blocks[j].rep();
            match rep {
                crate::curve::Place::Rational { x, .. } => assert_eq!(block[0], *x),
                _ => panic!(),
            }
        }
    }

    #[test]
    fn encoding_is_linear() {
        let code = herm_code();
        let f = code.curve.constants.clone();
        let mut st = 17u64;
        let mut next = move || {
            st ^= st << 13;
            st ^= st >> 7;
            st ^= st << 17;
            st
        };
        for _ in 0..10 {
            let a: Vec<Fe> = (0..code.k).map(|_| f.from_index((next() % 16) as u128)).collect();
            let b: Vec<Fe> = (0..code.k).map(|_| f.from_index((next() % 16) as u128)).collect();
            let c = f.from_index((next() % 16) as u128);
            let sum = Message {
                coeffs: a
                    .iter()
                    .zip(&b)
                    .map(|(&x, &y)| f.add(f.mul(c, x), y))
                    .collect(),
            };
            let wa = encode(&code, &Message { coeffs: a });
            let wb = encode(&code, &Message { coeffs: b });
            let ws = encode(&code, &sum);
            for j in 0..code.n_blocks {
                for i in 0..code.m_prime {
                    assert_eq!(
                        ws.blocks[j][i],
                        f.add(f.mul(c, wa.blocks[j][i]), wb.blocks[j][i])
                    );
                }
            }
        }
    }

    #[test]
    fn folding_consistency_slot_reads() {
        // slot i of block j = (sigma^i f)(v_j)
        let code = herm_code();
        let f = code.curve.constants.clone();
        let msg = Message {
            coeffs: (0..code.k).map(|i| f.from_index((i as u128 * 7 + 3) % 16)).collect(),
        };
        let func = code.message_function(&msg);
        let w = encode(&code, &msg);
        for (j, orbit) in code.blocks.iter().enumerate() {
            for i in 0..code.m_prime {
                let twisted = galois_apply(&code.curve, &func, i as i64);
                let direct =
                    crate::curve::evaluate(&code.curve, &twisted, orbit.rep()).unwrap();
                assert_eq!(w.blocks[j][i], direct);
            }
        }
    }

    #[test]
    fn distance_unfolded_agreement_bounded_by_alpha_minus_1() {
        let code = herm_code();
        let f = code.curve.constants.clone();
        let mut st = 23u64;
        let mut next = move || {
            st ^= st << 13;
            st ^= st >> 7;
            st ^= st << 17;
            st
        };
        for _ in 0..50 {
            let a = Message {
                coeffs: (0..code.k).map(|_| f.from_index((next() % 16) as u128)).collect(),
            };
            let b = Message {
                coeffs: (0..code.k).map(|_| f.from_index((next() % 16) as u128)).collect(),
            };
            if a == b {
                continue;
            }
            let wa = encode(&code, &a);
            let wb = encode(&code, &b);
            let unfolded_agree: usize = wa
                .blocks
                .iter()
                .zip(&wb.blocks)
                .map(|(x, y)| x.iter().zip(y).filter(|(u, v)| u == v).count())
                .sum();
            assert!(unfolded_agree <= code.alpha - 1);
            // nonzero difference function has at most alpha-1 zeros
            let diff = code
                .message_function(&a)
                .sub(&code.curve, &code.message_function(&b));
            assert!(pole_order_at_infinity(&code.curve, &diff).unwrap() <= code.alpha - 1);
        }
    }

    #[test]
    fn corrupt_agreement_and_determinism() {
        let code = herm_code();
        let f = code.curve.constants.clone();
        let msg = Message {
            coeffs: (0..code.k).map(|i| f.from_index((i as u128 + 2) % 16)).collect(),
        };
        let w = encode(&code, &msg);
        assert_eq!(agreement(&code, &w, &w).unwrap(), code.n_blocks);

        let c0 = corrupt(&code, &w, 0, 7).unwrap();
        assert_eq!(c0, w);
        let c5 = corrupt(&code, &w, 5, 7).unwrap();
        assert_eq!(agreement(&code, &w, &c5).unwrap(), code.n_blocks - 5);
        let again = corrupt(&code, &w, 5, 7).unwrap();
        assert_eq!(c5, again);
        let full = corrupt(&code, &w, code.n_blocks, 9).unwrap();
        assert_eq!(agreement(&code, &w, &full).unwrap(), 0);
        assert!(matches!(
            corrupt(&code, &w, code.n_blocks + 1, 1),
            Err(Error::ErrorCountOutOfRange { .. })
        ));
    }

    #[test]
    fn word_csv_round_trip() {
        let code = frs_code(7, 1, 3, 2);
        let msg = code.message_from_indices(&[3, 5]);
        let w = encode(&code, &msg);
        let csv = word_to_csv(&code, &w);
        let back = word_from_csv(&code, &csv).unwrap();
        assert_eq!(w, back);
    }
}
