//! Exact linear algebra over a [`FieldSpec`]: dense matrices, Gaussian
//! elimination with deterministic pivoting (first nonzero in column order),
//! particular solutions and nullspace bases.
//!
//! Characteristic-2 fields of small degree get a bitsliced backing store
//! (one bit-plane per coordinate) so that the large interpolation systems of
//! the decoder reduce in seconds; the elimination logic and pivot choices are
//! identical to the generic path, and tests cross-check the two.

use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};

/// Dense row-major matrix of field elements.
#[derive(Clone, Debug)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Fe>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn from_rows(spec: &FieldSpec, rows: &[Vec<Fe>]) -> Mat {
        let _ = spec;
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Mat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, f: &FieldSpec, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Fe::ZERO;
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = f.add(acc, f.mul(a, v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn rank(&self, f: &FieldSpec) -> usize {
        let sys = LinSystem::homogeneous(f.clone(), self.clone());
        Echelon::reduce(&sys).rank()
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self, f: &FieldSpec) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        // Augment with identity and run full reduction.
        let mut a = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, self.get(i, j));
            }
            a.set(i, n + i, f.one());
        }
        let mut rank = 0;
        for col in 0..n {
            let piv = (rank..n).find(|&r| !a.get(r, col).is_zero())?;
            for j in 0..2 * n {
                let tmp = a.get(rank, j);
                a.set(rank, j, a.get(piv, j));
                a.set(piv, j, tmp);
            }
            let inv = f.inv(a.get(rank, col));
            for j in 0..2 * n {
                a.set(rank, j, f.mul(a.get(rank, j), inv));
            }
            for r in 0..n {
                if r != rank {
                    let s = a.get(r, col);
                    if !s.is_zero() {
                        for j in 0..2 * n {
                            let v = f.sub(a.get(r, j), f.mul(s, a.get(rank, j)));
                            a.set(r, j, v);
                        }
                    }
                }
            }
            rank += 1;
        }
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, a.get(i, n + j));
            }
        }
        Some(out)
    }
}

/// Bitsliced matrix over GF(2^k), k <= 16: one bit-plane per coordinate.
#[derive(Clone, Debug)]
pub struct BitMat {
    pub rows: usize,
    pub cols: usize,
    k: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMat {
    pub fn zeros(spec: &FieldSpec, rows: usize, cols: usize) -> BitMat {
        assert_eq!(spec.characteristic(), 2);
        let k = spec.degree();
        assert!(k <= 16);
        let words = cols.div_ceil(64);
        BitMat {
            rows,
            cols,
            k,
            words,
            data: vec![0u64; rows * k * words],
        }
    }

    #[inline]
    fn row_base(&self, r: usize) -> usize {
        r * self.k * self.words
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        let base = self.row_base(r);
        let (w, b) = (c / 64, c % 64);
        let mut v = 0u128;
        for plane in 0..self.k {
            let bit = (self.data[base + plane * self.words + w] >> b) & 1;
            v |= (bit as u128) << plane;
        }
        Fe(v)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, val: Fe) {
        let base = self.row_base(r);
        let (w, b) = (c / 64, c % 64);
        for plane in 0..self.k {
            let idx = base + plane * self.words + w;
            let bit = ((val.0 >> plane) & 1) as u64;
            self.data[idx] = (self.data[idx] & !(1u64 << b)) | (bit << b);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let stride = self.k * self.words;
        let (lo, hi) = self.data.split_at_mut(b * stride);
        lo[a * stride..(a + 1) * stride].swap_with_slice(&mut hi[..stride]);
    }

    /// dst += s * src, touching only words >= from_word. `mul_masks[b]` holds,
    /// for output plane b, the set of input planes to XOR (the rows of the
    /// GF(2) multiplication matrix of s).
    fn axpy(&mut self, dst: usize, src: usize, mul_masks: &[u16], from_word: usize) {
        let stride = self.k * self.words;
        let (s0, d0) = (self.row_base(src), self.row_base(dst));
        debug_assert_ne!(src, dst);
        let (src_slice, dst_slice) = if s0 < d0 {
            let (lo, hi) = self.data.split_at_mut(d0);
            (&lo[s0..s0 + stride], &mut hi[..stride])
        } else {
            let (lo, hi) = self.data.split_at_mut(s0);
            (&hi[..stride], &mut lo[d0..d0 + stride])
        };
        let w = self.words;
        for b in 0..self.k {
            let mask = mul_masks[b];
            if mask == 0 {
                continue;
            }
            let out = &mut dst_slice[b * w + from_word..(b + 1) * w];
            let mut m = mask;
            while m != 0 {
                let a = m.trailing_zeros() as usize;
                m &= m - 1;
                let inp = &src_slice[a * w + from_word..(a + 1) * w];
                for (o, i) in out.iter_mut().zip(inp) {
                    *o ^= *i;
                }
            }
        }
    }

    /// row *= s (via a scratch copy).
    fn scale_row(&mut self, r: usize, mul_masks: &[u16], scratch: &mut Vec<u64>) {
        let stride = self.k * self.words;
        let base = self.row_base(r);
        scratch.clear();
        scratch.extend_from_slice(&self.data[base..base + stride]);
        let w = self.words;
        for b in 0..self.k {
            let out = &mut self.data[base + b * w..base + (b + 1) * w];
            out.iter_mut().for_each(|x| *x = 0);
            let mut m = mul_masks[b];
            while m != 0 {
                let a = m.trailing_zeros() as usize;
                m &= m - 1;
                for (o, i) in out.iter_mut().zip(&scratch[a * w..(a + 1) * w]) {
                    *o ^= *i;
                }
            }
        }
    }
}

/// Per-scalar GF(2) multiplication masks: output plane b of s*x is the XOR of
/// input planes a with bit (b) set in coords(s * gen^a).
fn mul_masks(spec: &FieldSpec, s: Fe) -> Vec<u16> {
    let k = spec.degree();
    let mut masks = vec![0u16; k];
    for a in 0..k {
        let img = spec.mul(s, Fe(1u128 << a));
        for (b, mask) in masks.iter_mut().enumerate() {
            if (img.0 >> b) & 1 == 1 {
                *mask |= 1 << a;
            }
        }
    }
    masks
}

/// Matrix storage for a linear system.
#[derive(Clone, Debug)]
pub enum Store {
    Dense(Mat),
    Bits(BitMat),
}

impl Store {
    pub fn rows(&self) -> usize {
        match self {
            Store::Dense(m) => m.rows,
            Store::Bits(m) => m.rows,
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Store::Dense(m) => m.cols,
            Store::Bits(m) => m.cols,
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Fe {
        match self {
            Store::Dense(m) => m.get(r, c),
            Store::Bits(m) => m.get(r, c),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        match self {
            Store::Dense(m) => m.set(r, c, v),
            Store::Bits(m) => m.set(r, c, v),
        }
    }
}

/// A linear system A x = b over one field. Rows and columns are fixed at
/// construction; `rhs` may be all zero (homogeneous).
#[derive(Clone, Debug)]
pub struct LinSystem {
    pub spec: FieldSpec,
    pub mat: Store,
    pub rhs: Vec<Fe>,
}

impl LinSystem {
    /// Picks the bitsliced store automatically for small characteristic-2 fields.
    pub fn new(spec: FieldSpec, rows: usize, cols: usize) -> LinSystem {
        let mat = if spec.characteristic() == 2 && spec.degree() <= 16 {
            Store::Bits(BitMat::zeros(&spec, rows, cols))
        } else {
            Store::Dense(Mat::zeros(rows, cols))
        };
        LinSystem {
            spec,
            mat,
            rhs: vec![Fe::ZERO; rows],
        }
    }

    pub fn homogeneous(spec: FieldSpec, mat: Mat) -> LinSystem {
        let rows = mat.rows;
        LinSystem {
            spec,
            mat: Store::Dense(mat),
            rhs: vec![Fe::ZERO; rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.mat.rows()
    }

    pub fn cols(&self) -> usize {
        self.mat.cols()
    }
}

/// Result of `solve_linear`: either a particular solution plus a basis of the
/// homogeneous nullspace, or a report that the system is inconsistent.
#[derive(Clone, Debug)]
pub enum LinOutcome {
    Solved {
        particular: Vec<Fe>,
        nullspace: Vec<Vec<Fe>>,
        rank: usize,
    },
    Inconsistent,
}

/// Row echelon form with recorded pivots; pivot rows are normalized to 1.
pub struct Echelon {
    spec: FieldSpec,
    mat: Store,
    rhs: Vec<Fe>,
    pivots: Vec<usize>, // pivot column of row i
}

impl Echelon {
    /// Forward elimination with deterministic pivoting: columns left to
    /// right, pivot is the first remaining row with a nonzero entry.
    pub fn reduce(sys: &LinSystem) -> Echelon {
        let mut mat = sys.mat.clone();
        let mut rhs = sys.rhs.clone();
        let spec = sys.spec.clone();
        let rows = mat.rows();
        let cols = mat.cols();
        let mut pivots = Vec::new();
        let mut r = 0;
        match &mut mat {
            Store::Bits(bm) => {
                let mut scratch = Vec::new();
                for c in 0..cols {
                    if r == rows {
                        break;
                    }
                    let piv = (r..rows).find(|&i| !bm.get(i, c).is_zero());
                    let Some(piv) = piv else { continue };
                    bm.swap_rows(piv, r);
                    rhs.swap(piv, r);
                    let pv = bm.get(r, c);
                    if pv != spec.one() {
                        let inv = spec.inv(pv);
                        bm.scale_row(r, &mul_masks(&spec, inv), &mut scratch);
                        rhs[r] = spec.mul(rhs[r], inv);
                    }
                    let from_word = c / 64;
                    let mut mask_cache: Vec<Option<Vec<u16>>> = vec![None; 1 << bm.k];
                    for i in r + 1..rows {
                        let s = bm.get(i, c);
                        if s.is_zero() {
                            continue;
                        }
                        let masks = mask_cache[s.0 as usize]
                            .get_or_insert_with(|| mul_masks(&spec, s))
                            .clone();
                        bm.axpy(i, r, &masks, from_word);
                        rhs[i] = spec.sub(rhs[i], spec.mul(s, rhs[r]));
                    }
                    pivots.push(c);
                    r += 1;
                }
            }
            Store::Dense(dm) => {
                for c in 0..cols {
                    if r == rows {
                        break;
                    }
                    let piv = (r..rows).find(|&i| !dm.get(i, c).is_zero());
                    let Some(piv) = piv else { continue };
                    for j in 0..cols {
                        let tmp = dm.get(r, j);
                        dm.set(r, j, dm.get(piv, j));
                        dm.set(piv, j, tmp);
                    }
                    rhs.swap(piv, r);
                    let inv = spec.inv(dm.get(r, c));
                    if inv != spec.one() {
                        for j in c..cols {
                            dm.set(r, j, spec.mul(dm.get(r, j), inv));
                        }
                        rhs[r] = spec.mul(rhs[r], inv);
                    }
                    for i in r + 1..rows {
                        let s = dm.get(i, c);
                        if s.is_zero() {
                            continue;
                        }
                        for j in c..cols {
                            let v = spec.sub(dm.get(i, j), spec.mul(s, dm.get(r, j)));
                            dm.set(i, j, v);
                        }
                        rhs[i] = spec.sub(rhs[i], spec.mul(s, rhs[r]));
                    }
                    pivots.push(c);
                    r += 1;
                }
            }
        }
        Echelon {
            spec,
            mat,
            rhs,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        (self.rank()..self.mat.rows()).all(|i| self.rhs[i].is_zero())
    }

    /// Particular solution with all free variables set to zero.
    pub fn particular(&self) -> Option<Vec<Fe>> {
        if !self.is_consistent() {
            return None;
        }
        let cols = self.mat.cols();
        let mut x = vec![Fe::ZERO; cols];
        for i in (0..self.rank()).rev() {
            let pc = self.pivots[i];
            let mut acc = self.rhs[i];
            for j in pc + 1..cols {
                let a = self.mat.get(i, j);
                if !a.is_zero() && !x[j].is_zero() {
                    acc = self.spec.sub(acc, self.spec.mul(a, x[j]));
                }
            }
            x[pc] = acc;
        }
        Some(x)
    }

    fn free_cols(&self) -> Vec<usize> {
        let mut pivot_set = vec![false; self.mat.cols()];
        for &c in &self.pivots {
            pivot_set[c] = true;
        }
        (0..self.mat.cols()).filter(|&c| !pivot_set[c]).collect()
    }

    /// Canonical nullspace vector for one free column: 1 there, 0 at the
    /// other free columns, pivot variables back-substituted.
    fn nullspace_for(&self, free_col: usize) -> Vec<Fe> {
        let cols = self.mat.cols();
        let mut x = vec![Fe::ZERO; cols];
        x[free_col] = self.spec.one();
        for i in (0..self.rank()).rev() {
            let pc = self.pivots[i];
            if pc > free_col {
                continue;
            }
            let mut acc = Fe::ZERO;
            for j in pc + 1..cols {
                let xv = x[j];
                if xv.is_zero() {
                    continue;
                }
                let a = self.mat.get(i, j);
                if !a.is_zero() {
                    acc = self.spec.add(acc, self.spec.mul(a, xv));
                }
            }
            x[pc] = self.spec.neg(acc);
        }
        x
    }

    /// First nullspace basis vector (smallest free column), if any.
    pub fn nullspace_first(&self) -> Option<Vec<Fe>> {
        self.free_cols().first().map(|&c| self.nullspace_for(c))
    }

    pub fn nullspace_basis(&self) -> Vec<Vec<Fe>> {
        self.free_cols()
            .iter()
            .map(|&c| self.nullspace_for(c))
            .collect()
    }
}

/// Gaussian elimination over the system's field: a particular solution and a
/// basis of the homogeneous nullspace, or a distinct inconsistency signal.
pub fn solve_linear(sys: &LinSystem) -> Result<LinOutcome> {
    if sys.rhs.len() != sys.rows() {
        return Err(Error::ShapeMismatch);
    }
    let ech = Echelon::reduce(sys);
    if !ech.is_consistent() {
        return Ok(LinOutcome::Inconsistent);
    }
    Ok(LinOutcome::Solved {
        particular: ech.particular().expect("consistent system"),
        nullspace: ech.nullspace_basis(),
        rank: ech.rank(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, k: usize) -> FieldSpec {
        FieldSpec::new(p, k, None).unwrap()
    }

    #[test]
    fn identity_system() {
        let f = gf(7, 1);
        let mut sys = LinSystem::new(f.clone(), 3, 3);
        for i in 0..3 {
            sys.mat.set(i, i, f.one());
            sys.rhs[i] = f.from_index((i as u128) + 1);
        }
        match solve_linear(&sys).unwrap() {
            LinOutcome::Solved {
                particular,
                nullspace,
                rank,
            } => {
                assert_eq!(rank, 3);
                assert!(nullspace.is_empty());
                let idx: Vec<u128> = particular.iter().map(|&x| f.index(x)).collect();
                assert_eq!(idx, vec![1, 2, 3]);
            }
            LinOutcome::Inconsistent => panic!("identity is consistent"),
        }
    }

    #[test]
    fn zero_matrix_zero_rhs() {
        let f = gf(5, 1);
        let sys = LinSystem::new(f, 2, 4);
        match solve_linear(&sys).unwrap() {
            LinOutcome::Solved {
                particular,
                nullspace,
                rank,
            } => {
                assert_eq!(rank, 0);
                assert_eq!(nullspace.len(), 4);
                assert!(particular.iter().all(|x| x.is_zero()));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn inconsistent_detected() {
        let f = gf(5, 1);
        let mut sys = LinSystem::new(f.clone(), 2, 1);
        sys.mat.set(0, 0, f.one());
        sys.mat.set(1, 0, f.one());
        sys.rhs[0] = f.from_index(1);
        sys.rhs[1] = f.from_index(2);
        assert!(matches!(solve_linear(&sys).unwrap(), LinOutcome::Inconsistent));
    }

    fn xorshift(state: &mut u64) -> u64 {
        *state ^= *state << 13;
        *state ^= *state >> 7;
        *state ^= *state << 17;
        *state
    }

    #[test]
    fn random_system_over_gf9_residual_and_rank() {
        let f = gf(3, 2);
        let mut st = 42u64;
        for _ in 0..10 {
            let rows = 8;
            let cols = 12;
            let mut sys = LinSystem::new(f.clone(), rows, cols);
            assert!(matches!(sys.mat, Store::Dense(_)));
            for r in 0..rows {
                for c in 0..cols {
                    sys.mat
                        .set(r, c, f.from_index((xorshift(&mut st) % 9) as u128));
                }
            }
            // rhs in the column space: A * t for random t
            let t: Vec<Fe> = (0..cols)
                .map(|_| f.from_index((xorshift(&mut st) % 9) as u128))
                .collect();
            let dense = match &sys.mat {
                Store::Dense(m) => m.clone(),
                _ => unreachable!(),
            };
            sys.rhs = dense.mul_vec(&f, &t);
            match solve_linear(&sys).unwrap() {
                LinOutcome::Solved {
                    particular,
                    nullspace,
                    rank,
                } => {
                    assert_eq!(dense.mul_vec(&f, &particular), sys.rhs);
                    assert_eq!(nullspace.len(), cols - rank);
                    // independent rank check: row-reduce the transpose
                    let mut tr = Mat::zeros(cols, rows);
                    for r in 0..rows {
                        for c in 0..cols {
                            tr.set(c, r, dense.get(r, c));
                        }
                    }
                    assert_eq!(tr.rank(&f), rank);
                    for v in &nullspace {
                        assert!(dense.mul_vec(&f, v).iter().all(|x| x.is_zero()));
                    }
                }
                LinOutcome::Inconsistent => panic!("rhs was in the column space"),
            }
        }
    }

    #[test]
    fn bitsliced_matches_dense() {
        let f = gf(2, 4);
        let mut st = 7u64;
        for _ in 0..20 {
            let rows = 9;
            let cols = 14;
            let mut bits = LinSystem::new(f.clone(), rows, cols);
            assert!(matches!(bits.mat, Store::Bits(_)));
            let mut dense = LinSystem {
                spec: f.clone(),
                mat: Store::Dense(Mat::zeros(rows, cols)),
                rhs: vec![Fe::ZERO; rows],
            };
            for r in 0..rows {
                for c in 0..cols {
                    let v = f.from_index((xorshift(&mut st) % 16) as u128);
                    bits.mat.set(r, c, v);
                    dense.mat.set(r, c, v);
                }
                let rv = f.from_index((xorshift(&mut st) % 16) as u128);
                bits.rhs[r] = rv;
                dense.rhs[r] = rv;
            }
            let ob = solve_linear(&bits).unwrap();
            let od = solve_linear(&dense).unwrap();
            match (ob, od) {
                (
                    LinOutcome::Solved {
                        particular: pb,
                        nullspace: nb,
                        rank: rb,
                    },
                    LinOutcome::Solved {
                        particular: pd,
                        nullspace: nd,
                        rank: rd,
                    },
                ) => {
                    assert_eq!(pb, pd);
                    assert_eq!(nb, nd);
                    assert_eq!(rb, rd);
                }
                (LinOutcome::Inconsistent, LinOutcome::Inconsistent) => {}
                _ => panic!("bitsliced and dense paths disagree"),
            }
        }
    }

    #[test]
    fn bitmat_get_set_round_trip() {
        let f = gf(2, 4);
        let mut m = BitMat::zeros(&f, 3, 130);
        m.set(1, 0, f.from_index(9));
        m.set(1, 64, f.from_index(5));
        m.set(2, 129, f.from_index(15));
        assert_eq!(f.index(m.get(1, 0)), 9);
        assert_eq!(f.index(m.get(1, 64)), 5);
        assert_eq!(f.index(m.get(2, 129)), 15);
        assert_eq!(f.index(m.get(0, 0)), 0);
    }
}
