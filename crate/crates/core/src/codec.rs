//! Systematic encoding, puncturing and syndrome checking.
//!
//! Every code carries two encode routes. The accumulator route solves the
//! parity bits by forward substitution through the triangular chain
//! structure (derived generically by peeling rows with a single unknown) and
//! is the one used in simulation. The generator route multiplies by
//! `G = [I | (B^-1 A)^T]` and serves as the independent correctness oracle.

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::scaffold::CodeFamily;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// One forward-substitution step: `col` is determined by check `row`.
#[derive(Debug, Clone, Copy)]
struct PlanStep {
    col: usize,
    row: usize,
}

/// A linear code ready for simulation: parity-check matrix, optional
/// generator, fading map and puncturing pattern.
#[derive(Debug, Clone)]
pub struct LinearCode {
    family: CodeFamily,
    h: BitMatrix,
    g: Option<BitMatrix>,
    k: usize,
    col_fading: Vec<usize>,
    puncture_cols: Vec<usize>,
    /// Transmit order: position `t` carries column `transmit_cols[t]`.
    /// Columns are grouped by fading block so that the channel's contiguous
    /// block rule lands each column on its assigned fading.
    transmit_cols: Vec<usize>,
    encode_plan: Option<Vec<PlanStep>>,
}

/// Borrowed view of the transmit-order mapping, consumed by the channel
/// when re-indexing received values to pre-puncture column order.
#[derive(Debug, Clone, Copy)]
pub struct TransmitMapping<'a> {
    pub n_pre: usize,
    pub transmit_cols: &'a [usize],
}

impl LinearCode {
    /// Assembles a code from its parts. Checks the fading map supports the
    /// contiguous-block transmission rule and derives the fast encode plan.
    pub fn from_parts(
        family: CodeFamily,
        h: BitMatrix,
        col_fading: Vec<usize>,
        puncture_cols: Vec<usize>,
    ) -> Result<Self> {
        let n = h.n_cols();
        let k = n - h.n_rows();
        if col_fading.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: col_fading.len(),
            });
        }
        if puncture_cols.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("puncture columns must be sorted".into()));
        }
        if let Some(&c) = puncture_cols.iter().find(|&&c| c < k || c >= n) {
            return Err(Error::IndexOutOfRange(format!(
                "puncture column {c} outside parity range"
            )));
        }
        let punctured = |c: usize| puncture_cols.binary_search(&c).is_ok();
        let mut transmit_cols: Vec<usize> = (0..n).filter(|&c| !punctured(c)).collect();
        transmit_cols.sort_by_key(|&c| (col_fading[c], c));
        let n_tx = transmit_cols.len();
        let f = family.fading_blocks;
        if n_tx % f != 0 {
            return Err(Error::BadDimensions(format!(
                "transmitted length {n_tx} not divisible by {f} fading blocks"
            )));
        }
        // The channel assigns fading ceil(F*t/n_tx); the transmit order must
        // agree with the declared per-column map.
        for (t, &c) in transmit_cols.iter().enumerate() {
            if t * f / n_tx != col_fading[c] {
                return Err(Error::InvalidConfig(format!(
                    "column {c} cannot be transmitted on fading {}",
                    col_fading[c]
                )));
            }
        }
        let encode_plan = compute_encode_plan(&h, k);
        Ok(LinearCode {
            family,
            h,
            g: None,
            k,
            col_fading,
            puncture_cols,
            transmit_cols,
            encode_plan,
        })
    }

    pub fn family(&self) -> &CodeFamily {
        &self.family
    }

    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    pub fn generator(&self) -> Option<&BitMatrix> {
        self.g.as_ref()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_pre(&self) -> usize {
        self.h.n_cols()
    }

    pub fn n_tx(&self) -> usize {
        self.transmit_cols.len()
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n_tx() as f64
    }

    pub fn col_fading(&self) -> &[usize] {
        &self.col_fading
    }

    pub fn puncture_cols(&self) -> &[usize] {
        &self.puncture_cols
    }

    pub fn is_punctured(&self, c: usize) -> bool {
        self.puncture_cols.binary_search(&c).is_ok()
    }

    pub fn transmit_cols(&self) -> &[usize] {
        &self.transmit_cols
    }

    pub fn transmit_mapping(&self) -> TransmitMapping<'_> {
        TransmitMapping {
            n_pre: self.n_pre(),
            transmit_cols: &self.transmit_cols,
        }
    }

    pub fn has_fast_encoder(&self) -> bool {
        self.encode_plan.is_some()
    }

    /// Builds and attaches the systematic generator; fails if the parity
    /// sub-matrix is singular.
    pub fn attach_generator(&mut self) -> Result<()> {
        if self.g.is_none() {
            self.g = Some(build_generator(&self.h, self.k)?);
        }
        Ok(())
    }

    /// Full-rank check: the code must satisfy `rank(H) = n - k`.
    pub fn check_full_rank(&self) -> Result<()> {
        let m = self.h.n_rows();
        let r = self.h.rank();
        if r != m {
            return Err(Error::SingularMatrix);
        }
        Ok(())
    }

    /// Systematic encode through the accumulator chains; falls back to the
    /// generator when the parity structure is not triangular.
    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: u.len(),
            });
        }
        if let Some(plan) = &self.encode_plan {
            let mut c = vec![0u8; self.n_pre()];
            c[..self.k].copy_from_slice(u);
            for step in plan {
                let mut acc = 0u8;
                for &col in self.h.row(step.row) {
                    if col != step.col {
                        acc ^= c[col];
                    }
                }
                c[step.col] = acc;
            }
            Ok(c)
        } else {
            self.encode_via_generator(u)
        }
    }

    /// Systematic encode through the generator matrix.
    pub fn encode_via_generator(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: u.len(),
            });
        }
        let g = self
            .g
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("no generator attached".into()))?;
        let mut c = vec![0u8; self.n_pre()];
        for (i, &bit) in u.iter().enumerate() {
            if bit & 1 == 1 {
                for &col in g.row(i) {
                    c[col] ^= 1;
                }
            }
        }
        Ok(c)
    }

    /// Drops punctured positions and emits the transmitted bits in transmit
    /// order (fading-contiguous). Without puncturing and without a fading
    /// interleaver this is the identity.
    pub fn puncture(&self, c: &[u8]) -> Result<Vec<u8>> {
        if c.len() != self.n_pre() {
            return Err(Error::LengthMismatch {
                expected: self.n_pre(),
                got: c.len(),
            });
        }
        Ok(self.transmit_cols.iter().map(|&col| c[col]).collect())
    }
}

/// Syndrome `H * c^T` over GF(2).
pub fn syndrome(h: &BitMatrix, c: &[u8]) -> Result<Vec<u8>> {
    h.mul_vec(c)
}

/// Builds the systematic generator `G = [I | (B^-1 A)^T]` for
/// `H = [A | B]` with `B` square. The product `G * H^T = 0` is verified
/// before returning.
pub fn build_generator(h: &BitMatrix, k: usize) -> Result<BitMatrix> {
    let m = h.n_rows();
    let n = h.n_cols();
    if n != k + m {
        return Err(Error::DimensionMismatch(format!(
            "H is {m}x{n}, cannot split as [A|B] with k={k}"
        )));
    }
    let a = h.submatrix(0..m, 0..k);
    let b = h.submatrix(0..m, k..n);
    let b_inv = b.invert()?;
    let p = b_inv.multiply(&a)?.transpose();
    let mut entries: Vec<(usize, usize)> = (0..k).map(|i| (i, i)).collect();
    entries.extend(p.entries().map(|(r, c)| (r, k + c)));
    let g = BitMatrix::from_entries(k, n, entries)?;
    let prod = g.multiply(&h.transpose())?;
    if !prod.is_zero() {
        return Err(Error::InvalidConfig(
            "generator does not annihilate the parity-check matrix".into(),
        ));
    }
    Ok(g)
}

/// Greedy peeling of rows with a single unknown parity column. Returns the
/// forward-substitution schedule, or `None` when the parity part is not
/// triangular under any row/column ordering the peel can discover.
fn compute_encode_plan(h: &BitMatrix, k: usize) -> Option<Vec<PlanStep>> {
    let n = h.n_cols();
    let m = h.n_rows();
    let mut unknown = vec![false; n];
    for flag in unknown.iter_mut().take(n).skip(k) {
        *flag = true;
    }
    let mut row_unknowns: Vec<usize> = (0..m)
        .map(|r| h.row(r).iter().filter(|&&c| c >= k).count())
        .collect();
    let mut queue: VecDeque<usize> = (0..m).filter(|&r| row_unknowns[r] == 1).collect();
    let mut plan = Vec::with_capacity(n - k);
    while let Some(r) = queue.pop_front() {
        if row_unknowns[r] != 1 {
            continue;
        }
        let col = *h.row(r).iter().find(|&&c| unknown[c])?;
        plan.push(PlanStep { col, row: r });
        unknown[col] = false;
        for &r2 in h.col(col) {
            row_unknowns[r2] -= 1;
            if row_unknowns[r2] == 1 {
                queue.push_back(r2);
            }
        }
    }
    (plan.len() == n - k).then_some(plan)
}

/// Serializable description of a constructed code, written alongside the
/// alist file so a simulation run can rebuild the exact same code.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CodeMetadata {
    pub family: CodeFamily,
    pub k: usize,
    pub n_pre: usize,
    /// Run-length encoded fading map: `(fading, length)` in column order.
    pub fading_runs: Vec<(usize, usize)>,
    /// Run-length encoded puncture set: `(start, length)`.
    pub puncture_runs: Vec<(usize, usize)>,
}

impl CodeMetadata {
    pub fn of(code: &LinearCode) -> Self {
        CodeMetadata {
            family: code.family,
            k: code.k,
            n_pre: code.n_pre(),
            fading_runs: rle(code.col_fading()),
            puncture_runs: runs_of(code.puncture_cols()),
        }
    }

    pub fn col_fading(&self) -> Vec<usize> {
        self.fading_runs
            .iter()
            .flat_map(|&(f, len)| std::iter::repeat_n(f, len))
            .collect()
    }

    pub fn puncture_cols(&self) -> Vec<usize> {
        self.puncture_runs
            .iter()
            .flat_map(|&(start, len)| start..start + len)
            .collect()
    }

    /// Rebuilds a simulation-ready code from a parsed parity-check matrix.
    pub fn into_code(self, h: BitMatrix) -> Result<LinearCode> {
        if h.n_cols() != self.n_pre || h.n_rows() != self.n_pre - self.k {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, metadata says {}x{}",
                h.n_rows(),
                h.n_cols(),
                self.n_pre - self.k,
                self.n_pre
            )));
        }
        LinearCode::from_parts(self.family, h, self.col_fading(), self.puncture_cols())
    }
}

fn rle(values: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((prev, len)) if *prev == v => *len += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

fn runs_of(sorted: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some((start, len)) if *start + *len == v => *len += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scaffold::{build_dual_diagonal, CodeFamily, FamilyKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy_family() -> CodeFamily {
        CodeFamily::new(FamilyKind::Ra, 12, 2, 0).unwrap()
    }

    /// RA-shaped matrix: `H = [Hu | Hp]` with a hand-picked single-entry-per-
    /// row repetition part and the accumulator chain as parity.
    fn ra_matrix(picks: &[usize], k: usize) -> BitMatrix {
        let m = picks.len();
        let mut h = BitMatrix::zeros(m, k + m);
        for (r, &u) in picks.iter().enumerate() {
            h.insert(r, u).unwrap();
        }
        for (r, c) in build_dual_diagonal(m).entries() {
            h.insert(r, k + c).unwrap();
        }
        h
    }

    #[test]
    fn generator_of_repetition_code() {
        let h = BitMatrix::from_entries(1, 2, [(0, 0), (0, 1)]).unwrap();
        let g = build_generator(&h, 1).unwrap();
        assert_eq!(g.row(0), &[0, 1]);
    }

    #[test]
    fn generator_rejects_singular_parity() {
        // duplicated parity column
        let h = BitMatrix::from_entries(2, 3, [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2)]).unwrap();
        assert_eq!(build_generator(&h, 1), Err(Error::SingularMatrix));
    }

    #[test]
    fn accumulator_encode_is_running_xor() {
        // info word [1,0,1] feeding the accumulator with input
        // x = [1,0,1,1,0,1,1,1,0] through a single-entry repetition part
        let picks = [0, 1, 2, 0, 1, 2, 0, 0, 1];
        let h = ra_matrix(&picks, 3);
        let family = toy_family();
        let mut code =
            LinearCode::from_parts(family, h, vec![0; 6].into_iter().chain(vec![1; 6]).collect(), vec![])
                .unwrap();
        code.attach_generator().unwrap();
        let u = [1u8, 0, 1];
        let c = code.encode(&u).unwrap();
        assert_eq!(&c[..3], &u);
        // running XOR of x
        assert_eq!(&c[3..], &[1, 1, 0, 1, 1, 0, 1, 0, 0]);
        assert_eq!(code.encode_via_generator(&u).unwrap(), c);
        assert!(syndrome(code.h(), &c).unwrap().iter().all(|&s| s == 0));
    }

    #[test]
    fn encode_all_zero_is_all_zero() {
        let picks = [0, 1, 2, 0, 1, 2, 0, 0, 1];
        let h = ra_matrix(&picks, 3);
        let code = LinearCode::from_parts(
            toy_family(),
            h,
            vec![0; 6].into_iter().chain(vec![1; 6]).collect(),
            vec![],
        )
        .unwrap();
        let c = code.encode(&[0, 0, 0]).unwrap();
        assert!(c.iter().all(|&b| b == 0));
    }

    #[test]
    fn encode_length_mismatch() {
        let picks = [0, 1, 0];
        let h = ra_matrix(&picks, 3);
        let code = LinearCode::from_parts(
            CodeFamily::new(FamilyKind::Ra, 6, 2, 0).unwrap(),
            h,
            vec![0, 0, 0, 1, 1, 1],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            code.encode(&[1, 0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn syndrome_of_flipped_bit_is_matrix_column() {
        let picks = [0, 1, 2, 0, 1, 2, 0, 0, 1];
        let h = ra_matrix(&picks, 3);
        let code = LinearCode::from_parts(
            toy_family(),
            h.clone(),
            vec![0; 6].into_iter().chain(vec![1; 6]).collect(),
            vec![],
        )
        .unwrap();
        let mut c = code.encode(&[1, 1, 0]).unwrap();
        c[4] ^= 1;
        let s = syndrome(&h, &c).unwrap();
        let expect: Vec<u8> = (0..h.n_rows()).map(|r| h.get(r, 4) as u8).collect();
        assert_eq!(s, expect);
    }

    #[test]
    fn syndrome_matches_naive_dot_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut h = BitMatrix::zeros(6, 10);
        for r in 0..6 {
            for c in 0..10 {
                if rng.random::<f64>() < 0.3 {
                    h.insert(r, c).unwrap();
                }
            }
        }
        let v: Vec<u8> = (0..10).map(|_| rng.random_range(0..2) as u8).collect();
        let s = syndrome(&h, &v).unwrap();
        for r in 0..6 {
            let mut acc = 0u8;
            for c in 0..10 {
                acc ^= (h.get(r, c) as u8) & v[c];
            }
            assert_eq!(s[r], acc);
        }
    }

    #[test]
    fn puncture_identity_without_pattern() {
        let picks = [0, 1, 2, 0, 1, 2, 0, 0, 1];
        let h = ra_matrix(&picks, 3);
        let code = LinearCode::from_parts(
            toy_family(),
            h,
            vec![0; 6].into_iter().chain(vec![1; 6]).collect(),
            vec![],
        )
        .unwrap();
        let c = code.encode(&[1, 0, 1]).unwrap();
        assert_eq!(code.puncture(&c).unwrap(), c);
    }

    #[test]
    fn metadata_round_trip() {
        let picks = [0, 1, 2, 0, 1, 2, 0, 0, 1];
        let h = ra_matrix(&picks, 3);
        let code = LinearCode::from_parts(
            toy_family(),
            h.clone(),
            vec![0; 6].into_iter().chain(vec![1; 6]).collect(),
            vec![],
        )
        .unwrap();
        let meta = CodeMetadata::of(&code);
        let rebuilt = meta.clone().into_code(h).unwrap();
        assert_eq!(rebuilt.col_fading(), code.col_fading());
        assert_eq!(rebuilt.transmit_cols(), code.transmit_cols());
        assert_eq!(CodeMetadata::of(&rebuilt), meta);
    }
}
