//! Log-domain sum-product decoding with a flooding schedule and syndrome
//! early stopping.

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Input LLRs are clamped to this magnitude before the tanh transform.
const LLR_CLAMP: f64 = 50.0;
/// Check-node products are kept strictly inside (-1, 1) so atanh stays finite.
const TANH_CLAMP: f64 = 1.0 - 1e-12;

/// Outcome of a decode attempt. `converged` means the hard decisions satisfy
/// every parity check.
#[derive(Debug, Clone)]
pub struct DecodeResult {
    pub bits: Vec<u8>,
    pub iterations: usize,
    pub converged: bool,
}

/// Reusable decoder for one parity-check matrix: edge structure in CSR form,
/// plus a per-column view into the row-major message arrays.
#[derive(Debug, Clone)]
pub struct SpaDecoder {
    n_cols: usize,
    row_ptr: Vec<usize>,
    row_col: Vec<u32>,
    col_ptr: Vec<usize>,
    col_edge: Vec<u32>,
}

/// Scratch buffers so per-frame decoding does not reallocate.
#[derive(Debug, Default, Clone)]
pub struct DecodeScratch {
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    tanh: Vec<f64>,
    total: Vec<f64>,
    prefix: Vec<f64>,
    bits: Vec<u8>,
}

impl DecodeScratch {
    /// Hard decisions of the most recent decode.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

impl SpaDecoder {
    pub fn new(h: &BitMatrix) -> Self {
        let n_edges = h.num_entries();
        let mut row_ptr = Vec::with_capacity(h.n_rows() + 1);
        let mut row_col = Vec::with_capacity(n_edges);
        row_ptr.push(0);
        for r in 0..h.n_rows() {
            row_col.extend(h.row(r).iter().map(|&c| c as u32));
            row_ptr.push(row_col.len());
        }
        let mut col_ptr = Vec::with_capacity(h.n_cols() + 1);
        let mut col_edge = Vec::with_capacity(n_edges);
        let mut cursor = row_ptr.clone();
        col_ptr.push(0);
        for c in 0..h.n_cols() {
            for &r in h.col(c) {
                col_edge.push(cursor[r] as u32);
                cursor[r] += 1;
            }
            col_ptr.push(col_edge.len());
        }
        SpaDecoder {
            n_cols: h.n_cols(),
            row_ptr,
            row_col,
            col_ptr,
            col_edge,
        }
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Flooding-schedule log-SPA. Hard decisions are taken from the channel
    /// LLRs before the first iteration, so a noiseless codeword converges in
    /// zero iterations. An exactly zero posterior decides for bit 1, which
    /// keeps a fully erased input from masquerading as the zero codeword.
    pub fn decode(&self, llr_in: &[f64], max_iter: usize, ws: &mut DecodeScratch) -> Result<(usize, bool)> {
        if llr_in.len() != self.n_cols {
            return Err(Error::LengthMismatch {
                expected: self.n_cols,
                got: llr_in.len(),
            });
        }
        let n_edges = self.row_col.len();
        let n_rows = self.row_ptr.len() - 1;
        ws.v2c.resize(n_edges, 0.0);
        ws.c2v.resize(n_edges, 0.0);
        ws.tanh.resize(n_edges, 0.0);
        ws.total.resize(self.n_cols, 0.0);
        ws.bits.resize(self.n_cols, 0);
        let max_deg = (0..n_rows)
            .map(|r| self.row_ptr[r + 1] - self.row_ptr[r])
            .max()
            .unwrap_or(0);
        ws.prefix.resize(max_deg + 1, 0.0);

        self.hard_decision(llr_in, &mut ws.bits);
        if self.syndrome_ok(&ws.bits) {
            return Ok((0, true));
        }
        for (e, &c) in self.row_col.iter().enumerate() {
            ws.v2c[e] = llr_in[c as usize];
        }
        for iter in 1..=max_iter {
            // check-node update via prefix/suffix products of tanh(m/2)
            for (t, m) in ws.tanh.iter_mut().zip(&ws.v2c) {
                *t = (m.clamp(-LLR_CLAMP, LLR_CLAMP) / 2.0).tanh();
            }
            for r in 0..n_rows {
                let span = self.row_ptr[r]..self.row_ptr[r + 1];
                ws.prefix[0] = 1.0;
                for (i, e) in span.clone().enumerate() {
                    ws.prefix[i + 1] = ws.prefix[i] * ws.tanh[e];
                }
                let mut suffix = 1.0;
                for (i, e) in span.clone().enumerate().rev() {
                    let prod = (ws.prefix[i] * suffix).clamp(-TANH_CLAMP, TANH_CLAMP);
                    ws.c2v[e] = 2.0 * prod.atanh();
                    suffix *= ws.tanh[e];
                }
            }
            // variable-node update and posterior
            for c in 0..self.n_cols {
                let mut sum = llr_in[c];
                for &e in &self.col_edge[self.col_ptr[c]..self.col_ptr[c + 1]] {
                    sum += ws.c2v[e as usize];
                }
                ws.total[c] = sum;
            }
            for c in 0..self.n_cols {
                for &e in &self.col_edge[self.col_ptr[c]..self.col_ptr[c + 1]] {
                    ws.v2c[e as usize] = ws.total[c] - ws.c2v[e as usize];
                }
            }
            self.hard_decision(&ws.total, &mut ws.bits);
            if self.syndrome_ok(&ws.bits) {
                return Ok((iter, true));
            }
        }
        Ok((max_iter, false))
    }

    fn hard_decision(&self, soft: &[f64], bits: &mut [u8]) {
        for (b, &s) in bits.iter_mut().zip(soft) {
            *b = (s <= 0.0) as u8;
        }
    }

    fn syndrome_ok(&self, bits: &[u8]) -> bool {
        (0..self.row_ptr.len() - 1).all(|r| {
            self.row_col[self.row_ptr[r]..self.row_ptr[r + 1]]
                .iter()
                .fold(0u8, |acc, &c| acc ^ bits[c as usize])
                == 0
        })
    }
}

/// One-shot convenience wrapper around [`SpaDecoder`].
pub fn spa_decode(h: &BitMatrix, llr_in: &[f64], max_iter: usize) -> Result<DecodeResult> {
    let decoder = SpaDecoder::new(h);
    let mut ws = DecodeScratch::default();
    let (iterations, converged) = decoder.decode(llr_in, max_iter, &mut ws)?;
    Ok(DecodeResult {
        bits: ws.bits,
        iterations,
        converged,
    })
}
