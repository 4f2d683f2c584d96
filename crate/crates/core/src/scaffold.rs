//! Fixed parity-check scaffolds for RA, IRA and IRAA root-check codes.
//!
//! A scaffold is the deterministic part of a parity-check matrix: identity
//! blocks, accumulator chains and the second-stage permutation, plus the
//! bookkeeping the edge-growth stage needs (which sub-matrices it may fill,
//! the indicator vector of permitted check rows per variable block, degree
//! targets, the column-to-fading map and the puncturing pattern).
//!
//! Root-check layouts cross-place each accumulator chain into the check rows
//! that hold the identity block of the *other* fading's systematic bits, so
//! every information bit keeps one check whose remaining transmitted
//! participants all lie on different fading blocks.

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::ops::Range;

/// Code family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// Plain repeat-accumulate code: free repetition part, accumulator parity.
    Ra,
    /// IRA root-check, rate 1/2, two fading blocks.
    IraRcHalf,
    /// IRA root-check, rate 1/3, three fading blocks.
    IraRcThird,
    /// IRAA root-check, transmitted rate 1/2 after puncturing the first-stage parity.
    IraaRcHalf,
    /// IRAA root-check, transmitted rate 1/3 after puncturing the first-stage parity.
    IraaRcThird,
    /// Unconstrained PEG code, no root-check structure (diversity baseline).
    PegBaseline,
}

impl FamilyKind {
    pub fn is_root_check(self) -> bool {
        matches!(
            self,
            FamilyKind::IraRcHalf
                | FamilyKind::IraRcThird
                | FamilyKind::IraaRcHalf
                | FamilyKind::IraaRcThird
        )
    }

    pub fn is_iraa(self) -> bool {
        matches!(self, FamilyKind::IraaRcHalf | FamilyKind::IraaRcThird)
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Ra => "ra",
            FamilyKind::IraRcHalf => "ira-rc-half",
            FamilyKind::IraRcThird => "ira-rc-third",
            FamilyKind::IraaRcHalf => "iraa-rc-half",
            FamilyKind::IraaRcThird => "iraa-rc-third",
            FamilyKind::PegBaseline => "peg-baseline",
        }
    }
}

/// A code family instance: kind, pre-puncturing length, fading-block count
/// and construction seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFamily {
    pub kind: FamilyKind,
    /// Codeword length before puncturing.
    pub n: usize,
    /// Number of independent fading blocks the structure is built for (2 or 3).
    pub fading_blocks: usize,
    /// Seed for the permutation and edge-placement randomness.
    pub seed: u64,
}

impl CodeFamily {
    pub fn new(kind: FamilyKind, n: usize, fading_blocks: usize, seed: u64) -> Result<Self> {
        let fam = CodeFamily {
            kind,
            n,
            fading_blocks,
            seed,
        };
        fam.validate()?;
        Ok(fam)
    }

    /// Builds a family from the *transmitted* length; for IRAA families this
    /// back-computes the longer mother-code length.
    pub fn from_transmitted_len(
        kind: FamilyKind,
        n_tx: usize,
        fading_blocks: usize,
        seed: u64,
    ) -> Result<Self> {
        let n = match kind {
            FamilyKind::IraaRcHalf => {
                if n_tx % 4 != 0 {
                    return Err(Error::BadDimensions(format!(
                        "iraa-rc-half transmitted length {n_tx} must be divisible by 4"
                    )));
                }
                n_tx / 4 * 6
            }
            FamilyKind::IraaRcThird => {
                if n_tx % 9 != 0 {
                    return Err(Error::BadDimensions(format!(
                        "iraa-rc-third transmitted length {n_tx} must be divisible by 9"
                    )));
                }
                n_tx / 9 * 15
            }
            _ => n_tx,
        };
        CodeFamily::new(kind, n, fading_blocks, seed)
    }

    pub fn validate(&self) -> Result<()> {
        let req = |div: usize, f: usize| -> Result<()> {
            if self.n == 0 || self.n % div != 0 {
                return Err(Error::BadDimensions(format!(
                    "{} requires n divisible by {div}, got {}",
                    self.kind.name(),
                    self.n
                )));
            }
            if self.fading_blocks != f {
                return Err(Error::BadDimensions(format!(
                    "{} requires {f} fading blocks, got {}",
                    self.kind.name(),
                    self.fading_blocks
                )));
            }
            Ok(())
        };
        match self.kind {
            FamilyKind::IraRcHalf => req(4, 2),
            FamilyKind::IraRcThird => req(9, 3),
            FamilyKind::IraaRcHalf => req(6, 2),
            FamilyKind::IraaRcThird => req(15, 3),
            FamilyKind::Ra | FamilyKind::PegBaseline => {
                if !(2..=3).contains(&self.fading_blocks) {
                    return Err(Error::BadDimensions(format!(
                        "{} supports 2 or 3 fading blocks, got {}",
                        self.kind.name(),
                        self.fading_blocks
                    )));
                }
                if self.n == 0 || self.n % self.fading_blocks != 0 {
                    return Err(Error::BadDimensions(format!(
                        "{} requires n divisible by the fading-block count",
                        self.kind.name()
                    )));
                }
                Ok(())
            }
        }
    }

    /// Sub-matrix side length (beta for rate 1/2 layouts, chi for rate 1/3).
    pub fn block_size(&self) -> usize {
        match self.kind {
            FamilyKind::IraRcHalf => self.n / 4,
            FamilyKind::IraRcThird => self.n / 9,
            FamilyKind::IraaRcHalf => self.n / 6,
            FamilyKind::IraaRcThird => self.n / 15,
            FamilyKind::Ra | FamilyKind::PegBaseline => self.n / self.fading_blocks,
        }
    }

    /// Information length.
    pub fn k(&self) -> usize {
        match self.kind {
            FamilyKind::IraRcHalf => self.n / 2,
            FamilyKind::IraRcThird => self.n / 3,
            FamilyKind::IraaRcHalf => self.n / 3,
            FamilyKind::IraaRcThird => self.n / 5,
            FamilyKind::Ra | FamilyKind::PegBaseline => self.n / self.fading_blocks,
        }
    }

    /// Check-row count.
    pub fn m(&self) -> usize {
        self.n - self.k()
    }

    /// Transmitted length after puncturing.
    pub fn n_tx(&self) -> usize {
        match self.kind {
            FamilyKind::IraaRcHalf => self.n / 6 * 4,
            FamilyKind::IraaRcThird => self.n / 15 * 9,
            _ => self.n,
        }
    }

    /// Transmitted code rate as an exact fraction `(k, n_tx)`.
    pub fn rate_fraction(&self) -> (usize, usize) {
        (self.k(), self.n_tx())
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n_tx() as f64
    }
}

/// Role of a column block inside the scaffold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColClass {
    /// Information bits, placed by the edge-growth stage.
    Systematic,
    /// First-stage accumulator parity.
    Parity,
    /// Second-stage accumulator parity of IRAA designs.
    SecondStage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColBlock {
    pub start: usize,
    pub width: usize,
    pub class: ColClass,
}

impl ColBlock {
    pub fn range(&self) -> Range<usize> {
        self.start..self.start + self.width
    }
}

/// Fixed sub-matrix layout plus the constraints for edge placement.
#[derive(Debug, Clone)]
pub struct Scaffold {
    pub family: CodeFamily,
    /// Parity-check matrix holding only the fixed entries.
    pub h: BitMatrix,
    pub row_blocks: Vec<Range<usize>>,
    pub col_blocks: Vec<ColBlock>,
    /// `free_mask[row_block][col_block]` marks sub-matrices the edge-growth
    /// stage may fill.
    pub free_mask: Vec<Vec<bool>>,
    /// Per column block: permitted check rows for free edges (all false for
    /// fully fixed blocks).
    pub indicators: Vec<Vec<bool>>,
    /// Fading-block index (0-based) of every column.
    pub col_fading: Vec<usize>,
    /// Columns that receive free edges, ascending.
    pub peg_cols: Vec<usize>,
    /// Total target weight per entry of `peg_cols`.
    pub degree_targets: Vec<usize>,
    /// Column blocks removed before transmission.
    pub puncture_blocks: Vec<usize>,
}

impl Scaffold {
    pub fn n_rows(&self) -> usize {
        self.h.n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.h.n_cols()
    }

    pub fn col_block_of(&self, c: usize) -> usize {
        self.col_blocks
            .iter()
            .position(|b| b.range().contains(&c))
            .expect("column inside some block")
    }

    pub fn row_block_of(&self, r: usize) -> usize {
        self.row_blocks
            .iter()
            .position(|b| b.contains(&r))
            .expect("row inside some block")
    }

    pub fn indicator_for_col(&self, c: usize) -> &[bool] {
        &self.indicators[self.col_block_of(c)]
    }

    /// Punctured column indices, ascending.
    pub fn punctured_cols(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = self
            .puncture_blocks
            .iter()
            .flat_map(|&b| self.col_blocks[b].range())
            .collect();
        cols.sort_unstable();
        cols
    }

    /// Structural sanity of the scaffold itself.
    pub fn validate(&self) -> Result<()> {
        if self.degree_targets.len() != self.peg_cols.len() {
            return Err(Error::BadDimensions(
                "degree targets must align with placement columns".into(),
            ));
        }
        for (&c, &target) in self.peg_cols.iter().zip(&self.degree_targets) {
            let fixed = self.h.col_weight(c);
            if target < fixed {
                return Err(Error::InvalidConfig(format!(
                    "degree target {target} for column {c} below fixed weight {fixed}"
                )));
            }
            let permitted = self.indicator_for_col(c).iter().filter(|&&b| b).count();
            if target - fixed > permitted {
                return Err(Error::InvalidConfig(format!(
                    "degree target {target} for column {c} exceeds {permitted} permitted rows"
                )));
            }
        }
        // Fixed entries must not sit inside free sub-matrices, and indicators
        // must agree with the free mask.
        for (r, c) in self.h.entries() {
            let (rb, cb) = (self.row_block_of(r), self.col_block_of(c));
            if self.free_mask[rb][cb] {
                return Err(Error::InvalidConfig(format!(
                    "fixed entry ({r}, {c}) overlaps free block ({rb}, {cb})"
                )));
            }
        }
        for (cb, ind) in self.indicators.iter().enumerate() {
            if ind.len() != self.n_rows() {
                return Err(Error::BadDimensions(
                    "indicator length must equal the row count".into(),
                ));
            }
            for (rb, rows) in self.row_blocks.iter().enumerate() {
                let any = rows.clone().any(|r| ind[r]);
                if any != self.free_mask[rb][cb] {
                    return Err(Error::InvalidConfig(format!(
                        "indicator of column block {cb} disagrees with free mask at row block {rb}"
                    )));
                }
            }
        }
        for &b in &self.puncture_blocks {
            if self.col_blocks[b].class == ColClass::Systematic {
                return Err(Error::InvalidConfig(
                    "puncturing a systematic block is not allowed".into(),
                ));
            }
        }
        if self.family.kind.is_root_check() {
            self.check_root_precondition()?;
        }
        Ok(())
    }

    /// Root-check precondition on the fixed structure: the identity rows of
    /// each systematic block must contain no other transmitted column on the
    /// same fading, and no indicator may allow same-fading free edges into
    /// those rows.
    pub fn check_root_precondition(&self) -> Result<()> {
        let punctured: std::collections::HashSet<usize> =
            self.punctured_cols().into_iter().collect();
        for (sb, block) in self.col_blocks.iter().enumerate() {
            if block.class != ColClass::Systematic {
                continue;
            }
            let fading = self.col_fading[block.start];
            for c in block.range() {
                for &r in self.h.col(c) {
                    for &other in self.h.row(r) {
                        if other != c
                            && !punctured.contains(&other)
                            && self.col_fading[other] == fading
                        {
                            return Err(Error::InvalidConfig(format!(
                                "identity row {r} of block {sb} carries same-fading column {other}"
                            )));
                        }
                    }
                    for (cb2, block2) in self.col_blocks.iter().enumerate() {
                        if block2.class == ColClass::Systematic
                            && self.col_fading[block2.start] == fading
                            && self.indicators[cb2][r]
                        {
                            return Err(Error::InvalidConfig(format!(
                                "indicator of block {cb2} permits same-fading edges in root row {r}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Which columns are withheld from transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PunctureMode {
    /// The family's standard pattern: the first-stage parity blocks of the
    /// IRAA designs, nothing elsewhere.
    #[default]
    Standard,
    /// Transmit every column (rate-compatible lower-rate operation).
    None,
    /// Puncture the second-stage blocks instead of the first-stage parity
    /// (IRAA designs only).
    SecondStage,
}

/// Options for scaffold construction beyond the family itself.
#[derive(Debug, Clone)]
pub struct ScaffoldOptions {
    /// Uniform target column weight for all placement columns (for RA codes
    /// this is the repetition factor q). Defaults to the weight implied by
    /// the family layout.
    pub uniform_degree: Option<usize>,
    /// Full degree sequence, one entry per placement column; wins over
    /// `uniform_degree`.
    pub degree_targets: Option<Vec<usize>>,
    /// Minimum output separation of adjacent inputs in the second-stage
    /// permutation; 1 leaves the permutation unconstrained.
    pub pi1_min_displacement: usize,
    pub puncture: PunctureMode,
}

impl Default for ScaffoldOptions {
    fn default() -> Self {
        ScaffoldOptions {
            uniform_degree: None,
            degree_targets: None,
            pi1_min_displacement: 1,
            puncture: PunctureMode::Standard,
        }
    }
}

/// `m x m` accumulator matrix for 1/(1+D): ones at `(i, i)` and `(i, i-1)`.
pub fn build_dual_diagonal(m: usize) -> BitMatrix {
    let mut h = BitMatrix::zeros(m, m);
    for i in 0..m {
        h.insert(i, i).unwrap();
        if i > 0 {
            h.insert(i, i - 1).unwrap();
        }
    }
    h
}

/// `2chi x 2chi` accumulator matrix for 1/(1 + D + D^chi), from the recursion
/// `p_t = x_t + p_(t-1) + p_(t-chi)`: row `t` has ones at `t`, `t-1` and
/// `t-chi` where those exist. The first `chi` rows are the upper region, the
/// last `chi` rows the lower region used by the rate-1/3 layout.
pub fn build_hp_third(chi: usize) -> BitMatrix {
    assert!(chi >= 2, "accumulator span must be at least 2");
    let size = 2 * chi;
    let mut h = BitMatrix::zeros(size, size);
    for t in 0..size {
        h.insert(t, t).unwrap();
        if t >= 1 {
            h.insert(t, t - 1).unwrap();
        }
        if t >= chi {
            h.insert(t, t - chi).unwrap();
        }
    }
    h
}

/// The per-fading indicator vectors of a root-check family, normalized to
/// the scaffold's row count. Entry `f` permits the check rows where free
/// edges of fading-`f` systematic bits may be placed.
pub fn indicator_vectors(family: &CodeFamily) -> Result<Vec<Vec<bool>>> {
    family.validate()?;
    let b = family.block_size();
    let rows = family.m();
    let set = |ranges: &[Range<usize>]| -> Vec<bool> {
        let mut v = vec![false; rows];
        for r in ranges {
            for i in r.clone() {
                v[i] = true;
            }
        }
        v
    };
    match family.kind {
        FamilyKind::IraRcHalf | FamilyKind::IraaRcHalf => Ok(vec![
            set(&[b..2 * b]),
            set(&[0..b]),
        ]),
        FamilyKind::IraRcThird | FamilyKind::IraaRcThird => Ok(vec![
            set(&[2 * b..3 * b, 4 * b..5 * b]),
            set(&[0..b, 5 * b..6 * b]),
            set(&[b..2 * b, 3 * b..4 * b]),
        ]),
        _ => Err(Error::UnsupportedFamily(format!(
            "{} has no root-check indicators",
            family.kind.name()
        ))),
    }
}

/// Builds the scaffold for `family` with default options.
pub fn make_scaffold(family: &CodeFamily) -> Result<Scaffold> {
    make_scaffold_with(family, &ScaffoldOptions::default())
}

pub fn make_scaffold_with(family: &CodeFamily, opts: &ScaffoldOptions) -> Result<Scaffold> {
    family.validate()?;
    let mut scaffold = match family.kind {
        FamilyKind::IraRcHalf => ira_rc_half(family),
        FamilyKind::IraRcThird => ira_rc_third(family),
        FamilyKind::IraaRcHalf => iraa_rc_half(family, opts)?,
        FamilyKind::IraaRcThird => iraa_rc_third(family, opts)?,
        FamilyKind::Ra => ra(family),
        FamilyKind::PegBaseline => peg_baseline(family),
    };
    if let Some(seq) = &opts.degree_targets {
        if seq.len() != scaffold.peg_cols.len() {
            return Err(Error::InvalidConfig(format!(
                "degree sequence length {} does not match {} placement columns",
                seq.len(),
                scaffold.peg_cols.len()
            )));
        }
        scaffold.degree_targets = seq.clone();
    } else if let Some(d) = opts.uniform_degree {
        scaffold.degree_targets = vec![d; scaffold.peg_cols.len()];
    }
    match opts.puncture {
        PunctureMode::Standard => {}
        PunctureMode::None => scaffold.puncture_blocks.clear(),
        PunctureMode::SecondStage => {
            if !family.kind.is_iraa() {
                return Err(Error::InvalidConfig(format!(
                    "{} has no second-stage blocks to puncture",
                    family.kind.name()
                )));
            }
            scaffold.puncture_blocks = scaffold
                .col_blocks
                .iter()
                .enumerate()
                .filter(|(_, b)| b.class == ColClass::SecondStage)
                .map(|(i, _)| i)
                .collect();
        }
    }
    scaffold.validate()?;
    Ok(scaffold)
}

fn place(h: &mut BitMatrix, row0: usize, col0: usize, src: &BitMatrix) {
    for (r, c) in src.entries() {
        h.insert(row0 + r, col0 + c).unwrap();
    }
}

fn place_identity(h: &mut BitMatrix, row0: usize, col0: usize, size: usize) {
    for i in 0..size {
        h.insert(row0 + i, col0 + i).unwrap();
    }
}

/// Seeded uniform permutation with optional minimum displacement of adjacent
/// inputs at the output.
fn pi1_permutation(size: usize, seed: u64, min_displacement: usize) -> Result<Vec<usize>> {
    // Domain-separate the permutation stream from the edge-placement stream.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5049_315f_7065_726d);
    for _ in 0..1000 {
        let mut perm: Vec<usize> = (0..size).collect();
        for i in (1..size).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        let ok = min_displacement <= 1
            || perm
                .windows(2)
                .all(|w| w[0].abs_diff(w[1]) >= min_displacement);
        if ok {
            return Ok(perm);
        }
    }
    Err(Error::InvalidConfig(format!(
        "no permutation of size {size} with displacement {min_displacement} found"
    )))
}

fn blocks_of(widths: &[(usize, ColClass)]) -> Vec<ColBlock> {
    let mut start = 0;
    widths
        .iter()
        .map(|&(width, class)| {
            let b = ColBlock {
                start,
                width,
                class,
            };
            start += width;
            b
        })
        .collect()
}

fn expand_fading(col_blocks: &[ColBlock], fading: &[usize]) -> Vec<usize> {
    col_blocks
        .iter()
        .zip(fading)
        .flat_map(|(b, &f)| std::iter::repeat_n(f, b.width))
        .collect()
}

fn ira_rc_half(family: &CodeFamily) -> Scaffold {
    let b = family.block_size();
    let mut h = BitMatrix::zeros(2 * b, 4 * b);
    place_identity(&mut h, 0, 0, b);
    place_identity(&mut h, b, b, b);
    let dd = build_dual_diagonal(b);
    place(&mut h, b, 2 * b, &dd); // chain of fading-0 parity, cross row block
    place(&mut h, 0, 3 * b, &dd); // chain of fading-1 parity
    let col_blocks = blocks_of(&[
        (b, ColClass::Systematic),
        (b, ColClass::Systematic),
        (b, ColClass::Parity),
        (b, ColClass::Parity),
    ]);
    let z = indicator_vectors(family).unwrap();
    let none = vec![false; 2 * b];
    Scaffold {
        family: *family,
        h,
        row_blocks: vec![0..b, b..2 * b],
        col_blocks: col_blocks.clone(),
        free_mask: vec![
            vec![false, true, false, false],
            vec![true, false, false, false],
        ],
        indicators: vec![z[0].clone(), z[1].clone(), none.clone(), none],
        col_fading: expand_fading(&col_blocks, &[0, 1, 0, 1]),
        peg_cols: (0..2 * b).collect(),
        degree_targets: vec![3; 2 * b],
        puncture_blocks: vec![],
    }
}

/// Shared layout of the rate-1/3 fixed part (used by both the IRA scaffold
/// and the top of the IRAA scaffold): identity and accumulator regions of
/// the six-row-block structure.
fn place_third_fixed(h: &mut BitMatrix, chi: usize) {
    let hp = build_hp_third(chi);
    let hp1 = hp.submatrix(0..chi, 0..2 * chi);
    let hp2 = hp.submatrix(chi..2 * chi, 0..2 * chi);
    let (u1, u2, u3) = (0, chi, 2 * chi);
    let (p0, p1, p2) = (3 * chi, 5 * chi, 7 * chi);
    // row block 0: I at u1, upper-region rows of the fading-1 chain
    place_identity(h, 0, u1, chi);
    place(h, 0, p1, &hp2);
    // row block 1: I at u1, lower chain of fading-2 parity
    place_identity(h, chi, u1, chi);
    place(h, chi, p2, &hp1);
    // row block 2: I at u2, chain of fading-0 parity
    place_identity(h, 2 * chi, u2, chi);
    place(h, 2 * chi, p0, &hp1);
    // row block 3: I at u2
    place_identity(h, 3 * chi, u2, chi);
    place(h, 3 * chi, p2, &hp2);
    // row block 4: I at u3
    place_identity(h, 4 * chi, u3, chi);
    place(h, 4 * chi, p0, &hp2);
    // row block 5: I at u3
    place_identity(h, 5 * chi, u3, chi);
    place(h, 5 * chi, p1, &hp1);
}

fn third_free_mask(row_blocks: usize, col_blocks: usize) -> Vec<Vec<bool>> {
    let mut mask = vec![vec![false; col_blocks]; row_blocks];
    // free single-weight sub-matrices of the systematic columns
    mask[2][0] = true;
    mask[4][0] = true;
    mask[0][1] = true;
    mask[5][1] = true;
    mask[1][2] = true;
    mask[3][2] = true;
    mask
}

fn ira_rc_third(family: &CodeFamily) -> Scaffold {
    let chi = family.block_size();
    let mut h = BitMatrix::zeros(6 * chi, 9 * chi);
    place_third_fixed(&mut h, chi);
    let col_blocks = blocks_of(&[
        (chi, ColClass::Systematic),
        (chi, ColClass::Systematic),
        (chi, ColClass::Systematic),
        (2 * chi, ColClass::Parity),
        (2 * chi, ColClass::Parity),
        (2 * chi, ColClass::Parity),
    ]);
    let z = indicator_vectors(family).unwrap();
    let none = vec![false; 6 * chi];
    Scaffold {
        family: *family,
        h,
        row_blocks: (0..6).map(|i| i * chi..(i + 1) * chi).collect(),
        col_blocks: col_blocks.clone(),
        free_mask: third_free_mask(6, 6),
        indicators: vec![
            z[0].clone(),
            z[1].clone(),
            z[2].clone(),
            none.clone(),
            none.clone(),
            none,
        ],
        col_fading: expand_fading(&col_blocks, &[0, 1, 2, 0, 1, 2]),
        peg_cols: (0..3 * chi).collect(),
        degree_targets: vec![4; 3 * chi],
        puncture_blocks: vec![],
    }
}

fn iraa_rc_half(family: &CodeFamily, opts: &ScaffoldOptions) -> Result<Scaffold> {
    let b = family.block_size();
    let mut h = BitMatrix::zeros(4 * b, 6 * b);
    place_identity(&mut h, 0, 0, b);
    place_identity(&mut h, b, b, b);
    let dd = build_dual_diagonal(b);
    place(&mut h, b, 2 * b, &dd);
    place(&mut h, 0, 3 * b, &dd);
    // second stage: permutation over both first-stage parity blocks, with the
    // two output chains cross-placed
    let perm = pi1_permutation(2 * b, family.seed, opts.pi1_min_displacement)?;
    for (r, &p) in perm.iter().enumerate() {
        h.insert(2 * b + r, 2 * b + p).unwrap();
    }
    place(&mut h, 2 * b, 5 * b, &dd);
    place(&mut h, 3 * b, 4 * b, &dd);
    let col_blocks = blocks_of(&[
        (b, ColClass::Systematic),
        (b, ColClass::Systematic),
        (b, ColClass::Parity),
        (b, ColClass::Parity),
        (b, ColClass::SecondStage),
        (b, ColClass::SecondStage),
    ]);
    let z = indicator_vectors(family).unwrap();
    let none = vec![false; 4 * b];
    Ok(Scaffold {
        family: *family,
        h,
        row_blocks: (0..4).map(|i| i * b..(i + 1) * b).collect(),
        col_blocks: col_blocks.clone(),
        free_mask: vec![
            vec![false, true, false, false, false, false],
            vec![true, false, false, false, false, false],
            vec![false; 6],
            vec![false; 6],
        ],
        indicators: vec![
            z[0].clone(),
            z[1].clone(),
            none.clone(),
            none.clone(),
            none.clone(),
            none,
        ],
        col_fading: expand_fading(&col_blocks, &[0, 1, 0, 1, 0, 1]),
        peg_cols: (0..2 * b).collect(),
        degree_targets: vec![3; 2 * b],
        puncture_blocks: vec![2, 3],
    })
}

fn iraa_rc_third(family: &CodeFamily, opts: &ScaffoldOptions) -> Result<Scaffold> {
    let chi = family.block_size();
    let mut h = BitMatrix::zeros(12 * chi, 15 * chi);
    place_third_fixed(&mut h, chi);
    let perm = pi1_permutation(6 * chi, family.seed, opts.pi1_min_displacement)?;
    for (r, &p) in perm.iter().enumerate() {
        h.insert(6 * chi + r, 3 * chi + p).unwrap();
    }
    place(&mut h, 6 * chi, 9 * chi, &build_dual_diagonal(6 * chi));
    let col_blocks = blocks_of(&[
        (chi, ColClass::Systematic),
        (chi, ColClass::Systematic),
        (chi, ColClass::Systematic),
        (2 * chi, ColClass::Parity),
        (2 * chi, ColClass::Parity),
        (2 * chi, ColClass::Parity),
        (2 * chi, ColClass::SecondStage),
        (2 * chi, ColClass::SecondStage),
        (2 * chi, ColClass::SecondStage),
    ]);
    let mut free_mask = third_free_mask(12, 9);
    free_mask.iter_mut().for_each(|row| row.resize(9, false));
    let z = indicator_vectors(family).unwrap();
    let extend = |zi: &[bool]| {
        let mut v = zi.to_vec();
        v.resize(12 * chi, false);
        v
    };
    let none = vec![false; 12 * chi];
    Ok(Scaffold {
        family: *family,
        h,
        row_blocks: (0..12).map(|i| i * chi..(i + 1) * chi).collect(),
        col_blocks: col_blocks.clone(),
        free_mask,
        indicators: vec![
            extend(&z[0]),
            extend(&z[1]),
            extend(&z[2]),
            none.clone(),
            none.clone(),
            none.clone(),
            none.clone(),
            none.clone(),
            none,
        ],
        col_fading: expand_fading(&col_blocks, &[0, 1, 2, 0, 1, 2, 0, 1, 2]),
        peg_cols: (0..3 * chi).collect(),
        degree_targets: vec![4; 3 * chi],
        puncture_blocks: vec![3, 4, 5],
    })
}

/// Fading index per transmitted position for codes without a fading-aware
/// column layout: position `t` of `n_tx` maps to block `t * f / n_tx`.
fn positional_fading(n: usize, f: usize) -> Vec<usize> {
    (0..n).map(|t| t * f / n).collect()
}

fn ra(family: &CodeFamily) -> Scaffold {
    let k = family.k();
    let m = family.m();
    let mut h = BitMatrix::zeros(m, family.n);
    place(&mut h, 0, k, &build_dual_diagonal(m));
    let col_blocks = blocks_of(&[(k, ColClass::Systematic), (m, ColClass::Parity)]);
    Scaffold {
        family: *family,
        h,
        row_blocks: vec![0..m],
        col_blocks,
        free_mask: vec![vec![true, false]],
        indicators: vec![vec![true; m], vec![false; m]],
        col_fading: positional_fading(family.n, family.fading_blocks),
        peg_cols: (0..k).collect(),
        degree_targets: vec![3; k],
        puncture_blocks: vec![],
    }
}

fn peg_baseline(family: &CodeFamily) -> Scaffold {
    let k = family.k();
    let m = family.m();
    let col_blocks = blocks_of(&[(k, ColClass::Systematic), (m, ColClass::Parity)]);
    Scaffold {
        family: *family,
        h: BitMatrix::zeros(m, family.n),
        row_blocks: vec![0..m],
        col_blocks,
        free_mask: vec![vec![true, true]],
        indicators: vec![vec![true; m], vec![true; m]],
        col_fading: positional_fading(family.n, family.fading_blocks),
        peg_cols: (0..family.n).collect(),
        degree_targets: vec![3; family.n],
        puncture_blocks: vec![],
    }
}
