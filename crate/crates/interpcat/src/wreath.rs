//! The integer-rank model: a bracket at rank d becomes a direct sum of cells
//! in the d-fold product of the base category, one cell per placement of the
//! family into d slots, and a morphism becomes a block matrix whose entries
//! are base morphisms between cell words. Specializing the symbolic category
//! into this model is the ground truth that the polynomial composition law
//! is checked against.

use std::fmt;
use std::sync::Arc;

use crate::basecat::{ModuleCategory, TensorWord};
use crate::interp::{
    block_index_map, block_words, component_dims, hom_basis_morphisms, hom_recollements,
    index_tuples, BracketObject, InterpMorphism,
};
use crate::linalg::Mat;
use crate::scalar::{int, Rational, RankContext, Scalar};
use crate::{Error, Result};

/// A bracket realized at an integer rank: one cell per sequence of d slots
/// over the family indices and the blank marker, each index used exactly
/// once. The family does not fit when it is larger than the rank, leaving
/// no cells at all.
#[derive(Clone)]
pub struct WreathObject {
    cat: Arc<ModuleCategory>,
    rank: usize,
    family: Vec<TensorWord>,
    cells: Vec<Vec<Option<usize>>>,
}

impl PartialEq for WreathObject {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.cat, &other.cat)
            && self.rank == other.rank
            && self.family == other.family
    }
}

impl Eq for WreathObject {}

impl fmt::Debug for WreathObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "WreathObject(rank {}, {} slots filled, {} cells)",
            self.rank,
            self.family.len(),
            self.cells.len()
        )
    }
}

fn fill_cells(
    cells: &mut Vec<Vec<Option<usize>>>,
    current: &mut Vec<Option<usize>>,
    used: &mut [bool],
    unplaced: usize,
    d: usize,
) {
    if d - current.len() < unplaced {
        return;
    }
    if current.len() == d {
        cells.push(current.clone());
        return;
    }
    current.push(None);
    fill_cells(cells, current, used, unplaced, d);
    current.pop();
    for i in 0..used.len() {
        if !used[i] {
            used[i] = true;
            current.push(Some(i));
            fill_cells(cells, current, used, unplaced - 1, d);
            current.pop();
            used[i] = false;
        }
    }
}

impl WreathObject {
    pub fn category(&self) -> &Arc<ModuleCategory> {
        &self.cat
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn family(&self) -> &[TensorWord] {
        &self.family
    }

    /// The slot sequences, in lexicographic order with the blank before any
    /// family index.
    pub fn cells(&self) -> &[Vec<Option<usize>>] {
        &self.cells
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// The base tensor word of a cell: the concatenation of the slot words,
    /// blanks contributing nothing.
    pub fn cell_word(&self, cell: usize) -> TensorWord {
        let mut out = TensorWord::unit();
        for slot in &self.cells[cell] {
            if let Some(i) = slot {
                out = out.concat(&self.family[*i]);
            }
        }
        out
    }

    pub fn cell_dim(&self, cell: usize) -> usize {
        self.cat.word_dim(&self.cell_word(cell))
    }
}

/// Realizes a single bracket at an integer rank.
pub fn specialize_object(a: &BracketObject, d: usize) -> Result<WreathObject> {
    let family = match a.factors() {
        [] => Vec::new(),
        [family] => family.clone(),
        _ => {
            return Err(Error::Argument(format!(
                "only a single bracket has a cell model, not a {}-factor product",
                a.factor_count()
            )))
        }
    };
    let mut cells = Vec::new();
    let mut used = vec![false; family.len()];
    fill_cells(&mut cells, &mut Vec::new(), &mut used, family.len(), d);
    Ok(WreathObject {
        cat: a.category().clone(),
        rank: d,
        family,
        cells,
    })
}

/// A morphism of the integer-rank model: one base-category matrix per pair
/// of cells, mapping the source cell word to the target cell word.
#[derive(Clone, PartialEq, Eq)]
pub struct WreathMorphism {
    src: WreathObject,
    tgt: WreathObject,
    /// Indexed target-major: blocks[tc * src.cell_count() + sc].
    blocks: Vec<Mat>,
}

impl fmt::Debug for WreathMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "WreathMorphism(rank {}, {}x{} cells):",
            self.src.rank,
            self.tgt.cell_count(),
            self.src.cell_count()
        )?;
        for tc in 0..self.tgt.cell_count() {
            for sc in 0..self.src.cell_count() {
                writeln!(f, "  [{tc}][{sc}] = {:?}", self.block(sc, tc))?;
            }
        }
        Ok(())
    }
}

impl WreathMorphism {
    pub fn zero(src: WreathObject, tgt: WreathObject) -> Result<Self> {
        if !Arc::ptr_eq(&src.cat, &tgt.cat) || src.rank != tgt.rank {
            return Err(Error::Argument(
                "cells live over different bases or ranks".into(),
            ));
        }
        let mut blocks = Vec::with_capacity(src.cell_count() * tgt.cell_count());
        for tc in 0..tgt.cell_count() {
            for sc in 0..src.cell_count() {
                blocks.push(Mat::zeros(tgt.cell_dim(tc), src.cell_dim(sc)));
            }
        }
        Ok(WreathMorphism { src, tgt, blocks })
    }

    pub fn identity(obj: &WreathObject) -> Self {
        let mut out = WreathMorphism::zero(obj.clone(), obj.clone())
            .expect("an object shares its own setting");
        for c in 0..obj.cell_count() {
            let dim = obj.cell_dim(c);
            out.blocks[c * obj.cell_count() + c] = Mat::identity(dim);
        }
        out
    }

    pub fn src(&self) -> &WreathObject {
        &self.src
    }

    pub fn tgt(&self) -> &WreathObject {
        &self.tgt
    }

    /// The block at a source and target cell.
    pub fn block(&self, src_cell: usize, tgt_cell: usize) -> &Mat {
        &self.blocks[tgt_cell * self.src.cell_count() + src_cell]
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Mat::is_zero)
    }

    /// All block entries as one vector, blocks in target-major order and
    /// each block row-major.
    pub fn flattened(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for mat in &self.blocks {
            out.extend(mat.entries().iter().cloned());
        }
        out
    }
}

fn eval_at(s: &Scalar, value: &Rational) -> Rational {
    match s {
        Scalar::Symbolic(p) => p.eval(value),
        Scalar::Specialized(q) => q.clone(),
    }
}

/// Realizes a morphism at an integer rank. A component contributes to the
/// block at a cell pair exactly when pairing the two slot sequences matches
/// the component's recollement after the all-blank slots are dropped; the
/// entry is then the slot-ordered tensor of the component's factors, and
/// symbolic coefficients are evaluated at the rank. Components with more
/// blocks than slots can never match, so the high-graded part dies here.
pub fn specialize_morphism(phi: &InterpMorphism, d: usize) -> Result<WreathMorphism> {
    let value = match phi.context() {
        RankContext::Symbolic => int(d as i64),
        RankContext::Specialized(q) => {
            if q != &int(d as i64) {
                return Err(Error::Precondition(format!(
                    "morphism lives at rank {q}, cannot realize it at rank {d}"
                )));
            }
            q.clone()
        }
    };
    let src = specialize_object(phi.src(), d)?;
    let tgt = specialize_object(phi.tgt(), d)?;
    let m = src.family.len();
    let cat = src.cat.clone();
    let mut out = WreathMorphism::zero(src, tgt)?;

    for (r, v) in phi.components() {
        let r_blocks = r.blocks();
        let dims = component_dims(phi.src(), phi.tgt(), r)?;
        let block_idx = block_index_map(r);
        let mut bases = Vec::with_capacity(r_blocks.len());
        for block in &r_blocks {
            let (sw, tw) = block_words(phi.src(), phi.tgt(), block);
            bases.push(cat.hom_basis(&sw, &tw)?);
        }
        let tuples = index_tuples(&dims);

        for sc_i in 0..out.src.cell_count() {
            'target: for tc_i in 0..out.tgt.cell_count() {
                // Per slot, the component block realized there, if any.
                let mut slot_block = Vec::with_capacity(d);
                for a in 0..d {
                    let content = match (out.src.cells[sc_i][a], out.tgt.cells[tc_i][a]) {
                        (None, None) => {
                            slot_block.push(None);
                            continue;
                        }
                        (Some(i), None) => vec![i],
                        (None, Some(j)) => vec![m + j],
                        (Some(i), Some(j)) => vec![i, m + j],
                    };
                    match block_idx.get(&content) {
                        Some(&b) => slot_block.push(Some(b)),
                        None => continue 'target,
                    }
                }
                for (flat, alpha) in tuples.iter().enumerate() {
                    let c = eval_at(&v[flat], &value);
                    if num::traits::Zero::is_zero(&c) {
                        continue;
                    }
                    let mut entry = Mat::identity(1);
                    for slot in &slot_block {
                        if let Some(b) = slot {
                            entry = entry.kron(&bases[*b][alpha[*b]]);
                        }
                    }
                    let at = tc_i * out.src.cell_count() + sc_i;
                    out.blocks[at] = out.blocks[at].add(&entry.scale(&c));
                }
            }
        }
    }
    Ok(out)
}

/// Blockwise matrix composition in the integer-rank model.
pub fn compose_wreath(g: &WreathMorphism, f: &WreathMorphism) -> Result<WreathMorphism> {
    if f.tgt != g.src {
        return Err(Error::Argument(
            "block shapes do not match: inner objects differ".into(),
        ));
    }
    let mut out = WreathMorphism::zero(f.src.clone(), g.tgt.clone())?;
    let n_src = f.src.cell_count();
    let n_mid = f.tgt.cell_count();
    for tc in 0..g.tgt.cell_count() {
        for sc in 0..n_src {
            let mut acc = out.blocks[tc * n_src + sc].clone();
            for mc in 0..n_mid {
                acc = acc.add(&g.block(mc, tc).matmul(f.block(sc, mc)));
            }
            out.blocks[tc * n_src + sc] = acc;
        }
    }
    Ok(out)
}

/// The rank of the realization map on a full hom space, next to the
/// dimension of its low-graded part. The two agree for every shape: the map
/// is onto the model and kills exactly the components with more blocks than
/// the rank.
pub fn specialization_rank(
    a: &BracketObject,
    b: &BracketObject,
    d: usize,
) -> Result<(usize, usize)> {
    let basis = hom_basis_morphisms(a, b)?;
    let mut rows = Vec::with_capacity(basis.len());
    for f in &basis {
        rows.push(specialize_morphism(f, d)?.flattened());
    }
    let rank = if rows.is_empty() {
        0
    } else {
        Mat::from_rows(rows).rank()
    };
    let mut low = 0;
    for r in hom_recollements(a, b)? {
        if r.block_count() <= d {
            low += component_dims(a, b, &r)?.iter().product::<usize>();
        }
    }
    Ok((rank, low))
}

/// The outcome of one ground-truth comparison: whether composing in the
/// symbolic category and then realizing agrees with composing the realized
/// block matrices, together with the rank analysis of the realization map
/// on the first factor's hom space.
pub struct OracleReport {
    pub rank: usize,
    pub composition_agrees: bool,
    pub image_rank: usize,
    pub low_dim: usize,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.composition_agrees && self.image_rank == self.low_dim
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank {}: composition {}, image rank {} vs low-graded dim {}",
            self.rank,
            if self.composition_agrees {
                "agrees"
            } else {
                "DISAGREES"
            },
            self.image_rank,
            self.low_dim
        )
    }
}

/// Checks one composable pair against the block-matrix model.
pub fn oracle_check(psi: &InterpMorphism, phi: &InterpMorphism, d: usize) -> Result<OracleReport> {
    let direct = specialize_morphism(&psi.compose(phi)?, d)?;
    let model = compose_wreath(&specialize_morphism(psi, d)?, &specialize_morphism(phi, d)?)?;
    let (image_rank, low_dim) = specialization_rank(phi.src(), phi.tgt(), d)?;
    Ok(OracleReport {
        rank: d,
        composition_agrees: direct == model,
        image_rank,
        low_dim,
    })
}
