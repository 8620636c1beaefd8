//! Transport between different ranks and base categories: the star product
//! against a family of base objects (rank t to t + d), the restriction of a
//! morphism at a split rank t = t₁ + t₂ into cells over subset pairs, and
//! the pushforward along a presented functor of base categories.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::basecat::{ModuleCategory, TensorWord};
use crate::linalg::Mat;
use crate::partitions::Recollement;
use crate::scalar::{Rational, RankContext, Scalar};
use crate::{Error, Result};

use super::{
    accumulate, block_index_map, block_words, component_dims, hom_basis_morphisms, hom_dim,
    hom_recollements, hom_sizes, index_tuples, BracketObject, InterpMorphism,
};

fn single_family(obj: &BracketObject, what: &str) -> Result<Vec<TensorWord>> {
    match obj.factors() {
        [] => Ok(Vec::new()),
        [family] => Ok(family.clone()),
        _ => Err(Error::Argument(format!(
            "{what} works on a single bracket, not a {}-factor product",
            obj.factor_count()
        ))),
    }
}

/// The object half of the star product: appends the listed base objects to
/// the family of a single bracket and raises the rank by their count.
pub fn star_product_object(a: &BracketObject, w: &[TensorWord]) -> Result<BracketObject> {
    let mut family = single_family(a, "the star product")?;
    let context = match a.context() {
        RankContext::Symbolic => RankContext::Symbolic,
        RankContext::Specialized(t1) => {
            RankContext::Specialized(t1 + Rational::from_integer(w.len().into()))
        }
    };
    family.extend_from_slice(w);
    Ok(BracketObject::bracket(a.category().clone(), context, family))
}

/// The star product on morphisms: each component gains one identity-paired
/// block per appended object, and symbolic coefficients have their argument
/// shifted so that specialized values are carried over unchanged.
pub fn star_product(phi: &InterpMorphism, w: &[TensorWord]) -> Result<InterpMorphism> {
    let src = star_product_object(phi.src(), w)?;
    let tgt = star_product_object(phi.tgt(), w)?;
    let cat = src.category().clone();
    let d2 = w.len();
    let shift = Rational::from_integer(d2.into());
    let m = phi.src().total_size();
    let n = phi.tgt().total_size();
    let new_sizes = hom_sizes(&src, &tgt);

    let id_coords: Vec<Vec<Rational>> = w
        .iter()
        .map(|word| cat.identity_coords(word))
        .collect::<Result<_>>()?;
    let pair_dims: Vec<usize> = id_coords.iter().map(Vec::len).collect();

    let mut components = BTreeMap::new();
    for (r, v) in phi.components() {
        let old_blocks = r.blocks();
        let mut blocks: Vec<Vec<usize>> = old_blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&p| if p < m { p } else { p + d2 })
                    .collect()
            })
            .collect();
        for k in 0..d2 {
            blocks.push(vec![m + k, m + d2 + n + k]);
        }
        let new_r = Recollement::from_blocks(new_sizes.clone(), &blocks)?;
        let slot_index = block_index_map(&new_r);
        let new_dims = component_dims(&src, &tgt, &new_r)?;
        let mut strides = vec![1usize; new_dims.len()];
        for k in (0..new_dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * new_dims[k + 1];
        }
        let old_slots: Vec<usize> = blocks[..old_blocks.len()]
            .iter()
            .map(|b| slot_index[b])
            .collect();
        let pair_slots: Vec<usize> = blocks[old_blocks.len()..]
            .iter()
            .map(|b| slot_index[b])
            .collect();

        let old_dims = component_dims(phi.src(), phi.tgt(), r)?;
        let mut vec = vec![src.context().zero(); new_dims.iter().product()];
        for (flat, alpha) in index_tuples(&old_dims).iter().enumerate() {
            let c = match &v[flat] {
                Scalar::Symbolic(p) => Scalar::Symbolic(p.shift_arg(&shift)),
                Scalar::Specialized(q) => Scalar::Specialized(q.clone()),
            };
            if c.is_zero() {
                continue;
            }
            let base: usize = alpha
                .iter()
                .zip(&old_slots)
                .map(|(&a, &slot)| a * strides[slot])
                .sum();
            for gamma in index_tuples(&pair_dims) {
                let mut weight = crate::scalar::int(1);
                let mut off = base;
                for ((coords, &k), &slot) in id_coords.iter().zip(&gamma).zip(&pair_slots) {
                    weight *= &coords[k];
                    off += k * strides[slot];
                }
                if !num::traits::Zero::is_zero(&weight) {
                    vec[off] = vec[off].add(&c.scale(&weight));
                }
            }
        }
        accumulate(&mut components, new_r, vec);
    }
    InterpMorphism::from_components(src, tgt, components)
}

/// A morphism of the rank-t category split over a rank decomposition
/// t = t₁ + t₂: one cell per pair of source and target subsets, holding an
/// element of the tensor product of the two smaller hom spaces as a matrix
/// over their canonical bases. All-zero cells are dropped, so structural
/// equality is mathematical equality.
#[derive(Clone)]
pub struct SplitHom {
    cat: Arc<ModuleCategory>,
    t1: Rational,
    t2: Rational,
    src_family: Vec<TensorWord>,
    tgt_family: Vec<TensorWord>,
    entries: BTreeMap<(Vec<usize>, Vec<usize>), Mat>,
}

impl PartialEq for SplitHom {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.cat, &other.cat)
            && self.t1 == other.t1
            && self.t2 == other.t2
            && self.src_family == other.src_family
            && self.tgt_family == other.tgt_family
            && self.entries == other.entries
    }
}

impl Eq for SplitHom {}

impl fmt::Debug for SplitHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SplitHom at {} + {}:", self.t1, self.t2)?;
        for ((src_sub, tgt_sub), mat) in &self.entries {
            writeln!(f, "  {src_sub:?} -> {tgt_sub:?}: {mat:?}")?;
        }
        Ok(())
    }
}

impl SplitHom {
    pub fn t1(&self) -> &Rational {
        &self.t1
    }

    pub fn t2(&self) -> &Rational {
        &self.t2
    }

    pub fn src_family(&self) -> &[TensorWord] {
        &self.src_family
    }

    pub fn tgt_family(&self) -> &[TensorWord] {
        &self.tgt_family
    }

    pub fn entries(&self) -> &BTreeMap<(Vec<usize>, Vec<usize>), Mat> {
        &self.entries
    }

    pub fn entry(&self, src_subset: &[usize], tgt_subset: &[usize]) -> Option<&Mat> {
        self.entries
            .get(&(src_subset.to_vec(), tgt_subset.to_vec()))
    }

    fn object_for(&self, family: &[TensorWord], subset: &[usize], first: bool) -> BracketObject {
        let context = RankContext::Specialized(if first {
            self.t1.clone()
        } else {
            self.t2.clone()
        });
        let words: Vec<TensorWord> = if first {
            subset.iter().map(|&i| family[i].clone()).collect()
        } else {
            (0..family.len())
                .filter(|i| !subset.contains(i))
                .map(|i| family[i].clone())
                .collect()
        };
        BracketObject::bracket(self.cat.clone(), context, words)
    }

    /// The cell entry as an explicit sum of pairs of morphisms, scalars
    /// folded into the first halves.
    pub fn entry_pairs(
        &self,
        src_subset: &[usize],
        tgt_subset: &[usize],
    ) -> Result<Vec<(InterpMorphism, InterpMorphism)>> {
        let Some(mat) = self.entry(src_subset, tgt_subset) else {
            return Ok(Vec::new());
        };
        let a1 = self.object_for(&self.src_family, src_subset, true);
        let b1 = self.object_for(&self.tgt_family, tgt_subset, true);
        let a2 = self.object_for(&self.src_family, src_subset, false);
        let b2 = self.object_for(&self.tgt_family, tgt_subset, false);
        let basis1 = hom_basis_morphisms(&a1, &b1)?;
        let basis2 = hom_basis_morphisms(&a2, &b2)?;
        let mut out = Vec::new();
        for row in 0..mat.rows() {
            for col in 0..mat.cols() {
                let c = mat.at(row, col);
                if !num::traits::Zero::is_zero(c) {
                    out.push((basis1[row].scale_rational(c), basis2[col].clone()));
                }
            }
        }
        Ok(out)
    }

    /// self ∘ other, cellwise: sums the composites of both halves over every
    /// middle subset.
    pub fn compose(&self, other: &SplitHom) -> Result<SplitHom> {
        if !Arc::ptr_eq(&self.cat, &other.cat) || self.t1 != other.t1 || self.t2 != other.t2 {
            return Err(Error::Argument(
                "split composition requires one base and one rank split".into(),
            ));
        }
        if self.src_family != other.tgt_family {
            return Err(Error::Argument(
                "split composition mismatch in the middle family".into(),
            ));
        }
        let mut out = SplitHom {
            cat: self.cat.clone(),
            t1: self.t1.clone(),
            t2: self.t2.clone(),
            src_family: other.src_family.clone(),
            tgt_family: self.tgt_family.clone(),
            entries: BTreeMap::new(),
        };
        for (mid_g, tgt_sub) in self.entries.keys() {
            for (src_sub, mid_f) in other.entries.keys() {
                if mid_f != mid_g {
                    continue;
                }
                let first_pairs = other.entry_pairs(src_sub, mid_f)?;
                let second_pairs = self.entry_pairs(mid_g, tgt_sub)?;
                let a1 = out.object_for(&out.src_family, src_sub, true);
                let b1 = out.object_for(&out.tgt_family, tgt_sub, true);
                let a2 = out.object_for(&out.src_family, src_sub, false);
                let b2 = out.object_for(&out.tgt_family, tgt_sub, false);
                let rows = hom_dim(&a1, &b1)?;
                let cols = hom_dim(&a2, &b2)?;
                let slot = out
                    .entries
                    .entry((src_sub.clone(), tgt_sub.clone()))
                    .or_insert_with(|| Mat::zeros(rows, cols));
                for (g1, g2) in &second_pairs {
                    for (f1, f2) in &first_pairs {
                        let c1 = canonical_coordinates(&g1.compose(f1)?)?;
                        let c2 = canonical_coordinates(&g2.compose(f2)?)?;
                        for (i, a) in c1.iter().enumerate() {
                            if num::traits::Zero::is_zero(a) {
                                continue;
                            }
                            for (j, b) in c2.iter().enumerate() {
                                let cur = slot.at(i, j).clone();
                                slot.set(i, j, cur + a * b);
                            }
                        }
                    }
                }
            }
        }
        out.entries.retain(|_, m| !m.is_zero());
        Ok(out)
    }
}

/// The coefficient vector of a specialized morphism over the canonical
/// ordering of its hom space: components in recollement enumeration order,
/// each flattened contiguously.
pub(crate) fn canonical_coordinates(phi: &InterpMorphism) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for r in hom_recollements(phi.src(), phi.tgt())? {
        let dim: usize = component_dims(phi.src(), phi.tgt(), &r)?.iter().product();
        match phi.components().get(&r) {
            Some(v) => {
                for s in v {
                    match s {
                        Scalar::Specialized(q) => out.push(q.clone()),
                        Scalar::Symbolic(_) => {
                            return Err(Error::Argument(
                                "coordinates require a specialized rank".into(),
                            ))
                        }
                    }
                }
            }
            None => out.extend(std::iter::repeat(crate::scalar::int(0)).take(dim)),
        }
    }
    Ok(out)
}

/// Splits a morphism at rank t = t₁ + t₂ into its cells over pairs of
/// subsets of the source and target families. A component contributes to the
/// cell (I', J') once for every way of dividing its blocks between the two
/// sides; a block gluing into both sides at once cannot be divided, so such
/// recollements contribute nothing to the mixed cells.
pub fn restrict_sum(phi: &InterpMorphism, t1: &Rational, t2: &Rational) -> Result<SplitHom> {
    let RankContext::Specialized(t) = phi.context() else {
        return Err(Error::Argument(
            "the split restriction is defined at specialized ranks only".into(),
        ));
    };
    if t != &(t1 + t2) {
        return Err(Error::Argument(format!(
            "rank {t} does not split as {t1} + {t2}"
        )));
    }
    let src_family = single_family(phi.src(), "the split restriction")?;
    let tgt_family = single_family(phi.tgt(), "the split restriction")?;
    let m = src_family.len();

    let mut split = SplitHom {
        cat: phi.src().category().clone(),
        t1: t1.clone(),
        t2: t2.clone(),
        src_family,
        tgt_family,
        entries: BTreeMap::new(),
    };

    for (r, v) in phi.components() {
        let blocks = r.blocks();
        let dims = component_dims(phi.src(), phi.tgt(), r)?;
        for mask in 0u64..(1u64 << blocks.len()) {
            let first: Vec<usize> = (0..blocks.len()).filter(|&b| mask >> b & 1 == 1).collect();
            let second: Vec<usize> = (0..blocks.len()).filter(|&b| mask >> b & 1 == 0).collect();
            let mut src_sub: Vec<usize> = first
                .iter()
                .flat_map(|&b| blocks[b].iter().filter(|&&p| p < m).copied())
                .collect();
            let mut tgt_sub: Vec<usize> = first
                .iter()
                .flat_map(|&b| blocks[b].iter().filter(|&&p| p >= m).map(|&p| p - m))
                .collect();
            src_sub.sort_unstable();
            tgt_sub.sort_unstable();

            let (r1, order1) = renumbered(&blocks, &first, m, &src_sub, &tgt_sub)?;
            let comp_src: Vec<usize> = (0..m).filter(|i| !src_sub.contains(i)).collect();
            let comp_tgt: Vec<usize> = (0..split.tgt_family.len())
                .filter(|j| !tgt_sub.contains(j))
                .collect();
            let (r2, order2) = renumbered(&blocks, &second, m, &comp_src, &comp_tgt)?;

            let a1 = split.object_for(&split.src_family, &src_sub, true);
            let b1 = split.object_for(&split.tgt_family, &tgt_sub, true);
            let a2 = split.object_for(&split.src_family, &src_sub, false);
            let b2 = split.object_for(&split.tgt_family, &tgt_sub, false);
            let row_base = hom_offset(&a1, &b1, &r1)?;
            let col_base = hom_offset(&a2, &b2, &r2)?;
            let rows = hom_dim(&a1, &b1)?;
            let cols = hom_dim(&a2, &b2)?;

            let dims1: Vec<usize> = order1.iter().map(|&b| dims[b]).collect();
            let dims2: Vec<usize> = order2.iter().map(|&b| dims[b]).collect();
            let mut strides1 = vec![1usize; dims1.len()];
            for k in (0..dims1.len().saturating_sub(1)).rev() {
                strides1[k] = strides1[k + 1] * dims1[k + 1];
            }
            let mut strides2 = vec![1usize; dims2.len()];
            for k in (0..dims2.len().saturating_sub(1)).rev() {
                strides2[k] = strides2[k + 1] * dims2[k + 1];
            }

            let slot = split
                .entries
                .entry((src_sub.clone(), tgt_sub.clone()))
                .or_insert_with(|| Mat::zeros(rows, cols));
            for (flat, alpha) in index_tuples(&dims).iter().enumerate() {
                let c = match &v[flat] {
                    Scalar::Specialized(q) => q.clone(),
                    Scalar::Symbolic(_) => unreachable!("context checked above"),
                };
                if num::traits::Zero::is_zero(&c) {
                    continue;
                }
                let row = row_base
                    + order1
                        .iter()
                        .zip(&strides1)
                        .map(|(&b, &st)| alpha[b] * st)
                        .sum::<usize>();
                let col = col_base
                    + order2
                        .iter()
                        .zip(&strides2)
                        .map(|(&b, &st)| alpha[b] * st)
                        .sum::<usize>();
                let cur = slot.at(row, col).clone();
                slot.set(row, col, cur + c);
            }
        }
    }
    split.entries.retain(|_, mat| !mat.is_zero());
    Ok(split)
}

/// Rebuilds the chosen blocks as a recollement over the renumbered subset
/// positions, returning it together with the original block index behind
/// each of its canonical blocks.
fn renumbered(
    blocks: &[Vec<usize>],
    chosen: &[usize],
    m: usize,
    src_subset: &[usize],
    tgt_subset: &[usize],
) -> Result<(Recollement, Vec<usize>)> {
    let src_pos: BTreeMap<usize, usize> =
        src_subset.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let tgt_pos: BTreeMap<usize, usize> =
        tgt_subset.iter().enumerate().map(|(k, &j)| (j, k)).collect();
    let mut new_blocks = Vec::with_capacity(chosen.len());
    for &b in chosen {
        let mut mapped: Vec<usize> = blocks[b]
            .iter()
            .map(|&p| {
                if p < m {
                    src_pos[&p]
                } else {
                    src_subset.len() + tgt_pos[&(p - m)]
                }
            })
            .collect();
        mapped.sort_unstable();
        new_blocks.push(mapped);
    }
    let mut sizes = Vec::new();
    if !src_subset.is_empty() {
        sizes.push(src_subset.len());
    }
    if !tgt_subset.is_empty() {
        sizes.push(tgt_subset.len());
    }
    let r = Recollement::from_blocks(sizes, &new_blocks)?;
    let index = block_index_map(&r);
    let mut order = vec![0usize; chosen.len()];
    for (k, &b) in chosen.iter().enumerate() {
        order[index[&new_blocks[k]]] = b;
    }
    Ok((r, order))
}

/// The starting index of a component in the canonical ordering of a hom
/// space, which lists recollements in enumeration order with the basis of
/// each component contiguous.
fn hom_offset(a: &BracketObject, b: &BracketObject, r: &Recollement) -> Result<usize> {
    let mut offset = 0;
    for s in hom_recollements(a, b)? {
        if &s == r {
            return Ok(offset);
        }
        offset += component_dims(a, b, &s)?.iter().product::<usize>();
    }
    Err(Error::Argument(format!(
        "recollement {r} is not a component of this hom space"
    )))
}

/// A functor of base categories, presented by one image word and one
/// invertible identification matrix per source generator. Morphisms push
/// forward by conjugation; the presentation is validated to send hom bases
/// of short words to morphisms of the target.
pub struct BaseFunctor {
    src: Arc<ModuleCategory>,
    tgt: Arc<ModuleCategory>,
    images: Vec<(TensorWord, Mat)>,
}

impl BaseFunctor {
    pub fn new(
        src: Arc<ModuleCategory>,
        tgt: Arc<ModuleCategory>,
        images: Vec<(TensorWord, Mat)>,
    ) -> Result<Self> {
        if images.len() != src.generator_count() {
            return Err(Error::Argument(format!(
                "need one image per generator: {} given, {} generators",
                images.len(),
                src.generator_count()
            )));
        }
        for (g, (word, q)) in images.iter().enumerate() {
            let d_src = src.generator(g).dim();
            let d_tgt = tgt.word_dim(word);
            if q.rows() != d_tgt || q.cols() != d_src {
                return Err(Error::Argument(format!(
                    "identification for generator {} must be {}x{}, got {}x{}",
                    src.generator_name(g),
                    d_tgt,
                    d_src,
                    q.rows(),
                    q.cols()
                )));
            }
            if q.inverse().is_none() {
                return Err(Error::Argument(format!(
                    "identification for generator {} is not invertible",
                    src.generator_name(g)
                )));
            }
        }
        let functor = BaseFunctor { src, tgt, images };
        functor.validate()?;
        Ok(functor)
    }

    /// The identity presentation on a category.
    pub fn identity(cat: &Arc<ModuleCategory>) -> BaseFunctor {
        let images = (0..cat.generator_count())
            .map(|g| (TensorWord::letter(g), Mat::identity(cat.generator(g).dim())))
            .collect();
        BaseFunctor {
            src: cat.clone(),
            tgt: cat.clone(),
            images,
        }
    }

    fn validate(&self) -> Result<()> {
        let mut words = vec![TensorWord::unit()];
        for g in 0..self.src.generator_count() {
            words.push(TensorWord::letter(g));
            for h in 0..self.src.generator_count() {
                words.push(TensorWord::letter(g).concat(&TensorWord::letter(h)));
            }
        }
        for w in &words {
            for w2 in &words {
                let basis = self.src.hom_basis(w, w2)?;
                for f in basis.iter() {
                    if self.push_matrix(w, w2, f).is_err() {
                        return Err(Error::Validation(format!(
                            "the presentation does not send Hom({}, {}) into morphisms of the target",
                            self.src.word_label(w),
                            self.src.word_label(w2)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<ModuleCategory> {
        &self.src
    }

    pub fn target(&self) -> &Arc<ModuleCategory> {
        &self.tgt
    }

    pub fn word_image(&self, w: &TensorWord) -> TensorWord {
        let mut out = TensorWord::unit();
        for &g in w.letters() {
            out = out.concat(&self.images[g].0);
        }
        out
    }

    fn matrix_for(&self, w: &TensorWord) -> Mat {
        let mut out = Mat::identity(1);
        for &g in w.letters() {
            out = out.kron(&self.images[g].1);
        }
        out
    }

    /// The image of a base morphism, as target-basis coordinates.
    fn push_matrix(
        &self,
        w_src: &TensorWord,
        w_tgt: &TensorWord,
        f: &Mat,
    ) -> Result<Vec<Rational>> {
        let q_src_inv = self
            .matrix_for(w_src)
            .inverse()
            .expect("identifications are invertible");
        let image = self.matrix_for(w_tgt).matmul(f).matmul(&q_src_inv);
        self.tgt
            .express(&self.word_image(w_src), &self.word_image(w_tgt), &image)
    }

    pub fn object_image(&self, a: &BracketObject) -> Result<BracketObject> {
        if !Arc::ptr_eq(a.category(), &self.src) {
            return Err(Error::Argument(
                "object lives over a different base than the functor source".into(),
            ));
        }
        let factors = a
            .factors()
            .iter()
            .map(|family| family.iter().map(|w| self.word_image(w)).collect())
            .collect();
        Ok(BracketObject::from_factors(
            self.tgt.clone(),
            a.context().clone(),
            factors,
        ))
    }

    /// Pushes a morphism forward: the recollement structure is kept and each
    /// block's coefficients are rewritten through the conjugated basis.
    pub fn apply(&self, phi: &InterpMorphism) -> Result<InterpMorphism> {
        let src = self.object_image(phi.src())?;
        let tgt = self.object_image(phi.tgt())?;
        let mut components = BTreeMap::new();
        for (r, v) in phi.components() {
            let blocks = r.blocks();
            let old_dims = component_dims(phi.src(), phi.tgt(), r)?;
            let new_dims = component_dims(&src, &tgt, r)?;
            let mut strides = vec![1usize; new_dims.len()];
            for k in (0..new_dims.len().saturating_sub(1)).rev() {
                strides[k] = strides[k + 1] * new_dims[k + 1];
            }
            // Per block, the basis image table: source basis index to target
            // coordinates.
            let mut tables: Vec<Vec<Vec<Rational>>> = Vec::with_capacity(blocks.len());
            for block in &blocks {
                let (sw, tw) = block_words(phi.src(), phi.tgt(), block);
                let basis = self.src.hom_basis(&sw, &tw)?;
                let mut table = Vec::with_capacity(basis.len());
                for f in basis.iter() {
                    table.push(self.push_matrix(&sw, &tw, f)?);
                }
                tables.push(table);
            }
            let mut vec = vec![src.context().zero(); new_dims.iter().product()];
            for (flat, alpha) in index_tuples(&old_dims).iter().enumerate() {
                let c = &v[flat];
                if c.is_zero() {
                    continue;
                }
                let picks: Vec<&Vec<Rational>> = alpha
                    .iter()
                    .zip(&tables)
                    .map(|(&a, table)| &table[a])
                    .collect();
                let pick_dims: Vec<usize> = picks.iter().map(|p| p.len()).collect();
                for gamma in index_tuples(&pick_dims) {
                    let mut weight = crate::scalar::int(1);
                    let mut off = 0;
                    for ((pick, &k), &st) in picks.iter().zip(&gamma).zip(&strides) {
                        weight *= &pick[k];
                        off += k * st;
                    }
                    if !num::traits::Zero::is_zero(&weight) {
                        vec[off] = vec[off].add(&c.scale(&weight));
                    }
                }
            }
            accumulate(&mut components, r.clone(), vec);
        }
        InterpMorphism::from_components(src, tgt, components)
    }
}

/// Pushes a morphism through a presented base functor.
pub fn apply_functor(f: &BaseFunctor, phi: &InterpMorphism) -> Result<InterpMorphism> {
    f.apply(phi)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{deligne_symbolic, one_bracket, random_morphism, split_x};
    use super::*;
    use crate::basecat::cyclic_group_table;
    use crate::scalar::{int, ratio, RankPolynomial};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn units(n: usize) -> Vec<TensorWord> {
        vec![TensorWord::unit(); n]
    }

    #[test]
    fn star_with_an_empty_list_changes_nothing() {
        let (cat, ctx) = deligne_symbolic();
        let x = split_x(&cat, &ctx);
        assert_eq!(star_product(&x, &[]).unwrap(), x);
    }

    #[test]
    fn star_grows_the_family_and_the_rank() {
        let (cat, _) = deligne_symbolic();
        let at3 = one_bracket(&cat, &RankContext::Specialized(int(3)), 1);
        let starred = star_product_object(&at3, &units(1)).unwrap();
        assert_eq!(starred.context(), &RankContext::Specialized(int(4)));
        assert_eq!(starred.factor_sizes(), vec![2]);
        assert_eq!(hom_dim(&at3, &at3).unwrap(), 2);
        assert_eq!(hom_dim(&starred, &starred).unwrap(), 7);
    }

    #[test]
    fn star_shifts_symbolic_coefficients() {
        // x² = (t−1)id + (t−2)x, so the starred composite must read (t−2)
        // and (t−3) against the starred basis elements.
        let (cat, ctx) = deligne_symbolic();
        let x = split_x(&cat, &ctx);
        let sq = x.compose(&x).unwrap();
        let starred_sq = star_product(&sq, &units(1)).unwrap();
        let star_x = star_product(&x, &units(1)).unwrap();
        let star_id = star_product(&InterpMorphism::identity(x.src()), &units(1)).unwrap();
        let t_minus =
            |k: i64| Scalar::Symbolic(RankPolynomial::from_coeffs(vec![int(-k), int(1)]));
        let expected = star_id
            .scale(&t_minus(2))
            .unwrap()
            .add(&star_x.scale(&t_minus(3)).unwrap())
            .unwrap();
        assert_eq!(starred_sq, expected);
    }

    #[test]
    fn star_is_functorial() {
        let (cat, ctx) = deligne_symbolic();
        let obj = one_bracket(&cat, &ctx, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..3 {
            let f = random_morphism(&obj, &obj, &mut rng);
            let g = random_morphism(&obj, &obj, &mut rng);
            let left = star_product(&g.compose(&f).unwrap(), &units(1)).unwrap();
            let right = star_product(&g, &units(1))
                .unwrap()
                .compose(&star_product(&f, &units(1)).unwrap())
                .unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn star_keeps_identities() {
        let cat = Arc::new(ModuleCategory::group_algebra(&cyclic_group_table(2)).unwrap());
        let obj = BracketObject::bracket(
            cat.clone(),
            RankContext::Specialized(ratio(1, 2)),
            vec![TensorWord::letter(0)],
        );
        let id = InterpMorphism::identity(&obj);
        let starred = star_product(&id, &[TensorWord::letter(0)]).unwrap();
        assert_eq!(starred, InterpMorphism::identity(starred.src()));
    }

    #[test]
    fn restriction_needs_a_matching_specialized_rank() {
        let (cat, ctx) = deligne_symbolic();
        let x = split_x(&cat, &ctx);
        assert!(matches!(
            restrict_sum(&x, &int(1), &int(1)),
            Err(Error::Argument(_))
        ));
        let at3 = one_bracket(&cat, &RankContext::Specialized(int(3)), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = random_morphism(&at3, &at3, &mut rng);
        assert!(matches!(
            restrict_sum(&f, &int(1), &int(1)),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn restricted_identity_is_blockwise_diagonal() {
        let (cat, _) = deligne_symbolic();
        let t1 = ratio(1, 2);
        let t2 = int(3);
        let obj = one_bracket(&cat, &RankContext::Specialized(ratio(7, 2)), 2);
        let id = InterpMorphism::identity(&obj);
        let split = restrict_sum(&id, &t1, &t2).unwrap();
        assert_eq!(split.entries().len(), 4);
        for subset in [vec![], vec![0], vec![1], vec![0, 1]] {
            let id1 = InterpMorphism::identity(&one_bracket(
                &cat,
                &RankContext::Specialized(t1.clone()),
                subset.len(),
            ));
            let id2 = InterpMorphism::identity(&one_bracket(
                &cat,
                &RankContext::Specialized(t2.clone()),
                2 - subset.len(),
            ));
            let c1 = canonical_coordinates(&id1).unwrap();
            let c2 = canonical_coordinates(&id2).unwrap();
            let expected = Mat::from_fn(c1.len(), c2.len(), |i, j| &c1[i] * &c2[j]);
            assert_eq!(split.entry(&subset, &subset), Some(&expected));
        }
    }

    #[test]
    fn gluing_across_the_divide_contributes_nowhere() {
        let (cat, _) = deligne_symbolic();
        let obj = one_bracket(&cat, &RankContext::Specialized(int(4)), 1);
        let id = InterpMorphism::identity(&obj);
        let split = restrict_sum(&id, &int(1), &int(3)).unwrap();
        assert!(split.entry(&[0], &[]).is_none());
        assert!(split.entry(&[], &[0]).is_none());
    }

    #[test]
    fn restriction_is_a_functor() {
        let (cat, _) = deligne_symbolic();
        let obj = one_bracket(&cat, &RankContext::Specialized(ratio(7, 2)), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..2 {
            let f = random_morphism(&obj, &obj, &mut rng);
            let g = random_morphism(&obj, &obj, &mut rng);
            let left = restrict_sum(&g.compose(&f).unwrap(), &ratio(1, 2), &int(3)).unwrap();
            let right = restrict_sum(&g, &ratio(1, 2), &int(3))
                .unwrap()
                .compose(&restrict_sum(&f, &ratio(1, 2), &int(3)).unwrap())
                .unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn identity_functor_changes_nothing() {
        let cat = Arc::new(ModuleCategory::graded_lines(2).unwrap());
        let f = BaseFunctor::identity(&cat);
        let word = TensorWord::new(vec![1, 1]);
        let obj = BracketObject::bracket(cat, RankContext::Symbolic, vec![word]);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let phi = random_morphism(&obj, &obj, &mut rng);
        assert_eq!(f.apply(&phi).unwrap(), phi);
    }

    #[test]
    fn forgetting_the_grading_sends_x_to_x() {
        let src = Arc::new(ModuleCategory::graded_lines(2).unwrap());
        let (tgt, _) = deligne_symbolic();
        let images = vec![
            (TensorWord::letter(0), Mat::identity(1)),
            (TensorWord::letter(0), Mat::identity(1)),
        ];
        let f = BaseFunctor::new(src.clone(), tgt, images).unwrap();
        let word = TensorWord::new(vec![1, 1]);
        let obj = BracketObject::bracket(src, RankContext::Symbolic, vec![word]);
        let split = Recollement::from_blocks(vec![1, 1], &[vec![0], vec![1]]).unwrap();
        let x = InterpMorphism::single(
            obj.clone(),
            obj,
            split.clone(),
            vec![RankContext::Symbolic.one()],
        )
        .unwrap();
        let image = f.apply(&x).unwrap();
        assert_eq!(image.components().len(), 1);
        assert_eq!(
            image.components().get(&split).unwrap(),
            &vec![RankContext::Symbolic.one()]
        );
        assert_eq!(image.src().object_at(0).letters(), &[0, 0]);
    }

    #[test]
    fn functors_preserve_composition() {
        let src = Arc::new(ModuleCategory::graded_lines(2).unwrap());
        let (tgt, _) = deligne_symbolic();
        let images = vec![
            (TensorWord::letter(0), Mat::identity(1)),
            (TensorWord::letter(0), Mat::identity(1)),
        ];
        let f = BaseFunctor::new(src.clone(), tgt, images).unwrap();
        let word = TensorWord::new(vec![1, 1]);
        let obj = BracketObject::bracket(src, RankContext::Symbolic, vec![word]);
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..3 {
            let phi = random_morphism(&obj, &obj, &mut rng);
            let psi = random_morphism(&obj, &obj, &mut rng);
            let left = f.apply(&psi.compose(&phi).unwrap()).unwrap();
            let right = f
                .apply(&psi)
                .unwrap()
                .compose(&f.apply(&phi).unwrap())
                .unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn skew_identifications_are_rejected() {
        let cat = Arc::new(ModuleCategory::group_algebra(&cyclic_group_table(2)).unwrap());
        let skew = Mat::from_int_rows(&[&[1, 0], &[0, 2]]);
        let result = BaseFunctor::new(cat.clone(), cat, vec![(TensorWord::letter(0), skew)]);
        assert!(matches!(result, Err(Error::Validation(_))));
    }
}
