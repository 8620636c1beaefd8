//! A term language for string diagrams over the bracket generators: labeled
//! strings ⟨φ⟩, merges μ, splits Δ, the unit strings ι and ε, and crossings,
//! assembled by composition, tensor, scalars and formal sums. Terms evaluate
//! into [`InterpMorphism`]; conversely, every morphism between products of
//! singleton brackets is carved into standard-form coordinates along the
//! refinement order. An executable suite checks the nine defining relations
//! of the generators over a chosen base.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::thread;

use crate::basecat::{ModuleCategory, TensorWord};
use crate::interp::{
    self, block_words, component_dims, hom_recollements, hom_sizes, BracketObject, InterpMorphism,
};
use crate::linalg::Mat;
use crate::partitions::Recollement;
use crate::scalar::{int, RankContext, Scalar};
use crate::{Error, Result};

/// A diagram term. Leaves are the generators, inner nodes are vertical
/// composition, horizontal tensor, scalar multiples and formal sums; every
/// subterm carries its inferred source and target objects, so ill-typed
/// constructions are rejected with a diagnostic naming the offending
/// subterms. Equality of terms is semantic, through [`evaluate`]; the tree
/// itself is never compared.
#[derive(Clone)]
pub struct DiagramTerm {
    src: BracketObject,
    tgt: BracketObject,
    node: Node,
}

#[derive(Clone)]
enum Node {
    Identity,
    Gen(Mat),
    Mu(TensorWord, TensorWord),
    Delta(TensorWord, TensorWord),
    Iota,
    Eps,
    Braid(BracketObject, BracketObject),
    BraidInv(BracketObject, BracketObject),
    Compose(Box<DiagramTerm>, Box<DiagramTerm>),
    Tensor(Box<DiagramTerm>, Box<DiagramTerm>),
    Scale(Scalar, Box<DiagramTerm>),
    Sum(Vec<DiagramTerm>),
}

impl DiagramTerm {
    /// The identity string bundle on an object.
    pub fn identity(obj: &BracketObject) -> DiagramTerm {
        DiagramTerm {
            src: obj.clone(),
            tgt: obj.clone(),
            node: Node::Identity,
        }
    }

    /// A string labeled by a base morphism: ⟨φ⟩ : ⟨U⟩ → ⟨V⟩ for φ : U → V.
    pub fn gen(
        cat: &Arc<ModuleCategory>,
        context: &RankContext,
        src: &TensorWord,
        tgt: &TensorWord,
        matrix: Mat,
    ) -> Result<DiagramTerm> {
        if !cat.is_morphism(src, tgt, &matrix)? {
            return Err(Error::Argument(format!(
                "the labeling matrix is not a module morphism {} -> {}",
                cat.word_label(src),
                cat.word_label(tgt)
            )));
        }
        Ok(DiagramTerm {
            src: BracketObject::bracket(cat.clone(), context.clone(), vec![src.clone()]),
            tgt: BracketObject::bracket(cat.clone(), context.clone(), vec![tgt.clone()]),
            node: Node::Gen(matrix),
        })
    }

    /// The merge μ(U, V) : ⟨U⟩⊗⟨V⟩ → ⟨U⊗V⟩.
    pub fn mu(
        cat: &Arc<ModuleCategory>,
        context: &RankContext,
        left: &TensorWord,
        right: &TensorWord,
    ) -> DiagramTerm {
        let a = BracketObject::bracket(cat.clone(), context.clone(), vec![left.clone()]);
        let b = BracketObject::bracket(cat.clone(), context.clone(), vec![right.clone()]);
        let src = a.tensor(&b).expect("one setting");
        let tgt = BracketObject::bracket(cat.clone(), context.clone(), vec![left.concat(right)]);
        DiagramTerm {
            src,
            tgt,
            node: Node::Mu(left.clone(), right.clone()),
        }
    }

    /// The split Δ(U, V) : ⟨U⊗V⟩ → ⟨U⟩⊗⟨V⟩.
    pub fn delta(
        cat: &Arc<ModuleCategory>,
        context: &RankContext,
        left: &TensorWord,
        right: &TensorWord,
    ) -> DiagramTerm {
        let a = BracketObject::bracket(cat.clone(), context.clone(), vec![left.clone()]);
        let b = BracketObject::bracket(cat.clone(), context.clone(), vec![right.clone()]);
        let src = BracketObject::bracket(cat.clone(), context.clone(), vec![left.concat(right)]);
        let tgt = a.tensor(&b).expect("one setting");
        DiagramTerm {
            src,
            tgt,
            node: Node::Delta(left.clone(), right.clone()),
        }
    }

    /// The unit string ι : ⟨⟩ → ⟨1⟩.
    pub fn iota(cat: &Arc<ModuleCategory>, context: &RankContext) -> DiagramTerm {
        DiagramTerm {
            src: BracketObject::unit(cat.clone(), context.clone()),
            tgt: BracketObject::bracket(cat.clone(), context.clone(), vec![TensorWord::unit()]),
            node: Node::Iota,
        }
    }

    /// The counit string ε : ⟨1⟩ → ⟨⟩.
    pub fn eps(cat: &Arc<ModuleCategory>, context: &RankContext) -> DiagramTerm {
        DiagramTerm {
            src: BracketObject::bracket(cat.clone(), context.clone(), vec![TensorWord::unit()]),
            tgt: BracketObject::unit(cat.clone(), context.clone()),
            node: Node::Eps,
        }
    }

    /// The overpass crossing A⊗B → B⊗A.
    pub fn braid(a: &BracketObject, b: &BracketObject) -> Result<DiagramTerm> {
        if !a.same_setting(b) {
            return Err(Error::Argument(
                "crossing strands live over different bases or rank contexts".into(),
            ));
        }
        Ok(DiagramTerm {
            src: a.tensor(b)?,
            tgt: b.tensor(a)?,
            node: Node::Braid(a.clone(), b.clone()),
        })
    }

    /// The underpass crossing A⊗B → B⊗A.
    pub fn braid_inv(a: &BracketObject, b: &BracketObject) -> Result<DiagramTerm> {
        if !a.same_setting(b) {
            return Err(Error::Argument(
                "crossing strands live over different bases or rank contexts".into(),
            ));
        }
        Ok(DiagramTerm {
            src: a.tensor(b)?,
            tgt: b.tensor(a)?,
            node: Node::BraidInv(a.clone(), b.clone()),
        })
    }

    /// Vertical composition: `self` applied after `before`.
    pub fn compose(&self, before: &DiagramTerm) -> Result<DiagramTerm> {
        if before.tgt != self.src {
            return Err(Error::Argument(format!(
                "cannot compose {self} after {before}: target {} does not match source {}",
                before.tgt.label(),
                self.src.label()
            )));
        }
        Ok(DiagramTerm {
            src: before.src.clone(),
            tgt: self.tgt.clone(),
            node: Node::Compose(Box::new(self.clone()), Box::new(before.clone())),
        })
    }

    /// Horizontal juxtaposition: `self` on the left, `right` on the right.
    pub fn tensor(&self, right: &DiagramTerm) -> Result<DiagramTerm> {
        if !self.src.same_setting(&right.src) {
            return Err(Error::Argument(format!(
                "cannot juxtapose {self} with {right}: different bases or rank contexts"
            )));
        }
        Ok(DiagramTerm {
            src: self.src.tensor(&right.src)?,
            tgt: self.tgt.tensor(&right.tgt)?,
            node: Node::Tensor(Box::new(self.clone()), Box::new(right.clone())),
        })
    }

    /// A scalar multiple. Nested multiples are folded into one factor.
    pub fn scale(&self, s: &Scalar) -> Result<DiagramTerm> {
        if !self.context().admits(s) {
            return Err(Error::Argument(format!(
                "scalar {s} does not live in the rank context {}",
                self.context()
            )));
        }
        let (factor, inner) = match &self.node {
            Node::Scale(t, inner) => (s.mul(t), inner.as_ref().clone()),
            _ => (s.clone(), self.clone()),
        };
        Ok(DiagramTerm {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            node: Node::Scale(factor, Box::new(inner)),
        })
    }

    /// A formal sum of parallel terms. Nested sums are flattened.
    pub fn sum(terms: Vec<DiagramTerm>) -> Result<DiagramTerm> {
        let Some(first) = terms.first() else {
            return Err(Error::Argument(
                "an empty formal sum has no source and target".into(),
            ));
        };
        let (src, tgt) = (first.src.clone(), first.tgt.clone());
        let mut flat = Vec::with_capacity(terms.len());
        for t in terms {
            if t.src != src || t.tgt != tgt {
                return Err(Error::Argument(format!(
                    "cannot sum parallel terms: {t} maps {} -> {} instead of {} -> {}",
                    t.src.label(),
                    t.tgt.label(),
                    src.label(),
                    tgt.label()
                )));
            }
            match t.node {
                Node::Sum(inner) => flat.extend(inner),
                _ => flat.push(t),
            }
        }
        Ok(DiagramTerm {
            src,
            tgt,
            node: Node::Sum(flat),
        })
    }

    /// The two-term sum `self + other`.
    pub fn add(&self, other: &DiagramTerm) -> Result<DiagramTerm> {
        DiagramTerm::sum(vec![self.clone(), other.clone()])
    }

    pub fn src(&self) -> &BracketObject {
        &self.src
    }

    pub fn tgt(&self) -> &BracketObject {
        &self.tgt
    }

    pub fn context(&self) -> &RankContext {
        self.src.context()
    }

    pub fn category(&self) -> &Arc<ModuleCategory> {
        self.src.category()
    }
}

impl fmt::Display for DiagramTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cat = self.category();
        match &self.node {
            Node::Identity => write!(f, "(identity {})", self.src.label()),
            Node::Gen(_) => write!(
                f,
                "(gen {} {})",
                cat.word_label(self.src.object_at(0)),
                cat.word_label(self.tgt.object_at(0))
            ),
            Node::Mu(u, v) => write!(f, "(mu {} {})", cat.word_label(u), cat.word_label(v)),
            Node::Delta(u, v) => write!(f, "(delta {} {})", cat.word_label(u), cat.word_label(v)),
            Node::Iota => write!(f, "iota"),
            Node::Eps => write!(f, "eps"),
            Node::Braid(a, b) => write!(f, "(braid {} {})", a.label(), b.label()),
            Node::BraidInv(a, b) => write!(f, "(braid_inv {} {})", a.label(), b.label()),
            Node::Compose(after, before) => write!(f, "(compose {after} {before})"),
            Node::Tensor(l, r) => write!(f, "(tensor {l} {r})"),
            Node::Scale(s, t) => write!(f, "(scale {s} {t})"),
            Node::Sum(ts) => {
                write!(f, "(sum")?;
                for t in ts {
                    write!(f, " {t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for DiagramTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} -> {}", self, self.src.label(), self.tgt.label())
    }
}

/// Evaluates a term to the morphism it draws. Evaluation is compositional
/// and linear; the leaves land on the engine's structure morphisms, and a
/// labeled string becomes the fully merged component carrying its label's
/// hom-basis coordinates.
pub fn evaluate(term: &DiagramTerm) -> Result<InterpMorphism> {
    let cat = term.category();
    let context = term.context();
    match &term.node {
        Node::Identity => Ok(InterpMorphism::identity(&term.src)),
        Node::Gen(matrix) => {
            let u = term.src.object_at(0);
            let v = term.tgt.object_at(0);
            let coords = cat.express(u, v, matrix)?;
            let scalars = coords.into_iter().map(|c| context.constant(c)).collect();
            let merged = Recollement::from_blocks(vec![1, 1], &[vec![0, 1]])?;
            InterpMorphism::single(term.src.clone(), term.tgt.clone(), merged, scalars)
        }
        Node::Mu(u, v) => interp::mu(cat, context, u, v),
        Node::Delta(u, v) => interp::delta(cat, context, u, v),
        Node::Iota => interp::iota(cat, context),
        Node::Eps => interp::eps(cat, context),
        Node::Braid(a, b) => interp::braiding(a, b),
        // Over a cocommutative base the braiding is an involution, so the
        // underpass evaluates to the same morphism as the overpass; the two
        // leaves stay distinct so that written composites transcribe
        // faithfully.
        Node::BraidInv(a, b) => interp::braiding(a, b),
        Node::Compose(after, before) => evaluate(after)?.compose(&evaluate(before)?),
        Node::Tensor(l, r) => evaluate(l)?.tensor(&evaluate(r)?),
        Node::Scale(s, t) => evaluate(t)?.scale(s),
        Node::Sum(ts) => {
            let mut acc = InterpMorphism::zero(term.src.clone(), term.tgt.clone())?;
            for t in ts {
                acc = acc.add(&evaluate(t)?)?;
            }
            Ok(acc)
        }
    }
}

/// A chosen standard-form layout for one recollement between products of
/// singleton brackets: its blocks in a fixed order, plus reduced words (in
/// adjacent swaps) lifting the permutations that bring the source and target
/// strands into block-contiguous position. Within each block the strand
/// positions stay in increasing order; the block order itself is free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    source_count: usize,
    parts: Vec<Vec<usize>>,
    g_word: Vec<usize>,
    h_word: Vec<usize>,
}

impl Shape {
    /// A fully explicit shape; every field is validated against the
    /// recollement.
    pub fn new(
        r: &Recollement,
        source_count: usize,
        parts: Vec<Vec<usize>>,
        g_word: Vec<usize>,
        h_word: Vec<usize>,
    ) -> Result<Shape> {
        let shape = Shape {
            source_count,
            parts,
            g_word,
            h_word,
        };
        shape.check_against(r, source_count)?;
        Ok(shape)
    }

    /// A shape with a custom block order and the canonical minimal-length
    /// positive lifts for both permutations.
    pub fn with_parts(
        r: &Recollement,
        source_count: usize,
        parts: Vec<Vec<usize>>,
    ) -> Result<Shape> {
        let upper = upper_sequence(&parts, source_count);
        let lower = lower_sequence(&parts, source_count);
        Shape::new(
            r,
            source_count,
            parts,
            permutation_word(&upper),
            permutation_word(&lower),
        )
    }

    /// The default shape: blocks ordered by their minimal source position
    /// (blocks without sources trail, ordered by minimal target position),
    /// with minimal-length all-positive crossing words.
    pub fn default_for(r: &Recollement, source_count: usize) -> Result<Shape> {
        Shape::with_parts(r, source_count, r.blocks())
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// The reduced word lifting the source permutation, bottom crossing
    /// first.
    pub fn source_lift(&self) -> &[usize] {
        &self.g_word
    }

    /// The reduced word lifting the target permutation, bottom crossing
    /// first.
    pub fn target_lift(&self) -> &[usize] {
        &self.h_word
    }

    fn check_against(&self, r: &Recollement, source_count: usize) -> Result<()> {
        if r.sizes().iter().any(|&s| s != 1) {
            return Err(Error::Argument(
                "shapes are defined over recollements of singleton products".into(),
            ));
        }
        if self.source_count != source_count || source_count > r.total() {
            return Err(Error::Argument(format!(
                "the shape splits {} source strands but the hom space has {}",
                self.source_count, source_count
            )));
        }
        for part in &self.parts {
            if part.is_empty() || part.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Argument(format!(
                    "part {part:?} is not a strictly increasing nonempty list"
                )));
            }
        }
        let mut sorted_parts = self.parts.clone();
        sorted_parts.sort();
        let mut blocks = r.blocks();
        blocks.sort();
        if sorted_parts != blocks {
            return Err(Error::Argument(format!(
                "the ordered parts do not match the blocks of {r}"
            )));
        }
        let m = source_count;
        let n = r.total() - m;
        let upper = upper_sequence(&self.parts, m);
        let lower = lower_sequence(&self.parts, m);
        for (name, word, seq, count) in [
            ("source", &self.g_word, &upper, m),
            ("target", &self.h_word, &lower, n),
        ] {
            if apply_swaps(count, word)? != *seq {
                return Err(Error::Argument(format!(
                    "the {name} word does not realize the permutation required by the part order"
                )));
            }
            if word.len() != inversions(seq) {
                return Err(Error::Argument(format!("the {name} word is not reduced")));
            }
        }
        Ok(())
    }
}

/// Source positions of the parts, concatenated in part order.
fn upper_sequence(parts: &[Vec<usize>], m: usize) -> Vec<usize> {
    parts
        .iter()
        .flat_map(|p| p.iter().filter(|&&q| q < m).copied())
        .collect()
}

/// Target positions of the parts (shifted to 0-based target indices),
/// concatenated in part order.
fn lower_sequence(parts: &[Vec<usize>], m: usize) -> Vec<usize> {
    parts
        .iter()
        .flat_map(|p| p.iter().filter(|&&q| q >= m).map(|&q| q - m))
        .collect()
}

/// A minimal word in adjacent swaps turning the identity arrangement into
/// `seq`, built by bubbling each value into place left to right.
fn permutation_word(seq: &[usize]) -> Vec<usize> {
    let mut work: Vec<usize> = (0..seq.len()).collect();
    let mut word = Vec::new();
    for (slot, &value) in seq.iter().enumerate() {
        let pos = work.iter().position(|&x| x == value).expect("a permutation");
        for k in (slot..pos).rev() {
            work.swap(k, k + 1);
            word.push(k);
        }
    }
    word
}

/// Applies a swap word to the identity arrangement on `n` slots.
fn apply_swaps(n: usize, word: &[usize]) -> Result<Vec<usize>> {
    let mut work: Vec<usize> = (0..n).collect();
    for &k in word {
        if k + 1 >= n {
            return Err(Error::Argument(format!(
                "swap position {k} is out of range for {n} strands"
            )));
        }
        work.swap(k, k + 1);
    }
    Ok(work)
}

fn inversions(seq: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                count += 1;
            }
        }
    }
    count
}

/// The singleton words of a product of singleton brackets, in order.
fn singleton_words(obj: &BracketObject) -> Result<Vec<TensorWord>> {
    if obj.factor_sizes().iter().any(|&s| s != 1) {
        return Err(Error::Precondition(
            "standard forms are defined between tensor products of singleton brackets".into(),
        ));
    }
    Ok((0..obj.total_size())
        .map(|p| obj.object_at(p).clone())
        .collect())
}

fn single_bracket(cat: &Arc<ModuleCategory>, context: &RankContext, w: &TensorWord) -> BracketObject {
    BracketObject::bracket(cat.clone(), context.clone(), vec![w.clone()])
}

fn product_object(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
    words: &[TensorWord],
) -> BracketObject {
    let mut obj = BracketObject::unit(cat.clone(), context.clone());
    for w in words {
        obj = obj
            .tensor(&single_bracket(cat, context, w))
            .expect("one setting");
    }
    obj
}

/// Pads a term with identity bundles on both sides.
fn pad(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
    mid: DiagramTerm,
    before: &[TensorWord],
    after: &[TensorWord],
) -> Result<DiagramTerm> {
    let mut t = mid;
    if !before.is_empty() {
        t = DiagramTerm::identity(&product_object(cat, context, before)).tensor(&t)?;
    }
    if !after.is_empty() {
        t = t.tensor(&DiagramTerm::identity(&product_object(cat, context, after)))?;
    }
    Ok(t)
}

/// One padded crossing at slot `k` of an object list, overpass or underpass;
/// the list is updated to the crossing's output order.
fn crossing_step(objs: &mut [BracketObject], k: usize, positive: bool) -> Result<DiagramTerm> {
    let cross = if positive {
        DiagramTerm::braid(&objs[k], &objs[k + 1])?
    } else {
        DiagramTerm::braid_inv(&objs[k], &objs[k + 1])?
    };
    let mut term = cross;
    if k > 0 {
        let prefix = objs[..k]
            .iter()
            .cloned()
            .reduce(|a, b| a.tensor(&b).expect("one setting"))
            .expect("nonempty prefix");
        term = DiagramTerm::identity(&prefix).tensor(&term)?;
    }
    if k + 2 < objs.len() {
        let suffix = objs[k + 2..]
            .iter()
            .cloned()
            .reduce(|a, b| a.tensor(&b).expect("one setting"))
            .expect("nonempty suffix");
        term = term.tensor(&DiagramTerm::identity(&suffix))?;
    }
    objs.swap(k, k + 1);
    Ok(term)
}

/// Threads a swap word over an object list as a stack of padded crossings,
/// bottom first; `None` when the word is empty.
fn braid_lift(
    objs: &mut Vec<BracketObject>,
    word: &[usize],
    positive: bool,
) -> Result<Option<DiagramTerm>> {
    let mut acc: Option<DiagramTerm> = None;
    for &k in word {
        let step = crossing_step(objs, k, positive)?;
        acc = Some(match acc {
            None => step,
            Some(prev) => step.compose(&prev)?,
        });
    }
    Ok(acc)
}

/// The standard-form term of one recollement component: crossings bring each
/// block's source strands together, merges collapse them into one bracket
/// per block, the block labels act, splits fan the targets back out, and the
/// inverse crossings restore target order. `coords` are coefficients over
/// the block hom bases, flattened in canonical block order; the evaluated
/// term equals the corresponding component plus terms with strictly fewer
/// blocks.
pub fn standard_form_term(
    src: &BracketObject,
    tgt: &BracketObject,
    r: &Recollement,
    shape: &Shape,
    coords: &[Scalar],
) -> Result<DiagramTerm> {
    let cat = src.category().clone();
    let context = src.context().clone();
    let uwords = singleton_words(src)?;
    let vwords = singleton_words(tgt)?;
    let m = uwords.len();
    if r.sizes() != hom_sizes(src, tgt).as_slice() {
        return Err(Error::Argument(format!(
            "recollement factor sizes {:?} do not match the hom space",
            r.sizes()
        )));
    }
    shape.check_against(r, m)?;
    let dims = component_dims(src, tgt, r)?;
    let total: usize = dims.iter().product();
    if coords.len() != total {
        return Err(Error::Argument(format!(
            "the component at {r} needs {total} coefficients, got {}",
            coords.len()
        )));
    }
    if total == 0 {
        return Err(Error::Argument(format!(
            "the component at {r} has no basis; nothing to draw"
        )));
    }
    if r.total() == 0 {
        return DiagramTerm::identity(src).scale(&coords[0]);
    }

    // Bottom layer: positive crossings bringing the sources into part order.
    let mut src_objs: Vec<BracketObject> = uwords.iter().map(|w| single_bracket(&cat, &context, w)).collect();
    let tau_g = braid_lift(&mut src_objs, &shape.g_word, true)?;

    // Merge layer: left to right over the parts, one μ per extra source
    // strand and one ι per sourceless part.
    let mut lower_layers: Vec<DiagramTerm> = Vec::new();
    if let Some(t) = tau_g {
        lower_layers.push(t);
    }
    let permuted: Vec<TensorWord> = upper_sequence(&shape.parts, m)
        .into_iter()
        .map(|p| uwords[p].clone())
        .collect();
    let mut done: Vec<TensorWord> = Vec::new();
    let mut cursor = 0usize;
    for part in &shape.parts {
        let ups: Vec<TensorWord> = part
            .iter()
            .filter(|&&p| p < m)
            .map(|&p| uwords[p].clone())
            .collect();
        if ups.is_empty() {
            lower_layers.push(pad(
                &cat,
                &context,
                DiagramTerm::iota(&cat, &context),
                &done,
                &permuted[cursor..],
            )?);
            done.push(TensorWord::unit());
        } else {
            let mut w = ups[0].clone();
            cursor += 1;
            for next in &ups[1..] {
                lower_layers.push(pad(
                    &cat,
                    &context,
                    DiagramTerm::mu(&cat, &context, &w, next),
                    &done,
                    &permuted[cursor + 1..],
                )?);
                w = w.concat(next);
                cursor += 1;
            }
            done.push(w);
        }
    }

    // Split layer: the mirror image, one Δ per extra target strand and one ε
    // per targetless part.
    let mut upper_layers: Vec<DiagramTerm> = Vec::new();
    let block_targets: Vec<TensorWord> = shape
        .parts
        .iter()
        .map(|part| block_words(src, tgt, part).1)
        .collect();
    let mut emitted: Vec<TensorWord> = Vec::new();
    for (k, part) in shape.parts.iter().enumerate() {
        let lows: Vec<TensorWord> = part
            .iter()
            .filter(|&&p| p >= m)
            .map(|&p| vwords[p - m].clone())
            .collect();
        let tail = &block_targets[k + 1..];
        if lows.is_empty() {
            upper_layers.push(pad(
                &cat,
                &context,
                DiagramTerm::eps(&cat, &context),
                &emitted,
                tail,
            )?);
        } else {
            for j in 0..lows.len() - 1 {
                let mut before = emitted.clone();
                before.extend_from_slice(&lows[..j]);
                let tailword = lows[j + 1..]
                    .iter()
                    .fold(TensorWord::unit(), |acc, w| acc.concat(w));
                upper_layers.push(pad(
                    &cat,
                    &context,
                    DiagramTerm::delta(&cat, &context, &lows[j], &tailword),
                    &before,
                    tail,
                )?);
            }
            emitted.extend(lows);
        }
    }

    // Top layer: the inverse of the positive target lift, threaded as
    // underpasses in reverse word order.
    let mut tgt_objs: Vec<BracketObject> = lower_sequence(&shape.parts, m)
        .into_iter()
        .map(|j| single_bracket(&cat, &context, &vwords[j]))
        .collect();
    let reversed: Vec<usize> = shape.h_word.iter().rev().copied().collect();
    if let Some(t) = braid_lift(&mut tgt_objs, &reversed, false)? {
        upper_layers.push(t);
    }

    // Middle layer per basis tuple, scaled and summed.
    let block_index = interp::block_index_map(r);
    let part_slots: Vec<usize> = shape.parts.iter().map(|p| block_index[p]).collect();
    let part_homs: Vec<(TensorWord, TensorWord)> = shape
        .parts
        .iter()
        .map(|part| block_words(src, tgt, part))
        .collect();
    let build = |alpha: &[usize]| -> Result<DiagramTerm> {
        let mut middle: Option<DiagramTerm> = None;
        for (k, (uw, vw)) in part_homs.iter().enumerate() {
            let basis = cat.hom_basis(uw, vw)?;
            let label =
                DiagramTerm::gen(&cat, &context, uw, vw, basis[alpha[part_slots[k]]].clone())?;
            middle = Some(match middle {
                None => label,
                Some(prev) => prev.tensor(&label)?,
            });
        }
        let mut term = middle.expect("at least one part");
        for layer in lower_layers.iter().rev() {
            term = term.compose(layer)?;
        }
        for layer in &upper_layers {
            term = layer.compose(&term)?;
        }
        Ok(term)
    };

    let tuples = interp::index_tuples(&dims);
    let mut summands = Vec::new();
    for (flat, alpha) in tuples.iter().enumerate() {
        if coords[flat].is_zero() {
            continue;
        }
        let term = build(alpha)?;
        summands.push(if coords[flat] == context.one() {
            term
        } else {
            term.scale(&coords[flat])?
        });
    }
    if summands.is_empty() {
        return build(&tuples[0])?.scale(&context.zero());
    }
    if summands.len() == 1 {
        Ok(summands.pop().expect("one summand"))
    } else {
        DiagramTerm::sum(summands)
    }
}

/// The default shape for every recollement of the hom space, keyed by
/// recollement.
pub fn default_shapes(
    src: &BracketObject,
    tgt: &BracketObject,
) -> Result<BTreeMap<Recollement, Shape>> {
    let m = singleton_words(src)?.len();
    singleton_words(tgt)?;
    let mut out = BTreeMap::new();
    for r in hom_recollements(src, tgt)? {
        let shape = Shape::default_for(&r, m)?;
        out.insert(r, shape);
    }
    Ok(out)
}

/// Coordinates of a morphism over the standard-form basis determined by
/// `shapes`, one coefficient vector per recollement (zero vectors included).
///
/// The extraction walks the recollements from most blocks to fewest: the
/// residual's component at each level is the standard coefficient vector
/// verbatim, because a standard-form term contributes its label at its own
/// recollement and otherwise only terms with strictly fewer blocks. Each
/// extracted layer is re-evaluated and subtracted, and the walk checks that
/// it actually cleared its level, so a discrepancy between the two routes
/// surfaces as an error instead of a wrong answer.
pub fn standard_coordinates(
    f: &InterpMorphism,
    shapes: &BTreeMap<Recollement, Shape>,
) -> Result<BTreeMap<Recollement, Vec<Scalar>>> {
    singleton_words(f.src())?;
    singleton_words(f.tgt())?;
    let context = f.context().clone();
    let mut recs = hom_recollements(f.src(), f.tgt())?;
    for r in &recs {
        if !shapes.contains_key(r) {
            return Err(Error::Argument(format!("no shape supplied for {r}")));
        }
    }
    recs.sort_by(|a, b| {
        b.block_count()
            .cmp(&a.block_count())
            .then_with(|| a.cmp(b))
    });
    let mut residual = f.clone();
    let mut out = BTreeMap::new();
    for r in recs {
        let dims = component_dims(f.src(), f.tgt(), &r)?;
        let total: usize = dims.iter().product();
        let coords = residual
            .components()
            .get(&r)
            .cloned()
            .unwrap_or_else(|| vec![context.zero(); total]);
        if coords.iter().any(|c| !c.is_zero()) {
            let term = standard_form_term(f.src(), f.tgt(), &r, &shapes[&r], &coords)?;
            residual = residual.sub(&evaluate(&term)?)?;
            if residual.components().contains_key(&r) {
                return Err(Error::Validation(format!(
                    "standard-form extraction left a remainder at {r}"
                )));
            }
        }
        out.insert(r, coords);
    }
    if !residual.is_zero() {
        return Err(Error::Validation(
            "standard-form extraction finished with a nonzero remainder".into(),
        ));
    }
    Ok(out)
}

/// One line of the relation report: how many instances were evaluated and
/// how many came out unequal. A skipped check records zero instances and the
/// reason.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub name: &'static str,
    pub instances: usize,
    pub failures: usize,
    pub note: Option<String>,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn skipped(name: &'static str, reason: &str) -> RelationCheck {
        RelationCheck {
            name,
            instances: 0,
            failures: 0,
            note: Some(reason.to_string()),
        }
    }
}

/// The outcome of the generator-relation suite over one base and rank
/// context, one entry per relation in the canonical order.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
    dimension: Scalar,
}

impl RelationReport {
    /// True when no evaluated instance differed; skipped checks do not
    /// count against the suite.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.checks.iter().enumerate() {
            if c.instances == 0 && c.note.is_some() {
                writeln!(
                    f,
                    "({}) {}: skipped ({})",
                    i + 1,
                    c.name,
                    c.note.as_deref().unwrap_or("")
                )?;
                continue;
            }
            write!(f, "({}) {}: {} instances, ", i + 1, c.name, c.instances)?;
            if c.failures == 0 {
                write!(f, "all equal")?;
            } else {
                write!(f, "{} differ", c.failures)?;
            }
            match &c.note {
                Some(note) => writeln!(f, " ({note})")?,
                None => writeln!(f)?,
            }
        }
        if self.passed() {
            let quadratic = self
                .checks
                .get(7)
                .map(|c| c.instances > 0)
                .unwrap_or(false);
            write!(
                f,
                "every checked relation holds; the bracket embedding is separable{}, of dimension {}",
                if quadratic { " and quadratic" } else { "" },
                self.dimension
            )
        } else {
            let bad = self.checks.iter().filter(|c| c.failures > 0).count();
            write!(f, "{bad} relation check(s) have unequal instances")
        }
    }
}

/// Words of length at most two over the base's generating objects.
fn words_up_to_two(cat: &ModuleCategory) -> Vec<TensorWord> {
    let g = cat.generator_count();
    let mut out = vec![TensorWord::unit()];
    for a in 0..g {
        out.push(TensorWord::letter(a));
    }
    for a in 0..g {
        for b in 0..g {
            out.push(TensorWord::new(vec![a, b]));
        }
    }
    out
}

struct Tally {
    instances: usize,
    failures: usize,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            instances: 0,
            failures: 0,
        }
    }

    fn check(&mut self, lhs: &InterpMorphism, rhs: &InterpMorphism) {
        self.instances += 1;
        if lhs != rhs {
            self.failures += 1;
        }
    }

    fn into_check(self, name: &'static str, note: Option<String>) -> RelationCheck {
        RelationCheck {
            name,
            instances: self.instances,
            failures: self.failures,
            note,
        }
    }
}

type RelationJob =
    fn(&Arc<ModuleCategory>, &RankContext, &[TensorWord]) -> Result<RelationCheck>;

/// Evaluates both sides of the nine defining relations of the bracket
/// generators on every instance drawn from words of length at most two,
/// with labels running over whole hom bases. Exact equality is required.
/// The checks run in parallel, one worker per relation, and the report
/// order is fixed. Over a base whose braiding is unavailable the two
/// crossing relations are skipped and noted, not failed.
pub fn relation_suite(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
) -> Result<RelationReport> {
    let words = words_up_to_two(cat);
    let jobs: Vec<RelationJob> = vec![
        rel_functoriality,
        rel_naturality,
        rel_associativity,
        rel_unitality,
        rel_braid_compatibility,
        rel_frobenius,
        rel_separability,
        rel_quadratic,
        rel_loop_value,
    ];
    let mut results: Vec<Result<RelationCheck>> = Vec::with_capacity(jobs.len());
    thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|job| s.spawn(|| job(cat, context, &words)))
            .collect();
        for h in handles {
            results.push(h.join().expect("relation worker panicked"));
        }
    });
    let checks = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(RelationReport {
        checks,
        dimension: context.rank(),
    })
}

fn rel_functoriality(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
    words: &[TensorWord],
) -> Result<RelationCheck> {
    let name = "the bracket is a linear functor";
    let mut tally = Tally::new();
    for u in words {
        let id = DiagramTerm::gen(cat, context, u, u, Mat::identity(cat.word_dim(u)))?;
        tally.check(
            &evaluate(&id)?,
            &InterpMorphism::identity(&single_bracket(cat, context, u)),
        );
    }
    for u in words {
        for v in words {
            for w in words {
                let fs = cat.hom_basis(u, v)?;
                let gs = cat.hom_basis(v, w)?;
                for fm in fs.iter() {
                    for gm in gs.iter() {
                        let lhs = DiagramTerm::gen(cat, context, u, w, gm.matmul(fm))?;
                        let rhs = DiagramTerm::gen(cat, context, v, w, gm.clone())?
                            .compose(&DiagramTerm::gen(cat, context, u, v, fm.clone())?)?;
                        tally.check(&evaluate(&lhs)?, &evaluate(&rhs)?);
                    }
                }
            }
        }
    }
    for u in words {
        for v in words {
            let basis = cat.hom_basis(u, v)?;
            if basis.is_empty() {
                continue;
            }
            let fm = &basis[0];
            let gm = basis.last().expect("nonempty basis");
            let combo = fm.scale(&int(2)).add(&gm.scale(&int(-3)));
            let lhs = DiagramTerm::gen(cat, context, u, v, combo)?;
            let rhs = DiagramTerm::gen(cat, context, u, v, fm.clone())?
                .scale(&context.constant(int(2)))?
                .add(
                    &DiagramTerm::gen(cat, context, u, v, gm.clone())?
                        .scale(&context.constant(int(-3)))?,
                )?;
            tally.check(&evaluate(&lhs)?, &evaluate(&rhs)?);
        }
    }
    Ok(tally.into_check(name, None))
}

fn rel_naturality(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
    words: &[TensorWord],
) -> Result<RelationCheck> {
    let name = "mu and delta are natural";
    let mut tally = Tally::new();
    for u in words {
        for v in words {
            let fs = cat.hom_basis(u, v)?;
            if fs.is_empty() {
                continue;
            }
            for u2 in words {
                for v2 in words {
                    let gs = cat.hom_basis(u2, v2)?;
                    for fm in fs.iter() {
                        for gm in gs.iter() {
                            let pair = DiagramTerm::gen(cat, context, u, v, fm.clone())?
                                .tensor(&DiagramTerm::gen(cat, context, u2, v2, gm.clone())?)?;
                            let both = DiagramTerm::gen(
                                cat,
                                context,
                                &u.concat(u2),
                                &v.concat(v2),
                                cat.tensor_on_morphisms(fm, gm),
                            )?;
                            let lhs = DiagramTerm::mu(cat, context, v, v2).compose(&pair)?;
                            let rhs = both.compose(&DiagramTerm::mu(cat, context, u, u2))?;
                            tally.check(&evaluate(&lhs)?, &evaluate(&rhs)?);
                            let lhs = pair.compose(&DiagramTerm::delta(cat, context, u, u2))?;
                            let rhs = DiagramTerm::delta(cat, context, v, v2).compose(&both)?;
                            tally.check(&evaluate(&lhs)?, &evaluate(&rhs)?);
                        }
                    }
                }
            }
        }
    }
    Ok(tally.into_check(name, None))
}

fn rel_associativity(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
    words: &[TensorWord],
) -> Result<RelationCheck> {
    let name = "merges associate, splits coassociate";
    let mut tally = Tally::new();
    for u in words {
        for v in words {
            for w in words {
                let uv = u.concat(v);
                let vw = v.concat(w);
                let idu = DiagramTerm::identity(&single_bracket(cat, context, u));
                let idw = DiagramTerm::identity(&single_bracket(cat, context, w));
                let lhs = DiagramTerm::mu(cat, context, &uv, w)
                    .compose(&DiagramTerm::mu(cat, context, u, v).tensor(&idw)?)?;
                let rhs = DiagramTerm::mu(cat, context, u, &vw)
                    .compose(&idu.tensor(&DiagramTerm::mu(cat, context, v, w))?)?;
                tally.check(&evaluate(&lhs)?, &evaluate(&rhs)?);
                let lhs = DiagramTerm::delta(cat, context, u, v)
                    .tensor(&idw)?
                    .compose(&DiagramTerm::delta(cat, context, &uv, w))?;
                let rhs = idu
                    .tensor(&DiagramTerm::delta(cat, context, v, w))?
                    .compose(&DiagramTerm::delta(cat, context, u, &vw))?;
                tally.check(&evaluate(&lhs)?, &evaluate(&rhs)?);
            }
        }
    }
    Ok(tally.into_check(name, None))
}

fn rel_unitality(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
    words: &[TensorWord],
) -> Result<RelationCheck> {
    let name = "iota is a unit, eps a counit";
    let mut tally = Tally::new();
    let unit = TensorWord::unit();
    for u in words {
        let obj = single_bracket(cat, context, u);
        let id = InterpMorphism::identity(&obj);
        let idu = DiagramTerm::identity(&obj);
        let iota = DiagramTerm::iota(cat, context);
        let eps = DiagramTerm::eps(cat, context);
        let left = DiagramTerm::mu(cat, context, &unit, u).compose(&iota.tensor(&idu)?)?;
        tally.check(&evaluate(&left)?, &id);
        let right = DiagramTerm::mu(cat, context, u, &unit).compose(&idu.tensor(&iota)?)?;
        tally.check(&evaluate(&right)?, &id);
        let left = eps
            .tensor(&idu)?
            .compose(&DiagramTerm::delta(cat, context, &unit, u))?;
        tally.check(&evaluate(&left)?, &id);
        let right = idu
            .tensor(&eps)?
            .compose(&DiagramTerm::delta(cat, context, u, &unit))?;
        tally.check(&evaluate(&right)?, &id);
    }
    Ok(tally.into_check(name, None))
}

fn rel_braid_compatibility(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
    words: &[TensorWord],
) -> Result<RelationCheck> {
    let name = "crossings slide through mu and delta";
    if !cat.is_cocommutative() {
        return Ok(RelationCheck::skipped(
            name,
            "the base bialgebra is not cocommutative, so the brackets have no crossing",
        ));
    }
    let mut tally = Tally::new();
    for u in words {
        for v in words {
            let a = single_bracket(cat, context, u);
            let b = single_bracket(cat, context, v);
            let flip = DiagramTerm::gen(
                cat,
                context,
                &u.concat(v),
                &v.concat(u),
                cat.flip_braiding(u, v)?,
            )?;
            let lhs = DiagramTerm::mu(cat, context, v, u).compose(&DiagramTerm::braid(&a, &b)?)?;
            let rhs = flip.compose(&DiagramTerm::mu(cat, context, u, v))?;
            tally.check(&evaluate(&lhs)?, &evaluate(&rhs)?);
            let lhs =
                DiagramTerm::braid(&a, &b)?.compose(&DiagramTerm::delta(cat, context, u, v))?;
            let rhs = DiagramTerm::delta(cat, context, v, u).compose(&flip)?;
            tally.check(&evaluate(&lhs)?, &evaluate(&rhs)?);
        }
    }
    Ok(tally.into_check(name, None))
}

fn rel_frobenius(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
    words: &[TensorWord],
) -> Result<RelationCheck> {
    let name = "merge then split exchanges with split then merge";
    let mut tally = Tally::new();
    for u in words {
        for v in words {
            for w in words {
                let uv = u.concat(v);
                let vw = v.concat(w);
                let idu = DiagramTerm::identity(&single_bracket(cat, context, u));
                let idw = DiagramTerm::identity(&single_bracket(cat, context, w));
                let lhs = DiagramTerm::delta(cat, context, &uv, w)
                    .compose(&DiagramTerm::mu(cat, context, u, &vw))?;
                let rhs = DiagramTerm::mu(cat, context, u, v)
                    .tensor(&idw)?
                    .compose(&idu.tensor(&DiagramTerm::delta(cat, context, v, w))?)?;
                tally.check(&evaluate(&lhs)?, &evaluate(&rhs)?);
                let lhs = DiagramTerm::delta(cat, context, u, &vw)
                    .compose(&DiagramTerm::mu(cat, context, &uv, w))?;
                let rhs = idu
                    .tensor(&DiagramTerm::mu(cat, context, v, w))?
                    .compose(&DiagramTerm::delta(cat, context, u, v).tensor(&idw)?)?;
                tally.check(&evaluate(&lhs)?, &evaluate(&rhs)?);
            }
        }
    }
    Ok(tally.into_check(name, None))
}

fn rel_separability(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
    words: &[TensorWord],
) -> Result<RelationCheck> {
    let name = "mu retracts delta";
    let mut tally = Tally::new();
    for u in words {
        for v in words {
            let composite = DiagramTerm::mu(cat, context, u, v)
                .compose(&DiagramTerm::delta(cat, context, u, v))?;
            let id = InterpMorphism::identity(&single_bracket(cat, context, &u.concat(v)));
            tally.check(&evaluate(&composite)?, &id);
        }
    }
    Ok(tally.into_check(name, None))
}

fn rel_quadratic(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
    words: &[TensorWord],
) -> Result<RelationCheck> {
    let name = "the crossing difference factors through the merged bracket";
    if !cat.is_cocommutative() {
        return Ok(RelationCheck::skipped(
            name,
            "the base bialgebra is not cocommutative, so the brackets have no crossing",
        ));
    }
    let mut tally = Tally::new();
    let minus_one = context.constant(int(-1));
    for u in words {
        for v in words {
            let a = single_bracket(cat, context, u);
            let b = single_bracket(cat, context, v);
            let lhs = DiagramTerm::braid(&a, &b)?
                .add(&DiagramTerm::braid_inv(&a, &b)?.scale(&minus_one)?)?;
            let sigma = cat.flip_braiding(u, v)?;
            let sigma_inv = cat
                .flip_braiding(v, u)?
                .inverse()
                .expect("base braidings are invertible");
            let middle = DiagramTerm::gen(
                cat,
                context,
                &u.concat(v),
                &v.concat(u),
                sigma.sub(&sigma_inv),
            )?;
            let rhs = DiagramTerm::delta(cat, context, v, u)
                .compose(&middle)?
                .compose(&DiagramTerm::mu(cat, context, u, v))?;
            tally.check(&evaluate(&lhs)?, &evaluate(&rhs)?);
        }
    }
    Ok(tally.into_check(name, None))
}

fn rel_loop_value(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
    _words: &[TensorWord],
) -> Result<RelationCheck> {
    let name = "the closed unit loop equals the rank";
    let mut tally = Tally::new();
    let composite = DiagramTerm::eps(cat, context).compose(&DiagramTerm::iota(cat, context))?;
    let got = evaluate(&composite)?;
    let unit = BracketObject::unit(cat.clone(), context.clone());
    let expected = InterpMorphism::identity(&unit).scale(&context.rank())?;
    tally.check(&got, &expected);
    let value = got
        .components()
        .values()
        .next()
        .map(|v| format!("{}", v[0]))
        .unwrap_or_else(|| "0".to_string());
    Ok(tally.into_check(name, Some(format!("loop value {value}"))))
}
