//! The interpolation-category morphism engine.
//!
//! Objects are formal tensor products of brackets ⟨U_I⟩, each bracket holding
//! an ordered family of base objects. A morphism is stored as a sparse map
//! from recollements of the combined source and target families to
//! coefficient vectors over the frozen base hom bases; composition sums over
//! gluing fibers with falling-factorial rank coefficients, and middle-only
//! blocks contract to scalars through End(1) ≅ ℚ.

mod braid;
mod double;
mod transport;

pub use braid::{braiding, delta, eps, iota, mu};
pub use double::{
    compose_double_bracket, filtration_span, from_double_bracket, to_double_bracket,
    DoubleBracketMorphism,
};
pub use transport::{
    apply_functor, restrict_sum, star_product, star_product_object, BaseFunctor, SplitHom,
};
pub(crate) use transport::canonical_coordinates;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::basecat::{ModuleCategory, TensorWord};
use crate::partitions::{
    enumerate_compose_fibers_general, enumerate_merge_fibers, enumerate_recollements,
    Recollement,
};
use crate::scalar::{RankContext, Rational, Scalar};
use crate::{Error, Result};

/// A formal tensor product of brackets over a base category, at a fixed rank
/// context. Each factor is one bracket's ordered family of base objects; the
/// empty product is the unit, and a bracket with an empty family collapses to
/// the unit, so tensoring with the unit is the identity on the nose.
#[derive(Clone)]
pub struct BracketObject {
    cat: Arc<ModuleCategory>,
    context: RankContext,
    factors: Vec<Vec<TensorWord>>,
}

impl BracketObject {
    pub fn unit(cat: Arc<ModuleCategory>, context: RankContext) -> Self {
        BracketObject {
            cat,
            context,
            factors: Vec::new(),
        }
    }

    /// A single bracket ⟨U_I⟩; an empty family gives the unit object.
    pub fn bracket(cat: Arc<ModuleCategory>, context: RankContext, family: Vec<TensorWord>) -> Self {
        let factors = if family.is_empty() {
            Vec::new()
        } else {
            vec![family]
        };
        BracketObject {
            cat,
            context,
            factors,
        }
    }

    pub fn from_factors(
        cat: Arc<ModuleCategory>,
        context: RankContext,
        factors: Vec<Vec<TensorWord>>,
    ) -> Self {
        BracketObject {
            cat,
            context,
            factors: factors.into_iter().filter(|f| !f.is_empty()).collect(),
        }
    }

    pub fn category(&self) -> &Arc<ModuleCategory> {
        &self.cat
    }

    pub fn context(&self) -> &RankContext {
        &self.context
    }

    pub fn factors(&self) -> &[Vec<TensorWord>] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn factor_sizes(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.len()).collect()
    }

    pub fn total_size(&self) -> usize {
        self.factors.iter().map(|f| f.len()).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// The base object at a position in the concatenation of all factors.
    pub fn object_at(&self, pos: usize) -> &TensorWord {
        let mut rest = pos;
        for f in &self.factors {
            if rest < f.len() {
                return &f[rest];
            }
            rest -= f.len();
        }
        panic!("position {pos} out of range");
    }

    pub fn same_setting(&self, other: &BracketObject) -> bool {
        Arc::ptr_eq(&self.cat, &other.cat) && self.context == other.context
    }

    pub fn tensor(&self, other: &BracketObject) -> Result<BracketObject> {
        if !self.same_setting(other) {
            return Err(Error::Argument(
                "tensor factors live over different bases or rank contexts".into(),
            ));
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(BracketObject {
            cat: self.cat.clone(),
            context: self.context.clone(),
            factors,
        })
    }

    /// Splits off the first factor: (⟨first family⟩, rest of the product).
    pub fn split_first_factor(&self) -> Option<(BracketObject, BracketObject)> {
        let (first, rest) = self.factors.split_first()?;
        Some((
            BracketObject {
                cat: self.cat.clone(),
                context: self.context.clone(),
                factors: vec![first.clone()],
            },
            BracketObject {
                cat: self.cat.clone(),
                context: self.context.clone(),
                factors: rest.to_vec(),
            },
        ))
    }

    pub fn label(&self) -> String {
        if self.is_unit() {
            return "<>".into();
        }
        self.factors
            .iter()
            .map(|f| {
                let inner = f
                    .iter()
                    .map(|w| self.cat.word_label(w))
                    .collect::<Vec<_>>()
                    .join(", ");
                format!("<{inner}>")
            })
            .collect::<Vec<_>>()
            .join(" * ")
    }
}

impl PartialEq for BracketObject {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.cat, &other.cat)
            && self.context == other.context
            && self.factors == other.factors
    }
}

impl Eq for BracketObject {}

impl fmt::Debug for BracketObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BracketObject({} @ {})", self.label(), self.context)
    }
}

/// The factor sizes of the hom recollements between two objects: source
/// factors first, then target factors.
pub fn hom_sizes(src: &BracketObject, tgt: &BracketObject) -> Vec<usize> {
    let mut sizes = src.factor_sizes();
    sizes.extend(tgt.factor_sizes());
    sizes
}

/// The (source word, target word) of one block of a hom recollement: source
/// positions index into src's families, target positions into tgt's.
pub fn block_words(
    src: &BracketObject,
    tgt: &BracketObject,
    block: &[usize],
) -> (TensorWord, TensorWord) {
    let n_src = src.total_size();
    let mut src_word = TensorWord::unit();
    let mut tgt_word = TensorWord::unit();
    for &p in block {
        if p < n_src {
            src_word = src_word.concat(src.object_at(p));
        } else {
            tgt_word = tgt_word.concat(tgt.object_at(p - n_src));
        }
    }
    (src_word, tgt_word)
}

/// Per-block hom dimensions of one recollement summand, in canonical block
/// order.
pub fn component_dims(
    src: &BracketObject,
    tgt: &BracketObject,
    r: &Recollement,
) -> Result<Vec<usize>> {
    let cat = src.category();
    r.blocks()
        .iter()
        .map(|b| {
            let (sw, tw) = block_words(src, tgt, b);
            cat.hom_dim(&sw, &tw)
        })
        .collect()
}

/// All recollements indexing the hom-space decomposition between two objects.
pub fn hom_recollements(src: &BracketObject, tgt: &BracketObject) -> Result<Vec<Recollement>> {
    enumerate_recollements(&hom_sizes(src, tgt))
}

/// dim Hom(src, tgt) = Σ_r ∏ per-block base hom dimensions.
pub fn hom_dim(src: &BracketObject, tgt: &BracketObject) -> Result<usize> {
    let mut total = 0;
    for r in hom_recollements(src, tgt)? {
        total += component_dims(src, tgt, &r)?
            .iter()
            .product::<usize>();
    }
    Ok(total)
}

/// The canonical basis of Hom(src, tgt): every (recollement, basis index)
/// pair as a single-component morphism, in enumeration order.
pub fn hom_basis_morphisms(
    src: &BracketObject,
    tgt: &BracketObject,
) -> Result<Vec<InterpMorphism>> {
    let context = src.context();
    let mut out = Vec::new();
    for r in hom_recollements(src, tgt)? {
        let dims = component_dims(src, tgt, &r)?;
        let dim: usize = dims.iter().product();
        for k in 0..dim {
            let mut coeffs = vec![context.zero(); dim];
            coeffs[k] = context.one();
            out.push(InterpMorphism::single(
                src.clone(),
                tgt.clone(),
                r.clone(),
                coeffs,
            )?);
        }
    }
    Ok(out)
}

/// All index tuples over the given dimensions, in row-major order (last index
/// fastest); a single empty tuple when there are no dimensions.
pub(crate) fn index_tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &d in dims {
        let mut next = Vec::with_capacity(out.len() * d);
        for tuple in &out {
            for k in 0..d {
                let mut t = tuple.clone();
                t.push(k);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// A morphism of the interpolation category: sparse recollement components
/// with coefficients in the rank context, over the frozen base hom bases.
/// Zero coefficient vectors are pruned on construction, so structural
/// equality is mathematical equality.
#[derive(Clone, PartialEq, Eq)]
pub struct InterpMorphism {
    src: BracketObject,
    tgt: BracketObject,
    components: BTreeMap<Recollement, Vec<Scalar>>,
}

impl InterpMorphism {
    pub fn zero(src: BracketObject, tgt: BracketObject) -> Result<Self> {
        if !src.same_setting(&tgt) {
            return Err(Error::Argument(
                "source and target live over different bases or rank contexts".into(),
            ));
        }
        Ok(InterpMorphism {
            src,
            tgt,
            components: BTreeMap::new(),
        })
    }

    pub fn from_components(
        src: BracketObject,
        tgt: BracketObject,
        components: BTreeMap<Recollement, Vec<Scalar>>,
    ) -> Result<Self> {
        let mut m = InterpMorphism::zero(src, tgt)?;
        let sizes = hom_sizes(&m.src, &m.tgt);
        for (r, coeffs) in components {
            if r.sizes() != sizes.as_slice() {
                return Err(Error::Argument(format!(
                    "recollement factor sizes {:?} do not match the hom space {:?}",
                    r.sizes(),
                    sizes
                )));
            }
            let dim: usize = component_dims(&m.src, &m.tgt, &r)?.iter().product();
            if coeffs.len() != dim {
                return Err(Error::Argument(format!(
                    "component at {r} needs {dim} coefficients, got {}",
                    coeffs.len()
                )));
            }
            if let Some(bad) = coeffs.iter().find(|c| !m.src.context().admits(c)) {
                return Err(Error::Argument(format!(
                    "coefficient {bad:?} does not live in the rank context {}",
                    m.src.context()
                )));
            }
            if coeffs.iter().any(|c| !c.is_zero()) {
                m.components.insert(r, coeffs);
            }
        }
        Ok(m)
    }

    pub fn single(
        src: BracketObject,
        tgt: BracketObject,
        r: Recollement,
        coeffs: Vec<Scalar>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        map.insert(r, coeffs);
        InterpMorphism::from_components(src, tgt, map)
    }

    pub fn src(&self) -> &BracketObject {
        &self.src
    }

    pub fn tgt(&self) -> &BracketObject {
        &self.tgt
    }

    pub fn components(&self) -> &BTreeMap<Recollement, Vec<Scalar>> {
        &self.components
    }

    pub fn context(&self) -> &RankContext {
        self.src.context()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &InterpMorphism) -> Result<InterpMorphism> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(Error::Argument("cannot add morphisms between different objects".into()));
        }
        let mut components = self.components.clone();
        for (r, v) in &other.components {
            match components.get_mut(r) {
                Some(cur) => {
                    for (a, b) in cur.iter_mut().zip(v) {
                        *a = a.add(b);
                    }
                }
                None => {
                    components.insert(r.clone(), v.clone());
                }
            }
        }
        components.retain(|_, v| v.iter().any(|c| !c.is_zero()));
        Ok(InterpMorphism {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            components,
        })
    }

    pub fn neg(&self) -> InterpMorphism {
        let components = self
            .components
            .iter()
            .map(|(r, v)| (r.clone(), v.iter().map(|c| c.neg()).collect()))
            .collect();
        InterpMorphism {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            components,
        }
    }

    pub fn sub(&self, other: &InterpMorphism) -> Result<InterpMorphism> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Result<InterpMorphism> {
        if !self.context().admits(s) {
            return Err(Error::Argument(
                "scaling factor does not live in the rank context".into(),
            ));
        }
        let mut components = BTreeMap::new();
        if !s.is_zero() {
            for (r, v) in &self.components {
                let scaled: Vec<Scalar> = v.iter().map(|c| c.mul(s)).collect();
                if scaled.iter().any(|c| !c.is_zero()) {
                    components.insert(r.clone(), scaled);
                }
            }
        }
        Ok(InterpMorphism {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            components,
        })
    }

    pub fn scale_rational(&self, c: &Rational) -> InterpMorphism {
        self.scale(&self.context().constant(c.clone()))
            .expect("a constant always lives in the context")
    }

    /// The identity morphism: per factor, one component pairing each family
    /// entry with its copy; factors are then tensored together, which spreads
    /// the identity over all block-gluing recollements of the factors.
    pub fn identity(obj: &BracketObject) -> InterpMorphism {
        let unit_obj = BracketObject::unit(obj.cat.clone(), obj.context.clone());
        let empty = Recollement::finest(Vec::new());
        let mut acc = InterpMorphism::single(
            unit_obj.clone(),
            unit_obj,
            empty,
            vec![obj.context.one()],
        )
        .expect("unit identity is well formed");
        for family in &obj.factors {
            let single = BracketObject {
                cat: obj.cat.clone(),
                context: obj.context.clone(),
                factors: vec![family.clone()],
            };
            acc = acc
                .tensor(&Self::single_factor_identity(&single))
                .expect("identity factors share one setting");
        }
        acc
    }

    fn single_factor_identity(obj: &BracketObject) -> InterpMorphism {
        let n = obj.total_size();
        let r = Recollement::matched_pairs(n);
        let cat = obj.category();
        let mut coeffs = vec![crate::scalar::int(1)];
        for k in 0..n {
            let word = obj.object_at(k);
            let id_coords = cat
                .identity_coords(word)
                .expect("identity coordinates exist for every word");
            let mut next = Vec::with_capacity(coeffs.len() * id_coords.len());
            for c in &coeffs {
                for d in &id_coords {
                    next.push(c * d);
                }
            }
            coeffs = next;
        }
        let scalars = coeffs
            .into_iter()
            .map(|c| obj.context.constant(c))
            .collect();
        InterpMorphism::single(obj.clone(), obj.clone(), r, scalars)
            .expect("identity component is well formed")
    }

    /// self ∘ other: apply `other` first. Sums over all gluing fibers of each
    /// component pair, with the falling-factorial coefficient in the rank
    /// variable and middle-only blocks contracted to scalars.
    pub fn compose(&self, other: &InterpMorphism) -> Result<InterpMorphism> {
        let (phi, psi) = (other, self);
        if !phi.src.same_setting(&psi.src) {
            return Err(Error::Argument(
                "composition requires one base and one rank context".into(),
            ));
        }
        if phi.tgt != psi.src {
            return Err(Error::Argument(format!(
                "composition mismatch: {} does not equal {}",
                phi.tgt.label(),
                psi.src.label()
            )));
        }
        let middle = phi.tgt.factor_count();
        let context = phi.context().clone();
        let mut out = InterpMorphism::zero(phi.src.clone(), psi.tgt.clone())?;
        for (r, v_phi) in &phi.components {
            for (s, v_psi) in &psi.components {
                for u in enumerate_compose_fibers_general(r, s, middle)? {
                    let (result_r, vec) =
                        contract_fiber(&phi.src, &phi.tgt, &psi.tgt, r, s, &u, v_phi, v_psi)?;
                    let coeff = context.falling(result_r.block_count(), u.block_count())?;
                    accumulate(
                        &mut out.components,
                        result_r,
                        vec.into_iter().map(|c| c.mul(&coeff)).collect(),
                    );
                }
            }
        }
        out.components.retain(|_, v| v.iter().any(|c| !c.is_zero()));
        Ok(out)
    }

    /// Tensor product of morphisms; sums over all ways fibers merge one
    /// component block of self with one of other, with base tensor products
    /// on merged blocks and no rank coefficient.
    pub fn tensor(&self, other: &InterpMorphism) -> Result<InterpMorphism> {
        let src = self.src.tensor(&other.src)?;
        let tgt = self.tgt.tensor(&other.tgt)?;
        let cat = src.category().clone();
        let (p1, q1) = (self.src.factor_count(), self.tgt.factor_count());
        let (p2, q2) = (other.src.factor_count(), other.tgt.factor_count());
        let r_slots: Vec<usize> = (0..p1).chain(p1 + p2..p1 + p2 + q1).collect();
        let s_slots: Vec<usize> = (p1..p1 + p2)
            .chain(p1 + p2 + q1..p1 + p2 + q1 + q2)
            .collect();
        let n_src1 = self.src.total_size();
        let n_src = src.total_size();
        let n_tgt1 = self.tgt.total_size();

        let mut out = InterpMorphism::zero(src.clone(), tgt.clone())?;
        for (r, v1) in &self.components {
            for (s, v2) in &other.components {
                let r_dims = component_dims(&self.src, &self.tgt, r)?;
                let s_dims = component_dims(&other.src, &other.tgt, s)?;
                for u in enumerate_merge_fibers(r, s, &r_slots, &s_slots)? {
                    let u_blocks = u.blocks();
                    // Trace each fiber block back to its block of r and/or s.
                    let r_index = block_index_map(r);
                    let s_index = block_index_map(s);
                    let mut plans = Vec::with_capacity(u_blocks.len());
                    for block in &u_blocks {
                        let mut r_trace = Vec::new();
                        let mut s_trace = Vec::new();
                        for &p in block {
                            if p < n_src1 {
                                r_trace.push(p);
                            } else if p < n_src {
                                s_trace.push(p - n_src1);
                            } else if p < n_src + n_tgt1 {
                                r_trace.push(p - n_src + n_src1);
                            } else {
                                s_trace.push(p - n_src - n_tgt1 + other.src.total_size());
                            }
                        }
                        let (sw, tw) = block_words(&src, &tgt, block);
                        plans.push((
                            (!r_trace.is_empty()).then(|| r_index[&r_trace]),
                            (!s_trace.is_empty()).then(|| s_index[&s_trace]),
                            sw,
                            tw,
                        ));
                    }
                    // Per-block coordinate tables over basis-index pairs.
                    let mut tables: Vec<Vec<Vec<Vec<Rational>>>> = Vec::new();
                    for (r_idx, s_idx, sw, tw) in &plans {
                        let di = r_idx.map_or(1, |i| r_dims[i]);
                        let dj = s_idx.map_or(1, |j| s_dims[j]);
                        let mut table = vec![vec![Vec::new(); dj]; di];
                        for (i, row) in table.iter_mut().enumerate() {
                            for (j, entry) in row.iter_mut().enumerate() {
                                *entry = match (r_idx, s_idx) {
                                    (Some(ri), Some(si)) => {
                                        let rb = r.blocks()[*ri].clone();
                                        let sb = s.blocks()[*si].clone();
                                        let (rsw, rtw) = block_words(&self.src, &self.tgt, &rb);
                                        let (ssw, stw) =
                                            block_words(&other.src, &other.tgt, &sb);
                                        let fb = cat.hom_basis(&rsw, &rtw)?;
                                        let gb = cat.hom_basis(&ssw, &stw)?;
                                        cat.express(sw, tw, &fb[i].kron(&gb[j]))?
                                    }
                                    (Some(_), None) => indicator(i, cat.hom_dim(sw, tw)?),
                                    (None, Some(_)) => indicator(j, cat.hom_dim(sw, tw)?),
                                    (None, None) => unreachable!("empty fiber block"),
                                };
                            }
                        }
                        tables.push(table);
                    }
                    let res_dims = component_dims(&src, &tgt, &u)?;
                    let mut vec = vec![self.context().zero(); res_dims.iter().product()];
                    for (a_flat, alpha) in index_tuples(&r_dims).iter().enumerate() {
                        let c = &v1[a_flat];
                        if c.is_zero() {
                            continue;
                        }
                        for (b_flat, beta) in index_tuples(&s_dims).iter().enumerate() {
                            let d = &v2[b_flat];
                            if d.is_zero() {
                                continue;
                            }
                            let cd = c.mul(d);
                            let picks: Vec<&Vec<Rational>> = plans
                                .iter()
                                .zip(&tables)
                                .map(|((r_idx, s_idx, _, _), table)| {
                                    let i = r_idx.map_or(0, |ri| alpha[ri]);
                                    let j = s_idx.map_or(0, |si| beta[si]);
                                    &table[i][j]
                                })
                                .collect();
                            let dims: Vec<usize> = picks.iter().map(|p| p.len()).collect();
                            for (g_flat, gamma) in index_tuples(&dims).iter().enumerate() {
                                let mut w = crate::scalar::int(1);
                                for (pick, &k) in picks.iter().zip(gamma) {
                                    w *= &pick[k];
                                }
                                if !num::traits::Zero::is_zero(&w) {
                                    vec[g_flat] = vec[g_flat].add(&cd.scale(&w));
                                }
                            }
                        }
                    }
                    accumulate(&mut out.components, u, vec);
                }
            }
        }
        out.components.retain(|_, v| v.iter().any(|c| !c.is_zero()));
        Ok(out)
    }
}

impl fmt::Debug for InterpMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "InterpMorphism {} -> {}", self.src.label(), self.tgt.label())?;
        for (r, v) in &self.components {
            writeln!(f, "  {r}: {v:?}")?;
        }
        Ok(())
    }
}

pub(crate) fn indicator(k: usize, dim: usize) -> Vec<Rational> {
    let mut v = vec![crate::scalar::int(0); dim];
    v[k] = crate::scalar::int(1);
    v
}

pub(crate) fn block_index_map(r: &Recollement) -> BTreeMap<Vec<usize>, usize> {
    r.blocks()
        .into_iter()
        .enumerate()
        .map(|(i, b)| (b, i))
        .collect()
}

pub(crate) fn accumulate(
    components: &mut BTreeMap<Recollement, Vec<Scalar>>,
    r: Recollement,
    vec: Vec<Scalar>,
) {
    match components.get_mut(&r) {
        Some(cur) => {
            for (a, b) in cur.iter_mut().zip(&vec) {
                *a = a.add(b);
            }
        }
        None => {
            components.insert(r, vec);
        }
    }
}

/// Contracts Ψ's component at s with Φ's component at r along one fiber u,
/// without the rank coefficient: base compositions on every block, the two
/// halves of a source-target gluing composed through the base unit, and
/// middle-only blocks reduced to End(1) scalars. Returns the recollement of
/// the result (u with the middle positions dropped) and the coefficient
/// vector.
#[allow(clippy::too_many_arguments)]
pub(crate) fn contract_fiber(
    a: &BracketObject,
    b: &BracketObject,
    c: &BracketObject,
    r: &Recollement,
    s: &Recollement,
    u: &Recollement,
    v_phi: &[Scalar],
    v_psi: &[Scalar],
) -> Result<(Recollement, Vec<Scalar>)> {
    let cat = a.category();
    let context = a.context();
    let (na, nb) = (a.total_size(), b.total_size());
    let a_factors = a.factor_count();
    let b_factors = b.factor_count();
    let outer: Vec<usize> = (0..a_factors)
        .chain(a_factors + b_factors..u.factor_count())
        .collect();
    let result_r = u.restrict(&outer)?;

    let r_index = block_index_map(r);
    let s_index = block_index_map(s);
    let res_index = block_index_map(&result_r);
    let r_dims = component_dims(a, b, r)?;
    let s_dims = component_dims(b, c, s)?;

    struct Plan {
        r_idx: Option<usize>,
        s_idx: Option<usize>,
        res_idx: Option<usize>,
    }
    enum Entry {
        Orphan(Rational),
        Coords(Vec<Rational>),
    }

    let mut plans = Vec::new();
    let mut tables: Vec<Vec<Vec<Entry>>> = Vec::new();
    for block in u.blocks() {
        let mut r_trace = Vec::new();
        let mut s_trace = Vec::new();
        let mut res_trace = Vec::new();
        let mut src_w = TensorWord::unit();
        let mut mid_w = TensorWord::unit();
        let mut tgt_w = TensorWord::unit();
        for &p in &block {
            if p < na {
                r_trace.push(p);
                res_trace.push(p);
                src_w = src_w.concat(a.object_at(p));
            } else if p < na + nb {
                r_trace.push(p);
                s_trace.push(p - na);
                mid_w = mid_w.concat(b.object_at(p - na));
            } else {
                s_trace.push(p - na);
                res_trace.push(p - nb);
                tgt_w = tgt_w.concat(c.object_at(p - na - nb));
            }
        }
        let plan = Plan {
            r_idx: (!r_trace.is_empty()).then(|| r_index[&r_trace]),
            s_idx: (!s_trace.is_empty()).then(|| s_index[&s_trace]),
            res_idx: (!res_trace.is_empty()).then(|| res_index[&res_trace]),
        };
        let phi_basis = plan
            .r_idx
            .map(|_| cat.hom_basis(&src_w, &mid_w))
            .transpose()?;
        let psi_basis = plan
            .s_idx
            .map(|_| cat.hom_basis(&mid_w, &tgt_w))
            .transpose()?;
        let di = plan.r_idx.map_or(1, |i| r_dims[i]);
        let dj = plan.s_idx.map_or(1, |j| s_dims[j]);
        let mut table = Vec::with_capacity(di);
        for i in 0..di {
            let mut row = Vec::with_capacity(dj);
            for j in 0..dj {
                let m = match (&phi_basis, &psi_basis) {
                    (Some(pb), Some(qb)) => qb[j].matmul(&pb[i]),
                    (Some(pb), None) => pb[i].clone(),
                    (None, Some(qb)) => qb[j].clone(),
                    (None, None) => unreachable!("empty fiber block"),
                };
                row.push(if plan.res_idx.is_none() {
                    Entry::Orphan(m.at(0, 0).clone())
                } else {
                    Entry::Coords(cat.express(&src_w, &tgt_w, &m)?)
                });
            }
            table.push(row);
        }
        plans.push(plan);
        tables.push(table);
    }

    let res_dims = component_dims(a, c, &result_r)?;
    let mut out = vec![context.zero(); res_dims.iter().product()];
    for (a_flat, alpha) in index_tuples(&r_dims).iter().enumerate() {
        let cv = &v_phi[a_flat];
        if cv.is_zero() {
            continue;
        }
        for (b_flat, beta) in index_tuples(&s_dims).iter().enumerate() {
            let dv = &v_psi[b_flat];
            if dv.is_zero() {
                continue;
            }
            let mut scalar = crate::scalar::int(1);
            let mut per_res: Vec<Option<&Vec<Rational>>> = vec![None; res_index.len()];
            let mut dead = false;
            for (plan, table) in plans.iter().zip(&tables) {
                let i = plan.r_idx.map_or(0, |ri| alpha[ri]);
                let j = plan.s_idx.map_or(0, |si| beta[si]);
                match &table[i][j] {
                    Entry::Orphan(q) => {
                        if num::traits::Zero::is_zero(q) {
                            dead = true;
                            break;
                        }
                        scalar *= q;
                    }
                    Entry::Coords(v) => {
                        per_res[plan.res_idx.expect("coords imply a surviving block")] = Some(v);
                    }
                }
            }
            if dead {
                continue;
            }
            let picks: Vec<&Vec<Rational>> = per_res
                .into_iter()
                .map(|p| p.expect("every result block comes from one fiber block"))
                .collect();
            let cd = cv.mul(dv);
            let dims: Vec<usize> = picks.iter().map(|p| p.len()).collect();
            for (g_flat, gamma) in index_tuples(&dims).iter().enumerate() {
                let mut w = scalar.clone();
                for (pick, &k) in picks.iter().zip(gamma) {
                    w *= &pick[k];
                }
                if !num::traits::Zero::is_zero(&w) {
                    out[g_flat] = out[g_flat].add(&cd.scale(&w));
                }
            }
        }
    }
    Ok((result_r, out))
}
