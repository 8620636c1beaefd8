//! The braiding of the interpolation category and the four structure
//! morphisms μ, Δ, ι, ε relating brackets of tensor products to tensor
//! products of brackets.

use std::sync::Arc;

use crate::basecat::{ModuleCategory, TensorWord};
use crate::partitions::{enumerate_recollements, Recollement};
use crate::scalar::{RankContext, Scalar};
use crate::{Error, Result};

use super::{BracketObject, InterpMorphism};

/// The braiding A⊗B → B⊗A: on each gluing summand of the two brackets it
/// permutes the pair and applies the base flip on merged blocks. Multi-factor
/// products reduce to the single-bracket case through the hexagon
/// factorizations, so coherence holds by construction and naturality is the
/// real content (tested).
pub fn braiding(a: &BracketObject, b: &BracketObject) -> Result<InterpMorphism> {
    if !a.same_setting(b) {
        return Err(Error::Argument(
            "braiding requires one base and one rank context".into(),
        ));
    }
    if !a.category().is_cocommutative() {
        return Err(Error::Capability(
            "braiding requires a cocommutative base bialgebra".into(),
        ));
    }
    if a.is_unit() {
        return Ok(InterpMorphism::identity(b));
    }
    if b.is_unit() {
        return Ok(InterpMorphism::identity(a));
    }
    if a.factor_count() == 1 && b.factor_count() == 1 {
        return elementary_braiding(a, b);
    }
    if a.factor_count() > 1 {
        // τ_{A₁⊗A', B} = (τ_{A₁,B} ⊗ id_{A'}) ∘ (id_{A₁} ⊗ τ_{A',B})
        let (a1, rest) = a.split_first_factor().expect("non-unit object");
        let id_a1 = InterpMorphism::identity(&a1);
        let id_rest = InterpMorphism::identity(&rest);
        let inner = id_a1.tensor(&braiding(&rest, b)?)?;
        let outer = braiding(&a1, b)?.tensor(&id_rest)?;
        return outer.compose(&inner);
    }
    // τ_{A, B₁⊗B'} = (id_{B₁} ⊗ τ_{A,B'}) ∘ (τ_{A,B₁} ⊗ id_{B'})
    let (b1, rest) = b.split_first_factor().expect("non-unit object");
    let id_b1 = InterpMorphism::identity(&b1);
    let id_rest = InterpMorphism::identity(&rest);
    let inner = braiding(a, &b1)?.tensor(&id_rest)?;
    let outer = id_b1.tensor(&braiding(a, &rest)?)?;
    outer.compose(&inner)
}

/// The braiding of two single brackets ⟨U_I⟩, ⟨V_J⟩: one component per
/// gluing r of the families, connecting the summand T_r of A⊗B to the
/// mirrored summand of B⊗A, with the base flip on merged pairs and
/// identities elsewhere.
fn elementary_braiding(a: &BracketObject, b: &BracketObject) -> Result<InterpMorphism> {
    let cat = a.category().clone();
    let context = a.context().clone();
    let m = a.total_size();
    let n = b.total_size();
    let src = a.tensor(b)?;
    let tgt = b.tensor(a)?;
    let mut total = InterpMorphism::zero(src.clone(), tgt.clone())?;
    // Position layout of the hom recollements: sources of A at 0..m, sources
    // of B at m..m+n, then targets: B's copy at m+n..m+2n, A's at m+2n..
    for r in enumerate_recollements(&[m, n])? {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut data: Vec<(Vec<usize>, Vec<crate::scalar::Rational>)> = Vec::new();
        for block in r.blocks() {
            let srcs: Vec<usize> = block.iter().filter(|&&p| p < m).copied().collect();
            let tgts: Vec<usize> = block.iter().filter(|&&p| p >= m).map(|&p| p - m).collect();
            match (srcs.as_slice(), tgts.as_slice()) {
                ([i], [j]) => {
                    let u_word = a.object_at(*i);
                    let v_word = b.object_at(*j);
                    let flip = cat.flip_braiding(u_word, v_word)?;
                    let merged_src = u_word.concat(v_word);
                    let merged_tgt = v_word.concat(u_word);
                    let coords = cat.express(&merged_src, &merged_tgt, &flip)?;
                    blocks.push(vec![*i, m + *j, m + n + *j, m + 2 * n + *i]);
                    data.push((blocks.last().unwrap().clone(), coords));
                }
                ([i], []) => {
                    let coords = cat.identity_coords(a.object_at(*i))?;
                    blocks.push(vec![*i, m + 2 * n + *i]);
                    data.push((blocks.last().unwrap().clone(), coords));
                }
                ([], [j]) => {
                    let coords = cat.identity_coords(b.object_at(*j))?;
                    blocks.push(vec![m + *j, m + n + *j]);
                    data.push((blocks.last().unwrap().clone(), coords));
                }
                _ => unreachable!("gluings of two singleton factors pair at most one of each"),
            }
        }
        let component = Recollement::from_blocks(vec![m, n, n, m], &blocks)?;
        // Flatten per-block coordinates in canonical block order.
        data.sort_by_key(|(b, _)| b.iter().min().copied());
        let mut coeffs = vec![crate::scalar::int(1)];
        for (_, coords) in &data {
            let mut next = Vec::with_capacity(coeffs.len() * coords.len());
            for c in &coeffs {
                for d in coords {
                    next.push(c * d);
                }
            }
            coeffs = next;
        }
        let scalars: Vec<Scalar> = coeffs.into_iter().map(|c| context.constant(c)).collect();
        total = total.add(&InterpMorphism::single(
            src.clone(),
            tgt.clone(),
            component,
            scalars,
        )?)?;
    }
    Ok(total)
}

/// μ(U, V): ⟨U⟩⊗⟨V⟩ → ⟨U⊗V⟩, the projection onto the fully merged gluing
/// summand.
pub fn mu(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
    u: &TensorWord,
    v: &TensorWord,
) -> Result<InterpMorphism> {
    let src = BracketObject::bracket(cat.clone(), context.clone(), vec![u.clone()])
        .tensor(&BracketObject::bracket(
            cat.clone(),
            context.clone(),
            vec![v.clone()],
        ))?;
    let tgt = BracketObject::bracket(cat.clone(), context.clone(), vec![u.concat(v)]);
    let r = Recollement::from_blocks(vec![1, 1, 1], &[vec![0, 1, 2]])?;
    let coords = cat.identity_coords(&u.concat(v))?;
    let scalars = coords.into_iter().map(|c| context.constant(c)).collect();
    InterpMorphism::single(src, tgt, r, scalars)
}

/// Δ(U, V): ⟨U⊗V⟩ → ⟨U⟩⊗⟨V⟩, the section of μ into the merged summand.
pub fn delta(
    cat: &Arc<ModuleCategory>,
    context: &RankContext,
    u: &TensorWord,
    v: &TensorWord,
) -> Result<InterpMorphism> {
    let src = BracketObject::bracket(cat.clone(), context.clone(), vec![u.concat(v)]);
    let tgt = BracketObject::bracket(cat.clone(), context.clone(), vec![u.clone()])
        .tensor(&BracketObject::bracket(
            cat.clone(),
            context.clone(),
            vec![v.clone()],
        ))?;
    let r = Recollement::from_blocks(vec![1, 1, 1], &[vec![0, 1, 2]])?;
    let coords = cat.identity_coords(&u.concat(v))?;
    let scalars = coords.into_iter().map(|c| context.constant(c)).collect();
    InterpMorphism::single(src, tgt, r, scalars)
}

/// ι: ⟨⟩ → ⟨1_C⟩, the unit inclusion.
pub fn iota(cat: &Arc<ModuleCategory>, context: &RankContext) -> Result<InterpMorphism> {
    let src = BracketObject::unit(cat.clone(), context.clone());
    let tgt = BracketObject::bracket(cat.clone(), context.clone(), vec![TensorWord::unit()]);
    let r = Recollement::from_blocks(vec![1], &[vec![0]])?;
    InterpMorphism::single(src, tgt, r, vec![context.one()])
}

/// ε: ⟨1_C⟩ → ⟨⟩, the counit projection; ε∘ι = t·id.
pub fn eps(cat: &Arc<ModuleCategory>, context: &RankContext) -> Result<InterpMorphism> {
    let src = BracketObject::bracket(cat.clone(), context.clone(), vec![TensorWord::unit()]);
    let tgt = BracketObject::unit(cat.clone(), context.clone());
    let r = Recollement::from_blocks(vec![1], &[vec![0]])?;
    InterpMorphism::single(src, tgt, r, vec![context.one()])
}
