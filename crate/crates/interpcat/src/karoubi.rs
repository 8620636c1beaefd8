//! Direct sums of brackets and images of idempotents.
//!
//! The morphism engine knows single objects only, so sums and split
//! idempotents are adjoined formally here: an object is a tuple of brackets
//! cut down by an idempotent block matrix, and a morphism is a block matrix
//! compressed by the idempotents on both ends. Splitting an idempotent then
//! becomes a constructor. The second half realizes symmetric groups inside
//! endomorphism rings: permutations act on a bracket with equal entries by
//! gluing slots, and Young symmetrizers give explicit projectors.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::basecat::TensorWord;
use crate::interp::{
    canonical_coordinates, component_dims, hom_basis_morphisms, hom_sizes, index_tuples,
    BracketObject, InterpMorphism,
};
use crate::linalg::Mat;
use crate::partitions::Recollement;
use crate::scalar::{int, Rational, Scalar};
use crate::{Error, Result};

/// A tuple of brackets cut down by an idempotent block matrix e with
/// e ∘ e = e. The plain sum of a tuple is the case e = identity, and the
/// empty tuple is the zero object.
#[derive(Clone, PartialEq)]
pub struct FormalObject {
    summands: Vec<BracketObject>,
    idempotent: Vec<Vec<InterpMorphism>>,
}

impl FormalObject {
    /// Assemble an object from summands and an idempotent matrix. The matrix
    /// must be square over the summands and square to itself exactly.
    pub fn new(
        summands: Vec<BracketObject>,
        idempotent: Vec<Vec<InterpMorphism>>,
    ) -> Result<FormalObject> {
        check_block_shape(&summands, &summands, &idempotent)?;
        let square = block_compose(&summands, &summands, &summands, &idempotent, &idempotent)?;
        if let Some((i, j)) = first_difference(&square, &idempotent) {
            let residual = square[i][j].sub(&idempotent[i][j])?;
            return Err(Error::Argument(format!(
                "the block matrix is not idempotent: e∘e − e has a nonzero block \
                 at ({i}, {j}): {residual:?}"
            )));
        }
        Ok(FormalObject {
            summands,
            idempotent,
        })
    }

    /// The plain direct sum of a tuple of brackets, with the identity as the
    /// idempotent. An empty tuple gives the zero object.
    pub fn direct_sum(summands: Vec<BracketObject>) -> Result<FormalObject> {
        let idempotent = identity_blocks(&summands)?;
        Ok(FormalObject {
            summands,
            idempotent,
        })
    }

    pub fn summands(&self) -> &[BracketObject] {
        &self.summands
    }

    pub fn idempotent(&self) -> &[Vec<InterpMorphism>] {
        &self.idempotent
    }

    pub fn summand_count(&self) -> usize {
        self.summands.len()
    }

    /// Whether the idempotent vanishes, which makes the object zero; the
    /// empty tuple counts.
    pub fn is_zero_object(&self) -> bool {
        self.idempotent.iter().flatten().all(|f| f.is_zero())
    }

    /// Block diagonal sum with another formal object: summands concatenate
    /// and the idempotents sit in diagonal blocks.
    pub fn sum(&self, other: &FormalObject) -> Result<FormalObject> {
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        let mut idempotent = Vec::with_capacity(summands.len());
        for (i, row) in self.idempotent.iter().enumerate() {
            let mut new_row = row.clone();
            for s in &other.summands {
                new_row.push(InterpMorphism::zero(s.clone(), self.summands[i].clone())?);
            }
            idempotent.push(new_row);
        }
        for (i, row) in other.idempotent.iter().enumerate() {
            let mut new_row = self
                .summands
                .iter()
                .map(|s| InterpMorphism::zero(s.clone(), other.summands[i].clone()))
                .collect::<Result<Vec<_>>>()?;
            new_row.extend(row.iter().cloned());
            idempotent.push(new_row);
        }
        Ok(FormalObject {
            summands,
            idempotent,
        })
    }

    fn is_plain_sum(&self) -> bool {
        self.idempotent.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, f)| {
                if i == j {
                    *f == InterpMorphism::identity(&self.summands[i])
                } else {
                    f.is_zero()
                }
            })
        })
    }
}

impl fmt::Debug for FormalObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⊕{:?}", self.summands)?;
        if !self.is_plain_sum() {
            write!(f, " cut by an idempotent")?;
        }
        Ok(())
    }
}

/// A morphism of formal objects: a block matrix whose (row, column) entry
/// maps the column's source summand to the row's target summand. Entries are
/// compressed by the idempotents on both ends when the matrix is built, so
/// structural equality is equality of compressed representatives.
#[derive(Clone, PartialEq)]
pub struct MatrixMorphism {
    src: FormalObject,
    tgt: FormalObject,
    entries: Vec<Vec<InterpMorphism>>,
}

impl MatrixMorphism {
    pub fn new(
        src: FormalObject,
        tgt: FormalObject,
        entries: Vec<Vec<InterpMorphism>>,
    ) -> Result<MatrixMorphism> {
        check_block_shape(&src.summands, &tgt.summands, &entries)?;
        let entries = compress(&src, &tgt, &entries)?;
        Ok(MatrixMorphism { src, tgt, entries })
    }

    pub fn zero(src: FormalObject, tgt: FormalObject) -> Result<MatrixMorphism> {
        let entries = zero_blocks(&src.summands, &tgt.summands)?;
        Ok(MatrixMorphism { src, tgt, entries })
    }

    /// The identity of a formal object is its idempotent.
    pub fn identity(obj: &FormalObject) -> MatrixMorphism {
        MatrixMorphism {
            src: obj.clone(),
            tgt: obj.clone(),
            entries: obj.idempotent.clone(),
        }
    }

    pub fn src(&self) -> &FormalObject {
        &self.src
    }

    pub fn tgt(&self) -> &FormalObject {
        &self.tgt
    }

    pub fn entries(&self) -> &[Vec<InterpMorphism>] {
        &self.entries
    }

    /// One block; the row indexes a target summand, the column a source
    /// summand.
    pub fn entry(&self, row: usize, col: usize) -> &InterpMorphism {
        &self.entries[row][col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|f| f.is_zero())
    }

    pub fn compose(&self, other: &MatrixMorphism) -> Result<MatrixMorphism> {
        if other.tgt != self.src {
            return Err(Error::Argument(
                "matrix composition needs matching middle objects".into(),
            ));
        }
        let entries = block_compose(
            &self.tgt.summands,
            &self.src.summands,
            &other.src.summands,
            &self.entries,
            &other.entries,
        )?;
        Ok(MatrixMorphism {
            src: other.src.clone(),
            tgt: self.tgt.clone(),
            entries,
        })
    }

    pub fn add(&self, other: &MatrixMorphism) -> Result<MatrixMorphism> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(Error::Argument(
                "cannot add matrices between different objects".into(),
            ));
        }
        let mut entries = self.entries.clone();
        for (row, other_row) in entries.iter_mut().zip(&other.entries) {
            for (e, o) in row.iter_mut().zip(other_row) {
                *e = e.add(o)?;
            }
        }
        Ok(MatrixMorphism {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            entries,
        })
    }

    pub fn neg(&self) -> MatrixMorphism {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|f| f.neg()).collect())
            .collect();
        MatrixMorphism {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            entries,
        }
    }

    pub fn sub(&self, other: &MatrixMorphism) -> Result<MatrixMorphism> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Result<MatrixMorphism> {
        let mut entries = self.entries.clone();
        for row in &mut entries {
            for e in row.iter_mut() {
                *e = e.scale(s)?;
            }
        }
        Ok(MatrixMorphism {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            entries,
        })
    }

    pub fn scale_rational(&self, c: &Rational) -> MatrixMorphism {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|f| f.scale_rational(c)).collect())
            .collect();
        MatrixMorphism {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            entries,
        }
    }
}

impl fmt::Debug for MatrixMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matrix {:?} → {:?}", self.src, self.tgt)?;
        for row in &self.entries {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Split an idempotent endomorphism into an object: the same summands with
/// the matrix as the new identity. The matrix must square to itself exactly;
/// otherwise the error reports a nonzero block of e∘e − e.
pub fn image(e: &MatrixMorphism) -> Result<FormalObject> {
    if e.src != e.tgt {
        return Err(Error::Argument(
            "only an endomorphism has an image object".into(),
        ));
    }
    FormalObject::new(e.src.summands.clone(), e.entries.clone())
}

/// dim Hom between formal objects: the rank of h ↦ e_tgt ∘ h ∘ e_src on the
/// ambient block hom space. Exact, but only at a specialized rank, since the
/// coefficients are flattened to rational coordinates.
pub fn hom_dim_formal(src: &FormalObject, tgt: &FormalObject) -> Result<usize> {
    let mut rows = Vec::new();
    for i in 0..tgt.summands.len() {
        for j in 0..src.summands.len() {
            for basis in hom_basis_morphisms(&src.summands[j], &tgt.summands[i])? {
                let mut entries = zero_blocks(&src.summands, &tgt.summands)?;
                entries[i][j] = basis;
                let compressed = compress(src, tgt, &entries)?;
                rows.push(flatten_coordinates(&compressed)?);
            }
        }
    }
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(Mat::from_rows(rows).rank())
}

/// dim End of a formal object at a specialized rank.
pub fn end_dim(obj: &FormalObject) -> Result<usize> {
    hom_dim_formal(obj, obj)
}

fn flatten_coordinates(entries: &[Vec<InterpMorphism>]) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for row in entries {
        for f in row {
            out.extend(canonical_coordinates(f)?);
        }
    }
    Ok(out)
}

fn check_block_shape(
    src: &[BracketObject],
    tgt: &[BracketObject],
    entries: &[Vec<InterpMorphism>],
) -> Result<()> {
    if entries.len() != tgt.len() || entries.iter().any(|row| row.len() != src.len()) {
        return Err(Error::Argument(format!(
            "a block matrix over {} source and {} target summands has the wrong shape",
            src.len(),
            tgt.len()
        )));
    }
    for (i, row) in entries.iter().enumerate() {
        for (j, f) in row.iter().enumerate() {
            if f.src() != &src[j] || f.tgt() != &tgt[i] {
                return Err(Error::Argument(format!(
                    "block ({i}, {j}) connects the wrong summands"
                )));
            }
        }
    }
    Ok(())
}

fn zero_blocks(src: &[BracketObject], tgt: &[BracketObject]) -> Result<Vec<Vec<InterpMorphism>>> {
    tgt.iter()
        .map(|t| {
            src.iter()
                .map(|s| InterpMorphism::zero(s.clone(), t.clone()))
                .collect()
        })
        .collect()
}

fn identity_blocks(summands: &[BracketObject]) -> Result<Vec<Vec<InterpMorphism>>> {
    let mut out = zero_blocks(summands, summands)?;
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = InterpMorphism::identity(&summands[i]);
    }
    Ok(out)
}

/// Entrywise matrix product a ∘ b, where a maps mid to tgt and b maps src to
/// mid; the summand lists pin down the shapes when a dimension is zero.
fn block_compose(
    tgt: &[BracketObject],
    mid: &[BracketObject],
    src: &[BracketObject],
    a: &[Vec<InterpMorphism>],
    b: &[Vec<InterpMorphism>],
) -> Result<Vec<Vec<InterpMorphism>>> {
    let mut out = Vec::with_capacity(tgt.len());
    for i in 0..tgt.len() {
        let mut row = Vec::with_capacity(src.len());
        for j in 0..src.len() {
            let mut acc = InterpMorphism::zero(src[j].clone(), tgt[i].clone())?;
            for k in 0..mid.len() {
                acc = acc.add(&a[i][k].compose(&b[k][j])?)?;
            }
            row.push(acc);
        }
        out.push(row);
    }
    Ok(out)
}

fn compress(
    src: &FormalObject,
    tgt: &FormalObject,
    entries: &[Vec<InterpMorphism>],
) -> Result<Vec<Vec<InterpMorphism>>> {
    let half = block_compose(
        &tgt.summands,
        &tgt.summands,
        &src.summands,
        &tgt.idempotent,
        entries,
    )?;
    block_compose(
        &tgt.summands,
        &src.summands,
        &src.summands,
        &half,
        &src.idempotent,
    )
}

fn first_difference(
    a: &[Vec<InterpMorphism>],
    b: &[Vec<InterpMorphism>],
) -> Option<(usize, usize)> {
    for (i, (row_a, row_b)) in a.iter().zip(b).enumerate() {
        for (j, (fa, fb)) in row_a.iter().zip(row_b).enumerate() {
            if fa != fb {
                return Some((i, j));
            }
        }
    }
    None
}

/// The action of a permutation on a bracket with equal entries: one component
/// whose blocks pair source slot i with target slot g(i), each block carrying
/// identity coordinates. The unit object only admits the empty permutation.
pub fn sym_action(g: &[usize], obj: &BracketObject) -> Result<InterpMorphism> {
    if obj.is_unit() && g.is_empty() {
        return Ok(InterpMorphism::identity(obj));
    }
    let family = constant_family(obj)?;
    let m = family.len();
    if g.len() != m {
        return Err(Error::Argument(format!(
            "a permutation of {} slots cannot act on {} slots",
            g.len(),
            m
        )));
    }
    validate_permutation(g)?;
    let blocks: Vec<Vec<usize>> = (0..m).map(|i| vec![i, m + g[i]]).collect();
    let r = Recollement::from_blocks(hom_sizes(obj, obj), &blocks)?;
    let dims = component_dims(obj, obj, &r)?;
    let id = obj.category().identity_coords(&family[0])?;
    let context = obj.context().clone();
    let coeffs = index_tuples(&dims)
        .into_iter()
        .map(|alpha| {
            let mut v = int(1);
            for &a in &alpha {
                v *= id[a].clone();
            }
            context.constant(v)
        })
        .collect();
    InterpMorphism::single(obj.clone(), obj.clone(), r, coeffs)
}

fn constant_family(obj: &BracketObject) -> Result<&[TensorWord]> {
    if obj.factor_count() != 1 {
        return Err(Error::Argument(
            "the permutation action lives on a single bracket".into(),
        ));
    }
    let family = obj.factors()[0].as_slice();
    if family.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Argument(
            "the permutation action needs every bracket entry equal".into(),
        ));
    }
    Ok(family)
}

fn validate_permutation(g: &[usize]) -> Result<()> {
    let mut seen = vec![false; g.len()];
    for &v in g {
        if v >= g.len() || seen[v] {
            return Err(Error::Argument(format!(
                "{g:?} is not a permutation in one-line notation"
            )));
        }
        seen[v] = true;
    }
    Ok(())
}

/// A rational combination of permutations of {0, …, n−1} in one-line
/// notation: an element of the group algebra of the symmetric group.
#[derive(Clone, PartialEq, Eq)]
pub struct SymElement {
    n: usize,
    coeffs: BTreeMap<Vec<usize>, Rational>,
}

impl SymElement {
    pub fn zero(n: usize) -> SymElement {
        SymElement {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    /// The unit: the identity permutation with coefficient one.
    pub fn unit(n: usize) -> SymElement {
        SymElement {
            n,
            coeffs: BTreeMap::from([((0..n).collect(), int(1))]),
        }
    }

    pub fn from_permutation(g: &[usize]) -> Result<SymElement> {
        validate_permutation(g)?;
        Ok(SymElement {
            n: g.len(),
            coeffs: BTreeMap::from([(g.to_vec(), int(1))]),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<usize>, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, g: &[usize]) -> Rational {
        self.coeffs.get(g).cloned().unwrap_or_else(|| int(0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &SymElement) -> Result<SymElement> {
        if self.n != other.n {
            return Err(Error::Argument(
                "group algebra elements of different symmetric groups".into(),
            ));
        }
        let mut coeffs = self.coeffs.clone();
        for (g, c) in &other.coeffs {
            let entry = coeffs.entry(g.clone()).or_insert_with(|| int(0));
            *entry += c.clone();
        }
        coeffs.retain(|_, c| *c != int(0));
        Ok(SymElement { n: self.n, coeffs })
    }

    pub fn neg(&self) -> SymElement {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(g, c)| (g.clone(), -c.clone()))
            .collect();
        SymElement { n: self.n, coeffs }
    }

    pub fn sub(&self, other: &SymElement) -> Result<SymElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> SymElement {
        if *c == int(0) {
            return SymElement::zero(self.n);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(g, a)| (g.clone(), a * c))
            .collect();
        SymElement { n: self.n, coeffs }
    }

    /// The convolution product, with (g ∘ h)(i) = g(h(i)).
    pub fn multiply(&self, other: &SymElement) -> Result<SymElement> {
        if self.n != other.n {
            return Err(Error::Argument(
                "group algebra elements of different symmetric groups".into(),
            ));
        }
        let mut coeffs: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (g, a) in &self.coeffs {
            for (h, b) in &other.coeffs {
                let entry = coeffs.entry(compose_perm(g, h)).or_insert_with(|| int(0));
                *entry += a * b;
            }
        }
        coeffs.retain(|_, c| *c != int(0));
        Ok(SymElement { n: self.n, coeffs })
    }

    pub fn is_idempotent(&self) -> bool {
        self.multiply(self).map(|sq| sq == *self).unwrap_or(false)
    }

    /// The dimension of the left ideal the element generates: the rank of
    /// right multiplication on the whole group algebra. Enumerates all n!
    /// permutations, so it is meant for the small ranks the symmetrizers use.
    pub fn ideal_dimension(&self) -> usize {
        let perms: Vec<Vec<usize>> = (0..self.n).permutations(self.n).collect();
        let index: BTreeMap<&Vec<usize>, usize> =
            perms.iter().enumerate().map(|(k, g)| (g, k)).collect();
        let mut rows = Vec::with_capacity(perms.len());
        for g in &perms {
            let mut row = vec![int(0); perms.len()];
            for (h, c) in &self.coeffs {
                row[index[&compose_perm(g, h)]] += c.clone();
            }
            rows.push(row);
        }
        Mat::from_rows(rows).rank()
    }

    /// Push the element through the permutation action on a bracket with
    /// equal entries.
    pub fn action(&self, obj: &BracketObject) -> Result<InterpMorphism> {
        let mut acc = InterpMorphism::zero(obj.clone(), obj.clone())?;
        for (g, c) in &self.coeffs {
            acc = acc.add(&sym_action(g, obj)?.scale_rational(c))?;
        }
        Ok(acc)
    }
}

impl fmt::Debug for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(g, c)| format!("{c}·{g:?}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn compose_perm(g: &[usize], h: &[usize]) -> Vec<usize> {
    h.iter().map(|&i| g[i]).collect()
}

fn perm_sign(g: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if g[i] > g[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn validate_partition(lambda: &[usize]) -> Result<()> {
    if lambda.is_empty()
        || lambda.iter().any(|&p| p == 0)
        || lambda.windows(2).any(|w| w[0] < w[1])
    {
        return Err(Error::Argument(format!(
            "{lambda:?} is not a partition: parts must be positive and nonincreasing"
        )));
    }
    Ok(())
}

/// The number of standard tableaux of a partition shape by the hook length
/// formula; it is the dimension of the matching simple module, and serves as
/// an independent count against the normalization of the symmetrizer.
pub fn hook_dimension(lambda: &[usize]) -> Result<usize> {
    validate_partition(lambda)?;
    let n: usize = lambda.iter().sum();
    let mut product = 1usize;
    for (i, &len) in lambda.iter().enumerate() {
        for j in 0..len {
            let arm = len - j - 1;
            let leg = lambda[i + 1..].iter().filter(|&&l| l > j).count();
            product *= arm + leg + 1;
        }
    }
    Ok(factorial(n) / product)
}

/// All permutations fixing each listed block of positions setwise.
fn block_permutations(blocks: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    blocks
        .iter()
        .map(|b| b.iter().copied().permutations(b.len()).collect::<Vec<_>>())
        .multi_cartesian_product()
        .map(|choice| {
            let mut g: Vec<usize> = (0..n).collect();
            for (block, image) in blocks.iter().zip(choice) {
                for (k, &src) in block.iter().enumerate() {
                    g[src] = image[k];
                }
            }
            g
        })
        .collect()
}

fn subgroup_sum(blocks: &[Vec<usize>], n: usize, signed: bool) -> Result<SymElement> {
    let mut out = SymElement::zero(n);
    for g in block_permutations(blocks, n) {
        let c = if signed { int(perm_sign(&g)) } else { int(1) };
        out = out.add(&SymElement {
            n,
            coeffs: BTreeMap::from([(g, c)]),
        })?;
    }
    Ok(out)
}

/// The normalized Young symmetrizer of a partition: the row symmetrizer of
/// the row-filled tableau times the signed column symmetrizer, divided by
/// the scalar κ with c ∘ c = κ·c. The normalization is cross-checked against
/// the hook length count, and the result is verified to square to itself
/// before it is returned. Partitions of at most five are accepted.
pub fn young_symmetrizer(lambda: &[usize]) -> Result<SymElement> {
    validate_partition(lambda)?;
    let n: usize = lambda.iter().sum();
    if n > 5 {
        return Err(Error::Resource(format!(
            "a partition of {n} is out of range: the symmetrizer table stops at five"
        )));
    }
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for &len in lambda {
        rows.push((next..next + len).collect());
        next += len;
    }
    let cols: Vec<Vec<usize>> = (0..lambda[0])
        .map(|j| {
            rows.iter()
                .filter(|row| j < row.len())
                .map(|row| row[j])
                .collect()
        })
        .collect();
    let row_sym = subgroup_sum(&rows, n, false)?;
    let col_sym = subgroup_sum(&cols, n, true)?;
    let c = row_sym.multiply(&col_sym)?;
    let c2 = c.multiply(&c)?;
    let (g0, c0) = c
        .coeffs
        .iter()
        .next()
        .ok_or_else(|| Error::Validation("the unnormalized symmetrizer vanished".into()))?;
    let kappa = c2.coeff(g0) / c0.clone();
    if kappa == int(0) || c2 != c.scale(&kappa) {
        return Err(Error::Validation(
            "the symmetrizer square is not a nonzero multiple of the symmetrizer, \
             so no normalization exists"
                .into(),
        ));
    }
    let dim = hook_dimension(lambda)?;
    if kappa.clone() * int(dim as i64) != int(factorial(n) as i64) {
        return Err(Error::Validation(
            "the normalization scalar disagrees with the hook length count".into(),
        ));
    }
    let f = c.scale(&kappa.recip());
    if !f.is_idempotent() {
        return Err(Error::Validation(
            "the normalized symmetrizer failed to square to itself".into(),
        ));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::basecat::{cyclic_group_table, ModuleCategory};
    use crate::interp::tests::{deligne_symbolic, one_bracket, random_morphism, split_x};
    use crate::scalar::{ratio, RankContext};

    #[test]
    fn direct_sums_compose_blockwise() {
        let (cat, ctx) = deligne_symbolic();
        let u = one_bracket(&cat, &ctx, 1);
        let v = one_bracket(&cat, &ctx, 2);
        let a = FormalObject::direct_sum(vec![u.clone(), v.clone()]).unwrap();
        let objs = [u, v];
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let random_matrix = |rng: &mut ChaCha8Rng| {
            let entries = objs
                .iter()
                .map(|t| objs.iter().map(|s| random_morphism(s, t, rng)).collect())
                .collect();
            MatrixMorphism::new(a.clone(), a.clone(), entries).unwrap()
        };
        let f = random_matrix(&mut rng);
        let g = random_matrix(&mut rng);
        let k = random_matrix(&mut rng);

        let h = g.compose(&f).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expected = g
                    .entry(i, 0)
                    .compose(f.entry(0, j))
                    .unwrap()
                    .add(&g.entry(i, 1).compose(f.entry(1, j)).unwrap())
                    .unwrap();
                assert_eq!(h.entry(i, j), &expected);
            }
        }

        let left = k.compose(&g).unwrap().compose(&f).unwrap();
        let right = k.compose(&g.compose(&f).unwrap()).unwrap();
        assert_eq!(left, right);

        let one = MatrixMorphism::identity(&a);
        assert_eq!(one.compose(&f).unwrap(), f);
        assert_eq!(f.compose(&one).unwrap(), f);
    }

    #[test]
    fn the_empty_sum_is_a_zero_object() {
        let (cat, ctx) = deligne_symbolic();
        let z = FormalObject::direct_sum(Vec::new()).unwrap();
        assert!(z.is_zero_object());
        assert_eq!(end_dim(&z).unwrap(), 0);
        let u = one_bracket(&cat, &ctx, 1);
        let a = FormalObject::direct_sum(vec![u]).unwrap();
        assert_eq!(a.sum(&z).unwrap(), a);
        assert_eq!(z.sum(&a).unwrap(), a);
        assert!(MatrixMorphism::identity(&z).is_zero());
    }

    #[test]
    fn splitting_the_identity_and_the_zero_map() {
        let (cat, _) = deligne_symbolic();
        let ctx = RankContext::Specialized(ratio(7, 2));
        let u = one_bracket(&cat, &ctx, 1);
        let a = FormalObject::direct_sum(vec![u]).unwrap();
        assert_eq!(image(&MatrixMorphism::identity(&a)).unwrap(), a);
        let zero = MatrixMorphism::zero(a.clone(), a.clone()).unwrap();
        let b = image(&zero).unwrap();
        assert!(b.is_zero_object());
        assert_eq!(end_dim(&b).unwrap(), 0);
        assert_eq!(end_dim(&a).unwrap(), 2);
    }

    #[test]
    fn a_matrix_that_fails_to_square_is_rejected() {
        let (cat, ctx) = deligne_symbolic();
        let u = one_bracket(&cat, &ctx, 1);
        let a = FormalObject::direct_sum(vec![u]).unwrap();
        let doubled = MatrixMorphism::identity(&a).scale_rational(&int(2));
        let err = image(&doubled).unwrap_err();
        assert!(matches!(err, Error::Argument(_)));
        let message = err.to_string();
        assert!(message.contains("not idempotent"), "got: {message}");

        let z = FormalObject::direct_sum(Vec::new()).unwrap();
        let sideways = MatrixMorphism::zero(a, z).unwrap();
        assert!(matches!(image(&sideways), Err(Error::Argument(_))));
    }

    #[test]
    fn splitting_a_projector_cuts_the_endomorphism_ring_to_a_line() {
        let (cat, _) = deligne_symbolic();
        let ctx = RankContext::Specialized(ratio(7, 2));
        let u = one_bracket(&cat, &ctx, 1);
        let x = split_x(&cat, &ctx);
        let p = x
            .add(&InterpMorphism::identity(&u))
            .unwrap()
            .scale_rational(&ratio(2, 7));
        let a = FormalObject::direct_sum(vec![u]).unwrap();
        let e = MatrixMorphism::new(a.clone(), a.clone(), vec![vec![p]]).unwrap();
        assert_eq!(e.compose(&e).unwrap(), e);
        let b = image(&e).unwrap();
        assert_eq!(end_dim(&b).unwrap(), 1);
        assert_eq!(end_dim(&a).unwrap(), 2);
    }

    #[test]
    fn complementary_projectors_assemble_to_a_biproduct() {
        let (cat, _) = deligne_symbolic();
        let ctx = RankContext::Specialized(ratio(7, 2));
        let u = one_bracket(&cat, &ctx, 1);
        let x = split_x(&cat, &ctx);
        let p = x
            .add(&InterpMorphism::identity(&u))
            .unwrap()
            .scale_rational(&ratio(2, 7));
        let a = FormalObject::direct_sum(vec![u]).unwrap();
        let one = MatrixMorphism::identity(&a);
        let e = MatrixMorphism::new(a.clone(), a.clone(), vec![vec![p]]).unwrap();
        let f = one.sub(&e).unwrap();
        let b = image(&e).unwrap();
        let c = image(&f).unwrap();

        let include_b = MatrixMorphism::new(b.clone(), a.clone(), e.entries().to_vec()).unwrap();
        let project_b = MatrixMorphism::new(a.clone(), b.clone(), e.entries().to_vec()).unwrap();
        let include_c = MatrixMorphism::new(c.clone(), a.clone(), f.entries().to_vec()).unwrap();
        let project_c = MatrixMorphism::new(a.clone(), c.clone(), f.entries().to_vec()).unwrap();

        assert_eq!(
            project_b.compose(&include_b).unwrap(),
            MatrixMorphism::identity(&b)
        );
        assert_eq!(
            project_c.compose(&include_c).unwrap(),
            MatrixMorphism::identity(&c)
        );
        assert!(project_b.compose(&include_c).unwrap().is_zero());
        assert!(project_c.compose(&include_b).unwrap().is_zero());
        let assembled = include_b
            .compose(&project_b)
            .unwrap()
            .add(&include_c.compose(&project_c).unwrap())
            .unwrap();
        assert_eq!(assembled, one);

        assert_eq!(end_dim(&b.sum(&c).unwrap()).unwrap(), end_dim(&a).unwrap());
        assert_eq!(hom_dim_formal(&b, &c).unwrap(), 0);
        assert_eq!(hom_dim_formal(&a, &b).unwrap(), 1);
    }

    #[test]
    fn partition_shapes_are_validated() {
        assert!(matches!(young_symmetrizer(&[]), Err(Error::Argument(_))));
        assert!(matches!(
            young_symmetrizer(&[2, 3]),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            young_symmetrizer(&[2, 0]),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            young_symmetrizer(&[3, 3]),
            Err(Error::Resource(_))
        ));
        assert!(matches!(young_symmetrizer(&[6]), Err(Error::Resource(_))));
    }

    #[test]
    fn young_symmetrizers_are_idempotent_and_cut_hook_sized_ideals() {
        let cases: [(&[usize], usize); 14] = [
            (&[1], 1),
            (&[2], 1),
            (&[1, 1], 1),
            (&[3], 1),
            (&[2, 1], 2),
            (&[1, 1, 1], 1),
            (&[4], 1),
            (&[3, 1], 3),
            (&[2, 2], 2),
            (&[2, 1, 1], 3),
            (&[1, 1, 1, 1], 1),
            (&[5], 1),
            (&[3, 2], 5),
            (&[2, 2, 1], 5),
        ];
        for (lambda, dim) in cases {
            let f = young_symmetrizer(lambda).unwrap();
            assert!(f.is_idempotent(), "not idempotent for {lambda:?}");
            assert_eq!(hook_dimension(lambda).unwrap(), dim, "hooks for {lambda:?}");
            assert_eq!(f.ideal_dimension(), dim, "ideal size for {lambda:?}");
        }
    }

    #[test]
    fn the_smallest_symmetrizers_match_their_closed_forms() {
        let full = young_symmetrizer(&[2]).unwrap();
        assert_eq!(full.coeff(&[0, 1]), ratio(1, 2));
        assert_eq!(full.coeff(&[1, 0]), ratio(1, 2));

        let sign = young_symmetrizer(&[1, 1]).unwrap();
        assert_eq!(sign.coeff(&[0, 1]), ratio(1, 2));
        assert_eq!(sign.coeff(&[1, 0]), ratio(-1, 2));

        let hook = young_symmetrizer(&[2, 1]).unwrap();
        assert_eq!(hook.coeff(&[0, 1, 2]), ratio(1, 3));
        assert_eq!(hook.coeff(&[1, 0, 2]), ratio(1, 3));
        assert_eq!(hook.coeff(&[2, 1, 0]), ratio(-1, 3));
        assert_eq!(hook.coeff(&[2, 0, 1]), ratio(-1, 3));
        assert_eq!(hook.coeff(&[0, 2, 1]), int(0));
        assert_eq!(hook.coeff(&[1, 2, 0]), int(0));
    }

    #[test]
    fn permutations_act_by_gluing_slots() {
        let (cat, ctx) = deligne_symbolic();
        let obj = one_bracket(&cat, &ctx, 3);
        assert_eq!(
            sym_action(&[0, 1, 2], &obj).unwrap(),
            InterpMorphism::identity(&obj)
        );

        let perms: Vec<Vec<usize>> = (0..3).permutations(3).collect();
        for g in &perms {
            for h in &perms {
                let left = sym_action(g, &obj)
                    .unwrap()
                    .compose(&sym_action(h, &obj).unwrap())
                    .unwrap();
                assert_eq!(left, sym_action(&compose_perm(g, h), &obj).unwrap());
            }
        }

        let unit = BracketObject::unit(cat.clone(), ctx.clone());
        assert_eq!(
            sym_action(&[], &unit).unwrap(),
            InterpMorphism::identity(&unit)
        );

        assert!(matches!(
            sym_action(&[0, 0, 1], &obj),
            Err(Error::Argument(_))
        ));
        assert!(matches!(sym_action(&[0, 1], &obj), Err(Error::Argument(_))));

        let two_factors = obj.tensor(&obj).unwrap();
        assert!(matches!(
            sym_action(&[0, 1, 2, 3, 4, 5], &two_factors),
            Err(Error::Argument(_))
        ));

        let lines = Arc::new(ModuleCategory::graded_lines(2).unwrap());
        let mixed = BracketObject::bracket(
            lines,
            RankContext::Symbolic,
            vec![TensorWord::letter(0), TensorWord::letter(1)],
        );
        assert!(matches!(sym_action(&[1, 0], &mixed), Err(Error::Argument(_))));
    }

    #[test]
    fn symmetrizers_act_as_projectors_on_brackets() {
        let (cat, ctx) = deligne_symbolic();
        let obj = one_bracket(&cat, &ctx, 3);
        let e = young_symmetrizer(&[2, 1]).unwrap();
        let realized = e.action(&obj).unwrap();
        assert_eq!(realized.compose(&realized).unwrap(), realized);
        assert!(SymElement::zero(3).action(&obj).unwrap().is_zero());

        let group = Arc::new(ModuleCategory::group_algebra(&cyclic_group_table(2)).unwrap());
        let reg = BracketObject::bracket(
            group,
            RankContext::Symbolic,
            vec![TensorWord::letter(0), TensorWord::letter(0)],
        );
        let sgn = young_symmetrizer(&[1, 1]).unwrap();
        let swap = sgn.action(&reg).unwrap();
        assert_eq!(swap.compose(&swap).unwrap(), swap);

        assert!(matches!(
            SymElement::unit(2).multiply(&SymElement::unit(3)),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            SymElement::from_permutation(&[1, 1]),
            Err(Error::Argument(_))
        ));
    }
}
