//! Endomorphism algebras as structure-constant tables, and the analyses that
//! read off their shape: trace-form determinants, radicals, quotients by
//! two-sided ideals, group-algebra recognition, and simple-block counts.
//!
//! A table freezes a finite-dimensional associative unital algebra over the
//! coefficient ring of its rank context, so one type serves both the symbolic
//! tables (entries polynomial in t) and their specializations at a fixed
//! rational rank. The semisimplicity analyses need rational linear algebra and
//! therefore insist on a specialized table; everything else runs in either
//! context.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num::{BigInt, Integer, One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basecat::symmetric_group_table;
use crate::interp::{
    component_dims, filtration_span, from_double_bracket, hom_basis_morphisms, hom_recollements,
    compose_double_bracket, BracketObject, DoubleBracketMorphism, InterpMorphism,
};
use crate::karoubi::sym_action;
use crate::linalg::{express_in_span, Mat};
use crate::partitions::Recollement;
use crate::scalar::{int, lagrange_interpolate, RankContext, RankPolynomial, Rational, Scalar};
use crate::{Error, Result};

/// Tables up to this dimension have every associativity triple checked on
/// construction. The full sweep costs n⁵ coefficient products, so larger
/// tables are checked on a fixed pseudorandom sample of triples instead.
const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 16;
const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 200;

/// A finite-dimensional associative unital algebra, stored as structure
/// constants over a basis: e_i · e_j = Σ_k c_{ij}^k e_k.
///
/// Construction validates the unit laws against every basis element and
/// associativity per the sampling policy above; an inconsistent table is
/// rejected with a witness triple.
#[derive(Clone, PartialEq)]
pub struct AlgebraTable {
    context: RankContext,
    dim: usize,
    table: Vec<Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
    labels: Vec<String>,
}

impl AlgebraTable {
    pub fn new(
        context: RankContext,
        table: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
        labels: Vec<String>,
    ) -> Result<AlgebraTable> {
        let n = table.len();
        for row in &table {
            if row.len() != n {
                return Err(Error::Argument(format!(
                    "structure constants must form an n×n×n array; a row has {} entries for dimension {n}",
                    row.len()
                )));
            }
            for cell in row {
                if cell.len() != n {
                    return Err(Error::Argument(format!(
                        "structure constants must form an n×n×n array; a product has {} coordinates for dimension {n}",
                        cell.len()
                    )));
                }
                for s in cell {
                    if !context.admits(s) {
                        return Err(Error::Argument(
                            "a structure constant does not belong to the table's rank context"
                                .into(),
                        ));
                    }
                }
            }
        }
        if unit.len() != n {
            return Err(Error::Argument(format!(
                "the unit vector has {} coordinates for dimension {n}",
                unit.len()
            )));
        }
        if unit.iter().any(|s| !context.admits(s)) {
            return Err(Error::Argument(
                "a unit coordinate does not belong to the table's rank context".into(),
            ));
        }
        let labels = if labels.is_empty() {
            (0..n).map(|i| format!("e{i}")).collect()
        } else {
            if labels.len() != n {
                return Err(Error::Argument(format!(
                    "{} labels for dimension {n}",
                    labels.len()
                )));
            }
            labels
        };
        let out = AlgebraTable {
            context,
            dim: n,
            table,
            unit,
            labels,
        };
        out.validate()?;
        Ok(out)
    }

    /// The group algebra of a finite multiplication table: g_i · g_j is the
    /// single basis element table[i][j], and the two-sided identity element
    /// becomes the unit. The rank context is anchored at zero purely to fix ℚ
    /// as the coefficient ring; the constants never consult the rank.
    pub fn from_group_table(group: &[Vec<usize>]) -> Result<AlgebraTable> {
        let n = group.len();
        if n == 0 {
            return Err(Error::Argument("an empty multiplication table".into()));
        }
        for row in group {
            if row.len() != n {
                return Err(Error::Argument(
                    "the multiplication table is not square".into(),
                ));
            }
            if let Some(bad) = row.iter().find(|&&g| g >= n) {
                return Err(Error::Argument(format!(
                    "the multiplication table mentions element {bad} but has only {n} elements"
                )));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| group[e][g] == g && group[g][e] == g))
            .ok_or_else(|| {
                Error::Argument("the multiplication table has no identity element".into())
            })?;
        let context = RankContext::Specialized(int(0));
        let mut table = vec![vec![vec![context.zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j][group[i][j]] = context.one();
            }
        }
        let mut unit = vec![context.zero(); n];
        unit[identity] = context.one();
        let labels = (0..n).map(|g| format!("g{g}")).collect();
        AlgebraTable::new(context, table, unit, labels)
    }

    pub fn context(&self) -> &RankContext {
        &self.context
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self) -> &[Vec<Vec<Scalar>>] {
        &self.table
    }

    pub fn unit_coords(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.context.zero(); self.dim];
        v[i] = self.context.one();
        v
    }

    /// The product of two coordinate vectors.
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::Argument(format!(
                "coordinate vectors of lengths {} and {} in an algebra of dimension {}",
                x.len(),
                y.len(),
                self.dim
            )));
        }
        let mut out = vec![self.context.zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let row = self.mult_basis_vec(i, y);
            for (k, v) in row.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                out[k] = out[k].add(&xi.mul(v));
            }
        }
        Ok(out)
    }

    /// Evaluates every coefficient at a fixed rank. The specialized table is
    /// revalidated from scratch, since relations that hold identically in t
    /// cannot break, but the validation also guards against table corruption.
    pub fn specialize(&self, t0: &Rational) -> Result<AlgebraTable> {
        if !matches!(self.context, RankContext::Symbolic) {
            return Err(Error::Precondition(
                "only a symbolic table can be specialized".into(),
            ));
        }
        let context = RankContext::Specialized(t0.clone());
        let table = self
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        cell.iter()
                            .map(|s| Scalar::Specialized(eval_scalar(s, t0)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let unit = self
            .unit
            .iter()
            .map(|s| Scalar::Specialized(eval_scalar(s, t0)))
            .collect();
        AlgebraTable::new(context, table, unit, self.labels.clone())
    }

    /// e_i · y for a coordinate vector y.
    fn mult_basis_vec(&self, i: usize, y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.context.zero(); self.dim];
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (k, c) in self.table[i][j].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                out[k] = out[k].add(&yj.mul(c));
            }
        }
        out
    }

    /// x · e_j for a coordinate vector x.
    fn mult_vec_basis(&self, x: &[Scalar], j: usize) -> Vec<Scalar> {
        let mut out = vec![self.context.zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (k, c) in self.table[i][j].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                out[k] = out[k].add(&xi.mul(c));
            }
        }
        out
    }

    fn associates_at(&self, i: usize, j: usize, k: usize) -> bool {
        self.mult_vec_basis(&self.table[i][j], k) == self.mult_basis_vec(i, &self.table[j][k])
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.dim {
            let e = self.basis_vector(i);
            if self.mult_vec_basis(&self.unit, i) != e || self.mult_basis_vec(i, &self.unit) != e {
                return Err(Error::Argument(format!(
                    "the proposed unit is not a two-sided identity on {}",
                    self.labels[i]
                )));
            }
        }
        if self.dim <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    for k in 0..self.dim {
                        if !self.associates_at(i, j, k) {
                            return Err(Error::Argument(format!(
                                "associativity fails on ({}, {}, {})",
                                self.labels[i], self.labels[j], self.labels[k]
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
                let i = rng.gen_range(0..self.dim);
                let j = rng.gen_range(0..self.dim);
                let k = rng.gen_range(0..self.dim);
                if !self.associates_at(i, j, k) {
                    return Err(Error::Argument(format!(
                        "associativity fails on ({}, {}, {})",
                        self.labels[i], self.labels[j], self.labels[k]
                    )));
                }
            }
        }
        Ok(())
    }

    /// The structure constants as rationals, for the analyses that run plain
    /// linear algebra. Fails on a genuinely symbolic coefficient.
    fn rational_structure(&self) -> Result<Vec<Vec<Vec<Rational>>>> {
        self.table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        cell.iter()
                            .map(|s| {
                                constant_value(s).ok_or_else(|| {
                                    Error::Precondition(
                                        "this analysis needs constant structure coefficients; specialize the table first"
                                            .into(),
                                    )
                                })
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    fn rational_unit(&self) -> Result<Vec<Rational>> {
        self.unit
            .iter()
            .map(|s| {
                constant_value(s).ok_or_else(|| {
                    Error::Precondition("the unit has a nonconstant coordinate".into())
                })
            })
            .collect()
    }
}

impl fmt::Debug for AlgebraTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "algebra table of dimension {} ({})", self.dim, self.context)
    }
}

/// Which coordinate system an endomorphism table is written in: the plain
/// component basis, or the ⟨⟨·⟩⟩ basis whose leading terms are the same
/// components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndBasisKind {
    Bracket,
    DoubleBracket,
}

/// The endomorphism algebra of a bracket object as a structure-constant
/// table, in the requested coordinate system. Basis elements are indexed by
/// (recollement, coordinate) pairs in the canonical component order, so
/// coordinate vectors match the flattening of morphism components.
pub fn end_algebra(a: &BracketObject, basis: EndBasisKind) -> Result<AlgebraTable> {
    let context = a.context().clone();
    let recs = hom_recollements(a, a)?;
    let mut labels = Vec::new();
    for r in &recs {
        let d: usize = component_dims(a, a, r)?.iter().product();
        for k in 0..d {
            labels.push(format!("{:?}#{k}", r.blocks()));
        }
    }
    let n = labels.len();
    let mut table = Vec::with_capacity(n);
    let unit;
    match basis {
        EndBasisKind::Bracket => {
            let elems = hom_basis_morphisms(a, a)?;
            for ei in &elems {
                let mut row = Vec::with_capacity(n);
                for ej in &elems {
                    let prod = ei.compose(ej)?;
                    row.push(scalar_flatten(a, a, &recs, prod.components(), &context)?);
                }
                table.push(row);
            }
            let id = InterpMorphism::identity(a);
            unit = scalar_flatten(a, a, &recs, id.components(), &context)?;
        }
        EndBasisKind::DoubleBracket => {
            let mut elems = Vec::with_capacity(n);
            for r in &recs {
                let d: usize = component_dims(a, a, r)?.iter().product();
                for k in 0..d {
                    let mut coeffs = vec![context.zero(); d];
                    coeffs[k] = context.one();
                    elems.push(DoubleBracketMorphism::single(
                        a.clone(),
                        a.clone(),
                        r.clone(),
                        coeffs,
                    )?);
                }
            }
            for ei in &elems {
                let mut row = Vec::with_capacity(n);
                for ej in &elems {
                    let prod = compose_double_bracket(ei, ej)?;
                    row.push(scalar_flatten(a, a, &recs, prod.components(), &context)?);
                }
                table.push(row);
            }
            let id = crate::interp::to_double_bracket(&InterpMorphism::identity(a))?;
            unit = scalar_flatten(a, a, &recs, id.components(), &context)?;
        }
    }
    AlgebraTable::new(context, table, unit, labels)
}

/// The coordinate vectors of the block-count filtration layer ⟨⟨H^{≥d}⟩⟩
/// inside End(a), in the requested coordinate system. Each vector is a
/// rational combination of table basis elements, ready for the quotient
/// machinery.
pub fn filtration_ideal_coords(
    a: &BracketObject,
    basis: EndBasisKind,
    d: usize,
) -> Result<Vec<Vec<Rational>>> {
    let recs = hom_recollements(a, a)?;
    let span = filtration_span(a, a, d)?;
    let mut out = Vec::with_capacity(span.len());
    for m in &span {
        let flat = match basis {
            EndBasisKind::DoubleBracket => {
                scalar_flatten(a, a, &recs, m.components(), a.context())?
            }
            EndBasisKind::Bracket => {
                let phi = from_double_bracket(m)?;
                scalar_flatten(a, a, &recs, phi.components(), a.context())?
            }
        };
        let coords = flat
            .iter()
            .map(|s| {
                constant_value(s).ok_or_else(|| {
                    Error::Validation(
                        "a filtration basis vector has a nonconstant coordinate".into(),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(coords);
    }
    Ok(out)
}

/// Flattens sparse morphism components into a dense coordinate vector over
/// the canonical (recollement, coordinate) basis order.
fn scalar_flatten(
    src: &BracketObject,
    tgt: &BracketObject,
    recs: &[Recollement],
    components: &BTreeMap<Recollement, Vec<Scalar>>,
    context: &RankContext,
) -> Result<Vec<Scalar>> {
    let mut out = Vec::new();
    for r in recs {
        match components.get(r) {
            Some(v) => out.extend_from_slice(v),
            None => {
                let d: usize = component_dims(src, tgt, r)?.iter().product();
                out.extend(std::iter::repeat_with(|| context.zero()).take(d));
            }
        }
    }
    Ok(out)
}

fn eval_scalar(s: &Scalar, t0: &Rational) -> Rational {
    match s {
        Scalar::Symbolic(p) => p.eval(t0),
        Scalar::Specialized(c) => c.clone(),
    }
}

fn constant_value(s: &Scalar) -> Option<Rational> {
    match s {
        Scalar::Specialized(c) => Some(c.clone()),
        Scalar::Symbolic(p) => match p.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(p.coeffs()[0].clone()),
            Some(_) => None,
        },
    }
}

fn scalar_degree(s: &Scalar) -> usize {
    match s {
        Scalar::Symbolic(p) => p.degree().unwrap_or(0),
        Scalar::Specialized(_) => 0,
    }
}

/// The determinant of the trace form G_{ij} = tr(L_i L_j), computed from the
/// structure constants alone: G_{ij} = Σ_{l,k} c_{il}^k c_{jk}^l. Symbolic
/// tables get an exact polynomial, found by evaluating the determinant at
/// enough integer ranks and interpolating; its roots are the ranks where the
/// algebra degenerates.
pub fn gram_det(a: &AlgebraTable) -> Result<RankPolynomial> {
    let n = a.dim;
    if n == 0 {
        return Ok(RankPolynomial::one());
    }
    let mut gram = vec![vec![a.context.zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let mut acc = a.context.zero();
            for l in 0..n {
                for (k, c1) in a.table[i][l].iter().enumerate() {
                    if c1.is_zero() {
                        continue;
                    }
                    let c2 = &a.table[j][k][l];
                    if c2.is_zero() {
                        continue;
                    }
                    acc = acc.add(&c1.mul(c2));
                }
            }
            gram[i][j] = acc.clone();
            gram[j][i] = acc;
        }
    }
    let bound: usize = (0..n)
        .map(|i| (0..n).map(|j| scalar_degree(&gram[i][j])).max().unwrap_or(0))
        .sum();
    let points: Vec<(Rational, Rational)> = (0..=bound)
        .map(|s| {
            let t0 = int(s as i64);
            let m = Mat::from_fn(n, n, |i, j| eval_scalar(&gram[i][j], &t0));
            (t0, m.det())
        })
        .collect();
    lagrange_interpolate(&points)
}

/// All rational roots of a polynomial, sorted, found by the integer
/// divisor test on the cleared-denominator coefficients.
pub fn rational_roots(p: &RankPolynomial) -> Result<Vec<Rational>> {
    if p.is_zero() {
        return Err(Error::Argument(
            "every rational is a root of the zero polynomial".into(),
        ));
    }
    let coeffs = p.coeffs();
    let mut roots = Vec::new();
    let v = coeffs.iter().position(|c| !c.is_zero()).unwrap();
    if v > 0 {
        roots.push(int(0));
    }
    let reduced = &coeffs[v..];
    if reduced.len() > 1 {
        let mut lcm = BigInt::one();
        for c in reduced {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = reduced
            .iter()
            .map(|c| (c.numer() * &lcm) / c.denom())
            .collect();
        let p_divs = small_divisors(&ints[0])?;
        let q_divs = small_divisors(ints.last().unwrap())?;
        for pd in &p_divs {
            for qd in &q_divs {
                for sign in [1i64, -1] {
                    let cand = Rational::new(BigInt::from(sign) * pd, qd.clone());
                    if p.eval(&cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Positive divisors of a nonzero integer, by trial division. The scan caps
/// out once the integer no longer fits the supported range.
fn small_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let v = u128::try_from(n.abs()).map_err(|_| {
        Error::Resource("a coefficient in the rational root scan is out of range".into())
    })?;
    if v == 0 || v > 1_000_000_000_000 {
        return Err(Error::Resource(
            "a coefficient in the rational root scan is out of range".into(),
        ));
    }
    let mut out = Vec::new();
    let mut d = 1u128;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            out.push(BigInt::from(v / d));
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// z · y over rational structure constants.
fn structure_multiply(c: &[Vec<Vec<Rational>>], x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let n = c.len();
    let mut out = vec![Rational::zero(); n];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let w = xi * yj;
            for (k, ck) in c[i][j].iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                out[k] += &w * ck;
            }
        }
    }
    out
}

/// A basis of the radical at a specialized rank: the nullspace of the trace
/// form. The result is double-checked structurally, by verifying that the
/// nullspace is closed under multiplication by every basis element and that
/// each generator is nilpotent.
pub fn radical(a: &AlgebraTable) -> Result<Vec<Vec<Rational>>> {
    if !matches!(a.context, RankContext::Specialized(_)) {
        return Err(Error::Precondition(
            "the radical analysis runs at a specialized rank".into(),
        ));
    }
    if a.dim == 0 {
        return Ok(Vec::new());
    }
    let c = a.rational_structure()?;
    let n = a.dim;
    let gram = Mat::from_fn(n, n, |i, j| {
        let mut acc = Rational::zero();
        for l in 0..n {
            for (k, c1) in c[i][l].iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                let c2 = &c[j][k][l];
                if c2.is_zero() {
                    continue;
                }
                acc += c1 * c2;
            }
        }
        acc
    });
    let null = gram.nullspace();
    if null.is_empty() {
        return Ok(null);
    }
    let (rows, pivots) = reduced_rows(&null);
    for v in &null {
        for i in 0..n {
            let left = structure_multiply(&c, &a.rational_basis(i), v);
            let right = structure_multiply(&c, v, &a.rational_basis(i));
            for w in [left, right] {
                let mut rem = w;
                reduce_rational(&rows, &pivots, &mut rem);
                if rem.iter().any(|x| !x.is_zero()) {
                    return Err(Error::Validation(
                        "the trace-form nullspace is not closed under multiplication".into(),
                    ));
                }
            }
        }
    }
    for v in &null {
        let mut w = v.clone();
        let mut vanished = false;
        for _ in 0..=n {
            if w.iter().all(|x| x.is_zero()) {
                vanished = true;
                break;
            }
            w = structure_multiply(&c, &w, v);
        }
        if !vanished {
            return Err(Error::Validation(
                "a trace-form null vector is not nilpotent".into(),
            ));
        }
    }
    Ok(null)
}

impl AlgebraTable {
    fn rational_basis(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }
}

/// Row-reduces a family of rational vectors; returns the nonzero echelon rows
/// and their pivot columns.
fn reduced_rows(vectors: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    if vectors.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let (r, pivots) = Mat::from_rows(vectors.to_vec()).rref();
    let rows = (0..pivots.len())
        .map(|i| (0..r.cols()).map(|j| r.at(i, j).clone()).collect())
        .collect();
    (rows, pivots)
}

fn reduce_rational(rows: &[Vec<Rational>], pivots: &[usize], w: &mut [Rational]) {
    for (row, &p) in rows.iter().zip(pivots) {
        let coeff = w[p].clone();
        if coeff.is_zero() {
            continue;
        }
        for (k, rv) in row.iter().enumerate() {
            if rv.is_zero() {
                continue;
            }
            w[k] -= &coeff * rv;
        }
    }
}

fn reduce_scalars(rows: &[Vec<Rational>], pivots: &[usize], w: &mut [Scalar]) {
    for (row, &p) in rows.iter().zip(pivots) {
        let coeff = w[p].clone();
        if coeff.is_zero() {
            continue;
        }
        for (k, rv) in row.iter().enumerate() {
            if rv.is_zero() {
                continue;
            }
            w[k] = w[k].sub(&coeff.scale(rv));
        }
    }
}

/// A quotient A/I by a two-sided ideal, carrying the reduced ideal basis and
/// the projection onto the surviving basis classes.
#[derive(Clone, Debug)]
pub struct Quotient {
    table: AlgebraTable,
    ambient_dim: usize,
    ideal_rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    kept: Vec<usize>,
}

impl Quotient {
    pub fn table(&self) -> &AlgebraTable {
        &self.table
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn ideal_dimension(&self) -> usize {
        self.ideal_rows.len()
    }

    /// Ambient basis indices whose classes form the quotient basis.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    /// The class of an ambient coordinate vector, in quotient coordinates.
    pub fn project(&self, w: &[Scalar]) -> Result<Vec<Scalar>> {
        if w.len() != self.ambient_dim {
            return Err(Error::Argument(format!(
                "a vector of length {} in an ambient algebra of dimension {}",
                w.len(),
                self.ambient_dim
            )));
        }
        let mut rem = w.to_vec();
        reduce_scalars(&self.ideal_rows, &self.pivots, &mut rem);
        Ok(self.kept.iter().map(|&k| rem[k].clone()).collect())
    }
}

/// Quotients a table by the span of the given vectors, first verifying that
/// the span is a two-sided ideal; a product that escapes the span is reported
/// with its witness pair. The quotient table is rebuilt on the surviving
/// basis classes and revalidated.
pub fn quotient_by_ideal(a: &AlgebraTable, ideal: &[Vec<Rational>]) -> Result<Quotient> {
    for v in ideal {
        if v.len() != a.dim {
            return Err(Error::Argument(format!(
                "an ideal vector of length {} in an algebra of dimension {}",
                v.len(),
                a.dim
            )));
        }
    }
    let (ideal_rows, pivots) = reduced_rows(ideal);
    for i in 0..a.dim {
        for (vi, v) in ideal_rows.iter().enumerate() {
            let lifted: Vec<Scalar> = v.iter().map(|c| a.context.constant(c.clone())).collect();
            let products = [
                ("left", a.mult_basis_vec(i, &lifted)),
                ("right", a.mult_vec_basis(&lifted, i)),
            ];
            for (side, prod) in products {
                let mut rem = prod;
                reduce_scalars(&ideal_rows, &pivots, &mut rem);
                if rem.iter().any(|s| !s.is_zero()) {
                    return Err(Error::Argument(format!(
                        "the span is not a two-sided ideal: {} multiplication by {} sends ideal row {} outside the span",
                        side, a.labels[i], vi
                    )));
                }
            }
        }
    }
    let kept: Vec<usize> = (0..a.dim).filter(|k| !pivots.contains(k)).collect();
    let mut qtable = Vec::with_capacity(kept.len());
    for &ka in &kept {
        let mut row = Vec::with_capacity(kept.len());
        for &kb in &kept {
            let mut prod = a.table[ka][kb].clone();
            reduce_scalars(&ideal_rows, &pivots, &mut prod);
            row.push(kept.iter().map(|&k| prod[k].clone()).collect::<Vec<_>>());
        }
        qtable.push(row);
    }
    let mut qunit = a.unit.clone();
    reduce_scalars(&ideal_rows, &pivots, &mut qunit);
    let qunit: Vec<Scalar> = kept.iter().map(|&k| qunit[k].clone()).collect();
    let qlabels = kept.iter().map(|&k| format!("[{}]", a.labels[k])).collect();
    let table = AlgebraTable::new(a.context.clone(), qtable, qunit, qlabels)?;
    Ok(Quotient {
        table,
        ambient_dim: a.dim,
        ideal_rows,
        pivots,
        kept,
    })
}

/// The outcome of matching a quotient of End(a) against the symmetric group
/// algebra on the bracket's slots: do the permutation actions span the
/// quotient, and do their classes multiply by the group table?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupIsoReport {
    pub group_order: usize,
    pub quotient_dim: usize,
    pub spans: bool,
    pub multiplies: bool,
}

impl GroupIsoReport {
    pub fn passed(&self) -> bool {
        self.spans && self.multiplies && self.group_order == self.quotient_dim
    }
}

impl fmt::Display for GroupIsoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "group of order {} against a quotient of dimension {}: images {}, products {}; {}",
            self.group_order,
            self.quotient_dim,
            if self.spans { "span" } else { "do not span" },
            if self.multiplies {
                "follow the group table"
            } else {
                "break the group table"
            },
            if self.passed() {
                "the quotient is the group algebra"
            } else {
                "the quotient is not the group algebra"
            }
        )
    }
}

/// Projects every slot permutation of the bracket into the quotient and
/// checks the group algebra laws there: spanning, and multiplication matching
/// the symmetric group table.
pub fn group_algebra_iso_check(q: &Quotient, a: &BracketObject) -> Result<GroupIsoReport> {
    let m = a.total_size();
    let group = symmetric_group_table(m);
    let recs = hom_recollements(a, a)?;
    let perms: Vec<Vec<usize>> = (0..m).permutations(m).collect();
    let mut images = Vec::with_capacity(perms.len());
    for g in &perms {
        let act = sym_action(g, a)?;
        let flat = scalar_flatten(a, a, &recs, act.components(), a.context())?;
        if flat.len() != q.ambient_dim {
            return Err(Error::Argument(
                "the quotient was not built over this object's endomorphism algebra".into(),
            ));
        }
        images.push(q.project(&flat)?);
    }
    let rows: Vec<Vec<Rational>> = images
        .iter()
        .map(|im| {
            im.iter()
                .map(|s| {
                    constant_value(s).ok_or_else(|| {
                        Error::Validation(
                            "a permutation image has a nonconstant coordinate".into(),
                        )
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let spans = Mat::from_rows(rows).rank() == q.table.dim();
    let mut multiplies = true;
    'outer: for gi in 0..perms.len() {
        for gj in 0..perms.len() {
            let prod = q.table.multiply(&images[gi], &images[gj])?;
            if prod != images[group[gi][gj]] {
                multiplies = false;
                break 'outer;
            }
        }
    }
    Ok(GroupIsoReport {
        group_order: perms.len(),
        quotient_dim: q.table.dim(),
        spans,
        multiplies,
    })
}

/// One simple block of a semisimple algebra. A block whose central character
/// is rational always has square dimension; `matrix_size` is its reduced
/// degree. Center factors with irrational spectrum are aggregated into a
/// single block with `matrix_size: None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleBlock {
    pub dimension: usize,
    pub matrix_size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplesReport {
    pub blocks: Vec<SimpleBlock>,
}

impl SimplesReport {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn total_dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.dimension).sum()
    }

    pub fn is_split(&self) -> bool {
        self.blocks.iter().all(|b| b.matrix_size.is_some())
    }

    /// Matrix sizes of the blocks, when every block split.
    pub fn matrix_sizes(&self) -> Option<Vec<usize>> {
        self.blocks.iter().map(|b| b.matrix_size).collect()
    }
}

impl fmt::Display for SimplesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "no simple blocks (the zero algebra)");
        }
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| match b.matrix_size {
                Some(s) => format!("M{s}"),
                None => format!("a non-split block of dimension {}", b.dimension),
            })
            .collect();
        write!(
            f,
            "{} simple block{}: {}",
            self.blocks.len(),
            if self.blocks.len() == 1 { "" } else { "s" },
            parts.join(" + ")
        )
    }
}

/// Decomposes a semisimple specialized algebra into simple blocks through its
/// center: the partition of unity is refined along each center basis
/// direction in turn, splitting off one central idempotent per rational
/// eigenvalue by Lagrange interpolation. A part on which every central
/// element acts by a rational scalar is one split block; what remains has
/// irrational central spectrum and is reported as a single aggregate block,
/// without attempting to separate conjugate factors.
pub fn count_simples(a: &AlgebraTable) -> Result<SimplesReport> {
    let rad = radical(a)?;
    if !rad.is_empty() {
        return Err(Error::Precondition(
            "the algebra has a nonzero radical; quotient it out first".into(),
        ));
    }
    let n = a.dim;
    if n == 0 {
        return Ok(SimplesReport { blocks: Vec::new() });
    }
    let c = a.rational_structure()?;
    let unit = a.rational_unit()?;
    let center = primitive_rows(center_basis(&c));
    // Refine the partition of unity along one center basis direction at a
    // time. Restricting to a part before extracting roots keeps the minimal
    // polynomials small, both in degree and in coefficient size.
    let mut parts: Vec<Vec<Rational>> = vec![unit.clone()];
    let mut changed = true;
    while changed {
        changed = false;
        'refine: for cb in &center {
            for pi in 0..parts.len() {
                let e = parts[pi].clone();
                let w = structure_multiply(&c, cb, &e);
                let minp = min_poly(&c, &e, &w)?;
                if minp.degree() == Some(1) {
                    continue;
                }
                let roots = rational_roots(&minp)?;
                if roots.is_empty() {
                    continue;
                }
                let mut pieces = Vec::new();
                let mut rest = e.clone();
                for lam in &roots {
                    let linear =
                        RankPolynomial::from_coeffs(vec![-lam.clone(), Rational::one()]);
                    let (cofactor, rem) = minp.divrem(&linear)?;
                    if !rem.is_zero() {
                        return Err(Error::Validation(
                            "a computed root fails to divide the minimal polynomial".into(),
                        ));
                    }
                    let scale = cofactor.eval(lam);
                    if scale.is_zero() {
                        return Err(Error::Validation(
                            "a repeated central eigenvalue at a semisimple rank".into(),
                        ));
                    }
                    let mut piece = apply_poly(&c, &e, &w, &cofactor);
                    for x in &mut piece {
                        *x /= &scale;
                    }
                    for (rk, pk) in rest.iter_mut().zip(&piece) {
                        *rk -= pk;
                    }
                    pieces.push(piece);
                }
                if rest.iter().any(|x| !x.is_zero()) {
                    pieces.push(rest);
                }
                if pieces.len() > 1 {
                    parts.swap_remove(pi);
                    parts.extend(pieces);
                    changed = true;
                    break 'refine;
                }
            }
        }
    }
    for (i, ei) in parts.iter().enumerate() {
        for (j, ej) in parts.iter().enumerate() {
            let prod = structure_multiply(&c, ei, ej);
            let expected: Vec<Rational> = if i == j {
                ei.clone()
            } else {
                vec![Rational::zero(); n]
            };
            if prod != expected {
                return Err(Error::Validation(
                    "the central idempotents are not orthogonal".into(),
                ));
            }
        }
    }
    let mut total = vec![Rational::zero(); n];
    for e in &parts {
        for (tk, ek) in total.iter_mut().zip(e) {
            *tk += ek;
        }
    }
    if total != unit {
        return Err(Error::Validation(
            "the central idempotents do not sum to the unit".into(),
        ));
    }
    let mut blocks = Vec::new();
    for e in &parts {
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|k| structure_multiply(&c, e, &a.rational_basis(k)))
            .collect();
        let dimension = Mat::from_rows(rows).rank();
        let central_rows: Vec<Vec<Rational>> = center
            .iter()
            .map(|cb| structure_multiply(&c, cb, e))
            .collect();
        let split = Mat::from_rows(central_rows).rank() == 1;
        let matrix_size = if split {
            match exact_square_root(dimension) {
                Some(s) => Some(s),
                None => {
                    return Err(Error::Validation(
                        "a split block has non-square dimension".into(),
                    ));
                }
            }
        } else {
            None
        };
        blocks.push(SimpleBlock {
            dimension,
            matrix_size,
        });
    }
    if blocks.iter().map(|b| b.dimension).sum::<usize>() != n {
        return Err(Error::Validation(
            "the block dimensions do not add up to the algebra dimension".into(),
        ));
    }
    blocks.sort_by_key(|b| (b.dimension, b.matrix_size.unwrap_or(usize::MAX)));
    Ok(SimplesReport { blocks })
}

/// Rescales each vector to primitive integer entries, which keeps later
/// minimal-polynomial coefficients within the root scan's range.
fn primitive_rows(rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    rows.into_iter()
        .map(|v| {
            let mut lcm = BigInt::one();
            for x in &v {
                lcm = lcm.lcm(x.denom());
            }
            let ints: Vec<BigInt> = v.iter().map(|x| (x.numer() * &lcm) / x.denom()).collect();
            let mut g = BigInt::zero();
            for x in &ints {
                g = g.gcd(x);
            }
            if g.is_zero() {
                return v;
            }
            ints.iter()
                .map(|x| Rational::from_integer(x / &g))
                .collect()
        })
        .collect()
}

/// Solves z e_i = e_i z for all i: the nullspace of the stacked commutator
/// constraints Σ_j z_j (c_{ji}^k − c_{ij}^k) = 0.
fn center_basis(c: &[Vec<Vec<Rational>>]) -> Vec<Vec<Rational>> {
    let n = c.len();
    Mat::from_fn(n * n, n, |row, j| {
        let i = row / n;
        let k = row % n;
        &c[j][i][k] - &c[i][j][k]
    })
    .nullspace()
}

/// The monic minimal polynomial of z: powers of z are accumulated until one
/// falls into the span of its predecessors.
fn min_poly(
    c: &[Vec<Vec<Rational>>],
    unit: &[Rational],
    z: &[Rational],
) -> Result<RankPolynomial> {
    let n = unit.len();
    let mut powers: Vec<Vec<Rational>> = vec![unit.to_vec()];
    loop {
        let next = structure_multiply(c, powers.last().unwrap(), z);
        let span: Vec<Mat> = powers
            .iter()
            .map(|v| Mat::from_rows(vec![v.clone()]))
            .collect();
        if let Some(alpha) = express_in_span(&span, &Mat::from_rows(vec![next.clone()])) {
            let mut coeffs: Vec<Rational> = alpha.iter().map(|a| -a.clone()).collect();
            coeffs.push(Rational::one());
            return Ok(RankPolynomial::from_coeffs(coeffs));
        }
        powers.push(next);
        if powers.len() > n + 1 {
            return Err(Error::Validation(
                "the power sequence of a central element escaped its own span".into(),
            ));
        }
    }
}

/// p(z) by Horner's rule in the algebra.
fn apply_poly(
    c: &[Vec<Vec<Rational>>],
    unit: &[Rational],
    z: &[Rational],
    p: &RankPolynomial,
) -> Vec<Rational> {
    let n = unit.len();
    let mut acc = vec![Rational::zero(); n];
    for coeff in p.coeffs().iter().rev() {
        acc = structure_multiply(c, &acc, z);
        for (ak, uk) in acc.iter_mut().zip(unit) {
            *ak += coeff * uk;
        }
    }
    acc
}

fn exact_square_root(d: usize) -> Option<usize> {
    let mut s = 0usize;
    while s * s < d {
        s += 1;
    }
    (s * s == d).then_some(s)
}

/// What the block analysis can certify about locality. A residue of dimension
/// one is certainly local; two or more blocks certainly are not. A single
/// non-trivial block stays inconclusive: the rational analysis cannot tell a
/// matrix algebra (not local) from a division algebra (local).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Locality {
    Local,
    NotLocal,
    Inconclusive,
}

impl fmt::Display for Locality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locality::Local => write!(f, "local"),
            Locality::NotLocal => write!(f, "not local"),
            Locality::Inconclusive => write!(f, "inconclusive: one non-trivial block"),
        }
    }
}

/// Tests locality at a specialized rank by passing to the semisimple quotient
/// and counting its blocks.
pub fn is_local(a: &AlgebraTable) -> Result<Locality> {
    let rad = radical(a)?;
    let residue;
    let semis = if rad.is_empty() {
        a
    } else {
        residue = quotient_by_ideal(a, &rad)?;
        residue.table()
    };
    if semis.dim() == 1 {
        return Ok(Locality::Local);
    }
    let simples = count_simples(semis)?;
    match simples.block_count() {
        0 | 1 if semis.dim() == 0 => Ok(Locality::NotLocal),
        1 => Ok(Locality::Inconclusive),
        _ => Ok(Locality::NotLocal),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::basecat::{cyclic_group_table, ModuleCategory, TensorWord};
    use crate::interp::tests::{deligne_symbolic, one_bracket};
    use crate::scalar::ratio;

    fn anchored() -> RankContext {
        RankContext::Specialized(int(0))
    }

    #[test]
    fn tables_reject_broken_units_and_associativity() {
        let ctx = anchored();
        // ℤ/2 structure constants, but with the wrong element declared as unit.
        let flip = AlgebraTable::from_group_table(&cyclic_group_table(2)).unwrap();
        let bad_unit = AlgebraTable::new(
            ctx.clone(),
            flip.structure().to_vec(),
            flip.basis_vector(1),
            Vec::new(),
        );
        assert!(matches!(bad_unit, Err(Error::Argument(m)) if m.contains("unit")));

        // e1·e1 = e2, e1·e2 = e0, e2·e1 = 0 breaks (e1 e1) e1 = e1 (e1 e1).
        let n = 3;
        let mut table = vec![vec![vec![ctx.zero(); n]; n]; n];
        for i in 0..n {
            table[0][i][i] = ctx.one();
            table[i][0][i] = ctx.one();
        }
        table[1][1][2] = ctx.one();
        table[1][2][0] = ctx.one();
        let mut unit = vec![ctx.zero(); n];
        unit[0] = ctx.one();
        let bad = AlgebraTable::new(ctx.clone(), table, unit, Vec::new());
        assert!(matches!(bad, Err(Error::Argument(m)) if m.contains("associativity")));

        // Shape mismatches are caught before any law is checked.
        let ragged = AlgebraTable::new(
            ctx.clone(),
            vec![vec![vec![ctx.one()]]],
            vec![ctx.one(), ctx.zero()],
            Vec::new(),
        );
        assert!(matches!(ragged, Err(Error::Argument(_))));

        // A scalar from the wrong context is rejected.
        let mixed = AlgebraTable::new(
            ctx,
            vec![vec![vec![Scalar::Symbolic(RankPolynomial::one())]]],
            vec![Scalar::Specialized(int(1))],
            Vec::new(),
        );
        assert!(matches!(mixed, Err(Error::Argument(_))));

        // Multiplication tables without an identity element are refused.
        let no_id = AlgebraTable::from_group_table(&[vec![0, 0], vec![0, 0]]);
        assert!(matches!(no_id, Err(Error::Argument(m)) if m.contains("identity")));
    }

    #[test]
    fn end_algebra_dimensions_match_the_bracket_homs() {
        let (cat, ctx) = deligne_symbolic();
        let empty = crate::interp::BracketObject::unit(cat.clone(), ctx.clone());
        for kind in [EndBasisKind::Bracket, EndBasisKind::DoubleBracket] {
            assert_eq!(end_algebra(&empty, kind).unwrap().dim(), 1);
            assert_eq!(end_algebra(&one_bracket(&cat, &ctx, 1), kind).unwrap().dim(), 2);
            assert_eq!(end_algebra(&one_bracket(&cat, &ctx, 2), kind).unwrap().dim(), 7);
        }
        let a = end_algebra(&one_bracket(&cat, &ctx, 2), EndBasisKind::Bracket).unwrap();
        let u = a.unit_coords().to_vec();
        assert_eq!(a.multiply(&u, &u).unwrap(), u);
    }

    #[test]
    fn the_double_bracket_generator_squares_to_t_times_itself() {
        let (cat, ctx) = deligne_symbolic();
        let obj = one_bracket(&cat, &ctx, 1);
        let a = end_algebra(&obj, EndBasisKind::DoubleBracket).unwrap();
        let recs = hom_recollements(&obj, &obj).unwrap();
        let mut offset = 0;
        let mut split = None;
        for r in &recs {
            let d: usize = component_dims(&obj, &obj, r).unwrap().iter().product();
            if r.block_count() == 2 {
                split = Some(offset);
            }
            offset += d;
        }
        let u = a.basis_vector(split.unwrap());
        let square = a.multiply(&u, &u).unwrap();
        let expected: Vec<Scalar> = u.iter().map(|s| s.mul(&ctx.rank())).collect();
        assert_eq!(square, expected);
    }

    #[test]
    fn gram_determinants_vanish_only_at_natural_ranks() {
        let (cat, ctx) = deligne_symbolic();
        let a1 = end_algebra(&one_bracket(&cat, &ctx, 1), EndBasisKind::Bracket).unwrap();
        let d1 = gram_det(&a1).unwrap();
        // By hand: G = [[2, t−2], [t−2, t²−2t+2]], whose determinant is t².
        assert_eq!(
            d1,
            RankPolynomial::from_coeffs(vec![int(0), int(0), int(1)])
        );
        assert_eq!(rational_roots(&d1).unwrap(), vec![int(0)]);

        let a2 = end_algebra(&one_bracket(&cat, &ctx, 2), EndBasisKind::Bracket).unwrap();
        let d2 = gram_det(&a2).unwrap();
        assert!(!d2.is_zero());
        let roots = rational_roots(&d2).unwrap();
        assert!(!roots.is_empty());
        for r in &roots {
            assert!(r.is_integer() && *r >= int(0), "non-natural root {r}");
        }
    }

    #[test]
    fn radical_scan_agrees_with_the_gram_roots() {
        let (cat, ctx) = deligne_symbolic();
        let a = end_algebra(&one_bracket(&cat, &ctx, 2), EndBasisKind::Bracket).unwrap();
        let det = gram_det(&a).unwrap();
        let mut degenerate = Vec::new();
        for t0 in 0..=6 {
            let at = a.specialize(&int(t0)).unwrap();
            let rad = radical(&at).unwrap();
            assert_eq!(
                rad.is_empty(),
                !det.eval(&int(t0)).is_zero(),
                "radical and trace form disagree at t = {t0}"
            );
            if !rad.is_empty() {
                degenerate.push(t0);
            }
        }
        assert!(degenerate.iter().any(|t0| (0..=3).contains(t0)));
        assert!(radical(&a.specialize(&ratio(7, 2)).unwrap()).unwrap().is_empty());
        // ℚ[S₂] is semisimple in characteristic zero.
        let s2 = AlgebraTable::from_group_table(&symmetric_group_table(2)).unwrap();
        assert!(radical(&s2).unwrap().is_empty());
    }

    #[test]
    fn filtration_spans_are_two_sided_ideals() {
        let (cat, ctx) = deligne_symbolic();
        let obj1 = one_bracket(&cat, &ctx, 1);
        for kind in [EndBasisKind::Bracket, EndBasisKind::DoubleBracket] {
            let a = end_algebra(&obj1, kind).unwrap();
            for (d, expected) in [(0, 0), (1, 0), (2, 1), (3, 2)] {
                let ideal = filtration_ideal_coords(&obj1, kind, d).unwrap();
                let q = quotient_by_ideal(&a, &ideal).unwrap();
                assert_eq!(q.table().dim(), expected, "slots 1, layer {d}");
                if d == 3 {
                    // The zero ideal changes nothing but the class labels.
                    assert_eq!(q.table().structure(), a.structure());
                    assert_eq!(q.table().unit_coords(), a.unit_coords());
                }
            }
        }
        let obj2 = one_bracket(&cat, &ctx, 2);
        let a2 = end_algebra(&obj2, EndBasisKind::Bracket).unwrap();
        for (d, expected) in [(0, 0), (2, 0), (3, 2), (4, 6), (5, 7)] {
            let ideal = filtration_ideal_coords(&obj2, EndBasisKind::Bracket, d).unwrap();
            let q = quotient_by_ideal(&a2, &ideal).unwrap();
            assert_eq!(q.table().dim(), expected, "slots 2, layer {d}");
        }
        // The span of the identity alone is not an ideal.
        let a1 = end_algebra(&obj1, EndBasisKind::Bracket).unwrap();
        let unit: Vec<Rational> = a1
            .unit_coords()
            .iter()
            .map(|s| constant_value(s).unwrap())
            .collect();
        let not_ideal = quotient_by_ideal(&a1, &[unit]);
        assert!(matches!(not_ideal, Err(Error::Argument(m)) if m.contains("two-sided")));
    }

    #[test]
    fn top_filtration_quotients_are_group_algebras() {
        let (cat, ctx) = deligne_symbolic();
        for m in 1..=2usize {
            let obj = one_bracket(&cat, &ctx, m);
            let a = end_algebra(&obj, EndBasisKind::Bracket).unwrap();
            let ideal = filtration_ideal_coords(&obj, EndBasisKind::Bracket, m + 1).unwrap();
            let q = quotient_by_ideal(&a, &ideal).unwrap();
            let report = group_algebra_iso_check(&q, &obj).unwrap();
            assert!(report.passed(), "slots {m}: {report}");
            assert_eq!(report.group_order, (1..=m).product::<usize>());
        }
        // A quotient of the wrong endomorphism algebra is rejected.
        let obj2 = one_bracket(&cat, &ctx, 2);
        let a2 = end_algebra(&obj2, EndBasisKind::Bracket).unwrap();
        let ideal = filtration_ideal_coords(&obj2, EndBasisKind::Bracket, 3).unwrap();
        let q2 = quotient_by_ideal(&a2, &ideal).unwrap();
        let mismatch = group_algebra_iso_check(&q2, &one_bracket(&cat, &ctx, 1));
        assert!(matches!(mismatch, Err(Error::Argument(_))));
    }

    #[test]
    fn three_slot_filtration_quotients_and_blocks() {
        let (cat, ctx) = deligne_symbolic();
        let obj = one_bracket(&cat, &ctx, 3);
        let a = end_algebra(&obj, EndBasisKind::Bracket).unwrap();
        assert_eq!(a.dim(), 34);
        for (d, expected) in [(3, 0), (4, 6), (5, 24), (6, 33)] {
            let ideal = filtration_ideal_coords(&obj, EndBasisKind::Bracket, d).unwrap();
            let q = quotient_by_ideal(&a, &ideal).unwrap();
            assert_eq!(q.table().dim(), expected, "layer {d}");
            if d == 4 {
                let report = group_algebra_iso_check(&q, &obj).unwrap();
                assert!(report.passed(), "{report}");
                assert_eq!(report.group_order, 6);
            }
        }
        let at = a.specialize(&ratio(7, 2)).unwrap();
        let simples = count_simples(&at).unwrap();
        assert_eq!(simples.block_count(), 7);
        assert_eq!(simples.matrix_sizes(), Some(vec![1, 1, 1, 2, 3, 3, 3]));
        assert_eq!(simples.total_dimension(), 34);
    }

    #[test]
    fn group_algebra_simples_split_into_matrix_blocks() {
        let s3 = AlgebraTable::from_group_table(&symmetric_group_table(3)).unwrap();
        let report = count_simples(&s3).unwrap();
        assert_eq!(report.matrix_sizes(), Some(vec![1, 1, 2]));
        assert_eq!(report.total_dimension(), 6);

        let z2 = AlgebraTable::from_group_table(&cyclic_group_table(2)).unwrap();
        assert_eq!(count_simples(&z2).unwrap().matrix_sizes(), Some(vec![1, 1]));

        let trivial = AlgebraTable::from_group_table(&cyclic_group_table(1)).unwrap();
        assert_eq!(count_simples(&trivial).unwrap().matrix_sizes(), Some(vec![1]));
    }

    #[test]
    fn specialized_end_algebras_count_their_simple_blocks() {
        let cat = Arc::new(ModuleCategory::trivial());
        let at_rank = RankContext::Specialized(ratio(7, 2));
        let a1 = end_algebra(&one_bracket(&cat, &at_rank, 1), EndBasisKind::Bracket).unwrap();
        assert_eq!(count_simples(&a1).unwrap().matrix_sizes(), Some(vec![1, 1]));

        let (_, sym) = deligne_symbolic();
        let a2 = end_algebra(&one_bracket(&cat, &sym, 2), EndBasisKind::Bracket)
            .unwrap()
            .specialize(&ratio(7, 2))
            .unwrap();
        let report = count_simples(&a2).unwrap();
        assert_eq!(report.block_count(), 4);
        assert_eq!(report.matrix_sizes(), Some(vec![1, 1, 1, 2]));
        assert_eq!(report.total_dimension(), 7);
        assert_eq!(format!("{report}"), "4 simple blocks: M1 + M1 + M1 + M2");

        // At a degenerate rank the radical obstructs the analysis.
        let degenerate = RankContext::Specialized(int(0));
        let a0 = end_algebra(&one_bracket(&cat, &degenerate, 1), EndBasisKind::Bracket).unwrap();
        assert!(matches!(count_simples(&a0), Err(Error::Precondition(_))));
    }

    #[test]
    fn an_irrational_spectrum_reports_a_non_split_block() {
        // ℚ(√2) as a table: basis {1, s} with s² = 2.
        let ctx = anchored();
        let n = 2;
        let mut table = vec![vec![vec![ctx.zero(); n]; n]; n];
        table[0][0][0] = ctx.one();
        table[0][1][1] = ctx.one();
        table[1][0][1] = ctx.one();
        table[1][1][0] = ctx.constant(int(2));
        let mut unit = vec![ctx.zero(); n];
        unit[0] = ctx.one();
        let a = AlgebraTable::new(ctx, table, unit, vec!["1".into(), "s".into()]).unwrap();
        assert!(radical(&a).unwrap().is_empty());
        let report = count_simples(&a).unwrap();
        assert_eq!(report.block_count(), 1);
        assert_eq!(report.blocks[0].dimension, 2);
        assert_eq!(report.blocks[0].matrix_size, None);
        assert!(!report.is_split());
        assert!(format!("{report}").contains("non-split"));
        assert_eq!(is_local(&a).unwrap(), Locality::Inconclusive);
    }

    #[test]
    fn locality_of_small_algebras() {
        let trivial = AlgebraTable::from_group_table(&cyclic_group_table(1)).unwrap();
        assert_eq!(is_local(&trivial).unwrap(), Locality::Local);

        // ℚ[ℤ/2] ≅ ℚ × ℚ splits, so it is not local.
        let z2 = AlgebraTable::from_group_table(&cyclic_group_table(2)).unwrap();
        assert_eq!(is_local(&z2).unwrap(), Locality::NotLocal);

        let cat = Arc::new(ModuleCategory::trivial());
        let semisimple = RankContext::Specialized(ratio(7, 2));
        let a = end_algebra(&one_bracket(&cat, &semisimple, 1), EndBasisKind::Bracket).unwrap();
        assert_eq!(is_local(&a).unwrap(), Locality::NotLocal);

        // At rank zero the two-dimensional algebra is unipotent: its radical
        // is the line through id + x and the residue is one-dimensional.
        let degenerate = RankContext::Specialized(int(0));
        let a0 = end_algebra(&one_bracket(&cat, &degenerate, 1), EndBasisKind::Bracket).unwrap();
        assert_eq!(radical(&a0).unwrap().len(), 1);
        assert_eq!(is_local(&a0).unwrap(), Locality::Local);

        assert_eq!(format!("{}", Locality::Local), "local");
        assert_eq!(format!("{}", Locality::NotLocal), "not local");
    }

    #[test]
    fn graded_bases_factor_the_block_counts() {
        let cat = Arc::new(ModuleCategory::graded_lines(2).unwrap());
        let ctx = RankContext::Specialized(ratio(7, 2));
        let bracket = |letters: &[usize]| {
            BracketObject::bracket(
                cat.clone(),
                ctx.clone(),
                letters.iter().map(|&g| TensorWord::letter(g)).collect(),
            )
        };
        let count = |letters: &[usize]| {
            let a = end_algebra(&bracket(letters), EndBasisKind::Bracket).unwrap();
            count_simples(&a).unwrap().block_count()
        };
        // The degree-zero line behaves like the plain base; the degree-one
        // line admits no half-empty recollements, so only the slot
        // permutations survive.
        assert_eq!(count(&[0]), 2);
        assert_eq!(count(&[1]), 1);
        // One slot of each color: the block count is the product over colors.
        assert_eq!(count(&[0, 1]), count(&[0]) * count(&[1]));
        // Two slots of the odd color collapse to the symmetric group algebra.
        let s2 = AlgebraTable::from_group_table(&symmetric_group_table(2)).unwrap();
        assert_eq!(count(&[1, 1]), count_simples(&s2).unwrap().block_count());
        let pair = end_algebra(&bracket(&[1, 1]), EndBasisKind::Bracket).unwrap();
        assert_eq!(pair.dim(), 2);
    }

    #[test]
    fn rational_root_extraction_is_exact() {
        // (t − 2)(2t + 3)(t² + 1) = 2t⁴ − t³ − 4t² − t − 6.
        let p = RankPolynomial::from_coeffs(vec![int(-6), int(-1), int(-4), int(-1), int(2)]);
        assert_eq!(rational_roots(&p).unwrap(), vec![ratio(-3, 2), int(2)]);
        let cube = RankPolynomial::from_coeffs(vec![int(0), int(0), int(0), int(1)]);
        assert_eq!(rational_roots(&cube).unwrap(), vec![int(0)]);
        assert!(rational_roots(&RankPolynomial::constant(int(5)))
            .unwrap()
            .is_empty());
        assert!(matches!(
            rational_roots(&RankPolynomial::zero()),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn analysis_preconditions_are_enforced() {
        let (cat, ctx) = deligne_symbolic();
        let a = end_algebra(&one_bracket(&cat, &ctx, 1), EndBasisKind::Bracket).unwrap();
        assert!(matches!(radical(&a), Err(Error::Precondition(_))));
        assert!(matches!(count_simples(&a), Err(Error::Precondition(_))));
        let at = a.specialize(&ratio(7, 2)).unwrap();
        assert!(matches!(
            at.specialize(&int(1)),
            Err(Error::Precondition(_))
        ));
    }
}
