//! Finite presentations of the base category: bialgebras, their module
//! categories with tensor words as objects, frozen intertwiner hom bases,
//! flip braidings, and dual data.
//!
//! The monoidal structure is strict: objects are words of generator modules,
//! words concatenate, and associators and unitors are identities. Hom bases
//! are nullspace bases in row-echelon order, computed once per object pair
//! and cached, so structure constants are reproducible across runs.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num::traits::{One, Zero};

use crate::linalg::Mat;
use crate::scalar::Rational;
use crate::{Error, Result};

/// Default cap on tensor word length in module-category queries.
pub const DEFAULT_WORD_BOUND: usize = 6;

/// Outcome of an axiom check: either clean or a list of named violations.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            write!(f, "ok")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// A finite-dimensional bialgebra over ℚ by structure constants, with an
/// optional antipode. Multiplication is an n×n² matrix (column i·n+j holds
/// e_i·e_j), comultiplication an n²×n matrix, both in the fixed basis.
#[derive(Clone, Debug)]
pub struct BialgebraPresentation {
    dim: usize,
    mult: Mat,
    unit: Vec<Rational>,
    comult: Mat,
    counit: Vec<Rational>,
    antipode: Option<Mat>,
}

/// The flip e_i⊗e_j ↦ e_j⊗e_i on a space of dimension n, as an n²×n² matrix.
fn flip_matrix(n: usize, m: usize) -> Mat {
    let mut t = Mat::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..m {
            t.set(j * n + i, i * m + j, Rational::one());
        }
    }
    t
}

impl BialgebraPresentation {
    pub fn new(
        dim: usize,
        mult: Mat,
        unit: Vec<Rational>,
        comult: Mat,
        counit: Vec<Rational>,
        antipode: Option<Mat>,
    ) -> Self {
        assert_eq!((mult.rows(), mult.cols()), (dim, dim * dim));
        assert_eq!((comult.rows(), comult.cols()), (dim * dim, dim));
        assert_eq!(unit.len(), dim);
        assert_eq!(counit.len(), dim);
        if let Some(s) = &antipode {
            assert_eq!((s.rows(), s.cols()), (dim, dim));
        }
        BialgebraPresentation {
            dim,
            mult,
            unit,
            comult,
            counit,
            antipode,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn counit(&self) -> &[Rational] {
        &self.counit
    }

    pub fn mult(&self) -> &Mat {
        &self.mult
    }

    pub fn comult(&self) -> &Mat {
        &self.comult
    }

    pub fn antipode(&self) -> Option<&Mat> {
        self.antipode.as_ref()
    }

    pub fn is_cocommutative(&self) -> bool {
        flip_matrix(self.dim, self.dim).matmul(&self.comult) == self.comult
    }

    /// Checks every bialgebra axiom exactly and reports what fails.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.dim;
        let id = Mat::identity(n);
        let m = &self.mult;
        let d = &self.comult;
        let u = Mat::column(&self.unit);
        let e = Mat::from_rows(vec![self.counit.clone()]);

        // Associativity, elementwise so the offending triple can be named.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ij: Vec<Rational> =
                        (0..n).map(|a| m.at(a, i * n + j).clone()).collect();
                    let jk: Vec<Rational> =
                        (0..n).map(|a| m.at(a, j * n + k).clone()).collect();
                    let left = self.apply_right(&ij, k);
                    let right = self.apply_left(i, &jk);
                    if left != right {
                        violations.push(format!(
                            "multiplication is not associative on basis triple ({i}, {j}, {k})"
                        ));
                    }
                }
            }
        }
        if m.matmul(&u.kron(&id)) != id || m.matmul(&id.kron(&u)) != id {
            violations.push("unit element is not a two-sided unit".into());
        }
        if d.kron(&id).matmul(d) != id.kron(d).matmul(d) {
            violations.push("comultiplication is not coassociative".into());
        }
        if e.kron(&id).matmul(d) != id || id.kron(&e).matmul(d) != id {
            violations.push("counit axiom fails".into());
        }
        let mid_flip = Mat::identity(n)
            .kron(&flip_matrix(n, n))
            .kron(&Mat::identity(n));
        if d.matmul(m) != m.kron(m).matmul(&mid_flip).matmul(&d.kron(d)) {
            violations.push("comultiplication is not an algebra map".into());
        }
        if d.matmul(&u) != u.kron(&u) {
            violations.push("comultiplication does not fix the unit".into());
        }
        if e.matmul(m) != e.kron(&e) {
            violations.push("counit is not an algebra map".into());
        }
        if e.matmul(&u).at(0, 0) != &Rational::one() {
            violations.push("counit does not send the unit to 1".into());
        }
        if let Some(s) = &self.antipode {
            let target = u.matmul(&e);
            if m.matmul(&s.kron(&id)).matmul(d) != target
                || m.matmul(&id.kron(s)).matmul(d) != target
            {
                violations.push("antipode axiom fails".into());
            }
        }
        ValidationReport { violations }
    }

    /// The product a·e_k for a given by coordinates.
    fn apply_right(&self, a: &[Rational], k: usize) -> Vec<Rational> {
        let n = self.dim;
        (0..n)
            .map(|out| {
                (0..n)
                    .map(|i| &a[i] * self.mult.at(out, i * n + k))
                    .sum()
            })
            .collect()
    }

    /// The product e_i·b for b given by coordinates.
    fn apply_left(&self, i: usize, b: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        (0..n)
            .map(|out| {
                (0..n)
                    .map(|k| &b[k] * self.mult.at(out, i * n + k))
                    .sum()
            })
            .collect()
    }

    /// The one-dimensional bialgebra 𝕜; its module category is plain vector
    /// spaces and every word has dimension one.
    pub fn trivial() -> Self {
        let one = Mat::from_int_rows(&[&[1]]);
        BialgebraPresentation::new(
            1,
            one.clone(),
            vec![Rational::one()],
            one.clone(),
            vec![Rational::one()],
            Some(one),
        )
    }

    /// The group algebra 𝕜[G] from a multiplication table (element 0 the
    /// identity): grouplike basis, Δ(g) = g⊗g, antipode g ↦ g⁻¹.
    pub fn group_algebra(table: &[Vec<usize>]) -> Result<Self> {
        let inv = validate_group_table(table)?;
        let n = table.len();
        let mult = Mat::from_fn(n, n * n, |out, col| {
            let (g, h) = (col / n, col % n);
            if table[g][h] == out {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let mut unit = vec![Rational::zero(); n];
        unit[0] = Rational::one();
        let comult = Mat::from_fn(n * n, n, |row, g| {
            if row == g * n + g {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let counit = vec![Rational::one(); n];
        let antipode = Mat::from_fn(n, n, |i, g| {
            if inv[g] == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        Ok(BialgebraPresentation::new(
            n,
            mult,
            unit,
            comult,
            counit,
            Some(antipode),
        ))
    }

    /// The function bialgebra 𝕜^G on a finite group: idempotent basis with
    /// pointwise multiplication and comultiplication dual to the group law.
    /// Cocommutative exactly when G is abelian.
    pub fn group_functions(table: &[Vec<usize>]) -> Result<Self> {
        let inv = validate_group_table(table)?;
        let n = table.len();
        let mult = Mat::from_fn(n, n * n, |out, col| {
            let (g, h) = (col / n, col % n);
            if g == h && g == out {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let unit = vec![Rational::one(); n];
        let comult = Mat::from_fn(n * n, n, |row, g| {
            let (h, k) = (row / n, row % n);
            if table[h][k] == g {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let mut counit = vec![Rational::zero(); n];
        counit[0] = Rational::one();
        let antipode = Mat::from_fn(n, n, |i, g| {
            if inv[g] == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        Ok(BialgebraPresentation::new(
            n,
            mult,
            unit,
            comult,
            counit,
            Some(antipode),
        ))
    }
}

/// Checks that a multiplication table (0 the identity) describes a group and
/// returns the inverse of each element.
fn validate_group_table(table: &[Vec<usize>]) -> Result<Vec<usize>> {
    let n = table.len();
    if n == 0 {
        return Err(Error::Argument("empty group table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n || row.iter().any(|&v| v >= n) {
            return Err(Error::Argument(format!("malformed table row {i}")));
        }
    }
    for i in 0..n {
        if table[0][i] != i || table[i][0] != i {
            return Err(Error::Argument("element 0 is not an identity".into()));
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if table[table[i][j]][k] != table[i][table[j][k]] {
                    return Err(Error::Argument(format!(
                        "table is not associative at ({i}, {j}, {k})"
                    )));
                }
            }
        }
    }
    let mut inv = vec![usize::MAX; n];
    for g in 0..n {
        match (0..n).find(|&h| table[g][h] == 0 && table[h][g] == 0) {
            Some(h) => inv[g] = h,
            None => {
                return Err(Error::Argument(format!("element {g} has no inverse")));
            }
        }
    }
    Ok(inv)
}

/// The cyclic group ℤ/n as a multiplication table.
pub fn cyclic_group_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
}

/// The symmetric group on n letters as a multiplication table; elements are
/// permutations in lexicographic order (the identity first) and the product
/// g·h acts by h first, then g.
pub fn symmetric_group_table(n: usize) -> Vec<Vec<usize>> {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        perms.push(cur.clone());
        // Next permutation in lexicographic order.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    let index: BTreeMap<Vec<usize>, usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    perms
        .iter()
        .map(|g| {
            perms
                .iter()
                .map(|h| {
                    let composed: Vec<usize> = (0..n).map(|x| g[h[x]]).collect();
                    index[&composed]
                })
                .collect()
        })
        .collect()
}

/// A finite-dimensional module over a bialgebra: one action matrix per basis
/// element.
#[derive(Clone, Debug)]
pub struct ModuleObject {
    dim: usize,
    action: Vec<Mat>,
}

impl ModuleObject {
    pub fn new(dim: usize, action: Vec<Mat>) -> Self {
        assert!(action.iter().all(|m| (m.rows(), m.cols()) == (dim, dim)));
        ModuleObject { dim, action }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, basis: usize) -> &Mat {
        &self.action[basis]
    }

    /// The one-dimensional module through the counit.
    pub fn trivial(b: &BialgebraPresentation) -> Self {
        let action = b
            .counit
            .iter()
            .map(|c| Mat::from_rows(vec![vec![c.clone()]]))
            .collect();
        ModuleObject { dim: 1, action }
    }

    /// The regular module of a group algebra built with `group_algebra`.
    pub fn regular(table: &[Vec<usize>]) -> Self {
        let n = table.len();
        let action = (0..n)
            .map(|g| {
                Mat::from_fn(n, n, |i, j| {
                    if table[g][j] == i {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
            })
            .collect();
        ModuleObject { dim: n, action }
    }

    /// A one-dimensional module over 𝕜^G supported at one group element.
    pub fn line(b: &BialgebraPresentation, grade: usize) -> Self {
        let action = (0..b.dim)
            .map(|a| {
                Mat::from_rows(vec![vec![if a == grade {
                    Rational::one()
                } else {
                    Rational::zero()
                }]])
            })
            .collect();
        ModuleObject { dim: 1, action }
    }

    /// Checks that the action respects multiplication and unit.
    pub fn validate_over(&self, b: &BialgebraPresentation) -> Vec<String> {
        let mut violations = Vec::new();
        if self.action.len() != b.dim {
            violations.push("one action matrix per bialgebra basis element required".into());
            return violations;
        }
        if self.dim == 0 {
            violations.push("zero-dimensional module".into());
        }
        let n = b.dim;
        for i in 0..n {
            for j in 0..n {
                let mut prod_action = Mat::zeros(self.dim, self.dim);
                for k in 0..n {
                    let c = b.mult.at(k, i * n + j);
                    if !c.is_zero() {
                        prod_action = prod_action.add(&self.action[k].scale(c));
                    }
                }
                if prod_action != self.action[i].matmul(&self.action[j]) {
                    violations.push(format!(
                        "action does not respect the product of basis elements ({i}, {j})"
                    ));
                }
            }
        }
        let mut unit_action = Mat::zeros(self.dim, self.dim);
        for (k, c) in b.unit.iter().enumerate() {
            if !c.is_zero() {
                unit_action = unit_action.add(&self.action[k].scale(c));
            }
        }
        if unit_action != Mat::identity(self.dim) {
            violations.push("unit does not act as the identity".into());
        }
        violations
    }
}

/// A word of generator modules; the empty word is the unit object and words
/// concatenate (the monoidal structure is strict).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TensorWord(Vec<usize>);

impl TensorWord {
    pub fn unit() -> Self {
        TensorWord(Vec::new())
    }

    pub fn letter(g: usize) -> Self {
        TensorWord(vec![g])
    }

    pub fn new(letters: Vec<usize>) -> Self {
        TensorWord(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &TensorWord) -> TensorWord {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        TensorWord(letters)
    }
}

/// The module category of a validated bialgebra over chosen generator
/// modules: objects are tensor words, hom spaces are intertwiner spaces with
/// frozen nullspace bases, morphisms are plain matrices between the
/// underlying spaces.
pub struct ModuleCategory {
    bialgebra: BialgebraPresentation,
    generators: Vec<ModuleObject>,
    names: Vec<String>,
    word_bound: usize,
    hom_cache: Mutex<BTreeMap<(TensorWord, TensorWord), Arc<Vec<Mat>>>>,
    solver_cache: Mutex<BTreeMap<(TensorWord, TensorWord), Arc<CoordSolver>>>,
}

/// Precomputed coordinate extraction for one hom space: entry positions at
/// which the basis matrices form an invertible square slice, plus that
/// slice's inverse. Turns each coordinate expression into one small matrix
/// product instead of a fresh elimination.
struct CoordSolver {
    positions: Vec<usize>,
    inverse: Mat,
}

/// Builds and fully validates a module category; the usual entry point.
pub fn module_category(
    bialgebra: BialgebraPresentation,
    generators: Vec<(String, ModuleObject)>,
) -> Result<ModuleCategory> {
    ModuleCategory::with_word_bound(bialgebra, generators, DEFAULT_WORD_BOUND)
}

impl ModuleCategory {
    pub fn with_word_bound(
        bialgebra: BialgebraPresentation,
        generators: Vec<(String, ModuleObject)>,
        word_bound: usize,
    ) -> Result<ModuleCategory> {
        let report = bialgebra.validate();
        if !report.is_ok() {
            return Err(Error::Validation(format!(
                "bialgebra axioms fail: {report}"
            )));
        }
        let mut names = Vec::new();
        let mut mods = Vec::new();
        for (name, module) in generators {
            let violations = module.validate_over(&bialgebra);
            if !violations.is_empty() {
                return Err(Error::Validation(format!(
                    "generator {name} is not a module: {}",
                    violations.join("; ")
                )));
            }
            names.push(name);
            mods.push(module);
        }
        Ok(ModuleCategory {
            bialgebra,
            generators: mods,
            names,
            word_bound,
            hom_cache: Mutex::new(BTreeMap::new()),
            solver_cache: Mutex::new(BTreeMap::new()),
        })
    }

    /// Plain vector spaces: the one-generator category over the trivial
    /// bialgebra, where every hom space is one-dimensional.
    pub fn trivial() -> ModuleCategory {
        let b = BialgebraPresentation::trivial();
        let triv = ModuleObject::trivial(&b);
        module_category(b, vec![("1".into(), triv)]).expect("trivial category is valid")
    }

    /// ℤ/r-graded lines: the function bialgebra on ℤ/r with one line per
    /// grade; tensor adds grades and the dual of L_s is L_{−s}.
    pub fn graded_lines(r: usize) -> Result<ModuleCategory> {
        let b = BialgebraPresentation::group_functions(&cyclic_group_table(r))?;
        let generators = (0..r)
            .map(|s| (format!("L{s}"), ModuleObject::line(&b, s)))
            .collect();
        module_category(b, generators)
    }

    /// The group algebra 𝕜[G] with its regular module as single generator.
    pub fn group_algebra(table: &[Vec<usize>]) -> Result<ModuleCategory> {
        let b = BialgebraPresentation::group_algebra(table)?;
        let reg = ModuleObject::regular(table);
        module_category(b, vec![("reg".into(), reg)])
    }

    pub fn bialgebra(&self) -> &BialgebraPresentation {
        &self.bialgebra
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, g: usize) -> &ModuleObject {
        &self.generators[g]
    }

    pub fn generator_name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn word_bound(&self) -> usize {
        self.word_bound
    }

    pub fn word_label(&self, w: &TensorWord) -> String {
        if w.is_empty() {
            "1".into()
        } else {
            w.letters()
                .iter()
                .map(|&g| self.names[g].as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    pub fn word_dim(&self, w: &TensorWord) -> usize {
        w.letters().iter().map(|&g| self.generators[g].dim()).product()
    }

    fn check_word(&self, w: &TensorWord) -> Result<()> {
        if w.len() > self.word_bound {
            return Err(Error::Resource(format!(
                "word length {} exceeds the bound of {}",
                w.len(),
                self.word_bound
            )));
        }
        if let Some(&g) = w.letters().iter().find(|&&g| g >= self.generators.len()) {
            return Err(Error::Argument(format!("unknown generator index {g}")));
        }
        Ok(())
    }

    /// Action matrices of every bialgebra basis element on a word, built by
    /// one comultiplication step per letter.
    pub fn word_actions(&self, w: &TensorWord) -> Result<Vec<Mat>> {
        self.check_word(w)?;
        Ok(self.word_actions_unchecked(w.letters()))
    }

    fn word_actions_unchecked(&self, letters: &[usize]) -> Vec<Mat> {
        let n = self.bialgebra.dim;
        let Some((&first, rest)) = letters.split_first() else {
            return self
                .bialgebra
                .counit
                .iter()
                .map(|c| Mat::from_rows(vec![vec![c.clone()]]))
                .collect();
        };
        let rest_actions = self.word_actions_unchecked(rest);
        let head = &self.generators[first];
        let rest_dim = rest_actions[0].rows();
        (0..n)
            .map(|a| {
                let mut out = Mat::zeros(head.dim() * rest_dim, head.dim() * rest_dim);
                for i in 0..n {
                    for k in 0..n {
                        let c = self.bialgebra.comult.at(i * n + k, a);
                        if !c.is_zero() {
                            out = out.add(&head.action(i).kron(&rest_actions[k]).scale(c));
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// The frozen basis of Hom(src, tgt): nullspace of "commute with every
    /// basis action", as tgt-dim × src-dim matrices.
    pub fn hom_basis(&self, src: &TensorWord, tgt: &TensorWord) -> Result<Arc<Vec<Mat>>> {
        self.check_word(src)?;
        self.check_word(tgt)?;
        let key = (src.clone(), tgt.clone());
        if let Some(hit) = self.hom_cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let acts_src = self.word_actions_unchecked(src.letters());
        let acts_tgt = self.word_actions_unchecked(tgt.letters());
        let basis = Arc::new(intertwiner_basis(&acts_src, &acts_tgt));
        self.hom_cache.lock().unwrap().insert(key, basis.clone());
        Ok(basis)
    }

    pub fn hom_dim(&self, src: &TensorWord, tgt: &TensorWord) -> Result<usize> {
        Ok(self.hom_basis(src, tgt)?.len())
    }

    /// Coordinates of an intertwiner matrix in the frozen basis; validation
    /// error if the matrix lies outside the hom space.
    pub fn express(&self, src: &TensorWord, tgt: &TensorWord, m: &Mat) -> Result<Vec<Rational>> {
        let basis = self.hom_basis(src, tgt)?;
        let outside = || {
            Error::Validation(format!(
                "matrix is not a morphism {} → {}",
                self.word_label(src),
                self.word_label(tgt)
            ))
        };
        if basis.is_empty() {
            return if m.is_zero() { Ok(Vec::new()) } else { Err(outside()) };
        }
        let solver = self.coord_solver(src, tgt, &basis);
        let picked: Vec<Rational> = solver
            .positions
            .iter()
            .map(|&p| m.entries()[p].clone())
            .collect();
        let coords = solver.inverse.matmul(&Mat::column(&picked)).entries().to_vec();
        // The slice determines the coordinates of anything inside the span;
        // reconstruct once to reject a matrix outside it.
        let mut recon = vec![Rational::zero(); m.entries().len()];
        for (c, b) in coords.iter().zip(basis.iter()) {
            if c.is_zero() {
                continue;
            }
            for (r, e) in recon.iter_mut().zip(b.entries()) {
                if !e.is_zero() {
                    *r += e * c;
                }
            }
        }
        if recon != m.entries() {
            return Err(outside());
        }
        Ok(coords)
    }

    /// The cached coordinate extractor for one hom space.
    fn coord_solver(
        &self,
        src: &TensorWord,
        tgt: &TensorWord,
        basis: &Arc<Vec<Mat>>,
    ) -> Arc<CoordSolver> {
        let key = (src.clone(), tgt.clone());
        if let Some(hit) = self.solver_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let d = basis.len();
        let n = basis[0].entries().len();
        let flat = Mat::from_fn(d, n, |j, i| basis[j].entries()[i].clone());
        let (_, positions) = flat.rref();
        let slice = Mat::from_fn(d, d, |i, j| basis[j].entries()[positions[i]].clone());
        let solver = Arc::new(CoordSolver {
            positions,
            inverse: slice.inverse().expect("independent basis matrices"),
        });
        self.solver_cache
            .lock()
            .unwrap()
            .insert(key, solver.clone());
        solver
    }

    /// The matrix with the given coordinates in the frozen basis.
    pub fn element(&self, src: &TensorWord, tgt: &TensorWord, coeffs: &[Rational]) -> Result<Mat> {
        let basis = self.hom_basis(src, tgt)?;
        if coeffs.len() != basis.len() {
            return Err(Error::Argument(format!(
                "expected {} coordinates, got {}",
                basis.len(),
                coeffs.len()
            )));
        }
        let mut out = Mat::zeros(self.word_dim(tgt), self.word_dim(src));
        for (c, b) in coeffs.iter().zip(basis.iter()) {
            out = out.add(&b.scale(c));
        }
        Ok(out)
    }

    pub fn identity_coords(&self, w: &TensorWord) -> Result<Vec<Rational>> {
        self.express(w, w, &Mat::identity(self.word_dim(w)))
    }

    /// Whether a matrix commutes with every basis action.
    pub fn is_morphism(&self, src: &TensorWord, tgt: &TensorWord, m: &Mat) -> Result<bool> {
        let acts_src = self.word_actions(src)?;
        let acts_tgt = self.word_actions(tgt)?;
        Ok(acts_src
            .iter()
            .zip(&acts_tgt)
            .all(|(a, b)| m.matmul(a) == b.matmul(m)))
    }

    /// Tensor product of morphisms: the Kronecker product, first factor on
    /// the major axis, matching the word vector-space convention.
    pub fn tensor_on_morphisms(&self, f: &Mat, g: &Mat) -> Mat {
        f.kron(g)
    }

    /// Partial trace over the trailing factor: contracts the last tensor slot
    /// of a morphism u⊗x → v⊗x down to u → v. The flat matrix contraction is
    /// only the categorical trace when it again commutes with the actions, so
    /// a result that fails that check is a capability error.
    pub fn partial_trace(&self, u: &TensorWord, v: &TensorWord, x: &TensorWord, m: &Mat) -> Result<Mat> {
        self.check_word(u)?;
        self.check_word(v)?;
        self.check_word(x)?;
        let du = self.word_dim(u);
        let dv = self.word_dim(v);
        let dx = self.word_dim(x);
        if m.rows() != dv * dx || m.cols() != du * dx {
            return Err(Error::Argument(format!(
                "partial trace expects a {}×{} matrix, got {}×{}",
                dv * dx,
                du * dx,
                m.rows(),
                m.cols()
            )));
        }
        if !self.is_morphism(&u.concat(x), &v.concat(x), m)? {
            return Err(Error::Validation(format!(
                "matrix is not a morphism {} → {}",
                self.word_label(&u.concat(x)),
                self.word_label(&v.concat(x))
            )));
        }
        let out = Mat::from_fn(dv, du, |p, q| {
            (0..dx).map(|s| m.at(p * dx + s, q * dx + s)).sum()
        });
        if !self.is_morphism(u, v, &out)? {
            return Err(Error::Capability(format!(
                "partial trace over {} does not land in the morphisms of this base",
                self.word_label(x)
            )));
        }
        Ok(out)
    }

    pub fn is_cocommutative(&self) -> bool {
        self.bialgebra.is_cocommutative()
    }

    /// The flip v⊗w ↦ w⊗v as a morphism matrix; only an intertwiner when the
    /// bialgebra is cocommutative, so anything else is a capability error.
    pub fn flip_braiding(&self, v: &TensorWord, w: &TensorWord) -> Result<Mat> {
        if !self.is_cocommutative() {
            return Err(Error::Capability(
                "braiding requires a cocommutative bialgebra".into(),
            ));
        }
        self.check_word(v)?;
        self.check_word(w)?;
        Ok(flip_matrix(self.word_dim(v), self.word_dim(w)))
    }

    /// The dual generator of g together with an isomorphism from it onto the
    /// contragredient module of g.
    fn generator_dual(&self, g: usize) -> Result<(usize, Mat)> {
        let Some(s) = &self.bialgebra.antipode else {
            return Err(Error::Capability("dual data requires an antipode".into()));
        };
        let n = self.bialgebra.dim;
        let module = &self.generators[g];
        let contragredient: Vec<Mat> = (0..n)
            .map(|a| {
                let mut acc = Mat::zeros(module.dim(), module.dim());
                for b in 0..n {
                    let c = s.at(b, a);
                    if !c.is_zero() {
                        acc = acc.add(&module.action(b).scale(c));
                    }
                }
                acc.transpose()
            })
            .collect();
        for (h, candidate) in self.generators.iter().enumerate() {
            if candidate.dim() != module.dim() {
                continue;
            }
            let cand_actions: Vec<Mat> = (0..n).map(|a| candidate.action(a).clone()).collect();
            // A generator that is the contragredient on the nose gets the
            // identity as its identification, so ev is the plain pairing.
            if cand_actions == contragredient {
                return Ok((h, Mat::identity(module.dim())));
            }
            let homs = intertwiner_basis(&cand_actions, &contragredient);
            if let Some(q) = find_invertible_combination(&homs) {
                return Ok((h, q));
            }
        }
        Err(Error::Capability(format!(
            "no generator is isomorphic to the dual of {}",
            self.names[g]
        )))
    }

    /// The dual word: reversed list of dual generators.
    pub fn dual_word(&self, w: &TensorWord) -> Result<TensorWord> {
        let mut letters = Vec::with_capacity(w.len());
        for &g in w.letters().iter().rev() {
            letters.push(self.generator_dual(g)?.0);
        }
        Ok(TensorWord(letters))
    }

    /// (w*, ev, coev) with ev: w*⊗w → 1 and coev: 1 → w⊗w*; both snake
    /// composites are checked to be identities before returning.
    pub fn dual_data(&self, w: &TensorWord) -> Result<(TensorWord, Mat, Mat)> {
        self.check_word(w)?;
        let (star, ev, coev) = self.dual_data_unchecked(w.letters())?;
        let d = self.word_dim(w);
        let d_star = self.word_dim(&star);
        let snake1 = Mat::identity(d)
            .kron(&ev)
            .matmul(&coev.kron(&Mat::identity(d)));
        let snake2 = ev
            .kron(&Mat::identity(d_star))
            .matmul(&Mat::identity(d_star).kron(&coev));
        if snake1 != Mat::identity(d) || snake2 != Mat::identity(d_star) {
            return Err(Error::Validation(format!(
                "snake identities fail for {}",
                self.word_label(w)
            )));
        }
        Ok((star, ev, coev))
    }

    fn dual_data_unchecked(&self, letters: &[usize]) -> Result<(TensorWord, Mat, Mat)> {
        let Some((&first, rest)) = letters.split_first() else {
            let one = Mat::identity(1);
            return Ok((TensorWord::unit(), one.clone(), one));
        };
        let (rest_star, ev_rest, coev_rest) = self.dual_data_unchecked(rest)?;
        let (dual_gen, q) = self.generator_dual(first)?;
        let d = self.generators[first].dim();
        // Canonical pairing and copairing of a space with its linear dual.
        let pair = Mat::from_fn(1, d * d, |_, col| {
            if col / d == col % d {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let copair = pair.transpose();
        let ev_letter = pair.matmul(&q.kron(&Mat::identity(d)));
        let coev_letter = Mat::identity(d)
            .kron(&q.inverse().expect("dual identification is invertible"))
            .matmul(&copair);

        let rest_dim = self.word_dim(&TensorWord(rest.to_vec()));
        let rest_star_dim = self.word_dim(&rest_star);
        let mut star = rest_star.clone();
        star.0.push(dual_gen);
        let ev = ev_rest.matmul(
            &Mat::identity(rest_star_dim)
                .kron(&ev_letter)
                .kron(&Mat::identity(rest_dim)),
        );
        let coev = Mat::identity(d)
            .kron(&coev_rest)
            .kron(&Mat::identity(self.generators[dual_gen].dim()))
            .matmul(&coev_letter);
        Ok((star, ev, coev))
    }

    /// Flattens hom bases and structure constants over a finite object list
    /// into an exportable presentation. The list must contain the unit word.
    pub fn presentation(&self, words: &[TensorWord]) -> Result<LinearCatPresentation> {
        let unit = words
            .iter()
            .position(|w| w.is_empty())
            .ok_or_else(|| Error::Argument("object list must contain the unit word".into()))?;
        let objects: Vec<String> = words.iter().map(|w| self.word_label(w)).collect();
        let mut hom_dims = vec![vec![0; words.len()]; words.len()];
        for (i, src) in words.iter().enumerate() {
            for (j, tgt) in words.iter().enumerate() {
                hom_dims[i][j] = self.hom_dim(src, tgt)?;
            }
        }
        let mut compose = BTreeMap::new();
        for (x, wx) in words.iter().enumerate() {
            for (y, wy) in words.iter().enumerate() {
                if hom_dims[x][y] == 0 {
                    continue;
                }
                for (z, wz) in words.iter().enumerate() {
                    if hom_dims[y][z] == 0 {
                        continue;
                    }
                    let first = self.hom_basis(wx, wy)?;
                    let second = self.hom_basis(wy, wz)?;
                    let mut table = Vec::with_capacity(first.len());
                    for f in first.iter() {
                        let mut row = Vec::with_capacity(second.len());
                        for g in second.iter() {
                            row.push(self.express(wx, wz, &g.matmul(f))?);
                        }
                        table.push(row);
                    }
                    compose.insert((x, y, z), table);
                }
            }
        }
        let identities = words
            .iter()
            .map(|w| self.identity_coords(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearCatPresentation {
            objects,
            unit,
            hom_dims,
            compose,
            identities,
        })
    }
}

/// Basis of the space of matrices f with f·σ(a) = τ(a)·f for all basis
/// actions, in row-echelon (frozen) order.
fn intertwiner_basis(acts_src: &[Mat], acts_tgt: &[Mat]) -> Vec<Mat> {
    let dv = acts_src[0].rows();
    let dw = acts_tgt[0].rows();
    let mut rows = Vec::with_capacity(acts_src.len() * dv * dw);
    for (a, b) in acts_src.iter().zip(acts_tgt) {
        let constraint = Mat::identity(dw)
            .kron(&a.transpose())
            .sub(&b.kron(&Mat::identity(dv)));
        for i in 0..constraint.rows() {
            rows.push(constraint.row(i).to_vec());
        }
    }
    Mat::from_rows(rows)
        .nullspace()
        .into_iter()
        .map(|v| Mat::from_fn(dw, dv, |i, j| v[i * dv + j].clone()))
        .collect()
}

/// Searches a hom space for an invertible element: each basis member first,
/// then deterministic integer combinations.
fn find_invertible_combination(basis: &[Mat]) -> Option<Mat> {
    for b in basis {
        if b.rows() == b.cols() && b.inverse().is_some() {
            return Some(b.clone());
        }
    }
    if basis.is_empty() || basis[0].rows() != basis[0].cols() {
        return None;
    }
    let d = basis[0].rows();
    for x in 2..=(basis.len() * d + 2) as i64 {
        let mut acc = Mat::zeros(d, d);
        let mut weight = Rational::one();
        for b in basis {
            acc = acc.add(&b.scale(&weight));
            weight *= crate::scalar::int(x);
        }
        if acc.inverse().is_some() {
            return Some(acc);
        }
    }
    None
}

/// A finite flattened presentation of a linear category: labeled objects,
/// hom dimensions, composition structure constants over frozen bases, and
/// identity coordinates. This is the validated, serializable view.
#[derive(Clone, Debug)]
pub struct LinearCatPresentation {
    pub objects: Vec<String>,
    pub unit: usize,
    /// hom_dims[src][tgt]
    pub hom_dims: Vec<Vec<usize>>,
    /// (x, y, z) → table[i][j] = coordinates of b_j ∘ b_i in Hom(x,z); only
    /// triples with both hom spaces nonzero are stored.
    pub compose: BTreeMap<(usize, usize, usize), Vec<Vec<Vec<Rational>>>>,
    /// Coordinates of id_x in the End(x) basis.
    pub identities: Vec<Vec<Rational>>,
}

impl LinearCatPresentation {
    fn compose_coords(
        &self,
        key: (usize, usize, usize),
        f: &[Rational],
        g: &[Rational],
    ) -> Vec<Rational> {
        let out_dim = self.hom_dims[key.0][key.2];
        let mut out = vec![Rational::zero(); out_dim];
        let Some(table) = self.compose.get(&key) else {
            return out;
        };
        for (i, fc) in f.iter().enumerate() {
            if fc.is_zero() {
                continue;
            }
            for (j, gc) in g.iter().enumerate() {
                if gc.is_zero() {
                    continue;
                }
                for (k, c) in table[i][j].iter().enumerate() {
                    out[k] += fc * gc * c;
                }
            }
        }
        out
    }

    /// Checks associativity, two-sided identities, and the unit object
    /// condition; every violation names the offending data.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.objects.len();
        if self.hom_dims.len() != n
            || self.hom_dims.iter().any(|row| row.len() != n)
            || self.identities.len() != n
        {
            violations.push("table shapes do not match the object count".into());
            return violations_into_report(violations);
        }
        for x in 0..n {
            if self.identities[x].len() != self.hom_dims[x][x] {
                violations.push(format!(
                    "identity coordinates of object {x} have the wrong length"
                ));
            }
        }
        if !violations.is_empty() {
            return violations_into_report(violations);
        }
        for (&(x, y, z), table) in &self.compose {
            if x >= n || y >= n || z >= n {
                violations.push(format!("composition key ({x}, {y}, {z}) out of range"));
                continue;
            }
            if table.len() != self.hom_dims[x][y]
                || table
                    .iter()
                    .any(|row| row.len() != self.hom_dims[y][z])
                || table
                    .iter()
                    .flatten()
                    .any(|v| v.len() != self.hom_dims[x][z])
            {
                violations.push(format!(
                    "composition table ({x}, {y}, {z}) has the wrong shape"
                ));
            }
        }
        if !violations.is_empty() {
            return violations_into_report(violations);
        }

        // Unit object: one-dimensional endomorphisms with the identity basis.
        if self.hom_dims[self.unit][self.unit] != 1 {
            violations.push("endomorphisms of the unit object are not one-dimensional".into());
        } else if self.identities[self.unit] != vec![Rational::one()] {
            violations.push("identity of the unit object is not the basis element".into());
        }

        // Two-sided identities.
        for x in 0..n {
            for y in 0..n {
                for i in 0..self.hom_dims[x][y] {
                    let mut e = vec![Rational::zero(); self.hom_dims[x][y]];
                    e[i] = Rational::one();
                    let left = self.compose_coords((x, x, y), &self.identities[x], &e);
                    let right = self.compose_coords((x, y, y), &e, &self.identities[y]);
                    if left != e {
                        violations.push(format!(
                            "identity of object {x} is not a right unit on basis {i}: {x} → {y}"
                        ));
                    }
                    if right != e {
                        violations.push(format!(
                            "identity of object {y} is not a left unit on basis {i}: {x} → {y}"
                        ));
                    }
                }
            }
        }

        // Associativity on every basis triple.
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        for i in 0..self.hom_dims[x][y] {
                            for j in 0..self.hom_dims[y][z] {
                                for k in 0..self.hom_dims[z][w] {
                                    let mut ei = vec![Rational::zero(); self.hom_dims[x][y]];
                                    ei[i] = Rational::one();
                                    let mut ej = vec![Rational::zero(); self.hom_dims[y][z]];
                                    ej[j] = Rational::one();
                                    let mut ek = vec![Rational::zero(); self.hom_dims[z][w]];
                                    ek[k] = Rational::one();
                                    let ji = self.compose_coords((x, y, z), &ei, &ej);
                                    let left = self.compose_coords((x, z, w), &ji, &ek);
                                    let kj = self.compose_coords((y, z, w), &ej, &ek);
                                    let right = self.compose_coords((x, y, w), &ei, &kj);
                                    if left != right {
                                        violations.push(format!(
                                            "composition is not associative on objects \
                                             ({x}, {y}, {z}, {w}), basis triple ({i}, {j}, {k})"
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        violations_into_report(violations)
    }
}

fn violations_into_report(violations: Vec<String>) -> ValidationReport {
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn trivial_bialgebra_and_category_are_clean() {
        assert!(BialgebraPresentation::trivial().validate().is_ok());
        let cat = ModuleCategory::trivial();
        let words: Vec<TensorWord> = vec![
            TensorWord::unit(),
            TensorWord::letter(0),
            TensorWord::new(vec![0, 0]),
        ];
        for a in &words {
            for b in &words {
                assert_eq!(cat.hom_dim(a, b).unwrap(), 1);
            }
        }
        let pres = cat.presentation(&words).unwrap();
        assert!(pres.validate().is_ok());
        assert_eq!(pres.validate().to_string(), "ok");
    }

    #[test]
    fn broken_associativity_is_named() {
        // One object x plus an arrow source s: End(x) is spanned by id and a
        // square-zero n; corrupting n∘f = f breaks (n∘n)∘f = n∘(n∘f).
        let mut compose = BTreeMap::new();
        compose.insert(
            (0, 0, 0),
            vec![
                vec![vec![int(1), int(0)], vec![int(0), int(1)]],
                vec![vec![int(0), int(1)], vec![int(0), int(0)]],
            ],
        );
        compose.insert(
            (1, 1, 1),
            vec![vec![vec![int(1)]]],
        );
        compose.insert(
            (1, 0, 0),
            vec![vec![vec![int(1)], vec![int(1)]]],
        );
        compose.insert(
            (1, 1, 0),
            vec![vec![vec![int(1)]]],
        );
        let pres = LinearCatPresentation {
            objects: vec!["x".into(), "s".into()],
            unit: 1,
            hom_dims: vec![vec![2, 0], vec![1, 1]],
            compose,
            identities: vec![vec![int(1), int(0)], vec![int(1)]],
        };
        let report = pres.validate();
        assert!(!report.is_ok());
        assert!(
            report
                .violations
                .iter()
                .any(|v| v.contains("associative")
                    && v.contains("(1, 0, 0, 0)")
                    && v.contains("(0, 1, 1)")),
            "got: {report}"
        );
    }

    #[test]
    fn graded_line_hom_dimensions() {
        let cat = ModuleCategory::graded_lines(2).unwrap();
        let l0 = TensorWord::letter(0);
        let l1 = TensorWord::letter(1);
        assert_eq!(cat.hom_dim(&l1.concat(&l1), &l0).unwrap(), 1);
        assert_eq!(cat.hom_dim(&l1, &l0).unwrap(), 0);
        assert_eq!(cat.hom_dim(&l1, &l1).unwrap(), 1);
        assert_eq!(cat.hom_dim(&TensorWord::unit(), &l1.concat(&l1)).unwrap(), 1);
        let pres = cat
            .presentation(&[TensorWord::unit(), l0.clone(), l1.clone(), l1.concat(&l1)])
            .unwrap();
        assert!(pres.validate().is_ok());
    }

    #[test]
    fn regular_module_endomorphisms() {
        let cat = ModuleCategory::group_algebra(&cyclic_group_table(2)).unwrap();
        let reg = TensorWord::letter(0);
        assert_eq!(cat.hom_dim(&reg, &reg).unwrap(), 2);
        assert_eq!(cat.hom_dim(&TensorWord::unit(), &reg).unwrap(), 1);
        let pres = cat.presentation(&[TensorWord::unit(), reg]).unwrap();
        assert!(pres.validate().is_ok(), "{}", pres.validate());
    }

    #[test]
    fn hom_dims_match_character_formula() {
        // dim Hom(V, W) for 𝕜[G] equals (1/|G|) Σ_g χ_V(g⁻¹) χ_W(g).
        let table = cyclic_group_table(3);
        let cat = ModuleCategory::group_algebra(&table).unwrap();
        let words: Vec<TensorWord> = vec![
            TensorWord::unit(),
            TensorWord::letter(0),
            TensorWord::new(vec![0, 0]),
            TensorWord::new(vec![0, 0, 0]),
        ];
        let inv = validate_group_table(&table).unwrap();
        for v in &words {
            for w in &words {
                let mut total = Rational::zero();
                for g in 0..table.len() {
                    let chi_v = cat.word_actions(v).unwrap()[inv[g]].trace();
                    let chi_w = cat.word_actions(w).unwrap()[g].trace();
                    total += chi_v * chi_w;
                }
                let expected = total / int(table.len() as i64);
                assert_eq!(int(cat.hom_dim(v, w).unwrap() as i64), expected);
            }
        }
    }

    #[test]
    fn composition_stays_inside_hom_spaces() {
        let cat = ModuleCategory::group_algebra(&cyclic_group_table(2)).unwrap();
        let reg = TensorWord::letter(0);
        let pair = TensorWord::new(vec![0, 0]);
        let first = cat.hom_basis(&reg, &pair).unwrap();
        let second = cat.hom_basis(&pair, &reg).unwrap();
        for f in first.iter() {
            for g in second.iter() {
                let coords = cat.express(&reg, &reg, &g.matmul(f)).unwrap();
                assert_eq!(coords.len(), 2);
            }
        }
    }

    #[test]
    fn braiding_is_natural() {
        let cat = ModuleCategory::group_algebra(&cyclic_group_table(2)).unwrap();
        let reg = TensorWord::letter(0);
        assert!(cat.is_cocommutative());
        let flip = cat.flip_braiding(&reg, &reg).unwrap();
        assert!(cat
            .is_morphism(&reg.concat(&reg), &reg.concat(&reg), &flip)
            .unwrap());
        let basis = cat.hom_basis(&reg, &reg).unwrap();
        for f in basis.iter() {
            for g in basis.iter() {
                let lhs = flip.matmul(&f.kron(g));
                let rhs = g.kron(f).matmul(&flip);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn braiding_requires_cocommutativity() {
        let b = BialgebraPresentation::group_functions(&symmetric_group_table(3)).unwrap();
        assert!(b.validate().is_ok());
        assert!(!b.is_cocommutative());
        let cat = module_category(b.clone(), vec![("e".into(), ModuleObject::line(&b, 0))]).unwrap();
        let w = TensorWord::letter(0);
        assert!(matches!(
            cat.flip_braiding(&w, &w),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn flip_on_lines_is_the_identity() {
        let cat = ModuleCategory::graded_lines(2).unwrap();
        let l1 = TensorWord::letter(1);
        assert_eq!(cat.flip_braiding(&l1, &l1).unwrap(), Mat::identity(1));
    }

    #[test]
    fn unit_word_endomorphisms() {
        for cat in [
            ModuleCategory::trivial(),
            ModuleCategory::graded_lines(3).unwrap(),
            ModuleCategory::group_algebra(&cyclic_group_table(2)).unwrap(),
        ] {
            let unit = TensorWord::unit();
            assert_eq!(cat.hom_dim(&unit, &unit).unwrap(), 1);
            assert_eq!(cat.identity_coords(&unit).unwrap(), vec![Rational::one()]);
        }
    }

    #[test]
    fn dual_data_examples() {
        let cat = ModuleCategory::trivial();
        let (star, ev, coev) = cat.dual_data(&TensorWord::unit()).unwrap();
        assert!(star.is_empty());
        assert_eq!(ev, Mat::identity(1));
        assert_eq!(coev, Mat::identity(1));

        let group = ModuleCategory::group_algebra(&cyclic_group_table(2)).unwrap();
        let reg = TensorWord::letter(0);
        let (star, ev, coev) = group.dual_data(&reg).unwrap();
        assert_eq!(star, reg);
        assert_eq!(ev, Mat::from_int_rows(&[&[1, 0, 0, 1]]));
        assert_eq!(coev, Mat::from_int_rows(&[&[1], &[0], &[0], &[1]]));

        let lines = ModuleCategory::graded_lines(3).unwrap();
        let star = lines.dual_word(&TensorWord::new(vec![1, 2])).unwrap();
        assert_eq!(star, TensorWord::new(vec![1, 2]));
        let deep = lines.dual_word(&TensorWord::new(vec![1, 1])).unwrap();
        assert_eq!(deep, TensorWord::new(vec![2, 2]));
        lines.dual_data(&TensorWord::new(vec![1, 2, 1])).unwrap();
    }

    #[test]
    fn word_bound_is_enforced() {
        let cat = ModuleCategory::trivial();
        let long = TensorWord::new(vec![0; 7]);
        assert!(matches!(
            cat.hom_dim(&long, &TensorWord::unit()),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn symmetric_group_table_is_s3() {
        let table = symmetric_group_table(3);
        assert_eq!(table.len(), 6);
        assert!(validate_group_table(&table).is_ok());
        // Non-abelian: some pair fails to commute.
        assert!((0..6).any(|g| (0..6).any(|h| table[g][h] != table[h][g])));
    }

    #[test]
    fn module_validation_catches_breakage() {
        let b = BialgebraPresentation::group_algebra(&cyclic_group_table(2)).unwrap();
        let bad = ModuleObject::new(1, vec![Mat::identity(1), Mat::identity(1).scale(&int(2))]);
        assert!(!bad.validate_over(&b).is_empty());
        assert!(matches!(
            module_category(b, vec![("bad".into(), bad)]),
            Err(Error::Validation(_))
        ));
    }
}
