//! Set partitions, recollements, the refinement order, and the fiber
//! enumerations behind composition and tensor products.
//!
//! Everything is canonically encoded as a restricted growth string (RGS):
//! position 0 gets block 0, and each later position gets either an existing
//! block number or the smallest unused one. Enumeration order is
//! lexicographic on that encoding, and `Ord` on the types agrees with it, so
//! sorted output is reproducible across runs.
//!
//! Order convention: `coarser_or_equal(p, q)` holds when q refines p, i.e.
//! every q-block sits inside a p-block. The smaller element of the order is
//! the more merged one.

use std::fmt;

use crate::{Error, Result};

/// Default cap on ground-set size for exhaustive enumerations (Bell(12) ≈ 4.2M).
pub const DEFAULT_ENUM_LIMIT: usize = 12;

fn is_valid_rgs(rgs: &[usize]) -> bool {
    let mut next = 0;
    for &v in rgs {
        if v > next {
            return false;
        }
        if v == next {
            next += 1;
        }
    }
    true
}

/// Renumbers arbitrary block labels into RGS form (first occurrence order).
fn canonicalize_labels(labels: &[usize]) -> Vec<usize> {
    let mut map: Vec<Option<usize>> = Vec::new();
    let mut out = Vec::with_capacity(labels.len());
    let mut next = 0;
    for &l in labels {
        if map.len() <= l {
            map.resize(l + 1, None);
        }
        let v = *map[l].get_or_insert_with(|| {
            let v = next;
            next += 1;
            v
        });
        out.push(v);
    }
    out
}

fn blocks_of_rgs(rgs: &[usize]) -> Vec<Vec<usize>> {
    let count = rgs.iter().copied().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); count];
    for (pos, &b) in rgs.iter().enumerate() {
        blocks[b].push(pos);
    }
    blocks
}

/// A partition of {0..n−1}, blocks numbered by first occurrence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SetPartition {
    rgs: Vec<usize>,
}

impl SetPartition {
    pub fn from_rgs(rgs: Vec<usize>) -> Result<Self> {
        if !is_valid_rgs(&rgs) {
            return Err(Error::Argument(format!(
                "not a restricted growth string: {rgs:?}"
            )));
        }
        Ok(SetPartition { rgs })
    }

    /// Builds a partition from blocks of positions; they must cover {0..n−1}
    /// exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        let mut seen = 0;
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Argument("empty block".into()));
            }
            for &pos in block {
                if pos >= n {
                    return Err(Error::Argument(format!(
                        "position {pos} outside ground set of size {n}"
                    )));
                }
                if labels[pos] != usize::MAX {
                    return Err(Error::Argument(format!("position {pos} in two blocks")));
                }
                labels[pos] = b;
                seen += 1;
            }
        }
        if seen != n {
            return Err(Error::Argument("blocks do not cover the ground set".into()));
        }
        Ok(SetPartition {
            rgs: canonicalize_labels(&labels),
        })
    }

    /// The all-singletons partition.
    pub fn finest(n: usize) -> Self {
        SetPartition {
            rgs: (0..n).collect(),
        }
    }

    /// The one-block partition (empty for n = 0).
    pub fn coarsest(n: usize) -> Self {
        SetPartition { rgs: vec![0; n] }
    }

    pub fn size(&self) -> usize {
        self.rgs.len()
    }

    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }

    pub fn block_count(&self) -> usize {
        self.rgs.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Blocks in canonical order (by minimal element), positions ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        blocks_of_rgs(&self.rgs)
    }

    pub fn block_of(&self, pos: usize) -> usize {
        self.rgs[pos]
    }
}

/// Shared Display body for both partition types: `{0 2 | 1}`.
fn fmt_blocks(blocks: &[Vec<usize>], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{{")?;
    for (i, block) in blocks.iter().enumerate() {
        if i > 0 {
            write!(f, " | ")?;
        }
        for (j, pos) in block.iter().enumerate() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{pos}")?;
        }
    }
    write!(f, "}}")
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_blocks(&self.blocks(), f)
    }
}

/// A partition of a disjoint union of factors I₁ ⊔ … ⊔ I_l (factor a occupies
/// a contiguous position range) in which every block meets each factor at most
/// once.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Recollement {
    sizes: Vec<usize>,
    rgs: Vec<usize>,
}

impl Recollement {
    pub fn from_rgs(sizes: Vec<usize>, rgs: Vec<usize>) -> Result<Self> {
        if rgs.len() != sizes.iter().sum::<usize>() {
            return Err(Error::Argument(format!(
                "string length {} does not match factor sizes {sizes:?}",
                rgs.len()
            )));
        }
        if !is_valid_rgs(&rgs) {
            return Err(Error::Argument(format!(
                "not a restricted growth string: {rgs:?}"
            )));
        }
        let r = Recollement { sizes, rgs };
        if let Some((factor, block)) = r.injectivity_violation() {
            return Err(Error::Argument(format!(
                "block {block} meets factor {factor} more than once"
            )));
        }
        Ok(r)
    }

    pub fn from_blocks(sizes: Vec<usize>, blocks: &[Vec<usize>]) -> Result<Self> {
        let p = SetPartition::from_blocks(sizes.iter().sum(), blocks)?;
        Self::from_rgs(sizes, p.rgs)
    }

    pub fn from_set_partition(sizes: Vec<usize>, p: &SetPartition) -> Result<Self> {
        Self::from_rgs(sizes, p.rgs.clone())
    }

    /// The all-singletons recollement.
    pub fn finest(sizes: Vec<usize>) -> Self {
        let n = sizes.iter().sum();
        Recollement {
            sizes,
            rgs: (0..n).collect(),
        }
    }

    /// The recollement on two factors of size n whose blocks are {i, n+i}.
    pub fn matched_pairs(n: usize) -> Self {
        let mut rgs: Vec<usize> = (0..n).collect();
        rgs.extend(0..n);
        Recollement {
            sizes: vec![n, n],
            rgs,
        }
    }

    /// The recollement on sizes ++ sizes whose blocks are b ∪ (b shifted by
    /// the total size); with singleton blocks this is `matched_pairs`.
    pub fn doubled(&self) -> Recollement {
        let mut sizes = self.sizes.clone();
        sizes.extend_from_slice(&self.sizes);
        let mut rgs = self.rgs.clone();
        rgs.extend_from_slice(&self.rgs);
        Recollement { sizes, rgs }
    }

    fn injectivity_violation(&self) -> Option<(usize, usize)> {
        let mut seen = vec![usize::MAX; self.block_count()];
        let mut pos = 0;
        for (factor, &size) in self.sizes.iter().enumerate() {
            for _ in 0..size {
                let b = self.rgs[pos];
                if seen[b] == factor {
                    return Some((factor, b));
                }
                seen[b] = factor;
                pos += 1;
            }
        }
        None
    }

    pub fn total(&self) -> usize {
        self.rgs.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn factor_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }

    /// Start offset of each factor's position range, plus the total at the end.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.sizes.len() + 1);
        let mut acc = 0;
        out.push(0);
        for &s in &self.sizes {
            acc += s;
            out.push(acc);
        }
        out
    }

    pub fn factor_of(&self, pos: usize) -> usize {
        let mut acc = 0;
        for (factor, &s) in self.sizes.iter().enumerate() {
            acc += s;
            if pos < acc {
                return factor;
            }
        }
        panic!("position {pos} out of range");
    }

    pub fn block_count(&self) -> usize {
        self.rgs.iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        blocks_of_rgs(&self.rgs)
    }

    pub fn block_of(&self, pos: usize) -> usize {
        self.rgs[pos]
    }

    pub fn set_partition(&self) -> SetPartition {
        SetPartition {
            rgs: self.rgs.clone(),
        }
    }

    /// Restriction of the equivalence relation to the chosen factors, which
    /// become the factors of the result in the order given. Empty blocks are
    /// dropped and the rest renumbered.
    pub fn restrict(&self, factors: &[usize]) -> Result<Recollement> {
        let offsets = self.offsets();
        let mut used = vec![false; self.factor_count()];
        let mut sizes = Vec::with_capacity(factors.len());
        let mut labels = Vec::new();
        for &a in factors {
            if a >= self.factor_count() {
                return Err(Error::Argument(format!(
                    "factor index {a} out of range (have {})",
                    self.factor_count()
                )));
            }
            if used[a] {
                return Err(Error::Argument(format!("factor index {a} repeated")));
            }
            used[a] = true;
            sizes.push(self.sizes[a]);
            labels.extend_from_slice(&self.rgs[offsets[a]..offsets[a + 1]]);
        }
        Ok(Recollement {
            sizes,
            rgs: canonicalize_labels(&labels),
        })
    }

    /// Merges the listed pairs of blocks (by canonical block index), failing
    /// if a resulting block would meet some factor twice.
    pub fn merge_blocks(&self, pairs: &[(usize, usize)]) -> Result<Recollement> {
        let count = self.block_count();
        let mut uf = UnionFind::new(count);
        for &(a, b) in pairs {
            if a >= count || b >= count {
                return Err(Error::Argument(format!(
                    "block index out of range in merge ({a}, {b})"
                )));
            }
            uf.union(a, b);
        }
        let labels: Vec<usize> = self.rgs.iter().map(|&b| uf.find(b)).collect();
        Self::from_rgs(self.sizes.clone(), canonicalize_labels(&labels))
    }
}

impl fmt::Display for Recollement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_blocks(&self.blocks(), f)
    }
}

/// True iff q refines p (every q-block is contained in a p-block); this is
/// p ≤ q, with the smaller element the coarser one.
pub fn coarser_or_equal(p: &Recollement, q: &Recollement) -> Result<bool> {
    if p.sizes != q.sizes {
        return Err(Error::Argument(format!(
            "factor sizes differ: {:?} vs {:?}",
            p.sizes, q.sizes
        )));
    }
    let mut image = vec![usize::MAX; q.block_count()];
    for pos in 0..q.total() {
        let qb = q.rgs[pos];
        let pb = p.rgs[pos];
        if image[qb] == usize::MAX {
            image[qb] = pb;
        } else if image[qb] != pb {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The partition whose blocks are the nonempty pairwise intersections of
/// p-blocks with q-blocks: the least upper bound in the refinement order.
pub fn common_refinement(p: &SetPartition, q: &SetPartition) -> Result<SetPartition> {
    if p.size() != q.size() {
        return Err(Error::Argument(format!(
            "ground sets differ: {} vs {}",
            p.size(),
            q.size()
        )));
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut labels = Vec::with_capacity(p.size());
    for pos in 0..p.size() {
        let key = (p.rgs[pos], q.rgs[pos]);
        let label = pairs.iter().position(|&k| k == key).unwrap_or_else(|| {
            pairs.push(key);
            pairs.len() - 1
        });
        labels.push(label);
    }
    Ok(SetPartition {
        rgs: canonicalize_labels(&labels),
    })
}

/// The sign (−1)^{#blocks(r) − #blocks(s)} for s ≤ r. On the intervals that
/// arise from the double-bracket basis change (s obtained from r by merging
/// disjoint pairs of blocks) this is the Möbius function of the order.
pub fn mobius(s: &Recollement, r: &Recollement) -> Result<i64> {
    if !coarser_or_equal(s, r)? {
        return Err(Error::Argument(
            "Möbius value requested for an incomparable pair".into(),
        ));
    }
    let diff = r.block_count() - s.block_count();
    Ok(if diff % 2 == 0 { 1 } else { -1 })
}

/// Iterates restricted growth strings of a fixed length in lexicographic
/// order, starting from all zeros.
fn next_rgs(rgs: &mut [usize]) -> bool {
    let n = rgs.len();
    if n == 0 {
        return false;
    }
    let mut prefix_max = vec![0; n];
    for i in 1..n {
        prefix_max[i] = prefix_max[i - 1].max(rgs[i - 1]);
    }
    for i in (1..n).rev() {
        if rgs[i] <= prefix_max[i] {
            rgs[i] += 1;
            for v in rgs[i + 1..].iter_mut() {
                *v = 0;
            }
            return true;
        }
    }
    false
}

/// All partitions of {0..n−1} in restricted-growth lexicographic order.
pub fn enumerate_partitions(n: usize) -> Result<Vec<SetPartition>> {
    enumerate_partitions_with_limit(n, DEFAULT_ENUM_LIMIT)
}

pub fn enumerate_partitions_with_limit(n: usize, limit: usize) -> Result<Vec<SetPartition>> {
    if n > limit {
        return Err(Error::Resource(format!(
            "partition enumeration on {n} elements exceeds the limit of {limit}"
        )));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0; n];
    loop {
        out.push(SetPartition { rgs: rgs.clone() });
        if !next_rgs(&mut rgs) {
            break;
        }
    }
    Ok(out)
}

/// All recollements with the given factor sizes, in restricted-growth
/// lexicographic order.
pub fn enumerate_recollements(sizes: &[usize]) -> Result<Vec<Recollement>> {
    enumerate_recollements_with_limit(sizes, DEFAULT_ENUM_LIMIT)
}

pub fn enumerate_recollements_with_limit(
    sizes: &[usize],
    limit: usize,
) -> Result<Vec<Recollement>> {
    let n: usize = sizes.iter().sum();
    if n > limit {
        return Err(Error::Resource(format!(
            "recollement enumeration on {n} elements exceeds the limit of {limit}"
        )));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0; n];
    loop {
        let candidate = Recollement {
            sizes: sizes.to_vec(),
            rgs: rgs.clone(),
        };
        if candidate.injectivity_violation().is_none() {
            out.push(candidate);
        }
        if !next_rgs(&mut rgs) {
            break;
        }
    }
    Ok(out)
}

/// Bell numbers by the Bell triangle recurrence (exact through n = 25).
pub fn bell_number(n: usize) -> u128 {
    assert!(n <= 25, "Bell({n}) overflows u128 bookkeeping");
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &v in &row {
            next.push(next.last().unwrap() + v);
        }
        row = next;
    }
    row[0]
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

fn split_shapes_match(r: &Recollement, s: &Recollement, middle: usize) -> Result<()> {
    if middle > r.factor_count() || middle > s.factor_count() {
        return Err(Error::Argument(format!(
            "middle factor count {middle} exceeds the given shapes"
        )));
    }
    let r_mid = &r.sizes[r.factor_count() - middle..];
    let s_mid = &s.sizes[..middle];
    if r_mid != s_mid {
        return Err(Error::Argument(format!(
            "shared factor sizes differ: {r_mid:?} vs {s_mid:?}"
        )));
    }
    Ok(())
}

/// Union-find closure of r (on left ++ middle factors) and s (on middle ++
/// right factors) over the combined left ++ middle ++ right positions.
/// Returns None when no partition restricts to both r and s: either the glued
/// relation meets some factor twice, or gluing merged blocks of r or of s.
/// With a single middle factor neither failure can occur.
pub fn generated_closure_general(
    r: &Recollement,
    s: &Recollement,
    middle: usize,
) -> Result<Option<Recollement>> {
    split_shapes_match(r, s, middle)?;
    let left_factors = r.factor_count() - middle;
    let left_total: usize = r.sizes[..left_factors].iter().sum();
    let mid_total: usize = r.sizes[left_factors..].iter().sum();
    let right_total = s.total() - mid_total;
    let total = left_total + mid_total + right_total;

    let mut uf = UnionFind::new(total);
    for block in r.blocks() {
        for pair in block.windows(2) {
            uf.union(pair[0], pair[1]);
        }
    }
    for block in s.blocks() {
        for pair in block.windows(2) {
            uf.union(pair[0] + left_total, pair[1] + left_total);
        }
    }

    let mut sizes = r.sizes.clone();
    sizes.extend_from_slice(&s.sizes[middle..]);
    let labels: Vec<usize> = (0..total).map(|p| uf.find(p)).collect();
    let closure = Recollement {
        sizes,
        rgs: canonicalize_labels(&labels),
    };
    if closure.injectivity_violation().is_some() {
        return Ok(None);
    }
    let r_factors: Vec<usize> = (0..r.factor_count()).collect();
    let s_factors: Vec<usize> = (left_factors..closure.factor_count()).collect();
    if closure.restrict(&r_factors)? != *r || closure.restrict(&s_factors)? != *s {
        return Ok(None);
    }
    Ok(Some(closure))
}

/// The equivalence relation on I ⊔ J ⊔ K generated by r ∈ R(I,J) and
/// s ∈ R(J,K); always a valid recollement in this two-factor form.
pub fn generated_closure(r: &Recollement, s: &Recollement) -> Result<Recollement> {
    if r.factor_count() != 2 || s.factor_count() != 2 {
        return Err(Error::Argument(
            "generated_closure expects recollements on two factors each".into(),
        ));
    }
    let closure = generated_closure_general(r, s, 1)?;
    Ok(closure.expect("single shared factor cannot produce a gluing conflict"))
}

/// All sets of disjoint pairs (i, j) with i < na, j < nb, each index used at
/// most once.
pub(crate) fn partial_matchings(na: usize, nb: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(i: usize, na: usize, used: &mut [bool], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if i == na {
            out.push(cur.clone());
            return;
        }
        go(i + 1, na, used, cur, out);
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                cur.push((i, j));
                go(i + 1, na, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, na, &mut vec![false; nb], &mut Vec::new(), &mut out);
    out
}

/// All recollements u on left ++ middle ++ right whose restriction to the
/// left ++ middle factors is r and to the middle ++ right factors is s.
/// These are exactly the mergers of the generated closure along partial
/// matchings of its left-only blocks with its right-only blocks; the closure
/// itself is the unique maximal fiber.
pub fn enumerate_compose_fibers_general(
    r: &Recollement,
    s: &Recollement,
    middle: usize,
) -> Result<Vec<Recollement>> {
    let Some(closure) = generated_closure_general(r, s, middle)? else {
        return Ok(Vec::new());
    };
    let left_factors = r.factor_count() - middle;
    let left_total: usize = r.sizes[..left_factors].iter().sum();
    let mid_total: usize = r.sizes[left_factors..].iter().sum();
    let right_start = left_total + mid_total;

    let mut left_only = Vec::new();
    let mut right_only = Vec::new();
    for (b, block) in closure.blocks().iter().enumerate() {
        if block.iter().all(|&p| p < left_total) {
            left_only.push(b);
        } else if block.iter().all(|&p| p >= right_start) {
            right_only.push(b);
        }
    }

    let mut out = Vec::new();
    for matching in partial_matchings(left_only.len(), right_only.len()) {
        let pairs: Vec<(usize, usize)> = matching
            .iter()
            .map(|&(i, j)| (left_only[i], right_only[j]))
            .collect();
        out.push(closure.merge_blocks(&pairs)?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The composition fibers for r ∈ R(I,J), s ∈ R(J,K): all u ∈ R(I,J,K) with
/// restrict(u, {I,J}) = r and restrict(u, {J,K}) = s, in canonical order.
pub fn enumerate_compose_fibers(r: &Recollement, s: &Recollement) -> Result<Vec<Recollement>> {
    if r.factor_count() != 2 || s.factor_count() != 2 {
        return Err(Error::Argument(
            "enumerate_compose_fibers expects recollements on two factors each".into(),
        ));
    }
    let fibers = enumerate_compose_fibers_general(r, s, 1)?;
    let mut outer: Vec<Recollement> = Vec::with_capacity(fibers.len());
    for u in &fibers {
        outer.push(u.restrict(&[0, 2])?);
    }
    outer.sort();
    outer.dedup();
    assert_eq!(
        outer.len(),
        fibers.len(),
        "restriction to the outer factors must be injective on fibers"
    );
    Ok(fibers)
}

/// All recollements u on `r_slots.len() + s_slots.len()` factors whose
/// restriction to the r slots is r and to the s slots is s, where the slot
/// lists say which result factor each factor of r and s becomes. Since the
/// two factor sets are disjoint, the fibers are exactly the partial matchings
/// of r-blocks with s-blocks.
pub fn enumerate_merge_fibers(
    r: &Recollement,
    s: &Recollement,
    r_slots: &[usize],
    s_slots: &[usize],
) -> Result<Vec<Recollement>> {
    let total_factors = r.factor_count() + s.factor_count();
    if r_slots.len() != r.factor_count() || s_slots.len() != s.factor_count() {
        return Err(Error::Argument("slot lists must match factor counts".into()));
    }
    let mut sizes = vec![usize::MAX; total_factors];
    for (k, &slot) in r_slots.iter().chain(s_slots.iter()).enumerate() {
        if slot >= total_factors || sizes[slot] != usize::MAX {
            return Err(Error::Argument(format!("bad slot assignment {slot}")));
        }
        let (rec, idx) = if k < r.factor_count() {
            (r, k)
        } else {
            (s, k - r.factor_count())
        };
        sizes[slot] = rec.sizes()[idx];
    }

    // Global position of each factor's range in the result.
    let mut result_offsets = vec![0usize; total_factors + 1];
    for i in 0..total_factors {
        result_offsets[i + 1] = result_offsets[i] + sizes[i];
    }
    let map_positions = |rec: &Recollement, slots: &[usize]| -> Vec<usize> {
        let offsets = rec.offsets();
        let mut map = vec![0; rec.total()];
        for (k, &slot) in slots.iter().enumerate() {
            for (d, item) in map[offsets[k]..offsets[k + 1]].iter_mut().enumerate() {
                *item = result_offsets[slot] + d;
            }
        }
        map
    };
    let r_map = map_positions(r, r_slots);
    let s_map = map_positions(s, s_slots);

    let r_blocks: Vec<Vec<usize>> = r
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&p| r_map[p]).collect())
        .collect();
    let s_blocks: Vec<Vec<usize>> = s
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&p| s_map[p]).collect())
        .collect();

    let mut out = Vec::new();
    for matching in partial_matchings(r_blocks.len(), s_blocks.len()) {
        let mut merged_into: Vec<Option<usize>> = vec![None; s_blocks.len()];
        for &(i, j) in &matching {
            merged_into[j] = Some(i);
        }
        let mut blocks: Vec<Vec<usize>> = r_blocks.clone();
        for (j, block) in s_blocks.iter().enumerate() {
            match merged_into[j] {
                Some(i) => blocks[i].extend_from_slice(block),
                None => blocks.push(block.clone()),
            }
        }
        for b in &mut blocks {
            b.sort();
        }
        out.push(Recollement::from_blocks(sizes.clone(), &blocks)?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The tensor fibers for r ∈ R(I,K), s ∈ R(J,L): all u ∈ R(I,J,K,L) with
/// restrict(u, {I,K}) = r and restrict(u, {J,L}) = s, in canonical order.
pub fn enumerate_tensor_fibers(r: &Recollement, s: &Recollement) -> Result<Vec<Recollement>> {
    if r.factor_count() != 2 || s.factor_count() != 2 {
        return Err(Error::Argument(
            "enumerate_tensor_fibers expects recollements on two factors each".into(),
        ));
    }
    enumerate_merge_fibers(r, s, &[0, 2], &[1, 3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(sizes: &[usize], blocks: &[&[usize]]) -> Recollement {
        let blocks: Vec<Vec<usize>> = blocks.iter().map(|b| b.to_vec()).collect();
        Recollement::from_blocks(sizes.to_vec(), &blocks).unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(0).unwrap().len(), 1);
        assert_eq!(enumerate_partitions(3).unwrap().len(), 5);
        assert_eq!(enumerate_partitions(4).unwrap().len(), 15);
    }

    #[test]
    fn partition_order_is_rgs_lex() {
        let all = enumerate_partitions(3).unwrap();
        let strings: Vec<&[usize]> = all.iter().map(|p| p.rgs()).collect();
        assert_eq!(
            strings,
            vec![
                &[0, 0, 0][..],
                &[0, 0, 1],
                &[0, 1, 0],
                &[0, 1, 1],
                &[0, 1, 2]
            ]
        );
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn partition_counts_match_bell_triangle() {
        for n in 0..=8 {
            assert_eq!(
                enumerate_partitions(n).unwrap().len() as u128,
                bell_number(n),
                "Bell({n})"
            );
        }
    }

    #[test]
    fn enumeration_limits() {
        assert!(matches!(
            enumerate_partitions(13),
            Err(Error::Resource(_))
        ));
        assert!(enumerate_partitions_with_limit(3, 2).is_err());
        assert!(matches!(
            enumerate_recollements(&[7, 7]),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn recollement_counts() {
        assert_eq!(enumerate_recollements(&[1, 1]).unwrap().len(), 2);
        assert_eq!(enumerate_recollements(&[2, 2]).unwrap().len(), 7);
        assert_eq!(enumerate_recollements(&[]).unwrap().len(), 1);
        // Sum over k of C(3,k)² k! = 1 + 9 + 18 + 6.
        assert_eq!(enumerate_recollements(&[3, 3]).unwrap().len(), 34);
        // Singleton factors impose no constraint: all partitions survive.
        assert_eq!(
            enumerate_recollements(&[1; 6]).unwrap().len() as u128,
            bell_number(6)
        );
    }

    #[test]
    fn injectivity_is_enforced() {
        assert!(Recollement::from_rgs(vec![2, 1], vec![0, 0, 1]).is_err());
        assert!(Recollement::from_rgs(vec![2, 1], vec![0, 1, 0]).is_ok());
    }

    #[test]
    fn coarser_or_equal_examples() {
        let glued = rec(&[1, 1], &[&[0, 1]]);
        let split = Recollement::finest(vec![1, 1]);
        assert!(coarser_or_equal(&glued, &glued).unwrap());
        assert!(coarser_or_equal(&glued, &split).unwrap());
        assert!(!coarser_or_equal(&split, &glued).unwrap());
        assert!(coarser_or_equal(&glued, &Recollement::finest(vec![2, 2])).is_err());
    }

    #[test]
    fn common_refinement_examples() {
        let p = SetPartition::from_blocks(3, &[vec![0, 1], vec![2]]).unwrap();
        let q = SetPartition::from_blocks(3, &[vec![0], vec![1, 2]]).unwrap();
        assert_eq!(common_refinement(&p, &q).unwrap(), SetPartition::finest(3));
        assert_eq!(common_refinement(&p, &p).unwrap(), p);
        assert_eq!(
            common_refinement(&p, &SetPartition::finest(3)).unwrap(),
            SetPartition::finest(3)
        );
    }

    #[test]
    fn restrict_examples() {
        let r = rec(&[1, 1, 1], &[&[0, 1, 2]]);
        assert_eq!(r.restrict(&[0, 1, 2]).unwrap(), r);
        assert_eq!(r.restrict(&[0, 2]).unwrap(), rec(&[1, 1], &[&[0, 1]]));
        assert_eq!(r.restrict(&[]).unwrap(), Recollement::finest(vec![]));
        assert!(r.restrict(&[3]).is_err());
        assert!(r.restrict(&[1, 1]).is_err());
    }

    #[test]
    fn restrict_composes() {
        let r = rec(&[2, 1, 2], &[&[0, 2, 4], &[1, 3]]);
        let once = r.restrict(&[0, 1, 2]).unwrap();
        assert_eq!(once, r);
        let two_step = r.restrict(&[1, 2]).unwrap().restrict(&[1]).unwrap();
        assert_eq!(two_step, r.restrict(&[2]).unwrap());
    }

    #[test]
    fn closure_examples() {
        let fin = Recollement::finest(vec![1, 1]);
        assert_eq!(
            generated_closure(&fin, &fin).unwrap(),
            Recollement::finest(vec![1, 1, 1])
        );
        let glued = rec(&[1, 1], &[&[0, 1]]);
        assert_eq!(
            generated_closure(&glued, &glued).unwrap(),
            rec(&[1, 1, 1], &[&[0, 1, 2]])
        );
        assert_eq!(
            generated_closure(&glued, &fin).unwrap(),
            rec(&[1, 1, 1], &[&[0, 1], &[2]])
        );
    }

    #[test]
    fn closure_can_fail_with_multiple_middle_factors() {
        // r matches each left position to one middle factor; s glues the two
        // middle factors to one right position, forcing the left positions
        // into a single block and breaking the restriction back to r.
        let r = rec(&[2, 1, 1], &[&[0, 2], &[1, 3]]);
        let s = rec(&[1, 1, 1], &[&[0, 1, 2]]);
        assert_eq!(generated_closure_general(&r, &s, 2).unwrap(), None);
        assert!(enumerate_compose_fibers_general(&r, &s, 2)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn compose_fiber_examples() {
        let fin = Recollement::finest(vec![1, 1]);
        let fibers = enumerate_compose_fibers(&fin, &fin).unwrap();
        assert_eq!(
            fibers,
            vec![
                rec(&[1, 1, 1], &[&[0, 2], &[1]]),
                Recollement::finest(vec![1, 1, 1]),
            ]
        );
        let glued = rec(&[1, 1], &[&[0, 1]]);
        assert_eq!(
            enumerate_compose_fibers(&glued, &glued).unwrap(),
            vec![rec(&[1, 1, 1], &[&[0, 1, 2]])]
        );
        let empty = Recollement::finest(vec![0, 0]);
        assert_eq!(
            enumerate_compose_fibers(&empty, &empty).unwrap(),
            vec![Recollement::finest(vec![0, 0, 0])]
        );
    }

    #[test]
    fn tensor_fiber_examples() {
        let r = rec(&[1, 1], &[&[0, 1]]);
        let s = rec(&[1, 1], &[&[0, 1]]);
        let fibers = enumerate_tensor_fibers(&r, &s).unwrap();
        assert_eq!(
            fibers,
            vec![
                rec(&[1, 1, 1, 1], &[&[0, 1, 2, 3]]),
                rec(&[1, 1, 1, 1], &[&[0, 2], &[1, 3]]),
            ]
        );
        let empty = Recollement::finest(vec![0, 0]);
        assert_eq!(enumerate_tensor_fibers(&empty, &empty).unwrap().len(), 1);
        let one = enumerate_tensor_fibers(&r, &empty).unwrap();
        assert_eq!(one, vec![rec(&[1, 0, 1, 0], &[&[0, 1]])]);
    }

    #[test]
    fn mobius_examples() {
        let r = Recollement::finest(vec![2, 2]);
        assert_eq!(mobius(&r, &r).unwrap(), 1);
        let one_merge = r.merge_blocks(&[(0, 2)]).unwrap();
        assert_eq!(mobius(&one_merge, &r).unwrap(), -1);
        let two_merges = r.merge_blocks(&[(0, 2), (1, 3)]).unwrap();
        assert_eq!(mobius(&two_merges, &r).unwrap(), 1);
        assert!(mobius(&r, &one_merge).is_err());
    }

    #[test]
    fn merge_blocks_checks_injectivity() {
        let r = Recollement::finest(vec![2, 1]);
        assert!(r.merge_blocks(&[(0, 1)]).is_err());
        assert!(r.merge_blocks(&[(0, 2)]).is_ok());
    }

    #[test]
    fn doubled_matches_pairing() {
        assert_eq!(
            Recollement::finest(vec![3]).doubled(),
            Recollement::matched_pairs(3)
        );
        let r = rec(&[1, 1], &[&[0, 1]]);
        assert_eq!(r.doubled(), rec(&[1, 1, 1, 1], &[&[0, 1, 2, 3]]));
    }

    #[test]
    fn interval_is_a_power_set() {
        // Merge two disjoint block pairs out of a four-block recollement and
        // check that the interval below it is boolean with Möbius sum zero.
        let r = Recollement::finest(vec![2, 2]);
        let s = r.merge_blocks(&[(0, 2), (1, 3)]).unwrap();
        let interval: Vec<Recollement> = enumerate_recollements(&[2, 2])
            .unwrap()
            .into_iter()
            .filter(|u| {
                coarser_or_equal(&s, u).unwrap() && coarser_or_equal(u, &r).unwrap()
            })
            .collect();
        assert_eq!(interval.len(), 4);
        let total: i64 = interval.iter().map(|u| mobius(&s, u).unwrap()).sum();
        assert_eq!(total, 0);
    }

    #[test]
    fn display_formats() {
        let r = rec(&[2, 2], &[&[0, 3], &[1, 2]]);
        assert_eq!(r.to_string(), "{0 3 | 1 2}");
        assert_eq!(SetPartition::finest(0).to_string(), "{}");
    }

    proptest! {
        #[test]
        fn fibers_restrict_correctly(
            (a, b, c) in (0usize..=2, 0usize..=2, 0usize..=2),
            seed_r in 0usize..1000,
            seed_s in 0usize..1000,
        ) {
            let rs = enumerate_recollements(&[a, b]).unwrap();
            let ss = enumerate_recollements(&[b, c]).unwrap();
            let r = &rs[seed_r % rs.len()];
            let s = &ss[seed_s % ss.len()];
            let fibers = enumerate_compose_fibers(r, s).unwrap();
            prop_assert!(!fibers.is_empty());
            let closure = generated_closure(r, s).unwrap();
            let outer_sizes: Vec<usize> = fibers
                .iter()
                .map(|u| u.block_count() - u.restrict(&[0, 2]).unwrap().block_count())
                .collect();
            for u in &fibers {
                prop_assert_eq!(u.restrict(&[0, 1]).unwrap(), r.clone());
                prop_assert_eq!(u.restrict(&[1, 2]).unwrap(), s.clone());
                // The closure is the unique maximal fiber: every u is coarser.
                prop_assert!(coarser_or_equal(u, &closure).unwrap());
            }
            // #u − #restrict(u, {1,3}) is the same for every fiber.
            prop_assert!(outer_sizes.windows(2).all(|w| w[0] == w[1]));
            // Exhaustive cross-check of the fiber set.
            let brute: Vec<Recollement> = enumerate_recollements(&[a, b, c])
                .unwrap()
                .into_iter()
                .filter(|u| {
                    u.restrict(&[0, 1]).unwrap() == *r && u.restrict(&[1, 2]).unwrap() == *s
                })
                .collect();
            prop_assert_eq!(fibers, brute);
        }

        #[test]
        fn tensor_fibers_match_exhaustive_filter(
            (a, b, c, d) in (0usize..=2, 0usize..=1, 0usize..=2, 0usize..=1),
            seed_r in 0usize..1000,
            seed_s in 0usize..1000,
        ) {
            let rs = enumerate_recollements(&[a, c]).unwrap();
            let ss = enumerate_recollements(&[b, d]).unwrap();
            let r = &rs[seed_r % rs.len()];
            let s = &ss[seed_s % ss.len()];
            let fibers = enumerate_tensor_fibers(r, s).unwrap();
            let brute: Vec<Recollement> = enumerate_recollements(&[a, b, c, d])
                .unwrap()
                .into_iter()
                .filter(|u| {
                    u.restrict(&[0, 2]).unwrap() == *r && u.restrict(&[1, 3]).unwrap() == *s
                })
                .collect();
            prop_assert_eq!(fibers, brute);
        }

        #[test]
        fn refinement_order_is_a_partial_order(
            sizes in prop::collection::vec(0usize..=2, 2),
            seeds in prop::collection::vec(0usize..1000, 3),
        ) {
            let all = enumerate_recollements(&sizes).unwrap();
            let p = &all[seeds[0] % all.len()];
            let q = &all[seeds[1] % all.len()];
            let u = &all[seeds[2] % all.len()];
            prop_assert!(coarser_or_equal(p, p).unwrap());
            if coarser_or_equal(p, q).unwrap() && coarser_or_equal(q, p).unwrap() {
                prop_assert_eq!(p, q);
            }
            if coarser_or_equal(p, q).unwrap() && coarser_or_equal(q, u).unwrap() {
                prop_assert!(coarser_or_equal(p, u).unwrap());
            }
        }
    }
}
