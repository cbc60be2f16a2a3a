//! The operator `c1^ = (c_1 * -)|_{q=1}` and positivity of `T = sum_{i<=dim} c1^i`.
//!
//! `M` is entrywise nonnegative, so an entry of `T` is positive exactly when the
//! quantum Bruhat graph has a path of length at most `dim IG` between the two
//! classes. Positivity is therefore computed as bounded reachability; the exact
//! big-integer `T` is kept for small shapes as a cross-check.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chevalley::{ChevalleyTable, QuantumKind, WindowPolicy};
use crate::error::{Error, Result};
use crate::partitions::{point_partition, OddPartition, Shape};

/// Matrix of `c1^` in the Schubert basis: `entries[i][j]` is the coefficient of
/// `basis[i]` in `c1^(basis[j])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C1Matrix {
    pub shape: Shape,
    pub policy: WindowPolicy,
    pub basis: Vec<OddPartition>,
    pub entries: Vec<Vec<u64>>,
}

impl C1Matrix {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row][col]
    }

    /// Out-neighbours of column `j`: rows with a positive entry.
    pub fn out_neighbors(&self, j: usize) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.entries[i][j] > 0).collect()
    }

    pub fn position(&self, lambda: &OddPartition) -> Option<usize> {
        self.basis.iter().position(|p| p == lambda)
    }

    pub fn trace(&self) -> u64 {
        (0..self.size()).map(|i| self.entries[i][i]).sum()
    }

    /// Positions at which `self` and `other` differ, as `(row, col)`.
    pub fn differences(&self, other: &C1Matrix) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.size() {
            for j in 0..self.size() {
                if self.entries[i][j] != other.entries[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

pub fn build_c1_matrix(shape: Shape, policy: WindowPolicy) -> C1Matrix {
    c1_matrix_from_table(&ChevalleyTable::new(shape, policy))
}

/// `q` is set to 1, so classical and quantum contributions to one entry add.
pub fn c1_matrix_from_table(table: &ChevalleyTable) -> C1Matrix {
    let basis = table.basis();
    let r = table.shape().fano_index() as u64;
    let size = basis.len();
    let mut entries = vec![vec![0u64; size]; size];
    for (j, expansion) in table.expansions().iter().enumerate() {
        for term in &expansion.classical {
            let i = basis.position(&term.partition).expect("cover outside basis");
            entries[i][j] += r * term.coefficient;
        }
        for term in &expansion.quantum {
            let i = basis.position(&term.partition).expect("quantum term outside basis");
            entries[i][j] += r * term.coefficient;
        }
    }
    C1Matrix {
        shape: *table.shape(),
        policy: table.policy(),
        basis: basis.elements().to_vec(),
        entries,
    }
}

/// One matrix entry on which the two window policies disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowDifference {
    pub from: OddPartition,
    pub to: OddPartition,
    pub standard: u64,
    pub paper_literal: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowAudit {
    pub identical: bool,
    pub differences: Vec<WindowDifference>,
}

/// Builds `M` under both window policies and lists every differing entry.
pub fn window_audit(shape: Shape) -> WindowAudit {
    let standard = build_c1_matrix(shape, WindowPolicy::Standard);
    let literal = build_c1_matrix(shape, WindowPolicy::PaperLiteral);
    let differences: Vec<WindowDifference> = standard
        .differences(&literal)
        .into_iter()
        .map(|(i, j)| WindowDifference {
            from: standard.basis[j].clone(),
            to: standard.basis[i].clone(),
            standard: standard.get(i, j),
            paper_literal: literal.get(i, j),
        })
        .collect();
    WindowAudit {
        identical: differences.is_empty(),
        differences,
    }
}

/// Square boolean matrix stored as one bitset per column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolMatrix {
    size: usize,
    columns: Vec<Vec<u64>>,
}

impl BoolMatrix {
    fn empty(size: usize) -> Self {
        let words = size.div_ceil(64);
        BoolMatrix {
            size,
            columns: vec![vec![0; words]; size],
        }
    }

    fn identity(size: usize) -> Self {
        let mut m = Self::empty(size);
        for i in 0..size {
            m.set(i, i);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.columns[col][row / 64] >> (row % 64) & 1 == 1
    }

    fn set(&mut self, row: usize, col: usize) {
        self.columns[col][row / 64] |= 1 << (row % 64);
    }

    /// Boolean product `self * other`.
    fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        let mut out = Self::empty(self.size);
        for (col, bits) in other.columns.iter().enumerate() {
            let target = &mut out.columns[col];
            for mid in 0..self.size {
                if bits[mid / 64] >> (mid % 64) & 1 == 1 {
                    for (t, s) in target.iter_mut().zip(&self.columns[mid]) {
                        *t |= s;
                    }
                }
            }
        }
        out
    }

    pub fn all_true(&self) -> bool {
        (0..self.size).all(|c| (0..self.size).all(|r| self.get(r, c)))
    }

    pub fn row_all_true(&self, row: usize) -> bool {
        (0..self.size).all(|c| self.get(row, c))
    }

    pub fn column_all_true(&self, col: usize) -> bool {
        (0..self.size).all(|r| self.get(r, col))
    }
}

fn adjacency_pattern(m: &C1Matrix) -> BoolMatrix {
    let mut a = BoolMatrix::identity(m.size());
    for (i, row) in m.entries.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > 0 {
                a.set(i, j);
            }
        }
    }
    a
}

/// Entry `(mu, lambda)` is true iff `[X(mu)]` has positive coefficient in `T[X(lambda)]`,
/// computed as `(I + A)^dim` by repeated boolean squaring.
pub fn reachability_t(m: &C1Matrix) -> BoolMatrix {
    let mut base = adjacency_pattern(m);
    let mut acc = BoolMatrix::identity(m.size());
    let mut exp = m.shape.dimension();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc.mul(&base);
        }
        exp >>= 1;
        if exp > 0 {
            base = base.mul(&base);
        }
    }
    acc
}

/// Breadth-first distances from `source` along edges of `M`.
pub fn bfs_distances(m: &C1Matrix, source: usize) -> Vec<Option<usize>> {
    bfs_on(&adjacency(m), source).0
}

fn adjacency(m: &C1Matrix) -> Vec<Vec<usize>> {
    (0..m.size()).map(|j| m.out_neighbors(j)).collect()
}

fn bfs_on(adj: &[Vec<usize>], source: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let mut dist = vec![None; adj.len()];
    let mut parent = vec![None; adj.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    (dist, parent)
}

/// Same matrix as [`reachability_t`], computed by per-source BFS capped at `dim IG`.
pub fn reachability_t_bfs(m: &C1Matrix) -> BoolMatrix {
    let cap = m.shape.dimension();
    let adj = adjacency(m);
    let mut out = BoolMatrix::empty(m.size());
    for source in 0..m.size() {
        for (target, d) in bfs_on(&adj, source).0.into_iter().enumerate() {
            if d.is_some_and(|d| d <= cap) {
                out.set(target, source);
            }
        }
    }
    out
}

/// `T = sum_{i=0}^{dim} M^i` over the integers.
pub fn exact_t(m: &C1Matrix) -> Vec<Vec<BigUint>> {
    let size = m.size();
    let big: Vec<Vec<BigUint>> = m
        .entries
        .iter()
        .map(|row| row.iter().map(|&v| BigUint::from(v)).collect())
        .collect();
    let mut power: Vec<Vec<BigUint>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| if i == j { BigUint::one() } else { BigUint::zero() })
                .collect()
        })
        .collect();
    let mut total = power.clone();
    for _ in 0..m.shape.dimension() {
        let mut next = vec![vec![BigUint::zero(); size]; size];
        for i in 0..size {
            for l in 0..size {
                if big[i][l].is_zero() {
                    continue;
                }
                for j in 0..size {
                    if !power[l][j].is_zero() {
                        next[i][j] += &big[i][l] * &power[l][j];
                    }
                }
            }
        }
        power = next;
        for i in 0..size {
            for j in 0..size {
                total[i][j] += &power[i][j];
            }
        }
    }
    total
}

/// A shortest path in the quantum Bruhat graph, endpoints included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub from: OddPartition,
    pub to: OddPartition,
    pub path: Option<Vec<OddPartition>>,
}

impl Witness {
    pub fn length(&self) -> Option<usize> {
        self.path.as_ref().map(|p| p.len() - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub shape: Shape,
    pub dimension: usize,
    /// Every class reaches the point class.
    pub a: bool,
    /// The point class reaches `(0)`.
    pub b: bool,
    /// `(0)` reaches every class.
    pub c: bool,
    pub to_point: Vec<Witness>,
    pub point_to_zero: Witness,
    pub zero_to: Vec<Witness>,
}

impl PositivityReport {
    pub fn holds(&self) -> bool {
        self.a && self.b && self.c
    }

    pub fn longest_witness(&self) -> Option<usize> {
        self.to_point
            .iter()
            .chain(std::iter::once(&self.point_to_zero))
            .chain(&self.zero_to)
            .filter_map(Witness::length)
            .max()
    }
}

fn trace_path(basis: &[OddPartition], parent: &[Option<usize>], target: usize) -> Vec<OddPartition> {
    let mut path = vec![basis[target].clone()];
    let mut cur = target;
    while let Some(p) = parent[cur] {
        path.push(basis[p].clone());
        cur = p;
    }
    path.reverse();
    path
}

pub fn verify_theorem_positive(m: &C1Matrix) -> PositivityReport {
    let reach = reachability_t(m);
    let size = m.size();
    let rho = point_partition(&m.shape);
    let zero = OddPartition::zero(&m.shape);
    let rho_idx = m.position(&rho).expect("point class in basis");
    let zero_idx = m.position(&zero).expect("zero class in basis");
    let cap = m.shape.dimension();

    let adj = adjacency(m);
    let mut radj = vec![Vec::new(); size];
    for (u, outs) in adj.iter().enumerate() {
        for &v in outs {
            radj[v].push(u);
        }
    }

    let bounded = |d: Option<usize>| d.filter(|&d| d <= cap);

    // Reverse BFS from rho: parent pointers lead towards rho.
    let (to_rho_dist, to_rho_next) = bfs_on(&radj, rho_idx);
    let to_point = (0..size)
        .map(|i| {
            let path = bounded(to_rho_dist[i]).map(|_| {
                let mut p = trace_path(&m.basis, &to_rho_next, i);
                p.reverse();
                p
            });
            Witness {
                from: m.basis[i].clone(),
                to: rho.clone(),
                path,
            }
        })
        .collect();

    let (rho_dist, rho_parent) = bfs_on(&adj, rho_idx);
    let point_to_zero = Witness {
        from: rho.clone(),
        to: zero.clone(),
        path: bounded(rho_dist[zero_idx]).map(|_| trace_path(&m.basis, &rho_parent, zero_idx)),
    };

    let (zero_dist, zero_parent) = bfs_on(&adj, zero_idx);
    let zero_to = (0..size)
        .map(|i| Witness {
            from: zero.clone(),
            to: m.basis[i].clone(),
            path: bounded(zero_dist[i]).map(|_| trace_path(&m.basis, &zero_parent, i)),
        })
        .collect();

    PositivityReport {
        shape: m.shape,
        dimension: cap,
        a: reach.row_all_true(rho_idx),
        b: reach.get(zero_idx, rho_idx),
        c: reach.column_all_true(zero_idx),
        to_point,
        point_to_zero,
        zero_to,
    }
}

/// Report on the open question whether `T[X(lambda)] > 0` for every `lambda`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub shape: Shape,
    pub holds: bool,
    /// `(from, to)` pairs with no path of length `<= dim IG`.
    pub failing_pairs: Vec<(OddPartition, OddPartition)>,
    /// Longest shortest-path distance; `None` when some pair is unreachable.
    pub diameter: Option<usize>,
}

pub fn verify_conjecture_t_positive(m: &C1Matrix) -> ConjectureReport {
    let reach = reachability_t(m);
    let size = m.size();
    let mut failing_pairs = Vec::new();
    for src in 0..size {
        for dst in 0..size {
            if !reach.get(dst, src) {
                failing_pairs.push((m.basis[src].clone(), m.basis[dst].clone()));
            }
        }
    }
    let adj = adjacency(m);
    let mut diameter = Some(0);
    for src in 0..size {
        for d in bfs_on(&adj, src).0 {
            diameter = match (diameter, d) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
        }
    }
    ConjectureReport {
        shape: m.shape,
        holds: failing_pairs.is_empty(),
        failing_pairs,
        diameter,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Cover,
    QuantumStar,
    QuantumStarStar,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Cover => "cover",
            EdgeKind::QuantumStar => "quantum_star",
            EdgeKind::QuantumStarStar => "quantum_star_star",
        }
    }

    pub fn q_exponent(self) -> u32 {
        match self {
            EdgeKind::Cover => 0,
            _ => 1,
        }
    }
}

/// A path in the quantum Bruhat graph with per-edge Chevalley data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChevalleyChain {
    pub vertices: Vec<OddPartition>,
    pub edge_kinds: Vec<EdgeKind>,
    pub edge_coefficients: Vec<u64>,
    pub q_degrees: Vec<u32>,
}

impl ChevalleyChain {
    fn start(from: OddPartition) -> Self {
        ChevalleyChain {
            vertices: vec![from],
            edge_kinds: Vec::new(),
            edge_coefficients: Vec::new(),
            q_degrees: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.edge_kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_kinds.is_empty()
    }

    pub fn last(&self) -> &OddPartition {
        self.vertices.last().expect("chain has a start vertex")
    }

    /// Total power of `q` along the chain.
    pub fn q_degree(&self) -> u32 {
        self.q_degrees.iter().sum()
    }

    /// Product of the per-edge coefficients.
    pub fn accumulated_coefficient(&self) -> u128 {
        self.edge_coefficients.iter().map(|&c| c as u128).product()
    }

    /// Appends `next`, checking the edge against the Chevalley expansion of the current end.
    fn push(&mut self, table: &ChevalleyTable, next: OddPartition, kind: EdgeKind) -> Result<()> {
        let current = self.last().clone();
        let missing = || Error::ChainEdgeMissing {
            from: current.to_string(),
            to: next.to_string(),
            kind: kind.as_str(),
        };
        let expansion = table.expansion(&current).ok_or_else(missing)?;
        let coefficient = match kind {
            EdgeKind::Cover => expansion.coefficient(&next, 0),
            EdgeKind::QuantumStar | EdgeKind::QuantumStarStar => {
                let want = if kind == EdgeKind::QuantumStar {
                    QuantumKind::Star
                } else {
                    QuantumKind::StarStar
                };
                expansion
                    .quantum
                    .iter()
                    .filter(|t| t.kind == want && t.partition == next)
                    .map(|t| t.coefficient)
                    .sum()
            }
        };
        if coefficient == 0 {
            return Err(missing());
        }
        self.vertices.push(next);
        self.edge_kinds.push(kind);
        self.edge_coefficients.push(coefficient);
        self.q_degrees.push(kind.q_exponent());
        Ok(())
    }
}

fn with_part(lambda: &OddPartition, row: usize, value: i32) -> OddPartition {
    let mut parts = lambda.parts().to_vec();
    parts[row] = value;
    OddPartition::from_parts_unchecked(parts)
}

/// Chain from `lambda` to the point class adding one box at a time, always in
/// the topmost row that admits one.
pub fn chain_to_point(table: &ChevalleyTable, lambda: &OddPartition) -> Result<ChevalleyChain> {
    let shape = *table.shape();
    let rho = point_partition(&shape);
    let mut chain = ChevalleyChain::start(lambda.clone());
    while chain.last() != &rho {
        let cur = chain.last().clone();
        let next = (0..shape.k())
            .map(|row| with_part(&cur, row, cur.parts()[row] + 1))
            .find(|cand| {
                table.basis().contains(cand)
                    && table
                        .expansion(&cur)
                        .is_some_and(|e| e.coefficient(cand, 0) > 0)
            })
            .ok_or_else(|| Error::ChainStalled {
                at: cur.to_string(),
                target: rho.to_string(),
            })?;
        chain.push(table, next, EdgeKind::Cover)?;
    }
    Ok(chain)
}

/// Chain from the point class to `(0)`: take `eta*` when the first row is
/// full, otherwise add a box to the first row.
pub fn chain_point_to_zero(table: &ChevalleyTable) -> Result<ChevalleyChain> {
    let shape = *table.shape();
    let zero = OddPartition::zero(&shape);
    let mut chain = ChevalleyChain::start(point_partition(&shape));
    let bound = shape.k() + shape.k() * (shape.k() - 1) / 2;
    while chain.last() != &zero {
        if chain.len() > bound {
            return Err(Error::ChainStalled {
                at: chain.last().to_string(),
                target: zero.to_string(),
            });
        }
        let cur = chain.last().clone();
        if cur.parts()[0] == shape.max_part() {
            let next = crate::chevalley::lambda_star(&shape, &cur).ok_or_else(|| Error::ChainStalled {
                at: cur.to_string(),
                target: zero.to_string(),
            })?;
            chain.push(table, next, EdgeKind::QuantumStar)?;
        } else {
            let next = with_part(&cur, 0, cur.parts()[0] + 1);
            chain.push(table, next, EdgeKind::Cover)?;
        }
    }
    Ok(chain)
}

/// Chain from `(0)` to `lambda` with exactly `|lambda|` edges.
///
/// For `lambda_k >= 0` rows are filled top to bottom. Otherwise the chain runs
/// `(0) -> (1) -> ... -> (2n-2k+1) -> (2n+1-k, -1, ..., -1)` and then fills rows
/// `2, 3, ...` of that partition.
pub fn chain_zero_to(table: &ChevalleyTable, lambda: &OddPartition) -> Result<ChevalleyChain> {
    let shape = *table.shape();
    let k = shape.k();
    let target = lambda.parts();
    let mut chain = ChevalleyChain::start(OddPartition::zero(&shape));
    let first_row_to;
    let mut start_row = 0;
    if target[k - 1] >= 0 {
        first_row_to = target[0];
    } else {
        let jump_from = 2 * (shape.n() - k) as i32 + 1;
        first_row_to = jump_from;
        start_row = 1;
    }
    for value in 1..=first_row_to {
        let next = with_part(chain.last(), 0, value);
        chain.push(table, next, EdgeKind::Cover)?;
    }
    if start_row == 1 {
        let mut alpha = vec![-1; k];
        alpha[0] = shape.max_part();
        chain.push(table, OddPartition::from_parts_unchecked(alpha), EdgeKind::Cover)?;
    }
    for row in start_row..k {
        let from = chain.last().parts()[row];
        for value in from + 1..=target[row] {
            let next = with_part(chain.last(), row, value);
            chain.push(table, next, EdgeKind::Cover)?;
        }
    }
    if chain.last() != lambda {
        return Err(Error::ChainStalled {
            at: chain.last().to_string(),
            target: lambda.to_string(),
        });
    }
    Ok(chain)
}

/// `(0) -> (1) -> ... -> (2n+1-k) -> (0)`, closing with the `lambda*` quantum edge.
pub fn canonical_cycle(table: &ChevalleyTable) -> Result<ChevalleyChain> {
    let shape = *table.shape();
    let zero = OddPartition::zero(&shape);
    let mut chain = ChevalleyChain::start(zero.clone());
    for value in 1..=shape.max_part() {
        let next = with_part(chain.last(), 0, value);
        chain.push(table, next, EdgeKind::Cover)?;
    }
    chain.push(table, zero, EdgeKind::QuantumStar)?;
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::Basis;

    fn shape(k: i64, n: i64) -> Shape {
        Shape::new(k, n).unwrap()
    }

    fn odd(s: &Shape, parts: &[i32]) -> OddPartition {
        OddPartition::new(s, parts.to_vec()).unwrap()
    }

    #[test]
    fn projective_space_matrix_is_scaled_cycle() {
        let s = shape(1, 2);
        let m = build_c1_matrix(s, WindowPolicy::Standard);
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == (j + 1) % 5 { 5 } else { 0 };
                assert_eq!(m.get(i, j), want, "({i},{j})");
            }
        }
    }

    #[test]
    fn ig25_column_of_30() {
        let s = shape(2, 2);
        let m = build_c1_matrix(s, WindowPolicy::Standard);
        let j = m.position(&odd(&s, &[3, 0])).unwrap();
        let nz: Vec<(OddPartition, u64)> = (0..m.size())
            .filter(|&i| m.get(i, j) > 0)
            .map(|i| (m.basis[i].clone(), m.get(i, j)))
            .collect();
        assert_eq!(nz, vec![(odd(&s, &[0, 0]), 4), (odd(&s, &[3, 1]), 4)]);
    }

    #[test]
    fn point_column_is_quantum_only() {
        for n in 1..=5 {
            for k in 1..=n {
                let s = shape(k, n);
                let m = build_c1_matrix(s, WindowPolicy::Standard);
                let rho = m.size() - 1;
                for i in m.out_neighbors(rho) {
                    assert!(m.basis[i].weight() < m.basis[rho].weight());
                }
            }
        }
    }

    #[test]
    fn matrix_nonneg_divisible_nonzero_columns() {
        for n in 1..=6 {
            for k in 1..=n {
                let s = shape(k, n);
                let r = s.fano_index() as u64;
                let m = build_c1_matrix(s, WindowPolicy::Standard);
                for j in 0..m.size() {
                    assert!(!m.out_neighbors(j).is_empty(), "{s} column {j}");
                    for i in 0..m.size() {
                        assert_eq!(m.get(i, j) % r, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn ig25_reachability_examples() {
        let s = shape(2, 2);
        let m = build_c1_matrix(s, WindowPolicy::Standard);
        let t = reachability_t(&m);
        let z = m.position(&odd(&s, &[0, 0])).unwrap();
        let rho = m.position(&odd(&s, &[3, 2])).unwrap();
        assert!(t.get(rho, z));
        assert!(t.get(z, rho));
        assert_eq!(bfs_distances(&m, z)[rho], Some(5));
        assert_eq!(bfs_distances(&m, rho)[z], Some(3));
        for i in 0..m.size() {
            assert!(t.get(i, i));
        }
    }

    #[test]
    fn reachability_two_routes_agree() {
        for n in 1..=6 {
            for k in 1..=n {
                let m = build_c1_matrix(shape(k, n), WindowPolicy::Standard);
                assert_eq!(reachability_t(&m), reachability_t_bfs(&m), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn exact_t_pattern_matches_reachability() {
        for n in 1..=6 {
            for k in 1..=n {
                let m = build_c1_matrix(shape(k, n), WindowPolicy::Standard);
                if m.size() > 40 {
                    continue;
                }
                let t = exact_t(&m);
                let reach = reachability_t(&m);
                for i in 0..m.size() {
                    for j in 0..m.size() {
                        assert_eq!(!t[i][j].is_zero(), reach.get(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn theorem_positive_small_shapes() {
        for (k, n) in [(2, 2), (1, 2), (3, 4)] {
            let m = build_c1_matrix(shape(k, n), WindowPolicy::Standard);
            let rep = verify_theorem_positive(&m);
            assert!(rep.holds(), "k={k} n={n}");
            assert!(rep.longest_witness().unwrap() <= rep.dimension);
        }
    }

    #[test]
    fn conjecture_on_small_shapes() {
        let m = build_c1_matrix(shape(2, 2), WindowPolicy::Standard);
        let rep = verify_conjecture_t_positive(&m);
        assert!(rep.holds);
        assert_eq!(rep.diameter, Some(5));
        let m = build_c1_matrix(shape(1, 2), WindowPolicy::Standard);
        assert!(verify_conjecture_t_positive(&m).holds);
        let m = build_c1_matrix(shape(2, 3), WindowPolicy::Standard);
        let rep = verify_conjecture_t_positive(&m);
        assert_eq!(rep.holds, rep.failing_pairs.is_empty());
    }

    #[test]
    fn worked_chain_point_to_zero() {
        let s = shape(4, 5);
        let table = ChevalleyTable::new(s, WindowPolicy::Standard);
        let chain = chain_point_to_zero(&table).unwrap();
        let want: Vec<OddPartition> = [
            [7, 6, 5, 4],
            [6, 5, 4, 0],
            [7, 5, 4, 0],
            [5, 4, 0, 0],
            [6, 4, 0, 0],
            [7, 4, 0, 0],
            [4, 0, 0, 0],
            [5, 0, 0, 0],
            [6, 0, 0, 0],
            [7, 0, 0, 0],
            [0, 0, 0, 0],
        ]
        .iter()
        .map(|p| odd(&s, p))
        .collect();
        assert_eq!(chain.vertices, want);
        assert_eq!(chain.edge_coefficients, vec![1, 1, 1, 2, 1, 1, 2, 2, 1, 1]);
        assert_eq!(chain.accumulated_coefficient(), 8);
        // Grading forces q^4: 22 + 10 = 4 * 8.
        assert_eq!(chain.q_degree(), 4);
    }

    #[test]
    fn chain_zero_to_negative_class() {
        let s = shape(2, 2);
        let table = ChevalleyTable::new(s, WindowPolicy::Standard);
        let chain = chain_zero_to(&table, &odd(&s, &[3, -1])).unwrap();
        assert_eq!(
            chain.vertices,
            vec![odd(&s, &[0, 0]), odd(&s, &[1, 0]), odd(&s, &[3, -1])]
        );
        assert!(chain_to_point(&table, &odd(&s, &[3, 2])).unwrap().is_empty());
    }

    #[test]
    fn proof_chains_exist_everywhere() {
        for n in 1..=6 {
            for k in 1..=n {
                let s = shape(k, n);
                let table = ChevalleyTable::new(s, WindowPolicy::Standard);
                let dim = s.dimension();
                let b = chain_point_to_zero(&table).unwrap();
                assert!(b.len() <= (k + k * (k - 1) / 2) as usize);
                let cyc = canonical_cycle(&table).unwrap();
                assert_eq!(cyc.len(), s.fano_index());
                for lam in Basis::new(s).elements() {
                    let a = chain_to_point(&table, lam).unwrap();
                    assert!(a.len() <= dim, "{s} {lam}");
                    let c = chain_zero_to(&table, lam).unwrap();
                    assert_eq!(c.len() as i32, lam.weight(), "{s} {lam}");
                }
            }
        }
    }

    #[test]
    fn canonical_cycles() {
        let s = shape(2, 2);
        let table = ChevalleyTable::new(s, WindowPolicy::Standard);
        let cyc = canonical_cycle(&table).unwrap();
        let want: Vec<OddPartition> = [[0, 0], [1, 0], [2, 0], [3, 0], [0, 0]]
            .iter()
            .map(|p| odd(&s, p))
            .collect();
        assert_eq!(cyc.vertices, want);
        assert_eq!(cyc.q_degree(), 1);
        let table = ChevalleyTable::new(shape(4, 5), WindowPolicy::Standard);
        assert_eq!(canonical_cycle(&table).unwrap().len(), 8);
    }

    #[test]
    fn missing_edge_is_reported() {
        let s = shape(2, 2);
        let table = ChevalleyTable::new(s, WindowPolicy::Standard);
        let mut chain = ChevalleyChain::start(odd(&s, &[0, 0]));
        let err = chain
            .push(&table, odd(&s, &[2, 0]), EdgeKind::Cover)
            .unwrap_err();
        assert!(matches!(err, Error::ChainEdgeMissing { .. }));
    }
}
