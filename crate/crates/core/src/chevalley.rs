//! Quantum Chevalley rule: `[X(1)] * [X(lambda)]`.
//!
//! Classical terms come from the even-diagram relation `lambda+1^k ->ev mu+1^k`
//! with coefficient `2^A`, where `A` counts certain connected components of
//! added boxes. Quantum terms are `q[X(lambda*)]` and `q[X(lambda**)]`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::partitions::{to_even, Basis, EvenPartition, OddPartition, Shape};

/// A box of an even diagram, 1-based, row 1 on top.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    fn touches(&self, other: &Cell) -> bool {
        self.row.abs_diff(other.row) <= 1 && self.col.abs_diff(other.col) <= 1
    }
}

/// Upper column bound for the boxes that may contribute to `A`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowPolicy {
    /// Columns `n+2-k ..= 2n+2-k`.
    #[default]
    Standard,
    /// Columns `n+2-k ..= 2n+1-k`.
    PaperLiteral,
}

impl WindowPolicy {
    pub fn upper_column(self, shape: &Shape) -> usize {
        match self {
            WindowPolicy::Standard => shape.even_max_part() as usize,
            WindowPolicy::PaperLiteral => shape.max_part() as usize,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WindowPolicy::Standard => "standard",
            WindowPolicy::PaperLiteral => "paper-literal",
        }
    }
}

impl fmt::Display for WindowPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WindowPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "standard" => Ok(WindowPolicy::Standard),
            "paper-literal" | "paper_literal" => Ok(WindowPolicy::PaperLiteral),
            other => Err(format!("unknown window policy {other:?}")),
        }
    }
}

fn distance(shape: &Shape, cell: Cell) -> usize {
    cell.col.abs_diff(shape.axis_column()) + cell.row
}

/// `(n+1-k)`-relatedness: equal row plus distance from column `n+2-k`.
pub fn related(shape: &Shape, a: Cell, b: Cell) -> bool {
    distance(shape, a) == distance(shape, b)
}

fn row_cells(row: usize, from: i32, to: i32) -> impl Iterator<Item = Cell> {
    (from + 1..=to).map(move |c| Cell::new(row, c as usize))
}

/// Evaluates `lambda ->ev mu` and returns `N(lambda, mu)` when the arrow holds.
///
/// Boxes removed and re-added in the same position are not modeled: the
/// removed strip is `lambda \ (lambda ∩ mu)` and the added strip is
/// `mu \ (lambda ∩ mu)`.
pub fn ev_arrow(
    shape: &Shape,
    lambda: &EvenPartition,
    mu: &EvenPartition,
    policy: WindowPolicy,
) -> Option<u32> {
    let lp = lambda.parts();
    let mp = mu.parts();
    let left = shape.left_columns();

    let mut removed = Vec::new();
    let mut added = Vec::new();
    for (i, (&l, &m)) in lp.iter().zip(mp).enumerate() {
        let row = i + 1;
        let common = l.min(m);
        removed.extend(row_cells(row, common, l));
        added.extend(row_cells(row, common, m));
    }

    // Vertical strip inside the first n+1-k columns.
    if lp.iter().zip(mp).any(|(&l, &m)| l - m > 1) {
        return None;
    }
    if removed.iter().any(|c| c.col > left) {
        return None;
    }
    // Horizontal strip.
    let added_cols: BTreeSet<usize> = added.iter().map(|c| c.col).collect();
    if added_cols.len() != added.len() {
        return None;
    }

    let partners_of = |target: Cell| -> Vec<Cell> {
        added
            .iter()
            .copied()
            .filter(|&c| related(shape, c, target))
            .collect()
    };

    let mut referenced: BTreeSet<Cell> = BTreeSet::new();
    for col in 1..=left {
        let before = lambda.column_height(col);
        let after = mu.column_height(col);
        if after == before {
            if before == 0 {
                continue;
            }
            let partners = partners_of(Cell::new(before, col));
            if partners.len() > 1 {
                return None;
            }
            referenced.extend(partners);
        } else if after < before {
            let mut targets: Vec<Cell> = (after + 1..=before).map(|r| Cell::new(r, col)).collect();
            if after >= 1 {
                targets.push(Cell::new(after, col));
            }
            let mut rows = BTreeSet::new();
            for target in targets {
                let partners = partners_of(target);
                let [partner] = partners.as_slice() else {
                    return None;
                };
                rows.insert(partner.row);
                referenced.insert(*partner);
            }
            if rows.len() > 1 {
                return None;
            }
        }
    }

    let axis = shape.axis_column();
    let upper = policy.upper_column(shape);
    let window: Vec<Cell> = added
        .iter()
        .copied()
        .filter(|c| (axis..=upper).contains(&c.col) && !referenced.contains(c))
        .collect();
    Some(count_free_components(&window, axis))
}

/// Components (king-move adjacency) with no cell in column `axis`.
fn count_free_components(cells: &[Cell], axis: usize) -> u32 {
    let mut seen = vec![false; cells.len()];
    let mut count = 0;
    for start in 0..cells.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut on_axis = false;
        while let Some(i) = stack.pop() {
            on_axis |= cells[i].col == axis;
            for j in 0..cells.len() {
                if !seen[j] && cells[i].touches(&cells[j]) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if !on_axis {
            count += 1;
        }
    }
    count
}

/// `A(lambda, mu)` if `lambda -> mu` (odd indexing), else `None`.
pub fn arrow_exponent(
    shape: &Shape,
    lambda: &OddPartition,
    mu: &OddPartition,
    policy: WindowPolicy,
) -> Option<u32> {
    ev_arrow(shape, &to_even(shape, lambda), &to_even(shape, mu), policy)
}

/// All `mu` with `|mu| = |lambda|+1` and `lambda -> mu`, with their exponents `A`.
pub fn covers(basis: &Basis, lambda: &OddPartition, policy: WindowPolicy) -> Vec<(OddPartition, u32)> {
    let shape = basis.shape();
    basis
        .of_weight(lambda.weight() + 1)
        .filter_map(|mu| arrow_exponent(shape, lambda, mu, policy).map(|a| (mu.clone(), a)))
        .collect()
}

/// `(lambda_2, ..., lambda_k, 0)` when `lambda_1 = 2n+1-k` and `lambda_k >= 0`.
pub fn lambda_star(shape: &Shape, lambda: &OddPartition) -> Option<OddPartition> {
    let p = lambda.parts();
    if p[0] != shape.max_part() || p[p.len() - 1] < 0 {
        return None;
    }
    let mut parts = p[1..].to_vec();
    parts.push(0);
    Some(OddPartition::from_parts_unchecked(parts))
}

/// `(lambda_1, lambda_3, ..., lambda_k, -1)` when `lambda_1 = 2n+1-k` and `lambda_2 = 2n-k`.
pub fn lambda_star_star(shape: &Shape, lambda: &OddPartition) -> Option<OddPartition> {
    let p = lambda.parts();
    if p.len() < 2 || p[0] != shape.max_part() || p[1] != shape.max_part() - 1 {
        return None;
    }
    let mut parts = vec![p[0]];
    parts.extend_from_slice(&p[2..]);
    parts.push(-1);
    Some(OddPartition::from_parts_unchecked(parts))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantumKind {
    Star,
    StarStar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalTerm {
    pub partition: OddPartition,
    /// `A(lambda, mu)`; the coefficient is `2^A`.
    pub exponent: u32,
    pub coefficient: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumTerm {
    pub partition: OddPartition,
    pub kind: QuantumKind,
    pub coefficient: u64,
    pub q_exponent: u32,
}

/// `[X(1)] * [X(lambda)]` in the Schubert basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChevalleyExpansion {
    pub lambda: OddPartition,
    pub classical: Vec<ClassicalTerm>,
    pub quantum: Vec<QuantumTerm>,
}

impl ChevalleyExpansion {
    /// Coefficient of `q^d [X(mu)]`.
    pub fn coefficient(&self, mu: &OddPartition, q_exponent: u32) -> u64 {
        if q_exponent == 0 {
            self.classical
                .iter()
                .filter(|t| &t.partition == mu)
                .map(|t| t.coefficient)
                .sum()
        } else {
            self.quantum
                .iter()
                .filter(|t| &t.partition == mu && t.q_exponent == q_exponent)
                .map(|t| t.coefficient)
                .sum()
        }
    }

    /// Coefficient of `[X(mu)]` after setting `q = 1`.
    pub fn coefficient_at_q1(&self, mu: &OddPartition) -> u64 {
        self.coefficient(mu, 0)
            + self
                .quantum
                .iter()
                .filter(|t| &t.partition == mu)
                .map(|t| t.coefficient)
                .sum::<u64>()
    }
}

pub fn chevalley_mult(basis: &Basis, lambda: &OddPartition, policy: WindowPolicy) -> ChevalleyExpansion {
    let shape = basis.shape();
    let classical = covers(basis, lambda, policy)
        .into_iter()
        .map(|(partition, exponent)| ClassicalTerm {
            partition,
            exponent,
            coefficient: 1u64 << exponent,
        })
        .collect();
    let quantum = [
        (lambda_star(shape, lambda), QuantumKind::Star),
        (lambda_star_star(shape, lambda), QuantumKind::StarStar),
    ]
    .into_iter()
    .filter_map(|(p, kind)| {
        p.map(|partition| QuantumTerm {
            partition,
            kind,
            coefficient: 1,
            q_exponent: 1,
        })
    })
    .collect();
    ChevalleyExpansion {
        lambda: lambda.clone(),
        classical,
        quantum,
    }
}

/// Expansions for every basis element of one shape under one window policy.
#[derive(Clone, Debug)]
pub struct ChevalleyTable {
    basis: Basis,
    policy: WindowPolicy,
    expansions: Vec<ChevalleyExpansion>,
}

impl ChevalleyTable {
    pub fn new(shape: Shape, policy: WindowPolicy) -> Self {
        Self::for_basis(Basis::new(shape), policy)
    }

    pub fn for_basis(basis: Basis, policy: WindowPolicy) -> Self {
        let expansions = basis
            .elements()
            .par_iter()
            .map(|lam| chevalley_mult(&basis, lam, policy))
            .collect();
        ChevalleyTable {
            basis,
            policy,
            expansions,
        }
    }

    pub fn shape(&self) -> &Shape {
        self.basis.shape()
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn policy(&self) -> WindowPolicy {
        self.policy
    }

    pub fn expansions(&self) -> &[ChevalleyExpansion] {
        &self.expansions
    }

    pub fn expansion(&self, lambda: &OddPartition) -> Option<&ChevalleyExpansion> {
        self.basis.position(lambda).map(|i| &self.expansions[i])
    }
}
