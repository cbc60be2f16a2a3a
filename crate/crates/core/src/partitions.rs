//! Index sets for the Schubert basis of IG(k, 2n+1).
//!
//! An [`OddPartition`] is a length-`k` sequence `2n+1-k >= p_1 >= ... >= p_k >= -1`
//! that is `(n-k)`-strict, with the extra rule that a trailing `-1` forces a full
//! first row. Adding `1` to every part gives the [`EvenPartition`] that indexes the
//! same class inside IG(k, 2n+2). The weight of an odd partition is the
//! codimension of its Schubert class.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The pair `(k, n)` describing IG(k, 2n+1), with `1 <= k <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ShapeRepr", into = "ShapeRepr")]
pub struct Shape {
    k: usize,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct ShapeRepr {
    k: i64,
    n: i64,
}

impl TryFrom<ShapeRepr> for Shape {
    type Error = Error;

    fn try_from(repr: ShapeRepr) -> Result<Self> {
        Shape::new(repr.k, repr.n)
    }
}

impl From<Shape> for ShapeRepr {
    fn from(shape: Shape) -> Self {
        ShapeRepr {
            k: shape.k as i64,
            n: shape.n as i64,
        }
    }
}

impl Shape {
    pub fn new(k: i64, n: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidShape {
                k,
                n,
                reason: "k must be at least 1".into(),
            });
        }
        if k == n + 1 {
            return Err(Error::LagrangianExcluded { k, n });
        }
        if k > n {
            return Err(Error::InvalidShape {
                k,
                n,
                reason: "k must not exceed n".into(),
            });
        }
        Ok(Shape {
            k: k as usize,
            n: n as usize,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `k(2n+1-k) - k(k-1)/2`.
    pub fn dimension(&self) -> usize {
        let (k, n) = (self.k, self.n);
        k * (2 * n + 1 - k) - k * (k - 1) / 2
    }

    /// Fano index `r = 2n+2-k`, also the degree of `q`.
    pub fn fano_index(&self) -> usize {
        2 * self.n + 2 - self.k
    }

    /// Largest allowed odd part, `2n+1-k`.
    pub fn max_part(&self) -> i32 {
        (2 * self.n + 1 - self.k) as i32
    }

    /// Parts strictly above this value must be strictly decreasing (odd indexing).
    pub fn strictness(&self) -> i32 {
        (self.n - self.k) as i32
    }

    /// Largest allowed even part, `2n+2-k`.
    pub fn even_max_part(&self) -> i32 {
        (2 * self.n + 2 - self.k) as i32
    }

    /// Number of leading even-diagram columns from which boxes may be removed, `n+1-k`.
    pub fn left_columns(&self) -> usize {
        self.n + 1 - self.k
    }

    /// The column `n+2-k` that "related" distances are measured from.
    pub fn axis_column(&self) -> usize {
        self.n + 2 - self.k
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IG({}, {})", self.k, 2 * self.n + 1)
    }
}

/// Parses a comma-separated part list such as `"3,-1"`.
pub fn parse_parts(input: &str) -> Result<Vec<i32>> {
    let trimmed = input.trim().trim_start_matches('(').trim_end_matches(')');
    if trimmed.is_empty() {
        return Err(Error::ParsePartition {
            input: input.into(),
            reason: "empty part list".into(),
        });
    }
    trimmed
        .split(',')
        .map(|tok| {
            tok.trim().parse::<i32>().map_err(|e| Error::ParsePartition {
                input: input.into(),
                reason: format!("{:?}: {e}", tok.trim()),
            })
        })
        .collect()
}

fn fmt_parts(parts: &[i32], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{p}")?;
    }
    Ok(())
}

fn weakly_decreasing(parts: &[i32]) -> bool {
    parts.windows(2).all(|w| w[0] >= w[1])
}

fn strict_above(parts: &[i32], threshold: i32) -> bool {
    parts
        .windows(2)
        .all(|w| w[0] <= threshold || w[0] > w[1])
}

/// True iff `parts` indexes a Schubert class of IG(k, 2n+1).
pub fn is_valid_odd(shape: &Shape, parts: &[i32]) -> bool {
    if parts.len() != shape.k {
        return false;
    }
    let first = parts[0];
    let last = parts[shape.k - 1];
    first <= shape.max_part()
        && last >= -1
        && weakly_decreasing(parts)
        && strict_above(parts, shape.strictness())
        && (last != -1 || first == shape.max_part())
}

/// True iff `parts` is an `(n+1-k)`-strict partition contained in the Schubert
/// variety `Y(1^k)` of IG(k, 2n+2).
pub fn is_valid_even(shape: &Shape, parts: &[i32]) -> bool {
    if parts.len() != shape.k {
        return false;
    }
    let first = parts[0];
    let last = parts[shape.k - 1];
    first <= shape.even_max_part()
        && last >= 0
        && weakly_decreasing(parts)
        && strict_above(parts, shape.strictness() + 1)
        && (last != 0 || first == shape.even_max_part())
}

/// Index of a Schubert class of IG(k, 2n+1). Parts may equal `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OddPartition {
    parts: Vec<i32>,
}

impl OddPartition {
    pub fn new(shape: &Shape, parts: Vec<i32>) -> Result<Self> {
        if is_valid_odd(shape, &parts) {
            Ok(OddPartition { parts })
        } else {
            Err(Error::InvalidPartition {
                parts,
                set: "odd",
                k: shape.k,
                n: shape.n,
            })
        }
    }

    pub fn parse(shape: &Shape, input: &str) -> Result<Self> {
        Self::new(shape, parse_parts(input)?)
    }

    /// Caller guarantees validity; used where parts are derived from a valid partition.
    pub(crate) fn from_parts_unchecked(parts: Vec<i32>) -> Self {
        OddPartition { parts }
    }

    pub fn zero(shape: &Shape) -> Self {
        OddPartition {
            parts: vec![0; shape.k],
        }
    }

    pub fn parts(&self) -> &[i32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Codimension of the Schubert class.
    pub fn weight(&self) -> i32 {
        self.parts.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|&p| p == 0)
    }
}

impl Ord for OddPartition {
    /// Canonical basis order: ascending weight, then lexicographically descending parts.
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for OddPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OddPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_parts(&self.parts, f)
    }
}

/// Index of a Schubert variety of IG(k, 2n+2) lying in `Y(1^k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EvenPartition {
    parts: Vec<i32>,
}

impl EvenPartition {
    pub fn new(shape: &Shape, parts: Vec<i32>) -> Result<Self> {
        if is_valid_even(shape, &parts) {
            Ok(EvenPartition { parts })
        } else {
            Err(Error::InvalidPartition {
                parts,
                set: "even",
                k: shape.k,
                n: shape.n,
            })
        }
    }

    pub fn parts(&self) -> &[i32] {
        &self.parts
    }

    pub fn weight(&self) -> i32 {
        self.parts.iter().sum()
    }

    /// Number of boxes in column `col` (1-based).
    pub fn column_height(&self, col: usize) -> usize {
        self.parts.iter().filter(|&&p| p >= col as i32).count()
    }
}

impl fmt::Display for EvenPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_parts(&self.parts, f)
    }
}

pub fn to_even(_shape: &Shape, lambda: &OddPartition) -> EvenPartition {
    EvenPartition {
        parts: lambda.parts.iter().map(|p| p + 1).collect(),
    }
}

pub fn from_even(shape: &Shape, even: &EvenPartition) -> Result<OddPartition> {
    if !is_valid_even(shape, &even.parts) {
        return Err(Error::InvalidPartition {
            parts: even.parts.clone(),
            set: "even",
            k: shape.k,
            n: shape.n,
        });
    }
    Ok(OddPartition {
        parts: even.parts.iter().map(|p| p - 1).collect(),
    })
}

/// `rho = (2n-k+1, 2n-k, ..., 2n-2k+2)`, the class of a point.
pub fn point_partition(shape: &Shape) -> OddPartition {
    let top = shape.max_part();
    OddPartition {
        parts: (0..shape.k as i32).map(|i| top - i).collect(),
    }
}

fn extend(shape: &Shape, prefix: &mut Vec<i32>, out: &mut Vec<OddPartition>) {
    if prefix.len() == shape.k {
        if is_valid_odd(shape, prefix) {
            out.push(OddPartition {
                parts: prefix.clone(),
            });
        }
        return;
    }
    let upper = match prefix.last() {
        None => shape.max_part(),
        Some(&prev) if prev > shape.strictness() => prev - 1,
        Some(&prev) => prev,
    };
    for part in (-1..=upper).rev() {
        prefix.push(part);
        extend(shape, prefix, out);
        prefix.pop();
    }
}

/// Every index in canonical order.
pub fn enumerate_basis(shape: &Shape) -> Vec<OddPartition> {
    let mut out = Vec::new();
    extend(shape, &mut Vec::with_capacity(shape.k), &mut out);
    out.sort();
    out
}

/// The Schubert basis of IG(k, 2n+1) with position lookup and weight slices.
#[derive(Clone, Debug)]
pub struct Basis {
    shape: Shape,
    elements: Vec<OddPartition>,
    positions: HashMap<OddPartition, usize>,
}

impl Basis {
    pub fn new(shape: Shape) -> Self {
        Self::with_order(shape, enumerate_basis(&shape))
    }

    /// Uses a caller-chosen ordering. `elements` must be a permutation of the basis.
    pub fn with_order(shape: Shape, elements: Vec<OddPartition>) -> Self {
        let positions = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Basis {
            shape,
            elements,
            positions,
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn elements(&self) -> &[OddPartition] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, lambda: &OddPartition) -> Option<usize> {
        self.positions.get(lambda).copied()
    }

    pub fn contains(&self, lambda: &OddPartition) -> bool {
        self.positions.contains_key(lambda)
    }

    /// Basis elements of the given weight, in basis order.
    pub fn of_weight(&self, weight: i32) -> impl Iterator<Item = &OddPartition> {
        self.elements.iter().filter(move |p| p.weight() == weight)
    }

    pub fn index_range(&self) -> Range<usize> {
        0..self.elements.len()
    }
}

impl FromStr for Shape {
    type Err = Error;

    /// Accepts `"k,n"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = parse_parts(s)?;
        match parts.as_slice() {
            [k, n] => Shape::new(*k as i64, *n as i64),
            _ => Err(Error::ParsePartition {
                input: s.into(),
                reason: "expected \"k,n\"".into(),
            }),
        }
    }
}
