//! Linear algebra over the two-element field, exhaustive Hom-set
//! enumeration, and finite matrix groups acting on `F₂ⁿ`.
//!
//! Linear maps `W → U` are stored as `dim U × dim W` matrices acting on
//! column vectors. Rows are packed into 64-bit words.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Configurable enumeration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Maximum `dim_from · dim_to` for a full Hom-set enumeration.
    pub hom_bits: u32,
    /// Maximum order of a group produced by closure.
    pub group_order: usize,
    /// Maximum size of a spanning set in degreewise polynomial linear algebra.
    pub basis_size: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            hom_bits: 24,
            group_order: 10_000,
            basis_size: 1 << 20,
        }
    }
}

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// A dense bit vector of fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + t)
                }
            })
        })
    }
}

/// Incrementally maintained echelon basis of a subspace of `F₂ⁿ`.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    len: usize,
    rows: Vec<(usize, BitVector)>,
}

impl SpanBuilder {
    pub fn new(len: usize) -> Self {
        SpanBuilder {
            len,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let r = self.reduce(v);
        match r.first_one() {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// The stored (independent) rows.
    pub fn basis(&self) -> impl Iterator<Item = &BitVector> {
        self.rows.iter().map(|(_, r)| r)
    }
}

/// A matrix over F₂.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        F2Matrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows. `cols` is needed for matrices with no rows.
    pub fn from_rows_with_cols(rows: &[Vec<u8>], cols: usize) -> Result<Self> {
        let mut m = F2Matrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "ragged matrix: row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &e) in row.iter().enumerate() {
                match e {
                    0 => {}
                    1 => m.set(r, c, true),
                    _ => return Err(Error::Parse(format!("matrix entry {e} is not 0 or 1"))),
                }
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        F2Matrix::from_rows_with_cols(rows, cols)
    }

    /// A single column vector.
    pub fn column_vector(bits: &[u8]) -> Result<Self> {
        let rows: Vec<Vec<u8>> = bits.iter().map(|&b| vec![b]).collect();
        F2Matrix::from_rows_with_cols(&rows, 1)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) as u8).collect())
            .collect()
    }

    /// Columns as 0/1 vectors.
    pub fn column_vectors(&self) -> Vec<Vec<u8>> {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c) as u8).collect())
            .collect()
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / 64];
        let mask = 1u64 << (c % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        for w in 0..self.stride {
            let v = self.data[src * self.stride + w];
            self.data[dst * self.stride + w] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn column(&self, c: usize) -> F2Matrix {
        let mut m = F2Matrix::zeros(self.rows, 1);
        for r in 0..self.rows {
            m.set(r, 0, self.get(r, c));
        }
        m
    }

    /// Row `r` as a `1 × cols` matrix (a linear form when `self` is a map).
    pub fn row(&self, r: usize) -> F2Matrix {
        let mut m = F2Matrix::zeros(1, self.cols);
        m.data.copy_from_slice(self.row_words(r));
        m
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn add(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimMismatch {
                context: "matrix sum",
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    /// Composition `self ∘ other`.
    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (src, dst) = (k * other.stride, r * out.stride);
                    for w in 0..out.stride {
                        out.data[dst + w] ^= other.data[src + w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimMismatch {
                context: "horizontal stack",
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut out = F2Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        Ok(out)
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimMismatch {
                context: "vertical stack",
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(F2Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (F2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    m.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, as the columns of a `cols × k` matrix.
    pub fn kernel_basis(&self) -> F2Matrix {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = F2Matrix::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            basis.set(f, j, true);
            for (i, &p) in pivots.iter().enumerate() {
                if m.get(i, f) {
                    basis.set(p, j, true);
                }
            }
        }
        basis
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn image_basis(&self) -> F2Matrix {
        let (_, pivots) = self.rref();
        let mut basis = F2Matrix::zeros(self.rows, pivots.len());
        for (j, &c) in pivots.iter().enumerate() {
            for r in 0..self.rows {
                basis.set(r, j, self.get(r, c));
            }
        }
        basis
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    /// Whether `Im(other) ⊆ Im(self)`.
    pub fn image_contains(&self, other: &F2Matrix) -> bool {
        match self.hstack(other) {
            Ok(joint) => joint.rank() == self.rank(),
            Err(_) => false,
        }
    }

    /// Some `X` with `self · X = rhs`, if one exists.
    pub fn solve(&self, rhs: &F2Matrix) -> Option<F2Matrix> {
        let aug = self.hstack(rhs).ok()?;
        let (m, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = F2Matrix::zeros(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, m.get(i, self.cols + j));
            }
        }
        Some(x)
    }
}

impl Mul for &F2Matrix {
    type Output = F2Matrix;

    /// Panics on a dimension mismatch; use [`F2Matrix::mul`] for a checked product.
    fn mul(self, rhs: &F2Matrix) -> F2Matrix {
        F2Matrix::mul(self, rhs).expect("matrix dimensions must agree")
    }
}

impl Ord for F2Matrix {
    /// Shape first, then the row-major bit string read lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rows, self.cols)
            .cmp(&(other.rows, other.cols))
            .then_with(|| {
                for (a, b) in self.data.iter().zip(&other.data) {
                    let diff = a ^ b;
                    if diff != 0 {
                        let bit = diff.trailing_zeros();
                        return if (a >> bit) & 1 == 1 {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        };
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for F2Matrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "[{row}]")?;
        }
        Ok(())
    }
}

impl Serialize for F2Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for F2Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u8>>::deserialize(d)?;
        F2Matrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// All linear maps `F₂^dim_from → F₂^dim_to`, in increasing matrix order.
pub fn enumerate_maps(dim_from: usize, dim_to: usize, caps: &Caps) -> Result<Vec<F2Matrix>> {
    let bits = dim_from * dim_to;
    if bits > caps.hom_bits as usize {
        return Err(Error::CapExceeded {
            what: "Hom-set",
            requested: bits as u64,
            cap: caps.hom_bits as u64,
        });
    }
    let count = 1u64 << bits;
    let mut out = Vec::with_capacity(count as usize);
    for k in 0..count {
        let mut m = F2Matrix::zeros(dim_to, dim_from);
        for p in 0..bits {
            if (k >> (bits - 1 - p)) & 1 == 1 {
                m.set(p / dim_from, p % dim_from, true);
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// A finite subgroup of `GL(n, F₂)` stored as its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    ambient_dim: usize,
    elements: Vec<F2Matrix>,
}

impl Subgroup {
    pub fn trivial(ambient_dim: usize) -> Self {
        Subgroup {
            ambient_dim,
            elements: vec![F2Matrix::identity(ambient_dim)],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn elements(&self) -> &[F2Matrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, g: &F2Matrix) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Elements fixing `psi` under left composition.
    pub fn stabilizer(&self, psi: &F2Matrix) -> Subgroup {
        let elements = self
            .elements
            .iter()
            .filter(|g| &(*g * psi) == psi)
            .cloned()
            .collect();
        Subgroup {
            ambient_dim: self.ambient_dim,
            elements,
        }
    }

    /// `GL(n, F₂)`, generated by the elementary transvections.
    pub fn general_linear(n: usize, caps: &Caps) -> Result<Self> {
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let mut e = F2Matrix::identity(n);
                    e.set(i, j, true);
                    gens.push(e);
                }
            }
        }
        group_closure(n, &gens, caps)
    }
}

/// Multiplicative closure of `generators` (together with the identity).
pub fn group_closure(ambient_dim: usize, generators: &[F2Matrix], caps: &Caps) -> Result<Subgroup> {
    for g in generators {
        if g.rows() != ambient_dim || g.cols() != ambient_dim {
            return Err(Error::DimMismatch {
                context: "group generator",
                expected: ambient_dim,
                found: if g.rows() != ambient_dim {
                    g.rows()
                } else {
                    g.cols()
                },
            });
        }
        if g.rank() < ambient_dim {
            return Err(Error::NotInvertible(g.clone()));
        }
    }
    let id = F2Matrix::identity(ambient_dim);
    let mut seen: HashSet<F2Matrix> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(h) = queue.pop_front() {
        for g in generators {
            let p = g * &h;
            if seen.insert(p.clone()) {
                if seen.len() > caps.group_order {
                    return Err(Error::ClosureCapExceeded {
                        cap: caps.group_order,
                    });
                }
                queue.push_back(p);
            }
        }
    }
    let mut elements: Vec<F2Matrix> = seen.into_iter().collect();
    elements.sort();
    Ok(Subgroup {
        ambient_dim,
        elements,
    })
}

/// A `G`-orbit of linear maps `W → U` under left composition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Orbit {
    pub dim_source: usize,
    pub representative: F2Matrix,
    pub members: Vec<F2Matrix>,
}

impl Orbit {
    pub fn of(g: &Subgroup, psi: &F2Matrix) -> Orbit {
        let mut members: Vec<F2Matrix> = g.elements().iter().map(|h| h * psi).collect();
        members.sort();
        members.dedup();
        Orbit {
            dim_source: psi.cols(),
            representative: members[0].clone(),
            members,
        }
    }

    pub fn contains(&self, m: &F2Matrix) -> bool {
        self.members.binary_search(m).is_ok()
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Partition of `Hom(F₂^dim_source, U)` into `G`-orbits, sorted by representative.
pub fn orbits(g: &Subgroup, dim_source: usize, caps: &Caps) -> Result<Vec<Orbit>> {
    let maps = enumerate_maps(dim_source, g.ambient_dim(), caps)?;
    let mut seen: HashSet<F2Matrix> = HashSet::with_capacity(maps.len());
    let mut out = Vec::new();
    for m in maps {
        if seen.contains(&m) {
            continue;
        }
        let orbit = Orbit::of(g, &m);
        seen.extend(orbit.members.iter().cloned());
        out.push(orbit);
    }
    Ok(out)
}

/// Basis (as columns) of `U^G = {v : gv = v for all g}`.
pub fn fixed_space(g: &Subgroup) -> F2Matrix {
    let n = g.ambient_dim();
    let id = F2Matrix::identity(n);
    let mut stacked = F2Matrix::zeros(0, n);
    for h in g.elements() {
        let diff = h.add(&id).expect("square");
        stacked = stacked.vstack(&diff).expect("same width");
    }
    stacked.kernel_basis()
}
