//! Graded polynomial algebras `F₂[v₁,…,vₙ]` with degree-one generators,
//! the action of the Steenrod squares, pullbacks along linear maps and
//! degreewise invariant theory.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{BitVector, Caps, F2Matrix, SpanBuilder, Subgroup};

/// Exponent vector.
pub type Monomial = Vec<u32>;

fn mono_degree(m: &[u32]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

/// Default variable names: `u, v, w`, then `u4, u5, …`.
pub fn default_var_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0 => "u".to_string(),
            1 => "v".to_string(),
            2 => "w".to_string(),
            _ => format!("u{}", i + 1),
        })
        .collect()
}

/// Default names for coefficient variables: `t` alone, else `t1, t2, …`.
pub fn coefficient_var_names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["t".to_string()]
    } else {
        (1..=n).map(|i| format!("t{i}")).collect()
    }
}

/// A polynomial over F₂; a coefficient is the presence of the monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeSet<Monomial>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeSet::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Polynomial::monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut m = vec![0; num_vars];
        m[i] = 1;
        Polynomial::monomial(m)
    }

    pub fn monomial(exponents: Monomial) -> Self {
        Polynomial {
            num_vars: exponents.len(),
            terms: BTreeSet::from([exponents]),
        }
    }

    /// Sum of the given monomials (repeated monomials cancel).
    pub fn from_monomials(num_vars: usize, monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Polynomial::zero(num_vars);
        for m in monomials {
            assert_eq!(m.len(), num_vars, "monomial arity");
            p.toggle(m);
        }
        p
    }

    /// The linear form `Σ coeffs[i]·xᵢ`.
    pub fn linear_form(coeffs: &[bool]) -> Self {
        let n = coeffs.len();
        Polynomial::from_monomials(
            n,
            coeffs.iter().enumerate().filter(|(_, &c)| c).map(|(i, _)| {
                let mut m = vec![0; n];
                m[i] = 1;
                m
            }),
        )
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains_monomial(&self, m: &[u32]) -> bool {
        self.terms.contains(m)
    }

    /// The common degree of all terms; `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.iter().map(|m| mono_degree(m));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Zero counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.iter().map(|m| mono_degree(m)).max()
    }

    pub fn homogeneous_parts(&self) -> BTreeMap<usize, Polynomial> {
        let mut parts: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for m in &self.terms {
            parts
                .entry(mono_degree(m))
                .or_insert_with(|| Polynomial::zero(self.num_vars))
                .terms
                .insert(m.clone());
        }
        parts
    }

    fn check_vars(&self, other: &Polynomial) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::VarMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_vars(other)?;
        let terms = self
            .terms
            .symmetric_difference(&other.terms)
            .cloned()
            .collect();
        Ok(Polynomial {
            num_vars: self.num_vars,
            terms,
        })
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        assert_eq!(self.num_vars, other.num_vars, "variable count");
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    pub fn multiply(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_vars(other)?;
        let mut acc: HashMap<Monomial, bool> = HashMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let m: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *acc.entry(m).or_insert(false) ^= true;
            }
        }
        Ok(Polynomial {
            num_vars: self.num_vars,
            terms: acc
                .into_iter()
                .filter(|(_, c)| *c)
                .map(|(m, _)| m)
                .collect(),
        })
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(self.num_vars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Frobenius: over F₂, `p² = Σ m²`.
    pub fn square(&self) -> Polynomial {
        Polynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|m| m.iter().map(|e| 2 * e).collect())
                .collect(),
        }
    }

    /// Substitutes `images[i]` for the `i`-th variable; all images share one ring.
    pub fn substitute(&self, images: &[Polynomial], target_vars: usize) -> Polynomial {
        assert_eq!(images.len(), self.num_vars, "one image per variable");
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|_| vec![Polynomial::one(target_vars)])
            .collect();
        let mut out = Polynomial::zero(target_vars);
        for m in &self.terms {
            let mut term = Polynomial::one(target_vars);
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out.add_assign(&term);
        }
        out
    }

    /// Re-embeds into a ring of `num_vars` variables, shifting variable `i` to `offset + i`.
    pub fn embed(&self, num_vars: usize, offset: usize) -> Polynomial {
        assert!(offset + self.num_vars <= num_vars);
        Polynomial {
            num_vars,
            terms: self
                .terms
                .iter()
                .map(|m| {
                    let mut e = vec![0; num_vars];
                    e[offset..offset + m.len()].copy_from_slice(m);
                    e
                })
                .collect(),
        }
    }

    /// Splits a polynomial in `first + rest` variables as `Σ_e p_e ⊗ t^e`.
    pub fn split_tensor(&self, first: usize) -> BTreeMap<Monomial, Polynomial> {
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for m in &self.terms {
            let (a, b) = m.split_at(first);
            out.entry(b.to_vec())
                .or_insert_with(|| Polynomial::zero(first))
                .terms
                .insert(a.to_vec());
        }
        out
    }

    /// Canonical text form over the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut monos: Vec<&Monomial> = self.terms.iter().collect();
        monos.sort_by(|a, b| mono_degree(b).cmp(&mono_degree(a)).then_with(|| b.cmp(a)));
        monos
            .iter()
            .map(|m| format_monomial(m, names))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn parse(s: &str, names: &[String]) -> Result<Polynomial> {
        Parser::new(s, names).parse()
    }
}

pub(crate) fn format_monomial(m: &[u32], names: &[String]) -> String {
    let factors: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                names[i].clone()
            } else {
                format!("{}^{e}", names[i])
            }
        })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_var_names(self.num_vars)))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomials in the same ring")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.multiply(rhs).expect("polynomials in the same ring")
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(s: &str, names: &'a [String]) -> Self {
        Parser {
            chars: s.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            names,
        }
    }

    fn err(&self, msg: &str) -> Error {
        let s: String = self.chars.iter().collect();
        Error::Parse(format!("{msg} at position {} in {s:?}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Polynomial> {
        let p = self.expr()?;
        if self.pos != self.chars.len() {
            return Err(self.err("unexpected character"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut p = self.term()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            p.add_assign(&self.term()?);
        }
        Ok(p)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut p = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            p = &p * &self.factor()?;
        }
        Ok(p)
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .parse()
            .ok()
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let n = self.names.len();
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                p
            }
            Some(c) if c.is_ascii_digit() => match self.number() {
                Some(k) if k % 2 == 1 => Polynomial::one(n),
                Some(_) => Polynomial::zero(n),
                None => return Err(self.err("bad number")),
            },
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_' || c == '\'')
                {
                    self.pos += 1;
                }
                let ident: String = self.chars[start..self.pos].iter().collect();
                let i = self
                    .names
                    .iter()
                    .position(|v| *v == ident)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {ident:?}")))?;
                Polynomial::var(n, i)
            }
            _ => return Err(self.err("expected a factor")),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.number().ok_or_else(|| self.err("expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }
}

/// `C(a, j) mod 2`, by Lucas' theorem.
#[inline]
fn binom_odd(a: u32, j: u32) -> bool {
    j & !a == 0
}

fn sq_monomial(i: usize, m: &[u32], out: &mut Polynomial) {
    fn rec(i: usize, k: usize, m: &[u32], cur: &mut Monomial, out: &mut Polynomial) {
        if k == m.len() {
            if i == 0 {
                out.toggle(cur.clone());
            }
            return;
        }
        let a = m[k];
        for j in 0..=(a as usize).min(i) {
            if binom_odd(a, j as u32) {
                cur[k] = a + j as u32;
                rec(i - j, k + 1, m, cur, out);
            }
        }
        cur[k] = a;
    }
    let mut cur = m.to_vec();
    rec(i, 0, m, &mut cur, out);
}

/// `Sq^i` extended additively to every term, homogeneous or not.
pub fn sq_additive(i: usize, p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero(p.num_vars);
    for m in &p.terms {
        sq_monomial(i, m, &mut out);
    }
    out
}

/// The Steenrod square `Sq^i` on a homogeneous polynomial.
pub fn sq(i: usize, p: &Polynomial) -> Result<Polynomial> {
    if !p.is_homogeneous() {
        return Err(Error::Inhomogeneous);
    }
    Ok(sq_additive(i, p))
}

/// `p ∘ gamma` for `gamma : V' → U` and `p ∈ H*(U)`.
pub fn pullback(gamma: &F2Matrix, p: &Polynomial) -> Result<Polynomial> {
    if p.num_vars() != gamma.rows() {
        return Err(Error::DimMismatch {
            context: "pullback",
            expected: gamma.rows(),
            found: p.num_vars(),
        });
    }
    Ok(p.substitute(&pullback_forms(gamma), gamma.cols()))
}

/// Images `uᵢ ∘ gamma` of the coordinate forms of the target.
pub fn pullback_forms(gamma: &F2Matrix) -> Vec<Polynomial> {
    (0..gamma.rows())
        .map(|i| {
            let row: Vec<bool> = (0..gamma.cols()).map(|j| gamma.get(i, j)).collect();
            Polynomial::linear_form(&row)
        })
        .collect()
}

/// The monomials of one degree, indexed for vector-space computations.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    num_vars: usize,
    degree: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(num_vars: usize, degree: usize) -> Self {
        fn rec(k: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
            if k + 1 == cur.len() {
                cur[k] = left;
                out.push(cur.clone());
                return;
            }
            for e in (0..=left).rev() {
                cur[k] = e;
                rec(k + 1, left - e, cur, out);
            }
        }
        let mut monomials = Vec::new();
        if num_vars == 0 {
            if degree == 0 {
                monomials.push(Vec::new());
            }
        } else {
            rec(0, degree as u32, &mut vec![0; num_vars], &mut monomials);
        }
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            num_vars,
            degree,
            monomials,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Coordinates of the degree-`degree` part of `p`; other degrees are ignored.
    pub fn to_vector(&self, p: &Polynomial) -> BitVector {
        let mut v = BitVector::zeros(self.len());
        for m in p.terms() {
            if let Some(&i) = self.index.get(m) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_vector(&self, v: &BitVector) -> Polynomial {
        Polynomial::from_monomials(self.num_vars, v.ones().map(|i| self.monomials[i].clone()))
    }
}

/// Per-degree dimensions `dims[0..=D]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedDims {
    pub dims: Vec<usize>,
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimensions of `F₂[v₁,…,vₙ]` in degrees `0..=max_degree`.
pub fn graded_dims(num_vars: usize, max_degree: usize) -> GradedDims {
    let dims = (0..=max_degree)
        .map(|d| match num_vars {
            0 => (d == 0) as usize,
            n => binomial(d + n - 1, n - 1),
        })
        .collect();
    GradedDims { dims }
}

/// Per-degree bases of `H*(U)^G` for degrees `0..=max_degree`.
///
/// `G` acts on forms contragrediently, so `p` is invariant iff `p ∘ g = p`
/// for every `g ∈ G`.
pub fn invariants_upto(
    g: &Subgroup,
    max_degree: usize,
    caps: &Caps,
) -> Result<Vec<Vec<Polynomial>>> {
    let n = g.ambient_dim();
    let mut out = Vec::with_capacity(max_degree + 1);
    for d in 0..=max_degree {
        let basis = MonomialBasis::new(n, d);
        let work = g.order().saturating_mul(basis.len());
        if work > caps.basis_size {
            return Err(Error::CapExceeded {
                what: "invariant computation",
                requested: work as u64,
                cap: caps.basis_size as u64,
            });
        }
        let mut system = F2Matrix::zeros(0, basis.len());
        for h in g.elements().iter().filter(|h| **h != F2Matrix::identity(n)) {
            let forms = pullback_forms(h);
            let mut block = F2Matrix::zeros(basis.len(), basis.len());
            for (j, m) in basis.monomials().iter().enumerate() {
                let mut image = Polynomial::monomial(m.clone()).substitute(&forms, n);
                image.toggle(m.clone());
                for i in basis.to_vector(&image).ones() {
                    block.set(i, j, true);
                }
            }
            system = system.vstack(&block)?;
        }
        let kernel = system.kernel_basis();
        let polys = kernel
            .column_vectors()
            .iter()
            .map(|col| {
                Polynomial::from_monomials(
                    n,
                    col.iter()
                        .enumerate()
                        .filter(|(_, &b)| b == 1)
                        .map(|(i, _)| basis.monomials()[i].clone()),
                )
            })
            .collect();
        out.push(polys);
    }
    Ok(out)
}

/// Echelon span of all products of `generators` of total degree `degree`.
pub fn product_span(
    generators: &[Polynomial],
    num_vars: usize,
    degree: usize,
    caps: &Caps,
) -> Result<(MonomialBasis, SpanBuilder)> {
    let basis = MonomialBasis::new(num_vars, degree);
    let mut span = SpanBuilder::new(basis.len());
    let gens: Vec<(usize, &Polynomial)> = generators
        .iter()
        .filter_map(|p| match p.homogeneous_degree() {
            Some(d) if d > 0 => Some((d, p)),
            _ => None,
        })
        .collect();
    let mut count = 0usize;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        left: usize,
        acc: &Polynomial,
        gens: &[(usize, &Polynomial)],
        basis: &MonomialBasis,
        span: &mut SpanBuilder,
        count: &mut usize,
        caps: &Caps,
    ) -> Result<()> {
        if left == 0 {
            *count += 1;
            if *count > caps.basis_size {
                return Err(Error::CapExceeded {
                    what: "subalgebra product basis",
                    requested: *count as u64,
                    cap: caps.basis_size as u64,
                });
            }
            span.insert(&basis.to_vector(acc));
            return Ok(());
        }
        if k == gens.len() {
            return Ok(());
        }
        let (d, g) = gens[k];
        let mut cur = acc.clone();
        let mut used = 0;
        loop {
            rec(k + 1, left - used, &cur, gens, basis, span, count, caps)?;
            if used + d > left {
                break;
            }
            used += d;
            cur = &cur * g;
        }
        Ok(())
    }
    rec(
        0,
        degree,
        &Polynomial::one(num_vars),
        &gens,
        &basis,
        &mut span,
        &mut count,
        caps,
    )?;
    Ok((basis, span))
}

/// Whether homogeneous `p` lies in the subalgebra generated by `generators`, in degree `degree`.
pub fn subalgebra_membership(
    p: &Polynomial,
    generators: &[Polynomial],
    degree: usize,
    caps: &Caps,
) -> Result<bool> {
    if !p.is_homogeneous() {
        return Err(Error::Inhomogeneous);
    }
    if let Some(d) = p.homogeneous_degree() {
        if d != degree {
            return Ok(false);
        }
    }
    for g in generators {
        g.check_vars(p)?;
    }
    let (basis, span) = product_span(generators, p.num_vars(), degree, caps)?;
    Ok(span.contains(&basis.to_vector(p)))
}

/// Degreewise span of the smallest submodule of `H*(V')` containing `generators`
/// and closed under multiplication by `ring_gens` and all `Sq^i`.
pub fn generated_module_dims(
    generators: &[Polynomial],
    ring_gens: &[Polynomial],
    num_vars: usize,
    max_degree: usize,
) -> Vec<usize> {
    let mut spans: Vec<(MonomialBasis, SpanBuilder)> = Vec::new();
    for d in 0..=max_degree {
        let basis = MonomialBasis::new(num_vars, d);
        let mut span = SpanBuilder::new(basis.len());
        for g in generators {
            if g.homogeneous_degree() == Some(d) {
                span.insert(&basis.to_vector(g));
            }
        }
        for (lower_basis, lower) in &spans {
            let dl = lower_basis.degree();
            let elems: Vec<Polynomial> =
                lower.basis().map(|v| lower_basis.from_vector(v)).collect();
            for e in &elems {
                for r in ring_gens {
                    if r.homogeneous_degree().map(|dr| dl + dr) == Some(d) {
                        span.insert(&basis.to_vector(&(e * r)));
                    }
                }
                if d > dl {
                    span.insert(&basis.to_vector(&sq_additive(d - dl, e)));
                }
            }
        }
        spans.push((basis, span));
    }
    spans.iter().map(|(_, s)| s.dim()).collect()
}
