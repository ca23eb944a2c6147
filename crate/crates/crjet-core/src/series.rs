//! Sparse truncated multivariate power series over the Gaussian
//! rationals.
//!
//! A `TruncatedSeries` stores the coefficients of a power series in
//! `nvars` displacement variables *exactly*, up to and including total
//! degree `order`; everything beyond is unknown, not zero. All
//! operations track the order to which their output is reliable and
//! truncate accordingly (binary operations align to the minimum of the
//! two orders; composition to the minimum of outer and inner orders).
//!
//! Storage is a `BTreeMap` keyed by graded-lexicographic multidegree, so
//! iteration order — and hence serialization and every derived report —
//! is canonical. Zero coefficients are never stored.
//!
//! The canonical text form is one line per term, `coeff * monomial`,
//! sorted graded-lex, with coefficients as in [`crate::gauss`] and
//! monomials like `z1^2*z3`; the zero series prints `0`.

use crate::error::{Error, Result};
use crate::gauss::{self, GaussRat};
use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Common-denominator form of a coefficient map: Gaussian-integer
/// numerators plus the single positive denominator scaling them back.
fn scaled_integer_terms(
    terms: &BTreeMap<Multidegree, GaussRat>,
) -> (Vec<(&Multidegree, Complex<BigInt>)>, BigInt) {
    let mut denom = BigInt::one();
    for c in terms.values() {
        denom = denom.lcm(c.re.denom());
        denom = denom.lcm(c.im.denom());
    }
    let scaled = terms
        .iter()
        .map(|(md, c)| {
            let re = c.re.numer() * (&denom / c.re.denom());
            let im = c.im.numer() * (&denom / c.im.denom());
            (md, Complex::new(re, im))
        })
        .collect();
    (scaled, denom)
}

/// Exponent vector with graded-lexicographic order: total degree first;
/// within a degree, earlier variables rank higher (`z1^2` sorts before
/// `z1*z2` before `z2^2` in ascending iteration), which is the order
/// polynomials are conventionally written in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multidegree(pub Vec<u32>);

impl Multidegree {
    pub fn zero(nvars: usize) -> Self {
        Multidegree(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "unit: variable index out of range");
        let mut v = vec![0; nvars];
        v[var] = 1;
        Multidegree(v)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Multidegree) -> Multidegree {
        debug_assert_eq!(self.len(), other.len());
        Multidegree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("multidegree overflow"))
                .collect(),
        )
    }

    /// Split into (first `k` exponents, rest).
    pub fn split_at(&self, k: usize) -> (Multidegree, Multidegree) {
        (
            Multidegree(self.0[..k].to_vec()),
            Multidegree(self.0[k..].to_vec()),
        )
    }
}

impl Ord for Multidegree {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.len(), other.len(), "comparing mixed-arity degrees");
        self.total()
            .cmp(&other.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Multidegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Multidegree, GaussRat>,
}

impl TruncatedSeries {
    pub fn zero(nvars: usize, order: u32) -> Self {
        TruncatedSeries {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, order: u32, c: GaussRat) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(Multidegree::zero(nvars), c);
        s
    }

    /// The displacement variable `var` as a series.
    pub fn variable(nvars: usize, order: u32, var: usize) -> Self {
        assert!(order >= 1, "variable: order must be at least 1");
        let mut s = Self::zero(nvars, order);
        s.add_term(Multidegree::unit(nvars, var), gauss::one());
        s
    }

    pub fn from_terms<I>(nvars: usize, order: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Multidegree, GaussRat)>,
    {
        let mut s = Self::zero(nvars, order);
        for (md, c) in terms {
            assert_eq!(md.len(), nvars, "from_terms: arity mismatch");
            s.add_term(md, c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, md: &Multidegree) -> GaussRat {
        self.terms.get(md).cloned().unwrap_or_else(gauss::zero)
    }

    pub fn constant_term(&self) -> GaussRat {
        self.coeff(&Multidegree::zero(self.nvars))
    }

    pub fn linear_coeff(&self, var: usize) -> GaussRat {
        self.coeff(&Multidegree::unit(self.nvars, var))
    }

    /// Largest total degree among stored terms (0 for the zero series).
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().last().map_or(0, Multidegree::total)
    }

    /// Accumulate a term. Terms beyond the truncation order are dropped
    /// (they belong to the unknown tail); zero results are removed.
    pub fn add_term(&mut self, md: Multidegree, c: GaussRat) {
        debug_assert_eq!(md.len(), self.nvars);
        if md.total() > self.order || c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(md) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.nvars, other.nvars, "add: arity mismatch");
        let order = self.order.min(other.order);
        let mut out = TruncatedSeries::zero(self.nvars, order);
        for (md, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(md.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> TruncatedSeries {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &GaussRat) -> TruncatedSeries {
        if c.is_zero() {
            return TruncatedSeries::zero(self.nvars, self.order);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.nvars, other.nvars, "mul: arity mismatch");
        let order = self.order.min(other.order);
        let mut out = TruncatedSeries::zero(self.nvars, order);
        // Clear denominators once per factor and multiply as Gaussian
        // integers: reducing a fraction per term pair is by far the most
        // expensive part of a dense product, and this defers it to one
        // reduction per *output* term.
        let (na, da) = scaled_integer_terms(&self.terms);
        let (nb, db) = scaled_integer_terms(&other.terms);
        let denom = &da * &db;
        let mut acc: BTreeMap<Multidegree, Complex<BigInt>> = BTreeMap::new();
        for (ma, ca) in &na {
            let deg_a = ma.total();
            if deg_a > order {
                break; // graded order: all following terms are higher
            }
            for (mb, cb) in &nb {
                if deg_a + mb.total() > order {
                    break;
                }
                let key = ma.add(mb);
                let prod = ca * cb;
                use std::collections::btree_map::Entry;
                match acc.entry(key) {
                    Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    Entry::Occupied(mut e) => {
                        *e.get_mut() += prod;
                    }
                }
            }
        }
        for (md, c) in acc {
            if c.re.is_zero() && c.im.is_zero() {
                continue;
            }
            out.terms.insert(
                md,
                Complex::new(
                    BigRational::new(c.re, denom.clone()),
                    BigRational::new(c.im, denom.clone()),
                ),
            );
        }
        out
    }

    /// Truncate down to `order` (no-op if already lower).
    pub fn truncated(&self, order: u32) -> TruncatedSeries {
        let order = order.min(self.order);
        let mut out = TruncatedSeries::zero(self.nvars, order);
        for (md, c) in &self.terms {
            if md.total() > order {
                break;
            }
            out.terms.insert(md.clone(), c.clone());
        }
        out
    }

    /// Declare a higher order. Only valid when the stored terms are the
    /// *complete* expansion through `order` (polynomial content, e.g.
    /// defining equations and parsed map files); this is a caller
    /// contract, not something the series can check.
    pub fn raised(&self, order: u32) -> TruncatedSeries {
        assert!(
            order >= self.order,
            "raised: use truncated() to lower the order"
        );
        let mut out = self.clone();
        out.order = order;
        out
    }

    /// The spec's equality: coefficient-wise agreement after aligning
    /// both series to the minimum of the two orders.
    pub fn eq_min_order(&self, other: &TruncatedSeries) -> bool {
        let o = self.order.min(other.order);
        self.truncated(o) == other.truncated(o)
    }

    /// Coefficient-wise complex conjugation (variables untouched).
    pub fn conj_coeffs(&self) -> TruncatedSeries {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.conj();
        }
        out
    }

    /// Move the series into a larger/permuted variable space: old
    /// variable `i` becomes `var_map[i]`. `var_map` must be injective.
    pub fn embed(&self, new_nvars: usize, var_map: &[usize]) -> TruncatedSeries {
        assert_eq!(var_map.len(), self.nvars, "embed: map arity mismatch");
        assert!(
            var_map.iter().all(|&j| j < new_nvars),
            "embed: target index out of range"
        );
        let mut seen = vec![false; new_nvars];
        for &j in var_map {
            assert!(!seen[j], "embed: map must be injective");
            seen[j] = true;
        }
        let mut out = TruncatedSeries::zero(new_nvars, self.order);
        for (md, c) in &self.terms {
            let mut v = vec![0u32; new_nvars];
            for (i, &e) in md.0.iter().enumerate() {
                v[var_map[i]] = e;
            }
            out.terms.insert(Multidegree(v), c.clone());
        }
        out
    }

    /// Substitute zero for the listed variables (arity unchanged): terms
    /// with a positive exponent there are dropped.
    pub fn zero_out(&self, vars: &[usize]) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(self.nvars, self.order);
        'term: for (md, c) in &self.terms {
            for &v in vars {
                if md.0[v] > 0 {
                    continue 'term;
                }
            }
            out.terms.insert(md.clone(), c.clone());
        }
        out
    }

    /// Substitute exact constants for the assigned variables (arity
    /// unchanged; the assigned variables no longer occur).
    pub fn eval_vars(&self, assignments: &[(usize, GaussRat)]) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(self.nvars, self.order);
        for (md, c) in &self.terms {
            let mut coeff = c.clone();
            let mut m = md.clone();
            for (v, val) in assignments {
                let e = m.0[*v];
                if e > 0 {
                    coeff = &coeff * &gauss::pow(val, e);
                    m.0[*v] = 0;
                    if coeff.is_zero() {
                        break;
                    }
                }
            }
            out.add_term(m, coeff);
        }
        out
    }

    /// Drop to the listed variables (in the listed order). Every stored
    /// term must have zero exponent outside `keep`.
    pub fn restrict_vars(&self, keep: &[usize]) -> TruncatedSeries {
        let kept: Vec<bool> = {
            let mut v = vec![false; self.nvars];
            for &k in keep {
                v[k] = true;
            }
            v
        };
        let mut out = TruncatedSeries::zero(keep.len(), self.order);
        for (md, c) in &self.terms {
            for (i, &e) in md.0.iter().enumerate() {
                assert!(
                    e == 0 || kept[i],
                    "restrict_vars: term uses dropped variable {i}"
                );
            }
            let m = Multidegree(keep.iter().map(|&k| md.0[k]).collect());
            out.terms.insert(m, c.clone());
        }
        out
    }

    /// Substitute `args[i]` for variable `i`. Every argument must have
    /// zero constant term (a germ displacement) and a common arity; the
    /// result order is the minimum of the outer and argument orders.
    pub fn substitute(&self, args: &[TruncatedSeries]) -> TruncatedSeries {
        assert_eq!(args.len(), self.nvars, "substitute: argument count");
        let inner_vars = args.first().map_or(0, TruncatedSeries::nvars);
        let mut order = self.order;
        for a in args {
            assert_eq!(a.nvars, inner_vars, "substitute: argument arity mismatch");
            assert!(
                a.constant_term().is_zero(),
                "substitute: argument has a nonzero constant term"
            );
            order = order.min(a.order);
        }
        let mut out = TruncatedSeries::zero(inner_vars, order);
        // cached powers per variable, grown on demand
        let mut pows: Vec<Vec<TruncatedSeries>> = args
            .iter()
            .map(|a| vec![TruncatedSeries::constant(inner_vars, order, gauss::one()), a.truncated(order)])
            .collect();
        for (md, c) in &self.terms {
            if md.total() > order {
                break; // args have valuation >= 1, so this term is pure tail
            }
            let mut prod = TruncatedSeries::constant(inner_vars, order, c.clone());
            for (i, &e) in md.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while pows[i].len() <= e {
                    let next = pows[i].last().unwrap().mul(&pows[i][1]);
                    pows[i].push(next);
                }
                prod = prod.mul(&pows[i][e]);
                if prod.is_zero() {
                    break;
                }
            }
            out = out.add(&prod);
        }
        out
    }

    /// Evaluate the stored terms at a point. Exact polynomial evaluation
    /// of the known part; meaningful as the value of the series only for
    /// polynomial-complete content.
    pub fn eval(&self, point: &[GaussRat]) -> GaussRat {
        assert_eq!(point.len(), self.nvars, "eval: point arity mismatch");
        let mut acc = gauss::zero();
        for (md, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in md.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &gauss::pow(&point[i], e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Taylor-shift the expansion point by `shift` (new series in the
    /// displacement around old_center + shift). The stored terms are
    /// shifted exactly; the second return value is the order to which
    /// the result represents the *underlying analytic germ*:
    /// `order - D`, where `D` is the largest partial degree of any
    /// stored term in the variables actually shifted (a tail term of
    /// degree `order + 1` can contribute down to degree `order + 1 - D`
    /// after the shift). For polynomial-complete content the full
    /// `order` remains valid and callers may keep it via [`raised`].
    pub fn recenter(&self, shift: &[GaussRat]) -> (TruncatedSeries, u32) {
        assert_eq!(shift.len(), self.nvars, "recenter: shift arity mismatch");
        let moved: Vec<bool> = shift.iter().map(|c| !c.is_zero()).collect();
        let mut out = TruncatedSeries::zero(self.nvars, self.order);
        for (md, c) in &self.terms {
            // expand prod_i (shift_i + x_i)^{e_i} over the moved vars
            let mut partial: Vec<(Multidegree, GaussRat)> =
                vec![(Multidegree::zero(self.nvars), c.clone())];
            for (i, &e) in md.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !moved[i] {
                    for (m, _) in &mut partial {
                        m.0[i] = e;
                    }
                    continue;
                }
                let mut next = Vec::with_capacity(partial.len() * (e as usize + 1));
                // binomial coefficients C(e, b) and powers shift^{e-b}
                for (m, coef) in &partial {
                    let mut binom = gauss::one();
                    for b in 0..=e {
                        // C(e, b) built incrementally: C(e,0)=1,
                        // C(e,b) = C(e,b-1) * (e-b+1)/b
                        if b > 0 {
                            binom = &binom
                                * &(gauss::from_int((e - b + 1) as i64)
                                    / gauss::from_int(b as i64));
                        }
                        let mut m2 = m.clone();
                        m2.0[i] = b;
                        let c2 = coef * &(&binom * &gauss::pow(&shift[i], e - b));
                        if !c2.is_zero() {
                            next.push((m2, c2));
                        }
                    }
                }
                partial = next;
            }
            for (m, coef) in partial {
                out.add_term(m, coef);
            }
        }
        let max_moved_degree = self
            .terms
            .keys()
            .map(|md| {
                md.0.iter()
                    .enumerate()
                    .filter(|(i, _)| moved[*i])
                    .map(|(_, &e)| e)
                    .sum::<u32>()
            })
            .max()
            .unwrap_or(0);
        (out, self.order.saturating_sub(max_moved_degree))
    }

    /// Coefficient extraction on a variable split: view the series in
    /// (first `k` vars) ⊗ (rest), and return the coefficient of the
    /// monomial `beta` in the first block as a series in the remaining
    /// variables, reliable to order `order - |beta|`.
    pub fn block_coefficient(&self, k: usize, beta: &Multidegree) -> TruncatedSeries {
        assert!(k <= self.nvars);
        assert_eq!(beta.len(), k, "block_coefficient: beta arity");
        let order = self.order.saturating_sub(beta.total());
        let mut out = TruncatedSeries::zero(self.nvars - k, order);
        for (md, c) in &self.terms {
            let (head, tail) = md.split_at(k);
            if &head == beta {
                out.add_term(tail, c.clone());
            }
        }
        out
    }

    /// The homogeneous part of total degree `deg`, as (monomial, coeff)
    /// pairs in graded-lex order.
    pub fn homogeneous_part(&self, deg: u32) -> Vec<(Multidegree, GaussRat)> {
        self.terms
            .iter()
            .filter(|(md, _)| md.total() == deg)
            .map(|(md, c)| (md.clone(), c.clone()))
            .collect()
    }

    // -----------------------------------------------------------------
    // Canonical text form.

    fn fmt_monomial(md: &Multidegree, names: &[String]) -> String {
        if md.total() == 0 {
            return "1".to_string();
        }
        let factors: Vec<String> = md
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{}", names[i], e)
                }
            })
            .collect();
        factors.join("*")
    }

    /// Canonical text: graded-lex-sorted lines `coeff * monomial`; the
    /// zero series prints `0`.
    pub fn to_text(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars, "to_text: name count mismatch");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let lines: Vec<String> = self
            .terms
            .iter()
            .map(|(md, c)| format!("{} * {}", gauss::fmt_gauss(c), Self::fmt_monomial(md, names)))
            .collect();
        lines.join("\n")
    }

    /// Parse the canonical text form back (inverse of [`to_text`] for
    /// the same name list and order).
    pub fn from_text(names: &[String], order: u32, text: &str) -> Result<TruncatedSeries> {
        let nvars = names.len();
        let text = text.trim();
        let mut s = TruncatedSeries::zero(nvars, order);
        if text == "0" {
            return Ok(s);
        }
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (coeff_txt, mono_txt) = line.split_once(" * ").ok_or_else(|| {
                Error::SeriesText {
                    line: line.to_string(),
                    reason: "missing ' * ' separator".to_string(),
                }
            })?;
            let c = gauss::parse_gauss(coeff_txt).ok_or_else(|| Error::SeriesText {
                line: line.to_string(),
                reason: format!("bad coefficient `{coeff_txt}`"),
            })?;
            let mut md = Multidegree::zero(nvars);
            if mono_txt != "1" {
                for factor in mono_txt.split('*') {
                    let (name, exp) = match factor.split_once('^') {
                        Some((n, e)) => {
                            let e: u32 = e.parse().map_err(|_| Error::SeriesText {
                                line: line.to_string(),
                                reason: format!("bad exponent in `{factor}`"),
                            })?;
                            (n, e)
                        }
                        None => (factor, 1),
                    };
                    let idx = names.iter().position(|n| n == name).ok_or_else(|| {
                        Error::SeriesText {
                            line: line.to_string(),
                            reason: format!("unknown variable `{name}`"),
                        }
                    })?;
                    md.0[idx] += exp;
                }
            }
            s.add_term(md, c);
        }
        Ok(s)
    }
}

/// Default variable names `z1..zn` for contexts with no declared names.
pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("z{i}")).collect()
}

/// All multidegrees in `nvars` variables of total degree `<= max_total`,
/// in ascending graded-lex order.
pub fn multidegrees_up_to(nvars: usize, max_total: u32) -> Vec<Multidegree> {
    fn fill(out: &mut Vec<Multidegree>, prefix: &mut Vec<u32>, left: u32, remaining: usize) {
        if remaining == 0 {
            out.push(Multidegree(prefix.clone()));
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            fill(out, prefix, left - e, remaining - 1);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        out.push(Multidegree(Vec::new()));
        return out;
    }
    fill(&mut out, &mut Vec::new(), max_total, nvars);
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{from_int, i_unit, one, ratio};

    fn x(n: usize, o: u32, i: usize) -> TruncatedSeries {
        TruncatedSeries::variable(n, o, i)
    }

    #[test]
    fn graded_lex_order() {
        let a = Multidegree(vec![2, 0]);
        let b = Multidegree(vec![0, 2]);
        let c = Multidegree(vec![1, 0]);
        let d = Multidegree(vec![0, 1]);
        assert!(c < a && d < a, "degree dominates");
        assert!(c < d, "same degree: z1 before z2");
        assert!(a < Multidegree(vec![0, 3]));
        assert!(a < b, "same degree: z1^2 before z2^2");
        let mixed = Multidegree(vec![1, 1]);
        assert!(a < mixed && mixed < b);
    }

    #[test]
    fn ring_ops_align_to_min_order() {
        let a = x(2, 5, 0);
        let b = x(2, 3, 1);
        let s = a.add(&b);
        assert_eq!(s.order(), 3);
        let p = a.mul(&b);
        assert_eq!(p.order(), 3);
        assert_eq!(p.coeff(&Multidegree(vec![1, 1])), one());
    }

    #[test]
    fn multiplication_truncates_exactly() {
        // (1 + x)^2 at order 1 keeps only 1 + 2x
        let one_plus_x = TruncatedSeries::constant(1, 1, one()).add(&x(1, 1, 0));
        let sq = one_plus_x.mul(&one_plus_x);
        assert_eq!(sq.order(), 1);
        assert_eq!(sq.constant_term(), one());
        assert_eq!(sq.linear_coeff(0), from_int(2));
        assert_eq!(sq.num_terms(), 2);
    }

    #[test]
    fn substitution_geometric_series() {
        // f(t) = sum t^k, k <= 4; t := u + u^2 gives
        // 1 + u + 2u^2 + 3u^3 + 5u^4 + ...
        let mut f = TruncatedSeries::zero(1, 4);
        for k in 0..=4 {
            f.add_term(Multidegree(vec![k]), one());
        }
        let arg = x(1, 4, 0).add(&{
            let mut s = TruncatedSeries::zero(1, 4);
            s.add_term(Multidegree(vec![2]), one());
            s
        });
        let g = f.substitute(&[arg]);
        let c: Vec<GaussRat> = (0..=4).map(|k| g.coeff(&Multidegree(vec![k]))).collect();
        assert_eq!(
            c,
            vec![one(), one(), from_int(2), from_int(3), from_int(5)]
        );
    }

    #[test]
    fn truncation_commutes_with_ops() {
        // (truncate then multiply) == (multiply then truncate)
        let mut a = TruncatedSeries::zero(2, 6);
        a.add_term(Multidegree(vec![1, 0]), from_int(3));
        a.add_term(Multidegree(vec![2, 1]), i_unit());
        a.add_term(Multidegree(vec![0, 4]), ratio(1, 2));
        let mut b = TruncatedSeries::zero(2, 6);
        b.add_term(Multidegree(vec![0, 1]), from_int(-2));
        b.add_term(Multidegree(vec![3, 0]), ratio(5, 7));
        for t in 0..=6u32 {
            let left = a.truncated(t).mul(&b.truncated(t));
            let right = a.mul(&b).truncated(t);
            assert_eq!(left, right, "order {t}");
        }
    }

    #[test]
    fn recenter_shifts_polynomials_exactly() {
        // p = x^2 + y, shift x by 1: (1+x)^2 + y = 1 + 2x + x^2 + y
        let mut p = TruncatedSeries::zero(2, 2);
        p.add_term(Multidegree(vec![2, 0]), one());
        p.add_term(Multidegree(vec![0, 1]), one());
        let (q, retained) = p.recenter(&[from_int(1), from_int(0)]);
        assert_eq!(retained, 0, "order 2 minus max shifted degree 2");
        assert_eq!(q.constant_term(), one());
        assert_eq!(q.linear_coeff(0), from_int(2));
        assert_eq!(q.coeff(&Multidegree(vec![2, 0])), one());
        assert_eq!(q.linear_coeff(1), one());
        // zero shift keeps everything
        let (r, kept) = p.recenter(&[from_int(0), from_int(0)]);
        assert_eq!(r, p);
        assert_eq!(kept, 2);
    }

    #[test]
    fn recenter_retained_order_rule() {
        // Moebius-like: f = w + w^2 + ... stored to order 6; shifting in
        // a variable that only appears to first power in every stored
        // term of a series like z + z*w + z*w^2 ... retains order - 1.
        let mut f = TruncatedSeries::zero(2, 6);
        for k in 0..=5u32 {
            f.add_term(Multidegree(vec![1, k]), one());
        }
        let (_, retained) = f.recenter(&[ratio(1, 3), from_int(0)]);
        assert_eq!(retained, 5);
    }

    #[test]
    fn block_coefficients() {
        // s = u*x + u^2*y + x^2 in vars (u | x, y)
        let mut s = TruncatedSeries::zero(3, 3);
        s.add_term(Multidegree(vec![1, 1, 0]), one());
        s.add_term(Multidegree(vec![2, 0, 1]), from_int(7));
        s.add_term(Multidegree(vec![0, 2, 0]), ratio(1, 3));
        let c1 = s.block_coefficient(1, &Multidegree(vec![1]));
        assert_eq!(c1.nvars(), 2);
        assert_eq!(c1.order(), 2);
        assert_eq!(c1.linear_coeff(0), one());
        let c2 = s.block_coefficient(1, &Multidegree(vec![2]));
        assert_eq!(c2.linear_coeff(1), from_int(7));
        let c0 = s.block_coefficient(1, &Multidegree(vec![0]));
        assert_eq!(c0.coeff(&Multidegree(vec![2, 0])), ratio(1, 3));
    }

    #[test]
    fn embed_and_zero_out() {
        let s = x(2, 3, 0).mul(&x(2, 3, 1)); // x*y
        let e = s.embed(4, &[2, 0]);
        assert_eq!(e.coeff(&Multidegree(vec![1, 0, 1, 0])), one());
        let z = e.zero_out(&[0]);
        assert!(z.is_zero());
        let kept = e.zero_out(&[1, 3]);
        assert_eq!(kept, e);
    }

    #[test]
    fn canonical_text_round_trip() {
        let names = default_names(3);
        let mut s = TruncatedSeries::zero(3, 4);
        s.add_term(Multidegree(vec![0, 0, 0]), ratio(-1, 2));
        s.add_term(Multidegree(vec![1, 2, 0]), i_unit());
        s.add_term(Multidegree(vec![0, 0, 3]), ratio(22, 7));
        let text = s.to_text(&names);
        let back = TruncatedSeries::from_text(&names, 4, &text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_text(&names), text, "serialization is canonical");
        // zero series
        let z = TruncatedSeries::zero(3, 4);
        assert_eq!(z.to_text(&names), "0");
        assert_eq!(TruncatedSeries::from_text(&names, 4, "0").unwrap(), z);
    }

    #[test]
    fn eq_min_order_alignment() {
        let a = x(1, 5, 0);
        let mut b = x(1, 2, 0);
        b.add_term(Multidegree(vec![2]), one()); // differs at degree 2
        assert!(!a.eq_min_order(&b));
        assert!(a.truncated(1).eq_min_order(&b));
    }
}
