//! Sparse multivariate Laurent polynomials over `F_q`.
//!
//! Text grammar (ASCII, whitespace ignored, variable indices 1-based):
//!
//! ```text
//! poly   := term (("+" | "-") term)*        with an optional leading sign
//! term   := coeff ["*"] factor ("*" factor)* | coeff | factor ("*" factor)*
//! coeff  := int | "[" int ("," int)* "]"     the bracket form lists coordinates c0,c1,...
//! factor := ("x" | "t") index ["^" ["-"] int]
//! ```
//!
//! Variety files hold one polynomial per line after a `nvars=<n>` header; `#` starts a
//! comment.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::lattice::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exponents: Vec<i32>,
    pub coeff: FieldElement,
}

/// Canonical sparse polynomial: distinct exponent vectors, nonzero coefficients,
/// terms in decreasing lexicographic order of exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: Vec<Monomial>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: &FieldDescriptor, nvars: usize, c: FieldElement) -> Self {
        Self::from_terms(field, nvars, [(vec![0; nvars], c)]).expect("dimensions match")
    }

    /// Merges like terms and drops zero coefficients.
    pub fn from_terms<I>(field: &FieldDescriptor, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i32>, FieldElement)>,
    {
        let mut merged: BTreeMap<Reverse<Vec<i32>>, FieldElement> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} in {nvars} variables",
                    exps.len()
                )));
            }
            let slot = merged.entry(Reverse(exps)).or_insert(FieldElement::ZERO);
            *slot = field.add(*slot, c);
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(Reverse(exponents), coeff)| Monomial { exponents, coeff })
            .collect();
        Ok(SparsePoly { nvars, terms })
    }

    pub fn parse(field: &FieldDescriptor, text: &str, nvars: usize) -> Result<Self> {
        Parser::new(field, text, nvars).poly()
    }

    /// Parses with `nvars` equal to the largest variable index that occurs.
    pub fn parse_infer(field: &FieldDescriptor, text: &str) -> Result<Self> {
        let nvars = max_variable_index(text);
        Self::parse(field, text, nvars)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value of a polynomial that is a single constant term (or zero).
    pub fn constant_value(&self) -> Option<FieldElement> {
        match self.terms.as_slice() {
            [] => Some(FieldElement::ZERO),
            [t] if t.exponents.iter().all(|&e| e == 0) => Some(t.coeff),
            _ => None,
        }
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms
            .iter()
            .any(|t| t.exponents.iter().any(|&e| e < 0))
    }

    pub fn multiply(&self, field: &FieldDescriptor, other: &SparsePoly) -> Result<SparsePoly> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(format!(
                "product of polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        let products = self.terms.iter().flat_map(|a| {
            other.terms.iter().map(move |b| {
                let exps = a
                    .exponents
                    .iter()
                    .zip(&b.exponents)
                    .map(|(x, y)| x + y)
                    .collect();
                (exps, field.mul(a.coeff, b.coeff))
            })
        });
        Self::from_terms(field, self.nvars, products)
    }

    /// Product of several polynomials in the same variables (the empty product is 1).
    pub fn product<'a, I>(field: &FieldDescriptor, nvars: usize, factors: I) -> Result<SparsePoly>
    where
        I: IntoIterator<Item = &'a SparsePoly>,
    {
        factors
            .into_iter()
            .try_fold(Self::constant(field, nvars, FieldElement::ONE), |acc, f| {
                acc.multiply(field, f)
            })
    }

    /// Sets the variables in `zeroed` (0-based) to zero and returns the polynomial in the
    /// surviving variables, in their original order.
    pub fn restrict_to_stratum(&self, zeroed: &[usize]) -> Result<SparsePoly> {
        if self.has_negative_exponents() {
            return Err(Error::NegativeExponent);
        }
        let mut killed = vec![false; self.nvars];
        for &z in zeroed {
            if z >= self.nvars {
                return Err(Error::DimensionMismatch(format!(
                    "variable index {z} in {} variables",
                    self.nvars
                )));
            }
            killed[z] = true;
        }
        let nvars = killed.iter().filter(|&&k| !k).count();
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exponents.iter().zip(&killed).all(|(&e, &k)| !k || e == 0))
            .map(|t| Monomial {
                exponents: t
                    .exponents
                    .iter()
                    .zip(&killed)
                    .filter(|(_, &k)| !k)
                    .map(|(&e, _)| e)
                    .collect(),
                coeff: t.coeff,
            })
            .collect();
        // surviving terms keep distinct exponents and their relative order
        Ok(SparsePoly { nvars, terms })
    }

    /// `(R, c)`: column `j` of `R` is the exponent vector of term `j`, `c_j` its coefficient.
    pub fn exponent_data(&self) -> Result<(IntMatrix, Vec<FieldElement>)> {
        if self.is_zero() {
            return Err(Error::EmptyPolynomial);
        }
        let n = self.nvars;
        let ncols = self.terms.len();
        let mut data = vec![0i64; n * ncols];
        for (j, t) in self.terms.iter().enumerate() {
            for (i, &e) in t.exponents.iter().enumerate() {
                data[i * ncols + j] = e as i64;
            }
        }
        let coeffs = self.terms.iter().map(|t| t.coeff).collect();
        Ok((IntMatrix::new(n, ncols, data)?, coeffs))
    }

    /// Whether every term has the same total degree, and that degree (`None` for zero).
    pub fn is_homogeneous(&self) -> (bool, Option<i32>) {
        let mut degrees = self.terms.iter().map(|t| t.exponents.iter().sum::<i32>());
        match degrees.next() {
            None => (true, None),
            Some(d) => (degrees.all(|e| e == d), Some(d)),
        }
    }

    pub fn eval(&self, field: &FieldDescriptor, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = FieldElement::ZERO;
        for t in &self.terms {
            let mut v = t.coeff;
            for (&x, &e) in point.iter().zip(&t.exponents) {
                v = field.mul(v, field.pow(x, e as i64)?);
            }
            acc = field.add(acc, v);
        }
        Ok(acc)
    }

    /// Canonical text, parsed back to the same polynomial by [`SparsePoly::parse`].
    pub fn to_text(&self, field: &FieldDescriptor) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, t) in self.terms.iter().enumerate() {
            let (negative, coeff) = coefficient_text(field, t.coeff);
            match (idx, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let factors: Vec<String> = t
                .exponents
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            let mut parts = Vec::new();
            if coeff != "1" || factors.is_empty() {
                parts.push(coeff);
            }
            parts.extend(factors);
            out.push_str(&parts.join("*"));
        }
        out
    }
}

/// Signed representative for prime-field values, bracketed coordinates otherwise.
fn coefficient_text(field: &FieldDescriptor, c: FieldElement) -> (bool, String) {
    let p = field.p();
    if c.code() < p {
        let v = c.code();
        if v > p / 2 && p > 2 {
            (true, (p - v).to_string())
        } else {
            (false, v.to_string())
        }
    } else {
        let mut coords = field.coeffs(c);
        while coords.last() == Some(&0) {
            coords.pop();
        }
        let inner: Vec<String> = coords.iter().map(|x| x.to_string()).collect();
        (false, format!("[{}]", inner.join(",")))
    }
}

fn max_variable_index(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < bytes.len() {
        if matches!(bytes[i], b'x' | b't') {
            let mut j = i + 1;
            let mut idx = 0usize;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                idx = idx
                    .saturating_mul(10)
                    .saturating_add((bytes[j] - b'0') as usize);
                j += 1;
            }
            best = best.max(idx);
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

struct Parser<'a> {
    field: &'a FieldDescriptor,
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn new(field: &'a FieldDescriptor, text: &'a str, nvars: usize) -> Self {
        Parser {
            field,
            src: text.as_bytes(),
            pos: 0,
            nvars,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a [u8]> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn residue(&self, digits: &[u8]) -> u64 {
        let p = self.field.p() as u64;
        digits
            .iter()
            .fold(0u64, |acc, &d| (acc * 10 + (d - b'0') as u64) % p)
    }

    fn small_int(&self, digits: &[u8]) -> Result<i64> {
        std::str::from_utf8(digits)
            .ok()
            .and_then(|s| s.parse::<i64>().ok())
            .filter(|&v| v <= i32::MAX as i64)
            .map_or_else(|| self.error("integer out of range"), Ok)
    }

    fn poly(mut self) -> Result<SparsePoly> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let negative = if self.eat(b'-') {
                true
            } else if self.eat(b'+') || first {
                false
            } else if self.peek().is_none() {
                break;
            } else {
                return self.error("expected `+` or `-`");
            };
            first = false;
            let (exps, mut c) = self.term()?;
            if negative {
                c = self.field.neg(c);
            }
            terms.push((exps, c));
            if self.peek().is_none() {
                break;
            }
        }
        SparsePoly::from_terms(self.field, self.nvars, terms)
    }

    fn term(&mut self) -> Result<(Vec<i32>, FieldElement)> {
        let mut exps = vec![0i32; self.nvars];
        let coeff = match self.peek() {
            Some(b'0'..=b'9') => {
                let d = self.digits().expect("peeked a digit");
                Some(self.field.from_int(self.residue(d) as i64))
            }
            Some(b'[') => Some(self.literal()?),
            _ => None,
        };
        if coeff.is_some() {
            self.eat(b'*');
        }
        let mut nfactors = 0;
        while matches!(self.peek(), Some(b'x' | b't')) {
            self.factor(&mut exps)?;
            nfactors += 1;
            self.eat(b'*');
        }
        if coeff.is_none() && nfactors == 0 {
            return self.error("expected a coefficient or a variable");
        }
        Ok((exps, coeff.unwrap_or(FieldElement::ONE)))
    }

    fn literal(&mut self) -> Result<FieldElement> {
        self.eat(b'[');
        let mut coords = Vec::new();
        loop {
            let Some(d) = self.digits() else {
                return self.error("expected a coordinate");
            };
            coords.push(self.residue(d));
            if self.eat(b']') {
                break;
            }
            if !self.eat(b',') {
                return self.error("expected `,` or `]`");
            }
        }
        self.field
            .element(&coords)
            .or_else(|_| self.error("too many coordinates"))
    }

    fn factor(&mut self, exps: &mut [i32]) -> Result<()> {
        let start = self.pos;
        self.pos += 1;
        let Some(d) = self.digits() else {
            return self.error("expected a variable index");
        };
        let index = self.small_int(d)? as usize;
        if index == 0 || index > self.nvars {
            return Err(Error::VariableOutOfRange {
                index,
                nvars: self.nvars,
                position: start,
            });
        }
        let mut power = 1i64;
        if self.eat(b'^') {
            let negative = if self.eat(b'-') {
                true
            } else {
                self.eat(b'+');
                false
            };
            let Some(d) = self.digits() else {
                return self.error("expected an exponent");
            };
            power = self.small_int(d)?;
            if negative {
                power = -power;
            }
        }
        let slot = &mut exps[index - 1];
        *slot = slot
            .checked_add(power as i32)
            .map_or_else(|| self.error("exponent out of range"), Ok)?;
        Ok(())
    }
}

/// A system of polynomials in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variety {
    pub nvars: usize,
    pub polys: Vec<SparsePoly>,
}

impl Variety {
    pub fn new(nvars: usize, polys: Vec<SparsePoly>) -> Result<Self> {
        if let Some(f) = polys.iter().find(|f| f.nvars() != nvars) {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {} variables in a system of {nvars}",
                f.nvars()
            )));
        }
        Ok(Variety { nvars, polys })
    }

    /// Parses the variety file format.
    pub fn parse(field: &FieldDescriptor, text: &str) -> Result<Self> {
        let mut nvars = None;
        let mut polys = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: Error| Error::VarietyFormat(format!("line {}: {e}", lineno + 1));
            match nvars {
                None => {
                    let n = line
                        .strip_prefix("nvars")
                        .map(str::trim_start)
                        .and_then(|s| s.strip_prefix('='))
                        .and_then(|s| s.trim().parse::<usize>().ok())
                        .ok_or_else(|| {
                            Error::VarietyFormat(format!(
                                "line {}: expected header `nvars=<n>`",
                                lineno + 1
                            ))
                        })?;
                    nvars = Some(n);
                }
                Some(n) => polys.push(SparsePoly::parse(field, line, n).map_err(at)?),
            }
        }
        let nvars =
            nvars.ok_or_else(|| Error::VarietyFormat("missing `nvars=<n>` header".into()))?;
        Variety::new(nvars, polys)
    }

    pub fn to_text(&self, field: &FieldDescriptor) -> String {
        let mut out = format!("nvars={}\n", self.nvars);
        for f in &self.polys {
            out.push_str(&f.to_text(field));
            out.push('\n');
        }
        out
    }
}

/// Evaluation of a polynomial on the torus `(F_q^×)^n` in discrete-log coordinates.
///
/// A point is `(g^{a_1}, ..., g^{a_n})`; term `j` then has log
/// `log c_j + Σ_i r_ij a_i (mod q - 1)`, which is updated incrementally as the
/// coordinates advance in lexicographic order.
pub(crate) struct TorusWalker<'a> {
    field: &'a FieldDescriptor,
    nvars: usize,
    m: u64,
    base_logs: Vec<u64>,
    /// `steps[i][j] = r_ij mod m`
    steps: Vec<Vec<u64>>,
}

impl<'a> TorusWalker<'a> {
    pub(crate) fn new(field: &'a FieldDescriptor, f: &SparsePoly) -> Self {
        let m = field.unit_order() as u64;
        let base_logs = f
            .terms()
            .iter()
            .map(|t| {
                field
                    .dlog(t.coeff)
                    .expect("canonical coefficients are nonzero") as u64
            })
            .collect();
        let steps = (0..f.nvars())
            .map(|i| {
                f.terms()
                    .iter()
                    .map(|t| (t.exponents[i] as i64).rem_euclid(m as i64) as u64)
                    .collect()
            })
            .collect();
        TorusWalker {
            field,
            nvars: f.nvars(),
            m,
            base_logs,
            steps,
        }
    }

    /// Number of slices handed out by [`TorusWalker::walk_slice`].
    pub(crate) fn slices(&self) -> u64 {
        if self.nvars == 0 {
            1
        } else {
            self.m
        }
    }

    /// Visits every point whose first log-coordinate is `slice`, passing the value of
    /// the polynomial there.
    pub(crate) fn walk_slice<F: FnMut(FieldElement)>(&self, slice: u64, mut visit: F) {
        let m = self.m;
        let mut logs = self.base_logs.clone();
        if self.nvars == 0 {
            visit(self.value(&logs));
            return;
        }
        for (l, &s) in logs.iter_mut().zip(&self.steps[0]) {
            *l = ((*l as u128 + slice as u128 * s as u128) % m as u128) as u64;
        }
        let inner = self.nvars - 1;
        let mut digits = vec![0u64; inner];
        loop {
            visit(self.value(&logs));
            let mut pos = inner;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                for (l, &s) in logs.iter_mut().zip(&self.steps[pos + 1]) {
                    *l += s;
                    if *l >= m {
                        *l -= m;
                    }
                }
                digits[pos] += 1;
                if digits[pos] < m {
                    break;
                }
                // m steps of r_ij mod m bring the log back to where it started
                digits[pos] = 0;
            }
        }
    }

    #[inline]
    fn value(&self, logs: &[u64]) -> FieldElement {
        let code = logs.iter().fold(0u32, |acc, &l| {
            self.field.add_codes(acc, self.field.exp(l).code())
        });
        FieldElement::from_code_unchecked(code)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldDescriptor {
        FieldDescriptor::from_order(q).unwrap()
    }

    #[test]
    fn parses_twisted_cubic_quadric() {
        let k = f(7);
        let p = SparsePoly::parse(&k, "x1*x3 - x2^2", 4).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.terms()[0].exponents, vec![1, 0, 1, 0]);
        assert_eq!(p.terms()[0].coeff, FieldElement::ONE);
        assert_eq!(p.terms()[1].exponents, vec![0, 2, 0, 0]);
        assert_eq!(p.terms()[1].coeff, k.from_int(-1));
    }

    #[test]
    fn cancellation() {
        assert!(SparsePoly::parse(&f(5), "x1 - x1", 1).unwrap().is_zero());
        assert!(SparsePoly::parse(&f(2), "x1 + x1", 1).unwrap().is_zero());
        assert!(!SparsePoly::parse(&f(3), "x1 + x1", 1).unwrap().is_zero());
    }

    #[test]
    fn parse_errors() {
        let k = f(5);
        assert!(matches!(
            SparsePoly::parse(&k, "x1 + x5", 4),
            Err(Error::VariableOutOfRange {
                index: 5,
                position: 5,
                ..
            })
        ));
        assert!(matches!(
            SparsePoly::parse(&k, "x1 +", 2),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            SparsePoly::parse(&k, "x1 x2 ^", 2),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            SparsePoly::parse(&k, "", 2),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            SparsePoly::parse(&k, "x0", 2),
            Err(Error::VariableOutOfRange { .. })
        ));
    }

    #[test]
    fn laurent_and_literals() {
        let k = f(9);
        let g = SparsePoly::parse(&k, "t1 - t1^2*t2^-2*t3", 3).unwrap();
        assert!(g.has_negative_exponents());
        let h = SparsePoly::parse(&k, "[0,1]*x1 + 7", 1).unwrap();
        assert_eq!(h.terms()[0].coeff, k.element(&[0, 1]).unwrap());
        assert_eq!(h.terms()[1].coeff, k.from_int(1));
        assert_eq!(SparsePoly::parse(&k, &h.to_text(&k), 1).unwrap(), h);
    }

    #[test]
    fn products() {
        let k = f(7);
        let f1 = SparsePoly::parse(&k, "x1*x3 - x2^2", 4).unwrap();
        let f2 = SparsePoly::parse(&k, "x2*x4 - x3^2", 4).unwrap();
        let f3 = SparsePoly::parse(&k, "x1*x4 - x2*x3", 4).unwrap();
        let p12 = f1.multiply(&k, &f2).unwrap();
        let expected =
            SparsePoly::parse(&k, "x1*x2*x3*x4 - x1*x3^3 - x2^3*x4 + x2^2*x3^2", 4).unwrap();
        assert_eq!(p12, expected);
        let p123 = p12.multiply(&k, &f3).unwrap();
        let expected = SparsePoly::parse(
            &k,
            "x1^2*x2*x3*x4^2 - x1^2*x3^3*x4 + x1*x2*x3^4 - x1*x2^3*x4^2 + x2^4*x3*x4 - x2^3*x3^3",
            4,
        )
        .unwrap();
        assert_eq!(p123, expected);
        assert!(f1.multiply(&k, &SparsePoly::zero(4)).unwrap().is_zero());
        assert!(f1.multiply(&k, &SparsePoly::zero(3)).is_err());
    }

    #[test]
    fn strata() {
        let k = f(5);
        let f1 = SparsePoly::parse(&k, "x1*x3 - x2^2", 4).unwrap();
        let r = f1.restrict_to_stratum(&[1]).unwrap();
        assert_eq!(r, SparsePoly::parse(&k, "x1*x2", 3).unwrap());
        assert!(f1.restrict_to_stratum(&[0, 1]).unwrap().is_zero());
        assert_eq!(f1.restrict_to_stratum(&[]).unwrap(), f1);
        let laurent = SparsePoly::parse(&k, "x1^-1", 1).unwrap();
        assert_eq!(
            laurent.restrict_to_stratum(&[]),
            Err(Error::NegativeExponent)
        );
    }

    #[test]
    fn exponent_matrix() {
        let k = f(5);
        let (r, c) = SparsePoly::parse(&k, "x1^2", 1)
            .unwrap()
            .exponent_data()
            .unwrap();
        assert_eq!(r, IntMatrix::from_rows(&[[2]]));
        assert_eq!(c, vec![FieldElement::ONE]);
        assert_eq!(
            SparsePoly::zero(2).exponent_data(),
            Err(Error::EmptyPolynomial)
        );
    }

    #[test]
    fn homogeneity() {
        let k = f(3);
        let f1 = SparsePoly::parse(&k, "x1*x3 - x2^2", 4).unwrap();
        assert_eq!(f1.is_homogeneous(), (true, Some(2)));
        let g = SparsePoly::parse(&k, "x1 + x1*x2", 2).unwrap();
        assert!(!g.is_homogeneous().0);
        assert_eq!(SparsePoly::zero(2).is_homogeneous(), (true, None));
    }

    #[test]
    fn variety_files() {
        let k = f(5);
        let text = "# twisted cubic\nnvars=4\nx1*x3 - x2^2  # f1\n\nx2*x4 - x3^2\n";
        let v = Variety::parse(&k, text).unwrap();
        assert_eq!(v.nvars, 4);
        assert_eq!(v.polys.len(), 2);
        assert_eq!(Variety::parse(&k, &v.to_text(&k)).unwrap(), v);
        assert!(matches!(
            Variety::parse(&k, "x1\n"),
            Err(Error::VarietyFormat(_))
        ));
        let err = Variety::parse(&k, "nvars=2\nx1 +\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn walker_agrees_with_eval() {
        let k = f(7);
        let g = SparsePoly::parse(&k, "3*x1^2*x2^-1 + x2 - 2*x1*x3^4 + 5", 3).unwrap();
        let w = TorusWalker::new(&k, &g);
        let m = k.unit_order() as u64;
        for slice in 0..w.slices() {
            let mut i = 0u64;
            w.walk_slice(slice, |value| {
                let point = [k.exp(slice), k.exp(i / m), k.exp(i % m)];
                assert_eq!(value, g.eval(&k, &point).unwrap());
                i += 1;
            });
            assert_eq!(i, m * m);
        }
    }
}
