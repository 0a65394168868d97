//! Polynomial *-algebra of coordinate functions on the quantum SU(2) group.
//!
//! Elements are finite complex-linear combinations of normal-ordered words
//! `α^a δ^d β^b γ^c` with `a·d = 0`.  The exchange relations
//!
//! ```text
//! αβ = qβα,  αγ = qγα,  βδ = qδβ,  γδ = qδγ,  βγ = γβ,
//! αδ = 1 + qβγ,         δα = 1 + q⁻¹βγ,
//! ```
//!
//! rewrite an arbitrary word into that shape, and all products here are
//! stored fully rewritten.  On top of the ring arithmetic the module carries
//! the full Hopf *-structure — comultiplication, counit, antipode and the
//! conjugation fixed by `α* = δ`, `β* = −qγ` — together with the invariant
//! state ([`AqElement::haar`]), the one-dimensional characters
//! ([`AqElement::one_dim_rep`]) and the irreducible representation by
//! weighted shift operators on ℓ²(ℤ₊) ([`AqElement::ell2_rep`]).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::qseries::{cr, QBase};

/// Relative size under which a coefficient produced by cancellation is
/// treated as arithmetic noise and removed during normalisation.
const COEFF_DROP_TOL: f64 = 1e-14;

/// Errors produced by the representation builders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AqError {
    /// The requested matrix truncation is too small to hold even one exact
    /// column of the represented element.
    #[error("truncation size {size} cannot hold a word of degree {degree}")]
    TruncationTooSmall { size: usize, degree: usize },
}

/// The four generators of the coordinate algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AqGen {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

/// A normal-ordered word `α^a δ^d β^b γ^c`.
///
/// The diagonal exponents satisfy `a·d = 0`: a word never contains both
/// `α` and `δ`, because their product reduces to `1 + qβγ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    alpha: u32,
    delta: u32,
    beta: u32,
    gamma: u32,
}

impl Monomial {
    /// The empty word.
    pub const ONE: Monomial = Monomial {
        alpha: 0,
        delta: 0,
        beta: 0,
        gamma: 0,
    };

    /// Builds a normal-ordered word; panics if both diagonal exponents are
    /// positive, which the normal form excludes.
    pub fn new(alpha: u32, delta: u32, beta: u32, gamma: u32) -> Self {
        assert!(
            alpha == 0 || delta == 0,
            "normal form excludes words containing both diagonal generators"
        );
        Monomial {
            alpha,
            delta,
            beta,
            gamma,
        }
    }

    pub fn alpha_pow(&self) -> u32 {
        self.alpha
    }

    pub fn delta_pow(&self) -> u32 {
        self.delta
    }

    pub fn beta_pow(&self) -> u32 {
        self.beta
    }

    pub fn gamma_pow(&self) -> u32 {
        self.gamma
    }

    /// Total word length.
    pub fn degree(&self) -> u32 {
        self.alpha + self.delta + self.beta + self.gamma
    }

    /// The letters of the word in normal order.
    pub fn letters(&self) -> Vec<AqGen> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        out.extend(std::iter::repeat_n(AqGen::Alpha, self.alpha as usize));
        out.extend(std::iter::repeat_n(AqGen::Delta, self.delta as usize));
        out.extend(std::iter::repeat_n(AqGen::Beta, self.beta as usize));
        out.extend(std::iter::repeat_n(AqGen::Gamma, self.gamma as usize));
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (symbol, pow) in [
            ("α", self.alpha),
            ("δ", self.delta),
            ("β", self.beta),
            ("γ", self.gamma),
        ] {
            if pow == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if pow == 1 {
                write!(f, "{symbol}")?;
            } else {
                write!(f, "{symbol}^{pow}")?;
            }
        }
        Ok(())
    }
}

fn add_term(acc: &mut BTreeMap<Monomial, f64>, m: Monomial, w: f64) {
    *acc.entry(m).or_insert(0.0) += w;
}

/// Right-multiplies the normal-ordered word `m` by one generator and
/// accumulates the rewritten expansion into `acc` with weight `w`.
fn push_letter(m: Monomial, g: AqGen, q: f64, w: f64, acc: &mut BTreeMap<Monomial, f64>) {
    let Monomial {
        alpha: a,
        delta: d,
        beta: b,
        gamma: c,
    } = m;
    match g {
        AqGen::Beta => add_term(acc, Monomial::new(a, d, b + 1, c), w),
        AqGen::Gamma => add_term(acc, Monomial::new(a, d, b, c + 1), w),
        AqGen::Alpha => {
            // Moving α left past β^b γ^c costs q^{-(b+c)}; absorbing it into
            // a trailing δ uses δα = 1 + q⁻¹βγ.
            let scale = w * q.powi(-((b + c) as i32));
            if d == 0 {
                add_term(acc, Monomial::new(a + 1, 0, b, c), scale);
            } else {
                add_term(acc, Monomial::new(0, d - 1, b, c), scale);
                add_term(acc, Monomial::new(0, d - 1, b + 1, c + 1), scale / q);
            }
        }
        AqGen::Delta => {
            // Moving δ left past β^b γ^c costs q^{b+c}; absorbing it into a
            // trailing α uses αδ = 1 + qβγ.
            let scale = w * q.powi((b + c) as i32);
            if a == 0 {
                add_term(acc, Monomial::new(0, d + 1, b, c), scale);
            } else {
                add_term(acc, Monomial::new(a - 1, 0, b, c), scale);
                add_term(acc, Monomial::new(a - 1, 0, b + 1, c + 1), scale * q);
            }
        }
    }
}

/// Normal-ordered expansion of the product of two words; the weights are
/// real because the exchange relations only introduce powers of `q`.
fn word_product(q: f64, lhs: Monomial, rhs: Monomial) -> BTreeMap<Monomial, f64> {
    let mut cur = BTreeMap::from([(lhs, 1.0)]);
    for g in rhs.letters() {
        let mut next = BTreeMap::new();
        for (&m, &w) in &cur {
            push_letter(m, g, q, w, &mut next);
        }
        cur = next;
    }
    cur
}

/// An element of the coordinate algebra at a fixed deformation parameter.
#[derive(Debug, Clone)]
pub struct AqElement {
    q: QBase,
    terms: BTreeMap<Monomial, Complex64>,
}

fn check_same_base(lhs: QBase, rhs: QBase) {
    assert!(
        lhs == rhs,
        "operands live over different deformation parameters"
    );
}

impl AqElement {
    /// The zero element.
    pub fn zero(q: QBase) -> Self {
        AqElement {
            q,
            terms: BTreeMap::new(),
        }
    }

    /// The multiplicative unit.
    pub fn one(q: QBase) -> Self {
        Self::scalar(q, cr(1.0))
    }

    /// A complex multiple of the unit.
    pub fn scalar(q: QBase, c: Complex64) -> Self {
        Self::monomial(q, Monomial::ONE, c)
    }

    /// A single scaled word.
    pub fn monomial(q: QBase, m: Monomial, c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        if c.norm() > 0.0 {
            terms.insert(m, c);
        }
        AqElement { q, terms }
    }

    /// One generator as an element.
    pub fn generator(q: QBase, g: AqGen) -> Self {
        let m = match g {
            AqGen::Alpha => Monomial::new(1, 0, 0, 0),
            AqGen::Delta => Monomial::new(0, 1, 0, 0),
            AqGen::Beta => Monomial::new(0, 0, 1, 0),
            AqGen::Gamma => Monomial::new(0, 0, 0, 1),
        };
        Self::monomial(q, m, cr(1.0))
    }

    pub fn alpha(q: QBase) -> Self {
        Self::generator(q, AqGen::Alpha)
    }

    pub fn beta(q: QBase) -> Self {
        Self::generator(q, AqGen::Beta)
    }

    pub fn gamma(q: QBase) -> Self {
        Self::generator(q, AqGen::Gamma)
    }

    pub fn delta(q: QBase) -> Self {
        Self::generator(q, AqGen::Delta)
    }

    /// Builds an element from `(word, coefficient)` pairs, merging repeats.
    pub fn from_terms(q: QBase, terms: impl IntoIterator<Item = (Monomial, Complex64)>) -> Self {
        let mut out = AqElement::zero(q);
        for (m, c) in terms {
            *out.terms.entry(m).or_insert(cr(0.0)) += c;
        }
        out.normalize();
        out
    }

    /// Multiplies out a free word of generators (no ordering assumed) into
    /// its normal form, scaled by `c`.
    pub fn from_letter_word(q: QBase, letters: &[AqGen], c: Complex64) -> Self {
        let qv = q.value();
        let mut cur = BTreeMap::from([(Monomial::ONE, 1.0)]);
        for &g in letters {
            let mut next = BTreeMap::new();
            for (&m, &w) in &cur {
                push_letter(m, g, qv, w, &mut next);
            }
            cur = next;
        }
        Self::from_terms(q, cur.into_iter().map(|(m, w)| (m, c * w)))
    }

    pub fn q(&self) -> QBase {
        self.q
    }

    /// Iterates over the stored `(word, coefficient)` pairs in word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    /// Number of stored words.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of one word (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_else(|| cr(0.0))
    }

    /// Largest word length appearing in the element.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest coefficient magnitude.
    pub fn norm_inf(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference against `other`.
    pub fn max_abs_diff(&self, other: &AqElement) -> f64 {
        check_same_base(self.q, other.q);
        let mut worst = 0.0f64;
        for m in self.terms.keys().chain(other.terms.keys()) {
            worst = worst.max((self.coeff(m) - other.coeff(m)).norm());
        }
        worst
    }

    /// True when every coefficient is at most `tol` in magnitude.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm_inf() <= tol
    }

    /// Drops coefficients that are negligibly small next to the largest one.
    fn normalize(&mut self) {
        let max = self.norm_inf();
        if max == 0.0 {
            self.terms.clear();
            return;
        }
        self.terms.retain(|_, c| c.norm() > COEFF_DROP_TOL * max);
    }

    /// Rescales by a complex factor.
    pub fn scale(&self, c: Complex64) -> AqElement {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out.normalize();
        out
    }

    fn add_impl(&self, other: &AqElement, sign: f64) -> AqElement {
        check_same_base(self.q, other.q);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            *out.terms.entry(*m).or_insert(cr(0.0)) += c * sign;
        }
        out.normalize();
        out
    }

    fn mul_impl(&self, other: &AqElement) -> AqElement {
        check_same_base(self.q, other.q);
        let qv = self.q.value();
        let mut acc: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (&m1, &c1) in &self.terms {
            for (&m2, &c2) in &other.terms {
                for (m, w) in word_product(qv, m1, m2) {
                    *acc.entry(m).or_insert(cr(0.0)) += c1 * c2 * w;
                }
            }
        }
        let mut out = AqElement { q: self.q, terms: acc };
        out.normalize();
        out
    }

    /// Non-negative integer power.
    pub fn pow(&self, k: u32) -> AqElement {
        let mut out = AqElement::one(self.q);
        for _ in 0..k {
            out = out.mul_impl(self);
        }
        out
    }

    /// Comultiplication: the algebra map sending
    /// `α ↦ α⊗α + β⊗γ`, `β ↦ α⊗β + β⊗δ`, `γ ↦ γ⊗α + δ⊗γ`,
    /// `δ ↦ γ⊗β + δ⊗δ`.
    pub fn comultiply(&self) -> TensorElement {
        let mut acc = TensorElement::zero(self.q);
        for (m, c) in &self.terms {
            let mut t = TensorElement::unit(self.q);
            for g in m.letters() {
                t = t.mul(&generator_coproduct(self.q, g));
            }
            acc.add_scaled(&t, *c);
        }
        acc.normalize();
        acc
    }

    /// Counit: the character sending `α, δ ↦ 1` and `β, γ ↦ 0`.
    pub fn counit(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|(m, _)| m.beta == 0 && m.gamma == 0)
            .map(|(_, c)| *c)
            .sum()
    }

    /// Antipode: the anti-automorphism with
    /// `S(α) = δ`, `S(β) = −q⁻¹β`, `S(γ) = −qγ`, `S(δ) = α`.
    pub fn antipode(&self) -> AqElement {
        let qv = self.q.value();
        let mut out = AqElement::zero(self.q);
        for (m, c) in &self.terms {
            // S reverses the word, so the image is the normal ordering of
            // γ^c β^b α^d δ^a with the generator signs pulled out front.
            let sign = if (m.beta + m.gamma) % 2 == 0 { 1.0 } else { -1.0 };
            let factor = sign * qv.powi(m.gamma as i32 - m.beta as i32);
            let mut letters = Vec::with_capacity(m.degree() as usize);
            letters.extend(std::iter::repeat_n(AqGen::Gamma, m.gamma as usize));
            letters.extend(std::iter::repeat_n(AqGen::Beta, m.beta as usize));
            letters.extend(std::iter::repeat_n(AqGen::Alpha, m.delta as usize));
            letters.extend(std::iter::repeat_n(AqGen::Delta, m.alpha as usize));
            out = out.add_impl(
                &AqElement::from_letter_word(self.q, &letters, c * factor),
                1.0,
            );
        }
        out.normalize();
        out
    }

    /// Conjugation: the anti-linear anti-automorphism with
    /// `α* = δ`, `β* = −qγ`, `γ* = −q⁻¹β`, `δ* = α`.
    pub fn star(&self) -> AqElement {
        let qv = self.q.value();
        let mut out = AqElement::zero(self.q);
        for (m, c) in &self.terms {
            let sign = if (m.beta + m.gamma) % 2 == 0 { 1.0 } else { -1.0 };
            let factor = sign * qv.powi(m.beta as i32 - m.gamma as i32);
            let mut letters = Vec::with_capacity(m.degree() as usize);
            letters.extend(std::iter::repeat_n(AqGen::Beta, m.gamma as usize));
            letters.extend(std::iter::repeat_n(AqGen::Gamma, m.beta as usize));
            letters.extend(std::iter::repeat_n(AqGen::Alpha, m.delta as usize));
            letters.extend(std::iter::repeat_n(AqGen::Delta, m.alpha as usize));
            out = out.add_impl(
                &AqElement::from_letter_word(self.q, &letters, c.conj() * factor),
                1.0,
            );
        }
        out.normalize();
        out
    }

    /// The algebra automorphism that swaps `β ↔ γ` and fixes `α`, `δ`.
    /// The defining relations are symmetric under this swap, so exchanging
    /// the two off-diagonal exponents of each normal-ordered word realizes
    /// it with no reordering cost.
    pub fn transpose(&self) -> AqElement {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let swapped = Monomial {
                alpha: m.alpha,
                delta: m.delta,
                beta: m.gamma,
                gamma: m.beta,
            };
            terms.insert(swapped, *c);
        }
        AqElement { q: self.q, terms }
    }

    /// The anti-linear map conjugating every coefficient while fixing the
    /// generators (composition partner of [`AqElement::transpose`] in the
    /// symmetry relations between matrix elements).
    pub fn conj_coeffs(&self) -> AqElement {
        let terms = self.terms.iter().map(|(m, c)| (*m, c.conj())).collect();
        AqElement { q: self.q, terms }
    }

    /// The unique invariant state: it kills every word except the powers
    /// `(βγ)^k`, which it sends to `(−q)^k (1−q²)/(1−q^{2k+2})`.
    pub fn haar(&self) -> Complex64 {
        let qv = self.q.value();
        let mut out = cr(0.0);
        for (m, c) in &self.terms {
            if m.alpha == 0 && m.delta == 0 && m.beta == m.gamma {
                let k = m.beta as i32;
                let weight =
                    (-qv).powi(k) * (1.0 - qv * qv) / (1.0 - qv.powi(2 * k + 2));
                out += c * weight;
            }
        }
        out
    }

    /// The one-dimensional representation sending `α ↦ λ`, `δ ↦ λ⁻¹` and
    /// `β, γ ↦ 0`; it is a *-representation exactly when `|λ| = 1`.
    pub fn one_dim_rep(&self, lambda: Complex64) -> Complex64 {
        assert!(lambda.norm() > 0.0, "the character parameter must be nonzero");
        let mut out = cr(0.0);
        for (m, c) in &self.terms {
            if m.beta == 0 && m.gamma == 0 {
                out += c * lambda.powi(m.alpha as i32 - m.delta as i32);
            }
        }
        out
    }

    /// Truncation of the irreducible *-representation on ℓ²(ℤ₊) in which
    /// `α` lowers the basis index with weight `√(1−q^{2n})`, `δ` raises it
    /// with weight `√(1−q^{2n+2})`, and `γ`, `β` act diagonally as
    /// `e^{iθ}qⁿ` and `−q^{n+1}e^{−iθ}`.
    ///
    /// Entry `(i, j)` of the result agrees with the untruncated operator
    /// whenever `i` or `j` is smaller than `size − degree`.
    pub fn ell2_rep(&self, theta: f64, size: usize) -> Result<DMatrix<Complex64>, AqError> {
        let degree = self.degree() as usize;
        if size < degree + 1 {
            return Err(AqError::TruncationTooSmall { size, degree });
        }
        let qv = self.q.value();
        let phase = Complex64::from_polar(1.0, theta);
        let gen = |g: AqGen| -> DMatrix<Complex64> {
            let mut m = DMatrix::from_element(size, size, cr(0.0));
            match g {
                AqGen::Alpha => {
                    for n in 1..size {
                        m[(n - 1, n)] = cr((1.0 - qv.powi(2 * n as i32)).sqrt());
                    }
                }
                AqGen::Delta => {
                    for n in 0..size - 1 {
                        m[(n + 1, n)] = cr((1.0 - qv.powi(2 * n as i32 + 2)).sqrt());
                    }
                }
                AqGen::Gamma => {
                    for n in 0..size {
                        m[(n, n)] = phase * qv.powi(n as i32);
                    }
                }
                AqGen::Beta => {
                    for n in 0..size {
                        m[(n, n)] = -qv.powi(n as i32 + 1) * phase.conj();
                    }
                }
            }
            m
        };
        let mats = [
            gen(AqGen::Alpha),
            gen(AqGen::Delta),
            gen(AqGen::Beta),
            gen(AqGen::Gamma),
        ];
        let mut acc = DMatrix::from_element(size, size, cr(0.0));
        for (m, c) in &self.terms {
            let mut w = DMatrix::identity(size, size);
            for g in m.letters() {
                let idx = match g {
                    AqGen::Alpha => 0,
                    AqGen::Delta => 1,
                    AqGen::Beta => 2,
                    AqGen::Gamma => 3,
                };
                w *= &mats[idx];
            }
            acc += w * *c;
        }
        Ok(acc)
    }
}

impl fmt::Display for AqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.degree() == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c}) {m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &AqElement {
    type Output = AqElement;
    fn add(self, rhs: &AqElement) -> AqElement {
        self.add_impl(rhs, 1.0)
    }
}

impl Sub for &AqElement {
    type Output = AqElement;
    fn sub(self, rhs: &AqElement) -> AqElement {
        self.add_impl(rhs, -1.0)
    }
}

impl Mul for &AqElement {
    type Output = AqElement;
    fn mul(self, rhs: &AqElement) -> AqElement {
        self.mul_impl(rhs)
    }
}

impl Mul<Complex64> for &AqElement {
    type Output = AqElement;
    fn mul(self, rhs: Complex64) -> AqElement {
        self.scale(rhs)
    }
}

impl Mul<f64> for &AqElement {
    type Output = AqElement;
    fn mul(self, rhs: f64) -> AqElement {
        self.scale(cr(rhs))
    }
}

impl Neg for &AqElement {
    type Output = AqElement;
    fn neg(self) -> AqElement {
        self.scale(cr(-1.0))
    }
}

impl Add for AqElement {
    type Output = AqElement;
    fn add(self, rhs: AqElement) -> AqElement {
        (&self).add_impl(&rhs, 1.0)
    }
}

impl Sub for AqElement {
    type Output = AqElement;
    fn sub(self, rhs: AqElement) -> AqElement {
        (&self).add_impl(&rhs, -1.0)
    }
}

impl Mul for AqElement {
    type Output = AqElement;
    fn mul(self, rhs: AqElement) -> AqElement {
        (&self).mul_impl(&rhs)
    }
}

/// The coproduct of a single generator as a two-leg tensor.
fn generator_coproduct(q: QBase, g: AqGen) -> TensorElement {
    let a = Monomial::new(1, 0, 0, 0);
    let b = Monomial::new(0, 0, 1, 0);
    let c = Monomial::new(0, 0, 0, 1);
    let d = Monomial::new(0, 1, 0, 0);
    let pairs: [(Monomial, Monomial); 2] = match g {
        AqGen::Alpha => [(a, a), (b, c)],
        AqGen::Beta => [(a, b), (b, d)],
        AqGen::Gamma => [(c, a), (d, c)],
        AqGen::Delta => [(c, b), (d, d)],
    };
    let mut terms = BTreeMap::new();
    for (l, r) in pairs {
        terms.insert((l, r), cr(1.0));
    }
    TensorElement { q, terms }
}

/// An element of the two-fold tensor square of the coordinate algebra,
/// stored on the basis of pairs of normal-ordered words.
#[derive(Debug, Clone)]
pub struct TensorElement {
    q: QBase,
    terms: BTreeMap<(Monomial, Monomial), Complex64>,
}

impl TensorElement {
    pub fn zero(q: QBase) -> Self {
        TensorElement {
            q,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `1 ⊗ 1`.
    pub fn unit(q: QBase) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((Monomial::ONE, Monomial::ONE), cr(1.0));
        TensorElement { q, terms }
    }

    /// The simple tensor `x ⊗ y`.
    pub fn tensor(x: &AqElement, y: &AqElement) -> Self {
        check_same_base(x.q, y.q);
        let mut terms = BTreeMap::new();
        for (&mx, &cx_) in &x.terms {
            for (&my, &cy) in &y.terms {
                *terms.entry((mx, my)).or_insert(cr(0.0)) += cx_ * cy;
            }
        }
        let mut out = TensorElement { q: x.q, terms };
        out.normalize();
        out
    }

    pub fn q(&self) -> QBase {
        self.q
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &Complex64)> {
        self.terms.iter()
    }

    pub fn norm_inf(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn coeff(&self, key: &(Monomial, Monomial)) -> Complex64 {
        self.terms.get(key).copied().unwrap_or_else(|| cr(0.0))
    }

    pub fn max_abs_diff(&self, other: &TensorElement) -> f64 {
        check_same_base(self.q, other.q);
        let mut worst = 0.0f64;
        for key in self.terms.keys().chain(other.terms.keys()) {
            worst = worst.max((self.coeff(key) - other.coeff(key)).norm());
        }
        worst
    }

    /// Adds `s · other` in place.
    pub fn add_scaled(&mut self, other: &TensorElement, s: Complex64) {
        check_same_base(self.q, other.q);
        for (key, c) in &other.terms {
            *self.terms.entry(*key).or_insert(cr(0.0)) += c * s;
        }
    }

    /// Leg-wise product: `(x₁⊗y₁)(x₂⊗y₂) = x₁x₂ ⊗ y₁y₂`.
    pub fn mul(&self, other: &TensorElement) -> TensorElement {
        check_same_base(self.q, other.q);
        let qv = self.q.value();
        let mut acc: BTreeMap<(Monomial, Monomial), Complex64> = BTreeMap::new();
        for (&(l1, r1), &c1) in &self.terms {
            for (&(l2, r2), &c2) in &other.terms {
                let left = word_product(qv, l1, l2);
                let right = word_product(qv, r1, r2);
                for (&lm, &lw) in &left {
                    for (&rm, &rw) in &right {
                        *acc.entry((lm, rm)).or_insert(cr(0.0)) += c1 * c2 * lw * rw;
                    }
                }
            }
        }
        let mut out = TensorElement { q: self.q, terms: acc };
        out.normalize();
        out
    }

    /// Swaps the two legs.
    pub fn flip(&self) -> TensorElement {
        let mut terms = BTreeMap::new();
        for (&(l, r), &c) in &self.terms {
            *terms.entry((r, l)).or_insert(cr(0.0)) += c;
        }
        TensorElement { q: self.q, terms }
    }

    /// Applies a linear map to both legs independently.
    pub fn map_legs(&self, f: impl Fn(&AqElement) -> AqElement) -> TensorElement {
        let mut acc = TensorElement::zero(self.q);
        for (&(l, r), &c) in &self.terms {
            let fl = f(&AqElement::monomial(self.q, l, cr(1.0)));
            let fr = f(&AqElement::monomial(self.q, r, cr(1.0)));
            let mut t = TensorElement::tensor(&fl, &fr);
            t.scale_in_place(c);
            acc.add_scaled(&t, cr(1.0));
        }
        acc.normalize();
        acc
    }

    fn scale_in_place(&mut self, c: Complex64) {
        for v in self.terms.values_mut() {
            *v *= c;
        }
    }

    /// Leg-wise conjugation: the anti-linear map sending `c·(x⊗y)` to
    /// `conj(c)·(x* ⊗ y*)`.
    pub fn star_legs(&self) -> TensorElement {
        let mut acc = TensorElement::zero(self.q);
        for (&(l, r), &c) in &self.terms {
            let fl = AqElement::monomial(self.q, l, cr(1.0)).star();
            let fr = AqElement::monomial(self.q, r, cr(1.0)).star();
            let mut t = TensorElement::tensor(&fl, &fr);
            t.scale_in_place(c.conj());
            acc.add_scaled(&t, cr(1.0));
        }
        acc.normalize();
        acc
    }

    /// Applies a linear functional to the left leg, leaving a one-leg
    /// element behind.
    pub fn contract_left(&self, f: impl Fn(&AqElement) -> Complex64) -> AqElement {
        let mut out = AqElement::zero(self.q);
        for (&(l, r), &c) in &self.terms {
            let w = f(&AqElement::monomial(self.q, l, cr(1.0)));
            *out.terms.entry(r).or_insert(cr(0.0)) += c * w;
        }
        out.normalize();
        out
    }

    /// Applies a linear functional to the right leg.
    pub fn contract_right(&self, f: impl Fn(&AqElement) -> Complex64) -> AqElement {
        let mut out = AqElement::zero(self.q);
        for (&(l, r), &c) in &self.terms {
            let w = f(&AqElement::monomial(self.q, r, cr(1.0)));
            *out.terms.entry(l).or_insert(cr(0.0)) += c * w;
        }
        out.normalize();
        out
    }

    /// Multiplies the two legs together inside the algebra.
    pub fn multiply_legs(&self) -> AqElement {
        let qv = self.q.value();
        let mut acc: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (&(l, r), &c) in &self.terms {
            for (m, w) in word_product(qv, l, r) {
                *acc.entry(m).or_insert(cr(0.0)) += c * w;
            }
        }
        let mut out = AqElement { q: self.q, terms: acc };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        let max = self.norm_inf();
        if max == 0.0 {
            self.terms.clear();
            return;
        }
        self.terms.retain(|_, c| c.norm() > COEFF_DROP_TOL * max);
    }
}
