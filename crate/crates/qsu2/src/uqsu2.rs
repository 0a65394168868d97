//! The quantized universal enveloping algebra of su(2) and its interplay
//! with the coordinate algebra.
//!
//! The algebra is generated by `A, B, C, D` subject to
//!
//! ```text
//! AD = 1 = DA,  AB = qBA,  AC = q⁻¹CA,
//! BC − CB = (A² − D²)/(q − q⁻¹),
//! ```
//!
//! with `Δ(A) = A⊗A`, `Δ(B) = A⊗B + B⊗D` (and symmetrically for `C`),
//! `A* = A`, `B* = C`.  The module provides, all at a fixed base:
//!
//! * the irreducible spin-`l` *-representation matrices ([`rep_gen`],
//!   [`rep_word`]) and the Casimir element ([`casimir_matrix`],
//!   [`casimir_scalar`]);
//! * the twisted-primitive family `X_σ = iq^{1/2}B − iq^{-1/2}C −
//!   (q^σ−q^{−σ})/(q−q^{−1})·(A−D)` with its limits `±∞ ↦ D − A`
//!   ([`x_sigma_matrix`]);
//! * the left and right actions of generator words on coordinate-algebra
//!   elements and the induced duality pairing ([`act_gen_left`],
//!   [`act_word_left`], [`act_gen_right`], [`act_word_right`],
//!   [`pairing_word`]);
//! * tensor-product representations built through the coproduct
//!   ([`tensor_rep_gen`], [`tensor_rep_word`], [`tensor_casimir`],
//!   [`tensor_x_sigma_a`]) for decomposing products of irreducibles.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::aqsu2::{AqElement, AqGen};
use crate::qseries::{cr, cx, QBase};

/// A spin label stored as twice its value, so half-integers stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    /// Builds the label `twice/2`.
    pub fn from_twice(twice: u32) -> Spin {
        Spin { twice }
    }

    /// Builds an integer spin.
    pub fn integer(l: u32) -> Spin {
        Spin { twice: 2 * l }
    }

    pub fn twice(&self) -> u32 {
        self.twice
    }

    /// The spin as a floating-point number.
    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Dimension of the irreducible representation with this label.
    pub fn dim(&self) -> usize {
        self.twice as usize + 1
    }

    /// The weight `n` carried by basis index `i`, running from `−l` at
    /// index 0 up to `+l`.
    pub fn weight(&self, index: usize) -> f64 {
        index as f64 - self.value()
    }

    /// All weights in index order.
    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim()).map(|i| self.weight(i))
    }

    /// The basis index carrying weight `twice_n/2`, if it lies in range.
    pub fn index_of_twice_weight(&self, twice_n: i32) -> Option<usize> {
        let shifted = twice_n + self.twice as i32;
        if shifted < 0 || shifted % 2 != 0 {
            return None;
        }
        let idx = (shifted / 2) as usize;
        (idx < self.dim()).then_some(idx)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// The labels `l1 ⊗ l2` decomposes into: `|l1−l2|, |l1−l2|+1, …, l1+l2`.
pub fn tensor_decomposition_range(l1: Spin, l2: Spin) -> Vec<Spin> {
    let lo = l1.twice.abs_diff(l2.twice);
    let hi = l1.twice + l2.twice;
    (lo..=hi)
        .step_by(2)
        .map(Spin::from_twice)
        .collect()
}

/// The four generators of the enveloping algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    A,
    B,
    C,
    D,
}

/// A real parameter extended by the two infinite limit points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedParameter {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
}

impl ExtendedParameter {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedParameter::Finite(_))
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtendedParameter::Finite(v) => Some(*v),
            _ => None,
        }
    }

    /// Negates the parameter, swapping the two infinities.
    pub fn negate(&self) -> ExtendedParameter {
        match self {
            ExtendedParameter::Finite(v) => ExtendedParameter::Finite(-v),
            ExtendedParameter::PlusInfinity => ExtendedParameter::MinusInfinity,
            ExtendedParameter::MinusInfinity => ExtendedParameter::PlusInfinity,
        }
    }
}

impl fmt::Display for ExtendedParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedParameter::Finite(v) => write!(f, "{v}"),
            ExtendedParameter::PlusInfinity => write!(f, "inf"),
            ExtendedParameter::MinusInfinity => write!(f, "-inf"),
        }
    }
}

impl FromStr for ExtendedParameter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "infinity" => Ok(ExtendedParameter::PlusInfinity),
            "-inf" | "-infinity" => Ok(ExtendedParameter::MinusInfinity),
            other => other
                .parse::<f64>()
                .map(ExtendedParameter::Finite)
                .map_err(|e| format!("not a real number or ±inf: {e}")),
        }
    }
}

/// The spin-`l` representation matrix of one generator, on the weight
/// basis `e_{−l}, …, e_{+l}`:
///
/// * `A` and `D` act diagonally as `q^{−n}` and `q^{n}`;
/// * `B` lowers the weight, `B e_n = b(n) e_{n−1}` with
///   `b(n) = √((q^{−l+n−1}−q^{l−n+1})(q^{−l−n}−q^{l+n}))/(q^{−1}−q)`;
/// * `C` raises it, `C e_n = c(n) e_{n+1}` with
///   `c(n) = √((q^{−l+n}−q^{l−n})(q^{−l−n−1}−q^{l+n+1}))/(q^{−1}−q)`.
pub fn rep_gen(l: Spin, g: Gen, q: QBase) -> DMatrix<Complex64> {
    let qv = q.value();
    let dim = l.dim();
    let lv = l.value();
    let denom = 1.0 / qv - qv;
    let mut m = DMatrix::from_element(dim, dim, cr(0.0));
    match g {
        Gen::A => {
            for i in 0..dim {
                m[(i, i)] = cr(qv.powf(-l.weight(i)));
            }
        }
        Gen::D => {
            for i in 0..dim {
                m[(i, i)] = cr(qv.powf(l.weight(i)));
            }
        }
        Gen::B => {
            for i in 1..dim {
                let n = l.weight(i);
                let f1 = qv.powf(-lv + n - 1.0) - qv.powf(lv - n + 1.0);
                let f2 = qv.powf(-lv - n) - qv.powf(lv + n);
                m[(i - 1, i)] = cr((f1 * f2).max(0.0).sqrt() / denom);
            }
        }
        Gen::C => {
            for i in 0..dim.saturating_sub(1) {
                let n = l.weight(i);
                let f1 = qv.powf(-lv + n) - qv.powf(lv - n);
                let f2 = qv.powf(-lv - n - 1.0) - qv.powf(lv + n + 1.0);
                m[(i + 1, i)] = cr((f1 * f2).max(0.0).sqrt() / denom);
            }
        }
    }
    m
}

/// The spin-`l` matrix of a product of generators.
pub fn rep_word(l: Spin, word: &[Gen], q: QBase) -> DMatrix<Complex64> {
    let mut out = DMatrix::identity(l.dim(), l.dim());
    for &g in word {
        out *= rep_gen(l, g, q);
    }
    out
}

/// The Casimir matrix `(q⁻¹A² + qD² − 2)/(q⁻¹−q)² + BC` at spin `l`.
pub fn casimir_matrix(l: Spin, q: QBase) -> DMatrix<Complex64> {
    let qv = q.value();
    let dim = l.dim();
    let a = rep_gen(l, Gen::A, q);
    let d = rep_gen(l, Gen::D, q);
    let b = rep_gen(l, Gen::B, q);
    let c = rep_gen(l, Gen::C, q);
    let denom = (1.0 / qv - qv).powi(2);
    let quad = (&a * &a * cr(1.0 / qv) + &d * &d * cr(qv)
        - DMatrix::identity(dim, dim) * cr(2.0))
        / cr(denom);
    quad + b * c
}

/// The scalar by which the Casimir acts at spin `l`:
/// `q^{1−2l}(1−q^{2l+1})²/(1−q²)²`.
pub fn casimir_scalar(l: Spin, q: QBase) -> f64 {
    let qv = q.value();
    let t = l.twice as i32;
    qv.powi(1 - t) * (1.0 - qv.powi(t + 1)).powi(2) / (1.0 - qv * qv).powi(2)
}

/// Coefficient of `−(A−D)` inside the twisted-primitive element:
/// `(q^σ − q^{−σ})/(q − q^{−1})`.
fn twist_coefficient(sigma: f64, q: QBase) -> f64 {
    let qv = q.value();
    (qv.powf(sigma) - qv.powf(-sigma)) / (qv - 1.0 / qv)
}

/// The spin-`l` matrix of the twisted-primitive element
/// `X_σ = iq^{1/2}B − iq^{−1/2}C − (q^σ−q^{−σ})/(q−q^{−1})(A−D)`,
/// with both infinite limits giving `D − A`.
pub fn x_sigma_matrix(l: Spin, sigma: ExtendedParameter, q: QBase) -> DMatrix<Complex64> {
    let qv = q.value();
    let a = rep_gen(l, Gen::A, q);
    let d = rep_gen(l, Gen::D, q);
    match sigma {
        ExtendedParameter::Finite(s) => {
            let b = rep_gen(l, Gen::B, q);
            let c = rep_gen(l, Gen::C, q);
            b * cx(0.0, qv.sqrt()) + c * cx(0.0, -1.0 / qv.sqrt())
                + (a - d) * cr(-twist_coefficient(s, q))
        }
        _ => d - a,
    }
}

/// Weight-basis half-exponent each letter picks up under the left action
/// of `A` (and, negated, of `D`).
fn left_diag_exponent(g: AqGen) -> f64 {
    match g {
        AqGen::Alpha | AqGen::Gamma => 0.5,
        AqGen::Beta | AqGen::Delta => -0.5,
    }
}

/// Letter substitution performed by the left action of `B`.
fn left_b_sub(g: AqGen) -> Option<AqGen> {
    match g {
        AqGen::Beta => Some(AqGen::Alpha),
        AqGen::Delta => Some(AqGen::Gamma),
        _ => None,
    }
}

/// Letter substitution performed by the left action of `C`.
fn left_c_sub(g: AqGen) -> Option<AqGen> {
    match g {
        AqGen::Alpha => Some(AqGen::Beta),
        AqGen::Gamma => Some(AqGen::Delta),
        _ => None,
    }
}

/// Half-exponent each letter picks up under the right action of `A`.
fn right_diag_exponent(g: AqGen) -> f64 {
    match g {
        AqGen::Alpha | AqGen::Beta => 0.5,
        AqGen::Gamma | AqGen::Delta => -0.5,
    }
}

/// Letter substitution performed by the right action of `B`.
fn right_b_sub(g: AqGen) -> Option<AqGen> {
    match g {
        AqGen::Alpha => Some(AqGen::Gamma),
        AqGen::Beta => Some(AqGen::Delta),
        _ => None,
    }
}

/// Letter substitution performed by the right action of `C`.
fn right_c_sub(g: AqGen) -> Option<AqGen> {
    match g {
        AqGen::Gamma => Some(AqGen::Alpha),
        AqGen::Delta => Some(AqGen::Beta),
        _ => None,
    }
}

/// Shared skeleton for the off-diagonal actions: substitute one letter,
/// scaling the prefix by the `A`-weights and the suffix by the `D`-weights.
fn act_substitution(
    q: QBase,
    xi: &AqElement,
    diag: fn(AqGen) -> f64,
    sub: fn(AqGen) -> Option<AqGen>,
) -> AqElement {
    let qv = q.value();
    let mut out = AqElement::zero(q);
    for (m, c) in xi.terms() {
        let letters = m.letters();
        // Exponent of the full A-weighted prefix, updated as the
        // substitution point sweeps left to right.
        let total: f64 = letters.iter().map(|&g| diag(g)).sum();
        let mut prefix = 0.0;
        for (j, &g) in letters.iter().enumerate() {
            if let Some(replacement) = sub(g) {
                // Prefix letters keep their A-weight, suffix letters flip
                // to the D-weight (the negated exponent).
                let exponent = prefix - (total - prefix - diag(g));
                let mut word = letters.clone();
                word[j] = replacement;
                let piece = AqElement::from_letter_word(q, &word, c * qv.powf(exponent));
                out = &out + &piece;
            }
            prefix += diag(g);
        }
    }
    out
}

/// Diagonal action shared by `A` and `D` on both sides.
fn act_diagonal(q: QBase, xi: &AqElement, diag: fn(AqGen) -> f64, sign: f64) -> AqElement {
    let qv = q.value();
    AqElement::from_terms(
        q,
        xi.terms().map(|(m, c)| {
            let exponent: f64 = m.letters().iter().map(|&g| diag(g)).sum();
            (*m, c * qv.powf(sign * exponent))
        }),
    )
}

/// Left action of one generator on a coordinate-algebra element.  On the
/// generators it reads off the right index of the defining representation:
/// `A` rescales letters by `q^{±1/2}`, `B` maps `β ↦ α, δ ↦ γ`, `C` maps
/// `α ↦ β, γ ↦ δ`, and it extends to words through the coproduct.
pub fn act_gen_left(q: QBase, g: Gen, xi: &AqElement) -> AqElement {
    match g {
        Gen::A => act_diagonal(q, xi, left_diag_exponent, 1.0),
        Gen::D => act_diagonal(q, xi, left_diag_exponent, -1.0),
        Gen::B => act_substitution(q, xi, left_diag_exponent, left_b_sub),
        Gen::C => act_substitution(q, xi, left_diag_exponent, left_c_sub),
    }
}

/// Right action of one generator, reading off the left index of the
/// defining representation: `B` maps `α ↦ γ, β ↦ δ` and `C` maps
/// `γ ↦ α, δ ↦ β`.
pub fn act_gen_right(q: QBase, g: Gen, xi: &AqElement) -> AqElement {
    match g {
        Gen::A => act_diagonal(q, xi, right_diag_exponent, 1.0),
        Gen::D => act_diagonal(q, xi, right_diag_exponent, -1.0),
        Gen::B => act_substitution(q, xi, right_diag_exponent, right_b_sub),
        Gen::C => act_substitution(q, xi, right_diag_exponent, right_c_sub),
    }
}

/// Left action of a product of generators: `(XY)·ξ = X·(Y·ξ)`.
pub fn act_word_left(q: QBase, word: &[Gen], xi: &AqElement) -> AqElement {
    let mut out = xi.clone();
    for &g in word.iter().rev() {
        out = act_gen_left(q, g, &out);
    }
    out
}

/// Right action of a product of generators: `ξ·(XY) = (ξ·X)·Y`.
pub fn act_word_right(q: QBase, word: &[Gen], xi: &AqElement) -> AqElement {
    let mut out = xi.clone();
    for &g in word {
        out = act_gen_right(q, g, &out);
    }
    out
}

/// Left action of the twisted-primitive element `X_σ` (infinite values act
/// as `D − A`).
pub fn x_sigma_act_left(q: QBase, sigma: ExtendedParameter, xi: &AqElement) -> AqElement {
    let qv = q.value();
    match sigma {
        ExtendedParameter::Finite(s) => {
            let b = act_gen_left(q, Gen::B, xi).scale(cx(0.0, qv.sqrt()));
            let c = act_gen_left(q, Gen::C, xi).scale(cx(0.0, -1.0 / qv.sqrt()));
            let ad = &act_gen_left(q, Gen::A, xi) - &act_gen_left(q, Gen::D, xi);
            &(&b + &c) - &ad.scale(cr(twist_coefficient(s, q)))
        }
        _ => &act_gen_left(q, Gen::D, xi) - &act_gen_left(q, Gen::A, xi),
    }
}

/// Right action of the twisted-primitive element `X_σ`.
pub fn x_sigma_act_right(q: QBase, sigma: ExtendedParameter, xi: &AqElement) -> AqElement {
    let qv = q.value();
    match sigma {
        ExtendedParameter::Finite(s) => {
            let b = act_gen_right(q, Gen::B, xi).scale(cx(0.0, qv.sqrt()));
            let c = act_gen_right(q, Gen::C, xi).scale(cx(0.0, -1.0 / qv.sqrt()));
            let ad = &act_gen_right(q, Gen::A, xi) - &act_gen_right(q, Gen::D, xi);
            &(&b + &c) - &ad.scale(cr(twist_coefficient(s, q)))
        }
        _ => &act_gen_right(q, Gen::D, xi) - &act_gen_right(q, Gen::A, xi),
    }
}

/// Duality pairing of a generator word against a coordinate-algebra
/// element, evaluated as the counit of the left action.
pub fn pairing_word(q: QBase, word: &[Gen], xi: &AqElement) -> Complex64 {
    act_word_left(q, word, xi).counit()
}

/// Matrix of one generator on the tensor product of two irreducibles,
/// obtained by pushing it through the coproduct.
pub fn tensor_rep_gen(l1: Spin, l2: Spin, g: Gen, q: QBase) -> DMatrix<Complex64> {
    let a1 = rep_gen(l1, Gen::A, q);
    let d2 = rep_gen(l2, Gen::D, q);
    match g {
        Gen::A => a1.kronecker(&rep_gen(l2, Gen::A, q)),
        Gen::D => rep_gen(l1, Gen::D, q).kronecker(&d2),
        Gen::B => {
            a1.kronecker(&rep_gen(l2, Gen::B, q))
                + rep_gen(l1, Gen::B, q).kronecker(&d2)
        }
        Gen::C => {
            a1.kronecker(&rep_gen(l2, Gen::C, q))
                + rep_gen(l1, Gen::C, q).kronecker(&d2)
        }
    }
}

/// Matrix of a generator word on the tensor product representation.
pub fn tensor_rep_word(l1: Spin, l2: Spin, word: &[Gen], q: QBase) -> DMatrix<Complex64> {
    let dim = l1.dim() * l2.dim();
    let mut out = DMatrix::identity(dim, dim);
    for &g in word {
        out *= tensor_rep_gen(l1, l2, g, q);
    }
    out
}

/// Casimir matrix on the tensor product representation.
pub fn tensor_casimir(l1: Spin, l2: Spin, q: QBase) -> DMatrix<Complex64> {
    let qv = q.value();
    let dim = l1.dim() * l2.dim();
    let a = tensor_rep_gen(l1, l2, Gen::A, q);
    let d = tensor_rep_gen(l1, l2, Gen::D, q);
    let b = tensor_rep_gen(l1, l2, Gen::B, q);
    let c = tensor_rep_gen(l1, l2, Gen::C, q);
    let denom = (1.0 / qv - qv).powi(2);
    (&a * &a * cr(1.0 / qv) + &d * &d * cr(qv) - DMatrix::identity(dim, dim) * cr(2.0))
        / cr(denom)
        + b * c
}

/// Matrix of `X_σ A` on the tensor product, assembled from its coproduct
/// `Δ(X_σA) = A² ⊗ X_σA + X_σA ⊗ 1`.
pub fn tensor_x_sigma_a(
    l1: Spin,
    l2: Spin,
    sigma: ExtendedParameter,
    q: QBase,
) -> DMatrix<Complex64> {
    let xa1 = x_sigma_matrix(l1, sigma, q) * rep_gen(l1, Gen::A, q);
    let xa2 = x_sigma_matrix(l2, sigma, q) * rep_gen(l2, Gen::A, q);
    let a1 = rep_gen(l1, Gen::A, q);
    (&a1 * &a1).kronecker(&xa2) + xa1.kronecker(&DMatrix::identity(l2.dim(), l2.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn q05() -> QBase {
        QBase::new(0.5).unwrap()
    }

    fn mat_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn spins() -> Vec<Spin> {
        (0..=4).map(Spin::from_twice).collect()
    }

    #[test]
    fn spin_bookkeeping_is_consistent() {
        let l = Spin::from_twice(3);
        assert_eq!(l.dim(), 4);
        assert_eq!(l.value(), 1.5);
        assert_eq!(l.weight(0), -1.5);
        assert_eq!(l.weight(3), 1.5);
        assert_eq!(l.index_of_twice_weight(-3), Some(0));
        assert_eq!(l.index_of_twice_weight(3), Some(3));
        assert_eq!(l.index_of_twice_weight(4), None);
        assert_eq!(l.index_of_twice_weight(2), None);
        assert_eq!(format!("{}", l), "3/2");
        assert_eq!(format!("{}", Spin::integer(2)), "2");
        assert_eq!(
            tensor_decomposition_range(Spin::integer(1), Spin::from_twice(1)),
            vec![Spin::from_twice(1), Spin::from_twice(3)]
        );
    }

    #[test]
    fn representation_satisfies_the_defining_relations() {
        let q = q05();
        let qv = q.value();
        for l in spins() {
            let a = rep_gen(l, Gen::A, q);
            let b = rep_gen(l, Gen::B, q);
            let c = rep_gen(l, Gen::C, q);
            let d = rep_gen(l, Gen::D, q);
            let id = DMatrix::<Complex64>::identity(l.dim(), l.dim());
            assert!(mat_diff(&(&a * &d), &id) < 1e-12);
            assert!(mat_diff(&(&d * &a), &id) < 1e-12);
            assert!(mat_diff(&(&a * &b), &(&b * &a * cr(qv))) < 1e-12);
            assert!(mat_diff(&(&a * &c), &(&c * &a * cr(1.0 / qv))) < 1e-12);
            let lhs = &b * &c - &c * &b;
            let rhs = (&a * &a - &d * &d) * cr(1.0 / (qv - 1.0 / qv));
            assert!(mat_diff(&lhs, &rhs) < 1e-12);
            // The conjugation A* = A, B* = C is implemented by the matrix
            // adjoint.
            assert!(mat_diff(&a.adjoint(), &a) < 1e-14);
            assert!(mat_diff(&b.adjoint(), &c) < 1e-12);
        }
    }

    #[test]
    fn casimir_acts_as_the_expected_scalar() {
        let q = q05();
        for l in spins() {
            let omega = casimir_matrix(l, q);
            let expected =
                DMatrix::<Complex64>::identity(l.dim(), l.dim()) * cr(casimir_scalar(l, q));
            assert!(mat_diff(&omega, &expected) < 1e-11);
            // And it commutes with every generator.
            for g in [Gen::A, Gen::B, Gen::C, Gen::D] {
                let m = rep_gen(l, g, q);
                assert!(mat_diff(&(&omega * &m), &(&m * &omega)) < 1e-11);
            }
        }
    }

    #[test]
    fn twisted_primitive_elements_have_the_advertised_structure() {
        let q = q05();
        let qv = q.value();
        for l in spins() {
            for sigma in [
                ExtendedParameter::Finite(0.0),
                ExtendedParameter::Finite(0.7),
                ExtendedParameter::Finite(-1.3),
                ExtendedParameter::PlusInfinity,
                ExtendedParameter::MinusInfinity,
            ] {
                let x = x_sigma_matrix(l, sigma, q);
                let a = rep_gen(l, Gen::A, q);
                // (X_σ A)* = X_σ A at every spin.
                let xa = &x * &a;
                assert!(mat_diff(&xa.adjoint(), &xa) < 1e-12);
            }
            // The two infinite limits agree and equal D − A.
            let plus = x_sigma_matrix(l, ExtendedParameter::PlusInfinity, q);
            let expected = rep_gen(l, Gen::D, q) - rep_gen(l, Gen::A, q);
            assert!(mat_diff(&plus, &expected) < 1e-14);
            // Finite X_σ scaled as in its defining limit approaches D − A.
            let sigma = 28.0;
            let scaled =
                x_sigma_matrix(l, ExtendedParameter::Finite(sigma), q) * cr((1.0 / qv - qv) * qv.powf(sigma));
            assert!(mat_diff(&scaled, &expected) < 1e-7);
        }
    }

    #[test]
    fn extended_parameter_parses_and_negates() {
        assert_eq!(
            "inf".parse::<ExtendedParameter>().unwrap(),
            ExtendedParameter::PlusInfinity
        );
        assert_eq!(
            "-inf".parse::<ExtendedParameter>().unwrap(),
            ExtendedParameter::MinusInfinity
        );
        assert_eq!(
            "0.25".parse::<ExtendedParameter>().unwrap(),
            ExtendedParameter::Finite(0.25)
        );
        assert!("xyz".parse::<ExtendedParameter>().is_err());
        assert_eq!(
            ExtendedParameter::PlusInfinity.negate(),
            ExtendedParameter::MinusInfinity
        );
        assert_eq!(format!("{}", ExtendedParameter::MinusInfinity), "-inf");
    }

    #[test]
    fn pairing_on_the_defining_corepresentation_matches_the_matrices() {
        // The generators of the coordinate algebra arrange into the spin-1/2
        // corepresentation matrix [[α, β], [γ, δ]]; pairing a generator word
        // against its entries must reproduce the representation matrix.
        let q = q05();
        let l = Spin::from_twice(1);
        let entries = [
            [AqElement::alpha(q), AqElement::beta(q)],
            [AqElement::gamma(q), AqElement::delta(q)],
        ];
        let mut rng = StdRng::seed_from_u64(101);
        let gens = [Gen::A, Gen::B, Gen::C, Gen::D];
        for trial in 0..30 {
            let len = rng.random_range(0..=4);
            let word: Vec<Gen> = (0..len).map(|_| gens[rng.random_range(0..4)]).collect();
            let mat = rep_word(l, &word, q);
            for (i, row) in entries.iter().enumerate() {
                for (j, xi) in row.iter().enumerate() {
                    let paired = pairing_word(q, &word, xi);
                    assert!(
                        (paired - mat[(i, j)]).norm() < 1e-12,
                        "trial {trial}: word {word:?} entry ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn actions_respect_the_enveloping_algebra_relations() {
        let q = q05();
        let qv = q.value();
        let mut rng = StdRng::seed_from_u64(103);
        for _ in 0..15 {
            let xi = random_element(&mut rng, q);
            let scale = xi.norm_inf().max(1.0) * 16.0;
            // AD = 1 as operators on both sides.
            let left_ad = act_gen_left(q, Gen::A, &act_gen_left(q, Gen::D, &xi));
            assert!(left_ad.max_abs_diff(&xi) <= 1e-12 * scale);
            let right_ad = act_gen_right(q, Gen::D, &act_gen_right(q, Gen::A, &xi));
            assert!(right_ad.max_abs_diff(&xi) <= 1e-12 * scale);
            // AB = qBA through the left action.
            let ab = act_word_left(q, &[Gen::A, Gen::B], &xi);
            let ba = act_word_left(q, &[Gen::B, Gen::A], &xi).scale(cr(qv));
            assert!(ab.max_abs_diff(&ba) <= 1e-12 * scale);
            // BC − CB = (A² − D²)/(q − q⁻¹) through the right action.
            let bc = &act_word_right(q, &[Gen::B, Gen::C], &xi)
                - &act_word_right(q, &[Gen::C, Gen::B], &xi);
            let aa = act_word_right(q, &[Gen::A, Gen::A], &xi);
            let dd = act_word_right(q, &[Gen::D, Gen::D], &xi);
            let rhs = (&aa - &dd).scale(cr(1.0 / (qv - 1.0 / qv)));
            assert!(bc.max_abs_diff(&rhs) <= 1e-12 * scale);
            // The two actions commute with each other.
            for g in [Gen::A, Gen::B, Gen::C, Gen::D] {
                for h in [Gen::A, Gen::B, Gen::C, Gen::D] {
                    let lr = act_gen_right(q, h, &act_gen_left(q, g, &xi));
                    let rl = act_gen_left(q, g, &act_gen_right(q, h, &xi));
                    assert!(lr.max_abs_diff(&rl) <= 1e-12 * scale);
                }
            }
        }
    }

    #[test]
    fn actions_are_module_algebra_actions() {
        // X·(ξη) must equal the coproduct-weighted combination of actions:
        // for B this reads B·(ξη) = (A·ξ)(B·η) + (B·ξ)(D·η), and similarly
        // on the right.
        let q = q05();
        let mut rng = StdRng::seed_from_u64(107);
        for _ in 0..15 {
            let xi = random_element(&mut rng, q);
            let eta = random_element(&mut rng, q);
            let prod = &xi * &eta;
            let scale = prod.norm_inf().max(1.0) * 16.0;
            let lhs = act_gen_left(q, Gen::B, &prod);
            let rhs = &(&act_gen_left(q, Gen::A, &xi) * &act_gen_left(q, Gen::B, &eta))
                + &(&act_gen_left(q, Gen::B, &xi) * &act_gen_left(q, Gen::D, &eta));
            assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * scale);

            let lhs_c = act_gen_left(q, Gen::C, &prod);
            let rhs_c = &(&act_gen_left(q, Gen::A, &xi) * &act_gen_left(q, Gen::C, &eta))
                + &(&act_gen_left(q, Gen::C, &xi) * &act_gen_left(q, Gen::D, &eta));
            assert!(lhs_c.max_abs_diff(&rhs_c) <= 1e-12 * scale);

            let rhs_right = &(&act_gen_right(q, Gen::A, &xi) * &act_gen_right(q, Gen::B, &eta))
                + &(&act_gen_right(q, Gen::B, &xi) * &act_gen_right(q, Gen::D, &eta));
            assert!(act_gen_right(q, Gen::B, &prod).max_abs_diff(&rhs_right) <= 1e-12 * scale);

            // A acts diagonally on products.
            let lhs_a = act_gen_left(q, Gen::A, &prod);
            let rhs_a = &act_gen_left(q, Gen::A, &xi) * &act_gen_left(q, Gen::A, &eta);
            assert!(lhs_a.max_abs_diff(&rhs_a) <= 1e-12 * scale);
        }
    }

    #[test]
    fn pairing_against_powers_of_a_is_a_character_evaluation() {
        // ⟨A^k, ξ⟩ equals the one-dimensional representation at λ = q^{k/2},
        // tying the duality pairing to the character family.
        let q = q05();
        let mut rng = StdRng::seed_from_u64(109);
        for _ in 0..10 {
            let xi = random_element(&mut rng, q);
            for k in 0..4usize {
                let word = vec![Gen::A; k];
                let paired = pairing_word(q, &word, &xi);
                let lam = cr(q.value().powf(k as f64 / 2.0));
                let expected = xi.one_dim_rep(lam);
                let scale = xi.norm_inf().max(1.0);
                assert!((paired - expected).norm() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn tensor_representation_satisfies_relations_and_splits_into_irreducibles() {
        let q = q05();
        let qv = q.value();
        let pairs = [
            (Spin::from_twice(1), Spin::from_twice(1)),
            (Spin::from_twice(2), Spin::from_twice(1)),
            (Spin::from_twice(2), Spin::from_twice(2)),
            (Spin::from_twice(3), Spin::from_twice(2)),
        ];
        for (l1, l2) in pairs {
            let a = tensor_rep_gen(l1, l2, Gen::A, q);
            let b = tensor_rep_gen(l1, l2, Gen::B, q);
            let c = tensor_rep_gen(l1, l2, Gen::C, q);
            let d = tensor_rep_gen(l1, l2, Gen::D, q);
            assert!(mat_diff(&(&a * &b), &(&b * &a * cr(qv))) < 1e-12);
            let lhs = &b * &c - &c * &b;
            let rhs = (&a * &a - &d * &d) * cr(1.0 / (qv - 1.0 / qv));
            assert!(mat_diff(&lhs, &rhs) < 1e-12);

            // The tensor Casimir eigenvalues enumerate the decomposition
            // range with the right multiplicities.
            let omega = tensor_casimir(l1, l2, q);
            let mut eigs: Vec<f64> = omega
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .copied()
                .collect();
            eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let mut expected: Vec<f64> = Vec::new();
            for l in tensor_decomposition_range(l1, l2) {
                expected.extend(std::iter::repeat_n(casimir_scalar(l, q), l.dim()));
            }
            expected.sort_by(|x, y| x.partial_cmp(y).unwrap());
            assert_eq!(eigs.len(), expected.len());
            for (got, want) in eigs.iter().zip(&expected) {
                assert!(
                    (got - want).abs() <= 1e-8 * want.abs().max(1.0),
                    "({l1},{l2}): casimir eigenvalue {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn tensor_twisted_primitive_is_self_adjoint_with_expected_kernel() {
        let q = q05();
        let l1 = Spin::integer(1);
        let l2 = Spin::integer(1);
        for sigma in [
            ExtendedParameter::Finite(0.3),
            ExtendedParameter::Finite(-0.8),
        ] {
            let t = tensor_x_sigma_a(l1, l2, sigma, q);
            assert!(mat_diff(&t.adjoint(), &t) < 1e-12);
            // Each irreducible component contributes one kernel vector.
            let eig = t.symmetric_eigen();
            let near_zero = eig
                .eigenvalues
                .iter()
                .filter(|v| v.abs() < 1e-9)
                .count();
            assert_eq!(near_zero, tensor_decomposition_range(l1, l2).len());
        }
    }

    fn random_element(rng: &mut StdRng, q: QBase) -> AqElement {
        use crate::aqsu2::Monomial;
        let mut terms = Vec::new();
        for _ in 0..3 {
            let b = rng.random_range(0..=2);
            let c = rng.random_range(0..=2);
            let m = match rng.random_range(0..3) {
                0 => Monomial::new(rng.random_range(1..=2), 0, b, c),
                1 => Monomial::new(0, rng.random_range(1..=2), b, c),
                _ => Monomial::new(0, 0, b, c),
            };
            terms.push((m, cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
        }
        AqElement::from_terms(q, terms)
    }
}
