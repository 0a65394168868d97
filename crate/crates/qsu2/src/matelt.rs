//! Generalized matrix elements of the quantum special unitary group.
//!
//! Each irreducible corepresentation carries, for every value of the twist
//! parameter, an orthonormal basis of eigenvectors of the twisted-primitive
//! action.  Averaging the corepresentation coefficients over a pair of such
//! bases produces two-parameter families of coordinate-algebra elements that
//! transform by scalars under the twisted-primitive elements on both sides.
//! This module constructs the eigenvector bases, the corepresentation
//! coefficients, and the averaged elements, together with their closed-form
//! one-dimensional characters, factorizations into first-order products,
//! and expansions as four-parameter orthogonal polynomials in a single
//! spherical element.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::aqsu2::{AqElement, AqGen, Monomial};
use crate::families::{askey_wilson_coefficients, aw_jacobi_params, dual_q_krawtchouk_at};
use crate::qseries::{basic_hypergeometric, cr, cx, q_binomial, q_shifted, Extent, QBase};
use crate::uqsu2::{
    act_gen_left, act_gen_right, casimir_scalar, tensor_casimir, tensor_decomposition_range,
    x_sigma_act_left, x_sigma_act_right, ExtendedParameter, Gen, Spin,
};

// ------------------------------------------------------------- utilities --

/// Integer power of the imaginary unit.
fn ipow(k: i32) -> Complex64 {
    match k.rem_euclid(4) {
        0 => cr(1.0),
        1 => cx(0.0, 1.0),
        2 => cr(-1.0),
        _ => cx(0.0, -1.0),
    }
}

/// Shifted factorial with *descending* even steps:
/// `(q^e0; q^{-2})_k = prod_{t<k} (1 - q^{e0 - 2t})`.
fn desc_shifted(qv: f64, e0: i32, k: u32) -> f64 {
    (0..k).map(|t| 1.0 - qv.powi(e0 - 2 * t as i32)).product()
}

/// Basis index of the weight `twice/2` inside the spin-`l` module,
/// panicking on a weight outside the module or of the wrong parity.
fn weight_index(l: Spin, twice: i32) -> usize {
    l.index_of_twice_weight(twice)
        .unwrap_or_else(|| panic!("weight {twice}/2 does not occur in the spin-{} module", l))
}

/// Hermitian inner product, conjugate-linear in the second slot.
pub(crate) fn inner(x: &DVector<Complex64>, y: &DVector<Complex64>) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// Dual q-Krawtchouk value with the numerically safer of two equivalent
/// representations.  The terminating series loses precision when both the
/// degree and the grid index are large (its terms grow like inverse powers
/// of the base while the value stays bounded), so for grid indices past the
/// midpoint we evaluate through the reflection that exchanges the grid
/// index `x` with `cap_n - x` and the parameter `s` with `1/s`, at the cost
/// of a sign and a power of `s`.
pub(crate) fn stable_dual_qk(n: u32, x: u32, s: f64, cap_n: u32, q: QBase) -> Complex64 {
    if cap_n - x < x {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        cr(sign * s.powi(-(n as i32)))
            * dual_q_krawtchouk_at(n, cap_n - x, 1.0 / s, cap_n, q)
                .expect("degree and reflected grid index within range")
    } else {
        dual_q_krawtchouk_at(n, x, s, cap_n, q)
            .expect("degree and grid index within range")
    }
}

// --------------------------------------------------- eigenvalue and basis --

/// Eigenvalue attached to the weight `twice_j/2` eigenvector of the
/// twisted-primitive action with parameter `sigma`.  The infinite branches
/// are the limits of the finite one after the appropriate exponential
/// rescaling.
pub fn lambda_eigenvalue(sigma: ExtendedParameter, twice_j: i32, q: QBase) -> f64 {
    let qv = q.value();
    match sigma {
        ExtendedParameter::Finite(s) => {
            let j2 = twice_j as f64;
            (qv.powf(-j2 - s) - qv.powf(s + j2) + qv.powf(s) - qv.powf(-s)) / (qv - 1.0 / qv)
        }
        ExtendedParameter::PlusInfinity => 1.0 - qv.powi(-twice_j),
        ExtendedParameter::MinusInfinity => 1.0 - qv.powi(twice_j),
    }
}

/// Positive normalization constant making the twisted eigenvector of
/// weight label `twice_j/2` a unit vector.
pub fn eigenvector_constant(l: Spin, twice_j: i32, sigma: f64, q: QBase) -> f64 {
    let _ = weight_index(l, twice_j);
    let qv = q.value();
    let q2 = q.squared();
    let tl = l.twice() as i32;
    let lpj = ((tl + twice_j) / 2) as u32;
    let lmj = ((tl - twice_j) / 2) as u32;
    let binom = q_binomial(l.twice(), lmj, q2).expect("column index within the row");
    let ratio = (1.0 + qv.powf(-2.0 * twice_j as f64 - 2.0 * sigma))
        / (1.0 + qv.powf(-2.0 * sigma));
    let pm = q_shifted(cr(-qv.powf(2.0 - 2.0 * sigma)), q2, lmj).re;
    let pp = q_shifted(cr(-qv.powf(2.0 + 2.0 * sigma)), q2, lpj).re;
    qv.powi((tl + twice_j) / 2) * (binom * ratio / (pm * pp)).sqrt()
}

/// Unit eigenvector of the twisted-primitive action (composed with the
/// positive group-like weight) on the spin-`l` module, for the eigenvalue
/// [`lambda_eigenvalue`]`(sigma, twice_j, q)`.  Entries are indexed by
/// weight; at the infinite parameter values the vector degenerates to a
/// phase times a standard basis vector.
pub fn eigenvector(
    l: Spin,
    twice_j: i32,
    sigma: ExtendedParameter,
    q: QBase,
) -> DVector<Complex64> {
    let jdx = weight_index(l, twice_j);
    let dim = l.dim();
    let tl = l.twice() as i32;
    match sigma {
        ExtendedParameter::PlusInfinity => {
            let mut v = DVector::zeros(dim);
            v[jdx] = ipow((tl - twice_j) / 2);
            v
        }
        ExtendedParameter::MinusInfinity => {
            let mut v = DVector::zeros(dim);
            v[weight_index(l, -twice_j)] = ipow(-(tl + twice_j) / 2);
            v
        }
        ExtendedParameter::Finite(s) => {
            let qv = q.value();
            let q2 = q.squared();
            let cc = eigenvector_constant(l, twice_j, s, q);
            let grid = ((tl - twice_j) / 2) as u32;
            let s2 = qv.powf(2.0 * s);
            let mut v = DVector::zeros(dim);
            for n_idx in 0..dim {
                let k = (tl - (2 * n_idx as i32 - tl)) as u32 / 2;
                let r = stable_dual_qk(k, grid, s2, l.twice(), q2);
                let ratio = desc_shifted(qv, 2 * tl, k) / q_shifted(cr(qv * qv), q2, k).re;
                let mag = qv.powf(s * k as f64)
                    * qv.powi((k as i32) * (k as i32 - 1) / 2)
                    * ratio.sqrt();
                v[n_idx] = ipow(-(k as i32)) * cr(cc * mag) * r;
            }
            v
        }
    }
}

// --------------------------------------------- corepresentation elements --

/// Monomial coefficients (constant term first) of the terminating
/// two-parameter basic hypergeometric polynomial used inside
/// [`corep_entry`]: degree `n`, parameters `a`, `b`, base `q`.
fn little_q_jacobi_coefficients(n: u32, a: f64, b: f64, q: QBase) -> Vec<f64> {
    let qv = q.value();
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut c = 1.0;
    for k in 0..=n {
        coeffs.push(c);
        if k < n {
            let ki = k as i32;
            c *= qv * (1.0 - qv.powi(ki - n as i32)) * (1.0 - a * b * qv.powi(n as i32 + 1 + ki))
                / ((1.0 - a * qv.powi(1 + ki)) * (1.0 - qv.powi(1 + ki)));
        }
    }
    coeffs
}

/// Square root of a ratio of q-binomials entering the corepresentation
/// coefficients, `twice_n >= |twice_m|`.
fn corep_constant(l: Spin, twice_n: i32, twice_m: i32, q: QBase) -> f64 {
    let qv = q.value();
    let q2 = q.squared();
    let nmm = ((twice_n - twice_m) / 2) as u32;
    let lmm = ((l.twice() as i32 - twice_m) / 2) as u32;
    let lpn = ((l.twice() as i32 + twice_n) / 2) as u32;
    let b1 = q_binomial(lmm, nmm, q2).expect("column index within the row");
    let b2 = q_binomial(lpn, nmm, q2).expect("column index within the row");
    let expo = -((twice_n - twice_m) / 2) * ((l.twice() as i32 - twice_n) / 2);
    (b1 * b2).sqrt() * qv.powi(expo)
}

/// Matrix coefficient of the spin-`l` corepresentation in the weight basis:
/// an explicit coordinate-algebra element, polynomial of degree `2l`.
pub fn corep_entry(l: Spin, twice_n: i32, twice_m: i32, q: QBase) -> AqElement {
    let _ = weight_index(l, twice_n);
    let _ = weight_index(l, twice_m);
    let qv = q.value();
    let q2 = q.squared();
    let tl = l.twice() as i32;
    let (tn, tm) = (twice_n, twice_m);

    // Reduce to the quadrant in which one index dominates in absolute
    // value; on overlaps the expressions agree.
    struct Case {
        prefactor: Vec<AqGen>,
        arg_scale: f64,
        deg: u32,
        a: f64,
        b: f64,
        constant: f64,
    }
    let rep = |g: AqGen, k: i32| std::iter::repeat_n(g, k as usize);
    let case = if tn >= tm.abs() {
        Case {
            prefactor: rep(AqGen::Delta, (tn + tm) / 2)
                .chain(rep(AqGen::Gamma, (tn - tm) / 2))
                .collect(),
            arg_scale: -1.0 / qv,
            deg: ((tl - tn) / 2) as u32,
            a: qv.powi(tn - tm),
            b: qv.powi(tn + tm),
            constant: corep_constant(l, tn, tm, q),
        }
    } else if tm >= tn.abs() {
        Case {
            prefactor: rep(AqGen::Delta, (tn + tm) / 2)
                .chain(rep(AqGen::Beta, (tm - tn) / 2))
                .collect(),
            arg_scale: -1.0 / qv,
            deg: ((tl - tm) / 2) as u32,
            a: qv.powi(tm - tn),
            b: qv.powi(tn + tm),
            constant: corep_constant(l, tm, tn, q),
        }
    } else if -tn >= tm.abs() {
        Case {
            prefactor: rep(AqGen::Beta, (tm - tn) / 2)
                .chain(rep(AqGen::Alpha, (-tm - tn) / 2))
                .collect(),
            arg_scale: -qv.powi(tm + tn - 1),
            deg: ((tl + tn) / 2) as u32,
            a: qv.powi(tm - tn),
            b: qv.powi(-(tn + tm)),
            constant: corep_constant(l, -tn, -tm, q),
        }
    } else {
        Case {
            prefactor: rep(AqGen::Gamma, (tn - tm) / 2)
                .chain(rep(AqGen::Alpha, (-tm - tn) / 2))
                .collect(),
            arg_scale: -qv.powi(tm + tn - 1),
            deg: ((tl + tm) / 2) as u32,
            a: qv.powi(tn - tm),
            b: qv.powi(-(tn + tm)),
            constant: corep_constant(l, -tm, -tn, q),
        }
    };

    let coeffs = little_q_jacobi_coefficients(case.deg, case.a, case.b, q2);
    let poly = AqElement::from_terms(
        q,
        coeffs.iter().enumerate().map(|(k, &c)| {
            (
                Monomial::new(0, 0, k as u32, k as u32),
                cr(c * case.arg_scale.powi(k as i32)),
            )
        }),
    );
    let prefactor = AqElement::from_letter_word(q, &case.prefactor, cr(case.constant));
    &prefactor * &poly
}

/// Sum of the diagonal corepresentation coefficients of spin `l`.
pub fn character_sum(l: Spin, q: QBase) -> AqElement {
    let tl = l.twice() as i32;
    let mut out = AqElement::zero(q);
    for idx in 0..l.dim() {
        out = &out + &corep_entry(l, 2 * idx as i32 - tl, 2 * idx as i32 - tl, q);
    }
    out
}

// ------------------------------------------- generalized matrix elements --

/// Corepresentation coefficient averaged over a twisted eigenvector on each
/// side: the element transforming by [`lambda_eigenvalue`] scalars under
/// the weighted twisted-primitive actions.
pub fn gen_matrix_element(
    l: Spin,
    twice_i: i32,
    twice_j: i32,
    tau: ExtendedParameter,
    sigma: ExtendedParameter,
    q: QBase,
) -> AqElement {
    averaged_element(l, twice_i, twice_j, tau, sigma, q, false)
}

/// Variant of [`gen_matrix_element`] with each term weighted by the
/// group-like weight of its column index; equals the left action of the
/// positive group-like generator on the plain element.
pub fn weighted_matrix_element(
    l: Spin,
    twice_i: i32,
    twice_j: i32,
    tau: ExtendedParameter,
    sigma: ExtendedParameter,
    q: QBase,
) -> AqElement {
    averaged_element(l, twice_i, twice_j, tau, sigma, q, true)
}

fn averaged_element(
    l: Spin,
    twice_i: i32,
    twice_j: i32,
    tau: ExtendedParameter,
    sigma: ExtendedParameter,
    q: QBase,
    column_weighted: bool,
) -> AqElement {
    let qv = q.value();
    let tl = l.twice() as i32;
    let right = eigenvector(l, twice_j, sigma, q);
    let left = eigenvector(l, twice_i, tau, q);
    let mut out = AqElement::zero(q);
    for (m_idx, wm) in right.iter().enumerate() {
        if wm.norm() == 0.0 {
            continue;
        }
        let tm = 2 * m_idx as i32 - tl;
        let weight = if column_weighted {
            qv.powf(-(tm as f64) / 2.0)
        } else {
            1.0
        };
        for (n_idx, wn) in left.iter().enumerate() {
            if wn.norm() == 0.0 {
                continue;
            }
            let tn = 2 * n_idx as i32 - tl;
            let c = wm * wn.conj() * weight;
            out = &out + &corep_entry(l, tn, tm, q).scale(c);
        }
    }
    out
}

/// Weighted twisted-primitive left action `xi -> (X A).xi`, defined for
/// finite and infinite twist parameters alike.
pub fn x_sigma_a_act_left(q: QBase, sigma: ExtendedParameter, xi: &AqElement) -> AqElement {
    match sigma {
        ExtendedParameter::Finite(_) => {
            x_sigma_act_left(q, sigma, &act_gen_left(q, Gen::A, xi))
        }
        _ => xi - &act_gen_left(q, Gen::A, &act_gen_left(q, Gen::A, xi)),
    }
}

/// Weighted twisted-primitive right action `xi -> xi.(X A)`.
pub fn x_sigma_a_act_right(q: QBase, tau: ExtendedParameter, xi: &AqElement) -> AqElement {
    match tau {
        ExtendedParameter::Finite(_) => {
            act_gen_right(q, Gen::A, &x_sigma_act_right(q, tau, xi))
        }
        _ => xi - &act_gen_right(q, Gen::A, &act_gen_right(q, Gen::A, xi)),
    }
}

// --------------------------------------------------- spherical element --

/// Self-adjoint quadratic element annihilated by the twisted-primitive
/// element with parameter `sigma` acting on the left and the one with
/// parameter `tau` acting on the right; single generator of the
/// two-sided-invariant subalgebra.
pub fn spherical_generator(tau: f64, sigma: f64, q: QBase) -> AqElement {
    let qv = q.value();
    let ms = qv.powf(-sigma) - qv.powf(sigma);
    let mt = qv.powf(-tau) - qv.powf(tau);
    use AqGen::{Alpha, Beta, Delta, Gamma};
    let w = |letters: &[AqGen], c: Complex64| AqElement::from_letter_word(q, letters, c);
    let mut rho = w(&[Alpha, Alpha], cr(1.0));
    rho = &rho + &w(&[Delta, Delta], cr(1.0));
    rho = &rho + &w(&[Gamma, Gamma], cr(qv));
    rho = &rho + &w(&[Beta, Beta], cr(1.0 / qv));
    rho = &rho + &w(&[Delta, Gamma], cx(0.0, ms * qv));
    rho = &rho + &w(&[Beta, Alpha], cx(0.0, ms));
    rho = &rho + &w(&[Delta, Beta], cx(0.0, -mt));
    rho = &rho + &w(&[Gamma, Alpha], cx(0.0, -mt * qv));
    rho = &rho + &w(&[Beta, Gamma], cr(ms * mt));
    rho.scale(cr(0.5))
}

// ------------------------------------------------------ ladder elements --

/// First-order elements whose left multiplication shifts both eigenvalue
/// labels of a generalized matrix element by one half step, arranged as a
/// two-by-two matrix `[[raise-neither, lower-col], [lower-row, lower-both]]`
/// in the same layout as the spin-one-half weighted matrix (up to the
/// normalization `((1+q^{2 sigma})(1+q^{2 tau}))^{-1/2}`).
pub fn ladder_matrix(tau: f64, sigma: f64, q: QBase) -> [[AqElement; 2]; 2] {
    let p = |e: f64| q.value().powf(e);
    let combo = |ca: Complex64, cb: Complex64, cg: Complex64, cd: Complex64| {
        AqElement::from_terms(
            q,
            [
                (Monomial::new(1, 0, 0, 0), ca),
                (Monomial::new(0, 0, 1, 0), cb),
                (Monomial::new(0, 0, 0, 1), cg),
                (Monomial::new(0, 1, 0, 0), cd),
            ],
        )
    };
    [
        [
            combo(
                cr(p(0.5)),
                cx(0.0, -p(sigma - 0.5)),
                cx(0.0, p(tau + 0.5)),
                cr(p(sigma + tau - 0.5)),
            ),
            combo(
                cr(-p(sigma + 0.5)),
                cx(0.0, -p(-0.5)),
                cx(0.0, -p(sigma + tau + 0.5)),
                cr(p(tau - 0.5)),
            ),
        ],
        [
            combo(
                cr(-p(tau + 0.5)),
                cx(0.0, p(tau + sigma - 0.5)),
                cx(0.0, p(0.5)),
                cr(p(sigma - 0.5)),
            ),
            combo(
                cr(p(tau + sigma + 0.5)),
                cx(0.0, p(tau - 0.5)),
                cx(0.0, -p(sigma + 0.5)),
                cr(p(-0.5)),
            ),
        ],
    ]
}

/// Weighted matrix element with extremal row label, realized as an ordered
/// product of first-order ladder elements with stepped parameters times an
/// explicit positive constant.
pub fn extremal_weighted_element(
    l: Spin,
    twice_m: i32,
    tau: f64,
    sigma: f64,
    q: QBase,
) -> AqElement {
    let _ = weight_index(l, twice_m);
    let qv = q.value();
    let tl = l.twice() as i32;
    let lpm = (tl + twice_m) / 2;
    let lmm = (tl - twice_m) / 2;
    let scale = eigenvector_constant(l, twice_m, sigma, q)
        * eigenvector_constant(l, tl, tau, q)
        * qv.powf(-sigma * lmm as f64)
        * qv.powi(lmm * (lmm - 1) / 2);
    let mut out = AqElement::scalar(q, cr(scale));
    for k in 0..lpm {
        let t = tau + tl as f64 - 1.0 - k as f64;
        let s = sigma + twice_m as f64 - 1.0 - k as f64;
        out = &out * &ladder_matrix(t, s, q)[1][1];
    }
    for j in 0..lmm {
        let t = tau + lmm as f64 - 1.0 - j as f64;
        let s = sigma - lmm as f64 + 1.0 + j as f64;
        out = &out * &ladder_matrix(t, s, q)[1][0];
    }
    out
}

// ------------------------------------------------- product expansions --

/// Connection constant between a generalized matrix element and the product
/// of its minimal-spin counterpart with a polynomial in the spherical
/// element; stated for a dominant row label (`twice_i >= |twice_j|`).
pub fn expansion_constant(
    l: Spin,
    twice_i: i32,
    twice_j: i32,
    tau: f64,
    sigma: f64,
    q: QBase,
) -> f64 {
    assert!(
        twice_i >= twice_j.abs(),
        "the first label must dominate: got {twice_i} < |{twice_j}|"
    );
    let li = Spin::from_twice(twice_i as u32);
    let qv = q.value();
    let k = ((l.twice() as i32 - twice_i) / 2) as u32;
    eigenvector_constant(l, twice_j, sigma, q) * eigenvector_constant(l, twice_i, tau, q)
        / (eigenvector_constant(li, twice_j, sigma, q)
            * eigenvector_constant(li, twice_i, tau, q))
        * qv.powi(-(k as i32))
        / desc_shifted(qv, 2 * l.twice() as i32, k)
}

/// Case data shared by the two product expansions: the dominant label, the
/// connection constant, and the four-parameter polynomial data.
pub struct ExpansionCase {
    /// Twice the minimal spin that carries the factored-off matrix element.
    pub twice_min: i32,
    /// Connection constant in front of the product.
    pub constant: f64,
    /// Four-parameter data of the polynomial factor (base `q^2`).
    pub params: [Complex64; 4],
    /// Degree of the polynomial factor.
    pub deg: u32,
}

/// All product-expansion cases applicable to the label pair, ordered by the
/// dominance branch that produces them.  Away from label boundaries exactly
/// one branch applies; on boundaries (equal absolute labels) several do, and
/// each yields a valid, numerically equal expansion.
pub fn expansion_cases(
    l: Spin,
    ti: i32,
    tj: i32,
    tau: f64,
    sigma: f64,
    q: QBase,
) -> Vec<ExpansionCase> {
    let qv = q.value();
    let q2 = q.squared();
    let mut branches: Vec<(i32, f64, i32, i32, f64, f64)> = Vec::new();
    if ti >= tj.abs() {
        branches.push((
            ti,
            expansion_constant(l, ti, tj, tau, sigma, q),
            (ti - tj) / 2,
            (ti + tj) / 2,
            qv.powf(tau),
            qv.powf(sigma),
        ));
    }
    if tj >= ti.abs() {
        branches.push((
            tj,
            expansion_constant(l, tj, ti, sigma, tau, q),
            (tj - ti) / 2,
            (ti + tj) / 2,
            qv.powf(sigma),
            qv.powf(tau),
        ));
    }
    if -ti >= tj.abs() {
        branches.push((
            -ti,
            expansion_constant(l, -ti, -tj, -tau, -sigma, q),
            (tj - ti) / 2,
            -(ti + tj) / 2,
            qv.powf(-tau),
            qv.powf(-sigma),
        ));
    }
    if -tj >= ti.abs() {
        branches.push((
            -tj,
            expansion_constant(l, -tj, -ti, -sigma, -tau, q),
            (ti - tj) / 2,
            -(ti + tj) / 2,
            qv.powf(-sigma),
            qv.powf(-tau),
        ));
    }
    branches
        .into_iter()
        .map(|(twice_min, constant, alpha, beta, s, t)| ExpansionCase {
            twice_min,
            constant,
            params: aw_jacobi_params(alpha as f64, beta as f64, s, t, q2),
            deg: ((l.twice() as i32 - twice_min) / 2) as u32,
        })
        .collect()
}

/// The first applicable product-expansion case for the label pair.
pub fn expansion_case(l: Spin, ti: i32, tj: i32, tau: f64, sigma: f64, q: QBase) -> ExpansionCase {
    expansion_cases(l, ti, tj, tau, sigma, q)
        .into_iter()
        .next()
        .expect("every label pair admits at least one dominance branch")
}

/// Evaluates the four-parameter polynomial of [`ExpansionCase`] at an
/// algebra element by monomial substitution.
fn polynomial_at_element(case: &ExpansionCase, x: &AqElement, q: QBase) -> AqElement {
    let coeffs = askey_wilson_coefficients(case.deg, case.params, q.squared())
        .expect("polynomial parameters are nonzero");
    let mut poly = AqElement::zero(q);
    for (k, &c) in coeffs.iter().enumerate() {
        poly = &poly + &x.pow(k as u32).scale(c);
    }
    poly
}

/// The weighted matrix element of spin `l` expressed as its minimal-spin
/// counterpart times a four-parameter orthogonal polynomial in the
/// spherical element, times [`expansion_constant`].
pub fn weighted_product_form(
    l: Spin,
    twice_i: i32,
    twice_j: i32,
    tau: f64,
    sigma: f64,
    q: QBase,
) -> AqElement {
    let case = expansion_case(l, twice_i, twice_j, tau, sigma, q);
    weighted_product_form_for(&case, twice_i, twice_j, tau, sigma, q)
}

/// [`weighted_product_form`] evaluated through one specific expansion case,
/// so that every applicable case of a boundary label pair can be exercised.
pub fn weighted_product_form_for(
    case: &ExpansionCase,
    twice_i: i32,
    twice_j: i32,
    tau: f64,
    sigma: f64,
    q: QBase,
) -> AqElement {
    let bmin = weighted_matrix_element(
        Spin::from_twice(case.twice_min as u32),
        twice_i,
        twice_j,
        ExtendedParameter::Finite(tau),
        ExtendedParameter::Finite(sigma),
        q,
    );
    let rho = spherical_generator(tau, sigma, q);
    let poly = polynomial_at_element(case, &rho, q);
    (&bmin * &poly).scale(cr(case.constant))
}

/// The plain (unweighted) matrix element of spin `l` expressed as its
/// minimal-spin counterpart times the same polynomial evaluated at the
/// image of the spherical element under the left group-like action.
pub fn gen_product_form(
    l: Spin,
    twice_i: i32,
    twice_j: i32,
    tau: f64,
    sigma: f64,
    q: QBase,
) -> AqElement {
    let case = expansion_case(l, twice_i, twice_j, tau, sigma, q);
    gen_product_form_for(&case, twice_i, twice_j, tau, sigma, q)
}

/// [`gen_product_form`] evaluated through one specific expansion case.
pub fn gen_product_form_for(
    case: &ExpansionCase,
    twice_i: i32,
    twice_j: i32,
    tau: f64,
    sigma: f64,
    q: QBase,
) -> AqElement {
    let amin = gen_matrix_element(
        Spin::from_twice(case.twice_min as u32),
        twice_i,
        twice_j,
        ExtendedParameter::Finite(tau),
        ExtendedParameter::Finite(sigma),
        q,
    );
    let shifted = act_gen_left(q, Gen::D, &spherical_generator(tau, sigma, q));
    let poly = polynomial_at_element(case, &shifted, q);
    (&amin * &poly).scale(cr(case.constant))
}

// ------------------------------------------------- closed-form characters --

/// One-dimensional character of the *minimal-spin* weighted matrix element,
/// in closed form: a pair of finite shifted factorials in the character
/// parameter.
pub fn weighted_minimal_character(
    twice_i: i32,
    twice_j: i32,
    tau: f64,
    sigma: f64,
    lambda: Complex64,
    q: QBase,
) -> Complex64 {
    let qv = q.value();
    let q2 = q.squared();
    let lam2 = lambda * lambda;
    let (ti, tj) = (twice_i, twice_j);
    if ti >= tj.abs() {
        let li = Spin::from_twice(ti as u32);
        let c = eigenvector_constant(li, tj, sigma, q) * eigenvector_constant(li, ti, tau, q);
        cr(c * qv.powf(-(ti as f64) / 2.0))
            * lambda.powi(-ti)
            * q_shifted(lam2 * qv.powf(1.0 + tau - sigma), q2, ((ti - tj) / 2) as u32)
            * q_shifted(-lam2 * qv.powf(1.0 + tau + sigma), q2, ((ti + tj) / 2) as u32)
    } else if tj >= ti.abs() {
        let lj = Spin::from_twice(tj as u32);
        let c = eigenvector_constant(lj, ti, tau, q) * eigenvector_constant(lj, tj, sigma, q);
        cr(c * qv.powf(-(tj as f64) / 2.0))
            * lambda.powi(-tj)
            * q_shifted(lam2 * qv.powf(1.0 + sigma - tau), q2, ((tj - ti) / 2) as u32)
            * q_shifted(-lam2 * qv.powf(1.0 + tau + sigma), q2, ((ti + tj) / 2) as u32)
    } else if -ti >= tj.abs() {
        let li = Spin::from_twice(-ti as u32);
        let c = eigenvector_constant(li, -tj, -sigma, q)
            * eigenvector_constant(li, -ti, -tau, q);
        cr(c * qv.powf((ti as f64) / 2.0))
            * lambda.powi(ti)
            * q_shifted(lam2 * qv.powf(1.0 - tau + sigma), q2, ((tj - ti) / 2) as u32)
            * q_shifted(-lam2 * qv.powf(1.0 - tau - sigma), q2, ((-ti - tj) / 2) as u32)
    } else {
        let lj = Spin::from_twice(-tj as u32);
        let c = eigenvector_constant(lj, -ti, -tau, q)
            * eigenvector_constant(lj, -tj, -sigma, q);
        cr(c * qv.powf((tj as f64) / 2.0))
            * lambda.powi(tj)
            * q_shifted(lam2 * qv.powf(1.0 - sigma + tau), q2, ((ti - tj) / 2) as u32)
            * q_shifted(-lam2 * qv.powf(1.0 - tau - sigma), q2, ((-ti - tj) / 2) as u32)
    }
}

/// One-dimensional character of the minimal-spin plain matrix element: the
/// weighted one at a square-root-shifted character parameter.
pub fn gen_minimal_character(
    twice_i: i32,
    twice_j: i32,
    tau: f64,
    sigma: f64,
    lambda: Complex64,
    q: QBase,
) -> Complex64 {
    weighted_minimal_character(twice_i, twice_j, tau, sigma, lambda * cr(q.value().sqrt()), q)
}

/// One-dimensional character of the plain matrix element at *any* spin, in
/// closed form: shifted-factorial prefactors, an infinite-product ratio,
/// and a terminating balanced series.
pub fn gen_character(
    l: Spin,
    twice_i: i32,
    twice_j: i32,
    tau: f64,
    sigma: f64,
    lambda: Complex64,
    q: QBase,
) -> Complex64 {
    let qv = q.value();
    let q2 = q.squared();
    let tl = l.twice() as i32;
    let (ti, tj) = (twice_i, twice_j);
    let lmi = ((tl - ti) / 2) as u32;
    let lmj = ((tl - tj) / 2) as u32;
    let sign = if lmi % 2 == 0 { 1.0 } else { -1.0 };
    let cc = eigenvector_constant(l, tj, sigma, q) * eigenvector_constant(l, ti, tau, q);
    let lam2 = lambda * lambda;
    let linv2 = cr(1.0) / lam2;
    let pre = cr(sign * cc
        * qv.powi((lmi as i32) * (lmi as i32 - 1))
        * qv.powf((sigma - tau) * lmi as f64))
        * lambda.powi(-ti);
    let poch1 = q_shifted(
        linv2 * qv.powf(tau - sigma + 2.0 - (tl - ti) as f64),
        q2,
        lmi,
    );
    let poch2 = q_shifted(lam2 * qv.powf(tau - sigma - (tl - ti) as f64), q2, lmj);
    let ratio = q_shifted(-lam2 * qv.powf(tau + sigma), q2, Extent::Infinite)
        / q_shifted(
            -lam2 * qv.powf(tau + sigma + (ti + tj) as f64),
            q2,
            Extent::Infinite,
        );
    let series = basic_hypergeometric(
        &[
            cr(q2.powi(-(lmi as i32))),
            cr(q2.powi(-(lmj as i32))),
            cr(-qv.powf(2.0 * tau - (tl - ti) as f64)),
            cr(-qv.powf(-2.0 * sigma - (tl + tj) as f64)),
        ],
        &[
            cr(q2.powi(-tl)),
            cr(qv.powf(2.0 + tau - sigma - (tl - ti) as f64)) * linv2,
            cr(qv.powf(tau - sigma - (tl - ti) as f64)) * lam2,
        ],
        q2,
        cr(q2.value()),
        Some(lmi),
    )
    .expect("terminating series");
    pre * poch1 * poch2 * ratio * series
}

// ---------------------------------------------- tensor-square expansion --

/// Squared overlaps of a tensor product of two zero-label twisted
/// eigenvectors with the isotypic components of the product module,
/// indexed by the spins of the decomposition; non-negative and summing to
/// one.
pub fn cg_square_coefficients(l1: Spin, l2: Spin, sigma: f64, q: QBase) -> Vec<(Spin, f64)> {
    let fin = ExtendedParameter::Finite(sigma);
    let v1 = eigenvector(l1, 0, fin, q);
    let v2 = eigenvector(l2, 0, fin, q);
    let w = v1.kronecker(&v2);
    let eig = tensor_casimir(l1, l2, q).symmetric_eigen();
    tensor_decomposition_range(l1, l2)
        .into_iter()
        .map(|l| {
            let target = casimir_scalar(l, q);
            let mut c = 0.0;
            for k in 0..eig.eigenvalues.len() {
                if (eig.eigenvalues[k] - target).abs() <= 1e-6 * (1.0 + target.abs()) {
                    let overlap: Complex64 = eig
                        .eigenvectors
                        .column(k)
                        .iter()
                        .zip(w.iter())
                        .map(|(e, x)| e.conj() * x)
                        .sum();
                    c += overlap.norm_sqr();
                }
            }
            (l, c)
        })
        .collect()
}

// ------------------------------------------------------------------ tests --
