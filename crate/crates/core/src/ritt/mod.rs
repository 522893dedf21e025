//! Distinct-degree collisions `g ∘ h = g* ∘ h*` with `deg g = deg h* = m`
//! and `deg h = deg g* = l`: the exponential and Dickson normal forms,
//! their recovery from the composite, and Frobenius collisions.

mod dickson;
mod recover;

pub use dickson::{dickson, dickson_value};
pub use recover::{
    first_case_recover, mutual_exclusion_check, second_case_recover, Classification,
    FirstCaseRecovery, RecoveryFailed,
};

use num_integer::Integer;
use serde::Serialize;

use crate::decompose::NormalDecomposition;
use crate::error::{domain, usage, Result};
use crate::field::{Fe, FieldSpec};
use crate::poly::Poly;

/// A collision `f = g ∘ h = g* ∘ h*` of monic original polynomials with
/// `deg h = deg g* = l` and `deg g = deg h* = m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionTuple {
    f: Poly,
    g: Poly,
    h: Poly,
    g_star: Poly,
    h_star: Poly,
}

impl CollisionTuple {
    /// Checks that both compositions agree and every component is monic
    /// original with the crossed degree pattern.
    pub fn new(g: Poly, h: Poly, g_star: Poly, h_star: Poly) -> Result<Self> {
        for c in [&g, &h, &g_star, &h_star] {
            if !c.is_monic_original() || !c.degree().is_some_and(|d| d >= 2) {
                return Err(usage(format!(
                    "collision component {c} is not monic original"
                )));
            }
        }
        if g.degree() != h_star.degree() || h.degree() != g_star.degree() {
            return Err(usage("collision components do not have crossed degrees"));
        }
        let f = g.compose(&h)?;
        if g_star.compose(&h_star)? != f {
            return Err(usage(format!(
                "({g}) o ({h}) and ({g_star}) o ({h_star}) differ"
            )));
        }
        Ok(CollisionTuple {
            f,
            g,
            h,
            g_star,
            h_star,
        })
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }
    pub fn g(&self) -> &Poly {
        &self.g
    }
    pub fn h(&self) -> &Poly {
        &self.h
    }
    pub fn g_star(&self) -> &Poly {
        &self.g_star
    }
    pub fn h_star(&self) -> &Poly {
        &self.h_star
    }

    /// `(l, m) = (deg h, deg h*)`.
    pub fn split(&self) -> (usize, usize) {
        (self.h.degree().unwrap(), self.h_star.degree().unwrap())
    }
}

impl Serialize for CollisionTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CollisionTuple", 5)?;
        st.serialize_field("f", &self.f.to_string())?;
        st.serialize_field("g", &self.g.to_string())?;
        st.serialize_field("h", &self.h.to_string())?;
        st.serialize_field("g_star", &self.g_star.to_string())?;
        st.serialize_field("h_star", &self.h_star.to_string())?;
        st.end()
    }
}

/// Parameters of the exponential form: `f` is `x^(kl)·w(x^l)^l` moved to
/// the origin after the shift `x ↦ x + shift`, with `m = s·l + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstCaseParams {
    pub w: Poly,
    pub shift: Fe,
    pub k: usize,
    pub s: usize,
}

/// Parameters of the Dickson form `f = T_n(x + shift, z) - T_n(shift, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SecondCaseParams {
    pub z: Fe,
    pub shift: Fe,
}

fn coprime_split(l: usize, m: usize) -> Result<()> {
    if !(m > l && l >= 2 && l.gcd(&m) == 1) {
        return Err(usage(format!(
            "need coprime degrees m > l >= 2, got l = {l}, m = {m}"
        )));
    }
    Ok(())
}

/// `(k, s)` with `m = s·l + k` and `1 ≤ k < l`.
fn split_m(l: usize, m: usize) -> (usize, usize) {
    (m % l, m / l)
}

/// Why `(w, l, m)` fails to give a genuine exponential-form collision:
/// `None` when `p ∤ l` and `k·w + l·x·w' ≠ 0`.
pub fn first_case_violation(w: &Poly, l: usize, m: usize) -> Option<&'static str> {
    let field = w.field();
    if l % field.p() as usize == 0 {
        return Some("p | l");
    }
    let (k, _) = split_m(l, m);
    let lhs =
        &w.scale(field.from_int(k as i64)) + &w.derivative().shl(1).scale(field.from_int(l as i64));
    lhs.is_zero().then_some("k*w + l*x*w' = 0")
}

/// The exponential-form collision for `(w, shift)`, without checking that
/// `w` is a nondegenerate witness.
pub fn first_case_components(l: usize, m: usize, w: &Poly, shift: Fe) -> Result<CollisionTuple> {
    coprime_split(l, m)?;
    let field = w.field();
    let (k, s) = split_m(l, m);
    if w.degree() != Some(s) || !w.is_monic() {
        return Err(usage(format!("w = {w} must be monic of degree {s}")));
    }
    let a = shift;
    let a_l = field.pow(a, l as u64);
    let w_al = w.eval(a_l);
    let big_a = field.mul(field.pow(a, (k * l) as u64), field.pow(w_al, l as u64));
    let x_l = Poly::monomial(field, Fe::ONE, l);
    let w_l = w.pow(l as u64);
    let xk_wl = w_l.shl(k);
    let xk_w_xl = w.compose(&x_l)?.shl(k);

    let g = xk_wl.shift(a_l).add_const(field.neg(big_a));
    let h = x_l.shift(a).add_const(field.neg(a_l));
    let c = field.mul(field.pow(a, k as u64), w_al);
    let g_star = x_l.shift(c).add_const(field.neg(big_a));
    let h_star = xk_w_xl.shift(a).add_const(field.neg(c));
    CollisionTuple::new(g, h, g_star, h_star)
}

/// The exponential-form collision for a nondegenerate witness `(w, shift)`.
///
/// Errors with a domain error naming the violated condition when `p | l`
/// or `k·w + l·x·w' = 0`.
pub fn first_case_build(l: usize, m: usize, w: &Poly, shift: Fe) -> Result<CollisionTuple> {
    coprime_split(l, m)?;
    if let Some(clause) = first_case_violation(w, l, m) {
        return Err(domain(format!("degenerate exponential witness: {clause}")));
    }
    first_case_components(l, m, w, shift)
}

/// The Dickson-form collision for `z ≠ 0` and `p ∤ lm`.
pub fn second_case_build(
    field: &FieldSpec,
    l: usize,
    m: usize,
    params: SecondCaseParams,
) -> Result<CollisionTuple> {
    coprime_split(l, m)?;
    let p = field.p() as usize;
    if (l * m) % p == 0 {
        return Err(domain(format!(
            "characteristic {p} divides l*m = {}",
            l * m
        )));
    }
    let SecondCaseParams { z, shift: a } = params;
    if z.is_zero() {
        return Err(domain("Dickson parameter z must be nonzero"));
    }
    let n = l * m;
    let t_n_a = dickson_value(field, n, a, z);
    let t_l_a = dickson_value(field, l, a, z);
    let t_m_a = dickson_value(field, m, a, z);
    let g = dickson(field, m, field.pow(z, l as u64))
        .shift(t_l_a)
        .add_const(field.neg(t_n_a));
    let h = dickson(field, l, z).shift(a).add_const(field.neg(t_l_a));
    let g_star = dickson(field, l, field.pow(z, m as u64))
        .shift(t_m_a)
        .add_const(field.neg(t_n_a));
    let h_star = dickson(field, m, z).shift(a).add_const(field.neg(t_m_a));
    CollisionTuple::new(g, h, g_star, h_star)
}

/// For `w` monic of degree `s` and `m = s·l + k`: when `p ∤ l` and
/// `k·w + l·x·w' = 0`, returns the monic `u` with `w = x^r·u^p`,
/// `r = s mod p`; otherwise `None`.
pub fn degenerate_witness_test(w: &Poly, k: usize, l: usize) -> Option<Poly> {
    let field = w.field();
    let p = field.p() as usize;
    let s = w.degree()?;
    if l % p == 0 {
        return None;
    }
    let lhs =
        &w.scale(field.from_int(k as i64)) + &w.derivative().shl(1).scale(field.from_int(l as i64));
    if !lhs.is_zero() {
        return None;
    }
    let r = s % p;
    if w.coeffs()[..r].iter().any(|c| !c.is_zero()) {
        return None;
    }
    let v = Poly::new(field, w.coeffs()[r..].to_vec());
    v.pth_root().ok()
}

/// The two normal decompositions of `x^(p^j) ∘ h = φ_j(h) ∘ x^(p^j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusCollision {
    #[serde(serialize_with = "ser_poly")]
    pub f: Poly,
    pub left: NormalDecomposition,
    pub right: NormalDecomposition,
}

fn ser_poly<S: serde::Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl FrobeniusCollision {
    /// Both sides coincide, which happens exactly when `h = x^(p^j)`.
    pub fn is_degenerate(&self) -> bool {
        self.left == self.right
    }
}

/// Builds the collision `x^(p^j) ∘ h = φ_j(h) ∘ x^(p^j)` for monic original
/// `h` of degree at least 2 and `j ≥ 1`.
pub fn frobenius_collision(h: &Poly, j: u32) -> Result<FrobeniusCollision> {
    if j == 0 {
        return Err(usage("Frobenius collision needs j >= 1"));
    }
    if !h.is_monic_original() || !h.degree().is_some_and(|d| d >= 2) {
        return Err(usage(format!("{h} is not monic original of degree >= 2")));
    }
    let field = h.field();
    let pj = (field.p() as usize).pow(j);
    let xp = Poly::monomial(field, Fe::ONE, pj);
    let f = xp.compose(h)?;
    let left = NormalDecomposition::new(&f, xp.clone(), h.clone())?;
    let right = NormalDecomposition::new(&f, h.frobenius_poly(j as i64), xp)?;
    Ok(FrobeniusCollision { f, left, right })
}
