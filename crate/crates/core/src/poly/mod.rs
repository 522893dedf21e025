//! Dense univariate polynomials over a finite field.

mod encode;
mod text;

pub use encode::{canonical_width, decode_canonical, encode_canonical};

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{domain, usage, Result};
use crate::field::{Fe, FieldSpec};

/// A polynomial over a [`FieldSpec`], stored densely with the constant term
/// first and no trailing zero coefficients.
///
/// The zero polynomial has an empty coefficient vector and no degree:
/// [`Poly::degree`] returns `None` for it, so callers must handle it
/// explicitly.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Fe>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly[{}]({})", self.field.q(), self)
    }
}

pub(crate) fn trim(v: &mut Vec<Fe>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Schoolbook product of coefficient slices.
pub(crate) fn mul_slices(field: &FieldSpec, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = field.mul_add(out[i + j], ai, bj);
        }
    }
    out
}

impl Poly {
    /// Builds a polynomial from coefficients (constant first), trimming zeros.
    pub fn new(field: &FieldSpec, mut coeffs: Vec<Fe>) -> Self {
        trim(&mut coeffs);
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Builds a polynomial from integer coefficients mapped into the prime field.
    pub fn from_ints(field: &FieldSpec, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &FieldSpec) -> Self {
        Self::constant(field, Fe::ONE)
    }

    pub fn constant(field: &FieldSpec, c: Fe) -> Self {
        Self::new(field, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(field: &FieldSpec) -> Self {
        Self::monomial(field, Fe::ONE, 1)
    }

    /// `c·x^k`.
    pub fn monomial(field: &FieldSpec, c: Fe, k: usize) -> Self {
        let mut v = vec![Fe::ZERO; k + 1];
        v[k] = c;
        Self::new(field, v)
    }

    /// `x + c`.
    pub fn x_plus(field: &FieldSpec, c: Fe) -> Self {
        Self::new(field, vec![c, Fe::ONE])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Coefficients, constant term first, without trailing zeros.
    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Coefficient of `x^i`; zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading_coeff(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == Fe::ONE
    }

    /// Whether the graph passes through the origin, `f(0) = 0`.
    pub fn is_original(&self) -> bool {
        self.coeff(0).is_zero()
    }

    pub fn is_monic_original(&self) -> bool {
        self.is_monic() && self.is_original()
    }

    fn same_field(&self, other: &Poly) -> bool {
        self.field == other.field
    }

    fn expect_same_field(&self, other: &Poly) {
        assert!(
            self.same_field(other),
            "polynomials over different fields: {:?} and {:?}",
            self.field,
            other.field
        );
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: Fe) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// `self + c`.
    pub fn add_const(&self, c: Fe) -> Poly {
        let mut v = self.coeffs.clone();
        if v.is_empty() {
            v.push(Fe::ZERO);
        }
        v[0] = self.field.add(v[0], c);
        Poly::new(&self.field, v)
    }

    /// `self · x^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Fe::ZERO; k];
        v.extend_from_slice(&self.coeffs);
        Poly::new(&self.field, v)
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut result = Poly::one(&self.field);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Quotient and remainder of division by a nonzero `d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if !self.same_field(d) {
            return Err(usage("division of polynomials over different fields"));
        }
        let f = &self.field;
        let dd = d
            .degree()
            .ok_or_else(|| domain("division by the zero polynomial"))?;
        let inv_lead = f.inv(d.leading_coeff())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = f.mul(rem[top], inv_lead);
            if c.is_zero() {
                continue;
            }
            quot[top - dd] = c;
            for (i, &di) in d.coeffs.iter().enumerate() {
                let slot = top - dd + i;
                rem[slot] = f.sub(rem[slot], f.mul(c, di));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    /// Value at a field element.
    pub fn eval(&self, x: Fe) -> Fe {
        self.field.eval(&self.coeffs, x)
    }

    /// The composition `self ∘ h = self(h)`, by Horner's rule in `h`.
    pub fn compose(&self, h: &Poly) -> Result<Poly> {
        if !self.same_field(h) {
            return Err(usage("composition of polynomials over different fields"));
        }
        let f = &self.field;
        let mut acc: Vec<Fe> = Vec::new();
        for &c in self.coeffs.iter().rev() {
            acc = mul_slices(f, &acc, &h.coeffs);
            if acc.is_empty() {
                acc.push(c);
            } else {
                acc[0] = f.add(acc[0], c);
            }
            trim(&mut acc);
        }
        Ok(Poly::new(f, acc))
    }

    /// `self ∘ (x + c)`.
    pub fn shift(&self, c: Fe) -> Poly {
        self.compose(&Poly::x_plus(&self.field, c))
            .expect("same field by construction")
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Poly::new(f, v)
    }

    /// Coefficients `t_0, …, t_k` of `self` in base `h`: every `t_i` has
    /// degree below `deg h` and `self = Σ t_i·h^i`. The zero polynomial has
    /// an empty expansion.
    pub fn taylor_in_base(&self, h: &Poly) -> Result<Vec<Poly>> {
        if !self.same_field(h) {
            return Err(usage("Taylor expansion over different fields"));
        }
        match h.degree() {
            None | Some(0) => return Err(usage("Taylor base must have degree at least 1")),
            _ => {}
        }
        let mut out = Vec::new();
        let mut rest = self.clone();
        while !rest.is_zero() {
            let (quot, rem) = rest.div_rem(h)?;
            out.push(rem);
            rest = quot;
        }
        Ok(out)
    }

    /// The `g` with `self = g ∘ h` when the Taylor coefficients of `self` in
    /// base `h` are all constants.
    pub fn left_factor(&self, h: &Poly) -> Result<Option<Poly>> {
        let terms = self.taylor_in_base(h)?;
        if terms.iter().any(|t| t.degree().is_some_and(|d| d > 0)) {
            return Ok(None);
        }
        let coeffs = terms.iter().map(|t| t.coeff(0)).collect();
        Ok(Some(Poly::new(&self.field, coeffs)))
    }

    /// Whether `self` lies in `F[x^p]`, equivalently has zero derivative.
    pub fn is_frobenius_composition(&self) -> bool {
        self.derivative().is_zero()
    }

    /// The unique `g` with `g^p = self`, defined when the derivative vanishes.
    pub fn pth_root(&self) -> Result<Poly> {
        if !self.is_frobenius_composition() {
            return Err(domain("p-th root of a polynomial with nonzero derivative"));
        }
        let f = &self.field;
        let p = f.p() as usize;
        let v = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&c| f.pth_power_root(c, p as u64).expect("p is a power of p"))
            .collect();
        Ok(Poly::new(f, v))
    }

    /// Applies the `j`-th Frobenius power to every coefficient.
    pub fn frobenius_poly(&self, j: i64) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.frobenius(c, j)).collect())
    }

    /// Shifts the argument so that the coefficient of `x^(d-1)` vanishes.
    /// Returns `(self ∘ (x - s), s)` with `s = f_{d-1} / (d · lc)`.
    pub fn second_normalize(&self) -> Result<(Poly, Fe)> {
        let f = &self.field;
        let d = self
            .degree()
            .ok_or_else(|| usage("second normalization of the zero polynomial"))?;
        let d_in_field = f.from_int(d as i64);
        if d_in_field.is_zero() {
            return Err(domain(format!(
                "degree {d} vanishes in characteristic {}",
                f.p()
            )));
        }
        if d == 0 {
            return Ok((self.clone(), Fe::ZERO));
        }
        let s = f.div(self.coeff(d - 1), f.mul(d_in_field, self.leading_coeff()))?;
        Ok((self.shift(f.neg(s)), s))
    }
}

/// A linear polynomial `a·x + b` with `a ≠ 0`, a unit under composition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearUnit {
    pub a: Fe,
    pub b: Fe,
}

impl LinearUnit {
    pub fn new(a: Fe, b: Fe) -> Result<Self> {
        if a.is_zero() {
            return Err(domain("linear unit needs a nonzero slope"));
        }
        Ok(LinearUnit { a, b })
    }

    pub fn to_poly(self, field: &FieldSpec) -> Poly {
        Poly::new(field, vec![self.b, self.a])
    }

    /// The compositional inverse `(x - b)/a`.
    pub fn inverse(self, field: &FieldSpec) -> LinearUnit {
        let ia = field.inv(self.a).expect("slope is nonzero");
        LinearUnit {
            a: ia,
            b: field.neg(field.mul(ia, self.b)),
        }
    }
}

/// Moves a decomposition into normal form: the returned `(g*, h*)` has
/// `h*` monic and original and `g* ∘ h* = g ∘ h`.
pub fn normalize_decomposition(g: &Poly, h: &Poly) -> Result<(Poly, Poly)> {
    if !g.same_field(h) {
        return Err(usage("decomposition components over different fields"));
    }
    let f = g.field();
    match h.degree() {
        None | Some(0) => return Err(usage("right component must be nonconstant")),
        _ => {}
    }
    let a = f.inv(h.leading_coeff())?;
    let b = f.neg(f.mul(a, h.coeff(0)));
    let v = LinearUnit::new(a, b)?;
    let h_star = v.to_poly(f).compose(h)?;
    let g_star = g.compose(&v.inverse(f).to_poly(f))?;
    Ok((g_star, h_star))
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.expect_same_field(rhs);
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect();
        Poly::new(f, v)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.expect_same_field(rhs);
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect();
        Poly::new(f, v)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.expect_same_field(rhs);
        Poly::new(
            &self.field,
            mul_slices(&self.field, &self.coeffs, &rhs.coeffs),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    fn p(field: &FieldSpec, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    #[test]
    fn compose_examples() {
        let f3 = gf(3);
        assert_eq!(
            p(&f3, "x^2+x").compose(&p(&f3, "x^2")).unwrap(),
            p(&f3, "x^4+x^2")
        );
        assert_eq!(
            p(&f3, "x^3+x").compose(&p(&f3, "x^3-x")).unwrap(),
            p(&f3, "x^9-x")
        );
        assert_eq!(
            p(&f3, "x^3+x^2").compose(&p(&f3, "x^3-x^2-x")).unwrap(),
            p(&f3, "x^9+x^5-x^4+x^3+x^2")
        );
    }

    #[test]
    fn compose_rejects_mixed_fields() {
        let a = p(&gf(3), "x^2");
        let b = p(&gf(5), "x^2");
        assert!(matches!(a.compose(&b), Err(crate::Error::Usage(_))));
    }

    #[test]
    fn derivative_examples() {
        let f3 = gf(3);
        assert_eq!(p(&f3, "x^9-x").derivative(), p(&f3, "-1"));
        assert!(p(&f3, "x^3").derivative().is_zero());
        assert_eq!(p(&f3, "x^3+x^2").derivative(), p(&f3, "2*x"));
    }

    #[test]
    fn normalize_examples() {
        let f5 = gf(5);
        let g = p(&f5, "x^2");
        let h = p(&f5, "2*x^2+1");
        let (gs, hs) = normalize_decomposition(&g, &h).unwrap();
        assert!(hs.is_monic_original());
        assert_eq!(gs.compose(&hs).unwrap(), g.compose(&h).unwrap());
        let h2 = p(&f5, "x^3+2*x");
        assert_eq!(normalize_decomposition(&g, &h2).unwrap(), (g.clone(), h2));
        assert!(normalize_decomposition(&g, &p(&f5, "3")).is_err());
    }

    #[test]
    fn second_normalize_examples() {
        let f5 = gf(5);
        let (g, s) = p(&f5, "x^4+2*x^3").second_normalize().unwrap();
        assert_eq!(s, f5.from_int(3));
        assert!(g.coeff(3).is_zero());
        assert_eq!(g, p(&f5, "x^4+2*x^3").shift(f5.from_int(-3)));
        let (same, zero) = p(&f5, "x^4+x").second_normalize().unwrap();
        assert_eq!((same, zero), (p(&f5, "x^4+x"), Fe::ZERO));
        assert!(matches!(
            p(&gf(3), "x^9+x").second_normalize(),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn taylor_examples() {
        let f5 = gf(5);
        let h = p(&f5, "x^2+3*x");
        let f = &h.pow(2) + &h.scale(f5.from_int(2));
        let t = f.taylor_in_base(&h).unwrap();
        let consts: Vec<Fe> = t.iter().map(|c| c.coeff(0)).collect();
        assert_eq!(consts, vec![Fe::ZERO, f5.from_int(2), Fe::ONE]);

        let f3 = gf(3);
        let g = p(&f3, "x^9+x^5+x")
            .left_factor(&p(&f3, "x^3-x^2+x"))
            .unwrap();
        assert_eq!(g, Some(p(&f3, "x^3+x^2+x")));

        let f3b = p(&f3, "x^3+1");
        let t = f3b.taylor_in_base(&p(&f3, "x^2")).unwrap();
        assert_eq!(t[1], p(&f3, "x"));
        assert_eq!(f3b.left_factor(&p(&f3, "x^2")).unwrap(), None);
    }

    #[test]
    fn pth_root_examples() {
        let f3 = gf(3);
        assert_eq!(p(&f3, "x^9").pth_root().unwrap(), p(&f3, "x^3"));
        assert_eq!(p(&f3, "x^6+x^3+1").pth_root().unwrap(), p(&f3, "x^2+x+1"));
        assert!(p(&gf(2), "x^2+x").pth_root().is_err());
    }

    #[test]
    fn frobenius_composition_examples() {
        let f3 = gf(3);
        assert!(!p(&f3, "x^9-x").is_frobenius_composition());
        assert!(p(&f3, "x^9").is_frobenius_composition());
        let f2 = gf(2);
        assert!(p(&f2, "x^3+x").pow(2).is_frobenius_composition());
    }

    #[test]
    fn frobenius_poly_examples() {
        let f4 = gf(4);
        let alpha = f4.parse_element("[0,1]").unwrap();
        let h = Poly::new(&f4, vec![Fe::ONE, alpha]);
        let expected = Poly::new(&f4, vec![Fe::ONE, f4.parse_element("[1,1]").unwrap()]);
        assert_eq!(h.frobenius_poly(1), expected);
        let f7 = gf(7);
        let h7 = p(&f7, "3*x^4+x+5");
        assert_eq!(h7.frobenius_poly(5), h7);
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        let f = gf(7);
        assert_eq!(Poly::zero(&f).degree(), None);
        assert_eq!(p(&f, "3").degree(), Some(0));
        assert!(Poly::zero(&f)
            .taylor_in_base(&p(&f, "x"))
            .unwrap()
            .is_empty());
    }
}
