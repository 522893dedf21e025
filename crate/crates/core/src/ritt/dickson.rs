use crate::field::{Fe, FieldSpec};
use crate::poly::Poly;

/// The Dickson polynomial `T_n(x, z)` for a fixed second argument `z`,
/// from `T_0 = 2`, `T_1 = x` and `T_n = x·T_{n-1} - z·T_{n-2}`.
pub fn dickson(field: &FieldSpec, n: usize, z: Fe) -> Poly {
    let two = Poly::constant(field, field.from_int(2));
    let x = Poly::x(field);
    if n == 0 {
        return two;
    }
    let (mut prev, mut cur) = (two, x.clone());
    for _ in 1..n {
        let next = &(&x * &cur) - &prev.scale(z);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `T_n(a, z)`.
pub fn dickson_value(field: &FieldSpec, n: usize, a: Fe, z: Fe) -> Fe {
    let two = field.from_int(2);
    if n == 0 {
        return two;
    }
    let (mut prev, mut cur) = (two, a);
    for _ in 1..n {
        let next = field.sub(field.mul(a, cur), field.mul(z, prev));
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}
