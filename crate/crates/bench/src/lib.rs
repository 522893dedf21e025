//! Shared inputs for the kernel benchmarks.

use polycount::{FieldSpec, Poly};

/// A field together with a few fixed composites over it.
pub struct Fixture {
    pub field: FieldSpec,
    pub g: Poly,
    pub h: Poly,
    pub f: Poly,
}

fn fixture(q: u64, g: &[i64], h: &[i64]) -> Fixture {
    let field = FieldSpec::with_order(q).expect("valid order");
    let g = Poly::from_ints(&field, g);
    let h = Poly::from_ints(&field, h);
    let f = g.compose(&h).expect("same field");
    Fixture { field, g, h, f }
}

/// Degree 6 over GF(7) with a tame 3 ∘ 2 split.
pub fn tame_gf7() -> Fixture {
    fixture(7, &[0, 3, 2, 1], &[0, 5, 1])
}

/// Degree 15 over GF(101), split 5 ∘ 3.
pub fn tame_gf101() -> Fixture {
    fixture(101, &[0, 17, 0, 4, 9, 1], &[0, 33, 1, 1])
}

/// Degree 9 over GF(3) whose left component has degree p.
pub fn wild_gf3() -> Fixture {
    fixture(3, &[0, 1, 2, 1], &[0, 1, 1, 1])
}

/// Degree 8 over GF(16), split 2 ∘ 4.
pub fn wild_gf16() -> Fixture {
    let field = FieldSpec::with_order(16).expect("valid order");
    let a = field.generator();
    let g = Poly::new(&field, vec![field.from_int(0), a, field.from_int(1)]);
    let h = Poly::new(
        &field,
        vec![
            field.from_int(0),
            field.pow(a, 3),
            a,
            field.from_int(0),
            field.from_int(1),
        ],
    );
    let f = g.compose(&h).expect("same field");
    Fixture { field, g, h, f }
}

/// Every element pair of a small field, for the multiplication kernel.
pub fn element_pairs(field: &FieldSpec) -> Vec<(polycount::Fe, polycount::Fe)> {
    field
        .elements()
        .flat_map(|a| field.elements().map(move |b| (a, b)))
        .collect()
}
