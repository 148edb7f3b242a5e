//! Builds F_16 as F_2[t]/(g), walks its subfields and applies Frobenius.
//!
//!     cargo run --example finite_field_tour

use partial_zeta::build_field;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f16 = build_field(2, 1, 4)?;
    println!("F_16 = F_2[t]/(g), g coefficients from t^0: {:?}", f16.modulus());

    let t = f16.element(&[0, 1, 0, 0])?;
    for e in 0..=4 {
        println!("Frob^{e}(t) = {}", f16.render(f16.frobenius(t, e)));
    }

    for e in [1, 2, 4] {
        let sub = f16.enumerate_subfield(e)?;
        let shown: Vec<String> = sub.iter().take(4).map(|&x| f16.render(x)).collect();
        println!("F_{{2^{e}}} has {} elements, first: {}", sub.len(), shown.join(", "));
    }

    let zero_trace = f16
        .elements()
        .into_iter()
        .filter(|&x| f16.absolute_trace(x) == 0)
        .count();
    println!("{zero_trace} of 16 elements have trace 0 down to F_2");

    // F_4 over itself extended to degree 3: q = 4, N = 3
    let f64_ = build_field(2, 2, 3)?;
    let inv = f64_.invert(t_of(&f64_)?).expect("t is a unit");
    println!("in F_64: 1/t = {}", f64_.render(inv));
    Ok(())
}

fn t_of(f: &partial_zeta::FieldDescriptor) -> partial_zeta::Result<partial_zeta::FieldElement> {
    let mut c = vec![0; f.degree() as usize];
    c[1] = 1;
    f.element(&c)
}
