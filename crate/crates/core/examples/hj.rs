//! Hirzebruch-Jung strings of cyclic quotient singularities.
//!
//! Run with `cargo run --example hj -- 7 5` (defaults to (5, 2)).

use ke_fillings::hj::{hj_evaluate, hj_expand, is_negative_definite, QuotientData};

fn main() {
    let args: Vec<i64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (p, q) = match args.as_slice() {
        [p, q] => (*p, *q),
        _ => (5, 2),
    };
    let data = match QuotientData::new(p, q) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let s = hj_expand(data);
    println!("{p}/{q} = [{}]", s.entries.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "));
    println!("stabilizers C_0..C_{}: {:?}", s.len() + 1, s.stabilizers);
    println!("intersection matrix:");
    for row in s.intersection() {
        println!("  {row:?}");
    }
    println!("negative definite: {}", is_negative_definite(&s.intersection()).unwrap());
    println!("all curves with C^2 <= -3: {}", s.ke_admissible());
    println!("round trip: {:?}", hj_evaluate(&s.entries).map(|d| (d.p(), d.q())));

    let admissible = (2..=30)
        .flat_map(|p| (1..p).map(move |q| (p, q)))
        .filter_map(|(p, q)| QuotientData::new(p, q).ok())
        .filter(|d| hj_expand(*d).ke_admissible())
        .count();
    println!("admissible types with p <= 30: {admissible}");
}
