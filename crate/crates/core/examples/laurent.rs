//! Exact Laurent-polynomial arithmetic in `s`.
//!
//! Run with `cargo run --example laurent`.

use ke_fillings::exact_arith::{rat, LaurentPolynomial};

fn main() {
    // φ = s/3 + 4/9 s² − 7/6 s⁻¹
    let phi = LaurentPolynomial::from_terms([(1, rat(1, 3)), (2, rat(4, 9)), (-1, rat(-7, 6))]);
    println!("phi      = {phi}");
    println!("phi'     = {}", phi.derivative());
    println!("s * phi  = {}", &phi * &LaurentPolynomial::s());
    println!("phi - phi is zero: {}", (&phi - &phi).is_zero());

    let s = rat(3, 2);
    println!("phi(3/2) = {} (exact)", phi.eval_exact(&s).unwrap());
    println!("phi(1.5) = {} (float)", phi.to_float().eval(1.5));
    println!("sign changes (Descartes bound on positive roots): {}", phi.positive_sign_changes());

    match LaurentPolynomial::monomial(rat(1, 1), -2).eval_exact(&rat(0, 1)) {
        Ok(v) => println!("unexpected value {v}"),
        Err(e) => println!("s^-2 at 0: {} ({})", e, e.code()),
    }
}
