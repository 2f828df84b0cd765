//! Radial Monge-Ampère solve on the ball: the hyperbolic oracle, a grid
//! refinement study and a manufactured boundary order.
//!
//! Run with `cargo run --release --example monge_ampere`.

use ke_fillings::ma_radial::{
    asymptotic_order_fit, hyperbolic_test_problem, manufactured_problem, manufactured_solution, newton_solve,
};

fn sup_error(grid: &[f64], u: &[f64], exact: impl Fn(f64) -> f64) -> f64 {
    grid.iter().zip(u).fold(0.0, |m, (&r, &v)| m.max((v - exact(r)).abs()))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eps = 1e-3;
    for n in [2, 3] {
        println!("n = {n}");
        let mut previous: Option<f64> = None;
        for intervals in [128, 256, 512, 1024] {
            let problem = hyperbolic_test_problem(n, eps, intervals)?;
            let sol = newton_solve(&problem, 1e-9, 30)?;
            let err = sup_error(problem.grid(), &sol.u, |r| 1.0 - r);
            let order = previous.map_or(String::new(), |e| format!(", order {:.2}", (e / err).log2()));
            println!("  N = {intervals:5}: {} iterations, error {err:.3e}{order}", sol.iterations);
            previous = Some(err);
        }
    }

    for r in [1.0, 2.0, 3.0] {
        let problem = manufactured_problem(2, eps, 512, r)?;
        let sol = newton_solve(&problem, 1e-9, 30)?;
        let err = sup_error(problem.grid(), &sol.u, |x| manufactured_solution(r, x));
        println!(
            "manufactured (1-rho)^{r}/{r}: fitted order {:.4}, error {err:.2e}",
            asymptotic_order_fit(&sol, &problem)?
        );
    }
    Ok(())
}
