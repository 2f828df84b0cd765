//! Calabi-ansatz Einstein profiles on the resolution of ℂⁿ/ℤ_k, with the
//! coordinate quadratures and completeness diagnostics.
//!
//! Run with `cargo run --example calabi`.

use ke_fillings::calabi::{
    check_einstein_identity, completeness_report, default_tau0, emit_profile_csv, paper_profile, positive_root,
    solve_profile,
};
use ke_fillings::exact_arith::{int, rat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, k) in [(2, 3), (3, 5), (4, 9)] {
        let p = paper_profile(n, k)?;
        let tau0 = default_tau0(&p)?;
        let report = completeness_report(&p, tau0)?;
        println!("(n, k) = ({n}, {k}): phi = {}", p.phi());
        println!("  identity {}, s* = {:.10}", check_einstein_identity(&p), positive_root(&p)?);
        println!(
            "  c = {:.10}, disc radius {:.10}, beta {:.6} (expected {:.6})",
            report.c,
            report.disc_radius,
            report.fitted_rate.unwrap_or(f64::NAN),
            p.asymptotic_rate().unwrap_or(f64::NAN),
        );
    }

    // k = n: Ricci-flat, cone-like end with infinite t-range.
    let flat = solve_profile(3, 3, int(0), rat(-1, 3))?;
    let report = completeness_report(&flat, 0.5)?;
    println!("Ricci-flat (3, 3): identity {}, c = {}", check_einstein_identity(&flat), report.c);

    let p = paper_profile(2, 3)?;
    let table = emit_profile_csv(&p, default_tau0(&p)?, 6)?;
    print!("{}", table.to_csv());
    Ok(())
}
