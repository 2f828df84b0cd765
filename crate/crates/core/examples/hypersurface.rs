//! Weighted hypersurface singularities: property S-E, the obstruction test
//! and the discrepancy ledgers of the three blow-up families.
//!
//! Run with `cargo run --example hypersurface`.

use ke_fillings::hypersurface::{blowup_ledger, ke_obstruction, BlowupFamily, WeightedHypersurface};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for exps in [[2u32, 2, 2, 3], [2, 2, 2, 7], [3, 3, 3, 3], [5, 5, 5, 5]] {
        let f = WeightedHypersurface::brieskorn(&exps)?;
        let r = f.ke_obstruction();
        println!(
            "z^{exps:?}: weights {:?}, deg {}, |w| = {}, S-E {}, verdict {}",
            f.weights(),
            f.degree(),
            r.weight_sum,
            r.se_property,
            r.verdict
        );
    }
    let quotient_like = ke_obstruction(&[3, 3, 3, 2], 6, false);
    println!("same data, not Gorenstein: {}", quotient_like.verdict);

    for (family, n, d, k) in [
        (BlowupFamily::Ex1, 3, 4, 9),
        (BlowupFamily::Ex1, 3, 4, 10),
        (BlowupFamily::Ex2, 3, 3, 12),
        (BlowupFamily::Ex3, 2, 1, 13),
    ] {
        let l = blowup_ledger(family, n, d, k)?;
        println!(
            "{family}(n={n}, d={d}, k={k}): weight {:?}, {} steps, smooth end {}, a_i = {:?}",
            l.step_weights, l.steps, l.smooth_end, l.discrepancies
        );
    }
    if let Err(e) = blowup_ledger(BlowupFamily::Ex2, 3, 2, 12) {
        println!("Ex2(3, 2, 12): {e}");
    }
    Ok(())
}
