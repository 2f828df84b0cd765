//! Which normal CR 3-manifolds bound a Kähler-Einstein surface.
//!
//! Run with `cargo run --example classify`.

use ke_fillings::cr3::{classify, ClassifyInput, SeifertData};
use ke_fillings::hj::QuotientData;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inputs = [
        ("genus 2, no multiple fibers", ClassifyInput::Seifert(SeifertData::new(2, &[])?)),
        ("genus 1, fiber (3;1)", ClassifyInput::Seifert(SeifertData::new(1, &[(3, 1)])?)),
        ("genus 2, fibers (7;2),(5;2)", ClassifyInput::Seifert(SeifertData::new(2, &[(7, 2), (5, 2)])?)),
        ("S^3/Z_7 of type (7;2)", ClassifyInput::Quotient(QuotientData::new(7, 2)?)),
        ("S^3/Z_5 of type (5;4)", ClassifyInput::Quotient(QuotientData::new(5, 4)?)),
        ("binary icosahedral quotient", ClassifyInput::Polyhedral),
    ];
    for (label, input) in &inputs {
        let v = classify(input)?;
        println!("{label}: {}", v.answer);
        for f in &v.per_fiber {
            println!("    ({}; {}) -> {:?}", f.p, f.q, f.entries);
        }
        if !v.reasons.is_empty() {
            println!("    reasons: {}", v.reasons.join(", "));
        }
    }
    Ok(())
}
