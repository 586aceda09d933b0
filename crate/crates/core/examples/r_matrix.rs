//! R^± built from the spinor metric: inverse pair, Hecke relation,
//! Yang-Baxter in braid form and the eigenvalue spectrum.

use qlorentz::check::all_passed;
use qlorentz::params::{make_params, Sign};
use qlorentz::rmat::{make_r, verify_all};
use qlorentz::tensor::make_spinor_metric;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (q, r) in [("1", "0"), ("2", "1/3")] {
        let p = make_params(q, r, Sign::Plus, 60)?;
        let m = make_spinor_metric(&p);
        let rm = make_r(&p, &m)?;
        let checks = verify_all(&p, &m, &rm)?;
        println!("{} ({} checks, all pass: {})", p.label(), checks.len(), all_passed(&checks));
        for c in &checks {
            println!("  {c:?}");
        }
    }
    Ok(())
}
