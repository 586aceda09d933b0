//! The spinor metric ε at a deformed point and the identities it satisfies.

use qlorentz::params::{make_params, Sign};
use qlorentz::tensor::make_spinor_metric;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = make_params("2", "1/3", Sign::Plus, 60)?;
    let m = make_spinor_metric(&p);

    println!("ε_{{αβ}} at {}:", p.label());
    for a in 0..2 {
        let row: Vec<String> = (0..2).map(|b| format!("{:.12}", m.eps_lower.get(&[a, b]))).collect();
        println!("  [{}]", row.join(", "));
    }

    for c in m.verify(&p)? {
        println!("{c:?}");
    }
    Ok(())
}
