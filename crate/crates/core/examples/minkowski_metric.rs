//! Quantum Pauli matrices, the metrics G_± they trace out, and the
//! entry-by-entry comparison with the displayed shorthand matrices.

use qlorentz::params::{make_params, Sign};
use qlorentz::rmat::make_r;
use qlorentz::sigma::fixture::{compare, MetricFixture};
use qlorentz::sigma::{make_metric, make_sigma};
use qlorentz::tensor::make_spinor_metric;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixture = MetricFixture::builtin();
    for (q, r) in [("1", "0"), ("2", "0"), ("2", "1/3")] {
        let p = make_params(q, r, Sign::Plus, 60)?;
        let m = make_spinor_metric(&p);
        let rm = make_r(&p, &m)?;
        let ss = make_sigma(&p, &m, &rm)?;
        let mm = make_metric(&p, &m, &ss)?;

        println!("\n{}", p.label());
        for s in Sign::BOTH {
            println!("G_{s}^{{IJ}}");
            let g = mm.upper(s);
            for i in 0..4 {
                let row: Vec<String> = (0..4).map(|j| format!("{:>24}", format!("{:.8}", g.get(&[i, j])))).collect();
                println!("  {}", row.join(""));
            }
            let entries = compare(&p, &fixture, s, mm.upper(s), mm.lower(s))?;
            let bad: Vec<_> = entries.iter().filter(|e| !e.matches).collect();
            println!("  fixture: {} of {} entries match", entries.len() - bad.len(), entries.len());
            for e in bad {
                println!("    {} [{},{}] {} displayed {} computed {}", e.matrix, e.row, e.col, e.expression, e.displayed, e.computed);
            }
        }
    }
    Ok(())
}
