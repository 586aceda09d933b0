//! Derived constants d, Q and a at the sample points, both root branches,
//! and the parameter values that are rejected.

use qlorentz::cli::default_points;
use qlorentz::params::{make_params, Sign};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:<14} {:>10} {:>10} {:>14} {:>14}", "point", "d", "Q", "a (+)", "a (-)");
    for pt in default_points() {
        let plus = make_params(pt.q.clone(), pt.r.clone(), Sign::Plus, 60)?;
        let minus = make_params(pt.q.clone(), pt.r.clone(), Sign::Minus, 60)?;
        println!(
            "{:<14} {:>10.6} {:>10.6} {:>14.10} {:>14.10}",
            format!("({}, {})", pt.q, pt.r),
            plus.d.to_f64(),
            plus.big_q.to_f64(),
            plus.a.to_f64(),
            minus.a.to_f64(),
        );
    }

    // d = 1 - r^2 vanishes, and Q < 2 would need a complex root.
    for (q, r) in [("2", "1"), ("2", "-1")] {
        match make_params(q, r, Sign::Plus, 60) {
            Ok(_) => println!("({q}, {r}) accepted"),
            Err(e) => println!("({q}, {r}) rejected: {e}"),
        }
    }
    Ok(())
}
