//! Λ_L^K built three ways, its Hopf structure, orthogonality with G_s,
//! and the classical character: a spin matrix evaluates Λ to a Lorentz matrix.

use qlorentz::frt::{CrossRelations, NormalFormEngine};
use qlorentz::linalg::CMatrix;
use qlorentz::lorentz::{make_lambda, verify_lambda, verify_orthogonality};
use qlorentz::params::{make_params, Sign};
use qlorentz::rmat::make_r;
use qlorentz::scalar::Scalar;
use qlorentz::sigma::{make_metric, make_sigma};
use qlorentz::tensor::make_spinor_metric;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = make_params("2", "1/3", Sign::Plus, 60)?;
    let m = make_spinor_metric(&p);
    let rm = make_r(&p, &m)?;
    let ss = make_sigma(&p, &m, &rm)?;
    let mm = make_metric(&p, &m, &ss)?;

    for s in Sign::BOTH {
        let eng = NormalFormEngine::new(&p, &m, &rm, CrossRelations::matched(s), 4)?;
        let lg = make_lambda(&p, &m, &ss, &mm, &eng)?;
        println!("cross relations {s}: Λ_0^0 has {} terms", lg.get(0, 0).terms().len());
        for c in verify_lambda(&lg, &p, &m, &ss, &mm, &eng)? {
            println!("  {c:?}");
        }
        for c in verify_orthogonality(&lg, &p, &mm, &eng)? {
            println!("  {c:?}");
        }
    }

    // At q = 1, r = 0 the generators commute and Λ(A) is the vector
    // representation of A in SL(2,C).
    let p = make_params("1", "0", Sign::Plus, 30)?;
    let m = make_spinor_metric(&p);
    let rm = make_r(&p, &m)?;
    let ss = make_sigma(&p, &m, &rm)?;
    let mm = make_metric(&p, &m, &ss)?;
    let eng = NormalFormEngine::new(&p, &m, &rm, CrossRelations::matched(Sign::Plus), 2)?;
    let lg = make_lambda(&p, &m, &ss, &mm, &eng)?;
    let c = |re: i64, im: i64| Scalar::new(p.real(re), p.real(im));
    let a = CMatrix::from_vec(2, 2, vec![c(1, 1), c(1, 0), c(0, 2), c(1, 0)]);
    let det = a.get(0, 0) * a.get(1, 1) - a.get(0, 1) * a.get(1, 0);
    let a = a.scale(&det.sqrt().recip());
    let lam = lg.character(&a, &a.conj());
    println!("\nclassical Λ(A):");
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| format!("{:>12.6}", lam.get(i, j).re().to_f64())).collect();
        println!("  {}", row.join(""));
    }
    Ok(())
}
