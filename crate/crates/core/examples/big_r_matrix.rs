//! The functionals F_± on the algebra and the 16×16 matrices ℛ^± they
//! produce from Λ. The last check shows ℛ^+ℛ^- is not the identity.

use qlorentz::frt::{CrossRelations, Functionals, NormalFormEngine};
use qlorentz::lorentz::{make_big_r, make_lambda, verify_big_r, verify_functional_laws, BigFunctionals};
use qlorentz::params::{make_params, Sign};
use qlorentz::rmat::make_r;
use qlorentz::sigma::{make_metric, make_sigma};
use qlorentz::tensor::make_spinor_metric;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = make_params("2", "1/3", Sign::Plus, 60)?;
    let m = make_spinor_metric(&p);
    let rm = make_r(&p, &m)?;
    let ss = make_sigma(&p, &m, &rm)?;
    let mm = make_metric(&p, &m, &ss)?;
    let fun = Functionals::new(&p, &m, &rm);
    let bf = BigFunctionals::new(&p, &m, &ss, &fun);

    for c in verify_functional_laws(&p, &m, &mm, &bf) {
        println!("{c:?}");
    }

    let eng = NormalFormEngine::new(&p, &m, &rm, CrossRelations::matched(Sign::Plus), 2)?;
    let lg = make_lambda(&p, &m, &ss, &mm, &eng)?;
    let br = make_big_r(&lg, &bf);
    let r = br.matrix(Sign::Plus);
    println!("ℛ^+ trace = {:.12}", r.trace());
    for c in verify_big_r(&p, &mm, &br, &bf, &lg) {
        println!("{} {c:?}", if c.passed() { "ok  " } else { "FAIL" });
    }
    Ok(())
}
