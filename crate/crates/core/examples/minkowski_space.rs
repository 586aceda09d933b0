//! Coordinates and spinors as module symbols: moving algebra elements past
//! them, braiding two symbols, and centrality of the norm G^{IJ} X_I X_J.

use qlorentz::frt::{AlgebraElement, CrossRelations, Functionals, Gen, NormalFormEngine};
use qlorentz::lorentz::{make_lambda, BigFunctionals};
use qlorentz::minkspace::{verify_minkowski, Bimodule, ModuleSymbol};
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
    let eng = NormalFormEngine::new(&p, &m, &rm, CrossRelations::matched(Sign::Plus), 4)?;
    let lg = make_lambda(&p, &m, &ss, &mm, &eng)?;
    let bm = Bimodule::new(&p, &m, &fun, &bf, &lg);

    let x0 = ModuleSymbol::coordinate(Sign::Plus, 0);
    let a = AlgebraElement::gen(Gen::undotted(0, 0), p.prec);
    println!("{x0} · M1^1 =");
    for (sym, coef) in bm.push_left(x0, &a) {
        if !coef.is_empty() {
            println!("  ({:?}) {sym}", coef);
        }
    }

    let (t, x3) = (ModuleSymbol::spinor(Sign::Plus, 0), ModuleSymbol::coordinate(Sign::Plus, 3));
    println!("{t} {x3} =");
    for (first, second, c) in bm.braid(t, x3) {
        println!("  ({c:.8}) {first} {second}");
    }

    for c in verify_minkowski(&bm, &mm, &eng, 4, 11)? {
        println!("{c:?}");
    }
    Ok(())
}
