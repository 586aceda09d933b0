//! The algebra generated by M and Ṁ: normal forms, the Hopf structure and
//! the status of the pairwise rewriting certificate.

use qlorentz::frt::checks::verify_algebra;
use qlorentz::frt::{antipode, coproduct, counit, AlgebraElement, CrossRelations, Gen, NormalFormEngine};
use qlorentz::params::{make_params, Sign};
use qlorentz::rmat::make_r;
use qlorentz::tensor::make_spinor_metric;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = make_params("2", "1/3", Sign::Plus, 60)?;
    let m = make_spinor_metric(&p);
    let rm = make_r(&p, &m)?;

    let eng = NormalFormEngine::new(&p, &m, &rm, CrossRelations::matched(Sign::Plus), 4)?;

    // Products of two generators that are not already in normal form.
    for g in Gen::all() {
        for h in Gen::all() {
            let x = AlgebraElement::gen(g, p.prec).mul(&AlgebraElement::gen(h, p.prec));
            let nf = eng.normal_form(&x)?;
            if nf != x && !g.is_dotted() && !h.is_dotted() {
                println!("{g} {h} = {nf:?}");
            }
        }
    }

    let b = AlgebraElement::gen(Gen::undotted(0, 0), p.prec);

    println!("ε(M1^1) = {}", counit(&b));
    println!("S(M1^1) = {:?}", antipode(&b, &m));
    println!("Δ(M1^1) has {} terms", coproduct(&b).terms().len());

    for c in verify_algebra(&eng, 20, 7)? {
        println!("{c:?}");
    }

    // Both cross relation signs together leave too few words.
    if let Err(e) = NormalFormEngine::new(&p, &m, &rm, CrossRelations::Both, 2) {
        println!("both signs: {e}");
    }
    Ok(())
}
