use qmlogic::catalog::Catalog;
use qmlogic::suite::{self, CriterionReport};

fn report(r: CriterionReport) {
    println!("{}", r.line());
    for d in &r.details {
        println!("    {d}");
    }
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_axiom_verifiers() {
    report(suite::axiom_verifiers(&Catalog::builtin()));
}

#[test]
fn criterion_02_tensor_oracle() {
    report(suite::tensor_oracle(&Catalog::builtin()));
}

#[test]
fn criterion_03_unit_isomorphism() {
    report(suite::unit_isomorphism(&Catalog::builtin()));
}

#[test]
fn criterion_04_hom_tensor_adjunction() {
    report(suite::hom_tensor_adjunction(&Catalog::builtin()));
}

#[test]
fn criterion_05_qm_coproducts() {
    report(suite::qm_coproducts(&Catalog::builtin()));
}

#[test]
fn criterion_06_unit_embedding() {
    report(suite::unit_embedding(&Catalog::builtin()));
}

#[test]
fn criterion_07_qm_pushouts() {
    report(suite::qm_pushouts(&Catalog::builtin()));
}

#[test]
fn criterion_08_cpl_identity() {
    report(suite::cpl_identity());
}

#[test]
fn criterion_09_cpl_coproduct() {
    report(suite::cpl_coproduct());
}

#[test]
fn criterion_10_nucleus_laws() {
    report(suite::nucleus_laws(suite::DEFAULT_SEED));
}

#[test]
fn criterion_11_proof_interpretation() {
    report(suite::proof_interpretation());
}
