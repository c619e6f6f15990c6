//! Cross-checks for algebras whose reduced basis lies in a single degree
//! `d >= 3`: d-Koszulity of the tips, AP(3) lengths and oracle row 3 of the
//! perturbed (non-monomial) algebra all agree.

use qkoszul::chains::maximal_overlap_set;
use qkoszul::experiment::{perturb, random_instance, Lcg};
use qkoszul::field::Field;
use qkoszul::freealg::AdmissibleOrder;
use qkoszul::koszul::{classify_basis, is_d_koszul_monomial, ClassifyOptions, Status};
use qkoszul::resolution::oracle_resolution;

#[test]
fn concentrated_bases_agree_with_the_oracle() {
    let mut rng = Lcg::new(1212);
    let (mut checked, mut yes) = (0, 0);
    for _ in 0..400 {
        if checked == 25 {
            break;
        }
        let d = 3 + rng.below(2);
        let (vertices, arrows) = (1 + rng.below(2), 2 + rng.below(2));
        let Some((q, rho)) = random_instance(&mut rng, vertices, arrows, &[d], 3) else {
            continue;
        };
        let order = AdmissibleOrder::deglex(&q);
        let Some((_, gb)) = perturb(&mut rng, &q, &rho, &order, Field::Prime(101), 2 * d, 16) else {
            continue;
        };
        if !gb.is_complete() || gb.elements().iter().any(|g| g.degree() != Some(d)) {
            continue;
        }
        let tips = is_d_koszul_monomial(&q, &rho, d).unwrap().holds();
        let ap3 = maximal_overlap_set(&q, &rho).iter().all(|w| w.len() == d + 1);
        let oracle = oracle_resolution(&q, &gb, 3, 2 * d).unwrap();
        let row3 = oracle.rows[3].degrees().iter().all(|&g| g == d + 1);
        assert_eq!(tips, ap3, "{:?}", rho.paths());
        assert_eq!(tips, row3, "{:?}: row 3 {:?}", rho.paths(), oracle.rows[3].degrees());

        let opts = ClassifyOptions {
            max_degree: 2 * d,
            max_n: 4,
            ..ClassifyOptions::default()
        };
        let report = classify_basis(&q, &gb, &opts).unwrap();
        let want = if tips { Status::Yes } else { Status::No };
        assert_eq!(report.verdicts.d_koszul.status, want, "{:?}", rho.paths());
        checked += 1;
        yes += tips as usize;
    }
    assert!(checked >= 10, "only {checked} perturbed instances");
    assert!(yes > 0 && yes < checked, "{yes} of {checked} d-Koszul");
}
