mod common;

fn run(suite: common::Suite) {
    match suite {
        Ok(summary) => println!("{summary}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn toric_line_bundles_match_cech_oracle() {
    run(common::toric_oracle_suite());
}

#[test]
fn toric_serre_duality_on_random_divisors() {
    run(common::serre_duality_suite(200));
}

#[test]
fn littlewood_richardson_matches_tableaux() {
    run(common::lr_suite(6));
}

#[test]
fn bwb_bott_formula_dichotomy_and_duality() {
    run(common::bwb_suite());
}

#[test]
fn chase_solver_is_sound_and_tight() {
    run(common::chase_suite(1000));
}

#[test]
fn kunneth_laws() {
    run(common::kunneth_suite());
}

#[test]
fn cech_oracle_known_values() {
    let fans = common::cech::small_fans();
    let p2 = &fans[0];
    assert_eq!(common::cech::oracle_cohomology(p2, &[2, 0, 0]), vec![6, 0, 0]);
    assert_eq!(common::cech::oracle_cohomology(p2, &[-1, -1, -1]), vec![0, 0, 1]);
    assert_eq!(common::cech::oracle_cohomology(p2, &[-1, 0, 0]), vec![0, 0, 0]);
    let p3 = &fans[4];
    assert_eq!(common::cech::oracle_cohomology(p3, &[-5, 0, 0, 0]), vec![0, 0, 0, 4]);
}

#[test]
fn tableau_oracle_known_values() {
    use common::tableaux::lr_coefficient;
    assert_eq!(lr_coefficient(&[2, 1], &[2, 1], &[3, 2, 1]), 2);
    assert_eq!(lr_coefficient(&[1], &[1], &[2]), 1);
    assert_eq!(lr_coefficient(&[1], &[1], &[1, 1]), 1);
    assert_eq!(lr_coefficient(&[2], &[2], &[2, 1, 1]), 0);
    assert_eq!(common::tableaux::hook_content(&[1, 1], 5), 10);
}
