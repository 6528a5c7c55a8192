use std::time::Instant;

use dbp_core::generators::gen_gap;
use dbp_core::oracle::{geometric_feasible, placements_are_disjoint, single_bin_feasible, SearchBudget, Verdict};
use dbp_core::verify_solution;

#[test]
fn gap_fits_one_demand_bin() {
    let (inst, witness) = gen_gap();
    assert!(verify_solution(&inst, &witness).is_valid());
    let started = Instant::now();
    let out = single_bin_feasible(&inst, SearchBudget::new(u64::MAX, 10));
    let Some(Verdict::Feasible(bin)) = out.proven() else {
        panic!("expected a proven one-bin allocation, got {out:?}");
    };
    let sol = dbp_core::Solution::new(vec![bin.clone()]);
    assert!(verify_solution(&inst, &sol).is_valid());
    println!("one-bin search: {} nodes in {:?}", out.nodes(), started.elapsed());
}

#[test]
fn gap_does_not_fit_geometrically() {
    let (inst, _) = gen_gap();
    let started = Instant::now();
    let out = geometric_feasible(inst.tasks(), 21, 21, SearchBudget::new(u64::MAX, 600));
    println!("geometric search: {} nodes in {:?}", out.nodes(), started.elapsed());
    assert_eq!(out.proven(), Some(&Verdict::Infeasible));
}

#[test]
fn slightly_smaller_set_fits_geometrically() {
    // Dropping one side-10 square leaves an easy geometric packing.
    let (inst, _) = gen_gap();
    let rest: Vec<_> = inst.tasks()[1..].to_vec();
    let out = geometric_feasible(&rest, 21, 21, SearchBudget::nodes(10_000_000));
    let Some(Verdict::Feasible(p)) = out.proven() else {
        panic!("expected a packing, got {out:?}");
    };
    assert!(placements_are_disjoint(p, 21, 21));
    assert_eq!(p.len(), rest.len());
}
