mod common;

use cobool::algebra::{
    build_h_matrix, closed_under, compute_core, extend_operation, preserves_graphs, tuple_leq,
    BooleanOperation, HMatrix,
};
use cobool::classifier::classify;
use cobool::cli::{solve_instance, Engine};
use cobool::generate::{random_instance, InstanceParams};
use cobool::model::{
    parse_instance, parse_template, render_instance, render_template, CoBooleanFunction, Constraint,
    Instance, Template,
};
use cobool::polysolve::affine_hull;
use common::*;
use proptest::collection::vec;
use proptest::prelude::*;
use BooleanOperation::*;

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<bool>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(rows, width)| vec(vec(any::<bool>(), width), rows))
}

fn template_strategy(max_n: usize, max_k: usize) -> impl Strategy<Value = Template> {
    (2usize..=max_n, 1usize..=max_k).prop_flat_map(|(n, k)| {
        vec(vec(0u8..=1, n), k).prop_map(move |tables| {
            let fns = tables
                .into_iter()
                .enumerate()
                .map(|(i, t)| CoBooleanFunction::new(format!("f{}", i + 1), t).unwrap())
                .collect();
            Template::new(n, fns).unwrap()
        })
    })
}

fn matrix(rows: Vec<Vec<bool>>) -> HMatrix {
    let width = rows[0].len();
    HMatrix::from_rows((0..width).map(|i| format!("c{i}")).collect(), rows)
}

fn instance_strategy() -> impl Strategy<Value = Instance> {
    let var = prop::sample::select(vec!["x", "y", "z", "w"]);
    let func = prop::sample::select(vec!["f1", "f2", "f3"]);
    let atom = prop_oneof![
        (func.clone(), var.clone(), var.clone()).prop_map(|(f, a, b)| Constraint::apply(f, a, b)),
        (var.clone(), var.clone()).prop_map(|(a, b)| Constraint::equal(a, b)),
        (func.clone(), var.clone(), func, var.clone())
            .prop_map(|(f, a, g, b)| Constraint::apply_apply(f, a, g, b)),
        (var, 0usize..7).prop_map(|(a, d)| Constraint::pin(a, d)),
    ];
    vec(atom, 1..8).prop_map(|cs| Instance::new(cs).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closure_matches_brute_force(rows in matrix_strategy()) {
        let m = matrix(rows.clone());
        prop_assert_eq!(closed_under(&m, Major).witness().map(<[usize]>::to_vec), brute_major(&rows));
        prop_assert_eq!(closed_under(&m, Minor).witness().map(<[usize]>::to_vec), brute_minor(&rows));
        prop_assert_eq!(closed_under(&m, Meet).witness().map(<[usize]>::to_vec), brute_meet(&rows));
        prop_assert_eq!(closed_under(&m, Join).witness().map(<[usize]>::to_vec), brute_join(&rows));
    }

    #[test]
    fn meet_and_join_imply_majority(rows in matrix_strategy()) {
        let m = matrix(rows);
        if closed_under(&m, Meet).is_closed() && closed_under(&m, Join).is_closed() {
            prop_assert!(closed_under(&m, Major).is_closed());
        }
    }

    #[test]
    fn two_rows_are_majority_and_minority_closed(a in vec(any::<bool>(), 1..6), flip in any::<u8>()) {
        let b: Vec<bool> = a.iter().enumerate().map(|(i, &x)| x ^ (flip >> (i % 8) & 1 == 1)).collect();
        let m = matrix(vec![a, b]);
        prop_assert!(closed_under(&m, Major).is_closed());
        prop_assert!(closed_under(&m, Minor).is_closed());
    }

    #[test]
    fn bool_row_relation_closure(r0 in vec(any::<bool>(), 3), r1 in vec(any::<bool>(), 3)) {
        let with = |b: bool, r: &[bool]| { let mut t = vec![b]; t.extend_from_slice(r); t };
        let m = matrix(vec![with(false, &r0), with(true, &r1)]);
        let leq = tuple_leq(&r0, &r1).unwrap();
        prop_assert!(closed_under(&m, Major).is_closed());
        prop_assert!(closed_under(&m, Minor).is_closed());
        prop_assert_eq!(closed_under(&m, Meet).is_closed(), leq);
        prop_assert_eq!(closed_under(&m, Join).is_closed(), leq);
    }

    #[test]
    fn tuple_leq_is_a_partial_order(a in vec(any::<bool>(), 4), b in vec(any::<bool>(), 4)) {
        prop_assert!(tuple_leq(&a, &a).unwrap());
        if tuple_leq(&a, &b).unwrap() && tuple_leq(&b, &a).unwrap() {
            prop_assert_eq!(&a, &b);
        }
        let meet: Vec<bool> = a.iter().zip(&b).map(|(x, y)| x & y).collect();
        prop_assert!(tuple_leq(&meet, &a).unwrap());
    }

    #[test]
    fn core_is_a_minimal_idempotent_retraction(t in template_strategy(5, 3)) {
        let c = compute_core(&t);
        let p = c.retraction.map();
        for f in t.functions() {
            for x in 0..t.size() {
                prop_assert_eq!(p[f.apply(x)], f.apply(p[x]));
            }
        }
        for x in 0..t.size() {
            prop_assert_eq!(p[p[x]], p[x]);
        }
        prop_assert_eq!(c.template.size(), brute_core_size(&t));
        if !c.retraction.is_degenerate() {
            prop_assert_eq!(&c.retraction.image()[..2], &[0, 1]);
        }
        let again = compute_core(&c.template);
        prop_assert!(again.retraction.is_identity());
    }

    #[test]
    fn classify_matches_brute_force(t in template_strategy(5, 3)) {
        let got = classify(&t).verdict.reason().map(|r| r.name());
        prop_assert_eq!(got, brute_verdict(&t));
    }

    #[test]
    fn classify_ignores_function_order_names_and_duplicates(t in template_strategy(6, 4), rot in 0usize..4) {
        let base = classify(&t).verdict.reason();
        let mut fns = t.functions().to_vec();
        let r = rot % fns.len();
        fns.rotate_left(r);
        let renamed: Vec<_> = fns
            .iter()
            .enumerate()
            .map(|(i, f)| CoBooleanFunction::new(format!("g{i}"), f.table().to_vec()).unwrap())
            .collect();
        let mut dup = renamed.clone();
        dup.push(CoBooleanFunction::new("copy", renamed[0].table().to_vec()).unwrap());
        let t2 = Template::new(t.size(), renamed).unwrap();
        let t3 = Template::new(t.size(), dup).unwrap();
        prop_assert_eq!(classify(&t2).verdict.reason(), base);
        prop_assert_eq!(classify(&t3).verdict.reason(), base);
    }

    #[test]
    fn extended_operations_preserve_graphs(t in template_strategy(5, 3)) {
        let m = build_h_matrix(&t);
        for op in [Major, Minor] {
            if closed_under(&m, op).is_closed() {
                let q = extend_operation(&m, op).unwrap();
                prop_assert!(q.is_idempotent());
                for a in 0..t.size() {
                    for b in 0..t.size() {
                        let expect = if op == Major { a } else { b };
                        prop_assert_eq!(q.get(&[a, a, b]), expect);
                        prop_assert_eq!(q.get(&[a, b, a]), expect);
                        prop_assert_eq!(q.get(&[b, a, a]), expect);
                    }
                }
                prop_assert!(preserves_graphs(&q, &t).is_preserved());
            }
        }
        if closed_under(&m, Meet).is_closed() {
            let q = extend_operation(&m, Meet).unwrap();
            let ordered = tuple_leq(m.row(0), m.row(1)).unwrap();
            prop_assert_eq!(preserves_graphs(&q, &t).is_preserved(), ordered);
        }
    }

    #[test]
    fn cosets_are_recognised(base in vec(any::<bool>(), 5), gens in vec(vec(any::<bool>(), 5), 0..4)) {
        let mut pts = vec![base.clone()];
        for g in &gens {
            let shifted: Vec<Vec<bool>> = pts.iter().map(|p| p.iter().zip(g).map(|(a, b)| a ^ b).collect()).collect();
            pts.extend(shifted);
        }
        pts.sort();
        pts.dedup();
        let h = affine_hull(&pts).unwrap();
        prop_assert_eq!(pts.len(), 1 << h.dim());
        let mut back = h.points();
        back.sort();
        prop_assert_eq!(&back, &pts);
        for p in &pts {
            for (c, rhs) in &h.checks {
                let v = p.iter().zip(c).fold(false, |acc, (&x, &y)| acc ^ (x & y));
                prop_assert_eq!(v, *rhs);
            }
        }
        prop_assert_eq!(h.checks.len() + h.dim(), 5);
    }

    #[test]
    fn template_round_trip(t in template_strategy(8, 4)) {
        prop_assert_eq!(parse_template(&render_template(&t)).unwrap(), t);
    }

    #[test]
    fn instance_round_trip(i in instance_strategy()) {
        prop_assert_eq!(parse_instance(&render_instance(&i)).unwrap(), i);
    }

    #[test]
    fn poly_agrees_with_oracle_on_random_tractable_templates(
        t in template_strategy(5, 3),
        seed in any::<u64>(),
        vars in 1usize..6,
        cons in 1usize..8,
    ) {
        let c = classify(&t);
        prop_assume!(c.verdict.is_tractable());
        let image = c.core.retraction.image().to_vec();
        let params = InstanceParams { vars, constraints: cons, pin_probability: 0.2, pin_elements: Some(&image) };
        let inst = random_instance(seed, &t, &params).unwrap();
        let poly = solve_instance(&t, &inst, Engine::Poly).unwrap();
        let oracle = solve_instance(&t, &inst, Engine::Oracle).unwrap();
        prop_assert_eq!(poly.assignment.is_some(), oracle.assignment.is_some());
    }
}
