//! Lasso at the equator of a pole-to-pole path on a unit icosphere.

use std::f64::consts::PI;

use neckcut::oracle::synth::icosphere;
use neckcut::{lasso_at, shortest_path};

#[test]
fn equator_lasso_near_great_circle() {
    let m = icosphere(3);
    let height = |v: usize| m.position(v)[2];
    let top = (0..m.vertex_count())
        .max_by(|&a, &b| height(a).total_cmp(&height(b)))
        .unwrap();
    let bottom = (0..m.vertex_count())
        .min_by(|&a, &b| height(a).total_cmp(&height(b)))
        .unwrap();
    let path = shortest_path(&m, bottom, top, None).unwrap().unwrap();
    let mid = (1..path.len() - 1)
        .min_by(|&a, &b| {
            height(path.vertices()[a])
                .abs()
                .total_cmp(&height(path.vertices()[b]).abs())
        })
        .unwrap();
    let lasso = lasso_at(&m, &path, mid).unwrap().unwrap();
    let err = (lasso.length - 2.0 * PI).abs() / (2.0 * PI);
    assert!(
        err <= 0.10,
        "lasso length {:.4} vs 2π {:.4} (err {:.1}%, tol 10%)",
        lasso.length,
        2.0 * PI,
        100.0 * err
    );
}
