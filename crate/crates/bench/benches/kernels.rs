use criterion::{black_box, criterion_group, criterion_main, Criterion};
use lubgap::special::{gamma_coeff, phi};
use lubgap::{eval_field, force_numeric, Dimension, GapProfile, ProblemParams, QuadSpec};

fn params(eps: f64) -> ProblemParams {
    let pr = GapProfile::m_convex(Dimension::Three, 2.0, 0.5, eps, 1.0).unwrap();
    ProblemParams::new_3d(pr, 1.0, [0.7, -0.4, -1.0], [0.3, 0.5, 0.2]).unwrap()
}

fn special(c: &mut Criterion) {
    c.bench_function("gamma_coeff", |b| {
        b.iter(|| gamma_coeff(black_box(3.0), black_box(4.0), black_box(2.5)))
    });
    c.bench_function("phi m=3 eps=1e-6", |b| {
        b.iter(|| phi(black_box(3.0), black_box(3.0), 3.0, 0.5, 1e-6))
    });
}

fn fields(c: &mut Criterion) {
    let p = params(1e-3);
    let h = p.profile.gap(&[0.1, 0.05]).unwrap();
    for k in [1, 3, 6] {
        c.bench_function(&format!("eval_field k={k}"), |b| {
            b.iter(|| eval_field::<3>(k, &p, black_box([0.1, 0.05, 0.2 * h])))
        });
    }
}

fn traction(c: &mut Criterion) {
    let p = params(1e-4);
    let spec = QuadSpec::with_rel_tol(1e-8);
    let mut g = c.benchmark_group("force_numeric");
    g.sample_size(10);
    for k in [1, 3, 5] {
        g.bench_function(format!("k={k}"), |b| b.iter(|| force_numeric(k, &p, &spec)));
    }
    g.finish();
}

criterion_group!(benches, special, fields, traction);
criterion_main!(benches);
