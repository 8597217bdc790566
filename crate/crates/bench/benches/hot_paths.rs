use criterion::{black_box, criterion_group, criterion_main, Criterion};

use vgv_bench::{family_p7, maximal_f3_6};
use vgv_core::field::FieldCtx;
use vgv_core::lfunction::FormulaPath;
use vgv_core::linearized::{e_r, kernel};
use vgv_core::oracle::{count_affine, count_affine_naive};

fn field_ops(c: &mut Criterion) {
    let ctx = FieldCtx::new(3, 6).unwrap();
    let (a, b) = (ctx.from_index(123), ctx.from_index(456));
    c.bench_function("mul F_3^6", |bch| bch.iter(|| ctx.mul(black_box(&a), black_box(&b))));
    c.bench_function("inv F_3^6", |bch| bch.iter(|| ctx.inv(black_box(&a))));
    c.bench_function("frobenius F_3^6", |bch| bch.iter(|| ctx.frobenius(black_box(&a), 2)));
}

fn counting(c: &mut Criterion) {
    let curve = maximal_f3_6();
    c.bench_function("count_affine F_3^6", |bch| bch.iter(|| count_affine(black_box(&curve), 1, u64::MAX).unwrap()));
    c.bench_function("count_affine_naive F_3^6", |bch| bch.iter(|| count_affine_naive(black_box(&curve), 1, u64::MAX).unwrap()));
}

fn formula(c: &mut Criterion) {
    let curve = family_p7();
    c.bench_function("kernel of E_R over F_7^3", |bch| {
        bch.iter(|| {
            let er = e_r(&curve.ctx, &curve.poly).unwrap();
            kernel(&curve.ctx, &er)
        })
    });
    c.bench_function("FormulaPath::build p = 7, n = 3", |bch| bch.iter(|| FormulaPath::build(black_box(&curve), 12).unwrap()));
}

criterion_group!(benches, field_ops, counting, formula);
criterion_main!(benches);
