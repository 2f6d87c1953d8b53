use criterion::{criterion_group, criterion_main, Criterion};
use matchstick_core::{
    builtin_graph54, parse_script, render_svg, solve_param, sweep, verify, CheckConfig,
    RenderOptions, GRAPH54_SCRIPT,
};
use std::hint::black_box;

fn bench_pipeline(c: &mut Criterion) {
    let construction = builtin_graph54();
    let solved = solve_param(&construction, None).unwrap();
    let embedding = construction
        .execute_with(&[(solved.param_name.as_str(), solved.value)])
        .unwrap();

    c.bench_function("parse_script", |b| {
        b.iter(|| parse_script(black_box(GRAPH54_SCRIPT)).unwrap())
    });
    c.bench_function("execute", |b| {
        b.iter(|| black_box(&construction).execute_default().unwrap())
    });
    c.bench_function("solve_param", |b| {
        b.iter(|| solve_param(black_box(&construction), None).unwrap())
    });
    c.bench_function("verify", |b| {
        b.iter(|| verify(black_box(&embedding), &CheckConfig::default()))
    });
    c.bench_function("sweep_21", |b| {
        b.iter(|| sweep(black_box(&construction), None, 21).unwrap())
    });
    c.bench_function("render_svg", |b| {
        b.iter(|| render_svg(black_box(&embedding), &RenderOptions::default()).unwrap())
    });
}

criterion_group!(benches, bench_pipeline);
criterion_main!(benches);
