use criterion::{black_box, criterion_group, criterion_main, Criterion};

use zcv_bench::input;
use zcv_core::exactmath::{integer_solve, IntMatrix};
use zcv_core::groups::{dixon_character_table, table_automorphisms, ClassData};
use zcv_core::help::{solve_order, HelpOptions};
use zcv_core::pipeline::{Pipeline, PipelineConfig};

fn tables(c: &mut Criterion) {
    let g = input("168_43").group;
    c.bench_function("classes 168_43", |b| b.iter(|| ClassData::compute(black_box(&g))));
    let cd = ClassData::compute(&g);
    c.bench_function("dixon 168_43", |b| b.iter(|| dixon_character_table(black_box(&g), &cd).unwrap()));
    let t = dixon_character_table(&g, &cd).unwrap();
    c.bench_function("table automorphisms 168_43", |b| b.iter(|| table_automorphisms(black_box(&t)).unwrap()));
}

fn help(c: &mut Criterion) {
    for (key, n) in [("48_30", 4), ("168_43", 6)] {
        let g = input(key).group;
        let t = dixon_character_table(&g, &ClassData::compute(&g)).unwrap();
        c.bench_function(&format!("help {key} order {n}"), |b| {
            b.iter(|| solve_order(black_box(&t), n, &[], &HelpOptions::default()).unwrap())
        });
    }
}

fn hermite(c: &mut Criterion) {
    let rows: Vec<Vec<i64>> = (0..12).map(|i| (0..12).map(|j| ((i * 7 + j * 13) % 11) as i64 - 5).collect()).collect();
    let a = IntMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect::<Vec<_>>()).unwrap();
    let b: Vec<_> = (0..12).map(|i| (i as i64).into()).collect();
    c.bench_function("integer_solve 12x12", |bch| bch.iter(|| integer_solve(black_box(&a), &b).unwrap()));
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    for key in ["48_30", "72_40"] {
        let inp = input(key);
        group.bench_function(key, |b| b.iter(|| Pipeline::new(PipelineConfig::default()).run(black_box(&inp)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, tables, help, hermite, pipeline);
criterion_main!(benches);
