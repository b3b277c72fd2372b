use criterion::{criterion_group, criterion_main, Criterion};

use descent_kit::enumerate::{enumerate_a_homs, Enumerator, Strategy, DEFAULT_BUDGET};
use descent_kit::input::Problem;
use descent_kit::weil::weil_descend;

// W(C) = F_2[t(1), t(2)]/(t(1)²) into a 256-element R: 65536 candidate assignments.
const INPUT: &str = r#"{
  "field": "F_2",
  "D": {"named": "trivial"},
  "B": {"basis": ["1", "eps"], "products": {"eps*eps": "0"}},
  "C": {"generators": ["t"], "relations": ["t^2"]},
  "R": {"vars": ["u", "v", "w"], "relations": ["u^2", "v^2", "w^2"]}
}"#;

fn bench(c: &mut Criterion) {
    let p = Problem::parse(INPUT).expect("bench input");
    let w = weil_descend(&p.tower.c).expect("descent");
    let r = p.test_algebra.expect("R").carrier().clone();
    let mut strategies = vec![("sequential", Strategy::Sequential)];
    #[cfg(feature = "parallel")]
    strategies.push(("parallel", Strategy::Parallel));

    let mut group = c.benchmark_group("a_homs");
    group.sample_size(10);
    for (name, strategy) in strategies {
        let en = Enumerator {
            budget: DEFAULT_BUDGET,
            strategy,
        };
        group.bench_function(name, |b| b.iter(|| enumerate_a_homs(&en, &w, &r, |_| true).expect("within budget").len()));
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
