use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use curl_mfg::bounds::{empirical_lipschitz, tables};
use curl_mfg::envs::{build_mdp, four_rooms_default, random_simplex_point, seeded_rng};
use curl_mfg::objectives::finite_difference_gradient_with;
use curl_mfg::solvers::{fictitious_play, RateSchedule, SolverOptions};
use curl_mfg::{ExecMode, Objective, PotentialMfg};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn four_rooms_entropy() -> PotentialMfg {
    PotentialMfg::new(build_mdp(&four_rooms_default()).unwrap(), Objective::entropy(0.0).unwrap()).unwrap()
}

fn batch_work(c: &mut Criterion) {
    let mfg = four_rooms_entropy();
    let init = mfg.mdp.uniform_policy();
    let iterates = fictitious_play(
        &mfg,
        40,
        RateSchedule::Fp,
        &init,
        &SolverOptions {
            exploitability_every: None,
            keep_iterates: true,
            exec: ExecMode::Sequential,
        },
    )
    .unwrap()
    .iterates;
    let points = tables(&iterates);
    let mu = random_simplex_point(&mut seeded_rng(0), mfg.mdp.n_states(), mfg.mdp.n_actions());

    let mut group = c.benchmark_group("batch");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::new("trace_exploitability", name), &mode, |b, &mode| {
            let options = SolverOptions {
                exploitability_every: Some(1),
                keep_iterates: false,
                exec: mode,
            };
            b.iter(|| fictitious_play(&mfg, 20, RateSchedule::Fp, &init, &options).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("monotonicity_probe", name), &mode, |b, &mode| {
            b.iter(|| mfg.monotonicity_probe(50, 1, mode).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("empirical_lipschitz", name), &mode, |b, &mode| {
            b.iter(|| empirical_lipschitz(&mfg.objective, &points, mode))
        });
        group.bench_with_input(BenchmarkId::new("finite_differences", name), &mode, |b, &mode| {
            b.iter(|| finite_difference_gradient_with(mode, &mfg.objective, &mu, 1e-5))
        });
    }
    group.finish();
}

criterion_group!(benches, batch_work);
criterion_main!(benches);
