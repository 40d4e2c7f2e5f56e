#include <benchmark/benchmark.h>

#include <vector>

#include "aos/abc.hpp"
#include "aos/credit.hpp"
#include "aos/problem.hpp"
#include "aos/rng.hpp"
#include "aos/selection.hpp"

namespace {

aos::SukpInstance make_instance(std::size_t size) {
    aos::Rng rng(42);
    aos::GeneratorParams params;
    params.items = size;
    params.elements = size;
    return aos::generate_instance(rng, params);
}

aos::BitSolution random_solution(aos::Rng& rng, std::size_t m) {
    aos::BitSolution x(m);
    for (std::size_t i = 0; i < m; ++i) {
        x.set(i, rng.bernoulli(0.5));
    }
    return x;
}

void BM_Evaluate(benchmark::State& state) {
    const auto inst = make_instance(static_cast<std::size_t>(state.range(0)));
    aos::Rng rng(1);
    const auto x = random_solution(rng, inst.item_count());
    for (auto _ : state) {
        benchmark::DoNotOptimize(aos::evaluate(inst, x));
    }
}
BENCHMARK(BM_Evaluate)->Arg(100)->Arg(500);

void BM_Repair(benchmark::State& state) {
    const auto inst = make_instance(static_cast<std::size_t>(state.range(0)));
    const auto omega = aos::scalarization_weights(inst, aos::WeightVector::uniform(1));
    aos::Rng rng(2);
    std::vector<aos::BitSolution> inputs;
    for (int k = 0; k < 64; ++k) {
        inputs.push_back(random_solution(rng, inst.item_count()));
    }
    std::size_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(aos::repair(inst, inputs[k++ % inputs.size()], omega));
    }
}
BENCHMARK(BM_Repair)->Arg(100)->Arg(500);

void BM_CreditUpdate(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    aos::CreditModel model(4, 2, m);
    aos::Rng rng(3);
    const auto x = random_solution(rng, m);
    const std::vector<double> reward{0.01, 0.02};
    for (auto _ : state) {
        model.update_on_success(x, aos::OperatorId{rng.uniform_index(4)}, reward);
    }
}
BENCHMARK(BM_CreditUpdate)->Arg(100)->Arg(500);

void BM_SelectRl(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    aos::CreditModel model(4, 2, m);
    aos::SchemeState scheme(aos::SchemeKind::rl, 4);
    const auto weights = aos::WeightVector::uniform(2);
    aos::Rng rng(4);
    const auto x = random_solution(rng, m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aos::select_operator(scheme, aos::effective_credit_of(model, x), weights, rng));
    }
}
BENCHMARK(BM_SelectRl)->Arg(100)->Arg(500);

void BM_SelectPm(benchmark::State& state) {
    aos::SchemeState scheme(aos::SchemeKind::pm, 4);
    const auto weights = aos::WeightVector::uniform(1);
    const aos::CreditView none(0, 0);
    aos::Rng rng(5);
    for (auto _ : state) {
        const auto op = aos::select_operator(scheme, none, weights, rng);
        aos::update_scheme(scheme, op, rng.uniform01());
    }
}
BENCHMARK(BM_SelectPm);

void BM_AbcRun(benchmark::State& state) {
    const auto inst = make_instance(100);
    aos::AbcConfig config;
    config.budget = 4000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(aos::run(inst, config).best_fitness);
    }
}
BENCHMARK(BM_AbcRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
