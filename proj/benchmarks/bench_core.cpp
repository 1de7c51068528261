#include "caliblab/smith.hpp"
#include "caliblab/theorems.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace caliblab;

namespace {

KForm random_form(int n, int k, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    KForm f(n, k);
    for (int i = 0; i < f.size(); ++i) f.coeff(i) = nd(rng);
    return f;
}

const StructureKit& g2() {
    static const StructureKit kit = standard_kit(CalibrationCase::Associative);
    return kit;
}
const StructureKit& sp7() {
    static const StructureKit kit = standard_kit(CalibrationCase::Cayley);
    return kit;
}

void BM_EvaluateCayleyOnFrame(benchmark::State& state) {
    const Mat frame = Mat::Random(8, 4);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(sp7().cayley_form, frame));
}
BENCHMARK(BM_EvaluateCayleyOnFrame);

void BM_Wedge3x4(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const KForm a = random_form(7, 3, rng), b = random_form(7, 4, rng);
    for (auto _ : state) benchmark::DoNotOptimize(wedge(a, b));
}
BENCHMARK(BM_Wedge3x4);

void BM_MetricFrom3Form(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const KForm phi = g2().associative_form + 0.05 * random_form(7, 3, rng);
    for (auto _ : state) benchmark::DoNotOptimize(metric_from_3form(phi));
}
BENCHMARK(BM_MetricFrom3Form);

void BM_G2Split3Form(benchmark::State& state) {
    std::mt19937_64 rng(4);
    const KForm eta = random_form(7, 3, rng);
    for (auto _ : state) benchmark::DoNotOptimize(g2_split_3form(eta, g2()));
}
BENCHMARK(BM_G2Split3Form);

void BM_Sp7Split4Form(benchmark::State& state) {
    std::mt19937_64 rng(5);
    const KForm sigma = random_form(8, 4, rng);
    for (auto _ : state) benchmark::DoNotOptimize(sp7_split_4form(sigma, sp7()));
}
BENCHMARK(BM_Sp7Split4Form);

void BM_TheoremAAssociative(benchmark::State& state) {
    const PatchPtr p = make_patch("t3-in-r7");
    const auto rule = QuadratureRule::for_box(p->box(), static_cast<int>(state.range(0)));
    const auto gen = TrigFormField::random(7, generator_degree(CalibrationCase::Associative), 11);
    const auto fam = family_from_generator(flat_background(g2()), gen);
    for (auto _ : state) benchmark::DoNotOptimize(theorem_A_experiment(*p, fam, rule));
}
BENCHMARK(BM_TheoremAAssociative)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_TheoremBChainCayley(benchmark::State& state) {
    const PatchPtr p = make_patch("graph-t4-in-r8");
    const auto rule = QuadratureRule::for_box(p->box(), 4);
    TheoremBOptions opt;
    opt.v_coeffs = Vec::Ones(4);
    opt.w_coeffs = Vec::LinSpaced(4, -1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(theorem_B_chain(sp7(), *p, rule, opt));
}
BENCHMARK(BM_TheoremBChainCayley)->Unit(benchmark::kMillisecond);

void BM_SmithEnergy(benchmark::State& state) {
    const MapTriple m{QuadraticMapPatch::random(3, 7, 5, 0.5, Box::cube(3, 0.0, 1.0)), euclidean_domain_metric(3), g2()};
    const auto rule = QuadratureRule::gauss_legendre(6);
    for (auto _ : state) benchmark::DoNotOptimize(k_energy(m, rule));
}
BENCHMARK(BM_SmithEnergy);

}  // namespace

BENCHMARK_MAIN();
