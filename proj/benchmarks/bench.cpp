#include <array>
#include <memory>

#include <benchmark/benchmark.h>

#include "minsurf/minsurf.hpp"

using namespace minsurf;

namespace {

// A ready-to-sweep circle state on an n-ring triangulation.
RunState circle_state(int rings, int warm_sweeps = 0) {
    static std::unique_ptr<Curve> curve = make_builtin_curve("circle");
    SolverConfig cfg;
    RunState state = init_run(generate_disk_mesh(TriangulationPreset::rings(rings)),
                              *curve, cfg);
    for (int s = 0; s < warm_sweeps; ++s) relax_sweep(state);
    return state;
}

} // namespace

static void BM_ElementStiffness(benchmark::State& state) {
    std::array<double, 2> p1 = {0.1, 0.2};
    std::array<double, 2> p2 = {1.3, 0.4};
    std::array<double, 2> p3 = {0.5, 1.6};
    for (auto _ : state) {
        auto k = element_stiffness(p1, p2, p3);
        benchmark::DoNotOptimize(k);
    }
}
BENCHMARK(BM_ElementStiffness);

static void BM_Assemble(benchmark::State& state) {
    DiskMesh mesh = generate_disk_mesh(
        TriangulationPreset::rings(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        StiffnessMatrix matrix = assemble(mesh);
        benchmark::DoNotOptimize(matrix);
    }
    state.SetItemsProcessed(state.iterations() * mesh.element_count());
}
BENCHMARK(BM_Assemble)->Arg(8)->Arg(11)->Arg(16)->Unit(benchmark::kMicrosecond);

static void BM_RelaxSweep(benchmark::State& state) {
    RunState run_state = circle_state(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(relax_sweep(run_state));
    state.SetItemsProcessed(state.iterations() * run_state.mesh.node_count());
}
BENCHMARK(BM_RelaxSweep)->Arg(8)->Arg(11)->Arg(16)->Unit(benchmark::kMicrosecond);

static void BM_NewtonBoundaryNode(benchmark::State& state) {
    RunState run_state = circle_state(8, 10);
    int node = run_state.mesh.boundary[1]; // movable (position 0 is pinned)
    for (auto _ : state)
        benchmark::DoNotOptimize(newton_boundary(run_state, node));
}
BENCHMARK(BM_NewtonBoundaryNode);

static void BM_DetectDefective(benchmark::State& state) {
    static std::unique_ptr<Curve> curve = make_builtin_curve("rose3");
    SolverConfig cfg;
    RunState run_state = init_run(
        generate_disk_mesh(TriangulationPreset::rings(
            static_cast<int>(state.range(0)))),
        *curve, cfg);
    for (int s = 0; s < 50; ++s) relax_sweep(run_state);
    for (auto _ : state) {
        DefectReport report = detect_defective(run_state.mesh,
                                               run_state.surface, 2.0,
                                               DefectMetric::Distance);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BM_DetectDefective)->Arg(8)->Arg(11);

static void BM_AreaAndConformality(benchmark::State& state) {
    RunState run_state = circle_state(static_cast<int>(state.range(0)), 10);
    for (auto _ : state) {
        EnergyReport report = area_and_conformality(run_state.mesh,
                                                    run_state.surface);
        benchmark::DoNotOptimize(report);
    }
    state.SetItemsProcessed(state.iterations() *
                            run_state.mesh.element_count());
}
BENCHMARK(BM_AreaAndConformality)
    ->Arg(8)
    ->Arg(11)
    ->Arg(16)
    ->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
