#include <cmath>
#include <memory>
#include <vector>

#include <benchmark/benchmark.h>

#include "maxlab/area_functional.hpp"
#include "maxlab/geodesic.hpp"
#include "maxlab/maximal_solver.hpp"
#include "maxlab/surface_geometry.hpp"

using namespace maxlab;

namespace {

const Chart kChart{-1, 1, -1, 1};

struct Fixture {
    explicit Fixture(int n)
        : metric(MetricKind::sphere, kChart),
          domain(std::make_shared<const Domain>(Grid(kChart, n, n), DomainShape{})),
          u(domain->grid().node_count()) {
        const Grid& g = domain->grid();
        for (int k = 0; k < static_cast<int>(u.size()); ++k) {
            const double x = g.x(g.col(k)), y = g.y(g.row(k));
            u[k] = 0.2 * x + 0.1 * y + 0.05 * std::sin(3.0 * x) * std::cos(2.0 * y);
        }
    }

    MetricSpec metric;
    std::shared_ptr<const Domain> domain;
    std::vector<double> u;
};

Exec exec_of(const benchmark::State& state) { return state.range(1) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(1) == 0 ? "serial" : "openmp"); }

void BM_AreaGradient(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)));
    const AreaFunctional area(f.domain, f.metric);
    std::vector<double> grad(f.u.size());
    for (auto _ : state) {
        area.gradient(f.u, grad, exec_of(state));
        benchmark::DoNotOptimize(grad.data());
    }
    label(state);
}

void BM_AreaHessian(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)));
    const AreaFunctional area(f.domain, f.metric);
    Eigen::SparseMatrix<double> h = area.hessian(f.u, Exec::serial);
    for (auto _ : state) {
        area.hessian_values(f.u, h, exec_of(state));
        benchmark::DoNotOptimize(h.valuePtr());
    }
    label(state);
}

void BM_Geometry(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)));
    const GraphFunction g = make_graph(f.domain, f.metric, f.u);
    for (auto _ : state) benchmark::DoNotOptimize(compute_geometry(g, f.metric, exec_of(state)));
    label(state);
}

void BM_LaplaceBeltrami(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)));
    const SurfaceGeometry geom = compute_geometry(make_graph(f.domain, f.metric, f.u), f.metric);
    for (auto _ : state) benchmark::DoNotOptimize(laplace_beltrami(geom, geom.theta, exec_of(state)));
    label(state);
}

void BM_Triangulate(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)));
    const GraphFunction g = make_graph(f.domain, f.metric, f.u);
    for (auto _ : state) benchmark::DoNotOptimize(triangulate(g, f.metric, exec_of(state)));
    label(state);
}

void sizes(benchmark::internal::Benchmark* b) {
    for (int n : {129, 257, 513}) {
        for (int mode : {0, 1}) b->Args({n, mode});
    }
    b->ArgNames({"n", "omp"})->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(BM_AreaGradient)->Apply(sizes);
BENCHMARK(BM_AreaHessian)->Apply(sizes);
BENCHMARK(BM_Geometry)->Apply(sizes);
BENCHMARK(BM_LaplaceBeltrami)->Apply(sizes);
BENCHMARK(BM_Triangulate)->Apply(sizes);

BENCHMARK_MAIN();
