// Serial reference vs OpenMP kernels on 2D and 3D grids.

#include <benchmark/benchmark.h>

#include <cmath>

#include "kss/field.hpp"
#include "kss/kernels.hpp"

namespace {

kss::Grid grid_for(int dim, int cells) {
    return dim == 2 ? kss::Grid::square(cells) : kss::Grid::cube(cells);
}

kss::ScalarField smooth(const kss::Grid& g, double shift) {
    return kss::ScalarField::sample(g, [shift](double x, double y, double z) {
        return 1.0 + std::cos(3.0 * x + shift) * std::cos(2.0 * y) * std::cos(z);
    });
}

template <auto Fn>
void BM_laplacian(benchmark::State& st) {
    const auto g = grid_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const auto s = smooth(g, 0.0);
    kss::ScalarField out(g);
    for (auto _ : st) {
        Fn(g, s.values(), kss::ScalarBc::neumann_zero, out.values());
        benchmark::DoNotOptimize(out.values().data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(g.cell_count()));
}

template <auto Fn>
void BM_gradient(benchmark::State& st) {
    const auto g = grid_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const auto s = smooth(g, 0.0);
    kss::VectorField out(g);
    for (auto _ : st) {
        Fn(g, s.values(), kss::ScalarBc::neumann_zero, kss::kernels::faces(out));
        benchmark::DoNotOptimize(out.component(0).data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(g.cell_count()));
}

template <auto Fn>
void BM_vector_laplacian(benchmark::State& st) {
    const auto g = grid_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    kss::VectorField u = kss::VectorField::sample_interior(
        g, [](int d, double x, double y, double) { return std::sin(3.0 * x + d) * std::sin(2.0 * y); });
    kss::VectorField out(g);
    for (auto _ : st) {
        Fn(g, kss::kernels::faces(std::as_const(u)), kss::VectorBc::dirichlet_zero,
           kss::kernels::faces(out));
        benchmark::DoNotOptimize(out.component(0).data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(g.cell_count()));
}

template <auto Fn>
void BM_density_flux(benchmark::State& st) {
    const auto g = grid_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const auto n = smooth(g, 0.0);
    const auto c = smooth(g, 1.0);
    kss::VectorField out(g);
    const kss::SensitivityLaw law{1.0, 0.5, {}};
    for (auto _ : st) {
        Fn(g, n.values(), c.values(), kss::kernels::ConstFaces{}, law, kss::kernels::faces(out));
        benchmark::DoNotOptimize(out.component(0).data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(g.cell_count()));
}

template <auto Fn>
void BM_sum(benchmark::State& st) {
    const auto g = grid_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const auto s = smooth(g, 0.0);
    for (auto _ : st) benchmark::DoNotOptimize(Fn(s.values()));
    st.SetItemsProcessed(st.iterations() * static_cast<long>(g.cell_count()));
}

void sizes(benchmark::internal::Benchmark* b) {
    b->Args({2, 64})->Args({2, 256})->Args({3, 32})->Args({3, 64});
}

}  // namespace

BENCHMARK(BM_laplacian<kss::kernels::serial::laplacian>)->Apply(sizes);
BENCHMARK(BM_laplacian<kss::kernels::omp::laplacian>)->Apply(sizes);
BENCHMARK(BM_gradient<kss::kernels::serial::gradient>)->Apply(sizes);
BENCHMARK(BM_gradient<kss::kernels::omp::gradient>)->Apply(sizes);
BENCHMARK(BM_vector_laplacian<kss::kernels::serial::vector_laplacian>)->Apply(sizes);
BENCHMARK(BM_vector_laplacian<kss::kernels::omp::vector_laplacian>)->Apply(sizes);
BENCHMARK(BM_density_flux<kss::kernels::serial::density_flux>)->Apply(sizes);
BENCHMARK(BM_density_flux<kss::kernels::omp::density_flux>)->Apply(sizes);
BENCHMARK(BM_sum<kss::kernels::serial::sum>)->Apply(sizes);
BENCHMARK(BM_sum<kss::kernels::omp::sum>)->Apply(sizes);

BENCHMARK_MAIN();
