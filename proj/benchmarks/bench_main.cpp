#include <benchmark/benchmark.h>

#include "ppife/problems.hpp"

namespace {

using namespace ppife;

const Rect kDomain{Vec2{-1.0, -1.0}, Vec2{1.0, 1.0}};

void BM_classify(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TriMesh mesh = build_cartesian_mesh(kDomain, n);
  const LevelSet geom = make_level_set("circle");
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_mesh(mesh, geom));
  }
}
BENCHMARK(BM_classify)->Arg(32)->Arg(64)->Arg(128);

void BM_basis_build(benchmark::State& state) {
  const std::array<Vec2, 3> tri = {Vec2{0.0, 0.0}, Vec2{1.0, 0.0},
                                   Vec2{0.0, 1.0}};
  const CutSegment seg =
      make_cut_segment(Vec2{0.3, 0.0}, Vec2{0.0, 0.6}, Vec2{1.0, 1.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_ife_basis(tri, seg, 1000.0, 1.0));
  }
}
BENCHMARK(BM_basis_build);

void BM_cut_quadrature(benchmark::State& state) {
  const std::array<Vec2, 3> tri = {Vec2{0.0, 0.0}, Vec2{1.0, 0.0},
                                   Vec2{0.0, 1.0}};
  const CutSegment seg =
      make_cut_segment(Vec2{0.3, 0.0}, Vec2{0.0, 0.6}, Vec2{1.0, 1.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(cut_quadrature(tri, seg, 6));
  }
}
BENCHMARK(BM_cut_quadrature);

void BM_assemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Problem p = make_disk_problem(10.0, 1.0);
  const TriMesh mesh = build_cartesian_mesh(kDomain, n);
  const MeshClassification cls = classify_mesh(mesh, p.geom);
  const BasisCache bases = build_bases(mesh, cls, p.beta);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble(mesh, cls, bases, p.beta, p.f, p.g));
  }
}
BENCHMARK(BM_assemble)->Arg(32)->Arg(64);

void BM_solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Problem p = make_disk_problem(10.0, 1.0);
  const TriMesh mesh = build_cartesian_mesh(kDomain, n);
  const MeshClassification cls = classify_mesh(mesh, p.geom);
  const BasisCache bases = build_bases(mesh, cls, p.beta);
  const LinearSystem sys = assemble(mesh, cls, bases, p.beta, p.f, p.g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(sys, mesh, cls, bases));
  }
}
BENCHMARK(BM_solve)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
