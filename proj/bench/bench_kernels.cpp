// Wall-time comparison of the OpenMP kernels against the serial references
// kept for testing: parameter-plane render, periodic-point continuation and
// the pressure-sum reduction. Best-of-N timing, one line per kernel.
//
// Usage: bench_kernels [repeats]   (default 3)

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "potts/family.hpp"
#include "potts/periodic.hpp"
#include "potts/raster.hpp"

using namespace potts;

namespace {

double best_of(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    best = std::min(best, dt);
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s) {
  printf("%-22s serial %8.1f ms   parallel %8.1f ms   speedup %.2fx\n", name,
         serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  printf("threads: %d, repeats: %d\n", omp_get_max_threads(), repeats);

  // certified parameter-plane raster; the march certification dominates
  {
    RasterSpec spec;
    spec.width = 64;
    spec.height = 64;
    spec.mode = RenderMode::Parameter;
    spec.d = 2;
    volatile int sink = 0;
    const double ts = best_of(repeats, [&] {
      const VerdictGrid g = render_serial(spec);
      sink = sink + g.cells[0].kind;
    });
    const double tp = best_of(repeats, [&] {
      const VerdictGrid g = render(spec);
      sink = sink + g.cells[0].kind;
    });
    report("render-param 64x64", ts, tp);
  }

  // continuation from the alpha = 0 lattice out to alpha ~ 0.215 (many legs)
  {
    const auto p = FamilyParams::from_lambda(2, {100.0, 0.0});
    volatile double sink = 0.0;
    const double ts = best_of(repeats, [&] {
      sink = sink + periodic_points_serial(p, 12).max_residual();
    });
    const double tp = best_of(repeats, [&] {
      sink = sink + periodic_points(p, 12).max_residual();
    });
    report("continuation n=12", ts, tp);
  }

  // pressure sums across a dimension bracket on a 16383-point orbit set
  {
    const auto p = FamilyParams::from_lambda(2, {1000.0, 0.0});
    const PeriodicOrbitSet orbits = periodic_points(p, 14);
    volatile double sink = 0.0;
    const double ts = best_of(repeats, [&] {
      for (int i = 0; i < 200; ++i)
        sink = sink + pressure_sum_serial(orbits, 0.5 + i * 0.0075);
    });
    const double tp = best_of(repeats, [&] {
      for (int i = 0; i < 200; ++i)
        sink = sink + pressure_sum(orbits, 0.5 + i * 0.0075);
    });
    report("pressure-sum n=14", ts, tp);
  }

  return 0;
}
