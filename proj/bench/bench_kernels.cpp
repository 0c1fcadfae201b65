// Timings of the OpenMP kernels against their serial reference
// implementations.  Run manually: build/bench/harper_bench [workers]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "harper/cocycle.hpp"
#include "harper/reducibility.hpp"
#include "harper/spectrum.hpp"
#include "harper/tridiag.hpp"

using namespace harper;
namespace chrono = std::chrono;

namespace {

double ms_since(chrono::high_resolution_clock::time_point t0) {
  return chrono::duration<double, std::milli>(chrono::high_resolution_clock::now() - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.1f ms %10.1f ms %7.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  int workers = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
  Frequency golden = golden_mean();
  Coupling lam{0.0, 2.0, 0.0};

  std::printf("workers: %d\n", workers);
  std::printf("%-28s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");

  {
    auto t0 = chrono::high_resolution_clock::now();
    SpectrumCloud a = build_cloud_reference(lam, golden, 800, 32);
    double ts = ms_since(t0);
    t0 = chrono::high_resolution_clock::now();
    SpectrumCloud b = build_cloud(lam, golden, 800, 32, workers);
    double tp = ms_since(t0);
    row("cloud n=800 P=32", ts, tp);
    if (a.samples() != b.samples()) std::printf("  MISMATCH: cloud kernels disagree\n");
  }

  {
    MatrixCocycle coc = MatrixCocycle::renormalized(lam, golden, 0.5);
    auto t0 = chrono::high_resolution_clock::now();
    LyapunovEstimate a = lyapunov_numeric_reference(coc, 20000, 32);
    double ts = ms_since(t0);
    t0 = chrono::high_resolution_clock::now();
    LyapunovEstimate b = lyapunov_numeric(coc, 20000, 32, workers);
    double tp = ms_since(t0);
    row("lyapunov k=2e4 P=32", ts, tp);
    if (a.value != b.value) std::printf("  MISMATCH: lyapunov kernels disagree\n");
  }

  {
    SpectrumCloud coarse = build_cloud(lam, golden, 200, 8, workers);
    double E = coarse.samples()[coarse.samples().size() / 2];
    auto t0 = chrono::high_resolution_clock::now();
    BlochWave a = dual_bloch_wave_reference(lam, golden, E, 240, 256);
    double ts = ms_since(t0);
    t0 = chrono::high_resolution_clock::now();
    BlochWave b = dual_bloch_wave(lam, golden, E, 240, 256, workers);
    double tp = ms_since(t0);
    row("theta scan M=240 G=256", ts, tp);
    if (a.theta != b.theta) std::printf("  MISMATCH: theta scans disagree\n");
  }

  {
    // raw Sturm throughput at the acceptance problem size
    auto op = build_truncation(lam, golden, 0.13, 2000);
    auto t0 = chrono::high_resolution_clock::now();
    auto ev = eigenvalues(op);
    double ts = ms_since(t0);
    std::printf("%-28s %10.1f ms (%zu eigenvalues)\n", "sturm n=2000 (one phase)", ts, ev.size());
  }

  return 0;
}
