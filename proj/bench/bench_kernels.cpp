// Serial reference vs OpenMP paths of the two parallel kernels: Monte-Carlo
// block sampling and figure row evaluation. Also checks that both paths
// produce identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "gkpr/figures.hpp"
#include "gkpr/mc_oracle.hpp"
#include "gkpr/polynomial_code.hpp"

using Clock = std::chrono::steady_clock;

template <class Fn>
double seconds(Fn&& fn) {
  const auto t0 = Clock::now();
  fn();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
  std::uint64_t samples = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20'000'000;
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-28s %10s %10s %8s %s\n", "kernel", "serial_s", "omp_s", "speedup", "match");

  gkpr::SamplerSpec spec;
  spec.samples = samples;
  gkpr::EmpiricalDistribution a, b;
  const double ts = seconds([&] { a = gkpr::sample_shift_distribution(13, 0.05, spec, gkpr::Execution::Serial); });
  const double tp = seconds([&] { b = gkpr::sample_shift_distribution(13, 0.05, spec, gkpr::Execution::Parallel); });
  std::printf("%-28s %10.3f %10.3f %8.2f %s\n", "shift D=13", ts, tp, ts / tp,
              a.counts == b.counts ? "yes" : "NO");

  gkpr::SamplerSpec trials = spec;
  trials.samples = samples / 13;
  const auto code = gkpr::PolynomialCode::make(13);
  gkpr::ErasureTrialEstimate ea, eb;
  const double es = seconds([&] { ea = gkpr::sample_erasure_trial(code, 0.05, 0.8, trials, gkpr::Execution::Serial); });
  const double ep = seconds([&] { eb = gkpr::sample_erasure_trial(code, 0.05, 0.8, trials, gkpr::Execution::Parallel); });
  std::printf("%-28s %10.3f %10.3f %8.2f %s\n", "erasure [[13,1,7]]", es, ep, es / ep,
              ea.failures == eb.failures && ea.discards == eb.discards ? "yes" : "NO");

  for (const char* name : {"fig4b", "fig9b"}) {
    gkpr::FigureOutput fa, fb;
    const double fs = seconds([&] { fa = gkpr::make_figure(name, {}, gkpr::Execution::Serial); });
    const double fp = seconds([&] { fb = gkpr::make_figure(name, {}, gkpr::Execution::Parallel); });
    std::printf("%-28s %10.3f %10.3f %8.2f %s\n", name, fs, fp, fs / fp,
                fa.table.to_csv() == fb.table.to_csv() ? "yes" : "NO");
  }
  return 0;
}
