// Compares the serial reference path (1 thread) of the verification suites
// against the OpenMP trial loop at the resolved thread count.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "harness/suites.hpp"

using namespace spectral::harness;

namespace {

double run_timed(const std::string& suite, std::uint64_t trials, int threads) {
  SuiteOptions opts;
  opts.seed = 1;
  opts.trials = trials;
  opts.threads = threads;
  auto t0 = std::chrono::steady_clock::now();
  auto rep = run_suite(suite, opts);
  auto t1 = std::chrono::steady_clock::now();
  if (!rep.ok()) std::fprintf(stderr, "warning: suite %s failed while timing\n", suite.c_str());
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t trials = argc > 1 ? std::stoull(argv[1]) : 50;
  int par = max_threads();
  std::printf("suite            trials   serial[s]   omp[%d][s]   speedup\n", par);
  for (const std::string& suite :
       {std::string("acyclicity"), std::string("rank-theorem"), std::string("jacobi"),
        std::string("leaf-commute"), std::string("roundtrip")}) {
    double serial = run_timed(suite, trials, 1);
    double parallel = run_timed(suite, trials, par);
    std::printf("%-16s %6llu   %9.3f   %10.3f   %7.2fx\n", suite.c_str(),
                static_cast<unsigned long long>(trials), serial, parallel,
                parallel > 0 ? serial / parallel : 0.0);
  }
  return 0;
}
