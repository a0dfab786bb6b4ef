// Wall-clock comparison of the serial reference executor and the OpenMP batch.
// usage: forage_bench [scenario] [runs] [max_threads]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <omp.h>
#include <string>

#include "forage/simulation.hpp"

using namespace forage;

namespace {

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    Scenario s = find_scenario(argc > 1 ? argv[1] : "LSTM-DRQN-1-range");
    if (argc > 2) s.num_runs = std::strtoul(argv[2], nullptr, 10);
    const int max_threads = argc > 3 ? std::atoi(argv[3]) : omp_get_num_procs();

    std::printf("scenario %s, %zu runs x %zu steps, %d hardware threads\n", s.name.c_str(), s.num_runs, s.horizon(),
                omp_get_num_procs());
    BatchResult reference;
    const double serial = best_of(3, [&] { reference = run_batch_serial(s); });
    std::printf("%-10s %8s %10s %8s %s\n", "executor", "threads", "seconds", "speedup", "matches");
    std::printf("%-10s %8d %10.3f %8.2f %s\n", "serial", 1, serial, 1.0, "-");
    for (int p = 1; p <= max_threads; p *= 2) {
        BatchResult r;
        const double t = best_of(3, [&] { r = run_batch(s, static_cast<std::size_t>(p)); });
        const bool same = r.runs == reference.runs && r.aggregate == reference.aggregate;
        std::printf("%-10s %8d %10.3f %8.2f %s\n", "openmp", p, t, serial / t, same ? "yes" : "NO");
        if (!same) return 1;
    }
    return 0;
}
