// Times the serial reference census against the OpenMP kernel.
//
//   census_bench [--shards K] [--include-slow]
#include <chrono>
#include <cstdio>
#include <cstring>
#include <optional>
#include <string>

#include <omp.h>

#include "ppower/census_kernel.hpp"

using namespace ppower;

namespace {

template <class F>
double timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  unsigned shards = 8;
  bool include_slow = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--shards") == 0 && i + 1 < argc)
      shards = static_cast<unsigned>(std::stoul(argv[++i]));
    else if (std::strcmp(argv[i], "--include-slow") == 0)
      include_slow = true;
  }

  struct Case {
    unsigned n, q;
    bool slow;
  };
  const Case cases[] = {{5, 2, false}, {6, 2, false}, {5, 4, false}, {7, 2, false},
                        {5, 5, false}, {6, 3, false}, {8, 2, true}};

  std::printf("threads available: %d, shards: %u\n", omp_get_max_threads(), shards);
  std::printf("%-8s %12s %10s %12s %12s %9s %6s\n", "(n,q)", "elements", "count", "reference_s", "parallel_s",
              "speedup", "same");
  for (const Case& c : cases) {
    if (c.slow && !include_slow) continue;
    auto field = FieldTable::of_order(c.q);
    const unsigned p = field->characteristic();
    CensusOptions options;
    options.shards = shards;

    std::optional<PowerImage> fast;
    const double t_fast = timed([&] { fast = power_image_parallel(field, c.n, p, options); });

    // The reference is far slower; cap it and report n/a past 2^24 elements.
    std::optional<PowerImage> slow;
    double t_slow = -1.0;
    if (fast->elements <= (std::uint64_t{1} << 24))
      t_slow = timed([&] { slow = power_image_reference(field, c.n, p); });

    char label[16];
    std::snprintf(label, sizeof label, "(%u,%u)", c.n, c.q);
    if (t_slow >= 0)
      std::printf("%-8s %12llu %10llu %12.3f %12.3f %8.1fx %6s\n", label,
                  static_cast<unsigned long long>(fast->elements), static_cast<unsigned long long>(fast->count()),
                  t_slow, t_fast, t_slow / t_fast, slow->members == fast->members ? "yes" : "NO");
    else
      std::printf("%-8s %12llu %10llu %12s %12.3f %9s %6s\n", label, static_cast<unsigned long long>(fast->elements),
                  static_cast<unsigned long long>(fast->count()), "n/a", t_fast, "-", "-");
  }
  return 0;
}
