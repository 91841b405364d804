// Runs every acceptance criterion with a fixed seed and prints one line each.
// Exit status is non-zero if any criterion fails.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "kalikow/verify.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 20190301;
  if (argc > 1) seed = std::stoull(argv[1]);
  const auto results = kalikow::verify::run_suite("all", seed);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << kalikow::verify::format_line(r) << "\n";
    if (!r.passed) ++failed;
  }
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
