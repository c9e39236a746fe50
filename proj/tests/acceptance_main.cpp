// Prints one PASS/FAIL line per acceptance criterion; with an id argument, runs only that one.

#include "fbp/acceptance.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int k = 1; k < argc; ++k) {
    const int id = std::atoi(argv[k]);
    if (id < 1 || id > fbp::criterion_count) {
      std::fprintf(stderr, "usage: %s [1..%d ...]\n", argv[0], fbp::criterion_count);
      return 2;
    }
    ids.push_back(id);
  }
  if (ids.empty())
    for (int id = 1; id <= fbp::criterion_count; ++id) ids.push_back(id);

  int failures = 0;
  for (int id : ids) {
    const auto r = fbp::run_criterion(id);
    std::printf("%s\n", fbp::format_result(r).c_str());
    std::fflush(stdout);
    failures += !r.pass;
  }
  return failures == 0 ? 0 : 1;
}
