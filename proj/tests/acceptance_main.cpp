// Acceptance checks: one CHECK line per criterion, exit 0 iff all pass.
// Optional arguments restrict the run to the named criteria.
#include <iostream>

#include "qweyl/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> only(argv + 1, argv + argc);
  qweyl::CheckSink sink{std::cout};
  qweyl::acceptance::run_all(sink, only);
  return sink.all_pass ? 0 : 1;
}
