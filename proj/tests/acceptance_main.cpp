#include <iostream>

#include "lanelab/acceptance.hpp"

int main(int argc, char** argv) {
  const bool quick = (argc > 1 && std::string(argv[1]) == "--quick");
  auto suite = lanelab::acceptance::run_suite(quick, std::cout);
  return suite.all_pass ? 0 : 1;
}
