#include <vector>
#include <string>

#include "fwlab/experiments.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fwlab::cli_main(args);
}
