#include <iostream>
#include <string>
#include <vector>

#include "plantner/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return plantner::run_cli(args, std::cout, std::cerr);
}
