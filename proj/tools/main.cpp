#include <iostream>
#include <string>
#include <vector>

#include "qsdi/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qsdi::run_cli(args, std::cout, std::cerr);
}
