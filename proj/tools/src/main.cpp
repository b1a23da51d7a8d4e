#include <iostream>
#include <string>
#include <vector>

#include "htq_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return htq::cli::run(args, std::cout, std::cerr);
}
