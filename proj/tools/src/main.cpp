#include <iostream>
#include <string>
#include <vector>

#include "emdcor_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return emdcor::cli::run(args, std::cout, std::cerr);
}
