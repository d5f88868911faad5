#include <iostream>
#include <string>
#include <vector>

#include "stratclass_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stratclass::cli::run(args, std::cout, std::cerr);
}
