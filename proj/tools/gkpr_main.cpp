#include <iostream>
#include <string>
#include <vector>

#include "gkpr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gkpr::cli::run(args, std::cout, std::cerr);
}
