#include <iostream>
#include <string>
#include <vector>

#include "hbl/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return hbl::cli::run(args, std::cout, std::cerr);
}
