#include <iostream>
#include <string>
#include <vector>

#include "doilab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return doilab::cli::run(args, std::cout, std::cerr);
}
