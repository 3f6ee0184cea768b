#include <iostream>
#include <string>
#include <vector>

#include "dpass/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dpass::cli::run(args, std::cout, std::cerr);
}
