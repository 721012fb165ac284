#include <iostream>
#include <string>
#include <vector>

#include "fracmc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fracmc::cli::run(std::move(args), std::cout, std::cerr);
}
