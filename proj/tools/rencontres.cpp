#include <iostream>
#include <string>
#include <vector>

#include "rencontres/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rencontres::cli::run(args, std::cout, std::cerr);
}
