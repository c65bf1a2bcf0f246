#include <iostream>
#include <string>
#include <vector>

#include "chromdesign/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chromdesign::cli::run(args, std::cout, std::cerr);
}
