#include <iostream>
#include <string>
#include <vector>

#include "lorentz/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return lorentz::run_cli(args, std::cout, std::cerr);
}
