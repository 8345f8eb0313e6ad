#include <iostream>
#include <string>
#include <vector>

#include "rigorbench/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rigorbench::run_cli(args, std::cout, std::cerr);
}
