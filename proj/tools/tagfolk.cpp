#include <iostream>
#include <string>
#include <vector>

#include "tagfolk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tagfolk::run_cli(args, std::cout, std::cerr);
}
