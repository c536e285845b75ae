#include <iostream>
#include <string>
#include <vector>

#include "sfacheck/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sfacheck::run(args, std::cout, std::cerr);
}
