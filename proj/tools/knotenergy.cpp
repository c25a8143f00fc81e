#include <iostream>

#include "knot/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return knot::run_command(args, std::cout, std::cerr);
}
