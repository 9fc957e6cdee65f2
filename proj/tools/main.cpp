#include <iostream>
#include <string>
#include <vector>

#include "padicres/acceptance.hpp"
#include "padicres/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return padicres::run_cli(args, std::cout, std::cerr, padicres::acceptance::run_suite);
}
