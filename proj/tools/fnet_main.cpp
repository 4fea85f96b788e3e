#include <iostream>
#include <string>
#include <vector>

#include "fuzzynet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fuzzynet::cli_dispatch(args, std::cin, std::cout, std::cerr);
}
