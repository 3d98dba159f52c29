#include <iostream>
#include <string>
#include <vector>

#include "iwalab/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return iwalab::run(args, std::cout, std::cerr);
}
