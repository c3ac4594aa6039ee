#include <iostream>
#include <string>
#include <vector>

#include "refcast/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return refcast::run_cli(args, std::cout, std::cerr);
}
