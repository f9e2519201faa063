#include <iostream>
#include <string>
#include <vector>

#include "maxwin_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return maxwin::cli::run(args, std::cout, std::cerr);
}
