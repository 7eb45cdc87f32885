#include <iostream>
#include <string>
#include <vector>

#include "landscape/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return landscape::dispatch(args, std::cout, std::cerr);
}
