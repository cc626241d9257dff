#include <iostream>
#include <string>
#include <vector>

#include "trawlkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return trawlkit::dispatch(args, std::cout, std::cerr);
}
