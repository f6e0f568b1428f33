#include <iostream>

#include "pedacc/driver.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pedacc::cli::run(args, std::cout, std::cerr);
}
