#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return prefadvisor::cli::run(args, std::cin, std::cout, std::cerr);
}
