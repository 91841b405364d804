#include <iostream>
#include <string>
#include <vector>

#include "kalikow/cli.hpp"

int main(int argc, char** argv) {
  return kalikow::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
