#include <iostream>

#include "flowcalc/cli/app.hpp"

int main(int argc, char** argv) {
  return flowcalc::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
