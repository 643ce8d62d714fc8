#include <iostream>

#include "invtag/commands.hpp"

int main(int argc, char** argv) {
  return invtag::cli::run(argc, argv, std::cout, std::cerr);
}
