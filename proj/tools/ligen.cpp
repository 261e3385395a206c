#include <iostream>

#include "ligen/cli/commands.hpp"
#include "ligen/common/runtime.hpp"

int main(int argc, char** argv) {
  ligen::configure_allocator();
  return ligen::cli::run(argc, argv, std::cout, std::cerr);
}
