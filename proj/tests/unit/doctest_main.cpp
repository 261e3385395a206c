#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"
#include "ligen/common/runtime.hpp"

int main(int argc, char** argv) {
  ligen::configure_allocator();
  doctest::Context context(argc, argv);
  return context.run();
}
