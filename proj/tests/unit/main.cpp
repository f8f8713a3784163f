#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "ideoscale/log.hpp"

int main(int argc, char** argv) {
  ideoscale::set_log_level(ideoscale::LogLevel::Quiet);
  doctest::Context context(argc, argv);
  return context.run();
}
