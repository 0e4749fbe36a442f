#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpm/log.hpp"

namespace {
// Keep expected warnings (rank clamps, duplicates) out of test output.
const bool silenced = (fpm::log::set_sink(nullptr), true);
}
