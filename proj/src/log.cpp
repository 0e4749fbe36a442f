#include "fpm/log.hpp"

#include <iostream>

namespace fpm::log {

namespace {
std::ostream* g_sink = &std::cerr;
}

void set_sink(std::ostream* sink) { g_sink = sink; }

void warn(std::string_view message) {
    if (g_sink != nullptr) {
        *g_sink << "warning: " << message << '\n';
    }
}

}  // namespace fpm::log
