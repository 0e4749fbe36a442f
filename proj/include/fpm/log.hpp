#pragma once

#include <ostream>
#include <string_view>

namespace fpm::log {

// Warnings go to stderr unless redirected; nullptr silences them.
void set_sink(std::ostream* sink);
void warn(std::string_view message);

}  // namespace fpm::log
