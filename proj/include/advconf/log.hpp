#pragma once

#include <iostream>
#include <string_view>

namespace advconf::log {

enum class Level { Quiet = 0, Info = 1, Debug = 2 };

// Read once from ADVCONF_LOG (quiet|info|debug); defaults to info.
Level level();

void info(std::string_view msg);
void debug(std::string_view msg);

}  // namespace advconf::log
