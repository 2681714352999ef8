#pragma once

#include <optional>
#include <string>
#include <vector>

namespace thebench {

/// Minimal line editor for a terminal: left/right, backspace, home/end,
/// UP/DOWN through `history`. Falls back to plain getline when stdin is not
/// a terminal. Returns nullopt at end of input.
std::optional<std::string> read_line(const std::string& prompt, const std::vector<std::string>& history);

}  // namespace thebench
