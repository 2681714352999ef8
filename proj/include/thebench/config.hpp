#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "thebench/reduce.hpp"

namespace thebench {

/// Processor switches. Defaults match the documented "(default)" markers.
struct Config {
    bool nfparse = true;
    bool oov = false;
    bool montague = false;  // monad-montague: application only
    bool lambda_display = true;
    bool beam = false;
    double beam_exponent = 0.5;

    /// Chart item ceiling; 0 means the built-in default.
    std::size_t max_items = 0;
    ReduceOptions reduce;

    std::size_t item_ceiling() const { return max_items ? max_items : kDefaultMaxItems; }
    /// Ceiling derived from an experiment's heap size in MB (0 keeps the default).
    void set_heap_mb(long heap_mb);

    static constexpr std::size_t kDefaultMaxItems = 2'000'000;
    static constexpr std::size_t kItemsPerMb = 2'000;
};

/// Names of the built-in processor functions callable by `l` and from
/// experiment files.
const std::vector<std::string>& processor_functions();
bool is_processor_function(std::string_view name);

/// Runs a processor function against `cfg`; returns the text it displays.
/// `arg` is used only by beam-value (sets the exponent when non-empty).
/// Throws UnknownPreFunction.
std::string call_processor_function(std::string_view name, Config& cfg, std::string_view arg = {});

std::string show_config(const Config& cfg);

}  // namespace thebench
