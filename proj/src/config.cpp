#include "thebench/config.hpp"

#include <algorithm>
#include <sstream>

#include "thebench/errors.hpp"

namespace thebench {

void Config::set_heap_mb(long heap_mb) {
    if (heap_mb > 0) max_items = static_cast<std::size_t>(heap_mb) * kItemsPerMb;
}

const std::vector<std::string>& processor_functions() {
    static const std::vector<std::string> names = {
        "beam-on",    "beam-off",    "beam-value",  "lambda-on", "lambda-off",
        "monad-all",  "monad-montague", "nfparse-on", "nfparse-off", "onoff",
        "oov-on",     "oov-off",     "show-config",
    };
    return names;
}

bool is_processor_function(std::string_view name) {
    const auto& names = processor_functions();
    return std::find(names.begin(), names.end(), name) != names.end();
}

namespace {

const char* on_off(bool b) { return b ? "on" : "off"; }

std::string onoff(const Config& cfg) {
    std::ostringstream out;
    out << "nfparse " << on_off(cfg.nfparse) << "\n"
        << "oov " << on_off(cfg.oov) << "\n"
        << "beam " << on_off(cfg.beam) << "\n"
        << "lambda " << on_off(cfg.lambda_display) << "\n"
        << "monad " << (cfg.montague ? "montague" : "all") << "\n";
    return out.str();
}

}  // namespace

std::string show_config(const Config& cfg) {
    std::ostringstream out;
    out << onoff(cfg) << "beam exponent " << cfg.beam_exponent << "\n"
        << "chart item ceiling " << cfg.item_ceiling() << "\n"
        << "beta step budget " << cfg.reduce.step_budget << "\n";
    return out.str();
}

std::string call_processor_function(std::string_view name, Config& cfg, std::string_view arg) {
    if (name == "beam-on") {
        cfg.beam = true;
    } else if (name == "beam-off") {
        cfg.beam = false;
    } else if (name == "beam-value") {
        if (!arg.empty()) {
            try {
                cfg.beam_exponent = std::stod(std::string(arg));
            } catch (const std::exception&) {
                throw BenchError("beam-value: not a number: " + std::string(arg));
            }
        }
        std::ostringstream out;
        out << "beam " << on_off(cfg.beam) << ", exponent " << cfg.beam_exponent << "\n";
        return out.str();
    } else if (name == "lambda-on") {
        cfg.lambda_display = true;
    } else if (name == "lambda-off") {
        cfg.lambda_display = false;
    } else if (name == "monad-all") {
        cfg.montague = false;
    } else if (name == "monad-montague") {
        cfg.montague = true;
    } else if (name == "nfparse-on") {
        cfg.nfparse = true;
    } else if (name == "nfparse-off") {
        cfg.nfparse = false;
    } else if (name == "oov-on") {
        cfg.oov = true;
    } else if (name == "oov-off") {
        cfg.oov = false;
    } else if (name == "onoff") {
        return onoff(cfg);
    } else if (name == "show-config") {
        return show_config(cfg);
    } else {
        throw UnknownPreFunction(std::string(name));
    }
    return std::string(name) + " done\n";
}

}  // namespace thebench
