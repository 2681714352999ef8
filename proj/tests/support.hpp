#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "thebench/engine.hpp"
#include "thebench/grammar_io.hpp"
#include "thebench/notation.hpp"

#ifndef THEBENCH_GRAMMARS_DIR
#define THEBENCH_GRAMMARS_DIR "grammars"
#endif

namespace tbtest {

inline std::filesystem::path grammar_path(const std::string& name) {
    return std::filesystem::path(THEBENCH_GRAMMARS_DIR) / name;
}

/// Parses and sources grammar text; fails loudly on diagnostics.
inline thebench::Grammar sourced(std::string_view text) {
    auto pg = thebench::parse_grammar_text(text);
    if (!pg.ok()) throw thebench::ParseErrors(pg.diagnostics);
    return thebench::source_grammar(pg.grammar);
}

inline thebench::Grammar sourced_file(const std::string& name) {
    return sourced(thebench::read_file(grammar_path(name)));
}

inline std::string cat(std::string_view text) { return thebench::to_string(thebench::parse_category(text)); }

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("thebench-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Runs a body with the working directory switched, restoring it after.
template <class F>
void in_dir(const std::filesystem::path& dir, F&& f) {
    auto old = std::filesystem::current_path();
    std::filesystem::current_path(dir);
    try {
        f();
    } catch (...) {
        std::filesystem::current_path(old);
        throw;
    }
    std::filesystem::current_path(old);
}

}  // namespace tbtest
