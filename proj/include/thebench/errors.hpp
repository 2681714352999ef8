#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace thebench {

/// Base for every failure the workbench reports to the user.
class BenchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A malformed line in one of the textual formats.
struct LineDiagnostic {
    int line = 0;
    std::string reason;

    std::string str() const { return "line " + std::to_string(line) + ": " + reason; }
};

class LineError : public BenchError {
public:
    LineError(int line, std::string reason)
        : BenchError("line " + std::to_string(line) + ": " + reason),
          diagnostic_{line, std::move(reason)} {}

    const LineDiagnostic& diagnostic() const { return diagnostic_; }

private:
    LineDiagnostic diagnostic_;
};

/// Thrown when a parser collected one or more line diagnostics.
class ParseErrors : public BenchError {
public:
    explicit ParseErrors(std::vector<LineDiagnostic> diags)
        : BenchError(join(diags)), diags_(std::move(diags)) {}

    const std::vector<LineDiagnostic>& diagnostics() const { return diags_; }

private:
    static std::string join(const std::vector<LineDiagnostic>& diags) {
        std::string out;
        for (const auto& d : diags) {
            if (!out.empty()) out += '\n';
            out += d.str();
        }
        return out;
    }
    std::vector<LineDiagnostic> diags_;
};

class SyntaxError : public BenchError {
public:
    using BenchError::BenchError;
};

class IoError : public BenchError {
public:
    using BenchError::BenchError;
};

class VersionMismatch : public BenchError {
public:
    using BenchError::BenchError;
};

class DuplicateUserKey : public BenchError {
public:
    explicit DuplicateUserKey(long key)
        : BenchError("duplicate user key " + std::to_string(key)), key_(key) {}
    long key() const { return key_; }

private:
    long key_;
};

class UnknownPreFunction : public BenchError {
public:
    explicit UnknownPreFunction(const std::string& name)
        : BenchError("unknown processor function: " + name) {}
};

class ReductionDepthExceeded : public BenchError {
public:
    using BenchError::BenchError;
};

class UnbalancedMweBars : public BenchError {
public:
    UnbalancedMweBars() : BenchError("unbalanced | in input") {}
};

class NoGrammarLoaded : public BenchError {
public:
    NoGrammarLoaded() : BenchError("no grammar loaded (use g)") {}
};

class NoDerivations : public BenchError {
public:
    explicit NoDerivations(const std::string& input)
        : BenchError("no analysis for: " + input) {}
};

class UnknownKey : public BenchError {
public:
    explicit UnknownKey(long key) : BenchError("unknown parameter key " + std::to_string(key)) {}
};

class ChartOverflow : public BenchError {
public:
    using BenchError::BenchError;
};

class EmptyPosList : public BenchError {
public:
    EmptyPosList() : BenchError("case functions need at least one part of speech") {}
};

class EmptySupervision : public BenchError {
public:
    EmptySupervision() : BenchError("supervision file has no pairs") {}
};

class SpawnFailure : public BenchError {
public:
    using BenchError::BenchError;
};

class UnknownCommand : public BenchError {
public:
    explicit UnknownCommand(const std::string& cmd) : BenchError("unknown command: " + cmd + " (try ?)") {}
};

}  // namespace thebench
