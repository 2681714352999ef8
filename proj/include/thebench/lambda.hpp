#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>

namespace thebench {

class LambdaTerm;
using Term = std::shared_ptr<const LambdaTerm>;

/// Predicate-argument structure. Identifiers bound by an enclosing lambda are
/// variables; every other identifier is a constant.
class LambdaTerm {
public:
    enum class Kind : std::uint8_t { var, constant, abs, app };

    static Term var(std::string name);
    /// `string_flag` marks the `!token` form.
    static Term constant(std::string name, bool string_flag = false);
    static Term abs(std::string binder, Term body);
    static Term app(Term fun, Term arg);

    Kind kind() const { return kind_; }
    bool is_var() const { return kind_ == Kind::var; }
    bool is_const() const { return kind_ == Kind::constant; }
    bool is_abs() const { return kind_ == Kind::abs; }
    bool is_app() const { return kind_ == Kind::app; }

    /// Variable name, constant name, or abstraction binder.
    const std::string& name() const { return name_; }
    bool string_flag() const { return string_flag_; }
    const Term& body() const { return left_; }
    const Term& fun() const { return left_; }
    const Term& arg() const { return right_; }

private:
    LambdaTerm() = default;

    Kind kind_ = Kind::constant;
    bool string_flag_ = false;
    std::string name_;
    Term left_;
    Term right_;
};

/// Left-associative application, right-extending abstraction bodies,
/// consecutive binders grouped: `\x\y.like x y`.
std::string to_string(const Term& t);

/// Structural identity (binder names included).
bool term_equal(const Term& a, const Term& b);

/// Number of abstractions before the first non-abstraction.
int leading_lambdas(const Term& t);

std::set<std::string> free_vars(const Term& t);

/// Print with bound variables renamed in order of binding (`$1`, `$2`, ...);
/// equal strings iff the terms are alpha-equivalent.
std::string canonical_string(const Term& t);

}  // namespace thebench
