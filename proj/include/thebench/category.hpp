#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thebench {

enum class Dir : std::uint8_t { left, right };

/// Slash modalities: `.` licenses everything, `^` harmonic composition only,
/// `+` crossing composition only, `*` application only.
enum class Modality : std::uint8_t { dot, diamond, star, cross };

struct Slash {
    Dir dir = Dir::right;
    bool dbl = false;  // `\\` or `//`; always carries Modality::dot
    Modality mod = Modality::dot;

    static Slash make(Dir dir, bool dbl = false, Modality mod = Modality::dot) {
        return Slash{dir, dbl, dbl ? Modality::dot : mod};
    }
    bool operator==(const Slash&) const = default;
};

char modality_char(Modality m);
std::string slash_text(const Slash& s);

struct Feature {
    std::string name;
    std::string value;  // `?x` marks a variable

    bool is_var() const { return !value.empty() && value.front() == '?'; }
    bool operator==(const Feature&) const = default;
};

/// Feature pairs kept sorted by name, so equality is order-insensitive.
class FeatureBundle {
public:
    FeatureBundle() = default;
    /// Throws SyntaxError on a repeated feature name.
    explicit FeatureBundle(std::vector<Feature> pairs);

    const std::vector<Feature>& pairs() const { return pairs_; }
    bool empty() const { return pairs_.empty(); }
    std::size_t size() const { return pairs_.size(); }
    const std::string* find(std::string_view name) const;
    void set(std::string name, std::string value);

    bool operator==(const FeatureBundle&) const = default;

private:
    std::vector<Feature> pairs_;
};

class Category;
using Cat = std::shared_ptr<const Category>;

class Category {
public:
    enum class Kind : std::uint8_t { basic, complex, singleton, meta };

    static Cat basic(std::string name, FeatureBundle features = {});
    static Cat complex(Cat result, Slash slash, Cat arg);
    static Cat singleton(std::string text);
    static Cat meta(std::string var);

    Kind kind() const { return kind_; }
    bool is_basic() const { return kind_ == Kind::basic; }
    bool is_complex() const { return kind_ == Kind::complex; }
    bool is_singleton() const { return kind_ == Kind::singleton; }
    bool is_meta() const { return kind_ == Kind::meta; }

    /// Basic name, singleton text, or meta variable (without `@`).
    const std::string& name() const { return name_; }
    const FeatureBundle& features() const { return features_; }
    const Cat& result() const { return result_; }
    const Cat& arg() const { return arg_; }
    const Slash& slash() const { return slash_; }

private:
    Category() = default;

    Kind kind_ = Kind::basic;
    std::string name_;
    FeatureBundle features_;
    Cat result_;
    Cat arg_;
    Slash slash_;
};

bool cat_equal(const Cat& a, const Cat& b);

/// Argument slots along the result spine.
int arity(const Cat& c);

/// Same shape with every feature bundle emptied.
Cat skeleton(const Cat& c);

bool contains_meta(const Cat& c);

/// Canonical print: complex sub-categories are parenthesized, features sorted,
/// singletons double-quoted.
std::string to_string(const Cat& c);

/// Collapse runs of whitespace to single spaces and trim; used for singleton
/// text and MWE items.
std::string collapse_spaces(std::string_view text);

}  // namespace thebench
