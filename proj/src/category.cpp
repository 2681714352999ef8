#include "thebench/category.hpp"

#include <algorithm>
#include <cctype>

#include "thebench/errors.hpp"

namespace thebench {

char modality_char(Modality m) {
    switch (m) {
        case Modality::dot: return '.';
        case Modality::diamond: return '^';
        case Modality::star: return '*';
        case Modality::cross: return '+';
    }
    return '.';
}

std::string slash_text(const Slash& s) {
    std::string out(s.dbl ? 2 : 1, s.dir == Dir::left ? '\\' : '/');
    if (!s.dbl && s.mod != Modality::dot) out += modality_char(s.mod);
    return out;
}

FeatureBundle::FeatureBundle(std::vector<Feature> pairs) : pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end(),
              [](const Feature& a, const Feature& b) { return a.name < b.name; });
    for (std::size_t i = 1; i < pairs_.size(); ++i) {
        if (pairs_[i].name == pairs_[i - 1].name)
            throw SyntaxError("feature '" + pairs_[i].name + "' repeated in one bundle");
    }
}

const std::string* FeatureBundle::find(std::string_view name) const {
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), name,
                               [](const Feature& f, std::string_view n) { return f.name < n; });
    if (it != pairs_.end() && it->name == name) return &it->value;
    return nullptr;
}

void FeatureBundle::set(std::string name, std::string value) {
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), name,
                               [](const Feature& f, const std::string& n) { return f.name < n; });
    if (it != pairs_.end() && it->name == name) {
        it->value = std::move(value);
    } else {
        pairs_.insert(it, Feature{std::move(name), std::move(value)});
    }
}

Cat Category::basic(std::string name, FeatureBundle features) {
    auto c = std::shared_ptr<Category>(new Category());
    c->kind_ = Kind::basic;
    c->name_ = std::move(name);
    c->features_ = std::move(features);
    return c;
}

Cat Category::complex(Cat result, Slash slash, Cat arg) {
    auto c = std::shared_ptr<Category>(new Category());
    c->kind_ = Kind::complex;
    c->result_ = std::move(result);
    c->arg_ = std::move(arg);
    c->slash_ = Slash::make(slash.dir, slash.dbl, slash.mod);
    return c;
}

Cat Category::singleton(std::string text) {
    auto c = std::shared_ptr<Category>(new Category());
    c->kind_ = Kind::singleton;
    c->name_ = collapse_spaces(text);
    return c;
}

Cat Category::meta(std::string var) {
    auto c = std::shared_ptr<Category>(new Category());
    c->kind_ = Kind::meta;
    c->name_ = std::move(var);
    return c;
}

bool cat_equal(const Cat& a, const Cat& b) {
    if (a == b) return true;
    if (!a || !b || a->kind() != b->kind()) return false;
    switch (a->kind()) {
        case Category::Kind::basic:
            return a->name() == b->name() && a->features() == b->features();
        case Category::Kind::complex:
            return a->slash() == b->slash() && cat_equal(a->result(), b->result()) &&
                   cat_equal(a->arg(), b->arg());
        case Category::Kind::singleton:
        case Category::Kind::meta:
            return a->name() == b->name();
    }
    return false;
}

int arity(const Cat& c) {
    int n = 0;
    for (const Category* p = c.get(); p && p->is_complex(); p = p->result().get()) ++n;
    return n;
}

Cat skeleton(const Cat& c) {
    switch (c->kind()) {
        case Category::Kind::basic:
            return c->features().empty() ? c : Category::basic(c->name());
        case Category::Kind::complex:
            return Category::complex(skeleton(c->result()), c->slash(), skeleton(c->arg()));
        default:
            return c;
    }
}

bool contains_meta(const Cat& c) {
    switch (c->kind()) {
        case Category::Kind::meta: return true;
        case Category::Kind::complex: return contains_meta(c->result()) || contains_meta(c->arg());
        default: return false;
    }
}

namespace {

void print(const Cat& c, std::string& out) {
    switch (c->kind()) {
        case Category::Kind::basic:
            out += c->name();
            if (!c->features().empty()) {
                out += '[';
                bool first = true;
                for (const auto& f : c->features().pairs()) {
                    if (!first) out += ',';
                    first = false;
                    out += f.name;
                    out += '=';
                    out += f.value;
                }
                out += ']';
            }
            break;
        case Category::Kind::complex: {
            auto side = [&out](const Cat& sub) {
                if (sub->is_complex()) {
                    out += '(';
                    print(sub, out);
                    out += ')';
                } else {
                    print(sub, out);
                }
            };
            side(c->result());
            out += slash_text(c->slash());
            side(c->arg());
            break;
        }
        case Category::Kind::singleton: {
            char q = c->name().find('"') == std::string::npos ? '"' : '\'';
            out += q;
            out += c->name();
            out += q;
            break;
        }
        case Category::Kind::meta:
            out += '@';
            out += c->name();
            break;
    }
}

}  // namespace

std::string to_string(const Cat& c) {
    std::string out;
    print(c, out);
    return out;
}

std::string collapse_spaces(std::string_view text) {
    std::string out;
    bool pending = false;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            pending = !out.empty();
        } else {
            if (pending) out += ' ';
            pending = false;
            out += ch;
        }
    }
    return out;
}

}  // namespace thebench
