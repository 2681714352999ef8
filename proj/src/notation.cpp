#include "thebench/notation.hpp"

#include <cctype>
#include <vector>

#include "thebench/errors.hpp"

namespace thebench {

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_ident_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '~' || c == '-' || c == '\'' || u >= 0x80;
}

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    // no whitespace skipping
    char peek_raw() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char get() {
        char c = peek();
        if (c != '\0') ++pos_;
        return c;
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    std::string ident(const char* what) {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        if (start == pos_) fail(std::string("expected ") + what);
        return std::string(text_.substr(start, pos_ - start));
    }
    std::string quoted() {
        char q = get();
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != q) ++pos_;
        if (pos_ >= text_.size()) fail("unterminated quoted singleton");
        std::string out(text_.substr(start, pos_ - start));
        ++pos_;
        return out;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw SyntaxError(why + " at column " + std::to_string(pos_ + 1) + " in '" +
                          std::string(text_) + "'");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

Cat parse_cat_expr(Cursor& in);

Cat parse_cat_primary(Cursor& in) {
    char c = in.peek();
    if (c == '(') {
        in.get();
        Cat inner = parse_cat_expr(in);
        in.expect(')');
        return inner;
    }
    if (c == '@') {
        in.get();
        std::string var = in.ident("meta-category variable");
        if (in.peek() == '[') in.fail("meta-categories cannot carry features");
        return Category::meta(var);
    }
    if (c == '\'' || c == '"') {
        std::string text = collapse_spaces(in.quoted());
        if (text.empty()) in.fail("empty singleton");
        return Category::singleton(text);
    }
    std::string name = to_lower(in.ident("category"));
    std::vector<Feature> feats;
    if (in.accept('[')) {
        if (!in.accept(']')) {
            do {
                std::string fname = to_lower(in.ident("feature name"));
                in.expect('=');
                std::string value;
                if (in.accept('?')) {
                    value = "?" + to_lower(in.ident("feature variable"));
                } else {
                    value = to_lower(in.ident("feature value"));
                }
                feats.push_back(Feature{std::move(fname), std::move(value)});
            } while (in.accept(','));
            in.expect(']');
        }
    }
    try {
        return Category::basic(std::move(name), FeatureBundle(std::move(feats)));
    } catch (const SyntaxError& e) {
        in.fail(e.what());
    }
}

Cat parse_cat_expr(Cursor& in) {
    Cat left = parse_cat_primary(in);
    for (;;) {
        char c = in.peek();
        if (c != '\\' && c != '/') return left;
        in.get();
        Slash s;
        s.dir = c == '\\' ? Dir::left : Dir::right;
        if (in.peek_raw() == c) {
            in.get();
            s.dbl = true;
        }
        char m = in.peek_raw();
        if (m == '.' || m == '^' || m == '*' || m == '+') {
            if (s.dbl) in.fail("double slashes carry no modality");
            in.get();
            s.mod = m == '.' ? Modality::dot
                    : m == '^' ? Modality::diamond
                    : m == '*' ? Modality::star
                               : Modality::cross;
        }
        Cat right = parse_cat_primary(in);
        left = Category::complex(std::move(left), s, std::move(right));
    }
}

Term parse_term_expr(Cursor& in, std::vector<std::string>& scope);

Term resolve(const std::string& name, const std::vector<std::string>& scope) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (*it == name) return LambdaTerm::var(name);
    return LambdaTerm::constant(name);
}

Term parse_lambda(Cursor& in, std::vector<std::string>& scope) {
    std::vector<std::string> binders;
    while (in.accept('\\')) binders.push_back(to_lower(in.ident("lambda binder")));
    in.expect('.');
    for (const auto& b : binders) scope.push_back(b);
    Term body = parse_term_expr(in, scope);
    for (std::size_t i = 0; i < binders.size(); ++i) scope.pop_back();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = LambdaTerm::abs(*it, body);
    return body;
}

Term parse_term_expr(Cursor& in, std::vector<std::string>& scope) {
    Term acc;
    for (;;) {
        char c = in.peek();
        Term next;
        if (c == '\\') {
            next = parse_lambda(in, scope);
            acc = acc ? LambdaTerm::app(acc, next) : next;
            return acc;  // abstraction bodies extend to the right
        }
        if (c == '(') {
            in.get();
            next = parse_term_expr(in, scope);
            in.expect(')');
        } else if (c == '!') {
            in.get();
            next = LambdaTerm::constant(in.ident("string token"), true);
        } else if (c != '\0' && is_ident_char(c)) {
            next = resolve(to_lower(in.ident("term")), scope);
        } else {
            break;
        }
        acc = acc ? LambdaTerm::app(acc, next) : next;
    }
    if (!acc) in.fail("expected a term");
    return acc;
}

}  // namespace

Cat parse_category(std::string_view text) {
    Cursor in(text);
    Cat c = parse_cat_expr(in);
    if (!in.done()) in.fail("trailing material in category");
    return c;
}

Term parse_term(std::string_view text) {
    Cursor in(text);
    std::vector<std::string> scope;
    Term t = parse_term_expr(in, scope);
    if (!in.done()) in.fail("trailing material in term (unbalanced parenthesis?)");
    return t;
}

}  // namespace thebench
