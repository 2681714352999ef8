#include "thebench/grammar_io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "thebench/config.hpp"
#include "thebench/notation.hpp"

namespace thebench {

namespace {

constexpr auto npos = std::string_view::npos;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string> split_char(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t p = s.find(sep, start);
        out.emplace_back(s.substr(start, p == npos ? npos : p - start));
        if (p == npos) return out;
        start = p + 1;
    }
}

bool opens_quote(std::string_view s, std::size_t i) {
    char c = s[i];
    if (c != '"' && c != '\'') return false;
    return i == 0 || !is_ident_char(s[i - 1]);
}

/// First position of `needle` outside quoted singletons.
std::size_t find_top(std::string_view s, std::string_view needle, std::size_t from = 0) {
    char quote = 0;
    for (std::size_t i = from; i < s.size(); ++i) {
        if (quote) {
            if (s[i] == quote) quote = 0;
            continue;
        }
        if (opens_quote(s, i)) {
            quote = s[i];
            continue;
        }
        if (s.substr(i, needle.size()) == needle) return i;
    }
    return npos;
}

using Region = std::pair<std::size_t, std::size_t>;

/// Ranges holding phonological material, where `%` is literal.
std::vector<Region> phon_regions(std::string_view line) {
    std::vector<Region> out;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == npos) return out;
    if (line[first] != '#') {
        std::size_t end = std::min(line.find('|'), line.find("::"));
        if (end != npos) out.emplace_back(first, end);
        return out;
    }
    std::size_t arrow = line.find("<-->");
    if (arrow == npos) return out;
    std::size_t name_end = line.find_first_of(" \t", first);
    if (name_end != npos && name_end < arrow) {
        std::size_t comma = line.find(',', name_end);
        if (comma != npos && comma < arrow) out.emplace_back(name_end, comma);
    }
    std::size_t comma = line.find(',', arrow + 4);
    if (comma != npos) out.emplace_back(arrow + 4, comma);
    return out;
}

Cat category_or_throw(std::string_view text, int lineno) {
    try {
        return parse_category(trim(text));
    } catch (const SyntaxError& e) {
        throw LineError(lineno, std::string("bad category: ") + e.what());
    }
}

Term term_or_throw(std::string_view text, int lineno) {
    try {
        return parse_term(trim(text));
    } catch (const SyntaxError& e) {
        throw LineError(lineno, std::string("bad predicate-argument structure: ") + e.what());
    }
}

bool singleton_result(const Cat& c) {
    if (!c->is_complex()) return false;
    return c->result()->is_singleton() || singleton_result(c->result()) ||
           singleton_result(c->arg());
}

void check_category(const Cat& c, int lineno) {
    if (singleton_result(c))
        throw LineError(lineno, "a singleton cannot be the result of a complex category");
}

/// `cat : lf`
std::pair<Cat, Term> parse_sign(std::string_view text, int lineno) {
    std::size_t colon = find_top(text, ":");
    if (colon == npos) throw LineError(lineno, "missing ':' before the predicate-argument structure");
    Cat c = category_or_throw(text.substr(0, colon), lineno);
    check_category(c, lineno);
    Term t = term_or_throw(text.substr(colon + 1), lineno);
    return {c, t};
}

struct KeySuffix {
    Key key;
    double weight;
};

/// Strips a trailing `<key, weight>`.
std::optional<KeySuffix> take_key_suffix(std::string_view& body, int lineno) {
    if (body.empty() || body.back() != '>') return std::nullopt;
    std::size_t open = body.rfind('<');
    if (open == npos) return std::nullopt;
    std::string_view inner = trim(body.substr(open + 1, body.size() - open - 2));
    std::size_t comma = inner.find(',');
    if (comma == npos) return std::nullopt;
    std::string_view ks = trim(inner.substr(0, comma));
    std::string_view ws = trim(inner.substr(comma + 1));
    if (ks.empty() || !std::all_of(ks.begin(), ks.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return std::nullopt;
    KeySuffix out{};
    auto kr = std::from_chars(ks.data(), ks.data() + ks.size(), out.key);
    if (kr.ec != std::errc() || out.key <= 0) throw LineError(lineno, "key must be a positive integer");
    auto wr = std::from_chars(ws.data(), ws.data() + ws.size(), out.weight);
    if (wr.ec != std::errc() || wr.ptr != ws.data() + ws.size())
        throw LineError(lineno, "bad weight '" + std::string(ws) + "'");
    body = trim(body.substr(0, open));
    return out;
}

std::string lower_token(std::string_view s, int lineno, const char* what) {
    auto parts = split_ws(s);
    if (parts.size() != 1) throw LineError(lineno, std::string("expected one token for ") + what);
    return to_lower(parts.front());
}

SymSide parse_sym_side(std::string_view text, int lineno) {
    std::size_t comma = text.find(',');
    if (comma == npos) throw LineError(lineno, "symmetric rule side needs 'phon, category : lf'");
    SymSide side;
    side.phon = split_ws(text.substr(0, comma));
    if (side.phon.empty())
        throw LineError(lineno, "each side of a symmetric rule needs phonological material");
    auto [c, t] = parse_sign(text.substr(comma + 1), lineno);
    side.category = c;
    side.lf = t;
    if (!corresponds(side.category, side.lf))
        throw LineError(lineno, "complex s-command without a lambda in its l-command");
    return side;
}

Element parse_rule(std::string_view body, int lineno, const std::optional<KeySuffix>& key) {
    body.remove_prefix(1);  // '#'
    std::size_t name_end = 0;
    while (name_end < body.size() && !std::isspace(static_cast<unsigned char>(body[name_end]))) ++name_end;
    if (name_end == 0) throw LineError(lineno, "rule name missing after '#'");
    std::string name = to_lower(body.substr(0, name_end));
    std::string_view rest = body.substr(name_end);

    if (std::size_t arrow = find_top(rest, "<-->"); arrow != npos) {
        if (key) throw LineError(lineno, "symmetric rules take no key; key their entries after sourcing");
        SymRule r;
        r.name = name;
        r.left = parse_sym_side(rest.substr(0, arrow), lineno);
        r.right = parse_sym_side(rest.substr(arrow + 4), lineno);
        return r;
    }
    std::size_t arrow = find_top(rest, "-->");
    if (arrow == npos) throw LineError(lineno, "rule needs '-->' or '<-->'");
    AsymRule r;
    r.name = name;
    std::tie(r.lhs_cat, r.lhs_lf) = parse_sign(rest.substr(0, arrow), lineno);
    std::tie(r.rhs_cat, r.rhs_lf) = parse_sign(rest.substr(arrow + 3), lineno);
    if (key) {
        r.key = key->key;
        r.weight = key->weight;
        r.user_param = true;
    }
    return r;
}

Element parse_entry(std::string_view body, int lineno, const std::optional<KeySuffix>& key) {
    std::size_t dc = find_top(body, "::");
    if (dc == npos) throw LineError(lineno, "entry needs '::' before its category");
    std::string_view left = body.substr(0, dc);
    Entry e;
    std::size_t bar = left.find('|');
    if (bar != npos) {
        e.pos = lower_token(left.substr(bar + 1), lineno, "part of speech");
        left = left.substr(0, bar);
    }
    e.phon = split_ws(left);
    if (e.phon.empty()) throw LineError(lineno, "entry has no phonological material");
    std::tie(e.category, e.lf) = parse_sign(body.substr(dc + 2), lineno);
    if (!corresponds(e.category, e.lf))
        throw LineError(lineno,
                        "complex s-command '" + to_string(e.category) +
                            "' has no lambda in its l-command to keep the correspondence");
    if (key) {
        e.key = key->key;
        e.weight = key->weight;
        e.user_param = true;
    }
    return e;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

double parse_real(std::string_view s, int lineno, const char* what) {
    double v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw LineError(lineno, std::string("bad ") + what + " '" + std::string(s) + "'");
    return v;
}

long parse_long(std::string_view s, int lineno, const char* what) {
    if (!all_digits(s)) throw LineError(lineno, std::string("bad ") + what + " '" + std::string(s) + "'");
    long v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string strip_comment(std::string_view line) {
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == npos || line[first] == '%') return {};
    auto regions = phon_regions(line);
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        bool in_phon = std::any_of(regions.begin(), regions.end(),
                                   [i](const Region& r) { return i >= r.first && i < r.second; });
        if (in_phon) continue;
        if (quote) {
            if (line[i] == quote) quote = 0;
            continue;
        }
        if (opens_quote(line, i)) {
            quote = line[i];
            continue;
        }
        if (line[i] == '%') return std::string(line.substr(0, i));
    }
    return std::string(line);
}

std::optional<Element> parse_element_line(std::string_view line, int lineno) {
    std::string stripped = strip_comment(line);
    std::string_view body = trim(stripped);
    if (body.empty()) return std::nullopt;
    auto key = take_key_suffix(body, lineno);
    if (body.empty()) throw LineError(lineno, "key without an element");
    if (body.front() == '#') return parse_rule(body, lineno, key);
    return parse_entry(body, lineno, key);
}

ParsedGrammar parse_grammar_text(std::string_view text) {
    ParsedGrammar out;
    int lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == npos ? npos : nl - start);
        ++lineno;
        try {
            if (auto e = parse_element_line(line, lineno)) out.grammar.add(std::move(*e));
        } catch (const LineError& err) {
            out.diagnostics.push_back(err.diagnostic());
        }
        if (nl == npos) break;
        start = nl + 1;
    }
    return out;
}

Grammar source_grammar(const Grammar& g) {
    std::set<Key> user_keys;
    for (const auto& e : g.elements()) {
        if (auto k = element_key(e)) {
            if (!user_keys.insert(*k).second) throw DuplicateUserKey(*k);
        }
    }
    Key next = user_keys.empty() ? 1 : *user_keys.rbegin() + 1;
    Grammar out;
    for (const auto& e : g.elements()) {
        if (auto* en = std::get_if<Entry>(&e)) {
            Entry copy = *en;
            if (!copy.key) copy.key = next++;
            out.add(std::move(copy));
        } else if (auto* r = std::get_if<AsymRule>(&e)) {
            AsymRule copy = *r;
            if (!copy.key) copy.key = next++;
            out.add(std::move(copy));
        } else {
            const auto& s = std::get<SymRule>(e);
            for (const SymSide* side : {&s.left, &s.right}) {
                Entry en;
                en.phon = side->phon;
                en.pos = s.name;
                en.category = side->category;
                en.lf = side->lf;
                en.key = next++;
                out.add(std::move(en));
            }
        }
    }
    return out;
}

std::string format_weight(double w) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, w);
    std::string s(buf, r.ptr);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string regenerate_text(const Grammar& sourced) {
    std::string out;
    for (const auto& e : sourced.elements()) {
        out += element_text(e);
        if (auto k = element_key(e)) out += " <" + std::to_string(*k) + ", " + format_weight(element_weight(e)) + ">";
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string src_text(const Grammar& sourced) {
    std::string out(kSrcHeader);
    out += '\n';
    for (const auto& e : sourced.elements()) {
        auto k = element_key(e);
        if (!k) throw BenchError("grammar is not sourced: element without key");
        std::string head = std::to_string(*k) + '\t' + format_weight(element_weight(e));
        if (auto* en = std::get_if<Entry>(&e)) {
            out += "E\t" + head + '\t' + en->phon_text() + '\t' + en->pos + '\t' +
                   to_string(en->category) + '\t' + to_string(en->lf) + '\n';
        } else if (auto* r = std::get_if<AsymRule>(&e)) {
            out += "R\t" + head + '\t' + r->name + '\t' + to_string(r->lhs_cat) + '\t' +
                   to_string(r->lhs_lf) + '\t' + to_string(r->rhs_cat) + '\t' + to_string(r->rhs_lf) + '\n';
        } else {
            throw BenchError("grammar is not sourced: symmetric rule present");
        }
    }
    return out;
}

Grammar parse_src(std::string_view text) {
    Grammar g;
    int lineno = 0;
    bool header = false;
    for (const auto& raw : split_char(text, '\n')) {
        ++lineno;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) continue;
        if (!header) {
            if (line != kSrcHeader)
                throw VersionMismatch("expected '" + std::string(kSrcHeader) + "', found '" + std::string(line) + "'");
            header = true;
            continue;
        }
        auto f = split_char(line, '\t');
        auto bad = [&](const std::string& why) { return SyntaxError(".src line " + std::to_string(lineno) + ": " + why); };
        if (f.empty() || (f[0] != "E" && f[0] != "R")) throw bad("unknown record kind");
        if (f.size() != (f[0] == "E" ? 7u : 8u)) throw bad("wrong field count");
        try {
            Key key = parse_long(f[1], lineno, "key");
            double weight = parse_real(f[2], lineno, "weight");
            if (f[0] == "E") {
                Entry e;
                e.key = key;
                e.weight = weight;
                e.user_param = true;
                e.phon = split_ws(f[3]);
                e.pos = f[4];
                e.category = parse_category(f[5]);
                e.lf = parse_term(f[6]);
                g.add(std::move(e));
            } else {
                AsymRule r;
                r.key = key;
                r.weight = weight;
                r.user_param = true;
                r.name = f[3];
                r.lhs_cat = parse_category(f[4]);
                r.lhs_lf = parse_term(f[5]);
                r.rhs_cat = parse_category(f[6]);
                r.rhs_lf = parse_term(f[7]);
                g.add(std::move(r));
            }
        } catch (const BenchError& e) {
            throw bad(e.what());
        }
    }
    if (!header) throw VersionMismatch("missing '" + std::string(kSrcHeader) + "' header");
    return g;
}

void write_src(const Grammar& sourced, const std::filesystem::path& path) {
    atomic_write(path, src_text(sourced));
}

Grammar read_src(const std::filesystem::path& path) { return parse_src(read_file(path)); }

// ---------------------------------------------------------------------------

std::vector<SupervisionPair> parse_supervision(std::string_view text) {
    std::vector<SupervisionPair> out;
    std::vector<LineDiagnostic> diags;
    int lineno = 0;
    for (const auto& raw : split_char(text, '\n')) {
        ++lineno;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '%') continue;
        // the first ':' outside |...| separates surface from meaning
        std::size_t colon = npos;
        bool in_mwe = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '|') in_mwe = !in_mwe;
            if (line[i] == ':' && !in_mwe) {
                colon = i;
                break;
            }
        }
        if (colon == npos) {
            diags.push_back({lineno, "missing ':' between surface and predicate-argument structure"});
            continue;
        }
        std::string_view lf_text = line.substr(colon + 1);
        if (std::size_t pct = lf_text.find('%'); pct != npos) lf_text = lf_text.substr(0, pct);
        try {
            SupervisionPair p;
            p.surface = tokenize(line.substr(0, colon));
            if (p.surface.empty()) throw LineError(lineno, "empty surface");
            p.gold = parse_term(trim(lf_text));
            out.push_back(std::move(p));
        } catch (const LineError& e) {
            diags.push_back(e.diagnostic());
        } catch (const BenchError& e) {
            diags.push_back({lineno, e.what()});
        }
    }
    if (!diags.empty()) throw ParseErrors(std::move(diags));
    return out;
}

void write_sup(const std::vector<SupervisionPair>& pairs, const std::filesystem::path& path) {
    std::string out(kSupHeader);
    out += '\n';
    for (const auto& p : pairs) out += surface_text(p.surface) + '\t' + to_string(p.gold) + '\n';
    atomic_write(path, out);
}

std::vector<SupervisionPair> read_sup(const std::filesystem::path& path) {
    std::string text = read_file(path);
    auto lines = split_char(text, '\n');
    if (lines.empty() || trim(lines.front()) != kSupHeader)
        throw VersionMismatch("expected '" + std::string(kSupHeader) + "' header in " + path.string());
    std::vector<SupervisionPair> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto f = split_char(lines[i], '\t');
        if (f.size() != 2) throw SyntaxError(".sup line " + std::to_string(i + 1) + ": wrong field count");
        out.push_back(SupervisionPair{tokenize(f[0]), parse_term(f[1])});
    }
    return out;
}

// ---------------------------------------------------------------------------

ExperimentSpec parse_experiment_line(std::string_view line, int lineno, bool check_function) {
    auto f = split_ws(line);
    if (f.size() != 6 && f.size() != 7)
        throw LineError(lineno, "experiment needs 6 or 7 fields: mem heap iterations|xp lr lrr prefix [function]");
    ExperimentSpec s;
    s.source_line = std::string(trim(line));
    s.mem_mb = parse_long(f[0], lineno, "memory size");
    s.heap_mb = parse_long(f[1], lineno, "heap size");
    if (s.heap_mb > s.mem_mb) throw LineError(lineno, "heap larger than memory");
    if (f[2] == "xp") {
        s.extrapolate = true;
    } else {
        s.iterations = static_cast<int>(parse_long(f[2], lineno, "iteration count"));
        if (s.iterations <= 0) throw LineError(lineno, "iteration count must be positive");
    }
    s.learning_rate = parse_real(f[3], lineno, "learning rate");
    if (!(s.learning_rate > 0)) throw LineError(lineno, "learning rate must be positive");
    s.learning_rate_rate = parse_real(f[4], lineno, "learning rate rate");
    s.log_prefix = f[5];
    if (f.size() == 7) {
        if (check_function && !is_processor_function(f[6])) throw UnknownPreFunction(f[6]);
        s.pre_function = f[6];
    }
    return s;
}

std::vector<ExperimentSpec> parse_experiment_file(std::string_view text, bool check_function) {
    std::vector<ExperimentSpec> out;
    std::vector<LineDiagnostic> diags;
    int lineno = 0;
    for (const auto& raw : split_char(text, '\n')) {
        ++lineno;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '%') continue;
        try {
            out.push_back(parse_experiment_line(line, lineno, check_function));
        } catch (const LineError& e) {
            diags.push_back(e.diagnostic());
        }
    }
    if (!diags.empty()) throw ParseErrors(std::move(diags));
    return out;
}

// ---------------------------------------------------------------------------

std::filesystem::path workspace_dir() {
    const char* env = std::getenv("THEBENCH_HOME");
    std::filesystem::path dir = env && *env ? env : "/var/tmp/thebench";
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create workspace " + dir.string() + ": " + ec.message());
    return dir;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename into " + path.string());
    }
}

}  // namespace thebench
