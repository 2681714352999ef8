#include "thebench/casegen.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "thebench/errors.hpp"
#include "thebench/grammar_io.hpp"
#include "thebench/notation.hpp"

namespace thebench {

namespace {

/// Rule text with variables numbered by first occurrence, for dedup.
std::string rule_shape(const Cat& lhs, const Cat& rhs) {
    std::string text = to_string(lhs) + " --> " + to_string(rhs);
    std::map<std::string, std::string> names;
    std::string out;
    for (std::size_t i = 0; i < text.size();) {
        if (text[i] == '?' || text[i] == '@') {
            std::size_t j = i + 1;
            while (j < text.size() && is_ident_char(text[j])) ++j;
            std::string var = text.substr(i, j - i);
            auto [it, fresh] = names.emplace(var, std::string(1, text[i]) + "v" + std::to_string(names.size()));
            (void)fresh;
            out += it->second;
            i = j;
        } else {
            out += text[i++];
        }
    }
    return out;
}

Term raise_lf() { return parse_term("\\lf\\p.p lf"); }

}  // namespace

CaseGeneration generate_case_functions(const Grammar& g, const std::vector<std::string>& pos_list) {
    if (pos_list.empty()) throw EmptyPosList();
    CaseGeneration out;
    std::set<std::string> seen;
    std::map<std::string, int> counters;
    bool matched = false;
    const Term lf = raise_lf();
    const Term lhs_lf = LambdaTerm::constant("lf");

    for (const std::string& pos_raw : pos_list) {
        std::string pos = to_lower(pos_raw);
        for (const Entry* e : g.entries()) {
            if (e->pos != pos) continue;
            matched = true;
            for (Cat f = e->category; f->is_complex(); f = f->result()) {
                const Cat& arg = f->arg();
                const Cat& res = f->result();
                if (f->slash().dbl) {
                    out.notes.push_back("skipped double-slash slot in " + to_string(e->category) + " (" +
                                        e->phon_text() + ")");
                    continue;
                }
                if (arg->is_singleton() || arg->is_meta()) continue;
                Dir outer = f->slash().dir == Dir::left ? Dir::right : Dir::left;
                Cat raised = Category::complex(res, Slash::make(outer), f);
                std::string shape = rule_shape(arg, raised);
                if (!seen.insert(shape).second) continue;
                AsymRule r;
                r.name = "case-" + pos + "-" + std::to_string(++counters[pos]);
                r.lhs_cat = arg;
                r.lhs_lf = lhs_lf;
                r.rhs_cat = raised;
                r.rhs_lf = lf;
                out.rules.push_back(std::move(r));
            }
        }
    }
    if (!matched) out.notes.push_back("no entries with the given parts of speech");
    return out;
}

std::string arules_text(const std::vector<AsymRule>& rules) {
    std::string out;
    for (const auto& r : rules) out += element_text(Element{r}) + '\n';
    return out;
}

std::filesystem::path write_arules(const std::vector<AsymRule>& rules, const std::string& grammar_name,
                                   const std::filesystem::path& dir) {
    auto path = dir / (grammar_name + ".sc.arules");
    atomic_write(path, arules_text(rules));
    return path;
}

}  // namespace thebench
