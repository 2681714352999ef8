#include "thebench/tokenize.hpp"

#include <cctype>

#include "thebench/category.hpp"
#include "thebench/errors.hpp"

namespace thebench {

namespace {

void push_word(std::string_view word, std::vector<Token>& out) {
    bool seam = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= word.size(); ++i) {
        if (i == word.size() || word[i] == '+') {
            if (i > start) {
                out.push_back(Token{std::string(word.substr(start, i - start)), false, seam});
                seam = false;
            }
            if (i < word.size() && !out.empty() && i > 0) seam = true;
            start = i + 1;
        }
    }
}

}  // namespace

std::vector<Token> tokenize(std::string_view input) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < input.size()) {
        unsigned char c = static_cast<unsigned char>(input[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (input[i] == '|') {
            std::size_t close = input.find('|', i + 1);
            if (close == std::string_view::npos) throw UnbalancedMweBars();
            std::string text = collapse_spaces(input.substr(i + 1, close - i - 1));
            if (!text.empty()) out.push_back(Token{std::move(text), true, false});
            i = close + 1;
            continue;
        }
        std::size_t j = i;
        while (j < input.size() && !std::isspace(static_cast<unsigned char>(input[j])) &&
               input[j] != '|')
            ++j;
        push_word(input.substr(i, j - i), out);
        i = j;
    }
    return out;
}

std::string surface_text(const std::vector<Token>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty() && !t.bound_left) out += ' ';
        if (t.bound_left) out += '+';
        if (t.mwe) {
            out += '|' + t.text + '|';
        } else {
            out += t.text;
        }
    }
    return out;
}

}  // namespace thebench
