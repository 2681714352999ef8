#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace thebench {

struct Token {
    std::string text;         // MWE interiors are space-collapsed
    bool mwe = false;         // written as |...|
    bool bound_left = false;  // joined to the previous token by `+`

    bool operator==(const Token&) const = default;
};

/// Splits surface input: whitespace separates items, `|...|` groups a
/// multiword expression into one item, `a+b` yields `a`, `b` with a bound
/// seam. Throws UnbalancedMweBars.
std::vector<Token> tokenize(std::string_view input);

/// Surface form of tokens (MWEs re-bracketed, seams re-joined).
std::string surface_text(const std::vector<Token>& tokens);

}  // namespace thebench
