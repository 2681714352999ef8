#pragma once

#include <string>
#include <string_view>

#include "thebench/category.hpp"
#include "thebench/lambda.hpp"

namespace thebench {

/// s-command text, e.g. `(s\^np[agr=3s])/^np`. Slashes associate left.
/// Names, features and values are lower-cased; singleton text keeps its case.
/// Throws SyntaxError.
Cat parse_category(std::string_view text);

/// l-command text, e.g. `\x\y.like x y`. Application associates left and
/// abstraction bodies extend right. Identifiers are lower-cased except `!`
/// tokens. Throws SyntaxError.
Term parse_term(std::string_view text);

std::string to_lower(std::string_view s);

bool is_ident_char(char c);

}  // namespace thebench
