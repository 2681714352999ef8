#pragma once

#include "thebench/lambda.hpp"

namespace thebench {

struct ReduceOptions {
    /// Beta steps allowed before ReductionDepthExceeded.
    long step_budget = 100000;
};

/// Full beta-normal form by normal-order reduction. Capture is avoided by
/// renaming binders with numbered suffixes (`y1`, `y2`, ...), numbered per
/// call. No eta conversion.
Term beta_reduce(const Term& t, const ReduceOptions& opts = {});

/// Equality up to consistent renaming of bound variables.
bool alpha_equiv(const Term& a, const Term& b);

/// Capture-avoiding substitution of `value` for free occurrences of `var`.
Term substitute(const Term& body, const std::string& var, const Term& value);

}  // namespace thebench
