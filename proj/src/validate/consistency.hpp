#pragma once

#include <string>
#include <string_view>

#include "model/value.hpp"

namespace simclone::validate {

std::size_t levenshtein(std::string_view a, std::string_view b);

// True when, over the records where both profiles returned, the outputs are
// equal or related by one constant rule per output position: additive offset
// or multiplicative ratio for numbers, edit distance for strings. Records where
// exactly one side returned break consistency. Throws
// Error(insufficient_data) with fewer than two jointly returned records.
bool output_consistency(const IOProfile& p, const IOProfile& q);

}  // namespace simclone::validate
