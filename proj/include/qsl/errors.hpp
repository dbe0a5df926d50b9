#pragma once

#include <stdexcept>
#include <string>

namespace qsl {

// Register widths or string lengths do not fit together.
struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A table violates its family invariant; message names the offending rows.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested outcome has zero probability.
struct post_selection_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance too large for exhaustive treatment; message carries the bound.
struct capability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qsl
