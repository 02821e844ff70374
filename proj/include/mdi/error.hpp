#pragma once

#include <stdexcept>
#include <string>

namespace mdi {

// Failure categories. Input/parse problems map to CLI exit code 2,
// everything else to exit code 1.
enum class errc {
    invalid_argument,
    parse_error,
    unknown_value,        // read of a grid value that is still masked unknown
    stencil_support,      // stencil would leave the sample range
    margin_violation,     // hole too close to the grid boundary
    nothing_to_impute,
    degenerate_system,
    undefined_frequency,  // decay bound requested at a frequency with a zero component
    hypothesis_violation, // coefficients outside the decay envelope
    non_unique_minimizer, // rank-deficient difference system; detail = null-space dim
    sampling_deficiency,  // not enough neighbors for a local fit
    fit_degeneracy,       // rank-deficient polynomial fit; detail = monomial count
    unstable_plane,       // inconsistent local tangents around the hole
    singular_matrix,
    no_hole,              // not raised; reserved for diagnostics
};

class Error : public std::runtime_error {
public:
    Error(errc code, std::string msg, long detail = -1)
        : std::runtime_error(std::move(msg)), code_(code), detail_(detail) {}

    errc code() const noexcept { return code_; }

    // Extra payload when one number says more than the message
    // (e.g. null-space dimension, offending axis).
    long detail() const noexcept { return detail_; }

private:
    errc code_;
    long detail_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg, long detail = -1) {
    throw Error(code, msg, detail);
}

const char* errc_name(errc code);
bool is_input_error(errc code);

} // namespace mdi
