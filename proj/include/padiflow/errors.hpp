#pragma once

#include <stdexcept>
#include <string>

namespace padiflow {

// Failure taxonomy used across the library. The CLI maps parse_error to
// exit code 2 and every other kind to exit code 1.
enum class errc {
    invalid_argument,
    hypothesis_violated,
    precondition_violated,
    bad_reduction,
    insufficient_budget,
    parse_error,
};

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::invalid_argument: return "invalid-argument";
        case errc::hypothesis_violated: return "hypothesis-violated";
        case errc::precondition_violated: return "precondition-violated";
        case errc::bad_reduction: return "bad-reduction";
        case errc::insufficient_budget: return "insufficient-budget";
        case errc::parse_error: return "parse-error";
    }
    return "unknown";
}

} // namespace padiflow
