#pragma once

#include <stdexcept>
#include <string>

namespace coagfrag {

/// Bad input: a parameter outside its domain, mismatched grids, malformed files.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical method failed on valid input.
class SolverError : public std::runtime_error {
public:
    enum class Kind {
        SingularSystem,
        Diverged,
        StepCollapse,
        BlowUp,
        NegativeState,
        Breakdown,
    };

    SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace coagfrag
