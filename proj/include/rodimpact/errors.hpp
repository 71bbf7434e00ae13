#pragma once

#include <stdexcept>
#include <string>

namespace rodimpact {

// Base class for every error the library raises on purpose. The name is a stable,
// machine-readable identifier (it ends up on the CLI diagnostics stream and drives
// exit codes); the what() string carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

    const std::string& name() const { return name_; }

private:
    std::string name_;
};

// Configuration errors (CLI exit code 2).
struct ParseError : Error {
    explicit ParseError(const std::string& d) : Error("ParseError", d) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& d) : Error("ValidationError", d) {}
};

// Solver errors (CLI exit code 3).
struct NewtonDivergence : Error {
    explicit NewtonDivergence(const std::string& d) : Error("NewtonDivergence", d) {}
};
struct FixedPointDivergence : Error {
    explicit FixedPointDivergence(const std::string& d) : Error("FixedPointDivergence", d) {}
};
struct SingularSaddleSystem : Error {
    explicit SingularSaddleSystem(const std::string& d) : Error("SingularSaddleSystem", d) {}
};
struct MaxIterationsExceeded : Error {
    explicit MaxIterationsExceeded(const std::string& d) : Error("MaxIterationsExceeded", d) {}
};
struct StatusOscillation : Error {
    explicit StatusOscillation(const std::string& d) : Error("StatusOscillation", d) {}
};
struct OutOfInterval : Error {
    explicit OutOfInterval(const std::string& d) : Error("OutOfInterval", d) {}
};
struct DegenerateInterface : Error {
    explicit DegenerateInterface(const std::string& d) : Error("DegenerateInterface", d) {}
};
struct ZeroReferenceNorm : Error {
    explicit ZeroReferenceNorm(const std::string& d) : Error("ZeroReferenceNorm", d) {}
};
struct NonPositiveError : Error {
    explicit NonPositiveError(const std::string& d) : Error("NonPositiveError", d) {}
};

}  // namespace rodimpact
