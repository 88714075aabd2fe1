#pragma once

#include <stdexcept>
#include <string>

namespace ddgeo {

// Mirrors ddgeo_status in the C API; keep the numeric values in sync.
enum class ErrorCode : int {
    InvalidArgument = 1,
    DimensionMismatch = 2,
    NotPersistentlyExciting = 3,
    HorizonTooShort = 4,
    NotControlledInvariant = 5,
    TrajectoryNotInformative = 6,
    ResidualExceedsTolerance = 7,
    DegenerateSystem = 8,
    BlockTriangularizationFailed = 9,
    NoStealthyAttack = 10,
    Io = 11,
    Parse = 12,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ddgeo
