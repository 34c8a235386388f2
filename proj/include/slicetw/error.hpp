#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slicetw {

enum class Err {
    RealInput,
    SouthPole,
    Pole,
    BranchCut,
    OutOfDomain,
    SyntaxError,
    DegenerateUnits,
    NotAStem,
    DomainMismatch,
    ZeroNormal,
    NotInvertible,
    DegeneratePlane,
    BranchInconsistent,
    XiSixVanishes,
    NotSliceAffine,
    SingularDifferential,
    WrongHalfSpace,
    TooLarge,
    InvalidArgument,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& what, std::size_t offset = 0)
        : std::runtime_error(what), code_(code), offset_(offset) {}

    Err code() const { return code_; }
    // byte offset into the source text, meaningful for SyntaxError only
    std::size_t offset() const { return offset_; }

private:
    Err code_;
    std::size_t offset_;
};

[[noreturn]] inline void fail(Err code, const std::string& what, std::size_t offset = 0) {
    throw Error(code, what, offset);
}

} // namespace slicetw
