#pragma once

#include <stdexcept>
#include <string>

namespace sga {

enum class ErrorKind {
    AllZeroInput,
    NegativeInput,
    GridMismatch,
    NonFiniteInput,
    NonFiniteIterate,
    NonZeroMean,
    TooLarge,
    SizeMismatch,
    IndexOutOfRange,
    NotOneDimensional,
    InvalidParams,
    UnsupportedDim,
    UnreadableFile,
    BadMagic,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace sga
