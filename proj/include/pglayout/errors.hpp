#pragma once

#include <stdexcept>
#include <string>

namespace pglayout {

// Broad failure classes, used by the CLI to pick an exit code:
// usage -> 1, input -> 2, internal -> 3.
enum class ErrorKind { usage, input, internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string msg)
        : std::runtime_error(std::move(msg)), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define PGLAYOUT_DEFINE_ERROR(NAME, KIND)                                  \
    class NAME : public Error {                                            \
    public:                                                                \
        explicit NAME(const std::string& msg)                              \
            : Error(ErrorKind::KIND, std::string(#NAME) + ": " + msg) {}   \
    }

PGLAYOUT_DEFINE_ERROR(InvalidParameter, usage);
PGLAYOUT_DEFINE_ERROR(UnknownNode, input);
PGLAYOUT_DEFINE_ERROR(EmptyPath, input);
PGLAYOUT_DEFINE_ERROR(IndexOutOfRange, internal);
PGLAYOUT_DEFINE_ERROR(EmptyGraph, input);
PGLAYOUT_DEFINE_ERROR(DegenerateGraph, input);
PGLAYOUT_DEFINE_ERROR(MalformedLine, input);
PGLAYOUT_DEFINE_ERROR(UnknownSegment, input);
PGLAYOUT_DEFINE_ERROR(NoPaths, input);
PGLAYOUT_DEFINE_ERROR(NonFiniteCoordinate, input);
PGLAYOUT_DEFINE_ERROR(MalformedRow, input);
PGLAYOUT_DEFINE_ERROR(CountMismatch, input);
PGLAYOUT_DEFINE_ERROR(ZeroReference, input);
PGLAYOUT_DEFINE_ERROR(CorpusTooLarge, input);

#undef PGLAYOUT_DEFINE_ERROR

} // namespace pglayout
