#pragma once

#include <stdexcept>
#include <string>

namespace zsram {

enum class Errc {
    MalformedLine,
    SelfLoop,
    DuplicateEdge,
    CycleDetected,
    EdgeCountNotDivisible,
    HasIsolatedVertex,
    PreconditionViolated,
    NonInjectiveMap,
    VertexOutOfRange,
    ModulusMismatch,
    MNotDivisible,
    LengthMismatch,
    HypothesisViolated,
    AltC4Present,
    WitnessMismatch,
    InvalidSwap,
    HostTooSmall,
    NoWitnessNeeded,
    NotFound,
    IoError,
};

const char* errc_name(Errc c);

struct Error : std::runtime_error {
    Errc code;
    Error(Errc c, const std::string& msg)
        : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code(c) {}
};

} // namespace zsram
