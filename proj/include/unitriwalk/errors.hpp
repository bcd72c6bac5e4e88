#pragma once

#include <stdexcept>
#include <string>

namespace utw {

// Base for all library errors so callers (and the C API) can catch in one place.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

// State-space enumeration would exceed the configured cap. Never truncates.
struct CapExceeded : Error {
    using Error::Error;
};

struct NotLumpable : Error {
    NotLumpable(std::string msg, std::size_t state_a, std::size_t state_b, std::size_t cls)
        : Error(std::move(msg)), state_a(state_a), state_b(state_b), cls(cls) {}
    std::size_t state_a;
    std::size_t state_b;
    std::size_t cls;
};

struct DegenerateFit : Error {
    using Error::Error;
};

// tmix_search could not bracket the target below the configured horizon cap.
struct BracketNotFound : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace utw
