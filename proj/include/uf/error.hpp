#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

// Two objects were built on different grids.
struct GridMismatch : Error {
    GridMismatch() : Error("grid mismatch") {}
    explicit GridMismatch(const std::string& what) : Error("grid mismatch: " + what) {}
};

struct QuadratureError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

// Support of the state entered the margin band next to the grid box.
struct MarginViolation : Error {
    MarginViolation(double t, std::size_t c)
        : Error("support reached the margin band at t=" + std::to_string(t) +
                " (cell " + std::to_string(c) + ")"),
          time(t), cell(c) {}
    double time;
    std::size_t cell;
};

struct NonFiniteState : Error {
    NonFiniteState(double t, const std::string& where)
        : Error("non-finite value in " + where + " at t=" + std::to_string(t)), time(t) {}
    double time;
};

}  // namespace uf
