#pragma once

#include <stdexcept>
#include <string>

namespace salvo {

enum class ErrorKind {
    degenerate_range,
    invalid_speed_ordering,
    invalid_gain,
    singular_los_rate,
    singular_look_angle,
    disconnected_graph,
    vertex_out_of_range,
    overflow,
    domain,
    constraint,
    non_finite,
    validation,
    io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind so the
/// command-line front end can map it onto an exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace salvo
