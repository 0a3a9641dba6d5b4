#pragma once

#include <stdexcept>
#include <string>

namespace tubexit {

// A kernel or quadrature could not reach the requested tolerance, or a
// computed value fell outside the representable range.
class accuracy_error : public std::runtime_error {
public:
    explicit accuracy_error(const std::string& what) : std::runtime_error(what) {}
};

// A simulation hit its step cap before every path exited.
class nonconvergence_error : public std::runtime_error {
public:
    explicit nonconvergence_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tubexit
