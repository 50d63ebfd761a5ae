#pragma once

#include <stdexcept>
#include <string>

namespace tgs {

// Errors raised while reading the GSMK1 container. The kind distinguishes the
// three corruption classes callers are expected to tell apart.
class ContainerError : public std::runtime_error {
public:
    enum class Kind { BadMagic, VersionMismatch, Truncated, Io };

    ContainerError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Training produced a non-finite loss; the run aborts with a diagnostic.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tgs
