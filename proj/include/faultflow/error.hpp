#pragma once

#include <stdexcept>
#include <string>

namespace faultflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (mesh or scenario file). Carries the 1-based line.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Geometry or interface-map invariants violated.
class TopologyError : public Error {
public:
    using Error::Error;
};

/// Requested mesh cannot resolve the layer widths.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Degenerate cells, non-SPD weights, bad coefficients or boundary data.
class InputError : public Error {
public:
    using Error::Error;
};

/// Scenario configuration is invalid.
class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& what)
        : Error(line > 0 ? "config line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Linear solver failure. `dof` is the offending global index or -1.
class SolverError : public Error {
public:
    SolverError(const std::string& what, long dof = -1, std::string domain = {})
        : Error(what), dof_(dof), domain_(std::move(domain)) {}
    long dof() const noexcept { return dof_; }
    const std::string& domain() const noexcept { return domain_; }

private:
    long dof_;
    std::string domain_;
};

}  // namespace faultflow
