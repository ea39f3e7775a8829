#pragma once

#include <stdexcept>
#include <string>

namespace raceline {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The projection-rate denominator dropped below the singularity guard,
/// i.e. the local-minimum certificate no longer holds at the tracked branch.
class SingularProjection : public Error {
public:
    SingularProjection(double theta, double denominator)
        : Error("singular projection at theta=" + std::to_string(theta) +
                " (denominator " + std::to_string(denominator) + ")"),
          theta_(theta), denominator_(denominator) {}

    SingularProjection(double theta, double denominator, double at_time)
        : Error("singular projection at theta=" + std::to_string(theta) +
                " (denominator " + std::to_string(denominator) + ") at t=" +
                std::to_string(at_time) + " s"),
          theta_(theta), denominator_(denominator) {}

    double theta() const { return theta_; }
    double denominator() const { return denominator_; }

private:
    double theta_;
    double denominator_;
};

/// No stationary projection point could be located on the path interval.
class NoProjectionFound : public Error {
public:
    using Error::Error;
};

/// The stationarity residual contains non-finite entries; the run must stop.
class NonFiniteResidual : public Error {
public:
    using Error::Error;
};

/// Damped Newton refinement could not bring the residual under the accept threshold.
class InitializationFailed : public Error {
public:
    using Error::Error;
};

/// A race in the comparison protocol finished without an overtake.
class IncompleteRaces : public Error {
public:
    using Error::Error;
};

/// CSV header or column count disagrees with the documented schema.
class SchemaMismatch : public Error {
public:
    using Error::Error;
};

/// A CSV cell could not be parsed (or holds a non-finite value).
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what + " (line " + std::to_string(line) +
                ", column " + std::to_string(column) + ")"),
          line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Configuration file is missing, malformed, or violates the schema.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace raceline
