#pragma once

#include <stdexcept>
#include <string>

namespace cec {

/// Invalid or inconsistent scenario/configuration data.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The tracking error left the self-adjustable envelope.
class OutOfEnvelope : public std::runtime_error {
public:
    OutOfEnvelope(double t, double e1, double lower, double upper);
    double time() const noexcept { return time_; }
    double error() const noexcept { return e1_; }

private:
    double time_;
    double e1_;
};

class MalformedCodeword : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// mu1 <= 0, which only happens after an upstream envelope breach.
class DegenerateTransform : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedOrder : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A state component became NaN or infinite during integration.
class NonFinite : public std::runtime_error {
public:
    NonFinite(double t, const std::string& what);
    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace cec
