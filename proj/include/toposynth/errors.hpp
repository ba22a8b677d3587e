#pragma once

#include <stdexcept>
#include <string>

namespace toposynth {

/// Base class for all toposynth errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// A named invariant on an input was violated.
class validation_error : public error {
public:
    explicit validation_error(const std::string& what) : error(what) {}
};

/// An exact oracle was asked to run above its configured size cap.
class limit_exceeded : public error {
public:
    explicit limit_exceeded(const std::string& what) : error(what) {}
};

/// File could not be parsed; message carries location information.
class parse_error : public error {
public:
    explicit parse_error(const std::string& what) : error(what) {}
};

} // namespace toposynth
