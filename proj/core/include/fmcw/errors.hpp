#pragma once

#include <stdexcept>
#include <string>

namespace fmcw {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidScenario : public Error {
public:
    explicit InvalidScenario(const std::string& what) : Error(what) {}
};

class EmptyFrame : public Error {
public:
    explicit EmptyFrame(const std::string& what) : Error(what) {}
};

class BandEmpty : public Error {
public:
    explicit BandEmpty(const std::string& what) : Error(what) {}
};

class BreakpointBandExceedsRate : public Error {
public:
    explicit BreakpointBandExceedsRate(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class InsufficientPoints : public Error {
public:
    explicit InsufficientPoints(const std::string& what) : Error(what) {}
};

class DegenerateConic : public Error {
public:
    explicit DegenerateConic(const std::string& what) : Error(what) {}
};

class LowSNRForCalibration : public Error {
public:
    explicit LowSNRForCalibration(const std::string& what) : Error(what) {}
};

class SingularTransform : public Error {
public:
    explicit SingularTransform(const std::string& what) : Error(what) {}
};

class TooFewChirps : public Error {
public:
    explicit TooFewChirps(const std::string& what) : Error(what) {}
};

class AxisMismatch : public Error {
public:
    explicit AxisMismatch(const std::string& what) : Error(what) {}
};

class PeakNotFound : public Error {
public:
    explicit PeakNotFound(const std::string& what) : Error(what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace fmcw
