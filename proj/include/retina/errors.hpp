#pragma once

#include <stdexcept>
#include <string>

namespace retina {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument value (bad window size, zero dimension, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input data does not match the expected format (channel count, file layout).
class InputFormatError : public Error {
public:
    using Error::Error;
};

/// A call violated an API contract (dimension mismatch, empty dataset, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

class PreprocessError : public Error {
public:
    using Error::Error;
};

class SegmentationError : public Error {
public:
    using Error::Error;
};

/// Training diverged or could not proceed.
class TrainingError : public Error {
public:
    using Error::Error;
};

/// Metric is undefined for the given inputs (empty class, degenerate matrix).
class MetricError : public Error {
public:
    using Error::Error;
};

/// Experiment protocol cannot be satisfied (missing class, too few samples).
class ProtocolError : public Error {
public:
    using Error::Error;
};

/// File could not be read, written, or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace retina
