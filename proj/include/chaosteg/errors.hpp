#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chaosteg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- key / chaos ----

class KeyError : public Error {
public:
    using Error::Error;
};

class OutOfRangeError : public KeyError {
public:
    explicit OutOfRangeError(std::string param, const std::string& detail)
        : KeyError("key parameter out of range: " + param + " (" + detail + ")"),
          param_(std::move(param)) {}
    const std::string& param() const noexcept { return param_; }

private:
    std::string param_;
};

class DegenerateOrbitError : public KeyError {
public:
    explicit DegenerateOrbitError(std::string sequence)
        : KeyError("degenerate chaotic orbit in sequence: " + sequence),
          sequence_(std::move(sequence)) {}
    const std::string& sequence() const noexcept { return sequence_; }

private:
    std::string sequence_;
};

// ---- image formats / io ----

class FormatError : public Error {
public:
    using Error::Error;
};

class UnsupportedFormatError : public FormatError {
public:
    using FormatError::FormatError;
};

class UnsupportedDepthError : public FormatError {
public:
    using FormatError::FormatError;
};

class DecodeError : public FormatError {
public:
    using FormatError::FormatError;
};

class IoError : public Error {
public:
    using Error::Error;
};

// ---- text config files ----

class ParseError : public Error {
public:
    using Error::Error;
};

// ---- contract violations between buffers/arguments ----

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

class ChannelMismatchError : public Error {
public:
    using Error::Error;
};

class LengthMismatchError : public Error {
public:
    using Error::Error;
};

class PermLengthMismatchError : public Error {
public:
    using Error::Error;
};

class ZeroVarianceError : public Error {
public:
    using Error::Error;
};

class CapacityError : public Error {
public:
    CapacityError(std::uint64_t needed_bits, std::uint64_t available_bits)
        : Error("payload needs " + std::to_string(needed_bits) +
                " bits but carrier provides " + std::to_string(available_bits)),
          needed_(needed_bits), available_(available_bits) {}
    std::uint64_t needed_bits() const noexcept { return needed_; }
    std::uint64_t available_bits() const noexcept { return available_; }

private:
    std::uint64_t needed_;
    std::uint64_t available_;
};

} // namespace chaosteg
