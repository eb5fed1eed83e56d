#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace snu {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A caller violated an operation precondition (bad parameter, wrong domain).
class InvalidArgument : public Error {
  public:
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

/// A profile failed validation; `invariant()` names the violated invariant.
class ProfileInvariantError : public Error {
  public:
    ProfileInvariantError(std::string invariant, const std::string& msg)
        : Error("profile invariant '" + invariant + "' violated: " + msg),
          invariant_(std::move(invariant)) {}

    const std::string& invariant() const { return invariant_; }

  private:
    std::string invariant_;
};

/// Malformed input file (any format).
class FormatError : public Error {
  public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

/// Binary file does not start with the expected magic bytes.
class MagicError : public FormatError {
  public:
    explicit MagicError(const std::string& msg) : FormatError(msg) {}
};

/// Binary payload ended early; `scale()` is the scale at which data ran out.
class TruncationError : public FormatError {
  public:
    TruncationError(std::uint32_t scale, const std::string& msg)
        : FormatError(msg), scale_(scale) {}

    std::uint32_t scale() const { return scale_; }

  private:
    std::uint32_t scale_;
};

/// Experiment configuration violates one of its invariants.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// divergence_witness could not find any ball violation at the given resolution.
class NoViolationFound : public Error {
  public:
    explicit NoViolationFound(const std::string& msg) : Error(msg) {}
};

} // namespace snu
