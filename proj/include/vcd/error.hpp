#pragma once

#include <stdexcept>
#include <string>

namespace vcd {

/// Base of every error raised by the library. `kind()` is a stable short
/// tag ("format", "corrupt", ...) used in diagnostics and the C API.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define VCD_DEFINE_ERROR(Name, tag)                                     \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(tag, what) {}       \
  };

VCD_DEFINE_ERROR(FormatError, "format")
VCD_DEFINE_ERROR(CorruptFileError, "corrupt")
VCD_DEFINE_ERROR(ValueError, "value")
VCD_DEFINE_ERROR(IoError, "io")
VCD_DEFINE_ERROR(DimensionMismatchError, "dimension-mismatch")
VCD_DEFINE_ERROR(ArityError, "arity")
VCD_DEFINE_ERROR(IncompatibleWeightsError, "incompatible-weights")
VCD_DEFINE_ERROR(ConfigError, "config")
VCD_DEFINE_ERROR(ShapeError, "shape")
VCD_DEFINE_ERROR(SampleCountError, "sample-count")
VCD_DEFINE_ERROR(DomainError, "domain")

#undef VCD_DEFINE_ERROR

}  // namespace vcd
