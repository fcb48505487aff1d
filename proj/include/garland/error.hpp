#ifndef GARLAND_ERROR_HPP
#define GARLAND_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace garland {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an enumeration would exceed a configured size limit.
/// `partial_size()` is how far the computation got before giving up (0 when
/// the limit was detected up front).
class CapExceeded : public Error
{
public:
  CapExceeded(const std::string &what, std::size_t partial = 0)
      : Error(what), partial_(partial)
  {
  }

  std::size_t partial_size() const noexcept { return partial_; }

private:
  std::size_t partial_;
};

class FieldMismatch : public Error
{
public:
  using Error::Error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

} // namespace garland

#endif // GARLAND_ERROR_HPP
