#ifndef AAOMG_ERROR_HPP
#define AAOMG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace aaomg {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

class DimensionMismatch : public Error
{
public:
  using Error::Error;
};

class SingularMatrix : public Error
{
public:
  using Error::Error;
};

} // namespace aaomg

#endif
