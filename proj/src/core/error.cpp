#include "rgi/error.hpp"

namespace rgi {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Argument:
      return "argument error";
    case ErrorKind::Decode:
      return "decode error";
    case ErrorKind::Format:
      return "format error";
    case ErrorKind::Dataset:
      return "dataset error";
    case ErrorKind::State:
      return "state error";
    case ErrorKind::Io:
      return "io error";
  }
  return "error";
}

}  // namespace rgi
