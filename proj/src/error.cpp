#include "harmsurf/error.hpp"

namespace harmsurf {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::domain: return "domain";
    case ErrorKind::closure: return "closure";
    case ErrorKind::quadrature: return "quadrature";
    case ErrorKind::mesh: return "mesh";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::domain: return 2;
    case ErrorKind::closure: return 3;
    case ErrorKind::quadrature: return 4;
    case ErrorKind::mesh: return 5;
  }
  return 1;
}

}  // namespace harmsurf
