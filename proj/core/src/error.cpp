#include "taxalign/error.hpp"

namespace taxalign {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Duplicate: return "duplicate";
    case ErrorKind::Reference: return "reference";
    case ErrorKind::Cycle: return "cycle";
    case ErrorKind::Format: return "format";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace taxalign
