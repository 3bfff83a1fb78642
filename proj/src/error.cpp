#include "frif/error.hpp"

namespace frif {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::malformed_data: return "malformed-data";
    case ErrorKind::malformed_parameters: return "malformed-parameters";
    case ErrorKind::validation: return "validation";
    case ErrorKind::necessary_condition: return "necessary-condition";
    case ErrorKind::resource_limit: return "resource-limit";
    case ErrorKind::denominator_positivity: return "denominator-positivity";
    case ErrorKind::contraction_violation: return "contraction-violation";
    case ErrorKind::smoothness_order: return "smoothness-order";
    case ErrorKind::divergent_bound: return "divergent-bound";
    case ErrorKind::insufficient_data: return "insufficient-data";
  }
  return "unknown";
}

}  // namespace frif
