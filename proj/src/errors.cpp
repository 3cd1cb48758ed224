#include "gtsc/errors.hpp"

namespace gtsc {

AccuracyError::AccuracyError(const std::string& what, double estimate, double error_bound)
    : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

}  // namespace gtsc
