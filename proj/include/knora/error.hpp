#pragma once

#include <stdexcept>
#include <string>

namespace knora {

/// Raised for malformed input files or datasets that violate the binary-problem contract.
class data_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised for invalid experiment configuration (bad keys, out-of-range values).
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace knora
