#pragma once

#include <stdexcept>
#include <string>

// Error taxonomy. Physics-domain failures derive from mqi::domain_error so
// callers can map them to one exit path; configuration failures are separate.

namespace mqi {

// parameter outside the mathematical domain of the requested quantity
struct domain_error : std::domain_error {
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// device parameters outside the stable operating region of the scattering map
struct stability_error : domain_error {
  explicit stability_error(const std::string& what) : domain_error(what) {}
};

// closed form applied outside the operating regime it assumes
struct regime_error : domain_error {
  explicit regime_error(const std::string& what) : domain_error(what) {}
};

// inputs for which the requested quantity is undefined (0/0, empty denominator)
struct degenerate_error : domain_error {
  explicit degenerate_error(const std::string& what) : domain_error(what) {}
};

// numeric-utility misuse, e.g. an inverted search bracket
struct bracket_error : std::invalid_argument {
  explicit bracket_error(const std::string& what) : std::invalid_argument(what) {}
};

// configuration parsing or validation failure; message carries the field path
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mqi
