// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace enscert {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Field construction / deserialization rejected the input.
struct malformed_field_error : error {
  using error::error;
};

// Misuse of an expensive oracle path (e.g. direct convolution at large K).
struct cost_guard_error : error {
  using error::error;
};

// A value left the representable range (e.g. Gevrey exponent overflow).
struct out_of_range_error : error {
  using error::error;
};

// Time integration blew past the blow-up guard; numerical instability,
// not a certification verdict.
struct divergence_error : error {
  divergence_error(const std::string& what, double t, double enstrophy)
      : error(what), time(t), enstrophy(enstrophy) {}
  double time;
  double enstrophy;
};

struct config_error : error {
  using error::error;
};

// Non-finite intermediate in a certificate evaluation: the numerical
// resolution failed, not the certificate logic.
struct resolution_error : error {
  using error::error;
};

// delta underflowed to zero: the campaign cannot cover anything.
struct infeasible_delta_error : error {
  using error::error;
};

// Predicted lattice size exceeds the configured cap.
struct count_cap_error : error {
  count_cap_error(const std::string& what, unsigned long long predicted)
      : error(what), predicted(predicted) {}
  unsigned long long predicted;
};

struct checkpoint_error : error {
  using error::error;
};

}  // namespace enscert
