#pragma once

#include <stdexcept>
#include <string>

namespace lplab {

enum class Errc {
  invalid_domain = 1,
  length_mismatch,
  exponent_too_small,
  incompatible_model,
  eigen_failure,
  scale_nonpositive,
  scale_order_violation,
  not_even,
  not_decaying,
  tauberian_gap_uncovered,
  invalid_p,
  hypothesis_violated,
  nonpositive_lambda,
  nonpositive_sigma,
  empty_range,
  grid_mismatch,
  band_limit_exceeded,
  empty_corpus,
  profile_not_admissible,
  config_invalid,
  io_failure,
};

/// Exception carrying a stable error code alongside the message.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace lplab
