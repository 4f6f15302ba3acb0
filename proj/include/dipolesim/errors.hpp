#pragma once

#include <stdexcept>
#include <string>

namespace dipolesim {

// Error taxonomy used across the library. Every failure mode the public
// operations can hit maps onto one of these, so callers (CLI, tests) can
// branch on category without string matching.
class error : public std::runtime_error {
public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

class invalid_argument_error : public error {
public:
  using error::error;
};

// Evaluation requested at a point where the kernel is singular (e.g. the
// dyadic propagator at zero separation, a detector on top of an emitter).
class singular_input_error : public error {
public:
  using error::error;
};

// A configured memory/size budget would be exceeded; the message names the
// budget and the offending size.
class resource_limit_error : public error {
public:
  using error::error;
};

class convergence_failure_error : public error {
public:
  using error::error;
};

class integration_failure_error : public error {
public:
  using error::error;
};

// Step-size underflow in the adaptive integrator.
class stiffness_error : public error {
public:
  using error::error;
};

// g2 requested where the mean intensity is below the numeric floor.
class undefined_correlation_error : public error {
public:
  using error::error;
};

class numeric_error : public error {
public:
  using error::error;
};

class config_error : public error {
public:
  using error::error;
};

class io_error : public error {
public:
  using error::error;
};

}  // namespace dipolesim
