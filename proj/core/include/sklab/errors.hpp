#pragma once

#include <stdexcept>
#include <string>

namespace sklab {

/// Invalid argument values: bad beta, negative step size, grids too short, ...
class parameter_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite input to a pure function.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A state became non-finite during integration; names system, particle, step.
class divergence_error : public std::runtime_error {
 public:
  divergence_error(std::string system, long particle, long step)
      : std::runtime_error("divergence in " + system + ": non-finite state at particle " +
                           std::to_string(particle) + ", step " + std::to_string(step)),
        system_(std::move(system)),
        particle_(particle),
        step_(step) {}

  const std::string& system() const { return system_; }
  long particle() const { return particle_; }
  long step() const { return step_; }

 private:
  std::string system_;
  long particle_;
  long step_;
};

/// Covariance factorization failed beyond roundoff.
class conditioning_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched grids, checkpoints off the grid, incompatible bundles.
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Config file problem; carries the offending field ("sim.beta") when known.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& message) : std::runtime_error(message) {}
  config_error(std::string field, const std::string& message)
      : std::runtime_error(message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace sklab
