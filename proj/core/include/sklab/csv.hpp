#pragma once

#include <span>
#include <string>

#include "sklab/bounds.hpp"
#include "sklab/ensemble.hpp"
#include "sklab/experiments.hpp"

namespace sklab {

/// Shortest round-trip decimal representation (std::to_chars); the CSV bodies
/// must be byte-identical across reruns and worker counts.
std::string format_double(double value);

/// paths CSV: header t,particle_id,x,v; rows time-major then particle. The
/// limit system has no velocity; its v cells are empty.
std::string paths_csv(const PathBundle& bundle);

/// errors CSV: header particle_id,sup_sq_error.
std::string errors_csv(std::span<const double> sup_sq_errors);

/// study CSV: header beta,error_mean,ci_halfwidth,bound_printed,bound_sharp.
std::string study_csv(const RateFit& fit);

/// validations CSV: header name,lhs,rhs,margin,passes,paper_eq.
std::string validations_csv(std::span<const ValidationRecord> records);

}  // namespace sklab
