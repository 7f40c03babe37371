#include "sklab/csv.hpp"

#include <charconv>

namespace sklab {

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string paths_csv(const PathBundle& bundle) {
  std::string out = "t,particle_id,x,v\n";
  const bool has_v = !bundle.v.empty();
  for (int k = 0; k <= bundle.n_steps; ++k) {
    const std::string t = format_double(bundle.grid[k]);
    for (int p = 0; p < bundle.n_particles; ++p) {
      out += t;
      out += ',';
      out += std::to_string(p);
      out += ',';
      out += format_double(bundle.x_at(p, k));
      out += ',';
      if (has_v) out += format_double(bundle.v_at(p, k));
      out += '\n';
    }
  }
  return out;
}

std::string errors_csv(std::span<const double> sup_sq_errors) {
  std::string out = "particle_id,sup_sq_error\n";
  for (std::size_t p = 0; p < sup_sq_errors.size(); ++p) {
    out += std::to_string(p);
    out += ',';
    out += format_double(sup_sq_errors[p]);
    out += '\n';
  }
  return out;
}

std::string study_csv(const RateFit& fit) {
  std::string out = "beta,error_mean,ci_halfwidth,bound_printed,bound_sharp\n";
  for (const BetaPoint& p : fit.per_beta) {
    out += format_double(p.beta);
    out += ',';
    out += format_double(p.error_mean);
    out += ',';
    out += format_double(p.ci_halfwidth);
    out += ',';
    out += format_double(p.bound_printed);
    out += ',';
    out += format_double(p.bound_sharp);
    out += '\n';
  }
  return out;
}

std::string validations_csv(std::span<const ValidationRecord> records) {
  std::string out = "name,lhs,rhs,margin,passes,paper_eq\n";
  for (const ValidationRecord& r : records) {
    out += r.name;
    out += ',';
    out += format_double(r.lhs);
    out += ',';
    out += format_double(r.rhs);
    out += ',';
    out += format_double(r.margin);
    out += ',';
    out += r.passes ? "true" : "false";
    out += ',';
    out += r.formula;
    out += '\n';
  }
  return out;
}

}  // namespace sklab
