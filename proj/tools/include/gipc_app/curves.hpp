#pragma once

#include "gipc/barrier.hpp"

#include <iosfwd>
#include <string>

namespace gipc::app {

struct CurveOptions {
  int samples = 200;
  double d_hat = 1;
  double kappa = 1;
  double d_thr_ratio = 0.1;
  double eps_x = 1;  // mollifier-eigs: c = gamma * eps_x
};

// which: barrier, norms, gn-compare or mollifier-eigs. Writes CSV with a header row.
void write_curve(const std::string& which, const CurveOptions& options, std::ostream& out);

}  // namespace gipc::app
