#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "fracldg/experiment.hpp"

namespace fracldg {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void write_report_csv(std::ostream& os, const ExperimentConfig& c, const ErrorReport& report) {
  os << "# fracldg dim=" << c.dim << " domain=" << to_string(c.domain) << " mesh=" << to_string(c.mesh)
     << " s=" << short_num(c.s) << " mu=" << short_num(c.resolved_mu()) << " q=" << to_string(c.resolved_q_space())
     << " abscissa=" << report.abscissa << " fit_points=" << report.fit_points << '\n';
  os << "level,N,h,energy_err,l2_err,eoc_energy_pairwise,eoc_l2_pairwise\n";
  for (std::size_t k = 0; k < report.levels.size(); ++k) {
    const LevelResult& l = report.levels[k];
    os << k << ',' << l.N << ',' << num(l.h) << ',' << num(l.energy_err) << ',' << num(l.l2_err) << ','
       << num(l.eoc_energy_pairwise) << ',' << num(l.eoc_l2_pairwise) << '\n';
  }
  if (!report.complete) os << "# incomplete: " << report.failure << '\n';
  os << "# eoc_energy=" << num(report.eoc_energy) << " eoc_l2=" << num(report.eoc_l2) << '\n';
}

}  // namespace fracldg
