#include <ostream>

#include "perfdyn/metrics/metrics.hpp"
#include "perfdyn/minimizers/dynamics.hpp"

namespace perfdyn {

void write_trace_csv(std::ostream& out, std::span<const RunTrace> traces) {
  using metrics::format_real;
  out << "t,run,dist_to_ps,loss_shift,perf_risk\n";
  for (const RunTrace& tr : traces)
    for (const TraceRow& row : tr.rows)
      out << row.t << ',' << tr.run << ',' << format_real(row.dist_to_ps) << ',' << format_real(row.loss_shift)
          << ',' << format_real(row.perf_risk) << '\n';
}

}  // namespace perfdyn
