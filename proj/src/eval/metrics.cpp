#include "eval/metrics.hpp"

#include <fmt/format.h>

namespace ddpdeid {

Metrics compute_metrics(const OutcomeCounts& c) {
  Metrics m;
  const auto tp = static_cast<double>(c.tp);
  if (c.tp + c.fn > 0) m.recall = tp / static_cast<double>(c.tp + c.fn);
  if (c.tp + c.fp > 0) m.precision = tp / static_cast<double>(c.tp + c.fp);
  if (m.recall && m.precision) {
    const double sum = *m.recall + *m.precision;
    m.f1 = sum == 0 ? 0.0 : 2 * *m.recall * *m.precision / sum;
  }
  return m;
}

std::string format_metric(const std::optional<double>& v, int decimals) {
  if (!v) return "-";
  return fmt::format("{:.{}f}", *v, decimals);
}

}  // namespace ddpdeid
