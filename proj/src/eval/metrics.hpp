#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace ddpdeid {

struct OutcomeCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  OutcomeCounts& operator+=(const OutcomeCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const OutcomeCounts&) const = default;
};

// nullopt marks an undefined ratio (zero denominator).
struct Metrics {
  std::optional<double> recall;
  std::optional<double> precision;
  std::optional<double> f1;
};

Metrics compute_metrics(const OutcomeCounts& c);

// Fixed decimals, or "-" when undefined.
std::string format_metric(const std::optional<double>& v, int decimals = 4);

}  // namespace ddpdeid
