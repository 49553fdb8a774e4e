#include "sidelink/metrics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "sidelink/error.hpp"

namespace sidelink::metrics {

std::string_view to_string(PrrMode m) noexcept {
  return m == PrrMode::bernoulli ? "bernoulli" : "deterministic";
}

PrrMode parse_prr_mode(std::string_view text) {
  if (text == "deterministic") return PrrMode::deterministic;
  if (text == "bernoulli") return PrrMode::bernoulli;
  throw ConfigError("prr_mode", "expected deterministic or bernoulli, got '" + std::string(text) + "'");
}

void PrrOptions::validate() const {
  if (!(bler_threshold > 0.0 && bler_threshold < 1.0)) {
    throw ConfigError("bler_success_threshold", "must lie in (0, 1)");
  }
}

PrrSample prr_for_tx(std::span<const linkbudget::LinkBudgetRecord> budgets,
                     const mac::McsEntry& mcs, const PrrOptions& options, Rng& rng) {
  PrrSample s;
  if (!budgets.empty()) s.tx_id = budgets.front().tx_id;

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (const auto& rec : budgets) {
    if (rec.tx_id != s.tx_id) {
      throw SimError(ErrorCode::invalid_argument, "prr_for_tx: records of more than one transmitter");
    }
    if (rec.half_duplex_skipped) {
      if (options.halfduplex_as_loss) ++s.num_in_range;
      continue;
    }
    ++s.num_in_range;
    const double p_err = mac::bler(rec.sinr_db, mcs);
    const bool ok = options.mode == PrrMode::deterministic ? p_err < options.bler_threshold
                                                           : coin(rng) >= p_err;
    if (ok) ++s.num_success;
  }
  if (s.num_in_range > 0) {
    s.prr = static_cast<double>(s.num_success) / static_cast<double>(s.num_in_range);
  }
  return s;
}

PrrSample combine(const PrrSample& a, const PrrSample& b) {
  PrrSample s{a.tx_id, a.num_in_range + b.num_in_range, a.num_success + b.num_success, {}};
  if (s.num_in_range > 0) {
    s.prr = static_cast<double>(s.num_success) / static_cast<double>(s.num_in_range);
  }
  return s;
}

AggregateResult aggregate(std::span<const std::vector<PrrSample>> per_seed_samples) {
  AggregateResult r;
  for (const auto& samples : per_seed_samples) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& s : samples) {
      if (!s.prr) continue;
      sum += *s.prr;
      ++n;
    }
    if (n > 0) r.per_seed_prr.push_back(sum / static_cast<double>(n));
  }
  if (r.per_seed_prr.empty()) {
    throw SimError(ErrorCode::no_samples, "aggregate: no transmitter had a receiver in range");
  }

  const auto n = static_cast<double>(r.per_seed_prr.size());
  r.mean_prr = std::accumulate(r.per_seed_prr.begin(), r.per_seed_prr.end(), 0.0) / n;
  if (r.per_seed_prr.size() > 1) {
    double ss = 0.0;
    for (double p : r.per_seed_prr) ss += (p - r.mean_prr) * (p - r.mean_prr);
    r.stderr_prr = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return r;
}

}  // namespace sidelink::metrics
