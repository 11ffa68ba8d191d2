#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "arh1/errors.hpp"
#include "arh1/harness.hpp"
#include "arh1/random.hpp"
#include "arh1/simulator.hpp"

namespace arh1 {

namespace {

struct ReplicationOutcome {
  ReplicationRecord classical;
  ReplicationRecord bayes;
  ProximityTally proximity;
};

// Rounding slack for the proximity bound; the bound itself is exact algebra.
constexpr double kProximitySlack = 1e-12;

ProximityTally check_proximity(const EstimateSet& est, const ModelRealization& real,
                               const PriorSpec& prior) {
  ProximityTally tally;
  for (std::size_t j = 0; j < est.k_T; ++j) {
    const double hat = est.rho_hat[j];
    if (hat > 1.0) {
      ++tally.skipped_rho_hat_above_one;
      continue;
    }
    const BetaParams p = prior_params(prior, j + 1);
    const double gap = hat - est.rho_tilde_minus[j];
    const double bound = std::sqrt(real.sigma2[j] * (p.a + p.b - 2.0) / est.stats[j].beta);
    ++tally.checked;
    if (gap < -kProximitySlack || gap > bound * (1.0 + kProximitySlack) + kProximitySlack) {
      ++tally.violations;
    }
  }
  return tally;
}

std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

bool ExperimentResult::aborted_threshold_exceeded() const noexcept {
  return attempted > 0 &&
         static_cast<double>(aborted) > kAbortedFractionLimit * static_cast<double>(attempted);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const TruncationRule rule = config.truncation();
  const SpectralModelSpec base = config.model();
  const std::string label = config.example_label();

  std::size_t max_kT = 0;
  for (std::size_t T : config.T_grid) max_kT = std::max(max_kT, truncation_order(T, rule));

  ExperimentResult result;
  std::optional<ModelRealization> fixed;
  if (base.rho_mode != RhoMode::redraw_per_replication) {
    SpectralModelSpec spec = base;
    spec.k_max = max_kT;
    RandomStream model_stream(derive_stream_key(config.seed, 0, 0));
    fixed = realize(spec, model_stream);
    result.fixed_rho = fixed->rho;
  }

  const std::size_t workers = std::min(resolve_workers(config.workers), config.N);

  for (std::size_t T : config.T_grid) {
    const std::size_t k_T = truncation_order(T, rule);
    SpectralModelSpec spec = base;
    spec.k_max = k_T;
    std::optional<ModelRealization> fixed_T;
    if (fixed) fixed_T = fixed->truncated(k_T);

    std::vector<std::optional<ReplicationOutcome>> outcomes(config.N);
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    const auto run_one = [&](std::size_t idx) {
      RandomStream stream(derive_stream_key(config.seed, T, idx + 1));
      const ModelRealization real = fixed_T ? *fixed_T : realize(spec, stream);
      const Trajectory traj = simulate(real, T, stream);
      try {
        const EstimateSet est = estimate_all(traj, real, k_T, spec.prior);
        const auto xT = traj.row(T);
        ReplicationOutcome out;
        out.classical = {est.rho_hat, real.rho, {xT.begin(), xT.end()}};
        out.bayes = {est.rho_tilde_minus, real.rho, {xT.begin(), xT.end()}};
        out.proximity = check_proximity(est, real, spec.prior);
        outcomes[idx] = std::move(out);
      } catch (const DegenerateTrajectoryError&) {
        // Left empty: counted as aborted below.
      }
    };
    const auto work = [&] {
      for (;;) {
        const std::size_t idx = next.fetch_add(1, std::memory_order_relaxed);
        if (idx >= config.N) return;
        try {
          run_one(idx);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(config.N, std::memory_order_relaxed);
          return;
        }
      }
    };
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);

    // Single-owner merge in replication order.
    EfmseInput classical;
    EfmseInput bayes;
    for (auto& o : outcomes) {
      ++result.attempted;
      if (!o) {
        ++result.aborted;
        continue;
      }
      classical.records.push_back(std::move(o->classical));
      bayes.records.push_back(std::move(o->bayes));
      result.proximity.checked += o->proximity.checked;
      result.proximity.violations += o->proximity.violations;
      result.proximity.skipped_rho_hat_above_one += o->proximity.skipped_rho_hat_above_one;
    }
    if (classical.records.empty()) {
      throw DegenerateTrajectoryError("every replication aborted at T=" + std::to_string(T), 0);
    }

    double param_limit;
    double pred_limit;
    if (fixed_T) {
      param_limit = theory_param_limit(*fixed_T, k_T);
      pred_limit = theory_pred_limit(*fixed_T, k_T);
    } else {
      param_limit = prior_expected_param_limit(spec.prior, k_T);
      pred_limit = prior_expected_pred_limit(spec.law, spec.prior, k_T);
    }

    for (auto [kind, input] : {std::pair{EstimatorKind::classical, &classical},
                               std::pair{EstimatorKind::bayes_minus, &bayes}}) {
      EfmseReport r;
      r.example = label;
      r.T = T;
      r.N = input->records.size();
      r.kT = k_T;
      r.estimator = kind;
      r.efmse_param = efmse_param(*input);
      r.efmse_pred = efmse_pred(*input);
      r.t_efmse_param = static_cast<double>(T) * r.efmse_param;
      r.theory_param_limit = param_limit;
      r.theory_pred_limit = pred_limit;
      r.ref_one_over_T = 1.0 / static_cast<double>(T);
      result.reports.push_back(std::move(r));
    }
  }
  return result;
}

}  // namespace arh1
