#pragma once

// Batched alternating minimization with random initialization.
//
// The m measurements are split into B disjoint blocks; step k applies the
// operator T built from block (k mod B) only. Each block keeps its own QR,
// computed once when the solver is constructed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "altmin/altmin_ops.hpp"
#include "altmin/error.hpp"
#include "altmin/measurement.hpp"
#include "altmin/metrics.hpp"
#include "altmin/rng.hpp"
#include "altmin/types.hpp"

namespace altmin {

/// Ordered split of row indices into B disjoint blocks whose sizes differ by
/// at most one. Blocks are contiguous runs of `order()`, which is the
/// identity unless the partition was shuffled.
class BatchPartition {
 public:
  BatchPartition(std::vector<Index> order, std::vector<std::size_t> offsets)
      : order_(std::move(order)), offsets_(std::move(offsets)) {}

  std::size_t block_count() const noexcept { return offsets_.size() - 1; }
  std::size_t total() const noexcept { return order_.size(); }

  std::span<const Index> block(std::size_t k) const {
    return std::span<const Index>(order_).subspan(offsets_[k], offsets_[k + 1] - offsets_[k]);
  }
  std::size_t block_size(std::size_t k) const { return offsets_[k + 1] - offsets_[k]; }

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < block_count(); ++k) out.push_back(block_size(k));
    return out;
  }

  const std::vector<Index>& order() const noexcept { return order_; }

 private:
  std::vector<Index> order_;
  std::vector<std::size_t> offsets_;
};

namespace detail {

inline std::vector<std::size_t> block_offsets(std::size_t m, std::size_t blocks) {
  require(blocks >= 1 && blocks <= m, ErrorKind::partition,
          "need 1 <= B <= m, got B=" + std::to_string(blocks) + " m=" + std::to_string(m));
  const std::size_t base = m / blocks;
  const std::size_t extra = m % blocks;
  std::vector<std::size_t> offsets{0};
  for (std::size_t k = 0; k < blocks; ++k) offsets.push_back(offsets.back() + base + (k < extra ? 1 : 0));
  return offsets;
}

}  // namespace detail

/// Contiguous blocks; the first (m mod B) blocks get one extra index.
inline BatchPartition partition(std::size_t m, std::size_t blocks) {
  auto offsets = detail::block_offsets(m, blocks);
  std::vector<Index> order(m);
  std::iota(order.begin(), order.end(), Index{0});
  return {std::move(order), std::move(offsets)};
}

/// Same block sizes as partition(), over a random permutation of the rows.
/// For non-exchangeable data; i.i.d. rows do not need it.
inline BatchPartition partition_shuffled(std::size_t m, std::size_t blocks, const RngStream& stream) {
  auto offsets = detail::block_offsets(m, blocks);
  std::vector<Index> order(m);
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng = stream.engine();
  for (std::size_t i = m; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return {std::move(order), std::move(offsets)};
}

/// max(1, round(c0 ln n)).
inline std::size_t suggested_block_count(std::size_t n, double c0 = 1.0) {
  detail::require(n >= 2, ErrorKind::domain, "suggested_block_count needs n >= 2");
  detail::require(c0 > 0.0, ErrorKind::domain, "suggested_block_count needs c0 > 0");
  const double b = std::round(c0 * std::log(static_cast<double>(n)));
  return b < 1.0 ? 1 : static_cast<std::size_t>(b);
}

struct SolverConfig {
  std::size_t blocks = 1;
  std::size_t max_iters = 500;  // single-block steps, not cycles
  double residual_tol = 1e-8;
  bool record_trace = false;
  bool shuffle_rows = false;

  void validate() const {
    detail::require(blocks >= 1, ErrorKind::configuration, "blocks must be >= 1");
    detail::require(max_iters >= 1, ErrorKind::configuration, "max_iters must be >= 1");
    detail::require(residual_tol > 0.0, ErrorKind::configuration, "residual_tol must be > 0");
  }
};

struct TraceRecord {
  std::size_t iteration = 0;  // 1-based count of completed steps
  std::size_t block = 0;      // 0-based block index used by this step
  double residual = 0.0;
  std::optional<double> theta;       // only with ground truth
  std::optional<double> dist_phase;  // only with ground truth
};

using SolverTrace = std::vector<TraceRecord>;

struct RunResult {
  Signal estimate = Signal::zeros(1);
  bool converged = false;
  std::size_t iterations = 0;
  double final_residual = 0.0;
  std::optional<SolverTrace> trace;
  std::vector<std::string> warnings;
};

/// Algorithm state that outlives a single run: partition, per-block
/// ensembles and observations. Reusable across starting points.
class BatchedSolver {
 public:
  BatchedSolver(const SensingEnsemble& a, const Observations& y, const SolverConfig& cfg,
                const RngStream& shuffle_stream = {})
      : full_(&a), y_(&y), cfg_(cfg) {
    cfg_.validate();
    detail::require(y.size() == a.m(), ErrorKind::dimension, "observations length does not match m");
    detail::require(y.norm() > 0.0, ErrorKind::degenerate_observations, "observations are all zero");

    const auto m = static_cast<std::size_t>(a.m());
    const auto n = static_cast<std::size_t>(a.n());
    BatchPartition part = cfg_.shuffle_rows ? partition_shuffled(m, cfg_.blocks, shuffle_stream)
                                            : partition(m, cfg_.blocks);
    for (std::size_t k = 0; k < part.block_count(); ++k) {
      detail::require(part.block_size(k) >= n, ErrorKind::partition,
                      "block " + std::to_string(k) + " has " + std::to_string(part.block_size(k)) +
                          " rows, fewer than n=" + std::to_string(n));
    }
    if (m < 4 * n * cfg_.blocks) {
      warnings_.push_back("m/B = " + std::to_string(m / cfg_.blocks) + " is below 4n = " +
                          std::to_string(4 * n) + "; per-step improvement is not expected");
    }

    if (part.block_count() == 1 && !cfg_.shuffle_rows) return;  // use the full ensemble directly
    for (std::size_t k = 0; k < part.block_count(); ++k) {
      auto rows = part.block(k);
      RVector yk(static_cast<Index>(rows.size()));
      for (std::size_t i = 0; i < rows.size(); ++i) yk(static_cast<Index>(i)) = y.values()(rows[i]);
      blocks_.push_back(a.select_rows(rows));
      block_y_.emplace_back(std::move(yk));
    }
  }

  std::size_t block_count() const noexcept { return blocks_.empty() ? 1 : blocks_.size(); }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// Applies the block-k operator T^{(k)}.
  Signal step(const Signal& x, std::size_t k) const {
    if (blocks_.empty()) return altmin_step(*full_, *y_, x);
    return altmin_step(blocks_[k], block_y_[k], x);
  }

  RunResult run_from(const Signal& x0, const std::optional<Signal>& truth = std::nullopt) const {
    detail::require(x0.size() == full_->n(), ErrorKind::dimension, "start point length does not match n");
    RunResult result;
    result.warnings = warnings_;
    if (cfg_.record_trace) result.trace.emplace();

    Signal x = x0;
    double res = residual(*full_, *y_, x);
    std::size_t k = 0;
    while (k < cfg_.max_iters) {
      const std::size_t block = k % block_count();
      x = step(x, block);
      ++k;
      res = residual(*full_, *y_, x);
      if (result.trace) {
        TraceRecord rec{k, block, res, std::nullopt, std::nullopt};
        if (truth) {
          rec.theta = theta(x, *truth);
          rec.dist_phase = dist_phase(x, *truth);
        }
        result.trace->push_back(rec);
      }
      if (res <= cfg_.residual_tol) {
        result.converged = true;
        break;
      }
    }
    result.estimate = x;
    result.iterations = k;
    result.final_residual = res;
    return result;
  }

 private:
  const SensingEnsemble* full_;
  const Observations* y_;
  SolverConfig cfg_;
  std::vector<SensingEnsemble> blocks_;
  std::vector<Observations> block_y_;
  std::vector<std::string> warnings_;
};

/// Batched alternating minimization: random unit start, cyclic block operators, residual stopping rule.
/// The start is drawn from rng.child(0); a shuffled partition uses rng.child(1).
inline RunResult run_batched(const SensingEnsemble& a, const Observations& y, const SolverConfig& cfg,
                             const RngStream& rng, const std::optional<Signal>& truth = std::nullopt) {
  BatchedSolver solver(a, y, cfg, rng.child(1));
  return solver.run_from(random_unit(a.n(), rng.child(0)), truth);
}

/// Plain (non-batched) alternating minimization x <- T(x) over all rows.
inline RunResult run_plain(const SensingEnsemble& a, const Observations& y, const SolverConfig& cfg,
                           const RngStream& rng, const std::optional<Signal>& truth = std::nullopt) {
  SolverConfig plain = cfg;
  plain.blocks = 1;
  plain.shuffle_rows = false;
  return run_batched(a, y, plain, rng, truth);
}

}  // namespace altmin
