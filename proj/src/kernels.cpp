#include "decopt/kernels.hpp"

#include <atomic>

namespace decopt::kernels {

namespace {
std::atomic<bool> g_parallel{true};
std::atomic<std::uint64_t> g_mixing_audit{0};
}  // namespace

void set_parallel(bool on) { g_parallel.store(on); }
bool parallel_enabled() { return g_parallel.load(); }

std::uint64_t mixing_audit_count() { return g_mixing_audit.load(); }
void reset_mixing_audit() { g_mixing_audit.store(0); }

void mix_apply_serial(const Eigen::MatrixXd& mixing,
                      const Eigen::MatrixXd& state, Eigen::MatrixXd& out) {
  const int m = static_cast<int>(mixing.rows());
  const int n = static_cast<int>(state.cols());
  out.resize(m, n);
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < n; ++c) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += mixing(i, j) * state(j, c);
      out(i, c) = acc;
    }
  }
}

void mix_apply_raw(const Eigen::MatrixXd& mixing, const Eigen::MatrixXd& state,
                   Eigen::MatrixXd& out) {
  if (!parallel_enabled()) {
    mix_apply_serial(mixing, state, out);
    return;
  }
  const int m = static_cast<int>(mixing.rows());
  const int n = static_cast<int>(state.cols());
  out.resize(m, n);
  // One output row per thread; per-row summation order matches the serial
  // path, so results are bitwise identical for any thread count.
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < n; ++c) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += mixing(i, j) * state(j, c);
      out(i, c) = acc;
    }
  }
}

void mix_apply(const Eigen::MatrixXd& mixing, const Eigen::MatrixXd& state,
               Eigen::MatrixXd& out, std::uint64_t& rounds) {
  mix_apply_raw(mixing, state, out);
  ++rounds;
  g_mixing_audit.fetch_add(1, std::memory_order_relaxed);
}

void map_rows_serial(const Eigen::MatrixXd& state, const RowFn& fn,
                     Eigen::MatrixXd& out) {
  const int m = static_cast<int>(state.rows());
  out.resizeLike(state);
  for (int i = 0; i < m; ++i) out.row(i) = fn(i, state.row(i)).transpose();
}

void map_rows(const Eigen::MatrixXd& state, const RowFn& fn,
              Eigen::MatrixXd& out) {
  if (!parallel_enabled()) {
    map_rows_serial(state, fn, out);
    return;
  }
  const int m = static_cast<int>(state.rows());
  out.resizeLike(state);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) out.row(i) = fn(i, state.row(i)).transpose();
}

}  // namespace decopt::kernels
