#ifndef DECOPT_KERNELS_HPP
#define DECOPT_KERNELS_HPP

#include <cstdint>
#include <functional>

#include <Eigen/Core>

namespace decopt::kernels {

// Data-parallel cores of the simulator: the mixing product X' = M X (one
// communication round of the simulated network) and batched per-row function
// evaluation. Each has a serial reference path; the OpenMP path assigns whole
// output rows to threads, so both paths produce bitwise-identical results.

void set_parallel(bool on);
bool parallel_enabled();

// Process-wide tally of counted mixing products. Lets tests audit the
// per-run communication bookkeeping against what the kernels actually did.
std::uint64_t mixing_audit_count();
void reset_mixing_audit();

// out = M * X, counted as one communication round (increments `rounds` and
// the audit tally).
void mix_apply(const Eigen::MatrixXd& mixing, const Eigen::MatrixXd& state,
               Eigen::MatrixXd& out, std::uint64_t& rounds);

// Uncounted product for diagnostics and tests.
void mix_apply_raw(const Eigen::MatrixXd& mixing, const Eigen::MatrixXd& state,
                   Eigen::MatrixXd& out);

// Serial reference implementation.
void mix_apply_serial(const Eigen::MatrixXd& mixing,
                      const Eigen::MatrixXd& state, Eigen::MatrixXd& out);

// Fills out.row(i) = fn(i, state.row(i)) for i = 0..rows-1, in parallel when
// enabled. fn must be safe to call concurrently for distinct rows.
using RowFn = std::function<Eigen::VectorXd(int, const Eigen::VectorXd&)>;
void map_rows(const Eigen::MatrixXd& state, const RowFn& fn,
              Eigen::MatrixXd& out);
void map_rows_serial(const Eigen::MatrixXd& state, const RowFn& fn,
                     Eigen::MatrixXd& out);

}  // namespace decopt::kernels

#endif
