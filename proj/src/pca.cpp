// SPDX-License-Identifier: Apache-2.0
#include "ppgq/pca.hpp"

#include "ppgq/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ppgq {

namespace {

// One-sided Jacobi orthogonalization of the columns of a col-major matrix
// `a` (lead rows x cols, cols <= rows expected but not required). On return
// the columns of `a` are mutually orthogonal; `v` accumulates the applied
// rotations so that a_in * v = a_out. Column norms are the singular values.
//
// Squared column norms are cached and updated with the rotation identities
// alpha' = alpha - t*gamma, beta' = beta + t*gamma, then refreshed at the
// start of every sweep so rounding drift stays bounded by one sweep.
void jacobi_orthogonalize(std::vector<double>& a, std::size_t rows, std::size_t cols,
                          std::vector<double>& v) {
    v.assign(cols * cols, 0.0);
    for (std::size_t i = 0; i < cols; ++i) v[i * cols + i] = 1.0;

    constexpr double kOrthTol = 1e-14;
    constexpr int kMaxSweeps = 60;

    std::vector<double> sqnorm(cols);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (std::size_t i = 0; i < cols; ++i) {
            std::span<const double> ci(a.data() + i * rows, rows);
            sqnorm[i] = kernels::dot(ci, ci);
        }
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < cols; ++i) {
            for (std::size_t j = i + 1; j < cols; ++j) {
                const double alpha = sqnorm[i];
                const double beta = sqnorm[j];
                if (alpha == 0.0 || beta == 0.0) continue;
                std::span<double> ci(a.data() + i * rows, rows);
                std::span<double> cj(a.data() + j * rows, rows);
                const double gamma = kernels::dot(ci, cj);
                if (std::abs(gamma) <= kOrthTol * std::sqrt(alpha * beta)) continue;

                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                kernels::rotate(ci, cj, c, s);
                kernels::rotate(std::span<double>(v.data() + i * cols, cols),
                                std::span<double>(v.data() + j * cols, cols), c, s);
                sqnorm[i] = std::max(0.0, alpha - t * gamma);
                sqnorm[j] = std::max(0.0, beta + t * gamma);
                rotated = true;
            }
        }
        if (!rotated) break;
    }
}

} // namespace

SvdTriplets svd_thin(const RowMatrix& matrix) {
    const std::size_t m = matrix.rows;
    const std::size_t n = matrix.cols;
    if (m == 0 || n == 0) {
        throw Error(ErrorCode::invalid_input, "empty matrix");
    }
    const std::size_t r = std::min(m, n);

    // Work on the transpose when m <= n so that the Jacobi sweep runs over
    // the smaller set of columns; the row-major m x n buffer is exactly the
    // col-major layout of the n x m transpose, so no copy is needed then.
    const bool transposed = (m <= n);
    const std::size_t work_rows = transposed ? n : m;
    const std::size_t work_cols = r;

    std::vector<double> work;
    if (transposed) {
        work = matrix.data;
    } else {
        work.assign(work_rows * work_cols, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                work[j * m + i] = matrix.at(i, j);
            }
        }
    }

    std::vector<double> v;
    jacobi_orthogonalize(work, work_rows, work_cols, v);

    std::vector<double> norms(work_cols);
    for (std::size_t k = 0; k < work_cols; ++k) {
        std::span<const double> col(work.data() + k * work_rows, work_rows);
        norms[k] = std::sqrt(kernels::dot(col, col));
    }
    std::vector<std::size_t> order(work_cols);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&norms](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });

    SvdTriplets out;
    out.singular_values.resize(r);
    out.left_cols.resize(r);
    out.right_cols.resize(r);
    for (std::size_t k = 0; k < r; ++k) {
        const std::size_t src = order[k];
        const double sigma = norms[src];
        out.singular_values[k] = sigma;

        std::vector<double> u(work.begin() + static_cast<std::ptrdiff_t>(src * work_rows),
                              work.begin() + static_cast<std::ptrdiff_t>((src + 1) * work_rows));
        if (sigma > 0.0) {
            kernels::scale(u, 1.0 / sigma);
        } else {
            std::fill(u.begin(), u.end(), 0.0);
        }
        std::vector<double> w(v.begin() + static_cast<std::ptrdiff_t>(src * work_cols),
                              v.begin() + static_cast<std::ptrdiff_t>((src + 1) * work_cols));

        // For the transposed problem X^T = U Sigma V^T, so X = V Sigma U^T.
        if (transposed) {
            out.left_cols[k] = std::move(w);
            out.right_cols[k] = std::move(u);
        } else {
            out.left_cols[k] = std::move(u);
            out.right_cols[k] = std::move(w);
        }
    }
    return out;
}

TrajectoryMatrix embed(std::span<const double> samples, int window_len_n, int stride_t,
                       bool end_exclusive) {
    if (window_len_n < 1 || stride_t < 1) {
        throw Error(ErrorCode::invalid_input, "window length and stride must be positive");
    }
    const std::size_t len = samples.size();
    const auto n = static_cast<std::size_t>(window_len_n);
    const auto t = static_cast<std::size_t>(stride_t);
    if (n > len) {
        throw Error(ErrorCode::window_too_long,
                    "window " + std::to_string(n) + " exceeds signal length " + std::to_string(len));
    }

    std::size_t m = (len - n) / t + 1;
    if (end_exclusive && len > n) {
        m = (len - n - 1) / t + 1;
    }

    TrajectoryMatrix traj;
    traj.rows_m = m;
    traj.cols_n = n;
    traj.stride_t = t;
    traj.source_len = len;
    traj.data = RowMatrix(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        std::copy_n(samples.data() + i * t, n, traj.data.row(i));
    }
    return traj;
}

PcaReconstruction svd_reconstruct(const TrajectoryMatrix& traj, int p) {
    const std::size_t m = traj.rows_m;
    const std::size_t n = traj.cols_n;
    const std::size_t r = std::min(m, n);
    if (p < 1 || static_cast<std::size_t>(p) > r) {
        throw Error(ErrorCode::invalid_component_count,
                    "p = " + std::to_string(p) + ", valid range [1, " + std::to_string(r) + "]");
    }

    const SvdTriplets svd = svd_thin(traj.data);

    PcaReconstruction recon;
    recon.components_used_p = p;
    recon.singular_values = svd.singular_values;
    recon.matrix = RowMatrix(m, n);
    for (int k = 0; k < p; ++k) {
        const double sigma = svd.singular_values[static_cast<std::size_t>(k)];
        if (sigma == 0.0) break; // spectrum is sorted, nothing left to add
        const auto& u = svd.left_cols[static_cast<std::size_t>(k)];
        const auto& w = svd.right_cols[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < m; ++i) {
            kernels::axpy(sigma * u[i], w, std::span<double>(recon.matrix.row(i), n));
        }
    }
    return recon;
}

std::vector<double> overlap_average(const PcaReconstruction& recon,
                                    const TrajectoryMatrix& traj_meta) {
    const std::size_t m = traj_meta.rows_m;
    const std::size_t n = traj_meta.cols_n;
    if (recon.matrix.rows != m || recon.matrix.cols != n) {
        throw Error(ErrorCode::invalid_input, "reconstruction shape does not match trajectory");
    }
    const std::size_t len = traj_meta.source_len;
    const std::size_t t = traj_meta.stride_t;

    std::vector<double> sums(len, 0.0);
    std::vector<std::uint32_t> counts(len, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = recon.matrix.row(i);
        const std::size_t base = i * t;
        for (std::size_t j = 0; j < n; ++j) {
            sums[base + j] += row[j];
            ++counts[base + j];
        }
    }

    std::vector<double> out(len, 0.0);
    for (std::size_t j = 0; j < len; ++j) {
        if (counts[j] > 0) out[j] = sums[j] / counts[j];
    }

    // Fill uncovered positions with the nearest covered value (ties to the
    // left). Two sweeps find the distance to the previous/next covered slot.
    constexpr std::size_t kFar = static_cast<std::size_t>(-1);
    std::vector<std::size_t> prev(len, kFar), next(len, kFar);
    std::size_t last = kFar;
    for (std::size_t j = 0; j < len; ++j) {
        if (counts[j] > 0) last = j;
        prev[j] = last;
    }
    last = kFar;
    for (std::size_t j = len; j-- > 0;) {
        if (counts[j] > 0) last = j;
        next[j] = last;
    }
    for (std::size_t j = 0; j < len; ++j) {
        if (counts[j] > 0) continue;
        const bool has_prev = prev[j] != kFar;
        const bool has_next = next[j] != kFar;
        if (has_prev && (!has_next || j - prev[j] <= next[j] - j)) {
            out[j] = out[prev[j]];
        } else if (has_next) {
            out[j] = out[next[j]];
        }
    }
    return out;
}

std::vector<double> gaussian_smooth(std::span<const double> samples, double sigma_samples) {
    if (!(sigma_samples > 0.0)) {
        throw Error(ErrorCode::invalid_input, "sigma must be positive");
    }
    const std::size_t n = samples.size();
    if (n == 0) return {};

    const auto radius = static_cast<std::size_t>(std::max(1.0, std::ceil(4.0 * sigma_samples)));
    std::vector<double> kernel(2 * radius + 1);
    for (std::size_t k = 0; k < kernel.size(); ++k) {
        const double d = static_cast<double>(k) - static_cast<double>(radius);
        kernel[k] = std::exp(-(d * d) / (2.0 * sigma_samples * sigma_samples));
    }
    const double norm = kernels::sum(kernel);
    kernels::scale(kernel, 1.0 / norm);

    // Mirror reflection about the end samples (x[-k] = x[k]).
    const auto reflect = [n](std::ptrdiff_t i) -> std::size_t {
        const auto last = static_cast<std::ptrdiff_t>(n) - 1;
        while (i < 0 || i > last) {
            if (i < 0) i = -i;
            if (i > last) i = 2 * last - i;
        }
        return static_cast<std::size_t>(i);
    };

    std::vector<double> padded(n + 2 * radius);
    for (std::size_t i = 0; i < padded.size(); ++i) {
        padded[i] = samples[reflect(static_cast<std::ptrdiff_t>(i) -
                                    static_cast<std::ptrdiff_t>(radius))];
    }

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = kernels::dot(std::span<const double>(padded.data() + i, kernel.size()), kernel);
    }
    return out;
}

SignalSegment refine(const SignalSegment& signal, const PipelineConfig& config) {
    const TrajectoryMatrix traj = embed(signal.samples, config.window_len_n, config.stride_t,
                                        config.window_bound_exclusive);
    const PcaReconstruction recon = svd_reconstruct(traj, config.num_components_p);
    const std::vector<double> averaged = overlap_average(recon, traj);

    SignalSegment out;
    out.sample_rate_hz = signal.sample_rate_hz;
    out.start_time_s = signal.start_time_s;
    out.samples = gaussian_smooth(averaged, config.gaussian_sigma_samples);
    return out;
}

} // namespace ppgq
