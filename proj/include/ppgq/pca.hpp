// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ppgq/core.hpp"

#include <cstddef>
#include <vector>

namespace ppgq {

// Minimal dense row-major matrix; rows of the trajectory matrix are the
// sliding windows and stay contiguous.
struct RowMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    RowMatrix() = default;
    RowMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    double* row(std::size_t r) { return data.data() + r * cols; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }
};

// Stack of overlapped sliding windows:
//   rows_m = floor((source_len - cols_n) / stride_t) + 1
//   row i = source[i*stride_t : i*stride_t + cols_n]
struct TrajectoryMatrix {
    std::size_t rows_m = 0;
    std::size_t cols_n = 0;
    std::size_t stride_t = 1;
    std::size_t source_len = 0;
    RowMatrix data;
};

// Thin singular value decomposition X = sum_k sigma_k * left_k * right_k^T,
// values sorted non-increasing. Computed by one-sided Jacobi
// orthogonalization over the smaller dimension.
struct SvdTriplets {
    std::vector<double> singular_values;          // min(rows, cols) entries
    std::vector<std::vector<double>> left_cols;   // each of length rows
    std::vector<std::vector<double>> right_cols;  // each of length cols
};

SvdTriplets svd_thin(const RowMatrix& matrix);

struct PcaReconstruction {
    RowMatrix matrix; // same shape as the trajectory matrix
    int components_used_p = 0;
    std::vector<double> singular_values; // full spectrum, non-increasing
};

TrajectoryMatrix embed(std::span<const double> samples, int window_len_n, int stride_t,
                       bool end_exclusive = false);

// Rank-p reprojection from the leading singular triplets.
PcaReconstruction svd_reconstruct(const TrajectoryMatrix& traj, int p);

// Back to one dimension: each source position gets the mean of all window
// entries that map to it; positions covered by no window take the nearest
// covered value.
std::vector<double> overlap_average(const PcaReconstruction& recon,
                                    const TrajectoryMatrix& traj_meta);

// Convolution with a normalized Gaussian kernel truncated at 4*sigma,
// mirror-reflected edges, length preserving.
std::vector<double> gaussian_smooth(std::span<const double> samples, double sigma_samples);

// embed -> svd_reconstruct -> overlap_average -> gaussian_smooth; the
// pseudo clean PPG on the same time base as the input.
SignalSegment refine(const SignalSegment& signal, const PipelineConfig& config);

} // namespace ppgq
