#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skrvae/rng.hpp"
#include "skrvae/tensor.hpp"

namespace skr::signals {

// Normalized band edges, 0 < low < high < 0.5 (fractions of the sample rate).
struct Band {
    double low;
    double high;
    double center() const { return 0.5 * (low + high); }
};

// Ground-truth independent components: one band-passed, standardized row per
// component, sorted by increasing center frequency.
struct SourceSet {
    Tensor sources; // N x L
    std::vector<Band> bands;
    std::uint64_t seed = 0;
    std::size_t n_components() const { return sources.rows(); }
    std::size_t length() const { return sources.cols(); }
};

struct MixingMatrix {
    Tensor a; // N x N, condition number <= 20
    std::uint64_t seed = 0;
};

struct Observation {
    Tensor x; // N x L, exactly a * sources
    std::uint64_t source_seed = 0;
    std::uint64_t mixing_seed = 0;
    std::size_t length = 0;
};

// Zero-phase band-pass: a single second-order Butterworth band-pass biquad
// (bilinear transform with frequency pre-warping) run forward then backward.
std::vector<double> bandpass(std::span<const double> x, double low, double high);

// Seeded white Gaussian noise per row, band-passed, then standardized to zero
// mean and unit variance. Rows are drawn in component order from one stream.
SourceSet generate_sources(std::size_t n_components, std::size_t length, std::uint64_t seed,
                           const std::vector<Band>& bands);

// Entries i.i.d. uniform [-1, 1], resampled in full until the condition
// number is at most 20.
MixingMatrix make_mixing(std::size_t n, std::uint64_t seed);

Observation mix(const SourceSet& s, const MixingMatrix& a);

// 2-norm condition estimate via Jacobi eigenvalues of a^T a.
double condition_number(const Tensor& square);

// In place, per row: subtract the mean, divide by the population standard
// deviation. Rows with zero variance are left centered.
void standardize_rows(Tensor& m);

// First `length` samples of every row.
Tensor truncate_cols(const Tensor& m, std::size_t length);

} // namespace skr::signals
