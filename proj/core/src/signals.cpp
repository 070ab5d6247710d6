#include "skrvae/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "skrvae/errors.hpp"

namespace skr::signals {

namespace {

struct Biquad {
    double b0, b1, b2; // numerator
    double a1, a2;     // denominator (a0 normalized to 1)
};

// Analog prototype B*s / (s^2 + B*s + w0^2) with pre-warped edges, mapped by
// the bilinear transform. Unit gain at the geometric band center.
Biquad design_bandpass(double low, double high) {
    const double wl = std::tan(std::numbers::pi * low);
    const double wh = std::tan(std::numbers::pi * high);
    const double bw = wh - wl;
    const double w02 = wl * wh;
    const double a0 = 1.0 + bw + w02;
    return {bw / a0, 0.0, -bw / a0, (2.0 * w02 - 2.0) / a0, (1.0 - bw + w02) / a0};
}

void filter_forward(const Biquad& f, std::span<const double> in, std::span<double> out) {
    double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        const double x0 = in[i];
        const double y0 = f.b0 * x0 + f.b1 * x1 + f.b2 * x2 - f.a1 * y1 - f.a2 * y2;
        out[i] = y0;
        x2 = x1;
        x1 = x0;
        y2 = y1;
        y1 = y0;
    }
}

void check_band(double low, double high) {
    if (!(low > 0.0 && low < high && high < 0.5))
        throw ConfigError("band edges must satisfy 0 < low < high < 0.5, got low=" +
                          std::to_string(low) + " high=" + std::to_string(high));
}

} // namespace

std::vector<double> bandpass(std::span<const double> x, double low, double high) {
    check_band(low, high);
    const Biquad f = design_bandpass(low, high);
    std::vector<double> fwd(x.size());
    filter_forward(f, x, fwd);
    std::reverse(fwd.begin(), fwd.end());
    std::vector<double> out(x.size());
    filter_forward(f, fwd, out);
    std::reverse(out.begin(), out.end());
    return out;
}

SourceSet generate_sources(std::size_t n_components, std::size_t length, std::uint64_t seed,
                           const std::vector<Band>& bands) {
    if (n_components != bands.size())
        throw ConfigError("generate_sources: n_components=" + std::to_string(n_components) +
                          " but " + std::to_string(bands.size()) + " bands given");
    if (length < 64)
        throw ConfigError("generate_sources: length must be at least 64");
    for (const Band& b : bands) check_band(b.low, b.high);
    for (std::size_t i = 1; i < bands.size(); ++i)
        if (!(bands[i].center() > bands[i - 1].center()))
            throw ConfigError("generate_sources: band center frequencies must increase");

    SourceSet set;
    set.bands = bands;
    set.seed = seed;
    set.sources = Tensor(n_components, length);
    Rng rng(seed);
    std::vector<double> noise(length);
    for (std::size_t i = 0; i < n_components; ++i) {
        for (auto& v : noise) v = rng.next_normal();
        const std::vector<double> filtered = bandpass(noise, bands[i].low, bands[i].high);
        auto row = set.sources.row_span(i);
        std::copy(filtered.begin(), filtered.end(), row.begin());
    }
    standardize_rows(set.sources);
    return set;
}

MixingMatrix make_mixing(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw ConfigError("make_mixing: need at least 2 channels");
    Rng rng(seed);
    MixingMatrix m;
    m.seed = seed;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Tensor a(n, n);
        rng.fill_uniform(a, -1.0, 1.0);
        if (condition_number(a) <= 20.0) {
            m.a = std::move(a);
            return m;
        }
    }
    throw NumericalError("make_mixing: no well-conditioned matrix after 1000 draws");
}

Observation mix(const SourceSet& s, const MixingMatrix& a) {
    const std::size_t n = s.n_components();
    if (a.a.rows() != n || a.a.cols() != n)
        throw DimensionError("mix: mixing matrix " + a.a.shape_str() + " does not match " +
                             std::to_string(n) + " sources");
    Observation obs;
    obs.source_seed = s.seed;
    obs.mixing_seed = a.seed;
    obs.length = s.length();
    obs.x = Tensor(n, s.length());
    // Plain triple loop: bit-reproducible across toolchains.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a.a(i, k);
            const double* src = s.sources.row_span(k).data();
            double* dst = obs.x.row_span(i).data();
            for (std::size_t t = 0; t < obs.length; ++t) dst[t] += aik * src[t];
        }
    return obs;
}

double condition_number(const Tensor& square) {
    const std::size_t n = square.rows();
    if (n != square.cols()) throw DimensionError("condition_number: matrix must be square");
    // g = a^T a, then cyclic Jacobi; singular values are sqrt(eig(g)).
    Tensor g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += square(k, i) * square(k, j);
            g(i, j) = s;
        }
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += g(p, q) * g(p, q);
        if (off < 1e-28) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (g(p, q) == 0.0) continue;
                const double theta = 0.5 * std::atan2(2.0 * g(p, q), g(q, q) - g(p, p));
                const double c = std::cos(theta), s = std::sin(theta);
                for (std::size_t k = 0; k < n; ++k) {
                    const double gkp = g(k, p), gkq = g(k, q);
                    g(k, p) = c * gkp - s * gkq;
                    g(k, q) = s * gkp + c * gkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double gpk = g(p, k), gqk = g(q, k);
                    g(p, k) = c * gpk - s * gqk;
                    g(q, k) = s * gpk + c * gqk;
                }
            }
    }
    double lo = g(0, 0), hi = g(0, 0);
    for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, g(i, i));
        hi = std::max(hi, g(i, i));
    }
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(hi / lo);
}

void standardize_rows(Tensor& m) {
    const std::size_t cols = m.cols();
    if (cols == 0) return;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row_span(r);
        double mean = 0.0;
        for (double v : row) mean += v;
        mean /= static_cast<double>(cols);
        double var = 0.0;
        for (double& v : row) {
            v -= mean;
            var += v * v;
        }
        var /= static_cast<double>(cols);
        if (var > 0.0) {
            const double inv = 1.0 / std::sqrt(var);
            for (double& v : row) v *= inv;
        }
    }
}

Tensor truncate_cols(const Tensor& m, std::size_t length) {
    if (length > m.cols())
        throw DimensionError("truncate_cols: requested " + std::to_string(length) +
                             " of " + std::to_string(m.cols()) + " columns");
    Tensor out(m.rows(), length);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto src = m.row_span(r);
        std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(length),
                  out.row_span(r).begin());
    }
    return out;
}

} // namespace skr::signals
