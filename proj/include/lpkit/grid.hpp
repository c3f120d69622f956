#pragma once

// Sampled fields on a uniform periodic grid over [-L, L)^n, the Riemann-sum
// Fourier transform pair, and the quadrature descriptions (log-spaced t-grid,
// dyadic ranges) shared by every operator in the library.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpkit/fft.hpp"

namespace lpkit {

using cplx = std::complex<double>;

/// Point or frequency in R^n, n <= 2. Unused trailing coordinates are zero.
using Vec = std::array<double, 2>;

inline double norm(const Vec& v, int dim) {
    return dim == 1 ? std::abs(v[0]) : std::hypot(v[0], v[1]);
}

class grid_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Geometry of a periodic grid: dim axes of n samples each, spacing h = 2L/n.
struct Grid {
    int dim = 1;
    std::size_t n = 0;
    double half_length = 0.0;

    Grid() = default;
    Grid(int dim_, std::size_t n_, double half_length_)
        : dim(dim_), n(n_), half_length(half_length_) {
        if (dim != 1 && dim != 2)
            throw grid_error("grid dimension must be 1 or 2");
        if (n < 8 || (n & (n - 1)) != 0)
            throw grid_error("samples per axis must be a power of two >= 8, got " +
                             std::to_string(n));
        if (!(half_length > 0.0) || !std::isfinite(half_length))
            throw grid_error("half length must be positive and finite");
    }

    static Grid default_1d() { return {1, 4096, 32.0}; }
    static Grid default_2d() { return {2, 512, 16.0}; }

    double spacing() const { return 2.0 * half_length / static_cast<double>(n); }
    double frequency_step() const { return 1.0 / (2.0 * half_length); }
    std::size_t size() const { return dim == 1 ? n : n * n; }
    /// h^n, the Riemann-sum cell volume.
    double cell_volume() const { return std::pow(spacing(), dim); }
    /// (1/2L)^n, the spectral cell volume.
    double spectral_cell_volume() const { return std::pow(frequency_step(), dim); }

    /// Signed frequency index j in [-n/2, n/2) for FFT-order index k.
    long signed_index(std::size_t k) const {
        const long kk = static_cast<long>(k);
        const long nn = static_cast<long>(n);
        return kk < nn / 2 ? kk : kk - nn;
    }
    std::size_t wrap_index(long j) const {
        const long nn = static_cast<long>(n);
        return static_cast<std::size_t>(((j % nn) + nn) % nn);
    }

    /// Spatial point x_m = -L + m h for flat (row-major) index.
    Vec point(std::size_t flat) const {
        const double h = spacing();
        if (dim == 1) return {-half_length + static_cast<double>(flat) * h, 0.0};
        return {-half_length + static_cast<double>(flat / n) * h,
                -half_length + static_cast<double>(flat % n) * h};
    }
    /// Frequency xi_j = j/(2L) for flat index in FFT order.
    Vec frequency(std::size_t flat) const {
        const double d = frequency_step();
        if (dim == 1) return {static_cast<double>(signed_index(flat)) * d, 0.0};
        return {static_cast<double>(signed_index(flat / n)) * d,
                static_cast<double>(signed_index(flat % n)) * d};
    }
    std::vector<Vec> frequencies() const {
        std::vector<Vec> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = frequency(i);
        return out;
    }
    std::vector<Vec> points() const {
        std::vector<Vec> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = point(i);
        return out;
    }

    /// Largest representable |xi| along an axis (the Nyquist magnitude n/(4L)).
    double nyquist() const { return static_cast<double>(n / 2) * frequency_step(); }

    bool operator==(const Grid& o) const {
        return dim == o.dim && n == o.n && half_length == o.half_length;
    }
};

/// Complex samples f(x_m) on a Grid.
struct SampledField {
    Grid grid;
    std::vector<cplx> values;

    SampledField() = default;
    explicit SampledField(const Grid& g) : grid(g), values(g.size(), cplx{}) {}
    SampledField(const Grid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size())
            throw grid_error("value count does not match grid size");
        check_finite();
    }

    void check_finite() const {
        for (const auto& z : values)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw grid_error("sampled field contains non-finite values");
    }

    template <class F>
    static SampledField from_function(const Grid& g, F&& f) {
        SampledField out(g);
        for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = f(g.point(i));
        return out;
    }

    std::size_t size() const { return values.size(); }
    cplx& operator[](std::size_t i) { return values[i]; }
    const cplx& operator[](std::size_t i) const { return values[i]; }

    SampledField& operator+=(const SampledField& o) {
        check_same(o);
        for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
        return *this;
    }
    SampledField& operator-=(const SampledField& o) {
        check_same(o);
        for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
        return *this;
    }
    SampledField& operator*=(cplx c) {
        for (auto& z : values) z *= c;
        return *this;
    }
    friend SampledField operator+(SampledField a, const SampledField& b) { return a += b; }
    friend SampledField operator-(SampledField a, const SampledField& b) { return a -= b; }
    friend SampledField operator*(cplx c, SampledField a) { return a *= c; }

    void check_same(const SampledField& o) const {
        if (!(grid == o.grid)) throw grid_error("fields live on different grids");
    }
};

/// Coefficients F(xi_j) in FFT order, approximating the continuous transform.
struct SpectralField {
    Grid grid;
    std::vector<cplx> coeffs;

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size(), cplx{}) {}
    SpectralField(const Grid& g, std::vector<cplx> c) : grid(g), coeffs(std::move(c)) {
        if (coeffs.size() != grid.size())
            throw grid_error("coefficient count does not match grid size");
    }
    std::size_t size() const { return coeffs.size(); }
    cplx& operator[](std::size_t i) { return coeffs[i]; }
    const cplx& operator[](std::size_t i) const { return coeffs[i]; }
};

namespace detail {

// (-1)^(j0 + j1): the phase from the grid starting at -L rather than 0.
inline void apply_checkerboard(const Grid& g, std::vector<cplx>& data) {
    if (g.dim == 1) {
        for (std::size_t k = 1; k < data.size(); k += 2) data[k] = -data[k];
        return;
    }
    for (std::size_t r = 0; r < g.n; ++r)
        for (std::size_t c = 0; c < g.n; ++c)
            if ((r + c) & 1U) data[r * g.n + c] = -data[r * g.n + c];
}

}  // namespace detail

/// F(xi_j) = h^n sum_m f(x_m) exp(-2 pi i <x_m, xi_j>).
inline SpectralField forward_transform(const SampledField& f) {
    const Grid& g = f.grid;
    std::vector<cplx> data = f.values;
    detail::fft_inplace(data, g.dim, g.n, detail::Direction::forward);
    detail::apply_checkerboard(g, data);
    const double scale = g.cell_volume();
    for (auto& z : data) z *= scale;
    return {g, std::move(data)};
}

/// f(x_m) = (1/2L)^n sum_j F(xi_j) exp(2 pi i <x_m, xi_j>).
inline SampledField inverse_transform(const SpectralField& F) {
    const Grid& g = F.grid;
    std::vector<cplx> data = F.coeffs;
    detail::apply_checkerboard(g, data);
    detail::fft_inplace(data, g.dim, g.n, detail::Direction::backward);
    const double scale = g.spectral_cell_volume();
    for (auto& z : data) z *= scale;
    SampledField out(g);
    out.values = std::move(data);
    return out;
}

inline double l2_norm(const SampledField& f) {
    double s = 0.0;
    for (const auto& z : f.values) s += std::norm(z);
    return std::sqrt(s * f.grid.cell_volume());
}

inline double max_abs(const SampledField& f) {
    double m = 0.0;
    for (const auto& z : f.values) m = std::max(m, std::abs(z));
    return m;
}

/// Circular shift by an on-grid offset: result(x) = f(x - offset_cells * h).
inline SampledField shift_cells(const SampledField& f, long s0, long s1 = 0) {
    const Grid& g = f.grid;
    SampledField out(g);
    if (g.dim == 1) {
        for (std::size_t m = 0; m < g.n; ++m)
            out.values[g.wrap_index(static_cast<long>(m) + s0)] = f.values[m];
    } else {
        for (std::size_t r = 0; r < g.n; ++r)
            for (std::size_t c = 0; c < g.n; ++c)
                out.values[g.wrap_index(static_cast<long>(r) + s0) * g.n +
                           g.wrap_index(static_cast<long>(c) + s1)] = f.values[r * g.n + c];
    }
    return out;
}

/// Log-spaced midpoint rule for int_{t_min}^{t_max} g(t) dt/t.
///
/// Cells have constant ratio 2^(1/J); node j sits at the geometric centre
/// t_min 2^((j + 1/2)/J) and every node carries weight ln2/J. The cell count
/// is ceil(J log2(t_max/t_min)), so the covered interval ends at
/// t_min 2^(cells/J) >= t_max. A dilation by 2 maps the node set onto itself
/// shifted by J nodes.
class LogTimeGrid {
public:
    LogTimeGrid(double t_min, double t_max, int per_octave)
        : t_min_(t_min), t_max_(t_max), per_octave_(per_octave) {
        if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max))
            throw grid_error("log time grid needs 0 < t_min < t_max");
        if (per_octave < 1) throw grid_error("nodes per octave must be >= 1");
        const double cells = per_octave * std::log2(t_max / t_min);
        count_ = static_cast<std::size_t>(std::ceil(cells - 1e-9));
        if (count_ == 0) count_ = 1;
        nodes_.resize(count_);
        for (std::size_t j = 0; j < count_; ++j)
            nodes_[j] = t_min * std::exp2((static_cast<double>(j) + 0.5) / per_octave);
    }

    /// Default t-window for a grid: four spacings up to a quarter of the half-length.
    static LogTimeGrid for_grid(const Grid& g, int per_octave = 16) {
        return {4.0 * g.spacing(), g.half_length / 4.0, per_octave};
    }

    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    /// Upper end of the last cell.
    double t_end() const { return t_min_ * std::exp2(static_cast<double>(count_) / per_octave_); }
    int per_octave() const { return per_octave_; }
    std::size_t size() const { return count_; }
    double node(std::size_t j) const { return nodes_[j]; }
    const std::vector<double>& nodes() const { return nodes_; }
    double weight() const { return std::numbers::ln2 / per_octave_; }

    /// Same window, twice the nodes per octave.
    LogTimeGrid refined() const { return {t_min_, t_max_, 2 * per_octave_}; }

private:
    double t_min_, t_max_;
    int per_octave_;
    std::size_t count_ = 0;
    std::vector<double> nodes_;
};

/// w_q sum_j g(t_j).
template <class G>
cplx quadrature_sum(G&& g, const LogTimeGrid& tg) {
    cplx s{};
    for (double t : tg.nodes()) s += cplx(g(t));
    return s * tg.weight();
}

/// Inclusive integer range of dyadic scales 2^k.
struct DyadicRange {
    int k_min = 0;
    int k_max = 0;

    DyadicRange() = default;
    DyadicRange(int lo, int hi) : k_min(lo), k_max(hi) {
        if (lo > hi) throw grid_error("dyadic range is empty");
    }
    std::size_t size() const { return static_cast<std::size_t>(k_max - k_min + 1); }
    std::vector<int> scales() const {
        std::vector<int> out;
        for (int k = k_min; k <= k_max; ++k) out.push_back(k);
        return out;
    }
};

}  // namespace lpkit
