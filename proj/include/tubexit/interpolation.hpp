#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tubexit {

// Monotone cubic (Fritsch-Butland) interpolant on a uniform grid.  Preserves
// monotone runs of the data, which keeps nonincreasing exit-moment levels
// nonincreasing between nodes.
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    MonotoneCubic(double x0, double h, std::vector<double> values)
        : x0_(x0), h_(h), y_(std::move(values)) {
        if (y_.size() < 2)
            throw std::invalid_argument("MonotoneCubic: need at least two nodes");
        if (!(h_ > 0.0))
            throw std::invalid_argument("MonotoneCubic: spacing must be positive");
        build_slopes();
    }

    double x_min() const { return x0_; }
    double x_max() const { return x0_ + h_ * double(y_.size() - 1); }

    double operator()(double x) const {
        const std::size_t last = y_.size() - 1;
        double t = (x - x0_) / h_;
        if (t <= 0.0) return y_.front();
        if (t >= double(last)) return y_.back();
        auto i = static_cast<std::size_t>(t);
        if (i >= last) i = last - 1;
        const double f = t - double(i);
        // cubic Hermite basis on [x_i, x_{i+1}]
        const double f2 = f * f;
        const double f3 = f2 * f;
        const double h00 = 2.0 * f3 - 3.0 * f2 + 1.0;
        const double h10 = f3 - 2.0 * f2 + f;
        const double h01 = -2.0 * f3 + 3.0 * f2;
        const double h11 = f3 - f2;
        return h00 * y_[i] + h10 * h_ * d_[i] + h01 * y_[i + 1] + h11 * h_ * d_[i + 1];
    }

private:
    void build_slopes() {
        const std::size_t m = y_.size();
        d_.assign(m, 0.0);
        std::vector<double> sec(m - 1);
        for (std::size_t i = 0; i + 1 < m; ++i) sec[i] = (y_[i + 1] - y_[i]) / h_;
        for (std::size_t i = 1; i + 1 < m; ++i) {
            if (sec[i - 1] * sec[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                // Fritsch-Butland harmonic mean
                d_[i] = 2.0 * sec[i - 1] * sec[i] / (sec[i - 1] + sec[i]);
            }
        }
        d_.front() = endpoint_slope(sec[0], m > 2 ? sec[1] : sec[0]);
        d_.back() = endpoint_slope(sec[m - 2], m > 2 ? sec[m - 3] : sec[m - 2]);
    }

    static double endpoint_slope(double s_near, double s_far) {
        double d = 1.5 * s_near - 0.5 * s_far;
        if (d * s_near <= 0.0) return 0.0;
        if (std::abs(d) > 3.0 * std::abs(s_near)) return 3.0 * s_near;
        return d;
    }

    double x0_ = 0.0;
    double h_ = 1.0;
    std::vector<double> y_;
    std::vector<double> d_;
};

} // namespace tubexit
