/// @file vector_ops.hpp
/// @brief Level-1 kernels. Every reduction runs left to right so results are
/// reproducible bit for bit.

#ifndef DDILU_VECTOR_OPS_HPP
#define DDILU_VECTOR_OPS_HPP

#include <cmath>
#include <span>

namespace ddilu {

inline double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * y[i];
    }
    return s;
}

inline double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

inline double norm_inf(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) {
        m = std::fmax(m, std::fabs(v));
    }
    return m;
}

/// y += a * x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += a * x[i];
    }
}

inline void scale(double a, std::span<double> x) {
    for (double& v : x) {
        v *= a;
    }
}

} // namespace ddilu

#endif // DDILU_VECTOR_OPS_HPP
