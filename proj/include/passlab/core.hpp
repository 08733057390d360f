// SPDX-License-Identifier: Apache-2.0
#ifndef PASSLAB_CORE_HPP
#define PASSLAB_CORE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace passlab {

using cplx = std::complex<double>;

// Raised for malformed user input (config files, CLI arguments, bad file contents).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a guaranteed physical or numerical property fails at runtime.
struct PropertyViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Dense row-major real matrix, small sizes only.
struct RMat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    RMat() = default;
    RMat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
    std::size_t size() const { return a.size(); }
};

// Dense row-major complex matrix.
struct CMat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> a;

    CMat() = default;
    CMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    cplx& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    cplx at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    static CMat identity(std::size_t n) {
        CMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline CMat matmul(const CMat& A, const CMat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("matmul: shape mismatch");
    CMat C(A.rows, B.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            const cplx aik = A.at(i, k);
            for (std::size_t j = 0; j < B.cols; ++j) C.at(i, j) += aik * B.at(k, j);
        }
    return C;
}

inline CMat hermitian(const CMat& A) {
    CMat H(A.cols, A.rows);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) H.at(j, i) = std::conj(A.at(i, j));
    return H;
}

// Solves A X = B in place for square A (partial-pivot LU). Throws on singular A.
CMat solve_linear(CMat A, CMat B);

// printf-style message builder for exceptions and reports
template <typename... Args>
std::string strfmt(const char* fmt, Args... args) {
    const int n = std::snprintf(nullptr, 0, fmt, args...);
    std::string out(n > 0 ? static_cast<std::size_t>(n) : 0, '\0');
    std::snprintf(out.data(), out.size() + 1, fmt, args...);
    return out;
}

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

inline constexpr const char* kVersion = "0.1.0";

}  // namespace passlab

#endif
