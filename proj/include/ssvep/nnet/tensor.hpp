#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ssvep/common.hpp"

namespace ssvep::nn {

// Dense rank-4 array in C order: (batch, filters, height/channels, width/time).
// Real is float in production and double in the gradient-check builds.
template <typename Real>
struct Tensor4 {
    int n = 0, f = 0, h = 0, w = 0;
    std::vector<Real> v;

    Tensor4() = default;
    Tensor4(int n_, int f_, int h_, int w_)
        : n(n_), f(f_), h(h_), w(w_),
          v(static_cast<std::size_t>(n_) * f_ * h_ * w_, Real(0)) {}

    std::size_t size() const { return v.size(); }

    Real& at(int i, int j, int k, int l) {
        return v[((static_cast<std::size_t>(i) * f + j) * h + k) * w + l];
    }
    Real at(int i, int j, int k, int l) const {
        return v[((static_cast<std::size_t>(i) * f + j) * h + k) * w + l];
    }

    // Pointer to the (filters, height, width) block of one sample.
    Real* sample(int i) { return v.data() + static_cast<std::size_t>(i) * f * h * w; }
    const Real* sample(int i) const { return v.data() + static_cast<std::size_t>(i) * f * h * w; }

    int sample_size() const { return f * h * w; }

    bool same_shape(const Tensor4& o) const {
        return n == o.n && f == o.f && h == o.h && w == o.w;
    }

    void fill(Real x) { std::fill(v.begin(), v.end(), x); }

    bool all_finite() const {
        for (Real x : v) {
            if (!std::isfinite(static_cast<double>(x))) return false;
        }
        return true;
    }
};

#ifndef NDEBUG
template <typename Real>
inline void debug_check_finite(const Tensor4<Real>& t, const char* where) {
    if (!t.all_finite()) throw Error(std::string("non-finite values after ") + where);
}
#else
template <typename Real>
inline void debug_check_finite(const Tensor4<Real>&, const char*) {}
#endif

}  // namespace ssvep::nn
