#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "common.hpp"

namespace ilpkit {

using Vec = std::vector<Int>;

// Dense row-major integer matrix. Dense is deliberate: every matrix this
// library touches is desk-scale (hundreds of rows), and the reductions
// index entries arbitrarily.
class Mat {
  public:
    Mat() : k_(0), l_(0) {}
    Mat(std::size_t rows, std::size_t cols) : k_(rows), l_(cols), a_(rows * cols, 0) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

    static Mat ones(std::size_t rows, std::size_t cols) {
        Mat m(rows, cols);
        std::fill(m.a_.begin(), m.a_.end(), 1);
        return m;
    }

    std::size_t rows() const { return k_; }
    std::size_t cols() const { return l_; }

    Int at(std::size_t i, std::size_t j) const { return a_[i * l_ + j]; }

    void set(std::size_t i, std::size_t j, Int v) {
        a_[i * l_ + j] = v;
        cached_ = false;
    }

    // max |a_ij|, 0 for empty matrices; cached, invalidated by set()
    Int max_abs() const {
        if (!cached_) {
            Int m = 0;
            for (Int v : a_) m = std::max(m, v < 0 ? -v : v);
            max_abs_ = m;
            cached_ = true;
        }
        return max_abs_;
    }

    bool operator==(const Mat& o) const { return k_ == o.k_ && l_ == o.l_ && a_ == o.a_; }

    const std::vector<Int>& data() const { return a_; }

  private:
    std::size_t k_, l_;
    std::vector<Int> a_;
    mutable Int max_abs_ = 0;
    mutable bool cached_ = false;
};

inline Int norm_inf(const Vec& v) {
    Int m = 0;
    for (Int x : v) m = std::max(m, x < 0 ? -x : x);
    return m;
}

inline Int norm_1(const Vec& v) {
    Int s = 0;
    for (Int x : v) s = checked_add(s, x < 0 ? -x : x);
    return s;
}

inline Vec mat_vec(const Mat& a, const Vec& x) {
    if (x.size() != a.cols()) throw Error(Error::dimension, "mat_vec: size mismatch");
    Vec r(a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Int s = 0;
        for (std::size_t j = 0; j < a.cols(); ++j)
            s = checked_add(s, checked_mul(a.at(i, j), x[j]));
        r[i] = s;
    }
    return r;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw Error(Error::dimension, "mat_mul: size mismatch");
    Mat r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t t = 0; t < a.cols(); ++t) {
            Int v = a.at(i, t);
            if (v == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                r.set(i, j, checked_add(r.at(i, j), checked_mul(v, b.at(t, j))));
        }
    return r;
}

}  // namespace ilpkit
