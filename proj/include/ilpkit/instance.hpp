#pragma once

#include <optional>
#include <vector>

#include "matrix.hpp"

namespace ilpkit {

// Feasibility instance A x = b, lower <= x <= upper, x integer.
// lower defaults to all zeros and upper to unbounded (nullopt per
// coordinate), which is the standard form every reduction emits.
struct IlpInstance {
    Mat a;
    Vec b;
    Vec lower;                              // size cols
    std::vector<std::optional<Int>> upper;  // size cols, nullopt = +infinity
    std::optional<Vec> objective;

    IlpInstance() = default;
    IlpInstance(Mat a_, Vec b_) : a(std::move(a_)), b(std::move(b_)) {
        lower.assign(a.cols(), 0);
        upper.assign(a.cols(), std::nullopt);
        validate();
    }

    std::size_t rows() const { return a.rows(); }
    std::size_t cols() const { return a.cols(); }

    bool standard_form() const {
        for (std::size_t j = 0; j < cols(); ++j)
            if (lower[j] != 0 || upper[j].has_value()) return false;
        return true;
    }

    void validate() const {
        if (b.size() != a.rows()) throw Error(Error::dimension, "instance: |b| != rows");
        if (lower.size() != a.cols()) throw Error(Error::dimension, "instance: |lower| != cols");
        if (upper.size() != a.cols()) throw Error(Error::dimension, "instance: |upper| != cols");
        if (objective && objective->size() != a.cols())
            throw Error(Error::dimension, "instance: |objective| != cols");
        for (std::size_t j = 0; j < cols(); ++j)
            if (upper[j] && *upper[j] < lower[j])
                throw Error(Error::dimension, "instance: empty bound interval");
    }

    bool in_bounds(const Vec& x) const {
        if (x.size() != cols()) return false;
        for (std::size_t j = 0; j < cols(); ++j) {
            if (x[j] < lower[j]) return false;
            if (upper[j] && x[j] > *upper[j]) return false;
        }
        return true;
    }

    bool satisfies(const Vec& x) const { return in_bounds(x) && mat_vec(a, x) == b; }
};

struct Solution {
    Vec x;
    std::vector<std::size_t> support;  // indices j with x_j != 0, ascending

    static Solution of(Vec x) {
        Solution s;
        s.x = std::move(x);
        for (std::size_t j = 0; j < s.x.size(); ++j)
            if (s.x[j] != 0) s.support.push_back(j);
        return s;
    }
};

}  // namespace ilpkit
