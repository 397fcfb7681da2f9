// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXREC_MAT_HPP
#define MAXREC_MAT_HPP

#include <cstddef>
#include <vector>

namespace maxrec {

// Minimal dense row-major matrix. Used for the small mode-coupling matrices
// (order 16 or so) and for dense test oracles; not a linear algebra library.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

} // namespace maxrec

#endif
