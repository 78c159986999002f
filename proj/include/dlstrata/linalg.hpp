#pragma once

#include <cstddef>
#include <vector>

#include "dlstrata/gf.hpp"

namespace dls {

// Dense row-major matrix of field elements; the field is supplied per call.
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<Elt> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

    Elt& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    Elt operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    Elt* row(std::size_t i) { return a.data() + i * cols; }
    const Elt* row(std::size_t i) const { return a.data() + i * cols; }

    static Mat identity(std::size_t n);
    void append_row(const Elt* r);
    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

// Reduced row echelon form in place; zero rows are dropped. Returns rank.
std::size_t rref(const FieldCtx& F, Mat& m, std::vector<std::size_t>* pivots = nullptr);
std::size_t rank(const FieldCtx& F, Mat m);
// rows spanning {x : m * x^T = 0}
Mat nullspace(const FieldCtx& F, const Mat& m);
Mat mul(const FieldCtx& F, const Mat& x, const Mat& y);
Mat transpose(const Mat& m);
Mat stack(const Mat& top, const Mat& bottom);
// sum_i x_i g_ij y_j
Elt bilinear(const FieldCtx& F, const Mat& g, const Elt* x, const Elt* y);
// inverse of a square matrix; throws FieldError when singular
Mat inverse(const FieldCtx& F, const Mat& m);

}  // namespace dls
