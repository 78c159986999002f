#include "dlstrata/linalg.hpp"

#include <utility>

namespace dls {

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

void Mat::append_row(const Elt* r) {
    a.insert(a.end(), r, r + cols);
    ++rows;
}

std::size_t rref(const FieldCtx& F, Mat& m, std::vector<std::size_t>* pivots) {
    if (pivots) pivots->clear();
    std::size_t r = 0;
    const std::size_t C = m.cols;
    for (std::size_t c = 0; c < C && r < m.rows; ++c) {
        std::size_t piv = r;
        while (piv < m.rows && m(piv, c) == 0) ++piv;
        if (piv == m.rows) continue;
        if (piv != r)
            for (std::size_t j = 0; j < C; ++j) std::swap(m(piv, j), m(r, j));
        Elt* pr = m.row(r);
        if (pr[c] != 1) {
            Elt iv = F.inv(pr[c]);
            for (std::size_t j = c; j < C; ++j) pr[j] = F.mul(pr[j], iv);
        }
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r) continue;
            Elt f = m(i, c);
            if (f == 0) continue;
            Elt nf = F.neg(f);
            Elt* ri = m.row(i);
            for (std::size_t j = c; j < C; ++j)
                if (pr[j]) ri[j] = F.add(ri[j], F.mul(nf, pr[j]));
        }
        if (pivots) pivots->push_back(c);
        ++r;
    }
    m.rows = r;
    m.a.resize(r * C);
    return r;
}

std::size_t rank(const FieldCtx& F, Mat m) { return rref(F, m); }

Mat nullspace(const FieldCtx& F, const Mat& m) {
    Mat r = m;
    std::vector<std::size_t> piv;
    rref(F, r, &piv);
    const std::size_t n = m.cols;
    std::vector<int> is_piv(n, -1);
    for (std::size_t i = 0; i < piv.size(); ++i) is_piv[piv[i]] = static_cast<int>(i);
    Mat out(0, n);
    std::vector<Elt> v(n);
    for (std::size_t f = 0; f < n; ++f) {
        if (is_piv[f] >= 0) continue;
        std::fill(v.begin(), v.end(), 0);
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = F.neg(r(i, f));
        out.append_row(v.data());
    }
    return out;
}

Mat mul(const FieldCtx& F, const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw FieldError("matrix shape mismatch");
    Mat r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t l = 0; l < x.cols; ++l) {
            Elt a = x(i, l);
            if (!a) continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                if (y(l, j)) r(i, j) = F.add(r(i, j), F.mul(a, y(l, j)));
        }
    return r;
}

Mat transpose(const Mat& m) {
    Mat t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

Mat stack(const Mat& top, const Mat& bottom) {
    if (top.rows && bottom.rows && top.cols != bottom.cols) throw FieldError("stack width mismatch");
    Mat r = top.rows ? top : Mat(0, bottom.cols);
    if (!top.rows) r.cols = bottom.cols;
    r.a.insert(r.a.end(), bottom.a.begin(), bottom.a.end());
    r.rows += bottom.rows;
    return r;
}

Elt bilinear(const FieldCtx& F, const Mat& g, const Elt* x, const Elt* y) {
    Elt s = 0;
    for (std::size_t i = 0; i < g.rows; ++i) {
        if (!x[i]) continue;
        const Elt* gi = g.row(i);
        for (std::size_t j = 0; j < g.cols; ++j)
            if (gi[j] && y[j]) s = F.add(s, F.mul(x[i], F.mul(gi[j], y[j])));
    }
    return s;
}

Mat inverse(const FieldCtx& F, const Mat& m) {
    const std::size_t n = m.rows;
    if (n == 0) return Mat(0, 0);
    Mat aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    std::vector<std::size_t> piv;
    rref(F, aug, &piv);
    if (aug.rows != n || piv.back() != n - 1) throw FieldError("singular matrix");
    Mat r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
    return r;
}

}  // namespace dls
