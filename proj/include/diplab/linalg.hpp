#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "field.hpp"

// Vectors and matrices over F_q with exact arithmetic: inner products,
// elementwise ops, vector-by-matrix products, and Gaussian elimination
// returning the full affine solution set of a linear system.
namespace diplab {

class FieldVector {
public:
    // Zero vector of length k (k >= 1).
    FieldVector(Modulus m, std::size_t k) : elems_(k, FieldElement::zero(m))
    {
        if (k == 0) throw std::invalid_argument("FieldVector: length must be >= 1");
    }

    explicit FieldVector(std::vector<FieldElement> elems) : elems_(std::move(elems))
    {
        if (elems_.empty()) throw std::invalid_argument("FieldVector: length must be >= 1");
        for (const auto& e : elems_)
            if (!(e.modulus() == elems_.front().modulus()))
                throw std::invalid_argument("FieldVector: elements carry mixed moduli");
    }

    static FieldVector of(Modulus m, std::initializer_list<std::int64_t> vs)
    {
        std::vector<FieldElement> elems;
        elems.reserve(vs.size());
        for (auto v : vs) elems.push_back(FieldElement::reduce(v, m));
        return FieldVector(std::move(elems));
    }

    std::size_t size() const { return elems_.size(); }
    Modulus modulus() const { return elems_.front().modulus(); }

    const FieldElement& operator[](std::size_t i) const { return elems_.at(i); }
    void set(std::size_t i, FieldElement v)
    {
        if (!(v.modulus() == modulus()))
            throw std::invalid_argument("FieldVector::set: modulus mismatch");
        elems_.at(i) = v;
    }

    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }

    bool is_zero() const
    {
        for (const auto& e : elems_)
            if (!e.is_zero()) return false;
        return true;
    }

    // Canonical values as raw integers, for wire encoding.
    RawVec raw_values() const
    {
        RawVec out;
        out.reserve(elems_.size());
        for (const auto& e : elems_) out.push_back(e.value());
        return out;
    }

    friend bool operator==(const FieldVector&, const FieldVector&) = default;

private:
    std::vector<FieldElement> elems_;
};

namespace detail {

inline void check_same_shape(const FieldVector& a, const FieldVector& b, const char* what)
{
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(what) + ": length mismatch");
    if (!(a.modulus() == b.modulus()))
        throw std::invalid_argument(std::string(what) + ": modulus mismatch");
}

} // namespace detail

inline FieldVector operator+(const FieldVector& a, const FieldVector& b)
{
    detail::check_same_shape(a, b, "vector add");
    std::vector<FieldElement> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
    return FieldVector(std::move(out));
}

inline FieldVector operator-(const FieldVector& a, const FieldVector& b)
{
    detail::check_same_shape(a, b, "vector sub");
    std::vector<FieldElement> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
    return FieldVector(std::move(out));
}

inline FieldVector operator*(FieldElement c, const FieldVector& v)
{
    std::vector<FieldElement> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(c * e);
    return FieldVector(std::move(out));
}

inline FieldElement inner_product(const FieldVector& a, const FieldVector& b)
{
    detail::check_same_shape(a, b, "inner product");
    FieldElement acc = FieldElement::zero(a.modulus());
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Field membership check for raw payloads: accepts exactly the length-k
// vectors whose entries all lie in [0, q).
inline std::optional<FieldVector> to_field_vector(const RawVec& raw, std::size_t k, Modulus m)
{
    if (raw.size() != k || k == 0) return std::nullopt;
    std::vector<FieldElement> elems;
    elems.reserve(k);
    for (RawValue v : raw) {
        if (!is_field_value(v, m)) return std::nullopt;
        elems.emplace_back(static_cast<std::uint32_t>(v), m);
    }
    return FieldVector(std::move(elems));
}

inline FieldVector sample_vector(Rng& rng, Modulus m, std::size_t k)
{
    std::vector<FieldElement> elems;
    elems.reserve(k);
    for (std::size_t i = 0; i < k; ++i) elems.push_back(rng.sample(m));
    return FieldVector(std::move(elems));
}

class FieldMatrix {
public:
    FieldMatrix(Modulus m, std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, FieldElement::zero(m))
    {
        if (rows == 0 || cols == 0) throw std::invalid_argument("FieldMatrix: dimensions must be >= 1");
    }

    static FieldMatrix from_rows(Modulus m, std::initializer_list<std::initializer_list<std::int64_t>> rows)
    {
        const std::size_t nr = rows.size();
        if (nr == 0) throw std::invalid_argument("FieldMatrix: dimensions must be >= 1");
        const std::size_t nc = rows.begin()->size();
        FieldMatrix out(m, nr, nc);
        std::size_t r = 0;
        for (const auto& row : rows) {
            if (row.size() != nc) throw std::invalid_argument("FieldMatrix: ragged rows");
            std::size_t c = 0;
            for (auto v : row) out.set(r, c++, FieldElement::reduce(v, m));
            ++r;
        }
        return out;
    }

    static FieldMatrix identity(Modulus m, std::size_t n)
    {
        FieldMatrix out(m, n, n);
        for (std::size_t i = 0; i < n; ++i) out.set(i, i, FieldElement::one(m));
        return out;
    }

    // Matrix whose i-th column is columns[i]; all columns must agree in
    // length and modulus.
    static FieldMatrix from_columns(const std::vector<FieldVector>& columns)
    {
        if (columns.empty()) throw std::invalid_argument("FieldMatrix: dimensions must be >= 1");
        const std::size_t nr = columns.front().size();
        FieldMatrix out(columns.front().modulus(), nr, columns.size());
        for (std::size_t c = 0; c < columns.size(); ++c) {
            detail::check_same_shape(columns.front(), columns[c], "matrix from columns");
            for (std::size_t r = 0; r < nr; ++r) out.set(r, c, columns[c][r]);
        }
        return out;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Modulus modulus() const { return entries_.front().modulus(); }

    const FieldElement& at(std::size_t r, std::size_t c) const { return entries_.at(r * cols_ + c); }
    void set(std::size_t r, std::size_t c, FieldElement v)
    {
        if (!(v.modulus() == modulus()))
            throw std::invalid_argument("FieldMatrix::set: modulus mismatch");
        entries_.at(r * cols_ + c) = v;
    }

    FieldVector row(std::size_t r) const
    {
        std::vector<FieldElement> out;
        out.reserve(cols_);
        for (std::size_t c = 0; c < cols_; ++c) out.push_back(at(r, c));
        return FieldVector(std::move(out));
    }

    FieldVector column(std::size_t c) const
    {
        std::vector<FieldElement> out;
        out.reserve(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out.push_back(at(r, c));
        return FieldVector(std::move(out));
    }

    FieldMatrix transposed() const
    {
        FieldMatrix out(modulus(), cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out.set(c, r, at(r, c));
        return out;
    }

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

private:
    std::size_t rows_, cols_;
    std::vector<FieldElement> entries_;
};

inline FieldMatrix sample_matrix(Rng& rng, Modulus m, std::size_t rows, std::size_t cols)
{
    FieldMatrix out(m, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) out.set(r, c, rng.sample(m));
    return out;
}

// Row vector times matrix: element i of the result is the inner product of
// x with column i of Y.
inline FieldVector vec_mat_mul(const FieldVector& x, const FieldMatrix& Y)
{
    if (x.size() != Y.rows())
        throw std::invalid_argument("vec_mat_mul: dimension mismatch");
    if (!(x.modulus() == Y.modulus()))
        throw std::invalid_argument("vec_mat_mul: modulus mismatch");
    std::vector<FieldElement> out;
    out.reserve(Y.cols());
    for (std::size_t c = 0; c < Y.cols(); ++c) out.push_back(inner_product(x, Y.column(c)));
    return FieldVector(std::move(out));
}

// Outcome of solving A * x = b over F_q. `particular` is present unless the
// system is inconsistent; the nullspace basis spans all homogeneous
// solutions, so the full solution set is particular + span(basis).
struct SolutionSet {
    enum class Kind { Unique, Affine, Inconsistent };

    Kind kind;
    std::optional<FieldVector> particular;
    std::vector<FieldVector> nullspace_basis;
    std::size_t rank;

    friend bool operator==(const SolutionSet&, const SolutionSet&) = default;
};

namespace detail {

// In-place reduced row echelon form over the leftmost `elim_cols` columns.
// Pivot rule: scan columns left to right, take the first nonzero entry from
// the top, so identical inputs give identical echelon forms. Returns the
// pivot column indices.
inline std::vector<std::size_t> rref_in_place(std::vector<std::vector<FieldElement>>& w, std::size_t elim_cols)
{
    const std::size_t m = w.size();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < elim_cols && row < m; ++col) {
        std::size_t pr = row;
        while (pr < m && w[pr][col].is_zero()) ++pr;
        if (pr == m) continue;
        std::swap(w[pr], w[row]);
        const FieldElement scale = w[row][col].inv();
        for (auto& e : w[row]) e *= scale;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row || w[r][col].is_zero()) continue;
            const FieldElement factor = w[r][col];
            for (std::size_t c = 0; c < w[r].size(); ++c) w[r][c] -= factor * w[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace detail

// Gaussian elimination on the augmented system [A | b]. Degenerate systems
// are not an error: rank-deficient consistent systems come back as the full
// affine set, contradictory ones as Inconsistent.
inline SolutionSet solve(const FieldMatrix& A, const FieldVector& b)
{
    if (A.rows() != b.size())
        throw std::invalid_argument("solve: row count of A must equal length of b");
    if (!(A.modulus() == b.modulus()))
        throw std::invalid_argument("solve: modulus mismatch");

    const Modulus m = A.modulus();
    const std::size_t nrows = A.rows(), ncols = A.cols();
    std::vector<std::vector<FieldElement>> w(nrows, std::vector<FieldElement>(ncols + 1, FieldElement::zero(m)));
    for (std::size_t r = 0; r < nrows; ++r) {
        for (std::size_t c = 0; c < ncols; ++c) w[r][c] = A.at(r, c);
        w[r][ncols] = b[r];
    }

    const std::vector<std::size_t> pivots = detail::rref_in_place(w, ncols);
    const std::size_t rank = pivots.size();

    for (std::size_t r = rank; r < nrows; ++r)
        if (!w[r][ncols].is_zero())
            return SolutionSet{SolutionSet::Kind::Inconsistent, std::nullopt, {}, rank};

    FieldVector particular(m, ncols);
    for (std::size_t i = 0; i < rank; ++i) particular.set(pivots[i], w[i][ncols]);

    std::vector<FieldVector> basis;
    std::size_t next_pivot = 0;
    for (std::size_t col = 0; col < ncols; ++col) {
        if (next_pivot < rank && pivots[next_pivot] == col) {
            ++next_pivot;
            continue;
        }
        FieldVector v(m, ncols);
        v.set(col, FieldElement::one(m));
        for (std::size_t i = 0; i < rank; ++i) v.set(pivots[i], -w[i][col]);
        basis.push_back(std::move(v));
    }

    const auto kind = basis.empty() ? SolutionSet::Kind::Unique : SolutionSet::Kind::Affine;
    return SolutionSet{kind, std::move(particular), std::move(basis), rank};
}

inline std::size_t rank(const FieldMatrix& A)
{
    std::vector<std::vector<FieldElement>> w(A.rows(),
                                             std::vector<FieldElement>(A.cols(), FieldElement::zero(A.modulus())));
    for (std::size_t r = 0; r < A.rows(); ++r)
        for (std::size_t c = 0; c < A.cols(); ++c) w[r][c] = A.at(r, c);
    return detail::rref_in_place(w, A.cols()).size();
}

inline bool is_nonsingular(const FieldMatrix& A)
{
    if (A.rows() != A.cols())
        throw std::invalid_argument("is_nonsingular: matrix must be square");
    return rank(A) == A.rows();
}

} // namespace diplab
