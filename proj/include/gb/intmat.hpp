#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gb/errors.hpp"

namespace gb {

// Checked 64-bit integer arithmetic. Desk-scale inputs are bounded (|entry| <= 2^31),
// so any overflow here means the bound was violated.
int64_t checked_add(int64_t a, int64_t b);
int64_t checked_mul(int64_t a, int64_t b);

int64_t gcd64(int64_t a, int64_t b);
// Extended gcd: returns g = gcd(a,b) and x,y with a*x + b*y = g.
int64_t exgcd64(int64_t a, int64_t b, int64_t& x, int64_t& y);
// Nonnegative remainder of a mod m, m >= 1.
int64_t mod_pos(int64_t a, int64_t m);

// Dense integer matrix, row major.
class IntMat {
public:
    IntMat() : rows_(0), cols_(0) {}
    IntMat(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0) {}
    IntMat(int rows, int cols, std::vector<int64_t> data);

    static IntMat identity(int n);
    static IntMat diagonal(const std::vector<int64_t>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int64_t& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    int64_t operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    bool operator==(const IntMat& o) const = default;

    IntMat operator*(const IntMat& o) const;
    IntMat operator+(const IntMat& o) const;
    IntMat operator-(const IntMat& o) const;
    IntMat operator-() const;

    std::vector<int64_t> apply(const std::vector<int64_t>& v) const;
    IntMat transpose() const;
    // Horizontal concatenation [*this | o].
    IntMat hcat(const IntMat& o) const;
    std::vector<int64_t> col(int c) const;
    bool is_zero() const;

private:
    int rows_, cols_;
    std::vector<int64_t> data_;
};

struct SmithNormalForm {
    IntMat u;  // rows x rows, unimodular
    IntMat d;  // diagonal, d(i,i) >= 0 and d(i,i) | d(i+1,i+1)
    IntMat v;  // cols x cols, unimodular
};

// U * M * V = D. Total: never fails on in-bound input.
SmithNormalForm smith_normal_form(const IntMat& m);

// Basis of the integer lattice { x : M x = 0 }, as columns.
IntMat integer_kernel(const IntMat& m);

// One integer solution of M x = y, with the free SNF parameters set to zero,
// or nullopt when no solution exists.
std::optional<std::vector<int64_t>> integer_solve(const IntMat& m, const std::vector<int64_t>& y);

// Determinant via SNF; used to assert unimodularity in tests.
int64_t determinant(const IntMat& m);

}  // namespace gb
