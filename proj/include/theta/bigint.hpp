#pragma once

// Exact integer matrices for Sp(n,Z) words. Entries grow far beyond 64 bits
// during reduction, hence arbitrary precision.

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace theta {

using BigInt = boost::multiprecision::cpp_int;

class IntMat {
public:
    IntMat() = default;
    IntMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    BigInt& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const BigInt& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    IntMat operator*(const IntMat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("IntMat: dimension mismatch in product");
        IntMat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const BigInt& aik = (*this)(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }

    IntMat operator-(const IntMat& o) const {
        IntMat r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }

    bool operator==(const IntMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    IntMat transposed() const {
        IntMat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    bool is_zero() const {
        for (const auto& v : a_)
            if (v != 0) return false;
        return true;
    }

    bool is_identity() const {
        if (rows_ != cols_) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
        return true;
    }

    Eigen::MatrixXd to_double() const {
        Eigen::MatrixXd m(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(i, j) = a_[static_cast<size_t>(i) * cols_ + j].convert_to<double>();
        return m;
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<BigInt> a_;
};

} // namespace theta
