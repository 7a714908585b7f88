#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "mogpsa/errors.hpp"

namespace mogpsa {

/// Symmetric band matrix stored as its lower band in LAPACK column layout:
/// entry (i, j) with j <= i <= j + kd lives at data[(i - j) + j * (kd + 1)].
/// Only one triangle is stored, so the matrix is symmetric by construction.
class BandedSymmetric {
public:
    BandedSymmetric() = default;

    BandedSymmetric(std::size_t dim, std::size_t half_bandwidth)
        : dim_(dim), kd_(half_bandwidth), data_((half_bandwidth + 1) * dim, 0.0) {}

    std::size_t dim() const noexcept { return dim_; }
    std::size_t half_bandwidth() const noexcept { return kd_; }

    double operator()(std::size_t i, std::size_t j) const
    {
        if (i < j) std::swap(i, j);
        if (i >= dim_ || i - j > kd_) return 0.0;
        return data_[(i - j) + j * (kd_ + 1)];
    }

    /// Adds v to entries (i, j) and (j, i).
    void add(std::size_t i, std::size_t j, double v)
    {
        if (i < j) std::swap(i, j);
        if (i >= dim_ || i - j > kd_)
            throw InvalidInput("banded add outside the stored band");
        data_[(i - j) + j * (kd_ + 1)] += v;
    }

    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const
    {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
        for (std::size_t j = 0; j < dim_; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            y[jj] += data_[j * (kd_ + 1)] * x[jj];
            for (std::size_t i = j + 1; i < dim_ && i - j <= kd_; ++i) {
                const double a = data_[(i - j) + j * (kd_ + 1)];
                const auto ii = static_cast<Eigen::Index>(i);
                y[ii] += a * x[jj];
                y[jj] += a * x[ii];
            }
        }
        return y;
    }

    Eigen::MatrixXd to_dense() const
    {
        const auto n = static_cast<Eigen::Index>(dim_);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t j = 0; j < dim_; ++j)
            for (std::size_t i = j; i < dim_ && i - j <= kd_; ++i) {
                const double a = data_[(i - j) + j * (kd_ + 1)];
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a;
                m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = a;
            }
        return m;
    }

    /// Raw lower-band storage, suitable for LAPACK 'L' band routines.
    const std::vector<double>& lower_band() const noexcept { return data_; }

private:
    std::size_t dim_ = 0;
    std::size_t kd_ = 0;
    std::vector<double> data_;
};

} // namespace mogpsa
