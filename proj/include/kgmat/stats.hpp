#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace kgmat {

class LengthMismatchError : public std::invalid_argument {
 public:
  LengthMismatchError() : std::invalid_argument("correlation inputs differ in length or have fewer than 2 values") {}
};

class ZeroVarianceError : public std::domain_error {
 public:
  ZeroVarianceError() : std::domain_error("correlation undefined: an input is constant") {}
};

/// 1-based ranks, ties receive the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson r, clamped to [-1, 1]. Throws on mismatch or constant input.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson over average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

/// 2 r rho / (r + rho); 0 when r + rho <= 0.
double harmonic_mean(double r, double rho) noexcept;

double mean(std::span<const double> x);
double median(std::vector<double> x);

}  // namespace kgmat
