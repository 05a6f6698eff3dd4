#ifndef MARWEIGHT_SIMPLE_FUNCTION_HPP
#define MARWEIGHT_SIMPLE_FUNCTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "marweight/error.hpp"
#include "marweight/rational.hpp"

namespace marweight {

/// A real function on the leaves of a filtration tree (the finest atoms).
template <class T = double>
class basic_simple_function {
 public:
  using value_type = T;

  basic_simple_function() = default;
  explicit basic_simple_function(std::vector<T> values) : values_(std::move(values)) {}
  basic_simple_function(std::initializer_list<T> values) : values_(values) {}

  static basic_simple_function constant(std::size_t leaves, const T& c) {
    return basic_simple_function(std::vector<T>(leaves, c));
  }

  std::size_t size() const noexcept { return values_.size(); }
  const T& operator[](std::size_t leaf) const { return values_[leaf]; }
  T& operator[](std::size_t leaf) { return values_[leaf]; }

  const std::vector<T>& values() const noexcept { return values_; }
  std::span<const T> span() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](const T& x) { return x == T(0); });
  }

  friend bool operator==(const basic_simple_function&, const basic_simple_function&) = default;

 private:
  std::vector<T> values_;
};

/// A strictly positive simple function.
template <class T = double>
class basic_weight {
 public:
  basic_weight() = default;

  explicit basic_weight(basic_simple_function<T> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] > T(0))) {
        detail::fail(errc::non_positive_weight, "weight value at leaf " + std::to_string(i) + " is not positive");
      }
      if constexpr (std::is_floating_point_v<T>) {
        detail::require(std::isfinite(values_[i]), errc::non_positive_weight,
                        "weight value at leaf " + std::to_string(i) + " is not finite");
      }
    }
  }
  explicit basic_weight(std::vector<T> values) : basic_weight(basic_simple_function<T>(std::move(values))) {}
  basic_weight(std::initializer_list<T> values) : basic_weight(std::vector<T>(values)) {}

  static basic_weight unit(std::size_t leaves) { return basic_weight(std::vector<T>(leaves, T(1))); }

  std::size_t size() const noexcept { return values_.size(); }
  const T& operator[](std::size_t leaf) const { return values_[leaf]; }
  const basic_simple_function<T>& function() const noexcept { return values_; }
  operator const basic_simple_function<T>&() const noexcept { return values_; }

  friend bool operator==(const basic_weight&, const basic_weight&) = default;

 private:
  basic_simple_function<T> values_;
};

using simple_function = basic_simple_function<double>;
using weight = basic_weight<double>;
using exact_function = basic_simple_function<rational>;
using exact_weight = basic_weight<rational>;

/// Indicator of a leaf subset given as a sorted index list.
using leaf_set = std::vector<std::size_t>;

/// The bilinear exponent pair (p1, p2) together with everything derived from it.
class exponent_config {
 public:
  exponent_config(double p1, double p2) : p1_(p1), p2_(p2) {
    detail::require(p1 > 1 && std::isfinite(p1), errc::exponent_out_of_range, "p1 must lie in (1, inf)");
    detail::require(p2 > 1 && std::isfinite(p2), errc::exponent_out_of_range, "p2 must lie in (1, inf)");
    inv_p_ = 1.0 / p1 + 1.0 / p2;
    p_ = 1.0 / inv_p_;
  }

  double p1() const noexcept { return p1_; }
  double p2() const noexcept { return p2_; }
  /// 1/p = 1/p1 + 1/p2.
  double p() const noexcept { return p_; }
  double inv_p() const noexcept { return inv_p_; }
  double p1_conj() const noexcept { return p1_ / (p1_ - 1.0); }
  double p2_conj() const noexcept { return p2_ / (p2_ - 1.0); }
  /// p/p1 and p/p2; they sum to one.
  double share1() const noexcept { return p_ / p1_; }
  double share2() const noexcept { return p_ / p2_; }

  friend bool operator==(const exponent_config&, const exponent_config&) = default;

 private:
  double p1_;
  double p2_;
  double inv_p_;
  double p_;
};

namespace detail {

inline void require_same_size(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    fail(errc::leaf_count_mismatch,
         std::string(what) + " has " + std::to_string(actual) + " values, expected " + std::to_string(expected));
  }
}

}  // namespace detail

template <class T>
basic_simple_function<T> pointwise_product(const basic_simple_function<T>& f, const basic_simple_function<T>& g) {
  detail::require_same_size(f.size(), g.size(), "factor");
  std::vector<T> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] * g[i];
  return basic_simple_function<T>(std::move(out));
}

template <class T>
basic_simple_function<T> absolute(const basic_simple_function<T>& f) {
  std::vector<T> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = abs_value(f[i]);
  return basic_simple_function<T>(std::move(out));
}

inline simple_function power(const simple_function& f, double q) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::pow(std::fabs(f[i]), q);
  return simple_function(std::move(out));
}

/// f restricted to `set`, zero elsewhere.
template <class T>
basic_simple_function<T> restrict_to(const basic_simple_function<T>& f, const leaf_set& set) {
  std::vector<T> out(f.size(), T(0));
  for (auto leaf : set) {
    detail::require(leaf < f.size(), errc::index_out_of_range, "leaf index " + std::to_string(leaf));
    out[leaf] = f[leaf];
  }
  return basic_simple_function<T>(std::move(out));
}

/// f restricted to the leaves where `mask` is true.
template <class T>
basic_simple_function<T> restrict_to(const basic_simple_function<T>& f, const std::vector<bool>& mask) {
  detail::require_same_size(f.size(), mask.size(), "mask");
  std::vector<T> out(f.size(), T(0));
  for (std::size_t i = 0; i < f.size(); ++i)
    if (mask[i]) out[i] = f[i];
  return basic_simple_function<T>(std::move(out));
}

inline simple_function to_double(const exact_function& f) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = to_double(f[i]);
  return simple_function(std::move(out));
}

}  // namespace marweight

#endif
