#ifndef MARWEIGHT_ERROR_HPP
#define MARWEIGHT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace marweight {

enum class errc {
  non_positive_mass,
  mass_sum_not_one,
  bad_length,
  invalid_tree,
  level_out_of_range,
  leaf_count_mismatch,
  non_positive_weight,
  exponent_out_of_range,
  index_out_of_range,
  not_adapted,
  invalid_stopping_time,
  too_many_stopping_times,
  empty_family,
  cap_exceeded,
  zero_denominator,
  degenerate_input,
  bad_spec,
  objective_evaluation_failure,
  parse_error,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::non_positive_mass: return "NonPositiveMass";
    case errc::mass_sum_not_one: return "MassSumNotOne";
    case errc::bad_length: return "BadLength";
    case errc::invalid_tree: return "InvalidTree";
    case errc::level_out_of_range: return "LevelOutOfRange";
    case errc::leaf_count_mismatch: return "LeafCountMismatch";
    case errc::non_positive_weight: return "NonPositiveWeight";
    case errc::exponent_out_of_range: return "ExponentOutOfRange";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::not_adapted: return "NotAdapted";
    case errc::invalid_stopping_time: return "InvalidStoppingTime";
    case errc::too_many_stopping_times: return "TooManyStoppingTimes";
    case errc::empty_family: return "EmptyFamily";
    case errc::cap_exceeded: return "CapExceeded";
    case errc::zero_denominator: return "ZeroDenominator";
    case errc::degenerate_input: return "DegenerateInput";
    case errc::bad_spec: return "BadSpec";
    case errc::objective_evaluation_failure: return "ObjectiveEvaluationFailure";
    case errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the `errc` codes.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

namespace detail {

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool condition, errc code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace detail
}  // namespace marweight

#endif
