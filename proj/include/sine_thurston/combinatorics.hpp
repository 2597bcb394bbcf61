#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sine_thurston/inverse_branches.hpp"

namespace sine_thurston {

/// Unchecked itinerary fields as they arrive from a user or a file.
struct RawItinerary {
  long period = 0;
  long k0 = 0;
  std::vector<long> addresses;
  std::optional<std::string> label;
};

/// Combinatorial model of a center: the critical cycle x0 -> x_{m-1} -> ... -> x1 -> x0
/// with x0 = pi/2 + k0 pi, where x_l is reached from x_{l-1} by the inverse branch of sin
/// with address a_l.
///
/// Only constructible through validate_itinerary().
class Itinerary {
 public:
  int period() const { return period_; }
  long k0() const { return k0_; }
  /// a_1 .. a_{m-1}; addresses()[l - 1] is a_l.
  const std::vector<long>& addresses() const { return addresses_; }
  const std::optional<std::string>& label() const { return label_; }

  /// x0 = pi/2 + k0 pi.
  double anchor() const;

  friend bool operator==(const Itinerary& a, const Itinerary& b) {
    return a.period_ == b.period_ && a.k0_ == b.k0_ && a.addresses_ == b.addresses_;
  }

 private:
  friend Itinerary validate_itinerary(const RawItinerary& raw);
  Itinerary() = default;

  int period_ = 1;
  long k0_ = 0;
  std::vector<long> addresses_;
  std::optional<std::string> label_;
};

/// Rejection carrying every violated invariant, in a fixed order.
class InvalidItinerary : public std::invalid_argument {
 public:
  explicit InvalidItinerary(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

Itinerary validate_itinerary(const RawItinerary& raw);

/// All itineraries of period m with k0 = 0 and addresses in [-K, K], lexicographic.
std::vector<Itinerary> enumerate_itineraries(int period, int bound);

/// Reads the itinerary of a center whose critical orbit closes with period m.
///
/// Throws std::domain_error when the orbit does not close within 1e-6 or an orbit
/// point sits within 1e-9 of a strip boundary.
Itinerary itinerary_of_parameter(Complex lambda, int period);

/// One-line text form: `m=<int> k0=<int> a=<ints,...> [label=<string>]`.
std::string format_itinerary(const Itinerary& it);

/// Parses the text form. The label, when present, runs to the end of the line.
/// Throws InvalidItinerary on malformed text or violated invariants.
Itinerary parse_itinerary(std::string_view line);

/// Parses a comma-separated list of integers ("" gives an empty list).
/// Throws std::invalid_argument on malformed input.
std::vector<long> parse_address_list(std::string_view text);

}  // namespace sine_thurston
