#include "sine_thurston/combinatorics.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace sine_thurston {
namespace {

constexpr double kClosureTolerance = 1e-6;
constexpr double kBoundaryTolerance = 1e-9;

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& part : parts) {
    if (!out.empty()) out += "; ";
    out += part;
  }
  return out;
}

long parse_long(std::string_view text, std::string_view what) {
  long value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::invalid_argument("malformed integer for " + std::string(what) + ": '" +
                                std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

double Itinerary::anchor() const { return kHalfPi + static_cast<double>(k0_) * kPi; }

InvalidItinerary::InvalidItinerary(std::vector<std::string> violations)
    : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

Itinerary validate_itinerary(const RawItinerary& raw) {
  std::vector<std::string> violations;
  if (raw.period < 1) {
    violations.push_back("period must be positive");
  } else if (raw.period > 1'000'000) {
    violations.push_back("period too large");
  }
  if (raw.k0 % 2 != 0) violations.push_back("k0 must be even");
  if (raw.period >= 1 && static_cast<long>(raw.addresses.size()) != raw.period - 1) {
    const long expected = raw.period - 1;
    violations.push_back("expected " + std::to_string(expected) +
                         (expected == 1 ? " address" : " addresses") + ", got " +
                         std::to_string(raw.addresses.size()));
  }
  if (!violations.empty()) throw InvalidItinerary(std::move(violations));

  Itinerary it;
  it.period_ = static_cast<int>(raw.period);
  it.k0_ = raw.k0;
  it.addresses_ = raw.addresses;
  it.label_ = raw.label;
  return it;
}

std::vector<Itinerary> enumerate_itineraries(int period, int bound) {
  if (period < 1 || bound < 0) {
    throw std::invalid_argument("enumerate_itineraries: need period >= 1 and bound >= 0");
  }
  std::vector<Itinerary> out;
  RawItinerary raw;
  raw.period = period;
  raw.addresses.assign(static_cast<std::size_t>(period - 1), -bound);
  // Odometer over [-K, K]^(m-1), last digit fastest.
  while (true) {
    out.push_back(validate_itinerary(raw));
    int pos = period - 2;
    while (pos >= 0 && raw.addresses[static_cast<std::size_t>(pos)] == bound) {
      raw.addresses[static_cast<std::size_t>(pos)] = -bound;
      --pos;
    }
    if (pos < 0) break;
    ++raw.addresses[static_cast<std::size_t>(pos)];
  }
  return out;
}

Itinerary itinerary_of_parameter(Complex lambda, int period) {
  if (period < 1) throw std::invalid_argument("itinerary_of_parameter: period must be >= 1");
  if (!is_finite(lambda) || lambda == Complex(0.0)) {
    throw std::invalid_argument("itinerary_of_parameter: lambda must be finite and nonzero");
  }
  // Every even-index critical point maps to lambda, so the forward orbit
  // z_j = G^j(x0) for j >= 1 does not depend on k0. z_j is the label x_{m-j}.
  std::vector<Complex> orbit{Complex(kHalfPi, 0.0)};
  for (int j = 0; j < period; ++j) {
    const Complex next = lambda * std::sin(orbit.back());
    if (!is_finite(next)) throw std::domain_error("itinerary_of_parameter: orbit overflow");
    orbit.push_back(next);
  }
  const Complex closing = orbit.back();
  const long k = std::lround((closing.real() - kHalfPi) / kPi);
  const Complex anchor(kHalfPi + static_cast<double>(k) * kPi, 0.0);
  if (k % 2 != 0 || std::abs(closing - anchor) >= kClosureTolerance) {
    throw std::domain_error("itinerary_of_parameter: critical orbit does not close with period " +
                            std::to_string(period));
  }

  RawItinerary raw;
  raw.period = period;
  raw.k0 = k;
  for (int l = 1; l < period; ++l) {
    const Complex point = orbit[static_cast<std::size_t>(period - l)];
    if (strip_boundary_gap(point) < kBoundaryTolerance) {
      throw std::domain_error("itinerary_of_parameter: orbit point on a strip boundary");
    }
    raw.addresses.push_back(strip_index(point));
  }
  return validate_itinerary(raw);
}

std::string format_itinerary(const Itinerary& it) {
  std::ostringstream out;
  out << "m=" << it.period() << " k0=" << it.k0() << " a=";
  for (std::size_t i = 0; i < it.addresses().size(); ++i) {
    if (i > 0) out << ',';
    out << it.addresses()[i];
  }
  if (it.label()) out << " label=" << *it.label();
  return out.str();
}

std::vector<long> parse_address_list(std::string_view text) {
  std::vector<long> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto piece = trim(text.substr(start, comma == std::string_view::npos ? text.size() - start
                                                                               : comma - start));
    out.push_back(parse_long(piece, "address"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Itinerary parse_itinerary(std::string_view line) {
  line = trim(line);
  RawItinerary raw;
  bool have_m = false, have_k0 = false, have_a = false;
  std::vector<std::string> problems;

  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto token_end = std::min(line.find_first_of(" \t", pos), line.size());
    const auto token = line.substr(pos, token_end - pos);
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidItinerary({"unexpected text '" + std::string(token) + "'"});
    }
    const auto key = token.substr(0, eq);
    try {
      if (key == "label") {
        raw.label = std::string(trim(line.substr(pos + eq + 1)));
        break;
      }
      const auto value = token.substr(eq + 1);
      if (key == "m" && !have_m) {
        raw.period = parse_long(value, "m");
        have_m = true;
      } else if (key == "k0" && !have_k0) {
        raw.k0 = parse_long(value, "k0");
        have_k0 = true;
      } else if (key == "a" && !have_a) {
        raw.addresses = parse_address_list(value);
        have_a = true;
      } else {
        throw InvalidItinerary({"unexpected field '" + std::string(token) + "'"});
      }
    } catch (const InvalidItinerary&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw InvalidItinerary({e.what()});
    }
    pos = line.find_first_not_of(" \t", token_end);
    if (pos == std::string_view::npos) break;
  }
  if (!have_m) problems.push_back("missing field m");
  if (!have_k0) problems.push_back("missing field k0");
  if (!have_a) problems.push_back("missing field a");
  if (!problems.empty()) throw InvalidItinerary(std::move(problems));
  return validate_itinerary(raw);
}

}  // namespace sine_thurston
