#include "sine_thurston/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "sine_thurston/combinatorics.hpp"
#include "sine_thurston/diagnostics.hpp"
#include "sine_thurston/format.hpp"
#include "sine_thurston/oracle.hpp"
#include "sine_thurston/parallel.hpp"
#include "sine_thurston/scanner.hpp"
#include "sine_thurston/spider.hpp"

namespace sine_thurston::cli {
namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  long period = 1;
  long k0 = 0;
  std::string addresses;
  std::string itinerary_file;
  std::string lambda;
  double tol = 1e-12;
  int max_iter = 0;  // 0: command default
  std::string seed = "default";
  std::uint64_t seed_value = 0;
  std::string region = "0,0,4,4";
  std::string res = "256x256";
  int period_cap = 64;
  int bound = 1;
  bool solve_all = false;
  std::string out;
  std::string trace;
  std::string centers;
  unsigned threads = 0;
};

double parse_double(std::string_view text, const char* what) {
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw UsageError(std::string("malformed ") + what + ": '" + s + "'");
  }
  return v;
}

// Accepts "re", "re,im", "re+imi", "re-imi" and "imi".
Complex parse_lambda(const std::string& raw) {
  std::string s;
  for (char c : raw) {
    if (c != ' ') s += c;
  }
  if (s.empty()) throw UsageError("missing --lambda");
  if (const auto comma = s.find(','); comma != std::string::npos) {
    return {parse_double(s.substr(0, comma), "lambda"), parse_double(s.substr(comma + 1), "lambda")};
  }
  if (s.back() != 'i') return {parse_double(s, "lambda"), 0.0};
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_of = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(t, "lambda");
  };
  if (split == std::string::npos) return {0.0, imag_of(s)};
  return {parse_double(s.substr(0, split), "lambda"), imag_of(s.substr(split))};
}

std::vector<double> parse_reals(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) values.push_back(parse_double(piece, what));
  if (values.size() != count) {
    throw UsageError(std::string("expected ") + std::to_string(count) + " values for " + what);
  }
  return values;
}

std::pair<int, int> parse_resolution(std::string text) {
  for (char& c : text) {
    if (c == 'x' || c == 'X') c = ',';
  }
  const auto v = parse_reals(text, 2, "--res");
  if (v[0] < 1 || v[1] < 1 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]) || v[0] > 1e5 ||
      v[1] > 1e5) {
    throw UsageError("--res needs two positive integers");
  }
  return {static_cast<int>(v[0]), static_cast<int>(v[1])};
}

Itinerary itinerary_from(const RunConfig& cfg) {
  if (!cfg.itinerary_file.empty()) {
    std::ifstream in(cfg.itinerary_file);
    if (!in) throw std::ios_base::failure("cannot read " + cfg.itinerary_file);
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return parse_itinerary(line);
    }
    throw InvalidItinerary({"no itinerary in " + cfg.itinerary_file});
  }
  RawItinerary raw;
  raw.period = cfg.period;
  raw.k0 = cfg.k0;
  try {
    raw.addresses = parse_address_list(cfg.addresses);
  } catch (const std::invalid_argument& e) {
    throw InvalidItinerary({e.what()});
  }
  return validate_itinerary(raw);
}

SpiderOptions spider_options(const RunConfig& cfg) {
  SpiderOptions opts;
  opts.tol = cfg.tol;
  opts.max_iter = cfg.max_iter > 0 ? cfg.max_iter : 200;
  if (cfg.seed == "random") {
    opts.seed = SeedPolicy::random(cfg.seed_value);
  } else if (cfg.seed != "default") {
    throw UsageError("--seed must be 'default' or 'random'");
  }
  return opts;
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::ios_base::failure("cannot open " + path + " for writing");
  writer(file);
  file.flush();
  if (!file) throw std::ios_base::failure("failed writing " + path);
}

std::string optional_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string("n/a");
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool diagnose) {
  const Itinerary it = itinerary_from(cfg);
  const SpiderRun run = run_spider(it, spider_options(cfg));

  if (!cfg.trace.empty()) write_file(cfg.trace, [&](std::ostream& f) { write_trace_csv(f, run.trace); });

  out << "itinerary = " << format_itinerary(it) << '\n';
  out << "lambda = " << format_complex(run.result.lambda_star) << '\n';
  out << "status = " << to_string(run.status) << '\n';
  out << "iterations = " << run.result.iterations << '\n';
  out << "final_displacement = " << format_real(run.result.final_displacement) << '\n';
  if (run.certificate) {
    out << "orbit_residual = " << format_real(run.result.orbit_residual) << '\n';
    out << "exact_period = " << run.result.exact_period << '\n';
  }
  out << "contraction_rate = " << optional_real(run.result.contraction_rate) << '\n';

  if (diagnose) {
    const GeometryReport report = geometry_report(run.trace);
    write_report_table(out, report);
    if (!cfg.out.empty()) write_file(cfg.out, [&](std::ostream& f) { write_report_csv(f, report); });
  } else if (!cfg.out.empty() && run.certificate) {
    write_file(cfg.out, [&](std::ostream& f) { f << certificate_report(*run.certificate); });
  }
  if (run.status != SpiderStatus::kConverged) {
    err << "solve: " << to_string(run.status) << ": " << run.message << '\n';
    return kNotConverged;
  }
  return kSuccess;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const Complex lambda = parse_lambda(cfg.lambda);
  const Itinerary it = itinerary_from(cfg);
  const Certificate cert = certify_center(lambda, it);
  const std::string report = certificate_report(cert);
  out << "lambda = " << format_complex(lambda) << '\n' << report;
  if (!cfg.out.empty()) write_file(cfg.out, [&](std::ostream& f) { f << report; });
  return cert.all_pass() ? kSuccess : kNotConverged;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  const auto region_values = parse_reals(cfg.region, 4, "--region");
  const ScanRegion region{{region_values[0], region_values[1]}, region_values[2], region_values[3]};
  if (!(region.width > 0.0) || !(region.height > 0.0)) throw UsageError("--region needs positive width and height");
  const auto [nx, ny] = parse_resolution(cfg.res);
  ScanOptions opts;
  opts.max_iter = cfg.max_iter > 0 ? cfg.max_iter : 2000;
  opts.period_cap = cfg.period_cap;
  opts.threads = cfg.threads;

  const ScanGrid grid = scan_grid(region, nx, ny, opts);
  const auto centers = extract_centers(grid);
  if (!cfg.out.empty()) write_file(cfg.out, [&](std::ostream& f) { write_pgm(f, grid); });
  if (!cfg.centers.empty()) write_file(cfg.centers, [&](std::ostream& f) { write_centers_csv(f, centers); });

  std::size_t counts[3] = {0, 0, 0};
  for (const auto& c : grid.cells) ++counts[static_cast<int>(c.kind)];
  out << "cells: attracting=" << counts[0] << " escaped=" << counts[1] << " unresolved=" << counts[2]
      << '\n';
  for (const auto& c : centers) {
    out << "period " << c.period << " region of " << c.region_cells << " cells: ";
    if (c.refined) {
      out << "center " << format_complex(c.result.lambda_star)
          << (c.result.converged ? " certified" : " uncertified") << '\n';
    } else {
      out << "unrefined (" << c.note << ")\n";
    }
  }
  return kSuccess;
}

int cmd_enumerate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.period < 1 || cfg.period > 12) throw UsageError("--period must be in [1, 12] for enumerate");
  if (cfg.bound < 0 || cfg.bound > 50) throw UsageError("--K must be in [0, 50]");
  const auto catalog = enumerate_itineraries(static_cast<int>(cfg.period), cfg.bound);
  if (!cfg.solve_all) {
    for (const auto& it : catalog) out << format_itinerary(it) << '\n';
    return kSuccess;
  }

  const SpiderOptions opts = spider_options(cfg);
  std::vector<SpiderRun> runs(catalog.size());
  parallel_for(catalog.size(), cfg.threads, [&](std::size_t i) { runs[i] = run_spider(catalog[i], opts); });

  auto emit = [&](std::ostream& f) {
    f << "itinerary,converged,re_lambda,im_lambda,min_abs_lambda,min_separation,rate\n";
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      const SpiderRun& run = runs[i];
      const GeometryReport report = geometry_report(run.trace);
      f << '"' << format_itinerary(catalog[i]) << "\"," << (run.status == SpiderStatus::kConverged ? "true" : "false")
        << ',' << format_real(run.result.lambda_star.real()) << ',' << format_real(run.result.lambda_star.imag())
        << ',' << format_real(report.min_lambda) << ',' << format_real(report.min_separation) << ',';
      if (run.result.contraction_rate) f << format_real(*run.result.contraction_rate);
      f << '\n';
    }
  };
  if (cfg.out.empty()) {
    emit(out);
  } else {
    write_file(cfg.out, emit);
    std::size_t converged = 0;
    for (const auto& r : runs) converged += r.status == SpiderStatus::kConverged;
    out << catalog.size() << " itineraries, " << converged << " converged\n";
  }
  return kSuccess;
}

unsigned threads_from_environment() {
  const char* raw = std::getenv("SINE_THURSTON_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  unsigned value = 0;
  const std::string_view s(raw);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("SINE_THURSTON_THREADS must be a non-negative integer");
  }
  return value;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Centers of hyperbolic components of lambda sin(z) by pullback iteration", "sine-thurston"};
  app.set_config("--config", "", "flat `key = value` file with the same keys as the flags");
  app.allow_config_extras(false);
  app.add_option("command", cfg.command, "solve | verify | scan | enumerate | diagnose")
      ->required()
      ->check(CLI::IsMember({"solve", "verify", "scan", "enumerate", "diagnose"}));
  app.add_option("--period", cfg.period, "period m of the critical cycle");
  app.add_option("--k0", cfg.k0, "even anchor index, x0 = pi/2 + k0 pi");
  app.add_option("--addresses", cfg.addresses, "comma-separated inverse-branch addresses a_1..a_{m-1}");
  app.add_option("--itinerary-file", cfg.itinerary_file, "file whose first itinerary line is used");
  app.add_option("--lambda", cfg.lambda, "parameter to verify (re, re,im or a+bi)");
  app.add_option("--tol", cfg.tol, "displacement tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", cfg.max_iter, "iteration budget")->check(CLI::Range(1, 10'000'000));
  app.add_option("--seed", cfg.seed, "seed policy: default | random");
  app.add_option("--seed-value", cfg.seed_value, "random seed");
  app.add_option("--region", cfg.region, "scan region re,im,width,height");
  app.add_option("--res", cfg.res, "scan resolution NXxNY");
  app.add_option("--period-cap", cfg.period_cap, "largest detected cycle length")->check(CLI::Range(1, 4096));
  app.add_option("--K", cfg.bound, "address bound for enumerate");
  app.add_flag("--solve", cfg.solve_all, "solve every enumerated itinerary");
  app.add_option("--out", cfg.out, "output file (report, PGM or catalog CSV)");
  app.add_option("--trace", cfg.trace, "per-step trace CSV");
  app.add_option("--centers", cfg.centers, "centers CSV for scan");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    cfg.threads = threads_from_environment();
    if (cfg.command == "solve") return cmd_solve(cfg, out, err, false);
    if (cfg.command == "diagnose") return cmd_solve(cfg, out, err, true);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    if (cfg.command == "scan") return cmd_scan(cfg, out);
    return cmd_enumerate(cfg, out);
  } catch (const InvalidItinerary& e) {
    for (const auto& v : e.violations()) err << "error: " << v << '\n';
    return kInvalidInput;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

}  // namespace sine_thurston::cli
