#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sine_thurston/cli.hpp"

namespace fs = std::filesystem;
using sine_thurston::cli::dispatch;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("sine_thurston_cli_" + std::to_string(std::rand()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

bool contains(const std::string& text, const std::string& piece) { return text.find(piece) != std::string::npos; }

}  // namespace

TEST_CASE("solve examples") {
  const Outcome fixed = run({"solve", "--period", "1", "--k0", "0"});
  CHECK(fixed.code == 0);
  CHECK(contains(fixed.out, "lambda = 1.5707963267948966 + 0i\n"));
  CHECK(contains(fixed.out, "status = converged\n"));

  TempDir dir;
  const Outcome two = run({"solve", "--period", "2", "--k0", "0", "--addresses", "1", "--trace", dir / "t.csv"});
  CHECK(two.code == 0);
  CHECK(contains(two.out, "lambda = 2.44332268625"));
  CHECK(contains(two.out, "exact_period = 2\n"));
  const std::string trace = slurp(dir / "t.csv");
  CHECK(trace.rfind("n,re_lambda,im_lambda,displacement,separation,ratio\n0,", 0) == 0);
  CHECK(std::count(trace.begin(), trace.end(), '\n') > 10);

  const Outcome odd = run({"solve", "--period", "2", "--k0", "1", "--addresses", "1"});
  CHECK(odd.code == 3);
  CHECK(contains(odd.err, "k0 must be even"));
}

TEST_CASE("solve reports non-convergence with exit code 2") {
  const Outcome capped = run({"solve", "--period", "3", "--addresses", "1,1", "--max-iter", "2"});
  CHECK(capped.code == 2);
  CHECK(contains(capped.out, "status = diverged"));
  CHECK(contains(capped.err, "diverged"));
}

TEST_CASE("verify examples") {
  const Outcome ok = run({"verify", "--lambda", "1.5707963267948966", "--period", "1", "--k0", "0"});
  CHECK(ok.code == 0);
  CHECK(contains(ok.out, "certified: yes"));

  const Outcome off = run({"verify", "--lambda", "2.0", "--period", "2", "--k0", "0", "--addresses", "1"});
  CHECK(off.code == 2);
  CHECK(contains(off.out, "(a) closure: FAIL"));

  CHECK(run({"verify", "--lambda", "abc"}).code == 3);
  CHECK(run({"verify", "--lambda", "2.4433226862534398+0i", "--period", "2", "--addresses", "1"}).code == 0);
  CHECK(run({"verify", "--lambda", "2.4433226862534398,0", "--period", "2", "--addresses", "1"}).code == 0);
}

TEST_CASE("enumerate examples") {
  const Outcome listing = run({"enumerate", "--period", "2", "--K", "1"});
  CHECK(listing.code == 0);
  CHECK(listing.out == "m=2 k0=0 a=-1\nm=2 k0=0 a=0\nm=2 k0=0 a=1\n");

  const Outcome one = run({"enumerate", "--period", "1", "--K", "5", "--solve"});
  CHECK(one.code == 0);
  CHECK(one.out ==
        "itinerary,converged,re_lambda,im_lambda,min_abs_lambda,min_separation,rate\n"
        "\"m=1 k0=0 a=\",true,1.5707963267948966,0,1.5707963267948966,0.51173009916247281,\n");

  const Outcome two = run({"enumerate", "--period", "2", "--K", "1", "--solve"});
  CHECK(two.code == 0);
  CHECK(contains(two.out, "\"m=2 k0=0 a=1\",true,2.44332268625"));
  CHECK(contains(two.out, "\"m=2 k0=0 a=0\","));
  CHECK(contains(two.out, "\"m=2 k0=0 a=-1\","));
}

TEST_CASE("diagnose prints the geometry report") {
  TempDir dir;
  const Outcome d = run({"diagnose", "--period", "2", "--addresses", "1", "--out", dir / "r.csv"});
  CHECK(d.code == 0);
  CHECK(contains(d.out, "min |lambda_n|"));
  CHECK(contains(d.out, "contraction rate"));
  CHECK(slurp(dir / "r.csv").rfind("metric,value\nmin_lambda,", 0) == 0);
}

TEST_CASE("scan writes PGM and centers") {
  TempDir dir;
  const Outcome s = run({"scan", "--region", "2,0,2,0.4", "--res", "64x16", "--period-cap", "4", "--out",
                         dir / "s.pgm", "--centers", dir / "c.csv"});
  CHECK(s.code == 0);
  const std::string pgm = slurp(dir / "s.pgm");
  CHECK(pgm.rfind("P5\n64 16\n255\n", 0) == 0);
  CHECK(pgm.size() == std::string("P5\n64 16\n255\n").size() + 64 * 16);
  const std::string centers = slurp(dir / "c.csv");
  CHECK(centers.rfind("re_lambda,im_lambda,period,residual,certified\n", 0) == 0);
  CHECK(contains(centers, "1.5707963267948966,0,1,"));
}

TEST_CASE("invalid input exits with 3") {
  CHECK(run({}).code == 3);
  CHECK(run({"frobnicate"}).code == 3);
  CHECK(run({"solve", "--period", "0"}).code == 3);
  CHECK(run({"solve", "--period", "2"}).code == 3);
  CHECK(run({"solve", "--period", "2", "--addresses", "x"}).code == 3);
  CHECK(run({"solve", "--tol", "-1"}).code == 3);
  CHECK(run({"solve", "--seed", "sometimes"}).code == 3);
  CHECK(run({"scan", "--res", "0x4"}).code == 3);
  CHECK(run({"scan", "--region", "1,2,3"}).code == 3);
  CHECK(run({"enumerate", "--period", "2", "--K", "-1"}).code == 3);
  CHECK(run({"solve", "--unknown-flag"}).code == 3);
}

TEST_CASE("I/O failures exit with 4") {
  CHECK(run({"solve", "--trace", "/nonexistent-dir/t.csv"}).code == 4);
  CHECK(run({"scan", "--res", "4x4", "--out", "/nonexistent-dir/s.pgm"}).code == 4);
  CHECK(run({"enumerate", "--period", "1", "--solve", "--out", "/nonexistent-dir/c.csv"}).code == 4);
  CHECK(run({"solve", "--itinerary-file", "/nonexistent-dir/it.txt"}).code == 4);
}

TEST_CASE("itinerary files") {
  TempDir dir;
  std::ofstream(dir / "it.txt") << "# catalog\n\nm=2 k0=0 a=1 label=basilica-like\n";
  const Outcome ok = run({"solve", "--itinerary-file", dir / "it.txt"});
  CHECK(ok.code == 0);
  CHECK(contains(ok.out, "itinerary = m=2 k0=0 a=1 label=basilica-like"));
  std::ofstream(dir / "bad.txt") << "m=2 k0=0 a=1 trailing\n";
  CHECK(run({"solve", "--itinerary-file", dir / "bad.txt"}).code == 3);
}

TEST_CASE("config file precedence") {
  TempDir dir;
  std::ofstream(dir / "run.conf") << "period = 2\naddresses = 1\nmax-iter = 2\n";
  const Outcome from_file = run({"solve", "--config", dir / "run.conf"});
  CHECK(from_file.code == 2);
  CHECK(contains(from_file.out, "itinerary = m=2 k0=0 a=1"));
  CHECK(contains(from_file.out, "iterations = 2\n"));

  const Outcome flag_wins = run({"solve", "--config", dir / "run.conf", "--max-iter", "200"});
  CHECK(flag_wins.code == 0);
  CHECK(contains(flag_wins.out, "lambda = 2.44332268625"));

  std::ofstream(dir / "bad.conf") << "period = 1\nflavour = mint\n";
  CHECK(run({"solve", "--config", dir / "bad.conf"}).code == 3);
}

TEST_CASE("reproducible artifacts") {
  TempDir dir;
  for (int pass = 0; pass < 2; ++pass) {
    const std::string tag = std::to_string(pass);
    CHECK(run({"solve", "--period", "3", "--addresses", "-1,1", "--seed", "random", "--seed-value", "42",
               "--trace", dir / ("t" + tag + ".csv")})
              .code == 0);
    CHECK(run({"scan", "--region", "0,0,6,6", "--res", "48x48", "--period-cap", "8", "--out",
               dir / ("s" + tag + ".pgm"), "--centers", dir / ("c" + tag + ".csv")})
              .code == 0);
    CHECK(run({"enumerate", "--period", "3", "--K", "1", "--solve", "--seed", "random", "--seed-value", "7",
               "--out", dir / ("e" + tag + ".csv")})
              .code == 0);
  }
  for (const char* stem : {"t", "s", "c", "e"}) {
    const std::string ext = std::string(stem) == "s" ? ".pgm" : ".csv";
    CAPTURE(stem);
    const std::string first = slurp(dir / (stem + std::string("0") + ext));
    CHECK_FALSE(first.empty());
    CHECK(first == slurp(dir / (stem + std::string("1") + ext)));
  }
  const std::string other_seed_trace = [&] {
    run({"solve", "--period", "3", "--addresses", "-1,1", "--seed", "random", "--seed-value", "43", "--trace",
         dir / "t9.csv"});
    return slurp(dir / "t9.csv");
  }();
  CHECK(other_seed_trace != slurp(dir / "t0.csv"));
}

TEST_CASE("thread count from the environment") {
  TempDir dir;
  ::setenv("SINE_THURSTON_THREADS", "1", 1);
  CHECK(run({"scan", "--region", "0,0,6,6", "--res", "32x32", "--out", dir / "one.pgm"}).code == 0);
  ::setenv("SINE_THURSTON_THREADS", "3", 1);
  CHECK(run({"scan", "--region", "0,0,6,6", "--res", "32x32", "--out", dir / "three.pgm"}).code == 0);
  CHECK(slurp(dir / "one.pgm") == slurp(dir / "three.pgm"));
  ::setenv("SINE_THURSTON_THREADS", "lots", 1);
  CHECK(run({"scan", "--res", "4x4"}).code == 3);
  ::unsetenv("SINE_THURSTON_THREADS");
}
