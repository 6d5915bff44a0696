#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using steptunnel::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "steptunnel_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("help mentions the unit convention") {
  const auto r = call({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("2m/hbar^2 = 1") != std::string::npos);
}

TEST_CASE("spectrum writes a CSV") {
  const auto out = scratch() / "s.csv";
  const auto r = call({"spectrum", "--mbp", "2,40,0.5", "--wells", "2", "--kappa", "0.1:7:100", "-o", out.string()});
  CHECK(r.code == 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "kappa,energy,T,lnT,R");
}

TEST_CASE("configuration errors exit with 1") {
  CHECK(call({}).code == 1);
  CHECK(call({"spectrum", "--kappa", "0.1:7:100", "-o", "x.csv"}).code == 1);
  const auto missing = call({"spectrum", "--mbp", "2,40,0.5", "--wells", "2", "-o", "x.csv"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("--kappa") != std::string::npos);
  CHECK(call({"spectrum", "--mbp", "2,40,0.5", "--wells", "2,3", "--kappa", "0.1:7:10", "-o", "x.csv"}).code == 1);
  CHECK(call({"spectrum", "--mbp", "2,40,0.5", "--wells", "2", "--kappa", "7:0.1:10", "-o", "x.csv"}).code == 1);
  CHECK(call({"spectrum", "--potential", "/nonexistent.json", "--kappa", "0.1:7:10", "-o", "x.csv"}).code == 1);
  CHECK(call({"alias", "--mbp", "8,40,0.5", "--wells", "1,2,3,4,5,6,7", "--all", "-o", scratch().string()}).code == 1);
  CHECK(call({"alias", "--mbp", "3,40,0.5", "--wells", "1,2", "--order", "1,3", "-o", scratch().string()}).code == 1);
}

TEST_CASE("numeric errors exit with 2") {
  const auto file = scratch() / "unequal.json";
  {
    std::ofstream f(file);
    f << R"({"kind":"explicit","x":[0,1],"v":[0,5,1]})";
  }
  const auto r = call({"spectrum", "--potential", file.string(), "--kappa", "0.1:3:10", "-o",
                       (scratch() / "u.csv").string()});
  CHECK(r.code == 2);
}

TEST_CASE("peaks prints a summary") {
  const auto r = call({"peaks", "--mbp", "4,40,0.5", "--wells", "2,2,2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("12 sharp peaks below sqrt(V0)") != std::string::npos);
  CHECK(r.out.find("beta=4") != std::string::npos);
  const auto single = call({"peaks", "--mbp", "1,40,0.5"});
  CHECK(single.out.find("0 sharp peaks below sqrt(V0)") != std::string::npos);
}

TEST_CASE("alias writes spectra and reports reversal pairs") {
  const auto dir = scratch() / "alias";
  const auto r = call({"alias", "--mbp", "3,40,0.5", "--wells", "1,2", "--all", "-o", dir.string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "spectrum_0.csv"));
  CHECK(fs::exists(dir / "spectrum_1.csv"));
  CHECK(r.out.find("reversal pairs: 1") != std::string::npos);
  const auto dup = call({"alias", "--mbp", "3,40,0.5", "--wells", "1,2", "--order", "1,2", "--order", "1,2", "-o",
                         dir.string()});
  CHECK(dup.out.find("duplicate") != std::string::npos);
}

TEST_CASE("scan2d writes grid, raster and overlay") {
  const auto dir = scratch();
  const auto r = call({"--threads", "2", "scan2d", "--mbp", "6,40,1", "--tau-prime", "1:5:5", "--base-tau", "1",
                       "--varied-index", "4", "--kappa", "0.2:6:30", "-o", (dir / "g.csv").string(), "--raster",
                       (dir / "g.pgm").string(), "--overlay", (dir / "o.csv").string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "g.pgm.txt"));
  CHECK(fs::exists(dir / "o.csv"));
  CHECK(call({"scan2d", "--mbp", "6,40,1", "--kappa", "0.2:6:30", "-o", (dir / "g.csv").string()}).code == 1);
  CHECK(call({"scan2d", "--mbp", "6,40,1", "--tau-prime", "1:5:5", "--varied-index", "6", "--kappa", "0.2:6:30",
              "-o", (dir / "g.csv").string()})
            .code == 1);
}

TEST_CASE("wavefunction and discretize") {
  const auto dir = scratch();
  const auto w = call({"wavefunction", "--mbp", "1,40,0.5", "--energy", "20", "--x", "-1:2:50", "--scale-to-barrier",
                       "-o", (dir / "w.csv").string()});
  CHECK(w.code == 0);
  std::ifstream in(dir / "w.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,reV,rePsi,imPsi,absPsi");
  CHECK(call({"wavefunction", "--mbp", "1,40,0.5", "--energy", "-1", "-o", (dir / "w.csv").string()}).code == 2);

  const auto d = call({"discretize", "--gaussian", "40,-4,4,201", "--steps", "32", "-o", (dir / "d.json").string()});
  CHECK(d.code == 0);
  const auto back = call({"spectrum", "--potential", (dir / "d.json").string(), "--kappa", "1:8:10", "-o",
                          (dir / "d.csv").string()});
  CHECK(back.code == 0);
  CHECK(call({"discretize", "--steps", "32", "-o", (dir / "d.json").string()}).code == 1);
}
