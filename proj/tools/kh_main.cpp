// kh: Khovanov homology of framed unoriented link diagrams given as PD text.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "kh/bracket.hpp"
#include "kh/les.hpp"
#include "kh/torus_oracle.hpp"

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::stringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int default_threads() {
  if (const char* env = std::getenv("KH_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

void print_table(const kh::HomologyTable& t, const std::string& format, bool classical) {
  if (format == "json")
    std::cout << (classical ? kh::render_json(t, "i", "j") : kh::render_json(t));
  else if (format == "csv")
    std::cout << (classical ? kh::render_csv(t, "i", "j") : kh::render_csv(t));
  else
    std::cout << (classical ? kh::render_table(t, "j", "i") : kh::render_table(t));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Khovanov homology of framed unoriented links"};
  app.require_subcommand(1);

  std::string compute_file, compute_format = "table", orient_file;
  bool classical = false, dump_complex = false;
  int threads = default_threads();
  CLI::App* compute = app.add_subcommand("compute", "homology of a diagram");
  compute->add_option("file", compute_file, "PD file, - for stdin")->required();
  compute->add_option("--format", compute_format, "table, json or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  compute->add_flag("--classical", classical,
                    "regrade to the classical (i, j) bigrading using the writhe");
  compute->add_option("--orient", orient_file,
                      "orientation file of O lines; defaults to a traversal orientation");
  compute->add_option("--parallel", threads, "worker threads, or the KH_THREADS variable")
      ->check(CLI::PositiveNumber);
  compute->add_flag("--dump-complex", dump_complex,
                    "print the chain complex generators and differentials instead");

  int torus_n = 1;
  bool torus_direct = false, torus_check = false;
  std::string torus_format = "table";
  CLI::App* torus = app.add_subcommand("torus", "homology of the closed two-strand braid T(2,n)");
  torus->add_option("n", torus_n, "crossing count of the standard diagram")
      ->required()
      ->check(CLI::PositiveNumber);
  torus->add_flag("--direct", torus_direct, "compute from the diagram instead of the closed form");
  torus->add_flag("--check", torus_check, "compute both and compare");
  torus->add_option("--format", torus_format, "table, json or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  torus->add_option("--parallel", threads, "worker threads, or the KH_THREADS variable")
      ->check(CLI::PositiveNumber);

  std::string bracket_file, bracket_format = "text";
  CLI::App* bracket = app.add_subcommand("bracket", "Kauffman bracket of a diagram");
  bracket->add_option("file", bracket_file, "PD file, - for stdin")->required();
  bracket->add_option("--format", bracket_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  std::string les_file, les_format = "text";
  int les_crossing = 0;
  CLI::App* les = app.add_subcommand(
      "les", "long exact sequence of the smoothings at one crossing, with exactness check");
  les->add_option("file", les_file, "PD file, - for stdin")->required();
  les->add_option("--crossing", les_crossing, "crossing index to resolve")->required();
  les->add_option("--format", les_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  std::string check_file;
  CLI::App* check = app.add_subcommand("check", "internal consistency checks on a diagram");
  check->add_option("file", check_file, "PD file, - for stdin")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (compute->parsed()) {
      kh::LinkDiagram d = kh::parse_pd(slurp(compute_file));
      kh::BigradedComplex cx = kh::build_complex(d);
      if (dump_complex) {
        std::cout << kh::debug_dump(cx);
        return 0;
      }
      kh::HomologyTable t = kh::compute_homology(cx, threads);
      if (classical) {
        kh::OrientedDiagram od = orient_file.empty()
                                     ? kh::orient_by_traversal(d)
                                     : kh::oriented(d, kh::parse_orientation(slurp(orient_file)));
        t = kh::classical_table(t, kh::writhe(od));
      }
      print_table(t, compute_format, classical);
      return 0;
    }

    if (torus->parsed()) {
      if (torus_check) {
        kh::HomologyTable direct =
            kh::compute_homology(kh::build_complex(kh::torus_diagram(torus_n)), threads);
        if (!kh::tables_equal(direct, kh::torus_kh(torus_n))) {
          std::cout << "MISMATCH\ncomputed:\n"
                    << kh::render_table(direct) << "closed form:\n"
                    << kh::render_table(kh::torus_kh(torus_n));
          return 1;
        }
        std::cout << "computed homology matches the closed form for n = " << torus_n << '\n';
        return 0;
      }
      kh::HomologyTable t =
          torus_direct ? kh::compute_homology(kh::build_complex(kh::torus_diagram(torus_n)), threads)
                       : kh::torus_kh(torus_n);
      print_table(t, torus_format, false);
      return 0;
    }

    if (bracket->parsed()) {
      kh::LaurentPoly p = kh::bracket_state_sum(kh::parse_pd(slurp(bracket_file)));
      if (bracket_format == "json")
        std::cout << p.to_json() << '\n';
      else
        std::cout << p.to_string() << '\n';
      return 0;
    }

    if (les->parsed()) {
      kh::LinkDiagram d = kh::parse_pd(slurp(les_file));
      if (les_crossing < 0 || les_crossing >= d.crossing_count())
        throw std::invalid_argument("crossing index out of range");
      kh::LESReport report = kh::verify_les_exact(d, les_crossing);
      std::cout << (les_format == "json" ? kh::render_les_json(report) : kh::render_les(report));
      return report.all_exact ? 0 : 1;
    }

    if (check->parsed()) {
      kh::LinkDiagram d = kh::parse_pd(slurp(check_file));
      kh::validate(d);
      std::cout << "crossings " << d.crossing_count() << ", free loops " << d.free_loops << '\n';

      bool ok = true;
      auto line = [&ok](bool pass, const std::string& what) {
        std::cout << (pass ? "ok: " : "FAIL: ") << what << '\n';
        ok = ok && pass;
      };

      kh::BigradedComplex cx = kh::build_complex(d);
      line(kh::verify_dd_zero(cx), "differential squares to zero");
      kh::LaurentPoly br = kh::bracket_state_sum(d);
      line(kh::euler_characteristic(cx) == br, "Euler characteristic equals the bracket");
      bool skein = true;
      for (int v = 0; v < d.crossing_count(); ++v) skein = skein && kh::satisfies_skein(d, v);
      line(skein, "skein relation holds at every crossing");
      std::cout << "writhe " << kh::writhe(kh::orient_by_traversal(d))
                << " under a traversal orientation\n";
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
