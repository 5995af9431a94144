#include "esstri/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "esstri/angles.hpp"
#include "esstri/certify.hpp"
#include "esstri/geom.hpp"
#include "esstri/group.hpp"
#include "esstri/io.hpp"
#include "esstri/moves.hpp"
#include "esstri/pi1.hpp"
#include "esstri/skeleton.hpp"

namespace esstri::cli {

namespace {

using nlohmann::json;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string pi_units(const mpq_class& q) { return angles::format_rational(q); }

std::string angle_rows(const angles::AngleVector& x) {
  std::ostringstream os;
  for (std::size_t t = 0; t * 3 < x.size(); ++t)
    os << "  tet " << t << ": " << pi_units(x[3 * t]) << " " << pi_units(x[3 * t + 1]) << " " << pi_units(x[3 * t + 2])
       << "\n";
  return os.str();
}

json angle_json(const angles::AngleVector& x) {
  json a = json::array();
  for (const auto& q : x) a.push_back(pi_units(q));
  return a;
}

geom::ExactShapes read_shapes(const std::string& path) {
  const std::string text = tri::read_file(path);
  try {
    if (auto raw = tri::parse_table_shapes(text)) return geom::parse_shapes(*raw);
  } catch (const tri::ParseError&) {
  }
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    line = line.substr(0, line.find('#'));
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(line);
  }
  return geom::parse_shapes(lines);
}

std::optional<geom::ExactShapes> embedded_shapes(const std::string& text) {
  try {
    if (auto raw = tri::parse_table_shapes(text)) return geom::parse_shapes(*raw);
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

std::string complex_text(const geom::Complex& z) {
  std::ostringstream os;
  os << std::setprecision(12) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

bool is_closed_one_vertex(const tri::Skeleton& sk) {
  return sk.classification == tri::Classification::closed_manifold_1vertex;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Essential and strongly essential edges of 3-manifold triangulations"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  long seed = 0;
  app.add_flag("--json", as_json, "JSON output");
  app.add_option("--seed", seed, "Accepted and ignored; every search is deterministic");

  std::string input;
  auto add_input = [&](CLI::App* sub) { sub->add_option("file", input, "Triangulation file (table or JSON)")->required(); };

  auto* validate = app.add_subcommand("validate", "Check gluing invariants (exit 0 iff valid)");
  add_input(validate);
  bool boundary = false;
  validate->add_flag("--boundary", boundary, "Accept unglued faces");

  auto* info = app.add_subcommand("info", "Skeleton: edge classes, links, classification");
  add_input(info);

  auto* angles_cmd = app.add_subcommand("angles", "Angle structures by exact LP");
  add_input(angles_cmd);
  bool semi = false, strict = false, taut = false;
  std::size_t limit = 10;
  auto* g_semi = angles_cmd->add_flag("--semi", semi, "Semi-angle structure (exit 0 iff feasible)");
  auto* g_strict = angles_cmd->add_flag("--strict", strict, "Strict angle structure (exit 0 iff t* > 0)");
  auto* g_taut = angles_cmd->add_flag("--taut", taut, "Enumerate taut structures (exit 0 iff one exists)");
  g_semi->excludes(g_strict)->excludes(g_taut);
  g_strict->excludes(g_taut);
  angles_cmd->add_option("--limit", limit, "Most taut structures listed")->capture_default_str();

  auto* pi1_cmd = app.add_subcommand("pi1", "Fundamental group presentation and homology");
  add_input(pi1_cmd);
  bool simplify = false, peripheral = false;
  pi1_cmd->add_flag("--simplify", simplify, "Tietze-simplify the presentation");
  pi1_cmd->add_flag("--peripheral", peripheral, "Print peripheral words of each torus cusp");

  auto* shapes_cmd = app.add_subcommand("shapes", "Gluing equations: exact verification or Newton");
  add_input(shapes_cmd);
  std::string verify_file;
  bool solve = false;
  double tol = 1e-12;
  std::size_t iters = 100;
  std::size_t radius = 0;
  auto* o_verify = shapes_cmd->add_option("--verify", verify_file, "Shape file (table fifth column or one per line)");
  auto* o_solve = shapes_cmd->add_flag("--solve", solve, "Newton from all shapes i");
  o_verify->excludes(o_solve);
  shapes_cmd->add_option("--tol", tol, "Newton residual tolerance")->capture_default_str();
  shapes_cmd->add_option("--iters", iters, "Newton iterations")->capture_default_str();
  shapes_cmd->add_option("--develop", radius, "With --verify: develop to this radius and scan edge endpoints");

  auto* move = app.add_subcommand("move", "Pachner 2-3 / 3-2 and 0-2 pillow moves");
  add_input(move);
  std::optional<std::size_t> two_three, three_two;
  std::string zero_two;
  std::string output;
  auto* m23 = move->add_option("--two-three", two_three, "Face class");
  auto* m32 = move->add_option("--three-two", three_two, "Edge class of degree 3");
  auto* m02 = move->add_option("--zero-two", zero_two, "E,F1,F2: edge class and two cycle positions");
  m23->excludes(m32)->excludes(m02);
  m32->excludes(m02);
  move->add_option("-o,--output", output, "Output file")->required();

  auto* cert = app.add_subcommand("certify", "Certify essential / strongly essential (exit 0 yes, 1 no, 2 unknown)");
  add_input(cert);
  bool essential = false, strong = false, all_sources = false;
  std::string budget_spec, methods, shape_file;
  std::size_t cert_radius = 3;
  auto* c_ess = cert->add_flag("--essential", essential, "Edges are essential");
  auto* c_strong = cert->add_flag("--strong", strong, "Strongly essential");
  c_ess->excludes(c_strong);
  const std::string budget_help = "Budget overrides key=value,... over " + pi1::format_budget(pi1::Budget{});
  cert->add_option("--budget", budget_spec, budget_help);
  cert->add_option("--methods", methods, "Subset of lp,homology,combinatorial,geometry,group");
  cert->add_option("--shapes", shape_file, "Exact shapes (default: the input's fifth column, if any)");
  cert->add_option("--radius", cert_radius, "Development radius for the geometric source")->capture_default_str();
  cert->add_flag("--all-sources", all_sources, "Consult every source, not just the first conclusive one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? 0 : exit_error;
  }

  try {
    if (validate->parsed()) {
      const std::string text = tri::read_file(input);
      auto t = tri::parse_triangulation(text);
      auto rep = tri::validate(t, boundary ? tri::GlueMode::boundary : tri::GlueMode::closed);
      if (as_json) {
        json j{{"valid", rep.ok()}, {"violations", json::array()}};
        for (const auto& v : rep.violations) j["violations"].push_back(v.message);
        out << j.dump(2) << "\n";
      } else {
        out << (rep.ok() ? "valid" : "invalid") << "\n";
        for (const auto& v : rep.violations) out << "  " << v.message << "\n";
      }
      return rep.ok() ? 0 : 1;
    }

    const std::string text = tri::read_file(input);
    const auto t = tri::parse_triangulation(text);

    if (info->parsed()) {
      auto s = tri::summarize(tri::build_skeleton(t));
      out << (as_json ? tri::summary_json(s) + "\n" : tri::summary_text(s));
      return 0;
    }

    if (angles_cmd->parsed()) {
      if (!semi && !strict && !taut) throw Failure("angles needs one of --semi, --strict, --taut");
      if (taut) {
        auto found = angles::enumerate_taut(t, limit);
        if (as_json) {
          json j{{"taut", json::array()}};
          for (const auto& x : found) j["taut"].push_back(angle_json(x));
          out << j.dump(2) << "\n";
        } else {
          out << "taut: " << found.size() << " found" << (found.size() == limit ? " (limit reached)" : "") << "\n";
          for (std::size_t i = 0; i < found.size(); ++i) {
            out << "structure " << i << ":\n" << angle_rows(found[i]);
          }
        }
        return found.empty() ? 1 : 0;
      }
      const auto mode = strict ? angles::Mode::strict : angles::Mode::semi;
      auto r = angles::solve_angle_lp(t, mode);
      const std::string name = strict ? "strict" : "semi";
      if (as_json) {
        json j{{"mode", name}, {"feasible", r.feasible}};
        if (r.optimum) j["optimum"] = pi_units(*r.optimum);
        if (r.witness) j["witness"] = angle_json(*r.witness);
        out << j.dump(2) << "\n";
      } else {
        out << name << ": " << (r.feasible ? "feasible" : "infeasible");
        if (r.optimum) out << " (t* = " << pi_units(*r.optimum) << ")";
        out << "\n";
        if (r.witness) out << angle_rows(*r.witness);
      }
      return r.feasible ? 0 : 1;
    }

    if (pi1_cmd->parsed()) {
      const auto sk = tri::build_skeleton(t);
      const bool closed = is_closed_one_vertex(sk);
      pi1::Presentation p;
      std::optional<pi1::SpinePresentation> sp;
      if (closed) {
        p = pi1::presentation_closed(t);
      } else {
        sp = pi1::presentation_spine(t, sk);
        p = sp->pres;
      }
      std::optional<pi1::Simplified> simp;
      if (simplify) simp = pi1::simplify_presentation(p);
      const auto& shown = simp ? simp->pres : p;
      std::vector<std::pair<std::size_t, std::array<pi1::Word, 2>>> periph;
      if (peripheral) {
        if (!sp) throw Failure("peripheral words need torus cusps");
        for (std::size_t v = 0; v < sk.vertex_count(); ++v) {
          if (sk.vertices[v].kind != tri::SurfaceKind::torus) continue;
          auto ps = pi1::peripheral_words(t, sk, *sp, v);
          std::array<pi1::Word, 2> w{ps.curves.at(0).word, ps.curves.at(1).word};
          if (simp)
            for (auto& x : w) x = pi1::map_word(*simp, x);
          periph.push_back({v, w});
        }
      }
      const auto h1 = pi1::format_invariants(pi1::homology(shown));
      if (as_json) {
        json j{{"kind", closed ? "edges" : "spine"}, {"generators", shown.generators}, {"relators", json::array()},
               {"homology", h1}};
        for (const auto& r : shown.relators) j["relators"].push_back(pi1::format_word(r));
        if (peripheral) {
          j["peripheral"] = json::array();
          for (const auto& [v, w] : periph)
            j["peripheral"].push_back({{"vertex", v}, {"words", {pi1::format_word(w[0]), pi1::format_word(w[1])}}});
        }
        out << j.dump(2) << "\n";
      } else {
        out << (closed ? "edge" : "spine") << " presentation: " << pi1::format_presentation(shown) << "\n";
        out << "H1: " << h1 << "\n";
        for (const auto& [v, w] : periph)
          out << "cusp " << v << ": " << pi1::format_word(w[0]) << ", " << pi1::format_word(w[1]) << "\n";
      }
      return 0;
    }

    if (shapes_cmd->parsed()) {
      if (solve) {
        auto r = geom::solve_shapes_newton(t, geom::FloatShapes(t.size(), geom::Complex(0, 1)), tol, iters);
        if (as_json) {
          json j{{"converged", r.shapes.has_value()}, {"iterations", r.iterations}, {"residual", r.residual}};
          if (r.shapes) {
            j["shapes"] = json::array();
            for (const auto& z : *r.shapes) j["shapes"].push_back({z.real(), z.imag()});
          } else {
            j["failure"] = r.failure;
          }
          out << j.dump(2) << "\n";
        } else if (r.shapes) {
          out << "converged after " << r.iterations << " iterations (residual " << r.residual << ")\n";
          for (std::size_t i = 0; i < r.shapes->size(); ++i) out << "  tet " << i << ": " << complex_text((*r.shapes)[i]) << "\n";
        } else {
          out << "no solution: " << r.failure << "\n";
        }
        return r.shapes ? 0 : 1;
      }
      geom::ExactShapes z;
      if (!verify_file.empty())
        z = read_shapes(verify_file);
      else if (auto e = embedded_shapes(text))
        z = *e;
      else
        throw Failure("shapes needs --verify FILE or --solve (the input has no shape column)");
      auto rep = geom::verify_shapes(t, z);
      std::optional<geom::DevelopReport> dev;
      if (radius > 0 && rep.ok()) dev = geom::develop_and_scan(t, z, radius);
      if (as_json) {
        json j{{"ok", rep.ok()}, {"flat", rep.flat}, {"edges", json::array()}, {"cusps", json::array()}};
        for (const auto& c : rep.edges)
          j["edges"].push_back({{"product", geom::to_string(c.product)}, {"argument_sum", c.argument_sum}, {"ok", c.ok()}});
        for (const auto& c : rep.cusps)
          j["cusps"].push_back({{"product", geom::to_string(c.product)}, {"argument_sum", c.argument_sum}, {"ok", c.ok()}});
        if (dev) {
          j["develop"] = {{"radius", dev->radius},
                          {"tets", dev->tets.size()},
                          {"coincident", dev->coincident.size()},
                          {"parallel_candidates", dev->parallel.size()},
                          {"conclusive_for_flat_clusters", dev->conclusive_for_flat_clusters}};
        }
        out << j.dump(2) << "\n";
      } else {
        for (std::size_t e = 0; e < rep.edges.size(); ++e)
          out << "edge " << e << ": product " << geom::to_string(rep.edges[e].product) << ", argument sum "
              << std::setprecision(12) << rep.edges[e].argument_sum << (rep.edges[e].ok() ? "" : "  FAIL") << "\n";
        for (std::size_t c = 0; c < rep.cusps.size(); ++c)
          out << "cusp equation " << c << ": product " << geom::to_string(rep.cusps[c].product)
              << (rep.cusps[c].ok() ? "" : "  FAIL") << "\n";
        out << "flat:";
        for (auto f : rep.flat) out << " " << f;
        out << "\n" << (rep.ok() ? "shapes verified" : "shapes rejected") << "\n";
        if (dev) {
          out << "developed " << dev->tets.size() << " tetrahedra to radius " << dev->radius << ": "
              << dev->coincident.size() << " coincident endpoints, " << dev->parallel.size()
              << " shared-endpoint candidates\n";
          for (const auto& c : dev->clusters)
            out << "flat cluster of " << c.tets.size() << " tets: " << (c.closes_up ? "closes up" : "open") << " ("
                << c.detail << ")\n";
        }
      }
      return rep.ok() ? 0 : 1;
    }

    if (move->parsed()) {
      moves::MoveResult r;
      if (two_three)
        r = moves::pachner_2_3(t, *two_three);
      else if (three_two)
        r = moves::pachner_3_2(t, *three_two);
      else if (!zero_two.empty()) {
        std::vector<std::size_t> v;
        std::istringstream is(zero_two);
        std::string part;
        while (std::getline(is, part, ',')) {
          std::size_t used = 0;
          v.push_back(std::stoul(part, &used));
          if (used != part.size()) throw Failure("--zero-two expects E,F1,F2");
        }
        if (v.size() != 3) throw Failure("--zero-two expects E,F1,F2");
        r = moves::pillow_0_2(t, v[0], {v[1], v[2]});
      }
      else
        throw Failure("move needs one of --two-three, --three-two, --zero-two");
      std::ofstream f(output);
      if (!f) throw Failure("cannot write " + output);
      f << (tri::detect_format(text) == tri::Format::json ? tri::to_json(r.tri) : tri::to_table(r.tri));
      if (as_json) {
        json j{{"tets", r.tri.size()}, {"created_tets", r.record.created_tets}, {"created_edges", r.record.created_edges}};
        out << j.dump(2) << "\n";
      } else {
        out << "wrote " << output << " (" << r.tri.size() << " tetrahedra)\n";
        out << "created edges:";
        for (auto e : r.record.created_edges) out << " " << e;
        out << "\n";
      }
      return 0;
    }

    if (cert->parsed()) {
      if (!essential && !strong) throw Failure("certify needs --essential or --strong");
      certify::Options opt;
      if (const char* env = std::getenv(budget_env)) opt.budget = pi1::parse_budget(env, opt.budget);
      if (!budget_spec.empty()) opt.budget = pi1::parse_budget(budget_spec, opt.budget);
      if (cert->count("--methods")) opt.methods = certify::parse_methods(methods);
      opt.shapes = shape_file.empty() ? embedded_shapes(text) : std::optional(read_shapes(shape_file));
      opt.radius = cert_radius;
      opt.all_sources = all_sources;
      auto v = strong ? certify::certify_strongly_essential(t, opt) : certify::certify_essential(t, opt);
      out << (as_json ? certify::verdict_json(v) + "\n" : certify::verdict_text(v, strong));
      const auto a = strong ? v.strongly_essential : v.essential;
      return a == pi1::Answer::yes ? 0 : a == pi1::Answer::no ? 1 : 2;
    }
  } catch (const tri::ParseError& e) {
    err << "error: " << input << ": " << e.what() << "\n";
    return exit_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_error;
  }
  return exit_error;
}

}  // namespace esstri::cli
